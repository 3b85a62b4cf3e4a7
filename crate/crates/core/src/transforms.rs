//! Projections and partial sums for the harmonic, classical, and Sobolev
//! families, the smooth cut-off operator, and the commutation identities
//! between partial derivatives / Laplacians and the partial sums.

use std::collections::BTreeMap;

use crate::ballbasis::{ball_basis, ball_norm, basis_indices, BasisIndex};
use crate::ballfun::{inner_l2, BallPoly};
use crate::harmonics::{harmonic_dim, sph_eval, HarmonicIndex};
use crate::quadrature::BallQuadrature;
use crate::sobolev::{q_basis, q_norm, sobolev_inner, SobolevParams};
use crate::special::gamma;
use crate::{Error, Result};

/// Which orthogonal family a coefficient table belongs to.
#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    Harmonic,
    Classical { mu: f64 },
    Sobolev { s: u32, lambdas: Vec<f64> },
}

impl Family {
    fn label(&self) -> String {
        match self {
            Family::Harmonic => "harmonic".into(),
            Family::Classical { mu } => format!("classical(mu={mu})"),
            Family::Sobolev { s, .. } => format!("sobolev(s={s})"),
        }
    }
}

/// Finitely supported coefficient table over basis indices.
#[derive(Clone, Debug)]
pub struct SpectralCoeffs {
    pub family: Family,
    pub d: usize,
    pub table: BTreeMap<BasisIndex, f64>,
}

impl SpectralCoeffs {
    /// CSV with columns `family,n,j,ell,value`, deterministic order.
    pub fn write_csv<W: std::io::Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "family,n,j,ell,value")?;
        let label = self.family.label();
        for (idx, v) in &self.table {
            writeln!(w, "{label},{},{},{},{:.16e}", idx.n, idx.j, idx.ell, v)?;
        }
        Ok(())
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.table.keys().map(|i| i.n).max()
    }
}

/// Coefficients of f against {P^{mu,k}_{j,ell}: k <= n}, exact for
/// BallPoly input.
pub fn project_classical(f: &BallPoly, mu: f64, n: u32) -> SpectralCoeffs {
    let d = f.d();
    let mut table = BTreeMap::new();
    for k in 0..=n {
        for idx in basis_indices(d, k) {
            let p = ball_basis(mu, idx, d).expect("valid index");
            let c = inner_l2(f, &p, mu) / ball_norm(mu, k, idx.j, d).expect("valid norm");
            if c != 0.0 {
                table.insert(idx, c);
            }
        }
    }
    SpectralCoeffs {
        family: Family::Classical { mu },
        d,
        table,
    }
}

/// Same coefficients for a callable integrand, through the discrete grid.
///
/// The weighted inner product is taken as
/// `<f,g>_mu = (b_d^0/b_d^mu) sum w f g (1-|x|^2)^mu`; the caller must
/// supply a grid exact enough for the integrand (grids with q.n < n are
/// rejected).
pub fn project_classical_fn<F>(f: F, mu: f64, n: u32, q: &BallQuadrature) -> Result<SpectralCoeffs>
where
    F: Fn(&[f64]) -> f64,
{
    if (q.n as u32) < n {
        return Err(Error::GridTooCoarse {
            need: n as usize,
            got: q.n,
        });
    }
    let d = q.d;
    let hd = d as f64 / 2.0;
    // b_d^0 / b_d^mu
    let bratio = gamma(mu + hd + 1.0) / (gamma(mu + 1.0) * gamma(hd + 1.0));
    let fvals: Vec<f64> = q.points.iter().map(|p| f(&p[..d])).collect();
    let mut table = BTreeMap::new();
    for k in 0..=n {
        for idx in basis_indices(d, k) {
            let p = ball_basis(mu, idx, d)?;
            let mut acc = 0.0;
            for ((pt, &w), &fv) in q.points.iter().zip(&q.weights).zip(&fvals) {
                let x = &pt[..d];
                let u: f64 = x.iter().map(|v| v * v).sum();
                let wmu = (1.0 - u).max(0.0).powf(mu);
                acc += w * fv * p.eval(x) * wmu;
            }
            let c = bratio * acc / ball_norm(mu, k, idx.j, d)?;
            if c != 0.0 {
                table.insert(idx, c);
            }
        }
    }
    Ok(SpectralCoeffs {
        family: Family::Classical { mu },
        d,
        table,
    })
}

/// Harmonic coefficients of the boundary trace of a BallPoly, degrees <= n.
pub fn project_harmonic(f: &BallPoly, n: u32) -> SpectralCoeffs {
    let d = f.d();
    let mut table = BTreeMap::new();
    for ((m, ell), v) in f.boundary_trace() {
        if m <= n && v != 0.0 {
            table.insert(BasisIndex { n: m, j: 0, ell }, v);
        }
    }
    SpectralCoeffs {
        family: Family::Harmonic,
        d,
        table,
    }
}

/// Harmonic coefficients of a callable on the sphere, degrees <= n, via
/// the angular grid of order max(n, grid_n).
pub fn project_harmonic_fn<F>(g: F, n: u32, d: usize, grid_n: usize) -> Result<SpectralCoeffs>
where
    F: Fn(&[f64]) -> f64,
{
    let grid = crate::harmonics::sphere_grid(d, grid_n.max(n as usize))?;
    let gvals: Vec<f64> = grid.iter().map(|(xi, _)| g(&xi[..d])).collect();
    let mut table = BTreeMap::new();
    for m in 0..=n {
        for ell in 1..=harmonic_dim(d, m)? {
            let idx = HarmonicIndex::new(d, m, ell)?;
            let mut acc = 0.0;
            for ((xi, w), &gv) in grid.iter().zip(&gvals) {
                acc += w * gv * sph_eval(idx, &xi[..d]);
            }
            if acc != 0.0 {
                table.insert(BasisIndex { n: m, j: 0, ell }, acc);
            }
        }
    }
    Ok(SpectralCoeffs {
        family: Family::Harmonic,
        d,
        table,
    })
}

/// Coefficients of f against {Q^{-s,k}_{j,ell}: k <= n}, exact for
/// BallPoly input.
pub fn project_sobolev(f: &BallPoly, p: &SobolevParams, n: u32) -> SpectralCoeffs {
    let d = f.d();
    let mut table = BTreeMap::new();
    for k in 0..=n {
        for idx in basis_indices(d, k) {
            let q = q_basis(p, idx, d).expect("valid index");
            let c = sobolev_inner(f, &q, p) / q_norm(p, k, idx.j, d);
            if c != 0.0 {
                table.insert(idx, c);
            }
        }
    }
    SpectralCoeffs {
        family: Family::Sobolev {
            s: p.s,
            lambdas: p.lambdas.clone(),
        },
        d,
        table,
    }
}

/// Sobolev coefficients (s = 1) of a non-polynomial integrand. The caller
/// supplies the gradient; no numerical differentiation happens here.
pub fn project_sobolev_fn_s1<F, G>(
    d: usize,
    lambda0: f64,
    n: u32,
    f: F,
    grad_f: G,
    q: &BallQuadrature,
) -> Result<SpectralCoeffs>
where
    F: Fn(&[f64]) -> f64,
    G: Fn(&[f64]) -> [f64; 3],
{
    if (q.n as u32) < n {
        return Err(Error::GridTooCoarse {
            need: n as usize,
            got: q.n,
        });
    }
    let p = SobolevParams::new(1, vec![lambda0])?;
    let grads: Vec<[f64; 3]> = q.points.iter().map(|pt| grad_f(&pt[..d])).collect();
    let sphere_fvals: Vec<f64> = q.sphere.iter().map(|(xi, _)| f(&xi[..d])).collect();
    let mut table = BTreeMap::new();
    for k in 0..=n {
        for idx in basis_indices(d, k) {
            let qb = q_basis(&p, idx, d)?;
            let qmono = qb.to_monomials();
            let qgrad: Vec<_> = (0..d).map(|i| qmono.derivative(i)).collect();
            let mut ball = 0.0;
            for ((pt, &w), gf) in q.points.iter().zip(&q.weights).zip(&grads) {
                let x = &pt[..d];
                let mut dot = 0.0;
                for i in 0..d {
                    dot += gf[i] * qgrad[i].eval(x);
                }
                ball += w * dot;
            }
            let mut sphere = 0.0;
            for ((xi, w), &fv) in q.sphere.iter().zip(&sphere_fvals) {
                sphere += w * fv * qb.eval(&xi[..d]);
            }
            let c = (ball + lambda0 * sphere) / q_norm(&p, k, idx.j, d);
            if c != 0.0 {
                table.insert(idx, c);
            }
        }
    }
    Ok(SpectralCoeffs {
        family: Family::Sobolev {
            s: 1,
            lambdas: vec![lambda0],
        },
        d,
        table,
    })
}

/// Sobolev coefficients (s = 2) of a non-polynomial integrand; the caller
/// supplies the Laplacian.
pub fn project_sobolev_fn_s2<F, L>(
    d: usize,
    lambda0: f64,
    n: u32,
    f: F,
    lap_f: L,
    q: &BallQuadrature,
) -> Result<SpectralCoeffs>
where
    F: Fn(&[f64]) -> f64,
    L: Fn(&[f64]) -> f64,
{
    if (q.n as u32) < n {
        return Err(Error::GridTooCoarse {
            need: n as usize,
            got: q.n,
        });
    }
    let p = SobolevParams::new(2, vec![lambda0])?;
    let lap_vals: Vec<f64> = q.points.iter().map(|pt| lap_f(&pt[..d])).collect();
    let sphere_fvals: Vec<f64> = q.sphere.iter().map(|(xi, _)| f(&xi[..d])).collect();
    let mut table = BTreeMap::new();
    for k in 0..=n {
        for idx in basis_indices(d, k) {
            let qb = q_basis(&p, idx, d)?;
            let lap_qb = qb.laplacian();
            let mut ball = 0.0;
            for ((pt, &w), &lv) in q.points.iter().zip(&q.weights).zip(&lap_vals) {
                ball += w * lv * lap_qb.eval(&pt[..d]);
            }
            let mut sphere = 0.0;
            for ((xi, w), &fv) in q.sphere.iter().zip(&sphere_fvals) {
                sphere += w * fv * qb.eval(&xi[..d]);
            }
            let c = (ball + lambda0 * sphere) / q_norm(&p, k, idx.j, d);
            if c != 0.0 {
                table.insert(idx, c);
            }
        }
    }
    Ok(SpectralCoeffs {
        family: Family::Sobolev {
            s: 2,
            lambdas: vec![lambda0],
        },
        d,
        table,
    })
}

/// The fixed admissible cut-off: 1 on [0,1], 0 on [2,inf), and
/// `g(2-t) / (g(2-t) + g(t-1))` with `g(tau) = exp(-1/tau)` in between.
pub fn cutoff_eval(t: f64) -> f64 {
    assert!(t >= 0.0);
    if t <= 1.0 {
        1.0
    } else if t >= 2.0 {
        0.0
    } else {
        let g = |tau: f64| if tau > 0.0 { (-1.0 / tau).exp() } else { 0.0 };
        let a = g(2.0 - t);
        a / (a + g(t - 1.0))
    }
}

/// Reconstruct the partial sum `sum_k eta(k/n) proj_k f` as a BallPoly;
/// without a cut-off this is the plain degree-n partial sum.
pub fn partial_sum(c: &SpectralCoeffs, n: u32, eta: Option<&dyn Fn(f64) -> f64>) -> BallPoly {
    let mut out = BallPoly::zero(c.d);
    for (&idx, &v) in &c.table {
        let w = match eta {
            None => {
                if idx.n > n {
                    0.0
                } else {
                    1.0
                }
            }
            Some(eta) => eta(idx.n as f64 / n as f64),
        };
        if w == 0.0 || v == 0.0 {
            continue;
        }
        let basis = match &c.family {
            Family::Harmonic => {
                BallPoly::solid_harmonic(HarmonicIndex::new(c.d, idx.n, idx.ell).unwrap())
            }
            Family::Classical { mu } => ball_basis(*mu, idx, c.d).expect("valid index"),
            Family::Sobolev { s, lambdas } => {
                let p = SobolevParams::new(*s, lambdas.clone()).expect("valid params");
                q_basis(&p, idx, c.d).expect("valid index")
            }
        };
        out = out.add_scaled(&basis, w * v);
    }
    out
}

/// Exact partial derivative of a BallPoly, by round trip through the
/// monomial representation and re-projection onto the mu = 0 basis.
pub fn derivative(f: &BallPoly, i: usize) -> BallPoly {
    let d = f.d();
    assert!(i < d);
    let deg = match f.total_degree() {
        None | Some(0) => return BallPoly::zero(d),
        Some(deg) => deg,
    };
    assert!(
        deg <= 32,
        "monomial round trip is limited to moderate degrees, got {deg}"
    );
    let dmono = f.to_monomials().derivative(i);
    let out_deg = (deg - 1) as u32;
    let grid = crate::quadrature::build_grid(d, out_deg.max(1) as usize).expect("grid");
    let mut out = BallPoly::zero(d);
    for k in 0..=out_deg {
        for idx in basis_indices(d, k) {
            let p = ball_basis(0.0, idx, d).expect("valid index");
            let c = crate::quadrature::discrete_inner(&grid, |x| dmono.eval(x), |x| p.eval(x))
                / ball_norm(0.0, k, idx.j, d).expect("valid norm");
            if c != 0.0 {
                out = out.add_scaled(&p, c);
            }
        }
    }
    out
}

/// Residual of `d_i S_n^mu f = S_{n-1}^{mu+1} (d_i f)` over an interior
/// sample (relative).
pub fn check_commutation_mu(f: &BallPoly, mu: f64, n: u32, i: usize) -> f64 {
    let d = f.d();
    let lhs = derivative(&partial_sum(&project_classical(f, mu, n), n, None), i);
    let df = derivative(f, i);
    let rhs = if n >= 1 {
        partial_sum(&project_classical(&df, mu + 1.0, n - 1), n - 1, None)
    } else {
        BallPoly::zero(d)
    };
    let diff = lhs.add_scaled(&rhs, -1.0);
    let scale = lhs
        .coeff_scale()
        .max(rhs.coeff_scale())
        .max(df.coeff_scale())
        .max(1e-30);
    let mut worst: f64 = 0.0;
    for x in crate::util::points_in_ball(d, 30, 0xc033 + n as u64) {
        worst = worst.max(diff.eval(&x).abs());
    }
    worst / scale
}

/// Residuals of the Sobolev commutation identities.
#[derive(Clone, Copy, Debug)]
pub struct CommutationReport {
    /// `d_i S_n^{-1} f = S_{n-1}^0 (d_i f)` (s = 1 only), max over i.
    pub gradient: Option<f64>,
    /// `Lap^m S_n^{-s} f = S_{n-2m}^{2m-s} (Lap^m f)` with m = floor(s/2).
    pub delta: f64,
}

pub fn check_commutation_sobolev(f: &BallPoly, p: &SobolevParams, n: u32) -> CommutationReport {
    let d = f.d();
    assert!(n >= p.s, "commutation checks need n >= s");
    let snf = partial_sum(&project_sobolev(f, p, n), n, None);
    let sample = crate::util::points_in_ball(d, 30, 0x50b0 + n as u64);

    let gradient = if p.s == 1 {
        let mut worst: f64 = 0.0;
        for i in 0..d {
            let lhs = derivative(&snf, i);
            let df = derivative(f, i);
            let rhs = partial_sum(&project_classical(&df, 0.0, n - 1), n - 1, None);
            let diff = lhs.add_scaled(&rhs, -1.0);
            let scale = lhs.coeff_scale().max(rhs.coeff_scale()).max(1e-30);
            for x in &sample {
                worst = worst.max(diff.eval(x).abs() / scale);
            }
        }
        Some(worst)
    } else {
        None
    };

    let m = (p.s / 2) as usize;
    let lhs = snf.laplacian_pow(m);
    let lapf = f.laplacian_pow(m);
    let rn = n - 2 * m as u32;
    let rhs = if p.s.is_multiple_of(2) {
        partial_sum(&project_classical(&lapf, 0.0, rn), rn, None)
    } else {
        // odd s: the right-hand family is the s = 1 Sobolev one with
        // lambda_0 taken as the last trace weight lambda_m
        let p1 = SobolevParams::new(1, vec![p.lambdas[m]]).expect("valid");
        partial_sum(&project_sobolev(&lapf, &p1, rn), rn, None)
    };
    let diff = lhs.add_scaled(&rhs, -1.0);
    let scale = lhs.coeff_scale().max(rhs.coeff_scale()).max(1e-30);
    let mut delta: f64 = 0.0;
    for x in &sample {
        delta = delta.max(diff.eval(x).abs() / scale);
    }
    CommutationReport { gradient, delta }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chebseries::RadialPoly;
    use crate::util::points_in_ball;

    fn sample_poly(d: usize, seed: u64, deg_hint: u32) -> BallPoly {
        // deterministic mixed-term polynomial of total degree deg_hint
        let mut rng = crate::util::SplitMix64::new(seed);
        let mut f = BallPoly::constant(d, rng.next_sym());
        for m in 0..=deg_hint.min(4) {
            let dim = harmonic_dim(d, m).unwrap();
            let ell = 1 + (rng.next_u64() % dim as u64) as u32;
            let qdeg = ((deg_hint.saturating_sub(m)) / 2) as usize;
            let coefs: Vec<f64> = (0..=qdeg).map(|_| rng.next_sym()).collect();
            f.add_term(m, ell, RadialPoly::from_monomial(&coefs));
        }
        f
    }

    #[test]
    fn cutoff_values() {
        assert_eq!(cutoff_eval(0.5), 1.0);
        assert_eq!(cutoff_eval(1.0), 1.0);
        assert_eq!(cutoff_eval(3.0), 0.0);
        assert_eq!(cutoff_eval(2.0), 0.0);
        assert!((cutoff_eval(1.5) - 0.5).abs() < 1e-15);
        // values in [0,1], nonincreasing on [1,2]
        let mut prev = 1.0;
        for i in 0..=200 {
            let t = 1.0 + i as f64 / 100.0;
            let v = cutoff_eval(t);
            assert!((0.0..=1.0).contains(&v));
            assert!(v <= prev + 1e-15);
            prev = v;
        }
        // smoothness proxy: 4th-order divided differences stay bounded
        let h = 1e-2;
        for i in 0..120 {
            let t = 0.9 + i as f64 * 1e-2;
            let dd4 = (cutoff_eval(t + 2.0 * h) - 4.0 * cutoff_eval(t + h) + 6.0 * cutoff_eval(t)
                - 4.0 * cutoff_eval((t - h).max(0.0))
                + cutoff_eval((t - 2.0 * h).max(0.0)))
                / h.powi(4);
            assert!(
                dd4.abs() < 1e4,
                "divided difference blew up at t={t}: {dd4:e}"
            );
        }
    }

    #[test]
    fn projection_unit_coefficient() {
        let d = 2;
        let idx = BasisIndex::new(d, 3, 1, 1).unwrap();
        let p = ball_basis(0.0, idx, d).unwrap();
        let c = project_classical(&p, 0.0, 5);
        for (i, v) in &c.table {
            let want = if *i == idx { 1.0 } else { 0.0 };
            assert!((v - want).abs() < 1e-12, "coefficient at {i:?}: {v}");
        }
        assert!((c.table[&idx] - 1.0).abs() < 1e-12);
        let one = BallPoly::constant(d, 1.0);
        let c = project_classical(&one, 0.0, 3);
        for (i, v) in &c.table {
            let want = if i.n == 0 { 1.0 } else { 0.0 };
            assert!((v - want).abs() < 1e-14, "coefficient at {i:?}: {v}");
        }
    }

    #[test]
    fn projection_x1_squared_frozen_coefficients() {
        // x1^2 = 1/4 + (1/4) P^{0,2}_{1,1} + (1/(2 sqrt 2)) Y^2_1 on the disk
        let d = 2;
        let q = crate::quadrature::build_grid(d, 4).unwrap();
        let c = project_classical_fn(|x: &[f64]| x[0] * x[0], 0.0, 2, &q).unwrap();
        let want = [
            (BasisIndex { n: 0, j: 0, ell: 1 }, 0.25),
            (BasisIndex { n: 2, j: 0, ell: 1 }, 1.0 / (2.0 * 2f64.sqrt())),
            (BasisIndex { n: 2, j: 1, ell: 1 }, 0.25),
        ];
        for (idx, v) in want {
            assert!(
                (c.table.get(&idx).copied().unwrap_or(0.0) - v).abs() < 1e-13,
                "coefficient at {idx:?}"
            );
        }
        for (idx, v) in &c.table {
            if !want.iter().any(|(w, _)| w == idx) {
                assert!(v.abs() < 1e-13, "spurious coefficient at {idx:?}: {v}");
            }
        }
    }

    #[test]
    fn weighted_callable_projection_matches_exact_path() {
        // mu = 1 projection of a callable agrees with the exact BallPoly
        // route over the same coefficients
        let d = 2;
        let f = sample_poly(d, 0x71, 4);
        let n = f.total_degree().unwrap() as u32;
        let grid = crate::quadrature::build_grid(d, n as usize + 2).unwrap();
        let exact = project_classical(&f, 1.0, n);
        let viafn = project_classical_fn(|x| f.eval(x), 1.0, n, &grid).unwrap();
        for (idx, v) in &exact.table {
            let w = viafn.table.get(idx).copied().unwrap_or(0.0);
            assert!(
                (v - w).abs() < 1e-10 * v.abs().max(1.0),
                "mu=1 coefficient at {idx:?}: {v} vs {w}"
            );
        }
    }

    #[test]
    fn classical_reproduction_on_polynomials() {
        for d in [2usize, 3] {
            for &mu in &[0.0, 1.0] {
                let f = sample_poly(d, 0xd00d + d as u64, 6);
                let n = f.total_degree().unwrap() as u32;
                let c = project_classical(&f, mu, n);
                let back = partial_sum(&c, n, None);
                let diff = back.add_scaled(&f, -1.0);
                for x in points_in_ball(d, 20, 3) {
                    assert!(
                        diff.eval(&x).abs() < 1e-11 * f.coeff_scale().max(1.0),
                        "reproduction d={d} mu={mu}"
                    );
                }
                // cut-off variant is also the identity on polynomials
                let withcut = partial_sum(&c, n, Some(&cutoff_eval));
                let diff = withcut.add_scaled(&f, -1.0);
                for x in points_in_ball(d, 10, 4) {
                    assert!(diff.eval(&x).abs() < 1e-11 * f.coeff_scale().max(1.0));
                }
            }
        }
    }

    #[test]
    fn sobolev_reproduction_on_polynomials() {
        for d in [2usize, 3] {
            for s in 1..=3u32 {
                let p = SobolevParams::with_default_lambdas(s, d).unwrap();
                let f = sample_poly(d, 0xfeed + s as u64, 5);
                let n = f.total_degree().unwrap() as u32;
                let c = project_sobolev(&f, &p, n);
                let back = partial_sum(&c, n, None);
                let diff = back.add_scaled(&f, -1.0);
                for x in points_in_ball(d, 15, 9) {
                    assert!(
                        diff.eval(&x).abs() < 1e-9 * f.coeff_scale().max(1.0),
                        "sobolev reproduction d={d} s={s}: {:e}",
                        diff.eval(&x)
                    );
                }
                // unit coefficient on a basis element
                let idx = BasisIndex::new(d, 4, 1, 1).unwrap();
                let qb = q_basis(&p, idx, d).unwrap();
                let c = project_sobolev(&qb, &p, 5);
                for (i, v) in &c.table {
                    let want = if *i == idx { 1.0 } else { 0.0 };
                    assert!((v - want).abs() < 1e-9, "s={s} d={d} coeff at {i:?}: {v}");
                }
            }
        }
    }

    #[test]
    fn sobolev_projection_of_clamped_input_lives_in_j_ge_2() {
        // f = (1-u)^2 g has s=2 coefficients only on the j >= 2 branch
        let d = 2;
        let p = SobolevParams::with_default_lambdas(2, d).unwrap();
        let g = sample_poly(d, 0x55, 4);
        let f = g.mul_radial(&crate::chebseries::RadialPoly::one_minus_u_pow(2));
        let n = f.total_degree().unwrap() as u32;
        let c = project_sobolev(&f, &p, n);
        let scale = f.coeff_scale().max(1.0);
        for (idx, v) in &c.table {
            if idx.j < 2 {
                assert!(
                    v.abs() < 1e-10 * scale,
                    "coefficient on the j<2 branch at {idx:?}: {v:e}"
                );
            }
        }
    }

    #[test]
    fn harmonic_partial_sum_reproduces_harmonics() {
        let d = 2;
        let mut f = BallPoly::solid_harmonic(HarmonicIndex::new(d, 3, 1).unwrap()).scale(0.7);
        f = f.add_scaled(
            &BallPoly::solid_harmonic(HarmonicIndex::new(d, 1, 2).unwrap()),
            -1.3,
        );
        let c = crate::transforms::project_harmonic(&f, 4);
        let back = partial_sum(&c, 4, None);
        for x in points_in_ball(d, 10, 91) {
            assert!((back.eval(&x) - f.eval(&x)).abs() < 1e-13);
        }
        // callable path on the sphere agrees
        let cfn = crate::transforms::project_harmonic_fn(|xi| f.eval(xi), 4, d, 8).unwrap();
        for (idx, v) in &c.table {
            let w = cfn.table.get(idx).copied().unwrap_or(0.0);
            assert!((v - w).abs() < 1e-12, "{idx:?}: {v} vs {w}");
        }
    }

    #[test]
    fn galerkin_orthogonality_of_sobolev_projection() {
        // <f - S_n f, v>_{-s} = 0 for all basis v of degree <= n
        let d = 2;
        let p = SobolevParams::with_default_lambdas(2, d).unwrap();
        let f = sample_poly(d, 0xabcd, 8);
        let n = 5u32;
        let sn = partial_sum(&project_sobolev(&f, &p, n), n, None);
        let resid = f.add_scaled(&sn, -1.0);
        for k in 0..=n {
            for idx in basis_indices(d, k) {
                let v = q_basis(&p, idx, d).unwrap();
                let ip = sobolev_inner(&resid, &v, &p);
                let scale = (q_norm(&p, k, idx.j, d) * sobolev_inner(&f, &f, &p)).sqrt();
                assert!(
                    ip.abs() <= 1e-9 * scale.max(1.0),
                    "residual against {idx:?}: {ip:e}"
                );
            }
        }
    }

    #[test]
    fn partial_sum_with_cutoff_truncates_at_2n() {
        let d = 2;
        let f = sample_poly(d, 0x77, 9);
        let c = project_classical(&f, 0.0, 9);
        // with eta, terms above 2n-1 are dropped: degree <= 2n-1
        let n = 3u32;
        let s = partial_sum(&c, n, Some(&cutoff_eval));
        assert!(s.total_degree().unwrap_or(0) <= (2 * n - 1) as usize);
        // eta <= 1 bounds each coefficient by the input's
        let cs = project_classical(&s, 0.0, 2 * n);
        for (idx, v) in &cs.table {
            let orig = c.table.get(idx).copied().unwrap_or(0.0);
            assert!(v.abs() <= orig.abs() + 1e-10, "coefficient grew at {idx:?}");
        }
    }

    #[test]
    fn idempotence() {
        let d = 2;
        let f = sample_poly(d, 0x1de3u64, 7);
        let n = 6u32;
        let c1 = project_classical(&f, 1.0, n);
        let c2 = project_classical(&partial_sum(&c1, n, None), 1.0, n);
        for (idx, v) in &c1.table {
            let w = c2.table.get(idx).copied().unwrap_or(0.0);
            assert!(
                (v - w).abs() < 1e-10 * v.abs().max(1.0),
                "{idx:?}: {v} vs {w}"
            );
        }
    }

    #[test]
    fn derivative_is_exact() {
        let d = 2;
        let f = sample_poly(d, 0xabc, 7);
        let mono = f.to_monomials();
        for i in 0..d {
            let df = derivative(&f, i);
            let want = mono.derivative(i);
            for x in points_in_ball(d, 20, 5) {
                assert!(
                    (df.eval(&x) - want.eval(&x)).abs() < 1e-10 * want.max_abs_coeff().max(1.0)
                );
            }
        }
    }

    #[test]
    fn commutation_classical() {
        let d = 2;
        // degree <= n: both sides equal d_i f
        let f = sample_poly(d, 0x31, 4);
        assert!(check_commutation_mu(&f, 0.0, 6, 0) < 1e-9);
        // degree-8 input, n = 5
        let f = sample_poly(d, 0x32, 8);
        assert!(check_commutation_mu(&f, 0.0, 5, 0) < 1e-9);
        assert!(check_commutation_mu(&f, 1.0, 5, 1) < 1e-9);
        // d = 3
        let f3 = sample_poly(3, 0x33, 6);
        assert!(check_commutation_mu(&f3, 1.0, 4, 1) < 1e-9);
    }

    #[test]
    fn commutation_sobolev() {
        let d = 2;
        let f = sample_poly(d, 0x41, 9);
        let p1 = SobolevParams::with_default_lambdas(1, d).unwrap();
        let rep = check_commutation_sobolev(&f, &p1, 6);
        assert!(
            rep.gradient.unwrap() < 1e-8,
            "s=1 gradient: {:?}",
            rep.gradient
        );
        let p2 = SobolevParams::with_default_lambdas(2, d).unwrap();
        let rep = check_commutation_sobolev(&f, &p2, 6);
        assert!(rep.delta < 1e-8, "s=2 delta: {:e}", rep.delta);
        let p3 = SobolevParams::with_default_lambdas(3, d).unwrap();
        let rep = check_commutation_sobolev(&f, &p3, 6);
        assert!(rep.delta < 1e-8, "s=3 delta: {:e}", rep.delta);
        let p4 = SobolevParams::with_default_lambdas(4, d).unwrap();
        let rep = check_commutation_sobolev(&f, &p4, 6);
        assert!(rep.delta < 1e-8, "s=4 delta: {:e}", rep.delta);
    }

    #[test]
    fn callable_sobolev_projection_matches_exact_path() {
        // s = 2 on a polynomial: the callable path (f, Lap f supplied)
        // agrees coefficient-by-coefficient with the exact route
        let d = 2;
        let f = sample_poly(d, 0x99, 5);
        let lapf = f.laplacian();
        let n = f.total_degree().unwrap() as u32;
        let grid = crate::quadrature::build_grid(d, n as usize + 2).unwrap();
        let p = SobolevParams::new(2, vec![d as f64]).unwrap();
        let exact = project_sobolev(&f, &p, n);
        let viafn =
            project_sobolev_fn_s2(d, d as f64, n, |x| f.eval(x), |x| lapf.eval(x), &grid).unwrap();
        for (idx, v) in &exact.table {
            let w = viafn.table.get(idx).copied().unwrap_or(0.0);
            assert!(
                (v - w).abs() < 1e-9 * v.abs().max(1.0),
                "s=2 callable coefficient at {idx:?}: {v} vs {w}"
            );
        }
        // s = 1 likewise, with the gradient through the monomial route
        let mono = f.to_monomials();
        let gx = mono.derivative(0);
        let gy = mono.derivative(1);
        let p1 = SobolevParams::new(1, vec![d as f64]).unwrap();
        let exact1 = project_sobolev(&f, &p1, n);
        let viafn1 = project_sobolev_fn_s1(
            d,
            d as f64,
            n,
            |x| f.eval(x),
            |x| [gx.eval(x), gy.eval(x), 0.0],
            &grid,
        )
        .unwrap();
        for (idx, v) in &exact1.table {
            let w = viafn1.table.get(idx).copied().unwrap_or(0.0);
            assert!(
                (v - w).abs() < 1e-9 * v.abs().max(1.0),
                "s=1 callable coefficient at {idx:?}: {v} vs {w}"
            );
        }
    }

    #[test]
    fn smooth_function_rate_decay() {
        // classical projection of exp(x1) on the disk: the coefficient-side
        // partial sums converge geometrically; no plateau above 1e-11
        let d = 2;
        let f = |x: &[f64]| x[0].exp();
        let grid = crate::quadrature::build_grid(d, 26).unwrap();
        let mut errs = Vec::new();
        for n in [4u32, 8, 12, 16, 20] {
            let c = project_classical_fn(f, 0.0, n, &grid).unwrap();
            let s = partial_sum(&c, n, None);
            let (_, el2) = crate::quadrature::error_metrics(&grid, |x| f(x) - s.eval(x));
            errs.push(el2);
        }
        for w in errs.windows(2) {
            assert!(
                w[1] < w[0] * 0.5 || w[1] < 1e-11,
                "no geometric decay: {errs:?}"
            );
        }
        assert!(
            *errs.last().unwrap() < 1e-11,
            "did not reach floor: {errs:?}"
        );
        // Sobolev s=1 projection through the callable path decays too
        let gradf = |x: &[f64]| [x[0].exp(), 0.0, 0.0];
        let mut serrs = Vec::new();
        for n in [4u32, 8, 12] {
            let c = project_sobolev_fn_s1(d, d as f64, n, f, gradf, &grid).unwrap();
            let s = partial_sum(&c, n, None);
            let (_, el2) = crate::quadrature::error_metrics(&grid, |x| f(x) - s.eval(x));
            serrs.push(el2);
        }
        for w in serrs.windows(2) {
            assert!(w[1] < w[0] * 0.5 || w[1] < 1e-11, "sobolev path: {serrs:?}");
        }
        // weighted derivative errors: || d_1 (f - S_{n,eta} f) ||_{mu+1}
        // also decays geometrically; the weight is phi^2 = 1 - |x|^2
        let mut werrs = Vec::new();
        for n in [4u32, 8, 12] {
            let c = project_classical_fn(f, 0.0, n, &grid).unwrap();
            let s = partial_sum(&c, n, Some(&cutoff_eval));
            let ds = derivative(&s, 0);
            let mut acc = 0.0;
            for (pt, &w) in grid.points.iter().zip(&grid.weights) {
                let x = &pt[..d];
                let u: f64 = x.iter().map(|v| v * v).sum();
                let diff = x[0].exp() - ds.eval(x);
                acc += w * (1.0 - u) * diff * diff;
            }
            werrs.push(acc.sqrt());
        }
        for w in werrs.windows(2) {
            assert!(
                w[1] < w[0] * 0.5 || w[1] < 1e-11,
                "weighted derivative path: {werrs:?}"
            );
        }
    }

    #[test]
    fn coeffs_csv_format() {
        let d = 2;
        let f = BallPoly::constant(d, 2.0);
        let c = project_classical(&f, 0.0, 1);
        let mut buf = Vec::new();
        c.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "family,n,j,ell,value");
        assert_eq!(lines[1], "classical(mu=0),0,0,1,2.0000000000000000e0");
    }
}
