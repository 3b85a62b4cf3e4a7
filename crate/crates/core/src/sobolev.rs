//! Sobolev inner products `<.,.>_{-s}`, harmonic-lift polynomials
//! `Y^{n,j}`, and the mutually orthogonal bases `Q^{-s,n}_{j,ell}`.
//!
//! The inner product combines the s-fold gradient over the ball with
//! Laplacian traces on the sphere; it is evaluated exactly on BallPoly
//! inputs. The lifts solve the boundary-value system that makes
//! `Delta^k Y^{n,j}|_S = delta_{k,j} Y^n`, assembled from the exact
//! boundary constants of `Delta^k [(1-u)^i Y^n]`.

use crate::ballbasis::{ball_basis, ball_norm, basis_indices, BasisIndex};
use crate::ballfun::{inner_grad, inner_l2, inner_sphere, BallPoly};
use crate::chebseries::RadialPoly;
use crate::harmonics::HarmonicIndex;
use crate::jacobi::pochhammer;
use crate::linalg::lu_solve;
use crate::{Error, Result};

/// Order s >= 1 and the trace weights lambda_0..lambda_{ceil(s/2)-1}.
#[derive(Clone, Debug)]
pub struct SobolevParams {
    pub s: u32,
    pub lambdas: Vec<f64>,
}

impl SobolevParams {
    pub fn new(s: u32, lambdas: Vec<f64>) -> Result<Self> {
        if s == 0 {
            return Err(Error::InvalidParameter("s must be >= 1".into()));
        }
        let need = s.div_ceil(2) as usize;
        if lambdas.len() != need {
            return Err(Error::InvalidParameter(format!(
                "expected {need} lambda weights for s={s}, got {}",
                lambdas.len()
            )));
        }
        if lambdas.iter().any(|&l| l <= 0.0) {
            return Err(Error::InvalidParameter(
                "lambda weights must be positive".into(),
            ));
        }
        Ok(SobolevParams { s, lambdas })
    }

    /// The weights used throughout the error analysis: all lambda_k = d.
    pub fn with_default_lambdas(s: u32, d: usize) -> Result<Self> {
        Self::new(s, vec![d as f64; s.div_ceil(2) as usize])
    }
}

/// `<f, g>_{-s} = <grad^s f, grad^s g>_B + sum_k lambda_k <Lap^k f, Lap^k g>_S`
/// where grad^{2m} = Lap^m and grad^{2m+1} = grad Lap^m; exact on BallPoly.
pub fn sobolev_inner(f: &BallPoly, g: &BallPoly, p: &SobolevParams) -> f64 {
    let m = (p.s / 2) as usize;
    let fm = f.laplacian_pow(m);
    let gm = g.laplacian_pow(m);
    let mut total = if p.s.is_multiple_of(2) {
        inner_l2(&fm, &gm, 0.0)
    } else {
        inner_grad(&fm, &gm)
    };
    let mut fk = f.clone();
    let mut gk = g.clone();
    for &lambda in &p.lambdas {
        total += lambda * inner_sphere(&fk, &gk);
        fk = fk.laplacian();
        gk = gk.laplacian();
    }
    total
}

/// Coefficients of the harmonic lift `Y^{n,j} = sum_i c_i (1-u)^i Y^n`.
#[derive(Clone, Debug)]
pub struct LiftCoeffs {
    pub n: u32,
    pub j: u32,
    pub c: Vec<f64>,
}

/// Boundary constant of `Delta^k [(1-u)^i Y^n]` on the sphere:
/// `4^k (-i)_k (-k)_{i-k} (n+d/2)_k / (n+d/2)_{i-k}` (zero for k > i or
/// i > 2k).
pub fn delta_boundary_constant(d: usize, n: u32, i: u32, k: u32) -> f64 {
    if k > i || i > 2 * k {
        return 0.0;
    }
    let c = n as f64 + d as f64 / 2.0;
    4f64.powi(k as i32)
        * pochhammer(-(i as f64), k)
        * pochhammer(-(k as f64), i - k)
        * pochhammer(c, k)
        / pochhammer(c, i - k)
}

/// Solve the (j+1)x(j+1) boundary system for the lift coefficients.
///
/// The matrix has support k <= i <= 2k; it is solved densely with partial
/// pivoting (the band claim is not load-bearing at these sizes).
pub fn lift_coeffs(d: usize, n: u32, j: u32) -> LiftCoeffs {
    let size = (j + 1) as usize;
    let mut a = vec![vec![0.0; size]; size];
    let mut rhs = vec![0.0; size];
    for k in 0..=j {
        for i in k..=(2 * k).min(j) {
            a[k as usize][i as usize] = delta_boundary_constant(d, n, i, k);
        }
    }
    rhs[j as usize] = 1.0;
    let c = lu_solve(a, rhs).expect("lift system is nonsingular");
    LiftCoeffs { n, j, c }
}

/// The lift polynomial `Y^{n,j}_ell` as a BallPoly; zero for j < 0 by
/// convention (callers pass j as i64 where that matters).
pub fn lift_eval(d: usize, n: u32, j: u32, ell: u32) -> Result<BallPoly> {
    let idx = HarmonicIndex::new(d, n, ell)?;
    let coeffs = lift_coeffs(d, n, j);
    let mut radial = RadialPoly::zero();
    for (i, &ci) in coeffs.c.iter().enumerate() {
        radial = radial.add_scaled(&RadialPoly::one_minus_u_pow(i), ci);
    }
    Ok(BallPoly::from_term(idx, radial))
}

/// The Sobolev-orthogonal basis element Q^{-s,n}_{j,ell}.
///
/// Three branches: the plain generalized basis for j >= s; the
/// trace-corrected one for ceil(s/2) <= j <= s-1 (the correction scalar is
/// read off the boundary-trace coefficient, never by pointwise division);
/// and the harmonic lift for j <= ceil(s/2)-1.
pub fn q_basis(p: &SobolevParams, idx: BasisIndex, d: usize) -> Result<BallPoly> {
    let s = p.s;
    let half = s.div_ceil(2);
    let m = idx.n - 2 * idx.j;
    if idx.j >= s {
        return ball_basis(-(s as f64), idx, d);
    }
    if idx.j >= half {
        let base = ball_basis(-(s as f64), idx, d)?;
        let mut out = base.clone();
        let mut lap = base;
        for k in 0..half {
            let trace = lap
                .boundary_trace()
                .get(&(m, idx.ell))
                .copied()
                .unwrap_or(0.0);
            if trace != 0.0 {
                let lift = lift_eval(d, m, k, idx.ell)?;
                out = out.add_scaled(&lift, -trace);
            }
            lap = lap.laplacian();
        }
        return Ok(out);
    }
    lift_eval(d, m, idx.j, idx.ell)
}

/// Closed-form squared norm h^{-s}_{j,n} under `<.,.>_{-s}`.
pub fn q_norm(p: &SobolevParams, n: u32, j: u32, d: usize) -> f64 {
    let s = p.s;
    let half = s.div_ceil(2);
    let hd = d as f64 / 2.0;
    if j >= half {
        return 2f64.powi(2 * s as i32 - 1)
            * d as f64
            * pochhammer(n as f64 + hd - s as f64, s)
            * pochhammer(n as f64 + hd - s as f64 + 1.0, s - 1);
    }
    if s % 2 == 1 && j == (s - 1) / 2 {
        return d as f64 * (n - 2 * j) as f64 + p.lambdas[j as usize];
    }
    p.lambdas[j as usize]
}

/// Orthogonal projection of a BallPoly onto span{Q^{-s,n}_{j,ell}} at a
/// single degree n.
pub fn proj_sobolev_degree(f: &BallPoly, p: &SobolevParams, n: u32, d: usize) -> BallPoly {
    let mut out = BallPoly::zero(d);
    for idx in basis_indices(d, n) {
        let q = q_basis(p, idx, d).expect("valid index");
        let coeff = sobolev_inner(f, &q, p) / q_norm(p, n, idx.j, d);
        if coeff != 0.0 {
            out = out.add_scaled(&q, coeff);
        }
    }
    out
}

/// Orthogonal projection onto V_n^d(w_mu) at a single degree n (mu > -1).
pub fn proj_classical_degree(f: &BallPoly, mu: f64, n: u32, d: usize) -> BallPoly {
    let mut out = BallPoly::zero(d);
    for idx in basis_indices(d, n) {
        let q = ball_basis(mu, idx, d).expect("valid index");
        let coeff = inner_l2(f, &q, mu) / ball_norm(mu, n, idx.j, d).expect("valid norm");
        if coeff != 0.0 {
            out = out.add_scaled(&q, coeff);
        }
    }
    out
}

/// Harmonic projection of the boundary trace at degree m, as a trace map.
fn harmonic_trace_projection(f: &BallPoly, m: u32) -> Vec<(u32, f64)> {
    f.boundary_trace()
        .into_iter()
        .filter(|&((deg, _), _)| deg == m)
        .map(|((_, ell), v)| (ell, v))
        .collect()
}

/// Sup over a sphere sample of
/// `Delta^k proj_n^{-s} f - proj^H_{n-2k} Delta^k f`, both restricted to
/// the sphere.
pub fn check_boundary_projection(
    p: &SobolevParams,
    n: u32,
    k: u32,
    f: &BallPoly,
    d: usize,
) -> Result<f64> {
    if k >= p.s.div_ceil(2) {
        return Err(Error::InvalidParameter(format!(
            "k={k} must be below ceil(s/2) for s={}",
            p.s
        )));
    }
    let proj = proj_sobolev_degree(f, p, n, d);
    let lhs_tr = proj.laplacian_pow(k as usize).boundary_trace();
    let rhs_list = if n >= 2 * k {
        harmonic_trace_projection(&f.laplacian_pow(k as usize), n - 2 * k)
    } else {
        Vec::new()
    };
    // assemble both as trace maps on degree n-2k; leakage of the left
    // side onto other degrees is residual in its own right
    let mut worst: f64 = 0.0;
    let mut diff: Vec<(u32, f64)> = Vec::new();
    for (&(m, ell), &v) in &lhs_tr {
        if n >= 2 * k && m == n - 2 * k {
            diff.push((ell, v));
        } else {
            worst = worst.max(v.abs());
        }
    }
    for (ell, v) in rhs_list {
        if let Some(e) = diff.iter_mut().find(|(l, _)| *l == ell) {
            e.1 -= v;
        } else {
            diff.push((ell, -v));
        }
    }
    if n >= 2 * k {
        let m = n - 2 * k;
        for xi in crate::util::points_on_sphere(d, 40, 0xb0b_u64 + n as u64) {
            let mut val = 0.0;
            for &(ell, c) in &diff {
                let idx = HarmonicIndex::new(d, m, ell)?;
                val += c * crate::harmonics::sph_eval(idx, &xi);
            }
            worst = worst.max(val.abs());
        }
    }
    Ok(worst)
}

/// Residual of the factorization `proj_n^{-s} [(1-u)^s g] =
/// (1-u)^s proj^s_{n-2s} g` as an exact BallPoly difference, evaluated on
/// an interior sample (relative to the coefficient scale).
pub fn check_factorization(s: u32, n: u32, g: &BallPoly, d: usize) -> Result<f64> {
    let p = SobolevParams::with_default_lambdas(s, d)?;
    let weight = RadialPoly::one_minus_u_pow(s as usize);
    let f = g.mul_radial(&weight);
    let lhs = proj_sobolev_degree(&f, &p, n, d);
    let rhs = if n >= 2 * s {
        proj_classical_degree(g, s as f64, n - 2 * s, d).mul_radial(&weight)
    } else {
        BallPoly::zero(d)
    };
    let diff = lhs.add_scaled(&rhs, -1.0);
    let scale = f
        .coeff_scale()
        .max(lhs.coeff_scale())
        .max(rhs.coeff_scale())
        .max(1e-30);
    let mut worst: f64 = 0.0;
    for x in crate::util::points_in_ball(d, 40, 0xfac + n as u64) {
        worst = worst.max(diff.eval(&x).abs());
    }
    Ok(worst / scale)
}
