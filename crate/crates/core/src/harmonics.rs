//! Real orthonormal spherical harmonics on S^1 and S^2.
//!
//! The bases are normalized against the probability measure on the
//! sphere, `<1,1> = 1`, so every basis element has unit norm there. For
//! d = 2 the order is cosine before sine; for d = 3 the azimuthal index
//! q = -m..m maps to ell = 1..2m+1 (sines below, zonal in the middle,
//! cosines above). No Condon-Shortley phase is applied.

use crate::monomial::MonoPoly;
use crate::{Error, Result};

/// Index (d, degree m, ell) of one real spherical harmonic Y^m_ell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HarmonicIndex {
    pub d: usize,
    pub m: u32,
    pub ell: u32,
}

impl HarmonicIndex {
    pub fn new(d: usize, m: u32, ell: u32) -> Result<Self> {
        let dim = harmonic_dim(d, m)?;
        if ell == 0 || ell > dim {
            return Err(Error::InvalidIndex(format!(
                "ell={ell} out of range 1..={dim} for degree {m} in d={d}"
            )));
        }
        Ok(HarmonicIndex { d, m, ell })
    }
}

fn binom(n: i64, k: i64) -> u64 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    let mut p = 1u64;
    for i in 0..k.min(n - k) {
        p = p * (n - i) as u64 / (i as u64 + 1);
    }
    p
}

/// dim H_m^d = C(m+d-1, m) - C(m+d-3, m-2).
pub fn harmonic_dim(d: usize, m: u32) -> Result<u32> {
    if d != 2 && d != 3 {
        return Err(Error::UnsupportedDimension(d));
    }
    let (d, m) = (d as i64, m as i64);
    Ok((binom(m + d - 1, m) - binom(m + d - 3, m - 2)) as u32)
}

/// Fully normalized associated Legendre values L_m^q(x), with
/// int_{-1}^{1} L_m^q(x)^2 dx = 2, built by the stable normalized
/// recurrence (no factorials are formed).
fn normalized_legendre(m: u32, q: u32, x: f64) -> f64 {
    debug_assert!(q <= m);
    let s = (1.0 - x * x).max(0.0).sqrt();
    // diagonal climb to L_q^q
    let mut lqq = 1.0; // L_0^0
    for k in 1..=q {
        lqq *= ((2 * k + 1) as f64 / (2 * k) as f64).sqrt() * s;
    }
    if m == q {
        return lqq;
    }
    let mut prev = lqq;
    let mut cur = ((2 * q + 3) as f64).sqrt() * x * lqq;
    if m == q + 1 {
        return cur;
    }
    for k in (q + 2)..=m {
        let kf = k as f64;
        let qf = q as f64;
        let a = ((4.0 * kf * kf - 1.0) / (kf * kf - qf * qf)).sqrt();
        let b =
            (((kf - 1.0) * (kf - 1.0) - qf * qf) / (4.0 * (kf - 1.0) * (kf - 1.0) - 1.0)).sqrt();
        let next = a * (x * cur - b * prev);
        prev = cur;
        cur = next;
    }
    cur
}

/// Y^m_ell at a unit vector.
///
/// d=2: Y^0_1 = 1, Y^m_1 = sqrt(2) cos m theta, Y^m_2 = sqrt(2) sin m theta.
/// d=3: real spherical harmonics scaled so the normalized surface mean of
/// Y^2 equals one.
pub fn sph_eval(idx: HarmonicIndex, xi: &[f64]) -> f64 {
    let norm2: f64 = xi.iter().map(|v| v * v).sum();
    assert!(
        (norm2 - 1.0).abs() <= 1e-12,
        "sph_eval requires a unit vector, got |xi|^2 = {norm2}"
    );
    match idx.d {
        2 => {
            if idx.m == 0 {
                return 1.0;
            }
            let theta = xi[1].atan2(xi[0]);
            let a = idx.m as f64 * theta;
            match idx.ell {
                1 => 2f64.sqrt() * a.cos(),
                _ => 2f64.sqrt() * a.sin(),
            }
        }
        3 => {
            let m = idx.m;
            let q = idx.ell as i64 - 1 - m as i64;
            let qa = q.unsigned_abs() as u32;
            let ct = xi[2].clamp(-1.0, 1.0);
            let l = normalized_legendre(m, qa, ct);
            if q == 0 {
                l
            } else {
                let phi = xi[1].atan2(xi[0]);
                let a = qa as f64 * phi;
                let trig = if q > 0 { a.cos() } else { a.sin() };
                2f64.sqrt() * l * trig
            }
        }
        d => panic!("unsupported dimension {d}"),
    }
}

/// Solid harmonic rho^m Y^m_ell(xi) at a point of the closed ball.
pub fn solid_eval(idx: HarmonicIndex, x: &[f64]) -> f64 {
    let rho2: f64 = x.iter().map(|v| v * v).sum();
    if rho2 == 0.0 {
        return if idx.m == 0 { 1.0 } else { 0.0 };
    }
    let rho = rho2.sqrt();
    let xi: Vec<f64> = x.iter().map(|v| v / rho).collect();
    rho.powi(idx.m as i32) * sph_eval(idx, &xi)
}

/// Monomial coefficients of the Legendre polynomial P_m.
fn legendre_coeffs(m: u32) -> Vec<f64> {
    let m = m as usize;
    let mut prev = vec![0.0; m + 1];
    prev[0] = 1.0;
    if m == 0 {
        return prev;
    }
    let mut cur = vec![0.0; m + 1];
    cur[1] = 1.0;
    for k in 1..m {
        let mut next = vec![0.0; m + 1];
        for (p, &c) in cur.iter().enumerate() {
            if c != 0.0 && p < m {
                next[p + 1] += (2 * k + 1) as f64 * c;
            }
        }
        for (p, &c) in prev.iter().enumerate() {
            next[p] -= k as f64 * c;
        }
        for v in &mut next {
            *v /= (k + 1) as f64;
        }
        prev = cur;
        cur = next;
    }
    cur
}

/// Real and imaginary parts of (x + i y)^q as polynomials.
fn complex_power(d: usize, q: u32) -> (MonoPoly, MonoPoly) {
    let mut re = MonoPoly::constant(d, 1.0);
    let mut im = MonoPoly::zero(d);
    for _ in 0..q {
        let mut re2 = MonoPoly::zero(d);
        let mut im2 = MonoPoly::zero(d);
        for (&e, &a) in &re.terms {
            re2.add_term([e[0] + 1, e[1], e[2]], a);
            im2.add_term([e[0], e[1] + 1, e[2]], a);
        }
        for (&e, &a) in &im.terms {
            re2.add_term([e[0], e[1] + 1, e[2]], -a);
            im2.add_term([e[0] + 1, e[1], e[2]], a);
        }
        re = re2;
        im = im2;
    }
    (re, im)
}

/// The solid harmonic as an exact polynomial in the cartesian coordinates.
///
/// Second evaluation route, independent of the trigonometric one; also the
/// entry point for exact partial derivatives of radial-harmonic functions.
pub(crate) fn solid_monomials(idx: HarmonicIndex) -> MonoPoly {
    match idx.d {
        2 => {
            if idx.m == 0 {
                return MonoPoly::constant(2, 1.0);
            }
            let (re, im) = complex_power(2, idx.m);
            let pick = if idx.ell == 1 { re } else { im };
            pick.scale(2f64.sqrt())
        }
        3 => {
            let m = idx.m;
            let q = idx.ell as i64 - 1 - m as i64;
            let qa = q.unsigned_abs() as u32;
            // (d/dw)^qa P_m(w) = sum_j a_j w^{m-qa-2j}
            let pm = legendre_coeffs(m);
            let mut g = vec![0.0; (m + 1) as usize];
            for (p, &c) in pm.iter().enumerate() {
                if c != 0.0 && p >= qa as usize {
                    let mut f = c;
                    for i in 0..qa as usize {
                        f *= (p - i) as f64;
                    }
                    g[p - qa as usize] = f;
                }
            }
            // norm of the fully normalized form: sqrt((2m+1) (m-q)!/(m+q)!)
            let mut ratio = 1.0;
            for i in (m - qa + 1)..=(m + qa) {
                ratio /= i as f64;
            }
            let mut norm = ((2 * m + 1) as f64 * ratio).sqrt();
            if q != 0 {
                norm *= 2f64.sqrt();
            }
            let (re, im) = complex_power(3, qa);
            let trig = if q >= 0 { re } else { im };
            // rho^2 = x^2 + y^2 + z^2 as a polynomial
            let mut rho2 = MonoPoly::zero(3);
            rho2.add_term([2, 0, 0], 1.0);
            rho2.add_term([0, 2, 0], 1.0);
            rho2.add_term([0, 0, 2], 1.0);
            let mut out = MonoPoly::zero(3);
            for (p, &a) in g.iter().enumerate() {
                // term a * z^p * rho^{m-qa-p}, with m-qa-p even
                if a == 0.0 {
                    continue;
                }
                let j = (m as usize - qa as usize - p) / 2;
                let mut r = MonoPoly::constant(3, 1.0);
                for _ in 0..j {
                    r = r.mul(&rho2);
                }
                let mut zp = MonoPoly::zero(3);
                zp.add_term([0, 0, p as u16], a);
                out.add_scaled(&zp.mul(&r), 1.0);
            }
            trig.mul(&out).scale(norm)
        }
        d => panic!("unsupported dimension {d}"),
    }
}

/// Angular grid with weights summing to one: 2n+1 equispaced angles for
/// d = 2, tensor Gauss-Legendre in cos(theta) times equispaced phi for
/// d = 3. Exact for spherical polynomials of degree <= 2n+1.
pub(crate) fn sphere_grid(d: usize, n: usize) -> Result<Vec<([f64; 3], f64)>> {
    match d {
        2 => {
            let k = 2 * n + 1;
            Ok((0..k)
                .map(|i| {
                    let phi = 2.0 * std::f64::consts::PI * i as f64 / k as f64;
                    ([phi.cos(), phi.sin(), 0.0], 1.0 / k as f64)
                })
                .collect())
        }
        3 => {
            let rule =
                crate::jacobi::gauss_jacobi_rule(n, crate::jacobi::JacobiParams::new(0.0, 0.0))?;
            let k = 2 * n + 1;
            let mut out = Vec::with_capacity((n + 1) * k);
            for (&ct, &w) in rule.nodes.iter().zip(&rule.weights) {
                let st = (1.0 - ct * ct).max(0.0).sqrt();
                for i in 0..k {
                    let phi = 2.0 * std::f64::consts::PI * i as f64 / k as f64;
                    out.push(([st * phi.cos(), st * phi.sin(), ct], 0.5 * w / k as f64));
                }
            }
            Ok(out)
        }
        d => Err(Error::UnsupportedDimension(d)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dims() {
        assert_eq!(harmonic_dim(2, 0).unwrap(), 1);
        assert_eq!(harmonic_dim(2, 1).unwrap(), 2);
        assert_eq!(harmonic_dim(2, 5).unwrap(), 2);
        assert_eq!(harmonic_dim(3, 0).unwrap(), 1);
        assert_eq!(harmonic_dim(3, 4).unwrap(), 9);
        assert_eq!(harmonic_dim(3, 7).unwrap(), 15);
        assert!(harmonic_dim(4, 1).is_err());
        assert!(HarmonicIndex::new(2, 3, 3).is_err());
    }

    #[test]
    fn sph_examples() {
        let y0 = HarmonicIndex::new(2, 0, 1).unwrap();
        assert_eq!(sph_eval(y0, &[0.6, 0.8]), 1.0);
        let y11 = HarmonicIndex::new(2, 1, 1).unwrap();
        assert!((sph_eval(y11, &[1.0, 0.0]) - 2f64.sqrt()).abs() < 1e-15);
        // d=3 zonal degree-1 harmonic along x3 at the north pole: sqrt(3)
        let z1 = HarmonicIndex::new(3, 1, 2).unwrap();
        assert!((sph_eval(z1, &[0.0, 0.0, 1.0]) - 3f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn solid_examples() {
        let y0 = HarmonicIndex::new(2, 0, 1).unwrap();
        assert_eq!(solid_eval(y0, &[0.0, 0.0]), 1.0);
        let y21 = HarmonicIndex::new(2, 2, 1).unwrap();
        assert!((solid_eval(y21, &[0.5, 0.0]) - 2f64.sqrt() * 0.25).abs() < 1e-15);
        let y3 = HarmonicIndex::new(2, 3, 2).unwrap();
        assert_eq!(solid_eval(y3, &[0.0, 0.0]), 0.0);
        let z = HarmonicIndex::new(3, 3, 4).unwrap();
        assert_eq!(solid_eval(z, &[0.0, 0.0, 0.0]), 0.0);
    }

    #[test]
    fn discrete_orthonormality_d2() {
        let n = 10usize;
        let grid = sphere_grid(2, n).unwrap();
        let mut basis = Vec::new();
        for m in 0..=n as u32 {
            for ell in 1..=harmonic_dim(2, m).unwrap() {
                basis.push(HarmonicIndex::new(2, m, ell).unwrap());
            }
        }
        for (i, &a) in basis.iter().enumerate() {
            for &b in basis.iter().skip(i) {
                let g: f64 = grid
                    .iter()
                    .map(|(xi, w)| w * sph_eval(a, &xi[..2]) * sph_eval(b, &xi[..2]))
                    .sum();
                let want = if a == b { 1.0 } else { 0.0 };
                assert!((g - want).abs() < 1e-12, "gram({a:?},{b:?}) = {g}");
            }
        }
    }

    #[test]
    fn discrete_orthonormality_d3() {
        let n = 8usize;
        let grid = sphere_grid(3, n).unwrap();
        let mut basis = Vec::new();
        for m in 0..=n as u32 {
            for ell in 1..=harmonic_dim(3, m).unwrap() {
                basis.push(HarmonicIndex::new(3, m, ell).unwrap());
            }
        }
        for (i, &a) in basis.iter().enumerate() {
            for &b in basis.iter().skip(i) {
                let g: f64 = grid
                    .iter()
                    .map(|(xi, w)| w * sph_eval(a, xi) * sph_eval(b, xi))
                    .sum();
                let want = if a == b { 1.0 } else { 0.0 };
                assert!((g - want).abs() < 1e-12, "gram({a:?},{b:?}) = {g}");
            }
        }
    }

    #[test]
    fn monomial_route_matches_trig_route() {
        let pts2 = [[0.6, 0.8], [-0.28, 0.96], [1.0, 0.0], [0.0, -1.0]];
        for m in 0..=12u32 {
            for ell in 1..=harmonic_dim(2, m).unwrap() {
                let idx = HarmonicIndex::new(2, m, ell).unwrap();
                let poly = solid_monomials(idx);
                for p in pts2 {
                    let a = sph_eval(idx, &p);
                    let b = poly.eval(&p);
                    assert!(
                        (a - b).abs() < 1e-11 * a.abs().max(1.0),
                        "{idx:?} at {p:?}: {a} vs {b}"
                    );
                }
            }
        }
        let pts3 = [
            [0.48, 0.6, 0.64],
            [0.0, 0.0, 1.0],
            [-0.8, 0.6, 0.0],
            [2.0 / 3.0, -1.0 / 3.0, 2.0 / 3.0],
        ];
        for m in 0..=10u32 {
            for ell in 1..=harmonic_dim(3, m).unwrap() {
                let idx = HarmonicIndex::new(3, m, ell).unwrap();
                let poly = solid_monomials(idx);
                for p in pts3 {
                    let a = sph_eval(idx, &p);
                    let b = poly.eval(&p);
                    assert!(
                        (a - b).abs() < 1e-11 * a.abs().max(1.0),
                        "{idx:?} at {p:?}: {a} vs {b}"
                    );
                }
            }
        }
    }

    #[test]
    fn solid_harmonics_are_harmonic() {
        for (d, mmax) in [(2usize, 14u32), (3, 10)] {
            for m in 0..=mmax {
                for ell in 1..=harmonic_dim(d, m).unwrap() {
                    let idx = HarmonicIndex::new(d, m, ell).unwrap();
                    let poly = solid_monomials(idx);
                    let lap = poly.laplacian();
                    let scale = poly.max_abs_coeff().max(1.0);
                    assert!(
                        lap.max_abs_coeff() <= 1e-10 * scale,
                        "laplacian of {idx:?} has residual {:e}",
                        lap.max_abs_coeff()
                    );
                }
            }
        }
    }
}
