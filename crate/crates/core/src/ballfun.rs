//! Exact algebra for finite sums of radial-harmonic terms
//! `q(||x||^2) Y^m_ell(x)`.
//!
//! The Laplacian, boundary trace, normal derivative and all normalized
//! inner products act exactly on this representation: the Laplacian is
//! `q -> Dq = 4 [u q'' + (m + d/2) q']` per term, traces read `q(1)` and
//! `m q(1) + 2 q'(1)`, and inner products reduce to radial Gauss-Jacobi
//! quadrature of polynomial integrands, which is exact.

use std::collections::BTreeMap;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::chebseries::RadialPoly;
use crate::harmonics::{solid_eval, HarmonicIndex};
use crate::jacobi::{gauss_jacobi_rule, JacobiParams};
use crate::monomial::MonoPoly;

/// A single radial-harmonic term `q(||x||^2) Y^m_ell(x)`.
#[derive(Clone, Debug)]
pub struct RadialHarmonicTerm {
    pub idx: HarmonicIndex,
    pub q: RadialPoly,
}

impl From<RadialHarmonicTerm> for BallPoly {
    fn from(t: RadialHarmonicTerm) -> Self {
        BallPoly::from_term(t.idx, t.q)
    }
}

/// Finite sum of radial-harmonic terms over distinct harmonic indices.
#[derive(Clone, Debug, Default)]
pub struct BallPoly {
    d: usize,
    terms: BTreeMap<(u32, u32), RadialPoly>,
}

impl BallPoly {
    pub fn zero(d: usize) -> Self {
        BallPoly {
            d,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(d: usize, a: f64) -> Self {
        let mut p = Self::zero(d);
        p.add_term(0, 1, RadialPoly::constant(a));
        p
    }

    pub fn from_term(idx: HarmonicIndex, q: RadialPoly) -> Self {
        let mut p = Self::zero(idx.d);
        p.add_term(idx.m, idx.ell, q);
        p
    }

    /// The terms as owned (index, profile) pairs.
    pub fn term_list(&self) -> Vec<RadialHarmonicTerm> {
        self.terms()
            .map(|(idx, q)| RadialHarmonicTerm { idx, q: q.clone() })
            .collect()
    }

    /// The solid harmonic Y^m_ell as a BallPoly (radial profile 1).
    pub fn solid_harmonic(idx: HarmonicIndex) -> Self {
        Self::from_term(idx, RadialPoly::constant(1.0))
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Accumulate `q * Y^m_ell` into the sum.
    pub fn add_term(&mut self, m: u32, ell: u32, q: RadialPoly) {
        if q.is_zero() {
            return;
        }
        match self.terms.entry((m, ell)) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(q);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let merged = e.get().add_scaled(&q, 1.0);
                if merged.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = merged;
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (HarmonicIndex, &RadialPoly)> {
        let d = self.d;
        self.terms
            .iter()
            .map(move |(&(m, ell), q)| (HarmonicIndex { d, m, ell }, q))
    }

    pub fn term(&self, m: u32, ell: u32) -> Option<&RadialPoly> {
        self.terms.get(&(m, ell))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total polynomial degree: max of m + 2 deg q over terms.
    pub fn total_degree(&self) -> Option<usize> {
        self.terms
            .iter()
            .map(|(&(m, _), q)| m as usize + 2 * q.degree().unwrap_or(0))
            .max()
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.d);
        let u: f64 = x.iter().map(|v| v * v).sum();
        let mut s = 0.0;
        for (&(m, ell), q) in &self.terms {
            let idx = HarmonicIndex { d: self.d, m, ell };
            s += q.eval(u) * solid_eval(idx, x);
        }
        s
    }

    pub fn add_scaled(&self, other: &BallPoly, s: f64) -> BallPoly {
        assert_eq!(self.d, other.d);
        let mut out = self.clone();
        for (&(m, ell), q) in &other.terms {
            out.add_term(m, ell, q.scale(s));
        }
        out
    }

    pub fn scale(&self, s: f64) -> BallPoly {
        let mut out = BallPoly::zero(self.d);
        for (&(m, ell), q) in &self.terms {
            out.add_term(m, ell, q.scale(s));
        }
        out
    }

    /// Multiply every term by a radial polynomial in u = ||x||^2.
    pub fn mul_radial(&self, r: &RadialPoly) -> BallPoly {
        let mut out = BallPoly::zero(self.d);
        for (&(m, ell), q) in &self.terms {
            out.add_term(m, ell, q.mul(r));
        }
        out
    }

    /// Exact Laplacian: per-term `q -> 4 [u q'' + (m + d/2) q']`.
    ///
    /// Drops the radial degree of every term by exactly one (terms with
    /// constant profiles vanish: solid harmonics are harmonic).
    pub fn laplacian(&self) -> BallPoly {
        let mut out = BallPoly::zero(self.d);
        for (&(m, ell), q) in &self.terms {
            let dq = q.radial_laplace(m as f64 + self.d as f64 / 2.0);
            out.add_term(m, ell, dq);
        }
        out
    }

    pub fn laplacian_pow(&self, k: usize) -> BallPoly {
        let mut f = self.clone();
        for _ in 0..k {
            f = f.laplacian();
        }
        f
    }

    /// Exact `x . grad f`: per-term `q -> 2 u q' + m q` (Euler's relation
    /// keeps the radial-harmonic form closed under this operator).
    pub fn scale_derivative(&self) -> BallPoly {
        let mut out = BallPoly::zero(self.d);
        for (&(m, ell), q) in &self.terms {
            out.add_term(m, ell, q.scale_derivative(m as f64));
        }
        out
    }

    /// Boundary restriction in the harmonic basis: per-term q(1).
    pub fn boundary_trace(&self) -> BTreeMap<(u32, u32), f64> {
        self.terms
            .iter()
            .map(|(&k, q)| (k, q.value_at_one()))
            .collect()
    }

    /// Normal derivative on the sphere: per-term `m q(1) + 2 q'(1)`.
    pub fn normal_derivative_trace(&self) -> BTreeMap<(u32, u32), f64> {
        self.terms
            .iter()
            .map(|(&(m, ell), q)| {
                (
                    (m, ell),
                    m as f64 * q.value_at_one() + 2.0 * q.deriv_at_one(),
                )
            })
            .collect()
    }

    /// Largest radial coefficient magnitude, a scale for residual checks.
    pub fn coeff_scale(&self) -> f64 {
        self.terms
            .values()
            .fold(0.0, |m, q| m.max(q.max_abs_coeff()))
    }

    /// Exact monomial expansion (for partial derivatives); conditioning of
    /// the monomial basis limits this to moderate total degree.
    pub(crate) fn to_monomials(&self) -> MonoPoly {
        let mut out = MonoPoly::zero(self.d);
        let mut rho2 = MonoPoly::zero(self.d);
        for i in 0..self.d {
            let mut e = [0u16; 3];
            e[i] = 2;
            rho2.add_term(e, 1.0);
        }
        for (&(m, ell), q) in &self.terms {
            let idx = HarmonicIndex { d: self.d, m, ell };
            let solid = crate::harmonics::solid_monomials(idx);
            let mono = q.to_monomial();
            let mut upow = MonoPoly::constant(self.d, 1.0);
            for (k, &c) in mono.iter().enumerate() {
                if k > 0 {
                    upow = upow.mul(&rho2);
                }
                if c != 0.0 {
                    out.add_scaled(&upow.mul(&solid), c);
                }
            }
        }
        out
    }
}

/// Normalized inner product `<f, g>_mu` over the ball with weight
/// (1 - ||x||^2)^mu, exact for the polynomial representation.
pub fn inner_l2(f: &BallPoly, g: &BallPoly, mu: f64) -> f64 {
    assert!(mu > -1.0, "inner_l2 requires mu > -1, got {mu}");
    assert_eq!(f.d, g.d);
    let d = f.d;
    let mut total = 0.0;
    for (&(m, ell), qf) in &f.terms {
        if let Some(qg) = g.terms.get(&(m, ell)) {
            let deg = qf.degree().unwrap_or(0) + qg.degree().unwrap_or(0) + m as usize;
            let rule = gauss_jacobi_rule(deg / 2 + 1, JacobiParams::new(mu, d as f64 / 2.0 - 1.0))
                .expect("radial rule construction");
            let mut num = 0.0;
            for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
                let u = 0.5 * (1.0 + t);
                num += w * qf.eval(u) * qg.eval(u) * u.powi(m as i32);
            }
            total += num / rule.total();
        }
    }
    total
}

/// Normalized spherical inner product of the boundary traces.
pub fn inner_sphere(f: &BallPoly, g: &BallPoly) -> f64 {
    assert_eq!(f.d, g.d);
    let tf = f.boundary_trace();
    let tg = g.boundary_trace();
    tf.iter()
        .filter_map(|(k, a)| tg.get(k).map(|b| a * b))
        .sum()
}

/// Normalized gradient inner product over the ball, via the Green
/// identity `<grad f, grad g> = d <df/dn, g>_S - <Lap f, g>`.
pub fn inner_grad(f: &BallPoly, g: &BallPoly) -> f64 {
    assert_eq!(f.d, g.d);
    let nf = f.normal_derivative_trace();
    let tg = g.boundary_trace();
    let sphere: f64 = nf
        .iter()
        .filter_map(|(k, a)| tg.get(k).map(|b| a * b))
        .sum();
    f.d as f64 * sphere - inner_l2(&f.laplacian(), g, 0.0)
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    m: u32,
    ell: u32,
    q: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct BallPolyRepr {
    d: usize,
    terms: Vec<TermRepr>,
}

impl Serialize for BallPoly {
    /// JSON form `{d, terms: [{m, ell, q: [monomial coefficients in u]}]}`.
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let repr = BallPolyRepr {
            d: self.d,
            terms: self
                .terms
                .iter()
                .map(|(&(m, ell), q)| TermRepr {
                    m,
                    ell,
                    q: q.to_monomial(),
                })
                .collect(),
        };
        repr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BallPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = BallPolyRepr::deserialize(deserializer)?;
        if repr.d != 2 && repr.d != 3 {
            return Err(D::Error::custom(format!(
                "unsupported dimension {}",
                repr.d
            )));
        }
        let mut out = BallPoly::zero(repr.d);
        for t in repr.terms {
            HarmonicIndex::new(repr.d, t.m, t.ell).map_err(D::Error::custom)?;
            out.add_term(t.m, t.ell, RadialPoly::from_monomial(&t.q));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::points_in_ball;

    fn term(d: usize, m: u32, ell: u32, mono: &[f64]) -> BallPoly {
        BallPoly::from_term(
            HarmonicIndex::new(d, m, ell).unwrap(),
            RadialPoly::from_monomial(mono),
        )
    }

    #[test]
    fn eval_basics() {
        let one = BallPoly::constant(2, 1.0);
        assert_eq!(one.eval(&[0.3, -0.4]), 1.0);
        // single m=0 term with q = 1 - u at ||x||^2 = 0.3
        let f = term(2, 0, 1, &[1.0, -1.0]);
        let x = [0.3f64.sqrt(), 0.0];
        assert!((f.eval(&x) - 0.7).abs() < 1e-14);
    }

    #[test]
    fn laplacian_examples() {
        // solid harmonics are harmonic
        for (d, m, ell) in [(2usize, 3u32, 1u32), (3, 4, 5), (2, 0, 1)] {
            let idx = HarmonicIndex::new(d, m, ell).unwrap();
            let y = BallPoly::solid_harmonic(idx);
            assert!(y.laplacian().is_zero());
        }
        // d=2, m=0, q = u: Laplacian of ||x||^2 is 2d = 4
        let f = term(2, 0, 1, &[0.0, 1.0]);
        let lf = f.laplacian();
        assert!((lf.eval(&[0.2, 0.5]) - 4.0).abs() < 1e-14);
        // Lap[(1 - ||x||^2) Y^n] = -4 (n + d/2) Y^n
        for (d, n) in [(2usize, 3u32), (3, 2)] {
            let idx = HarmonicIndex::new(d, n, 1).unwrap();
            let f = BallPoly::solid_harmonic(idx).mul_radial(&RadialPoly::one_minus_u_pow(1));
            let lf = f.laplacian();
            let want = -4.0 * (n as f64 + d as f64 / 2.0);
            for x in points_in_ball(d, 10, 7) {
                let y = solid_eval(idx, &x);
                assert!((lf.eval(&x) - want * y).abs() < 1e-12 * (1.0 + y.abs()));
            }
        }
    }

    #[test]
    fn polyharmonicity_bound() {
        // enough Laplacian applications annihilate any BallPoly
        let mut f = term(2, 2, 1, &[0.5, -1.0, 2.0]);
        f.add_term(0, 1, RadialPoly::from_monomial(&[1.0, 0.0, 3.0]));
        let deg = f.total_degree().unwrap();
        let z = f.laplacian_pow(deg / 2 + 1);
        assert!(z.is_zero());
    }

    #[test]
    fn laplacian_linearity() {
        let f = term(2, 1, 2, &[1.0, 2.0]);
        let g = term(2, 1, 2, &[0.0, -1.0, 0.5]);
        let lhs = f.add_scaled(&g, 3.0).laplacian();
        let rhs = f.laplacian().add_scaled(&g.laplacian(), 3.0);
        for x in points_in_ball(2, 8, 3) {
            assert!((lhs.eval(&x) - rhs.eval(&x)).abs() < 1e-13);
        }
    }

    #[test]
    fn traces() {
        // f = (1 - u) Y has zero trace
        let idx = HarmonicIndex::new(2, 2, 1).unwrap();
        let f = BallPoly::solid_harmonic(idx).mul_radial(&RadialPoly::one_minus_u_pow(1));
        assert!(f.boundary_trace().values().all(|v| v.abs() < 1e-15));
        // f = Y^n: trace coefficient 1, normal derivative n
        let y = BallPoly::solid_harmonic(HarmonicIndex::new(3, 3, 2).unwrap());
        assert_eq!(y.boundary_trace()[&(3, 2)], 1.0);
        assert_eq!(y.normal_derivative_trace()[&(3, 2)], 3.0);
        // (1-u)^2 * anything has vanishing normal derivative
        let g = term(3, 1, 1, &[2.0, 0.5]).mul_radial(&RadialPoly::one_minus_u_pow(2));
        assert!(g
            .normal_derivative_trace()
            .values()
            .all(|v| v.abs() < 1e-13));
        // m=0, q=u: normal derivative 0*1 + 2*1 = 2
        let h = term(2, 0, 1, &[0.0, 1.0]);
        assert!((h.normal_derivative_trace()[&(0, 1)] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn inner_l2_normalization_and_orthogonality() {
        for d in [2usize, 3] {
            let one = BallPoly::constant(d, 1.0);
            for &mu in &[0.0, 0.5, 1.0, 2.0] {
                assert!((inner_l2(&one, &one, mu) - 1.0).abs() < 1e-14);
            }
            let ya = BallPoly::solid_harmonic(HarmonicIndex::new(d, 2, 1).unwrap());
            let yb = BallPoly::solid_harmonic(HarmonicIndex::new(d, 3, 1).unwrap());
            assert_eq!(inner_l2(&ya, &yb, 0.0), 0.0);
        }
    }

    #[test]
    fn inner_sphere_examples() {
        let one = BallPoly::constant(2, 1.0);
        assert!((inner_sphere(&one, &one) - 1.0).abs() < 1e-15);
        let y = BallPoly::solid_harmonic(HarmonicIndex::new(2, 2, 1).unwrap());
        assert!((inner_sphere(&y, &y) - 1.0).abs() < 1e-15);
        let f = term(2, 1, 1, &[0.3, 0.7]).mul_radial(&RadialPoly::one_minus_u_pow(1));
        let g = term(2, 1, 1, &[1.0, 2.0, 3.0]);
        assert!(inner_sphere(&f, &g).abs() < 1e-14);
    }

    #[test]
    fn inner_grad_examples() {
        let one = BallPoly::constant(3, 1.0);
        assert_eq!(inner_grad(&one, &one), 0.0);
        for (d, n) in [(2usize, 1u32), (2, 4), (3, 2), (3, 5)] {
            let y = BallPoly::solid_harmonic(HarmonicIndex::new(d, n, 1).unwrap());
            let g = inner_grad(&y, &y);
            let want = d as f64 * n as f64;
            assert!((g - want).abs() < 1e-12 * want.max(1.0), "d={d} n={n}: {g}");
        }
    }

    #[test]
    fn inner_grad_matches_brute_force() {
        // tensor quadrature of grad f . grad g with finite-difference
        // gradients, on low-degree inputs
        let f = term(2, 1, 1, &[1.0, -0.6]);
        let g = term(2, 1, 1, &[0.2, 0.9]).add_scaled(&term(2, 0, 1, &[0.0, 1.0]), 0.7);
        let exact = inner_grad(&f, &g);
        // Gauss-Legendre in r times equispaced theta, normalized measure
        // (1/pi) r dr dtheta; finite differences for the gradients
        let rule = gauss_jacobi_rule(40, JacobiParams::new(0.0, 0.0)).unwrap();
        let nt = 128;
        let h = 1e-5;
        let mut quad = 0.0;
        for (&t, &wr) in rule.nodes.iter().zip(&rule.weights) {
            let r = 0.5 * (1.0 + t);
            for j in 0..nt {
                let th = 2.0 * std::f64::consts::PI * j as f64 / nt as f64;
                let x = [r * th.cos(), r * th.sin()];
                let mut dot = 0.0;
                for k in 0..2 {
                    let mut xp = x;
                    let mut xm = x;
                    xp[k] += h;
                    xm[k] -= h;
                    let df = (f.eval(&xp) - f.eval(&xm)) / (2.0 * h);
                    let dg = (g.eval(&xp) - g.eval(&xm)) / (2.0 * h);
                    dot += df * dg;
                }
                // dr = dt/2, normalization 2 r dr / (nt angular average)
                quad += dot * r * wr / nt as f64;
            }
        }
        assert!(
            (exact - quad).abs() < 1e-8 * exact.abs().max(1.0),
            "green {exact} vs brute force {quad}"
        );
    }

    #[test]
    fn inner_l2_symmetric_bilinear_positive() {
        let f = term(2, 2, 2, &[0.1, 1.0]);
        let g = term(2, 2, 2, &[-0.4, 0.2, 0.8]);
        for &mu in &[0.0, 1.0] {
            let a = inner_l2(&f, &g, mu);
            let b = inner_l2(&g, &f, mu);
            assert!((a - b).abs() < 1e-14);
            assert!(inner_l2(&f, &f, mu) > 0.0);
            let h = f.add_scaled(&g, 2.0);
            let lin = inner_l2(&h, &g, mu);
            assert!((lin - (a + 2.0 * inner_l2(&g, &g, mu))).abs() < 1e-12);
        }
    }

    #[test]
    fn scale_derivative_is_euler_operator() {
        // x . grad of a homogeneous solid harmonic of degree m is m f
        let idx = HarmonicIndex::new(3, 3, 4).unwrap();
        let y = BallPoly::solid_harmonic(idx);
        let r = y.scale_derivative();
        for x in points_in_ball(3, 6, 11) {
            assert!((r.eval(&x) - 3.0 * y.eval(&x)).abs() < 1e-13);
        }
    }

    #[test]
    fn json_round_trip_and_golden() {
        let mut f = term(2, 0, 1, &[1.0, -1.0]);
        f.add_term(2, 1, RadialPoly::from_monomial(&[0.5]));
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(
            s,
            r#"{"d":2,"terms":[{"m":0,"ell":1,"q":[1.0,-1.0]},{"m":2,"ell":1,"q":[0.5]}]}"#
        );
        let back: BallPoly = serde_json::from_str(&s).unwrap();
        for x in points_in_ball(2, 12, 5) {
            assert!((f.eval(&x) - back.eval(&x)).abs() < 1e-13);
        }
        assert!(serde_json::from_str::<BallPoly>(r#"{"d":5,"terms":[]}"#).is_err());
        assert!(
            serde_json::from_str::<BallPoly>(r#"{"d":2,"terms":[{"m":1,"ell":9,"q":[1.0]}]}"#)
                .is_err()
        );
    }

    #[test]
    fn monomial_conversion_matches_eval() {
        let mut f = term(2, 3, 2, &[1.0, 0.5]);
        f.add_term(1, 1, RadialPoly::from_monomial(&[0.0, -2.0, 1.0]));
        let mono = f.to_monomials();
        for x in points_in_ball(2, 10, 17) {
            assert!((f.eval(&x) - mono.eval(&x)).abs() < 1e-12);
        }
        let g = term(3, 2, 3, &[0.7, 1.1]);
        let mono = g.to_monomials();
        for x in points_in_ball(3, 10, 19) {
            assert!((g.eval(&x) - mono.eval(&x)).abs() < 1e-12);
        }
    }
}
