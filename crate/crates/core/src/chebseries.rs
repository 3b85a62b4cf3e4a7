//! Univariate polynomials on [0,1] stored in the Chebyshev basis.
//!
//! Radial profiles `q(u)`, `u = ||x||^2`, are kept as coefficients of
//! `T_k(2u-1)`. Monomial coefficients in `u` lose roughly a digit per
//! degree when evaluated on [0,1]; the Chebyshev form stays conditioned
//! at the radial degrees the generalized ball bases reach.

use crate::dd::Dd;

/// Polynomial on [0,1] as a Chebyshev series in `t = 2u - 1`.
///
/// An empty coefficient vector is the zero polynomial; trailing
/// coefficients that are exactly zero are trimmed.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RadialPoly {
    coef: Vec<f64>,
}

impl RadialPoly {
    pub fn zero() -> Self {
        RadialPoly { coef: Vec::new() }
    }

    pub fn constant(a: f64) -> Self {
        let mut p = RadialPoly { coef: vec![a] };
        p.trim();
        p
    }

    pub(crate) fn from_cheb(coef: Vec<f64>) -> Self {
        let mut p = RadialPoly { coef };
        p.trim();
        p
    }

    pub fn is_zero(&self) -> bool {
        self.coef.is_empty()
    }

    /// Polynomial degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coef.is_empty() {
            None
        } else {
            Some(self.coef.len() - 1)
        }
    }

    fn trim(&mut self) {
        while let Some(&c) = self.coef.last() {
            if c == 0.0 {
                self.coef.pop();
            } else {
                break;
            }
        }
    }

    /// Evaluate at `u` in [0,1] by Clenshaw recurrence.
    pub fn eval(&self, u: f64) -> f64 {
        self.eval_t(2.0 * u - 1.0)
    }

    pub(crate) fn eval_t(&self, t: f64) -> f64 {
        let n = self.coef.len();
        if n == 0 {
            return 0.0;
        }
        let mut b1 = 0.0;
        let mut b2 = 0.0;
        for k in (1..n).rev() {
            let b = self.coef[k] + 2.0 * t * b1 - b2;
            b2 = b1;
            b1 = b;
        }
        self.coef[0] + t * b1 - b2
    }

    /// self + s * other
    pub fn add_scaled(&self, other: &RadialPoly, s: f64) -> RadialPoly {
        let n = self.coef.len().max(other.coef.len());
        let mut out = vec![0.0; n];
        for (i, c) in self.coef.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.coef.iter().enumerate() {
            out[i] += s * c;
        }
        RadialPoly::from_cheb(out)
    }

    pub fn scale(&self, s: f64) -> RadialPoly {
        RadialPoly::from_cheb(self.coef.iter().map(|c| c * s).collect())
    }

    /// Product, via T_i T_j = (T_{i+j} + T_{|i-j|}) / 2.
    pub fn mul(&self, other: &RadialPoly) -> RadialPoly {
        if self.is_zero() || other.is_zero() {
            return RadialPoly::zero();
        }
        let mut out = vec![0.0; self.coef.len() + other.coef.len() - 1];
        for (i, a) in self.coef.iter().enumerate() {
            for (j, b) in other.coef.iter().enumerate() {
                let p = 0.5 * a * b;
                out[i + j] += p;
                out[i.abs_diff(j)] += p;
            }
        }
        RadialPoly::from_cheb(out)
    }

    /// Multiply by `u`.
    pub fn mul_u(&self) -> RadialPoly {
        if self.is_zero() {
            return RadialPoly::zero();
        }
        let mut out = vec![0.0; self.coef.len() + 1];
        for (k, c) in self.coef.iter().enumerate() {
            out[k + 1] += 0.25 * c;
            out[k] += 0.5 * c;
            out[k.abs_diff(1)] += 0.25 * c;
        }
        RadialPoly::from_cheb(out)
    }

    /// d/du, using the Chebyshev derivative recurrence (d/du = 2 d/dt).
    pub fn deriv(&self) -> RadialPoly {
        let n = self.coef.len();
        if n <= 1 {
            return RadialPoly::zero();
        }
        let deg = n - 1;
        let mut d = vec![0.0; deg];
        d[deg - 1] = 2.0 * deg as f64 * self.coef[deg];
        if deg >= 2 {
            d[deg - 2] = 2.0 * (deg - 1) as f64 * self.coef[deg - 1];
        }
        for k in (0..deg.saturating_sub(2)).rev() {
            d[k] = d[k + 2] + 2.0 * (k + 1) as f64 * self.coef[k + 1];
        }
        d[0] *= 0.5;
        // chain rule for t = 2u - 1
        for c in &mut d {
            *c *= 2.0;
        }
        RadialPoly::from_cheb(d)
    }

    /// q(1); T_k(1) = 1.
    pub fn value_at_one(&self) -> f64 {
        self.coef.iter().sum()
    }

    /// q'(1); T_k'(1) = k^2, times 2 from u -> t.
    pub fn deriv_at_one(&self) -> f64 {
        self.coef
            .iter()
            .enumerate()
            .map(|(k, c)| 2.0 * (k * k) as f64 * c)
            .sum()
    }

    /// q(0); T_k(-1) = (-1)^k.
    pub fn value_at_zero(&self) -> f64 {
        self.coef
            .iter()
            .enumerate()
            .map(|(k, c)| if k % 2 == 0 { *c } else { -*c })
            .sum()
    }

    /// The radial Laplacian action `Dq(u) = 4 [u q''(u) + c q'(u)]` for a
    /// term with harmonic degree `m` in dimension `d` (`c = m + d/2`).
    pub fn radial_laplace(&self, c: f64) -> RadialPoly {
        let dq = self.deriv();
        let ddq = dq.deriv();
        ddq.mul_u().add_scaled(&dq, c).scale(4.0)
    }

    /// The radial action of `x . grad`: `2 u q'(u) + m q(u)` for a term of
    /// harmonic degree `m`.
    pub fn scale_derivative(&self, m: f64) -> RadialPoly {
        self.deriv().mul_u().scale(2.0).add_scaled(self, m)
    }

    /// (1-u)^s as a series.
    pub fn one_minus_u_pow(s: usize) -> RadialPoly {
        let f = RadialPoly::from_cheb(vec![0.5, -0.5]);
        let mut out = RadialPoly::constant(1.0);
        for _ in 0..s {
            out = out.mul(&f);
        }
        out
    }

    /// Build from monomial coefficients in `u` (constant term first).
    pub fn from_monomial(mono: &[f64]) -> RadialPoly {
        let mut out = RadialPoly::zero();
        for &a in mono.iter().rev() {
            out = out.mul_u();
            out = out.add_scaled(&RadialPoly::constant(a), 1.0);
        }
        out
    }

    /// Expand into monomial coefficients in `u`. Ill-conditioned past
    /// degree ~20; intended for serialization and small golden tests.
    pub fn to_monomial(&self) -> Vec<f64> {
        let n = self.coef.len();
        if n == 0 {
            return Vec::new();
        }
        let mut acc = vec![0.0; n];
        let mut tprev = vec![0.0; n];
        let mut tcur = vec![0.0; n];
        tprev[0] = 1.0; // T~_0
        acc[0] += self.coef[0];
        if n > 1 {
            tcur[0] = -1.0;
            tcur[1] = 2.0; // T~_1 = 2u - 1
            for (i, c) in tcur.iter().enumerate() {
                acc[i] += self.coef[1] * c;
            }
            for k in 2..n {
                // T~_k = 2(2u-1) T~_{k-1} - T~_{k-2}
                let mut tnext = vec![0.0; n];
                for i in 0..n {
                    if tcur[i] != 0.0 {
                        if i + 1 < n {
                            tnext[i + 1] += 4.0 * tcur[i];
                        }
                        tnext[i] -= 2.0 * tcur[i];
                    }
                }
                for i in 0..n {
                    tnext[i] -= tprev[i];
                }
                for (i, c) in tnext.iter().enumerate() {
                    acc[i] += self.coef[k] * c;
                }
                tprev = tcur;
                tcur = tnext;
            }
        }
        while let Some(&c) = acc.last() {
            if c == 0.0 && acc.len() > 1 {
                acc.pop();
            } else {
                break;
            }
        }
        acc
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coef.iter().fold(0.0, |m, c| m.max(c.abs()))
    }
}

/// Double-double Chebyshev workspace used when accumulating the explicit
/// generalized-Jacobi sums in powers of (t-1)/2.
pub(crate) struct DdSeries {
    pub coef: Vec<Dd>,
}

impl DdSeries {
    pub fn one() -> Self {
        DdSeries {
            coef: vec![Dd::ONE],
        }
    }

    /// Multiply by (t-1)/2 = (T_1 - T_0)/2 exactly.
    pub fn mul_half_t_minus_one(&self) -> DdSeries {
        let n = self.coef.len();
        let mut out = vec![Dd::ZERO; n + 1];
        for (k, c) in self.coef.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            // c * T_k * T_1 / 2 = c (T_{k+1} + T_{|k-1|}) / 4
            out[k + 1] = out[k + 1].add(c.mul_f64(0.25));
            out[k.abs_diff(1)] = out[k.abs_diff(1)].add(c.mul_f64(0.25));
            // minus c * T_k / 2
            out[k] = out[k].add(c.mul_f64(-0.5));
        }
        DdSeries { coef: out }
    }

    /// acc += series * gamma
    pub fn add_scaled_into(&self, gamma: Dd, acc: &mut Vec<Dd>) {
        if acc.len() < self.coef.len() {
            acc.resize(self.coef.len(), Dd::ZERO);
        }
        for (k, c) in self.coef.iter().enumerate() {
            acc[k] = acc[k].add(c.mul(gamma));
        }
    }
}

pub(crate) fn dd_to_radial(coef: &[Dd]) -> RadialPoly {
    RadialPoly::from_cheb(coef.iter().map(|c| c.value()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_matches_monomial() {
        // q(u) = 3 - 2u + 5u^3
        let q = RadialPoly::from_monomial(&[3.0, -2.0, 0.0, 5.0]);
        for &u in &[0.0, 0.17, 0.5, 0.93, 1.0] {
            let want = 3.0 - 2.0 * u + 5.0 * u * u * u;
            assert!((q.eval(u) - want).abs() < 1e-14);
        }
        assert_eq!(q.degree(), Some(3));
        let back = q.to_monomial();
        for (a, b) in back.iter().zip([3.0, -2.0, 0.0, 5.0]) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn derivative_and_boundary_values() {
        let q = RadialPoly::from_monomial(&[1.0, -1.0]); // 1 - u
        assert!((q.value_at_one()).abs() < 1e-15);
        assert!((q.deriv_at_one() + 1.0).abs() < 1e-15);
        assert!((q.value_at_zero() - 1.0).abs() < 1e-15);
        let dq = q.deriv();
        assert_eq!(dq.degree(), Some(0));
        assert!((dq.eval(0.3) + 1.0).abs() < 1e-15);
    }

    #[test]
    fn product_and_one_minus_u() {
        let a = RadialPoly::from_monomial(&[0.0, 1.0]); // u
        let b = RadialPoly::one_minus_u_pow(2);
        let p = a.mul(&b);
        for &u in &[0.1, 0.6, 0.95] {
            assert!((p.eval(u) - u * (1.0 - u) * (1.0 - u)).abs() < 1e-14);
        }
    }

    #[test]
    fn radial_laplace_drops_degree_by_one() {
        // q(u) = u^2, m = 1, d = 2: Dq = 4[u*2 + 2*2u] = 24u
        let q = RadialPoly::from_monomial(&[0.0, 0.0, 1.0]);
        let dq = q.radial_laplace(1.0 + 1.0);
        assert_eq!(dq.degree(), Some(1));
        assert!((dq.eval(0.5) - 12.0).abs() < 1e-13);
    }

    #[test]
    fn scale_derivative_euler() {
        // q = const, m = 3: x.grad of a homogeneous cubic is 3 q
        let q = RadialPoly::constant(2.0);
        let r = q.scale_derivative(3.0);
        assert!((r.eval(0.4) - 6.0).abs() < 1e-15);
    }
}
