//! Classical and generalized Jacobi polynomials and Gauss-Jacobi rules.
//!
//! The generalized polynomials `P^(a,b)_j` extend the classical family to
//! arbitrary real parameters through the explicit sum in powers of
//! (t-1)/2, truncated at the index `j0` that avoids degree reduction when
//! -j-a-b lands in {1,...,j}. The explicit sums are accumulated in
//! double-double arithmetic; even so, cancellation grows exponentially
//! with the degree, so classical evaluation for a,b > -1 runs on the
//! three-term recurrence instead.

use crate::chebseries::{dd_to_radial, DdSeries, RadialPoly};
use crate::dd::Dd;
use crate::special::{gamma, ln_gamma};
use crate::{Error, Result};

/// Jacobi parameter pair; negative values are allowed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JacobiParams {
    pub alpha: f64,
    pub beta: f64,
}

impl JacobiParams {
    pub fn new(alpha: f64, beta: f64) -> Self {
        assert!(alpha.is_finite() && beta.is_finite());
        JacobiParams { alpha, beta }
    }
}

/// Pochhammer symbol (a)_k = a (a+1) ... (a+k-1); (a)_0 = 1.
///
/// Exactly zero whenever `a` is a nonpositive integer with -a < k.
pub fn pochhammer(a: f64, k: u32) -> f64 {
    let mut p = 1.0;
    for i in 0..k {
        p *= a + i as f64;
    }
    p
}

pub(crate) fn pochhammer_dd(a: f64, k: u32) -> Dd {
    let mut p = Dd::ONE;
    for i in 0..k {
        p = p.mul_f64(a + i as f64);
    }
    p
}

/// Classical Jacobi polynomial P^(alpha,beta)_j(t).
///
/// For alpha, beta > -1 this uses the stable three-term recurrence; for
/// other parameters it falls back to the explicit series (which is the
/// defining expression there).
pub fn jacobi_eval(p: JacobiParams, j: u32, t: f64) -> f64 {
    if p.alpha > -1.0 && p.beta > -1.0 {
        jacobi_recurrence_all(p, j as usize, t).pop().unwrap()
    } else {
        jacobi_series_eval(p, j, t)
    }
}

/// P^(alpha,beta)_k(t) for k = 0..=n by the three-term recurrence.
fn jacobi_recurrence_all(p: JacobiParams, n: usize, t: f64) -> Vec<f64> {
    let (a, b) = (p.alpha, p.beta);
    let mut vals = Vec::with_capacity(n + 1);
    vals.push(1.0);
    if n == 0 {
        return vals;
    }
    vals.push(0.5 * (a + b + 2.0) * t + 0.5 * (a - b));
    for k in 2..=n {
        let kf = k as f64;
        let c = 2.0 * kf + a + b;
        let a1 = 2.0 * kf * (kf + a + b) * (c - 2.0);
        let a2 = (c - 1.0) * (a * a - b * b);
        let a3 = (c - 2.0) * (c - 1.0) * c;
        let a4 = 2.0 * (kf + a - 1.0) * (kf + b - 1.0) * c;
        let v = ((a2 + a3 * t) * vals[k - 1] - a4 * vals[k - 2]) / a1;
        vals.push(v);
    }
    vals
}

/// Direct evaluation of the defining sum for P^(alpha,beta)_j in powers of
/// (t-1)/2, with double-double accumulation.
///
/// This is the reference route for the generalized family; its conditioning
/// degrades exponentially in `j` (about 10^27 by j = 50), so cross-checks
/// against the recurrence are only meaningful up to j ~ 30.
pub fn jacobi_series_eval(p: JacobiParams, j: u32, t: f64) -> f64 {
    let (a, b) = (p.alpha, p.beta);
    let half = Dd::from(0.5).mul_f64(t - 1.0);
    let mut acc = Dd::ZERO;
    let mut pw = Dd::ONE;
    for k in 0..=j {
        let num =
            pochhammer_dd(k as f64 + a + 1.0, j - k).mul(pochhammer_dd(j as f64 + a + b + 1.0, k));
        let den = factorial_dd(j - k).mul(factorial_dd(k));
        acc = acc.add(num.div(den).mul(pw));
        pw = pw.mul(half);
    }
    acc.value()
}

fn factorial_dd(k: u32) -> Dd {
    let mut p = Dd::ONE;
    for i in 1..=k {
        p = p.mul_f64(i as f64);
    }
    p
}

/// Truncation start index of the generalized Jacobi polynomial:
/// j0 = -j-alpha-beta when that value is an integer in {1,...,j}, else 0.
///
/// The integer test carries a 1e-9 tolerance so half-integer parameter
/// combinations that are exactly representable still classify correctly.
pub fn gjacobi_j0(p: JacobiParams, j: u32) -> u32 {
    let v = -(j as f64) - p.alpha - p.beta;
    let r = v.round();
    if (v - r).abs() <= 1e-9 && r >= 1.0 && r <= j as f64 {
        r as u32
    } else {
        0
    }
}

/// Coefficients gamma_k, k = j0..=j, of the generalized Jacobi sum
///   P^(a,b)_j(t) = sum_k gamma_k ((t-1)/2)^k .
///
/// Panics if a denominator Pochhammer of a retained term vanishes; the
/// parameter families used by the ball bases never trigger this, so it is
/// treated as a caller bug.
fn gjacobi_coeffs(p: JacobiParams, j: u32) -> (u32, Vec<Dd>) {
    let (a, b) = (p.alpha, p.beta);
    let j0 = gjacobi_j0(p, j);
    let mut coefs = Vec::with_capacity((j - j0 + 1) as usize);
    for k in j0..=j {
        let num = pochhammer_dd(k as f64 + a + 1.0, j - k);
        let den = factorial_dd(j - k)
            .mul(factorial_dd(k))
            .mul(pochhammer_dd(j as f64 + a + b + k as f64 + 1.0, j - k));
        if den.is_zero() {
            assert!(
                num.is_zero(),
                "vanishing denominator Pochhammer in generalized Jacobi term \
                 (alpha={a}, beta={b}, j={j}, k={k}); unsupported parameter family"
            );
            // 0/0 terms do not occur for the families in use either; drop.
            coefs.push(Dd::ZERO);
            continue;
        }
        coefs.push(num.div(den));
    }
    (j0, coefs)
}

/// Generalized Jacobi polynomial, zero for negative `j` by convention.
pub fn gjacobi_eval(p: JacobiParams, j: i64, t: f64) -> f64 {
    if j < 0 {
        return 0.0;
    }
    let j = j as u32;
    let (j0, coefs) = gjacobi_coeffs(p, j);
    let half = Dd::from(0.5).mul_f64(t - 1.0);
    let mut pw = Dd::ONE;
    for _ in 0..j0 {
        pw = pw.mul(half);
    }
    let mut acc = Dd::ZERO;
    for c in &coefs {
        acc = acc.add(c.mul(pw));
        pw = pw.mul(half);
    }
    acc.value()
}

/// Boundary value P^(a,b)_j(1) = (a+1)_j / (j! (j+a+b+1)_j) when j0 = 0,
/// and 0 otherwise.
pub fn gjacobi_value_at_one(p: JacobiParams, j: u32) -> f64 {
    if gjacobi_j0(p, j) != 0 {
        return 0.0;
    }
    let num = pochhammer_dd(p.alpha + 1.0, j);
    let den = factorial_dd(j).mul(pochhammer_dd(j as f64 + p.alpha + p.beta + 1.0, j));
    num.div(den).value()
}

/// d/dt P^(a,b)_j(t) = 1/2 P^(a+1,b+1)_{j-1}(t).
pub fn gjacobi_derivative(p: JacobiParams, j: u32, t: f64) -> f64 {
    if j == 0 {
        return 0.0;
    }
    0.5 * gjacobi_eval(
        JacobiParams::new(p.alpha + 1.0, p.beta + 1.0),
        j as i64 - 1,
        t,
    )
}

/// `scale * P^(a,b)_j(2u - 1)` as a stable Chebyshev series on u in [0,1].
///
/// Built by accumulating the explicit sum coefficient-wise in double-double;
/// this is the construction route for all ball basis radial profiles.
pub(crate) fn gjacobi_radial_series(p: JacobiParams, j: u32, scale: f64) -> RadialPoly {
    let (j0, coefs) = gjacobi_coeffs(p, j);
    // powers of (t-1)/2 where t = 2u-1, i.e. powers of (u-1)
    let mut pw = DdSeries::one();
    for _ in 0..j0 {
        pw = pw.mul_half_t_minus_one();
    }
    let mut acc: Vec<Dd> = Vec::new();
    for (i, c) in coefs.iter().enumerate() {
        pw.add_scaled_into(c.mul_f64(scale), &mut acc);
        if i + 1 < coefs.len() {
            pw = pw.mul_half_t_minus_one();
        }
    }
    dd_to_radial(&acc)
}

/// Nodes and Christoffel numbers of a Gauss-Jacobi rule.
///
/// A rule with n+1 nodes integrates polynomials of degree <= 2n+1 exactly
/// against the weight (1-t)^alpha (1+t)^beta on [-1,1].
#[derive(Clone, Debug)]
pub struct GaussJacobiRule {
    pub degree_exactness: usize,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussJacobiRule {
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| w * f(t))
            .sum()
    }

    /// Sum of the weights, i.e. the total mass of the Jacobi measure.
    pub fn total(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// Gauss-Jacobi rule with n+1 nodes: the zeros of P^(a,b)_{n+1} found by
/// safeguarded Newton iteration on the recurrence value/derivative pair,
/// with Christoffel numbers from the orthonormal kernel identity
/// w_i = 1 / sum_{k<=n} p_k(t_i)^2.
pub fn gauss_jacobi_rule(n: usize, p: JacobiParams) -> Result<GaussJacobiRule> {
    if p.alpha <= -1.0 || p.beta <= -1.0 {
        return Err(Error::InvalidParameter(format!(
            "Gauss-Jacobi requires alpha, beta > -1, got ({}, {})",
            p.alpha, p.beta
        )));
    }
    let deg = n + 1;
    let value = |t: f64| jacobi_eval(p, deg as u32, t);
    let slope = |t: f64| {
        0.5 * (deg as f64 + p.alpha + p.beta + 1.0)
            * jacobi_eval(
                JacobiParams::new(p.alpha + 1.0, p.beta + 1.0),
                deg as u32 - 1,
                t,
            )
    };

    // bracket the roots on a Chebyshev-angle sampling, then refine
    let mut m = (8 * (deg + 2)).max(64);
    let brackets = loop {
        let mut ts: Vec<f64> = (0..m)
            .map(|i| -(std::f64::consts::PI * i as f64 / (m - 1) as f64).cos())
            .collect();
        ts[0] = -1.0;
        ts[m - 1] = 1.0;
        let vs: Vec<f64> = ts.iter().map(|&t| value(t)).collect();
        let mut br = Vec::with_capacity(deg);
        for i in 0..m - 1 {
            if vs[i] == 0.0 {
                br.push((ts[i] - 1e-12, ts[i] + 1e-12));
            } else if vs[i] * vs[i + 1] < 0.0 {
                br.push((ts[i], ts[i + 1]));
            }
        }
        if br.len() >= deg {
            break br;
        }
        m *= 2;
        if m > 1 << 22 {
            return Err(Error::Convergence(format!(
                "found {} of {} sign brackets for Gauss-Jacobi({}, {}, n={})",
                br.len(),
                deg,
                p.alpha,
                p.beta,
                n
            )));
        }
    };

    let mut nodes = Vec::with_capacity(deg);
    for &(mut lo, mut hi) in brackets.iter().take(deg) {
        let (mut flo, fhi) = (value(lo), value(hi));
        if flo == 0.0 {
            nodes.push(lo);
            continue;
        }
        if fhi == 0.0 {
            nodes.push(hi);
            continue;
        }
        let mut t = 0.5 * (lo + hi);
        let mut converged = false;
        for _ in 0..100 {
            let f = value(t);
            if f == 0.0 {
                converged = true;
                break;
            }
            if f * flo < 0.0 {
                hi = t;
            } else {
                lo = t;
                flo = f;
            }
            let df = slope(t);
            let mut step = if df != 0.0 { f / df } else { f64::INFINITY };
            let mut tn = t - step;
            if !(tn > lo && tn < hi) {
                tn = 0.5 * (lo + hi);
                step = t - tn;
            }
            t = tn;
            if step.abs() <= 1e-15 * (1.0 + t.abs()) {
                converged = true;
                break;
            }
        }
        if !converged && (hi - lo) > 1e-13 {
            return Err(Error::Convergence(format!(
                "Newton stalled near t={t} for Gauss-Jacobi({}, {}, n={})",
                p.alpha, p.beta, n
            )));
        }
        nodes.push(t);
    }
    nodes.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let hnorms = jacobi_norms(p, n);
    let weights: Vec<f64> = nodes
        .iter()
        .map(|&t| {
            let vals = jacobi_recurrence_all(p, n, t);
            let s: f64 = vals.iter().zip(&hnorms).map(|(v, h)| v * v / h).sum();
            1.0 / s
        })
        .collect();

    Ok(GaussJacobiRule {
        degree_exactness: 2 * n + 1,
        nodes,
        weights,
    })
}

/// L2 norms h_k = int P_k^2 w^(a,b) dt for k = 0..=n, via the ratio
/// recurrence from the closed form.
fn jacobi_norms(p: JacobiParams, n: usize) -> Vec<f64> {
    let (a, b) = (p.alpha, p.beta);
    let h0 = 2f64.powf(a + b + 1.0)
        * (ln_gamma(a + 1.0) + ln_gamma(b + 1.0) - ln_gamma(a + b + 2.0)).exp();
    let mut h = Vec::with_capacity(n + 1);
    h.push(h0);
    for k in 0..n {
        let kf = k as f64;
        let ratio = if k == 0 {
            // (2k+a+b+1)/(k+a+b+1) = 1 exactly at k = 0
            (a + 1.0) * (b + 1.0) / (a + b + 3.0)
        } else {
            (2.0 * kf + a + b + 1.0) / (kf + a + b + 1.0) * (kf + a + 1.0) * (kf + b + 1.0)
                / ((kf + 1.0) * (2.0 * kf + a + b + 3.0))
        };
        h.push(h[k] * ratio);
    }
    h
}

/// Closed-form L2 norm of P^(a,b)_j against w^(a,b) (a, b > -1).
pub fn jacobi_norm(p: JacobiParams, j: u32) -> f64 {
    let (a, b) = (p.alpha, p.beta);
    if j == 0 {
        return 2f64.powf(a + b + 1.0) * gamma(a + 1.0) * gamma(b + 1.0) / gamma(a + b + 2.0);
    }
    let jf = j as f64;
    2f64.powf(a + b + 1.0) / (2.0 * jf + a + b + 1.0)
        * ((ln_gamma(jf + a + 1.0) + ln_gamma(jf + b + 1.0)
            - ln_gamma(jf + 1.0)
            - ln_gamma(jf + a + b + 1.0))
        .exp())
}
