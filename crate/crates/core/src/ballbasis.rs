//! Classical and generalized orthogonal bases P^{mu,n}_{j,ell} on the
//! ball, their closed-form norms, and the monic family V_alpha^mu.
//!
//! The radial factor is `(n-j+d/2)_j P^(mu, n-2j+d/2-1)_j(2u-1)` in the
//! generalized (hatted) normalization; for mu > -1 this coincides exactly
//! with the classically scaled basis, so no rescaling factor is exposed.

use crate::ballfun::BallPoly;
use crate::chebseries::RadialPoly;
use crate::harmonics::{harmonic_dim, HarmonicIndex};
use crate::jacobi::{gjacobi_j0, gjacobi_radial_series, pochhammer, JacobiParams};
use crate::monomial::MonoPoly;
use crate::{Error, Result};

/// Index (n, j, ell) of P^{mu,n}_{j,ell}: degree n, radial index
/// 0 <= j <= n/2, and ell ranging over a basis of H_{n-2j}^d.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisIndex {
    pub n: u32,
    pub j: u32,
    pub ell: u32,
}

impl BasisIndex {
    pub fn new(d: usize, n: u32, j: u32, ell: u32) -> Result<Self> {
        if 2 * j > n {
            return Err(Error::InvalidIndex(format!("j={j} exceeds n/2 for n={n}")));
        }
        let dim = harmonic_dim(d, n - 2 * j)?;
        if ell == 0 || ell > dim {
            return Err(Error::InvalidIndex(format!(
                "ell={ell} out of range 1..={dim} for harmonic degree {}",
                n - 2 * j
            )));
        }
        Ok(BasisIndex { n, j, ell })
    }

    pub fn harmonic(&self, d: usize) -> HarmonicIndex {
        HarmonicIndex {
            d,
            m: self.n - 2 * self.j,
            ell: self.ell,
        }
    }
}

/// All indices of degree exactly n, in (j, ell) order.
pub fn basis_indices(d: usize, n: u32) -> Vec<BasisIndex> {
    let mut out = Vec::new();
    for j in 0..=n / 2 {
        let dim = harmonic_dim(d, n - 2 * j).unwrap();
        for ell in 1..=dim {
            out.push(BasisIndex { n, j, ell });
        }
    }
    out
}

/// All indices of degree at most n.
pub fn basis_indices_upto(d: usize, n: u32) -> Vec<BasisIndex> {
    (0..=n).flat_map(|k| basis_indices(d, k)).collect()
}

/// The basis element P^{mu,n}_{j,ell} as an exact BallPoly.
pub fn ball_basis(mu: f64, idx: BasisIndex, d: usize) -> Result<BallPoly> {
    let harmonic = HarmonicIndex::new(d, idx.n - 2 * idx.j, idx.ell)?;
    let beta = (idx.n - 2 * idx.j) as f64 + d as f64 / 2.0 - 1.0;
    let scale = pochhammer((idx.n - idx.j) as f64 + d as f64 / 2.0, idx.j);
    let radial = gjacobi_radial_series(JacobiParams::new(mu, beta), idx.j, scale);
    Ok(BallPoly::from_term(harmonic, radial))
}

/// Closed-form squared norm h^mu_{j,n} of P^{mu,n}_{j,ell} for mu > -1.
pub fn ball_norm(mu: f64, n: u32, j: u32, d: usize) -> Result<f64> {
    if mu <= -1.0 {
        return Err(Error::InvalidParameter(format!(
            "ball_norm requires mu > -1, got {mu}"
        )));
    }
    if 2 * j > n {
        return Err(Error::InvalidIndex(format!("j={j} exceeds n/2 for n={n}")));
    }
    let hd = d as f64 / 2.0;
    let num = pochhammer(mu + 1.0, j) * pochhammer(1.0 - n as f64 - hd, j) * pochhammer(hd, n);
    let den =
        pochhammer(1.0, j) * pochhammer(1.0 - n as f64 - hd - mu, j) * pochhammer(hd + mu + 1.0, n);
    Ok(num / den)
}

/// Pointwise residual of the factorization
/// `P^{-s,n}_{j,ell} = c (||x||^2-1)^s P^{s,n-2s}_{j-s,ell}` with
/// `c = (1-n-d/2)_j / [(-j)_s (1-n-d/2+2s)_{j-s}]`, over a sample of
/// interior points; relative to the coefficient scale of the left side.
pub fn check_negative_mu_factorization(s: u32, idx: BasisIndex, d: usize) -> Result<f64> {
    if idx.j < s {
        return Err(Error::InvalidIndex(format!(
            "need j >= s, got j={} s={s}",
            idx.j
        )));
    }
    let lhs = ball_basis(-(s as f64), idx, d)?;
    let inner = BasisIndex::new(d, idx.n - 2 * s, idx.j - s, idx.ell)?;
    let hd = d as f64 / 2.0;
    let c = pochhammer(1.0 - idx.n as f64 - hd, idx.j)
        / (pochhammer(-(idx.j as f64), s)
            * pochhammer(1.0 - idx.n as f64 - hd + 2.0 * s as f64, idx.j - s));
    // (||x||^2 - 1)^s = (-1)^s (1-u)^s
    let sign = if s.is_multiple_of(2) { 1.0 } else { -1.0 };
    let rhs = ball_basis(s as f64, inner, d)?
        .mul_radial(&RadialPoly::one_minus_u_pow(s as usize))
        .scale(c * sign);
    let diff = lhs.add_scaled(&rhs, -1.0);
    let mut worst: f64 = 0.0;
    let scale = lhs.coeff_scale().max(1e-30);
    for x in crate::util::points_in_ball(d, 50, 0x5eed + idx.n as u64) {
        worst = worst.max(diff.eval(&x).abs());
    }
    Ok(worst / scale)
}

/// Residual report for the Laplacian identity
/// `Lap^k P^{-s,n}_{j,ell} = 4^k (n+d/2-2k)_{2k} P^{2k-s,n-2k}_{j-k,ell} + q(u) Y`.
#[derive(Clone, Copy, Debug)]
pub struct LaplaceReport {
    /// Max coefficient of the difference outside the term's own harmonic
    /// index, relative to the input scale (must be ~0: the remainder is a
    /// radial multiple of the same Y).
    pub offblock_residual: f64,
    /// Degree of the radial remainder (None when it vanishes).
    pub remainder_degree: Option<usize>,
    /// Degree bound j0 - k - 1 (None means the remainder must vanish).
    pub degree_bound: Option<usize>,
}

pub fn check_laplacian_reduction(
    s: u32,
    k: u32,
    idx: BasisIndex,
    d: usize,
) -> Result<LaplaceReport> {
    let p = ball_basis(-(s as f64), idx, d)?;
    let lhs = p.laplacian_pow(k as usize);
    let hd = d as f64 / 2.0;
    let c = 4f64.powi(k as i32) * pochhammer(idx.n as f64 + hd - 2.0 * k as f64, 2 * k);
    let leading = if idx.j >= k && idx.n >= 2 * k && 2 * (idx.j - k) <= idx.n - 2 * k {
        ball_basis(
            2.0 * k as f64 - s as f64,
            BasisIndex::new(d, idx.n - 2 * k, idx.j - k, idx.ell)?,
            d,
        )?
        .scale(c)
    } else {
        BallPoly::zero(d)
    };
    let rem = lhs.add_scaled(&leading, -1.0);
    // the remainder must sit on the harmonic index (n-2j, ell) only
    let own = (idx.n - 2 * idx.j, idx.ell);
    let mut off: f64 = 0.0;
    let mut remainder_degree = None;
    for (h, q) in rem.terms() {
        if (h.m, h.ell) == own {
            remainder_degree = q.degree();
        } else {
            off = off.max(q.max_abs_coeff());
        }
    }
    let scale = p.coeff_scale().max(lhs.coeff_scale()).max(1e-30);
    if remainder_degree.is_some() {
        let q = rem.term(own.0, own.1).unwrap();
        // coefficient debris below roundoff scale counts as zero
        if q.max_abs_coeff() <= 1e-10 * scale {
            remainder_degree = None;
        }
    }
    let beta = (idx.n - 2 * idx.j) as f64 + hd - 1.0;
    let j0 = gjacobi_j0(JacobiParams::new(-(s as f64), beta), idx.j);
    let degree_bound = if j0 as i64 - k as i64 > 0 {
        Some((j0 - k - 1) as usize)
    } else {
        None
    };
    Ok(LaplaceReport {
        offblock_residual: off / scale,
        remainder_degree,
        degree_bound,
    })
}

/// Monic orthogonal polynomial V_alpha^mu as a monomial sum, switching to
/// the truncated series when a denominator Pochhammer vanishes.
pub(crate) fn monic_poly(mu: f64, alpha: &[u32], d: usize) -> MonoPoly {
    assert_eq!(alpha.len(), d);
    let total: u32 = alpha.iter().sum();
    let hd = d as f64 / 2.0;
    let base = 1.0 - mu - hd - total as f64;
    let mut out = MonoPoly::zero(d);
    let mut gamma = vec![0u32; d];
    loop {
        let gsum: u32 = gamma.iter().sum();
        let den = pochhammer(base, gsum);
        if den != 0.0 {
            let mut num = 1.0;
            for i in 0..d {
                num *= pochhammer(-(alpha[i] as f64), 2 * gamma[i]);
            }
            let mut gfact = 1.0;
            for &g in &gamma {
                for t in 1..=g {
                    gfact *= t as f64;
                }
            }
            let coef = num / (den * gfact) * 0.25f64.powi(gsum as i32);
            let mut e = [0u16; 3];
            for i in 0..d {
                e[i] = (alpha[i] - 2 * gamma[i]) as u16;
            }
            out.add_term(e, coef);
        }
        let mut i = 0;
        loop {
            if i == d {
                return out;
            }
            gamma[i] += 1;
            if 2 * gamma[i] <= alpha[i] {
                break;
            }
            gamma[i] = 0;
            i += 1;
        }
    }
}

/// Value of the monic orthogonal polynomial V_alpha^mu at a point.
pub fn monic_eval(mu: f64, alpha: &[u32], x: &[f64]) -> f64 {
    monic_poly(mu, alpha, x.len()).eval(x)
}

/// Residual of the derivative identity
/// `d^beta V_alpha^mu = (-1)^|beta| (-alpha)_beta V_{alpha-beta}^{mu+|beta|}`
/// over a sample of interior points (relative).
pub fn check_monic_derivative(mu: f64, alpha: &[u32], beta: &[u32], d: usize) -> f64 {
    assert_eq!(alpha.len(), d);
    assert_eq!(beta.len(), d);
    let mut lhs = monic_poly(mu, alpha, d);
    for (i, &b) in beta.iter().enumerate() {
        for _ in 0..b {
            lhs = lhs.derivative(i);
        }
    }
    let bsum: u32 = beta.iter().sum();
    if alpha.iter().zip(beta).any(|(a, b)| b > a) {
        // (-alpha)_beta = 0 and the derivative kills the monomial as well
        let mut worst: f64 = 0.0;
        for x in crate::util::points_in_ball(d, 30, 99) {
            worst = worst.max(lhs.eval(&x).abs());
        }
        return worst;
    }
    let reduced: Vec<u32> = alpha.iter().zip(beta).map(|(a, b)| a - b).collect();
    let mut c = if bsum.is_multiple_of(2) { 1.0 } else { -1.0 };
    for i in 0..d {
        c *= pochhammer(-(alpha[i] as f64), beta[i]);
    }
    let rhs = monic_poly(mu + bsum as f64, &reduced, d).scale(c);
    let scale = lhs.max_abs_coeff().max(1e-30);
    let mut worst: f64 = 0.0;
    for x in crate::util::points_in_ball(d, 30, 0xd1ff) {
        worst = worst.max((lhs.eval(&x) - rhs.eval(&x)).abs());
    }
    worst / scale
}
