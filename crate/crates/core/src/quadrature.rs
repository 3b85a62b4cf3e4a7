//! Product quadrature grids on the disk and ball, discrete inner
//! products, and the discrete error metrics.
//!
//! Radial nodes are mapped Gauss-Jacobi points `rho_i = sqrt((t_i+1)/2)`
//! with the (0, d/2-1) weight; angles are 2n+1 equispaced phi (plus
//! Gauss-Legendre in cos(theta) for d = 3). Stored weights are normalized
//! so they sum to one, matching `<1,1> = 1`; the error metric `e_L2`
//! rescales by the ball volume so it reproduces the reported experiment
//! weights `pi w/(2(2n+1))` (d=2) and `pi w w'/(2 sqrt(2) (2n+1))` (d=3),
//! which were validated against that normalization.

use crate::jacobi::{gauss_jacobi_rule, JacobiParams};
use crate::{Error, Result};

/// Product grid over the closed ball with positive normalized weights.
#[derive(Clone, Debug)]
pub struct BallQuadrature {
    pub d: usize,
    pub n: usize,
    /// Flattened points, radial-major: index = i * sphere_len + a.
    pub points: Vec<[f64; 3]>,
    /// Normalized weights (sum = 1), same order as `points`.
    pub weights: Vec<f64>,
    /// Radial factor: (rho_i, normalized radial weight).
    pub radial: Vec<(f64, f64)>,
    /// Spherical factor: (xi_a, normalized surface weight).
    pub sphere: Vec<([f64; 3], f64)>,
}

impl BallQuadrature {
    /// Number of points; (n+1)(2n+1) for d = 2, (n+1)^2 (2n+1) for d = 3.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Volume of the unit ball, the factor between normalized weights and
    /// the plain Lebesgue weights of the experiment definition.
    pub fn ball_volume(&self) -> f64 {
        match self.d {
            2 => std::f64::consts::PI,
            _ => 4.0 * std::f64::consts::PI / 3.0,
        }
    }

    /// CSV dump `x1,x2[,x3],weight` (normalized weights).
    pub fn write_csv<W: std::io::Write>(&self, mut w: W) -> std::io::Result<()> {
        if self.d == 2 {
            writeln!(w, "x1,x2,weight")?;
        } else {
            writeln!(w, "x1,x2,x3,weight")?;
        }
        for (p, wt) in self.points.iter().zip(&self.weights) {
            for c in &p[..self.d] {
                write!(w, "{c:.16e},")?;
            }
            writeln!(w, "{wt:.16e}")?;
        }
        Ok(())
    }
}

/// Build the product grid of order n.
pub fn build_grid(d: usize, n: usize) -> Result<BallQuadrature> {
    if d != 2 && d != 3 {
        return Err(Error::UnsupportedDimension(d));
    }
    let beta = d as f64 / 2.0 - 1.0;
    let rrule = gauss_jacobi_rule(n, JacobiParams::new(0.0, beta))?;
    let rtotal = rrule.total();
    let radial: Vec<(f64, f64)> = rrule
        .nodes
        .iter()
        .zip(&rrule.weights)
        .map(|(&t, &w)| ((0.5 * (1.0 + t)).sqrt(), w / rtotal))
        .collect();
    let sphere = crate::harmonics::sphere_grid(d, n)?;
    let mut points = Vec::with_capacity(radial.len() * sphere.len());
    let mut weights = Vec::with_capacity(radial.len() * sphere.len());
    for &(rho, wr) in &radial {
        for &(xi, ws) in &sphere {
            points.push([rho * xi[0], rho * xi[1], rho * xi[2]]);
            weights.push(wr * ws);
        }
    }
    Ok(BallQuadrature {
        d,
        n,
        points,
        weights,
        radial,
        sphere,
    })
}

/// Discrete normalized inner product `sum w f g`; exact for polynomial
/// integrands of total degree <= 2n+1 against the mu = 0 measure.
pub fn discrete_inner<F, G>(q: &BallQuadrature, f: F, g: G) -> f64
where
    F: Fn(&[f64]) -> f64,
    G: Fn(&[f64]) -> f64,
{
    let mut acc = 0.0;
    for (p, &w) in q.points.iter().zip(&q.weights) {
        let x = &p[..q.d];
        acc += w * f(x) * g(x);
    }
    acc
}

/// Values of a BallPoly at every grid point, using the radial-times-
/// spherical factorization of both the grid and the representation.
pub fn eval_on_grid(q: &BallQuadrature, f: &crate::ballfun::BallPoly) -> Vec<f64> {
    assert_eq!(q.d, f.d());
    let nr = q.radial.len();
    let na = q.sphere.len();
    let mut out = vec![0.0; nr * na];
    for (idx, radial) in f.terms() {
        let sph: Vec<f64> = q
            .sphere
            .iter()
            .map(|(xi, _)| crate::harmonics::sph_eval(idx, &xi[..q.d]))
            .collect();
        let rad: Vec<f64> = q
            .radial
            .iter()
            .map(|&(rho, _)| radial.eval(rho * rho) * rho.powi(idx.m as i32))
            .collect();
        for (i, &rv) in rad.iter().enumerate() {
            if rv == 0.0 {
                continue;
            }
            let row = &mut out[i * na..(i + 1) * na];
            for (o, &sv) in row.iter_mut().zip(&sph) {
                *o += rv * sv;
            }
        }
    }
    out
}

/// Discrete maximum error and discrete L2 error of a function over the
/// measuring grid.
///
/// `e_L2` uses the plain Lebesgue weights of the experiment definition
/// (normalized weights times the ball volume) and reports the square root
/// of the weighted sum, so it scales like a norm.
pub fn error_metrics<F: Fn(&[f64]) -> f64>(q: &BallQuadrature, f: F) -> (f64, f64) {
    let vol = q.ball_volume();
    let mut emax: f64 = 0.0;
    let mut el2 = 0.0;
    for (p, &w) in q.points.iter().zip(&q.weights) {
        let v = f(&p[..q.d]);
        emax = emax.max(v.abs());
        el2 += vol * w * v * v;
    }
    (emax, el2.sqrt())
}
