//! Spectral-Galerkin solvers for the Helmholtz and biharmonic problems
//! on the disk and ball.
//!
//! Both schemes decouple into independent blocks per spherical-harmonic
//! index (m, ell). The Helmholtz blocks are a diagonal stiffness plus a
//! tridiagonal mass in the P^{-1} basis; the biharmonic trial space is
//! {Q^{-2,k}_{j,ell}: j >= 2}, i.e. (1-|x|^2)^2 Pi_{n-4}, where the
//! Laplacian Gram is diagonal and the full operator has bandwidth 2.
//! The right-hand sides use the tensor structure of the grid: the sphere
//! factor is integrated against each harmonic once, then combined with
//! the radial profile of every basis element.

use std::sync::Arc;

use rayon::prelude::*;

use crate::ballbasis::{ball_basis, BasisIndex};
use crate::ballfun::{inner_l2, BallPoly};
use crate::harmonics::{harmonic_dim, sph_eval, HarmonicIndex};
use crate::linalg::{tridiag_spd_solve, SymBand};
use crate::quadrature::{eval_on_grid, BallQuadrature};
use crate::sobolev::{q_basis, SobolevParams};
use crate::{Error, Result};

pub type Field = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// -Lap u + lambda u = f in the ball, du/dn + eta u = g on the sphere.
#[derive(Clone)]
pub struct HelmholtzProblem {
    pub d: usize,
    pub lambda: f64,
    pub eta: f64,
    pub f: Field,
    pub g: Field,
}

impl HelmholtzProblem {
    pub fn new(d: usize, lambda: f64, eta: f64, f: Field, g: Field) -> Result<Self> {
        if d != 2 && d != 3 {
            return Err(Error::UnsupportedDimension(d));
        }
        if lambda < 0.0 || eta < 0.0 || lambda + eta <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "well-posedness needs lambda, eta >= 0 and lambda + eta > 0; got ({lambda}, {eta})"
            )));
        }
        Ok(HelmholtzProblem {
            d,
            lambda,
            eta,
            f,
            g,
        })
    }
}

/// Lap^2 u - lambda1 Lap u + lambda0 u = f with clamped boundary
/// u = du/dn = 0.
#[derive(Clone)]
pub struct BiharmonicProblem {
    pub d: usize,
    pub lambda1: f64,
    pub lambda0: f64,
    pub f: Field,
}

impl BiharmonicProblem {
    pub fn new(d: usize, lambda1: f64, lambda0: f64, f: Field) -> Result<Self> {
        if d != 2 && d != 3 {
            return Err(Error::UnsupportedDimension(d));
        }
        if lambda1 < 0.0 || lambda0 < 0.0 {
            return Err(Error::InvalidParameter(
                "biharmonic coefficients must be nonnegative".into(),
            ));
        }
        Ok(BiharmonicProblem {
            d,
            lambda1,
            lambda0,
            f,
        })
    }
}

/// One decoupled block: the banded operator and right-hand side over the
/// radial indices of a fixed harmonic (m, ell).
pub struct GalerkinBlock {
    pub m: u32,
    pub ell: u32,
    /// Radial indices j in this block; the basis degree is k = m + 2j.
    pub js: Vec<u32>,
    pub matrix: SymBand,
    pub rhs: Vec<f64>,
}

pub struct GalerkinSystem {
    pub d: usize,
    pub n: u32,
    pub blocks: Vec<GalerkinBlock>,
}

/// Per-harmonic radial profile of a callable: for each harmonic index,
/// the values F[i] = sum_a s_a f(rho_i xi_a) Y^m_ell(xi_a).
type HarmonicProfiles = Vec<((u32, u32), Vec<f64>)>;

fn radial_profiles_of<F>(grid: &BallQuadrature, nmax: u32, f: F) -> Result<HarmonicProfiles>
where
    F: Fn(&[f64]) -> f64,
{
    let d = grid.d;
    let na = grid.sphere.len();
    let fvals: Vec<f64> = grid.points.iter().map(|p| f(&p[..d])).collect();
    let mut out = Vec::new();
    for m in 0..=nmax {
        for ell in 1..=harmonic_dim(d, m)? {
            let idx = HarmonicIndex::new(d, m, ell)?;
            let sph: Vec<f64> = grid
                .sphere
                .iter()
                .map(|(xi, w)| w * sph_eval(idx, &xi[..d]))
                .collect();
            let prof: Vec<f64> = (0..grid.radial.len())
                .map(|i| {
                    let row = &fvals[i * na..(i + 1) * na];
                    row.iter().zip(&sph).map(|(a, b)| a * b).sum()
                })
                .collect();
            out.push(((m, ell), prof));
        }
    }
    Ok(out)
}

/// Assemble the Helmholtz Galerkin system of order n on the given grid.
///
/// The stiffness diagonal is h^{-1}_{j,k} with lambda_0 = d eta; the mass
/// block is the exact tridiagonal Gram of the P^{-1} basis; the right-hand
/// side is `<f, v> + d <g, v>_S` (the factor d comes from the normalized
/// measures).
pub fn assemble_helmholtz(
    p: &HelmholtzProblem,
    n: u32,
    grid: &BallQuadrature,
) -> Result<GalerkinSystem> {
    if (grid.n as u32) < n {
        return Err(Error::GridTooCoarse {
            need: n as usize,
            got: grid.n,
        });
    }
    if grid.d != p.d {
        return Err(Error::UnsupportedDimension(grid.d));
    }
    let d = p.d;
    let df = d as f64;
    let hd = df / 2.0;
    let fprofiles = radial_profiles_of(grid, n, |x| (p.f)(x))?;
    // sphere data for the g term
    let gvals: Vec<f64> = grid.sphere.iter().map(|(xi, _)| (p.g)(&xi[..d])).collect();

    let mut blocks = Vec::new();
    for (bi, &((m, ell), ref fprof)) in fprofiles.iter().enumerate() {
        let _ = bi;
        let jmax = (n - m) / 2;
        let js: Vec<u32> = (0..=jmax).collect();
        let size = js.len();
        // basis radial profiles for this block
        let bases: Vec<BallPoly> = js
            .iter()
            .map(|&j| {
                ball_basis(
                    -1.0,
                    BasisIndex {
                        n: m + 2 * j,
                        j,
                        ell,
                    },
                    d,
                )
                .unwrap()
            })
            .collect();
        // stiffness: diagonal h^{-1}_{j,k} with lambda0 = d*eta
        let mut diag = vec![0.0; size];
        let mut off = vec![0.0; size.saturating_sub(1)];
        for (row, &j) in js.iter().enumerate() {
            let k = (m + 2 * j) as f64;
            let stiff = if j == 0 {
                df * p.eta + df * k
            } else {
                2.0 * df * (k + hd - 1.0)
            };
            diag[row] = stiff + p.lambda * inner_l2(&bases[row], &bases[row], 0.0);
            if row + 1 < size {
                off[row] = p.lambda * inner_l2(&bases[row], &bases[row + 1], 0.0);
            }
        }
        // right-hand side
        let mut rhs = vec![0.0; size];
        for (row, &j) in js.iter().enumerate() {
            let radial = bases[row].term(m, ell).unwrap();
            let mut ball = 0.0;
            for (&(rho, wr), &fp) in grid.radial.iter().zip(fprof) {
                ball += wr * radial.eval(rho * rho) * rho.powi(m as i32) * fp;
            }
            let trace = radial.value_at_one();
            let mut sphere = 0.0;
            if trace != 0.0 {
                let idx = HarmonicIndex::new(d, m, ell)?;
                for ((xi, w), &gv) in grid.sphere.iter().zip(&gvals) {
                    sphere += w * gv * sph_eval(idx, &xi[..d]);
                }
                sphere *= trace;
            }
            let _ = j;
            rhs[row] = ball + df * sphere;
        }
        // pack tridiagonal into the shared banded container
        let mut matrix = SymBand::zeros(size, 1.min(size.saturating_sub(1)));
        for row in 0..size {
            matrix.set(row, row, diag[row]);
            if row + 1 < size {
                matrix.set(row + 1, row, off[row]);
            }
        }
        blocks.push(GalerkinBlock {
            m,
            ell,
            js,
            matrix,
            rhs,
        });
    }
    Ok(GalerkinSystem { d, n, blocks })
}

/// Solve the Helmholtz problem; per-block LDL^T tridiagonal solves.
pub fn solve_helmholtz(p: &HelmholtzProblem, n: u32, grid: &BallQuadrature) -> Result<BallPoly> {
    let system = assemble_helmholtz(p, n, grid)?;
    let d = p.d;
    let solved: Vec<(u32, u32, Vec<u32>, Vec<f64>)> = system
        .blocks
        .par_iter()
        .map(|b| {
            let size = b.js.len();
            let mut diag = vec![0.0; size];
            let mut off = vec![0.0; size.saturating_sub(1)];
            for i in 0..size {
                diag[i] = b.matrix.get(i, i);
                if i + 1 < size {
                    off[i] = b.matrix.get(i + 1, i);
                }
            }
            let coeffs = tridiag_spd_solve(&diag, &off, &b.rhs)?;
            Ok((b.m, b.ell, b.js.clone(), coeffs))
        })
        .collect::<Result<_>>()?;
    let mut u = BallPoly::zero(d);
    for (m, ell, js, coeffs) in solved {
        for (&j, &c) in js.iter().zip(&coeffs) {
            if c != 0.0 {
                let basis = ball_basis(
                    -1.0,
                    BasisIndex {
                        n: m + 2 * j,
                        j,
                        ell,
                    },
                    d,
                )?;
                u = u.add_scaled(&basis, c);
            }
        }
    }
    Ok(u)
}

/// Assemble the biharmonic Galerkin system over the clamped trial space
/// {Q^{-2,k}_{j,ell}: j >= 2, k <= n} = (1-|x|^2)^2 Pi_{n-4}.
pub fn assemble_biharmonic(
    p: &BiharmonicProblem,
    n: u32,
    grid: &BallQuadrature,
) -> Result<GalerkinSystem> {
    if n < 4 {
        return Err(Error::InvalidParameter(format!(
            "biharmonic scheme needs n >= 4, got {n}"
        )));
    }
    if (grid.n as u32) < n {
        return Err(Error::GridTooCoarse {
            need: n as usize,
            got: grid.n,
        });
    }
    if grid.d != p.d {
        return Err(Error::UnsupportedDimension(grid.d));
    }
    let d = p.d;
    let sob = SobolevParams::with_default_lambdas(2, d)?;
    let fprofiles = radial_profiles_of(grid, n.saturating_sub(4), |x| (p.f)(x))?;

    let mut blocks = Vec::new();
    for &((m, ell), ref fprof) in fprofiles.iter() {
        let jmax = (n - m) / 2;
        if jmax < 2 {
            continue;
        }
        let js: Vec<u32> = (2..=jmax).collect();
        let size = js.len();
        let bases: Vec<BallPoly> = js
            .iter()
            .map(|&j| {
                q_basis(
                    &sob,
                    BasisIndex {
                        n: m + 2 * j,
                        j,
                        ell,
                    },
                    d,
                )
                .unwrap()
            })
            .collect();
        let laps: Vec<BallPoly> = bases.iter().map(|b| b.laplacian()).collect();
        let mut matrix = SymBand::zeros(size, 2.min(size.saturating_sub(1)));
        for row in 0..size {
            for col in row.saturating_sub(2)..=row {
                let stiff = inner_l2(&laps[row], &laps[col], 0.0);
                // <grad u, grad v> = -<Lap u, v>: traces vanish on the
                // trial space; symmetrize the two algebraic routes
                let grad = -0.5
                    * (inner_l2(&laps[row], &bases[col], 0.0)
                        + inner_l2(&bases[row], &laps[col], 0.0));
                let mass = inner_l2(&bases[row], &bases[col], 0.0);
                matrix.set(row, col, stiff + p.lambda1 * grad + p.lambda0 * mass);
            }
        }
        let mut rhs = vec![0.0; size];
        for row in 0..size {
            let radial = bases[row].term(m, ell).unwrap();
            let mut ball = 0.0;
            for (&(rho, wr), &fp) in grid.radial.iter().zip(fprof) {
                ball += wr * radial.eval(rho * rho) * rho.powi(m as i32) * fp;
            }
            rhs[row] = ball;
        }
        blocks.push(GalerkinBlock {
            m,
            ell,
            js,
            matrix,
            rhs,
        });
    }
    Ok(GalerkinSystem { d, n, blocks })
}

/// Solve the biharmonic problem; per-block banded Cholesky.
pub fn solve_biharmonic(p: &BiharmonicProblem, n: u32, grid: &BallQuadrature) -> Result<BallPoly> {
    let system = assemble_biharmonic(p, n, grid)?;
    let d = p.d;
    let sob = SobolevParams::with_default_lambdas(2, d)?;
    let solved: Vec<(u32, u32, Vec<u32>, Vec<f64>)> = system
        .blocks
        .par_iter()
        .map(|b| {
            let coeffs = b.matrix.cholesky_solve(&b.rhs)?;
            Ok((b.m, b.ell, b.js.clone(), coeffs))
        })
        .collect::<Result<_>>()?;
    let mut u = BallPoly::zero(d);
    for (m, ell, js, coeffs) in solved {
        for (&j, &c) in js.iter().zip(&coeffs) {
            if c != 0.0 {
                let basis = q_basis(
                    &sob,
                    BasisIndex {
                        n: m + 2 * j,
                        j,
                        ell,
                    },
                    d,
                )?;
                u = u.add_scaled(&basis, c);
            }
        }
    }
    Ok(u)
}

/// Either scheme, for the convergence driver.
pub enum Problem {
    Helmholtz(HelmholtzProblem),
    Biharmonic(BiharmonicProblem),
}

impl Problem {
    pub fn d(&self) -> usize {
        match self {
            Problem::Helmholtz(p) => p.d,
            Problem::Biharmonic(p) => p.d,
        }
    }

    pub fn solve(&self, n: u32, grid: &BallQuadrature) -> Result<BallPoly> {
        match self {
            Problem::Helmholtz(p) => solve_helmholtz(p, n, grid),
            Problem::Biharmonic(p) => solve_biharmonic(p, n, grid),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ConvergenceRow {
    pub n: u32,
    pub e_m: f64,
    pub e_l2: f64,
    pub wall_ms: f64,
}

#[derive(Clone, Debug)]
pub struct ConvergenceStudy {
    pub rows: Vec<ConvergenceRow>,
    /// Least-squares slope of log10(e_L2) against n over the pre-floor
    /// range (entries above 1e-12); NaN when fewer than two points remain.
    pub fitted_rate: f64,
}

/// Solve for each n in the list and measure errors against the exact
/// solution on the measuring grid of order grid_n.
pub fn convergence_study(
    problem: &Problem,
    n_list: &[u32],
    grid_n: usize,
    exact: &(dyn Fn(&[f64]) -> f64 + Sync),
) -> Result<ConvergenceStudy> {
    let nmax = n_list.iter().copied().max().unwrap_or(0);
    if (grid_n as u32) < nmax {
        return Err(Error::GridTooCoarse {
            need: nmax as usize,
            got: grid_n,
        });
    }
    let d = problem.d();
    let grid = crate::quadrature::build_grid(d, grid_n)?;
    let exact_vals: Vec<f64> = grid.points.iter().map(|p| exact(&p[..d])).collect();
    let rows: Vec<ConvergenceRow> = n_list
        .par_iter()
        .map(|&n| {
            let t0 = std::time::Instant::now();
            let u = problem.solve(n, &grid)?;
            let uvals = eval_on_grid(&grid, &u);
            let vol = grid.ball_volume();
            let mut e_m: f64 = 0.0;
            let mut e2 = 0.0;
            for ((&uv, &ev), &w) in uvals.iter().zip(&exact_vals).zip(&grid.weights) {
                let diff = uv - ev;
                e_m = e_m.max(diff.abs());
                e2 += vol * w * diff * diff;
            }
            Ok(ConvergenceRow {
                n,
                e_m,
                e_l2: e2.sqrt(),
                wall_ms: t0.elapsed().as_secs_f64() * 1e3,
            })
        })
        .collect::<Result<_>>()?;
    Ok(ConvergenceStudy {
        fitted_rate: fitted_rate(&rows),
        rows,
    })
}

/// Least-squares slope of log10(e_L2) vs n over entries above the 1e-12
/// floor.
pub fn fitted_rate(rows: &[ConvergenceRow]) -> f64 {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.e_l2 > 1e-12)
        .map(|r| (r.n as f64, r.e_l2.log10()))
        .collect();
    if pts.len() < 2 {
        return f64::NAN;
    }
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

/// The built-in example problems with their exact solutions.
pub mod examples {
    use super::*;

    /// d=2 Helmholtz with lambda=1, eta=0, exact solution
    /// u = 3 x1 - (x1^2 + x2^2) x1 (polynomial, recovered from n >= 5).
    pub fn exam1a() -> (HelmholtzProblem, Field) {
        let f: Field = Arc::new(|x: &[f64]| {
            let u2 = x[0] * x[0] + x[1] * x[1];
            x[0] * (11.0 - u2)
        });
        let g: Field = Arc::new(|_: &[f64]| 0.0);
        let exact: Field = Arc::new(|x: &[f64]| {
            let u2 = x[0] * x[0] + x[1] * x[1];
            x[0] * (3.0 - u2)
        });
        (HelmholtzProblem::new(2, 1.0, 0.0, f, g).unwrap(), exact)
    }

    /// d=3 Helmholtz with lambda=1, eta=1 and the harmonic rational
    /// solution u = (4 - x1^2 - x2^2) / (4 + x1^2 + x2^2 - 4 x1); f = u
    /// and g carries the normal-plus-Robin boundary data.
    pub fn exam1b() -> (HelmholtzProblem, Field) {
        let eta = 1.0;
        let u = |x: &[f64]| {
            let n = 4.0 - x[0] * x[0] - x[1] * x[1];
            let d = 4.0 + x[0] * x[0] + x[1] * x[1] - 4.0 * x[0];
            n / d
        };
        let f: Field = Arc::new(u);
        let g: Field = Arc::new(move |xi: &[f64]| {
            let den = 5.0 - xi[2] * xi[2] - 4.0 * xi[0];
            (4.0 * (1.0 - xi[2] * xi[2]) * (xi[0] - 4.0) + 16.0 * xi[0]) / (den * den)
                + eta * (3.0 + xi[2] * xi[2]) / den
        });
        let exact: Field = Arc::new(u);
        (HelmholtzProblem::new(3, 1.0, eta, f, g).unwrap(), exact)
    }

    /// d=2 biharmonic with lambda1 = lambda0 = 1 and radial exact solution
    /// u = cos(2 pi |x|^2) - 1; f is the operator applied to u in the
    /// radial variable.
    pub fn exam2() -> (BiharmonicProblem, Field) {
        let (l1, l0) = (1.0, 1.0);
        let exact: Field = Arc::new(|x: &[f64]| {
            let u: f64 = x.iter().map(|v| v * v).sum();
            (2.0 * std::f64::consts::PI * u).cos() - 1.0
        });
        let f: Field = Arc::new(move |x: &[f64]| {
            let u: f64 = x.iter().map(|v| v * v).sum();
            exam2_rhs_radial(u, l1, l0)
        });
        (BiharmonicProblem::new(2, l1, l0, f).unwrap(), exact)
    }

    /// (Lap^2 - l1 Lap + l0) applied to W(u) = cos(2 pi u) - 1 in d = 2,
    /// where Lap acts on radial profiles as 4 [u W'' + W'].
    pub fn exam2_rhs_radial(u: f64, l1: f64, l0: f64) -> f64 {
        let tp = 2.0 * std::f64::consts::PI;
        let (s, c) = (tp * u).sin_cos();
        let w = c - 1.0;
        let lap = -4.0 * tp * tp * u * c - 2.0 * 4.0 * std::f64::consts::PI * s;
        let lap2 = 512.0 * std::f64::consts::PI.powi(3) * u * s
            + 256.0 * std::f64::consts::PI.powi(4) * u * u * c
            - 128.0 * std::f64::consts::PI.powi(2) * c;
        lap2 - l1 * lap + l0 * w
    }
}
