//! Batch front-end: identity-check suites, projections, solves, and
//! convergence studies, with CSV tables and SVG error plots as outputs.

use std::io::Write as _;
use std::path::PathBuf;
use std::sync::Arc;

use serde::Deserialize;

use crate::ballbasis::{
    ball_basis, ball_norm, basis_indices_upto, check_laplacian_reduction, check_monic_derivative,
    check_negative_mu_factorization, BasisIndex,
};
use crate::ballfun::{inner_l2, BallPoly};
use crate::chebseries::RadialPoly;
use crate::harmonics::{harmonic_dim, HarmonicIndex};
use crate::jacobi::{
    gauss_jacobi_rule, gjacobi_derivative, gjacobi_eval, gjacobi_value_at_one, pochhammer,
    JacobiParams,
};
use crate::quadrature::{build_grid, discrete_inner, error_metrics, eval_on_grid};
use crate::sobolev::{
    check_boundary_projection, check_factorization, delta_boundary_constant, lift_eval, q_basis,
    q_norm, sobolev_inner, SobolevParams,
};
use crate::solvers::{
    convergence_study, BiharmonicProblem, ConvergenceRow, ConvergenceStudy, Field,
    HelmholtzProblem, Problem,
};
use crate::transforms::{
    check_commutation_mu, check_commutation_sobolev, cutoff_eval, partial_sum, project_classical,
    project_classical_fn, project_sobolev, project_sobolev_fn_s1, project_sobolev_fn_s2,
    SpectralCoeffs,
};
use crate::util::SplitMix64;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Check,
    Project,
    SolveHelmholtz,
    SolveBiharmonic,
    Convergence,
}

impl Command {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "check" => Ok(Command::Check),
            "project" => Ok(Command::Project),
            "solve-helmholtz" => Ok(Command::SolveHelmholtz),
            "solve-biharmonic" => Ok(Command::SolveBiharmonic),
            "convergence" => Ok(Command::Convergence),
            other => Err(Error::Config(format!("unknown command {other:?}"))),
        }
    }

    fn label(&self) -> &'static str {
        match self {
            Command::Check => "check",
            Command::Project => "project",
            Command::SolveHelmholtz => "solve-helmholtz",
            Command::SolveBiharmonic => "solve-biharmonic",
            Command::Convergence => "convergence",
        }
    }
}

/// Everything a run needs; mirrors the CLI flags and the TOML config file.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: String,
    #[serde(default = "default_d")]
    pub d: usize,
    #[serde(default)]
    pub n: Option<u32>,
    #[serde(default)]
    pub nlist: Option<String>,
    #[serde(default = "default_nmax")]
    pub nmax: u32,
    #[serde(default = "default_s")]
    pub s: u32,
    #[serde(default)]
    pub mu: f64,
    #[serde(default = "default_one")]
    pub lambda: f64,
    #[serde(default)]
    pub eta: f64,
    #[serde(default = "default_one")]
    pub lambda1: f64,
    #[serde(default = "default_one")]
    pub lambda0: f64,
    #[serde(default)]
    pub example: Option<String>,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub grid_n: Option<usize>,
    #[serde(default)]
    pub family: Option<String>,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub out_svg: Option<PathBuf>,
    #[serde(default)]
    pub coeffs: Option<PathBuf>,
    #[serde(default)]
    pub field: Option<PathBuf>,
}

fn default_d() -> usize {
    2
}
fn default_nmax() -> u32 {
    10
}
fn default_s() -> u32 {
    2
}
fn default_one() -> f64 {
    1.0
}
fn default_seed() -> u64 {
    7
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    /// Parse "a..b" (inclusive), "a..b..step", or a comma list.
    pub fn parse_nlist(spec: &str) -> Result<Vec<u32>> {
        let bad = || Error::Config(format!("cannot parse n list {spec:?}"));
        if spec.contains("..") {
            let parts: Vec<&str> = spec.split("..").filter(|p| !p.is_empty()).collect();
            if parts.len() < 2 || parts.len() > 3 {
                return Err(bad());
            }
            let a: u32 = parts[0].parse().map_err(|_| bad())?;
            let b: u32 = parts[1].parse().map_err(|_| bad())?;
            let step: u32 = if parts.len() == 3 {
                parts[2].parse().map_err(|_| bad())?
            } else {
                1
            };
            if b < a || step == 0 {
                return Err(bad());
            }
            Ok((a..=b).step_by(step as usize).collect())
        } else {
            spec.split(',')
                .map(|p| p.trim().parse().map_err(|_| bad()))
                .collect()
        }
    }

    fn n_values(&self) -> Result<Vec<u32>> {
        if let Some(list) = &self.nlist {
            return Self::parse_nlist(list);
        }
        if let Some(n) = self.n {
            return Ok(vec![n]);
        }
        Err(Error::Config("one of n or nlist is required".into()))
    }
}

struct CheckLine {
    name: &'static str,
    residual: f64,
    tol: f64,
}

impl CheckLine {
    fn pass(&self) -> bool {
        self.residual.is_finite() && self.residual <= self.tol
    }
}

/// Built-in example registry: problem + exact solution, keyed by name.
fn example_problem(name: &str) -> Result<(Problem, Field)> {
    match name {
        "exam1a" => {
            let (p, exact) = crate::solvers::examples::exam1a();
            Ok((Problem::Helmholtz(p), exact))
        }
        "exam1b" => {
            let (p, exact) = crate::solvers::examples::exam1b();
            Ok((Problem::Helmholtz(p), exact))
        }
        "exam2" => {
            let (p, exact) = crate::solvers::examples::exam2();
            Ok((Problem::Biharmonic(p), exact))
        }
        other => Err(Error::Config(format!(
            "unknown example {other:?} (expected exam1a, exam1b, exam2, or manufactured)"
        ))),
    }
}

/// Random polynomial exact solution for regression runs.
fn manufactured_poly(d: usize, degree: u32, seed: u64) -> BallPoly {
    let mut rng = SplitMix64::new(seed);
    let mut f = BallPoly::constant(d, rng.next_sym());
    for m in 0..=degree.min(4) {
        let dim = harmonic_dim(d, m).unwrap();
        let ell = 1 + (rng.next_u64() % dim as u64) as u32;
        let qdeg = ((degree - m) / 2) as usize;
        let coefs: Vec<f64> = (0..=qdeg).map(|_| rng.next_sym()).collect();
        f.add_term(m, ell, RadialPoly::from_monomial(&coefs));
    }
    f
}

fn manufactured_helmholtz(d: usize, lambda: f64, eta: f64, seed: u64) -> Result<(Problem, Field)> {
    let u = manufactured_poly(d, 5, seed);
    let fpoly = u.laplacian().scale(-1.0).add_scaled(&u, lambda);
    let f: Field = {
        let fp = fpoly;
        Arc::new(move |x: &[f64]| fp.eval(x))
    };
    // g = du/dn + eta u on the sphere, from the exact trace maps
    let mut gtr = u.normal_derivative_trace();
    for (k, v) in u.boundary_trace() {
        *gtr.entry(k).or_insert(0.0) += eta * v;
    }
    let g: Field = Arc::new(move |xi: &[f64]| {
        let d = xi.len();
        gtr.iter()
            .map(|(&(m, ell), &c)| c * crate::harmonics::sph_eval(HarmonicIndex { d, m, ell }, xi))
            .sum()
    });
    let exact: Field = {
        let up = u;
        Arc::new(move |x: &[f64]| up.eval(x))
    };
    Ok((
        Problem::Helmholtz(HelmholtzProblem::new(d, lambda, eta, f, g)?),
        exact,
    ))
}

fn manufactured_biharmonic(d: usize, l1: f64, l0: f64, seed: u64) -> Result<(Problem, Field)> {
    let u = manufactured_poly(d, 3, seed).mul_radial(&RadialPoly::one_minus_u_pow(2));
    let fpoly = u
        .laplacian_pow(2)
        .add_scaled(&u.laplacian(), -l1)
        .add_scaled(&u, l0);
    let f: Field = {
        let fp = fpoly;
        Arc::new(move |x: &[f64]| fp.eval(x))
    };
    let exact: Field = {
        let up = u;
        Arc::new(move |x: &[f64]| up.eval(x))
    };
    Ok((
        Problem::Biharmonic(BiharmonicProblem::new(d, l1, l0, f)?),
        exact,
    ))
}

fn write_results_csv(
    path: &PathBuf,
    command: Command,
    d: usize,
    rows: &[ConvergenceRow],
    rate: f64,
) -> Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(out, "command,d,n,e_M,e_L2,fitted_rate,wall_ms")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{:.16e},{:.16e},{:.16e},{:.3}",
            command.label(),
            d,
            r.n,
            r.e_m,
            r.e_l2,
            rate,
            r.wall_ms
        )?;
    }
    Ok(())
}

fn write_field_csv(path: &PathBuf, d: usize, grid_n: usize, u: &BallPoly) -> Result<()> {
    let grid = build_grid(d, grid_n)?;
    let vals = eval_on_grid(&grid, u);
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    if d == 2 {
        writeln!(out, "x1,x2,u")?;
    } else {
        writeln!(out, "x1,x2,x3,u")?;
    }
    for (p, v) in grid.points.iter().zip(vals) {
        for c in &p[..d] {
            write!(out, "{c:.16e},")?;
        }
        writeln!(out, "{v:.16e}")?;
    }
    Ok(())
}

/// Run a configuration. Returns true when every internal check passed.
pub fn run(cfg: &RunConfig) -> Result<bool> {
    match Command::parse(&cfg.command)? {
        Command::Check => run_check(cfg),
        Command::Project => run_project(cfg),
        Command::SolveHelmholtz => run_solve(cfg, Command::SolveHelmholtz),
        Command::SolveBiharmonic => run_solve(cfg, Command::SolveBiharmonic),
        Command::Convergence => run_solve(cfg, Command::Convergence),
    }
}

fn run_project(cfg: &RunConfig) -> Result<bool> {
    let n = cfg
        .n
        .ok_or_else(|| Error::Config("project requires n".into()))?;
    let name = cfg.example.as_deref().unwrap_or("exam1a");
    let family = cfg.family.as_deref().unwrap_or("classical");
    let grid_n = cfg.grid_n.unwrap_or(2 * n as usize + 6);
    let (coeffs, d, target): (SpectralCoeffs, usize, Field) = match (name, family) {
        ("exam1a", "classical") => {
            let (_, exact) = crate::solvers::examples::exam1a();
            let grid = build_grid(2, grid_n)?;
            let c = project_classical_fn(|x| exact(x), cfg.mu, n, &grid)?;
            (c, 2, exact)
        }
        ("exam1a", "sobolev") => {
            // the exact solution is x1 (3 - |x|^2): project exactly
            let y = BallPoly::solid_harmonic(HarmonicIndex::new(2, 1, 1).unwrap())
                .mul_radial(&RadialPoly::from_monomial(&[3.0, -1.0]))
                .scale(1.0 / 2f64.sqrt());
            let p = SobolevParams::with_default_lambdas(cfg.s, 2)?;
            let c = project_sobolev(&y, &p, n);
            let (_, exact) = crate::solvers::examples::exam1a();
            (c, 2, exact)
        }
        ("exam1b", "classical") => {
            let (_, exact) = crate::solvers::examples::exam1b();
            let grid = build_grid(3, grid_n)?;
            let c = project_classical_fn(|x| exact(x), cfg.mu, n, &grid)?;
            (c, 3, exact)
        }
        ("exam1b", "sobolev") => {
            let (_, exact) = crate::solvers::examples::exam1b();
            let grid = build_grid(3, grid_n)?;
            let grad = |x: &[f64]| -> [f64; 3] {
                let nm = 4.0 - x[0] * x[0] - x[1] * x[1];
                let dn = 4.0 + x[0] * x[0] + x[1] * x[1] - 4.0 * x[0];
                [
                    (-2.0 * x[0] * dn - nm * (2.0 * x[0] - 4.0)) / (dn * dn),
                    (-2.0 * x[1] * dn - nm * 2.0 * x[1]) / (dn * dn),
                    0.0,
                ]
            };
            let c = match cfg.s {
                1 => project_sobolev_fn_s1(3, 3.0, n, |x| exact(x), grad, &grid)?,
                2 => project_sobolev_fn_s2(3, 3.0, n, |x| exact(x), |_| 0.0, &grid)?,
                s => {
                    return Err(Error::Config(format!(
                        "callable sobolev projection supports s in {{1,2}}, got {s}"
                    )))
                }
            };
            (c, 3, exact)
        }
        ("exam2", "classical") => {
            let (_, exact) = crate::solvers::examples::exam2();
            let grid = build_grid(2, grid_n)?;
            let c = project_classical_fn(|x| exact(x), cfg.mu, n, &grid)?;
            (c, 2, exact)
        }
        ("exam2", "sobolev") => {
            let (_, exact) = crate::solvers::examples::exam2();
            let grid = build_grid(2, grid_n)?;
            let tp = 2.0 * std::f64::consts::PI;
            let grad = move |x: &[f64]| -> [f64; 3] {
                let u: f64 = x.iter().map(|v| v * v).sum();
                let w = -tp * (tp * u).sin();
                [2.0 * x[0] * w, 2.0 * x[1] * w, 0.0]
            };
            let lap = move |x: &[f64]| -> f64 {
                let u: f64 = x.iter().map(|v| v * v).sum();
                -4.0 * tp * tp * u * (tp * u).cos() - 4.0 * tp * (tp * u).sin()
            };
            let c = match cfg.s {
                1 => project_sobolev_fn_s1(2, 2.0, n, |x| exact(x), grad, &grid)?,
                2 => project_sobolev_fn_s2(2, 2.0, n, |x| exact(x), lap, &grid)?,
                s => {
                    return Err(Error::Config(format!(
                        "callable sobolev projection supports s in {{1,2}}, got {s}"
                    )))
                }
            };
            (c, 2, exact)
        }
        (name, fam) => {
            return Err(Error::Config(format!(
                "no projection route for example {name:?} with family {fam:?}"
            )))
        }
    };
    let path = cfg
        .coeffs
        .clone()
        .unwrap_or_else(|| PathBuf::from("coeffs.csv"));
    let mut out = std::io::BufWriter::new(std::fs::File::create(&path)?);
    coeffs.write_csv(&mut out)?;
    drop(out);
    // reconstruction errors as the results row
    let grid = build_grid(d, grid_n)?;
    let sn = partial_sum(&coeffs, n, None);
    let t0 = std::time::Instant::now();
    let (e_m, e_l2) = error_metrics(&grid, |x| target(x) - sn.eval(x));
    let row = ConvergenceRow {
        n,
        e_m,
        e_l2,
        wall_ms: t0.elapsed().as_secs_f64() * 1e3,
    };
    let rpath = cfg
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from("results.csv"));
    write_results_csv(&rpath, Command::Project, d, &[row], f64::NAN)?;
    println!(
        "project {name} ({family}, n={n}): e_M={e_m:.3e} e_L2={e_l2:.3e} -> {} and {}",
        path.display(),
        rpath.display()
    );
    Ok(true)
}

fn run_solve(cfg: &RunConfig, cmd: Command) -> Result<bool> {
    let ns = cfg.n_values()?;
    let nmax = *ns.iter().max().unwrap();
    let grid_n = cfg.grid_n.unwrap_or((nmax as usize).max(8));
    let name = cfg.example.as_deref().unwrap_or(match cmd {
        Command::SolveBiharmonic => "exam2",
        _ => "exam1a",
    });
    let (problem, exact) = match (name, cmd) {
        ("manufactured", Command::SolveBiharmonic) => {
            manufactured_biharmonic(cfg.d, cfg.lambda1, cfg.lambda0, cfg.seed)?
        }
        ("manufactured", _) => manufactured_helmholtz(cfg.d, cfg.lambda, cfg.eta, cfg.seed)?,
        (name, _) => example_problem(name)?,
    };
    // a solve command must match the example's equation type
    match (&problem, cmd) {
        (Problem::Helmholtz(_), Command::SolveBiharmonic) => {
            return Err(Error::Config(format!(
                "example {name:?} is a Helmholtz problem; use solve-helmholtz"
            )));
        }
        (Problem::Biharmonic(_), Command::SolveHelmholtz) => {
            return Err(Error::Config(format!(
                "example {name:?} is a biharmonic problem; use solve-biharmonic"
            )));
        }
        _ => {}
    }
    let study: ConvergenceStudy = convergence_study(&problem, &ns, grid_n, &|x: &[f64]| exact(x))?;
    let d = problem.d();
    let rpath = cfg
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from("results.csv"));
    write_results_csv(&rpath, cmd, d, &study.rows, study.fitted_rate)?;
    let svg_path = cfg.out_svg.clone().unwrap_or_else(|| {
        PathBuf::from(match cmd {
            Command::Convergence => "convergence.svg",
            Command::SolveBiharmonic => "solve-biharmonic.svg",
            _ => "solve-helmholtz.svg",
        })
    });
    let plot_rows: Vec<(u32, f64, f64)> = study.rows.iter().map(|r| (r.n, r.e_m, r.e_l2)).collect();
    std::fs::write(
        &svg_path,
        crate::svg::error_plot(&plot_rows, &format!("{name}: errors vs n (d={d})")),
    )?;
    if let Some(field) = &cfg.field {
        let u = problem.solve(nmax, &build_grid(d, grid_n)?)?;
        write_field_csv(field, d, grid_n, &u)?;
    }
    if let Some(cpath) = &cfg.coeffs {
        let u = problem.solve(nmax, &build_grid(d, grid_n)?)?;
        let coeffs = match &problem {
            Problem::Helmholtz(_) => project_classical(&u, 0.0, nmax),
            Problem::Biharmonic(_) => {
                let p = SobolevParams::with_default_lambdas(2, d)?;
                project_sobolev(&u, &p, nmax)
            }
        };
        let mut out = std::io::BufWriter::new(std::fs::File::create(cpath)?);
        coeffs.write_csv(&mut out)?;
    }
    for r in &study.rows {
        println!(
            "{} {name} n={:>3}: e_M={:.3e} e_L2={:.3e} ({:.1} ms)",
            cmd.label(),
            r.n,
            r.e_m,
            r.e_l2,
            r.wall_ms
        );
    }
    if study.rows.len() > 1 {
        println!("fitted rate (log10 e_L2 per n): {:.4}", study.fitted_rate);
    }
    println!("wrote {} and {}", rpath.display(), svg_path.display());
    Ok(true)
}

fn run_check(cfg: &RunConfig) -> Result<bool> {
    let d = cfg.d;
    if d != 2 && d != 3 {
        return Err(Error::UnsupportedDimension(d));
    }
    let s = cfg.s;
    let nmax = cfg.nmax.clamp(4, 16);
    let mut lines: Vec<CheckLine> = Vec::new();

    // Gauss-Jacobi rules against analytic moments
    {
        let mut worst: f64 = 0.0;
        for (nr, a, b) in [(8usize, 0.0, 0.0), (16, 0.0, 0.5), (12, 1.0, 0.0)] {
            let p = JacobiParams::new(a, b);
            let rule = gauss_jacobi_rule(nr, p)?;
            // moment recurrence
            let mut m = vec![rule.total()];
            m.push((b - a) * m[0] / (a + b + 2.0));
            for k in 2..=(2 * nr + 1) {
                let v =
                    ((b - a) * m[k - 1] + (k as f64 - 1.0) * m[k - 2]) / (k as f64 + a + b + 1.0);
                m.push(v);
            }
            for (k, want) in m.iter().enumerate() {
                let got = rule.integrate(|t| t.powi(k as i32));
                worst = worst.max((got - want).abs() / want.abs().max(m[0] * 1e-4));
            }
        }
        lines.push(CheckLine {
            name: "gauss-jacobi moment exactness",
            residual: worst,
            tol: 1e-12,
        });
    }

    // grid normalization <1,1> = 1
    {
        let q = build_grid(d, nmax as usize)?;
        let r = (discrete_inner(&q, |_| 1.0, |_| 1.0) - 1.0).abs();
        lines.push(CheckLine {
            name: "grid normalization",
            residual: r,
            tol: 1e-12,
        });
    }

    // classical Gram diagonality for mu in {0, 1, 2}
    {
        let mut worst: f64 = 0.0;
        let gn = nmax.min(10);
        for mu in [0.0, 1.0, 2.0] {
            let all = basis_indices_upto(d, gn);
            let polys: Vec<(BasisIndex, BallPoly)> = all
                .iter()
                .map(|&ix| (ix, ball_basis(mu, ix, d).unwrap()))
                .collect();
            for (i, (ia, pa)) in polys.iter().enumerate() {
                for (ib, pb) in polys.iter().skip(i) {
                    let g = inner_l2(pa, pb, mu);
                    if ia == ib {
                        let h = ball_norm(mu, ia.n, ia.j, d)?;
                        worst = worst.max((g - h).abs() / h);
                    } else {
                        worst = worst.max(g.abs());
                    }
                }
            }
        }
        lines.push(CheckLine {
            name: "classical Gram diagonality",
            residual: worst,
            tol: 1e-8,
        });
    }

    // Sobolev Gram diagonality for the requested s
    {
        let p = SobolevParams::with_default_lambdas(s, d)?;
        let gn = nmax.min(10);
        let all = basis_indices_upto(d, gn);
        let polys: Vec<(BasisIndex, BallPoly)> = all
            .iter()
            .map(|&ix| (ix, q_basis(&p, ix, d).unwrap()))
            .collect();
        let mut worst: f64 = 0.0;
        for (i, (ia, pa)) in polys.iter().enumerate() {
            for (ib, pb) in polys.iter().skip(i) {
                let g = sobolev_inner(pa, pb, &p);
                if ia == ib {
                    let h = q_norm(&p, ia.n, ia.j, d);
                    worst = worst.max((g - h).abs() / h.abs().max(1.0));
                } else {
                    let scale = (q_norm(&p, ia.n, ia.j, d) * q_norm(&p, ib.n, ib.j, d))
                        .sqrt()
                        .max(1.0);
                    worst = worst.max(g.abs() / scale);
                }
            }
        }
        lines.push(CheckLine {
            name: "sobolev Gram diagonality",
            residual: worst,
            tol: 1e-8,
        });
    }

    // factorization of the negative-mu basis
    {
        let mut worst: f64 = 0.0;
        for sp in 1..=3u32 {
            for n in (2 * sp)..=nmax.min(2 * sp + 4) {
                for j in sp..=n / 2 {
                    let idx = BasisIndex::new(d, n, j, 1)?;
                    worst = worst.max(check_negative_mu_factorization(sp, idx, d)?);
                }
            }
        }
        lines.push(CheckLine {
            name: "negative-mu factorization",
            residual: worst,
            tol: 1e-10,
        });
    }

    // Laplacian reduction identity
    {
        let mut worst: f64 = 0.0;
        let mut structural_ok = true;
        for sp in 1..=3u32 {
            for k in 1..=2u32 {
                for n in (2 * k)..=nmax.min(2 * k + 6) {
                    for j in 0..=n / 2 {
                        let idx = BasisIndex::new(d, n, j, 1)?;
                        let rep = check_laplacian_reduction(sp, k, idx, d)?;
                        worst = worst.max(rep.offblock_residual);
                        if j + k >= sp && rep.remainder_degree.is_some() {
                            structural_ok = false;
                        }
                        if let (Some(deg), bound) = (rep.remainder_degree, rep.degree_bound) {
                            match bound {
                                Some(b) if deg <= b => {}
                                _ => structural_ok = false,
                            }
                        }
                    }
                }
            }
        }
        if !structural_ok {
            worst = f64::INFINITY;
        }
        lines.push(CheckLine {
            name: "Laplacian reduction identity",
            residual: worst,
            tol: 1e-10,
        });
    }

    // boundary constants of Lap^k[(1-u)^j Y]
    {
        let mut worst: f64 = 0.0;
        for n in 0..=3u32 {
            for j in 0..=4u32 {
                let y = BallPoly::solid_harmonic(HarmonicIndex::new(d, n, 1)?);
                let f = y.mul_radial(&RadialPoly::one_minus_u_pow(j as usize));
                for k in 0..=4u32 {
                    let tr = f
                        .laplacian_pow(k as usize)
                        .boundary_trace()
                        .get(&(n, 1))
                        .copied()
                        .unwrap_or(0.0);
                    let want = delta_boundary_constant(d, n, j, k);
                    worst = worst.max((tr - want).abs() / want.abs().max(1.0));
                }
            }
        }
        lines.push(CheckLine {
            name: "radial-power boundary constants",
            residual: worst,
            tol: 1e-9,
        });
    }

    // harmonic lift identities
    {
        let mut worst: f64 = 0.0;
        for n in 0..=3u32 {
            for j in 0..=4u32 {
                let y = lift_eval(d, n, j, 1)?;
                let lap = y.laplacian();
                let prev = if j == 0 {
                    BallPoly::zero(d)
                } else {
                    lift_eval(d, n, j - 1, 1)?
                };
                let diff = lap.add_scaled(&prev, -1.0);
                for x in crate::util::points_in_ball(d, 8, 5 + j as u64) {
                    worst = worst.max(diff.eval(&x).abs());
                }
                for k in 0..=j {
                    let tr = y
                        .laplacian_pow(k as usize)
                        .boundary_trace()
                        .get(&(n, 1))
                        .copied()
                        .unwrap_or(0.0);
                    let want = if k == j { 1.0 } else { 0.0 };
                    worst = worst.max((tr - want).abs());
                }
            }
        }
        lines.push(CheckLine {
            name: "harmonic lift identities",
            residual: worst,
            tol: 1e-12,
        });
    }

    // Sobolev basis trace structure
    {
        let p = SobolevParams::with_default_lambdas(s, d)?;
        let half = s.div_ceil(2);
        let mut worst: f64 = 0.0;
        for n in 0..=nmax.min(8) {
            for j in 0..=n / 2 {
                let idx = BasisIndex::new(d, n, j, 1)?;
                let q = q_basis(&p, idx, d)?;
                for k in 0..half {
                    let lap = q.laplacian_pow(k as usize);
                    for (&(m, ell), &v) in &lap.boundary_trace() {
                        let want = if j == k && m == n - 2 * j && ell == 1 {
                            1.0
                        } else {
                            0.0
                        };
                        worst = worst.max((v - want).abs());
                    }
                }
            }
        }
        lines.push(CheckLine {
            name: "sobolev basis boundary traces",
            residual: worst,
            tol: 1e-9,
        });
    }

    // boundary projection commutation
    {
        let p = SobolevParams::with_default_lambdas(s, d)?;
        let f = manufactured_poly(d, 6, 0x90);
        let mut worst: f64 = 0.0;
        for n in [4u32, nmax.min(8)] {
            for k in 0..s.div_ceil(2).min(2) {
                worst = worst.max(check_boundary_projection(&p, n, k, &f, d)?);
            }
        }
        lines.push(CheckLine {
            name: "boundary projection commutation",
            residual: worst,
            tol: 1e-9,
        });
    }

    // factorization of projections
    {
        let g = manufactured_poly(d, 4, 0x91);
        let mut worst: f64 = 0.0;
        for sp in 1..=s.max(2) {
            worst = worst.max(check_factorization(sp, nmax.min(10), &g, d)?);
        }
        lines.push(CheckLine {
            name: "projection factorization",
            residual: worst,
            tol: 1e-9,
        });
    }

    // derivative commutation, classical
    {
        let f = manufactured_poly(d, 8, 0x92);
        let mut worst: f64 = 0.0;
        for mu in [0.0, 1.0] {
            for i in 0..d {
                worst = worst.max(check_commutation_mu(&f, mu, 5, i));
            }
        }
        lines.push(CheckLine {
            name: "commutation d_i S_n^mu",
            residual: worst,
            tol: 1e-9,
        });
    }

    // commutation, Sobolev
    {
        let f = manufactured_poly(d, 8, 0x93);
        let mut worst: f64 = 0.0;
        for sp in 1..=s.clamp(3, 4) {
            let p = SobolevParams::with_default_lambdas(sp, d)?;
            let rep = check_commutation_sobolev(&f, &p, 6);
            if let Some(g) = rep.gradient {
                worst = worst.max(g);
            }
            worst = worst.max(rep.delta);
        }
        lines.push(CheckLine {
            name: "commutation of S_n^{-s}",
            residual: worst,
            tol: 1e-8,
        });
    }

    // generalized Jacobi derivative, factorization, and boundary identities
    {
        let mut worst_diffp: f64 = 0.0;
        let h = 1e-6;
        for p in [JacobiParams::new(-2.0, 1.0), JacobiParams::new(0.5, 0.0)] {
            for j in 1..8u32 {
                for &t in &[-0.5, 0.1, 0.6] {
                    let fd = (gjacobi_eval(p, j as i64, t + h) - gjacobi_eval(p, j as i64, t - h))
                        / (2.0 * h);
                    let an = gjacobi_derivative(p, j, t);
                    worst_diffp = worst_diffp.max((fd - an).abs() / an.abs().max(1.0));
                }
            }
        }
        lines.push(CheckLine {
            name: "generalized Jacobi derivative",
            residual: worst_diffp,
            tol: 1e-7,
        });

        let mut worst_jacpn: f64 = 0.0;
        for sp in 1..=3u32 {
            for &b in &[0.0, 0.5, 2.0] {
                for j in sp..=(sp + 6) {
                    for &t in &[-0.8, 0.35, 0.9] {
                        let lhs = gjacobi_eval(JacobiParams::new(-(sp as f64), b), j as i64, t);
                        let rhs = ((t - 1.0) / 2.0).powi(sp as i32)
                            * gjacobi_eval(JacobiParams::new(sp as f64, b), (j - sp) as i64, t)
                            / pochhammer((j - sp) as f64 + 1.0, sp);
                        worst_jacpn = worst_jacpn.max((lhs - rhs).abs() / lhs.abs().max(1.0));
                    }
                }
            }
        }
        lines.push(CheckLine {
            name: "negative-parameter factorization",
            residual: worst_jacpn,
            tol: 1e-11,
        });

        let mut worst_bndp: f64 = 0.0;
        for p in [
            JacobiParams::new(0.0, 0.5),
            JacobiParams::new(-1.0, 2.0),
            JacobiParams::new(-2.0, 0.0),
        ] {
            for j in 0..=10u32 {
                let direct = gjacobi_eval(p, j as i64, 1.0);
                let closed = gjacobi_value_at_one(p, j);
                worst_bndp = worst_bndp.max((direct - closed).abs() / closed.abs().max(1.0));
            }
        }
        lines.push(CheckLine {
            name: "Jacobi boundary values",
            residual: worst_bndp,
            tol: 1e-12,
        });
    }

    // monic derivative identity
    {
        let mut worst: f64 = 0.0;
        let cases: &[(f64, &[u32], &[u32])] = if d == 2 {
            &[
                (0.0, &[2, 1], &[1, 0]),
                (1.0, &[3, 0], &[2, 0]),
                (2.0, &[4, 1], &[2, 1]),
            ]
        } else {
            &[(0.0, &[2, 2, 1], &[1, 1, 0]), (1.0, &[3, 0, 1], &[2, 0, 0])]
        };
        for (mu, alpha, beta) in cases {
            worst = worst.max(check_monic_derivative(*mu, alpha, beta, d));
        }
        lines.push(CheckLine {
            name: "monic derivative identity",
            residual: worst,
            tol: 1e-11,
        });
    }

    // reproduction of polynomials by all three partial sums
    {
        let f = manufactured_poly(d, nmax.min(6), 0x94);
        let n = f.total_degree().unwrap() as u32;
        let grid = build_grid(d, n as usize + 2)?;
        let mut worst: f64 = 0.0;
        let c = project_classical(&f, 0.0, n);
        let plain = partial_sum(&c, n, None);
        let withcut = partial_sum(&c, n, Some(&cutoff_eval));
        let p = SobolevParams::with_default_lambdas(s, d)?;
        let sob = partial_sum(&project_sobolev(&f, &p, n), n, None);
        for rec in [&plain, &withcut, &sob] {
            let (em, _) = error_metrics(&grid, |x| f.eval(x) - rec.eval(x));
            worst = worst.max(em / f.coeff_scale().max(1.0));
        }
        lines.push(CheckLine {
            name: "partial-sum reproduction on Pi_n",
            residual: worst,
            tol: 1e-12,
        });
    }

    let mut all = true;
    for l in &lines {
        let ok = l.pass();
        all &= ok;
        println!(
            "check {:<42} residual {:>10.3e} (tol {:>7.0e}) {}",
            l.name,
            l.residual,
            l.tol,
            if ok { "PASS" } else { "FAIL" }
        );
    }
    println!(
        "check summary: {}/{} suites passed (d={d}, s={s}, nmax={nmax})",
        lines.iter().filter(|l| l.pass()).count(),
        lines.len()
    );
    Ok(all)
}
