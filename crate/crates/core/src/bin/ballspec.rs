//! Command-line front-end for the spectral library: identity checks,
//! projections, Helmholtz/biharmonic solves, and convergence studies.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ballspec::cli::{run, RunConfig};

#[derive(Parser)]
#[command(
    name = "ballspec",
    about = "Spectral approximation and Galerkin solvers on the disk and ball",
    version
)]
struct Cli {
    /// Read the whole configuration from a TOML file instead of flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Option<Cmd>,
}

#[derive(Args, Clone, Default)]
struct Common {
    /// Dimension (2 = disk, 3 = ball).
    #[arg(long, default_value_t = 2)]
    d: usize,
    /// Single polynomial order.
    #[arg(long)]
    n: Option<u32>,
    /// Orders as "a..b", "a..b..step", or "a,b,c".
    #[arg(long)]
    nlist: Option<String>,
    /// Built-in example (exam1a, exam1b, exam2) or "manufactured".
    #[arg(long)]
    example: Option<String>,
    /// Measuring/quadrature grid order (defaults to max n).
    #[arg(long)]
    grid_n: Option<usize>,
    /// Seed for manufactured solutions.
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Results CSV path (default results.csv).
    #[arg(long)]
    out: Option<PathBuf>,
    /// SVG error-plot path.
    #[arg(long)]
    out_svg: Option<PathBuf>,
    /// Coefficient CSV path.
    #[arg(long)]
    coeffs: Option<PathBuf>,
    /// Sampled-field CSV path.
    #[arg(long)]
    field: Option<PathBuf>,
}

#[derive(Subcommand, Clone)]
enum Cmd {
    /// Run the identity and orthogonality suites.
    Check {
        #[command(flatten)]
        common: Common,
        /// Sobolev order of the inner product.
        #[arg(long, default_value_t = 2)]
        s: u32,
        /// Largest degree used in the suites.
        #[arg(long, default_value_t = 10)]
        nmax: u32,
    },
    /// Project a built-in function and export the coefficients.
    Project {
        #[command(flatten)]
        common: Common,
        /// Family: classical or sobolev.
        #[arg(long, default_value = "classical")]
        family: String,
        /// Classical weight exponent.
        #[arg(long, default_value_t = 0.0)]
        mu: f64,
        /// Sobolev order.
        #[arg(long, default_value_t = 1)]
        s: u32,
    },
    /// Solve the Helmholtz problem.
    SolveHelmholtz {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        #[arg(long, default_value_t = 0.0)]
        eta: f64,
    },
    /// Solve the biharmonic problem.
    SolveBiharmonic {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1.0)]
        lambda1: f64,
        #[arg(long, default_value_t = 1.0)]
        lambda0: f64,
    },
    /// Errors against the exact solution over a range of orders.
    Convergence {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        #[arg(long, default_value_t = 0.0)]
        eta: f64,
        #[arg(long, default_value_t = 1.0)]
        lambda1: f64,
        #[arg(long, default_value_t = 1.0)]
        lambda0: f64,
    },
}

fn to_config(cmd: Cmd) -> RunConfig {
    let (command, common, s, nmax, mu, family, lambda, eta, lambda1, lambda0) = match cmd {
        Cmd::Check { common, s, nmax } => ("check", common, s, nmax, 0.0, None, 1.0, 0.0, 1.0, 1.0),
        Cmd::Project {
            common,
            family,
            mu,
            s,
        } => (
            "project",
            common,
            s,
            10,
            mu,
            Some(family),
            1.0,
            0.0,
            1.0,
            1.0,
        ),
        Cmd::SolveHelmholtz {
            common,
            lambda,
            eta,
        } => (
            "solve-helmholtz",
            common,
            1,
            10,
            0.0,
            None,
            lambda,
            eta,
            1.0,
            1.0,
        ),
        Cmd::SolveBiharmonic {
            common,
            lambda1,
            lambda0,
        } => (
            "solve-biharmonic",
            common,
            2,
            10,
            0.0,
            None,
            1.0,
            0.0,
            lambda1,
            lambda0,
        ),
        Cmd::Convergence {
            common,
            lambda,
            eta,
            lambda1,
            lambda0,
        } => (
            "convergence",
            common,
            1,
            10,
            0.0,
            None,
            lambda,
            eta,
            lambda1,
            lambda0,
        ),
    };
    RunConfig {
        command: command.to_string(),
        d: common.d,
        n: common.n,
        nlist: common.nlist,
        nmax,
        s,
        mu,
        lambda,
        eta,
        lambda1,
        lambda0,
        example: common.example,
        seed: common.seed,
        grid_n: common.grid_n,
        family,
        out: common.out,
        out_svg: common.out_svg,
        coeffs: common.coeffs,
        field: common.field,
    }
}

fn main() -> ExitCode {
    // optional cap on the rayon pool
    if let Ok(threads) = std::env::var("BALLSPEC_THREADS") {
        if let Ok(k) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(k)
                .build_global();
        } else {
            eprintln!("error: BALLSPEC_THREADS must be an integer, got {threads:?}");
            return ExitCode::from(2);
        }
    }
    let cli = Cli::parse();
    let cfg = if let Some(path) = &cli.config {
        match std::fs::read_to_string(path) {
            Ok(text) => match RunConfig::from_toml(&text) {
                Ok(cfg) => cfg,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            },
            Err(e) => {
                eprintln!("error: cannot read {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
    } else if let Some(cmd) = cli.command {
        to_config(cmd)
    } else {
        eprintln!("error: a subcommand or --config file is required (see --help)");
        return ExitCode::from(2);
    };
    match run(&cfg) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("error: one or more checks failed their tolerance");
            ExitCode::FAILURE
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
