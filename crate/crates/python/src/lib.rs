//! Python bindings for the spectral library: the Jacobi/harmonic
//! primitives, the BallPoly algebra, quadrature grids, projections, and
//! the two Galerkin solvers on the built-in examples.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use ballspec::ballbasis::BasisIndex;
use ballspec::harmonics::HarmonicIndex;
use ballspec::jacobi::JacobiParams;
use ballspec::quadrature::BallQuadrature;
use ballspec::sobolev::SobolevParams;
use ballspec::solvers::Problem;

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyRuntimeError::new_err(e.to_string())
}

#[pyfunction]
fn pochhammer(a: f64, k: u32) -> f64 {
    ballspec::jacobi::pochhammer(a, k)
}

#[pyfunction]
fn jacobi_eval(alpha: f64, beta: f64, j: u32, t: f64) -> f64 {
    ballspec::jacobi::jacobi_eval(JacobiParams::new(alpha, beta), j, t)
}

#[pyfunction]
fn gjacobi_eval(alpha: f64, beta: f64, j: i64, t: f64) -> f64 {
    ballspec::jacobi::gjacobi_eval(JacobiParams::new(alpha, beta), j, t)
}

#[pyfunction]
fn gjacobi_value_at_one(alpha: f64, beta: f64, j: u32) -> f64 {
    ballspec::jacobi::gjacobi_value_at_one(JacobiParams::new(alpha, beta), j)
}

#[pyfunction]
fn gjacobi_derivative(alpha: f64, beta: f64, j: u32, t: f64) -> f64 {
    ballspec::jacobi::gjacobi_derivative(JacobiParams::new(alpha, beta), j, t)
}

/// Nodes and Christoffel numbers of the (n+1)-point Gauss-Jacobi rule.
#[pyfunction]
fn gauss_jacobi_rule(n: usize, alpha: f64, beta: f64) -> PyResult<(Vec<f64>, Vec<f64>)> {
    let rule =
        ballspec::jacobi::gauss_jacobi_rule(n, JacobiParams::new(alpha, beta)).map_err(err)?;
    Ok((rule.nodes, rule.weights))
}

#[pyfunction]
fn harmonic_dim(d: usize, m: u32) -> PyResult<u32> {
    ballspec::harmonics::harmonic_dim(d, m).map_err(err)
}

#[pyfunction]
fn sph_eval(d: usize, m: u32, ell: u32, xi: Vec<f64>) -> PyResult<f64> {
    let idx = HarmonicIndex::new(d, m, ell).map_err(err)?;
    if xi.len() != d {
        return Err(PyValueError::new_err(format!("expected a {d}-vector")));
    }
    Ok(ballspec::harmonics::sph_eval(idx, &xi))
}

#[pyfunction]
fn solid_eval(d: usize, m: u32, ell: u32, x: Vec<f64>) -> PyResult<f64> {
    let idx = HarmonicIndex::new(d, m, ell).map_err(err)?;
    if x.len() != d {
        return Err(PyValueError::new_err(format!("expected a {d}-vector")));
    }
    Ok(ballspec::harmonics::solid_eval(idx, &x))
}

#[pyfunction]
fn ball_norm(mu: f64, n: u32, j: u32, d: usize) -> PyResult<f64> {
    ballspec::ballbasis::ball_norm(mu, n, j, d).map_err(err)
}

#[pyfunction]
fn q_norm(s: u32, lambdas: Vec<f64>, n: u32, j: u32, d: usize) -> PyResult<f64> {
    let p = SobolevParams::new(s, lambdas).map_err(err)?;
    Ok(ballspec::sobolev::q_norm(&p, n, j, d))
}

#[pyfunction]
fn cutoff_eval(t: f64) -> f64 {
    ballspec::transforms::cutoff_eval(t)
}

/// A finite sum of radial-harmonic terms q(|x|^2) Y^m_ell(x).
#[pyclass(name = "BallPoly")]
#[derive(Clone)]
struct PyBallPoly {
    inner: ballspec::ballfun::BallPoly,
}

#[pymethods]
impl PyBallPoly {
    #[staticmethod]
    fn constant(d: usize, a: f64) -> Self {
        PyBallPoly {
            inner: ballspec::ballfun::BallPoly::constant(d, a),
        }
    }

    #[staticmethod]
    fn solid_harmonic(d: usize, m: u32, ell: u32) -> PyResult<Self> {
        let idx = HarmonicIndex::new(d, m, ell).map_err(err)?;
        Ok(PyBallPoly {
            inner: ballspec::ballfun::BallPoly::solid_harmonic(idx),
        })
    }

    /// The classical basis element P^{mu,n}_{j,ell}.
    #[staticmethod]
    fn ball_basis(mu: f64, d: usize, n: u32, j: u32, ell: u32) -> PyResult<Self> {
        let idx = BasisIndex::new(d, n, j, ell).map_err(err)?;
        Ok(PyBallPoly {
            inner: ballspec::ballbasis::ball_basis(mu, idx, d).map_err(err)?,
        })
    }

    /// The Sobolev-orthogonal basis element Q^{-s,n}_{j,ell}.
    #[staticmethod]
    fn q_basis(s: u32, lambdas: Vec<f64>, d: usize, n: u32, j: u32, ell: u32) -> PyResult<Self> {
        let p = SobolevParams::new(s, lambdas).map_err(err)?;
        let idx = BasisIndex::new(d, n, j, ell).map_err(err)?;
        Ok(PyBallPoly {
            inner: ballspec::sobolev::q_basis(&p, idx, d).map_err(err)?,
        })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyBallPoly {
            inner: serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))?,
        })
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner).map_err(|e| PyRuntimeError::new_err(e.to_string()))
    }

    fn eval(&self, x: Vec<f64>) -> PyResult<f64> {
        if x.len() != self.inner.d() {
            return Err(PyValueError::new_err("point dimension mismatch"));
        }
        Ok(self.inner.eval(&x))
    }

    fn laplacian(&self) -> Self {
        PyBallPoly {
            inner: self.inner.laplacian(),
        }
    }

    fn scale(&self, s: f64) -> Self {
        PyBallPoly {
            inner: self.inner.scale(s),
        }
    }

    fn add_scaled(&self, other: &PyBallPoly, s: f64) -> Self {
        PyBallPoly {
            inner: self.inner.add_scaled(&other.inner, s),
        }
    }

    fn total_degree(&self) -> Option<usize> {
        self.inner.total_degree()
    }

    fn boundary_trace<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let d = PyDict::new(py);
        for ((m, ell), v) in self.inner.boundary_trace() {
            d.set_item((m, ell), v)?;
        }
        Ok(d)
    }

    fn normal_derivative_trace<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let d = PyDict::new(py);
        for ((m, ell), v) in self.inner.normal_derivative_trace() {
            d.set_item((m, ell), v)?;
        }
        Ok(d)
    }

    fn inner_l2(&self, other: &PyBallPoly, mu: f64) -> f64 {
        ballspec::ballfun::inner_l2(&self.inner, &other.inner, mu)
    }

    fn inner_sphere(&self, other: &PyBallPoly) -> f64 {
        ballspec::ballfun::inner_sphere(&self.inner, &other.inner)
    }

    fn inner_grad(&self, other: &PyBallPoly) -> f64 {
        ballspec::ballfun::inner_grad(&self.inner, &other.inner)
    }

    fn sobolev_inner(&self, other: &PyBallPoly, s: u32, lambdas: Vec<f64>) -> PyResult<f64> {
        let p = SobolevParams::new(s, lambdas).map_err(err)?;
        Ok(ballspec::sobolev::sobolev_inner(
            &self.inner,
            &other.inner,
            &p,
        ))
    }

    fn __repr__(&self) -> String {
        format!(
            "BallPoly(d={}, terms={}, degree={:?})",
            self.inner.d(),
            self.inner.num_terms(),
            self.inner.total_degree()
        )
    }
}

/// Product quadrature grid over the disk or ball.
#[pyclass(name = "BallGrid")]
struct PyBallGrid {
    inner: BallQuadrature,
}

#[pymethods]
impl PyBallGrid {
    #[staticmethod]
    fn build(d: usize, n: usize) -> PyResult<Self> {
        Ok(PyBallGrid {
            inner: ballspec::quadrature::build_grid(d, n).map_err(err)?,
        })
    }

    fn points(&self) -> Vec<Vec<f64>> {
        self.inner
            .points
            .iter()
            .map(|p| p[..self.inner.d].to_vec())
            .collect()
    }

    fn weights(&self) -> Vec<f64> {
        self.inner.weights.clone()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    /// Discrete error metrics (e_M, e_L2) of a BallPoly against target
    /// values sampled on this grid (same point order as `points()`).
    fn error_metrics(&self, u: &PyBallPoly, target: Vec<f64>) -> PyResult<(f64, f64)> {
        if target.len() != self.inner.len() {
            return Err(PyValueError::new_err("target length must match the grid"));
        }
        let vals = ballspec::quadrature::eval_on_grid(&self.inner, &u.inner);
        let vol = self.inner.ball_volume();
        let mut e_m: f64 = 0.0;
        let mut e2 = 0.0;
        for ((uv, tv), w) in vals.iter().zip(&target).zip(&self.inner.weights) {
            let diff = uv - tv;
            e_m = e_m.max(diff.abs());
            e2 += vol * w * diff * diff;
        }
        Ok((e_m, e2.sqrt()))
    }
}

/// Classical projection coefficients of a BallPoly: {(n, j, ell): value}.
#[pyfunction]
fn project_classical<'py>(
    py: Python<'py>,
    f: &PyBallPoly,
    mu: f64,
    n: u32,
) -> PyResult<Bound<'py, PyDict>> {
    let c = ballspec::transforms::project_classical(&f.inner, mu, n);
    let out = PyDict::new(py);
    for (idx, v) in &c.table {
        out.set_item((idx.n, idx.j, idx.ell), *v)?;
    }
    Ok(out)
}

/// Degree-n partial sum of the classical expansion of a BallPoly.
#[pyfunction]
fn classical_partial_sum(f: &PyBallPoly, mu: f64, n: u32) -> PyBallPoly {
    let c = ballspec::transforms::project_classical(&f.inner, mu, n);
    PyBallPoly {
        inner: ballspec::transforms::partial_sum(&c, n, None),
    }
}

fn example_by_name(name: &str) -> PyResult<(Problem, ballspec::solvers::Field)> {
    match name {
        "exam1a" => {
            let (p, e) = ballspec::solvers::examples::exam1a();
            Ok((Problem::Helmholtz(p), e))
        }
        "exam1b" => {
            let (p, e) = ballspec::solvers::examples::exam1b();
            Ok((Problem::Helmholtz(p), e))
        }
        "exam2" => {
            let (p, e) = ballspec::solvers::examples::exam2();
            Ok((Problem::Biharmonic(p), e))
        }
        other => Err(PyValueError::new_err(format!("unknown example {other:?}"))),
    }
}

/// Solve a built-in example at order n; returns the solution and a dict
/// with the discrete errors on the order-grid_n measuring grid.
#[pyfunction]
fn solve_example<'py>(
    py: Python<'py>,
    name: &str,
    n: u32,
    grid_n: usize,
) -> PyResult<(PyBallPoly, Bound<'py, PyDict>)> {
    let (problem, exact) = example_by_name(name)?;
    let grid = ballspec::quadrature::build_grid(problem.d(), grid_n).map_err(err)?;
    let u = problem.solve(n, &grid).map_err(err)?;
    let (e_m, e_l2) = ballspec::quadrature::error_metrics(&grid, |x| u.eval(x) - exact(x));
    let d = PyDict::new(py);
    d.set_item("n", n)?;
    d.set_item("e_M", e_m)?;
    d.set_item("e_L2", e_l2)?;
    Ok((PyBallPoly { inner: u }, d))
}

/// A convergence table: rows of (n, e_M, e_L2).
type ErrorRows = Vec<(u32, f64, f64)>;

/// Convergence study of a built-in example; returns the error rows and
/// the fitted log10 rate.
#[pyfunction]
fn convergence_example(
    name: &str,
    n_list: Vec<u32>,
    grid_n: usize,
) -> PyResult<(ErrorRows, f64)> {
    let (problem, exact) = example_by_name(name)?;
    let study =
        ballspec::solvers::convergence_study(&problem, &n_list, grid_n, &|x: &[f64]| exact(x))
            .map_err(err)?;
    Ok((
        study.rows.iter().map(|r| (r.n, r.e_m, r.e_l2)).collect(),
        study.fitted_rate,
    ))
}

#[pymodule]
fn ballspec_py(_py: Python<'_>, m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(pochhammer, m)?)?;
    m.add_function(wrap_pyfunction!(jacobi_eval, m)?)?;
    m.add_function(wrap_pyfunction!(gjacobi_eval, m)?)?;
    m.add_function(wrap_pyfunction!(gjacobi_value_at_one, m)?)?;
    m.add_function(wrap_pyfunction!(gjacobi_derivative, m)?)?;
    m.add_function(wrap_pyfunction!(gauss_jacobi_rule, m)?)?;
    m.add_function(wrap_pyfunction!(harmonic_dim, m)?)?;
    m.add_function(wrap_pyfunction!(sph_eval, m)?)?;
    m.add_function(wrap_pyfunction!(solid_eval, m)?)?;
    m.add_function(wrap_pyfunction!(ball_norm, m)?)?;
    m.add_function(wrap_pyfunction!(q_norm, m)?)?;
    m.add_function(wrap_pyfunction!(cutoff_eval, m)?)?;
    m.add_function(wrap_pyfunction!(project_classical, m)?)?;
    m.add_function(wrap_pyfunction!(classical_partial_sum, m)?)?;
    m.add_function(wrap_pyfunction!(solve_example, m)?)?;
    m.add_function(wrap_pyfunction!(convergence_example, m)?)?;
    m.add_class::<PyBallPoly>()?;
    m.add_class::<PyBallGrid>()?;
    Ok(())
}
