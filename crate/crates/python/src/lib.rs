//! Python bindings for the `ifd6` interface solver.

use std::collections::BTreeMap;

use pyo3::create_exception;
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;

use ifd6::geometry::{self, Side};
use ifd6::harness::{self, ConvergenceRow, TableFormat};
use ifd6::solver::{self, ConditionNorm, Method};
use ifd6::Error;

create_exception!(ifd6, NumericalError, PyArithmeticError, "The discretization or the linear solver failed.");

fn to_py(e: Error) -> PyErr {
    if e.is_numerical() {
        NumericalError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

fn side_name(side: Side) -> &'static str {
    match side {
        Side::Plus => "+",
        Side::Minus => "-",
    }
}

/// A scalar function of `x` and `y` parsed from text.
#[pyclass(frozen, module = "ifd6")]
struct Expr {
    inner: ifd6::expr::Expr,
}

#[pymethods]
impl Expr {
    #[new]
    fn new(text: &str) -> PyResult<Expr> {
        ifd6::expr::Expr::parse(text).map(|inner| Expr { inner }).map_err(to_py)
    }

    fn __call__(&self, x: f64, y: f64) -> PyResult<f64> {
        self.inner.eval(x, y).map_err(to_py)
    }

    /// Partial derivatives `{(m, n): d^(m+n) e / dx^m dy^n}` at `(x, y)` up to total order `degree`.
    fn partials(&self, x: f64, y: f64, degree: usize) -> PyResult<BTreeMap<(usize, usize), f64>> {
        let jet = self.inner.taylor(x, y, degree).map_err(to_py)?;
        Ok(jet.iter().map(|(m, n, _)| ((m, n), jet.partial(m, n))).collect())
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Expr('{}')", self.inner)
    }
}

/// Uniform grid with `N1 x N2` cells on `[l1, l2] x [l3, l4]`.
#[pyclass(frozen, module = "ifd6")]
struct Grid {
    inner: geometry::Grid,
}

#[pymethods]
impl Grid {
    #[new]
    fn new(bounds: [f64; 4], n1: usize) -> PyResult<Grid> {
        geometry::Grid::new(bounds, n1).map(|inner| Grid { inner }).map_err(to_py)
    }

    #[staticmethod]
    fn at_level(bounds: [f64; 4], level: u32) -> PyResult<Grid> {
        geometry::Grid::at_level(bounds, level).map(|inner| Grid { inner }).map_err(to_py)
    }

    #[getter]
    fn h(&self) -> f64 {
        self.inner.h
    }

    #[getter]
    fn n1(&self) -> usize {
        self.inner.n1
    }

    #[getter]
    fn n2(&self) -> usize {
        self.inner.n2
    }

    #[getter]
    fn bounds(&self) -> [f64; 4] {
        self.inner.bounds()
    }

    fn x(&self, i: usize) -> f64 {
        self.inner.x(i)
    }

    fn y(&self, j: usize) -> f64 {
        self.inner.y(j)
    }

    /// Interior points that are crossed by the interface.
    fn irregular_points(&self, psi: &Expr) -> PyResult<Vec<(usize, usize)>> {
        let cls = geometry::classify(&self.inner, &psi.inner).map_err(to_py)?;
        Ok(cls.irregular_points().collect())
    }

    /// `"+"` or `"-"` for every node, indexed `[j][i]`.
    fn sides(&self, psi: &Expr) -> PyResult<Vec<Vec<&'static str>>> {
        let cls = geometry::classify(&self.inner, &psi.inner).map_err(to_py)?;
        Ok((0..=self.inner.n2).map(|j| (0..=self.inner.n1).map(|i| side_name(cls.node_side(i, j))).collect()).collect())
    }

    fn base_point(&self, psi: &Expr, i: usize, j: usize) -> PyResult<(f64, f64)> {
        geometry::find_base_point(&self.inner, &psi.inner, i, j).map_err(to_py)
    }

    /// Condition number of the coefficient matrix in the 1-norm or 2-norm.
    #[pyo3(signature = (norm = 1))]
    fn condition_number(&self, py: Python<'_>, norm: u8) -> PyResult<f64> {
        let norm = match norm {
            1 => ConditionNorm::One,
            2 => ConditionNorm::Two,
            _ => return Err(PyValueError::new_err("norm must be 1 or 2")),
        };
        let op = solver::SystemOperator::new(&self.inner);
        py.detach(|| solver::condition_number(&op, norm)).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        let [l1, l2, l3, l4] = self.inner.bounds();
        format!("Grid([{l1}, {l2}, {l3}, {l4}], N1={}, N2={})", self.inner.n1, self.inner.n2)
    }
}

/// An interface problem read from the `key = value` problem format.
#[pyclass(frozen, module = "ifd6")]
struct Problem {
    inner: harness::ProblemSpec,
}

#[pymethods]
impl Problem {
    #[staticmethod]
    fn load(path: std::path::PathBuf) -> PyResult<Problem> {
        harness::load_problem(path).map(|inner| Problem { inner }).map_err(to_py)
    }

    #[staticmethod]
    fn parse(text: &str) -> PyResult<Problem> {
        harness::parse_problem(text).map(|inner| Problem { inner }).map_err(to_py)
    }

    #[getter]
    fn bounds(&self) -> [f64; 4] {
        self.inner.bounds
    }

    #[getter]
    fn psi(&self) -> Expr {
        Expr { inner: self.inner.psi.clone() }
    }

    #[getter]
    fn has_exact(&self) -> bool {
        self.inner.has_exact()
    }

    fn exact(&self, x: f64, y: f64) -> PyResult<Option<f64>> {
        self.inner.exact_at(x, y).transpose().map_err(to_py)
    }
}

fn method(name: Option<&str>) -> PyResult<Option<Method>> {
    name.map(|s| s.parse::<Method>().map_err(PyValueError::new_err)).transpose()
}

fn options(solver: Option<&str>, tol: f64, kappa: bool) -> PyResult<harness::SolveOptions> {
    Ok(harness::SolveOptions { method: method(solver)?, tol, kappa, ..Default::default() })
}

/// Grid solution of one refinement level.
#[pyclass(frozen, module = "ifd6")]
struct Solution {
    inner: harness::LevelSolution,
}

#[pymethods]
impl Solution {
    #[getter]
    fn grid(&self) -> Grid {
        Grid { inner: self.inner.grid }
    }

    #[getter]
    fn kappa(&self) -> Option<f64> {
        self.inner.kappa
    }

    /// Interior values indexed `[j - 1][i - 1]`.
    #[getter]
    fn values(&self) -> Vec<Vec<f64>> {
        let g = &self.inner.grid;
        (1..g.n2).map(|j| (1..g.n1).map(|i| self.inner.at(i, j)).collect()).collect()
    }

    fn at(&self, i: usize, j: usize) -> PyResult<f64> {
        let g = &self.inner.grid;
        if i == 0 || j == 0 || i >= g.n1 || j >= g.n2 {
            return Err(PyValueError::new_err("(i, j) must be an interior point"));
        }
        Ok(self.inner.at(i, j))
    }

    /// `(relative l2, max)` errors against the exact solution, or `None` without one.
    fn exact_errors(&self, problem: &Problem) -> PyResult<Option<(f64, f64)>> {
        self.inner.exact_errors(&problem.inner).transpose().map_err(to_py)
    }

    /// `(relative l2, max)` differences against the next finer level.
    fn successive_errors(&self, finer: &Solution) -> (f64, f64) {
        self.inner.successive_errors(&finer.inner)
    }

    /// Text dump including the boundary values.
    fn dump(&self, problem: &Problem) -> PyResult<String> {
        self.inner.dump(&problem.inner).map_err(to_py)
    }
}

#[pyfunction]
#[pyo3(signature = (problem, level, order = 6, solver = None, tol = solver::DEFAULT_TOL, kappa = false))]
fn solve(
    py: Python<'_>,
    problem: &Problem,
    level: u32,
    order: usize,
    solver: Option<&str>,
    tol: f64,
    kappa: bool,
) -> PyResult<Solution> {
    let opts = options(solver, tol, kappa)?;
    let spec = &problem.inner;
    py.detach(|| harness::solve_level(spec, level, order, &opts)).map(|inner| Solution { inner }).map_err(to_py)
}

fn row_dict(row: &ConvergenceRow) -> BTreeMap<&'static str, Option<f64>> {
    let mut d = BTreeMap::new();
    d.insert("J", Some(row.level as f64));
    d.insert("e2_exact", row.e2_exact);
    d.insert("order2_exact", row.order2_exact);
    d.insert("einf_exact", row.einf_exact);
    d.insert("orderinf_exact", row.orderinf_exact);
    d.insert("e2_succ", row.e2_succ);
    d.insert("order2_succ", row.order2_succ);
    d.insert("einf_succ", row.einf_succ);
    d.insert("orderinf_succ", row.orderinf_succ);
    d.insert("kappa", row.kappa);
    d
}

/// Refinement study; returns one dict per level keyed like the CSV header.
#[pyfunction]
#[allow(clippy::too_many_arguments)]
#[pyo3(signature = (problem, jmin, jmax, order = 6, solver = None, tol = solver::DEFAULT_TOL, kappa = false))]
fn converge(
    py: Python<'_>,
    problem: &Problem,
    jmin: u32,
    jmax: u32,
    order: usize,
    solver: Option<&str>,
    tol: f64,
    kappa: bool,
) -> PyResult<Vec<BTreeMap<&'static str, Option<f64>>>> {
    let opts = options(solver, tol, kappa)?;
    let spec = &problem.inner;
    let outcome = py.detach(|| harness::run_convergence(spec, jmin, jmax, order, &opts));
    if let Some(e) = outcome.failure {
        return Err(to_py(e));
    }
    Ok(outcome.rows.iter().map(row_dict).collect())
}

/// Refinement study formatted as a `csv` or `md` table.
#[pyfunction]
#[pyo3(signature = (problem, jmin, jmax, order = 6, format = "csv", kappa = false))]
fn convergence_table(
    py: Python<'_>,
    problem: &Problem,
    jmin: u32,
    jmax: u32,
    order: usize,
    format: &str,
    kappa: bool,
) -> PyResult<String> {
    let format: TableFormat = format.parse().map_err(|e: String| PyValueError::new_err(e))?;
    let opts = options(None, solver::DEFAULT_TOL, kappa)?;
    let spec = &problem.inner;
    let outcome = py.detach(|| harness::run_convergence(spec, jmin, jmax, order, &opts));
    if let Some(e) = outcome.failure {
        return Err(to_py(e));
    }
    Ok(harness::emit_table(&outcome.rows, format))
}

/// Ranks of the order-6 and order-7 moment systems and the order-6 stencil weights.
#[pyfunction]
fn max_order_rank_check() -> (usize, usize, [f64; 9]) {
    let check = ifd6::scheme::max_order_rank_check();
    (check.rank_m6, check.rank_m7, check.null_vector)
}

/// Right-hand side of a regular row centred at `(x, y)` for the source `f`.
#[pyfunction]
#[pyo3(signature = (f, x, y, h, order = 6))]
fn regular_rhs(f: &Expr, x: f64, y: f64, h: f64, order: usize) -> PyResult<f64> {
    let jet = f.inner.taylor(x, y, 4).map_err(to_py)?;
    ifd6::scheme::regular_rhs(&jet, h, order).map_err(to_py)
}

#[pymodule]
#[pyo3(name = "ifd6")]
fn ifd6_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("NumericalError", m.py().get_type::<NumericalError>())?;
    m.add_class::<Expr>()?;
    m.add_class::<Grid>()?;
    m.add_class::<Problem>()?;
    m.add_class::<Solution>()?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(converge, m)?)?;
    m.add_function(wrap_pyfunction!(convergence_table, m)?)?;
    m.add_function(wrap_pyfunction!(max_order_rank_check, m)?)?;
    m.add_function(wrap_pyfunction!(regular_rhs, m)?)?;
    Ok(())
}
