//! Problem files and refinement studies.
//!
//! A problem file holds one `key = expression` per line, `#` starts a comment:
//!
//! ```text
//! format = 1
//! l1 = -pi
//! l2 = pi
//! l3 = -pi
//! l4 = pi
//! psi = x^2 + y^2 - 2
//! f_plus = ...
//! f_minus = ...
//! g = 0
//! g1 = -100
//! g0 = ...            # or g0_plus = ... and g0_minus = ...
//! u_plus = ...        # optional, both or neither
//! u_minus = ...
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use log::info;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::geometry::{classify, Classification, Grid, Side};
use crate::solver::{assemble, condition_number, solve, ConditionNorm, Method, DEFAULT_TOL};

/// Dirichlet data, possibly given separately on each side of the interface.
#[derive(Clone, Debug, PartialEq)]
pub enum BoundaryData {
    Single(Expr),
    BySide { plus: Expr, minus: Expr },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProblemSpec {
    pub bounds: [f64; 4],
    pub psi: Expr,
    pub f_plus: Expr,
    pub f_minus: Expr,
    pub g: Expr,
    pub g1: Expr,
    pub g0: BoundaryData,
    pub u_plus: Option<Expr>,
    pub u_minus: Option<Expr>,
}

const KEYS: [&str; 15] = [
    "format", "l1", "l2", "l3", "l4", "psi", "f_plus", "f_minus", "g", "g1", "g0", "g0_plus", "g0_minus", "u_plus",
    "u_minus",
];

impl ProblemSpec {
    /// `g0` at a boundary node on the given side.
    pub fn g0_at(&self, x: f64, y: f64, side: Side) -> Result<f64> {
        match (&self.g0, side) {
            (BoundaryData::Single(e), _) => e.eval(x, y),
            (BoundaryData::BySide { plus, .. }, Side::Plus) => plus.eval(x, y),
            (BoundaryData::BySide { minus, .. }, Side::Minus) => minus.eval(x, y),
        }
    }

    pub fn has_exact(&self) -> bool {
        self.u_plus.is_some() && self.u_minus.is_some()
    }

    /// Exact solution picked by the sign of `psi`.
    pub fn exact_at(&self, x: f64, y: f64) -> Option<Result<f64>> {
        let (plus, minus) = (self.u_plus.as_ref()?, self.u_minus.as_ref()?);
        Some(self.psi.eval(x, y).and_then(|p| match Side::of(p) {
            Side::Plus => plus.eval(x, y),
            Side::Minus => minus.eval(x, y),
        }))
    }

    /// Largest `|g0 - u|` over `samples` points per side of the boundary.
    pub fn boundary_mismatch(&self, samples: usize) -> Option<Result<f64>> {
        if !self.has_exact() {
            return None;
        }
        let [l1, l2, l3, l4] = self.bounds;
        let mut worst: f64 = 0.0;
        for s in 0..=samples {
            let t = s as f64 / samples as f64;
            let (x, y) = (l1 + t * (l2 - l1), l3 + t * (l4 - l3));
            for (px, py) in [(x, l3), (x, l4), (l1, y), (l2, y)] {
                let check = || -> Result<f64> {
                    let side = Side::of(self.psi.eval(px, py)?);
                    let u = self.exact_at(px, py).expect("exact solution present")?;
                    Ok((self.g0_at(px, py, side)? - u).abs())
                };
                match check() {
                    Ok(d) => worst = worst.max(d),
                    Err(e) => return Some(Err(e)),
                }
            }
        }
        Some(Ok(worst))
    }
}

pub fn load_problem(path: impl AsRef<Path>) -> Result<ProblemSpec> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_owned(), source })?;
    parse_problem(&text)
}

pub fn parse_problem(text: &str) -> Result<ProblemSpec> {
    let mut entries: BTreeMap<&str, (usize, Expr)> = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| Error::ProblemSyntax {
            line,
            msg: format!("expected `key = expression`, found `{content}`"),
        })?;
        let key = key.trim();
        let key = KEYS
            .iter()
            .find(|k| **k == key)
            .ok_or_else(|| Error::ProblemSyntax { line, msg: format!("unknown key `{key}`") })?;
        let expr = Expr::parse(value.trim()).map_err(|e| Error::ProblemSyntax { line, msg: format!("{key}: {e}") })?;
        if entries.insert(key, (line, expr)).is_some() {
            return Err(Error::ProblemSyntax { line, msg: format!("duplicate key `{key}`") });
        }
    }

    if let Some((line, e)) = entries.get("format") {
        if e.constant_value() != Some(1.0) {
            return Err(Error::ProblemSyntax { line: *line, msg: format!("unsupported format `{e}` (expected 1)") });
        }
    }
    let take = |key: &str| entries.get(key).map(|(_, e)| e.clone());
    let need = |key: &str| take(key).ok_or_else(|| Error::MissingKey(key.into()));
    let constant = |key: &str| -> Result<f64> {
        let e = need(key)?;
        e.constant_value().ok_or_else(|| Error::ProblemSyntax {
            line: entries[key].0,
            msg: format!("{key} must be a constant, found `{e}`"),
        })
    };

    let bounds = [constant("l1")?, constant("l2")?, constant("l3")?, constant("l4")?];
    let psi = need("psi")?;
    let f_plus = need("f_plus")?;
    let f_minus = need("f_minus")?;
    let g = need("g")?;
    let g1 = need("g1")?;
    let g0 = match (take("g0"), take("g0_plus"), take("g0_minus")) {
        (Some(e), None, None) => BoundaryData::Single(e),
        (None, Some(plus), Some(minus)) => BoundaryData::BySide { plus, minus },
        (None, None, None) => return Err(Error::MissingKey("g0".into())),
        (None, Some(_), None) => return Err(Error::MissingKey("g0_minus".into())),
        (None, None, Some(_)) => return Err(Error::MissingKey("g0_plus".into())),
        (Some(_), _, _) => {
            return Err(Error::ProblemSyntax {
                line: entries["g0"].0,
                msg: "g0 cannot be combined with g0_plus/g0_minus".into(),
            })
        }
    };
    let (u_plus, u_minus) = (take("u_plus"), take("u_minus"));
    match (&u_plus, &u_minus) {
        (Some(_), None) => return Err(Error::MissingKey("u_minus".into())),
        (None, Some(_)) => return Err(Error::MissingKey("u_plus".into())),
        _ => {}
    }
    Grid::new(bounds, 2)?;
    Ok(ProblemSpec { bounds, psi, f_plus, f_minus, g, g1, g0, u_plus, u_minus })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolveOptions {
    /// `None` picks [`Method::default_for`] the grid.
    pub method: Option<Method>,
    pub tol: f64,
    pub kappa: bool,
    pub kappa_norm: ConditionNorm,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { method: None, tol: DEFAULT_TOL, kappa: false, kappa_norm: ConditionNorm::One }
    }
}

/// Numerical solution on one grid.
#[derive(Clone, Debug)]
pub struct LevelSolution {
    pub grid: Grid,
    pub classification: Classification,
    /// Interior unknowns in row-major order.
    pub u: Vec<f64>,
    pub kappa: Option<f64>,
}

impl LevelSolution {
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.u[self.grid.index(i, j)]
    }

    /// Relative l2 and absolute l-infinity errors against the exact solution.
    pub fn exact_errors(&self, spec: &ProblemSpec) -> Option<Result<(f64, f64)>> {
        spec.has_exact().then(|| {
            let mut pairs = Vec::with_capacity(self.u.len());
            for (idx, &v) in self.u.iter().enumerate() {
                let (i, j) = self.grid.point_of(idx);
                let exact = spec.exact_at(self.grid.x(i), self.grid.y(j)).expect("exact solution present")?;
                pairs.push((v, exact));
            }
            Ok(error_norms(&pairs))
        })
    }

    /// Errors against the next finer level on coinciding points.
    pub fn successive_errors(&self, finer: &LevelSolution) -> (f64, f64) {
        assert_eq!(finer.grid.n1, 2 * self.grid.n1);
        let pairs: Vec<(f64, f64)> = (0..self.u.len())
            .map(|idx| {
                let (i, j) = self.grid.point_of(idx);
                (self.u[idx], finer.at(2 * i, 2 * j))
            })
            .collect();
        error_norms(&pairs)
    }

    /// Text dump for plotting: a header, then `N2 + 1` lines of `N1 + 1` values, `y` increasing.
    pub fn dump(&self, spec: &ProblemSpec) -> Result<String> {
        let g = &self.grid;
        let mut out = String::new();
        writeln!(out, "# ifd6 solution").unwrap();
        writeln!(out, "N1 = {}", g.n1).unwrap();
        writeln!(out, "N2 = {}", g.n2).unwrap();
        writeln!(out, "bounds = {:?} {:?} {:?} {:?}", g.l1, g.l2, g.l3, g.l4).unwrap();
        for j in 0..=g.n2 {
            let mut row = Vec::with_capacity(g.n1 + 1);
            for i in 0..=g.n1 {
                let v = if g.is_boundary(i, j) {
                    spec.g0_at(g.x(i), g.y(j), self.classification.node_side(i, j))?
                } else {
                    self.at(i, j)
                };
                row.push(format!("{v:.17e}"));
            }
            writeln!(out, "{}", row.join(" ")).unwrap();
        }
        Ok(out)
    }
}

fn error_norms(pairs: &[(f64, f64)]) -> (f64, f64) {
    let (mut num, mut den, mut inf) = (0.0, 0.0, 0.0f64);
    for &(approx, reference) in pairs {
        let d = approx - reference;
        num += d * d;
        den += reference * reference;
        inf = inf.max(d.abs());
    }
    let rel = if den > 0.0 { (num / den).sqrt() } else { num.sqrt() };
    (rel, inf)
}

/// Solves the problem on the grid with `N1 = 2^level`.
pub fn solve_level(spec: &ProblemSpec, level: u32, order: usize, opts: &SolveOptions) -> Result<LevelSolution> {
    let grid = Grid::at_level(spec.bounds, level)?;
    let classification = classify(&grid, &spec.psi)?;
    let (op, rhs) = assemble(&grid, &classification, spec, order)?;
    let method = opts.method.unwrap_or_else(|| Method::default_for(&grid));
    let u = solve(&op, &rhs, method, opts.tol)?;
    let kappa = if opts.kappa { Some(condition_number(&op, opts.kappa_norm)?) } else { None };
    Ok(LevelSolution { grid, classification, u, kappa })
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConvergenceRow {
    pub level: u32,
    pub e2_exact: Option<f64>,
    pub order2_exact: Option<f64>,
    pub einf_exact: Option<f64>,
    pub orderinf_exact: Option<f64>,
    pub e2_succ: Option<f64>,
    pub order2_succ: Option<f64>,
    pub einf_succ: Option<f64>,
    pub orderinf_succ: Option<f64>,
    pub kappa: Option<f64>,
}

/// Rows of a refinement study, and the error that stopped it early if any.
#[derive(Debug)]
pub struct ConvergenceOutcome {
    pub rows: Vec<ConvergenceRow>,
    pub failure: Option<Error>,
}

fn order(coarse: Option<f64>, fine: Option<f64>) -> Option<f64> {
    match (coarse, fine) {
        (Some(a), Some(b)) if a > 0.0 && b > 0.0 => Some((a / b).log2()),
        _ => None,
    }
}

/// Solves at `J = jmin..=jmax`; the order in row `J` compares it with row `J - 1`.
pub fn run_convergence(
    spec: &ProblemSpec,
    jmin: u32,
    jmax: u32,
    order_m: usize,
    opts: &SolveOptions,
) -> ConvergenceOutcome {
    assert!(jmin >= 1 && jmin <= jmax, "invalid level range {jmin}..={jmax}");
    let mut rows: Vec<ConvergenceRow> = Vec::new();
    let mut previous: Option<LevelSolution> = None;
    for level in jmin..=jmax {
        let started = Instant::now();
        let result = solve_level(spec, level, order_m, opts).and_then(|sol| {
            let exact = sol.exact_errors(spec).transpose()?;
            Ok((sol, exact))
        });
        let (sol, exact) = match result {
            Ok(v) => v,
            Err(e) => return ConvergenceOutcome { rows, failure: Some(e) },
        };
        info!("J = {level} solved in {:.2?}", started.elapsed());
        if let (Some(prev), Some(last)) = (&previous, rows.last_mut()) {
            let (e2, einf) = prev.successive_errors(&sol);
            last.e2_succ = Some(e2);
            last.einf_succ = Some(einf);
        }
        let mut row = ConvergenceRow {
            level,
            e2_exact: exact.map(|e| e.0),
            einf_exact: exact.map(|e| e.1),
            kappa: sol.kappa,
            ..Default::default()
        };
        if let Some(prev_row) = rows.last() {
            row.order2_exact = order(prev_row.e2_exact, row.e2_exact);
            row.orderinf_exact = order(prev_row.einf_exact, row.einf_exact);
        }
        rows.push(row);
        let n = rows.len();
        if n >= 3 {
            let (a, b) = (rows[n - 3].clone(), &mut rows[n - 2]);
            b.order2_succ = order(a.e2_succ, b.e2_succ);
            b.orderinf_succ = order(a.einf_succ, b.einf_succ);
        }
        previous = Some(sol);
    }
    ConvergenceOutcome { rows, failure: None }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Markdown,
}

impl std::str::FromStr for TableFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<TableFormat, String> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(TableFormat::Csv),
            "md" | "markdown" => Ok(TableFormat::Markdown),
            other => Err(format!("unknown table format `{other}` (expected csv or md)")),
        }
    }
}

pub const CSV_HEADER: [&str; 10] = [
    "J",
    "e2_exact",
    "order2_exact",
    "einf_exact",
    "orderinf_exact",
    "e2_succ",
    "order2_succ",
    "einf_succ",
    "orderinf_succ",
    "kappa",
];

const MD_HEADER: [&str; 10] = [
    "J",
    "‖u_h−u‖₂/‖u‖₂",
    "order",
    "‖u_h−u‖∞",
    "order",
    "‖u_h−u_{h/2}‖₂/‖u_{h/2}‖₂",
    "order",
    "‖u_h−u_{h/2}‖∞",
    "order",
    "κ",
];

/// `1.92E-04` style, three significant digits.
pub fn format_sci(v: f64) -> String {
    let s = format!("{v:.2E}");
    match s.split_once('E') {
        Some((mantissa, exp)) => {
            let e: i32 = exp.parse().expect("exponent");
            format!("{mantissa}E{}{:02}", if e < 0 { '-' } else { '+' }, e.abs())
        }
        None => s,
    }
}

pub fn format_order(v: f64) -> String {
    format!("{v:.3}")
}

impl ConvergenceRow {
    fn cells(&self, missing: &str) -> [String; 10] {
        let sci = |v: Option<f64>| v.map_or_else(|| missing.to_string(), format_sci);
        let ord = |v: Option<f64>| v.map_or_else(|| missing.to_string(), format_order);
        [
            self.level.to_string(),
            sci(self.e2_exact),
            ord(self.order2_exact),
            sci(self.einf_exact),
            ord(self.orderinf_exact),
            sci(self.e2_succ),
            ord(self.order2_succ),
            sci(self.einf_succ),
            ord(self.orderinf_succ),
            sci(self.kappa),
        ]
    }
}

pub fn emit_table(rows: &[ConvergenceRow], format: TableFormat) -> String {
    let mut out = String::new();
    match format {
        TableFormat::Csv => {
            out.push_str(&CSV_HEADER.join(","));
            out.push('\n');
            for row in rows {
                out.push_str(&row.cells("").join(","));
                out.push('\n');
            }
        }
        TableFormat::Markdown => {
            writeln!(out, "| {} |", MD_HEADER.join(" | ")).unwrap();
            writeln!(out, "|{}", "---|".repeat(MD_HEADER.len())).unwrap();
            for row in rows {
                writeln!(out, "| {} |", row.cells("-").join(" | ")).unwrap();
            }
        }
    }
    out
}

/// Reads a table written by [`emit_table`] in CSV form.
pub fn parse_csv(text: &str) -> Result<Vec<ConvergenceRow>> {
    let mut reader = csv::ReaderBuilder::new().from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| Error::Table(e.to_string()))?;
    if header.iter().ne(CSV_HEADER.iter().copied()) {
        return Err(Error::Table(format!("unexpected header {header:?}")));
    }
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::Table(e.to_string()))?;
        let field = |k: usize| -> Result<Option<f64>> {
            let s = record[k].trim();
            if s.is_empty() {
                return Ok(None);
            }
            s.parse().map(Some).map_err(|_| Error::Table(format!("bad number `{s}` in column {}", CSV_HEADER[k])))
        };
        rows.push(ConvergenceRow {
            level: record[0].trim().parse().map_err(|_| Error::Table(format!("bad level `{}`", &record[0])))?,
            e2_exact: field(1)?,
            order2_exact: field(2)?,
            einf_exact: field(3)?,
            orderinf_exact: field(4)?,
            e2_succ: field(5)?,
            order2_succ: field(6)?,
            einf_succ: field(7)?,
            orderinf_succ: field(8)?,
            kappa: field(9)?,
        });
    }
    Ok(rows)
}
