#![allow(dead_code)]

use std::path::PathBuf;

use ifd6::geometry::Side;
use ifd6::harness::{parse_problem, LevelSolution, ProblemSpec};
use rand::Rng;

pub fn problem_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../problems").join(name)
}

pub fn bundled_problems() -> Vec<PathBuf> {
    (1..=12).map(|k| problem_path(&format!("ex{k:02}.prob"))).collect()
}

/// Bivariate polynomial as `(m, n, c)` terms `c x^m y^n`; repeated monomials add.
#[derive(Clone, Debug, Default)]
pub struct Poly {
    pub terms: Vec<(u32, u32, f64)>,
}

impl Poly {
    pub fn random(rng: &mut impl Rng, degree: u32) -> Poly {
        let mut terms = Vec::new();
        for d in 0..=degree {
            for m in 0..=d {
                terms.push((m, d - m, rng.gen_range(-1.0..1.0)));
            }
        }
        Poly { terms }
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.terms.iter().map(|&(m, n, c)| c * x.powi(m as i32) * y.powi(n as i32)).sum()
    }

    pub fn dx(&self) -> Poly {
        Poly { terms: self.terms.iter().filter(|t| t.0 > 0).map(|&(m, n, c)| (m - 1, n, c * m as f64)).collect() }
    }

    pub fn dy(&self) -> Poly {
        Poly { terms: self.terms.iter().filter(|t| t.1 > 0).map(|&(m, n, c)| (m, n - 1, c * n as f64)).collect() }
    }

    pub fn add(&self, other: &Poly, factor: f64) -> Poly {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().map(|&(m, n, c)| (m, n, c * factor)));
        Poly { terms }
    }

    pub fn scale(&self, factor: f64) -> Poly {
        Poly::default().add(self, factor)
    }

    /// `-(u_xx + u_yy)`.
    pub fn neg_laplacian(&self) -> Poly {
        self.dx().dx().add(&self.dy().dy(), 1.0).scale(-1.0)
    }

    pub fn to_expr(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms.iter().map(|&(m, n, c)| format!("({c:e})*x^{m}*y^{n}")).collect::<Vec<_>>().join(" + ")
    }
}

/// Piecewise polynomial solution across the line `cos(theta) x + sin(theta) y = c` on `[-1, 1]^2`.
pub struct LineProblem {
    pub spec: ProblemSpec,
    pub u_plus: Poly,
    pub u_minus: Poly,
}

pub fn line_problem(theta: f64, c: f64, u_plus: Poly, u_minus: Poly) -> LineProblem {
    let (a, b) = (theta.cos(), theta.sin());
    let jump = u_plus.add(&u_minus, -1.0);
    let flux = jump.dx().scale(a).add(&jump.dy(), b);
    let text = format!(
        "l1 = -1\nl2 = 1\nl3 = -1\nl4 = 1\n\
         psi = ({a:e})*x + ({b:e})*y - ({c:e})\n\
         f_plus = {}\nf_minus = {}\ng1 = {}\ng = {}\n\
         g0_plus = {up}\ng0_minus = {um}\nu_plus = {up}\nu_minus = {um}\n",
        u_plus.neg_laplacian().to_expr(),
        u_minus.neg_laplacian().to_expr(),
        jump.to_expr(),
        flux.to_expr(),
        up = u_plus.to_expr(),
        um = u_minus.to_expr(),
    );
    LineProblem { spec: parse_problem(&text).expect("generated problem parses"), u_plus, u_minus }
}

/// `max |u_h - u| / max |u|` over interior nodes.
pub fn relative_max_error(sol: &LevelSolution, spec: &ProblemSpec) -> f64 {
    let grid = &sol.grid;
    let (mut err, mut size) = (0.0f64, 0.0f64);
    for j in 1..grid.n2 {
        for i in 1..grid.n1 {
            let exact = spec.exact_at(grid.x(i), grid.y(j)).unwrap().unwrap();
            err = err.max((sol.at(i, j) - exact).abs());
            size = size.max(exact.abs());
        }
    }
    err / size
}

/// Counts of irregular stencils where the minority side is a single corner, and where it holds an edge node.
pub fn stencil_configurations(sol: &LevelSolution) -> (usize, usize) {
    let (mut corner, mut edge) = (0, 0);
    for (i, j) in sol.classification.irregular_points() {
        let class = sol.classification.point(i, j);
        let center = class.side_of(0, 0);
        let other = if center == Side::Plus { Side::Minus } else { Side::Plus };
        let across = class.offsets(other);
        if across.len() == 1 && across[0].0 != 0 && across[0].1 != 0 {
            corner += 1;
        }
        if across.iter().any(|&(k, l)| (k == 0) != (l == 0)) {
            edge += 1;
        }
    }
    (corner, edge)
}
