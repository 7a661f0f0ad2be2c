use std::fmt;
use std::sync::OnceLock;

use num_rational::Rational64;

use crate::jets::Jet2;

/// Bivariate polynomial with exact rational coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyXY {
    /// `(m, n, c)` for the monomial `c x^m y^n`, sorted graded by `(m + n, m)`.
    terms: Vec<(usize, usize, Rational64)>,
    approx: Vec<(i32, i32, f64)>,
}

fn factorial(n: usize) -> i64 {
    (1..=n as i64).product()
}

impl PolyXY {
    pub fn from_terms(terms: impl IntoIterator<Item = (usize, usize, Rational64)>) -> PolyXY {
        let mut merged: Vec<(usize, usize, Rational64)> = Vec::new();
        for (m, n, c) in terms {
            match merged.iter_mut().find(|(a, b, _)| (*a, *b) == (m, n)) {
                Some(t) => t.2 += c,
                None => merged.push((m, n, c)),
            }
        }
        merged.retain(|t| t.2 != Rational64::from_integer(0));
        merged.sort_by_key(|&(m, n, _)| (m + n, m));
        let approx =
            merged.iter().map(|&(m, n, c)| (m as i32, n as i32, *c.numer() as f64 / *c.denom() as f64)).collect();
        PolyXY { terms: merged, approx }
    }

    pub fn terms(&self) -> &[(usize, usize, Rational64)] {
        &self.terms
    }

    /// Coefficient of `x^m y^n`.
    pub fn coeff(&self, m: usize, n: usize) -> Rational64 {
        self.terms.iter().find(|t| (t.0, t.1) == (m, n)).map_or(Rational64::from_integer(0), |t| t.2)
    }

    pub fn degree(&self) -> usize {
        self.terms.iter().map(|t| t.0 + t.1).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self, degree: usize) -> bool {
        self.terms.iter().all(|t| t.0 + t.1 == degree)
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.approx.iter().map(|&(m, n, c)| c * x.powi(m) * y.powi(n)).sum()
    }

    pub fn diff_x(&self) -> PolyXY {
        PolyXY::from_terms(self.terms.iter().filter(|t| t.0 > 0).map(|&(m, n, c)| (m - 1, n, c * m as i64)))
    }

    pub fn diff_y(&self) -> PolyXY {
        PolyXY::from_terms(self.terms.iter().filter(|t| t.1 > 0).map(|&(m, n, c)| (m, n - 1, c * n as i64)))
    }

    /// The polynomial as a jet about the origin.
    pub fn to_jet(&self, degree: usize) -> Jet2 {
        Jet2::from_terms(
            degree,
            self.approx.iter().filter(|t| (t.0 + t.1) as usize <= degree).map(|&(m, n, c)| (m as usize, n as usize, c)),
        )
    }

    pub(crate) fn approx_terms(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.approx.iter().map(|&(m, n, c)| (m as usize, n as usize, c))
    }
}

impl fmt::Display for PolyXY {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (m, n, c)) in self.terms.iter().enumerate() {
            if idx > 0 {
                f.write_str(if *c < Rational64::from_integer(0) { " - " } else { " + " })?;
            } else if *c < Rational64::from_integer(0) {
                f.write_str("-")?;
            }
            write!(f, "{}", if *c < Rational64::from_integer(0) { -c } else { *c })?;
            match m {
                0 => {}
                1 => f.write_str("*x")?,
                _ => write!(f, "*x^{m}")?,
            }
            match n {
                0 => {}
                1 => f.write_str("*y")?,
                _ => write!(f, "*y^{n}")?,
            }
        }
        Ok(())
    }
}

/// `G_{m,n} = sum_l (-1)^l x^(m+2l) y^(n-2l) / ((m+2l)! (n-2l)!)`, `m` in `{0, 1}`.
pub fn gen_g(m: usize, n: usize) -> PolyXY {
    assert!(m <= 1, "G_(m,n) is defined for m in {{0, 1}}");
    PolyXY::from_terms((0..=n / 2).map(|l| {
        let sign = if l % 2 == 0 { 1 } else { -1 };
        let (a, b) = (m + 2 * l, n - 2 * l);
        (a, b, Rational64::new(sign, factorial(a) * factorial(b)))
    }))
}

/// `H_{m,n} = sum_{l=1}^{1+n/2} (-1)^l x^(m+2l) y^(n-2l+2) / ((m+2l)! (n-2l+2)!)`.
pub fn gen_h(m: usize, n: usize) -> PolyXY {
    PolyXY::from_terms((1..=1 + n / 2).map(|l| {
        let sign = if l % 2 == 0 { 1 } else { -1 };
        let (a, b) = (m + 2 * l, n + 2 - 2 * l);
        (a, b, Rational64::new(sign, factorial(a) * factorial(b)))
    }))
}

/// A polynomial with its two first partial derivatives.
pub(crate) struct WithGradient {
    pub value: PolyXY,
    pub dx: PolyXY,
    pub dy: PolyXY,
}

impl WithGradient {
    fn new(value: PolyXY) -> WithGradient {
        WithGradient { dx: value.diff_x(), dy: value.diff_y(), value }
    }
}

/// `G_{m,n}` and `H_{m,n}` for every index used up to order 7.
pub(crate) struct Families {
    g: Vec<WithGradient>,
    h: Vec<WithGradient>,
}

const MAX_DEGREE: usize = 8;

impl Families {
    pub fn g(&self, m: usize, n: usize) -> &WithGradient {
        &self.g[crate::scheme::lambda1_index(m, n)]
    }

    pub fn h(&self, m: usize, n: usize) -> &WithGradient {
        &self.h[crate::jets::tri_index(m, n)]
    }
}

pub(crate) fn families() -> &'static Families {
    static CACHE: OnceLock<Families> = OnceLock::new();
    CACHE.get_or_init(|| Families {
        g: crate::scheme::lambda1(MAX_DEGREE).into_iter().map(|(m, n)| WithGradient::new(gen_g(m, n))).collect(),
        h: crate::jets::graded_pairs(MAX_DEGREE).map(|(m, n)| WithGradient::new(gen_h(m, n))).collect(),
    })
}
