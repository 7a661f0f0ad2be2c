//! Truncated Taylor series ("jets") in one and two variables.
//!
//! A [`Jet2`] of degree `D` carries the coefficients of `x^m y^n` for
//! `m + n <= D` of a function expanded about some center; a [`Jet1`] does the
//! same for a single variable `t`. Arithmetic on jets is exact up to the
//! truncation order, so evaluating an expression on seeded jets yields all
//! partial derivatives up to order `D` without symbolic differentiation.
//!
//! Coefficients are stored densely in graded order: total degree `k = m + n`
//! first, then `m` ascending, i.e. `(0,0), (0,1), (1,0), (0,2), (1,1), ...`.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Position of `(m, n)` in the graded `(m + n, m)` ordering.
#[inline]
pub fn tri_index(m: usize, n: usize) -> usize {
    let k = m + n;
    k * (k + 1) / 2 + m
}

/// Number of pairs `(m, n)` with `m + n <= degree`.
#[inline]
pub fn tri_len(degree: usize) -> usize {
    (degree + 1) * (degree + 2) / 2
}

/// Iterates `(m, n)` with `m + n <= degree` in storage order.
pub fn graded_pairs(degree: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..=degree).flat_map(|k| (0..=k).map(move |m| (m, k - m)))
}

pub(crate) fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// Which variable a seeded jet represents.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Seed {
    X,
    Y,
    Const,
}

/// Truncated bivariate Taylor expansion.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet2 {
    degree: usize,
    coeffs: Vec<f64>,
}

impl Jet2 {
    pub fn zero(degree: usize) -> Self {
        Jet2 { degree, coeffs: vec![0.0; tri_len(degree)] }
    }

    pub fn constant(value: f64, degree: usize) -> Self {
        let mut jet = Self::zero(degree);
        jet.coeffs[0] = value;
        jet
    }

    /// Jet of `value` plus the seeded variable, truncated at `degree`.
    pub fn seed(value: f64, variable: Seed, degree: usize) -> Self {
        let mut jet = Self::constant(value, degree);
        if degree >= 1 {
            match variable {
                Seed::X => jet.coeffs[tri_index(1, 0)] = 1.0,
                Seed::Y => jet.coeffs[tri_index(0, 1)] = 1.0,
                Seed::Const => {}
            }
        }
        jet
    }

    /// Builds a jet from `(m, n, coefficient)` triples; terms beyond `degree` are dropped.
    pub fn from_terms(degree: usize, terms: impl IntoIterator<Item = (usize, usize, f64)>) -> Self {
        let mut jet = Self::zero(degree);
        for (m, n, c) in terms {
            if m + n <= degree {
                jet.coeffs[tri_index(m, n)] += c;
            }
        }
        jet
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficient of `x^m y^n`; zero beyond the truncation degree.
    pub fn coeff(&self, m: usize, n: usize) -> f64 {
        if m + n <= self.degree {
            self.coeffs[tri_index(m, n)]
        } else {
            0.0
        }
    }

    pub fn set_coeff(&mut self, m: usize, n: usize, value: f64) {
        assert!(m + n <= self.degree, "({m}, {n}) exceeds jet degree {}", self.degree);
        self.coeffs[tri_index(m, n)] = value;
    }

    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    /// `∂^{m+n} / ∂x^m ∂y^n` at the center: `coeff(m, n) · m! · n!`.
    pub fn partial(&self, m: usize, n: usize) -> f64 {
        self.coeff(m, n) * factorial(m) * factorial(n)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        graded_pairs(self.degree).zip(self.coeffs.iter()).map(|((m, n), &c)| (m, n, c))
    }

    /// Copy truncated (or zero-extended) to another degree.
    pub fn with_degree(&self, degree: usize) -> Self {
        Self::from_terms(degree, self.iter())
    }

    pub fn scale(&self, factor: f64) -> Self {
        Jet2 { degree: self.degree, coeffs: self.coeffs.iter().map(|c| c * factor).collect() }
    }

    fn check_degree(&self, other: &Jet2) {
        assert_eq!(self.degree, other.degree, "jet degree mismatch");
    }

    /// Solves `other · q = self` order by order.
    pub fn try_div(&self, other: &Jet2) -> Result<Jet2> {
        self.check_degree(other);
        let b0 = other.coeffs[0];
        if b0 == 0.0 {
            return Err(Error::DivisionByZeroConstantTerm);
        }
        let d = self.degree;
        let mut q = Jet2::zero(d);
        for (m, n) in graded_pairs(d) {
            let mut acc = self.coeffs[tri_index(m, n)];
            for i in 0..=m {
                for j in 0..=n {
                    if i + j == 0 {
                        continue;
                    }
                    let b = other.coeffs[tri_index(i, j)];
                    if b != 0.0 {
                        acc -= b * q.coeffs[tri_index(m - i, n - j)];
                    }
                }
            }
            q.coeffs[tri_index(m, n)] = acc / b0;
        }
        Ok(q)
    }

    pub fn recip(&self) -> Result<Jet2> {
        Jet2::constant(1.0, self.degree).try_div(self)
    }

    /// `f(c0 + w)` where `taylor[k] = f^{(k)}(c0) / k!` and `w = self - c0`.
    pub fn compose_univariate(&self, taylor: &[f64]) -> Jet2 {
        debug_assert_eq!(taylor.len(), self.degree + 1);
        let mut w = self.clone();
        w.coeffs[0] = 0.0;
        let mut out = Jet2::constant(taylor[self.degree], self.degree);
        for &t in taylor[..self.degree].iter().rev() {
            out = &out * &w;
            out.coeffs[0] += t;
        }
        out
    }

    pub fn exp(&self) -> Jet2 {
        self.compose_univariate(&taylor_exp(self.value(), self.degree))
    }

    pub fn sin(&self) -> Jet2 {
        self.compose_univariate(&taylor_sin(self.value(), self.degree))
    }

    pub fn cos(&self) -> Jet2 {
        self.compose_univariate(&taylor_cos(self.value(), self.degree))
    }

    pub fn sqrt(&self) -> Result<Jet2> {
        Ok(self.compose_univariate(&taylor_sqrt(self.value(), self.degree)?))
    }

    pub fn ln(&self) -> Result<Jet2> {
        Ok(self.compose_univariate(&taylor_ln(self.value(), self.degree)?))
    }

    pub fn powf(&self, exponent: f64) -> Result<Jet2> {
        Ok(self.compose_univariate(&taylor_powf(self.value(), exponent, self.degree)?))
    }

    /// Integer power by repeated squaring; negative exponents divide.
    pub fn powi(&self, exponent: i64) -> Result<Jet2> {
        let positive =
            pow_by_squaring(self.clone(), exponent.unsigned_abs(), Jet2::constant(1.0, self.degree), |a, b| a * b);
        if exponent < 0 {
            positive.recip()
        } else {
            Ok(positive)
        }
    }
}

/// Square-and-multiply shared by the scalar and jet paths so both perform the
/// same sequence of products.
pub(crate) fn pow_by_squaring<T: Clone>(base: T, mut exp: u64, one: T, mul: impl Fn(&T, &T) -> T) -> T {
    let mut result: Option<T> = None;
    let mut square = base;
    while exp > 0 {
        if exp & 1 == 1 {
            result = Some(match result {
                None => square.clone(),
                Some(r) => mul(&r, &square),
            });
        }
        exp >>= 1;
        if exp > 0 {
            square = mul(&square, &square);
        }
    }
    result.unwrap_or(one)
}

fn taylor_exp(c: f64, degree: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(degree + 1);
    let mut t = c.exp();
    for k in 0..=degree {
        if k > 0 {
            t /= k as f64;
        }
        out.push(t);
    }
    out
}

fn taylor_cyclic(cycle: [f64; 4], degree: usize) -> Vec<f64> {
    (0..=degree).map(|k| cycle[k % 4] / factorial(k)).collect()
}

/// `sin(c)` and `cos(c)` from the separate libm calls; a fused `sincos` may
/// round differently from the scalar evaluator.
fn sin_cos_unfused(c: f64) -> (f64, f64) {
    (c.sin(), std::hint::black_box(c).cos())
}

fn taylor_sin(c: f64, degree: usize) -> Vec<f64> {
    let (s, co) = sin_cos_unfused(c);
    taylor_cyclic([s, co, -s, -co], degree)
}

fn taylor_cos(c: f64, degree: usize) -> Vec<f64> {
    let (s, co) = sin_cos_unfused(c);
    taylor_cyclic([co, -s, -co, s], degree)
}

fn taylor_ln(c: f64, degree: usize) -> Result<Vec<f64>> {
    if c <= 0.0 || !c.is_finite() {
        return Err(Error::Domain(format!("ln of non-positive value {c}")));
    }
    let mut out = vec![c.ln()];
    let mut inv_pow = 1.0;
    for k in 1..=degree {
        inv_pow /= c;
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        out.push(sign * inv_pow / k as f64);
    }
    Ok(out)
}

fn binomial_series(t0: f64, c: f64, exponent: f64, degree: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(degree + 1);
    let mut t = t0;
    out.push(t);
    for k in 1..=degree {
        t *= (exponent - (k - 1) as f64) / (k as f64 * c);
        out.push(t);
    }
    out
}

fn taylor_sqrt(c: f64, degree: usize) -> Result<Vec<f64>> {
    if c < 0.0 || (c == 0.0 && degree > 0) {
        return Err(Error::Domain(format!("sqrt needs a positive argument, got {c}")));
    }
    Ok(binomial_series(c.sqrt(), c, 0.5, degree))
}

fn taylor_powf(c: f64, exponent: f64, degree: usize) -> Result<Vec<f64>> {
    if c < 0.0 || (c == 0.0 && degree > 0) {
        return Err(Error::Domain(format!("real power of non-positive value {c}")));
    }
    Ok(binomial_series(c.powf(exponent), c, exponent, degree))
}

fn mul_jet2(a: &Jet2, b: &Jet2) -> Jet2 {
    a.check_degree(b);
    let d = a.degree;
    let mut out = Jet2::zero(d);
    for k1 in 0..=d {
        for m1 in 0..=k1 {
            let x = a.coeffs[k1 * (k1 + 1) / 2 + m1];
            if x == 0.0 {
                continue;
            }
            for k2 in 0..=(d - k1) {
                let base_b = k2 * (k2 + 1) / 2;
                let k = k1 + k2;
                let base_out = k * (k + 1) / 2 + m1;
                for m2 in 0..=k2 {
                    out.coeffs[base_out + m2] += x * b.coeffs[base_b + m2];
                }
            }
        }
    }
    out
}

impl<'a> Mul<&'a Jet2> for &'a Jet2 {
    type Output = Jet2;
    fn mul(self, rhs: &'a Jet2) -> Jet2 {
        mul_jet2(self, rhs)
    }
}

impl Mul for Jet2 {
    type Output = Jet2;
    fn mul(self, rhs: Jet2) -> Jet2 {
        mul_jet2(&self, &rhs)
    }
}

impl Mul<f64> for &Jet2 {
    type Output = Jet2;
    fn mul(self, rhs: f64) -> Jet2 {
        self.scale(rhs)
    }
}

impl<'a> Add<&'a Jet2> for &'a Jet2 {
    type Output = Jet2;
    fn add(self, rhs: &'a Jet2) -> Jet2 {
        self.check_degree(rhs);
        Jet2 { degree: self.degree, coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect() }
    }
}

impl Add for Jet2 {
    type Output = Jet2;
    fn add(self, rhs: Jet2) -> Jet2 {
        &self + &rhs
    }
}

impl AddAssign<&Jet2> for Jet2 {
    fn add_assign(&mut self, rhs: &Jet2) {
        self.check_degree(rhs);
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

impl<'a> Sub<&'a Jet2> for &'a Jet2 {
    type Output = Jet2;
    fn sub(self, rhs: &'a Jet2) -> Jet2 {
        self.check_degree(rhs);
        Jet2 { degree: self.degree, coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect() }
    }
}

impl Sub for Jet2 {
    type Output = Jet2;
    fn sub(self, rhs: Jet2) -> Jet2 {
        &self - &rhs
    }
}

impl Neg for &Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        self.scale(-1.0)
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        self.scale(-1.0)
    }
}

/// Truncated univariate Taylor expansion in `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet1 {
    coeffs: Vec<f64>,
}

impl Jet1 {
    pub fn zero(degree: usize) -> Self {
        Jet1 { coeffs: vec![0.0; degree + 1] }
    }

    pub fn constant(value: f64, degree: usize) -> Self {
        let mut jet = Self::zero(degree);
        jet.coeffs[0] = value;
        jet
    }

    /// The identity series `t`.
    pub fn variable(degree: usize) -> Self {
        let mut jet = Self::zero(degree);
        if degree >= 1 {
            jet.coeffs[1] = 1.0;
        }
        jet
    }

    pub fn from_coeffs(coeffs: Vec<f64>) -> Self {
        assert!(!coeffs.is_empty(), "a jet needs at least the constant term");
        Jet1 { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, p: usize) -> f64 {
        self.coeffs.get(p).copied().unwrap_or(0.0)
    }

    pub fn set_coeff(&mut self, p: usize, value: f64) {
        self.coeffs[p] = value;
    }

    /// `p`-th derivative at `t = 0`.
    pub fn derivative_at_zero(&self, p: usize) -> f64 {
        self.coeff(p) * factorial(p)
    }

    pub fn truncate(&self, degree: usize) -> Jet1 {
        let mut coeffs: Vec<f64> = self.coeffs.iter().copied().take(degree + 1).collect();
        coeffs.resize(degree + 1, 0.0);
        Jet1 { coeffs }
    }

    /// `d/dt`, one degree lower.
    pub fn derivative(&self) -> Jet1 {
        if self.degree() == 0 {
            return Jet1::zero(0);
        }
        Jet1 { coeffs: self.coeffs.iter().enumerate().skip(1).map(|(p, c)| p as f64 * c).collect() }
    }

    pub fn scale(&self, factor: f64) -> Jet1 {
        Jet1 { coeffs: self.coeffs.iter().map(|c| c * factor).collect() }
    }

    fn check_degree(&self, other: &Jet1) {
        assert_eq!(self.coeffs.len(), other.coeffs.len(), "jet degree mismatch");
    }

    pub fn try_div(&self, other: &Jet1) -> Result<Jet1> {
        self.check_degree(other);
        let b0 = other.coeffs[0];
        if b0 == 0.0 {
            return Err(Error::DivisionByZeroConstantTerm);
        }
        let mut q = vec![0.0; self.coeffs.len()];
        for p in 0..q.len() {
            let mut acc = self.coeffs[p];
            for i in 1..=p {
                acc -= other.coeffs[i] * q[p - i];
            }
            q[p] = acc / b0;
        }
        Ok(Jet1 { coeffs: q })
    }

    pub fn compose_univariate(&self, taylor: &[f64]) -> Jet1 {
        let d = self.degree();
        let mut w = self.clone();
        w.coeffs[0] = 0.0;
        let mut out = Jet1::constant(taylor[d], d);
        for &t in taylor[..d].iter().rev() {
            out = &out * &w;
            out.coeffs[0] += t;
        }
        out
    }

    pub fn sqrt(&self) -> Result<Jet1> {
        Ok(self.compose_univariate(&taylor_sqrt(self.coeffs[0], self.degree())?))
    }

    pub fn powf(&self, exponent: f64) -> Result<Jet1> {
        Ok(self.compose_univariate(&taylor_powf(self.coeffs[0], exponent, self.degree())?))
    }

    /// Non-negative integer power by repeated multiplication.
    pub fn powu(&self, exponent: usize) -> Jet1 {
        let mut out = Jet1::constant(1.0, self.degree());
        for _ in 0..exponent {
            out = &out * self;
        }
        out
    }
}

impl<'a> Mul<&'a Jet1> for &'a Jet1 {
    type Output = Jet1;
    fn mul(self, rhs: &'a Jet1) -> Jet1 {
        self.check_degree(rhs);
        let d = self.degree();
        let mut out = vec![0.0; d + 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for (j, &b) in rhs.coeffs[..=d - i].iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Jet1 { coeffs: out }
    }
}

impl<'a> Add<&'a Jet1> for &'a Jet1 {
    type Output = Jet1;
    fn add(self, rhs: &'a Jet1) -> Jet1 {
        self.check_degree(rhs);
        Jet1 { coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect() }
    }
}

impl<'a> Sub<&'a Jet1> for &'a Jet1 {
    type Output = Jet1;
    fn sub(self, rhs: &'a Jet1) -> Jet1 {
        self.check_degree(rhs);
        Jet1 { coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &Jet1 {
    type Output = Jet1;
    fn neg(self) -> Jet1 {
        self.scale(-1.0)
    }
}

/// Series of `P(r(t), s(t))` for a bivariate jet `P` and curve jets with
/// `r(0) = s(0) = 0`. The result has degree `min(P.degree, r.degree, s.degree)`,
/// the highest order that is fully determined by the inputs.
pub fn compose_bivariate(p: &Jet2, r: &Jet1, s: &Jet1) -> Result<Jet1> {
    if r.coeff(0) != 0.0 || s.coeff(0) != 0.0 {
        return Err(Error::NonzeroCurveOrigin { r0: r.coeff(0), s0: s.coeff(0) });
    }
    let degree = p.degree().min(r.degree()).min(s.degree());
    let r = r.truncate(degree);
    let s = s.truncate(degree);
    let r_pows: Vec<Jet1> = (0..=degree).map(|k| r.powu(k)).collect();
    let s_pows: Vec<Jet1> = (0..=degree).map(|k| s.powu(k)).collect();
    let mut out = Jet1::zero(degree);
    for (m, n, c) in p.iter() {
        if c == 0.0 || m + n > degree {
            continue;
        }
        let term = &r_pows[m] * &s_pows[n];
        for (o, t) in out.coeffs.iter_mut().zip(&term.coeffs) {
            *o += c * t;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn assert_coeffs(jet: &Jet2, expected: &[((usize, usize), f64)]) {
        for (m, n, c) in jet.iter() {
            let want = expected.iter().find(|(k, _)| *k == (m, n)).map(|(_, v)| *v).unwrap_or(0.0);
            assert_relative_eq!(c, want, epsilon = 1e-15);
        }
    }

    #[test]
    fn seeds() {
        assert_coeffs(&Jet2::seed(3.0, Seed::Const, 2), &[((0, 0), 3.0)]);
        assert_coeffs(&Jet2::seed(0.5, Seed::X, 2), &[((0, 0), 0.5), ((1, 0), 1.0)]);
        let y0 = Jet2::seed(0.0, Seed::Y, 0);
        assert_eq!(y0.coeffs(), &[0.0]);
    }

    #[test]
    fn truncated_products() {
        let x = Jet2::seed(0.0, Seed::X, 2);
        assert_coeffs(&(&x * &x), &[((2, 0), 1.0)]);

        let one_plus_x = Jet2::seed(1.0, Seed::X, 1);
        let one_plus_y = Jet2::seed(1.0, Seed::Y, 1);
        assert_coeffs(&(&one_plus_x * &one_plus_y), &[((0, 0), 1.0), ((1, 0), 1.0), ((0, 1), 1.0)]);
    }

    #[test]
    fn geometric_series() {
        let one = Jet2::constant(1.0, 3);
        let one_minus_x = &one - &Jet2::seed(0.0, Seed::X, 3);
        let q = one.try_div(&one_minus_x).unwrap();
        assert_coeffs(&q, &[((0, 0), 1.0), ((1, 0), 1.0), ((2, 0), 1.0), ((3, 0), 1.0)]);
    }

    #[test]
    fn division_by_zero_constant_term() {
        let x = Jet2::seed(0.0, Seed::X, 3);
        assert!(matches!(Jet2::constant(1.0, 3).try_div(&x), Err(Error::DivisionByZeroConstantTerm)));
    }

    #[test]
    fn elementary_series() {
        let x = Jet2::seed(0.0, Seed::X, 2);
        assert_coeffs(&x.exp(), &[((0, 0), 1.0), ((1, 0), 1.0), ((2, 0), 0.5)]);
        assert_coeffs(&Jet2::constant(0.0, 4).sin(), &[]);
        assert!(matches!(Jet2::constant(-1.0, 2).sqrt(), Err(Error::Domain(_))));
        assert!(matches!(Jet2::constant(0.0, 2).ln(), Err(Error::Domain(_))));
    }

    #[test]
    fn sqrt_squares_back() {
        let a = Jet2::from_terms(5, [(0, 0, 2.0), (1, 0, 0.3), (0, 1, -0.7), (1, 1, 0.2), (3, 0, 0.1)]);
        let r = a.sqrt().unwrap();
        let back = &r * &r;
        for (x, y) in back.coeffs().iter().zip(a.coeffs()) {
            assert_relative_eq!(x, y, epsilon = 1e-14);
        }
    }

    #[test]
    fn powi_matches_products() {
        let a = Jet2::from_terms(4, [(0, 0, 1.5), (1, 0, 0.3), (0, 1, -0.7)]);
        let cube = &(&a * &a) * &a;
        let p = a.powi(3).unwrap();
        for (x, y) in p.coeffs().iter().zip(cube.coeffs()) {
            assert_relative_eq!(x, y, epsilon = 1e-14);
        }
        let inv = a.powi(-3).unwrap();
        let one = &inv * &cube;
        assert_relative_eq!(one.value(), 1.0, epsilon = 1e-14);
        for c in &one.coeffs()[1..] {
            assert!(c.abs() < 1e-13);
        }
    }

    #[test]
    fn compose_examples() {
        let t = Jet1::variable(4);
        let zero = Jet1::zero(4);
        let x2 = Jet2::from_terms(4, [(2, 0, 1.0)]);
        let out = compose_bivariate(&x2, &t, &zero).unwrap();
        assert_eq!(out.coeff(2), 1.0);

        // y^2/2 - x^2/2 on the diagonal vanishes identically.
        let g02 = Jet2::from_terms(4, [(0, 2, 0.5), (2, 0, -0.5)]);
        let out = compose_bivariate(&g02, &t, &t).unwrap();
        assert!(out.coeffs().iter().all(|c| *c == 0.0));

        // xy along (t, t^2) is t^3.
        let xy = Jet2::from_terms(5, [(1, 1, 1.0)]);
        let t2 = Jet1::from_coeffs(vec![0.0, 0.0, 1.0, 0.0, 0.0, 0.0]);
        let out = compose_bivariate(&xy, &Jet1::variable(5), &t2).unwrap();
        for p in 0..=5 {
            assert_eq!(out.coeff(p), if p == 3 { 1.0 } else { 0.0 });
        }
    }

    #[test]
    fn compose_rejects_offset_curve() {
        let p = Jet2::constant(1.0, 2);
        let r = Jet1::constant(0.1, 2);
        assert!(matches!(compose_bivariate(&p, &r, &Jet1::zero(2)), Err(Error::NonzeroCurveOrigin { .. })));
    }

    #[test]
    fn jet1_division_and_sqrt() {
        let a = Jet1::from_coeffs(vec![4.0, 1.0, -0.5, 0.25]);
        let r = a.sqrt().unwrap();
        let back = &r * &r;
        for (x, y) in back.coeffs().iter().zip(a.coeffs()) {
            assert_relative_eq!(x, y, epsilon = 1e-14);
        }
        let q = back.try_div(&r).unwrap();
        for (x, y) in q.coeffs().iter().zip(r.coeffs()) {
            assert_relative_eq!(x, y, epsilon = 1e-14);
        }
    }
}
