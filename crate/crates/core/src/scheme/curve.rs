use crate::error::Result;
use crate::geometry::CurveChart;
use crate::jets::{tri_index, tri_len, Jet1};

use super::poly::{families, WithGradient};
use super::{lambda, lambda1, lambda1_index, PolyXY};

/// Taylor coefficients in `t` of the polynomial families restricted to the curve.
#[derive(Clone, Debug)]
pub struct CurveSeries {
    pub order: usize,
    /// `G_{m,n}(r, s)` per `Lambda^1_{M+1}` member, degree `M + 1`.
    g: Vec<Jet1>,
    /// `H_{m,n}(r, s)` per `Lambda_{M-1}` member, degree `M + 1`.
    h: Vec<Jet1>,
    /// `r^m s^n` per `Lambda_{M+1}` member, degree `M + 1`.
    r: Vec<Jet1>,
    /// `grad G_{m,n}(r, s) . (s', -r')`, degree `M`.
    gt: Vec<Jet1>,
    /// `grad H_{m,n}(r, s) . (s', -r')`, degree `M`.
    ht: Vec<Jet1>,
    /// `r^m s^n sqrt(r'^2 + s'^2)`, signed by the chart orientation, degree `M`.
    rt: Vec<Jet1>,
}

struct Powers {
    /// `r^a s^b` at index `tri_index(a, b)`.
    table: Vec<Jet1>,
}

impl Powers {
    fn new(r: &Jet1, s: &Jet1, degree: usize) -> Powers {
        let mut table = vec![Jet1::zero(degree); tri_len(degree)];
        let mut r_pow = Jet1::constant(1.0, degree);
        for a in 0..=degree {
            let mut term = r_pow.clone();
            for b in 0..=degree - a {
                table[tri_index(a, b)] = term.clone();
                term = &term * s;
            }
            r_pow = &r_pow * r;
        }
        Powers { table }
    }

    fn compose(&self, poly: &PolyXY, degree: usize) -> Jet1 {
        let mut out = Jet1::zero(degree);
        for (a, b, c) in poly.approx_terms() {
            let term = &self.table[tri_index(a, b)];
            for p in 0..=degree {
                let v = out.coeff(p) + c * term.coeff(p);
                out.set_coeff(p, v);
            }
        }
        out
    }
}

fn normal_derivative(powers: &Powers, poly: &WithGradient, ds: &Jet1, dr: &Jet1, degree: usize) -> Jet1 {
    let px = powers.compose(&poly.dx, degree);
    let py = powers.compose(&poly.dy, degree);
    &(&px * ds) - &(&py * dr)
}

pub fn curve_series(chart: &CurveChart, order: usize) -> Result<CurveSeries> {
    let top = order + 1;
    assert!(chart.degree() >= top, "chart degree {} below {top}", chart.degree());
    let r = chart.r.truncate(top);
    let s = chart.s.truncate(top);
    let powers = Powers::new(&r, &s, top);
    let dr = r.derivative();
    let ds = s.derivative();
    let speed = (&(&dr * &dr) + &(&ds * &ds)).sqrt()?;

    let fam = families();
    let g = lambda1(top).iter().map(|&(m, n)| powers.compose(&fam.g(m, n).value, top)).collect();
    let h = lambda(order - 1).iter().map(|&(m, n)| powers.compose(&fam.h(m, n).value, top)).collect();
    let rr = lambda(top).iter().map(|&(m, n)| powers.table[tri_index(m, n)].clone()).collect();
    let gt = lambda1(top).iter().map(|&(m, n)| normal_derivative(&powers, fam.g(m, n), &ds, &dr, order)).collect();
    let ht = lambda(order - 1).iter().map(|&(m, n)| normal_derivative(&powers, fam.h(m, n), &ds, &dr, order)).collect();
    let rt = lambda(order)
        .iter()
        .map(|&(m, n)| (&powers.table[tri_index(m, n)].truncate(order) * &speed).scale(chart.orient))
        .collect();
    Ok(CurveSeries { order, g, h, r: rr, gt, ht, rt })
}

impl CurveSeries {
    /// `g_{m,n,p}`, `m <= 1`.
    pub fn g(&self, m: usize, n: usize, p: usize) -> f64 {
        self.g[lambda1_index(m, n)].coeff(p)
    }

    pub fn h(&self, m: usize, n: usize, p: usize) -> f64 {
        self.h[tri_index(m, n)].coeff(p)
    }

    pub fn r(&self, m: usize, n: usize, p: usize) -> f64 {
        self.r[tri_index(m, n)].coeff(p)
    }

    pub fn g_tilde(&self, m: usize, n: usize, p: usize) -> f64 {
        self.gt[lambda1_index(m, n)].coeff(p)
    }

    pub fn h_tilde(&self, m: usize, n: usize, p: usize) -> f64 {
        self.ht[tri_index(m, n)].coeff(p)
    }

    pub fn r_tilde(&self, m: usize, n: usize, p: usize) -> f64 {
        self.rt[tri_index(m, n)].coeff(p)
    }
}
