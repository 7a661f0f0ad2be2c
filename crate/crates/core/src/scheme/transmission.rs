use crate::error::{Error, Result};
use crate::geometry::CurveChart;
use crate::jets::factorial;

use super::{curve_series, lambda, lambda1, lambda1_index, Basis, Block, CurveSeries, DataDerivatives, LinearForm};

/// `U^{(m,n)} = u_+^{(m,n)} - u_-^{(m,n)}` for `(m, n)` in `Lambda^1_{M+1}`, as linear forms in the data.
#[derive(Clone, Debug)]
pub struct Transmission {
    pub order: usize,
    forms: Vec<LinearForm>,
    determinants: Vec<f64>,
}

impl Transmission {
    pub fn u(&self, m: usize, n: usize) -> &LinearForm {
        &self.forms[lambda1_index(m, n)]
    }

    pub fn forms(&self) -> &[LinearForm] {
        &self.forms
    }

    /// Determinant of the `2 x 2` system solved at step `p`, `1 <= p <= M + 1`.
    pub fn determinant(&self, p: usize) -> f64 {
        self.determinants[p - 1]
    }

    pub fn evaluate(&self, data: &DataDerivatives) -> Vec<f64> {
        self.forms.iter().map(|f| f.evaluate(data)).collect()
    }
}

pub fn transmission(chart: &CurveChart, order: usize) -> Result<Transmission> {
    transmission_from_series(&curve_series(chart, order)?)
}

pub fn transmission_from_series(series: &CurveSeries) -> Result<Transmission> {
    let order = series.order;
    let basis = Basis::new(order);
    let index1 = lambda1(order + 1);
    let mut forms = vec![LinearForm::zero(basis); index1.len()];
    forms[0] = LinearForm::unit(basis, Block::G1, 0, 0);
    let mut determinants = Vec::with_capacity(order + 1);

    for p in 1..=order + 1 {
        // value condition, coefficient of t^p
        let mut rhs_u = LinearForm::zero(basis);
        for (m, n) in lambda(order - 1) {
            let c = series.h(m, n, p);
            rhs_u.add_to(Block::FMinus, m, n, c);
            rhs_u.add_to(Block::FPlus, m, n, -c);
        }
        for (m, n) in lambda(order + 1) {
            rhs_u.add_to(Block::G1, m, n, series.r(m, n, p) / (factorial(m) * factorial(n)));
        }
        // flux condition, coefficient of t^(p-1)
        let mut rhs_flux = LinearForm::zero(basis);
        for (m, n) in lambda(order - 1) {
            let c = series.h_tilde(m, n, p - 1);
            rhs_flux.add_to(Block::FMinus, m, n, c);
            rhs_flux.add_to(Block::FPlus, m, n, -c);
        }
        for (m, n) in lambda(order) {
            rhs_flux.add_to(Block::G, m, n, series.r_tilde(m, n, p - 1) / (factorial(m) * factorial(n)));
        }
        for (pos, &(m, n)) in index1.iter().enumerate() {
            if m + n >= p {
                break;
            }
            rhs_u.axpy(-series.g(m, n, p), &forms[pos]);
            rhs_flux.axpy(-series.g_tilde(m, n, p - 1), &forms[pos]);
        }

        let a = series.g(0, p, p);
        let b = series.g(1, p - 1, p);
        let c = series.g_tilde(0, p, p - 1);
        let d = series.g_tilde(1, p - 1, p - 1);
        let det = a * d - b * c;
        if det.is_nan() || det <= 0.0 {
            return Err(Error::SingularTransmission { p, det });
        }
        determinants.push(det);
        let mut u0 = rhs_u.scale(d / det);
        u0.axpy(-b / det, &rhs_flux);
        let mut u1 = rhs_flux.scale(a / det);
        u1.axpy(-c / det, &rhs_u);
        forms[lambda1_index(0, p)] = u0;
        forms[lambda1_index(1, p - 1)] = u1;
    }
    Ok(Transmission { order, forms, determinants })
}
