use log::debug;

use crate::error::Result;
use crate::geometry::{CurveChart, PointClass, Side, OFFSETS};

use super::poly::families;
use super::{lambda, lambda1, stencil_weight, transmission, Block, DataDerivatives, LinearForm, Transmission};

/// Placement of an irregular stencil relative to its base point.
#[derive(Clone, Copy, Debug)]
pub struct IrregularGeometry {
    pub class: PointClass,
    /// `x_i - x*`.
    pub v0: f64,
    /// `y_j - y*`.
    pub w0: f64,
    pub h: f64,
}

/// Right-hand side of an irregular row as a linear form over the base-point data.
pub fn irregular_form(geom: &IrregularGeometry, trans: &Transmission) -> LinearForm {
    let order = trans.order;
    let IrregularGeometry { class, v0, w0, h } = *geom;
    if v0.abs() > (1.0 - 1e-8) * h || w0.abs() > (1.0 - 1e-8) * h {
        debug!("base point close to the stencil square boundary: v0 = {v0}, w0 = {w0}, h = {h}");
    }
    let fam = families();
    let points: Vec<(Side, f64, f64, f64)> = OFFSETS
        .iter()
        .map(|&(k, l)| (class.side_of(k, l), stencil_weight(k, l), v0 + k as f64 * h, w0 + l as f64 * h))
        .collect();

    let mut form = LinearForm::zero(trans.forms()[0].basis());
    for (m, n) in lambda(order - 1) {
        let poly = &fam.h(m, n).value;
        let (mut plus, mut minus) = (0.0, 0.0);
        for &(side, c, x, y) in &points {
            let v = c * poly.eval(x, y);
            match side {
                Side::Plus => plus += v,
                Side::Minus => minus += v,
            }
        }
        form.add_to(Block::FPlus, m, n, plus);
        form.add_to(Block::FMinus, m, n, minus);
    }
    for (pos, (m, n)) in lambda1(order + 1).into_iter().enumerate() {
        let poly = &fam.g(m, n).value;
        let i_minus: f64 = points.iter().filter(|p| p.0 == Side::Minus).map(|&(_, c, x, y)| c * poly.eval(x, y)).sum();
        form.axpy(-i_minus, &trans.forms()[pos]);
    }
    form
}

pub fn irregular_rhs(
    chart: &CurveChart,
    geom: &IrregularGeometry,
    data: &DataDerivatives,
    order: usize,
) -> Result<f64> {
    let trans = transmission(chart, order)?;
    Ok(irregular_form(geom, &trans).evaluate(data))
}
