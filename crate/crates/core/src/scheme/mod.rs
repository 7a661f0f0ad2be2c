//! Right-hand sides of the regular and irregular stencils.
//!
//! Irregular rows rely on the transmission recursion, which links derivatives
//! across the interface.

mod curve;
mod index;
mod irregular;
mod linear_form;
mod poly;
mod rank;
mod reduce;
mod regular;
mod transmission;

pub use curve::{curve_series, CurveSeries};
pub use index::{lambda, lambda1, lambda1_index, lambda2};
pub use irregular::{irregular_form, irregular_rhs, IrregularGeometry};
pub use linear_form::{Basis, Block, DataDerivatives, LinearForm};
pub use poly::{gen_g, gen_h, PolyXY};
pub use rank::{max_order_rank_check, RankCheck};
pub use reduce::{reduce_derivative, Reduction};
pub use regular::regular_rhs;
pub use transmission::{transmission, transmission_from_series, Transmission};

use crate::error::{Error, Result};
use crate::geometry::{offset_slot, OFFSETS};

/// The nine stencil weights in [`OFFSETS`] order: corners 1, edges 4, center -20.
pub const STENCIL: [f64; 9] = [1.0, 4.0, 1.0, 4.0, -20.0, 4.0, 1.0, 4.0, 1.0];

pub fn stencil_weight(k: i32, l: i32) -> f64 {
    STENCIL[offset_slot(k, l)]
}

/// Coefficients and right-hand side of one grid equation.
#[derive(Clone, Debug, PartialEq)]
pub struct StencilRow {
    pub coeffs: [f64; 9],
    pub rhs: f64,
}

impl StencilRow {
    pub fn new(rhs: f64) -> StencilRow {
        StencilRow { coeffs: STENCIL, rhs }
    }

    /// `sum C_{k,l} u(x_i + k h, y_j + l h)`.
    pub fn apply(&self, mut u: impl FnMut(i32, i32) -> f64) -> f64 {
        OFFSETS.iter().zip(&self.coeffs).map(|(&(k, l), c)| c * u(k, l)).sum()
    }
}

pub fn check_order(order: usize) -> Result<usize> {
    if (3..=6).contains(&order) {
        Ok(order)
    } else {
        Err(Error::UnsupportedOrder(order))
    }
}
