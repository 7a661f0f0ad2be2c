use crate::error::Result;
use crate::jets::Jet2;

use super::check_order;

/// Right-hand side of the regular stencil from the Taylor jet of `f` at the center.
///
/// Order 6 includes the `h^6` terms; orders 3 to 5 use the fourth-order right-hand side.
pub fn regular_rhs(f: &Jet2, h: f64, order: usize) -> Result<f64> {
    check_order(order)?;
    let needed = if order == 6 { 4 } else { 2 };
    assert!(f.degree() >= needed, "source jet needs degree {needed} for order {order}");
    let h2 = h * h;
    let mut rhs = -6.0 * h2 * f.partial(0, 0);
    rhs -= 0.5 * h2 * h2 * (f.partial(0, 2) + f.partial(2, 0));
    if order == 6 {
        let h6 = h2 * h2 * h2;
        rhs -= h6 / 60.0 * (f.partial(0, 4) + f.partial(4, 0)) + h6 / 15.0 * f.partial(2, 2);
    }
    Ok(rhs)
}
