use nalgebra::DMatrix;

use super::{gen_g, lambda1, STENCIL};
use crate::geometry::OFFSETS;

#[derive(Clone, Debug)]
pub struct RankCheck {
    pub rank_m6: usize,
    pub rank_m7: usize,
    /// Null vector of the order-6 system in stencil order, scaled so the center weight is -20.
    pub null_vector: [f64; 9],
}

fn moment_matrix(order: usize) -> DMatrix<f64> {
    let rows = lambda1(order + 1);
    DMatrix::from_fn(rows.len(), 9, |row, col| {
        let (m, n) = rows[row];
        let (k, l) = OFFSETS[col];
        gen_g(m, n).eval(k as f64, l as f64)
    })
}

fn numerical_rank(singular: &[f64]) -> usize {
    let top = singular.iter().cloned().fold(0.0, f64::max);
    singular.iter().filter(|&&s| s > 1e-10 * top).count()
}

/// Ranks of `(G_{m,n}(k, l))` over `Lambda^1_{M+1}` for `M = 6, 7`.
pub fn max_order_rank_check() -> RankCheck {
    let m6 = moment_matrix(6);
    let svd6 = m6.clone().svd(false, true);
    let svd7 = moment_matrix(7).svd(false, false);
    let v_t = svd6.v_t.expect("requested V^T");
    let (smallest, _) =
        svd6.singular_values.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).expect("nine singular values");
    let row = v_t.row(smallest);
    let scale = STENCIL[4] / row[4];
    let mut null_vector = [0.0; 9];
    for (slot, v) in null_vector.iter_mut().enumerate() {
        *v = row[slot] * scale;
    }
    RankCheck {
        rank_m6: numerical_rank(svd6.singular_values.as_slice()),
        rank_m7: numerical_rank(svd7.singular_values.as_slice()),
        null_vector,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranks_and_null_vector() {
        let check = max_order_rank_check();
        assert_eq!((check.rank_m6, check.rank_m7), (8, 9));
        for (got, want) in check.null_vector.iter().zip(STENCIL) {
            assert!((got - want).abs() <= 1e-10 * 20.0, "{got} vs {want}");
        }
        let residual = moment_matrix(6) * nalgebra::DVector::from_row_slice(&STENCIL);
        assert!(residual.amax() < 1e-12);
    }
}
