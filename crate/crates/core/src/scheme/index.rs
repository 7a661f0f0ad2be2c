use crate::jets::graded_pairs;

/// `Lambda_K`: all `(m, n)` with `m + n <= K`, graded by `(m + n, m)`.
pub fn lambda(k: usize) -> Vec<(usize, usize)> {
    graded_pairs(k).collect()
}

/// `Lambda^1_K`: members of `Lambda_K` with `m <= 1`; `2K + 1` pairs.
pub fn lambda1(k: usize) -> Vec<(usize, usize)> {
    graded_pairs(k).filter(|&(m, _)| m <= 1).collect()
}

/// `Lambda^2_K = Lambda_K \ Lambda^1_K`.
pub fn lambda2(k: usize) -> Vec<(usize, usize)> {
    graded_pairs(k).filter(|&(m, _)| m >= 2).collect()
}

/// Position of `(m, n)`, `m <= 1`, in [`lambda1`].
pub fn lambda1_index(m: usize, n: usize) -> usize {
    debug_assert!(m <= 1);
    let d = m + n;
    if d == 0 {
        0
    } else {
        2 * d - 1 + m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cardinalities() {
        for order in 3..=7 {
            let k = order + 1;
            assert_eq!(lambda1(k).len(), 2 * order + 3);
            assert_eq!(lambda(k).len(), lambda1(k).len() + lambda(order - 1).len());
            assert_eq!(lambda(k).len(), lambda1(k).len() + lambda2(k).len());
        }
    }

    #[test]
    fn lambda1_for_order_six() {
        let set = lambda1(7);
        assert_eq!(set.len(), 15);
        assert_eq!(&set[..5], &[(0, 0), (0, 1), (1, 0), (0, 2), (1, 1)]);
        assert_eq!(set.last(), Some(&(1, 6)));
        for (pos, &(m, n)) in set.iter().enumerate() {
            assert_eq!(lambda1_index(m, n), pos);
        }
    }

    #[test]
    fn graded_order() {
        assert_eq!(lambda(2), vec![(0, 0), (0, 1), (1, 0), (0, 2), (1, 1), (2, 0)]);
        assert_eq!(lambda2(3), vec![(2, 0), (2, 1), (3, 0)]);
    }
}
