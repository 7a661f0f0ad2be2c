/// `u^{(m,n)}` written through `u^{(m',n')}` with `m' <= 1` and derivatives of `f = -Laplacian u`.
#[derive(Clone, Debug, PartialEq)]
pub struct Reduction {
    pub u: ((usize, usize), f64),
    pub f: Vec<((usize, usize), f64)>,
}

pub fn reduce_derivative(m: usize, n: usize) -> Reduction {
    let odd = m % 2;
    let half = m / 2;
    let sign = |l: usize| if l.is_multiple_of(2) { 1.0 } else { -1.0 };
    Reduction {
        u: ((odd, n + m - odd), sign(half)),
        f: (1..=half).map(|l| ((m - 2 * l, n + 2 * l - 2), sign(l))).collect(),
    }
}
