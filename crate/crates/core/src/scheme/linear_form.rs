use std::ops::{Add, Mul, Sub};

use crate::jets::{factorial, graded_pairs, tri_index, tri_len, Jet2};

/// One group of data derivatives at the base point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Block {
    /// `f_+^{(m,n)}`, `(m, n)` in `Lambda_{M-1}`.
    FPlus,
    /// `f_-^{(m,n)}`, `(m, n)` in `Lambda_{M-1}`.
    FMinus,
    /// `g_1^{(m,n)}`, `(m, n)` in `Lambda_{M+1}`.
    G1,
    /// `g^{(m,n)}`, `(m, n)` in `Lambda_M`.
    G,
}

pub const BLOCKS: [Block; 4] = [Block::FPlus, Block::FMinus, Block::G1, Block::G];

/// Layout of the data-derivative coordinates for accuracy order `M`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Basis {
    pub order: usize,
}

impl Basis {
    pub fn new(order: usize) -> Basis {
        assert!(order >= 1);
        Basis { order }
    }

    pub fn degree(&self, block: Block) -> usize {
        match block {
            Block::FPlus | Block::FMinus => self.order - 1,
            Block::G1 => self.order + 1,
            Block::G => self.order,
        }
    }

    pub fn offset(&self, block: Block) -> usize {
        let f = tri_len(self.order - 1);
        match block {
            Block::FPlus => 0,
            Block::FMinus => f,
            Block::G1 => 2 * f,
            Block::G => 2 * f + tri_len(self.order + 1),
        }
    }

    pub fn len(&self) -> usize {
        self.offset(Block::G) + tri_len(self.order)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn index(&self, block: Block, m: usize, n: usize) -> usize {
        assert!(m + n <= self.degree(block), "({m}, {n}) outside the {block:?} index set");
        self.offset(block) + tri_index(m, n)
    }

    /// `(block, m, n)` for every coordinate, in storage order.
    pub fn coordinates(&self) -> impl Iterator<Item = (Block, usize, usize)> + '_ {
        BLOCKS.iter().flat_map(move |&b| graded_pairs(self.degree(b)).map(move |(m, n)| (b, m, n)))
    }
}

/// Linear functional `constant + sum c_k d_k` over the data derivatives `d_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearForm {
    basis: Basis,
    coeffs: Vec<f64>,
    pub constant: f64,
}

impl LinearForm {
    pub fn zero(basis: Basis) -> LinearForm {
        LinearForm { basis, coeffs: vec![0.0; basis.len()], constant: 0.0 }
    }

    pub fn unit(basis: Basis, block: Block, m: usize, n: usize) -> LinearForm {
        let mut form = LinearForm::zero(basis);
        form.coeffs[basis.index(block, m, n)] = 1.0;
        form
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, block: Block, m: usize, n: usize) -> f64 {
        self.coeffs[self.basis.index(block, m, n)]
    }

    pub fn add_to(&mut self, block: Block, m: usize, n: usize, value: f64) {
        let idx = self.basis.index(block, m, n);
        self.coeffs[idx] += value;
    }

    /// `self += factor * other`.
    pub fn axpy(&mut self, factor: f64, other: &LinearForm) {
        assert_eq!(self.basis, other.basis, "linear forms over different bases");
        if factor == 0.0 {
            return;
        }
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += factor * b;
        }
        self.constant += factor * other.constant;
    }

    pub fn scale(&self, factor: f64) -> LinearForm {
        LinearForm {
            basis: self.basis,
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
            constant: self.constant * factor,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.constant == 0.0 && self.coeffs.iter().all(|&c| c == 0.0)
    }

    pub fn evaluate(&self, data: &DataDerivatives) -> f64 {
        assert_eq!(self.basis, data.basis, "data laid out for a different order");
        self.constant + self.coeffs.iter().zip(&data.values).map(|(c, d)| c * d).sum::<f64>()
    }
}

impl Add for &LinearForm {
    type Output = LinearForm;
    fn add(self, rhs: &LinearForm) -> LinearForm {
        let mut out = self.clone();
        out.axpy(1.0, rhs);
        out
    }
}

impl Sub for &LinearForm {
    type Output = LinearForm;
    fn sub(self, rhs: &LinearForm) -> LinearForm {
        let mut out = self.clone();
        out.axpy(-1.0, rhs);
        out
    }
}

impl Mul<f64> for &LinearForm {
    type Output = LinearForm;
    fn mul(self, rhs: f64) -> LinearForm {
        self.scale(rhs)
    }
}

/// Values of the data derivatives at a base point, laid out like a [`LinearForm`].
#[derive(Clone, Debug, PartialEq)]
pub struct DataDerivatives {
    basis: Basis,
    values: Vec<f64>,
}

impl DataDerivatives {
    /// Partial derivatives read off Taylor jets of `f_+`, `f_-`, `g_1` and `g` at the base point.
    pub fn from_jets(order: usize, f_plus: &Jet2, f_minus: &Jet2, g1: &Jet2, g: &Jet2) -> DataDerivatives {
        let basis = Basis::new(order);
        let values = basis
            .coordinates()
            .map(|(block, m, n)| {
                let jet = match block {
                    Block::FPlus => f_plus,
                    Block::FMinus => f_minus,
                    Block::G1 => g1,
                    Block::G => g,
                };
                assert!(jet.degree() >= m + n, "{block:?} jet has degree {} < {}", jet.degree(), m + n);
                jet.coeff(m, n) * factorial(m) * factorial(n)
            })
            .collect();
        DataDerivatives { basis, values }
    }

    pub fn zero(order: usize) -> DataDerivatives {
        let basis = Basis::new(order);
        DataDerivatives { basis, values: vec![0.0; basis.len()] }
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn get(&self, block: Block, m: usize, n: usize) -> f64 {
        self.values[self.basis.index(block, m, n)]
    }

    pub fn set(&mut self, block: Block, m: usize, n: usize, value: f64) {
        let idx = self.basis.index(block, m, n);
        self.values[idx] = value;
    }
}
