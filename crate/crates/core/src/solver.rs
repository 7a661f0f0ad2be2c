//! Assembly of the global system and its solution.
//!
//! Unknowns are ordered row-major, `j` outer and `i` inner, over the interior
//! points `1 <= i < N1`, `1 <= j < N2`.

use std::str::FromStr;

use log::{debug, info};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{find_base_point, local_chart, Classification, Grid, Kind, Side, OFFSETS};
use crate::harness::ProblemSpec;
use crate::scheme::{
    check_order, irregular_form, regular_rhs, stencil_weight, transmission, DataDerivatives, IrregularGeometry, STENCIL,
};

/// The constant 9-point operator with homogeneous Dirichlet closure.
#[derive(Clone, Debug, PartialEq)]
pub struct SystemOperator {
    nx: usize,
    ny: usize,
    stencil: [f64; 9],
}

impl SystemOperator {
    pub fn new(grid: &Grid) -> SystemOperator {
        SystemOperator::with_dims(grid.nx(), grid.ny())
    }

    pub fn with_dims(nx: usize, ny: usize) -> SystemOperator {
        SystemOperator { nx, ny, stencil: STENCIL }
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn stencil(&self) -> &[f64; 9] {
        &self.stencil
    }

    /// `y = A x`.
    pub fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.len());
        assert_eq!(y.len(), self.len());
        let (nx, ny) = (self.nx as isize, self.ny as isize);
        y.par_chunks_mut(self.nx).enumerate().for_each(|(j, row)| {
            let j = j as isize;
            for (i, out) in row.iter_mut().enumerate() {
                let i = i as isize;
                let mut acc = 0.0;
                for (&(k, l), c) in OFFSETS.iter().zip(&self.stencil) {
                    let (ii, jj) = (i + k as isize, j + l as isize);
                    if (0..nx).contains(&ii) && (0..ny).contains(&jj) {
                        acc += c * x[(jj * nx + ii) as usize];
                    }
                }
                *out = acc;
            }
        });
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.len()];
        self.apply_into(x, &mut y);
        y
    }

    /// `||A||_1`, the largest absolute column sum.
    pub fn norm_one(&self) -> f64 {
        let mut colsum = vec![0.0; self.len()];
        for j in 0..self.ny {
            for i in 0..self.nx {
                for (&(k, l), c) in OFFSETS.iter().zip(&self.stencil) {
                    let (ii, jj) = (i as isize + k as isize, j as isize + l as isize);
                    if ii >= 0 && jj >= 0 && (ii as usize) < self.nx && (jj as usize) < self.ny {
                        colsum[jj as usize * self.nx + ii as usize] += c.abs();
                    }
                }
            }
        }
        colsum.into_iter().fold(0.0, f64::max)
    }

    /// Cholesky factor of `-A`.
    pub fn factor(&self) -> Result<BandedCholesky> {
        BandedCholesky::factor(self)
    }
}

/// Lower Cholesky factor of `-A` in band storage, half-bandwidth `nx + 1`.
#[derive(Clone, Debug)]
pub struct BandedCholesky {
    n: usize,
    band: usize,
    /// Row `i` holds `L[i][i - band ..= i]`.
    l: Vec<f64>,
}

impl BandedCholesky {
    fn factor(op: &SystemOperator) -> Result<BandedCholesky> {
        let n = op.len();
        let band = (op.nx + 1).min(n.saturating_sub(1));
        let w = band + 1;
        let mut l = vec![0.0; n * w];
        let nx = op.nx;
        let entry = |r: usize, c: usize| -> f64 {
            // -A[r][c] for c <= r
            let (ir, jr) = (r % nx, r / nx);
            let (ic, jc) = (c % nx, c / nx);
            let (k, m) = (ic as isize - ir as isize, jc as isize - jr as isize);
            if k.abs() <= 1 && m.abs() <= 1 {
                -stencil_weight(k as i32, m as i32)
            } else {
                0.0
            }
        };
        for i in 0..n {
            let lo = i.saturating_sub(band);
            for j in lo..=i {
                let start = lo.max(j.saturating_sub(band));
                let ri = i * w + band - i;
                let rj = j * w + band - j;
                let mut sum = entry(i, j);
                for k in start..j {
                    sum -= l[ri + k] * l[rj + k];
                }
                if i == j {
                    if sum <= 0.0 || !sum.is_finite() {
                        return Err(Error::NotPositiveDefinite);
                    }
                    l[ri + i] = sum.sqrt();
                } else {
                    l[ri + j] = sum / l[rj + j];
                }
            }
        }
        Ok(BandedCholesky { n, band, l })
    }

    fn at(&self, i: usize, j: usize) -> f64 {
        self.l[i * (self.band + 1) + self.band + j - i]
    }

    /// Solves `(-A) x = b` in place.
    #[allow(clippy::needless_range_loop)]
    pub fn solve_negated(&self, b: &mut [f64]) {
        assert_eq!(b.len(), self.n);
        for i in 0..self.n {
            let lo = i.saturating_sub(self.band);
            let mut s = b[i];
            for k in lo..i {
                s -= self.at(i, k) * b[k];
            }
            b[i] = s / self.at(i, i);
        }
        for i in (0..self.n).rev() {
            let hi = (i + self.band).min(self.n - 1);
            let mut s = b[i];
            for k in i + 1..=hi {
                s -= self.at(k, i) * b[k];
            }
            b[i] = s / self.at(i, i);
        }
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let mut x: Vec<f64> = b.iter().map(|v| -v).collect();
        self.solve_negated(&mut x);
        x
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Direct,
    Cg,
}

impl Method {
    /// Direct factorization up to `N1 = 256`, conjugate gradients beyond.
    pub fn default_for(grid: &Grid) -> Method {
        if grid.n1 <= 256 {
            Method::Direct
        } else {
            Method::Cg
        }
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Method, String> {
        match s.to_ascii_lowercase().as_str() {
            "direct" => Ok(Method::Direct),
            "cg" => Ok(Method::Cg),
            other => Err(format!("unknown solver `{other}` (expected direct or cg)")),
        }
    }
}

pub const DEFAULT_TOL: f64 = 1e-14;

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Solves `A x = b`.
pub fn solve(op: &SystemOperator, b: &[f64], method: Method, tol: f64) -> Result<Vec<f64>> {
    assert_eq!(b.len(), op.len());
    match method {
        Method::Direct => {
            let chol = op.factor()?;
            let mut x = chol.solve(b);
            // one step of iterative refinement
            let ax = op.apply(&x);
            let r: Vec<f64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
            let dx = chol.solve(&r);
            x.iter_mut().zip(&dx).for_each(|(xi, d)| *xi += d);
            Ok(x)
        }
        Method::Cg => cg(op, b, tol),
    }
}

/// Conjugate gradients on `(-A) x = -b`; the cap is `50 N1` iterations.
pub fn cg(op: &SystemOperator, b: &[f64], tol: f64) -> Result<Vec<f64>> {
    cg_capped(op, b, tol, 50 * (op.nx + 1))
}

fn cg_capped(op: &SystemOperator, b: &[f64], tol: f64, cap: usize) -> Result<Vec<f64>> {
    assert!(tol > 0.0, "CG tolerance must be positive");
    let n = op.len();
    let bnorm = norm2(b);
    let mut x = vec![0.0; n];
    if bnorm == 0.0 {
        return Ok(x);
    }
    let mut r: Vec<f64> = b.iter().map(|v| -v).collect();
    let mut p = r.clone();
    let mut q = vec![0.0; n];
    let mut rr = dot(&r, &r);
    for it in 0..cap {
        if rr.sqrt() <= tol * bnorm {
            debug!("CG converged in {it} iterations");
            return Ok(x);
        }
        op.apply_into(&p, &mut q);
        q.iter_mut().for_each(|v| *v = -*v);
        let alpha = rr / dot(&p, &q);
        x.iter_mut().zip(&p).for_each(|(xi, pi)| *xi += alpha * pi);
        r.iter_mut().zip(&q).for_each(|(ri, qi)| *ri -= alpha * qi);
        let rr_new = dot(&r, &r);
        let beta = rr_new / rr;
        rr = rr_new;
        p.iter_mut().zip(&r).for_each(|(pi, ri)| *pi = ri + beta * *pi);
    }
    if rr.sqrt() <= tol * bnorm {
        return Ok(x);
    }
    Err(Error::NonConvergence { iterations: cap, residual: rr.sqrt() / bnorm })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ConditionNorm {
    #[default]
    One,
    Two,
}

/// Condition number of `A`.
pub fn condition_number(op: &SystemOperator, norm: ConditionNorm) -> Result<f64> {
    match norm {
        ConditionNorm::One => {
            // -A is an M-matrix, so (-A)^{-1} >= 0 and its 1-norm is the largest entry of (-A)^{-1} 1.
            let chol = op.factor()?;
            let mut w = vec![1.0; op.len()];
            chol.solve_negated(&mut w);
            Ok(op.norm_one() * w.into_iter().fold(0.0, f64::max))
        }
        ConditionNorm::Two => {
            let lmax = power_iteration(op.len(), |v, out| {
                op.apply_into(v, out);
                out.iter_mut().for_each(|x| *x = -*x);
            })?;
            let chol = op.factor()?;
            let inv = power_iteration(op.len(), |v, out| {
                out.copy_from_slice(v);
                chol.solve_negated(out);
            })?;
            Ok(lmax * inv)
        }
    }
}

/// Dominant eigenvalue of a symmetric positive definite map, to relative `1e-6`.
fn power_iteration(n: usize, mut apply: impl FnMut(&[f64], &mut [f64])) -> Result<f64> {
    const CAP: usize = 200_000;
    let mut v: Vec<f64> = (0..n).map(|i| 1.0 + 0.1 * ((i * 7919) % 13) as f64).collect();
    let s = norm2(&v);
    v.iter_mut().for_each(|x| *x /= s);
    let mut w = vec![0.0; n];
    let mut lambda = 0.0;
    for _ in 0..CAP {
        apply(&v, &mut w);
        let next = dot(&v, &w);
        let s = norm2(&w);
        if s == 0.0 {
            return Ok(0.0);
        }
        v.iter_mut().zip(&w).for_each(|(vi, wi)| *vi = wi / s);
        if (next - lambda).abs() <= 1e-7 * next.abs() {
            return Ok(next);
        }
        lambda = next;
    }
    Err(Error::NonConvergence { iterations: CAP, residual: f64::NAN })
}

/// Degree of the source jet the regular right-hand side reads.
const REGULAR_JET_DEGREE: usize = 4;

/// Builds `A` and the right-hand side, Dirichlet data folded in.
pub fn assemble(
    grid: &Grid,
    classification: &Classification,
    problem: &ProblemSpec,
    order: usize,
) -> Result<(SystemOperator, Vec<f64>)> {
    check_order(order)?;
    let op = SystemOperator::new(grid);
    let n = op.len();
    let irregular = classification.irregular_points().count();
    info!("assembling {} x {} interior grid, {irregular} irregular points", grid.nx(), grid.ny());
    let rhs = (0..n)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = grid.point_of(idx);
            point_rhs(grid, classification, problem, order, i, j).map_err(|e| Error::AtPoint {
                i,
                j,
                x: grid.x(i),
                y: grid.y(j),
                source: Box::new(e),
            })
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok((op, rhs))
}

fn point_rhs(
    grid: &Grid,
    classification: &Classification,
    problem: &ProblemSpec,
    order: usize,
    i: usize,
    j: usize,
) -> Result<f64> {
    let (x, y, h) = (grid.x(i), grid.y(j), grid.h);
    let class = classification.point(i, j);
    let mut rhs = match class.kind() {
        Kind::Regular => {
            let f = match class.side {
                Side::Plus => &problem.f_plus,
                Side::Minus => &problem.f_minus,
            };
            regular_rhs(&f.taylor(x, y, REGULAR_JET_DEGREE)?, h, order)?
        }
        Kind::Irregular => {
            let base = find_base_point(grid, &problem.psi, i, j)?;
            let chart = local_chart(&problem.psi, base, order)?;
            let trans = transmission(&chart, order)?;
            let geom = IrregularGeometry { class, v0: x - base.0, w0: y - base.1, h };
            let (bx, by) = base;
            let data = DataDerivatives::from_jets(
                order,
                &problem.f_plus.taylor(bx, by, order - 1)?,
                &problem.f_minus.taylor(bx, by, order - 1)?,
                &problem.g1.taylor(bx, by, order + 1)?,
                &problem.g.taylor(bx, by, order)?,
            );
            irregular_form(&geom, &trans).evaluate(&data)
        }
    };
    for &(k, l) in &OFFSETS {
        let (ii, jj) = (i as isize + k as isize, j as isize + l as isize);
        let (ii, jj) = (ii as usize, jj as usize);
        if grid.is_boundary(ii, jj) {
            let side = classification.node_side(ii, jj);
            rhs -= stencil_weight(k, l) * problem.g0_at(grid.x(ii), grid.y(jj), side)?;
        }
    }
    Ok(rhs)
}
