//! Grid points relative to the interface, and local charts of the interface.

use log::debug;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::jets::{compose_bivariate, Jet1};

/// Uniform Cartesian grid on `(l1, l2) x (l3, l4)` with `l4 - l3 = N0 (l2 - l1)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub l1: f64,
    pub l2: f64,
    pub l3: f64,
    pub l4: f64,
    pub n1: usize,
    pub n2: usize,
    pub h: f64,
}

impl Grid {
    pub fn new(bounds: [f64; 4], n1: usize) -> Result<Grid> {
        let [l1, l2, l3, l4] = bounds;
        let (wx, wy) = (l2 - l1, l4 - l3);
        if !(wx > 0.0 && wy > 0.0) || !wx.is_finite() || !wy.is_finite() {
            return Err(Error::InvalidGrid(format!("empty or non-finite domain {bounds:?}")));
        }
        if n1 < 2 {
            return Err(Error::InvalidGrid(format!("N1 = {n1} leaves no interior points")));
        }
        let ratio = wy / wx;
        let n0 = ratio.round();
        if n0 < 1.0 || (ratio - n0).abs() > 1e-12 * ratio {
            return Err(Error::InvalidGrid(format!("l4 - l3 must be an integer multiple of l2 - l1 (ratio {ratio})")));
        }
        Ok(Grid { l1, l2, l3, l4, n1, n2: n1 * n0 as usize, h: wx / n1 as f64 })
    }

    /// Grid with `N1 = 2^level`.
    pub fn at_level(bounds: [f64; 4], level: u32) -> Result<Grid> {
        if level >= 31 {
            return Err(Error::InvalidGrid(format!("refinement level {level} is too large")));
        }
        Grid::new(bounds, 1usize << level)
    }

    pub fn bounds(&self) -> [f64; 4] {
        [self.l1, self.l2, self.l3, self.l4]
    }

    pub fn x(&self, i: usize) -> f64 {
        self.l1 + i as f64 * self.h
    }

    pub fn y(&self, j: usize) -> f64 {
        self.l3 + j as f64 * self.h
    }

    /// Interior points per row, `N1 - 1`.
    pub fn nx(&self) -> usize {
        self.n1 - 1
    }

    /// Interior rows, `N2 - 1`.
    pub fn ny(&self) -> usize {
        self.n2 - 1
    }

    pub fn unknowns(&self) -> usize {
        self.nx() * self.ny()
    }

    /// Row-major position of interior point `(i, j)`, `1 <= i < N1`, `1 <= j < N2`.
    pub fn index(&self, i: usize, j: usize) -> usize {
        (j - 1) * self.nx() + (i - 1)
    }

    pub fn point_of(&self, index: usize) -> (usize, usize) {
        (index % self.nx() + 1, index / self.nx() + 1)
    }

    pub fn is_boundary(&self, i: usize, j: usize) -> bool {
        i == 0 || j == 0 || i == self.n1 || j == self.n2
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    /// `psi >= 0` belongs to the plus side.
    pub fn of(psi: f64) -> Side {
        if psi >= 0.0 {
            Side::Plus
        } else {
            Side::Minus
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Regular,
    Irregular,
}

/// The nine stencil offsets, `k` outer.
pub const OFFSETS: [(i32, i32); 9] = [(-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 0), (0, 1), (1, -1), (1, 0), (1, 1)];

pub fn offset_slot(k: i32, l: i32) -> usize {
    (3 * (k + 1) + (l + 1)) as usize
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PointClass {
    pub side: Side,
    /// Bit `offset_slot(k, l)` is set when that stencil point is on the plus side.
    pub plus_mask: u16,
}

const FULL_MASK: u16 = 0x1ff;

impl PointClass {
    pub fn from_values(values: &[f64; 9]) -> PointClass {
        let mut plus_mask = 0;
        for (slot, v) in values.iter().enumerate() {
            if Side::of(*v) == Side::Plus {
                plus_mask |= 1 << slot;
            }
        }
        PointClass { side: Side::of(values[4]), plus_mask }
    }

    pub fn kind(&self) -> Kind {
        if self.plus_mask == 0 || self.plus_mask == FULL_MASK {
            Kind::Regular
        } else {
            Kind::Irregular
        }
    }

    pub fn side_of(&self, k: i32, l: i32) -> Side {
        if self.plus_mask & (1 << offset_slot(k, l)) != 0 {
            Side::Plus
        } else {
            Side::Minus
        }
    }

    pub fn offsets(&self, side: Side) -> Vec<(i32, i32)> {
        OFFSETS.iter().copied().filter(|&(k, l)| self.side_of(k, l) == side).collect()
    }

    /// Both sides split into more than one 8-connected piece.
    pub fn is_ambiguous(&self) -> bool {
        self.kind() == Kind::Irregular && components(self.plus_mask) > 1 && components(!self.plus_mask & FULL_MASK) > 1
    }
}

fn components(mask: u16) -> usize {
    let mut seen = 0u16;
    let mut count = 0;
    for start in 0..9 {
        if mask & (1 << start) == 0 || seen & (1 << start) != 0 {
            continue;
        }
        count += 1;
        let mut stack = vec![start];
        seen |= 1 << start;
        while let Some(slot) = stack.pop() {
            let (k, l) = OFFSETS[slot];
            for (dk, dl) in OFFSETS {
                let (nk, nl) = (k + dk, l + dl);
                if !(-1..=1).contains(&nk) || !(-1..=1).contains(&nl) {
                    continue;
                }
                let next = offset_slot(nk, nl);
                if mask & (1 << next) != 0 && seen & (1 << next) == 0 {
                    seen |= 1 << next;
                    stack.push(next);
                }
            }
        }
    }
    count
}

/// Level-set values at every grid node and the class of every interior point.
#[derive(Clone, Debug)]
pub struct Classification {
    pub grid: Grid,
    psi: Vec<f64>,
    points: Vec<PointClass>,
}

impl Classification {
    /// `psi` at node `(i, j)`, boundary included.
    pub fn psi_at(&self, i: usize, j: usize) -> f64 {
        self.psi[j * (self.grid.n1 + 1) + i]
    }

    pub fn node_side(&self, i: usize, j: usize) -> Side {
        Side::of(self.psi_at(i, j))
    }

    pub fn point(&self, i: usize, j: usize) -> PointClass {
        self.points[self.grid.index(i, j)]
    }

    pub fn points(&self) -> &[PointClass] {
        &self.points
    }

    pub fn irregular_points(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.points
            .iter()
            .enumerate()
            .filter(|(_, p)| p.kind() == Kind::Irregular)
            .map(|(idx, _)| self.grid.point_of(idx))
    }
}

pub fn classify(grid: &Grid, psi: &Expr) -> Result<Classification> {
    let stride = grid.n1 + 1;
    let mut values = Vec::with_capacity(stride * (grid.n2 + 1));
    for j in 0..=grid.n2 {
        for i in 0..=grid.n1 {
            values.push(psi.eval(grid.x(i), grid.y(j))?);
        }
    }
    let mut points = Vec::with_capacity(grid.unknowns());
    for j in 1..grid.n2 {
        for i in 1..grid.n1 {
            let mut nine = [0.0; 9];
            for (slot, (k, l)) in OFFSETS.iter().enumerate() {
                let (ii, jj) = ((i as i32 + k) as usize, (j as i32 + l) as usize);
                nine[slot] = values[jj * stride + ii];
            }
            points.push(PointClass::from_values(&nine));
        }
    }
    Ok(Classification { grid: *grid, psi: values, points })
}

fn value_and_gradient(psi: &Expr, x: f64, y: f64) -> Result<(f64, f64, f64)> {
    let jet = psi.taylor(x, y, 1)?;
    Ok((jet.coeff(0, 0), jet.coeff(1, 0), jet.coeff(0, 1)))
}

/// Root of `psi` on the segment `a -> b`, whose endpoints lie on different sides.
fn root_on_segment(psi: &Expr, a: (f64, f64), b: (f64, f64), h: f64) -> Result<(f64, f64)> {
    let at = |t: f64| (a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1));
    let len = (b.0 - a.0).hypot(b.1 - a.1);
    let side_a = Side::of(psi.eval(a.0, a.1)?);
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        if (hi - lo) * len <= 1e-15 * h {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let (x, y) = at(mid);
        if Side::of(psi.eval(x, y)?) == side_a {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut t = 0.5 * (lo + hi);
    let (x, y) = at(t);
    let mut residual = psi.eval(x, y)?.abs();
    for _ in 0..5 {
        if residual == 0.0 {
            break;
        }
        let (x, y) = at(t);
        let (v, gx, gy) = value_and_gradient(psi, x, y)?;
        let slope = gx * (b.0 - a.0) + gy * (b.1 - a.1);
        if slope == 0.0 {
            break;
        }
        let candidate = t - v / slope;
        if !(0.0..=1.0).contains(&candidate) {
            break;
        }
        let (cx, cy) = at(candidate);
        let r = psi.eval(cx, cy)?.abs();
        if r >= residual {
            break;
        }
        t = candidate;
        residual = r;
    }
    Ok(at(t))
}

fn newton_project(psi: &Expr, start: (f64, f64)) -> Result<Option<(f64, f64)>> {
    let (mut x, mut y) = start;
    let (mut v, mut gx, mut gy) = value_and_gradient(psi, x, y)?;
    for _ in 0..20 {
        let g2 = gx * gx + gy * gy;
        if g2 == 0.0 {
            return Ok(None);
        }
        let scale = 1e-12 * g2.sqrt().max(1.0);
        if v.abs() <= scale {
            return Ok(Some((x, y)));
        }
        let mut damping = 1.0;
        loop {
            let (nx, ny) = (x - damping * v * gx / g2, y - damping * v * gy / g2);
            let (nv, ngx, ngy) = value_and_gradient(psi, nx, ny)?;
            if nv.abs() < v.abs() {
                (x, y, v, gx, gy) = (nx, ny, nv, ngx, ngy);
                break;
            }
            damping *= 0.5;
            if damping < 1e-6 {
                return Ok(None);
            }
        }
    }
    let g = gx.hypot(gy);
    Ok((v.abs() <= 1e-12 * g.max(1.0)).then_some((x, y)))
}

type Segment = ((i32, i32), (i32, i32));

/// A point of the interface inside the open square of side `2h` around `(x_i, y_j)`.
pub fn find_base_point(grid: &Grid, psi: &Expr, i: usize, j: usize) -> Result<(f64, f64)> {
    let (xc, yc, h) = (grid.x(i), grid.y(j), grid.h);
    let at = |k: i32, l: i32| (grid.x((i as i32 + k) as usize), grid.y((j as i32 + l) as usize));
    let mut nine = [0.0; 9];
    for (slot, (k, l)) in OFFSETS.iter().enumerate() {
        let (x, y) = at(*k, *l);
        nine[slot] = psi.eval(x, y)?;
    }
    let class = PointClass::from_values(&nine);
    if class.is_ambiguous() {
        return Err(Error::BasePointAmbiguous { x: xc, y: yc });
    }
    if nine[4] == 0.0 {
        return Ok((xc, yc));
    }
    let inside = |p: (f64, f64)| (p.0 - xc).abs() < h && (p.1 - yc).abs() < h;
    let closed = |p: (f64, f64)| (p.0 - xc).abs() <= h * (1.0 + 1e-12) && (p.1 - yc).abs() <= h * (1.0 + 1e-12);
    let dist = |p: (f64, f64)| (p.0 - xc).hypot(p.1 - yc);

    let nearest = |pairs: &[Segment], inside: &dyn Fn((f64, f64)) -> bool| -> Result<Option<(f64, f64)>> {
        let mut best: Option<(f64, f64)> = None;
        for &(p, q) in pairs {
            if class.side_of(p.0, p.1) == class.side_of(q.0, q.1) {
                continue;
            }
            let root = root_on_segment(psi, at(p.0, p.1), at(q.0, q.1), h)?;
            if inside(root) && best.is_none_or(|b| dist(root) < dist(b)) {
                best = Some(root);
            }
        }
        Ok(best)
    };

    let axis = [((0, 0), (1, 0)), ((0, 0), (-1, 0)), ((0, 0), (0, 1)), ((0, 0), (0, -1))];
    if let Some(root) = nearest(&axis, &inside)? {
        return Ok(root);
    }
    let mut pairs = Vec::new();
    for (a, &p) in OFFSETS.iter().enumerate() {
        for &q in &OFFSETS[a + 1..] {
            pairs.push((p, q));
        }
    }
    if let Some(root) = nearest(&pairs, &inside)? {
        debug!("base point for ({i}, {j}) found off the axis segments");
        return Ok(root);
    }
    let mut starts: Vec<(f64, f64)> = pairs
        .iter()
        .filter(|(p, q)| class.side_of(p.0, p.1) != class.side_of(q.0, q.1))
        .map(|(p, q)| {
            let (a, b) = (at(p.0, p.1), at(q.0, q.1));
            (0.5 * (a.0 + b.0), 0.5 * (a.1 + b.1))
        })
        .collect();
    starts.sort_by(|a, b| dist(*a).total_cmp(&dist(*b)));
    for start in starts {
        if let Some(root) = newton_project(psi, start)? {
            if inside(root) {
                return Ok(root);
            }
        }
    }
    // the interface only touches the closed square, typically through a node where psi rounds off zero
    if let Some(root) = nearest(&pairs, &closed)? {
        debug!("base point for ({i}, {j}) taken on the stencil square boundary");
        return Ok(root);
    }
    Err(Error::BasePointNotFound { x: xc, y: yc })
}

/// Which coordinate the interface is solved for near the base point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChartAxis {
    /// `x = t`, `y = rho(t)`.
    SolveY,
    /// `x = rho(t)`, `y = t`.
    SolveX,
}

/// Local parameterization `(x*, y*) + (r(t), s(t))` of the interface.
#[derive(Clone, Debug)]
pub struct CurveChart {
    pub base: (f64, f64),
    pub r: Jet1,
    pub s: Jet1,
    /// `+1` when `(s'(0), -r'(0))` points into the plus side, else `-1`.
    pub orient: f64,
    pub axis: ChartAxis,
}

impl CurveChart {
    pub fn degree(&self) -> usize {
        self.r.degree()
    }

    /// Chart built directly from curve jets, orientation taken from `grad`.
    pub fn from_jets(base: (f64, f64), r: Jet1, s: Jet1, grad: (f64, f64)) -> CurveChart {
        let dot = s.coeff(1) * grad.0 - r.coeff(1) * grad.1;
        CurveChart { base, r, s, orient: if dot >= 0.0 { 1.0 } else { -1.0 }, axis: ChartAxis::SolveY }
    }
}

/// Taylor chart of the interface at `base`, to degree `order + 1`.
pub fn local_chart(psi: &Expr, base: (f64, f64), order: usize) -> Result<CurveChart> {
    let degree = order + 1;
    let jet = psi.taylor(base.0, base.1, degree)?;
    let (px, py) = (jet.coeff(1, 0), jet.coeff(0, 1));
    if px.hypot(py) < 1e-12 {
        return Err(Error::DegenerateGradient { x: base.0, y: base.1 });
    }
    let mut jet0 = jet.clone();
    jet0.set_coeff(0, 0, 0.0);
    let axis = if py.abs() >= px.abs() { ChartAxis::SolveY } else { ChartAxis::SolveX };
    let t = Jet1::variable(degree);
    let mut rho = Jet1::zero(degree);
    let pivot = match axis {
        ChartAxis::SolveY => py,
        ChartAxis::SolveX => px,
    };
    for p in 1..=degree {
        let along = match axis {
            ChartAxis::SolveY => compose_bivariate(&jet0, &t, &rho)?,
            ChartAxis::SolveX => compose_bivariate(&jet0, &rho, &t)?,
        };
        rho.set_coeff(p, -along.coeff(p) / pivot);
    }
    let (r, s) = match axis {
        ChartAxis::SolveY => (t, rho),
        ChartAxis::SolveX => (rho, t),
    };
    let mut chart = CurveChart::from_jets(base, r, s, (px, py));
    chart.axis = axis;
    Ok(chart)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn e(text: &str) -> Expr {
        Expr::parse(text).unwrap()
    }

    #[test]
    fn grid_shape() {
        let g = Grid::at_level([-PI, PI, -PI, PI], 3).unwrap();
        assert_eq!((g.n1, g.n2, g.unknowns()), (8, 8, 49));
        assert_relative_eq!(g.h, 2.0 * PI / 8.0);
        assert_eq!(g.index(1, 1), 0);
        assert_eq!(g.point_of(g.index(3, 5)), (3, 5));
        let tall = Grid::new([0.0, 1.0, 0.0, 2.0], 4).unwrap();
        assert_eq!(tall.n2, 8);
        assert!(Grid::new([0.0, 1.0, 0.0, 1.5], 4).is_err());
        assert!(Grid::new([1.0, 0.0, 0.0, 1.0], 4).is_err());
    }

    #[test]
    fn circle_classification_matches_brute_force() {
        let psi = e("x^2+y^2-2");
        let g = Grid::at_level([-PI, PI, -PI, PI], 3).unwrap();
        let c = classify(&g, &psi).unwrap();
        let mut irregular = 0;
        for j in 1..g.n2 {
            for i in 1..g.n1 {
                let signs: Vec<bool> = OFFSETS
                    .iter()
                    .map(|&(k, l)| {
                        let (x, y) = (g.x(i) + k as f64 * g.h, g.y(j) + l as f64 * g.h);
                        x * x + y * y - 2.0 >= 0.0
                    })
                    .collect();
                let straddles = signs.iter().any(|&s| s) && signs.iter().any(|&s| !s);
                assert_eq!(c.point(i, j).kind() == Kind::Irregular, straddles);
                irregular += straddles as usize;
            }
        }
        assert!(irregular > 0);
        assert_eq!(c.irregular_points().count(), irregular);
    }

    #[test]
    fn constant_level_set_is_all_regular_plus() {
        let g = Grid::at_level([0.0, 1.0, 0.0, 1.0], 3).unwrap();
        let c = classify(&g, &e("1")).unwrap();
        assert!(c.points().iter().all(|p| p.kind() == Kind::Regular && p.side == Side::Plus));
    }

    #[test]
    fn zero_level_is_plus() {
        assert_eq!(Side::of(0.0), Side::Plus);
        assert_eq!(Side::of(-0.0), Side::Plus);
        let g = Grid::new([-1.0, 1.0, -1.0, 1.0], 4).unwrap();
        let c = classify(&g, &e("x")).unwrap();
        assert_eq!(c.point(2, 2).side, Side::Plus);
        assert_eq!(c.point(2, 2).kind(), Kind::Irregular);
    }

    #[test]
    fn center_side_is_always_connected() {
        for mask in 0..=FULL_MASK {
            let class =
                PointClass { side: if mask & (1 << 4) != 0 { Side::Plus } else { Side::Minus }, plus_mask: mask };
            let center_side = if class.side == Side::Plus { mask } else { !mask & FULL_MASK };
            assert_eq!(components(center_side), 1);
            assert!(!class.is_ambiguous());
        }
        assert_eq!(components(0b101_000_101), 4);
    }

    #[test]
    fn base_point_on_cosine() {
        let h = 0.1;
        let g = Grid::new([-1.0, 1.0, 1.0 + h / 2.0 - 1.0, 1.0 + h / 2.0 + 1.0], 20).unwrap();
        let (i, j) = (10, 10);
        assert!((g.x(i)).abs() < 1e-15 && (g.y(j) - 1.05).abs() < 1e-12);
        let (x, y) = find_base_point(&g, &e("y - cos(x)"), i, j).unwrap();
        assert!(x.abs() < 1e-15);
        assert_relative_eq!(y, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn base_point_on_circle_axis() {
        let g = Grid::new([-2.0, 2.0, -2.0, 2.0], 40).unwrap();
        // x_i = 1.4 just inside sqrt(2), y_j = 0
        let (x, y) = find_base_point(&g, &e("x^2+y^2-2"), 34, 20).unwrap();
        assert_relative_eq!(x, 2f64.sqrt(), epsilon = 1e-12);
        assert!(y.abs() < 1e-15);
    }

    #[test]
    fn base_points_of_circle_are_accurate_and_inside() {
        let psi = e("x^2+y^2-2");
        let g = Grid::at_level([-PI, PI, -PI, PI], 5).unwrap();
        let c = classify(&g, &psi).unwrap();
        for (i, j) in c.irregular_points() {
            let (x, y) = find_base_point(&g, &psi, i, j).unwrap();
            let grad = 2.0 * x.hypot(y);
            assert!(psi.eval(x, y).unwrap().abs() <= 1e-12 * (grad * g.h).max(1.0));
            assert!((g.x(i) - x).abs() < g.h && (g.y(j) - y).abs() < g.h);
        }
    }

    #[test]
    fn cosine_chart() {
        let chart = local_chart(&e("y - cos(x)"), (0.0, 1.0), 6).unwrap();
        assert_eq!(chart.axis, ChartAxis::SolveY);
        let expect = [0.0, 0.0, -0.5, 0.0, 1.0 / 24.0, 0.0, -1.0 / 720.0, 0.0];
        assert_eq!(chart.r.coeffs(), &[0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        for (got, want) in chart.s.coeffs().iter().zip(expect) {
            assert_relative_eq!(*got, want, epsilon = 1e-15);
        }
    }

    #[test]
    fn circle_chart_matches_square_root_series() {
        let chart = local_chart(&e("x^2+y^2-2"), (2f64.sqrt(), 0.0), 6).unwrap();
        assert_eq!(chart.axis, ChartAxis::SolveX);
        // r(t) = sqrt(2 - t^2) - sqrt(2) = sqrt(2) * (sqrt(1 - t^2/2) - 1)
        let a = 2f64.sqrt();
        let expect = [0.0, 0.0, -a / 4.0, 0.0, -a / 32.0, 0.0, -a / 128.0, 0.0];
        for (got, want) in chart.r.coeffs().iter().zip(expect) {
            assert_relative_eq!(*got, want, epsilon = 1e-14);
        }
        assert_eq!(chart.s.coeff(1), 1.0);
        // normal (s', -r') = (1, 0) points outward, where psi > 0
        assert_eq!(chart.orient, 1.0);
    }

    #[test]
    fn line_orientation() {
        let chart = local_chart(&e("y - x"), (0.3, 0.3), 6).unwrap();
        let n = (chart.s.coeff(1), -chart.r.coeff(1));
        assert!(chart.orient * (-n.0 + n.1) > 0.0);
    }

    #[test]
    fn degenerate_gradient() {
        assert!(matches!(local_chart(&e("x^2+y^2"), (0.0, 0.0), 6), Err(Error::DegenerateGradient { .. })));
    }
}
