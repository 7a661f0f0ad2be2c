mod common;

use common::{line_problem, relative_max_error, Poly};
use ifd6::expr::Expr;
use ifd6::geometry::{local_chart, PointClass};
use ifd6::harness::{parse_problem, run_convergence, solve_level, SolveOptions};
use ifd6::jets::Jet2;
use ifd6::scheme::{irregular_rhs, regular_rhs, DataDerivatives, IrregularGeometry};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CURVED: &str = "
l1 = -pi
l2 = pi
l3 = -pi
l4 = pi
psi = x^2/(x^2 + 1) + y^2/2 - 1/2
u_plus = exp(y)*sin(2*x)
u_minus = x*y^2 + cos(x + y)
f_plus = 3*exp(y)*sin(2*x)
f_minus = -2*x + 2*cos(x + y)
g1 = -x*y^2 + exp(y)*sin(2*x) - cos(x + y)
g = (y*(-2*x*y + exp(y)*sin(2*x) + sin(x + y)) + (-2*x^3/(x^2 + 1)^2 + 2*x/(x^2 + 1))*(-y^2 + 2*exp(y)*cos(2*x) + sin(x + y)))/sqrt(y^2 + (-2*x^3/(x^2 + 1)^2 + 2*x/(x^2 + 1))^2)
g0_plus = exp(y)*sin(2*x)
g0_minus = x*y^2 + cos(x + y)
";

#[test]
fn curved_interface_with_both_jumps_converges_at_sixth_order() {
    let spec = parse_problem(CURVED).unwrap();
    let outcome = run_convergence(&spec, 4, 7, 6, &SolveOptions::default());
    assert!(outcome.failure.is_none());
    for row in &outcome.rows[1..] {
        let order = row.order2_exact.unwrap();
        assert!(order >= 6.0, "J = {}: order {order}", row.level);
    }
    assert!(outcome.rows[3].e2_exact.unwrap() < 1e-9);
}

#[test]
fn lower_orders_are_capped_by_the_fourth_order_regular_rows() {
    let spec = parse_problem(CURVED).unwrap();
    for order in 3..=5 {
        let outcome = run_convergence(&spec, 4, 7, order, &SolveOptions::default());
        let last = outcome.rows.last().unwrap().order2_exact.unwrap();
        let expected = order.min(4) as f64;
        assert!(last >= expected - 0.5 && last <= expected + 1.5, "M = {order}: observed {last}");
    }
}

#[test]
fn axis_aligned_lines_are_reproduced() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for theta in [0.0, std::f64::consts::FRAC_PI_2, std::f64::consts::PI, 1.5 * std::f64::consts::PI] {
        let c = rng.gen_range(-0.4..0.4);
        let problem = line_problem(theta, c, Poly::random(&mut rng, 6), Poly::random(&mut rng, 6));
        let sol = solve_level(&problem.spec, 4, 6, &SolveOptions::default()).unwrap();
        assert!(relative_max_error(&sol, &problem.spec) < 1e-10);
    }
}

#[test]
fn continuous_smooth_solution_needs_no_jump_data() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let u = Poly::random(&mut rng, 7);
    let problem = line_problem(0.7, 0.1, u.clone(), u);
    assert!(problem.spec.g1.eval(0.3, -0.2).unwrap().abs() < 1e-14);
    let sol = solve_level(&problem.spec, 3, 6, &SolveOptions::default()).unwrap();
    assert!(relative_max_error(&sol, &problem.spec) < 1e-10);
}

/// All-plus stencil rebuilt from a base point on a nearby curve against the regular right-hand side.
fn recentering_gap(h: f64) -> f64 {
    let psi = Expr::parse("x^2 + y^2 - 2").unwrap();
    let f = Expr::parse("sin(2*x)*cos(y) + x^3*y").unwrap();
    let base = (2f64.sqrt() * 0.7f64.cos(), 2f64.sqrt() * 0.7f64.sin());
    let center = (base.0 + 0.4 * h, base.1 - 0.6 * h);
    let chart = local_chart(&psi, base, 6).unwrap();
    let geom = IrregularGeometry {
        class: PointClass::from_values(&[1.0; 9]),
        v0: center.0 - base.0,
        w0: center.1 - base.1,
        h,
    };
    let data = DataDerivatives::from_jets(
        6,
        &f.taylor(base.0, base.1, 5).unwrap(),
        &Jet2::zero(5),
        &Jet2::zero(7),
        &Jet2::zero(6),
    );
    let irregular = irregular_rhs(&chart, &geom, &data, 6).unwrap();
    let regular = regular_rhs(&f.taylor(center.0, center.1, 4).unwrap(), h, 6).unwrap();
    (irregular - regular).abs()
}

#[test]
fn all_plus_stencil_recovers_the_regular_rhs() {
    let coarse = recentering_gap(0.05);
    let fine = recentering_gap(0.025);
    assert!(coarse < 1e-9, "{coarse}");
    let rate = (coarse / fine).log2();
    assert!(rate > 7.0, "observed rate {rate}");
}
