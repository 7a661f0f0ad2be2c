mod common;

use common::{bundled_problems, problem_path};
use ifd6::harness::{emit_table, load_problem, parse_csv, parse_problem, run_convergence, SolveOptions, TableFormat};
use ifd6::Error;

#[test]
fn bundled_problems_load() {
    for (k, path) in bundled_problems().iter().enumerate() {
        let spec = load_problem(path).unwrap();
        assert_eq!(spec.has_exact(), k < 4, "{}", path.display());
    }
    let ex1 = load_problem(problem_path("ex01.prob")).unwrap();
    assert_eq!(ex1.psi.eval(1.0, 1.0).unwrap(), 0.0);
    assert_eq!(ex1.g1.constant_value(), Some(-100.0));
    assert_eq!(ex1.g.constant_value(), Some(0.0));
    let ex8 = load_problem(problem_path("ex08.prob")).unwrap();
    assert_eq!(ex8.g1.constant_value(), Some(0.0));
}

#[test]
fn exact_solutions_match_boundary_data() {
    for path in &bundled_problems()[..4] {
        let spec = load_problem(path).unwrap();
        let gap = spec.boundary_mismatch(64).unwrap().unwrap();
        assert!(gap < 1e-12, "{}: {gap}", path.display());
    }
}

#[test]
fn missing_psi_is_reported() {
    let err =
        parse_problem("l1 = 0\nl2 = 1\nl3 = 0\nl4 = 1\nf_plus = 0\nf_minus = 0\ng = 0\ng1 = 0\ng0 = 0\n").unwrap_err();
    assert!(matches!(err, Error::MissingKey(ref k) if k == "psi"), "{err}");
}

#[test]
fn example_2_table() {
    let spec = load_problem(problem_path("ex02.prob")).unwrap();
    let outcome = run_convergence(&spec, 3, 8, 6, &SolveOptions::default());
    assert!(outcome.failure.is_none());
    let row = &outcome.rows[3];
    assert_eq!(row.level, 6);
    assert!((row.e2_exact.unwrap() / 1.67e-8 - 1.0).abs() < 0.15);
    assert!((row.order2_exact.unwrap() - 6.817).abs() < 0.1);
    for row in &outcome.rows[2..5] {
        assert!((row.order2_exact.unwrap() - row.order2_succ.unwrap()).abs() < 1.0);
    }
    let last = outcome.rows.last().unwrap();
    assert!(last.e2_succ.is_none() && last.e2_exact.is_some());
}

#[test]
fn exact_and_successive_orders_agree() {
    for name in ["ex01.prob", "ex03.prob", "ex04.prob"] {
        let spec = load_problem(problem_path(name)).unwrap();
        let rows = run_convergence(&spec, 4, 7, 6, &SolveOptions::default()).rows;
        for row in rows.iter().filter(|r| r.level >= 5 && r.order2_succ.is_some()) {
            let gap = (row.order2_exact.unwrap() - row.order2_succ.unwrap()).abs();
            assert!(gap < 1.0, "{name} J = {}: {gap}", row.level);
        }
    }
}

#[test]
fn example_5_successive_order() {
    let spec = load_problem(problem_path("ex05.prob")).unwrap();
    let rows = run_convergence(&spec, 4, 6, 6, &SolveOptions::default()).rows;
    let row = &rows[1];
    assert!((row.order2_succ.unwrap() - 6.541).abs() < 0.1);
    assert!(row.e2_succ.unwrap() < 5.01e-4);
}

#[test]
fn tables_round_trip_and_keep_column_order() {
    let spec = load_problem(problem_path("ex02.prob")).unwrap();
    let rows = run_convergence(&spec, 3, 5, 6, &SolveOptions::default()).rows;
    let csv = emit_table(&rows, TableFormat::Csv);
    let back = parse_csv(&csv).unwrap();
    assert_eq!(emit_table(&back, TableFormat::Csv), csv);
    assert_eq!(csv.lines().count(), 4);
    let md = emit_table(&rows, TableFormat::Markdown);
    let header = md.lines().next().unwrap();
    let cells: Vec<&str> = header.split('|').map(str::trim).filter(|c| !c.is_empty()).collect();
    assert_eq!(cells[0], "J");
    assert_eq!(cells[1], "‖u_h−u‖₂/‖u‖₂");
    assert_eq!(cells[3], "‖u_h−u‖∞");
    assert_eq!(cells[5], "‖u_h−u_{h/2}‖₂/‖u_{h/2}‖₂");
    assert_eq!(cells[7], "‖u_h−u_{h/2}‖∞");
    assert!(cells[2..].iter().step_by(2).take(4).all(|c| *c == "order"));
}
