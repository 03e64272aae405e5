use ctau_core::milnor::w_degree;
use ctau_core::resolution::{compare_charts, polynomial_chart, ExtChart};
use ctau_core::towers::laurent_chart;
use ctau_core::verify::{resolve_named, run_suite, Suite};

#[test]
fn kw0_is_a_diagonal_line() {
    let c = resolve_named("kw:0", 10, 12).unwrap();
    let classes: Vec<_> = c
        .classes()
        .map(|(k, m)| (k.s, k.stem, k.weight, m))
        .collect();
    let want: Vec<_> = (0..=10).map(|s| (s, s, s, 1)).collect();
    assert_eq!(classes, want);
}

#[test]
fn sphere_has_h0() {
    let c = resolve_named("sphere", 2, 4).unwrap();
    assert_eq!(c.mult(1, 1, 1), 1);
    assert_eq!(c.mult(0, 0, 0), 1);
}

#[test]
fn truncated_wbp_is_polynomial() {
    let c = resolve_named("wbp:1", 6, 8).unwrap();
    let want = polynomial_chart("p", &[w_degree(0), w_degree(1)], 6).unwrap();
    assert!(compare_charts(&c, &want, 6).is_empty());
    assert_eq!(c.total_mult(), 9);
}

#[test]
fn laurent_chart_round_trips() {
    let c = laurent_chart(1, 12);
    assert_eq!(ExtChart::from_json(&c.to_json()).unwrap(), c);
    assert_eq!(c.mult(-1, -5, -3), 1);
    assert_eq!(c.mult(2, 10, 6), 1);
}

#[test]
fn fast_suites_pass() {
    for s in [Suite::Pst, Suite::Margolis, Suite::Kw, Suite::Wbp] {
        for r in run_suite(s).unwrap() {
            assert!(r.passed(), "{}", r.to_json());
        }
    }
}

#[test]
fn rejects_unknown_modules() {
    assert!(resolve_named("kw:x", 4, 4).is_err());
    assert!(resolve_named("torus", 4, 4).is_err());
}
