use rigiduality_core::suite::{criteria, groups, run_suite, selects};

#[test]
fn filters_select_groups_and_ids() {
    let all = criteria();
    let traceform: Vec<usize> = all
        .iter()
        .filter(|c| selects("traceform", c))
        .map(|c| c.id)
        .collect();
    assert_eq!(traceform, vec![1, 2, 3, 4]);
    let mixed: Vec<usize> = all
        .iter()
        .filter(|c| selects("5, rigidity", c))
        .map(|c| c.id)
        .collect();
    assert_eq!(mixed, vec![5, 7]);
    assert!(all.iter().all(|c| !selects("nothing", c)));
    assert_eq!(groups().len(), 7);
}

#[test]
fn verdicts_do_not_depend_on_the_seed() {
    let a = run_suite(Some("traceform,pairing,presentation"), 0);
    let b = run_suite(Some("traceform,pairing,presentation"), 7);
    assert_eq!(a.len(), 6);
    for (x, y) in a.iter().zip(&b) {
        assert_eq!(x.id, y.id);
        assert_eq!(x.passed, y.passed);
        assert!(x.passed, "{:?}", x.details);
        assert_eq!(y.seed, 7);
    }
}

#[test]
fn single_criterion_by_id() {
    let o = run_suite(Some("3"), 0);
    assert_eq!(o.len(), 1);
    let line = o[0].summary_line();
    assert!(line.starts_with("PASS [3]"), "{line}");
}
