use rigiduality_cli::driver::{run_source, RunResult, EXIT_FAILURE, EXIT_OK, EXIT_USAGE};
use rigiduality_cli::exec::Options;
use rigiduality_cli::record::{RecordKind, Status, SCHEMA};
use serde_json::Value;

fn run(src: &str) -> RunResult {
    run_source(src, "test", &Options::default())
}

fn summaries(r: &RunResult) -> Vec<&str> {
    r.report
        .records
        .iter()
        .map(|r| r.summary.as_str())
        .collect()
}

fn validate(r: &RunResult) {
    let schema: Value = serde_json::from_str(SCHEMA).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let doc = serde_json::to_value(&r.report).unwrap();
    let errors: Vec<String> = validator
        .iter_errors(&doc)
        .map(|e| format!("{} at {}", e, e.instance_path))
        .collect();
    assert!(errors.is_empty(), "{errors:#?}");
}

fn power_session(n: u32) -> String {
    let mut s =
        format!("ring B = QQ[s];\nring C = QQ[t];\nhom f : B -> C = (t^{n});\ntower T = (f);\n");
    for i in (0..n).rev() {
        s.push_str(&format!("traceform T.1(t^{i});\n"));
    }
    s
}

#[test]
fn power_map_traces_for_n_three() {
    let r = run(&power_session(3));
    assert_eq!(r.exit, EXIT_OK);
    assert_eq!(&summaries(&r)[4..], ["ds", "0", "0"]);
    assert_eq!(r.report.records[4].payload["coefficient"], "1");
    validate(&r);
}

#[test]
fn power_map_traces_for_all_small_n() {
    for n in 2..=5 {
        let r = run(&power_session(n));
        let traces = &summaries(&r)[4..];
        assert_eq!(traces[0], "ds", "n = {n}");
        assert!(traces[1..].iter().all(|t| *t == "0"), "n = {n}: {traces:?}");
    }
}

#[test]
fn cusp_is_gorenstein() {
    let r = run("ring A = QQ[x, y] / (y^2 - x^3);\nomega A;");
    assert_eq!(r.exit, EXIT_OK);
    let rec = &r.report.records[1];
    assert_eq!(rec.status, Status::Ok);
    assert_eq!(rec.payload["gorenstein"], Value::Bool(true));
    assert_eq!(rec.payload["shift"], 1);
    assert_eq!(rec.payload["omega"]["generators"], 1);
    assert!(rec.provenance.bounds.contains_key("attempts"));
    validate(&r);
}

#[test]
fn non_gorenstein_ring_is_reported() {
    // three coordinate axes in 3-space: Cohen-Macaulay, type 2
    let r = run("ring A = QQ[x, y, z] / (x*y, y*z, x*z);\nomega A;");
    let rec = &r.report.records[1];
    assert_eq!(rec.status, Status::Ok, "{}", rec.summary);
    assert_eq!(rec.payload["gorenstein"], Value::Bool(false));
    assert_eq!(rec.payload["omega"]["generators"], 2);
}

#[test]
fn empty_session() {
    for src in ["", "   \n# nothing here\n"] {
        let r = run(src);
        assert!(r.report.records.is_empty());
        assert!(r.report.diagnostics.is_empty());
        assert_eq!(r.exit, EXIT_OK);
        validate(&r);
    }
}

#[test]
fn malformed_ring_reports_the_slash() {
    let r = run("ring A = QQ[x/(;");
    assert_eq!(r.exit, EXIT_USAGE);
    assert!(r.report.records.is_empty());
    let d = &r.report.diagnostics[0];
    assert_eq!(
        (d.location.line, d.location.column, d.location.start),
        (1, 14, 13)
    );
    assert_eq!(d.expected, ["`]`", "`,`"]);
    assert!(
        r.rendered[0].starts_with("test:1:14: error: expected `]` or `,`, found `/`"),
        "{}",
        r.rendered[0]
    );
    validate(&r);
}

#[test]
fn several_syntax_errors_are_all_reported() {
    let r = run("ring A = QQ[x/(;\ndim ;\nring B = QQ[y];\nnf B y +;");
    let lines: Vec<usize> = r
        .report
        .diagnostics
        .iter()
        .map(|d| d.location.line)
        .collect();
    assert_eq!(lines, [1, 2, 4]);
    assert_eq!(r.exit, EXIT_USAGE);
}

#[test]
fn binding_errors_stop_execution() {
    let r = run("ring A = QQ[x];\nres A;");
    assert_eq!(r.exit, EXIT_USAGE);
    assert!(r.report.records.is_empty());
    assert_eq!(r.report.diagnostics[0].location.line, 2);
}

#[test]
fn records_follow_statement_order() {
    let src = "ring A = QQ[x, y];\ndim A;\nmodule M = A / (x, y);\nbetti M;\nnf A (x + y)^2;\n";
    let r = run(src);
    let commands: Vec<&str> = r
        .report
        .records
        .iter()
        .map(|r| r.command.as_str())
        .collect();
    assert_eq!(
        commands,
        [
            "ring A = QQ[x, y];",
            "dim A;",
            "module M = A / (x, y);",
            "betti M;",
            "nf A (x + y)^2;"
        ]
    );
    let lines: Vec<usize> = r.report.records.iter().map(|r| r.location.line).collect();
    assert_eq!(lines, [1, 2, 3, 4, 5]);
    let indices: Vec<usize> = r.report.records.iter().map(|r| r.index).collect();
    assert_eq!(indices, [0, 1, 2, 3, 4]);
    assert_eq!(r.report.records[0].kind, RecordKind::Definition);
    assert_eq!(r.report.records[1].kind, RecordKind::Command);
    assert_eq!(summaries(&r)[3], "[1, 2, 1]");
    assert_eq!(summaries(&r)[4], "x^2 + 2*x*y + y^2");
    validate(&r);
}

#[test]
fn runtime_errors_become_records() {
    let r = run("ring A = QQ[x];\nnf A 1/x;\ndim A;");
    assert_eq!(r.exit, EXIT_FAILURE);
    assert_eq!(r.report.records.len(), 3);
    assert_eq!(r.report.records[1].status, Status::Error);
    assert!(r.report.records[1]
        .error
        .as_deref()
        .unwrap()
        .starts_with("2:8:"));
    assert_eq!(r.report.records[2].status, Status::Ok);
    validate(&r);
}

#[test]
fn output_is_deterministic() {
    let src =
        std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/sessions/tour.rgd")).unwrap();
    // timings are the only field allowed to vary between runs
    fn drop_timings(v: &mut Value) {
        match v {
            Value::Object(m) => {
                m.remove("elapsed");
                m.values_mut().for_each(drop_timings);
            }
            Value::Array(a) => a.iter_mut().for_each(drop_timings),
            _ => {}
        }
    }
    let strip = |r: RunResult| -> Vec<(String, Value)> {
        r.report
            .records
            .into_iter()
            .map(|mut r| {
                drop_timings(&mut r.payload);
                (r.summary, r.payload)
            })
            .collect()
    };
    let a = strip(run(&src));
    let b = strip(run(&src));
    assert_eq!(a, b);
}

#[test]
fn shipped_sessions_validate_and_succeed() {
    for name in ["power_map", "cusp", "tour"] {
        let path = format!("{}/sessions/{name}.rgd", env!("CARGO_MANIFEST_DIR"));
        let src = std::fs::read_to_string(&path).unwrap();
        let r = run_source(&src, &path, &Options::default());
        let errors: Vec<&str> = r
            .report
            .records
            .iter()
            .filter(|r| r.status == Status::Error)
            .map(|r| r.summary.as_str())
            .collect();
        assert!(errors.is_empty(), "{name}: {errors:?}");
        assert_eq!(r.exit, EXIT_OK, "{name}");
        validate(&r);
    }
}

#[test]
fn squaring_bound_is_recorded() {
    let opts = Options {
        max_ext: 3,
        ..Options::default()
    };
    let r = run_source("ring A = QQ[x];\nrigidity A;", "t", &opts);
    let rec = &r.report.records[1];
    assert_eq!(rec.payload["rigid"], "yes");
    assert_eq!(rec.provenance.bounds["max_ext"], 3);
}

#[test]
fn check_inside_a_session() {
    let r = run("check traceform;");
    assert_eq!(r.report.records[0].summary, "4/4 checks passed");
    assert_eq!(
        r.report.records[0].payload["outcomes"]
            .as_array()
            .unwrap()
            .len(),
        4
    );
    let r = run("check nonsense;");
    assert_eq!(r.exit, EXIT_FAILURE);
    validate(&r);
}

#[test]
fn orders_do_not_change_answers() {
    let src = "ring A = QQ[x, y, z] / (x^2 - y*z, y^3 - x*z);\ndim A;\nnf A x^3*y;\n";
    let base = run(src);
    for order in ["lex", "block(1)"] {
        let opts = Options {
            order: rigiduality_core::MonomialOrder::parse(order).unwrap(),
            ..Options::default()
        };
        let other = run_source(src, "t", &opts);
        assert_eq!(
            other.report.records[1].summary, base.report.records[1].summary,
            "{order}"
        );
        assert_eq!(other.report.records[0].provenance.order, order);
    }
}
