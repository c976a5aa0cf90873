use super::*;

const EQ0: &str = "\
# Zudilin's equation
case: Q
q: 2
t: 1
op: t*phi^3 - (t+q*t+q^4*z^2)*phi^2
    + q*(t-q^2*z)*phi + q^3*z
";

#[test]
fn input_file_header() {
    let f = parse_input(EQ0).unwrap();
    assert_eq!(f.config.case, "Q");
    assert_eq!(f.config.param, "2");
    assert_eq!(f.config.substitutions.get("t").map(String::as_str), Some("1"));
    assert!(f.operator.starts_with("t*phi^3") && f.operator.ends_with("q^3*z"));
}

#[test]
fn eq0_report() {
    let r = run(&parse_input(EQ0).unwrap()).unwrap();
    let v = report_json(&r);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["classification"]["kind"], "FullGL");
    assert_eq!(v["classification"]["n"], 3);
    assert_eq!(v["certificates"]["gauge_verified"], true);
    assert_eq!(v["newton"]["hull"], json!([[0, 1], [1, 0], [3, 0]]));
    validate_report(&v).unwrap();
}

#[test]
fn order_one_sign() {
    let r = run(&parse_input("case: S\nop: phi + 1").unwrap()).unwrap();
    let v = report_json(&r);
    assert_eq!(v["classification"]["kind"], "CyclicOrder1");
    assert_eq!(v["classification"]["ell"], 2);
    validate_report(&v).unwrap();
}

#[test]
fn tampered_report_is_rejected() {
    let r = run(&parse_input("case: S\nop: phi^2 - z*phi - 1").unwrap()).unwrap();
    let mut v = report_json(&r);
    validate_report(&v).unwrap();
    v["certificates"]["reduced"][0][0] = json!("z + 7");
    assert!(validate_report(&v).is_err());
    let mut w = report_json(&r);
    w["schema"] = json!(2);
    assert!(validate_report(&w).is_err());
}

#[test]
fn report_with_extension_round_trips() {
    // φ² + 1 splits only over Q(i)
    let r = run(&parse_input("case: S\nop: phi^2 + 1").unwrap()).unwrap();
    let v = report_json(&r);
    assert!(r.diagnostics.tower_depth >= 1);
    validate_report(&v).unwrap();
}

#[test]
fn exit_codes() {
    let code = |text: &str| parse_input(text).and_then(|f| run(&f)).unwrap_err().exit_code();
    assert_eq!(code("case: S\nop: phi + "), 2);
    assert_eq!(code("case: S\nop: phi + t"), 2);
    assert_eq!(code("case: Q\nq: 1\nop: phi - 1"), 3);
    assert_eq!(code("case: Q\nq: -1\nop: phi - 1"), 3);
    assert_eq!(code("case: S\nop phi"), 3);
    assert_eq!(code("case: M\nop: phi - 1"), 4);
    assert_eq!(code("case: S\nop: phi^4 - z"), 4);
    assert_eq!(code("case: S\ntranscendence: 2\nop: phi - z"), 4);
}

#[test]
fn batch_keeps_order() {
    let inputs: Vec<(String, String)> = vec![
        ("a".into(), "case: S\nop: phi + 1".into()),
        ("b".into(), "case: S\nop: phi -".into()),
        ("c".into(), EQ0.into()),
        ("d".into(), "case: S\nop: phi^2 - phi - 1".into()),
    ];
    let out = run_batch(&inputs);
    let names: Vec<&str> = out.iter().map(|e| e.source.as_str()).collect();
    assert_eq!(names, ["a", "b", "c", "d"]);
    assert_eq!(out[1].exit_code, 2);
    assert_eq!(out[2].report.as_ref().unwrap().classification.kind(), "FullGL");
    assert_eq!(out[3].report.as_ref().unwrap().classification.kind(), "DiagonalKernel");
}

#[test]
fn newton_svg_lists_hull() {
    let f = parse_input(EQ0).unwrap();
    let r = run(&f).unwrap();
    let svg = svg::newton_svg(r.newton.as_ref().unwrap());
    assert!(svg.starts_with("<svg"));
    assert!(svg.contains(r#"data-vertices="(0,1) (1,0) (3,0)""#));
}

#[test]
fn transcendence_section() {
    let mut f = parse_input(EQ0).unwrap();
    f.config.transcendence_bound = Some(3);
    let v = report_json(&run(&f).unwrap());
    assert_eq!(v["transcendence"]["telescoper_bound"], 3);
    assert_eq!(v["transcendence"]["w"], "1");
    assert_eq!(v["transcendence"]["verdict"]["verdict"], "Inconclusive");
}

#[test]
fn substitutions_may_use_the_parameter() {
    let f = parse_input("case: Q\nq: 3\nt: q^2 + 1\nop: phi - t*z").unwrap();
    let (l, _) = operator_from(&f.config, &f.operator).unwrap();
    assert_eq!(l.coeff(0).to_string(), "-10*z");
}
