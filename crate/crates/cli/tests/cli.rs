use std::process::{Command, Output};

fn duality(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_duality")).args(args).env("DUALITY_THREADS", "1").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim_end().to_string()
}

#[test]
fn eval_false_exits_one() {
    let o = duality(&["eval", "--formula", "!exists i.(even(i) & Qb(i))", "--word", "abab", "--alphabet", "ab"]);
    assert_eq!(stdout(&o), "false");
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn eval_with_assignment() {
    let o = duality(&["eval", "--formula", "plus(x, y, z)", "--word", "aaaaa", "--alphabet", "a", "--assign", "x=2,y=3,z=5"]);
    assert_eq!(stdout(&o), "true");
    assert_eq!(o.status.code(), Some(0));
    let o = duality(&["eval", "--formula", "exists z. Qx1+x2(z)", "--word", ". x1+x2", "--alphabet", "gamma2"]);
    assert_eq!(stdout(&o), "true");
}

#[test]
fn member_immerman() {
    let o = duality(&["member", "--lang", "immerman", "--word", "00a01a10a11"]);
    assert_eq!(stdout(&o), "true");
    assert_eq!(o.status.code(), Some(0));
    let o = duality(&["member", "--lang", "immerman-complement", "--word", "00a01a10a11", "--json"]);
    assert_eq!(stdout(&o), r#"{"result":false}"#);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn verify_json_report() {
    let o = duality(&["verify", "--suite", "successor-windows", "--max-n", "8", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["pass"], true);
    assert_eq!(v["suite"], "successor-windows");
    assert_eq!(v["params"]["max_n"], 8);
    assert_eq!(v["failures"].as_array().unwrap().len(), 0);
}

#[test]
fn relation_plus() {
    let o = duality(&["relation", "--formula", "plus(x, y, z)", "--arity", "3", "--bound", "3", "--json"]);
    assert_eq!(stdout(&o), "[[1,1,2],[1,2,3],[2,1,3]]");
    let o = duality(&["relation", "--lang", "addition", "--arity", "3", "--bound", "3", "--json"]);
    assert_eq!(stdout(&o), "[[1,1,2],[1,2,3],[2,1,3]]");
}

#[test]
fn stratified_and_encoding() {
    let o = duality(&["stratified", "--periods", "[[1,1,0,0],[0,0,1,1]]"]);
    assert_eq!((stdout(&o).as_str(), o.status.code()), ("true", Some(0)));
    let o = duality(&["stratified", "--periods", "[[1,0,1,0],[0,1,0,1]]"]);
    assert_eq!((stdout(&o).as_str(), o.status.code()), ("false", Some(1)));
    let o = duality(&["encode", "--tuple", "2,3,5", "--length", "6"]);
    assert_eq!(stdout(&o), ". x1 x2 . x3 .");
    let o = duality(&["decode", "--word", ". x1 x2 . x3 ."]);
    assert_eq!(stdout(&o), "2,3,5");
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["verify", "--suite", "nope"][..],
        &["verify", "--suite", "successor-windows", "--max-n", "99"],
        &["member", "--lang", "nope", "--word", "a"],
        &["eval", "--formula", "exists", "--alphabet", "ab"],
        &["eval", "--formula", "Qa(x)", "--word", "ab", "--alphabet", "ab"],
        &["relation", "--lang", "immerman", "--arity", "3", "--bound", "3"],
        &["frobnicate"],
    ] {
        let o = duality(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn machine_text() {
    let o = duality(&["machine", "--name", "addition-dpda"]);
    let golden = include_str!("../../core/machines/addition-dpda.txt");
    assert_eq!(String::from_utf8_lossy(&o.stdout), golden);
}
