use std::process::{Command, Output};

fn loopgl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_loopgl")).args(args).env_remove("LOOPGL_WINDOW").env_remove("LOOPGL_SEED").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn hyper(entries: &str, lambda: &str) -> String {
    format!(r#"{{"algebra":"hyper","n":"2","ring":"Z","basis":"B","terms":[{{"coeff":"1","matrix":{{"n":"2","offdiag":[{entries}],"diag":["0","0"]}},"lambda":[{lambda}]}}]}}"#)
}

fn schur(entries: &str, diag: &str) -> String {
    format!(r#"{{"algebra":"schur","n":"2","r":"3","ring":"Z","terms":[{{"coeff":"1","matrix":{{"n":"2","offdiag":[{entries}],"diag":[{diag}]}}}}]}}"#)
}

#[test]
fn garland_lambda_two_has_half_coefficients() {
    let o = loopgl(&["garland-lambda", "--k", "2"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), r#"{"terms":[{"coeff":"1/2","monomial":["1","1"]},{"coeff":"1/2","monomial":["2"]}]}"#);
}

#[test]
fn schur_formula_suite_passes_for_small_degree() {
    let o = loopgl(&["verify", "schur-formula", "--n", "2", "--r", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains(r#""passed":true"#));
}

#[test]
fn malformed_json_exits_two_with_position() {
    let o = loopgl(&["hyper-mul", r#"{"algebra": "hyper","#, r#"{}"#]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 1, column"), "{err}");
}

#[test]
fn contract_violations_exit_two() {
    let o = loopgl(&["phi", &hyper(r#"["1","2","2"]"#, r#""0","0""#), "--p", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("u(n)_h"));
    assert_eq!(loopgl(&["modp-basis", "--n", "2", "--p", "4"]).status.code(), Some(2));
    assert_eq!(loopgl(&["verify", "no-such-suite"]).status.code(), Some(2));
    assert_eq!(loopgl(&["hyper-mul", "--ring", "Fp:6", &hyper("", r#""0","0""#), &hyper("", r#""0","0""#)]).status.code(), Some(2));
}

#[test]
fn commutator_of_e_and_f() {
    let e = hyper(r#"["1","2","1"]"#, r#""0","0""#);
    let f = hyper(r#"["2","1","1"]"#, r#""0","0""#);
    let ef = loopgl(&["hyper-mul", &e, &f, "--format", "text"]);
    let fe = loopgl(&["hyper-mul", &f, &e, "--format", "text"]);
    assert_eq!(stdout(&ef).trim(), "1·0<(1,0)> + 1·E(1,2)+E(2,1)<(0,0)>");
    assert_eq!(stdout(&fe).trim(), "1·0<(0,1)> + 1·E(1,2)+E(2,1)<(0,0)>");
}

#[test]
fn formula_and_convolution_agree_through_the_cli() {
    let b = schur(r#"["1","2","1"]"#, r#""0","2""#);
    let a = schur(r#"["2","1","1"]"#, r#""1","1""#);
    let x = loopgl(&["schur-mul", &b, &a]);
    let y = loopgl(&["schur-oracle", &b, &a]);
    assert!(x.status.success() && y.status.success());
    assert_eq!(x.stdout, y.stdout);
}

#[test]
fn output_is_deterministic() {
    let e = hyper(r#"["1","4","2"]"#, r#""1","0""#);
    let runs: Vec<Vec<u8>> = (0..3).map(|_| loopgl(&["hyper-convert", &e, "--to", "G"]).stdout).collect();
    assert!(runs.windows(2).all(|w| w[0] == w[1]));
    let back = loopgl(&["hyper-convert", std::str::from_utf8(&runs[0]).unwrap().trim(), "--to", "B"]);
    let canonical = loopgl(&["hyper-convert", &e, "--to", "B"]);
    assert_eq!(back.stdout, canonical.stdout);
    assert!(stdout(&canonical).starts_with(r#"{"algebra":"hyper","basis":"B","n":"2","ring":"Z","terms":[{"coeff":"1","lambda":["1","0"]"#));
}

#[test]
fn window_comes_from_the_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_loopgl"))
        .args(["modp-basis", "--n", "2", "--p", "2", "--kind", "B_h"])
        .env("LOOPGL_WINDOW", "1")
        .output()
        .unwrap();
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains(r#""count":"64""#) && s.contains(r#""window":"1""#), "{}", &s[..200.min(s.len())]);
}

#[test]
fn negative_diagonals_in_k() {
    let k = |entries: &str, diag: &str| format!(r#"{{"algebra":"k","n":"2","ring":"Z","terms":[{{"coeff":"1","matrix":{{"n":"2","offdiag":[{entries}],"diag":[{diag}]}}}}]}}"#);
    let o = loopgl(&["k-mul", &k(r#"["1","2","1"]"#, r#""-1","0""#), &k(r#"["2","1","1"]"#, r#""-1","0""#), "--format", "text"]);
    assert_eq!(stdout(&o).trim(), "1·[E(1,2)+E(2,1)+diag(-1,-1)]");
}

#[test]
fn kbar_product_of_e_and_f() {
    let bar = |entries: &str, res: &str| {
        format!(r#"{{"algebra":"kbar","n":"2","p":"2","h":"1","terms":[{{"coeff":"1","offdiag":{{"n":"2","offdiag":[{entries}],"diag":["0","0"]}},"diag_mod":{{"p":"2","h":"1","residues":[{res}]}}}}]}}"#)
    };
    let o = loopgl(&["kbar-mul", &bar(r#"["1","2","1"]"#, r#""0","1""#), &bar(r#"["2","1","1"]"#, r#""0","1""#), "--format", "text"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o).trim(), "1·[diag(1,1)] + 1·[E(1,2)+E(2,1)+diag(0,0)]");
}

#[test]
fn independence_of_a_small_family() {
    let fam = r#"[{"matrix":{"n":"2","offdiag":[],"diag":["0","0"]},"lambda":["1","0"]},{"matrix":{"n":"2","offdiag":[["1","2","1"]],"diag":["0","0"]},"lambda":["0","0"]}]"#;
    let o = loopgl(&["independence", fam, "--n", "2", "--p", "3"]);
    assert!(stdout(&o).contains(r#""independent":true"#));
}

#[test]
fn garland_verify_and_little_basis() {
    let o = loopgl(&["garland-verify", "--n", "2", "--k", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let o = loopgl(&["little-basis", "--n", "2", "--r", "1", "--p", "2", "--window", "2"]);
    assert!(stdout(&o).contains(r#""count":"10""#));
}
