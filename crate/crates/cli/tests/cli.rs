use std::io::Write;
use std::process::{Command, Output};

fn finsum(args: &[&str], config: Option<&std::path::Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_finsum"));
    cmd.args(args).env_remove("FINSUM_CONFIG");
    if let Some(p) = config {
        cmd.env("FINSUM_CONFIG", p);
    }
    cmd.output().unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn eval_reports_oracle_and_method() {
    let out = finsum(&["eval", "--expr", "1/k", "--n", "5", "--method", "laplace", "--tol", "1e-12"], None);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["meta"]["expr"], "1/k");
    assert_eq!(v["meta"]["tol"], 1e-12);
    let results = v["results"].as_array().unwrap();
    assert_eq!(results.len(), 2);
    assert_eq!(results[0]["method"], "oracle");
    assert_eq!(results[1]["method"], "laplace");
    assert!(results[1]["abs_err_vs_oracle"].as_f64().unwrap() <= 1e-10);
    assert!((results[1]["value"]["re"].as_f64().unwrap() - 137.0 / 60.0).abs() < 1e-12);
}

#[test]
fn exit_codes() {
    assert_eq!(finsum(&["eval", "--expr", "k", "--n", "100", "--method", "oracle"], None).status.code(), Some(0));
    // every requested method inapplicable
    assert_eq!(finsum(&["eval", "--expr", "log(k)", "--n", "4", "--method", "fourier"], None).status.code(), Some(1));
    let bad = finsum(&["eval", "--expr", "1/(k+", "--n", "4"], None);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("byte 5"));
    assert_eq!(finsum(&["eval", "--expr", "k", "--n", "4", "--method", "magic"], None).status.code(), Some(2));
}

#[test]
fn odd_alternating_is_recorded_as_error() {
    let out = finsum(&["eval", "--expr", "exp(-k)", "--n", "3", "--variant", "alternating", "--method", "laplace"], None);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert!(v["results"][1]["error"].as_str().unwrap().contains("even N"));
}

#[test]
fn config_file_with_flag_override() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    writeln!(file, "# defaults\nexpr = 1/k^2\nn = 10\nmethod = closed-form\nformat = csv").unwrap();
    let out = finsum(&["eval", "--n", "3"], Some(file.path()));
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines[0], "method,value_re,value_im,abs_err_vs_oracle,error_estimate,flags,nodes,runtime_ns");
    assert!(lines[1].starts_with("oracle,1.3611111111111112,"));
    assert!(lines[2].starts_with("closed-form,1.36111111111111"));
}

#[test]
fn complex_parameters() {
    let out = finsum(
        &["eval", "--expr", "exp(-k)", "--n", "4", "--alpha", "1+0.5i", "--variant", "exp-factor", "--beta", "0.2"],
        None,
    );
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["meta"]["alpha"]["im"], 0.5);
    assert_eq!(v["meta"]["variant"], "exp-factor");
    let laplace = &v["results"][1];
    assert_eq!(laplace["method"], "laplace");
    assert!(laplace["abs_err_vs_oracle"].as_f64().unwrap() < 1e-14);
}

#[test]
fn identities_verify_lists_every_identity() {
    let out = finsum(&["identities", "verify", "--grid", "default"], None);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.contains(" PASS ")).count(), 6);
    assert_eq!(finsum(&["identities", "verify", "--grid", "huge"], None).status.code(), Some(2));
}

#[test]
fn bench_emits_csv() {
    let out = finsum(&["bench", "--suite", "standard"], None);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("expr,N,method,value_re,value_im,abs_err,nodes,runtime_ns"));
    let rows: Vec<_> = lines.collect();
    assert!(rows.iter().any(|r| r.starts_with("sin(0.5*k),20,closed-form,")));
    assert!(rows.iter().all(|r| r.split(',').count() == 8));
}
