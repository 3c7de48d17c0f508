//! Fixed accuracy/cost sweeps across all methods.

use std::io::Write;

use anyhow::{bail, Result};

use crate::output::float_text;
use crate::run::{run, MethodChoice, Request};

const STANDARD: [(&str, u64); 14] = [
    ("1/k", 10),
    ("1/k", 100),
    ("1/k^2", 10),
    ("1/k^2", 1000),
    ("1/(k^2+1)", 10),
    ("1/(k^2+1)", 100),
    ("exp(-k)", 5),
    ("exp(-0.5*k^2)", 5),
    ("sin(0.5*k)", 20),
    ("cos(1.3*k)", 50),
    ("k*cos(0.9*k)", 50),
    ("exp(-0.5*k)*cos(2*k)", 10),
    ("k^-1.5", 100),
    ("0.5/(k^2+0.25)", 10),
];

pub fn suite(name: &str) -> Result<Vec<(&'static str, u64)>> {
    match name {
        "standard" => Ok(STANDARD.to_vec()),
        _ => bail!("unknown bench suite `{name}` (known: standard)"),
    }
}

/// One CSV row per successful method run; failed methods are skipped.
pub fn write_bench<W: Write>(cases: &[(&str, u64)], tol: f64, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["expr", "N", "method", "value_re", "value_im", "abs_err", "nodes", "runtime_ns"])?;
    for &(expr, n) in cases {
        let mut req = Request::new(expr, n, MethodChoice::ALL.to_vec());
        req.tol = tol;
        let report = run(&req)?;
        for r in &report.records {
            let Ok(s) = &r.outcome else { continue };
            w.write_record([
                expr.to_string(),
                n.to_string(),
                r.method.name().to_string(),
                float_text(Some(s.value.re)),
                float_text(Some(s.value.im)),
                float_text(r.abs_err_vs_oracle),
                s.diagnostics.nodes_used.to_string(),
                s.diagnostics.runtime_ns.to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}
