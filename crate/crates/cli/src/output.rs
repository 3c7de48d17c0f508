//! JSON and CSV renderings of a [`RunReport`].
//!
//! Floats go through `serde_json`, which writes the shortest representation
//! that round-trips (at most 17 significant digits). Field order is fixed by
//! the struct definitions below.

use std::io::Write;

use anyhow::Result;
use finsum_core::C64;
use serde::Serialize;

use crate::run::RunReport;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Serialize)]
struct Complex {
    re: f64,
    im: f64,
}

impl From<C64> for Complex {
    fn from(z: C64) -> Self {
        Complex { re: z.re, im: z.im }
    }
}

#[derive(Serialize)]
struct Meta<'a> {
    expr: &'a str,
    n: u64,
    alpha: Complex,
    variant: &'a str,
    beta: Complex,
    tol: f64,
    version: &'a str,
}

#[derive(Serialize)]
struct Diag {
    nodes_used: u64,
    truncation_index: Option<u64>,
    divergent: bool,
    converged: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    imag_residual: Option<f64>,
    runtime_ns: u64,
}

#[derive(Serialize)]
struct ResultRow<'a> {
    method: &'a str,
    value: Option<Complex>,
    abs_err_vs_oracle: Option<f64>,
    error_estimate: Option<f64>,
    flags: &'a [String],
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
    diagnostics: Option<Diag>,
}

#[derive(Serialize)]
struct Document<'a> {
    meta: Meta<'a>,
    results: Vec<ResultRow<'a>>,
}

fn document(report: &RunReport) -> Document<'_> {
    let req = &report.request;
    let results = report
        .records
        .iter()
        .map(|r| {
            let ok = r.outcome.as_ref().ok();
            ResultRow {
                method: r.method.name(),
                value: ok.map(|s| s.value.into()),
                abs_err_vs_oracle: r.abs_err_vs_oracle,
                error_estimate: ok.map(|s| s.error_estimate),
                flags: &r.flags,
                error: r.outcome.as_ref().err().map(ToString::to_string),
                diagnostics: ok.map(|s| {
                    let d = &s.diagnostics;
                    Diag {
                        nodes_used: d.nodes_used,
                        truncation_index: d.truncation_index,
                        divergent: d.divergent,
                        converged: d.converged,
                        imag_residual: d.imag_residual,
                        runtime_ns: d.runtime_ns,
                    }
                }),
            }
        })
        .collect();
    Document {
        meta: Meta {
            expr: &req.expr,
            n: req.n,
            alpha: req.alpha.into(),
            variant: req.variant.name(),
            beta: req.beta.into(),
            tol: req.tol,
            version: VERSION,
        },
        results,
    }
}

pub fn to_json(report: &RunReport) -> Result<String> {
    Ok(serde_json::to_string_pretty(&document(report))?)
}

/// Shortest round-trip text for a float; empty for missing or non-finite.
pub fn float_text(x: Option<f64>) -> String {
    match x {
        Some(v) if v.is_finite() => serde_json::to_string(&v).unwrap_or_default(),
        _ => String::new(),
    }
}

pub fn write_csv<W: Write>(report: &RunReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "method",
        "value_re",
        "value_im",
        "abs_err_vs_oracle",
        "error_estimate",
        "flags",
        "nodes",
        "runtime_ns",
    ])?;
    for r in &report.records {
        let ok = r.outcome.as_ref().ok();
        w.write_record([
            r.method.name().to_string(),
            float_text(ok.map(|s| s.value.re)),
            float_text(ok.map(|s| s.value.im)),
            float_text(r.abs_err_vs_oracle),
            float_text(ok.map(|s| s.error_estimate)),
            r.flags.join(";"),
            ok.map(|s| s.diagnostics.nodes_used.to_string()).unwrap_or_default(),
            ok.map(|s| s.diagnostics.runtime_ns.to_string()).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::run::{run, MethodChoice, Request};

    #[test]
    fn json_shape() {
        let report = run(&Request::new("1/k^2", 4, vec![MethodChoice::Oracle, MethodChoice::Fourier])).unwrap();
        let v: serde_json::Value = serde_json::from_str(&to_json(&report).unwrap()).unwrap();
        assert_eq!(v["meta"]["n"], 4);
        assert_eq!(v["meta"]["variant"], "standard");
        assert_eq!(v["results"][0]["method"], "oracle");
        assert_eq!(v["results"][0]["value"]["re"], 1.4236111111111112);
        assert_eq!(v["results"][1]["flags"][0], "error");
        assert!(v["results"][1]["error"].as_str().unwrap().contains("Fourier"));
    }

    #[test]
    fn csv_rows() {
        let report = run(&Request::new("k", 3, vec![MethodChoice::Oracle])).unwrap();
        let mut buf = Vec::new();
        write_csv(&report, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[1].starts_with("oracle,6.0,0.0,0.0,"));
    }

    #[test]
    fn float_text_is_round_trip() {
        assert_eq!(float_text(Some(0.1 + 0.2)), "0.30000000000000004");
        assert_eq!(float_text(Some(1e-300)), "1e-300");
        assert_eq!(float_text(Some(f64::NAN)), "");
        assert_eq!(float_text(None), "");
    }
}
