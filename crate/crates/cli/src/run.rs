//! Runs the requested summation methods on one series and collects the
//! per-method records, always alongside the direct-sum oracle.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use anyhow::{anyhow, bail, Result};
use finsum_core::euler_maclaurin::{em_sum, EMJob};
use finsum_core::expr::{parse_expression, Expression};
use finsum_core::fourier::{recognize_fourier_pair, sum_via_fourier};
use finsum_core::identities::{eval_identity, match_identity, REL_TOL};
use finsum_core::kernels::recognize_pair;
use finsum_core::laplace::sum_via_integral;
use finsum_core::telescope::telescoping_sum;
use finsum_core::{direct_sum, Diagnostics, Error, IndexFn, Jet, Method, SeriesSpec, SumResult, Variant, C64};

pub const DEFAULT_TOL: f64 = 1e-10;
const TELESCOPE_MAX_TERMS: u64 = 1 << 20;
const EM_ORDER: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MethodChoice {
    Oracle,
    Laplace,
    Fourier,
    Telescope,
    EulerMaclaurin,
    ClosedForm,
}

impl MethodChoice {
    pub const ALL: [MethodChoice; 6] = [
        MethodChoice::Oracle,
        MethodChoice::Laplace,
        MethodChoice::Fourier,
        MethodChoice::Telescope,
        MethodChoice::EulerMaclaurin,
        MethodChoice::ClosedForm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MethodChoice::Oracle => "oracle",
            MethodChoice::Laplace => "laplace",
            MethodChoice::Fourier => "fourier",
            MethodChoice::Telescope => "telescope",
            MethodChoice::EulerMaclaurin => "euler-maclaurin",
            MethodChoice::ClosedForm => "closed-form",
        }
    }

    /// Parses a method name, or `all`.
    pub fn parse_list(s: &str) -> Result<Vec<MethodChoice>> {
        if s == "all" {
            return Ok(Self::ALL.to_vec());
        }
        Ok(vec![s.parse()?])
    }
}

impl fmt::Display for MethodChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MethodChoice {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|m| m.name() == s).ok_or_else(|| {
            let names: Vec<_> = Self::ALL.iter().map(|m| m.name()).collect();
            anyhow!("unknown method `{s}` (known: {}, all)", names.join(", "))
        })
    }
}

/// Parses `2`, `-1.5`, `0.5+2i`, `3i`.
pub fn parse_complex(s: &str) -> Result<C64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    t.parse::<C64>().map_err(|_| anyhow!("`{s}` is not a number (examples: 1, 0.5+2i, -3i)"))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Request {
    pub expr: String,
    pub n: u64,
    pub methods: Vec<MethodChoice>,
    pub alpha: C64,
    pub variant: Variant,
    pub beta: C64,
    pub tol: f64,
}

impl Request {
    pub fn new(expr: impl Into<String>, n: u64, methods: Vec<MethodChoice>) -> Self {
        Request {
            expr: expr.into(),
            n,
            methods,
            alpha: C64::new(1.0, 0.0),
            variant: Variant::Standard,
            beta: C64::new(0.0, 0.0),
            tol: DEFAULT_TOL,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Record {
    pub method: MethodChoice,
    pub requested: bool,
    pub outcome: std::result::Result<SumResult, Error>,
    pub abs_err_vs_oracle: Option<f64>,
    pub flags: Vec<String>,
}

impl Record {
    pub fn value(&self) -> Option<C64> {
        self.outcome.as_ref().ok().map(|r| r.value)
    }

    pub fn diagnostics(&self) -> Option<&Diagnostics> {
        self.outcome.as_ref().ok().map(|r| &r.diagnostics)
    }

    pub fn is_unflagged(&self) -> bool {
        self.flags.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunReport {
    pub request: Request,
    pub records: Vec<Record>,
}

impl RunReport {
    pub fn oracle(&self) -> &Record {
        &self.records[0]
    }

    pub fn record(&self, method: MethodChoice) -> Option<&Record> {
        self.records.iter().find(|r| r.method == method)
    }

    /// Exit status contract: success iff a requested method is unflagged.
    pub fn succeeded(&self) -> bool {
        self.records.iter().any(|r| r.requested && r.is_unflagged())
    }
}

/// `w(k) g(αk + shift)` as a function of a continuous `k`; only for variants
/// whose weight is smooth in `k`.
struct Term {
    g: Expression,
    alpha: C64,
    shift: C64,
    decay: Option<C64>,
}

impl Term {
    fn new(g: Expression, req: &Request) -> std::result::Result<Self, Error> {
        if req.variant.is_alternating() {
            return Err(Error::Capability(format!(
                "{} weights are not smooth in k",
                req.variant
            )));
        }
        Ok(Term {
            g,
            alpha: req.alpha,
            shift: req.variant.shift(req.beta),
            decay: req.variant.is_exp_factor().then_some(req.beta),
        })
    }
}

impl IndexFn for Term {
    fn eval(&self, k: C64) -> C64 {
        let v = self.g.eval(self.alpha * k + self.shift);
        match self.decay {
            Some(b) => v * (-b * k).exp(),
            None => v,
        }
    }

    fn eval_jet(&self, k: &Jet) -> Option<Jet> {
        let v = self.g.eval_jet(&(*k * self.alpha + self.shift))?;
        Some(match self.decay {
            Some(b) => v * (*k * -b).exp(),
            None => v,
        })
    }
}

fn real_alpha(req: &Request, method: &str) -> std::result::Result<f64, Error> {
    if req.variant != Variant::Standard {
        return Err(Error::Capability(format!("{method} supports the standard variant only")));
    }
    if req.alpha.im != 0.0 || !(req.alpha.re > 0.0) {
        return Err(Error::Capability(format!("{method} needs a real positive alpha")));
    }
    Ok(req.alpha.re)
}

fn series(g: &Expression, req: &Request) -> SeriesSpec {
    SeriesSpec::new(Arc::new(g.clone()), req.n)
        .with_alpha(req.alpha)
        .with_variant(req.variant, req.beta)
}

fn run_method(method: MethodChoice, g: &Expression, req: &Request) -> std::result::Result<SumResult, Error> {
    match method {
        MethodChoice::Oracle => direct_sum(&series(g, req)),
        MethodChoice::Laplace => {
            let kernel = recognize_pair(g)?.kernel()?;
            sum_via_integral(&series(g, req), &kernel, req.tol)
        }
        MethodChoice::Fourier => {
            let alpha = real_alpha(req, "the Fourier route")?;
            let pairs = recognize_fourier_pair(g)?.scaled(alpha);
            sum_via_fourier(&pairs, req.n, req.tol)
        }
        MethodChoice::Telescope => {
            series(g, req).validate()?;
            let term = Term::new(g.clone(), req)?;
            telescoping_sum(&term, req.n, req.tol, TELESCOPE_MAX_TERMS)
        }
        MethodChoice::EulerMaclaurin => {
            series(g, req).validate()?;
            if req.n < 2 {
                return Err(Error::Precondition("Euler-Maclaurin needs N >= 2".into()));
            }
            let term = Term::new(g.clone(), req)?;
            let job = EMJob::new(Arc::new(term), 1.0, req.n as f64, req.n - 1, EM_ORDER)?;
            em_sum(&job)
        }
        MethodChoice::ClosedForm => closed_form(g, req),
    }
}

fn closed_form(g: &Expression, req: &Request) -> std::result::Result<SumResult, Error> {
    let start = std::time::Instant::now();
    let alpha = real_alpha(req, "the closed-form route")?;
    let recognized = recognize_pair(g)?;
    let mut value = C64::new(0.0, 0.0);
    let mut warned = false;
        for pair in &recognized.pairs {
        let m = match_identity(pair, alpha).ok_or_else(|| {
            Error::Capability(format!("no closed form for the {} term of `{}`", pair.name(), g.text()))
        })?;
        let v = eval_identity(m.identity, &m.params, req.n)?;
        warned |= v.warning.is_some();
        value += m.scale * v.value;
    }
    Ok(SumResult {
        value,
        method: Method::ClosedForm,
        error_estimate: REL_TOL * value.norm(),
        diagnostics: Diagnostics {
            converged: !warned,
            runtime_ns: start.elapsed().as_nanos() as u64,
            ..Diagnostics::default()
        },
    })
}

fn flags(outcome: &std::result::Result<SumResult, Error>, tol: f64) -> Vec<String> {
    let r = match outcome {
        Ok(r) => r,
        Err(_) => return vec!["error".into()],
    };
    let mut flags = Vec::new();
    if r.diagnostics.divergent {
        flags.push("divergent".into());
    }
    if !r.diagnostics.converged {
        flags.push("not-converged".into());
    }
    if !r.value.is_finite() {
        flags.push("non-finite".into());
    }
    if !(r.error_estimate <= tol * r.value.norm().max(1.0)) {
        flags.push("error-estimate-above-tol".into());
    }
    flags
}

/// Parses the expression, runs the oracle and every requested method.
/// Fails only when the request itself is malformed; method failures are
/// recorded in the report.
pub fn run(req: &Request) -> Result<RunReport> {
    if !(req.tol > 0.0) {
        bail!("tol must be positive, got {}", req.tol);
    }
    if req.methods.is_empty() {
        bail!("no method requested");
    }
    let g = parse_expression(&req.expr)?;
    let mut methods = vec![MethodChoice::Oracle];
    methods.extend(req.methods.iter().copied().filter(|&m| m != MethodChoice::Oracle));

    let mut records: Vec<Record> = Vec::with_capacity(methods.len());
    for method in methods {
        let outcome = run_method(method, &g, req);
        let flags = flags(&outcome, req.tol);
        let oracle = records.first().and_then(Record::value).or_else(|| {
            (method == MethodChoice::Oracle).then(|| outcome.as_ref().ok().map(|r| r.value)).flatten()
        });
        let abs_err_vs_oracle = match (&outcome, oracle) {
            (Ok(r), Some(o)) => Some((r.value - o).norm()),
            _ => None,
        };
        records.push(Record {
            method,
            requested: req.methods.contains(&method),
            outcome,
            abs_err_vs_oracle,
            flags,
        });
    }
    Ok(RunReport {
        request: req.clone(),
        records,
    })
}
