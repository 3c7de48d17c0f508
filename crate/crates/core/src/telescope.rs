//! `Σ_{k=1}^{N} g(k) = Σ_{k=1}^{∞} [g(k) - g(N + k)]`, evaluated by summing
//! the differences up to `M` and estimating the rest, plus the zeta-function
//! shortcut for powers.

use std::time::Instant;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::euler_maclaurin::em_tail_with;
use crate::jet::Jet;
use crate::series::{CompensatedSum, IndexFn, Method, SumResult};
use crate::special::{hurwitz_zeta_with_error, riemann_zeta};

type C64 = Complex64;

const START_TERMS: u64 = 10;
const TAIL_ORDER: usize = 4;
/// Decay probes of `|g|` at `x_0 · 2^j`.
const DECAY_PROBES: u32 = 24;
const DECAY_RATIO: f64 = 0.95;

struct Difference<'a> {
    g: &'a dyn IndexFn,
    n: f64,
}

impl IndexFn for Difference<'_> {
    fn eval(&self, k: C64) -> C64 {
        self.g.eval(k) - self.g.eval(k + self.n)
    }
    fn eval_jet(&self, k: &Jet) -> Option<Jet> {
        Some(self.g.eval_jet(k)? - self.g.eval_jet(&(*k + C64::new(self.n, 0.0)))?)
    }
}

/// Whether `|g(x)|` tends to zero, judged on a geometric grid far beyond `x0`.
/// The rewrite as a sum of differences is only valid when it does.
fn decays(g: &dyn IndexFn, x0: f64) -> bool {
    let mags: Vec<f64> = (0..DECAY_PROBES)
        .map(|j| g.eval(C64::new(x0 * 2f64.powi(j as i32), 0.0)).norm())
        .collect();
    if mags.iter().any(|m| !m.is_finite()) {
        return false;
    }
    mags.windows(2)
        .rev()
        .take(3)
        .all(|w| w[1] == 0.0 || w[1] <= DECAY_RATIO * w[0])
}

/// Richardson-style extrapolation of partial sums at `M, 2M, 4M`, assuming
/// the differences shrink geometrically in the doubling index.
fn extrapolate(s: [C64; 3]) -> Option<(C64, f64)> {
    let d1 = s[1] - s[0];
    let d2 = s[2] - s[1];
    if d2 == C64::new(0.0, 0.0) {
        return Some((s[2], 0.0));
    }
    if d1 == C64::new(0.0, 0.0) {
        return None;
    }
    let r = d2 / d1;
    if !(r.norm() < 1.0) {
        return None;
    }
    let correction = d2 * r / (C64::new(1.0, 0.0) - r);
    Some((s[2] + correction, correction.norm()))
}

pub fn telescoping_sum(g: &dyn IndexFn, n: u64, tol: f64, max_terms: u64) -> Result<SumResult> {
    let start = Instant::now();
    if n == 0 {
        return Err(Error::Precondition("term count N must be at least 1".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::Precondition(format!("tol must be positive, got {tol}")));
    }
    let d = Difference { g, n: n as f64 };
    let admitted = decays(g, (n + START_TERMS) as f64);
    let has_jets = g.eval_jet(&Jet::variable(C64::new(1.0, 0.0), 1)).is_some();

    let mut acc = CompensatedSum::new();
    let mut summed = 0u64;
    let mut extend = |acc: &mut CompensatedSum, to: u64| -> Result<()> {
        for k in summed + 1..=to {
            let term = d.eval(C64::new(k as f64, 0.0));
            if !term.is_finite() {
                return Err(Error::eval_at(format!("k = {k}"), format!("non-finite difference {term}")));
            }
            acc.add(term);
        }
        summed = summed.max(to);
        Ok(())
    };

    let mut m = START_TERMS.min(max_terms.max(1));
    let mut value;
    let mut error;
    let mut nodes = 0u64;
    let mut history: Vec<C64> = Vec::new();
    loop {
        extend(&mut acc, m)?;
        let head = acc.total();
        if has_jets {
            match em_tail_with(&d, m as f64, TAIL_ORDER, tol * 0.01) {
                Ok(tail) => {
                    value = head + tail.value;
                    error = tail.bound;
                    nodes += tail.nodes_used;
                }
                Err(_) => {
                    value = head;
                    error = f64::INFINITY;
                }
            }
        } else {
            history.push(head);
            let n = history.len();
            match (n >= 3).then(|| extrapolate([history[n - 3], history[n - 2], history[n - 1]])) {
                Some(Some((v, e))) => {
                    value = v;
                    error = e;
                }
                _ => {
                    value = head;
                    error = f64::INFINITY;
                }
            }
        }
        // Without decay the differences do not telescope; one pass is enough to report.
        if !admitted || error <= 0.1 * tol || m >= max_terms {
            break;
        }
        m = (2 * m).min(max_terms);
    }
    error += acc.error_bound();

    let mut result = SumResult::exact(value, Method::Telescope, error);
    result.diagnostics.truncation_index = Some(m);
    result.diagnostics.nodes_used = nodes + m;
    result.diagnostics.converged = admitted && error <= tol;
    Ok(result.timed(start))
}

/// `Σ_{k=1}^{N} k^(-s) = ζ(s) - ζ(s, N) + N^(-s)`.
pub fn zeta_power_sum(s: f64, n: u64) -> Result<SumResult> {
    let start = Instant::now();
    if n == 0 {
        return Err(Error::Domain("N must be at least 1".into()));
    }
    let zeta = riemann_zeta(s)?;
    let (hurwitz, herr) = hurwitz_zeta_with_error(s, n as f64)?;
    let last = (n as f64).powf(-s);
    let value = zeta - hurwitz + last;
    let err = herr + 4.0 * f64::EPSILON * (zeta.abs() + hurwitz.abs() + last);
    let mut result = SumResult::exact(C64::new(value, 0.0), Method::ZetaPower, err);
    result.diagnostics.truncation_index = Some(n);
    Ok(result.timed(start))
}
