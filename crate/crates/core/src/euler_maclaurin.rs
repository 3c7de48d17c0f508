//! Euler-Maclaurin summation on a uniform lattice, and the tail estimator
//! `Σ_{j≥1} f(M + j)` used by the telescope engine.

use std::sync::Arc;
use std::time::Instant;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::jet::{Jet, MAX_ORDER};
use crate::quadrature::{integrate_finite, integrate_semi_infinite_with, QuadOptions, QuadratureResult};
use crate::series::{CompensatedSum, IndexFn, Method, SumResult};
use crate::special::{bernoulli_f64, factorial};

type C64 = Complex64;

const INTEGRAL_TOL: f64 = 1e-13;
/// Samples of `|f^(2n)|` per lattice cell in the remainder bound.
const SAMPLES_PER_CELL: u64 = 8;
const MAX_SAMPLES: u64 = 4096;

/// `Σ_{j=0}^{m} f(a + jh)` with `h = (b - a)/m`, approximated with
/// correction order `n`.
#[derive(Clone)]
pub struct EMJob {
    pub f: Arc<dyn IndexFn>,
    pub a: f64,
    pub b: f64,
    pub m: u64,
    pub n: usize,
}

impl std::fmt::Debug for EMJob {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("EMJob")
            .field("a", &self.a)
            .field("b", &self.b)
            .field("m", &self.m)
            .field("n", &self.n)
            .finish_non_exhaustive()
    }
}

impl EMJob {
    pub fn new(f: Arc<dyn IndexFn>, a: f64, b: f64, m: u64, n: usize) -> Result<Self> {
        if !(b > a) {
            return Err(Error::Precondition(format!("need b > a, got [{a}, {b}]")));
        }
        if m == 0 || n == 0 {
            return Err(Error::Precondition("m and n must be positive".into()));
        }
        if 2 * n > MAX_ORDER {
            return Err(Error::Capability(format!(
                "correction order n = {n} needs derivatives beyond order {MAX_ORDER}"
            )));
        }
        Ok(EMJob { f, a, b, m, n })
    }

    pub fn h(&self) -> f64 {
        (self.b - self.a) / self.m as f64
    }
}

fn derivatives(f: &dyn IndexFn, x: f64, order: usize) -> Result<Jet> {
    let jet = f
        .eval_jet(&Jet::variable(C64::new(x, 0.0), order))
        .ok_or_else(|| Error::Capability("function provides no derivatives".into()))?;
    if !jet.is_finite() {
        return Err(Error::Capability(format!("derivatives are not finite at x = {x}")));
    }
    Ok(jet)
}

/// Runs a cheap pass to learn the magnitude, then integrates to `rel_tol`
/// relative to it (never tighter than `rel_tol` absolute).
fn relative<F>(run: F, rel_tol: f64) -> Result<QuadratureResult>
where
    F: Fn(f64) -> Result<QuadratureResult>,
{
    let rough = run(1e-6)?;
    run(rel_tol * rough.value.norm().max(1.0))
}

fn eval_real(f: &dyn IndexFn, x: f64) -> C64 {
    f.eval(C64::new(x, 0.0))
}

pub fn em_sum(job: &EMJob) -> Result<SumResult> {
    let start = Instant::now();
    let h = job.h();
    let n = job.n;
    let f = job.f.as_ref();

    let integrand = |x: f64| eval_real(f, x);
    let q = relative(|tol| integrate_finite(&integrand, job.a, job.b, &[], QuadOptions::with_tol(tol)), INTEGRAL_TOL)?;

    let da = derivatives(f, job.a, 2 * n - 1)?;
    let db = derivatives(f, job.b, 2 * n - 1)?;

    let mut acc = CompensatedSum::new();
    acc.add(q.value / h);
    acc.add((da.value() + db.value()) * 0.5);
    for k in 1..n {
        let c = bernoulli_f64(2 * k)? / factorial(2 * k) * h.powi(2 * k as i32 - 1);
        acc.add((db.derivative(2 * k - 1) - da.derivative(2 * k - 1)) * c);
    }

    let samples = (job.m * SAMPLES_PER_CELL).min(MAX_SAMPLES);
    let mut max_d = 0.0f64;
    for i in 0..=samples {
        let x = job.a + (job.b - job.a) * i as f64 / samples as f64;
        max_d = max_d.max(derivatives(f, x, 2 * n)?.derivative(2 * n).norm());
    }
    let remainder =
        job.m as f64 * (h.powi(2 * n as i32) * bernoulli_f64(2 * n)? / factorial(2 * n)).abs() * max_d;

    let mut result = SumResult::exact(acc.total(), Method::EulerMaclaurin, remainder + q.abs_error_estimate / h);
    result.diagnostics.nodes_used = q.nodes_used;
    result.diagnostics.converged = q.converged;
    result.diagnostics.truncation_index = Some(job.m);
    Ok(result.timed(start))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tail {
    pub value: C64,
    pub bound: f64,
    pub nodes_used: u64,
}

/// `Σ_{j≥1} f(M + j)` as `∫_M^∞ f - f(M)/2 - Σ_{k<n} B_2k f^(2k-1)(M) / (2k)!`;
/// `bound` is the first omitted correction plus the quadrature error.
pub fn em_tail(f: &dyn IndexFn, m: f64, n: usize) -> Result<Tail> {
    em_tail_with(f, m, n, INTEGRAL_TOL)
}

pub fn em_tail_with(f: &dyn IndexFn, m: f64, n: usize, tol: f64) -> Result<Tail> {
    if n == 0 || 2 * n > MAX_ORDER {
        return Err(Error::Precondition(format!("correction order n = {n} is out of range")));
    }
    let integrand = |t: f64| eval_real(f, m + t);
    let q = relative(|tol| integrate_semi_infinite_with(&integrand, QuadOptions::with_tol(tol)), tol)?;
    if !q.converged || !q.value.is_finite() {
        return Err(Error::Domain(format!(
            "tail integral from {m} did not converge (estimate {}, error {:e})",
            q.value, q.abs_error_estimate
        )));
    }
    let d = derivatives(f, m, 2 * n - 1)?;
    let mut acc = CompensatedSum::new();
    acc.add(q.value);
    acc.add(-d.value() * 0.5);
    for k in 1..n {
        acc.add(-d.derivative(2 * k - 1) * (bernoulli_f64(2 * k)? / factorial(2 * k)));
    }
    let omitted = (d.derivative(2 * n - 1) * (bernoulli_f64(2 * n)? / factorial(2 * n))).norm();
    Ok(Tail {
        value: acc.total(),
        bound: omitted + q.abs_error_estimate,
        nodes_used: q.nodes_used,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::JetFn;
    use crate::special::hurwitz_zeta;
    use std::f64::consts::E;

    fn job<F: Fn(Jet) -> Jet + Send + Sync + 'static>(f: F, a: f64, b: f64, m: u64, n: usize) -> EMJob {
        EMJob::new(Arc::new(JetFn(f)), a, b, m, n).unwrap()
    }

    #[test]
    fn squares() {
        let r = em_sum(&job(|x| x * x, 0.0, 10.0, 10, 2)).unwrap();
        assert!((r.value.re - 385.0).abs() < 1e-10);
        assert_eq!(r.error_estimate.min(1e-9), r.error_estimate);
    }

    #[test]
    fn linear() {
        let r = em_sum(&job(|x| x, 0.0, 5.0, 5, 1)).unwrap();
        assert!((r.value.re - 15.0).abs() < 1e-12);
    }

    #[test]
    fn inverse_square_within_estimate() {
        let r = em_sum(&job(|x| x.powi(-2), 1.0, 10.0, 9, 3)).unwrap();
        let direct: f64 = (1..=10).map(|k| 1.0 / (k * k) as f64).sum();
        assert!((direct - 1.549_767_7).abs() < 1e-7);
        assert!((r.value.re - direct).abs() <= r.error_estimate);
    }

    #[test]
    fn rejects_bad_jobs() {
        let f: Arc<dyn IndexFn> = Arc::new(JetFn(|x: Jet| x));
        assert!(EMJob::new(f.clone(), 1.0, 1.0, 1, 1).is_err());
        assert!(EMJob::new(f.clone(), 0.0, 1.0, 0, 1).is_err());
        assert!(matches!(EMJob::new(f, 0.0, 1.0, 1, 8), Err(Error::Capability(_))));
        let plain = EMJob::new(Arc::new(|z: C64| z), 0.0, 1.0, 1, 1).unwrap();
        assert!(matches!(em_sum(&plain), Err(Error::Capability(_))));
    }

    #[test]
    fn tail_examples() {
        let t = em_tail(&JetFn(|x: Jet| x.powi(-2)), 10.0, 3).unwrap();
        let want = hurwitz_zeta(2.0, 11.0).unwrap();
        assert!((want - 0.095_166_3).abs() < 1e-7);
        assert!((t.value.re - want).abs() <= t.bound);

        let t = em_tail(&JetFn(|x: Jet| (-x).exp()), 0.0, 2).unwrap();
        assert!((t.value.re - 1.0 / (E - 1.0)).abs() <= t.bound);

        let t = em_tail(&JetFn(|x: Jet| x.powi(-4)), 100.0, 2).unwrap();
        assert!(t.value.re > 0.0 && t.value.re < 1.0 / 3e6);
    }

    #[test]
    fn tail_of_non_integrable_function() {
        let r = em_tail(&JetFn(|x: Jet| x.recip()), 10.0, 2);
        assert!(matches!(r, Err(Error::Domain(_))));
    }
}
