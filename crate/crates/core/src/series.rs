//! Series specifications, the compensated direct-summation oracle and the
//! antidifference method.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::jet::Jet;

type C64 = Complex64;

/// An index function `g`, evaluable on the complex plane.
///
/// Telescoping and Euler-Maclaurin evaluate `g` off the integer grid and need
/// its derivatives; implementors that can propagate a [`Jet`] return
/// `Some` from [`IndexFn::eval_jet`].
pub trait IndexFn: Send + Sync {
    fn eval(&self, z: C64) -> C64;

    fn eval_jet(&self, _z: &Jet) -> Option<Jet> {
        None
    }
}

impl<F> IndexFn for F
where
    F: Fn(C64) -> C64 + Send + Sync,
{
    fn eval(&self, z: C64) -> C64 {
        self(z)
    }
}

/// Wraps a closure written over jets; it provides both values and
/// derivatives.
pub struct JetFn<F>(pub F);

impl<F> IndexFn for JetFn<F>
where
    F: Fn(Jet) -> Jet + Send + Sync,
{
    fn eval(&self, z: C64) -> C64 {
        (self.0)(Jet::constant(z, 0)).value()
    }

    fn eval_jet(&self, z: &Jet) -> Option<Jet> {
        Some((self.0)(*z))
    }
}

impl<T: IndexFn + ?Sized> IndexFn for Arc<T> {
    fn eval(&self, z: C64) -> C64 {
        (**self).eval(z)
    }
    fn eval_jet(&self, z: &Jet) -> Option<Jet> {
        (**self).eval_jet(z)
    }
}

/// How the terms of a series are weighted and shifted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    /// `Σ g(αk)`
    Standard,
    /// `Σ (-1)^(k+1) g(αk)`, even `N` only.
    Alternating,
    /// `Σ g(αk + β)`
    Shifted,
    /// `Σ (-1)^(k+1) g(αk + β)`, even `N` only.
    ShiftedAlternating,
    /// `Σ e^(-βk) g(αk)`, `Re β > 0`.
    ExpFactor,
    /// `Σ (-1)^(k+1) e^(-βk) g(αk)`, even `N`, `Re β > 0`.
    ExpFactorAlternating,
}

impl Variant {
    pub const ALL: [Variant; 6] = [
        Variant::Standard,
        Variant::Alternating,
        Variant::Shifted,
        Variant::ShiftedAlternating,
        Variant::ExpFactor,
        Variant::ExpFactorAlternating,
    ];

    pub fn is_alternating(self) -> bool {
        matches!(
            self,
            Variant::Alternating | Variant::ShiftedAlternating | Variant::ExpFactorAlternating
        )
    }

    pub fn is_shifted(self) -> bool {
        matches!(self, Variant::Shifted | Variant::ShiftedAlternating)
    }

    pub fn is_exp_factor(self) -> bool {
        matches!(self, Variant::ExpFactor | Variant::ExpFactorAlternating)
    }

    /// Weight `w_k` multiplying the k-th term.
    pub fn weight(self, k: u64, beta: C64) -> C64 {
        let sign = if self.is_alternating() && k % 2 == 0 {
            -1.0
        } else {
            1.0
        };
        if self.is_exp_factor() {
            (-beta * k as f64).exp() * sign
        } else {
            C64::new(sign, 0.0)
        }
    }

    /// Shift added to the argument `αk`.
    pub fn shift(self, beta: C64) -> C64 {
        if self.is_shifted() {
            beta
        } else {
            C64::new(0.0, 0.0)
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Variant::Standard => "standard",
            Variant::Alternating => "alternating",
            Variant::Shifted => "shifted",
            Variant::ShiftedAlternating => "shifted-alternating",
            Variant::ExpFactor => "exp-factor",
            Variant::ExpFactorAlternating => "exp-factor-alternating",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Variant::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown variant `{s}`")))
    }
}

/// Checks the structural requirements shared by every variant-aware method.
pub(crate) fn check_variant(variant: Variant, n: u64, beta: C64) -> Result<()> {
    if n == 0 {
        return Err(Error::Precondition("term count N must be at least 1".into()));
    }
    if variant.is_alternating() && n % 2 != 0 {
        return Err(Error::Precondition(format!(
            "{variant} series require an even N, got N = {n}"
        )));
    }
    if variant.is_exp_factor() && !(beta.re > 0.0) {
        return Err(Error::Precondition(format!(
            "{variant} series require Re(beta) > 0, got {beta}"
        )));
    }
    Ok(())
}

/// A finite series `Σ_{k=1}^{N} w_k g(αk + shift)`.
#[derive(Clone)]
pub struct SeriesSpec {
    pub g: Arc<dyn IndexFn>,
    pub n: u64,
    pub alpha: C64,
    pub variant: Variant,
    pub beta: C64,
}

impl fmt::Debug for SeriesSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SeriesSpec")
            .field("n", &self.n)
            .field("alpha", &self.alpha)
            .field("variant", &self.variant)
            .field("beta", &self.beta)
            .finish_non_exhaustive()
    }
}

impl SeriesSpec {
    pub fn new(g: Arc<dyn IndexFn>, n: u64) -> Self {
        SeriesSpec {
            g,
            n,
            alpha: C64::new(1.0, 0.0),
            variant: Variant::Standard,
            beta: C64::new(0.0, 0.0),
        }
    }

    pub fn from_fn<F: IndexFn + 'static>(g: F, n: u64) -> Self {
        Self::new(Arc::new(g), n)
    }

    pub fn with_alpha(mut self, alpha: C64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_variant(mut self, variant: Variant, beta: C64) -> Self {
        self.variant = variant;
        self.beta = beta;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha.re > 0.0) {
            return Err(Error::Precondition(format!(
                "Re(alpha) must be positive, got {}",
                self.alpha
            )));
        }
        check_variant(self.variant, self.n, self.beta)
    }

    /// The argument at which `g` is sampled for term `k`.
    pub fn argument(&self, k: u64) -> C64 {
        self.alpha * k as f64 + self.variant.shift(self.beta)
    }

    pub fn weight(&self, k: u64) -> C64 {
        self.variant.weight(k, self.beta)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Oracle,
    Antidifference,
    Laplace,
    Fourier,
    Telescope,
    EulerMaclaurin,
    ClosedForm,
    ZetaExpansion,
    ZetaPower,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Oracle => "oracle",
            Method::Antidifference => "antidifference",
            Method::Laplace => "laplace",
            Method::Fourier => "fourier",
            Method::Telescope => "telescope",
            Method::EulerMaclaurin => "euler-maclaurin",
            Method::ClosedForm => "closed-form",
            Method::ZetaExpansion => "zeta-expansion",
            Method::ZetaPower => "zeta-power",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Diagnostics {
    pub nodes_used: u64,
    /// Number of explicitly summed terms before a tail estimate, or the
    /// index at which divergence was detected.
    pub truncation_index: Option<u64>,
    pub divergent: bool,
    pub converged: bool,
    pub runtime_ns: u64,
    /// Imaginary part left over when a real sum is computed through a
    /// complex integral.
    pub imag_residual: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SumResult {
    pub value: C64,
    pub method: Method,
    pub error_estimate: f64,
    pub diagnostics: Diagnostics,
}

impl SumResult {
    pub(crate) fn exact(value: C64, method: Method, error_estimate: f64) -> Self {
        SumResult {
            value,
            method,
            error_estimate,
            diagnostics: Diagnostics {
                converged: true,
                ..Diagnostics::default()
            },
        }
    }

    /// A result is authoritative when it converged and no divergence was seen.
    pub fn is_authoritative(&self) -> bool {
        self.diagnostics.converged && !self.diagnostics.divergent
    }

    pub(crate) fn timed(mut self, start: std::time::Instant) -> Self {
        self.diagnostics.runtime_ns = start.elapsed().as_nanos() as u64;
        self
    }
}

/// Compensated (Neumaier) accumulator for complex values.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    re: Neumaier,
    im: Neumaier,
    abs_total: f64,
    count: u64,
}

#[derive(Clone, Copy, Debug, Default)]
struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, z: C64) {
        self.re.add(z.re);
        self.im.add(z.im);
        self.abs_total += z.norm();
        self.count += 1;
    }

    pub fn total(&self) -> C64 {
        C64::new(self.re.total(), self.im.total())
    }

    /// Bound on the accumulated rounding error of [`CompensatedSum::total`].
    pub fn error_bound(&self) -> f64 {
        let eps = f64::EPSILON;
        2.0 * eps * self.total().norm() + self.count as f64 * eps * eps * self.abs_total
    }
}

impl Extend<C64> for CompensatedSum {
    fn extend<I: IntoIterator<Item = C64>>(&mut self, iter: I) {
        for z in iter {
            self.add(z);
        }
    }
}

impl FromIterator<C64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = C64>>(iter: I) -> Self {
        let mut s = CompensatedSum::new();
        s.extend(iter);
        s
    }
}

/// The direct-summation oracle every other method is judged against.
pub fn direct_sum(spec: &SeriesSpec) -> Result<SumResult> {
    let start = std::time::Instant::now();
    spec.validate()?;
    let mut acc = CompensatedSum::new();
    for k in 1..=spec.n {
        let term = spec.weight(k) * spec.g.eval(spec.argument(k));
        if !term.is_finite() {
            return Err(Error::eval_at(
                format!("k = {k}"),
                format!("non-finite term {term}"),
            ));
        }
        acc.add(term);
    }
    let mut result = SumResult::exact(acc.total(), Method::Oracle, acc.error_bound());
    result.diagnostics.truncation_index = Some(spec.n);
    Ok(result.timed(start))
}

/// Sums `f(k) = u(k+1) - u(k)` over `k = 1..N` as `u(N+1) - u(1)`.
pub fn antidifference_sum(u: &dyn IndexFn, n: u64) -> Result<C64> {
    if n == 0 {
        return Err(Error::Precondition("term count N must be at least 1".into()));
    }
    let lo = u.eval(C64::new(1.0, 0.0));
    let hi = u.eval(C64::new(n as f64 + 1.0, 0.0));
    if !lo.is_finite() {
        return Err(Error::eval_at("k = 1", format!("u is not finite: {lo}")));
    }
    if !hi.is_finite() {
        return Err(Error::eval_at(
            format!("k = {}", n + 1),
            format!("u is not finite: {hi}"),
        ));
    }
    Ok(hi - lo)
}
