//! Finite sums through the Fourier representation
//! `Σ_{k=1}^{N} g(k) = (1/2π) ∫ G(α) D_N(α) dα` with `G(α) = ∫ g(x) e^(-iαx) dx`
//! and the Dirichlet factor `D_N(α) = Σ_{k=1}^{N} e^(iαk)`.

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::expr::{Expr, Expression, Func};
use crate::kernels::{linear_terms, polynomial};
use crate::quadrature::{integrate_real_line_with, QuadOptions};
use crate::series::{CompensatedSum, Method, SumResult};

type C64 = Complex64;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum FourierKernelForm {
    /// `e^(iα(N+1)/2) sin(Nα/2) / sin(α/2)`, equal to the exponential sum.
    #[default]
    Exact,
    /// `sin(Nα/2) / sin(α/2)` without the phase factor.
    Simplified,
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// `D_N(α)` in the requested form, finite at every real `α`.
pub fn dirichlet_factor(alpha: f64, n: u64, form: FourierKernelForm) -> C64 {
    let m = (alpha / (2.0 * PI)).round();
    let delta = alpha - 2.0 * PI * m;
    let nf = n as f64;
    // sin(Nδ/2)/sin(δ/2) written through sinc so that δ → 0 is harmless
    let ratio = nf * sinc(nf * delta / 2.0) / sinc(delta / 2.0);
    match form {
        FourierKernelForm::Exact => C64::from_polar(ratio, delta * (nf + 1.0) / 2.0),
        FourierKernelForm::Simplified => {
            let odd = (m as i64).rem_euclid(2) == 1 && n % 2 == 0;
            C64::new(if odd { -ratio } else { ratio }, 0.0)
        }
    }
}

/// Index functions with an analytic Fourier transform.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FourierPair {
    /// `c e^(-a x²)` ↔ `c √(π/a) e^(-α²/(4a))`
    Gaussian { c: f64, a: f64 },
    /// `c / (x² + a²)` ↔ `c (π/a) e^(-a|α|)`
    Lorentzian { c: f64, a: f64 },
}

impl FourierPair {
    pub fn gaussian(c: f64, a: f64) -> Result<Self> {
        if !(a > 0.0) {
            return Err(Error::Domain(format!("Gaussian width needs a > 0, got {a}")));
        }
        Ok(FourierPair::Gaussian { c, a })
    }

    pub fn lorentzian(c: f64, a: f64) -> Result<Self> {
        if !(a > 0.0) {
            return Err(Error::Domain(format!("Lorentzian needs a > 0, got {a}")));
        }
        Ok(FourierPair::Lorentzian { c, a })
    }

    pub fn name(&self) -> &'static str {
        match self {
            FourierPair::Gaussian { .. } => "gaussian",
            FourierPair::Lorentzian { .. } => "lorentzian",
        }
    }

    pub fn g(&self, x: f64) -> f64 {
        match *self {
            FourierPair::Gaussian { c, a } => c * (-a * x * x).exp(),
            FourierPair::Lorentzian { c, a } => c / (x * x + a * a),
        }
    }

    pub fn transform(&self, alpha: f64) -> f64 {
        match *self {
            FourierPair::Gaussian { c, a } => c * (PI / a).sqrt() * (-alpha * alpha / (4.0 * a)).exp(),
            FourierPair::Lorentzian { c, a } => c * (PI / a) * (-a * alpha.abs()).exp(),
        }
    }

    /// The pair for `x ↦ g(s x)`, `s > 0`.
    pub fn scaled(&self, s: f64) -> Self {
        match *self {
            FourierPair::Gaussian { c, a } => FourierPair::Gaussian { c, a: a * s * s },
            FourierPair::Lorentzian { c, a } => FourierPair::Lorentzian {
                c: c / (s * s),
                a: a / s,
            },
        }
    }

    fn decay_rate(&self) -> f64 {
        match *self {
            FourierPair::Gaussian { a, .. } => 0.5 / a.sqrt(),
            FourierPair::Lorentzian { a, .. } => a,
        }
    }
}

/// A linear combination of table pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierSum {
    pub pairs: Vec<FourierPair>,
}

impl FourierSum {
    pub fn g(&self, x: f64) -> f64 {
        self.pairs.iter().map(|p| p.g(x)).sum()
    }

    pub fn transform(&self, alpha: f64) -> f64 {
        self.pairs.iter().map(|p| p.transform(alpha)).sum()
    }

    pub fn scaled(&self, s: f64) -> Self {
        FourierSum {
            pairs: self.pairs.iter().map(|p| p.scaled(s)).collect(),
        }
    }
}

impl From<FourierPair> for FourierSum {
    fn from(p: FourierPair) -> Self {
        FourierSum { pairs: vec![p] }
    }
}

fn real_const(z: C64) -> Option<f64> {
    (z.im == 0.0 && z.re.is_finite()).then_some(z.re)
}

fn match_term(scale: C64, e: &Expr) -> Option<FourierPair> {
    let scale = real_const(scale)?;
    match e {
        Expr::Call(Func::Exp, arg) => {
            let p = polynomial(arg)?;
            if p.len() != 3 || p[1] != C64::new(0.0, 0.0) {
                return None;
            }
            let u = real_const(p[0])?;
            let a = -real_const(p[2])?;
            FourierPair::gaussian(scale * u.exp(), a).ok()
        }
        Expr::Div(num, den) => {
            let c = real_const(num.const_value()?)?;
            let p = polynomial(den)?;
            if p.len() != 3 || p[1] != C64::new(0.0, 0.0) {
                return None;
            }
            let lead = real_const(p[2])?;
            let a2 = real_const(p[0])? / lead;
            if !(a2 > 0.0) {
                return None;
            }
            FourierPair::lorentzian(scale * c / lead, a2.sqrt()).ok()
        }
        _ => None,
    }
}

/// Matches `expr` against the Gaussian and Lorentzian families (and their
/// linear combinations).
pub fn recognize_fourier_pair(expr: &Expression) -> Result<FourierSum> {
    let unsupported = || {
        Error::Capability(format!(
            "no Fourier pair for `{}`; the table covers c·exp(-a·k^2) and c/(k^2+a^2)",
            expr.text()
        ))
    };
    let mut terms = Vec::new();
    if !linear_terms(expr.root(), C64::new(1.0, 0.0), &mut terms) {
        return Err(unsupported());
    }
    let pairs = terms
        .into_iter()
        .map(|(scale, e)| e.and_then(|e| match_term(scale, e)))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(unsupported)?;
    Ok(FourierSum { pairs })
}

/// `Σ_{k=1}^{N} g(k)` as `(1/2π) ∫ G(α) D_N(α) dα`.
///
/// The imaginary part of the integral is reported as a residual; the result
/// is flagged non-converged when it exceeds `10·tol`.
pub fn sum_via_fourier(pairs: &FourierSum, n: u64, tol: f64) -> Result<SumResult> {
    sum_via_fourier_form(pairs, n, tol, FourierKernelForm::Exact)
}

pub fn sum_via_fourier_form(pairs: &FourierSum, n: u64, tol: f64, form: FourierKernelForm) -> Result<SumResult> {
    let start = Instant::now();
    if n == 0 {
        return Err(Error::Precondition("term count N must be at least 1".into()));
    }
    if pairs.pairs.is_empty() {
        return Err(Error::Capability("empty Fourier pair list".into()));
    }
    let hint = pairs
        .pairs
        .iter()
        .map(FourierPair::decay_rate)
        .fold(f64::INFINITY, f64::min);
    let integrand = |alpha: f64| -> C64 {
        let g = pairs.transform(alpha);
        if g == 0.0 {
            return C64::new(0.0, 0.0);
        }
        dirichlet_factor(alpha, n, form) * g
    };
    let opts = QuadOptions::with_tol(tol * 2.0 * PI);
    let q = integrate_real_line_with(&integrand, opts, Some(hint))?;
    let value = q.value / (2.0 * PI);
    let residual = value.im.abs();
    let mut result = SumResult::exact(C64::new(value.re, 0.0), Method::Fourier, q.abs_error_estimate / (2.0 * PI));
    result.diagnostics.nodes_used = q.nodes_used;
    result.diagnostics.imag_residual = Some(residual);
    result.diagnostics.converged = q.converged && residual <= 10.0 * tol;
    Ok(result.timed(start))
}

/// Direct `Σ_{k=1}^{N} g(k)` of a pair list.
pub fn direct_pair_sum(pairs: &FourierSum, n: u64) -> f64 {
    let acc: CompensatedSum = (1..=n).map(|k| C64::new(pairs.g(k as f64), 0.0)).collect();
    acc.total().re
}
