//! Inverse Laplace transforms `G(t)` as lists of kernel terms, and the
//! catalog of transform pairs recognized in index-function expressions.
//!
//! A kernel is a finite list of Dirac deltas (possibly differentiated, at
//! complex locations) plus smooth terms. Deltas act on a test function by
//! formal analytic substitution:
//! `∫ δ^(m)(t - c) φ(t) dt = (-1)^m φ^(m)(c)`.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::expr::{Expr, Expression, Func};
use crate::jet::{Jet, Scalar};
use crate::quadrature::{integrate_semi_infinite, QuadratureResult};
use crate::series::IndexFn;
use crate::special::gamma_fn;

type C64 = Complex64;

pub const MAX_DELTA_ORDER: u8 = 4;

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// `weight · δ^(order)(t - location)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DeltaTerm {
    pub weight: C64,
    pub location: C64,
    pub order: u8,
}

impl DeltaTerm {
    pub fn new(weight: C64, location: C64, order: u8) -> Result<Self> {
        if order > MAX_DELTA_ORDER {
            return Err(Error::Capability(format!(
                "delta derivative order {order} exceeds {MAX_DELTA_ORDER}"
            )));
        }
        if !(location.re >= 0.0) {
            return Err(Error::Domain(format!(
                "delta location {location} lies outside the closed right half-plane"
            )));
        }
        Ok(DeltaTerm { weight, location, order })
    }

    /// `∫ e^(-kt) w δ^(m)(t - c) dt = w k^m e^(-kc)`.
    pub fn laplace(&self, k: C64) -> C64 {
        self.weight * k.powi(self.order as i32) * (-k * self.location).exp()
    }
}

/// A user-supplied smooth kernel.
#[derive(Clone)]
pub struct CustomKernel {
    pub label: String,
    pub f: Arc<dyn Fn(f64) -> C64 + Send + Sync>,
    /// `c` with `|G(t)| <= poly(t) e^(ct)`.
    pub growth_bound: f64,
    /// `G(0+)`, when finite.
    pub limit_at_zero: Option<C64>,
}

impl fmt::Debug for CustomKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomKernel")
            .field("label", &self.label)
            .field("growth_bound", &self.growth_bound)
            .finish_non_exhaustive()
    }
}

#[derive(Clone, Debug)]
pub enum SmoothShape {
    /// `sin(a t)`
    Sine { a: f64 },
    /// `cos(a t)`
    Cosine { a: f64 },
    /// `t^(s-1) / Γ(s)`, the kernel of `1/k^s`.
    Power { s: f64, inv_gamma: f64 },
    Custom(CustomKernel),
}

#[derive(Clone, Debug)]
pub struct SmoothTerm {
    pub coeff: C64,
    pub shape: SmoothShape,
}

impl SmoothTerm {
    pub fn sine(coeff: C64, a: f64) -> Self {
        SmoothTerm { coeff, shape: SmoothShape::Sine { a } }
    }

    pub fn cosine(coeff: C64, a: f64) -> Self {
        SmoothTerm { coeff, shape: SmoothShape::Cosine { a } }
    }

    pub fn power(coeff: C64, s: f64) -> Result<Self> {
        let inv_gamma = 1.0 / gamma_fn(s)?;
        Ok(SmoothTerm {
            coeff,
            shape: SmoothShape::Power { s, inv_gamma },
        })
    }

    pub fn custom(coeff: C64, kernel: CustomKernel) -> Self {
        SmoothTerm {
            coeff,
            shape: SmoothShape::Custom(kernel),
        }
    }

    pub fn eval(&self, t: f64) -> C64 {
        let g = match &self.shape {
            SmoothShape::Sine { a } => c((a * t).sin()),
            SmoothShape::Cosine { a } => c((a * t).cos()),
            SmoothShape::Power { s, inv_gamma } => {
                if *s == 1.0 {
                    c(*inv_gamma)
                } else {
                    c(t.powf(s - 1.0) * inv_gamma)
                }
            }
            SmoothShape::Custom(k) => (k.f)(t),
        };
        self.coeff * g
    }

    pub fn growth_bound(&self) -> f64 {
        match &self.shape {
            SmoothShape::Custom(k) => k.growth_bound,
            _ => 0.0,
        }
    }

    /// `G(0+)`; `None` when the kernel is unbounded at the origin.
    pub fn limit_at_zero(&self) -> Option<C64> {
        match &self.shape {
            SmoothShape::Sine { .. } => Some(c(0.0)),
            SmoothShape::Cosine { .. } => Some(self.coeff),
            SmoothShape::Power { s, inv_gamma } => match s.partial_cmp(&1.0) {
                Some(std::cmp::Ordering::Greater) => Some(c(0.0)),
                Some(std::cmp::Ordering::Equal) => Some(self.coeff * inv_gamma),
                _ => None,
            },
            SmoothShape::Custom(k) => k.limit_at_zero.map(|v| v * self.coeff),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Kernel {
    pub deltas: Vec<DeltaTerm>,
    pub smooth: Vec<SmoothTerm>,
}

impl Kernel {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn delta(weight: C64, location: C64) -> Result<Self> {
        Ok(Kernel {
            deltas: vec![DeltaTerm::new(weight, location, 0)?],
            smooth: Vec::new(),
        })
    }

    pub fn from_smooth(term: SmoothTerm) -> Self {
        Kernel {
            deltas: Vec::new(),
            smooth: vec![term],
        }
    }

    pub fn push_delta(&mut self, weight: C64, location: C64, order: u8) -> Result<()> {
        self.deltas.push(DeltaTerm::new(weight, location, order)?);
        Ok(())
    }

    pub fn extend(&mut self, other: Kernel) {
        self.deltas.extend(other.deltas);
        self.smooth.extend(other.smooth);
    }

    pub fn growth_bound(&self) -> f64 {
        self.smooth
            .iter()
            .map(SmoothTerm::growth_bound)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn eval_smooth(&self, t: f64) -> C64 {
        self.smooth.iter().map(|s| s.eval(t)).sum()
    }

    pub fn has_smooth(&self) -> bool {
        !self.smooth.is_empty()
    }
}

/// `g(k) = ∫_0^∞ e^(-kt) G(t) dt`, with the smooth part by quadrature.
pub fn laplace_of_kernel_with(kernel: &Kernel, k: C64, tol: f64) -> Result<QuadratureResult> {
    let mut value: C64 = kernel.deltas.iter().map(|d| d.laplace(k)).sum();
    let mut result = QuadratureResult {
        value: c(0.0),
        abs_error_estimate: 0.0,
        nodes_used: 0,
        converged: true,
    };
    if kernel.has_smooth() {
        let bound = kernel.growth_bound();
        if !(k.re > bound) {
            return Err(Error::Domain(format!(
                "Re(k) = {} does not exceed the kernel growth bound {bound}",
                k.re
            )));
        }
        let integrand = |t: f64| -> C64 {
            let w = (-k * t).exp();
            if w == c(0.0) {
                return w;
            }
            let g = kernel.eval_smooth(t);
            if g == c(0.0) {
                g
            } else {
                g * w
            }
        };
        result = integrate_semi_infinite(&integrand, tol)?;
        value += result.value;
    }
    result.value = value;
    Ok(result)
}

pub fn laplace_of_kernel(kernel: &Kernel, k: C64) -> Result<C64> {
    laplace_of_kernel_with(kernel, k, 1e-13).map(|r| r.value)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Trig {
    Sin,
    Cos,
}

/// Families of index functions with a known kernel.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PairKind {
    /// `k^m e^(-βk) [1 | sin θk | cos θk]`, realized by derivative-order-m
    /// deltas at `β` or `β ∓ iθ`.
    Delta {
        decay: C64,
        trig: Option<(Trig, f64)>,
        k_power: u8,
    },
    /// `1 / (k² + a²)` ↔ `sin(at) / a`
    RationalSine { a: f64 },
    /// `k / (k² + a²)` ↔ `cos(at)`
    RationalCosine { a: f64 },
    /// `1 / k^s` ↔ `t^(s-1) / Γ(s)`
    InversePower { s: f64 },
}

/// One catalog pair with bound parameters: `coeff · g(k)` and its kernel.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransformPair {
    pub coeff: C64,
    pub kind: PairKind,
}

impl TransformPair {
    pub fn name(&self) -> &'static str {
        match self.kind {
            PairKind::Delta { trig, k_power, decay } => {
                let decays = decay != c(0.0);
                match (trig, k_power > 0, decays) {
                    (None, false, _) => "exponential",
                    (None, true, _) => "index-exponential",
                    (Some((Trig::Sin, _)), false, false) => "sine",
                    (Some((Trig::Cos, _)), false, false) => "cosine",
                    (Some((Trig::Sin, _)), false, true) => "exp-sine",
                    (Some((Trig::Cos, _)), false, true) => "exp-cosine",
                    (Some((Trig::Sin, _)), true, _) => "index-sine",
                    (Some((Trig::Cos, _)), true, _) => "index-cosine",
                }
            }
            PairKind::RationalSine { .. } => "rational-sine",
            PairKind::RationalCosine { .. } => "rational-cosine",
            PairKind::InversePower { .. } => "inverse-power",
        }
    }

    pub fn is_delta(&self) -> bool {
        matches!(self.kind, PairKind::Delta { .. })
    }

    pub fn build_kernel(&self) -> Result<Kernel> {
        let w = self.coeff;
        match self.kind {
            PairKind::Delta { decay, trig, k_power } => {
                let mut kernel = Kernel::new();
                match trig {
                    None => kernel.push_delta(w, decay, k_power)?,
                    Some((Trig::Cos, theta)) => {
                        kernel.push_delta(w * 0.5, decay - C64::i() * theta, k_power)?;
                        kernel.push_delta(w * 0.5, decay + C64::i() * theta, k_power)?;
                    }
                    Some((Trig::Sin, theta)) => {
                        let half = w / (C64::i() * 2.0);
                        kernel.push_delta(half, decay - C64::i() * theta, k_power)?;
                        kernel.push_delta(-half, decay + C64::i() * theta, k_power)?;
                    }
                }
                Ok(kernel)
            }
            PairKind::RationalSine { a } => Ok(Kernel::from_smooth(SmoothTerm::sine(w / a, a))),
            PairKind::RationalCosine { a } => Ok(Kernel::from_smooth(SmoothTerm::cosine(w, a))),
            PairKind::InversePower { s } => Ok(Kernel::from_smooth(SmoothTerm::power(w, s)?)),
        }
    }

    /// `coeff · g(k)` evaluated over plain values or jets.
    pub fn eval_g<S: Scalar>(&self, k: S) -> S {
        let lift = |z: C64| S::lift(z, &k);
        let g = match self.kind {
            PairKind::Delta { decay, trig, k_power } => {
                let mut g = (-(k * lift(decay))).exp();
                match trig {
                    None => {}
                    Some((Trig::Sin, theta)) => g = g * (k * lift(c(theta))).sin(),
                    Some((Trig::Cos, theta)) => g = g * (k * lift(c(theta))).cos(),
                }
                if k_power > 0 {
                    g = g * k.powi(k_power as i32);
                }
                g
            }
            PairKind::RationalSine { a } => (k * k + lift(c(a * a))).powi(-1),
            PairKind::RationalCosine { a } => k / (k * k + lift(c(a * a))),
            PairKind::InversePower { s } => k.powc(&lift(c(-s))),
        };
        g * lift(self.coeff)
    }
}

impl IndexFn for TransformPair {
    fn eval(&self, z: C64) -> C64 {
        self.eval_g(z)
    }
    fn eval_jet(&self, z: &Jet) -> Option<Jet> {
        Some(self.eval_g(*z))
    }
}

/// An expression decomposed into a linear combination of catalog pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct Recognized {
    pub source: String,
    pub pairs: Vec<TransformPair>,
}

impl Recognized {
    pub fn kernel(&self) -> Result<Kernel> {
        let mut kernel = Kernel::new();
        for p in &self.pairs {
            kernel.extend(p.build_kernel()?);
        }
        Ok(kernel)
    }

    pub fn is_delta_only(&self) -> bool {
        self.pairs.iter().all(TransformPair::is_delta)
    }
}

impl IndexFn for Recognized {
    fn eval(&self, z: C64) -> C64 {
        self.pairs.iter().map(|p| p.eval_g(z)).sum()
    }
    fn eval_jet(&self, z: &Jet) -> Option<Jet> {
        let mut acc = Jet::constant(c(0.0), z.order());
        for p in &self.pairs {
            acc = acc + p.eval_g(*z);
        }
        Some(acc)
    }
}

/// Splits an expression into `(coefficient, subexpression)` summands.
pub(crate) fn linear_terms<'a>(e: &'a Expr, scale: C64, out: &mut Vec<(C64, Option<&'a Expr>)>) -> bool {
    if let Some(v) = e.const_value() {
        out.push((scale * v, None));
        return true;
    }
    match e {
        Expr::Add(a, b) => linear_terms(a, scale, out) && linear_terms(b, scale, out),
        Expr::Sub(a, b) => linear_terms(a, scale, out) && linear_terms(b, -scale, out),
        Expr::Neg(a) => linear_terms(a, -scale, out),
        Expr::Mul(a, b) => match (a.const_value(), b.const_value()) {
            (Some(v), _) if v.is_finite() => linear_terms(b, scale * v, out),
            (_, Some(v)) if v.is_finite() => linear_terms(a, scale * v, out),
            _ => {
                out.push((scale, Some(e)));
                true
            }
        },
        Expr::Div(a, b) => match b.const_value() {
            Some(v) if v != c(0.0) && v.is_finite() => linear_terms(a, scale / v, out),
            _ => {
                out.push((scale, Some(e)));
                true
            }
        },
        _ => {
            out.push((scale, Some(e)));
            true
        }
    }
}

/// Polynomial coefficients (low to high, degree ≤ 4) of a subtree.
pub(crate) fn polynomial(e: &Expr) -> Option<Vec<C64>> {
    const MAX_DEG: usize = 4;
    if let Some(v) = e.const_value() {
        return Some(vec![v]);
    }
    let add = |a: Vec<C64>, b: Vec<C64>, sign: f64| {
        let n = a.len().max(b.len());
        (0..n)
            .map(|i| a.get(i).copied().unwrap_or_default() + b.get(i).copied().unwrap_or_default() * sign)
            .collect::<Vec<_>>()
    };
    let mul = |a: &[C64], b: &[C64]| -> Option<Vec<C64>> {
        if a.len() + b.len() - 2 > MAX_DEG {
            return None;
        }
        let mut out = vec![c(0.0); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        Some(out)
    };
    match e {
        Expr::Var => Some(vec![c(0.0), c(1.0)]),
        Expr::Neg(a) => Some(polynomial(a)?.into_iter().map(|x| -x).collect()),
        Expr::Add(a, b) => Some(add(polynomial(a)?, polynomial(b)?, 1.0)),
        Expr::Sub(a, b) => Some(add(polynomial(a)?, polynomial(b)?, -1.0)),
        Expr::Mul(a, b) => mul(&polynomial(a)?, &polynomial(b)?),
        Expr::Div(a, b) => {
            let d = b.const_value()?;
            Some(polynomial(a)?.into_iter().map(|x| x / d).collect())
        }
        Expr::Pow(a, b) => {
            let n = b.const_value().and_then(crate::jet::as_small_integer)?;
            if !(0..=MAX_DEG as i32).contains(&n) {
                return None;
            }
            let base = polynomial(a)?;
            let mut acc = vec![c(1.0)];
            for _ in 0..n {
                acc = mul(&acc, &base)?;
            }
            Some(acc)
        }
        _ => None,
    }
}

/// `u + v k` for a subtree linear in `k`.
fn linear(e: &Expr) -> Option<(C64, C64)> {
    let p = polynomial(e)?;
    if p.iter().skip(2).any(|x| *x != c(0.0)) {
        return None;
    }
    Some((p[0], p.get(1).copied().unwrap_or_default()))
}

/// Multiplicative factors of one summand.
#[derive(Debug, Default)]
struct Factors {
    coeff: C64,
    k_power: f64,
    exp_rate: C64,
    trig: Option<(Trig, f64)>,
    /// `a²` of a `(k² + a²)^(-1)` factor.
    quad: Option<f64>,
}

impl Factors {
    fn absorb(&mut self, e: &Expr, power: i32) -> bool {
        if let Some(v) = e.const_value() {
            if !v.is_finite() || v == c(0.0) && power < 0 {
                return false;
            }
            self.coeff *= v.powi(power);
            return true;
        }
        match e {
            Expr::Var => {
                self.k_power += power as f64;
                true
            }
            Expr::Mul(a, b) => self.absorb(a, power) && self.absorb(b, power),
            Expr::Div(a, b) => self.absorb(a, power) && self.absorb(b, -power),
            Expr::Neg(a) => {
                self.coeff = -self.coeff;
                self.absorb(a, power)
            }
            Expr::Pow(base, exp) => {
                let Some(p) = exp.const_value() else { return false };
                if p.im != 0.0 {
                    return false;
                }
                if matches!(**base, Expr::Var) {
                    self.k_power += p.re * power as f64;
                    return true;
                }
                match crate::jet::as_small_integer(p) {
                    Some(n) if n != 0 => self.absorb(base, power * n),
                    _ => false,
                }
            }
            Expr::Call(Func::Sqrt, arg) if matches!(**arg, Expr::Var) => {
                self.k_power += 0.5 * power as f64;
                true
            }
            Expr::Call(Func::Exp, arg) => {
                let Some((u, v)) = linear(arg) else { return false };
                self.coeff *= (u * power as f64).exp();
                self.exp_rate += v * power as f64;
                true
            }
            Expr::Call(f @ (Func::Sin | Func::Cos), arg) => {
                let Some((u, v)) = linear(arg) else { return false };
                if power != 1 || self.trig.is_some() || u != c(0.0) || v.im != 0.0 {
                    return false;
                }
                let trig = if *f == Func::Sin { Trig::Sin } else { Trig::Cos };
                self.trig = Some((trig, v.re));
                true
            }
            Expr::Add(..) | Expr::Sub(..) => {
                let Some(p) = polynomial(e) else { return false };
                // lead·(k² + q) with q > 0
                if power != -1 || self.quad.is_some() || p.len() != 3 || p[1] != c(0.0) || p[2] == c(0.0) {
                    return false;
                }
                let q = p[0] / p[2];
                if q.im != 0.0 || !(q.re > 0.0) {
                    return false;
                }
                self.coeff /= p[2];
                self.quad = Some(q.re);
                true
            }
            _ => false,
        }
    }

    fn classify(self) -> Option<TransformPair> {
        let coeff = self.coeff;
        let kind = if let Some(a2) = self.quad {
            if self.trig.is_some() || self.exp_rate != c(0.0) {
                return None;
            }
            let a = a2.sqrt();
            match self.k_power {
                p if p == 0.0 => PairKind::RationalSine { a },
                p if p == 1.0 => PairKind::RationalCosine { a },
                _ => return None,
            }
        } else if self.k_power < 0.0 {
            if self.trig.is_some() || self.exp_rate != c(0.0) {
                return None;
            }
            PairKind::InversePower { s: -self.k_power }
        } else {
            let m = self.k_power;
            if m.fract() != 0.0 || m > MAX_DELTA_ORDER as f64 {
                return None;
            }
            let decay = -self.exp_rate;
            if decay.re < 0.0 {
                return None;
            }
            PairKind::Delta {
                decay,
                trig: self.trig,
                k_power: m as u8,
            }
        };
        Some(TransformPair { coeff, kind })
    }
}

/// Decomposes `expr` into a linear combination of catalog pairs.
///
/// Recognized families: `e^(-ak)`, `sin θk`, `cos θk`, their products with
/// `e^(-βk)` and with integer powers `k^m` (m ≤ 4), `1/(k² + a²)`,
/// `k/(k² + a²)` and `1/k^s`, each with a constant factor.
pub fn recognize_pair(expr: &Expression) -> Result<Recognized> {
    let fail = || Error::Recognition {
        expr: expr.text().to_string(),
    };
    let mut terms = Vec::new();
    if !linear_terms(expr.root(), c(1.0), &mut terms) {
        return Err(fail());
    }
    let mut pairs = Vec::with_capacity(terms.len());
    for (scale, term) in terms {
        let mut f = Factors {
            coeff: scale,
            ..Factors::default()
        };
        if let Some(t) = term {
            if !f.absorb(t, 1) {
                return Err(fail());
            }
        }
        pairs.push(f.classify().ok_or_else(fail)?);
    }
    Ok(Recognized {
        source: expr.text().to_string(),
        pairs,
    })
}
