//! Finite sums through the Laplace integral representation
//! `Σ w_k g(αk + s) = ∫_0^∞ G(t) Φ(t) dt`, where `g` is the Laplace transform
//! of `G` and `Φ` collects the geometric sum over `k`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::jet::{Jet, MAX_ORDER};
use crate::kernels::Kernel;
use crate::quadrature::{integrate_semi_infinite_with, QuadOptions};
use crate::series::{check_variant, CompensatedSum, Method, SeriesSpec, SumResult, Variant};
use crate::special::{bernoulli_f64, factorial, riemann_zeta};

type C64 = Complex64;

const ONE: C64 = C64::new(1.0, 0.0);
const ZERO: C64 = C64::new(0.0, 0.0);

/// Below this `|z|` the geometric sum is expanded around its removable point.
const SERIES_RADIUS: f64 = 0.5;
const BERNOULLI_TERMS: usize = 40;

fn horner(coeffs: &[C64], z: &Jet) -> Jet {
    let mut acc = Jet::constant(coeffs[coeffs.len() - 1], z.order());
    for c in coeffs.iter().rev().skip(1) {
        acc = acc * *z + *c;
    }
    acc
}

/// `z / (e^z - 1) = Σ B_n z^n / n!`, convergent for `|z| < 2π`.
fn bernoulli_generating(z: &Jet) -> Jet {
    let coeffs: Vec<C64> = (0..BERNOULLI_TERMS)
        .map(|n| C64::new(bernoulli_f64(n).unwrap_or(0.0) / factorial(n), 0.0))
        .collect();
    horner(&coeffs, z)
}

/// `(1 - e^(-w)) / w = Σ (-w)^j / (j+1)!`.
fn one_minus_exp_over(w: &Jet) -> Jet {
    let coeffs: Vec<C64> = (0..30)
        .map(|j| C64::new((-1f64).powi(j as i32) / factorial(j + 1), 0.0))
        .collect();
    horner(&coeffs, w)
}

/// `Σ_{k=1}^{N} e^(-kz)` for `z` with `|z|` not far from the origin or with
/// the imaginary part already reduced.
fn geometric_core(z: Jet, n: u64) -> Jet {
    let z0 = z.value();
    let nf = C64::new(n as f64, 0.0);
    if z0.norm() < SERIES_RADIUS {
        // [(1 - e^(-Nz)) / z] · [z / (e^z - 1)], both factors entire near 0
        let w = z * nf;
        let a = if w.value().norm() <= 2.0 {
            one_minus_exp_over(&w) * nf
        } else {
            -(-w).expm1() / z
        };
        a * bernoulli_generating(&z)
    } else if z0.re > SERIES_RADIUS {
        let e = (-z).exp();
        e * -(-(z * nf)).expm1() / -(-z).expm1()
    } else {
        -(-(z * nf)).expm1() / z.expm1()
    }
}

/// `π - PI`, the part of π below double precision.
const PI_LO: f64 = 1.2246467991473532e-16;

/// The integer `j` of the requested parity with `jπ` nearest to `im`.
fn nearest_multiple(im: f64, odd: bool) -> f64 {
    let offset = if odd { PI } else { 0.0 };
    2.0 * ((im - offset) / (2.0 * PI)).round() + odd as u8 as f64
}

/// `z - ijπ`, subtracting `jπ` in two pieces so the reduced imaginary part
/// keeps its relative accuracy.
fn minus_pi_multiple(z: Jet, j: f64) -> Jet {
    if j == 0.0 {
        return z;
    }
    let mut c: Vec<C64> = (0..=z.order()).map(|i| z.coeff(i)).collect();
    c[0].im = (-j).mul_add(PI, c[0].im) - j * PI_LO;
    Jet::from_coeffs(&c)
}

/// `Σ_{k=1}^{N} e^(-kz)`, an entire function of `z`.
pub fn geometric_sum_jet(z: Jet, n: u64) -> Jet {
    let j = nearest_multiple(z.value().im, false);
    geometric_core(minus_pi_multiple(z, j), n)
}

/// `Σ_{k=1}^{N} (-1)^(k+1) e^(-kz)`.
pub fn alternating_sum_jet(z: Jet, n: u64) -> Jet {
    let reduced = minus_pi_multiple(z, nearest_multiple(z.value().im, true));
    if reduced.value().norm() < SERIES_RADIUS {
        // e^(-k(z' + iπ)) = (-1)^k e^(-kz')
        return -geometric_core(reduced, n);
    }
    let z = minus_pi_multiple(z, nearest_multiple(z.value().im, false));
    let nf = C64::new(n as f64, 0.0);
    if n % 2 == 0 {
        let num = -(-(z * nf)).expm1();
        if z.value().re > SERIES_RADIUS {
            let e = (-z).exp();
            e * num / (e + ONE)
        } else {
            num / (z.exp() + ONE)
        }
    } else {
        // odd N leaves one extra positive term
        let num = (-(z * nf)).exp() + ONE;
        if z.value().re > SERIES_RADIUS {
            let e = (-z).exp();
            e * num / (e + ONE)
        } else {
            num / (z.exp() + ONE)
        }
    }
}

pub fn geometric_sum(z: C64, n: u64) -> C64 {
    geometric_sum_jet(Jet::constant(z, 0), n).value()
}

/// The weight function `Φ(t) = Σ_k w_k e^(-(αk + s) t)` of one variant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VariantKernel {
    pub variant: Variant,
    pub alpha: C64,
    pub beta: C64,
    pub n: u64,
}

impl VariantKernel {
    pub fn new(variant: Variant, alpha: C64, beta: C64, n: u64) -> Result<Self> {
        check_variant(variant, n, beta)?;
        Ok(VariantKernel { variant, alpha, beta, n })
    }

    pub fn standard(alpha: C64, n: u64) -> Result<Self> {
        Self::new(Variant::Standard, alpha, ZERO, n)
    }

    pub fn from_spec(spec: &SeriesSpec) -> Result<Self> {
        Self::new(spec.variant, spec.alpha, spec.beta, spec.n)
    }

    /// Taylor jet of `Φ` at `t0` up to `order`.
    pub fn phi_jet(&self, t0: C64, order: usize) -> Result<Jet> {
        if order > MAX_ORDER {
            return Err(Error::Capability(format!(
                "derivative order {order} exceeds {MAX_ORDER}"
            )));
        }
        let t = Jet::variable(t0, order);
        let mut z = t * self.alpha;
        if self.variant.is_exp_factor() {
            z = z + self.beta;
        }
        let mut phi = if self.variant.is_alternating() {
            alternating_sum_jet(z, self.n)
        } else {
            geometric_sum_jet(z, self.n)
        };
        if self.variant.is_shifted() {
            phi = phi * (-(t * self.beta)).exp();
        }
        if !phi.is_finite() {
            return Err(Error::eval_at(
                format!("t = {t0}"),
                format!("{} kernel is not finite", self.variant),
            ));
        }
        Ok(phi)
    }

    pub fn phi(&self, t: C64) -> Result<C64> {
        self.phi_jet(t, 0).map(|j| j.value())
    }

    pub fn phi_derivative(&self, t: C64, order: usize) -> Result<C64> {
        self.phi_jet(t, order).map(|j| j.derivative(order))
    }

    /// Exponential rate at which `Φ(t)` decays for large real `t`.
    fn decay_rate(&self) -> f64 {
        let shift = if self.variant.is_shifted() { self.beta.re } else { 0.0 };
        self.alpha.re + shift
    }
}

/// Evaluates `spec` through `∫ G(t) Φ(t) dt`, where `kernel` is the inverse
/// transform of `spec.g`.
///
/// Delta terms are applied in closed form; smooth terms go through
/// semi-infinite quadrature with absolute tolerance `tol`.
pub fn sum_via_integral(spec: &SeriesSpec, kernel: &Kernel, tol: f64) -> Result<SumResult> {
    sum_via_integral_with(spec, kernel, QuadOptions::with_tol(tol))
}

pub fn sum_via_integral_with(spec: &SeriesSpec, kernel: &Kernel, opts: QuadOptions) -> Result<SumResult> {
    let start = Instant::now();
    spec.validate()?;
    let vk = VariantKernel::from_spec(spec)?;

    let mut acc = CompensatedSum::new();
    for d in &kernel.deltas {
        let m = d.order as usize;
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        acc.add(d.weight * vk.phi_derivative(d.location, m)? * sign);
    }

    let mut result = SumResult::exact(ZERO, Method::Laplace, 0.0);
    if kernel.has_smooth() {
        let bound = kernel.growth_bound();
        if !(vk.decay_rate() > bound) {
            return Err(Error::Domain(format!(
                "kernel growth bound {bound} is not below the decay rate {} of the series kernel",
                vk.decay_rate()
            )));
        }
        let phi0 = vk.phi(ZERO)?;
        let g0: Option<C64> = kernel
            .smooth
            .iter()
            .map(|s| s.limit_at_zero())
            .sum();
        let integrand = |t: f64| -> C64 {
            if t == 0.0 {
                return g0.map_or(ZERO, |g| g * phi0);
            }
            let phi = vk.phi(C64::new(t, 0.0)).unwrap_or(C64::new(f64::NAN, 0.0));
            if phi == ZERO {
                return ZERO;
            }
            kernel.eval_smooth(t) * phi
        };
        let q = integrate_semi_infinite_with(&integrand, opts)?;
        acc.add(q.value);
        result.error_estimate = q.abs_error_estimate;
        result.diagnostics.nodes_used = q.nodes_used;
        result.diagnostics.converged = q.converged;
    }
    result.value = acc.total();
    result.error_estimate += acc.error_bound();
    Ok(result.timed(start))
}

/// `Σ_{k=1}^{N} w_k G(x/k) / k` for a smooth kernel, with the variant weights
/// of the type-B family.
pub fn type_b_sum(kernel: &Kernel, x: f64, n: u64, variant: Variant, beta: C64) -> Result<C64> {
    check_variant(variant, n, beta)?;
    if !kernel.deltas.is_empty() {
        return Err(Error::Capability(
            "type-B sums of delta kernels are distributions; use delta_type_b".into(),
        ));
    }
    if !(x > 0.0) {
        return Err(Error::Domain(format!("type-B sums need x > 0, got {x}")));
    }
    let mut acc = CompensatedSum::new();
    for k in 1..=n {
        let kf = k as f64;
        let mut w = C64::new(if variant.is_alternating() && k % 2 == 0 { -1.0 } else { 1.0 }, 0.0);
        if variant.is_shifted() {
            w *= (beta * (x / kf)).exp();
        }
        if variant.is_exp_factor() {
            w *= (-beta * kf).exp();
        }
        let term = w * kernel.eval_smooth(x / kf) / kf;
        if !term.is_finite() {
            return Err(Error::eval_at(format!("k = {k}"), format!("non-finite term {term}")));
        }
        acc.add(term);
    }
    Ok(acc.total())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Atom {
    pub weight: f64,
    pub location: f64,
}

/// A finite train of weighted Dirac deltas on the positive axis.
#[derive(Clone, Debug, PartialEq)]
pub struct DeltaComb {
    atoms: Vec<Atom>,
}

impl DeltaComb {
    pub fn new(atoms: Vec<Atom>) -> Result<Self> {
        for a in &atoms {
            if !a.weight.is_finite() || !(a.location > 0.0) {
                return Err(Error::Domain(format!("invalid atom {a:?}")));
            }
        }
        if atoms.windows(2).any(|w| !(w[0].location < w[1].location)) {
            return Err(Error::Domain("atom locations must be strictly increasing".into()));
        }
        Ok(DeltaComb { atoms })
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    /// `Σ weight · e^(-α · location)`.
    pub fn laplace(&self, alpha: C64) -> C64 {
        self.atoms
            .iter()
            .map(|a| (-alpha * a.location).exp() * a.weight)
            .sum()
    }
}

/// The delta train whose Laplace transform is `Σ_{n=1}^{N} e^(-naα)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DeltaTypeB {
    pub a: f64,
    pub n: u64,
    pub comb: DeltaComb,
}

impl DeltaTypeB {
    /// `(1 - e^(-αNa)) / (e^(aα) - 1)`.
    pub fn closed_form(&self, alpha: C64) -> C64 {
        geometric_sum(alpha * self.a, self.n)
    }
}

/// Builds the delta train as the difference of the infinite train at `n·a`
/// and its copy starting at `(N+1)·a`, so the atoms beyond `N` cancel.
pub fn delta_type_b(a: f64, n: u64) -> Result<DeltaTypeB> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::Precondition(format!("a must be positive, got {a}")));
    }
    if n == 0 {
        return Err(Error::Precondition("N must be at least 1".into()));
    }
    // Truncate both infinite trains after `n + extra` atoms; the overlap
    // cancels exactly.
    let extra = n;
    let mut weights: BTreeMap<u64, f64> = BTreeMap::new();
    for j in 1..=n + extra {
        *weights.entry(j).or_default() += 1.0;
    }
    for j in n + 1..=n + extra {
        *weights.entry(j).or_default() -= 1.0;
    }
    let atoms = weights
        .into_iter()
        .filter(|(_, w)| *w != 0.0)
        .map(|(j, weight)| Atom {
            weight,
            location: j as f64 * a,
        })
        .collect();
    Ok(DeltaTypeB {
        a,
        n,
        comb: DeltaComb::new(atoms)?,
    })
}

const DIVERGENCE_RUN: usize = 5;
const DIVERGENCE_SUM: f64 = 1e6;

/// Partial sums of the zeta-function expansion of `Σ_{k=1}^{N} a/(α²k² + a²)`
/// obtained by expanding the kernel in powers and integrating term by term.
///
/// The expansion is not a valid rearrangement and diverges for most
/// parameters; divergence is detected and reported, not raised. The onset
/// index of the growing run is stored in `truncation_index`.
pub fn zeta_expansion_sum(a: f64, alpha: f64, n: u64, max_terms: u64) -> Result<SumResult> {
    let start = Instant::now();
    if max_terms == 0 {
        return Err(Error::Precondition("max_terms must be at least 1".into()));
    }
    if a == 0.0 || !a.is_finite() {
        return Err(Error::Precondition(format!("a must be nonzero, got {a}")));
    }
    if !(alpha > 0.0) {
        return Err(Error::Precondition(format!("alpha must be positive, got {alpha}")));
    }
    let ia = C64::new(0.0, a);
    let top = ia + alpha * n as f64;
    let half_over_i = C64::new(0.0, -0.5);

    let mut sum = ZERO;
    let mut prev = f64::INFINITY;
    let mut run = 0usize;
    let mut last = f64::INFINITY;
    let mut result = SumResult::exact(ZERO, Method::ZetaExpansion, 0.0);
    for j in 1..=max_terms {
        let p = j as i32;
        let bracket = ia.powi(p) - (-ia).powi(p) - top.powi(p) + (-top).powi(p);
        let term = half_over_i * bracket * alpha.powi(p - 1) * riemann_zeta(j as f64 + 1.0)?;
        sum += term;
        last = term.norm();
        result.diagnostics.nodes_used = j;
        if last > 1.0 && last > prev {
            run += 1;
        } else {
            run = 0;
        }
        prev = last;
        if run >= DIVERGENCE_RUN || sum.norm() > DIVERGENCE_SUM || !sum.is_finite() {
            result.diagnostics.divergent = true;
            result.diagnostics.truncation_index = Some(if run >= DIVERGENCE_RUN {
                j + 1 - DIVERGENCE_RUN as u64
            } else {
                j
            });
            break;
        }
    }
    result.value = sum;
    result.error_estimate = last;
    result.diagnostics.converged =
        !result.diagnostics.divergent && last <= 1e-12 * sum.norm().max(1e-300);
    if result.diagnostics.truncation_index.is_none() {
        result.diagnostics.truncation_index = Some(result.diagnostics.nodes_used);
    }
    Ok(result.timed(start))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{SmoothTerm, CustomKernel};
    use crate::series::direct_sum;
    use std::f64::consts::{E, LN_2};
    use std::sync::Arc;

    fn re(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn std_kernel(n: u64) -> VariantKernel {
        VariantKernel::standard(ONE, n).unwrap()
    }

    #[test]
    fn phi_removable_limit() {
        assert!((std_kernel(5).phi(ZERO).unwrap() - 5.0).norm() < 1e-15);
        assert!((std_kernel(5).phi(re(1e-9)).unwrap() - 5.0).norm() < 1e-7);
        let tiny = std_kernel(1_000_000).phi(re(1e-13)).unwrap();
        assert!((tiny.re - 1e6).abs() < 1e6 * 1e-6);
    }

    #[test]
    fn phi_examples() {
        assert!((std_kernel(1).phi(re(LN_2)).unwrap() - 0.5).norm() < 1e-15);
        let alt = VariantKernel::new(Variant::Alternating, ONE, ZERO, 2).unwrap();
        let a: f64 = 0.7;
        let want = (-a).exp() - (-2.0 * a).exp();
        assert!((alt.phi(re(a)).unwrap() - want).norm() < 1e-15);
    }

    #[test]
    fn phi_matches_direct_geometric_sum_everywhere() {
        let points = [
            C64::new(0.0, 2.0 * PI),
            C64::new(1e-8, PI),
            C64::new(0.3, 0.2),
            C64::new(-0.4, 3.0),
            C64::new(2.5, -7.0),
            C64::new(0.6, 0.0),
        ];
        for variant in [Variant::Standard, Variant::Alternating] {
            for n in [2u64, 4, 10] {
                let vk = VariantKernel::new(variant, ONE, ZERO, n).unwrap();
                for &t in &points {
                    let direct: C64 = (1..=n)
                        .map(|k| (-t * k as f64).exp() * vk.variant.weight(k, ZERO))
                        .sum();
                    let got = vk.phi(t).unwrap();
                    assert!((got - direct).norm() < 1e-12 * direct.norm().max(1.0), "{variant} {n} {t}: {got} vs {direct}");
                }
            }
        }
    }

    #[test]
    fn phi_derivative_examples() {
        let d = std_kernel(1).phi_derivative(re(0.5), 1).unwrap();
        assert!((d.re + (-0.5f64).exp()).abs() < 1e-15);

        let vk = std_kernel(3);
        let h = 1e-5;
        let fd = (vk.phi(re(1.0 + h)).unwrap() - vk.phi(re(1.0 - h)).unwrap()) / (2.0 * h);
        assert!((vk.phi_derivative(re(1.0), 1).unwrap() - fd).norm() < 1e-8);

        let vk = std_kernel(4);
        let h = 1e-4;
        let t = 0.8;
        let fd2 = (vk.phi(re(t + h)).unwrap() - vk.phi(re(t)).unwrap() * 2.0 + vk.phi(re(t - h)).unwrap()) / (h * h);
        assert!((vk.phi_derivative(re(t), 2).unwrap() - fd2).norm() < 1e-6);
    }

    #[test]
    fn phi_derivatives_at_removable_point() {
        // Φ^(m)(0) = (-1)^m Σ k^m
        let vk = std_kernel(10);
        for m in 0..=4usize {
            let want: f64 = (1..=10).map(|k| (k as f64).powi(m as i32)).sum::<f64>() * (-1f64).powi(m as i32);
            let got = vk.phi_derivative(ZERO, m).unwrap();
            assert!((got.re - want).abs() < 1e-12 * want.abs(), "m = {m}: {got}");
        }
    }

    #[test]
    fn exponential_example() {
        let spec = SeriesSpec::from_fn(|k: C64| (-k).exp(), 3);
        let kernel = Kernel::delta(ONE, ONE).unwrap();
        let r = sum_via_integral(&spec, &kernel, 1e-12).unwrap();
        let want = (1.0 - (-3.0f64).exp()) / (E - 1.0);
        assert!((r.value.re - want).abs() < 1e-15);
        assert!((r.value.re - 0.553_001_8).abs() < 1e-7);
    }

    #[test]
    fn cosine_example() {
        let theta = PI / 2.0;
        let mut kernel = Kernel::new();
        kernel.push_delta(re(0.5), C64::new(0.0, -theta), 0).unwrap();
        kernel.push_delta(re(0.5), C64::new(0.0, theta), 0).unwrap();
        let spec = SeriesSpec::from_fn(move |k: C64| (k * theta).cos(), 4);
        let r = sum_via_integral(&spec, &kernel, 1e-12).unwrap();
        assert!(r.value.norm() < 1e-14);
    }

    #[test]
    fn harmonic_example() {
        let kernel = Kernel::from_smooth(SmoothTerm::power(ONE, 1.0).unwrap());
        let spec = SeriesSpec::from_fn(|k: C64| k.inv(), 5);
        let r = sum_via_integral(&spec, &kernel, 1e-12).unwrap();
        assert!(r.diagnostics.converged);
        assert!((r.value.re - 137.0 / 60.0).abs() < 1e-11, "{}", r.value);
    }

    #[test]
    fn rational_sine_example() {
        let kernel = Kernel::from_smooth(SmoothTerm::sine(ONE, 1.0));
        let spec = SeriesSpec::from_fn(|k: C64| (k * k + 1.0).inv(), 10);
        let r = sum_via_integral(&spec, &kernel, 1e-10).unwrap();
        let oracle = direct_sum(&spec).unwrap().value;
        assert!((r.value - oracle).norm() < 1e-9);
        assert!((oracle.re - 0.981_792_8).abs() < 1e-7);
    }

    #[test]
    fn growth_bound_checked() {
        let kernel = Kernel::from_smooth(SmoothTerm::custom(
            ONE,
            CustomKernel {
                label: "e^2t".into(),
                f: Arc::new(|t| re((2.0 * t).exp())),
                growth_bound: 2.0,
                limit_at_zero: Some(ONE),
            },
        ));
        let spec = SeriesSpec::from_fn(|k: C64| (k - 2.0).inv(), 4);
        assert!(matches!(sum_via_integral(&spec, &kernel, 1e-10), Err(Error::Domain(_))));
    }

    #[test]
    fn odd_alternating_rejected() {
        let spec = SeriesSpec::from_fn(|k: C64| (-k).exp(), 3).with_variant(Variant::Alternating, ZERO);
        let kernel = Kernel::delta(ONE, ONE).unwrap();
        assert!(matches!(sum_via_integral(&spec, &kernel, 1e-10), Err(Error::Precondition(_))));
    }

    #[test]
    fn type_b_examples() {
        let one = Kernel::from_smooth(SmoothTerm::power(ONE, 1.0).unwrap());
        let v = type_b_sum(&one, 3.0, 4, Variant::Standard, ZERO).unwrap();
        assert!((v.re - 25.0 / 12.0).abs() < 1e-15);

        let t = Kernel::from_smooth(SmoothTerm::power(ONE, 2.0).unwrap());
        let v = type_b_sum(&t, 2.0, 3, Variant::Standard, ZERO).unwrap();
        assert!((v.re - 49.0 / 18.0).abs() < 1e-14);
        let v = type_b_sum(&t, 1.0, 2, Variant::Alternating, ZERO).unwrap();
        assert!((v.re - 0.75).abs() < 1e-15);

        let delta = Kernel::delta(ONE, ONE).unwrap();
        assert!(matches!(
            type_b_sum(&delta, 1.0, 2, Variant::Standard, ZERO),
            Err(Error::Capability(_))
        ));
    }

    #[test]
    fn delta_type_b_examples() {
        let d = delta_type_b(1.0, 2).unwrap();
        let locs: Vec<f64> = d.comb.atoms().iter().map(|a| a.location).collect();
        assert_eq!(locs, vec![1.0, 2.0]);
        assert!(d.comb.atoms().iter().all(|a| a.weight == 1.0));
        assert!((d.closed_form(ONE).re - 0.503_214_7).abs() < 1e-7);

        let d = delta_type_b(0.5, 1).unwrap();
        assert_eq!(d.comb.atoms(), &[Atom { weight: 1.0, location: 0.5 }]);
        assert!((d.closed_form(re(3.0)).re - (-1.5f64).exp()).abs() < 1e-15);

        let d = delta_type_b(2.0, 3).unwrap();
        let oracle = direct_sum(&SeriesSpec::from_fn(|k: C64| (-2.0 * k).exp(), 3)).unwrap();
        assert!((d.closed_form(ONE) - oracle.value).norm() < 1e-14);
    }

    #[test]
    fn zeta_expansion_diverges_for_unit_parameters() {
        let r = zeta_expansion_sum(1.0, 1.0, 10, 60).unwrap();
        assert!(r.diagnostics.divergent);
        assert!(!r.is_authoritative());
        assert!(r.diagnostics.truncation_index.unwrap() <= 60);
    }

    #[test]
    fn zeta_expansion_is_deterministic() {
        let a = zeta_expansion_sum(1.0, 1.0, 1, 5).unwrap();
        let b = zeta_expansion_sum(1.0, 1.0, 1, 5).unwrap();
        assert_eq!(a.value.re.to_bits(), b.value.re.to_bits());
        assert_eq!(a.value.im.to_bits(), b.value.im.to_bits());
        assert_eq!(a.diagnostics.nodes_used, 5);
    }
}
