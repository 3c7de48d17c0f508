//! Truncated Taylor arithmetic over complex scalars.
//!
//! A [`Jet`] carries the normalized Taylor coefficients `f^(j)(t0) / j!` of a
//! function at a point, up to a fixed order. Propagating a jet through an
//! analytic expression yields exact derivatives (up to rounding), which the
//! Laplace engine uses for delta-derivative kernels and the Euler-Maclaurin
//! module uses for its correction terms.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

type C64 = Complex64;

/// Number of stored coefficients; derivatives up to order `MAX_ORDER`.
pub const JET_CAPACITY: usize = 16;
pub const MAX_ORDER: usize = JET_CAPACITY - 1;

const ZERO: C64 = C64::new(0.0, 0.0);

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    coeffs: [C64; JET_CAPACITY],
    order: usize,
}

impl Jet {
    /// The identity jet `t0 + ε`, seeding differentiation with respect to `t`.
    pub fn variable(t0: C64, order: usize) -> Self {
        let mut j = Self::constant(t0, order);
        if order >= 1 {
            j.coeffs[1] = C64::new(1.0, 0.0);
        }
        j
    }

    pub fn constant(c: C64, order: usize) -> Self {
        assert!(order <= MAX_ORDER, "jet order {order} exceeds {MAX_ORDER}");
        let mut coeffs = [ZERO; JET_CAPACITY];
        coeffs[0] = c;
        Jet { coeffs, order }
    }

    pub fn from_coeffs(coeffs: &[C64]) -> Self {
        assert!(!coeffs.is_empty() && coeffs.len() <= JET_CAPACITY);
        let mut j = Self::constant(coeffs[0], coeffs.len() - 1);
        j.coeffs[..coeffs.len()].copy_from_slice(coeffs);
        j
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn value(&self) -> C64 {
        self.coeffs[0]
    }

    /// Normalized coefficient `f^(j)(t0) / j!`.
    pub fn coeff(&self, j: usize) -> C64 {
        if j <= self.order {
            self.coeffs[j]
        } else {
            ZERO
        }
    }

    /// The `j`-th derivative at the expansion point.
    pub fn derivative(&self, j: usize) -> C64 {
        let fact: f64 = (1..=j).map(|i| i as f64).product();
        self.coeff(j) * fact
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs[..=self.order].iter().all(|c| c.is_finite())
    }

    fn with_order(order: usize) -> Self {
        Jet {
            coeffs: [ZERO; JET_CAPACITY],
            order,
        }
    }

    fn scale(mut self, s: C64) -> Self {
        for c in &mut self.coeffs[..=self.order] {
            *c *= s;
        }
        self
    }

    /// Applies `h = φ(f)` given `φ'` expressed through `h` itself: used for
    /// `exp`, where `h' = f' h`.
    fn exp_like(&self, h0: C64) -> Self {
        let n = self.order;
        let mut h = Self::with_order(n);
        h.coeffs[0] = h0;
        for k in 1..=n {
            let mut acc = ZERO;
            for j in 1..=k {
                acc += self.coeffs[j] * h.coeffs[k - j] * j as f64;
            }
            h.coeffs[k] = acc / k as f64;
        }
        h
    }

    pub fn exp(&self) -> Self {
        self.exp_like(self.coeffs[0].exp())
    }

    /// `e^f - 1` with an accurate constant term near zero.
    pub fn expm1(&self) -> Self {
        let e = self.coeffs[0].exp();
        let mut h = self.exp_like(e);
        h.coeffs[0] = complex_expm1(self.coeffs[0]);
        h
    }

    pub fn ln(&self) -> Self {
        let n = self.order;
        let f0 = self.coeffs[0];
        let mut h = Self::with_order(n);
        h.coeffs[0] = f0.ln();
        for k in 1..=n {
            let mut acc = ZERO;
            for j in 1..k {
                acc += h.coeffs[j] * self.coeffs[k - j] * j as f64;
            }
            h.coeffs[k] = (self.coeffs[k] - acc / k as f64) / f0;
        }
        h
    }

    pub fn sin_cos(&self) -> (Self, Self) {
        let n = self.order;
        let f0 = self.coeffs[0];
        let mut s = Self::with_order(n);
        let mut c = Self::with_order(n);
        s.coeffs[0] = f0.sin();
        c.coeffs[0] = f0.cos();
        for k in 1..=n {
            let mut acc_s = ZERO;
            let mut acc_c = ZERO;
            for j in 1..=k {
                let jf = self.coeffs[j] * j as f64;
                acc_s += jf * c.coeffs[k - j];
                acc_c += jf * s.coeffs[k - j];
            }
            s.coeffs[k] = acc_s / k as f64;
            c.coeffs[k] = -acc_c / k as f64;
        }
        (s, c)
    }

    pub fn sqrt(&self) -> Self {
        let n = self.order;
        let mut h = Self::with_order(n);
        let h0 = self.coeffs[0].sqrt();
        h.coeffs[0] = h0;
        for k in 1..=n {
            let mut acc = ZERO;
            for j in 1..k {
                acc += h.coeffs[j] * h.coeffs[k - j];
            }
            h.coeffs[k] = (self.coeffs[k] - acc) / (h0 * 2.0);
        }
        h
    }

    pub fn recip(&self) -> Self {
        Jet::constant(C64::new(1.0, 0.0), self.order) / *self
    }

    /// Integer power by repeated squaring; well defined at a zero constant
    /// term for nonnegative exponents.
    pub fn powi(&self, e: i32) -> Self {
        let mut base = if e < 0 { self.recip() } else { *self };
        let mut e = e.unsigned_abs();
        let mut acc = Jet::constant(C64::new(1.0, 0.0), self.order);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// General power `f^p = exp(p ln f)`.
    pub fn powc(&self, p: &Jet) -> Self {
        if p.order_is_constant() {
            if let Some(i) = as_small_integer(p.coeffs[0]) {
                return self.powi(i);
            }
        }
        let mut h = (*p * self.ln()).exp();
        if p.order_is_constant() {
            // More accurate constant term than exp(p ln f).
            h.coeffs[0] = self.coeffs[0].powc(p.coeffs[0]);
        }
        h
    }

    fn order_is_constant(&self) -> bool {
        self.coeffs[1..=self.order].iter().all(|c| *c == ZERO)
    }
}

pub(crate) fn as_small_integer(z: C64) -> Option<i32> {
    if z.im == 0.0 && z.re.fract() == 0.0 && z.re.abs() <= 64.0 {
        Some(z.re as i32)
    } else {
        None
    }
}

/// `e^z - 1` accurate for small `|z|`.
pub fn complex_expm1(z: C64) -> C64 {
    if z.im == 0.0 {
        return C64::new(z.re.exp_m1(), 0.0);
    }
    let (s, c) = z.im.sin_cos();
    let half = (0.5 * z.im).sin();
    // cos y - 1 = -2 sin^2(y/2)
    let re = z.re.exp_m1() * c - 2.0 * half * half;
    let im = z.re.exp() * s;
    C64::new(re, im)
}

fn common_order(a: &Jet, b: &Jet) -> usize {
    a.order.min(b.order)
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        let n = common_order(&self, &rhs);
        let mut h = Jet::with_order(n);
        for k in 0..=n {
            h.coeffs[k] = self.coeffs[k] + rhs.coeffs[k];
        }
        h
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        let n = common_order(&self, &rhs);
        let mut h = Jet::with_order(n);
        for k in 0..=n {
            h.coeffs[k] = self.coeffs[k] - rhs.coeffs[k];
        }
        h
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        let n = common_order(&self, &rhs);
        let mut h = Jet::with_order(n);
        for k in 0..=n {
            let mut acc = ZERO;
            for j in 0..=k {
                acc += self.coeffs[j] * rhs.coeffs[k - j];
            }
            h.coeffs[k] = acc;
        }
        h
    }
}

impl Div for Jet {
    type Output = Jet;
    fn div(self, rhs: Jet) -> Jet {
        let n = common_order(&self, &rhs);
        let g0 = rhs.coeffs[0];
        let mut h = Jet::with_order(n);
        for k in 0..=n {
            let mut acc = self.coeffs[k];
            for j in 1..=k {
                acc -= rhs.coeffs[j] * h.coeffs[k - j];
            }
            h.coeffs[k] = acc / g0;
        }
        h
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(C64::new(-1.0, 0.0))
    }
}

impl Add<C64> for Jet {
    type Output = Jet;
    fn add(mut self, rhs: C64) -> Jet {
        self.coeffs[0] += rhs;
        self
    }
}

impl Sub<C64> for Jet {
    type Output = Jet;
    fn sub(mut self, rhs: C64) -> Jet {
        self.coeffs[0] -= rhs;
        self
    }
}

impl Mul<C64> for Jet {
    type Output = Jet;
    fn mul(self, rhs: C64) -> Jet {
        self.scale(rhs)
    }
}

impl Div<C64> for Jet {
    type Output = Jet;
    fn div(self, rhs: C64) -> Jet {
        self.scale(C64::new(1.0, 0.0) / rhs)
    }
}

/// Arithmetic shared by plain complex values and jets, so that one evaluator
/// produces both values and derivatives.
pub trait Scalar:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// A constant compatible with `like` (same jet order).
    fn lift(c: C64, like: &Self) -> Self;
    fn value(&self) -> C64;
    fn exp(&self) -> Self;
    fn ln(&self) -> Self;
    fn sin(&self) -> Self;
    fn cos(&self) -> Self;
    fn sqrt(&self) -> Self;
    fn powi(&self, e: i32) -> Self;
    fn powc(&self, p: &Self) -> Self;
    fn all_finite(&self) -> bool;
}

impl Scalar for C64 {
    fn lift(c: C64, _like: &Self) -> Self {
        c
    }
    fn value(&self) -> C64 {
        *self
    }
    fn exp(&self) -> Self {
        C64::exp(*self)
    }
    fn ln(&self) -> Self {
        C64::ln(*self)
    }
    fn sin(&self) -> Self {
        C64::sin(*self)
    }
    fn cos(&self) -> Self {
        C64::cos(*self)
    }
    fn sqrt(&self) -> Self {
        C64::sqrt(*self)
    }
    fn powi(&self, e: i32) -> Self {
        C64::powi(self, e)
    }
    fn powc(&self, p: &Self) -> Self {
        match as_small_integer(*p) {
            Some(i) => C64::powi(self, i),
            None if p.im == 0.0 && self.im == 0.0 && self.re > 0.0 => {
                C64::new(self.re.powf(p.re), 0.0)
            }
            None => C64::powc(*self, *p),
        }
    }
    fn all_finite(&self) -> bool {
        self.is_finite()
    }
}

impl Scalar for Jet {
    fn lift(c: C64, like: &Self) -> Self {
        Jet::constant(c, like.order)
    }
    fn value(&self) -> C64 {
        self.coeffs[0]
    }
    fn exp(&self) -> Self {
        Jet::exp(self)
    }
    fn ln(&self) -> Self {
        Jet::ln(self)
    }
    fn sin(&self) -> Self {
        self.sin_cos().0
    }
    fn cos(&self) -> Self {
        self.sin_cos().1
    }
    fn sqrt(&self) -> Self {
        Jet::sqrt(self)
    }
    fn powi(&self, e: i32) -> Self {
        Jet::powi(self, e)
    }
    fn powc(&self, p: &Self) -> Self {
        Jet::powc(self, p)
    }
    fn all_finite(&self) -> bool {
        self.is_finite()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() <= tol * (1.0 + b.norm())
    }

    #[test]
    fn exp_derivatives_are_all_exp() {
        let t = Jet::variable(c(0.3), 6);
        let e = t.exp();
        for j in 0..=6 {
            assert!(close(e.derivative(j), c(0.3f64.exp()), 1e-14));
        }
    }

    #[test]
    fn sin_cos_cycle() {
        let t = Jet::variable(c(1.1), 4);
        let s = Scalar::sin(&t);
        assert!(close(s.derivative(1), c(1.1f64.cos()), 1e-14));
        assert!(close(s.derivative(2), c(-1.1f64.sin()), 1e-14));
        assert!(close(s.derivative(3), c(-1.1f64.cos()), 1e-14));
        assert!(close(s.derivative(4), c(1.1f64.sin()), 1e-14));
    }

    #[test]
    fn quotient_and_log() {
        // d/dt ln(t) = 1/t, d^2/dt^2 (1/t) = 2/t^3
        let t = Jet::variable(c(2.0), 3);
        assert!(close(t.ln().derivative(1), c(0.5), 1e-15));
        assert!(close(t.recip().derivative(2), c(0.25), 1e-15));
        assert!(close(Scalar::sqrt(&t).derivative(1), c(0.25 / 2f64.sqrt() * 2.0), 1e-15));
    }

    #[test]
    fn powi_at_zero() {
        let t = Jet::variable(c(0.0), 4);
        let p = t.powi(2);
        assert_eq!(p.derivative(0), c(0.0));
        assert_eq!(p.derivative(1), c(0.0));
        assert_eq!(p.derivative(2), c(2.0));
        assert_eq!(p.derivative(3), c(0.0));
    }

    #[test]
    fn powc_fractional() {
        let t = Jet::variable(c(4.0), 2);
        let p = t.powc(&Jet::constant(c(1.5), 2));
        assert!(close(p.value(), c(8.0), 1e-15));
        assert!(close(p.derivative(1), c(3.0), 1e-14));
        assert!(close(p.derivative(2), c(0.375), 1e-14));
    }

    #[test]
    fn expm1_small_argument() {
        let z = C64::new(1e-10, 2e-10);
        let direct = complex_expm1(z);
        assert!(close(direct, z + z * z / 2.0, 1e-15));
        let j = Jet::variable(z, 2).expm1();
        assert!(close(j.value(), direct, 1e-15));
    }
}
