//! Bernoulli numbers, gamma, and the Riemann and Hurwitz zeta functions for
//! real arguments.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::series::CompensatedSum;

/// Largest index held in the Bernoulli table.
pub const BERNOULLI_MAX: usize = 60;

/// Exact Bernoulli numbers `B_0..=B_max` with the convention `B_1 = -1/2`.
#[derive(Debug, Clone)]
pub struct BernoulliTable {
    values: Vec<BigRational>,
    floats: Vec<f64>,
}

impl BernoulliTable {
    /// Builds the table from `Σ_{j=0}^{n} C(n+1, j) B_j = 0`.
    pub fn new(max: usize) -> Self {
        let mut values: Vec<BigRational> = Vec::with_capacity(max + 1);
        values.push(BigRational::one());
        for n in 1..=max {
            let mut acc = BigRational::zero();
            let mut binom = BigInt::one(); // C(n+1, 0)
            for (j, b) in values.iter().enumerate() {
                if !b.is_zero() {
                    acc += b * BigRational::from_integer(binom.clone());
                }
                binom = binom * BigInt::from(n + 1 - j) / BigInt::from(j + 1);
            }
            values.push(-acc / BigRational::from_integer(BigInt::from(n + 1)));
        }
        let floats = values.iter().map(|v| v.to_f64().unwrap_or(f64::NAN)).collect();
        BernoulliTable { values, floats }
    }

    pub fn max_index(&self) -> usize {
        self.values.len() - 1
    }

    pub fn get(&self, n: usize) -> Result<&BigRational> {
        self.values.get(n).ok_or_else(|| {
            Error::Capability(format!(
                "Bernoulli number B_{n} is beyond the table (max {})",
                self.max_index()
            ))
        })
    }

    pub fn get_f64(&self, n: usize) -> Result<f64> {
        self.get(n).map(|_| self.floats[n])
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }
}

/// The shared table up to [`BERNOULLI_MAX`].
pub fn bernoulli_table() -> &'static BernoulliTable {
    static TABLE: OnceLock<BernoulliTable> = OnceLock::new();
    TABLE.get_or_init(|| BernoulliTable::new(BERNOULLI_MAX))
}

pub fn bernoulli(n: usize) -> Result<BigRational> {
    bernoulli_table().get(n).cloned()
}

pub fn bernoulli_f64(n: usize) -> Result<f64> {
    bernoulli_table().get_f64(n)
}

/// `(2k)!` as a float, exact for the orders used here.
pub(crate) fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Γ(s) for real `s > 0` (Lanczos, g = 7).
pub fn gamma_fn(s: f64) -> Result<f64> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::Domain(format!("gamma requires s > 0, got {s}")));
    }
    if s < 0.5 {
        return Ok(lanczos(s + 1.0) / s);
    }
    Ok(lanczos(s))
}

fn lanczos(s: f64) -> f64 {
    let x = s - 1.0;
    let mut acc = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    (2.0 * std::f64::consts::PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * acc
}

/// Maximum number of Bernoulli correction terms in the zeta tail.
pub const HURWITZ_MAX_CORRECTIONS: usize = 15;

const ZETA_REL_TOL: f64 = 1e-17;

/// ζ(s, a) = Σ_{n≥0} (n + a)^(-s) together with an estimate of its
/// truncation error.
///
/// The head `Σ_{n<M}` is summed explicitly and the tail by Euler-Maclaurin;
/// `M` grows until the first omitted correction falls below tolerance. If
/// that never happens the best value is returned with its error estimate.
pub fn hurwitz_zeta_with_error(s: f64, a: f64) -> Result<(f64, f64)> {
    if !(s > 1.0) || !s.is_finite() {
        return Err(Error::Domain(format!("zeta requires s > 1, got s = {s}")));
    }
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::Domain(format!("Hurwitz zeta requires a > 0, got a = {a}")));
    }
    let table = bernoulli_table();
    let mut m = (12.0 - a).max(0.0).ceil() as u64;
    let mut best = (f64::NAN, f64::INFINITY);
    loop {
        let (value, err) = hurwitz_at_cutoff(s, a, m, table);
        if err < best.1 || best.0.is_nan() {
            best = (value, err);
        }
        if err <= 1e-16 * value.abs() || m >= 1 << 20 {
            return Ok(best);
        }
        m = (2 * m).max(16);
    }
}

fn hurwitz_at_cutoff(s: f64, a: f64, m: u64, table: &BernoulliTable) -> (f64, f64) {
    let x = m as f64 + a;
    let mut head = CompensatedSum::new();
    for n in (0..m).rev() {
        head.add((n as f64 + a).powf(-s).into());
    }
    let x_s = x.powf(-s);
    let scale = head.total().re + x * x_s / (s - 1.0);

    // term_j = B_2j / (2j)! * s (s+1) ... (s+2j-2) * x^(-s-2j+1)
    let mut corrections = Vec::with_capacity(HURWITZ_MAX_CORRECTIONS);
    let mut poch = s;
    let mut xpow = x_s / x;
    let mut omitted = f64::INFINITY;
    for j in 1..=HURWITZ_MAX_CORRECTIONS + 1 {
        if j > 1 {
            poch *= (s + 2.0 * j as f64 - 3.0) * (s + 2.0 * j as f64 - 2.0);
            xpow /= x * x;
        }
        let term = table.floats[2 * j] / factorial(2 * j) * poch * xpow;
        let last = corrections.last().map_or(f64::INFINITY, |t: &f64| t.abs());
        if j > HURWITZ_MAX_CORRECTIONS || term.abs() > last {
            // asymptotic series started to grow: the smallest term bounds the error
            omitted = term.abs().min(last);
            break;
        }
        if term.abs() < ZETA_REL_TOL * scale {
            omitted = term.abs();
            break;
        }
        corrections.push(term);
    }
    let mut acc = CompensatedSum::new();
    for t in corrections.iter().rev() {
        acc.add((*t).into());
    }
    acc.add((x_s / 2.0).into());
    acc.add((x * x_s / (s - 1.0)).into());
    acc.add(head.total());
    (acc.total().re, omitted)
}

pub fn hurwitz_zeta(s: f64, a: f64) -> Result<f64> {
    hurwitz_zeta_with_error(s, a).map(|(v, _)| v)
}

/// ζ(s) for real `s > 1`.
pub fn riemann_zeta(s: f64) -> Result<f64> {
    hurwitz_zeta(s, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    fn ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn bernoulli_values() {
        assert_eq!(bernoulli(0).unwrap(), ratio(1, 1));
        assert_eq!(bernoulli(1).unwrap(), ratio(-1, 2));
        assert_eq!(bernoulli(2).unwrap(), ratio(1, 6));
        assert_eq!(bernoulli(4).unwrap(), ratio(-1, 30));
        assert_eq!(bernoulli(12).unwrap(), ratio(-691, 2730));
        for n in (3..=BERNOULLI_MAX).step_by(2) {
            assert!(bernoulli(n).unwrap().is_zero(), "B_{n}");
        }
    }

    #[test]
    fn bernoulli_beyond_table() {
        assert!(matches!(bernoulli(BERNOULLI_MAX + 1), Err(Error::Capability(_))));
    }

    #[test]
    fn gamma_values() {
        assert!(rel(gamma_fn(1.0).unwrap(), 1.0) < 1e-14);
        assert!(rel(gamma_fn(5.0).unwrap(), 24.0) < 1e-13);
        assert!(rel(gamma_fn(0.5).unwrap(), PI.sqrt()) < 1e-13);
        assert!(rel(gamma_fn(0.1).unwrap(), 9.513_507_698_668_732) < 1e-13);
        let mut fact = 1.0;
        for n in 1..20 {
            assert!(rel(gamma_fn(n as f64).unwrap(), fact) < 1e-13, "n = {n}");
            fact *= n as f64;
        }
        assert!(gamma_fn(0.0).is_err());
        assert!(gamma_fn(-1.5).is_err());
    }

    #[test]
    fn zeta_classical_values() {
        assert!(rel(riemann_zeta(2.0).unwrap(), PI * PI / 6.0) < 1e-12);
        assert!(rel(riemann_zeta(4.0).unwrap(), PI.powi(4) / 90.0) < 1e-12);
        assert!(rel(riemann_zeta(3.0).unwrap(), 1.202_056_903_159_594_3) < 1e-12);
        assert!(rel(hurwitz_zeta(2.0, 3.0).unwrap(), PI * PI / 6.0 - 1.25) < 1e-12);
    }

    #[test]
    fn zeta_three_against_partial_sum_with_tail_bracket() {
        // Σ_{k≤K} k^-3 + tail, where the tail lies between
        // (K+1)^-2/2 and K^-2/2.
        let k = 100_000u64;
        let head: f64 = (1..=k).rev().map(|n| (n as f64).powi(-3)).sum();
        let lo = head + 0.5 / ((k + 1) as f64).powi(2);
        let hi = head + 0.5 / (k as f64).powi(2);
        let z = riemann_zeta(3.0).unwrap();
        assert!(z > lo - 1e-15 && z < hi + 1e-15);
    }

    #[test]
    fn hurwitz_fractional_against_brute_force() {
        // s = 1.5, a = 10: 10^7 direct terms plus the tail bracket
        // [∫_{K+a}^∞, ∫_{K+a-1}^∞] of x^-1.5.
        let k = 10_000_000u64;
        let mut acc = CompensatedSum::new();
        for n in (0..k).rev() {
            acc.add((n as f64 + 10.0).powf(-1.5).into());
        }
        let head = acc.total().re;
        let x = k as f64 + 10.0;
        let lo = head + 2.0 / x.sqrt();
        let hi = head + 2.0 / (x - 1.0).sqrt();
        let z = hurwitz_zeta(1.5, 10.0).unwrap();
        assert!(z >= lo - 1e-10 && z <= hi + 1e-10, "{lo} {z} {hi}");
    }

    #[test]
    fn zeta_domain_errors() {
        assert!(matches!(riemann_zeta(1.0), Err(Error::Domain(_))));
        assert!(matches!(hurwitz_zeta(2.0, 0.0), Err(Error::Domain(_))));
        assert!(matches!(hurwitz_zeta(f64::NAN, 1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn zeta_of_large_argument_approaches_one() {
        let z = riemann_zeta(60.0).unwrap();
        assert!((z - 1.0).abs() < 1e-17 + 2f64.powi(-59));
    }
}
