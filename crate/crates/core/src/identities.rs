//! Closed-form finite-sum identities with direct-sum verification sweeps.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernels::{PairKind, TransformPair, Trig};
use crate::laplace::geometric_sum;
use crate::series::{direct_sum, IndexFn, SeriesSpec};
use crate::telescope::zeta_power_sum;

type C64 = Complex64;

/// Trig closed forms lose accuracy as `sin(θ/2) → 0`.
const CONDITIONING_MARGIN: f64 = 0.1;
pub const REL_TOL: f64 = 1e-11;
pub const ABS_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Range {
    /// `lo < x < hi`
    Open(f64, f64),
    /// `x > lo`
    Above(f64),
}

impl Range {
    pub fn contains(&self, x: f64) -> bool {
        match *self {
            Range::Open(lo, hi) => x > lo && x < hi,
            Range::Above(lo) => x > lo,
        }
    }
}

impl fmt::Display for Range {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Range::Open(lo, hi) => write!(f, "({lo}, {hi})"),
            Range::Above(lo) => write!(f, "({lo}, inf)"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Param {
    pub name: &'static str,
    pub range: Range,
}

const THETA: Param = Param {
    name: "theta",
    range: Range::Open(0.0, 2.0 * PI),
};

type ClosedForm = fn(&[f64], u64) -> Result<C64>;
type Summand = fn(&[f64], C64) -> C64;

pub struct Identity {
    pub name: &'static str,
    pub summand: &'static str,
    pub params: &'static [Param],
    /// Where the identity comes from, in words.
    pub anchor: &'static str,
    closed_form: ClosedForm,
    term: Summand,
}

impl fmt::Debug for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Identity")
            .field("name", &self.name)
            .field("summand", &self.summand)
            .finish_non_exhaustive()
    }
}

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// `sin(a·b)` with the rounding error of the product folded back in; the
/// closed forms amplify argument errors by up to `N / sin²(θ/2)`.
fn sin_mul(a: f64, b: f64) -> f64 {
    let p = a * b;
    let e = a.mul_add(b, -p);
    p.sin() + e * p.cos()
}

fn cos_mul(a: f64, b: f64) -> f64 {
    let p = a * b;
    let e = a.mul_add(b, -p);
    p.cos() - e * p.sin()
}

fn trig_term(theta: f64, k: C64, f: fn(f64, f64) -> f64, g: fn(C64) -> C64) -> C64 {
    if k.im == 0.0 {
        re(f(theta, k.re))
    } else {
        g(k * theta)
    }
}

fn sine_closed(p: &[f64], n: u64) -> Result<C64> {
    let t = p[0];
    let h = (t / 2.0).sin();
    Ok(re(0.5 / (t / 2.0).tan() - cos_mul(t, n as f64 + 0.5) / (2.0 * h)))
}

fn cosine_closed(p: &[f64], n: u64) -> Result<C64> {
    let t = p[0];
    Ok(re(-0.5 + sin_mul(t, n as f64 + 0.5) / (2.0 * (t / 2.0).sin())))
}

fn exp_cosine_closed(p: &[f64], n: u64) -> Result<C64> {
    let (beta, t) = (p[0], p[1]);
    let z = C64::new(beta, -t);
    Ok(re(0.5 * (geometric_sum(z, n) + geometric_sum(z.conj(), n)).re))
}

fn k_cosine_closed(p: &[f64], n: u64) -> Result<C64> {
    let t = p[0];
    let nf = n as f64;
    let h = (t / 2.0).sin();
    let s = sin_mul(t / 2.0, nf);
    Ok(re(0.5 * (nf * h * sin_mul(t, nf + 0.5) - s * s) / (h * h)))
}

fn geometric_closed(p: &[f64], n: u64) -> Result<C64> {
    Ok(geometric_sum(re(p[0] * p[1]), n))
}

fn power_closed(p: &[f64], n: u64) -> Result<C64> {
    zeta_power_sum(p[0], n).map(|r| r.value)
}

pub static IDENTITIES: [Identity; 6] = [
    Identity {
        name: "geometric",
        summand: "exp(-a*alpha*k)",
        params: &[
            Param { name: "a", range: Range::Above(0.0) },
            Param { name: "alpha", range: Range::Above(0.0) },
        ],
        anchor: "delta kernel at t = a: (1 - e^(-alpha N a)) / (e^(a alpha) - 1)",
        closed_form: geometric_closed,
        term: |p, k| (-k * (p[0] * p[1])).exp(),
    },
    Identity {
        name: "sine",
        summand: "sin(theta*k)",
        params: &[THETA],
        anchor: "sine sum from the pair of deltas at t = -i theta and t = i theta",
        closed_form: sine_closed,
        term: |p, k| trig_term(p[0], k, sin_mul, |z| z.sin()),
    },
    Identity {
        name: "cosine",
        summand: "cos(theta*k)",
        params: &[THETA],
        anchor: "cosine sum from the pair of deltas at t = -i theta and t = i theta",
        closed_form: cosine_closed,
        term: |p, k| trig_term(p[0], k, cos_mul, |z| z.cos()),
    },
    Identity {
        name: "exp-cosine",
        summand: "exp(-beta*k)*cos(theta*k)",
        params: &[
            Param { name: "beta", range: Range::Above(0.0) },
            THETA,
        ],
        anchor: "damped cosine sum from deltas at t = beta -/+ i theta",
        closed_form: exp_cosine_closed,
        term: |p, k| (-k * p[0]).exp() * trig_term(p[1], k, cos_mul, |z| z.cos()),
    },
    Identity {
        name: "k-cosine",
        summand: "k*cos(theta*k)",
        params: &[THETA],
        anchor: "index-weighted cosine sum from first-derivative deltas",
        closed_form: k_cosine_closed,
        term: |p, k| k * trig_term(p[0], k, cos_mul, |z| z.cos()),
    },
    Identity {
        name: "power",
        summand: "k^(-s)",
        params: &[Param { name: "s", range: Range::Above(1.0) }],
        anchor: "zeta(s) - zeta(s, N) + N^(-s) from the telescoped power series",
        closed_form: power_closed,
        term: |p, k| k.powf(-p[0]),
    },
];

pub fn lookup(name: &str) -> Result<&'static Identity> {
    IDENTITIES.iter().find(|i| i.name == name).ok_or_else(|| {
        let names: Vec<_> = IDENTITIES.iter().map(|i| i.name).collect();
        Error::Domain(format!("unknown identity `{name}` (known: {})", names.join(", ")))
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct IdentityValue {
    pub value: C64,
    /// Set when the closed form is evaluated close to a removable zero of its
    /// denominator.
    pub warning: Option<String>,
}

impl Identity {
    fn check(&self, params: &[f64], n: u64) -> Result<Option<String>> {
        if params.len() != self.params.len() {
            return Err(Error::Domain(format!(
                "{} takes {} parameter(s), got {}",
                self.name,
                self.params.len(),
                params.len()
            )));
        }
        if n == 0 {
            return Err(Error::Domain("N must be at least 1".into()));
        }
        let mut warning = None;
        for (p, &x) in self.params.iter().zip(params) {
            if !p.range.contains(x) {
                return Err(Error::Domain(format!(
                    "{} = {x} is outside {} for the {} identity",
                    p.name, p.range, self.name
                )));
            }
            if p.name == "theta" && (x < CONDITIONING_MARGIN || x > 2.0 * PI - CONDITIONING_MARGIN) {
                warning = Some(format!(
                    "theta = {x} is within {CONDITIONING_MARGIN} of a multiple of 2pi; the closed form is ill-conditioned"
                ));
            }
        }
        Ok(warning)
    }

    pub fn eval(&self, params: &[f64], n: u64) -> Result<IdentityValue> {
        let warning = self.check(params, n)?;
        let value = (self.closed_form)(params, n)?;
        Ok(IdentityValue { value, warning })
    }

    /// The direct series the closed form claims to sum.
    pub fn reference_sum(&self, params: &[f64], n: u64) -> Result<SeriesSpec> {
        self.check(params, n)?;
        let p = params.to_vec();
        let term = self.term;
        let g: Arc<dyn IndexFn> = Arc::new(move |k: C64| term(&p, k));
        Ok(SeriesSpec::new(g, n))
    }

    /// The catalog pair whose kernel generates this identity.
    pub fn transform_pair(&self, params: &[f64]) -> Result<TransformPair> {
        self.check(params, 1)?;
        let one = re(1.0);
        let delta = |decay: f64, trig, k_power| TransformPair {
            coeff: one,
            kind: PairKind::Delta { decay: re(decay), trig, k_power },
        };
        Ok(match self.name {
            "geometric" => delta(params[0] * params[1], None, 0),
            "sine" => delta(0.0, Some((Trig::Sin, params[0])), 0),
            "cosine" => delta(0.0, Some((Trig::Cos, params[0])), 0),
            "exp-cosine" => delta(params[0], Some((Trig::Cos, params[1])), 0),
            "k-cosine" => delta(0.0, Some((Trig::Cos, params[0])), 1),
            _ => TransformPair {
                coeff: one,
                kind: PairKind::InversePower { s: params[0] },
            },
        })
    }
}

pub fn eval_identity(name: &str, params: &[f64], n: u64) -> Result<IdentityValue> {
    lookup(name)?.eval(params, n)
}

/// A recognized summand matched to an identity: `Σ g(αk) = scale · identity`.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityMatch {
    pub identity: &'static str,
    pub params: Vec<f64>,
    pub scale: C64,
}

/// Maps a catalog pair, sampled at `αk`, onto a registered identity.
pub fn match_identity(pair: &TransformPair, alpha: f64) -> Option<IdentityMatch> {
    let hit = |identity, params: Vec<f64>, scale: C64| {
        let id = lookup(identity).ok()?;
        id.check(&params, 1).ok()?;
        Some(IdentityMatch { identity, params, scale })
    };
    let c = pair.coeff;
    match pair.kind {
        PairKind::Delta { decay, trig, k_power } => {
            if decay.im != 0.0 {
                return None;
            }
            let beta = decay.re * alpha;
            match (trig, k_power) {
                (None, 0) if beta > 0.0 => hit("geometric", vec![beta, 1.0], c),
                (Some((Trig::Sin, t)), 0) if beta == 0.0 => hit("sine", vec![reduce(t * alpha)?], c),
                (Some((Trig::Cos, t)), 0) if beta == 0.0 => hit("cosine", vec![reduce(t * alpha)?], c),
                (Some((Trig::Cos, t)), 0) => hit("exp-cosine", vec![beta, reduce(t * alpha)?], c),
                (Some((Trig::Cos, t)), 1) if beta == 0.0 => {
                    hit("k-cosine", vec![reduce(t * alpha)?], c * alpha)
                }
                _ => None,
            }
        }
        PairKind::InversePower { s } if s > 1.0 => hit("power", vec![s], c * alpha.powf(-s)),
        _ => None,
    }
}

/// `θ` shifted by whole periods into `(0, 2π)`; `None` at multiples of `2π`.
fn reduce(theta: f64) -> Option<f64> {
    let t = theta.rem_euclid(2.0 * PI);
    (t > 0.0 && t < 2.0 * PI).then_some(t)
}

#[derive(Clone, Debug, PartialEq)]
pub struct GridPoint {
    pub params: Vec<f64>,
    pub n: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Grid {
    Default,
    Dense,
}

impl std::str::FromStr for Grid {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "default" => Ok(Grid::Default),
            "dense" => Ok(Grid::Dense),
            _ => Err(Error::Domain(format!("unknown grid `{s}` (default, dense)"))),
        }
    }
}

fn steps(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let count = ((hi - lo) / step + 1e-9).floor() as usize;
    (0..=count).map(|i| ((lo + i as f64 * step) * 1e9).round() / 1e9).collect()
}

impl Grid {
    pub fn points(self, identity: &Identity) -> Vec<GridPoint> {
        let dense = self == Grid::Dense;
        let thetas = if dense { steps(0.1, 6.2, 0.025) } else { steps(0.1, 6.2, 0.1) };
        let ns: Vec<u64> = if dense {
            vec![1, 2, 3, 5, 10, 50, 100, 500]
        } else {
            vec![1, 2, 5, 10, 50]
        };
        let betas = if dense { vec![0.25, 0.5, 1.0, 2.0, 4.0] } else { vec![0.5, 1.0, 2.0] };
        let param_sets: Vec<Vec<f64>> = match identity.name {
            "geometric" => {
                let a_values = [0.1, 0.5, 1.0, 2.0];
                let alphas = [0.5, 1.0, 2.0];
                a_values
                    .iter()
                    .flat_map(|&a| alphas.iter().map(move |&al| vec![a, al]))
                    .collect()
            }
            "exp-cosine" => betas
                .iter()
                .flat_map(|&b| thetas.iter().map(move |&t| vec![b, t]))
                .collect(),
            "power" => {
                let ss = if dense { vec![1.25, 1.5, 2.0, 3.0, 4.0] } else { vec![1.5, 2.0, 3.0] };
                let pn: Vec<u64> = if dense { vec![1, 10, 100, 1000] } else { vec![1, 10, 100] };
                return ss
                    .iter()
                    .flat_map(|&s| pn.iter().map(move |&n| GridPoint { params: vec![s], n }))
                    .collect();
            }
            _ => thetas.iter().map(|&t| vec![t]).collect(),
        };
        param_sets
            .iter()
            .flat_map(|p| ns.iter().map(move |&n| GridPoint { params: p.clone(), n }))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Deviation {
    pub point: GridPoint,
    pub closed_form: C64,
    pub direct: C64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub identity: &'static str,
    pub points: usize,
    pub max_abs: f64,
    pub max_rel: f64,
    pub warnings: usize,
    pub failures: Vec<Deviation>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Whether a closed-form value agrees with the direct sum: relative error
/// within [`REL_TOL`], or absolute within [`ABS_TOL`] for sums below one.
pub fn within_tolerance(closed: C64, direct: C64) -> bool {
    let abs = (closed - direct).norm();
    abs <= REL_TOL * direct.norm() || (direct.norm() < 1.0 && abs <= ABS_TOL)
}

pub fn verify_identity(name: &str, grid: Grid) -> Result<VerificationReport> {
    let identity = lookup(name)?;
    verify_points(identity, &grid.points(identity))
}

pub fn verify_points(identity: &'static Identity, points: &[GridPoint]) -> Result<VerificationReport> {
    let mut report = VerificationReport {
        identity: identity.name,
        points: points.len(),
        max_abs: 0.0,
        max_rel: 0.0,
        warnings: 0,
        failures: Vec::new(),
    };
    for point in points {
        let closed = identity.eval(&point.params, point.n)?;
        let direct = direct_sum(&identity.reference_sum(&point.params, point.n)?)?.value;
        let abs = (closed.value - direct).norm();
        report.max_abs = report.max_abs.max(abs);
        if direct.norm() > 0.0 {
            report.max_rel = report.max_rel.max(abs / direct.norm());
        }
        report.warnings += closed.warning.is_some() as usize;
        if !within_tolerance(closed.value, direct) {
            report.failures.push(Deviation {
                point: point.clone(),
                closed_form: closed.value,
                direct,
            });
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laplace::sum_via_integral;

    #[test]
    fn examples() {
        let v = eval_identity("sine", &[PI / 2.0], 3).unwrap().value;
        assert!(v.norm() < 1e-15);
        let v = eval_identity("cosine", &[PI / 2.0], 4).unwrap().value;
        assert!(v.norm() < 1e-15);
        let v = eval_identity("k-cosine", &[PI], 4).unwrap().value;
        assert!((v.re - 2.0).abs() < 1e-14);
        let v = eval_identity("exp-cosine", &[1.0, PI], 2).unwrap().value;
        let want = -(-1f64).exp() + (-2f64).exp();
        assert!((v.re - want).abs() < 1e-15);
        assert!((v.re + 0.232_544_2).abs() < 1e-7);
    }

    #[test]
    fn domain_checks() {
        assert!(matches!(eval_identity("sine", &[0.0], 3), Err(Error::Domain(_))));
        assert!(matches!(eval_identity("sine", &[7.0], 3), Err(Error::Domain(_))));
        assert!(matches!(eval_identity("exp-cosine", &[0.0, 1.0], 3), Err(Error::Domain(_))));
        assert!(matches!(eval_identity("power", &[1.0], 3), Err(Error::Domain(_))));
        assert!(matches!(eval_identity("nope", &[1.0], 3), Err(Error::Domain(_))));
        assert!(eval_identity("cosine", &[0.05], 3).unwrap().warning.is_some());
        assert!(eval_identity("cosine", &[1.0], 3).unwrap().warning.is_none());
    }

    #[test]
    fn default_grids_pass() {
        for id in &IDENTITIES {
            let r = verify_identity(id.name, Grid::Default).unwrap();
            assert!(r.passed(), "{}: {:?}", id.name, &r.failures[..r.failures.len().min(3)]);
        }
    }

    #[test]
    fn single_term_reduction() {
        let samples: [(&str, Vec<f64>); 6] = [
            ("geometric", vec![0.7, 1.3]),
            ("sine", vec![2.1]),
            ("cosine", vec![4.4]),
            ("exp-cosine", vec![0.5, 1.1]),
            ("k-cosine", vec![3.3]),
            ("power", vec![2.5]),
        ];
        for (name, params) in samples {
            let id = lookup(name).unwrap();
            let closed = id.eval(&params, 1).unwrap().value;
            let g1 = (id.term)(&params, re(1.0));
            assert!((closed - g1).norm() < 1e-13, "{name}");
        }
    }

    #[test]
    fn engine_coherence() {
        let samples: [(&str, Vec<f64>); 6] = [
            ("geometric", vec![0.7, 1.3]),
            ("sine", vec![2.1]),
            ("cosine", vec![4.4]),
            ("exp-cosine", vec![0.5, 1.1]),
            ("k-cosine", vec![3.3]),
            ("power", vec![2.5]),
        ];
        for (name, params) in samples {
            let id = lookup(name).unwrap();
            let pair = id.transform_pair(&params).unwrap();
            let kernel = pair.build_kernel().unwrap();
            for n in [1u64, 4, 17] {
                let spec = SeriesSpec::from_fn(pair, n);
                let via = sum_via_integral(&spec, &kernel, 1e-12).unwrap().value;
                let closed = id.eval(&params, n).unwrap().value;
                let tol = if pair.is_delta() { 1e-13 } else { 1e-10 };
                assert!((via - closed).norm() <= tol * closed.norm().max(1.0), "{name} N={n}: {via} vs {closed}");
            }
        }
    }

    #[test]
    fn matching_recognized_pairs() {
        let pair = TransformPair {
            coeff: re(2.0),
            kind: PairKind::Delta {
                decay: re(0.0),
                trig: Some((Trig::Sin, 0.5)),
                k_power: 0,
            },
        };
        let m = match_identity(&pair, 1.0).unwrap();
        assert_eq!(m.identity, "sine");
        assert_eq!(m.params, vec![0.5]);
        assert_eq!(m.scale, re(2.0));
        let pair = TransformPair {
            coeff: re(1.0),
            kind: PairKind::InversePower { s: 1.0 },
        };
        assert!(match_identity(&pair, 1.0).is_none());
    }
}
