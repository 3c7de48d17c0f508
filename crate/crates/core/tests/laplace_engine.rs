use std::f64::consts::PI;
use std::sync::Arc;

use finsum_core::expr::parse_expression;
use finsum_core::kernels::{laplace_of_kernel, recognize_pair, PairKind, TransformPair, Trig};
use finsum_core::laplace::{delta_type_b, sum_via_integral, zeta_expansion_sum, VariantKernel};
use finsum_core::{direct_sum, Complex64, Error, IndexFn, SeriesSpec, Variant};
use proptest::prelude::*;

type C64 = Complex64;

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn via_integral(text: &str, n: u64, alpha: f64, variant: Variant, beta: f64, tol: f64) -> (C64, C64) {
    let r = recognize_pair(&parse_expression(text).unwrap()).unwrap();
    let kernel = r.kernel().unwrap();
    let spec = SeriesSpec::new(Arc::new(r), n)
        .with_alpha(re(alpha))
        .with_variant(variant, re(beta));
    let got = sum_via_integral(&spec, &kernel, tol).unwrap();
    assert!(got.diagnostics.converged, "{text} N={n}");
    (got.value, direct_sum(&spec).unwrap().value)
}

#[test]
fn smooth_catalog_agrees_with_oracle() {
    let tol = 1e-10;
    for text in ["1/k", "1/k^2", "k^-1.5", "1/k^3", "0.5/(k^2+0.25)", "2/(k^2+4)", "k/(k^2+1)", "3/k^2 - exp(-k)"] {
        for n in [1u64, 2, 10, 50] {
            let (got, want) = via_integral(text, n, 1.0, Variant::Standard, 0.0, tol);
            let bound = (10.0 * tol).max(1e-10 * want.norm());
            assert!((got - want).norm() <= bound, "{text} N={n}: {got} vs {want}");
        }
    }
}

#[test]
fn delta_catalog_is_exact_for_every_variant() {
    let texts = ["exp(-0.7*k)", "cos(1.3*k)", "sin(0.4*k)", "exp(-0.5*k)*cos(2*k)", "k*cos(0.9*k)", "k^2*exp(-0.3*k)", "k"];
    for text in texts {
        for variant in Variant::ALL {
            let ns: &[u64] = if variant.is_alternating() { &[2, 4, 10] } else { &[1, 3, 10] };
            for &n in ns {
                let (got, want) = via_integral(text, n, 1.0, variant, 0.8, 1e-12);
                assert!(
                    (got - want).norm() <= 1e-12 * want.norm().max(1.0),
                    "{text} {variant} N={n}: {got} vs {want}"
                );
            }
        }
    }
}

#[test]
fn odd_alternating_is_rejected() {
    let r = recognize_pair(&parse_expression("exp(-k)").unwrap()).unwrap();
    let kernel = r.kernel().unwrap();
    for variant in Variant::ALL.into_iter().filter(|v| v.is_alternating()) {
        let spec = SeriesSpec::new(Arc::new(r.clone()), 3).with_variant(variant, re(1.0));
        assert!(matches!(sum_via_integral(&spec, &kernel, 1e-10), Err(Error::Precondition(_))));
    }
}

#[test]
fn parameter_coherence() {
    for alpha in [0.5, 1.0, 2.0] {
        for text in ["exp(-k)", "1/(k^2+1)", "1/k^2", "cos(0.3*k)"] {
            let (got, want) = via_integral(text, 12, alpha, Variant::Standard, 0.0, 1e-11);
            assert!((got - want).norm() <= 1e-10 * want.norm().max(1.0), "{text} alpha={alpha}");
        }
    }
}

#[test]
fn scaling_identity() {
    let f = |a: f64, alpha: f64| delta_type_b(a, 7).unwrap().closed_form(re(alpha));
    assert!((f(2.0, 1.0) - f(1.0, 2.0)).norm() < 1e-15);
    assert!((f(0.5, 3.0) - f(1.5, 1.0)).norm() < 1e-15);
}

#[test]
fn delta_comb_transform_matches_closed_form() {
    for (a, n) in [(1.0, 2u64), (0.5, 1), (2.0, 3), (0.3, 25)] {
        let d = delta_type_b(a, n).unwrap();
        assert_eq!(d.comb.atoms().len() as u64, n);
        for alpha in [0.5, 1.0, 2.0] {
            let lhs = d.comb.laplace(re(alpha));
            let rhs = d.closed_form(re(alpha));
            assert!((lhs - rhs).norm() <= 1e-13 * rhs.norm(), "a={a} N={n} alpha={alpha}");
        }
    }
}

#[test]
fn zeta_expansion_findings() {
    let r = zeta_expansion_sum(1.0, 1.0, 10, 60).unwrap();
    assert!(r.diagnostics.divergent);
    let onset = r.diagnostics.truncation_index.unwrap();
    println!("a=1 alpha=1 N=10: divergence onset at term {onset}, stopped after {} terms", r.diagnostics.nodes_used);

    let small = zeta_expansion_sum(0.1, 0.1, 1, 60).unwrap();
    let oracle = 0.1 / (1.0 + 0.01);
    println!(
        "a=0.1 alpha=0.1 N=1: divergent={} converged={} value={} oracle={oracle}",
        small.diagnostics.divergent, small.diagnostics.converged, small.value
    );

    // The integral route on the same series is sound.
    let spec = SeriesSpec::from_fn(|k: C64| (k * k + 1.0).inv(), 10);
    let kernel = recognize_pair(&parse_expression("1/(k^2+1)").unwrap()).unwrap().kernel().unwrap();
    let via = sum_via_integral(&spec, &kernel, 1e-11).unwrap();
    let want = direct_sum(&spec).unwrap().value;
    assert!((via.value - want).norm() <= 1e-9);
}

fn catalog_pair() -> impl Strategy<Value = TransformPair> {
    let coeff = (-3.0..3.0f64).prop_map(re);
    let delta = (coeff.clone(), 0.0..2.0f64, prop::option::of((prop::bool::ANY, 0.1..3.0f64)), 0u8..=3).prop_map(
        |(coeff, decay, trig, k_power)| TransformPair {
            coeff,
            kind: PairKind::Delta {
                decay: re(decay),
                trig: trig.map(|(s, t)| (if s { Trig::Sin } else { Trig::Cos }, t)),
                k_power,
            },
        },
    );
    let smooth = (coeff, 0.2..3.0f64, 0usize..3).prop_map(|(coeff, p, which)| TransformPair {
        coeff,
        kind: match which {
            0 => PairKind::RationalSine { a: p },
            1 => PairKind::RationalCosine { a: p },
            _ => PairKind::InversePower { s: 0.5 + p },
        },
    });
    prop_oneof![delta, smooth]
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 100, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn kernel_round_trip(pair in catalog_pair(), k in 0.5..6.0f64) {
        let kernel = pair.build_kernel().unwrap();
        let got = laplace_of_kernel(&kernel, re(k)).unwrap();
        let want = pair.eval(re(k));
        prop_assert!((got - want).norm() <= 1e-9 * want.norm().max(1.0), "{:?} at {}: {} vs {}", pair, k, got, want);
    }

    #[test]
    fn phi_derivative_matches_finite_differences(
        n in 1u64..20,
        t in 0.05..3.0f64,
        alpha in 0.3..2.0f64,
        order in 1usize..=3,
        variant_ix in 0usize..6,
    ) {
        let variant = Variant::ALL[variant_ix];
        let n = if variant.is_alternating() { 2 * n } else { n };
        let vk = VariantKernel::new(variant, re(alpha), re(0.6), n).unwrap();
        let h = 1e-3;
        // fourth-order central differences of the next lower derivative
        let lower = |x: f64| vk.phi_derivative(re(x), order - 1).unwrap();
        let fd = (lower(t - 2.0 * h) - lower(t - h) * 8.0 + lower(t + h) * 8.0 - lower(t + 2.0 * h)) / (12.0 * h);
        let exact = vk.phi_derivative(re(t), order).unwrap();
        prop_assert!((exact - fd).norm() <= 1e-6 * exact.norm().max(1.0), "{} vs {}", exact, fd);
    }

    #[test]
    fn phi_is_the_weighted_exponential_sum(n in 1u64..30, t in -1.0..4.0f64, im in -8.0..8.0f64, variant_ix in 0usize..6) {
        let variant = Variant::ALL[variant_ix];
        let n = if variant.is_alternating() { 2 * n } else { n };
        let beta = re(0.4);
        let vk = VariantKernel::new(variant, re(1.0), beta, n).unwrap();
        let tc = C64::new(t.max(0.0), im);
        let direct: C64 = (1..=n)
            .map(|k| variant.weight(k, beta) * (-(tc * k as f64 + variant.shift(beta) * tc)).exp())
            .sum();
        let got = vk.phi(tc).unwrap();
        prop_assert!((got - direct).norm() <= 1e-11 * direct.norm().max(1.0), "{} vs {}", got, direct);
    }
}

#[test]
fn removable_points_on_the_imaginary_axis() {
    let vk = VariantKernel::standard(re(1.0), 6).unwrap();
    for m in [-2.0, -1.0, 1.0, 3.0] {
        let v = vk.phi(C64::new(0.0, 2.0 * PI * m)).unwrap();
        assert!((v - 6.0).norm() < 1e-12);
    }
    let alt = VariantKernel::new(Variant::Alternating, re(1.0), re(0.0), 6).unwrap();
    let v = alt.phi(C64::new(0.0, PI)).unwrap();
    assert!((v + 6.0).norm() < 1e-12);
}

#[test]
fn reduced_arguments_keep_ill_conditioned_sums_accurate() {
    // Σ k cos(5.6 k), k = 1..50, to 40 digits with the double 5.6
    let want = -0.054_966_600_531_682_200_97;
    let r = recognize_pair(&parse_expression("k*cos(5.6*k)").unwrap()).unwrap();
    let spec = SeriesSpec::new(Arc::new(r.clone()), 50);
    let got = sum_via_integral(&spec, &r.kernel().unwrap(), 1e-12).unwrap().value;
    assert!((got.re - want).abs() < 3e-13, "{got}");
}
