use finsum_core::jet::Jet;
use finsum_core::series::JetFn;
use finsum_core::special::hurwitz_zeta;
use finsum_core::telescope::{telescoping_sum, zeta_power_sum};
use finsum_core::{direct_sum, IndexFn, SeriesSpec};

fn check(g: &(dyn IndexFn + 'static), name: &str) {
    let tol = 1e-11;
    for n in [1u64, 2, 5, 10, 100] {
        let r = telescoping_sum(g, n, tol, 1 << 22).unwrap();
        let want: f64 = (1..=n).map(|k| g.eval((k as f64).into()).re).sum();
        assert!(r.is_authoritative(), "{name} N={n}: {r:?}");
        assert!(
            (r.value.re - want).abs() <= (10.0 * tol).max(1e-9 * want.abs()),
            "{name} N={n}: {} vs {want}",
            r.value.re
        );
    }
}

#[test]
fn catalog_functions_agree_with_oracle() {
    check(&JetFn(|k: Jet| (-k).exp()), "exp(-k)");
    check(&JetFn(|k: Jet| k.recip()), "1/k");
    check(&JetFn(|k: Jet| k.powi(-2)), "1/k^2");
    check(&JetFn(|k: Jet| (k * k + finsum_core::C64::new(1.0, 0.0)).recip()), "1/(k^2+1)");
}

#[test]
fn non_decaying_functions_are_flagged() {
    let shifted = JetFn(|k: Jet| k.recip() + finsum_core::C64::new(1.0, 0.0));
    let r = telescoping_sum(&shifted, 5, 1e-10, 1 << 16).unwrap();
    assert!(!r.is_authoritative());
}

#[test]
fn zeta_power_agrees_with_oracle() {
    for s in [1.5, 2.0, 3.0] {
        for n in [1u64, 10, 1000] {
            let got = zeta_power_sum(s, n).unwrap().value.re;
            let spec = SeriesSpec::from_fn(move |k: finsum_core::C64| k.powf(-s), n);
            let want = direct_sum(&spec).unwrap().value.re;
            assert!((got - want).abs() <= 1e-11 * want, "s={s} N={n}: {got} vs {want}");
        }
    }
}

#[test]
fn hurwitz_tail_consistency() {
    // ζ(s, N) - N^-s = Σ_{k≥1} (k+N)^-s, bracketed by the partial sum to K
    // plus the integral bounds on the rest.
    for (s, n) in [(2.0, 3u64), (3.0, 10), (1.5, 7)] {
        let lhs = hurwitz_zeta(s, n as f64).unwrap() - (n as f64).powf(-s);
        for big_k in [1_000u64, 100_000] {
            let head: f64 = (1..=big_k).rev().map(|k| ((k + n) as f64).powf(-s)).sum();
            let lo = head + ((big_k + n + 1) as f64).powf(1.0 - s) / (s - 1.0);
            let hi = head + ((big_k + n) as f64).powf(1.0 - s) / (s - 1.0);
            assert!(lhs >= lo - 1e-13 && lhs <= hi + 1e-13, "s={s} N={n} K={big_k}");
        }
    }
}
