use super::*;
use approx::assert_relative_eq;
use std::vec;
use std::vec::Vec;

fn all_laws() -> Vec<SpacingLaw> {
    vec![
        SpacingLaw::Exponential,
        SpacingLaw::WignerSurmise,
        SpacingLaw::GoeLowerBound,
        SpacingLaw::GoeUpperBound,
        SpacingLaw::gamma(2.0, 3.5).unwrap(),
        SpacingLaw::unit_mean_gamma(2.42).unwrap(),
        SpacingLaw::unit_mean_gamma(9.606).unwrap(),
        SpacingLaw::generalized_gamma(0.0, 1.0).unwrap(),
        EnsembleClass::Goe.caer_law(),
        EnsembleClass::Gue.caer_law(),
        EnsembleClass::Gse.caer_law(),
    ]
}

/// Composite 8-point-per-side Gauss–Legendre, independent of `quad`.
fn gl_integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    const X: [f64; 4] = [
        0.183_434_642_495_649_8,
        0.525_532_409_916_329,
        0.796_666_477_413_626_7,
        0.960_289_856_497_536_3,
    ];
    const W: [f64; 4] = [
        0.362_683_783_378_362,
        0.313_706_645_877_887_3,
        0.222_381_034_453_374_5,
        0.101_228_536_290_376_3,
    ];
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|p| {
            let mid = a + (p as f64 + 0.5) * h;
            X.iter()
                .zip(W.iter())
                .map(|(x, w)| w * 0.5 * h * (f(mid - 0.5 * h * x) + f(mid + 0.5 * h * x)))
                .sum::<f64>()
        })
        .sum()
}

#[test]
fn wigner_closed_forms() {
    assert_eq!(wigner_cdf(0.0).unwrap(), 0.0);
    assert_relative_eq!(
        wigner_cdf(1.0).unwrap(),
        1.0 - (-PI / 4.0).exp(),
        epsilon = 1e-15
    );
    assert_relative_eq!(wigner_cdf(1.0).unwrap(), 0.544_061_872_234, epsilon = 1e-12);
    assert_eq!(wigner_pdf(0.0).unwrap(), 0.0);
    assert!(wigner_cdf(-1.0).is_err());
    assert!(wigner_pdf(-1e-9).is_err());
}

#[test]
fn wigner_pdf_is_derivative_of_cdf() {
    let h = 1e-6;
    let fd = (wigner_cdf(1.0 + h).unwrap() - wigner_cdf(1.0 - h).unwrap()) / (2.0 * h);
    assert!((wigner_pdf(1.0).unwrap() - fd).abs() < 1e-9);
    assert_relative_eq!(
        wigner_pdf(1.0).unwrap(),
        0.5 * PI * (-PI / 4.0).exp(),
        epsilon = 1e-15
    );
}

#[test]
fn wigner_mode_by_bisection() {
    // root of d/ds w(s) by bisection on a central difference
    let slope = |s: f64| (wigner_pdf(s + 1e-7).unwrap() - wigner_pdf(s - 1e-7).unwrap()) / 2e-7;
    let (mut lo, mut hi) = (0.1, 2.0);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if slope(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    assert!((0.5 * (lo + hi) - (2.0 / PI).sqrt()).abs() < 1e-6);
}

#[test]
fn closed_form_moments() {
    let w = SpacingLaw::WignerSurmise.moments(2).unwrap();
    assert!((w.mean() - 1.0).abs() < 1e-8);
    assert!((w.variance() - (4.0 - PI) / PI).abs() < 1e-8);

    let l = SpacingLaw::GoeLowerBound.moments(2).unwrap();
    assert!((l.mean() - 2.0 / PI.sqrt()).abs() < 1e-8);
    assert!((l.variance() - 4.0 * (4.0 - PI) / (PI * PI)).abs() < 1e-8);

    let u = SpacingLaw::GoeUpperBound.moments(2).unwrap();
    assert!((u.mass() - 1.0).abs() < 1e-8);
    assert!((u.variance() - (96.0 - 25.0 * PI) / (9.0 * PI * PI)).abs() < 1e-8);
    // 5/(3√π), not 5/(3√5) ≈ 0.745
    assert!((u.mean() - 5.0 / (3.0 * PI.sqrt())).abs() < 1e-8);
}

#[test]
fn upper_bound_mean_matches_independent_quadrature() {
    let oracle = gl_integrate(
        |s| s * goe_bound_pdf(s, BoundSide::Upper).unwrap(),
        0.0,
        12.0,
        2000,
    );
    assert!((oracle - 0.940_315_972_579_593_8).abs() < 1e-12);
    let u = SpacingLaw::GoeUpperBound.moments(1).unwrap();
    assert!((u.mean() - oracle).abs() < 1e-10);
}

#[test]
fn printed_bound_densities_integrate_to_one() {
    for side in [BoundSide::Lower, BoundSide::Upper] {
        let mass = gl_integrate(|s| goe_bound_pdf(s, side).unwrap(), 0.0, 12.0, 2000);
        assert!((mass - 1.0).abs() < 1e-8, "{side:?}: {mass}");
    }
}

#[test]
fn upper_density_turns_negative_past_eight_over_pi() {
    let edge = 8.0 / PI;
    assert!(goe_bound_pdf(edge - 1e-6, BoundSide::Upper).unwrap() > 0.0);
    assert!(goe_bound_pdf(edge + 1e-6, BoundSide::Upper).unwrap() < 0.0);
    assert!(SpacingLaw::GoeUpperBound.sample(10, 0).is_err());
    assert!(!SpacingLaw::GoeUpperBound.is_distribution());
}

#[test]
fn bound_ordering_on_grid() {
    for i in 0..=1000 {
        let s = 6.0 * i as f64 / 1000.0;
        let lo = goe_bound_cdf(s, BoundSide::Lower).unwrap();
        let hi = goe_bound_cdf(s, BoundSide::Upper).unwrap();
        assert!(lo <= hi, "L({s}) = {lo} > U({s}) = {hi}");
    }
}

#[test]
fn every_law_has_unit_mass() {
    for law in all_laws() {
        let m = law.moments(0).unwrap();
        assert!((m.mass() - 1.0).abs() < 1e-8, "{law}: mass {}", m.mass());
    }
}

#[test]
fn unit_mean_families_have_unit_mean() {
    for law in all_laws() {
        if matches!(
            law,
            SpacingLaw::UnitMeanGamma(_) | SpacingLaw::GeneralizedGamma(_)
        ) {
            let m = law.moments(2).unwrap();
            assert!((m.mean() - 1.0).abs() < 1e-8, "{law}: mean {}", m.mean());
        }
    }
}

// Γ(2.42) to 20 digits
const GAMMA_2_42: f64 = 1.258_625_221_244_669_4;

#[test]
fn gamma_density_cases() {
    for s in [0.1, 1.0, 3.7] {
        assert_relative_eq!(
            gamma_pdf(s, 1.0, 1.0).unwrap(),
            (-s).exp(),
            max_relative = 1e-14
        );
        assert_relative_eq!(
            gamma_cdf(s, 1.0, 1.0).unwrap(),
            1.0 - (-s).exp(),
            max_relative = 1e-14
        );
    }
    assert_eq!(gamma_cdf(0.0, 3.0, 2.0).unwrap(), 0.0);
    // direct product at a moderate argument
    let direct = 2.42f64.powf(2.42) * 1f64.powf(1.42) / GAMMA_2_42 * (-2.42f64).exp();
    assert_relative_eq!(
        gamma_pdf(1.0, 2.42, 2.42).unwrap(),
        direct,
        max_relative = 1e-13
    );
    assert!(gamma_pdf(0.0, 1.0, 0.5).is_err());
    assert_eq!(gamma_pdf(0.0, 2.0, 1.0).unwrap(), 2.0);
    assert!(gamma_pdf(1.0, 0.0, 1.0).is_err());
    assert!(gamma_pdf(1.0, 1.0, -2.0).is_err());
}

#[test]
fn unit_mean_gamma_variance_is_reciprocal_shape() {
    for k in [1.0, 2.42, 4.247, 9.606] {
        let m = SpacingLaw::unit_mean_gamma(k).unwrap().moments(2).unwrap();
        assert!((m.variance() - 1.0 / k).abs() < 1e-8);
    }
}

#[test]
fn gamma_cdf_reaches_one_in_the_tail() {
    for (rate, shape) in [(1.0, 1.0), (2.42, 2.42), (0.5, 9.606), (3.0, 0.3)] {
        let s = 50.0 * (1.0 + shape) / rate;
        assert!((1.0 - gamma_cdf(s, rate, shape).unwrap()).abs() < 1e-12);
    }
}

#[test]
fn gen_gamma_coefficients() {
    assert_eq!(gen_gamma_coeffs(0.0, 1.0).unwrap(), (1.0, 1.0));
    // (1, 2) is the Wigner surmise: a = π/2, b = π/4
    let (a, b) = gen_gamma_coeffs(1.0, 2.0).unwrap();
    assert_relative_eq!(a, PI / 2.0, max_relative = 1e-14);
    assert_relative_eq!(b, PI / 4.0, max_relative = 1e-14);
    for s in [0.2, 1.0, 2.5] {
        assert_relative_eq!(
            gen_gamma_pdf(s, 1.0, 2.0).unwrap(),
            wigner_pdf(s).unwrap(),
            max_relative = 1e-13
        );
    }
    let mean = gl_integrate(|s| s * gen_gamma_pdf(s, 1.0, 2.0).unwrap(), 0.0, 10.0, 500);
    assert!((mean - 1.0).abs() < 1e-12);
    assert!(gen_gamma_coeffs(-0.5, 1.0).is_err());
    assert!(gen_gamma_coeffs(1.0, 0.0).is_err());
}

#[test]
fn exponential_recovered_pointwise() {
    for i in 0..=1000 {
        let s = i as f64 * 0.01;
        assert!((gen_gamma_pdf(s, 0.0, 1.0).unwrap() - (-s).exp()).abs() <= 1e-12);
    }
}

#[test]
fn caer_laws_unit_mean_and_variance() {
    // 30-digit evaluations of the Γ-ratio moment formula
    let exact = [
        (EnsembleClass::Goe, 0.285_566_808_720_025_2),
        (EnsembleClass::Gue, 0.180_058_454_242_437_83),
        (EnsembleClass::Gse, 0.104_149_454_618_385_98),
    ];
    for (class, var) in exact {
        let m = class.caer_law().moments(2).unwrap();
        assert!((m.mean() - 1.0).abs() < 1e-6);
        assert!(
            (m.variance() - var).abs() < 1e-10,
            "{class}: {}",
            m.variance()
        );
    }
    // only the GOE row of the tabulated variances agrees with its own law
    let goe = EnsembleClass::Goe.caer_law().moments(2).unwrap();
    assert!((goe.variance() - EnsembleClass::Goe.caer_variance()).abs() < 5e-3);
}

#[test]
fn near_origin_exponents() {
    let slope = |law: &SpacingLaw| {
        let (s1, s2) = (1e-4, 1e-3);
        (law.pdf(s2).unwrap().ln() - law.pdf(s1).unwrap().ln()) / (s2.ln() - s1.ln())
    };
    for class in [EnsembleClass::Goe, EnsembleClass::Gue, EnsembleClass::Gse] {
        assert!((slope(&class.caer_law()) - class.caer_beta()).abs() < 0.01);
    }
    assert!((slope(&SpacingLaw::WignerSurmise) - 1.0).abs() < 0.01);
    for k in [1.5, 2.42, 4.247] {
        assert!((slope(&SpacingLaw::unit_mean_gamma(k).unwrap()) - (k - 1.0)).abs() < 0.01);
    }
    let g = GenGamma::new(2.0, 1.973).unwrap();
    assert_relative_eq!(g.density(1e-6) / 1e-12, g.a(), max_relative = 1e-5);
}

#[test]
fn sampling_statistics() {
    let exp = SpacingLaw::Exponential.sample(100_000, 11).unwrap();
    assert!((0.99..=1.01).contains(&exp.mean()));

    for k in [2.42, 9.606] {
        let s = SpacingLaw::unit_mean_gamma(k)
            .unwrap()
            .sample(100_000, 5)
            .unwrap();
        let m = s.mean();
        let var =
            s.spacings().iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (s.len() - 1) as f64;
        assert!((var * k - 1.0).abs() < 0.05, "κ = {k}: variance {var}");
    }

    let n = 100_000;
    for law in all_laws().into_iter().filter(SpacingLaw::is_distribution) {
        let m = law.moments(2).unwrap();
        let s = law.sample(n, 99).unwrap();
        let bound = 5.0 * m.variance().sqrt() / (n as f64).sqrt();
        assert!((s.mean() - m.mean()).abs() < bound, "{law}");
    }
}

#[test]
fn sampling_is_deterministic() {
    let law = EnsembleClass::Gue.caer_law();
    assert_eq!(law.sample(1000, 3).unwrap(), law.sample(1000, 3).unwrap());
    assert_ne!(law.sample(1000, 3).unwrap(), law.sample(1000, 4).unwrap());
    assert!(law.sample(0, 3).is_err());
}

#[test]
fn ks_between_laws() {
    let grid = default_grid();
    assert_eq!(grid.len(), 6001);
    let wig = SpacingLaw::WignerSurmise;
    let exp = SpacingLaw::Exponential;
    assert_eq!(ks_distance(&wig, &wig, &grid).unwrap(), 0.0);
    let d = ks_distance(&exp, &wig, &grid).unwrap();
    assert_eq!(d, ks_distance(&wig, &exp, &grid).unwrap());

    // golden-section maxima of |e^{-πs²/4} − e^{-s}| either side of the crossing at 4/π
    let gap = |s: f64| ((-PI * s * s / 4.0).exp() - (-s).exp()).abs();
    let golden = |mut a: f64, mut b: f64| {
        let phi = 0.5 * (5f64.sqrt() - 1.0);
        for _ in 0..200 {
            let c = b - phi * (b - a);
            let e = a + phi * (b - a);
            if gap(c) > gap(e) {
                b = e;
            } else {
                a = c;
            }
        }
        gap(0.5 * (a + b))
    };
    let sup = golden(0.0, 4.0 / PI).max(golden(4.0 / PI, 6.0));
    assert!(d <= sup + 1e-15 && sup - d < 1e-6, "grid {d} vs sup {sup}");
    assert!(ks_distance(&exp, &wig, &[]).is_err());
    assert!(ks_distance(&exp, &wig, &[1.0, 0.5]).is_err());
}

#[test]
fn empirical_ks_small_cases() {
    let exp = SpacingLaw::Exponential;
    let d = empirical_ks(&[1.0], &exp).unwrap();
    let f = 1.0 - (-1.0f64).exp();
    assert_relative_eq!(d, f.max(1.0 - f), epsilon = 1e-15);
    assert!(empirical_ks(&[], &exp).is_err());

    let sample = SpacingLaw::WignerSurmise.sample(20_000, 8).unwrap();
    let d = empirical_ks(sample.spacings(), &SpacingLaw::WignerSurmise).unwrap();
    assert!(d < 1.63 / (20_000f64).sqrt());
}

#[test]
fn two_sample_ks_cases() {
    assert_eq!(
        two_sample_ks(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]).unwrap(),
        0.0
    );
    assert_eq!(two_sample_ks(&[1.0, 2.0], &[3.0, 4.0]).unwrap(), 1.0);
    assert_relative_eq!(two_sample_ks(&[1.0, 2.0, 3.0], &[2.5]).unwrap(), 2.0 / 3.0);
}

#[test]
fn tabulated_cdf_interpolates() {
    let t = TabulatedCdf::new(vec![(0.5, 0.2), (1.0, 0.6), (2.0, 0.9)]).unwrap();
    assert_relative_eq!(t.cdf_at(0.25), 0.1);
    assert_relative_eq!(t.cdf_at(0.75), 0.4);
    assert_relative_eq!(t.cdf_at(1.5), 0.75);
    assert_eq!(t.cdf_at(5.0), 0.9);
    assert_eq!(t.cdf_at(-1.0), 0.0);
    assert!(TabulatedCdf::new(vec![(0.5, 0.2), (0.5, 0.3)]).is_err());
    assert!(TabulatedCdf::new(vec![(0.5, 0.2), (0.6, 0.2)]).is_err());
    assert!(TabulatedCdf::new(vec![(0.5, 1.2)]).is_err());
}

#[test]
fn law_labels_round_trip() {
    for law in all_laws() {
        let parsed: SpacingLaw = law.label().parse().unwrap();
        assert_eq!(parsed, law);
    }
    assert_eq!(
        "caer-gue".parse::<SpacingLaw>().unwrap(),
        EnsembleClass::Gue.caer_law()
    );
    assert!("gamma:1".parse::<SpacingLaw>().is_err());
    assert!("nonsense".parse::<SpacingLaw>().is_err());
}

proptest::proptest! {
    #[test]
    fn cdf_derivative_matches_pdf(s in 0.1f64..4.0) {
        let h = 1e-5;
        for law in all_laws() {
            let fd = (law.cdf(s + h).unwrap() - law.cdf(s - h).unwrap()) / (2.0 * h);
            let pdf = law.pdf(s).unwrap();
            proptest::prop_assert!((fd - pdf).abs() < 1e-6, "{} at {}: {} vs {}", law, s, fd, pdf);
        }
    }

    #[test]
    fn cdf_monotone_and_bounded(s in 0.0f64..8.0, ds in 0.0f64..1.0) {
        for law in all_laws().into_iter().filter(SpacingLaw::is_distribution) {
            let a = law.cdf(s).unwrap();
            let b = law.cdf(s + ds).unwrap();
            proptest::prop_assert!((0.0..=1.0).contains(&a));
            proptest::prop_assert!(b >= a - 1e-15);
        }
    }
}
