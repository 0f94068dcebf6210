use super::eigen::{
    collapse_pairs, hermitian_eigenvalues, jacobi_eigen, real_embedding, symmetric_eigenvalues,
};
use super::*;
use crate::laws::{empirical_ks, SpacingLaw};
use proptest::prelude::*;
use std::vec::Vec;

fn classes() -> [EnsembleClass; 3] {
    [EnsembleClass::Goe, EnsembleClass::Gue, EnsembleClass::Gse]
}

fn draw(class: EnsembleClass, n: usize, seed: u64) -> SampledMatrix {
    let spec = EnsembleSpec::new(class, n).unwrap();
    sample_matrix(&spec, &mut StreamRng::new(seed, 0)).unwrap()
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

#[test]
fn order_below_two_is_rejected() {
    assert!(EnsembleSpec::new(EnsembleClass::Goe, 1).is_err());
    assert!(EnsembleSpec::new(EnsembleClass::Goe, 2).is_ok());
}

#[test]
fn poisson_has_no_matrix() {
    let spec = EnsembleSpec::new(EnsembleClass::Poisson, 4).unwrap();
    let err = sample_matrix(&spec, &mut StreamRng::new(0, 0)).unwrap_err();
    assert!(matches!(err, Error::Unsupported(_)));
}

#[test]
fn empirical_entry_variances() {
    let trials = 20_000;
    for class in classes() {
        let spec = EnsembleSpec::new(class, 2).unwrap();
        let mut rng = StreamRng::new(3, 0);
        let mut diag = 0.0;
        let mut parts = Vec::new();
        for _ in 0..trials {
            let m = sample_matrix(&spec, &mut rng).unwrap();
            let entries = m.independent_entries();
            diag += entries[..2].iter().map(|e| e.value * e.value).sum::<f64>() / 2.0;
            if parts.is_empty() {
                parts = vec![0.0; entries.len() - 2];
            }
            for (acc, e) in parts.iter_mut().zip(&entries[2..]) {
                *acc += e.value * e.value;
            }
        }
        let want_diag = spec.diagonal_sd().powi(2);
        let want_off = spec.off_diagonal_sd().powi(2);
        let got_diag = diag / trials as f64;
        assert!(
            (got_diag / want_diag - 1.0).abs() < 0.03,
            "{class} diag {got_diag} vs {want_diag}"
        );
        for p in parts {
            let got = p / trials as f64;
            assert!(
                (got / want_off - 1.0).abs() < 0.03,
                "{class} off {got} vs {want_off}"
            );
        }
    }
}

#[test]
fn documented_entry_variances() {
    let var = |c, f: fn(&EnsembleSpec) -> f64| f(&EnsembleSpec::new(c, 3).unwrap()).powi(2);
    let cases = [
        (EnsembleClass::Goe, 1.0, 0.5),
        (EnsembleClass::Gue, 0.5, 0.25),
        (EnsembleClass::Gse, 0.25, 0.125),
    ];
    for (c, d, o) in cases {
        assert!((var(c, EnsembleSpec::diagonal_sd) - d).abs() < 1e-15);
        assert!((var(c, EnsembleSpec::off_diagonal_sd) - o).abs() < 1e-15);
    }
}

#[test]
fn log_density_of_a_known_matrix() {
    let m = SampledMatrix::Real {
        n: 2,
        diag: vec![1.0, 2.0],
        upper: vec![3.0],
    };
    assert_eq!(m.log_density(), -11.5);
    let q = SampledMatrix::Quaternion {
        n: 2,
        diag: vec![1.0, 0.0],
        z_upper: vec![Complex64::new(0.0, 1.0)],
        w_upper: vec![Complex64::new(1.0, 1.0)],
    };
    // 1 + 2 (1 + 2)
    assert_eq!(q.log_density(), -3.5);
}

#[test]
fn entry_density_is_exponential_in_the_trace() {
    for class in classes() {
        let beta = class.dyson_index() as f64;
        let offsets: Vec<f64> = (0..20)
            .map(|seed| {
                let m = draw(class, 5, seed);
                m.entry_log_likelihood() - beta * m.log_density()
            })
            .collect();
        for o in &offsets {
            assert!(
                (o - offsets[0]).abs() < 1e-9,
                "{class}: {o} vs {}",
                offsets[0]
            );
        }
    }
}

#[test]
fn dense_forms_are_hermitian() {
    for class in classes() {
        let m = draw(class, 4, 11);
        let k = m.dense_order();
        let a = m.to_dense_complex();
        for i in 0..k {
            for j in 0..k {
                assert_eq!(a[i * k + j], a[j * k + i].conj());
            }
        }
        let frob: f64 = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        assert!((frob - m.frobenius_norm()).abs() < 1e-12 * frob);
    }
}

#[test]
fn trivial_spectra() {
    let diag = [3.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, 2.0];
    assert_eq!(
        symmetric_eigenvalues(&diag, 3).unwrap(),
        vec![-1.0, 2.0, 3.0]
    );
    // [[2, 1], [1, 2]] has eigenvalues 1 and 3
    let two = symmetric_eigenvalues(&[2.0, 1.0, 1.0, 2.0], 2).unwrap();
    assert!(max_abs_diff(&two, &[1.0, 3.0]) < 1e-14);
    // [[0, −i], [i, 0]] has eigenvalues ±1
    let i = Complex64::new(0.0, 1.0);
    let pauli = [Complex64::new(0.0, 0.0), -i, i, Complex64::new(0.0, 0.0)];
    let eig = hermitian_eigenvalues(&pauli, 2).unwrap();
    assert!(max_abs_diff(&eig, &[-1.0, 1.0]) < 1e-14);
    assert_eq!(symmetric_eigenvalues(&[5.0], 1).unwrap(), vec![5.0]);
    assert!(symmetric_eigenvalues(&[1.0, 2.0], 2).is_err());
}

#[test]
fn jacobi_residuals_are_small() {
    for (n, seed) in [(2, 0), (7, 1), (30, 2)] {
        let m = draw(EnsembleClass::Goe, n, seed);
        let a = m.to_dense_real().unwrap();
        let dec = jacobi_eigen(&a, n).unwrap();
        let norm = m.frobenius_norm();
        for k in 0..n {
            let v = dec.vector(k);
            let residual: f64 = (0..n)
                .map(|i| {
                    let av: f64 = (0..n).map(|j| a[i * n + j] * v[j]).sum();
                    (av - dec.values[k] * v[i]).powi(2)
                })
                .sum::<f64>()
                .sqrt();
            assert!(residual <= 1e-10 * norm, "n={n} k={k} residual {residual}");
            let len: f64 = v.iter().map(|x| x * x).sum();
            assert!((len - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn tridiagonal_route_agrees_with_jacobi() {
    for n in [2, 3, 10, 40] {
        let m = draw(EnsembleClass::Goe, n, n as u64);
        let a = m.to_dense_real().unwrap();
        let fast = m.spectrum().unwrap().values;
        let slow = jacobi_eigen(&a, n).unwrap().values;
        assert!(
            max_abs_diff(&fast, &slow) < 1e-10 * m.frobenius_norm(),
            "GOE n={n}"
        );
    }
    for class in [EnsembleClass::Gue, EnsembleClass::Gse] {
        for n in [2, 5, 16] {
            let m = draw(class, n, 40 + n as u64);
            let k = m.dense_order();
            let embedded = real_embedding(&m.to_dense_complex(), k);
            let doubled = jacobi_eigen(&embedded, 2 * k).unwrap().values;
            let (mut slow, _) = collapse_pairs(&doubled, 1e-8).unwrap();
            if class == EnsembleClass::Gse {
                slow = collapse_pairs(&slow, 1e-8).unwrap().0;
            }
            let fast = m.spectrum().unwrap().values;
            assert!(
                max_abs_diff(&fast, &slow) < 1e-10 * m.frobenius_norm(),
                "{class} n={n}"
            );
        }
    }
}

#[test]
fn trace_is_preserved() {
    for class in classes() {
        let m = draw(class, 12, 5);
        let diag_sum: f64 = match &m {
            SampledMatrix::Real { diag, .. }
            | SampledMatrix::Complex { diag, .. }
            | SampledMatrix::Quaternion { diag, .. } => diag.iter().sum(),
        };
        let eig_sum: f64 = m.spectrum().unwrap().values.iter().sum();
        assert!((diag_sum - eig_sum).abs() < 1e-11, "{class}");
        let sq: f64 = m.spectrum().unwrap().values.iter().map(|x| x * x).sum();
        assert!(
            (sq - m.trace_square()).abs() < 1e-10 * m.trace_square(),
            "{class}"
        );
    }
}

#[test]
fn quaternion_pairs_are_degenerate() {
    for n in [2, 4, 8] {
        let spec = EnsembleSpec::new(EnsembleClass::Gse, n).unwrap();
        let mut worst: f64 = 0.0;
        for t in 0..1000 {
            let levels = sample_levels(&spec, &mut StreamRng::new(9, t)).unwrap();
            assert_eq!(levels.values.len(), n);
            worst = worst.max(levels.max_pair_gap.unwrap());
        }
        assert!(worst < 1e-9, "n={n}: worst pair gap {worst}");
    }
}

#[test]
fn collapse_rejects_split_pairs() {
    assert!(collapse_pairs(&[0.0, 0.0, 1.0, 1.5], 1e-8).is_err());
    assert!(collapse_pairs(&[0.0, 0.0, 1.0], 1e-8).is_err());
    let (v, gap) = collapse_pairs(&[-1.0, -1.0, 2.0, 2.0], 1e-8).unwrap();
    assert_eq!(v, vec![-1.0, 2.0]);
    assert_eq!(gap, 0.0);
}

#[test]
fn semicircle_edge_is_respected() {
    for (class, trials) in [
        (EnsembleClass::Goe, 200),
        (EnsembleClass::Gue, 100),
        (EnsembleClass::Gse, 40),
    ] {
        let n = 256;
        let spec = EnsembleSpec::new(class, n).unwrap();
        let edge = 1.05 * semicircle_radius(n);
        let mut outside = 0usize;
        for t in 0..trials {
            let levels = sample_levels(&spec, &mut StreamRng::new(21, t)).unwrap();
            outside += levels.values.iter().filter(|x| x.abs() > edge).count();
        }
        let frac = outside as f64 / (trials as usize * n) as f64;
        assert!(frac <= 0.005, "{class}: {frac}");
    }
}

#[test]
fn semicircle_cdf_values() {
    assert_eq!(semicircle_cdf(-1.0), 0.0);
    assert_eq!(semicircle_cdf(-3.0), 0.0);
    assert_eq!(semicircle_cdf(0.0), 0.5);
    assert!((semicircle_cdf(1.0) - 1.0).abs() < 1e-15);
    for t in [0.1, 0.5, 0.9] {
        assert!((semicircle_cdf(t) + semicircle_cdf(-t) - 1.0).abs() < 1e-15);
    }
    // derivative is (2/π)√(1 − t²)
    let h = 1e-6;
    let fd = (semicircle_cdf(0.3 + h) - semicircle_cdf(0.3 - h)) / (2.0 * h);
    assert!((fd - 2.0 / core::f64::consts::PI * (1.0f64 - 0.09).sqrt()).abs() < 1e-8);
}

#[test]
fn unfolded_goe_has_unit_mean() {
    let spec = EnsembleSpec::new(EnsembleClass::Goe, 64).unwrap();
    let run = monte_carlo_spacings(&spec, 300, ExtractionMode::SemicircleUnfolded, 4).unwrap();
    let raw_mean = run.sample.grand_mean_used();
    assert!((raw_mean - 1.0).abs() < 0.03, "{raw_mean}");
    assert_eq!(run.sample.len(), 300 * 31);
}

#[test]
fn poisson_control_is_exponential() {
    let spec = EnsembleSpec::new(EnsembleClass::Poisson, 1000).unwrap();
    let run = monte_carlo_spacings(&spec, 50, ExtractionMode::SemicircleUnfolded, 8).unwrap();
    let ks = empirical_ks(run.sample.spacings(), &SpacingLaw::Exponential).unwrap();
    assert!(ks < 0.02, "{ks}");
    assert!((run.sample.grand_mean_used() - 1.0).abs() < 0.02);
}

#[test]
fn central_goe_spacing_is_close_to_the_surmise() {
    let spec = EnsembleSpec::new(EnsembleClass::Goe, 32).unwrap();
    let run = monte_carlo_spacings(&spec, 5000, ExtractionMode::CentralSpacing, 1).unwrap();
    assert_eq!(run.sample.len(), 5000);
    let ks = empirical_ks(run.sample.spacings(), &SpacingLaw::WignerSurmise).unwrap();
    assert!(ks < 0.03, "{ks}");
}

#[test]
fn extraction_modes_on_fixed_levels() {
    let even = [0.0, 1.0, 3.0, 6.0];
    let goe = EnsembleClass::Goe;
    assert_eq!(
        extract_spacings(&even, ExtractionMode::AllConsecutive, goe).unwrap(),
        vec![1.0, 2.0, 3.0]
    );
    assert_eq!(
        extract_spacings(&even, ExtractionMode::CentralSpacing, goe).unwrap(),
        vec![2.0]
    );
    let odd = [0.0, 1.0, 3.0, 6.0, 10.0];
    assert_eq!(
        extract_spacings(&odd, ExtractionMode::CentralSpacing, goe).unwrap(),
        vec![3.0]
    );
    let pair = [-1.0, 1.0];
    assert_eq!(
        extract_spacings(&pair, ExtractionMode::CentralSpacing, goe).unwrap(),
        vec![2.0]
    );
    assert_eq!(middle_half(8), 2..6);
    assert_eq!(middle_half(2), 0..2);
    assert!(extract_spacings(&[1.0], ExtractionMode::AllConsecutive, goe).is_err());
    assert!(extract_spacings(&[1.0, 0.0], ExtractionMode::AllConsecutive, goe).is_err());
}

#[test]
fn mode_names_round_trip() {
    for mode in ExtractionMode::ALL {
        assert_eq!(mode.name().parse::<ExtractionMode>().unwrap(), mode);
    }
    assert!("middle".parse::<ExtractionMode>().is_err());
}

#[test]
fn trials_are_reproducible_and_independent() {
    let spec = EnsembleSpec::new(EnsembleClass::Gue, 8).unwrap();
    let a = run_trial(&spec, ExtractionMode::AllConsecutive, 5, 3).unwrap();
    let b = run_trial(&spec, ExtractionMode::AllConsecutive, 5, 3).unwrap();
    let c = run_trial(&spec, ExtractionMode::AllConsecutive, 5, 4).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, c);
    let run = monte_carlo_spacings(&spec, 10, ExtractionMode::AllConsecutive, 5).unwrap();
    assert_eq!(
        run.sample.provenance(),
        "ensemble=gue n=8 mode=all trials=10 seed=5"
    );
    assert!((run.sample.mean() - 1.0).abs() < 1e-12);
}

#[test]
fn failed_trial_aborts_the_run() {
    let spec = EnsembleSpec::new(EnsembleClass::Goe, 4).unwrap();
    let outputs = (0..5).map(|t| {
        if t == 2 {
            Err(Error::degenerate("injected"))
        } else {
            run_trial(&spec, ExtractionMode::AllConsecutive, 0, t)
        }
    });
    let err = pool_trials(&spec, ExtractionMode::AllConsecutive, 0, outputs).unwrap_err();
    assert!(
        matches!(
            err,
            Error::Aborted {
                trial: 2,
                completed: 2,
                ..
            }
        ),
        "{err:?}"
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn spectra_are_sorted_and_bounded(seed in 0u64..1000, n in 2usize..20, c in 0usize..3) {
        let m = draw(classes()[c], n, seed);
        let values = m.spectrum().unwrap().values;
        prop_assert_eq!(values.len(), n);
        prop_assert!(values.windows(2).all(|w| w[0] <= w[1]));
        let bound = m.frobenius_norm();
        prop_assert!(values.iter().all(|v| v.abs() <= bound * (1.0 + 1e-12)));
    }
}
