use fadinglab::channel_models::{cdf_numeric, reduce_to_shadowed, CdfTable, FadingModel, LimitPolicy, ShadowedParams};
use fadinglab::sampler::{
    sample_common_shadow, sample_conditional, sample_conditional_unshadowed, sample_iid_shadow, GenerativeModel,
};
use fadinglab::stats::{chi_square_equal_probability, ks_distance_to_cdf, ks_two_sample_distance, mean_and_standard_error};
use num_complex::Complex64;

const N: usize = 100_000;

fn gof_p(values: &[f64], p: &ShadowedParams) -> f64 {
    let table = CdfTable::new(p).unwrap();
    chi_square_equal_probability(values, &table, 30).unwrap().p_value
}

#[test]
fn conditional_sampler_fits_density() {
    let p = ShadowedParams::new(1.5, 1.2, 2.3, 1.0).unwrap();
    let b = sample_conditional(&p, N, 11).unwrap();
    let pv = gof_p(&b.snr_values, &p);
    assert!(pv > 0.01, "p = {pv}");
}

#[test]
fn pinned_shadow_gives_kappa_mu() {
    // S = 1 removes the shadowing; compare with the large-m surrogate.
    let p = ShadowedParams::new(2.7, 2.4, 1e6, 1.0).unwrap();
    let b = sample_conditional_unshadowed(&ShadowedParams::new(2.7, 2.4, 0.3, 1.0).unwrap(), N, 5).unwrap();
    let pv = gof_p(&b.snr_values, &p);
    assert!(pv > 0.01, "p = {pv}");
}

#[test]
fn vanishing_kappa_collapses_to_gamma() {
    let p = ShadowedParams::new(0.0, 1.7, 3.0, 2.0).unwrap();
    let b = sample_conditional(&p, N, 2).unwrap();
    let target = ShadowedParams::new(0.0, 1.7, 1.7, 2.0).unwrap();
    assert!(gof_p(&b.snr_values, &target) > 0.01);
}

#[test]
fn common_shadow_rician_surrogate() {
    let k: f64 = 10.0;
    let model = GenerativeModel::CommonShadow {
        mu: 1,
        sigma2: 0.5,
        rho: vec![Complex64::new(k.sqrt(), 0.0)],
        m: 1e6,
    };
    let b = sample_common_shadow(&model, 1.0, N, 3).unwrap();
    let p = reduce_to_shadowed(&FadingModel::Rician { k, gamma_bar: 1.0 }, &LimitPolicy::default()).unwrap();
    let table = CdfTable::new(&p).unwrap();
    let d = ks_distance_to_cdf(&b.snr_values, |x| table.cdf(x));
    assert!(d <= 0.01, "KS = {d}");
    // Spot-check the table against direct quadrature.
    assert!((table.cdf(1.0) - cdf_numeric(&p, 1.0, 1e-12).unwrap()).abs() < 1e-6);
}

#[test]
fn common_shadow_without_dominant_is_gamma() {
    let mu = 3;
    let model = GenerativeModel::CommonShadow { mu, sigma2: 1.0, rho: vec![Complex64::new(0.0, 0.0); 3], m: 2.0 };
    let b = sample_common_shadow(&model, 2.0, N, 8).unwrap();
    let sq: Vec<f64> = b.snr_values.iter().map(|g| g * g).collect();
    let (mean, se) = mean_and_standard_error(&sq);
    let expected = (1.0 + 1.0 / mu as f64) * 4.0;
    assert!((mean - expected).abs() <= 3.0 * se, "{mean} vs {expected} ± {se}");
}

#[test]
fn iid_shadow_matches_density() {
    let kappa: f64 = 1.5;
    let model = GenerativeModel::iid_shadow_for(kappa, 2, 1.0).unwrap();
    let p = model.derived_params(1.0).unwrap();
    assert_eq!((p.mu(), p.m()), (2.0, 1.0));
    let b = sample_iid_shadow(&model, 1.0, N, 21).unwrap();
    assert!(gof_p(&b.snr_values, &p) > 0.01);

    // m̂ = 1/4 at μ = 2 gives m = μ/4, the Hoyt-type m = 1/2 case.
    let model = GenerativeModel::IidShadow { mu: 2, sigma2: 0.5, rho_magnitude: kappa.sqrt(), m_hat: 0.25 };
    let p = model.derived_params(1.0).unwrap();
    assert_eq!(p.m(), 0.5);
    let b = sample_iid_shadow(&model, 1.0, N, 22).unwrap();
    assert!(gof_p(&b.snr_values, &p) > 0.01);
}

#[test]
fn iid_unit_severity_is_gamma() {
    let model = GenerativeModel::IidShadow { mu: 3, sigma2: 0.5, rho_magnitude: 2.0, m_hat: 1.0 };
    let b = sample_iid_shadow(&model, 1.0, N, 23).unwrap();
    let target = ShadowedParams::new(0.0, 3.0, 3.0, 1.0).unwrap();
    assert!(gof_p(&b.snr_values, &target) > 0.01);
}

#[test]
fn samplers_agree_at_integer_mu() {
    let (kappa, mu, m) = (1.5, 2, 2.3);
    let p = ShadowedParams::new(kappa, mu as f64, m, 1.0).unwrap();
    let a = sample_conditional(&p, N, 31).unwrap();
    let b = sample_iid_shadow(&GenerativeModel::iid_shadow_for(kappa, mu, m).unwrap(), 1.0, N, 32).unwrap();
    let c = sample_common_shadow(&GenerativeModel::common_shadow_for(kappa, mu, m).unwrap(), 1.0, N, 33).unwrap();
    for (x, y) in [(&a, &b), (&a, &c), (&b, &c)] {
        let d = ks_two_sample_distance(&x.snr_values, &y.snr_values);
        assert!(d <= 0.01, "KS = {d}");
    }
}

#[test]
fn phase_rotation_is_invisible() {
    let rho = vec![Complex64::new(1.0, 0.5), Complex64::new(-0.3, 1.2)];
    let turn = Complex64::from_polar(1.0, 1.1);
    let a = GenerativeModel::CommonShadow { mu: 2, sigma2: 0.5, rho: rho.clone(), m: 1.4 };
    let b = GenerativeModel::CommonShadow { mu: 2, sigma2: 0.5, rho: rho.iter().map(|r| r * turn).collect(), m: 1.4 };
    let sa = sample_common_shadow(&a, 1.0, N, 41).unwrap();
    let sb = sample_common_shadow(&b, 1.0, N, 42).unwrap();
    assert!(ks_two_sample_distance(&sa.snr_values, &sb.snr_values) <= 0.01);
    // Unequal amplitudes still follow the law with κ = Σ|ρᵢ|²/(2σ²μ).
    assert!(gof_p(&sa.snr_values, &a.derived_params(1.0).unwrap()) > 0.01);
}

#[test]
fn fixed_seed_is_reproducible() {
    let p = ShadowedParams::new(1.5, 1.2, 2.3, 1.0).unwrap();
    assert_eq!(sample_conditional(&p, 40_000, 7).unwrap(), sample_conditional(&p, 40_000, 7).unwrap());
    let m = GenerativeModel::iid_shadow_for(1.5, 2, 2.3).unwrap();
    assert_eq!(sample_iid_shadow(&m, 1.0, 40_000, 7).unwrap(), sample_iid_shadow(&m, 1.0, 40_000, 7).unwrap());
}

#[test]
fn batch_means_track_gamma_bar() {
    let p = ShadowedParams::new(0.8, 0.6, 0.9, 5.0).unwrap();
    let b = sample_conditional(&p, N, 51).unwrap();
    let (mean, se) = mean_and_standard_error(&b.snr_values);
    assert!((mean - 5.0).abs() <= 4.0 * se);
    assert!(b.snr_values.iter().all(|&g| g >= 0.0));
}

#[test]
fn iid_kappa_counts_every_cluster() {
    // Total dominant power is μ|ρ|², so κ = |ρ|²/(2σ²); dividing by μ once
    // more describes a different law that the draws reject.
    let model = GenerativeModel::IidShadow { mu: 3, sigma2: 0.5, rho_magnitude: 2.0, m_hat: 0.8 };
    let b = sample_iid_shadow(&model, 1.0, N, 61).unwrap();
    let right = model.derived_params(1.0).unwrap();
    assert!((right.kappa() - 4.0).abs() < 1e-12);
    assert!(gof_p(&b.snr_values, &right) > 0.01);
    let wrong = ShadowedParams::new(4.0 / 3.0, 3.0, 2.4, 1.0).unwrap();
    assert!(gof_p(&b.snr_values, &wrong) < 1e-6);
}
