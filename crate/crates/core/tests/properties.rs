use fadinglab::capacity::{loss_eta_mu, loss_finite_difference, loss_kappa_mu, loss_kappa_mu_shadowed, FD_STEP};
use fadinglab::channel_models::{
    amount_of_fading, expectation, moment, moment_direct_form, pdf_kappa_mu_shadowed, ShadowedParams,
};
use fadinglab::quadrature::QuadOptions;
use fadinglab::specfun::{hyp_pfq, partial_sums, PfqParams, SeriesControl};
use proptest::prelude::*;

fn params() -> impl Strategy<Value = ShadowedParams> {
    (0.0..20.0f64, 0.3..10.0f64, 0.3..30.0f64, 0.1..10.0f64)
        .prop_map(|(k, mu, m, g)| ShadowedParams::new(k, mu, m, g).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn density_integrates_to_one(p in params()) {
        let total = expectation(&p, |_| 1.0, &QuadOptions::new(1e-11, 1e-11)).unwrap();
        prop_assert!((total - 1.0).abs() < 1e-8, "{total}");
    }

    #[test]
    fn density_is_positive_and_finite(p in params(), u in 1e-6..20.0f64) {
        let f = pdf_kappa_mu_shadowed(&p, u * p.gamma_bar()).unwrap();
        prop_assert!(f.is_finite() && f >= 0.0);
    }

    #[test]
    fn first_moment_is_gamma_bar(p in params()) {
        let e = moment(&p, 1.0).unwrap();
        prop_assert!((e - p.gamma_bar()).abs() <= 8.0 * f64::EPSILON * p.gamma_bar());
    }

    #[test]
    fn closed_form_moments_match_quadrature(p in params(), n in 1u32..=4) {
        let n = n as f64;
        let closed = moment(&p, n).unwrap();
        let quad = expectation(&p, |g| g.powf(n), &QuadOptions::new(1e-14, 1e-12)).unwrap();
        prop_assert!(((closed - quad) / closed).abs() <= 1e-8, "{closed} vs {quad}");
    }

    #[test]
    fn moment_forms_agree(p in params(), n in 0.1..4.0f64) {
        let a = moment(&p, n).unwrap();
        let b = moment_direct_form(&p, n).unwrap();
        prop_assert!(((a - b) / a).abs() <= 1e-9, "{a} vs {b}");
    }

    #[test]
    fn second_order_amount_of_fading_is_nonnegative(p in params()) {
        prop_assert!(amount_of_fading(&p, 2.0).unwrap() >= -1e-14);
    }

    #[test]
    fn loss_matches_derivative_oracle(p in params()) {
        prop_assume!(p.series_argument() <= 0.99);
        let l = loss_kappa_mu_shadowed(p.kappa(), p.mu(), p.m()).unwrap().loss_bits;
        let fd = loss_finite_difference(&p, FD_STEP).unwrap();
        prop_assert!((l - fd).abs() <= 1e-5, "{l} vs {fd}");
    }

    #[test]
    fn losses_are_nonnegative(k in 0.0..20.0f64, mu in 0.1..20.0f64, m in 0.1..30.0f64, eta in 1e-3..1e3f64) {
        prop_assert!(loss_kappa_mu_shadowed(k, mu, m).unwrap().loss_bits >= 0.0);
        prop_assert!(loss_kappa_mu(k, mu).unwrap().loss_bits >= 0.0);
        prop_assert!(loss_eta_mu(eta, mu).unwrap().loss_bits >= 0.0);
    }

    #[test]
    fn eta_mu_loss_is_symmetric(eta in 1e-3..1.0f64, mu in 0.1..10.0f64) {
        let a = loss_eta_mu(eta, mu).unwrap().loss_bits;
        let b = loss_eta_mu(1.0 / eta, mu).unwrap().loss_bits;
        prop_assert!((a - b).abs() <= 1e-9);
    }

    #[test]
    fn partial_sums_approach_series(a in 0.1..5.0f64, b in 0.1..5.0f64, x in -0.9..0.9f64) {
        let params = PfqParams::new(&[a, 1.0], &[b], x).unwrap();
        let full = hyp_pfq(&params, &SeriesControl::default()).unwrap();
        let sums = partial_sums(&params, 400);
        prop_assert!((sums[399] - full).abs() <= 1e-9 * full.abs().max(1.0));
    }
}
