use approx::assert_abs_diff_eq;
use proptest::prelude::*;

use relbell::scenarios::sweep;
use relbell::{
    closed_form_epsilon, pipeline_epsilon, ur_beta_epsilon, ur_limit_epsilon, BellSettings,
    ScenarioKind, ScenarioSpec,
};

proptest! {
    #[test]
    fn beta_form_is_closed_form_at_high_energy(beta in 0.0..1.0f64) {
        // cos(delta) = sqrt(1 - beta^2)
        let delta = (1.0 - beta * beta).sqrt().acos();
        for kind in [ScenarioKind::Case1, ScenarioKind::Case2] {
            let direct = closed_form_epsilon(kind, delta, beta);
            prop_assert!((ur_beta_epsilon(kind, beta) - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn case1_decays_with_boost(chi in 0.05..10.0f64, b1 in 0.0..0.99f64, gap in 0.0..0.5f64) {
        let b2 = (b1 + gap).min(0.999);
        let kind = ScenarioKind::Case1;
        let settings = BellSettings::standard(kind);
        let e = |b: f64| pipeline_epsilon(&ScenarioSpec::new(kind, b, chi).unwrap(), &settings).unwrap().epsilon_pipeline;
        prop_assert!(e(b2) <= e(b1) + 1e-12);
    }

    #[test]
    fn case1_limit_is_at_most_four(chi in 0.0..100.0f64) {
        prop_assert!(ur_limit_epsilon(ScenarioKind::Case1, chi) <= 4.0);
    }

    #[test]
    fn pipeline_tracks_ultrarelativistic_limit(chi in 0.0..10.0f64) {
        for kind in [ScenarioKind::Case1, ScenarioKind::Case2] {
            let spec = ScenarioSpec::new(kind, 1.0 - 1e-8, chi).unwrap();
            let r = pipeline_epsilon(&spec, &BellSettings::standard(kind)).unwrap();
            prop_assert!((r.epsilon_pipeline - ur_limit_epsilon(kind, chi)).abs() < 1e-3);
        }
    }

    #[test]
    fn f32_pipeline_follows_f64(beta in 0.0..0.99f64, chi in 0.0..5.0f64) {
        let kind = ScenarioKind::Case2;
        let wide = pipeline_epsilon(&ScenarioSpec::new(kind, beta, chi).unwrap(), &BellSettings::standard(kind)).unwrap();
        let narrow = pipeline_epsilon(
            &ScenarioSpec::new(kind, beta as f32, chi as f32).unwrap(),
            &BellSettings::standard(kind),
        )
        .unwrap();
        prop_assert!((wide.epsilon_pipeline - narrow.epsilon_pipeline as f64).abs() < 1e-4);
    }
}

#[test]
fn grid_identities_hold() {
    let betas = [0.0, 0.3, 0.6, 0.9, 0.99];
    let chis = [0.5, 1.0, 2.0, 5.0];
    for kind in [ScenarioKind::Case1, ScenarioKind::Case2] {
        let rows = sweep(kind, &betas, &chis, &BellSettings::standard(kind)).unwrap();
        assert_eq!(rows.len(), 20);
        for r in rows {
            assert!(
                r.abs_error < 1e-10,
                "{kind} beta={} chi={}: {}",
                r.beta,
                r.chi,
                r.abs_error
            );
        }
    }
}

#[test]
fn sweep_order_does_not_depend_on_threads() {
    let betas: Vec<f64> = (0..12).map(|i| i as f64 / 13.0).collect();
    let chis = [0.1, 1.0, 3.0];
    let kind = ScenarioKind::Case2;
    let settings = BellSettings::standard(kind);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let serial = pool
        .install(|| sweep(kind, &betas, &chis, &settings))
        .unwrap();
    let parallel = sweep(kind, &betas, &chis, &settings).unwrap();
    assert_eq!(serial, parallel);
}

#[test]
fn two_qubit_pipeline_is_reported_not_matched() {
    // the two-qubit closed form belongs to settings not reproduced here, so
    // only the rest-frame Tsirelson value is an identity here
    let kind = ScenarioKind::TwoQubit;
    let spec = ScenarioSpec::new(kind, 0.0, 1.0).unwrap();
    let r = pipeline_epsilon(&spec, &BellSettings::standard(kind)).unwrap();
    assert_abs_diff_eq!(r.epsilon_pipeline, 2.0 * 2f64.sqrt(), epsilon = 1e-12);
    assert_abs_diff_eq!(r.epsilon_closed, 2.0 * 2f64.sqrt(), epsilon = 1e-12);
}
