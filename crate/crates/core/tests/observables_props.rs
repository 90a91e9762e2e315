use proptest::prelude::*;

use relbell::observables::{chsh, correlator, mermin};
use relbell::{
    BoostSpec, ChshSettings, MeasurementDirection, MerminSettings, ScenarioKind, ScenarioSpec, Vec3,
};

fn direction() -> impl Strategy<Value = MeasurementDirection<f64>> {
    (-1.0..=1.0f64, -std::f64::consts::PI..std::f64::consts::PI).prop_map(|(z, phi)| {
        let r = (1.0 - z * z).sqrt();
        MeasurementDirection::along(Vec3::new(r * phi.cos(), r * phi.sin(), z)).unwrap()
    })
}

fn three_particle() -> impl Strategy<Value = ScenarioSpec<f64>> {
    (
        prop_oneof![Just(ScenarioKind::Case1), Just(ScenarioKind::Case2)],
        0.0..0.9999f64,
        0.0..10.0f64,
    )
        .prop_map(|(k, b, c)| ScenarioSpec::new(k, b, c).unwrap())
}

proptest! {
    #[test]
    fn correlators_are_bounded(spec in three_particle(), dirs in prop::array::uniform3(direction())) {
        let state = spec.transformed_state().unwrap();
        let e = correlator(&state, &dirs, &spec.boost()).unwrap();
        prop_assert!(e.abs() <= 1.0 + 1e-12);
    }

    #[test]
    fn mermin_is_bounded(spec in three_particle(), dirs in prop::array::uniform6(direction())) {
        let state = spec.transformed_state().unwrap();
        let r = mermin(&state, &MerminSettings::from_array(dirs), &spec.boost()).unwrap();
        prop_assert!(r.abs_epsilon <= 4.0 + 1e-12);
    }

    #[test]
    fn chsh_is_bounded(beta in 0.0..0.9999f64, chi in 0.0..10.0f64, dirs in prop::array::uniform4(direction())) {
        let spec = ScenarioSpec::new(ScenarioKind::TwoQubit, beta, chi).unwrap();
        let state = spec.transformed_state().unwrap();
        let r = chsh(&state, &ChshSettings::from_array(dirs), &spec.boost()).unwrap();
        prop_assert!(r.abs_epsilon <= 2.0 * 2f64.sqrt() + 1e-12);
    }

    /// Near beta = 1 every xy-plane observable collapses onto +-sigma_x, so
    /// correlators depend on the settings only through the sign of the x parts.
    #[test]
    fn ultrarelativistic_decorrelation(
        chi in 0.0..10.0f64,
        p1 in 0.05..1.5f64, p2 in 0.05..1.5f64,
        q1 in 0.05..1.5f64, q2 in 0.05..1.5f64,
        signs in prop::array::uniform3(any::<bool>()),
    ) {
        let spec = ScenarioSpec::new(ScenarioKind::Case1, 1.0 - 1e-10, chi).unwrap();
        let state = spec.transformed_state().unwrap();
        let boost = spec.boost();
        // same sign pattern of the x components, different angles
        let mk = |mags: [f64; 3]| -> [MeasurementDirection<f64>; 3] {
            std::array::from_fn(|k| {
                let phi = if signs[k] { mags[k] } else { std::f64::consts::PI - mags[k] };
                MeasurementDirection::in_xy_plane(phi)
            })
        };
        let e1 = correlator(&state, &mk([p1, p2, q1]), &boost).unwrap();
        let e2 = correlator(&state, &mk([q2, p1, p2]), &boost).unwrap();
        prop_assert!((e1 - e2).abs() < 1e-4);
    }
}

#[test]
fn observables_need_a_valid_boost() {
    assert!(BoostSpec::<f64>::along_x(1.0).is_err());
}
