use relbell::optimizer::{maximize_mermin, wigner_candidate};
use relbell::{pipeline_epsilon, ScenarioKind, ScenarioSpec};

#[test]
fn reports_are_reproducible() {
    let spec = ScenarioSpec::<f64>::new(ScenarioKind::Case2, 0.8, 1.5).unwrap();
    let a = maximize_mermin(&spec, 99, 4).unwrap();
    let b = maximize_mermin(&spec, 99, 4).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.best_epsilon.to_bits(), b.best_epsilon.to_bits());
    assert_eq!(a.iterations.len(), 6);
}

#[test]
fn best_dominates_structured_starts() {
    for (kind, beta, chi) in [
        (ScenarioKind::Case1, 0.6, 2.0),
        (ScenarioKind::Case1, 0.95, 4.0),
        (ScenarioKind::Case2, 0.9, 3.0),
    ] {
        let spec = ScenarioSpec::<f64>::new(kind, beta, chi).unwrap();
        let r = maximize_mermin(&spec, 1, 3).unwrap();
        assert!(r.best_epsilon >= r.baseline_epsilon.max(r.candidate_epsilon) - 1e-9);
        assert!(r.best_epsilon <= 4.0 + 1e-9);
    }
}

#[test]
fn candidate_beats_fixed_settings_for_parallel_momenta() {
    let spec = ScenarioSpec::<f64>::new(ScenarioKind::Case1, 0.6, 2.0).unwrap();
    let candidate = wigner_candidate(&spec).unwrap();
    let with_candidate = pipeline_epsilon(&spec, &candidate)
        .unwrap()
        .epsilon_pipeline;
    let r = maximize_mermin(&spec, 5, 2).unwrap();
    assert!((with_candidate - r.candidate_epsilon).abs() < 1e-12);
    assert!(r.candidate_epsilon > r.baseline_epsilon);
}
