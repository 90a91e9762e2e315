//! Self-verification suite: every acceptance check, run in `f64` from fixed
//! seeds, each reporting pass/fail with the worst deviation observed.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::geometry::Vec3;
use crate::kinematics::{
    wigner_rotation_composed, wigner_rotation_perp, BoostSpec, ParticleKinematics, WignerRotation,
};
use crate::observables::{
    correlator, correlator_closed_xy, rel_spin_observable, MeasurementDirection,
};
use crate::optimizer::maximize_mermin;
use crate::qmath::{Mat2C, PauliBasis};
use crate::scenarios::{
    closed_form_epsilon, critical_beta, pipeline_epsilon_with, ur_beta_epsilon, ur_limit_epsilon,
    BellSettings, ScenarioKind, ScenarioSpec,
};
use crate::wigner::{d_matrix, ghz_coefficients, ghz_state, DMatrixFn};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Flips the sign of the sine term in the spin matrix, to check that the
    /// suite notices.
    pub inject_d_sign_error: bool,
    /// Random starts for the optimizer check.
    pub restarts: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            seed: 20_240_601,
            inject_d_sign_error: false,
            restarts: 16,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    /// Named numbers behind the verdict.
    pub values: Vec<(String, f64)>,
}

impl CriterionResult {
    fn new(
        id: u32,
        name: &'static str,
        passed: bool,
        detail: String,
        values: Vec<(&str, f64)>,
    ) -> Self {
        Self {
            id,
            name,
            passed,
            detail,
            values: values
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect(),
        }
    }

    fn failed(id: u32, name: &'static str, err: crate::error::Error) -> Self {
        Self::new(id, name, false, format!("error: {err}"), vec![])
    }
}

/// `D = cos(d/2) I - i sin(d/2) n.sigma`: the spin matrix with the wrong sign.
fn d_matrix_flipped(rot: &WignerRotation<f64>) -> Mat2C<f64> {
    match rot {
        WignerRotation::Identity => PauliBasis::identity(),
        WignerRotation::Rotation { delta, axis } => {
            let (s, c) = (delta / 2.0).sin_cos();
            PauliBasis::identity().scale(Complex::new(c, 0.0))
                + Mat2C::from_bloch(*axis).scale(Complex::new(0.0, -s))
        }
    }
}

const BETA_GRID: [f64; 5] = [0.0, 0.3, 0.6, 0.9, 0.99];
const CHI_GRID: [f64; 4] = [0.5, 1.0, 2.0, 5.0];
const UR_CHI: [f64; 6] = [0.0, 0.5, 1.0, 2.0, 5.0, 10.0];
const UR_BETA: f64 = 1.0 - 1e-8;

/// Runs every check. Never panics on a numerical failure; failures are
/// reported in the returned list.
pub fn run(opts: &VerifyOptions) -> Vec<CriterionResult> {
    let d_fn: DMatrixFn<f64> = if opts.inject_d_sign_error {
        d_matrix_flipped
    } else {
        d_matrix
    };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    vec![
        wrap(1, "rest-frame maximal violation", || rest_frame(d_fn)),
        wrap(2, "case I identity", || {
            grid_identity(ScenarioKind::Case1, d_fn)
        }),
        wrap(3, "case II identity", || {
            grid_identity(ScenarioKind::Case2, d_fn)
        }),
        wrap(4, "ultrarelativistic limits", || ur_limits(d_fn)),
        wrap(5, "critical velocities", critical_velocities),
        wrap(6, "two-qubit limit", two_qubit),
        wrap(7, "wigner oracle", || wigner_oracle(&mut rng, d_fn)),
        wrap(8, "coefficient oracle", || coefficient_oracle(&mut rng)),
        wrap(9, "correlator laws", || correlator_laws(&mut rng)),
        wrap(10, "observable spectrum", || observable_spectrum(&mut rng)),
        wrap(11, "optimizer", || optimizer(opts)),
    ]
}

pub fn all_passed(results: &[CriterionResult]) -> bool {
    results.iter().all(|r| r.passed)
}

fn wrap(
    id: u32,
    name: &'static str,
    f: impl FnOnce() -> Result<(bool, String, Vec<(&'static str, f64)>)>,
) -> CriterionResult {
    match f() {
        Ok((passed, detail, values)) => CriterionResult::new(id, name, passed, detail, values),
        Err(e) => CriterionResult::failed(id, name, e),
    }
}

type Check = Result<(bool, String, Vec<(&'static str, f64)>)>;

fn rest_frame(d_fn: DMatrixFn<f64>) -> Check {
    let mut worst: f64 = 0.0;
    for kind in [ScenarioKind::Case1, ScenarioKind::Case2] {
        for chi in [0.0, 1.0, 5.0] {
            let spec = ScenarioSpec::new(kind, 0.0, chi)?;
            let r = pipeline_epsilon_with(&spec, &BellSettings::standard(kind), d_fn)?;
            worst = worst.max((r.epsilon_pipeline - 4.0).abs());
        }
    }
    Ok((
        worst < 1e-12,
        format!("max ||eps| - 4| = {worst:.3e} (tol 1e-12)"),
        vec![("max_deviation", worst)],
    ))
}

fn grid_identity(kind: ScenarioKind, d_fn: DMatrixFn<f64>) -> Check {
    let mut worst: f64 = 0.0;
    for &beta in &BETA_GRID {
        for &chi in &CHI_GRID {
            let spec = ScenarioSpec::new(kind, beta, chi)?;
            let r = pipeline_epsilon_with(&spec, &BellSettings::standard(kind), d_fn)?;
            worst = worst.max(r.abs_error);
        }
    }
    Ok((
        worst < 1e-10,
        format!("max |pipeline - closed form| = {worst:.3e} over 20 points (tol 1e-10)"),
        vec![("max_abs_error", worst)],
    ))
}

fn ur_limits(d_fn: DMatrixFn<f64>) -> Check {
    let mut worst = [0.0f64; 2];
    for (i, kind) in [ScenarioKind::Case1, ScenarioKind::Case2]
        .into_iter()
        .enumerate()
    {
        for &chi in &UR_CHI {
            let spec = ScenarioSpec::new(kind, UR_BETA, chi)?;
            let r = pipeline_epsilon_with(&spec, &BellSettings::standard(kind), d_fn)?;
            worst[i] = worst[i].max((r.epsilon_pipeline - ur_limit_epsilon(kind, chi)).abs());
        }
    }
    let limit_20: f64 = ur_limit_epsilon(ScenarioKind::Case2, 20.0);
    let spec = ScenarioSpec::new(ScenarioKind::Case2, UR_BETA, 20.0)?;
    let pipe_20 = pipeline_epsilon_with(&spec, &BellSettings::standard(ScenarioKind::Case2), d_fn)?
        .epsilon_pipeline;
    let passed = worst[0] < 1e-3
        && worst[1] < 1e-3
        && (limit_20 - 1.5).abs() < 1e-6
        && (pipe_20 - 1.5).abs() < 1e-3;
    Ok((
        passed,
        format!(
            "case I max dev {:.3e}, case II max dev {:.3e} (tol 1e-3); case II limit at chi=20: {limit_20:.12} (tol 1e-6 of 1.5), pipeline {pipe_20:.6}",
            worst[0], worst[1]
        ),
        vec![
            ("case1_max_deviation", worst[0]),
            ("case2_max_deviation", worst[1]),
            ("case2_limit_chi20", limit_20),
            ("case2_pipeline_chi20", pipe_20),
        ],
    ))
}

fn critical_velocities() -> Check {
    let c1 = critical_beta(ScenarioKind::Case1, 2.0)?.beta_c;
    let c2 = critical_beta(ScenarioKind::Case2, 2.0)?.beta_c;
    Ok((
        (0.79..=0.81).contains(&c1) && (0.96..=0.98).contains(&c2),
        format!("case I beta_c = {c1:.10}, case II beta_c = {c2:.10}"),
        vec![("case1_beta_c", c1), ("case2_beta_c", c2)],
    ))
}

fn two_qubit() -> Check {
    let kind = ScenarioKind::TwoQubit;
    let at_ur = |chi: f64| -> Result<f64> {
        let spec = ScenarioSpec::new(kind, UR_BETA, chi)?;
        let delta = spec.rotations()?[0].delta();
        Ok(closed_form_epsilon(kind, delta, UR_BETA).abs())
    };
    let mut worst: f64 = 0.0;
    for &chi in &CHI_GRID {
        worst = worst.max(at_ur(chi)?);
    }
    // Particles at rest keep the sqrt(1 - beta^2) ~ 1.4e-4 term, so this sits
    // just above 2; reported, not gated.
    let at_rest = at_ur(0.0)?;
    let zero = ur_beta_epsilon(kind, 3f64.sqrt() / 2.0);
    let report = critical_beta(kind, 2.0)?;
    let eps_zero = report.epsilon_zero.unwrap_or(f64::NAN);
    let passed = worst <= 2.0 + 1e-6 && zero.abs() < 1e-10;
    Ok((
        passed,
        format!(
            "max |eps'| near beta=1 over chi grid: {worst:.9} (chi=0: {at_rest:.9}); eps'(sqrt3/2) = {zero:.3e}; |eps'|=2 root {:.10}; eps'=0 at {eps_zero:.10} (the 0.86 point)",
            report.beta_c
        ),
        vec![
            ("max_abs_epsilon_ur", worst),
            ("abs_epsilon_ur_chi0", at_rest),
            ("epsilon_at_sqrt3_over_2", zero),
            ("bisection_root", report.beta_c),
            ("epsilon_zero", eps_zero),
        ],
    ))
}

fn random_unit(rng: &mut ChaCha8Rng) -> Vec3<f64> {
    let z: f64 = rng.gen_range(-1.0..=1.0);
    let phi: f64 = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
    let r = (1.0 - z * z).max(0.0).sqrt();
    Vec3::new(r * phi.cos(), r * phi.sin(), z)
}

fn random_perpendicular(rng: &mut ChaCha8Rng, e: Vec3<f64>) -> Vec3<f64> {
    loop {
        let v = random_unit(rng);
        let w = v - e.scale(e.dot(v));
        if let Ok(u) = w.normalized() {
            if w.norm() > 1e-3 {
                return u;
            }
        }
    }
}

fn wigner_oracle(rng: &mut ChaCha8Rng, d_fn: DMatrixFn<f64>) -> Check {
    let sigmas = PauliBasis::sigmas::<f64>();
    let (mut worst_angle, mut worst_matrix, mut worst_spin) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..1000 {
        let e = random_unit(rng);
        let p_hat = random_perpendicular(rng, e);
        let beta = rng.gen_range(0.0..0.999);
        let chi = rng.gen_range(0.0..10.0);
        let boost = BoostSpec::new(beta, e)?;
        let particle = ParticleKinematics::from_rapidity(chi, p_hat)?;
        let closed = wigner_rotation_perp(&boost, &particle)?;
        let composed = wigner_rotation_composed(&boost, &particle)?;
        worst_angle = worst_angle.max((closed.delta() - composed.delta()).abs());
        let r = composed.spatial_rotation();
        worst_matrix = worst_matrix.max(closed.spatial_rotation().max_abs_diff(&r));
        // the spin matrix must rotate Pauli vectors the same way
        let d = d_fn(&closed);
        for (k, s) in sigmas.iter().enumerate() {
            let mut v = [0.0; 3];
            v[k] = 1.0;
            let lhs = d * *s * d.adjoint();
            let rhs = Mat2C::from_bloch(r * Vec3::from_array(v));
            worst_spin = worst_spin.max(lhs.max_abs_diff(&rhs));
        }
    }
    let passed = worst_angle < 1e-8 && worst_matrix < 1e-8 && worst_spin < 1e-8;
    Ok((
        passed,
        format!(
            "1000 configs: max angle diff {worst_angle:.3e}, rotation diff {worst_matrix:.3e}, spin-frame diff {worst_spin:.3e} (tol 1e-8)"
        ),
        vec![
            ("max_angle_diff", worst_angle),
            ("max_rotation_diff", worst_matrix),
            ("max_spin_frame_diff", worst_spin),
        ],
    ))
}

/// A Haar-like random unitary: random phase times a random SU(2) element.
fn random_unitary(rng: &mut ChaCha8Rng) -> Result<Mat2C<f64>> {
    let delta = rng.gen_range(0.0..std::f64::consts::PI);
    let rot = WignerRotation::new(delta, random_unit(rng))?;
    let phase = Complex::from_polar(
        1.0,
        rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI),
    );
    Ok(d_matrix(&rot).scale(phase))
}

fn coefficient_oracle(rng: &mut ChaCha8Rng) -> Check {
    let ghz = ghz_state::<f64>();
    let mut worst: f64 = 0.0;
    for _ in 0..500 {
        let ds = [
            random_unitary(rng)?,
            random_unitary(rng)?,
            random_unitary(rng)?,
        ];
        let k = ghz_coefficients(&ds[0], &ds[1], &ds[2])?;
        let out = ghz.apply_product(&ds)?;
        for (c, a) in k.to_array().iter().zip(out.amplitudes()) {
            worst = worst.max((c - a * std::f64::consts::SQRT_2).norm());
        }
    }
    Ok((
        worst < 1e-12,
        format!("500 unitary triples: max coefficient diff {worst:.3e} (tol 1e-12)"),
        vec![("max_diff", worst)],
    ))
}

fn correlator_laws(rng: &mut ChaCha8Rng) -> Check {
    let ghz = ghz_state::<f64>();
    let rest = BoostSpec::along_x(0.0)?;
    let mut worst_rest: f64 = 0.0;
    let n = 20;
    let angle = |i: usize| -std::f64::consts::PI + std::f64::consts::TAU * i as f64 / n as f64;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let (p1, p2, p3) = (angle(i), angle(j), angle(k));
                let dirs = [p1, p2, p3].map(MeasurementDirection::in_xy_plane);
                let e = correlator(&ghz, &dirs, &rest)?;
                worst_rest = worst_rest.max((e - (p1 + p2 + p3).cos()).abs());
            }
        }
    }

    let mut worst_closed: f64 = 0.0;
    for _ in 0..1000 {
        let ds: Vec<Mat2C<f64>> = (0..3).map(|_| random_unitary(rng)).collect::<Result<_>>()?;
        let k = ghz_coefficients(&ds[0], &ds[1], &ds[2])?;
        let state = ghz.apply_product(&ds)?;
        let beta = rng.gen_range(0.0..0.999);
        let boost = BoostSpec::along_x(beta)?;
        let dirs: [MeasurementDirection<f64>; 3] = std::array::from_fn(|_| {
            MeasurementDirection::in_xy_plane(
                rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI),
            )
        });
        let closed = correlator_closed_xy(&k, &dirs, beta)?;
        let pipe = correlator(&state, &dirs, &boost)?;
        worst_closed = worst_closed.max((closed - pipe).abs());
    }
    Ok((
        worst_rest < 1e-12 && worst_closed < 1e-12,
        format!(
            "rest-frame cos law max diff {worst_rest:.3e} on 8000 angles; coefficient form vs tensor max diff {worst_closed:.3e} on 1000 draws (tol 1e-12)"
        ),
        vec![("max_rest_diff", worst_rest), ("max_closed_diff", worst_closed)],
    ))
}

fn observable_spectrum(rng: &mut ChaCha8Rng) -> Check {
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let a = MeasurementDirection::new(random_unit(rng))?;
        let beta = rng.gen_range(0.0..=0.9999);
        let boost = BoostSpec::new(beta, random_unit(rng))?;
        let [lo, hi] = rel_spin_observable(&a, &boost)?.hermitian_eigenvalues();
        worst = worst.max((lo + 1.0).abs()).max((hi - 1.0).abs());
    }
    Ok((
        worst < 1e-12,
        format!("1000 draws: max eigenvalue deviation from +-1 {worst:.3e} (tol 1e-12)"),
        vec![("max_deviation", worst)],
    ))
}

fn optimizer(opts: &VerifyOptions) -> Check {
    let rest = ScenarioSpec::<f64>::new(ScenarioKind::Case1, 0.0, 2.0)?;
    let at_rest = maximize_mermin(&rest, opts.seed, opts.restarts)?;

    let moving = ScenarioSpec::<f64>::new(ScenarioKind::Case1, 0.6, 2.0)?;
    let first = maximize_mermin(&moving, opts.seed, opts.restarts)?;
    let second = maximize_mermin(&moving, opts.seed, opts.restarts)?;
    let deterministic = first == second;
    let dominates = first.best_epsilon >= first.baseline_epsilon - 1e-9
        && first.best_epsilon >= first.candidate_epsilon - 1e-9;
    let bounded = first.best_epsilon <= 4.0 + 1e-9;
    let rest_ok = (at_rest.best_epsilon - 4.0).abs() < 1e-6;
    Ok((
        deterministic && dominates && bounded && rest_ok,
        format!(
            "rest best {:.9}; beta=0.6 chi=2: best {:.9}, baseline {:.9}, wigner candidate {:.9}; deterministic: {deterministic}",
            at_rest.best_epsilon, first.best_epsilon, first.baseline_epsilon, first.candidate_epsilon
        ),
        vec![
            ("rest_best", at_rest.best_epsilon),
            ("best", first.best_epsilon),
            ("baseline", first.baseline_epsilon),
            ("candidate", first.candidate_epsilon),
        ],
    ))
}
