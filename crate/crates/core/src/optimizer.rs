//! Multi-start Nelder–Mead search over measurement directions that maximizes
//! the Bell combination of a boosted scenario.
//!
//! Each direction is parameterized by its polar and azimuthal angles, so the
//! Mermin search runs in 12 dimensions and the CHSH search in 8.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::Result;
use crate::kinematics::BoostSpec;
use crate::observables::{ChshSettings, MeasurementDirection, MerminSettings};
use crate::qmath::MultiQubitState;
use crate::scalar::Real;
use crate::scenarios::{BellSettings, ScenarioSpec};

/// Stopping rule for [`nelder_mead`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMeadOptions<T> {
    /// Initial simplex edge along each coordinate.
    pub step: T,
    /// Stop once every vertex lies within this distance of the best one.
    pub diameter_tol: T,
    pub max_iterations: usize,
}

impl<T: Real> Default for NelderMeadOptions<T> {
    fn default() -> Self {
        Self {
            step: T::lit(0.3),
            diameter_tol: T::lit(1e-10).max(T::epsilon() * T::lit(16.0)),
            max_iterations: 2000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum<T> {
    pub x: Vec<T>,
    pub value: T,
    pub iterations: usize,
}

/// Minimizes `f` from `start`. The best vertex never gets worse, so the
/// returned value is at most `f(start)`.
pub fn nelder_mead<T: Real, F: Fn(&[T]) -> T>(
    f: F,
    start: &[T],
    opts: &NelderMeadOptions<T>,
) -> Minimum<T> {
    let n = start.len();
    let eval = |x: &[T]| {
        let v = f(x);
        if v.is_nan() {
            T::infinity()
        } else {
            v
        }
    };
    let mut simplex: Vec<(Vec<T>, T)> = Vec::with_capacity(n + 1);
    simplex.push((start.to_vec(), eval(start)));
    for i in 0..n {
        let mut x = start.to_vec();
        x[i] = x[i] + opts.step;
        let v = eval(&x);
        simplex.push((x, v));
    }

    let half = T::lit(0.5);
    let two = T::lit(2.0);
    let combine = |a: &[T], b: &[T], t: T| -> Vec<T> {
        // a + t (b - a)
        a.iter().zip(b).map(|(&p, &q)| p + t * (q - p)).collect()
    };

    let mut iterations = 0;
    while iterations < opts.max_iterations {
        // stable sort keeps the earlier vertex first on ties
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
        let best = simplex[0].0.clone();
        let diameter = simplex[1..]
            .iter()
            .map(|(x, _)| {
                x.iter()
                    .zip(&best)
                    .fold(T::zero(), |m, (&p, &q)| m.max((p - q).abs()))
            })
            .fold(T::zero(), |m, d| m.max(d));
        if diameter < opts.diameter_tol {
            break;
        }
        iterations += 1;

        let mut centroid = vec![T::zero(); n];
        for (x, _) in &simplex[..n] {
            for (c, &xi) in centroid.iter_mut().zip(x) {
                *c = *c + xi;
            }
        }
        let inv_n = T::one() / T::from_usize(n).unwrap();
        centroid.iter_mut().for_each(|c| *c = *c * inv_n);

        let (worst, f_worst) = simplex[n].clone();
        let f_best = simplex[0].1;
        let f_second = simplex[n - 1].1;

        let reflected = combine(&centroid, &worst, -T::one());
        let f_r = eval(&reflected);
        if f_r < f_best {
            let expanded = combine(&centroid, &worst, -two);
            let f_e = eval(&expanded);
            simplex[n] = if f_e < f_r {
                (expanded, f_e)
            } else {
                (reflected, f_r)
            };
            continue;
        }
        if f_r < f_second {
            simplex[n] = (reflected, f_r);
            continue;
        }
        let (contracted, f_c) = if f_r < f_worst {
            let x = combine(&centroid, &reflected, half);
            let v = eval(&x);
            (x, v)
        } else {
            let x = combine(&centroid, &worst, half);
            let v = eval(&x);
            (x, v)
        };
        if f_c < f_worst.min(f_r) {
            simplex[n] = (contracted, f_c);
            continue;
        }
        for vertex in simplex.iter_mut().skip(1) {
            let x = combine(&best, &vertex.0, half);
            let v = eval(&x);
            *vertex = (x, v);
        }
    }
    simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
    let (x, value) = simplex.swap_remove(0);
    Minimum {
        x,
        value,
        iterations,
    }
}

/// Flattens settings to `(theta, phi)` pairs in the settings' own order.
pub fn settings_to_angles<T: Real>(settings: &BellSettings<T>) -> Vec<T> {
    settings
        .directions()
        .iter()
        .flat_map(|d| {
            let (t, p) = d.to_spherical();
            [t, p]
        })
        .collect()
}

/// Inverse of [`settings_to_angles`]; the variant of `like` picks the shape.
pub fn angles_to_settings<T: Real>(like: &BellSettings<T>, angles: &[T]) -> BellSettings<T> {
    let dir = |k: usize| MeasurementDirection::from_spherical(angles[2 * k], angles[2 * k + 1]);
    match like {
        BellSettings::Mermin(_) => {
            BellSettings::Mermin(MerminSettings::from_array(std::array::from_fn(dir)))
        }
        BellSettings::Chsh(_) => {
            BellSettings::Chsh(ChshSettings::from_array(std::array::from_fn(dir)))
        }
    }
}

/// Standard settings with each particle's pair of directions carried along
/// by that particle's Wigner rotation.
pub fn wigner_candidate<T: Real>(spec: &ScenarioSpec<T>) -> Result<BellSettings<T>> {
    let rots = spec.rotations()?;
    let base = BellSettings::standard(spec.kind);
    let rotated: Vec<MeasurementDirection<T>> = base
        .directions()
        .iter()
        .enumerate()
        .map(|(k, d)| MeasurementDirection::along(rots[k / 2].spatial_rotation() * d.vector()))
        .collect::<Result<_>>()?;
    Ok(match base {
        BellSettings::Mermin(_) => {
            BellSettings::Mermin(MerminSettings::from_array(std::array::from_fn(|k| {
                rotated[k]
            })))
        }
        BellSettings::Chsh(_) => {
            BellSettings::Chsh(ChshSettings::from_array(std::array::from_fn(|k| {
                rotated[k]
            })))
        }
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationReport<T> {
    pub best_settings: BellSettings<T>,
    pub best_epsilon: T,
    /// `|epsilon|` with the standard settings.
    pub baseline_epsilon: T,
    /// `|epsilon|` with [`wigner_candidate`] settings.
    pub candidate_epsilon: T,
    /// Number of random starts (the two structured starts come on top).
    pub restarts: usize,
    pub seed: u64,
    /// Iterations per start: standard, Wigner candidate, then random starts.
    pub iterations: Vec<usize>,
    /// Index into `iterations` of the start that produced the best value.
    pub best_start: usize,
}

fn abs_epsilon<T: Real>(
    state: &MultiQubitState<T>,
    boost: &BoostSpec<T>,
    settings: &BellSettings<T>,
) -> T {
    settings
        .evaluate(state, boost)
        .map(|r| r.abs_epsilon)
        .unwrap_or_else(|_| T::neg_infinity())
}

/// Multi-start maximization of `|epsilon|` for `spec`.
///
/// Starts are the standard settings, the Wigner-rotated candidate and
/// `restarts` random direction sets drawn from a ChaCha8 stream seeded with
/// `seed`. Starts run in parallel; the result is identical for identical
/// inputs, with ties going to the earliest start.
pub fn maximize_mermin<T: Real>(
    spec: &ScenarioSpec<T>,
    seed: u64,
    restarts: usize,
) -> Result<OptimizationReport<T>> {
    maximize_with(spec, seed, restarts, &NelderMeadOptions::default())
}

pub fn maximize_with<T: Real>(
    spec: &ScenarioSpec<T>,
    seed: u64,
    restarts: usize,
    opts: &NelderMeadOptions<T>,
) -> Result<OptimizationReport<T>> {
    let state = spec.transformed_state()?;
    let boost = spec.boost();
    let baseline = BellSettings::standard(spec.kind);
    let candidate = wigner_candidate(spec)?;
    let baseline_epsilon = abs_epsilon(&state, &boost, &baseline);
    let candidate_epsilon = abs_epsilon(&state, &boost, &candidate);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_dirs = baseline.n_directions();
    let mut starts = vec![
        settings_to_angles(&baseline),
        settings_to_angles(&candidate),
    ];
    for _ in 0..restarts {
        let angles: Vec<T> = (0..n_dirs)
            .flat_map(|_| {
                let u: f64 = rng.gen();
                let v: f64 = rng.gen();
                let theta = (1.0 - 2.0 * u).acos();
                let phi = std::f64::consts::TAU * v - std::f64::consts::PI;
                [T::lit(theta), T::lit(phi)]
            })
            .collect();
        starts.push(angles);
    }

    let objective = |x: &[T]| -abs_epsilon(&state, &boost, &angles_to_settings(&baseline, x));
    let runs: Vec<Minimum<T>> = starts
        .par_iter()
        .map(|s| nelder_mead(objective, s, opts))
        .collect();

    let mut best_start = 0;
    for (i, r) in runs.iter().enumerate() {
        if r.value < runs[best_start].value {
            best_start = i;
        }
    }
    let best = &runs[best_start];
    Ok(OptimizationReport {
        best_settings: angles_to_settings(&baseline, &best.x),
        best_epsilon: -best.value,
        baseline_epsilon,
        candidate_epsilon,
        restarts,
        seed,
        iterations: runs.iter().map(|r| r.iterations).collect(),
        best_start,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenarios::ScenarioKind;
    use approx::assert_abs_diff_eq;

    #[test]
    fn nelder_mead_rosenbrock() {
        let f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let opts = NelderMeadOptions {
            max_iterations: 5000,
            ..Default::default()
        };
        let m = nelder_mead(f, &[-1.2, 1.0], &opts);
        assert_abs_diff_eq!(m.x[0], 1.0, epsilon = 1e-6);
        assert_abs_diff_eq!(m.x[1], 1.0, epsilon = 1e-6);
    }

    #[test]
    fn nelder_mead_never_worse_than_start() {
        let f = |x: &[f64]| x.iter().map(|v| v.sin()).sum::<f64>();
        let start = [0.3, -0.2, 1.0];
        let m = nelder_mead(f, &start, &NelderMeadOptions::default());
        assert!(m.value <= f(&start));
    }

    #[test]
    fn angle_round_trip() {
        let s = BellSettings::<f64>::standard(ScenarioKind::Case1);
        let back = angles_to_settings(&s, &settings_to_angles(&s));
        for (a, b) in s.directions().iter().zip(back.directions()) {
            assert!(a.vector().max_abs_diff(b.vector()) < 1e-15);
        }
    }

    #[test]
    fn candidate_is_identity_at_rest() {
        let spec = ScenarioSpec::new(ScenarioKind::Case1, 0.0, 2.0).unwrap();
        let c = wigner_candidate(&spec).unwrap();
        assert_eq!(c, BellSettings::standard(ScenarioKind::Case1));
    }

    #[test]
    fn rest_frame_reaches_maximum() {
        let spec = ScenarioSpec::new(ScenarioKind::Case1, 0.0, 1.0).unwrap();
        let r = maximize_mermin(&spec, 7, 2).unwrap();
        assert_abs_diff_eq!(r.best_epsilon, 4.0, epsilon = 1e-6);
        assert_eq!(r.iterations.len(), 4);
    }

    #[test]
    fn chsh_search_stays_bounded() {
        let spec = ScenarioSpec::new(ScenarioKind::TwoQubit, 0.6, 2.0).unwrap();
        let r = maximize_mermin(&spec, 3, 2).unwrap();
        assert!(r.best_epsilon >= r.baseline_epsilon - 1e-9);
        assert!(r.best_epsilon <= 2.0 * 2f64.sqrt() + 1e-9);
    }
}
