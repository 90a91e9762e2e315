//! Named boost scenarios, their closed-form Bell values and ultrarelativistic
//! limits, and the critical boost speed at which violation disappears.
//!
//! Every scenario boosts along +x, perpendicular to every momentum:
//!
//! * `Case1`: three particles with equal momenta along +z, GHZ state.
//! * `Case2`: three particles in their centre-of-mass frame, momenta along
//!   `-z`, `z/2 + (sqrt3/2) y`, `z/2 - (sqrt3/2) y`, GHZ state.
//! * `TwoQubit`: two particles with momenta `+z` and `-z` in
//!   `(|00> + |11>)/sqrt2`, scored with CHSH.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::Vec3;
use crate::kinematics::{wigner_rotation_perp, BoostSpec, ParticleKinematics, WignerRotation};
use crate::observables::{chsh, mermin, BellResult, ChshSettings, MerminSettings};
use crate::qmath::MultiQubitState;
use crate::roots::{find_crossings, Crossing, CrossingDirection};
use crate::scalar::{sech, Real};
use crate::wigner::{bell_state, d_matrix, ghz_state, transform_state_with, DMatrixFn};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScenarioKind {
    Case1,
    Case2,
    TwoQubit,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 3] = [Self::Case1, Self::Case2, Self::TwoQubit];

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Case1 => "case1",
            Self::Case2 => "case2",
            Self::TwoQubit => "bell2",
        }
    }

    pub fn n_particles(&self) -> usize {
        match self {
            Self::Case1 | Self::Case2 => 3,
            Self::TwoQubit => 2,
        }
    }

    /// Momentum directions of the particles, in particle order.
    pub fn momentum_directions<T: Real>(&self) -> Vec<Vec3<T>> {
        let z = Vec3::<T>::unit_z();
        match self {
            Self::Case1 => vec![z; 3],
            Self::Case2 => {
                let half = T::lit(0.5);
                let r3 = T::lit(3.0).sqrt() * half;
                vec![
                    -z,
                    Vec3::new(T::zero(), r3, half),
                    Vec3::new(T::zero(), -r3, half),
                ]
            }
            Self::TwoQubit => vec![z, -z],
        }
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ScenarioKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "case1" | "case-1" | "parallel" => Ok(Self::Case1),
            "case2" | "case-2" | "com" => Ok(Self::Case2),
            "bell2" | "twoqubit" | "two-qubit" => Ok(Self::TwoQubit),
            other => Err(Error::InvalidArgument(format!(
                "unknown scenario {other:?} (expected case1, case2 or bell2)"
            ))),
        }
    }
}

/// A scenario at a given boost speed and particle rapidity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioSpec<T> {
    pub kind: ScenarioKind,
    pub beta: T,
    pub chi: T,
}

impl<T: Real> ScenarioSpec<T> {
    pub fn new(kind: ScenarioKind, beta: T, chi: T) -> Result<Self> {
        if !beta.is_finite() || beta < T::zero() || beta >= T::one() {
            return Err(Error::BetaOutOfRange(beta.to_f64_lossy()));
        }
        if !chi.is_finite() {
            return Err(Error::NonFinite("rapidity"));
        }
        if chi < T::zero() {
            return Err(Error::NegativeRapidity(chi.to_f64_lossy()));
        }
        Ok(Self { kind, beta, chi })
    }

    pub fn boost(&self) -> BoostSpec<T> {
        BoostSpec::along_x(self.beta).expect("beta validated at construction")
    }

    pub fn particles(&self) -> Vec<ParticleKinematics<T>> {
        self.kind
            .momentum_directions()
            .into_iter()
            .map(|d| {
                ParticleKinematics::from_rapidity(self.chi, d)
                    .expect("chi validated at construction")
            })
            .collect()
    }

    /// Per-particle Wigner rotations from the perpendicular closed form.
    pub fn rotations(&self) -> Result<Vec<WignerRotation<T>>> {
        let boost = self.boost();
        self.particles()
            .iter()
            .map(|p| wigner_rotation_perp(&boost, p))
            .collect()
    }

    /// The rest-frame entangled state of this scenario.
    pub fn initial_state(&self) -> MultiQubitState<T> {
        match self.kind {
            ScenarioKind::Case1 | ScenarioKind::Case2 => ghz_state(),
            ScenarioKind::TwoQubit => bell_state(),
        }
    }

    /// The entangled state after the Wigner rotations.
    pub fn transformed_state(&self) -> Result<MultiQubitState<T>> {
        self.transformed_state_with(d_matrix)
    }

    pub fn transformed_state_with(&self, to_matrix: DMatrixFn<T>) -> Result<MultiQubitState<T>> {
        transform_state_with(&self.initial_state(), &self.rotations()?, to_matrix)
    }
}

/// Measurement settings for either Bell combination.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BellSettings<T> {
    Mermin(MerminSettings<T>),
    Chsh(ChshSettings<T>),
}

impl<T: Real> BellSettings<T> {
    /// The rest-frame optimal settings for the scenario's state.
    pub fn standard(kind: ScenarioKind) -> Self {
        match kind {
            ScenarioKind::Case1 | ScenarioKind::Case2 => {
                Self::Mermin(MerminSettings::xy_standard())
            }
            ScenarioKind::TwoQubit => Self::Chsh(ChshSettings::xz_standard()),
        }
    }

    pub fn n_directions(&self) -> usize {
        match self {
            Self::Mermin(_) => 6,
            Self::Chsh(_) => 4,
        }
    }

    pub fn directions(&self) -> Vec<crate::observables::MeasurementDirection<T>> {
        match self {
            Self::Mermin(s) => s.to_array().to_vec(),
            Self::Chsh(s) => s.to_array().to_vec(),
        }
    }

    /// Evaluates the matching Bell combination.
    pub fn evaluate(
        &self,
        state: &MultiQubitState<T>,
        boost: &BoostSpec<T>,
    ) -> Result<BellResult<T>> {
        match self {
            Self::Mermin(s) => mermin(state, s, boost),
            Self::Chsh(s) => chsh(state, s, boost),
        }
    }

    fn fits(&self, kind: ScenarioKind) -> bool {
        matches!(
            (self, kind),
            (Self::Mermin(_), ScenarioKind::Case1 | ScenarioKind::Case2)
                | (Self::Chsh(_), ScenarioKind::TwoQubit)
        )
    }
}

/// One evaluated scenario.
///
/// `epsilon_pipeline` is `|epsilon|` from the full state pipeline;
/// `bell.epsilon` keeps the signed combination. For the fixed x/y Mermin
/// settings the signed value comes out as `-4 Re(A conj H)`, i.e. the
/// negative of the closed forms, so the two are compared in magnitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioResult<T> {
    pub kind: ScenarioKind,
    pub beta: T,
    pub chi: T,
    /// Wigner angle of the first particle (all particles share it in these
    /// perpendicular geometries).
    pub delta: T,
    pub bell: BellResult<T>,
    pub epsilon_pipeline: T,
    pub epsilon_closed: T,
    pub abs_error: T,
}

/// Runs the full pipeline: rotations, state transformation, relativistic
/// observables and the Bell combination.
pub fn pipeline_epsilon<T: Real>(
    spec: &ScenarioSpec<T>,
    settings: &BellSettings<T>,
) -> Result<ScenarioResult<T>> {
    pipeline_epsilon_with(spec, settings, d_matrix)
}

pub fn pipeline_epsilon_with<T: Real>(
    spec: &ScenarioSpec<T>,
    settings: &BellSettings<T>,
    to_matrix: DMatrixFn<T>,
) -> Result<ScenarioResult<T>> {
    if !settings.fits(spec.kind) {
        return Err(Error::ParticleCount {
            expected: spec.kind.n_particles(),
            got: settings.n_directions() / 2,
        });
    }
    let rotations = spec.rotations()?;
    let delta = rotations[0].delta();
    let state = transform_state_with(&spec.initial_state(), &rotations, to_matrix)?;
    let bell = settings.evaluate(&state, &spec.boost())?;
    let epsilon_closed = closed_form_epsilon(spec.kind, delta, spec.beta);
    Ok(ScenarioResult {
        kind: spec.kind,
        beta: spec.beta,
        chi: spec.chi,
        delta,
        bell,
        epsilon_pipeline: bell.abs_epsilon,
        epsilon_closed,
        abs_error: (bell.abs_epsilon - epsilon_closed).abs(),
    })
}

fn case2_poly<T: Real>(c: T) -> T {
    let k = |x: f64| T::lit(x);
    c * c * c / k(16.0) + k(3.0) / k(8.0) * c * c + k(33.0) / k(16.0) * c + k(1.5)
}

fn two_qubit_prefactor<T: Real>(beta: T) -> T {
    T::lit(2.0) / (T::lit(2.0) - beta * beta).sqrt()
}

/// Bell value for the standard settings as a function of the Wigner angle:
/// `Case1: cos^3 d + 3 cos d`,
/// `Case2: cos^3 d / 16 + 3/8 cos^2 d + 33/16 cos d + 3/2`,
/// `TwoQubit: 2/sqrt(2 - b^2) (sqrt(1 - b^2) + cos 2d)` (uses `beta`).
pub fn closed_form_epsilon<T: Real>(kind: ScenarioKind, delta: T, beta: T) -> T {
    let c = delta.cos();
    match kind {
        ScenarioKind::Case1 => c * c * c + T::lit(3.0) * c,
        ScenarioKind::Case2 => case2_poly(c),
        ScenarioKind::TwoQubit => {
            let s = ((T::one() - beta) * (T::one() + beta)).sqrt();
            two_qubit_prefactor(beta) * (s + (T::lit(2.0) * delta).cos())
        }
    }
}

/// Limit of the closed form as `beta -> 1` at fixed particle rapidity.
/// The two-qubit value is signed (`4 sech^2 chi - 2`).
pub fn ur_limit_epsilon<T: Real>(kind: ScenarioKind, chi: T) -> T {
    let s = sech(chi);
    match kind {
        ScenarioKind::Case1 => s * s * s + T::lit(3.0) * s,
        ScenarioKind::Case2 => case2_poly(s),
        ScenarioKind::TwoQubit => T::lit(4.0) * s * s - T::lit(2.0),
    }
}

/// Closed form for very energetic particles as a function of `beta`, from
/// `cos d ~ sqrt(1 - beta^2)`.
pub fn ur_beta_epsilon<T: Real>(kind: ScenarioKind, beta: T) -> T {
    let one = T::one();
    let b2 = beta * beta;
    let s = ((one - beta) * (one + beta)).max(T::zero()).sqrt();
    match kind {
        ScenarioKind::Case1 => s * (T::lit(4.0) - b2),
        ScenarioKind::Case2 => case2_poly(s),
        ScenarioKind::TwoQubit => two_qubit_prefactor(beta) * (one + s - T::lit(2.0) * b2),
    }
}

/// Crossings of `|ur_beta_epsilon| = threshold` on `(0, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CriticalBeta<T> {
    pub kind: ScenarioKind,
    pub threshold: T,
    /// Smallest `beta` at which `|epsilon|` falls through the threshold.
    pub beta_c: T,
    /// Every crossing found, in increasing `beta`.
    pub crossings: Vec<Crossing<T>>,
    /// Zero of the signed `epsilon` in `(0, 1)`, if there is one.
    pub epsilon_zero: Option<T>,
}

const SCAN_SAMPLES: usize = 20_000;

/// Bisection (to `1e-10` in `f64`) for the boost speed above which the
/// high-energy Bell value no longer exceeds `threshold`.
pub fn critical_beta<T: Real>(kind: ScenarioKind, threshold: T) -> Result<CriticalBeta<T>> {
    let tol = T::lit(1e-10).max(T::epsilon() * T::lit(4.0));
    let (lo, hi) = (T::zero(), T::one());
    let crossings = find_crossings(
        |b| ur_beta_epsilon(kind, b).abs() - threshold,
        lo,
        hi,
        SCAN_SAMPLES,
        tol,
    );
    let beta_c = crossings
        .iter()
        .find(|c| c.direction == CrossingDirection::Falling)
        .map(|c| c.at)
        .ok_or(Error::NoCrossing {
            threshold: threshold.to_f64_lossy(),
        })?;
    let epsilon_zero = find_crossings(|b| ur_beta_epsilon(kind, b), lo, hi, SCAN_SAMPLES, tol)
        .first()
        .map(|c| c.at);
    Ok(CriticalBeta {
        kind,
        threshold,
        beta_c,
        crossings,
        epsilon_zero,
    })
}

/// Pipeline results over a `beta x chi` grid, ordered by `(beta index, chi index)`.
///
/// Grid points are evaluated in parallel on the current rayon pool.
pub fn sweep<T: Real>(
    kind: ScenarioKind,
    betas: &[T],
    chis: &[T],
    settings: &BellSettings<T>,
) -> Result<Vec<ScenarioResult<T>>> {
    let grid: Vec<(T, T)> = betas
        .iter()
        .flat_map(|&b| chis.iter().map(move |&c| (b, c)))
        .collect();
    grid.par_iter()
        .map(|&(beta, chi)| pipeline_epsilon(&ScenarioSpec::new(kind, beta, chi)?, settings))
        .collect()
}
