//! Wigner rotations of boosted spin-1/2 particles and their effect on
//! GHZ (Mermin) and Bell (CHSH) correlations.
//!
//! Everything numeric is generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix the scalar for the common cases.

pub mod compensated;
pub mod error;
pub mod geometry;
pub mod kinematics;
pub mod observables;
pub mod optimizer;
pub mod qmath;
pub mod roots;
pub mod scalar;
pub mod scenarios;
pub mod verify;
pub mod wigner;

pub use error::{Error, Result};
pub use geometry::{Mat3, Vec3};
pub use kinematics::{BoostSpec, ParticleKinematics, WignerRotation};
pub use observables::{BellResult, ChshSettings, MeasurementDirection, MerminSettings};
pub use optimizer::{maximize_mermin, OptimizationReport};
pub use qmath::{Mat2C, MultiQubitState, Operator, PauliBasis};
pub use scalar::{NumericPolicy, Real};
pub use scenarios::{
    closed_form_epsilon, critical_beta, pipeline_epsilon, ur_beta_epsilon, ur_limit_epsilon,
    BellSettings, CriticalBeta, ScenarioKind, ScenarioResult, ScenarioSpec,
};

pub type State = MultiQubitState<f64>;
pub type Mat2 = Mat2C<f64>;
pub type Boost = BoostSpec<f64>;
pub type Particle = ParticleKinematics<f64>;
pub type Rotation = WignerRotation<f64>;
pub type Scenario = ScenarioSpec<f64>;

pub type State32 = MultiQubitState<f32>;
pub type Mat2F32 = Mat2C<f32>;
pub type Boost32 = BoostSpec<f32>;
pub type Particle32 = ParticleKinematics<f32>;
pub type Rotation32 = WignerRotation<f32>;
pub type Scenario32 = ScenarioSpec<f32>;
