//! Boosts, particle kinematics and the Wigner rotation a boost induces on a
//! massive particle's spin.
//!
//! The rotation is available three ways: the general closed form in terms
//! of the two rapidities and the boost/momentum angle, the specialized
//! closed form for a boost perpendicular to the momentum, and an explicit
//! composition `W = L^-1(Lambda p) Lambda L(p)` of 4x4 Lorentz matrices that
//! serves as the independent oracle for both.
//!
//! Orientation convention: a [`WignerRotation`] with angle `delta` and axis
//! `n` stands for the spin matrix `cos(delta/2) + i sin(delta/2) n.sigma`,
//! with `n` along `e x p`. As an active spatial rotation this is a turn by
//! `delta` about `-n` (see [`WignerRotation::spatial_rotation`]).

use std::ops::Mul;

use crate::compensated::{Arith, Compensated};
use crate::error::{Error, Result};
use crate::geometry::{Mat3, Vec3};
use crate::scalar::{NumericPolicy, Real};

/// Perpendicularity tolerance for the closed form that assumes `e.p = 0`.
const PERP_TOL: f64 = 1e-10;

/// Observer boost: speed `beta` along the unit direction `e_hat`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoostSpec<T> {
    beta: T,
    e_hat: Vec3<T>,
    xi: T,
}

impl<T: Real> BoostSpec<T> {
    /// `direction` need not be normalized; it must be non-zero.
    pub fn new(beta: T, direction: Vec3<T>) -> Result<Self> {
        if !beta.is_finite() || beta < T::zero() || beta >= T::one() {
            return Err(Error::BetaOutOfRange(beta.to_f64_lossy()));
        }
        let e_hat = direction.normalized()?;
        Ok(Self {
            beta,
            e_hat,
            xi: beta.atanh(),
        })
    }

    /// Boost along +x, the geometry of every named scenario.
    pub fn along_x(beta: T) -> Result<Self> {
        Self::new(beta, Vec3::unit_x())
    }

    pub fn beta(&self) -> T {
        self.beta
    }

    pub fn e_hat(&self) -> Vec3<T> {
        self.e_hat
    }

    /// Rapidity `xi` with `tanh(xi) = beta`.
    pub fn xi(&self) -> T {
        self.xi
    }

    /// `sqrt(1 - beta^2)`, evaluated without cancellation near `beta = 1`.
    pub fn inv_gamma(&self) -> T {
        ((T::one() - self.beta) * (T::one() + self.beta)).sqrt()
    }

    pub fn gamma(&self) -> T {
        T::one() / self.inv_gamma()
    }
}

/// Rapidity of a massive particle: `cosh(chi) = p0 / m`.
pub fn rapidity<T: Real>(mass: T, momentum: Vec3<T>) -> Result<T> {
    if !mass.is_finite() || mass <= T::zero() {
        return Err(Error::NonPositiveMass(mass.to_f64_lossy()));
    }
    if !momentum.is_finite() {
        return Err(Error::NonFinite("momentum"));
    }
    // asinh(|p|/m) equals arccosh(p0/m) but keeps precision near chi = 0.
    Ok((momentum.norm() / mass).asinh())
}

/// Massive particle with sharp momentum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParticleKinematics<T> {
    mass: T,
    momentum: Vec3<T>,
    chi: T,
    p_hat: Option<Vec3<T>>,
}

impl<T: Real> ParticleKinematics<T> {
    pub fn from_momentum(mass: T, momentum: Vec3<T>) -> Result<Self> {
        let chi = rapidity(mass, momentum)?;
        let p_hat = if momentum.norm_sqr() > T::zero() {
            Some(momentum.normalized()?)
        } else {
            None
        };
        Ok(Self {
            mass,
            momentum,
            chi,
            p_hat,
        })
    }

    /// Unit-mass particle with rapidity `chi` along `direction`.
    pub fn from_rapidity(chi: T, direction: Vec3<T>) -> Result<Self> {
        if !chi.is_finite() {
            return Err(Error::NonFinite("rapidity"));
        }
        if chi < T::zero() {
            return Err(Error::NegativeRapidity(chi.to_f64_lossy()));
        }
        let dir = direction.normalized()?;
        let p_hat = (chi > T::zero()).then_some(dir);
        Ok(Self {
            mass: T::one(),
            momentum: dir.scale(chi.sinh()),
            chi,
            p_hat,
        })
    }

    pub fn mass(&self) -> T {
        self.mass
    }

    pub fn momentum(&self) -> Vec3<T> {
        self.momentum
    }

    pub fn chi(&self) -> T {
        self.chi
    }

    /// Unit momentum direction; `None` for a particle at rest.
    pub fn p_hat(&self) -> Option<Vec3<T>> {
        self.p_hat
    }

    /// `p0 = sqrt(m^2 + |p|^2)`.
    pub fn energy(&self) -> T {
        self.mass * self.chi.cosh()
    }

    pub fn four_momentum(&self) -> FourVector<T> {
        FourVector::new(self.energy(), self.momentum)
    }
}

/// Rapidity of `particle`.
pub fn rapidity_of<T: Real>(particle: &ParticleKinematics<T>) -> T {
    particle.chi()
}

/// Little-group rotation of one particle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WignerRotation<T> {
    /// No rotation (zero boost, particle at rest, or boost along the momentum).
    Identity,
    /// Angle in `(0, pi]` about a unit axis.
    Rotation { delta: T, axis: Vec3<T> },
}

impl<T: Real> WignerRotation<T> {
    /// Builds a rotation, folding `delta = 0` into [`WignerRotation::Identity`].
    pub fn new(delta: T, axis: Vec3<T>) -> Result<Self> {
        if !delta.is_finite() {
            return Err(Error::NonFinite("rotation angle"));
        }
        if delta < T::zero() || delta > T::PI() {
            return Err(Error::InvalidArgument(format!(
                "rotation angle {delta} outside [0, pi]"
            )));
        }
        if delta == T::zero() {
            return Ok(Self::Identity);
        }
        Ok(Self::Rotation {
            delta,
            axis: axis.normalized()?,
        })
    }

    pub fn delta(&self) -> T {
        match self {
            Self::Identity => T::zero(),
            Self::Rotation { delta, .. } => *delta,
        }
    }

    pub fn axis(&self) -> Option<Vec3<T>> {
        match self {
            Self::Identity => None,
            Self::Rotation { axis, .. } => Some(*axis),
        }
    }

    pub fn is_identity(&self) -> bool {
        matches!(self, Self::Identity)
    }

    /// The 3x3 active rotation `R` for which `D (v.sigma) D^dagger = (R v).sigma`.
    pub fn spatial_rotation(&self) -> Mat3<T> {
        match self {
            Self::Identity => Mat3::identity(),
            Self::Rotation { delta, axis } => Mat3::rotation(-*axis, *delta),
        }
    }
}

/// Closed-form Wigner rotation for an arbitrary boost/momentum angle:
/// `cot(delta/2) = coth(xi/2) coth(chi/2) + e.p`, axis along `e x p`.
pub fn wigner_rotation_general<T: Real>(
    boost: &BoostSpec<T>,
    particle: &ParticleKinematics<T>,
) -> WignerRotation<T> {
    let Some(p_hat) = particle.p_hat() else {
        return WignerRotation::Identity;
    };
    if boost.beta() == T::zero() {
        return WignerRotation::Identity;
    }
    let n = boost.e_hat().cross(p_hat);
    let Ok(axis) = n.normalized() else {
        return WignerRotation::Identity;
    };
    if n.norm() <= T::epsilon() {
        return WignerRotation::Identity;
    }
    let one = T::one();
    // coth(xi/2) = (1 + sqrt(1 - beta^2)) / beta, coth(chi/2) = (cosh chi + 1) / sinh chi
    let coth_xi = (one + boost.inv_gamma()) / boost.beta();
    let coth_chi = (particle.chi().cosh() + one) / particle.chi().sinh();
    let cot_half = coth_xi * coth_chi + boost.e_hat().dot(p_hat);
    let delta = T::lit(2.0) * one.atan2(cot_half);
    WignerRotation::Rotation { delta, axis }
}

/// `(cos(delta/2), sin(delta/2))` for a boost perpendicular to the momentum.
pub fn perp_half_angles<T: Real>(beta: T, chi: T) -> (T, T) {
    let one = T::one();
    let two = T::lit(2.0);
    let s = ((one - beta) * (one + beta)).sqrt();
    let cosh = chi.cosh();
    // 1 - s = beta^2 / (1 + s) and cosh - 1 = 2 sinh^2(chi/2), both exact forms
    let one_minus_s = beta * beta / (one + s);
    let sh = (chi / two).sinh();
    let cosh_minus_one = two * sh * sh;
    let denom = two * (s + cosh);
    let cos_half = ((one + s) * (cosh + one) / denom).sqrt();
    let sin_half = (one_minus_s * cosh_minus_one / denom).sqrt();
    (cos_half, sin_half)
}

/// Wigner rotation for a boost perpendicular to the particle's momentum.
pub fn wigner_rotation_perp<T: Real>(
    boost: &BoostSpec<T>,
    particle: &ParticleKinematics<T>,
) -> Result<WignerRotation<T>> {
    let Some(p_hat) = particle.p_hat() else {
        return Ok(WignerRotation::Identity);
    };
    let dot = boost.e_hat().dot(p_hat);
    if dot.abs() >= T::lit(PERP_TOL) {
        return Err(Error::NotPerpendicular {
            dot: dot.to_f64_lossy(),
        });
    }
    let (cos_half, sin_half) = perp_half_angles(boost.beta(), particle.chi());
    if sin_half == T::zero() {
        return Ok(WignerRotation::Identity);
    }
    let axis = boost.e_hat().cross(p_hat).normalized()?;
    Ok(WignerRotation::Rotation {
        delta: T::lit(2.0) * sin_half.atan2(cos_half),
        axis,
    })
}

/// Half-angle functions in the limit `beta -> 1`:
/// `cos(delta/2) = sqrt((1 + sech chi)/2)`, `sin(delta/2) = sqrt((1 - sech chi)/2)`.
pub fn ur_half_angles<T: Real>(chi: T) -> (T, T) {
    let half = T::lit(0.5);
    let sech = T::one() / chi.cosh();
    (
        ((T::one() + sech) * half).sqrt(),
        ((T::one() - sech) * half).sqrt(),
    )
}

/// Wigner angle in the ultrarelativistic limit; `cos(delta) = sech(chi)`.
pub fn wigner_rotation_ur<T: Real>(chi: T) -> Result<T> {
    if chi < T::zero() {
        return Err(Error::NegativeRapidity(chi.to_f64_lossy()));
    }
    let (c, s) = ur_half_angles(chi);
    Ok(T::lit(2.0) * s.atan2(c))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourVector<T> {
    pub t: T,
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Real> FourVector<T> {
    pub fn new(t: T, spatial: Vec3<T>) -> Self {
        Self {
            t,
            x: spatial.x,
            y: spatial.y,
            z: spatial.z,
        }
    }

    pub fn spatial(&self) -> Vec3<T> {
        Vec3::new(self.x, self.y, self.z)
    }

    /// Minkowski square with signature (+, -, -, -).
    pub fn minkowski_sqr(&self) -> T {
        self.t * self.t - self.spatial().norm_sqr()
    }
}

/// 4x4 real matrix acting on `(t, x, y, z)`, row-major.
///
/// Generic over the element type so the same constructors serve plain and
/// [`Compensated`] arithmetic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzMat<S> {
    pub m: [[S; 4]; 4],
}

impl<S: Arith> LorentzMat<S> {
    pub fn identity() -> Self {
        let mut m = [[S::zero(); 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = S::one();
        }
        Self { m }
    }

    /// Pure boost whose image of the rest frame has proper velocity `u`
    /// (the spatial part of the four-velocity, `gamma beta n`).
    pub fn pure_boost(u: [S; 3]) -> Self {
        let one = S::one();
        let gamma = (one + u[0] * u[0] + u[1] * u[1] + u[2] * u[2]).sqrt();
        let mut m = [[S::zero(); 4]; 4];
        m[0][0] = gamma;
        let k = one / (one + gamma);
        for i in 0..3 {
            m[0][i + 1] = u[i];
            m[i + 1][0] = u[i];
            for j in 0..3 {
                let delta = if i == j { one } else { S::zero() };
                m[i + 1][j + 1] = delta + u[i] * u[j] * k;
            }
        }
        Self { m }
    }

    pub fn lower(&self) -> LorentzMat<S::Base> {
        LorentzMat {
            m: self.m.map(|row| row.map(|x| x.lower())),
        }
    }

    pub fn apply(&self, v: [S; 4]) -> [S; 4] {
        let mut out = [S::zero(); 4];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (0..4).fold(S::zero(), |acc, j| acc + self.m[i][j] * v[j]);
        }
        out
    }
}

impl<S: Arith> Mul for LorentzMat<S> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let mut m = [[S::zero(); 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = (0..4).fold(S::zero(), |acc, k| acc + self.m[i][k] * o.m[k][j]);
            }
        }
        Self { m }
    }
}

impl<T: Real> LorentzMat<T> {
    /// The observer boost as an active transformation of four-momenta.
    pub fn boost(boost: &BoostSpec<T>) -> Self {
        let u = boost.e_hat().scale(boost.beta() * boost.gamma());
        Self::pure_boost(u.to_array())
    }

    /// Standard boost `L(p)` taking `(m, 0, 0, 0)` to the particle's four-momentum.
    pub fn standard_boost(particle: &ParticleKinematics<T>) -> Self {
        let u = particle.momentum().scale(T::one() / particle.mass());
        Self::pure_boost(u.to_array())
    }

    /// Inverse via `eta L^T eta`.
    pub fn inverse(&self) -> Self {
        let mut out = *self;
        for i in 0..4 {
            for j in 0..4 {
                let sign = if (i == 0) != (j == 0) {
                    -T::one()
                } else {
                    T::one()
                };
                out.m[i][j] = self.m[j][i] * sign;
            }
        }
        out
    }

    pub fn apply_vec(&self, v: FourVector<T>) -> FourVector<T> {
        let [t, x, y, z] = self.apply([v.t, v.x, v.y, v.z]);
        FourVector { t, x, y, z }
    }

    /// `max |(L^T eta L - eta)_ij|`.
    pub fn metric_deviation(&self) -> T {
        let eta = |i: usize| if i == 0 { T::one() } else { -T::one() };
        let mut dev = T::zero();
        for i in 0..4 {
            for j in 0..4 {
                let g = (0..4).fold(T::zero(), |acc, k| {
                    acc + self.m[k][i] * eta(k) * self.m[k][j]
                });
                let target = if i == j { eta(i) } else { T::zero() };
                dev = dev.max((g - target).abs());
            }
        }
        dev
    }

    /// Largest deviation of the time row and column from `(1, 0, 0, 0)`.
    pub fn time_block_deviation(&self) -> T {
        let mut dev = (self.m[0][0] - T::one()).abs();
        for i in 1..4 {
            dev = dev.max(self.m[0][i].abs()).max(self.m[i][0].abs());
        }
        dev
    }

    pub fn spatial_block(&self) -> Mat3<T> {
        Mat3 {
            m: std::array::from_fn(|i| std::array::from_fn(|j| self.m[i + 1][j + 1])),
        }
    }
}

/// `W = L^-1(Lambda p) Lambda L(p)` as an explicit 4x4 product.
///
/// The product is formed in compensated arithmetic from the raw inputs
/// (`beta`, boost direction, mass, momentum) and rounded once at the end.
pub fn little_group_matrix<T: Real>(
    boost: &BoostSpec<T>,
    particle: &ParticleKinematics<T>,
) -> LorentzMat<T> {
    type C<T> = Compensated<T>;
    let lift3 = |v: Vec3<T>| [C::lift(v.x), C::lift(v.y), C::lift(v.z)];

    let beta = C::lift(boost.beta());
    let one = C::<T>::one();
    let gamma_beta = beta / ((one - beta) * (one + beta)).sqrt();
    let e = lift3(boost.e_hat());
    let e_norm = (e[0] * e[0] + e[1] * e[1] + e[2] * e[2]).sqrt();
    let scale = gamma_beta / e_norm;
    let lambda = LorentzMat::pure_boost([e[0] * scale, e[1] * scale, e[2] * scale]);

    let mass = C::lift(particle.mass());
    let p = lift3(particle.momentum());
    let u_p = [p[0] / mass, p[1] / mass, p[2] / mass];
    let standard = LorentzMat::pure_boost(u_p);

    // Lambda p in units of m: the boosted proper velocity.
    let gamma_p = (one + u_p[0] * u_p[0] + u_p[1] * u_p[1] + u_p[2] * u_p[2]).sqrt();
    let q = lambda.apply([gamma_p, u_p[0], u_p[1], u_p[2]]);
    let back = LorentzMat::pure_boost([-q[1], -q[2], -q[3]]);

    (back * lambda * standard).lower()
}

/// Wigner rotation extracted from the explicit matrix composition.
///
/// Fails with [`Error::NotARotation`] if the composed element mixes time and
/// space by more than the policy's rotation tolerance, which would indicate
/// an implementation fault rather than bad input.
pub fn wigner_rotation_composed<T: Real>(
    boost: &BoostSpec<T>,
    particle: &ParticleKinematics<T>,
) -> Result<WignerRotation<T>> {
    wigner_rotation_composed_with_policy(boost, particle, &NumericPolicy::default())
}

pub fn wigner_rotation_composed_with_policy<T: Real>(
    boost: &BoostSpec<T>,
    particle: &ParticleKinematics<T>,
    policy: &NumericPolicy<T>,
) -> Result<WignerRotation<T>> {
    let w = little_group_matrix(boost, particle);
    let dev = w.time_block_deviation();
    if dev > policy.rotation {
        return Err(Error::NotARotation {
            deviation: dev.to_f64_lossy(),
        });
    }
    let r = w.spatial_block();
    let orth = (r.transpose() * r).max_abs_diff(&Mat3::identity());
    if orth > policy.rotation {
        return Err(Error::NotARotation {
            deviation: orth.to_f64_lossy(),
        });
    }
    match r.axis_angle(policy.exact) {
        (_, None) => Ok(WignerRotation::Identity),
        // Spatial rotation about u corresponds to spin axis n = -u.
        (delta, Some(u)) => WignerRotation::new(delta, -u),
    }
}
