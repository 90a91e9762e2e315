//! Boost-dressed spin observables, multi-particle correlators and the
//! Mermin (three-particle) and CHSH (two-particle) Bell combinations.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::geometry::Vec3;
use crate::kinematics::BoostSpec;
use crate::qmath::{kron_all, Mat2C, MultiQubitState};
use crate::scalar::{NumericPolicy, Real};
use crate::wigner::GhzCoefficients;

/// Unit measurement direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementDirection<T>(Vec3<T>);

impl<T: Real> MeasurementDirection<T> {
    /// Accepts `v` only if it is unit length within the default policy.
    pub fn new(v: Vec3<T>) -> Result<Self> {
        if !v.is_finite() {
            return Err(Error::NonFinite("measurement direction"));
        }
        let n = v.norm();
        if (n - T::one()).abs() > NumericPolicy::<T>::default().exact {
            return Err(Error::NotUnit {
                norm: n.to_f64_lossy(),
            });
        }
        Ok(Self(v))
    }

    /// Normalizes `v`.
    pub fn along(v: Vec3<T>) -> Result<Self> {
        Ok(Self(v.normalized()?))
    }

    pub fn x() -> Self {
        Self(Vec3::unit_x())
    }

    pub fn y() -> Self {
        Self(Vec3::unit_y())
    }

    pub fn z() -> Self {
        Self(Vec3::unit_z())
    }

    /// Direction in the xy plane at angle `phi` from +x.
    pub fn in_xy_plane(phi: T) -> Self {
        Self(Vec3::in_xy_plane(phi))
    }

    pub fn from_spherical(theta: T, phi: T) -> Self {
        Self(Vec3::from_spherical(theta, phi))
    }

    /// `(theta, phi)` with `theta` in `[0, pi]` and `phi` in `(-pi, pi]`.
    pub fn to_spherical(&self) -> (T, T) {
        let v = self.0;
        (v.z.max(-T::one()).min(T::one()).acos(), v.y.atan2(v.x))
    }

    pub fn vector(&self) -> Vec3<T> {
        self.0
    }
}

/// The six directions of a three-party Mermin experiment: `a`/`a'` for
/// particle 1, `b`/`b'` for particle 2, `c`/`c'` for particle 3.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MerminSettings<T> {
    pub a: MeasurementDirection<T>,
    pub a_prime: MeasurementDirection<T>,
    pub b: MeasurementDirection<T>,
    pub b_prime: MeasurementDirection<T>,
    pub c: MeasurementDirection<T>,
    pub c_prime: MeasurementDirection<T>,
}

impl<T: Real> MerminSettings<T> {
    /// `a = b = c = y`, `a' = b' = c' = x`: maximal violation for GHZ at rest.
    pub fn xy_standard() -> Self {
        let (x, y) = (MeasurementDirection::x(), MeasurementDirection::y());
        Self {
            a: y,
            a_prime: x,
            b: y,
            b_prime: x,
            c: y,
            c_prime: x,
        }
    }

    /// In the order `a, a', b, b', c, c'`.
    pub fn to_array(&self) -> [MeasurementDirection<T>; 6] {
        [
            self.a,
            self.a_prime,
            self.b,
            self.b_prime,
            self.c,
            self.c_prime,
        ]
    }

    pub fn from_array(d: [MeasurementDirection<T>; 6]) -> Self {
        Self {
            a: d[0],
            a_prime: d[1],
            b: d[2],
            b_prime: d[3],
            c: d[4],
            c_prime: d[5],
        }
    }
}

/// Directions `a`, `a'` for particle 1 and `b`, `b'` for particle 2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChshSettings<T> {
    pub a: MeasurementDirection<T>,
    pub a_prime: MeasurementDirection<T>,
    pub b: MeasurementDirection<T>,
    pub b_prime: MeasurementDirection<T>,
}

impl<T: Real> ChshSettings<T> {
    /// `a = z`, `a' = x`, `b = (z + x)/sqrt2`, `b' = (z - x)/sqrt2`: reaches
    /// `2 sqrt 2` on `(|00> + |11>)/sqrt 2` at rest.
    pub fn xz_standard() -> Self {
        let h = T::FRAC_1_SQRT_2();
        Self {
            a: MeasurementDirection::z(),
            a_prime: MeasurementDirection::x(),
            b: MeasurementDirection(Vec3::new(h, T::zero(), h)),
            b_prime: MeasurementDirection(Vec3::new(-h, T::zero(), h)),
        }
    }

    pub fn to_array(&self) -> [MeasurementDirection<T>; 4] {
        [self.a, self.a_prime, self.b, self.b_prime]
    }

    pub fn from_array(d: [MeasurementDirection<T>; 4]) -> Self {
        Self {
            a: d[0],
            a_prime: d[1],
            b: d[2],
            b_prime: d[3],
        }
    }
}

/// Outcome of a Bell combination.
///
/// For Mermin, `correlators` holds `E(a,b,c'), E(a,b',c), E(a',b,c), E(a',b',c')`;
/// for CHSH, `E(a,b), E(a,b'), E(a',b), E(a',b')`. The last one enters with a
/// minus sign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellResult<T> {
    pub epsilon: T,
    pub abs_epsilon: T,
    pub correlators: [T; 4],
}

impl<T: Real> BellResult<T> {
    fn from_correlators(correlators: [T; 4]) -> Self {
        let [e1, e2, e3, e4] = correlators;
        let epsilon = e1 + e2 + e3 - e4;
        Self {
            epsilon,
            abs_epsilon: epsilon.abs(),
            correlators,
        }
    }
}

/// Normalized relativistic spin observable for direction `a` seen from a
/// frame boosted by `boost`:
/// `((sqrt(1-b^2) a_perp + a_par) . sigma) / sqrt(1 + b^2 ((e.a)^2 - 1))`.
///
/// The result is checked to have spectrum `{-1, +1}`.
pub fn rel_spin_observable<T: Real>(
    a: &MeasurementDirection<T>,
    boost: &BoostSpec<T>,
) -> Result<Mat2C<T>> {
    let e = boost.e_hat();
    let a = a.vector();
    let beta = boost.beta();
    let s = boost.inv_gamma();
    let ea = e.dot(a);
    let par = e.scale(ea);
    let perp = a - par;
    let v = perp.scale(s) + par;
    // 1 + b^2 ((e.a)^2 - 1) rewritten as (1 - b^2) + b^2 (e.a)^2
    let denom = (s * s + beta * beta * ea * ea).sqrt();
    if denom.is_nan() || denom <= T::zero() {
        return Err(Error::BetaOutOfRange(beta.to_f64_lossy()));
    }
    let unit = v.scale(T::one() / denom);
    let n = unit.norm();
    if (n - T::one()).abs() > NumericPolicy::<T>::default().exact {
        return Err(Error::ObservableSpectrum {
            norm: n.to_f64_lossy(),
        });
    }
    Ok(Mat2C::from_bloch(unit))
}

/// `<state| a_1 (x) a_2 (x) ... |state>` with each factor the relativistic
/// observable of the corresponding direction.
pub fn correlator<T: Real>(
    state: &MultiQubitState<T>,
    dirs: &[MeasurementDirection<T>],
    boost: &BoostSpec<T>,
) -> Result<T> {
    if dirs.len() != state.n_qubits() {
        return Err(Error::DimensionMismatch {
            expected: state.n_qubits(),
            got: dirs.len(),
        });
    }
    let ops = dirs
        .iter()
        .map(|d| rel_spin_observable(d, boost))
        .collect::<Result<Vec<_>>>()?;
    state.expectation(&kron_all(&ops))
}

/// Three-particle correlator of a transformed GHZ state evaluated from its
/// coefficients, for xy-plane directions and a boost along +x:
///
/// `prod_k [1 + b^2 (k_x^2 - 1)]^(-1/2) * Re(c100* c011 a b* c* + c101* c010 a b* c
///  + c110* c001 a b c* + c111* c000 a b c)`
///
/// with `a = a_x + i a_y sqrt(1 - b^2)` and likewise for `b`, `c`.
pub fn correlator_closed_xy<T: Real>(
    coeffs: &GhzCoefficients<T>,
    dirs: &[MeasurementDirection<T>; 3],
    beta: T,
) -> Result<T> {
    if !beta.is_finite() || beta < T::zero() || beta >= T::one() {
        return Err(Error::BetaOutOfRange(beta.to_f64_lossy()));
    }
    let tol = NumericPolicy::<T>::default().exact;
    for d in dirs {
        if d.vector().z.abs() > tol {
            return Err(Error::OffPlane(d.vector().z.to_f64_lossy()));
        }
    }
    let s = ((T::one() - beta) * (T::one() + beta)).sqrt();
    let xy = |d: &MeasurementDirection<T>| Complex::new(d.vector().x, d.vector().y * s);
    let scale = |d: &MeasurementDirection<T>| {
        let ax = d.vector().x;
        (s * s + beta * beta * ax * ax).sqrt()
    };
    let (a, b, c) = (xy(&dirs[0]), xy(&dirs[1]), xy(&dirs[2]));
    let prefactor = T::one() / (scale(&dirs[0]) * scale(&dirs[1]) * scale(&dirs[2]));
    let k = coeffs;
    let sum = k.c100.conj() * k.c011 * a * b.conj() * c.conj()
        + k.c101.conj() * k.c010 * a * b.conj() * c
        + k.c110.conj() * k.c001 * a * b * c.conj()
        + k.c111.conj() * k.c000 * a * b * c;
    Ok(prefactor * sum.re)
}

/// Mermin combination `E(a,b,c') + E(a,b',c) + E(a',b,c) - E(a',b',c')`.
pub fn mermin<T: Real>(
    state: &MultiQubitState<T>,
    settings: &MerminSettings<T>,
    boost: &BoostSpec<T>,
) -> Result<BellResult<T>> {
    if state.n_qubits() != 3 {
        return Err(Error::ParticleCount {
            expected: 3,
            got: state.n_qubits(),
        });
    }
    let s = settings;
    let e = |x, y, z| correlator(state, &[x, y, z], boost);
    Ok(BellResult::from_correlators([
        e(s.a, s.b, s.c_prime)?,
        e(s.a, s.b_prime, s.c)?,
        e(s.a_prime, s.b, s.c)?,
        e(s.a_prime, s.b_prime, s.c_prime)?,
    ]))
}

/// CHSH combination `E(a,b) + E(a,b') + E(a',b) - E(a',b')`.
pub fn chsh<T: Real>(
    state: &MultiQubitState<T>,
    settings: &ChshSettings<T>,
    boost: &BoostSpec<T>,
) -> Result<BellResult<T>> {
    if state.n_qubits() != 2 {
        return Err(Error::ParticleCount {
            expected: 2,
            got: state.n_qubits(),
        });
    }
    let s = settings;
    let e = |x, y| correlator(state, &[x, y], boost);
    Ok(BellResult::from_correlators([
        e(s.a, s.b)?,
        e(s.a, s.b_prime)?,
        e(s.a_prime, s.b)?,
        e(s.a_prime, s.b_prime)?,
    ]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::PauliBasis;
    use crate::wigner::{bell_state, ghz_state};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{PI, SQRT_2};

    fn rest() -> BoostSpec<f64> {
        BoostSpec::along_x(0.0).unwrap()
    }

    #[test]
    fn observable_reductions() {
        let a = MeasurementDirection::along(Vec3::new(0.3, -0.2, 0.9)).unwrap();
        let o = rel_spin_observable(&a, &rest()).unwrap();
        assert!(o.max_abs_diff(&Mat2C::from_bloch(a.vector())) < 1e-15);

        let b = BoostSpec::new(0.9, Vec3::new(1.0, 1.0, 0.0)).unwrap();
        let par = MeasurementDirection::new(b.e_hat()).unwrap();
        let o = rel_spin_observable(&par, &b).unwrap();
        assert!(o.max_abs_diff(&Mat2C::from_bloch(par.vector())) < 1e-15);
    }

    #[test]
    fn perpendicular_direction_is_unchanged() {
        // a perpendicular to e: numerator and denominator both scale by sqrt(1 - b^2)
        let b = BoostSpec::along_x(0.8).unwrap();
        let a = MeasurementDirection::y();
        let o = rel_spin_observable(&a, &b).unwrap();
        assert!(o.max_abs_diff(&PauliBasis::y()) < 1e-15);
        let ev = o.hermitian_eigenvalues();
        assert_abs_diff_eq!(ev[0], -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(ev[1], 1.0, epsilon = 1e-15);
    }

    #[test]
    fn oblique_direction_is_contracted_then_renormalized() {
        let b = BoostSpec::along_x(0.6).unwrap();
        let a = MeasurementDirection::in_xy_plane(PI / 4.0);
        let v = rel_spin_observable(&a, &b).unwrap().bloch_vector();
        // (h, 0.8 h) / sqrt(h^2 + 0.64 h^2) with h = 1/sqrt2
        let n = (1.0f64 + 0.64).sqrt();
        assert!(v.max_abs_diff(Vec3::new(1.0 / n, 0.8 / n, 0.0)) < 1e-15);
    }

    #[test]
    fn ghz_rest_frame_law() {
        let g = ghz_state::<f64>();
        let phis = [0.3, -1.1, 2.0];
        let dirs: Vec<_> = phis
            .iter()
            .map(|&p| MeasurementDirection::in_xy_plane(p))
            .collect();
        let e = correlator(&g, &dirs, &rest()).unwrap();
        assert_abs_diff_eq!(e, (0.3f64 - 1.1 + 2.0).cos(), epsilon = 1e-14);
    }

    #[test]
    fn product_state_xy_correlators_vanish() {
        let s = MultiQubitState::<f64>::from_bits("000").unwrap();
        let dirs = [0.1, 0.7, 2.2].map(MeasurementDirection::in_xy_plane);
        assert_abs_diff_eq!(
            correlator(&s, &dirs, &rest()).unwrap(),
            0.0,
            epsilon = 1e-15
        );
        let m = mermin(&s, &MerminSettings::xy_standard(), &rest()).unwrap();
        assert_abs_diff_eq!(m.abs_epsilon, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn correlator_dimension_mismatch() {
        let g = ghz_state::<f64>();
        let dirs = [MeasurementDirection::x(); 2];
        assert!(matches!(
            correlator(&g, &dirs, &rest()),
            Err(Error::DimensionMismatch {
                expected: 3,
                got: 2
            })
        ));
    }

    #[test]
    fn closed_xy_rest_frame_identity_coefficients() {
        let k = GhzCoefficients::identity();
        let dirs = [0.4, 1.2, -0.5].map(MeasurementDirection::in_xy_plane);
        let e = correlator_closed_xy(&k, &dirs, 0.0).unwrap();
        assert_abs_diff_eq!(e, (0.4f64 + 1.2 - 0.5).cos(), epsilon = 1e-15);
    }

    #[test]
    fn closed_xy_rejects_off_plane() {
        let k = GhzCoefficients::identity();
        let dirs = [
            MeasurementDirection::x(),
            MeasurementDirection::z(),
            MeasurementDirection::x(),
        ];
        assert!(matches!(
            correlator_closed_xy(&k, &dirs, 0.2),
            Err(Error::OffPlane(_))
        ));
    }

    #[test]
    fn mermin_rest_frame_maximum() {
        let r = mermin(&ghz_state(), &MerminSettings::xy_standard(), &rest()).unwrap();
        assert_abs_diff_eq!(r.abs_epsilon, 4.0, epsilon = 1e-14);
        // every term is -1 on GHZ, so the signed combination is -4
        assert_abs_diff_eq!(r.epsilon, -4.0, epsilon = 1e-14);
        for e in &r.correlators[..3] {
            assert_abs_diff_eq!(*e, -1.0, epsilon = 1e-14);
        }
        assert_abs_diff_eq!(r.correlators[3], 1.0, epsilon = 1e-14);
    }

    #[test]
    fn mermin_wrong_particle_count() {
        assert!(matches!(
            mermin(&bell_state(), &MerminSettings::xy_standard(), &rest()),
            Err(Error::ParticleCount {
                expected: 3,
                got: 2
            })
        ));
        assert!(matches!(
            chsh(&ghz_state(), &ChshSettings::xz_standard(), &rest()),
            Err(Error::ParticleCount {
                expected: 2,
                got: 3
            })
        ));
    }

    #[test]
    fn chsh_tsirelson_and_classical() {
        let r = chsh(&bell_state(), &ChshSettings::xz_standard(), &rest()).unwrap();
        assert_abs_diff_eq!(r.abs_epsilon, 2.0 * SQRT_2, epsilon = 1e-12);
        let p = MultiQubitState::<f64>::from_bits("00").unwrap();
        let r = chsh(&p, &ChshSettings::xz_standard(), &rest()).unwrap();
        assert!(r.abs_epsilon <= 2.0 + 1e-12);
    }

    #[test]
    fn chsh_boosted_bell_state_drops_below_tsirelson() {
        use crate::kinematics::{wigner_rotation_perp, ParticleKinematics};
        use crate::wigner::transform_state;
        let boost = BoostSpec::along_x(0.5).unwrap();
        let rots = [Vec3::unit_z(), -Vec3::unit_z()].map(|d| {
            let p = ParticleKinematics::from_rapidity(1.0, d).unwrap();
            wigner_rotation_perp(&boost, &p).unwrap()
        });
        let state = transform_state(&bell_state(), &rots).unwrap();
        let r = chsh(&state, &ChshSettings::xz_standard(), &boost).unwrap();
        assert!(r.abs_epsilon < 2.0 * SQRT_2 - 1e-3);
        // frozen from an independent numpy evaluation of the same pipeline
        assert_abs_diff_eq!(r.abs_epsilon, 2.485496304460375, epsilon = 1e-12);
    }
}
