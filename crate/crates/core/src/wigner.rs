//! Spin-1/2 Wigner matrices and their action on multi-qubit states.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::kinematics::WignerRotation;
use crate::qmath::{Mat2C, MultiQubitState, PauliBasis};
use crate::scalar::Real;

/// Builds the spin matrix of a rotation, `D = cos(d/2) I + i sin(d/2) n.sigma`.
pub fn d_matrix<T: Real>(rot: &WignerRotation<T>) -> Mat2C<T> {
    match rot {
        WignerRotation::Identity => PauliBasis::identity(),
        WignerRotation::Rotation { delta, axis } => {
            let (s, c) = (*delta / T::lit(2.0)).sin_cos();
            PauliBasis::identity().scale(Complex::new(c, T::zero()))
                + Mat2C::from_bloch(*axis).scale(Complex::new(T::zero(), s))
        }
    }
}

/// Signature shared by [`d_matrix`] and test doubles of it.
pub type DMatrixFn<T> = fn(&WignerRotation<T>) -> Mat2C<T>;

/// `(D_1 (x) D_2 (x) ... ) |state>`, one rotation per particle.
pub fn transform_state<T: Real>(
    state: &MultiQubitState<T>,
    rots: &[WignerRotation<T>],
) -> Result<MultiQubitState<T>> {
    transform_state_with(state, rots, d_matrix)
}

/// [`transform_state`] with an explicit rotation-to-matrix map.
pub fn transform_state_with<T: Real>(
    state: &MultiQubitState<T>,
    rots: &[WignerRotation<T>],
    to_matrix: DMatrixFn<T>,
) -> Result<MultiQubitState<T>> {
    if rots.len() != state.n_qubits() {
        return Err(Error::ParticleCount {
            expected: state.n_qubits(),
            got: rots.len(),
        });
    }
    let mats: Vec<Mat2C<T>> = rots.iter().map(to_matrix).collect();
    state.apply_product(&mats)
}

/// `(|000> + |111>) / sqrt(2)`.
pub fn ghz_state<T: Real>() -> MultiQubitState<T> {
    cat_state(3)
}

/// `(|00> + |11>) / sqrt(2)`.
pub fn bell_state<T: Real>() -> MultiQubitState<T> {
    cat_state(2)
}

fn cat_state<T: Real>(n: usize) -> MultiQubitState<T> {
    let h = T::FRAC_1_SQRT_2();
    let dim = 1usize << n;
    let mut amps = vec![Complex::new(T::zero(), T::zero()); dim];
    amps[0] = Complex::new(h, T::zero());
    amps[dim - 1] = Complex::new(h, T::zero());
    MultiQubitState::new(n, amps).expect("cat state is normalized")
}

/// Unnormalized amplitudes of a transformed GHZ state: the transformed state
/// is `(1/sqrt 2) sum_ijk c_ijk |ijk>`. Fields are named by basis label;
/// `c000` through `c111` are the coefficients conventionally called A..H.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GhzCoefficients<T> {
    pub c000: Complex<T>,
    pub c001: Complex<T>,
    pub c010: Complex<T>,
    pub c011: Complex<T>,
    pub c100: Complex<T>,
    pub c101: Complex<T>,
    pub c110: Complex<T>,
    pub c111: Complex<T>,
}

impl<T: Real> GhzCoefficients<T> {
    /// Coefficients of the untransformed GHZ state.
    pub fn identity() -> Self {
        let (z, o) = (
            Complex::new(T::zero(), T::zero()),
            Complex::new(T::one(), T::zero()),
        );
        Self::from_array([o, z, z, z, z, z, z, o])
    }

    pub fn from_array(c: [Complex<T>; 8]) -> Self {
        Self {
            c000: c[0],
            c001: c[1],
            c010: c[2],
            c011: c[3],
            c100: c[4],
            c101: c[5],
            c110: c[6],
            c111: c[7],
        }
    }

    /// In basis order `000, 001, ..., 111`.
    pub fn to_array(&self) -> [Complex<T>; 8] {
        [
            self.c000, self.c001, self.c010, self.c011, self.c100, self.c101, self.c110, self.c111,
        ]
    }

    /// `sum |c|^2`; equals 2 for a unit-norm transformed state.
    pub fn norm_sqr(&self) -> T {
        self.to_array()
            .iter()
            .fold(T::zero(), |acc, z| acc + z.norm_sqr())
    }

    /// `Re(c000 conj(c111))`, the single quantity the fixed x/y Mermin
    /// settings depend on.
    pub fn re_a_conj_h(&self) -> T {
        (self.c000 * self.c111.conj()).re
    }
}

/// Transformed-GHZ coefficients written out term by term from the three
/// Wigner matrices: `c_ijk = D1[i][0] D2[j][0] D3[k][0] + D1[i][1] D2[j][1] D3[k][1]`.
pub fn ghz_coefficients<T: Real>(
    d1: &Mat2C<T>,
    d2: &Mat2C<T>,
    d3: &Mat2C<T>,
) -> Result<GhzCoefficients<T>> {
    let tol = T::lit(1e-10);
    for d in [d1, d2, d3] {
        let dev = d.unitarity_deviation();
        if dev.is_nan() || dev > tol {
            return Err(Error::NotUnitary {
                deviation: dev.to_f64_lossy(),
            });
        }
    }
    let (a, b, c) = (&d1.m, &d2.m, &d3.m);
    Ok(GhzCoefficients {
        c000: a[0][0] * b[0][0] * c[0][0] + a[0][1] * b[0][1] * c[0][1],
        c001: a[0][0] * b[0][0] * c[1][0] + a[0][1] * b[0][1] * c[1][1],
        c010: a[0][0] * b[1][0] * c[0][0] + a[0][1] * b[1][1] * c[0][1],
        c011: a[0][0] * b[1][0] * c[1][0] + a[0][1] * b[1][1] * c[1][1],
        c100: a[1][0] * b[0][0] * c[0][0] + a[1][1] * b[0][1] * c[0][1],
        c101: a[1][0] * b[0][0] * c[1][0] + a[1][1] * b[0][1] * c[1][1],
        c110: a[1][0] * b[1][0] * c[0][0] + a[1][1] * b[1][1] * c[0][1],
        c111: a[1][0] * b[1][0] * c[1][0] + a[1][1] * b[1][1] * c[1][1],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Vec3;
    use crate::qmath::kron_all;
    use approx::assert_abs_diff_eq;

    fn cx(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn identity_rotation_gives_identity_matrix() {
        assert_eq!(
            d_matrix::<f64>(&WignerRotation::Identity),
            PauliBasis::identity()
        );
    }

    #[test]
    fn parallel_momenta_matrix() {
        let d = 0.9f64;
        let (s, c) = (d / 2.0).sin_cos();
        let m = d_matrix(&WignerRotation::new(d, -Vec3::unit_y()).unwrap());
        let expected = Mat2C::new([[cx(c, 0.0), cx(-s, 0.0)], [cx(s, 0.0), cx(c, 0.0)]]).unwrap();
        assert!(m.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn oblique_axis_matrix() {
        let d = 1.3f64;
        let (s, c) = (d / 2.0).sin_cos();
        let r3 = 3f64.sqrt() / 2.0;
        let m = d_matrix(&WignerRotation::new(d, Vec3::new(0.0, -0.5, r3)).unwrap());
        let expected = Mat2C::new([
            [cx(c, r3 * s), cx(-0.5 * s, 0.0)],
            [cx(0.5 * s, 0.0), cx(c, -r3 * s)],
        ])
        .unwrap();
        assert!(m.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn ghz_basics() {
        let g = ghz_state::<f64>();
        assert_abs_diff_eq!(g.norm_sqr(), 1.0, epsilon = 1e-15);
        let [x, _, z] = PauliBasis::sigmas::<f64>();
        assert_abs_diff_eq!(g.expectation(&kron_all(&[z, z, z])).unwrap(), 0.0);
        assert_abs_diff_eq!(
            g.expectation(&kron_all(&[x, x, x])).unwrap(),
            1.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn transform_identity_and_length_mismatch() {
        let g = ghz_state::<f64>();
        let id = [WignerRotation::Identity; 3];
        assert_eq!(transform_state(&g, &id).unwrap(), g);
        assert!(matches!(
            transform_state(&g, &id[..2]),
            Err(Error::ParticleCount {
                expected: 3,
                got: 2
            })
        ));
    }

    #[test]
    fn parallel_momenta_ghz_amplitude() {
        let d = 0.8f64;
        let rot = WignerRotation::new(d, -Vec3::unit_y()).unwrap();
        let out = transform_state(&ghz_state(), &[rot; 3]).unwrap();
        let (s, c) = (d / 2.0).sin_cos();
        let expected = (c.powi(3) - s.powi(3)) / 2f64.sqrt();
        assert_abs_diff_eq!(out.amplitude(0).re, expected, epsilon = 1e-15);
        assert_abs_diff_eq!(out.amplitude(0).im, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn coefficient_examples() {
        let id = Mat2C::<f64>::identity();
        assert_eq!(
            ghz_coefficients(&id, &id, &id).unwrap(),
            GhzCoefficients::identity()
        );

        let d = 1.1f64;
        let (s, c) = (d / 2.0).sin_cos();
        let m = d_matrix(&WignerRotation::new(d, -Vec3::unit_y()).unwrap());
        let k = ghz_coefficients(&m, &m, &m).unwrap();
        assert_abs_diff_eq!(k.c000.re, c.powi(3) - s.powi(3), epsilon = 1e-15);
        assert_abs_diff_eq!(k.c111.re, c.powi(3) + s.powi(3), epsilon = 1e-15);
    }

    #[test]
    fn centre_of_mass_coefficients_reproduce_polynomial() {
        let r3 = 3f64.sqrt() / 2.0;
        for &d in &[0.2, 0.9, std::f64::consts::FRAC_PI_2, 2.5] {
            let d1 = d_matrix(&WignerRotation::new(d, Vec3::unit_y()).unwrap());
            let d2 = d_matrix(&WignerRotation::new(d, Vec3::new(0.0, -0.5, r3)).unwrap());
            let d3 = d_matrix(&WignerRotation::new(d, Vec3::new(0.0, -0.5, -r3)).unwrap());
            assert!(d3.max_abs_diff(&d2.conj()) < 1e-15);
            let k = ghz_coefficients(&d1, &d2, &d3).unwrap();
            let cd = d.cos();
            let poly = cd.powi(3) / 16.0 + 3.0 / 8.0 * cd * cd + 33.0 / 16.0 * cd + 1.5;
            assert_abs_diff_eq!(4.0 * k.re_a_conj_h(), poly, epsilon = 1e-14);
            assert_abs_diff_eq!(k.norm_sqr(), 2.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn coefficients_reject_non_unitary() {
        let bad = PauliBasis::identity::<f64>().scale(cx(1.1, 0.0));
        let id = Mat2C::identity();
        assert!(matches!(
            ghz_coefficients(&bad, &id, &id),
            Err(Error::NotUnitary { .. })
        ));
    }
}
