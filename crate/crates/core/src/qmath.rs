//! Small complex linear-algebra kernel: 2x2 single-qubit matrices, dense
//! operators on the full register, and normalized N-qubit statevectors.
//!
//! Basis ordering: particle 1 is the most significant bit, so for three
//! qubits index 1 is `|001>` and index 4 is `|100>`.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::geometry::Vec3;
use crate::scalar::{NumericPolicy, Real};

pub type ComplexScalar<T> = Complex<T>;

/// Complex scalar that rejects NaN and infinities.
pub fn complex<T: Real>(re: T, im: T) -> Result<Complex<T>> {
    if re.is_finite() && im.is_finite() {
        Ok(Complex::new(re, im))
    } else {
        Err(Error::NonFinite("complex scalar"))
    }
}

#[inline]
fn c<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

#[inline]
fn cr<T: Real>(re: f64) -> Complex<T> {
    Complex::new(T::lit(re), T::zero())
}

fn czero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

/// 2x2 complex matrix; row 0 is spin-up (`|0>`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2C<T> {
    pub m: [[Complex<T>; 2]; 2],
}

impl<T: Real> Mat2C<T> {
    /// Checked constructor.
    pub fn new(m: [[Complex<T>; 2]; 2]) -> Result<Self> {
        if m.iter()
            .flatten()
            .all(|z| z.re.is_finite() && z.im.is_finite())
        {
            Ok(Self { m })
        } else {
            Err(Error::NonFinite("2x2 matrix"))
        }
    }

    pub(crate) fn from_entries(m: [[Complex<T>; 2]; 2]) -> Self {
        Self { m }
    }

    pub fn zero() -> Self {
        Self::from_entries([[czero(); 2]; 2])
    }

    pub fn identity() -> Self {
        PauliBasis::identity()
    }

    /// `v . sigma` for a real 3-vector `v`.
    pub fn from_bloch(v: Vec3<T>) -> Self {
        Self::from_entries([
            [c(v.z, T::zero()), c(v.x, -v.y)],
            [c(v.x, v.y), c(-v.z, T::zero())],
        ])
    }

    /// Real 3-vector `v` such that `self = v . sigma + t I`, discarding `t`
    /// and any anti-Hermitian part.
    pub fn bloch_vector(&self) -> Vec3<T> {
        let half = T::lit(0.5);
        let m = &self.m;
        Vec3::new(
            (m[0][1].re + m[1][0].re) * half,
            (m[1][0].im - m[0][1].im) * half,
            (m[0][0].re - m[1][1].re) * half,
        )
    }

    pub fn get(&self, row: usize, col: usize) -> Complex<T> {
        self.m[row][col]
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        let mut out = *self;
        out.m.iter_mut().flatten().for_each(|z| *z = *z * s);
        out
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.m;
        Self::from_entries([
            [m[0][0].conj(), m[1][0].conj()],
            [m[0][1].conj(), m[1][1].conj()],
        ])
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        let mut out = *self;
        out.m.iter_mut().flatten().for_each(|z| *z = z.conj());
        out
    }

    pub fn trace(&self) -> Complex<T> {
        self.m[0][0] + self.m[1][1]
    }

    pub fn det(&self) -> Complex<T> {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.m
            .iter()
            .flatten()
            .zip(other.m.iter().flatten())
            .map(|(a, b)| (*a - *b).norm())
            .fold(T::zero(), T::max)
    }

    /// `max |(U^dagger U - I)_ij|`.
    pub fn unitarity_deviation(&self) -> T {
        (self.adjoint() * *self).max_abs_diff(&Self::identity())
    }

    /// `max |(H - H^dagger)_ij|`.
    pub fn hermiticity_deviation(&self) -> T {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn is_unitary(&self, tol: T) -> bool {
        self.unitarity_deviation() <= tol
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.hermiticity_deviation() <= tol
    }

    /// Eigenvalues of a Hermitian matrix, ascending.
    pub fn hermitian_eigenvalues(&self) -> [T; 2] {
        let half = T::lit(0.5);
        let mean = (self.m[0][0].re + self.m[1][1].re) * half;
        let diff = (self.m[0][0].re - self.m[1][1].re) * half;
        let off = self.m[0][1].norm();
        let r = diff.hypot(off);
        [mean - r, mean + r]
    }
}

impl<T: Real> Mul for Mat2C<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let (a, b) = (&self.m, &o.m);
        Self::from_entries([
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ])
    }
}

impl<T: Real> Add for Mat2C<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let mut out = self;
        for i in 0..2 {
            for j in 0..2 {
                out.m[i][j] = self.m[i][j] + o.m[i][j];
            }
        }
        out
    }
}

impl<T: Real> Sub for Mat2C<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        let mut out = self;
        for i in 0..2 {
            for j in 0..2 {
                out.m[i][j] = self.m[i][j] - o.m[i][j];
            }
        }
        out
    }
}

/// The identity and the three Pauli matrices.
pub struct PauliBasis;

impl PauliBasis {
    pub fn identity<T: Real>() -> Mat2C<T> {
        Mat2C::from_entries([[cr(1.0), czero()], [czero(), cr(1.0)]])
    }

    pub fn x<T: Real>() -> Mat2C<T> {
        Mat2C::from_entries([[czero(), cr(1.0)], [cr(1.0), czero()]])
    }

    pub fn y<T: Real>() -> Mat2C<T> {
        Mat2C::from_entries([
            [czero(), c(T::zero(), -T::one())],
            [c(T::zero(), T::one()), czero()],
        ])
    }

    pub fn z<T: Real>() -> Mat2C<T> {
        Mat2C::from_entries([[cr(1.0), czero()], [czero(), cr(-1.0)]])
    }

    /// `[sigma_x, sigma_y, sigma_z]`.
    pub fn sigmas<T: Real>() -> [Mat2C<T>; 3] {
        [Self::x(), Self::y(), Self::z()]
    }
}

/// Dense square operator on a `2^n`-dimensional register, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator<T> {
    dim: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> Operator<T> {
    pub fn identity(dim: usize) -> Self {
        let mut data = vec![czero(); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = cr(1.0);
        }
        Self { dim, data }
    }

    /// Row-major construction; `data.len()` must equal `dim * dim`.
    pub fn from_row_major(dim: usize, data: Vec<Complex<T>>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                got: data.len(),
            });
        }
        if !data.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NonFinite("operator"));
        }
        Ok(Self { dim, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex<T> {
        self.data[row * self.dim + col]
    }

    /// `(self (x) other)[i*d2 + k][j*d2 + l] = self[i][j] * other[k][l]`.
    pub fn kron(&self, other: &Self) -> Self {
        let (d1, d2) = (self.dim, other.dim);
        let dim = d1 * d2;
        let mut data = vec![czero(); dim * dim];
        for i in 0..d1 {
            for j in 0..d1 {
                let a = self.get(i, j);
                if a.re.is_zero() && a.im.is_zero() {
                    continue;
                }
                for k in 0..d2 {
                    for l in 0..d2 {
                        data[(i * d2 + k) * dim + j * d2 + l] = a * other.get(k, l);
                    }
                }
            }
        }
        Self { dim, data }
    }

    /// `max |(H - H^dagger)_ij|`.
    pub fn hermiticity_deviation(&self) -> T {
        let mut dev = T::zero();
        for i in 0..self.dim {
            for j in i..self.dim {
                dev = dev.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        dev
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (*a - *b).norm())
            .fold(T::zero(), T::max)
    }
}

impl<T: Real> From<Mat2C<T>> for Operator<T> {
    fn from(m: Mat2C<T>) -> Self {
        Self {
            dim: 2,
            data: m.m.iter().flatten().copied().collect(),
        }
    }
}

/// Kronecker product of two single-qubit matrices.
pub fn kron<T: Real>(a: &Mat2C<T>, b: &Mat2C<T>) -> Operator<T> {
    Operator::from(*a).kron(&Operator::from(*b))
}

/// `ops[0] (x) ops[1] (x) ...`; an empty slice gives the 1x1 identity.
pub fn kron_all<T: Real>(ops: &[Mat2C<T>]) -> Operator<T> {
    ops.iter().fold(Operator::identity(1), |acc, m| {
        acc.kron(&Operator::from(*m))
    })
}

/// Normalized pure state of `n` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiQubitState<T> {
    n_qubits: usize,
    amplitudes: Vec<Complex<T>>,
}

impl<T: Real> MultiQubitState<T> {
    /// Builds a state, rejecting (not renormalizing) amplitude vectors whose
    /// norm is off by more than the default policy allows.
    pub fn new(n_qubits: usize, amplitudes: Vec<Complex<T>>) -> Result<Self> {
        Self::with_policy(n_qubits, amplitudes, &NumericPolicy::default())
    }

    pub fn with_policy(
        n_qubits: usize,
        amplitudes: Vec<Complex<T>>,
        policy: &NumericPolicy<T>,
    ) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::NoQubits);
        }
        if n_qubits >= usize::BITS as usize || amplitudes.len() != 1usize << n_qubits {
            return Err(Error::BadLength {
                len: amplitudes.len(),
                n_qubits,
            });
        }
        if !amplitudes
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
        {
            return Err(Error::NonFinite("amplitudes"));
        }
        let norm_sq = amplitudes
            .iter()
            .fold(T::zero(), |acc, z| acc + z.norm_sqr());
        if (norm_sq - T::one()).abs() > policy.normalization {
            return Err(Error::NotNormalized {
                norm_sq: norm_sq.to_f64_lossy(),
            });
        }
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    /// Computational basis state `|index>`.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::NoQubits);
        }
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: index,
            });
        }
        let mut amps = vec![czero(); dim];
        amps[index] = cr(1.0);
        Self::new(n_qubits, amps)
    }

    /// Basis state from a bit label such as `"001"`; leftmost bit is particle 1.
    pub fn from_bits(bits: &str) -> Result<Self> {
        let index = usize::from_str_radix(bits, 2)
            .map_err(|_| Error::InvalidArgument(format!("bad bit label {bits:?}")))?;
        Self::basis(bits.len(), index)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> Complex<T> {
        self.amplitudes[index]
    }

    pub fn norm_sqr(&self) -> T {
        self.amplitudes
            .iter()
            .fold(T::zero(), |acc, z| acc + z.norm_sqr())
    }

    fn check_particle(&self, k: usize) -> Result<()> {
        if k == 0 || k > self.n_qubits {
            Err(Error::ParticleIndex {
                index: k,
                n_qubits: self.n_qubits,
            })
        } else {
            Ok(())
        }
    }

    fn act_in_place(amps: &mut [Complex<T>], n_qubits: usize, op: &Mat2C<T>, k: usize) {
        let mask = 1usize << (n_qubits - k);
        for i0 in 0..amps.len() {
            if i0 & mask != 0 {
                continue;
            }
            let i1 = i0 | mask;
            let (a0, a1) = (amps[i0], amps[i1]);
            amps[i0] = op.m[0][0] * a0 + op.m[0][1] * a1;
            amps[i1] = op.m[1][0] * a0 + op.m[1][1] * a1;
        }
    }

    /// Applies `op` to particle `k` (1-based). The result must still be
    /// normalized, which holds whenever `op` is unitary.
    pub fn apply_local(&self, op: &Mat2C<T>, k: usize) -> Result<Self> {
        self.check_particle(k)?;
        let mut amps = self.amplitudes.clone();
        Self::act_in_place(&mut amps, self.n_qubits, op, k);
        Self::new(self.n_qubits, amps)
    }

    /// Applies `ops[k-1]` to particle `k` for every particle.
    pub fn apply_product(&self, ops: &[Mat2C<T>]) -> Result<Self> {
        if ops.len() != self.n_qubits {
            return Err(Error::ParticleCount {
                expected: self.n_qubits,
                got: ops.len(),
            });
        }
        let mut amps = self.amplitudes.clone();
        for (i, op) in ops.iter().enumerate() {
            Self::act_in_place(&mut amps, self.n_qubits, op, i + 1);
        }
        Self::new(self.n_qubits, amps)
    }

    /// `<psi| op |psi>` for a Hermitian operator on the full register.
    pub fn expectation(&self, op: &Operator<T>) -> Result<T> {
        self.expectation_with_policy(op, &NumericPolicy::default())
    }

    pub fn expectation_with_policy(
        &self,
        op: &Operator<T>,
        policy: &NumericPolicy<T>,
    ) -> Result<T> {
        if op.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: op.dim(),
            });
        }
        let dev = op.hermiticity_deviation();
        if dev > policy.exact {
            return Err(Error::NotHermitian {
                deviation: dev.to_f64_lossy(),
            });
        }
        let dim = self.dim();
        let mut acc = czero::<T>();
        for i in 0..dim {
            let row = (0..dim).fold(czero::<T>(), |s, j| s + op.get(i, j) * self.amplitudes[j]);
            acc = acc + self.amplitudes[i].conj() * row;
        }
        if acc.im.abs() > policy.exact {
            return Err(Error::NotHermitian {
                deviation: acc.im.abs().to_f64_lossy(),
            });
        }
        Ok(acc.re)
    }

    /// Inner product `<self|other>`.
    pub fn inner(&self, other: &Self) -> Result<Complex<T>> {
        if other.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .fold(czero(), |acc, (a, b)| acc + a.conj() * *b))
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (*a - *b).norm())
            .fold(T::zero(), T::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    type M = Mat2C<f64>;

    fn ghz() -> MultiQubitState<f64> {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut amps = vec![c(0.0, 0.0); 8];
        amps[0] = c(h, 0.0);
        amps[7] = c(h, 0.0);
        MultiQubitState::new(3, amps).unwrap()
    }

    #[test]
    fn pauli_algebra() {
        let [x, y, z] = PauliBasis::sigmas::<f64>();
        let i = M::identity();
        for s in [x, y, z] {
            assert!((s * s).max_abs_diff(&i) < 1e-15);
            assert!(s.is_hermitian(0.0));
            assert_eq!(s.trace(), c(0.0, 0.0));
        }
        let iz = z.scale(c(0.0, 1.0));
        assert!((x * y).max_abs_diff(&iz) < 1e-15);
        assert!((y * z).max_abs_diff(&x.scale(c(0.0, 1.0))) < 1e-15);
        assert!((z * x).max_abs_diff(&y.scale(c(0.0, 1.0))) < 1e-15);
    }

    #[test]
    fn kron_identity_and_diagonal() {
        let id = kron(&M::identity(), &M::identity());
        assert_eq!(id, Operator::identity(4));
        let zz = kron(&PauliBasis::z::<f64>(), &PauliBasis::z());
        for (i, d) in [1.0, -1.0, -1.0, 1.0].iter().enumerate() {
            for j in 0..4 {
                let expected = if i == j { *d } else { 0.0 };
                assert_eq!(zz.get(i, j), c(expected, 0.0));
            }
        }
    }

    #[test]
    fn kron_xy_corner_entry() {
        // sigma_x[0][1] * sigma_y[0][1] = 1 * (-i)
        let xy = kron(&PauliBasis::x::<f64>(), &PauliBasis::y());
        assert_eq!(xy.get(0, 3), c(0.0, -1.0));
    }

    #[test]
    fn kron_index_law() {
        let a = M::new([[c(1.0, 2.0), c(0.5, -1.0)], [c(-3.0, 0.0), c(0.0, 0.25)]]).unwrap();
        let b = M::new([[c(0.0, 1.0), c(2.0, 2.0)], [c(1.5, -0.5), c(-1.0, 0.0)]]).unwrap();
        let k = kron(&a, &b);
        for i in 0..2 {
            for j in 0..2 {
                for p in 0..2 {
                    for q in 0..2 {
                        assert_eq!(k.get(2 * i + p, 2 * j + q), a.m[i][j] * b.m[p][q]);
                    }
                }
            }
        }
    }

    #[test]
    fn apply_local_examples() {
        let s = MultiQubitState::<f64>::from_bits("000").unwrap();
        let flipped = s.apply_local(&PauliBasis::x(), 3).unwrap();
        assert_eq!(flipped, MultiQubitState::from_bits("001").unwrap());

        let g = ghz();
        assert_eq!(g.apply_local(&M::identity(), 1).unwrap(), g);

        let y = s.apply_local(&PauliBasis::y(), 1).unwrap();
        assert_eq!(y.amplitude(4), c(0.0, 1.0));
        assert_abs_diff_eq!(y.norm_sqr(), 1.0);
    }

    #[test]
    fn apply_local_rejects_bad_index() {
        let s = MultiQubitState::<f64>::from_bits("00").unwrap();
        assert!(matches!(
            s.apply_local(&PauliBasis::x(), 0),
            Err(Error::ParticleIndex { index: 0, .. })
        ));
        assert!(matches!(
            s.apply_local(&PauliBasis::x(), 3),
            Err(Error::ParticleIndex { index: 3, .. })
        ));
    }

    #[test]
    fn expectation_examples() {
        let up = MultiQubitState::<f64>::from_bits("0").unwrap();
        assert_eq!(up.expectation(&PauliBasis::z().into()).unwrap(), 1.0);

        let g = ghz();
        let xxx = kron_all(&[PauliBasis::x(), PauliBasis::x(), PauliBasis::x()]);
        assert_abs_diff_eq!(g.expectation(&xxx).unwrap(), 1.0, epsilon = 1e-15);
        let zii = kron_all(&[PauliBasis::z(), M::identity(), M::identity()]);
        assert_abs_diff_eq!(g.expectation(&zii).unwrap(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn expectation_errors() {
        let g = ghz();
        let small: Operator<f64> = PauliBasis::z().into();
        assert!(matches!(
            g.expectation(&small),
            Err(Error::DimensionMismatch {
                expected: 8,
                got: 2
            })
        ));
        let up = MultiQubitState::<f64>::from_bits("0").unwrap();
        let not_herm = M::new([[c(0.0, 0.0), c(1.0, 0.0)], [c(0.0, 0.0), c(0.0, 0.0)]]).unwrap();
        assert!(matches!(
            up.expectation(&not_herm.into()),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn construction_rejects_bad_norm_and_length() {
        let amps = vec![c(1.0, 0.0), c(1e-4, 0.0)];
        assert!(matches!(
            MultiQubitState::new(1, amps),
            Err(Error::NotNormalized { .. })
        ));
        assert!(matches!(
            MultiQubitState::new(2, vec![c(1.0, 0.0)]),
            Err(Error::BadLength { .. })
        ));
        assert!(matches!(
            MultiQubitState::<f64>::new(0, vec![]),
            Err(Error::NoQubits)
        ));
        assert!(MultiQubitState::new(1, vec![c(f64::NAN, 0.0), c(1.0, 0.0)]).is_err());
    }

    #[test]
    fn bloch_round_trip() {
        let v = Vec3::new(0.3, -0.4, 0.5);
        let back = M::from_bloch(v).bloch_vector();
        assert!(back.max_abs_diff(v) < 1e-15);
        let ev = M::from_bloch(v).hermitian_eigenvalues();
        assert_abs_diff_eq!(ev[1], v.norm(), epsilon = 1e-15);
        assert_abs_diff_eq!(ev[0], -v.norm(), epsilon = 1e-15);
    }

    #[test]
    fn generic_over_f32() {
        let s = MultiQubitState::<f32>::from_bits("10").unwrap();
        let zz: Operator<f32> = kron(&PauliBasis::z(), &PauliBasis::z());
        assert_eq!(s.expectation(&zz).unwrap(), -1.0f32);
    }
}
