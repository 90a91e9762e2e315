//! Unevaluated-sum ("double-word") arithmetic over a [`Real`] base type.
//!
//! Used by the explicit Lorentz-matrix composition, whose products of
//! boosts with large rapidities cancel down to an O(1) rotation and lose
//! about `e^(2 chi)` relative accuracy in plain arithmetic.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::Float;

use crate::scalar::Real;

/// Minimal field-like arithmetic shared by plain and compensated scalars.
pub trait Arith:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    type Base: Real;

    fn lift(x: Self::Base) -> Self;
    fn lower(self) -> Self::Base;
    fn sqrt(self) -> Self;

    fn zero() -> Self {
        Self::lift(<Self::Base as num_traits::Zero>::zero())
    }

    fn one() -> Self {
        Self::lift(<Self::Base as num_traits::One>::one())
    }
}

impl<T: Real> Arith for T {
    type Base = T;

    fn lift(x: T) -> T {
        x
    }

    fn lower(self) -> T {
        self
    }

    fn sqrt(self) -> T {
        Float::sqrt(self)
    }
}

/// `hi + lo` with `|lo| <= ulp(hi) / 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Compensated<T> {
    pub hi: T,
    pub lo: T,
}

#[inline]
fn two_sum<T: Real>(a: T, b: T) -> (T, T) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum<T: Real>(a: T, b: T) -> (T, T) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod<T: Real>(a: T, b: T) -> (T, T) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl<T: Real> Compensated<T> {
    pub fn new(x: T) -> Self {
        Self {
            hi: x,
            lo: T::zero(),
        }
    }

    fn renorm(a: T, b: T) -> Self {
        let (hi, lo) = quick_two_sum(a, b);
        Self { hi, lo }
    }

    fn mul_base(self, b: T) -> Self {
        let (p, e) = two_prod(self.hi, b);
        Self::renorm(p, e + self.lo * b)
    }
}

impl<T: Real> Add for Compensated<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        Self::renorm(s, e + f)
    }
}

impl<T: Real> Neg for Compensated<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl<T: Real> Sub for Compensated<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl<T: Real> Mul for Compensated<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let (p, e) = two_prod(self.hi, o.hi);
        Self::renorm(p, e + (self.hi * o.lo + self.lo * o.hi))
    }
}

impl<T: Real> Div for Compensated<T> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let q1 = self.hi / o.hi;
        let r = self - o.mul_base(q1);
        let q2 = r.hi / o.hi;
        let r = r - o.mul_base(q2);
        let q3 = r.hi / o.hi;
        Self::renorm(q1, q2) + Self::new(q3)
    }
}

impl<T: Real> Arith for Compensated<T> {
    type Base = T;

    fn lift(x: T) -> Self {
        Self::new(x)
    }

    fn lower(self) -> T {
        self.hi + self.lo
    }

    fn sqrt(self) -> Self {
        if self.hi <= T::zero() {
            return Self::new(T::zero());
        }
        let y = self.hi.sqrt();
        let (p, e) = two_prod(y, y);
        let r = self - Self { hi: p, lo: e };
        Self::renorm(y, r.hi / (y + y))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type C = Compensated<f64>;

    #[test]
    fn recovers_cancelled_digits() {
        // (1 + 2^-60) - 1 vanishes in f64 but not in compensated form.
        let tiny = 2f64.powi(-60);
        let x = C::new(1.0) + C::new(tiny);
        let d = x - C::new(1.0);
        assert_eq!(d.lower(), tiny);
    }

    #[test]
    fn division_and_sqrt_are_accurate() {
        let three = C::new(3.0);
        let third = C::one() / three;
        let back = third * three - C::one();
        assert!(back.lower().abs() < 1e-30);

        let two = C::new(2.0);
        let r = two.sqrt();
        let err = r * r - two;
        assert!(err.lower().abs() < 1e-30);
    }

    #[test]
    fn plain_scalar_is_arith() {
        fn norm<S: Arith>(a: S, b: S) -> S {
            (a * a + b * b).sqrt()
        }
        assert_eq!(norm(3.0f64, 4.0), 5.0);
        assert_eq!(norm(C::new(3.0), C::new(4.0)).lower(), 5.0);
    }
}
