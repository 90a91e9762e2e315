//! Bracketing and bisection for scalar functions on an interval.

use crate::scalar::Real;

/// Direction in which `f` passes through zero as the argument increases.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrossingDirection {
    /// `f` goes from positive to negative.
    Falling,
    /// `f` goes from negative to positive.
    Rising,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing<T> {
    pub at: T,
    pub direction: CrossingDirection,
}

/// Bisection on a bracket with `f(lo)` and `f(hi)` of opposite sign (or one
/// of them zero). Stops once the bracket is narrower than `tol`.
pub fn bisect<T: Real, F: Fn(T) -> T>(f: F, mut lo: T, mut hi: T, tol: T) -> T {
    let two = T::lit(2.0);
    let mut f_lo = f(lo);
    if f_lo == T::zero() {
        return lo;
    }
    if f(hi) == T::zero() {
        return hi;
    }
    // bounded: each step halves the bracket
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = lo + (hi - lo) / two;
        let f_mid = f(mid);
        if f_mid == T::zero() {
            return mid;
        }
        if (f_mid > T::zero()) == (f_lo > T::zero()) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    lo + (hi - lo) / two
}

/// All sign changes of `f` on the open interval `(lo, hi)`, located by
/// sampling `samples` interior points and refining each bracket by bisection.
pub fn find_crossings<T: Real, F: Fn(T) -> T>(
    f: F,
    lo: T,
    hi: T,
    samples: usize,
    tol: T,
) -> Vec<Crossing<T>> {
    let n = samples.max(2);
    let step = (hi - lo) / T::from_usize(n + 1).unwrap();
    let grid: Vec<T> = (1..=n)
        .map(|i| lo + step * T::from_usize(i).unwrap())
        .collect();
    let values: Vec<T> = grid.iter().map(|&x| f(x)).collect();
    let mut out = Vec::new();
    for i in 0..n - 1 {
        let (a, b) = (values[i], values[i + 1]);
        // an exact zero on a grid point is attributed to the bracket it starts
        if a == T::zero() && i > 0 {
            continue;
        }
        let direction = if a > T::zero() && b <= T::zero() {
            CrossingDirection::Falling
        } else if a < T::zero() && b >= T::zero() {
            CrossingDirection::Rising
        } else {
            continue;
        };
        let at = bisect(&f, grid[i], grid[i + 1], tol);
        out.push(Crossing { at, direction });
    }
    out
}
