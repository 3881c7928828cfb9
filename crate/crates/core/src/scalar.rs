//! Scalar abstractions.
//!
//! Floating-point paths (exponential sums, character sums) are generic over
//! [`Real`], implemented for `f32` and `f64`. Sums of nonnegative rationals
//! such as `Σ ρ(m)/m` are generic over [`Field`], which covers both the
//! floats and the exact `BigRational`.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, Num, ToPrimitive};

/// Floating-point scalar used by the numeric evaluation paths.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Send + Sync + Debug + Display + Default + 'static
{
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).unwrap_or_else(Self::infinity)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Ordered field that can absorb integer ratios exactly or approximately.
pub trait Field: Clone + Num + FromPrimitive + PartialOrd + Debug {
    fn ratio(num: u64, den: u64) -> Self {
        Self::from_u64(num).expect("u64 numerator") / Self::from_u64(den).expect("u64 denominator")
    }
}

impl<F> Field for F where F: Clone + Num + FromPrimitive + PartialOrd + Debug {}

/// `e(r/q) = exp(2πi r/q)` for an already-reduced residue `r` in `[0, q)`.
pub fn unit_root<T: Real>(r: u64, q: u64) -> Complex<T> {
    debug_assert!(q > 0 && r < q);
    // fold into [-q/2, q/2] so the float argument stays small
    let signed = if 2 * r > q {
        r as f64 - q as f64
    } else {
        r as f64
    };
    let angle = T::from_f64(signed).unwrap() * T::TAU() / T::from_u64(q).unwrap();
    Complex::new(angle.cos(), angle.sin())
}

/// Neumaier-compensated accumulator with a fixed combination order.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum<T> {
    sum: T,
    carry: T,
}

impl<T: Real> CompensatedSum<T> {
    pub fn new() -> Self {
        Self {
            sum: T::zero(),
            carry: T::zero(),
        }
    }

    pub fn add(&mut self, x: T) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry = self.carry + ((self.sum - t) + x);
        } else {
            self.carry = self.carry + ((x - t) + self.sum);
        }
        self.sum = t;
    }

    pub fn value(&self) -> T {
        self.sum + self.carry
    }
}

impl<T: Real> FromIterator<T> for CompensatedSum<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        let mut acc = Self::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_root_quarter_turns() {
        let z: Complex<f64> = unit_root(1, 4);
        assert!((z - Complex::new(0.0, 1.0)).norm() < 1e-15);
        let z: Complex<f64> = unit_root(3, 4);
        assert!((z - Complex::new(0.0, -1.0)).norm() < 1e-15);
        let z: Complex<f32> = unit_root(1, 2);
        assert!((z.re + 1.0).abs() < 1e-6);
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut acc = CompensatedSum::<f64>::new();
        acc.add(1e16);
        for _ in 0..10 {
            acc.add(1.0);
        }
        acc.add(-1e16);
        assert_eq!(acc.value(), 10.0);
    }

    #[test]
    fn field_ratio_is_exact_for_rationals() {
        let r: num_rational::BigRational = Field::ratio(2, 4);
        assert_eq!(r, num_rational::BigRational::new(1.into(), 2.into()));
        let f: f64 = Field::ratio(1, 4);
        assert_eq!(f, 0.25);
    }
}
