//! Numeric traits shared by the graph, Hausdorff and transport code.
//!
//! [`Weight`] covers path lengths (exact dyadics, exact rationals, floats);
//! [`Field`] adds division for the transport solver and seminorm ratios.

use std::cmp::Ordering;
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::Ratio;
use num_traits::{Signed, Zero};

use crate::dyadic::Dyadic;

/// Exact rationals used in "rational mode".
pub type Rational = Ratio<i128>;

/// Tolerance under which float quantities are treated as zero by the
/// transport solver.
pub const FLOAT_EPS: f64 = 1e-13;

pub trait Weight:
    Copy + PartialOrd + Add<Output = Self> + Sub<Output = Self> + Debug + Send + Sync + 'static
{
    fn zero() -> Self;
    fn from_dyadic(d: Dyadic) -> Self;
    fn to_f64(&self) -> f64;
    /// Total order; floats use `f64::total_cmp`.
    fn total_cmp(&self, other: &Self) -> Ordering;
    /// `self * t` for a dyadic fraction `t`.
    fn scale(&self, t: Dyadic) -> Self;

    fn is_positive(&self) -> bool {
        self.total_cmp(&Self::zero()) == Ordering::Greater
    }

    fn abs_diff(self, other: Self) -> Self {
        if self.total_cmp(&other) == Ordering::Less {
            other - self
        } else {
            self - other
        }
    }

    fn max_of(self, other: Self) -> Self {
        if other.total_cmp(&self) == Ordering::Greater {
            other
        } else {
            self
        }
    }

    fn min_of(self, other: Self) -> Self {
        if other.total_cmp(&self) == Ordering::Less {
            other
        } else {
            self
        }
    }
}

impl Weight for Dyadic {
    fn zero() -> Self {
        Dyadic::ZERO
    }
    fn from_dyadic(d: Dyadic) -> Self {
        d
    }
    fn to_f64(&self) -> f64 {
        Dyadic::to_f64(*self)
    }
    fn total_cmp(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }
    fn scale(&self, t: Dyadic) -> Self {
        *self * t
    }
}

impl Weight for Rational {
    fn zero() -> Self {
        <Ratio<i128> as Zero>::zero()
    }
    fn from_dyadic(d: Dyadic) -> Self {
        d.to_ratio()
    }
    fn to_f64(&self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }
    fn total_cmp(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }
    fn scale(&self, t: Dyadic) -> Self {
        *self * t.to_ratio()
    }
}

impl Weight for f64 {
    fn zero() -> Self {
        0.0
    }
    fn from_dyadic(d: Dyadic) -> Self {
        d.to_f64()
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn total_cmp(&self, other: &Self) -> Ordering {
        f64::total_cmp(self, other)
    }
    fn scale(&self, t: Dyadic) -> Self {
        self * t.to_f64()
    }
}

pub trait Field:
    Weight + Mul<Output = Self> + Div<Output = Self> + Neg<Output = Self>
{
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    /// Strictly positive beyond numerical noise.
    fn significant(&self) -> bool;
    fn abs(&self) -> Self;
    /// Whether this mode is exact; floats are not.
    const EXACT: bool;
}

impl Field for Rational {
    const EXACT: bool = true;
    fn one() -> Self {
        Ratio::from_integer(1)
    }
    fn from_i64(n: i64) -> Self {
        Ratio::from_integer(n as i128)
    }
    fn significant(&self) -> bool {
        Signed::is_positive(self)
    }
    fn abs(&self) -> Self {
        Signed::abs(self)
    }
}

impl Field for f64 {
    const EXACT: bool = false;
    fn one() -> Self {
        1.0
    }
    fn from_i64(n: i64) -> Self {
        n as f64
    }
    fn significant(&self) -> bool {
        *self > FLOAT_EPS
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
}

/// Neumaier-compensated running sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl std::iter::FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}
