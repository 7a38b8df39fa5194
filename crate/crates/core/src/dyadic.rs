//! Exact dyadic rationals `numerator / 2^exponent`.
//!
//! Values are always stored in lowest terms: a nonzero value with a positive
//! exponent has an odd numerator, and zero is stored as `0 / 2^0`. Because of
//! that normalization the derived `Eq` and `Hash` agree with numeric equality.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::Ratio;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Largest exponent the arithmetic accepts; `2^62` still fits an `i64`.
pub const MAX_EXPONENT: u32 = 62;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Dyadic {
    num: i64,
    exp: u32,
}

impl Dyadic {
    pub const ZERO: Dyadic = Dyadic { num: 0, exp: 0 };
    pub const ONE: Dyadic = Dyadic { num: 1, exp: 0 };
    pub const HALF: Dyadic = Dyadic { num: 1, exp: 1 };

    /// Builds `num / 2^exp` and reduces it.
    pub fn new(num: i64, exp: u32) -> Self {
        assert!(exp <= MAX_EXPONENT, "dyadic exponent {exp} exceeds {MAX_EXPONENT}");
        let mut d = Dyadic { num, exp };
        d.normalize();
        d
    }

    pub fn from_int(n: i64) -> Self {
        Dyadic { num: n, exp: 0 }
    }

    /// `2^{-k}`.
    pub fn pow2_neg(k: u32) -> Self {
        Dyadic::new(1, k)
    }

    fn normalize(&mut self) {
        if self.num == 0 {
            self.exp = 0;
            return;
        }
        let tz = self.num.trailing_zeros().min(self.exp);
        self.num >>= tz;
        self.exp -= tz;
    }

    pub fn numerator(self) -> i64 {
        self.num
    }

    pub fn exponent(self) -> u32 {
        self.exp
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }

    pub fn half(self) -> Self {
        Dyadic::new(self.num, self.exp + 1)
    }

    pub fn abs(self) -> Self {
        Dyadic { num: self.num.abs(), exp: self.exp }
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / (1u64 << self.exp) as f64
    }

    pub fn to_ratio(self) -> Ratio<i128> {
        Ratio::new(self.num as i128, 1i128 << self.exp)
    }

    /// Numerator rescaled to exponent `e` (which must be at least `self.exp`).
    fn scaled_to(self, e: u32) -> i128 {
        (self.num as i128) << (e - self.exp)
    }

    fn from_wide(num: i128, exp: u32) -> Option<Self> {
        let mut num = num;
        let mut exp = exp;
        if num == 0 {
            return Some(Dyadic::ZERO);
        }
        let tz = num.trailing_zeros().min(exp);
        num >>= tz;
        exp -= tz;
        if exp > MAX_EXPONENT {
            return None;
        }
        i64::try_from(num).ok().map(|num| Dyadic { num, exp })
    }

    pub fn checked_add(self, rhs: Self) -> Option<Self> {
        let e = self.exp.max(rhs.exp);
        Dyadic::from_wide(self.scaled_to(e) + rhs.scaled_to(e), e)
    }

    pub fn checked_sub(self, rhs: Self) -> Option<Self> {
        let e = self.exp.max(rhs.exp);
        Dyadic::from_wide(self.scaled_to(e) - rhs.scaled_to(e), e)
    }

    pub fn checked_mul(self, rhs: Self) -> Option<Self> {
        Dyadic::from_wide(self.num as i128 * rhs.num as i128, self.exp + rhs.exp)
    }

    /// Largest integer not exceeding the value.
    pub fn floor(self) -> i64 {
        self.num >> self.exp
    }

    /// Parses `"p"`, `"p/2^k"` or `"p/q"` with `q` a power of two.
    pub fn parse(s: &str) -> Option<Self> {
        let s = s.trim();
        match s.split_once('/') {
            None => s.parse::<i64>().ok().map(Dyadic::from_int),
            Some((p, q)) => {
                let p: i64 = p.trim().parse().ok()?;
                let q = q.trim();
                let exp = if let Some(k) = q.strip_prefix("2^") {
                    k.parse::<u32>().ok()?
                } else {
                    let q: u64 = q.parse().ok()?;
                    if !q.is_power_of_two() {
                        return None;
                    }
                    q.trailing_zeros()
                };
                (exp <= MAX_EXPONENT).then(|| Dyadic::new(p, exp))
            }
        }
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let e = self.exp.max(other.exp);
        self.scaled_to(e).cmp(&other.scaled_to(e))
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: Self) -> Self {
        self.checked_add(rhs).expect("dyadic addition overflow")
    }
}

impl Sub for Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: Self) -> Self {
        self.checked_sub(rhs).expect("dyadic subtraction overflow")
    }
}

impl Mul for Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: Self) -> Self {
        self.checked_mul(rhs).expect("dyadic multiplication overflow")
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Self {
        Dyadic { num: -self.num, exp: self.exp }
    }
}

impl From<i64> for Dyadic {
    fn from(n: i64) -> Self {
        Dyadic::from_int(n)
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/2^{}", self.num, self.exp)
        }
    }
}

// Serialized as the pair `[numerator, exponent]`.
impl Serialize for Dyadic {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.num, self.exp as i64].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Dyadic {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [num, exp] = <[i64; 2]>::deserialize(d)?;
        if !(0..=MAX_EXPONENT as i64).contains(&exp) {
            return Err(serde::de::Error::custom(format!("dyadic exponent {exp} out of range")));
        }
        let v = Dyadic::new(num, exp as u32);
        if v.num != num || v.exp as i64 != exp {
            return Err(serde::de::Error::custom("dyadic value not in lowest terms"));
        }
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn normalizes_to_lowest_terms() {
        let d = Dyadic::new(12, 4);
        assert_eq!((d.numerator(), d.exponent()), (3, 2));
        assert_eq!(Dyadic::new(0, 7), Dyadic::ZERO);
        assert_eq!(Dyadic::new(8, 2), Dyadic::from_int(2));
        assert_eq!(Dyadic::new(-6, 1), Dyadic::from_int(-3));
    }

    #[test]
    fn arithmetic_is_exact() {
        let a = Dyadic::new(3, 2);
        let b = Dyadic::new(5, 3);
        assert_eq!(a + b, Dyadic::new(11, 3));
        assert_eq!(a - b, Dyadic::new(1, 3));
        assert_eq!(a * b, Dyadic::new(15, 5));
        assert_eq!(Dyadic::ONE.half(), Dyadic::HALF);
        assert!(Dyadic::new(1, 3) < Dyadic::new(1, 2));
        assert_eq!(Dyadic::new(-3, 1).floor(), -2);
    }

    #[test]
    fn parse_forms() {
        assert_eq!(Dyadic::parse("3/8"), Some(Dyadic::new(3, 3)));
        assert_eq!(Dyadic::parse("1/2^5"), Some(Dyadic::pow2_neg(5)));
        assert_eq!(Dyadic::parse("7"), Some(Dyadic::from_int(7)));
        assert_eq!(Dyadic::parse("1/3"), None);
    }

    #[test]
    fn serde_pair() {
        let d = Dyadic::new(3, 4);
        let s = serde_json::to_string(&d).unwrap();
        assert_eq!(s, "[3,4]");
        assert_eq!(serde_json::from_str::<Dyadic>(&s).unwrap(), d);
        assert!(serde_json::from_str::<Dyadic>("[6,4]").is_err());
    }

    proptest! {
        #[test]
        fn agrees_with_rational_arithmetic(a in -1_000_000i64..1_000_000, ea in 0u32..24,
                                           b in -1_000_000i64..1_000_000, eb in 0u32..24) {
            let x = Dyadic::new(a, ea);
            let y = Dyadic::new(b, eb);
            prop_assert_eq!((x + y).to_ratio(), x.to_ratio() + y.to_ratio());
            prop_assert_eq!((x - y).to_ratio(), x.to_ratio() - y.to_ratio());
            prop_assert_eq!((x * y).to_ratio(), x.to_ratio() * y.to_ratio());
            prop_assert_eq!(x.cmp(&y), x.to_ratio().cmp(&y.to_ratio()));
        }
    }
}
