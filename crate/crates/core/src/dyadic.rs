//! Exact dyadic rationals `p / 2^q` and phase weights reduced modulo 2.
//!
//! A [`Weight`] `w` stands for the phase gate exponent in `exp(i * pi * w)`, so
//! only its value modulo 2 matters. [`Dyadic`] is the unreduced companion used
//! for exponents and for bookkeeping raw weight totals before reduction.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest accepted denominator exponent.
pub const MAX_EXPONENT: u32 = 48;

/// A dyadic rational `num / 2^exp` in lowest terms.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Dyadic {
    num: i64,
    exp: u32,
}

impl Dyadic {
    pub const ZERO: Dyadic = Dyadic { num: 0, exp: 0 };
    pub const ONE: Dyadic = Dyadic { num: 1, exp: 0 };

    /// `num / 2^exp`, brought into lowest terms.
    pub fn new(num: i64, exp: u32) -> Self {
        Self::normalized(num as i128, exp)
    }

    /// `num / 2^exp` for arguments already in lowest terms.
    pub const fn from_parts(num: i64, exp: u32) -> Self {
        Dyadic { num, exp }
    }

    pub fn from_int(n: i64) -> Self {
        Dyadic { num: n, exp: 0 }
    }

    /// `p / d`; fails unless `d` is a (signed) power of two.
    pub fn from_ratio(p: i64, d: i64) -> Result<Self> {
        if d == 0 {
            return Err(Error::NonDyadic(format!("{p}/{d}")));
        }
        let (p, d) = if d < 0 { (-p, -d) } else { (p, d) };
        if d.count_ones() != 1 {
            // p/d may still be dyadic when the odd part of d divides p.
            let odd = d >> d.trailing_zeros();
            if p % odd != 0 {
                return Err(Error::NonDyadic(format!("{p}/{d}")));
            }
            return Ok(Self::new(p / odd, d.trailing_zeros()));
        }
        Ok(Self::new(p, d.trailing_zeros()))
    }

    /// Exact conversion from a finite float with a dyadic expansion short
    /// enough to fit.
    pub fn from_f64(x: f64) -> Result<Self> {
        if !x.is_finite() {
            return Err(Error::NonDyadic(x.to_string()));
        }
        for exp in 0..=MAX_EXPONENT {
            let scaled = x * (1u64 << exp) as f64;
            if scaled.fract() == 0.0 && scaled.abs() < 9.0e15 {
                return Ok(Self::new(scaled as i64, exp));
            }
        }
        Err(Error::NonDyadic(x.to_string()))
    }

    fn normalized(mut num: i128, mut exp: u32) -> Self {
        if num == 0 {
            return Dyadic::ZERO;
        }
        while exp > 0 && num % 2 == 0 {
            num /= 2;
            exp -= 1;
        }
        let num = i64::try_from(num).expect("dyadic numerator overflow");
        Dyadic { num, exp }
    }

    pub fn numerator(self) -> i64 {
        self.num
    }

    /// Denominator exponent `q` in `p / 2^q`.
    pub fn exponent(self) -> u32 {
        self.exp
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }

    pub fn is_integer(self) -> bool {
        self.exp == 0
    }

    /// Multiply by `2^k` for any integer `k`.
    pub fn mul_pow2(self, k: i32) -> Self {
        if k >= 0 {
            let k = k as u32;
            if k <= self.exp {
                Dyadic { num: self.num, exp: self.exp - k }
            } else {
                let num = (self.num as i128) << (k - self.exp);
                Self::normalized(num, 0)
            }
        } else {
            Self::normalized(self.num as i128, self.exp + (-k) as u32)
        }
    }

    pub fn scale(self, k: i64) -> Self {
        Self::normalized(self.num as i128 * k as i128, self.exp)
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / (1u64 << self.exp) as f64
    }

    /// Reduce modulo 2 into a [`Weight`].
    pub fn weight(self) -> Weight {
        Weight::from(self)
    }
}

impl Add for Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: Dyadic) -> Dyadic {
        let exp = self.exp.max(rhs.exp);
        let a = (self.num as i128) << (exp - self.exp);
        let b = (rhs.num as i128) << (exp - rhs.exp);
        Dyadic::normalized(a + b, exp)
    }
}

impl AddAssign for Dyadic {
    fn add_assign(&mut self, rhs: Dyadic) {
        *self = *self + rhs;
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { num: -self.num, exp: self.exp }
    }
}

impl Sub for Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: Dyadic) -> Dyadic {
        self + (-rhs)
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let exp = self.exp.max(other.exp);
        let a = (self.num as i128) << (exp - self.exp);
        let b = (other.num as i128) << (exp - other.exp);
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<i64> for Dyadic {
    fn from(n: i64) -> Self {
        Dyadic::from_int(n)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, 1u64 << self.exp)
        }
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Dyadic {
    type Err = Error;

    /// Accepts `p`, `p/d` with `d` a power of two, and `p/2^q`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::ParseWeight(s.to_string());
        let t = s.trim();
        match t.split_once('/') {
            None => t.parse::<i64>().map(Dyadic::from_int).map_err(|_| bad()),
            Some((p, d)) => {
                let p: i64 = p.trim().parse().map_err(|_| bad())?;
                let d = d.trim();
                if let Some(q) = d.strip_prefix("2^") {
                    let q: u32 = q.parse().map_err(|_| bad())?;
                    if q > MAX_EXPONENT {
                        return Err(bad());
                    }
                    Ok(Dyadic::new(p, q))
                } else {
                    let d: i64 = d.parse().map_err(|_| bad())?;
                    let r = Dyadic::from_ratio(p, d)?;
                    if r.exp > MAX_EXPONENT {
                        return Err(bad());
                    }
                    Ok(r)
                }
            }
        }
    }
}

impl Serialize for Dyadic {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Dyadic {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A phase weight: a dyadic rational reduced into `[0, 2)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Weight(Dyadic);

impl Weight {
    pub const ZERO: Weight = Weight(Dyadic::ZERO);
    pub const ONE: Weight = Weight(Dyadic::ONE);

    pub fn new(num: i64, exp: u32) -> Self {
        Dyadic::new(num, exp).into()
    }

    pub fn value(self) -> Dyadic {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0.is_zero()
    }

    pub fn to_f64(self) -> f64 {
        self.0.to_f64()
    }
}

impl From<Dyadic> for Weight {
    fn from(d: Dyadic) -> Self {
        // modulus 2 = 2^(exp+1) / 2^exp
        let modulus = 1i128 << (d.exp + 1);
        let num = (d.num as i128).rem_euclid(modulus);
        Weight(Dyadic::normalized(num, d.exp))
    }
}

impl Add for Weight {
    type Output = Weight;
    fn add(self, rhs: Weight) -> Weight {
        (self.0 + rhs.0).into()
    }
}

impl AddAssign for Weight {
    fn add_assign(&mut self, rhs: Weight) {
        *self = *self + rhs;
    }
}

impl Neg for Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        (-self.0).into()
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Weight({})", self.0)
    }
}

impl FromStr for Weight {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        s.parse::<Dyadic>().map(Weight::from)
    }
}

impl Serialize for Weight {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Weight {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Dyadic::deserialize(d).map(Weight::from)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reduces_modulo_two() {
        assert_eq!(Weight::from(Dyadic::from_int(2)), Weight::ZERO);
        assert_eq!(Weight::from(Dyadic::from_int(-5)), Weight::ONE);
        assert_eq!(Weight::from(Dyadic::from_int(6)), Weight::ZERO);
        assert_eq!(Weight::new(-1, 2), Weight::new(7, 2));
        assert_eq!(Weight::new(-2, 2).to_string(), "3/2");
    }

    #[test]
    fn lowest_terms() {
        let d = Dyadic::new(12, 4);
        assert_eq!((d.numerator(), d.exponent()), (3, 2));
        assert_eq!(Dyadic::new(0, 7), Dyadic::ZERO);
    }

    #[test]
    fn parse_forms() {
        assert_eq!("3/4".parse::<Dyadic>().unwrap(), Dyadic::new(3, 2));
        assert_eq!("3/2^2".parse::<Dyadic>().unwrap(), Dyadic::new(3, 2));
        assert_eq!("-15/4".parse::<Dyadic>().unwrap(), Dyadic::new(-15, 2));
        assert_eq!("6/12".parse::<Dyadic>().unwrap(), Dyadic::new(1, 1));
        assert!(matches!("1/3".parse::<Dyadic>(), Err(Error::NonDyadic(_))));
        assert!("x".parse::<Dyadic>().is_err());
        assert_eq!("5/2".parse::<Weight>().unwrap(), Weight::new(1, 1));
    }

    #[test]
    fn shifts() {
        let q = Dyadic::new(1, 2);
        assert_eq!(q.mul_pow2(1), Dyadic::new(1, 1));
        assert_eq!(q.mul_pow2(3), Dyadic::from_int(2));
        assert_eq!(q.mul_pow2(-1), Dyadic::new(1, 3));
        assert_eq!(q.scale(-2), Dyadic::new(-1, 1));
    }

    #[test]
    fn float_round_trip() {
        assert_eq!(Dyadic::from_f64(0.75).unwrap(), Dyadic::new(3, 2));
        assert!(Dyadic::from_f64(0.1).is_err());
        assert!(Dyadic::from_f64(f64::NAN).is_err());
    }

    fn dyadic() -> impl Strategy<Value = Dyadic> {
        (-1000i64..1000, 0u32..8).prop_map(|(n, e)| Dyadic::new(n, e))
    }

    proptest! {
        #[test]
        fn weight_in_range_and_consistent(d in dyadic()) {
            let w = Weight::from(d);
            prop_assert!(w.value() >= Dyadic::ZERO && w.value() < Dyadic::from_int(2));
            // difference is an even integer
            let diff = d - w.value();
            prop_assert!(diff.is_integer() && diff.numerator() % 2 == 0);
        }

        #[test]
        fn text_round_trip(d in dyadic()) {
            prop_assert_eq!(d.to_string().parse::<Dyadic>().unwrap(), d);
        }

        #[test]
        fn addition_matches_float(a in dyadic(), b in dyadic()) {
            prop_assert_eq!((a + b).to_f64(), a.to_f64() + b.to_f64());
            prop_assert_eq!(Weight::from(a) + Weight::from(b), Weight::from(a + b));
        }
    }
}
