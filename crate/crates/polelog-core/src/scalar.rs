//! Scalar fields for exact linear algebra: arbitrary-precision rationals and
//! word-size prime fields.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// Field operations needed by the elimination kernels. Implemented by
/// [`ExactScalar`] and the prime fields [`Gfp`].
pub trait Scalar: Clone + PartialEq + Eq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse; panics on zero.
    fn inv(&self) -> Self;
    fn from_i64(v: i64) -> Self;
    /// Embed an exact rational. Panics if the denominator vanishes in the field.
    fn from_exact(v: &ExactScalar) -> Self;
}

/// Arbitrary-precision rational number, always in lowest terms with positive
/// denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ExactScalar(BigRational);

impl ExactScalar {
    pub fn new(num: BigInt, den: BigInt) -> Self {
        ExactScalar(BigRational::new(num, den))
    }

    pub fn from_int(v: i64) -> Self {
        ExactScalar(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        ExactScalar(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        ExactScalar(self.0.abs())
    }

    pub fn recip(&self) -> Self {
        ExactScalar(self.0.recip())
    }

    /// Floor as a BigInt.
    pub fn floor_int(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn to_i64(&self) -> Option<i64> {
        if !self.is_integer() {
            return None;
        }
        i64::try_from(self.numer().clone()).ok()
    }

    pub fn inner(&self) -> &BigRational {
        &self.0
    }
}

impl fmt::Debug for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Parses "p", "-p", or "p/q".
impl FromStr for ExactScalar {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (s, "1"),
        };
        let num = BigInt::from_str(num).map_err(|e| format!("bad numerator {num:?}: {e}"))?;
        let den = BigInt::from_str(den).map_err(|e| format!("bad denominator {den:?}: {e}"))?;
        if den.is_zero() {
            return Err("zero denominator".into());
        }
        Ok(ExactScalar(BigRational::new(num, den)))
    }
}

impl Serialize for ExactScalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ExactScalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(v) => Ok(ExactScalar::from_int(v)),
            Raw::Str(s) => s.parse().map_err(D::Error::custom),
        }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, o: ExactScalar) -> ExactScalar {
                ExactScalar((self.0).$method(o.0))
            }
        }
        impl $trait<&ExactScalar> for &ExactScalar {
            type Output = ExactScalar;
            fn $method(self, o: &ExactScalar) -> ExactScalar {
                ExactScalar((&self.0).$method(&o.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar(-self.0)
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar(-self.0.clone())
    }
}

impl AddAssign<&ExactScalar> for ExactScalar {
    fn add_assign(&mut self, o: &ExactScalar) {
        self.0 += &o.0;
    }
}

impl SubAssign<&ExactScalar> for ExactScalar {
    fn sub_assign(&mut self, o: &ExactScalar) {
        self.0 -= &o.0;
    }
}

impl MulAssign<&ExactScalar> for ExactScalar {
    fn mul_assign(&mut self, o: &ExactScalar) {
        self.0 *= &o.0;
    }
}

impl Scalar for ExactScalar {
    fn zero() -> Self {
        ExactScalar(BigRational::zero())
    }
    fn one() -> Self {
        ExactScalar(BigRational::one())
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        ExactScalar(&self.0 + &o.0)
    }
    fn sub(&self, o: &Self) -> Self {
        ExactScalar(&self.0 - &o.0)
    }
    fn mul(&self, o: &Self) -> Self {
        ExactScalar(&self.0 * &o.0)
    }
    fn neg(&self) -> Self {
        ExactScalar(-self.0.clone())
    }
    fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        ExactScalar(self.0.recip())
    }
    fn from_i64(v: i64) -> Self {
        ExactScalar::from_int(v)
    }
    fn from_exact(v: &ExactScalar) -> Self {
        v.clone()
    }
}

/// Fixed pool of 62-bit primes for the modular rank mode. The pool is fixed so
/// that every run (and every thread schedule) sees the same primes.
pub const PRIME_POOL: [u64; 8] = [
    4611686018427387847,
    4611686018427387817,
    4611686018427387787,
    4611686018427387761,
    4611686018427387739,
    4611686018427387733,
    4611686018427387709,
    4611686018427387701,
];

/// Prime field with const modulus, so the elimination kernels monomorphize.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Gfp<const P: u64>(pub u64);

impl<const P: u64> Gfp<P> {
    pub fn new(v: u64) -> Self {
        Gfp(v % P)
    }

    fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Gfp::<P>(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_(base);
            }
            base = base.mul_(base);
            e >>= 1;
        }
        acc
    }

    fn mul_(self, o: Self) -> Self {
        Gfp(((self.0 as u128 * o.0 as u128) % P as u128) as u64)
    }
}

impl<const P: u64> fmt::Display for Gfp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn bigint_mod_u64(v: &BigInt, p: u64) -> u64 {
    let m = num::BigInt::from(p);
    let r = ((v % &m) + &m) % &m;
    u64::try_from(r).expect("residue fits u64")
}

impl<const P: u64> Scalar for Gfp<P> {
    fn zero() -> Self {
        Gfp(0)
    }
    fn one() -> Self {
        Gfp(1)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn add(&self, o: &Self) -> Self {
        let s = self.0 + o.0;
        Gfp(if s >= P { s - P } else { s })
    }
    fn sub(&self, o: &Self) -> Self {
        Gfp(if self.0 >= o.0 {
            self.0 - o.0
        } else {
            self.0 + P - o.0
        })
    }
    fn mul(&self, o: &Self) -> Self {
        self.mul_(*o)
    }
    fn neg(&self) -> Self {
        Gfp(if self.0 == 0 { 0 } else { P - self.0 })
    }
    fn inv(&self) -> Self {
        assert!(self.0 != 0, "inverse of zero");
        self.pow(P - 2)
    }
    fn from_i64(v: i64) -> Self {
        let r = v.rem_euclid(P as i64);
        Gfp(r as u64)
    }
    fn from_exact(v: &ExactScalar) -> Self {
        let num = Gfp::<P>(bigint_mod_u64(v.numer(), P));
        let den = Gfp::<P>(bigint_mod_u64(v.denom(), P));
        assert!(den.0 != 0, "denominator vanishes mod {P}");
        num.mul_(den.inv())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_lowest_terms() {
        let x = ExactScalar::ratio(6, -4);
        assert_eq!(x.numer(), &BigInt::from(-3));
        assert_eq!(x.denom(), &BigInt::from(2));
        assert_eq!(x.to_string(), "-3/2");
    }

    #[test]
    fn rational_parse_roundtrip() {
        for s in ["0", "5", "-7/3", "22/7"] {
            let v: ExactScalar = s.parse().unwrap();
            assert_eq!(v.to_string(), s);
        }
        assert!("1/0".parse::<ExactScalar>().is_err());
    }

    #[test]
    fn gfp_field_axioms() {
        const P: u64 = PRIME_POOL[0];
        let a = Gfp::<P>::from_i64(-17);
        let b = Gfp::<P>::new(123456789);
        assert_eq!(a.mul(&a.inv()), Gfp::<P>::one());
        assert_eq!(a.add(&a.neg()), Gfp::<P>::zero());
        assert_eq!(a.mul(&b), b.mul(&a));
        let half = Gfp::<P>::from_exact(&ExactScalar::ratio(1, 2));
        assert_eq!(half.add(&half), Gfp::<P>::one());
    }
}
