//! Coefficient rings.
//!
//! Polynomials carry a small ring context next to their coefficient vector,
//! so the same dense kernels run over `Z`, `Q` and `Z/mZ`. The integer and
//! rational contexts are zero-sized.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

pub trait Ring: Clone + fmt::Debug + PartialEq + Send + Sync {
    type Elem: Clone + fmt::Debug + PartialEq + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn from_bigint(&self, v: &BigInt) -> Self::Elem;
    fn is_zero(&self, x: &Self::Elem) -> bool;
    fn add_assign(&self, x: &mut Self::Elem, y: &Self::Elem);
    fn sub_assign(&self, x: &mut Self::Elem, y: &Self::Elem);
    fn neg(&self, x: &Self::Elem) -> Self::Elem;
    fn mul(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;

    fn mul_add_assign(&self, acc: &mut Self::Elem, x: &Self::Elem, y: &Self::Elem) {
        let p = self.mul(x, y);
        self.add_assign(acc, &p);
    }

    fn from_u64(&self, v: u64) -> Self::Elem {
        match i64::try_from(v) {
            Ok(v) => self.from_i64(v),
            Err(_) => self.from_bigint(&BigInt::from(v)),
        }
    }
}

/// Rings whose elements embed into `Q`.
pub trait RationalRing: Ring {
    fn to_rational(&self, x: &Self::Elem) -> BigRational;
}

/// Arbitrary-precision integers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Integers;

/// Exact rationals in lowest terms.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Rationals;

/// Residues modulo a fixed positive modulus, stored as `u64` in `[0, m)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Zmod {
    modulus: u64,
}

impl Zmod {
    pub fn new(modulus: u64) -> Self {
        assert!(modulus >= 1, "modulus must be positive");
        Zmod { modulus }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    #[inline]
    fn reduce_i128(&self, v: i128) -> u64 {
        v.rem_euclid(self.modulus as i128) as u64
    }
}

impl Ring for Integers {
    type Elem = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn from_i64(&self, v: i64) -> BigInt {
        BigInt::from(v)
    }
    fn from_bigint(&self, v: &BigInt) -> BigInt {
        v.clone()
    }
    fn is_zero(&self, x: &BigInt) -> bool {
        x.is_zero()
    }
    fn add_assign(&self, x: &mut BigInt, y: &BigInt) {
        *x += y;
    }
    fn sub_assign(&self, x: &mut BigInt, y: &BigInt) {
        *x -= y;
    }
    fn neg(&self, x: &BigInt) -> BigInt {
        -x
    }
    fn mul(&self, x: &BigInt, y: &BigInt) -> BigInt {
        x * y
    }
    fn mul_add_assign(&self, acc: &mut BigInt, x: &BigInt, y: &BigInt) {
        if !x.is_zero() && !y.is_zero() {
            *acc += x * y;
        }
    }
}

impl RationalRing for Integers {
    fn to_rational(&self, x: &BigInt) -> BigRational {
        BigRational::from_integer(x.clone())
    }
}

impl Ring for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_bigint(&self, v: &BigInt) -> BigRational {
        BigRational::from_integer(v.clone())
    }
    fn is_zero(&self, x: &BigRational) -> bool {
        x.is_zero()
    }
    fn add_assign(&self, x: &mut BigRational, y: &BigRational) {
        *x += y;
    }
    fn sub_assign(&self, x: &mut BigRational, y: &BigRational) {
        *x -= y;
    }
    fn neg(&self, x: &BigRational) -> BigRational {
        -x
    }
    fn mul(&self, x: &BigRational, y: &BigRational) -> BigRational {
        x * y
    }
    fn mul_add_assign(&self, acc: &mut BigRational, x: &BigRational, y: &BigRational) {
        if !x.is_zero() && !y.is_zero() {
            *acc += x * y;
        }
    }
}

impl RationalRing for Rationals {
    fn to_rational(&self, x: &BigRational) -> BigRational {
        x.clone()
    }
}

impl Ring for Zmod {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.modulus
    }
    fn from_i64(&self, v: i64) -> u64 {
        self.reduce_i128(v as i128)
    }
    fn from_bigint(&self, v: &BigInt) -> u64 {
        let r = v.mod_floor(&BigInt::from(self.modulus));
        r.to_u64().expect("residue fits in u64")
    }
    fn is_zero(&self, x: &u64) -> bool {
        *x == 0
    }
    #[inline]
    fn add_assign(&self, x: &mut u64, y: &u64) {
        let (s, carry) = x.overflowing_add(*y);
        *x = if carry || s >= self.modulus { s.wrapping_sub(self.modulus) } else { s };
    }
    #[inline]
    fn sub_assign(&self, x: &mut u64, y: &u64) {
        *x = if *x >= *y { *x - *y } else { x.wrapping_sub(*y).wrapping_add(self.modulus) };
    }
    fn neg(&self, x: &u64) -> u64 {
        if *x == 0 {
            0
        } else {
            self.modulus - *x
        }
    }
    #[inline]
    fn mul(&self, x: &u64, y: &u64) -> u64 {
        ((*x as u128 * *y as u128) % self.modulus as u128) as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zmod_arithmetic_wraps() {
        let r = Zmod::new(7);
        let mut x = r.from_i64(-1);
        assert_eq!(x, 6);
        r.add_assign(&mut x, &3);
        assert_eq!(x, 2);
        r.sub_assign(&mut x, &5);
        assert_eq!(x, 4);
        assert_eq!(r.mul(&4, &5), 6);
        assert_eq!(r.neg(&4), 3);
        assert_eq!(r.from_bigint(&BigInt::from(-15)), 6);
    }

    #[test]
    fn modulus_one_collapses_everything() {
        let r = Zmod::new(1);
        assert_eq!(r.one(), 0);
        assert!(r.is_zero(&r.from_i64(12345)));
    }
}
