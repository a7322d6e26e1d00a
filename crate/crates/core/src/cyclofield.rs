//! Exact arithmetic in the cyclotomic fields `Q(zeta_k)`.
//!
//! Elements are kept in the power basis `1, zeta, ..., zeta^(phi(k)-1)`,
//! always reduced modulo the monic `Phi_k`, so equality is equality of
//! representatives. No inversion is provided; every division we need is by
//! a rational scalar.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactpoly::{cyclotomic, Poly, RatPoly, RationalRing, Rationals};

fn phi_rat(k: u64) -> RatPoly {
    static CACHE: OnceLock<RwLock<HashMap<u64, RatPoly>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(p) = cache.read().unwrap().get(&k) {
        return p.clone();
    }
    let p = cyclotomic(k).to_rat();
    cache.write().unwrap().insert(k, p.clone());
    p
}

/// An element of `Q(zeta_k)`, `zeta_k = exp(2 pi i / k)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "RawCyclo")]
pub struct CycloNum {
    k: u64,
    rep: RatPoly,
}

#[derive(Deserialize)]
struct RawCyclo {
    k: u64,
    rep: RatPoly,
}

impl From<RawCyclo> for CycloNum {
    fn from(raw: RawCyclo) -> Self {
        reduce_mod_phi(&raw.rep, raw.k.max(1))
    }
}

impl CycloNum {
    pub fn zero(k: u64) -> Self {
        assert!(k >= 1, "conductor must be positive");
        CycloNum {
            k,
            rep: RatPoly::zero(Rationals),
        }
    }

    pub fn one(k: u64) -> Self {
        Self::from_rational(k, BigRational::one())
    }

    pub fn from_rational(k: u64, r: BigRational) -> Self {
        assert!(k >= 1, "conductor must be positive");
        CycloNum {
            k,
            rep: RatPoly::from_rationals(vec![r]),
        }
    }

    pub fn from_integer(k: u64, n: i64) -> Self {
        Self::from_rational(k, BigRational::from_integer(BigInt::from(n)))
    }

    /// `zeta_k^e` for any integer exponent.
    pub fn zeta_pow(k: u64, e: i64) -> Self {
        let e = e.rem_euclid(k as i64) as usize;
        reduce_mod_phi(&RatPoly::monomial(Rationals, BigRational::one(), e), k)
    }

    pub fn conductor(&self) -> u64 {
        self.k
    }

    /// Coordinates in the power basis.
    pub fn rep(&self) -> &RatPoly {
        &self.rep
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }

    /// The value as a rational, when it lies in `Q`.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.rep.degree() {
            None => Some(BigRational::zero()),
            Some(0) => Some(self.rep.coeff(0)),
            Some(_) => None,
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        CycloNum {
            k: self.k,
            rep: self.rep.scale(c),
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.k != other.k {
            return Err(Error::ConductorMismatch {
                left: self.k,
                right: other.k,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(CycloNum {
            k: self.k,
            rep: &self.rep + &other.rep,
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(CycloNum {
            k: self.k,
            rep: &self.rep - &other.rep,
        })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.k));
        }
        Ok(reduce_mod_phi(&(&self.rep * &other.rep), self.k))
    }

    pub fn add_assign_ref(&mut self, other: &Self) {
        assert_eq!(self.k, other.k, "conductor mismatch");
        self.rep.add_assign_ref(&other.rep);
    }

    /// Re-embeds into `Q(zeta_m)` for a multiple `m` of the conductor.
    pub fn lift(&self, m: u64) -> Result<Self> {
        if m % self.k != 0 {
            return Err(Error::ConductorMismatch {
                left: self.k,
                right: m,
            });
        }
        let f = (m / self.k) as usize;
        Ok(reduce_mod_phi(&self.rep.spread(f), m))
    }

    /// Complex embedding at `zeta_k = exp(2 pi i / k)` in double precision.
    pub fn to_complex_f64(&self) -> (f64, f64) {
        use num_traits::ToPrimitive;
        let (mut re, mut im) = (0.0, 0.0);
        for (e, c) in self.rep.coeffs().iter().enumerate() {
            let t = 2.0 * std::f64::consts::PI * e as f64 / self.k as f64;
            let c = c.to_f64().unwrap_or(f64::NAN);
            re += c * t.cos();
            im += c * t.sin();
        }
        (re, im)
    }
}

impl fmt::Display for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rep.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.rep.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match e {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*z{}", self.k)?,
                _ => write!(f, "({c})*z{}^{e}", self.k)?,
            }
        }
        Ok(())
    }
}

impl Add for &CycloNum {
    type Output = CycloNum;
    fn add(self, rhs: &CycloNum) -> CycloNum {
        self.try_add(rhs).expect("conductor mismatch")
    }
}

impl Sub for &CycloNum {
    type Output = CycloNum;
    fn sub(self, rhs: &CycloNum) -> CycloNum {
        self.try_sub(rhs).expect("conductor mismatch")
    }
}

impl Mul for &CycloNum {
    type Output = CycloNum;
    fn mul(self, rhs: &CycloNum) -> CycloNum {
        self.try_mul(rhs).expect("conductor mismatch")
    }
}

impl Neg for &CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        CycloNum {
            k: self.k,
            rep: -&self.rep,
        }
    }
}

/// Canonical representative of `p(zeta_k)`, i.e. `p mod Phi_k`.
pub fn reduce_mod_phi(p: &RatPoly, k: u64) -> CycloNum {
    assert!(k >= 1, "conductor must be positive");
    CycloNum {
        k,
        rep: p.rem_monic(&phi_rat(k)),
    }
}

/// Field product; fails when the operands live in different fields.
pub fn cyclo_mul(x: &CycloNum, y: &CycloNum) -> Result<CycloNum> {
    x.try_mul(y)
}

/// `p(zeta_k^j)`: exponents are folded modulo `k` first, then the bucket
/// polynomial is reduced modulo `Phi_k`.
pub fn eval_at_root<R: RationalRing>(p: &Poly<R>, k: u64, j: u64) -> CycloNum {
    assert!(k >= 1, "conductor must be positive");
    let ring = p.ring();
    let mut buckets = vec![ring.zero(); k as usize];
    let j = j % k;
    for (e, c) in p.coeffs().iter().enumerate() {
        if ring.is_zero(c) {
            continue;
        }
        let idx = ((e as u128 * j as u128) % k as u128) as usize;
        ring.add_assign(&mut buckets[idx], c);
    }
    let rat: Vec<BigRational> = buckets.iter().map(|c| ring.to_rational(c)).collect();
    reduce_mod_phi(&RatPoly::from_rationals(rat), k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::{pochhammer, IntPoly, Step};

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn rp(c: &[i64]) -> RatPoly {
        IntPoly::from_i64s(c).to_rat()
    }

    #[test]
    fn reductions() {
        assert_eq!(reduce_mod_phi(&rp(&[0, 0, 0, 0, 1]), 4), CycloNum::one(4));
        assert!(reduce_mod_phi(&(&rp(&[1, 1]) * &rp(&[1, 1])), 2).is_zero());
        assert_eq!(
            reduce_mod_phi(&rp(&[0, 0, 0, 1]), 6),
            CycloNum::from_integer(6, -1)
        );
    }

    #[test]
    fn reduction_is_idempotent() {
        for k in 1..=15 {
            let x = reduce_mod_phi(&rp(&[3, -1, 4, 1, -5, 9, 2, 6, -5, 3, 5, 8, 9, 7, 9, 3, 2, 3, 8, 4]), k);
            assert_eq!(reduce_mod_phi(x.rep(), k), x);
        }
    }

    #[test]
    fn products() {
        let z4 = CycloNum::zeta_pow(4, 1);
        assert_eq!(&z4 * &z4, CycloNum::from_integer(4, -1));
        let z3 = CycloNum::zeta_pow(3, 1);
        let a = &CycloNum::one(3) + &z3;
        let b = &CycloNum::one(3) + &(&z3 * &z3);
        assert_eq!(&a * &b, CycloNum::one(3));
        assert!((&z3 * &CycloNum::zero(3)).is_zero());
        assert!(matches!(
            cyclo_mul(&z3, &z4),
            Err(Error::ConductorMismatch { left: 3, right: 4 })
        ));
    }

    #[test]
    fn root_evaluation() {
        assert!(eval_at_root(&pochhammer(3, Step::One), 2, 1).is_zero());
        assert!(eval_at_root(&IntPoly::from_i64s(&[1, 1, 1]), 3, 1).is_zero());
        assert_eq!(
            eval_at_root(&IntPoly::from_i64s(&[2, 0, 5]), 1, 0),
            CycloNum::from_integer(1, 7)
        );
        // j = 0 is q = 1 inside Q(zeta_6)
        assert_eq!(
            eval_at_root(&IntPoly::from_i64s(&[2, 0, 5]), 6, 0),
            CycloNum::from_integer(6, 7)
        );
    }

    #[test]
    fn phi_vanishes_at_primitive_roots() {
        for k in 1..=20u64 {
            let phi = cyclotomic(k);
            for j in 0..k {
                if num_integer::gcd(j, k) == 1 {
                    assert!(eval_at_root(&phi, k, j).is_zero(), "k={k} j={j}");
                }
            }
        }
    }

    #[test]
    fn lift_preserves_values() {
        let x = &CycloNum::zeta_pow(3, 1) + &CycloNum::from_integer(3, 2);
        let y = x.lift(6).unwrap();
        // zeta_3 = zeta_6^2
        assert_eq!(y, &CycloNum::zeta_pow(6, 2) + &CycloNum::from_integer(6, 2));
        assert!(x.lift(4).is_err());
    }

    #[test]
    fn scale_and_rational_view() {
        let x = CycloNum::from_integer(5, 3).scale(&(r(1) / r(6)));
        assert_eq!(x.as_rational(), Some(r(1) / r(2)));
        assert_eq!(CycloNum::zeta_pow(5, 1).as_rational(), None);
    }

    #[test]
    fn json_shape() {
        let x = CycloNum::from_integer(6, -1);
        assert_eq!(
            serde_json::to_string(&x).unwrap(),
            r#"{"k":6,"rep":{"coeffs":["-1"]}}"#
        );
        // unreduced input is brought back to the canonical representative
        let y: CycloNum = serde_json::from_str(r#"{"k":6,"rep":{"coeffs":["0","0","0","1"]}}"#).unwrap();
        assert_eq!(y, x);
    }

    proptest::proptest! {
        #[test]
        fn evaluation_is_a_ring_map(
            a in proptest::collection::vec(-20i64..=20, 0..12),
            b in proptest::collection::vec(-20i64..=20, 0..12),
            k in 1u64..=16,
            j in 0u64..16,
        ) {
            let j = j % k;
            let (pa, pb) = (IntPoly::from_i64s(&a), IntPoly::from_i64s(&b));
            let (ea, eb) = (eval_at_root(&pa, k, j), eval_at_root(&pb, k, j));
            proptest::prop_assert_eq!(eval_at_root(&(&pa * &pb), k, j), &ea * &eb);
            proptest::prop_assert_eq!(eval_at_root(&(&pa + &pb), k, j), &ea + &eb);
        }
    }
}
