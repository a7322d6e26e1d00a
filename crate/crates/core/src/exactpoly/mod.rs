//! Exact dense univariate polynomials in `q`.
//!
//! [`Poly`] stores coefficients densely (index = exponent) together with a
//! [`Ring`] context. [`IntPoly`] and [`RatPoly`] are the public carriers for
//! partial sums, dissection parts, Pochhammer symbols and Bernoulli
//! polynomials; [`ModPoly`] runs the same kernels modulo an integer.
//!
//! Invariant: the highest stored coefficient is nonzero, and the zero
//! polynomial has no coefficients at all.

mod ring;
mod serde_impl;
mod special;

use std::ops::{Add, Mul, Neg, Sub};
use std::sync::atomic::{AtomicUsize, Ordering};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub use ring::{Integers, RationalRing, Rationals, Ring, Zmod};
pub use serde_impl::parse_rational;
pub use special::{cyclotomic, pochhammer, pochhammer_in, qbinomial, Step};

pub type IntPoly = Poly<Integers>;
pub type RatPoly = Poly<Rationals>;
pub type ModPoly = Poly<Zmod>;

/// Degree threshold above which multiplication switches to Karatsuba.
pub const DEFAULT_KARATSUBA_THRESHOLD: usize = 64;

static KARATSUBA_THRESHOLD: AtomicUsize = AtomicUsize::new(DEFAULT_KARATSUBA_THRESHOLD);

/// Sets the process-wide Karatsuba threshold. Products are identical for
/// every setting; only speed changes.
pub fn set_karatsuba_threshold(threshold: usize) {
    KARATSUBA_THRESHOLD.store(threshold.max(1), Ordering::Relaxed);
}

pub fn karatsuba_threshold() -> usize {
    KARATSUBA_THRESHOLD.load(Ordering::Relaxed)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Poly<R: Ring> {
    ring: R,
    coeffs: Vec<R::Elem>,
}

impl<R: Ring> Poly<R> {
    pub fn from_coeffs(ring: R, coeffs: Vec<R::Elem>) -> Self {
        let mut p = Poly { ring, coeffs };
        p.trim();
        p
    }

    pub fn zero(ring: R) -> Self {
        Poly {
            ring,
            coeffs: Vec::new(),
        }
    }

    pub fn one(ring: R) -> Self {
        let c = ring.one();
        Self::from_coeffs(ring, vec![c])
    }

    /// `c * q^e`.
    pub fn monomial(ring: R, c: R::Elem, e: usize) -> Self {
        if ring.is_zero(&c) {
            return Self::zero(ring);
        }
        let mut coeffs = vec![ring.zero(); e + 1];
        coeffs[e] = c;
        Poly { ring, coeffs }
    }

    /// `1 - q^e`.
    pub fn one_minus_q_pow(ring: R, e: usize) -> Self {
        let mut coeffs = vec![ring.zero(); e + 1];
        coeffs[0] = ring.one();
        let m = ring.neg(&ring.one());
        ring.add_assign(&mut coeffs[e], &m);
        Self::from_coeffs(ring, coeffs)
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn coeffs(&self) -> &[R::Elem] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<R::Elem> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Number of stored coefficients (`degree + 1`, or 0).
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !self.ring.is_zero(c))
    }

    pub fn coeff(&self, e: usize) -> R::Elem {
        self.coeffs
            .get(e)
            .cloned()
            .unwrap_or_else(|| self.ring.zero())
    }

    pub fn leading(&self) -> Option<&R::Elem> {
        self.coeffs.last()
    }

    fn trim(&mut self) {
        while let Some(c) = self.coeffs.last() {
            if self.ring.is_zero(c) {
                self.coeffs.pop();
            } else {
                break;
            }
        }
    }

    pub fn add_assign_ref(&mut self, other: &Self) {
        if self.coeffs.len() < other.coeffs.len() {
            self.coeffs.resize(other.coeffs.len(), self.ring.zero());
        }
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            self.ring.add_assign(a, b);
        }
        self.trim();
    }

    pub fn sub_assign_ref(&mut self, other: &Self) {
        if self.coeffs.len() < other.coeffs.len() {
            self.coeffs.resize(other.coeffs.len(), self.ring.zero());
        }
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            self.ring.sub_assign(a, b);
        }
        self.trim();
    }

    /// `self += c * q^shift * other`, without materialising the product.
    pub fn add_scaled_shifted(&mut self, other: &Self, c: &R::Elem, shift: usize) {
        if other.is_zero() || self.ring.is_zero(c) {
            return;
        }
        let need = other.coeffs.len() + shift;
        if self.coeffs.len() < need {
            self.coeffs.resize(need, self.ring.zero());
        }
        for (i, b) in other.coeffs.iter().enumerate() {
            self.ring.mul_add_assign(&mut self.coeffs[i + shift], c, b);
        }
        self.trim();
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        let coeffs = self.coeffs.iter().map(|x| self.ring.mul(x, c)).collect();
        Self::from_coeffs(self.ring.clone(), coeffs)
    }

    /// Multiplication by `q^e`.
    pub fn shift(&self, e: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![self.ring.zero(); e];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly {
            ring: self.ring.clone(),
            coeffs,
        }
    }

    /// Substitution `q -> q^k`.
    pub fn spread(&self, k: usize) -> Self {
        assert!(k >= 1, "spread factor must be positive");
        if self.is_zero() || k == 1 {
            return self.clone();
        }
        let mut coeffs = vec![self.ring.zero(); (self.coeffs.len() - 1) * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * k] = c.clone();
        }
        Poly {
            ring: self.ring.clone(),
            coeffs,
        }
    }

    /// Reduction modulo `q^(cap+1)`.
    pub fn truncate(&self, cap: usize) -> Self {
        let mut coeffs: Vec<_> = self.coeffs.iter().take(cap + 1).cloned().collect();
        coeffs.shrink_to_fit();
        Self::from_coeffs(self.ring.clone(), coeffs)
    }

    /// In-place multiplication by `1 - q^e` (e >= 1).
    pub fn mul_one_minus_q_pow_assign(&mut self, e: usize) {
        assert!(e >= 1);
        if self.is_zero() {
            return;
        }
        let old = self.coeffs.len();
        self.coeffs.resize(old + e, self.ring.zero());
        for i in (e..old + e).rev() {
            let (lo, hi) = self.coeffs.split_at_mut(i);
            self.ring.sub_assign(&mut hi[0], &lo[i - e]);
        }
        self.trim();
    }

    pub fn mul_with_threshold(&self, other: &Self, threshold: usize) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.ring.clone());
        }
        let coeffs = mul_dense(&self.ring, &self.coeffs, &other.coeffs, threshold.max(1));
        Self::from_coeffs(self.ring.clone(), coeffs)
    }

    /// Product reduced modulo `q^(cap+1)`.
    pub fn mul_truncated(&self, other: &Self, cap: usize) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.ring.clone());
        }
        let la = self.coeffs.len().min(cap + 1);
        let lb = other.coeffs.len().min(cap + 1);
        let len = (la + lb - 1).min(cap + 1);
        let mut out = vec![self.ring.zero(); len];
        for (i, a) in self.coeffs[..la].iter().enumerate() {
            if self.ring.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs[..lb.min(len - i)].iter().enumerate() {
                self.ring.mul_add_assign(&mut out[i + j], a, b);
            }
        }
        Self::from_coeffs(self.ring.clone(), out)
    }

    /// Applies the Euler operator `q d/dq` `times` times: the coefficient at
    /// exponent `e` is multiplied by `e^times`.
    pub fn theta_deriv(&self, times: u32) -> Self {
        if times == 0 {
            return self.clone();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(e, c)| {
                let w = self.ring.from_bigint(&BigInt::from(e).pow(times));
                self.ring.mul(c, &w)
            })
            .collect();
        Self::from_coeffs(self.ring.clone(), coeffs)
    }

    /// The formal derivative `d/dq`.
    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero(self.ring.clone());
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(e, c)| self.ring.mul(c, &self.ring.from_u64(e as u64)))
            .collect();
        Self::from_coeffs(self.ring.clone(), coeffs)
    }

    /// `p(1 - q) mod q^(cap+1)`, by Horner's rule in the truncated ring.
    pub fn subst_one_minus_q(&self, cap: usize) -> Self {
        let mut acc: Vec<R::Elem> = Vec::with_capacity(cap + 1);
        for c in self.coeffs.iter().rev() {
            // acc <- acc * (1 - q) + c
            if acc.len() < cap + 1 {
                acc.push(self.ring.zero());
            }
            for i in (1..acc.len()).rev() {
                let (lo, hi) = acc.split_at_mut(i);
                self.ring.sub_assign(&mut hi[0], &lo[i - 1]);
            }
            self.ring.add_assign(&mut acc[0], c);
        }
        Self::from_coeffs(self.ring.clone(), acc)
    }

    /// Remainder modulo a monic divisor given over the same ring.
    pub fn rem_monic(&self, m: &Self) -> Self {
        let dm = m.degree().expect("divisor must be nonzero");
        debug_assert!(m.leading().map(|c| *c == m.ring.one()).unwrap_or(false));
        if dm == 0 {
            return Self::zero(self.ring.clone());
        }
        let mut r = self.coeffs.clone();
        for top in (dm..r.len()).rev() {
            if self.ring.is_zero(&r[top]) {
                continue;
            }
            let c = r[top].clone();
            let base = top - dm;
            for (t, mc) in m.coeffs[..dm].iter().enumerate() {
                let p = self.ring.mul(&c, mc);
                self.ring.sub_assign(&mut r[base + t], &p);
            }
            r[top] = self.ring.zero();
        }
        r.truncate(dm);
        Self::from_coeffs(self.ring.clone(), r)
    }

    /// Evaluates the polynomial at a ring element.
    pub fn eval(&self, x: &R::Elem) -> R::Elem {
        let mut acc = self.ring.zero();
        for c in self.coeffs.iter().rev() {
            acc = self.ring.mul(&acc, x);
            self.ring.add_assign(&mut acc, c);
        }
        acc
    }

    /// Re-expresses the coefficients in another ring through `f`.
    pub fn map_ring<S: Ring>(&self, ring: S, f: impl Fn(&R::Elem) -> S::Elem) -> Poly<S> {
        let coeffs = self.coeffs.iter().map(f).collect();
        Poly::from_coeffs(ring, coeffs)
    }
}

fn schoolbook<R: Ring>(ring: &R, a: &[R::Elem], b: &[R::Elem], out: &mut [R::Elem]) {
    for (i, x) in a.iter().enumerate() {
        if ring.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            ring.mul_add_assign(&mut out[i + j], x, y);
        }
    }
}

fn add_into<R: Ring>(ring: &R, dst: &mut [R::Elem], src: &[R::Elem]) {
    for (d, s) in dst.iter_mut().zip(src) {
        ring.add_assign(d, s);
    }
}

fn mul_dense<R: Ring>(ring: &R, a: &[R::Elem], b: &[R::Elem], threshold: usize) -> Vec<R::Elem> {
    let mut out = vec![ring.zero(); a.len() + b.len() - 1];
    mul_into(ring, a, b, &mut out, threshold);
    out
}

/// Accumulates `a * b` into `out` (which must be long enough).
fn mul_into<R: Ring>(ring: &R, a: &[R::Elem], b: &[R::Elem], out: &mut [R::Elem], threshold: usize) {
    if a.is_empty() || b.is_empty() {
        return;
    }
    if a.len().min(b.len()) <= threshold {
        schoolbook(ring, a, b, out);
        return;
    }
    let half = a.len().max(b.len()) / 2;
    if a.len() <= half || b.len() <= half {
        // Unbalanced: chop the long operand into blocks of the short length.
        let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
        for (blk, chunk) in long.chunks(short.len()).enumerate() {
            let off = blk * short.len();
            mul_into(ring, chunk, short, &mut out[off..], threshold);
        }
        return;
    }
    let (a0, a1) = a.split_at(half);
    let (b0, b1) = b.split_at(half);
    let z0 = mul_dense(ring, a0, b0, threshold);
    let z2 = mul_dense(ring, a1, b1, threshold);
    let mut sa: Vec<R::Elem> = a1.to_vec();
    if sa.len() < a0.len() {
        sa.resize(a0.len(), ring.zero());
    }
    add_into(ring, &mut sa, a0);
    let mut sb: Vec<R::Elem> = b1.to_vec();
    if sb.len() < b0.len() {
        sb.resize(b0.len(), ring.zero());
    }
    add_into(ring, &mut sb, b0);
    let mut z1 = mul_dense(ring, &sa, &sb, threshold);
    for (d, s) in z1.iter_mut().zip(&z0) {
        ring.sub_assign(d, s);
    }
    for (d, s) in z1.iter_mut().zip(&z2) {
        ring.sub_assign(d, s);
    }
    add_into(ring, out, &z0);
    add_into(ring, &mut out[half..], &z1);
    add_into(ring, &mut out[2 * half..], &z2);
}

impl<'a, R: Ring> Add<&'a Poly<R>> for &'a Poly<R> {
    type Output = Poly<R>;
    fn add(self, rhs: &'a Poly<R>) -> Poly<R> {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl<R: Ring> Add for Poly<R> {
    type Output = Poly<R>;
    fn add(mut self, rhs: Poly<R>) -> Poly<R> {
        self.add_assign_ref(&rhs);
        self
    }
}

impl<'a, R: Ring> Sub<&'a Poly<R>> for &'a Poly<R> {
    type Output = Poly<R>;
    fn sub(self, rhs: &'a Poly<R>) -> Poly<R> {
        let mut out = self.clone();
        out.sub_assign_ref(rhs);
        out
    }
}

impl<R: Ring> Sub for Poly<R> {
    type Output = Poly<R>;
    fn sub(mut self, rhs: Poly<R>) -> Poly<R> {
        self.sub_assign_ref(&rhs);
        self
    }
}

impl<'a, R: Ring> Mul<&'a Poly<R>> for &'a Poly<R> {
    type Output = Poly<R>;
    fn mul(self, rhs: &'a Poly<R>) -> Poly<R> {
        self.mul_with_threshold(rhs, karatsuba_threshold())
    }
}

impl<R: Ring> Mul for Poly<R> {
    type Output = Poly<R>;
    fn mul(self, rhs: Poly<R>) -> Poly<R> {
        &self * &rhs
    }
}

impl<R: Ring> Neg for &Poly<R> {
    type Output = Poly<R>;
    fn neg(self) -> Poly<R> {
        let coeffs = self.coeffs.iter().map(|c| self.ring.neg(c)).collect();
        Poly {
            ring: self.ring.clone(),
            coeffs,
        }
    }
}

impl<R: Ring> Neg for Poly<R> {
    type Output = Poly<R>;
    fn neg(self) -> Poly<R> {
        -&self
    }
}

impl IntPoly {
    /// Convenience constructor from machine integers.
    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Poly::from_coeffs(Integers, coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn from_bigints(coeffs: Vec<BigInt>) -> Self {
        Poly::from_coeffs(Integers, coeffs)
    }

    pub fn to_rat(&self) -> RatPoly {
        self.map_ring(Rationals, |c| BigRational::from_integer(c.clone()))
    }

    pub fn reduce_mod(&self, modulus: u64) -> ModPoly {
        let ring = Zmod::new(modulus);
        self.map_ring(ring, |c| ring.from_bigint(c))
    }

    /// Exact quotient `self / d`.
    ///
    /// The quotient is produced by long division; it must be integral and
    /// leave zero remainder, otherwise [`Error::NotDivisible`] is returned.
    /// For integer operands this is the same test as dividing over `Q` and
    /// checking that the quotient has integer coefficients: the quotient
    /// coefficients are unique, and the first non-integral one shows up as
    /// an inexact step here.
    pub fn exact_div(&self, d: &IntPoly) -> Result<IntPoly> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        if self.is_zero() {
            return Ok(IntPoly::zero(Integers));
        }
        let dp = self.degree().unwrap_or(0);
        if dp < dd {
            return Err(Error::NotDivisible);
        }
        let lc = d.leading().unwrap().clone();
        let unit = lc.is_one() || (-&lc).is_one();
        let mut r = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); dp - dd + 1];
        for qi in (0..=dp - dd).rev() {
            let top = &r[qi + dd];
            if top.is_zero() {
                continue;
            }
            let qc = if unit {
                if lc.is_one() {
                    top.clone()
                } else {
                    -top
                }
            } else {
                use num_integer::Integer;
                let (qc, rem) = top.div_rem(&lc);
                if !rem.is_zero() {
                    return Err(Error::NotDivisible);
                }
                qc
            };
            for (t, dc) in d.coeffs.iter().enumerate() {
                if !dc.is_zero() {
                    r[qi + t] -= &qc * dc;
                }
            }
            quot[qi] = qc;
        }
        if r.iter().any(|c| !c.is_zero()) {
            return Err(Error::NotDivisible);
        }
        Ok(IntPoly::from_bigints(quot))
    }

    /// Sum of the coefficients, i.e. the value at `q = 1`.
    pub fn value_at_one(&self) -> BigInt {
        self.coeffs.iter().sum()
    }
}

impl RatPoly {
    pub fn from_rationals(coeffs: Vec<BigRational>) -> Self {
        Poly::from_coeffs(Rationals, coeffs)
    }

    /// Division with remainder over `Q`.
    pub fn div_rem(&self, d: &RatPoly) -> Result<(RatPoly, RatPoly)> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let Some(dp) = self.degree().filter(|&dp| dp >= dd) else {
            return Ok((RatPoly::zero(Rationals), self.clone()));
        };
        let inv = BigRational::one() / d.leading().unwrap();
        let mut r = self.coeffs.clone();
        let mut quot = vec![BigRational::zero(); dp - dd + 1];
        for qi in (0..=dp - dd).rev() {
            if r[qi + dd].is_zero() {
                continue;
            }
            let qc = &r[qi + dd] * &inv;
            for (t, dc) in d.coeffs.iter().enumerate() {
                r[qi + t] -= &qc * dc;
            }
            quot[qi] = qc;
        }
        r.truncate(dd);
        Ok((RatPoly::from_rationals(quot), RatPoly::from_rationals(r)))
    }

    /// The integer polynomial with the same coefficients, if they are all integral.
    pub fn to_int(&self) -> Option<IntPoly> {
        self.coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect::<Option<Vec<_>>>()
            .map(IntPoly::from_bigints)
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.eval(x)
    }
}

/// Human-readable form, e.g. `3 - 2q - q^2 + q^3`.
impl<R: Ring> std::fmt::Display for Poly<R>
where
    R::Elem: std::fmt::Display,
{
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.coeffs.iter().enumerate() {
            if self.ring.is_zero(c) {
                continue;
            }
            let text = c.to_string();
            let (neg, mag) = match text.strip_prefix('-') {
                Some(m) => (true, m.to_string()),
                None => (false, text),
            };
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            first = false;
            let unit = mag == "1" && e > 0;
            if !unit {
                if mag.contains('/') && e > 0 {
                    write!(f, "({mag})")?;
                } else {
                    write!(f, "{mag}")?;
                }
            }
            match e {
                0 => {}
                1 => write!(f, "q")?,
                _ => write!(f, "q^{e}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ip(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    fn arb_poly(max_deg: usize, bound: i64) -> impl Strategy<Value = IntPoly> {
        prop::collection::vec(-bound..=bound, 0..=max_deg + 1).prop_map(|v| ip(&v))
    }

    #[test]
    fn trims_trailing_zeros() {
        let p = ip(&[1, 2, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        assert!(ip(&[0, 0]).is_zero());
        assert_eq!(ip(&[]).degree(), None);
    }

    #[test]
    fn small_products() {
        assert_eq!(&ip(&[1, -1]) * &ip(&[1, 1]), ip(&[1, 0, -1]));
        assert_eq!(&ip(&[1, -1]) * &ip(&[1, 0, -1]), ip(&[1, -1, -1, 1]));
        assert!((&ip(&[3, 4, 5]) * &IntPoly::zero(Integers)).is_zero());
    }

    #[test]
    fn exact_division() {
        assert_eq!(ip(&[1, 0, -1]).exact_div(&ip(&[1, -1])).unwrap(), ip(&[1, 1]));
        assert!(matches!(
            ip(&[1, 1]).exact_div(&ip(&[1, -1])),
            Err(Error::NotDivisible)
        ));
        // non-integral quotient: (2q) / (3) style
        assert!(matches!(
            ip(&[0, 2]).exact_div(&ip(&[3])),
            Err(Error::NotDivisible)
        ));
        assert!(matches!(
            ip(&[1]).exact_div(&IntPoly::zero(Integers)),
            Err(Error::DivisionByZero)
        ));
        assert_eq!(ip(&[0, 6, 9]).exact_div(&ip(&[2, 3])).unwrap(), ip(&[0, 3]));
    }

    #[test]
    fn theta_derivative() {
        assert_eq!(ip(&[0, 0, 0, 1]).theta_deriv(1), ip(&[0, 0, 0, 3]));
        assert_eq!(ip(&[1, -1, -1]).theta_deriv(1), ip(&[0, -1, -2]));
        assert_eq!(ip(&[0, 0, 1]).theta_deriv(2), ip(&[0, 0, 4]));
        assert_eq!(ip(&[5, 7]).theta_deriv(0), ip(&[5, 7]));
    }

    #[test]
    fn one_minus_q_substitution() {
        assert_eq!(ip(&[0, 1]).subst_one_minus_q(3), ip(&[1, -1]));
        assert_eq!(ip(&[1, -1]).subst_one_minus_q(3), ip(&[0, 1]));
        // (1-q)^3 truncated at degree 1
        assert_eq!(ip(&[0, 0, 0, 1]).subst_one_minus_q(1), ip(&[1, -3]));
    }

    #[test]
    fn rem_monic_matches_div_rem() {
        let p = ip(&[3, -1, 4, 1, -5, 9, 2]).to_rat();
        let m = ip(&[1, -1, 1]).to_rat();
        let (_, r) = p.div_rem(&m).unwrap();
        assert_eq!(p.rem_monic(&m), r);
    }

    #[test]
    fn one_minus_q_pow_in_place() {
        let mut p = ip(&[1, 2, 3]);
        p.mul_one_minus_q_pow_assign(2);
        assert_eq!(p, &ip(&[1, 2, 3]) * &IntPoly::one_minus_q_pow(Integers, 2));
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_poly(50, 1_000_000), b in arb_poly(50, 1_000_000), c in arb_poly(50, 1_000_000)) {
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &b, &b + &a);
        }

        #[test]
        fn exact_div_inverts_mul(a in arb_poly(30, 1000), b in arb_poly(20, 1000)) {
            prop_assume!(!b.is_zero());
            prop_assert_eq!((&a * &b).exact_div(&b).unwrap(), a);
        }

        #[test]
        fn karatsuba_agrees_with_schoolbook(a in arb_poly(200, 50), b in arb_poly(150, 50), t in 1usize..40) {
            prop_assert_eq!(a.mul_with_threshold(&b, t), a.mul_with_threshold(&b, usize::MAX));
        }

        #[test]
        fn substitution_is_multiplicative(a in arb_poly(20, 100), b in arb_poly(20, 100), cap in 0usize..30) {
            let lhs = (&a * &b).subst_one_minus_q(cap);
            let rhs = a.subst_one_minus_q(cap).mul_truncated(&b.subst_one_minus_q(cap), cap);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn mod_reduction_is_a_homomorphism(a in arb_poly(40, 10_000), b in arb_poly(40, 10_000), m in 2u64..500) {
            prop_assert_eq!((&a * &b).reduce_mod(m), &a.reduce_mod(m) * &b.reduce_mod(m));
        }
    }
}
