//! Expansions of Habiro-type series at roots of unity and their comparison
//! with partial theta functions.
//!
//! `(q d/dq)^l F(q;N)` at `q = zeta` of order `k` no longer depends on `N`
//! once `N >= k(l+1) - 1` (F-type) or `2N >= (2l+1)k` (G-type, `k` odd).
//! The `t^l` coefficient of `F(zeta e^-t)` is `(-1)^l / l!` times that value.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::cyclofield::{eval_at_root, CycloNum};
use crate::dissection::dissect;
use crate::error::{Error, Result};
use crate::exactpoly::IntPoly;
use crate::partialtheta::{gamma_coeffs, validate_character, Character};
use crate::qfamilies::{partial_sum, FamilySpec, Kernel, PartialSum};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StableDerivative {
    pub family: String,
    pub k: u64,
    pub j: u64,
    pub order: usize,
    pub value: CycloNum,
    pub witness_n: usize,
}

/// Smallest truncation at which the order-`l` derivative at a root of
/// order `k` is stable.
pub fn witness_truncation(kernel: Kernel, k: u64, order: usize) -> Result<usize> {
    if k == 0 {
        return Err(Error::InvalidParam("root of unity order must be positive".into()));
    }
    let k = k as usize;
    match kernel {
        Kernel::F => Ok(k * (order + 1) - 1),
        Kernel::G if k % 2 == 1 => Ok((k * (2 * order + 1)).div_ceil(2)),
        Kernel::G => Err(Error::OddOrderRequired(k as u64)),
    }
}

/// `(q d/dq)^l p` evaluated at `zeta_k^j`.
pub fn theta_at_root(p: &IntPoly, k: u64, j: u64, order: usize) -> CycloNum {
    eval_at_root(&p.theta_deriv(order as u32), k, j)
}

pub fn stable_derivative(family: &FamilySpec, k: u64, j: u64, order: usize) -> Result<StableDerivative> {
    let n = witness_truncation(family.kernel(), k, order)?;
    let ps = partial_sum(family, n);
    Ok(StableDerivative {
        family: family.label().to_string(),
        k,
        j: j % k,
        order,
        value: theta_at_root(&ps.value, k, j, order),
        witness_n: n,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MatchVerdict {
    Match,
    Mismatch,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MatchReport {
    pub family: String,
    pub character: String,
    pub k: u64,
    pub j: u64,
    pub checked_through: usize,
    pub verdict: MatchVerdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_mismatch: Option<usize>,
}

fn factorial(n: usize) -> BigInt {
    (1..=n).map(BigInt::from).product()
}

/// The `t^l` coefficients, `l <= depth`, of `F(zeta e^-t)` from a partial
/// sum that is at least the witness truncation for `depth`.
pub fn family_expansion(ps: &PartialSum, k: u64, j: u64, depth: usize) -> Result<Vec<CycloNum>> {
    let need = witness_truncation(ps.family.kernel(), k, depth)?;
    if ps.upper < need {
        return Err(Error::InvalidParam(format!(
            "partial sum N = {} is below the stable truncation {need}",
            ps.upper
        )));
    }
    Ok((0..=depth)
        .into_par_iter()
        .map(|l| {
            let mut w = BigRational::new(BigInt::one(), factorial(l));
            if l % 2 == 1 {
                w = -w;
            }
            theta_at_root(&ps.value, k, j, l).scale(&w)
        })
        .collect())
}

/// Compares `gamma_l(zeta)` with the family's `t^l` coefficient for every
/// `l <= depth`, exactly in `Q(zeta_k)`.
pub fn match_expansion(family: &FamilySpec, chi: &Character, k: u64, j: u64, depth: usize) -> Result<MatchReport> {
    validate_character(chi).map_err(|e| Error::CharacterInvalid(Box::new(e)))?;
    let n = witness_truncation(family.kernel(), k, depth)?;
    let gammas = gamma_coeffs(chi, k, j, depth)?;
    let ps = partial_sum(family, n);
    let lhs = family_expansion(&ps, k, j, depth)?;
    let first_mismatch = (0..=depth).find(|l| lhs[*l] != gammas.coeffs[*l]);
    Ok(MatchReport {
        family: family.label().to_string(),
        character: chi.name().to_string(),
        k,
        j: j % k,
        checked_through: depth,
        verdict: if first_mismatch.is_none() {
            MatchVerdict::Match
        } else {
            MatchVerdict::Mismatch
        },
        first_mismatch,
    })
}

/// `C_{l,i,j}(s)` for `l <= max_l`, `0 <= i < s`, `0 <= j <= l`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CArray {
    pub s: u64,
    /// `table[l][i][j]`
    pub table: Vec<Vec<Vec<BigInt>>>,
}

impl CArray {
    pub fn max_order(&self) -> usize {
        self.table.len() - 1
    }

    /// Zero outside `0 <= j <= l`.
    pub fn get(&self, l: usize, i: usize, j: usize) -> BigInt {
        self.table
            .get(l)
            .and_then(|row| row.get(i))
            .and_then(|r| r.get(j))
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }
}

/// `C_{0,i,0} = 1` and
/// `C_{l+1,i,j} = (i + j s) C_{l,i,j} + s C_{l,i,j-1}` for `0 <= j <= l + 1`.
pub fn c_array(s: u64, max_l: usize) -> CArray {
    assert!(s >= 1, "modulus must be positive");
    let sb = BigInt::from(s);
    let mut table = vec![(0..s).map(|_| vec![BigInt::one()]).collect::<Vec<_>>()];
    for l in 0..max_l {
        let prev = &table[l];
        let next = (0..s as usize)
            .map(|i| {
                (0..=l + 1)
                    .map(|j| {
                        let here = prev[i].get(j).cloned().unwrap_or_default();
                        let below = if j > 0 { prev[i][j - 1].clone() } else { BigInt::zero() };
                        BigInt::from(i as u64 + j as u64 * s) * here + &sb * below
                    })
                    .collect()
            })
            .collect();
        table.push(next);
    }
    CArray { s, table }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExtractionCheck {
    pub s: u64,
    pub i0: u64,
    pub order: usize,
    pub pass: bool,
    /// Lowest exponent where the two sides differ.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_difference: Option<usize>,
}

/// Checks
/// `sum_j C_{l,i0,j}(s) q^(i0 + j s) A^(j)(q^s)
///     = (1/s) sum_k zeta_s^(-k i0) ((q d/dq)^l h)(zeta_s^k q)`
/// coefficientwise in `Q(zeta_s)`, where `A` is the `i0`-th part of the
/// `s`-dissection of `h` and `A^(j)` its `j`-th derivative.
pub fn extraction_identity_check(h: &IntPoly, s: u64, i0: u64, order: usize) -> Result<ExtractionCheck> {
    if s == 0 || i0 >= s {
        return Err(Error::InvalidParam(format!("need 0 <= i0 < s, got i0 = {i0}, s = {s}")));
    }
    let c = c_array(s, order);
    let part = dissect(h, s).parts.swap_remove(i0 as usize);
    let mut lhs = IntPoly::zero(crate::exactpoly::Integers);
    let mut deriv = part;
    for jj in 0..=order {
        let w = c.get(order, i0 as usize, jj);
        if !w.is_zero() && !deriv.is_zero() {
            lhs.add_scaled_shifted(&deriv.spread(s as usize), &w, i0 as usize + jj * s as usize);
        }
        deriv = deriv.derivative();
    }
    // (1/s) sum_k zeta_s^(k(e - i0)), one value per class of e mod s
    let inv_s = BigRational::new(BigInt::one(), BigInt::from(s));
    let filters: Vec<CycloNum> = (0..s)
        .map(|d| {
            let mut acc = CycloNum::zero(s);
            for k in 0..s {
                acc.add_assign_ref(&CycloNum::zeta_pow(s, (k * d) as i64));
            }
            acc.scale(&inv_s)
        })
        .collect();
    let theta = h.theta_deriv(order as u32);
    let len = theta.len().max(lhs.len());
    let mut first_difference = None;
    for e in 0..len {
        let d = (e as i64 - i0 as i64).rem_euclid(s as i64) as usize;
        let rhs = filters[d].scale(&BigRational::from_integer(theta.coeff(e)));
        let left = CycloNum::from_rational(s, BigRational::from_integer(lhs.coeff(e)));
        if left != rhs {
            first_difference = Some(e);
            break;
        }
    }
    Ok(ExtractionCheck {
        s,
        i0,
        order,
        pass: first_difference.is_none(),
        first_difference,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::{RatPoly, Rationals};
    use proptest::prelude::*;

    #[test]
    fn stable_examples() {
        let kz = FamilySpec::kz();
        assert_eq!(stable_derivative(&kz, 1, 0, 0).unwrap().value, CycloNum::one(1));
        assert_eq!(stable_derivative(&kz, 2, 1, 0).unwrap().value, CycloNum::from_integer(2, 3));
        let g = FamilySpec::gk(1).unwrap();
        assert_eq!(stable_derivative(&g, 1, 0, 0).unwrap().value, CycloNum::one(1));
        assert!(matches!(stable_derivative(&g, 2, 1, 0), Err(Error::OddOrderRequired(2))));
    }

    #[test]
    fn witnesses() {
        assert_eq!(witness_truncation(Kernel::F, 6, 4).unwrap(), 29);
        assert_eq!(witness_truncation(Kernel::G, 5, 3).unwrap(), 18);
        assert_eq!(witness_truncation(Kernel::G, 1, 0).unwrap(), 1);
    }

    fn assert_stable(f: &FamilySpec, k: u64, l: usize) {
        let n = witness_truncation(f.kernel(), k, l).unwrap();
        for j in 0..k {
            let vals: Vec<CycloNum> = (n..=n + 2)
                .map(|m| theta_at_root(&partial_sum(f, m).value, k, j, l))
                .collect();
            assert_eq!(vals[0], vals[1], "{} k={k} j={j} l={l}", f.label());
            assert_eq!(vals[0], vals[2], "{} k={k} j={j} l={l}", f.label());
        }
    }

    #[test]
    fn stability_f_type() {
        let fams = [FamilySpec::kz(), FamilySpec::hikami(2, 0).unwrap(), FamilySpec::hikami(2, 1).unwrap()];
        fams.par_iter().for_each(|f| {
            for k in 1..=4 {
                for l in 0..=4 {
                    assert_stable(f, k, l);
                }
            }
        });
    }

    #[test]
    fn stability_g_type() {
        for kk in 1..=2 {
            let f = FamilySpec::gk(kk).unwrap();
            for k in [1, 3, 5] {
                for l in 0..=4 {
                    assert_stable(&f, k, l);
                }
            }
        }
    }

    /// Below the witness the value generally still moves.
    #[test]
    fn witness_is_not_vacuous() {
        let kz = FamilySpec::kz();
        let a = theta_at_root(&partial_sum(&kz, 0).value, 2, 1, 0);
        let b = theta_at_root(&partial_sum(&kz, 1).value, 2, 1, 0);
        assert_ne!(a, b);
    }

    /// `p(zeta e^-t)` by substituting the truncated exponential series into
    /// each monomial, against the derivative formula.
    #[test]
    fn swap_identity() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let order = 6usize;
        let mut exp_neg = vec![BigRational::one()];
        for m in 1..=order {
            let prev = exp_neg[m - 1].clone();
            exp_neg.push(-prev / BigRational::from_integer(BigInt::from(m)));
        }
        let exp_neg = RatPoly::from_rationals(exp_neg);
        for _ in 0..20 {
            let deg = rng.gen_range(0..=8);
            let coeffs: Vec<i64> = (0..=deg).map(|_| rng.gen_range(-9..=9)).collect();
            let p = IntPoly::from_i64s(&coeffs);
            let k = rng.gen_range(1..=4u64);
            let j = rng.gen_range(0..k);
            let mut series = vec![CycloNum::zero(k); order + 1];
            let mut power = RatPoly::one(Rationals);
            for (e, c) in coeffs.iter().enumerate() {
                if e > 0 {
                    power = power.mul_truncated(&exp_neg, order);
                }
                let z = CycloNum::zeta_pow(k, (e as u64 * j) as i64).scale(&BigRational::from_integer((*c).into()));
                for (l, slot) in series.iter_mut().enumerate() {
                    slot.add_assign_ref(&z.scale(&power.coeff(l)));
                }
            }
            for (l, want) in series.iter().enumerate() {
                let mut w = BigRational::new(BigInt::one(), factorial(l));
                if l % 2 == 1 {
                    w = -w;
                }
                assert_eq!(&theta_at_root(&p, k, j, l).scale(&w), want);
            }
        }
    }

    #[test]
    fn match_examples() {
        let r = match_expansion(&FamilySpec::kz(), &Character::chi_kz(), 1, 0, 3).unwrap();
        assert_eq!(r.verdict, MatchVerdict::Match);
        let r = match_expansion(&FamilySpec::gk(1).unwrap(), &Character::chi6(), 3, 1, 2).unwrap();
        assert_eq!(r.verdict, MatchVerdict::Match);
        // xi and xi_G1 agree through x^2, so the wrong character survives order 2
        let r = match_expansion(&FamilySpec::kz(), &Character::chi6(), 1, 0, 2).unwrap();
        assert_eq!(r.verdict, MatchVerdict::Match);
        let r = match_expansion(&FamilySpec::kz(), &Character::chi6(), 1, 0, 3).unwrap();
        assert_eq!(r.verdict, MatchVerdict::Mismatch);
        assert_eq!(r.first_mismatch, Some(3));
        let json = serde_json::to_string(&match_expansion(&FamilySpec::kz(), &Character::chi_kz(), 6, 1, 1).unwrap()).unwrap();
        assert!(json.starts_with(r#"{"family":"kz","character":"chi_kz","k":6,"j":1,"checked_through":1,"verdict":"match"}"#));
    }

    #[test]
    fn c_array_examples() {
        let c = c_array(5, 3);
        assert_eq!(c.get(0, 0, 0), BigInt::one());
        assert_eq!(c.get(1, 1, 1), BigInt::from(5));
        assert_eq!(c.get(2, 1, 1), BigInt::from(35));
        for l in 0..=3 {
            for i in 0..5 {
                assert_eq!(c.get(l, i, 0), BigInt::from(i).pow(l as u32));
                assert_eq!(c.get(l, i, l), BigInt::from(5).pow(l as u32));
                assert!(c.get(l, i, l + 1).is_zero());
            }
        }
    }

    /// `(q d/dq)^l (q^i B(q^s)) = sum_j C_{l,i,j} q^(i + j s) B^(j)(q^s)`
    /// for a monomial `B = x^m`, where both sides are explicit.
    #[test]
    fn c_array_against_monomials() {
        for s in 1..=4u64 {
            let c = c_array(s, 5);
            for i in 0..s as usize {
                for m in 0..6usize {
                    for l in 0..=5usize {
                        let e = i + m * s as usize;
                        let lhs = BigInt::from(e).pow(l as u32);
                        let mut rhs = BigInt::zero();
                        for jj in 0..=l.min(m) {
                            let falling: BigInt = (0..jj).map(|t| BigInt::from(m - t)).product();
                            rhs += c.get(l, i, jj) * falling;
                        }
                        assert_eq!(lhs, rhs, "s={s} i={i} m={m} l={l}");
                    }
                }
            }
        }
    }

    #[test]
    fn extraction_examples() {
        let h = IntPoly::from_i64s(&[3, -2, -1, 1]);
        assert!(extraction_identity_check(&h, 2, 0, 1).unwrap().pass);
        for i0 in 0..3 {
            assert!(extraction_identity_check(&h, 3, i0, 0).unwrap().pass);
        }
        assert!(extraction_identity_check(&h, 3, 3, 0).is_err());
    }

    proptest! {
        #[test]
        fn extraction_battery(coeffs in proptest::collection::vec(-50i64..50, 11), l in 0usize..=3) {
            let h = IntPoly::from_i64s(&coeffs);
            for i0 in 0..3 {
                prop_assert!(extraction_identity_check(&h, 3, i0, l).unwrap().pass);
            }
        }
    }
}
