//! Coefficients `xi(n)` of `F(1 - q)` and `G(1 - q)` and their prime-power
//! congruences.
//!
//! Term `n` of a family has valuation at least `n` after `q -> 1 - q`, so
//! `xi(0..=D)` is already determined by the partial sum with `N = D`.
//! Congruence checks only need `xi mod p^r`, which is computed directly
//! over `Z/p^r` and never materialises the big integers.

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactpoly::Zmod;
use crate::qfamilies::{partial_sum, partial_sum_in, FamilySpec};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct XiSequence {
    pub family: String,
    pub coeffs: Vec<BigInt>,
}

/// `xi(0..=depth)` exactly.
pub fn xi_coeffs(family: &FamilySpec, depth: usize) -> XiSequence {
    let value = partial_sum(family, depth).value.subst_one_minus_q(depth);
    let mut coeffs = value.into_coeffs();
    coeffs.resize(depth + 1, BigInt::from(0));
    XiSequence {
        family: family.label().to_string(),
        coeffs,
    }
}

/// `xi(0..=depth) mod modulus`.
pub fn xi_coeffs_mod(family: &FamilySpec, depth: usize, modulus: u64) -> Vec<u64> {
    let ring = Zmod::new(modulus);
    let value = partial_sum_in(family, ring, depth).subst_one_minus_q(depth);
    let mut coeffs = value.into_coeffs();
    coeffs.resize(depth + 1, 0);
    coeffs
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

fn prime_power(p: u64, r: u32) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::InvalidParam(format!("p = {p} is not prime")));
    }
    if r == 0 {
        return Err(Error::InvalidParam("r must be at least 1".into()));
    }
    p.checked_pow(r)
        .filter(|m| *m < 1 << 62)
        .ok_or_else(|| Error::InvalidParam(format!("{p}^{r} is too large")))
}

/// Indices `p^r n - beta`, `n >= 1`, up to `depth`.
fn class_indices(modulus: u64, beta: u64, depth: usize) -> impl Iterator<Item = usize> {
    (modulus - beta..=depth as u64)
        .step_by(modulus as usize)
        .map(|i| i as usize)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CongruenceCheck {
    pub family: String,
    pub p: u64,
    pub r: u32,
    pub beta: u64,
    pub depth: usize,
    pub pass: bool,
    /// Least index with `xi(index) != 0 mod p^r`, and that residue.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<(usize, u64)>,
}

fn check_class(xi: &[u64], modulus: u64, beta: u64) -> Option<(usize, u64)> {
    class_indices(modulus, beta, xi.len() - 1)
        .find(|i| xi[*i] != 0)
        .map(|i| (i, xi[i]))
}

/// Tests `xi(p^r n - beta) = 0 mod p^r` for every such index `<= depth`.
pub fn verify_congruence(family: &FamilySpec, p: u64, r: u32, beta: u64, depth: usize) -> Result<CongruenceCheck> {
    let modulus = prime_power(p, r)?;
    if beta == 0 || beta > modulus {
        return Err(Error::InvalidParam(format!("beta must lie in 1..={modulus}, got {beta}")));
    }
    let xi = xi_coeffs_mod(family, depth, modulus);
    let witness = check_class(&xi, modulus, beta);
    Ok(CongruenceCheck {
        family: family.label().to_string(),
        p,
        r,
        beta,
        depth,
        pass: witness.is_none(),
        witness,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanReport {
    pub family: String,
    pub p: u64,
    pub r: u32,
    pub depth: usize,
    pub passing_beta: Vec<u64>,
    /// The same classes as residues `p^r - beta` mod `p^r`.
    pub residues: Vec<u64>,
    pub status: &'static str,
}

/// Every `beta` in `1..=p^r` whose class vanishes mod `p^r` through `depth`.
/// Needs at least three indices per class.
pub fn scan_congruences(family: &FamilySpec, p: u64, r: u32, depth: usize) -> Result<ScanReport> {
    let modulus = prime_power(p, r)?;
    if (depth as u64) < 3 * modulus {
        return Err(Error::InvalidParam(format!(
            "depth {depth} is below 3 p^r = {}; each class needs three indices",
            3 * modulus
        )));
    }
    let xi = xi_coeffs_mod(family, depth, modulus);
    let passing_beta: Vec<u64> = (1..=modulus)
        .into_par_iter()
        .filter(|beta| check_class(&xi, modulus, *beta).is_none())
        .collect();
    let mut residues: Vec<u64> = passing_beta.iter().map(|b| (modulus - b) % modulus).collect();
    residues.sort_unstable();
    Ok(ScanReport {
        family: family.label().to_string(),
        p,
        r,
        depth,
        passing_beta,
        residues,
        status: "empirical",
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Integer;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|x| BigInt::from(*x)).collect()
    }

    #[test]
    fn xi_prefixes() {
        assert_eq!(xi_coeffs(&FamilySpec::kz(), 5).coeffs, big(&[1, 1, 2, 5, 15, 53]));
        assert_eq!(xi_coeffs(&FamilySpec::gk(1).unwrap(), 5).coeffs, big(&[1, 1, 2, 6, 25, 135]));
        assert_eq!(xi_coeffs(&FamilySpec::gk(2).unwrap(), 5).coeffs, big(&[1, 2, 6, 28, 189, 1680]));
    }

    /// Fishburn numbers from the series `sum_n prod_{i<=n} (1 - (1-x)^i)`
    /// expanded with plain binomial coefficients.
    #[test]
    fn kz_against_binomial_oracle() {
        let d = 12usize;
        let binom = |n: usize, k: usize| -> BigInt {
            (0..k).fold(BigInt::from(1), |acc, t| acc * BigInt::from(n - t) / BigInt::from(t + 1))
        };
        let mut total = vec![BigInt::from(0); d + 1];
        let mut prod = vec![BigInt::from(0); d + 1];
        prod[0] = BigInt::from(1);
        for n in 0..=d {
            if n > 0 {
                // 1 - (1-x)^n = sum_{k>=1} (-1)^(k+1) C(n,k) x^k
                let factor: Vec<BigInt> = (0..=d)
                    .map(|k| {
                        if k == 0 || k > n {
                            BigInt::from(0)
                        } else if k.is_odd() {
                            binom(n, k)
                        } else {
                            -binom(n, k)
                        }
                    })
                    .collect();
                let mut next = vec![BigInt::from(0); d + 1];
                for (a, x) in prod.iter().enumerate() {
                    for (b, y) in factor.iter().enumerate().take(d + 1 - a) {
                        next[a + b] += x * y;
                    }
                }
                prod = next;
            }
            for (t, c) in total.iter_mut().zip(&prod) {
                *t += c;
            }
        }
        assert_eq!(xi_coeffs(&FamilySpec::kz(), d).coeffs, total);
    }

    #[test]
    fn stabilization() {
        let fams = [
            FamilySpec::kz(),
            FamilySpec::hikami(2, 0).unwrap(),
            FamilySpec::hikami(2, 1).unwrap(),
            FamilySpec::gk(1).unwrap(),
            FamilySpec::gk(2).unwrap(),
        ];
        fams.par_iter().for_each(|f| {
            for d in [0usize, 7, 20, 40] {
                let small = xi_coeffs(f, d).coeffs;
                let large = xi_coeffs(f, d + 10).coeffs;
                assert_eq!(&large[..=d], &small[..], "{} D={d}", f.label());
            }
        });
    }

    #[test]
    fn modular_route_matches_exact() {
        for f in [FamilySpec::kz(), FamilySpec::gk(2).unwrap(), FamilySpec::hikami(2, 1).unwrap()] {
            let exact = xi_coeffs(&f, 30).coeffs;
            for m in [5u64, 49, 121, 1 << 40] {
                let want: Vec<u64> = exact
                    .iter()
                    .map(|c| c.mod_floor(&BigInt::from(m)).try_into().unwrap())
                    .collect();
                assert_eq!(xi_coeffs_mod(&f, 30, m), want, "{} m={m}", f.label());
            }
        }
    }

    #[test]
    fn congruence_examples() {
        let kz = FamilySpec::kz();
        assert!(verify_congruence(&kz, 5, 1, 1, 104).unwrap().pass);
        assert!(verify_congruence(&FamilySpec::gk(1).unwrap(), 5, 1, 1, 104).unwrap().pass);
        let bad = verify_congruence(&kz, 5, 1, 3, 50).unwrap();
        assert_eq!(bad.witness, Some((2, 2)));
        assert!(verify_congruence(&kz, 4, 1, 1, 20).is_err());
        assert!(verify_congruence(&kz, 5, 1, 6, 20).is_err());
    }

    #[test]
    fn scans() {
        let r = scan_congruences(&FamilySpec::kz(), 5, 1, 200).unwrap();
        assert_eq!(r.passing_beta, vec![1, 2]);
        assert_eq!(r.residues, vec![3, 4]);
        let r = scan_congruences(&FamilySpec::kz(), 7, 1, 140).unwrap();
        assert!(r.passing_beta.contains(&1));
        let r = scan_congruences(&FamilySpec::gk(1).unwrap(), 13, 1, 260).unwrap();
        assert_eq!(r.passing_beta, vec![1, 2, 3, 4]);
        assert!(scan_congruences(&FamilySpec::kz(), 7, 1, 20).is_err());
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains(r#""status":"empirical""#));
    }

    #[test]
    fn listed_congruences_at_r_one() {
        let g1 = FamilySpec::gk(1).unwrap();
        let g2 = FamilySpec::gk(2).unwrap();
        for (f, p, betas) in [
            (&g1, 5u64, vec![1u64]),
            (&g1, 7, vec![1]),
            (&g1, 13, vec![1, 2, 3, 4]),
            (&g2, 7, vec![1]),
            (&g2, 11, vec![1]),
        ] {
            for beta in betas {
                let c = verify_congruence(f, p, 1, beta, (20 * p) as usize).unwrap();
                assert!(c.pass, "{} p={p} beta={beta}: {:?}", f.label(), c.witness);
            }
        }
    }
}
