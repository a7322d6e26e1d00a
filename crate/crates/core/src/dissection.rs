//! `s`-dissections `p(q) = sum_{i<s} q^i A_i(q^s)`, the residue sets
//! `S_{a,b,chi}(s)` and the divisibility certificates for the parts of a
//! partial sum.
//!
//! For an F-type family the parts `A_i` with `i` outside `S` are divisible
//! by `(q;q)_lambda`, `lambda = floor((N+1)/s)`; for a G-type family and odd
//! `s` by `(q;q^2)_mu`, `mu = floor(N/s + 1/2)`.

use std::collections::BTreeSet;

use num_integer::Integer;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactpoly::{cyclotomic, pochhammer, IntPoly, Integers, Step};
use crate::partialtheta::{validate_character, Character};
use crate::qfamilies::{partial_sum, FamilySpec, Kernel, PartialSum};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Dissection {
    pub modulus: u64,
    pub parts: Vec<IntPoly>,
}

/// Buckets the exponents of `p` by residue mod `s`.
pub fn dissect(p: &IntPoly, s: u64) -> Dissection {
    assert!(s >= 1, "modulus must be positive");
    let s_us = s as usize;
    let mut buckets: Vec<Vec<_>> = (0..s_us)
        .map(|_| Vec::with_capacity(p.len() / s_us + 1))
        .collect();
    for (e, c) in p.coeffs().iter().enumerate() {
        buckets[e % s_us].push(c.clone());
    }
    Dissection {
        modulus: s,
        parts: buckets.into_iter().map(IntPoly::from_bigints).collect(),
    }
}

impl Dissection {
    pub fn part(&self, i: usize) -> &IntPoly {
        &self.parts[i]
    }

    /// `sum_i q^i A_i(q^s)`.
    pub fn reassemble(&self) -> IntPoly {
        let s = self.modulus as usize;
        let mut out = IntPoly::zero(Integers);
        for (i, a) in self.parts.iter().enumerate() {
            out.add_assign_ref(&a.spread(s).shift(i));
        }
        out
    }
}

/// `lambda(N, s) = floor((N+1)/s)`.
pub fn lambda(n: usize, s: u64) -> usize {
    (n + 1) / s as usize
}

/// `mu(N, k, s) = floor(N / (s(2k-1)) + 1/2)`.
pub fn mu(n: usize, k: u64, s: u64) -> usize {
    let d = s as usize * (2 * k as usize - 1);
    (2 * n + d) / (2 * d)
}

pub fn thresholds(n: usize, s: u64, k: u64) -> (usize, usize) {
    assert!(s >= 1 && k >= 1);
    (lambda(n, s), mu(n, k, s))
}

/// `{ (n^2 - a)/b mod s : chi(n) != 0 }`, scanning `n` over `lcm(T, b s)`.
pub fn residue_set(chi: &Character, s: u64) -> BTreeSet<u64> {
    assert!(s >= 1, "modulus must be positive");
    let window = chi.period().lcm(&(chi.b() * s));
    let mut out = BTreeSet::new();
    for n in 0..window as i64 {
        if chi.value(n).is_zero() {
            continue;
        }
        if let Some(e) = chi.exponent(n) {
            out.insert(e.rem_euclid(s as i64) as u64);
        }
    }
    out
}

/// `(q;q)_n` or `(q;q^2)_n` as `sign * prod Phi_d^e`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PochhammerFactorization {
    pub step: u8,
    pub sign: i8,
    /// `(d, e)` pairs, increasing in `d`.
    pub factors: Vec<(u64, u32)>,
}

impl PochhammerFactorization {
    pub fn exponents(&self) -> Vec<u32> {
        self.factors.iter().map(|(_, e)| *e).collect()
    }

    pub fn expand(&self) -> IntPoly {
        let mut out = IntPoly::from_i64s(&[self.sign as i64]);
        for (d, e) in &self.factors {
            let phi = cyclotomic(*d);
            for _ in 0..*e {
                out = &out * &phi;
            }
        }
        out
    }
}

/// Exponent of `Phi_k` in `(q;q)_n` is `floor(n/k)`; of `Phi_(2k-1)` in
/// `(q;q^2)_n` it is `floor((n + k - 1)/(2k - 1))`.
pub fn pochhammer_factorization(n: usize, step: Step) -> PochhammerFactorization {
    let sign = if n % 2 == 0 { 1 } else { -1 };
    let factors = (1..=n)
        .map(|k| match step {
            Step::One => (k as u64, (n / k) as u32),
            Step::Two => ((2 * k - 1) as u64, ((n + k - 1) / (2 * k - 1)) as u32),
        })
        .collect();
    PochhammerFactorization {
        step: match step {
            Step::One => 1,
            Step::Two => 2,
        },
        sign,
        factors,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Divides,
    Fails,
    NotClaimed,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Divides => "divides",
            Verdict::Fails => "fails",
            Verdict::NotClaimed => "not-claimed",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DivisibilityRow {
    pub i: u64,
    #[serde(rename = "in_S")]
    pub in_s: bool,
    pub divisor: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quotient: Option<IntPoly>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DivisibilityReport {
    pub family: String,
    pub s: u64,
    #[serde(rename = "N")]
    pub n: usize,
    pub rows: Vec<DivisibilityRow>,
}

impl DivisibilityReport {
    pub fn row(&self, i: u64) -> Option<&DivisibilityRow> {
        self.rows.iter().find(|r| r.i == i)
    }
}

/// Dissects `partial_sum(family, N)` and divides every part by the
/// predicted Pochhammer. A failure outside `S` is an error carrying the
/// full report.
pub fn verify_theorem(family: &FamilySpec, chi: &Character, s: u64, n: usize) -> Result<DivisibilityReport> {
    check_inputs(family, chi, s)?;
    verify_partial_sum(&partial_sum(family, n), chi, s)
}

fn check_inputs(family: &FamilySpec, chi: &Character, s: u64) -> Result<()> {
    if s == 0 {
        return Err(Error::InvalidParam("modulus s must be positive".into()));
    }
    validate_character(chi).map_err(|e| Error::CharacterInvalid(Box::new(e)))?;
    if family.kernel() == Kernel::G && s % 2 == 0 {
        return Err(Error::OddModulusRequired(s));
    }
    Ok(())
}

/// As [`verify_theorem`], for an already computed partial sum.
pub fn verify_partial_sum(ps: &PartialSum, chi: &Character, s: u64) -> Result<DivisibilityReport> {
    check_inputs(&ps.family, chi, s)?;
    let kernel = ps.family.kernel();
    let index = match kernel {
        Kernel::F => lambda(ps.upper, s),
        Kernel::G => mu(ps.upper, 1, s),
    };
    let divisor = pochhammer(index, kernel.step());
    let symbol = kernel.symbol(index);
    let set = residue_set(chi, s);
    let parts = dissect(&ps.value, s);
    let rows: Vec<DivisibilityRow> = parts
        .parts
        .par_iter()
        .enumerate()
        .map(|(i, a)| {
            let in_s = set.contains(&(i as u64));
            let (verdict, quotient) = match a.exact_div(&divisor) {
                Ok(qt) => (Verdict::Divides, Some(qt)),
                Err(_) if in_s => (Verdict::NotClaimed, None),
                Err(_) => (Verdict::Fails, None),
            };
            DivisibilityRow {
                i: i as u64,
                in_s,
                divisor: symbol.clone(),
                verdict,
                quotient,
            }
        })
        .collect();
    let report = DivisibilityReport {
        family: ps.family.label().to_string(),
        s,
        n: ps.upper,
        rows,
    };
    if let Some(bad) = report.rows.iter().find(|r| r.verdict == Verdict::Fails) {
        return Err(Error::DivisibilityFalsified {
            i: bad.i,
            s,
            n: ps.upper,
            report: Box::new(report.clone()),
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qfamilies::partial_sums;
    use proptest::prelude::*;

    fn ip(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    #[test]
    fn dissect_examples() {
        let d = dissect(&ip(&[3, -2, -1, 1]), 2);
        assert_eq!(d.parts, vec![ip(&[3, -1]), ip(&[-2, 1])]);
        let p = ip(&[5, 0, 7, 1]);
        assert_eq!(dissect(&p, 1).parts, vec![p.clone()]);
        assert_eq!(dissect(&p, 9).reassemble(), p);
    }

    #[test]
    fn threshold_examples() {
        assert_eq!(thresholds(8, 5, 1), (1, 2));
        assert_eq!(thresholds(9, 5, 1).0, 2);
        assert_eq!(thresholds(9, 3, 2).1, 1);
    }

    /// `mu` against the real-valued definition with exact fractions.
    #[test]
    fn mu_matches_floor_definition() {
        for n in 0..60usize {
            for s in 1..10u64 {
                for k in 1..4u64 {
                    let d = (s * (2 * k - 1)) as f64;
                    let want = ((n as f64) / d + 0.5).floor() as usize;
                    assert_eq!(mu(n, k, s), want);
                }
            }
        }
    }

    #[test]
    fn residue_examples() {
        assert_eq!(residue_set(&Character::chi6(), 5), BTreeSet::from([0, 1, 3]));
        assert_eq!(residue_set(&Character::chi_hikami(2, 0).unwrap(), 3), BTreeSet::from([0, 1]));
        assert_eq!(residue_set(&Character::chi_hikami(2, 1).unwrap(), 3), BTreeSet::from([0, 2]));
        assert_eq!(residue_set(&Character::chi_kz(), 5), BTreeSet::from([0, 1, 2]));
    }

    /// Generalised pentagonal numbers `m(3m-1)/2` reduced mod `s`.
    #[test]
    fn kz_residues_are_pentagonal() {
        for s in 1..=15i64 {
            let want: BTreeSet<u64> = (-3 * s..=3 * s).map(|m| (m * (3 * m - 1) / 2).rem_euclid(s) as u64).collect();
            assert_eq!(residue_set(&Character::chi_kz(), s as u64), want, "s={s}");
        }
    }

    #[test]
    fn residue_sets_refine() {
        let chars = [Character::chi_kz(), Character::chi6(), Character::chi_hikami(2, 1).unwrap(), Character::chi_gk(3).unwrap()];
        for c in &chars {
            for s in 1..=8u64 {
                let base = residue_set(c, s);
                assert!(base.iter().all(|i| *i < s));
                for k in 1..=4u64 {
                    let image: BTreeSet<u64> = residue_set(c, k * s).into_iter().map(|i| i % s).collect();
                    assert_eq!(image, base, "{} s={s} k={k}", c.name());
                }
            }
        }
    }

    #[test]
    fn pochhammer_factorizations() {
        let f = pochhammer_factorization(3, Step::One);
        assert_eq!(f.exponents(), vec![3, 1, 1]);
        assert_eq!(f.sign, -1);
        let g = pochhammer_factorization(2, Step::Two);
        assert_eq!(g.factors, vec![(1, 2), (3, 1)]);
        let z = pochhammer_factorization(0, Step::Two);
        assert_eq!((z.sign, z.factors.len()), (1, 0));
        for n in 0..=14 {
            for step in [Step::One, Step::Two] {
                assert_eq!(pochhammer_factorization(n, step).expand(), pochhammer(n, step), "n={n}");
            }
        }
    }

    #[test]
    fn kz_example() {
        let r = verify_theorem(&FamilySpec::kz(), &Character::chi_kz(), 5, 9).unwrap();
        for i in [3, 4] {
            let row = r.row(i).unwrap();
            assert!(!row.in_s);
            assert_eq!(row.verdict, Verdict::Divides);
            assert_eq!(row.divisor, "(q;q)_2");
        }
    }

    #[test]
    fn gk1_example() {
        let r = verify_theorem(&FamilySpec::gk(1).unwrap(), &Character::chi6(), 5, 8).unwrap();
        for i in [2, 4] {
            assert_eq!(r.row(i).unwrap().verdict, Verdict::Divides);
            assert_eq!(r.row(i).unwrap().divisor, "(q;q2)_2");
        }
        // the i = 0 part has a single factor 1 - q
        assert_eq!(r.row(0).unwrap().verdict, Verdict::NotClaimed);
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["family"], "gk:k=1");
        assert_eq!(json["N"], 8);
        assert_eq!(json["rows"][2]["in_S"], false);
        assert_eq!(json["rows"][2]["verdict"], "divides");
        assert!(json["rows"][2]["quotient"]["coeffs"].is_array());
    }

    #[test]
    fn hikami_example_and_control() {
        let f = FamilySpec::hikami(2, 0).unwrap();
        let r = verify_theorem(&f, &Character::chi_hikami(2, 0).unwrap(), 3, 8).unwrap();
        assert_eq!(r.row(2).unwrap().verdict, Verdict::Divides);
        assert_eq!(r.row(2).unwrap().divisor, "(q;q)_3");
        assert_eq!(r.row(1).unwrap().verdict, Verdict::NotClaimed);
    }

    #[test]
    fn input_errors() {
        let g = FamilySpec::gk(1).unwrap();
        assert!(matches!(verify_theorem(&g, &Character::chi6(), 4, 8), Err(Error::OddModulusRequired(4))));
        let bad = Character::new(1, 3, 0, 6, [(3, num_rational::BigRational::from_integer(1.into()))]).unwrap();
        assert!(matches!(verify_theorem(&g, &bad, 5, 8), Err(Error::CharacterInvalid(_))));
    }

    /// The wrong character claims too much and the run is reported as a
    /// falsification rather than a row.
    #[test]
    fn wrong_character_is_falsified() {
        let f = FamilySpec::kz();
        // exponents n^2 are all 0 mod 5 on the support, so S = {0}
        let one = num_rational::BigRational::from_integer(1.into());
        let wide = Character::new(0, 1, 0, 10, [(0, one.clone()), (5, -one)]).unwrap();
        assert_eq!(residue_set(&wide, 5), BTreeSet::from([0]));
        let mut hit = false;
        for n in 5..15 {
            if let Err(Error::DivisibilityFalsified { report, .. }) = verify_theorem(&f, &wide, 5, n) {
                assert!(report.rows.iter().any(|r| r.verdict == Verdict::Fails));
                hit = true;
            }
        }
        assert!(hit);
    }

    #[test]
    fn f_type_sweep() {
        let fams: Vec<(FamilySpec, Character)> = vec![
            (FamilySpec::kz(), Character::chi_kz()),
            (FamilySpec::hikami(1, 0).unwrap(), Character::chi_hikami(1, 0).unwrap()),
            (FamilySpec::hikami(2, 0).unwrap(), Character::chi_hikami(2, 0).unwrap()),
            (FamilySpec::hikami(2, 1).unwrap(), Character::chi_hikami(2, 1).unwrap()),
        ];
        fams.par_iter().for_each(|(f, c)| {
            for ps in partial_sums(f, 30) {
                for s in 1..=7 {
                    verify_partial_sum(&ps, c, s).unwrap_or_else(|e| panic!("{} s={s} N={}: {e}", f.label(), ps.upper));
                }
            }
        });
    }

    #[test]
    fn g_type_sweep() {
        (1..=3usize).into_par_iter().for_each(|k| {
            let f = FamilySpec::gk(k).unwrap();
            let c = Character::chi_gk(k as u64).unwrap();
            for ps in partial_sums(&f, 30) {
                for s in [1, 3, 5, 7, 9] {
                    verify_partial_sum(&ps, &c, s).unwrap_or_else(|e| panic!("gk:k={k} s={s} N={}: {e}", ps.upper));
                }
            }
        });
    }

    proptest! {
        #[test]
        fn reassembly_roundtrip(coeffs in proptest::collection::vec(-1000i64..1000, 0..80), s in 1u64..=12) {
            let p = IntPoly::from_i64s(&coeffs);
            prop_assert_eq!(dissect(&p, s).reassemble(), p);
        }
    }
}
