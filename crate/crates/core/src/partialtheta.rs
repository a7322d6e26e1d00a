//! Characters and partial theta functions
//! `P(q) = sum_{n >= 0} n^nu chi(n) q^((n^2 - a)/b)`.
//!
//! The asymptotic coefficients `gamma_n(zeta)` of `P(zeta e^-t)` are built
//! from the special values `L(-n, C)` of the twisted periodic sequence
//! `C(n) = zeta^((n^2 - a)/b) chi(n)`, which are exact elements of
//! `Q(zeta_k)` given by the Bernoulli polynomial formula.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cyclofield::CycloNum;
use crate::error::{Error, Result};
use crate::exactpoly::{parse_rational, RatPoly};
use crate::qfamilies::{FamilySpec, Generator};

/// A periodic weight `chi` together with the quadratic exponent data
/// `(a, b)` and the power `nu` of `n` in the theta series.
#[derive(Clone, Debug, PartialEq)]
pub struct Character {
    a: u64,
    b: u64,
    nu: u8,
    period: u64,
    values: BTreeMap<u64, BigRational>,
    name: String,
}

#[derive(Serialize, Deserialize)]
struct CharacterWire {
    a: u64,
    b: u64,
    nu: u8,
    period: u64,
    values: BTreeMap<String, String>,
}

impl Serialize for Character {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        CharacterWire {
            a: self.a,
            b: self.b,
            nu: self.nu,
            period: self.period,
            values: self
                .values
                .iter()
                .map(|(r, v)| (r.to_string(), v.to_string()))
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Character {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let w = CharacterWire::deserialize(deserializer)?;
        let mut values = Vec::with_capacity(w.values.len());
        for (r, v) in &w.values {
            let r: u64 = r
                .trim()
                .parse()
                .map_err(|_| D::Error::custom(format!("residue {r:?} is not a nonnegative integer")))?;
            values.push((r, parse_rational(v).map_err(D::Error::custom)?));
        }
        Character::new(w.a, w.b, w.nu, w.period, values).map_err(D::Error::custom)
    }
}

impl Character {
    /// Builds a character from `(residue, value)` pairs; residues are
    /// reduced modulo the period. No admissibility check is made here, see
    /// [`validate_character`].
    pub fn new(
        a: u64,
        b: u64,
        nu: u8,
        period: u64,
        values: impl IntoIterator<Item = (u64, BigRational)>,
    ) -> Result<Self> {
        if b == 0 {
            return Err(Error::InvalidParam("b must be positive".into()));
        }
        if period == 0 {
            return Err(Error::InvalidParam("period must be positive".into()));
        }
        if nu > 1 {
            return Err(Error::InvalidParam(format!("nu must be 0 or 1, got {nu}")));
        }
        let mut map = BTreeMap::new();
        for (r, v) in values {
            let r = r % period;
            if map.insert(r, v).is_some() {
                return Err(Error::InvalidParam(format!("residue {r} given twice")));
            }
        }
        map.retain(|_, v| !v.is_zero());
        Ok(Character {
            a,
            b,
            nu,
            period,
            values: map,
            name: "inline".into(),
        })
    }

    fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn a(&self) -> u64 {
        self.a
    }
    pub fn b(&self) -> u64 {
        self.b
    }
    pub fn nu(&self) -> u8 {
        self.nu
    }
    pub fn period(&self) -> u64 {
        self.period
    }
    pub fn name(&self) -> &str {
        &self.name
    }

    /// `chi(n)` for any integer `n`.
    pub fn value(&self, n: i64) -> BigRational {
        let r = n.rem_euclid(self.period as i64) as u64;
        self.values.get(&r).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Nonzero residues with their values.
    pub fn support(&self) -> impl Iterator<Item = (u64, &BigRational)> {
        self.values.iter().map(|(r, v)| (*r, v))
    }

    /// `(n^2 - a)/b`, when it is an integer.
    pub fn exponent(&self, n: i64) -> Option<i64> {
        let num = n as i128 * n as i128 - self.a as i128;
        let b = self.b as i128;
        (num % b == 0).then(|| (num / b) as i64)
    }

    /// The Kontsevich-Zagier weight `-(1/2) (12/n)` with `a = 1, b = 24, nu = 1`.
    pub fn chi_kz() -> Self {
        let h = BigRational::new(1.into(), 2.into());
        Character::new(1, 24, 1, 12, [(1, -&h), (11, -&h), (5, h.clone()), (7, h)])
            .expect("valid built-in")
            .with_name("chi_kz")
    }

    /// `chi_6`: `+1` at `n = 1, 2`, `-1` at `n = 4, 5 (mod 6)`; `a = 1, b = 3, nu = 0`.
    pub fn chi6() -> Self {
        Character::new(1, 3, 0, 6, [(1, r(1)), (2, r(1)), (4, r(-1)), (5, r(-1))])
            .expect("valid built-in")
            .with_name("chi6")
    }

    /// `chi_(8m+4)^(alpha)` paired with `a = (2m - 2alpha - 1)^2`, `b = 8(2m+1)`, `nu = 1`.
    pub fn chi_hikami(m: u64, alpha: u64) -> Result<Self> {
        if m < 1 || alpha >= m {
            return Err(Error::InvalidParam(format!(
                "chi_hikami needs m >= 1 and alpha < m, got m = {m}, alpha = {alpha}"
            )));
        }
        let h = BigRational::new(1.into(), 2.into());
        let t = 8 * m + 4;
        let c = 2 * m - 2 * alpha - 1;
        let values = [
            (c, -&h),
            (6 * m + 2 * alpha + 5, -&h),
            (2 * m + 2 * alpha + 3, h.clone()),
            (6 * m - 2 * alpha + 1, h),
        ];
        Ok(Character::new(c * c, 8 * (2 * m + 1), 1, t, values)?
            .with_name(format!("chi_hikami:m={m},alpha={alpha}")))
    }

    /// `chi_(4k+2)`: `+1` at `n = k, k+1`, `-1` at `n = -k, -k-1 (mod 4k+2)`;
    /// `a = k^2, b = 2k+1, nu = 0`. `k = 1` gives `chi_6`.
    pub fn chi_gk(k: u64) -> Result<Self> {
        if k < 1 {
            return Err(Error::InvalidParam(format!("chi_gk needs k >= 1, got {k}")));
        }
        let t = 4 * k + 2;
        let values = [(k, r(1)), (k + 1, r(1)), (t - k, r(-1)), (t - k - 1, r(-1))];
        Ok(Character::new(k * k, 2 * k + 1, 0, t, values)?.with_name(format!("chi_gk:k={k}")))
    }
}

/// The character whose theta function shares its expansions with a
/// built-in family, if any.
pub fn paired_character(family: &FamilySpec) -> Option<Character> {
    match family.generator() {
        Generator::KontsevichZagier => Some(Character::chi_kz()),
        Generator::Hikami { m, alpha } => Character::chi_hikami(*m as u64, *alpha as u64).ok(),
        Generator::Gk { k } => Character::chi_gk(*k as u64).ok(),
        Generator::Explicit(_) => None,
    }
}

fn r(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn named_params(body: &str, keys: &[&str]) -> Result<Vec<u64>> {
    let mut found: HashMap<&str, u64> = HashMap::new();
    for part in body.split([',', ' ']).filter(|p| !p.trim().is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected key=value, got {part:?}")))?;
        let key = keys
            .iter()
            .find(|c| **c == k.trim())
            .ok_or_else(|| Error::Parse(format!("unknown parameter {k}")))?;
        let v = v
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("parameter {k} is not a nonnegative integer")))?;
        found.insert(key, v);
    }
    keys.iter()
        .map(|k| found.get(k).copied().ok_or_else(|| Error::Parse(format!("missing parameter {k}"))))
        .collect()
}

/// Resolves a built-in name (`chi_kz`, `chi6`, `chi_hikami:m=..,alpha=..`,
/// `chi_gk:k=..`), an inline JSON object, or a path to a JSON file.
pub fn parse_character(spec: &str) -> Result<Character> {
    let s = spec.trim();
    if s.starts_with('{') {
        return serde_json::from_str(s).map_err(|e| Error::Parse(format!("character JSON: {e}")));
    }
    let (name, body) = s.split_once(':').unwrap_or((s, ""));
    match name {
        "chi_kz" if body.is_empty() => return Ok(Character::chi_kz()),
        "chi6" if body.is_empty() => return Ok(Character::chi6()),
        "chi_hikami" => {
            let v = named_params(body, &["m", "alpha"])?;
            return Character::chi_hikami(v[0], v[1]);
        }
        "chi_gk" => {
            let v = named_params(body, &["k"])?;
            return Character::chi_gk(v[0]);
        }
        _ => {}
    }
    let path = Path::new(s);
    if path.is_file() {
        let text = std::fs::read_to_string(path)?;
        let c: Character =
            serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        return Ok(c.with_name(s));
    }
    Err(Error::Parse(format!("unknown character {spec:?}")))
}

/// Checks that `chi(n) != 0` forces `b | n^2 - a` and that `chi` has mean
/// zero over a period.
pub fn validate_character(chi: &Character) -> Result<Character> {
    let window = chi.period.lcm(&chi.b);
    for n in 0..window {
        if !chi.value(n as i64).is_zero() && chi.exponent(n as i64).is_none() {
            return Err(Error::IntegralityViolation { n });
        }
    }
    let mean: BigRational = chi.values.values().sum();
    if !mean.is_zero() {
        return Err(Error::MeanValueNonzero);
    }
    Ok(chi.clone())
}

/// The sequence `C(n) = zeta^((n^2 - a)/b) chi(n)` with `zeta = zeta_k^j`.
#[derive(Clone, Debug, PartialEq)]
pub struct TwistedSeq {
    k: u64,
    j: u64,
    period: u64,
    /// `table[n % period]`
    table: Vec<CycloNum>,
}

/// Builds `C` for `zeta = zeta_k^j` with period `lcm(T, b k)`, re-checking
/// periodicity over a second window and the vanishing of the mean.
pub fn twisted_sequence(chi: &Character, k: u64, j: u64) -> Result<TwistedSeq> {
    if k == 0 {
        return Err(Error::InvalidParam("root of unity order must be positive".into()));
    }
    let j = j % k;
    let period = chi.period.lcm(&(chi.b * k));
    let entry = |n: u64| -> Result<CycloNum> {
        let v = chi.value(n as i64);
        if v.is_zero() {
            return Ok(CycloNum::zero(k));
        }
        let e = chi
            .exponent(n as i64)
            .ok_or(Error::IntegralityViolation { n: n % chi.period })?;
        let e = (e as i128 * j as i128).rem_euclid(k as i128) as i64;
        Ok(CycloNum::zeta_pow(k, e).scale(&v))
    };
    let table = (0..period).map(entry).collect::<Result<Vec<_>>>()?;
    for n in 0..period {
        if entry(n + period)? != table[n as usize] {
            return Err(Error::InvalidParam(format!(
                "twisted sequence is not {period}-periodic at n = {n}"
            )));
        }
    }
    TwistedSeq::from_table(k, j, table)
}

impl TwistedSeq {
    /// A sequence from explicit values over one period (position `i` holds
    /// `C(i)`, equivalently `C(i + P)`); rejects nonzero mean.
    pub fn from_table(k: u64, j: u64, table: Vec<CycloNum>) -> Result<Self> {
        if table.is_empty() {
            return Err(Error::InvalidParam("empty period".into()));
        }
        if let Some(bad) = table.iter().find(|c| c.conductor() != k) {
            return Err(Error::ConductorMismatch {
                left: k,
                right: bad.conductor(),
            });
        }
        let mut sum = CycloNum::zero(k);
        for c in &table {
            sum.add_assign_ref(c);
        }
        if !sum.is_zero() {
            return Err(Error::MeanValueNonzero);
        }
        Ok(TwistedSeq {
            k,
            j,
            period: table.len() as u64,
            table,
        })
    }

    pub fn conductor(&self) -> u64 {
        self.k
    }
    pub fn power(&self) -> u64 {
        self.j
    }
    pub fn period(&self) -> u64 {
        self.period
    }

    pub fn at(&self, n: u64) -> &CycloNum {
        &self.table[(n % self.period) as usize]
    }

    /// The same sequence viewed with period `times * P`.
    pub fn with_period_multiple(&self, times: u64) -> Self {
        assert!(times >= 1);
        let table = (0..self.period * times).map(|n| self.at(n).clone()).collect();
        TwistedSeq {
            k: self.k,
            j: self.j,
            period: self.period * times,
            table,
        }
    }
}

fn binomial_row(n: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for i in 0..n {
        let next = &row[i] * BigInt::from(n - i) / BigInt::from(i + 1);
        row.push(next);
    }
    row
}

/// Bernoulli numbers with `B_1 = -1/2`.
fn bernoulli_numbers(upto: usize) -> Vec<BigRational> {
    static CACHE: OnceLock<RwLock<Vec<BigRational>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(vec![BigRational::one()]));
    {
        let b = cache.read().unwrap();
        if b.len() > upto {
            return b[..=upto].to_vec();
        }
    }
    let mut b = cache.write().unwrap();
    while b.len() <= upto {
        // sum_{i<=m} C(m+1, i) B_i = 0
        let m = b.len();
        let row = binomial_row(m + 1);
        let s: BigRational = (0..m)
            .map(|i| &b[i] * BigRational::from_integer(row[i].clone()))
            .sum();
        b.push(-s / BigRational::from_integer(row[m].clone()));
    }
    b[..=upto].to_vec()
}

/// `B_n(x) = sum_i C(n, i) B_i x^(n - i)`.
pub fn bernoulli_poly(n: usize) -> RatPoly {
    let nums = bernoulli_numbers(n);
    let row = binomial_row(n);
    let mut coeffs = vec![BigRational::zero(); n + 1];
    for i in 0..=n {
        coeffs[n - i] = &nums[i] * BigRational::from_integer(row[i].clone());
    }
    RatPoly::from_rationals(coeffs)
}

/// `L(-n, C) = -(P^n / (n+1)) sum_{m=1}^{P} C(m) B_(n+1)(m/P)`.
pub fn l_value(seq: &TwistedSeq, n: usize) -> CycloNum {
    let p = seq.period;
    let bern = bernoulli_poly(n + 1);
    let pr = BigRational::from_integer(BigInt::from(p));
    let mut acc = CycloNum::zero(seq.k);
    for m in 1..=p {
        let c = seq.at(m);
        if c.is_zero() {
            continue;
        }
        let x = BigRational::new(BigInt::from(m), BigInt::from(p));
        acc.add_assign_ref(&c.scale(&bern.eval_rational(&x)));
    }
    let factor = -num_traits::pow(pr, n) / BigRational::from_integer(BigInt::from(n + 1));
    acc.scale(&factor)
}

/// `gamma_0(zeta), ..., gamma_depth(zeta)` for `zeta = zeta_k^j`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GammaCoeffs {
    pub character: String,
    pub k: u64,
    pub j: u64,
    pub coeffs: Vec<CycloNum>,
}

fn factorial(n: usize) -> BigInt {
    (1..=n).map(BigInt::from).product()
}

/// All `gamma_n`, `n <= depth`, as the Cauchy product of `exp(a t / b)` with
/// `sum (-1)^n / (b^n n!) L(-2n - nu, C) t^n`.
pub fn gamma_coeffs(chi: &Character, k: u64, j: u64, depth: usize) -> Result<GammaCoeffs> {
    let seq = twisted_sequence(chi, k, j)?;
    let b = BigInt::from(chi.b);
    let ab = BigRational::new(BigInt::from(chi.a), b.clone());
    let lterms: Vec<CycloNum> = (0..=depth)
        .map(|r| {
            let l = l_value(&seq, 2 * r + chi.nu as usize);
            let mut c = BigRational::new(BigInt::one(), num_traits::pow(b.clone(), r) * factorial(r));
            if r % 2 == 1 {
                c = -c;
            }
            l.scale(&c)
        })
        .collect();
    let mut coeffs = Vec::with_capacity(depth + 1);
    for n in 0..=depth {
        let mut g = CycloNum::zero(k);
        for (rr, lt) in lterms.iter().enumerate().take(n + 1) {
            let e = n - rr;
            let w = num_traits::pow(ab.clone(), e) / BigRational::from_integer(factorial(e));
            g.add_assign_ref(&lt.scale(&w));
        }
        coeffs.push(g);
    }
    Ok(GammaCoeffs {
        character: chi.name.clone(),
        k,
        j: j % k,
        coeffs,
    })
}

pub fn gamma_coeff(chi: &Character, k: u64, j: u64, n: usize) -> Result<CycloNum> {
    Ok(gamma_coeffs(chi, k, j, n)?.coeffs.pop().expect("nonempty"))
}

/// `sum chi(n) q^((n^2 - a)/b)` over exponents `<= cap`; only for `nu = 0`.
pub fn theta_truncated(chi: &Character, cap: usize) -> Result<RatPoly> {
    if chi.nu != 0 {
        return Err(Error::InvalidParam(
            "truncated theta series is only defined here for nu = 0".into(),
        ));
    }
    let mut coeffs = vec![BigRational::zero(); cap + 1];
    let bound = chi.a as u128 + chi.b as u128 * cap as u128;
    let mut n: u64 = 0;
    while (n as u128) * (n as u128) <= bound {
        let v = chi.value(n as i64);
        if !v.is_zero() {
            let e = chi
                .exponent(n as i64)
                .ok_or(Error::IntegralityViolation { n: n % chi.period })?;
            if e < 0 {
                return Err(Error::InvalidParam(format!("negative exponent at n = {n}")));
            }
            coeffs[e as usize] += v;
        }
        n += 1;
    }
    Ok(RatPoly::from_rationals(coeffs))
}

/// `true` when every coefficient of a rational polynomial is an integer.
pub fn is_integral(p: &RatPoly) -> bool {
    p.coeffs().iter().all(|c| c.is_integer())
}
