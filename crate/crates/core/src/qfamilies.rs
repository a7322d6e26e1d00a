//! Habiro-type families `F(q) = sum f_n(q) (q;q)_n` and
//! `G(q) = sum g_n(q) (q;q^2)_n`, their term polynomials and partial sums.
//!
//! Built-in families:
//!
//! - `kz`: the Kontsevich-Zagier series, `f_n = 1`.
//! - `hikami:m=<m>,alpha=<a>`: Hikami's generalisation `X_m^(a)`; `f_n` is
//!   the finite sum over `k_1..k_(m-1)` with `k_m = n`.
//! - `gk:k=<k>`: the G-type family `G_k`; `gk:k=1` is `sum (q;q^2)_n q^n`.
//! - inline JSON `{"kernel":"F","terms":[{"coeffs":[...]}, ...]}` listing
//!   `f_0..f_N` explicitly (terms past the list are zero).
//!
//! Term polynomials are produced by [`TermStream`], which walks `n` upward
//! and works over any [`Ring`], so the same generators feed exact partial
//! sums and the modular Fishburn computations.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactpoly::{IntPoly, Integers, Poly, Ring, Step};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Kernel {
    /// `(q;q)_n`
    F,
    /// `(q;q^2)_n`
    G,
}

impl Kernel {
    pub fn step(self) -> Step {
        match self {
            Kernel::F => Step::One,
            Kernel::G => Step::Two,
        }
    }

    /// Printable name of the kernel at index `n`, e.g. `(q;q2)_2`.
    pub fn symbol(self, n: usize) -> String {
        match self {
            Kernel::F => format!("(q;q)_{n}"),
            Kernel::G => format!("(q;q2)_{n}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Generator {
    KontsevichZagier,
    Hikami { m: usize, alpha: usize },
    Gk { k: usize },
    Explicit(Vec<IntPoly>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct FamilySpec {
    kernel: Kernel,
    generator: Generator,
    label: String,
}

#[derive(Deserialize)]
struct InlineFamily {
    kernel: Kernel,
    terms: Vec<IntPoly>,
}

impl FamilySpec {
    pub fn kz() -> Self {
        FamilySpec {
            kernel: Kernel::F,
            generator: Generator::KontsevichZagier,
            label: "kz".into(),
        }
    }

    pub fn hikami(m: usize, alpha: usize) -> Result<Self> {
        if m < 1 {
            return Err(Error::InvalidParam(format!("hikami needs m >= 1, got m = {m}")));
        }
        if alpha >= m {
            return Err(Error::InvalidParam(format!(
                "hikami needs alpha in 0..={}, got alpha = {alpha}",
                m - 1
            )));
        }
        Ok(FamilySpec {
            kernel: Kernel::F,
            generator: Generator::Hikami { m, alpha },
            label: format!("hikami:m={m},alpha={alpha}"),
        })
    }

    pub fn gk(k: usize) -> Result<Self> {
        if k < 1 {
            return Err(Error::InvalidParam(format!("gk needs k >= 1, got k = {k}")));
        }
        Ok(FamilySpec {
            kernel: Kernel::G,
            generator: Generator::Gk { k },
            label: format!("gk:k={k}"),
        })
    }

    pub fn explicit(kernel: Kernel, terms: Vec<IntPoly>) -> Self {
        FamilySpec {
            kernel,
            generator: Generator::Explicit(terms),
            label: "inline".into(),
        }
    }

    pub fn kernel(&self) -> Kernel {
        self.kernel
    }

    pub fn generator(&self) -> &Generator {
        &self.generator
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// A string that determines the family completely (the label, or the
    /// full JSON for inline families).
    pub fn descriptor(&self) -> String {
        match &self.generator {
            Generator::Explicit(terms) => {
                let kernel = match self.kernel {
                    Kernel::F => "F",
                    Kernel::G => "G",
                };
                let terms = serde_json::to_string(terms).expect("polynomials serialize");
                format!(r#"{{"kernel":"{kernel}","terms":{terms}}}"#)
            }
            _ => self.label.clone(),
        }
    }

    /// `(q;q)_n` or `(q;q^2)_n`.
    pub fn kernel_poly(&self, n: usize) -> IntPoly {
        crate::exactpoly::pochhammer(n, self.kernel.step())
    }

    pub fn terms_in<R: Ring>(&self, ring: R) -> TermStream<'_, R> {
        TermStream::new(self, ring)
    }

    /// `f_n(q)` (F-type) or `g_n(q)` (G-type).
    pub fn term_poly(&self, n: usize) -> IntPoly {
        term_poly(self, n)
    }
}

fn parse_params(body: &str) -> Result<HashMap<String, usize>> {
    let mut out = HashMap::new();
    for part in body.split([',', ' ']).filter(|p| !p.trim().is_empty()) {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected key=value, got {part:?}")))?;
        let value: usize = value
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("parameter {key} is not a nonnegative integer: {value:?}")))?;
        if out.insert(key.trim().to_string(), value).is_some() {
            return Err(Error::Parse(format!("parameter {key} given twice")));
        }
    }
    Ok(out)
}

fn take_params(body: &str, keys: &[&str]) -> Result<Vec<usize>> {
    let mut params = parse_params(body)?;
    let vals = keys
        .iter()
        .map(|k| {
            params
                .remove(*k)
                .ok_or_else(|| Error::Parse(format!("missing parameter {k}")))
        })
        .collect::<Result<Vec<_>>>()?;
    if let Some(extra) = params.keys().next() {
        return Err(Error::Parse(format!("unknown parameter {extra}")));
    }
    Ok(vals)
}

/// Parses `kz`, `hikami:m=<m>,alpha=<a>`, `gk:k=<k>` or an inline JSON family.
pub fn parse_family(descriptor: &str) -> Result<FamilySpec> {
    let d = descriptor.trim();
    if d.starts_with('{') {
        let inline: InlineFamily =
            serde_json::from_str(d).map_err(|e| Error::Parse(format!("inline family: {e}")))?;
        return Ok(FamilySpec::explicit(inline.kernel, inline.terms));
    }
    let (name, body) = d.split_once(':').unwrap_or((d, ""));
    match name.trim() {
        "kz" if body.trim().is_empty() => Ok(FamilySpec::kz()),
        "hikami" => {
            let v = take_params(body, &["m", "alpha"])?;
            FamilySpec::hikami(v[0], v[1])
        }
        "gk" => {
            let v = take_params(body, &["k"])?;
            FamilySpec::gk(v[0])
        }
        _ => Err(Error::Parse(format!("unknown family descriptor {descriptor:?}"))),
    }
}

/// Pascal triangle of Gaussian binomials `[n choose j]_q`, grown lazily.
struct BinomialTable<R: Ring> {
    ring: R,
    rows: Vec<Vec<Poly<R>>>,
}

impl<R: Ring> BinomialTable<R> {
    fn new(ring: R) -> Self {
        BinomialTable {
            rows: vec![vec![Poly::one(ring.clone())]],
            ring,
        }
    }

    fn ensure(&mut self, n: usize) {
        while self.rows.len() <= n {
            let prev = self.rows.last().unwrap();
            let m = prev.len();
            let mut row = Vec::with_capacity(m + 1);
            row.push(Poly::one(self.ring.clone()));
            for j in 1..m {
                // [m, j] = [m-1, j-1] + q^j [m-1, j]
                let mut b = prev[j - 1].clone();
                b.add_assign_ref(&prev[j].shift(j));
                row.push(b);
            }
            row.push(Poly::one(self.ring.clone()));
            self.rows.push(row);
        }
    }

    fn get(&self, n: usize, j: usize) -> Option<&Poly<R>> {
        self.rows[n].get(j)
    }
}

struct GkState<R: Ring> {
    k: usize,
    /// `[m choose j]_{q^2}` for the current `m`, stored in the variable `q^2`.
    row: Vec<Vec<R::Elem>>,
    /// `lower[l][j]` is the level-`(l + 2)` inner sum at index `j`.
    lower: Vec<Vec<Poly<R>>>,
}

enum StreamState<R: Ring> {
    Unit,
    Explicit,
    Hikami { m: usize, alpha: usize, table: BinomialTable<R> },
    Gk(GkState<R>),
}

/// Yields `f_0, f_1, ...` (or `g_0, g_1, ...`) over the ring `R`.
pub struct TermStream<'a, R: Ring> {
    family: &'a FamilySpec,
    ring: R,
    next: usize,
    state: StreamState<R>,
}

impl<'a, R: Ring> TermStream<'a, R> {
    fn new(family: &'a FamilySpec, ring: R) -> Self {
        let state = match family.generator {
            Generator::KontsevichZagier => StreamState::Unit,
            Generator::Explicit(_) => StreamState::Explicit,
            Generator::Hikami { m, alpha } => StreamState::Hikami {
                m,
                alpha,
                table: BinomialTable::new(ring.clone()),
            },
            Generator::Gk { k } => StreamState::Gk(GkState {
                k,
                row: Vec::new(),
                lower: vec![Vec::new(); k.saturating_sub(2)],
            }),
        };
        TermStream {
            family,
            ring,
            next: 0,
            state,
        }
    }

    fn hikami_term(
        ring: &R,
        table: &mut BinomialTable<R>,
        m: usize,
        alpha: usize,
        n: usize,
    ) -> Poly<R> {
        table.ensure(n + 1);
        let mut out = Poly::zero(ring.clone());
        // Walk i = m-1 down to 1 choosing k_i given k_(i+1).
        #[allow(clippy::too_many_arguments)]
        fn walk<R: Ring>(
            table: &BinomialTable<R>,
            out: &mut Poly<R>,
            alpha: usize,
            i: usize,
            upper: usize,
            acc: Option<Poly<R>>,
            exp: usize,
        ) {
            if i == 0 {
                let one = table.ring.one();
                match acc {
                    Some(p) => out.add_scaled_shifted(&p, &one, exp),
                    None => out.add_scaled_shifted(&Poly::one(table.ring.clone()), &one, exp),
                }
                return;
            }
            let top = if i == alpha { upper + 1 } else { upper };
            for ki in 0..=top {
                let Some(b) = table.get(top, ki) else { continue };
                let next = match &acc {
                    Some(p) => p * b,
                    None => b.clone(),
                };
                let lin = if i > alpha { ki } else { 0 };
                walk(table, out, alpha, i - 1, ki, Some(next), exp + ki * ki + lin);
            }
        }
        walk(table, &mut out, alpha, m - 1, n, None, 0);
        out
    }

    fn gk_term(ring: &R, st: &mut GkState<R>, n: usize) -> Poly<R> {
        if st.k == 1 {
            return Poly::monomial(ring.clone(), ring.one(), n);
        }
        // advance the q^2-binomial row to m = n
        if n == 0 {
            st.row = vec![vec![ring.one()]];
        } else {
            let prev = std::mem::take(&mut st.row);
            let mut row = Vec::with_capacity(n + 1);
            row.push(vec![ring.one()]);
            for j in 1..n {
                let (a, b) = (&prev[j - 1], &prev[j]);
                let mut c = vec![ring.zero(); a.len().max(b.len() + j)];
                for (t, x) in a.iter().enumerate() {
                    ring.add_assign(&mut c[t], x);
                }
                for (t, x) in b.iter().enumerate() {
                    ring.add_assign(&mut c[t + j], x);
                }
                row.push(c);
            }
            row.push(vec![ring.one()]);
            st.row = row;
        }
        let k = st.k;
        // level 2: sum_j q^(2j^2+2j) [n, j]_{q^2}
        let mut level = {
            let len = (0..=n)
                .map(|j| 2 * j * j + 2 * j + 2 * (st.row[j].len() - 1) + 1)
                .max()
                .unwrap();
            let mut c = vec![ring.zero(); len];
            for j in 0..=n {
                let base = 2 * j * j + 2 * j;
                for (t, x) in st.row[j].iter().enumerate() {
                    ring.add_assign(&mut c[base + 2 * t], x);
                }
            }
            Poly::from_coeffs(ring.clone(), c)
        };
        for lvl in 3..=k {
            st.lower[lvl - 3].push(level);
            let mut acc = Poly::zero(ring.clone());
            for j in 0..=n {
                let b = Poly::from_coeffs(ring.clone(), st.row[j].clone()).spread(2);
                let prod = &b * &st.lower[lvl - 3][j];
                acc.add_scaled_shifted(&prod, &ring.one(), 2 * j * j + 2 * j);
            }
            level = acc;
        }
        level.shift(n)
    }
}

impl<R: Ring> Iterator for TermStream<'_, R> {
    type Item = Poly<R>;

    fn next(&mut self) -> Option<Poly<R>> {
        let n = self.next;
        self.next += 1;
        let ring = &self.ring;
        let term = match &mut self.state {
            StreamState::Unit => Poly::one(ring.clone()),
            StreamState::Explicit => match &self.family.generator {
                Generator::Explicit(terms) => match terms.get(n) {
                    Some(t) => t.map_ring(ring.clone(), |c| ring.from_bigint(c)),
                    None => Poly::zero(ring.clone()),
                },
                _ => unreachable!(),
            },
            StreamState::Hikami { m, alpha, table } => Self::hikami_term(ring, table, *m, *alpha, n),
            StreamState::Gk(st) => Self::gk_term(ring, st, n),
        };
        Some(term)
    }
}

/// The coefficient polynomial `f_n` (or `g_n`) of the family.
pub fn term_poly(family: &FamilySpec, n: usize) -> IntPoly {
    match &family.generator {
        Generator::KontsevichZagier => IntPoly::one(Integers),
        Generator::Explicit(terms) => terms.get(n).cloned().unwrap_or_else(|| IntPoly::zero(Integers)),
        _ => family.terms_in(Integers).nth(n).expect("term stream is infinite"),
    }
}

/// `F(q;N)` or `G(q;N)` together with the family that produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct PartialSum {
    pub family: FamilySpec,
    pub upper: usize,
    pub value: IntPoly,
}

/// `sum_{n <= upper} term_n * kernel_n` over any ring, by Horner's rule
/// from the top: `acc <- term_n + (1 - q^e(n+1)) acc`.
pub fn partial_sum_in<R: Ring>(family: &FamilySpec, ring: R, upper: usize) -> Poly<R> {
    let terms: Vec<Poly<R>> = family.terms_in(ring).take(upper + 1).collect();
    let step = family.kernel.step();
    let mut iter = terms.into_iter().enumerate().rev();
    let (_, mut acc) = iter.next().expect("at least one term");
    for (n, t) in iter {
        acc.mul_one_minus_q_pow_assign(step.factor_exponent(n + 1));
        acc.add_assign_ref(&t);
    }
    acc
}

pub fn partial_sum(family: &FamilySpec, upper: usize) -> PartialSum {
    PartialSum {
        family: family.clone(),
        upper,
        value: partial_sum_in(family, Integers, upper),
    }
}

/// Every partial sum `N = 0..=upper`, accumulated forward.
pub fn partial_sums(family: &FamilySpec, upper: usize) -> Vec<PartialSum> {
    let step = family.kernel.step();
    let mut kernel = IntPoly::one(Integers);
    let mut acc = IntPoly::zero(Integers);
    let mut out = Vec::with_capacity(upper + 1);
    for (n, t) in family.terms_in(Integers).take(upper + 1).enumerate() {
        if n > 0 {
            kernel.mul_one_minus_q_pow_assign(step.factor_exponent(n));
        }
        acc.add_assign_ref(&(&t * &kernel));
        out.push(PartialSum {
            family: family.clone(),
            upper: n,
            value: acc.clone(),
        });
    }
    out
}

/// Session cache of partial sums keyed by `(descriptor, N)`; purely a
/// speed-up, results are identical with or without it.
#[derive(Default)]
pub struct PartialSumCache {
    map: Mutex<HashMap<(String, usize), Arc<PartialSum>>>,
}

impl PartialSumCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get_or_compute(&self, family: &FamilySpec, upper: usize) -> Arc<PartialSum> {
        let key = (family.descriptor(), upper);
        if let Some(p) = self.map.lock().unwrap().get(&key) {
            return Arc::clone(p);
        }
        let p = Arc::new(partial_sum(family, upper));
        self.map.lock().unwrap().entry(key).or_insert(p).clone()
    }

    /// Fills the cache for every `N <= upper` in one forward pass.
    pub fn prefill(&self, family: &FamilySpec, upper: usize) {
        let d = family.descriptor();
        let sums = partial_sums(family, upper);
        let mut map = self.map.lock().unwrap();
        for p in sums {
            map.entry((d.clone(), p.upper)).or_insert_with(|| Arc::new(p));
        }
    }

    pub fn len(&self) -> usize {
        self.map.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
