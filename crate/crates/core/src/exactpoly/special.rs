//! Cyclotomic polynomials, q-Pochhammer symbols and Gaussian binomials.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};


use super::{IntPoly, Integers, Poly, Ring};

/// Kernel spacing of a q-Pochhammer symbol: `(q;q)_n` or `(q;q^2)_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Step {
    One,
    Two,
}

impl Step {
    /// Exponent of the `j`-th factor `1 - q^e` (j >= 1).
    pub fn factor_exponent(self, j: usize) -> usize {
        match self {
            Step::One => j,
            Step::Two => 2 * j - 1,
        }
    }
}

fn cyclotomic_cache() -> &'static RwLock<HashMap<u64, IntPoly>> {
    static CACHE: OnceLock<RwLock<HashMap<u64, IntPoly>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// The monic `k`-th cyclotomic polynomial (`Phi_1 = q - 1`), obtained by
/// dividing `q^k - 1` by `Phi_d` for every proper divisor `d` of `k`.
pub fn cyclotomic(k: u64) -> IntPoly {
    assert!(k >= 1, "cyclotomic index must be positive");
    if let Some(p) = cyclotomic_cache().read().unwrap().get(&k) {
        return p.clone();
    }
    let mut coeffs = vec![0i64; k as usize + 1];
    coeffs[0] = -1;
    coeffs[k as usize] = 1;
    let mut p = IntPoly::from_i64s(&coeffs);
    for d in (1..k).filter(|d| k % *d == 0) {
        p = p
            .exact_div(&cyclotomic(d))
            .expect("q^k - 1 is divisible by Phi_d for d | k");
    }
    cyclotomic_cache().write().unwrap().insert(k, p.clone());
    p
}

/// `(q;q)_n` for [`Step::One`], `(q;q^2)_n` for [`Step::Two`].
pub fn pochhammer(n: usize, step: Step) -> IntPoly {
    pochhammer_in(Integers, n, step)
}

pub fn pochhammer_in<R: Ring>(ring: R, n: usize, step: Step) -> Poly<R> {
    let mut p = Poly::one(ring);
    for j in 1..=n {
        p.mul_one_minus_q_pow_assign(step.factor_exponent(j));
    }
    p
}

/// The Gaussian polynomial `[n choose k]` in base `q`, or in base `q^2`
/// when `square_base` is set. Zero when `k > n`.
pub fn qbinomial(n: usize, k: usize, square_base: bool) -> IntPoly {
    if k > n {
        return IntPoly::zero(Integers);
    }
    let num = pochhammer(n, Step::One);
    let den = &pochhammer(k, Step::One) * &pochhammer(n - k, Step::One);
    let b = num
        .exact_div(&den)
        .expect("Gaussian binomials are polynomials");
    if square_base {
        b.spread(2)
    } else {
        b
    }
}
