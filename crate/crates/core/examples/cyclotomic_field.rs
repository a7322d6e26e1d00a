//! Exact arithmetic in Q(zeta_k).

use qstrange::cyclofield::{cyclo_mul, eval_at_root, CycloNum};
use qstrange::exactpoly::IntPoly;

fn main() -> qstrange::Result<()> {
    let z = CycloNum::zeta_pow(5, 1);
    let mut sum = CycloNum::zero(5);
    for e in 0..5 {
        sum.add_assign_ref(&CycloNum::zeta_pow(5, e));
    }
    println!("1 + z + ... + z^4 = {sum}");
    println!("z * z^4 = {}", cyclo_mul(&z, &CycloNum::zeta_pow(5, 4))?);
    let p = IntPoly::from_i64s(&[1, 1, 1]);
    let v = eval_at_root(&p.to_rat(), 3, 1);
    println!("1 + w + w^2 at a cube root of unity: {v}");
    let w = eval_at_root(&IntPoly::from_i64s(&[0, 1]).to_rat(), 12, 1);
    let (re, im) = w.to_complex_f64();
    println!("zeta_12 ~ {re:.6} + {im:.6}i");
    println!("lifted into Q(zeta_24): {}", w.lift(24)?);
    Ok(())
}
