//! Residue sets and Pochhammer thresholds for the built-in characters.

use qstrange::dissection::{pochhammer_factorization, residue_set, thresholds};
use qstrange::exactpoly::Step;
use qstrange::partialtheta::Character;

fn main() -> qstrange::Result<()> {
    let chars = [
        Character::chi_kz(),
        Character::chi_hikami(2, 1)?,
        Character::chi_gk(2)?,
    ];
    for chi in &chars {
        for s in [5u64, 7, 11] {
            println!("{:<16} s={s:<3} S={:?}", chi.name(), residue_set(chi, s));
        }
    }
    println!("thresholds N=20 s=5 k=2: {:?}", thresholds(20, 5, 2));
    let f = pochhammer_factorization(6, Step::Two);
    println!("(q;q^2)_6 = {} * {:?}", f.sign, f.factors);
    Ok(())
}
