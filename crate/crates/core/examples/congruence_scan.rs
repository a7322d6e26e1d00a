//! Empirical search for congruence classes of the Fishburn-type numbers.

use qstrange::fishburn::{scan_congruences, verify_congruence};
use qstrange::qfamilies::FamilySpec;

fn main() -> qstrange::Result<()> {
    for (f, p) in [(FamilySpec::kz(), 5), (FamilySpec::kz(), 7), (FamilySpec::gk(1)?, 13)] {
        let r = scan_congruences(&f, p, 1, 20 * p as usize)?;
        println!("{} mod {p}: vanishing residues {:?} ({})", r.family, r.residues, r.status);
    }
    let c = verify_congruence(&FamilySpec::gk(1)?, 5, 2, 1, 100)?;
    println!("gk:k=1, 25n - 1: pass = {}", c.pass);
    let c = verify_congruence(&FamilySpec::kz(), 5, 1, 3, 50)?;
    println!("kz, 5n - 3: pass = {}, witness {:?}", c.pass, c.witness);
    Ok(())
}
