//! 5-dissection of a gk partial sum. Each part A_i with i outside the
//! residue set is divisible by a Pochhammer symbol.

use qstrange::dissection::verify_theorem;
use qstrange::partialtheta::Character;
use qstrange::qfamilies::FamilySpec;

fn main() -> qstrange::Result<()> {
    let f = FamilySpec::gk(1)?;
    let chi = Character::chi_gk(1)?;
    let report = verify_theorem(&f, &chi, 5, 8)?;
    for row in &report.rows {
        print!("i={} in_S={} {} {}", row.i, row.in_s, row.divisor, row.verdict.as_str());
        match &row.quotient {
            Some(q) => println!("  quotient {q}"),
            None => println!(),
        }
    }
    Ok(())
}
