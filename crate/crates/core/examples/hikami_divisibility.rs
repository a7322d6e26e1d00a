//! Sweep of Hikami-family dissections with the paired character.

use qstrange::dissection::{residue_set, verify_theorem};
use qstrange::partialtheta::paired_character;
use qstrange::qfamilies::FamilySpec;

fn main() -> qstrange::Result<()> {
    for (m, alpha) in [(1, 0), (2, 0), (2, 1)] {
        let f = FamilySpec::hikami(m, alpha)?;
        let chi = paired_character(&f).expect("hikami families have a paired character");
        for s in 2..=5u64 {
            let report = verify_theorem(&f, &chi, s, 10)?;
            let divides = report.rows.iter().filter(|r| r.verdict.as_str() == "divides").count();
            println!(
                "{} s={s} S={:?} rows dividing: {divides}/{}",
                f.label(),
                residue_set(&chi, s),
                report.rows.len()
            );
        }
    }
    Ok(())
}
