//! Compares the expansion of kz at roots of unity with the partial theta
//! function of chi_KZ, then shows a deliberate mismatch against chi_6.

use qstrange::partialtheta::Character;
use qstrange::qfamilies::FamilySpec;
use qstrange::strangematch::{match_expansion, stable_derivative};

fn main() -> qstrange::Result<()> {
    let kz = FamilySpec::kz();
    for k in 1..=3u64 {
        for j in 0..k {
            let r = match_expansion(&kz, &Character::chi_kz(), k, j, 3)?;
            println!("kz vs chi_KZ at k={k} j={j}: {:?} through order {}", r.verdict, r.checked_through);
        }
    }
    let d = stable_derivative(&kz, 3, 1, 2)?;
    println!("theta^2 F at zeta_3 = {} (truncation N = {})", d.value, d.witness_n);
    let r = match_expansion(&kz, &Character::chi6(), 1, 0, 3)?;
    println!("kz vs chi_6: {:?}, first mismatch at order {:?}", r.verdict, r.first_mismatch);
    Ok(())
}
