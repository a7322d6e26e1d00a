//! L-values at negative integers of twisted character sequences and the
//! resulting expansion coefficients.

use qstrange::partialtheta::{gamma_coeffs, l_value, twisted_sequence, Character};

fn main() -> qstrange::Result<()> {
    let chi = Character::chi_kz();
    let seq = twisted_sequence(&chi, 1, 0)?;
    for n in [1usize, 3, 5, 7] {
        println!("L(-{n}, chi_KZ) = {}", l_value(&seq, n));
    }
    let seq = twisted_sequence(&chi, 5, 2)?;
    println!("period of the twist by zeta_5^2: {}", seq.period());
    let g = gamma_coeffs(&chi, 5, 2, 3)?;
    for (n, c) in g.coeffs.iter().enumerate() {
        println!("gamma_{n} = {c}");
    }
    Ok(())
}
