//! Fishburn-type coefficients of F(1 - q) for three families.

use qstrange::fishburn::xi_coeffs;
use qstrange::qfamilies::parse_family;

fn main() -> qstrange::Result<()> {
    for desc in ["kz", "gk:k=1", "gk:k=2", "hikami:m=2,alpha=1"] {
        let f = parse_family(desc)?;
        let xi = xi_coeffs(&f, 10);
        let shown: Vec<String> = xi.coeffs.iter().map(|c| c.to_string()).collect();
        println!("{:<20} {}", f.label(), shown.join(", "));
    }
    Ok(())
}
