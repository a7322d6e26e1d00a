//! The C-array and the identity extracting theta-derivatives of a
//! dissection part from derivatives of the whole polynomial.

use qstrange::exactpoly::IntPoly;
use qstrange::strangematch::{c_array, extraction_identity_check};

fn main() -> qstrange::Result<()> {
    let c = c_array(5, 3);
    for l in 0..=3 {
        let row: Vec<String> = (0..=l).map(|j| c.get(l, 1, j).to_string()).collect();
        println!("C_{l},1,j(5) = [{}]", row.join(", "));
    }
    let h = IntPoly::from_i64s(&[3, -1, 4, 1, -5, 9, 2, -6]);
    for i0 in 0..3 {
        let chk = extraction_identity_check(&h, 3, i0, 3)?;
        println!("s=3 i0={i0} order 3: pass = {}", chk.pass);
    }
    Ok(())
}
