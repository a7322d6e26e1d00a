//! JSON form `{"coeffs": ["1", "-1", "0", "2"]}` with decimal-string
//! coefficients (`"p/q"` for rationals), index = exponent.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{IntPoly, Integers, Poly, RatPoly, Rationals};

#[derive(Serialize, Deserialize)]
struct Wire {
    coeffs: Vec<String>,
}

pub fn parse_rational(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|e| format!("bad numerator {n:?}: {e}"))?;
        let d = BigInt::from_str(d.trim()).map_err(|e| format!("bad denominator {d:?}: {e}"))?;
        if d == BigInt::from(0) {
            return Err(format!("zero denominator in {s:?}"));
        }
        Ok(BigRational::new(n, d))
    } else {
        BigInt::from_str(s)
            .map(BigRational::from_integer)
            .map_err(|e| format!("bad rational {s:?}: {e}"))
    }
}

impl Serialize for IntPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        Wire {
            coeffs: self.coeffs.iter().map(|c| c.to_string()).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for IntPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let w = Wire::deserialize(deserializer)?;
        let coeffs = w
            .coeffs
            .iter()
            .map(|s| BigInt::from_str(s.trim()).map_err(|e| D::Error::custom(format!("{s:?}: {e}"))))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Poly::from_coeffs(Integers, coeffs))
    }
}

impl Serialize for RatPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        Wire {
            coeffs: self.coeffs.iter().map(|c| c.to_string()).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for RatPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let w = Wire::deserialize(deserializer)?;
        let coeffs = w
            .coeffs
            .iter()
            .map(|s| parse_rational(s).map_err(D::Error::custom))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Poly::from_coeffs(Rationals, coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn int_json_shape() {
        let p = IntPoly::from_i64s(&[1, -1, 0, 2]);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"coeffs":["1","-1","0","2"]}"#);
        let back: IntPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn rational_json_shape() {
        let p = RatPoly::from_rationals(vec![
            parse_rational("1/6").unwrap(),
            parse_rational("-1").unwrap(),
            parse_rational("2/2").unwrap(),
        ]);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"coeffs":["1/6","-1","1"]}"#);
        let back: RatPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn rejects_garbage() {
        assert!(serde_json::from_str::<IntPoly>(r#"{"coeffs":["x"]}"#).is_err());
        assert!(parse_rational("1/0").is_err());
    }
}
