//! String encodings for big numbers in JSON: integers as decimal strings,
//! rationals as `"p/q"`.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{de::Error as _, Deserialize, Deserializer, Serializer};
use serde_with::{DeserializeAs, SerializeAs};

/// `serde_with` adapter writing a rational as `"p/q"` (always with `/`).
pub struct RatStr;

impl SerializeAs<BigRational> for RatStr {
    fn serialize_as<S: Serializer>(v: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{}/{}", v.numer(), v.denom()))
    }
}

impl<'de> DeserializeAs<'de, BigRational> for RatStr {
    fn deserialize_as<D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(D::Error::custom)
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational, String> {
    let (n, den) = s.split_once('/').unwrap_or((s, "1"));
    let n: BigInt = n
        .trim()
        .parse()
        .map_err(|_| format!("bad rational {s:?}"))?;
    let den: BigInt = den
        .trim()
        .parse()
        .map_err(|_| format!("bad rational {s:?}"))?;
    if den == BigInt::from(0) {
        return Err(format!("zero denominator in {s:?}"));
    }
    Ok(BigRational::new(n, den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde::{Deserialize, Serialize};
    use serde_with::{serde_as, DisplayFromStr};

    #[serde_as]
    #[derive(Serialize, Deserialize, PartialEq, Debug)]
    struct Probe {
        #[serde_as(as = "RatStr")]
        q: BigRational,
        #[serde_as(as = "DisplayFromStr")]
        n: BigInt,
    }

    #[test]
    fn encodes_as_strings() {
        let p = Probe {
            q: BigRational::new(6.into(), (-4).into()),
            n: BigInt::from(10).pow(30),
        };
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"q":"-3/2","n":"1000000000000000000000000000000"}"#);
        assert_eq!(serde_json::from_str::<Probe>(&s).unwrap(), p);
    }

    #[test]
    fn rejects_zero_denominator() {
        assert!(parse_rational("1/0").is_err());
        assert_eq!(
            parse_rational("5").unwrap(),
            BigRational::from_integer(5.into())
        );
    }
}
