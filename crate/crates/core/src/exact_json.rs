//! Exact rationals in JSON as `{"num": "<int>", "den": "<int>"}`.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::Rational;

#[derive(Serialize, Deserialize)]
struct RationalDoc {
    num: String,
    den: String,
}

impl From<&Rational> for RationalDoc {
    fn from(value: &Rational) -> Self {
        Self {
            num: value.numer().to_string(),
            den: value.denom().to_string(),
        }
    }
}

impl TryFrom<RationalDoc> for Rational {
    type Error = String;

    fn try_from(doc: RationalDoc) -> Result<Self, Self::Error> {
        let num: BigInt = doc
            .num
            .parse()
            .map_err(|e| format!("bad numerator {:?}: {e}", doc.num))?;
        let den: BigInt = doc
            .den
            .parse()
            .map_err(|e| format!("bad denominator {:?}: {e}", doc.den))?;
        if den.is_zero() {
            return Err("zero denominator".into());
        }
        if den.is_negative() {
            return Err("negative denominator".into());
        }
        Ok(Rational::new(num, den))
    }
}

pub mod rational {
    use super::*;

    pub fn serialize<S: Serializer>(value: &Rational, serializer: S) -> Result<S::Ok, S::Error> {
        RationalDoc::from(value).serialize(serializer)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Rational, D::Error> {
        Rational::try_from(RationalDoc::deserialize(deserializer)?)
            .map_err(serde::de::Error::custom)
    }
}

pub mod rational_vec {
    use super::*;

    pub fn serialize<S: Serializer>(values: &[Rational], serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(values.iter().map(RationalDoc::from))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        deserializer: D,
    ) -> Result<Vec<Rational>, D::Error> {
        Vec::<RationalDoc>::deserialize(deserializer)?
            .into_iter()
            .map(|doc| Rational::try_from(doc).map_err(serde::de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use crate::scalar::ratio;
    use crate::Rational;
    use serde::{Deserialize, Serialize};

    #[derive(Serialize, Deserialize, PartialEq, Debug)]
    struct Wrapper {
        #[serde(with = "super::rational")]
        value: Rational,
        #[serde(with = "super::rational_vec")]
        list: Vec<Rational>,
    }

    #[test]
    fn format_and_parse() {
        let w = Wrapper {
            value: ratio(-2, 6),
            list: vec![ratio(1, 2), ratio(0, 5)],
        };
        let text = serde_json::to_string(&w).unwrap();
        assert_eq!(
            text,
            r#"{"value":{"num":"-1","den":"3"},"list":[{"num":"1","den":"2"},{"num":"0","den":"1"}]}"#
        );
        assert_eq!(serde_json::from_str::<Wrapper>(&text).unwrap(), w);
    }

    #[test]
    fn rejects_bad_denominators() {
        let zero = r#"{"value":{"num":"1","den":"0"},"list":[]}"#;
        assert!(serde_json::from_str::<Wrapper>(zero).is_err());
        let negative = r#"{"value":{"num":"1","den":"-2"},"list":[]}"#;
        assert!(serde_json::from_str::<Wrapper>(negative).is_err());
        let junk = r#"{"value":{"num":"x","den":"2"},"list":[]}"#;
        assert!(serde_json::from_str::<Wrapper>(junk).is_err());
    }
}
