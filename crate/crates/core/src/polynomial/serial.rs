//! JSON form: `{"dim": d, "terms": [{"exp": [..], "num": "..", "den": ".."}]}`
//! with terms in lexicographic exponent order and reduced fractions.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::Polynomial;
use crate::error::{Error, Result};
use crate::multiindex::MultiIndex;

#[derive(Serialize, Deserialize)]
struct TermRepr {
    exp: Vec<u32>,
    num: String,
    den: String,
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    dim: usize,
    terms: Vec<TermRepr>,
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyRepr {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| TermRepr {
                    exp: e.entries().to_vec(),
                    num: c.numer().to_string(),
                    den: c.denom().to_string(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = PolyRepr::deserialize(d)?;
        from_repr(repr).map_err(serde::de::Error::custom)
    }
}

fn from_repr(repr: PolyRepr) -> Result<Polynomial> {
    if repr.dim == 0 {
        return Err(Error::Malformed("dimension must be at least 1".into()));
    }
    let mut p = Polynomial::zero(repr.dim);
    for t in repr.terms {
        let exp = MultiIndex::new(t.exp)?;
        Error::check_dim(repr.dim, exp.dim())?;
        let num: BigInt = t
            .num
            .parse()
            .map_err(|_| Error::Malformed(format!("bad numerator {:?}", t.num)))?;
        let den: BigInt = t
            .den
            .parse()
            .map_err(|_| Error::Malformed(format!("bad denominator {:?}", t.den)))?;
        if den.is_zero() || den.is_negative() {
            return Err(Error::Malformed("denominator must be positive".into()));
        }
        if p.terms.contains_key(&exp) {
            return Err(Error::Malformed(format!("duplicate exponent {exp:?}")));
        }
        let c = BigRational::new(num, den);
        if !c.is_zero() {
            p.terms.insert(exp, c);
        }
    }
    Ok(p)
}

impl Polynomial {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("polynomial serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Polynomial> {
        let repr: PolyRepr =
            serde_json::from_str(s).map_err(|e| Error::Malformed(e.to_string()))?;
        from_repr(repr)
    }
}
