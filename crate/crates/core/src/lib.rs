//! Exact-arithmetic toolkit for the asymptotic Fermat criterion over
//! imaginary quadratic fields: field arithmetic, the S-unit equation
//! `lambda + mu = 1`, Frey-curve identities, the verdict engine, and
//! density statistics.

pub mod arith;
pub mod criterion;
pub mod density;
pub mod error;
pub mod factor;
pub mod frey;
pub mod quad_field;
pub mod sunit;

pub use error::{Error, Result};
pub use quad_field::{Element, IdealHNF, ImagQuadField, PrimeAbove2, Valuation};

/// Serializes big integers as decimal strings.
pub mod serde_bigint {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(n)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(de)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
