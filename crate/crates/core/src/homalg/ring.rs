use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::fincat::is_prime;

/// Coefficient ring for homology. Written `int`, `int-local:<l>`, `q`, `fp:<p>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RingSpec {
    Integers,
    Localized(u64),
    Rationals,
    PrimeField(u64),
}

impl RingSpec {
    pub fn localized(l: u64) -> Result<Self> {
        if !is_prime(l) {
            return Err(Error::InvalidInput(format!("{l} is not prime")));
        }
        Ok(RingSpec::Localized(l))
    }

    pub fn prime_field(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidInput(format!("{p} is not prime")));
        }
        Ok(RingSpec::PrimeField(p))
    }

    pub fn is_field(&self) -> bool {
        matches!(self, RingSpec::Rationals | RingSpec::PrimeField(_))
    }

    /// 0 for characteristic-zero rings.
    pub fn characteristic(&self) -> u64 {
        match self {
            RingSpec::PrimeField(p) => *p,
            _ => 0,
        }
    }

    /// Whether the integer `d` becomes a unit.
    pub fn inverts(&self, d: &BigInt) -> bool {
        if d.is_zero() {
            return false;
        }
        match self {
            RingSpec::Integers => d.magnitude().is_one(),
            RingSpec::Localized(l) => !d.is_multiple_of(&BigInt::from(*l)),
            RingSpec::Rationals => true,
            RingSpec::PrimeField(p) => !d.is_multiple_of(&BigInt::from(*p)),
        }
    }

    /// The part of an invariant factor `d ≠ 0` that survives base change, or `None` when
    /// `d` becomes zero (only in positive characteristic).
    pub fn localize_divisor(&self, d: &BigInt) -> Option<BigInt> {
        match self {
            RingSpec::Integers => Some(d.clone()),
            RingSpec::Rationals => Some(BigInt::one()),
            RingSpec::Localized(l) => {
                let l = BigInt::from(*l);
                let mut part = BigInt::one();
                let mut rest = d.clone();
                while rest.is_multiple_of(&l) {
                    rest /= &l;
                    part *= &l;
                }
                Some(part)
            }
            RingSpec::PrimeField(p) => (!d.is_multiple_of(&BigInt::from(*p))).then(BigInt::one),
        }
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::Integers => write!(f, "int"),
            RingSpec::Localized(l) => write!(f, "int-local:{l}"),
            RingSpec::Rationals => write!(f, "q"),
            RingSpec::PrimeField(p) => write!(f, "fp:{p}"),
        }
    }
}

impl FromStr for RingSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parse = |v: &str| v.parse::<u64>().map_err(|_| Error::InvalidInput(format!("bad ring parameter in {s:?}")));
        match s {
            "int" => Ok(RingSpec::Integers),
            "q" => Ok(RingSpec::Rationals),
            _ => {
                if let Some(l) = s.strip_prefix("int-local:") {
                    RingSpec::localized(parse(l)?)
                } else if let Some(p) = s.strip_prefix("fp:") {
                    RingSpec::prime_field(parse(p)?)
                } else {
                    Err(Error::InvalidInput(format!("unknown ring {s:?}; expected int, int-local:<l>, q or fp:<p>")))
                }
            }
        }
    }
}

impl Serialize for RingSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for RingSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_round_trip() {
        for s in ["int", "int-local:3", "q", "fp:2"] {
            assert_eq!(s.parse::<RingSpec>().unwrap().to_string(), s);
        }
        assert!("int-local:4".parse::<RingSpec>().is_err());
        assert!("fp:1".parse::<RingSpec>().is_err());
        assert!("zz".parse::<RingSpec>().is_err());
    }

    #[test]
    fn divisor_filtering() {
        let twelve = BigInt::from(12);
        assert_eq!(RingSpec::Localized(2).localize_divisor(&twelve), Some(BigInt::from(4)));
        assert_eq!(RingSpec::Localized(5).localize_divisor(&twelve), Some(BigInt::one()));
        assert_eq!(RingSpec::PrimeField(3).localize_divisor(&twelve), None);
        assert!(RingSpec::Localized(5).inverts(&twelve));
    }
}
