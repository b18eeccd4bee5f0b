//! Exact nonnegative rational weights.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// Exact weight used throughout the algebra. Never negative in a valid row.
pub type Weight = BigRational;

pub fn weight(numer: i64, denom: i64) -> Weight {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn integer(n: i64) -> Weight {
    BigRational::from_integer(BigInt::from(n))
}

/// Parses `p/q` or a bare integer. Decimal notation is rejected.
pub fn parse_weight(text: &str) -> Result<Weight> {
    let bad = || Error::InvalidWeight(text.to_string());
    let (numer, denom) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text.trim(), "1"),
    };
    let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    if !digits(numer) || !digits(denom) {
        return Err(bad());
    }
    let numer: BigInt = numer.parse().map_err(|_| bad())?;
    let denom: BigInt = denom.parse().map_err(|_| bad())?;
    if denom.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(numer, denom))
}

pub fn format_weight(w: &Weight) -> String {
    if w.is_integer() {
        w.numer().to_string()
    } else {
        format!("{}/{}", w.numer(), w.denom())
    }
}

pub(crate) fn ensure_nonnegative(w: &Weight) -> Result<()> {
    if w.is_negative() {
        Err(Error::InvalidWeight(format_weight(w)))
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_integers_and_fractions() {
        assert_eq!(parse_weight("3").unwrap(), integer(3));
        assert_eq!(parse_weight("2/4").unwrap(), weight(1, 2));
        assert_eq!(format_weight(&parse_weight("6/8").unwrap()), "3/4");
    }

    #[test]
    fn rejects_decimals_and_signs() {
        for bad in ["0.5", "-1", "1/0", "", "a/b", "1/-2"] {
            assert!(parse_weight(bad).is_err(), "{bad}");
        }
    }
}
