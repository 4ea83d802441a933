//! Twist data of the two-bridge knot family and the closed-form bounds that
//! go with it.
//!
//! A knot in the family is given by an even-length sequence `a_1, .., a_2g`
//! with `|a_j| >= 2`. Its slope is the nested fraction
//!
//! ```text
//! 1 / (2a_1 - 1 / (2a_2 + 1 / (2a_3 - ... 1 / (2a_{2g-1} - 1 / (2a_{2g})))))
//! ```
//!
//! where the connecting sign after `2a_k` is `-` for odd `k` and `+` for even
//! `k`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KnotError {
    #[error("twist sequence is empty")]
    EmptySequence,
    /// 1-based position of the offending coefficient.
    #[error("coefficient a_{0} has absolute value below 2")]
    CoefficientTooSmall(usize),
    #[error("twist sequence has odd length {0}; knot data needs an even length")]
    OddLength(usize),
    #[error("division by zero while evaluating the continued fraction")]
    DivisionByZero,
    #[error("genus must be positive")]
    NonpositiveGenus,
    #[error("bound for genus {0} overflows")]
    Overflow(u64),
}

/// Validated twist coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct TwistSequence(Vec<i64>);

impl TwistSequence {
    pub fn new(raw: &[i64]) -> Result<Self, KnotError> {
        validate_twist_sequence(raw)
    }

    pub fn coefficients(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn genus(&self) -> Result<u64, KnotError> {
        genus(self)
    }

    pub fn slope(&self) -> Result<RationalSlope, KnotError> {
        slope(self)
    }
}

impl<'de> Deserialize<'de> for TwistSequence {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = Vec::<i64>::deserialize(d)?;
        validate_twist_sequence(&raw).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for TwistSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

pub fn validate_twist_sequence(raw: &[i64]) -> Result<TwistSequence, KnotError> {
    if raw.is_empty() {
        return Err(KnotError::EmptySequence);
    }
    if let Some(pos) = raw.iter().position(|a| a.unsigned_abs() < 2) {
        return Err(KnotError::CoefficientTooSmall(pos + 1));
    }
    Ok(TwistSequence(raw.to_vec()))
}

pub fn genus(seq: &TwistSequence) -> Result<u64, KnotError> {
    let m = seq.len();
    if m % 2 == 1 {
        return Err(KnotError::OddLength(m));
    }
    Ok((m / 2) as u64)
}

/// Reduced rational `numerator / denominator` with a positive denominator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalSlope {
    numerator: BigInt,
    denominator: BigInt,
}

impl RationalSlope {
    /// Builds a reduced slope; fails on a zero denominator.
    pub fn new(numerator: BigInt, denominator: BigInt) -> Result<Self, KnotError> {
        if denominator.is_zero() {
            return Err(KnotError::DivisionByZero);
        }
        let g = numerator.gcd(&denominator);
        let (mut p, mut q) = (numerator / &g, denominator / &g);
        if q.is_negative() {
            p = -p;
            q = -q;
        }
        Ok(RationalSlope {
            numerator: p,
            denominator: q,
        })
    }

    pub fn numerator(&self) -> &BigInt {
        &self.numerator
    }

    pub fn denominator(&self) -> &BigInt {
        &self.denominator
    }
}

impl fmt::Display for RationalSlope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator, self.denominator)
    }
}

impl Serialize for RationalSlope {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("RationalSlope", 3)?;
        st.serialize_field("slope", &self.to_string())?;
        st.serialize_field("numerator", &self.numerator.to_string())?;
        st.serialize_field("denominator", &self.denominator.to_string())?;
        st.end()
    }
}

/// Evaluates the continued fraction innermost-out in exact arithmetic.
///
/// The running value is kept as an unreduced pair `num / den`; the final
/// result is reduced once.
pub fn slope(seq: &TwistSequence) -> Result<RationalSlope, KnotError> {
    genus(seq)?;
    let a = seq.coefficients();
    let m = a.len();

    // value of the tail starting at term k (1-based), as num/den
    let mut num = BigInt::from(2) * a[m - 1];
    let mut den = BigInt::one();
    for k in (1..m).rev() {
        if num.is_zero() {
            return Err(KnotError::DivisionByZero);
        }
        // term_k (sign) 1 / tail  ==  (2a_k * num (sign) den) / num
        let head = BigInt::from(2) * a[k - 1];
        let next = if k % 2 == 1 {
            &head * &num - &den
        } else {
            &head * &num + &den
        };
        den = num;
        num = next;
    }
    // outermost reciprocal
    RationalSlope::new(den, num)
}

/// Closed-form bounds attached to a genus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundSet {
    pub genus: u64,
    /// `2g(3g-2)+1`
    pub diameter_bound: u64,
    /// `2(3g-2)^2`
    pub intersection_bound: u64,
    /// Present only in genus one, where the diameter is at most 2.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub genus1_refined_diameter: Option<u64>,
}

pub fn bounds(g: u64) -> Result<BoundSet, KnotError> {
    if g == 0 {
        return Err(KnotError::NonpositiveGenus);
    }
    let overflow = || KnotError::Overflow(g);
    let eta = g.checked_mul(3).and_then(|x| x.checked_sub(2)).ok_or_else(overflow)?;
    let diameter_bound = g
        .checked_mul(2)
        .and_then(|x| x.checked_mul(eta))
        .and_then(|x| x.checked_add(1))
        .ok_or_else(overflow)?;
    let intersection_bound = eta
        .checked_mul(eta)
        .and_then(|x| x.checked_mul(2))
        .ok_or_else(overflow)?;
    Ok(BoundSet {
        genus: g,
        diameter_bound,
        intersection_bound,
        genus1_refined_diameter: (g == 1).then_some(2),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert_eq!(validate_twist_sequence(&[2, 2]).unwrap().len(), 2);
        assert_eq!(
            validate_twist_sequence(&[2, 1, 2, 2]),
            Err(KnotError::CoefficientTooSmall(2))
        );
        assert_eq!(validate_twist_sequence(&[-2, 3]).unwrap().len(), 2);
        assert_eq!(validate_twist_sequence(&[]), Err(KnotError::EmptySequence));
        assert_eq!(
            validate_twist_sequence(&[0, 5]),
            Err(KnotError::CoefficientTooSmall(1))
        );
        assert_eq!(
            validate_twist_sequence(&[3, -1]),
            Err(KnotError::CoefficientTooSmall(2))
        );
    }

    #[test]
    fn genus_from_length() {
        let s = |v: &[i64]| TwistSequence::new(v).unwrap();
        assert_eq!(genus(&s(&[2, 2])), Ok(1));
        assert_eq!(genus(&s(&[2, 2, 2, 2])), Ok(2));
        assert_eq!(genus(&s(&[2, 2, 2])), Err(KnotError::OddLength(3)));
        assert_eq!(slope(&s(&[2, 2, 2])), Err(KnotError::OddLength(3)));
    }

    #[test]
    fn slope_examples() {
        let s = |v: &[i64]| TwistSequence::new(v).unwrap().slope().unwrap().to_string();
        assert_eq!(s(&[2, 2]), "4/15");
        assert_eq!(s(&[2, 2, 2, 2]), "64/241");
        assert_eq!(s(&[-2, 2]), "-4/17");
    }

    #[test]
    fn slope_handles_huge_denominators() {
        let seq = TwistSequence::new(&[i64::MAX; 40]).unwrap();
        let q = seq.slope().unwrap();
        assert!(q.denominator().bits() > 2000);
        assert!(q.numerator().gcd(q.denominator()).is_one());
    }

    #[test]
    fn rational_slope_normalises_sign() {
        let q = RationalSlope::new(BigInt::from(6), BigInt::from(-4)).unwrap();
        assert_eq!(q.to_string(), "-3/2");
        assert!(RationalSlope::new(BigInt::one(), BigInt::zero()).is_err());
    }

    #[test]
    fn bound_values() {
        let b1 = bounds(1).unwrap();
        assert_eq!(
            (b1.diameter_bound, b1.intersection_bound, b1.genus1_refined_diameter),
            (3, 2, Some(2))
        );
        let b2 = bounds(2).unwrap();
        assert_eq!(
            (b2.diameter_bound, b2.intersection_bound, b2.genus1_refined_diameter),
            (17, 32, None)
        );
        assert_eq!(bounds(0), Err(KnotError::NonpositiveGenus));
        assert_eq!(bounds(u64::MAX), Err(KnotError::Overflow(u64::MAX)));
    }

    #[test]
    fn bounds_json_shape() {
        let v = serde_json::to_value(bounds(2).unwrap()).unwrap();
        assert_eq!(
            v,
            serde_json::json!({"genus": 2, "diameter_bound": 17, "intersection_bound": 32})
        );
    }
}
