//! p-adic numbers known to finite precision, with the valuation floor -1
//! needed for Bernoulli denominators (von Staudt-Clausen poles).

use crate::error::{Error, Result};
use crate::residues::{make_residue, split_p_power, Modulus, ResidueClass};
use crate::Rational;
use num_bigint::BigInt;
use num_traits::Zero;
use std::fmt;

/// A p-adic number x = p^v * u with the unit residue u known modulo
/// p^precision; x itself is therefore known modulo p^(v + precision).
/// The zero variant records only "divisible by p^abs": nothing more is
/// known about it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicValue {
    prime: u64,
    repr: Repr,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Repr {
    Zero { abs: i64 },
    Finite { valuation: i64, unit: ResidueClass, precision: u32 },
}

impl PadicValue {
    /// The canonical zero at (relative = absolute) precision e.
    pub fn zero(prime: u64, e: u32) -> Self {
        PadicValue { prime, repr: Repr::Zero { abs: e as i64 } }
    }

    pub fn exact_one(prime: u64, e: u32) -> Self {
        let unit = ResidueClass::from_u64(1, &Modulus::prime_power(prime, e));
        PadicValue { prime, repr: Repr::Finite { valuation: 0, unit, precision: e } }
    }

    fn zero_with_abs(prime: u64, abs: i64) -> Self {
        PadicValue { prime, repr: Repr::Zero { abs } }
    }

    pub(crate) fn from_parts(prime: u64, valuation: i64, unit: ResidueClass, precision: u32) -> Result<Self> {
        if valuation < -1 {
            return Err(Error::ValuationTooNegative { prime, valuation });
        }
        debug_assert!(!unit.value().is_zero() || precision == 0);
        Ok(PadicValue { prime, repr: Repr::Finite { valuation, unit, precision } })
    }

    /// Extract valuation and unit residue of an exact rational to relative
    /// precision e; `padic_normalize` of the op catalog.
    pub fn from_rational(x: &Rational, prime: u64, e: u32) -> Result<Self> {
        assert!(e >= 1);
        if x.is_zero() {
            return Ok(PadicValue::zero(prime, e));
        }
        let (vn, un) = split_p_power(x.numer(), prime);
        let (vd, ud) = split_p_power(x.denom(), prime);
        let v = vn as i64 - vd as i64;
        if v < -1 {
            return Err(Error::ValuationTooNegative { prime, valuation: v });
        }
        let m = Modulus::prime_power(prime, e);
        let unit = make_residue(&un, &ud, &m)?;
        Ok(PadicValue { prime, repr: Repr::Finite { valuation: v, unit, precision: e } })
    }

    pub fn from_integer(x: &BigInt, prime: u64, e: u32) -> Result<Self> {
        Self::from_rational(&Rational::from(x.clone()), prime, e)
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    /// None for the zero value (its valuation is only bounded below).
    pub fn valuation(&self) -> Option<i64> {
        match &self.repr {
            Repr::Zero { .. } => None,
            Repr::Finite { valuation, .. } => Some(*valuation),
        }
    }

    pub fn unit(&self) -> Option<&ResidueClass> {
        match &self.repr {
            Repr::Zero { .. } => None,
            Repr::Finite { unit, .. } => Some(unit),
        }
    }

    /// Absolute precision: the value is known modulo p^abs_precision.
    pub fn abs_precision(&self) -> i64 {
        match &self.repr {
            Repr::Zero { abs } => *abs,
            Repr::Finite { valuation, precision, .. } => valuation + *precision as i64,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero { .. })
    }

    /// True when the value is divisible by p^abs (and that fact is known).
    pub fn is_zero_mod(&self, abs: i64) -> bool {
        match &self.repr {
            Repr::Zero { abs: a } => *a >= abs,
            Repr::Finite { valuation, .. } => *valuation >= abs,
        }
    }

    /// Lossless-down: forget digits beyond absolute precision `abs`.
    pub fn truncate_abs(&self, abs: i64) -> Self {
        match &self.repr {
            Repr::Zero { abs: a } => PadicValue::zero_with_abs(self.prime, (*a).min(abs)),
            Repr::Finite { valuation, unit, precision } => {
                let rel = abs - valuation;
                if rel <= 0 {
                    return PadicValue::zero_with_abs(self.prime, abs);
                }
                let rel = (rel as u32).min(*precision);
                let m = Modulus::prime_power(self.prime, rel);
                PadicValue {
                    prime: self.prime,
                    repr: Repr::Finite {
                        valuation: *valuation,
                        unit: unit.reduce_to(&m),
                        precision: rel,
                    },
                }
            }
        }
    }

    pub fn neg(&self) -> Self {
        match &self.repr {
            Repr::Zero { .. } => self.clone(),
            Repr::Finite { valuation, unit, precision } => PadicValue {
                prime: self.prime,
                repr: Repr::Finite { valuation: *valuation, unit: unit.neg(), precision: *precision },
            },
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        assert_eq!(self.prime, other.prime);
        let p = self.prime;
        match (&self.repr, &other.repr) {
            (Repr::Zero { abs: a }, Repr::Zero { abs: b }) => Ok(PadicValue::zero_with_abs(p, a + b)),
            (Repr::Zero { abs }, Repr::Finite { valuation, .. })
            | (Repr::Finite { valuation, .. }, Repr::Zero { abs }) => {
                Ok(PadicValue::zero_with_abs(p, abs + valuation))
            }
            (
                Repr::Finite { valuation: v1, unit: u1, precision: e1 },
                Repr::Finite { valuation: v2, unit: u2, precision: e2 },
            ) => {
                let e = (*e1).min(*e2);
                let m = Modulus::prime_power(p, e);
                let unit = u1.reduce_to(&m).mul(&u2.reduce_to(&m));
                PadicValue::from_parts(p, v1 + v2, unit, e)
            }
        }
    }

    /// Multiply by an exact nonzero rational (lossless in relative precision).
    pub fn mul_rational(&self, q: &Rational) -> Result<Self> {
        assert!(!q.is_zero(), "use PadicValue::zero for the zero multiplier");
        let p = self.prime;
        let (vn, un) = split_p_power(q.numer(), p);
        let (vd, ud) = split_p_power(q.denom(), p);
        let vq = vn as i64 - vd as i64;
        match &self.repr {
            Repr::Zero { abs } => Ok(PadicValue::zero_with_abs(p, abs + vq)),
            Repr::Finite { valuation, unit, precision } => {
                let m = Modulus::prime_power(p, *precision);
                let scalar = make_residue(&un, &ud, &m)?;
                PadicValue::from_parts(p, valuation + vq, unit.mul(&scalar), *precision)
            }
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        assert_eq!(self.prime, other.prime);
        let p = self.prime;
        let k = self.abs_precision().min(other.abs_precision());
        match (&self.repr, &other.repr) {
            (Repr::Zero { .. }, Repr::Zero { .. }) => Ok(PadicValue::zero_with_abs(p, k)),
            (Repr::Zero { .. }, Repr::Finite { .. }) => Ok(other.truncate_abs(k)),
            (Repr::Finite { .. }, Repr::Zero { .. }) => Ok(self.truncate_abs(k)),
            (
                Repr::Finite { valuation: v1, unit: u1, .. },
                Repr::Finite { valuation: v2, unit: u2, .. },
            ) => {
                let v = (*v1).min(*v2);
                let rel = k - v;
                if rel <= 0 {
                    return Ok(PadicValue::zero_with_abs(p, k));
                }
                let rel = rel as u32;
                let m = Modulus::prime_power(p, rel);
                // Lift the unit value into the target ring, then apply the
                // p-power shift. The shifted value is determined mod p^rel
                // because shifting adds dv digits of knowledge.
                let shift = |unit: &ResidueClass, dv: i64| -> ResidueClass {
                    let base = ResidueClass::from_biguint(&unit.value(), &m);
                    if dv == 0 {
                        base
                    } else {
                        base.mul(&ResidueClass::from_u64(p, &m).pow(dv as u64))
                    }
                };
                let sum = shift(u1, v1 - v).add(&shift(u2, v2 - v));
                if sum.is_zero() {
                    return Ok(PadicValue::zero_with_abs(p, k));
                }
                let (w, unit_val) = split_p_power(&BigInt::from(sum.value()), p);
                let new_rel = rel as i64 - w as i64;
                if new_rel <= 0 {
                    return Ok(PadicValue::zero_with_abs(p, k));
                }
                let m2 = Modulus::prime_power(p, new_rel as u32);
                let unit = ResidueClass::from_bigint(&unit_val, &m2);
                PadicValue::from_parts(p, v + w as i64, unit, new_rel as u32)
            }
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// The value as an integer residue modulo p^abs. Requires the value to
    /// be known to at least that absolute precision and to be p-integral.
    pub fn to_residue(&self, abs: u32) -> Result<ResidueClass> {
        let m = Modulus::prime_power(self.prime, abs);
        match &self.repr {
            Repr::Zero { abs: a } => {
                if *a < abs as i64 {
                    Err(Error::PrecisionUnreachable { prime: self.prime, exponent: abs as u64 })
                } else {
                    Ok(m.zero())
                }
            }
            Repr::Finite { valuation, unit, .. } => {
                if *valuation < 0 {
                    return Err(Error::ValuationTooNegative {
                        prime: self.prime,
                        valuation: *valuation,
                    });
                }
                if self.abs_precision() < abs as i64 {
                    return Err(Error::PrecisionUnreachable { prime: self.prime, exponent: abs as u64 });
                }
                if *valuation >= abs as i64 {
                    return Ok(m.zero());
                }
                // unit is known mod p^rel with valuation + rel >= abs, so the
                // digits below p^(abs - valuation) pin the product mod p^abs.
                let rel_needed = (abs as i64 - valuation) as u32;
                let u = unit.reduce_to(&Modulus::prime_power(self.prime, rel_needed));
                let lifted = ResidueClass::from_biguint(&u.value(), &m);
                Ok(lifted.mul(&ResidueClass::from_u64(self.prime, &m).pow(*valuation as u64)))
            }
        }
    }
}

impl fmt::Display for PadicValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Zero { abs } => write!(f, "O({}^{})", self.prime, abs),
            Repr::Finite { valuation, unit, precision } => {
                write!(f, "{}^{} * ({} mod {}^{})", self.prime, valuation, unit, self.prime, precision)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::residues::big_ratio;

    #[test]
    fn normalize_examples() {
        // 1/6 at p=5, e=3: unit 21 mod 125 since 6*21 = 126
        let x = PadicValue::from_rational(&big_ratio(1, 6), 5, 3).unwrap();
        assert_eq!(x.valuation(), Some(0));
        assert_eq!(x.unit().unwrap().value_u64(), Some(21));

        // canonical zero
        let z = PadicValue::from_rational(&big_ratio(0, 1), 7, 2).unwrap();
        assert!(z.is_zero());
        assert_eq!(z.abs_precision(), 2);

        // -1/30 at p=5 has the von Staudt-Clausen pole: valuation -1, unit -1/6 mod 25
        let b4 = PadicValue::from_rational(&big_ratio(-1, 30), 5, 2).unwrap();
        assert_eq!(b4.valuation(), Some(-1));
        let expect = make_residue(&BigInt::from(-1), &BigInt::from(6), &Modulus::from_u64(25)).unwrap();
        assert_eq!(b4.unit().unwrap(), &expect);

        // valuation below -1 is rejected
        match PadicValue::from_rational(&big_ratio(1, 25), 5, 2) {
            Err(Error::ValuationTooNegative { valuation, .. }) => assert_eq!(valuation, -2),
            other => panic!("expected ValuationTooNegative, got {other:?}"),
        }
    }

    #[test]
    fn arithmetic_tracks_precision() {
        let p = 7;
        let a = PadicValue::from_rational(&big_ratio(3, 2), p, 4).unwrap();
        let b = PadicValue::from_rational(&big_ratio(-3, 2), p, 4).unwrap();
        let s = a.add(&b).unwrap();
        assert!(s.is_zero());
        assert_eq!(s.abs_precision(), 4);

        // cancellation of one p-digit: 7/2 + 7/2 = 7, valuation 1
        let c = PadicValue::from_rational(&big_ratio(7, 2), p, 4).unwrap();
        let t = c.add(&c).unwrap();
        assert_eq!(t.valuation(), Some(1));
        assert_eq!(t.to_residue(4).unwrap().value_u64(), Some(7));

        // multiplication adds valuations
        let d = PadicValue::from_rational(&big_ratio(49, 3), p, 3).unwrap();
        let e = PadicValue::from_rational(&big_ratio(3, 7), p, 3).unwrap();
        let prod = d.mul(&e).unwrap();
        assert_eq!(prod.valuation(), Some(1));
        assert_eq!(prod.to_residue(4).unwrap().value_u64(), Some(7));
    }

    #[test]
    fn to_residue_matches_direct_reduction() {
        let q = big_ratio(22, 21); // 7-integral? no: denominator has 7 -> pole
        let x = PadicValue::from_rational(&q, 7, 3).unwrap();
        assert_eq!(x.valuation(), Some(-1));
        assert!(x.to_residue(2).is_err());

        let q = big_ratio(35, 4);
        let x = PadicValue::from_rational(&q, 7, 3).unwrap();
        let r = x.to_residue(3).unwrap();
        let direct = make_residue(&BigInt::from(35), &BigInt::from(4), &Modulus::from_u64(343)).unwrap();
        assert_eq!(r, direct);
    }
}
