//! Exact residue arithmetic over arbitrary moduli >= 2, extended to
//! rationals with denominator coprime to the modulus, plus p-adic
//! bookkeeping with explicit valuations.
//!
//! Moduli that fit a machine word take a fixed-width path; wider moduli
//! fall back to `BigUint`. The two paths are required to be bit-identical
//! and are pinned together by tests.

pub mod montgomery;
mod padic;

pub use padic::PadicValue;

use crate::error::{Error, Result};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

/// A modulus m >= 2, arbitrary precision with a machine-word fast path.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Modulus(ModRepr);

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum ModRepr {
    Word(u64),
    Big(BigUint),
}

impl Modulus {
    pub fn from_u64(m: u64) -> Self {
        assert!(m >= 2, "modulus must be >= 2");
        Modulus(ModRepr::Word(m))
    }

    pub fn new(m: BigUint) -> Self {
        assert!(m >= BigUint::from(2u32), "modulus must be >= 2");
        match m.to_u64() {
            Some(w) => Modulus(ModRepr::Word(w)),
            None => Modulus(ModRepr::Big(m)),
        }
    }

    /// p^e as a modulus, choosing the fast path when it fits.
    pub fn prime_power(p: u64, e: u32) -> Self {
        if let Some(m) = checked_pow_u64(p, e) {
            Modulus::from_u64(m)
        } else {
            Modulus::new(BigUint::from(p).pow(e))
        }
    }

    pub fn to_biguint(&self) -> BigUint {
        match &self.0 {
            ModRepr::Word(m) => BigUint::from(*m),
            ModRepr::Big(m) => m.clone(),
        }
    }

    pub fn to_u64(&self) -> Option<u64> {
        match &self.0 {
            ModRepr::Word(m) => Some(*m),
            ModRepr::Big(_) => None,
        }
    }

    /// Test-facing constructor that forces the wide path even for small
    /// moduli, so path equivalence can be pinned by property tests.
    pub fn forced_wide(m: BigUint) -> Self {
        assert!(m >= BigUint::from(2u32));
        Modulus(ModRepr::Big(m))
    }

    pub fn one(&self) -> ResidueClass {
        ResidueClass::from_u64(1, self)
    }

    pub fn zero(&self) -> ResidueClass {
        ResidueClass::from_u64(0, self)
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            ModRepr::Word(m) => write!(f, "{m}"),
            ModRepr::Big(m) => write!(f, "{m}"),
        }
    }
}

pub(crate) fn checked_pow_u64(p: u64, e: u32) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..e {
        acc = acc.checked_mul(p)?;
    }
    Some(acc)
}

/// An integer residue class: canonical representative 0 <= value < modulus.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ResidueClass(Repr);

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Repr {
    Word { v: u64, m: u64 },
    Big { v: BigUint, m: BigUint },
}

impl ResidueClass {
    pub fn from_u64(v: u64, m: &Modulus) -> Self {
        match &m.0 {
            ModRepr::Word(m) => ResidueClass(Repr::Word { v: v % m, m: *m }),
            ModRepr::Big(m) => ResidueClass(Repr::Big { v: BigUint::from(v) % m, m: m.clone() }),
        }
    }

    pub fn from_bigint(v: &BigInt, m: &Modulus) -> Self {
        match &m.0 {
            ModRepr::Word(mw) => {
                let mb = BigInt::from(*mw);
                let r = v.mod_floor(&mb).to_u64().expect("reduced residue fits");
                ResidueClass(Repr::Word { v: r, m: *mw })
            }
            ModRepr::Big(mb) => {
                let r = v.mod_floor(&BigInt::from(mb.clone()));
                ResidueClass(Repr::Big { v: r.to_biguint().expect("nonnegative"), m: mb.clone() })
            }
        }
    }

    pub fn from_i128(v: i128, m: &Modulus) -> Self {
        Self::from_bigint(&BigInt::from(v), m)
    }

    pub fn from_biguint(v: &BigUint, m: &Modulus) -> Self {
        match &m.0 {
            ModRepr::Word(mw) => {
                let r = (v % BigUint::from(*mw)).to_u64().unwrap();
                ResidueClass(Repr::Word { v: r, m: *mw })
            }
            ModRepr::Big(mb) => ResidueClass(Repr::Big { v: v % mb, m: mb.clone() }),
        }
    }

    pub fn modulus(&self) -> Modulus {
        match &self.0 {
            Repr::Word { m, .. } => Modulus(ModRepr::Word(*m)),
            Repr::Big { m, .. } => Modulus(ModRepr::Big(m.clone())),
        }
    }

    pub fn modulus_biguint(&self) -> BigUint {
        match &self.0 {
            Repr::Word { m, .. } => BigUint::from(*m),
            Repr::Big { m, .. } => m.clone(),
        }
    }

    pub fn value(&self) -> BigUint {
        match &self.0 {
            Repr::Word { v, .. } => BigUint::from(*v),
            Repr::Big { v, .. } => v.clone(),
        }
    }

    pub fn value_u64(&self) -> Option<u64> {
        match &self.0 {
            Repr::Word { v, .. } => Some(*v),
            Repr::Big { v, .. } => v.to_u64(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Word { v, .. } => *v == 0,
            Repr::Big { v, .. } => v.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.0 {
            Repr::Word { v, .. } => *v == 1,
            Repr::Big { v, .. } => v.is_one(),
        }
    }

    fn require_same_modulus(&self, other: &Self) -> Result<()> {
        let ok = match (&self.0, &other.0) {
            (Repr::Word { m: a, .. }, Repr::Word { m: b, .. }) => a == b,
            (Repr::Big { m: a, .. }, Repr::Big { m: b, .. }) => a == b,
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::ModulusMismatch {
                left: self.modulus_biguint(),
                right: other.modulus_biguint(),
            })
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.require_same_modulus(other).expect("residue arithmetic needs equal moduli");
        match (&self.0, &other.0) {
            (Repr::Word { v: a, m }, Repr::Word { v: b, .. }) => {
                let s = (*a as u128 + *b as u128) % *m as u128;
                ResidueClass(Repr::Word { v: s as u64, m: *m })
            }
            (Repr::Big { v: a, m }, Repr::Big { v: b, .. }) => {
                ResidueClass(Repr::Big { v: (a + b) % m, m: m.clone() })
            }
            _ => unreachable!(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.require_same_modulus(other).expect("residue arithmetic needs equal moduli");
        match (&self.0, &other.0) {
            (Repr::Word { v: a, m }, Repr::Word { v: b, .. }) => {
                let s = if a >= b { a - b } else { m - b + a };
                ResidueClass(Repr::Word { v: s, m: *m })
            }
            (Repr::Big { v: a, m }, Repr::Big { v: b, .. }) => {
                let s = if a >= b { a - b } else { m - b + a };
                ResidueClass(Repr::Big { v: s, m: m.clone() })
            }
            _ => unreachable!(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.require_same_modulus(other).expect("residue arithmetic needs equal moduli");
        match (&self.0, &other.0) {
            (Repr::Word { v: a, m }, Repr::Word { v: b, .. }) => ResidueClass(Repr::Word {
                v: montgomery::mulmod_u64(*a, *b, *m),
                m: *m,
            }),
            (Repr::Big { v: a, m }, Repr::Big { v: b, .. }) => {
                ResidueClass(Repr::Big { v: (a * b) % m, m: m.clone() })
            }
            _ => unreachable!(),
        }
    }

    pub fn neg(&self) -> Self {
        match &self.0 {
            Repr::Word { v, m } => {
                let r = if *v == 0 { 0 } else { m - v };
                ResidueClass(Repr::Word { v: r, m: *m })
            }
            Repr::Big { v, m } => {
                let r = if v.is_zero() { BigUint::zero() } else { m - v };
                ResidueClass(Repr::Big { v: r, m: m.clone() })
            }
        }
    }

    pub fn mul_u64(&self, k: u64) -> Self {
        let m = self.modulus();
        self.mul(&ResidueClass::from_u64(k, &m))
    }

    /// Modular inverse via extended Euclid.
    pub fn inverse(&self) -> Result<Self> {
        match &self.0 {
            Repr::Word { v, m } => match montgomery::inv_mod_u64(*v, *m) {
                Some(inv) => Ok(ResidueClass(Repr::Word { v: inv, m: *m })),
                None => Err(Error::NonInvertible {
                    value: BigUint::from(*v),
                    modulus: BigUint::from(*m),
                    gcd: BigUint::from(montgomery::gcd_u64(*v, *m)),
                }),
            },
            Repr::Big { v, m } => {
                let vb = BigInt::from(v.clone());
                let mb = BigInt::from(m.clone());
                let eg = vb.extended_gcd(&mb);
                if !eg.gcd.is_one() {
                    return Err(Error::NonInvertible {
                        value: v.clone(),
                        modulus: m.clone(),
                        gcd: eg.gcd.to_biguint().unwrap(),
                    });
                }
                let mut x = eg.x % &mb;
                if x.is_negative() {
                    x += &mb;
                }
                Ok(ResidueClass(Repr::Big { v: x.to_biguint().unwrap(), m: m.clone() }))
            }
        }
    }

    /// Square-and-multiply power; exponent 0 yields 1 even for base 0.
    pub fn pow(&self, e: u64) -> Self {
        match &self.0 {
            Repr::Word { v, m } => {
                ResidueClass(Repr::Word { v: montgomery::powmod_u64(*v, e, *m), m: *m })
            }
            Repr::Big { v, m } => {
                ResidueClass(Repr::Big { v: v.modpow(&BigUint::from(e), m), m: m.clone() })
            }
        }
    }

    /// Reduce to a divisor of the current modulus.
    pub fn reduce_to(&self, m2: &Modulus) -> Self {
        let big = self.modulus_biguint();
        let small = m2.to_biguint();
        debug_assert!((&big % &small).is_zero(), "reduce_to target must divide the modulus");
        ResidueClass::from_biguint(&self.value(), m2)
    }
}

impl fmt::Display for ResidueClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Word { v, .. } => write!(f, "{v}"),
            Repr::Big { v, .. } => write!(f, "{v}"),
        }
    }
}

/// numer / denom mod modulus, the paper-wide convention for rational
/// residues: requires gcd(denom, modulus) = 1.
pub fn make_residue(numer: &BigInt, denom: &BigInt, modulus: &Modulus) -> Result<ResidueClass> {
    let mb = modulus.to_biguint();
    let d = denom.magnitude() % &mb;
    let g = d.gcd(&mb);
    if !g.is_one() {
        return Err(Error::NonInvertibleDenominator {
            denom: denom.magnitude().clone(),
            modulus: mb,
            gcd: g,
        });
    }
    let num = ResidueClass::from_bigint(numer, modulus);
    let den = ResidueClass::from_bigint(denom, modulus);
    let inv = den.inverse()?;
    Ok(num.mul(&inv))
}

/// Residue of an exact rational (reduced form) with denominator coprime to
/// the modulus.
pub fn residue_of_rational(q: &crate::Rational, modulus: &Modulus) -> Result<ResidueClass> {
    make_residue(q.numer(), q.denom(), modulus)
}

/// Elementwise inverses of a slice sharing one modulus, by the
/// prefix-product trick: exactly one extended-Euclid call per batch.
pub fn batch_inverse(xs: &[ResidueClass]) -> Result<Vec<ResidueClass>> {
    if xs.is_empty() {
        return Ok(Vec::new());
    }
    let m = xs[0].modulus();
    for x in &xs[1..] {
        x.require_same_modulus(&xs[0])?;
    }
    let mut prefix = Vec::with_capacity(xs.len());
    let mut acc = m.one();
    for x in xs {
        acc = acc.mul(x);
        prefix.push(acc.clone());
    }
    let total_inv = match prefix.last().unwrap().inverse() {
        Ok(inv) => inv,
        Err(_) => {
            // Locate the first non-invertible element for the error report.
            let mb = m.to_biguint();
            for (i, x) in xs.iter().enumerate() {
                let g = x.value().gcd(&mb);
                if !g.is_one() {
                    return Err(Error::BatchNonInvertible {
                        index: i,
                        source: Box::new(Error::NonInvertible {
                            value: x.value(),
                            modulus: mb.clone(),
                            gcd: g,
                        }),
                    });
                }
            }
            unreachable!("product non-invertible but every factor is a unit");
        }
    };
    let mut out = vec![m.one(); xs.len()];
    let mut suffix_inv = total_inv;
    for i in (0..xs.len()).rev() {
        out[i] = if i == 0 {
            suffix_inv.clone()
        } else {
            suffix_inv.mul(&prefix[i - 1])
        };
        suffix_inv = suffix_inv.mul(&xs[i]);
    }
    Ok(out)
}

/// Chinese remainder combination of residues with pairwise-coprime moduli.
pub fn crt_combine(parts: &[ResidueClass]) -> Result<ResidueClass> {
    assert!(!parts.is_empty(), "crt_combine needs at least one part");
    let mut acc_v = BigInt::from(parts[0].value());
    let mut acc_m = BigInt::from(parts[0].modulus_biguint());
    for part in &parts[1..] {
        let m2 = BigInt::from(part.modulus_biguint());
        let g = acc_m.gcd(&m2);
        if !g.is_one() {
            return Err(Error::NonCoprimeModuli {
                a: acc_m.to_biguint().unwrap(),
                b: m2.to_biguint().unwrap(),
                gcd: g.to_biguint().unwrap(),
            });
        }
        // x = acc_v + acc_m * t with t = (v2 - acc_v)/acc_m mod m2
        let inv = {
            let eg = acc_m.extended_gcd(&m2);
            let mut x = eg.x % &m2;
            if x.is_negative() {
                x += &m2;
            }
            x
        };
        let diff = (BigInt::from(part.value()) - &acc_v).mod_floor(&m2);
        let t = (diff * inv).mod_floor(&m2);
        acc_v += &acc_m * t;
        acc_m *= &m2;
    }
    let modulus = Modulus::new(acc_m.to_biguint().unwrap());
    Ok(ResidueClass::from_bigint(&acc_v, &modulus))
}

/// p-adic valuation and unit part of a nonzero BigInt.
pub fn split_p_power(v: &BigInt, p: u64) -> (u64, BigInt) {
    assert!(!v.is_zero());
    let pb = BigInt::from(p);
    let mut val = 0u64;
    let mut u = v.clone();
    loop {
        let (q, r) = u.div_rem(&pb);
        if r.is_zero() {
            val += 1;
            u = q;
        } else {
            break;
        }
    }
    (val, u)
}

/// p-adic valuation of a nonzero rational (can be negative).
pub fn rational_valuation(q: &crate::Rational, p: u64) -> i64 {
    assert!(!q.is_zero());
    let (vn, _) = split_p_power(q.numer(), p);
    let (vd, _) = split_p_power(q.denom(), p);
    vn as i64 - vd as i64
}

/// Construct a BigInt from sign and magnitude helpers used around the crate.
pub fn bigint(n: i64) -> BigInt {
    BigInt::from(n)
}

pub fn big_ratio(n: i64, d: i64) -> crate::Rational {
    crate::Rational::new(BigInt::from(n), BigInt::from(d))
}


#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn word_and_wide(v: u64, m: u64) -> (ResidueClass, ResidueClass) {
        let mw = Modulus::from_u64(m);
        let mb = Modulus::forced_wide(BigUint::from(m));
        (ResidueClass::from_u64(v, &mw), ResidueClass::from_u64(v, &mb))
    }

    #[test]
    fn make_residue_examples() {
        // identity
        let m = Modulus::from_u64(125);
        assert_eq!(make_residue(&bigint(1), &bigint(1), &m).unwrap().value_u64(), Some(1));
        // H_4 = 25/12 has numerator divisible by 25
        let m = Modulus::from_u64(25);
        assert_eq!(make_residue(&bigint(25), &bigint(12), &m).unwrap().value_u64(), Some(0));
        // 1/8 mod 11 = 7 because 8*7 = 56 = 5*11 + 1
        let m = Modulus::from_u64(11);
        assert_eq!(make_residue(&bigint(1), &bigint(8), &m).unwrap().value_u64(), Some(7));
        // shared factor is rejected with the gcd reported
        let m = Modulus::from_u64(9);
        match make_residue(&bigint(1), &bigint(6), &m) {
            Err(Error::NonInvertibleDenominator { gcd, .. }) => {
                assert_eq!(gcd, BigUint::from(3u32))
            }
            other => panic!("expected NonInvertibleDenominator, got {other:?}"),
        }
    }

    #[test]
    fn inverse_examples() {
        let m7 = Modulus::from_u64(7);
        assert!(ResidueClass::from_u64(1, &m7).inverse().unwrap().is_one());
        let m11 = Modulus::from_u64(11);
        assert_eq!(ResidueClass::from_u64(4, &m11).inverse().unwrap().value_u64(), Some(3));
        let m9 = Modulus::from_u64(9);
        match ResidueClass::from_u64(6, &m9).inverse() {
            Err(Error::NonInvertible { gcd, .. }) => assert_eq!(gcd, BigUint::from(3u32)),
            other => panic!("expected NonInvertible, got {other:?}"),
        }
    }

    #[test]
    fn batch_inverse_examples() {
        let m5 = Modulus::from_u64(5);
        let xs: Vec<_> = [1u64].iter().map(|&v| ResidueClass::from_u64(v, &m5)).collect();
        let inv = batch_inverse(&xs).unwrap();
        assert_eq!(inv[0].value_u64(), Some(1));

        let xs: Vec<_> = [1u64, 2, 3, 4].iter().map(|&v| ResidueClass::from_u64(v, &m5)).collect();
        let inv = batch_inverse(&xs).unwrap();
        let got: Vec<u64> = inv.iter().map(|r| r.value_u64().unwrap()).collect();
        assert_eq!(got, vec![1, 3, 2, 4]);

        let m8 = Modulus::from_u64(8);
        let xs: Vec<_> = [2u64, 4].iter().map(|&v| ResidueClass::from_u64(v, &m8)).collect();
        match batch_inverse(&xs) {
            Err(Error::BatchNonInvertible { index, .. }) => assert_eq!(index, 0),
            other => panic!("expected BatchNonInvertible, got {other:?}"),
        }
    }

    #[test]
    fn pow_examples() {
        let m7 = Modulus::from_u64(7);
        assert!(ResidueClass::from_u64(2, &m7).pow(6).is_one());
        let m10 = Modulus::from_u64(10);
        assert!(ResidueClass::from_u64(3, &m10).pow(4).is_one());
        // exponent 0 yields 1 even for base 0
        assert!(ResidueClass::from_u64(0, &m10).pow(0).is_one());
    }

    #[test]
    fn crt_examples() {
        let m3 = Modulus::from_u64(3);
        let m5 = Modulus::from_u64(5);
        let single = crt_combine(&[ResidueClass::from_u64(1, &m3)]).unwrap();
        assert_eq!(single.value_u64(), Some(1));
        assert_eq!(single.modulus_biguint(), BigUint::from(3u32));

        let combined = crt_combine(&[
            ResidueClass::from_u64(2, &m3),
            ResidueClass::from_u64(3, &m5),
        ])
        .unwrap();
        assert_eq!(combined.value_u64(), Some(8));
        assert_eq!(combined.modulus_biguint(), BigUint::from(15u32));

        let m4 = Modulus::from_u64(4);
        let m6 = Modulus::from_u64(6);
        match crt_combine(&[ResidueClass::from_u64(1, &m4), ResidueClass::from_u64(1, &m6)]) {
            Err(Error::NonCoprimeModuli { gcd, .. }) => assert_eq!(gcd, BigUint::from(2u32)),
            other => panic!("expected NonCoprimeModuli, got {other:?}"),
        }
    }

    #[test]
    fn fermat_little_theorem_small_primes() {
        for p in crate::primes::primes_up_to(10_000) {
            if p < 3 {
                continue;
            }
            let m = Modulus::from_u64(p);
            // sample a few bases rather than all for the big primes
            let step = (p / 17).max(1);
            let mut a = 1u64;
            while a < p {
                assert!(ResidueClass::from_u64(a, &m).pow(p - 1).is_one(), "a={a} p={p}");
                a += step;
            }
        }
    }

    proptest! {
        #[test]
        fn inverse_times_value_is_one(m in 2u64..1_000_000, x in 1u64..1_000_000) {
            let modulus = Modulus::from_u64(m);
            let r = ResidueClass::from_u64(x, &modulus);
            if montgomery::gcd_u64(x % m, m) == 1 && x % m != 0 {
                let inv = r.inverse().unwrap();
                prop_assert!(inv.mul(&r).is_one());
            }
        }

        #[test]
        fn batch_matches_single(m in 2u64..1_000_000, xs in proptest::collection::vec(1u64..1_000_000, 1..64)) {
            let modulus = Modulus::from_u64(m);
            let units: Vec<_> = xs.iter()
                .map(|&x| ResidueClass::from_u64(x, &modulus))
                .filter(|r| montgomery::gcd_u64(r.value_u64().unwrap(), m) == 1)
                .collect();
            if !units.is_empty() {
                let batch = batch_inverse(&units).unwrap();
                for (b, u) in batch.iter().zip(units.iter()) {
                    prop_assert_eq!(b, &u.inverse().unwrap());
                }
            }
        }

        #[test]
        fn make_residue_times_denominator(m in 2u64..1_000_000, a in 0i64..1_000_000, b in 1u64..1_000_000) {
            let modulus = Modulus::from_u64(m);
            if montgomery::gcd_u64(b % m, m) == 1 {
                let r = make_residue(&bigint(a), &bigint(b as i64), &modulus).unwrap();
                let back = r.mul(&ResidueClass::from_u64(b, &modulus));
                prop_assert_eq!(back, ResidueClass::from_i128(a as i128, &modulus));
            }
        }

        #[test]
        fn crt_reduces_back(r1 in 0u64..1000, r2 in 0u64..1000, m1 in 2u64..1000, m2 in 2u64..1000) {
            if montgomery::gcd_u64(m1, m2) == 1 {
                let p1 = ResidueClass::from_u64(r1, &Modulus::from_u64(m1));
                let p2 = ResidueClass::from_u64(r2, &Modulus::from_u64(m2));
                let c = crt_combine(&[p1.clone(), p2.clone()]).unwrap();
                prop_assert_eq!(c.reduce_to(&Modulus::from_u64(m1)), p1);
                prop_assert_eq!(c.reduce_to(&Modulus::from_u64(m2)), p2);
            }
        }

        #[test]
        fn word_and_wide_paths_bit_identical(m in 2u64..u64::MAX, a in 0u64..u64::MAX, b in 0u64..u64::MAX, e in 0u64..1000) {
            let (aw, ab) = word_and_wide(a % m, m);
            let (bw, bb) = word_and_wide(b % m, m);
            prop_assert_eq!(aw.add(&bw).value(), ab.add(&bb).value());
            prop_assert_eq!(aw.sub(&bw).value(), ab.sub(&bb).value());
            prop_assert_eq!(aw.mul(&bw).value(), ab.mul(&bb).value());
            prop_assert_eq!(aw.pow(e).value(), ab.pow(e).value());
            let iw = aw.inverse();
            let ib = ab.inverse();
            match (iw, ib) {
                (Ok(x), Ok(y)) => prop_assert_eq!(x.value(), y.value()),
                (Err(_), Err(_)) => {}
                other => prop_assert!(false, "paths disagree on invertibility: {:?}", other),
            }
        }
    }
}
