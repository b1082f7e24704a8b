//! Harmonic-type sums with offsets and coprimality filters: one evaluator
//! covers the plain, shifted, filtered and power variants that the
//! congruence catalog needs.

use crate::error::{Error, Result};
use crate::residues::{batch_inverse, montgomery::gcd_u64, Modulus, ResidueClass};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

/// Specification of a sum of 1/(offset + k)^power over k = 1 .. len-1,
/// optionally restricted to k coprime to a filter value, evaluated in
/// Z/modulus. Construction validates that every summand denominator is
/// invertible.
#[derive(Clone, Debug)]
pub struct HarmonicSpec {
    pub power: u32,
    pub offset: i128,
    pub len: u64,
    pub coprime_filter: Option<u64>,
    pub modulus: Modulus,
}

impl HarmonicSpec {
    pub fn new(
        power: u32,
        offset: i128,
        len: u64,
        coprime_filter: Option<u64>,
        modulus: Modulus,
    ) -> Result<Self> {
        assert!(power >= 1);
        let spec = HarmonicSpec { power, offset, len, coprime_filter, modulus };
        spec.validate()?;
        Ok(spec)
    }

    /// Plain H_{p-1}^{(m)} shape: sum of 1/k^m for k = 1..p-1 mod modulus.
    pub fn plain(power: u32, p: u64, modulus: Modulus) -> Result<Self> {
        Self::new(power, 0, p, None, modulus)
    }

    fn validate(&self) -> Result<()> {
        let mb = self.modulus.to_biguint();
        let word = self.modulus.to_u64();
        for k in 1..self.len {
            if let Some(c) = self.coprime_filter {
                if gcd_u64(k, c) != 1 {
                    continue;
                }
            }
            let d = self.offset + k as i128;
            let ok = match word {
                Some(m) => {
                    let r = d.rem_euclid(m as i128) as u64;
                    gcd_u64(r, m) == 1
                }
                None => {
                    let r = BigInt::from(d).mod_floor(&BigInt::from(mb.clone()));
                    r.to_biguint().unwrap().gcd(&mb).is_one()
                }
            };
            if !ok {
                let dmag = BigInt::from(d).magnitude().clone();
                let g = (BigInt::from(d).mod_floor(&BigInt::from(mb.clone())))
                    .to_biguint()
                    .unwrap()
                    .gcd(&mb);
                return Err(Error::NonInvertibleDenominator { denom: dmag, modulus: mb, gcd: g });
            }
        }
        Ok(())
    }
}

/// Evaluate the specified sum with block batch inversion (one extended
/// Euclid per block).
pub fn harmonic_sum_mod(spec: &HarmonicSpec) -> Result<ResidueClass> {
    const BLOCK: usize = 1 << 14;
    let m = &spec.modulus;
    let mut acc = m.zero();
    let mut block: Vec<ResidueClass> = Vec::with_capacity(BLOCK);
    let flush = |block: &mut Vec<ResidueClass>, acc: &mut ResidueClass| -> Result<()> {
        if block.is_empty() {
            return Ok(());
        }
        let inverses = batch_inverse(block)?;
        for inv in inverses {
            *acc = acc.add(&inv.pow(spec.power as u64));
        }
        block.clear();
        Ok(())
    };
    for k in 1..spec.len {
        if let Some(c) = spec.coprime_filter {
            if gcd_u64(k, c) != 1 {
                continue;
            }
        }
        block.push(ResidueClass::from_i128(spec.offset + k as i128, m));
        if block.len() == BLOCK {
            flush(&mut block, &mut acc)?;
        }
    }
    flush(&mut block, &mut acc)?;
    Ok(acc)
}

/// H_{p-1}^{(power)} mod modulus: the sum the binomial tower checks feed on.
pub fn harmonic_number_mod(power: u32, p: u64, modulus: &Modulus) -> ResidueClass {
    let spec = HarmonicSpec::plain(power, p, modulus.clone()).expect("k < p is a unit mod p^e");
    harmonic_sum_mod(&spec).expect("validated")
}

/// Exact-rational oracle for harmonic sums (small ranges only).
pub fn harmonic_sum_exact(power: u32, offset: i128, len: u64, coprime_filter: Option<u64>) -> crate::Rational {
    let mut acc = crate::Rational::new(BigInt::from(0), BigInt::one());
    for k in 1..len {
        if let Some(c) = coprime_filter {
            if gcd_u64(k, c) != 1 {
                continue;
            }
        }
        let d = BigInt::from(offset + k as i128);
        acc += crate::Rational::new(BigInt::one(), d.pow(power));
    }
    acc
}

/// Alkan's sum: 1/(k(p-k)) over k = 1..(p-1)/2, mod p.
pub fn alkan_sum_mod(p: u64) -> ResidueClass {
    assert!(p >= 5);
    let m = Modulus::from_u64(p);
    let half = (p - 1) / 2;
    let denoms: Vec<ResidueClass> = (1..=half)
        .map(|k| ResidueClass::from_u64(k, &m).mul(&ResidueClass::from_u64(p - k, &m)))
        .collect();
    let inv = batch_inverse(&denoms).expect("k(p-k) is a unit mod p");
    let mut acc = m.zero();
    for t in inv {
        acc = acc.add(&t);
    }
    acc
}

/// Sum over pairs i < j of 1/(ij) mod p^e, in O(p) via the shuffle
/// identity 2*sum = H1^2 - H2.
pub fn multiple_harmonic_mod(p: u64, e: u32) -> ResidueClass {
    let m = Modulus::prime_power(p, e);
    let h1 = harmonic_number_mod(1, p, &m);
    let h2 = harmonic_number_mod(2, p, &m);
    let two_s = h1.mul(&h1).sub(&h2);
    two_s.mul(&ResidueClass::from_u64(2, &m).inverse().expect("p odd"))
}

/// Quadratic-time direct pair enumeration, the oracle for the shuffle
/// route (keep p small).
pub fn multiple_harmonic_pairs_oracle(p: u64, e: u32) -> ResidueClass {
    let m = Modulus::prime_power(p, e);
    let units: Vec<ResidueClass> = (1..p).map(|k| ResidueClass::from_u64(k, &m)).collect();
    let inv = batch_inverse(&units).expect("units");
    let mut acc = m.zero();
    for i in 0..inv.len() {
        for j in (i + 1)..inv.len() {
            acc = acc.add(&inv[i].mul(&inv[j]));
        }
    }
    acc
}
