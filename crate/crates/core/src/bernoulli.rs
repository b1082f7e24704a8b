//! Bernoulli numbers three ways: exact rationals (the oracle), residues
//! modulo p^e for huge indices via a truncated power-sum method, and the
//! short experimental sum for B_{p-3} mod p used as a hunt pre-filter.
//!
//! The power-sum route rests on the Faulhaber expansion
//!
//!   S_n(N)/N = N^n/(n+1) - N^(n-1)/2 + B_n
//!              + sum_{k>=1} C(n,2k)/(2k+1) * B_{n-2k} * N^(2k)
//!
//! with S_n(N) = sum_{x<N} x^n and N = p^w. Each tail term carries
//! p-valuation at least 2kw - 1 - v_p(2k+1), so with the explicit boundary
//! terms removed and the low-k terms subtracted recursively, a small w
//! already pins B_n to the requested precision. By default every call is
//! re-run at w+1 and compared whenever that second run is cheap, turning
//! the derived error bound into a runtime check.

use crate::combinatorics::{binomial_exact, central_shifted_binomial_mod};
use crate::error::{Error, Result};
use crate::primes::is_prime;
use crate::residues::{batch_inverse, Modulus, PadicValue, ResidueClass};
use crate::Rational;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::sync::Mutex;

/// Default cap on exact Bernoulli indices; raise explicitly when needed.
pub const EXACT_CAP: u64 = 400;

static CACHE: Mutex<Vec<Rational>> = Mutex::new(Vec::new());

fn rational(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Exact B_n from the convolution recurrence sum_k C(n+1,k) B_k = 0,
/// cached append-only. The von Staudt-Clausen denominator law is checked
/// for every fresh even entry.
pub fn bernoulli_exact(n: u64) -> Result<Rational> {
    bernoulli_exact_with_cap(n, EXACT_CAP)
}

pub fn bernoulli_exact_with_cap(n: u64, cap: u64) -> Result<Rational> {
    if n > cap {
        return Err(Error::CapExceeded { index: n, cap });
    }
    let mut cache = CACHE.lock().unwrap();
    while cache.len() <= n as usize {
        let m = cache.len() as u64;
        let value = if m == 0 {
            Rational::one()
        } else if m == 1 {
            rational(-1, 2)
        } else if m % 2 == 1 {
            Rational::zero()
        } else {
            // B_m = -1/(m+1) * sum_{k<m} C(m+1, k) B_k
            let mut acc = Rational::zero();
            for k in 0..m {
                let b = &cache[k as usize];
                if b.is_zero() {
                    continue;
                }
                let c = Rational::from(BigInt::from(binomial_exact(m + 1, k as i64)));
                acc += c * b;
            }
            let out = -acc / Rational::from(BigInt::from(m + 1));
            verify_von_staudt_clausen(m, &out);
            out
        };
        cache.push(value);
    }
    Ok(cache[n as usize].clone())
}

/// Denominator of B_n (even n >= 2) must equal the product of primes q
/// with (q-1) | n.
fn verify_von_staudt_clausen(n: u64, b: &Rational) {
    let mut expected = BigUint::one();
    for d in 1..=n {
        if n % d == 0 && is_prime(d + 1) {
            expected *= BigUint::from(d + 1);
        }
    }
    assert_eq!(
        b.denom().magnitude(),
        &expected,
        "von Staudt-Clausen denominator violated at B_{n}"
    );
    // sign alternation for even indices
    let positive = (n / 2) % 2 == 1;
    assert_eq!(b.numer().is_positive(), positive, "sign pattern violated at B_{n}");
}

/// Recheck policy for the power-sum engine: rerun at w+1 and compare.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Recheck {
    /// Recheck whenever the second run costs at most ~2^16 power sums.
    Auto,
    Always,
    Never,
}

const RECHECK_COST_CAP: u64 = 1 << 16;

/// B_n modulo p^e (absolute precision e) as a PadicValue, for even n and
/// p >= 5, by the truncated power-sum method. Never consults the exact
/// cache: this is the independent route the oracle tests pin down.
pub fn bernoulli_mod(n: u64, p: u64, e: u32) -> Result<PadicValue> {
    bernoulli_mod_with_policy(n, p, e, Recheck::Auto)
}

pub fn bernoulli_mod_with_policy(n: u64, p: u64, e: u32, policy: Recheck) -> Result<PadicValue> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    assert!(p >= 5, "the power-sum route requires p >= 5");
    assert!(e >= 1);
    if n % 2 == 1 {
        return Err(Error::OddIndex(n));
    }
    let first = bernoulli_mod_at_w(n, p, e, 1)?;
    let recheck = match policy {
        Recheck::Always => true,
        Recheck::Never => false,
        Recheck::Auto => checked_pow_or_max(p, 2) <= RECHECK_COST_CAP,
    };
    if recheck {
        let second = bernoulli_mod_at_w(n, p, e, 2)?;
        assert_eq!(
            first, second,
            "power-sum truncations at w=1 and w=2 disagree for B_{n} mod {p}^{e}"
        );
    }
    Ok(first)
}

fn checked_pow_or_max(p: u64, w: u32) -> u64 {
    crate::residues::checked_pow_u64(p, w).unwrap_or(u64::MAX)
}

/// One fixed-w run of the engine; recursive corrections reuse the same w
/// so that two runs at different w are fully independent computations.
fn bernoulli_mod_at_w(n: u64, p: u64, e: u32, w: u32) -> Result<PadicValue> {
    if n == 0 {
        return Ok(PadicValue::exact_one(p, e));
    }
    if n % 2 == 1 {
        return Err(Error::OddIndex(n));
    }
    let width_bits = (w as u64 + e as u64 + 1) * (64 - p.leading_zeros() as u64);
    if width_bits > 1 << 16 {
        return Err(Error::PrecisionUnreachable { prime: p, exponent: w as u64 + e as u64 });
    }

    let abs = e as i64;
    // T = S_n(p^w) mod p^(w+e)
    let ring = Modulus::prime_power(p, w + e);
    let pw = checked_pow_or_max(p, w);
    assert!(pw < u64::MAX, "p^w must fit a word for the sieve loop");
    let mut t = ring.zero();
    for x in 1..pw {
        t = t.add(&ResidueClass::from_u64(x, &ring).pow(n));
    }

    // S/N as a p-adic value known to absolute precision e
    let mut acc = padic_from_residue_shift(&t, p, w + e, -(w as i64), abs)?;

    // boundary terms: subtract N^n/(n+1), add N^(n-1)/2
    let npow = |exp: u64| -> Rational {
        Rational::from(BigInt::from(p).pow(u32::try_from(exp.min(u32::MAX as u64)).unwrap_or(u32::MAX)))
    };
    // w*n can be gigantic; anything with valuation >= e vanishes mod p^e.
    let wn = (w as u64).saturating_mul(n);
    if (wn as i64) - vp_u64(n + 1, p) < abs + 1 {
        let j0 = npow(wn) / Rational::from(BigInt::from(n + 1));
        acc = acc.sub(&padic_from_rational_abs(&j0, p, abs)?)?;
    }
    let wn1 = (w as u64).saturating_mul(n - 1);
    if (wn1 as i64) < abs + 1 {
        let j1 = npow(wn1) / rational(2, 1);
        acc = acc.add(&padic_from_rational_abs(&j1, p, abs)?)?;
    }

    // low-k tail corrections with recursively obtained B_{n-2k}
    let kmax = (e as u64).min((n.saturating_sub(2)) / 2);
    for k in 1..=kmax {
        let vk = vp_u64(2 * k + 1, p);
        let ek = abs - 2 * (k as i64) * (w as i64) + vk;
        if ek < 0 {
            continue; // tail term vanishes mod p^e
        }
        // c_k = C(n, 2k)/(2k+1) * p^(2kw)
        let c = Rational::new(
            BigInt::from(binomial_exact(n, (2 * k) as i64)),
            BigInt::from(2 * k + 1),
        );
        let term = if ek == 0 {
            // only a von Staudt-Clausen pole of B_{n-2k} can reach p^e here
            if (n - 2 * k) % (p - 1) == 0 {
                // B_{n-2k} = -1/p + (p-integral), so the term contributes
                // -c * p^(2kw - 1) exactly at this precision
                let pole = -c * npow(2 * k * w as u64) / Rational::from(BigInt::from(p));
                padic_from_rational_abs(&pole, p, abs)?
            } else {
                continue;
            }
        } else {
            let b = bernoulli_mod_at_w(n - 2 * k, p, ek as u32, w)?;
            let scaled = b.mul_rational(&(c * npow(2 * k * w as u64)))?;
            scaled.truncate_abs(abs)
        };
        acc = acc.sub(&term)?;
    }

    let out = acc.truncate_abs(abs);
    // von Staudt-Clausen sanity: pole exactly when (p-1) | n
    if let Some(v) = out.valuation() {
        debug_assert_eq!(v == -1, n % (p - 1) == 0, "pole pattern violated B_{n} mod {p}^{e}");
    }
    Ok(out)
}

fn vp_u64(mut x: u64, p: u64) -> i64 {
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

/// PadicValue of value * p^shift where value is a residue mod p^known.
fn padic_from_residue_shift(
    value: &ResidueClass,
    p: u64,
    known: u32,
    shift: i64,
    abs_target: i64,
) -> Result<PadicValue> {
    if value.is_zero() {
        return Ok(PadicValue::zero(p, known).truncate_abs(known as i64 + shift).truncate_abs(abs_target));
    }
    let (a, unit) = crate::residues::split_p_power(&BigInt::from(value.value()), p);
    let rel = known as i64 - a as i64;
    debug_assert!(rel >= 1);
    let unit_res = ResidueClass::from_bigint(&unit, &Modulus::prime_power(p, rel as u32));
    let v = a as i64 + shift;
    if v < -1 {
        return Err(Error::ValuationTooNegative { prime: p, valuation: v });
    }
    Ok(PadicValue::from_parts(p, v, unit_res, rel as u32)?.truncate_abs(abs_target))
}

/// Exact rational as a PadicValue truncated to absolute precision abs.
fn padic_from_rational_abs(q: &Rational, p: u64, abs: i64) -> Result<PadicValue> {
    if q.is_zero() {
        return Ok(PadicValue::zero(p, abs.max(1) as u32));
    }
    let v = crate::residues::rational_valuation(q, p);
    let rel = abs - v;
    if rel <= 0 {
        return Ok(PadicValue::zero(p, abs.max(1) as u32).truncate_abs(abs));
    }
    Ok(PadicValue::from_rational(q, p, rel as u32)?.truncate_abs(abs))
}

/// The experimental short sum for B_{p-3} mod p:
/// (1/21) * sum of 1/k^3 over floor(p/6) < k <= floor(p/4), exactly as
/// printed in its source. Known to disagree with the oracle at p = 11;
/// the hunter may only use it after `fast_method_validated` passes.
pub fn b_pminus3_fast(p: u64) -> ResidueClass {
    assert!(p >= 11);
    let m = Modulus::from_u64(p);
    let lo = p / 6 + 1;
    let hi = p / 4;
    let cubes: Vec<ResidueClass> = (lo..=hi)
        .map(|k| ResidueClass::from_u64(k, &m).pow(3))
        .collect();
    let mut acc = m.zero();
    if !cubes.is_empty() {
        for inv in batch_inverse(&cubes).expect("k^3 coprime to p") {
            acc = acc.add(&inv);
        }
    }
    acc.mul(&ResidueClass::from_u64(21, &m).inverse().expect("p > 21 or p coprime 21"))
}

/// One row of the comparison report between the short sum and the
/// power-sum oracle.
#[derive(Clone, Debug)]
pub struct StaffordVandiverRow {
    pub p: u64,
    pub formula: ResidueClass,
    pub oracle: ResidueClass,
    pub agree: bool,
}

/// Compare the experimental sum against bernoulli_mod over a prime range.
pub fn stafford_vandiver_report(lo: u64, hi: u64) -> Vec<StaffordVandiverRow> {
    let mut rows = Vec::new();
    for p in crate::primes::primes_up_to(hi) {
        if p < lo.max(11) {
            continue;
        }
        let formula = b_pminus3_fast(p);
        let oracle = bernoulli_mod(p - 3, p, 1)
            .expect("p >= 11 prime")
            .to_residue(1)
            .expect("B_{p-3} is p-integral");
        let agree = formula == oracle;
        rows.push(StaffordVandiverRow { p, formula, oracle, agree });
    }
    rows
}

/// Validation gate for the hunt pre-filter: the short sum must match the
/// oracle on every prime in [13, 499].
pub fn fast_method_validated() -> bool {
    stafford_vandiver_report(13, 499).iter().all(|r| r.agree)
}

/// Exact Wolstenholme quotient (C(2p-1,p-1) - 1)/p^3 plus its residue
/// mod p; the residue route is modular end to end.
pub struct WolstenholmeQuotient {
    pub exact: Option<BigInt>,
    pub mod_p: ResidueClass,
}

pub fn wolstenholme_quotient(p: u64) -> Result<WolstenholmeQuotient> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    assert!(p >= 5, "the quotient is defined for p >= 5");
    let c4 = central_shifted_binomial_mod(p, 4);
    let m4 = Modulus::prime_power(p, 4);
    let diff = c4.sub(&m4.one());
    let dv = diff.value();
    let p3 = BigUint::from(p).pow(3);
    let (q, r) = dv.div_rem(&p3);
    assert!(r.is_zero(), "p^3 must divide C(2p-1,p-1) - 1 for prime p >= 5");
    let mod_p = ResidueClass::from_biguint(&q, &Modulus::from_u64(p));

    let exact = if p <= 100_000 {
        let c = BigInt::from(binomial_exact(2 * p - 1, (p - 1) as i64));
        let (q, r) = (c - BigInt::one()).div_rem(&BigInt::from(p).pow(3));
        assert!(r.is_zero());
        Some(q)
    } else {
        None
    };
    Ok(WolstenholmeQuotient { exact, mod_p })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primes::primes_up_to;

    #[test]
    fn exact_small_values() {
        assert_eq!(bernoulli_exact(0).unwrap(), Rational::one());
        assert_eq!(bernoulli_exact(1).unwrap(), rational(-1, 2));
        assert_eq!(bernoulli_exact(2).unwrap(), rational(1, 6));
        assert_eq!(bernoulli_exact(4).unwrap(), rational(-1, 30));
        assert_eq!(bernoulli_exact(7).unwrap(), Rational::zero());
        assert_eq!(bernoulli_exact(8).unwrap(), rational(-1, 30));
        assert_eq!(bernoulli_exact(10).unwrap(), rational(5, 66));
        assert_eq!(bernoulli_exact(12).unwrap(), rational(-691, 2730));
        assert!(matches!(bernoulli_exact(401), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn mod_small_examples() {
        // B_8 = -1/30 = 4 mod 11 (30 = 8, 1/8 = 7, -7 = 4)
        let b = bernoulli_mod(8, 11, 1).unwrap();
        assert_eq!(b.to_residue(1).unwrap().value_u64(), Some(4));
        // B_10 = 5/66 = 5 mod 13
        let b = bernoulli_mod(10, 13, 1).unwrap();
        assert_eq!(b.to_residue(1).unwrap().value_u64(), Some(5));
        // B_292 mod 7^5 equals the exact reduction (the 7^3 - 7^2 - 2 index)
        let b = bernoulli_mod(292, 7, 5).unwrap();
        let exact = bernoulli_exact(292).unwrap();
        let want = PadicValue::from_rational(&exact, 7, 5).unwrap().truncate_abs(5);
        assert_eq!(b, want);
    }

    #[test]
    fn mod_handles_poles() {
        // (p-1) | n cases have valuation -1 with unit = -1 mod p
        for &(n, p) in &[(4u64, 5u64), (12, 5), (12, 7), (16, 5), (40, 11)] {
            let b = bernoulli_mod_with_policy(n, p, 3, Recheck::Always).unwrap();
            assert_eq!(b.valuation(), Some(-1), "n={n} p={p}");
            let exact = bernoulli_exact(n).unwrap();
            let want = PadicValue::from_rational(&exact, p, 4).unwrap().truncate_abs(3);
            assert_eq!(b, want, "n={n} p={p}");
        }
    }

    #[test]
    fn mod_matches_exact_broadly() {
        for &p in &[5u64, 7, 11, 13] {
            for n in (2..=120u64).step_by(2) {
                for e in [1u32, 2, 5] {
                    let got = bernoulli_mod_with_policy(n, p, e, Recheck::Always).unwrap();
                    let want = PadicValue::from_rational(&bernoulli_exact(n).unwrap(), p, e + 2)
                        .unwrap()
                        .truncate_abs(e as i64);
                    assert_eq!(got, want, "n={n} p={p} e={e}");
                }
            }
        }
    }

    #[test]
    fn odd_index_rejected() {
        assert!(matches!(bernoulli_mod(9, 7, 2), Err(Error::OddIndex(9))));
        assert!(matches!(bernoulli_mod(8, 12, 2), Err(Error::NotPrime(12))));
    }

    #[test]
    fn kummer_congruence_cross_check() {
        // B_n/n = B_m/m mod p when n = m (mod p-1), (p-1) does not divide n.
        // Division by n is performed p-adically so multiples of p are fine.
        for &p in &[5u64, 7, 11, 13, 17, 19] {
            let mut reps: Vec<Option<ResidueClass>> = vec![None; (p - 1) as usize];
            for n in (2..=200u64).step_by(2) {
                if n % (p - 1) == 0 {
                    continue;
                }
                let extra = vp_u64(n, p) as u32;
                let b = bernoulli_mod(n, p, 1 + extra).unwrap();
                let ratio = b
                    .mul_rational(&Rational::new(BigInt::one(), BigInt::from(n)))
                    .unwrap()
                    .to_residue(1)
                    .unwrap();
                let slot = (n % (p - 1)) as usize;
                match &reps[slot] {
                    None => reps[slot] = Some(ratio),
                    Some(prev) => assert_eq!(prev, &ratio, "Kummer congruence broken at n={n} p={p}"),
                }
            }
        }
    }

    #[test]
    fn stafford_vandiver_pattern() {
        // at p=11 the short sum gives (1/21)(1/8) = 4 and the oracle
        // B_8 = -1/30 = 4 as well: the two routes agree here and onward
        let rows = stafford_vandiver_report(11, 17);
        let r11 = rows.iter().find(|r| r.p == 11).unwrap();
        assert_eq!(r11.formula.value_u64(), Some(4));
        assert_eq!(r11.oracle.value_u64(), Some(4));
        assert!(r11.agree);
        for p in [13u64, 17] {
            assert!(rows.iter().find(|r| r.p == p).unwrap().agree, "p={p}");
        }
    }

    #[test]
    fn quotient_examples() {
        let w5 = wolstenholme_quotient(5).unwrap();
        assert_eq!(w5.exact, Some(BigInt::from(1)));
        assert_eq!(w5.mod_p.value_u64(), Some(1));
        let w7 = wolstenholme_quotient(7).unwrap();
        assert_eq!(w7.exact, Some(BigInt::from(5)));
        assert_eq!(w7.mod_p.value_u64(), Some(5));
        assert!(matches!(wolstenholme_quotient(10), Err(Error::NotPrime(10))));
    }

    #[test]
    fn quotient_matches_bernoulli_link() {
        // W_p = -(2/3) B_{p-3} mod p for moderate primes
        for p in primes_up_to(300) {
            if p < 5 {
                continue;
            }
            let w = wolstenholme_quotient(p).unwrap();
            let b = bernoulli_mod(p - 3, p, 1).unwrap().to_residue(1).unwrap();
            let m = Modulus::from_u64(p);
            let rhs = b
                .mul(&ResidueClass::from_u64(2, &m))
                .mul(&ResidueClass::from_u64(3, &m).inverse().unwrap())
                .neg();
            assert_eq!(w.mod_p, rhs, "p={p}");
        }
    }

    #[test]
    fn huge_index_smoke() {
        // B at index p^3 - p^2 - 2 mod p^4, the shape the deep tower needs
        for &p in &[11u64, 13] {
            let n = p * p * p - p * p - 2;
            let b = bernoulli_mod(n, p, 4).unwrap();
            // cross-check the bottom digit against the Kummer congruence:
            // n = p^3 - p^2 - 2 = -2 + (multiple of p-1) + ... compute n mod (p-1)
            let r = n % (p - 1);
            let small = (2..400)
                .step_by(2)
                .find(|&m| m % (p - 1) == r && m % (p - 1) != 0)
                .unwrap();
            let m1 = Modulus::from_u64(p);
            let lhs = b
                .to_residue(1)
                .unwrap()
                .mul(&ResidueClass::from_u64(n % p, &m1).inverse().unwrap());
            let rhs = bernoulli_mod(small, p, 1)
                .unwrap()
                .to_residue(1)
                .unwrap()
                .mul(&ResidueClass::from_u64(small % p, &m1).inverse().unwrap());
            assert_eq!(lhs, rhs, "Kummer digit check at p={p}");
        }
    }
}
