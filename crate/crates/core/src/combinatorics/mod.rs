//! Exact and modular binomial coefficients (Lucas/Kummer fast paths and a
//! stripped-factorial engine for prime-power moduli), Apery numbers, and
//! the binomial sums tied to the congruence catalog.
//!
//! Every fast path here ships with a slow exact path; the property tests
//! pin them together.

pub mod harmonic;

pub use harmonic::{
    alkan_sum_mod, harmonic_number_mod, harmonic_sum_mod, multiple_harmonic_mod,
    multiple_harmonic_pairs_oracle, HarmonicSpec,
};

use crate::error::{Error, Result};
use crate::primes::valuation_u64;
use crate::residues::{crt_combine, Modulus, ResidueClass};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

/// Exact binomial coefficient by the multiplicative formula with running
/// (always exact) division. Out-of-range m yields 0.
pub fn binomial_exact(n: u64, m: i64) -> BigUint {
    if m < 0 || m as u64 > n {
        return BigUint::zero();
    }
    let m = (m as u64).min(n - m as u64);
    let mut acc = BigUint::one();
    for k in 1..=m {
        acc = acc * BigUint::from(n - m + k) / BigUint::from(k);
    }
    acc
}

/// Number of carries when adding m and n-m in base p: the exact p-adic
/// valuation of C(n, m).
pub fn kummer_valuation(n: u64, m: u64, p: u64) -> u32 {
    assert!(m <= n, "kummer_valuation needs 0 <= m <= n");
    let (mut a, mut b) = (m, n - m);
    let mut carry = 0u64;
    let mut carries = 0u32;
    while a > 0 || b > 0 || carry > 0 {
        let s = a % p + b % p + carry;
        carry = (s >= p) as u64;
        carries += carry as u32;
        a /= p;
        b /= p;
    }
    carries
}

/// Digitwise product of base-p digit binomials, reduced mod p.
pub fn lucas_binomial_mod_p(n: u64, m: u64, p: u64) -> ResidueClass {
    let modulus = Modulus::from_u64(p);
    if m > n {
        return modulus.zero();
    }
    // factorials mod p for digit binomials
    let mut fact = vec![1u64; p as usize];
    for i in 2..p as usize {
        fact[i] = crate::residues::montgomery::mulmod_u64(fact[i - 1], i as u64, p);
    }
    let digit_binom = |nd: u64, md: u64| -> Option<u64> {
        if md > nd {
            return None;
        }
        let num = fact[nd as usize];
        let den = crate::residues::montgomery::mulmod_u64(fact[md as usize], fact[(nd - md) as usize], p);
        let inv = crate::residues::montgomery::inv_mod_u64(den, p).expect("digit factorial is a unit");
        Some(crate::residues::montgomery::mulmod_u64(num, inv, p))
    };
    let (mut a, mut b) = (n, m);
    let mut acc = 1u64;
    while a > 0 || b > 0 {
        match digit_binom(a % p, b % p) {
            Some(d) => acc = crate::residues::montgomery::mulmod_u64(acc, d, p),
            None => return modulus.zero(),
        }
        a /= p;
        b /= p;
    }
    ResidueClass::from_u64(acc, &modulus)
}

/// Product of i in [1, upto] coprime to p, modulo the prime power ring.
/// Uses the generalized Wilson theorem for full periods of length p^e.
fn coprime_run_product(upto: u64, p: u64, e: u32, m: &Modulus) -> ResidueClass {
    let period = m.to_biguint();
    let (full, rest) = match period.to_u64() {
        Some(pe) => (upto / pe, upto % pe),
        None => (0, upto),
    };
    // Full-period product is -1 for odd p (and p=2, e<=2), +1 for p=2, e>=3.
    let wilson_is_one = p == 2 && e >= 3;
    let mut acc = m.one();
    if full % 2 == 1 && !wilson_is_one {
        acc = acc.neg();
    }
    let mut i = 1u64;
    while i <= rest {
        if i % p != 0 {
            acc = acc.mul(&ResidueClass::from_u64(i, m));
        }
        i += 1;
    }
    acc
}

/// n! with all factors of p removed, modulo p^e.
fn stripped_factorial(mut n: u64, p: u64, e: u32, m: &Modulus) -> ResidueClass {
    let mut acc = m.one();
    while n > 0 {
        acc = acc.mul(&coprime_run_product(n, p, e, m));
        n /= p;
    }
    acc
}

/// C(n, m) modulo p^e by the stripped-factorial method; exact for every
/// input, including when p divides the binomial coefficient.
pub fn binomial_mod_prime_power(n: u64, m: i64, p: u64, e: u32) -> ResidueClass {
    let modulus = Modulus::prime_power(p, e);
    if m < 0 || m as u64 > n {
        return modulus.zero();
    }
    let m = m as u64;
    let val = kummer_valuation(n, m, p);
    if val >= e {
        return modulus.zero();
    }
    // below a small threshold the exact oracle is just as fast
    if n <= 256 {
        return ResidueClass::from_biguint(&binomial_exact(n, m as i64), &modulus);
    }
    let r = n - m;
    let unit = stripped_factorial(n, p, e, &modulus)
        .mul(&stripped_factorial(m, p, e, &modulus).inverse().expect("unit"))
        .mul(&stripped_factorial(r, p, e, &modulus).inverse().expect("unit"));
    unit.mul(&ResidueClass::from_u64(p, &modulus).pow(val as u64))
}

/// C(n, m) mod an arbitrary word-size modulus via CRT over its prime-power
/// parts; wide moduli reduce the exact value.
pub fn binomial_mod(n: u64, m: i64, modulus: &Modulus) -> ResidueClass {
    match modulus.to_u64() {
        Some(w) => {
            let parts: Vec<ResidueClass> = crate::primes::factorize(w)
                .into_iter()
                .map(|(p, e)| binomial_mod_prime_power(n, m, p, e))
                .collect();
            let combined = crt_combine(&parts).expect("prime powers are coprime");
            debug_assert_eq!(combined.modulus_biguint(), modulus.to_biguint());
            ResidueClass::from_biguint(&combined.value(), modulus)
        }
        None => ResidueClass::from_biguint(&binomial_exact(n, m), modulus),
    }
}

/// C(n, m) mod a composite modulus with caller-supplied factorization.
/// The factorization is verified (product check) before use.
pub fn binomial_mod_composite(
    n: u64,
    m: i64,
    modulus: u64,
    factors: &[(u64, u32)],
) -> Result<ResidueClass> {
    let mut product = BigUint::one();
    for &(p, e) in factors {
        product *= BigUint::from(p).pow(e);
    }
    if product != BigUint::from(modulus) {
        return Err(Error::BadFactorization { modulus: BigUint::from(modulus), product });
    }
    let parts: Vec<ResidueClass> = factors
        .iter()
        .map(|&(p, e)| binomial_mod_prime_power(n, m, p, e))
        .collect();
    let combined = crt_combine(&parts)?;
    Ok(ResidueClass::from_biguint(&combined.value(), &Modulus::from_u64(modulus)))
}

/// C(np-1, p-1) modulo p^e as the product of ((n-1)p + k)/k over
/// k = 1..p-1; every factor is coprime to p, so one inversion closes the
/// whole product (prefix-product trick).
pub fn shifted_binomial_mod(n: u64, p: u64, e: u32) -> ResidueClass {
    assert!(n >= 1 && p >= 2);
    let m = Modulus::prime_power(p, e);
    let shift = (n - 1) * p; // fits u64 for every catalog use; BigInt path below otherwise
    let mut num = m.one();
    let mut den = m.one();
    for k in 1..p {
        num = num.mul(&ResidueClass::from_bigint(
            &(BigInt::from(shift) + BigInt::from(k)),
            &m,
        ));
        den = den.mul(&ResidueClass::from_u64(k, &m));
    }
    num.mul(&den.inverse().expect("product of units"))
}

/// C(2p-1, p-1) mod p^e, the central object of the binomial congruence
/// tower.
pub fn central_shifted_binomial_mod(p: u64, e: u32) -> ResidueClass {
    shifted_binomial_mod(2, p, e)
}

/// The coprime-filtered analogue of C(2n-1, n-1): product of (2n-k)/k over
/// 1 <= k <= n with gcd(k, n) = 1, in Z/n^e.
pub fn modified_binomial(n: u64, e: u32) -> ResidueClass {
    assert!(n >= 3);
    let m = Modulus::prime_power(n, e); // n^e; n need not be prime here
    let mut num = m.one();
    let mut den = m.one();
    for k in 1..=n {
        if crate::residues::montgomery::gcd_u64(k, n) == 1 {
            num = num.mul(&ResidueClass::from_u64(2 * n - k, &m));
            den = den.mul(&ResidueClass::from_u64(k, &m));
        }
    }
    num.mul(&den.inverse().expect("factors coprime to n"))
}

/// Iterator-style walker producing C(n, k) for k = 0, 1, 2, ... as
/// (p-valuation, unit mod p^e). Exact even where p divides the binomial.
pub struct BinomialUnits {
    n: u64,
    k: u64,
    p: u64,
    val: i64,
    unit: ResidueClass,
}

impl BinomialUnits {
    pub fn new(n: u64, p: u64, modulus: &Modulus) -> Self {
        BinomialUnits { n, k: 0, p, val: 0, unit: modulus.one() }
    }

    /// Valuation and unit of C(n, k) at the current k.
    pub fn current(&self) -> (i64, &ResidueClass) {
        (self.val, &self.unit)
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    /// Step k -> k+1; returns false once k would exceed n.
    pub fn advance(&mut self) -> bool {
        if self.k >= self.n {
            return false;
        }
        let (va, ua) = valuation_u64(self.n - self.k, self.p);
        let (vb, ub) = valuation_u64(self.k + 1, self.p);
        let m = self.unit.modulus();
        self.unit = self
            .unit
            .mul(&ResidueClass::from_u64(ua, &m))
            .mul(&ResidueClass::from_u64(ub, &m).inverse().expect("unit"));
        self.val += va as i64 - vb as i64;
        self.k += 1;
        true
    }

    /// The residue p^val * unit in the walker ring.
    pub fn residue(&self, e: u32) -> ResidueClass {
        let m = self.unit.modulus();
        if self.val >= e as i64 {
            return m.zero();
        }
        self.unit.mul(&ResidueClass::from_u64(self.p, &m).pow(self.val as u64))
    }
}

/// Walker for C(n0 + k, k), k = 0, 1, ... (both indices move), used by the
/// Apery sums.
pub struct RisingBinomialUnits {
    n0: u64,
    k: u64,
    p: u64,
    val: i64,
    unit: ResidueClass,
}

impl RisingBinomialUnits {
    pub fn new(n0: u64, p: u64, modulus: &Modulus) -> Self {
        RisingBinomialUnits { n0, k: 0, p, val: 0, unit: modulus.one() }
    }

    pub fn current(&self) -> (i64, &ResidueClass) {
        (self.val, &self.unit)
    }

    pub fn advance(&mut self) {
        // C(n0+k+1, k+1) = C(n0+k, k) * (n0+k+1) / (k+1)
        let (va, ua) = valuation_u64(self.n0 + self.k + 1, self.p);
        let (vb, ub) = valuation_u64(self.k + 1, self.p);
        let m = self.unit.modulus();
        self.unit = self
            .unit
            .mul(&ResidueClass::from_u64(ua, &m))
            .mul(&ResidueClass::from_u64(ub, &m).inverse().expect("unit"));
        self.val += va as i64 - vb as i64;
        self.k += 1;
    }
}

/// Apery number by both displayed sum forms, which are required to agree.
pub fn apery_number(n: u64) -> BigUint {
    let mut a = BigUint::zero();
    let mut b = BigUint::zero();
    for k in 0..=n {
        let t1 = binomial_exact(n, k as i64).pow(2) * binomial_exact(n + k, k as i64).pow(2);
        let t2 = binomial_exact(n + k, (2 * k) as i64).pow(2) * binomial_exact(2 * k, k as i64).pow(2);
        a += t1;
        b += t2;
    }
    assert_eq!(a, b, "the two Apery sum forms must agree (n={n})");
    a
}

/// A_N modulo p^e without forming the exact (astronomical) value.
pub fn apery_number_mod(n: u64, p: u64, e: u32) -> ResidueClass {
    let m = Modulus::prime_power(p, e);
    let mut first = BinomialUnits::new(n, p, &m); // C(n, k)
    let mut second = RisingBinomialUnits::new(n, p, &m); // C(n+k, k)
    let mut acc = m.zero();
    for k in 0..=n {
        let (v1, u1) = first.current();
        let (v2, u2) = second.current();
        let val = 2 * (v1 + v2);
        if val < e as i64 {
            let unit_sq = u1.mul(u2).pow(2);
            let term = unit_sq.mul(&ResidueClass::from_u64(p, &m).pow(val as u64));
            acc = acc.add(&term);
        }
        if k < n {
            first.advance();
            second.advance();
        }
    }
    acc
}

/// Sum of (-1)^(eps k) C(n,k)^a C(2n,k)^b for k = 0..n, modulo a prime
/// power. The fast route walks valuation/unit pairs; small cases fall back
/// to exact binomials and the two are pinned together in tests.
pub fn binomial_sum_u(eps: u8, a: u32, b: u32, n: u64, modulus: &Modulus) -> ResidueClass {
    assert!(eps <= 1);
    if let Some(w) = modulus.to_u64() {
        let f = crate::primes::factorize(w);
        if f.len() == 1 {
            let (p, e) = f[0];
            return binomial_sum_u_prime_power(eps, a, b, n, p, e);
        }
    }
    // exact fallback for non-prime-power moduli
    let mut acc = modulus.zero();
    for k in 0..=n {
        let t = binomial_exact(n, k as i64).pow(a) * binomial_exact(2 * n, k as i64).pow(b);
        let mut term = ResidueClass::from_biguint(&t, modulus);
        if eps == 1 && k % 2 == 1 {
            term = term.neg();
        }
        acc = acc.add(&term);
    }
    acc
}

fn binomial_sum_u_prime_power(eps: u8, a: u32, b: u32, n: u64, p: u64, e: u32) -> ResidueClass {
    let m = Modulus::prime_power(p, e);
    let mut first = BinomialUnits::new(n, p, &m);
    let mut second = BinomialUnits::new(2 * n, p, &m);
    let mut acc = m.zero();
    for k in 0..=n {
        let (v1, u1) = first.current();
        let (v2, u2) = second.current();
        let val = a as i64 * v1 + b as i64 * v2;
        if val < e as i64 {
            let unit = u1.pow(a as u64).mul(&u2.pow(b as u64));
            let mut term = unit.mul(&ResidueClass::from_u64(p, &m).pow(val as u64));
            if eps == 1 && k % 2 == 1 {
                term = term.neg();
            }
            acc = acc.add(&term);
        }
        if k < n {
            first.advance();
            second.advance();
        }
    }
    acc
}

/// Sum over k = 0..p-1 of (+-1)^k C(p-1, k)^n modulo p^e. All the
/// binomials C(p-1, k) are units mod p (no base-p carries).
pub fn power_binomial_sum(n: u32, signed: bool, p: u64, e: u32) -> ResidueClass {
    let m = Modulus::prime_power(p, e);
    let mut walker = BinomialUnits::new(p - 1, p, &m);
    let mut acc = m.zero();
    for k in 0..p {
        let (v, u) = walker.current();
        debug_assert_eq!(v, 0);
        let mut term = u.pow(n as u64);
        if signed && k % 2 == 1 {
            term = term.neg();
        }
        acc = acc.add(&term);
        if k + 1 < p {
            walker.advance();
        }
    }
    acc
}

/// Sum of reciprocals 1/C(p-1, k), k = 0..p-1, computed as an exact
/// rational and then reduced mod p^e.
pub fn reciprocal_binomial_sum(p: u64, e: u32) -> ResidueClass {
    let m = Modulus::prime_power(p, e);
    let mut sum = crate::Rational::zero();
    let mut c = BigUint::one();
    for k in 0..p {
        sum += crate::Rational::new(BigInt::one(), BigInt::from(c.clone()));
        // C(p-1, k+1) = C(p-1, k) * (p-1-k) / (k+1)
        if k + 1 < p {
            c = c * BigUint::from(p - 1 - k) / BigUint::from(k + 1);
        }
    }
    crate::residues::residue_of_rational(&sum, &m).expect("binomials are units mod p")
}

/// Sum of C(p, j) for j = 1..floor(2p/3), modulo p^2.
pub fn putnam_sum(p: u64) -> ResidueClass {
    let m = Modulus::prime_power(p, 2);
    let mut walker = BinomialUnits::new(p, p, &m);
    let mut acc = m.zero();
    let cap = 2 * p / 3;
    for _j in 1..=cap {
        walker.advance();
        acc = acc.add(&walker.residue(2));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primes::primes_up_to;
    use proptest::prelude::*;

    #[test]
    fn binomial_exact_examples() {
        assert_eq!(binomial_exact(17, 0), BigUint::one());
        assert_eq!(binomial_exact(9, 4), BigUint::from(126u32));
        assert_eq!(binomial_exact(5, 7), BigUint::zero());
        assert_eq!(binomial_exact(5, -1), BigUint::zero());
    }

    #[test]
    fn binomial_mod_examples() {
        assert_eq!(binomial_mod(9, 4, &Modulus::from_u64(125)).value_u64(), Some(1));
        assert_eq!(binomial_mod(5, 2, &Modulus::from_u64(9)).value_u64(), Some(1));
        assert_eq!(binomial_mod(13, 6, &Modulus::from_u64(343)).value_u64(), Some(1));
    }

    #[test]
    fn central_binomial_examples() {
        assert!(central_shifted_binomial_mod(5, 3).is_one());
        let c = central_shifted_binomial_mod(7, 4);
        assert_eq!(c.value_u64(), Some(1716));
        assert!(!c.is_one(), "7 is not a Wolstenholme prime");
    }

    #[test]
    fn lucas_examples() {
        assert!(lucas_binomial_mod_p(10, 5, 3).is_zero());
        assert!(lucas_binomial_mod_p(91, 0, 7).is_one());
        assert_eq!(lucas_binomial_mod_p(10, 5, 5).value_u64(), Some(2));
    }

    #[test]
    fn kummer_examples() {
        assert_eq!(kummer_valuation(10, 5, 3), 2);
        assert_eq!(kummer_valuation(77, 0, 7), 0);
        assert_eq!(kummer_valuation(9, 4, 5), 0);
    }

    #[test]
    fn lucas_and_kummer_match_oracle() {
        for &p in &[2u64, 3, 5, 7, 11, 13] {
            for n in 0..=500u64 {
                // sample m to keep the loop tight
                for m in [0, 1, n / 3, n / 2, n.saturating_sub(2), n] {
                    let exact = binomial_exact(n, m as i64);
                    let want = ResidueClass::from_biguint(&exact, &Modulus::from_u64(p));
                    assert_eq!(lucas_binomial_mod_p(n, m, p), want, "lucas n={n} m={m} p={p}");
                    if m <= n {
                        let mut v = 0u32;
                        let mut x = exact.clone();
                        if !x.is_zero() {
                            let pb = BigUint::from(p);
                            while (&x % &pb).is_zero() {
                                v += 1;
                                x /= &pb;
                            }
                        }
                        assert_eq!(kummer_valuation(n, m, p), v, "kummer n={n} m={m} p={p}");
                    }
                }
            }
        }
    }

    #[test]
    fn prime_power_engine_matches_oracle() {
        for &(p, e) in &[(2u64, 6u32), (3, 5), (5, 4), (7, 3), (13, 3)] {
            let modulus = Modulus::prime_power(p, e);
            for n in (0..=1200u64).step_by(7) {
                for m in [0i64, 1, (n / 3) as i64, (n / 2) as i64, n as i64] {
                    let want = ResidueClass::from_biguint(&binomial_exact(n, m), &modulus);
                    // force the stripped-factorial path by bypassing the small-n shortcut
                    let got = binomial_mod_prime_power(n, m, p, e);
                    assert_eq!(got, want, "n={n} m={m} p={p} e={e}");
                }
            }
            // a case big enough to exercise the recursion proper
            let n = 5000u64;
            let m = 2345i64;
            assert_eq!(
                binomial_mod_prime_power(n, m, p, e),
                ResidueClass::from_biguint(&binomial_exact(n, m), &modulus)
            );
        }
    }

    #[test]
    fn composite_examples() {
        // A(27173) = C(2*27173-1, 27173-1) == 1 mod 27173 (27173 = 29*937)
        let n = 27173u64;
        let r = binomial_mod_composite(2 * n - 1, (n - 1) as i64, n, &[(29, 1), (937, 1)]).unwrap();
        assert!(r.is_one());

        // C(17, 8) mod 9 = 1
        let r = binomial_mod_composite(17, 8, 9, &[(3, 2)]).unwrap();
        assert!(r.is_one());

        // C(n, 0) = 1 under any factored modulus
        let r = binomial_mod_composite(9999, 0, 15, &[(3, 1), (5, 1)]).unwrap();
        assert!(r.is_one());

        match binomial_mod_composite(10, 5, 15, &[(3, 1), (7, 1)]) {
            Err(Error::BadFactorization { .. }) => {}
            other => panic!("expected BadFactorization, got {other:?}"),
        }
    }

    #[test]
    fn modified_binomial_examples() {
        // for primes it coincides with the ordinary central object
        for &p in &[5u64, 7, 11, 13] {
            assert_eq!(modified_binomial(p, 3), central_shifted_binomial_mod(p, 3));
        }
        // power of two: 1 + n^2 * (n/2) at n = 8
        assert_eq!(modified_binomial(8, 3).value_u64(), Some(257));
    }

    #[test]
    fn apery_examples() {
        assert_eq!(apery_number(0), BigUint::from(1u32));
        assert_eq!(apery_number(1), BigUint::from(5u32));
        assert_eq!(apery_number(2), BigUint::from(73u32));
        let diff = apery_number(5) - apery_number(1);
        assert_eq!(diff, BigUint::from(819000u32));
        assert!((diff % BigUint::from(125u32)).is_zero());
    }

    #[test]
    fn apery_both_forms_to_60() {
        // apery_number asserts internally that the two sum forms agree
        for n in 0..=60 {
            let _ = apery_number(n);
        }
    }

    #[test]
    fn apery_mod_matches_exact() {
        for n in 0..=40u64 {
            for &(p, e) in &[(5u64, 3u32), (7, 3), (13, 2)] {
                let m = Modulus::prime_power(p, e);
                assert_eq!(
                    apery_number_mod(n, p, e),
                    ResidueClass::from_biguint(&apery_number(n), &m),
                    "n={n} p={p}"
                );
            }
        }
    }

    #[test]
    fn binomial_sum_examples() {
        // u(1) with (eps,a,b) = (1,1,1): 1 - 1*2 = -1
        let m = Modulus::from_u64(125);
        let got = binomial_sum_u(1, 1, 1, 1, &m);
        assert_eq!(got, ResidueClass::from_i128(-1, &m));
        // u(5) = -1 mod 125 (the right side 1 + (-1)^eps 2^b)
        let got = binomial_sum_u(1, 1, 1, 5, &m);
        assert_eq!(got, ResidueClass::from_i128(-1, &m));
    }

    #[test]
    fn binomial_sum_routes_agree() {
        for n in 0..=30u64 {
            for (eps, a, b) in [(0u8, 1u32, 1u32), (1, 1, 1), (0, 2, 1), (1, 0, 2), (0, 3, 3)] {
                let m = Modulus::from_u64(343);
                let fast = binomial_sum_u(eps, a, b, n, &m);
                // exact route
                let mut acc = m.zero();
                for k in 0..=n {
                    let t = binomial_exact(n, k as i64).pow(a) * binomial_exact(2 * n, k as i64).pow(b);
                    let mut term = ResidueClass::from_biguint(&t, &m);
                    if eps == 1 && k % 2 == 1 {
                        term = term.neg();
                    }
                    acc = acc.add(&term);
                }
                assert_eq!(fast, acc, "n={n} eps={eps} a={a} b={b}");
            }
        }
    }

    #[test]
    fn power_binomial_sum_examples() {
        // alternating row sum vanishes for n = 1
        assert!(power_binomial_sum(1, true, 7, 3).is_zero());
        // p=5, n=2, signed: sum = 6, and 2^8 = 256 = 6 mod 125
        let got = power_binomial_sum(2, true, 5, 3);
        assert_eq!(got.value_u64(), Some(6));
        assert_eq!(ResidueClass::from_u64(256, &Modulus::from_u64(125)).value_u64(), Some(6));
        // p=5, n=1, unsigned: 2^4 = 16
        assert_eq!(power_binomial_sum(1, false, 5, 3).value_u64(), Some(16));
    }

    #[test]
    fn reciprocal_binomial_examples() {
        // p=3, e=4: 1 + 1/2 + 1 = 5/2 = 43 mod 81
        assert_eq!(reciprocal_binomial_sum(3, 4).value_u64(), Some(43));
        // p=5: equals 2^{1-p} mod p^3
        let lhs = reciprocal_binomial_sum(5, 3);
        let m = Modulus::from_u64(125);
        let rhs = ResidueClass::from_u64(2, &m).inverse().unwrap().pow(4);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn putnam_examples() {
        assert!(putnam_sum(5).is_zero());
        assert!(putnam_sum(7).is_zero());
        assert!(putnam_sum(11).is_zero());
    }

    #[test]
    fn eq1_lucas_consequence() {
        // C(np, mp) = C(n, m) mod p
        for &p in &[2u64, 3, 5, 7, 11, 13] {
            for n in 1..=12u64 {
                for m in 0..=n {
                    let lhs = binomial_mod(n * p, (m * p) as i64, &Modulus::from_u64(p));
                    let rhs = binomial_mod(n, m as i64, &Modulus::from_u64(p));
                    assert_eq!(lhs, rhs, "p={p} n={n} m={m}");
                }
            }
        }
    }

    #[test]
    fn central_binomial_consistency_across_e() {
        for p in primes_up_to(499) {
            if p < 5 {
                continue;
            }
            let c9 = central_shifted_binomial_mod(p, 9);
            let reduced = c9.reduce_to(&Modulus::prime_power(p, 3));
            assert!(reduced.is_one(), "Wolstenholme fails at p={p}?");
        }
    }

    #[test]
    fn shifted_binomial_matches_exact() {
        for &p in &[5u64, 7, 11, 13] {
            for n in 1..=6u64 {
                for e in 1..=4u32 {
                    let m = Modulus::prime_power(p, e);
                    let want = ResidueClass::from_biguint(
                        &binomial_exact(n * p - 1, (p - 1) as i64),
                        &m,
                    );
                    assert_eq!(shifted_binomial_mod(n, p, e), want, "n={n} p={p} e={e}");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn binomial_mod_matches_exact(n in 0u64..2000, m in 0i64..2000, modulus in 2u64..1_000_000_000) {
            let md = Modulus::from_u64(modulus);
            let want = ResidueClass::from_biguint(&binomial_exact(n, m), &md);
            prop_assert_eq!(binomial_mod(n, m, &md), want);
        }

        #[test]
        fn walker_matches_exact(n in 0u64..400, p_idx in 0usize..5, e in 1u32..5) {
            let p = [2u64, 3, 5, 7, 11][p_idx];
            let m = Modulus::prime_power(p, e);
            let mut w = BinomialUnits::new(n, p, &m);
            for k in 0..=n {
                let want = ResidueClass::from_biguint(&binomial_exact(n, k as i64), &m);
                prop_assert_eq!(w.residue(e), want, "n={} k={} p={} e={}", n, k, p, e);
                if k < n { w.advance(); }
            }
        }
    }
}
