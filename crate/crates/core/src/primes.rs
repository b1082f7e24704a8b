//! Prime predicates and enumeration: deterministic Miller-Rabin for u64,
//! a simple sieve for dense small ranges, a segmented sieve for scan
//! windows, and trial-division factorization for scan candidates.

use crate::residues::montgomery::Mont64;

/// Deterministic Miller-Rabin over the 7-base set that is known to be
/// exact for all n < 2^64.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    let ctx = Mont64::new(n);
    let n_minus_1 = ctx.to_mont(n - 1);
    let one = ctx.r1;
    'witness: for &a in &[2u64, 325, 9375, 28178, 450775, 9780504, 1795265022] {
        let a = a % n;
        if a == 0 {
            continue;
        }
        let mut x = ctx.pow(ctx.to_mont(a), d);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = ctx.mul(x, x);
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// All primes <= limit by a plain sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Primes in [lo, hi] delivered segment by segment; the closure receives
/// each prime in ascending order within the segment.
pub fn primes_in_segment(lo: u64, hi: u64, base_primes: &[u64], mut f: impl FnMut(u64)) {
    if hi < lo || hi < 2 {
        return;
    }
    let lo = lo.max(2);
    let len = (hi - lo + 1) as usize;
    let mut composite = vec![false; len];
    for &p in base_primes {
        if p * p > hi {
            break;
        }
        let start = ((lo + p - 1) / p * p).max(p * p);
        let mut j = start;
        while j <= hi {
            composite[(j - lo) as usize] = true;
            j += p;
        }
    }
    for (i, &c) in composite.iter().enumerate() {
        if !c {
            let n = lo + i as u64;
            if n >= 2 {
                f(n);
            }
        }
    }
}

/// Trial-division factorization, adequate for scan candidates (the scans
/// stay well below 2^60 and candidates carry only small prime factors).
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n >= 1);
    let mut out = Vec::new();
    for p in [2u64, 3, 5] {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
    }
    // wheel over 6k +- 1
    let mut d = 7u64;
    let mut step = 4u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += step;
        step = 6 - step;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Largest e with p^e | n, together with n / p^e.
pub fn valuation_u64(mut n: u64, p: u64) -> (u32, u64) {
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    (v, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn miller_rabin_matches_sieve() {
        let sieve = primes_up_to(50_000);
        let mut idx = 0;
        for n in 0..=50_000u64 {
            let in_sieve = idx < sieve.len() && sieve[idx] == n;
            if in_sieve {
                idx += 1;
            }
            assert_eq!(is_prime(n), in_sieve, "n={n}");
        }
    }

    #[test]
    fn known_big_primes() {
        assert!(is_prime(16843));
        assert!(is_prime(2_124_679));
        assert!(!is_prime(27173)); // 29 * 937
        assert!(!is_prime(283686649)); // 16843^2
        assert!(is_prime(18_446_744_073_709_551_557)); // largest u64 prime
    }

    #[test]
    fn segmented_sieve_agrees() {
        let base = primes_up_to(1000);
        let mut got = Vec::new();
        let mut lo = 0;
        while lo <= 100_000 {
            let hi = (lo + 7919).min(100_000);
            primes_in_segment(lo, hi, &base, |p| got.push(p));
            lo = hi + 1;
        }
        assert_eq!(got, primes_up_to(100_000));
    }

    #[test]
    fn factorization() {
        assert_eq!(factorize(27173), vec![(29, 1), (937, 1)]);
        assert_eq!(factorize(283686649), vec![(16843, 2)]);
        assert_eq!(factorize(1), vec![]);
        assert_eq!(factorize(512), vec![(2, 9)]);
        assert_eq!(factorize(2 * 3 * 5 * 7 * 11), vec![(2, 1), (3, 1), (5, 1), (7, 1), (11, 1)]);
    }
}
