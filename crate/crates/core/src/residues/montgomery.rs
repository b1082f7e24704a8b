//! Fixed-width Montgomery arithmetic for odd moduli, in 64- and 128-bit
//! flavours. This is the inner-loop backend of the prime hunter; the
//! general `ResidueClass` layer stays plain (and is tested against it).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};

/// Montgomery context for an odd modulus `m < 2^64`.
#[derive(Clone, Copy, Debug)]
pub struct Mont64 {
    pub m: u64,
    /// R mod m, with R = 2^64.
    pub r1: u64,
    /// R^2 mod m.
    pub r2: u64,
    /// -m^{-1} mod 2^64.
    ninv: u64,
}

impl Mont64 {
    pub fn new(m: u64) -> Self {
        assert!(m >= 3 && m % 2 == 1, "Montgomery modulus must be odd and >= 3");
        // Newton iteration: each step doubles the number of correct bits.
        let mut inv: u64 = m; // correct mod 2^3 since m odd
        for _ in 0..5 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(m.wrapping_mul(inv)));
        }
        debug_assert_eq!(m.wrapping_mul(inv), 1);
        let r1 = (((1u128 << 64) % m as u128) & 0xffff_ffff_ffff_ffff) as u64;
        let r2 = ((r1 as u128 * r1 as u128) % m as u128) as u64;
        Mont64 { m, r1, r2, ninv: inv.wrapping_neg() }
    }

    /// Montgomery product: (a * b / R) mod m. Valid for any odd m < 2^64.
    #[inline(always)]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        let t = a as u128 * b as u128;
        let m_ = (t as u64).wrapping_mul(self.ninv);
        // low 128 bits of t plus m_*m have zero low word by construction
        let folded = ((t as u64) as u128 + m_ as u128 * self.m as u128) >> 64;
        let u = (t >> 64) + folded;
        let u = if u >= self.m as u128 { u - self.m as u128 } else { u };
        u as u64
    }

    #[inline(always)]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let (s, carry) = a.overflowing_add(b);
        if carry || s >= self.m {
            s.wrapping_sub(self.m)
        } else {
            s
        }
    }

    #[inline(always)]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a.wrapping_sub(b).wrapping_add(self.m)
        }
    }

    #[inline(always)]
    pub fn to_mont(&self, a: u64) -> u64 {
        debug_assert!(a < self.m);
        self.mul(a, self.r2)
    }

    #[inline(always)]
    pub fn from_mont(&self, a: u64) -> u64 {
        self.mul(a, 1)
    }

    /// a^e with a in Montgomery form; result in Montgomery form.
    pub fn pow(&self, a: u64, mut e: u64) -> u64 {
        let mut base = a;
        let mut acc = self.r1; // 1 in Montgomery form
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }
}

/// Montgomery context for an odd modulus `m < 2^127`.
#[derive(Clone, Copy, Debug)]
pub struct Mont128 {
    pub m: u128,
    pub r1: u128,
    pub r2: u128,
    ninv: u128,
}

#[inline(always)]
fn mul_wide_128(a: u128, b: u128) -> (u128, u128) {
    const MASK: u128 = (1u128 << 64) - 1;
    let (a1, a0) = (a >> 64, a & MASK);
    let (b1, b0) = (b >> 64, b & MASK);
    let ll = a0 * b0;
    let lh = a0 * b1;
    let hl = a1 * b0;
    let hh = a1 * b1;
    let (mid, c) = lh.overflowing_add(hl);
    let mut hi = hh + ((c as u128) << 64) + (mid >> 64);
    let (lo, c2) = ll.overflowing_add(mid << 64);
    hi += c2 as u128;
    (hi, lo)
}

impl Mont128 {
    pub fn new(m: u128) -> Self {
        assert!(m >= 3 && m % 2 == 1 && m < (1u128 << 127));
        let mut inv: u128 = m;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u128.wrapping_sub(m.wrapping_mul(inv)));
        }
        debug_assert_eq!(m.wrapping_mul(inv), 1);
        // R mod m computed as (2^128 - m) mod m to avoid a 256-bit value.
        let r1 = (0u128.wrapping_sub(m)) % m;
        let r2 = {
            // (r1 * r1) mod m via wide multiply + slow reduction (setup only).
            let (hi, lo) = mul_wide_128(r1, r1);
            rem_256_by_128(hi, lo, m)
        };
        Mont128 { m, r1, r2, ninv: inv.wrapping_neg() }
    }

    #[inline(always)]
    pub fn mul(&self, a: u128, b: u128) -> u128 {
        let (hi, lo) = mul_wide_128(a, b);
        let m_ = lo.wrapping_mul(self.ninv);
        let (h2, l2) = mul_wide_128(m_, self.m);
        let (_, carry) = lo.overflowing_add(l2);
        let u = hi + h2 + carry as u128;
        if u >= self.m {
            u - self.m
        } else {
            u
        }
    }

    #[inline(always)]
    pub fn add(&self, a: u128, b: u128) -> u128 {
        // m < 2^127 so a + b cannot overflow u128
        let s = a + b;
        if s >= self.m {
            s - self.m
        } else {
            s
        }
    }

    #[inline(always)]
    pub fn sub(&self, a: u128, b: u128) -> u128 {
        if a >= b {
            a - b
        } else {
            a + (self.m - b)
        }
    }

    #[inline(always)]
    pub fn to_mont(&self, a: u128) -> u128 {
        self.mul(a, self.r2)
    }

    #[inline(always)]
    pub fn from_mont(&self, a: u128) -> u128 {
        self.mul(a, 1)
    }

    pub fn pow(&self, a: u128, mut e: u64) -> u128 {
        let mut base = a;
        let mut acc = self.r1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }
}

/// Remainder of a 256-bit value (hi, lo) modulo m, bit by bit. Setup-path
/// only; hot paths never call this.
fn rem_256_by_128(hi: u128, lo: u128, m: u128) -> u128 {
    let mut r: u128 = 0;
    for i in (0..256).rev() {
        let bit = if i >= 128 {
            (hi >> (i - 128)) & 1
        } else {
            (lo >> i) & 1
        };
        // r < m < 2^127 so 2r + bit fits in u128
        r = (r << 1) | bit;
        if r >= m {
            r -= m;
        }
    }
    r
}

/// Plain (a * b) mod m through a 128-bit intermediate.
#[inline(always)]
pub fn mulmod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Modular inverse of a mod m, for any m >= 2. Returns None when gcd > 1.
pub fn inv_mod_u64(a: u64, m: u64) -> Option<u64> {
    if m < (1 << 62) {
        // Iterative extended Euclid over i128; coefficient magnitudes stay
        // below m so no overflow in this range.
        let (mut r0, mut r1) = (m as i128, (a % m) as i128);
        let (mut s0, mut s1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        if r0 != 1 {
            return None;
        }
        let inv = s0.rem_euclid(m as i128) as u64;
        Some(inv)
    } else {
        inv_mod_u128(a as u128, m as u128).map(|x| x as u64)
    }
}

/// Modular inverse over u128 moduli via BigInt extended Euclid.
pub fn inv_mod_u128(a: u128, m: u128) -> Option<u128> {
    let ab = BigInt::from(a % m);
    let mb = BigInt::from(m);
    let eg = ab.extended_gcd(&mb);
    if !eg.gcd.is_one() {
        return None;
    }
    let mut x = eg.x % &mb;
    if x.is_negative() {
        x += &mb;
    }
    x.to_u128()
}

pub fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// a^e mod m for u64 values without a Montgomery context.
pub fn powmod_u64(a: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut base = a % m;
    let mut acc = 1u64 % m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod_u64(acc, base, m);
        }
        base = mulmod_u64(base, base, m);
        e >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    #[test]
    fn mont64_roundtrip_and_mul() {
        for &m in &[3u64, 97, 2_147_483_659, u64::MAX - 58, 16843u64.pow(3)] {
            let ctx = Mont64::new(m);
            for a in [0u64, 1, 2, m - 1, m / 2, 123_456_789 % m] {
                assert_eq!(ctx.from_mont(ctx.to_mont(a)), a, "m={m} a={a}");
                for b in [1u64, m - 1, (m / 3).max(1)] {
                    let got = ctx.from_mont(ctx.mul(ctx.to_mont(a), ctx.to_mont(b)));
                    assert_eq!(got, mulmod_u64(a, b, m), "m={m} a={a} b={b}");
                }
            }
        }
    }

    #[test]
    fn mont128_matches_biguint() {
        let ms: Vec<u128> = vec![
            100_003u128.pow(5),          // ~p^5 shape used by the W5 audit
            (1u128 << 126) - 137,        // near the width cap
            2_124_679u128.pow(4) | 1,
        ];
        for m in ms {
            let m = if m % 2 == 0 { m + 1 } else { m };
            let ctx = Mont128::new(m);
            let mb = BigUint::from(m);
            let samples = [1u128, 2, m - 1, m / 2 | 1, m / 3, 0xdead_beef_cafe];
            for &a in &samples {
                assert_eq!(ctx.from_mont(ctx.to_mont(a % m)), a % m);
                for &b in &samples {
                    let got = ctx.from_mont(ctx.mul(ctx.to_mont(a % m), ctx.to_mont(b % m)));
                    let want = (BigUint::from(a % m) * BigUint::from(b % m)) % &mb;
                    assert_eq!(BigUint::from(got), want, "m={m} a={a} b={b}");
                }
            }
            // powers
            let g = ctx.to_mont(12345 % m);
            let got = ctx.from_mont(ctx.pow(g, 91));
            let want = BigUint::from(12345u64 % m as u64 as u64).modpow(&BigUint::from(91u32), &mb);
            assert_eq!(BigUint::from(got), want);
        }
    }

    #[test]
    fn inverse_helpers() {
        assert_eq!(inv_mod_u64(4, 11), Some(3));
        assert_eq!(inv_mod_u64(6, 9), None);
        assert_eq!(inv_mod_u64(1, 7), Some(1));
        let m = 16843u128.pow(6);
        let x = inv_mod_u128(123_456_789, m).unwrap();
        assert_eq!((BigUint::from(x) * BigUint::from(123_456_789u64)) % BigUint::from(m), BigUint::from(1u32));
    }

    #[test]
    fn wide_mul_against_biguint() {
        let cases = [
            (u128::MAX, u128::MAX),
            (u128::MAX, 2),
            (1u128 << 127, 3),
            (0x1234_5678_9abc_def0_1122_3344_5566_7788u128, 0x99aa_bbcc_ddee_ff00_1234_5678u128),
        ];
        for (a, b) in cases {
            let (hi, lo) = mul_wide_128(a, b);
            let want = BigUint::from(a) * BigUint::from(b);
            let got = (BigUint::from(hi) << 128) + BigUint::from(lo);
            assert_eq!(got, want);
        }
    }
}
