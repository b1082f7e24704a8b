//! Arithmetic in Q[q]/Phi_p(q)^r for prime p and r in {1,2,3}, Gaussian
//! binomials, q-harmonic numbers, and the symbolic q-congruence checks.
//!
//! Everything is exact: coefficients are rationals and congruences are
//! decided by polynomial identity after canonical reduction.

mod poly;

pub use poly::QPoly;

use crate::combinatorics::binomial_exact;
use crate::error::{Error, Result};
use crate::Rational;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::fmt;

/// Element of Q[q]/Phi_p(q)^r, canonical representative of degree
/// < r(p-1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QRingElement {
    repr: QPoly,
    p: u64,
    r: u32,
}

impl QRingElement {
    pub fn representative(&self) -> &QPoly {
        &self.repr
    }

    pub fn modulus_poly(p: u64, r: u32) -> QPoly {
        QPoly::cyclotomic(p).pow(r)
    }

    pub fn is_zero(&self) -> bool {
        self.repr.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_ring(other);
        reduce_mod_cyclotomic_power(&self.repr.add(&other.repr), self.p, self.r)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check_ring(other);
        reduce_mod_cyclotomic_power(&self.repr.sub(&other.repr), self.p, self.r)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_ring(other);
        reduce_mod_cyclotomic_power(&self.repr.mul(&other.repr), self.p, self.r)
    }

    fn check_ring(&self, other: &Self) {
        assert!(self.p == other.p && self.r == other.r, "mixed quotient rings");
    }
}

impl fmt::Display for QRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.repr)
    }
}

/// Canonical remainder modulo Phi_p(q)^r by exact polynomial division.
pub fn reduce_mod_cyclotomic_power(x: &QPoly, p: u64, r: u32) -> QRingElement {
    assert!((1..=3).contains(&r), "r is capped at 3");
    let modulus = QRingElement::modulus_poly(p, r);
    let (_, rem) = x.div_rem(&modulus);
    QRingElement { repr: rem, p, r }
}

/// Extended Euclid over Q[q]: returns (g, s, t) with s*a + t*b = g, g
/// monic or constant.
fn poly_xgcd(a: &QPoly, b: &QPoly) -> (QPoly, QPoly, QPoly) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (QPoly::one(), QPoly::zero());
    let (mut t0, mut t1) = (QPoly::zero(), QPoly::one());
    while !r1.is_zero() {
        let (q, r) = r0.div_rem(&r1);
        let s = s0.sub(&q.mul(&s1));
        let t = t0.sub(&q.mul(&t1));
        (r0, r1) = (r1, r);
        (s0, s1) = (s1, s);
        (t0, t1) = (t1, t);
    }
    (r0, s0, t0)
}

/// Inverse in Q[q]/Phi_p^r; errors with NonUnit when the representative is
/// divisible by Phi_p.
pub fn q_ring_inverse(x: &QRingElement) -> Result<QRingElement> {
    let modulus = QRingElement::modulus_poly(x.p, x.r);
    let (g, s, _) = poly_xgcd(&x.repr, &modulus);
    match g.degree() {
        None => Err(Error::NonUnit),
        Some(0) => {
            let inv_g = Rational::one() / g.coeff(0);
            Ok(reduce_mod_cyclotomic_power(&s.scale(&inv_g), x.p, x.r))
        }
        Some(_) => Err(Error::NonUnit),
    }
}

/// Gaussian binomial via the q-Pascal recurrence
/// C(n,m)_q = C(n-1,m-1)_q + q^m C(n-1,m)_q; integer coefficients are
/// asserted on the way out.
pub fn q_binomial(n: u64, m: u64) -> QPoly {
    if m > n {
        return QPoly::zero();
    }
    let mut row: Vec<QPoly> = vec![QPoly::one()];
    for i in 1..=n {
        let width = (i.min(m) + 1) as usize;
        let mut next: Vec<QPoly> = Vec::with_capacity(width);
        next.push(QPoly::one());
        for k in 1..width as u64 {
            let up_left = row.get((k - 1) as usize).cloned().unwrap_or_else(QPoly::zero);
            let up = row.get(k as usize).cloned().unwrap_or_else(QPoly::zero);
            next.push(up_left.add(&QPoly::monomial(k as usize).mul(&up)));
        }
        row = next;
    }
    let out = row.into_iter().nth(m as usize).unwrap_or_else(QPoly::zero);
    debug_assert!(out.has_integer_coeffs(), "Gaussian binomial has integer coefficients");
    out
}

/// [n]_q! as an exact polynomial.
pub fn q_factorial(n: u64) -> QPoly {
    let mut acc = QPoly::one();
    for k in 1..=n {
        acc = acc.mul(&QPoly::q_integer(k));
    }
    acc
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QHarmonicVariant {
    /// sum of 1/[k]_q
    Plain,
    /// sum of q^k/[k]_q
    Tilde,
}

/// H_n(q) or its tilde variant in Q[q]/Phi_p^r; each [k]_q in range must
/// be a unit (fails with NonUnit when p | k).
pub fn q_harmonic(n: u64, variant: QHarmonicVariant, p: u64, r: u32) -> Result<QRingElement> {
    let mut acc = reduce_mod_cyclotomic_power(&QPoly::zero(), p, r);
    for k in 1..=n {
        let unit = reduce_mod_cyclotomic_power(&QPoly::q_integer(k), p, r);
        let inv = q_ring_inverse(&unit)?;
        let term = match variant {
            QHarmonicVariant::Plain => inv,
            QHarmonicVariant::Tilde => {
                reduce_mod_cyclotomic_power(&QPoly::monomial(k as usize), p, r).mul(&inv)
            }
        };
        acc = acc.add(&term);
    }
    Ok(acc)
}

/// Power-2 analogues: sum of 1/[k]_q^2 (plain) or q^k/[k]_q^2 (tilde).
fn q_harmonic_squares(n: u64, variant: QHarmonicVariant, p: u64, r: u32) -> Result<QRingElement> {
    let mut acc = reduce_mod_cyclotomic_power(&QPoly::zero(), p, r);
    for k in 1..=n {
        let unit = reduce_mod_cyclotomic_power(&QPoly::q_integer(k), p, r);
        let inv = q_ring_inverse(&unit)?;
        let inv2 = inv.mul(&inv);
        let term = match variant {
            QHarmonicVariant::Plain => inv2,
            QHarmonicVariant::Tilde => {
                reduce_mod_cyclotomic_power(&QPoly::monomial(k as usize), p, r).mul(&inv2)
            }
        };
        acc = acc.add(&term);
    }
    Ok(acc)
}

/// The registered q-congruence checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QCheckId {
    /// H_{p-1}(q) = (p-1)/2 (1-q) mod [p]_q
    AndrewsHarmonic,
    /// tilde H_{p-1}(q) = -(p-1)/2 (1-q) mod [p]_q
    AndrewsHarmonicTilde,
    /// H_{p-1}(q) = (p-1)/2 (1-q) + (p^2-1)/24 (1-q)^2 [p]_q mod [p]_q^2
    ShiPanHarmonic,
    /// both inverse-square sums mod [p]_q
    ShiPanSquares,
    /// C(np,mp)_q = C(n,m)_{q^{p^2}} - C(n,m+1) C(m+1,2) (p^2-1)/12 (q^p-1)^2 mod [p]_q^3
    StraubBinomial,
    /// C(np,mp)_q = C(n,m)_{q^{p^2}} mod [p]_q^2
    ClarkBinomial,
    /// C(np,mp)_q = q^{(n-m)m C(p,2)} C(n,m)_{q^p} mod [p]_q^2
    AndrewsBinomial,
    /// C(2p,p)_q = [2]_{q^{p^2}} - (p^2-1)/12 (q^p-1)^2 mod [p]_q^3
    QWolstenholme,
}

impl QCheckId {
    pub fn all() -> [QCheckId; 8] {
        use QCheckId::*;
        [
            AndrewsHarmonic,
            AndrewsHarmonicTilde,
            ShiPanHarmonic,
            ShiPanSquares,
            StraubBinomial,
            ClarkBinomial,
            AndrewsBinomial,
            QWolstenholme,
        ]
    }

    /// Minimal prime for the asserted form of the check.
    pub fn floor(&self) -> u64 {
        match self {
            QCheckId::AndrewsHarmonic | QCheckId::AndrewsHarmonicTilde => 3,
            _ => 5,
        }
    }

    /// Power of the cyclotomic modulus the check lives in.
    pub fn ring_power(&self) -> u32 {
        match self {
            QCheckId::AndrewsHarmonic | QCheckId::AndrewsHarmonicTilde | QCheckId::ShiPanSquares => 1,
            QCheckId::ShiPanHarmonic | QCheckId::ClarkBinomial | QCheckId::AndrewsBinomial => 2,
            QCheckId::StraubBinomial | QCheckId::QWolstenholme => 3,
        }
    }
}

/// One evaluated instance of a q-check: both sides reduced canonically,
/// with the difference polynomial as witness on failure.
#[derive(Clone, Debug)]
pub struct QCheckInstance {
    pub n: Option<u64>,
    pub m: Option<u64>,
    pub lhs: String,
    pub rhs: String,
    pub pass: bool,
    pub difference: Option<QPoly>,
}

fn instance(lhs: &QRingElement, rhs: &QRingElement, n: Option<u64>, m: Option<u64>) -> QCheckInstance {
    let diff = lhs.sub(rhs);
    QCheckInstance {
        n,
        m,
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
        pass: diff.is_zero(),
        difference: if diff.is_zero() { None } else { Some(diff.representative().clone()) },
    }
}

fn half_p_minus_1_times_1_minus_q(p: u64, negate: bool, r: u32) -> QRingElement {
    let c = Rational::new(BigInt::from(p - 1), BigInt::from(2));
    let c = if negate { -c } else { c };
    reduce_mod_cyclotomic_power(&QPoly::from_int_coeffs(&[1, -1]).scale(&c), p, r)
}

/// Evaluate a q-congruence check symbolically at prime p. Binomial-family
/// checks run over the small (n, m) grid n <= 3, m <= n.
pub fn q_congruence_check(id: QCheckId, p: u64) -> Result<Vec<QCheckInstance>> {
    assert!(crate::primes::is_prime(p) && p >= 3);
    let r = id.ring_power();
    let one_minus_q = QPoly::from_int_coeffs(&[1, -1]);
    let out = match id {
        QCheckId::AndrewsHarmonic => {
            let lhs = q_harmonic(p - 1, QHarmonicVariant::Plain, p, r)?;
            let rhs = half_p_minus_1_times_1_minus_q(p, false, r);
            vec![instance(&lhs, &rhs, None, None)]
        }
        QCheckId::AndrewsHarmonicTilde => {
            let lhs = q_harmonic(p - 1, QHarmonicVariant::Tilde, p, r)?;
            let rhs = half_p_minus_1_times_1_minus_q(p, true, r);
            vec![instance(&lhs, &rhs, None, None)]
        }
        QCheckId::ShiPanHarmonic => {
            let lhs = q_harmonic(p - 1, QHarmonicVariant::Plain, p, r)?;
            let c24 = Rational::new(BigInt::from(p * p - 1), BigInt::from(24));
            let correction = one_minus_q.mul(&one_minus_q).mul(&QPoly::cyclotomic(p)).scale(&c24);
            let rhs = half_p_minus_1_times_1_minus_q(p, false, r)
                .add(&reduce_mod_cyclotomic_power(&correction, p, r));
            vec![instance(&lhs, &rhs, None, None)]
        }
        QCheckId::ShiPanSquares => {
            let sq = one_minus_q.mul(&one_minus_q);
            let lhs_plain = q_harmonic_squares(p - 1, QHarmonicVariant::Plain, p, r)?;
            let c_plain = -Rational::new(BigInt::from((p - 1) * (p - 5)), BigInt::from(12));
            let rhs_plain = reduce_mod_cyclotomic_power(&sq.scale(&c_plain), p, r);
            let lhs_tilde = q_harmonic_squares(p - 1, QHarmonicVariant::Tilde, p, r)?;
            let c_tilde = -Rational::new(BigInt::from(p * p - 1), BigInt::from(12));
            let rhs_tilde = reduce_mod_cyclotomic_power(&sq.scale(&c_tilde), p, r);
            vec![
                instance(&lhs_plain, &rhs_plain, Some(1), None),
                instance(&lhs_tilde, &rhs_tilde, Some(2), None),
            ]
        }
        QCheckId::StraubBinomial | QCheckId::ClarkBinomial | QCheckId::AndrewsBinomial => {
            let mut v = Vec::new();
            for n in 1..=3u64 {
                for m in 0..=n {
                    let lhs = reduce_mod_cyclotomic_power(&q_binomial(n * p, m * p), p, r);
                    let rhs = match id {
                        QCheckId::StraubBinomial => {
                            let main = q_binomial(n, m).substitute_power((p * p) as usize);
                            let coeff = Rational::from(BigInt::from(
                                binomial_exact(n, m as i64 + 1) * binomial_exact(m + 1, 2),
                            )) * Rational::new(
                                BigInt::from(p * p - 1),
                                BigInt::from(12),
                            );
                            let qp_minus_1 =
                                QPoly::monomial(p as usize).sub(&QPoly::one());
                            let corr = qp_minus_1.mul(&qp_minus_1).scale(&coeff);
                            reduce_mod_cyclotomic_power(&main.sub(&corr), p, r)
                        }
                        QCheckId::ClarkBinomial => reduce_mod_cyclotomic_power(
                            &q_binomial(n, m).substitute_power((p * p) as usize),
                            p,
                            r,
                        ),
                        QCheckId::AndrewsBinomial => {
                            let exponent = (n - m) * m * (p * (p - 1) / 2);
                            let main = QPoly::monomial(exponent as usize)
                                .mul(&q_binomial(n, m).substitute_power(p as usize));
                            reduce_mod_cyclotomic_power(&main, p, r)
                        }
                        _ => unreachable!(),
                    };
                    v.push(instance(&lhs, &rhs, Some(n), Some(m)));
                }
            }
            v
        }
        QCheckId::QWolstenholme => {
            let lhs = reduce_mod_cyclotomic_power(&q_binomial(2 * p, p), p, r);
            let two_sub = QPoly::from_int_coeffs(&[1, 1]).substitute_power((p * p) as usize);
            let qp_minus_1 = QPoly::monomial(p as usize).sub(&QPoly::one());
            let coeff = Rational::new(BigInt::from(p * p - 1), BigInt::from(12));
            let corr = qp_minus_1.mul(&qp_minus_1).scale(&coeff);
            let rhs = reduce_mod_cyclotomic_power(&two_sub.sub(&corr), p, r);
            vec![instance(&lhs, &rhs, None, None)]
        }
    };
    Ok(out)
}
