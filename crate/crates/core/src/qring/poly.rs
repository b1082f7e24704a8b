//! Exact polynomials in q over the rationals: the coefficient arithmetic
//! behind the cyclotomic quotient rings.

use crate::Rational;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Dense polynomial, ascending degree, canonical (no trailing zeros).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPoly {
    coeffs: Vec<Rational>,
}

impl QPoly {
    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        QPoly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = QPoly { coeffs: vec![c] };
        p.normalize();
        p
    }

    pub fn from_int_coeffs(cs: &[i64]) -> Self {
        let mut p = QPoly {
            coeffs: cs.iter().map(|&c| Rational::from(BigInt::from(c))).collect(),
        };
        p.normalize();
        p
    }

    pub fn from_coeffs(cs: Vec<Rational>) -> Self {
        let mut p = QPoly { coeffs: cs };
        p.normalize();
        p
    }

    /// q^k
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = Rational::one();
        QPoly { coeffs }
    }

    /// 1 + q + ... + q^(k-1), the q-integer [k]_q; [0]_q = 0.
    pub fn q_integer(k: u64) -> Self {
        QPoly { coeffs: vec![Rational::one(); k as usize] }
    }

    /// The p-th cyclotomic polynomial 1 + q + ... + q^(p-1) for prime p.
    pub fn cyclotomic(p: u64) -> Self {
        Self::q_integer(p)
    }

    fn normalize(&mut self) {
        while matches!(self.coeffs.last(), Some(c) if c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) + other.coeff(i));
        }
        QPoly::from_coeffs(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) - other.coeff(i));
        }
        QPoly::from_coeffs(out)
    }

    pub fn neg(&self) -> Self {
        QPoly { coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        QPoly::from_coeffs(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        QPoly::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Quotient and remainder of exact polynomial division.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let dd = divisor.degree().unwrap();
        let lead = divisor.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (QPoly::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            if rem[i].is_zero() {
                continue;
            }
            let f = &rem[i] / &lead;
            quot[i - dd] = f.clone();
            rem[i] = Rational::zero();
            for j in 0..dd {
                let t = &divisor.coeffs[j] * &f;
                rem[i - dd + j] -= t;
            }
        }
        (QPoly::from_coeffs(quot), QPoly::from_coeffs(rem))
    }

    /// Substitute q -> q^t.
    pub fn substitute_power(&self, t: usize) -> Self {
        assert!(t >= 1);
        if self.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![Rational::zero(); (self.coeffs.len() - 1) * t + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                out[i * t] = c.clone();
            }
        }
        QPoly::from_coeffs(out)
    }

    /// Evaluate at q = 1 (the classical degeneration).
    pub fn eval_one(&self) -> Rational {
        let mut acc = Rational::zero();
        for c in &self.coeffs {
            acc += c;
        }
        acc
    }

    pub fn has_integer_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| c.denom().is_one())
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = QPoly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let unit_coeff = mag.is_one();
            match (i, unit_coeff) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "q")?,
                (1, false) => write!(f, "{mag}q")?,
                (_, true) => write!(f, "q^{i}")?,
                (_, false) => write!(f, "{mag}q^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_exact() {
        // (q^3 - 1) = (q - 1)(q^2 + q + 1)
        let a = QPoly::from_int_coeffs(&[-1, 0, 0, 1]);
        let b = QPoly::from_int_coeffs(&[-1, 1]);
        let (q, r) = a.div_rem(&b);
        assert!(r.is_zero());
        assert_eq!(q, QPoly::from_int_coeffs(&[1, 1, 1]));
    }

    #[test]
    fn display_forms() {
        assert_eq!(QPoly::from_int_coeffs(&[1, 1]).to_string(), "1 + q");
        assert_eq!(QPoly::from_int_coeffs(&[0, -1, 2]).to_string(), "-q + 2q^2");
        assert_eq!(QPoly::zero().to_string(), "0");
    }

    #[test]
    fn substitution_and_eval() {
        let p = QPoly::from_int_coeffs(&[1, 2, 3]); // 1 + 2q + 3q^2
        let s = p.substitute_power(3);
        assert_eq!(s, QPoly::from_int_coeffs(&[1, 0, 0, 2, 0, 0, 3]));
        assert_eq!(p.eval_one(), Rational::from(BigInt::from(6)));
    }
}
