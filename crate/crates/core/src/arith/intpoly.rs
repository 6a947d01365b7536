//! Integer-coefficient polynomials: q-integers, Gaussian binomials and
//! cyclotomic polynomials.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::ArithError;

/// Polynomial in ℤ[t] with ascending coefficients and no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        let mut p = IntPoly { coeffs };
        p.trim();
        p
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        IntPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPoly::from_i64s(&[1])
    }

    /// `t^k`
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![BigInt::zero(); k + 1];
        c[k] = BigInt::one();
        IntPoly { coeffs: c }
    }

    /// The q-integer `(n)_t = 1 + t + ... + t^(n-1)`.
    pub fn q_int(n: usize) -> Self {
        IntPoly::new(vec![BigInt::one(); n])
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    pub fn pow(&self, e: u32) -> IntPoly {
        (0..e).fold(IntPoly::one(), |acc, _| acc.mul(self))
    }

    /// Multiply by `t^k`.
    pub fn shift(&self, k: usize) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut c = vec![BigInt::zero(); k];
        c.extend(self.coeffs.iter().cloned());
        IntPoly { coeffs: c }
    }

    /// Exact division by a monic divisor; errors if the remainder is nonzero.
    pub fn div_exact(&self, divisor: &IntPoly) -> Result<IntPoly, ArithError> {
        let dd = divisor.degree().ok_or(ArithError::Domain("division by zero polynomial".into()))?;
        if !divisor.coeffs[dd].is_one() {
            return Err(ArithError::Domain("divisor must be monic".into()));
        }
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return if self.is_zero() { Ok(IntPoly::zero()) } else { Err(ArithError::Domain("inexact division".into())) };
        }
        let mut q = vec![BigInt::zero(); r.len() - dd];
        for i in (dd..r.len()).rev() {
            let c = r[i].clone();
            if c.is_zero() {
                continue;
            }
            for (j, dj) in divisor.coeffs.iter().enumerate() {
                r[i - dd + j] -= &c * dj;
            }
            q[i - dd] = c;
        }
        if r.iter().any(|c| !c.is_zero()) {
            return Err(ArithError::Domain("inexact division".into()));
        }
        Ok(IntPoly::new(q))
    }

    /// Value at an integer point.
    pub fn eval_int(&self, x: i64) -> BigInt {
        let x = BigInt::from(x);
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * &x + c)
    }

    /// Coefficients as `i64`, if they all fit.
    pub fn to_i64s(&self) -> Option<Vec<i64>> {
        self.coeffs.iter().map(|c| c.to_i64()).collect()
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match (k, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => write!(f, "t")?,
                (1, false) => write!(f, "{a}t")?,
                (_, true) => write!(f, "t^{k}")?,
                (_, false) => write!(f, "{a}t^{k}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for IntPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let strs: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        strs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let strs = Vec::<String>::deserialize(d)?;
        let coeffs = strs
            .iter()
            .map(|s| s.parse::<BigInt>().map_err(serde::de::Error::custom))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(IntPoly::new(coeffs))
    }
}

/// Gaussian binomial `binom(n, k)_q` via the q-Pascal recursion
/// `binom(n,k) = binom(n-1,k-1) + q^k binom(n-1,k)`.
pub fn gauss_binomial(n: usize, k: usize) -> Result<IntPoly, ArithError> {
    if k > n {
        return Err(ArithError::Domain(format!("gauss_binomial: k = {k} exceeds n = {n}")));
    }
    // row[j] holds binom(i, j)_q for the current i
    let mut row: Vec<IntPoly> = vec![IntPoly::one()];
    for i in 1..=n {
        let mut next = Vec::with_capacity(i + 1);
        next.push(IntPoly::one());
        for j in 1..i {
            next.push(row[j - 1].add(&row[j].shift(j)));
        }
        next.push(IntPoly::one());
        row = next;
    }
    Ok(row[k].clone())
}

/// The N-th cyclotomic polynomial, by exact division of `x^N - 1` by all
/// `Φ_d` with `d | N`, `d < N`.
pub fn cyclotomic_poly(n: u64) -> Result<IntPoly, ArithError> {
    if n == 0 {
        return Err(ArithError::Domain("cyclotomic_poly needs N >= 1".into()));
    }
    let mut acc = IntPoly::monomial(n as usize).sub(&IntPoly::one());
    for d in super::modp::divisors(n) {
        if d < n {
            acc = acc.div_exact(&cyclotomic_poly(d)?)?;
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_small() {
        assert_eq!(gauss_binomial(2, 1).unwrap(), IntPoly::from_i64s(&[1, 1]));
        assert_eq!(gauss_binomial(4, 2).unwrap(), IntPoly::from_i64s(&[1, 1, 2, 1, 1]));
        assert_eq!(gauss_binomial(5, 0).unwrap(), IntPoly::one());
        assert!(gauss_binomial(2, 3).is_err());
        // (4,2) at q = -1: 1 - 1 + 2 - 1 + 1
        assert_eq!(gauss_binomial(4, 2).unwrap().eval_int(-1), BigInt::from(2));
    }

    #[test]
    fn cyclotomic_small() {
        assert_eq!(cyclotomic_poly(1).unwrap(), IntPoly::from_i64s(&[-1, 1]));
        assert_eq!(cyclotomic_poly(4).unwrap(), IntPoly::from_i64s(&[1, 0, 1]));
        assert_eq!(cyclotomic_poly(6).unwrap(), IntPoly::from_i64s(&[1, -1, 1]));
        assert!(cyclotomic_poly(0).is_err());
    }

    #[test]
    fn display() {
        assert_eq!(IntPoly::from_i64s(&[1, -1, 2]).to_string(), "1 - t + 2t^2");
        assert_eq!(IntPoly::zero().to_string(), "0");
    }

    #[test]
    fn inexact_division_is_an_error() {
        let f = IntPoly::from_i64s(&[1, 0, 1]);
        assert!(f.div_exact(&IntPoly::from_i64s(&[1, 1])).is_err());
    }
}
