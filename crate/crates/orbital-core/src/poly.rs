//! Polynomials in the formal variable `q`: integer point-count polynomials
//! and field-valued Frobenius trace polynomials.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::field::{int, Field, Rational};

/// An element of `ℤ[q]`, coefficients lowest degree first, no trailing zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CountPolynomial {
    coeffs: Vec<i64>,
}

impl CountPolynomial {
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        CountPolynomial { coeffs }
    }

    pub fn zero() -> Self {
        CountPolynomial::default()
    }

    pub fn monomial(degree: usize, coeff: i64) -> Self {
        let mut c = vec![0; degree + 1];
        c[degree] = coeff;
        CountPolynomial::new(c)
    }

    pub fn coefficients(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn coefficient(&self, degree: usize) -> i64 {
        self.coeffs.get(degree).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, q: i64) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * q + BigInt::from(*c))
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        CountPolynomial::new((0..n).map(|i| self.coefficient(i) + other.coefficient(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        CountPolynomial::new((0..n).map(|i| self.coefficient(i) - other.coefficient(i)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return CountPolynomial::zero();
        }
        let mut out = vec![0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        CountPolynomial::new(out)
    }

    pub fn scale(&self, c: i64) -> Self {
        CountPolynomial::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Multiplication by `q^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![0; k];
        c.extend_from_slice(&self.coeffs);
        CountPolynomial::new(c)
    }

    /// Exact Lagrange interpolation through `(q_i, value_i)`.
    ///
    /// Returns `None` if the interpolant has non-integral coefficients.
    pub fn interpolate(points: &[(i64, BigInt)]) -> Option<Self> {
        let n = points.len();
        let mut result = vec![int(0); n];
        for (i, (xi, yi)) in points.iter().enumerate() {
            // basis polynomial Π_{j≠i} (q − x_j)/(x_i − x_j)
            let mut basis = vec![int(1)];
            let mut denom = int(1);
            for (j, (xj, _)) in points.iter().enumerate() {
                if i == j {
                    continue;
                }
                let mut next = vec![int(0); basis.len() + 1];
                for (k, b) in basis.iter().enumerate() {
                    next[k + 1] += b;
                    next[k] -= b * Rational::from_integer(BigInt::from(*xj));
                }
                basis = next;
                denom *= Rational::from_integer(BigInt::from(xi - xj));
            }
            let factor = Rational::from_integer(yi.clone()) / denom;
            for (k, b) in basis.iter().enumerate() {
                result[k] += b * &factor;
            }
        }
        let mut coeffs = Vec::with_capacity(n);
        for c in result {
            if !c.is_integer() {
                return None;
            }
            coeffs.push(i64::try_from(c.to_integer()).ok()?);
        }
        Some(CountPolynomial::new(coeffs))
    }
}

impl fmt::Display for CountPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if *c == 0 {
                continue;
            }
            let sign = if *c < 0 {
                "-"
            } else if first {
                ""
            } else {
                "+"
            };
            if !first {
                write!(f, " ")?;
            }
            let mag = c.abs();
            let body = match (k, mag) {
                (0, m) => format!("{m}"),
                (1, 1) => "q".to_string(),
                (1, m) => format!("{m}q"),
                (k, 1) => format!("q^{k}"),
                (k, m) => format!("{m}q^{k}"),
            };
            if first {
                write!(f, "{sign}{body}")?;
            } else {
                write!(f, "{sign} {body}")?;
            }
            first = false;
        }
        Ok(())
    }
}

/// An element of `F[q]` recording Frobenius traces.
#[derive(Clone, Debug, PartialEq)]
pub struct TracePolynomial<F> {
    coeffs: Vec<F>,
}

impl<F: Field> TracePolynomial<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(Field::is_zero) {
            coeffs.pop();
        }
        TracePolynomial { coeffs }
    }

    pub fn zero() -> Self {
        TracePolynomial { coeffs: Vec::new() }
    }

    pub fn coefficients(&self) -> &[F] {
        &self.coeffs
    }

    pub fn coefficient(&self, k: usize) -> F {
        self.coeffs.get(k).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        TracePolynomial::new((0..n).map(|i| self.coefficient(i).add(&other.coefficient(i))).collect())
    }

    pub fn scale(&self, c: &F) -> Self {
        TracePolynomial::new(self.coeffs.iter().map(|x| x.mul(c)).collect())
    }

    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![F::zero(); k];
        c.extend(self.coeffs.iter().cloned());
        TracePolynomial::new(c)
    }

    /// Adds `c · q^k`.
    pub fn add_term(&mut self, k: usize, c: &F) {
        if self.coeffs.len() <= k {
            self.coeffs.resize(k + 1, F::zero());
        }
        self.coeffs[k] = self.coeffs[k].add(c);
        while self.coeffs.last().is_some_and(Field::is_zero) {
            self.coeffs.pop();
        }
    }

    /// The integer polynomial, if every coefficient is an integer.
    pub fn to_count(&self) -> Option<CountPolynomial>
    where
        F: AsRational,
    {
        let mut out = Vec::new();
        for c in &self.coeffs {
            let r = c.as_rational()?;
            if !r.is_integer() {
                return None;
            }
            out.push(i64::try_from(r.to_integer()).ok()?);
        }
        Some(CountPolynomial::new(out))
    }
}

impl<F: Field> From<&CountPolynomial> for TracePolynomial<F> {
    fn from(p: &CountPolynomial) -> Self {
        TracePolynomial::new(p.coefficients().iter().map(|c| F::from_i64(*c)).collect())
    }
}

/// Fields whose elements may be recognized as rationals.
pub trait AsRational {
    fn as_rational(&self) -> Option<Rational>;
}

impl AsRational for Rational {
    fn as_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
}

impl AsRational for crate::cyclotomic::Cyclotomic {
    fn as_rational(&self) -> Option<Rational> {
        crate::cyclotomic::Cyclotomic::as_rational(self)
    }
}

/// Serializes an integer as a JSON number when it fits in `i64`, else as a decimal string.
pub fn serialize_bigint<S: serde::Serializer>(value: &BigInt, serializer: S) -> Result<S::Ok, S::Error> {
    match i64::try_from(value) {
        Ok(v) => serializer.serialize_i64(v),
        Err(_) => serializer.serialize_str(&value.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluation_and_display() {
        let p = CountPolynomial::new(vec![1, 1, 2]);
        assert_eq!(p.eval(5), BigInt::from(56));
        assert_eq!(p.to_string(), "1 + q + 2q^2");
        assert_eq!(CountPolynomial::new(vec![0, -1]).to_string(), "-q");
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let p = CountPolynomial::new(vec![1, 0, 3, 2]);
        let pts: Vec<_> = [2, 3, 5, 7].iter().map(|&q| (q, p.eval(q))).collect();
        assert_eq!(CountPolynomial::interpolate(&pts), Some(p));
        let bad = vec![(0, BigInt::from(0)), (2, BigInt::from(1))];
        assert_eq!(CountPolynomial::interpolate(&bad), None);
    }

    #[test]
    fn arithmetic() {
        let a = CountPolynomial::new(vec![1, 1]);
        let b = CountPolynomial::new(vec![-1, 1]);
        assert_eq!(a.mul(&b), CountPolynomial::new(vec![-1, 0, 1]));
        assert_eq!(a.shift(2), CountPolynomial::new(vec![0, 0, 1, 1]));
        assert!(a.sub(&a).is_zero());
    }
}
