//! Dense univariate integer polynomials.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::intarith::IntMatrix;

/// Coefficients stored constant term first; no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntPoly {
    #[serde(with = "crate::intarith::serde_bigint_vec")]
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive_part(&self) -> IntPoly {
        let mut g = self.content();
        if g.is_zero() {
            return self.clone();
        }
        if self.leading().is_negative() {
            g = -g;
        }
        IntPoly::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> IntPoly {
        IntPoly::new(
            self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect(),
        )
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::new(Vec::new());
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    /// Resultant via the Sylvester determinant.
    pub fn resultant(&self, other: &IntPoly) -> BigInt {
        let (Some(m), Some(n)) = (self.degree(), other.degree()) else {
            return BigInt::zero();
        };
        if m == 0 && n == 0 {
            return BigInt::one();
        }
        let size = m + n;
        let mut s = IntMatrix::zeros(size, size);
        for row in 0..n {
            for (k, c) in self.coeffs.iter().rev().enumerate() {
                s[(row, row + k)] = c.clone();
            }
        }
        for row in 0..m {
            for (k, c) in other.coeffs.iter().rev().enumerate() {
                s[(n + row, row + k)] = c.clone();
            }
        }
        s.determinant().expect("Sylvester matrix is square")
    }

    /// `(-1)^(n(n-1)/2) Res(f, f') / lc(f)`.
    pub fn discriminant(&self) -> BigInt {
        let Some(n) = self.degree() else {
            return BigInt::zero();
        };
        if n == 0 {
            return BigInt::one();
        }
        let res = self.resultant(&self.derivative());
        let d = res / self.leading();
        if (n * (n - 1) / 2) % 2 == 1 {
            -d
        } else {
            d
        }
    }
}

/// Renders as `x^6 - 27x^4 + 243x^2 - 25`.
impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = !mag.is_one() || i == 0;
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display() {
        let f = IntPoly::from_i64(&[-25, 0, 243, 0, -27, 0, 1]);
        assert_eq!(f.to_string(), "x^6 - 27x^4 + 243x^2 - 25");
        assert_eq!(IntPoly::from_i64(&[0, -1]).to_string(), "-x");
    }

    #[test]
    fn small_discriminants() {
        // x^2 + bx + c: b^2 - 4c
        assert_eq!(IntPoly::from_i64(&[3, 5, 1]).discriminant(), BigInt::from(13));
        // x^3 - m: -27 m^2
        assert_eq!(IntPoly::from_i64(&[-11, 0, 0, 1]).discriminant(), BigInt::from(-27 * 121));
        // 2x^2 + 3x + 1: 9 - 8
        assert_eq!(IntPoly::from_i64(&[1, 3, 2]).discriminant(), BigInt::from(1));
    }

    #[test]
    fn resultant_of_products_vanishes_on_common_root() {
        let f = IntPoly::from_i64(&[-2, 1]).mul(&IntPoly::from_i64(&[1, 0, 1]));
        let g = IntPoly::from_i64(&[-2, 1]).mul(&IntPoly::from_i64(&[3, 1]));
        assert!(f.resultant(&g).is_zero());
    }
}
