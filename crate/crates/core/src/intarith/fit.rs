//! Newton forward-difference interpolation of integer sequences.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::{Error, Result};

/// Result of fitting values sampled at `x = 1, 2, ..., k`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialFit {
    /// Row `j` holds the `j`-th forward differences.
    pub differences: Vec<Vec<BigInt>>,
    /// Least `d` whose `d`-th difference row is constant.
    pub constant_degree: usize,
    /// Monomial coefficients, constant term first, trailing zeros removed.
    pub coefficients: Vec<BigRational>,
}

impl PolynomialFit {
    pub fn is_integral(&self) -> bool {
        self.coefficients.iter().all(|c| c.is_integer())
    }

    pub fn integer_coefficients(&self) -> Option<Vec<BigInt>> {
        self.is_integral().then(|| self.coefficients.iter().map(|c| c.to_integer()).collect())
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    pub fn eval(&self, x: &BigInt) -> BigRational {
        let x = BigRational::from_integer(x.clone());
        self.coefficients
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * &x + c)
    }
}

/// Fits the unique polynomial of degree `< k` through `(i, values[i-1])`.
pub fn fit_polynomial(values: &[BigInt]) -> Result<PolynomialFit> {
    if values.is_empty() {
        return Err(Error::InvalidArgument("cannot fit an empty sequence".into()));
    }
    let mut differences = vec![values.to_vec()];
    while differences.last().map_or(0, Vec::len) > 1 {
        let prev = differences.last().unwrap();
        let next: Vec<BigInt> = prev.windows(2).map(|w| &w[1] - &w[0]).collect();
        differences.push(next);
    }
    let constant_degree = differences
        .iter()
        .position(|row| row.windows(2).all(|w| w[0] == w[1]))
        .unwrap_or(differences.len() - 1);

    // f(x) = sum_j D_j * C(x - 1, j); expand each binomial in monomials.
    let k = values.len();
    let mut coefficients = vec![BigRational::zero(); k];
    let mut basis = vec![BigRational::one()];
    for (j, row) in differences.iter().enumerate() {
        let lead = BigRational::from_integer(row[0].clone());
        for (i, b) in basis.iter().enumerate() {
            coefficients[i] += &lead * b;
        }
        // basis <- basis * (x - 1 - j) / (j + 1)
        let shift = BigRational::from_integer(BigInt::from(-1 - j as i64));
        let denom = BigRational::from_integer(BigInt::from(j as i64 + 1));
        let mut next = vec![BigRational::zero(); basis.len() + 1];
        for (i, b) in basis.iter().enumerate() {
            next[i] += b * &shift / &denom;
            next[i + 1] += b / &denom;
        }
        basis = next;
    }
    while coefficients.len() > 1 && coefficients.last().is_some_and(Zero::is_zero) {
        coefficients.pop();
    }
    Ok(PolynomialFit { differences, constant_degree, coefficients })
}
