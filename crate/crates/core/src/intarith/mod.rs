//! Integer utilities: factorization, residue symbols, cube/square-free
//! profiles, finite-difference fitting and Smith normal form.

mod factor;
mod fit;
mod lattice;
mod matrix;
pub mod modp;
mod symbols;

pub use factor::{factor, factor_u64, is_prime, is_prime_big, is_prime_u64, Factorization};
pub use fit::{fit_polynomial, PolynomialFit};
pub use lattice::{FiniteAbelianGroup, IncrementalHnf};
pub use matrix::{hermite_rows, smith_diagonal_with_cols, smith_normal_form, IntMatrix, SmithForm};
pub use symbols::{jacobi, jacobi_i64};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Square and cube divisibility data of an integer `m >= 2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerProfile {
    pub is_squarefree: bool,
    pub is_cubefree: bool,
    /// Primes `p = 2 mod 3` with `p^2 | m`, ascending.
    #[serde(with = "serde_bigint_vec")]
    pub squared_primes_2mod3: Vec<BigInt>,
    pub factorization: Factorization,
}

pub fn cubefree_squarefree_profile(m: &BigInt) -> Result<PowerProfile> {
    if m < &BigInt::from(2) {
        return Err(Error::InvalidArgument(format!("profile needs m >= 2, got {m}")));
    }
    let factorization = factor(m)?;
    let three = BigInt::from(3);
    let squared_primes_2mod3 = factorization
        .factors
        .iter()
        .filter(|(p, e)| *e >= 2 && (p % &three) == BigInt::from(2))
        .map(|(p, _)| p.clone())
        .collect();
    Ok(PowerProfile {
        is_squarefree: factorization.is_squarefree(),
        is_cubefree: factorization.is_cubefree(),
        squared_primes_2mod3,
        factorization,
    })
}

/// Exact integer square root of a nonnegative perfect square.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Exact integer cube root, sign preserving.
pub fn exact_cbrt(n: &BigInt) -> Option<BigInt> {
    let r = n.cbrt();
    (&r * &r * &r == *n).then_some(r)
}

pub fn is_perfect_square(n: &BigInt) -> bool {
    exact_sqrt(n).is_some()
}

/// Smallest prime factor of `|n|`, `None` for units and zero.
pub fn smallest_prime_factor(n: &BigInt) -> Option<BigInt> {
    if n.is_zero() {
        return None;
    }
    factor(&n.abs()).ok()?.factors.first().map(|(p, _)| p.clone())
}

pub(crate) mod serde_bigint {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub(crate) mod serde_bigint_vec {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| x.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| s.parse().map_err(serde::de::Error::custom))
            .collect()
    }
}

pub(crate) mod serde_factor_list {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[(BigInt, u32)], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|(p, e)| (p.to_string(), *e)))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<(BigInt, u32)>, D::Error> {
        Vec::<(String, u32)>::deserialize(d)?
            .into_iter()
            .map(|(p, e)| Ok((p.parse().map_err(serde::de::Error::custom)?, e)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m_of(b: i64) -> BigInt {
        BigInt::from(8) * BigInt::from(b).pow(3) + 3
    }

    #[test]
    fn profiles() {
        let p = cubefree_squarefree_profile(&m_of(419)).unwrap();
        assert_eq!(p.squared_primes_2mod3, vec![BigInt::from(5), BigInt::from(11)]);
        assert_eq!(p.factorization.to_string(), "5^2 * 11^2 * 227 * 857");
        assert!(p.is_cubefree && !p.is_squarefree);

        let p = cubefree_squarefree_profile(&BigInt::from(11)).unwrap();
        assert!(p.is_squarefree && p.is_cubefree && p.squared_primes_2mod3.is_empty());

        let p = cubefree_squarefree_profile(&BigInt::from(54875)).unwrap();
        assert!(!p.is_cubefree);

        assert!(cubefree_squarefree_profile(&BigInt::from(1)).is_err());
    }

    #[test]
    fn squared_primes_1mod3_are_excluded() {
        // 7^2 * 2: 7 = 1 mod 3
        let p = cubefree_squarefree_profile(&BigInt::from(98)).unwrap();
        assert!(p.squared_primes_2mod3.is_empty());
    }

    proptest! {
        #[test]
        fn factor_reconstructs(n in 1u64..u64::MAX) {
            let f = factor_u64(n).unwrap();
            prop_assert_eq!(f.product(), BigInt::from(n));
            prop_assert!(f.factors.windows(2).all(|w| w[0].0 < w[1].0));
            prop_assert!(f.primes().all(is_prime));
        }
    }
}
