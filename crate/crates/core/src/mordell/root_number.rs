use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::intarith::{factor, jacobi};
use crate::{Error, Result};

/// Global root number of `y^2 = x^3 - m`: the product of `(-3/p)` over the
/// primes with `p^2 | m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootNumber {
    #[serde(with = "crate::intarith::serde_bigint")]
    pub m: BigInt,
    pub w: i32,
    /// `(p, (-3/p))` for each `p` with `p^2 | m`.
    #[serde(with = "contributions")]
    pub contributing: Vec<(BigInt, i32)>,
}

/// Valid for cubefree `m` prime to 6 at the squared part (`4 | m` and `9 | m`
/// are outside the formula's range and rejected).
pub fn root_number(m: &BigInt) -> Result<RootNumber> {
    if m < &BigInt::from(2) {
        return Err(Error::InvalidArgument(format!("root number needs m >= 2, got {m}")));
    }
    let f = factor(m)?;
    if !f.is_cubefree() {
        return Err(Error::NotCubefree(m.clone()));
    }
    let mut w = 1;
    let mut contributing = Vec::new();
    for (p, e) in &f.factors {
        if *e < 2 {
            continue;
        }
        if p == &BigInt::from(2) || p == &BigInt::from(3) {
            return Err(Error::InvalidArgument(format!(
                "{p}^2 divides {m}; the product formula needs p > 3"
            )));
        }
        let symbol = jacobi(&(BigInt::from(-3)).mod_floor(p), p)?;
        w *= symbol;
        contributing.push((p.clone(), symbol));
    }
    Ok(RootNumber { m: m.clone(), w, contributing })
}

mod contributions {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[(BigInt, i32)], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|(p, e)| (p.to_string(), *e)))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<(BigInt, i32)>, D::Error> {
        Vec::<(String, i32)>::deserialize(d)?
            .into_iter()
            .map(|(p, e)| Ok((p.parse().map_err(serde::de::Error::custom)?, e)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubic::family_m;

    #[test]
    fn examples() {
        assert_eq!(root_number(&BigInt::from(11)).unwrap().w, 1);
        let r = root_number(&family_m(&BigInt::from(89))).unwrap();
        assert_eq!(r.w, -1);
        assert_eq!(r.contributing, vec![(BigInt::from(41), -1)]);
        let r = root_number(&family_m(&BigInt::from(419))).unwrap();
        assert_eq!(r.w, 1);
        assert_eq!(r.contributing, vec![(BigInt::from(5), -1), (BigInt::from(11), -1)]);
        assert!(matches!(root_number(&BigInt::from(54875)), Err(Error::NotCubefree(_))));
        assert!(root_number(&BigInt::from(12)).is_err());
        // 7 = 1 mod 3 contributes +1
        assert_eq!(root_number(&BigInt::from(98)).unwrap().w, 1);
        assert_eq!(root_number(&BigInt::from(245)).unwrap().w, 1);
    }
}
