use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::Serialize;

use super::{family_m, CubicElement, CubicField, Field};
use crate::{Error, Result};

/// `eps = 1 + a^2 w - a w^2` for `m = a^3 + 3`, checked against
/// `-(a - w)^3 / 3`.
pub fn family_unit(field: &Field) -> Result<CubicElement> {
    let a = field.a().ok_or_else(|| Error::NotFamilyShape {
        m: field.m().clone(),
        shape: "a^3 + 3 with a > 0",
    })?;
    unit_for(field, a)
}

fn unit_for(field: &Field, a: &BigInt) -> Result<CubicElement> {
    let eps = CubicElement::from_ints(field, 1, a * a, -a);
    let base = &CubicElement::from_integer(field, a.clone()) - &CubicElement::omega(field);
    let cube = base.pow(3).scale(&BigRational::new(BigInt::from(-1), BigInt::from(3)));
    if cube != eps {
        return Err(Error::IdentityFailure(format!("eps != -(a - w)^3/3 for a = {a}")));
    }
    if !eps.norm().is_one() {
        return Err(Error::IdentityFailure(format!("N(eps) != 1 for a = {a}")));
    }
    Ok(eps)
}

/// Outcome of checking `eps * alpha = beta^2` for one `b`.
#[derive(Debug, Clone, Serialize)]
pub struct UnitIdentityRecord {
    #[serde(with = "crate::intarith::serde_bigint")]
    pub b: BigInt,
    #[serde(with = "crate::intarith::serde_bigint")]
    pub m: BigInt,
    #[serde(serialize_with = "display")]
    pub epsilon: CubicElement,
    #[serde(serialize_with = "display")]
    pub alpha: CubicElement,
    #[serde(serialize_with = "display")]
    pub beta: CubicElement,
    /// Common value of both sides.
    #[serde(serialize_with = "display")]
    pub product: CubicElement,
    #[serde(with = "crate::intarith::serde_bigint")]
    pub norm_beta: BigInt,
}

fn display<S: serde::Serializer>(e: &CubicElement, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(e)
}

/// Verifies `eps alpha = beta^2` and `N(beta) = (4b^3+1)^3 - b^3 m^2 = 3b^3 + 1`
/// in the field of `m = 8b^3 + 3`.
pub fn epsilon_alpha_beta_identity(b: &BigInt) -> Result<UnitIdentityRecord> {
    let m = family_m(b);
    let field = CubicField::new(m.clone())?;
    let b3 = b * b * b;
    let a = b * 2;
    let epsilon = CubicElement::from_ints(&field, 1, &a * &a, -&a);
    if b.is_positive() {
        unit_for(&field, &a)?;
    }
    let alpha = CubicElement::from_ints(&field, &b3 * 2 + 1, -(b * b), 0);
    let beta = CubicElement::from_ints(&field, &b3 * 4 + 1, 0, -b.clone());
    let product = &epsilon * &alpha;
    if product != beta.square() {
        return Err(Error::IdentityFailure(format!("eps alpha != beta^2 at b = {b}")));
    }
    let target = &b3 * 3 + 1;
    let formula: BigInt = (&b3 * BigInt::from(4) + 1u32).pow(3u32) - &b3 * &m * &m;
    let norm = beta.norm();
    if formula != target || norm != BigRational::from_integer(target.clone()) {
        return Err(Error::IdentityFailure(format!("N(beta) != 3b^3 + 1 at b = {b}")));
    }
    Ok(UnitIdentityRecord { b: b.clone(), m, epsilon, alpha, beta, product, norm_beta: target })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn units() {
        let f = CubicField::new(11).unwrap();
        assert_eq!(family_unit(&f).unwrap().to_string(), "1 + 4w - 2w^2");
        let f = CubicField::new(67).unwrap();
        let eps = family_unit(&f).unwrap();
        assert_eq!(eps.to_string(), "1 + 16w - 4w^2");
        assert!(eps.congruent_one_mod4().unwrap());
        let f = CubicField::new(3).unwrap();
        assert!(matches!(family_unit(&f), Err(Error::NotFamilyShape { .. })));
        let f = CubicField::new(2).unwrap();
        assert!(family_unit(&f).is_err());
    }

    #[test]
    fn identity_small_b() {
        let r = epsilon_alpha_beta_identity(&BigInt::from(1)).unwrap();
        assert_eq!(r.product.to_string(), "25 + 11w - 10w^2");
        assert_eq!(r.norm_beta, BigInt::from(4));
        let r = epsilon_alpha_beta_identity(&BigInt::from(2)).unwrap();
        assert_eq!(r.norm_beta, BigInt::from(25));
        assert!(epsilon_alpha_beta_identity(&BigInt::from(89)).is_ok());
    }

    #[test]
    fn non_cubefree_rejected() {
        // b = 19: m = 54875 = 5^3 * 439
        assert!(matches!(
            epsilon_alpha_beta_identity(&BigInt::from(19)),
            Err(Error::NotCubefree(_))
        ));
    }
}
