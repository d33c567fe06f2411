use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Signed;
use serde::Serialize;

use super::CurvePoint;
use crate::cubic::CubicElement;
use crate::intarith::exact_sqrt;
use crate::{Error, Result};

/// `alpha(P) = r - t^2 w`; its norm is `s^2`.
pub fn weil_representative(p: &CurvePoint) -> Result<CubicElement> {
    let a = p.require_affine()?;
    let field = p.curve().field();
    let alpha = CubicElement::from_ints(field, a.r.clone(), -(&a.t * &a.t), 0);
    debug_assert_eq!(alpha.norm(), BigRational::from_integer(&a.s * &a.s));
    Ok(alpha)
}

/// `(r^4 + 8rmt^6) - (2ts)^2 w = (r^2 - 2rt^2 w - 2t^4 w^2)^2`, together with
/// the scale `g` such that this element is `g^2 alpha(2P)`.
#[derive(Debug, Clone, Serialize)]
pub struct DoublingRecord {
    #[serde(serialize_with = "display")]
    pub point: CurvePoint,
    /// `(r^4 + 8rmt^6) - (2ts)^2 w`.
    #[serde(serialize_with = "display")]
    pub lhs: CubicElement,
    /// `r^2 - 2rt^2 w - 2t^4 w^2`.
    #[serde(serialize_with = "display")]
    pub root: CubicElement,
    #[serde(serialize_with = "display")]
    pub alpha_2p: CubicElement,
    #[serde(with = "crate::intarith::serde_bigint")]
    pub scale: BigInt,
}

fn display<T: std::fmt::Display, S: serde::Serializer>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

pub fn doubling_square_identity(p: &CurvePoint) -> Result<DoublingRecord> {
    let a = p.require_affine()?;
    let doubled = p.double();
    if doubled.is_infinity() {
        return Err(Error::PointAtInfinity);
    }
    let field = p.curve().field();
    let m = p.curve().m();
    let (r, s, t) = (&a.r, &a.s, &a.t);
    let t2 = t * t;
    let t6 = t2.pow(3);
    let x_num = r.pow(4) + BigInt::from(8) * r * m * &t6;
    let two_ts = BigInt::from(2) * t * s;
    let lhs = CubicElement::from_ints(field, x_num.clone(), -(&two_ts * &two_ts), 0);
    let root = CubicElement::from_ints(field, r * r, BigInt::from(-2) * r * &t2, BigInt::from(-2) * &t2 * &t2);
    if root.square() != lhs {
        return Err(Error::IdentityFailure(format!("doubling identity fails at {p}")));
    }
    let alpha_2p = weil_representative(&doubled)?;
    let d = doubled.require_affine()?;
    // x(2P) = x_num / (2ts)^2 = R / T^2, so both sides differ by g^2
    let scale = exact_sqrt(&x_num.gcd(&two_ts.pow(2)))
        .ok_or_else(|| Error::IdentityFailure(format!("x(2P) denominator is not a square at {p}")))?;
    let g2 = BigRational::from_integer(&scale * &scale);
    if alpha_2p.scale(&g2) != lhs || (&two_ts / &scale).abs() != d.t {
        return Err(Error::IdentityFailure(format!("alpha(2P) does not match the doubling formula at {p}")));
    }
    Ok(DoublingRecord { point: p.clone(), lhs, root, alpha_2p, scale })
}

/// `P + Q` for independent points with odd `t`, certified to have even `t`.
pub fn combine_for_even_denominator(p: &CurvePoint, q: &CurvePoint) -> Result<CurvePoint> {
    let (pa, qa) = (p.require_affine()?, q.require_affine()?);
    if pa.t.is_even() || qa.t.is_even() {
        return Err(Error::InvalidArgument("input already has even t; use it directly".into()));
    }
    if p == q || *p == q.negate() {
        return Err(Error::InvalidArgument("P = +-Q is not an independent pair".into()));
    }
    let sum = p.add(q)?;
    if !sum.has_even_t() {
        return Err(Error::ParityViolation(format!("{p} + {q} = {sum} has odd t")));
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mordell::{family_point, Curve};

    #[test]
    fn representatives() {
        let e = Curve::new(11).unwrap();
        let p = e.point(3, 4, 1).unwrap();
        let a = weil_representative(&p).unwrap();
        assert_eq!(a.to_string(), "3 - w");
        assert_eq!(a.norm(), BigRational::from_integer(16.into()));
        let s = e.point(9, -5, 2).unwrap();
        assert_eq!(weil_representative(&s).unwrap().to_string(), "9 - 4w");
        assert_eq!(weil_representative(&p.double()).unwrap().to_string(), "345 - 64w");
        assert_eq!(weil_representative(&e.infinity()), Err(Error::PointAtInfinity));
    }

    #[test]
    fn doubling() {
        let e = Curve::new(11).unwrap();
        let rec = doubling_square_identity(&e.point(3, 4, 1).unwrap()).unwrap();
        assert_eq!(rec.lhs.to_string(), "345 - 64w");
        assert_eq!(rec.root.to_string(), "9 - 6w - 2w^2");
        assert_eq!(rec.scale, BigInt::from(1));
        doubling_square_identity(&e.point(15, 58, 1).unwrap()).unwrap();
        doubling_square_identity(&family_point(&BigInt::from(2)).unwrap()).unwrap();
    }

    #[test]
    fn parity() {
        let e = Curve::new(11).unwrap();
        let p = e.point(3, 4, 1).unwrap();
        let q = e.point(15, 58, 1).unwrap();
        let sum = combine_for_even_denominator(&p, &q).unwrap();
        assert_eq!(sum.t(), Some(&BigInt::from(2)));
        assert!(combine_for_even_denominator(&p, &p).is_err());
        assert!(combine_for_even_denominator(&p, &p.negate()).is_err());
        assert!(combine_for_even_denominator(&sum, &p).is_err());

        let e = Curve::new(219).unwrap();
        let p = e.point(55, 82, 3).unwrap();
        let q = e.point(283, 4744, 3).unwrap();
        let sum = combine_for_even_denominator(&p, &q).unwrap();
        assert_eq!(sum.t(), Some(&BigInt::from(114)));
        assert_eq!(weil_representative(&sum).unwrap().to_string(), "115657 - 12996w");
    }
}
