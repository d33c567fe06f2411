//! Rational points on `E: y^2 = x^3 - m`.
//!
//! Affine points are kept as `(r, s, t)` with `x = r/t^2`, `y = s/t^3`,
//! `t > 0` and `gcd(r, t) = gcd(s, t) = 1`; every rational point has
//! exactly one such encoding.

mod root_number;
mod search;
mod weil;

pub use root_number::{root_number, RootNumber};
pub use search::{search_points, SearchBounds};
pub use weil::{
    combine_for_even_denominator, doubling_square_identity, weil_representative, DoublingRecord,
};

use std::fmt;
use std::ops::{Add, Neg};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::cubic::{family_m, CubicField, Field};
use crate::intarith::exact_sqrt;
use crate::{Error, Result};

/// `y^2 = x^3 - m` for a cubefree `m >= 2`; shares its `m` with the field
/// `Q(m^(1/3))`.
#[derive(Clone)]
pub struct Curve {
    field: Field,
}

impl Curve {
    pub fn new(m: impl Into<BigInt>) -> Result<Curve> {
        Ok(Curve { field: CubicField::new(m)? })
    }

    pub fn from_field(field: &Field) -> Curve {
        Curve { field: field.clone() }
    }

    /// `E_b: y^2 = x^3 - (8b^3 + 3)`.
    pub fn for_family(b: &BigInt) -> Result<Curve> {
        Curve::new(family_m(b))
    }

    pub fn m(&self) -> &BigInt {
        self.field.m()
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn infinity(&self) -> CurvePoint {
        CurvePoint { curve: self.clone(), affine: None }
    }

    /// The point `(r/t^2, s/t^3)`; the encoding must already be normalized.
    pub fn point(&self, r: impl Into<BigInt>, s: impl Into<BigInt>, t: impl Into<BigInt>) -> Result<CurvePoint> {
        let (r, s, t) = (r.into(), s.into(), t.into());
        if !t.is_positive() || !r.gcd(&t).is_one() || !s.gcd(&t).is_one() {
            return Err(Error::InvalidArgument(format!(
                "({r}, {s}, {t}) is not a normalized (r, s, t) encoding"
            )));
        }
        let t3 = t.pow(3);
        if &s * &s != &r * &r * &r - self.m() * &t3 * &t3 {
            return Err(Error::NotOnCurve(self.m().clone()));
        }
        Ok(CurvePoint { curve: self.clone(), affine: Some(Affine { r, s, t }) })
    }

    /// The point `(x, y)`; fails if it is not on the curve.
    pub fn point_xy(&self, x: &BigRational, y: &BigRational) -> Result<CurvePoint> {
        let t2 = x.denom();
        let t = exact_sqrt(t2).ok_or_else(|| Error::NotOnCurve(self.m().clone()))?;
        let t3 = &t * t2;
        let s = y * BigRational::from_integer(t3);
        if !s.is_integer() {
            return Err(Error::NotOnCurve(self.m().clone()));
        }
        self.point(x.numer().clone(), s.to_integer(), t)
    }

    pub fn point_i64(&self, x: (i64, i64), y: (i64, i64)) -> Result<CurvePoint> {
        self.point_xy(
            &BigRational::new(x.0.into(), x.1.into()),
            &BigRational::new(y.0.into(), y.1.into()),
        )
    }

    fn point_unchecked(&self, x: BigRational, y: BigRational) -> CurvePoint {
        self.point_xy(&x, &y).expect("group law stays on the curve")
    }
}

impl PartialEq for Curve {
    fn eq(&self, other: &Self) -> bool {
        self.m() == other.m()
    }
}

impl Eq for Curve {}

impl fmt::Debug for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y^2 = x^3 - {}", self.m())
    }
}

/// Lowest-terms coordinates of an affine point.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Affine {
    pub r: BigInt,
    pub s: BigInt,
    pub t: BigInt,
}

#[derive(Clone, PartialEq, Eq)]
pub struct CurvePoint {
    curve: Curve,
    affine: Option<Affine>,
}

impl CurvePoint {
    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    pub fn is_infinity(&self) -> bool {
        self.affine.is_none()
    }

    pub fn affine(&self) -> Option<&Affine> {
        self.affine.as_ref()
    }

    pub fn require_affine(&self) -> Result<&Affine> {
        self.affine.as_ref().ok_or(Error::PointAtInfinity)
    }

    pub fn x(&self) -> Option<BigRational> {
        self.affine.as_ref().map(|a| BigRational::new(a.r.clone(), &a.t * &a.t))
    }

    pub fn y(&self) -> Option<BigRational> {
        self.affine.as_ref().map(|a| BigRational::new(a.s.clone(), a.t.pow(3)))
    }

    /// Denominator parameter `t`; `None` at infinity.
    pub fn t(&self) -> Option<&BigInt> {
        self.affine.as_ref().map(|a| &a.t)
    }

    pub fn has_even_t(&self) -> bool {
        self.t().is_some_and(|t| t.is_even())
    }

    pub fn is_integral(&self) -> bool {
        self.t().is_none_or(One::is_one)
    }

    pub fn negate(&self) -> CurvePoint {
        let affine = self.affine.as_ref().map(|a| Affine { r: a.r.clone(), s: -&a.s, t: a.t.clone() });
        CurvePoint { curve: self.curve.clone(), affine }
    }

    pub fn add(&self, other: &CurvePoint) -> Result<CurvePoint> {
        if self.curve != other.curve {
            return Err(Error::CurveMismatch { left: self.curve.m().clone(), right: other.curve.m().clone() });
        }
        Ok(self.add_same(other))
    }

    fn add_same(&self, other: &CurvePoint) -> CurvePoint {
        let (Some(x1), Some(y1)) = (self.x(), self.y()) else {
            return other.clone();
        };
        let (Some(x2), Some(y2)) = (other.x(), other.y()) else {
            return self.clone();
        };
        let lambda = if x1 == x2 {
            if y1 != y2 || y1.is_zero() {
                return self.curve.infinity();
            }
            let three = BigRational::from_integer(3.into());
            let two = BigRational::from_integer(2.into());
            three * &x1 * &x1 / (two * &y1)
        } else {
            (&y2 - &y1) / (&x2 - &x1)
        };
        let x3 = &lambda * &lambda - &x1 - &x2;
        let y3 = lambda * (&x1 - &x3) - y1;
        self.curve.point_unchecked(x3, y3)
    }

    pub fn double(&self) -> CurvePoint {
        self.add_same(self)
    }

    /// `n P` by double-and-add.
    pub fn multiply(&self, n: i64) -> CurvePoint {
        let mut base = if n < 0 { self.negate() } else { self.clone() };
        let mut k = n.unsigned_abs();
        let mut acc = self.curve.infinity();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.add_same(&base);
            }
            base = base.double();
            k >>= 1;
        }
        acc
    }

    /// Whether `nP = O` for some `1 <= n <= 12`. Torsion points are integral,
    /// so the first non-integral multiple settles the question.
    pub fn is_torsion(&self) -> bool {
        let mut q = self.clone();
        for _ in 1..=12 {
            if q.is_infinity() {
                return true;
            }
            if !q.is_integral() {
                return false;
            }
            q = q.add_same(self);
        }
        q.is_infinity()
    }

    /// `x(2P)` from the closed form `(x^4 + 8mx)/(2y)^2`.
    pub fn doubled_x_closed_form(&self) -> Option<BigRational> {
        let (x, y) = (self.x()?, self.y()?);
        if y.is_zero() {
            return None;
        }
        let m = BigRational::from_integer(self.curve.m().clone());
        let eight = BigRational::from_integer(8.into());
        let two_y = BigRational::from_integer(2.into()) * y;
        Some((x.pow(4) + eight * m * x) / (&two_y * &two_y))
    }

    /// `y(2P)` from `(x^6 - 20mx^3 - 8m^2)/(2y)^3`.
    pub fn doubled_y_closed_form(&self) -> Option<BigRational> {
        let (x, y) = (self.x()?, self.y()?);
        if y.is_zero() {
            return None;
        }
        let m = BigRational::from_integer(self.curve.m().clone());
        let c20 = BigRational::from_integer(20.into());
        let c8 = BigRational::from_integer(8.into());
        let two_y = BigRational::from_integer(2.into()) * y;
        Some((x.pow(6) - c20 * &m * x.pow(3) - c8 * &m * &m) / two_y.pow(3))
    }
}

/// `((2b^3+1)/b^2, (3b^3+1)/b^3)` on `E_b`.
pub fn family_point(b: &BigInt) -> Result<CurvePoint> {
    if b.is_zero() {
        return Err(Error::InvalidArgument("the family point needs b != 0".into()));
    }
    let curve = Curve::for_family(b)?;
    let b3 = b.pow(3);
    let x = BigRational::new(&b3 * 2 + 1, b * b);
    let y = BigRational::new(&b3 * 3 + 1, b3);
    curve.point_xy(&x, &y)
}

impl fmt::Display for CurvePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.x(), self.y()) {
            (Some(x), Some(y)) => write!(f, "({x}, {y})"),
            _ => write!(f, "O"),
        }
    }
}

impl fmt::Debug for CurvePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} on {:?}", self.curve)
    }
}

impl Serialize for CurvePoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(None)?;
        map.serialize_entry("m", &self.curve.m().to_string())?;
        match &self.affine {
            None => map.serialize_entry("infinity", &true)?,
            Some(a) => {
                map.serialize_entry("r", &a.r.to_string())?;
                map.serialize_entry("s", &a.s.to_string())?;
                map.serialize_entry("t", &a.t.to_string())?;
            }
        }
        map.end()
    }
}

/// Panics on points of different curves; see [`CurvePoint::add`].
impl Add for &CurvePoint {
    type Output = CurvePoint;
    fn add(self, rhs: &CurvePoint) -> CurvePoint {
        CurvePoint::add(self, rhs).expect("points on different curves")
    }
}

impl Neg for &CurvePoint {
    type Output = CurvePoint;
    fn neg(self) -> CurvePoint {
        self.negate()
    }
}
