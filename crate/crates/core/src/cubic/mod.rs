//! Exact arithmetic in the pure cubic field `K = Q(w)`, `w^3 = m`, over the
//! power basis `1, w, w^2`.
//!
//! Products reduce with `w^3 = m`:
//!
//! ```text
//! (x1 + y1 w + z1 w^2)(x2 + y2 w + z2 w^2)
//!   = x1x2 + m(y1z2 + z1y2) + (x1y2 + y1x2 + m z1z2) w + (x1z2 + y1y2 + z1x2) w^2
//! ```
//!
//! The norm of `x + y w + z w^2` is `x^3 + m y^3 + m^2 z^3 - 3mxyz`; it equals
//! the real embedding times the squared modulus of the complex embedding, so
//! its sign is the sign of the real embedding.

mod identities;
mod minpoly;
mod sqrt;

pub use identities::{epsilon_alpha_beta_identity, family_unit, UnitIdentityRecord};
pub use minpoly::{minpoly_sqrt, SqrtMinpoly};
pub use sqrt::{is_square, is_square_with, NonSquareWitness, SquareRootConfig, SquareTest};

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::intarith::{factor, modp, Factorization};
use crate::{Error, Result};

/// `K = Q(m^(1/3))` for a cubefree `m >= 2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubicField {
    m: BigInt,
    factorization: Factorization,
    a: Option<BigInt>,
    b: Option<BigInt>,
    disc: BigInt,
}

pub type Field = Arc<CubicField>;

impl CubicField {
    pub fn new(m: impl Into<BigInt>) -> Result<Field> {
        let m = m.into();
        if m < BigInt::from(2) {
            return Err(Error::InvalidArgument(format!("pure cubic field needs m >= 2, got {m}")));
        }
        let factorization = factor(&m)?;
        if !factorization.is_cubefree() {
            return Err(Error::NotCubefree(m));
        }
        let shifted: BigInt = &m - 3;
        let a = Some(shifted.cbrt()).filter(|a| a.is_positive() && a * a * a == shifted);
        let b = a.as_ref().filter(|a| a.is_even()).map(|a| a / 2);
        let rad = factorization.radical();
        let factor = if Self::residue_is_pm1_mod9(&m) { 3 } else { 27 };
        let disc = -BigInt::from(factor) * &rad * &rad;
        Ok(Arc::new(CubicField { m, factorization, a, b, disc }))
    }

    /// The field of the family `m = 8b^3 + 3`.
    pub fn for_family(b: &BigInt) -> Result<Field> {
        Self::new(family_m(b))
    }

    fn residue_is_pm1_mod9(m: &BigInt) -> bool {
        let r = m.mod_floor(&BigInt::from(9));
        r == BigInt::one() || r == BigInt::from(8)
    }

    pub fn m(&self) -> &BigInt {
        &self.m
    }

    pub fn factorization(&self) -> &Factorization {
        &self.factorization
    }

    /// `a > 0` with `m = a^3 + 3`, when it exists.
    pub fn a(&self) -> Option<&BigInt> {
        self.a.as_ref()
    }

    /// `b` with `m = 8b^3 + 3`, when it exists.
    pub fn b(&self) -> Option<&BigInt> {
        self.b.as_ref()
    }

    /// Field discriminant: `-27 rad(m)^2`, or `-3 rad(m)^2` when `m = +-1 mod 9`.
    pub fn discriminant(&self) -> &BigInt {
        &self.disc
    }

    pub fn is_squarefree(&self) -> bool {
        self.factorization.is_squarefree()
    }

    /// Whether `Z[w]` is the full ring of integers.
    pub fn is_monogenic(&self) -> bool {
        self.is_squarefree() && !Self::residue_is_pm1_mod9(&self.m)
    }

    /// Fails unless `Z[w]` is the maximal order.
    pub fn require_monogenic(&self) -> Result<()> {
        if !self.is_squarefree() {
            Err(Error::NonMonogenic { m: self.m.clone(), reason: "m is not squarefree" })
        } else if Self::residue_is_pm1_mod9(&self.m) {
            Err(Error::NonMonogenic { m: self.m.clone(), reason: "m = +-1 mod 9" })
        } else {
            Ok(())
        }
    }

    pub fn m_u64(&self) -> Option<u64> {
        self.m.to_u64()
    }

    /// Real cube root of `m` in double precision.
    pub fn theta_f64(&self) -> f64 {
        self.m.to_f64().unwrap_or(f64::INFINITY).cbrt()
    }
}

pub fn family_m(b: &BigInt) -> BigInt {
    BigInt::from(8) * b * b * b + 3
}

/// `x + y w + z w^2` with rational coordinates.
#[derive(Clone, PartialEq, Eq)]
pub struct CubicElement {
    field: Field,
    coords: [BigRational; 3],
}

fn rat(x: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(x.into())
}

impl CubicElement {
    pub fn new(field: &Field, coords: [BigRational; 3]) -> Self {
        CubicElement { field: field.clone(), coords }
    }

    pub fn from_ints(field: &Field, x: impl Into<BigInt>, y: impl Into<BigInt>, z: impl Into<BigInt>) -> Self {
        Self::new(field, [rat(x), rat(y), rat(z)])
    }

    pub fn from_integer(field: &Field, x: impl Into<BigInt>) -> Self {
        Self::from_ints(field, x, 0, 0)
    }

    pub fn from_rational(field: &Field, x: BigRational) -> Self {
        Self::new(field, [x, BigRational::zero(), BigRational::zero()])
    }

    pub fn zero(field: &Field) -> Self {
        Self::from_integer(field, 0)
    }

    pub fn one(field: &Field) -> Self {
        Self::from_integer(field, 1)
    }

    pub fn omega(field: &Field) -> Self {
        Self::from_ints(field, 0, 1, 0)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn m(&self) -> &BigInt {
        &self.field.m
    }

    pub fn coords(&self) -> &[BigRational; 3] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(BigRational::is_integer)
    }

    pub fn integer_coords(&self) -> Option<[BigInt; 3]> {
        self.is_integral().then(|| self.coords.clone().map(|c| c.to_integer()))
    }

    pub fn require_integral(&self) -> Result<[BigInt; 3]> {
        self.integer_coords().ok_or(Error::NonIntegral)
    }

    /// Least common denominator of the coordinates.
    pub fn denominator(&self) -> BigInt {
        self.coords.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    fn check_same(&self, other: &CubicElement) -> Result<()> {
        if self.field.m == other.field.m {
            Ok(())
        } else {
            Err(Error::FieldMismatch { left: self.field.m.clone(), right: other.field.m.clone() })
        }
    }

    pub fn checked_add(&self, other: &CubicElement) -> Result<CubicElement> {
        self.check_same(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn checked_sub(&self, other: &CubicElement) -> Result<CubicElement> {
        self.check_same(other)?;
        Ok(self.add_unchecked(&-other))
    }

    pub fn checked_mul(&self, other: &CubicElement) -> Result<CubicElement> {
        self.check_same(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn add_unchecked(&self, other: &CubicElement) -> CubicElement {
        let [a, b, c] = &self.coords;
        let [d, e, f] = &other.coords;
        CubicElement { field: self.field.clone(), coords: [a + d, b + e, c + f] }
    }

    fn mul_unchecked(&self, other: &CubicElement) -> CubicElement {
        let m = rat(self.field.m.clone());
        let [x1, y1, z1] = &self.coords;
        let [x2, y2, z2] = &other.coords;
        let c0 = x1 * x2 + &m * (y1 * z2 + z1 * y2);
        let c1 = x1 * y2 + y1 * x2 + &m * (z1 * z2);
        let c2 = x1 * z2 + y1 * y2 + z1 * x2;
        CubicElement { field: self.field.clone(), coords: [c0, c1, c2] }
    }

    pub fn scale(&self, k: &BigRational) -> CubicElement {
        CubicElement { field: self.field.clone(), coords: self.coords.clone().map(|c| c * k) }
    }

    pub fn square(&self) -> CubicElement {
        self.mul_unchecked(self)
    }

    pub fn pow(&self, mut exp: u32) -> CubicElement {
        let mut acc = CubicElement::one(&self.field);
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            base = base.square();
            exp >>= 1;
        }
        acc
    }

    /// Signed power; negative exponents need a nonzero element.
    pub fn powi(&self, exp: i32) -> Result<CubicElement> {
        if exp >= 0 {
            Ok(self.pow(exp as u32))
        } else {
            Ok(self.inverse()?.pow(exp.unsigned_abs()))
        }
    }

    pub fn norm(&self) -> BigRational {
        let m = rat(self.field.m.clone());
        let [x, y, z] = &self.coords;
        x * x * x + &m * y * y * y + &m * &m * z * z * z - rat(3) * &m * x * y * z
    }

    pub fn trace(&self) -> BigRational {
        rat(3) * &self.coords[0]
    }

    /// Second elementary symmetric function of the conjugates: `3x^2 - 3myz`.
    pub fn second_symmetric(&self) -> BigRational {
        let m = rat(self.field.m.clone());
        let [x, y, z] = &self.coords;
        rat(3) * x * x - rat(3) * m * y * z
    }

    /// Monic characteristic polynomial `X^3 - tX^2 + sX - N`, constant term first.
    pub fn charpoly(&self) -> [BigRational; 4] {
        [-self.norm(), self.second_symmetric(), -self.trace(), BigRational::one()]
    }

    pub fn inverse(&self) -> Result<CubicElement> {
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::InvalidArgument("zero has no inverse".into()));
        }
        // Cayley-Hamilton: e (e^2 - t e + s) = N
        let t = self.trace();
        let s = self.second_symmetric();
        let adj = self
            .square()
            .add_unchecked(&self.scale(&-t))
            .add_unchecked(&CubicElement::from_rational(&self.field, s));
        Ok(adj.scale(&(BigRational::one() / n)))
    }

    pub fn checked_div(&self, other: &CubicElement) -> Result<CubicElement> {
        self.check_same(other)?;
        Ok(self.mul_unchecked(&other.inverse()?))
    }

    /// Whether `x = 1` and `y = z = 0` modulo 4.
    pub fn congruent_one_mod4(&self) -> Result<bool> {
        let [x, y, z] = self.require_integral()?;
        let four = BigInt::from(4);
        Ok(x.mod_floor(&four).is_one() && y.mod_floor(&four).is_zero() && z.mod_floor(&four).is_zero())
    }

    /// Image in `Z[w]/(p, w - root) = F_p`; `None` if `p` divides a denominator.
    pub fn residue_at(&self, p: u64, root: u64) -> Option<u64> {
        let pb = BigInt::from(p);
        let mut acc = 0u64;
        let mut power = 1u64;
        for c in &self.coords {
            let den = c.denom().mod_floor(&pb).to_u64()?;
            if den == 0 {
                return None;
            }
            let num = c.numer().mod_floor(&pb).to_u64()?;
            let v = modp::mul_mod(num, modp::inv_mod(den, p), p);
            acc = modp::add_mod(acc, modp::mul_mod(v, power, p), p);
            power = modp::mul_mod(power, root, p);
        }
        Some(acc)
    }

    /// `x^2 + theta^2 y^2 + theta^4 z^2`: one third of the sum of squared
    /// absolute values over the three embeddings.
    pub fn t2_f64(&self) -> f64 {
        let theta = self.field.theta_f64();
        let [x, y, z] = self.coords.clone().map(|c| c.to_f64().unwrap_or(f64::INFINITY));
        x * x + theta * theta * y * y + theta.powi(4) * z * z
    }

    /// Sign of the image under the real embedding `w -> m^(1/3)`.
    pub fn real_sign(&self) -> i32 {
        let n = self.norm();
        if n.is_positive() {
            1
        } else if n.is_negative() {
            -1
        } else {
            0
        }
    }

    /// Sign of the real embedding from an adaptive fixed-point evaluation,
    /// independent of the norm.
    pub fn real_embedding_sign(&self) -> i32 {
        sqrt::real_embedding_sign(self)
    }

    pub fn real_embedding_f64(&self) -> f64 {
        let theta = self.field.theta_f64();
        let [x, y, z] = self.coords.clone().map(|c| c.to_f64().unwrap_or(f64::NAN));
        x + y * theta + z * theta * theta
    }
}

impl fmt::Display for CubicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coords.iter().enumerate() {
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
            let unit = mag.is_one() && i > 0;
            if !unit {
                if mag.is_integer() {
                    write!(f, "{}", mag.numer())?;
                } else {
                    write!(f, "({mag})")?;
                }
            }
            match i {
                0 => {}
                1 => write!(f, "w")?,
                _ => write!(f, "w^2")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CubicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} (m = {})", self.field.m)
    }
}

/// Panics on mixed fields; use [`CubicElement::checked_add`] for a `Result`.
impl Add for &CubicElement {
    type Output = CubicElement;
    fn add(self, rhs: &CubicElement) -> CubicElement {
        self.checked_add(rhs).expect("mixed-field addition")
    }
}

impl Sub for &CubicElement {
    type Output = CubicElement;
    fn sub(self, rhs: &CubicElement) -> CubicElement {
        self.checked_sub(rhs).expect("mixed-field subtraction")
    }
}

/// Panics on mixed fields; use [`CubicElement::checked_mul`] for a `Result`.
impl Mul for &CubicElement {
    type Output = CubicElement;
    fn mul(self, rhs: &CubicElement) -> CubicElement {
        self.checked_mul(rhs).expect("mixed-field multiplication")
    }
}

impl Neg for &CubicElement {
    type Output = CubicElement;
    fn neg(self) -> CubicElement {
        CubicElement { field: self.field.clone(), coords: self.coords.clone().map(|c| -c) }
    }
}

impl Neg for CubicElement {
    type Output = CubicElement;
    fn neg(self) -> CubicElement {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn k(m: i64) -> Field {
        CubicField::new(m).unwrap()
    }

    fn el(f: &Field, x: i64, y: i64, z: i64) -> CubicElement {
        CubicElement::from_ints(f, x, y, z)
    }

    #[test]
    fn field_metadata() {
        let f = k(11);
        assert_eq!(f.a(), Some(&BigInt::from(2)));
        assert_eq!(f.b(), Some(&BigInt::from(1)));
        assert_eq!(f.discriminant(), &BigInt::from(-3267));
        assert!(f.is_monogenic());

        let f = k(10);
        assert_eq!(f.discriminant(), &BigInt::from(-300));
        assert!(!f.is_monogenic());

        let f = k(2);
        assert_eq!(f.discriminant(), &BigInt::from(-108));
        assert_eq!(f.a(), None);

        assert_eq!(k(67).a(), Some(&BigInt::from(4)));
        assert_eq!(k(3).a(), None);
        assert!(matches!(CubicField::new(54875), Err(Error::NotCubefree(_))));
        assert!(CubicField::new(1).is_err());
    }

    #[test]
    fn norms() {
        let f = k(11);
        assert_eq!(el(&f, 2, -1, 0).norm(), rat(-3));
        assert_eq!(el(&f, 1, 0, 0).norm(), rat(1));
        assert_eq!(el(&f, 5, 2, 1).norm(), rat(4));
        assert_eq!(el(&f, 3, 1, -1).norm(), rat(16));
        assert_eq!(el(&f, 9, -4, 0).norm(), rat(25));
    }

    #[test]
    fn mixed_fields_rejected() {
        let a = el(&k(11), 1, 1, 0);
        let b = el(&k(67), 1, 1, 0);
        assert!(matches!(a.checked_mul(&b), Err(Error::FieldMismatch { .. })));
        assert!(a.checked_add(&b).is_err());
    }

    #[test]
    fn mod4_congruence() {
        let f = k(11);
        assert!(el(&f, 9, -4, 0).congruent_one_mod4().unwrap());
        assert!(!el(&f, 3, -1, 0).congruent_one_mod4().unwrap());
        let half = CubicElement::new(&f, [BigRational::new(1.into(), 2.into()), rat(0), rat(0)]);
        assert_eq!(half.congruent_one_mod4(), Err(Error::NonIntegral));
    }

    #[test]
    fn inverse_round_trip() {
        let f = k(11);
        let e = el(&f, 5, 2, 1);
        assert_eq!(&e * &e.inverse().unwrap(), CubicElement::one(&f));
        assert!(CubicElement::zero(&f).inverse().is_err());
    }

    #[test]
    fn display() {
        let f = k(11);
        assert_eq!(el(&f, 9, -4, 0).to_string(), "9 - 4w");
        assert_eq!(el(&f, 1, 4, -2).to_string(), "1 + 4w - 2w^2");
        assert_eq!(el(&f, 0, -1, 1).to_string(), "-w + w^2");
        assert_eq!(CubicElement::zero(&f).to_string(), "0");
    }

    #[test]
    fn residues_at_37() {
        let f = k(11);
        let e = el(&f, 9, -4, 0);
        assert_eq!(e.residue_at(37, 28), Some(45 % 37));
        assert_eq!(e.residue_at(37, 25), Some(57 % 37));
        assert_eq!(e.residue_at(37, 21), Some(73 % 37));
    }

    fn small() -> impl Strategy<Value = (i64, i64, i64)> {
        (-60i64..60, -60i64..60, -60i64..60)
    }

    proptest! {
        #[test]
        fn norm_is_multiplicative(m in prop::sample::select(vec![2i64, 11, 67, 219, 515, 1003]), a in small(), b in small()) {
            let f = k(m);
            let x = el(&f, a.0, a.1, a.2);
            let y = el(&f, b.0, b.1, b.2);
            prop_assert_eq!((&x * &y).norm(), x.norm() * y.norm());
        }

        #[test]
        fn charpoly_annihilates(m in prop::sample::select(vec![2i64, 11, 219]), a in small()) {
            let f = k(m);
            let e = el(&f, a.0, a.1, a.2);
            let [c0, c1, c2, c3] = e.charpoly();
            let e2 = e.square();
            let e3 = &e2 * &e;
            let value = &(&(&e3.scale(&c3) + &e2.scale(&c2)) + &e.scale(&c1))
                + &CubicElement::from_rational(&f, c0);
            prop_assert!(value.is_zero());
        }

        #[test]
        fn ring_axioms(a in small(), b in small(), c in small()) {
            let f = k(11);
            let (x, y, z) = (el(&f, a.0, a.1, a.2), el(&f, b.0, b.1, b.2), el(&f, c.0, c.1, c.2));
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            prop_assert_eq!(&x * &y, &y * &x);
        }

        #[test]
        fn real_sign_matches_fixed_point(a in small()) {
            let f = k(219);
            let e = el(&f, a.0, a.1, a.2);
            prop_assert_eq!(e.real_sign(), e.real_embedding_sign());
        }
    }
}
