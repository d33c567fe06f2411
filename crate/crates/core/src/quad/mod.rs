//! The imaginary quadratic field `k = Q(sqrt(-m))`, `m = 3 mod 4`.

mod forms;
mod ideal;

pub use forms::{class_group, FormClassGroup, QuadForm};
pub use ideal::{point_to_quad_class, QuadIdeal, QuadPointClass};

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::cubic::family_m;
use crate::{Error, Result};

pub(crate) fn check_discriminant(m: &BigInt) -> Result<()> {
    if !m.is_positive() || m.mod_floor(&BigInt::from(4)) != BigInt::from(3) {
        return Err(Error::InvalidArgument(format!("need m > 0 with -m = 1 mod 4, got {m}")));
    }
    Ok(())
}

/// `u + v sqrt(-m)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadElement {
    m: BigInt,
    u: BigRational,
    v: BigRational,
}

impl QuadElement {
    pub fn new(m: &BigInt, u: BigRational, v: BigRational) -> Result<Self> {
        check_discriminant(m)?;
        Ok(QuadElement { m: m.clone(), u, v })
    }

    pub fn from_ints(m: &BigInt, u: impl Into<BigInt>, v: impl Into<BigInt>) -> Result<Self> {
        Self::new(m, BigRational::from_integer(u.into()), BigRational::from_integer(v.into()))
    }

    /// `(u + v sqrt(-m)) / 2`.
    pub fn halves(m: &BigInt, u: impl Into<BigInt>, v: impl Into<BigInt>) -> Result<Self> {
        let two = BigInt::from(2);
        Self::new(m, BigRational::new(u.into(), two.clone()), BigRational::new(v.into(), two))
    }

    pub fn m(&self) -> &BigInt {
        &self.m
    }

    pub fn u(&self) -> &BigRational {
        &self.u
    }

    pub fn v(&self) -> &BigRational {
        &self.v
    }

    /// In the ring of integers: `2u, 2v` integers of equal parity.
    pub fn is_integral(&self) -> bool {
        let two = BigRational::from_integer(2.into());
        let (a, b) = (&self.u * &two, &self.v * &two);
        a.is_integer() && b.is_integer() && (a.to_integer() - b.to_integer()).is_even()
    }

    pub fn norm(&self) -> BigRational {
        &self.u * &self.u + BigRational::from_integer(self.m.clone()) * &self.v * &self.v
    }

    pub fn conjugate(&self) -> Self {
        QuadElement { m: self.m.clone(), u: self.u.clone(), v: -&self.v }
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let m = BigRational::from_integer(self.m.clone());
        Ok(QuadElement {
            m: self.m.clone(),
            u: &self.u * &other.u - m * &self.v * &other.v,
            v: &self.u * &other.v + &self.v * &other.u,
        })
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(QuadElement { m: self.m.clone(), u: &self.u + &other.u, v: &self.v + &other.v })
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.m == other.m {
            Ok(())
        } else {
            Err(Error::FieldMismatch { left: self.m.clone(), right: other.m.clone() })
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut acc = QuadElement { m: self.m.clone(), u: BigRational::one(), v: BigRational::zero() };
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }
}

impl fmt::Display for QuadElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let root = format!("sqrt(-{})", self.m);
        match (self.u.is_zero(), self.v.is_zero()) {
            (_, true) => write!(f, "{}", self.u),
            (true, false) => write!(f, "{}{root}", coeff(&self.v, true)),
            (false, false) => {
                let sign = if self.v.is_negative() { '-' } else { '+' };
                write!(f, "{} {sign} {}{root}", self.u, coeff(&self.v.abs(), false))
            }
        }
    }
}

fn coeff(v: &BigRational, signed: bool) -> String {
    if v.is_one() {
        String::new()
    } else if signed && (-v).is_one() {
        "-".into()
    } else if v.is_integer() {
        format!("{v}*")
    } else {
        format!("({v})*")
    }
}

impl Mul for &QuadElement {
    type Output = QuadElement;
    fn mul(self, rhs: &QuadElement) -> QuadElement {
        self.checked_mul(rhs).expect("mixed-field multiplication")
    }
}

impl Add for &QuadElement {
    type Output = QuadElement;
    fn add(self, rhs: &QuadElement) -> QuadElement {
        self.checked_add(rhs).expect("mixed-field addition")
    }
}

impl Neg for &QuadElement {
    type Output = QuadElement;
    fn neg(self) -> QuadElement {
        QuadElement { m: self.m.clone(), u: -&self.u, v: -&self.v }
    }
}

impl Sub for &QuadElement {
    type Output = QuadElement;
    fn sub(self, rhs: &QuadElement) -> QuadElement {
        self + &-rhs
    }
}

/// `((-1 - sqrt(-m))/2)^3 = tau = 3b^3 + 1 + b^3 sqrt(-m)` for `m = 8b^3 + 3`.
#[derive(Debug, Clone, Serialize)]
pub struct CubeIdentityRecord {
    #[serde(with = "crate::intarith::serde_bigint")]
    pub b: BigInt,
    #[serde(with = "crate::intarith::serde_bigint")]
    pub m: BigInt,
    #[serde(serialize_with = "display")]
    pub tau: QuadElement,
    #[serde(serialize_with = "display")]
    pub cube_root: QuadElement,
    /// `((1 + sqrt(-m))/2)^3`, which is `-tau`.
    #[serde(serialize_with = "display")]
    pub opposite_cube: QuadElement,
    #[serde(with = "crate::intarith::serde_bigint")]
    pub norm_tau: BigInt,
    /// `((3 + sqrt(-m))/2)^3 = -9b^3 + (3 - b^3) sqrt(-m)`.
    #[serde(serialize_with = "display")]
    pub three_cube: QuadElement,
}

fn display<S: serde::Serializer>(e: &QuadElement, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(e)
}

pub fn cube_identity(b: &BigInt) -> Result<CubeIdentityRecord> {
    let m = family_m(b);
    check_discriminant(&m)?;
    let b3 = b.pow(3);
    let tau = QuadElement::from_ints(&m, &b3 * 3 + 1, b3.clone())?;
    let cube_root = QuadElement::halves(&m, -1, -1)?;
    let fail = |what: &str| Err(Error::IdentityFailure(format!("{what} at b = {b}")));
    if cube_root.pow(3) != tau {
        return fail("((-1 - sqrt(-m))/2)^3 != tau");
    }
    let opposite_cube = QuadElement::halves(&m, 1, 1)?.pow(3);
    if opposite_cube != -&tau {
        return fail("((1 + sqrt(-m))/2)^3 != -tau");
    }
    let norm_tau: BigInt = (&b3 * BigInt::from(2) + 1u32).pow(3u32);
    if tau.norm() != BigRational::from_integer(norm_tau.clone()) {
        return fail("N(tau) != (2b^3 + 1)^3");
    }
    let three_cube = QuadElement::halves(&m, 3, 1)?.pow(3);
    if three_cube != QuadElement::from_ints(&m, &b3 * -9, 3 - &b3)? {
        return fail("((3 + sqrt(-m))/2)^3 != -9b^3 + (3 - b^3) sqrt(-m)");
    }
    Ok(CubeIdentityRecord { b: b.clone(), m, tau, cube_root, opposite_cube, norm_tau, three_cube })
}
