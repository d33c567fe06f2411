//! Ideals of the ring of integers `Z[u]`, `u = (1 + sqrt(-m))/2`, as
//! Hermite bases, and the map sending a point to the class of the ideal
//! `(r, s + t^3 sqrt(-m))`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::{check_discriminant, QuadForm};
use crate::intarith::{hermite_rows, smallest_prime_factor};
use crate::mordell::CurvePoint;
use crate::{Error, Result};

/// The lattice `Z(p + q u) + Z n`, stored as its Hermite basis over `(u, 1)`:
/// rows `(q, p)` and `(0, n)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadIdeal {
    m: BigInt,
    q: BigInt,
    p: BigInt,
    n: BigInt,
}

/// `x + y u` as `(x, y)`.
type Elt = (BigInt, BigInt);

fn mul(m: &BigInt, a: &Elt, b: &Elt) -> Elt {
    // u^2 = u - (1 + m)/4
    let k = (m + 1) / 4;
    let yy = &a.1 * &b.1;
    (&a.0 * &b.0 - &yy * k, &a.0 * &b.1 + &a.1 * &b.0 + yy)
}

impl QuadIdeal {
    /// Ideal generated (as an ideal) by the given elements `x + y u`.
    pub fn generated_by(m: &BigInt, gens: &[Elt]) -> Result<Self> {
        check_discriminant(m)?;
        let u: Elt = (BigInt::zero(), BigInt::one());
        let mut vectors = Vec::new();
        for g in gens {
            for e in [g.clone(), mul(m, g, &u)] {
                vectors.push(vec![e.1, e.0]);
            }
        }
        Self::from_lattice(m, &vectors)
    }

    fn from_lattice(m: &BigInt, vectors: &[Vec<BigInt>]) -> Result<Self> {
        let h = hermite_rows(vectors);
        match h.as_slice() {
            [r1, r2] if !r1[0].is_zero() && r2[0].is_zero() => Ok(QuadIdeal {
                m: m.clone(),
                q: r1[0].clone(),
                p: r1[1].clone(),
                n: r2[1].clone(),
            }),
            _ => Err(Error::InvalidArgument("zero or degenerate ideal".into())),
        }
    }

    pub fn basis(&self) -> [Elt; 2] {
        [(self.p.clone(), self.q.clone()), (self.n.clone(), BigInt::zero())]
    }

    pub fn norm(&self) -> BigInt {
        &self.q * &self.n
    }

    pub fn mul(&self, other: &QuadIdeal) -> Result<QuadIdeal> {
        let mut vectors = Vec::new();
        for a in self.basis() {
            for b in other.basis() {
                let e = mul(&self.m, &a, &b);
                vectors.push(vec![e.1, e.0]);
            }
        }
        Self::from_lattice(&self.m, &vectors)
    }

    pub fn pow(&self, e: u32) -> Result<QuadIdeal> {
        let mut acc = self.clone();
        for _ in 1..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// `N(x a + y (b + u)) / a` for the primitive part `a Z + (b + u) Z`.
    pub fn form(&self) -> QuadForm {
        let a = &self.n / &self.q;
        let b = &self.p / &self.q;
        let bb = BigInt::from(2) * &b + 1;
        QuadForm::with_discriminant(&self.m, a, bb).expect("ideal lattice gives a form")
    }
}

/// The image of a point under `P -> [b]`, `b = (r, s + t^3 sqrt(-m))`.
#[derive(Debug, Clone, Serialize)]
pub struct QuadPointClass {
    /// Form of the ideal itself, before reduction.
    pub ideal_form: QuadForm,
    /// Reduced representative of the class.
    pub class: QuadForm,
    pub is_principal: bool,
    /// `b^3 = (s + t^3 sqrt(-m))`, as forced by the norm `r^3`.
    pub cube_principal: bool,
    /// Whether `b^2 = (s + t^3 sqrt(-m))` holds instead; recorded for the
    /// alternative reading of the exponent.
    pub square_reading_holds: bool,
}

pub fn point_to_quad_class(p: &CurvePoint) -> Result<QuadPointClass> {
    let m = p.curve().m();
    check_discriminant(m)?;
    let identity = QuadForm::identity(m)?;
    let Some(a) = p.affine() else {
        return Ok(QuadPointClass {
            ideal_form: identity.clone(),
            class: identity,
            is_principal: true,
            cube_principal: true,
            square_reading_holds: true,
        });
    };
    let (r, s, t) = (&a.r, &a.s, &a.t);
    let shared = r.gcd(&(BigInt::from(2) * s));
    if !shared.is_one() {
        let prime = smallest_prime_factor(&shared).expect("nontrivial gcd");
        return Err(Error::SharedFactor { prime });
    }
    // s + t^3 sqrt(-m) = (s - t^3) + 2t^3 u
    let t3 = t.pow(3);
    let gamma: Elt = (s - &t3, BigInt::from(2) * &t3);
    let b = QuadIdeal::generated_by(m, &[(r.clone(), BigInt::zero()), gamma.clone()])?;
    if b.norm() != r.abs() {
        return Err(Error::IdentityFailure(format!("N(b) = {} != {r}", b.norm())));
    }
    let principal_gamma = QuadIdeal::generated_by(m, &[gamma])?;
    let cube_principal = b.pow(3)? == principal_gamma;
    if !cube_principal {
        return Err(Error::IdentityFailure(format!("b^3 != (s + t^3 sqrt(-m)) at {p}")));
    }
    let square_reading_holds = b.pow(2)? == principal_gamma;
    let ideal_form = b.form();
    let class = ideal_form.reduce();
    let is_principal = class == identity;
    Ok(QuadPointClass { ideal_form, class, is_principal, cube_principal, square_reading_holds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mordell::{family_point, Curve};

    #[test]
    fn m11_point() {
        let e = Curve::new(11).unwrap();
        let c = point_to_quad_class(&e.point(3, 4, 1).unwrap()).unwrap();
        assert_eq!(c.ideal_form.a, BigInt::from(3));
        let bq = &c.ideal_form.b;
        assert!((bq * bq + BigInt::from(11)).is_multiple_of(&BigInt::from(12)));
        assert!(c.is_principal && c.cube_principal && !c.square_reading_holds);
        assert!(point_to_quad_class(&e.infinity()).unwrap().is_principal);
    }

    #[test]
    fn family_points_principal() {
        for b in 1..=30i64 {
            let b = BigInt::from(b);
            let Ok(p) = family_point(&b) else { continue };
            let c = point_to_quad_class(&p).unwrap();
            assert!(c.is_principal, "b = {b}: {}", c.class);
            assert!(c.cube_principal);
            if b.bits() <= 3 {
                let g = crate::quad::class_group(p.curve().m()).unwrap();
                assert!(g.index_of(&c.class).is_some());
            }
        }
    }

    #[test]
    fn ideal_arithmetic() {
        let m = BigInt::from(23);
        // (2, u) has norm 2 and class of order 3
        let p2 = QuadIdeal::generated_by(&m, &[(BigInt::from(2), BigInt::zero()), (BigInt::zero(), BigInt::one())]).unwrap();
        assert_eq!(p2.norm(), BigInt::from(2));
        let cube = p2.pow(3).unwrap();
        assert_eq!(cube.norm(), BigInt::from(8));
        assert_eq!(cube.form().reduce(), QuadForm::identity(&m).unwrap());
        assert_ne!(p2.form().reduce(), QuadForm::identity(&m).unwrap());
    }
}
