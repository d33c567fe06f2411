//! Positive definite binary quadratic forms `ax^2 + bxy + cy^2` of
//! discriminant `-m`.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::check_discriminant;
use crate::intarith::{factor, is_prime_u64, modp, FiniteAbelianGroup, IncrementalHnf};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuadForm {
    #[serde(with = "crate::intarith::serde_bigint")]
    pub a: BigInt,
    #[serde(with = "crate::intarith::serde_bigint")]
    pub b: BigInt,
    #[serde(with = "crate::intarith::serde_bigint")]
    pub c: BigInt,
}

impl QuadForm {
    /// Positive definite forms only.
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>) -> Result<Self> {
        let f = QuadForm { a: a.into(), b: b.into(), c: c.into() };
        if !f.a.is_positive() || !f.discriminant().is_negative() {
            return Err(Error::InvalidArgument(format!("{f} is not positive definite")));
        }
        Ok(f)
    }

    /// The form with `a`, `b` given and `c` fixed by the discriminant `-m`.
    pub fn with_discriminant(m: &BigInt, a: BigInt, b: BigInt) -> Result<Self> {
        let num = &b * &b + m;
        let four_a = BigInt::from(4) * &a;
        if !a.is_positive() || !num.is_multiple_of(&four_a) {
            return Err(Error::InvalidArgument(format!("no form ({a}, {b}, *) of discriminant -{m}")));
        }
        Ok(QuadForm { c: num / four_a, a, b })
    }

    /// `(1, 1, (1 + m)/4)`.
    pub fn identity(m: &BigInt) -> Result<Self> {
        check_discriminant(m)?;
        Ok(QuadForm { a: BigInt::one(), b: BigInt::one(), c: (m + 1) / 4 })
    }

    pub fn discriminant(&self) -> BigInt {
        &self.b * &self.b - BigInt::from(4) * &self.a * &self.c
    }

    pub fn is_primitive(&self) -> bool {
        self.a.gcd(&self.b).gcd(&self.c).is_one()
    }

    /// `|b| <= a <= c`, with `b >= 0` when either inequality is an equality.
    pub fn is_reduced(&self) -> bool {
        let ab = self.b.abs();
        ab <= self.a && self.a <= self.c && (!(ab == self.a || self.a == self.c) || !self.b.is_negative())
    }

    pub fn inverse(&self) -> Self {
        QuadForm { a: self.a.clone(), b: -&self.b, c: self.c.clone() }.reduce()
    }

    pub fn reduce(&self) -> Self {
        let mut f = self.clone();
        loop {
            // b into (-a, a]
            let two_a = BigInt::from(2) * &f.a;
            let k = (&f.a - &f.b).div_floor(&two_a);
            if !k.is_zero() {
                let b_new = &f.b + &k * &two_a;
                f.c = (&b_new * &b_new - f.discriminant()) / (BigInt::from(4) * &f.a);
                f.b = b_new;
            }
            if f.a > f.c {
                f = QuadForm { a: f.c.clone(), b: -&f.b, c: f.a.clone() };
                continue;
            }
            if f.a == f.c && f.b.is_negative() {
                f.b = -f.b;
            }
            return f;
        }
    }

    /// Gaussian composition, reduced.
    pub fn compose(&self, other: &QuadForm) -> Result<QuadForm> {
        let d = self.discriminant();
        if d != other.discriminant() {
            return Err(Error::InvalidArgument(format!("cannot compose {self} and {other}")));
        }
        let (a1, b1) = (&self.a, &self.b);
        let (a2, b2, c2) = (&other.a, &other.b, &other.c);
        let s = (b1 + b2) / 2;
        let e1 = a1.extended_gcd(a2);
        let e2 = e1.gcd.extended_gcd(&s);
        let g = e2.gcd.clone();
        let (v, w) = (&e2.x * &e1.y, e2.y.clone());
        let a3 = a1 * a2 / (&g * &g);
        let b3 = b2 + BigInt::from(2) * (a2 / &g) * (&v * (&s - b2) - &w * c2);
        let b3 = b3.mod_floor(&(BigInt::from(2) * &a3));
        let c3 = (&b3 * &b3 - &d) / (BigInt::from(4) * &a3);
        Ok(QuadForm { a: a3, b: b3, c: c3 }.reduce())
    }

    pub fn pow(&self, e: u64) -> Result<QuadForm> {
        let m = -self.discriminant();
        let mut acc = QuadForm::identity(&m)?;
        let mut base = self.reduce();
        let mut k = e;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.compose(&base)?;
            }
            base = base.compose(&base)?;
            k >>= 1;
        }
        Ok(acc)
    }
}

impl fmt::Display for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

/// Primitive reduced forms of discriminant `-m` and the group they form.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FormClassGroup {
    #[serde(with = "crate::intarith::serde_bigint")]
    pub discriminant: BigInt,
    pub forms: Vec<QuadForm>,
    pub structure: FiniteAbelianGroup,
    pub h: usize,
    /// `-m` is a fundamental discriminant (`m` squarefree).
    pub fundamental: bool,
}

impl FormClassGroup {
    pub fn index_of(&self, f: &QuadForm) -> Option<usize> {
        let r = f.reduce();
        self.forms.iter().position(|g| *g == r)
    }

    /// Group coordinates of the class of `f`.
    pub fn class_of(&self, f: &QuadForm) -> Option<Vec<BigInt>> {
        self.index_of(f).map(|i| self.structure.classes[i].clone())
    }
}

/// All primitive reduced forms, sorted by `(a, b)`.
pub fn reduced_forms(m: &BigInt) -> Result<Vec<QuadForm>> {
    check_discriminant(m)?;
    let a_max: BigInt = (m / BigInt::from(3)).sqrt() + 1u32;
    let a_max = a_max.to_u64().ok_or_else(|| Error::InvalidArgument(format!("m = {m} too large for enumeration")))?;
    let mut out = Vec::new();
    for a in 1..=a_max {
        let ab = BigInt::from(a);
        let four_a = BigInt::from(4 * a);
        let mut b = -(a as i64) + 1;
        if b % 2 == 0 {
            b += 1;
        }
        while b <= a as i64 {
            let bb = BigInt::from(b);
            let num = &bb * &bb + m;
            if num.is_multiple_of(&four_a) {
                let f = QuadForm { a: ab.clone(), b: bb, c: num / &four_a };
                if f.is_reduced() && f.is_primitive() {
                    out.push(f);
                }
            }
            b += 2;
        }
    }
    out.sort();
    Ok(out)
}

/// Reduced forms `(p, b, *)` for primes `p <= sqrt(m/3)`; they generate.
fn prime_forms(m: &BigInt) -> Vec<QuadForm> {
    let bound = (m / BigInt::from(3)).sqrt().to_u64().unwrap_or(0);
    let mut out = Vec::new();
    for p in 2..=bound {
        if !is_prime_u64(p) {
            continue;
        }
        let pb = BigInt::from(p);
        let b = if p == 2 {
            if m.mod_floor(&BigInt::from(8)) != BigInt::from(7) {
                continue;
            }
            BigInt::one()
        } else {
            let r = (-m).mod_floor(&pb).to_u64().expect("residue fits");
            let Some(root) = modp::sqrt_mod(r, p) else {
                continue;
            };
            let root = if root % 2 == 1 { root } else { p - root };
            BigInt::from(root)
        };
        if let Ok(f) = QuadForm::with_discriminant(m, pb, b) {
            if f.is_primitive() {
                out.push(f.reduce());
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// The form class group of discriminant `-m`, presented by the reduced forms
/// as generators with relations `[f] + [g] = [f g]` for prime forms `g`.
pub fn class_group(m: &BigInt) -> Result<FormClassGroup> {
    let forms = reduced_forms(m)?;
    let h = forms.len();
    let index: HashMap<&QuadForm, usize> = forms.iter().enumerate().map(|(i, f)| (f, i)).collect();
    let identity = QuadForm::identity(m)?;
    let mut hnf = IncrementalHnf::new(h);
    let mut unit = vec![BigInt::zero(); h];
    unit[index[&identity]] = BigInt::one();
    hnf.insert(&unit);
    for g in prime_forms(m) {
        let gi = index[&g];
        for (i, f) in forms.iter().enumerate() {
            let fg = f.compose(&g)?;
            let k = *index.get(&fg).ok_or_else(|| Error::IdentityFailure(format!("{f} * {g} = {fg} not reduced")))?;
            let mut rel = vec![BigInt::zero(); h];
            rel[i] += 1;
            rel[gi] += 1;
            rel[k] -= 1;
            hnf.insert(&rel);
        }
    }
    let structure = hnf
        .quotient()
        .ok_or_else(|| Error::IdentityFailure(format!("relations for -{m} are not of full rank")))?;
    if structure.order() != BigInt::from(h) {
        return Err(Error::IdentityFailure(format!("group order {} != form count {h}", structure.order())));
    }
    let fundamental = factor(m)?.is_squarefree();
    Ok(FormClassGroup { discriminant: -m, forms, structure, h, fundamental })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubic::family_m;

    fn f(a: i64, b: i64, c: i64) -> QuadForm {
        QuadForm::new(a, b, c).unwrap()
    }

    #[test]
    fn small_groups() {
        let g = class_group(&BigInt::from(11)).unwrap();
        assert_eq!(g.h, 1);
        assert_eq!(g.forms, vec![f(1, 1, 3)]);
        assert_eq!(class_group(&BigInt::from(67)).unwrap().h, 1);
        let g = class_group(&BigInt::from(23)).unwrap();
        assert_eq!(g.h, 3);
        assert_eq!(g.structure.invariants, vec![BigInt::from(3)]);
        // (5, 1, 11) has order 4 and (3, 3, 19) order 2
        let g = class_group(&BigInt::from(219)).unwrap();
        assert_eq!(g.h, 4);
        assert_eq!(g.structure.invariants, vec![BigInt::from(4)]);
        assert!(class_group(&BigInt::from(5)).is_err());
    }

    #[test]
    fn compose_examples() {
        let id = f(1, 1, 3);
        assert_eq!(id.compose(&id).unwrap(), id);
        // h(-23) = 3: (2, 1, 3)^3 = 1
        let g = f(2, 1, 3);
        assert_eq!(g.pow(3).unwrap(), QuadForm::identity(&BigInt::from(23)).unwrap());
        assert_eq!(g.compose(&g).unwrap(), f(2, -1, 3));
        assert_eq!(g.compose(&g.inverse()).unwrap(), QuadForm::identity(&BigInt::from(23)).unwrap());
    }

    #[test]
    fn reduction() {
        assert_eq!(f(3, 5, 3).reduce(), f(1, 1, 3));
        assert_eq!(f(6, 5, 2).reduce().discriminant(), BigInt::from(-23));
        assert!(f(6, 5, 2).reduce().is_reduced());
        assert_eq!(f(2, -1, 2).reduce(), f(2, 1, 2));
    }

    #[test]
    fn group_laws_on_family() {
        for b in 1..=20i64 {
            let m = family_m(&BigInt::from(b));
            let g = class_group(&m).unwrap();
            let id = QuadForm::identity(&m).unwrap();
            let fs = &g.forms;
            for x in fs {
                assert_eq!(x.compose(&id).unwrap(), *x);
                assert_eq!(x.compose(&x.inverse()).unwrap(), id);
                assert_eq!(x.reduce(), *x);
            }
            // commutativity and associativity on a bounded sample
            for x in fs.iter().take(12) {
                for y in fs.iter().take(12) {
                    let xy = x.compose(y).unwrap();
                    assert_eq!(xy, y.compose(x).unwrap());
                    for z in fs.iter().take(6) {
                        assert_eq!(xy.compose(z).unwrap(), x.compose(&y.compose(z).unwrap()).unwrap());
                    }
                }
            }
            // the class map is a homomorphism
            for x in fs.iter().take(12) {
                for y in fs.iter().take(12) {
                    let lhs = g.class_of(&x.compose(y).unwrap()).unwrap();
                    let ix = g.index_of(x).unwrap();
                    let iy = g.index_of(y).unwrap();
                    let mut coeffs = vec![BigInt::zero(); g.h];
                    coeffs[ix] += 1;
                    coeffs[iy] += 1;
                    assert_eq!(lhs, g.structure.combine(&coeffs));
                }
            }
        }
    }
}
