//! Prime ideals, ideal factorization and class groups of `Z[w]` for
//! squarefree `m = 2, 3, 4 mod 9`, where `Z[w]` is the full ring of integers.
//!
//! A prime ideal above `p` is `(p, g(w))` for an irreducible factor `g` of
//! `x^3 - m` mod `p`. Valuations use the cofactor `h = (x^3 - m)/g`:
//! `h(w) P` lies in `pO` while `h(w)` does not, so `v_P(a) >= k` exactly when
//! `a (h(w)/p)^k` is integral.

mod group;
mod lattice;

pub use group::{
    class_group, is_principal, point_ideal_class, ClassGroup, PointIdealClass, Principality, Stabilization,
};
pub use lattice::IdealLattice;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::cubic::{CubicElement, CubicField};
use crate::intarith::{factor, modp};
use crate::{Error, Result};

/// How `p` meets a prime ideal above it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PrimeKind {
    /// `(p, w - root)` with `root^3 = m mod p`, one of one or three.
    SplitRoot { root: u64 },
    /// `(p, w^2 + root w + root^2)`, the partner of the split prime
    /// `(p, w - root)` when `p = 2 mod 3`.
    Degree2 { root: u64 },
    /// `(p)` itself.
    Inert,
    /// `(p) = (p, w - root)^3`, for `p | 3m`.
    Ramified { root: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PrimeIdeal {
    pub p: u64,
    #[serde(flatten)]
    pub kind: PrimeKind,
}

impl PrimeIdeal {
    pub fn residue_degree(&self) -> u32 {
        match self.kind {
            PrimeKind::SplitRoot { .. } | PrimeKind::Ramified { .. } => 1,
            PrimeKind::Degree2 { .. } => 2,
            PrimeKind::Inert => 3,
        }
    }

    pub fn ramification_index(&self) -> u32 {
        if matches!(self.kind, PrimeKind::Ramified { .. }) {
            3
        } else {
            1
        }
    }

    pub fn norm(&self) -> BigInt {
        BigInt::from(self.p).pow(self.residue_degree())
    }

    /// `w mod P` for degree-one primes.
    pub fn root(&self) -> Option<u64> {
        match self.kind {
            PrimeKind::SplitRoot { root } | PrimeKind::Ramified { root } => Some(root),
            _ => None,
        }
    }

    /// Coefficients (constant first) of `g` with `P = (p, g(w))`; zero when inert.
    pub(crate) fn generator_poly(&self) -> [BigInt; 3] {
        let p = self.p;
        match self.kind {
            PrimeKind::SplitRoot { root } | PrimeKind::Ramified { root } => {
                [BigInt::from(p - root) % p, BigInt::one(), BigInt::zero()]
            }
            PrimeKind::Degree2 { root } => {
                [BigInt::from(modp::mul_mod(root, root, p)), BigInt::from(root), BigInt::one()]
            }
            PrimeKind::Inert => [BigInt::zero(), BigInt::zero(), BigInt::zero()],
        }
    }

    /// Coefficients of the cofactor `h = (x^3 - m)/g` mod `p`.
    fn cofactor_poly(&self) -> [BigInt; 3] {
        let p = self.p;
        match self.kind {
            PrimeKind::SplitRoot { root } | PrimeKind::Ramified { root } => {
                [BigInt::from(modp::mul_mod(root, root, p)), BigInt::from(root), BigInt::one()]
            }
            PrimeKind::Degree2 { root } => [BigInt::from(p - root) % p, BigInt::one(), BigInt::zero()],
            PrimeKind::Inert => [BigInt::one(), BigInt::zero(), BigInt::zero()],
        }
    }
}

impl fmt::Display for PrimeIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let linear = |f: &mut fmt::Formatter<'_>, root: u64| {
            if root == 0 {
                write!(f, "({}, w)", self.p)
            } else {
                write!(f, "({}, w - {root})", self.p)
            }
        };
        match self.kind {
            PrimeKind::SplitRoot { root } | PrimeKind::Ramified { root } => linear(f, root),
            PrimeKind::Degree2 { root } => {
                let c2 = modp::mul_mod(root, root, self.p);
                let mid = match root {
                    0 => String::new(),
                    1 => " + w".into(),
                    r => format!(" + {r}w"),
                };
                write!(f, "({}, w^2{mid} + {c2})", self.p)
            }
            PrimeKind::Inert => write!(f, "({})", self.p),
        }
    }
}

/// Prime ideals of `Z[w]` above `p`, from the factorization of `x^3 - m`
/// mod `p`. Split roots come out ascending. At `p = 3` the answer describes
/// the maximal order only when `m != +-1 mod 9`.
pub fn split_prime(p: u64, m: &BigInt) -> Vec<PrimeIdeal> {
    let mp = m.mod_floor(&BigInt::from(p)).to_u64().expect("residue below p");
    if mp == 0 || p == 3 {
        // x^3 - m = (x - m)^3 mod 3
        let root = if p == 3 { mp } else { 0 };
        return vec![PrimeIdeal { p, kind: PrimeKind::Ramified { root } }];
    }
    let roots = modp::cube_roots(mp, p);
    match roots.as_slice() {
        [] => vec![PrimeIdeal { p, kind: PrimeKind::Inert }],
        &[root] => vec![
            PrimeIdeal { p, kind: PrimeKind::SplitRoot { root } },
            PrimeIdeal { p, kind: PrimeKind::Degree2 { root } },
        ],
        _ => roots.iter().map(|&root| PrimeIdeal { p, kind: PrimeKind::SplitRoot { root } }).collect(),
    }
}

pub(crate) fn mul_coords(m: &BigInt, a: &[BigInt; 3], b: &[BigInt; 3]) -> [BigInt; 3] {
    [
        &a[0] * &b[0] + m * (&a[1] * &b[2] + &a[2] * &b[1]),
        &a[0] * &b[1] + &a[1] * &b[0] + m * &a[2] * &b[2],
        &a[0] * &b[2] + &a[1] * &b[1] + &a[2] * &b[0],
    ]
}

/// `v_P(x)` for nonzero integral `x`, at most `cap`.
pub(crate) fn valuation(m: &BigInt, prime: &PrimeIdeal, x: &[BigInt; 3], cap: u32) -> u32 {
    let p = BigInt::from(prime.p);
    let h = prime.cofactor_poly();
    let mut cur = x.clone();
    let mut k = 0;
    while k < cap {
        let next = mul_coords(m, &cur, &h);
        if !next.iter().all(|c| c.is_multiple_of(&p)) {
            break;
        }
        cur = next.map(|c| c / &p);
        k += 1;
    }
    k
}

/// Exponents of the prime ideals above `p` in `(x)`, given `v_p(N(x)) = vp`.
pub(crate) fn factor_at(m: &BigInt, p: u64, x: &[BigInt; 3], vp: u32) -> Result<Vec<(PrimeIdeal, u32)>> {
    let mut out = Vec::new();
    let mut accounted = 0;
    for prime in split_prime(p, m) {
        let f = prime.residue_degree();
        let v = valuation(m, &prime, x, vp / f);
        if v > 0 {
            accounted += f * v;
            out.push((prime, v));
        }
    }
    if accounted != vp {
        return Err(Error::IdentityFailure(format!(
            "prime ideals above {p} account for p^{accounted} of the norm, expected p^{vp}"
        )));
    }
    Ok(out)
}

/// A fractional-free ideal written as a product of prime ideals.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IdealFactorization {
    /// Sorted by prime ideal, exponents positive.
    pub factors: Vec<(PrimeIdeal, u32)>,
}

impl IdealFactorization {
    pub fn new(mut factors: Vec<(PrimeIdeal, u32)>) -> Self {
        factors.retain(|(_, e)| *e > 0);
        factors.sort();
        let mut merged: Vec<(PrimeIdeal, u32)> = Vec::new();
        for (q, e) in factors {
            match merged.last_mut() {
                Some((last, acc)) if *last == q => *acc += e,
                _ => merged.push((q, e)),
            }
        }
        IdealFactorization { factors: merged }
    }

    pub fn prime(q: PrimeIdeal, e: u32) -> Self {
        Self::new(vec![(q, e)])
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn norm(&self) -> BigInt {
        self.factors.iter().map(|(q, e)| q.norm().pow(*e)).product()
    }

    pub fn exponent_of(&self, q: &PrimeIdeal) -> u32 {
        self.factors.iter().find(|(x, _)| x == q).map_or(0, |(_, e)| *e)
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(self.factors.iter().chain(&other.factors).cloned().collect())
    }

    pub fn pow(&self, k: u32) -> Self {
        Self::new(self.factors.iter().map(|(q, e)| (*q, e * k)).collect())
    }

    /// The ideal whose square this is.
    pub fn halve(&self) -> Result<Self> {
        let mut out = Vec::with_capacity(self.factors.len());
        for (q, e) in &self.factors {
            if e % 2 == 1 {
                return Err(Error::OddExponent { prime: q.p });
            }
            out.push((*q, e / 2));
        }
        Ok(IdealFactorization { factors: out })
    }
}

impl fmt::Display for IdealFactorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "(1)");
        }
        for (i, (q, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{q}")?;
            if *e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// Factorization of the principal ideal `(e)`.
pub fn factor_element(e: &CubicElement) -> Result<IdealFactorization> {
    e.field().require_monogenic()?;
    let x = e.require_integral()?;
    if e.is_zero() {
        return Err(Error::InvalidArgument("zero has no ideal factorization".into()));
    }
    let n = e.norm().to_integer().abs();
    let mut factors = Vec::new();
    for (p, vp) in &factor(&n)?.factors {
        let p64 = p.to_u64().ok_or_else(|| Error::PrimeTooLarge(p.clone()))?;
        factors.extend(factor_at(e.m(), p64, &x, *vp)?);
    }
    Ok(IdealFactorization::new(factors))
}

/// `(4/pi) (3!/3^3) sqrt(|d_K|)` with `d_K = -27 m^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinkowskiBound {
    pub value: f64,
    /// Integer upper estimate, padded against rounding.
    pub ceiling: u64,
}

pub fn minkowski_bound(m: &BigInt) -> Result<MinkowskiBound> {
    let field = CubicField::new(m.clone())?;
    field.require_monogenic()?;
    let mf = m.to_f64().ok_or_else(|| Error::InvalidArgument(format!("m = {m} too large")))?;
    let value = 4.0 / std::f64::consts::PI * (6.0 / 27.0) * 27f64.sqrt() * mf;
    let ceiling = (value * (1.0 + 1e-12)).ceil() as u64;
    Ok(MinkowskiBound { value, ceiling })
}

/// `[e / P]_2`: the Legendre symbol of `e mod P` for a degree-one prime of odd norm.
pub fn quadratic_symbol(e: &CubicElement, prime: &PrimeIdeal) -> Result<i32> {
    e.require_integral()?;
    let root = prime
        .root()
        .ok_or_else(|| Error::InvalidArgument(format!("{prime} has residue degree {}", prime.residue_degree())))?;
    if prime.p == 2 {
        return Err(Error::InvalidArgument("quadratic symbol needs an odd prime".into()));
    }
    if !split_prime(prime.p, e.m()).contains(prime) {
        return Err(Error::InvalidArgument(format!("{prime} is not a prime of Z[w] for m = {}", e.m())));
    }
    match e.residue_at(prime.p, root) {
        Some(0) | None => Err(Error::InvalidArgument(format!("{e} vanishes modulo {prime}"))),
        Some(r) => Ok(modp::legendre(r, prime.p)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubic::{family_unit, CubicField};
    use proptest::prelude::*;

    fn m11() -> crate::cubic::Field {
        CubicField::new(11).unwrap()
    }

    #[test]
    fn minkowski() {
        let b = minkowski_bound(&BigInt::from(11)).unwrap();
        assert!((b.value - 16.17).abs() < 0.01);
        assert_eq!(b.ceiling, 17);
        let b = minkowski_bound(&BigInt::from(219)).unwrap();
        assert!((b.value - 322.0).abs() < 1.0);
        assert!(minkowski_bound(&BigInt::from(2)).unwrap().ceiling >= 1);
        assert!(minkowski_bound(&BigInt::from(10)).is_err());
        assert!(minkowski_bound(&BigInt::from(12)).is_err());
    }

    #[test]
    fn splitting() {
        let m = BigInt::from(11);
        let roots: Vec<_> = split_prime(37, &m).iter().map(|q| q.root().unwrap()).collect();
        assert_eq!(roots, vec![21, 25, 28]);
        // w = -9, -12, -16 mod 37
        assert_eq!([37 - 9, 37 - 12, 37 - 16], [28, 25, 21]);
        let two = split_prime(2, &m);
        assert_eq!(two[0].kind, PrimeKind::SplitRoot { root: 1 });
        assert_eq!(two[0].norm(), BigInt::from(2));
        assert_eq!(two[1].norm(), BigInt::from(4));
        assert_eq!(two[1].to_string(), "(2, w^2 + w + 1)");
        let three = split_prime(3, &m);
        assert_eq!(three.len(), 1);
        assert_eq!(three[0].ramification_index(), 3);
        assert_eq!(split_prime(7, &m), vec![PrimeIdeal { p: 7, kind: PrimeKind::Inert }]);
        assert_eq!(split_prime(11, &m)[0].to_string(), "(11, w)");
    }

    #[test]
    fn known_element_factorizations() {
        let k = m11();
        let f = factor_element(&CubicElement::from_ints(&k, 345, -64, 0)).unwrap();
        assert_eq!(f.factors.len(), 2);
        assert_eq!(f.factors[0], (PrimeIdeal { p: 37, kind: PrimeKind::SplitRoot { root: 21 } }, 2));
        assert_eq!(f.factors[1].0.p, 167);
        assert_eq!(f.factors[1].1, 2);
        let f = factor_element(&CubicElement::from_ints(&k, 9, -4, 0)).unwrap();
        assert_eq!(f.factors, vec![(split_prime(5, k.m())[0], 2)]);
        let f = factor_element(&CubicElement::from_ints(&k, 3, -1, 0)).unwrap();
        assert_eq!(f.factors, vec![(split_prime(2, k.m())[0], 4)]);
        let f = factor_element(&CubicElement::from_ints(&k, 15, -1, 0)).unwrap();
        assert_eq!(f.to_string(), "(2, w - 1)^2 (29, w - 15)^2");
        assert!(factor_element(&family_unit(&k).unwrap()).unwrap().is_one());
        // inert and degree-2 primes
        assert_eq!(factor_element(&CubicElement::from_integer(&k, 14)).unwrap().to_string(), "(2, w - 1) (2, w^2 + w + 1) (7)");
        let non_mono = CubicField::new(10).unwrap();
        assert!(factor_element(&CubicElement::from_integer(&non_mono, 3)).is_err());
    }

    #[test]
    fn symbols() {
        let k = m11();
        let alpha = CubicElement::from_ints(&k, 9, -4, 0);
        let primes = split_prime(37, k.m());
        let got: Vec<i32> = primes.iter().rev().map(|q| quadratic_symbol(&alpha, q).unwrap()).collect();
        assert_eq!(got, vec![-1, -1, 1]);
        assert_eq!(modp::legendre(45, 37), -1);
        assert_eq!(modp::legendre(57, 37), -1);
        assert_eq!(modp::legendre(73, 37), 1);
        let five = split_prime(5, k.m())[0];
        assert!(quadratic_symbol(&alpha, &five).is_err());
        assert!(quadratic_symbol(&alpha, &split_prime(2, k.m())[0]).is_err());
    }

    fn split_product(p: u64, m: i64) -> BigInt {
        let m = BigInt::from(m);
        split_prime(p, &m).iter().map(|q| q.norm().pow(q.ramification_index())).product()
    }

    proptest! {
        #[test]
        fn split_norms_multiply_to_p_cubed(idx in 0usize..40, m in 2i64..400) {
            let primes: Vec<u64> = (2u64..200).filter(|&p| crate::intarith::is_prime_u64(p)).collect();
            let p = primes[idx];
            prop_assert_eq!(split_product(p, m), BigInt::from(p).pow(3));
            for q in split_prime(p, &BigInt::from(m)) {
                if let Some(c) = q.root() {
                    prop_assert_eq!(modp::pow_mod(c, 3, p), (m as u64) % p);
                }
            }
        }

        #[test]
        fn factorization_accounts_for_norm(x in -40i64..40, y in -40i64..40, z in -40i64..40) {
            prop_assume!(x != 0 || y != 0 || z != 0);
            let k = CubicField::new(219).unwrap();
            let e = CubicElement::from_ints(&k, x, y, z);
            let f = factor_element(&e).unwrap();
            prop_assert_eq!(f.norm(), e.norm().to_integer().abs());
        }

        #[test]
        fn symbol_is_multiplicative(a in prop::array::uniform3(-30i64..30), b in prop::array::uniform3(-30i64..30)) {
            let k = m11();
            let (x, y) = (CubicElement::from_ints(&k, a[0], a[1], a[2]), CubicElement::from_ints(&k, b[0], b[1], b[2]));
            for q in split_prime(37, k.m()) {
                let (sx, sy, sxy) = (quadratic_symbol(&x, &q), quadratic_symbol(&y, &q), quadratic_symbol(&(&x * &y), &q));
                if let (Ok(sx), Ok(sy)) = (sx, sy) {
                    prop_assert_eq!(sxy.unwrap(), sx * sy);
                }
            }
        }
    }
}
