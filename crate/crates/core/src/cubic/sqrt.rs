//! Square testing by reconstruction from the embeddings.
//!
//! A square root `R` of an integral element `E` is integral, so `3mR` lies in
//! `Z[w]`. The real root and one complex root of `E` are computed in
//! fixed point, the coordinates of `R` are read off from the inverse of the
//! embedding matrix, rounded, and the candidate is squared exactly. Any
//! "not a square" answer carries an exact certificate.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::CubicElement;
use crate::intarith::{exact_sqrt, is_prime_u64, modp};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SquareRootConfig {
    pub start_bits: u32,
    /// Precision cap; beyond it the answer is [`SquareTest::Undecided`].
    pub max_bits: u32,
    /// Number of primes tried when looking for a quadratic-character witness.
    pub witness_primes: usize,
}

impl Default for SquareRootConfig {
    fn default() -> Self {
        SquareRootConfig { start_bits: 96, max_bits: 10_000, witness_primes: 400 }
    }
}

/// Why an element is not a square.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NonSquareWitness {
    /// A square has positive real embedding, hence positive norm.
    NegativeNorm,
    /// The norm of a square is a rational square.
    NormNotSquare,
    /// The residue at the degree-one prime `(p, w - root)` is a non-residue.
    Character { p: u64, root: u64, residue: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum SquareTest {
    Square(CubicElement),
    NotSquare(NonSquareWitness),
    Undecided { precision_bits: u32 },
}

impl SquareTest {
    pub fn root(&self) -> Option<&CubicElement> {
        match self {
            SquareTest::Square(r) => Some(r),
            _ => None,
        }
    }

    pub fn is_square(&self) -> bool {
        matches!(self, SquareTest::Square(_))
    }

    pub fn is_certified_non_square(&self) -> bool {
        matches!(self, SquareTest::NotSquare(_))
    }
}

pub fn is_square(e: &CubicElement) -> Result<SquareTest> {
    is_square_with(e, &SquareRootConfig::default())
}

pub fn is_square_with(e: &CubicElement, config: &SquareRootConfig) -> Result<SquareTest> {
    if e.is_zero() {
        return Err(Error::InvalidArgument("is_square needs a nonzero element".into()));
    }
    let norm = e.norm();
    if norm.is_negative() {
        return Ok(SquareTest::NotSquare(NonSquareWitness::NegativeNorm));
    }
    if !is_rational_square(&norm) {
        return Ok(SquareTest::NotSquare(NonSquareWitness::NormNotSquare));
    }
    let [x, y, z] = e.coords();
    if y.is_zero() && z.is_zero() {
        // N(x) = x^3 is a square, so x is
        let r = rational_sqrt(x).expect("rational with square cube");
        return Ok(SquareTest::Square(CubicElement::from_rational(e.field(), r)));
    }
    if let Some(w) = character_witness(e, config.witness_primes) {
        return Ok(SquareTest::NotSquare(w));
    }

    // e = f/q with f integral; sqrt(e) = sqrt(f q) / q.
    let q = e.denominator();
    let big_e = e.scale(&BigRational::from_integer(&q * &q));
    let coords = big_e.require_integral()?;
    let m = e.m().clone();
    let three_m = BigInt::from(3) * &m;
    let mut bits = config.start_bits.max(32);
    let mut last = bits;
    while bits <= config.max_bits {
        last = bits;
        for k in reconstruct(&coords, &m, bits) {
            let scale = BigRational::new(BigInt::one(), &three_m * &q);
            let cand = CubicElement::from_ints(e.field(), k[0].clone(), k[1].clone(), k[2].clone()).scale(&scale);
            if cand.square() == *e {
                return Ok(SquareTest::Square(cand));
            }
        }
        bits = bits.saturating_mul(2);
    }
    Ok(SquareTest::Undecided { precision_bits: last })
}

fn is_rational_square(r: &BigRational) -> bool {
    rational_sqrt(r).is_some()
}

fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    Some(BigRational::new(exact_sqrt(r.numer())?, exact_sqrt(r.denom())?))
}

/// Looks for a degree-one prime at which `e` reduces to a non-residue.
fn character_witness(e: &CubicElement, limit: usize) -> Option<NonSquareWitness> {
    let m = e.m();
    let mut tried = 0usize;
    let mut p = 5u64;
    while tried < limit {
        p += 2;
        if !is_prime_u64(p) {
            continue;
        }
        let pb = BigInt::from(p);
        let mp = m.mod_floor(&pb).to_u64().unwrap_or(0);
        if mp == 0 {
            continue;
        }
        tried += 1;
        for root in modp::cube_roots(mp, p) {
            if let Some(residue) = e.residue_at(p, root) {
                if residue != 0 && modp::legendre(residue, p) == -1 {
                    return Some(NonSquareWitness::Character { p, root, residue });
                }
            }
        }
    }
    None
}

fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    // b > 0
    let two = BigInt::from(2);
    (a * &two + b).div_floor(&(b * &two))
}

/// Candidate integer coordinates of `3m * sqrt(E)` for both branches of the
/// complex root.
fn reconstruct(e: &[BigInt; 3], m: &BigInt, prec: u32) -> Vec<[BigInt; 3]> {
    let one = BigInt::one() << prec;
    let theta = (m << (3 * prec as usize)).cbrt();
    let theta2 = (&theta * &theta) >> prec;
    let sqrt3 = (BigInt::from(3) << (2 * prec as usize)).sqrt();
    let [x, y, z] = e;

    let er = x * &one + y * &theta + z * &theta2;
    if !er.is_positive() {
        return Vec::new();
    }
    // complex embedding w -> theta * zeta, zeta = (-1 + i sqrt3)/2
    let re = x * &one - ((y * &theta + z * &theta2) >> 1usize);
    let im = (&sqrt3 * (y * &theta - z * &theta2)) >> (prec as usize + 1);

    let w1 = (er << prec as usize).sqrt();
    let modulus = (&re * &re + &im * &im).sqrt();
    let (a, b) = if !re.is_negative() {
        let a = (((&modulus + &re) >> 1usize) << prec as usize).sqrt();
        if a.is_zero() {
            return Vec::new();
        }
        let b = (&im << prec as usize) / (&a * 2);
        (a, b)
    } else {
        let mut b = (((&modulus - &re) >> 1usize) << prec as usize).sqrt();
        if b.is_zero() {
            return Vec::new();
        }
        if im.is_negative() {
            b = -b;
        }
        let a = (&im << prec as usize) / (&b * 2);
        (a, b)
    };

    let mut out = Vec::with_capacity(2);
    for sign in [1i32, -1] {
        let (a, b) = if sign == 1 { (a.clone(), b.clone()) } else { (-&a, -&b) };
        let b_sqrt3 = (&b * &sqrt3) >> prec as usize;
        let u3 = &w1 + &a * 2;
        let v3 = &w1 - &a + &b_sqrt3;
        let w3 = &w1 - &a - &b_sqrt3;
        let k0 = round_div(&(u3 * m), &one);
        let k1 = round_div(&(v3 * m), &theta);
        let k2 = round_div(&(w3 * m), &theta2);
        out.push([k0, k1, k2]);
    }
    out
}

/// Sign of `x + y theta + z theta^2` from interval-checked fixed point.
pub(super) fn real_embedding_sign(e: &CubicElement) -> i32 {
    if e.is_zero() {
        return 0;
    }
    let q = e.denominator();
    let coords = e
        .scale(&BigRational::from_integer(q))
        .require_integral()
        .expect("scaled by the common denominator");
    let [x, y, z] = &coords;
    let m = e.m();
    let mut prec: u32 = 64;
    loop {
        let one = BigInt::one() << prec;
        let theta = (m << (3 * prec as usize)).cbrt();
        let theta2 = (&theta * &theta) >> prec;
        let value = x * &one + y * &theta + z * &theta2;
        // theta is low by < 1 ulp, theta2 by < 2 theta / one + 1 ulps
        let slack = BigInt::from(2) * &theta / &one + 2;
        let bound = y.abs() + z.abs() * slack + 1;
        if value.abs() > bound {
            return if value.is_positive() { 1 } else { -1 };
        }
        prec *= 2;
    }
}
