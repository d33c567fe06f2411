use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::{
    factor_at, factor_element, minkowski_bound, split_prime, IdealFactorization, IdealLattice, MinkowskiBound,
    PrimeIdeal,
};
use crate::cubic::{CubicElement, CubicField, Field};
use crate::intarith::{is_prime_u64, FiniteAbelianGroup, IncrementalHnf};
use crate::mordell::{weil_representative, CurvePoint};
use crate::{Error, Result};

/// Whether the group survived the last quarter of the relation stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stabilization {
    Stabilized,
    Unstabilized,
}

/// `Cl(K)` from factor-base relations. The structure is a heuristic
/// answer: it is the quotient by the relations found, reported as
/// stabilized when the relation lattice stopped growing before the final
/// 25% of the stream.
#[derive(Debug, Clone, Serialize)]
pub struct ClassGroup {
    #[serde(with = "crate::intarith::serde_bigint")]
    m: BigInt,
    #[serde(skip)]
    field: Field,
    bound: MinkowskiBound,
    relation_bound: u32,
    factor_base: Vec<PrimeIdeal>,
    #[serde(skip)]
    index: BTreeMap<PrimeIdeal, usize>,
    structure: FiniteAbelianGroup,
    #[serde(with = "crate::intarith::serde_bigint")]
    h: BigInt,
    status: Stabilization,
    relations: usize,
    last_growth: usize,
    #[serde(serialize_with = "display_opt")]
    unit: Option<CubicElement>,
}

fn display_opt<S: serde::Serializer>(e: &Option<CubicElement>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match e {
        Some(e) => s.collect_str(e),
        None => s.serialize_none(),
    }
}

/// Exponent vector of a smooth element over the factor base.
type Relation = Vec<BigInt>;

enum Harvest {
    Relation(Relation),
    Unit([i64; 3]),
}

struct FactorBase<'a> {
    m: &'a BigInt,
    m128: i128,
    primes: &'a [u64],
    index: &'a BTreeMap<PrimeIdeal, usize>,
}

impl FactorBase<'_> {
    fn norm(&self, [x, y, z]: [i64; 3]) -> i128 {
        let (x, y, z, m) = (x as i128, y as i128, z as i128, self.m128);
        x * x * x + m * y * y * y + m * m * z * z * z - 3 * m * x * y * z
    }

    fn harvest(&self, c: [i64; 3]) -> Option<Harvest> {
        let n = self.norm(c).unsigned_abs();
        if n == 1 {
            return Some(Harvest::Unit(c));
        }
        let mut rest = n;
        let mut valuations = Vec::new();
        for &p in self.primes {
            let p128 = p as u128;
            let mut v = 0;
            while rest.is_multiple_of(p128) {
                rest /= p128;
                v += 1;
            }
            if v > 0 {
                valuations.push((p, v));
            }
        }
        if rest != 1 {
            return None;
        }
        let x = c.map(BigInt::from);
        let mut rel = vec![BigInt::zero(); self.index.len()];
        for (p, v) in valuations {
            for (q, e) in factor_at(self.m, p, &x, v).expect("Z[w] is maximal") {
                rel[self.index[&q]] = BigInt::from(e);
            }
        }
        Some(Harvest::Relation(rel))
    }
}

/// Coordinate boxes `max(|x|, |y|, |z|) = r` in lexicographic order,
/// primitive and with a positive leading coordinate.
fn shell(r: i64, x: i64) -> impl Iterator<Item = [i64; 3]> {
    (-r..=r).flat_map(move |y| (-r..=r).map(move |z| [x, y, z])).filter(move |c| {
        let lead = c.iter().find(|v| **v != 0).copied().unwrap_or(0);
        c.iter().map(|v| v.abs()).max() == Some(r)
            && lead > 0
            && c.iter().fold(0i64, |g, v| g.gcd(v)) == 1
    })
}

pub fn class_group(m: &BigInt, relation_bound: u32) -> Result<ClassGroup> {
    let field = CubicField::new(m.clone())?;
    field.require_monogenic()?;
    let bound = minkowski_bound(m)?;
    let m128 = m
        .to_i128()
        .filter(|v| *v < 1 << 40)
        .ok_or_else(|| Error::InvalidArgument(format!("m = {m} is too large for relation search")))?;
    let primes: Vec<u64> = (2..=bound.ceiling).filter(|&p| is_prime_u64(p)).collect();
    let factor_base: Vec<PrimeIdeal> = primes.iter().flat_map(|&p| split_prime(p, m)).collect();
    let index: BTreeMap<PrimeIdeal, usize> = factor_base.iter().enumerate().map(|(i, q)| (*q, i)).collect();
    let n = factor_base.len();

    let mut hnf = IncrementalHnf::new(n);
    let (mut relations, mut last_growth) = (0usize, 0usize);
    let mut add = |rel: &Relation, hnf: &mut IncrementalHnf| {
        relations += 1;
        if hnf.insert(rel) {
            last_growth = relations;
        }
    };
    for &p in &primes {
        let mut rel = vec![BigInt::zero(); n];
        for q in split_prime(p, m) {
            rel[index[&q]] = BigInt::from(q.ramification_index());
        }
        add(&rel, &mut hnf);
    }

    let fb = FactorBase { m, m128, primes: &primes, index: &index };
    let mut unit: Option<(f64, CubicElement)> = None;
    for r in 1..=relation_bound as i64 {
        let found: Vec<Harvest> =
            (-r..=r).into_par_iter().flat_map_iter(|x| shell(r, x).filter_map(|c| fb.harvest(c))).collect();
        for h in found {
            match h {
                Harvest::Relation(rel) => add(&rel, &mut hnf),
                Harvest::Unit(c) => {
                    let mut u = CubicElement::from_ints(&field, c[0], c[1], c[2]);
                    if u.norm().is_negative() {
                        u = -&u;
                    }
                    let size = u.t2_f64();
                    if unit.as_ref().is_none_or(|(s, _)| size < *s) {
                        unit = Some((size, u));
                    }
                }
            }
        }
    }

    let structure = hnf.quotient().ok_or(Error::RankDeficient { rank: hnf.rank(), needed: n })?;
    let status = if last_growth * 4 <= relations * 3 { Stabilization::Stabilized } else { Stabilization::Unstabilized };
    Ok(ClassGroup {
        m: m.clone(),
        field,
        bound,
        relation_bound,
        factor_base,
        index,
        h: structure.order(),
        structure,
        status,
        relations,
        last_growth,
        unit: unit.map(|(_, u)| u),
    })
}

/// Depth of the descent from a large prime to smaller ones.
const DESCENT_DEPTH: u32 = 8;
const SEARCH_RADIUS: i64 = 4;

impl ClassGroup {
    pub fn m(&self) -> &BigInt {
        &self.m
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn minkowski(&self) -> MinkowskiBound {
        self.bound
    }

    pub fn factor_base(&self) -> &[PrimeIdeal] {
        &self.factor_base
    }

    pub fn structure(&self) -> &FiniteAbelianGroup {
        &self.structure
    }

    /// Elementary divisors `d_1 | d_2 | ...`, all above 1.
    pub fn invariants(&self) -> &[BigInt] {
        &self.structure.invariants
    }

    pub fn h(&self) -> &BigInt {
        &self.h
    }

    pub fn status(&self) -> Stabilization {
        self.status
    }

    pub fn relation_count(&self) -> usize {
        self.relations
    }

    /// A unit of norm 1 met during the search, smallest first.
    pub fn unit(&self) -> Option<&CubicElement> {
        self.unit.as_ref()
    }

    fn add(&self, a: &[BigInt], b: &[BigInt], k: &BigInt) -> Vec<BigInt> {
        a.iter().zip(b).zip(&self.structure.invariants).map(|((x, y), d)| (x + k * y).mod_floor(d)).collect()
    }

    fn zero(&self) -> Vec<BigInt> {
        vec![BigInt::zero(); self.structure.invariants.len()]
    }

    pub fn is_trivial(&self, class: &[BigInt]) -> bool {
        class.iter().all(Zero::is_zero)
    }

    /// Class of a prime ideal. Primes outside the factor base are reduced
    /// through short elements of the ideal until every cofactor is known.
    pub fn class_of_prime(&self, q: &PrimeIdeal) -> Result<Vec<BigInt>> {
        self.descend(q, DESCENT_DEPTH)
    }

    fn descend(&self, q: &PrimeIdeal, depth: u32) -> Result<Vec<BigInt>> {
        if let Some(&i) = self.index.get(q) {
            return Ok(self.structure.classes[i].clone());
        }
        if depth == 0 {
            return Err(Error::ClassSearchExhausted { prime: q.p });
        }
        let norm = q.norm();
        'candidates: for gamma in IdealLattice::prime(&self.field, q).small_elements(SEARCH_RADIUS) {
            let f = factor_element(&gamma)?;
            if f.exponent_of(q) != 1 {
                continue;
            }
            let mut class = self.zero();
            for (other, e) in &f.factors {
                if other == q {
                    continue;
                }
                if !self.index.contains_key(other) && other.norm() >= norm {
                    continue 'candidates;
                }
                match self.descend(other, depth - 1) {
                    Ok(c) => class = self.add(&class, &c, &-BigInt::from(*e)),
                    Err(Error::ClassSearchExhausted { .. }) => continue 'candidates,
                    Err(e) => return Err(e),
                }
            }
            return Ok(class);
        }
        Err(Error::ClassSearchExhausted { prime: q.p })
    }

    pub fn class_of_ideal(&self, ideal: &IdealFactorization) -> Result<Vec<BigInt>> {
        let mut class = self.zero();
        for (q, e) in &ideal.factors {
            class = self.add(&class, &self.class_of_prime(q)?, &BigInt::from(*e));
        }
        Ok(class)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Principality {
    Principal(CubicElement),
    /// The class is nonzero in a stabilized group.
    NotPrincipal,
    /// No generator among the short elements searched, and no proof of
    /// non-principality.
    NotFoundUnderBound,
}

/// Looks for a generator among short elements of the ideal lattice, then
/// adjusts by `+-u^k`, `|k| <= 2`, toward the smallest representative.
pub fn is_principal(ideal: &IdealFactorization, cg: &ClassGroup) -> Result<Principality> {
    let field = cg.field();
    let lattice = IdealLattice::from_factorization(field, ideal);
    let norm = ideal.norm();
    let hit = lattice.small_elements(SEARCH_RADIUS).into_iter().find(|g| g.norm().to_integer().abs() == norm);
    let Some(mut gen) = hit else {
        let class = cg.class_of_ideal(ideal)?;
        return Ok(if !cg.is_trivial(&class) && cg.status() == Stabilization::Stabilized {
            Principality::NotPrincipal
        } else {
            Principality::NotFoundUnderBound
        });
    };
    if gen.norm().is_negative() {
        gen = -&gen;
    }
    if let Some(u) = cg.unit() {
        let inv = u.inverse()?;
        let mut best = gen.clone();
        for step in [u, &inv] {
            let mut g = gen.clone();
            for _ in 0..2 {
                g = &g * step;
                if g.t2_f64() < best.t2_f64() {
                    best = g.clone();
                }
            }
        }
        gen = best;
    }
    if factor_element(&gen)? != *ideal {
        return Err(Error::IdentityFailure(format!("{gen} does not generate {ideal}")));
    }
    Ok(Principality::Principal(gen))
}

/// `(alpha(P)) = a_P^2` and the class of `a_P`.
#[derive(Debug, Clone, Serialize)]
pub struct PointIdealClass {
    #[serde(serialize_with = "display")]
    pub point: CurvePoint,
    #[serde(serialize_with = "display")]
    pub alpha: CubicElement,
    pub alpha_ideal: IdealFactorization,
    pub ideal: IdealFactorization,
    #[serde(with = "crate::intarith::serde_bigint_vec")]
    pub class: Vec<BigInt>,
    pub trivial: bool,
}

fn display<T: std::fmt::Display, S: serde::Serializer>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

pub fn point_ideal_class(p: &CurvePoint, cg: &ClassGroup) -> Result<PointIdealClass> {
    let a = p.require_affine()?;
    if p.curve().m() != cg.m() {
        return Err(Error::CurveMismatch { left: p.curve().m().clone(), right: cg.m().clone() });
    }
    // with m = 2, 3, 4 mod 9 and gcd(s, t) = 1, 3 | s would force r^3 = m mod 9
    if a.s.is_multiple_of(&BigInt::from(3)) {
        return Err(Error::IdentityFailure(format!("3 divides s at {p}, contradicting m mod 9")));
    }
    let alpha = weil_representative(p)?;
    let alpha_ideal = factor_element(&alpha)?;
    let ideal = alpha_ideal.halve()?;
    let class = cg.class_of_ideal(&ideal)?;
    debug_assert!(BigInt::one() <= ideal.norm());
    let trivial = cg.is_trivial(&class);
    Ok(PointIdealClass { point: p.clone(), alpha, alpha_ideal, ideal, class, trivial })
}
