//! Quadratic unramified extensions `H = K(sqrt(alpha))` of pure cubic fields.
//!
//! `H/K` is unramified when `alpha` is positive at the real place, is
//! `1 mod 4` (so 2 does not ramify), and generates an ideal square (so no odd
//! prime ramifies). It is a genuine quadratic extension when `alpha` is not
//! a square. Certificates record each check separately together with the
//! minimal polynomial of `sqrt(alpha)`, whose discriminant must be `d_K^2`
//! times a nonzero square.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::classgrp::{factor_element, IdealFactorization};
use crate::cubic::{family_unit, is_square, minpoly_sqrt, CubicElement, CubicField, NonSquareWitness, SquareTest};
use crate::intarith::exact_sqrt;
use crate::mordell::{combine_for_even_denominator, search_points, weil_representative, Curve, CurvePoint, SearchBounds};
use crate::poly::IntPoly;
use crate::{Error, Result};

pub const CERTIFICATE_VERSION: u32 = 1;

/// Outcome of the non-squareness test on `alpha`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum NonSquareStatus {
    Certified { witness: NonSquareWitness },
    Square { root: String },
    Undecided { precision_bits: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checks {
    pub norm_positive: bool,
    /// Sign at the unique real embedding; together with the norm this
    /// makes `alpha` totally positive.
    pub real_positive: bool,
    pub one_mod_four: bool,
    /// `a` with `(alpha) = a^2`, when it exists.
    pub ideal_square: Option<IdealFactorization>,
}

impl Checks {
    pub fn totally_positive(&self) -> bool {
        self.norm_positive && self.real_positive
    }
}

/// A failed or unfinished obligation, named individually.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Obligation {
    TotallyPositive,
    OneModFour,
    IdealSquare,
    NonSquare,
    DiscriminantConsistency,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnramifiedCertificate {
    pub version: u32,
    #[serde(with = "crate::intarith::serde_bigint")]
    pub m: BigInt,
    /// Coordinates of `alpha` on `1, w, w^2`.
    #[serde(with = "crate::intarith::serde_bigint_vec")]
    pub alpha: Vec<BigInt>,
    pub alpha_display: String,
    #[serde(with = "crate::intarith::serde_bigint")]
    pub norm: BigInt,
    pub checks: Checks,
    pub nonsquare: NonSquareStatus,
    pub minpoly: IntPoly,
    pub minpoly_display: String,
    #[serde(with = "crate::intarith::serde_bigint")]
    pub poly_discriminant: BigInt,
    #[serde(with = "crate::intarith::serde_bigint")]
    pub field_discriminant: BigInt,
    /// `sqrt(disc(f) / d_K^2)` when that is a nonzero integer square.
    #[serde(with = "opt_bigint")]
    pub index: Option<BigInt>,
    pub disc_consistency: bool,
    pub failed: Vec<Obligation>,
    /// Only an undecided square test leaves a certificate incomplete.
    pub complete: bool,
    pub valid: bool,
}

mod opt_bigint {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(x) => s.collect_str(x),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigInt>, D::Error> {
        Option::<String>::deserialize(d)?.map(|x| x.parse().map_err(serde::de::Error::custom)).transpose()
    }
}

impl UnramifiedCertificate {
    pub fn alpha_element(&self) -> Result<CubicElement> {
        let field = CubicField::new(self.m.clone())?;
        let [x, y, z] = <[BigInt; 3]>::try_from(self.alpha.clone())
            .map_err(|_| Error::Malformed("alpha needs three coordinates".into()))?;
        Ok(CubicElement::from_ints(&field, x, y, z))
    }

    /// Recomputes every check from `m` and `alpha` alone; fails unless the
    /// result matches this certificate field for field.
    pub fn revalidate(&self) -> Result<UnramifiedCertificate> {
        if self.version != CERTIFICATE_VERSION {
            return Err(Error::Malformed(format!("unsupported certificate version {}", self.version)));
        }
        let fresh = certify_unramified(&self.alpha_element()?)?;
        if fresh != *self {
            return Err(Error::Malformed("certificate does not match a fresh computation".into()));
        }
        Ok(fresh)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Malformed(e.to_string()))
    }

    /// Parses and re-validates a certificate document.
    pub fn from_json(text: &str) -> Result<UnramifiedCertificate> {
        let cert: UnramifiedCertificate = serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        cert.revalidate()
    }
}

pub fn certify_unramified(alpha: &CubicElement) -> Result<UnramifiedCertificate> {
    let field = alpha.field().clone();
    field.require_monogenic()?;
    let coords = alpha.require_integral()?;
    if alpha.is_zero() {
        return Err(Error::InvalidArgument("alpha must be nonzero".into()));
    }
    let norm = alpha.norm().to_integer();
    let ideal_square = factor_element(alpha)?.halve().ok();
    let checks = Checks {
        norm_positive: norm.is_positive(),
        real_positive: alpha.real_embedding_sign() > 0,
        one_mod_four: alpha.congruent_one_mod4()?,
        ideal_square,
    };
    let nonsquare = match is_square(alpha)? {
        SquareTest::NotSquare(witness) => NonSquareStatus::Certified { witness },
        SquareTest::Square(root) => NonSquareStatus::Square { root: root.to_string() },
        SquareTest::Undecided { precision_bits } => NonSquareStatus::Undecided { precision_bits: precision_bits as u64 },
    };
    let minpoly = minpoly_sqrt(alpha)?.poly;
    let poly_discriminant = minpoly.discriminant();
    let field_discriminant = field.discriminant().clone();
    let dk2 = &field_discriminant * &field_discriminant;
    let index = (!poly_discriminant.is_zero() && poly_discriminant.is_multiple_of(&dk2))
        .then(|| exact_sqrt(&(&poly_discriminant / &dk2)))
        .flatten();
    let disc_consistency = index.is_some();

    let mut failed = Vec::new();
    if !checks.totally_positive() {
        failed.push(Obligation::TotallyPositive);
    }
    if !checks.one_mod_four {
        failed.push(Obligation::OneModFour);
    }
    if checks.ideal_square.is_none() {
        failed.push(Obligation::IdealSquare);
    }
    match nonsquare {
        NonSquareStatus::Certified { .. } => {}
        _ => failed.push(Obligation::NonSquare),
    }
    if !disc_consistency {
        failed.push(Obligation::DiscriminantConsistency);
    }
    let complete = !matches!(nonsquare, NonSquareStatus::Undecided { .. });
    Ok(UnramifiedCertificate {
        version: CERTIFICATE_VERSION,
        m: field.m().clone(),
        alpha: coords.to_vec(),
        alpha_display: alpha.to_string(),
        norm,
        checks,
        nonsquare,
        minpoly_display: minpoly.to_string(),
        minpoly,
        poly_discriminant,
        field_discriminant,
        index,
        disc_consistency,
        valid: failed.is_empty(),
        failed,
        complete,
    })
}

/// Where the point behind a curve certificate came from.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
#[allow(clippy::large_enum_variant)]
pub enum PointSource {
    EvenDenominator {
        #[serde(serialize_with = "display")]
        point: CurvePoint,
    },
    Sum {
        #[serde(serialize_with = "display")]
        p: CurvePoint,
        #[serde(serialize_with = "display")]
        q: CurvePoint,
        #[serde(serialize_with = "display")]
        sum: CurvePoint,
    },
}

fn display<T: std::fmt::Display, S: serde::Serializer>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

impl PointSource {
    pub fn point(&self) -> &CurvePoint {
        match self {
            PointSource::EvenDenominator { point } => point,
            PointSource::Sum { sum, .. } => sum,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
#[allow(clippy::large_enum_variant)]
pub enum CurveConstruction {
    Certified { source: PointSource, certificate: UnramifiedCertificate },
    /// Even-denominator points were found but none certified; the
    /// attempts are kept.
    NoValidCertificate { attempts: Vec<UnramifiedCertificate> },
    NoQualifyingPoint { points_found: usize },
    Unsupported { reason: String },
}

impl CurveConstruction {
    pub fn certificate(&self) -> Option<&UnramifiedCertificate> {
        match self {
            CurveConstruction::Certified { certificate, .. } => Some(certificate),
            _ => None,
        }
    }
}

/// Searches `y^2 = x^3 - m` for a point with even `t`, directly or as a sum
/// of two odd-`t` points, and certifies `r - t^2 w`.
pub fn construct_from_curve(m: &BigInt, bounds: SearchBounds) -> CurveConstruction {
    let curve = match Curve::new(m.clone()) {
        Ok(c) => c,
        Err(e) => return CurveConstruction::Unsupported { reason: e.to_string() },
    };
    let points = search_points(&curve, bounds);
    let (even, odd): (Vec<&CurvePoint>, Vec<&CurvePoint>) = points.iter().partition(|p| p.has_even_t());
    let mut candidates: Vec<PointSource> =
        even.into_iter().map(|p| PointSource::EvenDenominator { point: p.clone() }).collect();
    for (i, p) in odd.iter().enumerate() {
        for q in &odd[i + 1..] {
            if let Ok(sum) = combine_for_even_denominator(p, q) {
                candidates.push(PointSource::Sum { p: (*p).clone(), q: (*q).clone(), sum });
            }
        }
    }
    if candidates.is_empty() {
        return CurveConstruction::NoQualifyingPoint { points_found: points.len() };
    }
    if let Err(e) = curve.field().require_monogenic() {
        return CurveConstruction::Unsupported { reason: e.to_string() };
    }
    let mut attempts = Vec::new();
    for source in candidates {
        let cert = match weil_representative(source.point()).and_then(|a| certify_unramified(&a)) {
            Ok(c) => c,
            Err(e) => return CurveConstruction::Unsupported { reason: e.to_string() },
        };
        if cert.valid {
            return CurveConstruction::Certified { source, certificate: cert };
        }
        attempts.push(cert);
    }
    CurveConstruction::NoValidCertificate { attempts }
}

/// Certificate for the unit `1 + a^2 w - a w^2` of `Q((a^3 + 3)^(1/3))`, `4 | a`.
pub fn unit_construction(a: &BigInt) -> Result<UnramifiedCertificate> {
    if a.is_zero() || !a.is_multiple_of(&BigInt::from(4)) {
        return Err(Error::InvalidArgument(format!("need a nonzero multiple of 4, got a = {a}")));
    }
    let field = CubicField::new(a.pow(3) + 3)?;
    certify_unramified(&family_unit(&field)?)
}

/// A lower bound for the 2-rank of `Cl(K)` witnessed by independent
/// certified elements.
#[derive(Debug, Clone, Serialize)]
pub struct TwoRankBound {
    pub bound: usize,
    /// The independent elements, each individually certified.
    #[serde(serialize_with = "display_vec")]
    pub witnesses: Vec<CubicElement>,
    /// Square tests left undecided; each could only have raised the bound.
    pub undecided: usize,
}

fn display_vec<S: serde::Serializer>(v: &[CubicElement], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|e| e.to_string()))
}

/// Turns odd-`t` points into even-`t` ones by adding the last odd point,
/// then keeps a maximal set of `alpha`'s whose every nonempty product is a
/// certified non-square. Those give independent unramified quadratic
/// extensions, so `2^bound - 1` of them and a 2-rank of at least `bound`.
pub fn two_rank_lower_bound(points: &[CurvePoint]) -> Result<TwoRankBound> {
    let Some(first) = points.first() else {
        return Ok(TwoRankBound { bound: 0, witnesses: Vec::new(), undecided: 0 });
    };
    for (i, p) in points.iter().enumerate() {
        p.require_affine()?;
        if p.curve() != first.curve() {
            return Err(Error::CurveMismatch { left: first.curve().m().clone(), right: p.curve().m().clone() });
        }
        if points[..i].contains(p) {
            return Err(Error::InvalidArgument(format!("{p} appears twice")));
        }
    }
    let pivot = points.iter().rev().find(|p| !p.has_even_t());
    let mut even = Vec::new();
    for p in points {
        match pivot {
            _ if p.has_even_t() => even.push(p.clone()),
            Some(r) if p != r => {
                let sum = p.add(r)?;
                if !sum.is_infinity() {
                    if !sum.has_even_t() {
                        return Err(Error::ParityViolation(format!("{p} + {r} = {sum} has odd t")));
                    }
                    even.push(sum);
                }
            }
            _ => {}
        }
    }
    let mut witnesses: Vec<CubicElement> = Vec::new();
    let mut products: Vec<CubicElement> = Vec::new();
    let mut undecided = 0;
    'points: for p in &even {
        let alpha = weil_representative(p)?;
        let cert = certify_unramified(&alpha)?;
        let unramified = cert.checks.totally_positive() && cert.checks.one_mod_four && cert.checks.ideal_square.is_some();
        if !unramified {
            continue;
        }
        // alpha times every product of a subset of the current witnesses
        let mut fresh = vec![alpha.clone()];
        fresh.extend(products.iter().map(|x| x * &alpha));
        for x in &fresh {
            match is_square(x)? {
                SquareTest::NotSquare(_) => {}
                SquareTest::Square(_) => continue 'points,
                SquareTest::Undecided { .. } => {
                    undecided += 1;
                    continue 'points;
                }
            }
        }
        products.extend(fresh);
        witnesses.push(alpha);
    }
    Ok(TwoRankBound { bound: witnesses.len(), witnesses, undecided })
}
