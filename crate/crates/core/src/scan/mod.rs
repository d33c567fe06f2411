//! Batch reports over ranges of `b`, with `m = 8b^3 + 3`.
//!
//! Rows are computed in parallel and assembled in order of `b`; for a fixed
//! configuration the emitted TSV and JSON are byte-identical across runs
//! and thread counts.

mod annotations;

pub use annotations::{annotations, Annotations, RowAnnotation};

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classgrp::{class_group, Stabilization};
use crate::cubic::{epsilon_alpha_beta_identity, family_m, CubicField};
use crate::hcf::{construct_from_curve, CurveConstruction};
use crate::intarith::factor;
use crate::mordell::{doubling_square_identity, family_point, root_number, search_points, Curve, SearchBounds};
use crate::quad::{cube_identity, point_to_quad_class};
use crate::{Error, Result};

pub const REPORT_VERSION: u32 = 1;

/// Per-row computations beyond the factorization, which always runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    RootNumber,
    FamilyPoint,
    Identities,
    Doubling,
    ClassGroup,
    Certificate,
}

impl Check {
    pub const ALL: [Check; 6] =
        [Check::RootNumber, Check::FamilyPoint, Check::Identities, Check::Doubling, Check::ClassGroup, Check::Certificate];

    pub fn name(self) -> &'static str {
        match self {
            Check::RootNumber => "root-number",
            Check::FamilyPoint => "family-point",
            Check::Identities => "identities",
            Check::Doubling => "doubling",
            Check::ClassGroup => "class-group",
            Check::Certificate => "certificate",
        }
    }
}

impl FromStr for Check {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown check {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanConfig {
    pub b_min: u64,
    /// Inclusive.
    pub b_max: u64,
    pub checks: BTreeSet<Check>,
    pub search_t_max: u64,
    pub search_r_max: u64,
    pub relation_bound: u32,
    /// Class groups are skipped above this `m`.
    pub class_group_max_m: u64,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            b_min: 1,
            b_max: 10,
            checks: [Check::RootNumber, Check::FamilyPoint, Check::Identities].into(),
            search_t_max: 6,
            search_r_max: 5000,
            relation_bound: 12,
            class_group_max_m: 300,
        }
    }
}

impl ScanConfig {
    pub fn validate(&self) -> Result<()> {
        if self.b_min == 0 {
            return Err(Error::InvalidArgument("b must start at 1".into()));
        }
        if self.b_min > self.b_max + 1 {
            return Err(Error::InvalidArgument(format!("empty range needs b_min <= b_max + 1, got {}..{}", self.b_min, self.b_max)));
        }
        Ok(())
    }

    fn bounds(&self) -> SearchBounds {
        SearchBounds { t_max: self.search_t_max, r_max: self.search_r_max }
    }
}

/// Result of one check in one row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", content = "detail", rename_all = "snake_case")]
pub enum Outcome {
    Ok(String),
    Failed(String),
    Skipped(String),
}

impl Outcome {
    fn from_result<T>(r: Result<T>, ok: impl FnOnce(T) -> String) -> Self {
        match r {
            Ok(v) => Outcome::Ok(ok(v)),
            Err(e) => Outcome::Failed(e.to_string()),
        }
    }

    pub fn is_ok(&self) -> bool {
        matches!(self, Outcome::Ok(_))
    }

    fn cell(&self) -> String {
        match self {
            Outcome::Ok(d) if d.is_empty() => "ok".into(),
            Outcome::Ok(d) => d.clone(),
            Outcome::Failed(_) => "FAILED".into(),
            Outcome::Skipped(_) => "skipped".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassGroupSummary {
    pub h: String,
    pub invariants: Vec<String>,
    pub stabilized: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRow {
    pub b: u64,
    pub m: String,
    pub factorization: String,
    pub cubefree: bool,
    pub squarefree: bool,
    /// Primes `p = 2 mod 3` with `p^2 | m`.
    pub squared_primes_2mod3: Vec<String>,
    /// Exactly one squared prime `p = 2 mod 3`: necessary for odd `h`
    /// under the parity conjecture.
    pub odd_h_candidate: bool,
    pub root_number: Option<i32>,
    pub family_point: Option<Outcome>,
    pub identities: Option<Outcome>,
    pub doubling: Option<Outcome>,
    pub class_group: Option<Outcome>,
    pub class_group_summary: Option<ClassGroupSummary>,
    pub certificate: Option<Outcome>,
    pub annotation: Option<RowAnnotation>,
    pub errors: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    pub version: u32,
    pub tool: String,
    pub config: ScanConfig,
    pub rows: Vec<ScanRow>,
    pub negative_root_numbers: Vec<u64>,
    pub odd_h_candidates: Vec<u64>,
}

pub fn run_scan(config: &ScanConfig) -> Result<ScanReport> {
    config.validate()?;
    let rows: Vec<ScanRow> = (config.b_min..=config.b_max).into_par_iter().map(|b| scan_row(b, config)).collect();
    let negative_root_numbers = rows.iter().filter(|r| r.root_number == Some(-1)).map(|r| r.b).collect();
    let odd_h_candidates = rows.iter().filter(|r| r.cubefree && r.odd_h_candidate).map(|r| r.b).collect();
    Ok(ScanReport {
        version: REPORT_VERSION,
        tool: concat!("cubiclab ", env!("CARGO_PKG_VERSION")).into(),
        config: config.clone(),
        rows,
        negative_root_numbers,
        odd_h_candidates,
    })
}

fn scan_row(b: u64, config: &ScanConfig) -> ScanRow {
    let bb = BigInt::from(b);
    let m = family_m(&bb);
    let mut errors = Vec::new();
    let fac = factor(&m).expect("m > 0");
    let squared: Vec<&BigInt> = fac.factors.iter().filter(|(p, e)| *e >= 2 && p.mod_floor(&BigInt::from(3)) == BigInt::from(2)).map(|(p, _)| p).collect();
    let odd_h_candidate = squared.len() == 1;
    let on = |c: Check| config.checks.contains(&c);

    let root_number = if on(Check::RootNumber) {
        match root_number(&m) {
            Ok(r) => Some(r.w),
            Err(e) => {
                errors.push(format!("root-number: {e}"));
                None
            }
        }
    } else {
        None
    };
    let family = on(Check::FamilyPoint).then(|| Outcome::from_result(family_point(&bb), |p| p.to_string()));
    let identities = on(Check::Identities).then(|| {
        if !fac.is_cubefree() {
            return Outcome::Skipped("m is not cubefree".into());
        }
        Outcome::from_result(epsilon_alpha_beta_identity(&bb).and_then(|_| cube_identity(&bb)), |_| String::new())
    });
    let doubling = on(Check::Doubling).then(|| {
        let run = || -> Result<usize> {
            let curve = Curve::new(m.clone())?;
            let mut points = search_points(&curve, config.bounds());
            points.push(family_point(&bb)?);
            for p in &points {
                doubling_square_identity(p)?;
            }
            Ok(points.len())
        };
        Outcome::from_result(run(), |n| format!("{n} points"))
    });
    let mut class_group_summary = None;
    let class = on(Check::ClassGroup).then(|| {
        let field = match CubicField::new(m.clone()) {
            Ok(f) => f,
            Err(e) => return Outcome::Skipped(e.to_string()),
        };
        if let Err(e) = field.require_monogenic() {
            return Outcome::Skipped(e.to_string());
        }
        if m.to_u64().is_none_or(|v| v > config.class_group_max_m) {
            return Outcome::Skipped(format!("m above {}", config.class_group_max_m));
        }
        match class_group(&m, config.relation_bound) {
            Ok(g) => {
                let s = ClassGroupSummary {
                    h: g.h().to_string(),
                    invariants: g.invariants().iter().map(|d| d.to_string()).collect(),
                    stabilized: g.status() == Stabilization::Stabilized,
                };
                class_group_summary = Some(s);
                Outcome::Ok(g.h().to_string())
            }
            Err(e) => Outcome::Failed(e.to_string()),
        }
    });
    let certificate = on(Check::Certificate).then(|| match construct_from_curve(&m, config.bounds()) {
        CurveConstruction::Certified { certificate, .. } => Outcome::Ok(certificate.alpha_display),
        CurveConstruction::NoValidCertificate { attempts } => {
            Outcome::Skipped(format!("{} candidates, none certified", attempts.len()))
        }
        CurveConstruction::NoQualifyingPoint { points_found } => {
            Outcome::Skipped(format!("no qualifying point among {points_found}"))
        }
        CurveConstruction::Unsupported { reason } => Outcome::Skipped(reason),
    });
    for (name, o) in [("family-point", &family), ("identities", &identities), ("doubling", &doubling), ("class-group", &class)] {
        if let Some(Outcome::Failed(e)) = o {
            errors.push(format!("{name}: {e}"));
        }
    }
    ScanRow {
        b,
        m: m.to_string(),
        factorization: fac.to_string(),
        cubefree: fac.is_cubefree(),
        squarefree: fac.is_squarefree(),
        squared_primes_2mod3: squared.iter().map(|p| p.to_string()).collect(),
        odd_h_candidate,
        root_number,
        family_point: family,
        identities,
        doubling,
        class_group: class,
        class_group_summary,
        certificate,
        annotation: annotations().row(b),
        errors,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Tsv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tsv" => Ok(Format::Tsv),
            "json" => Ok(Format::Json),
            _ => Err(Error::UnknownFormat(s.into())),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Tsv => "tsv",
            Format::Json => "json",
        })
    }
}

pub const TSV_COLUMNS: [&str; 15] = [
    "b",
    "m",
    "factorization",
    "cubefree",
    "squarefree",
    "root_number",
    "odd_h_candidate",
    "family_point",
    "identities",
    "doubling",
    "class_number",
    "class_group",
    "certificate",
    "annotation",
    "errors",
];

pub fn emit(report: &ScanReport, format: Format) -> Result<String> {
    match format {
        Format::Json => serde_json::to_string_pretty(report).map(|s| s + "\n").map_err(|e| Error::Malformed(e.to_string())),
        Format::Tsv => Ok(emit_tsv(report)),
    }
}

pub fn parse_json(text: &str) -> Result<ScanReport> {
    serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))
}

fn emit_tsv(report: &ScanReport) -> String {
    let mut out = TSV_COLUMNS.join("\t");
    out.push('\n');
    let opt = |o: &Option<Outcome>| o.as_ref().map_or("-".to_string(), Outcome::cell);
    for r in &report.rows {
        let group = r.class_group_summary.as_ref().map_or("-".to_string(), |s| {
            let g = if s.invariants.is_empty() {
                "1".into()
            } else {
                s.invariants.iter().map(|d| format!("Z/{d}")).collect::<Vec<_>>().join(" x ")
            };
            if s.stabilized {
                g
            } else {
                format!("{g} (unstabilized)")
            }
        });
        let fields = [
            r.b.to_string(),
            r.m.clone(),
            r.factorization.clone(),
            r.cubefree.to_string(),
            r.squarefree.to_string(),
            r.root_number.map_or("-".into(), |w| format!("{w:+}")),
            r.odd_h_candidate.to_string(),
            opt(&r.family_point),
            opt(&r.identities),
            opt(&r.doubling),
            r.class_group_summary.as_ref().map_or("-".into(), |s| s.h.clone()),
            group,
            opt(&r.certificate),
            r.annotation.as_ref().map_or("-".into(), RowAnnotation::cell),
            if r.errors.is_empty() { "-".into() } else { r.errors.join("; ") },
        ];
        out.push_str(&fields.join("\t"));
        out.push('\n');
    }
    out
}

/// One line of the point-to-form experiment.
#[derive(Debug, Clone, Serialize)]
pub struct QuadMapRow {
    pub label: String,
    pub point: String,
    pub form: Option<String>,
    pub principal: Option<bool>,
    pub error: Option<String>,
}

/// Classes of `b = (r, s + t^3 sqrt(-m))` for each searched point and
/// each sum of two of them. Whether `P -> [b]` is a homomorphism is left
/// open; the table is for inspection.
pub fn quad_map(m: &BigInt, bounds: SearchBounds) -> Result<Vec<QuadMapRow>> {
    let curve = Curve::new(m.clone())?;
    let points = search_points(&curve, bounds);
    let mut out = Vec::new();
    let mut push = |label: String, p: &crate::mordell::CurvePoint| {
        let row = match point_to_quad_class(p) {
            Ok(c) => QuadMapRow {
                label,
                point: p.to_string(),
                form: Some(c.class.to_string()),
                principal: Some(c.is_principal),
                error: None,
            },
            Err(e) => QuadMapRow { label, point: p.to_string(), form: None, principal: None, error: Some(e.to_string()) },
        };
        out.push(row);
    };
    for (i, p) in points.iter().enumerate() {
        push(format!("P{i}"), p);
    }
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let sum = points[i].add(&points[j])?;
            push(format!("P{i}+P{j}"), &sum);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(b_min: u64, b_max: u64, checks: &[Check]) -> ScanConfig {
        ScanConfig { b_min, b_max, checks: checks.iter().copied().collect(), ..ScanConfig::default() }
    }

    #[test]
    fn root_number_list() {
        let r = run_scan(&config(1, 199, &[Check::RootNumber])).unwrap();
        let cubefree: Vec<u64> =
            r.rows.iter().filter(|row| row.cubefree && row.root_number == Some(-1)).map(|row| row.b).collect();
        assert_eq!(cubefree, vec![44, 56, 68, 69, 86, 89, 94, 119, 169, 177, 194]);
    }

    #[test]
    fn empty_range_and_formats() {
        let r = run_scan(&config(5, 4, &[])).unwrap();
        assert_eq!(emit(&r, Format::Tsv).unwrap(), TSV_COLUMNS.join("\t") + "\n");
        assert!("xml".parse::<Format>().is_err());
        assert!(run_scan(&config(5, 2, &[])).is_err());
        assert!(run_scan(&config(0, 2, &[])).is_err());
        assert!("nope".parse::<Check>().is_err());
    }

    #[test]
    fn json_round_trip_and_determinism() {
        let c = config(1, 12, &Check::ALL);
        let r = run_scan(&c).unwrap();
        let json = emit(&r, Format::Json).unwrap();
        assert_eq!(parse_json(&json).unwrap(), r);
        assert_eq!(emit(&run_scan(&c).unwrap(), Format::Json).unwrap(), json);
        let row = &r.rows[0];
        assert_eq!(row.class_group_summary.as_ref().unwrap().h, "2");
        assert_eq!(row.certificate, Some(Outcome::Ok("9 - 4w".into())));
        assert!(r.rows.iter().all(|row| row.errors.is_empty()), "{:?}", r.rows.iter().map(|x| &x.errors).collect::<Vec<_>>());
    }

    #[test]
    fn quad_map_lists_points_and_sums() {
        let rows = quad_map(&BigInt::from(11), SearchBounds { t_max: 2, r_max: 100 }).unwrap();
        assert!(rows.iter().any(|r| r.label == "P0"));
        assert!(rows.iter().any(|r| r.label.contains('+')));
    }
}
