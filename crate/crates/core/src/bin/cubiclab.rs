use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde::Serialize;

use cubiclab::classgrp::{class_group, point_ideal_class};
use cubiclab::cubic::{epsilon_alpha_beta_identity, family_m, CubicElement, CubicField};
use cubiclab::hcf::{certify_unramified, construct_from_curve, unit_construction};
use cubiclab::intarith::factor;
use cubiclab::mordell::{search_points, Curve, SearchBounds};
use cubiclab::quad::cube_identity;
use cubiclab::scan::{emit, quad_map, run_scan, Check, Format, ScanConfig};

const SCAN_HELP: &str = "\
TSV columns: b, m, factorization, cubefree, squarefree, root_number (+1/-1),
odd_h_candidate (exactly one squared prime p = 2 mod 3), family_point,
identities, doubling, class_number, class_group, certificate (alpha when
certified), annotation (published values, not computed), errors.
Skipped checks print `-` or `skipped`; failures print FAILED and are
described in the errors column.";

#[derive(Parser)]
#[command(name = "cubiclab", version, about = "Mordell curves y^2 = x^3 - m and class groups of Q(m^(1/3))")]
struct Cli {
    /// Worker threads; defaults to one per core.
    #[arg(long, env = "CUBICLAB_THREADS", global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Output {
    /// tsv or json.
    #[arg(long, default_value = "tsv")]
    format: String,
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Clone, Copy)]
struct Search {
    #[arg(long, default_value_t = 6)]
    search_t_max: u64,
    #[arg(long, default_value_t = 5000)]
    search_r_max: u64,
}

impl Search {
    fn bounds(self) -> SearchBounds {
        SearchBounds { t_max: self.search_t_max, r_max: self.search_r_max }
    }
}

/// `m` given directly or as `8b^3 + 3`.
#[derive(Args, Clone)]
#[group(required = true, multiple = false)]
struct Target {
    #[arg(long)]
    m: Option<BigInt>,
    #[arg(long)]
    b: Option<BigInt>,
}

impl Target {
    fn m(&self) -> BigInt {
        self.m.clone().unwrap_or_else(|| family_m(self.b.as_ref().expect("clap enforces one of --m/--b")))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Per-b report over a range.
    #[command(after_help = SCAN_HELP)]
    Scan {
        #[arg(long, default_value_t = 1)]
        b_min: u64,
        #[arg(long, default_value_t = 10)]
        b_max: u64,
        /// Comma-separated: root-number, family-point, identities, doubling,
        /// class-group, certificate, or all.
        #[arg(long, value_delimiter = ',', default_value = "root-number,family-point,identities")]
        checks: Vec<String>,
        #[command(flatten)]
        search: Search,
        #[arg(long, default_value_t = 12)]
        relation_bound: u32,
        #[arg(long, default_value_t = 300)]
        class_group_max_m: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Factor an integer, or m = 8b^3 + 3.
    Factor {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        output: Output,
    },
    /// Points (r/t^2, s/t^3) on y^2 = x^3 - m with s >= 0.
    Points {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        search: Search,
        #[command(flatten)]
        output: Output,
    },
    /// Certificate for an unramified quadratic extension of Q(m^(1/3)).
    Hcf {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        search: Search,
        /// Certify this alpha = x + y w + z w^2 instead of searching, as x,y,z.
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<String>,
        #[command(flatten)]
        output: Output,
    },
    /// Certificate from the unit 1 + a^2 w - a w^2 of Q((a^3 + 3)^(1/3)), 4 | a.
    Unit {
        #[arg(long)]
        a: BigInt,
        #[command(flatten)]
        output: Output,
    },
    /// Class group from factor-base relations, with the classes of point ideals.
    Classgroup {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = 12)]
        relation_bound: u32,
        /// Also report [a_P] for points found with these bounds.
        #[arg(long)]
        with_points: bool,
        #[command(flatten)]
        search: Search,
        #[command(flatten)]
        output: Output,
    },
    /// The unit and cube identities for each b in a range.
    Identities {
        #[arg(long, default_value_t = 1)]
        b_min: u64,
        #[arg(long, default_value_t = 10)]
        b_max: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Forms attached to points and to sums of two points.
    Quadmap {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        search: Search,
        #[command(flatten)]
        output: Output,
    },
}

type Failure = Box<dyn std::error::Error>;

fn write_out(output: &Output, text: &str) -> Result<(), Failure> {
    match &output.out {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// JSON as is; TSV from the given header and row cells.
fn render<T: Serialize>(output: &Output, value: &T, header: &[&str], rows: Vec<Vec<String>>) -> Result<(), Failure> {
    let text = match output.format.parse::<Format>()? {
        Format::Json => serde_json::to_string_pretty(value)? + "\n",
        Format::Tsv => {
            let mut s = header.join("\t") + "\n";
            for r in rows {
                s += &(r.join("\t") + "\n");
            }
            s
        }
    };
    write_out(output, &text)
}

fn run(cli: Cli) -> Result<(), Failure> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    match cli.command {
        Command::Scan { b_min, b_max, checks, search, relation_bound, class_group_max_m, output } => {
            let format: Format = output.format.parse()?;
            let checks = if checks.iter().any(|c| c == "all") {
                Check::ALL.into_iter().collect()
            } else {
                checks.iter().map(|c| c.parse()).collect::<Result<_, _>>()?
            };
            let config = ScanConfig {
                b_min,
                b_max,
                checks,
                search_t_max: search.search_t_max,
                search_r_max: search.search_r_max,
                relation_bound,
                class_group_max_m,
            };
            let report = run_scan(&config)?;
            write_out(&output, &emit(&report, format)?)
        }
        Command::Factor { target, output } => {
            let n = target.m();
            let f = factor(&n)?;
            let row = vec![n.to_string(), f.to_string(), f.is_squarefree().to_string(), f.is_cubefree().to_string()];
            render(&output, &f, &["n", "factorization", "squarefree", "cubefree"], vec![row])
        }
        Command::Points { target, search, output } => {
            let curve = Curve::new(target.m())?;
            let points = search_points(&curve, search.bounds());
            let rows = points
                .iter()
                .map(|p| {
                    let a = p.affine().expect("search returns affine points");
                    vec![a.r.to_string(), a.s.to_string(), a.t.to_string(), p.to_string()]
                })
                .collect();
            render(&output, &points, &["r", "s", "t", "point"], rows)
        }
        Command::Hcf { target, search, alpha, output } => {
            let m = target.m();
            if let Some(text) = alpha {
                let c: Vec<BigInt> = text.split(',').map(|x| x.trim().parse()).collect::<Result<_, _>>()?;
                if c.len() != 3 {
                    return Err(format!("--alpha needs three coordinates, got {}", c.len()).into());
                }
                let field = CubicField::new(m)?;
                let cert = certify_unramified(&CubicElement::from_ints(&field, c[0].clone(), c[1].clone(), c[2].clone()))?;
                return write_out(&output, &(cert.to_json()? + "\n"));
            }
            let got = construct_from_curve(&m, search.bounds());
            let summary = match got.certificate() {
                Some(c) => vec![m.to_string(), "certified".into(), c.alpha_display.clone(), c.minpoly_display.clone()],
                None => vec![m.to_string(), serde_json::to_value(&got)?["outcome"].as_str().unwrap_or("-").into(), "-".into(), "-".into()],
            };
            render(&output, &got, &["m", "outcome", "alpha", "minpoly"], vec![summary])
        }
        Command::Unit { a, output } => {
            let cert = unit_construction(&a)?;
            let row = vec![a.to_string(), cert.m.to_string(), cert.alpha_display.clone(), cert.valid.to_string()];
            render(&output, &cert, &["a", "m", "alpha", "valid"], vec![row])
        }
        Command::Classgroup { target, relation_bound, with_points, search, output } => {
            let m = target.m();
            let g = class_group(&m, relation_bound)?;
            let mut rows = vec![vec![
                "group".into(),
                m.to_string(),
                g.h().to_string(),
                format!("{:?}", g.invariants().iter().map(|d| d.to_string()).collect::<Vec<_>>()),
                format!("{:?}", g.status()).to_lowercase(),
            ]];
            let mut classes = Vec::new();
            if with_points {
                let curve = Curve::new(m.clone())?;
                for p in search_points(&curve, search.bounds()) {
                    match point_ideal_class(&p, &g) {
                        Ok(c) => {
                            rows.push(vec![
                                "point".into(),
                                p.to_string(),
                                c.ideal.to_string(),
                                format!("{:?}", c.class.iter().map(|x| x.to_string()).collect::<Vec<_>>()),
                                if c.trivial { "trivial" } else { "nontrivial" }.into(),
                            ]);
                            classes.push(c);
                        }
                        Err(e) => rows.push(vec!["point".into(), p.to_string(), "-".into(), "-".into(), e.to_string()]),
                    }
                }
            }
            #[derive(Serialize)]
            struct Doc<'a> {
                group: &'a cubiclab::classgrp::ClassGroup,
                points: Vec<cubiclab::classgrp::PointIdealClass>,
            }
            render(&output, &Doc { group: &g, points: classes }, &["kind", "item", "value", "class", "note"], rows)
        }
        Command::Identities { b_min, b_max, output } => {
            #[derive(Serialize)]
            struct Row {
                b: u64,
                unit: Option<cubiclab::cubic::UnitIdentityRecord>,
                cube: Option<cubiclab::quad::CubeIdentityRecord>,
                error: Option<String>,
            }
            let mut rows = Vec::new();
            let mut cells = Vec::new();
            for b in b_min..=b_max {
                let bb = BigInt::from(b);
                let (unit, cube) = (epsilon_alpha_beta_identity(&bb), cube_identity(&bb));
                let error = unit.as_ref().err().or(cube.as_ref().err()).map(|e| e.to_string());
                cells.push(vec![
                    b.to_string(),
                    family_m(&bb).to_string(),
                    unit.is_ok().to_string(),
                    cube.is_ok().to_string(),
                    error.clone().unwrap_or_else(|| "-".into()),
                ]);
                rows.push(Row { b, unit: unit.ok(), cube: cube.ok(), error });
            }
            render(&output, &rows, &["b", "m", "unit_identity", "cube_identity", "error"], cells)
        }
        Command::Quadmap { target, search, output } => {
            let rows = quad_map(&target.m(), search.bounds())?;
            let cells = rows
                .iter()
                .map(|r| {
                    vec![
                        r.label.clone(),
                        r.point.clone(),
                        r.form.clone().unwrap_or_else(|| "-".into()),
                        r.principal.map_or("-".into(), |p| p.to_string()),
                        r.error.clone().unwrap_or_else(|| "-".into()),
                    ]
                })
                .collect();
            render(&output, &rows, &["label", "point", "form", "principal", "error"], cells)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("cubiclab: {e}");
            ExitCode::from(2)
        }
    }
}
