//! Command-line front end: loads JSON descriptions of sites, presheaves
//! and complexes, runs the requested computation, and prints a
//! deterministic report. Exit codes: 0 on success, 1 when the
//! mathematics fails (descent obstruction, invalid site, disagreeing
//! methods), 2 on malformed input.

mod checks;
mod report;
mod schema;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use finsite::complex::{homology, homology_at, Complex, ComplexMorphism};
use finsite::exactalg::modules_isomorphic;
use finsite::godement::{godement_resolution, hypercohomology, HypercohomologyMethod};
use finsite::hypercover::{cech_nerve, descent_check};
use finsite::resolve::{
    certify_cofibration, cofibrant_replace, kan_extend, ResolutionStrategy,
};
use finsite::site::sheafify::{is_sheaf, sheafify};
use finsite::site::{validate_site, ModPresheaf, MorId, ObjId, Site};
use finsite::Error;

use report::{emit, Format, Report};
use schema::Failure;

#[derive(Parser)]
#[command(name = "finsite", version, about = "Exact homological algebra on finite sites")]
struct Cli {
    /// Output format: "text" or "json".
    #[arg(long, global = true, default_value = "text")]
    format: String,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RingArgs {
    /// Coefficient ring: Z, Q or Fp.
    #[arg(long, default_value = "Z")]
    ring: String,
    /// The prime for --ring Fp.
    #[arg(long)]
    p: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Check the site axioms and report every violation.
    SiteValidate {
        #[arg(long)]
        site: PathBuf,
    },
    /// Tabulate homology presheaves of a complex over a degree window.
    Homology {
        #[arg(long)]
        site: PathBuf,
        #[arg(long)]
        complex: PathBuf,
        #[command(flatten)]
        ring: RingArgs,
        /// Inclusive degree window lo..hi.
        #[arg(long, allow_hyphen_values = true)]
        window: String,
    },
    /// Sheafify a presheaf and report whether it already was a sheaf.
    Sheafify {
        #[arg(long)]
        site: PathBuf,
        #[arg(long)]
        presheaf: PathBuf,
        #[command(flatten)]
        ring: RingArgs,
    },
    /// Run the descent comparison against a refined nerve of an object's
    /// covering family.
    Descent {
        #[arg(long)]
        site: PathBuf,
        #[arg(long)]
        complex: PathBuf,
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long)]
        object: String,
        /// Simplicial truncation level of the nerve.
        #[arg(long, default_value_t = 2)]
        levels: i64,
        /// Number of refinement rounds applied to the nerve.
        #[arg(long, default_value_t = 0)]
        depth: u32,
    },
    /// Build a cofibrant replacement and certify it.
    Cofrep {
        #[arg(long)]
        site: PathBuf,
        #[arg(long)]
        complex: PathBuf,
        #[command(flatten)]
        ring: RingArgs,
        /// Resolution depth per level.
        #[arg(long, default_value_t = 2)]
        depth: usize,
        /// Resolution strategy: "economical" or "paper-exact".
        #[arg(long, default_value = "economical")]
        strategy: String,
    },
    /// Build the stalkwise resolution and tabulate its homology.
    Godement {
        #[arg(long)]
        site: PathBuf,
        #[arg(long)]
        complex: PathBuf,
        #[command(flatten)]
        ring: RingArgs,
        /// Cosimplicial truncation depth.
        #[arg(long, default_value_t = 2)]
        depth: usize,
    },
    /// Compute hypercohomology at an object by both methods and compare.
    Hypercoh {
        #[arg(long)]
        site: PathBuf,
        #[arg(long)]
        complex: PathBuf,
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long)]
        object: String,
        /// Inclusive cohomological window lo..hi.
        #[arg(long, visible_alias = "range", allow_hyphen_values = true)]
        window: String,
    },
    /// Evaluate the homotopy left Kan extension of a diagram on a
    /// representable and compare with the diagram value.
    Kan {
        #[arg(long)]
        site: PathBuf,
        #[arg(long)]
        diagram: PathBuf,
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long)]
        object: String,
    },
    /// Run the seeded self-check suites.
    Check {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = match cli.format.parse::<Format>() {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: --format: {e}");
            return ExitCode::from(2);
        }
    };
    match run(cli.command) {
        Ok(report) => {
            print!("{}", emit(&report, format));
            if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Math(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn object_id(site: &Site, name: &str) -> Result<ObjId, Failure> {
    site.category()
        .object_by_name(name)
        .map_err(|e| schema::input("--object", e))
}

/// The first covering family of `c` with no identity morphism, falling
/// back to the identity family for trivially covered objects.
fn proper_family(site: &Site, c: ObjId) -> Vec<MorId> {
    let id = site.category().identity(c);
    site.coverage()
        .families(c)
        .iter()
        .find(|f| f.iter().all(|&m| m != id))
        .cloned()
        .unwrap_or_else(|| vec![id])
}

fn homology_table(site: &Site, k: &Complex, lo: i64, hi: i64) -> (Value, Vec<Vec<String>>) {
    let cat = site.category();
    let mut by_degree = Map::new();
    let mut header = vec!["n".to_string()];
    header.extend(cat.objects().map(|o| cat.object_name(o).to_string()));
    let mut table = vec![header];
    for n in lo..=hi {
        let h = homology(k, n);
        let mut row = vec![n.to_string()];
        let mut by_object = Map::new();
        for o in cat.objects() {
            let desc = h.presheaf.value(o).describe();
            by_object.insert(cat.object_name(o).to_string(), Value::String(desc.clone()));
            row.push(desc);
        }
        by_degree.insert(n.to_string(), Value::Object(by_object));
        table.push(row);
    }
    (Value::Object(by_degree), table)
}

fn run(command: Command) -> Result<Report, Failure> {
    match command {
        Command::SiteValidate { site } => {
            let (cat, cov) = schema::load_site_raw(&site)?;
            let verdict = validate_site(&cat, &cov);
            let valid = verdict.is_valid();
            let mut table = vec![vec!["check".to_string(), "result".to_string()]];
            table.push(vec![
                "site axioms".to_string(),
                if valid { "valid".to_string() } else { "invalid".to_string() },
            ]);
            for v in &verdict.violations {
                table.push(vec!["violation".to_string(), v.clone()]);
            }
            Ok(Report {
                json: json!({
                    "valid": valid,
                    "violations": verdict.violations,
                }),
                table,
                passed: valid,
            })
        }
        Command::Homology { site, complex, ring, window } => {
            let site = schema::load_site(&site)?;
            let ring = schema::parse_ring(&ring.ring, ring.p)?;
            let k = schema::load_complex(&complex, &site, ring)?;
            let (lo, hi) = schema::parse_window(&window)?;
            let (by_degree, table) = homology_table(&site, &k, lo, hi);
            Ok(Report {
                json: json!({ "homology": by_degree }),
                table,
                passed: true,
            })
        }
        Command::Sheafify { site, presheaf, ring } => {
            let site = schema::load_site(&site)?;
            let ring = schema::parse_ring(&ring.ring, ring.p)?;
            let f = schema::load_presheaf(&presheaf, &site, ring)?;
            let already = is_sheaf(&site, &f);
            let result = sheafify(&site, &f);
            let cat = site.category();
            let mut by_object = Map::new();
            let mut table =
                vec![vec!["object".to_string(), "section module".to_string()]];
            for o in cat.objects() {
                let desc = result.sheaf.value(o).describe();
                by_object.insert(cat.object_name(o).to_string(), Value::String(desc.clone()));
                table.push(vec![cat.object_name(o).to_string(), desc]);
            }
            Ok(Report {
                json: json!({
                    "is_sheaf": already,
                    "sheaf": Value::Object(by_object),
                }),
                table,
                passed: true,
            })
        }
        Command::Descent { site, complex, ring, object, levels, depth } => {
            let site = schema::load_site(&site)?;
            let ring = schema::parse_ring(&ring.ring, ring.p)?;
            let k = schema::load_complex(&complex, &site, ring)?;
            let c = object_id(&site, &object)?;
            let family = proper_family(&site, c);
            let nerve =
                cech_nerve(&site, c, &family, levels, depth).map_err(schema::math)?;
            let report = descent_check(&k, &nerve).map_err(schema::math)?;
            let passes = report.passes();
            let mut verdicts = Map::new();
            let mut table = vec![vec![
                "degree".to_string(),
                "sections".to_string(),
                "descended".to_string(),
                "isomorphism".to_string(),
            ]];
            for v in &report.verdicts {
                verdicts.insert(
                    v.degree.to_string(),
                    json!({
                        "source": v.source.describe(),
                        "target": v.target.describe(),
                        "isomorphism": v.is_isomorphism,
                    }),
                );
                table.push(vec![
                    v.degree.to_string(),
                    v.source.describe(),
                    v.target.describe(),
                    v.is_isomorphism.to_string(),
                ]);
            }
            Ok(Report {
                json: json!({
                    "object": object,
                    "truncation": levels.to_string(),
                    "depth": depth.to_string(),
                    "verdicts": Value::Object(verdicts),
                    "passes": passes,
                }),
                table,
                passed: passes,
            })
        }
        Command::Cofrep { site, complex, ring, depth, strategy } => {
            let site = schema::load_site(&site)?;
            let ring = schema::parse_ring(&ring.ring, ring.p)?;
            let k = schema::load_complex(&complex, &site, ring)?;
            let strategy = match strategy.as_str() {
                "economical" => ResolutionStrategy::Economical,
                "paper-exact" => ResolutionStrategy::PaperExact,
                other => {
                    return Err(Failure::Input(format!(
                        "--strategy: unknown strategy {other:?}"
                    )))
                }
            };
            if depth == 0 {
                return Err(Failure::Input(
                    "--depth: must be at least 1".to_string(),
                ));
            }
            let rep = cofibrant_replace(&k, depth, strategy).map_err(schema::math)?;
            let surjective = rep.map.is_degreewise_surjective();
            let zero = Complex::zero(k.site().clone(), ring);
            let from_zero = ComplexMorphism::zero(zero, rep.qk.clone());
            let certified = certify_cofibration(&site, &from_zero).is_certified();
            let cat = site.category();
            let mut levels = Map::new();
            let mut table = vec![vec!["degree".to_string(), "covering objects".to_string()]];
            for (n, comps) in &rep.level_components {
                let names: Vec<String> = comps
                    .iter()
                    .map(|&o| cat.object_name(o).to_string())
                    .collect();
                table.push(vec![n.to_string(), names.join(" ")]);
                levels.insert(
                    n.to_string(),
                    Value::Array(names.into_iter().map(Value::String).collect()),
                );
            }
            Ok(Report {
                json: json!({
                    "valid_hi": rep.valid_hi.to_string(),
                    "fully_resolved": rep.fully_resolved,
                    "surjective": surjective,
                    "certified": certified,
                    "levels": Value::Object(levels),
                }),
                table,
                passed: surjective && certified,
            })
        }
        Command::Godement { site, complex, ring, depth } => {
            let site = schema::load_site(&site)?;
            let ring = schema::parse_ring(&ring.ring, ring.p)?;
            let k = schema::load_complex(&complex, &site, ring)?;
            if depth == 0 {
                return Err(Failure::Input(
                    "--depth: must be at least 1".to_string(),
                ));
            }
            let god = godement_resolution(&k, depth as i64).map_err(schema::math)?;
            let (by_degree, table) =
                homology_table(&site, &god.god, god.valid_lo, k.hi());
            Ok(Report {
                json: json!({
                    "valid_lo": god.valid_lo.to_string(),
                    "homology": by_degree,
                }),
                table,
                passed: true,
            })
        }
        Command::Hypercoh { site, complex, ring, object, window } => {
            let site = schema::load_site(&site)?;
            let ring = schema::parse_ring(&ring.ring, ring.p)?;
            let k = schema::load_complex(&complex, &site, ring)?;
            let c = object_id(&site, &object)?;
            let (lo, hi) = schema::parse_window(&window)?;
            let mut values = Map::new();
            let mut table = vec![vec![
                "n".to_string(),
                "godement".to_string(),
                "cech-colimit".to_string(),
                "agree".to_string(),
            ]];
            let mut all_agree = true;
            for n in lo..=hi {
                let god = hypercohomology(&k, c, n, HypercohomologyMethod::Godement)
                    .map_err(schema::math)?;
                let (cech_desc, agree) =
                    match hypercohomology(&k, c, n, HypercohomologyMethod::CechColimit) {
                        Ok(m) => {
                            let agree =
                                modules_isomorphic(&god, &m).map_err(schema::math)?;
                            (m.describe(), agree)
                        }
                        Err(Error::Unstabilized) => ("unstabilized".to_string(), false),
                        Err(e) => return Err(schema::math(e)),
                    };
                all_agree &= agree;
                values.insert(
                    n.to_string(),
                    json!({
                        "godement": god.describe(),
                        "cech-colimit": cech_desc,
                        "agree": agree,
                    }),
                );
                table.push(vec![
                    n.to_string(),
                    god.describe(),
                    cech_desc,
                    agree.to_string(),
                ]);
            }
            Ok(Report {
                json: json!({
                    "object": object,
                    "values": Value::Object(values),
                }),
                table,
                passed: all_agree,
            })
        }
        Command::Kan { site, diagram, ring, object } => {
            let site = schema::load_site(&site)?;
            let ring = schema::parse_ring(&ring.ring, ring.p)?;
            let gamma = schema::load_diagram(&diagram, &site, ring)?;
            let c = object_id(&site, &object)?;
            let weight = Complex::new(
                site.clone(),
                ring,
                0,
                vec![ModPresheaf::representable(site.category(), ring, c)],
                vec![],
            )
            .map_err(schema::math)?;
            let extended = kan_extend(&gamma, &weight);
            let expected = gamma.object(c);
            let pt = ObjId(0);
            let lo = extended.lo().min(expected.lo());
            let hi = extended.hi().max(expected.hi());
            let mut degrees = Map::new();
            let mut table = vec![vec![
                "n".to_string(),
                "extension".to_string(),
                "diagram value".to_string(),
                "isomorphic".to_string(),
            ]];
            let mut all_iso = true;
            for n in lo..=hi {
                let a = homology_at(&extended, n, pt);
                let b = homology_at(expected, n, pt);
                let iso = modules_isomorphic(&a, &b).map_err(schema::math)?;
                all_iso &= iso;
                degrees.insert(
                    n.to_string(),
                    json!({
                        "extension": a.describe(),
                        "value": b.describe(),
                        "isomorphic": iso,
                    }),
                );
                table.push(vec![
                    n.to_string(),
                    a.describe(),
                    b.describe(),
                    iso.to_string(),
                ]);
            }
            Ok(Report {
                json: json!({
                    "object": object,
                    "homology": Value::Object(degrees),
                }),
                table,
                passed: all_iso,
            })
        }
        Command::Check { seed } => {
            let results = checks::run_all(seed);
            let mut table = vec![vec!["suite".to_string(), "result".to_string()]];
            let mut suites = Map::new();
            let mut passed = true;
            for (name, ok) in &results {
                passed &= ok;
                suites.insert(name.clone(), Value::Bool(*ok));
                table.push(vec![
                    name.clone(),
                    if *ok { "pass".to_string() } else { "fail".to_string() },
                ]);
            }
            Ok(Report {
                json: json!({ "seed": seed.to_string(), "suites": Value::Object(suites) }),
                table,
                passed,
            })
        }
    }
}
