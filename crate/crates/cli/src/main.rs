//! `rla`: build Cartan-type restricted Lie algebras, compute their toral
//! invariants and regenerate the full verification table.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde_json::json;

use rla_core::cartanfam::{build, image_of_poly, registered_torus};
use rla_core::interchange::{
    algebra_to_json, family_of, module_from_json, module_to_json, parse_algebra, ElementJson,
    ModuleJson,
};
use rla_core::liealg::{center, centralizer, derived_subalgebra};
use rla_core::repmod::{composition_factors, density_module};
use rla_core::torirank::{
    invariant_report_for, mu_search, rank_via_torus, verify_torus, weight_decomposition,
    Provenance, ReportOptions,
};
use rla_core::verify::{assemble, paper_cases};
use rla_core::{Family, FamilySpec, FpVector, Ideal, RealizedAlgebra, Torus};

fn invalid(e: impl std::fmt::Display) -> anyhow::Error {
    anyhow!(e.to_string())
}

#[derive(Parser)]
#[command(
    name = "rla",
    version,
    about = "Toral rank and invariants of restricted Lie algebras over F_p"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a family member and write it as algebra JSON with its registered torus.
    Build {
        /// W, S, H, H', P, K'' or K
        #[arg(long)]
        family: String,
        #[arg(long, conflicts_with = "r", required_unless_present = "r")]
        n: Option<usize>,
        #[arg(long)]
        r: Option<usize>,
        #[arg(long)]
        p: u32,
        /// Output file; stdout if omitted.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Print the invariant report of a family member saved by `build`.
    Invariants {
        algebra: PathBuf,
        /// Also run the randomized torus search with this seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 200)]
        budget: usize,
    },
    /// dim C(t) for the torus stored in the file, or for a searched torus.
    Rank {
        algebra: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        budget: usize,
    },
    /// Centralizer of one element, given as element JSON, comma-separated
    /// coordinates, or a polynomial such as `1+x3` (D_K or D_H of it).
    #[command(group = clap::ArgGroup::new("x").required(true))]
    Centralizer {
        algebra: PathBuf,
        #[arg(long, group = "x")]
        element: Option<PathBuf>,
        #[arg(long, value_delimiter = ',', group = "x")]
        coords: Option<Vec<u32>>,
        #[arg(long, group = "x")]
        poly: Option<String>,
    },
    /// Weight-space decomposition under the torus stored in the file.
    Weights { algebra: PathBuf },
    /// Quotient by an ideal: `--by derived`, `--by center`, or explicit `--ideal "c,c,…;c,c,…"`.
    Quotient {
        algebra: PathBuf,
        #[arg(long, conflicts_with = "ideal")]
        by: Option<String>,
        #[arg(long)]
        ideal: Option<String>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Composition factors of a module file, or write the W(1) density module of weight lambda.
    Module {
        module: Option<PathBuf>,
        #[arg(long, requires = "lambda", conflicts_with = "module")]
        density: Option<u32>,
        #[arg(long)]
        lambda: Option<u32>,
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the whole verification table and report every claim.
    VerifyPaper {
        #[arg(long = "p", value_delimiter = ',', default_values_t = [3u32, 5])]
        p_list: Vec<u32>,
        #[arg(long, default_value_t = 3)]
        max_n: usize,
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("RLA_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
    {
        // only fails if a pool already exists
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global();
    }
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, format!("{text}\n"))
            .with_context(|| format!("writing {}", path.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn pretty(v: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn load(path: &Path) -> Result<(Arc<RealizedAlgebra>, Option<Vec<FpVector>>)> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(invalid)?;
    parse_algebra(&text).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

fn spec_of(g: &RealizedAlgebra) -> Result<FamilySpec> {
    family_of(g.name(), g.p())
        .ok_or_else(|| invalid(format!("{} is not a family member", g.name())))
}

fn stored_torus(
    g: &Arc<RealizedAlgebra>,
    coords: Option<Vec<FpVector>>,
    mu: Option<usize>,
) -> Result<Option<Torus>> {
    let Some(coords) = coords else {
        return Ok(None);
    };
    let elems = coords
        .into_iter()
        .map(|c| g.element(c))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Some(
        verify_torus(g, &elems, Provenance::Registered, mu).map_err(invalid)?,
    ))
}

fn parse_rows(text: &str, dim: usize) -> Result<Vec<Vec<u32>>> {
    text.split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|row| {
            let v = row
                .split(',')
                .map(|c| c.trim().parse::<u32>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(invalid)?;
            if v.len() != dim {
                bail!(invalid(format!(
                    "vector of length {} in an algebra of dimension {dim}",
                    v.len()
                )));
            }
            Ok(v)
        })
        .collect()
}

fn vector(g: &RealizedAlgebra, coords: Vec<u32>) -> Result<FpVector> {
    if coords.len() != g.dim() {
        return Err(invalid(format!(
            "{} coordinates for dimension {}",
            coords.len(),
            g.dim()
        )));
    }
    if let Some(c) = coords.iter().find(|&&c| c >= g.p()) {
        return Err(invalid(format!(
            "coordinate {c} is not reduced mod {}",
            g.p()
        )));
    }
    Ok(FpVector::from_residues(g.field(), coords))
}

fn run(command: Command) -> Result<u8> {
    match command {
        Command::Build {
            family,
            n,
            r,
            p,
            out,
        } => {
            let fam: Family = family.parse().map_err(invalid)?;
            let spec = match (n, r) {
                (Some(n), _) => FamilySpec::new(fam, n, p),
                (None, Some(r)) => FamilySpec::from_r(fam, r, p),
                (None, None) => unreachable!("clap requires n or r"),
            }
            .map_err(invalid)?;
            let g = build(spec)?;
            let torus = registered_torus(spec, &g)?;
            emit(
                out.as_deref(),
                &pretty(&algebra_to_json(&g, Some(&torus.coords))),
            )?;
            eprintln!(
                "{spec}: dim {}, registered torus of dimension {}",
                g.dim(),
                torus.coords.len()
            );
            Ok(0)
        }
        Command::Invariants {
            algebra,
            seed,
            budget,
        } => {
            let (g, coords) = load(&algebra)?;
            let spec = spec_of(&g)?;
            let torus = stored_torus(&g, coords, Some(spec.reference_mu()))?
                .ok_or_else(|| invalid("the file carries no torus"))?;
            let options = ReportOptions {
                search: seed.map(|s| (s, budget)),
                force_weights: false,
            };
            let report = invariant_report_for(spec, &g, &torus, options)?;
            println!("{}", pretty(&report));
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            Ok(if report.all_pass() { 0 } else { 1 })
        }
        Command::Rank {
            algebra,
            seed,
            budget,
        } => {
            let (g, coords) = load(&algebra)?;
            let mu_ref = family_of(g.name(), g.p()).map(FamilySpec::reference_mu);
            let torus = match stored_torus(&g, coords, mu_ref)? {
                Some(t) => t,
                None => mu_search(&g, seed, budget)?,
            };
            let rank = rank_via_torus(&torus)?;
            let provenance = serde_json::to_value(torus.provenance())?;
            println!(
                "{}",
                pretty(&json!({
                    "algebra": g.name(),
                    "p": g.p(),
                    "dim": g.dim(),
                    "torus_dim": torus.dim(),
                    "torus_provenance": provenance,
                    "centralizer_dim": rank,
                }))
            );
            Ok(0)
        }
        Command::Centralizer {
            algebra,
            element,
            coords,
            poly,
        } => {
            let (g, _) = load(&algebra)?;
            let coords = match (element, coords, poly) {
                (Some(path), _, _) => {
                    let text = fs::read_to_string(&path)
                        .with_context(|| format!("reading {}", path.display()))?;
                    let e: ElementJson = serde_json::from_str(&text).map_err(invalid)?;
                    if e.algebra != g.name() {
                        return Err(invalid(format!(
                            "element of {} given for {}",
                            e.algebra,
                            g.name()
                        )));
                    }
                    e.coords
                }
                (None, Some(c), _) => c,
                (None, None, Some(text)) => {
                    let d = image_of_poly(spec_of(&g)?, &text).map_err(invalid)?;
                    g.coords_of_derivation(&d)?
                        .ok_or_else(|| invalid(format!("{d} is not in {}", g.name())))?
                        .into_inner()
                }
                (None, None, None) => unreachable!("clap requires one of them"),
            };
            let x = g.element(vector(&g, coords)?)?;
            let c = centralizer(&g, &[x])?;
            let basis = c.parent_embedding().expect("centralizer is a subalgebra").1;
            println!(
                "{}",
                pretty(&json!({
                    "algebra": g.name(),
                    "dim": c.dim(),
                    "basis": basis.iter().map(|v| g.describe(v.as_slice())).collect::<Vec<_>>(),
                    "coords": basis.iter().map(|v| v.as_slice().to_vec()).collect::<Vec<_>>(),
                }))
            );
            Ok(0)
        }
        Command::Weights { algebra } => {
            let (g, coords) = load(&algebra)?;
            let mu_ref = family_of(g.name(), g.p()).map(FamilySpec::reference_mu);
            let torus = stored_torus(&g, coords, mu_ref)?
                .ok_or_else(|| invalid("the file carries no torus"))?;
            let dec = weight_decomposition(g.field(), g.dim(), &torus.ad_matrices())?;
            let spaces: Vec<_> = dec
                .weights
                .iter()
                .zip(dec.dims())
                .map(|(w, d)| json!({ "weight": w, "dim": d }))
                .collect();
            println!(
                "{}",
                pretty(&json!({
                    "algebra": g.name(),
                    "p": g.p(),
                    "torus_dim": torus.dim(),
                    "zero_weight_dim": dec.zero_weight_dim(),
                    "common_nonzero_dim": dec.common_nonzero_dim(),
                    "spaces": spaces,
                }))
            );
            Ok(0)
        }
        Command::Quotient {
            algebra,
            by,
            ideal,
            out,
        } => {
            let (g, _) = load(&algebra)?;
            let basis: Vec<FpVector> = match (by.as_deref(), ideal) {
                (Some("derived"), _) => derived_subalgebra(&g)?
                    .parent_embedding()
                    .expect("subalgebra")
                    .1
                    .to_vec(),
                (Some("center"), _) => center(&g)?
                    .parent_embedding()
                    .expect("subalgebra")
                    .1
                    .to_vec(),
                (Some(other), _) => {
                    return Err(invalid(format!(
                        "--by must be derived or center, not {other:?}"
                    )))
                }
                (None, Some(text)) => parse_rows(&text, g.dim())?
                    .into_iter()
                    .map(|row| vector(&g, row))
                    .collect::<Result<_>>()?,
                (None, None) => return Err(invalid("give --by or --ideal")),
            };
            let ideal = Ideal::new(&g, &basis)?;
            if !ideal.is_p_ideal() {
                return Err(invalid("the given subspace is not a p-ideal"));
            }
            let q = RealizedAlgebra::quotient(&ideal, format!("{}/n", g.name()))?;
            emit(out.as_deref(), &pretty(&algebra_to_json(&q, None)))?;
            eprintln!(
                "{} / ideal of dim {}: dim {}",
                g.name(),
                ideal.dim(),
                q.dim()
            );
            Ok(0)
        }
        Command::Module {
            module,
            density,
            lambda,
            out,
            seed,
        } => {
            if let Some(p) = density {
                let lambda = lambda.expect("clap requires lambda");
                if lambda >= p {
                    return Err(invalid(format!("lambda must lie in 0..{p}")));
                }
                let v = density_module(p, lambda).map_err(invalid)?;
                emit(
                    out.as_deref(),
                    &pretty(&module_to_json(&v, &format!("W(1)@{p}"))),
                )?;
                return Ok(0);
            }
            let path = module.ok_or_else(|| invalid("give a module file or --density"))?;
            let text =
                fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
            let json: ModuleJson = serde_json::from_str(&text).map_err(invalid)?;
            let spec: FamilySpec = json.algebra.parse().map_err(invalid)?;
            let g = build(spec)?;
            let v = module_from_json(&g, &json).map_err(invalid)?;
            let comp = composition_factors(&v, seed)?;
            emit(
                out.as_deref(),
                &pretty(&json!({
                    "algebra": json.algebra,
                    "dimV": v.dim(),
                    "factors": comp.dims,
                    "trivial": comp.trivial,
                    "sorted": comp.sorted_dims(),
                })),
            )?;
            Ok(0)
        }
        Command::VerifyPaper {
            p_list,
            max_n,
            report,
            seed,
        } => {
            for &p in &p_list {
                rla_core::PrimeField::new(p).map_err(invalid)?;
            }
            let cases = paper_cases(&p_list, max_n);
            let outcomes = cases.par_iter().map(|c| c.run(seed)).collect();
            let r = assemble(&p_list, max_n, seed, outcomes);
            for c in &r.claims {
                println!("{} {}", c.status.as_str(), c.claim);
            }
            for w in &r.warnings {
                eprintln!("warning: {w}");
            }
            println!(
                "{} claims, {} passed, {} failed",
                r.summary.total, r.summary.passed, r.summary.failed
            );
            if let Some(path) = report {
                fs::write(&path, format!("{}\n", pretty(&r)))
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            Ok(if r.all_pass() { 0 } else { 1 })
        }
    }
}
