use std::path::Path;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use toric_quiver::catalog::{self, CatalogEntry};
use toric_quiver::classification::classify_dimension;
use toric_quiver::compressed::{
    build_grobner_order, no_adjacent_singular_implies_deg2, singular_adjacency_check,
    verify_quadratic_gb,
};
use toric_quiver::flows::maximal_cells;
use toric_quiver::ideal::generation_degree;
use toric_quiver::polytope::{GeometryBudget, LatticePolytope};
use toric_quiver::Error;

#[derive(Parser, Debug)]
#[command(name = "tqc", version, about = "Toric ideals of quiver polytopes and compressed polytopes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Largest degree inspected by ideal computations.
    #[arg(long, global = true, default_value_t = 6)]
    max_degree: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads (0 uses all cores).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Node budget for lattice-point enumeration.
    #[arg(long, global = true, default_value_t = toric_quiver::enumerate::DEFAULT_BUDGET)]
    budget: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Lattice points, dimension, vertices, facets and smoothness.
    Polytope { input: String },
    /// Generation degree of the toric ideal.
    Ideal { input: String },
    /// Maximal cells of a quiver polytope with their generation degrees.
    Cells { input: String },
    /// Cells of cubic-graph placements up to integral-affine equivalence.
    Classify { dim: usize },
    /// Compressed analysis and quadratic Gröbner basis verification.
    Compressed { input: String },
    /// Prints a catalog entry in its input JSON format.
    Catalog { name: String },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

struct Failure {
    code: u8,
    err: anyhow::Error,
}

impl From<anyhow::Error> for Failure {
    fn from(err: anyhow::Error) -> Self {
        let code = match err.downcast_ref::<Error>() {
            Some(Error::EmptyPolytope) => 2,
            Some(Error::BudgetExceeded(_)) => 3,
            Some(Error::Verification(_)) => 4,
            _ => 1,
        };
        Failure { code, err }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        anyhow::Error::new(e).into()
    }
}

fn load(input: &str) -> anyhow::Result<CatalogEntry> {
    if let Some(name) = input.strip_prefix("catalog:") {
        return Ok(catalog::catalog(name)?);
    }
    let text = std::fs::read_to_string(Path::new(input)).with_context(|| format!("reading {input}"))?;
    Ok(catalog::parse_input_json(&text)?)
}

fn load_polytope(input: &str, budget: GeometryBudget) -> Result<LatticePolytope, Failure> {
    let p = load(input)?.polytope(budget)?.with_name(input);
    if p.is_empty() {
        return Err(Error::EmptyPolytope.into());
    }
    Ok(p)
}

fn emit<T: Serialize>(format: Format, value: &T, text: impl FnOnce() -> String) -> anyhow::Result<()> {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(value)?),
        Format::Text => print!("{}", text()),
    }
    Ok(())
}

fn cmd_polytope(cli: &Cli, input: &str, budget: GeometryBudget) -> Result<(), Failure> {
    let p = load_polytope(input, budget)?;
    let r = p.report()?;
    emit(cli.format, &r, || {
        let smooth = r.smooth.iter().filter(|&&s| s).count();
        let mut s = format!(
            "polytope {}\n  dimension {} in ambient dimension {}\n  {} lattice points, {} vertices ({} smooth, {} singular)\n  {} facets, compressed: {}\n",
            r.name,
            r.dimension,
            r.ambient_dim,
            r.num_points,
            r.vertices.len(),
            smooth,
            r.vertices.len() - smooth,
            r.facets.len(),
            r.compressed
        );
        for (v, sm) in r.vertices.iter().zip(&r.smooth) {
            s += &format!("  vertex {:?} {}\n", r.points[*v], if *sm { "smooth" } else { "singular" });
        }
        s
    })?;
    Ok(())
}

fn cmd_ideal(cli: &Cli, input: &str, budget: GeometryBudget) -> Result<(), Failure> {
    let p = load_polytope(input, budget)?;
    let r = generation_degree(&p, cli.max_degree, budget.nodes)?;
    emit(cli.format, &r, || {
        let mut s = format!(
            "generation degree {} (checked to degree {}, {})\n",
            r.generation_degree,
            r.degree_checked,
            if r.conclusive { "conclusive" } else { "not conclusive" }
        );
        if let Some(l) = &r.license {
            s += &format!("  justification: {l}\n");
        }
        for w in &r.witnesses {
            s += &format!("  degree-{} relation {:?} = {:?}\n", w.degree, w.left, w.right);
        }
        s
    })?;
    Ok(())
}

fn cmd_cells(cli: &Cli, input: &str, budget: GeometryBudget) -> Result<(), Failure> {
    let CatalogEntry::Quiver { quiver, weight } = load(input)? else {
        return Err(anyhow!("cells need a quiver input").into());
    };
    let cells = maximal_cells(&quiver, &weight, budget.nodes)?;
    let mut rows = Vec::new();
    for (k, pts) in &cells {
        let p = LatticePolytope::from_quiver_cell(&quiver, &weight, k, budget)?;
        let g = generation_degree(&p, cli.max_degree.max(3), budget.nodes)?;
        rows.push(json!({
            "cell": k.0,
            "num_points": pts.len(),
            "dimension": p.dimension()?,
            "generation_degree": g.generation_degree,
            "conclusive": g.conclusive,
        }));
    }
    let out = json!({ "input": input, "cells": rows });
    emit(cli.format, &out, || {
        let mut s = format!("{} maximal cells\n", rows.len());
        for r in &rows {
            s += &format!(
                "  cell {} : {} points, generation degree {}\n",
                r["cell"], r["num_points"], r["generation_degree"]
            );
        }
        s
    })?;
    Ok(())
}

fn cmd_classify(cli: &Cli, dim: usize, budget: GeometryBudget) -> Result<(), Failure> {
    let r = classify_dimension(dim, budget)?;
    emit(cli.format, &r, || {
        let mut s = format!("dimension {}: {} distinct classes\n", r.dim, r.distinct.len());
        for rep in &r.reports {
            s += &format!(
                "  {}: {} placements, {} classes, {} lower-dimensional\n",
                rep.graph,
                rep.placements.len(),
                rep.classes.len(),
                rep.lower_dimensional.len()
            );
            for c in &rep.classes {
                let kind = if c.birkhoff {
                    "Birkhoff B3"
                } else if c.unimodular_simplex {
                    "unimodular simplex"
                } else {
                    "other"
                };
                s += &format!(
                    "    class of placement {} ({} members): {} points, {}, generation degree {}\n",
                    c.representative,
                    c.members.len(),
                    c.num_points,
                    kind,
                    c.generation_degree
                );
            }
        }
        s
    })?;
    Ok(())
}

fn cmd_compressed(cli: &Cli, input: &str, budget: GeometryBudget) -> Result<(), Failure> {
    let p = load_polytope(input, budget)?;
    let compressed = p.is_compressed()?;
    let mut out = json!({ "input": input, "compressed": compressed });
    let mut contradiction = None;
    if compressed {
        let adj = singular_adjacency_check(&p)?;
        let deg2 = no_adjacent_singular_implies_deg2(&p, cli.max_degree.max(3), budget.nodes)?;
        let gen = generation_degree(&p, cli.max_degree.max(3), budget.nodes)?;
        out["singular_adjacency"] = serde_json::to_value(&adj).map_err(anyhow::Error::from)?;
        out["degree_two_check"] = serde_json::to_value(&deg2).map_err(anyhow::Error::from)?;
        out["generation"] = serde_json::to_value(&gen).map_err(anyhow::Error::from)?;
        if !deg2.pass {
            contradiction = Some("no adjacent singular vertices but generators above degree two");
        }
        if adj.singular.len() <= 1 {
            let order = build_grobner_order(&p)?;
            let gb = verify_quadratic_gb(&p, &order, cli.max_degree, budget.nodes)?;
            if !gb.verified {
                contradiction = Some("quadratic Gröbner basis failed the standard-monomial count");
            }
            out["grobner"] = serde_json::to_value(&gb).map_err(anyhow::Error::from)?;
        }
    }
    emit(cli.format, &out, || compressed_text(&out))?;
    match contradiction {
        Some(m) => Err(Error::Verification(m.into()).into()),
        None => Ok(()),
    }
}

fn compressed_text(out: &Value) -> String {
    let mut s = format!("compressed: {}\n", out["compressed"]);
    if let Some(adj) = out.get("singular_adjacency") {
        let pairs = adj["adjacent_pairs"].as_array().map_or(0, Vec::len);
        s += &format!(
            "  singular vertices: {}, adjacent singular pairs: {}\n",
            adj["singular"].as_array().map_or(0, Vec::len),
            pairs
        );
        s += &format!("  generation degree: {}\n", out["generation"]["generation_degree"]);
        if let Some(w) = out["generation"]["witnesses"].as_array().and_then(|w| w.first()) {
            s += &format!("  witness of degree {}: {} = {}\n", w["degree"], w["left"], w["right"]);
        }
    }
    if let Some(gb) = out.get("grobner") {
        s += &format!(
            "  quadratic Gröbner basis: {} generators, verified: {} (to degree {})\n",
            gb["generators"].as_array().map_or(0, Vec::len),
            gb["verified"],
            gb["verified_to_degree"]
        );
    }
    s
}

fn cmd_catalog(cli: &Cli, name: &str) -> Result<(), Failure> {
    let entry = catalog::catalog(name.strip_prefix("catalog:").unwrap_or(name))?;
    let v = entry.to_json();
    emit(cli.format, &v, || format!("{}\n", serde_json::to_string_pretty(&v).unwrap_or_default()))?;
    Ok(())
}

fn run(cli: &Cli) -> Result<(), Failure> {
    if cli.budget == 0 {
        return Err(anyhow!("budget must be positive").into());
    }
    let budget = GeometryBudget {
        nodes: cli.budget,
        ..GeometryBudget::default()
    };
    let needs_degree = matches!(cli.command, Command::Ideal { .. });
    if needs_degree && cli.max_degree < 3 {
        return Err(anyhow!("--max-degree must be at least 3").into());
    }
    match &cli.command {
        Command::Polytope { input } => cmd_polytope(cli, input, budget),
        Command::Ideal { input } => cmd_ideal(cli, input, budget),
        Command::Cells { input } => cmd_cells(cli, input, budget),
        Command::Classify { dim } => cmd_classify(cli, *dim, budget),
        Command::Compressed { input } => cmd_compressed(cli, input, budget),
        Command::Catalog { name } => cmd_catalog(cli, name),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.err);
            ExitCode::from(f.code)
        }
    }
}
