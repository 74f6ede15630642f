//! Command-line front end.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::git::{analyze, is_stable, levi_reduction, restrict_point, FramedPoint};
use crate::io::{parse_instance, render_machine, render_text, Body, DirectionRow, GeneratorRow, Instance, InstanceBody, Report};
use crate::stokes::{
    build_scaffold, expected_dimension, grouped_directions, random_candidate, to_framed_point, verify_candidate,
    GeneratorKind,
};

#[derive(Parser, Debug)]
#[command(name = "wildcat", version, about = "Stability of twisted tuples and Stokes representations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Polystability and stability verdicts with certificates.
    Analyze(Common),
    /// Singular directions and Stokes patterns of each puncture.
    Directions(Common),
    /// Generators and surface relation.
    Scaffold(Common),
    /// Check the candidate against the Stokes conditions.
    Verify(Common),
    /// Decomposition into irreducible invariant blocks.
    Reduce(Common),
    /// A random candidate satisfying the Stokes conditions.
    Sample(Common),
}

#[derive(Args, Debug)]
pub struct Common {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Include wall-clock timings (makes output run-dependent).
    #[arg(long)]
    pub timings: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Machine,
}

/// Exit code and the text destined for stdout and stderr.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run_command<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let (stdout, stderr) = if e.use_stderr() { (String::new(), e.to_string()) } else { (e.to_string(), String::new()) };
            return Outcome { code, stdout, stderr };
        }
    };
    let (name, common) = match &cli.command {
        Command::Analyze(c) => ("analyze", c),
        Command::Directions(c) => ("directions", c),
        Command::Scaffold(c) => ("scaffold", c),
        Command::Verify(c) => ("verify", c),
        Command::Reduce(c) => ("reduce", c),
        Command::Sample(c) => ("sample", c),
    };
    let start = Instant::now();
    match execute(name, common) {
        Ok(mut report) => {
            if common.timings {
                report.timings = Some(BTreeMap::from([("total".to_string(), start.elapsed().as_millis() as u64)]));
            }
            let stdout = match common.format {
                Format::Text => render_text(&report),
                Format::Machine => render_machine(&report),
            };
            Outcome { code: if report.is_invalid_candidate() { 1 } else { 0 }, stdout, stderr: String::new() }
        }
        Err(e) => Outcome { code: 2, stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

fn report(name: &str, inst: &Instance, n: usize, seed: u64, body: Body) -> Report {
    Report { command: name.into(), field: inst.field, n, seed, body, timings: None }
}

fn needs_stokes(name: &str) -> Error {
    Error::Parse(format!("`{name}` needs a stokes instance"))
}

/// The framed point of the instance, or the violations of an invalid candidate.
fn framed_point(name: &str, inst: &Instance) -> Result<std::result::Result<FramedPoint, Vec<String>>> {
    match &inst.body {
        InstanceBody::Tuple(p) => Ok(Ok(p.clone())),
        InstanceBody::Stokes { surface, candidate } => {
            let c = candidate
                .as_ref()
                .ok_or_else(|| Error::Parse(format!("`{name}` on a stokes instance needs a \"candidate\"")))?;
            let sc = build_scaffold(surface)?;
            let v = verify_candidate(&sc, c)?;
            if !v.is_empty() {
                return Ok(Err(v.iter().map(ToString::to_string).collect()));
            }
            Ok(Ok(to_framed_point(&sc, c)?))
        }
    }
}

fn kind_name(k: &GeneratorKind) -> &'static str {
    match k {
        GeneratorKind::GenusA(_) => "genus-a",
        GeneratorKind::GenusB(_) => "genus-b",
        GeneratorKind::Connector(_) => "connector",
        GeneratorKind::Monodromy(_) => "formal-monodromy",
        GeneratorKind::Stokes { .. } => "stokes",
    }
}

fn one_based(p: &[(usize, usize)]) -> Vec<(usize, usize)> {
    p.iter().map(|(i, j)| (i + 1, j + 1)).collect()
}

fn execute(name: &str, c: &Common) -> Result<Report> {
    let inst = parse_instance(&c.instance)?;
    let seed = c.seed;
    match name {
        "analyze" | "reduce" => {
            let p = match framed_point(name, &inst)? {
                Ok(p) => p,
                Err(violations) => {
                    let n = match &inst.body {
                        InstanceBody::Stokes { surface, .. } => surface.n,
                        InstanceBody::Tuple(p) => p.n,
                    };
                    return Ok(report(name, &inst, n, seed, Body::Verification { violations }));
                }
            };
            let body = if name == "analyze" {
                Body::Analysis(analyze(&p, seed)?)
            } else {
                let blocks = levi_reduction(&p, seed)?;
                let block_stable = blocks
                    .iter()
                    .map(|b| Ok(is_stable(&restrict_point(&p, b)?, seed)?.stable))
                    .collect::<Result<_>>()?;
                Body::Reduction { blocks, block_stable }
            };
            Ok(report(name, &inst, p.n, seed, body))
        }
        "directions" => {
            let InstanceBody::Stokes { surface, .. } = &inst.body else { return Err(needs_stokes(name)) };
            let rows = surface
                .punctures
                .iter()
                .map(|cls| {
                    grouped_directions(cls)
                        .into_iter()
                        .map(|d| DirectionRow { theta: d.theta, pairs: one_based(&d.pairs), levels: d.levels })
                        .collect()
                })
                .collect();
            Ok(report(name, &inst, surface.n, seed, Body::Directions(rows)))
        }
        "scaffold" => {
            let InstanceBody::Stokes { surface, .. } = &inst.body else { return Err(needs_stokes(name)) };
            let sc = build_scaffold(surface)?;
            let generators = sc
                .generators
                .iter()
                .map(|g| GeneratorRow {
                    name: g.name.clone(),
                    kind: kind_name(&g.kind).into(),
                    theta: g.theta,
                    pattern: one_based(&g.pattern),
                })
                .collect();
            let body = Body::Scaffold { generators, relation: sc.relation_string(), expected_dimension: expected_dimension(&sc) };
            Ok(report(name, &inst, surface.n, seed, body))
        }
        "verify" => {
            let InstanceBody::Stokes { surface, candidate } = &inst.body else { return Err(needs_stokes(name)) };
            let cand = candidate.as_ref().ok_or_else(|| Error::Parse("`verify` needs a \"candidate\"".into()))?;
            let violations = verify_candidate(&build_scaffold(surface)?, cand)?.iter().map(ToString::to_string).collect();
            Ok(report(name, &inst, surface.n, seed, Body::Verification { violations }))
        }
        "sample" => {
            let InstanceBody::Stokes { surface, .. } = &inst.body else { return Err(needs_stokes(name)) };
            let cand = random_candidate(&build_scaffold(surface)?, seed)?;
            Ok(report(name, &inst, surface.n, seed, Body::Sample(cand)))
        }
        _ => unreachable!("clap restricts subcommands"),
    }
}
