//! Command results as text or as a JSON document that parses back to the same value.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_rational::BigRational;
use serde_json::{json, Map, Value};

use super::instance::{matrix_json, scalar_from_json, vector_json};
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::git::StabilityReport;
use crate::linalg::{Matrix, Subspace};
use crate::stokes::RepCandidate;

#[derive(Clone, Debug, PartialEq)]
pub struct DirectionRow {
    pub theta: f64,
    /// 1-based sheet labels `(i, j)`.
    pub pairs: Vec<(usize, usize)>,
    pub levels: Vec<BigRational>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorRow {
    pub name: String,
    pub kind: String,
    pub theta: Option<f64>,
    pub pattern: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Body {
    Analysis(StabilityReport),
    Directions(Vec<Vec<DirectionRow>>),
    Scaffold { generators: Vec<GeneratorRow>, relation: String, expected_dimension: i64 },
    Verification { violations: Vec<String> },
    Reduction { blocks: Vec<Subspace>, block_stable: Vec<bool> },
    Sample(RepCandidate),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub command: String,
    pub field: u32,
    pub n: usize,
    pub seed: u64,
    pub body: Body,
    /// Wall-clock milliseconds per phase, only when requested.
    pub timings: Option<BTreeMap<String, u64>>,
}

impl Report {
    /// True when the report is the verdict "invalid candidate".
    pub fn is_invalid_candidate(&self) -> bool {
        matches!(&self.body, Body::Verification { violations } if !violations.is_empty())
    }
}

fn subspace_json(s: &Subspace, field: u32) -> Value {
    Value::Array(s.basis().iter().map(|b| vector_json(b, field)).collect())
}

fn pairs_json(p: &[(usize, usize)]) -> Value {
    Value::Array(p.iter().map(|(i, j)| json!([i, j])).collect())
}

fn opt<T>(x: &Option<T>, f: impl Fn(&T) -> Value) -> Value {
    x.as_ref().map_or(Value::Null, f)
}

pub fn to_json(r: &Report) -> Value {
    let f = r.field;
    let mut doc = Map::new();
    doc.insert("command".into(), json!(r.command));
    doc.insert("field".into(), json!(f));
    doc.insert("n".into(), json!(r.n));
    doc.insert("seed".into(), json!(r.seed));
    if let Some(t) = &r.timings {
        doc.insert("timings_ms".into(), json!(t));
    }
    let body = match &r.body {
        Body::Analysis(s) => json!({
            "polystable": s.polystable,
            "stable": s.stable,
            "radical_witness": opt(&s.radical_witness, |m| matrix_json(m, f)),
            "invariant_subspace_witness": opt(&s.invariant_subspace_witness, |u| subspace_json(u, f)),
            "stabilizer_dim": s.stabilizer_dim,
            "kernel_dim": s.kernel_dim,
            "levi_decomposition": opt(&s.levi_decomposition, |l| Value::Array(l.iter().map(|u| subspace_json(u, f)).collect())),
            "algebra_dim": s.algebra_dim,
            "module_dim": s.module_dim,
        }),
        Body::Directions(ps) => Value::Array(
            ps.iter()
                .map(|rows| {
                    Value::Array(
                        rows.iter()
                            .map(|d| {
                                json!({
                                    "theta": d.theta,
                                    "pairs": pairs_json(&d.pairs),
                                    "levels": d.levels.iter().map(Scalar::rational_string).collect::<Vec<_>>(),
                                })
                            })
                            .collect(),
                    )
                })
                .collect(),
        ),
        Body::Scaffold { generators, relation, expected_dimension } => json!({
            "generators": generators.iter().map(|g| json!({
                "name": g.name,
                "kind": g.kind,
                "theta": g.theta,
                "pattern": pairs_json(&g.pattern),
            })).collect::<Vec<_>>(),
            "relation": relation,
            "expected_dimension": expected_dimension,
        }),
        Body::Verification { violations } => json!({ "valid": violations.is_empty(), "violations": violations }),
        Body::Reduction { blocks, block_stable } => json!({
            "blocks": blocks.iter().map(|b| subspace_json(b, f)).collect::<Vec<_>>(),
            "block_stable": block_stable,
        }),
        Body::Sample(c) => Value::Object(c.iter().map(|(k, m)| (k.clone(), matrix_json(m, f))).collect()),
    };
    doc.insert(body_key(&r.body).into(), body);
    Value::Object(doc)
}

fn body_key(b: &Body) -> &'static str {
    match b {
        Body::Analysis(_) => "analysis",
        Body::Directions(_) => "directions",
        Body::Scaffold { .. } => "scaffold",
        Body::Verification { .. } => "verification",
        Body::Reduction { .. } => "reduction",
        Body::Sample(_) => "candidate",
    }
}

pub fn render_machine(r: &Report) -> String {
    let mut s = serde_json::to_string_pretty(&to_json(r)).expect("serializable");
    s.push('\n');
    s
}

fn bad(msg: &str) -> Error {
    Error::Parse(format!("report: {msg}"))
}

struct Decoder {
    field: u32,
    n: usize,
}

impl Decoder {
    fn vector(&self, v: &Value, len: usize) -> Result<Vec<Scalar>> {
        let a = v.as_array().filter(|a| a.len() == len).ok_or_else(|| bad("vector length"))?;
        a.iter().map(|x| scalar_from_json(x, self.field)).collect()
    }

    fn matrix(&self, v: &Value, size: usize) -> Result<Matrix> {
        let rows = v.as_array().filter(|a| a.len() == size).ok_or_else(|| bad("matrix shape"))?;
        Ok(Matrix::from_rows(rows.iter().map(|r| self.vector(r, size)).collect::<Result<_>>()?))
    }

    fn subspace(&self, v: &Value) -> Result<Subspace> {
        let rows = v.as_array().ok_or_else(|| bad("subspace"))?;
        let basis: Vec<Vec<Scalar>> = rows.iter().map(|r| self.vector(r, self.n)).collect::<Result<_>>()?;
        Ok(Subspace::span(self.n, &basis))
    }
}

fn nat(v: &Value, key: &str) -> Result<usize> {
    v.get(key).and_then(Value::as_u64).map(|x| x as usize).ok_or_else(|| bad(key))
}

fn pairs(v: &Value) -> Result<Vec<(usize, usize)>> {
    v.as_array()
        .ok_or_else(|| bad("pairs"))?
        .iter()
        .map(|p| {
            let a = p.as_array().filter(|a| a.len() == 2).ok_or_else(|| bad("pair"))?;
            Ok((a[0].as_u64().ok_or_else(|| bad("pair"))? as usize, a[1].as_u64().ok_or_else(|| bad("pair"))? as usize))
        })
        .collect()
}

pub fn from_json(v: &Value) -> Result<Report> {
    let field = nat(v, "field")? as u32;
    let n = nat(v, "n")?;
    let seed = v.get("seed").and_then(Value::as_u64).ok_or_else(|| bad("seed"))?;
    let command = v.get("command").and_then(Value::as_str).ok_or_else(|| bad("command"))?.to_string();
    let timings = match v.get("timings_ms") {
        None => None,
        Some(t) => Some(serde_json::from_value(t.clone()).map_err(|_| bad("timings_ms"))?),
    };
    let d = Decoder { field, n };
    let body = if let Some(a) = v.get("analysis") {
        let module_dim = nat(a, "module_dim")?;
        let b = |k: &str| a.get(k).and_then(Value::as_bool).ok_or_else(|| bad(k));
        let radical_witness = match a.get("radical_witness") {
            Some(Value::Null) | None => None,
            Some(m) => Some(d.matrix(m, module_dim)?),
        };
        let invariant_subspace_witness = match a.get("invariant_subspace_witness") {
            Some(Value::Null) | None => None,
            Some(u) => Some(d.subspace(u)?),
        };
        let levi_decomposition = match a.get("levi_decomposition") {
            Some(Value::Null) | None => None,
            Some(l) => Some(l.as_array().ok_or_else(|| bad("levi"))?.iter().map(|u| d.subspace(u)).collect::<Result<_>>()?),
        };
        Body::Analysis(StabilityReport {
            polystable: b("polystable")?,
            stable: b("stable")?,
            radical_witness,
            invariant_subspace_witness,
            stabilizer_dim: nat(a, "stabilizer_dim")?,
            kernel_dim: nat(a, "kernel_dim")?,
            levi_decomposition,
            algebra_dim: nat(a, "algebra_dim")?,
            module_dim,
        })
    } else if let Some(ps) = v.get("directions") {
        let ps = ps.as_array().ok_or_else(|| bad("directions"))?;
        Body::Directions(
            ps.iter()
                .map(|rows| {
                    rows.as_array()
                        .ok_or_else(|| bad("directions"))?
                        .iter()
                        .map(|r| {
                            let levels = r
                                .get("levels")
                                .and_then(Value::as_array)
                                .ok_or_else(|| bad("levels"))?
                                .iter()
                                .map(|l| {
                                    let s = l.as_str().ok_or_else(|| bad("level"))?;
                                    Scalar::parse_rational(s)?.as_rational().cloned().ok_or_else(|| bad("level"))
                                })
                                .collect::<Result<_>>()?;
                            Ok(DirectionRow {
                                theta: r.get("theta").and_then(Value::as_f64).ok_or_else(|| bad("theta"))?,
                                pairs: pairs(r.get("pairs").ok_or_else(|| bad("pairs"))?)?,
                                levels,
                            })
                        })
                        .collect()
                })
                .collect::<Result<_>>()?,
        )
    } else if let Some(s) = v.get("scaffold") {
        let generators = s
            .get("generators")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("generators"))?
            .iter()
            .map(|g| {
                Ok(GeneratorRow {
                    name: g.get("name").and_then(Value::as_str).ok_or_else(|| bad("name"))?.into(),
                    kind: g.get("kind").and_then(Value::as_str).ok_or_else(|| bad("kind"))?.into(),
                    theta: g.get("theta").and_then(Value::as_f64),
                    pattern: pairs(g.get("pattern").ok_or_else(|| bad("pattern"))?)?,
                })
            })
            .collect::<Result<_>>()?;
        Body::Scaffold {
            generators,
            relation: s.get("relation").and_then(Value::as_str).ok_or_else(|| bad("relation"))?.into(),
            expected_dimension: s.get("expected_dimension").and_then(Value::as_i64).ok_or_else(|| bad("dimension"))?,
        }
    } else if let Some(s) = v.get("verification") {
        let violations = s
            .get("violations")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("violations"))?
            .iter()
            .map(|x| x.as_str().map(String::from).ok_or_else(|| bad("violation")))
            .collect::<Result<_>>()?;
        Body::Verification { violations }
    } else if let Some(s) = v.get("reduction") {
        let blocks = s
            .get("blocks")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("blocks"))?
            .iter()
            .map(|b| d.subspace(b))
            .collect::<Result<_>>()?;
        let block_stable = s
            .get("block_stable")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("block_stable"))?
            .iter()
            .map(|b| b.as_bool().ok_or_else(|| bad("block_stable")))
            .collect::<Result<_>>()?;
        Body::Reduction { blocks, block_stable }
    } else if let Some(c) = v.get("candidate").and_then(Value::as_object) {
        Body::Sample(c.iter().map(|(k, m)| Ok((k.clone(), d.matrix(m, n)?))).collect::<Result<_>>()?)
    } else {
        return Err(bad("no result section"));
    };
    Ok(Report { command, field, n, seed, body, timings })
}

pub fn parse_machine(text: &str) -> Result<Report> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(format!("report: {e}")))?;
    from_json(&v)
}

fn fmt_matrix(m: &Matrix, indent: &str) -> String {
    m.row_vectors()
        .iter()
        .map(|r| format!("{indent}[{}]", r.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")))
        .collect::<Vec<_>>()
        .join("\n")
}

fn fmt_subspace(s: &Subspace) -> String {
    let vs: Vec<String> = s
        .basis()
        .iter()
        .map(|b| format!("({})", b.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")))
        .collect();
    format!("span{{{}}}", vs.join(", "))
}

fn fmt_pairs(p: &[(usize, usize)]) -> String {
    p.iter().map(|(i, j)| format!("({i},{j})")).collect::<Vec<_>>().join(" ")
}

pub fn render_text(r: &Report) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{} (n = {}, field Q(z{}), seed {})", r.command, r.n, r.field, r.seed);
    match &r.body {
        Body::Analysis(a) => {
            let _ = writeln!(s, "polystable: {}", a.polystable);
            let _ = writeln!(s, "stable: {}", a.stable);
            let _ = writeln!(s, "algebra dimension: {} (acting on dimension {})", a.algebra_dim, a.module_dim);
            let _ = writeln!(s, "stabilizer dimension: {}", a.stabilizer_dim);
            let _ = writeln!(s, "kernel dimension: {}", a.kernel_dim);
            if let Some(w) = &a.radical_witness {
                let _ = writeln!(s, "radical witness:\n{}", fmt_matrix(w, "  "));
            }
            if let Some(u) = &a.invariant_subspace_witness {
                let _ = writeln!(s, "invariant subspace: {}", fmt_subspace(u));
            }
            if let Some(l) = &a.levi_decomposition {
                let _ = writeln!(s, "levi decomposition:");
                for b in l {
                    let _ = writeln!(s, "  {}", fmt_subspace(b));
                }
            }
        }
        Body::Directions(ps) => {
            for (i, rows) in ps.iter().enumerate() {
                let _ = writeln!(s, "puncture {}:", i + 1);
                if rows.is_empty() {
                    let _ = writeln!(s, "  no singular directions");
                }
                for d in rows {
                    let levels: Vec<String> = d.levels.iter().map(Scalar::rational_string).collect();
                    let _ = writeln!(
                        s,
                        "  theta = {:.12}  pairs {}  levels {}",
                        d.theta,
                        fmt_pairs(&d.pairs),
                        levels.join(" ")
                    );
                }
            }
        }
        Body::Scaffold { generators, relation, expected_dimension } => {
            let _ = writeln!(s, "generators:");
            for g in generators {
                let _ = write!(s, "  {} ({})", g.name, g.kind);
                if let Some(t) = g.theta {
                    let _ = write!(s, " theta = {t:.12} pattern {}", fmt_pairs(&g.pattern));
                }
                s.push('\n');
            }
            let _ = writeln!(s, "relation: {relation}");
            let _ = writeln!(s, "expected dimension: {expected_dimension}");
        }
        Body::Verification { violations } => {
            if violations.is_empty() {
                let _ = writeln!(s, "candidate is valid");
            } else {
                let _ = writeln!(s, "invalid candidate:");
                for v in violations {
                    let _ = writeln!(s, "  {v}");
                }
            }
        }
        Body::Reduction { blocks, block_stable } => {
            let _ = writeln!(s, "blocks:");
            for (b, st) in blocks.iter().zip(block_stable) {
                let _ = writeln!(s, "  dim {} stable {}: {}", b.dim(), st, fmt_subspace(b));
            }
        }
        Body::Sample(c) => {
            for (k, m) in c {
                let _ = writeln!(s, "{k}:\n{}", fmt_matrix(m, "  "));
            }
        }
    }
    if let Some(t) = &r.timings {
        for (k, ms) in t {
            let _ = writeln!(s, "time {k}: {ms} ms");
        }
    }
    s
}
