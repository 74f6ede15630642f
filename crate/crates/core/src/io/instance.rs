//! JSON instance documents: framed tuples or wild surfaces with an optional candidate.

use std::path::Path;

use num_rational::BigRational;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result, SchemaIssue};
use crate::field::{totient, Scalar};
use crate::git::FramedPoint;
use crate::linalg::{Grading, GradingPiece, Matrix};
use crate::stokes::{Circle, IrregularClass, RepCandidate, WildSurface};
use crate::twist::{Automorphism, Outer, TwistedElement};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InstanceBody {
    Tuple(FramedPoint),
    Stokes { surface: WildSurface, candidate: Option<RepCandidate> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    /// Conductor `m` of the scalar field `Q(ζ_m)`.
    pub field: u32,
    pub body: InstanceBody,
}

#[derive(Clone, Debug)]
enum Seg {
    Key(String),
    Index(usize),
}

struct Reader<'a> {
    text: &'a str,
    field: u32,
    issues: Vec<SchemaIssue>,
}

fn render_path(path: &[Seg]) -> String {
    let mut s = String::from("$");
    for p in path {
        match p {
            Seg::Key(k) => {
                s.push('.');
                s.push_str(k);
            }
            Seg::Index(i) => s.push_str(&format!("[{i}]")),
        }
    }
    s
}

fn with(path: &[Seg], seg: Seg) -> Vec<Seg> {
    let mut p = path.to_vec();
    p.push(seg);
    p
}

impl Reader<'_> {
    /// Line of the innermost key on the path, found by scanning keys in order.
    fn line_of(&self, path: &[Seg]) -> usize {
        let mut pos = 0;
        for seg in path {
            if let Seg::Key(k) = seg {
                if let Some(off) = self.text[pos..].find(&format!("\"{k}\"")) {
                    pos += off;
                }
            }
        }
        self.text[..pos].matches('\n').count() + 1
    }

    fn issue(&mut self, path: &[Seg], message: impl Into<String>) {
        let line = self.line_of(path);
        self.issues.push(SchemaIssue { path: render_path(path), line, message: message.into() });
    }

    fn get<'v>(&mut self, obj: &'v Value, path: &[Seg], key: &str, required: bool) -> Option<&'v Value> {
        let v = obj.get(key);
        if v.is_none() && required {
            self.issue(path, format!("missing key \"{key}\""));
        }
        v
    }

    /// Applies `f` to every element so that all issues are reported, not just the first.
    fn each<T>(&mut self, a: &[Value], path: &[Seg], mut f: impl FnMut(&mut Self, &Value, &[Seg]) -> Option<T>) -> Option<Vec<T>> {
        let out: Vec<Option<T>> = a.iter().enumerate().map(|(i, v)| f(self, v, &with(path, Seg::Index(i)))).collect();
        out.into_iter().collect()
    }

    fn nat(&mut self, v: &Value, path: &[Seg]) -> Option<usize> {
        match v.as_u64() {
            Some(x) => Some(x as usize),
            None => {
                self.issue(path, "expected a natural number");
                None
            }
        }
    }

    fn array<'v>(&mut self, v: &'v Value, path: &[Seg]) -> Option<&'v Vec<Value>> {
        let a = v.as_array();
        if a.is_none() {
            self.issue(path, "expected an array");
        }
        a
    }

    fn rational(&mut self, v: &Value, path: &[Seg]) -> Option<BigRational> {
        let parsed = match v {
            Value::String(s) => Scalar::parse_rational(s).ok().and_then(|x| x.as_rational().cloned()),
            Value::Number(n) => n.as_i64().map(|i| BigRational::from_integer(i.into())),
            _ => None,
        };
        if parsed.is_none() {
            self.issue(path, "expected an exact rational such as \"-3/7\"");
        }
        parsed
    }

    fn scalar(&mut self, v: &Value, path: &[Seg]) -> Option<Scalar> {
        if let Value::Array(cs) = v {
            let phi = totient(self.field) as usize;
            if cs.len() != phi {
                self.issue(path, format!("cyclotomic scalar needs {phi} coefficients for field {}", self.field));
                return None;
            }
            let coeffs: Option<Vec<BigRational>> =
                cs.iter().enumerate().map(|(i, c)| self.rational(c, &with(path, Seg::Index(i)))).collect();
            return Some(Scalar::from_poly(self.field, coeffs?));
        }
        self.rational(v, path).map(Scalar::from_rational)
    }

    fn vector(&mut self, v: &Value, path: &[Seg], n: usize) -> Option<Vec<Scalar>> {
        let a = self.array(v, path)?;
        if a.len() != n {
            self.issue(path, format!("expected a vector of length {n}, got {}", a.len()));
            return None;
        }
        a.iter().enumerate().map(|(i, x)| self.scalar(x, &with(path, Seg::Index(i)))).collect()
    }

    fn matrix(&mut self, v: &Value, path: &[Seg], n: usize) -> Option<Matrix> {
        let rows = self.array(v, path)?;
        let shape_ok = rows.len() == n && rows.iter().all(|r| r.as_array().is_some_and(|r| r.len() == n));
        if !shape_ok {
            let cols = rows.first().and_then(Value::as_array).map_or(0, Vec::len);
            self.issue(path, format!("expected a square {n}x{n} matrix, got {}x{cols}", rows.len()));
            return None;
        }
        let data: Option<Vec<Vec<Scalar>>> =
            rows.iter().enumerate().map(|(i, r)| self.vector(r, &with(path, Seg::Index(i)), n)).collect();
        Some(Matrix::from_rows(data?))
    }

    fn invertible(&mut self, v: &Value, path: &[Seg], n: usize) -> Option<Matrix> {
        let m = self.matrix(v, path, n)?;
        if m.inverse().is_none() {
            self.issue(path, "matrix must be invertible");
            return None;
        }
        Some(m)
    }

    fn grading(&mut self, v: &Value, path: &[Seg], n: usize) -> Option<Grading> {
        let pieces = self.array(v, path)?;
        let mut out = Vec::new();
        for (i, p) in pieces.iter().enumerate() {
            let pp = with(path, Seg::Index(i));
            let w = self.get(p, &pp, "weight", true).and_then(|w| {
                let a = w.as_array()?;
                a.iter().map(Value::as_i64).collect::<Option<Vec<i64>>>()
            });
            let b = self.get(p, &pp, "basis", true).and_then(|b| {
                let bp = with(&pp, Seg::Key("basis".into()));
                let a = self.array(b, &bp)?;
                a.iter().enumerate().map(|(k, x)| self.vector(x, &with(&bp, Seg::Index(k)), n)).collect()
            });
            if p.get("weight").is_some() && w.is_none() {
                self.issue(&with(&pp, Seg::Key("weight".into())), "expected a list of integers");
            }
            out.push(GradingPiece { weight: w?, basis: b? });
        }
        let g = Grading { ambient_dim: n, pieces: out };
        if let Err(e) = g.validate() {
            self.issue(path, e.to_string());
            return None;
        }
        Some(g)
    }

    fn tuple(&mut self, doc: &Value) -> Option<FramedPoint> {
        let root: Vec<Seg> = Vec::new();
        let n = self.get(doc, &root, "n", true).and_then(|v| self.nat(v, &[Seg::Key("n".into())]))?;
        let gp = vec![Seg::Key("gradings".into())];
        let gradings = match doc.get("gradings") {
            None => Some(vec![Grading::trivial(n)]),
            Some(v) => self.array(v, &gp).cloned().and_then(|a| {
                self.each(&a, &gp, |r, g, p| r.grading(g, p, n))
            }),
        };
        let cp = vec![Seg::Key("connectors".into())];
        let connectors = match doc.get("connectors") {
            None => Some(Vec::new()),
            Some(v) => self.array(v, &cp).cloned().and_then(|a| {
                self.each(&a, &cp, |r, c, p| r.invertible(c, p, n))
            }),
        };
        let lp = vec![Seg::Key("loops".into())];
        let loops = match doc.get("loops") {
            None => Some(Vec::new()),
            Some(v) => self.array(v, &lp).cloned().and_then(|a| {
                self.each(&a, &lp, |r, l, p| r.twisted(l, p, n))
            }),
        };
        let (gradings, connectors, loops) = (gradings?, connectors?, loops?);
        match FramedPoint::new(n, gradings, connectors, loops) {
            Ok(p) => Some(p),
            Err(e) => {
                self.issue(&root, e.to_string());
                None
            }
        }
    }

    fn twisted(&mut self, v: &Value, path: &[Seg], n: usize) -> Option<TwistedElement> {
        let g = self
            .get(v, path, "g", true)
            .and_then(|g| self.invertible(g, &with(path, Seg::Key("g".into())), n));
        let inner = match v.get("inner") {
            None => Some(Matrix::identity(n)),
            Some(m) => self.invertible(m, &with(path, Seg::Key("inner".into())), n),
        };
        let outer = match v.get("outer").map(Value::as_str) {
            None | Some(Some("identity")) => Some(Outer::Identity),
            Some(Some("sigma")) => Some(Outer::Sigma),
            _ => {
                self.issue(&with(path, Seg::Key("outer".into())), "expected \"identity\" or \"sigma\"");
                None
            }
        };
        let phi = Automorphism::new(inner?, outer?).ok()?;
        TwistedElement::new(g?, phi).ok()
    }

    fn circle(&mut self, v: &Value, path: &[Seg]) -> Option<Circle> {
        let ram = self
            .get(v, path, "ram", true)
            .and_then(|r| self.nat(r, &with(path, Seg::Key("ram".into()))));
        let mult = match v.get("multiplicity") {
            None => Some(1),
            Some(m) => self.nat(m, &with(path, Seg::Key("multiplicity".into()))),
        };
        let cp = with(path, Seg::Key("coeffs".into()));
        let coeffs = match v.get("coeffs") {
            None => Some(Vec::new()),
            Some(c) => self.array(c, &cp).cloned().and_then(|a| {
                a.iter()
                    .enumerate()
                    .map(|(i, t)| {
                        let tp = with(&cp, Seg::Index(i));
                        let pair = t.as_array().filter(|p| p.len() == 2);
                        let Some(pair) = pair else {
                            self.issue(&tp, "expected [exponent, coefficient]");
                            return None;
                        };
                        let j = self.nat(&pair[0], &with(&tp, Seg::Index(0)))?;
                        let a = self.scalar(&pair[1], &with(&tp, Seg::Index(1)))?;
                        Some((j as u32, a))
                    })
                    .collect()
            }),
        };
        match Circle::new(ram? as u32, coeffs?, mult?) {
            Ok(c) => Some(c),
            Err(e) => {
                self.issue(path, e.to_string());
                None
            }
        }
    }

    fn stokes(&mut self, doc: &Value) -> Option<(WildSurface, Option<RepCandidate>)> {
        let root: Vec<Seg> = Vec::new();
        let n = self.get(doc, &root, "n", true).and_then(|v| self.nat(v, &[Seg::Key("n".into())]));
        let genus = match doc.get("genus") {
            None => Some(0),
            Some(g) => self.nat(g, &[Seg::Key("genus".into())]),
        };
        let pp = vec![Seg::Key("punctures".into())];
        let punctures: Option<Vec<IrregularClass>> = self
            .get(doc, &root, "punctures", true)
            .and_then(|p| self.array(p, &pp).cloned())
            .and_then(|a| {
                a.iter()
                    .enumerate()
                    .map(|(i, p)| {
                        let ip = with(&pp, Seg::Index(i));
                        let cp = with(&ip, Seg::Key("circles".into()));
                        let circles = self.get(p, &ip, "circles", true).and_then(|c| self.array(c, &cp).cloned())?;
                        let circles: Option<Vec<Circle>> = circles
                            .iter()
                            .enumerate()
                            .map(|(k, c)| self.circle(c, &with(&cp, Seg::Index(k))))
                            .collect();
                        match IrregularClass::new(circles?) {
                            Ok(c) => Some(c),
                            Err(e) => {
                                self.issue(&ip, e.to_string());
                                None
                            }
                        }
                    })
                    .collect()
            });
        let (n, genus, punctures) = (n?, genus?, punctures?);
        let surface = match WildSurface::new(genus, punctures, n) {
            Ok(s) => s,
            Err(e) => {
                self.issue(&root, e.to_string());
                return None;
            }
        };
        let kp = vec![Seg::Key("candidate".into())];
        let candidate = match doc.get("candidate") {
            None => None,
            Some(Value::Object(map)) => {
                let mut c = RepCandidate::new();
                for (k, v) in map {
                    c.insert(k.clone(), self.matrix(v, &with(&kp, Seg::Key(k.clone())), n)?);
                }
                Some(c)
            }
            Some(_) => {
                self.issue(&kp, "expected an object mapping generator names to matrices");
                return None;
            }
        };
        Some((surface, candidate))
    }
}

/// Parses and validates an instance document.
pub fn parse_instance_str(text: &str) -> Result<Instance> {
    let doc: Value = serde_json::from_str(text).map_err(|e| {
        Error::Schema(vec![SchemaIssue { path: "$".into(), line: e.line(), message: format!("malformed JSON: {e}") }])
    })?;
    let mut r = Reader { text, field: 1, issues: Vec::new() };
    if !doc.is_object() {
        r.issue(&[], "expected a JSON object");
        return Err(Error::Schema(r.issues));
    }
    let field = r.get(&doc, &[], "field", true).and_then(|f| r.nat(f, &[Seg::Key("field".into())]));
    let Some(field) = field.filter(|&f| f >= 1) else {
        if field.is_some() {
            r.issue(&[Seg::Key("field".into())], "conductor must be at least 1");
        }
        return Err(Error::Schema(r.issues));
    };
    r.field = field as u32;
    let body = match doc.get("mode").and_then(Value::as_str) {
        Some("tuple") => r.tuple(&doc).map(InstanceBody::Tuple),
        Some("stokes") => r.stokes(&doc).map(|(surface, candidate)| InstanceBody::Stokes { surface, candidate }),
        _ => {
            r.issue(&[Seg::Key("mode".into())], "mode must be \"tuple\" or \"stokes\"");
            None
        }
    };
    match body {
        Some(body) if r.issues.is_empty() => Ok(Instance { field: r.field, body }),
        _ => Err(Error::Schema(r.issues)),
    }
}

pub fn parse_instance(path: &Path) -> Result<Instance> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_instance_str(&text)
}

/// Decodes one scalar written as a rational string, an integer, or a coefficient array.
pub fn scalar_from_json(v: &Value, field: u32) -> Result<Scalar> {
    let mut r = Reader { text: "", field, issues: Vec::new() };
    r.scalar(v, &[]).ok_or(Error::Schema(r.issues))
}

pub fn scalar_json(x: &Scalar, field: u32) -> Value {
    match x.as_rational() {
        Some(q) => Value::String(Scalar::rational_string(q)),
        None => Value::Array(x.coefficients(field).iter().map(|c| Value::String(Scalar::rational_string(c))).collect()),
    }
}

pub fn vector_json(v: &[Scalar], field: u32) -> Value {
    Value::Array(v.iter().map(|x| scalar_json(x, field)).collect())
}

pub fn matrix_json(m: &Matrix, field: u32) -> Value {
    Value::Array(m.row_vectors().iter().map(|r| vector_json(r, field)).collect())
}

fn grading_json(g: &Grading, field: u32) -> Value {
    Value::Array(
        g.pieces
            .iter()
            .map(|p| {
                json!({
                    "weight": p.weight,
                    "basis": p.basis.iter().map(|b| vector_json(b, field)).collect::<Vec<_>>(),
                })
            })
            .collect(),
    )
}

/// Renders an instance as a JSON document with sorted keys.
pub fn render_instance(inst: &Instance) -> String {
    let f = inst.field;
    let mut doc = Map::new();
    doc.insert("field".into(), json!(f));
    match &inst.body {
        InstanceBody::Tuple(p) => {
            doc.insert("mode".into(), json!("tuple"));
            doc.insert("n".into(), json!(p.n));
            doc.insert("gradings".into(), Value::Array(p.gradings.iter().map(|g| grading_json(g, f)).collect()));
            doc.insert("connectors".into(), Value::Array(p.connectors.iter().map(|c| matrix_json(c, f)).collect()));
            let loops = p
                .loops
                .iter()
                .map(|l| {
                    let mut o = Map::new();
                    o.insert("g".into(), matrix_json(&l.g, f));
                    if !l.phi.inner().is_identity() {
                        o.insert("inner".into(), matrix_json(l.phi.inner(), f));
                    }
                    let outer = if l.phi.outer() == Outer::Sigma { "sigma" } else { "identity" };
                    o.insert("outer".into(), json!(outer));
                    Value::Object(o)
                })
                .collect();
            doc.insert("loops".into(), Value::Array(loops));
        }
        InstanceBody::Stokes { surface, candidate } => {
            doc.insert("mode".into(), json!("stokes"));
            doc.insert("n".into(), json!(surface.n));
            doc.insert("genus".into(), json!(surface.genus));
            let punctures = surface
                .punctures
                .iter()
                .map(|cls| {
                    let circles: Vec<Value> = cls
                        .circles
                        .iter()
                        .map(|c| {
                            let coeffs: Vec<Value> = c.coeffs.iter().map(|(j, a)| json!([j, scalar_json(a, f)])).collect();
                            json!({ "ram": c.ram, "coeffs": coeffs, "multiplicity": c.multiplicity })
                        })
                        .collect();
                    json!({ "circles": circles })
                })
                .collect();
            doc.insert("punctures".into(), Value::Array(punctures));
            if let Some(c) = candidate {
                let m: Map<String, Value> = c.iter().map(|(k, v)| (k.clone(), matrix_json(v, f))).collect();
                doc.insert("candidate".into(), Value::Object(m));
            }
        }
    }
    let mut s = serde_json::to_string_pretty(&Value::Object(doc)).expect("serializable");
    s.push('\n');
    s
}
