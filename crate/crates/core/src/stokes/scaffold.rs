//! Generators and the surface relation of the wild representation variety, candidate checks.

use std::collections::BTreeMap;
use std::fmt;

use super::{grouped_directions, IrregularClass, Sheet, SingularDirection, WildSurface};
use crate::error::{Error, Result};
use crate::git::FramedPoint;
use crate::linalg::{Grading, Matrix};
use crate::twist::TwistedElement;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeneratorKind {
    GenusA(usize),
    GenusB(usize),
    Connector(usize),
    Monodromy(usize),
    Stokes { puncture: usize, index: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Generator {
    pub name: String,
    pub kind: GeneratorKind,
    /// Direction of a Stokes factor.
    pub theta: Option<f64>,
    /// Sheet pairs `(i, j)` of the blocks a Stokes factor may fill.
    pub pattern: Vec<(usize, usize)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PunctureData {
    pub class: IrregularClass,
    pub sheets: Vec<Sheet>,
    pub directions: Vec<SingularDirection>,
    pub grading: Grading,
    pub connector: Option<usize>,
    pub monodromy: usize,
    /// Stokes generators in increasing direction.
    pub stokes: Vec<usize>,
}

impl PunctureData {
    /// Entries a Stokes factor with the given pattern may change.
    pub fn stokes_mask(&self, n: usize, pattern: &[(usize, usize)]) -> Vec<Vec<bool>> {
        let mut m = vec![vec![false; n]; n];
        for &(i, j) in pattern {
            for r in self.sheets[i].range() {
                for c in self.sheets[j].range() {
                    m[r][c] = true;
                }
            }
        }
        m
    }

    /// Entries allowed in the formal monodromy: sheet `s` maps into its monodromy target.
    pub fn monodromy_mask(&self, n: usize) -> Vec<Vec<bool>> {
        let mut m = vec![vec![false; n]; n];
        for (s, sh) in self.sheets.iter().enumerate() {
            for r in self.sheets[self.class.monodromy_target(s)].range() {
                for c in sh.range() {
                    m[r][c] = true;
                }
            }
        }
        m
    }

    /// Dimension of the graded automorphism group.
    pub fn graded_dim(&self) -> usize {
        self.sheets.iter().map(|s| s.dim * s.dim).sum()
    }

    pub fn stokes_dim(&self, pattern: &[(usize, usize)]) -> usize {
        pattern.iter().map(|&(i, j)| self.sheets[i].dim * self.sheets[j].dim).sum()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Scaffold {
    pub n: usize,
    pub genus: usize,
    pub generators: Vec<Generator>,
    pub relation: Vec<Letter>,
    pub punctures: Vec<PunctureData>,
}

impl Scaffold {
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn relation_string(&self) -> String {
        let word: Vec<String> = self
            .relation
            .iter()
            .map(|l| {
                let name = &self.generators[l.generator].name;
                if l.inverse {
                    format!("{name}^-1")
                } else {
                    name.clone()
                }
            })
            .collect();
        if word.is_empty() {
            "1 = 1".into()
        } else {
            format!("{} = 1", word.join("*"))
        }
    }

    /// Letters `[start, end)` of the relation that belong to puncture `p`.
    pub(crate) fn puncture_span(&self, p: usize) -> (usize, usize) {
        let owns = |l: &Letter| match self.generators[l.generator].kind {
            GeneratorKind::Connector(i) | GeneratorKind::Monodromy(i) | GeneratorKind::Stokes { puncture: i, .. } => {
                i == p
            }
            _ => false,
        };
        let start = self.relation.iter().position(owns).expect("puncture letters");
        let end = self.relation.iter().rposition(owns).expect("puncture letters") + 1;
        (start, end)
    }

    pub(crate) fn evaluate(&self, letters: &[Letter], cand: &RepCandidate) -> Result<Matrix> {
        let mut acc = Matrix::identity(self.n);
        for l in letters {
            let name = &self.generators[l.generator].name;
            let m = cand.get(name).ok_or_else(|| Error::IncompleteAssignment(name.clone()))?;
            let m = if l.inverse { m.try_inverse(name)? } else { m.clone() };
            acc = &acc * &m;
        }
        Ok(acc)
    }
}

/// Concrete matrices keyed by generator name.
pub type RepCandidate = BTreeMap<String, Matrix>;

/// Emits generators `a_k, b_k, C_i, h_i, S_{i,d}` and the relation
/// `Π [a_k, b_k] · Π C_i⁻¹ h_i S_{i,last} ⋯ S_{i,1} C_i = 1`.
pub fn build_scaffold(ws: &WildSurface) -> Result<Scaffold> {
    ws.validate()?;
    let n = ws.n;
    let mut generators = Vec::new();
    let mut relation = Vec::new();
    let push = |gens: &mut Vec<Generator>, name: String, kind, theta, pattern| {
        gens.push(Generator { name, kind, theta, pattern });
        gens.len() - 1
    };
    for k in 0..ws.genus {
        let a = push(&mut generators, format!("a{}", k + 1), GeneratorKind::GenusA(k), None, vec![]);
        let b = push(&mut generators, format!("b{}", k + 1), GeneratorKind::GenusB(k), None, vec![]);
        for (g, inverse) in [(a, false), (b, false), (a, true), (b, true)] {
            relation.push(Letter { generator: g, inverse });
        }
    }
    let mut punctures = Vec::new();
    for (i, cls) in ws.punctures.iter().enumerate() {
        let label = i + 1;
        let connector = (i > 0)
            .then(|| push(&mut generators, format!("C{label}"), GeneratorKind::Connector(i), None, vec![]));
        let monodromy = push(&mut generators, format!("h{label}"), GeneratorKind::Monodromy(i), None, vec![]);
        let directions = grouped_directions(cls);
        let stokes: Vec<usize> = directions
            .iter()
            .enumerate()
            .map(|(d, dir)| {
                push(
                    &mut generators,
                    format!("S{label}.{}", d + 1),
                    GeneratorKind::Stokes { puncture: i, index: d },
                    Some(dir.theta),
                    dir.pairs.clone(),
                )
            })
            .collect();
        if let Some(c) = connector {
            relation.push(Letter { generator: c, inverse: true });
        }
        relation.push(Letter { generator: monodromy, inverse: false });
        relation.extend(stokes.iter().rev().map(|&s| Letter { generator: s, inverse: false }));
        if let Some(c) = connector {
            relation.push(Letter { generator: c, inverse: false });
        }
        punctures.push(PunctureData {
            class: cls.clone(),
            sheets: cls.sheets(),
            directions,
            grading: cls.grading(),
            connector,
            monodromy,
            stokes,
        });
    }
    Ok(Scaffold { n, genus: ws.genus, generators, relation, punctures })
}

/// Naive count: generators' degrees of freedom minus the `n²` relation equations.
pub fn expected_dimension(sc: &Scaffold) -> i64 {
    let n2 = (sc.n * sc.n) as i64;
    let mut d = 2 * sc.genus as i64 * n2 - n2;
    for (i, p) in sc.punctures.iter().enumerate() {
        d += p.graded_dim() as i64;
        d += p.directions.iter().map(|dir| p.stokes_dim(&dir.pairs) as i64).sum::<i64>();
        if i > 0 {
            d += n2;
        }
    }
    d
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Shape(String),
    NotInvertible(String),
    StokesSupport { generator: String, row: usize, col: usize },
    NotUnipotent(String),
    MonodromyBlock { generator: String, row: usize, col: usize },
    Relation,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Shape(g) => write!(f, "{g}: wrong size"),
            Violation::NotInvertible(g) => write!(f, "{g}: not invertible"),
            Violation::StokesSupport { generator, row, col } => {
                write!(f, "(i) {generator}: entry ({}, {}) outside the Stokes pattern", row + 1, col + 1)
            }
            Violation::NotUnipotent(g) => write!(f, "(i) {g}: not unipotent"),
            Violation::MonodromyBlock { generator, row, col } => {
                write!(f, "(ii) {generator}: entry ({}, {}) breaks the graded structure", row + 1, col + 1)
            }
            Violation::Relation => write!(f, "(iii) the surface relation is not the identity"),
        }
    }
}

/// Stokes pattern, graded formal monodromy and surface relation checks.
pub fn verify_candidate(sc: &Scaffold, cand: &RepCandidate) -> Result<Vec<Violation>> {
    let n = sc.n;
    for g in &sc.generators {
        if !cand.contains_key(&g.name) {
            return Err(Error::IncompleteAssignment(g.name.clone()));
        }
    }
    let mut out = Vec::new();
    for g in &sc.generators {
        let m = &cand[&g.name];
        if m.rows() != n || m.cols() != n {
            out.push(Violation::Shape(g.name.clone()));
            continue;
        }
        if m.inverse().is_none() {
            out.push(Violation::NotInvertible(g.name.clone()));
        }
        match g.kind {
            GeneratorKind::Stokes { puncture, .. } => {
                let mask = sc.punctures[puncture].stokes_mask(n, &g.pattern);
                let dev = m - &Matrix::identity(n);
                for r in 0..n {
                    for c in 0..n {
                        if !mask[r][c] && !dev.get(r, c).is_zero() {
                            out.push(Violation::StokesSupport { generator: g.name.clone(), row: r, col: c });
                        }
                    }
                }
                if !dev.pow(n as u32).is_zero() {
                    out.push(Violation::NotUnipotent(g.name.clone()));
                }
            }
            GeneratorKind::Monodromy(i) => {
                let mask = sc.punctures[i].monodromy_mask(n);
                for r in 0..n {
                    for c in 0..n {
                        if !mask[r][c] && !m.get(r, c).is_zero() {
                            out.push(Violation::MonodromyBlock { generator: g.name.clone(), row: r, col: c });
                        }
                    }
                }
            }
            _ => {}
        }
    }
    if out.iter().all(|v| !matches!(v, Violation::Shape(_) | Violation::NotInvertible(_)))
        && !sc.evaluate(&sc.relation, cand)?.is_identity()
    {
        out.push(Violation::Relation);
    }
    Ok(out)
}

/// Framed point with loops `a_k, b_k, C_i⁻¹ h_i C_i, C_i⁻¹ S C_i`, connectors `C_i` and sheet gradings.
pub fn to_framed_point(sc: &Scaffold, cand: &RepCandidate) -> Result<FramedPoint> {
    let v = verify_candidate(sc, cand)?;
    if !v.is_empty() {
        let msgs: Vec<String> = v.iter().map(ToString::to_string).collect();
        return Err(Error::UnverifiedCandidate(msgs.join("; ")));
    }
    let n = sc.n;
    let get = |i: usize| cand[&sc.generators[i].name].clone();
    let mut loops = Vec::new();
    for (i, g) in sc.generators.iter().enumerate() {
        if matches!(g.kind, GeneratorKind::GenusA(_) | GeneratorKind::GenusB(_)) {
            loops.push(get(i));
        }
    }
    let mut connectors = Vec::new();
    let mut gradings = Vec::new();
    for p in &sc.punctures {
        let c = p.connector.map_or_else(|| Matrix::identity(n), get);
        let cinv = c.try_inverse("connector")?;
        let conj = |m: Matrix| &(&cinv * &m) * &c;
        loops.push(conj(get(p.monodromy)));
        loops.extend(p.stokes.iter().map(|&s| conj(get(s))));
        if p.connector.is_some() {
            connectors.push(c.clone());
        }
        gradings.push(p.grading.clone());
    }
    FramedPoint::new(n, gradings, connectors, loops.into_iter().map(TwistedElement::untwisted).collect())
}
