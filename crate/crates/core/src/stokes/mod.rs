//! Irregular classes at punctures, their sheets and singular directions.

mod sample;
mod scaffold;

pub use sample::random_candidate;
pub use scaffold::{
    build_scaffold, expected_dimension, to_framed_point, verify_candidate, Generator, GeneratorKind, Letter,
    PunctureData, RepCandidate, Scaffold, Violation,
};

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::linalg::Grading;

/// Angular tolerance used to identify directions.
pub const THETA_TOL: f64 = 1e-9;

/// `q = Σ a_j z^{-j/r}` taken with the given multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circle {
    pub ram: u32,
    pub coeffs: Vec<(u32, Scalar)>,
    pub multiplicity: usize,
}

impl Circle {
    pub fn new(ram: u32, coeffs: Vec<(u32, Scalar)>, multiplicity: usize) -> Result<Circle> {
        let c = Circle { ram, coeffs, multiplicity };
        c.validate()?;
        Ok(c)
    }

    pub fn tame(multiplicity: usize) -> Circle {
        Circle { ram: 1, coeffs: Vec::new(), multiplicity }
    }

    /// Nonzero terms, merged by exponent and sorted by decreasing exponent.
    fn terms(&self) -> Vec<(u32, Scalar)> {
        let mut t: Vec<(u32, Scalar)> = Vec::new();
        for (j, a) in &self.coeffs {
            match t.iter_mut().find(|(k, _)| k == j) {
                Some(e) => e.1 = &e.1 + a,
                None => t.push((*j, a.clone())),
            }
        }
        t.retain(|(_, a)| !a.is_zero());
        t.sort_by(|x, y| y.0.cmp(&x.0));
        t
    }

    pub fn validate(&self) -> Result<()> {
        if self.ram == 0 {
            return Err(Error::Parse("ramification must be at least 1".into()));
        }
        if self.multiplicity == 0 {
            return Err(Error::Parse("multiplicity must be at least 1".into()));
        }
        if self.coeffs.iter().any(|(j, _)| *j == 0) {
            return Err(Error::Parse("exponents must be at least 1".into()));
        }
        let top = self.coeffs.iter().map(|(j, _)| *j).max();
        if let Some(top) = top {
            if self.terms().first().map(|t| t.0) != Some(top) {
                return Err(Error::Parse("leading coefficient vanishes".into()));
            }
        }
        let g = self.terms().iter().fold(self.ram, |g, (j, _)| g.gcd(j));
        if g != 1 {
            return Err(Error::Parse(format!(
                "ramification {} is not minimal for the exponents given (common factor {g})",
                self.ram
            )));
        }
        Ok(())
    }

    /// Rank of the graded piece this circle contributes.
    pub fn rank(&self) -> usize {
        self.ram as usize * self.multiplicity
    }
}

/// Ramification and slope of a circle.
pub fn circle_invariants(c: &Circle) -> (u32, BigRational) {
    let slope = c
        .terms()
        .first()
        .map_or_else(BigRational::zero, |(j, _)| BigRational::new(BigInt::from(*j), BigInt::from(c.ram)));
    (c.ram, slope)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IrregularClass {
    pub circles: Vec<Circle>,
}

impl IrregularClass {
    pub fn new(circles: Vec<Circle>) -> Result<IrregularClass> {
        let c = IrregularClass { circles };
        c.validate()?;
        Ok(c)
    }

    pub fn rank(&self) -> usize {
        self.circles.iter().map(Circle::rank).sum()
    }

    pub fn validate(&self) -> Result<()> {
        if self.circles.is_empty() {
            return Err(Error::Parse("an irregular class needs at least one circle".into()));
        }
        for c in &self.circles {
            c.validate()?;
        }
        let sh = self.sheets();
        for (a, s) in sh.iter().enumerate() {
            for t in &sh[a + 1..] {
                if leading_difference(&s.terms, &t.terms).is_none() {
                    return Err(Error::DegenerateGrading(format!(
                        "sheets {} and {} coincide; repeated circles must be merged into one multiplicity",
                        s.label(),
                        t.label()
                    )));
                }
            }
        }
        Ok(())
    }

    /// Sheets in order: circles in the given order, sheet index `k = 0..r` within each.
    pub fn sheets(&self) -> Vec<Sheet> {
        let mut out = Vec::new();
        let mut offset = 0;
        for (ci, c) in self.circles.iter().enumerate() {
            for k in 0..c.ram {
                let terms = c
                    .terms()
                    .into_iter()
                    .map(|(j, a)| {
                        let e = (j as i64) * (k as i64);
                        let s = BigRational::new(BigInt::from(j), BigInt::from(c.ram));
                        (s, &a * &Scalar::root_of_unity(c.ram, e))
                    })
                    .collect();
                out.push(Sheet { circle: ci, index: k, ram: c.ram, dim: c.multiplicity, offset, terms });
                offset += c.multiplicity;
            }
        }
        out
    }

    /// Sheet-block grading: trivial for a single sheet, otherwise one unit weight per sheet.
    pub fn grading(&self) -> Grading {
        let sizes: Vec<usize> = self.sheets().iter().map(|s| s.dim).collect();
        if sizes.len() <= 1 {
            Grading::trivial(self.rank())
        } else {
            Grading::blocks(&sizes)
        }
    }

    /// Sheet reached from `s` after one counterclockwise turn.
    pub fn monodromy_target(&self, s: usize) -> usize {
        let sh = self.sheets();
        let r = sh[s].ram as usize;
        s - sh[s].index as usize + (sh[s].index as usize + 1) % r
    }
}

/// One branch of a circle: `q_k = Σ a_j ζ_r^{jk} z^{-j/r}`, occupying coordinates `offset .. offset + dim`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sheet {
    pub circle: usize,
    pub index: u32,
    pub ram: u32,
    pub dim: usize,
    pub offset: usize,
    /// `(exponent s, coefficient)` with the term `c z^{-s}`.
    pub terms: Vec<(BigRational, Scalar)>,
}

impl Sheet {
    pub fn range(&self) -> std::ops::Range<usize> {
        self.offset..self.offset + self.dim
    }

    pub fn label(&self) -> String {
        format!("{}.{}", self.circle + 1, self.index)
    }
}

/// Leading term `(s, a)` of `q_i - q_j`, or `None` when the sheets coincide.
fn leading_difference(a: &[(BigRational, Scalar)], b: &[(BigRational, Scalar)]) -> Option<(BigRational, Scalar)> {
    let mut diff: Vec<(BigRational, Scalar)> = a.to_vec();
    for (s, c) in b {
        match diff.iter_mut().find(|(t, _)| t == s) {
            Some(e) => e.1 = &e.1 - c,
            None => diff.push((s.clone(), -c)),
        }
    }
    diff.into_iter().filter(|(_, c)| !c.is_zero()).max_by(|x, y| x.0.cmp(&y.0))
}

/// A direction of maximal decay for an ordered sheet pair.
#[derive(Clone, Debug, PartialEq)]
pub struct DirectionEntry {
    pub theta: f64,
    pub pair: (usize, usize),
    pub level: BigRational,
}

/// All pairs sharing one singular direction.
#[derive(Clone, Debug, PartialEq)]
pub struct SingularDirection {
    pub theta: f64,
    pub pairs: Vec<(usize, usize)>,
    pub levels: Vec<BigRational>,
}

fn to_f64(q: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().expect("finite level")
}

/// Angles in `[0, 2π)` where `e^{q_i - q_j}` decays fastest, for every ordered pair of distinct sheets.
pub fn singular_directions(cls: &IrregularClass) -> Vec<DirectionEntry> {
    let sh = cls.sheets();
    let mut out = Vec::new();
    for (i, si) in sh.iter().enumerate() {
        for (j, sj) in sh.iter().enumerate() {
            if i == j {
                continue;
            }
            let Some((s, a)) = leading_difference(&si.terms, &sj.terms) else { continue };
            if !s.is_positive() {
                continue;
            }
            let sf = to_f64(&s);
            let base = a.to_complex().arg() + PI;
            let kmax = sf.ceil() as i64 + 1;
            let mut thetas: Vec<f64> = Vec::new();
            for k in -1..=kmax {
                let raw = (base + 2.0 * PI * k as f64) / sf;
                if raw < -THETA_TOL || raw >= 2.0 * PI - THETA_TOL {
                    continue;
                }
                let t = raw.max(0.0);
                if !thetas.iter().any(|u| (u - t).abs() < THETA_TOL) {
                    thetas.push(t);
                }
            }
            for t in thetas {
                out.push(DirectionEntry { theta: t, pair: (i, j), level: s.clone() });
            }
        }
    }
    out.sort_by(|x, y| x.theta.total_cmp(&y.theta).then(x.pair.cmp(&y.pair)));
    out
}

/// Singular directions with their pairs merged, in increasing angle.
pub fn grouped_directions(cls: &IrregularClass) -> Vec<SingularDirection> {
    let mut out: Vec<SingularDirection> = Vec::new();
    for e in singular_directions(cls) {
        match out.last_mut() {
            Some(d) if (e.theta - d.theta).abs() < THETA_TOL => {
                d.pairs.push(e.pair);
                d.levels.push(e.level);
            }
            _ => out.push(SingularDirection { theta: e.theta, pairs: vec![e.pair], levels: vec![e.level] }),
        }
    }
    out
}

/// Sheet pairs `(i, j)` whose Stokes blocks `Hom(V_j, V_i)` are supported at `theta`.
pub fn stokes_pattern(cls: &IrregularClass, theta: f64) -> Result<Vec<(usize, usize)>> {
    grouped_directions(cls)
        .into_iter()
        .find(|d| angle_distance(d.theta, theta) < THETA_TOL)
        .map(|d| d.pairs)
        .ok_or_else(|| Error::NotSingular(format!("{theta} is not a singular direction")))
}

fn angle_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

/// One circle of multiplicity one and ramification equal to the rank.
pub fn katz_guarantee(cls: &IrregularClass) -> bool {
    matches!(cls.circles.as_slice(), [c] if c.multiplicity == 1 && c.ram as usize == cls.rank())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WildSurface {
    pub genus: usize,
    pub punctures: Vec<IrregularClass>,
    pub n: usize,
}

impl WildSurface {
    pub fn new(genus: usize, punctures: Vec<IrregularClass>, n: usize) -> Result<WildSurface> {
        let w = WildSurface { genus, punctures, n };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        if self.punctures.is_empty() {
            return Err(Error::Parse("at least one puncture is required".into()));
        }
        for (i, p) in self.punctures.iter().enumerate() {
            p.validate()?;
            if p.rank() != self.n {
                return Err(Error::DimensionMismatch(format!(
                    "puncture {} grades rank {}, surface has rank {}",
                    i + 1,
                    p.rank(),
                    self.n
                )));
            }
        }
        Ok(())
    }
}
