//! Polystability and stability of framed points under the torus-centralizer action.

use crate::algebra::{irreducible_summands, invariant_subspace, radical_trace, spin_algebra};
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::linalg::{commutant, kernel_of_forms, weight_projectors, Grading, Matrix, Subspace};
use crate::twist::{differential_action, embed_doubled, embed_doubled_lie, normalize, Outer, TwistedElement};

/// Gradings `T_1..T_m`, connectors `C_2..C_m` and twisted loops `M_1..M_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FramedPoint {
    pub n: usize,
    pub gradings: Vec<Grading>,
    pub connectors: Vec<Matrix>,
    pub loops: Vec<TwistedElement>,
}

impl FramedPoint {
    pub fn new(n: usize, gradings: Vec<Grading>, connectors: Vec<Matrix>, loops: Vec<TwistedElement>) -> Result<FramedPoint> {
        let p = FramedPoint { n, gradings, connectors, loops };
        p.validate()?;
        Ok(p)
    }

    /// One trivial grading and untwisted loops.
    pub fn untwisted(n: usize, loops: Vec<Matrix>) -> FramedPoint {
        FramedPoint {
            n,
            gradings: vec![Grading::trivial(n)],
            connectors: Vec::new(),
            loops: loops.into_iter().map(TwistedElement::untwisted).collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        if self.gradings.is_empty() {
            return Err(Error::DimensionMismatch("at least one grading is required".into()));
        }
        if self.connectors.len() + 1 != self.gradings.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} gradings need {} connectors, got {}",
                self.gradings.len(),
                self.gradings.len() - 1,
                self.connectors.len()
            )));
        }
        for g in &self.gradings {
            if g.ambient_dim != n {
                return Err(Error::DimensionMismatch("grading of the wrong dimension".into()));
            }
            g.validate()?;
        }
        for (i, c) in self.connectors.iter().enumerate() {
            if c.rows() != n || c.cols() != n {
                return Err(Error::DimensionMismatch(format!("connector C{} is not {n}x{n}", i + 2)));
            }
            c.try_inverse(&format!("connector C{}", i + 2))?;
        }
        for (j, l) in self.loops.iter().enumerate() {
            if l.n() != n {
                return Err(Error::DimensionMismatch(format!("loop {} is not {n}x{n}", j + 1)));
            }
        }
        Ok(())
    }

    /// Number of gradings.
    pub fn m(&self) -> usize {
        self.gradings.len()
    }

    /// `C_i` with `C_1 = I` (0-based index).
    pub fn connector(&self, i: usize) -> Matrix {
        if i == 0 {
            Matrix::identity(self.n)
        } else {
            self.connectors[i - 1].clone()
        }
    }

    pub fn is_twisted(&self) -> bool {
        self.loops.iter().any(|l| l.outer() == Outer::Sigma)
    }

    pub fn has_trivial_tori(&self) -> bool {
        self.gradings.iter().all(Grading::is_trivial)
    }

    pub fn normalized(&self) -> FramedPoint {
        FramedPoint { loops: normalize(&self.loops), ..self.clone() }
    }

    /// Weight projectors of grading `i` transported by `C_i⁻¹ · P · C_i`.
    pub fn transported_projectors(&self, i: usize) -> Result<Vec<Matrix>> {
        let c = self.connector(i);
        let cinv = c.try_inverse("connector")?;
        Ok(weight_projectors(&self.gradings[i])?.iter().map(|p| &(&cinv * p) * &c).collect())
    }
}

/// Verdicts and certificates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityReport {
    pub polystable: bool,
    pub stable: bool,
    pub radical_witness: Option<Matrix>,
    pub invariant_subspace_witness: Option<Subspace>,
    pub stabilizer_dim: usize,
    pub kernel_dim: usize,
    pub levi_decomposition: Option<Vec<Subspace>>,
    /// Dimension of the algebra spanned by the Galois generators.
    pub algebra_dim: usize,
    /// Size of the module the algebra acts on (`n` or `2n`).
    pub module_dim: usize,
}

/// Result of the polystability test alone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polystability {
    pub polystable: bool,
    pub radical_witness: Option<Matrix>,
    pub algebra_dim: usize,
    pub module_dim: usize,
}

/// Generators of the algebra standing in for the Galois group: loops plus transported torus projectors.
///
/// Untwisted points use `n × n` matrices; twisted points use the doubled embedding.
pub fn galois_generators(p: &FramedPoint) -> Result<Vec<Matrix>> {
    for (j, l) in p.loops.iter().enumerate() {
        if !l.is_normalized() {
            return Err(Error::Unnormalized(j + 1));
        }
    }
    let mut gens = Vec::new();
    if !p.is_twisted() {
        gens.extend(p.loops.iter().map(|l| l.g.clone()));
        for i in 0..p.m() {
            for q in p.transported_projectors(i)? {
                if !q.is_identity() {
                    gens.push(q);
                }
            }
        }
        return Ok(gens);
    }
    for l in &p.loops {
        gens.push(embed_doubled(l)?);
    }
    for i in 0..p.m() {
        let qs = p.transported_projectors(i)?;
        let weights: Vec<Vec<i64>> = p.gradings[i].pieces.iter().map(|pc| pc.weight.clone()).collect();
        let neg = |w: &Vec<i64>| w.iter().map(|x| -x).collect::<Vec<i64>>();
        let mut seen: Vec<Vec<i64>> = Vec::new();
        for v in weights.iter().cloned().chain(weights.iter().map(neg)) {
            if seen.contains(&v) {
                continue;
            }
            let n = p.n;
            let mut top = Matrix::zeros(n, n);
            let mut bottom = Matrix::zeros(n, n);
            for (w, q) in weights.iter().zip(&qs) {
                if *w == v {
                    top = &top + q;
                }
                if neg(w) == v {
                    bottom = &bottom + &q.transpose();
                }
            }
            let proj = Matrix::block_diag(&[top, bottom]);
            if !proj.is_identity() {
                gens.push(proj);
            }
            seen.push(v);
        }
    }
    Ok(gens)
}

fn module_dim(p: &FramedPoint) -> usize {
    if p.is_twisted() {
        2 * p.n
    } else {
        p.n
    }
}

/// Polystable iff the algebra generated by the Galois generators of the normalized point is semisimple.
pub fn is_polystable(p: &FramedPoint) -> Result<Polystability> {
    let q = p.normalized();
    let gens = galois_generators(&q)?;
    let d = module_dim(&q);
    let alg = spin_algebra(d, &gens)?;
    let rad = radical_trace(&alg);
    Ok(Polystability {
        polystable: rad.is_zero(),
        radical_witness: rad.witness,
        algebra_dim: alg.dim(),
        module_dim: d,
    })
}

/// `1` if scalars are fixed by every loop twist, `0` if some loop carries `σ`.
pub fn kernel_lie_dim(p: &FramedPoint) -> usize {
    if p.is_twisted() {
        0
    } else {
        1
    }
}

/// Dimension of the kernel of a linear map given on unit inputs.
fn kernel_dim<F: Fn(usize) -> Vec<Scalar>>(unknowns: usize, image_of_unit: F) -> usize {
    let cols: Vec<Vec<Scalar>> = (0..unknowns).map(image_of_unit).collect();
    let rows = cols.first().map_or(0, Vec::len);
    let forms = (0..rows).map(|r| cols.iter().map(|c| c[r].clone()).collect::<Vec<_>>());
    kernel_of_forms(unknowns, forms).dim()
}

/// Dimension of the linearized stabilizer `(ξ_1, .., ξ_m)` of the framed point.
pub fn stabilizer_lie_dim(p: &FramedPoint) -> Result<usize> {
    let n = p.n;
    let m = p.m();
    let nn = n * n;
    let projectors: Vec<Vec<Matrix>> = (0..m).map(|i| weight_projectors(&p.gradings[i])).collect::<Result<_>>()?;
    let connectors: Vec<Matrix> = (0..m).map(|i| p.connector(i)).collect();
    Ok(kernel_dim(m * nn, |u| {
        let (block, e) = (u / nn, u % nn);
        let xi = Matrix::unit(n, e / n, e % n);
        let zero = Matrix::zeros(n, n);
        let xis: Vec<&Matrix> = (0..m).map(|i| if i == block { &xi } else { &zero }).collect();
        let mut out = Vec::new();
        for i in 0..m {
            for pr in &projectors[i] {
                out.extend(xis[i].commutator(pr).into_entries());
            }
        }
        for i in 1..m {
            let c = &connectors[i];
            out.extend((&(xis[i] * c) - &(c * xis[0])).into_entries());
        }
        for l in &p.loops {
            let lhs = xis[0] * &l.g;
            let rhs = &l.g * &differential_action(&l.phi, xis[0]);
            out.extend((&lhs - &rhs).into_entries());
        }
        out
    }))
}

/// Stabilizer dimension from the commutant of the Galois generators, for cross-checking.
pub fn commutant_stabilizer_dim(p: &FramedPoint) -> Result<usize> {
    let q = p.normalized();
    let gens = galois_generators(&q)?;
    let n = q.n;
    if !q.is_twisted() {
        return Ok(commutant(n, &gens).dim());
    }
    Ok(kernel_dim(n * n, |u| {
        let e = embed_doubled_lie(&Matrix::unit(n, u / n, u % n));
        gens.iter().flat_map(|g| e.commutator(g).into_entries()).collect()
    }))
}

/// Full verdict: stable iff polystable and the stabilizer is no larger than the kernel.
pub fn is_stable(p: &FramedPoint, seed: u64) -> Result<StabilityReport> {
    let ps = is_polystable(p)?;
    let stabilizer_dim = stabilizer_lie_dim(p)?;
    let kernel_dim = kernel_lie_dim(p);
    let stable = ps.polystable && stabilizer_dim == kernel_dim;
    let q = p.normalized();
    let invariant_subspace_witness =
        if q.is_twisted() { None } else { invariant_subspace(q.n, &galois_generators(&q)?, seed)? };
    Ok(StabilityReport {
        polystable: ps.polystable,
        stable,
        radical_witness: ps.radical_witness,
        invariant_subspace_witness,
        stabilizer_dim,
        kernel_dim,
        levi_decomposition: None,
        algebra_dim: ps.algebra_dim,
        module_dim: ps.module_dim,
    })
}

/// Stability report together with the irreducible decomposition when one is available.
pub fn analyze(p: &FramedPoint, seed: u64) -> Result<StabilityReport> {
    let mut r = is_stable(p, seed)?;
    if r.polystable && !p.is_twisted() {
        r.levi_decomposition = match levi_reduction(p, seed) {
            Ok(l) => Some(l),
            Err(Error::SplittingFieldRequired(_)) | Err(Error::Inconclusive(_)) => None,
            Err(e) => return Err(e),
        };
    }
    Ok(r)
}

/// Invariant decomposition of `K^n` into absolutely irreducible summands of the Galois module.
pub fn levi_reduction(p: &FramedPoint, seed: u64) -> Result<Vec<Subspace>> {
    if p.is_twisted() {
        return Err(Error::TwistedInput);
    }
    if !is_polystable(p)?.polystable {
        return Err(Error::NotPolystable);
    }
    let q = p.normalized();
    irreducible_summands(q.n, &galois_generators(&q)?, seed)
}

/// The framed point seen on an invariant summand: identity connectors, restricted gradings and loops.
pub fn restrict_point(p: &FramedPoint, block: &Subspace) -> Result<FramedPoint> {
    let q = p.normalized();
    if q.is_twisted() {
        return Err(Error::TwistedInput);
    }
    let k = block.dim();
    let mut gradings = Vec::new();
    for i in 0..q.m() {
        let qs = q.transported_projectors(i)?;
        let mut pieces = Vec::new();
        for (pc, pr) in q.gradings[i].pieces.iter().zip(&qs) {
            let r = crate::algebra::restrict_to(std::slice::from_ref(pr), block).remove(0);
            let img = Subspace::span(k, &(0..k).map(|c| r.column(c)).collect::<Vec<_>>());
            if img.dim() > 0 {
                pieces.push(crate::linalg::GradingPiece { weight: pc.weight.clone(), basis: img.basis().to_vec() });
            }
        }
        gradings.push(Grading { ambient_dim: k, pieces });
    }
    let loops_m: Vec<Matrix> = q.loops.iter().map(|l| l.g.clone()).collect();
    let loops = crate::algebra::restrict_to(&loops_m, block).into_iter().map(TwistedElement::untwisted).collect();
    FramedPoint::new(k, gradings, vec![Matrix::identity(k); q.m() - 1], loops)
}

/// `C_i ↦ h_i C_i h_1⁻¹`, `(g, φ) ↦ (h_1 g φ(h_1)⁻¹, φ)`.
pub fn act(h: &[Matrix], p: &FramedPoint) -> Result<FramedPoint> {
    if h.len() != p.m() {
        return Err(Error::DimensionMismatch(format!("{} group elements for {} gradings", h.len(), p.m())));
    }
    for (i, hi) in h.iter().enumerate() {
        hi.try_inverse(&format!("h{}", i + 1))?;
        for pr in weight_projectors(&p.gradings[i])? {
            if !hi.commutator(&pr).is_zero() {
                return Err(Error::NotInCentralizer(i + 1));
            }
        }
    }
    let h1inv = h[0].inverse().unwrap();
    let connectors = p.connectors.iter().enumerate().map(|(i, c)| &(&h[i + 1] * c) * &h1inv).collect();
    let loops = p
        .loops
        .iter()
        .map(|l| {
            let g = &(&h[0] * &l.g) * &l.phi.apply(&h1inv)?;
            Ok(TwistedElement { g, phi: l.phi.clone() })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FramedPoint { n: p.n, gradings: p.gradings.clone(), connectors, loops })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::twist::Automorphism;

    fn jordan() -> Matrix {
        Matrix::from_ints(&[&[1, 1], &[0, 1]])
    }

    fn lines2() -> Grading {
        Grading::blocks(&[1, 1])
    }

    #[test]
    fn galois_generator_examples() {
        let p = FramedPoint::untwisted(2, vec![jordan()]);
        assert_eq!(galois_generators(&p).unwrap(), vec![jordan()]);
        let p = FramedPoint::new(2, vec![lines2()], vec![], vec![]).unwrap();
        assert_eq!(galois_generators(&p).unwrap(), vec![Matrix::diag_ints(&[1, 0]), Matrix::diag_ints(&[0, 1])]);
        let p = FramedPoint::new(2, vec![Grading::trivial(2), lines2()], vec![jordan()], vec![]).unwrap();
        assert_eq!(
            galois_generators(&p).unwrap(),
            vec![Matrix::from_ints(&[&[1, 1], &[0, 0]]), Matrix::from_ints(&[&[0, -1], &[0, 1]])]
        );
    }

    #[test]
    fn polystability_examples() {
        let r = is_polystable(&FramedPoint::untwisted(2, vec![jordan()])).unwrap();
        assert!(!r.polystable);
        assert_eq!(r.radical_witness, Some(Matrix::unit(2, 0, 1)));
        assert!(is_polystable(&FramedPoint::untwisted(2, vec![Matrix::diag_ints(&[2, 3])])).unwrap().polystable);
    }

    #[test]
    fn inner_twist_by_unipotent_is_polystable() {
        for n in 2..=3 {
            let mut g1 = Matrix::identity(n);
            g1.set(0, n - 1, Scalar::one());
            let mut g2 = Matrix::identity(n);
            g2.set(0, n - 1, Scalar::from_integer(3));
            let loops: Vec<TwistedElement> = [g1.clone(), g2.clone()]
                .into_iter()
                .map(|g| {
                    let phi = Automorphism::new(g.inverse().unwrap(), Outer::Identity).unwrap();
                    TwistedElement::new(g, phi).unwrap()
                })
                .collect();
            let p = FramedPoint::new(n, vec![Grading::trivial(n)], vec![], loops).unwrap();
            assert!(is_polystable(&p).unwrap().polystable);
            assert!(!is_polystable(&FramedPoint::untwisted(n, vec![g1, g2])).unwrap().polystable);
        }
    }

    #[test]
    fn stabilizer_examples() {
        assert_eq!(stabilizer_lie_dim(&FramedPoint::untwisted(2, vec![Matrix::identity(2)])).unwrap(), 4);
        assert_eq!(stabilizer_lie_dim(&FramedPoint::untwisted(2, vec![Matrix::diag_ints(&[2, 3])])).unwrap(), 2);
        assert_eq!(stabilizer_lie_dim(&FramedPoint::untwisted(2, vec![jordan()])).unwrap(), 2);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel_lie_dim(&FramedPoint::untwisted(2, vec![jordan()])), 1);
        assert_eq!(kernel_lie_dim(&FramedPoint::untwisted(2, vec![])), 1);
        let tw = TwistedElement::new(Matrix::identity(2), Automorphism::sigma(2)).unwrap();
        let p = FramedPoint::new(2, vec![Grading::trivial(2)], vec![], vec![tw]).unwrap();
        assert_eq!(kernel_lie_dim(&p), 0);
    }

    #[test]
    fn stability_examples() {
        let pair = vec![Matrix::from_ints(&[&[0, 1], &[1, 0]]), Matrix::diag_ints(&[1, -1])];
        let r = is_stable(&FramedPoint::untwisted(2, pair), 0).unwrap();
        assert!(r.stable && r.polystable);
        assert_eq!((r.stabilizer_dim, r.kernel_dim), (1, 1));
        assert!(r.invariant_subspace_witness.is_none());

        let r = is_stable(&FramedPoint::untwisted(2, vec![Matrix::diag_ints(&[2, 3])]), 0).unwrap();
        assert!(r.polystable && !r.stable);
        assert_eq!(r.invariant_subspace_witness, Some(Subspace::coordinate(2, &[0])));

        let r = is_stable(&FramedPoint::untwisted(2, vec![jordan()]), 0).unwrap();
        assert!(!r.polystable && !r.stable);
    }

    #[test]
    fn levi_examples() {
        let l = levi_reduction(&FramedPoint::untwisted(3, vec![Matrix::diag_ints(&[2, 2, 3])]), 0).unwrap();
        assert_eq!(l.len(), 3);
        let pair = vec![Matrix::from_ints(&[&[0, 1], &[1, 0]]), Matrix::diag_ints(&[1, -1])];
        assert_eq!(levi_reduction(&FramedPoint::untwisted(2, pair), 0).unwrap(), vec![Subspace::full(2)]);
        let l = levi_reduction(&FramedPoint::untwisted(2, vec![Matrix::diag_ints(&[2, 3])]), 0).unwrap();
        assert_eq!(l, vec![Subspace::coordinate(2, &[0]), Subspace::coordinate(2, &[1])]);
        assert_eq!(levi_reduction(&FramedPoint::untwisted(2, vec![jordan()]), 0), Err(Error::NotPolystable));
        let tw = TwistedElement::new(Matrix::identity(2), Automorphism::sigma(2)).unwrap();
        let p = FramedPoint::new(2, vec![Grading::trivial(2)], vec![], vec![tw]).unwrap();
        assert_eq!(levi_reduction(&p, 0), Err(Error::TwistedInput));
    }

    #[test]
    fn blocks_of_levi_are_stable() {
        let p = FramedPoint::untwisted(3, vec![Matrix::diag_ints(&[2, 2, 3]), Matrix::from_ints(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]])]);
        for b in levi_reduction(&p, 0).unwrap() {
            assert!(is_stable(&restrict_point(&p, &b).unwrap(), 0).unwrap().stable);
        }
    }

    #[test]
    fn act_examples() {
        let p = FramedPoint::untwisted(2, vec![jordan()]);
        assert_eq!(act(&[Matrix::identity(2)], &p).unwrap(), p);
        let q = act(&[Matrix::diag_ints(&[2, 1])], &p).unwrap();
        assert_eq!(q.loops[0].g, Matrix::from_ints(&[&[1, 2], &[0, 1]]));
        let p = FramedPoint::new(2, vec![Grading::trivial(2), lines2()], vec![Matrix::identity(2)], vec![]).unwrap();
        let q = act(&[Matrix::identity(2), Matrix::diag_ints(&[1, 2])], &p).unwrap();
        assert_eq!(q.connectors[0], Matrix::diag_ints(&[1, 2]));
        assert_eq!(act(&[Matrix::identity(2), jordan()], &p), Err(Error::NotInCentralizer(2)));
    }

    #[test]
    fn commutant_matches_framed_system() {
        let tw = TwistedElement::new(Matrix::from_ints(&[&[2, 1], &[1, 1]]), Automorphism::sigma(2)).unwrap();
        let p = FramedPoint::new(2, vec![Grading::trivial(2), lines2()], vec![jordan()], vec![tw]).unwrap();
        assert_eq!(stabilizer_lie_dim(&p).unwrap(), commutant_stabilizer_dim(&p).unwrap());
        let p = FramedPoint::untwisted(3, vec![Matrix::diag_ints(&[1, 1, 2])]);
        assert_eq!(stabilizer_lie_dim(&p).unwrap(), 5);
        assert_eq!(commutant_stabilizer_dim(&p).unwrap(), 5);
    }
}
