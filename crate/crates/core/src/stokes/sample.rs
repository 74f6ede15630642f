//! Random verified candidates: random matrices everywhere except one puncture, solved linearly.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::scaffold::{verify_candidate, GeneratorKind, PunctureData, RepCandidate, Scaffold};
use crate::algebra::meataxe::rng_for;
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::linalg::{linear_solve, Matrix};

fn small(rng: &mut ChaCha8Rng) -> Scalar {
    Scalar::from_integer(rng.gen_range(-2..=2))
}

fn masked(rng: &mut ChaCha8Rng, mask: &[Vec<bool>], base: Matrix) -> Matrix {
    let mut m = base;
    for (r, row) in mask.iter().enumerate() {
        for (c, &on) in row.iter().enumerate() {
            if on {
                m.set(r, c, small(rng));
            }
        }
    }
    m
}

fn invertible(rng: &mut ChaCha8Rng, mask: &[Vec<bool>], n: usize) -> Result<Matrix> {
    for _ in 0..64 {
        let m = masked(rng, mask, Matrix::zeros(n, n));
        if m.inverse().is_some() {
            return Ok(m);
        }
    }
    Err(Error::UnsolvableRelation)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Unknown {
    /// `h` together with the last Stokes factor.
    Last,
    /// `h` together with the first Stokes factor.
    First,
}

/// How many Stokes factors are forced to the identity.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Sparsity {
    None,
    SolvedPuncture,
    All,
}

/// Assigns random matrices respecting patterns and gradings, then solves the relation at one puncture.
pub fn random_candidate(sc: &Scaffold, seed: u64) -> Result<RepCandidate> {
    if sc.generators.is_empty() {
        return Err(Error::UnsolvableRelation);
    }
    let mut rng = rng_for(seed);
    // punctures whose monodromy is unconstrained first: the solve always succeeds there
    let mut order: Vec<usize> = (0..sc.punctures.len()).collect();
    order.sort_by_key(|&p| (!(sc.punctures[p].grading.is_trivial() && sc.punctures[p].stokes.is_empty()), p));
    for sparsity in [Sparsity::None, Sparsity::SolvedPuncture, Sparsity::All] {
        for &p in &order {
            for mode in [Unknown::Last, Unknown::First] {
                if mode == Unknown::First && sc.punctures[p].stokes.is_empty() {
                    continue;
                }
                let Some(c) = attempt(sc, p, mode, sparsity, &mut rng)? else { continue };
                if verify_candidate(sc, &c)?.is_empty() {
                    return Ok(c);
                }
            }
        }
    }
    Err(Error::UnsolvableRelation)
}

fn attempt(sc: &Scaffold, p: usize, mode: Unknown, sparsity: Sparsity, rng: &mut ChaCha8Rng) -> Result<Option<RepCandidate>> {
    let n = sc.n;
    let full = vec![vec![true; n]; n];
    let mut cand = RepCandidate::new();
    for g in &sc.generators {
        let m = match g.kind {
            GeneratorKind::GenusA(_) | GeneratorKind::GenusB(_) | GeneratorKind::Connector(_) => invertible(rng, &full, n)?,
            GeneratorKind::Monodromy(i) => invertible(rng, &sc.punctures[i].monodromy_mask(n), n)?,
            GeneratorKind::Stokes { puncture, .. } => {
                let zeroed = match sparsity {
                    Sparsity::None => false,
                    Sparsity::SolvedPuncture => puncture == p,
                    Sparsity::All => true,
                };
                if zeroed {
                    Matrix::identity(n)
                } else {
                    masked(rng, &sc.punctures[puncture].stokes_mask(n, &g.pattern), Matrix::identity(n))
                }
            }
        };
        cand.insert(g.name.clone(), m);
    }
    let pd = &sc.punctures[p];
    let (start, end) = sc.puncture_span(p);
    let x = sc.evaluate(&sc.relation[..start], &cand)?;
    let y = sc.evaluate(&sc.relation[end..], &cand)?;
    let c = pd.connector.map_or_else(|| Matrix::identity(n), |i| cand[&sc.generators[i].name].clone());
    let cinv = c.try_inverse("connector")?;
    let xinv = x.try_inverse("prefix")?;
    let yinv = y.try_inverse("suffix")?;
    // h · S_L ⋯ S_1 = t
    let t = &(&(&c * &xinv) * &yinv) * &cinv;
    let name = |i: usize| sc.generators[i].name.clone();
    let stokes: Vec<Matrix> = pd.stokes.iter().map(|&s| cand[&name(s)].clone()).collect();
    let solved = match mode {
        Unknown::Last => solve_last(pd, n, &t, &stokes, rng)?,
        Unknown::First => solve_first(pd, n, &t, &stokes, rng)?,
    };
    let Some((h, s)) = solved else { return Ok(None) };
    cand.insert(name(pd.monodromy), h);
    if let Some(s) = s {
        let idx = if mode == Unknown::Last { *pd.stokes.last().unwrap() } else { pd.stokes[0] };
        cand.insert(name(idx), s);
    }
    Ok(Some(cand))
}

/// Positions `(r, c)` where `mask` is set.
fn positions(mask: &[Vec<bool>]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (r, row) in mask.iter().enumerate() {
        for (c, &on) in row.iter().enumerate() {
            if on {
                out.push((r, c));
            }
        }
    }
    out
}

fn transpose_mask(mask: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let n = mask.len();
    (0..n).map(|r| (0..n).map(|c| mask[c][r]).collect()).collect()
}

/// Random point of the affine solution set of `a x = b`.
fn random_solution(a: Matrix, b: Vec<Scalar>, rng: &mut ChaCha8Rng) -> Result<Option<Vec<Scalar>>> {
    let rhs = Matrix::from_columns(b.len(), &[b]);
    let (x, kernel) = linear_solve(&a, &rhs)?;
    let Some(x) = x else { return Ok(None) };
    let mut v = x.column(0);
    for k in kernel.basis() {
        let c = small(rng);
        for (vi, ki) in v.iter_mut().zip(k) {
            *vi = &*vi + &(&c * ki);
        }
    }
    Ok(Some(v))
}

fn fill(n: usize, pos: &[(usize, usize)], vals: &[Scalar], base: Matrix) -> Matrix {
    let mut m = base;
    debug_assert_eq!(m.rows(), n);
    for (&(r, c), v) in pos.iter().zip(vals) {
        m.set(r, c, v.clone());
    }
    m
}

type Solved = Option<(Matrix, Option<Matrix>)>;

/// `g = h⁻¹` with `g R` unipotent in the last pattern, `R = t S_1⁻¹ ⋯ S_{L-1}⁻¹`.
fn solve_last(pd: &PunctureData, n: usize, t: &Matrix, stokes: &[Matrix], rng: &mut ChaCha8Rng) -> Result<Solved> {
    let mut r = t.clone();
    let l = stokes.len();
    for s in stokes.iter().take(l.saturating_sub(1)) {
        r = &r * &s.try_inverse("Stokes factor")?;
    }
    let gpos = positions(&transpose_mask(&pd.monodromy_mask(n)));
    let smask = if l == 0 {
        vec![vec![false; n]; n]
    } else {
        pd.stokes_mask(n, &pd.directions[l - 1].pairs)
    };
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for row in 0..n {
        for col in 0..n {
            if smask[row][col] {
                continue;
            }
            // (g R)_{row,col} = Σ_t g_{row,t} R_{t,col}
            rows.push(gpos.iter().map(|&(i, k)| if i == row { r.get(k, col).clone() } else { Scalar::zero() }).collect());
            rhs.push(if row == col { Scalar::one() } else { Scalar::zero() });
        }
    }
    for _ in 0..8 {
        let Some(v) = random_solution(Matrix::from_rows(rows.clone()), rhs.clone(), rng)? else { return Ok(None) };
        let g = fill(n, &gpos, &v, Matrix::zeros(n, n));
        if let Some(h) = g.inverse() {
            let s = (l > 0).then(|| &g * &r);
            return Ok(Some((h, s)));
        }
    }
    Ok(None)
}

/// `M (I + N) = g t` with `M = S_L ⋯ S_2`, linear in `(N, g)`.
fn solve_first(pd: &PunctureData, n: usize, t: &Matrix, stokes: &[Matrix], rng: &mut ChaCha8Rng) -> Result<Solved> {
    let mut m = Matrix::identity(n);
    for s in stokes.iter().skip(1).rev() {
        m = &m * s;
    }
    let npos = positions(&pd.stokes_mask(n, &pd.directions[0].pairs));
    let gpos = positions(&transpose_mask(&pd.monodromy_mask(n)));
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for row in 0..n {
        for col in 0..n {
            // (M N)_{row,col} - (g t)_{row,col} = -M_{row,col}
            let mut eq: Vec<Scalar> =
                npos.iter().map(|&(i, k)| if k == col { m.get(row, i).clone() } else { Scalar::zero() }).collect();
            eq.extend(gpos.iter().map(|&(i, k)| if i == row { -t.get(k, col) } else { Scalar::zero() }));
            rows.push(eq);
            rhs.push(-m.get(row, col));
        }
    }
    for _ in 0..8 {
        let Some(v) = random_solution(Matrix::from_rows(rows.clone()), rhs.clone(), rng)? else { return Ok(None) };
        let s1 = fill(n, &npos, &v[..npos.len()], Matrix::identity(n));
        let g = fill(n, &gpos, &v[npos.len()..], Matrix::zeros(n, n));
        if let Some(h) = g.inverse() {
            return Ok(Some((h, Some(s1))));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::git::is_stable;
    use crate::stokes::{build_scaffold, to_framed_point, Circle, IrregularClass, WildSurface};

    fn tame_class(n: usize) -> IrregularClass {
        IrregularClass::new(vec![Circle::tame(n)]).unwrap()
    }

    #[test]
    fn tame_sphere_forces_identity() {
        let sc = build_scaffold(&WildSurface::new(0, vec![tame_class(2)], 2).unwrap()).unwrap();
        let c = random_candidate(&sc, 7).unwrap();
        assert_eq!(c["h1"], Matrix::identity(2));
    }

    #[test]
    fn genus_one_solves_commutator() {
        let sc = build_scaffold(&WildSurface::new(1, vec![tame_class(2)], 2).unwrap()).unwrap();
        for seed in 0..5 {
            let c = random_candidate(&sc, seed).unwrap();
            let (a, b) = (&c["a1"], &c["b1"]);
            let comm = &(&(a * b) * &a.inverse().unwrap()) * &b.inverse().unwrap();
            assert_eq!(c["h1"], comm.inverse().unwrap());
        }
    }

    #[test]
    fn two_circle_candidates_verify() {
        let cl = |a| Circle::new(1, vec![(1, Scalar::from_integer(a))], 1).unwrap();
        let ws = WildSurface::new(0, vec![IrregularClass::new(vec![cl(1), cl(-1)]).unwrap()], 2).unwrap();
        let sc = build_scaffold(&ws).unwrap();
        for seed in 0..10 {
            let c = random_candidate(&sc, seed).unwrap();
            assert!(verify_candidate(&sc, &c).unwrap().is_empty());
        }
    }

    #[test]
    fn katz_puncture_after_tame_is_stable() {
        let k = Circle::new(2, vec![(3, Scalar::one())], 1).unwrap();
        let ws = WildSurface::new(0, vec![tame_class(2), IrregularClass::new(vec![k]).unwrap()], 2).unwrap();
        let sc = build_scaffold(&ws).unwrap();
        for seed in 0..5 {
            let c = random_candidate(&sc, seed).unwrap();
            assert!(is_stable(&to_framed_point(&sc, &c).unwrap(), seed).unwrap().stable);
        }
    }

    #[test]
    fn deterministic_in_seed() {
        let sc = build_scaffold(&WildSurface::new(1, vec![tame_class(3)], 3).unwrap()).unwrap();
        assert_eq!(random_candidate(&sc, 3).unwrap(), random_candidate(&sc, 3).unwrap());
    }
}
