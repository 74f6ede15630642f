//! Invariant subspaces, isotypic components and irreducible summands of `K^n`.

use rand::Rng;

use crate::algebra::meataxe::{conductor_of, lift_from_sub, restrict, rng_for, ScalarRestriction, Split};
use crate::algebra::{radical_trace, spin_algebra};
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::linalg::{kernel_of_forms, linear_solve, null_space, EchelonBuilder, Matrix, Subspace};
use crate::poly::{charpoly, factor};

/// Matrices of `gens` restricted to the invariant subspace `u`, in its echelon basis.
pub fn restrict_to(gens: &[Matrix], u: &Subspace) -> Vec<Matrix> {
    restrict(gens, u)
}

/// A proper nonzero subspace invariant under all of `gens`, if one exists.
pub fn invariant_subspace(n: usize, gens: &[Matrix], seed: u64) -> Result<Option<Subspace>> {
    if n <= 1 {
        return Ok(None);
    }
    let alg = spin_algebra(n, gens)?;
    if alg.dim() == n * n {
        return Ok(None);
    }
    let rad = radical_trace(&alg);
    if !rad.is_zero() {
        // common kernel of a nonzero nilpotent ideal
        let rows = rad.elements(n).into_iter().flat_map(|r| r.row_vectors());
        return Ok(Some(kernel_of_forms(n, rows)));
    }
    let r = ScalarRestriction::new(n, conductor_of(&[gens, alg.basis()].concat()));
    let module = r.module(gens, alg.basis());
    match module.split(&mut rng_for(seed)) {
        Split::Reducible(w) => Ok(Some(r.subspace_to_k(&w))),
        Split::Irreducible => Ok(None),
        Split::Inconclusive => Err(Error::Inconclusive("no MeatAxe certificate found".into())),
    }
}

/// Isotypic components of a semisimple natural module.
pub fn isotypic_decomposition(n: usize, gens: &[Matrix], seed: u64) -> Result<Vec<Subspace>> {
    let alg = spin_algebra(n, gens)?;
    if !radical_trace(&alg).is_zero() {
        return Err(Error::NotSemisimple);
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let r = ScalarRestriction::new(n, conductor_of(&[gens, alg.basis()].concat()));
    let module = r.module(gens, alg.basis());
    let d = module.n;
    // basis of the Q-algebra, then its center
    let mut eb = EchelonBuilder::new(d * d);
    for e in &module.elements {
        eb.insert(&e.flatten());
    }
    let abasis: Vec<Matrix> = eb.to_subspace().basis().iter().map(|v| Matrix::unflatten(d, v)).collect();
    let comms: Vec<Vec<Matrix>> =
        module.gens.iter().map(|g| abasis.iter().map(|b| b.commutator(g)).collect()).collect();
    let forms = comms.iter().flat_map(|cs| (0..d * d).map(move |e| cs.iter().map(|c| c.entries()[e].clone()).collect()));
    let zc = kernel_of_forms(abasis.len(), forms);
    let center: Vec<Matrix> = zc
        .basis()
        .iter()
        .map(|c| {
            let mut acc = Matrix::zeros(d, d);
            for (x, b) in c.iter().zip(&abasis) {
                acc = &acc + &b.scale(x);
            }
            acc
        })
        .collect();

    let mut rng = rng_for(seed);
    let mut pending = vec![Subspace::full(d)];
    let mut done = Vec::new();
    let mut tries = 0;
    while let Some(w) = pending.pop() {
        let zw = restrict(&center, &w);
        let zdim = {
            let mut e = EchelonBuilder::new(w.dim() * w.dim());
            zw.iter().filter(|z| e.insert(&z.flatten())).count()
        };
        let mut cands = zw.clone();
        for _ in 0..8 {
            let mut x = Matrix::zeros(w.dim(), w.dim());
            for z in &zw {
                x = &x + &z.scale(&Scalar::from_integer(rng.gen_range(-3..=3)));
            }
            cands.push(x);
        }
        let mut resolved = false;
        for z in &cands {
            let fs = factor(&charpoly(z));
            if fs.len() > 1 {
                let parts: Vec<Subspace> = fs
                    .iter()
                    .map(|(f, e)| lift_from_sub(&w, &null_space(&f.pow(*e).eval_matrix(z))))
                    .collect();
                // keep factor order: later parts are processed first from the stack
                pending.extend(parts.into_iter().rev());
                resolved = true;
                break;
            }
            if fs.len() == 1 && fs[0].0.degree() == zdim {
                done.push(w.clone());
                resolved = true;
                break;
            }
        }
        if !resolved {
            tries += 1;
            if tries > 16 {
                return Err(Error::Inconclusive("center did not separate isotypic components".into()));
            }
            pending.push(w);
        }
    }
    Ok(done.iter().map(|w| r.subspace_to_k(w)).collect())
}

/// Decomposition into absolutely irreducible invariant summands.
pub fn irreducible_summands(n: usize, gens: &[Matrix], seed: u64) -> Result<Vec<Subspace>> {
    let alg = spin_algebra(n, gens)?;
    if !radical_trace(&alg).is_zero() {
        return Err(Error::NotSemisimple);
    }
    let mut out = Vec::new();
    split_recursive(&Subspace::full(n), gens, seed, &mut out)?;
    for s in &out {
        let k = s.dim();
        if spin_algebra(k, &restrict(gens, s))?.dim() != k * k {
            return Err(Error::SplittingFieldRequired(format!(
                "a summand of dimension {k} is irreducible but not absolutely irreducible"
            )));
        }
    }
    Ok(out)
}

fn split_recursive(w: &Subspace, ambient_gens: &[Matrix], seed: u64, out: &mut Vec<Subspace>) -> Result<()> {
    let k = w.dim();
    let gens = restrict(ambient_gens, w);
    let Some(u) = invariant_subspace(k, &gens, seed)? else {
        out.push(w.clone());
        return Ok(());
    };
    let comp = invariant_complement(k, &gens, &u)?;
    split_recursive(&lift_from_sub(w, &u), ambient_gens, seed, out)?;
    split_recursive(&lift_from_sub(w, &comp), ambient_gens, seed, out)
}

/// An invariant complement of `u`: the kernel of an equivariant projection onto `u`.
fn invariant_complement(k: usize, gens: &[Matrix], u: &Subspace) -> Result<Subspace> {
    let kk = k * k;
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    let mut rhs: Vec<Scalar> = Vec::new();
    // X g - g X = 0
    for g in gens {
        for i in 0..k {
            for j in 0..k {
                let mut row = vec![Scalar::zero(); kk];
                for t in 0..k {
                    row[i * k + t] += g.get(t, j);
                    row[t * k + j] -= g.get(i, t);
                }
                rows.push(row);
                rhs.push(Scalar::zero());
            }
        }
    }
    // X b = b for b in u
    for b in u.basis() {
        for i in 0..k {
            let mut row = vec![Scalar::zero(); kk];
            for t in 0..k {
                row[i * k + t] = b[t].clone();
            }
            rows.push(row);
            rhs.push(b[i].clone());
        }
    }
    // y X = 0 for y in ann(u)
    for y in u.annihilator().basis() {
        for j in 0..k {
            let mut row = vec![Scalar::zero(); kk];
            for t in 0..k {
                row[t * k + j] = y[t].clone();
            }
            rows.push(row);
            rhs.push(Scalar::zero());
        }
    }
    let a = Matrix::from_rows(rows);
    let b = Matrix::from_columns(rhs.len(), &[rhs]);
    let (x, _) = linear_solve(&a, &b)?;
    let x = x.ok_or(Error::NotSemisimple)?;
    Ok(null_space(&Matrix::unflatten(k, &x.column(0))))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| Scalar::from_integer(x)).collect()
    }

    #[test]
    fn invariant_subspace_examples() {
        let j = Matrix::from_ints(&[&[1, 1], &[0, 1]]);
        assert_eq!(invariant_subspace(2, &[j], 0).unwrap(), Some(Subspace::coordinate(2, &[0])));
        let pair = [Matrix::from_ints(&[&[0, 1], &[1, 0]]), Matrix::diag_ints(&[1, -1])];
        assert_eq!(invariant_subspace(2, &pair, 0).unwrap(), None);
        assert_eq!(invariant_subspace(2, &[Matrix::identity(2)], 0).unwrap(), Some(Subspace::coordinate(2, &[0])));
    }

    #[test]
    fn invariant_subspace_not_absolutely_irreducible() {
        let rot = Matrix::from_ints(&[&[0, -1], &[1, 0]]);
        assert_eq!(invariant_subspace(2, &[rot.clone()], 0).unwrap(), None);
        // over Q(i) the rotation has an eigenline
        let i = Scalar::root_of_unity(4, 1);
        let rot_i = Matrix::from_rows(vec![
            vec![Scalar::zero(), Scalar::from_integer(-1)],
            vec![Scalar::one(), Scalar::zero()],
        ]);
        let gens = [rot_i, Matrix::identity(2).scale(&i)];
        let u = invariant_subspace(2, &gens, 0).unwrap().unwrap();
        assert_eq!(u.dim(), 1);
        assert!(u.is_invariant_under(&rot));
    }

    #[test]
    fn isotypic_examples() {
        let comps = isotypic_decomposition(3, &[Matrix::diag_ints(&[2, 2, 3])], 0).unwrap();
        assert_eq!(comps, vec![Subspace::coordinate(3, &[0, 1]), Subspace::coordinate(3, &[2])]);
        assert_eq!(isotypic_decomposition(3, &[Matrix::identity(3)], 0).unwrap(), vec![Subspace::full(3)]);
        let comps = isotypic_decomposition(2, &[Matrix::from_ints(&[&[0, 1], &[1, 0]])], 0).unwrap();
        assert_eq!(comps, vec![Subspace::span(2, &[ints(&[1, 1])]), Subspace::span(2, &[ints(&[1, -1])])]);
        let j = Matrix::from_ints(&[&[1, 1], &[0, 1]]);
        assert_eq!(isotypic_decomposition(2, &[j], 0), Err(Error::NotSemisimple));
    }

    #[test]
    fn summands_of_diagonal() {
        let s = irreducible_summands(3, &[Matrix::diag_ints(&[2, 2, 3])], 0).unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s.iter().map(Subspace::dim).sum::<usize>(), 3);
        let rot = Matrix::from_ints(&[&[0, -1], &[1, 0]]);
        assert!(matches!(irreducible_summands(2, &[rot], 0), Err(Error::SplittingFieldRequired(_))));
    }
}
