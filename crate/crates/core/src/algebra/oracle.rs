//! Radical computed from a composition series, independent of the trace form.

use crate::algebra::meataxe::{conductor_of, rng_for, ScalarRestriction};
use crate::algebra::{MatrixAlgebra, RadicalCertificate};
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::linalg::{dot, kernel_of_forms, Matrix, Subspace};

/// Composition series of `K^n` under `gens`, found by the MeatAxe alone.
pub fn composition_series(n: usize, gens: &[Matrix], seed: u64) -> Result<Vec<Subspace>> {
    let alg = crate::algebra::spin_algebra(n, gens)?;
    let r = ScalarRestriction::new(n, conductor_of(&[gens, alg.basis()].concat()));
    let module = r.module(gens, alg.basis());
    let chain = module
        .composition_series(&mut rng_for(seed))
        .ok_or_else(|| Error::Inconclusive("MeatAxe could not decide irreducibility of a factor".into()))?;
    let mut out: Vec<Subspace> = chain.iter().map(|s| r.subspace_to_k(s)).collect();
    out.dedup();
    Ok(out)
}

/// Radical as the elements mapping each composition step into the previous one.
pub fn radical_oracle(a: &MatrixAlgebra) -> Result<RadicalCertificate> {
    let n = a.ambient_n();
    let chain = composition_series(n, a.basis(), 0)?;
    let d = a.dim();
    let mut forms = Vec::new();
    for w in chain.windows(2) {
        let ann = w[0].annihilator();
        for v in w[1].basis() {
            let images: Vec<Vec<Scalar>> = a.basis().iter().map(|b| b.mul_vec(v)).collect();
            for y in ann.basis() {
                forms.push(images.iter().map(|img| dot(y, img)).collect::<Vec<_>>());
            }
        }
    }
    let coeffs = kernel_of_forms(d, forms);
    let vectors: Vec<Vec<Scalar>> = coeffs.basis().iter().map(|c| a.element(c).flatten()).collect();
    Ok(RadicalCertificate::from_radical(n, Subspace::span(n * n, &vectors)))
}
