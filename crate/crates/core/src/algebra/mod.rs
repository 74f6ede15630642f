//! Matrix algebras generated by finitely many matrices, their radicals, and
//! module decompositions of the natural module.

mod decompose;
pub mod meataxe;
mod oracle;

pub use decompose::{invariant_subspace, irreducible_summands, isotypic_decomposition, restrict_to};
pub use oracle::{composition_series, radical_oracle};

use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::linalg::{kernel_of_forms, EchelonBuilder, Matrix, Subspace};

/// Unital subalgebra of `n × n` matrices with a canonical echelon basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixAlgebra {
    n: usize,
    span: Subspace,
    basis: Vec<Matrix>,
}

impl MatrixAlgebra {
    pub fn ambient_n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Matrix] {
        &self.basis
    }

    /// The algebra as a subspace of flattened `n²`-vectors.
    pub fn as_subspace(&self) -> &Subspace {
        &self.span
    }

    pub fn contains(&self, m: &Matrix) -> bool {
        self.span.contains(&m.flatten())
    }

    pub fn element(&self, coords: &[Scalar]) -> Matrix {
        let mut acc = Matrix::zeros(self.n, self.n);
        for (c, b) in coords.iter().zip(&self.basis) {
            if !c.is_zero() {
                acc = &acc + &b.scale(c);
            }
        }
        acc
    }

    /// True if every product of basis elements stays in the span.
    pub fn is_closed(&self) -> bool {
        self.basis.iter().all(|a| self.basis.iter().all(|b| self.contains(&(a * b))))
    }

    /// Least common multiple of the conductors of the basis entries.
    pub fn conductor(&self) -> u32 {
        use num_integer::Integer;
        self.basis.iter().fold(1, |acc, b| acc.lcm(&b.conductor()))
    }
}

/// Smallest unital subalgebra of `n × n` matrices containing `generators`.
pub fn spin_algebra(n: usize, generators: &[Matrix]) -> Result<MatrixAlgebra> {
    for (i, g) in generators.iter().enumerate() {
        if g.rows() != n || g.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "generator {i} is {}x{}, expected {n}x{n}",
                g.rows(),
                g.cols()
            )));
        }
    }
    let mut eb = EchelonBuilder::new(n * n);
    let id = Matrix::identity(n);
    let mut queue = Vec::new();
    if n > 0 {
        eb.insert(&id.flatten());
        queue.push(id);
    }
    while let Some(w) = queue.pop() {
        for g in generators {
            let p = g * &w;
            if eb.insert(&p.flatten()) {
                queue.push(p);
            }
        }
    }
    let span = eb.to_subspace();
    let basis = span.basis().iter().map(|v| Matrix::unflatten(n, v)).collect();
    Ok(MatrixAlgebra { n, span, basis })
}

/// Nilpotent ideal certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadicalCertificate {
    /// Flattened `n²`-vectors spanning the radical.
    pub radical: Subspace,
    /// Least `k` with `rad^k = 0`.
    pub nilpotency_index: usize,
    pub witness: Option<Matrix>,
}

impl RadicalCertificate {
    pub fn is_zero(&self) -> bool {
        self.radical.is_zero()
    }

    pub fn elements(&self, n: usize) -> Vec<Matrix> {
        self.radical.basis().iter().map(|v| Matrix::unflatten(n, v)).collect()
    }

    pub(crate) fn from_radical(n: usize, radical: Subspace) -> RadicalCertificate {
        let elems: Vec<Matrix> = radical.basis().iter().map(|v| Matrix::unflatten(n, v)).collect();
        let witness = elems.first().cloned();
        RadicalCertificate { nilpotency_index: nilpotency_index(n, &elems), radical, witness }
    }
}

/// Index of nilpotency of the ideal spanned by `elems` (1 for the zero ideal).
fn nilpotency_index(n: usize, elems: &[Matrix]) -> usize {
    let mut power: Vec<Matrix> = elems.to_vec();
    let mut k = 1;
    while !power.is_empty() {
        let mut eb = EchelonBuilder::new(n * n);
        let mut next = Vec::new();
        for p in &power {
            for e in elems {
                let q = p * e;
                if eb.insert(&q.flatten()) {
                    next.push(q);
                }
            }
        }
        power = next;
        k += 1;
        if k > n + 1 {
            break;
        }
    }
    k
}

/// Radical as the kernel of the trace form `tr(b_i b_j)`.
pub fn radical_trace(a: &MatrixAlgebra) -> RadicalCertificate {
    let d = a.dim();
    let products: Vec<Vec<Scalar>> =
        a.basis.iter().map(|bi| a.basis.iter().map(|bj| trace_of_product(bi, bj)).collect()).collect();
    let null = kernel_of_forms(d, products);
    let vectors: Vec<Vec<Scalar>> = null.basis().iter().map(|c| a.element(c).flatten()).collect();
    RadicalCertificate::from_radical(a.n, Subspace::span(a.n * a.n, &vectors))
}

fn trace_of_product(a: &Matrix, b: &Matrix) -> Scalar {
    let n = a.rows();
    let mut t = Scalar::zero();
    for i in 0..n {
        for k in 0..n {
            let x = a.get(i, k);
            if x.is_zero() {
                continue;
            }
            let y = b.get(k, i);
            if !y.is_zero() {
                t += &(x * y);
            }
        }
    }
    t
}
