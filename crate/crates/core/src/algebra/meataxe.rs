//! MeatAxe over `Q`: Norton's irreducibility test with a commutant fallback,
//! plus the restriction-of-scalars bridge from `Q(ζ_m)`-modules to `Q`-modules.

use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::{totient, Scalar};
use crate::linalg::{commutant, null_space, EchelonBuilder, Matrix, Subspace};
use crate::poly::{charpoly, factor};

/// Outcome of a MeatAxe run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Split {
    Reducible(Subspace),
    Irreducible,
    /// No candidate element settled the question (e.g. quaternionic endomorphism rings).
    Inconclusive,
}

/// A module over `Q`: generators for spinning plus a spanning set of the acting algebra.
#[derive(Clone, Debug)]
pub struct QModule {
    pub n: usize,
    pub gens: Vec<Matrix>,
    pub elements: Vec<Matrix>,
}

/// Smallest subspace containing `vectors` and invariant under `gens`.
pub fn spin(n: usize, gens: &[Matrix], vectors: &[Vec<Scalar>]) -> Subspace {
    let mut eb = EchelonBuilder::new(n);
    let mut queue = Vec::new();
    for v in vectors {
        if eb.insert(v) {
            queue.push(v.clone());
        }
    }
    while let Some(v) = queue.pop() {
        if eb.len() == n {
            break;
        }
        for g in gens {
            let w = g.mul_vec(&v);
            if eb.insert(&w) {
                queue.push(w);
            }
        }
    }
    eb.to_subspace()
}

/// Matrices of the restrictions of `ms` to an invariant subspace, in its echelon basis.
pub fn restrict(ms: &[Matrix], u: &Subspace) -> Vec<Matrix> {
    let k = u.dim();
    ms.iter()
        .map(|m| {
            let cols: Vec<Vec<Scalar>> = u
                .basis()
                .iter()
                .map(|b| u.coordinates(&m.mul_vec(b)).expect("subspace is not invariant"))
                .collect();
            Matrix::from_columns(k, &cols)
        })
        .collect()
}

/// Matrices of the induced action on `V / U`, in the basis of non-pivot unit vectors.
pub fn quotient(ms: &[Matrix], u: &Subspace) -> Vec<Matrix> {
    let free = non_pivots(u);
    ms.iter()
        .map(|m| {
            let cols: Vec<Vec<Scalar>> = free
                .iter()
                .map(|&j| {
                    let img = u.reduce(&m.column(j));
                    free.iter().map(|&i| img[i].clone()).collect()
                })
                .collect();
            Matrix::from_columns(free.len(), &cols)
        })
        .collect()
}

fn non_pivots(u: &Subspace) -> Vec<usize> {
    let piv = u.pivots();
    (0..u.ambient_dim()).filter(|c| !piv.contains(c)).collect()
}

/// Maps a subspace given in the echelon coordinates of `u` back into the ambient space.
pub fn lift_from_sub(u: &Subspace, s: &Subspace) -> Subspace {
    let n = u.ambient_dim();
    let vecs: Vec<Vec<Scalar>> = s
        .basis()
        .iter()
        .map(|c| {
            let mut v = vec![Scalar::zero(); n];
            for (x, b) in c.iter().zip(u.basis()) {
                crate::linalg::axpy(&mut v, x, b);
            }
            v
        })
        .collect();
    Subspace::span(n, &vecs)
}

/// Maps a subspace of `V / U` (non-pivot coordinates) to its preimage in `V`.
pub fn lift_from_quotient(u: &Subspace, s: &Subspace) -> Subspace {
    let n = u.ambient_dim();
    let free = non_pivots(u);
    let mut vecs: Vec<Vec<Scalar>> = s
        .basis()
        .iter()
        .map(|c| {
            let mut v = vec![Scalar::zero(); n];
            for (x, &j) in c.iter().zip(&free) {
                v[j] = x.clone();
            }
            v
        })
        .collect();
    vecs.extend(u.basis().iter().cloned());
    Subspace::span(n, &vecs)
}

impl QModule {
    pub fn new(n: usize, gens: Vec<Matrix>, elements: Vec<Matrix>) -> QModule {
        QModule { n, gens, elements }
    }

    pub fn restrict(&self, u: &Subspace) -> QModule {
        QModule { n: u.dim(), gens: restrict(&self.gens, u), elements: restrict(&self.elements, u) }
    }

    pub fn quotient(&self, u: &Subspace) -> QModule {
        QModule { n: self.n - u.dim(), gens: quotient(&self.gens, u), elements: quotient(&self.elements, u) }
    }

    fn transposed_gens(&self) -> Vec<Matrix> {
        self.gens.iter().map(Matrix::transpose).collect()
    }

    fn candidates(&self, rng: &mut ChaCha8Rng, tries: usize) -> Vec<Matrix> {
        let mut out: Vec<Matrix> = self.gens.clone();
        let pool = &self.elements;
        if pool.is_empty() {
            return out;
        }
        for t in 0..tries {
            let terms = 1 + (t % 3);
            let mut a = Matrix::zeros(self.n, self.n);
            for _ in 0..terms {
                let c = Scalar::from_integer(loop {
                    let c: i64 = rng.gen_range(-2..=2);
                    if c != 0 {
                        break c;
                    }
                });
                let x = &pool[rng.gen_range(0..pool.len())];
                let term = if t % 2 == 1 { x * &pool[rng.gen_range(0..pool.len())] } else { x.clone() };
                a = &a + &term.scale(&c);
            }
            out.push(a);
        }
        out
    }

    /// Finds a proper nonzero invariant subspace or certifies irreducibility.
    pub fn split(&self, rng: &mut ChaCha8Rng) -> Split {
        let n = self.n;
        if n <= 1 {
            return Split::Irreducible;
        }
        let tgens = self.transposed_gens();
        for a in self.candidates(rng, 48) {
            let mut found: Vec<Subspace> = Vec::new();
            let mut certified = false;
            for (f, _) in factor(&charpoly(&a)) {
                let fa = f.eval_matrix(&a);
                let kernel = null_space(&fa);
                for v in kernel.basis().iter().take(4) {
                    let s = spin(n, &self.gens, std::slice::from_ref(v));
                    if s.dim() < n {
                        found.push(s);
                    }
                }
                if found.is_empty() && kernel.dim() == f.degree() {
                    let dual = null_space(&fa.transpose());
                    let w = &dual.basis()[0];
                    let s = spin(n, &tgens, std::slice::from_ref(w));
                    if s.dim() < n {
                        // annihilator of an invariant subspace for the transposes is invariant
                        found.push(s.annihilator());
                    } else {
                        certified = true;
                    }
                    break;
                }
            }
            // smallest dimension, then earliest pivots
            if let Some(s) = found.into_iter().min_by(|x, y| (x.dim(), x.pivots()).cmp(&(y.dim(), y.pivots()))) {
                return Split::Reducible(s);
            }
            if certified {
                return Split::Irreducible;
            }
        }
        self.split_by_commutant(rng)
    }

    /// Fallback: a zero divisor or non-trivial primary decomposition in the commutant.
    fn split_by_commutant(&self, rng: &mut ChaCha8Rng) -> Split {
        let n = self.n;
        let c = commutant(n, &self.gens);
        let basis: Vec<Matrix> = c.basis().iter().map(|v| Matrix::unflatten(n, v)).collect();
        let mut cands = basis.clone();
        for _ in 0..16 {
            let mut x = Matrix::zeros(n, n);
            for b in &basis {
                x = &x + &b.scale(&Scalar::from_integer(rng.gen_range(-3..=3)));
            }
            cands.push(x);
        }
        for x in cands {
            for (f, _) in factor(&charpoly(&x)) {
                let k = null_space(&f.eval_matrix(&x));
                if k.dim() > 0 && k.dim() < n {
                    // kernels of endomorphisms are submodules
                    return Split::Reducible(k);
                }
            }
        }
        Split::Inconclusive
    }

    /// Chain `0 = V_0 ⊂ V_1 ⊂ ... ⊂ V_k = V` with irreducible factors.
    pub fn composition_series(&self, rng: &mut ChaCha8Rng) -> Option<Vec<Subspace>> {
        if self.n == 0 {
            return Some(vec![Subspace::zero(0)]);
        }
        match self.split(rng) {
            Split::Irreducible => Some(vec![Subspace::zero(self.n), Subspace::full(self.n)]),
            Split::Inconclusive => None,
            Split::Reducible(u) => {
                let lower = self.restrict(&u).composition_series(rng)?;
                let upper = self.quotient(&u).composition_series(rng)?;
                let mut chain: Vec<Subspace> = lower.iter().map(|s| lift_from_sub(&u, s)).collect();
                chain.extend(upper.iter().skip(1).map(|s| lift_from_quotient(&u, s)));
                Some(chain)
            }
        }
    }
}

/// Deterministic generator for MeatAxe candidates.
pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ 0x6d65_6174_6178_6521)
}

/// Viewing `K^n`, `K = Q(ζ_m)`, as `Q^{n φ(m)}`: entry `i` occupies coordinates `i φ .. (i+1) φ`.
#[derive(Clone, Copy, Debug)]
pub struct ScalarRestriction {
    pub n: usize,
    pub conductor: u32,
    pub phi: usize,
}

impl ScalarRestriction {
    pub fn new(n: usize, conductor: u32) -> ScalarRestriction {
        ScalarRestriction { n, conductor, phi: totient(conductor) as usize }
    }

    pub fn dim(&self) -> usize {
        self.n * self.phi
    }

    pub fn vector(&self, v: &[Scalar]) -> Vec<Scalar> {
        v.iter()
            .flat_map(|x| x.coefficients(self.conductor).into_iter().map(Scalar::from_rational))
            .collect()
    }

    pub fn unvector(&self, w: &[Scalar]) -> Vec<Scalar> {
        w.chunks(self.phi)
            .map(|c| {
                let coeffs: Vec<BigRational> = c.iter().map(|x| x.as_rational().expect("rational").clone()).collect();
                Scalar::from_poly(self.conductor, coeffs)
            })
            .collect()
    }

    /// Multiplication by a scalar as a `φ × φ` rational matrix.
    fn scalar_block(&self, x: &Scalar) -> Vec<Vec<BigRational>> {
        let phi = self.phi;
        (0..phi)
            .map(|t| {
                let p = x * &Scalar::root_of_unity(self.conductor, t as i64);
                p.coefficients(self.conductor)
            })
            .collect() // column t
    }

    pub fn matrix(&self, m: &Matrix) -> Matrix {
        let (phi, n) = (self.phi, self.n);
        let d = n * phi;
        let mut out = Matrix::zeros(d, d);
        for i in 0..n {
            for j in 0..n {
                let x = m.get(i, j);
                if x.is_zero() {
                    continue;
                }
                let cols = self.scalar_block(x);
                for (t, col) in cols.iter().enumerate() {
                    for (s, c) in col.iter().enumerate() {
                        if !c.is_zero() {
                            out.set(i * phi + s, j * phi + t, Scalar::from_rational(c.clone()));
                        }
                    }
                }
            }
        }
        out
    }

    /// Multiplication by `ζ_m` on every coordinate.
    pub fn zeta(&self) -> Matrix {
        self.matrix(&Matrix::identity(self.n).scale(&Scalar::root_of_unity(self.conductor, 1)))
    }

    /// The `Q`-module underlying the `K`-module of `gens`, with `elements` spanning the algebra.
    pub fn module(&self, gens: &[Matrix], elements: &[Matrix]) -> QModule {
        let mut g: Vec<Matrix> = gens.iter().map(|m| self.matrix(m)).collect();
        let mut e: Vec<Matrix> = elements.iter().map(|m| self.matrix(m)).collect();
        if self.phi > 1 {
            let z = self.zeta();
            let mut zp = Matrix::identity(self.dim());
            let base = e.clone();
            for _ in 1..self.phi {
                zp = &zp * &z;
                e.extend(base.iter().map(|b| &zp * b));
            }
            g.push(z);
        }
        QModule::new(self.dim(), g, e)
    }

    /// A `ζ`-stable `Q`-subspace as a `K`-subspace.
    pub fn subspace_to_k(&self, w: &Subspace) -> Subspace {
        let vs: Vec<Vec<Scalar>> = w.basis().iter().map(|v| self.unvector(v)).collect();
        Subspace::span(self.n, &vs)
    }

    /// The `Q`-span of `K`-multiples of a `K`-subspace.
    pub fn subspace_to_q(&self, u: &Subspace) -> Subspace {
        let mut vs = Vec::new();
        for b in u.basis() {
            for t in 0..self.phi {
                let z = Scalar::root_of_unity(self.conductor, t as i64);
                let v: Vec<Scalar> = b.iter().map(|x| x * &z).collect();
                vs.push(self.vector(&v));
            }
        }
        Subspace::span(self.dim(), &vs)
    }
}

/// Smallest conductor covering all entries of `ms`.
pub fn conductor_of(ms: &[Matrix]) -> u32 {
    use num_integer::Integer;
    ms.iter().fold(1u32, |acc, m| acc.lcm(&m.conductor()))
}
