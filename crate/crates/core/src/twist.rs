//! Automorphisms of `GL_n` in factored form `Inn(a) ∘ σ^ε`, twisted elements,
//! normalization of outer parts and the doubled matrix embedding.

use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Outer part of an automorphism: identity or `σ(g) = (gᵀ)⁻¹`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Outer {
    Identity,
    Sigma,
}

impl Outer {
    pub fn compose(self, other: Outer) -> Outer {
        if self == other {
            Outer::Identity
        } else {
            Outer::Sigma
        }
    }

    pub fn is_sigma(self) -> bool {
        self == Outer::Sigma
    }
}

/// `σ(g) = (gᵀ)⁻¹`.
pub fn sigma(g: &Matrix) -> Result<Matrix> {
    g.transpose().try_inverse("sigma of a singular matrix")
}

/// `g ↦ inner · σ?(g) · inner⁻¹`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automorphism {
    inner: Matrix,
    inner_inv: Matrix,
    outer: Outer,
}

impl Automorphism {
    pub fn new(inner: Matrix, outer: Outer) -> Result<Automorphism> {
        let inner_inv = inner.try_inverse("inner part of an automorphism")?;
        Ok(Automorphism { inner, inner_inv, outer })
    }

    pub fn identity(n: usize) -> Automorphism {
        Automorphism { inner: Matrix::identity(n), inner_inv: Matrix::identity(n), outer: Outer::Identity }
    }

    pub fn sigma(n: usize) -> Automorphism {
        Automorphism { inner: Matrix::identity(n), inner_inv: Matrix::identity(n), outer: Outer::Sigma }
    }

    pub fn inner(&self) -> &Matrix {
        &self.inner
    }

    pub fn outer(&self) -> Outer {
        self.outer
    }

    pub fn n(&self) -> usize {
        self.inner.rows()
    }

    pub fn is_pure_outer(&self) -> bool {
        self.inner.is_identity()
    }

    fn outer_apply(&self, g: &Matrix) -> Result<Matrix> {
        match self.outer {
            Outer::Identity => Ok(g.clone()),
            Outer::Sigma => sigma(g),
        }
    }

    /// Image of an invertible `g`.
    pub fn apply(&self, g: &Matrix) -> Result<Matrix> {
        Ok(&(&self.inner * &self.outer_apply(g)?) * &self.inner_inv)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Automorphism) -> Result<Automorphism> {
        let inner = &self.inner * &self.outer_apply(&other.inner)?;
        Automorphism::new(inner, self.outer.compose(other.outer))
    }
}

/// `dφ(ξ) = inner · σ?(ξ) · inner⁻¹` with `σ?(ξ) = ξ` or `-ξᵀ`.
pub fn differential_action(phi: &Automorphism, xi: &Matrix) -> Matrix {
    let s = match phi.outer {
        Outer::Identity => xi.clone(),
        Outer::Sigma => -&xi.transpose(),
    };
    &(&phi.inner * &s) * &phi.inner_inv
}

/// A point `(g, φ)` of the bitorsor `G × {φ}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedElement {
    pub g: Matrix,
    pub phi: Automorphism,
}

impl TwistedElement {
    pub fn new(g: Matrix, phi: Automorphism) -> Result<TwistedElement> {
        if g.rows() != phi.n() || !g.is_square() {
            return Err(Error::DimensionMismatch("group part and automorphism sizes differ".into()));
        }
        g.try_inverse("group part of a twisted element")?;
        Ok(TwistedElement { g, phi })
    }

    pub fn untwisted(g: Matrix) -> TwistedElement {
        let n = g.rows();
        TwistedElement { g, phi: Automorphism::identity(n) }
    }

    pub fn n(&self) -> usize {
        self.g.rows()
    }

    pub fn is_normalized(&self) -> bool {
        self.phi.is_pure_outer()
    }

    pub fn outer(&self) -> Outer {
        self.phi.outer
    }

    /// `(g, φ)(h, ψ) = (g φ(h), φ ψ)`.
    pub fn mul(&self, other: &TwistedElement) -> Result<TwistedElement> {
        Ok(TwistedElement { g: &self.g * &self.phi.apply(&other.g)?, phi: self.phi.compose(&other.phi)? })
    }

    /// The map `x ↦ g φ(x)` underlying twisted conjugation.
    pub fn act_on(&self, x: &Matrix) -> Result<Matrix> {
        Ok(&self.g * &self.phi.apply(x)?)
    }
}

/// Moves every element to the bitorsor of its pure outer part:
/// `(g, Inn(a) ∘ σ^ε) ↦ (g a, σ^ε)`, which preserves `Ad`.
pub fn normalize(tuple: &[TwistedElement]) -> Vec<TwistedElement> {
    tuple
        .iter()
        .map(|x| {
            let n = x.n();
            let phi = match x.phi.outer {
                Outer::Identity => Automorphism::identity(n),
                Outer::Sigma => Automorphism::sigma(n),
            };
            TwistedElement { g: &x.g * &x.phi.inner, phi }
        })
        .collect()
}

/// The faithful `2n × 2n` realization of `G ⋊ {id, σ}`.
pub fn embed_doubled(x: &TwistedElement) -> Result<Matrix> {
    if !x.is_normalized() {
        return Err(Error::Unnormalized(0));
    }
    let n = x.n();
    let gt = sigma(&x.g)?;
    let z = Matrix::zeros(n, n);
    Ok(match x.phi.outer {
        Outer::Identity => Matrix::block_diag(&[x.g.clone(), gt]),
        Outer::Sigma => Matrix::block(&[vec![z.clone(), x.g.clone()], vec![gt, z]]),
    })
}

/// Doubled image `diag(ξ, -ξᵀ)` of a Lie algebra element.
pub fn embed_doubled_lie(xi: &Matrix) -> Matrix {
    Matrix::block_diag(&[xi.clone(), -&xi.transpose()])
}

/// `c·I` is fixed by `dφ` for all loops iff no loop carries the outer flag.
pub fn scalars_fixed(tuple: &[TwistedElement]) -> bool {
    tuple.iter().all(|x| x.phi.outer == Outer::Identity)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Scalar;

    fn jordan() -> Matrix {
        Matrix::from_ints(&[&[1, 1], &[0, 1]])
    }

    fn scalar_matrix(n: usize, c: i64) -> Matrix {
        Matrix::identity(n).scale(&Scalar::from_integer(c))
    }

    #[test]
    fn normalize_examples() {
        let g = jordan();
        let phi = Automorphism::new(g.inverse().unwrap(), Outer::Identity).unwrap();
        let out = normalize(&[TwistedElement::new(g.clone(), phi).unwrap()]);
        assert_eq!(out, vec![TwistedElement::untwisted(Matrix::identity(2))]);

        let x = TwistedElement::untwisted(g.clone());
        assert_eq!(normalize(std::slice::from_ref(&x)), vec![x]);

        // (I, Inn(A)∘σ) ↦ (A, σ), keeping Ad fixed
        let a = Matrix::from_ints(&[&[2, 1], &[1, 1]]);
        let x = TwistedElement::new(Matrix::identity(2), Automorphism::new(a.clone(), Outer::Sigma).unwrap()).unwrap();
        let y = &normalize(std::slice::from_ref(&x))[0];
        assert_eq!(y.g, a);
        assert!(y.phi.is_pure_outer() && y.outer() == Outer::Sigma);
        let h = Matrix::from_ints(&[&[1, 3], &[0, 1]]);
        let ad = |t: &TwistedElement| &t.act_on(&h).unwrap() * &t.g.inverse().unwrap();
        assert_eq!(ad(&x), ad(y));
    }

    #[test]
    fn embedding_examples() {
        assert_eq!(embed_doubled(&TwistedElement::untwisted(Matrix::identity(2))).unwrap(), Matrix::identity(4));
        let d = Matrix::diag_ints(&[2, 1]);
        let half = Scalar::from_ratio(1, 2);
        let expect = Matrix::diag(&[Scalar::from_integer(2), Scalar::one(), half, Scalar::one()]);
        assert_eq!(embed_doubled(&TwistedElement::untwisted(d.clone())).unwrap(), expect);
        let x = TwistedElement::new(d.clone(), Automorphism::sigma(2)).unwrap();
        let y = TwistedElement::new(Matrix::identity(2), Automorphism::sigma(2)).unwrap();
        let lhs = &embed_doubled(&x).unwrap() * &embed_doubled(&y).unwrap();
        assert_eq!(lhs, embed_doubled(&TwistedElement::untwisted(d)).unwrap());
        let unnormalized = TwistedElement::new(jordan(), Automorphism::new(jordan(), Outer::Identity).unwrap()).unwrap();
        assert!(embed_doubled(&unnormalized).is_err());
    }

    #[test]
    fn differential_examples() {
        let xi = Matrix::from_ints(&[&[1, 2], &[3, 4]]);
        assert_eq!(differential_action(&Automorphism::identity(2), &xi), xi);
        let e12 = Matrix::unit(2, 0, 1);
        assert_eq!(differential_action(&Automorphism::sigma(2), &e12), -&Matrix::unit(2, 1, 0));
        let c = scalar_matrix(2, 5);
        assert_eq!(differential_action(&Automorphism::sigma(2), &c), scalar_matrix(2, -5));
    }

    #[test]
    fn composition_matches_application() {
        let a = Automorphism::new(Matrix::from_ints(&[&[1, 1], &[0, 1]]), Outer::Sigma).unwrap();
        let b = Automorphism::new(Matrix::from_ints(&[&[2, 0], &[1, 1]]), Outer::Sigma).unwrap();
        let g = Matrix::from_ints(&[&[3, 1], &[2, 1]]);
        let ab = a.compose(&b).unwrap();
        assert_eq!(ab.apply(&g).unwrap(), a.apply(&b.apply(&g).unwrap()).unwrap());
        assert_eq!(ab.outer(), Outer::Identity);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_invertible(n: usize) -> impl Strategy<Value = Matrix> {
            prop::collection::vec(-3i64..4, n * n).prop_filter_map("singular", move |v| {
                let m = Matrix::from_vec(n, n, v.into_iter().map(Scalar::from_integer).collect()).unwrap();
                m.inverse().map(|_| m)
            })
        }

        fn arb_outer() -> impl Strategy<Value = Outer> {
            prop_oneof![Just(Outer::Identity), Just(Outer::Sigma)]
        }

        fn arb_pair() -> impl Strategy<Value = (TwistedElement, TwistedElement)> {
            (1usize..4).prop_flat_map(|n| {
                (arb_invertible(n), arb_outer(), arb_invertible(n), arb_outer()).prop_map(move |(g, e, h, d)| {
                    let mk = |m: Matrix, o: Outer| TwistedElement::new(m, Automorphism::new(Matrix::identity(n), o).unwrap()).unwrap();
                    (mk(g, e), mk(h, d))
                })
            })
        }

        fn arb_lie() -> impl Strategy<Value = (Automorphism, Matrix, Matrix)> {
            (1usize..4).prop_flat_map(|n| {
                (arb_invertible(n), arb_outer(), prop::collection::vec(-3i64..4, n * n), prop::collection::vec(-3i64..4, n * n))
                    .prop_map(move |(a, o, x, y)| {
                        let m = |v: Vec<i64>| Matrix::from_vec(n, n, v.into_iter().map(Scalar::from_integer).collect()).unwrap();
                        (Automorphism::new(a, o).unwrap(), m(x), m(y))
                    })
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]
            #[test]
            fn doubled_embedding_is_homomorphism((x, y) in arb_pair()) {
                let lhs = &embed_doubled(&x).unwrap() * &embed_doubled(&y).unwrap();
                prop_assert_eq!(lhs, embed_doubled(&x.mul(&y).unwrap()).unwrap());
            }

            #[test]
            fn differential_preserves_bracket((phi, x, y) in arb_lie()) {
                let lhs = differential_action(&phi, &x.commutator(&y));
                let rhs = differential_action(&phi, &x).commutator(&differential_action(&phi, &y));
                prop_assert_eq!(lhs, rhs);
            }
        }
    }
}
