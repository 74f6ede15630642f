//! Seeded random corpora shared by the integration tests.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wildcat::git::FramedPoint;
use wildcat::twist::{Automorphism, Outer, TwistedElement};
use wildcat::{Grading, Matrix, Scalar};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn int(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> Scalar {
    Scalar::from_integer(rng.gen_range(lo..=hi))
}

pub fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    Matrix::from_rows((0..n).map(|_| (0..n).map(|_| int(rng, -2, 2)).collect()).collect())
}

pub fn random_invertible(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    loop {
        let m = random_matrix(rng, n);
        if m.inverse().is_some() {
            return m;
        }
    }
}

/// Invertible block upper-triangular matrix; `strict` keeps the off-diagonal block, otherwise it is zero.
fn block_triangular(rng: &mut ChaCha8Rng, sizes: &[usize], strict: bool) -> Matrix {
    let n: usize = sizes.iter().sum();
    loop {
        let mut m = Matrix::zeros(n, n);
        let mut start = 0;
        for &s in sizes {
            for i in start..start + s {
                for j in start..n {
                    if j < start + s || strict {
                        m.set(i, j, int(rng, -2, 2));
                    }
                }
            }
            start += s;
        }
        if m.inverse().is_some() {
            return m;
        }
    }
}

fn partition(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let mut sizes = Vec::new();
    let mut left = n;
    while left > 0 {
        let s = rng.gen_range(1..=left);
        sizes.push(s);
        left -= s;
    }
    sizes
}

/// Untwisted loops of size `n`: generic, reducible, decomposable or commuting, optionally conjugated.
pub fn random_loops(rng: &mut ChaCha8Rng, n: usize) -> Vec<Matrix> {
    let k = rng.gen_range(1..=3);
    let kind = rng.gen_range(0..5);
    let sizes = if n > 1 { partition(rng, n) } else { vec![1] };
    let mut loops: Vec<Matrix> = (0..k)
        .map(|_| match kind {
            0 => random_invertible(rng, n),
            1 => block_triangular(rng, &sizes, true),
            2 => block_triangular(rng, &sizes, false),
            3 => {
                let d: Vec<Scalar> = (0..n).map(|_| Scalar::from_integer([1, 2, -1, 3][rng.gen_range(0..4)])).collect();
                Matrix::diag(&d)
            }
            _ => {
                // unipotent with a random strictly upper part
                let mut m = Matrix::identity(n);
                for i in 0..n {
                    for j in i + 1..n {
                        m.set(i, j, int(rng, -1, 1));
                    }
                }
                m
            }
        })
        .collect();
    if rng.gen_bool(0.5) {
        let p = random_invertible(rng, n);
        let pinv = p.inverse().unwrap();
        loops = loops.iter().map(|g| &(&p * g) * &pinv).collect();
    }
    loops
}

pub fn random_grading(rng: &mut ChaCha8Rng, n: usize) -> (Grading, Matrix) {
    let mut sizes = partition(rng, n);
    sizes.shuffle(rng);
    let p = if rng.gen_bool(0.5) { random_invertible(rng, n) } else { Matrix::identity(n) };
    let g = if sizes.len() == 1 { Grading::trivial(n) } else { Grading::blocks(&sizes) };
    (g.transform(&p), p)
}

pub fn random_twisted(rng: &mut ChaCha8Rng, n: usize, allow_sigma: bool) -> TwistedElement {
    let outer = if allow_sigma && rng.gen_bool(0.5) { Outer::Sigma } else { Outer::Identity };
    let inner = if rng.gen_bool(0.5) { random_invertible(rng, n) } else { Matrix::identity(n) };
    let g = if rng.gen_bool(0.3) { random_loops(rng, n).remove(0) } else { random_invertible(rng, n) };
    TwistedElement::new(g, Automorphism::new(inner, outer).unwrap()).unwrap()
}

/// Framed point with `m` gradings; the second output lists each grading's change of basis.
pub fn random_point(rng: &mut ChaCha8Rng, n: usize, m: usize, twisted: bool) -> (FramedPoint, Vec<Matrix>) {
    let (gradings, frames): (Vec<Grading>, Vec<Matrix>) = (0..m).map(|_| random_grading(rng, n)).unzip();
    let connectors = (1..m).map(|_| random_invertible(rng, n)).collect();
    let k = rng.gen_range(0..=2);
    let loops = (0..k).map(|_| random_twisted(rng, n, twisted)).collect();
    (FramedPoint::new(n, gradings, connectors, loops).unwrap(), frames)
}

/// An element of the centralizer of the grading built from `blocks` and frame `p`.
pub fn random_graded(rng: &mut ChaCha8Rng, g: &Grading, p: &Matrix) -> Matrix {
    let n = g.ambient_dim;
    let sizes = g.piece_sizes();
    loop {
        let mut b = Matrix::zeros(n, n);
        let mut start = 0;
        for &s in &sizes {
            for i in start..start + s {
                for j in start..start + s {
                    b.set(i, j, int(rng, -2, 2));
                }
            }
            start += s;
        }
        if b.inverse().is_some() {
            return &(p * &b) * &p.inverse().unwrap();
        }
    }
}
