//! Dense exact linear algebra over [`Scalar`].

use std::fmt;

use crate::error::{Error, Result};
use crate::field::Scalar;

/// A dense row-major matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Matrix {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Scalar::one();
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Matrix> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    /// Panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_ints(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| Scalar::from_integer(x)).collect()).collect())
    }

    pub fn diag(entries: &[Scalar]) -> Matrix {
        let n = entries.len();
        let mut m = Matrix::zeros(n, n);
        for (i, e) in entries.iter().enumerate() {
            m.data[i * n + i] = e.clone();
        }
        m
    }

    pub fn diag_ints(entries: &[i64]) -> Matrix {
        Matrix::diag(&entries.iter().map(|&x| Scalar::from_integer(x)).collect::<Vec<_>>())
    }

    /// Matrix unit `E_{ij}`.
    pub fn unit(n: usize, i: usize, j: usize) -> Matrix {
        let mut m = Matrix::zeros(n, n);
        m.data[i * n + j] = Scalar::one();
        m
    }

    /// Matrix with the given vectors as columns.
    pub fn from_columns(n: usize, cols: &[Vec<Scalar>]) -> Matrix {
        let mut m = Matrix::zeros(n, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), n);
            for (i, x) in c.iter().enumerate() {
                m.data[i * cols.len() + j] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn into_entries(self) -> Vec<Scalar> {
        self.data
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row_vectors(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = self.get(i, j);
                    if i == j {
                        x.is_one()
                    } else {
                        x.is_zero()
                    }
                })
            })
    }

    pub fn is_rational(&self) -> bool {
        self.data.iter().all(Scalar::is_rational)
    }

    /// Least common multiple of the conductors of all entries.
    pub fn conductor(&self) -> u32 {
        use num_integer::Integer;
        self.data.iter().fold(1u32, |acc, x| acc.lcm(&x.conductor()))
    }

    pub fn transpose(&self) -> Matrix {
        let mut m = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        m
    }

    pub fn trace(&self) -> Scalar {
        let mut t = Scalar::zero();
        for i in 0..self.rows.min(self.cols) {
            t += self.get(i, i);
        }
        t
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * c).collect() }
    }

    pub fn try_mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![Scalar::zero(); self.cols];
        for (i, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                let y = self.get(i, j);
                if !y.is_zero() {
                    *o += &(x * y);
                }
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Matrix {
        let mut acc = Matrix::identity(self.rows);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Gauss-Jordan inverse; `None` when singular or not square.
    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut a = self.row_vectors();
        let mut inv = Matrix::identity(n).row_vectors();
        for col in 0..n {
            let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
            a.swap(col, piv);
            inv.swap(col, piv);
            let p = a[col][col].inv()?;
            scale_in_place(&mut a[col], &p);
            scale_in_place(&mut inv[col], &p);
            for r in 0..n {
                if r != col && !a[r][col].is_zero() {
                    let f = a[r][col].clone();
                    let (pa, pi) = (a[col].clone(), inv[col].clone());
                    axpy(&mut a[r], &(-&f), &pa);
                    axpy(&mut inv[r], &(-&f), &pi);
                }
            }
        }
        Some(Matrix::from_rows(inv))
    }

    pub fn try_inverse(&self, what: &str) -> Result<Matrix> {
        self.inverse().ok_or_else(|| Error::NotInvertible(what.to_string()))
    }

    pub fn rank(&self) -> usize {
        rref(self).rank
    }

    pub fn commutator(&self, other: &Matrix) -> Matrix {
        &(self * other) - &(other * self)
    }

    /// Entries flattened row-major, as a vector in dimension `rows * cols`.
    pub fn flatten(&self) -> Vec<Scalar> {
        self.data.clone()
    }

    pub fn unflatten(n: usize, v: &[Scalar]) -> Matrix {
        assert_eq!(v.len(), n * n);
        Matrix { rows: n, cols: n, data: v.to_vec() }
    }

    /// Square submatrix on the given rows and columns.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m.data[a * cols.len() + b] = self.get(i, j).clone();
            }
        }
        m
    }

    /// Block matrix from a grid of equally compatible blocks.
    pub fn block(grid: &[Vec<Matrix>]) -> Matrix {
        let heights: Vec<usize> = grid.iter().map(|r| r[0].rows).collect();
        let widths: Vec<usize> = grid[0].iter().map(|b| b.cols).collect();
        let (h, w) = (heights.iter().sum(), widths.iter().sum());
        let mut m = Matrix::zeros(h, w);
        let mut r0 = 0;
        for (bi, row) in grid.iter().enumerate() {
            let mut c0 = 0;
            for (bj, b) in row.iter().enumerate() {
                assert_eq!((b.rows, b.cols), (heights[bi], widths[bj]), "incompatible blocks");
                for i in 0..b.rows {
                    for j in 0..b.cols {
                        m.data[(r0 + i) * w + c0 + j] = b.get(i, j).clone();
                    }
                }
                c0 += widths[bj];
            }
            r0 += heights[bi];
        }
        m
    }

    pub fn block_diag(blocks: &[Matrix]) -> Matrix {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let w: usize = blocks.iter().map(|b| b.cols).sum();
        let mut m = Matrix::zeros(n, w);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m.data[(r0 + i) * w + c0 + j] = b.get(i, j).clone();
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

impl std::ops::Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.try_mul(rhs).expect("matrix product dimension mismatch")
    }
}

impl std::ops::Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect() }
    }
}

impl std::ops::Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect() }
    }
}

impl std::ops::Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| -a).collect() }
    }
}

pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    let mut s = Scalar::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            s += &(x * y);
        }
    }
    s
}

/// `y += a * x`
pub fn axpy(y: &mut [Scalar], a: &Scalar, x: &[Scalar]) {
    if a.is_zero() {
        return;
    }
    for (yi, xi) in y.iter_mut().zip(x) {
        if !xi.is_zero() {
            *yi += &(a * xi);
        }
    }
}

pub fn scale_in_place(v: &mut [Scalar], a: &Scalar) {
    for x in v.iter_mut() {
        if !x.is_zero() {
            *x = &*x * a;
        }
    }
}

pub fn is_zero_vec(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

pub fn unit_vector(n: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); n];
    v[i] = Scalar::one();
    v
}

/// Result of [`rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub r: Matrix,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

fn rref_rows(rows: &mut [Vec<Scalar>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(piv) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else { continue };
        rows.swap(r, piv);
        let p = rows[r][col].inv().expect("nonzero pivot");
        scale_in_place(&mut rows[r], &p);
        let prow = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[col].is_zero() {
                let f = -&row[col];
                axpy(row, &f, &prow);
            }
        }
        pivots.push(col);
        r += 1;
    }
    pivots
}

/// Reduced row-echelon form.
pub fn rref(a: &Matrix) -> Rref {
    let mut rows = a.row_vectors();
    let pivots = rref_rows(&mut rows, a.cols);
    let rank = pivots.len();
    let r = if a.rows == 0 { Matrix::zeros(0, a.cols) } else { Matrix::from_rows(rows) };
    Rref { r: Matrix { rows: a.rows, cols: a.cols, data: r.data }, pivots, rank }
}

/// A subspace of `K^d` stored by its canonical reduced echelon basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<Vec<Scalar>>,
}

impl Subspace {
    pub fn zero(d: usize) -> Subspace {
        Subspace { ambient_dim: d, basis: Vec::new() }
    }

    pub fn full(d: usize) -> Subspace {
        Subspace { ambient_dim: d, basis: (0..d).map(|i| unit_vector(d, i)).collect() }
    }

    pub fn span(d: usize, vectors: &[Vec<Scalar>]) -> Subspace {
        let mut rows: Vec<Vec<Scalar>> = vectors.to_vec();
        assert!(rows.iter().all(|v| v.len() == d), "vector length differs from ambient dimension");
        let rank = rref_rows(&mut rows, d).len();
        rows.truncate(rank);
        Subspace { ambient_dim: d, basis: rows }
    }

    pub fn coordinate(d: usize, idx: &[usize]) -> Subspace {
        Subspace::span(d, &idx.iter().map(|&i| unit_vector(d, i)).collect::<Vec<_>>())
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.ambient_dim
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.basis
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.basis.iter().map(|v| v.iter().position(|x| !x.is_zero()).unwrap()).collect()
    }

    /// Remainder of `v` after subtracting its projection along the pivots.
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut w = v.to_vec();
        for (b, p) in self.basis.iter().zip(self.pivots()) {
            if !w[p].is_zero() {
                let f = -&w[p];
                axpy(&mut w, &f, b);
            }
        }
        w
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        is_zero_vec(&self.reduce(v))
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    /// Coordinates of `v` in the echelon basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        let coords: Vec<Scalar> = self.pivots().iter().map(|&p| v[p].clone()).collect();
        let mut w = v.to_vec();
        for (b, c) in self.basis.iter().zip(&coords) {
            axpy(&mut w, &(-c), b);
        }
        is_zero_vec(&w).then_some(coords)
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut v = self.basis.clone();
        v.extend(other.basis.iter().cloned());
        Subspace::span(self.ambient_dim, &v)
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        // x in self ∩ other  ⟺  x ⟂ ann(self) and x ⟂ ann(other)
        let mut rows = self.annihilator().basis;
        rows.extend(other.annihilator().basis);
        null_space_rows(&rows, self.ambient_dim)
    }

    /// `{ y : y · v = 0 for all v in self }` (the orthogonal complement for the bilinear dot product).
    pub fn annihilator(&self) -> Subspace {
        null_space_rows(&self.basis, self.ambient_dim)
    }

    /// Image of the subspace under `m` (vectors as columns).
    pub fn image(&self, m: &Matrix) -> Subspace {
        Subspace::span(m.rows(), &self.basis.iter().map(|v| m.mul_vec(v)).collect::<Vec<_>>())
    }

    pub fn is_invariant_under(&self, m: &Matrix) -> bool {
        self.basis.iter().all(|v| self.contains(&m.mul_vec(v)))
    }

    /// Basis as the columns of an `ambient_dim × dim` matrix.
    pub fn basis_matrix(&self) -> Matrix {
        Matrix::from_columns(self.ambient_dim, &self.basis)
    }
}

fn null_space_rows(rows: &[Vec<Scalar>], d: usize) -> Subspace {
    let mut r = rows.to_vec();
    let pivots = rref_rows(&mut r, d);
    let mut basis = Vec::new();
    let mut is_pivot = vec![false; d];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    for free in (0..d).filter(|&c| !is_pivot[c]) {
        let mut v = vec![Scalar::zero(); d];
        v[free] = Scalar::one();
        for (row, &p) in r.iter().zip(&pivots) {
            v[p] = -&row[free];
        }
        basis.push(v);
    }
    Subspace::span(d, &basis)
}

/// `{ x : A x = 0 }`.
pub fn null_space(a: &Matrix) -> Subspace {
    null_space_rows(&a.row_vectors(), a.cols())
}

/// Common kernel of a stream of linear forms on `K^d`.
pub fn kernel_of_forms<I: IntoIterator<Item = Vec<Scalar>>>(d: usize, forms: I) -> Subspace {
    let mut eb = EchelonBuilder::new(d);
    for f in forms {
        if eb.len() == d {
            break;
        }
        eb.insert(&f);
    }
    eb.to_subspace().annihilator()
}

/// Flattened basis of `{ X : X g = g X for all g }`.
pub fn commutant(n: usize, gens: &[Matrix]) -> Subspace {
    let forms = gens.iter().flat_map(move |g| {
        (0..n * n).map(move |ij| {
            let (i, j) = (ij / n, ij % n);
            let mut row = vec![Scalar::zero(); n * n];
            for k in 0..n {
                // (X g)_{ij} - (g X)_{ij}
                row[i * n + k] += g.get(k, j);
                row[k * n + j] -= g.get(i, k);
            }
            row
        })
    });
    kernel_of_forms(n * n, forms)
}

/// One solution of `A X = B` (if consistent) and the kernel of `A`.
pub fn linear_solve(a: &Matrix, b: &Matrix) -> Result<(Option<Matrix>, Subspace)> {
    if a.rows() != b.rows() {
        return Err(Error::DimensionMismatch(format!("A has {} rows, B has {}", a.rows(), b.rows())));
    }
    let (n, k) = (a.cols(), b.cols());
    let mut rows: Vec<Vec<Scalar>> =
        (0..a.rows()).map(|i| a.row(i).iter().chain(b.row(i)).cloned().collect()).collect();
    let pivots = rref_rows(&mut rows, n + k);
    let kernel = null_space(a);
    if pivots.iter().any(|&p| p >= n) {
        return Ok((None, kernel));
    }
    let mut x = Matrix::zeros(n, k);
    for (row, &p) in rows.iter().zip(&pivots) {
        for j in 0..k {
            x.set(p, j, row[n + j].clone());
        }
    }
    Ok((Some(x), kernel))
}

/// Incrementally maintained reduced echelon basis.
#[derive(Clone, Debug)]
pub struct EchelonBuilder {
    dim: usize,
    rows: Vec<(usize, Vec<Scalar>)>,
}

impl EchelonBuilder {
    pub fn new(dim: usize) -> EchelonBuilder {
        EchelonBuilder { dim, rows: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut w = v.to_vec();
        for (p, row) in &self.rows {
            if !w[*p].is_zero() {
                let f = -&w[*p];
                axpy(&mut w, &f, row);
            }
        }
        w
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        is_zero_vec(&self.reduce(v))
    }

    /// Adds `v`; returns true if the span grew.
    pub fn insert(&mut self, v: &[Scalar]) -> bool {
        assert_eq!(v.len(), self.dim);
        let mut w = self.reduce(v);
        let Some(p) = w.iter().position(|x| !x.is_zero()) else { return false };
        let inv = w[p].inv().unwrap();
        scale_in_place(&mut w, &inv);
        for (_, row) in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let f = -&row[p];
                axpy(row, &f, &w);
            }
        }
        self.rows.push((p, w));
        true
    }

    pub fn to_subspace(&self) -> Subspace {
        let mut rows = self.rows.clone();
        rows.sort_by_key(|(p, _)| *p);
        Subspace { ambient_dim: self.dim, basis: rows.into_iter().map(|(_, v)| v).collect() }
    }
}

/// One weight space of a [`Grading`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradingPiece {
    pub weight: Vec<i64>,
    pub basis: Vec<Vec<Scalar>>,
}

/// A direct-sum decomposition of `K^n` into weight spaces with distinct weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grading {
    pub ambient_dim: usize,
    pub pieces: Vec<GradingPiece>,
}

impl Grading {
    /// A single piece of weight 0.
    pub fn trivial(n: usize) -> Grading {
        Grading {
            ambient_dim: n,
            pieces: vec![GradingPiece { weight: vec![0], basis: (0..n).map(|i| unit_vector(n, i)).collect() }],
        }
    }

    /// Coordinate blocks of the given sizes, weighted by unit vectors.
    pub fn blocks(sizes: &[usize]) -> Grading {
        let n: usize = sizes.iter().sum();
        let k = sizes.len();
        let mut start = 0;
        let mut pieces = Vec::new();
        for (b, &s) in sizes.iter().enumerate() {
            let mut w = vec![0i64; k];
            w[b] = 1;
            pieces.push(GradingPiece { weight: w, basis: (start..start + s).map(|i| unit_vector(n, i)).collect() });
            start += s;
        }
        Grading { ambient_dim: n, pieces }
    }

    pub fn is_trivial(&self) -> bool {
        self.pieces.len() <= 1
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.ambient_dim;
        for (i, p) in self.pieces.iter().enumerate() {
            if p.basis.is_empty() {
                return Err(Error::DegenerateGrading(format!("piece {i} is empty")));
            }
            if p.basis.iter().any(|v| v.len() != n) {
                return Err(Error::DimensionMismatch(format!("piece {i} has vectors of the wrong length")));
            }
            if self.pieces[..i].iter().any(|q| q.weight == p.weight) {
                return Err(Error::DegenerateGrading(format!("weight {:?} repeated", p.weight)));
            }
        }
        let all: Vec<Vec<Scalar>> = self.pieces.iter().flat_map(|p| p.basis.iter().cloned()).collect();
        if all.len() != n || Subspace::span(n, &all).dim() != n {
            return Err(Error::DegenerateGrading("pieces do not form a direct sum equal to the whole space".into()));
        }
        Ok(())
    }

    /// Change-of-basis matrix whose columns list the pieces' bases in order.
    pub fn adapted_basis(&self) -> Matrix {
        let all: Vec<Vec<Scalar>> = self.pieces.iter().flat_map(|p| p.basis.iter().cloned()).collect();
        Matrix::from_columns(self.ambient_dim, &all)
    }

    pub fn piece_sizes(&self) -> Vec<usize> {
        self.pieces.iter().map(|p| p.basis.len()).collect()
    }

    /// The image grading `g(V_w)` of each piece.
    pub fn transform(&self, g: &Matrix) -> Grading {
        Grading {
            ambient_dim: self.ambient_dim,
            pieces: self
                .pieces
                .iter()
                .map(|p| GradingPiece { weight: p.weight.clone(), basis: p.basis.iter().map(|v| g.mul_vec(v)).collect() })
                .collect(),
        }
    }
}

/// Projectors onto each piece along the sum of the others.
pub fn weight_projectors(g: &Grading) -> Result<Vec<Matrix>> {
    g.validate()?;
    let b = g.adapted_basis();
    let binv = b.try_inverse("grading basis")?;
    let mut out = Vec::new();
    let mut start = 0;
    for s in g.piece_sizes() {
        let mut sel = Matrix::zeros(g.ambient_dim, g.ambient_dim);
        for i in start..start + s {
            sel.set(i, i, Scalar::one());
        }
        out.push(&(&b * &sel) * &binv);
        start += s;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::from_ratio(n, d)
    }

    fn ints(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| Scalar::from_integer(x)).collect()
    }

    #[test]
    fn linear_solve_examples() {
        let i2 = Matrix::identity(2);
        let (x, k) = linear_solve(&i2, &i2).unwrap();
        assert_eq!(x.unwrap(), i2);
        assert!(k.is_zero());

        let a = Matrix::from_ints(&[&[0, 1], &[0, 0]]);
        let (x, k) = linear_solve(&a, &Matrix::zeros(2, 1)).unwrap();
        assert!(x.is_some());
        assert_eq!(k, Subspace::span(2, &[ints(&[1, 0])]));

        let a = Matrix::from_ints(&[&[1, 1], &[1, 1]]);
        let b = Matrix::from_ints(&[&[2], &[2]]);
        let (x, k) = linear_solve(&a, &b).unwrap();
        let x = x.unwrap();
        assert_eq!(&a * &x, b);
        assert_eq!(x, Matrix::from_ints(&[&[2], &[0]]));
        assert_eq!(k, Subspace::span(2, &[ints(&[1, -1])]));

        let inconsistent = Matrix::from_ints(&[&[1], &[2]]);
        assert!(linear_solve(&a, &inconsistent).unwrap().0.is_none());
        assert!(linear_solve(&a, &Matrix::zeros(3, 1)).is_err());
    }

    #[test]
    fn rref_examples() {
        let r = rref(&Matrix::identity(3));
        assert_eq!((r.r, r.pivots, r.rank), (Matrix::identity(3), vec![0, 1, 2], 3));
        let z = Matrix::zeros(2, 2);
        let r = rref(&z);
        assert_eq!((r.r, r.pivots, r.rank), (z, vec![], 0));
        let r = rref(&Matrix::from_ints(&[&[2, 4], &[1, 2]]));
        assert_eq!(r.r, Matrix::from_ints(&[&[1, 2], &[0, 0]]));
        assert_eq!(r.rank, 1);
    }

    #[test]
    fn projector_examples() {
        let g = Grading {
            ambient_dim: 2,
            pieces: vec![
                GradingPiece { weight: vec![1], basis: vec![ints(&[1, 0])] },
                GradingPiece { weight: vec![0], basis: vec![ints(&[0, 1])] },
            ],
        };
        assert_eq!(weight_projectors(&g).unwrap(), vec![Matrix::diag_ints(&[1, 0]), Matrix::diag_ints(&[0, 1])]);
        assert_eq!(weight_projectors(&Grading::trivial(3)).unwrap(), vec![Matrix::identity(3)]);

        let g = Grading {
            ambient_dim: 2,
            pieces: vec![
                GradingPiece { weight: vec![1], basis: vec![ints(&[1, 1])] },
                GradingPiece { weight: vec![0], basis: vec![ints(&[1, -1])] },
            ],
        };
        let p = weight_projectors(&g).unwrap();
        let h = q(1, 2);
        assert_eq!(p[0], Matrix::from_rows(vec![vec![h.clone(), h.clone()], vec![h.clone(), h.clone()]]));
        assert_eq!(p[1], Matrix::from_rows(vec![vec![h.clone(), -&h], vec![-&h, h.clone()]]));

        let bad = Grading {
            ambient_dim: 2,
            pieces: vec![
                GradingPiece { weight: vec![1], basis: vec![ints(&[1, 1])] },
                GradingPiece { weight: vec![0], basis: vec![ints(&[2, 2])] },
            ],
        };
        assert!(matches!(weight_projectors(&bad), Err(Error::DegenerateGrading(_))));
    }

    #[test]
    fn inverse_and_subspaces() {
        let a = Matrix::from_ints(&[&[2, 1], &[1, 1]]);
        assert_eq!(&a * &a.inverse().unwrap(), Matrix::identity(2));
        assert!(Matrix::from_ints(&[&[1, 2], &[2, 4]]).inverse().is_none());
        let u = Subspace::span(3, &[ints(&[1, 1, 0]), ints(&[0, 1, 1])]);
        let w = Subspace::span(3, &[ints(&[1, 0, 0]), ints(&[0, 0, 1])]);
        let i = u.intersect(&w);
        assert_eq!(i, Subspace::span(3, &[ints(&[1, 0, -1])]));
        assert_eq!(u.sum(&w).dim(), 3);
        assert_eq!(u.coordinates(&ints(&[1, 2, 1])).unwrap(), ints(&[1, 2]));
    }

    #[test]
    fn echelon_builder_matches_span() {
        let vs = [ints(&[0, 2, 4]), ints(&[1, 1, 1]), ints(&[1, 3, 5]), ints(&[0, 0, 1])];
        let mut b = EchelonBuilder::new(3);
        let grew: Vec<bool> = vs.iter().map(|v| b.insert(v)).collect();
        assert_eq!(grew, vec![true, true, false, true]);
        assert_eq!(b.to_subspace(), Subspace::span(3, &vs));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_matrix() -> impl Strategy<Value = Matrix> {
            (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
                prop::collection::vec(-3i64..4, r * c).prop_map(move |v| {
                    Matrix::from_vec(r, c, v.into_iter().map(Scalar::from_integer).collect()).unwrap()
                })
            })
        }

        fn arb_grading() -> impl Strategy<Value = Grading> {
            (prop::collection::vec(1usize..3, 1..4), prop::collection::vec(-2i64..3, 36)).prop_filter_map(
                "singular change of basis",
                |(sizes, entries)| {
                    let n: usize = sizes.iter().sum();
                    let c = Matrix::from_vec(n, n, entries[..n * n].iter().map(|&x| Scalar::from_integer(x)).collect())
                        .unwrap();
                    c.inverse()?;
                    Some(Grading::blocks(&sizes).transform(&c))
                },
            )
        }

        proptest! {
            #[test]
            fn rref_is_idempotent(a in arb_matrix()) {
                let r = rref(&a).r;
                prop_assert_eq!(rref(&r).r, r);
            }

            #[test]
            fn projectors_resolve_identity(g in arb_grading()) {
                let ps = weight_projectors(&g).unwrap();
                let n = g.ambient_dim;
                let mut sum = Matrix::zeros(n, n);
                for (i, p) in ps.iter().enumerate() {
                    prop_assert_eq!(&(p * p), p);
                    for (j, q) in ps.iter().enumerate() {
                        if i != j {
                            prop_assert!((p * q).is_zero());
                        }
                    }
                    sum = &sum + p;
                }
                prop_assert!(sum.is_identity());
            }
        }
    }
}
