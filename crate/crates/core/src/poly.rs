//! Univariate polynomials over `Q`: characteristic polynomials and factorization.
//!
//! Factorization follows the classical route: square-free decomposition,
//! factorization modulo a small prime (distinct-degree then Cantor-Zassenhaus),
//! Hensel lifting, and recombination of lifted factors by trial division.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::Scalar;
use crate::linalg::Matrix;

/// Polynomial with rational coefficients, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPoly(Vec<BigRational>);

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl QPoly {
    pub fn new(mut c: Vec<BigRational>) -> QPoly {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        QPoly(c)
    }

    pub fn from_ints(c: &[i64]) -> QPoly {
        QPoly::new(c.iter().map(|&x| rat(x)).collect())
    }

    pub fn zero() -> QPoly {
        QPoly(Vec::new())
    }

    pub fn one() -> QPoly {
        QPoly(vec![rat(1)])
    }

    pub fn x() -> QPoly {
        QPoly(vec![rat(0), rat(1)])
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.0
    }

    pub fn leading(&self) -> BigRational {
        self.0.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn monic(&self) -> QPoly {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.leading();
        QPoly(self.0.iter().map(|c| c / &l).collect())
    }

    pub fn add(&self, o: &QPoly) -> QPoly {
        let n = self.0.len().max(o.0.len());
        QPoly::new(
            (0..n)
                .map(|i| {
                    self.0.get(i).cloned().unwrap_or_else(BigRational::zero)
                        + o.0.get(i).cloned().unwrap_or_else(BigRational::zero)
                })
                .collect(),
        )
    }

    pub fn sub(&self, o: &QPoly) -> QPoly {
        self.add(&o.scale(&rat(-1)))
    }

    pub fn scale(&self, c: &BigRational) -> QPoly {
        QPoly::new(self.0.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, o: &QPoly) -> QPoly {
        if self.is_zero() || o.is_zero() {
            return QPoly::zero();
        }
        let mut c = vec![BigRational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        QPoly::new(c)
    }

    pub fn pow(&self, e: usize) -> QPoly {
        let mut acc = QPoly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn div_rem(&self, d: &QPoly) -> (QPoly, QPoly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let mut r = self.0.clone();
        let dd = d.degree();
        if r.len() < d.0.len() {
            return (QPoly::zero(), self.clone());
        }
        let lc = d.leading();
        let mut q = vec![BigRational::zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = &r[i + dd] / &lc;
            if !c.is_zero() {
                for (k, dk) in d.0.iter().enumerate() {
                    r[i + k] -= &c * dk;
                }
            }
            q[i] = c;
        }
        r.truncate(dd);
        (QPoly::new(q), QPoly::new(r))
    }

    pub fn derivative(&self) -> QPoly {
        QPoly::new(self.0.iter().enumerate().skip(1).map(|(i, c)| c * rat(i as i64)).collect())
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, o: &QPoly) -> QPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `p(M)` by Horner's rule.
    pub fn eval_matrix(&self, m: &Matrix) -> Matrix {
        let n = m.rows();
        let mut acc = Matrix::zeros(n, n);
        for c in self.0.iter().rev() {
            acc = &acc * m;
            let c = Scalar::from_rational(c.clone());
            for i in 0..n {
                let v = acc.get(i, i) + &c;
                acc.set(i, i, v);
            }
        }
        acc
    }

    /// Primitive integer polynomial with positive leading coefficient, same roots.
    fn primitive_integer(&self) -> Vec<BigInt> {
        let den = self.0.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self.0.iter().map(|c| (c * BigRational::from_integer(den.clone())).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let mut v: Vec<BigInt> = ints.into_iter().map(|c| c / &g).collect();
        if v.last().is_some_and(|c| c.is_negative()) {
            v.iter_mut().for_each(|c| *c = -&*c);
        }
        v
    }

    fn from_integer_poly(v: &[BigInt]) -> QPoly {
        QPoly::new(v.iter().map(|c| BigRational::from_integer(c.clone())).collect())
    }
}

/// Characteristic polynomial `det(x I - M)` of a rational square matrix.
///
/// Panics if `m` has irrational entries.
pub fn charpoly(m: &Matrix) -> QPoly {
    let n = m.rows();
    let mut h: Vec<Vec<BigRational>> = (0..n)
        .map(|i| m.row(i).iter().map(|x| x.as_rational().expect("rational matrix").clone()).collect())
        .collect();
    // similarity reduction to upper Hessenberg form
    for j in 0..n.saturating_sub(2) {
        let Some(piv) = (j + 1..n).find(|&i| !h[i][j].is_zero()) else { continue };
        if piv != j + 1 {
            h.swap(piv, j + 1);
            for row in h.iter_mut() {
                row.swap(piv, j + 1);
            }
        }
        for k in j + 2..n {
            if h[k][j].is_zero() {
                continue;
            }
            let u = &h[k][j] / &h[j + 1][j];
            for c in 0..n {
                let t = &u * &h[j + 1][c];
                h[k][c] -= t;
            }
            for row in h.iter_mut() {
                let t = &u * &row[k];
                row[j + 1] += t;
            }
        }
    }
    let mut p: Vec<QPoly> = vec![QPoly::one()];
    for mm in 1..=n {
        let lin = QPoly::new(vec![-h[mm - 1][mm - 1].clone(), rat(1)]);
        let mut pm = lin.mul(&p[mm - 1]);
        let mut t = rat(1);
        for i in (1..mm).rev() {
            t *= &h[i][i - 1];
            if t.is_zero() {
                break;
            }
            let c = &h[i - 1][mm - 1] * &t;
            pm = pm.sub(&p[i - 1].scale(&c));
        }
        p.push(pm);
    }
    p.pop().unwrap()
}

/// Square-free decomposition: pairs `(g_i, i)` with `f = lc · ∏ g_i^i`, `g_i` monic square-free.
pub fn squarefree_decomposition(f: &QPoly) -> Vec<(QPoly, usize)> {
    let mut out = Vec::new();
    if f.degree() == 0 {
        return out;
    }
    let f = f.monic();
    let fp = f.derivative();
    let a0 = f.gcd(&fp);
    let mut b = f.div_rem(&a0).0;
    let mut c = fp.div_rem(&a0).0;
    let mut d = c.sub(&b.derivative());
    let mut i = 1;
    loop {
        let a = b.gcd(&d);
        if a.degree() > 0 {
            out.push((a.clone(), i));
        }
        b = b.div_rem(&a).0;
        if b.degree() == 0 {
            break;
        }
        c = d.div_rem(&a).0;
        d = c.sub(&b.derivative());
        i += 1;
    }
    out
}

/// Monic irreducible factors over `Q` with multiplicities, sorted by degree then coefficients.
pub fn factor(f: &QPoly) -> Vec<(QPoly, usize)> {
    let mut out = Vec::new();
    for (g, e) in squarefree_decomposition(f) {
        for h in factor_squarefree(&g) {
            out.push((h, e));
        }
    }
    out.sort_by(|a, b| a.0.degree().cmp(&b.0.degree()).then_with(|| cmp_coeffs(&a.0, &b.0)));
    out
}

fn cmp_coeffs(a: &QPoly, b: &QPoly) -> std::cmp::Ordering {
    for (x, y) in a.0.iter().zip(&b.0) {
        match x.cmp(y) {
            std::cmp::Ordering::Equal => {}
            o => return o,
        }
    }
    a.0.len().cmp(&b.0.len())
}

/// Factors a monic square-free polynomial into monic irreducibles.
pub fn factor_squarefree(f: &QPoly) -> Vec<QPoly> {
    if f.degree() <= 1 {
        return if f.degree() == 1 { vec![f.monic()] } else { Vec::new() };
    }
    let prim = f.primitive_integer();
    let d = prim.len() - 1;
    let a = prim[d].clone();
    // F(y) = a^{d-1} f(y / a) is monic with integer coefficients
    let monic: Vec<BigInt> = prim
        .iter()
        .enumerate()
        .map(|(i, c)| if i == d { BigInt::one() } else { c * num_traits::pow(a.clone(), d - 1 - i) })
        .collect();
    let factors = factor_monic_integer(&monic);
    factors
        .into_iter()
        .map(|g| {
            // G(a x), then primitive part
            let mut apow = BigInt::one();
            let mut v = Vec::with_capacity(g.len());
            for c in &g {
                v.push(c * &apow);
                apow *= &a;
            }
            QPoly::from_integer_poly(&v).monic()
        })
        .collect()
}

fn is_probable_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

type Fp = Vec<u64>;

fn fp_trim(mut a: Fp) -> Fp {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn fp_pow_scalar(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn fp_inv(a: u64, p: u64) -> u64 {
    fp_pow_scalar(a, p - 2, p)
}

fn fp_sub(a: &Fp, b: &Fp, p: u64) -> Fp {
    let n = a.len().max(b.len());
    fp_trim((0..n).map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p).collect())
}

fn fp_add(a: &Fp, b: &Fp, p: u64) -> Fp {
    let n = a.len().max(b.len());
    fp_trim((0..n).map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % p).collect())
}

fn fp_mul(a: &Fp, b: &Fp, p: u64) -> Fp {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut c = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            c[i + j] = (c[i + j] + x * y) % p;
        }
    }
    fp_trim(c)
}

fn fp_divrem(a: &Fp, d: &Fp, p: u64) -> (Fp, Fp) {
    let mut r = a.clone();
    if r.len() < d.len() {
        return (Vec::new(), r);
    }
    let dd = d.len() - 1;
    let inv = fp_inv(d[dd], p);
    let mut q = vec![0u64; r.len() - dd];
    for i in (0..q.len()).rev() {
        let c = r[i + dd] * inv % p;
        if c != 0 {
            for (k, &dk) in d.iter().enumerate() {
                r[i + k] = (r[i + k] + p - c * dk % p) % p;
            }
        }
        q[i] = c;
    }
    r.truncate(dd);
    (fp_trim(q), fp_trim(r))
}

fn fp_monic(a: &Fp, p: u64) -> Fp {
    match a.last() {
        None => Vec::new(),
        Some(&l) => {
            let inv = fp_inv(l, p);
            a.iter().map(|&x| x * inv % p).collect()
        }
    }
}

fn fp_gcd(a: &Fp, b: &Fp, p: u64) -> Fp {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_empty() {
        let r = fp_divrem(&a, &b, p).1;
        a = b;
        b = r;
    }
    fp_monic(&a, p)
}

/// `(g, s, t)` with `s a + t b = g` monic.
fn fp_xgcd(a: &Fp, b: &Fp, p: u64) -> (Fp, Fp, Fp) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (vec![1u64], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
    while !r1.is_empty() {
        let (q, r) = fp_divrem(&r0, &r1, p);
        r0 = std::mem::replace(&mut r1, r);
        let s = fp_sub(&s0, &fp_mul(&q, &s1, p), p);
        s0 = std::mem::replace(&mut s1, s);
        let t = fp_sub(&t0, &fp_mul(&q, &t1, p), p);
        t0 = std::mem::replace(&mut t1, t);
    }
    let inv = fp_inv(*r0.last().unwrap(), p);
    let sc = |v: Fp| -> Fp { fp_trim(v.into_iter().map(|x| x * inv % p).collect()) };
    (sc(r0), sc(s0), sc(t0))
}

fn fp_powmod(base: &Fp, e: &BigUint, m: &Fp, p: u64) -> Fp {
    let mut result: Fp = vec![1];
    let b = fp_divrem(base, m, p).1;
    for i in (0..e.bits()).rev() {
        result = fp_divrem(&fp_mul(&result, &result, p), m, p).1;
        if e.bit(i) {
            result = fp_divrem(&fp_mul(&result, &b, p), m, p).1;
        }
    }
    result
}

/// Distinct-degree factorization of a monic square-free polynomial.
fn fp_ddf(f: &Fp, p: u64) -> Vec<(Fp, usize)> {
    let mut out = Vec::new();
    let mut f = f.clone();
    let x: Fp = vec![0, 1];
    let mut h = x.clone();
    let mut i = 0;
    let pe = BigUint::from(p);
    while f.len() - 1 >= 2 * (i + 1) {
        i += 1;
        h = fp_powmod(&h, &pe, &f, p);
        let g = fp_gcd(&fp_sub(&h, &x, p), &f, p);
        if g.len() > 1 {
            out.push((g.clone(), i));
            f = fp_divrem(&f, &g, p).0;
            h = fp_divrem(&h, &f, p).1;
        }
    }
    if f.len() > 1 {
        out.push((f.clone(), f.len() - 1));
    }
    out
}

/// Equal-degree splitting (Cantor-Zassenhaus, odd `p`).
fn fp_edf(f: &Fp, d: usize, p: u64, rng: &mut ChaCha8Rng) -> Vec<Fp> {
    let n = f.len() - 1;
    if n == d {
        return vec![f.clone()];
    }
    let e = (BigUint::from(p).pow(d as u32) - BigUint::one()) / BigUint::from(2u32);
    loop {
        let a: Fp = fp_trim((0..n).map(|_| rng.gen_range(0..p)).collect());
        if a.len() < 2 {
            continue;
        }
        let b = fp_sub(&fp_powmod(&a, &e, f, p), &vec![1], p);
        let g = fp_gcd(&b, f, p);
        if g.len() > 1 && g.len() < f.len() {
            let h = fp_monic(&fp_divrem(f, &g, p).0, p);
            let mut out = fp_edf(&g, d, p, rng);
            out.extend(fp_edf(&h, d, p, rng));
            return out;
        }
    }
}

fn reduce_mod_p(f: &[BigInt], p: u64) -> Fp {
    let pb = BigInt::from(p);
    fp_trim(f.iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect())
}

fn fp_factor(f: &Fp, p: u64) -> Vec<Fp> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ p);
    let mut out = Vec::new();
    for (g, d) in fp_ddf(f, p) {
        out.extend(fp_edf(&g, d, p, &mut rng));
    }
    out
}

fn zp_mul(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let mut c = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            c[i + j] += x * y;
        }
    }
    c.into_iter().map(|x| x.mod_floor(m)).collect()
}

fn fp_to_z(a: &Fp, len: usize) -> Vec<BigInt> {
    (0..len).map(|i| BigInt::from(a.get(i).copied().unwrap_or(0))).collect()
}

/// Lifts `target ≡ ∏ factors (mod p)` to a factorization modulo `p^k` (all monic).
fn hensel_lift(target: &[BigInt], factors: &[Fp], p: u64, k: u32) -> Vec<Vec<BigInt>> {
    let pk = BigInt::from(p).pow(k);
    if factors.len() == 1 {
        return vec![target.iter().map(|c| c.mod_floor(&pk)).collect()];
    }
    let mid = factors.len() / 2;
    let prod = |fs: &[Fp]| fs.iter().fold(vec![1u64], |acc, f| fp_mul(&acc, f, p));
    let g0 = prod(&factors[..mid]);
    let h0 = prod(&factors[mid..]);
    let (_, s, t) = fp_xgcd(&g0, &h0, p);
    let mut g = fp_to_z(&g0, g0.len());
    let mut h = fp_to_z(&h0, h0.len());
    let pb = BigInt::from(p);
    let mut pj = pb.clone();
    for _ in 1..k {
        let gh = zp_mul(&g, &h, &pk);
        let e: Vec<BigInt> = (0..target.len())
            .map(|i| {
                let diff = (&target[i] - gh.get(i).cloned().unwrap_or_else(BigInt::zero)).mod_floor(&pk);
                diff / &pj
            })
            .collect();
        let e = reduce_mod_p(&e, p);
        let (q, r) = fp_divrem(&fp_mul(&t, &e, p), &g0, p);
        let u = fp_add(&fp_mul(&s, &e, p), &fp_mul(&q, &h0, p), p);
        for (i, c) in g.iter_mut().enumerate() {
            *c = (&*c + &pj * BigInt::from(r.get(i).copied().unwrap_or(0))).mod_floor(&pk);
        }
        for (i, c) in h.iter_mut().enumerate() {
            *c = (&*c + &pj * BigInt::from(u.get(i).copied().unwrap_or(0))).mod_floor(&pk);
        }
        pj *= &pb;
    }
    let mut out = hensel_lift(&g, &factors[..mid], p, k);
    out.extend(hensel_lift(&h, &factors[mid..], p, k));
    out
}

fn symmetric(v: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let half = m / 2;
    v.iter()
        .map(|c| {
            let c = c.mod_floor(m);
            if c > half {
                c - m
            } else {
                c
            }
        })
        .collect()
}

/// Exact quotient of monic integer polynomials, if `d` divides `f`.
fn z_exact_div(f: &[BigInt], d: &[BigInt]) -> Option<Vec<BigInt>> {
    if d.len() > f.len() {
        return None;
    }
    let mut r = f.to_vec();
    let dd = d.len() - 1;
    let mut q = vec![BigInt::zero(); f.len() - dd];
    for i in (0..q.len()).rev() {
        let c = r[i + dd].clone();
        if !c.is_zero() {
            for (k, dk) in d.iter().enumerate() {
                r[i + k] -= &c * dk;
            }
        }
        q[i] = c;
    }
    r[..dd].iter().all(|c| c.is_zero()).then_some(q)
}

fn factor_monic_integer(f: &[BigInt]) -> Vec<Vec<BigInt>> {
    let d = f.len() - 1;
    // choose a prime keeping f square-free, preferring few modular factors
    let mut best: Option<(u64, Vec<Fp>)> = None;
    let mut tried = 0;
    let mut p = 10007u64;
    while tried < 4 {
        p += 2;
        if !is_probable_prime(p) {
            continue;
        }
        let fp = reduce_mod_p(f, p);
        let dfp = fp_trim(fp.iter().enumerate().skip(1).map(|(i, &c)| c * (i as u64 % p) % p).collect());
        if fp_gcd(&fp, &dfp, p).len() != 1 {
            continue;
        }
        tried += 1;
        let fs = fp_factor(&fp, p);
        if fs.len() == 1 {
            return vec![f.to_vec()];
        }
        if best.as_ref().is_none_or(|(_, b)| fs.len() < b.len()) {
            best = Some((p, fs));
        }
    }
    let (p, modular) = best.unwrap();
    // Mignotte-style coefficient bound for monic factors
    let norm2: BigInt = f.iter().map(|c| c * c).sum();
    let bound = (BigInt::one() << d) * (norm2.sqrt() + 1u32);
    let target = bound * 2u32;
    let mut k = 1u32;
    let mut pk = BigInt::from(p);
    while pk <= target {
        pk *= p;
        k += 1;
    }
    let mut lifted = hensel_lift(f, &modular, p, k);
    let mut rem = f.to_vec();
    let mut found = Vec::new();
    let mut s = 1;
    'outer: while 2 * s <= lifted.len() {
        let n = lifted.len();
        let mut idx: Vec<usize> = (0..s).collect();
        loop {
            let prod = idx.iter().fold(vec![BigInt::one()], |acc, &i| zp_mul(&acc, &lifted[i], &pk));
            let cand = symmetric(&prod, &pk);
            if let Some(q) = z_exact_div(&rem, &cand) {
                found.push(cand);
                rem = q;
                for &i in idx.iter().rev() {
                    lifted.remove(i);
                }
                continue 'outer;
            }
            // next combination
            let mut i = s;
            loop {
                if i == 0 {
                    s += 1;
                    continue 'outer;
                }
                i -= 1;
                if idx[i] != i + n - s {
                    break;
                }
            }
            idx[i] += 1;
            for j in i + 1..s {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    if rem.len() > 1 {
        found.push(rem);
    }
    found
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> QPoly {
        QPoly::from_ints(c)
    }

    #[test]
    fn charpoly_small() {
        let m = Matrix::from_ints(&[&[1, 1], &[0, 1]]);
        assert_eq!(charpoly(&m), p(&[1, -2, 1]));
        let m = Matrix::from_ints(&[&[0, 0, 2], &[1, 0, 0], &[0, 1, 0]]);
        assert_eq!(charpoly(&m), p(&[-2, 0, 0, 1]));
        let m = Matrix::from_ints(&[&[2, 1, 0], &[3, -1, 4], &[1, 1, 1]]);
        // det(xI - M) expanded by hand
        assert_eq!(charpoly(&m), p(&[9, -8, -2, 1]));
        assert!(charpoly(&m).eval_matrix(&m).is_zero());
    }

    #[test]
    fn squarefree() {
        // (x-1)^2 (x+2)
        let f = p(&[-1, 1]).pow(2).mul(&p(&[2, 1]));
        let sf = squarefree_decomposition(&f);
        assert_eq!(sf, vec![(p(&[2, 1]), 1), (p(&[-1, 1]), 2)]);
    }

    #[test]
    fn factor_examples() {
        let f = p(&[-1, 0, 0, 0, 1]); // x^4 - 1
        let fs: Vec<QPoly> = factor(&f).into_iter().map(|x| x.0).collect();
        assert_eq!(fs, vec![p(&[-1, 1]), p(&[1, 1]), p(&[1, 0, 1])]);
        // x^4 + 1 is irreducible over Q but splits modulo every prime
        assert_eq!(factor(&p(&[1, 0, 0, 0, 1])), vec![(p(&[1, 0, 0, 0, 1]), 1)]);
        let g = p(&[3, 0, 2]).mul(&p(&[-5, 7])).mul(&p(&[1, 1, 1]));
        let fs = factor(&g);
        let prod = fs.iter().fold(QPoly::one(), |acc, (h, e)| acc.mul(&h.pow(*e)));
        assert_eq!(prod, g.monic());
        assert_eq!(fs.len(), 3);
        // Swinnerton-Dyer style: x^4 - 10x^2 + 1 irreducible
        assert_eq!(factor(&p(&[1, 0, -10, 0, 1])).len(), 1);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(40))]
            #[test]
            fn factor_product_roundtrip(polys in prop::collection::vec(prop::collection::vec(-4i64..5, 2..4), 1..4)) {
                let mut f = QPoly::one();
                for c in &polys {
                    let q = QPoly::from_ints(c);
                    if q.degree() >= 1 { f = f.mul(&q); }
                }
                prop_assume!(f.degree() >= 1);
                let fs = factor(&f);
                let prod = fs.iter().fold(QPoly::one(), |acc, (h, e)| acc.mul(&h.pow(*e)));
                prop_assert_eq!(prod, f.monic());
                for (h, _) in &fs {
                    if h.degree() == 2 {
                        // a quadratic factor must have no rational root: discriminant not a square
                        let c = h.coeffs();
                        let disc = &c[1] * &c[1] - rat(4) * &c[0] * &c[2];
                        let num = disc.numer() * disc.denom();
                        prop_assert!(num.is_negative() || num.sqrt().pow(2u32) != num);
                    }
                }
            }
        }
    }
}
