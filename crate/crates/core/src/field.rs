//! Exact scalars in cyclotomic fields `Q(ζ_m)`.
//!
//! An element is stored as a polynomial in `ζ_m` of degree `< φ(m)` reduced
//! modulo the `m`-th cyclotomic polynomial. Elements that happen to be rational
//! are always stored in the rational variant, so the common case (`m = 1`)
//! never touches polynomial arithmetic.
//!
//! Binary operations between elements of different conductors lift both
//! operands to the least common multiple of the conductors.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

#[derive(Clone, Debug)]
enum Repr {
    Rational(BigRational),
    /// `coeffs.len() == φ(conductor)`, and some coefficient of positive degree is nonzero.
    Cyclotomic {
        conductor: u32,
        coeffs: Vec<BigRational>,
    },
}

/// An exact element of a cyclotomic field.
#[derive(Clone, Debug)]
pub struct Scalar(Repr);

/// Euler's totient.
pub fn totient(m: u32) -> u32 {
    let mut n = m;
    let mut result = m;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

fn poly_divide_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    // both monic, den divides num
    let mut rem = num.to_vec();
    let dn = den.len() - 1;
    let mut quot = vec![0i64; rem.len() - dn];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dn];
        quot[i] = c;
        if c != 0 {
            for (k, d) in den.iter().enumerate() {
                rem[i + k] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    quot
}

fn compute_cyclotomic(m: u32) -> Vec<i64> {
    // x^m - 1 divided by Φ_d for every proper divisor d of m
    let mut num = vec![0i64; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in 1..m {
        if m % d == 0 {
            num = poly_divide_exact(&num, &cyclotomic_polynomial(d));
        }
    }
    num
}

/// Integer coefficients (low degree first) of the `m`-th cyclotomic polynomial.
pub fn cyclotomic_polynomial(m: u32) -> Arc<Vec<i64>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&m) {
        return p.clone();
    }
    let p = Arc::new(compute_cyclotomic(m));
    cache.lock().unwrap().insert(m, p.clone());
    p
}

fn reduce_mod_cyclotomic(mut p: Vec<BigRational>, m: u32) -> Vec<BigRational> {
    let phi = cyclotomic_polynomial(m);
    let d = phi.len() - 1;
    for i in (d..p.len()).rev() {
        if p[i].is_zero() {
            continue;
        }
        let c = std::mem::replace(&mut p[i], BigRational::zero());
        for (k, &f) in phi.iter().enumerate().take(d) {
            if f != 0 {
                p[i - d + k] -= &c * BigRational::from_integer(BigInt::from(f));
            }
        }
    }
    p.resize(d, BigRational::zero());
    p
}

fn lcm(a: u32, b: u32) -> u32 {
    a.lcm(&b)
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar(Repr::Rational(BigRational::zero()))
    }

    pub fn one() -> Self {
        Scalar(Repr::Rational(BigRational::one()))
    }

    pub fn from_integer(n: i64) -> Self {
        Scalar(Repr::Rational(BigRational::from_integer(BigInt::from(n))))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Scalar(Repr::Rational(BigRational::new(BigInt::from(num), BigInt::from(den))))
    }

    pub fn from_rational(r: BigRational) -> Self {
        Scalar(Repr::Rational(r))
    }

    /// `ζ_m^e`.
    pub fn root_of_unity(m: u32, e: i64) -> Self {
        assert!(m >= 1);
        let e = e.rem_euclid(m as i64) as usize;
        let mut p = vec![BigRational::zero(); e.max(1) + 1];
        p[e] = BigRational::one();
        Self::from_poly(m, p)
    }

    /// Builds an element from coefficients in the power basis of `ζ_m` (any length).
    pub fn from_poly(m: u32, coeffs: Vec<BigRational>) -> Self {
        if m <= 2 {
            // Q(ζ_1) = Q(ζ_2) = Q, with ζ_2 = -1
            let mut acc = BigRational::zero();
            for (i, c) in coeffs.into_iter().enumerate() {
                if m == 2 && i % 2 == 1 {
                    acc -= c;
                } else {
                    acc += c;
                }
            }
            return Scalar(Repr::Rational(acc));
        }
        Self::normalize(m, reduce_mod_cyclotomic(coeffs, m))
    }

    fn normalize(m: u32, coeffs: Vec<BigRational>) -> Self {
        if coeffs.iter().skip(1).all(|c| c.is_zero()) {
            Scalar(Repr::Rational(coeffs.into_iter().next().unwrap_or_else(BigRational::zero)))
        } else {
            Scalar(Repr::Cyclotomic { conductor: m, coeffs })
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(&self.0, Repr::Rational(r) if r.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(&self.0, Repr::Rational(r) if r.is_one())
    }

    pub fn is_rational(&self) -> bool {
        matches!(self.0, Repr::Rational(_))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.0 {
            Repr::Rational(r) => Some(r),
            Repr::Cyclotomic { .. } => None,
        }
    }

    /// Smallest conductor this representation lives in (1 for rationals).
    pub fn conductor(&self) -> u32 {
        match &self.0 {
            Repr::Rational(_) => 1,
            Repr::Cyclotomic { conductor, .. } => *conductor,
        }
    }

    /// Coefficients in the power basis of `ζ_m`, padded to length `φ(m)`.
    ///
    /// `m` must be a multiple of [`Scalar::conductor`].
    pub fn coefficients(&self, m: u32) -> Vec<BigRational> {
        let d = totient(m) as usize;
        match &self.0 {
            Repr::Rational(r) => {
                let mut v = vec![BigRational::zero(); d];
                v[0] = r.clone();
                v
            }
            Repr::Cyclotomic { conductor, coeffs } => {
                assert!(m % conductor == 0, "conductor {m} does not contain Q(ζ_{conductor})");
                if *conductor == m {
                    return coeffs.clone();
                }
                let step = (m / conductor) as usize;
                let mut p = vec![BigRational::zero(); step * (coeffs.len() - 1) + 1];
                for (i, c) in coeffs.iter().enumerate() {
                    p[i * step] = c.clone();
                }
                let mut v = reduce_mod_cyclotomic(p, m);
                v.resize(d, BigRational::zero());
                v
            }
        }
    }

    fn binary_poly(&self, other: &Scalar) -> (u32, Vec<BigRational>, Vec<BigRational>) {
        let m = lcm(self.conductor(), other.conductor());
        (m, self.coefficients(m), other.coefficients(m))
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        match &self.0 {
            Repr::Rational(r) => {
                if r.is_zero() {
                    None
                } else {
                    Some(Scalar(Repr::Rational(r.recip())))
                }
            }
            Repr::Cyclotomic { conductor, coeffs } => {
                let m = *conductor;
                let d = coeffs.len();
                // columns: coefficients of x * ζ^t
                let mut cols = Vec::with_capacity(d);
                for t in 0..d {
                    let mut p = vec![BigRational::zero(); d + t];
                    for (i, c) in coeffs.iter().enumerate() {
                        p[i + t] = c.clone();
                    }
                    cols.push(reduce_mod_cyclotomic(p, m));
                }
                // augmented system M y = e_0
                let mut a: Vec<Vec<BigRational>> = (0..d)
                    .map(|r| {
                        let mut row: Vec<BigRational> = (0..d).map(|c| cols[c][r].clone()).collect();
                        row.push(if r == 0 { BigRational::one() } else { BigRational::zero() });
                        row
                    })
                    .collect();
                for col in 0..d {
                    let piv = (col..d).find(|&r| !a[r][col].is_zero())?;
                    a.swap(col, piv);
                    let inv = a[col][col].recip();
                    for x in a[col].iter_mut() {
                        *x *= &inv;
                    }
                    for r in 0..d {
                        if r != col && !a[r][col].is_zero() {
                            let f = a[r][col].clone();
                            for c in col..=d {
                                let sub = &f * &a[col][c];
                                a[r][c] -= sub;
                            }
                        }
                    }
                }
                Some(Self::normalize(m, a.into_iter().map(|row| row[d].clone()).collect()))
            }
        }
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut acc = Scalar::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Numerical value under the embedding `ζ_m ↦ exp(2πi/m)`.
    pub fn to_complex(&self) -> Complex64 {
        match &self.0 {
            Repr::Rational(r) => Complex64::new(r.to_f64().unwrap_or(f64::NAN), 0.0),
            Repr::Cyclotomic { conductor, coeffs } => {
                let base = 2.0 * std::f64::consts::PI / *conductor as f64;
                coeffs
                    .iter()
                    .enumerate()
                    .map(|(i, c)| Complex64::from_polar(c.to_f64().unwrap_or(f64::NAN), base * i as f64))
                    .sum()
            }
        }
    }

    /// Parses a rational literal such as `"3"`, `"-3/7"`.
    pub fn parse_rational(s: &str) -> Result<Scalar, Error> {
        let t = s.trim();
        let bad = || Error::Parse(format!("invalid rational literal {s:?}"));
        let (n, d) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(Scalar(Repr::Rational(BigRational::new(n, d))))
    }

    /// Rendering of a rational coefficient: `"p"` or `"p/q"`.
    pub fn rational_string(r: &BigRational) -> String {
        if r.is_integer() {
            r.numer().to_string()
        } else {
            format!("{}/{}", r.numer(), r.denom())
        }
    }

    /// True if the value is a positive rational.
    pub fn is_positive_rational(&self) -> bool {
        matches!(&self.0, Repr::Rational(r) if r.is_positive())
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match (&self.0, &other.0) {
            (Repr::Rational(a), Repr::Rational(b)) => a == b,
            (Repr::Rational(_), Repr::Cyclotomic { .. }) | (Repr::Cyclotomic { .. }, Repr::Rational(_)) => false,
            (Repr::Cyclotomic { conductor: m1, coeffs: c1 }, Repr::Cyclotomic { conductor: m2, coeffs: c2 }) => {
                if m1 == m2 {
                    c1 == c2
                } else {
                    let (_, a, b) = self.binary_poly(other);
                    a == b
                }
            }
        }
    }
}

impl Eq for Scalar {}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_integer(n)
    }
}

impl FromStr for Scalar {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        Scalar::parse_rational(s)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Rational(r) => f.write_str(&Scalar::rational_string(r)),
            Repr::Cyclotomic { conductor, coeffs } => {
                let mut first = true;
                for (i, c) in coeffs.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let (sign, abs) = if c.is_negative() { ("-", -c.clone()) } else { ("+", c.clone()) };
                    if first {
                        if sign == "-" {
                            f.write_str("-")?;
                        }
                    } else {
                        write!(f, " {sign} ")?;
                    }
                    first = false;
                    let a = Scalar::rational_string(&abs);
                    match (i, abs.is_one()) {
                        (0, _) => f.write_str(&a)?,
                        (1, true) => write!(f, "z{conductor}")?,
                        (1, false) => write!(f, "{a}*z{conductor}")?,
                        (_, true) => write!(f, "z{conductor}^{i}")?,
                        (_, false) => write!(f, "{a}*z{conductor}^{i}")?,
                    }
                }
                Ok(())
            }
        }
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        if let (Repr::Rational(a), Repr::Rational(b)) = (&self.0, &rhs.0) {
            return Scalar(Repr::Rational(a + b));
        }
        let (m, mut a, b) = self.binary_poly(rhs);
        for (x, y) in a.iter_mut().zip(b) {
            *x += y;
        }
        Scalar::normalize(m, a)
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        if let (Repr::Rational(a), Repr::Rational(b)) = (&self.0, &rhs.0) {
            return Scalar(Repr::Rational(a - b));
        }
        let (m, mut a, b) = self.binary_poly(rhs);
        for (x, y) in a.iter_mut().zip(b) {
            *x -= y;
        }
        Scalar::normalize(m, a)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (&self.0, &rhs.0) {
            (Repr::Rational(a), Repr::Rational(b)) => Scalar(Repr::Rational(a * b)),
            (Repr::Rational(a), Repr::Cyclotomic { conductor, coeffs })
            | (Repr::Cyclotomic { conductor, coeffs }, Repr::Rational(a)) => {
                if a.is_zero() {
                    Scalar::zero()
                } else {
                    Scalar(Repr::Cyclotomic { conductor: *conductor, coeffs: coeffs.iter().map(|c| c * a).collect() })
                }
            }
            _ => {
                let (m, a, b) = self.binary_poly(rhs);
                let mut p = vec![BigRational::zero(); a.len() + b.len() - 1];
                for (i, x) in a.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    for (j, y) in b.iter().enumerate() {
                        if !y.is_zero() {
                            p[i + j] += x * y;
                        }
                    }
                }
                Scalar::from_poly(m, p)
            }
        }
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        self * &rhs.inv().expect("division by zero scalar")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match &self.0 {
            Repr::Rational(r) => Scalar(Repr::Rational(-r)),
            Repr::Cyclotomic { conductor, coeffs } => {
                Scalar(Repr::Cyclotomic { conductor: *conductor, coeffs: coeffs.iter().map(|c| -c).collect() })
            }
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        if let (Repr::Rational(a), Repr::Rational(b)) = (&mut self.0, &rhs.0) {
            *a += b;
            return;
        }
        *self = &*self + rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        if let (Repr::Rational(a), Repr::Rational(b)) = (&mut self.0, &rhs.0) {
            *a -= b;
            return;
        }
        *self = &*self - rhs;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        let mut acc = Scalar::zero();
        for x in iter {
            acc += &x;
        }
        acc
    }
}
