//! Exact linear algebra over prime fields, the rationals and the integers.
//!
//! Every scalar is a reduced [`BigRational`]. Over `Fp` the numerator is a
//! residue in `[0, p)` with denominator one, over `Z` the denominator is one.
//! Elimination over `Fp` runs on machine words; over `Q` on fractions; over
//! `Z` everything goes through the Smith normal form.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Scalar = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("ring mismatch: {0} vs {1}")]
    RingMismatch(Ring, Ring),
    #[error("bad scalar {0:?} for ring {1}")]
    BadScalar(String, Ring),
    #[error("bad ring {0:?}")]
    BadRing(String),
}

/// Coefficient ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Ring {
    Fp(u64),
    Q,
    Z,
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= p {
        if p % k == 0 {
            return false;
        }
        k += 1;
    }
    true
}

impl Ring {
    /// Prime field `Z/p`. Panics unless `p` is a prime below 2^31.
    pub fn fp(p: u64) -> Ring {
        assert!(is_prime(p) && p < (1 << 31), "{p} is not a supported prime");
        Ring::Fp(p)
    }

    pub fn is_field(&self) -> bool {
        !matches!(self, Ring::Z)
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Ring::Fp(p) => *p,
            _ => 0,
        }
    }

    /// Parses `F3`, `Fp:3`, `Q`, `Z`.
    pub fn parse(s: &str) -> Result<Ring, LinError> {
        let t = s.trim();
        match t {
            "Q" => return Ok(Ring::Q),
            "Z" => return Ok(Ring::Z),
            _ => {}
        }
        let digits = t.strip_prefix("Fp:").or_else(|| t.strip_prefix('F'));
        match digits.and_then(|d| d.parse::<u64>().ok()) {
            Some(p) if is_prime(p) && p < (1 << 31) => Ok(Ring::Fp(p)),
            _ => Err(LinError::BadRing(s.to_string())),
        }
    }

    /// Canonical JSON tag: `Fp:3`, `Q`, `Z`.
    pub fn tag(&self) -> String {
        match self {
            Ring::Fp(p) => format!("Fp:{p}"),
            Ring::Q => "Q".into(),
            Ring::Z => "Z".into(),
        }
    }

    pub fn zero(&self) -> Scalar {
        Scalar::zero()
    }

    pub fn one(&self) -> Scalar {
        Scalar::one()
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        self.norm(Scalar::from_integer(BigInt::from(v)))
    }

    /// Brings a scalar into canonical form. Panics on a non-integer over `Z`
    /// or a denominator divisible by `p`.
    pub fn norm(&self, v: Scalar) -> Scalar {
        match self {
            Ring::Q => v,
            Ring::Z => {
                assert!(v.is_integer(), "non-integer {v} over Z");
                v
            }
            Ring::Fp(p) => {
                let pb = BigInt::from(*p);
                let num = v.numer().mod_floor(&pb);
                let den = v.denom().mod_floor(&pb);
                assert!(!den.is_zero(), "denominator divisible by {p}");
                let n = num.to_u64().unwrap();
                let d = den.to_u64().unwrap();
                let r = mulmod(n, invmod(d, *p), *p);
                Scalar::from_integer(BigInt::from(r))
            }
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.norm(a + b)
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.norm(a - b)
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.norm(a * b)
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        self.norm(-a)
    }

    pub fn is_unit(&self, a: &Scalar) -> bool {
        match self {
            Ring::Z => a.abs().is_one(),
            _ => !a.is_zero(),
        }
    }

    pub fn inv(&self, a: &Scalar) -> Option<Scalar> {
        if !self.is_unit(a) {
            return None;
        }
        Some(self.norm(a.recip()))
    }

    pub fn sign(&self, odd: bool) -> Scalar {
        if odd {
            self.from_i64(-1)
        } else {
            self.one()
        }
    }

    /// Parses a decimal string such as `"-1/3"`.
    pub fn parse_scalar(&self, s: &str) -> Result<Scalar, LinError> {
        let bad = || LinError::BadScalar(s.to_string(), *self);
        let t = s.trim();
        let v = match t.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(bad());
                }
                Scalar::new(n, d)
            }
            None => Scalar::from_integer(t.parse().map_err(|_| bad())?),
        };
        match self {
            Ring::Z if !v.is_integer() => Err(bad()),
            Ring::Fp(p) if (v.denom() % BigInt::from(*p)).is_zero() => Err(bad()),
            _ => Ok(self.norm(v)),
        }
    }

    pub fn fmt_scalar(&self, a: &Scalar) -> String {
        if a.is_integer() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Fp(p) => write!(f, "F{p}"),
            Ring::Q => write!(f, "Q"),
            Ring::Z => write!(f, "Z"),
        }
    }
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

fn invmod(a: u64, p: u64) -> u64 {
    powmod(a, p - 2, p)
}

/// Dense row-major matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    ring: Ring,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix[{}; {}x{}](", self.ring, self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = (0..self.cols).map(|j| self.ring.fmt_scalar(self.get(i, j))).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, ")")
    }
}

impl Matrix {
    pub fn zeros(ring: Ring, rows: usize, cols: usize) -> Matrix {
        Matrix { ring, rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(ring: Ring, n: usize) -> Matrix {
        let mut m = Matrix::zeros(ring, n, n);
        for i in 0..n {
            m.data[i * n + i] = Scalar::one();
        }
        m
    }

    pub fn from_i64(ring: Ring, rows: usize, cols: usize, vals: &[i64]) -> Matrix {
        assert_eq!(vals.len(), rows * cols);
        Matrix { ring, rows, cols, data: vals.iter().map(|&v| ring.from_i64(v)).collect() }
    }

    pub fn from_rows(ring: Ring, rows: Vec<Vec<Scalar>>) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row.into_iter().map(|v| ring.norm(v)));
        }
        Matrix { ring, rows: r, cols: c, data }
    }

    /// Column vector.
    pub fn column(ring: Ring, vals: Vec<Scalar>) -> Matrix {
        let n = vals.len();
        Matrix { ring, rows: n, cols: 1, data: vals.into_iter().map(|v| ring.norm(v)).collect() }
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        let v = self.ring.norm(v);
        self.data[i * self.cols + j] = v;
    }

    pub fn add_at(&mut self, i: usize, j: usize, v: &Scalar) {
        let k = i * self.cols + j;
        self.data[k] = self.ring.add(&self.data[k], v);
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..self.cols).all(|j| {
                let v = self.get(i, j);
                if i == j { v.is_one() } else { v.is_zero() }
            }))
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.ring, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    fn check_same(&self, other: &Matrix) {
        assert_eq!(self.ring, other.ring, "ring mismatch");
        assert_eq!(self.shape(), other.shape(), "shape mismatch");
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        self.check_same(other);
        let data = self.data.iter().zip(&other.data).map(|(a, b)| self.ring.add(a, b)).collect();
        Matrix { ring: self.ring, rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.check_same(other);
        let data = self.data.iter().zip(&other.data).map(|(a, b)| self.ring.sub(a, b)).collect();
        Matrix { ring: self.ring, rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self) -> Matrix {
        self.scale(&self.ring.from_i64(-1))
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        let data = self.data.iter().map(|a| self.ring.mul(a, c)).collect();
        Matrix { ring: self.ring, rows: self.rows, cols: self.cols, data }
    }

    /// Product `self * other`. Panics on shape or ring mismatch.
    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.ring, other.ring, "ring mismatch");
        assert_eq!(self.cols, other.rows, "shape mismatch in product {:?} * {:?}", self.shape(), other.shape());
        let (n, k, m) = (self.rows, self.cols, other.cols);
        if let Ring::Fp(p) = self.ring {
            let a = self.to_words(p);
            let b = other.to_words(p);
            let mut c = vec![0u64; n * m];
            for i in 0..n {
                for l in 0..k {
                    let x = a[i * k + l];
                    if x == 0 {
                        continue;
                    }
                    let brow = &b[l * m..(l + 1) * m];
                    let crow = &mut c[i * m..(i + 1) * m];
                    for j in 0..m {
                        crow[j] = (crow[j] + x * brow[j]) % p;
                    }
                }
            }
            return Matrix::from_words(p, n, m, &c);
        }
        let mut out = Matrix::zeros(self.ring, n, m);
        for i in 0..n {
            for l in 0..k {
                let x = self.get(i, l);
                if x.is_zero() {
                    continue;
                }
                for j in 0..m {
                    let y = other.get(l, j);
                    if !y.is_zero() {
                        let t = &out.data[i * m + j] + x * y;
                        out.data[i * m + j] = t;
                    }
                }
            }
        }
        out
    }

    pub fn try_mul(&self, other: &Matrix) -> Result<Matrix, LinError> {
        if self.ring != other.ring {
            return Err(LinError::RingMismatch(self.ring, other.ring));
        }
        if self.cols != other.rows {
            return Err(LinError::Shape(format!("{:?} * {:?}", self.shape(), other.shape())));
        }
        Ok(self.mul(other))
    }

    /// Kronecker product; the row index of `a ⊗ b` is `i * b.rows + k`.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.ring, other.ring, "ring mismatch");
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        let mut out = Matrix::zeros(self.ring, r, c);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let x = self.get(i, j);
                if x.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let y = other.get(k, l);
                        if !y.is_zero() {
                            out.data[(i * other.rows + k) * c + j * other.cols + l] = self.ring.mul(x, y);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        let mut out = Matrix::zeros(self.ring, self.rows, self.cols + other.cols);
        out.set_block(0, 0, self);
        out.set_block(0, self.cols, other);
        out
    }

    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut out = Matrix::zeros(self.ring, self.rows + other.rows, self.cols);
        out.set_block(0, 0, self);
        out.set_block(self.rows, 0, other);
        out
    }

    pub fn block_diag(&self, other: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(self.ring, self.rows + other.rows, self.cols + other.cols);
        out.set_block(0, 0, self);
        out.set_block(self.rows, self.cols, other);
        out
    }

    /// Overwrites the block with top-left corner `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Matrix) {
        assert!(r0 + b.rows <= self.rows && c0 + b.cols <= self.cols, "block out of range");
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.data[(r0 + i) * self.cols + c0 + j] = b.get(i, j).clone();
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        let mut out = Matrix::zeros(self.ring, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out.data[i * cols + j] = self.get(r0 + i, c0 + j).clone();
            }
        }
        out
    }

    pub fn select_cols(&self, idx: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.ring, self.rows, idx.len());
        for i in 0..self.rows {
            for (jj, &j) in idx.iter().enumerate() {
                out.data[i * idx.len() + jj] = self.get(i, j).clone();
            }
        }
        out
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.ring, idx.len(), self.cols);
        for (ii, &i) in idx.iter().enumerate() {
            out.data[ii * self.cols..(ii + 1) * self.cols].clone_from_slice(self.row(i));
        }
        out
    }

    fn to_words(&self, p: u64) -> Vec<u64> {
        self.data.iter().map(|v| v.numer().to_u64().expect("residue")).map(|v| v % p).collect()
    }

    fn from_words(p: u64, rows: usize, cols: usize, w: &[u64]) -> Matrix {
        Matrix {
            ring: Ring::Fp(p),
            rows,
            cols,
            data: w.iter().map(|&v| Scalar::from_integer(BigInt::from(v))).collect(),
        }
    }

    /// Reduced row echelon form over a field, with pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        assert!(self.ring.is_field(), "rref needs a field");
        match self.ring {
            Ring::Fp(p) => {
                let mut w = self.to_words(p);
                let piv = rref_words(&mut w, self.rows, self.cols, p);
                (Matrix::from_words(p, self.rows, self.cols, &w), piv)
            }
            _ => {
                let mut m = self.clone();
                let piv = rref_q(&mut m);
                (m, piv)
            }
        }
    }

    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        match self.ring {
            Ring::Z => {
                let snf = smith_normal_form(self);
                snf.rank
            }
            _ => self.rref().1.len(),
        }
    }

    /// Inverse of a square matrix, when it exists over the ring.
    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let id = Matrix::identity(self.ring, self.rows);
        let x = solve_linear(self, &id).ok()??;
        if x.mul(self) == id {
            Some(x)
        } else {
            None
        }
    }

    /// Determinant (fraction-free over Z and Q, elimination over Fp).
    pub fn det(&self) -> Scalar {
        assert_eq!(self.rows, self.cols, "det of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Scalar::one();
        }
        let mut a: Vec<Scalar> = self.data.clone();
        let mut sign = false;
        let mut det = Scalar::one();
        for c in 0..n {
            let piv = (c..n).find(|&r| !a[r * n + c].is_zero());
            let Some(r) = piv else { return Scalar::zero() };
            if r != c {
                for j in 0..n {
                    a.swap(r * n + j, c * n + j);
                }
                sign = !sign;
            }
            let pv = a[c * n + c].clone();
            det = self.ring.mul(&det, &pv);
            let pinv = if self.ring == Ring::Z { pv.recip() } else { self.ring.inv(&pv).unwrap() };
            for r2 in c + 1..n {
                let f = &a[r2 * n + c] * &pinv;
                if f.is_zero() {
                    continue;
                }
                for j in c..n {
                    let t = &a[r2 * n + j] - &f * &a[c * n + j];
                    a[r2 * n + j] = if self.ring == Ring::Z { t } else { self.ring.norm(t) };
                }
            }
        }
        let d = if sign { -det } else { det };
        if self.ring == Ring::Z {
            Scalar::from_integer(d.to_integer())
        } else {
            self.ring.norm(d)
        }
    }
}

fn rref_words(a: &mut [u64], rows: usize, cols: usize, p: u64) -> Vec<usize> {
    let mut piv = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(k) = (r..rows).find(|&k| a[k * cols + c] != 0) else { continue };
        if k != r {
            for j in 0..cols {
                a.swap(k * cols + j, r * cols + j);
            }
        }
        let inv = invmod(a[r * cols + c], p);
        for j in c..cols {
            a[r * cols + j] = mulmod(a[r * cols + j], inv, p);
        }
        for k in 0..rows {
            if k == r {
                continue;
            }
            let f = a[k * cols + c];
            if f == 0 {
                continue;
            }
            let g = p - f;
            for j in c..cols {
                let v = a[r * cols + j];
                if v != 0 {
                    a[k * cols + j] = (a[k * cols + j] + mulmod(g, v, p)) % p;
                }
            }
        }
        piv.push(c);
        r += 1;
    }
    piv
}

fn rref_q(m: &mut Matrix) -> Vec<usize> {
    let (rows, cols) = m.shape();
    let mut piv = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(k) = (r..rows).find(|&k| !m.get(k, c).is_zero()) else { continue };
        if k != r {
            for j in 0..cols {
                m.data.swap(k * cols + j, r * cols + j);
            }
        }
        let inv = m.get(r, c).recip();
        for j in c..cols {
            let v = m.get(r, j) * &inv;
            m.data[r * cols + j] = v;
        }
        for k in 0..rows {
            if k == r || m.get(k, c).is_zero() {
                continue;
            }
            let f = m.get(k, c).clone();
            for j in c..cols {
                if m.get(r, j).is_zero() {
                    continue;
                }
                let v = m.get(k, j) - &f * m.get(r, j);
                m.data[k * cols + j] = v;
            }
        }
        piv.push(c);
        r += 1;
    }
    piv
}

/// Result of [`smith_normal_form`]: `u * m * v == d`.
#[derive(Debug, Clone)]
pub struct Snf {
    pub u: Matrix,
    pub u_inv: Matrix,
    pub d: Matrix,
    pub v: Matrix,
    pub rank: usize,
}

impl Snf {
    /// Nonzero diagonal entries `d_1 | d_2 | ...`.
    pub fn divisors(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.d.get(i, i).numer().clone()).collect()
    }
}

/// Smith normal form of an integer matrix, `U·m·V = D` with `U`, `V`
/// unimodular and `d_1 | d_2 | …` on the diagonal.
pub fn smith_normal_form(m: &Matrix) -> Snf {
    assert_eq!(m.ring, Ring::Z, "Smith normal form needs an integer matrix");
    let (rows, cols) = m.shape();
    let mut a: Vec<Vec<BigInt>> =
        (0..rows).map(|i| (0..cols).map(|j| m.get(i, j).numer().clone()).collect()).collect();
    let mut u: Vec<Vec<BigInt>> = int_identity(rows);
    let mut ui: Vec<Vec<BigInt>> = int_identity(rows);
    let mut v: Vec<Vec<BigInt>> = int_identity(cols);

    // row ops: row_i += k * row_j  applies to a and u; u_inv gets col_j -= k * col_i
    fn row_add(a: &mut [Vec<BigInt>], i: usize, j: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        let rj = a[j].clone();
        for (x, y) in a[i].iter_mut().zip(rj.iter()) {
            *x += k * y;
        }
    }
    fn col_add(a: &mut [Vec<BigInt>], i: usize, j: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for row in a.iter_mut() {
            let t = k * &row[j];
            row[i] += t;
        }
    }
    fn col_swap(a: &mut [Vec<BigInt>], i: usize, j: usize) {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
    }

    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry in the lower-right block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        u.swap(t, pi);
        col_swap(&mut ui, t, pi);
        col_swap(&mut a, t, pj);
        col_swap(&mut v, t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                let nq = -&q;
                row_add(&mut a, i, t, &nq);
                row_add(&mut u, i, t, &nq);
                col_add(&mut ui, t, i, &q);
                if !a[i][t].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                let nq = -&q;
                col_add(&mut a, j, t, &nq);
                col_add(&mut v, j, t, &nq);
                if !a[t][j].is_zero() {
                    dirty = true;
                }
            }
            if !dirty {
                // divisibility of the remaining block
                let bad = (t + 1..rows).flat_map(|i| (t + 1..cols).map(move |j| (i, j))).find(|&(i, j)| {
                    !(&a[i][j] % &a[t][t]).is_zero()
                });
                match bad {
                    None => break,
                    Some((i, _)) => {
                        let one = BigInt::one();
                        row_add(&mut a, t, i, &one);
                        row_add(&mut u, t, i, &one);
                        col_add(&mut ui, i, t, &(-&one));
                        continue;
                    }
                }
            }
            // move the smallest entry of row/column t back to the pivot
            let mut best = (t, t);
            for i in t..rows {
                if !a[i][t].is_zero() && a[i][t].abs() < a[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t..cols {
                if !a[t][j].is_zero() && a[t][j].abs() < a[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            if best.0 != t {
                a.swap(t, best.0);
                u.swap(t, best.0);
                col_swap(&mut ui, t, best.0);
            }
            if best.1 != t {
                col_swap(&mut a, t, best.1);
                col_swap(&mut v, t, best.1);
            }
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = -&*x;
            }
            for x in u[t].iter_mut() {
                *x = -&*x;
            }
            for row in ui.iter_mut() {
                row[t] = -&row[t];
            }
        }
        t += 1;
    }
    let to_m = |g: Vec<Vec<BigInt>>, r: usize, c: usize| {
        let mut out = Matrix::zeros(Ring::Z, r, c);
        for (i, row) in g.into_iter().enumerate() {
            for (j, x) in row.into_iter().enumerate() {
                out.data[i * c + j] = Scalar::from_integer(x);
            }
        }
        out
    };
    let rank = (0..rows.min(cols)).take_while(|&i| !a[i][i].is_zero()).count();
    Snf { u: to_m(u, rows, rows), u_inv: to_m(ui, rows, rows), d: to_m(a, rows, cols), v: to_m(v, cols, cols), rank }
}

fn int_identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

/// Solves `a · x = b` (all columns of `b` at once). `Ok(None)` when no
/// solution exists; over `Z` only integer solutions count.
pub fn solve_linear(a: &Matrix, b: &Matrix) -> Result<Option<Matrix>, LinError> {
    if a.ring != b.ring {
        return Err(LinError::RingMismatch(a.ring, b.ring));
    }
    if a.rows != b.rows {
        return Err(LinError::Shape(format!("A is {:?}, b is {:?}", a.shape(), b.shape())));
    }
    let ring = a.ring;
    let n = a.cols;
    if ring == Ring::Z {
        let s = smith_normal_form(a);
        let y = s.u.mul(b);
        let mut z = Matrix::zeros(ring, n, b.cols);
        for col in 0..b.cols {
            for i in 0..a.rows {
                let yi = y.get(i, col);
                if i < s.rank {
                    let di = s.d.get(i, i);
                    let q = yi / di;
                    if !q.is_integer() {
                        return Ok(None);
                    }
                    z.data[i * b.cols + col] = q;
                } else if !yi.is_zero() {
                    return Ok(None);
                }
            }
        }
        return Ok(Some(s.v.mul(&z)));
    }
    let aug = a.hstack(b);
    let (r, piv) = aug.rref();
    if piv.iter().any(|&c| c >= n) {
        return Ok(None);
    }
    let mut x = Matrix::zeros(ring, n, b.cols);
    for (row, &c) in piv.iter().enumerate() {
        for col in 0..b.cols {
            x.data[c * b.cols + col] = r.get(row, n + col).clone();
        }
    }
    Ok(Some(x))
}

/// Columns form a basis of the kernel (a saturated lattice basis over `Z`).
pub fn kernel_basis(m: &Matrix) -> Matrix {
    let ring = m.ring;
    let n = m.cols;
    if m.rows == 0 {
        return Matrix::identity(ring, n);
    }
    if ring == Ring::Z {
        let s = smith_normal_form(m);
        let idx: Vec<usize> = (s.rank..n).collect();
        return s.v.select_cols(&idx);
    }
    let (r, piv) = m.rref();
    let free: Vec<usize> = (0..n).filter(|c| !piv.contains(c)).collect();
    let mut k = Matrix::zeros(ring, n, free.len());
    for (j, &f) in free.iter().enumerate() {
        k.set(f, j, Scalar::one());
        for (row, &c) in piv.iter().enumerate() {
            k.set(c, j, -r.get(row, f));
        }
    }
    k
}

/// Columns form a basis of the column space.
pub fn image_basis(m: &Matrix) -> Matrix {
    let ring = m.ring;
    if m.cols == 0 || m.rows == 0 {
        return Matrix::zeros(ring, m.rows, 0);
    }
    if ring == Ring::Z {
        let s = smith_normal_form(m);
        let mut out = Matrix::zeros(ring, m.rows, s.rank);
        for j in 0..s.rank {
            let dj = s.d.get(j, j);
            for i in 0..m.rows {
                out.set(i, j, s.u_inv.get(i, j) * dj);
            }
        }
        return out;
    }
    let (_, piv) = m.rref();
    m.select_cols(&piv)
}

/// Cokernel of `m` as free rank plus non-unit invariant factors.
pub fn cokernel_data(m: &Matrix) -> (usize, Vec<BigInt>) {
    if m.ring == Ring::Z {
        let s = smith_normal_form(m);
        let tors = s.divisors().into_iter().filter(|d| !d.is_one()).collect();
        (m.rows - s.rank, tors)
    } else {
        (m.rows - m.rank(), vec![])
    }
}

/// Injective with a complement: over `Z` every invariant factor is one.
pub fn is_split_mono(m: &Matrix) -> bool {
    if m.cols == 0 {
        return true;
    }
    if m.ring == Ring::Z {
        let s = smith_normal_form(m);
        s.rank == m.cols && s.divisors().iter().all(|d| d.is_one())
    } else {
        m.rank() == m.cols
    }
}

/// Surjective (hence split, all modules being free).
pub fn is_split_epi(m: &Matrix) -> bool {
    if m.rows == 0 {
        return true;
    }
    if m.ring == Ring::Z {
        let s = smith_normal_form(m);
        s.rank == m.rows && s.divisors().iter().all(|d| d.is_one())
    } else {
        m.rank() == m.rows
    }
}

/// Basis of a complement of the column space of `m` inside the ambient
/// space, as standard basis vectors (indices). Field only.
pub fn complement_indices(m: &Matrix) -> Vec<usize> {
    assert!(m.ring.is_field());
    let aug = m.hstack(&Matrix::identity(m.ring, m.rows));
    let (_, piv) = aug.rref();
    piv.into_iter().filter(|&c| c >= m.cols).map(|c| c - m.cols).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(rows: usize, cols: usize, v: &[i64]) -> Matrix {
        Matrix::from_i64(Ring::Z, rows, cols, v)
    }

    #[test]
    fn snf_empty() {
        let s = smith_normal_form(&Matrix::zeros(Ring::Z, 0, 0));
        assert_eq!(s.d.shape(), (0, 0));
        assert_eq!(s.u.shape(), (0, 0));
        assert_eq!(s.v.shape(), (0, 0));
    }

    #[test]
    fn snf_identity() {
        let s = smith_normal_form(&Matrix::identity(Ring::Z, 2));
        assert!(s.d.is_identity());
    }

    #[test]
    fn snf_2468() {
        let m = z(2, 2, &[2, 4, 6, 8]);
        let s = smith_normal_form(&m);
        assert_eq!(s.d, z(2, 2, &[2, 0, 0, 4]));
        assert_eq!(s.u.mul(&m).mul(&s.v), s.d);
        assert_eq!(s.u.mul(&s.u_inv), Matrix::identity(Ring::Z, 2));
    }

    #[test]
    fn solve_examples() {
        let id = Matrix::identity(Ring::Q, 3);
        let b = Matrix::from_i64(Ring::Q, 3, 1, &[1, -2, 7]);
        assert_eq!(solve_linear(&id, &b).unwrap().unwrap(), b);
        assert!(solve_linear(&z(1, 1, &[2]), &z(1, 1, &[3])).unwrap().is_none());
        let x = solve_linear(&Matrix::from_i64(Ring::Q, 1, 1, &[2]), &Matrix::from_i64(Ring::Q, 1, 1, &[3]))
            .unwrap()
            .unwrap();
        assert_eq!(x.get(0, 0), &Scalar::new(3.into(), 2.into()));
        assert!(solve_linear(&id, &Matrix::zeros(Ring::Q, 2, 1)).is_err());
    }

    #[test]
    fn kernel_image_cokernel_examples() {
        for ring in [Ring::fp(3), Ring::Q, Ring::Z] {
            assert_eq!(kernel_basis(&Matrix::identity(ring, 4)).cols(), 0);
            assert_eq!(kernel_basis(&Matrix::zeros(ring, 3, 3)).cols(), 3);
        }
        assert_eq!(cokernel_data(&z(1, 1, &[2])), (0, vec![BigInt::from(2)]));
    }

    #[test]
    fn fp_arithmetic() {
        let r = Ring::fp(5);
        assert_eq!(r.from_i64(-1), r.from_i64(4));
        assert_eq!(r.parse_scalar("1/2").unwrap(), r.from_i64(3));
        assert!(r.parse_scalar("1/5").is_err());
        assert!(Ring::Z.parse_scalar("1/2").is_err());
        assert_eq!(Ring::parse("Fp:7").unwrap(), Ring::Fp(7));
        assert_eq!(Ring::parse("F2").unwrap(), Ring::Fp(2));
        assert!(Ring::parse("F4").is_err());
    }

    #[test]
    fn split_predicates_over_z() {
        let two = z(1, 1, &[2]);
        assert!(!is_split_mono(&two));
        assert!(is_split_mono(&Matrix::from_i64(Ring::Q, 1, 1, &[2])));
        assert!(is_split_mono(&z(2, 1, &[2, 3])));
        assert!(!is_split_epi(&z(1, 2, &[2, 4])));
    }
}
