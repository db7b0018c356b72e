//! Bounded chain complexes of finite free modules, chain maps, homotopies,
//! homology, tensor and hom complexes, and the standard small complexes.
//!
//! Conventions: `d(x⊗y) = dx⊗y + (-1)^|x| x⊗dy`, `∂φ = dφ - (-1)^|φ| φd`,
//! the k-fold suspension multiplies `d` by `(-1)^k`. Tensor bases are ordered
//! by (degree of the left factor, left index, right index).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::exactlin::{
    cokernel_data, complement_indices, is_split_mono, kernel_basis, smith_normal_form, solve_linear, LinError, Matrix,
    Ring, Scalar,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChainError {
    #[error("d∘d != 0 in degree {0}")]
    NotComplex(i64),
    #[error("not a chain map in degree {0}")]
    NotChainMap(i64),
    #[error("shape mismatch in degree {0}: {1}")]
    Shape(i64, String),
    #[error("ring mismatch: {0} vs {1}")]
    RingMismatch(Ring, Ring),
    #[error("unbounded source")]
    Unbounded,
    #[error("not free: {0}")]
    NotFree(String),
    #[error("json: {0}")]
    Json(String),
    #[error(transparent)]
    Lin(#[from] LinError),
}

/// Bounded complex of free modules. `d(n)` has shape `rank(n-1) × rank(n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    ring: Ring,
    lo: i64,
    ranks: Vec<usize>,
    diffs: Vec<Matrix>,
}

impl ChainComplex {
    /// Builds and validates a complex; `diffs[k]` is the differential leaving
    /// degree `lo + k`.
    pub fn new(ring: Ring, lo: i64, ranks: Vec<usize>, diffs: Vec<Matrix>) -> Result<ChainComplex, ChainError> {
        let c = ChainComplex::from_parts(ring, lo, ranks, diffs)?;
        c.validate()?;
        Ok(c)
    }

    /// Shape-checked construction without the `d∘d = 0` test.
    pub fn from_parts(ring: Ring, lo: i64, ranks: Vec<usize>, diffs: Vec<Matrix>) -> Result<ChainComplex, ChainError> {
        if diffs.len() != ranks.len() {
            return Err(ChainError::Shape(lo, "one differential per degree".into()));
        }
        for (k, m) in diffs.iter().enumerate() {
            let n = lo + k as i64;
            let below = if k == 0 { 0 } else { ranks[k - 1] };
            if m.ring() != ring {
                return Err(ChainError::RingMismatch(ring, m.ring()));
            }
            if m.shape() != (below, ranks[k]) {
                if k == 0 && m.cols() == ranks[0] && m.is_zero() {
                    continue;
                }
                return Err(ChainError::Shape(n, format!("expected {:?}, got {:?}", (below, ranks[k]), m.shape())));
            }
        }
        let mut c = ChainComplex { ring, lo, ranks, diffs };
        if let Some(m) = c.diffs.first_mut() {
            if m.rows() != 0 {
                *m = Matrix::zeros(ring, 0, m.cols());
            }
        }
        c.trim();
        Ok(c)
    }

    fn trim(&mut self) {
        while self.ranks.last() == Some(&0) {
            self.ranks.pop();
            self.diffs.pop();
        }
        let lead = self.ranks.iter().take_while(|&&r| r == 0).count();
        if lead > 0 {
            self.ranks.drain(..lead);
            self.diffs.drain(..lead);
            self.lo += lead as i64;
            if let Some(m) = self.diffs.first_mut() {
                *m = Matrix::zeros(self.ring, 0, m.cols());
            }
        }
        if self.ranks.is_empty() {
            self.lo = 0;
        }
    }

    pub fn zero(ring: Ring) -> ChainComplex {
        ChainComplex { ring, lo: 0, ranks: vec![], diffs: vec![] }
    }

    /// The ground ring in degree zero.
    pub fn unit(ring: Ring) -> ChainComplex {
        sphere(0, ring)
    }

    /// Graded module with zero differential.
    pub fn graded(ring: Ring, ranks: &BTreeMap<i64, usize>) -> ChainComplex {
        ChainComplex::from_fn(ring, ranks, |_| None)
    }

    /// Complex with the given ranks and differential blocks; `None` means zero.
    pub fn from_fn(ring: Ring, ranks: &BTreeMap<i64, usize>, mut d: impl FnMut(i64) -> Option<Matrix>) -> ChainComplex {
        let (Some(&lo), Some(&hi)) = (ranks.keys().next(), ranks.keys().next_back()) else {
            return ChainComplex::zero(ring);
        };
        let rk = |n: i64| ranks.get(&n).copied().unwrap_or(0);
        let mut rs = vec![];
        let mut ds = vec![];
        for n in lo..=hi {
            rs.push(rk(n));
            let below = if n == lo { 0 } else { rk(n - 1) };
            let m = if n > lo { d(n) } else { None };
            let m = m.unwrap_or_else(|| Matrix::zeros(ring, below, rk(n)));
            ds.push(m);
        }
        ChainComplex::from_parts(ring, lo, rs, ds).expect("from_fn shapes")
    }

    pub fn validate(&self) -> Result<(), ChainError> {
        for n in self.lo + 1..=self.hi() {
            if !self.d(n - 1).mul(&self.d(n)).is_zero() {
                return Err(ChainError::NotComplex(n));
            }
        }
        Ok(())
    }

    /// First degree `n` with `d(n-1)·d(n) != 0`.
    pub fn first_failure(&self) -> Option<i64> {
        match self.validate() {
            Err(ChainError::NotComplex(n)) => Some(n),
            _ => None,
        }
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.ranks.is_empty()
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// Top degree; `lo - 1` for the zero complex.
    pub fn hi(&self) -> i64 {
        self.lo + self.ranks.len() as i64 - 1
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi()
    }

    pub fn rank(&self, n: i64) -> usize {
        if n < self.lo || n > self.hi() {
            0
        } else {
            self.ranks[(n - self.lo) as usize]
        }
    }

    pub fn total_rank(&self) -> usize {
        self.ranks.iter().sum()
    }

    pub fn ranks(&self) -> BTreeMap<i64, usize> {
        self.degrees().map(|n| (n, self.rank(n))).filter(|&(_, r)| r > 0).collect()
    }

    /// Differential leaving degree `n`.
    pub fn d(&self, n: i64) -> Matrix {
        if n <= self.lo || n > self.hi() {
            return Matrix::zeros(self.ring, self.rank(n - 1), self.rank(n));
        }
        self.diffs[(n - self.lo) as usize].clone()
    }

    pub fn d_ref(&self, n: i64) -> Option<&Matrix> {
        if n <= self.lo || n > self.hi() {
            None
        } else {
            Some(&self.diffs[(n - self.lo) as usize])
        }
    }

    pub fn to_json(&self) -> Value {
        let mut rank = Map::new();
        let mut d = Map::new();
        for n in self.degrees() {
            rank.insert(n.to_string(), json!(self.rank(n)));
            if n > self.lo {
                d.insert(n.to_string(), matrix_json(&self.d(n)));
            }
        }
        json!({"ring": self.ring.tag(), "lo": self.lo, "hi": self.hi(), "rank": rank, "d": d})
    }

    /// Parses the JSON form; does not check `d∘d = 0` (see [`validate`]).
    ///
    /// [`validate`]: ChainComplex::validate
    pub fn from_json(v: &Value) -> Result<ChainComplex, ChainError> {
        let err = |s: &str| ChainError::Json(s.to_string());
        let ring = Ring::parse(v.get("ring").and_then(Value::as_str).ok_or_else(|| err("missing ring"))?)?;
        let lo = v.get("lo").and_then(Value::as_i64).ok_or_else(|| err("missing lo"))?;
        let hi = v.get("hi").and_then(Value::as_i64).ok_or_else(|| err("missing hi"))?;
        if hi < lo - 1 {
            return Err(err("hi < lo - 1"));
        }
        let rank_obj = v.get("rank").and_then(Value::as_object).ok_or_else(|| err("missing rank"))?;
        let mut ranks = BTreeMap::new();
        for (k, r) in rank_obj {
            let n: i64 = k.parse().map_err(|_| err("rank key not an integer"))?;
            let r = r.as_u64().ok_or_else(|| err("rank not a nonnegative integer"))? as usize;
            if r > 0 && (n < lo || n > hi) {
                return Err(ChainError::Json(format!("rank in degree {n} outside [lo, hi]")));
            }
            ranks.insert(n, r);
        }
        let dobj = v.get("d").and_then(Value::as_object).cloned().unwrap_or_default();
        let mut blocks = BTreeMap::new();
        for (k, m) in &dobj {
            let n: i64 = k.parse().map_err(|_| err("d key not an integer"))?;
            let rows = ranks.get(&(n - 1)).copied().unwrap_or(0);
            let cols = ranks.get(&n).copied().unwrap_or(0);
            let mat = matrix_from_json(ring, m, rows, cols).map_err(|e| ChainError::Shape(n, e))?;
            blocks.insert(n, mat);
        }
        let ranks_nz: BTreeMap<i64, usize> = ranks.into_iter().filter(|&(_, r)| r > 0).collect();
        Ok(ChainComplex::from_fn(ring, &ranks_nz, |n| blocks.get(&n).cloned()))
    }
}

pub fn matrix_json(m: &Matrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array(m.row(i).iter().map(|x| Value::String(m.ring().fmt_scalar(x))).collect()))
            .collect(),
    )
}

pub fn matrix_from_json(ring: Ring, v: &Value, rows: usize, cols: usize) -> Result<Matrix, String> {
    let arr = v.as_array().ok_or("matrix must be an array of rows")?;
    if arr.len() != rows && !(rows == 0 && arr.is_empty()) {
        return Err(format!("expected {rows} rows, got {}", arr.len()));
    }
    let mut m = Matrix::zeros(ring, rows, cols);
    for (i, row) in arr.iter().enumerate() {
        let row = row.as_array().ok_or("row must be an array")?;
        if row.len() != cols {
            return Err(format!("expected {cols} columns, got {}", row.len()));
        }
        for (j, e) in row.iter().enumerate() {
            let s = match e {
                Value::String(s) => s.clone(),
                Value::Number(n) => n.to_string(),
                _ => return Err("entries must be decimal strings".into()),
            };
            m.set(i, j, ring.parse_scalar(&s).map_err(|e| e.to_string())?);
        }
    }
    Ok(m)
}

/// Degree-zero chain map; `f(n)` has shape `dst.rank(n) × src.rank(n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    pub src: ChainComplex,
    pub dst: ChainComplex,
    f: BTreeMap<i64, Matrix>,
}

impl ChainMap {
    pub fn new(src: ChainComplex, dst: ChainComplex, f: BTreeMap<i64, Matrix>) -> Result<ChainMap, ChainError> {
        let m = ChainMap::from_parts(src, dst, f)?;
        m.check()?;
        Ok(m)
    }

    /// Shape-checked construction without the commutation test.
    pub fn from_parts(src: ChainComplex, dst: ChainComplex, f: BTreeMap<i64, Matrix>) -> Result<ChainMap, ChainError> {
        if src.ring != dst.ring {
            return Err(ChainError::RingMismatch(src.ring, dst.ring));
        }
        let mut clean = BTreeMap::new();
        for (n, m) in f {
            let shape = (dst.rank(n), src.rank(n));
            if m.shape() != shape {
                return Err(ChainError::Shape(n, format!("expected {:?}, got {:?}", shape, m.shape())));
            }
            if shape.0 > 0 && shape.1 > 0 && !m.is_zero() {
                clean.insert(n, m);
            }
        }
        Ok(ChainMap { src, dst, f: clean })
    }

    pub fn from_fn(src: &ChainComplex, dst: &ChainComplex, mut f: impl FnMut(i64) -> Matrix) -> Result<ChainMap, ChainError> {
        let mut map = BTreeMap::new();
        for n in src.degrees() {
            if dst.rank(n) > 0 && src.rank(n) > 0 {
                map.insert(n, f(n));
            }
        }
        ChainMap::new(src.clone(), dst.clone(), map)
    }

    pub fn check(&self) -> Result<(), ChainError> {
        let lo = self.src.lo().min(self.dst.lo());
        let hi = self.src.hi().max(self.dst.hi());
        for n in lo..=hi + 1 {
            let a = self.dst.d(n).mul(&self.f(n));
            let b = self.f(n - 1).mul(&self.src.d(n));
            if a != b {
                return Err(ChainError::NotChainMap(n));
            }
        }
        Ok(())
    }

    pub fn is_chain_map(&self) -> bool {
        self.check().is_ok()
    }

    pub fn ring(&self) -> Ring {
        self.src.ring
    }

    pub fn f(&self, n: i64) -> Matrix {
        self.f.get(&n).cloned().unwrap_or_else(|| Matrix::zeros(self.src.ring, self.dst.rank(n), self.src.rank(n)))
    }

    pub fn identity(x: &ChainComplex) -> ChainMap {
        let f = x.degrees().map(|n| (n, Matrix::identity(x.ring, x.rank(n)))).collect();
        ChainMap::from_parts(x.clone(), x.clone(), f).unwrap()
    }

    pub fn zero(src: &ChainComplex, dst: &ChainComplex) -> ChainMap {
        ChainMap::from_parts(src.clone(), dst.clone(), BTreeMap::new()).unwrap()
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &ChainMap) -> ChainMap {
        assert_eq!(first.dst, self.src, "compose: codomain/domain mismatch");
        let f = first.src.degrees().map(|n| (n, self.f(n).mul(&first.f(n)))).collect();
        ChainMap::from_parts(first.src.clone(), self.dst.clone(), f).unwrap()
    }

    pub fn add(&self, other: &ChainMap) -> ChainMap {
        assert!(self.src == other.src && self.dst == other.dst, "add: mismatched maps");
        let f = self.src.degrees().map(|n| (n, self.f(n).add(&other.f(n)))).collect();
        ChainMap::from_parts(self.src.clone(), self.dst.clone(), f).unwrap()
    }

    pub fn sub(&self, other: &ChainMap) -> ChainMap {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> ChainMap {
        self.scale(&self.ring().from_i64(-1))
    }

    pub fn scale(&self, c: &Scalar) -> ChainMap {
        let f = self.f.iter().map(|(&n, m)| (n, m.scale(c))).collect();
        ChainMap::from_parts(self.src.clone(), self.dst.clone(), f).unwrap()
    }

    pub fn is_zero(&self) -> bool {
        self.f.values().all(Matrix::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.src == self.dst && self.src.degrees().all(|n| self.f(n).is_identity())
    }

    pub fn to_json(&self) -> Value {
        let mut f = Map::new();
        for n in self.src.degrees() {
            if self.dst.rank(n) > 0 && self.src.rank(n) > 0 {
                f.insert(n.to_string(), matrix_json(&self.f(n)));
            }
        }
        json!({"src": self.src.to_json(), "dst": self.dst.to_json(), "f": f})
    }

    pub fn from_json(v: &Value) -> Result<ChainMap, ChainError> {
        let src = ChainComplex::from_json(v.get("src").ok_or(ChainError::Json("missing src".into()))?)?;
        let dst = ChainComplex::from_json(v.get("dst").ok_or(ChainError::Json("missing dst".into()))?)?;
        let mut f = BTreeMap::new();
        if let Some(obj) = v.get("f").and_then(Value::as_object) {
            for (k, m) in obj {
                let n: i64 = k.parse().map_err(|_| ChainError::Json("f key not an integer".into()))?;
                let mat = matrix_from_json(src.ring, m, dst.rank(n), src.rank(n)).map_err(|e| ChainError::Shape(n, e))?;
                f.insert(n, mat);
            }
        }
        ChainMap::from_parts(src, dst, f)
    }
}

/// Homotopy `h` with `d h + h d = from - to`; `h(n)` is `dst(n+1) × src(n)`.
#[derive(Clone, Debug)]
pub struct ChainHomotopy {
    pub from_map: ChainMap,
    pub to_map: ChainMap,
    pub h: BTreeMap<i64, Matrix>,
}

impl ChainHomotopy {
    pub fn h(&self, n: i64) -> Matrix {
        let (s, t) = (&self.from_map.src, &self.from_map.dst);
        self.h.get(&n).cloned().unwrap_or_else(|| Matrix::zeros(s.ring, t.rank(n + 1), s.rank(n)))
    }

    pub fn check(&self) -> bool {
        let (s, t) = (&self.from_map.src, &self.from_map.dst);
        s.degrees().all(|n| {
            let lhs = t.d(n + 1).mul(&self.h(n)).add(&self.h(n - 1).mul(&s.d(n)));
            lhs == self.from_map.f(n).sub(&self.to_map.f(n))
        })
    }
}

/// Homology in one degree: free rank plus non-unit torsion divisors.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Homology {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl Homology {
    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

pub fn homology(x: &ChainComplex, n: i64) -> Homology {
    let rk = x.rank(n);
    if rk == 0 {
        return Homology::default();
    }
    let dn = x.d(n);
    let nullity = rk - dn.rank();
    let dn1 = x.d(n + 1);
    if x.ring == Ring::Z {
        let s = smith_normal_form(&dn1);
        let torsion = s.divisors().into_iter().filter(|d| !d.is_one()).collect();
        Homology { free_rank: nullity - s.rank, torsion }
    } else {
        Homology { free_rank: nullity - dn1.rank(), torsion: vec![] }
    }
}

pub fn is_acyclic(x: &ChainComplex) -> bool {
    x.degrees().all(|n| homology(x, n).is_zero())
}

/// Betti numbers (free ranks) over the support.
pub fn betti(x: &ChainComplex) -> BTreeMap<i64, usize> {
    x.degrees().map(|n| (n, homology(x, n).free_rank)).filter(|&(_, b)| b > 0).collect()
}

/// `Sⁿ`: rank one in degree `n`.
pub fn sphere(n: i64, ring: Ring) -> ChainComplex {
    ChainComplex::from_parts(ring, n, vec![1], vec![Matrix::zeros(ring, 0, 1)]).unwrap()
}

/// `Dⁿ`: rank one in degrees `n` and `n-1`, identity differential.
pub fn disk(n: i64, ring: Ring) -> ChainComplex {
    ChainComplex::from_parts(ring, n - 1, vec![1, 1], vec![Matrix::zeros(ring, 0, 1), Matrix::identity(ring, 1)]).unwrap()
}

/// The interval: `t` in degree one, `∂₀t, ∂₁t` in degree zero, `dt = ∂₀t - ∂₁t`.
pub fn interval(ring: Ring) -> ChainComplex {
    ChainComplex::from_parts(ring, 0, vec![2, 1], vec![Matrix::zeros(ring, 0, 2), Matrix::from_i64(ring, 2, 1, &[1, -1])])
        .unwrap()
}

/// Offsets of the summands `X_i ⊗ Y_{n-i}` inside `(X⊗Y)_n`.
#[derive(Clone, Debug)]
pub struct TensorLayout {
    pub x: ChainComplex,
    pub y: ChainComplex,
    blocks: BTreeMap<i64, Vec<(i64, usize)>>,
}

impl TensorLayout {
    pub fn new(x: &ChainComplex, y: &ChainComplex) -> TensorLayout {
        let mut blocks: BTreeMap<i64, Vec<(i64, usize)>> = BTreeMap::new();
        if !x.is_zero() && !y.is_zero() {
            for n in x.lo() + y.lo()..=x.hi() + y.hi() {
                let mut off = 0;
                let mut v = vec![];
                for i in x.degrees() {
                    let (a, b) = (x.rank(i), y.rank(n - i));
                    if a * b > 0 {
                        v.push((i, off));
                        off += a * b;
                    }
                }
                blocks.insert(n, v);
            }
        }
        TensorLayout { x: x.clone(), y: y.clone(), blocks }
    }

    pub fn rank(&self, n: i64) -> usize {
        self.blocks.get(&n).and_then(|v| v.last()).map_or(0, |&(i, off)| off + self.x.rank(i) * self.y.rank(n - i))
    }

    /// Index of `x_a ⊗ y_b` with `|x_a| = i`, `|y_b| = j`.
    pub fn index(&self, i: i64, a: usize, j: i64, b: usize) -> usize {
        let off = self.blocks[&(i + j)].iter().find(|&&(k, _)| k == i).expect("tensor block").1;
        off + a * self.y.rank(j) + b
    }

    /// Inverse of [`index`](TensorLayout::index) in degree `n`.
    pub fn split(&self, n: i64, idx: usize) -> (i64, usize, i64, usize) {
        for &(i, off) in self.blocks[&n].iter().rev() {
            if idx >= off {
                let ry = self.y.rank(n - i);
                let k = idx - off;
                return (i, k / ry, n - i, k % ry);
            }
        }
        panic!("index {idx} out of range in degree {n}")
    }

    pub fn blocks(&self, n: i64) -> &[(i64, usize)] {
        self.blocks.get(&n).map_or(&[], |v| v.as_slice())
    }
}

/// `X ⊗ Y` with the Koszul differential.
pub fn tensor(x: &ChainComplex, y: &ChainComplex) -> ChainComplex {
    assert_eq!(x.ring, y.ring, "tensor: ring mismatch");
    tensor_with_layout(x, y).0
}

pub fn tensor_with_layout(x: &ChainComplex, y: &ChainComplex) -> (ChainComplex, TensorLayout) {
    let ring = x.ring;
    let lay = TensorLayout::new(x, y);
    let ranks: BTreeMap<i64, usize> = lay.blocks.keys().map(|&n| (n, lay.rank(n))).filter(|&(_, r)| r > 0).collect();
    let cx = ChainComplex::from_fn(ring, &ranks, |n| {
        let mut m = Matrix::zeros(ring, lay.rank(n - 1), lay.rank(n));
        for &(i, _) in lay.blocks(n) {
            let j = n - i;
            let dx = x.d_ref(i);
            let dy = y.d_ref(j);
            let sign = ring.sign(i.rem_euclid(2) == 1);
            for a in 0..x.rank(i) {
                for b in 0..y.rank(j) {
                    let col = lay.index(i, a, j, b);
                    if let Some(dx) = dx {
                        for a2 in 0..x.rank(i - 1) {
                            let c = dx.get(a2, a);
                            if !c.is_zero() {
                                m.add_at(lay.index(i - 1, a2, j, b), col, c);
                            }
                        }
                    }
                    if let Some(dy) = dy {
                        for b2 in 0..y.rank(j - 1) {
                            let c = dy.get(b2, b);
                            if !c.is_zero() {
                                m.add_at(lay.index(i, a, j - 1, b2), col, &ring.mul(&sign, c));
                            }
                        }
                    }
                }
            }
        }
        Some(m)
    });
    (cx, lay)
}

/// `f ⊗ g`; degree-zero maps carry no Koszul sign.
pub fn tensor_map(f: &ChainMap, g: &ChainMap) -> ChainMap {
    let ring = f.ring();
    let (src, ls) = tensor_with_layout(&f.src, &g.src);
    let (dst, ld) = tensor_with_layout(&f.dst, &g.dst);
    let mut map = BTreeMap::new();
    for n in src.degrees() {
        let mut m = Matrix::zeros(ring, dst.rank(n), src.rank(n));
        for &(i, _) in ls.blocks(n) {
            let j = n - i;
            let (fi, gj) = (f.f(i), g.f(j));
            for a in 0..f.src.rank(i) {
                for b in 0..g.src.rank(j) {
                    let col = ls.index(i, a, j, b);
                    for a2 in 0..f.dst.rank(i) {
                        let x = fi.get(a2, a);
                        if x.is_zero() {
                            continue;
                        }
                        for b2 in 0..g.dst.rank(j) {
                            let y = gj.get(b2, b);
                            if !y.is_zero() {
                                m.add_at(ld.index(i, a2, j, b2), col, &ring.mul(x, y));
                            }
                        }
                    }
                }
            }
        }
        map.insert(n, m);
    }
    ChainMap::from_parts(src, dst, map).unwrap()
}

/// Symmetry `X⊗Y → Y⊗X`, `x⊗y ↦ (-1)^{|x||y|} y⊗x`.
pub fn tensor_swap(x: &ChainComplex, y: &ChainComplex) -> ChainMap {
    let ring = x.ring;
    let (src, ls) = tensor_with_layout(x, y);
    let (dst, ld) = tensor_with_layout(y, x);
    let mut map = BTreeMap::new();
    for n in src.degrees() {
        let mut m = Matrix::zeros(ring, dst.rank(n), src.rank(n));
        for &(i, _) in ls.blocks(n) {
            let j = n - i;
            let s = ring.sign((i * j).rem_euclid(2) == 1);
            for a in 0..x.rank(i) {
                for b in 0..y.rank(j) {
                    m.set(ld.index(j, b, i, a), ls.index(i, a, j, b), s.clone());
                }
            }
        }
        map.insert(n, m);
    }
    ChainMap::from_parts(src, dst, map).unwrap()
}

/// Layout of `hom(X,Y)_n = ∏_k Hom(X_k, Y_{k+n})`: entry `(r, c)` of the
/// component at `k` sits at `offset(n, k) + r * rank X_k + c`.
#[derive(Clone, Debug)]
pub struct HomLayout {
    pub x: ChainComplex,
    pub y: ChainComplex,
    blocks: BTreeMap<i64, Vec<(i64, usize)>>,
}

impl HomLayout {
    pub fn new(x: &ChainComplex, y: &ChainComplex) -> HomLayout {
        let mut blocks = BTreeMap::new();
        if !x.is_zero() && !y.is_zero() {
            for n in y.lo() - x.hi()..=y.hi() - x.lo() {
                let mut off = 0;
                let mut v = vec![];
                for k in x.degrees() {
                    let s = x.rank(k) * y.rank(k + n);
                    if s > 0 {
                        v.push((k, off));
                        off += s;
                    }
                }
                blocks.insert(n, v);
            }
        }
        HomLayout { x: x.clone(), y: y.clone(), blocks }
    }

    pub fn rank(&self, n: i64) -> usize {
        self.blocks.get(&n).and_then(|v| v.last()).map_or(0, |&(k, off)| off + self.x.rank(k) * self.y.rank(k + n))
    }

    pub fn offset(&self, n: i64, k: i64) -> Option<usize> {
        self.blocks.get(&n)?.iter().find(|&&(kk, _)| kk == k).map(|&(_, o)| o)
    }

    /// Degree-`n` vector to its components.
    pub fn unpack(&self, n: i64, v: &[Scalar]) -> BTreeMap<i64, Matrix> {
        let ring = self.x.ring;
        let mut out = BTreeMap::new();
        for k in self.x.degrees() {
            let (r, c) = (self.y.rank(k + n), self.x.rank(k));
            let mut m = Matrix::zeros(ring, r, c);
            if let Some(off) = self.offset(n, k) {
                for i in 0..r {
                    for j in 0..c {
                        m.set(i, j, v[off + i * c + j].clone());
                    }
                }
            }
            out.insert(k, m);
        }
        out
    }

    pub fn pack(&self, n: i64, comps: &BTreeMap<i64, Matrix>) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); self.rank(n)];
        for (&k, m) in comps {
            if let Some(off) = self.offset(n, k) {
                let c = self.x.rank(k);
                for i in 0..m.rows() {
                    for j in 0..m.cols() {
                        v[off + i * c + j] = m.get(i, j).clone();
                    }
                }
            }
        }
        v
    }
}

/// Internal hom with `∂φ = dφ - (-1)^n φd`.
pub fn hom_complex(x: &ChainComplex, y: &ChainComplex) -> Result<ChainComplex, ChainError> {
    Ok(hom_complex_with_layout(x, y)?.0)
}

pub fn hom_complex_with_layout(x: &ChainComplex, y: &ChainComplex) -> Result<(ChainComplex, HomLayout), ChainError> {
    if x.ring != y.ring {
        return Err(ChainError::RingMismatch(x.ring, y.ring));
    }
    let ring = x.ring;
    let lay = HomLayout::new(x, y);
    let ranks: BTreeMap<i64, usize> = lay.blocks.keys().map(|&n| (n, lay.rank(n))).filter(|&(_, r)| r > 0).collect();
    let cx = ChainComplex::from_fn(ring, &ranks, |n| {
        let mut m = Matrix::zeros(ring, lay.rank(n - 1), lay.rank(n));
        let sign = ring.sign(n.rem_euclid(2) == 0);
        for &(k, off) in &lay.blocks[&n] {
            let (ry, cx_) = (y.rank(k + n), x.rank(k));
            // d_Y φ_k lands in the component at k of degree n-1
            if let (Some(dy), Some(o2)) = (y.d_ref(k + n), lay.offset(n - 1, k)) {
                for r in 0..ry {
                    for c in 0..cx_ {
                        let col = off + r * cx_ + c;
                        for r2 in 0..y.rank(k + n - 1) {
                            let e = dy.get(r2, r);
                            if !e.is_zero() {
                                m.add_at(o2 + r2 * cx_ + c, col, e);
                            }
                        }
                    }
                }
            }
            // -(-1)^n φ_k d_X(k+1) lands in the component at k+1
            if let (Some(dx), Some(o2)) = (x.d_ref(k + 1), lay.offset(n - 1, k + 1)) {
                let c2n = x.rank(k + 1);
                for r in 0..ry {
                    for c in 0..cx_ {
                        let col = off + r * cx_ + c;
                        for c2 in 0..c2n {
                            let e = dx.get(c, c2);
                            if !e.is_zero() {
                                m.add_at(o2 + r * c2n + c2, col, &ring.mul(&sign, e));
                            }
                        }
                    }
                }
            }
        }
        Some(m)
    });
    Ok((cx, lay))
}

/// Basis of the module of chain maps `X → Y` (degree-zero cycles of hom).
pub fn chain_map_basis(x: &ChainComplex, y: &ChainComplex) -> Vec<ChainMap> {
    let (h, lay) = hom_complex_with_layout(x, y).expect("same ring");
    let k = kernel_basis(&h.d(0));
    (0..k.cols())
        .map(|j| {
            let comps = lay.unpack(0, &k.col(j));
            ChainMap::from_parts(x.clone(), y.clone(), comps).unwrap()
        })
        .collect()
}

/// `Σᵏ X`: degrees shifted up by `k`, differential times `(-1)^k`.
pub fn suspension(x: &ChainComplex, k: i64) -> ChainComplex {
    let s = x.ring.sign(k.rem_euclid(2) == 1);
    let diffs = x.diffs.iter().map(|m| m.scale(&s)).collect();
    ChainComplex { ring: x.ring, lo: if x.is_zero() { 0 } else { x.lo + k }, ranks: x.ranks.clone(), diffs }
}

/// Mapping cone, `cone(f)_n = Y_n ⊕ X_{n-1}`, `d(y, x) = (dy + f x, -dx)`.
pub fn cone(f: &ChainMap) -> ChainComplex {
    let (x, y) = (&f.src, &f.dst);
    let ring = f.ring();
    let mut ranks = BTreeMap::new();
    let lo = y.lo().min(x.lo() + 1);
    let hi = y.hi().max(x.hi() + 1);
    for n in lo..=hi {
        let r = y.rank(n) + x.rank(n - 1);
        if r > 0 {
            ranks.insert(n, r);
        }
    }
    ChainComplex::from_fn(ring, &ranks, |n| {
        let (yn, yn1, xn1, xn2) = (y.rank(n), y.rank(n - 1), x.rank(n - 1), x.rank(n - 2));
        let mut m = Matrix::zeros(ring, yn1 + xn2, yn + xn1);
        m.set_block(0, 0, &y.d(n));
        m.set_block(0, yn, &f.f(n - 1));
        m.set_block(yn1, yn, &x.d(n - 1).neg());
        Some(m)
    })
}

/// `X ⊕ Y` with its inclusions and projections.
pub struct DirectSum {
    pub sum: ChainComplex,
    pub in1: ChainMap,
    pub in2: ChainMap,
    pub pr1: ChainMap,
    pub pr2: ChainMap,
}

pub fn direct_sum(x: &ChainComplex, y: &ChainComplex) -> DirectSum {
    let ring = x.ring;
    let mut ranks = BTreeMap::new();
    for n in x.lo().min(y.lo())..=x.hi().max(y.hi()) {
        let r = x.rank(n) + y.rank(n);
        if r > 0 {
            ranks.insert(n, r);
        }
    }
    let sum = ChainComplex::from_fn(ring, &ranks, |n| Some(x.d(n).block_diag(&y.d(n))));
    let mut in1 = BTreeMap::new();
    let mut in2 = BTreeMap::new();
    let mut pr1 = BTreeMap::new();
    let mut pr2 = BTreeMap::new();
    for &n in ranks.keys() {
        let (a, b) = (x.rank(n), y.rank(n));
        let mut i1 = Matrix::zeros(ring, a + b, a);
        i1.set_block(0, 0, &Matrix::identity(ring, a));
        let mut i2 = Matrix::zeros(ring, a + b, b);
        i2.set_block(a, 0, &Matrix::identity(ring, b));
        pr1.insert(n, i1.transpose());
        pr2.insert(n, i2.transpose());
        in1.insert(n, i1);
        in2.insert(n, i2);
    }
    DirectSum {
        in1: ChainMap::from_parts(x.clone(), sum.clone(), in1).unwrap(),
        in2: ChainMap::from_parts(y.clone(), sum.clone(), in2).unwrap(),
        pr1: ChainMap::from_parts(sum.clone(), x.clone(), pr1).unwrap(),
        pr2: ChainMap::from_parts(sum.clone(), y.clone(), pr2).unwrap(),
        sum,
    }
}

/// `f ⊕ g`.
pub fn direct_sum_map(f: &ChainMap, g: &ChainMap) -> ChainMap {
    let s = direct_sum(&f.src, &g.src).sum;
    let t = direct_sum(&f.dst, &g.dst).sum;
    let m = s.degrees().map(|n| (n, f.f(n).block_diag(&g.f(n)))).collect();
    ChainMap::from_parts(s, t, m).unwrap()
}

/// `X⊗I` with `i: X⊕X → X⊗I`, `q: X⊗I → X`, and the end inclusions `i₀, i₁`.
pub struct Cylinder {
    pub cyl: ChainComplex,
    pub i: ChainMap,
    pub q: ChainMap,
    pub i0: ChainMap,
    pub i1: ChainMap,
}

pub fn cylinder(x: &ChainComplex) -> Cylinder {
    let ring = x.ring;
    let int = interval(ring);
    let (cyl, lay) = tensor_with_layout(x, &int);
    let ds = direct_sum(x, x);
    let mut i0 = BTreeMap::new();
    let mut i1 = BTreeMap::new();
    let mut q = BTreeMap::new();
    for n in x.degrees() {
        let r = x.rank(n);
        let mut a = Matrix::zeros(ring, cyl.rank(n), r);
        let mut b = Matrix::zeros(ring, cyl.rank(n), r);
        for k in 0..r {
            a.set(lay.index(n, k, 0, 0), k, Scalar::one());
            b.set(lay.index(n, k, 0, 1), k, Scalar::one());
        }
        q.insert(n, a.add(&b).transpose());
        i0.insert(n, a);
        i1.insert(n, b);
    }
    let i0 = ChainMap::from_parts(x.clone(), cyl.clone(), i0).unwrap();
    let i1 = ChainMap::from_parts(x.clone(), cyl.clone(), i1).unwrap();
    let q = ChainMap::from_parts(cyl.clone(), x.clone(), q).unwrap();
    let i = i0.compose(&ds.pr1).add(&i1.compose(&ds.pr2));
    Cylinder { cyl, i, q, i0, i1 }
}

/// Solves for a homotopy `f ≃ g` as one linear system.
pub fn find_homotopy(f: &ChainMap, g: &ChainMap) -> Option<ChainHomotopy> {
    let (s, t) = (&f.src, &f.dst);
    let ring = f.ring();
    let (h, lay) = hom_complex_with_layout(s, t).ok()?;
    let diff = f.sub(g);
    let target: BTreeMap<i64, Matrix> = s.degrees().map(|n| (n, diff.f(n))).collect();
    let b = lay.pack(0, &target);
    if h.rank(1) == 0 {
        return if b.iter().all(Zero::is_zero) {
            Some(ChainHomotopy { from_map: f.clone(), to_map: g.clone(), h: BTreeMap::new() })
        } else {
            None
        };
    }
    // ∂h = d h - (-1)^1 h d = d h + h d
    let sol = solve_linear(&h.d(1), &Matrix::column(ring, b)).ok()??;
    let comps = lay.unpack(1, &sol.col(0));
    Some(ChainHomotopy { from_map: f.clone(), to_map: g.clone(), h: comps })
}

/// Homotopy class data of a cokernel complex: quotient `Q`, projection
/// `B → Q` and a degreewise section. Fails when a cokernel is not free.
pub struct Quotient {
    pub q: ChainComplex,
    pub proj: ChainMap,
    pub section: BTreeMap<i64, Matrix>,
}

/// Cokernel of a chain map, presented on a free basis.
pub fn cokernel_complex(f: &ChainMap) -> Result<Quotient, ChainError> {
    let ring = f.ring();
    let b = &f.dst;
    let mut proj = BTreeMap::new();
    let mut section = BTreeMap::new();
    let mut ranks = BTreeMap::new();
    for n in b.degrees() {
        let img = f.f(n);
        let (p, s) = complement_projection(&img)?;
        if p.rows() > 0 {
            ranks.insert(n, p.rows());
        }
        proj.insert(n, p);
        section.insert(n, s);
    }
    let q = ChainComplex::from_fn(ring, &ranks, |n| {
        let p = proj.get(&(n - 1))?;
        let s = section.get(&n)?;
        Some(p.mul(&b.d(n)).mul(s))
    });
    let proj = ChainMap::from_parts(b.clone(), q.clone(), proj).unwrap();
    proj.check()?;
    Ok(Quotient { q, proj, section })
}

/// For a map into `R^m`, a projection `P` with kernel the image and a
/// section `S` with `P S = 1`.
fn complement_projection(img: &Matrix) -> Result<(Matrix, Matrix), ChainError> {
    let ring = img.ring();
    let m = img.rows();
    if ring == Ring::Z {
        let (free, tors) = cokernel_data(img);
        if !tors.is_empty() {
            return Err(ChainError::NotFree(format!("torsion {tors:?}")));
        }
        let s = smith_normal_form(img);
        // rows rank.. of U kill the image; columns rank.. of U^{-1} split them
        let idx: Vec<usize> = (s.rank..m).collect();
        let p = s.u.select_rows(&idx);
        let sec = s.u_inv.select_cols(&idx);
        debug_assert_eq!(p.rows(), free);
        return Ok((p, sec));
    }
    let comp = complement_indices(img);
    // basis change: columns [image basis | complement unit vectors]
    let ib = crate::exactlin::image_basis(img);
    let mut full = ib.clone();
    let mut sec = Matrix::zeros(ring, m, comp.len());
    for (j, &c) in comp.iter().enumerate() {
        sec.set(c, j, Scalar::one());
    }
    full = full.hstack(&sec);
    let inv = full.inverse().expect("complement basis");
    let idx: Vec<usize> = (ib.cols()..m).collect();
    Ok((inv.select_rows(&idx), sec))
}

/// Kernel of a chain map, presented on a free basis: subcomplex `K` with
/// inclusion `K → src` and a degreewise retraction.
pub struct Kernel {
    pub k: ChainComplex,
    pub incl: ChainMap,
    pub retraction: BTreeMap<i64, Matrix>,
}

pub fn kernel_complex(f: &ChainMap) -> Result<Kernel, ChainError> {
    let ring = f.ring();
    let a = &f.src;
    let mut incl = BTreeMap::new();
    let mut retr = BTreeMap::new();
    let mut ranks = BTreeMap::new();
    for n in a.degrees() {
        let kb = kernel_basis(&f.f(n));
        if ring == Ring::Z && !is_split_mono(&kb) {
            return Err(ChainError::NotFree("kernel not a summand".into()));
        }
        let r = left_inverse(&kb).ok_or_else(|| ChainError::NotFree("kernel not a summand".into()))?;
        if kb.cols() > 0 {
            ranks.insert(n, kb.cols());
        }
        incl.insert(n, kb);
        retr.insert(n, r);
    }
    let k = ChainComplex::from_fn(ring, &ranks, |n| {
        let r = retr.get(&(n - 1))?;
        let i = incl.get(&n)?;
        Some(r.mul(&a.d(n)).mul(i))
    });
    let incl = ChainMap::from_parts(k.clone(), a.clone(), incl).unwrap();
    incl.check()?;
    Ok(Kernel { k, incl, retraction: retr })
}

/// A left inverse of a split monomorphism.
pub fn left_inverse(m: &Matrix) -> Option<Matrix> {
    if m.cols() == 0 {
        return Some(Matrix::zeros(m.ring(), 0, m.rows()));
    }
    let t = solve_linear(&m.transpose(), &Matrix::identity(m.ring(), m.cols())).ok()??;
    Some(t.transpose())
}

/// A right inverse of a split epimorphism.
pub fn right_inverse(m: &Matrix) -> Option<Matrix> {
    if m.rows() == 0 {
        return Some(Matrix::zeros(m.ring(), m.cols(), 0));
    }
    solve_linear(m, &Matrix::identity(m.ring(), m.rows())).ok()?
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_complexes() {
        let f2 = Ring::fp(2);
        let d3 = disk(3, f2);
        assert!(is_acyclic(&d3));
        let s2 = sphere(2, Ring::fp(5));
        assert_eq!(betti(&s2), BTreeMap::from([(2, 1)]));
        let i = interval(Ring::Q);
        assert_eq!(homology(&i, 0).free_rank, 1);
        assert_eq!(homology(&i, 1).free_rank, 0);
        assert_eq!(homology(&ChainComplex::zero(Ring::Z), 0), Homology::default());
    }

    #[test]
    fn cone_of_two_has_torsion() {
        let s = sphere(1, Ring::Z);
        let two = ChainMap::identity(&s).scale(&Ring::Z.from_i64(2));
        let c = cone(&two);
        assert_eq!(homology(&c, 1).torsion, vec![BigInt::from(2)]);
        assert_eq!(homology(&c, 1).free_rank, 0);
        assert!(homology(&c, 2).is_zero());
    }

    #[test]
    fn tensor_small_cases() {
        let r = Ring::fp(3);
        let s = tensor(&sphere(1, r), &sphere(1, r));
        assert_eq!(s, sphere(2, r));
        let d = disk(2, r);
        assert_eq!(tensor(&d, &ChainComplex::unit(r)), d);
    }

    #[test]
    fn hom_shapes() {
        let r = Ring::Q;
        let h = hom_complex(&interval(r), &sphere(0, r)).unwrap();
        assert_eq!(h.ranks(), BTreeMap::from([(-1, 1), (0, 2)]));
        let y = disk(1, r);
        assert_eq!(hom_complex(&ChainComplex::unit(r), &y).unwrap(), y);
    }

    #[test]
    fn suspension_cases() {
        let r = Ring::fp(5);
        assert_eq!(suspension(&sphere(3, r), 1), sphere(4, r));
        let d = disk(2, r);
        assert_eq!(suspension(&suspension(&d, 1), -1), d);
        let z = ChainMap::zero(&ChainComplex::zero(r), &d);
        assert_eq!(cone(&z), d);
    }

    #[test]
    fn cylinder_identities() {
        let r = Ring::Z;
        let x = disk(2, r);
        let c = cylinder(&x);
        assert!(c.i.is_chain_map() && c.q.is_chain_map());
        assert!(c.q.compose(&c.i0).is_identity());
        assert!(c.q.compose(&c.i1).is_identity());
        let h = find_homotopy(&c.i0.compose(&c.q), &ChainMap::identity(&c.cyl)).unwrap();
        assert!(h.check());
        let zc = cylinder(&ChainComplex::zero(r));
        assert!(zc.cyl.is_zero());
    }

    #[test]
    fn json_round_trip() {
        let x = cone(&ChainMap::identity(&interval(Ring::Q)).scale(&Ring::Q.from_i64(3)));
        let v = x.to_json();
        assert_eq!(ChainComplex::from_json(&v).unwrap(), x);
    }
}
