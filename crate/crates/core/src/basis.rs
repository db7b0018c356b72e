//! Graded bases, sparse elements and word spaces shared by the algebra and
//! coalgebra modules.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;

use crate::chain::{ChainComplex, ChainMap};
use crate::exactlin::{Matrix, Ring, Scalar};

/// Sparse element: basis index to nonzero coefficient.
pub type Elem = BTreeMap<usize, Scalar>;

pub fn add_term(ring: Ring, e: &mut Elem, i: usize, c: &Scalar) {
    if c.is_zero() {
        return;
    }
    let v = match e.get(&i) {
        Some(old) => ring.add(old, c),
        None => ring.norm(c.clone()),
    };
    if v.is_zero() {
        e.remove(&i);
    } else {
        e.insert(i, v);
    }
}

pub fn add_into(ring: Ring, e: &mut Elem, other: &Elem, c: &Scalar) {
    for (&i, v) in other {
        add_term(ring, e, i, &ring.mul(c, v));
    }
}

pub fn scale(ring: Ring, e: &Elem, c: &Scalar) -> Elem {
    let mut out = Elem::new();
    add_into(ring, &mut out, e, c);
    out
}

pub fn single(ring: Ring, i: usize) -> Elem {
    Elem::from([(i, ring.one())])
}

/// `(-1)^k` as a ring element.
pub fn sign(ring: Ring, k: i64) -> Scalar {
    ring.sign(k.rem_euclid(2) == 1)
}

/// Element of a tensor square: pairs of basis indices.
pub type Elem2 = BTreeMap<(usize, usize), Scalar>;

pub fn add_term2(ring: Ring, e: &mut Elem2, k: (usize, usize), c: &Scalar) {
    if c.is_zero() {
        return;
    }
    let v = match e.get(&k) {
        Some(old) => ring.add(old, c),
        None => ring.norm(c.clone()),
    };
    if v.is_zero() {
        e.remove(&k);
    } else {
        e.insert(k, v);
    }
}

/// Element of a tensor cube.
pub type Elem3 = BTreeMap<(usize, usize, usize), Scalar>;

pub fn add_term3(ring: Ring, e: &mut Elem3, k: (usize, usize, usize), c: &Scalar) {
    if c.is_zero() {
        return;
    }
    let v = match e.get(&k) {
        Some(old) => ring.add(old, c),
        None => ring.norm(c.clone()),
    };
    if v.is_zero() {
        e.remove(&k);
    } else {
        e.insert(k, v);
    }
}

/// A finite basis with a degree per element and its positions inside the
/// degreewise blocks of a chain complex.
#[derive(Clone, Debug)]
pub struct GradedBasis {
    pub degs: Vec<i64>,
    local: Vec<usize>,
    by_deg: BTreeMap<i64, Vec<usize>>,
}

impl GradedBasis {
    pub fn new(degs: Vec<i64>) -> GradedBasis {
        let mut by_deg: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        let mut local = vec![0; degs.len()];
        for (i, &d) in degs.iter().enumerate() {
            let v = by_deg.entry(d).or_default();
            local[i] = v.len();
            v.push(i);
        }
        GradedBasis { degs, local, by_deg }
    }

    pub fn len(&self) -> usize {
        self.degs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degs.is_empty()
    }

    pub fn local(&self, i: usize) -> usize {
        self.local[i]
    }

    pub fn in_degree(&self, n: i64) -> &[usize] {
        self.by_deg.get(&n).map_or(&[], |v| v.as_slice())
    }

    pub fn ranks(&self) -> BTreeMap<i64, usize> {
        self.by_deg.iter().map(|(&n, v)| (n, v.len())).collect()
    }

    /// Complex with differential `d[i]` on basis element `i`; terms outside
    /// the degree below are ignored.
    pub fn complex(&self, ring: Ring, d: &[Elem]) -> ChainComplex {
        ChainComplex::from_fn(ring, &self.ranks(), |n| Some(self.block(ring, self, d, n, n - 1)))
    }

    /// Matrix from degree `n` of `self` to degree `m` of `dst`, column `j`
    /// being the image of the `j`-th element of degree `n`.
    pub fn block(&self, ring: Ring, dst: &GradedBasis, images: &[Elem], n: i64, m: i64) -> Matrix {
        let src = self.in_degree(n);
        let tgt = dst.in_degree(m);
        let mut mat = Matrix::zeros(ring, tgt.len(), src.len());
        for (j, &i) in src.iter().enumerate() {
            for (&k, c) in &images[i] {
                if dst.degs[k] == m {
                    mat.set(dst.local[k], j, c.clone());
                }
            }
        }
        mat
    }

    /// Degree-zero chain map given on basis elements.
    pub fn chain_map(&self, ring: Ring, src: &ChainComplex, dst_basis: &GradedBasis, dst: &ChainComplex, images: &[Elem]) -> ChainMap {
        let f = self.by_deg.keys().map(|&n| (n, self.block(ring, dst_basis, images, n, n))).collect();
        ChainMap::from_parts(src.clone(), dst.clone(), f).expect("graded map shapes")
    }

    /// Coordinates of an element in the degree-`n` block.
    pub fn vector(&self, e: &Elem, n: i64) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); self.in_degree(n).len()];
        for (&i, c) in e {
            if self.degs[i] == n {
                v[self.local[i]] = c.clone();
            }
        }
        v
    }
}

/// Pairs `(i, j)` of basis indices in the order used by
/// [`crate::chain::tensor`]: by total degree, then by degree of the left
/// factor, then by the local positions.
pub fn tensor_order(x: &GradedBasis, y: &GradedBasis) -> Vec<(usize, usize)> {
    let mut out = vec![];
    let (Some(&xl), Some(&xh)) = (x.by_deg.keys().next(), x.by_deg.keys().next_back()) else { return out };
    let (Some(&yl), Some(&yh)) = (y.by_deg.keys().next(), y.by_deg.keys().next_back()) else { return out };
    for n in xl + yl..=xh + yh {
        for (&i, xs) in &x.by_deg {
            for &a in xs {
                for &b in y.in_degree(n - i) {
                    out.push((a, b));
                }
            }
        }
    }
    out
}

/// Positions of the pairs of [`tensor_order`].
pub fn tensor_index(order: &[(usize, usize)]) -> HashMap<(usize, usize), usize> {
    order.iter().enumerate().map(|(k, &p)| (p, k)).collect()
}

/// Graded letter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Letter {
    pub name: String,
    pub degree: i64,
}

pub type Word = Vec<usize>;

/// Words in a finite alphabet: length at most `max_weight`, degree in
/// `[deg_lo, deg_hi]`, avoiding the given forbidden subwords. Ordered by
/// degree, then length, then lexicographically.
#[derive(Clone, Debug)]
pub struct WordSpace {
    pub letters: Vec<Letter>,
    pub relations: Vec<Word>,
    pub max_weight: usize,
    pub deg_lo: i64,
    pub deg_hi: i64,
    pub words: Vec<Word>,
    index: HashMap<Word, usize>,
    pub basis: GradedBasis,
}

impl WordSpace {
    pub fn new(letters: Vec<Letter>, relations: Vec<Word>, max_weight: usize, deg_lo: i64, deg_hi: i64) -> WordSpace {
        let min_deg = letters.iter().map(|l| l.degree).min().unwrap_or(0).min(0);
        let mut out = vec![];
        let mut frontier: Vec<(Word, i64)> = vec![(vec![], 0)];
        for len in 0..=max_weight {
            let mut next = vec![];
            for (w, d) in frontier {
                if d >= deg_lo && d <= deg_hi {
                    out.push((d, w.clone()));
                }
                if len == max_weight {
                    continue;
                }
                for (k, l) in letters.iter().enumerate() {
                    let nd = d + l.degree;
                    // remaining letters can lower the degree by at most this much
                    if nd + (max_weight - len - 1) as i64 * min_deg > deg_hi {
                        continue;
                    }
                    let mut w2 = w.clone();
                    w2.push(k);
                    if relations.iter().any(|r| w2.ends_with(r)) {
                        continue;
                    }
                    next.push((w2, nd));
                }
            }
            frontier = next;
        }
        out.sort_by(|a, b| (a.0, a.1.len(), &a.1).cmp(&(b.0, b.1.len(), &b.1)));
        let degs = out.iter().map(|p| p.0).collect();
        let words: Vec<Word> = out.into_iter().map(|p| p.1).collect();
        let index = words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        WordSpace { letters, relations, max_weight, deg_lo, deg_hi, words, index, basis: GradedBasis::new(degs) }
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn index(&self, w: &[usize]) -> Option<usize> {
        self.index.get(w).copied()
    }

    pub fn degree(&self, w: &[usize]) -> i64 {
        w.iter().map(|&k| self.letters[k].degree).sum()
    }

    pub fn contains_relation(&self, w: &[usize]) -> bool {
        self.relations.iter().any(|r| !r.is_empty() && w.windows(r.len()).any(|s| s == r.as_slice()))
    }

    /// Would `w` lie in the space if the bounds were lifted?
    pub fn in_bounds(&self, w: &[usize]) -> bool {
        let d = self.degree(w);
        w.len() <= self.max_weight && d >= self.deg_lo && d <= self.deg_hi
    }

    pub fn name(&self, w: &[usize]) -> String {
        if w.is_empty() {
            return "1".into();
        }
        w.iter().map(|&k| self.letters[k].name.as_str()).collect::<Vec<_>>().join("|")
    }

    /// Sum of degrees of the letters before position `i`.
    pub fn prefix_degree(&self, w: &[usize], i: usize) -> i64 {
        self.degree(&w[..i])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word_counts() {
        let x = Letter { name: "x".into(), degree: 1 };
        let y = Letter { name: "y".into(), degree: 1 };
        let ws = WordSpace::new(vec![x.clone(), y], vec![], 3, 0, 10);
        assert_eq!(ws.len(), 1 + 2 + 4 + 8);
        let ws = WordSpace::new(vec![x], vec![vec![0, 0]], 5, 0, 10);
        assert_eq!(ws.len(), 2);
        assert_eq!(ws.basis.ranks(), BTreeMap::from([(0, 1), (1, 1)]));
    }
}
