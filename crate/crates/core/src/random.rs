//! Seeded generators for complexes, maps and equivalences used by the
//! property suites.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chain::{chain_map_basis, direct_sum, disk, ChainComplex, ChainMap};
use crate::exactlin::{kernel_basis, Matrix, Ring, Scalar};

pub type CaseRng = ChaCha8Rng;

/// Generator for case `idx` of a suite seeded with `seed`; streams are
/// independent so adding cases never perturbs earlier ones.
pub fn case_rng(seed: u64, idx: u64) -> CaseRng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(idx);
    r
}

/// Size bounds for generated complexes.
#[derive(Clone, Copy, Debug)]
pub struct Bounds {
    pub max_rank: usize,
    pub deg_lo: i64,
    pub deg_hi: i64,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { max_rank: 3, deg_lo: -1, deg_hi: 2 }
    }
}

pub fn scalar(ring: Ring, rng: &mut CaseRng) -> Scalar {
    match ring {
        Ring::Fp(p) => ring.from_i64(rng.gen_range(0..p as i64)),
        _ => ring.from_i64(rng.gen_range(-2..=2)),
    }
}

/// Random entries, each nonzero with probability `density`.
pub fn matrix(ring: Ring, rows: usize, cols: usize, density: f64, rng: &mut CaseRng) -> Matrix {
    let mut m = Matrix::zeros(ring, rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            if rng.gen_bool(density) {
                m.set(i, j, scalar(ring, rng));
            }
        }
    }
    m
}

/// Invertible matrix built from elementary operations.
pub fn invertible(ring: Ring, n: usize, rng: &mut CaseRng) -> Matrix {
    let mut m = Matrix::identity(ring, n);
    if n == 0 {
        return m;
    }
    for _ in 0..2 * n {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if i == j {
            continue;
        }
        let c = scalar(ring, rng);
        for k in 0..n {
            let v = ring.mul(&c, m.get(j, k));
            m.add_at(i, k, &v);
        }
    }
    if n > 1 && rng.gen_bool(0.5) {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        let a = m.select_rows(&[i]);
        let b = m.select_rows(&[j]);
        m.set_block(i, 0, &b);
        m.set_block(j, 0, &a);
    }
    m
}

/// Complex with random ranks in `[0, max_rank]`; each differential is a
/// random combination of kernel vectors of the one below.
pub fn complex(ring: Ring, b: Bounds, rng: &mut CaseRng) -> ChainComplex {
    let ranks: BTreeMap<i64, usize> = (b.deg_lo..=b.deg_hi).map(|n| (n, rng.gen_range(0..=b.max_rank))).collect();
    let mut diffs: BTreeMap<i64, Matrix> = BTreeMap::new();
    for n in b.deg_lo + 1..=b.deg_hi {
        let below = diffs.get(&(n - 1)).cloned().unwrap_or_else(|| Matrix::zeros(ring, 0, ranks[&(n - 1)]));
        let k = kernel_basis(&below);
        let coeffs = matrix(ring, k.cols(), ranks[&n], 0.6, rng);
        diffs.insert(n, k.mul(&coeffs));
    }
    let nz: BTreeMap<i64, usize> = ranks.into_iter().filter(|&(_, r)| r > 0).collect();
    ChainComplex::from_fn(ring, &nz, |n| diffs.get(&n).cloned())
}

/// Random chain map: a random combination of a basis of all chain maps.
pub fn chain_map(x: &ChainComplex, y: &ChainComplex, rng: &mut CaseRng) -> ChainMap {
    let mut f = ChainMap::zero(x, y);
    for g in chain_map_basis(x, y) {
        let c = scalar(x.ring(), rng);
        f = f.add(&g.scale(&c));
    }
    f
}

/// Sum of disks with at most `max_rank` summands, conjugated by a random
/// basis change.
pub fn contractible(ring: Ring, b: Bounds, rng: &mut CaseRng) -> ChainComplex {
    let mut d = ChainComplex::zero(ring);
    for _ in 0..rng.gen_range(0..=b.max_rank) {
        let n = rng.gen_range(b.deg_lo + 1..=b.deg_hi.max(b.deg_lo + 1));
        d = direct_sum(&d, &disk(n, ring)).sum;
    }
    rebase(&d, rng).dst
}

/// Isomorphism `x → x'` where `x'` is `x` in a random basis.
pub fn rebase(x: &ChainComplex, rng: &mut CaseRng) -> ChainMap {
    let ring = x.ring();
    let p: BTreeMap<i64, Matrix> = x.degrees().map(|n| (n, invertible(ring, x.rank(n), rng))).collect();
    let y = ChainComplex::from_fn(ring, &x.ranks(), |n| {
        let inv = p[&n].inverse().expect("invertible");
        Some(p[&(n - 1)].mul(&x.d(n)).mul(&inv))
    });
    ChainMap::new(x.clone(), y, p).expect("basis change is a chain map")
}

/// Homotopy equivalence out of `x`: `x ↦ (x, k x)` into `x ⊕ D`, followed
/// by a random basis change, with `D` contractible.
pub fn equivalence_from(x: &ChainComplex, b: Bounds, rng: &mut CaseRng) -> ChainMap {
    let d = contractible(x.ring(), b, rng);
    let s = direct_sum(x, &d);
    let k = chain_map(x, &d, rng);
    let incl = s.in1.add(&s.in2.compose(&k));
    rebase(&s.sum, rng).compose(&incl)
}

/// Homotopy equivalence into `x`: `(x, e) ↦ x + ψ e` out of `x ⊕ D`,
/// preceded by a random basis change.
pub fn equivalence_to(x: &ChainComplex, b: Bounds, rng: &mut CaseRng) -> ChainMap {
    let d = contractible(x.ring(), b, rng);
    let s = direct_sum(x, &d);
    let psi = chain_map(&d, x, rng);
    let proj = s.pr1.add(&psi.compose(&s.pr2));
    let r = rebase(&s.sum, rng);
    let back = inverse_iso(&r);
    proj.compose(&back)
}

/// Inverse of a degreewise-invertible chain map.
pub fn inverse_iso(f: &ChainMap) -> ChainMap {
    let m = f.dst.degrees().map(|n| (n, f.f(n).inverse().expect("isomorphism"))).collect();
    ChainMap::from_parts(f.dst.clone(), f.src.clone(), m).unwrap()
}

/// Equivalence out of `x` that is neither split mono nor split epi in
/// general: `x → x⊕D₁ → x⊕D₃`, `(x, e) ↦ (x + ψe, k'x + me)` after `x ↦ (x, kx)`.
pub fn equivalence(x: &ChainComplex, b: Bounds, rng: &mut CaseRng) -> ChainMap {
    let ring = x.ring();
    let d1 = contractible(ring, b, rng);
    let d3 = contractible(ring, b, rng);
    let s1 = direct_sum(x, &d1);
    let s3 = direct_sum(x, &d3);
    let k = chain_map(x, &d1, rng);
    let first = s1.in1.add(&s1.in2.compose(&k));
    let psi = chain_map(&d1, x, rng);
    let k2 = chain_map(x, &d3, rng);
    let m = chain_map(&d1, &d3, rng);
    let top = s1.pr1.add(&psi.compose(&s1.pr2));
    let bottom = k2.compose(&s1.pr1).add(&m.compose(&s1.pr2));
    let second = s3.in1.compose(&top).add(&s3.in2.compose(&bottom));
    rebase(&s3.sum, rng).compose(&second.compose(&first))
}
