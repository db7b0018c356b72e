//! The Hurewicz weak factorization systems on chain complexes: class
//! predicates, the mapping cylinder and cocylinder factorizations, a global
//! lifting solver and harnesses for 2-of-6 and the retract argument.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use crate::chain::{cone, homology, is_acyclic, ChainComplex, ChainMap};
use crate::exactlin::{is_split_epi, is_split_mono, kernel_basis, solve_linear, Matrix, Ring, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ClassTag {
    Cof,
    AcyclicCof,
    Fib,
    AcyclicFib,
}

/// `right ∘ left` factors a map through `mid`.
#[derive(Clone, Debug)]
pub struct Factorization {
    pub left: ChainMap,
    pub mid: ChainComplex,
    pub right: ChainMap,
    pub left_class: ClassTag,
    pub right_class: ClassTag,
}

impl Factorization {
    pub fn composite(&self) -> ChainMap {
        self.right.compose(&self.left)
    }

    /// Composite equals `f` and both declared tags pass the predicates.
    pub fn verify(&self, f: &ChainMap) -> bool {
        self.left.is_chain_map()
            && self.right.is_chain_map()
            && self.composite() == *f
            && has_class(&self.left, self.left_class)
            && has_class(&self.right, self.right_class)
    }
}

pub fn is_cofibration(f: &ChainMap) -> bool {
    f.src.degrees().all(|n| is_split_mono(&f.f(n)))
}

pub fn is_fibration(f: &ChainMap) -> bool {
    f.dst.degrees().all(|n| is_split_epi(&f.f(n)))
}

/// Cone acyclicity; over a PID a bounded acyclic free complex is
/// contractible, so this detects chain homotopy equivalences.
pub fn is_homotopy_equivalence(f: &ChainMap) -> bool {
    is_acyclic(&cone(f))
}

/// Induced map on homology is an isomorphism, by rank arithmetic on cycles
/// and boundaries. Field only.
pub fn is_quasi_iso(f: &ChainMap) -> bool {
    let ring = f.ring();
    assert!(ring.is_field());
    let (x, y) = (&f.src, &f.dst);
    let lo = x.lo().min(y.lo());
    let hi = x.hi().max(y.hi());
    (lo..=hi).all(|n| {
        let hx = homology(x, n).free_rank;
        if hx != homology(y, n).free_rank {
            return false;
        }
        let z = kernel_basis(&x.d(n));
        let by = y.d(n + 1);
        let fz = f.f(n).mul(&z);
        by.hstack(&fz).rank() - by.rank() == hx
    })
}

pub fn has_class(f: &ChainMap, tag: ClassTag) -> bool {
    match tag {
        ClassTag::Cof => is_cofibration(f),
        ClassTag::Fib => is_fibration(f),
        ClassTag::AcyclicCof => is_cofibration(f) && is_homotopy_equivalence(f),
        ClassTag::AcyclicFib => is_fibration(f) && is_homotopy_equivalence(f),
    }
}

fn sgn(ring: Ring, n: i64) -> Scalar {
    ring.sign(n.rem_euclid(2) == 1)
}

/// Mapping cylinder: `Mf_n = X_n ⊕ X_{n-1} ⊕ Y_n`, with
/// `d(0, x', 0) = ((-1)^{n-1} x', dx', -(-1)^{n-1} f x')`.
pub fn mapping_cylinder(f: &ChainMap) -> ChainComplex {
    let (x, y) = (&f.src, &f.dst);
    let ring = f.ring();
    let rk = |n: i64| x.rank(n) + x.rank(n - 1) + y.rank(n);
    let lo = x.lo().min(y.lo());
    let hi = x.hi().max(y.hi()) + 1;
    let ranks: BTreeMap<i64, usize> = (lo..=hi).map(|n| (n, rk(n))).filter(|&(_, r)| r > 0).collect();
    ChainComplex::from_fn(ring, &ranks, |n| {
        let (a, b) = (x.rank(n), x.rank(n - 1));
        let (a2, b2) = (x.rank(n - 1), x.rank(n - 2));
        let mut m = Matrix::zeros(ring, rk(n - 1), rk(n));
        m.set_block(0, 0, &x.d(n));
        let s = sgn(ring, n - 1);
        m.set_block(0, a, &Matrix::identity(ring, b).scale(&s));
        m.set_block(a2, a, &x.d(n - 1));
        m.set_block(a2 + b2, a, &f.f(n - 1).scale(&ring.neg(&s)));
        m.set_block(a2 + b2, a + b, &y.d(n));
        Some(m)
    })
}

/// `X → Mf → Y`: cofibration followed by acyclic fibration.
pub fn factor_cof_then_acyclic_fib(f: &ChainMap) -> Factorization {
    let (x, y) = (&f.src, &f.dst);
    let ring = f.ring();
    let mid = mapping_cylinder(f);
    let mut left = BTreeMap::new();
    let mut right = BTreeMap::new();
    for n in mid.degrees() {
        let (a, b, c) = (x.rank(n), x.rank(n - 1), y.rank(n));
        let mut l = Matrix::zeros(ring, a + b + c, a);
        l.set_block(0, 0, &Matrix::identity(ring, a));
        let mut r = Matrix::zeros(ring, c, a + b + c);
        r.set_block(0, 0, &f.f(n));
        r.set_block(0, a + b, &Matrix::identity(ring, c));
        left.insert(n, l);
        right.insert(n, r);
    }
    Factorization {
        left: ChainMap::from_parts(x.clone(), mid.clone(), left).unwrap(),
        right: ChainMap::from_parts(mid.clone(), y.clone(), right).unwrap(),
        mid,
        left_class: ClassTag::Cof,
        right_class: ClassTag::AcyclicFib,
    }
}

/// Mapping cocylinder: `Nf_n = X_n ⊕ Y_{n+1} ⊕ Y_n`, with
/// `d(x, u, v) = (dx, du - (-1)^n f x + (-1)^n v, dv)`.
pub fn mapping_cocylinder(f: &ChainMap) -> ChainComplex {
    let (x, y) = (&f.src, &f.dst);
    let ring = f.ring();
    let rk = |n: i64| x.rank(n) + y.rank(n + 1) + y.rank(n);
    let lo = x.lo().min(y.lo() - 1);
    let hi = x.hi().max(y.hi());
    let ranks: BTreeMap<i64, usize> = (lo..=hi).map(|n| (n, rk(n))).filter(|&(_, r)| r > 0).collect();
    ChainComplex::from_fn(ring, &ranks, |n| {
        let (a, b) = (x.rank(n), y.rank(n + 1));
        let (a2, b2) = (x.rank(n - 1), y.rank(n));
        let s = sgn(ring, n);
        let mut m = Matrix::zeros(ring, rk(n - 1), rk(n));
        m.set_block(0, 0, &x.d(n));
        m.set_block(a2, 0, &f.f(n).scale(&ring.neg(&s)));
        m.set_block(a2, a, &y.d(n + 1));
        m.set_block(a2, a + b, &Matrix::identity(ring, y.rank(n)).scale(&s));
        m.set_block(a2 + b2, a + b, &y.d(n));
        Some(m)
    })
}

/// `X → Nf → Y`: acyclic cofibration followed by fibration.
pub fn factor_acyclic_cof_then_fib(f: &ChainMap) -> Factorization {
    let (x, y) = (&f.src, &f.dst);
    let ring = f.ring();
    let mid = mapping_cocylinder(f);
    let mut left = BTreeMap::new();
    let mut right = BTreeMap::new();
    for n in mid.degrees() {
        let (a, b, c) = (x.rank(n), y.rank(n + 1), y.rank(n));
        let mut l = Matrix::zeros(ring, a + b + c, a);
        l.set_block(0, 0, &Matrix::identity(ring, a));
        l.set_block(a + b, 0, &f.f(n));
        let mut r = Matrix::zeros(ring, c, a + b + c);
        r.set_block(0, a + b, &Matrix::identity(ring, c));
        left.insert(n, l);
        right.insert(n, r);
    }
    Factorization {
        left: ChainMap::from_parts(x.clone(), mid.clone(), left).unwrap(),
        right: ChainMap::from_parts(mid.clone(), y.clone(), right).unwrap(),
        mid,
        left_class: ClassTag::AcyclicCof,
        right_class: ClassTag::Fib,
    }
}

/// Map `Mf → Mg` induced by a square `b f = g a`.
pub fn cylinder_functor(f: &ChainMap, g: &ChainMap, a: &ChainMap, b: &ChainMap) -> ChainMap {
    let (mf, mg) = (mapping_cylinder(f), mapping_cylinder(g));
    let m = mf
        .degrees()
        .map(|n| (n, a.f(n).block_diag(&a.f(n - 1)).block_diag(&b.f(n))))
        .collect();
    ChainMap::from_parts(mf, mg, m).unwrap()
}

/// Map `Nf → Ng` induced by a square `b f = g a`.
pub fn cocylinder_functor(f: &ChainMap, g: &ChainMap, a: &ChainMap, b: &ChainMap) -> ChainMap {
    let (nf, ng) = (mapping_cocylinder(f), mapping_cocylinder(g));
    let m = nf
        .degrees()
        .map(|n| (n, a.f(n).block_diag(&b.f(n + 1)).block_diag(&b.f(n))))
        .collect();
    ChainMap::from_parts(nf, ng, m).unwrap()
}

/// Both factorizations are functorial along the square `b f = g a`: the
/// induced middle maps are chain maps and every square commutes.
pub fn check_functoriality(f: &ChainMap, g: &ChainMap, a: &ChainMap, b: &ChainMap) -> bool {
    if b.compose(f) != g.compose(a) {
        return false;
    }
    let (ff, gf) = (factor_cof_then_acyclic_fib(f), factor_cof_then_acyclic_fib(g));
    let m = cylinder_functor(f, g, a, b);
    let cyl_ok = m.is_chain_map()
        && m.compose(&ff.left) == gf.left.compose(a)
        && gf.right.compose(&m) == b.compose(&ff.right);
    let (ff, gf) = (factor_acyclic_cof_then_fib(f), factor_acyclic_cof_then_fib(g));
    let n = cocylinder_functor(f, g, a, b);
    let cocyl_ok = n.is_chain_map()
        && n.compose(&ff.left) == gf.left.compose(a)
        && gf.right.compose(&n) == b.compose(&ff.right);
    cyl_ok && cocyl_ok
}

/// Square `p ∘ top = bottom ∘ i`.
#[derive(Clone, Debug)]
pub struct LiftingProblem {
    pub left: ChainMap,
    pub right: ChainMap,
    pub top: ChainMap,
    pub bottom: ChainMap,
}

impl LiftingProblem {
    pub fn commutes(&self) -> bool {
        self.right.compose(&self.top) == self.bottom.compose(&self.left)
    }

    /// Both triangles and the chain-map condition.
    pub fn is_lift(&self, c: &ChainMap) -> bool {
        c.is_chain_map() && c.compose(&self.left) == self.top && self.right.compose(c) == self.bottom
    }
}

/// Solves for a diagonal `c: B → X` as one linear system in the entries of
/// every `c_n`.
pub fn solve_lift(p: &LiftingProblem) -> Option<ChainMap> {
    assert!(p.commutes(), "lifting problem does not commute");
    let (b, x) = (&p.left.dst, &p.right.src);
    let a = &p.left.src;
    let ring = p.left.ring();
    let mut offs = BTreeMap::new();
    let mut nvars = 0;
    for n in b.degrees() {
        offs.insert(n, nvars);
        nvars += x.rank(n) * b.rank(n);
    }
    let var = |n: i64, r: usize, c: usize| offs[&n] + r * b.rank(n) + c;
    let mut rows: Vec<(Vec<(usize, Scalar)>, Scalar)> = vec![];
    let lo = a.lo().min(b.lo());
    let hi = a.hi().max(b.hi());
    for n in lo..=hi {
        let (xr, br) = (x.rank(n), b.rank(n));
        // c_n i_n = top_n
        let (i_n, top) = (p.left.f(n), p.top.f(n));
        for r in 0..xr {
            for k in 0..a.rank(n) {
                let eq = (0..br).filter(|&c| !i_n.get(c, k).is_zero()).map(|c| (var(n, r, c), i_n.get(c, k).clone()));
                rows.push((eq.collect(), top.get(r, k).clone()));
            }
        }
        // p_n c_n = bottom_n
        let (p_n, bot) = (p.right.f(n), p.bottom.f(n));
        for yr in 0..p.right.dst.rank(n) {
            for c in 0..br {
                let eq = (0..xr).filter(|&r| !p_n.get(yr, r).is_zero()).map(|r| (var(n, r, c), p_n.get(yr, r).clone()));
                rows.push((eq.collect(), bot.get(yr, c).clone()));
            }
        }
        // dX_n c_n - c_{n-1} dB_n = 0
        let (dx, db) = (x.d(n), b.d(n));
        for r in 0..x.rank(n - 1) {
            for c in 0..br {
                let mut eq = vec![];
                for k in 0..xr {
                    if !dx.get(r, k).is_zero() {
                        eq.push((var(n, k, c), dx.get(r, k).clone()));
                    }
                }
                for k in 0..b.rank(n - 1) {
                    if !db.get(k, c).is_zero() {
                        eq.push((var(n - 1, r, k), ring.neg(db.get(k, c))));
                    }
                }
                rows.push((eq, Scalar::zero()));
            }
        }
    }
    // equations with empty support must have zero right-hand side
    if rows.iter().any(|(e, rhs)| e.is_empty() && !rhs.is_zero()) {
        return None;
    }
    rows.retain(|(e, _)| !e.is_empty());
    let mut m = Matrix::zeros(ring, rows.len(), nvars);
    let mut rhs = Matrix::zeros(ring, rows.len(), 1);
    for (i, (eq, v)) in rows.iter().enumerate() {
        for (j, c) in eq {
            m.add_at(i, *j, c);
        }
        rhs.set(i, 0, v.clone());
    }
    let sol = if nvars == 0 { Matrix::zeros(ring, 0, 1) } else { solve_linear(&m, &rhs).ok()?? };
    let mut comps = BTreeMap::new();
    for n in b.degrees() {
        let mut c = Matrix::zeros(ring, x.rank(n), b.rank(n));
        for r in 0..x.rank(n) {
            for k in 0..b.rank(n) {
                c.set(r, k, sol.get(var(n, r, k), 0).clone());
            }
        }
        comps.insert(n, c);
    }
    let c = ChainMap::from_parts(b.clone(), x.clone(), comps).ok()?;
    debug_assert!(p.is_lift(&c));
    Some(c)
}

/// Enumerates every candidate diagonal over `F_p`; only for tiny instances.
pub fn brute_force_lift(p: &LiftingProblem) -> Option<ChainMap> {
    let ring = p.left.ring();
    let Ring::Fp(q) = ring else { panic!("brute force needs a prime field") };
    let (b, x) = (&p.left.dst, &p.right.src);
    let shapes: Vec<(i64, usize, usize)> = b.degrees().map(|n| (n, x.rank(n), b.rank(n))).collect();
    let nvars: usize = shapes.iter().map(|&(_, r, c)| r * c).sum();
    assert!(nvars <= 20, "brute force search too large");
    let total = (q as u128).pow(nvars as u32);
    let mut digits = vec![0u64; nvars];
    for _ in 0..total {
        let mut comps = BTreeMap::new();
        let mut k = 0;
        for &(n, r, c) in &shapes {
            let mut m = Matrix::zeros(ring, r, c);
            for i in 0..r {
                for j in 0..c {
                    m.set(i, j, ring.from_i64(digits[k] as i64));
                    k += 1;
                }
            }
            comps.insert(n, m);
        }
        let c = ChainMap::from_parts(b.clone(), x.clone(), comps).unwrap();
        if p.is_lift(&c) {
            return Some(c);
        }
        for d in digits.iter_mut() {
            *d += 1;
            if *d < q {
                break;
            }
            *d = 0;
        }
    }
    None
}

/// A homotopy inverse built from two lifts through the cocylinder.
pub fn homotopy_inverse(f: &ChainMap) -> Option<ChainMap> {
    let fac = factor_acyclic_cof_then_fib(f);
    let (x, y) = (&f.src, &f.dst);
    let zero_c = ChainComplex::zero(f.ring());
    // retraction r: Nf → X with r ∘ left = id
    let r = solve_lift(&LiftingProblem {
        left: fac.left.clone(),
        right: ChainMap::zero(x, &zero_c),
        top: ChainMap::identity(x),
        bottom: ChainMap::zero(&fac.mid, &zero_c),
    })?;
    // section s: Y → Nf with right ∘ s = id
    let s = solve_lift(&LiftingProblem {
        left: ChainMap::zero(&zero_c, y),
        right: fac.right.clone(),
        top: ChainMap::zero(&zero_c, &fac.mid),
        bottom: ChainMap::identity(y),
    })?;
    Some(r.compose(&s))
}

/// Outcome of the 2-of-6 check on `X →f Y →g Z →h W`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwoOfSixReport {
    pub hypothesis_met: bool,
    pub f: bool,
    pub g: bool,
    pub h: bool,
    pub hgf: bool,
    pub violations: Vec<String>,
}

pub fn check_two_of_six(f: &ChainMap, g: &ChainMap, h: &ChainMap) -> TwoOfSixReport {
    let gf = g.compose(f);
    let hg = h.compose(g);
    let hypothesis_met = is_homotopy_equivalence(&gf) && is_homotopy_equivalence(&hg);
    let hgf = h.compose(&gf);
    let mut r = TwoOfSixReport {
        hypothesis_met,
        f: is_homotopy_equivalence(f),
        g: is_homotopy_equivalence(g),
        h: is_homotopy_equivalence(h),
        hgf: is_homotopy_equivalence(&hgf),
        violations: vec![],
    };
    if hypothesis_met {
        for (name, ok) in [("f", r.f), ("g", r.g), ("h", r.h), ("hgf", r.hgf)] {
            if !ok {
                r.violations.push(name.to_string());
            }
        }
    }
    r
}

/// Witness that `f` is a retract of its cylinder left factor: a lift `c`
/// with `c f = j` and `p c = id`.
#[derive(Clone, Debug)]
pub struct RetractWitness {
    pub factorization: Factorization,
    pub lift: ChainMap,
}

/// The retract argument: factor `f = p j` through `Mf` and lift in the
/// square with top `j` and bottom `id`. `None` when no lift exists, i.e. `f`
/// does not lift against its own right factor.
pub fn retract_argument(f: &ChainMap) -> Option<RetractWitness> {
    let fac = factor_cof_then_acyclic_fib(f);
    let prob = LiftingProblem {
        left: f.clone(),
        right: fac.right.clone(),
        top: fac.left.clone(),
        bottom: ChainMap::identity(&f.dst),
    };
    let c = solve_lift(&prob)?;
    let ok = c.compose(f) == fac.left && fac.right.compose(&c).is_identity();
    ok.then_some(RetractWitness { factorization: fac, lift: c })
}

/// `S^{n-1} ↪ Dⁿ`.
pub fn generating_cofibration(n: i64, ring: Ring) -> ChainMap {
    let s = crate::chain::sphere(n - 1, ring);
    let d = crate::chain::disk(n, ring);
    ChainMap::from_fn(&s, &d, |_| Matrix::identity(ring, 1)).unwrap()
}

/// `0 → Dⁿ`.
pub fn generating_acyclic_cofibration(n: i64, ring: Ring) -> ChainMap {
    ChainMap::zero(&ChainComplex::zero(ring), &crate::chain::disk(n, ring))
}

/// Seeded instances for the lifting and 2-of-6 suites.
pub mod samples {
    use rand::Rng;

    use super::*;
    use crate::chain::{direct_sum, direct_sum_map, disk, sphere};
    use crate::random::{self, Bounds, CaseRng};

    /// Solvable by theory: a cofibration against an acyclic fibration, or a
    /// generating acyclic cofibration against a fibration.
    pub fn solvable(ring: Ring, b: Bounds, rng: &mut CaseRng) -> LiftingProblem {
        match rng.gen_range(0..3) {
            0 => {
                // left factor of one cylinder against right factor of another
                let a = random::complex(ring, b, rng);
                let x0 = random::complex(ring, b, rng);
                let i = factor_cof_then_acyclic_fib(&random::chain_map(&a, &x0, rng)).left;
                let y = random::complex(ring, b, rng);
                let w = random::complex(ring, b, rng);
                let p = factor_cof_then_acyclic_fib(&random::chain_map(&w, &y, rng)).right;
                // commuting square from a chain map B → X
                let c = random::chain_map(&i.dst, &p.src, rng);
                LiftingProblem { top: c.compose(&i), bottom: p.compose(&c), left: i, right: p }
            }
            1 => {
                // sums of J-maps against a fibration with arbitrary bottom
                let mut i = ChainMap::zero(&ChainComplex::zero(ring), &ChainComplex::zero(ring));
                for _ in 0..rng.gen_range(1..=2) {
                    let n = rng.gen_range(b.deg_lo + 1..=b.deg_hi);
                    i = direct_sum_map(&i, &generating_acyclic_cofibration(n, ring));
                }
                let x0 = random::complex(ring, b, rng);
                let y = random::complex(ring, b, rng);
                let p = factor_acyclic_cof_then_fib(&random::chain_map(&x0, &y, rng)).right;
                let bottom = random::chain_map(&i.dst, &p.dst, rng);
                LiftingProblem { top: ChainMap::zero(&i.src, &p.src), bottom, left: i, right: p }
            }
            _ => {
                // I-map against an acyclic fibration; top hits a boundary
                let n = rng.gen_range(b.deg_lo + 1..=b.deg_hi);
                let i = generating_cofibration(n, ring);
                let w = random::complex(ring, b, rng);
                let y = random::complex(ring, b, rng);
                let p = factor_cof_then_acyclic_fib(&random::chain_map(&w, &y, rng)).right;
                let x = &p.src;
                let v = random::matrix(ring, x.rank(n), 1, 0.8, rng);
                let dv = x.d(n).mul(&v);
                let top = ChainMap::from_parts(i.src.clone(), x.clone(), [(n - 1, dv)].into()).unwrap();
                let pv = p.f(n).mul(&v);
                let pdv = p.f(n - 1).mul(&x.d(n)).mul(&v);
                let bottom =
                    ChainMap::from_parts(i.dst.clone(), p.dst.clone(), [(n, pv), (n - 1, pdv)].into()).unwrap();
                LiftingProblem { left: i, right: p, top, bottom }
            }
        }
    }

    /// Unsolvable squares: `S^{n-1} ↪ Dⁿ` against `S^{n-1} → 0` with the
    /// identity on top, or `0 → Sⁿ` against `0 → Sⁿ` with the identity at the
    /// bottom, each padded by identity summands.
    pub fn unsolvable(ring: Ring, b: Bounds, idx: u64, rng: &mut CaseRng) -> LiftingProblem {
        let n = rng.gen_range(b.deg_lo + 1..=b.deg_hi);
        let zero = ChainComplex::zero(ring);
        let base = if idx % 2 == 0 {
            let i = generating_cofibration(n, ring);
            let s = sphere(n - 1, ring);
            LiftingProblem {
                right: ChainMap::zero(&s, &zero),
                top: ChainMap::identity(&s),
                bottom: ChainMap::zero(&i.dst, &zero),
                left: i,
            }
        } else {
            let s = sphere(n, ring);
            LiftingProblem {
                left: ChainMap::zero(&zero, &s),
                right: ChainMap::zero(&zero, &s),
                top: ChainMap::zero(&zero, &zero),
                bottom: ChainMap::identity(&s),
            }
        };
        let pad = random::complex(ring, b, rng);
        let pad2 = random::complex(ring, b, rng);
        let (ip, pp) = (ChainMap::identity(&pad), ChainMap::identity(&pad2));
        LiftingProblem {
            left: direct_sum_map(&base.left, &ip),
            right: direct_sum_map(&base.right, &pp),
            top: direct_sum_map(&base.top, &ChainMap::zero(&pad, &pad2)),
            bottom: direct_sum_map(&base.bottom, &ChainMap::zero(&pad, &pad2)),
        }
    }

    /// Tiny problems over `F₂` with at most eight unknowns, solvable or not.
    /// The bottom map is a random solution of `bottom ∘ i = p ∘ top`.
    pub fn tiny(rng: &mut CaseRng) -> LiftingProblem {
        let ring = Ring::fp(2);
        let b = Bounds { max_rank: 2, deg_lo: 0, deg_hi: 1 };
        loop {
            let a = random::complex(ring, b, rng);
            let bb = random::complex(ring, b, rng);
            let x = random::complex(ring, b, rng);
            let y = random::complex(ring, b, rng);
            let vars: usize = (0..=1).map(|n| x.rank(n) * bb.rank(n)).sum();
            if vars == 0 || vars > 8 {
                continue;
            }
            let i = random::chain_map(&a, &bb, rng);
            let p = random::chain_map(&x, &y, rng);
            let top = random::chain_map(&a, &x, rng);
            let basis = crate::chain::chain_map_basis(&bb, &y);
            let target = p.compose(&top);
            let flat = |m: &ChainMap| -> Vec<Scalar> {
                (0..=1).flat_map(|n| m.f(n).entries().to_vec()).collect()
            };
            let rhs = flat(&target);
            if rhs.is_empty() {
                let prob = LiftingProblem { left: i, right: p, top, bottom: ChainMap::zero(&bb, &y) };
                return prob;
            }
            let mut cols = Matrix::zeros(ring, rhs.len(), basis.len());
            for (k, g) in basis.iter().enumerate() {
                for (r, v) in flat(&g.compose(&i)).into_iter().enumerate() {
                    cols.set(r, k, v);
                }
            }
            let Some(sol) = solve_linear(&cols, &Matrix::column(ring, rhs)).ok().flatten() else { continue };
            let kern = kernel_basis(&cols);
            let mut coeffs = sol.col(0);
            for j in 0..kern.cols() {
                if rng.gen_bool(0.5) {
                    for (c, v) in coeffs.iter_mut().zip(kern.col(j)) {
                        *c = ring.add(c, &v);
                    }
                }
            }
            let mut bottom = ChainMap::zero(&bb, &y);
            for (g, c) in basis.iter().zip(&coeffs) {
                bottom = bottom.add(&g.scale(c));
            }
            let prob = LiftingProblem { left: i, right: p, top, bottom };
            debug_assert!(prob.commutes());
            return prob;
        }
    }

    /// Composable triple of equivalences, so `gf` and `hg` are equivalences.
    pub fn two_of_six_triple(ring: Ring, b: Bounds, rng: &mut CaseRng) -> (ChainMap, ChainMap, ChainMap) {
        let x = random::complex(ring, b, rng);
        let f = random::equivalence(&x, b, rng);
        let g = random::equivalence(&f.dst, b, rng);
        let h = random::equivalence(&g.dst, b, rng);
        (f, g, h)
    }

    /// Triple where `gf` is an equivalence but `hg` is not: include and
    /// project `S⁰ → S⁰⊕D¹ → S⁰`, then the zero map.
    pub fn hypothesis_unmet(ring: Ring) -> (ChainMap, ChainMap, ChainMap) {
        let s = sphere(0, ring);
        let ds = direct_sum(&s, &disk(1, ring));
        let f = ds.in1.clone();
        let g = ds.pr1.clone();
        let h = ChainMap::zero(&s, &s);
        (f, g, h)
    }

    /// Cofibrations for the retract argument: cylinder left factors and sums
    /// of generating cofibrations.
    pub fn cofibration(ring: Ring, b: Bounds, rng: &mut CaseRng) -> ChainMap {
        if rng.gen_bool(0.5) {
            let a = random::complex(ring, b, rng);
            let y = random::complex(ring, b, rng);
            factor_cof_then_acyclic_fib(&random::chain_map(&a, &y, rng)).left
        } else {
            let n = rng.gen_range(b.deg_lo + 1..=b.deg_hi);
            let pad = random::complex(ring, b, rng);
            let i = direct_sum_map(&generating_cofibration(n, ring), &ChainMap::identity(&pad));
            random::rebase(&i.dst, rng).compose(&i)
        }
    }

    /// Maps with the left lifting property against all fibrations: cocylinder
    /// left factors and generating acyclic cofibrations.
    pub fn acyclic_cofibration(ring: Ring, b: Bounds, rng: &mut CaseRng) -> ChainMap {
        if rng.gen_bool(0.5) {
            let a = random::complex(ring, b, rng);
            let y = random::complex(ring, b, rng);
            factor_acyclic_cof_then_fib(&random::chain_map(&a, &y, rng)).left
        } else {
            let n = rng.gen_range(b.deg_lo + 1..=b.deg_hi);
            let pad = random::complex(ring, b, rng);
            direct_sum_map(&generating_acyclic_cofibration(n, ring), &ChainMap::identity(&pad))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{disk, sphere};

    #[test]
    fn predicates_on_generators() {
        for ring in [Ring::fp(2), Ring::Q, Ring::Z] {
            assert!(is_cofibration(&generating_cofibration(2, ring)));
            let j = generating_acyclic_cofibration(1, ring);
            assert!(has_class(&j, ClassTag::AcyclicCof));
            assert!(is_homotopy_equivalence(&j));
        }
        let two_z = ChainMap::identity(&sphere(0, Ring::Z)).scale(&Ring::Z.from_i64(2));
        assert!(!is_cofibration(&two_z));
        assert!(!is_homotopy_equivalence(&two_z));
        let two_q = ChainMap::identity(&sphere(0, Ring::Q)).scale(&Ring::Q.from_i64(2));
        assert!(is_cofibration(&two_q));
        let two_f3 = ChainMap::identity(&sphere(4, Ring::fp(3))).scale(&Ring::fp(3).from_i64(2));
        assert!(is_homotopy_equivalence(&two_f3));
    }

    #[test]
    fn cylinder_factorization_of_zero_source() {
        let y = disk(2, Ring::fp(3));
        let f = ChainMap::zero(&ChainComplex::zero(Ring::fp(3)), &y);
        let fac = factor_cof_then_acyclic_fib(&f);
        assert_eq!(fac.mid, y);
        assert!(fac.right.is_identity());
        assert!(fac.verify(&f));
    }

    #[test]
    fn identity_factorizations() {
        let x = crate::chain::interval(Ring::fp(5));
        let id = ChainMap::identity(&x);
        let fac = factor_cof_then_acyclic_fib(&id);
        assert!(fac.verify(&id));
        assert_eq!(fac.mid.ranks(), crate::chain::cylinder(&x).cyl.ranks());
        let fac2 = factor_acyclic_cof_then_fib(&id);
        assert!(fac2.verify(&id));
    }

    #[test]
    fn unsolvable_square() {
        let r = Ring::fp(3);
        let i = generating_cofibration(1, r);
        let s0 = sphere(0, r);
        let zero = ChainComplex::zero(r);
        let prob = LiftingProblem {
            left: i.clone(),
            right: ChainMap::zero(&s0, &zero),
            top: ChainMap::identity(&s0),
            bottom: ChainMap::zero(&i.dst, &zero),
        };
        assert!(prob.commutes());
        assert!(solve_lift(&prob).is_none());
        assert!(brute_force_lift(&prob).is_none());
    }

    #[test]
    fn homotopy_inverse_of_disk_inclusion() {
        let f = generating_acyclic_cofibration(3, Ring::Z);
        let g = homotopy_inverse(&f).unwrap();
        assert!(crate::chain::find_homotopy(&f.compose(&g), &ChainMap::identity(&f.dst)).is_some());
    }
}
