//! Bialgebras, products in cofree conilpotent bialgebras derived from a
//! corestricted multiplication, and the obstruction to lifting the counit
//! of `ΩBarH` through `p: Ĥ → H`.

pub mod distlaw;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::basis::{add_into, add_term, add_term2, sign, single, Elem, Elem2, Letter, Word};
use crate::chain::ChainComplex;
use crate::coalg::{cofree_coalgebra_bounded, CoalgebraMap, DGCoalgebra};
use crate::dga::{AlgError, DGAlgebra, Prod};
use crate::exactlin::{Matrix, Ring, Scalar};

/// `(u⊗v)(u'⊗v') = (-1)^{|v||u'|} uu'⊗vv'`; `None` if a product leaves the
/// basis.
pub fn tensor_mul(
    ring: Ring,
    deg: impl Fn(usize) -> i64,
    mul: impl Fn(usize, usize) -> Prod,
    a: &Elem2,
    b: &Elem2,
) -> Option<Elem2> {
    let mut out = Elem2::new();
    for (&(u, v), c) in a {
        for (&(u2, v2), c2) in b {
            let left = mul(u, u2).val()?;
            let right = mul(v, v2).val()?;
            let s = ring.mul(&sign(ring, deg(v) * deg(u2)), &ring.mul(c, c2));
            for (&i, x) in &left {
                for (&j, y) in &right {
                    add_term2(ring, &mut out, (i, j), &ring.mul(&s, &ring.mul(x, y)));
                }
            }
        }
    }
    Some(out)
}

/// Algebra and coalgebra on one graded basis with `Δ` multiplicative.
#[derive(Clone, Debug)]
pub struct Bialgebra {
    pub algebra: DGAlgebra,
    pub coalgebra: DGCoalgebra,
}

impl Bialgebra {
    pub fn new(algebra: DGAlgebra, coalgebra: DGCoalgebra) -> Result<Bialgebra, AlgError> {
        let b = Bialgebra { algebra, coalgebra };
        b.verify()?;
        Ok(b)
    }

    pub fn ring(&self) -> Ring {
        self.algebra.ring
    }

    pub fn len(&self) -> usize {
        self.algebra.len()
    }

    pub fn is_empty(&self) -> bool {
        self.algebra.is_empty()
    }

    pub fn deg(&self, i: usize) -> i64 {
        self.algebra.deg(i)
    }

    pub fn unit(&self) -> usize {
        self.algebra.unit
    }

    pub fn mul2(&self, a: &Elem2, b: &Elem2) -> Option<Elem2> {
        tensor_mul(self.ring(), |i| self.deg(i), |i, j| self.algebra.mul_basis(i, j), a, b)
    }

    pub fn verify(&self) -> Result<(), AlgError> {
        let (a, c) = (&self.algebra, &self.coalgebra);
        if a.basis.degs != c.basis.degs || a.d != c.d {
            return Err(AlgError::Invalid("algebra and coalgebra on different complexes".into()));
        }
        check_compatible(a.ring, a.unit, c, |i, j| a.mul_basis(i, j), |x, y| self.mul2(x, y))
    }
}

fn check_compatible(
    ring: Ring,
    unit: usize,
    c: &DGCoalgebra,
    mul: impl Fn(usize, usize) -> Prod,
    mul2: impl Fn(&Elem2, &Elem2) -> Option<Elem2>,
) -> Result<(), AlgError> {
    if c.comult[unit] != Elem2::from([((unit, unit), ring.one())]) || !c.counit[unit].is_one() {
        return Err(AlgError::Invalid("unit is not a coalgebra map".into()));
    }
    for i in 0..c.len() {
        for j in 0..c.len() {
            let Prod::Val(p) = mul(i, j) else { continue };
            let eps: Scalar = p.iter().fold(Scalar::zero(), |acc, (&k, v)| ring.add(&acc, &ring.mul(v, &c.counit[k])));
            if eps != ring.mul(&c.counit[i], &c.counit[j]) {
                return Err(AlgError::Invalid(format!("counit not multiplicative on {} * {}", c.names[i], c.names[j])));
            }
            let Some(rhs) = mul2(&c.comult[i], &c.comult[j]) else { continue };
            if c.comult_elem(&p) != rhs {
                return Err(AlgError::Invalid(format!("Δ not multiplicative on {} * {}", c.names[i], c.names[j])));
            }
        }
    }
    Ok(())
}

/// Corestricted multiplication `Ĥ⊗Ĥ → X̂` on pairs of nonempty words, as
/// letter combinations.
pub type Corestriction = BTreeMap<(Word, Word), Vec<(usize, Scalar)>>;

type WordComb = BTreeMap<Word, Scalar>;

/// Which factor of `Δ̄(uv)` the corecursion projects to a letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Corecursion {
    Prefix,
    Suffix,
}

struct Corec<'a> {
    ring: Ring,
    degs: Vec<i64>,
    cores: &'a Corestriction,
    order: Corecursion,
    memo: HashMap<(Word, Word), WordComb>,
}

impl Corec<'_> {
    fn deg(&self, w: &[usize]) -> i64 {
        w.iter().map(|&l| self.degs[l]).sum()
    }

    /// `π(uv)` for a split piece.
    fn head(&self, u: &[usize], v: &[usize]) -> Vec<(usize, Scalar)> {
        match (u.len(), v.len()) {
            (1, 0) => vec![(u[0], self.ring.one())],
            (0, 1) => vec![(v[0], self.ring.one())],
            (0, _) | (_, 0) => vec![],
            _ => self.cores.get(&(u.to_vec(), v.to_vec())).cloned().unwrap_or_default(),
        }
    }

    fn prod(&mut self, u: &[usize], v: &[usize]) -> WordComb {
        let r = self.ring;
        if u.is_empty() {
            return WordComb::from([(v.to_vec(), r.one())]);
        }
        if v.is_empty() {
            return WordComb::from([(u.to_vec(), r.one())]);
        }
        if let Some(e) = self.memo.get(&(u.to_vec(), v.to_vec())) {
            return e.clone();
        }
        let mut out = WordComb::new();
        let push = |out: &mut WordComb, w: Word, c: Scalar| {
            let e = out.entry(w).or_insert_with(Scalar::zero);
            *e = r.add(e, &c);
        };
        for (l, c) in self.head(u, v) {
            push(&mut out, vec![l], c);
        }
        for i in 0..=u.len() {
            for j in 0..=v.len() {
                if (i, j) == (0, 0) || (i, j) == (u.len(), v.len()) {
                    continue;
                }
                let (u1, u2) = u.split_at(i);
                let (v1, v2) = v.split_at(j);
                let s = sign(r, self.deg(u2) * self.deg(v1));
                let (h, rest) = match self.order {
                    Corecursion::Prefix => (self.head(u1, v1), (u2, v2)),
                    Corecursion::Suffix => (self.head(u2, v2), (u1, v1)),
                };
                if h.is_empty() {
                    continue;
                }
                let t = self.prod(rest.0, rest.1);
                for (l, c) in &h {
                    for (w, c2) in &t {
                        let nw = match self.order {
                            Corecursion::Prefix => std::iter::once(*l).chain(w.iter().copied()).collect(),
                            Corecursion::Suffix => w.iter().copied().chain(std::iter::once(*l)).collect(),
                        };
                        push(&mut out, nw, r.mul(&s, &r.mul(c, c2)));
                    }
                }
            }
        }
        out.retain(|_, c| !c.is_zero());
        self.memo.insert((u.to_vec(), v.to_vec()), out.clone());
        out
    }
}

/// A cofree conilpotent coalgebra with the multiplication determined by a
/// corestriction.
#[derive(Clone, Debug)]
pub struct CofreeBialgebra {
    pub coalgebra: DGCoalgebra,
    pub corestriction: Corestriction,
    pub order: Corecursion,
    table: Vec<Vec<Prod>>,
}

/// The multiplication on the truncated `T^co(X̂)` whose corestriction is
/// `cores` (unit terms implied), computed by corecursion on word length.
pub fn cofree_bialgebra_product(coalgebra: DGCoalgebra, cores: Corestriction, order: Corecursion) -> Result<CofreeBialgebra, AlgError> {
    let ring = coalgebra.ring;
    let ws = coalgebra.words.clone().ok_or(AlgError::Invalid("not a cofree coalgebra".into()))?;
    for ((u, v), img) in &cores {
        if u.is_empty() || v.is_empty() {
            return Err(AlgError::Invalid("corestriction on the unit is fixed".into()));
        }
        let d = ws.degree(u) + ws.degree(v);
        if img.iter().any(|(l, c)| *l >= ws.letters.len() || (!c.is_zero() && ws.letters[*l].degree != d)) {
            return Err(AlgError::Invalid(format!("corestriction of {}⊗{} has the wrong degree", ws.name(u), ws.name(v))));
        }
    }
    let mut co = Corec { ring, degs: ws.letters.iter().map(|l| l.degree).collect(), cores: &cores, order, memo: HashMap::new() };
    let n = ws.len();
    let mut table = vec![vec![Prod::Weight; n]; n];
    for i in 0..n {
        for j in 0..n {
            let comb = co.prod(&ws.words[i], &ws.words[j]);
            table[i][j] = to_prod(ring, &ws, &comb);
        }
    }
    let b = CofreeBialgebra { coalgebra, corestriction: cores.clone(), order, table };
    b.check_leibniz()?;
    Ok(b)
}

fn to_prod(ring: Ring, ws: &crate::basis::WordSpace, comb: &WordComb) -> Prod {
    let mut e = Elem::new();
    for (w, c) in comb {
        match ws.index(w) {
            Some(k) => add_term(ring, &mut e, k, c),
            None if w.len() > ws.max_weight => return Prod::Weight,
            None => return Prod::Degree,
        }
    }
    Prod::Val(e)
}

impl CofreeBialgebra {
    pub fn ring(&self) -> Ring {
        self.coalgebra.ring
    }

    pub fn len(&self) -> usize {
        self.coalgebra.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coalgebra.is_empty()
    }

    pub fn deg(&self, i: usize) -> i64 {
        self.coalgebra.deg(i)
    }

    pub fn index(&self, w: &[usize]) -> Option<usize> {
        self.coalgebra.words.as_ref()?.index(w)
    }

    pub fn mul_basis(&self, i: usize, j: usize) -> Prod {
        self.table[i][j].clone()
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Prod {
        let r = self.ring();
        let mut out = Elem::new();
        for (&i, x) in a {
            for (&j, y) in b {
                match &self.table[i][j] {
                    Prod::Val(e) => add_into(r, &mut out, e, &r.mul(x, y)),
                    other => return other.clone(),
                }
            }
        }
        Prod::Val(out)
    }

    pub fn mul2(&self, a: &Elem2, b: &Elem2) -> Option<Elem2> {
        tensor_mul(self.ring(), |i| self.deg(i), |i, j| self.mul_basis(i, j), a, b)
    }

    /// `Δ(uv) = Δ(u)Δ(v)` and `ε(uv) = ε(u)ε(v)` on every basis pair in
    /// window.
    pub fn check_compatibility(&self) -> Result<(), AlgError> {
        let unit = self.coalgebra.coaugmentation.ok_or(AlgError::Invalid("no unit".into()))?;
        check_compatible(self.ring(), unit, &self.coalgebra, |i, j| self.mul_basis(i, j), |x, y| self.mul2(x, y))
    }

    pub fn check_leibniz(&self) -> Result<(), AlgError> {
        let r = self.ring();
        let c = &self.coalgebra;
        for i in 0..self.len() {
            for j in 0..self.len() {
                let Prod::Val(p) = &self.table[i][j] else { continue };
                let lhs = c.d_elem(p);
                let (Prod::Val(a), Prod::Val(b)) = (self.mul(&c.d[i], &single(r, j)), self.mul(&single(r, i), &c.d[j])) else {
                    continue;
                };
                let mut rhs = a;
                add_into(r, &mut rhs, &b, &sign(r, self.deg(i)));
                if lhs != rhs {
                    return Err(AlgError::Invalid(format!("corestriction fails Leibniz on {} * {}", c.names[i], c.names[j])));
                }
            }
        }
        Ok(())
    }

    /// `(ab)c − a(bc)`, or `None` if a product leaves the basis.
    pub fn associator(&self, a: &Elem, b: &Elem, c: &Elem) -> Option<Elem> {
        let ab = self.mul(a, b).val()?;
        let bc = self.mul(b, c).val()?;
        let mut out = self.mul(&ab, c).val()?;
        add_into(self.ring(), &mut out, &self.mul(a, &bc).val()?, &self.ring().neg(&self.ring().one()));
        Some(out)
    }

    pub fn check_associative(&self) -> Result<(), AlgError> {
        let r = self.ring();
        let n = self.len();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if let Some(e) = self.associator(&single(r, i), &single(r, j), &single(r, k)) {
                        if !e.is_empty() {
                            let nm = &self.coalgebra.names;
                            return Err(AlgError::Invalid(format!("not associative on ({}, {}, {})", nm[i], nm[j], nm[k])));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Same table under the other corecursion order.
    pub fn agrees_with(&self, other: &CofreeBialgebra) -> bool {
        self.table == other.table
    }

    pub fn to_bialgebra(&self) -> Result<Bialgebra, AlgError> {
        let c = &self.coalgebra;
        let unit = c.coaugmentation.ok_or(AlgError::Invalid("no unit".into()))?;
        let a = DGAlgebra::from_table(
            c.ring,
            c.names.clone(),
            c.basis.degs.clone(),
            c.d.clone(),
            self.table.clone(),
            unit,
            Some(c.counit.clone()),
        )?;
        Bialgebra::new(a, c.clone())
    }
}

/// Where the obstruction polynomial vanishes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Roots {
    All,
    Finite(Vec<Scalar>),
}

/// The coalgebra-map condition for a lift `ε̂: ΩBarH → Ĥ` on
/// `w|w`, `w = s⁻¹s(x|x)`, as a polynomial in the coefficient `a` of
/// `s⁻¹sx⊗s⁻¹sx` in `Δw`.
#[derive(Clone, Debug)]
pub struct Obstruction {
    pub ring: Ring,
    pub m: i64,
    pub hhat: CofreeBialgebra,
    pub h: CofreeBialgebra,
    /// Coefficients of `a⁰, a¹, a²` in `(ε̂⊗ε̂)Δ(w|w)`.
    pub lhs: [Elem2; 3],
    /// `Δ̂ ε̂(w|w)`.
    pub rhs: Elem2,
    pub diff: [Elem2; 3],
    /// The same difference with every product in `Ĥ` replaced by its
    /// corestriction, as in the displayed computation.
    pub display_diff: [Elem2; 3],
    pub roots: Roots,
    /// `(x·x)·(x|x) − x·(x·(x|x))` in `Ĥ`.
    pub associator: Elem,
    pub hhat_compatible: bool,
    pub hhat_associative: bool,
    pub projection_ok: bool,
}

fn poly_at(ring: Ring, p: &[Elem2; 3], a: &Scalar) -> Elem2 {
    let mut out = Elem2::new();
    let mut pow = ring.one();
    for c in p {
        for (k, v) in c {
            add_term2(ring, &mut out, *k, &ring.mul(&pow, v));
        }
        pow = ring.mul(&pow, a);
    }
    out
}

fn is_square(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let s = n.sqrt();
    (&s * &s == *n).then_some(s)
}

/// Common roots of the coordinatewise quadratics.
fn roots_of(ring: Ring, p: &[Elem2; 3]) -> Roots {
    if let Ring::Fp(q) = ring {
        let rs: Vec<Scalar> = (0..q as i64).map(|a| ring.from_i64(a)).filter(|a| poly_at(ring, p, a).is_empty()).collect();
        return if rs.len() == q as usize { Roots::All } else { Roots::Finite(rs) };
    }
    let keys: BTreeSet<(usize, usize)> = p.iter().flat_map(|e| e.keys().copied()).collect();
    let coef = |k: &(usize, usize), i: usize| p[i].get(k).cloned().unwrap_or_else(Scalar::zero);
    if keys.is_empty() {
        return Roots::All;
    }
    let mut cands: Option<Vec<Scalar>> = None;
    for k in &keys {
        let (c0, c1, c2) = (coef(k, 0), coef(k, 1), coef(k, 2));
        let here = if c2.is_zero() && c1.is_zero() {
            vec![]
        } else if c2.is_zero() {
            vec![-c0 / c1]
        } else {
            let disc = &c1 * &c1 - Scalar::from_integer(4.into()) * &c2 * &c0;
            match (is_square(disc.numer()), is_square(disc.denom())) {
                (Some(a), Some(b)) => {
                    let s = Scalar::new(a, b);
                    let two = Scalar::from_integer(2.into()) * &c2;
                    vec![(-&c1 + &s) / &two, (-&c1 - &s) / &two]
                }
                _ => vec![],
            }
        };
        let here: Vec<Scalar> = here.into_iter().filter(|a| ring != Ring::Z || a.is_integer()).collect();
        cands = Some(match cands {
            None => here,
            Some(prev) => prev.into_iter().filter(|a| here.contains(a)).collect(),
        });
    }
    let mut rs: Vec<Scalar> = cands.unwrap_or_default().into_iter().filter(|a| poly_at(ring, p, a).is_empty()).collect();
    rs.sort();
    rs.dedup();
    Roots::Finite(rs)
}

/// `Ĥ = T^co(x, y, z)`, `|x| = m`, `|y| = 4m`, `|z| = 4m+1`, `dz = y`,
/// with corestricted product zero except `x|x ⊗ x|x ↦ y`, and
/// `H = T^co(x)` with zero corestriction.
pub fn counterexample_obstruction(m: i64, ring: Ring) -> Result<Obstruction, AlgError> {
    if m < 2 || m % 2 != 0 {
        return Err(AlgError::Invalid(format!("m = {m} must be even and at least 2")));
    }
    let hi = 4 * m + 2;
    let xhat = ChainComplex::from_fn(ring, &BTreeMap::from([(m, 1), (4 * m, 1), (4 * m + 1, 1)]), |n| {
        (n == 4 * m + 1).then(|| Matrix::identity(ring, 1))
    });
    let letters = |names: &[(&str, i64)]| names.iter().map(|&(n, d)| Letter { name: n.into(), degree: d }).collect::<Vec<_>>();
    let chat = cofree_coalgebra_bounded(&xhat, letters(&[("x", m), ("y", 4 * m), ("z", 4 * m + 1)]), 4, hi);
    let x = ChainComplex::from_fn(ring, &BTreeMap::from([(m, 1)]), |_| None);
    let c = cofree_coalgebra_bounded(&x, letters(&[("x", m)]), 4, hi);
    let cores = Corestriction::from([((vec![0, 0], vec![0, 0]), vec![(1, ring.one())])]);
    let hhat = cofree_bialgebra_product(chat, cores.clone(), Corecursion::Prefix)?;
    let h = cofree_bialgebra_product(c, Corestriction::new(), Corecursion::Prefix)?;

    // p: Ĥ → H on words in x alone
    let hws = hhat.coalgebra.words.as_ref().unwrap();
    let p = CoalgebraMap {
        images: hws
            .words
            .iter()
            .map(|w| if w.iter().all(|&l| l == 0) { h.index(w).map(|k| single(ring, k)).unwrap_or_default() } else { Elem::new() })
            .collect(),
    };
    let mut projection_ok = p.check(&hhat.coalgebra, &h.coalgebra).is_ok();
    for i in 0..hhat.len() {
        for j in 0..hhat.len() {
            if let (Prod::Val(uv), Prod::Val(pp)) = (hhat.mul_basis(i, j), h.mul(&p.images[i], &p.images[j])) {
                projection_ok &= p.apply(ring, &uv) == pp;
            }
        }
    }

    let idx = |w: &[usize]| hhat.index(w).ok_or(AlgError::OutOfWindow(hws.name(w)));
    let (one, x1, xx) = (idx(&[])?, idx(&[0])?, idx(&[0, 0])?);
    // (ε̂⊗ε̂)Δw = (x|x)⊗1 + a·x⊗x + 1⊗(x|x)
    let t0 = Elem2::from([((xx, one), ring.one()), ((one, xx), ring.one())]);
    let t1 = Elem2::from([((x1, x1), ring.one())]);
    let oow = || AlgError::OutOfWindow("Ĥ⊗Ĥ product".into());
    let sq = |mul2: &dyn Fn(&Elem2, &Elem2) -> Option<Elem2>| -> Result<[Elem2; 3], AlgError> {
        let l0 = mul2(&t0, &t0).ok_or_else(oow)?;
        let mut l1 = mul2(&t0, &t1).ok_or_else(oow)?;
        for (k, v) in mul2(&t1, &t0).ok_or_else(oow)? {
            add_term2(ring, &mut l1, k, &v);
        }
        let l2 = mul2(&t1, &t1).ok_or_else(oow)?;
        Ok([l0, l1, l2])
    };
    let lhs = sq(&|a, b| hhat.mul2(a, b))?;
    let ww = hhat.mul(&single(ring, xx), &single(ring, xx)).val().ok_or_else(oow)?;
    let rhs = hhat.coalgebra.comult_elem(&ww);
    let minus = |l: &[Elem2; 3], r: &Elem2| -> [Elem2; 3] {
        let mut d = l.clone();
        for (k, v) in r {
            add_term2(ring, &mut d[0], *k, &ring.neg(v));
        }
        d
    };
    let diff = minus(&lhs, &rhs);

    // products replaced by their corestrictions
    let disp = |i: usize, j: usize| -> Prod {
        let (u, v) = (&hws.words[i], &hws.words[j]);
        if u.is_empty() {
            return Prod::Val(single(ring, j));
        }
        if v.is_empty() {
            return Prod::Val(single(ring, i));
        }
        let mut e = Elem::new();
        for (l, c) in cores.get(&(u.clone(), v.clone())).cloned().unwrap_or_default() {
            add_term(ring, &mut e, hws.index(&[l]).unwrap(), &c);
        }
        Prod::Val(e)
    };
    let dl = sq(&|a, b| tensor_mul(ring, |i| hhat.deg(i), disp, a, b))?;
    let dww = disp(xx, xx).val().unwrap();
    let display_diff = minus(&dl, &hhat.coalgebra.comult_elem(&dww));

    let xe = single(ring, x1);
    let associator = hhat.associator(&xe, &xe, &single(ring, xx)).ok_or_else(oow)?;
    let roots = roots_of(ring, &diff);
    Ok(Obstruction {
        ring,
        m,
        hhat_compatible: hhat.check_compatibility().is_ok(),
        hhat_associative: hhat.check_associative().is_ok(),
        hhat,
        h,
        lhs,
        rhs,
        diff,
        display_diff,
        roots,
        associator,
        projection_ok,
    })
}

impl Obstruction {
    pub fn at(&self, a: &Scalar) -> Elem2 {
        poly_at(self.ring, &self.diff, a)
    }

    pub fn display_at(&self, a: &Scalar) -> Elem2 {
        poly_at(self.ring, &self.display_diff, a)
    }

    pub fn nonzero_for_all_a(&self) -> bool {
        matches!(&self.roots, Roots::Finite(v) if v.is_empty())
    }

    /// Index of a word of `Ĥ` given by letter names, e.g. `"x|x"`.
    pub fn word(&self, name: &str) -> Option<usize> {
        self.hhat.coalgebra.index_of(name)
    }

    pub fn render(&self, e: &Elem2) -> BTreeMap<String, String> {
        let nm = &self.hhat.coalgebra.names;
        e.iter().map(|(&(i, j), c)| (format!("{} ⊗ {}", nm[i], nm[j]), self.ring.fmt_scalar(c))).collect()
    }

    pub fn render1(&self, e: &Elem) -> BTreeMap<String, String> {
        let nm = &self.hhat.coalgebra.names;
        e.iter().map(|(&i, c)| (nm[i].clone(), self.ring.fmt_scalar(c))).collect()
    }

    pub fn to_json(&self) -> Value {
        let poly = |p: &[Elem2; 3]| json!({"a^0": self.render(&p[0]), "a^1": self.render(&p[1]), "a^2": self.render(&p[2])});
        let roots = match &self.roots {
            Roots::All => json!("all"),
            Roots::Finite(v) => json!(v.iter().map(|a| self.ring.fmt_scalar(a)).collect::<Vec<_>>()),
        };
        let sweep: Option<Vec<Value>> = match self.ring {
            Ring::Fp(p) => Some(
                (0..p as i64)
                    .map(|a| {
                        let a = self.ring.from_i64(a);
                        json!({"a": self.ring.fmt_scalar(&a), "difference": self.render(&self.at(&a))})
                    })
                    .collect(),
            ),
            _ => None,
        };
        json!({
            "ring": self.ring.tag(),
            "m": self.m,
            "difference": poly(&self.diff),
            "rhs": self.render(&self.rhs),
            "display_difference": poly(&self.display_diff),
            "roots": roots,
            "sweep": sweep,
            "nonzero_for_all_a": self.nonzero_for_all_a(),
            "associator": self.render1(&self.associator),
            "hhat_compatible": self.hhat_compatible,
            "hhat_associative": self.hhat_associative,
            "projection_ok": self.projection_ok,
        })
    }
}

/// Small bialgebras with exact products.
pub mod samples {
    use super::*;

    /// `R[C_n]` in degree zero with `Δg = g⊗g`.
    pub fn group_algebra(ring: Ring, n: usize) -> Bialgebra {
        let names: Vec<String> = (0..n).map(|i| if i == 0 { "1".into() } else { format!("g{i}") }).collect();
        let mult = (0..n).map(|i| (0..n).map(|j| Prod::Val(single(ring, (i + j) % n))).collect()).collect();
        let a = DGAlgebra::from_table(ring, names.clone(), vec![0; n], vec![Elem::new(); n], mult, 0, Some(vec![ring.one(); n]))
            .expect("group algebra");
        let comult = (0..n).map(|i| Elem2::from([((i, i), ring.one())])).collect();
        let c = DGCoalgebra::new(ring, names, vec![0; n], vec![Elem::new(); n], comult, vec![ring.one(); n], None, None)
            .expect("group coalgebra");
        Bialgebra::new(a, c).expect("group bialgebra")
    }

    /// Exterior algebra on primitive generators of odd degree.
    pub fn exterior(ring: Ring, gens: &[(&str, i64)]) -> Bialgebra {
        assert!(gens.iter().all(|g| g.1 % 2 != 0), "exterior generators must be odd");
        let k = gens.len();
        let deg = |s: usize| (0..k).filter(|&i| s >> i & 1 == 1).map(|i| gens[i].1).sum::<i64>();
        let mut masks: Vec<usize> = (0..1usize << k).collect();
        masks.sort_by_key(|&s| (deg(s), s.count_ones(), s));
        let pos: HashMap<usize, usize> = masks.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let names: Vec<String> = masks
            .iter()
            .map(|&s| if s == 0 { "1".into() } else { (0..k).filter(|&i| s >> i & 1 == 1).map(|i| gens[i].0).collect::<Vec<_>>().join("") })
            .collect();
        let degs: Vec<i64> = masks.iter().map(|&s| deg(s)).collect();
        // inversions between elements of a and later-indexed... pairs (p in a, q in b) with p > q
        let inv = |a: usize, b: usize| (0..k).filter(|&p| a >> p & 1 == 1).map(|p| (0..p).filter(|&q| b >> q & 1 == 1).count()).sum::<usize>();
        let n = masks.len();
        let mult = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let (a, b) = (masks[i], masks[j]);
                        if a & b != 0 {
                            Prod::Val(Elem::new())
                        } else {
                            Prod::Val(Elem::from([(pos[&(a | b)], sign(ring, inv(a, b) as i64))]))
                        }
                    })
                    .collect()
            })
            .collect();
        let comult = masks
            .iter()
            .map(|&s| {
                let mut e = Elem2::new();
                let mut a = s;
                loop {
                    add_term2(ring, &mut e, (pos[&a], pos[&(s & !a)]), &sign(ring, inv(a, s & !a) as i64));
                    if a == 0 {
                        break;
                    }
                    a = (a - 1) & s;
                }
                e
            })
            .collect();
        let counit: Vec<Scalar> = masks.iter().map(|&s| if s == 0 { ring.one() } else { Scalar::zero() }).collect();
        let a = DGAlgebra::from_table(ring, names.clone(), degs.clone(), vec![Elem::new(); n], mult, 0, Some(counit.clone()))
            .expect("exterior algebra");
        let c = DGCoalgebra::new(ring, names, degs, vec![Elem::new(); n], comult, counit, Some(0), Some(k)).expect("exterior coalgebra");
        Bialgebra::new(a, c).expect("exterior bialgebra")
    }

    pub fn bialgebras(ring: Ring) -> Vec<(String, Bialgebra)> {
        vec![
            ("R".into(), group_algebra(ring, 1)),
            ("R[C2]".into(), group_algebra(ring, 2)),
            ("R[C3]".into(), group_algebra(ring, 3)),
            ("Λ(e), |e|=1".into(), exterior(ring, &[("e", 1)])),
            ("Λ(e), |e|=3".into(), exterior(ring, &[("e", 3)])),
            ("Λ(e,f), |e|=|f|=1".into(), exterior(ring, &[("e", 1), ("f", 1)])),
            ("Λ(e,f), |e|=1, |f|=3".into(), exterior(ring, &[("e", 1), ("f", 3)])),
        ]
    }
}
