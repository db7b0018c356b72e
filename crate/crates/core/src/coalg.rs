//! Coassociative dg coalgebras on finite bases: cofree (deconcatenation)
//! coalgebras, the interval coalgebra, comodules, cofree comodules and
//! comodule cylinders.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;
use serde_json::{json, Map, Value};

use crate::basis::{
    add_into, add_term, add_term2, add_term3, sign, single, tensor_index, tensor_order, Elem, Elem2, Elem3, GradedBasis, Letter,
    WordSpace,
};
use crate::chain::{cylinder, direct_sum, ChainComplex, ChainMap};
use crate::dga::AlgError;
use crate::exactlin::{Ring, Scalar};

/// Sparse element of an `n`-fold tensor power.
pub type ElemN = BTreeMap<Vec<usize>, Scalar>;

fn add_term_n(ring: Ring, e: &mut ElemN, k: Vec<usize>, c: &Scalar) {
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

#[derive(Clone, Debug)]
pub struct DGCoalgebra {
    pub ring: Ring,
    pub names: Vec<String>,
    pub basis: GradedBasis,
    pub d: Vec<Elem>,
    pub comult: Vec<Elem2>,
    pub counit: Vec<Scalar>,
    pub coaugmentation: Option<usize>,
    /// Iterates of the reduced comultiplication beyond this many factors vanish.
    pub conilpotency_bound: Option<usize>,
    pub complex: ChainComplex,
    /// Word structure when the underlying graded coalgebra is cofree.
    pub words: Option<WordSpace>,
    /// Degrees where a truncated cofree coalgebra agrees with the untruncated one.
    pub window: Option<(i64, i64)>,
}

impl DGCoalgebra {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        ring: Ring,
        names: Vec<String>,
        degs: Vec<i64>,
        d: Vec<Elem>,
        comult: Vec<Elem2>,
        counit: Vec<Scalar>,
        coaugmentation: Option<usize>,
        conilpotency_bound: Option<usize>,
    ) -> Result<DGCoalgebra, AlgError> {
        let basis = GradedBasis::new(degs);
        let complex = basis.complex(ring, &d);
        let c = DGCoalgebra {
            ring,
            names,
            basis,
            d,
            comult,
            counit,
            coaugmentation,
            conilpotency_bound,
            complex,
            words: None,
            window: None,
        };
        c.verify()?;
        Ok(c)
    }

    /// The ground ring with `Δ1 = 1⊗1`.
    pub fn unit_coalgebra(ring: Ring) -> DGCoalgebra {
        cofree_coalgebra(&ChainComplex::zero(ring), 0)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn deg(&self, i: usize) -> i64 {
        self.basis.degs[i]
    }

    pub fn d_elem(&self, a: &Elem) -> Elem {
        let mut out = Elem::new();
        for (&i, c) in a {
            add_into(self.ring, &mut out, &self.d[i], c);
        }
        out
    }

    /// `(d⊗1 + 1⊗d)` with the Koszul sign.
    pub fn d2(&self, e: &Elem2) -> Elem2 {
        let r = self.ring;
        let mut out = Elem2::new();
        for (&(a, b), c) in e {
            for (&k, v) in &self.d[a] {
                add_term2(r, &mut out, (k, b), &r.mul(c, v));
            }
            let s = r.mul(c, &sign(r, self.deg(a)));
            for (&k, v) in &self.d[b] {
                add_term2(r, &mut out, (a, k), &r.mul(&s, v));
            }
        }
        out
    }

    pub fn comult_elem(&self, a: &Elem) -> Elem2 {
        let r = self.ring;
        let mut out = Elem2::new();
        for (&i, c) in a {
            for (&k, v) in &self.comult[i] {
                add_term2(r, &mut out, k, &r.mul(c, v));
            }
        }
        out
    }

    /// Basis of the coaugmentation coideal.
    pub fn coideal(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| Some(i) != self.coaugmentation).collect()
    }

    /// `Δ̄c = Δc − c⊗1 − 1⊗c` restricted to the coideal.
    pub fn reduced(&self, i: usize) -> Elem2 {
        let Some(u) = self.coaugmentation else { return self.comult[i].clone() };
        self.comult[i].iter().filter(|(&(a, b), _)| a != u && b != u).map(|(&k, c)| (k, c.clone())).collect()
    }

    /// `Δ̄^{(n)}`: the `n`-fold reduced comultiplication of a coideal element.
    pub fn iterated_reduced(&self, i: usize, n: usize) -> ElemN {
        let r = self.ring;
        let mut cur = ElemN::from([(vec![i], r.one())]);
        for _ in 1..n {
            let mut next = ElemN::new();
            for (w, c) in &cur {
                let last = *w.last().unwrap();
                for (&(a, b), v) in &self.reduced(last) {
                    let mut w2 = w[..w.len() - 1].to_vec();
                    w2.push(a);
                    w2.push(b);
                    add_term_n(r, &mut next, w2, &r.mul(c, v));
                }
            }
            cur = next;
        }
        cur
    }

    pub fn check_coassociative(&self) -> Result<(), AlgError> {
        let r = self.ring;
        for i in 0..self.len() {
            let mut left = Elem3::new();
            let mut right = Elem3::new();
            for (&(a, b), c) in &self.comult[i] {
                for (&(a1, a2), v) in &self.comult[a] {
                    add_term3(r, &mut left, (a1, a2, b), &r.mul(c, v));
                }
                for (&(b1, b2), v) in &self.comult[b] {
                    add_term3(r, &mut right, (a, b1, b2), &r.mul(c, v));
                }
            }
            if left != right {
                return Err(AlgError::Invalid(format!("coassociativity fails on {}", self.names[i])));
            }
        }
        Ok(())
    }

    pub fn check_counit(&self) -> Result<(), AlgError> {
        let r = self.ring;
        for i in 0..self.len() {
            let mut left = Elem::new();
            let mut right = Elem::new();
            for (&(a, b), c) in &self.comult[i] {
                add_term(r, &mut left, b, &r.mul(c, &self.counit[a]));
                add_term(r, &mut right, a, &r.mul(c, &self.counit[b]));
            }
            let e = single(r, i);
            if left != e || right != e {
                return Err(AlgError::Invalid(format!("counit law fails on {}", self.names[i])));
            }
            if self.deg(i) != 0 && !self.counit[i].is_zero() {
                return Err(AlgError::Invalid("counit not of degree zero".into()));
            }
        }
        Ok(())
    }

    /// `Δ` and `ε` commute with the differentials.
    pub fn check_chain(&self) -> Result<(), AlgError> {
        let r = self.ring;
        for i in 0..self.len() {
            if self.comult_elem(&self.d[i]) != self.d2(&self.comult[i]) {
                return Err(AlgError::Invalid(format!("comultiplication not a chain map on {}", self.names[i])));
            }
            let e = self.d[i].iter().fold(Scalar::zero(), |acc, (&k, c)| r.add(&acc, &r.mul(c, &self.counit[k])));
            if !e.is_zero() {
                return Err(AlgError::Invalid("counit not a chain map".into()));
            }
        }
        Ok(())
    }

    pub fn check_coaugmentation(&self) -> Result<(), AlgError> {
        let Some(u) = self.coaugmentation else { return Ok(()) };
        let r = self.ring;
        if self.comult[u] != Elem2::from([((u, u), r.one())]) || self.counit[u] != r.one() || !self.d[u].is_empty() {
            return Err(AlgError::Invalid("coaugmentation is not a coalgebra map".into()));
        }
        if self.coideal().iter().any(|&i| !self.counit[i].is_zero()) {
            return Err(AlgError::Invalid("counit must vanish on the coideal".into()));
        }
        Ok(())
    }

    pub fn check_conilpotent(&self) -> Result<(), AlgError> {
        let Some(n) = self.conilpotency_bound else { return Ok(()) };
        if self.coaugmentation.is_none() {
            return Err(AlgError::Invalid("conilpotency needs a coaugmentation".into()));
        }
        for i in self.coideal() {
            if !self.iterated_reduced(i, n + 1).is_empty() {
                return Err(AlgError::Invalid(format!("reduced comultiplication does not vanish on {}", self.names[i])));
            }
        }
        Ok(())
    }

    pub fn verify(&self) -> Result<(), AlgError> {
        self.complex.validate().map_err(|e| AlgError::Invalid(e.to_string()))?;
        self.check_counit()?;
        self.check_coassociative()?;
        self.check_chain()?;
        self.check_coaugmentation()?;
        self.check_conilpotent()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn to_json(&self) -> Value {
        let r = self.ring;
        let basis: Vec<Value> = (0..self.len()).map(|i| json!({"name": self.names[i], "degree": self.deg(i)})).collect();
        let mut d = Map::new();
        let mut comult = Map::new();
        let mut counit = Map::new();
        for i in 0..self.len() {
            let t: Map<String, Value> =
                self.d[i].iter().map(|(&k, c)| (self.names[k].clone(), Value::String(r.fmt_scalar(c)))).collect();
            d.insert(self.names[i].clone(), Value::Object(t));
            let t: Vec<Value> = self.comult[i]
                .iter()
                .map(|(&(a, b), c)| json!([r.fmt_scalar(c), self.names[a], self.names[b]]))
                .collect();
            comult.insert(self.names[i].clone(), Value::Array(t));
            counit.insert(self.names[i].clone(), Value::String(r.fmt_scalar(&self.counit[i])));
        }
        json!({
            "ring": r.tag(),
            "basis": basis,
            "d": d,
            "comult": comult,
            "counit": counit,
            "coaugmentation": self.coaugmentation.map(|u| self.names[u].clone()),
            "conilpotency_bound": self.conilpotency_bound,
        })
    }

    pub fn from_json(v: &Value) -> Result<DGCoalgebra, AlgError> {
        let bad = |s: &str| AlgError::Invalid(s.to_string());
        let ring = Ring::parse(v.get("ring").and_then(Value::as_str).ok_or_else(|| bad("missing ring"))?)
            .map_err(|e| AlgError::Invalid(e.to_string()))?;
        let mut names = vec![];
        let mut degs = vec![];
        for b in v.get("basis").and_then(Value::as_array).ok_or_else(|| bad("missing basis"))? {
            names.push(b.get("name").and_then(Value::as_str).ok_or_else(|| bad("basis name"))?.to_string());
            degs.push(b.get("degree").and_then(Value::as_i64).ok_or_else(|| bad("basis degree"))?);
        }
        let idx = |s: &str| names.iter().position(|n| n == s).ok_or_else(|| AlgError::Invalid(format!("unknown basis element {s}")));
        let scalar = |v: &Value| -> Result<Scalar, AlgError> {
            let s = v.as_str().ok_or_else(|| bad("coefficients are decimal strings"))?;
            ring.parse_scalar(s).map_err(|e| AlgError::Invalid(e.to_string()))
        };
        let n = names.len();
        let mut d = vec![Elem::new(); n];
        if let Some(m) = v.get("d").and_then(Value::as_object) {
            for (k, t) in m {
                let i = idx(k)?;
                for (w, c) in t.as_object().ok_or_else(|| bad("d entries"))? {
                    add_term(ring, &mut d[i], idx(w)?, &scalar(c)?);
                }
            }
        }
        let mut comult = vec![Elem2::new(); n];
        for (k, t) in v.get("comult").and_then(Value::as_object).ok_or_else(|| bad("missing comult"))? {
            let i = idx(k)?;
            for term in t.as_array().ok_or_else(|| bad("comult entries"))? {
                let a = term.as_array().filter(|a| a.len() == 3).ok_or_else(|| bad("comult terms are [coeff, left, right]"))?;
                let l = idx(a[1].as_str().ok_or_else(|| bad("left factor"))?)?;
                let r = idx(a[2].as_str().ok_or_else(|| bad("right factor"))?)?;
                add_term2(ring, &mut comult[i], (l, r), &scalar(&a[0])?);
            }
        }
        let mut counit = vec![Scalar::zero(); n];
        for (k, c) in v.get("counit").and_then(Value::as_object).ok_or_else(|| bad("missing counit"))? {
            counit[idx(k)?] = scalar(c)?;
        }
        let coaug = match v.get("coaugmentation").and_then(Value::as_str) {
            Some(s) => Some(idx(s)?),
            None => None,
        };
        let bound = v.get("conilpotency_bound").and_then(Value::as_u64).map(|b| b as usize);
        DGCoalgebra::new(ring, names, degs, d, comult, counit, coaug, bound)
    }
}

/// Letter names for the basis of a complex.
pub fn default_letters(x: &ChainComplex) -> Vec<Letter> {
    let mut out = vec![];
    for n in x.degrees() {
        let r = x.rank(n);
        for a in 0..r {
            let name = if r == 1 { format!("x{n}") } else { format!("x{n}_{a}") };
            out.push(Letter { name, degree: n });
        }
    }
    out
}

/// Differentials of the letters of [`default_letters`], as letter combinations.
pub fn letter_differentials(x: &ChainComplex) -> Vec<Elem> {
    let mut offsets = BTreeMap::new();
    let mut off = 0;
    for n in x.degrees() {
        offsets.insert(n, off);
        off += x.rank(n);
    }
    let mut out = vec![];
    for n in x.degrees() {
        let d = x.d(n);
        for a in 0..x.rank(n) {
            let mut e = Elem::new();
            for b in 0..x.rank(n - 1) {
                add_term(x.ring(), &mut e, offsets[&(n - 1)] + b, d.get(b, a));
            }
            out.push(e);
        }
    }
    out
}

/// Coalgebra on a word space with deconcatenation, given the differential
/// on words. Subwords of basis words must be basis words.
pub fn word_coalgebra(ring: Ring, space: WordSpace, d: Vec<Elem>, window: Option<(i64, i64)>) -> DGCoalgebra {
    let n = space.len();
    let mut comult = Vec::with_capacity(n);
    let mut counit = vec![Scalar::zero(); n];
    for (i, w) in space.words.iter().enumerate() {
        let mut e = Elem2::new();
        for k in 0..=w.len() {
            let a = space.index(&w[..k]).expect("prefix in word space");
            let b = space.index(&w[k..]).expect("suffix in word space");
            add_term2(ring, &mut e, (a, b), &ring.one());
        }
        comult.push(e);
        if w.is_empty() {
            counit[i] = ring.one();
        }
    }
    let unit = space.index(&[]);
    let names = space.words.iter().map(|w| space.name(w)).collect();
    let complex = space.basis.complex(ring, &d);
    DGCoalgebra {
        ring,
        names,
        basis: space.basis.clone(),
        d,
        comult,
        counit,
        coaugmentation: unit,
        conilpotency_bound: Some(space.max_weight),
        complex,
        words: Some(space),
        window,
    }
}

/// Words of length at most `max_weight` in the basis of `x`.
pub fn cofree_coalgebra(x: &ChainComplex, max_weight: usize) -> DGCoalgebra {
    cofree_coalgebra_named(x, default_letters(x), max_weight)
}

pub fn cofree_coalgebra_named(x: &ChainComplex, letters: Vec<Letter>, max_weight: usize) -> DGCoalgebra {
    cofree_coalgebra_bounded(x, letters, max_weight, i64::MAX / 4)
}

/// Cofree coalgebra on words of degree at most `deg_hi`. Needs letters in
/// non-negative degrees so that subwords stay in the basis.
pub fn cofree_coalgebra_bounded(x: &ChainComplex, letters: Vec<Letter>, max_weight: usize, deg_hi: i64) -> DGCoalgebra {
    let ring = x.ring();
    let ld = letter_differentials(x);
    let g = letters.iter().map(|l| l.degree).min();
    let lo = if deg_hi < i64::MAX / 4 { 0 } else { i64::MIN / 4 };
    let space = WordSpace::new(letters, vec![], max_weight, lo, deg_hi);
    let d = space.words.iter().map(|w| letter_word_d(ring, &space, &ld, w)).collect();
    let window = match g {
        None => Some((0, 0)),
        Some(g) if g >= 1 => Some((0, ((max_weight as i64 + 1) * g - 1).min(deg_hi))),
        _ => None,
    };
    word_coalgebra(ring, space, d, window)
}

/// Leibniz extension of a linear differential on letters to a word.
pub fn letter_word_d(ring: Ring, space: &WordSpace, ld: &[Elem], w: &[usize]) -> Elem {
    let mut out = Elem::new();
    let mut pre = 0;
    for (i, &l) in w.iter().enumerate() {
        let s = sign(ring, pre);
        for (&k, c) in &ld[l] {
            let mut nw = w.to_vec();
            nw[i] = k;
            if let Some(j) = space.index(&nw) {
                add_term(ring, &mut out, j, &ring.mul(&s, c));
            }
        }
        pre += space.letters[l].degree;
    }
    out
}

/// `I` with `Δ(∂ₖt) = ∂ₖt⊗∂ₖt`, `Δ(t) = ∂₀t⊗t + t⊗∂₁t`, `dt = ∂₀t − ∂₁t`.
pub fn interval_coalgebra(ring: Ring) -> DGCoalgebra {
    let one = ring.one();
    let d = vec![Elem::new(), Elem::new(), Elem::from([(0, one.clone()), (1, ring.neg(&one))])];
    let comult = vec![
        Elem2::from([((0, 0), one.clone())]),
        Elem2::from([((1, 1), one.clone())]),
        Elem2::from([((0, 2), one.clone()), ((2, 1), one.clone())]),
    ];
    let counit = vec![one.clone(), one, Scalar::zero()];
    DGCoalgebra::new(ring, vec!["∂₀t".into(), "∂₁t".into(), "t".into()], vec![0, 0, 1], d, comult, counit, None, None)
        .expect("interval coalgebra")
}

/// Degree-zero map given by images of basis elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoalgebraMap {
    pub images: Vec<Elem>,
}

impl CoalgebraMap {
    pub fn apply(&self, ring: Ring, e: &Elem) -> Elem {
        let mut out = Elem::new();
        for (&i, c) in e {
            add_into(ring, &mut out, &self.images[i], c);
        }
        out
    }

    pub fn apply2(&self, ring: Ring, e: &Elem2) -> Elem2 {
        let mut out = Elem2::new();
        for (&(a, b), c) in e {
            for (&x, u) in &self.images[a] {
                for (&y, v) in &self.images[b] {
                    add_term2(ring, &mut out, (x, y), &ring.mul(c, &ring.mul(u, v)));
                }
            }
        }
        out
    }

    pub fn chain_map(&self, src: &DGCoalgebra, dst: &DGCoalgebra) -> ChainMap {
        src.basis.chain_map(src.ring, &src.complex, &dst.basis, &dst.complex, &self.images)
    }

    /// Chain map, comultiplicative and counital on every basis element.
    pub fn check(&self, src: &DGCoalgebra, dst: &DGCoalgebra) -> Result<(), AlgError> {
        let r = src.ring;
        for i in 0..src.len() {
            if self.images[i].keys().any(|&k| dst.deg(k) != src.deg(i)) {
                return Err(AlgError::Invalid(format!("{} changes degree", src.names[i])));
            }
            if dst.d_elem(&self.images[i]) != self.apply(r, &src.d[i]) {
                return Err(AlgError::Invalid(format!("not a chain map on {}", src.names[i])));
            }
            if dst.comult_elem(&self.images[i]) != self.apply2(r, &src.comult[i]) {
                return Err(AlgError::Invalid(format!("not comultiplicative on {}", src.names[i])));
            }
            let e = self.images[i].iter().fold(Scalar::zero(), |acc, (&k, c)| r.add(&acc, &r.mul(c, &dst.counit[k])));
            if e != src.counit[i] {
                return Err(AlgError::Invalid(format!("not counital on {}", src.names[i])));
            }
        }
        Ok(())
    }

    /// Length-one component of a map into a cofree coalgebra, as letter
    /// combinations.
    pub fn corestriction(&self, dst: &DGCoalgebra) -> Vec<Elem> {
        let ws = dst.words.as_ref().expect("cofree target");
        self.images
            .iter()
            .map(|e| e.iter().filter(|(&k, _)| ws.words[k].len() == 1).map(|(&k, c)| (ws.words[k][0], c.clone())).collect())
            .collect()
    }
}

/// The unique coaugmented coalgebra map into a cofree coalgebra with the
/// given corestriction `f` (letter combinations, zero on the coaugmentation):
/// `g(c) = ε(c)·[] + Σₙ f^{⊗n} Δ̄^{(n)}(c)`.
pub fn from_corestriction(src: &DGCoalgebra, dst: &DGCoalgebra, f: &[Elem]) -> Result<CoalgebraMap, AlgError> {
    let r = src.ring;
    let ws = dst.words.as_ref().ok_or(AlgError::Invalid("target is not cofree".into()))?;
    let bound = src.conilpotency_bound.ok_or(AlgError::Invalid("source not conilpotent".into()))?;
    let unit = dst.coaugmentation.unwrap();
    let mut images = vec![Elem::new(); src.len()];
    for i in 0..src.len() {
        if Some(i) == src.coaugmentation {
            images[i] = single(r, unit);
            continue;
        }
        let mut acc = Elem::new();
        for n in 1..=bound {
            for (w, c) in src.iterated_reduced(i, n) {
                // f^{⊗n} applied factorwise
                let mut terms: Vec<(Vec<usize>, Scalar)> = vec![(vec![], c)];
                for &k in &w {
                    let mut next = vec![];
                    for (word, coef) in &terms {
                        for (&l, v) in &f[k] {
                            let mut w2 = word.clone();
                            w2.push(l);
                            next.push((w2, r.mul(coef, v)));
                        }
                    }
                    terms = next;
                }
                for (word, coef) in terms {
                    match ws.index(&word) {
                        Some(j) => add_term(r, &mut acc, j, &coef),
                        None if coef.is_zero() => {}
                        None => return Err(AlgError::OutOfWindow(ws.name(&word))),
                    }
                }
            }
        }
        images[i] = acc;
    }
    Ok(CoalgebraMap { images })
}

/// Right comodule with `coaction[i] = ρ(m_i) ∈ M⊗C`.
#[derive(Clone, Debug)]
pub struct Comodule {
    pub coalgebra: Arc<DGCoalgebra>,
    pub names: Vec<String>,
    pub basis: GradedBasis,
    pub d: Vec<Elem>,
    pub coaction: Vec<Elem2>,
    pub complex: ChainComplex,
}

impl Comodule {
    pub fn new(coalgebra: Arc<DGCoalgebra>, names: Vec<String>, degs: Vec<i64>, d: Vec<Elem>, coaction: Vec<Elem2>) -> Comodule {
        let basis = GradedBasis::new(degs);
        let complex = basis.complex(coalgebra.ring, &d);
        Comodule { coalgebra, names, basis, d, coaction, complex }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn deg(&self, i: usize) -> i64 {
        self.basis.degs[i]
    }

    fn d_elem(&self, m: &Elem) -> Elem {
        let r = self.coalgebra.ring;
        let mut out = Elem::new();
        for (&i, c) in m {
            add_into(r, &mut out, &self.d[i], c);
        }
        out
    }

    pub fn coact(&self, m: &Elem) -> Elem2 {
        let r = self.coalgebra.ring;
        let mut out = Elem2::new();
        for (&i, c) in m {
            for (&k, v) in &self.coaction[i] {
                add_term2(r, &mut out, k, &r.mul(c, v));
            }
        }
        out
    }

    fn d2(&self, e: &Elem2) -> Elem2 {
        let r = self.coalgebra.ring;
        let mut out = Elem2::new();
        for (&(m, c), v) in e {
            for (&k, w) in &self.d[m] {
                add_term2(r, &mut out, (k, c), &r.mul(v, w));
            }
            let s = r.mul(v, &sign(r, self.deg(m)));
            for (&k, w) in &self.coalgebra.d[c] {
                add_term2(r, &mut out, (m, k), &r.mul(&s, w));
            }
        }
        out
    }

    pub fn check_chain(&self) -> Result<(), AlgError> {
        for i in 0..self.len() {
            if self.coact(&self.d[i]) != self.d2(&self.coaction[i]) {
                return Err(AlgError::Invalid(format!("coaction not a chain map on {}", self.names[i])));
            }
        }
        Ok(())
    }

    pub fn check_coassociative(&self) -> Result<(), AlgError> {
        let r = self.coalgebra.ring;
        let c = &self.coalgebra;
        for i in 0..self.len() {
            let mut left = Elem3::new();
            let mut right = Elem3::new();
            for (&(m, x), v) in &self.coaction[i] {
                for (&(m2, y), w) in &self.coaction[m] {
                    add_term3(r, &mut left, (m2, y, x), &r.mul(v, w));
                }
                for (&(x1, x2), w) in &c.comult[x] {
                    add_term3(r, &mut right, (m, x1, x2), &r.mul(v, w));
                }
            }
            if left != right {
                return Err(AlgError::Invalid(format!("coaction not coassociative on {}", self.names[i])));
            }
        }
        Ok(())
    }

    pub fn check_counit(&self) -> Result<(), AlgError> {
        let r = self.coalgebra.ring;
        for i in 0..self.len() {
            let mut e = Elem::new();
            for (&(m, x), v) in &self.coaction[i] {
                add_term(r, &mut e, m, &r.mul(v, &self.coalgebra.counit[x]));
            }
            if e != single(r, i) {
                return Err(AlgError::Invalid(format!("counit law fails on {}", self.names[i])));
            }
        }
        Ok(())
    }

    pub fn verify(&self) -> Result<(), AlgError> {
        self.complex.validate().map_err(|e| AlgError::Invalid(e.to_string()))?;
        for i in 0..self.len() {
            for (&(m, x), _) in &self.coaction[i] {
                if self.deg(m) + self.coalgebra.deg(x) != self.deg(i) {
                    return Err(AlgError::Invalid("coaction changes degree".into()));
                }
            }
        }
        self.check_chain()?;
        self.check_coassociative()?;
        self.check_counit()
    }

    /// Images of basis elements form a comodule map into `dst`.
    pub fn is_comodule_map(&self, dst: &Comodule, images: &[Elem]) -> bool {
        let r = self.coalgebra.ring;
        for i in 0..self.len() {
            let mut fd = Elem::new();
            for (&k, c) in &self.d[i] {
                add_into(r, &mut fd, &images[k], c);
            }
            if dst.d_elem(&images[i]) != fd {
                return false;
            }
            let mut lhs = Elem2::new();
            for (&(m, x), v) in &self.coaction[i] {
                for (&k, w) in &images[m] {
                    add_term2(r, &mut lhs, (k, x), &r.mul(v, w));
                }
            }
            if dst.coact(&images[i]) != lhs {
                return false;
            }
        }
        true
    }

    pub fn chain_map(&self, dst: &Comodule, images: &[Elem]) -> ChainMap {
        self.basis.chain_map(self.coalgebra.ring, &self.complex, &dst.basis, &dst.complex, images)
    }
}

fn complex_basis(x: &ChainComplex) -> GradedBasis {
    GradedBasis::new(x.degrees().flat_map(|n| std::iter::repeat_n(n, x.rank(n))).collect())
}

/// `X⊗C` with coaction `id⊗Δ`, basis ordered as in [`crate::chain::tensor`].
pub fn cofree_comodule(x: &ChainComplex, c: Arc<DGCoalgebra>) -> Comodule {
    let r = c.ring;
    let xb = complex_basis(x);
    let xd = letter_differentials(x);
    let order = tensor_order(&xb, &c.basis);
    let pos = tensor_index(&order);
    let xnames: Vec<String> = default_letters(x).into_iter().map(|l| l.name).collect();
    let mut names = vec![];
    let mut degs = vec![];
    let mut d = vec![];
    let mut coaction = vec![];
    for &(a, u) in &order {
        names.push(format!("{}⊗{}", xnames[a], c.names[u]));
        degs.push(xb.degs[a] + c.deg(u));
        let mut e = Elem::new();
        for (&k, v) in &xd[a] {
            add_term(r, &mut e, pos[&(k, u)], v);
        }
        let s = sign(r, xb.degs[a]);
        for (&k, v) in &c.d[u] {
            add_term(r, &mut e, pos[&(a, k)], &r.mul(&s, v));
        }
        d.push(e);
        let mut co = Elem2::new();
        for (&(u1, u2), v) in &c.comult[u] {
            add_term2(r, &mut co, (pos[&(a, u1)], u2), v);
        }
        coaction.push(co);
    }
    Comodule::new(c, names, degs, d, coaction)
}

/// `f̂ = (f⊗1)∘ρ: M → X⊗C` for a chain map `f: M → X`.
pub fn cofree_extension(m: &Comodule, cofree: &Comodule, x: &ChainComplex, f: &ChainMap) -> Vec<Elem> {
    let r = m.coalgebra.ring;
    let xb = complex_basis(x);
    let pos = tensor_index(&tensor_order(&xb, &m.coalgebra.basis));
    let mut offsets = BTreeMap::new();
    let mut off = 0;
    for n in x.degrees() {
        offsets.insert(n, off);
        off += x.rank(n);
    }
    let _ = cofree;
    (0..m.len())
        .map(|i| {
            let mut e = Elem::new();
            for (&(mi, c), v) in &m.coaction[i] {
                let n = m.deg(mi);
                let fm = f.f(n);
                let col = m.basis.local(mi);
                for row in 0..x.rank(n) {
                    let w = fm.get(row, col);
                    if !w.is_zero() {
                        add_term(r, &mut e, pos[&(offsets[&n] + row, c)], &r.mul(v, w));
                    }
                }
            }
            e
        })
        .collect()
}

/// `(1⊗ε): X⊗C → X` as images in the basis of `x`.
pub fn cofree_counit(cofree: &Comodule, x: &ChainComplex) -> ChainMap {
    let r = cofree.coalgebra.ring;
    let xb = complex_basis(x);
    let order = tensor_order(&xb, &cofree.coalgebra.basis);
    let images: Vec<Elem> = order
        .iter()
        .map(|&(a, u)| {
            let mut e = Elem::new();
            add_term(r, &mut e, a, &cofree.coalgebra.counit[u]);
            e
        })
        .collect();
    cofree.basis.chain_map(r, &cofree.complex, &xb, x, &images)
}

/// `M ⊕ N` with `M` first in each degree.
pub fn comodule_direct_sum(m: &Comodule, n: &Comodule) -> (Comodule, Vec<Elem>, Vec<Elem>) {
    let r = m.coalgebra.ring;
    let mut order = vec![];
    let lo = m.complex.lo().min(n.complex.lo());
    let hi = m.complex.hi().max(n.complex.hi());
    for deg in lo..=hi {
        order.extend(m.basis.in_degree(deg).iter().map(|&i| (0u8, i)));
        order.extend(n.basis.in_degree(deg).iter().map(|&i| (1u8, i)));
    }
    let pos: BTreeMap<(u8, usize), usize> = order.iter().enumerate().map(|(k, &p)| (p, k)).collect();
    let mut names = vec![];
    let mut degs = vec![];
    let mut d = vec![];
    let mut coaction = vec![];
    for &(side, i) in &order {
        let src = if side == 0 { m } else { n };
        names.push(format!("{}{}", src.names[i], if side == 0 { "₀" } else { "₁" }));
        degs.push(src.deg(i));
        d.push(src.d[i].iter().map(|(&k, c)| (pos[&(side, k)], c.clone())).collect());
        coaction.push(src.coaction[i].iter().map(|(&(k, x), c)| ((pos[&(side, k)], x), c.clone())).collect());
    }
    let inl = (0..m.len()).map(|i| single(r, pos[&(0, i)])).collect();
    let inr = (0..n.len()).map(|i| single(r, pos[&(1, i)])).collect();
    (Comodule::new(m.coalgebra.clone(), names, degs, d, coaction), inl, inr)
}

pub struct ComoduleCylinder {
    pub sum: Comodule,
    pub cyl: Comodule,
    pub i: Vec<Elem>,
    pub q: Vec<Elem>,
}

/// `M⊗I` with the coaction `(ρ⊗Δ_I)`, middle interchange, then the counit
/// on the interval factor: `ρ(m⊗u) = (-1)^{|u||m₁|} (m₀⊗u)⊗m₁`.
pub fn comodule_cylinder(m: &Comodule) -> ComoduleCylinder {
    let r = m.coalgebra.ring;
    let int = interval_coalgebra(r);
    let order = tensor_order(&m.basis, &int.basis);
    let pos = tensor_index(&order);
    let mut names = vec![];
    let mut degs = vec![];
    let mut d = vec![];
    let mut coaction = vec![];
    for &(mi, u) in &order {
        names.push(format!("{}⊗{}", m.names[mi], int.names[u]));
        degs.push(m.deg(mi) + int.deg(u));
        let mut e = Elem::new();
        for (&k, c) in &m.d[mi] {
            add_term(r, &mut e, pos[&(k, u)], c);
        }
        let s = sign(r, m.deg(mi));
        for (&k, c) in &int.d[u] {
            add_term(r, &mut e, pos[&(mi, k)], &r.mul(&s, c));
        }
        d.push(e);
        let mut co = Elem2::new();
        for (&(m0, x), c) in &m.coaction[mi] {
            let s = sign(r, int.deg(u) * m.coalgebra.deg(x));
            add_term2(r, &mut co, (pos[&(m0, u)], x), &r.mul(&s, c));
        }
        coaction.push(co);
    }
    let cyl = Comodule::new(m.coalgebra.clone(), names, degs, d, coaction);
    let (sum, inl, inr) = comodule_direct_sum(m, m);
    let mut i = vec![Elem::new(); sum.len()];
    for k in 0..m.len() {
        i[*inl[k].keys().next().unwrap()] = single(r, pos[&(k, 0)]);
        i[*inr[k].keys().next().unwrap()] = single(r, pos[&(k, 1)]);
    }
    let q = order.iter().map(|&(mi, u)| if u == 2 { Elem::new() } else { single(r, mi) }).collect();
    ComoduleCylinder { sum, cyl, i, q }
}

impl ComoduleCylinder {
    pub fn matches_chain_cylinder(&self, m: &Comodule) -> bool {
        let c = cylinder(&m.complex);
        self.cyl.complex == c.cyl && self.sum.chain_map(&self.cyl, &self.i) == c.i && self.cyl.chain_map(m, &self.q) == c.q
    }

    pub fn fold_holds(&self, m: &Comodule) -> bool {
        let r = m.coalgebra.ring;
        let qi: Vec<Elem> = self
            .i
            .iter()
            .map(|e| {
                let mut out = Elem::new();
                for (&k, c) in e {
                    add_into(r, &mut out, &self.q[k], c);
                }
                out
            })
            .collect();
        let ds = direct_sum(&m.complex, &m.complex);
        self.sum.chain_map(m, &qi) == ds.pr1.add(&ds.pr2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::sphere;

    #[test]
    fn deconcatenation_of_two_letters() {
        let ring = Ring::fp(3);
        let x = crate::chain::direct_sum(&sphere(1, ring), &sphere(2, ring)).sum;
        let c = cofree_coalgebra(&x, 2);
        let ws = c.words.as_ref().unwrap();
        let xy = ws.index(&[0, 1]).unwrap();
        let e = ws.index(&[]).unwrap();
        let expect = Elem2::from([
            ((xy, e), ring.one()),
            ((ws.index(&[0]).unwrap(), ws.index(&[1]).unwrap()), ring.one()),
            ((e, xy), ring.one()),
        ]);
        assert_eq!(c.comult[xy], expect);
        c.verify().unwrap();
    }

    #[test]
    fn interval_is_a_coalgebra() {
        interval_coalgebra(Ring::Z).verify().unwrap();
    }
}
