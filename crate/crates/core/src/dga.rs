//! Differential graded algebras on finite bases: truncated free algebras
//! with monomial relations, finite multiplication tables, coproducts,
//! augmentations, modules and the acyclicity factorization.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::basis::{add_into, add_term, scale, sign, single, Elem, GradedBasis, Letter, Word, WordSpace};
use crate::chain::{cylinder, ChainComplex, ChainMap};
use crate::exactlin::{is_split_epi, Ring, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgError {
    #[error("d² != 0 on generator {0}")]
    DSquared(String),
    #[error("differential of {0} lowers word length")]
    LowersWeight(String),
    #[error("relations are not closed under d: {0}")]
    RelationsNotClosed(String),
    #[error("out of window: {0}")]
    OutOfWindow(String),
    #[error("no presentation")]
    Unpresented,
    #[error("empty window")]
    EmptyWindow,
    #[error("{0}")]
    Invalid(String),
}

/// Word-length and degree bounds plus the certified window.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TruncationPolicy {
    pub max_weight: usize,
    pub deg_lo: i64,
    pub deg_hi: i64,
}

impl TruncationPolicy {
    pub fn new(max_weight: usize, deg_lo: i64, deg_hi: i64) -> TruncationPolicy {
        TruncationPolicy { max_weight, deg_lo, deg_hi }
    }

    /// Degrees where a degree-truncated subquotient has the true homology.
    pub fn window(&self) -> Option<(i64, i64)> {
        let (a, b) = (self.deg_lo + 1, self.deg_hi - 1);
        (a <= b).then_some((a, b))
    }
}

/// Product of two basis elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Prod {
    Val(Elem),
    /// Longer than the weight bound.
    Weight,
    /// Outside the degree range.
    Degree,
}

impl Prod {
    pub fn val(self) -> Option<Elem> {
        match self {
            Prod::Val(e) => Some(e),
            _ => None,
        }
    }
}

/// Monomial presentation `T(gens)/(relations)` with `d` on generators.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub ring: Ring,
    pub gens: Vec<Letter>,
    pub d: Vec<Vec<(Scalar, Word)>>,
    pub relations: Vec<Word>,
    pub trunc: TruncationPolicy,
    /// Products above the weight bound vanish (quotient by long words)
    /// instead of being reported out of window.
    pub overflow_zero: bool,
}

impl Presentation {
    pub fn new(ring: Ring, gens: Vec<Letter>, d: Vec<Vec<(Scalar, Word)>>, relations: Vec<Word>, trunc: TruncationPolicy) -> Presentation {
        Presentation { ring, gens, d, relations, trunc, overflow_zero: false }
    }

    /// Free algebra on the given generators with zero differential.
    pub fn free(ring: Ring, gens: &[(&str, i64)], trunc: TruncationPolicy) -> Presentation {
        let gens: Vec<Letter> = gens.iter().map(|&(n, d)| Letter { name: n.into(), degree: d }).collect();
        let d = vec![vec![]; gens.len()];
        Presentation::new(ring, gens, d, vec![], trunc)
    }

    pub fn gen_index(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }

    pub fn parse_word(&self, s: &str) -> Result<Word, AlgError> {
        if s == "1" || s.is_empty() {
            return Ok(vec![]);
        }
        s.split('|')
            .map(|t| self.gen_index(t.trim()).ok_or_else(|| AlgError::Invalid(format!("unknown generator {t}"))))
            .collect()
    }

    pub fn to_json(&self) -> Value {
        let ws = WordSpace::new(self.gens.clone(), vec![], 0, 0, 0);
        let gens: Vec<Value> = self.gens.iter().map(|g| json!({"name": g.name, "degree": g.degree})).collect();
        let mut d = Map::new();
        for (g, terms) in self.gens.iter().zip(&self.d) {
            let mut t = Map::new();
            for (c, w) in terms {
                t.insert(ws.name(w), Value::String(self.ring.fmt_scalar(c)));
            }
            d.insert(g.name.clone(), Value::Object(t));
        }
        let rel: Vec<Value> = self.relations.iter().map(|r| Value::String(ws.name(r))).collect();
        json!({
            "ring": self.ring.tag(),
            "generators": gens,
            "d": d,
            "relations": rel,
            "trunc": {"max_weight": self.trunc.max_weight, "deg_lo": self.trunc.deg_lo, "deg_hi": self.trunc.deg_hi},
        })
    }

    pub fn from_json(v: &Value) -> Result<Presentation, AlgError> {
        let bad = |s: &str| AlgError::Invalid(s.to_string());
        let ring = Ring::parse(v.get("ring").and_then(Value::as_str).ok_or_else(|| bad("missing ring"))?)
            .map_err(|e| AlgError::Invalid(e.to_string()))?;
        let mut gens = vec![];
        for g in v.get("generators").and_then(Value::as_array).ok_or_else(|| bad("missing generators"))? {
            let name = g.get("name").and_then(Value::as_str).ok_or_else(|| bad("generator name"))?;
            let degree = g.get("degree").and_then(Value::as_i64).ok_or_else(|| bad("generator degree"))?;
            gens.push(Letter { name: name.into(), degree });
        }
        let t = v.get("trunc").ok_or_else(|| bad("missing trunc"))?;
        let trunc = TruncationPolicy {
            max_weight: t.get("max_weight").and_then(Value::as_u64).ok_or_else(|| bad("max_weight"))? as usize,
            deg_lo: t.get("deg_lo").and_then(Value::as_i64).ok_or_else(|| bad("deg_lo"))?,
            deg_hi: t.get("deg_hi").and_then(Value::as_i64).ok_or_else(|| bad("deg_hi"))?,
        };
        let mut p = Presentation::new(ring, gens.clone(), vec![vec![]; gens.len()], vec![], trunc);
        if let Some(d) = v.get("d").and_then(Value::as_object) {
            for (g, terms) in d {
                let gi = p.gen_index(g).ok_or_else(|| AlgError::Invalid(format!("unknown generator {g}")))?;
                let terms = terms.as_object().ok_or_else(|| bad("d entries must map words to coefficients"))?;
                for (w, c) in terms {
                    let c = c.as_str().ok_or_else(|| bad("coefficients are decimal strings"))?;
                    let c = ring.parse_scalar(c).map_err(|e| AlgError::Invalid(e.to_string()))?;
                    let w = p.parse_word(w)?;
                    p.d[gi].push((c, w));
                }
            }
        }
        if let Some(r) = v.get("relations").and_then(Value::as_array) {
            for w in r {
                let w = w.as_str().ok_or_else(|| bad("relations are words"))?;
                let w = p.parse_word(w)?;
                p.relations.push(w);
            }
        }
        Ok(p)
    }
}

#[derive(Clone, Debug)]
enum Rule {
    Table(Vec<Vec<Prod>>),
    Words { space: WordSpace, overflow_zero: bool },
}

/// A dg algebra on a finite basis. Products leaving the basis are reported
/// as [`Prod::Weight`] or [`Prod::Degree`].
#[derive(Clone, Debug)]
pub struct DGAlgebra {
    pub ring: Ring,
    pub names: Vec<String>,
    pub basis: GradedBasis,
    pub d: Vec<Elem>,
    pub unit: usize,
    pub augmentation: Option<Vec<Scalar>>,
    pub presentation: Option<Presentation>,
    pub complex: ChainComplex,
    rule: Rule,
}

impl DGAlgebra {
    /// Algebra from an explicit table; `mult[i][j]` is `e_i e_j`.
    pub fn from_table(
        ring: Ring,
        names: Vec<String>,
        degs: Vec<i64>,
        d: Vec<Elem>,
        mult: Vec<Vec<Prod>>,
        unit: usize,
        augmentation: Option<Vec<Scalar>>,
    ) -> Result<DGAlgebra, AlgError> {
        let basis = GradedBasis::new(degs);
        let complex = basis.complex(ring, &d);
        complex.validate().map_err(|e| AlgError::Invalid(e.to_string()))?;
        let a = DGAlgebra { ring, names, basis, d, unit, augmentation, presentation: None, complex, rule: Rule::Table(mult) };
        a.verify()?;
        Ok(a)
    }

    /// The ground ring in degree zero.
    pub fn unit_algebra(ring: Ring) -> DGAlgebra {
        free_algebra(&Presentation::free(ring, &[], TruncationPolicy::new(0, 0, 0))).unwrap()
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

    pub fn words(&self) -> Option<&WordSpace> {
        match &self.rule {
            Rule::Words { space, .. } => Some(space),
            Rule::Table(_) => None,
        }
    }

    pub fn mul_basis(&self, i: usize, j: usize) -> Prod {
        match &self.rule {
            Rule::Table(t) => t[i][j].clone(),
            Rule::Words { space, overflow_zero } => {
                let mut w = space.words[i].clone();
                w.extend_from_slice(&space.words[j]);
                word_product(space, *overflow_zero, self.ring, &w)
            }
        }
    }

    /// Product of elements; out of window if any contributing product is.
    pub fn mul(&self, a: &Elem, b: &Elem) -> Prod {
        let mut out = Elem::new();
        for (&i, x) in a {
            for (&j, y) in b {
                match self.mul_basis(i, j) {
                    Prod::Val(e) => add_into(self.ring, &mut out, &e, &self.ring.mul(x, y)),
                    other => return other,
                }
            }
        }
        Prod::Val(out)
    }

    /// Product where weight overflow counts as zero.
    pub fn mul_quotient(&self, a: &Elem, b: &Elem) -> Option<Elem> {
        let mut out = Elem::new();
        for (&i, x) in a {
            for (&j, y) in b {
                match self.mul_basis(i, j) {
                    Prod::Val(e) => add_into(self.ring, &mut out, &e, &self.ring.mul(x, y)),
                    Prod::Weight => {}
                    Prod::Degree => return None,
                }
            }
        }
        Some(out)
    }

    pub fn d_elem(&self, a: &Elem) -> Elem {
        let mut out = Elem::new();
        for (&i, c) in a {
            add_into(self.ring, &mut out, &self.d[i], c);
        }
        out
    }

    /// Basis index of a word, when the algebra is word-based.
    pub fn word(&self, w: &[usize]) -> Option<usize> {
        self.words()?.index(w)
    }

    pub fn elem_word(&self, w: &[usize]) -> Elem {
        self.word(w).map(|i| single(self.ring, i)).unwrap_or_default()
    }

    /// No product of basis elements leaves the basis.
    pub fn is_exact(&self) -> bool {
        (0..self.len()).all(|i| (0..self.len()).all(|j| matches!(self.mul_basis(i, j), Prod::Val(_))))
    }

    /// Leibniz rule on every pair whose product and differential stay in
    /// the truncation.
    pub fn check_leibniz(&self) -> Result<(), AlgError> {
        let lo = self.complex.lo();
        for i in 0..self.len() {
            for j in 0..self.len() {
                let n = self.deg(i) + self.deg(j);
                if n - 1 < lo {
                    continue;
                }
                let Prod::Val(ab) = self.mul_basis(i, j) else { continue };
                let lhs = self.d_elem(&ab);
                let (ei, ej) = (single(self.ring, i), single(self.ring, j));
                let Some(t1) = self.mul_quotient(&self.d[i], &ej) else { continue };
                let Some(t2) = self.mul_quotient(&ei, &self.d[j]) else { continue };
                let mut rhs = t1;
                add_into(self.ring, &mut rhs, &t2, &sign(self.ring, self.deg(i)));
                let lhs = truncate_weight(self, lhs);
                if lhs != truncate_weight(self, rhs) {
                    return Err(AlgError::Invalid(format!("Leibniz fails on {} * {}", self.names[i], self.names[j])));
                }
            }
        }
        Ok(())
    }

    pub fn check_associative(&self) -> Result<(), AlgError> {
        if matches!(self.rule, Rule::Words { .. }) {
            return Ok(());
        }
        let r = self.ring;
        for i in 0..self.len() {
            for j in 0..self.len() {
                let Prod::Val(ij) = self.mul_basis(i, j) else { continue };
                for k in 0..self.len() {
                    let Prod::Val(jk) = self.mul_basis(j, k) else { continue };
                    let (Prod::Val(a), Prod::Val(b)) = (self.mul(&ij, &single(r, k)), self.mul(&single(r, i), &jk)) else {
                        continue;
                    };
                    if a != b {
                        return Err(AlgError::Invalid(format!(
                            "associativity fails on {} {} {}",
                            self.names[i], self.names[j], self.names[k]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn check_unit(&self) -> Result<(), AlgError> {
        if self.deg(self.unit) != 0 || !self.d[self.unit].is_empty() {
            return Err(AlgError::Invalid("unit must be a degree-zero cycle".into()));
        }
        for i in 0..self.len() {
            let e = single(self.ring, i);
            if self.mul_basis(self.unit, i) != Prod::Val(e.clone()) || self.mul_basis(i, self.unit) != Prod::Val(e) {
                return Err(AlgError::Invalid(format!("unit law fails on {}", self.names[i])));
            }
        }
        Ok(())
    }

    pub fn check_augmentation(&self) -> Result<(), AlgError> {
        let Some(eps) = &self.augmentation else { return Ok(()) };
        let r = self.ring;
        let ev = |e: &Elem| e.iter().fold(Scalar::zero(), |acc, (&i, c)| r.add(&acc, &r.mul(c, &eps[i])));
        if eps[self.unit] != r.one() {
            return Err(AlgError::Invalid("augmentation of unit".into()));
        }
        for i in 0..self.len() {
            if self.deg(i) != 0 && !eps[i].is_zero() {
                return Err(AlgError::Invalid("augmentation not of degree zero".into()));
            }
            if !ev(&self.d[i]).is_zero() {
                return Err(AlgError::Invalid("augmentation not a chain map".into()));
            }
            for j in 0..self.len() {
                if let Prod::Val(p) = self.mul_basis(i, j) {
                    if ev(&p) != r.mul(&eps[i], &eps[j]) {
                        return Err(AlgError::Invalid("augmentation not multiplicative".into()));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn verify(&self) -> Result<(), AlgError> {
        self.complex.validate().map_err(|e| AlgError::Invalid(e.to_string()))?;
        self.check_unit()?;
        self.check_leibniz()?;
        self.check_associative()?;
        self.check_augmentation()
    }

    /// Basis of the augmentation ideal: basis elements with `ε = 0` after
    /// subtracting `ε(a)·1`; for the algebras here every non-unit basis
    /// element has augmentation zero.
    pub fn augmentation_ideal(&self) -> Result<Vec<usize>, AlgError> {
        let eps = self.augmentation.as_ref().ok_or(AlgError::Invalid("not augmented".into()))?;
        let out: Vec<usize> = (0..self.len()).filter(|&i| i != self.unit).collect();
        if out.iter().any(|&i| !eps[i].is_zero()) {
            return Err(AlgError::Invalid("augmentation must vanish off the unit".into()));
        }
        Ok(out)
    }

    /// Multiplication as a chain map `A⊗A → A`; only for exact algebras.
    pub fn mult_map(&self) -> Result<ChainMap, AlgError> {
        let (t, lay) = crate::chain::tensor_with_layout(&self.complex, &self.complex);
        let mut f = BTreeMap::new();
        for n in t.degrees() {
            let mut m = crate::exactlin::Matrix::zeros(self.ring, self.complex.rank(n), t.rank(n));
            for &(i, _) in lay.blocks(n) {
                for (a, &bi) in self.basis.in_degree(i).iter().enumerate() {
                    for (b, &bj) in self.basis.in_degree(n - i).iter().enumerate() {
                        let Prod::Val(p) = self.mul_basis(bi, bj) else {
                            return Err(AlgError::OutOfWindow(format!("{} * {}", self.names[bi], self.names[bj])));
                        };
                        let col = lay.index(i, a, n - i, b);
                        for (&k, c) in &p {
                            m.set(self.basis.local(k), col, c.clone());
                        }
                    }
                }
            }
            f.insert(n, m);
        }
        ChainMap::from_parts(t, self.complex.clone(), f).map_err(|e| AlgError::Invalid(e.to_string()))
    }
}

fn truncate_weight(a: &DGAlgebra, e: Elem) -> Elem {
    e
        .into_iter()
        .filter(|(i, _)| a.words().is_none_or(|ws| ws.words[*i].len() <= ws.max_weight))
        .collect()
}

fn word_product(space: &WordSpace, overflow_zero: bool, ring: Ring, w: &[usize]) -> Prod {
    if space.contains_relation(w) {
        return Prod::Val(Elem::new());
    }
    if w.len() > space.max_weight {
        return if overflow_zero { Prod::Val(Elem::new()) } else { Prod::Weight };
    }
    match space.index(w) {
        Some(i) => Prod::Val(single(ring, i)),
        None => Prod::Degree,
    }
}

/// Differential of a word by the Leibniz rule, dropping words above the
/// weight bound and words containing relations. `None` if a term leaves
/// the degree range from above.
fn d_word(p: &Presentation, space: &WordSpace, w: &[usize]) -> Result<Elem, Word> {
    let ring = p.ring;
    let mut out = Elem::new();
    let mut pre = 0i64;
    for (i, &g) in w.iter().enumerate() {
        let s = sign(ring, pre);
        for (c, dw) in &p.d[g] {
            let mut nw = w[..i].to_vec();
            nw.extend_from_slice(dw);
            nw.extend_from_slice(&w[i + 1..]);
            if nw.len() > space.max_weight || space.contains_relation(&nw) {
                continue;
            }
            match space.index(&nw) {
                Some(k) => add_term(ring, &mut out, k, &ring.mul(&s, c)),
                None => {
                    if space.degree(&nw) >= space.deg_lo {
                        return Err(nw);
                    }
                }
            }
        }
        pre += space.letters[g].degree;
    }
    Ok(out)
}

/// Truncated free algebra `T(gens)/(relations)` on words of length at most
/// `max_weight` in the degree range, with concatenation product.
pub fn free_algebra(p: &Presentation) -> Result<DGAlgebra, AlgError> {
    let ring = p.ring;
    for (g, terms) in p.gens.iter().zip(&p.d) {
        for (_, w) in terms {
            if w.is_empty() {
                return Err(AlgError::LowersWeight(g.name.clone()));
            }
            let deg: i64 = w.iter().map(|&k| p.gens[k].degree).sum();
            if deg != g.degree - 1 {
                return Err(AlgError::Invalid(format!("d{} has a term of the wrong degree", g.name)));
            }
        }
    }
    // d² = 0 and closure of relations, computed without truncation
    let big = WordSpace::new(p.gens.clone(), vec![], 0, i64::MIN / 4, i64::MAX / 4);
    let full = |w: &[usize]| -> Vec<(Scalar, Word)> { d_word_free(p, w) };
    for (gi, g) in p.gens.iter().enumerate() {
        let mut acc: BTreeMap<Word, Scalar> = BTreeMap::new();
        for (c, w) in &p.d[gi] {
            for (c2, w2) in full(w) {
                if contains_any(&p.relations, &w2) {
                    continue;
                }
                let e = acc.entry(w2).or_insert_with(Scalar::zero);
                *e = ring.add(e, &ring.mul(c, &c2));
            }
        }
        if acc.values().any(|v| !v.is_zero()) {
            return Err(AlgError::DSquared(g.name.clone()));
        }
    }
    for r in &p.relations {
        for (_, w) in d_word_free(p, r) {
            if !contains_any(&p.relations, &w) {
                return Err(AlgError::RelationsNotClosed(big.name(r)));
            }
        }
    }
    let t = p.trunc;
    let space = WordSpace::new(p.gens.clone(), p.relations.clone(), t.max_weight, t.deg_lo, t.deg_hi);
    let mut d = Vec::with_capacity(space.len());
    for w in &space.words {
        let e = d_word(p, &space, w).map_err(|w| AlgError::OutOfWindow(space.name(&w)))?;
        d.push(e);
    }
    let names = space.words.iter().map(|w| space.name(w)).collect();
    let unit = space.index(&[]).ok_or(AlgError::EmptyWindow)?;
    let mut eps = vec![Scalar::zero(); space.len()];
    eps[unit] = ring.one();
    let complex = space.basis.complex(ring, &d);
    Ok(DGAlgebra {
        ring,
        names,
        basis: space.basis.clone(),
        d,
        unit,
        augmentation: Some(eps),
        presentation: Some(p.clone()),
        complex,
        rule: Rule::Words { space, overflow_zero: p.overflow_zero },
    })
}

fn contains_any(rel: &[Word], w: &[usize]) -> bool {
    rel.iter().any(|r| !r.is_empty() && w.windows(r.len()).any(|s| s == r.as_slice()))
}

fn d_word_free(p: &Presentation, w: &[usize]) -> Vec<(Scalar, Word)> {
    let mut out = vec![];
    let mut pre = 0i64;
    for (i, &g) in w.iter().enumerate() {
        let s = sign(p.ring, pre);
        for (c, dw) in &p.d[g] {
            let mut nw = w[..i].to_vec();
            nw.extend_from_slice(dw);
            nw.extend_from_slice(&w[i + 1..]);
            out.push((p.ring.mul(&s, c), nw));
        }
        pre += p.gens[g].degree;
    }
    out
}

/// Free product of two presented algebras: union of generators and
/// relations, bounds taken as the larger of the two.
pub fn algebra_coproduct(a: &DGAlgebra, b: &DGAlgebra) -> Result<(DGAlgebra, AlgebraMap, AlgebraMap), AlgError> {
    let pa = a.presentation.as_ref().ok_or(AlgError::Unpresented)?;
    let pb = b.presentation.as_ref().ok_or(AlgError::Unpresented)?;
    let off = pa.gens.len();
    let shift = |w: &Word| w.iter().map(|&k| k + off).collect::<Word>();
    let mut gens = pa.gens.clone();
    gens.extend(pb.gens.iter().cloned());
    let mut d = pa.d.clone();
    d.extend(pb.d.iter().map(|t| t.iter().map(|(c, w)| (c.clone(), shift(w))).collect()));
    let mut rel = pa.relations.clone();
    rel.extend(pb.relations.iter().map(shift));
    let trunc = TruncationPolicy {
        max_weight: pa.trunc.max_weight.max(pb.trunc.max_weight),
        deg_lo: pa.trunc.deg_lo.min(pb.trunc.deg_lo),
        deg_hi: pa.trunc.deg_hi.max(pb.trunc.deg_hi),
    };
    let mut p = Presentation::new(a.ring, gens, d, rel, trunc);
    p.overflow_zero = pa.overflow_zero && pb.overflow_zero;
    let c = free_algebra(&p)?;
    let ia = word_inclusion(a, &c, |w| w.to_vec());
    let ib = word_inclusion(b, &c, |w| shift(&w.to_vec()));
    Ok((c, ia, ib))
}

fn word_inclusion(src: &DGAlgebra, dst: &DGAlgebra, f: impl Fn(&[usize]) -> Word) -> AlgebraMap {
    let ws = src.words().expect("presented");
    AlgebraMap { images: ws.words.iter().map(|w| dst.elem_word(&f(w))).collect() }
}

/// Degree-zero map given by images of basis elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraMap {
    pub images: Vec<Elem>,
}

impl AlgebraMap {
    pub fn apply(&self, ring: Ring, e: &Elem) -> Elem {
        let mut out = Elem::new();
        for (&i, c) in e {
            add_into(ring, &mut out, &self.images[i], c);
        }
        out
    }

    pub fn chain_map(&self, src: &DGAlgebra, dst: &DGAlgebra) -> ChainMap {
        src.basis.chain_map(src.ring, &src.complex, &dst.basis, &dst.complex, &self.images)
    }

    /// Multiplicative extension of images of generators, for word algebras.
    pub fn from_generators(src: &DGAlgebra, dst: &DGAlgebra, gen_images: &[Elem]) -> Result<AlgebraMap, AlgError> {
        let ws = src.words().ok_or(AlgError::Unpresented)?;
        let mut images = Vec::with_capacity(ws.len());
        for w in &ws.words {
            let mut acc = single(dst.ring, dst.unit);
            for &g in w {
                acc = match dst.mul(&acc, &gen_images[g]) {
                    Prod::Val(e) => e,
                    _ => return Err(AlgError::OutOfWindow(ws.name(w))),
                };
            }
            images.push(acc);
        }
        Ok(AlgebraMap { images })
    }

    /// Chain map, unital and multiplicative on every pair with both products
    /// in window.
    pub fn check(&self, src: &DGAlgebra, dst: &DGAlgebra) -> Result<(), AlgError> {
        let r = src.ring;
        for i in 0..src.len() {
            for (&k, _) in &self.images[i] {
                if dst.deg(k) != src.deg(i) {
                    return Err(AlgError::Invalid(format!("{} changes degree", src.names[i])));
                }
            }
            if src.deg(i) - 1 >= src.complex.lo() && dst.d_elem(&self.images[i]) != self.apply(r, &src.d[i]) {
                return Err(AlgError::Invalid(format!("not a chain map on {}", src.names[i])));
            }
        }
        if self.images[src.unit] != single(r, dst.unit) {
            return Err(AlgError::Invalid("not unital".into()));
        }
        for i in 0..src.len() {
            for j in 0..src.len() {
                let Prod::Val(ab) = src.mul_basis(i, j) else { continue };
                let Prod::Val(fafb) = dst.mul(&self.images[i], &self.images[j]) else { continue };
                if self.apply(r, &ab) != fafb {
                    return Err(AlgError::Invalid(format!("not multiplicative on {} * {}", src.names[i], src.names[j])));
                }
            }
        }
        Ok(())
    }
}

/// `A → A ∐ F(B ⊕ s⁻¹B, D) → B` with `D b = s⁻¹b`, `q(b) = b`,
/// `q(s⁻¹b) = d b`.
pub struct AcyclicityFactorization {
    pub middle: DGAlgebra,
    pub contractible: DGAlgebra,
    pub first: AlgebraMap,
    pub second: AlgebraMap,
    pub window: (i64, i64),
}

pub fn acyclicity_factorization(
    a: &DGAlgebra,
    b: &DGAlgebra,
    i: &AlgebraMap,
    trunc: TruncationPolicy,
) -> Result<AcyclicityFactorization, AlgError> {
    let ring = a.ring;
    let pa = a.presentation.as_ref().ok_or(AlgError::Unpresented)?;
    let window = trunc.window().ok_or(AlgError::EmptyWindow)?;
    // F(B ⊕ s⁻¹B, D): letters b_k then s⁻¹b_k
    let nb = b.len();
    let mut gens = vec![];
    for k in 0..nb {
        gens.push(Letter { name: format!("[{}]", b.names[k]), degree: b.deg(k) });
    }
    for k in 0..nb {
        gens.push(Letter { name: format!("s⁻¹[{}]", b.names[k]), degree: b.deg(k) - 1 });
    }
    let mut dgen: Vec<Vec<(Scalar, Word)>> = (0..nb).map(|k| vec![(ring.one(), vec![nb + k])]).collect();
    dgen.extend((0..nb).map(|_| vec![]));
    let pf = Presentation::new(ring, gens, dgen, vec![], trunc);
    let f = free_algebra(&pf)?;
    let pa_t = Presentation { trunc, ..pa.clone() };
    let a_t = free_algebra(&pa_t)?;
    let (middle, ia, _) = algebra_coproduct(&a_t, &f)?;
    // first map: A → middle on the original truncation of A
    let first = word_inclusion(a, &middle, |w| w.to_vec());
    // second map on generators
    let na = pa.gens.len();
    let mut gen_images = vec![];
    for g in 0..na {
        let k = a.word(&[g]).ok_or(AlgError::OutOfWindow(pa.gens[g].name.clone()))?;
        gen_images.push(i.images[k].clone());
    }
    for k in 0..nb {
        gen_images.push(single(ring, k));
    }
    for k in 0..nb {
        gen_images.push(b.d[k].clone());
    }
    let second = AlgebraMap::from_generators(&middle, b, &gen_images)?;
    let _ = ia;
    Ok(AcyclicityFactorization { middle, contractible: f, first, second, window })
}

/// Right dg module over an algebra, with `action[i][j] = m_i · a_j`.
#[derive(Clone, Debug)]
pub struct DGModule {
    pub algebra: Arc<DGAlgebra>,
    pub names: Vec<String>,
    pub basis: GradedBasis,
    pub d: Vec<Elem>,
    pub action: Vec<Vec<Prod>>,
    pub complex: ChainComplex,
}

impl DGModule {
    pub fn new(algebra: Arc<DGAlgebra>, names: Vec<String>, degs: Vec<i64>, d: Vec<Elem>, action: Vec<Vec<Prod>>) -> DGModule {
        let basis = GradedBasis::new(degs);
        let complex = basis.complex(algebra.ring, &d);
        DGModule { algebra, names, basis, d, action, complex }
    }

    /// `A` as a right module over itself.
    pub fn regular(a: Arc<DGAlgebra>) -> DGModule {
        let action = (0..a.len()).map(|i| (0..a.len()).map(|j| a.mul_basis(i, j)).collect()).collect();
        DGModule::new(a.clone(), a.names.clone(), a.basis.degs.clone(), a.d.clone(), action)
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

    pub fn act(&self, m: &Elem, a: &Elem) -> Prod {
        let ring = self.algebra.ring;
        let mut out = Elem::new();
        for (&i, x) in m {
            for (&j, y) in a {
                match &self.action[i][j] {
                    Prod::Val(e) => add_into(ring, &mut out, e, &ring.mul(x, y)),
                    other => return other.clone(),
                }
            }
        }
        Prod::Val(out)
    }

    fn d_elem(&self, m: &Elem) -> Elem {
        let ring = self.algebra.ring;
        let mut out = Elem::new();
        for (&i, c) in m {
            add_into(ring, &mut out, &self.d[i], c);
        }
        out
    }

    /// Action is a chain map, associative and unital wherever defined.
    pub fn verify(&self) -> Result<(), AlgError> {
        let a = &self.algebra;
        let ring = a.ring;
        self.complex.validate().map_err(|e| AlgError::Invalid(e.to_string()))?;
        let lo = self.complex.lo();
        for i in 0..self.len() {
            let mi = single(ring, i);
            if self.action[i][a.unit] != Prod::Val(mi.clone()) {
                return Err(AlgError::Invalid(format!("unit acts nontrivially on {}", self.names[i])));
            }
            for j in 0..a.len() {
                let Prod::Val(mj) = &self.action[i][j] else { continue };
                if self.deg(i) + a.deg(j) - 1 >= lo {
                    let lhs = self.d_elem(mj);
                    let (Prod::Val(t1), Prod::Val(t2)) =
                        (self.act(&self.d[i], &single(ring, j)), self.act(&mi, &a.d[j]))
                    else {
                        continue;
                    };
                    let mut rhs = t1;
                    add_into(ring, &mut rhs, &t2, &sign(ring, self.deg(i)));
                    if lhs != rhs {
                        return Err(AlgError::Invalid(format!("action not a chain map on {}·{}", self.names[i], a.names[j])));
                    }
                }
                for k in 0..a.len() {
                    let Prod::Val(ab) = a.mul_basis(j, k) else { continue };
                    let (Prod::Val(l), Prod::Val(r)) = (self.act(mj, &single(ring, k)), self.act(&mi, &ab)) else {
                        continue;
                    };
                    if l != r {
                        return Err(AlgError::Invalid("action not associative".into()));
                    }
                }
            }
        }
        Ok(())
    }

    /// Checks that images of basis elements define a module map.
    pub fn is_module_map(&self, dst: &DGModule, images: &[Elem]) -> bool {
        let ring = self.algebra.ring;
        let apply = |e: &Elem| {
            let mut out = Elem::new();
            for (&i, c) in e {
                add_into(ring, &mut out, &images[i], c);
            }
            out
        };
        for i in 0..self.len() {
            if dst.d_elem(&images[i]) != apply(&self.d[i]) && self.deg(i) - 1 >= self.complex.lo() {
                return false;
            }
            for j in 0..self.algebra.len() {
                let Prod::Val(ma) = &self.action[i][j] else { continue };
                let Prod::Val(fa) = dst.act(&images[i], &single(ring, j)) else { continue };
                if apply(ma) != fa {
                    return false;
                }
            }
        }
        true
    }

    pub fn chain_map(&self, dst: &DGModule, images: &[Elem]) -> ChainMap {
        self.basis.chain_map(self.algebra.ring, &self.complex, &dst.basis, &dst.complex, images)
    }
}

/// `M ⊕ N`, basis of `M` before `N` in each degree.
pub fn module_direct_sum(m: &DGModule, n: &DGModule) -> (DGModule, Vec<Elem>, Vec<Elem>) {
    let ring = m.algebra.ring;
    let mut order = vec![];
    let lo = m.complex.lo().min(n.complex.lo());
    let hi = m.complex.hi().max(n.complex.hi());
    for deg in lo..=hi {
        order.extend(m.basis.in_degree(deg).iter().map(|&i| (0, i)));
        order.extend(n.basis.in_degree(deg).iter().map(|&i| (1, i)));
    }
    let pos: BTreeMap<(u8, usize), usize> = order.iter().enumerate().map(|(k, &p)| (p, k)).collect();
    let remap = |side: u8, e: &Elem| -> Elem { e.iter().map(|(&i, c)| (pos[&(side, i)], c.clone())).collect() };
    let mut names = vec![];
    let mut degs = vec![];
    let mut d = vec![];
    let mut action = vec![];
    for &(side, i) in &order {
        let src = if side == 0 { m } else { n };
        names.push(format!("{}{}", src.names[i], if side == 0 { "₀" } else { "₁" }));
        degs.push(src.deg(i));
        d.push(remap(side, &src.d[i]));
        action.push(
            src.action[i]
                .iter()
                .map(|p| match p {
                    Prod::Val(e) => Prod::Val(remap(side, e)),
                    o => o.clone(),
                })
                .collect(),
        );
    }
    let inl = (0..m.len()).map(|i| single(ring, pos[&(0, i)])).collect();
    let inr = (0..n.len()).map(|i| single(ring, pos[&(1, i)])).collect();
    (DGModule::new(m.algebra.clone(), names, degs, d, action), inl, inr)
}

/// `M⊗I` with `(m⊗u)·a = (-1)^{|u||a|} (m·a)⊗u`, together with
/// `i: M⊕M → M⊗I` and `q: M⊗I → M` as images of basis elements.
pub struct ModuleCylinder {
    pub sum: DGModule,
    pub cyl: DGModule,
    pub i: Vec<Elem>,
    pub q: Vec<Elem>,
}

pub fn module_cylinder(m: &DGModule) -> ModuleCylinder {
    let ring = m.algebra.ring;
    let a = &m.algebra;
    // interval basis: ∂₀t, ∂₁t in degree 0, t in degree 1
    let idegs = [0i64, 0, 1];
    let inames = ["∂₀t", "∂₁t", "t"];
    let mut order = vec![];
    let lo = m.complex.lo();
    let hi = m.complex.hi() + 1;
    for n in lo..=hi {
        for i in m.complex.degrees() {
            for &mi in m.basis.in_degree(i) {
                for (u, &du) in idegs.iter().enumerate() {
                    if i + du == n {
                        order.push((mi, u));
                    }
                }
            }
        }
    }
    let pos: BTreeMap<(usize, usize), usize> = order.iter().enumerate().map(|(k, &p)| (p, k)).collect();
    let mut names = vec![];
    let mut degs = vec![];
    let mut d = vec![];
    let mut action = vec![];
    for &(mi, u) in &order {
        names.push(format!("{}⊗{}", m.names[mi], inames[u]));
        degs.push(m.deg(mi) + idegs[u]);
        let mut e = Elem::new();
        for (&k, c) in &m.d[mi] {
            add_term(ring, &mut e, pos[&(k, u)], c);
        }
        if u == 2 {
            let s = sign(ring, m.deg(mi));
            add_term(ring, &mut e, pos[&(mi, 0)], &s);
            add_term(ring, &mut e, pos[&(mi, 1)], &ring.neg(&s));
        }
        d.push(e);
        let row = (0..a.len())
            .map(|j| match &m.action[mi][j] {
                Prod::Val(p) => {
                    let s = sign(ring, idegs[u] * a.deg(j));
                    let mut e = Elem::new();
                    for (&k, c) in p {
                        add_term(ring, &mut e, pos[&(k, u)], &ring.mul(&s, c));
                    }
                    Prod::Val(e)
                }
                o => o.clone(),
            })
            .collect();
        action.push(row);
    }
    let cyl = DGModule::new(m.algebra.clone(), names, degs, d, action);
    let (sum, inl, inr) = module_direct_sum(m, m);
    let mut i = vec![Elem::new(); sum.len()];
    for k in 0..m.len() {
        let l = *inl[k].keys().next().unwrap();
        let r = *inr[k].keys().next().unwrap();
        i[l] = single(ring, pos[&(k, 0)]);
        i[r] = single(ring, pos[&(k, 1)]);
    }
    let q = order.iter().map(|&(mi, u)| if u == 2 { Elem::new() } else { single(ring, mi) }).collect();
    ModuleCylinder { sum, cyl, i, q }
}

impl ModuleCylinder {
    /// The underlying chain-level cylinder agrees with [`cylinder`].
    pub fn matches_chain_cylinder(&self, m: &DGModule) -> bool {
        let c = cylinder(&m.complex);
        let i = self.sum.chain_map(&self.cyl, &self.i);
        let q = self.cyl.chain_map(m, &self.q);
        self.cyl.complex == c.cyl && i == c.i && q == c.q
    }

    /// `q ∘ i` is the fold map `M⊕M → M`.
    pub fn fold_holds(&self, m: &DGModule) -> bool {
        let ring = m.algebra.ring;
        let qi: Vec<Elem> = self
            .i
            .iter()
            .map(|e| {
                let mut out = Elem::new();
                for (&k, c) in e {
                    add_into(ring, &mut out, &self.q[k], c);
                }
                out
            })
            .collect();
        let fold = crate::chain::direct_sum(&m.complex, &m.complex);
        let f = fold.pr1.add(&fold.pr2);
        self.sum.chain_map(m, &qi) == f
    }
}

/// Degreewise surjectivity of a map inside a window.
pub fn surjective_in_window(f: &ChainMap, window: (i64, i64)) -> bool {
    (window.0..=window.1).all(|n| is_split_epi(&f.f(n)))
}

pub fn scale_elem(ring: Ring, e: &Elem, c: &Scalar) -> Elem {
    scale(ring, e, c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_algebra_is_ring() {
        let r = DGAlgebra::unit_algebra(Ring::fp(3));
        assert_eq!(r.len(), 1);
        assert_eq!(r.complex, crate::chain::ChainComplex::unit(Ring::fp(3)));
    }

    #[test]
    fn one_odd_generator_counts() {
        let p = Presentation::free(Ring::Q, &[("x", 1)], TruncationPolicy::new(3, 0, 3));
        let a = free_algebra(&p).unwrap();
        assert_eq!(a.complex.ranks(), BTreeMap::from([(0, 1), (1, 1), (2, 1), (3, 1)]));
        a.verify().unwrap();
    }

    #[test]
    fn d_squared_rejected() {
        let ring = Ring::fp(5);
        let gens = vec![Letter { name: "x".into(), degree: 3 }, Letter { name: "y".into(), degree: 1 }];
        // dx = y·y, dy = 0: d²x = dy·y - y·dy = 0, valid
        let p = Presentation::new(ring, gens.clone(), vec![vec![(ring.one(), vec![1, 1])], vec![]], vec![], TruncationPolicy::new(3, 0, 4));
        assert!(free_algebra(&p).is_ok());
        // dz = x with |z| = 4 and dx = y·y: d²z = y·y ≠ 0
        let mut g2 = gens.clone();
        g2.push(Letter { name: "z".into(), degree: 4 });
        let p = Presentation::new(
            ring,
            g2,
            vec![vec![(ring.one(), vec![1, 1])], vec![], vec![(ring.one(), vec![0])]],
            vec![],
            TruncationPolicy::new(3, 0, 4),
        );
        assert_eq!(free_algebra(&p).unwrap_err(), AlgError::DSquared("z".into()));
    }
}
