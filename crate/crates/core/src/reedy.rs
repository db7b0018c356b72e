//! Finite Reedy categories given by tables, chain-complex-valued diagrams,
//! latching and matching objects, the Reedy classes, pointwise Kan
//! extensions along the inclusions of `Ob R`, `R⁺`, `R⁻`, and the
//! presentation of diagrams as bialgebras for `T = UL` and `K = VR`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::basis::add_term;
use crate::bialg::distlaw::{DistLawData, Op, SparseArrow};
use crate::chain::{ChainComplex, ChainMap};
use crate::exactlin::{complement_indices, image_basis, kernel_basis, solve_linear, Matrix, Ring, Scalar};
use crate::random::{chain_map, complex, Bounds, CaseRng};
use crate::wfs::{is_cofibration, is_fibration, is_homotopy_equivalence};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReedyError {
    #[error("invalid category: {0}")]
    Category(String),
    #[error("truncation n = {0} exceeds the size guard 3")]
    TooLarge(usize),
    #[error("not a functor: {0}")]
    Functoriality(String),
    #[error("not natural: {0}")]
    Naturality(String),
    #[error("colimits and limits need a field, got {0}")]
    NotField(String),
    #[error("{0}")]
    Invalid(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tag {
    Identity,
    Plus,
    Minus,
    /// Neither degree-raising nor degree-lowering.
    Mixed,
}

impl Tag {
    pub fn as_str(&self) -> &'static str {
        match self {
            Tag::Identity => "identity",
            Tag::Plus => "plus",
            Tag::Minus => "minus",
            Tag::Mixed => "mixed",
        }
    }

    fn parse(s: &str) -> Option<Tag> {
        Some(match s {
            "identity" => Tag::Identity,
            "plus" => Tag::Plus,
            "minus" => Tag::Minus,
            "mixed" => Tag::Mixed,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Object {
    pub name: String,
    pub degree: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    pub name: String,
    pub src: usize,
    pub dst: usize,
    pub tag: Tag,
}

/// Which morphisms a diagram is defined on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Part {
    Ob,
    Plus,
    Minus,
    All,
}

impl Part {
    pub fn contains(&self, other: Part) -> bool {
        *self == other || other == Part::Ob || *self == Part::All
    }
}

/// A finite category with degrees, tagged morphisms, a composition table
/// and the factorization of every morphism as minus then plus.
#[derive(Clone, Debug)]
pub struct ReedyCategory {
    pub objects: Vec<Object>,
    pub morphisms: Vec<Morphism>,
    compose: HashMap<(usize, usize), usize>,
    factor: Vec<(usize, usize)>,
    identities: Vec<usize>,
    by_name: HashMap<String, usize>,
}

impl ReedyCategory {
    /// `compose[(g, f)] = g∘f`; `factor[m] = (q, i)` with `m = i∘q`.
    pub fn new(
        objects: Vec<Object>,
        morphisms: Vec<Morphism>,
        compose: HashMap<(usize, usize), usize>,
        factor: Vec<(usize, usize)>,
    ) -> Result<ReedyCategory, ReedyError> {
        let bad = |s: String| Err(ReedyError::Category(s));
        let mut by_name = HashMap::new();
        for (k, m) in morphisms.iter().enumerate() {
            if m.src >= objects.len() || m.dst >= objects.len() {
                return bad(format!("{} has an unknown endpoint", m.name));
            }
            if by_name.insert(m.name.clone(), k).is_some() {
                return bad(format!("duplicate morphism name {}", m.name));
            }
        }
        let mut identities = vec![usize::MAX; objects.len()];
        for (k, m) in morphisms.iter().enumerate() {
            if m.tag == Tag::Identity {
                if m.src != m.dst || identities[m.src] != usize::MAX {
                    return bad(format!("{} is not the unique identity of its object", m.name));
                }
                identities[m.src] = k;
            }
        }
        if let Some(x) = identities.iter().position(|&i| i == usize::MAX) {
            return bad(format!("object {} has no identity", objects[x].name));
        }
        if factor.len() != morphisms.len() {
            return bad("one factorization per morphism".into());
        }
        let c = ReedyCategory { objects, morphisms, compose, factor, identities, by_name };
        c.validate()?;
        Ok(c)
    }

    fn validate(&self) -> Result<(), ReedyError> {
        let bad = |s: String| Err(ReedyError::Category(s));
        let ms = &self.morphisms;
        let n = ms.len();
        for (&(g, f), &h) in &self.compose {
            if g >= n || f >= n || h >= n || ms[f].dst != ms[g].src {
                return bad(format!("composition entry ({g}, {f}) is not composable"));
            }
            if ms[h].src != ms[f].src || ms[h].dst != ms[g].dst {
                return bad(format!("{} ∘ {} has the wrong endpoints", ms[g].name, ms[f].name));
            }
        }
        for g in 0..n {
            for f in 0..n {
                if ms[f].dst == ms[g].src && !self.compose.contains_key(&(g, f)) {
                    return bad(format!("{} ∘ {} is missing", ms[g].name, ms[f].name));
                }
            }
        }
        for f in 0..n {
            if self.comp(self.identities[ms[f].dst], f) != f || self.comp(f, self.identities[ms[f].src]) != f {
                return bad(format!("identity law fails at {}", ms[f].name));
            }
        }
        for h in 0..n {
            for g in self.into_src(h) {
                for f in self.into_src(g) {
                    if self.comp(h, self.comp(g, f)) != self.comp(self.comp(h, g), f) {
                        return bad(format!("associativity fails at {}, {}, {}", ms[h].name, ms[g].name, ms[f].name));
                    }
                }
            }
        }
        for (k, m) in ms.iter().enumerate() {
            let (ds, dt) = (self.objects[m.src].degree, self.objects[m.dst].degree);
            let ok = match m.tag {
                Tag::Identity => self.identities[m.src] == k,
                Tag::Plus => dt > ds,
                Tag::Minus => dt < ds,
                Tag::Mixed => true,
            };
            if !ok {
                return bad(format!("{} is tagged {} against its degrees", m.name, m.tag.as_str()));
            }
        }
        for g in 0..n {
            for f in self.into_src(g) {
                let h = self.comp(g, f);
                if (self.is_plus(g) && self.is_plus(f) && !self.is_plus(h)) || (self.is_minus(g) && self.is_minus(f) && !self.is_minus(h)) {
                    return bad(format!("{} ∘ {} leaves its subcategory", ms[g].name, ms[f].name));
                }
            }
        }
        for m in 0..n {
            let (q, i) = self.factor[m];
            if q >= n || i >= n || !self.is_minus(q) || !self.is_plus(i) || ms[q].dst != ms[i].src || self.comp(i, q) != m {
                return bad(format!("stored factorization of {} is invalid", ms[m].name));
            }
            let count = (0..n)
                .filter(|&q| self.is_minus(q) && ms[q].src == ms[m].src)
                .flat_map(|q| self.into_src_of_obj(ms[q].dst).map(move |i| (q, i)))
                .filter(|&(q, i)| self.is_plus(i) && ms[i].dst == ms[m].dst && self.comp(i, q) == m)
                .count();
            if count != 1 {
                return bad(format!("{} has {count} factorizations", ms[m].name));
            }
        }
        Ok(())
    }

    fn into_src(&self, g: usize) -> impl Iterator<Item = usize> + '_ {
        let s = self.morphisms[g].src;
        (0..self.morphisms.len()).filter(move |&f| self.morphisms[f].dst == s)
    }

    fn into_src_of_obj(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.morphisms.len()).filter(move |&i| self.morphisms[i].src == x)
    }

    /// `g∘f`.
    pub fn comp(&self, g: usize, f: usize) -> usize {
        self.compose[&(g, f)]
    }

    pub fn factor(&self, m: usize) -> (usize, usize) {
        self.factor[m]
    }

    pub fn identity(&self, x: usize) -> usize {
        self.identities[x]
    }

    pub fn is_identity(&self, m: usize) -> bool {
        self.morphisms[m].tag == Tag::Identity
    }

    pub fn is_plus(&self, m: usize) -> bool {
        matches!(self.morphisms[m].tag, Tag::Plus | Tag::Identity)
    }

    pub fn is_minus(&self, m: usize) -> bool {
        matches!(self.morphisms[m].tag, Tag::Minus | Tag::Identity)
    }

    pub fn in_part(&self, m: usize, p: Part) -> bool {
        match p {
            Part::Ob => self.is_identity(m),
            Part::Plus => self.is_plus(m),
            Part::Minus => self.is_minus(m),
            Part::All => true,
        }
    }

    pub fn degree(&self, x: usize) -> usize {
        self.objects[x].degree
    }

    pub fn find(&self, name: &str) -> Option<usize> {
        self.by_name.get(name).copied()
    }

    pub fn hom(&self, x: usize, y: usize) -> Vec<usize> {
        (0..self.morphisms.len()).filter(|&m| self.morphisms[m].src == x && self.morphisms[m].dst == y).collect()
    }

    pub fn into_obj(&self, r: usize, p: Part) -> Vec<usize> {
        (0..self.morphisms.len()).filter(|&m| self.morphisms[m].dst == r && self.in_part(m, p)).collect()
    }

    pub fn out_of(&self, r: usize, p: Part) -> Vec<usize> {
        (0..self.morphisms.len()).filter(|&m| self.morphisms[m].src == r && self.in_part(m, p)).collect()
    }

    pub fn opposite(&self) -> ReedyCategory {
        let morphisms = self
            .morphisms
            .iter()
            .map(|m| Morphism {
                name: m.name.clone(),
                src: m.dst,
                dst: m.src,
                tag: match m.tag {
                    Tag::Plus => Tag::Minus,
                    Tag::Minus => Tag::Plus,
                    t => t,
                },
            })
            .collect();
        let compose = self.compose.iter().map(|(&(g, f), &h)| ((f, g), h)).collect();
        let factor = self.factor.iter().map(|&(q, i)| (i, q)).collect();
        ReedyCategory::new(self.objects.clone(), morphisms, compose, factor).expect("opposite of a Reedy category")
    }

    /// Only identities, all objects in degree zero.
    pub fn discrete(k: usize) -> ReedyCategory {
        let objects = (0..k).map(|i| Object { name: format!("o{i}"), degree: 0 }).collect();
        let morphisms = (0..k).map(|i| Morphism { name: format!("id{i}"), src: i, dst: i, tag: Tag::Identity }).collect();
        let compose = (0..k).map(|i| ((i, i), i)).collect();
        let factor = (0..k).map(|i| (i, i)).collect();
        ReedyCategory::new(objects, morphisms, compose, factor).unwrap()
    }

    pub fn to_json(&self) -> Value {
        let ms = &self.morphisms;
        let mut compose = Map::new();
        let mut keys: Vec<_> = self.compose.iter().collect();
        keys.sort();
        for (&(g, f), &h) in keys {
            compose.insert(format!("{}∘{}", ms[g].name, ms[f].name), json!(ms[h].name));
        }
        let mut factor = Map::new();
        for (m, &(q, i)) in self.factor.iter().enumerate() {
            factor.insert(ms[m].name.clone(), json!([ms[q].name, ms[i].name]));
        }
        json!({
            "objects": self.objects.iter().map(|o| json!({"name": o.name, "degree": o.degree})).collect::<Vec<_>>(),
            "morphisms": ms.iter().map(|m| json!({
                "name": m.name,
                "src": self.objects[m.src].name,
                "dst": self.objects[m.dst].name,
                "tag": m.tag.as_str(),
            })).collect::<Vec<_>>(),
            "compose": compose,
            "factor": factor,
        })
    }

    pub fn from_json(v: &Value) -> Result<ReedyCategory, ReedyError> {
        let bad = |s: &str| ReedyError::Category(s.into());
        let objs = v["objects"].as_array().ok_or(bad("objects must be an array"))?;
        let mut objects = vec![];
        for o in objs {
            let name = o["name"].as_str().ok_or(bad("object name"))?.to_string();
            let degree = o["degree"].as_u64().ok_or(bad("object degree"))? as usize;
            objects.push(Object { name, degree });
        }
        let obj = |s: &Value| -> Result<usize, ReedyError> {
            let s = s.as_str().ok_or(bad("endpoint must be an object name"))?;
            objects.iter().position(|o| o.name == s).ok_or(ReedyError::Category(format!("unknown object {s}")))
        };
        let mut morphisms = vec![];
        for m in v["morphisms"].as_array().ok_or(bad("morphisms must be an array"))? {
            let name = m["name"].as_str().ok_or(bad("morphism name"))?.to_string();
            let tag = m["tag"].as_str().and_then(Tag::parse).ok_or(ReedyError::Category(format!("tag of {name}")))?;
            morphisms.push(Morphism { src: obj(&m["src"])?, dst: obj(&m["dst"])?, name, tag });
        }
        let find = |s: &str| morphisms.iter().position(|m| m.name == s).ok_or(ReedyError::Category(format!("unknown morphism {s}")));
        let mut compose = HashMap::new();
        for (k, h) in v["compose"].as_object().ok_or(bad("compose must be an object"))? {
            let (g, f) = k.split_once('∘').ok_or(ReedyError::Category(format!("compose key {k}")))?;
            compose.insert((find(g)?, find(f)?), find(h.as_str().ok_or(bad("compose value"))?)?);
        }
        let fac = v["factor"].as_object().ok_or(bad("factor must be an object"))?;
        let mut factor = vec![];
        for m in &morphisms {
            let p = fac.get(&m.name).and_then(|p| p.as_array()).ok_or(ReedyError::Category(format!("no factorization for {}", m.name)))?;
            let part = |k: usize| p.get(k).and_then(|s| s.as_str()).ok_or(bad("factor entries are names"));
            factor.push((find(part(0)?)?, find(part(1)?)?));
        }
        ReedyCategory::new(objects, morphisms, compose, factor)
    }
}

/// Name of the order-preserving map `[i] → [j]` with the given values.
pub fn delta_name(i: usize, j: usize, vals: &[usize]) -> String {
    format!("{i}→{j}:{}", vals.iter().map(|v| v.to_string()).collect::<String>())
}

/// `Δ≤n`: ordinals `[0..n]`, injections plus, surjections minus.
pub fn truncated_delta(n: usize) -> Result<ReedyCategory, ReedyError> {
    if n > 3 {
        return Err(ReedyError::TooLarge(n));
    }
    let objects = (0..=n).map(|k| Object { name: format!("[{k}]"), degree: k }).collect();
    let mut maps: Vec<(usize, usize, Vec<usize>)> = vec![];
    for i in 0..=n {
        for j in 0..=n {
            let mut stack = vec![vec![]];
            while let Some(v) = stack.pop() {
                if v.len() == i + 1 {
                    maps.push((i, j, v));
                    continue;
                }
                let start = v.last().copied().unwrap_or(0);
                for t in (start..=j).rev() {
                    let mut w = v.clone();
                    w.push(t);
                    stack.push(w);
                }
            }
        }
    }
    let index: HashMap<(usize, usize, Vec<usize>), usize> = maps.iter().cloned().enumerate().map(|(k, m)| (m, k)).collect();
    let morphisms = maps
        .iter()
        .map(|(i, j, v)| {
            let inj = v.windows(2).all(|w| w[0] < w[1]);
            let surj = v.first() == Some(&0) && v.last() == Some(j) && v.windows(2).all(|w| w[1] - w[0] <= 1);
            let tag = match (inj, surj) {
                (true, true) => Tag::Identity,
                (true, false) => Tag::Plus,
                (false, true) => Tag::Minus,
                _ => Tag::Mixed,
            };
            Morphism { name: delta_name(*i, *j, v), src: *i, dst: *j, tag }
        })
        .collect();
    let mut compose = HashMap::new();
    for (f, (i, j, v)) in maps.iter().enumerate() {
        for (g, (j2, k, w)) in maps.iter().enumerate() {
            if j2 == j {
                let h: Vec<usize> = v.iter().map(|&t| w[t]).collect();
                compose.insert((g, f), index[&(*i, *k, h)]);
            }
        }
    }
    let factor = maps
        .iter()
        .map(|(i, j, v)| {
            let mut im = v.clone();
            im.dedup();
            let k = im.len() - 1;
            let epi: Vec<usize> = v.iter().map(|t| im.iter().position(|s| s == t).unwrap()).collect();
            (index[&(*i, k, epi)], index[&(k, *j, im)])
        })
        .collect();
    ReedyCategory::new(objects, morphisms, compose, factor)
}

/// `(Δ≤n)ᵒᵖ`, diagrams on which are truncated simplicial objects.
pub fn truncated_delta_op(n: usize) -> Result<ReedyCategory, ReedyError> {
    Ok(truncated_delta(n)?.opposite())
}

/// The face `d_i: X_n → X_{n−1}` of `(Δ≤k)ᵒᵖ`.
pub fn face(cat: &ReedyCategory, n: usize, i: usize) -> Option<usize> {
    let vals: Vec<usize> = (0..=n).filter(|&t| t != i).collect();
    cat.find(&delta_name(n - 1, n, &vals))
}

/// The degeneracy `s_i: X_n → X_{n+1}` of `(Δ≤k)ᵒᵖ`.
pub fn degeneracy(cat: &ReedyCategory, n: usize, i: usize) -> Option<usize> {
    let vals: Vec<usize> = (0..=n + 1).map(|t| if t <= i { t } else { t - 1 }).collect();
    cat.find(&delta_name(n + 1, n, &vals))
}

// ---------------------------------------------------------------------------
// finite colimits and limits of chain complexes over a field

#[derive(Clone, Debug)]
struct Sum {
    complex: ChainComplex,
    parts: Vec<ChainComplex>,
}

impl Sum {
    fn new(ring: Ring, parts: Vec<ChainComplex>) -> Sum {
        let mut ranks = BTreeMap::new();
        for p in &parts {
            for n in p.degrees() {
                *ranks.entry(n).or_insert(0) += p.rank(n);
            }
        }
        ranks.retain(|_, r| *r > 0);
        let s = Sum { complex: ChainComplex::zero(ring), parts };
        let complex = ChainComplex::from_fn(ring, &ranks, |n| {
            let mut m = Matrix::zeros(ring, ranks.get(&(n - 1)).copied().unwrap_or(0), ranks.get(&n).copied().unwrap_or(0));
            for (k, p) in s.parts.iter().enumerate() {
                m.set_block(s.off(k, n - 1), s.off(k, n), &p.d(n));
            }
            Some(m)
        });
        Sum { complex, ..s }
    }

    fn off(&self, k: usize, n: i64) -> usize {
        self.parts[..k].iter().map(|p| p.rank(n)).sum()
    }

    fn degrees(&self) -> impl Iterator<Item = i64> {
        self.complex.degrees()
    }
}

fn field(ring: Ring) -> Result<(), ReedyError> {
    if ring.is_field() {
        Ok(())
    } else {
        Err(ReedyError::NotField(ring.tag()))
    }
}

/// Colimit of a finite diagram of complexes given by objects and arrows
/// `(src, dst, map)`, as a quotient of the direct sum.
#[derive(Clone, Debug)]
pub struct Colimit {
    sum: Sum,
    pub complex: ChainComplex,
    proj: BTreeMap<i64, Matrix>,
    section: BTreeMap<i64, Matrix>,
    arrows: Vec<(usize, usize, ChainMap)>,
}

pub fn colimit(ring: Ring, objects: Vec<ChainComplex>, arrows: Vec<(usize, usize, ChainMap)>) -> Result<Colimit, ReedyError> {
    field(ring)?;
    let sum = Sum::new(ring, objects);
    let (mut proj, mut section, mut ranks) = (BTreeMap::new(), BTreeMap::new(), BTreeMap::new());
    for n in sum.degrees() {
        let p = sum.complex.rank(n);
        let cols: usize = arrows.iter().map(|a| a.2.src.rank(n)).sum();
        let mut delta = Matrix::zeros(ring, p, cols);
        let mut c0 = 0;
        for (s, t, f) in &arrows {
            let k = f.src.rank(n);
            let fm = f.f(n);
            for j in 0..k {
                delta.add_at(sum.off(*s, n) + j, c0 + j, &ring.one());
                for i in 0..fm.rows() {
                    delta.add_at(sum.off(*t, n) + i, c0 + j, &ring.neg(fm.get(i, j)));
                }
            }
            c0 += k;
        }
        let im = image_basis(&delta);
        let keep = complement_indices(&delta);
        let mut e = Matrix::zeros(ring, p, keep.len());
        for (j, &i) in keep.iter().enumerate() {
            e.set(i, j, ring.one());
        }
        let inv = im.hstack(&e).inverse().expect("basis of the ambient space");
        proj.insert(n, inv.block(im.cols(), 0, keep.len(), p));
        section.insert(n, e);
        if !keep.is_empty() {
            ranks.insert(n, keep.len());
        }
    }
    let mut c = Colimit { sum, complex: ChainComplex::zero(ring), proj, section, arrows };
    c.complex = ChainComplex::from_fn(ring, &ranks, |n| Some(c.proj_m(n - 1).mul(&c.sum.complex.d(n)).mul(&c.section_m(n))));
    Ok(c)
}

impl Colimit {
    fn proj_m(&self, n: i64) -> Matrix {
        self.proj.get(&n).cloned().unwrap_or_else(|| Matrix::zeros(self.complex.ring(), 0, self.sum.complex.rank(n)))
    }

    fn section_m(&self, n: i64) -> Matrix {
        self.section.get(&n).cloned().unwrap_or_else(|| Matrix::zeros(self.complex.ring(), self.sum.complex.rank(n), 0))
    }

    pub fn len(&self) -> usize {
        self.sum.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sum.parts.is_empty()
    }

    /// The structure map of the `k`-th object.
    pub fn leg(&self, k: usize) -> ChainMap {
        let part = &self.sum.parts[k];
        let f = part.degrees().map(|n| (n, self.proj_m(n).block(0, self.sum.off(k, n), self.complex.rank(n), part.rank(n)))).collect();
        ChainMap::from_parts(part.clone(), self.complex.clone(), f).unwrap()
    }

    pub fn is_cocone(&self, legs: &[ChainMap]) -> bool {
        self.arrows.iter().all(|(s, t, f)| legs[*t].compose(f) == legs[*s])
    }

    /// The map out of the colimit determined by a cocone.
    pub fn induced(&self, target: &ChainComplex, legs: &[ChainMap]) -> ChainMap {
        let ring = self.complex.ring();
        let f = self
            .complex
            .degrees()
            .map(|n| {
                let mut m = Matrix::zeros(ring, target.rank(n), self.sum.complex.rank(n));
                for (k, l) in legs.iter().enumerate() {
                    m.set_block(0, self.sum.off(k, n), &l.f(n));
                }
                (n, m.mul(&self.section_m(n)))
            })
            .collect();
        ChainMap::from_parts(self.complex.clone(), target.clone(), f).unwrap()
    }
}

/// Limit of a finite diagram, as a subcomplex of the product.
#[derive(Clone, Debug)]
pub struct Limit {
    sum: Sum,
    pub complex: ChainComplex,
    incl: BTreeMap<i64, Matrix>,
    arrows: Vec<(usize, usize, ChainMap)>,
}

pub fn limit(ring: Ring, objects: Vec<ChainComplex>, arrows: Vec<(usize, usize, ChainMap)>) -> Result<Limit, ReedyError> {
    field(ring)?;
    let sum = Sum::new(ring, objects);
    let (mut incl, mut ranks) = (BTreeMap::new(), BTreeMap::new());
    for n in sum.degrees() {
        let p = sum.complex.rank(n);
        let rows: usize = arrows.iter().map(|a| a.2.dst.rank(n)).sum();
        let mut delta = Matrix::zeros(ring, rows, p);
        let mut r0 = 0;
        for (s, t, f) in &arrows {
            let k = f.dst.rank(n);
            let fm = f.f(n);
            for i in 0..k {
                for j in 0..fm.cols() {
                    delta.add_at(r0 + i, sum.off(*s, n) + j, fm.get(i, j));
                }
                delta.add_at(r0 + i, sum.off(*t, n) + i, &ring.from_i64(-1));
            }
            r0 += k;
        }
        let k = kernel_basis(&delta);
        if k.cols() > 0 {
            ranks.insert(n, k.cols());
        }
        incl.insert(n, k);
    }
    let mut l = Limit { sum, complex: ChainComplex::zero(ring), incl, arrows };
    l.complex = ChainComplex::from_fn(ring, &ranks, |n| {
        let rhs = l.sum.complex.d(n).mul(&l.incl_m(n));
        Some(solve_linear(&l.incl_m(n - 1), &rhs).expect("shapes").expect("kernel is a subcomplex"))
    });
    Ok(l)
}

impl Limit {
    fn incl_m(&self, n: i64) -> Matrix {
        self.incl.get(&n).cloned().unwrap_or_else(|| Matrix::zeros(self.complex.ring(), self.sum.complex.rank(n), 0))
    }

    pub fn len(&self) -> usize {
        self.sum.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sum.parts.is_empty()
    }

    pub fn leg(&self, k: usize) -> ChainMap {
        let part = &self.sum.parts[k];
        let f = self.complex.degrees().map(|n| (n, self.incl_m(n).block(self.sum.off(k, n), 0, part.rank(n), self.complex.rank(n)))).collect();
        ChainMap::from_parts(self.complex.clone(), part.clone(), f).unwrap()
    }

    pub fn is_cone(&self, legs: &[ChainMap]) -> bool {
        self.arrows.iter().all(|(s, t, f)| f.compose(&legs[*s]) == legs[*t])
    }

    /// The map into the limit determined by a cone; `None` if it is not one.
    pub fn induced(&self, source: &ChainComplex, legs: &[ChainMap]) -> Option<ChainMap> {
        let ring = self.complex.ring();
        let mut f = BTreeMap::new();
        for n in source.degrees() {
            let mut v = Matrix::zeros(ring, self.sum.complex.rank(n), source.rank(n));
            for (k, l) in legs.iter().enumerate() {
                v.set_block(self.sum.off(k, n), 0, &l.f(n));
            }
            f.insert(n, solve_linear(&self.incl_m(n), &v).ok()??);
        }
        ChainMap::from_parts(source.clone(), self.complex.clone(), f).ok()
    }
}

// ---------------------------------------------------------------------------
// diagrams

/// A functor from the part `part` of `shape` to chain complexes.
#[derive(Clone, Debug)]
pub struct Diagram {
    pub shape: Arc<ReedyCategory>,
    pub part: Part,
    pub objects: Vec<ChainComplex>,
    maps: BTreeMap<usize, ChainMap>,
}

impl Diagram {
    /// `maps` needs the non-identity morphisms of the part; identities are
    /// filled in.
    pub fn new(shape: Arc<ReedyCategory>, part: Part, objects: Vec<ChainComplex>, mut maps: BTreeMap<usize, ChainMap>) -> Result<Diagram, ReedyError> {
        let c = &shape;
        if objects.len() != c.objects.len() {
            return Err(ReedyError::Functoriality("one complex per object".into()));
        }
        for x in 0..objects.len() {
            maps.entry(c.identity(x)).or_insert_with(|| ChainMap::identity(&objects[x]));
        }
        for m in 0..c.morphisms.len() {
            let name = &c.morphisms[m].name;
            match maps.get(&m) {
                None if c.in_part(m, part) => return Err(ReedyError::Functoriality(format!("no map for {name}"))),
                Some(_) if !c.in_part(m, part) => return Err(ReedyError::Functoriality(format!("{name} is outside the part"))),
                Some(f) => {
                    let mm = &c.morphisms[m];
                    if f.src != objects[mm.src] || f.dst != objects[mm.dst] {
                        return Err(ReedyError::Functoriality(format!("{name} has the wrong endpoints")));
                    }
                    if !f.is_chain_map() {
                        return Err(ReedyError::Functoriality(format!("{name} is not a chain map")));
                    }
                    if c.is_identity(m) && !f.is_identity() {
                        return Err(ReedyError::Functoriality(format!("{name} is not sent to an identity")));
                    }
                }
                None => {}
            }
        }
        for (&g, fg) in &maps {
            for (&f, ff) in &maps {
                if c.morphisms[f].dst == c.morphisms[g].src && maps[&c.comp(g, f)] != fg.compose(ff) {
                    return Err(ReedyError::Functoriality(format!("{} ∘ {}", c.morphisms[g].name, c.morphisms[f].name)));
                }
            }
        }
        Ok(Diagram { shape, part, objects, maps })
    }

    pub fn ring(&self) -> Ring {
        self.objects.first().map(|o| o.ring()).unwrap_or(Ring::Q)
    }

    pub fn map(&self, m: usize) -> &ChainMap {
        &self.maps[&m]
    }

    pub fn restrict(&self, part: Part) -> Diagram {
        assert!(self.part.contains(part), "restriction to a larger part");
        let maps = self.maps.iter().filter(|(&m, _)| self.shape.in_part(m, part)).map(|(&m, f)| (m, f.clone())).collect();
        Diagram { shape: self.shape.clone(), part, objects: self.objects.clone(), maps }
    }

    /// Family indexed by objects.
    pub fn family(shape: Arc<ReedyCategory>, objects: Vec<ChainComplex>) -> Diagram {
        Diagram::new(shape, Part::Ob, objects, BTreeMap::new()).unwrap()
    }

    pub fn constant(shape: Arc<ReedyCategory>, part: Part, c: &ChainComplex) -> Diagram {
        let maps = (0..shape.morphisms.len()).filter(|&m| shape.in_part(m, part)).map(|m| (m, ChainMap::identity(c))).collect();
        let n = shape.objects.len();
        Diagram::new(shape, part, vec![c.clone(); n], maps).unwrap()
    }

    pub fn zero(shape: Arc<ReedyCategory>, part: Part, ring: Ring) -> Diagram {
        Diagram::constant(shape, part, &ChainComplex::zero(ring))
    }

    pub fn ranks(&self) -> Vec<BTreeMap<i64, usize>> {
        self.objects.iter().map(|o| o.ranks()).collect()
    }
}

/// Natural transformation between diagrams on the same part.
#[derive(Clone, Debug)]
pub struct NatTrans {
    pub src: Diagram,
    pub dst: Diagram,
    pub components: Vec<ChainMap>,
}

impl NatTrans {
    pub fn new(src: Diagram, dst: Diagram, components: Vec<ChainMap>) -> Result<NatTrans, ReedyError> {
        if src.part != dst.part || !Arc::ptr_eq(&src.shape, &dst.shape) && src.shape.morphisms != dst.shape.morphisms {
            return Err(ReedyError::Naturality("different shapes".into()));
        }
        for (x, t) in components.iter().enumerate() {
            if t.src != src.objects[x] || t.dst != dst.objects[x] || !t.is_chain_map() {
                return Err(ReedyError::Naturality(format!("component at {}", src.shape.objects[x].name)));
            }
        }
        for (&m, f) in &src.maps {
            let mm = &src.shape.morphisms[m];
            if components[mm.dst].compose(f) != dst.map(m).compose(&components[mm.src]) {
                return Err(ReedyError::Naturality(format!("square at {}", mm.name)));
            }
        }
        Ok(NatTrans { src, dst, components })
    }

    pub fn identity(d: &Diagram) -> NatTrans {
        NatTrans { src: d.clone(), dst: d.clone(), components: d.objects.iter().map(ChainMap::identity).collect() }
    }

    pub fn compose(&self, first: &NatTrans) -> NatTrans {
        let components = self.components.iter().zip(&first.components).map(|(g, f)| g.compose(f)).collect();
        NatTrans { src: first.src.clone(), dst: self.dst.clone(), components }
    }
}

// ---------------------------------------------------------------------------
// latching and matching

#[derive(Clone, Debug)]
pub struct Latching {
    /// Non-identity plus morphisms into `r`, the objects of the slice.
    pub slice: Vec<usize>,
    pub colim: Colimit,
    /// `L_rΦ → Φ(r)`.
    pub map: ChainMap,
}

impl Latching {
    pub fn object(&self) -> &ChainComplex {
        &self.colim.complex
    }
}

#[derive(Clone, Debug)]
pub struct Matching {
    pub slice: Vec<usize>,
    pub lim: Limit,
    /// `Φ(r) → M_rΦ`.
    pub map: ChainMap,
}

impl Matching {
    pub fn object(&self) -> &ChainComplex {
        &self.lim.complex
    }
}

/// Colimit over the morphisms `hs` into `r`, glued along `a` in `part`:
/// the `h∘a` copy is identified with the `h` copy through `Φ(a)`.
fn glue_into(phi: &Diagram, hs: &[usize], part: Part) -> Result<Colimit, ReedyError> {
    let c = &phi.shape;
    let pos: HashMap<usize, usize> = hs.iter().enumerate().map(|(k, &h)| (h, k)).collect();
    let mut arrows = vec![];
    for (k, &h) in hs.iter().enumerate() {
        for a in c.into_obj(c.morphisms[h].src, part) {
            if c.is_identity(a) {
                continue;
            }
            if let Some(&b) = pos.get(&c.comp(h, a)) {
                arrows.push((b, k, phi.map(a).clone()));
            }
        }
    }
    colimit(phi.ring(), hs.iter().map(|&h| phi.objects[c.morphisms[h].src].clone()).collect(), arrows)
}

/// Limit over the morphisms `gs` out of `r`, glued along `a` in `part`.
fn glue_out(phi: &Diagram, gs: &[usize], part: Part) -> Result<Limit, ReedyError> {
    let c = &phi.shape;
    let pos: HashMap<usize, usize> = gs.iter().enumerate().map(|(k, &g)| (g, k)).collect();
    let mut arrows = vec![];
    for (k, &g) in gs.iter().enumerate() {
        for a in c.out_of(c.morphisms[g].dst, part) {
            if c.is_identity(a) {
                continue;
            }
            if let Some(&b) = pos.get(&c.comp(a, g)) {
                arrows.push((k, b, phi.map(a).clone()));
            }
        }
    }
    limit(phi.ring(), gs.iter().map(|&g| phi.objects[c.morphisms[g].dst].clone()).collect(), arrows)
}

/// `L_rΦ`, the colimit over non-identity plus maps into `r`.
pub fn latching(phi: &Diagram, r: usize) -> Result<Latching, ReedyError> {
    if !phi.part.contains(Part::Plus) {
        return Err(ReedyError::Invalid("latching objects need the plus maps".into()));
    }
    let c = &phi.shape;
    let slice: Vec<usize> = c.into_obj(r, Part::Plus).into_iter().filter(|&f| !c.is_identity(f)).collect();
    let colim = glue_into(phi, &slice, Part::Plus)?;
    let legs: Vec<ChainMap> = slice.iter().map(|&f| phi.map(f).clone()).collect();
    let map = colim.induced(&phi.objects[r], &legs);
    Ok(Latching { slice, colim, map })
}

/// `M_rΦ`, the limit over non-identity minus maps out of `r`.
pub fn matching(phi: &Diagram, r: usize) -> Result<Matching, ReedyError> {
    if !phi.part.contains(Part::Minus) {
        return Err(ReedyError::Invalid("matching objects need the minus maps".into()));
    }
    let c = &phi.shape;
    let slice: Vec<usize> = c.out_of(r, Part::Minus).into_iter().filter(|&g| !c.is_identity(g)).collect();
    let lim = glue_out(phi, &slice, Part::Minus)?;
    let legs: Vec<ChainMap> = slice.iter().map(|&g| phi.map(g).clone()).collect();
    let map = lim.induced(&phi.objects[r], &legs).expect("the maps out of Φ(r) form a cone");
    Ok(Matching { slice, lim, map })
}

/// A relative latching or matching map with its source or target object.
#[derive(Clone, Debug)]
pub struct RelativeMap {
    pub object: ChainComplex,
    pub map: ChainMap,
}

/// `ℓ_r(τ): Φ(r) ⊔_{L_rΦ} L_rΨ → Ψ(r)`.
pub fn relative_latching(tau: &NatTrans, r: usize) -> Result<RelativeMap, ReedyError> {
    let c = &tau.src.shape;
    let (lp, lq) = (latching(&tau.src, r)?, latching(&tau.dst, r)?);
    let legs: Vec<ChainMap> = lp.slice.iter().enumerate().map(|(k, &f)| lq.colim.leg(k).compose(&tau.components[c.morphisms[f].src])).collect();
    let lt = lp.colim.induced(lq.object(), &legs);
    let po = colimit(
        tau.src.ring(),
        vec![lp.object().clone(), tau.src.objects[r].clone(), lq.object().clone()],
        vec![(0, 1, lp.map.clone()), (0, 2, lt)],
    )?;
    let tr = &tau.components[r];
    let map = po.induced(&tau.dst.objects[r], &[tr.compose(&lp.map), tr.clone(), lq.map.clone()]);
    Ok(RelativeMap { object: po.complex, map })
}

/// `m_r(τ): Φ(r) → M_rΦ ×_{M_rΨ} Ψ(r)`.
pub fn relative_matching(tau: &NatTrans, r: usize) -> Result<RelativeMap, ReedyError> {
    let c = &tau.src.shape;
    let (mp, mq) = (matching(&tau.src, r)?, matching(&tau.dst, r)?);
    let legs: Vec<ChainMap> = mq.slice.iter().enumerate().map(|(k, &g)| tau.components[c.morphisms[g].dst].compose(&mp.lim.leg(k))).collect();
    let mt = mq.lim.induced(mp.object(), &legs).expect("τ induces a map of matching objects");
    let pb = limit(
        tau.src.ring(),
        vec![mp.object().clone(), tau.dst.objects[r].clone(), mq.object().clone()],
        vec![(0, 2, mt.clone()), (1, 2, mq.map.clone())],
    )?;
    let map = pb
        .induced(&tau.src.objects[r], &[mp.map.clone(), tau.components[r].clone(), mt.compose(&mp.map)])
        .expect("the square commutes");
    Ok(RelativeMap { object: pb.complex, map })
}

/// Reedy classes of `τ` over the Hurewicz classes of chain complexes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub cofibration: bool,
    pub fibration: bool,
    pub weak_equivalence: bool,
    pub latching: Vec<bool>,
    pub matching: Vec<bool>,
    pub components: Vec<bool>,
}

impl Classification {
    pub fn to_json(&self) -> Value {
        json!({
            "cofibration": self.cofibration,
            "fibration": self.fibration,
            "weak_equivalence": self.weak_equivalence,
            "latching": self.latching,
            "matching": self.matching,
            "components": self.components,
        })
    }
}

pub fn reedy_classify(tau: &NatTrans) -> Result<Classification, ReedyError> {
    if tau.src.part != Part::All {
        return Err(ReedyError::Invalid("classification needs diagrams on the whole category".into()));
    }
    let n = tau.src.objects.len();
    let mut latching = vec![];
    let mut matching = vec![];
    for r in 0..n {
        latching.push(is_cofibration(&relative_latching(tau, r)?.map));
        matching.push(is_fibration(&relative_matching(tau, r)?.map));
    }
    let components: Vec<bool> = tau.components.iter().map(is_homotopy_equivalence).collect();
    Ok(Classification {
        cofibration: latching.iter().all(|&b| b),
        fibration: matching.iter().all(|&b| b),
        weak_equivalence: components.iter().all(|&b| b),
        latching,
        matching,
        components,
    })
}

// ---------------------------------------------------------------------------
// Kan extensions

/// Pointwise left Kan extension with its colimit presentations.
#[derive(Clone, Debug)]
pub struct LeftKan {
    pub diagram: Diagram,
    /// Morphisms into each object indexing the copies.
    pub index: Vec<Vec<usize>>,
    pub colims: Vec<Colimit>,
}

impl LeftKan {
    /// Structure map of the copy indexed by `h: x → r`.
    pub fn leg(&self, h: usize) -> ChainMap {
        let r = self.diagram.shape.morphisms[h].dst;
        let k = self.index[r].iter().position(|&g| g == h).expect("indexing morphism");
        self.colims[r].leg(k)
    }
}

#[derive(Clone, Debug)]
pub struct RightKan {
    pub diagram: Diagram,
    pub index: Vec<Vec<usize>>,
    pub lims: Vec<Limit>,
}

impl RightKan {
    /// Projection to the factor indexed by `g: r → y`.
    pub fn leg(&self, g: usize) -> ChainMap {
        let r = self.diagram.shape.morphisms[g].src;
        let k = self.index[r].iter().position(|&h| h == g).expect("indexing morphism");
        self.lims[r].leg(k)
    }
}

/// `Lan` from `phi.part` to `to`: `coeq(∐ Φ(x) ⇉ ∐_{x, R_to(x,r)} Φ(x))`.
pub fn lan(phi: &Diagram, to: Part) -> Result<LeftKan, ReedyError> {
    if !to.contains(phi.part) {
        return Err(ReedyError::Invalid("extension to a smaller part".into()));
    }
    let c = phi.shape.clone();
    let n = c.objects.len();
    let index: Vec<Vec<usize>> = (0..n).map(|r| c.into_obj(r, to)).collect();
    let colims = index.iter().map(|hs| glue_into(phi, hs, phi.part)).collect::<Result<Vec<_>, _>>()?;
    let mut maps = BTreeMap::new();
    for b in 0..c.morphisms.len() {
        if !c.in_part(b, to) || c.is_identity(b) {
            continue;
        }
        let (r, r2) = (c.morphisms[b].src, c.morphisms[b].dst);
        let legs: Vec<ChainMap> = index[r]
            .iter()
            .map(|&h| {
                let k = index[r2].iter().position(|&g| g == c.comp(b, h)).unwrap();
                colims[r2].leg(k)
            })
            .collect();
        maps.insert(b, colims[r].induced(&colims[r2].complex, &legs));
    }
    let objects = colims.iter().map(|l| l.complex.clone()).collect();
    Ok(LeftKan { diagram: Diagram::new(c, to, objects, maps)?, index, colims })
}

/// `Ran` from `phi.part` to `to`, as an equalizer inside `∏_{y, R_to(r,y)} Φ(y)`.
pub fn ran(phi: &Diagram, to: Part) -> Result<RightKan, ReedyError> {
    if !to.contains(phi.part) {
        return Err(ReedyError::Invalid("extension to a smaller part".into()));
    }
    let c = phi.shape.clone();
    let n = c.objects.len();
    let index: Vec<Vec<usize>> = (0..n).map(|r| c.out_of(r, to)).collect();
    let lims = index.iter().map(|gs| glue_out(phi, gs, phi.part)).collect::<Result<Vec<_>, _>>()?;
    let mut maps = BTreeMap::new();
    for b in 0..c.morphisms.len() {
        if !c.in_part(b, to) || c.is_identity(b) {
            continue;
        }
        let (r, r2) = (c.morphisms[b].src, c.morphisms[b].dst);
        let legs: Vec<ChainMap> = index[r2]
            .iter()
            .map(|&g| {
                let k = index[r].iter().position(|&h| h == c.comp(g, b)).unwrap();
                lims[r].leg(k)
            })
            .collect();
        maps.insert(b, lims[r2].induced(&lims[r].complex, &legs).expect("restriction is a cone"));
    }
    let objects = lims.iter().map(|l| l.complex.clone()).collect();
    Ok(RightKan { diagram: Diagram::new(c, to, objects, maps)?, index, lims })
}

/// The four inclusions of the square `Ob R → R^± → R`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Inclusion {
    ObPlus,
    ObMinus,
    MinusAll,
    PlusAll,
}

impl Inclusion {
    fn parts(&self) -> (Part, Part) {
        match self {
            Inclusion::ObPlus => (Part::Ob, Part::Plus),
            Inclusion::ObMinus => (Part::Ob, Part::Minus),
            Inclusion::MinusAll => (Part::Minus, Part::All),
            Inclusion::PlusAll => (Part::Plus, Part::All),
        }
    }
}

pub fn lan_along(kind: Inclusion, phi: &Diagram) -> Result<Diagram, ReedyError> {
    let (from, to) = kind.parts();
    if phi.part != from {
        return Err(ReedyError::Invalid(format!("{kind:?} needs a diagram on {from:?}")));
    }
    Ok(lan(phi, to)?.diagram)
}

pub fn ran_along(kind: Inclusion, phi: &Diagram) -> Result<Diagram, ReedyError> {
    let (from, to) = kind.parts();
    if phi.part != from {
        return Err(ReedyError::Invalid(format!("{kind:?} needs a diagram on {from:?}")));
    }
    Ok(ran(phi, to)?.diagram)
}

// ---------------------------------------------------------------------------
// the exact square

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareAtObject {
    pub object: String,
    pub lhs: BTreeMap<i64, usize>,
    pub rhs: BTreeMap<i64, usize>,
    /// The factorization map respects the relations.
    pub well_defined: bool,
    pub iso: bool,
    pub natural: bool,
}

#[derive(Clone, Debug)]
pub struct ExactSquareReport {
    pub which: String,
    pub objects: Vec<SquareAtObject>,
}

impl ExactSquareReport {
    pub fn ok(&self) -> bool {
        self.objects.iter().all(|o| o.lhs == o.rhs && o.well_defined && o.iso && o.natural)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "which": self.which,
            "ok": self.ok(),
            "objects": self.objects.iter().map(|o| json!({
                "object": o.object,
                "lhs_ranks": o.lhs,
                "rhs_ranks": o.rhs,
                "well_defined": o.well_defined,
                "iso": o.iso,
                "natural": o.natural,
            })).collect::<Vec<_>>(),
        })
    }
}

/// `LV(Φ) ≅ VL(Φ)` for `Φ` on `R⁻`: the coproduct over plus maps against
/// the full coequalizer, compared by Reedy factorization.
pub fn check_exact_square(phi: &Diagram) -> Result<ExactSquareReport, ReedyError> {
    if phi.part != Part::Minus {
        return Err(ReedyError::Invalid("LV ≅ VL takes a diagram on the minus part".into()));
    }
    let c = phi.shape.clone();
    let lv = lan(&phi.restrict(Part::Ob), Part::Plus)?;
    let vl = lan(phi, Part::All)?;
    let n = c.objects.len();
    let mut alpha = vec![];
    let mut out = vec![];
    for r in 0..n {
        let a_legs: Vec<ChainMap> = lv.index[r].iter().map(|&i| vl.leg(i)).collect();
        let a = lv.colims[r].induced(&vl.colims[r].complex, &a_legs);
        let b_legs: Vec<ChainMap> = vl.index[r]
            .iter()
            .map(|&h| {
                let (q, i) = c.factor(h);
                lv.leg(i).compose(phi.map(q))
            })
            .collect();
        let well_defined = vl.colims[r].is_cocone(&b_legs);
        let b = vl.colims[r].induced(&lv.colims[r].complex, &b_legs);
        let iso = b.compose(&a).is_identity() && a.compose(&b).is_identity();
        out.push(SquareAtObject {
            object: c.objects[r].name.clone(),
            lhs: lv.colims[r].complex.ranks(),
            rhs: vl.colims[r].complex.ranks(),
            well_defined,
            iso,
            natural: true,
        });
        alpha.push(a);
    }
    for m in 0..c.morphisms.len() {
        if c.is_plus(m) && !c.is_identity(m) {
            let (r, r2) = (c.morphisms[m].src, c.morphisms[m].dst);
            if vl.diagram.map(m).compose(&alpha[r]) != alpha[r2].compose(lv.diagram.map(m)) {
                out[r].natural = false;
            }
        }
    }
    Ok(ExactSquareReport { which: "LV≅VL".into(), objects: out })
}

/// `RU(Φ) ≅ UR(Φ)` for `Φ` on `R⁺`.
pub fn check_exact_square_dual(phi: &Diagram) -> Result<ExactSquareReport, ReedyError> {
    if phi.part != Part::Plus {
        return Err(ReedyError::Invalid("RU ≅ UR takes a diagram on the plus part".into()));
    }
    let c = phi.shape.clone();
    let ru = ran(&phi.restrict(Part::Ob), Part::Minus)?;
    let ur = ran(phi, Part::All)?;
    let n = c.objects.len();
    let mut alpha = vec![];
    let mut out = vec![];
    for r in 0..n {
        let a_legs: Vec<ChainMap> = ru.index[r].iter().map(|&g| ur.leg(g)).collect();
        let a = ru.lims[r].induced(&ur.lims[r].complex, &a_legs).expect("projections form a cone");
        let b_legs: Vec<ChainMap> = ur.index[r]
            .iter()
            .map(|&h| {
                let (q, i) = c.factor(h);
                phi.map(i).compose(&ru.leg(q))
            })
            .collect();
        let well_defined = ur.lims[r].is_cone(&b_legs);
        let iso = match ur.lims[r].induced(&ru.lims[r].complex, &b_legs) {
            Some(b) => b.compose(&a).is_identity() && a.compose(&b).is_identity(),
            None => false,
        };
        out.push(SquareAtObject {
            object: c.objects[r].name.clone(),
            lhs: ru.lims[r].complex.ranks(),
            rhs: ur.lims[r].complex.ranks(),
            well_defined,
            iso,
            natural: true,
        });
        alpha.push(a);
    }
    for m in 0..c.morphisms.len() {
        if c.is_minus(m) && !c.is_identity(m) {
            let (r, r2) = (c.morphisms[m].src, c.morphisms[m].dst);
            if ru.diagram.map(m).compose(&alpha[r]) != alpha[r2].compose(ur.diagram.map(m)) {
                out[r].natural = false;
            }
        }
    }
    Ok(ExactSquareReport { which: "RU≅UR".into(), objects: out })
}

// ---------------------------------------------------------------------------
// simplicial descriptions on (Δ≤n)ᵒᵖ

/// `L_nX` against the degenerate part `Σ im s_i ⊂ X_n`: same ranks, the
/// latching map injective with that image.
pub fn simplicial_latching_agrees(phi: &Diagram, n: usize) -> Result<bool, ReedyError> {
    let c = &phi.shape;
    let l = latching(phi, n)?;
    if n == 0 {
        return Ok(l.object().ranks().is_empty());
    }
    let degens: Vec<usize> = (0..n).map(|i| degeneracy(c, n - 1, i).ok_or(ReedyError::Invalid("not a simplicial shape".into()))).collect::<Result<_, _>>()?;
    let x = &phi.objects[n];
    for d in x.degrees() {
        let mut dm = Matrix::zeros(phi.ring(), x.rank(d), 0);
        for &s in &degens {
            dm = dm.hstack(&phi.map(s).f(d));
        }
        let lm = l.map.f(d);
        let rank_d = dm.rank();
        if l.object().rank(d) != rank_d || lm.rank() != lm.cols() || lm.hstack(&dm).rank() != rank_d {
            return Ok(false);
        }
    }
    Ok(l.object().degrees().all(|d| x.rank(d) > 0 || l.object().rank(d) == 0))
}

/// `M_nX` against face tuples `(y_0, …, y_n)` in `X_{n−1}` with
/// `d_i y_j = d_{j−1} y_i` for `i < j`.
pub fn simplicial_matching_agrees(phi: &Diagram, n: usize) -> Result<bool, ReedyError> {
    let c = &phi.shape;
    let m = matching(phi, n)?;
    if n == 0 {
        return Ok(m.object().ranks().is_empty());
    }
    let ring = phi.ring();
    let faces: Vec<usize> = (0..=n).map(|i| face(c, n, i).ok_or(ReedyError::Invalid("not a simplicial shape".into()))).collect::<Result<_, _>>()?;
    let pos: Vec<usize> = faces.iter().map(|f| m.slice.iter().position(|g| g == f).unwrap()).collect();
    let y = &phi.objects[n - 1];
    let lower: Vec<usize> = if n >= 2 { (0..n).map(|i| face(c, n - 1, i).unwrap()).collect() } else { vec![] };
    let mut degs: Vec<i64> = y.degrees().chain(m.object().degrees()).collect();
    degs.sort();
    degs.dedup();
    for d in degs {
        let ry = y.rank(d);
        // constraint matrix on (X_{n-1})^{n+1}
        let mut cons = Matrix::zeros(ring, 0, ry * (n + 1));
        if n >= 2 {
            let z = phi.objects[n - 2].rank(d);
            for i in 0..=n {
                for j in i + 1..=n {
                    let mut row = Matrix::zeros(ring, z, ry * (n + 1));
                    row.set_block(0, j * ry, &phi.map(lower[i]).f(d));
                    row.set_block(0, i * ry, &phi.map(lower[j - 1]).f(d).neg());
                    cons = cons.vstack(&row);
                }
            }
        }
        let direct = ry * (n + 1) - cons.rank();
        let mut tuple = Matrix::zeros(ring, 0, m.object().rank(d));
        for &p in &pos {
            tuple = tuple.vstack(&m.lim.leg(p).f(d));
        }
        if m.object().rank(d) != direct || tuple.rank() != tuple.cols() || !cons.mul(&tuple).is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// random diagrams

pub fn random_family(cat: &ReedyCategory, ring: Ring, b: Bounds, rng: &mut CaseRng) -> Vec<ChainComplex> {
    (0..cat.objects.len()).map(|_| complex(ring, b, rng)).collect()
}

pub fn direct_sum(a: &Diagram, b: &Diagram) -> Diagram {
    let sums: Vec<crate::chain::DirectSum> = a.objects.iter().zip(&b.objects).map(|(x, y)| crate::chain::direct_sum(x, y)).collect();
    let maps = a
        .maps
        .keys()
        .filter(|&&m| !a.shape.is_identity(m))
        .map(|&m| {
            let mm = &a.shape.morphisms[m];
            let (s, t) = (&sums[mm.src].sum, &sums[mm.dst].sum);
            let f = s.degrees().map(|n| (n, a.map(m).f(n).block_diag(&b.map(m).f(n)))).collect();
            (m, ChainMap::from_parts(s.clone(), t.clone(), f).unwrap())
        })
        .collect();
    Diagram::new(a.shape.clone(), a.part, sums.into_iter().map(|s| s.sum).collect(), maps).expect("sum of diagrams")
}

/// Cokernel of a natural transformation, objectwise.
pub fn cokernel(tau: &NatTrans) -> Result<Diagram, ReedyError> {
    let c = tau.src.shape.clone();
    let ring = tau.src.ring();
    let zero = ChainComplex::zero(ring);
    let quots = (0..c.objects.len())
        .map(|r| {
            let a = tau.src.objects[r].clone();
            let z = ChainMap::zero(&a, &zero);
            colimit(ring, vec![a, tau.dst.objects[r].clone(), zero.clone()], vec![(0, 1, tau.components[r].clone()), (0, 2, z)])
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut maps = BTreeMap::new();
    for (&m, f) in &tau.dst.maps {
        if c.is_identity(m) {
            continue;
        }
        let (r, r2) = (c.morphisms[m].src, c.morphisms[m].dst);
        let legs = [quots[r2].leg(0).compose(tau.src.map(m)), quots[r2].leg(1).compose(f), ChainMap::zero(&zero, &quots[r2].complex)];
        maps.insert(m, quots[r].induced(&quots[r2].complex, &legs));
    }
    Diagram::new(c, tau.src.part, quots.into_iter().map(|q| q.complex).collect(), maps)
}

/// The map `Lan E → Φ` extending chain maps `E(x) → Φ(x)`.
pub fn free_extension(e: &Diagram, phi: &Diagram, fs: &[ChainMap]) -> Result<(LeftKan, NatTrans), ReedyError> {
    let l = lan(e, phi.part)?;
    let c = &phi.shape;
    let comps = (0..c.objects.len())
        .map(|r| {
            let legs: Vec<ChainMap> = l.index[r].iter().map(|&h| phi.map(h).compose(&fs[c.morphisms[h].src])).collect();
            l.colims[r].induced(&phi.objects[r], &legs)
        })
        .collect();
    let t = NatTrans::new(l.diagram.clone(), phi.clone(), comps)?;
    Ok((l, t))
}

/// `coker(Lan E₁ → Lan E₂) ⊕ Ran E₃` for small random families `Eᵢ`.
pub fn random_diagram(cat: &Arc<ReedyCategory>, part: Part, ring: Ring, rng: &mut CaseRng) -> Result<Diagram, ReedyError> {
    let b = Bounds { max_rank: 1, deg_lo: 0, deg_hi: 1 };
    let fam = |rng: &mut CaseRng| Diagram::family(cat.clone(), random_family(cat, ring, b, rng));
    let (e1, e2, e3) = (fam(rng), fam(rng), fam(rng));
    let free2 = lan(&e2, part)?.diagram;
    let fs: Vec<ChainMap> = (0..cat.objects.len()).map(|x| chain_map(&e1.objects[x], &free2.objects[x], rng)).collect();
    let (_, tau) = free_extension(&e1, &free2, &fs)?;
    Ok(direct_sum(&cokernel(&tau)?, &ran(&e3, part)?.diagram))
}

// ---------------------------------------------------------------------------
// diagrams as bialgebras

/// Basis element of `F₁⋯F_k(E)(r)`: the indexing morphisms from the outside
/// in (a plus map into the current object for `T`, a minus map out of it
/// for `K`) and a basis element of `E` at the innermost object.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub r: usize,
    pub ms: Vec<usize>,
    pub e: usize,
}

#[derive(Clone, Debug)]
pub struct PathSpace {
    pub shape: Vec<Op>,
    pub paths: Vec<Path>,
    index: HashMap<Path, usize>,
}

impl PathSpace {
    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn index(&self, p: &Path) -> Option<usize> {
        self.index.get(p).copied()
    }
}

type Terms = Vec<(Vec<usize>, usize, Scalar)>;

/// `T = UL` and `K = VR` on families indexed by objects.
#[derive(Clone, Debug)]
pub struct ReedyMonads {
    pub cat: Arc<ReedyCategory>,
    pub family: Vec<ChainComplex>,
    pub ring: Ring,
    /// Degree and position of each basis element of `E(x)`.
    basis: Vec<Vec<(i64, usize)>>,
}

impl ReedyMonads {
    pub fn new(cat: Arc<ReedyCategory>, family: Vec<ChainComplex>, ring: Ring) -> ReedyMonads {
        let basis = family.iter().map(|c| c.degrees().flat_map(|n| (0..c.rank(n)).map(move |i| (n, i))).collect()).collect();
        ReedyMonads { cat, family, ring, basis }
    }

    fn global(&self, x: usize, n: i64, i: usize) -> usize {
        self.basis[x].iter().position(|&b| b == (n, i)).expect("basis element")
    }

    fn end(&self, r: usize, ms: &[usize], shape: &[Op]) -> usize {
        let mut cur = r;
        for (m, op) in ms.iter().zip(shape) {
            cur = match op {
                Op::T => self.cat.morphisms[*m].src,
                Op::K => self.cat.morphisms[*m].dst,
            };
        }
        cur
    }

    pub fn space(&self, shape: &[Op]) -> PathSpace {
        let c = &self.cat;
        let mut paths = vec![];
        for r in 0..c.objects.len() {
            let mut stack = vec![(vec![], r)];
            while let Some((ms, cur)) = stack.pop() {
                if ms.len() == shape.len() {
                    paths.extend((0..self.basis[cur].len()).map(|e| Path { r, ms: ms.clone(), e }));
                    continue;
                }
                let next = match shape[ms.len()] {
                    Op::T => c.into_obj(cur, Part::Plus),
                    Op::K => c.out_of(cur, Part::Minus),
                };
                for m in next {
                    let mut ms2 = ms.clone();
                    ms2.push(m);
                    let nxt = if shape[ms.len()] == Op::T { c.morphisms[m].src } else { c.morphisms[m].dst };
                    stack.push((ms2, nxt));
                }
            }
        }
        paths.sort();
        let index = paths.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        PathSpace { shape: shape.to_vec(), paths, index }
    }

    /// Applies `f` to the part of each path after the first `p` letters,
    /// `f` seeing the object it starts at.
    fn at(&self, src: &PathSpace, dst: &PathSpace, p: usize, f: &dyn Fn(usize, &[usize], usize) -> Terms) -> SparseArrow {
        let images = src
            .paths
            .iter()
            .map(|path| {
                let cur = self.end(path.r, &path.ms[..p], &src.shape);
                let mut e = BTreeMap::new();
                for (tail, ee, c) in f(cur, &path.ms[p..], path.e) {
                    let mut ms = path.ms[..p].to_vec();
                    ms.extend(tail);
                    let q = Path { r: path.r, ms, e: ee };
                    let k = dst.index(&q).unwrap_or_else(|| panic!("{q:?} not in the target space"));
                    add_term(self.ring, &mut e, k, &c);
                }
                e
            })
            .collect();
        SparseArrow { dst_len: dst.len(), images }
    }

    fn eta(&self, cur: usize, ms: &[usize], e: usize) -> Terms {
        let mut t = vec![self.cat.identity(cur)];
        t.extend_from_slice(ms);
        vec![(t, e, self.ring.one())]
    }

    fn mu(&self, _: usize, ms: &[usize], e: usize) -> Terms {
        let mut t = vec![self.cat.comp(ms[0], ms[1])];
        t.extend_from_slice(&ms[2..]);
        vec![(t, e, self.ring.one())]
    }

    fn eps(&self, cur: usize, ms: &[usize], e: usize) -> Terms {
        if ms[0] == self.cat.identity(cur) {
            vec![(ms[1..].to_vec(), e, self.ring.one())]
        } else {
            vec![]
        }
    }

    fn delta(&self, cur: usize, ms: &[usize], e: usize) -> Terms {
        let c = &self.cat;
        let mut out = vec![];
        for g1 in c.out_of(cur, Part::Minus) {
            for g2 in c.out_of(c.morphisms[g1].dst, Part::Minus) {
                if c.comp(g2, g1) == ms[0] {
                    let mut t = vec![g1, g2];
                    t.extend_from_slice(&ms[1..]);
                    out.push((t, e, self.ring.one()));
                }
            }
        }
        out
    }

    /// `(f: x ↣ r, q)` goes to every `(g, i)` with `g∘f = i∘q`.
    fn chi(&self, cur: usize, ms: &[usize], e: usize) -> Terms {
        let c = &self.cat;
        let (f, q) = (ms[0], ms[1]);
        let mut out = vec![];
        for g in c.out_of(cur, Part::Minus) {
            let (q2, i) = c.factor(c.comp(g, f));
            if q2 == q {
                let mut t = vec![g, i];
                t.extend_from_slice(&ms[2..]);
                out.push((t, e, self.ring.one()));
            }
        }
        out
    }

    pub fn data(&self, name: &str) -> DistLawData {
        use Op::{K, T};
        let sp = |s: &[Op]| self.space(s);
        let (k, tk, kt, t) = (sp(&[K]), sp(&[T, K]), sp(&[K, T]), sp(&[T]));
        let (ttk, tkt, ktt) = (sp(&[T, T, K]), sp(&[T, K, T]), sp(&[K, T, T]));
        let (tkk, ktk, kkt) = (sp(&[T, K, K]), sp(&[K, T, K]), sp(&[K, K, T]));
        let eta = |c, m: &[usize], e| self.eta(c, m, e);
        let mu = |c, m: &[usize], e| self.mu(c, m, e);
        let eps = |c, m: &[usize], e| self.eps(c, m, e);
        let delta = |c, m: &[usize], e| self.delta(c, m, e);
        let chi = |c, m: &[usize], e| self.chi(c, m, e);
        DistLawData {
            name: name.into(),
            ring: self.ring,
            eta_k: self.at(&k, &tk, 0, &eta),
            k_eta: self.at(&k, &kt, 1, &eta),
            chi: self.at(&tk, &kt, 0, &chi),
            eps_t: self.at(&kt, &t, 0, &eps),
            t_eps: self.at(&tk, &t, 1, &eps),
            mu_k: self.at(&ttk, &tk, 0, &mu),
            t_chi: self.at(&ttk, &tkt, 1, &chi),
            chi_t: self.at(&tkt, &ktt, 0, &chi),
            k_mu: self.at(&ktt, &kt, 1, &mu),
            t_delta: self.at(&tk, &tkk, 1, &delta),
            chi_k: self.at(&tkk, &ktk, 0, &chi),
            k_chi: self.at(&ktk, &kkt, 1, &chi),
            delta_t: self.at(&kt, &kkt, 0, &delta),
        }
    }

    /// `χ_{E,r}: ∐_{x,R⁺(x,r)} ∏_{y,R⁻(x,y)} E(y) → ∏_{y,R⁻(r,y)} ∐_{x,R⁺(x,y)} E(x)`
    /// on the summands at `r`.
    pub fn chi_component(&self, r: usize) -> (Vec<Path>, Vec<Path>, SparseArrow) {
        let (tk, kt) = (self.space(&[Op::T, Op::K]), self.space(&[Op::K, Op::T]));
        let full = self.at(&tk, &kt, 0, &|c, m: &[usize], e| self.chi(c, m, e));
        let rows: Vec<usize> = (0..tk.len()).filter(|&i| tk.paths[i].r == r).collect();
        let cols: Vec<usize> = (0..kt.len()).filter(|&i| kt.paths[i].r == r).collect();
        let pos: HashMap<usize, usize> = cols.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        let images = rows.iter().map(|&i| full.images[i].iter().map(|(k, v)| (pos[k], v.clone())).collect()).collect();
        (
            rows.iter().map(|&i| tk.paths[i].clone()).collect(),
            cols.iter().map(|&i| kt.paths[i].clone()).collect(),
            SparseArrow { dst_len: cols.len(), images },
        )
    }
}

pub fn reedy_distributive_law(cat: &Arc<ReedyCategory>, family: &[ChainComplex], name: &str) -> DistLawData {
    let ring = family.first().map(|c| c.ring()).unwrap_or(Ring::Q);
    ReedyMonads::new(cat.clone(), family.to_vec(), ring).data(name)
}

/// A family with a `T`-algebra and a `K`-coalgebra structure.
#[derive(Clone, Debug)]
pub struct ReedyBialgebra {
    pub monads: ReedyMonads,
    /// `TE → E`.
    pub action: SparseArrow,
    /// `E → KE`.
    pub coaction: SparseArrow,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BialgebraChecks {
    pub associative: bool,
    pub unital: bool,
    pub coassociative: bool,
    pub counital: bool,
    pub compatible: bool,
}

impl BialgebraChecks {
    pub fn all(&self) -> bool {
        self.associative && self.unital && self.coassociative && self.counital && self.compatible
    }
}

/// The restrictions of `Φ` to `R⁺` and `R⁻` as an algebra and a coalgebra.
pub fn diagram_bialgebra(phi: &Diagram) -> Result<ReedyBialgebra, ReedyError> {
    if phi.part != Part::All {
        return Err(ReedyError::Invalid("bialgebra of a partial diagram".into()));
    }
    let ring = phi.ring();
    let m = ReedyMonads::new(phi.shape.clone(), phi.objects.clone(), ring);
    let (e, te, ke) = (m.space(&[]), m.space(&[Op::T]), m.space(&[Op::K]));
    let apply = |f: usize, x: usize, y: usize, el: usize| -> Vec<(usize, Scalar)> {
        let (n, i) = m.basis[x][el];
        let mat = phi.map(f).f(n);
        (0..mat.rows()).filter(|&j| !num_traits::Zero::is_zero(mat.get(j, i))).map(|j| (m.global(y, n, j), mat.get(j, i).clone())).collect()
    };
    let c = &phi.shape;
    let action = m.at(&te, &e, 0, &|_, ms: &[usize], el| {
        let f = ms[0];
        apply(f, c.morphisms[f].src, c.morphisms[f].dst, el).into_iter().map(|(k, v)| (vec![], k, v)).collect()
    });
    let coaction = m.at(&e, &ke, 0, &|cur, _, el| {
        c.out_of(cur, Part::Minus).into_iter().flat_map(|g| apply(g, cur, c.morphisms[g].dst, el).into_iter().map(move |(k, v)| (vec![g], k, v))).collect()
    });
    Ok(ReedyBialgebra { monads: m, action, coaction })
}

impl ReedyBialgebra {
    /// `F(φ)` for `φ` between path spaces, at depth `p`.
    fn whisker(&self, src: &PathSpace, dst: &PathSpace, p: usize, phi: &SparseArrow, psrc: &PathSpace, pdst: &PathSpace) -> SparseArrow {
        self.monads.at(src, dst, p, &|cur, ms, e| {
            let k = psrc.index(&Path { r: cur, ms: ms.to_vec(), e }).expect("inner path");
            phi.images[k].iter().map(|(&j, v)| (pdst.paths[j].ms.clone(), pdst.paths[j].e, v.clone())).collect()
        })
    }

    pub fn check(&self) -> BialgebraChecks {
        let m = &self.monads;
        let r = m.ring;
        let sp = |s: &[Op]| m.space(s);
        let (e, te, tte, ke, kke, tke, kte) = (sp(&[]), sp(&[Op::T]), sp(&[Op::T, Op::T]), sp(&[Op::K]), sp(&[Op::K, Op::K]), sp(&[Op::T, Op::K]), sp(&[Op::K, Op::T]));
        let id = SparseArrow { dst_len: e.len(), images: (0..e.len()).map(|i| BTreeMap::from([(i, r.one())])).collect() };
        let c = |a: &SparseArrow, b: &SparseArrow| a.compose(r, b).expect("shapes");
        let mu = m.at(&tte, &te, 0, &|x, s: &[usize], y| m.mu(x, s, y));
        let eta = m.at(&e, &te, 0, &|x, s: &[usize], y| m.eta(x, s, y));
        let eps = m.at(&ke, &e, 0, &|x, s: &[usize], y| m.eps(x, s, y));
        let delta = m.at(&ke, &kke, 0, &|x, s: &[usize], y| m.delta(x, s, y));
        let chi = m.at(&tke, &kte, 0, &|x, s: &[usize], y| m.chi(x, s, y));
        let t_act = self.whisker(&tte, &te, 1, &self.action, &te, &e);
        let k_coact = self.whisker(&ke, &kke, 1, &self.coaction, &e, &ke);
        let t_coact = self.whisker(&te, &tke, 1, &self.coaction, &e, &ke);
        let k_act = self.whisker(&kte, &ke, 1, &self.action, &te, &e);
        BialgebraChecks {
            associative: c(&self.action, &t_act) == c(&self.action, &mu),
            unital: c(&self.action, &eta) == id,
            coassociative: c(&k_coact, &self.coaction) == c(&delta, &self.coaction),
            counital: c(&eps, &self.coaction) == id,
            compatible: c(&self.coaction, &self.action) == c(&k_act, &c(&chi, &t_coact)),
        }
    }

    /// `Φ(h) = Φ(i)∘Φ(q)` for the factorization `h = i∘q`.
    pub fn to_diagram(&self) -> Result<Diagram, ReedyError> {
        let m = &self.monads;
        let c = &m.cat;
        let (e, te, ke) = (m.space(&[]), m.space(&[Op::T]), m.space(&[Op::K]));
        let piece = |arrow: &SparseArrow, src: &PathSpace, dst: &PathSpace, mor: usize, x: usize, y: usize, via: Op| -> ChainMap {
            let (cx, cy) = (&m.family[x], &m.family[y]);
            let mut f: BTreeMap<i64, Matrix> = cx.degrees().map(|n| (n, Matrix::zeros(m.ring, cy.rank(n), cx.rank(n)))).collect();
            for (el, &(n, i)) in m.basis[x].iter().enumerate() {
                let p = match via {
                    Op::T => Path { r: y, ms: vec![mor], e: el },
                    Op::K => Path { r: x, ms: vec![], e: el },
                };
                for (&k, v) in &arrow.images[src.index(&p).unwrap()] {
                    let q = &dst.paths[k];
                    if via == Op::K && q.ms != [mor] {
                        continue;
                    }
                    let (n2, j) = m.basis[y][q.e];
                    assert_eq!(n, n2);
                    f.get_mut(&n).unwrap().add_at(j, i, v);
                }
            }
            ChainMap::from_parts(cx.clone(), cy.clone(), f).unwrap()
        };
        let mut maps = BTreeMap::new();
        for h in 0..c.morphisms.len() {
            if c.is_identity(h) {
                continue;
            }
            let (q, i) = c.factor(h);
            let (x, z, y) = (c.morphisms[q].src, c.morphisms[q].dst, c.morphisms[i].dst);
            let fq = piece(&self.coaction, &e, &ke, q, x, z, Op::K);
            let fi = piece(&self.action, &te, &e, i, z, y, Op::T);
            maps.insert(h, fi.compose(&fq));
        }
        Diagram::new(c.clone(), Part::All, m.family.clone(), maps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_counts() {
        let d = truncated_delta(2).unwrap();
        assert_eq!(d.morphisms.len(), 31);
        assert_eq!(d.hom(0, 1).len(), 2);
        assert_eq!(d.hom(1, 0).len(), 1);
        assert_eq!(d.hom(1, 1).len(), 3);
        assert!(truncated_delta(4).is_err());
    }
}
