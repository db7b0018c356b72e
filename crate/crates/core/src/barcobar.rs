//! Bar and cobar constructions, the maps `ε_A: ΩBarA → A` and
//! `η_C: C → BarΩC`, word-length filtrations and the two-sided bar
//! construction with its lifted coaction.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;

use crate::basis::{add_term, add_term2, sign, single, Elem, Elem2, GradedBasis, Letter, Word, WordSpace};
use crate::chain::{cone, homology, ChainComplex, ChainMap};
use crate::coalg::{from_corestriction, word_coalgebra, CoalgebraMap, Comodule, DGCoalgebra};
use crate::dga::{free_algebra, AlgError, AlgebraMap, DGAlgebra, DGModule, Presentation, Prod, TruncationPolicy};
use crate::exactlin::{is_split_epi, is_split_mono, Ring, Scalar};

/// `Bar A = (T^co(sĀ), d_Bar)` truncated by word length and degree.
#[derive(Clone, Debug)]
pub struct BarObject {
    pub coalgebra: DGCoalgebra,
    /// Basis index in `A` of each letter `sa`.
    pub letters: Vec<usize>,
    /// Degrees up to this one, with the differentials out of them, agree
    /// with the untruncated construction.
    pub exact_through: i64,
    /// Degrees with certified homology.
    pub window: (i64, i64),
}

/// `ΩC = (T(s⁻¹C̄), d_Ω)` modulo words above the weight bound, cut off above
/// the top degree.
#[derive(Clone, Debug)]
pub struct CobarObject {
    pub algebra: DGAlgebra,
    /// Basis index in `C` of each letter `s⁻¹c`.
    pub letters: Vec<usize>,
    pub exact_through: i64,
    pub window: (i64, i64),
}

fn window_of(exact_through: i64) -> Result<(i64, i64), AlgError> {
    if exact_through < 1 {
        return Err(AlgError::EmptyWindow);
    }
    Ok((0, exact_through - 1))
}

/// Bar construction. Needs `Ā` in non-negative degrees and every product of
/// basis elements of `Ā` inside the basis.
pub fn bar(a: &DGAlgebra, trunc: TruncationPolicy) -> Result<BarObject, AlgError> {
    let ring = a.ring;
    let abar = a.augmentation_ideal()?;
    let letters: Vec<Letter> = abar.iter().map(|&i| Letter { name: format!("[{}]", a.names[i]), degree: a.deg(i) + 1 }).collect();
    let g = letters.iter().map(|l| l.degree).min().unwrap_or(i64::MAX / 8);
    if g < 1 {
        return Err(AlgError::EmptyWindow);
    }
    let pos: BTreeMap<usize, usize> = abar.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let space = WordSpace::new(letters, vec![], trunc.max_weight, 0, trunc.deg_hi);
    let to_letters = |e: &Elem| -> Result<Vec<(usize, Scalar)>, AlgError> {
        e.iter()
            .map(|(&k, c)| pos.get(&k).map(|&l| (l, c.clone())).ok_or(AlgError::Invalid("Ā is not an ideal".into())))
            .collect()
    };
    let mut d = Vec::with_capacity(space.len());
    for w in &space.words {
        let mut out = Elem::new();
        let mut eta = 0;
        for i in 0..w.len() {
            let ai = abar[w[i]];
            let s = sign(ring, eta);
            for (l, c) in to_letters(&a.d[ai])? {
                let mut nw = w.clone();
                nw[i] = l;
                if let Some(k) = space.index(&nw) {
                    add_term(ring, &mut out, k, &ring.neg(&ring.mul(&s, &c)));
                }
            }
            if i + 1 < w.len() {
                let aj = abar[w[i + 1]];
                let p = match a.mul_basis(ai, aj) {
                    Prod::Val(p) => p,
                    _ => return Err(AlgError::OutOfWindow(format!("{} * {}", a.names[ai], a.names[aj]))),
                };
                let s2 = ring.mul(&s, &sign(ring, a.deg(ai)));
                for (l, c) in to_letters(&p)? {
                    let mut nw = w[..i].to_vec();
                    nw.push(l);
                    nw.extend_from_slice(&w[i + 2..]);
                    if let Some(k) = space.index(&nw) {
                        add_term(ring, &mut out, k, &ring.mul(&s2, &c));
                    }
                }
            }
            eta += a.deg(ai) + 1;
        }
        d.push(out);
    }
    let exact_through = ((trunc.max_weight as i64 + 1).saturating_mul(g) - 1).min(trunc.deg_hi);
    let window = window_of(exact_through)?;
    let coalgebra = word_coalgebra(ring, space, d, Some(window));
    Ok(BarObject { coalgebra, letters: abar, exact_through, window })
}

/// Cobar construction with `d_Ω(s⁻¹c) = −s⁻¹(dc) + (−1)^{|c_i|} s⁻¹c_i|s⁻¹c^i`.
/// Needs the coideal in degrees at least two.
pub fn cobar(c: &DGCoalgebra, trunc: TruncationPolicy) -> Result<CobarObject, AlgError> {
    let ring = c.ring;
    if c.coaugmentation.is_none() {
        return Err(AlgError::Invalid("cobar needs a coaugmentation".into()));
    }
    let cbar = c.coideal();
    let gens: Vec<Letter> = cbar.iter().map(|&i| Letter { name: format!("⟨{}⟩", c.names[i]), degree: c.deg(i) - 1 }).collect();
    let g = gens.iter().map(|l| l.degree).min().unwrap_or(i64::MAX / 8);
    if g < 1 {
        return Err(AlgError::EmptyWindow);
    }
    let pos: BTreeMap<usize, usize> = cbar.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let mut dgen = vec![];
    for &ci in &cbar {
        let mut terms: BTreeMap<Word, Scalar> = BTreeMap::new();
        let mut push = |w: Word, v: Scalar| {
            let e = terms.entry(w).or_insert_with(Scalar::zero);
            *e = ring.add(e, &v);
        };
        for (&k, v) in &c.d[ci] {
            let l = *pos.get(&k).ok_or(AlgError::Invalid("differential leaves the coideal".into()))?;
            push(vec![l], ring.neg(v));
        }
        for (&(x, y), v) in &c.reduced(ci) {
            push(vec![pos[&x], pos[&y]], ring.mul(&sign(ring, c.deg(x)), v));
        }
        dgen.push(terms.into_iter().filter(|(_, v)| !v.is_zero()).map(|(w, v)| (v, w)).collect());
    }
    let t = TruncationPolicy { deg_lo: 0, ..trunc };
    let mut p = Presentation::new(ring, gens, dgen, vec![], t);
    p.overflow_zero = true;
    let algebra = free_algebra(&p)?;
    let exact_through = ((trunc.max_weight as i64 + 1).saturating_mul(g) - 1).min(trunc.deg_hi);
    let window = window_of(exact_through)?;
    Ok(CobarObject { algebra, letters: cbar, exact_through, window })
}

/// `ε_A: ΩBarA → A`, `s⁻¹[a] ↦ −a`, longer bar words to zero.
pub struct CounitReport {
    pub bar: BarObject,
    pub cobar: CobarObject,
    pub map: AlgebraMap,
    pub chain_map: ChainMap,
    pub window: (i64, i64),
}

pub fn counit_eps(a: &DGAlgebra, bar_trunc: TruncationPolicy, cobar_trunc: TruncationPolicy) -> Result<CounitReport, AlgError> {
    let ring = a.ring;
    let b = bar(a, bar_trunc)?;
    let om = cobar(&b.coalgebra, cobar_trunc)?;
    let ws = b.coalgebra.words.as_ref().unwrap();
    let gen_images: Vec<Elem> = om
        .letters
        .iter()
        .map(|&bi| {
            let w = &ws.words[bi];
            if w.len() == 1 {
                Elem::from([(b.letters[w[0]], ring.neg(&ring.one()))])
            } else {
                Elem::new()
            }
        })
        .collect();
    let map = AlgebraMap::from_generators(&om.algebra, a, &gen_images)?;
    map.check(&om.algebra, a)?;
    let chain_map = map.chain_map(&om.algebra, a);
    // source truncated; A exact
    let hi = om.exact_through.min(b.exact_through - 1);
    let window = window_of(hi + 1)?;
    Ok(CounitReport { bar: b, cobar: om, map, chain_map, window })
}

/// `η_C: C → BarΩC` with corestriction `c ↦ −[s⁻¹c]`. The top degrees of
/// both truncations are raised so that `η` lands in the bar construction
/// and products of cobar letters inside bar words stay in the basis.
pub struct UnitReport {
    pub cobar: CobarObject,
    pub bar: BarObject,
    pub map: CoalgebraMap,
    pub chain_map: ChainMap,
    pub window: (i64, i64),
}

pub fn unit_eta(c: &DGCoalgebra, cobar_trunc: TruncationPolicy, bar_trunc: TruncationPolicy) -> Result<UnitReport, AlgError> {
    let ring = c.ring;
    let top = c.basis.degs.iter().copied().max().unwrap_or(0);
    let bar_trunc = TruncationPolicy { deg_hi: bar_trunc.deg_hi.max(top), ..bar_trunc };
    let cobar_hi = cobar_trunc.deg_hi.max(bar_trunc.deg_hi - 2).max(top - 1);
    let om = cobar(c, TruncationPolicy { deg_hi: cobar_hi, ..cobar_trunc })?;
    let b = bar(&om.algebra, bar_trunc)?;
    let omws = om.algebra.words().unwrap();
    let letter_of: BTreeMap<usize, usize> = b.letters.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let mut f = vec![Elem::new(); c.len()];
    for (l, &ci) in om.letters.iter().enumerate() {
        let wi = omws.index(&[l]).ok_or(AlgError::OutOfWindow(c.names[ci].clone()))?;
        f[ci] = Elem::from([(letter_of[&wi], ring.neg(&ring.one()))]);
    }
    let map = from_corestriction(c, &b.coalgebra, &f)?;
    map.check(c, &b.coalgebra)?;
    let chain_map = map.chain_map(c, &b.coalgebra);
    // Bar(Ω^{≤W}) agrees with BarΩ through the degree where long cobar words start
    let through = b.exact_through.min(om.exact_through + 1);
    let window = window_of(through)?;
    Ok(UnitReport { cobar: om, bar: b, map, chain_map, window })
}

/// Degrees in the window where the cone of `f` has nonzero homology.
pub fn cone_defects(f: &ChainMap, window: (i64, i64)) -> Vec<i64> {
    let c = cone(f);
    (window.0..=window.1).filter(|&n| !homology(&c, n).is_zero()).collect()
}

/// One layer of a word-length filtration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layer {
    pub length: usize,
    pub ranks: BTreeMap<i64, usize>,
    /// The inclusion (bar) or quotient map (cobar) is degreewise split.
    pub split: bool,
    /// Induced reduced (co)multiplication on the layer vanishes.
    pub trivial: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiltrationReport {
    pub layers: Vec<Layer>,
}

impl FiltrationReport {
    pub fn ok(&self) -> bool {
        self.layers.iter().all(|l| l.split && l.trivial)
    }
}

fn sub_by_length(ring: Ring, basis: &GradedBasis, d: &[Elem], keep: &[bool]) -> (ChainComplex, GradedBasis, Vec<usize>) {
    let idx: Vec<usize> = (0..basis.len()).filter(|&i| keep[i]).collect();
    let pos: BTreeMap<usize, usize> = idx.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let sb = GradedBasis::new(idx.iter().map(|&i| basis.degs[i]).collect());
    let sd: Vec<Elem> = idx
        .iter()
        .map(|&i| d[i].iter().filter_map(|(k, c)| pos.get(k).map(|&p| (p, c.clone()))).collect())
        .collect();
    (sb.complex(ring, &sd), sb, idx)
}

/// `R = F₀ ⊂ F₁ ⊂ …` by word length, with split inclusions and layers whose
/// reduced comultiplication vanishes.
pub fn bar_filtration(b: &BarObject) -> FiltrationReport {
    let c = &b.coalgebra;
    let ws = c.words.as_ref().unwrap();
    let ring = c.ring;
    let mut layers = vec![];
    let mut prev: Option<(ChainComplex, GradedBasis, Vec<usize>)> = None;
    for k in 0..=ws.max_weight {
        let keep: Vec<bool> = ws.words.iter().map(|w| w.len() <= k).collect();
        if k > 0 && !ws.words.iter().any(|w| w.len() == k) {
            break;
        }
        let cur = sub_by_length(ring, &c.basis, &c.d, &keep);
        let split = match &prev {
            None => true,
            Some((pc, pb, pidx)) => {
                let images: Vec<Elem> =
                    pidx.iter().map(|&i| single(ring, cur.2.iter().position(|&j| j == i).unwrap())).collect();
                let f = pb.chain_map(ring, pc, &cur.1, &cur.0, &images);
                f.is_chain_map() && pc.degrees().all(|n| is_split_mono(&f.f(n)))
            }
        };
        // reduced comultiplication of a length-k word lands in shorter words
        let trivial = k == 0
            || ws.words.iter().enumerate().filter(|(_, w)| w.len() == k).all(|(i, _)| {
                c.reduced(i).keys().all(|&(x, y)| ws.words[x].len() < k && ws.words[y].len() < k)
            });
        let mut ranks = BTreeMap::new();
        for (i, w) in ws.words.iter().enumerate() {
            if w.len() == k {
                *ranks.entry(c.deg(i)).or_insert(0) += 1;
            }
        }
        layers.push(Layer { length: k, ranks, split, trivial });
        prev = Some(cur);
    }
    FiltrationReport { layers }
}

/// `TX/T^{≥k+1}X ↠ TX/T^{≥k}X` for each `k`, with split quotient maps and
/// square-zero layers.
pub fn cobar_filtration(o: &CobarObject) -> FiltrationReport {
    let a = &o.algebra;
    let ws = a.words().unwrap();
    let ring = a.ring;
    let mut layers = vec![];
    let quotient = |k: usize| -> (ChainComplex, GradedBasis, Vec<usize>) {
        let keep: Vec<bool> = ws.words.iter().map(|w| w.len() <= k).collect();
        // quotient by longer words: drop them from the differential
        sub_by_length(ring, &a.basis, &a.d, &keep)
    };
    let mut prev: Option<(ChainComplex, GradedBasis, Vec<usize>)> = None;
    for k in 0..=ws.max_weight {
        if k > 0 && !ws.words.iter().any(|w| w.len() == k) {
            break;
        }
        let cur = quotient(k);
        let split = match &prev {
            None => true,
            Some((pc, pb, pidx)) => {
                let images: Vec<Elem> = cur
                    .2
                    .iter()
                    .map(|&i| match pidx.iter().position(|&j| j == i) {
                        Some(p) => single(ring, p),
                        None => Elem::new(),
                    })
                    .collect();
                let f = cur.1.chain_map(ring, &cur.0, pb, pc, &images);
                f.is_chain_map() && cur.0.degrees().all(|n| is_split_epi(&f.f(n)))
            }
        };
        let layer: Vec<usize> = (0..ws.len()).filter(|&i| ws.words[i].len() == k).collect();
        let trivial = k == 0
            || layer.iter().all(|&i| {
                layer.iter().all(|&j| match a.mul_basis(i, j) {
                    Prod::Val(e) => e.keys().all(|&m| ws.words[m].len() > k),
                    _ => true,
                })
            });
        let mut ranks = BTreeMap::new();
        for &i in &layer {
            *ranks.entry(a.deg(i)).or_insert(0) += 1;
        }
        layers.push(Layer { length: k, ranks, split, trivial });
        prev = Some(cur);
    }
    FiltrationReport { layers }
}

/// `Bar(X,A,A) = ⊕ₙ X⊗(sĀ)^{⊗n}⊗A` with its augmentation to `X`.
pub struct TwoSidedBar {
    pub module: DGModule,
    /// `(x, bar word, b)` for each basis element.
    pub triples: Vec<(usize, Word, usize)>,
    pub bar_words: WordSpace,
    /// Basis index in `A` of each bar letter.
    pub letters: Vec<usize>,
    pub aug: Vec<Elem>,
    pub exact_through: i64,
    pub window: (i64, i64),
}

impl TwoSidedBar {
    pub fn index(&self, t: &(usize, Word, usize)) -> Option<usize> {
        self.triples.iter().position(|s| s == t)
    }

    pub fn aug_map(&self, x: &DGModule) -> ChainMap {
        self.module.chain_map(x, &self.aug)
    }
}

pub fn two_sided_bar(x: &DGModule, trunc: TruncationPolicy) -> Result<TwoSidedBar, AlgError> {
    let a = x.algebra.clone();
    let ring = a.ring;
    let abar = a.augmentation_ideal()?;
    let pos: BTreeMap<usize, usize> = abar.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let letters: Vec<Letter> = abar.iter().map(|&i| Letter { name: format!("[{}]", a.names[i]), degree: a.deg(i) + 1 }).collect();
    let g = letters.iter().map(|l| l.degree).min().unwrap_or(i64::MAX / 8);
    if g < 1 {
        return Err(AlgError::EmptyWindow);
    }
    if (0..a.len()).any(|i| a.deg(i) < 0) {
        return Err(AlgError::Invalid("two-sided bar needs a non-negatively graded algebra".into()));
    }
    let xlo = x.basis.degs.iter().copied().min().unwrap_or(0);
    let hi = trunc.deg_hi;
    let space = WordSpace::new(letters, vec![], trunc.max_weight, 0, hi - xlo);
    let mut triples = vec![];
    let mut degs = vec![];
    let mut by_deg: BTreeMap<i64, Vec<(usize, Word, usize)>> = BTreeMap::new();
    for xi in 0..x.len() {
        for w in &space.words {
            for b in 0..a.len() {
                let n = x.deg(xi) + space.degree(w) + a.deg(b);
                if n <= hi {
                    by_deg.entry(n).or_default().push((xi, w.clone(), b));
                }
            }
        }
    }
    for (n, ts) in by_deg {
        for t in ts {
            triples.push(t);
            degs.push(n);
        }
    }
    let index: BTreeMap<(usize, Word, usize), usize> = triples.iter().cloned().enumerate().map(|(k, t)| (t, k)).collect();
    let to_letters = |e: &Elem| -> Vec<(usize, Scalar)> { e.iter().filter_map(|(k, c)| pos.get(k).map(|&l| (l, c.clone()))).collect() };
    let prod = |i: usize, j: usize| -> Result<Elem, AlgError> {
        a.mul_basis(i, j).val().ok_or_else(|| AlgError::OutOfWindow(format!("{} * {}", a.names[i], a.names[j])))
    };
    let mut d = vec![];
    for (xi, w, b) in &triples {
        let (xi, b) = (*xi, *b);
        let mut out = Elem::new();
        let mut put = |t: (usize, Word, usize), c: &Scalar| {
            if let Some(&k) = index.get(&t) {
                add_term(ring, &mut out, k, c);
            }
        };
        let dx = x.deg(xi);
        let dw = space.degree(w);
        for (&k, c) in &x.d[xi] {
            put((k, w.clone(), b), c);
        }
        // bar differential on the middle word
        let mut eta = dx;
        for i in 0..w.len() {
            let ai = abar[w[i]];
            let s = sign(ring, eta);
            for (l, c) in to_letters(&a.d[ai]) {
                let mut nw = w.clone();
                nw[i] = l;
                put((xi, nw, b), &ring.neg(&ring.mul(&s, &c)));
            }
            if i + 1 < w.len() {
                let s2 = ring.mul(&s, &sign(ring, a.deg(ai)));
                for (l, c) in to_letters(&prod(ai, abar[w[i + 1]])?) {
                    let mut nw = w[..i].to_vec();
                    nw.push(l);
                    nw.extend_from_slice(&w[i + 2..]);
                    put((xi, nw, b), &ring.mul(&s2, &c));
                }
            }
            eta += a.deg(ai) + 1;
        }
        let s = sign(ring, dx + dw);
        for (&k, c) in &a.d[b] {
            put((xi, w.clone(), k), &ring.mul(&s, c));
        }
        if !w.is_empty() {
            // x·a₁ ⊗ [a₂|…] ⊗ b
            let a1 = abar[w[0]];
            let sl = sign(ring, dx + LEFT_TWIST);
            match &x.action[xi][a1] {
                Prod::Val(e) => {
                    for (&k, c) in e {
                        put((k, w[1..].to_vec(), b), &ring.mul(&sl, c));
                    }
                }
                _ => return Err(AlgError::OutOfWindow(format!("{}·{}", x.names[xi], a.names[a1]))),
            }
            // x ⊗ [a₁|…|aₙ₋₁] ⊗ aₙb
            let an = abar[*w.last().unwrap()];
            let head = &w[..w.len() - 1];
            let sr = sign(ring, dx + space.degree(head) + RIGHT_TWIST);
            for (&k, c) in &prod(an, b)? {
                put((xi, head.to_vec(), k), &ring.mul(&sr, c));
            }
        }
        d.push(out);
    }
    let mut action = vec![];
    for (xi, w, b) in &triples {
        let row = (0..a.len())
            .map(|c| match a.mul_basis(*b, c) {
                Prod::Val(e) => {
                    let mut out = Elem::new();
                    for (&k, v) in &e {
                        match index.get(&(*xi, w.clone(), k)) {
                            Some(&p) => add_term(ring, &mut out, p, v),
                            None => return Prod::Degree,
                        }
                    }
                    Prod::Val(out)
                }
                o => o,
            })
            .collect();
        action.push(row);
    }
    let names = triples.iter().map(|(xi, w, b)| format!("{}⊗{}⊗{}", x.names[*xi], space.name(w), a.names[*b])).collect();
    let module = DGModule::new(a.clone(), names, degs, d, action);
    let mut aug = vec![];
    for (xi, w, b) in &triples {
        aug.push(if w.is_empty() {
            x.action[*xi][*b].clone().val().ok_or_else(|| AlgError::OutOfWindow(format!("{}·{}", x.names[*xi], a.names[*b])))?
        } else {
            Elem::new()
        });
    }
    let bmin = 0;
    let exact_through = ((trunc.max_weight as i64 + 1).saturating_mul(g) + xlo + bmin - 1).min(hi);
    if exact_through < xlo {
        return Err(AlgError::EmptyWindow);
    }
    let window = (xlo, exact_through);
    Ok(TwoSidedBar { module, triples, bar_words: space, letters: abar, aug, exact_through, window })
}

const LEFT_TWIST: i64 = 1;
const RIGHT_TWIST: i64 = 0;

/// Comodule over an `A`-coring `D⊗A`: a right `A`-module with an `A`-linear
/// coaction `X → X⊗D`, where `(x⊗δ)·a = (-1)^{|a||δ|} xa⊗δ`.
#[derive(Clone, Debug)]
pub struct CoringComodule {
    pub module: DGModule,
    pub comodule: Comodule,
}

impl CoringComodule {
    pub fn check_linear(&self) -> Result<(), AlgError> {
        coaction_linear(&self.module, &self.comodule)
    }
}

/// `ρ(m·a) = ρ(m)·a` on every basis pair with the action in window.
pub fn coaction_linear(m: &DGModule, c: &Comodule) -> Result<(), AlgError> {
    let a = &m.algebra;
    let ring = a.ring;
    let dcoal = &c.coalgebra;
    for i in 0..m.len() {
        for j in 0..a.len() {
            let Prod::Val(ma) = &m.action[i][j] else { continue };
            let lhs = c.coact(ma);
            let mut rhs = Elem2::new();
            let mut ok = true;
            for (&(m0, dl), v) in &c.coaction[i] {
                match &m.action[m0][j] {
                    Prod::Val(e) => {
                        let s = ring.mul(v, &sign(ring, a.deg(j) * dcoal.deg(dl)));
                        for (&k, w) in e {
                            add_term2(ring, &mut rhs, (k, dl), &ring.mul(&s, w));
                        }
                    }
                    _ => ok = false,
                }
            }
            if ok && lhs != rhs {
                return Err(AlgError::Invalid(format!("coaction not A-linear on {}·{}", m.names[i], a.names[j])));
            }
        }
    }
    Ok(())
}

/// `M⊗A` for a `D`-comodule `M`, with action on the right factor and
/// coaction `ρ(m⊗b) = (-1)^{|m₁||b|} (m₀⊗b)⊗m₁`.
pub fn induced_coring_comodule(m: &Comodule, a: Arc<DGAlgebra>) -> CoringComodule {
    let ring = a.ring;
    let order = crate::basis::tensor_order(&m.basis, &a.basis);
    let pos = crate::basis::tensor_index(&order);
    let mut names = vec![];
    let mut degs = vec![];
    let mut d = vec![];
    let mut action = vec![];
    let mut coaction = vec![];
    for &(mi, b) in &order {
        names.push(format!("{}⊗{}", m.names[mi], a.names[b]));
        degs.push(m.deg(mi) + a.deg(b));
        let mut e = Elem::new();
        for (&k, c) in &m.d[mi] {
            add_term(ring, &mut e, pos[&(k, b)], c);
        }
        let s = sign(ring, m.deg(mi));
        for (&k, c) in &a.d[b] {
            add_term(ring, &mut e, pos[&(mi, k)], &ring.mul(&s, c));
        }
        d.push(e);
        action.push(
            (0..a.len())
                .map(|c| match a.mul_basis(b, c) {
                    Prod::Val(p) => {
                        let mut out = Elem::new();
                        for (&k, v) in &p {
                            match pos.get(&(mi, k)) {
                                Some(&q) => add_term(ring, &mut out, q, v),
                                None => return Prod::Degree,
                            }
                        }
                        Prod::Val(out)
                    }
                    o => o,
                })
                .collect(),
        );
        let mut co = Elem2::new();
        for (&(m0, dl), v) in &m.coaction[mi] {
            let s = sign(ring, m.coalgebra.deg(dl) * a.deg(b));
            add_term2(ring, &mut co, (pos[&(m0, b)], dl), &ring.mul(&s, v));
        }
        coaction.push(co);
    }
    let module = DGModule::new(a, names.clone(), degs.clone(), d.clone(), action);
    let comodule = Comodule::new(m.coalgebra.clone(), names, degs, d, coaction);
    CoringComodule { module, comodule }
}

/// Lifted coaction on `Bar(X,A,A)`. With `literal` set, words of positive
/// length go to zero; otherwise the coaction of `X` is carried past the
/// word and the right factor, `x⊗w⊗b ↦ (-1)^{|x₁|(|w|+|b|)} (x₀⊗w⊗b)⊗x₁`.
pub fn lifted_coaction(bar: &TwoSidedBar, x: &CoringComodule, literal: bool) -> Comodule {
    let ring = bar.module.algebra.ring;
    let dcoal = x.comodule.coalgebra.clone();
    let a = &bar.module.algebra;
    let index: BTreeMap<(usize, Word, usize), usize> = bar.triples.iter().cloned().enumerate().map(|(k, t)| (t, k)).collect();
    let mut coaction = vec![];
    for (xi, w, b) in &bar.triples {
        let mut co = Elem2::new();
        if !(literal && !w.is_empty()) {
            let tail = bar.bar_words.degree(w) + a.deg(*b);
            for (&(x0, dl), v) in &x.comodule.coaction[*xi] {
                let s = sign(ring, dcoal.deg(dl) * tail);
                if let Some(&k) = index.get(&(x0, w.clone(), *b)) {
                    add_term2(ring, &mut co, (k, dl), &ring.mul(&s, v));
                }
            }
        }
        coaction.push(co);
    }
    let m = &bar.module;
    Comodule::new(dcoal, m.names.clone(), m.basis.degs.clone(), m.d.clone(), coaction)
}

/// Outcome of the lifted-coaction checks on one triple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoactionReport {
    pub chain: bool,
    pub coassociative: bool,
    pub counital: bool,
    pub linear: bool,
    pub aug_comodule_map: bool,
    pub aug_module_map: bool,
    pub quasi_iso: bool,
}

impl CoactionReport {
    pub fn comodule_structure(&self) -> bool {
        self.chain && self.coassociative && self.counital && self.linear
    }

    pub fn all(&self) -> bool {
        self.comodule_structure() && self.aug_comodule_map && self.aug_module_map && self.quasi_iso
    }
}

pub fn check_lifted_coaction(bar: &TwoSidedBar, x: &CoringComodule, literal: bool) -> CoactionReport {
    let co = lifted_coaction(bar, x, literal);
    let f = bar.aug_map(&x.module);
    CoactionReport {
        chain: co.check_chain().is_ok(),
        coassociative: co.check_coassociative().is_ok(),
        counital: co.check_counit().is_ok(),
        linear: coaction_linear(&bar.module, &co).is_ok(),
        aug_comodule_map: co.is_comodule_map(&x.comodule, &bar.aug),
        aug_module_map: bar.module.is_module_map(&x.module, &bar.aug),
        quasi_iso: f.is_chain_map() && cone_defects(&f, bar.window).is_empty(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dga::Presentation;

    fn dual_numbers(ring: Ring, deg: i64) -> DGAlgebra {
        let mut p = Presentation::free(ring, &[("x", deg)], TruncationPolicy::new(4, 0, 12));
        p.relations = vec![vec![0, 0]];
        free_algebra(&p).unwrap()
    }

    #[test]
    fn bar_of_unit_is_unit() {
        let r = Ring::fp(3);
        let b = bar(&DGAlgebra::unit_algebra(r), TruncationPolicy::new(3, 0, 6)).unwrap();
        assert_eq!(b.coalgebra.len(), 1);
    }

    #[test]
    fn bar_of_odd_dual_numbers_over_f2() {
        let a = dual_numbers(Ring::fp(2), 1);
        let b = bar(&a, TruncationPolicy::new(5, 0, 20)).unwrap();
        assert!(b.coalgebra.d.iter().all(|e| e.is_empty()));
        assert_eq!(b.coalgebra.complex.ranks(), (0..=5).map(|k| (2 * k, 1)).collect());
        b.coalgebra.verify().unwrap();
    }

    #[test]
    fn two_sided_bar_is_a_complex() {
        let a = Arc::new(dual_numbers(Ring::fp(5), 1));
        let x = DGModule::regular(a.clone());
        let t = two_sided_bar(&x, TruncationPolicy::new(3, 0, 6)).unwrap();
        t.module.complex.validate().unwrap();
        assert!(t.aug_map(&x).is_chain_map());
    }
}

/// Regression inputs for the bar and cobar suites.
pub mod samples {
    use super::*;
    use crate::chain::{direct_sum, disk, sphere};
    use crate::coalg::cofree_coalgebra;

    fn quotient(ring: Ring, gens: &[(&str, i64)], rel: Vec<Word>, d: Vec<Vec<(i64, Word)>>, w: usize) -> DGAlgebra {
        let mut p = Presentation::free(ring, gens, TruncationPolicy::new(w, 0, 40));
        p.relations = rel;
        if !d.is_empty() {
            p.d = d.into_iter().map(|t| t.into_iter().map(|(c, w)| (ring.from_i64(c), w)).collect()).collect();
        }
        p.overflow_zero = true;
        free_algebra(&p).expect("regression algebra")
    }

    /// Finite augmented algebras with `Ā` in positive degrees.
    pub fn algebras(ring: Ring) -> Vec<(String, DGAlgebra)> {
        vec![
            ("R".into(), DGAlgebra::unit_algebra(ring)),
            ("R[x]/x², |x|=1".into(), quotient(ring, &[("x", 1)], vec![vec![0, 0]], vec![], 4)),
            ("R[x]/x², |x|=2".into(), quotient(ring, &[("x", 2)], vec![vec![0, 0]], vec![], 4)),
            ("R[x]/x³, |x|=2".into(), quotient(ring, &[("x", 2)], vec![vec![0, 0, 0]], vec![], 4)),
            ("T(x)/T≥4, |x|=1".into(), quotient(ring, &[("x", 1)], vec![], vec![], 3)),
            ("T(x,y)/T≥3, |x|=|y|=1".into(), quotient(ring, &[("x", 1), ("y", 1)], vec![], vec![], 2)),
            ("T(x,y)/T≥3, |x|=1, |y|=2".into(), quotient(ring, &[("x", 1), ("y", 2)], vec![], vec![], 2)),
            ("Λ(x,y)/T≥3, |x|=|y|=1".into(), quotient(ring, &[("x", 1), ("y", 1)], vec![vec![0, 0], vec![1, 1]], vec![], 2)),
            (
                "T(x,y)/T≥3, |x|=1, |y|=3, dy=x²".into(),
                quotient(ring, &[("x", 1), ("y", 3)], vec![], vec![vec![], vec![(1, vec![0, 0])]], 2),
            ),
            (
                "T(x,y)/T≥3, |x|=2, |y|=3, dy=x".into(),
                quotient(ring, &[("x", 2), ("y", 3)], vec![], vec![vec![], vec![(1, vec![0])]], 2),
            ),
            ("R[x]/x⁴, |x|=2".into(), quotient(ring, &[("x", 2)], vec![vec![0, 0, 0, 0]], vec![], 4)),
        ]
    }

    /// Conilpotent coalgebras with coideal in degrees at least two.
    pub fn coalgebras(ring: Ring) -> Vec<(String, DGCoalgebra)> {
        let s = |n| sphere(n, ring);
        let sum = |a: ChainComplex, b: ChainComplex| direct_sum(&a, &b).sum;
        let bar_of = |a: DGAlgebra, w| bar(&a, TruncationPolicy::new(w, 0, 40)).unwrap().coalgebra;
        let alg = algebras(ring);
        vec![
            ("R".into(), DGCoalgebra::unit_coalgebra(ring)),
            ("T^co(x)≤1, |x|=2".into(), cofree_coalgebra(&s(2), 1)),
            ("T^co(x)≤1, |x|=3".into(), cofree_coalgebra(&s(3), 1)),
            ("T^co(x)≤3, |x|=2".into(), cofree_coalgebra(&s(2), 3)),
            ("T^co(x)≤3, |x|=3".into(), cofree_coalgebra(&s(3), 3)),
            ("T^co(x,y)≤2, |x|=|y|=2".into(), cofree_coalgebra(&sum(s(2), s(2)), 2)),
            ("T^co(x,y)≤2, |x|=2, |y|=3".into(), cofree_coalgebra(&sum(s(2), s(3)), 2)),
            ("T^co(D³)≤2".into(), cofree_coalgebra(&disk(3, ring), 2)),
            ("T^co(x,y)≤2, |x|=2, |y|=4".into(), cofree_coalgebra(&sum(s(2), s(4)), 2)),
            ("Bar(R[x]/x²)≤3, |x|=1".into(), bar_of(alg[1].1.clone(), 3)),
            ("Bar(T(x,y)/T≥3)≤1, |x|=2, |y|=3, dy=x".into(), bar_of(alg[9].1.clone(), 1)),
        ]
    }

    /// An algebra `A`, coalgebra `D` and coring comodule `X = M⊗A` for case
    /// `idx`, where `M` is a cofree comodule on a random complex or the
    /// cylinder of one.
    pub fn coring_triple(ring: Ring, seed: u64, idx: u64) -> (String, CoringComodule) {
        use crate::coalg::{cofree_comodule, comodule_cylinder};
        use crate::random::{case_rng, complex, Bounds};
        use rand::Rng;
        let mut rng = case_rng(seed, idx);
        let alg = algebras(ring);
        let coal = coalgebras(ring);
        let (an, a) = alg[[1, 2, 3, 9, 10][rng.gen_range(0..5)]].clone();
        let (dn, d) = coal[[1, 2, 3, 9][rng.gen_range(0..4)]].clone();
        let y = complex(ring, Bounds { max_rank: 2, deg_lo: 0, deg_hi: 1 }, &mut rng);
        let m = cofree_comodule(&y, Arc::new(d));
        let (kind, m) = if rng.gen_bool(0.5) { ("cyl", comodule_cylinder(&m).cyl) } else { ("cofree", m) };
        let name = format!("A={an}; D={dn}; M={kind}{:?}", y.ranks());
        (name, induced_coring_comodule(&m, Arc::new(a)))
    }
}
