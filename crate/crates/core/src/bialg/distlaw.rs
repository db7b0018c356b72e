//! Distributive laws `χ: TK ⇒ KT` between the tensor algebra monad `T`
//! and the comonad `K = −⊗H` of a bialgebra, checked on spaces of nested
//! words truncated by weight.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::Zero;
use serde_json::{json, Value};

use super::Bialgebra;
use crate::basis::{add_term, add_term2, add_term3, sign, Elem, Elem2, Elem3, GradedBasis};
use crate::chain::{ChainComplex, ChainMap};
use crate::dga::{AlgError, DGAlgebra, Prod};
use crate::exactlin::{Ring, Scalar};
use crate::random::{case_rng, complex, Bounds};

/// Linear map between finite bases, one sparse image per source element.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseArrow {
    pub dst_len: usize,
    pub images: Vec<Elem>,
}

impl SparseArrow {
    pub fn src_len(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, ring: Ring, e: &Elem) -> Elem {
        let mut out = Elem::new();
        for (&i, c) in e {
            for (&k, v) in &self.images[i] {
                add_term(ring, &mut out, k, &ring.mul(c, v));
            }
        }
        out
    }

    /// `self ∘ first`.
    pub fn compose(&self, ring: Ring, first: &SparseArrow) -> Result<SparseArrow, String> {
        if first.dst_len != self.src_len() {
            return Err(format!("cannot compose: {} into {}", first.dst_len, self.src_len()));
        }
        Ok(SparseArrow { dst_len: self.dst_len, images: first.images.iter().map(|e| self.apply(ring, e)).collect() })
    }
}

/// Components of a candidate law and of the monad and comonad structure
/// whisker-composed with it, all at one object.
#[derive(Clone, Debug)]
pub struct DistLawData {
    pub name: String,
    pub ring: Ring,
    pub eta_k: SparseArrow,
    pub k_eta: SparseArrow,
    pub chi: SparseArrow,
    pub eps_t: SparseArrow,
    pub t_eps: SparseArrow,
    pub mu_k: SparseArrow,
    pub t_chi: SparseArrow,
    pub chi_t: SparseArrow,
    pub k_mu: SparseArrow,
    pub t_delta: SparseArrow,
    pub chi_k: SparseArrow,
    pub k_chi: SparseArrow,
    pub delta_t: SparseArrow,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagramCheck {
    pub diagram: String,
    pub checked: usize,
    pub failing: usize,
    pub first_failure: Option<usize>,
}

impl DiagramCheck {
    pub fn ok(&self) -> bool {
        self.failing == 0
    }
}

#[derive(Clone, Debug)]
pub struct DistLawReport {
    pub name: String,
    pub diagrams: Vec<DiagramCheck>,
}

impl DistLawReport {
    pub fn ok(&self) -> bool {
        self.diagrams.iter().all(DiagramCheck::ok)
    }

    pub fn failing(&self) -> Vec<&str> {
        self.diagrams.iter().filter(|d| !d.ok()).map(|d| d.diagram.as_str()).collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "ok": self.ok(),
            "diagrams": self.diagrams.iter().map(|d| json!({
                "diagram": d.diagram,
                "checked": d.checked,
                "failing": d.failing,
                "first_failure": d.first_failure,
            })).collect::<Vec<_>>(),
        })
    }
}

fn compare(diagram: &str, lhs: &SparseArrow, rhs: &SparseArrow) -> Result<DiagramCheck, String> {
    if lhs.src_len() != rhs.src_len() || lhs.dst_len != rhs.dst_len {
        return Err(format!("{diagram}: the two sides have different shapes"));
    }
    let bad: Vec<usize> = (0..lhs.src_len()).filter(|&i| lhs.images[i] != rhs.images[i]).collect();
    Ok(DiagramCheck { diagram: diagram.into(), checked: lhs.src_len(), failing: bad.len(), first_failure: bad.first().copied() })
}

/// The unit, multiplication, counit and comultiplication diagrams:
/// `χ∘ηK = Kη`, `χ∘μK = Kμ∘χT∘Tχ`, `εT∘χ = Tε`, `δT∘χ = Kχ∘χK∘Tδ`.
pub fn check_distributive_law(l: &DistLawData) -> Result<DistLawReport, String> {
    let r = l.ring;
    let diagrams = vec![
        compare("unit", &l.chi.compose(r, &l.eta_k)?, &l.k_eta)?,
        compare("multiplication", &l.chi.compose(r, &l.mu_k)?, &l.k_mu.compose(r, &l.chi_t.compose(r, &l.t_chi)?)?)?,
        compare("counit", &l.eps_t.compose(r, &l.chi)?, &l.t_eps)?,
        compare("comultiplication", &l.delta_t.compose(r, &l.chi)?, &l.k_chi.compose(r, &l.chi_k.compose(r, &l.t_delta)?)?)?,
    ];
    Ok(DistLawReport { name: l.name.clone(), diagrams })
}

/// Deliberate sign errors in `χ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mutation {
    /// Negate `χ` on words of this length.
    FlipLength(usize),
    /// Drop the `|h_i||a_j|` term (1-based, `i < j`) on words of length `n`.
    DropPair { n: usize, i: usize, j: usize },
    /// Use `|a_1||h_2|` in place of `|h_1||a_2|` on words of length two.
    SwapPair,
}

impl fmt::Display for Mutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mutation::FlipLength(n) => write!(f, "flip-length-{n}"),
            Mutation::DropPair { n, i, j } => write!(f, "drop-pair-{n}-{i}{j}"),
            Mutation::SwapPair => write!(f, "swap-pair-2"),
        }
    }
}

pub fn all_mutations() -> Vec<Mutation> {
    vec![
        Mutation::FlipLength(1),
        Mutation::FlipLength(2),
        Mutation::FlipLength(3),
        Mutation::DropPair { n: 2, i: 1, j: 2 },
        Mutation::DropPair { n: 3, i: 1, j: 2 },
        Mutation::DropPair { n: 3, i: 1, j: 3 },
        Mutation::DropPair { n: 3, i: 2, j: 3 },
        Mutation::SwapPair,
    ]
}

/// Nested words over the basis of `X`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Node {
    Leaf(usize),
    Word(Vec<Node>),
    Tens(Box<Node>, usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Op {
    T,
    K,
}

/// Basis of a composite `F₁⋯F_k(X)` truncated by weight and word length.
#[derive(Clone, Debug)]
pub struct NodeSpace {
    pub shape: Vec<Op>,
    pub nodes: Vec<Node>,
    pub degs: Vec<i64>,
    index: HashMap<Node, usize>,
}

impl NodeSpace {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn index(&self, n: &Node) -> Option<usize> {
        self.index.get(n).copied()
    }

    pub fn shape_name(&self) -> String {
        self.shape.iter().map(|o| if *o == Op::T { 'T' } else { 'K' }).collect()
    }
}

type Comb = BTreeMap<Node, Scalar>;

fn push(ring: Ring, c: &mut Comb, n: Node, v: &Scalar) {
    if v.is_zero() {
        return;
    }
    let new = ring.add(c.get(&n).unwrap_or(&Scalar::zero()), v);
    if new.is_zero() {
        c.remove(&n);
    } else {
        c.insert(n, new);
    }
}

/// `X`, `H` and the truncation shared by every node space.
#[derive(Clone, Debug)]
pub struct TensorLaw {
    pub ring: Ring,
    pub x_degs: Vec<i64>,
    pub x_d: Vec<Elem>,
    pub h: Bialgebra,
    pub max_weight: usize,
    pub mutation: Option<Mutation>,
}

/// Basis of `X` in degree order, with the differential on it.
fn leaves(x: &ChainComplex) -> (Vec<i64>, Vec<Elem>) {
    let ring = x.ring();
    let mut degs = vec![];
    let mut start = BTreeMap::new();
    for n in x.degrees() {
        start.insert(n, degs.len());
        degs.extend(std::iter::repeat(n).take(x.rank(n)));
    }
    let mut d = vec![Elem::new(); degs.len()];
    for n in x.degrees() {
        if x.rank(n) == 0 || x.rank(n - 1) == 0 {
            continue;
        }
        let m = x.d(n);
        for j in 0..m.cols() {
            for i in 0..m.rows() {
                add_term(ring, &mut d[start[&n] + j], start[&(n - 1)] + i, m.get(i, j));
            }
        }
    }
    (degs, d)
}

impl TensorLaw {
    pub fn new(x: &ChainComplex, h: &Bialgebra, max_weight: usize, mutation: Option<Mutation>) -> TensorLaw {
        let (x_degs, x_d) = leaves(x);
        TensorLaw { ring: h.ring(), x_degs, x_d, h: h.clone(), max_weight, mutation }
    }

    pub fn deg(&self, n: &Node) -> i64 {
        match n {
            Node::Leaf(i) => self.x_degs[*i],
            Node::Word(cs) => cs.iter().map(|c| self.deg(c)).sum(),
            Node::Tens(c, h) => self.deg(c) + self.h.deg(*h),
        }
    }

    pub fn weight(n: &Node) -> usize {
        match n {
            Node::Leaf(_) => 1,
            Node::Word(cs) => cs.iter().map(Self::weight).sum(),
            Node::Tens(c, _) => Self::weight(c),
        }
    }

    fn enumerate(&self, shape: &[Op], maxw: usize) -> Vec<(Node, usize)> {
        match shape.first() {
            None => (0..self.x_degs.len()).filter(|_| maxw >= 1).map(|i| (Node::Leaf(i), 1)).collect(),
            Some(Op::K) => {
                let inner = self.enumerate(&shape[1..], maxw);
                inner.into_iter().flat_map(|(n, w)| (0..self.h.len()).map(move |h| (Node::Tens(Box::new(n.clone()), h), w))).collect()
            }
            Some(Op::T) => {
                let inner = self.enumerate(&shape[1..], maxw);
                let mut out = vec![];
                let mut stack: Vec<(Vec<Node>, usize)> = vec![(vec![], 0)];
                while let Some((w, wt)) = stack.pop() {
                    if w.len() < self.max_weight {
                        for (n, nw) in &inner {
                            if wt + nw <= maxw {
                                let mut w2 = w.clone();
                                w2.push(n.clone());
                                stack.push((w2, wt + nw));
                            }
                        }
                    }
                    out.push((Node::Word(w), wt));
                }
                out
            }
        }
    }

    pub fn space(&self, shape: &[Op]) -> NodeSpace {
        let mut nodes: Vec<(i64, Node)> = self.enumerate(shape, self.max_weight).into_iter().map(|(n, _)| (self.deg(&n), n)).collect();
        nodes.sort();
        let degs = nodes.iter().map(|p| p.0).collect();
        let nodes: Vec<Node> = nodes.into_iter().map(|p| p.1).collect();
        let index = nodes.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
        NodeSpace { shape: shape.to_vec(), nodes, degs, index }
    }

    pub fn arrow(&self, src: &NodeSpace, dst: &NodeSpace, f: impl Fn(&Node) -> Comb) -> SparseArrow {
        let images = src
            .nodes
            .iter()
            .map(|n| {
                let mut e = Elem::new();
                for (m, c) in f(n) {
                    let k = dst.index(&m).unwrap_or_else(|| panic!("{m:?} not in {}", dst.shape_name()));
                    add_term(self.ring, &mut e, k, &c);
                }
                e
            })
            .collect();
        SparseArrow { dst_len: dst.len(), images }
    }

    fn one(&self, n: Node) -> Comb {
        Comb::from([(n, self.ring.one())])
    }

    fn eta(&self, n: &Node) -> Comb {
        self.one(Node::Word(vec![n.clone()]))
    }

    fn mu(&self, n: &Node) -> Comb {
        let Node::Word(ws) = n else { panic!("μ on a non-word") };
        let flat = ws.iter().flat_map(|w| if let Node::Word(cs) = w { cs.clone() } else { panic!("μ on a non-word") }).collect();
        self.one(Node::Word(flat))
    }

    fn eps(&self, n: &Node) -> Comb {
        let Node::Tens(a, h) = n else { panic!("ε on a non-tensor") };
        let mut c = Comb::new();
        push(self.ring, &mut c, (**a).clone(), &self.h.coalgebra.counit[*h]);
        c
    }

    fn delta(&self, n: &Node) -> Comb {
        let Node::Tens(a, h) = n else { panic!("δ on a non-tensor") };
        let mut c = Comb::new();
        for (&(h1, h2), v) in &self.h.coalgebra.comult[*h] {
            push(self.ring, &mut c, Node::Tens(Box::new(Node::Tens(a.clone(), h1)), h2), v);
        }
        c
    }

    /// Sign exponent of `χ` on a word with these degrees.
    fn chi_exponent(&self, a: &[i64], h: &[i64]) -> i64 {
        let n = a.len();
        let mut e = 0;
        for i in 0..n {
            for j in i + 1..n {
                let skip = matches!(self.mutation, Some(Mutation::DropPair { n: m, i: p, j: q }) if m == n && p == i + 1 && q == j + 1);
                if !skip {
                    e += h[i] * a[j];
                }
            }
        }
        match self.mutation {
            Some(Mutation::FlipLength(m)) if m == n => e += 1,
            Some(Mutation::SwapPair) if n == 2 => e += a[0] * h[1] - h[0] * a[1],
            _ => {}
        }
        e
    }

    /// `[a₁⊗h₁, …, a_n⊗h_n] ↦ ±[a₁, …, a_n]⊗h₁⋯h_n`.
    fn chi(&self, n: &Node) -> Comb {
        let Node::Word(ws) = n else { panic!("χ on a non-word") };
        let mut as_ = vec![];
        let mut hs = vec![];
        for w in ws {
            let Node::Tens(a, h) = w else { panic!("χ on a word of non-tensors") };
            as_.push((**a).clone());
            hs.push(*h);
        }
        let r = self.ring;
        let ad: Vec<i64> = as_.iter().map(|a| self.deg(a)).collect();
        let hd: Vec<i64> = hs.iter().map(|&h| self.h.deg(h)).collect();
        let s = sign(r, self.chi_exponent(&ad, &hd));
        let mut prod = Elem::from([(self.h.unit(), s)]);
        for &h in &hs {
            prod = self.h.algebra.mul(&prod, &Elem::from([(h, r.one())])).val().expect("exact product in H");
        }
        let word = Node::Word(as_);
        let mut c = Comb::new();
        for (h, v) in prod {
            push(r, &mut c, Node::Tens(Box::new(word.clone()), h), &v);
        }
        c
    }

    /// `T(f)`, letterwise.
    fn lift_t(&self, n: &Node, f: &dyn Fn(&Node) -> Comb) -> Comb {
        let Node::Word(ws) = n else { panic!("T(f) on a non-word") };
        let mut acc: Vec<(Vec<Node>, Scalar)> = vec![(vec![], self.ring.one())];
        for w in ws {
            let img = f(w);
            let mut next = vec![];
            for (pre, c) in &acc {
                for (m, v) in &img {
                    let mut p = pre.clone();
                    p.push(m.clone());
                    next.push((p, self.ring.mul(c, v)));
                }
            }
            acc = next;
        }
        let mut c = Comb::new();
        for (w, v) in acc {
            push(self.ring, &mut c, Node::Word(w), &v);
        }
        c
    }

    /// `K(f) = f⊗H`.
    fn lift_k(&self, n: &Node, f: &dyn Fn(&Node) -> Comb) -> Comb {
        let Node::Tens(a, h) = n else { panic!("K(f) on a non-tensor") };
        let mut c = Comb::new();
        for (m, v) in f(a) {
            push(self.ring, &mut c, Node::Tens(Box::new(m), *h), &v);
        }
        c
    }

    /// Differential with Koszul signs.
    pub fn d(&self, n: &Node) -> Comb {
        let r = self.ring;
        let mut c = Comb::new();
        match n {
            Node::Leaf(i) => {
                for (&k, v) in &self.x_d[*i] {
                    push(r, &mut c, Node::Leaf(k), v);
                }
            }
            Node::Word(ws) => {
                let mut before = 0;
                for (k, w) in ws.iter().enumerate() {
                    let s = sign(r, before);
                    for (m, v) in self.d(w) {
                        let mut w2 = ws.clone();
                        w2[k] = m;
                        push(r, &mut c, Node::Word(w2), &r.mul(&s, &v));
                    }
                    before += self.deg(w);
                }
            }
            Node::Tens(a, h) => {
                for (m, v) in self.d(a) {
                    push(r, &mut c, Node::Tens(Box::new(m), *h), &v);
                }
                let s = sign(r, self.deg(a));
                for (&k, v) in &self.h.algebra.d[*h] {
                    push(r, &mut c, Node::Tens(a.clone(), k), &r.mul(&s, v));
                }
            }
        }
        c
    }

    pub fn render(&self, n: &Node) -> String {
        match n {
            Node::Leaf(i) => format!("x{i}"),
            Node::Word(ws) => format!("[{}]", ws.iter().map(|w| self.render(w)).collect::<Vec<_>>().join(", ")),
            Node::Tens(a, h) => format!("{}⊗{}", self.render(a), self.h.algebra.names[*h]),
        }
    }

    /// All thirteen components at `X`.
    pub fn data(&self, name: &str) -> DistLawData {
        use Op::{K, T};
        let sp = |s: &[Op]| self.space(s);
        let (k, tk, kt, t) = (sp(&[K]), sp(&[T, K]), sp(&[K, T]), sp(&[T]));
        let (ttk, tkt, ktt) = (sp(&[T, T, K]), sp(&[T, K, T]), sp(&[K, T, T]));
        let (tkk, ktk, kkt) = (sp(&[T, K, K]), sp(&[K, T, K]), sp(&[K, K, T]));
        let chi = |n: &Node| self.chi(n);
        DistLawData {
            name: name.into(),
            ring: self.ring,
            eta_k: self.arrow(&k, &tk, |n| self.eta(n)),
            k_eta: self.arrow(&k, &kt, |n| self.lift_k(n, &|a| self.eta(a))),
            chi: self.arrow(&tk, &kt, chi),
            eps_t: self.arrow(&kt, &t, |n| self.eps(n)),
            t_eps: self.arrow(&tk, &t, |n| self.lift_t(n, &|a| self.eps(a))),
            mu_k: self.arrow(&ttk, &tk, |n| self.mu(n)),
            t_chi: self.arrow(&ttk, &tkt, |n| self.lift_t(n, &chi)),
            chi_t: self.arrow(&tkt, &ktt, chi),
            k_mu: self.arrow(&ktt, &kt, |n| self.lift_k(n, &|a| self.mu(a))),
            t_delta: self.arrow(&tk, &tkk, |n| self.lift_t(n, &|a| self.delta(a))),
            chi_k: self.arrow(&tkk, &ktk, chi),
            k_chi: self.arrow(&ktk, &kkt, |n| self.lift_k(n, &chi)),
            delta_t: self.arrow(&kt, &kkt, |n| self.delta(n)),
        }
    }

    pub fn d_arrow(&self, s: &NodeSpace) -> SparseArrow {
        self.arrow(s, s, |n| self.d(n))
    }
}

/// `χ_X: T(X⊗H) → T(X)⊗H` as a map of complexes.
#[derive(Clone, Debug)]
pub struct ChiComponent {
    pub src: NodeSpace,
    pub dst: NodeSpace,
    pub map: SparseArrow,
    pub src_d: SparseArrow,
    pub dst_d: SparseArrow,
    ring: Ring,
}

impl ChiComponent {
    pub fn is_chain_map(&self) -> bool {
        let r = self.ring;
        self.dst_d.compose(r, &self.map) == self.map.compose(r, &self.src_d)
    }

    pub fn chain_map(&self) -> ChainMap {
        let (sb, db) = (GradedBasis::new(self.src.degs.clone()), GradedBasis::new(self.dst.degs.clone()));
        let (sc, dc) = (sb.complex(self.ring, &self.src_d.images), db.complex(self.ring, &self.dst_d.images));
        sb.chain_map(self.ring, &sc, &db, &dc, &self.map.images)
    }
}

pub fn comodule_algebra_chi(x: &ChainComplex, h: &Bialgebra, max_weight: usize) -> ChiComponent {
    let law = TensorLaw::new(x, h, max_weight, None);
    let src = law.space(&[Op::T, Op::K]);
    let dst = law.space(&[Op::K, Op::T]);
    ChiComponent { map: law.arrow(&src, &dst, |n| law.chi(n)), src_d: law.d_arrow(&src), dst_d: law.d_arrow(&dst), src, dst, ring: law.ring }
}

/// A dg algebra with an `H`-coaction `A → A⊗H` that is an algebra map.
#[derive(Clone, Debug)]
pub struct ComoduleAlgebra {
    pub bialgebra: Bialgebra,
    pub algebra: DGAlgebra,
    /// Pairs `(a, h)`.
    pub coaction: Vec<Elem2>,
}

impl ComoduleAlgebra {
    pub fn verify(&self) -> Result<(), AlgError> {
        let (a, h) = (&self.algebra, &self.bialgebra);
        let r = a.ring;
        let rho = |e: &Elem| -> Elem2 {
            let mut out = Elem2::new();
            for (&i, c) in e {
                for (&k, v) in &self.coaction[i] {
                    add_term2(r, &mut out, k, &r.mul(c, v));
                }
            }
            out
        };
        let bad = |what: &str, i: usize| Err(AlgError::Invalid(format!("coaction not {what} on {}", a.names[i])));
        if self.coaction[a.unit] != Elem2::from([((a.unit, h.unit()), r.one())]) {
            return bad("unital", a.unit);
        }
        for i in 0..a.len() {
            let ri = &self.coaction[i];
            let mut d_after = Elem2::new();
            for (&(x, y), c) in ri {
                for (&k, v) in &a.d[x] {
                    add_term2(r, &mut d_after, (k, y), &r.mul(c, v));
                }
                let s = r.mul(c, &sign(r, a.deg(x)));
                for (&k, v) in &h.algebra.d[y] {
                    add_term2(r, &mut d_after, (x, k), &r.mul(&s, v));
                }
            }
            if d_after != rho(&a.d[i]) {
                return bad("a chain map", i);
            }
            let mut counit = Elem::new();
            let (mut left, mut right) = (Elem3::new(), Elem3::new());
            for (&(x, y), c) in ri {
                add_term(r, &mut counit, x, &r.mul(c, &h.coalgebra.counit[y]));
                for (&(x1, y1), v) in &self.coaction[x] {
                    add_term3(r, &mut left, (x1, y1, y), &r.mul(c, v));
                }
                for (&(y1, y2), v) in &h.coalgebra.comult[y] {
                    add_term3(r, &mut right, (x, y1, y2), &r.mul(c, v));
                }
            }
            if counit != Elem::from([(i, r.one())]) {
                return bad("counital", i);
            }
            if left != right {
                return bad("coassociative", i);
            }
            for j in 0..a.len() {
                let Prod::Val(ij) = a.mul_basis(i, j) else { continue };
                let lhs = rho(&ij);
                let mut prod = Elem2::new();
                let mut overflow = false;
                for (&(x, y), c) in ri {
                    for (&(x2, y2), c2) in &self.coaction[j] {
                        let (Some(ax), Some(hy)) = (a.mul_basis(x, x2).val(), h.algebra.mul_basis(y, y2).val()) else {
                            overflow = true;
                            continue;
                        };
                        let s = r.mul(&sign(r, h.deg(y) * a.deg(x2)), &r.mul(c, c2));
                        for (&p, u) in &ax {
                            for (&q, w) in &hy {
                                add_term2(r, &mut prod, (p, q), &r.mul(&s, &r.mul(u, w)));
                            }
                        }
                    }
                }
                if !overflow && lhs != prod {
                    return Err(AlgError::Invalid(format!("coaction not multiplicative on {} * {}", a.names[i], a.names[j])));
                }
            }
        }
        Ok(())
    }
}

/// `T(X⊗H)` truncated by weight, coacting by `χ_{X⊗H}∘T(δ)`.
pub fn free_comodule_algebra(x: &ChainComplex, h: &Bialgebra, max_weight: usize) -> Result<ComoduleAlgebra, AlgError> {
    let law = TensorLaw::new(x, h, max_weight, None);
    let r = law.ring;
    let tk = law.space(&[Op::T, Op::K]);
    let n = tk.len();
    let names: Vec<String> = tk.nodes.iter().map(|w| law.render(w)).collect();
    let d = law.d_arrow(&tk).images;
    let mult = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let (Node::Word(u), Node::Word(v)) = (&tk.nodes[i], &tk.nodes[j]) else { unreachable!() };
                    let w = Node::Word(u.iter().chain(v).cloned().collect());
                    match tk.index(&w) {
                        Some(k) => Prod::Val(Elem::from([(k, r.one())])),
                        None => Prod::Weight,
                    }
                })
                .collect()
        })
        .collect();
    let unit = tk.index(&Node::Word(vec![])).expect("empty word");
    let aug = (0..n).map(|i| if i == unit { r.one() } else { Scalar::zero() }).collect();
    let algebra = DGAlgebra::from_table(r, names, tk.degs.clone(), d, mult, unit, Some(aug))?;
    let coaction = tk
        .nodes
        .iter()
        .map(|w| {
            let mut out = Elem2::new();
            for (m, c) in law.lift_t(w, &|a| law.delta(a)) {
                for (t, v) in law.chi(&m) {
                    let Node::Tens(word, hh) = t else { unreachable!() };
                    add_term2(r, &mut out, (tk.index(&word).expect("weight preserved"), hh), &r.mul(&c, &v));
                }
            }
            out
        })
        .collect();
    let ca = ComoduleAlgebra { bialgebra: h.clone(), algebra, coaction };
    ca.verify()?;
    Ok(ca)
}

/// Seeded instance: a small random `X` and a sample bialgebra, with the
/// weight bound kept small enough for the nested spaces.
pub fn sample_instance(ring: Ring, seed: u64, idx: u64) -> (String, ChainComplex, Bialgebra, usize) {
    let hs = super::samples::bialgebras(ring);
    let (name, h) = hs[idx as usize % hs.len()].clone();
    let mut rng = case_rng(seed, idx);
    let x = loop {
        let x = complex(ring, Bounds { max_rank: 1, deg_lo: 0, deg_hi: 2 }, &mut rng);
        if x.total_rank() > 0 {
            break x;
        }
    };
    let w = if x.total_rank() * h.len() <= 6 { 3 } else { 2 };
    (format!("X#{idx} ⊗ {name}"), x, h, w)
}

pub fn tensor_distlaw(x: &ChainComplex, h: &Bialgebra, max_weight: usize, mutation: Option<Mutation>, name: &str) -> DistLawData {
    TensorLaw::new(x, h, max_weight, mutation).data(name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_law_on_trivial_h() {
        let ring = Ring::Fp(3);
        let h = super::super::samples::group_algebra(ring, 1);
        let x = crate::chain::sphere(1, ring);
        let rep = check_distributive_law(&tensor_distlaw(&x, &h, 3, None, "id")).unwrap();
        assert!(rep.ok(), "{:?}", rep);
    }
}
