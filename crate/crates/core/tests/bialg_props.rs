use std::collections::BTreeMap;

use dgw::basis::{sign, Elem, Letter, Word};
use dgw::bialg::distlaw::*;
use dgw::bialg::*;
use dgw::chain::ChainComplex;
use dgw::coalg::cofree_coalgebra_bounded;
use dgw::dga::Prod;
use dgw::exactlin::{Ring, Scalar};
use dgw::random::case_rng;
use num_traits::Zero;
use proptest::prelude::*;
use rand::Rng;

fn letters(spec: &[(&str, i64)]) -> Vec<Letter> {
    spec.iter().map(|&(n, d)| Letter { name: n.into(), degree: d }).collect()
}

fn graded(ring: Ring, spec: &[(&str, i64)]) -> ChainComplex {
    let mut ranks = BTreeMap::new();
    for &(_, d) in spec {
        *ranks.entry(d).or_insert(0) += 1;
    }
    ChainComplex::graded(ring, &ranks)
}

/// Signed shuffles, by recursion on the first letters.
fn shuffle(ring: Ring, degs: &[i64], u: &[usize], v: &[usize]) -> BTreeMap<Word, Scalar> {
    if u.is_empty() || v.is_empty() {
        let w: Word = u.iter().chain(v).copied().collect();
        return BTreeMap::from([(w, ring.one())]);
    }
    let mut out: BTreeMap<Word, Scalar> = BTreeMap::new();
    let du: i64 = u.iter().map(|&l| degs[l]).sum();
    let parts = [(u[0], shuffle(ring, degs, &u[1..], v), ring.one()), (v[0], shuffle(ring, degs, u, &v[1..]), sign(ring, du * degs[v[0]]))];
    for (l, rest, s) in parts {
        for (w, c) in rest {
            let mut w2 = vec![l];
            w2.extend(w);
            let e = out.entry(w2).or_insert_with(Scalar::zero);
            *e = ring.add(e, &ring.mul(&s, &c));
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn zero_corestriction_is_the_shuffle_product(d1 in 0i64..3, d2 in 0i64..3, q in prop::sample::select(vec![3u64, 5])) {
        let ring = Ring::Fp(q);
        let spec = [("a", d1), ("b", d2)];
        let c = cofree_coalgebra_bounded(&graded(ring, &spec), letters(&spec), 3, 9);
        let b = cofree_bialgebra_product(c, Corestriction::new(), Corecursion::Prefix).unwrap();
        let ws = b.coalgebra.words.clone().unwrap();
        let degs = [d1, d2];
        for i in 0..ws.len() {
            for j in 0..ws.len() {
                let (u, v) = (&ws.words[i], &ws.words[j]);
                let sh = shuffle(ring, &degs, u, v);
                if u.len() + v.len() > 3 && !sh.is_empty() {
                    prop_assert!(matches!(b.mul_basis(i, j), Prod::Weight | Prod::Degree));
                    continue;
                }
                let mut want = Elem::new();
                for (w, c) in sh {
                    want.insert(ws.index(&w).unwrap(), c);
                }
                prop_assert_eq!(b.mul_basis(i, j), Prod::Val(want));
            }
        }
        prop_assert!(b.check_compatibility().is_ok());
        prop_assert!(b.check_associative().is_ok());
        prop_assert!(b.to_bialgebra().is_ok());
    }
}

#[test]
fn prefix_and_suffix_corecursion_agree() {
    for idx in 0..10u64 {
        let mut rng = case_rng(21, idx);
        let ring = if idx % 2 == 0 { Ring::Fp(5) } else { Ring::Q };
        let spec = [("x", 2), ("y", 4), ("z", 6)];
        let c = cofree_coalgebra_bounded(&graded(ring, &spec), letters(&spec), 3, 12);
        let ws = c.words.clone().unwrap();
        let mut cores = Corestriction::new();
        for u in ws.words.iter().filter(|w| !w.is_empty()) {
            for v in ws.words.iter().filter(|w| !w.is_empty()) {
                let d = ws.degree(u) + ws.degree(v);
                if let Some(l) = (0..3).find(|&l| spec[l].1 == d) {
                    if rng.gen_bool(0.5) {
                        cores.insert((u.clone(), v.clone()), vec![(l, ring.from_i64(rng.gen_range(-2..3)))]);
                    }
                }
            }
        }
        let p = cofree_bialgebra_product(c.clone(), cores.clone(), Corecursion::Prefix).unwrap();
        let s = cofree_bialgebra_product(c, cores, Corecursion::Suffix).unwrap();
        assert!(p.agrees_with(&s), "case {idx}");
        assert!(p.check_compatibility().is_ok(), "case {idx}");
    }
}

#[test]
fn corestriction_of_wrong_degree_is_rejected() {
    let ring = Ring::Q;
    let spec = [("x", 2), ("y", 4)];
    let c = cofree_coalgebra_bounded(&graded(ring, &spec), letters(&spec), 2, 8);
    let bad = Corestriction::from([((vec![0], vec![0]), vec![(0, ring.one())])]);
    assert!(cofree_bialgebra_product(c.clone(), bad, Corecursion::Prefix).is_err());
    let empty = Corestriction::from([((vec![], vec![0]), vec![(0, ring.one())])]);
    assert!(cofree_bialgebra_product(c, empty, Corecursion::Prefix).is_err());
}

#[test]
fn sample_bialgebras_verify() {
    for ring in [Ring::Fp(2), Ring::Fp(3), Ring::Q] {
        for (name, h) in samples::bialgebras(ring) {
            assert!(h.verify().is_ok(), "{name}");
            assert!(h.algebra.mult_map().unwrap().is_chain_map(), "{name}");
        }
    }
    let ring = Ring::Q;
    let h = samples::exterior(ring, &[("e", 1), ("f", 1)]);
    let (e, f, ef) = (h.coalgebra.index_of("e").unwrap(), h.coalgebra.index_of("f").unwrap(), h.coalgebra.index_of("ef").unwrap());
    assert_eq!(h.algebra.mul_basis(f, e), Prod::Val(Elem::from([(ef, ring.from_i64(-1))])));
    let d = &h.coalgebra.comult[ef];
    assert_eq!(d.get(&(f, e)), Some(&ring.from_i64(-1)));
    assert_eq!(d.get(&(e, f)), Some(&ring.one()));
}

/// `4(a²−1)` on `x|x ⊗ x|x` and `6(a−1)` on `x|x|x ⊗ x`, `x ⊗ x|x|x`.
fn expected_difference(o: &Obstruction, a: i64) -> Elem2Named {
    let r = o.ring;
    let mut m = BTreeMap::new();
    for (k, c) in [("x|x ⊗ x|x", 4 * (a * a - 1)), ("x|x|x ⊗ x", 6 * (a - 1)), ("x ⊗ x|x|x", 6 * (a - 1))] {
        let c = r.from_i64(c);
        if !c.is_zero() {
            m.insert(k.to_string(), r.fmt_scalar(&c));
        }
    }
    m
}

type Elem2Named = BTreeMap<String, String>;

#[test]
fn obstruction_polynomial_matches_hand_computation() {
    for ring in [Ring::Fp(2), Ring::Fp(3), Ring::Fp(5), Ring::Fp(7), Ring::Q, Ring::Z] {
        for m in [2, 4] {
            let o = counterexample_obstruction(m, ring).unwrap();
            for a in -3..=3 {
                assert_eq!(o.render(&o.at(&ring.from_i64(a))), expected_difference(&o, a), "{ring:?} m={m} a={a}");
            }
            assert!(o.projection_ok && o.hhat_compatible);
        }
    }
}

#[test]
fn obstruction_roots() {
    let roots = |ring: Ring| counterexample_obstruction(2, ring).unwrap().roots;
    let s = |ring: Ring, v: &[i64]| Roots::Finite(v.iter().map(|&a| ring.from_i64(a)).collect());
    assert_eq!(roots(Ring::Fp(2)), Roots::All);
    assert_eq!(roots(Ring::Fp(3)), s(Ring::Fp(3), &[1, 2]));
    assert_eq!(roots(Ring::Fp(5)), s(Ring::Fp(5), &[1]));
    assert_eq!(roots(Ring::Fp(7)), s(Ring::Fp(7), &[1]));
    assert_eq!(roots(Ring::Q), s(Ring::Q, &[1]));
    assert_eq!(roots(Ring::Z), s(Ring::Z, &[1]));
    assert!(!counterexample_obstruction(2, Ring::Q).unwrap().nonzero_for_all_a());
}

#[test]
fn displayed_difference_and_associator() {
    for ring in [Ring::Fp(3), Ring::Fp(5), Ring::Q] {
        let o = counterexample_obstruction(2, ring).unwrap();
        let want = BTreeMap::from([("x|x ⊗ x|x".to_string(), ring.fmt_scalar(&ring.from_i64(2)))]);
        for a in -2..=2 {
            assert_eq!(o.render(&o.display_at(&ring.from_i64(a))), want);
        }
        let y = o.word("y").unwrap();
        assert_eq!(o.associator, Elem::from([(y, ring.from_i64(2))]));
        assert!(!o.hhat_associative);
        assert!(!o.to_json()["roots"].as_array().unwrap().is_empty());
    }
    let o = counterexample_obstruction(2, Ring::Fp(2)).unwrap();
    assert!(o.associator.is_empty() && o.display_at(&Ring::Fp(2).one()).is_empty());
}

#[test]
fn odd_or_small_m_is_rejected() {
    assert!(counterexample_obstruction(3, Ring::Q).is_err());
    assert!(counterexample_obstruction(0, Ring::Q).is_err());
}

#[test]
fn tensor_law_passes_on_seeded_instances() {
    for ring in [Ring::Fp(3), Ring::Q] {
        for idx in 0..20 {
            let (name, x, h, w) = sample_instance(ring, 7, idx);
            let rep = check_distributive_law(&tensor_distlaw(&x, &h, w, None, &name)).unwrap();
            assert!(rep.ok(), "{name}: {:?}", rep.failing());
            assert!(rep.diagrams.iter().all(|d| d.checked > 0));
        }
    }
}

#[test]
fn identity_law_on_the_ground_ring() {
    let ring = Ring::Q;
    let h = samples::group_algebra(ring, 1);
    let x = dgw::chain::sphere(1, ring);
    let l = tensor_distlaw(&x, &h, 3, None, "id");
    assert!(check_distributive_law(&l).unwrap().ok());
    assert_eq!(l.chi.src_len(), l.chi.dst_len);
}

#[test]
fn every_mutation_is_detected() {
    let ring = Ring::Fp(5);
    let x = graded(ring, &[("a", 1)]);
    for h in [samples::exterior(ring, &[("e", 1)]), samples::exterior(ring, &[("e", 3)])] {
        for m in all_mutations() {
            let rep = check_distributive_law(&tensor_distlaw(&x, &h, 3, Some(m), "mut")).unwrap();
            assert!(!rep.ok(), "{m} survived");
        }
    }
    // over F2 every sign mutation is invisible
    let ring = Ring::Fp(2);
    let h = samples::exterior(ring, &[("e", 1)]);
    let x = graded(ring, &[("a", 1)]);
    for m in all_mutations() {
        assert!(check_distributive_law(&tensor_distlaw(&x, &h, 3, Some(m), "mut")).unwrap().ok(), "{m}");
    }
}

#[test]
fn chi_on_a_two_letter_word() {
    let ring = Ring::Q;
    let h = samples::exterior(ring, &[("e", 1)]);
    let x = graded(ring, &[("a", 1)]);
    let law = TensorLaw::new(&x, &h, 2, None);
    let e = h.coalgebra.index_of("e").unwrap();
    let one = h.unit();
    let (tk, kt) = (law.space(&[Op::T, Op::K]), law.space(&[Op::K, Op::T]));
    let l = law.data("n=2");
    let t = |a: usize, h: usize| Node::Tens(Box::new(Node::Leaf(a)), h);
    // [a⊗e, a⊗1] ↦ −[a, a]⊗e since |e||a| is odd
    let src = tk.index(&Node::Word(vec![t(0, e), t(0, one)])).unwrap();
    let dst = kt.index(&Node::Tens(Box::new(Node::Word(vec![Node::Leaf(0), Node::Leaf(0)])), e)).unwrap();
    assert_eq!(l.chi.images[src], Elem::from([(dst, ring.from_i64(-1))]));
    let src = tk.index(&Node::Word(vec![t(0, one), t(0, e)])).unwrap();
    assert_eq!(l.chi.images[src], Elem::from([(dst, ring.one())]));
    let src = tk.index(&Node::Word(vec![t(0, e), t(0, e)])).unwrap();
    assert!(l.chi.images[src].is_empty());
}

#[test]
fn chi_is_a_chain_map() {
    for idx in 0..10 {
        let (name, x, h, w) = sample_instance(Ring::Fp(3), 11, idx);
        let c = comodule_algebra_chi(&x, &h, w);
        assert!(c.is_chain_map(), "{name}");
        assert!(c.chain_map().is_chain_map(), "{name}");
    }
}

#[test]
fn free_comodule_algebras_verify() {
    for ring in [Ring::Fp(5), Ring::Q] {
        for idx in 0..7 {
            let (name, x, h, _) = sample_instance(ring, 3, idx);
            let ca = free_comodule_algebra(&x, &h, 2).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(ca.coaction.len(), ca.algebra.len());
        }
    }
    let ring = Ring::Q;
    let h = samples::exterior(ring, &[("e", 1)]);
    let ca = free_comodule_algebra(&graded(ring, &[("a", 1)]), &h, 2).unwrap();
    let mut broken = ca.clone();
    let i = (0..ca.algebra.len()).find(|&i| i != ca.algebra.unit).unwrap();
    broken.coaction[i].clear();
    assert!(broken.verify().is_err());
}
