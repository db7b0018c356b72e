use std::sync::Arc;

use dgw::barcobar::*;
use dgw::coalg::{cofree_coalgebra, cofree_comodule};
use dgw::chain::sphere;
use dgw::dga::{DGAlgebra, DGModule, Presentation, TruncationPolicy, free_algebra};
use dgw::exactlin::Ring;

fn t(w: usize, lo: i64, hi: i64) -> TruncationPolicy {
    TruncationPolicy::new(w, lo, hi)
}

#[test]
fn bar_and_cobar_are_complexes_over_f5() {
    let r = Ring::fp(5);
    for (name, a) in samples::algebras(r) {
        let b = bar(&a, t(4, 0, 8)).unwrap();
        b.coalgebra.complex.validate().unwrap_or_else(|e| panic!("{name}: {e:?}"));
        b.coalgebra.verify().unwrap_or_else(|e| panic!("{name}: {e:?}"));
    }
    for (name, c) in samples::coalgebras(r) {
        let o = cobar(&c, t(4, 0, 6)).unwrap();
        o.algebra.complex.validate().unwrap_or_else(|e| panic!("{name}: {e:?}"));
        o.algebra.verify().unwrap_or_else(|e| panic!("{name}: {e:?}"));
    }
}

#[test]
fn counit_and_unit_are_quasi_isos_in_window() {
    for r in [Ring::fp(5), Ring::Q] {
        for (name, a) in samples::algebras(r).into_iter().take(5) {
            let rep = counit_eps(&a, t(6, 0, 8), t(6, 0, 6)).unwrap();
            assert!(rep.chain_map.is_chain_map(), "{name}");
            assert_eq!(cone_defects(&rep.chain_map, rep.window), Vec::<i64>::new(), "{name}");
        }
        for (name, c) in samples::coalgebras(r).into_iter().take(5) {
            let rep = unit_eta(&c, t(6, 0, 6), t(6, 0, 8)).unwrap();
            assert!(rep.chain_map.is_chain_map(), "{name}");
            assert_eq!(cone_defects(&rep.chain_map, rep.window), Vec::<i64>::new(), "{name}");
        }
    }
}

#[test]
fn counit_sends_bar_letters_to_minus_a() {
    let r = Ring::fp(7);
    let a = &samples::algebras(r)[2].1;
    let rep = counit_eps(a, t(3, 0, 8), t(3, 0, 6)).unwrap();
    let x = a.names.iter().position(|n| n == "x").unwrap();
    let img = rep.map.images.iter().find(|e| e.contains_key(&x)).unwrap();
    assert_eq!(img[&x], r.neg(&r.one()));
}

#[test]
fn bar_of_dual_numbers_has_rank_one_layers() {
    let r = Ring::fp(2);
    let a = &samples::algebras(r)[1].1;
    let b = bar(a, t(5, 0, 20)).unwrap();
    let f = bar_filtration(&b);
    assert!(f.ok());
    assert_eq!(f.layers.len(), 6);
    for (k, l) in f.layers.iter().enumerate() {
        assert_eq!(l.length, k);
        assert_eq!(l.ranks.values().sum::<usize>(), 1);
    }
}

#[test]
fn filtrations_split_with_trivial_layers() {
    let r = Ring::fp(3);
    for (name, a) in samples::algebras(r).into_iter().take(6) {
        assert!(bar_filtration(&bar(&a, t(3, 0, 6)).unwrap()).ok(), "{name}");
    }
    for (name, c) in samples::coalgebras(r).into_iter().take(6) {
        assert!(cobar_filtration(&cobar(&c, t(3, 0, 6)).unwrap()).ok(), "{name}");
    }
}

#[test]
fn unit_algebra_has_trivial_bar() {
    let b = bar(&DGAlgebra::unit_algebra(Ring::Q), t(4, 0, 10)).unwrap();
    assert_eq!(b.coalgebra.len(), 1);
    let f = bar_filtration(&b);
    assert_eq!(f.layers[0].ranks.values().sum::<usize>(), 1);
}

#[test]
fn cobar_differential_of_primitive_square() {
    // in T^co(x), |x|=3: d⟨x|x⟩ = (-1)^3 ⟨x⟩⟨x⟩
    let r = Ring::Q;
    let c = cofree_coalgebra(&sphere(3, r), 2);
    let o = cobar(&c, t(2, 0, 6)).unwrap();
    let xx = c.index_of("x3|x3").unwrap();
    let l = o.letters.iter().position(|&i| i == xx).unwrap();
    let ws = o.algebra.words().unwrap();
    let lx = o.letters.iter().position(|&i| c.names[i] == "x3").unwrap();
    let src = ws.index(&[l]).unwrap();
    let dst = ws.index(&[lx, lx]).unwrap();
    assert_eq!(o.algebra.d[src].get(&dst), Some(&r.from_i64(-1)));
}

#[test]
fn cobar_rejects_degree_one_coideal() {
    let c = cofree_coalgebra(&sphere(1, Ring::Q), 2);
    assert!(cobar(&c, t(2, 0, 6)).is_err());
}

#[test]
fn two_sided_bar_resolves_regular_module() {
    for r in [Ring::Q, Ring::fp(5)] {
        for (name, a) in samples::algebras(r) {
            let x = DGModule::regular(Arc::new(a));
            let b = two_sided_bar(&x, t(3, 0, 6)).unwrap();
            b.module.complex.validate().unwrap_or_else(|e| panic!("{name}: {e:?}"));
            b.module.verify().unwrap_or_else(|e| panic!("{name}: {e:?}"));
            let f = b.aug_map(&x);
            assert!(f.is_chain_map(), "{name}");
            assert!(cone_defects(&f, b.window).is_empty(), "{name}");
        }
    }
}

#[test]
fn literal_coaction_fails_counit_and_corrected_passes() {
    let r = Ring::fp(5);
    let a = Arc::new(samples::algebras(r)[2].1.clone());
    let d = Arc::new(cofree_coalgebra(&sphere(2, r), 2));
    let m = cofree_comodule(&sphere(0, r), d);
    let x = induced_coring_comodule(&m, a);
    x.check_linear().unwrap();
    let b = two_sided_bar(&x.module, t(2, 0, 6)).unwrap();
    let lit = check_lifted_coaction(&b, &x, true);
    assert!(!lit.counital);
    let fixed = check_lifted_coaction(&b, &x, false);
    assert!(fixed.all(), "{fixed:?}");
}

#[test]
fn seeded_coring_triples_over_f5() {
    let r = Ring::fp(5);
    for idx in 0..5 {
        let (name, x) = samples::coring_triple(r, 9, idx);
        x.module.verify().unwrap_or_else(|e| panic!("{name}: {e:?}"));
        x.comodule.verify().unwrap_or_else(|e| panic!("{name}: {e:?}"));
        x.check_linear().unwrap();
        let b = two_sided_bar(&x.module, t(2, 0, 5)).unwrap();
        let rep = check_lifted_coaction(&b, &x, false);
        assert!(rep.all(), "{name}: {rep:?}");
    }
}

#[test]
fn bar_rejects_negative_algebra() {
    let p = Presentation::free(Ring::Q, &[("x", -1)], t(2, -4, 4));
    if let Ok(a) = free_algebra(&p) {
        assert!(bar(&a, t(2, 0, 4)).is_err());
    }
}
