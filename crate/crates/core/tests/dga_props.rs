use std::sync::Arc;

use dgw::barcobar::{cone_defects, samples};
use dgw::basis::{single, Elem, Letter};
use dgw::chain::homology;
use dgw::dga::*;
use dgw::exactlin::Ring;
use proptest::prelude::*;

fn t(w: usize, lo: i64, hi: i64) -> TruncationPolicy {
    TruncationPolicy::new(w, lo, hi)
}

fn letters(gs: &[(&str, i64)]) -> Vec<Letter> {
    gs.iter().map(|&(n, d)| Letter { name: n.into(), degree: d }).collect()
}

/// x(1), y(3), z(5) with dy = a·xx, dz = b·xy + c·yx + e·xxxx.
fn family(ring: Ring, a: i64, b: i64, c: i64, e: i64) -> Presentation {
    let f = |k| ring.from_i64(k);
    let d = vec![
        vec![],
        vec![(f(a), vec![0, 0])],
        vec![(f(b), vec![0, 1]), (f(c), vec![1, 0]), (f(e), vec![0, 0, 0, 0])],
    ];
    let d = d.into_iter().map(|v| v.into_iter().filter(|(s, _)| !num_traits::Zero::is_zero(s)).collect()).collect();
    Presentation::new(ring, letters(&[("x", 1), ("y", 3), ("z", 5)]), d, vec![], t(5, 0, 7))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    // d²z = a(c − b)·xxx
    #[test]
    fn d_squared_check_matches_hand_formula(a in -2i64..3, b in -2i64..3, c in -2i64..3, e in -2i64..3) {
        let ring = Ring::Q;
        let res = free_algebra(&family(ring, a, b, c, e));
        if a * (c - b) == 0 {
            let alg = res.unwrap();
            prop_assert!(alg.verify().is_ok());
            prop_assert!(alg.complex.validate().is_ok());
        } else {
            prop_assert_eq!(res.unwrap_err(), AlgError::DSquared("z".into()));
        }
    }

    #[test]
    fn mod_p_family_is_leibniz(a in 0i64..3, b in 0i64..3, e in 0i64..3) {
        let ring = Ring::fp(3);
        let alg = free_algebra(&family(ring, a, b, b, e)).unwrap();
        prop_assert!(alg.check_leibniz().is_ok());
        prop_assert!(alg.check_associative().is_ok());
    }
}

#[test]
fn sample_algebras_verify_over_small_rings() {
    for r in [Ring::fp(2), Ring::fp(3), Ring::fp(5), Ring::Q] {
        for (name, a) in samples::algebras(r) {
            a.verify().unwrap_or_else(|e| panic!("{name}: {e}"));
            assert!(a.mult_map().unwrap().is_chain_map(), "{name}");
        }
    }
}

#[test]
fn free_algebra_ranks_are_word_counts() {
    // T(x, y), |x| = 1, |y| = 2: rank in degree n is Fibonacci
    let p = Presentation::free(Ring::Q, &[("x", 1), ("y", 2)], t(8, 0, 8));
    let a = free_algebra(&p).unwrap();
    let fib = [1, 1, 2, 3, 5, 8, 13, 21, 34];
    for (n, &f) in fib.iter().enumerate() {
        assert_eq!(a.complex.rank(n as i64), f, "degree {n}");
    }
}

#[test]
fn relations_must_be_closed() {
    let ring = Ring::Q;
    let mut p = Presentation::new(
        ring,
        letters(&[("x", 1), ("y", 2)]),
        vec![vec![], vec![(ring.one(), vec![0])]],
        vec![vec![1, 1]],
        t(3, 0, 6),
    );
    // d(yy) = xy + yx is not in the ideal of yy
    assert!(matches!(free_algebra(&p), Err(AlgError::RelationsNotClosed(_))));
    p.relations = vec![];
    assert!(free_algebra(&p).is_ok());
}

#[test]
fn presentation_json_round_trip() {
    let p = family(Ring::fp(5), 1, 2, 2, 3);
    let v = p.to_json();
    let q = Presentation::from_json(&v).unwrap();
    assert_eq!(q.to_json(), v);
    let a = free_algebra(&p).unwrap();
    let b = free_algebra(&q).unwrap();
    assert_eq!(a.complex, b.complex);
    assert_eq!(a.d, b.d);
}

#[test]
fn presentation_json_rejects_unknown_generator() {
    let mut v = family(Ring::Q, 0, 0, 0, 0).to_json();
    v["relations"] = serde_json::json!(["x|w"]);
    assert!(Presentation::from_json(&v).is_err());
}

#[test]
fn coproduct_of_free_algebras_is_free() {
    let ring = Ring::fp(3);
    let a = free_algebra(&Presentation::free(ring, &[("x", 1)], t(4, 0, 6))).unwrap();
    let b = free_algebra(&Presentation::free(ring, &[("y", 2)], t(4, 0, 6))).unwrap();
    let (c, ia, ib) = algebra_coproduct(&a, &b).unwrap();
    let both = free_algebra(&Presentation::free(ring, &[("x", 1), ("y", 2)], t(4, 0, 6))).unwrap();
    assert_eq!(c.complex.ranks(), both.complex.ranks());
    ia.check(&a, &c).unwrap();
    ib.check(&b, &c).unwrap();
    c.check_associative().unwrap();
}

#[test]
fn acyclicity_factorization_of_quotient() {
    let ring = Ring::fp(5);
    let a = free_algebra(&Presentation::free(ring, &[("x", 2)], t(3, 0, 6))).unwrap();
    let b = samples::algebras(ring)[2].1.clone();
    let x = b.names.iter().position(|n| n == "x").unwrap();
    let i = AlgebraMap::from_generators(&a, &b, &[single(ring, x)]).unwrap();
    i.check(&a, &b).unwrap();
    let f = acyclicity_factorization(&a, &b, &i, t(4, 0, 6)).unwrap();
    f.first.check(&a, &f.middle).unwrap();
    f.second.check(&f.middle, &b).unwrap();
    // second ∘ first = i
    for (k, img) in f.first.images.iter().enumerate() {
        assert_eq!(f.second.apply(ring, img), i.images[k]);
    }
    for n in f.window.0..=f.window.1 {
        assert!(homology(&f.contractible.complex, n).is_zero() || n == 0, "degree {n}");
    }
    let q = f.second.chain_map(&f.middle, &b);
    assert!(surjective_in_window(&q, f.window));
    let j = f.first.chain_map(&a, &f.middle);
    assert!(cone_defects(&j, (f.window.0, f.window.1 - 1)).is_empty());
}

#[test]
fn regular_module_and_cylinder() {
    for r in [Ring::fp(2), Ring::fp(3), Ring::Q] {
        for (name, a) in samples::algebras(r).into_iter().take(8) {
            let m = DGModule::regular(Arc::new(a));
            m.verify().unwrap_or_else(|e| panic!("{name}: {e}"));
            let cyl = module_cylinder(&m);
            cyl.cyl.verify().unwrap_or_else(|e| panic!("{name}: {e}"));
            assert!(cyl.matches_chain_cylinder(&m), "{name}");
            assert!(cyl.fold_holds(&m), "{name}");
            assert!(cyl.sum.is_module_map(&cyl.cyl, &cyl.i), "{name}");
            assert!(cyl.cyl.is_module_map(&m, &cyl.q), "{name}");
        }
    }
}

#[test]
fn direct_sum_inclusions_are_module_maps() {
    let a = Arc::new(samples::algebras(Ring::fp(5))[3].1.clone());
    let m = DGModule::regular(a);
    let (s, inl, inr) = module_direct_sum(&m, &m);
    s.verify().unwrap();
    assert!(m.is_module_map(&s, &inl));
    assert!(m.is_module_map(&s, &inr));
    assert_eq!(s.len(), 2 * m.len());
    let _: &Vec<Elem> = &inl;
}
