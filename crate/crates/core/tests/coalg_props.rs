use std::collections::BTreeMap;
use std::sync::Arc;

use dgw::barcobar::samples;
use dgw::basis::{Elem, Elem2};
use dgw::chain::{direct_sum, sphere, ChainComplex, ChainMap};
use dgw::coalg::*;
use dgw::exactlin::Ring;
use dgw::random::{self, Bounds};
use num_traits::Zero;

fn offsets(x: &ChainComplex) -> BTreeMap<i64, usize> {
    let mut out = BTreeMap::new();
    let mut off = 0;
    for n in x.degrees() {
        out.insert(n, off);
        off += x.rank(n);
    }
    out
}

/// Basis images of a graded map out of a coalgebra, as letters of `x`.
fn letter_images(c: &DGCoalgebra, x: &ChainComplex, f: &ChainMap) -> Vec<Elem> {
    let off = offsets(x);
    (0..c.len())
        .map(|i| {
            let n = c.deg(i);
            let mut e = Elem::new();
            if x.rank(n) == 0 || Some(i) == c.coaugmentation {
                return e;
            }
            let m = f.f(n);
            for row in 0..x.rank(n) {
                let v = m.get(row, c.basis.local(i));
                if !v.is_zero() {
                    e.insert(off[&n] + row, v.clone());
                }
            }
            e
        })
        .collect()
}

#[test]
fn sample_coalgebras_verify() {
    for r in [Ring::fp(2), Ring::fp(3), Ring::Q] {
        for (name, c) in samples::coalgebras(r) {
            c.verify().unwrap_or_else(|e| panic!("{name}: {e}"));
            c.check_coassociative().unwrap();
            c.check_counit().unwrap();
            c.check_conilpotent().unwrap();
        }
    }
}

#[test]
fn deconcatenation_of_three_letters() {
    let r = Ring::Q;
    let c = cofree_coalgebra(&sphere(2, r), 3);
    let ws = c.words.as_ref().unwrap();
    let w = |n: usize| ws.index(&vec![0; n]).unwrap();
    let expect: Elem2 = (0..=3).map(|k| ((w(k), w(3 - k)), r.one())).collect();
    assert_eq!(c.comult[w(3)], expect);
    assert_eq!(c.iterated_reduced(w(3), 3).len(), 1);
    assert!(c.iterated_reduced(w(3), 4).is_empty());
}

#[test]
fn cofree_on_random_complexes() {
    for idx in 0..12 {
        let r = [Ring::fp(2), Ring::fp(3), Ring::fp(5), Ring::Q][idx % 4];
        let mut rng = random::case_rng(31, idx as u64);
        let x = random::complex(r, Bounds { max_rank: 2, deg_lo: 1, deg_hi: 3 }, &mut rng);
        let c = cofree_coalgebra(&x, 3);
        c.verify().unwrap_or_else(|e| panic!("case {idx}: {e}"));
        c.complex.validate().unwrap();
    }
}

#[test]
fn interval_comultiplication() {
    let r = Ring::fp(3);
    let i = interval_coalgebra(r);
    i.verify().unwrap();
    assert_eq!(i.names, ["∂₀t", "∂₁t", "t"]);
    assert_eq!(i.comult[2], Elem2::from([((0, 2), r.one()), ((2, 1), r.one())]));
    assert_eq!(i.d[2], Elem::from([(0, r.one()), (1, r.neg(&r.one()))]));
}

#[test]
fn coalgebra_json_round_trip() {
    for (name, c) in samples::coalgebras(Ring::fp(5)) {
        let v = c.to_json();
        let back = DGCoalgebra::from_json(&v).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(back.to_json(), v, "{name}");
        assert_eq!(back.complex, c.complex, "{name}");
    }
}

#[test]
fn corestriction_round_trip() {
    let rings = [Ring::fp(2), Ring::fp(3), Ring::fp(5), Ring::Q];
    for idx in 0..20u64 {
        let r = rings[idx as usize % 4];
        let mut rng = random::case_rng(47, idx);
        let y = random::complex(r, Bounds { max_rank: 2, deg_lo: 1, deg_hi: 2 }, &mut rng);
        let x = random::complex(r, Bounds { max_rank: 2, deg_lo: 1, deg_hi: 4 }, &mut rng);
        let c = cofree_coalgebra(&y, 2);
        let t = cofree_coalgebra(&x, 2);
        let f = random::chain_map(&c.complex, &x, &mut rng);
        let fl = letter_images(&c, &x, &f);
        let g = from_corestriction(&c, &t, &fl).unwrap();
        g.check(&c, &t).unwrap_or_else(|e| panic!("case {idx}: {e}"));
        assert_eq!(g.corestriction(&t), fl, "case {idx}");
        assert!(g.chain_map(&c, &t).is_chain_map());
    }
}

#[test]
fn cofree_comodule_adjunction_triangle() {
    for idx in 0..10u64 {
        let r = [Ring::fp(3), Ring::Q][idx as usize % 2];
        let mut rng = random::case_rng(53, idx);
        let d = Arc::new(samples::coalgebras(r)[[1, 3, 5, 9][idx as usize % 4]].1.clone());
        let y = random::complex(r, Bounds { max_rank: 2, deg_lo: 0, deg_hi: 1 }, &mut rng);
        let m = cofree_comodule(&y, d.clone());
        m.verify().unwrap();
        let x = random::complex(r, Bounds { max_rank: 2, deg_lo: 0, deg_hi: 3 }, &mut rng);
        let cof = cofree_comodule(&x, d);
        cof.verify().unwrap();
        let f = random::chain_map(&m.complex, &x, &mut rng);
        let fhat = cofree_extension(&m, &cof, &x, &f);
        assert!(m.is_comodule_map(&cof, &fhat), "case {idx}");
        let back = cofree_counit(&cof, &x).compose(&m.chain_map(&cof, &fhat));
        assert_eq!(back, f, "case {idx}");
    }
}

#[test]
fn comodule_cylinder_over_samples() {
    for r in [Ring::fp(2), Ring::fp(5), Ring::Q] {
        for (name, c) in samples::coalgebras(r).into_iter().take(6) {
            let y = direct_sum(&sphere(0, r), &sphere(1, r)).sum;
            let m = cofree_comodule(&y, Arc::new(c));
            let cyl = comodule_cylinder(&m);
            cyl.cyl.verify().unwrap_or_else(|e| panic!("{name}: {e}"));
            assert!(cyl.matches_chain_cylinder(&m), "{name}");
            assert!(cyl.fold_holds(&m), "{name}");
            assert!(cyl.sum.is_comodule_map(&cyl.cyl, &cyl.i), "{name}");
            assert!(cyl.cyl.is_comodule_map(&m, &cyl.q), "{name}");
        }
    }
}

#[test]
fn broken_comultiplication_is_rejected() {
    let r = Ring::fp(5);
    let i = interval_coalgebra(r);
    let mut comult = i.comult.clone();
    comult[2] = Elem2::from([((0, 2), r.one())]);
    let res = DGCoalgebra::new(r, i.names.clone(), vec![0, 0, 1], i.d.clone(), comult, i.counit.clone(), None, None);
    assert!(res.is_err());
}
