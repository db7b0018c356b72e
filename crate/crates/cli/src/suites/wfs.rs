use serde_json::{json, Value};

use dgw::chain::{direct_sum, homology, tensor};
use dgw::exactlin::Ring;
use dgw::random;
use dgw::wfs::*;

use crate::config::SuiteConfig;
use crate::report::{label, par_cases, rng_for, Case};

fn lift_json(p: &LiftingProblem) -> Value {
    json!({"left": p.left.to_json(), "right": p.right.to_json(), "top": p.top.to_json(), "bottom": p.bottom.to_json()})
}

fn factorization(cfg: &SuiteConfig, ring: Ring, n: usize) -> Vec<Case> {
    let sec = format!("factorization-{}", ring.tag());
    par_cases(n, |i| {
        let mut rng = rng_for(cfg.seed, &sec, i as u64);
        let x = random::complex(ring, cfg.bounds(), &mut rng);
        let y = random::complex(ring, cfg.bounds(), &mut rng);
        let f = random::chain_map(&x, &y, &mut rng);
        let cyl = factor_cof_then_acyclic_fib(&f);
        let cocyl = factor_acyclic_cof_then_fib(&f);
        let ok_cyl = cyl.mid.validate().is_ok() && cyl.verify(&f);
        let ok_cocyl = cocyl.mid.validate().is_ok() && cocyl.verify(&f);
        let inputs = f.to_json();
        let witness = if ok_cyl && ok_cocyl {
            json!({"cylinder_rank": cyl.mid.total_rank(), "cocylinder_rank": cocyl.mid.total_rank()})
        } else {
            json!({"f": inputs, "cylinder": ok_cyl, "cocylinder": ok_cocyl})
        };
        Case::new("factorization", &format!("{}/{}", ring.tag(), label(i)), &inputs, ok_cyl && ok_cocyl, witness)
    })
}

fn functoriality(cfg: &SuiteConfig, ring: Ring, n: usize) -> Vec<Case> {
    let sec = format!("functoriality-{}", ring.tag());
    par_cases(n, |i| {
        let mut rng = rng_for(cfg.seed, &sec, i as u64);
        let b = cfg.bounds();
        let x = random::complex(ring, b, &mut rng);
        let y = random::complex(ring, b, &mut rng);
        let f = random::chain_map(&x, &y, &mut rng);
        let a = random::chain_map(&x, &random::complex(ring, b, &mut rng), &mut rng);
        let bm = random::chain_map(&y, &random::complex(ring, b, &mut rng), &mut rng);
        // square (a', b) from f to g = b∘f∘pr₂ on A' = X' ⊕ X
        let s = direct_sum(&a.dst, &x);
        let g = bm.compose(&f).compose(&s.pr2);
        let a2 = s.in2.add(&s.in1.compose(&a));
        let inputs = json!({"f": f.to_json(), "g": g.to_json(), "a": a2.to_json(), "b": bm.to_json()});
        let ok = bm.compose(&f) == g.compose(&a2) && check_functoriality(&f, &g, &a2, &bm);
        let witness = if ok { Value::Null } else { inputs.clone() };
        Case::new("functoriality", &format!("{}/{}", ring.tag(), label(i)), &inputs, ok, witness)
    })
}

fn lifting(cfg: &SuiteConfig, rings: &[Ring], n: usize) -> Vec<Case> {
    let ring_of = |i: usize| rings[i % rings.len()];
    let b = cfg.bounds();
    let mut out = par_cases(n, |i| {
        let ring = ring_of(i);
        let mut rng = rng_for(cfg.seed, "lift-solvable", i as u64);
        let p = samples::solvable(ring, b, &mut rng);
        let lift = solve_lift(&p);
        let ok = p.commutes() && lift.as_ref().is_some_and(|c| p.is_lift(c));
        let witness = match (&lift, ok) {
            (Some(c), true) => json!({"ring": ring.tag(), "lift_degrees": c.src.ranks().len()}),
            _ => lift_json(&p),
        };
        Case::new("lifting-solvable", &label(i), &lift_json(&p), ok, witness)
    });
    let bad = (n / 10).max(1);
    out.extend(par_cases(bad, |i| {
        let ring = ring_of(i);
        let mut rng = rng_for(cfg.seed, "lift-unsolvable", i as u64);
        let p = samples::unsolvable(ring, b, i as u64, &mut rng);
        let lift = solve_lift(&p);
        let ok = p.commutes() && lift.is_none();
        let witness = match lift {
            None => json!({"ring": ring.tag()}),
            Some(c) => json!({"problem": lift_json(&p), "claimed_lift": c.to_json()}),
        };
        Case::new("lifting-unsolvable", &label(i), &lift_json(&p), ok, witness)
    }));
    out.extend(par_cases(n.min(10), |i| {
        let mut rng = rng_for(cfg.seed, "lift-brute", i as u64);
        let p = samples::tiny(&mut rng);
        let (a, bf) = (solve_lift(&p), brute_force_lift(&p));
        let ok = a.is_some() == bf.is_some() && a.iter().chain(bf.iter()).all(|c| p.is_lift(c));
        let witness = if ok { json!({"solvable": a.is_some()}) } else { lift_json(&p) };
        Case::new("lifting-brute-force", &label(i), &lift_json(&p), ok, witness)
    }));
    out
}

fn two_of_six(cfg: &SuiteConfig, rings: &[Ring], n: usize) -> Vec<Case> {
    par_cases(n, |i| {
        let ring = rings[i % rings.len()];
        let mut rng = rng_for(cfg.seed, "two-of-six", i as u64);
        let (f, g, h) = samples::two_of_six_triple(ring, cfg.bounds(), &mut rng);
        let r = check_two_of_six(&f, &g, &h);
        let ok = r.hypothesis_met && r.violations.is_empty() && r.f && r.g && r.h && r.hgf;
        let inputs = json!({"f": f.to_json(), "g": g.to_json(), "h": h.to_json()});
        let witness = if ok {
            json!({"ring": ring.tag()})
        } else {
            json!({"triple": inputs, "hypothesis_met": r.hypothesis_met, "violations": r.violations})
        };
        Case::new("two-of-six", &label(i), &inputs, ok, witness)
    })
}

/// `Hₙ(X⊗Y) = ⊕ Hᵢ(X)⊗H_{n−i}(Y)` over a field, rank by rank.
fn kunneth(cfg: &SuiteConfig, rings: &[Ring], n: usize) -> Vec<Case> {
    let fields: Vec<Ring> = rings.iter().copied().filter(Ring::is_field).collect();
    let fields = if fields.is_empty() { vec![Ring::Fp(5)] } else { fields };
    par_cases(n, |i| {
        let ring = fields[i % fields.len()];
        let mut rng = rng_for(cfg.seed, "kunneth", i as u64);
        let b = cfg.bounds();
        let x = random::complex(ring, b, &mut rng);
        let y = random::complex(ring, b, &mut rng);
        let t = tensor(&x, &y);
        let mut bad = vec![];
        for n in t.lo() - 1..=t.hi() + 1 {
            let expect: usize = x.degrees().map(|i| homology(&x, i).free_rank * homology(&y, n - i).free_rank).sum();
            let got = homology(&t, n).free_rank;
            if got != expect {
                bad.push(json!({"degree": n, "tensor": got, "kunneth": expect}));
            }
        }
        let inputs = json!({"x": x.to_json(), "y": y.to_json()});
        let ok = bad.is_empty();
        let witness = if ok { json!({"ring": ring.tag(), "tensor_rank": t.total_rank()}) } else { json!({"inputs": inputs, "mismatches": bad}) };
        Case::new("kunneth", &label(i), &inputs, ok, witness)
    })
}

pub fn run(cfg: &SuiteConfig) -> Vec<Case> {
    let mut cases = vec![];
    if cfg.runs("factorization") {
        for &r in &cfg.rings {
            cases.extend(factorization(cfg, r, cfg.count(500)));
        }
    }
    if cfg.runs("functoriality") {
        let n = cfg.count(200);
        for (k, &r) in cfg.rings.iter().enumerate() {
            let share = n / cfg.rings.len() + (k < n % cfg.rings.len()) as usize;
            cases.extend(functoriality(cfg, r, share));
        }
    }
    if cfg.runs("lifting") {
        cases.extend(lifting(cfg, &cfg.rings, cfg.count(200)));
    }
    if cfg.runs("two-of-six") {
        cases.extend(two_of_six(cfg, &cfg.rings, cfg.count(100)));
    }
    if cfg.runs("kunneth") {
        cases.extend(kunneth(cfg, &cfg.rings, cfg.count(100)));
    }
    cases
}
