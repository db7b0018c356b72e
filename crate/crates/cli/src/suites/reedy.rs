use std::collections::BTreeMap;
use std::sync::Arc;

use serde_json::{json, Value};

use dgw::chain::{disk, sphere, ChainComplex, ChainMap};
use dgw::exactlin::{Matrix, Ring};
use dgw::reedy::*;

use crate::config::SuiteConfig;
use crate::report::{label, par_cases, rng_for, Case};
use crate::CliError;

fn diagram_json(d: &Diagram) -> Value {
    let maps: BTreeMap<String, Value> = (0..d.shape.morphisms.len())
        .filter(|&m| d.shape.in_part(m, d.part) && !d.shape.is_identity(m))
        .map(|m| (d.shape.morphisms[m].name.clone(), d.map(m).to_json()))
        .collect();
    json!({"objects": d.objects.iter().map(|o| o.to_json()).collect::<Vec<_>>(), "maps": maps})
}

fn err_case(section: &str, label: &str, e: ReedyError) -> Case {
    Case::new(section, label, &json!(label), false, json!({"error": e.to_string()}))
}

fn simplicial(cat: &Arc<ReedyCategory>, cfg: &SuiteConfig, i: usize) -> Case {
    let ring = cfg.ring();
    let mut rng = rng_for(cfg.seed, "simplicial", i as u64);
    let phi = match random_diagram(cat, Part::All, ring, &mut rng) {
        Ok(p) => p,
        Err(e) => return err_case("simplicial", &label(i), e),
    };
    let mut rows = vec![];
    let mut ok = true;
    for n in 0..cat.objects.len() {
        let l = simplicial_latching_agrees(&phi, n).unwrap_or(false);
        let m = simplicial_matching_agrees(&phi, n).unwrap_or(false);
        ok &= l && m;
        rows.push(json!({
            "n": n,
            "latching_ranks": latching(&phi, n).map(|l| json!(l.object().ranks())).unwrap_or(Value::Null),
            "matching_ranks": matching(&phi, n).map(|m| json!(m.object().ranks())).unwrap_or(Value::Null),
            "latching_agrees": l,
            "matching_agrees": m,
        }));
    }
    let inputs = diagram_json(&phi);
    let witness = if ok { json!({"levels": rows}) } else { json!({"levels": rows, "diagram": inputs}) };
    Case::new("simplicial", &label(i), &inputs, ok, witness)
}

fn exact_square(cat: &Arc<ReedyCategory>, cfg: &SuiteConfig, i: usize, dual: bool) -> Case {
    let ring = cfg.ring();
    let (section, part) = if dual { ("exact-square-dual", Part::Plus) } else { ("exact-square", Part::Minus) };
    let mut rng = rng_for(cfg.seed, section, i as u64);
    let rep = random_diagram(cat, part, ring, &mut rng).and_then(|phi| {
        let r = if dual { check_exact_square_dual(&phi) } else { check_exact_square(&phi) }?;
        Ok((phi, r))
    });
    match rep {
        Ok((phi, r)) => {
            let inputs = diagram_json(&phi);
            let mut witness = r.to_json();
            if !r.ok() {
                witness["diagram"] = inputs.clone();
            }
            Case::new(section, &label(i), &inputs, r.ok(), witness)
        }
        Err(e) => err_case(section, &label(i), e),
    }
}

fn constant_map(cat: &Arc<ReedyCategory>, f: &ChainMap) -> NatTrans {
    let (a, b) = (Diagram::constant(cat.clone(), Part::All, &f.src), Diagram::constant(cat.clone(), Part::All, &f.dst));
    NatTrans::new(a, b, vec![f.clone(); cat.objects.len()]).expect("constant maps are natural")
}

/// Hand-checked classifications on `(Δ≤1)ᵒᵖ`.
fn golden(ring: Ring) -> Vec<Case> {
    let c = Arc::new(truncated_delta_op(1).expect("n ≤ 3"));
    let s0 = sphere(0, ring);
    let d1 = disk(1, ring);
    let s1 = sphere(1, ring);
    let incl = ChainMap::new(s0.clone(), d1.clone(), BTreeMap::from([(0, Matrix::identity(ring, 1))])).unwrap();
    let proj = ChainMap::new(d1, s1, BTreeMap::from([(1, Matrix::identity(ring, 1))])).unwrap();
    let free = lan(&Diagram::family(c.clone(), vec![s0.clone(), ChainComplex::zero(ring)]), Part::All).unwrap().diagram;
    let zero = Diagram::zero(c.clone(), Part::All, ring);
    let from_zero = NatTrans::new(zero.clone(), free.clone(), free.objects.iter().map(|o| ChainMap::zero(&zero.objects[0], o)).collect()).unwrap();
    let cases: Vec<(&str, NatTrans, (bool, bool, bool))> = vec![
        ("identity", NatTrans::identity(&Diagram::constant(c.clone(), Part::All, &s0)), (true, true, true)),
        ("constant S0->D1", constant_map(&c, &incl), (true, false, false)),
        ("constant D1->S1", constant_map(&c, &proj), (false, false, false)),
        ("0->free on S0 at [0]", from_zero, (true, false, false)),
    ];
    cases
        .into_iter()
        .map(|(name, tau, want)| {
            let inputs = json!({"ring": ring.tag(), "case": name});
            match reedy_classify(&tau) {
                Ok(k) => {
                    let got = (k.cofibration, k.fibration, k.weak_equivalence);
                    let mut w = k.to_json();
                    w["expected"] = json!({"cofibration": want.0, "fibration": want.1, "weak_equivalence": want.2});
                    Case::new("golden", name, &inputs, got == want, w)
                }
                Err(e) => err_case("golden", name, e),
            }
        })
        .collect()
}

pub fn run(cfg: &SuiteConfig) -> Result<Vec<Case>, CliError> {
    let ring = cfg.ring();
    if !ring.is_field() {
        return Err(CliError::Usage(ReedyError::NotField(ring.tag()).to_string()));
    }
    let cat = Arc::new(truncated_delta_op(2).expect("n ≤ 3"));
    let n = cfg.count(50);
    let mut cases = vec![];
    if cfg.runs("simplicial") {
        cases.extend(par_cases(n, |i| simplicial(&cat, cfg, i)));
    }
    if cfg.runs("exact-square") {
        cases.extend(par_cases(n, |i| exact_square(&cat, cfg, i, false)));
        cases.extend(par_cases(n, |i| exact_square(&cat, cfg, i, true)));
    }
    if cfg.runs("golden") {
        cases.extend(golden(ring));
    }
    Ok(cases)
}
