use serde_json::{json, Value};

use dgw::barcobar::*;
use dgw::dga::TruncationPolicy;
use dgw::exactlin::Ring;

use crate::config::SuiteConfig;
use crate::report::{digest, par_cases, section_seed, Case};

const BAR_HI: i64 = 8;
const COBAR_HI: i64 = 6;

fn err_case(section: &str, name: &str, inputs: &Value, e: impl std::fmt::Display) -> Case {
    Case::new(section, name, inputs, false, json!({"error": e.to_string()}))
}

fn algebra_case(ring: Ring, w: usize, idx: usize) -> Case {
    let (name, a) = samples::algebras(ring).swap_remove(idx);
    let label = format!("algebra-{idx:02}");
    let inputs = json!({"ring": ring.tag(), "algebra": name, "max_weight": w});
    let b = match bar(&a, TruncationPolicy::new(w, 0, BAR_HI)) {
        Ok(b) => b,
        Err(e) => return err_case("bar-cobar", &label, &inputs, e),
    };
    let d2 = b.coalgebra.complex.validate().is_ok();
    let structure = b.coalgebra.verify();
    let rep = match counit_eps(&a, TruncationPolicy::new(w, 0, BAR_HI), TruncationPolicy::new(w, 0, COBAR_HI)) {
        Ok(r) => r,
        Err(e) => return err_case("bar-cobar", &label, &inputs, e),
    };
    let defects = cone_defects(&rep.chain_map, rep.window);
    let ok = d2 && structure.is_ok() && rep.chain_map.is_chain_map() && defects.is_empty();
    let witness = json!({
        "name": name,
        "bar_rank": b.coalgebra.len(),
        "d_squared_zero": d2,
        "bar_coalgebra": structure.err().map(|e| e.to_string()),
        "counit_window": [rep.window.0, rep.window.1],
        "cone_defects": defects,
    });
    Case::new("bar-cobar", &label, &inputs, ok, witness)
}

fn coalgebra_case(ring: Ring, w: usize, idx: usize) -> Case {
    let (name, c) = samples::coalgebras(ring).swap_remove(idx);
    let label = format!("coalgebra-{idx:02}");
    let inputs = json!({"ring": ring.tag(), "coalgebra": c.to_json(), "max_weight": w});
    let o = match cobar(&c, TruncationPolicy::new(w, 0, COBAR_HI)) {
        Ok(o) => o,
        Err(e) => return err_case("bar-cobar", &label, &inputs, e),
    };
    let d2 = o.algebra.complex.validate().is_ok();
    let structure = o.algebra.verify();
    let rep = match unit_eta(&c, TruncationPolicy::new(w, 0, COBAR_HI), TruncationPolicy::new(w, 0, BAR_HI)) {
        Ok(r) => r,
        Err(e) => return err_case("bar-cobar", &label, &inputs, e),
    };
    let defects = cone_defects(&rep.chain_map, rep.window);
    let ok = d2 && structure.is_ok() && rep.chain_map.is_chain_map() && defects.is_empty();
    let witness = json!({
        "name": name,
        "cobar_rank": o.algebra.len(),
        "d_squared_zero": d2,
        "cobar_algebra": structure.err().map(|e| e.to_string()),
        "unit_window": [rep.window.0, rep.window.1],
        "cone_defects": defects,
    });
    Case::new("bar-cobar", &label, &inputs, ok, witness)
}

fn two_sided(cfg: &SuiteConfig, ring: Ring, n: usize) -> Vec<Case> {
    let seed = section_seed(cfg.seed, "two-sided");
    par_cases(n, |i| {
        let (name, x) = samples::coring_triple(ring, seed, i as u64);
        let label = format!("{i:04}");
        let inputs = json!({"ring": ring.tag(), "triple": name, "module": digest(&json!(x.module.names))});
        if let Err(e) = x.module.verify().and(x.comodule.verify()).and(x.check_linear()) {
            return err_case("two-sided", &label, &inputs, e);
        }
        let b = match two_sided_bar(&x.module, TruncationPolicy::new(2, 0, 5)) {
            Ok(b) => b,
            Err(e) => return err_case("two-sided", &label, &inputs, e),
        };
        let rep = check_lifted_coaction(&b, &x, false);
        let literal = check_lifted_coaction(&b, &x, true);
        let witness = json!({
            "triple": name,
            "window": [b.window.0, b.window.1],
            "comodule": rep.comodule_structure(),
            "chain": rep.chain,
            "coassociative": rep.coassociative,
            "counital": rep.counital,
            "linear": rep.linear,
            "augmentation_comodule_map": rep.aug_comodule_map,
            "augmentation_module_map": rep.aug_module_map,
            "quasi_iso": rep.quasi_iso,
            "uncorrected_counital": literal.counital,
        });
        Case::new("two-sided", &label, &inputs, rep.all(), witness)
    })
}

pub fn run(cfg: &SuiteConfig) -> Vec<Case> {
    let ring = cfg.ring();
    let mut cases = vec![];
    if cfg.runs("bar-cobar") {
        let na = samples::algebras(ring).len();
        let nc = samples::coalgebras(ring).len();
        cases.extend(par_cases(na, |i| algebra_case(ring, cfg.max_weight, i)));
        cases.extend(par_cases(nc, |i| coalgebra_case(ring, cfg.max_weight, i)));
    }
    if cfg.runs("two-sided") {
        cases.extend(two_sided(cfg, ring, cfg.count(5)));
    }
    cases
}
