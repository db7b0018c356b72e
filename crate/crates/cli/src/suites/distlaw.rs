use std::sync::Arc;

use serde_json::json;

use dgw::bialg::distlaw::{all_mutations, check_distributive_law, sample_instance, tensor_distlaw, DistLawReport};
use dgw::bialg::samples::exterior;
use dgw::chain::sphere;
use dgw::random::Bounds;
use dgw::reedy::{random_family, reedy_distributive_law, truncated_delta, truncated_delta_op};

use crate::config::SuiteConfig;
use crate::report::{label, par_cases, rng_for, section_seed, Case};

fn report_case(section: &str, label: &str, inputs: &serde_json::Value, rep: Result<DistLawReport, String>, expect_ok: bool) -> Case {
    match rep {
        Ok(r) => {
            let checked = r.diagrams.iter().all(|d| d.checked > 0);
            let pass = if expect_ok { r.ok() && checked } else { !r.ok() };
            Case::new(section, label, inputs, pass, r.to_json())
        }
        Err(e) => Case::new(section, label, inputs, false, json!({"error": e})),
    }
}

pub fn run(cfg: &SuiteConfig) -> Vec<Case> {
    let ring = cfg.ring();
    let mut cases = vec![];
    if cfg.runs("tensor") {
        let seed = section_seed(cfg.seed, "tensor");
        cases.extend(par_cases(cfg.count(20), |i| {
            let (name, x, h, w) = sample_instance(ring, seed, i as u64);
            let inputs = json!({"ring": ring.tag(), "x": x.to_json(), "h": name, "max_weight": w});
            report_case("tensor", &label(i), &inputs, check_distributive_law(&tensor_distlaw(&x, &h, w, None, &name)), true)
        }));
    }
    if cfg.runs("mutation") {
        // one odd generator against exterior algebras on odd generators
        let x = sphere(1, ring);
        let hs = [("Λ(e), |e|=1", exterior(ring, &[("e", 1)])), ("Λ(e), |e|=3", exterior(ring, &[("e", 3)]))];
        let muts = all_mutations();
        cases.extend(par_cases(muts.len() * hs.len(), |k| {
            let (m, (hn, h)) = (muts[k / hs.len()], &hs[k % hs.len()]);
            let inputs = json!({"ring": ring.tag(), "h": hn, "mutation": m.to_string(), "max_weight": 3});
            let rep = check_distributive_law(&tensor_distlaw(&x, h, 3, Some(m), &format!("{m} on {hn}")));
            report_case("mutation", &format!("{m}/{}", k % hs.len()), &inputs, rep, false)
        }));
    }
    if cfg.runs("reedy-chi") {
        let shapes = [("Δ≤1", 1, false), ("Δ≤1-op", 1, true), ("Δ≤2", 2, false), ("Δ≤2-op", 2, true)];
        let per = cfg.count(3).min(10);
        cases.extend(par_cases(shapes.len() * per, |k| {
            let (name, n, op) = shapes[k / per];
            let cat = Arc::new(if op { truncated_delta_op(n) } else { truncated_delta(n) }.expect("n ≤ 3"));
            let mut rng = rng_for(cfg.seed, "reedy-chi", k as u64);
            let fam = random_family(&cat, ring, Bounds { max_rank: 1, deg_lo: 0, deg_hi: 1 }, &mut rng);
            let inputs = json!({"ring": ring.tag(), "shape": name, "family": fam.iter().map(|c| c.to_json()).collect::<Vec<_>>()});
            let rep = check_distributive_law(&reedy_distributive_law(&cat, &fam, name));
            report_case("reedy-chi", &format!("{name}/{}", label(k % per)), &inputs, rep, true)
        }));
    }
    cases
}
