use std::collections::BTreeMap;

use rayon::prelude::*;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use dgw::random::{case_rng, CaseRng};

/// One verified case.
#[derive(Clone, Debug, PartialEq)]
pub struct Case {
    pub id: String,
    pub digest: String,
    pub pass: bool,
    /// Facts on success, the exact inputs on failure.
    pub witness: Value,
}

impl Case {
    pub fn new(section: &str, label: &str, inputs: &Value, pass: bool, witness: Value) -> Case {
        Case { id: format!("{section}/{label}"), digest: digest(inputs), pass, witness }
    }

    pub fn section(&self) -> &str {
        self.id.split('/').next().unwrap_or("")
    }

    pub fn to_json(&self) -> Value {
        json!({"id": self.id, "digest": self.digest, "pass": self.pass, "witness": self.witness})
    }
}

/// First 16 hex digits of the SHA-256 of the compact serialization.
pub fn digest(v: &Value) -> String {
    let h = Sha256::digest(serde_json::to_string(v).expect("serializable").as_bytes());
    h.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

/// Per-section seed, so sections and case indices never share a stream.
pub fn section_seed(seed: u64, section: &str) -> u64 {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update(section.as_bytes());
    let out = h.finalize();
    u64::from_le_bytes(out[..8].try_into().unwrap())
}

pub fn rng_for(seed: u64, section: &str, idx: u64) -> CaseRng {
    case_rng(section_seed(seed, section), idx)
}

/// Runs `n` cases on the current rayon pool; the order of the result is
/// the index order.
pub fn par_cases<F>(n: usize, f: F) -> Vec<Case>
where
    F: Fn(usize) -> Case + Sync + Send,
{
    (0..n).into_par_iter().map(f).collect()
}

pub fn label(idx: usize) -> String {
    format!("{idx:04}")
}

#[derive(Clone, Debug)]
pub struct Report {
    pub suite: String,
    pub config: Value,
    pub cases: Vec<Case>,
    /// Suite-specific data reported alongside the cases.
    pub details: Value,
}

impl Report {
    pub fn new(suite: &str, config: Value, mut cases: Vec<Case>, details: Value) -> Report {
        cases.sort_by(|a, b| a.id.cmp(&b.id));
        Report { suite: suite.into(), config, cases, details }
    }

    pub fn pass(&self) -> bool {
        self.cases.iter().all(|c| c.pass)
    }

    pub fn sections(&self) -> BTreeMap<String, (usize, usize)> {
        let mut out: BTreeMap<String, (usize, usize)> = BTreeMap::new();
        for c in &self.cases {
            let e = out.entry(c.section().to_string()).or_default();
            e.0 += 1;
            e.1 += c.pass as usize;
        }
        out
    }

    pub fn failures(&self) -> Vec<&Case> {
        self.cases.iter().filter(|c| !c.pass).collect()
    }

    pub fn to_json(&self) -> Value {
        let sections: serde_json::Map<String, Value> =
            self.sections().into_iter().map(|(k, (n, p))| (k, json!({"cases": n, "passed": p}))).collect();
        json!({
            "suite": self.suite,
            "config": self.config,
            "pass": self.pass(),
            "sections": sections,
            "cases": self.cases.iter().map(Case::to_json).collect::<Vec<_>>(),
            "details": self.details,
        })
    }

    /// The serialized report; identical configs give identical bytes.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("serializable");
        s.push('\n');
        s.into_bytes()
    }

    pub fn summary(&self) -> String {
        let mut s = String::new();
        let total = self.cases.len();
        let passed = self.cases.iter().filter(|c| c.pass).count();
        s.push_str(&format!("{}: {} ({passed}/{total} cases)\n", self.suite, if self.pass() { "PASS" } else { "FAIL" }));
        for (name, (n, p)) in self.sections() {
            s.push_str(&format!("  {name}: {p}/{n}\n"));
        }
        for c in self.failures().iter().take(5) {
            s.push_str(&format!("  failed {} [{}]\n", c.id, c.digest));
        }
        s
    }
}
