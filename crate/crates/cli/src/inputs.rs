use std::path::Path;

use serde_json::{json, Map, Value};

use dgw::chain::{homology, ChainComplex, ChainMap};
use dgw::coalg::DGCoalgebra;
use dgw::dga::{free_algebra, Presentation};
use dgw::reedy::ReedyCategory;

use crate::CliError;

pub fn parse_json(path: &str, text: &str) -> Result<Value, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Json { path: path.into(), line: e.line(), column: e.column(), msg: e.to_string() })
}

pub fn load_json(path: &Path) -> Result<Value, CliError> {
    let p = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io { path: p.clone(), msg: e.to_string() })?;
    parse_json(&p, &text)
}

fn has(v: &Value, keys: &[&str]) -> bool {
    keys.iter().all(|k| v.get(k).is_some())
}

/// Recognizes the input by its keys and runs its structural checks.
pub fn validate(v: &Value) -> (&'static str, Result<(), String>) {
    let s = |e: &dyn std::fmt::Display| e.to_string();
    if has(v, &["objects", "morphisms"]) {
        return ("Reedy category", ReedyCategory::from_json(v).map(|_| ()).map_err(|e| s(&e)));
    }
    if has(v, &["src", "dst"]) {
        let r = ChainMap::from_json(v).map_err(|e| s(&e)).and_then(|f| {
            f.src.validate().map_err(|e| format!("source: {e}"))?;
            f.dst.validate().map_err(|e| format!("target: {e}"))?;
            f.check().map_err(|e| s(&e))
        });
        return ("chain map", r);
    }
    if has(v, &["comult"]) {
        return ("coalgebra", DGCoalgebra::from_json(v).and_then(|c| c.verify()).map_err(|e| s(&e)));
    }
    if has(v, &["generators"]) {
        let r = Presentation::from_json(v).and_then(|p| free_algebra(&p)).and_then(|a| a.verify()).map_err(|e| s(&e));
        return ("algebra presentation", r);
    }
    if has(v, &["rank"]) {
        return ("chain complex", ChainComplex::from_json(v).and_then(|c| c.validate()).map_err(|e| s(&e)));
    }
    ("input", Err("unrecognized JSON: expected a complex, chain map, presentation, coalgebra or Reedy category".into()))
}

pub fn homology_report(v: &Value) -> Result<Value, CliError> {
    let c = ChainComplex::from_json(v).map_err(|e| CliError::Input(e.to_string()))?;
    c.validate().map_err(|e| CliError::Input(format!("invalid chain complex: {e}")))?;
    let mut degrees = Map::new();
    for n in c.degrees() {
        let h = homology(&c, n);
        degrees.insert(n.to_string(), json!({"free_rank": h.free_rank, "torsion": h.torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>()}));
    }
    Ok(json!({"ring": c.ring().tag(), "homology": degrees}))
}
