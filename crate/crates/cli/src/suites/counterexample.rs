use serde_json::{json, Value};

use dgw::bialg::{counterexample_obstruction, Roots};
use dgw::exactlin::{Ring, Scalar};

use crate::config::SuiteConfig;
use crate::report::Case;
use crate::CliError;

/// Values of `a` to test: all of `F_p`, otherwise `−2..2` and every root.
fn sweep(ring: Ring, roots: &Roots) -> Vec<Scalar> {
    let mut out: Vec<Scalar> = match ring {
        Ring::Fp(p) => (0..p as i64).map(|a| ring.from_i64(a)).collect(),
        _ => (-2..=2).map(|a| ring.from_i64(a)).collect(),
    };
    if let Roots::Finite(rs) = roots {
        out.extend(rs.iter().cloned());
    }
    out.sort();
    out.dedup();
    out
}

/// One case per `a`: the coalgebra-map obstruction must be nonzero.
pub fn run(cfg: &SuiteConfig) -> Result<(Vec<Case>, Value), CliError> {
    let ring = cfg.ring();
    let o = counterexample_obstruction(cfg.m, ring).map_err(|e| CliError::Usage(e.to_string()))?;
    let cases = sweep(ring, &o.roots)
        .into_iter()
        .map(|a| {
            let s = ring.fmt_scalar(&a);
            let diff = o.at(&a);
            let inputs = json!({"ring": ring.tag(), "m": cfg.m, "a": s});
            let witness = json!({"difference": o.render(&diff), "display_difference": o.render(&o.display_at(&a))});
            Case::new("sweep", &format!("a={s}"), &inputs, !diff.is_empty(), witness)
        })
        .collect();
    Ok((cases, o.to_json()))
}
