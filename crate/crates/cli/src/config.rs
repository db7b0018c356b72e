use serde_json::{json, Value};

use dgw::exactlin::Ring;
use dgw::random::Bounds;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Wfs,
    Barcobar,
    Distlaw,
    Counterexample,
    Reedy,
}

impl Suite {
    pub fn name(&self) -> &'static str {
        match self {
            Suite::Wfs => "wfs",
            Suite::Barcobar => "barcobar",
            Suite::Distlaw => "distlaw",
            Suite::Counterexample => "counterexample",
            Suite::Reedy => "reedy",
        }
    }

    /// Checks a suite can be restricted to with `--check`.
    pub fn checks(&self) -> &'static [&'static str] {
        match self {
            Suite::Wfs => &["factorization", "functoriality", "lifting", "two-of-six", "kunneth"],
            Suite::Barcobar => &["bar-cobar", "two-sided"],
            Suite::Distlaw => &["tensor", "mutation", "reedy-chi"],
            Suite::Counterexample => &["sweep"],
            Suite::Reedy => &["simplicial", "exact-square", "golden"],
        }
    }
}

/// Resolved configuration of a suite run. Everything here except
/// `threads` is echoed into the report.
#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    pub suite: Suite,
    pub checks: Vec<String>,
    pub rings: Vec<Ring>,
    pub seed: u64,
    /// Overrides the per-check default case counts.
    pub cases: Option<usize>,
    pub max_rank: usize,
    pub deg_lo: i64,
    pub deg_hi: i64,
    pub max_weight: usize,
    pub m: i64,
    pub threads: Option<usize>,
}

impl SuiteConfig {
    pub fn defaults(suite: Suite) -> SuiteConfig {
        let rings = match suite {
            Suite::Wfs => vec![Ring::Fp(2), Ring::Fp(3), Ring::Fp(5)],
            Suite::Barcobar => vec![Ring::Fp(5)],
            Suite::Distlaw | Suite::Counterexample | Suite::Reedy => vec![Ring::Fp(3)],
        };
        SuiteConfig {
            suite,
            checks: suite.checks().iter().map(|s| s.to_string()).collect(),
            rings,
            seed: 1,
            cases: None,
            max_rank: 6,
            deg_lo: -3,
            deg_hi: 5,
            max_weight: 6,
            m: 2,
            threads: None,
        }
    }

    pub fn ring(&self) -> Ring {
        self.rings[0]
    }

    pub fn bounds(&self) -> Bounds {
        Bounds { max_rank: self.max_rank, deg_lo: self.deg_lo, deg_hi: self.deg_hi }
    }

    pub fn runs(&self, check: &str) -> bool {
        self.checks.iter().any(|c| c == check)
    }

    pub fn count(&self, default: usize) -> usize {
        self.cases.unwrap_or(default)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.rings.is_empty() {
            return Err(CliError::Usage("no ring".into()));
        }
        if self.deg_lo > self.deg_hi {
            return Err(CliError::Usage(format!("--deg-lo {} exceeds --deg-hi {}", self.deg_lo, self.deg_hi)));
        }
        if self.cases == Some(0) {
            return Err(CliError::Usage("--cases must be positive".into()));
        }
        if self.max_weight == 0 {
            return Err(CliError::Usage("--max-weight must be positive".into()));
        }
        for c in &self.checks {
            if !self.suite.checks().contains(&c.as_str()) {
                return Err(CliError::Usage(format!("{} has no check {c:?}; expected one of {:?}", self.suite.name(), self.suite.checks())));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite.name(),
            "checks": self.checks,
            "rings": self.rings.iter().map(|r| r.tag()).collect::<Vec<_>>(),
            "seed": self.seed,
            "cases": self.cases,
            "max_rank": self.max_rank,
            "deg_lo": self.deg_lo,
            "deg_hi": self.deg_hi,
            "max_weight": self.max_weight,
            "m": self.m,
        })
    }
}
