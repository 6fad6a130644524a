//! Verification reports and the thread cap shared by all check suites.

use std::sync::Once;

use serde::Serialize;

/// One checked instance: what was tested and what was left over.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckCase {
    pub input: String,
    pub residual: String,
    pub pass: bool,
}

impl CheckCase {
    pub fn new(input: impl Into<String>, residual: impl Into<String>, pass: bool) -> Self {
        Self {
            input: input.into(),
            residual: residual.into(),
            pass,
        }
    }

    /// Passing exactly when the residual prints as `0`.
    pub fn zero_residual(input: impl Into<String>, residual: impl Into<String>) -> Self {
        let residual = residual.into();
        let pass = residual == "0";
        Self::new(input, residual, pass)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub schema: u32,
    pub check: String,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ell: Option<u32>,
    pub cases: Vec<CheckCase>,
}

impl CheckReport {
    pub const SCHEMA: u32 = 1;

    pub fn new(check: impl Into<String>, n: usize, ell: Option<u32>) -> Self {
        Self {
            schema: Self::SCHEMA,
            check: check.into(),
            n,
            ell,
            cases: Vec::new(),
        }
    }

    pub fn with_cases(mut self, cases: impl IntoIterator<Item = CheckCase>) -> Self {
        self.cases.extend(cases);
        self
    }

    pub fn push(&mut self, case: CheckCase) {
        self.cases.push(case);
    }

    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckCase> {
        self.cases.iter().filter(|c| !c.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Plain-text rendering used by the CLI without `--json`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let ell = self.ell.map(|e| format!(" ell={e}")).unwrap_or_default();
        let failed = self.failures().count();
        out.push_str(&format!(
            "check {} n={}{ell}: {} cases, {} failed\n",
            self.check,
            self.n,
            self.cases.len(),
            failed
        ));
        for c in &self.cases {
            let tag = if c.pass { "ok  " } else { "FAIL" };
            out.push_str(&format!("  {tag} {}", c.input));
            if !c.pass || c.residual != "0" {
                out.push_str(&format!("  ->  {}", c.residual));
            }
            out.push('\n');
        }
        out
    }
}

/// Environment variable capping the worker count of the parallel checks.
pub const THREADS_ENV: &str = "QCOORD_THREADS";

/// Configures the global rayon pool from `QCOORD_THREADS` once per process.
/// Invalid or absent values leave rayon's default in place.
pub fn init_thread_pool() {
    static INIT: Once = Once::new();
    INIT.call_once(|| {
        let Some(n) = std::env::var(THREADS_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .filter(|&n| n > 0)
        else {
            return;
        };
        // Fails only if a pool was already built; keep the existing one then.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    });
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shape() {
        let r = CheckReport::new("central", 2, None)
            .with_cases([CheckCase::zero_residual("[D, t[1,1]]", "0")]);
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["check"], "central");
        assert!(v.get("ell").is_none());
        assert_eq!(v["cases"][0]["pass"], true);
        let r = CheckReport::new("frobenius", 2, Some(3));
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["ell"], 3);
        assert!(r.passed());
    }

    #[test]
    fn residual_must_be_zero() {
        assert!(!CheckCase::zero_residual("x", "q t[1,1]").pass);
    }
}
