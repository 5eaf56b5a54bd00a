//! Proof traces: ordered elimination steps with a verdict, rendered as text and JSON.

use crate::sieve::EliminationStep;
use serde::Serialize;
use std::fmt::Write;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Resolved,
    ResolvedExceptListedP,
    /// A survivor list came from the fallback instead of eigenvalue data under --strict-no-cited.
    DataMissing,
    /// Some computed step did not verify.
    Unresolved,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Resolved => "resolved",
            Verdict::ResolvedExceptListedP => "resolved_except_listed_p",
            Verdict::DataMissing => "data_missing",
            Verdict::Unresolved => "unresolved",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Resolved | Verdict::ResolvedExceptListedP => 0,
            Verdict::DataMissing => 3,
            Verdict::Unresolved => 4,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ProofTrace {
    pub equation: String,
    pub r: u32,
    pub d: u64,
    pub steps: Vec<EliminationStep>,
    pub verdict: Verdict,
    pub excluded: Vec<u64>,
    /// Steps whose survivor lists were instantiated without eigenvalue data.
    pub fallback: Vec<String>,
}

impl ProofTrace {
    pub fn new(r: u32, d: u64, steps: Vec<EliminationStep>, excluded: Vec<u64>, fallback: Vec<String>, strict_no_cited: bool) -> Self {
        let failed = steps.iter().any(|s| !s.is_cited() && !s.advisory && !s.verified);
        let verdict = if failed {
            Verdict::Unresolved
        } else if strict_no_cited && !fallback.is_empty() {
            Verdict::DataMissing
        } else if excluded.is_empty() {
            Verdict::Resolved
        } else {
            Verdict::ResolvedExceptListedP
        };
        ProofTrace { equation: format!("x^{r} + y^{r} = {d}z^p"), r, d, steps, verdict, excluded, fallback }
    }

    pub fn render_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "equation: {}", self.equation).unwrap();
        for (i, st) in self.steps.iter().enumerate() {
            writeln!(s, "{:>3}. {st}", i + 1).unwrap();
        }
        for f in &self.fallback {
            writeln!(s, "fallback: {f}").unwrap();
        }
        if !self.excluded.is_empty() {
            let ex: Vec<String> = self.excluded.iter().map(|p| p.to_string()).collect();
            writeln!(s, "excluded p: {}", ex.join(", ")).unwrap();
        }
        writeln!(s, "verdict: {}", self.verdict.as_str()).unwrap();
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("trace serializes") + "\n"
    }
}
