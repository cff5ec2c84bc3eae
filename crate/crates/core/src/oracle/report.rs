use serde::{Deserialize, Serialize};
use serde_json::Value;

/// How many counterexamples are kept in full; the rest are only counted.
pub const MAX_RECORDED: usize = 10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    /// Enumeration index or trial number.
    pub index: u64,
    pub instance: Value,
    pub detail: String,
}

/// Outcome of a suite run. Equality ignores `elapsed_ms`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SuiteReport {
    pub schema: u32,
    pub suite: String,
    /// The property under test, in words.
    pub statement: String,
    pub mode: Mode,
    pub instances: u64,
    pub rejected: u64,
    pub violation_count: u64,
    pub violations: Vec<Violation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub elapsed_ms: u64,
    pub passed: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exhaustive,
    Random,
}

impl PartialEq for SuiteReport {
    fn eq(&self, other: &Self) -> bool {
        self.schema == other.schema
            && self.suite == other.suite
            && self.statement == other.statement
            && self.mode == other.mode
            && self.instances == other.instances
            && self.rejected == other.rejected
            && self.violation_count == other.violation_count
            && self.violations == other.violations
            && self.seed == other.seed
            && self.passed == other.passed
    }
}

impl SuiteReport {
    pub fn summary(&self) -> String {
        format!(
            "{}: {} instances tested, {} rejected, {} violations ({})",
            self.suite,
            self.instances,
            self.rejected,
            self.violation_count,
            if self.passed { "pass" } else { "FAIL" }
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Concatenates several runs of the same suite, in order.
    pub fn merge(mut self, other: SuiteReport) -> SuiteReport {
        self.instances += other.instances;
        self.rejected += other.rejected;
        self.violation_count += other.violation_count;
        let room = MAX_RECORDED.saturating_sub(self.violations.len());
        self.violations.extend(other.violations.into_iter().take(room));
        self.elapsed_ms += other.elapsed_ms;
        self.passed = self.violation_count == 0;
        self
    }
}

/// Per-chunk counts; merged left to right so results do not depend on the
/// thread count.
#[derive(Clone, Debug, Default, PartialEq)]
pub(crate) struct Tally {
    pub instances: u64,
    pub rejected: u64,
    pub violation_count: u64,
    pub violations: Vec<Violation>,
}

impl Tally {
    pub fn merge(mut self, other: Tally) -> Tally {
        self.instances += other.instances;
        self.rejected += other.rejected;
        self.violation_count += other.violation_count;
        let room = MAX_RECORDED.saturating_sub(self.violations.len());
        self.violations.extend(other.violations.into_iter().take(room));
        self
    }
}
