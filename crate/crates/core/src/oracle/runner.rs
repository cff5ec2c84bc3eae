use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::Value;

use super::report::{Mode, SuiteReport, Tally, Violation, MAX_RECORDED};

const CHUNK: u64 = 1024;

/// Result of checking one instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    /// Outside the property's hypotheses; counted but not tested.
    Reject,
    Violation(String),
}

impl Verdict {
    pub fn check(ok: bool, detail: impl FnOnce() -> String) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Violation(detail())
        }
    }
}

/// Independent stream `index` of the generator seeded by `seed`.
pub fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn tally<T>(
    range: std::ops::Range<u64>,
    make: &(impl Fn(u64) -> T + Sync),
    check: &(impl Fn(&T, u64) -> Verdict + Sync),
    show: &(impl Fn(&T) -> Value + Sync),
) -> Tally {
    let mut t = Tally::default();
    for index in range {
        let instance = make(index);
        match check(&instance, index) {
            Verdict::Pass => t.instances += 1,
            Verdict::Reject => t.rejected += 1,
            Verdict::Violation(detail) => {
                t.instances += 1;
                t.violation_count += 1;
                if t.violations.len() < MAX_RECORDED {
                    t.violations.push(Violation {
                        index,
                        instance: show(&instance),
                        detail,
                    });
                }
            }
        }
    }
    t
}

/// Runs `check` on instances `0..count` in parallel chunks.
#[allow(clippy::too_many_arguments)]
pub(crate) fn run<T>(
    suite: &str,
    statement: &str,
    mode: Mode,
    seed: Option<u64>,
    count: u64,
    make: impl Fn(u64) -> T + Sync,
    check: impl Fn(&T, u64) -> Verdict + Sync,
    show: impl Fn(&T) -> Value + Sync,
) -> SuiteReport {
    let start = Instant::now();
    let chunks = count.div_ceil(CHUNK);
    let tallies: Vec<Tally> = (0..chunks)
        .into_par_iter()
        .map(|c| tally(c * CHUNK..((c + 1) * CHUNK).min(count), &make, &check, &show))
        .collect();
    let total = tallies.into_iter().fold(Tally::default(), Tally::merge);
    SuiteReport {
        schema: 1,
        suite: suite.to_string(),
        statement: statement.to_string(),
        mode,
        instances: total.instances,
        rejected: total.rejected,
        violation_count: total.violation_count,
        passed: total.violation_count == 0,
        violations: total.violations,
        seed,
        elapsed_ms: start.elapsed().as_millis() as u64,
    }
}
