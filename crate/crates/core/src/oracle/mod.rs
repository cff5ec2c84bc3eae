//! Brute-force and randomized checking of the rank facts the analyzers rely on.

mod properties;
mod report;
mod runner;
pub mod sample;
mod space;
mod suites;

pub use properties::Property;
pub use report::{Mode, SuiteReport, Violation, MAX_RECORDED};
pub use runner::{stream, Verdict};
pub use space::{budget_from_env, Filter, SearchSpace, DEFAULT_BUDGET};
pub use suites::{
    exhaustive_check, lemma_suite, random_check, suite_info, suite_names, SuiteInfo, SuiteOptions, DEFAULT_SEED,
    SUITES,
};
