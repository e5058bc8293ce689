//! Randomized property checks: generators, the suite registry and reports.

mod gen;
mod report;
mod suites;

pub use gen::{gen_dominant_pair, gen_matrix, gen_sigma_id_pair, GenConfig, Sampler, DEFAULT_SEED};
pub use report::{FailureRecord, NamedMatrix, PropertyReport, Verdict, MAX_RECORDED_FAILURES};
pub use suites::{replay, run_suite, selftest, Suite, SuiteContext, TrialOutcome, IDENTITY3_SIDE_LENGTH};
