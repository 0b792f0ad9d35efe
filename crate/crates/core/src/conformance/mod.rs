//! Golden corpus runner and the randomized harness used to test the
//! checker's soundness against the evaluator.

mod corpus;
mod fuzz;
mod generate;
mod shrink;

pub use corpus::{
    load_manifest, run_case, run_corpus, run_source, CaseResult, CorpusCase, CorpusReport,
    Expected, Observed,
};
pub use fuzz::{
    observably_equal, run_soundness_fuzz, FuzzHooks, FuzzReport, Violation, ViolationKind,
};
pub use generate::{generate_program, GeneratorConfig};
pub use shrink::{one_statement_removals, shrink};
