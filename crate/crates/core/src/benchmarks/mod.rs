//! Benchmark models, instance files, an exhaustive oracle and a suite
//! runner.

mod format;
mod generate;
mod oracle;
mod suite;

use thiserror::Error;

pub use format::{parse_instance, write_instance};
pub use generate::{
    generate, match_code, packing_automaton, BenchmarkSpec, Family, AM, NIGHT, OFF, PM,
};
pub use oracle::{oracle_solve, oracle_solve_capped, OracleOutcome, ENUMERATION_CAP};
pub use suite::{median, run_suite, SuiteReport, SuiteRow, SuiteSummary};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid benchmark: {0}")]
    InvalidSpec(String),
    #[error("search space of {space:e} assignments exceeds the enumeration cap {cap:e}")]
    TooLarge { space: f64, cap: f64 },
    #[error("levels disagree on {instance}: {first} vs {second}")]
    Disagreement {
        instance: String,
        first: String,
        second: String,
    },
}
