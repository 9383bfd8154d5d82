//! Differential testing: a reference reducer, unloading of halted
//! configurations, cross-machine comparison, the fusion check, and a seeded
//! fuzzer.

pub mod differential;
pub mod fusion;
pub mod fuzz;
pub mod oracle;
pub mod unload;

pub use differential::{differential, extended_fuel, DiffReport, MismatchKind, Verdict};
pub use fusion::{check_fusion, FusionReport};
pub use fuzz::{fuzz, FuzzConfig, FuzzError, FuzzSummary};
pub use oracle::{curry, oracle_whnf, whnf, Lambda, OracleOutcome};
pub use unload::{unload, UnloadError};
