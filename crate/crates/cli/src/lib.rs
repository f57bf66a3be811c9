//! Conformance tooling for the `tapp` library: a JSON case format, a
//! generator for the 28 test categories, an engine-versus-oracle checker and
//! the suite runner behind the `tapp` binary.

pub mod case;
pub mod check;
pub mod gen;
pub mod run;
pub mod suite;

pub use case::{Case, CaseSpec};
pub use check::{check_case, run_engine, run_oracle, CheckOutcome};
pub use gen::generate;
pub use suite::{run_suite, SuiteReport};
