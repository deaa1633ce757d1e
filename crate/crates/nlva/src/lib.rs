//! File formats, the check suites and the command-line front end for
//! `nlva-core`.

pub mod construct;
pub mod error;
pub mod format;
pub mod report;
pub mod suite;

pub use error::{CliError, CliResult};
pub use format::AlgebraFile;
pub use report::SuiteReport;
pub use suite::{run_suite, QChoice, Suite, SuiteOptions};
