//! Reports, verification suites and exports behind the command line.

pub mod analyze;
pub mod config;
pub mod export;
pub mod report;
pub mod suites;

pub use analyze::{analyze, analyze_immersion, analyze_surface, sample_surface, NodeSample};
pub use config::Config;
pub use export::{export, ExportFormat, Field};
pub use report::{Bound, Check, Observed, Provenance, Summary, SurfaceReport, SCHEMA_VERSION};
pub use suites::{run_suite, Suite};
