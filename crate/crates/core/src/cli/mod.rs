//! Configuration ingestion, sweep execution and report emission for the
//! `secrelay` command-line tool.

pub mod config;
pub mod presets;
pub mod report;
pub mod sweep;

pub use config::{
    parse_config, parse_config_with, parse_params, McSettings, Mode, Overrides, SweepSpec,
    SweepVariable,
};
pub use presets::{preset, PresetRun, PRESET_NAMES};
pub use report::{emit_report, format_sig9, render_report, ReportFormat};
pub use sweep::{run_sweep, SchemeColumns, SweepRow};

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "SECRELAY_THREADS";
