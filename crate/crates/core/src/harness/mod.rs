//! Experiment orchestration: boundary traces, wavenumber sweeps, Ψ tables
//! and the validation suite, all emitted as comma-separated text.
//!
//! Numbers are written with 17 significant digits (`{:.16e}`) so every value
//! round-trips exactly. Parallel evaluation never affects output order, so
//! identical configurations give byte-identical output.

pub mod config;
mod sweep;
mod table;
mod trace;
mod validate;

pub use config::{parse_kinds, GeometryKind, HarnessConfig, KEYS, MIN_SAMPLES};
pub use sweep::{run_sweep, ScalingStudy, SweepResult, PROP1_GRID, PROP2_GRID};
pub use table::{dump_psi_table, psi_table_csv, PsiRow};
pub use trace::{run_trace, trace_header, CurrentTrace, TraceRow};
pub use validate::{validate, Check, ValidationReport};

/// Round-trip-exact decimal form of a double.
pub(crate) fn num(x: f64) -> String {
    format!("{x:.16e}")
}
