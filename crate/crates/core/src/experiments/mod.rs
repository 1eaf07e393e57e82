//! The two studies: how well the simplified utility tracks the detailed one,
//! and how the four assignment strategies compare.

mod benchmark;
mod correlation;
pub mod stats;

pub use benchmark::{
    benchmark, write_results_csv, BenchmarkConfig, BenchmarkReport, BenchmarkRow, CellSummary,
    Strategy, RESULTS_HEADER,
};
pub use correlation::{
    correlation_study, write_correlation_csv, write_scatter_csv, CorrelationConfig,
    CorrelationRecord, CorrelationStudy, ModeSummary, ScatterPoint, CORRELATION_HEADER,
};

use crate::domain::{InterferenceMatrix, Scenario};
use crate::error::{Error, Result};

/// The matrix to score `s` with: `custom` when given, otherwise the default
/// spectral-mask matrix for the scenario's spectrum size.
pub fn matrix_for(s: &Scenario, custom: Option<&InterferenceMatrix>) -> Result<InterferenceMatrix> {
    match custom {
        Some(w) if w.k() != s.spectrum_size as usize => Err(Error::Validation(format!(
            "matrix has {} channels, scenario uses {}",
            w.k(),
            s.spectrum_size
        ))),
        Some(w) => Ok(w.clone()),
        None => InterferenceMatrix::default_for(s.spectrum_size as usize),
    }
}
