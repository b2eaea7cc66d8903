//! Random instances, oracle comparison sweeps, property checks and reports.

mod generate;
pub mod properties;
pub mod report;
mod sweep;

use serde::Serialize;

pub use generate::{
    gen_commuting_pair, gen_matrix, gen_pair, gen_scaled_unitary, Family, InstanceSpec, PAIR_RETRIES,
};
pub use properties::{run_properties, PropertyOutcome, PropertyScale};
pub use report::to_json_pretty;
pub use report::{summary_csv, trials_csv};
pub use sweep::{
    chain_failures, compute_oracle, norm_ceiling, run_sweep, summarize, BoundCheck, BoundSummary, Oracle, Summary, SweepConfig,
    TrialRecord, CHAIN_REL_SLACK, SOUNDNESS_REL_SLACK, THREADS_ENV,
};

use crate::error::Result;

/// A full verification run: the sweep over `sweep.families` plus every
/// property check.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub sweep: SweepConfig,
    pub properties: PropertyScale,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifySummary {
    pub passed: bool,
    pub sweep: Summary,
    pub properties: Vec<PropertyOutcome>,
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub records: Vec<TrialRecord>,
    pub summary: VerifySummary,
    /// One row per trial per bound.
    pub csv: String,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.summary.passed
    }
}

pub fn verify(config: &VerifyConfig) -> Result<VerifyReport> {
    let records = run_sweep(&config.sweep)?;
    let sweep = summarize(&records);
    let properties = run_properties(config.sweep.seed, &config.properties)?;
    let passed = sweep.is_clean() && properties.iter().all(PropertyOutcome::passed);
    let csv = trials_csv(&records)?;
    Ok(VerifyReport {
        records,
        summary: VerifySummary {
            passed,
            sweep,
            properties,
        },
        csv,
    })
}
