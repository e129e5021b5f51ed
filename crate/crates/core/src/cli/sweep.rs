use serde::Serialize;

use super::config::{SweepSpec, SweepVariable};
use crate::analytic::{interception_probability, legit_capacity, secrecy_outage_capacity, Scheme};
use crate::error::{Error, Result};
use crate::montecarlo::{estimate_from_statistics, sample_statistics};
use crate::params::SystemParams;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnalyticColumns {
    pub c_soc_analytic: f64,
    pub p0_analytic: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McColumns {
    pub c_soc_mc: f64,
    pub c_soc_mc_stderr: f64,
    pub p0_mc: f64,
    pub p0_mc_stderr: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SchemeColumns {
    pub scheme: Scheme,
    pub c_d: f64,
    pub analytic: Option<AnalyticColumns>,
    pub mc: Option<McColumns>,
}

/// One grid point of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    /// Value of the swept variable.
    pub value: f64,
    pub schemes: Vec<SchemeColumns>,
}

impl SweepRow {
    pub fn scheme(&self, scheme: Scheme) -> Option<&SchemeColumns> {
        self.schemes.iter().find(|c| c.scheme == scheme)
    }
}

/// Seed of the Monte Carlo stream for grid row `index`.
pub fn row_seed(seed: u64, index: usize) -> u64 {
    seed ^ index as u64
}

fn row_error(index: usize, variable: SweepVariable, value: f64) -> impl FnOnce(Error) -> Error {
    move |e| Error::Row {
        index,
        variable: variable.name(),
        value,
        source: Box::new(e),
    }
}

fn evaluate_row(spec: &SweepSpec, index: usize, params: &SystemParams, value: f64) -> Result<SweepRow> {
    let stats = match spec.mc {
        Some(mc) => Some(sample_statistics(params, mc.trials, row_seed(mc.seed, index))?),
        None => None,
    };
    let mut schemes = Vec::with_capacity(spec.schemes.len());
    for &scheme in &spec.schemes {
        let analytic = spec.mode.analytic().then(|| AnalyticColumns {
            c_soc_analytic: secrecy_outage_capacity(params, scheme),
            p0_analytic: interception_probability(params, scheme).probability(),
        });
        let mc = match (&stats, spec.mc) {
            (Some(stats), Some(settings)) => {
                let out = estimate_from_statistics(scheme, params, stats, row_seed(settings.seed, index))?;
                Some(McColumns {
                    c_soc_mc: out.c_soc.value,
                    c_soc_mc_stderr: out.c_soc.std_error,
                    p0_mc: out.p0.value,
                    p0_mc_stderr: out.p0.std_error,
                })
            }
            _ => None,
        };
        schemes.push(SchemeColumns {
            scheme,
            c_d: legit_capacity(params, scheme),
            analytic,
            mc,
        });
    }
    Ok(SweepRow { value, schemes })
}

/// Evaluates every grid point in order. All schemes of one row share the
/// same channel realizations.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.grid
        .iter()
        .enumerate()
        .map(|(index, &value)| {
            let wrap = row_error(index, spec.variable, value);
            spec.variable
                .apply(&spec.base, value)
                .and_then(SystemParams::validate)
                .and_then(|p| evaluate_row(spec, index, &p, value))
                .map_err(wrap)
        })
        .collect()
}
