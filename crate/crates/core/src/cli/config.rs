//! Flat JSON configuration documents.
//!
//! Power keys come in two spellings, `p_s` (linear) or `p_s_db`; giving both
//! is an error. Unknown keys are rejected.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::analytic::Scheme;
use crate::decision::PowerAxis;
use crate::error::{Error, Result};
use crate::params::{from_decibel, SystemParams};

/// Parameter swept along the rows of a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepVariable {
    SourcePowerDb,
    RelayPowerDb,
    AlphaRe,
    NR,
    Rho,
    Epsilon,
}

impl SweepVariable {
    pub fn name(self) -> &'static str {
        match self {
            SweepVariable::SourcePowerDb => "source-power-db",
            SweepVariable::RelayPowerDb => "relay-power-db",
            SweepVariable::AlphaRe => "alpha-re",
            SweepVariable::NR => "n-r",
            SweepVariable::Rho => "rho",
            SweepVariable::Epsilon => "epsilon",
        }
    }

    /// Parameters at one grid value.
    pub fn apply(self, base: &SystemParams, value: f64) -> Result<SystemParams> {
        let mut p = *base;
        match self {
            SweepVariable::SourcePowerDb => p.p_s = from_decibel(value)?,
            SweepVariable::RelayPowerDb => p.p_r = from_decibel(value)?,
            SweepVariable::AlphaRe => p.alpha_re = value,
            SweepVariable::NR => p.n_r = antenna_count(value)?,
            SweepVariable::Rho => p.rho = value,
            SweepVariable::Epsilon => p.epsilon = value,
        }
        Ok(p)
    }

    pub fn power_axis(self) -> Option<PowerAxis> {
        match self {
            SweepVariable::SourcePowerDb => Some(PowerAxis::SourcePower),
            SweepVariable::RelayPowerDb => Some(PowerAxis::RelayPower),
            _ => None,
        }
    }
}

impl fmt::Display for SweepVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepVariable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            SweepVariable::SourcePowerDb,
            SweepVariable::RelayPowerDb,
            SweepVariable::AlphaRe,
            SweepVariable::NR,
            SweepVariable::Rho,
            SweepVariable::Epsilon,
        ]
        .into_iter()
        .find(|v| v.name() == s)
        .ok_or_else(|| Error::config("variable", format!("unknown sweep variable `{s}`")))
    }
}

fn antenna_count(value: f64) -> Result<u32> {
    if value >= 1.0 && value.fract() == 0.0 && value <= f64::from(u32::MAX) {
        Ok(value as u32)
    } else {
        Err(Error::InvalidArgument(format!(
            "antenna count must be a positive integer, got {value}"
        )))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Analytic,
    Montecarlo,
    Both,
}

impl Mode {
    pub fn analytic(self) -> bool {
        matches!(self, Mode::Analytic | Mode::Both)
    }

    pub fn montecarlo(self) -> bool {
        matches!(self, Mode::Montecarlo | Mode::Both)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McSettings {
    pub trials: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub base: SystemParams,
    pub variable: SweepVariable,
    /// Nonempty, strictly increasing.
    pub grid: Vec<f64>,
    pub schemes: Vec<Scheme>,
    pub mode: Mode,
    /// Present iff `mode` includes Monte Carlo.
    pub mc: Option<McSettings>,
}

impl SweepSpec {
    pub fn bracket(&self) -> (f64, f64) {
        (self.grid[0], self.grid[self.grid.len() - 1])
    }
}

/// Values supplied on the command line that take precedence over the file.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub trials: Option<usize>,
}

#[derive(Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_s_db: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_r: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_r_db: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_sr: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_rd: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_re: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_r: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub w_hz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variable: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid_lo: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid_hi: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid_step: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub schemes: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

fn read_raw(text: &str) -> Result<RawConfig> {
    serde_json::from_str(text).map_err(|e| {
        let message = e.to_string();
        // serde names the offending key inside backticks for unknown fields.
        let path = message
            .strip_prefix("unknown field `")
            .and_then(|rest| rest.split('`').next())
            .unwrap_or("$")
            .to_string();
        Error::config(path, message)
    })
}

fn power(linear: Option<f64>, db: Option<f64>, name: &str, default: f64) -> Result<f64> {
    match (linear, db) {
        (Some(_), Some(_)) => Err(Error::config(
            name,
            format!("give either `{name}` or `{name}_db`, not both"),
        )),
        (Some(v), None) => Ok(v),
        (None, Some(db)) => {
            from_decibel(db).map_err(|e| Error::config(format!("{name}_db"), e.to_string()))
        }
        (None, None) => Ok(default),
    }
}

impl RawConfig {
    fn params(&self) -> Result<SystemParams> {
        let d = SystemParams::default();
        let p = SystemParams {
            p_s: power(self.p_s, self.p_s_db, "p_s", d.p_s)?,
            p_r: power(self.p_r, self.p_r_db, "p_r", d.p_r)?,
            alpha_sr: self.alpha_sr.unwrap_or(d.alpha_sr),
            alpha_rd: self.alpha_rd.unwrap_or(d.alpha_rd),
            alpha_re: self.alpha_re.unwrap_or(d.alpha_re),
            rho: self.rho.unwrap_or(d.rho),
            n_r: self.n_r.unwrap_or(d.n_r),
            w_hz: self.w_hz.unwrap_or(d.w_hz),
            epsilon: self.epsilon.unwrap_or(d.epsilon),
        };
        p.validate().map_err(|e| match e {
            Error::InvalidParams(v) => Error::config(
                v.iter().map(|f| f.field).collect::<Vec<_>>().join(","),
                v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "),
            ),
            other => other,
        })
    }

    fn grid(&self) -> Result<Vec<f64>> {
        let range = (self.grid_lo, self.grid_hi, self.grid_step);
        let values = match (&self.grid, range) {
            (Some(_), (None, None, None)) => self.grid.clone().unwrap_or_default(),
            (Some(_), _) => {
                return Err(Error::config(
                    "grid",
                    "give either an explicit `grid` list or `grid_lo`/`grid_hi`/`grid_step`",
                ))
            }
            (None, (Some(lo), Some(hi), Some(step))) => {
                if !(lo.is_finite() && hi.is_finite() && step.is_finite() && step > 0.0) {
                    return Err(Error::config("grid", "bounds must be finite and step positive"));
                }
                if hi < lo {
                    return Err(Error::config("grid", format!("grid_hi {hi} is below grid_lo {lo}")));
                }
                let n = ((hi - lo) / step + 1e-9).floor() as usize;
                (0..=n).map(|i| lo + i as f64 * step).collect()
            }
            (None, (None, None, None)) => return Err(Error::config("grid", "missing grid")),
            (None, _) => {
                return Err(Error::config(
                    "grid",
                    "`grid_lo`, `grid_hi` and `grid_step` must be given together",
                ))
            }
        };
        if values.is_empty() {
            return Err(Error::config("grid", "grid is empty"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::config("grid", "grid values must be finite"));
        }
        if values.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::config("grid", "grid must be strictly increasing"));
        }
        Ok(values)
    }
}

/// Reads only the link parameters of a document. Sweep keys are accepted and
/// ignored so one file can drive every subcommand.
pub fn parse_params(text: &str) -> Result<SystemParams> {
    read_raw(text)?.params()
}

pub fn parse_config(text: &str) -> Result<SweepSpec> {
    parse_config_with(text, Overrides::default())
}

pub fn parse_config_with(text: &str, overrides: Overrides) -> Result<SweepSpec> {
    spec_from_raw(read_raw(text)?, overrides)
}

pub fn spec_from_raw(raw: RawConfig, overrides: Overrides) -> Result<SweepSpec> {
    let base = raw.params()?;
    let variable: SweepVariable = raw
        .variable
        .as_deref()
        .ok_or_else(|| Error::config("variable", "missing sweep variable"))?
        .parse()?;
    let grid = raw.grid()?;
    for &v in &grid {
        variable
            .apply(&base, v)
            .and_then(SystemParams::validate)
            .map_err(|e| Error::config("grid", format!("value {v}: {e}")))?;
    }

    let schemes = match &raw.schemes {
        None => Scheme::ALL.to_vec(),
        Some(list) => {
            let mut out = Vec::new();
            for s in list {
                let scheme: Scheme = s.parse().map_err(|e: Error| Error::config("schemes", e.to_string()))?;
                if out.contains(&scheme) {
                    return Err(Error::config("schemes", format!("duplicate scheme {scheme}")));
                }
                out.push(scheme);
            }
            if out.is_empty() {
                return Err(Error::config("schemes", "at least one scheme is required"));
            }
            out.sort();
            out
        }
    };

    let mode = match raw.mode.as_deref() {
        None | Some("analytic") => Mode::Analytic,
        Some("montecarlo") => Mode::Montecarlo,
        Some("both") => Mode::Both,
        Some(other) => {
            return Err(Error::config(
                "mode",
                format!("unknown mode `{other}` (expected analytic, montecarlo or both)"),
            ))
        }
    };

    let mc = if mode.montecarlo() {
        let seed = overrides
            .seed
            .or(raw.seed)
            .ok_or_else(|| Error::config("seed", "seed is required when mode includes montecarlo"))?;
        let trials = overrides
            .trials
            .or(raw.trials)
            .ok_or_else(|| Error::config("trials", "trials is required when mode includes montecarlo"))?;
        if trials == 0 {
            return Err(Error::config("trials", "trials must be positive"));
        }
        Some(McSettings { trials, seed })
    } else {
        if raw.seed.is_some() {
            return Err(Error::config("seed", "seed is only valid when mode includes montecarlo"));
        }
        if raw.trials.is_some() {
            return Err(Error::config("trials", "trials is only valid when mode includes montecarlo"));
        }
        None
    };

    Ok(SweepSpec {
        base,
        variable,
        grid,
        schemes,
        mode,
        mc,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_of(e: Error) -> String {
        match e {
            Error::Config { path, .. } => path,
            other => panic!("expected config error, got {other}"),
        }
    }

    #[test]
    fn minimal_document_uses_defaults() {
        let spec = parse_config(r#"{"variable": "alpha-re", "grid": [1.0]}"#).unwrap();
        assert_eq!(spec.base, SystemParams::default());
        assert_eq!(spec.base.n_r, 100);
        assert_eq!(spec.base.rho, 0.9);
        assert_eq!(spec.base.w_hz, 1e4);
        assert_eq!(spec.schemes, vec![Scheme::Af, Scheme::Df]);
        assert_eq!(spec.mode, Mode::Analytic);
        assert!(spec.mc.is_none());
    }

    #[test]
    fn decibel_keys_converted() {
        let spec = parse_config(
            r#"{"p_s_db": 10, "p_r_db": 30, "variable": "epsilon", "grid": [0.01, 0.05]}"#,
        )
        .unwrap();
        assert!((spec.base.p_s - 10.0).abs() < 1e-12);
        assert!((spec.base.p_r - 1000.0).abs() < 1e-9);
    }

    #[test]
    fn range_grid_expands() {
        let spec = parse_config(
            r#"{"variable": "relay-power-db", "grid_lo": -10, "grid_hi": 50, "grid_step": 1}"#,
        )
        .unwrap();
        assert_eq!(spec.grid.len(), 61);
        assert_eq!(spec.bracket(), (-10.0, 50.0));
    }

    #[test]
    fn inverted_grid_names_grid() {
        let e = parse_config(r#"{"variable": "rho", "grid_lo": 0.9, "grid_hi": 0.1, "grid_step": 0.1}"#)
            .unwrap_err();
        assert_eq!(path_of(e), "grid");
        let e = parse_config(r#"{"variable": "rho", "grid": [0.5, 0.4]}"#).unwrap_err();
        assert_eq!(path_of(e), "grid");
    }

    #[test]
    fn montecarlo_needs_seed() {
        let e = parse_config(r#"{"variable": "rho", "grid": [0.5], "mode": "montecarlo", "trials": 1000}"#)
            .unwrap_err();
        assert_eq!(path_of(e), "seed");
        let spec = parse_config_with(
            r#"{"variable": "rho", "grid": [0.5], "mode": "montecarlo", "trials": 1000}"#,
            Overrides { seed: Some(5), trials: None },
        )
        .unwrap();
        assert_eq!(spec.mc, Some(McSettings { trials: 1000, seed: 5 }));
    }

    #[test]
    fn seed_without_montecarlo_rejected() {
        let e = parse_config(r#"{"variable": "rho", "grid": [0.5], "seed": 3}"#).unwrap_err();
        assert_eq!(path_of(e), "seed");
    }

    #[test]
    fn unknown_key_named() {
        let e = parse_config(r#"{"variable": "rho", "grid": [0.5], "bandwidth": 3}"#).unwrap_err();
        assert_eq!(path_of(e), "bandwidth");
    }

    #[test]
    fn malformed_document() {
        let e = parse_config("{not json").unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn invalid_parameter_named() {
        let e = parse_config(r#"{"variable": "alpha-re", "grid": [1], "rho": 1.5}"#).unwrap_err();
        assert_eq!(path_of(e), "rho");
        let e = parse_config(r#"{"variable": "epsilon", "grid": [0.0, 0.5]}"#).unwrap_err();
        assert_eq!(path_of(e), "grid");
        let e = parse_config(r#"{"variable": "n-r", "grid": [10, 10.5]}"#).unwrap_err();
        assert_eq!(path_of(e), "grid");
        let e = parse_config(r#"{"variable": "rho", "grid": [0.5], "p_s": 1, "p_s_db": 0}"#).unwrap_err();
        assert_eq!(path_of(e), "p_s");
    }

    #[test]
    fn schemes_parsed_and_checked() {
        let spec = parse_config(r#"{"variable": "rho", "grid": [0.5], "schemes": ["df"]}"#).unwrap();
        assert_eq!(spec.schemes, vec![Scheme::Df]);
        let e = parse_config(r#"{"variable": "rho", "grid": [0.5], "schemes": ["AF", "AF"]}"#).unwrap_err();
        assert_eq!(path_of(e), "schemes");
        let e = parse_config(r#"{"variable": "rho", "grid": [0.5], "schemes": []}"#).unwrap_err();
        assert_eq!(path_of(e), "schemes");
    }

    #[test]
    fn params_only_document() {
        let p = parse_params(r#"{"p_s_db": 0, "variable": "rho", "grid": [0.5]}"#).unwrap();
        assert_eq!(p.p_s, 1.0);
        let p = parse_params("{}").unwrap();
        assert_eq!(p, SystemParams::default());
    }
}
