//! Built-in sweeps reproducing the published figure setups. Each preset is
//! an ordinary config document, so `secrelay preset <name>` prints something
//! that `sweep --config` accepts.

use serde_json::{json, Value};

use super::config::{parse_config_with, Overrides, SweepSpec};
use crate::error::{Error, Result};

pub const PRESET_NAMES: [&str; 7] = ["fig2", "fig3", "fig3b", "fig4", "fig5", "fig6", "fig7"];

pub const DEFAULT_TRIALS: usize = 10_000;
pub const DEFAULT_SEED: u64 = 1;

/// One run of a preset. Multi-run presets differ in a single fixed parameter.
#[derive(Debug, Clone)]
pub struct PresetRun {
    /// Empty for single-run presets.
    pub label: String,
    pub document: Value,
}

impl PresetRun {
    pub fn spec(&self, overrides: Overrides) -> Result<SweepSpec> {
        parse_config_with(&self.document.to_string(), overrides)
    }
}

fn merge(base: &Value, extra: Value) -> Value {
    let mut out = base.clone();
    if let (Some(o), Value::Object(e)) = (out.as_object_mut(), extra) {
        o.extend(e);
    }
    out
}

pub fn preset(name: &str) -> Result<Vec<PresetRun>> {
    let mc = json!({"mode": "both", "trials": DEFAULT_TRIALS, "seed": DEFAULT_SEED});
    let alpha_sweep = json!({"variable": "alpha-re", "grid_lo": 0.1, "grid_hi": 3.0, "grid_step": 0.1});
    let single = |doc: Value| {
        vec![PresetRun {
            label: String::new(),
            document: merge(&mc, doc),
        }]
    };
    let runs = match name {
        "fig2" | "fig3" => {
            let scheme = if name == "fig2" { "AF" } else { "DF" };
            let base = merge(
                &merge(&mc, alpha_sweep),
                json!({"p_s_db": 20, "p_r_db": 20, "schemes": [scheme]}),
            );
            [0.001, 0.01, 0.1]
                .into_iter()
                .map(|eps| PresetRun {
                    label: format!("eps{eps}"),
                    document: merge(&base, json!({"epsilon": eps})),
                })
                .collect()
        }
        "fig3b" => {
            let base = merge(
                &merge(&mc, alpha_sweep),
                json!({"p_s_db": 10, "p_r_db": 10, "epsilon": 0.01}),
            );
            [100, 200]
                .into_iter()
                .map(|n_r| PresetRun {
                    label: format!("nr{n_r}"),
                    document: merge(&base, json!({"n_r": n_r})),
                })
                .collect()
        }
        "fig4" | "fig6" => single(json!({
            "variable": "source-power-db", "grid_lo": -10, "grid_hi": 40, "grid_step": 1,
            "p_r_db": 10, "alpha_re": 1, "epsilon": 0.05
        })),
        "fig5" | "fig7" => single(json!({
            "variable": "relay-power-db", "grid_lo": -10, "grid_hi": 50, "grid_step": 1,
            "p_s_db": 10, "alpha_re": 1, "epsilon": 0.05
        })),
        _ => {
            return Err(Error::InvalidArgument(format!(
                "unknown preset `{name}` (available: {})",
                PRESET_NAMES.join(", ")
            )))
        }
    };
    Ok(runs)
}
