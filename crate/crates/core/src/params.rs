//! Link parameters shared by the analytic, simulation and decision layers.
//!
//! Powers are linear and normalized to unit noise power at every receiver.
//! Decibels only appear at the configuration boundary.

use serde::{Deserialize, Serialize};

use crate::error::{Error, FieldViolation, Result};

/// Scalar description of a source → relay → destination link with a single
/// passive eavesdropper listening to the relay.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    /// Source transmit power (linear).
    pub p_s: f64,
    /// Relay transmit power (linear).
    pub p_r: f64,
    pub alpha_sr: f64,
    pub alpha_rd: f64,
    pub alpha_re: f64,
    /// Correlation between the estimated and true relay → destination channel.
    pub rho: f64,
    /// Number of relay antennas.
    pub n_r: u32,
    /// Effective bandwidth in Hz. Already accounts for the two-slot half-duplex
    /// split, so capacities are `w_hz * log2(1 + snr)` with no extra factor.
    pub w_hz: f64,
    /// Target secrecy outage probability.
    pub epsilon: f64,
}

impl Default for SystemParams {
    /// 100 relay antennas, rho = 0.9, W = 10 kHz, unit path losses, both
    /// transmitters at 20 dB and epsilon = 0.01.
    fn default() -> Self {
        SystemParams {
            p_s: 100.0,
            p_r: 100.0,
            alpha_sr: 1.0,
            alpha_rd: 1.0,
            alpha_re: 1.0,
            rho: 0.9,
            n_r: 100,
            w_hz: 1.0e4,
            epsilon: 0.01,
        }
    }
}

/// Converts a power ratio in dB to linear scale.
pub fn from_decibel(db: f64) -> Result<f64> {
    if !db.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "decibel value must be finite, got {db}"
        )));
    }
    Ok(10f64.powf(db / 10.0))
}

pub fn to_decibel(linear: f64) -> f64 {
    10.0 * linear.log10()
}

impl SystemParams {
    /// Returns `self` unchanged when every invariant holds, otherwise an
    /// [`Error::InvalidParams`] listing each offending field.
    pub fn validate(self) -> Result<Self> {
        let violations = self.violations();
        if violations.is_empty() {
            Ok(self)
        } else {
            Err(Error::InvalidParams(violations))
        }
    }

    pub fn violations(&self) -> Vec<FieldViolation> {
        let mut out = Vec::new();
        let mut check = |ok: bool, field: &'static str, rule: &str, value: f64| {
            if !ok {
                out.push(FieldViolation {
                    field,
                    message: format!("must be {rule}, got {value}"),
                });
            }
        };
        check(is_finite_nonneg(self.p_s), "p_s", "finite and >= 0", self.p_s);
        check(is_finite_nonneg(self.p_r), "p_r", "finite and >= 0", self.p_r);
        for (field, v) in [
            ("alpha_sr", self.alpha_sr),
            ("alpha_rd", self.alpha_rd),
            ("alpha_re", self.alpha_re),
        ] {
            check(v.is_finite() && v > 0.0, field, "finite and > 0", v);
        }
        check(
            (0.0..=1.0).contains(&self.rho),
            "rho",
            "in [0, 1]",
            self.rho,
        );
        check(self.n_r >= 1, "n_r", ">= 1", self.n_r as f64);
        check(
            self.w_hz.is_finite() && self.w_hz > 0.0,
            "w_hz",
            "finite and > 0",
            self.w_hz,
        );
        check(
            self.epsilon > 0.0 && self.epsilon <= 1.0,
            "epsilon",
            "in (0, 1]",
            self.epsilon,
        );
        out
    }

    pub fn n(&self) -> f64 {
        f64::from(self.n_r)
    }
}

fn is_finite_nonneg(x: f64) -> bool {
    x.is_finite() && x >= 0.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn decibel_examples() {
        assert_eq!(from_decibel(0.0).unwrap(), 1.0);
        assert!((from_decibel(20.0).unwrap() - 100.0).abs() < 1e-12);
        assert!((from_decibel(10.0).unwrap() - 10.0).abs() < 1e-12);
        assert!(from_decibel(f64::NAN).is_err());
        assert!(from_decibel(f64::INFINITY).is_err());
    }

    #[test]
    fn defaults_accepted() {
        let p = SystemParams::default();
        assert_eq!(p.n_r, 100);
        assert_eq!(p.rho, 0.9);
        assert_eq!(p.w_hz, 1.0e4);
        assert_eq!(p.validate().unwrap(), p);
    }

    #[test]
    fn rho_out_of_range_names_rho() {
        let err = SystemParams {
            rho: 1.2,
            ..Default::default()
        }
        .validate()
        .unwrap_err();
        assert_eq!(err.fields(), vec!["rho"]);
    }

    #[test]
    fn epsilon_zero_rejected_one_accepted() {
        let err = SystemParams {
            epsilon: 0.0,
            ..Default::default()
        }
        .validate()
        .unwrap_err();
        assert_eq!(err.fields(), vec!["epsilon"]);

        SystemParams {
            epsilon: 1.0,
            ..Default::default()
        }
        .validate()
        .unwrap();
    }

    #[test]
    fn every_violation_reported() {
        let err = SystemParams {
            p_s: -1.0,
            alpha_re: 0.0,
            n_r: 0,
            w_hz: f64::NAN,
            ..Default::default()
        }
        .validate()
        .unwrap_err();
        assert_eq!(err.fields(), vec!["p_s", "alpha_re", "n_r", "w_hz"]);
    }

    proptest! {
        #[test]
        fn decibel_is_multiplicative(x in -100.0f64..100.0, y in -100.0f64..100.0) {
            let lhs = from_decibel(x).unwrap() * from_decibel(y).unwrap();
            let rhs = from_decibel(x + y).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs);
        }

        #[test]
        fn decibel_strictly_increasing(x in -100.0f64..100.0, dx in 1e-6f64..10.0) {
            prop_assert!(from_decibel(x + dx).unwrap() > from_decibel(x).unwrap());
        }

        #[test]
        fn validate_is_idempotent(
            p_s in -1.0f64..1e3,
            rho in -0.5f64..1.5,
            epsilon in -0.5f64..1.5,
            n_r in 0u32..300,
        ) {
            let raw = SystemParams { p_s, rho, epsilon, n_r, ..Default::default() };
            match raw.validate() {
                Ok(p) => prop_assert_eq!(p.validate().unwrap(), p),
                Err(e) => {
                    let again = raw.validate().unwrap_err();
                    prop_assert_eq!(e.fields(), again.fields());
                }
            }
        }
    }
}
