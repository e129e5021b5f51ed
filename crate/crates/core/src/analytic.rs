//! Closed-form secrecy metrics under channel hardening.
//!
//! All capacities are in bit/s and use the already-halved bandwidth
//! `w_hz`. Secrecy outage capacities are clamped at zero.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::SystemParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Scheme {
    #[serde(rename = "AF")]
    Af,
    #[serde(rename = "DF")]
    Df,
}

impl Scheme {
    pub const ALL: [Scheme; 2] = [Scheme::Af, Scheme::Df];

    /// Lowercase column prefix used in reports.
    pub fn prefix(self) -> &'static str {
        match self {
            Scheme::Af => "af",
            Scheme::Df => "df",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::Af => "AF",
            Scheme::Df => "DF",
        })
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "AF" => Ok(Scheme::Af),
            "DF" => Ok(Scheme::Df),
            _ => Err(Error::InvalidArgument(format!("unknown scheme `{s}` (expected AF or DF)"))),
        }
    }
}

/// Power/path-loss products that appear in the AF SNR expressions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompositeCoefficients {
    /// `P_S P_R a_SR a_RD`
    pub a: f64,
    /// `P_R a_RD`
    pub b: f64,
    /// `P_S a_SR`
    pub c: f64,
    /// `P_S P_R a_SR a_RE`
    pub d: f64,
    /// `P_R a_RE`
    pub e_coef: f64,
}

impl CompositeCoefficients {
    pub fn new(p: &SystemParams) -> Self {
        let b = p.p_r * p.alpha_rd;
        let c = p.p_s * p.alpha_sr;
        let e_coef = p.p_r * p.alpha_re;
        CompositeCoefficients {
            a: c * b,
            b,
            c,
            d: c * e_coef,
            e_coef,
        }
    }
}

/// Interception probability together with how it was obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Interception {
    /// Closed-form value, clamped to [0, 1].
    Closed(f64),
    /// A transmitter is silent so no positive secrecy rate exists; reported as 1.
    NoSecrecy,
    /// The relay is silent so there is nothing to intercept; reported as 0.
    NothingSent,
}

impl Interception {
    pub fn probability(self) -> f64 {
        match self {
            Interception::Closed(p) => p,
            Interception::NoSecrecy => 1.0,
            Interception::NothingSent => 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SchemeReport {
    pub scheme: Scheme,
    /// Legitimate capacity, bit/s.
    pub c_d: f64,
    /// Secrecy outage capacity, bit/s.
    pub c_soc: f64,
    /// Interception probability.
    pub p0: f64,
}

fn capacity(w_hz: f64, snr: f64) -> f64 {
    w_hz * snr.log2_1p()
}

trait Log2OnePlus {
    fn log2_1p(self) -> f64;
}

impl Log2OnePlus for f64 {
    fn log2_1p(self) -> f64 {
        self.ln_1p() / std::f64::consts::LN_2
    }
}

/// Hardened end-to-end AF SNR at the destination.
pub fn hardened_snr_af(p: &SystemParams) -> f64 {
    let k = CompositeCoefficients::new(p);
    let n = p.n();
    k.a * p.rho * n * n / (k.b * p.rho * n + k.c * n + 1.0)
}

/// Hardened DF SNR: the weaker of the two hops.
pub fn hardened_snr_df(p: &SystemParams) -> f64 {
    let n = p.n();
    (p.p_s * p.alpha_sr * n).min(p.p_r * p.alpha_rd * p.rho * n)
}

pub fn legit_capacity_af(p: &SystemParams) -> f64 {
    capacity(p.w_hz, hardened_snr_af(p))
}

/// Eavesdropper SNR level exceeded with probability epsilon under AF.
fn eavesdropper_level_af(p: &SystemParams) -> f64 {
    let k = CompositeCoefficients::new(p);
    let n = p.n();
    let ln_eps = p.epsilon.ln();
    let level = k.d * n * ln_eps / (k.e_coef * ln_eps - k.c * n - 1.0);
    // ln(eps) <= 0 makes numerator <= 0 and denominator <= -1.
    assert!(
        level >= 0.0,
        "negative eavesdropper level {level}; parameters outside their valid domain: {p:?}"
    );
    level
}

/// `W log2(1 + snr_d) - W log2(1 + snr_e)` as one logarithm, so the result
/// stays accurate when the two rates nearly cancel.
fn rate_gap(w_hz: f64, snr_d: f64, snr_e: f64) -> f64 {
    capacity(w_hz, (snr_d - snr_e) / (1.0 + snr_e))
}

pub fn secrecy_outage_capacity_af(p: &SystemParams) -> f64 {
    rate_gap(p.w_hz, hardened_snr_af(p), eavesdropper_level_af(p)).max(0.0)
}

/// AF interception probability, the epsilon at which the AF secrecy outage
/// capacity reaches zero.
pub fn interception_probability_af(p: &SystemParams) -> Interception {
    if p.p_s == 0.0 || p.p_r == 0.0 {
        return Interception::NoSecrecy;
    }
    let k = CompositeCoefficients::new(p);
    let n = p.n();
    let snr_d = hardened_snr_af(p);
    let denom = k.b * p.rho * n + k.c * n + 1.0;
    // d*N - e*snr_d, rewritten as e * (c*N - snr_d) with
    // c*N - snr_d = c*N*(c*N + 1)/denom, which never cancels catastrophically.
    let margin = k.e_coef * (k.c * n * (k.c * n + 1.0) / denom);
    let exponent = -(k.c * n + 1.0) * snr_d / margin;
    Interception::Closed(exponent.exp().clamp(0.0, 1.0))
}

pub fn legit_capacity_df(p: &SystemParams) -> f64 {
    capacity(p.w_hz, hardened_snr_df(p))
}

pub fn secrecy_outage_capacity_df(p: &SystemParams) -> f64 {
    let eve = -p.p_r * p.alpha_re * p.epsilon.ln();
    rate_gap(p.w_hz, hardened_snr_df(p), eve).max(0.0)
}

pub fn interception_probability_df(p: &SystemParams) -> Interception {
    if p.p_r == 0.0 {
        return Interception::NothingSent;
    }
    let exponent = -hardened_snr_df(p) / (p.p_r * p.alpha_re);
    Interception::Closed(exponent.exp().clamp(0.0, 1.0))
}

pub fn legit_capacity(p: &SystemParams, scheme: Scheme) -> f64 {
    match scheme {
        Scheme::Af => legit_capacity_af(p),
        Scheme::Df => legit_capacity_df(p),
    }
}

pub fn secrecy_outage_capacity(p: &SystemParams, scheme: Scheme) -> f64 {
    match scheme {
        Scheme::Af => secrecy_outage_capacity_af(p),
        Scheme::Df => secrecy_outage_capacity_df(p),
    }
}

pub fn interception_probability(p: &SystemParams, scheme: Scheme) -> Interception {
    match scheme {
        Scheme::Af => interception_probability_af(p),
        Scheme::Df => interception_probability_df(p),
    }
}

pub fn scheme_report(p: &SystemParams, scheme: Scheme) -> SchemeReport {
    SchemeReport {
        scheme,
        c_d: legit_capacity(p, scheme),
        c_soc: secrecy_outage_capacity(p, scheme),
        p0: interception_probability(p, scheme).probability(),
    }
}

/// CDF of the hardened AF eavesdropper SNR.
///
/// Defined for `0 <= x < d*N/e`; the SNR can never reach the upper end.
pub fn eavesdropper_cdf_af(x: f64, p: &SystemParams) -> Result<f64> {
    let k = CompositeCoefficients::new(p);
    let n = p.n();
    if !(k.d > 0.0 && k.e_coef > 0.0) {
        return Err(Error::Domain(
            "eavesdropper SNR is identically zero when either transmit power is zero".into(),
        ));
    }
    let upper = k.d * n / k.e_coef;
    if !(x >= 0.0 && x < upper) {
        return Err(Error::Domain(format!(
            "eavesdropper CDF argument {x} outside [0, {upper})"
        )));
    }
    let rate = (k.c * n + 1.0) * x / (k.d * n - k.e_coef * x);
    Ok(-(-rate).exp_m1())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    LargeSourcePower,
    LargeRelayPower,
}

impl FromStr for Regime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "large-source-power" => Ok(Regime::LargeSourcePower),
            "large-relay-power" => Ok(Regime::LargeRelayPower),
            _ => Err(Error::InvalidArgument(format!(
                "unknown regime `{s}` (expected large-source-power or large-relay-power)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoticLimit {
    pub c_soc_limit: f64,
    pub p0_limit: f64,
}

/// High transmit power limits of the secrecy outage capacity and the
/// interception probability.
pub fn asymptotic_limit(p: &SystemParams, regime: Regime, scheme: Scheme) -> Result<AsymptoticLimit> {
    let n = p.n();
    match regime {
        Regime::LargeSourcePower => {
            if p.epsilon >= 1.0 {
                return Err(Error::Domain(
                    "large-source-power limit is undefined at epsilon = 1 (ln epsilon = 0)".into(),
                ));
            }
            let ln_eps = p.epsilon.ln();
            let p0_limit = (-p.alpha_rd * p.rho * n / p.alpha_re).exp();
            let ratio = match scheme {
                Scheme::Af => -p.alpha_rd * p.rho * n / (p.alpha_re * ln_eps),
                Scheme::Df => {
                    (1.0 + p.p_r * p.alpha_rd * p.rho * n) / (1.0 - p.p_r * p.alpha_re * ln_eps)
                }
            };
            Ok(AsymptoticLimit {
                c_soc_limit: p.w_hz * ratio.log2(),
                p0_limit,
            })
        }
        Regime::LargeRelayPower => Ok(AsymptoticLimit {
            c_soc_limit: 0.0,
            p0_limit: match scheme {
                Scheme::Af => 0.0,
                Scheme::Df => 1.0,
            },
        }),
    }
}
