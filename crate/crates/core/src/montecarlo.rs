//! Monte Carlo estimation of the secrecy outage capacity and the
//! interception probability from exact per-realization SNRs.
//!
//! Each trial draws its channels from [`trial_rng`]`(seed, index)`, and the
//! per-trial results are collected in index order, so estimates do not depend
//! on the number of worker threads.

use rayon::prelude::*;
use serde::Serialize;

use crate::analytic::{CompositeCoefficients, Scheme};
use crate::channel::{draw_channels, link_statistics, trial_rng, LinkStatistics};
use crate::error::{Error, Result};
use crate::params::SystemParams;

/// Minimum number of trials accepted by [`estimate`].
pub const MIN_TRIALS: usize = 100;

/// Half-width, in standard deviations, of the binomial band used for the
/// quantile standard error (68%).
const QUANTILE_BAND_SIGMAS: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub value: f64,
    pub std_error: f64,
    pub trials: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McOutcome {
    pub c_soc: McEstimate,
    pub p0: McEstimate,
}

/// Legitimate and eavesdropper capacities of one channel realization, bit/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealizationRates {
    pub c_d: f64,
    pub c_e: f64,
}

fn capacity(w_hz: f64, snr: f64) -> f64 {
    w_hz * snr.ln_1p() / std::f64::consts::LN_2
}

/// Exact AF SNR at the destination for one realization.
pub fn destination_snr_af(stats: &LinkStatistics, p: &SystemParams) -> f64 {
    let k = CompositeCoefficients::new(p);
    let num = k.a * stats.g_d * stats.g_sr;
    if num == 0.0 {
        return 0.0;
    }
    num / (k.b * stats.g_d + k.c * stats.g_sr + 1.0)
}

/// Exact AF SNR at the eavesdropper for one realization.
pub fn eavesdropper_snr_af(stats: &LinkStatistics, p: &SystemParams) -> f64 {
    let k = CompositeCoefficients::new(p);
    let num = k.d * stats.g_e * stats.g_sr;
    if num == 0.0 {
        return 0.0;
    }
    num / (k.e_coef * stats.g_e + k.c * stats.g_sr + 1.0)
}

pub fn af_realization_rates(stats: &LinkStatistics, p: &SystemParams) -> RealizationRates {
    RealizationRates {
        c_d: capacity(p.w_hz, destination_snr_af(stats, p)),
        c_e: capacity(p.w_hz, eavesdropper_snr_af(stats, p)),
    }
}

/// DF rates. Both receivers are capped by what the relay decoded on the
/// first hop.
pub fn df_realization_rates(stats: &LinkStatistics, p: &SystemParams) -> RealizationRates {
    let first_hop = p.p_s * p.alpha_sr * stats.g_sr;
    RealizationRates {
        c_d: capacity(p.w_hz, first_hop.min(p.p_r * p.alpha_rd * stats.g_d)),
        c_e: capacity(p.w_hz, first_hop.min(p.p_r * p.alpha_re * stats.g_e)),
    }
}

pub fn realization_rates(scheme: Scheme, stats: &LinkStatistics, p: &SystemParams) -> RealizationRates {
    match scheme {
        Scheme::Af => af_realization_rates(stats, p),
        Scheme::Df => df_realization_rates(stats, p),
    }
}

/// Draws `trials` independent realizations and reduces each one to its
/// sufficient statistics, in trial-index order.
pub fn sample_statistics(p: &SystemParams, trials: usize, seed: u64) -> Result<Vec<LinkStatistics>> {
    (0..trials as u64)
        .into_par_iter()
        .map(|t| link_statistics(&draw_channels(p, &mut trial_rng(seed, t))))
        .collect()
}

fn check_sample_size(trials: usize, epsilon: f64) -> Result<()> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be positive".into()));
    }
    if trials < MIN_TRIALS || epsilon * (trials as f64) < 1.0 {
        return Err(Error::InsufficientSamples { trials, epsilon });
    }
    Ok(())
}

/// Simulates `trials` realizations and estimates the secrecy outage capacity
/// (empirical epsilon-quantile of `c_d - c_e`, clamped at zero) and the
/// interception probability (fraction of draws with `c_e >= c_d`).
pub fn estimate(scheme: Scheme, p: &SystemParams, trials: usize, seed: u64) -> Result<McOutcome> {
    let p = p.validate()?;
    check_sample_size(trials, p.epsilon)?;
    let stats = sample_statistics(&p, trials, seed)?;
    estimate_from_statistics(scheme, &p, &stats, seed)
}

/// Same as [`estimate`] but on pre-drawn statistics, so several schemes can
/// share one set of realizations.
pub fn estimate_from_statistics(
    scheme: Scheme,
    p: &SystemParams,
    stats: &[LinkStatistics],
    seed: u64,
) -> Result<McOutcome> {
    let trials = stats.len();
    check_sample_size(trials, p.epsilon)?;

    let mut margins = Vec::with_capacity(trials);
    let mut intercepted = 0usize;
    for s in stats {
        let r = realization_rates(scheme, s, p);
        if r.c_e >= r.c_d {
            intercepted += 1;
        }
        margins.push(r.c_d - r.c_e);
    }
    margins.sort_by(f64::total_cmp);

    let n = trials as f64;
    let k = quantile_rank(p.epsilon, trials);
    let sd_rank = (n * (k as f64 / n) * (1.0 - k as f64 / n)).sqrt() * QUANTILE_BAND_SIGMAS;
    let lo = ((k as f64 - sd_rank).floor() as usize).clamp(1, trials);
    let hi = ((k as f64 + sd_rank).ceil() as usize).clamp(1, trials);
    let clamp0 = |x: f64| x.max(0.0);
    let c_soc = McEstimate {
        value: clamp0(margins[k - 1]),
        std_error: (clamp0(margins[hi - 1]) - clamp0(margins[lo - 1])) / 2.0,
        trials,
        seed,
    };

    let freq = intercepted as f64 / n;
    let p0 = McEstimate {
        value: freq,
        std_error: (freq * (1.0 - freq) / n).sqrt(),
        trials,
        seed,
    };
    Ok(McOutcome { c_soc, p0 })
}

/// One-based rank `max(1, ceil(epsilon * n))`, ignoring floating-point noise
/// when `epsilon * n` is an integer.
fn quantile_rank(epsilon: f64, n: usize) -> usize {
    let x = epsilon * n as f64;
    let r = x.round();
    let k = if (x - r).abs() <= 1e-9 * x.max(1.0) { r } else { x.ceil() };
    (k as usize).clamp(1, n)
}

/// Lower empirical epsilon-quantile: the k-th smallest sample with
/// `k = max(1, ceil(epsilon * n))`. No interpolation.
pub fn empirical_quantile(samples: &[f64], epsilon: f64) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::InvalidArgument("empirical quantile of an empty sample".into()));
    }
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::InvalidArgument(format!("epsilon must be in (0, 1], got {epsilon}")));
    }
    let k = quantile_rank(epsilon, samples.len());
    let mut v = samples.to_vec();
    let (_, kth, _) = v.select_nth_unstable_by(k - 1, f64::total_cmp);
    Ok(*kth)
}
