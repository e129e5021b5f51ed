//! Random channel realizations and their scalar sufficient statistics.
//!
//! Every small-scale fading vector has i.i.d. circularly-symmetric complex
//! Gaussian entries with unit power. The true relay → destination channel is
//! a rho-weighted mix of the relay's estimate and an independent error vector.
//! Downstream SNRs only depend on three scalars, so the relay processing
//! matrix is never formed.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::params::SystemParams;

/// Random stream for one Monte Carlo trial.
///
/// The stream is a pure function of `(master_seed, trial_index)`: the ChaCha
/// key comes from the seed and the trial index selects the stream id, so any
/// subset of trials can be generated in any order on any worker.
pub fn trial_rng(master_seed: u64, trial_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(trial_index);
    rng
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelDraw {
    pub h_sr: Vec<Complex64>,
    pub h_rd_hat: Vec<Complex64>,
    /// CSI estimation error vector.
    pub err: Vec<Complex64>,
    /// Always `sqrt(rho) * h_rd_hat + sqrt(1 - rho) * err`.
    pub h_rd: Vec<Complex64>,
    pub h_re: Vec<Complex64>,
}

impl ChannelDraw {
    /// Assembles a draw from its independent parts, deriving `h_rd`.
    ///
    /// Panics if the vectors have different lengths.
    pub fn from_parts(
        h_sr: Vec<Complex64>,
        h_rd_hat: Vec<Complex64>,
        err: Vec<Complex64>,
        h_re: Vec<Complex64>,
        rho: f64,
    ) -> Self {
        let n = h_sr.len();
        assert!(
            h_rd_hat.len() == n && err.len() == n && h_re.len() == n,
            "channel vectors must share one length"
        );
        let (known, unknown) = (rho.sqrt(), (1.0 - rho).sqrt());
        let h_rd = h_rd_hat
            .iter()
            .zip(&err)
            .map(|(h, e)| h * known + e * unknown)
            .collect();
        ChannelDraw {
            h_sr,
            h_rd_hat,
            err,
            h_rd,
            h_re,
        }
    }

    pub fn n_r(&self) -> usize {
        self.h_sr.len()
    }
}

/// Unit-power circularly-symmetric complex Gaussian sample.
fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Complex64> {
    (0..n).map(|_| complex_gaussian(rng)).collect()
}

/// Samples one realization of every channel vector.
pub fn draw_channels<R: Rng + ?Sized>(params: &SystemParams, rng: &mut R) -> ChannelDraw {
    let n = params.n_r as usize;
    let h_sr = gaussian_vector(rng, n);
    let h_rd_hat = gaussian_vector(rng, n);
    let err = gaussian_vector(rng, n);
    let h_re = gaussian_vector(rng, n);
    ChannelDraw::from_parts(h_sr, h_rd_hat, err, h_re, params.rho)
}

/// The three scalars that fix every per-realization SNR.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkStatistics {
    /// Squared norm of the source → relay channel.
    pub g_sr: f64,
    /// Legitimate beamforming gain `|h_rd^H u|^2` with `u = h_rd_hat / |h_rd_hat|`.
    pub g_d: f64,
    /// Eavesdropper leakage gain `|h_re^H u|^2`.
    pub g_e: f64,
}

pub fn link_statistics(draw: &ChannelDraw) -> Result<LinkStatistics> {
    let norm = draw.h_rd_hat.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
    if !(norm > 0.0) {
        return Err(Error::DegenerateDraw("estimated relay-destination channel has zero norm"));
    }
    let project = |h: &[Complex64]| -> f64 {
        let inner: Complex64 = h
            .iter()
            .zip(&draw.h_rd_hat)
            .map(|(x, u)| x.conj() * u)
            .sum();
        inner.norm_sqr() / (norm * norm)
    };
    Ok(LinkStatistics {
        g_sr: draw.h_sr.iter().map(Complex64::norm_sqr).sum(),
        g_d: project(&draw.h_rd),
        g_e: project(&draw.h_re),
    })
}
