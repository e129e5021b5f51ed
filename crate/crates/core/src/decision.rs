//! AF/DF selection: pointwise comparison, switching points along a power
//! sweep, and the relay power that maximizes the secrecy outage capacity.
//!
//! Everything here runs on the closed forms in [`crate::analytic`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::analytic::{interception_probability, secrecy_outage_capacity, Scheme};
use crate::error::{Error, Result};
use crate::params::{from_decibel, SystemParams};

pub const DEFAULT_GRID_STEP_DB: f64 = 0.1;
pub const CROSSING_TOLERANCE_DB: f64 = 1e-3;
pub const OPTIMUM_TOLERANCE_DB: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Criterion {
    Capacity,
    Interception,
}

impl FromStr for Criterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "capacity" => Ok(Criterion::Capacity),
            "interception" => Ok(Criterion::Interception),
            _ => Err(Error::InvalidArgument(format!(
                "unknown criterion `{s}` (expected capacity or interception)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComparisonVerdict {
    /// AF minus DF secrecy outage capacity, bit/s.
    pub delta_c_soc: f64,
    /// AF minus DF interception probability.
    pub delta_p0: f64,
    pub recommended: Scheme,
    pub criterion: Criterion,
}

/// Compares AF against DF at one operating point. Ties go to AF, which needs
/// no decoding at the relay.
pub fn compare_schemes(p: &SystemParams, criterion: Criterion) -> ComparisonVerdict {
    let delta_c_soc =
        secrecy_outage_capacity(p, Scheme::Af) - secrecy_outage_capacity(p, Scheme::Df);
    let delta_p0 = interception_probability(p, Scheme::Af).probability()
        - interception_probability(p, Scheme::Df).probability();
    let af_wins = match criterion {
        Criterion::Capacity => delta_c_soc >= 0.0,
        Criterion::Interception => delta_p0 <= 0.0,
    };
    ComparisonVerdict {
        delta_c_soc,
        delta_p0,
        recommended: if af_wins { Scheme::Af } else { Scheme::Df },
        criterion,
    }
}

/// Which transmit power a search moves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PowerAxis {
    SourcePower,
    RelayPower,
}

impl fmt::Display for PowerAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PowerAxis::SourcePower => "source-power",
            PowerAxis::RelayPower => "relay-power",
        })
    }
}

impl FromStr for PowerAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "source-power" => Ok(PowerAxis::SourcePower),
            "relay-power" => Ok(PowerAxis::RelayPower),
            _ => Err(Error::InvalidArgument(format!(
                "unknown power axis `{s}` (expected source-power or relay-power)"
            ))),
        }
    }
}

impl PowerAxis {
    pub fn apply(self, template: &SystemParams, db: f64) -> Result<SystemParams> {
        let linear = from_decibel(db)?;
        let mut p = *template;
        match self {
            PowerAxis::SourcePower => p.p_s = linear,
            PowerAxis::RelayPower => p.p_r = linear,
        }
        Ok(p)
    }
}

fn check_bracket(lo_db: f64, hi_db: f64) -> Result<()> {
    if !(lo_db.is_finite() && hi_db.is_finite() && lo_db < hi_db) {
        return Err(Error::InvalidArgument(format!(
            "invalid dB bracket [{lo_db}, {hi_db}]: need finite lo < hi"
        )));
    }
    Ok(())
}

fn grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step - 1e-9).ceil().max(1.0) as usize;
    (0..=n).map(|i| (lo + i as f64 * step).min(hi)).collect()
}

/// Finds every sign change of `f` on `[lo, hi]`: scans a uniform grid and
/// bisects each bracketing pair down to `tol`. Exact zeros on the grid only
/// count when the sign differs on either side of them.
pub fn locate_crossings<F>(f: F, lo: f64, hi: f64, step: f64, tol: f64) -> Result<Vec<f64>>
where
    F: Fn(f64) -> Result<f64>,
{
    check_bracket(lo, hi)?;
    if !(step > 0.0 && tol > 0.0) {
        return Err(Error::InvalidArgument("grid step and tolerance must be positive".into()));
    }
    let mut out = Vec::new();
    let mut last: Option<(f64, f64)> = None;
    for x in grid(lo, hi, step) {
        let fx = f(x)?;
        if fx == 0.0 || fx.is_nan() {
            continue;
        }
        if let Some((xa, fa)) = last {
            if fa.signum() != fx.signum() {
                out.push(bisect(&f, xa, fa, x, tol)?);
            }
        }
        last = Some((x, fx));
    }
    Ok(out)
}

fn bisect<F>(f: &F, mut a: f64, fa: f64, mut b: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let sa = fa.signum();
    while b - a > tol {
        let m = 0.5 * (a + b);
        let fm = f(m)?;
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == sa {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// dB values where the secrecy outage capacities of two schemes cross.
pub fn find_switching_point_between(
    template: &SystemParams,
    axis: PowerAxis,
    lo_db: f64,
    hi_db: f64,
    first: Scheme,
    second: Scheme,
    grid_step_db: f64,
) -> Result<Vec<f64>> {
    let delta = |db: f64| -> Result<f64> {
        let p = axis.apply(template, db)?;
        Ok(secrecy_outage_capacity(&p, first) - secrecy_outage_capacity(&p, second))
    };
    locate_crossings(delta, lo_db, hi_db, grid_step_db, CROSSING_TOLERANCE_DB)
}

/// AF/DF switching points along a source- or relay-power sweep, ascending.
pub fn find_switching_point(
    template: &SystemParams,
    axis: PowerAxis,
    lo_db: f64,
    hi_db: f64,
) -> Result<Vec<f64>> {
    find_switching_point_between(
        template,
        axis,
        lo_db,
        hi_db,
        Scheme::Af,
        Scheme::Df,
        DEFAULT_GRID_STEP_DB,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RelayPowerOptimum {
    pub scheme: Scheme,
    pub p_r_opt_db: f64,
    /// Secrecy outage capacity at the optimum, bit/s.
    pub c_soc_opt: f64,
}

/// Golden-section search for a maximum of `f` on `[a, b]`.
fn golden_section_max<F>(f: &F, mut a: f64, mut b: f64, tol: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while b - a > tol {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2)?;
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1)?;
        }
    }
    let x = 0.5 * (a + b);
    let fx = f(x)?;
    Ok([(x, fx), (x1, f1), (x2, f2)]
        .into_iter()
        .fold((x, fx), |best, c| if c.1 > best.1 { c } else { best }))
}

/// Relay power (dB) maximizing the closed-form secrecy outage capacity.
///
/// Runs golden-section over the whole bracket and, as a guard against
/// multimodality, a 0.1 dB grid scan refined locally by golden-section; the
/// better of the two wins.
pub fn optimal_relay_power(
    template: &SystemParams,
    lo_db: f64,
    hi_db: f64,
    scheme: Scheme,
) -> Result<RelayPowerOptimum> {
    check_bracket(lo_db, hi_db)?;
    let objective = |db: f64| -> Result<f64> {
        let p = PowerAxis::RelayPower.apply(template, db)?;
        Ok(secrecy_outage_capacity(&p, scheme))
    };

    let global = golden_section_max(&objective, lo_db, hi_db, OPTIMUM_TOLERANCE_DB)?;

    let mut scan = (lo_db, f64::NEG_INFINITY);
    for x in grid(lo_db, hi_db, DEFAULT_GRID_STEP_DB) {
        let fx = objective(x)?;
        if fx > scan.1 {
            scan = (x, fx);
        }
    }
    let local = golden_section_max(
        &objective,
        (scan.0 - DEFAULT_GRID_STEP_DB).max(lo_db),
        (scan.0 + DEFAULT_GRID_STEP_DB).min(hi_db),
        OPTIMUM_TOLERANCE_DB,
    )?;
    let backstop = if local.1 >= scan.1 { local } else { scan };

    let best = if global.1 >= backstop.1 { global } else { backstop };
    if !(best.1 > 0.0) {
        return Err(Error::NoOptimum);
    }
    Ok(RelayPowerOptimum {
        scheme,
        p_r_opt_db: best.0,
        c_soc_opt: best.1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{
        interception_probability_af, interception_probability_df, secrecy_outage_capacity_af,
        secrecy_outage_capacity_df,
    };

    fn reference() -> SystemParams {
        SystemParams::default()
    }

    fn fig4_template() -> SystemParams {
        SystemParams {
            p_r: 10.0,
            epsilon: 0.05,
            ..reference()
        }
    }

    fn fig5_template() -> SystemParams {
        SystemParams {
            p_s: 10.0,
            epsilon: 0.05,
            ..reference()
        }
    }

    #[test]
    fn reference_point_prefers_df() {
        let v = compare_schemes(&reference(), Criterion::Capacity);
        // Difference of the two frozen closed-form values, 34246.46 - 42856.30.
        assert!((v.delta_c_soc - (-8_609.832_767_388)).abs() < 1e-6, "{}", v.delta_c_soc);
        assert_eq!(v.recommended, Scheme::Df);
    }

    #[test]
    fn delta_is_literal_difference() {
        for (ps, pr, eps) in [(100.0, 100.0, 0.01), (3.0, 5000.0, 0.2), (1e6, 0.1, 0.5)] {
            let p = SystemParams { p_s: ps, p_r: pr, epsilon: eps, ..reference() };
            let v = compare_schemes(&p, Criterion::Capacity);
            assert_eq!(v.delta_c_soc, secrecy_outage_capacity_af(&p) - secrecy_outage_capacity_df(&p));
            assert_eq!(
                v.delta_p0,
                interception_probability_af(&p).probability() - interception_probability_df(&p).probability()
            );
        }
    }

    #[test]
    fn high_source_power_schemes_converge() {
        let p = SystemParams {
            p_s: 1e8,
            p_r: 1e3,
            epsilon: 0.05,
            ..reference()
        };
        let v = compare_schemes(&p, Criterion::Capacity);
        let af = secrecy_outage_capacity_af(&p);
        let df = secrecy_outage_capacity_df(&p);
        assert!(v.delta_c_soc.abs() <= 0.02 * af.min(df));
    }

    #[test]
    fn exact_tie_goes_to_af() {
        let p = SystemParams { p_s: 0.0, ..reference() };
        let v = compare_schemes(&p, Criterion::Capacity);
        assert_eq!(v.delta_c_soc, 0.0);
        assert_eq!(v.recommended, Scheme::Af);
    }

    #[test]
    fn loud_relay_interception() {
        let p = SystemParams { p_r: 1e8, ..reference() };
        let v = compare_schemes(&p, Criterion::Interception);
        assert!((v.delta_p0 + 1.0).abs() < 1e-3, "{}", v.delta_p0);
        assert_eq!(v.recommended, Scheme::Af);
    }

    #[test]
    fn source_sweep_has_crossing() {
        let xs = find_switching_point(&fig4_template(), PowerAxis::SourcePower, -10.0, 40.0).unwrap();
        assert!(!xs.is_empty());
        for &x in &xs {
            let at = |db: f64| {
                let p = PowerAxis::SourcePower.apply(&fig4_template(), db).unwrap();
                compare_schemes(&p, Criterion::Capacity).delta_c_soc
            };
            assert!(at(x - 1e-2).signum() != at(x + 1e-2).signum(), "{x}");
        }
        assert!(xs.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn crossing_stable_under_grid_halving() {
        let t = fig4_template();
        let coarse = find_switching_point_between(&t, PowerAxis::SourcePower, -10.0, 40.0, Scheme::Af, Scheme::Df, 0.1).unwrap();
        let fine = find_switching_point_between(&t, PowerAxis::SourcePower, -10.0, 40.0, Scheme::Af, Scheme::Df, 0.05).unwrap();
        assert_eq!(coarse.len(), fine.len());
        for (a, b) in coarse.iter().zip(&fine) {
            assert!((a - b).abs() < 1e-2, "{a} vs {b}");
        }
    }

    #[test]
    fn identical_schemes_never_cross() {
        let xs = find_switching_point_between(&fig4_template(), PowerAxis::SourcePower, -10.0, 40.0, Scheme::Af, Scheme::Af, 0.1).unwrap();
        assert!(xs.is_empty());
    }

    #[test]
    fn bad_bracket_rejected() {
        assert!(matches!(
            find_switching_point(&reference(), PowerAxis::RelayPower, 5.0, 5.0),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            optimal_relay_power(&reference(), 10.0, -10.0, Scheme::Af),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn crossings_of_known_function() {
        let f = |x: f64| Ok((x - 1.25) * (x + 3.5));
        let xs = locate_crossings(f, -10.0, 10.0, 0.1, 1e-6).unwrap();
        assert_eq!(xs.len(), 2);
        assert!((xs[0] + 3.5).abs() < 1e-6);
        assert!((xs[1] - 1.25).abs() < 1e-6);
    }

    #[test]
    fn golden_finds_parabola_peak() {
        let f = |x: f64| Ok(-(x - 0.3).powi(2));
        let (x, _) = golden_section_max(&f, -2.0, 5.0, 1e-6).unwrap();
        assert!((x - 0.3).abs() < 1e-6);
    }

    #[test]
    fn af_relay_power_has_interior_optimum() {
        let t = fig5_template();
        let opt = optimal_relay_power(&t, -20.0, 80.0, Scheme::Af).unwrap();
        assert!(opt.p_r_opt_db > -20.0 && opt.p_r_opt_db < 80.0);
        let edge = |db: f64| secrecy_outage_capacity_af(&PowerAxis::RelayPower.apply(&t, db).unwrap());
        assert!(opt.c_soc_opt > edge(-20.0));
        assert!(opt.c_soc_opt > edge(80.0));
    }

    #[test]
    fn optimum_beats_grid_scan() {
        let t = fig5_template();
        for scheme in Scheme::ALL {
            let opt = optimal_relay_power(&t, -20.0, 80.0, scheme).unwrap();
            let best = grid(-20.0, 80.0, 0.1)
                .into_iter()
                .map(|x| secrecy_outage_capacity(&PowerAxis::RelayPower.apply(&t, x).unwrap(), scheme))
                .fold(f64::NEG_INFINITY, f64::max);
            assert!(opt.c_soc_opt >= best * (1.0 - 1e-6), "{scheme}");
        }
    }

    // Grid-scan oracle: DF collapses at high relay power while AF keeps a
    // small positive capacity, and DF peaks at a higher relay power.
    #[test]
    fn df_collapses_faster_at_high_relay_power() {
        let t = fig5_template();
        let af = optimal_relay_power(&t, -20.0, 80.0, Scheme::Af).unwrap();
        let df = optimal_relay_power(&t, -20.0, 80.0, Scheme::Df).unwrap();
        assert!(df.c_soc_opt > 0.0 && af.c_soc_opt > 0.0);
        let at = |db: f64, s| secrecy_outage_capacity(&PowerAxis::RelayPower.apply(&t, db).unwrap(), s);
        assert!(at(40.0, Scheme::Df) < at(40.0, Scheme::Af));
        assert!(df.p_r_opt_db > af.p_r_opt_db);
    }

    #[test]
    fn zero_capacity_everywhere_has_no_optimum() {
        let t = SystemParams { p_s: 0.0, ..reference() };
        assert!(matches!(optimal_relay_power(&t, -10.0, 10.0, Scheme::Af), Err(Error::NoOptimum)));
    }
}
