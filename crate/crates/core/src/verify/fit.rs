//! Power-law regression of decay profiles.

use serde::{Deserialize, Serialize};

use crate::exponents::KernelDecay;
use crate::propagator::DecayProfile;
use crate::{Error, Result};
use num_traits::ToPrimitive;

/// Minimum samples per regime.
pub const MIN_POINTS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `0 < |t| ≤ 1`
    SmallTime,
    /// `|t| ≥ 1`
    LargeTime,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub regime: Regime,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub points: usize,
    pub predicted: Option<f64>,
    pub slope_error: Option<f64>,
}

/// Least squares `log h = slope·log t + intercept`; returns `(slope, intercept, R²)`.
pub fn fit_power_law(ts: &[f64], hs: &[f64]) -> Result<(f64, f64, f64)> {
    if ts.len() != hs.len() || ts.len() < 2 {
        return Err(Error::Fit("need at least two (t, h) pairs of equal length".into()));
    }
    if let Some(i) = (0..ts.len()).find(|&i| !(ts[i].abs() > 0.0 && hs[i] > 0.0 && hs[i].is_finite())) {
        return Err(Error::Fit(format!(
            "non-positive sample at t = {}, h = {}",
            ts[i], hs[i]
        )));
    }
    let xs: Vec<f64> = ts.iter().map(|t| t.abs().ln()).collect();
    let ys: Vec<f64> = hs.iter().map(|h| h.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::Fit("all times coincide".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok((slope, intercept, r2))
}

fn fit_regime(profile: &DecayProfile, regime: Regime, predicted: Option<f64>) -> Result<DecayFit> {
    let keep = |t: f64| match regime {
        Regime::SmallTime => t.abs() <= 1.0,
        Regime::LargeTime => t.abs() >= 1.0,
    };
    let (ts, hs): (Vec<f64>, Vec<f64>) = profile
        .times
        .iter()
        .zip(&profile.values)
        .filter(|(t, _)| keep(**t))
        .map(|(t, h)| (*t, *h))
        .unzip();
    if ts.len() < MIN_POINTS {
        return Err(Error::Fit(format!(
            "{regime:?} regime has {} points, need at least {MIN_POINTS}",
            ts.len()
        )));
    }
    let (slope, intercept, r_squared) = fit_power_law(&ts, &hs)?;
    Ok(DecayFit {
        regime,
        slope,
        intercept,
        r_squared,
        points: ts.len(),
        predicted,
        slope_error: predicted.map(|p| (slope - p).abs()),
    })
}

/// Slopes of `log h` against `log |t|` on each side of `|t| = 1`.
pub fn fit_decay(profile: &DecayProfile, predicted: Option<&KernelDecay>) -> Result<(DecayFit, DecayFit)> {
    let small = predicted.map(|p| p.small_t.to_f64().unwrap_or(f64::NAN));
    let large = predicted.map(|p| p.large_t.to_f64().unwrap_or(f64::NAN));
    Ok((
        fit_regime(profile, Regime::SmallTime, small)?,
        fit_regime(profile, Regime::LargeTime, large)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::propagator::log_times;

    fn synthetic(f: impl Fn(f64) -> f64) -> DecayProfile {
        let times = log_times(0.02, 50.0, 24).unwrap();
        let values = times.iter().map(|&t| f(t)).collect();
        DecayProfile {
            n: 1,
            sigma: 0.3,
            rt: f64::INFINITY,
            r: f64::INFINITY,
            window: "test".into(),
            est_errors: vec![0.0; times.len()],
            times,
            values,
            converged: true,
        }
    }

    #[test]
    fn exact_power_law() {
        let p = synthetic(|t| 3.0 * t.powf(-0.2));
        let (s, l) = fit_decay(&p, None).unwrap();
        assert!((s.slope + 0.2).abs() < 1e-10 && (l.slope + 0.2).abs() < 1e-10);
        assert!((s.intercept - 3f64.ln()).abs() < 1e-10);
        assert!((s.r_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn broken_power_law() {
        let p = synthetic(|t| if t <= 1.0 { t.powf(-0.3) } else { t.powf(-0.1) });
        let (s, l) = fit_decay(&p, None).unwrap();
        assert!((s.slope + 0.3).abs() < 1e-10 && (l.slope + 0.1).abs() < 1e-10);
    }

    #[test]
    fn rejects_bad_profiles() {
        let mut p = synthetic(|t| t);
        p.values[3] = 0.0;
        assert!(fit_decay(&p, None).is_err());
        let mut short = synthetic(|t| t);
        short.times.truncate(20);
        short.values.truncate(20);
        assert!(fit_decay(&short, None).is_err());
    }
}
