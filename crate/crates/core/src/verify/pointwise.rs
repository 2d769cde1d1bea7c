//! Fitted constant of the pointwise kernel bound on an `(x, t)` lattice.

use serde::{Deserialize, Serialize};

use crate::propagator::{kernel_bound, kernel_eval, log_times, KernelSchedule};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointwiseReport {
    pub n: usize,
    pub sigma: f64,
    pub samples: usize,
    /// `max |K_t(x)| / bound(t, x)`.
    pub constant: f64,
    pub worst_x: f64,
    pub worst_t: f64,
    pub converged: bool,
}

/// Evaluates `|K_t(x)|/bound` on `points_x` equispaced `x ∈ [0, x_max)` times
/// `points_t` log-spaced `t ∈ [t_min, t_max]`.
pub fn pointwise_constant(
    n: usize,
    sigma: f64,
    x_max: f64,
    points_x: usize,
    t_range: (f64, f64),
    points_t: usize,
    schedule: &KernelSchedule,
) -> Result<PointwiseReport> {
    if points_x == 0 || points_t < 2 || !(x_max > 0.0) {
        return Err(Error::InvalidField("empty sample lattice".into()));
    }
    let (t0, t1) = t_range;
    log_times(t0, t1, 1)?;
    let xs: Vec<f64> = (0..points_x).map(|i| x_max * i as f64 / points_x as f64).collect();
    let ts: Vec<f64> = (0..points_t)
        .map(|j| t0 * (t1 / t0).powf(j as f64 / (points_t - 1) as f64))
        .collect();
    let gamma = 2.0 * sigma;
    let rows = crate::par::map_range(ts.len(), |j| -> Result<(f64, f64, bool)> {
        let s = kernel_eval(n, sigma, ts[j], &xs, schedule)?;
        let mut best = (0.0, 0.0);
        for (x, v) in xs.iter().zip(&s.values) {
            let c = v.norm() / kernel_bound(n, gamma, ts[j], *x)?;
            if c > best.0 {
                best = (c, *x);
            }
        }
        Ok((best.0, best.1, s.converged))
    });
    let mut out = PointwiseReport {
        n,
        sigma,
        samples: xs.len() * ts.len(),
        constant: 0.0,
        worst_x: 0.0,
        worst_t: 0.0,
        converged: true,
    };
    for (row, &t) in rows.into_iter().zip(&ts) {
        let (c, x, ok) = row?;
        out.converged &= ok;
        if c > out.constant {
            out.constant = c;
            out.worst_x = x;
            out.worst_t = t;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_is_positive_and_finite() {
        let r = pointwise_constant(1, 0.3, 16.0, 16, (0.1, 10.0), 8, &KernelSchedule::default()).unwrap();
        assert_eq!(r.samples, 128);
        assert!(r.constant > 0.0 && r.constant.is_finite());
        assert!(r.converged);
    }
}
