//! The space-time bilinear form and its factorization through the adjoint.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::grid::{same_grid, SpaceTimeField};
use crate::propagator::{adjoint_accumulate, evolve};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BilinearReport {
    /// `Σ_s Σ_t w_s w_t ⟨e^{-isΔ}|∇|^{-σ}F_s, e^{-itΔ}|∇|^{-σ}G_t⟩`.
    pub double_sum: Complex64,
    /// `⟨adjoint(F), adjoint(G)⟩`.
    pub factorized: Complex64,
    pub rel_diff: f64,
}

/// Evaluates the bilinear form both as a double time sum and in factorized form.
pub fn bilinear_form(f: &SpaceTimeField, g: &SpaceTimeField, sigma: f64) -> Result<BilinearReport> {
    same_grid(&f.grid, &g.grid)?;
    if f.times != g.times {
        return Err(Error::GridMismatch("time lists differ".into()));
    }
    f.validate()?;
    g.validate()?;
    let w = f.time_weights();
    let pull = |stf: &SpaceTimeField| -> Result<Vec<_>> {
        stf.slices
            .iter()
            .zip(&stf.times)
            .map(|(s, &t)| evolve(s, -t, sigma))
            .collect()
    };
    let a = pull(f)?;
    let b = pull(g)?;
    let mut double_sum = Complex64::new(0.0, 0.0);
    for (ai, wi) in a.iter().zip(&w) {
        for (bj, wj) in b.iter().zip(&w) {
            double_sum += ai.inner(bj)? * (wi * wj);
        }
    }
    let factorized = adjoint_accumulate(f, sigma)?.inner(&adjoint_accumulate(g, sigma)?)?;
    let scale = double_sum.norm().max(factorized.norm());
    let rel_diff = if scale == 0.0 { 0.0 } else { (double_sum - factorized).norm() / scale };
    Ok(BilinearReport {
        double_sum,
        factorized,
        rel_diff,
    })
}
