//! Monotone fixpoint iteration on nonnegative vectors. An order-preserving
//! map iterated from 0 is nondecreasing; it either stabilises at the least
//! fixpoint or escapes every bound (no finite decreasing point exists).

use crate::error::Result;

pub const MAX_ITERATIONS: usize = 10_000;
pub const DIVERGENCE_GUARD: f64 = 1e9;
pub const REL_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct IterationOutcome {
    pub converged: bool,
    pub iterations: usize,
    /// Last iterate; the fixpoint when converged.
    pub value: Vec<f64>,
}

pub fn iterate_monotone(
    map: impl Fn(&[f64]) -> Result<Vec<f64>>,
    start: Vec<f64>,
    max_iter: usize,
    guard: f64,
    rel_tol: f64,
) -> Result<IterationOutcome> {
    let mut cur = start;
    for it in 1..=max_iter {
        let next = map(&cur)?;
        if next.iter().any(|v| !v.is_finite() || *v > guard) {
            return Ok(IterationOutcome {
                converged: false,
                iterations: it,
                value: next,
            });
        }
        let stable = cur
            .iter()
            .zip(&next)
            .all(|(a, b)| (a - b).abs() <= rel_tol * b.abs().max(1e-300));
        if stable {
            return Ok(IterationOutcome {
                converged: true,
                iterations: it,
                value: next,
            });
        }
        cur = next;
    }
    Ok(IterationOutcome {
        converged: false,
        iterations: max_iter,
        value: cur,
    })
}

/// Geometric extrapolation of a near-geometric iterate sequence, then a
/// certificate check. Used where the plain iteration would need too many
/// steps close to the critical parameter: if the extrapolated limit μ∞
/// satisfies map(μ∞·(1+slack)) ≤ μ∞·(1+slack), a decreasing point exists
/// and the iteration from 0 converges.
pub fn certified_feasible(
    map: impl Fn(&[f64]) -> Result<Vec<f64>>,
    dim: usize,
    warmup: usize,
    guard: f64,
    slack: f64,
) -> Result<bool> {
    let mut cur = map(&vec![0.0; dim])?;
    let mut delta_prev: Option<Vec<f64>> = None;
    for _ in 0..warmup {
        let next = map(&cur)?;
        if next.iter().any(|v| !v.is_finite() || *v > guard) {
            return Ok(false);
        }
        let delta: Vec<f64> = next.iter().zip(&cur).map(|(a, b)| a - b).collect();
        if delta.iter().all(|d| d.abs() < 1e-14) {
            return Ok(true);
        }
        if let Some(dp) = &delta_prev {
            let num: f64 = delta.iter().map(|d| d.abs()).sum();
            let den: f64 = dp.iter().map(|d| d.abs()).sum();
            if den > 0.0 {
                let q = num / den;
                if q < 1.0 {
                    // Candidate limit via geometric tail, then certify.
                    let cand: Vec<f64> = next
                        .iter()
                        .zip(&delta)
                        .map(|(x, d)| (x + d * q / (1.0 - q)).max(0.0) * (1.0 + slack))
                        .collect();
                    let image = map(&cand)?;
                    if image.iter().zip(&cand).all(|(a, b)| a <= b) {
                        return Ok(true);
                    }
                }
            }
        }
        delta_prev = Some(delta);
        cur = next;
    }
    Ok(false)
}
