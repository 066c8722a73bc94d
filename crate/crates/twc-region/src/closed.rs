//! Closed-form regions and the region under a fixed common maximizer.

use twc_core::simplex::{affordable_resolution, grid};
use twc_core::{qary_entropy, Dist, Error, JointDist, Result, TwoWayChannel};

use crate::geometry::RateRegion2D;

fn check_noise(q: usize, a: f64, e: f64) -> Result<()> {
    let ok = q >= 2 && (0.0..=1.0).contains(&a) && (0.0..=1.0).contains(&e) && a + e <= 1.0 + 1e-12;
    if !ok {
        return Err(Error::ParameterOutOfRange(format!("q={q}, alpha={a}, epsilon={e}")));
    }
    Ok(())
}

/// Rate toward the user whose noise has flip mass `α` and erasure mass `ε`:
/// `(1−ε)(log2 q − H_q(α/(1−ε)))`.
pub fn qary_erasure_rate(q: usize, alpha: f64, eps: f64) -> Result<f64> {
    check_noise(q, alpha, eps)?;
    if eps >= 1.0 {
        return Ok(0.0);
    }
    let x = (alpha / (1.0 - eps)).min(1.0);
    Ok((1.0 - eps) * ((q as f64).log2() - qary_entropy(x, q)?))
}

/// Capacity rectangle of the q-ary additive noise-erasure two-way channel;
/// `(α1, ε1)` act on user 1's output, so they bound `R2`.
pub fn closed_form_qary_erasure(q: usize, a1: f64, e1: f64, a2: f64, e2: f64) -> Result<RateRegion2D> {
    let r1 = qary_erasure_rate(q, a2, e2)?;
    let r2 = qary_erasure_rate(q, a1, e1)?;
    Ok(RateRegion2D::rectangle(r1, r2))
}

/// Largest number of `P_X2` grid points swept by
/// [`capacity_under_common_maximizer`].
pub const SWEEP_POINTS: u128 = 200_000;

/// Convex hull of the rate pairs under `P* × P_X2` as `P_X2` sweeps a grid
/// of the given resolution.
pub fn capacity_under_common_maximizer(ch: &TwoWayChannel, p_star: &Dist, resolution: usize) -> Result<RateRegion2D> {
    if p_star.len() != ch.nx1() {
        return Err(Error::DimensionMismatch(format!("P* has {} entries for |X1| = {}", p_star.len(), ch.nx1())));
    }
    let res = affordable_resolution(ch.nx2(), resolution.max(1), SWEEP_POINTS);
    let points = grid(ch.nx2(), res)
        .into_iter()
        .map(|p2| ch.rate_pair(&JointDist::product(p_star, &Dist::new(p2)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(RateRegion2D::from_points(&points))
}
