//! Integral modulus of continuity for step functions.
//!
//! The shift distance at a fixed shift is computed cell-exactly on the
//! overlay of the base and shifted breakpoint grids. Raised to the q-th
//! power, the distance is piecewise affine in the shift: its slope can only
//! change when a shifted breakpoint crosses a base one, i.e. at pairwise
//! breakpoint differences. The supremum over shifts in [0, delta] is
//! therefore the maximum over that finite candidate set.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::stepfn::StepFunction;

// Candidates closer than this are the same slope break up to float noise.
const CANDIDATE_DEDUP_TOL: f64 = 1e-13;

/// Shift-distance samples at every slope break of the q-th-power profile.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShiftDistanceProfile {
    pub gamma_breaks: Vec<f64>,
    pub values: Vec<f64>,
}

fn validate_q(q: f64) -> Result<()> {
    if !(q.is_finite() && q >= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "integral exponent must satisfy q >= 1, got {q}"
        )));
    }
    Ok(())
}

fn validate_shift(gamma: f64) -> Result<()> {
    if !(gamma.is_finite() && (0.0..=1.0).contains(&gamma)) {
        return Err(Error::InvalidArgument(format!(
            "shift must lie in [0, 1], got {gamma}"
        )));
    }
    Ok(())
}

fn pow_q(x: f64, q: f64) -> f64 {
    if q == 1.0 {
        x
    } else {
        x.powf(q)
    }
}

fn root_q(x: f64, q: f64) -> f64 {
    if q == 1.0 {
        x
    } else {
        x.powf(1.0 / q)
    }
}

// integral of |f(t + gamma) - f(t)|^q over the applicable domain
fn shift_integral(f: &StepFunction, gamma: f64, q: f64) -> f64 {
    let mut cuts: Vec<f64> = Vec::with_capacity(2 * f.breakpoints().len() + 2);
    let end = if f.is_periodic() { 1.0 } else { 1.0 - gamma };
    if end <= 0.0 {
        return 0.0;
    }
    cuts.push(0.0);
    cuts.push(end);
    for &t in f.breakpoints() {
        if t > 0.0 && t < end {
            cuts.push(t);
        }
        let shifted = if f.is_periodic() {
            (t - gamma).rem_euclid(1.0)
        } else {
            t - gamma
        };
        if shifted > 0.0 && shifted < end {
            cuts.push(shifted);
        }
    }
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup();
    let mut acc = 0.0;
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if hi <= lo {
            continue;
        }
        // f is constant on each overlay cell, so the midpoint is exact
        let mid = 0.5 * (lo + hi);
        let base = f.eval(mid).expect("midpoint inside domain");
        let shifted_point = if f.is_periodic() {
            mid + gamma
        } else {
            (mid + gamma).min(1.0)
        };
        let moved = f.eval(shifted_point).expect("shifted midpoint inside domain");
        let d = (moved - base).abs();
        if d > 0.0 {
            acc += pow_q(d, q) * (hi - lo);
        }
    }
    acc
}

/// L^q distance between `f` and its shift by `gamma`: truncated to
/// `[0, 1 - gamma]` for non-periodic functions, wrapped modulo 1 for
/// periodic ones.
pub fn shift_distance(f: &StepFunction, gamma: f64, q: f64) -> Result<f64> {
    validate_shift(gamma)?;
    validate_q(q)?;
    Ok(root_q(shift_integral(f, gamma, q), q))
}

// Shifts where the q-th-power profile can change slope: 0, delta, and every
// pairwise breakpoint difference inside (0, delta).
fn break_candidates(f: &StepFunction, delta: f64) -> Vec<f64> {
    let ts = f.breakpoints();
    let mut cands = vec![0.0, delta];
    if f.is_periodic() {
        for (i, &ti) in ts.iter().enumerate() {
            for (j, &tj) in ts.iter().enumerate() {
                if i == j {
                    continue;
                }
                let d = (tj - ti).rem_euclid(1.0);
                if d > 0.0 && d < delta {
                    cands.push(d);
                }
            }
        }
    } else {
        for (i, &ti) in ts.iter().enumerate() {
            for &tj in &ts[i + 1..] {
                let d = tj - ti;
                if d > 0.0 && d < delta {
                    cands.push(d);
                }
            }
        }
    }
    cands.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cands.dedup_by(|b, a| (*b - *a).abs() <= CANDIDATE_DEDUP_TOL);
    cands
}

fn validate_delta(delta: f64) -> Result<()> {
    if !(delta.is_finite() && (0.0..=1.0).contains(&delta)) {
        return Err(Error::InvalidArgument(format!(
            "delta must lie in [0, 1], got {delta}"
        )));
    }
    Ok(())
}

fn modulus_from_candidates(f: &StepFunction, cands: &[f64], q: f64, parallel: bool) -> f64 {
    #[cfg(feature = "parallel")]
    if parallel {
        use rayon::prelude::*;
        let best = cands
            .par_iter()
            .map(|&g| shift_integral(f, g, q))
            .reduce(|| 0.0, f64::max);
        return root_q(best, q);
    }
    let _ = parallel;
    let best = cands
        .iter()
        .map(|&g| shift_integral(f, g, q))
        .fold(0.0, f64::max);
    root_q(best, q)
}

/// Exact integral modulus of continuity: the supremum of
/// [`shift_distance`] over shifts in `[0, delta]`.
pub fn integral_modulus(f: &StepFunction, delta: f64, q: f64) -> Result<f64> {
    validate_delta(delta)?;
    validate_q(q)?;
    Ok(modulus_from_candidates(f, &break_candidates(f, delta), q, true))
}

/// Sequential variant of [`integral_modulus`], kept for benchmarks.
pub fn integral_modulus_seq(f: &StepFunction, delta: f64, q: f64) -> Result<f64> {
    validate_delta(delta)?;
    validate_q(q)?;
    Ok(modulus_from_candidates(f, &break_candidates(f, delta), q, false))
}

/// The full shift-distance profile over `[0, delta]`, sampled at every slope
/// break of the q-th-power map.
pub fn shift_profile(f: &StepFunction, delta: f64, q: f64) -> Result<ShiftDistanceProfile> {
    validate_delta(delta)?;
    validate_q(q)?;
    let gamma_breaks = break_candidates(f, delta);
    let values = gamma_breaks
        .iter()
        .map(|&g| root_q(shift_integral(f, g, q), q))
        .collect();
    Ok(ShiftDistanceProfile {
        gamma_breaks,
        values,
    })
}
