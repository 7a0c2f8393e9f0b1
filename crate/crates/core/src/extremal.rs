//! Closed-form solution of the weighted block-maximization problem, plus the
//! brute-force oracles used to cross-check it.
//!
//! Maximize `F(x) = sum_i x_i^r` over nonincreasing nonnegative vectors
//! subject to `sum_i x_i / weight(i) <= budget`. The maximizer is a block
//! vector: the first k coordinates equal `budget / prefix_sum(k)` and the
//! rest vanish. For `r >= 1` the best block length maximizes
//! `k / prefix_sum(k)^r`; for `0 < r < 1` the full block `k = n` wins.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::sequences::WatermanSequence;

const GRID_DIMENSION_MAX: usize = 3;

#[derive(Debug, Clone)]
pub struct ExtremalProblem {
    seq: WatermanSequence,
    n: usize,
    exponent: f64,
    budget: f64,
}

impl ExtremalProblem {
    pub fn new(seq: WatermanSequence, n: usize, exponent: f64, budget: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("dimension must be >= 1".into()));
        }
        if !(exponent.is_finite() && exponent > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "exponent must be positive, got {exponent}"
            )));
        }
        if !(budget.is_finite() && budget > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "budget must be positive, got {budget}"
            )));
        }
        Ok(ExtremalProblem {
            seq,
            n,
            exponent,
            budget,
        })
    }

    /// Problem with the canonical unit budget.
    pub fn unit(seq: WatermanSequence, n: usize, exponent: f64) -> Result<Self> {
        Self::new(seq, n, exponent, 1.0)
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    pub fn budget(&self) -> f64 {
        self.budget
    }

    pub fn sequence(&self) -> &WatermanSequence {
        &self.seq
    }

    fn block_value(&self, prefix: &[f64], k: usize) -> f64 {
        let level = self.budget / prefix[k - 1];
        (k as f64) * pow_r(level, self.exponent)
    }
}

fn pow_r(x: f64, r: f64) -> f64 {
    if r == 1.0 {
        x
    } else {
        x.powf(r)
    }
}

/// A maximizer in block form.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtremalSolution {
    /// Number of leading coordinates at the common positive level.
    #[serde(rename = "k_star")]
    pub block_len: usize,
    /// The maximizing vector itself.
    #[serde(rename = "x")]
    pub point: Vec<f64>,
    pub value: f64,
}

/// Solves the problem in closed form. Ties pick the smallest block length.
pub fn solve_closed_form(prob: &ExtremalProblem) -> ExtremalSolution {
    let n = prob.n;
    prob.seq.with_prefix(n, |prefix| {
        let block_len = if prob.exponent >= 1.0 {
            let mut best = f64::NEG_INFINITY;
            let mut best_k = 1;
            for k in 1..=n {
                let v = prob.block_value(prefix, k);
                if v > best {
                    best = v;
                    best_k = k;
                }
            }
            best_k
        } else {
            n
        };
        let level = prob.budget / prefix[block_len - 1];
        let mut point = vec![level; block_len];
        point.resize(n, 0.0);
        ExtremalSolution {
            block_len,
            point,
            value: prob.block_value(prefix, block_len),
        }
    })
}

/// Maximum of the objective over the n block vertices.
pub fn block_vertex_max(prob: &ExtremalProblem) -> f64 {
    prob.seq.with_prefix(prob.n, |prefix| {
        (1..=prob.n)
            .map(|k| prob.block_value(prefix, k))
            .fold(f64::NEG_INFINITY, f64::max)
    })
}

// Grid enumeration state: the feasibility tolerance absorbs float dust at
// the constraint boundary without admitting an extra grid step.
struct GridScan {
    step: f64,
    powers: Vec<f64>, // powers[j] = (j * step)^r
    weights: Vec<f64>,
    slack: f64,
}

impl GridScan {
    fn new(prob: &ExtremalProblem, resolution: usize) -> Self {
        let step = prob.budget / resolution as f64;
        let max_steps = ((resolution as f64) * prob.weights_max() * (1.0 + 1e-9)).floor() as usize;
        let powers = (0..=max_steps)
            .map(|j| pow_r(j as f64 * step, prob.exponent))
            .collect();
        let weights = (1..=prob.n)
            .map(|i| prob.seq.weight_unchecked(i))
            .collect();
        GridScan {
            step,
            powers,
            weights,
            slack: prob.budget * (1.0 + 1e-12),
        }
    }

    fn spend(&self, j: usize, axis: usize) -> f64 {
        j as f64 * self.step / self.weights[axis]
    }

    // best objective with x_1 = j1 * step fixed
    fn scan_from(&self, n: usize, j1: usize) -> f64 {
        let u1 = self.spend(j1, 0);
        if u1 > self.slack {
            return 0.0;
        }
        match n {
            1 => self.powers[j1],
            2 => {
                let mut best = 0.0f64;
                for j2 in 0..=j1 {
                    if u1 + self.spend(j2, 1) > self.slack {
                        break;
                    }
                    best = best.max(self.powers[j1] + self.powers[j2]);
                }
                best
            }
            3 => {
                let mut best = 0.0f64;
                for j2 in 0..=j1 {
                    let u2 = u1 + self.spend(j2, 1);
                    if u2 > self.slack {
                        break;
                    }
                    for j3 in 0..=j2 {
                        if u2 + self.spend(j3, 2) > self.slack {
                            break;
                        }
                        best = best.max(self.powers[j1] + self.powers[j2] + self.powers[j3]);
                    }
                }
                best
            }
            _ => unreachable!("grid scan is limited to n <= 3"),
        }
    }

    fn j1_cap(&self, resolution: usize) -> usize {
        let w1 = self.weights[0];
        ((resolution as f64) * w1 * (1.0 + 1e-9)).floor() as usize
    }
}

impl ExtremalProblem {
    fn weights_max(&self) -> f64 {
        (1..=self.n)
            .map(|i| self.seq.weight_unchecked(i))
            .fold(0.0, f64::max)
    }
}

fn run_grid(prob: &ExtremalProblem, resolution: usize, parallel: bool) -> Result<f64> {
    if prob.n > GRID_DIMENSION_MAX {
        return Err(Error::GridRefused {
            n: prob.n,
            max: GRID_DIMENSION_MAX,
        });
    }
    if resolution == 0 {
        return Err(Error::InvalidArgument("resolution must be >= 1".into()));
    }
    let scan = GridScan::new(prob, resolution);
    let cap = scan.j1_cap(resolution);
    #[cfg(feature = "parallel")]
    if parallel {
        use rayon::prelude::*;
        return Ok((0..=cap)
            .into_par_iter()
            .map(|j1| scan.scan_from(prob.n, j1))
            .reduce(|| 0.0, f64::max));
    }
    let _ = parallel;
    Ok((0..=cap)
        .map(|j1| scan.scan_from(prob.n, j1))
        .fold(0.0, f64::max))
}

/// Independent grid oracle for low dimension: maximizes the objective over
/// all nonincreasing lattice vectors of step `budget / resolution` inside
/// the constraint, without assuming anything about the maximizer's shape.
pub fn brute_force_grid(prob: &ExtremalProblem, resolution: usize) -> Result<f64> {
    run_grid(prob, resolution, true)
}

/// Sequential variant of [`brute_force_grid`], kept for benchmarks.
pub fn brute_force_grid_seq(prob: &ExtremalProblem, resolution: usize) -> Result<f64> {
    run_grid(prob, resolution, false)
}
