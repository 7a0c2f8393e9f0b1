//! Weight sequences and gauges: the two parameter families every other
//! module is instantiated against.
//!
//! A [`WatermanSequence`] is a nondecreasing sequence of positive weights
//! whose reciprocals sum to infinity; the divergence itself cannot be checked
//! in finite time, so [`WatermanSequence::divergence_witness`] offers a
//! finite-prefix witness instead. A [`ModulusOfContinuity`] is a
//! nondecreasing continuous gauge vanishing at zero.

use std::sync::RwLock;

use crate::error::{Error, Result};

/// Parametric families of weight sequences.
#[derive(Debug, Clone, PartialEq)]
pub enum SequenceKind {
    /// Every weight equals the given positive constant.
    Constant(f64),
    /// `weight(i) = i^alpha` with `0 <= alpha <= 1`.
    Power(f64),
    /// A finite list of weights, extended by repeating the last entry so the
    /// reciprocal sum always diverges.
    Explicit(Vec<f64>),
}

/// A nondecreasing sequence of positive weights with cached prefix sums of
/// the reciprocals.
#[derive(Debug)]
pub struct WatermanSequence {
    kind: SequenceKind,
    // prefix[k-1] holds sum_{i<=k} 1/weight(i); append-only under the lock.
    prefix: RwLock<Vec<f64>>,
}

impl Clone for WatermanSequence {
    fn clone(&self) -> Self {
        let cache = self.prefix.read().expect("prefix cache poisoned").clone();
        WatermanSequence {
            kind: self.kind.clone(),
            prefix: RwLock::new(cache),
        }
    }
}

impl PartialEq for WatermanSequence {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl WatermanSequence {
    pub fn constant(c: f64) -> Result<Self> {
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "constant weight must be a positive finite number, got {c}"
            )));
        }
        Ok(Self::from_kind(SequenceKind::Constant(c)))
    }

    pub fn power(alpha: f64) -> Result<Self> {
        if !(alpha.is_finite() && (0.0..=1.0).contains(&alpha)) {
            return Err(Error::InvalidArgument(format!(
                "power exponent must lie in [0, 1] so the reciprocal sum diverges, got {alpha}"
            )));
        }
        Ok(Self::from_kind(SequenceKind::Power(alpha)))
    }

    pub fn explicit(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidArgument(
                "explicit weight list must be nonempty".into(),
            ));
        }
        for w in values.windows(2) {
            if w[1] < w[0] {
                return Err(Error::InvalidArgument(format!(
                    "explicit weights must be nondecreasing, got {} after {}",
                    w[1], w[0]
                )));
            }
        }
        if values.iter().any(|&v| !(v.is_finite() && v > 0.0)) {
            return Err(Error::InvalidArgument(
                "explicit weights must be positive finite numbers".into(),
            ));
        }
        Ok(Self::from_kind(SequenceKind::Explicit(values)))
    }

    fn from_kind(kind: SequenceKind) -> Self {
        WatermanSequence {
            kind,
            prefix: RwLock::new(Vec::new()),
        }
    }

    pub fn kind(&self) -> &SequenceKind {
        &self.kind
    }

    /// The i-th weight, 1-based.
    pub fn weight(&self, i: usize) -> Result<f64> {
        if i == 0 {
            return Err(Error::InvalidArgument("weight index must be >= 1".into()));
        }
        Ok(self.weight_unchecked(i))
    }

    pub(crate) fn weight_unchecked(&self, i: usize) -> f64 {
        match &self.kind {
            SequenceKind::Constant(c) => *c,
            SequenceKind::Power(alpha) => {
                if *alpha == 1.0 {
                    i as f64
                } else if *alpha == 0.0 {
                    1.0
                } else {
                    (i as f64).powf(*alpha)
                }
            }
            SequenceKind::Explicit(values) => values[i.min(values.len()) - 1],
        }
    }

    /// `sum_{i<=k} 1/weight(i)`, strictly increasing in k.
    pub fn reciprocal_prefix_sum(&self, k: usize) -> Result<f64> {
        if k == 0 {
            return Err(Error::InvalidArgument(
                "prefix length must be >= 1".into(),
            ));
        }
        Ok(self.with_prefix(k, |sums| sums[k - 1]))
    }

    /// Runs `body` on the first `k` reciprocal prefix sums, extending the
    /// cache first if needed. Concurrent readers share the lock.
    pub(crate) fn with_prefix<R>(&self, k: usize, body: impl FnOnce(&[f64]) -> R) -> R {
        self.ensure_prefix(k);
        let guard = self.prefix.read().expect("prefix cache poisoned");
        body(&guard[..k])
    }

    fn ensure_prefix(&self, k: usize) {
        if self.prefix.read().expect("prefix cache poisoned").len() >= k {
            return;
        }
        let mut guard = self.prefix.write().expect("prefix cache poisoned");
        let mut acc = guard.last().copied().unwrap_or(0.0);
        for i in guard.len() + 1..=k {
            acc += 1.0 / self.weight_unchecked(i);
            guard.push(acc);
        }
    }

    /// Smallest `k <= k_max` whose reciprocal prefix sum reaches `bound`.
    ///
    /// This is the finite stand-in for the divergence requirement: a sequence
    /// that cannot produce a witness at the requested scale is unusable here.
    pub fn divergence_witness(&self, bound: f64, k_max: usize) -> Result<usize> {
        if !(bound.is_finite() && bound > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "divergence bound must be positive, got {bound}"
            )));
        }
        if k_max == 0 {
            return Err(Error::InvalidArgument("k_max must be >= 1".into()));
        }
        let mut done = 0usize;
        while done < k_max {
            let upto = (done + 1024).min(k_max);
            self.ensure_prefix(upto);
            let guard = self.prefix.read().expect("prefix cache poisoned");
            let hit = guard[..upto].partition_point(|&s| s < bound);
            if hit < upto {
                return Ok(hit + 1);
            }
            done = upto;
        }
        let reached = self.with_prefix(k_max, |sums| sums[k_max - 1]);
        Err(Error::DivergenceNotWitnessed {
            bound,
            k_max,
            reached,
        })
    }
}

/// Parametric families of gauges.
#[derive(Debug, Clone, PartialEq)]
pub enum ModulusKind {
    /// `omega(d) = d^beta` with `beta > 0`.
    Power { beta: f64 },
    /// `omega(d) = d^beta * (1 + ln(1/d))^(-gamma)` for `d > 0`, zero at zero.
    PowerLog { beta: f64, gamma: f64 },
    /// Piecewise-linear interpolation of `(delta, value)` nodes on [0, 1].
    Tabulated { points: Vec<(f64, f64)> },
}

/// A nondecreasing gauge on [0, 1] with `eval(0) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModulusOfContinuity {
    kind: ModulusKind,
}

impl ModulusOfContinuity {
    pub fn power(beta: f64) -> Result<Self> {
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "power gauge exponent must be positive, got {beta}"
            )));
        }
        Ok(ModulusOfContinuity {
            kind: ModulusKind::Power { beta },
        })
    }

    pub fn power_log(beta: f64, gamma: f64) -> Result<Self> {
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "power-log gauge exponent must be positive, got {beta}"
            )));
        }
        // d/dd log omega = (beta + gamma/(1 + ln(1/d))) / d, minimal at d = 1.
        if !(gamma.is_finite() && beta + gamma >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "power-log gauge is decreasing near 1 unless beta + gamma >= 0, got beta = {beta}, gamma = {gamma}"
            )));
        }
        Ok(ModulusOfContinuity {
            kind: ModulusKind::PowerLog { beta, gamma },
        })
    }

    /// Builds a tabulated gauge. The node list must start at `(0, 0)`, end at
    /// `delta = 1`, have strictly increasing abscissas and nondecreasing
    /// values; linear interpolation then keeps it a continuous modulus.
    pub fn tabulated(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidArgument(
                "tabulated gauge needs at least two nodes".into(),
            ));
        }
        if points[0] != (0.0, 0.0) {
            return Err(Error::InvalidArgument(
                "tabulated gauge must start at (0, 0)".into(),
            ));
        }
        if points.last().unwrap().0 != 1.0 {
            return Err(Error::InvalidArgument(
                "tabulated gauge must cover [0, 1]; last node must have delta = 1".into(),
            ));
        }
        for w in points.windows(2) {
            if !(w[1].0 > w[0].0) {
                return Err(Error::InvalidArgument(
                    "tabulated gauge abscissas must be strictly increasing".into(),
                ));
            }
            if !(w[1].1 >= w[0].1) {
                return Err(Error::InvalidArgument(
                    "tabulated gauge values must be nondecreasing".into(),
                ));
            }
        }
        if points.iter().any(|&(d, v)| !d.is_finite() || !v.is_finite() || v < 0.0) {
            return Err(Error::InvalidArgument(
                "tabulated gauge nodes must be finite and nonnegative".into(),
            ));
        }
        Ok(ModulusOfContinuity {
            kind: ModulusKind::Tabulated { points },
        })
    }

    pub fn kind(&self) -> &ModulusKind {
        &self.kind
    }

    /// Evaluates the gauge at `delta` in [0, 1]; `eval(0)` is exactly zero.
    pub fn eval(&self, delta: f64) -> Result<f64> {
        if !(delta.is_finite() && (0.0..=1.0).contains(&delta)) {
            return Err(Error::InvalidArgument(format!(
                "gauge argument must lie in [0, 1], got {delta}"
            )));
        }
        if delta == 0.0 {
            return Ok(0.0);
        }
        Ok(match &self.kind {
            ModulusKind::Power { beta } => delta.powf(*beta),
            ModulusKind::PowerLog { beta, gamma } => {
                delta.powf(*beta) * (1.0 + (1.0 / delta).ln()).powf(-gamma)
            }
            ModulusKind::Tabulated { points } => {
                let hi = points.partition_point(|&(d, _)| d < delta);
                if hi == points.len() {
                    points.last().unwrap().1
                } else if points[hi].0 == delta {
                    points[hi].1
                } else {
                    let (d0, v0) = points[hi - 1];
                    let (d1, v1) = points[hi];
                    v0 + (delta - d0) * (v1 - v0) / (d1 - d0)
                }
            }
        })
    }
}
