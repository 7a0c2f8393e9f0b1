//! Piecewise-constant test functions on the unit interval.
//!
//! Every analysis in this crate is exact because it is restricted to step
//! functions: integrals become finite sums over cells and suprema become
//! maxima over finite candidate sets. The value convention is
//! right-continuous at interior breakpoints, with `eval(1)` equal to the last
//! piece value.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A step function on [0, 1]: `breakpoints[0] = 0 < ... < breakpoints[m] = 1`
/// and `values[j]` on `[breakpoints[j], breakpoints[j+1])`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepFunction {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
    periodic: bool,
}

#[derive(Deserialize)]
struct RawStepFunction {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
    periodic: bool,
}

impl<'de> Deserialize<'de> for StepFunction {
    fn deserialize<D>(deserializer: D) -> std::result::Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        let raw = RawStepFunction::deserialize(deserializer)?;
        StepFunction::from_breakpoints(raw.breakpoints, raw.values, raw.periodic)
            .map_err(serde::de::Error::custom)
    }
}

impl StepFunction {
    pub fn from_breakpoints(
        breakpoints: Vec<f64>,
        values: Vec<f64>,
        periodic: bool,
    ) -> Result<Self> {
        if values.is_empty() || breakpoints.len() != values.len() + 1 {
            return Err(Error::InvalidArgument(format!(
                "need one more breakpoint than pieces, got {} breakpoints and {} values",
                breakpoints.len(),
                values.len()
            )));
        }
        if breakpoints[0] != 0.0 || *breakpoints.last().unwrap() != 1.0 {
            return Err(Error::InvalidArgument(
                "breakpoints must start at 0 and end at 1 exactly".into(),
            ));
        }
        for w in breakpoints.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::InvalidArgument(format!(
                    "breakpoints must be strictly increasing, got {} then {}",
                    w[0], w[1]
                )));
            }
        }
        if breakpoints.iter().chain(values.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(
                "breakpoints and values must be finite".into(),
            ));
        }
        Ok(StepFunction {
            breakpoints,
            values,
            periodic,
        })
    }

    /// The constant function on [0, 1].
    pub fn constant(value: f64) -> Result<Self> {
        Self::from_breakpoints(vec![0.0, 1.0], vec![value], false)
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn piece_count(&self) -> usize {
        self.values.len()
    }

    pub fn is_periodic(&self) -> bool {
        self.periodic
    }

    /// Point evaluation. Non-periodic functions reject arguments outside
    /// [0, 1]; periodic ones reduce the argument modulo 1 first.
    pub fn eval(&self, x: f64) -> Result<f64> {
        if !x.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "evaluation point must be finite, got {x}"
            )));
        }
        let x = if self.periodic {
            x.rem_euclid(1.0)
        } else {
            if !(0.0..=1.0).contains(&x) {
                return Err(Error::InvalidArgument(format!(
                    "evaluation point {x} outside [0, 1]"
                )));
            }
            x
        };
        Ok(self.eval_in_domain(x))
    }

    fn eval_in_domain(&self, x: f64) -> f64 {
        let idx = self.breakpoints.partition_point(|&t| t <= x);
        // idx is the first breakpoint strictly past x; x = 1 falls in the
        // last piece.
        self.values[(idx - 1).min(self.values.len() - 1)]
    }

    /// Change of the function over a closed interval: `eval(b) - eval(a)`.
    pub fn increment_over(&self, a: f64, b: f64) -> Result<f64> {
        if !(a <= b) {
            return Err(Error::InvalidArgument(format!(
                "interval endpoints out of order: [{a}, {b}]"
            )));
        }
        if !self.periodic && !(0.0 <= a && b <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "interval [{a}, {b}] outside [0, 1]"
            )));
        }
        Ok(self.eval(b)? - self.eval(a)?)
    }

    /// Value at grid point `idx` under the right-continuity convention.
    pub(crate) fn grid_value(&self, idx: usize) -> f64 {
        self.values[idx.min(self.values.len() - 1)]
    }

    /// Index of `x` in the breakpoint list (exact match only).
    pub(crate) fn breakpoint_index(&self, x: f64) -> Option<usize> {
        self.breakpoints
            .binary_search_by(|t| t.partial_cmp(&x).unwrap())
            .ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn indicator_upper_half() -> StepFunction {
        StepFunction::from_breakpoints(vec![0.0, 0.5, 1.0], vec![0.0, 1.0], false).unwrap()
    }

    fn quarters() -> StepFunction {
        StepFunction::from_breakpoints(
            vec![0.0, 0.25, 0.5, 0.75, 1.0],
            vec![0.0, 10.0, 9.0, 20.0],
            false,
        )
        .unwrap()
    }

    #[test]
    fn construction_validates() {
        assert!(StepFunction::from_breakpoints(vec![0.0, 1.0], vec![7.0], false).is_ok());
        assert!(
            StepFunction::from_breakpoints(vec![0.0, 0.5, 0.25, 1.0], vec![1.0, 2.0, 3.0], false)
                .is_err()
        );
        assert!(StepFunction::from_breakpoints(vec![0.0, 0.5], vec![1.0], false).is_err());
        assert!(StepFunction::from_breakpoints(vec![0.1, 1.0], vec![1.0], false).is_err());
        assert!(StepFunction::from_breakpoints(vec![0.0, 1.0], vec![f64::NAN], false).is_err());
        assert!(StepFunction::from_breakpoints(vec![0.0, 0.5, 1.0], vec![1.0], false).is_err());
    }

    #[test]
    fn eval_is_right_continuous() {
        let f = indicator_upper_half();
        assert_eq!(f.eval(0.5).unwrap(), 1.0);
        assert_eq!(f.eval(0.4999).unwrap(), 0.0);
        assert_eq!(f.eval(1.0).unwrap(), 1.0);
        let c = StepFunction::constant(7.0).unwrap();
        assert_eq!(c.eval(1.0).unwrap(), 7.0);
        assert!(f.eval(1.1).is_err());
        assert!(f.eval(-0.1).is_err());
    }

    #[test]
    fn periodic_eval_wraps() {
        let f = StepFunction::from_breakpoints(vec![0.0, 0.5, 1.0], vec![0.0, 1.0], true).unwrap();
        assert_eq!(f.eval(1.5).unwrap(), 1.0);
        assert_eq!(f.eval(-0.25).unwrap(), 1.0);
        assert_eq!(f.eval(1.0).unwrap(), 0.0); // 1 wraps to 0 in the periodic reading
    }

    #[test]
    fn increments() {
        let f = indicator_upper_half();
        assert_eq!(f.increment_over(0.0, 1.0).unwrap(), 1.0);
        assert_eq!(f.increment_over(0.0, 0.4).unwrap(), 0.0);
        assert_eq!(quarters().increment_over(0.0, 1.0).unwrap(), 20.0);
        assert_eq!(f.increment_over(0.3, 0.3).unwrap(), 0.0);
        assert!(f.increment_over(0.5, 0.4).is_err());
        assert!(f.increment_over(-0.1, 0.4).is_err());
    }

    #[test]
    fn serialization_round_trips_bit_exactly() {
        let f = quarters();
        let text = serde_json::to_string(&f).unwrap();
        let back: StepFunction = serde_json::from_str(&text).unwrap();
        assert_eq!(back, f);
        assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }

    #[test]
    fn deserialization_validates() {
        let bad = r#"{"breakpoints":[0.0,0.6,0.3,1.0],"values":[1.0,2.0,3.0],"periodic":false}"#;
        assert!(serde_json::from_str::<StepFunction>(bad).is_err());
    }

    fn arb_step() -> impl Strategy<Value = StepFunction> {
        (
            proptest::collection::vec(1u32..63, 0..6),
            proptest::collection::vec(-8i32..8, 1..8),
        )
            .prop_map(|(cuts, vals)| {
                let mut bpts: Vec<f64> = cuts.iter().map(|&c| c as f64 / 64.0).collect();
                bpts.push(0.0);
                bpts.push(1.0);
                bpts.sort_by(|a, b| a.partial_cmp(b).unwrap());
                bpts.dedup();
                let n = bpts.len() - 1;
                let values: Vec<f64> = (0..n)
                    .map(|i| vals[i % vals.len()] as f64 / 4.0)
                    .collect();
                StepFunction::from_breakpoints(bpts, values, false).unwrap()
            })
    }

    proptest! {
        // dyadic grids and values keep every difference exact in binary
        #[test]
        fn increment_is_additive(f in arb_step(), a in 0u32..=64, b in 0u32..=64, c in 0u32..=64) {
            let mut pts = [a, b, c];
            pts.sort_unstable();
            let (a, b, c) = (pts[0] as f64 / 64.0, pts[1] as f64 / 64.0, pts[2] as f64 / 64.0);
            let whole = f.increment_over(a, c).unwrap();
            let split = f.increment_over(a, b).unwrap() + f.increment_over(b, c).unwrap();
            prop_assert_eq!(whole, split);
        }
    }
}
