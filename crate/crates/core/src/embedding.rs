//! The embedding criterion: boundedness of the term
//! `E_n = (1 / (omega(1/n) n^(1/q))) * max_k k^(1/q) / prefix_sum(k)^(1/p)`
//! characterizes the inclusion of the weighted variation class into the
//! gauge class. The limsup cannot be computed, so [`embed_report`] samples
//! `E_n` geometrically and reports a verdict together with everything needed
//! to re-derive it.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::sequences::{ModulusOfContinuity, WatermanSequence};
use crate::stepfn::StepFunction;
use crate::variation::variation_exact;

#[derive(Debug, Clone)]
pub struct EmbeddingParams {
    pub seq: WatermanSequence,
    pub modulus: ModulusOfContinuity,
    pub p: f64,
    pub q: f64,
}

impl EmbeddingParams {
    pub fn new(
        seq: WatermanSequence,
        modulus: ModulusOfContinuity,
        p: f64,
        q: f64,
    ) -> Result<Self> {
        for (name, v) in [("p", p), ("q", q)] {
            if !(v.is_finite() && v >= 1.0) {
                return Err(Error::InvalidArgument(format!(
                    "{name} must satisfy {name} >= 1, got {v}"
                )));
            }
        }
        Ok(EmbeddingParams {
            seq,
            modulus,
            p,
            q,
        })
    }
}

fn gauge_at_scale(params: &EmbeddingParams, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("scale n must be >= 1".into()));
    }
    let value = params.modulus.eval(1.0 / n as f64)?;
    if value == 0.0 {
        return Err(Error::DegenerateModulus { n });
    }
    Ok(value)
}

fn root_pow(x: f64, inv: f64) -> f64 {
    if inv == 1.0 {
        x
    } else {
        x.powf(inv)
    }
}

/// The criterion term `E_n` together with the smallest k attaining its
/// inner maximum, in one scan. No unimodality of the inner term is assumed.
pub fn criterion_term_with_argmax(params: &EmbeddingParams, n: usize) -> Result<(f64, usize)> {
    let gauge = gauge_at_scale(params, n)?;
    let inv_q = 1.0 / params.q;
    let inv_p = 1.0 / params.p;
    let (max_val, argmax) = params.seq.with_prefix(n, |prefix| {
        let mut best = f64::NEG_INFINITY;
        let mut best_k = 1;
        for k in 1..=n {
            let v = root_pow(k as f64, inv_q) / root_pow(prefix[k - 1], inv_p);
            if v > best {
                best = v;
                best_k = k;
            }
        }
        (best, best_k)
    });
    Ok((max_val / (gauge * root_pow(n as f64, inv_q)), argmax))
}

/// The criterion term `E_n`.
pub fn criterion_term(params: &EmbeddingParams, n: usize) -> Result<f64> {
    criterion_term_with_argmax(params, n).map(|(e, _)| e)
}

/// Smallest k attaining the inner maximum of `E_n`.
pub fn criterion_argmax(params: &EmbeddingParams, n: usize) -> Result<usize> {
    criterion_term_with_argmax(params, n).map(|(_, k)| k)
}

/// Simplified term `1 / (omega(1/n) prefix_sum(n)^(1/p))`, valid when
/// `p >= q` (the inner maximum then sits at k = n).
pub fn corollary_term(params: &EmbeddingParams, n: usize) -> Result<f64> {
    if params.p < params.q {
        return Err(Error::CorollaryInapplicable {
            p: params.p,
            q: params.q,
        });
    }
    let gauge = gauge_at_scale(params, n)?;
    let lam = params.seq.reciprocal_prefix_sum(n)?;
    Ok(1.0 / (gauge * lam.powf(1.0 / params.p)))
}

/// Right-hand side of the modulus bound:
/// `V(f) * ((1/n) max_k k / prefix_sum(k)^(q/p))^(1/q)`.
///
/// The variation is computed in exact mode; grids past the limit propagate
/// the refusal.
pub fn sufficiency_bound(f: &StepFunction, params: &EmbeddingParams, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("scale n must be >= 1".into()));
    }
    let total_variation = variation_exact(f, &params.seq, params.p)?.value;
    let ratio = params.q / params.p;
    let inner = params.seq.with_prefix(n, |prefix| {
        (1..=n)
            .map(|k| (k as f64) / prefix[k - 1].powf(ratio))
            .fold(f64::NEG_INFINITY, f64::max)
    });
    Ok(total_variation * (inner / n as f64).powf(1.0 / params.q))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Bounded,
    Divergent,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Verdict::Bounded => "bounded",
            Verdict::Divergent => "divergent",
            Verdict::Inconclusive => "inconclusive",
        };
        f.write_str(s)
    }
}

/// Sampled criterion terms plus the heuristic verdict derived from them.
///
/// Verdict thresholds are desk-scale policy, which is why the raw samples
/// are part of the report: callers can always re-judge.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmbeddingReport {
    pub sampled_n: Vec<usize>,
    pub terms: Vec<f64>,
    pub argmax_k: Vec<usize>,
    pub sup_term: f64,
    /// Least-squares slope of `log E_n` against `log n` over the last half
    /// of the samples.
    pub slope: f64,
    pub verdict: Verdict,
}

const SLOPE_FLAT: f64 = 0.05;
const PLATEAU_RATIO: f64 = 1.1;
const GROWTH_FACTOR: f64 = 10.0;

fn sample_scales(n_max: usize, samples: usize) -> Vec<usize> {
    let mut ns: Vec<usize> = (0..samples)
        .map(|j| {
            let shift = (samples - 1 - j) as u32;
            n_max.checked_shr(shift).unwrap_or(0).max(2)
        })
        .collect();
    ns.dedup();
    ns
}

fn fit_slope(ns: &[usize], terms: &[f64]) -> f64 {
    let start = ns.len() / 2;
    let xs: Vec<f64> = ns[start..].iter().map(|&n| (n as f64).ln()).collect();
    let ys: Vec<f64> = terms[start..].iter().map(|&e| e.ln()).collect();
    let count = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / count;
    let my = ys.iter().sum::<f64>() / count;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return 0.0;
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    sxy / sxx
}

fn median(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

/// Samples `E_n` on a geometric grid (ratio 2) up to `n_max` and derives a
/// verdict: `bounded` when the tail is flat and not above the bulk,
/// `divergent` when the tail grows steadily, `inconclusive` otherwise.
pub fn embed_report(
    params: &EmbeddingParams,
    n_max: usize,
    samples: usize,
) -> Result<EmbeddingReport> {
    if n_max < 16 {
        return Err(Error::InvalidArgument(format!(
            "n_max must be >= 16, got {n_max}"
        )));
    }
    if samples < 8 {
        return Err(Error::InvalidArgument(format!(
            "samples must be >= 8, got {samples}"
        )));
    }
    let ns = sample_scales(n_max, samples);
    let evaluated: Result<Vec<(f64, usize)>> = {
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            ns.par_iter().map(|&n| criterion_term_with_argmax(params, n)).collect()
        }
        #[cfg(not(feature = "parallel"))]
        {
            ns.iter().map(|&n| criterion_term_with_argmax(params, n)).collect()
        }
    };
    let evaluated = evaluated?;
    let terms: Vec<f64> = evaluated.iter().map(|&(e, _)| e).collect();
    let argmax_k: Vec<usize> = evaluated.iter().map(|&(_, k)| k).collect();
    let sup_term = terms.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    let slope = fit_slope(&ns, &terms);

    let len = terms.len();
    let quarter = len - (len + 3) / 4;
    let tail_max = terms[quarter..]
        .iter()
        .fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    let med = median(&terms);
    let verdict = if slope < SLOPE_FLAT && tail_max <= PLATEAU_RATIO * med {
        Verdict::Bounded
    } else if slope > SLOPE_FLAT && *terms.last().unwrap() > GROWTH_FACTOR * terms[0] {
        Verdict::Divergent
    } else {
        Verdict::Inconclusive
    };
    Ok(EmbeddingReport {
        sampled_n: ns,
        terms,
        argmax_k,
        sup_term,
        slope,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel_close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
    }

    fn params(alpha_or_const: (bool, f64), beta: f64, p: f64, q: f64) -> EmbeddingParams {
        let seq = if alpha_or_const.0 {
            WatermanSequence::power(alpha_or_const.1).unwrap()
        } else {
            WatermanSequence::constant(alpha_or_const.1).unwrap()
        };
        EmbeddingParams::new(seq, ModulusOfContinuity::power(beta).unwrap(), p, q).unwrap()
    }

    #[test]
    fn criterion_term_examples() {
        let flat_linear = params((false, 1.0), 1.0, 1.0, 1.0);
        assert!(rel_close(criterion_term(&flat_linear, 10).unwrap(), 1.0, 1e-12));

        let flat_square = params((false, 1.0), 2.0, 1.0, 1.0);
        assert!(rel_close(criterion_term(&flat_square, 10).unwrap(), 10.0, 1e-12));

        let mixed = params((false, 1.0), 0.5, 2.0, 1.0);
        assert!(rel_close(criterion_term(&mixed, 100).unwrap(), 1.0, 1e-12));
        assert_eq!(criterion_argmax(&mixed, 100).unwrap(), 100);
    }

    #[test]
    fn corollary_term_examples() {
        let flat_linear = params((false, 1.0), 1.0, 1.0, 1.0);
        assert!(rel_close(corollary_term(&flat_linear, 10).unwrap(), 1.0, 1e-12));

        let mixed = params((false, 1.0), 0.5, 2.0, 1.0);
        assert!(rel_close(corollary_term(&mixed, 100).unwrap(), 1.0, 1e-12));

        let harmonic = params((true, 1.0), 1.0, 1.0, 1.0);
        assert!(rel_close(
            corollary_term(&harmonic, 4).unwrap(),
            48.0 / 25.0,
            1e-12
        ));

        let inapplicable = params((false, 1.0), 1.0, 1.0, 2.0);
        assert!(matches!(
            corollary_term(&inapplicable, 10),
            Err(Error::CorollaryInapplicable { .. })
        ));
    }

    #[test]
    fn degenerate_gauge_is_rejected() {
        let seq = WatermanSequence::power(1.0).unwrap();
        let zero_tail =
            ModulusOfContinuity::tabulated(vec![(0.0, 0.0), (0.5, 0.0), (1.0, 1.0)]).unwrap();
        let ps = EmbeddingParams::new(seq, zero_tail, 1.0, 1.0).unwrap();
        assert!(matches!(
            criterion_term(&ps, 10),
            Err(Error::DegenerateModulus { .. })
        ));
        assert!(matches!(
            embed_report(&ps, 1 << 10, 8),
            Err(Error::DegenerateModulus { .. })
        ));
    }

    #[test]
    fn sufficiency_bound_examples() {
        let flat = params((false, 1.0), 1.0, 1.0, 1.0);
        let ind = StepFunction::from_breakpoints(vec![0.0, 0.5, 1.0], vec![0.0, 1.0], false)
            .unwrap();
        let bound = sufficiency_bound(&ind, &flat, 4).unwrap();
        assert!(rel_close(bound, 0.25, 1e-12));
        let measured = crate::modulus::integral_modulus(&ind, 0.25, 1.0).unwrap();
        assert!(rel_close(measured, 0.25, 1e-12)); // the bound is tight here

        let c = StepFunction::constant(7.0).unwrap();
        assert_eq!(sufficiency_bound(&c, &flat, 8).unwrap(), 0.0);

        let quarters = StepFunction::from_breakpoints(
            vec![0.0, 0.25, 0.5, 0.75, 1.0],
            vec![0.0, 10.0, 9.0, 20.0],
            false,
        )
        .unwrap();
        assert!(rel_close(sufficiency_bound(&quarters, &flat, 2).unwrap(), 11.0, 1e-12));
    }

    #[test]
    fn report_baselines() {
        let bounded = embed_report(&params((false, 1.0), 1.0, 1.0, 1.0), 1 << 14, 11).unwrap();
        assert_eq!(bounded.verdict, Verdict::Bounded);
        for &e in &bounded.terms {
            assert!(rel_close(e, 1.0, 1e-12));
        }

        let divergent = embed_report(&params((false, 1.0), 2.0, 1.0, 1.0), 1 << 14, 11).unwrap();
        assert_eq!(divergent.verdict, Verdict::Divergent);
        assert!((divergent.slope - 1.0).abs() <= 0.01);
        for (&n, &e) in divergent.sampled_n.iter().zip(&divergent.terms) {
            assert!(rel_close(e, n as f64, 1e-12));
        }
    }

    #[test]
    fn report_validates_scales() {
        let ps = params((false, 1.0), 1.0, 1.0, 1.0);
        assert!(embed_report(&ps, 8, 8).is_err());
        assert!(embed_report(&ps, 64, 4).is_err());
    }

    #[test]
    fn gauge_scaling_divides_terms_and_keeps_verdict() {
        // tabulated gauges support exact scalar scaling of the values
        let nodes: Vec<(f64, f64)> = (0..=1000)
            .map(|i| {
                let d = i as f64 / 1000.0;
                (d, d.powf(0.8))
            })
            .collect();
        let scaled_nodes: Vec<(f64, f64)> = nodes.iter().map(|&(d, v)| (d, 4.0 * v)).collect();
        let seq = WatermanSequence::power(0.4).unwrap();
        let base = EmbeddingParams::new(
            seq.clone(),
            ModulusOfContinuity::tabulated(nodes).unwrap(),
            1.5,
            1.2,
        )
        .unwrap();
        let scaled = EmbeddingParams::new(
            seq,
            ModulusOfContinuity::tabulated(scaled_nodes).unwrap(),
            1.5,
            1.2,
        )
        .unwrap();
        let a = embed_report(&base, 1 << 12, 10).unwrap();
        let b = embed_report(&scaled, 1 << 12, 10).unwrap();
        assert_eq!(a.verdict, b.verdict);
        for (ea, eb) in a.terms.iter().zip(&b.terms) {
            assert!(rel_close(*ea, 4.0 * eb, 1e-12));
        }
    }
}
