//! p-Λ-variation of step functions.
//!
//! The variation of a step function is a supremum over finite families of
//! nonoverlapping closed subintervals. Because the function is constant
//! between breakpoints, restricting interval endpoints to the breakpoint grid
//! is lossless, which turns the supremum into a finite combinatorial
//! optimization:
//!
//! * [`variation_exact`] runs a depth-first search over grid families with
//!   branch-and-bound pruning (optimistic completion: every remaining slot
//!   filled with the largest single-interval change on the unexplored
//!   suffix). It refuses grids larger than the caller's limit.
//! * [`variation_greedy`] returns a certified lower bound on any grid: it
//!   starts from the monotone-run family and hill-climbs over single edits
//!   (merge an adjacent pair, collapse to the spanning interval, drop an
//!   interval, extend an endpoint one grid step).
//!
//! A family's value pairs the sorted absolute changes with the weights in
//! order: since the weights are nondecreasing, the nonincreasing arrangement
//! of changes dominates every other assignment.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sequences::WatermanSequence;
use crate::stepfn::StepFunction;

/// Largest breakpoint grid the exhaustive search accepts by default.
pub const EXACT_GRID_LIMIT: usize = 16;

/// A finite family of nondegenerate closed intervals with pairwise disjoint
/// interiors (shared endpoints allowed), kept sorted by left endpoint.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct IntervalFamily {
    intervals: Vec<(f64, f64)>,
}

impl<'de> Deserialize<'de> for IntervalFamily {
    fn deserialize<D>(deserializer: D) -> std::result::Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        let raw = Vec::<(f64, f64)>::deserialize(deserializer)?;
        IntervalFamily::new(raw).map_err(serde::de::Error::custom)
    }
}

impl IntervalFamily {
    pub fn new(mut intervals: Vec<(f64, f64)>) -> Result<Self> {
        for &(a, b) in &intervals {
            if !(a.is_finite() && b.is_finite() && 0.0 <= a && a < b && b <= 1.0) {
                return Err(Error::InvalidArgument(format!(
                    "interval [{a}, {b}] must be nondegenerate and inside [0, 1]"
                )));
            }
        }
        intervals.sort_by(|x, y| x.partial_cmp(y).unwrap());
        for w in intervals.windows(2) {
            if w[1].0 < w[0].1 {
                return Err(Error::InvalidArgument(format!(
                    "intervals [{}, {}] and [{}, {}] overlap",
                    w[0].0, w[0].1, w[1].0, w[1].1
                )));
            }
        }
        Ok(IntervalFamily { intervals })
    }

    pub fn empty() -> Self {
        IntervalFamily { intervals: Vec::new() }
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }
}

/// Outcome of a variation computation together with the family attaining it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VariationResult {
    pub value: f64,
    pub witness: IntervalFamily,
    /// True when the value is the exact supremum, false for the greedy
    /// lower bound.
    pub exact: bool,
}

fn validate_exponent(p: f64) -> Result<()> {
    if !(p.is_finite() && p >= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "variation exponent must satisfy p >= 1, got {p}"
        )));
    }
    Ok(())
}

/// `(sum_j changes[j]^p / weight(j+1))^(1/p)` for changes already sorted in
/// nonincreasing order.
fn weighted_value(changes_desc: &[f64], seq: &WatermanSequence, p: f64) -> f64 {
    if changes_desc.is_empty() {
        return 0.0;
    }
    if p == 1.0 {
        changes_desc
            .iter()
            .enumerate()
            .map(|(j, &c)| c / seq.weight_unchecked(j + 1))
            .sum()
    } else {
        let total: f64 = changes_desc
            .iter()
            .enumerate()
            .map(|(j, &c)| c.powf(p) / seq.weight_unchecked(j + 1))
            .sum();
        total.powf(1.0 / p)
    }
}

fn sorted_value(changes: &[f64], seq: &WatermanSequence, p: f64) -> f64 {
    let mut sorted = changes.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
    weighted_value(&sorted, seq, p)
}

/// Value of a concrete family: absolute changes sorted nonincreasingly and
/// paired with the weights in order.
pub fn family_value(
    f: &StepFunction,
    family: &IntervalFamily,
    seq: &WatermanSequence,
    p: f64,
) -> Result<f64> {
    validate_exponent(p)?;
    let mut changes = Vec::with_capacity(family.len());
    for &(a, b) in family.intervals() {
        if f.breakpoint_index(a).is_none() || f.breakpoint_index(b).is_none() {
            return Err(Error::InvalidArgument(format!(
                "interval [{a}, {b}] has an endpoint off the breakpoint grid"
            )));
        }
        changes.push(f.increment_over(a, b)?.abs());
    }
    Ok(sorted_value(&changes, seq, p))
}

// Index-space search state shared by the exact search and the greedy climb.
struct Grid<'a> {
    vals: Vec<f64>,
    seq: &'a WatermanSequence,
    p: f64,
}

impl<'a> Grid<'a> {
    fn new(f: &StepFunction, seq: &'a WatermanSequence, p: f64) -> Self {
        let vals = (0..f.breakpoints().len())
            .map(|i| f.grid_value(i))
            .collect();
        Grid { vals, seq, p }
    }

    fn gap_count(&self) -> usize {
        self.vals.len() - 1
    }

    fn change(&self, s: usize, e: usize) -> f64 {
        (self.vals[e] - self.vals[s]).abs()
    }

    fn value_of(&self, fam: &[(usize, usize)]) -> f64 {
        let changes: Vec<f64> = fam.iter().map(|&(s, e)| self.change(s, e)).collect();
        sorted_value(&changes, self.seq, self.p)
    }
}

#[derive(Clone)]
struct Candidate {
    value: f64,
    witness: Vec<(usize, usize)>,
}

impl Candidate {
    fn none() -> Self {
        Candidate {
            value: f64::NEG_INFINITY,
            witness: Vec::new(),
        }
    }

    fn better_than(&self, other: &Candidate) -> bool {
        if self.value != other.value {
            return self.value > other.value;
        }
        witness_precedes(&self.witness, &other.witness)
    }
}

// Canonical order on equal-value witnesses: fewer intervals, then leftmost
// starts, then widest intervals (larger right endpoints win).
fn witness_precedes(a: &[(usize, usize)], b: &[(usize, usize)]) -> bool {
    if a.len() != b.len() {
        return a.len() < b.len();
    }
    for (x, y) in a.iter().zip(b.iter()) {
        if x.0 != y.0 {
            return x.0 < y.0;
        }
    }
    for (x, y) in a.iter().zip(b.iter()) {
        if x.1 != y.1 {
            return x.1 > y.1;
        }
    }
    false
}

struct ExactSearch<'a> {
    grid: Grid<'a>,
    // max_change[pos] = largest |vals[j] - vals[i]| over pos <= i < j
    max_change: Vec<f64>,
}

impl<'a> ExactSearch<'a> {
    fn new(grid: Grid<'a>) -> Self {
        let n = grid.vals.len();
        let mut max_change = vec![0.0f64; n];
        let mut hi = grid.vals[n - 1];
        let mut lo = grid.vals[n - 1];
        for pos in (0..n - 1).rev() {
            let v = grid.vals[pos];
            max_change[pos] = max_change[pos + 1].max((hi - v).max(v - lo));
            hi = hi.max(v);
            lo = lo.min(v);
        }
        ExactSearch { grid, max_change }
    }

    // Upper bound on any completion from `pos`: current changes plus every
    // remaining slot (one gap each) filled with the suffix's best single
    // change. Monotone in the multiset, hence a valid bound.
    fn completion_bound(&self, changes: &[f64], pos: usize) -> f64 {
        let slots = self.grid.gap_count() - pos;
        let cap = self.max_change[pos];
        let mut filled = Vec::with_capacity(changes.len() + slots);
        filled.extend_from_slice(changes);
        filled.extend(std::iter::repeat(cap).take(slots));
        sorted_value(&filled, self.grid.seq, self.grid.p)
    }

    fn dfs(
        &self,
        pos: usize,
        changes: &mut Vec<f64>,
        stack: &mut Vec<(usize, usize)>,
        best: &mut Candidate,
    ) {
        let value = sorted_value(changes, self.grid.seq, self.grid.p);
        if value > best.value
            || (value == best.value && witness_precedes(stack, &best.witness))
        {
            *best = Candidate {
                value,
                witness: stack.clone(),
            };
        }
        let m = self.grid.gap_count();
        if pos >= m {
            return;
        }
        // pruning must be strict so equal-value witnesses stay reachable
        if self.completion_bound(changes, pos) < best.value {
            return;
        }
        if self.max_change[pos] == 0.0 {
            // only zero changes remain; they never improve value or witness
            return;
        }
        for s in pos..m {
            for e in (s + 1)..=m {
                changes.push(self.grid.change(s, e));
                stack.push((s, e));
                self.dfs(e, changes, stack, best);
                changes.pop();
                stack.pop();
            }
        }
    }

    fn run_sequential(&self) -> Candidate {
        let mut best = Candidate::none();
        self.dfs(0, &mut Vec::new(), &mut Vec::new(), &mut best);
        best
    }

    #[cfg(feature = "parallel")]
    fn run_parallel(&self) -> Candidate {
        use rayon::prelude::*;
        let m = self.grid.gap_count();
        let mut firsts = Vec::new();
        for s in 0..m {
            for e in (s + 1)..=m {
                firsts.push((s, e));
            }
        }
        let empty = Candidate {
            value: 0.0,
            witness: Vec::new(),
        };
        // independent subtree searches; the tie-break comparator makes the
        // reduction order-independent
        firsts
            .into_par_iter()
            .map(|(s, e)| {
                let mut best = Candidate::none();
                let mut changes = vec![self.grid.change(s, e)];
                let mut stack = vec![(s, e)];
                self.dfs(e, &mut changes, &mut stack, &mut best);
                best
            })
            .reduce(
                || empty.clone(),
                |a, b| if b.better_than(&a) { b } else { a },
            )
    }
}

fn run_exact(
    f: &StepFunction,
    seq: &WatermanSequence,
    p: f64,
    limit: usize,
    parallel: bool,
) -> Result<VariationResult> {
    validate_exponent(p)?;
    let bpts = f.breakpoints();
    if bpts.len() > limit {
        return Err(Error::ExactModeRefused {
            breakpoints: bpts.len(),
            limit,
        });
    }
    let search = ExactSearch::new(Grid::new(f, seq, p));
    #[cfg(feature = "parallel")]
    let best = if parallel {
        search.run_parallel()
    } else {
        search.run_sequential()
    };
    #[cfg(not(feature = "parallel"))]
    let best = {
        let _ = parallel;
        search.run_sequential()
    };
    let witness = IntervalFamily::new(
        best.witness
            .iter()
            .map(|&(s, e)| (bpts[s], bpts[e]))
            .collect(),
    )?;
    Ok(VariationResult {
        value: best.value,
        witness,
        exact: true,
    })
}

/// Exact variation over the breakpoint grid, with the default grid limit.
pub fn variation_exact(
    f: &StepFunction,
    seq: &WatermanSequence,
    p: f64,
) -> Result<VariationResult> {
    run_exact(f, seq, p, EXACT_GRID_LIMIT, true)
}

/// Exact variation with a caller-chosen grid limit.
pub fn variation_exact_with_limit(
    f: &StepFunction,
    seq: &WatermanSequence,
    p: f64,
    limit: usize,
) -> Result<VariationResult> {
    run_exact(f, seq, p, limit, true)
}

/// Sequential variant of [`variation_exact`], kept for benchmarking the
/// parallel search against the plain depth-first one.
pub fn variation_exact_seq(
    f: &StepFunction,
    seq: &WatermanSequence,
    p: f64,
) -> Result<VariationResult> {
    run_exact(f, seq, p, EXACT_GRID_LIMIT, false)
}

fn monotone_runs(vals: &[f64]) -> Vec<(usize, usize)> {
    let m = vals.len() - 1;
    let mut runs = Vec::new();
    let mut i = 0;
    while i < m {
        if vals[i + 1] == vals[i] {
            i += 1;
            continue;
        }
        let rising = vals[i + 1] > vals[i];
        let start = i;
        let mut j = i + 1;
        while j < m && (vals[j + 1] == vals[j] || (vals[j + 1] > vals[j]) == rising) {
            j += 1;
        }
        let mut end = j;
        while vals[end] == vals[end - 1] {
            end -= 1;
        }
        runs.push((start, end));
        i = j;
    }
    runs
}

fn climb_moves(fam: &[(usize, usize)], gaps: usize) -> Vec<Vec<(usize, usize)>> {
    let mut moves = Vec::new();
    for i in 0..fam.len().saturating_sub(1) {
        let mut next = fam.to_vec();
        next[i] = (fam[i].0, fam[i + 1].1);
        next.remove(i + 1);
        moves.push(next);
    }
    if fam.len() >= 2 {
        moves.push(vec![(fam[0].0, fam[fam.len() - 1].1)]);
    }
    for i in 0..fam.len() {
        let mut next = fam.to_vec();
        next.remove(i);
        moves.push(next);
    }
    for i in 0..fam.len() {
        let left_floor = if i == 0 { 0 } else { fam[i - 1].1 };
        if fam[i].0 > left_floor {
            let mut next = fam.to_vec();
            next[i] = (fam[i].0 - 1, fam[i].1);
            moves.push(next);
        }
        let right_ceil = if i + 1 == fam.len() { gaps } else { fam[i + 1].0 };
        if fam[i].1 < right_ceil {
            let mut next = fam.to_vec();
            next[i] = (fam[i].0, fam[i].1 + 1);
            moves.push(next);
        }
    }
    moves
}

/// Certified lower bound on the variation: hill-climbing from the
/// monotone-run family. Works on any grid size; `exact` is false in the
/// result.
pub fn variation_greedy(
    f: &StepFunction,
    seq: &WatermanSequence,
    p: f64,
) -> Result<VariationResult> {
    validate_exponent(p)?;
    let grid = Grid::new(f, seq, p);
    let gaps = grid.gap_count();
    let mut fam = monotone_runs(&grid.vals);
    let mut value = grid.value_of(&fam);
    loop {
        let mut improved: Option<(f64, Vec<(usize, usize)>)> = None;
        for next in climb_moves(&fam, gaps) {
            let v = grid.value_of(&next);
            if v <= value {
                continue;
            }
            let take = match &improved {
                None => true,
                Some((bv, bw)) => v > *bv || (v == *bv && witness_precedes(&next, bw)),
            };
            if take {
                improved = Some((v, next));
            }
        }
        match improved {
            Some((v, next)) => {
                value = v;
                fam = next;
            }
            None => break,
        }
    }
    let bpts = f.breakpoints();
    let witness = IntervalFamily::new(fam.iter().map(|&(s, e)| (bpts[s], bpts[e])).collect())?;
    Ok(VariationResult {
        value,
        witness,
        exact: false,
    })
}

/// Exact variation when the grid fits the default limit, greedy lower bound
/// otherwise.
pub fn variation(f: &StepFunction, seq: &WatermanSequence, p: f64) -> Result<VariationResult> {
    if f.breakpoints().len() <= EXACT_GRID_LIMIT {
        variation_exact(f, seq, p)
    } else {
        variation_greedy(f, seq, p)
    }
}

/// `|f(0)| + V(f)`, the norm of the weighted variation space.
pub fn variation_norm(f: &StepFunction, seq: &WatermanSequence, p: f64) -> Result<f64> {
    let v = variation(f, seq, p)?;
    Ok(f.eval(0.0)?.abs() + v.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel_close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
    }

    fn quarters() -> StepFunction {
        StepFunction::from_breakpoints(
            vec![0.0, 0.25, 0.5, 0.75, 1.0],
            vec![0.0, 10.0, 9.0, 20.0],
            false,
        )
        .unwrap()
    }

    fn indicator_upper_half() -> StepFunction {
        StepFunction::from_breakpoints(vec![0.0, 0.5, 1.0], vec![0.0, 1.0], false).unwrap()
    }

    fn front_loaded() -> WatermanSequence {
        WatermanSequence::explicit(vec![1.0, 100.0]).unwrap()
    }

    fn flat() -> WatermanSequence {
        WatermanSequence::constant(1.0).unwrap()
    }

    #[test]
    fn family_value_examples() {
        let f = quarters();
        let fam =
            IntervalFamily::new(vec![(0.0, 0.25), (0.25, 0.5), (0.5, 0.75)]).unwrap();
        let v = family_value(&f, &fam, &front_loaded(), 1.0).unwrap();
        assert!(rel_close(v, 11.0 + 10.0 / 100.0 + 1.0 / 100.0, 1e-12));

        let whole = IntervalFamily::new(vec![(0.0, 1.0)]).unwrap();
        assert_eq!(family_value(&f, &whole, &front_loaded(), 1.0).unwrap(), 20.0);

        let ind = indicator_upper_half();
        let v = family_value(&ind, &whole, &flat(), 2.0).unwrap();
        assert!(rel_close(v, 1.0, 1e-12));
    }

    #[test]
    fn family_validation() {
        assert!(IntervalFamily::new(vec![(0.3, 0.3)]).is_err());
        assert!(IntervalFamily::new(vec![(0.0, 0.5), (0.4, 1.0)]).is_err());
        assert!(IntervalFamily::new(vec![(0.0, 0.5), (0.5, 1.0)]).is_ok());
        let f = quarters();
        let off_grid = IntervalFamily::new(vec![(0.0, 0.3)]).unwrap();
        assert!(family_value(&f, &off_grid, &flat(), 1.0).is_err());
        let fam = IntervalFamily::new(vec![(0.0, 1.0)]).unwrap();
        assert!(family_value(&f, &fam, &flat(), 0.5).is_err());
    }

    #[test]
    fn exact_merge_beats_runs() {
        let res = variation_exact(&quarters(), &front_loaded(), 1.0).unwrap();
        assert_eq!(res.value, 20.0);
        assert_eq!(res.witness.intervals(), &[(0.0, 1.0)]);
        assert!(res.exact);
    }

    #[test]
    fn exact_flat_weights() {
        let res = variation_exact(&quarters(), &flat(), 1.0).unwrap();
        assert!(rel_close(res.value, 22.0, 1e-12));
        // 22 is attained by two families differing in the last right
        // endpoint; the canonical witness takes the wider one
        assert_eq!(
            res.witness.intervals(),
            &[(0.0, 0.25), (0.25, 0.5), (0.5, 1.0)]
        );
        assert!(rel_close(
            family_value(&quarters(), &res.witness, &flat(), 1.0).unwrap(),
            res.value,
            1e-12
        ));
    }

    #[test]
    fn exact_constant_is_zero() {
        let c = StepFunction::constant(7.0).unwrap();
        let res = variation_exact(&c, &flat(), 1.5).unwrap();
        assert_eq!(res.value, 0.0);
        assert!(res.witness.is_empty());
    }

    #[test]
    fn exact_refuses_large_grids() {
        let n = 40;
        let bpts: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
        let vals: Vec<f64> = (0..n).map(|i| (i % 2) as f64).collect();
        let f = StepFunction::from_breakpoints(bpts, vals, false).unwrap();
        assert!(matches!(
            variation_exact(&f, &flat(), 1.0),
            Err(Error::ExactModeRefused { .. })
        ));
        assert!(variation_greedy(&f, &flat(), 1.0).is_ok());
    }

    #[test]
    fn sequential_matches_parallel() {
        let f = quarters();
        for p in [1.0, 1.5, 2.0] {
            let a = variation_exact(&f, &front_loaded(), p).unwrap();
            let b = variation_exact_seq(&f, &front_loaded(), p).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn greedy_examples() {
        let res = variation_greedy(&quarters(), &front_loaded(), 1.0).unwrap();
        assert_eq!(res.value, 20.0);
        assert!(!res.exact);

        let res = variation_greedy(&quarters(), &flat(), 1.0).unwrap();
        assert!(rel_close(res.value, 22.0, 1e-12));

        let c = StepFunction::constant(7.0).unwrap();
        assert_eq!(variation_greedy(&c, &flat(), 1.0).unwrap().value, 0.0);
    }

    #[test]
    fn norm_examples() {
        assert!(rel_close(
            variation_norm(&indicator_upper_half(), &flat(), 1.0).unwrap(),
            1.0,
            1e-12
        ));
        let c = StepFunction::constant(7.0).unwrap();
        assert_eq!(variation_norm(&c, &flat(), 1.0).unwrap(), 7.0);
        assert!(rel_close(
            variation_norm(&quarters(), &flat(), 1.0).unwrap(),
            22.0,
            1e-12
        ));
    }

    #[test]
    fn sorted_assignment_dominates_permutations() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for case in 0..200 {
            let n = rng.gen_range(1..=6);
            let changes: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..10.0)).collect();
            let seq = if case % 2 == 0 {
                WatermanSequence::constant(rng.gen_range(0.5..3.0)).unwrap()
            } else {
                WatermanSequence::power(rng.gen_range(0.0..=1.0)).unwrap()
            };
            let p = [1.0, 1.5, 2.0][case % 3];
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut rng);
            let assigned: f64 = perm
                .iter()
                .enumerate()
                .map(|(j, &i)| changes[i].powf(p) / seq.weight(j + 1).unwrap())
                .sum();
            let assigned = assigned.powf(1.0 / p);
            let optimal = sorted_value(&changes, &seq, p);
            assert!(assigned <= optimal * (1.0 + 1e-12));
        }
    }

    #[test]
    fn greedy_never_exceeds_exact() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for case in 0..60 {
            let pieces = rng.gen_range(1..=7);
            let mut bpts: Vec<f64> = (1..pieces)
                .map(|_| rng.gen_range(0.05..0.95))
                .collect();
            bpts.push(0.0);
            bpts.push(1.0);
            bpts.sort_by(|a, b| a.partial_cmp(b).unwrap());
            bpts.dedup();
            let vals: Vec<f64> = (0..bpts.len() - 1)
                .map(|_| rng.gen_range(-5.0..5.0))
                .collect();
            let f = StepFunction::from_breakpoints(bpts, vals, false).unwrap();
            let seq = WatermanSequence::power(rng.gen_range(0.0..=1.0)).unwrap();
            let p = [1.0, 1.5, 2.0][case % 3];
            let exact = variation_exact(&f, &seq, p).unwrap().value;
            let greedy = variation_greedy(&f, &seq, p).unwrap().value;
            assert!(greedy <= exact * (1.0 + 1e-12) + 1e-15);
        }
    }

    #[test]
    fn translation_and_scaling() {
        // dyadic values keep translation exact in binary arithmetic
        let f = StepFunction::from_breakpoints(
            vec![0.0, 0.25, 0.5, 0.75, 1.0],
            vec![0.0, 1.25, -0.5, 2.0],
            false,
        )
        .unwrap();
        let seq = WatermanSequence::power(0.5).unwrap();
        for p in [1.0, 2.0] {
            let base = variation_exact(&f, &seq, p).unwrap().value;

            let shifted_vals: Vec<f64> = f.values().iter().map(|v| v + 0.75).collect();
            let shifted =
                StepFunction::from_breakpoints(f.breakpoints().to_vec(), shifted_vals, false)
                    .unwrap();
            assert_eq!(variation_exact(&shifted, &seq, p).unwrap().value, base);

            let scaled_vals: Vec<f64> = f.values().iter().map(|v| v * -3.5).collect();
            let scaled =
                StepFunction::from_breakpoints(f.breakpoints().to_vec(), scaled_vals, false)
                    .unwrap();
            assert!(rel_close(
                variation_exact(&scaled, &seq, p).unwrap().value,
                3.5 * base,
                1e-12
            ));
        }
    }

    #[test]
    fn classical_case_p_monotone() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..40 {
            let pieces = rng.gen_range(1..=6);
            let mut bpts: Vec<f64> = (1..pieces)
                .map(|_| rng.gen_range(0.05..0.95))
                .collect();
            bpts.push(0.0);
            bpts.push(1.0);
            bpts.sort_by(|a, b| a.partial_cmp(b).unwrap());
            bpts.dedup();
            let vals: Vec<f64> = (0..bpts.len() - 1)
                .map(|_| rng.gen_range(-5.0..5.0))
                .collect();
            let f = StepFunction::from_breakpoints(bpts, vals, false).unwrap();
            let seq = flat();
            let v1 = variation_exact(&f, &seq, 1.0).unwrap().value;
            let v2 = variation_exact(&f, &seq, 2.0).unwrap().value;
            assert!(v1 >= v2 - 1e-12 * v1.max(1.0));
        }
    }
}
