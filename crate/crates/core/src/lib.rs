//! Exact analysis of step functions in weighted bounded-variation classes.
//!
//! The crate computes the p-Λ-variation of piecewise-constant functions on
//! [0, 1] (exactly on small breakpoint grids, by certified lower bound on
//! large ones), their integral moduli of continuity, the criterion term
//! whose boundedness characterizes the embedding of the variation class
//! into a gauge class, the closed-form solution of the underlying block
//! maximization, and a constructive counterexample pipeline for parameter
//! choices where the criterion fails.
//!
//! Compute kernels with data-parallel inner loops (the exact variation
//! search, the shift-candidate scan, the grid oracle, criterion sampling)
//! run on rayon under the default `parallel` feature and fall back to plain
//! iterators without it; `*_seq` variants stay sequential either way so the
//! two paths can be benchmarked against each other.

pub mod counterexample;
pub mod embedding;
pub mod error;
pub mod extremal;
pub mod modulus;
pub mod sequences;
pub mod stepfn;
pub mod variation;

pub use error::{Error, Result};
pub use sequences::{ModulusKind, ModulusOfContinuity, SequenceKind, WatermanSequence};
pub use stepfn::StepFunction;
pub use variation::{
    family_value, variation, variation_exact, variation_exact_seq, variation_exact_with_limit,
    variation_greedy, variation_norm, IntervalFamily, VariationResult, EXACT_GRID_LIMIT,
};
pub use modulus::{
    integral_modulus, integral_modulus_seq, shift_distance, shift_profile, ShiftDistanceProfile,
};
pub use extremal::{
    block_vertex_max, brute_force_grid, brute_force_grid_seq, solve_closed_form, ExtremalProblem,
    ExtremalSolution,
};
pub use embedding::{
    corollary_term, criterion_argmax, criterion_term, criterion_term_with_argmax, embed_report,
    sufficiency_bound, EmbeddingParams, EmbeddingReport, Verdict,
};
pub use counterexample::{
    build_function, find_violation, verify_divergence, verify_membership, CounterexamplePlan,
    DivergenceRatio, MembershipBound, PlanStage, Relaxation,
};
