//! Shared inputs for the criterion benchmarks.

use dorp_core::enumerate::enumerate_dorp;
use dorp_core::rank::generating_set_g;
use dorp_core::{Bounds, ElementSet, PartialMap, ReesElement};

/// The whole monoid on a chain of size `n`.
pub fn monoid(n: usize) -> ElementSet {
    enumerate_dorp(n, &Bounds::default()).expect("n within the default bounds")
}

/// Every `step`-th element of the monoid, for composition workloads.
pub fn sample(n: usize, step: usize) -> Vec<PartialMap> {
    monoid(n)
        .into_vec()
        .into_iter()
        .step_by(step.max(1))
        .collect()
}

/// Generators of the Rees quotient at height `p`, lifted to quotient elements.
pub fn rees_generators(n: usize, p: usize) -> Vec<ReesElement> {
    generating_set_g(n, p)
        .expect("valid height")
        .into_vec()
        .into_iter()
        .map(ReesElement::Map)
        .collect()
}
