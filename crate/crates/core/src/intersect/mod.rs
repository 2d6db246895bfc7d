//! Intersecting sets of G acting on V \ {0}.
//!
//! A set F is intersecting when any two members agree on some nonzero
//! vector. Since g(x) = h(x) iff (g^-1 h)(x) = x, these are exactly the
//! cliques of the Cayley graph [`FixingGraph`], with singletons and the
//! empty set intersecting by convention.

mod classify;
mod graph;
mod lemmas;
mod sample;
mod search;

pub use classify::{classify_maximum, Classification, Classifier, CliqueReport};
pub use graph::{FixingGraph, DEFAULT_ADJACENCY_LIMIT};
pub use lemmas::{check_corollaries, check_lemma_shapes, epsilon_bound, CheckReport};
pub use sample::random_intersecting;
pub use search::{
    enumerate_maximal_cliques, extend_to_maximum, maximum_cliques, max_clique, MaxCliqueReport,
    DEFAULT_ENUMERATION_LIMIT,
};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::{GroupTable, Subset};

/// Fast predicates, or their brute-force definitions for differential runs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    #[default]
    Fast,
    Oracle,
}

/// Pairwise test through det(g^-1 h - I) = 0.
pub fn is_intersecting(group: &GroupTable, set: &Subset) -> bool {
    let f = group.field();
    let members = set.to_vec();
    members.iter().enumerate().all(|(i, &g)| {
        let gi = group.element(group.inverse(g));
        members[i + 1..]
            .iter()
            .all(|&h| gi.mul(group.element(h), f).fixes_nonzero(f))
    })
}

/// Pairwise test by scanning for a nonzero x with g(x) = h(x).
pub fn is_intersecting_by_scan(group: &GroupTable, set: &Subset) -> bool {
    let f = group.field();
    let members = set.to_vec();
    let nonzero: Vec<_> = crate::linalg2::Vec2::all_nonzero(f).collect();
    members.iter().enumerate().all(|(i, &g)| {
        let gm = group.element(g);
        members[i + 1..].iter().all(|&h| {
            let hm = group.element(h);
            nonzero.iter().any(|x| gm.apply(x, f) == hm.apply(x, f))
        })
    })
}

pub fn is_intersecting_with(group: &GroupTable, set: &Subset, method: Method) -> bool {
    match method {
        Method::Fast => is_intersecting(group, set),
        Method::Oracle => is_intersecting_by_scan(group, set),
    }
}

/// Translate F so that it contains the identity: returns `(x, x^-1 F)`
/// with x the smallest-index member.
pub fn normalize(group: &GroupTable, set: &Subset) -> Result<(usize, Subset)> {
    let x = set.first().ok_or(Error::EmptySet)?;
    Ok((x, group.left_coset(group.inverse(x), set)))
}

/// (q + 1)(d - 1) + 1 < qd.
pub fn case_iii_bound(q: usize, d: usize) -> bool {
    (q + 1) * (d - 1) + 1 < q * d
}
