use std::collections::BTreeSet;
use std::ops::ControlFlow;

use serde::Serialize;

use crate::clique::{self, first_clique_of_size, for_each_clique_of_size};
use crate::error::{Error, Result};
use crate::exec::{Budget, Exec};
use crate::groups::{Subset, IDENTITY};

use super::classify::{Classifier, CliqueReport};
use super::FixingGraph;

/// Default vertex cap for maximal-clique enumeration.
pub const DEFAULT_ENUMERATION_LIMIT: usize = 1_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MaxCliqueReport {
    /// Clique number of the fixing graph, proved by exhaustive search.
    pub omega: usize,
    pub target: usize,
    /// An independent bounded search for a clique of size `target + 1` failed.
    pub no_clique_above_target: bool,
    /// Lexicographically smallest maximum clique, classified when its size is qd.
    pub witness: Subset,
    pub report: Option<CliqueReport>,
    pub nodes: u64,
}

/// Exact clique number of the fixing graph, certified against `target`.
///
/// Left translations are automorphisms, so some maximum clique contains
/// the identity and omega = 1 + omega(local graph on S). The search never
/// uses `target` for pruning; it only drives the second, independent
/// search for a clique of size `target + 1`.
pub fn max_clique(graph: &FixingGraph<'_>, target: usize, exec: Exec, budget: &Budget) -> Result<MaxCliqueReport> {
    let group = graph.group();
    let (local, members) = graph.local_graph();
    let best = clique::max_clique(&local, exec, budget)?;
    let omega = best.size + 1;

    // lexicographically first maximum clique: it contains index 0 (the identity)
    let tail = first_clique_of_size(&local, &Subset::full(local.n()), best.size, budget)?
        .expect("a clique of the optimal size exists");
    let witness = group.subset(std::iter::once(IDENTITY).chain(tail.iter().map(|&i| members[i])));
    debug_assert!(graph.is_clique(&witness));

    let above = clique::clique_above(&local, target.saturating_sub(1), exec, budget)?;
    let report = if omega == group.spec().qd() {
        Some(Classifier::new(group, graph.method()).classify(&witness)?)
    } else {
        None
    };
    Ok(MaxCliqueReport {
        omega,
        target,
        no_clique_above_target: above.is_none(),
        witness,
        report,
        nodes: best.nodes,
    })
}

/// All maximum cliques of the graph, sorted. Each is a translate of a
/// maximum clique through the identity, so only those are searched for.
pub fn maximum_cliques(graph: &FixingGraph<'_>, omega: usize, budget: &Budget) -> Result<Vec<Subset>> {
    let group = graph.group();
    let (local, members) = graph.local_graph();
    let mut through_id = Vec::new();
    for_each_clique_of_size(&local, &Subset::full(local.n()), omega - 1, budget, |c| {
        through_id.push(group.subset(std::iter::once(IDENTITY).chain(c.iter().map(|&i| members[i]))));
        ControlFlow::Continue(())
    })?;
    let mut all = BTreeSet::new();
    for base in &through_id {
        for x in 0..group.size() {
            all.insert(group.left_coset(x, base));
        }
        budget.check()?;
    }
    Ok(all.into_iter().collect())
}

/// A superset of `set` of size qd that is intersecting, or `None` when the
/// search proves there is none.
pub fn extend_to_maximum(graph: &FixingGraph<'_>, set: &Subset, budget: &Budget) -> Result<Option<Subset>> {
    if !graph.is_clique(set) {
        return Err(Error::NotIntersecting);
    }
    let target = graph.group().spec().qd();
    let have = set.count();
    if have >= target {
        return Ok((have == target).then(|| set.clone()));
    }
    let adj = graph.adjacency()?;
    let cand = adj.common_neighbors(set);
    let extra = first_clique_of_size(adj, &cand, target - have, budget)?;
    Ok(extra.map(|e| {
        let mut out = set.clone();
        e.into_iter().for_each(|v| {
            out.insert(v);
        });
        out
    }))
}

/// Every maximal clique of the fixing graph, in Bron–Kerbosch order.
pub fn enumerate_maximal_cliques(graph: &FixingGraph<'_>, limit: usize, budget: &Budget) -> Result<Vec<Subset>> {
    let adj = graph.adjacency()?;
    let n = graph.vertex_count();
    Ok(clique::maximal_cliques(adj, limit, budget)?
        .into_iter()
        .map(|c| Subset::from_indices(n, c))
        .collect())
}
