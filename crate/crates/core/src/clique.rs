//! Exact clique search on bit-packed undirected graphs.
//!
//! * [`max_clique`]: branch and bound with a greedy colouring bound and
//!   bit-parallel candidate sets. Root branches are independent and may be
//!   explored in parallel; the optimum is schedule-independent.
//! * [`first_clique_of_size`] / [`for_each_clique_of_size`]: depth-first
//!   search in ascending vertex order, so cliques come out in
//!   lexicographic order of their sorted vertex lists.
//! * [`for_each_maximal_clique`]: Bron–Kerbosch with Tomita pivoting.

use std::ops::ControlFlow;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::exec::{Budget, Exec, Ticker};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitGraph {
    rows: Vec<BitSet>,
}

impl BitGraph {
    /// Rows must be symmetric and loop-free.
    pub fn from_rows(rows: Vec<BitSet>) -> Self {
        debug_assert!(rows.iter().enumerate().all(|(i, r)| !r.contains(i)));
        BitGraph { rows }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut rows = vec![BitSet::new(n); n];
        for &(u, v) in edges {
            if u != v {
                rows[u].insert(v);
                rows[v].insert(u);
            }
        }
        BitGraph { rows }
    }

    pub fn complete(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| {
                let mut r = BitSet::full(n);
                r.remove(i);
                r
            })
            .collect();
        BitGraph { rows }
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn row(&self, v: usize) -> &BitSet {
        &self.rows[v]
    }

    #[inline]
    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.rows[u].contains(v)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rows[v].count()
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(BitSet::count).sum::<usize>() / 2
    }

    /// Subgraph induced on `vertices`, relabelled `0..vertices.len()` in
    /// the given order.
    pub fn induced(&self, vertices: &[usize]) -> BitGraph {
        let k = vertices.len();
        let rows = vertices
            .iter()
            .map(|&u| {
                BitSet::from_indices(
                    k,
                    vertices
                        .iter()
                        .enumerate()
                        .filter(|&(_, &v)| self.adjacent(u, v))
                        .map(|(j, _)| j),
                )
            })
            .collect();
        BitGraph { rows }
    }

    pub fn is_clique(&self, vertices: &[usize]) -> bool {
        vertices
            .iter()
            .enumerate()
            .all(|(i, &u)| vertices[i + 1..].iter().all(|&v| u != v && self.adjacent(u, v)))
    }

    /// Common neighbourhood of `set`, excluding `set` itself; the whole
    /// vertex set when `set` is empty.
    pub fn common_neighbors(&self, set: &BitSet) -> BitSet {
        let mut cand = BitSet::full(self.n());
        for v in set {
            cand.intersect_with(&self.rows[v]);
        }
        cand.difference_with(set);
        cand
    }

    /// Greedy colouring of `cand`: vertices grouped by colour class,
    /// with the (1-based) class of each vertex.
    fn color_sort(&self, cand: &BitSet) -> (Vec<usize>, Vec<usize>) {
        let mut order = Vec::with_capacity(cand.count());
        let mut colors = Vec::with_capacity(order.capacity());
        let mut uncolored = cand.clone();
        let mut color = 0;
        while !uncolored.is_empty() {
            color += 1;
            let mut avail = uncolored.clone();
            while let Some(v) = avail.first() {
                avail.remove(v);
                avail.difference_with(&self.rows[v]);
                uncolored.remove(v);
                order.push(v);
                colors.push(color);
            }
        }
        (order, colors)
    }

    /// Number of greedy colours needed for `cand`, stopping once `cap` is reached.
    fn color_bound(&self, cand: &BitSet, cap: usize) -> usize {
        let mut uncolored = cand.clone();
        let mut color = 0;
        while !uncolored.is_empty() && color < cap {
            color += 1;
            let mut avail = uncolored.clone();
            while let Some(v) = avail.first() {
                avail.remove(v);
                avail.difference_with(&self.rows[v]);
                uncolored.remove(v);
            }
        }
        color
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxClique {
    pub size: usize,
    /// Some maximum clique, sorted. Which one depends on the schedule when
    /// run in parallel; use [`first_clique_of_size`] for a canonical one.
    pub witness: Vec<usize>,
    pub nodes: u64,
}

struct Incumbent {
    size: AtomicUsize,
    witness: Mutex<Vec<usize>>,
    nodes: AtomicUsize,
}

impl Incumbent {
    fn offer(&self, clique: &[usize]) {
        let mut w = self.witness.lock().unwrap();
        if clique.len() > self.size.load(Ordering::Relaxed) {
            self.size.store(clique.len(), Ordering::Relaxed);
            *w = clique.to_vec();
        }
    }
}

/// Exact maximum clique.
pub fn max_clique(g: &BitGraph, exec: Exec, budget: &Budget) -> Result<MaxClique> {
    let found = clique_above(g, 0, exec, budget)?;
    Ok(found.unwrap_or(MaxClique {
        size: 0,
        witness: Vec::new(),
        nodes: 0,
    }))
}

/// Exact search for a clique with more than `floor` vertices; returns a
/// maximum clique if one exists, `None` when the clique number is at most `floor`.
pub fn clique_above(g: &BitGraph, floor: usize, exec: Exec, budget: &Budget) -> Result<Option<MaxClique>> {
    let n = g.n();
    let inc = Incumbent {
        size: AtomicUsize::new(floor),
        witness: Mutex::new(Vec::new()),
        nodes: AtomicUsize::new(0),
    };
    let (order, colors) = g.color_sort(&BitSet::full(n));
    let branch = |i: usize| -> Result<()> {
        if colors[i] <= inc.size.load(Ordering::Relaxed) {
            return Ok(());
        }
        let v = order[i];
        let mut cand = BitSet::from_indices(n, order[..i].iter().copied());
        cand.intersect_with(g.row(v));
        let mut cur = vec![v];
        let mut ticker = Ticker::new(budget);
        let res = if cand.is_empty() {
            inc.offer(&cur);
            Ok(())
        } else {
            expand(g, cand, &mut cur, &inc, &mut ticker)
        };
        inc.nodes.fetch_add(ticker.nodes as usize, Ordering::Relaxed);
        res
    };

    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        (0..n).into_par_iter().rev().try_for_each(branch)?;
    } else {
        (0..n).rev().try_for_each(branch)?;
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = exec;
        (0..n).rev().try_for_each(branch)?;
    }

    let size = inc.size.load(Ordering::Relaxed);
    if size <= floor {
        return Ok(None);
    }
    let mut witness = inc.witness.into_inner().unwrap();
    witness.sort_unstable();
    Ok(Some(MaxClique {
        size,
        witness,
        nodes: inc.nodes.load(Ordering::Relaxed) as u64,
    }))
}

fn expand(
    g: &BitGraph,
    mut cand: BitSet,
    cur: &mut Vec<usize>,
    inc: &Incumbent,
    ticker: &mut Ticker<'_>,
) -> Result<()> {
    ticker.tick()?;
    let (order, colors) = g.color_sort(&cand);
    for i in (0..order.len()).rev() {
        if cur.len() + colors[i] <= inc.size.load(Ordering::Relaxed) {
            return Ok(());
        }
        let v = order[i];
        cur.push(v);
        let next = cand.intersection(g.row(v));
        if next.is_empty() {
            inc.offer(cur);
        } else {
            expand(g, next, cur, inc, ticker)?;
        }
        cur.pop();
        cand.remove(v);
    }
    Ok(())
}

/// The lexicographically smallest clique of exactly `k` vertices drawn
/// from `within`, or `None` if there is none.
pub fn first_clique_of_size(g: &BitGraph, within: &BitSet, k: usize, budget: &Budget) -> Result<Option<Vec<usize>>> {
    let mut found = None;
    for_each_clique_of_size(g, within, k, budget, |c| {
        found = Some(c.to_vec());
        ControlFlow::Break(())
    })?;
    Ok(found)
}

/// Visits every clique of exactly `k` vertices drawn from `within`, in
/// lexicographic order of sorted vertex lists.
pub fn for_each_clique_of_size<F>(g: &BitGraph, within: &BitSet, k: usize, budget: &Budget, mut visit: F) -> Result<()>
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    let mut cur = Vec::with_capacity(k);
    let mut ticker = Ticker::new(budget);
    let _ = lex_search(g, within.clone(), k, &mut cur, &mut visit, &mut ticker)?;
    Ok(())
}

fn lex_search<F>(
    g: &BitGraph,
    mut cand: BitSet,
    k: usize,
    cur: &mut Vec<usize>,
    visit: &mut F,
    ticker: &mut Ticker<'_>,
) -> Result<ControlFlow<()>>
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    ticker.tick()?;
    let need = k - cur.len();
    if need == 0 {
        return Ok(visit(cur));
    }
    if cand.count() < need || g.color_bound(&cand, need) < need {
        return Ok(ControlFlow::Continue(()));
    }
    while let Some(v) = cand.first() {
        cand.remove(v);
        let next = cand.intersection(g.row(v));
        cur.push(v);
        let flow = lex_search(g, next, k, cur, visit, ticker)?;
        cur.pop();
        if flow.is_break() {
            return Ok(flow);
        }
        if cand.count() < need {
            break;
        }
    }
    Ok(ControlFlow::Continue(()))
}

/// Bron–Kerbosch with pivoting. Every maximal clique is passed to `visit`
/// exactly once, sorted, in a deterministic order.
pub fn for_each_maximal_clique<F>(g: &BitGraph, budget: &Budget, mut visit: F) -> Result<()>
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    let n = g.n();
    let mut r = Vec::new();
    let mut ticker = Ticker::new(budget);
    let _ = bron_kerbosch(g, &mut r, BitSet::full(n), BitSet::new(n), &mut visit, &mut ticker)?;
    Ok(())
}

fn bron_kerbosch<F>(
    g: &BitGraph,
    r: &mut Vec<usize>,
    mut p: BitSet,
    mut x: BitSet,
    visit: &mut F,
    ticker: &mut Ticker<'_>,
) -> Result<ControlFlow<()>>
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    ticker.tick()?;
    if p.is_empty() {
        if x.is_empty() {
            let mut sorted = r.clone();
            sorted.sort_unstable();
            return Ok(visit(&sorted));
        }
        return Ok(ControlFlow::Continue(()));
    }
    // pivot: the vertex of P ∪ X with most neighbours in P, lowest index on ties
    let mut pivot = usize::MAX;
    let mut best = 0;
    for u in p.iter().chain(x.iter()) {
        let c = p.intersection_count(g.row(u));
        if pivot == usize::MAX || c > best || (c == best && u < pivot) {
            pivot = u;
            best = c;
        }
    }
    let mut branch = p.clone();
    branch.difference_with(g.row(pivot));
    for v in branch.iter() {
        r.push(v);
        let flow = bron_kerbosch(
            g,
            r,
            p.intersection(g.row(v)),
            x.intersection(g.row(v)),
            visit,
            ticker,
        )?;
        r.pop();
        if flow.is_break() {
            return Ok(flow);
        }
        p.remove(v);
        x.insert(v);
    }
    Ok(ControlFlow::Continue(()))
}

/// Collects every maximal clique, refusing graphs above `limit` vertices.
pub fn maximal_cliques(g: &BitGraph, limit: usize, budget: &Budget) -> Result<Vec<Vec<usize>>> {
    if g.n() > limit {
        return Err(Error::TooLarge {
            what: "graph",
            size: g.n(),
            limit,
        });
    }
    let mut out = Vec::new();
    for_each_maximal_clique(g, budget, |c| {
        out.push(c.to_vec());
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::time::Duration;

    fn random_graph(n: usize, bits: &[bool]) -> BitGraph {
        let mut edges = Vec::new();
        let mut it = bits.iter().cycle();
        for u in 0..n {
            for v in u + 1..n {
                if *it.next().unwrap() {
                    edges.push((u, v));
                }
            }
        }
        BitGraph::from_edges(n, &edges)
    }

    /// All cliques by subset enumeration.
    fn brute_cliques(g: &BitGraph) -> Vec<Vec<usize>> {
        let n = g.n();
        (0u32..1 << n)
            .map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).collect::<Vec<_>>())
            .filter(|s| g.is_clique(s))
            .collect()
    }

    fn brute_maximal(g: &BitGraph) -> Vec<Vec<usize>> {
        let all = brute_cliques(g);
        let mut out: Vec<Vec<usize>> = all
            .iter()
            .filter(|c| (0..g.n()).all(|v| c.contains(&v) || !c.iter().all(|&u| g.adjacent(u, v))))
            .cloned()
            .collect();
        out.sort();
        out
    }

    #[test]
    fn complete_graph_has_one_maximal_clique() {
        let g = BitGraph::complete(7);
        let all = maximal_cliques(&g, 100, &Budget::unlimited()).unwrap();
        assert_eq!(all, vec![(0..7).collect::<Vec<_>>()]);
        assert_eq!(max_clique(&g, Exec::Sequential, &Budget::unlimited()).unwrap().size, 7);
    }

    #[test]
    fn empty_and_edgeless() {
        let g = BitGraph::from_edges(0, &[]);
        assert_eq!(max_clique(&g, Exec::Parallel, &Budget::unlimited()).unwrap().size, 0);
        let g = BitGraph::from_edges(4, &[]);
        let m = max_clique(&g, Exec::Parallel, &Budget::unlimited()).unwrap();
        assert_eq!(m.size, 1);
        assert_eq!(maximal_cliques(&g, 10, &Budget::unlimited()).unwrap().len(), 4);
    }

    #[test]
    fn enumeration_limit() {
        let g = BitGraph::complete(20);
        assert!(matches!(maximal_cliques(&g, 10, &Budget::unlimited()), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn budget_interrupts() {
        // a large sparse-ish graph with a zero budget
        let bits: Vec<bool> = (0..997).map(|i| (i * 7919) % 3 != 0).collect();
        let g = random_graph(120, &bits);
        let b = Budget::with_limit(Duration::ZERO);
        assert_eq!(max_clique(&g, Exec::Sequential, &b), Err(Error::Interrupted));
    }

    #[test]
    fn induced_relabels() {
        let g = BitGraph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]);
        let h = g.induced(&[4, 0, 1]);
        assert!(h.adjacent(0, 1) && h.adjacent(1, 2) && !h.adjacent(0, 2));
        assert_eq!(g.edge_count(), 5);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn max_clique_matches_brute_force(n in 1usize..13, bits in proptest::collection::vec(any::<bool>(), 1..80)) {
            let g = random_graph(n, &bits);
            let cliques = brute_cliques(&g);
            let omega = cliques.iter().map(Vec::len).max().unwrap();
            for exec in [Exec::Sequential, Exec::Parallel] {
                let m = max_clique(&g, exec, &Budget::unlimited()).unwrap();
                prop_assert_eq!(m.size, omega);
                prop_assert!(g.is_clique(&m.witness));
                prop_assert_eq!(m.witness.len(), omega);
            }
            prop_assert!(clique_above(&g, omega, Exec::Sequential, &Budget::unlimited()).unwrap().is_none());
            let all = BitSet::full(n);
            for k in 1..=omega + 1 {
                let want: Vec<Vec<usize>> = cliques.iter().filter(|c| c.len() == k).cloned().collect();
                let mut got = Vec::new();
                for_each_clique_of_size(&g, &all, k, &Budget::unlimited(), |c| {
                    got.push(c.to_vec());
                    ControlFlow::Continue(())
                }).unwrap();
                let mut sorted_want = want.clone();
                sorted_want.sort();
                // emitted already in lexicographic order
                prop_assert_eq!(&got, &sorted_want);
                prop_assert_eq!(first_clique_of_size(&g, &all, k, &Budget::unlimited()).unwrap(), sorted_want.first().cloned());
            }
        }

        #[test]
        fn bron_kerbosch_matches_brute_force(n in 1usize..12, bits in proptest::collection::vec(any::<bool>(), 1..70)) {
            let g = random_graph(n, &bits);
            let mut got = maximal_cliques(&g, 100, &Budget::unlimited()).unwrap();
            let again = maximal_cliques(&g, 100, &Budget::unlimited()).unwrap();
            prop_assert_eq!(&got, &again);
            got.sort();
            prop_assert_eq!(got, brute_maximal(&g));
        }
    }
}
