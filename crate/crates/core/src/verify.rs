//! End-to-end checks over one group: subgroup facts, the clique bound, the
//! classification of maximum cliques, extension of intersecting sets, and
//! the lemma-level properties. Every randomized sweep derives one ChaCha
//! stream per trial from a single seed, so results do not depend on how
//! trials are scheduled.

use std::collections::BTreeMap;
use std::ops::ControlFlow;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::clique::for_each_maximal_clique;
use crate::error::{Error, Result};
use crate::exec::{Budget, Exec};
use crate::gf::{is_prime, Field};
use crate::groups::{GroupTable, Subset, IDENTITY};
use crate::intersect::{
    case_iii_bound, check_corollaries, check_lemma_shapes, extend_to_maximum, is_intersecting_with,
    maximum_cliques, normalize, random_intersecting, CheckReport, Classification, Classifier, FixingGraph, Method,
};
use crate::linalg2::{Line, Mat2, Vec2};

pub const ELEMENT_ORDER: &str =
    "identity at index 0, then all other matrices [[a,b],[c,d]] with det in D in lexicographic order of (a,b,c,d)";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupSummary {
    pub p: u32,
    pub k: u32,
    pub q: usize,
    pub d: usize,
    pub modulus: Vec<u32>,
    pub det_group: Vec<u32>,
    pub group_size: usize,
    pub expected_size: usize,
    pub qd: usize,
    pub theorem_scope: bool,
}

pub fn group_summary(group: &GroupTable) -> GroupSummary {
    let spec = group.spec();
    let f = spec.field();
    GroupSummary {
        p: f.p(),
        k: f.k(),
        q: spec.q(),
        d: spec.d(),
        modulus: f.modulus().to_vec(),
        det_group: spec.det_group().elements().iter().map(|s| s.value()).collect(),
        group_size: group.size(),
        expected_size: spec.expected_order(),
        qd: spec.qd(),
        theorem_scope: spec.in_theorem_scope(),
    }
}

/// Group metadata plus the full element list, for exports.
#[derive(Clone, Debug, Serialize)]
pub struct GroupExport {
    pub schema: u32,
    #[serde(flatten)]
    pub summary: GroupSummary,
    pub element_order: &'static str,
    pub elements: Vec<[u32; 4]>,
    pub connection: Subset,
}

pub fn group_export(graph: &FixingGraph<'_>) -> GroupExport {
    let group = graph.group();
    GroupExport {
        schema: 1,
        summary: group_summary(group),
        element_order: ELEMENT_ORDER,
        elements: group.elements().iter().map(|m| m.to_array()).collect(),
        connection: graph.connection().clone(),
    }
}

/// Orders, stabilizers, transitivity, and the H subgroups.
pub fn subgroup_suite(group: &GroupTable, method: Method) -> CheckReport {
    let spec = group.spec();
    let f = group.field();
    let (q, qd) = (spec.q(), spec.qd());
    let mut r = CheckReport::default();
    let mut check = |ok: bool, what: String| {
        r.checked += 1;
        if !ok {
            r.violations.push(what);
        }
    };
    check(
        group.size() == spec.expected_order(),
        format!("|G| = {} but q(q^2-1)d = {}", group.size(), spec.expected_order()),
    );
    let lines = Line::all(f);
    let stabilizers: Vec<Subset> = lines
        .iter()
        .map(|l| group.stabilizer(&l.rep()).expect("nonzero"))
        .collect();
    for v in Vec2::all_nonzero(f) {
        let st = group.stabilizer(&v).expect("nonzero");
        let line = Line::of(v, f).expect("nonzero");
        let at = lines.iter().position(|l| *l == line).expect("canonical");
        check(st.count() == qd, format!("|G_v| = {} for v = {:?}", st.count(), v.to_array()));
        check(st == stabilizers[at], format!("G_v differs from G_av for v = {:?}", v.to_array()));
        check(
            st.is_subset(&group.line_stabilizer(&line)),
            format!("G_v not inside G_<v> for v = {:?}", v.to_array()),
        );
        let orbit = group.orbit(&v).expect("nonzero");
        check(orbit.len() == q * q - 1, format!("orbit of {:?} has {} points", v.to_array(), orbit.len()));
    }
    for st in &stabilizers {
        check(group.is_subgroup(st), "a point stabilizer is not a subgroup".into());
    }
    for line in &lines {
        let name = line.rep().to_array();
        let basis_only = group.build_h(line);
        let scanned = group.build_h_by_scan(line);
        let h = match method {
            Method::Fast => &basis_only,
            Method::Oracle => &scanned,
        };
        check(basis_only == scanned, format!("basis-only H disagrees with full scan for {name:?}"));
        check(h.count() == qd, format!("|H| = {} for line {name:?}", h.count()));
        check(group.is_subgroup(h), format!("H for line {name:?} is not a subgroup"));
        check(is_intersecting_with(group, h, method), format!("H for line {name:?} is not intersecting"));
        if spec.in_theorem_scope() {
            // H contains Id, so it is a coset of G_v only if it equals G_v
            check(
                stabilizers.iter().all(|st| !h.is_subset(st)),
                format!("H for line {name:?} lies inside a point stabilizer"),
            );
        }
    }
    r
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Histogram {
    pub stabilizer_coset: usize,
    pub h_coset: usize,
    pub other: usize,
}

impl Histogram {
    pub fn add(&mut self, c: &Classification) {
        match c {
            Classification::StabilizerCoset { .. } => self.stabilizer_coset += 1,
            Classification::HCoset { .. } => self.h_coset += 1,
            Classification::Other => self.other += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.stabilizer_coset + self.h_coset + self.other
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassifySummary {
    /// "exhaustive" or "sampled".
    pub mode: &'static str,
    pub cliques: usize,
    pub distinct: usize,
    pub histogram: Histogram,
    pub ambiguous: usize,
    /// Number of distinct subgroups among the q+1 H_<w>.
    pub distinct_h_subgroups: usize,
    /// Cliques of any other size met while sampling.
    pub wrong_size: usize,
}

impl ClassifySummary {
    pub fn passed(&self, theorem_scope: bool) -> bool {
        !theorem_scope || (self.histogram.other == 0 && self.wrong_size == 0)
    }
}

fn distinct_h(classifier: &Classifier<'_>) -> usize {
    let mut hs: Vec<&Subset> = classifier.h_subgroups().iter().map(|(_, h)| h).collect();
    hs.sort();
    hs.dedup();
    hs.len()
}

/// Finds every maximum clique and classifies each one.
pub fn classify_exhaustive(graph: &FixingGraph<'_>, omega: usize, budget: &Budget) -> Result<ClassifySummary> {
    let classifier = Classifier::new(graph.group(), graph.method());
    let all = maximum_cliques(graph, omega, budget)?;
    let mut histogram = Histogram::default();
    let mut ambiguous = 0;
    let mut wrong_size = 0;
    for c in &all {
        match classifier.classify(c) {
            Ok(r) => {
                histogram.add(&r.classification);
                ambiguous += r.ambiguous as usize;
            }
            Err(Error::WrongSize { .. }) => wrong_size += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(ClassifySummary {
        mode: "exhaustive",
        cliques: all.len(),
        distinct: all.len(),
        histogram,
        ambiguous,
        distinct_h_subgroups: distinct_h(&classifier),
        wrong_size,
    })
}

fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// A random intersecting seed of random length in `1..=max_len`.
fn random_seed_set(graph: &FixingGraph<'_>, rng: &mut ChaCha8Rng, max_len: usize) -> Subset {
    let len = rng.random_range(1..=max_len.max(1));
    random_intersecting(graph, rng, len)
}

/// Extends `samples` random seeds to maximum cliques and classifies them.
pub fn classify_sampled(
    graph: &FixingGraph<'_>,
    samples: usize,
    seed: u64,
    exec: Exec,
    budget: &Budget,
) -> Result<ClassifySummary> {
    let group = graph.group();
    let classifier = Classifier::new(group, graph.method());
    let qd = group.spec().qd();
    let outcomes = exec.map_range(samples, |t| -> Result<Option<(Classification, bool, Subset)>> {
        let mut rng = trial_rng(seed, t);
        let start = random_seed_set(graph, &mut rng, qd);
        match extend_to_maximum(graph, &start, budget)? {
            Some(full) => {
                let r = classifier.classify(&full)?;
                Ok(Some((r.classification, r.ambiguous, full)))
            }
            None => Ok(None),
        }
    });
    let mut histogram = Histogram::default();
    let mut ambiguous = 0;
    let mut wrong_size = 0;
    let mut seen = std::collections::BTreeSet::new();
    for o in outcomes {
        match o? {
            Some((c, amb, set)) => {
                histogram.add(&c);
                ambiguous += amb as usize;
                seen.insert(set);
            }
            None => wrong_size += 1,
        }
    }
    Ok(ClassifySummary {
        mode: "sampled",
        cliques: samples,
        distinct: seen.len(),
        histogram,
        ambiguous,
        distinct_h_subgroups: distinct_h(&classifier),
        wrong_size,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MaximalSummary {
    pub count: usize,
    /// Clique size -> number of maximal cliques of that size.
    pub sizes: BTreeMap<usize, usize>,
}

impl MaximalSummary {
    pub fn all_of_size(&self, qd: usize) -> bool {
        self.sizes.keys().all(|&s| s == qd)
    }
}

pub fn maximal_summary(graph: &FixingGraph<'_>, limit: usize, budget: &Budget) -> Result<MaximalSummary> {
    if graph.vertex_count() > limit {
        return Err(Error::TooLarge {
            what: "maximal-clique enumeration",
            size: graph.vertex_count(),
            limit,
        });
    }
    let mut sizes = BTreeMap::new();
    let mut count = 0;
    for_each_maximal_clique(graph.adjacency()?, budget, |c| {
        *sizes.entry(c.len()).or_insert(0) += 1;
        count += 1;
        ControlFlow::Continue(())
    })?;
    Ok(MaximalSummary { count, sizes })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtensionSummary {
    /// Seeds {Id, g}, one per g in the connection set.
    pub pair_seeds: usize,
    pub pair_successes: usize,
    pub random_seeds: usize,
    pub random_successes: usize,
    /// Up to ten seeds that could not be extended, as sorted index lists.
    pub failures: Vec<Vec<usize>>,
}

impl ExtensionSummary {
    pub fn passed(&self) -> bool {
        self.pair_successes == self.pair_seeds && self.random_successes == self.random_seeds
    }
}

pub fn extension_sweep(
    graph: &FixingGraph<'_>,
    random_seeds: usize,
    seed: u64,
    exec: Exec,
    budget: &Budget,
) -> Result<ExtensionSummary> {
    let group = graph.group();
    let qd = group.spec().qd();
    let pairs: Vec<Subset> = graph
        .connection()
        .iter()
        .map(|g| group.subset([IDENTITY, g]))
        .collect();
    let check = |s: &Subset| -> Result<bool> {
        Ok(match extend_to_maximum(graph, s, budget)? {
            Some(full) => full.count() == qd && s.is_subset(&full) && graph.is_clique(&full),
            None => false,
        })
    };
    let mut failures = Vec::new();
    let pair_ok = exec.map_range(pairs.len(), |i| check(&pairs[i]));
    let mut pair_successes = 0;
    for (i, ok) in pair_ok.into_iter().enumerate() {
        if ok? {
            pair_successes += 1;
        } else if failures.len() < 10 {
            failures.push(pairs[i].to_vec());
        }
    }
    let random = exec.map_range(random_seeds, |t| -> Result<(bool, Subset)> {
        let mut rng = trial_rng(seed, t);
        let s = random_seed_set(graph, &mut rng, qd);
        Ok((check(&s)?, s))
    });
    let mut random_successes = 0;
    for r in random {
        let (ok, s) = r?;
        if ok {
            random_successes += 1;
        } else if failures.len() < 10 {
            failures.push(s.to_vec());
        }
    }
    Ok(ExtensionSummary {
        pair_seeds: pairs.len(),
        pair_successes,
        random_seeds,
        random_successes,
        failures,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaSuite {
    pub sets: usize,
    pub frames: usize,
    pub shapes: CheckReport,
    pub corollaries: CheckReport,
}

impl LemmaSuite {
    pub fn passed(&self) -> bool {
        self.shapes.passed() && self.corollaries.passed()
    }
}

/// Shape and corollary checks on `trials` random intersecting sets through
/// the identity: even trials grow a random partial set, odd trials extend
/// a random pair to a maximum one. Each set is examined in every frame
/// (v, w) built from a pair of distinct lines with random nonzero scalings.
pub fn lemma_suite(graph: &FixingGraph<'_>, trials: usize, seed: u64, exec: Exec, budget: &Budget) -> Result<LemmaSuite> {
    let group = graph.group();
    let f = group.field();
    let qd = group.spec().qd();
    let lines = Line::all(f);
    let per_trial = exec.map_range(trials, |t| -> Result<(usize, CheckReport, CheckReport)> {
        let mut rng = trial_rng(seed, t);
        let raw = if t % 2 == 0 {
            random_seed_set(graph, &mut rng, qd)
        } else {
            let pair = random_intersecting(graph, &mut rng, 2);
            extend_to_maximum(graph, &pair, budget)?.unwrap_or(pair)
        };
        let (_, set) = normalize(group, &raw)?;
        let mut shapes = CheckReport::default();
        let mut cors = CheckReport::default();
        let mut frames = 0;
        for (i, lv) in lines.iter().enumerate() {
            for (j, lw) in lines.iter().enumerate() {
                if i == j {
                    continue;
                }
                let a = f.scalar(rng.random_range(1..f.q()));
                let b = f.scalar(rng.random_range(1..f.q()));
                let (v, w) = (lv.rep().scale(a, f), lw.rep().scale(b, f));
                debug_assert!(!Mat2::from_columns(v, w).det(f).is_zero());
                shapes.merge(check_lemma_shapes(group, &set, v, w)?);
                cors.merge(check_corollaries(group, &set, v, w)?);
                frames += 1;
            }
        }
        budget.check()?;
        Ok((frames, shapes, cors))
    });
    let mut suite = LemmaSuite {
        sets: trials,
        frames: 0,
        shapes: CheckReport::default(),
        corollaries: CheckReport::default(),
    };
    for r in per_trial {
        let (frames, s, c) = r?;
        suite.frames += frames;
        suite.shapes.merge(s);
        suite.corollaries.merge(c);
    }
    Ok(suite)
}

/// Every prime power q in 2..=max_q.
pub fn prime_powers(max_q: u32) -> Vec<(u32, u32, u32)> {
    let mut out = Vec::new();
    for p in (2..=max_q).filter(|&p| is_prime(p)) {
        let mut q = p;
        let mut k = 1;
        while q <= max_q {
            out.push((q, p, k));
            k += 1;
            q = match q.checked_mul(p) {
                Some(x) => x,
                None => break,
            };
        }
    }
    out.sort_unstable();
    out
}

/// (q + 1)(d - 1) + 1 < qd over every prime power q <= max_q and d | q - 1.
pub fn case_iii_sweep(max_q: u32) -> CheckReport {
    let mut r = CheckReport::default();
    for (q, _, _) in prime_powers(max_q) {
        for d in (1..q).filter(|d| (q - 1) % d == 0) {
            r.checked += 1;
            if !case_iii_bound(q as usize, d as usize) {
                r.violations.push(format!("(q, d) = ({q}, {d})"));
            }
        }
    }
    r
}

/// All (p, k, d) with q = p^k <= max_q and d | q - 1, d >= min_d.
pub fn parameter_grid(max_q: u32, min_d: u32) -> Vec<(u32, u32, u32)> {
    let mut out = Vec::new();
    for (q, p, k) in prime_powers(max_q) {
        for d in (min_d..q).filter(|d| (q - 1) % d == 0) {
            out.push((p, k, d));
        }
    }
    out
}

/// Divisors of q - 1 for the field `(p, k)`.
pub fn det_orders(p: u32, k: u32) -> Result<Vec<u32>> {
    let q = Field::new(p, k)?.q();
    Ok((1..q).filter(|d| (q - 1) % d == 0).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::GroupSpec;

    #[test]
    fn prime_power_list() {
        let qs: Vec<u32> = prime_powers(16).iter().map(|t| t.0).collect();
        assert_eq!(qs, vec![2, 3, 4, 5, 7, 8, 9, 11, 13, 16]);
        assert_eq!(det_orders(7, 1).unwrap(), vec![1, 2, 3, 6]);
        assert!(parameter_grid(9, 2).contains(&(3, 2, 8)));
        assert!(case_iii_sweep(64).passed());
    }

    #[test]
    fn small_suites_pass() {
        let g = GroupTable::build(GroupSpec::from_params(3, 1, 2).unwrap());
        assert!(subgroup_suite(&g, Method::Fast).passed());
        let fg = FixingGraph::build(&g);
        let s = lemma_suite(&fg, 10, 1, Exec::Sequential, &Budget::unlimited()).unwrap();
        assert!(s.passed());
        assert_eq!(s.frames, 10 * 4 * 3);
        let e = extension_sweep(&fg, 20, 1, Exec::Parallel, &Budget::unlimited()).unwrap();
        assert!(e.passed());
        assert_eq!(e.pair_seeds, fg.degree());
    }
}
