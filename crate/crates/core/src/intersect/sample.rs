use rand::Rng;

use crate::groups::Subset;

use super::FixingGraph;

/// A random intersecting set grown greedily from a uniform start: each
/// step adds a uniform common neighbour, stopping at `max_len` members or
/// when none is left.
pub fn random_intersecting<R: Rng + ?Sized>(graph: &FixingGraph<'_>, rng: &mut R, max_len: usize) -> Subset {
    let n = graph.vertex_count();
    let mut set = Subset::new(n);
    if max_len == 0 || n == 0 {
        return set;
    }
    let start = rng.random_range(0..n);
    set.insert(start);
    let mut cand = graph.neighbors(start);
    while set.count() < max_len {
        let size = cand.count();
        if size == 0 {
            break;
        }
        let pick = cand.iter().nth(rng.random_range(0..size)).expect("in range");
        set.insert(pick);
        cand.intersect_with(&graph.neighbors(pick));
    }
    set
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{GroupSpec, GroupTable};
    use crate::intersect::is_intersecting;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn samples_are_intersecting_and_reproducible() {
        let g = GroupTable::build(GroupSpec::from_params(5, 1, 2).unwrap());
        let fg = FixingGraph::build(&g);
        let mut a = ChaCha8Rng::seed_from_u64(7);
        let mut b = ChaCha8Rng::seed_from_u64(7);
        for len in 0..12 {
            let s = random_intersecting(&fg, &mut a, len);
            assert_eq!(s, random_intersecting(&fg, &mut b, len));
            assert!(s.count() <= len);
            assert!(is_intersecting(&g, &s));
        }
    }
}
