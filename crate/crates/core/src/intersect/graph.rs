use std::io::{self, Write};

use crate::clique::BitGraph;
use crate::error::{Error, Result};
use crate::groups::{GroupTable, Subset, IDENTITY};

use super::Method;

/// Full adjacency is materialised up to this many vertices.
pub const DEFAULT_ADJACENCY_LIMIT: usize = 20_000;

/// The Cayley graph Cay(G, S) with S the non-identity elements that fix a
/// nonzero vector: g ~ h iff g^-1 h has a nonzero fixed vector, i.e. iff g
/// and h agree on some nonzero vector.
#[derive(Clone, Debug)]
pub struct FixingGraph<'g> {
    group: &'g GroupTable,
    connection: Subset,
    adjacency: Option<BitGraph>,
    method: Method,
}

impl<'g> FixingGraph<'g> {
    pub fn build(group: &'g GroupTable) -> Self {
        Self::build_with(group, Method::Fast, DEFAULT_ADJACENCY_LIMIT)
    }

    pub fn build_with(group: &'g GroupTable, method: Method, adjacency_limit: usize) -> Self {
        let f = group.field();
        let connection = group.filter(|m| match method {
            Method::Fast => m.fixes_nonzero(f),
            Method::Oracle => m.fixes_nonzero_by_scan(f),
        });
        let mut connection = connection;
        connection.remove(IDENTITY);
        let adjacency = (group.size() <= adjacency_limit).then(|| {
            let rows = (0..group.size())
                .map(|g| group.subset(connection.iter().map(|s| group.mul(g, s))))
                .collect();
            BitGraph::from_rows(rows)
        });
        FixingGraph {
            group,
            connection,
            adjacency,
            method,
        }
    }

    pub fn group(&self) -> &'g GroupTable {
        self.group
    }

    pub fn method(&self) -> Method {
        self.method
    }

    /// The connection set S (identity excluded).
    pub fn connection(&self) -> &Subset {
        &self.connection
    }

    pub fn vertex_count(&self) -> usize {
        self.group.size()
    }

    /// Common degree |S| of every vertex.
    pub fn degree(&self) -> usize {
        self.connection.count()
    }

    pub fn edge_count(&self) -> usize {
        self.vertex_count() * self.degree() / 2
    }

    #[inline]
    pub fn adjacent(&self, g: usize, h: usize) -> bool {
        match &self.adjacency {
            Some(a) => a.adjacent(g, h),
            None => g != h && self.connection.contains(self.group.mul(self.group.inverse(g), h)),
        }
    }

    /// `g S`.
    pub fn neighbors(&self, g: usize) -> Subset {
        match &self.adjacency {
            Some(a) => a.row(g).clone(),
            None => self
                .group
                .subset(self.connection.iter().map(|s| self.group.mul(g, s))),
        }
    }

    pub fn adjacency(&self) -> Result<&BitGraph> {
        self.adjacency.as_ref().ok_or(Error::TooLarge {
            what: "fixing graph adjacency",
            size: self.vertex_count(),
            limit: DEFAULT_ADJACENCY_LIMIT,
        })
    }

    /// The subgraph induced on S, with vertex `i` standing for the i-th
    /// smallest element of S. By vertex-transitivity every clique through
    /// the identity is `{Id}` plus a clique here.
    pub fn local_graph(&self) -> (BitGraph, Vec<usize>) {
        let members = self.connection.to_vec();
        let graph = match &self.adjacency {
            Some(a) => a.induced(&members),
            None => {
                let rows = members
                    .iter()
                    .map(|&s| {
                        let mut row = self.neighbors(s);
                        row.intersect_with(&self.connection);
                        Subset::from_indices(
                            members.len(),
                            members.iter().enumerate().filter(|(_, &t)| row.contains(t)).map(|(j, _)| j),
                        )
                    })
                    .collect();
                BitGraph::from_rows(rows)
            }
        };
        (graph, members)
    }

    /// Whether every pair of `set` is adjacent.
    pub fn is_clique(&self, set: &Subset) -> bool {
        let v = set.to_vec();
        v.iter()
            .enumerate()
            .all(|(i, &g)| v[i + 1..].iter().all(|&h| self.adjacent(g, h)))
    }

    /// Undirected DIMACS: 1-based vertices, `p edge n m`, then `e u v`
    /// with u < v in ascending order.
    pub fn write_dimacs<W: Write>(&self, mut out: W) -> io::Result<()> {
        let spec = self.group.spec();
        writeln!(
            out,
            "c fixing graph of G <= GL(2,{}) with |det(G)| = {}",
            spec.q(),
            spec.d()
        )?;
        writeln!(out, "p edge {} {}", self.vertex_count(), self.edge_count())?;
        for g in 0..self.vertex_count() {
            let row = self.neighbors(g);
            for h in row.iter().filter(|&h| h > g) {
                writeln!(out, "e {} {}", g + 1, h + 1)?;
            }
        }
        Ok(())
    }

    pub fn to_dimacs(&self) -> String {
        let mut buf = Vec::new();
        self.write_dimacs(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::GroupSpec;

    fn group(p: u32, k: u32, d: u32) -> GroupTable {
        GroupTable::build(GroupSpec::from_params(p, k, d).unwrap())
    }

    #[test]
    fn regular_and_symmetric() {
        let g = group(3, 1, 2);
        let fg = FixingGraph::build(&g);
        let adj = fg.adjacency().unwrap();
        assert_eq!(fg.neighbors(IDENTITY), *fg.connection());
        for v in 0..g.size() {
            assert_eq!(adj.degree(v), fg.degree());
            for u in 0..g.size() {
                assert_eq!(fg.adjacent(u, v), fg.adjacent(v, u));
            }
        }
        // connection set closed under inverse
        for s in fg.connection().iter() {
            assert!(fg.connection().contains(g.inverse(s)));
        }
    }

    #[test]
    fn lazy_and_materialised_agree() {
        let g = group(2, 2, 3);
        let eager = FixingGraph::build(&g);
        let lazy = FixingGraph::build_with(&g, Method::Fast, 10);
        assert!(lazy.adjacency().is_err());
        for u in (0..g.size()).step_by(7) {
            assert_eq!(eager.neighbors(u), lazy.neighbors(u));
            for v in 0..g.size() {
                assert_eq!(eager.adjacent(u, v), lazy.adjacent(u, v));
            }
        }
        assert_eq!(eager.local_graph(), lazy.local_graph());
        assert_eq!(eager.to_dimacs(), lazy.to_dimacs());
    }

    #[test]
    fn oracle_connection_matches() {
        for (p, d) in [(3, 2), (5, 4)] {
            let g = group(p, 1, d);
            let a = FixingGraph::build(&g);
            let b = FixingGraph::build_with(&g, Method::Oracle, DEFAULT_ADJACENCY_LIMIT);
            assert_eq!(a.connection(), b.connection());
        }
    }

    #[test]
    fn connection_size_formula() {
        // (d - 1) classes of diag(1, l) of size q(q + 1), plus q^2 - 1 unipotents
        for (p, k, d) in [(3, 1, 2), (2, 2, 3), (5, 1, 2), (5, 1, 4), (7, 1, 3)] {
            let g = group(p, k, d);
            let q = g.spec().q();
            let d = d as usize;
            assert_eq!(FixingGraph::build(&g).degree(), (d - 1) * q * (q + 1) + q * q - 1);
        }
    }

    #[test]
    fn dimacs_header() {
        let g = group(3, 1, 2);
        let text = FixingGraph::build(&g).to_dimacs();
        let mut lines = text.lines();
        assert!(lines.next().unwrap().starts_with("c "));
        let header = lines.next().unwrap();
        let fg = FixingGraph::build(&g);
        assert_eq!(header, format!("p edge 48 {}", fg.edge_count()));
        let edges: Vec<(usize, usize)> = lines
            .map(|l| {
                let mut it = l.split_whitespace();
                assert_eq!(it.next(), Some("e"));
                (it.next().unwrap().parse().unwrap(), it.next().unwrap().parse().unwrap())
            })
            .collect();
        assert_eq!(edges.len(), fg.edge_count());
        assert!(edges.iter().all(|&(u, v)| 1 <= u && u < v && v <= 48));
        assert!(edges.windows(2).all(|w| w[0] < w[1]));
    }
}
