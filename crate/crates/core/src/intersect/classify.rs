use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::{GroupTable, Subset};
use crate::linalg2::{Line, Vec2};

use super::{normalize, Method};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Classification {
    /// The set equals `x G_v`.
    StabilizerCoset { v: [u32; 2], x: usize },
    /// The set equals `x H_<line>`.
    HCoset { line: [u32; 2], x: usize },
    Other,
}

impl Classification {
    pub fn label(&self) -> &'static str {
        match self {
            Classification::StabilizerCoset { .. } => "STABILIZER_COSET",
            Classification::HCoset { .. } => "H_COSET",
            Classification::Other => "OTHER",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CliqueReport {
    pub members: Subset,
    pub size: usize,
    pub classification: Classification,
    /// The set is a stabilizer coset and an H coset at once.
    pub ambiguous: bool,
    pub theorem_scope: bool,
    /// OTHER inside the theorem's hypothesis.
    pub theorem_violation: bool,
}

/// The q+1 point stabilizers (one per line, since G_v = G_av) and the q+1
/// subgroups H_<w>, built once and reused.
#[derive(Clone, Debug)]
pub struct Classifier<'g> {
    group: &'g GroupTable,
    stabilizers: Vec<(Line, Subset)>,
    hs: Vec<(Line, Subset)>,
}

impl<'g> Classifier<'g> {
    pub fn new(group: &'g GroupTable, method: Method) -> Self {
        let lines = Line::all(group.field());
        let stabilizers = lines
            .iter()
            .map(|l| (*l, group.stabilizer(&l.rep()).expect("nonzero")))
            .collect();
        let hs = lines
            .iter()
            .map(|l| {
                let h = match method {
                    Method::Fast => group.build_h(l),
                    Method::Oracle => group.build_h_by_scan(l),
                };
                (*l, h)
            })
            .collect();
        Classifier {
            group,
            stabilizers,
            hs,
        }
    }

    pub fn stabilizers(&self) -> &[(Line, Subset)] {
        &self.stabilizers
    }

    pub fn h_subgroups(&self) -> &[(Line, Subset)] {
        &self.hs
    }

    /// Classifies an intersecting set of size qd.
    pub fn classify(&self, set: &Subset) -> Result<CliqueReport> {
        let spec = self.group.spec();
        let expected = spec.qd();
        if set.count() != expected {
            return Err(Error::WrongSize {
                expected,
                actual: set.count(),
            });
        }
        let (x, base) = normalize(self.group, set)?;
        let stab = self
            .stabilizers
            .iter()
            .find(|(_, s)| base.is_subset(s))
            .map(|(l, _)| *l);
        let h = self.hs.iter().find(|(_, h)| base == *h).map(|(l, _)| *l);
        let classification = match (stab, h) {
            (Some(l), _) => Classification::StabilizerCoset {
                v: l.rep().to_array(),
                x,
            },
            (None, Some(l)) => Classification::HCoset {
                line: l.rep().to_array(),
                x,
            },
            (None, None) => Classification::Other,
        };
        let theorem_scope = spec.in_theorem_scope();
        Ok(CliqueReport {
            members: set.clone(),
            size: expected,
            theorem_violation: theorem_scope && classification == Classification::Other,
            ambiguous: stab.is_some() && h.is_some(),
            classification,
            theorem_scope,
        })
    }

    /// Rebuilds the set named by a classification.
    pub fn reproduce(&self, c: &Classification) -> Option<Subset> {
        let f = self.group.field();
        let find = |list: &[(Line, Subset)], rep: [u32; 2]| {
            let v = Vec2::new(f.scalar(rep[0]), f.scalar(rep[1]));
            list.iter().find(|(l, _)| l.rep() == v).map(|(_, s)| s.clone())
        };
        match *c {
            Classification::StabilizerCoset { v, x } => {
                find(&self.stabilizers, v).map(|s| self.group.left_coset(x, &s))
            }
            Classification::HCoset { line, x } => {
                find(&self.hs, line).map(|s| self.group.left_coset(x, &s))
            }
            Classification::Other => None,
        }
    }
}

pub fn classify_maximum(group: &GroupTable, set: &Subset) -> Result<CliqueReport> {
    Classifier::new(group, Method::Fast).classify(set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{GroupSpec, IDENTITY};

    fn group(p: u32, k: u32, d: u32) -> GroupTable {
        GroupTable::build(GroupSpec::from_params(p, k, d).unwrap())
    }

    #[test]
    fn stabilizer_is_its_own_coset() {
        let g = group(3, 1, 2);
        let st = g.stabilizer(&Vec2::e0()).unwrap();
        let r = classify_maximum(&g, &st).unwrap();
        assert_eq!(r.classification, Classification::StabilizerCoset { v: [1, 0], x: IDENTITY });
        assert!(!r.ambiguous && !r.theorem_violation && r.theorem_scope);
    }

    #[test]
    fn h_cosets_are_recognised_and_reproduced() {
        let g = group(5, 1, 2);
        let c = Classifier::new(&g, Method::Fast);
        for (l, h) in c.h_subgroups().to_vec() {
            for x in [0, 1, 57, 239] {
                let coset = g.left_coset(x, &h);
                let r = c.classify(&coset).unwrap();
                match r.classification {
                    Classification::HCoset { line, .. } => assert_eq!(line, l.rep().to_array()),
                    ref other => panic!("{other:?}"),
                }
                assert_eq!(c.reproduce(&r.classification), Some(coset));
            }
        }
    }

    #[test]
    fn wrong_size_rejected() {
        let g = group(3, 1, 2);
        assert_eq!(
            classify_maximum(&g, &g.subset([IDENTITY])),
            Err(Error::WrongSize { expected: 6, actual: 1 })
        );
    }

    #[test]
    fn non_coset_is_other() {
        let g = group(3, 1, 2);
        // a stabilizer with one member swapped out is neither family
        let mut set = g.stabilizer(&Vec2::e0()).unwrap();
        let inside = set.iter().nth(1).unwrap();
        let outside = (0..g.size()).find(|&i| !set.contains(i)).unwrap();
        set.remove(inside);
        set.insert(outside);
        let r = classify_maximum(&g, &set).unwrap();
        assert_eq!(r.classification, Classification::Other);
        assert!(r.theorem_violation);
    }

    #[test]
    fn d1_stabilizers_and_h_can_coincide() {
        // in SL_2 the H subgroup of a line is the stabilizer of its vectors
        let g = group(3, 1, 1);
        let c = Classifier::new(&g, Method::Fast);
        for (l, h) in c.h_subgroups() {
            let r = c.classify(h).unwrap();
            assert!(r.ambiguous);
            assert_eq!(r.classification, Classification::StabilizerCoset { v: l.rep().to_array(), x: 0 });
            assert!(!r.theorem_scope);
        }
    }
}
