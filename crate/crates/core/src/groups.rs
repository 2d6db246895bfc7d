//! The group G = det^-1(D) for a subgroup D of F_q^*, enumerated explicitly.
//!
//! Elements are numbered in lexicographic order of their (a, b, c, d)
//! scalar indices, except that the identity is moved to index 0. Subsets of
//! G are bit sets over these indices, so every set-valued result is
//! reproducible bit for bit.

use std::collections::HashMap;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::gf::{DetSubgroup, Field};
use crate::linalg2::{change_of_basis, Line, Mat2, Vec2};

/// A set of group elements, by index.
pub type Subset = BitSet;

pub const IDENTITY: usize = 0;

#[derive(Clone, Debug)]
pub struct GroupSpec {
    field: Field,
    det: DetSubgroup,
}

impl GroupSpec {
    pub fn new(field: Field, d: u32) -> Result<Self> {
        let det = field.unit_subgroup(d)?;
        Ok(GroupSpec { field, det })
    }

    pub fn from_params(p: u32, k: u32, d: u32) -> Result<Self> {
        GroupSpec::new(Field::new(p, k)?, d)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn det_group(&self) -> &DetSubgroup {
        &self.det
    }

    pub fn q(&self) -> usize {
        self.field.q() as usize
    }

    pub fn d(&self) -> usize {
        self.det.order()
    }

    /// `q d`: the common order of point stabilizers and of the H subgroups.
    pub fn qd(&self) -> usize {
        self.q() * self.d()
    }

    /// `q (q^2 - 1) d`.
    pub fn expected_order(&self) -> usize {
        let q = self.q();
        q * (q * q - 1) * self.d()
    }

    /// G strictly contains SL_2, which is what the EKR theorems assume.
    pub fn in_theorem_scope(&self) -> bool {
        self.d() >= 2
    }
}

#[derive(Clone, Debug)]
pub struct GroupTable {
    spec: GroupSpec,
    elements: Vec<Mat2>,
    index: HashMap<Mat2, u32>,
    inverse: Vec<u32>,
}

impl GroupTable {
    pub fn build(spec: GroupSpec) -> Self {
        let f = &spec.field;
        let mut elements: Vec<Mat2> = Mat2::all(f)
            .filter(|m| spec.det.contains(m.det(f)))
            .collect();
        let id = elements
            .iter()
            .position(|m| *m == Mat2::identity())
            .expect("identity has determinant 1");
        elements[..=id].rotate_right(1);
        let index: HashMap<Mat2, u32> = elements
            .iter()
            .enumerate()
            .map(|(i, m)| (*m, i as u32))
            .collect();
        let inverse = elements
            .iter()
            .map(|m| index[&m.inverse(f).expect("invertible")])
            .collect();
        GroupTable {
            spec,
            elements,
            index,
            inverse,
        }
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn field(&self) -> &Field {
        &self.spec.field
    }

    pub fn size(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Mat2] {
        &self.elements
    }

    #[inline]
    pub fn element(&self, i: usize) -> &Mat2 {
        &self.elements[i]
    }

    #[inline]
    pub fn index_of(&self, m: &Mat2) -> Option<usize> {
        self.index.get(m).map(|&i| i as usize)
    }

    #[inline]
    pub fn inverse(&self, i: usize) -> usize {
        self.inverse[i] as usize
    }

    /// Index of `elements[i] * elements[j]`.
    #[inline]
    pub fn mul(&self, i: usize, j: usize) -> usize {
        let m = self.elements[i].mul(&self.elements[j], self.field());
        self.index[&m] as usize
    }

    pub fn empty_subset(&self) -> Subset {
        Subset::new(self.size())
    }

    pub fn full_subset(&self) -> Subset {
        Subset::full(self.size())
    }

    pub fn subset<I: IntoIterator<Item = usize>>(&self, items: I) -> Subset {
        Subset::from_indices(self.size(), items)
    }

    pub fn filter<P: Fn(&Mat2) -> bool>(&self, pred: P) -> Subset {
        self.subset(
            self.elements
                .iter()
                .enumerate()
                .filter(|(_, m)| pred(m))
                .map(|(i, _)| i),
        )
    }

    /// G_v, the pointwise stabilizer of `v`.
    pub fn stabilizer(&self, v: &Vec2) -> Result<Subset> {
        if v.is_zero() {
            return Err(Error::ZeroVector);
        }
        let f = self.field();
        Ok(self.filter(|m| m.apply(v, f) == *v))
    }

    /// The orbit of `v`, sorted.
    pub fn orbit(&self, v: &Vec2) -> Result<Vec<Vec2>> {
        if v.is_zero() {
            return Err(Error::ZeroVector);
        }
        let f = self.field();
        let mut out: Vec<Vec2> = self.elements.iter().map(|m| m.apply(v, f)).collect();
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    /// G_<w>, the setwise stabilizer of a line.
    pub fn line_stabilizer(&self, line: &Line) -> Subset {
        let f = self.field();
        let rep = line.rep();
        self.filter(|m| line.contains(&m.apply(&rep, f), f))
    }

    /// H_<w> = { M : Mu - u in <w> for all u }, tested on the basis
    /// `{complement, rep}` only.
    pub fn build_h(&self, line: &Line) -> Subset {
        let f = self.field();
        let (v0, w) = (line.complement(), line.rep());
        self.filter(|m| {
            line.contains(&m.apply(&v0, f).sub(&v0, f), f)
                && line.contains(&m.apply(&w, f).sub(&w, f), f)
        })
    }

    /// H_<w> by testing every vector of V.
    pub fn build_h_by_scan(&self, line: &Line) -> Subset {
        let f = self.field();
        self.filter(|m| Vec2::all(f).all(|u| line.contains(&m.apply(&u, f).sub(&u, f), f)))
    }

    /// `x S`.
    pub fn left_coset(&self, x: usize, s: &Subset) -> Subset {
        self.subset(s.iter().map(|i| self.mul(x, i)))
    }

    /// Whether `s` is nonempty and closed under products and inverses.
    pub fn is_subgroup(&self, s: &Subset) -> bool {
        !s.is_empty()
            && s.iter().all(|i| s.contains(self.inverse(i)))
            && s.iter().all(|i| s.iter().all(|j| s.contains(self.mul(i, j))))
    }

    /// `[g]_B` for the basis `B = {v, w}`.
    pub fn in_basis(&self, g: usize, v: Vec2, w: Vec2) -> Result<Mat2> {
        change_of_basis(v, w, &self.elements[g], self.field())
    }
}
