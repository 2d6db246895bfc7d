//! Matrix-shape and counting properties of intersecting sets through the
//! identity, stated in a basis B = {v, w}.
//!
//! For an intersecting F containing Id, write F0 = F \ {Id}. With
//! x in F0 ∩ G_v and y in F0 ∩ G_w:
//!
//! * [x]_B = [[1, c], [0, l]] with l in det(G);
//! * [y]_B = [[1 + c a, 0], [(l - 1) a, 1]] for some nonzero a;
//! * if some such x is diagonal and F ∩ G_w ≠ {Id}, then F ∩ G_v ⊆ G_<w>;
//! * |F0 ∩ G_w| ≤ q - 1 when F0 ∩ G_v ⊆ G_<w>, and ≤ d - 1 otherwise;
//!   symmetrically |F0 ∩ G_v| ≤ d - 1 when F0 ∩ G_w ⊄ G_<v>;
//! * if x also preserves <w>, then y(v) - v ∈ <w>.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::Scalar;
use crate::groups::{GroupTable, Subset, IDENTITY};
use crate::linalg2::{Line, Mat2, Vec2};

use super::is_intersecting;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    /// Number of individual assertions evaluated (vacuous ones excluded).
    pub checked: usize,
    pub violations: Vec<String>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn merge(&mut self, other: CheckReport) {
        self.checked += other.checked;
        self.violations.extend(other.violations);
    }

    fn assert(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.violations.push(what());
        }
    }
}

/// Bound on |F0 ∩ G_w| given that F0 ∩ G_v is nonempty.
pub fn epsilon_bound(q: usize, d: usize, contained_in_line_stabilizer: bool) -> usize {
    if contained_in_line_stabilizer {
        q - 1
    } else {
        d - 1
    }
}

struct Frame<'a> {
    group: &'a GroupTable,
    v: Vec2,
    w: Vec2,
    f0_v: Vec<usize>,
    f0_w: Vec<usize>,
    preserves_w: Subset,
    preserves_v: Subset,
}

impl<'a> Frame<'a> {
    fn new(group: &'a GroupTable, set: &Subset, v: Vec2, w: Vec2) -> Result<Self> {
        if !set.contains(IDENTITY) {
            return Err(Error::MissingIdentity);
        }
        if !is_intersecting(group, set) {
            return Err(Error::NotIntersecting);
        }
        let f = group.field();
        if Mat2::from_columns(v, w).det(f).is_zero() {
            return Err(Error::DependentBasis);
        }
        let mut f0 = set.clone();
        f0.remove(IDENTITY);
        let f0_v = f0.intersection(&group.stabilizer(&v)?).to_vec();
        let f0_w = f0.intersection(&group.stabilizer(&w)?).to_vec();
        Ok(Frame {
            group,
            v,
            w,
            f0_v,
            f0_w,
            preserves_w: group.line_stabilizer(&Line::of(w, f)?),
            preserves_v: group.line_stabilizer(&Line::of(v, f)?),
        })
    }

    fn in_basis(&self, g: usize) -> Mat2 {
        self.group.in_basis(g, self.v, self.w).expect("independent")
    }
}

/// Shape of [x]_B for x in F0 ∩ G_v, and of [y]_B for y in F0 ∩ G_w
/// relative to each such x.
pub fn check_lemma_shapes(group: &GroupTable, set: &Subset, v: Vec2, w: Vec2) -> Result<CheckReport> {
    let fr = Frame::new(group, set, v, w)?;
    let f = group.field();
    let det = group.spec().det_group();
    let mut report = CheckReport::default();
    for &x in &fr.f0_v {
        let bx = fr.in_basis(x);
        report.assert(
            bx.a == Scalar::ONE && bx.c.is_zero() && det.contains(bx.d),
            || format!("element {x} fixing v has [x]_B = {:?}, not [[1,c],[0,l]]", bx.to_array()),
        );
        let (c, lambda) = (bx.b, bx.d);
        for &y in &fr.f0_w {
            let by = fr.in_basis(y);
            let fits = by.b.is_zero()
                && by.d == Scalar::ONE
                && f.nonzero_scalars().any(|alpha| {
                    by.a == f.add(Scalar::ONE, f.mul(c, alpha))
                        && by.c == f.mul(f.sub(lambda, Scalar::ONE), alpha)
                });
            report.assert(fits, || {
                format!(
                    "element {y} fixing w has [y]_B = {:?}, not [[1+ca,0],[(l-1)a,1]] for c={c}, l={lambda}",
                    by.to_array()
                )
            });
        }
    }
    Ok(report)
}

/// The three consequences of the shape lemma: diagonal forcing, the
/// epsilon bounds, and y(v) - v ∈ <w>.
pub fn check_corollaries(group: &GroupTable, set: &Subset, v: Vec2, w: Vec2) -> Result<CheckReport> {
    let fr = Frame::new(group, set, v, w)?;
    let f = group.field();
    let spec = group.spec();
    let (q, d) = (spec.q(), spec.d());
    let w_line = Line::of(w, f)?;
    let mut report = CheckReport::default();

    let has_diagonal = fr.f0_v.iter().any(|&x| fr.in_basis(x).b.is_zero());
    if has_diagonal && !fr.f0_w.is_empty() {
        for &z in &fr.f0_v {
            report.assert(fr.preserves_w.contains(z), || {
                format!("element {z} fixes v but moves <w> although a diagonal element is present")
            });
        }
    }

    if !fr.f0_v.is_empty() {
        let contained = fr.f0_v.iter().all(|&x| fr.preserves_w.contains(x));
        let eps = epsilon_bound(q, d, contained);
        report.assert(fr.f0_w.len() <= eps, || {
            format!("|F0 ∩ G_w| = {} exceeds {eps}", fr.f0_w.len())
        });
    }
    if fr.f0_w.iter().any(|&y| !fr.preserves_v.contains(y)) {
        report.assert(fr.f0_v.len() < d, || {
            format!("|F0 ∩ G_v| = {} exceeds d - 1 = {}", fr.f0_v.len(), d - 1)
        });
    }

    if fr.f0_v.iter().any(|&x| fr.preserves_w.contains(x)) {
        for &y in &fr.f0_w {
            let moved = group.element(y).apply(&v, f).sub(&v, f);
            report.assert(w_line.contains(&moved, f), || {
                format!("element {y} fixing w moves v off v + <w>")
            });
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::GroupSpec;

    fn group(p: u32, k: u32, d: u32) -> GroupTable {
        GroupTable::build(GroupSpec::from_params(p, k, d).unwrap())
    }

    #[test]
    fn vacuous_and_error_cases() {
        let g = group(5, 1, 2);
        let (v, w) = (Vec2::e0(), Vec2::e1());
        let id = g.subset([IDENTITY]);
        let r = check_lemma_shapes(&g, &id, v, w).unwrap();
        assert!(r.passed() && r.checked == 0);
        assert!(check_corollaries(&g, &id, v, w).unwrap().passed());
        assert_eq!(check_lemma_shapes(&g, &g.subset([1]), v, w), Err(Error::MissingIdentity));
        assert_eq!(check_lemma_shapes(&g, &g.full_subset(), v, w), Err(Error::NotIntersecting));
        assert_eq!(check_corollaries(&g, &id, v, v), Err(Error::DependentBasis));
    }

    #[test]
    fn stabilizer_passes() {
        let g = group(5, 1, 4);
        let st = g.stabilizer(&Vec2::e0()).unwrap();
        let f = g.field();
        for w in [Vec2::e1(), Vec2::new(f.scalar(2), f.scalar(3))] {
            let r = check_lemma_shapes(&g, &st, Vec2::e0(), w).unwrap();
            assert!(r.passed(), "{:?}", r.violations);
            assert_eq!(r.checked, 19);
            assert!(check_corollaries(&g, &st, Vec2::e0(), w).unwrap().passed());
        }
    }

    #[test]
    fn epsilon_examples() {
        assert_eq!(epsilon_bound(5, 2, false), 1);
        assert_eq!(epsilon_bound(5, 2, true), 4);
    }

    #[test]
    fn h_subgroups_pass_in_every_frame() {
        let g = group(5, 1, 2);
        let f = g.field();
        for l in Line::all(f) {
            let h = g.build_h(&l);
            for v in Vec2::all_nonzero(f) {
                for w in Vec2::all_nonzero(f).step_by(5) {
                    if Mat2::from_columns(v, w).det(f).is_zero() {
                        continue;
                    }
                    let a = check_lemma_shapes(&g, &h, v, w).unwrap();
                    let b = check_corollaries(&g, &h, v, w).unwrap();
                    assert!(a.passed() && b.passed(), "{:?} {:?}", a.violations, b.violations);
                }
            }
        }
    }
}
