//! 2x2 matrices and column vectors over F_q, and 1-dimensional subspaces.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{Field, Scalar};

/// A column vector `(x0, x1)^T`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Vec2 {
    pub x0: Scalar,
    pub x1: Scalar,
}

impl Vec2 {
    pub const fn new(x0: Scalar, x1: Scalar) -> Self {
        Vec2 { x0, x1 }
    }

    pub fn e0() -> Self {
        Vec2::new(Scalar::ONE, Scalar::ZERO)
    }

    pub fn e1() -> Self {
        Vec2::new(Scalar::ZERO, Scalar::ONE)
    }

    pub fn is_zero(&self) -> bool {
        self.x0.is_zero() && self.x1.is_zero()
    }

    pub fn add(&self, other: &Vec2, f: &Field) -> Vec2 {
        Vec2::new(f.add(self.x0, other.x0), f.add(self.x1, other.x1))
    }

    pub fn sub(&self, other: &Vec2, f: &Field) -> Vec2 {
        Vec2::new(f.sub(self.x0, other.x0), f.sub(self.x1, other.x1))
    }

    pub fn scale(&self, a: Scalar, f: &Field) -> Vec2 {
        Vec2::new(f.mul(a, self.x0), f.mul(a, self.x1))
    }

    /// All q^2 vectors, zero included, in index order.
    pub fn all(f: &Field) -> impl Iterator<Item = Vec2> + '_ {
        f.all_scalars()
            .flat_map(move |a| f.all_scalars().map(move |b| Vec2::new(a, b)))
    }

    pub fn all_nonzero(f: &Field) -> impl Iterator<Item = Vec2> + '_ {
        Vec2::all(f).filter(|v| !v.is_zero())
    }

    pub fn to_array(self) -> [u32; 2] {
        [self.x0.value(), self.x1.value()]
    }
}

/// The matrix `[[a, b], [c, d]]`, acting on column vectors from the left.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Mat2 {
    pub a: Scalar,
    pub b: Scalar,
    pub c: Scalar,
    pub d: Scalar,
}

impl Mat2 {
    pub const fn new(a: Scalar, b: Scalar, c: Scalar, d: Scalar) -> Self {
        Mat2 { a, b, c, d }
    }

    pub const fn identity() -> Self {
        Mat2::new(Scalar::ONE, Scalar::ZERO, Scalar::ZERO, Scalar::ONE)
    }

    /// The matrix whose columns are `u` and `v`.
    pub fn from_columns(u: Vec2, v: Vec2) -> Self {
        Mat2::new(u.x0, v.x0, u.x1, v.x1)
    }

    pub fn from_values(f: &Field, [a, b, c, d]: [u32; 4]) -> Self {
        Mat2::new(f.scalar(a), f.scalar(b), f.scalar(c), f.scalar(d))
    }

    pub fn to_array(self) -> [u32; 4] {
        [self.a.value(), self.b.value(), self.c.value(), self.d.value()]
    }

    pub fn col0(&self) -> Vec2 {
        Vec2::new(self.a, self.c)
    }

    pub fn col1(&self) -> Vec2 {
        Vec2::new(self.b, self.d)
    }

    pub fn mul(&self, n: &Mat2, f: &Field) -> Mat2 {
        Mat2::new(
            f.add(f.mul(self.a, n.a), f.mul(self.b, n.c)),
            f.add(f.mul(self.a, n.b), f.mul(self.b, n.d)),
            f.add(f.mul(self.c, n.a), f.mul(self.d, n.c)),
            f.add(f.mul(self.c, n.b), f.mul(self.d, n.d)),
        )
    }

    pub fn apply(&self, v: &Vec2, f: &Field) -> Vec2 {
        Vec2::new(
            f.add(f.mul(self.a, v.x0), f.mul(self.b, v.x1)),
            f.add(f.mul(self.c, v.x0), f.mul(self.d, v.x1)),
        )
    }

    pub fn det(&self, f: &Field) -> Scalar {
        f.sub(f.mul(self.a, self.d), f.mul(self.b, self.c))
    }

    /// Inverse via the adjugate.
    pub fn inverse(&self, f: &Field) -> Result<Mat2> {
        let det = self.det(f);
        let s = f.inv(det).map_err(|_| Error::Singular)?;
        Ok(Mat2::new(
            f.mul(s, self.d),
            f.mul(s, f.neg(self.b)),
            f.mul(s, f.neg(self.c)),
            f.mul(s, self.a),
        ))
    }

    pub fn minus_identity(&self, f: &Field) -> Mat2 {
        Mat2::new(f.sub(self.a, Scalar::ONE), self.b, self.c, f.sub(self.d, Scalar::ONE))
    }

    /// Whether some nonzero vector is fixed, i.e. det(M - I) = 0.
    #[inline]
    pub fn fixes_nonzero(&self, f: &Field) -> bool {
        self.minus_identity(f).det(f).is_zero()
    }

    /// Scan of all nonzero vectors; reference for [`Mat2::fixes_nonzero`].
    pub fn fixes_nonzero_by_scan(&self, f: &Field) -> bool {
        Vec2::all_nonzero(f).any(|v| self.apply(&v, f) == v)
    }

    /// Lines consisting of fixed vectors (eigenvalue exactly 1).
    pub fn fixed_lines(&self, f: &Field) -> Vec<Line> {
        let m = self.minus_identity(f);
        if m == Mat2::default() {
            return Line::all(f);
        }
        if !m.det(f).is_zero() {
            return Vec::new();
        }
        // rank one: the kernel is spanned by a vector orthogonal to a nonzero row
        let kernel = if !(m.a.is_zero() && m.b.is_zero()) {
            Vec2::new(f.neg(m.b), m.a)
        } else {
            Vec2::new(f.neg(m.d), m.c)
        };
        debug_assert!(m.apply(&kernel, f).is_zero());
        vec![Line::of(kernel, f).expect("nonzero kernel vector")]
    }

    /// Lines mapped onto themselves (any eigenvalue).
    pub fn invariant_lines(&self, f: &Field) -> Vec<Line> {
        Line::all(f)
            .into_iter()
            .filter(|l| l.contains(&self.apply(&l.rep(), f), f))
            .collect()
    }

    /// Every 2x2 matrix over `f`, in lexicographic order of (a, b, c, d).
    pub fn all(f: &Field) -> impl Iterator<Item = Mat2> + '_ {
        Vec2::all(f).flat_map(move |top| {
            Vec2::all(f).map(move |bottom| Mat2::new(top.x0, top.x1, bottom.x0, bottom.x1))
        })
    }
}

/// The matrix of `m` in the basis `{v, w}`: P^-1 M P with P = [v | w].
pub fn change_of_basis(v: Vec2, w: Vec2, m: &Mat2, f: &Field) -> Result<Mat2> {
    let p = Mat2::from_columns(v, w);
    let p_inv = p.inverse(f).map_err(|_| Error::DependentBasis)?;
    Ok(p_inv.mul(&m.mul(&p, f), f))
}

/// A 1-dimensional subspace, stored by its canonical representative: the
/// unique spanning vector whose first nonzero coordinate is 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Line {
    rep: Vec2,
}

impl Line {
    pub fn of(v: Vec2, f: &Field) -> Result<Line> {
        let lead = if !v.x0.is_zero() {
            v.x0
        } else if !v.x1.is_zero() {
            v.x1
        } else {
            return Err(Error::ZeroVector);
        };
        let s = f.inv(lead).expect("nonzero");
        Ok(Line { rep: v.scale(s, f) })
    }

    pub fn rep(&self) -> Vec2 {
        self.rep
    }

    /// The q+1 lines in the order (1,0), (1,1), ..., (1,q-1), (0,1).
    pub fn all(f: &Field) -> Vec<Line> {
        f.all_scalars()
            .map(|t| Line { rep: Vec2::new(Scalar::ONE, t) })
            .chain(std::iter::once(Line { rep: Vec2::e1() }))
            .collect()
    }

    /// Membership, with the zero vector in every line.
    pub fn contains(&self, v: &Vec2, f: &Field) -> bool {
        // v is a multiple of rep iff the 2x2 determinant vanishes
        f.sub(f.mul(self.rep.x0, v.x1), f.mul(self.rep.x1, v.x0)).is_zero()
    }

    /// A vector completing `rep` to a basis.
    pub fn complement(&self) -> Vec2 {
        if self.rep.x0.is_zero() {
            Vec2::e0()
        } else {
            Vec2::e1()
        }
    }
}
