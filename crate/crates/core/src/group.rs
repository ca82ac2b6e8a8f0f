//! Concrete compact matrix Lie groups.
//!
//! Every group lives inside complex `N x N` matrices: `U(n)`, `SU(n)`,
//! `SO(n)` (real entries enforced by the membership residual), diagonal tori
//! `T^k`, and block-diagonal products of these. The Lie algebra is stored as
//! an explicit ordered basis of anti-Hermitian matrices, so elements of the
//! algebra have both a coordinate vector and a matrix realization.

use std::sync::Arc;

use rand::Rng;

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::{
    c, cr, exp_anti_hermitian, flatten_basis, identity, pinv, polar_unitary, to_real_vec, CMat,
    RMat, RVec,
};
use crate::rng::{gaussian, stream};

/// Group family tag. Products embed block-diagonally in the ambient space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    Unitary(usize),
    SpecialUnitary(usize),
    SpecialOrthogonal(usize),
    Torus(usize),
    Product(Vec<Family>),
}

impl Family {
    pub fn ambient_size(&self) -> usize {
        match self {
            Family::Unitary(n) | Family::SpecialUnitary(n) | Family::SpecialOrthogonal(n) => *n,
            Family::Torus(k) => *k,
            Family::Product(fs) => fs.iter().map(|f| f.ambient_size()).sum(),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Family::Unitary(n) => n * n,
            Family::SpecialUnitary(n) => n * n - 1,
            Family::SpecialOrthogonal(n) => n * (n - 1) / 2,
            Family::Torus(k) => *k,
            Family::Product(fs) => fs.iter().map(|f| f.dim()).sum(),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Family::Unitary(n) => format!("U({n})"),
            Family::SpecialUnitary(n) => format!("SU({n})"),
            Family::SpecialOrthogonal(n) => format!("SO({n})"),
            Family::Torus(k) => format!("T^{k}"),
            Family::Product(fs) => {
                let parts: Vec<String> = fs.iter().map(|f| f.label()).collect();
                parts.join(" x ")
            }
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Family::Unitary(n) | Family::SpecialUnitary(n) | Family::SpecialOrthogonal(n) => {
                if *n == 0 {
                    return Err(Error::InvalidParameter {
                        family: self.label(),
                        message: "matrix size must be at least 1".into(),
                    });
                }
            }
            Family::Torus(_) => {}
            Family::Product(fs) => {
                if fs.is_empty() {
                    return Err(Error::InvalidParameter {
                        family: "product".into(),
                        message: "product of no factors".into(),
                    });
                }
                for f in fs {
                    f.validate()?;
                }
            }
        }
        Ok(())
    }

    /// Leaf factors with their block offsets in the ambient space.
    fn leaves(&self) -> Vec<(Family, usize)> {
        fn walk(f: &Family, offset: usize, out: &mut Vec<(Family, usize)>) {
            match f {
                Family::Product(fs) => {
                    let mut pos = offset;
                    for sub in fs {
                        walk(sub, pos, out);
                        pos += sub.ambient_size();
                    }
                }
                leaf => out.push((leaf.clone(), offset)),
            }
        }
        let mut out = Vec::new();
        walk(self, 0, &mut out);
        out
    }
}

/// A compact matrix group with an explicit Lie algebra basis.
#[derive(Debug)]
pub struct GroupDescriptor {
    pub family: Family,
    pub ambient_size: usize,
    pub algebra_basis: Vec<CMat>,
    pub dim: usize,
    pub membership_tol: f64,
    basis_flat: RMat,
    basis_pinv: RMat,
    gram_inv: RMat,
}

/// Shared handle to a group descriptor.
pub type Group = Arc<GroupDescriptor>;

fn e_matrix(n: usize, i: usize, j: usize) -> CMat {
    let mut m = CMat::zeros(n, n);
    m[(i, j)] = cr(1.0);
    m
}

/// Canonical anti-Hermitian basis of a leaf family, embedded at `offset` in
/// an `n x n` ambient space.
fn leaf_basis(family: &Family, n: usize, offset: usize) -> Vec<CMat> {
    let mut basis = Vec::new();
    match family {
        Family::Unitary(k) => {
            for a in 0..*k {
                basis.push(e_matrix(n, offset + a, offset + a) * c(0.0, 1.0));
            }
            for a in 0..*k {
                for b in a + 1..*k {
                    basis.push(
                        e_matrix(n, offset + a, offset + b) - e_matrix(n, offset + b, offset + a),
                    );
                    basis.push(
                        (e_matrix(n, offset + a, offset + b) + e_matrix(n, offset + b, offset + a))
                            * c(0.0, 1.0),
                    );
                }
            }
        }
        Family::SpecialUnitary(k) => {
            for a in 0..k - 1 {
                basis.push(
                    (e_matrix(n, offset + a, offset + a)
                        - e_matrix(n, offset + a + 1, offset + a + 1))
                        * c(0.0, 1.0),
                );
            }
            for a in 0..*k {
                for b in a + 1..*k {
                    basis.push(
                        e_matrix(n, offset + a, offset + b) - e_matrix(n, offset + b, offset + a),
                    );
                    basis.push(
                        (e_matrix(n, offset + a, offset + b) + e_matrix(n, offset + b, offset + a))
                            * c(0.0, 1.0),
                    );
                }
            }
        }
        Family::SpecialOrthogonal(k) => {
            for a in 0..*k {
                for b in a + 1..*k {
                    basis.push(
                        e_matrix(n, offset + a, offset + b) - e_matrix(n, offset + b, offset + a),
                    );
                }
            }
        }
        Family::Torus(k) => {
            for a in 0..*k {
                basis.push(e_matrix(n, offset + a, offset + a) * c(0.0, 1.0));
            }
        }
        Family::Product(_) => unreachable!("leaf_basis called on a product"),
    }
    basis
}

impl GroupDescriptor {
    /// Build a group with the default membership tolerance.
    pub fn new(family: Family) -> Result<Group> {
        Self::with_tolerance(family, Tolerances::default().membership)
    }

    pub fn with_tolerance(family: Family, membership_tol: f64) -> Result<Group> {
        family.validate()?;
        let n = family.ambient_size();
        let mut basis = Vec::new();
        for (leaf, offset) in family.leaves() {
            basis.extend(leaf_basis(&leaf, n, offset));
        }
        let dim = basis.len();
        debug_assert_eq!(dim, family.dim());
        let basis_flat = flatten_basis(&basis);
        let basis_pinv = pinv(&basis_flat, 1e-13);
        // Gram matrix of the basis in the real Frobenius inner product; its
        // inverse converts coordinate differentials into steepest-descent
        // directions when the basis is not orthonormal.
        let gram = basis_flat.transpose() * &basis_flat;
        let gram_inv = if dim > 0 {
            gram.try_inverse()
                .ok_or_else(|| Error::Internal("algebra Gram matrix is singular".into()))?
        } else {
            RMat::zeros(0, 0)
        };
        let desc = GroupDescriptor {
            family,
            ambient_size: n,
            algebra_basis: basis,
            dim,
            membership_tol,
            basis_flat,
            basis_pinv,
            gram_inv,
        };
        desc.validate_invariants()?;
        Ok(Arc::new(desc))
    }

    /// Structural checks on the algebra basis: anti-Hermitian, linearly
    /// independent, closed under the bracket.
    fn validate_invariants(&self) -> Result<()> {
        for b in &self.algebra_basis {
            if (b + b.adjoint()).norm() > 1e-12 {
                return Err(Error::Internal("basis matrix is not anti-Hermitian".into()));
            }
        }
        if self.dim > 0 {
            let svd = self.basis_flat.clone().svd(false, false);
            if svd.singular_values.min() <= 1e-9 {
                return Err(Error::Internal(
                    "basis matrices are linearly dependent".into(),
                ));
            }
            for i in 0..self.dim {
                for j in i + 1..self.dim {
                    let br = &self.algebra_basis[i] * &self.algebra_basis[j]
                        - &self.algebra_basis[j] * &self.algebra_basis[i];
                    let (_, resid) = self.project_to_algebra(&br);
                    if resid > 1e-9 {
                        return Err(Error::Internal(format!(
                            "bracket closure violated: residual {resid:.3e}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Membership residual of a single leaf block.
    fn leaf_residual(family: &Family, block: &CMat) -> f64 {
        let n = block.nrows();
        let unitary = (block.adjoint() * block - identity(n)).norm();
        match family {
            Family::Unitary(_) => unitary,
            Family::SpecialUnitary(_) => unitary + (block.determinant() - cr(1.0)).norm(),
            Family::SpecialOrthogonal(_) => {
                let im = block.map(|z| c(0.0, z.im)).norm();
                unitary + (block.determinant() - cr(1.0)).norm() + im
            }
            Family::Torus(_) => {
                let mut off = 0.0;
                for i in 0..n {
                    for j in 0..n {
                        if i != j {
                            off += block[(i, j)].norm_sqr();
                        }
                    }
                }
                unitary + off.sqrt()
            }
            Family::Product(_) => unreachable!(),
        }
    }

    /// Membership residual: unitarity plus family-specific penalties, plus
    /// off-block mass for products.
    pub fn membership_residual(&self, m: &CMat) -> Result<f64> {
        if m.nrows() != self.ambient_size || m.ncols() != self.ambient_size {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_size,
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        let leaves = self.family.leaves();
        let mut residual = 0.0;
        if leaves.len() > 1 {
            let mut off_block = 0.0;
            for i in 0..self.ambient_size {
                for j in 0..self.ambient_size {
                    let inside = leaves.iter().any(|(f, o)| {
                        i >= *o && i < o + f.ambient_size() && j >= *o && j < o + f.ambient_size()
                    });
                    if !inside {
                        off_block += m[(i, j)].norm_sqr();
                    }
                }
            }
            residual += off_block.sqrt();
        }
        for (leaf, offset) in &leaves {
            let k = leaf.ambient_size();
            let block = m.view((*offset, *offset), (k, k)).clone_owned();
            residual += Self::leaf_residual(leaf, &block);
        }
        Ok(residual)
    }

    /// Membership test together with the residual that produced it.
    pub fn contains(&self, m: &CMat) -> Result<(bool, f64)> {
        let r = self.membership_residual(m)?;
        Ok((r <= self.membership_tol, r))
    }

    /// Coordinates of the orthogonal projection of `m` onto the span of the
    /// algebra basis, with the projection residual.
    pub fn project_to_algebra(&self, m: &CMat) -> (RVec, f64) {
        if self.dim == 0 {
            return (RVec::zeros(0), m.norm());
        }
        let v = to_real_vec(m);
        let coords = &self.basis_pinv * &v;
        let resid = (&self.basis_flat * &coords - v).norm();
        (coords, resid)
    }

    /// Inverse Gram matrix of the algebra basis: maps coordinate
    /// differentials to steepest-descent coordinate directions.
    pub fn gram_inverse(&self) -> &RMat {
        &self.gram_inv
    }

    /// Matrix realization of algebra coordinates.
    pub fn algebra_matrix(&self, coords: &RVec) -> CMat {
        let mut m = CMat::zeros(self.ambient_size, self.ambient_size);
        for (i, b) in self.algebra_basis.iter().enumerate() {
            m += b * cr(coords[i]);
        }
        m
    }
}

/// Group element: a matrix that passes the membership test.
#[derive(Clone, Debug)]
pub struct GroupElement {
    pub matrix: CMat,
    pub group: Group,
}

/// Lie algebra element: coordinates in the group's basis and their matrix.
#[derive(Clone, Debug)]
pub struct AlgebraElement {
    pub coords: RVec,
    pub matrix: CMat,
    pub group: Group,
}

impl AlgebraElement {
    pub fn from_coords(group: &Group, coords: RVec) -> Self {
        let matrix = group.algebra_matrix(&coords);
        AlgebraElement {
            coords,
            matrix,
            group: group.clone(),
        }
    }

    /// Project an ambient matrix into the algebra; the residual reports how
    /// far it was from the span.
    pub fn from_matrix(group: &Group, m: &CMat) -> (Self, f64) {
        let (coords, resid) = group.project_to_algebra(m);
        (Self::from_coords(group, coords), resid)
    }

    pub fn norm(&self) -> f64 {
        self.matrix.norm()
    }
}

impl GroupElement {
    /// Wrap a matrix after checking membership.
    pub fn new(group: &Group, matrix: CMat) -> Result<Self> {
        let (ok, residual) = group.contains(&matrix)?;
        if !ok {
            return Err(Error::ProjectionFailed { residual });
        }
        Ok(GroupElement {
            matrix,
            group: group.clone(),
        })
    }

    /// Wrap a matrix without re-checking membership. For hot paths whose
    /// inputs are group elements by construction.
    pub fn new_unchecked(group: &Group, matrix: CMat) -> Self {
        GroupElement {
            matrix,
            group: group.clone(),
        }
    }

    pub fn identity(group: &Group) -> Self {
        GroupElement {
            matrix: identity(group.ambient_size),
            group: group.clone(),
        }
    }

    pub fn mul(&self, other: &GroupElement) -> Result<GroupElement> {
        if self.group.family != other.group.family {
            return Err(Error::GroupMismatch);
        }
        Ok(GroupElement {
            matrix: &self.matrix * &other.matrix,
            group: self.group.clone(),
        })
    }

    /// Inverse; equals the adjoint for unitary matrices.
    pub fn inverse(&self) -> GroupElement {
        GroupElement {
            matrix: self.matrix.adjoint(),
            group: self.group.clone(),
        }
    }

    pub fn dist(&self, other: &GroupElement) -> f64 {
        (&self.matrix - &other.matrix).norm()
    }

    pub fn pow(&self, n: u32) -> GroupElement {
        let mut acc = identity(self.group.ambient_size);
        for _ in 0..n {
            acc *= &self.matrix;
        }
        GroupElement {
            matrix: acc,
            group: self.group.clone(),
        }
    }
}

/// Exponential map from the algebra into the group.
pub fn exp_map(x: &AlgebraElement) -> Result<GroupElement> {
    let norm = x.matrix.norm();
    if norm > 1e3 {
        return Err(Error::ExpOverflow { norm });
    }
    Ok(GroupElement {
        matrix: exp_anti_hermitian(&x.matrix),
        group: x.group.clone(),
    })
}

/// Deterministic random group element: the product of two Gaussian algebra
/// exponentials. Full support on the identity component, not Haar.
pub fn random_element(group: &Group, seed: u64) -> GroupElement {
    let mut rng = stream(seed, 0x9e3);
    let draw = |rng: &mut rand_chacha::ChaCha8Rng| {
        let coords = RVec::from_fn(group.dim, |_, _| gaussian(rng) * 0.8);
        exp_anti_hermitian(&group.algebra_matrix(&coords))
    };
    let m = draw(&mut rng) * draw(&mut rng);
    GroupElement {
        matrix: m,
        group: group.clone(),
    }
}

/// Random algebra element with independent Gaussian coordinates.
pub fn random_algebra<R: Rng>(group: &Group, rng: &mut R, scale: f64) -> AlgebraElement {
    let coords = RVec::from_fn(group.dim, |_, _| gaussian(rng) * scale);
    AlgebraElement::from_coords(group, coords)
}

fn project_leaf(family: &Family, block: &CMat) -> Result<CMat> {
    match family {
        Family::Unitary(_) => polar_unitary(block),
        Family::SpecialUnitary(k) => {
            let u = polar_unitary(block)?;
            let delta = u.determinant().arg();
            Ok(u * c((-delta / *k as f64).cos(), (-delta / *k as f64).sin()))
        }
        Family::SpecialOrthogonal(k) => {
            let re = block.map(|z| cr(z.re));
            let u = polar_unitary(&re)?;
            // The polar factor of a real matrix is real orthogonal; a
            // negative determinant cannot be repaired by a nearby rotation.
            if (u.determinant() - cr(1.0)).norm() > 0.5 {
                return Err(Error::ProjectionFailed {
                    residual: (u.determinant() - cr(1.0)).norm(),
                });
            }
            let _ = k;
            Ok(u.map(|z| cr(z.re)))
        }
        Family::Torus(k) => {
            let mut d = CMat::zeros(*k, *k);
            for i in 0..*k {
                let z = block[(i, i)];
                let m = z.norm();
                if m < 0.5 {
                    return Err(Error::ProjectionFailed { residual: 1.0 - m });
                }
                d[(i, i)] = z / cr(m);
            }
            Ok(d)
        }
        Family::Product(_) => unreachable!(),
    }
}

/// Nearest-group-element projection: unitary polar factor followed by
/// family corrections (determinant phase, realification, diagonal
/// extraction), block by block for products.
pub fn project_to_group(group: &Group, m: &CMat) -> Result<GroupElement> {
    if m.nrows() != group.ambient_size || m.ncols() != group.ambient_size {
        return Err(Error::DimensionMismatch {
            expected: group.ambient_size,
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    let mut out = CMat::zeros(group.ambient_size, group.ambient_size);
    for (leaf, offset) in group.family.leaves() {
        let k = leaf.ambient_size();
        let block = m.view((offset, offset), (k, k)).clone_owned();
        let projected = project_leaf(&leaf, &block)?;
        out.view_mut((offset, offset), (k, k)).copy_from(&projected);
    }
    let (ok, residual) = group.contains(&out)?;
    if !ok {
        return Err(Error::ProjectionFailed { residual });
    }
    Ok(GroupElement {
        matrix: out,
        group: group.clone(),
    })
}
