//! Automorphisms of compact matrix groups in three realizations.
//!
//! * `Hol(B)`: holomorphic conjugation `g -> B g B^{-1}` by a unitary `B`,
//! * `AntiHol(B)`: `g -> B conj(g) B^{-1}` with entrywise conjugation (on a
//!   unitary group this composes transpose-inverse with an inner twist),
//! * `Lattice(M)`: on a torus, `exp(i diag(θ)) -> exp(i diag(Mθ))` for a
//!   unimodular integer matrix `M`. This is the only realization that can
//!   have infinite order or fail 1-semisimplicity.

use crate::config::Config;
use crate::error::{Error, Result};
use crate::group::{random_element, AlgebraElement, Family, Group, GroupElement};
use crate::int_linalg::{det, lattice_order, IntMat, LatticeOrder};
use crate::linalg::{c, nullspace, rank, thresholded_rank, CMat, RMat, RVec};

#[derive(Clone, Debug)]
pub enum Kind {
    Hol(CMat),
    AntiHol(CMat),
    Lattice(IntMat),
}

impl Kind {
    pub fn label(&self) -> &'static str {
        match self {
            Kind::Hol(_) => "hol",
            Kind::AntiHol(_) => "antihol",
            Kind::Lattice(_) => "lattice",
        }
    }
}

/// Differential of an automorphism as a real matrix in algebra coordinates.
#[derive(Clone, Debug)]
pub struct Differential {
    pub matrix: RMat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Order {
    Finite(u32),
    Infinite,
}

#[derive(Clone, Debug)]
pub struct Automorphism {
    pub kind: Kind,
    pub group: Group,
    differential: RMat,
}

const VALIDATION_SEED: u64 = 0xA070;

impl Automorphism {
    /// Construct and validate: the map must preserve the group on seeded
    /// samples, act as a homomorphism, and (for `Lattice`) be unimodular.
    pub fn new(kind: Kind, group: &Group) -> Result<Self> {
        let n = group.ambient_size;
        match &kind {
            Kind::Hol(b) | Kind::AntiHol(b) => {
                if b.nrows() != n || b.ncols() != n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        rows: b.nrows(),
                        cols: b.ncols(),
                    });
                }
                let unit = (b.adjoint() * b - CMat::identity(n, n)).norm();
                if unit > 1e-9 {
                    return Err(Error::NotAnAutomorphism { residual: unit });
                }
            }
            Kind::Lattice(m) => {
                if !matches!(group.family, Family::Torus(_)) {
                    return Err(Error::LatticeOnNonTorus);
                }
                if m.rows != n || m.cols != n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        rows: m.rows,
                        cols: m.cols,
                    });
                }
                let d = det(m)?;
                if d.abs() != 1 {
                    return Err(Error::NotUnimodular { det: d });
                }
            }
        }
        let mut auto = Automorphism {
            kind,
            group: group.clone(),
            differential: RMat::zeros(0, 0),
        };
        auto.check_preserves_group()?;
        auto.differential = auto.compute_differential()?;
        Ok(auto)
    }

    fn check_preserves_group(&self) -> Result<()> {
        let tol = self.group.membership_tol * 10.0;
        let mut worst: f64 = 0.0;
        for i in 0..50 {
            let g = random_element(&self.group, VALIDATION_SEED.wrapping_add(i));
            let image = self.apply_matrix(&g.matrix);
            let r = self.group.membership_residual(&image)?;
            worst = worst.max(r);
        }
        if worst > tol {
            return Err(Error::NotAnAutomorphism { residual: worst });
        }
        // Homomorphism on sample pairs.
        for i in 0..10 {
            let g = random_element(&self.group, VALIDATION_SEED.wrapping_add(100 + i));
            let h = random_element(&self.group, VALIDATION_SEED.wrapping_add(200 + i));
            let lhs = self.apply_matrix(&(&g.matrix * &h.matrix));
            let rhs = self.apply_matrix(&g.matrix) * self.apply_matrix(&h.matrix);
            let r = (lhs - rhs).norm();
            if r > 1e-9 {
                return Err(Error::NotAnAutomorphism { residual: r });
            }
        }
        Ok(())
    }

    /// Apply to a raw ambient matrix.
    pub fn apply_matrix(&self, m: &CMat) -> CMat {
        match &self.kind {
            Kind::Hol(b) => b * m * b.adjoint(),
            Kind::AntiHol(b) => b * m.conjugate() * b.adjoint(),
            Kind::Lattice(l) => {
                let k = self.group.ambient_size;
                let mut out = CMat::zeros(k, k);
                let phases: Vec<f64> = (0..k).map(|i| m[(i, i)].arg()).collect();
                for i in 0..k {
                    let theta: f64 = (0..k).map(|j| l[(i, j)] as f64 * phases[j]).sum();
                    out[(i, i)] = c(theta.cos(), theta.sin());
                }
                out
            }
        }
    }

    pub fn apply(&self, g: &GroupElement) -> Result<GroupElement> {
        if g.group.family != self.group.family {
            return Err(Error::GroupMismatch);
        }
        Ok(GroupElement::new_unchecked(
            &self.group,
            self.apply_matrix(&g.matrix),
        ))
    }

    /// Differential on an algebra matrix.
    pub fn d_matrix(&self, x: &CMat) -> CMat {
        match &self.kind {
            Kind::Hol(b) => b * x * b.adjoint(),
            Kind::AntiHol(b) => b * x.conjugate() * b.adjoint(),
            Kind::Lattice(l) => {
                let k = self.group.ambient_size;
                let mut out = CMat::zeros(k, k);
                for i in 0..k {
                    let mut acc = 0.0;
                    for j in 0..k {
                        acc += l[(i, j)] as f64 * x[(j, j)].im;
                    }
                    out[(i, i)] = c(0.0, acc);
                }
                out
            }
        }
    }

    fn compute_differential(&self) -> Result<RMat> {
        let d = self.group.dim;
        if let Kind::Lattice(l) = &self.kind {
            // The torus basis is i*E_11, ..., i*E_kk: the differential is M.
            return Ok(l.to_real());
        }
        let mut out = RMat::zeros(d, d);
        for (j, b) in self.group.algebra_basis.iter().enumerate() {
            let image = self.d_matrix(b);
            let (coords, resid) = self.group.project_to_algebra(&image);
            if resid > 1e-8 {
                return Err(Error::DifferentialNotInAlgebra { residual: resid });
            }
            out.set_column(j, &coords);
        }
        Ok(out)
    }

    pub fn differential(&self) -> Differential {
        Differential {
            matrix: self.differential.clone(),
        }
    }

    /// Differential applied to algebra coordinates.
    pub fn d_coords(&self, coords: &RVec) -> RVec {
        &self.differential * coords
    }

    pub fn d_algebra(&self, x: &AlgebraElement) -> AlgebraElement {
        AlgebraElement::from_coords(&self.group, self.d_coords(&x.coords))
    }

    /// Composition `self ∘ other`, normalized into a single realization.
    pub fn compose(&self, other: &Automorphism) -> Result<Automorphism> {
        if self.group.family != other.group.family {
            return Err(Error::GroupMismatch);
        }
        let kind = match (&self.kind, &other.kind) {
            (Kind::Hol(b1), Kind::Hol(b2)) => Kind::Hol(b1 * b2),
            (Kind::Hol(b1), Kind::AntiHol(b2)) => Kind::AntiHol(b1 * b2),
            (Kind::AntiHol(b1), Kind::Hol(b2)) => Kind::AntiHol(b1 * b2.conjugate()),
            (Kind::AntiHol(b1), Kind::AntiHol(b2)) => Kind::Hol(b1 * b2.conjugate()),
            (Kind::Lattice(m1), Kind::Lattice(m2)) => Kind::Lattice(m1.mul(m2)?),
            _ => return Err(Error::MixedComposition),
        };
        Automorphism::new(kind, &self.group)
    }

    /// `Inn(h) ∘ self`. On abelian groups inner twists act trivially.
    pub fn inner_twist(&self, h: &GroupElement) -> Result<Automorphism> {
        if h.group.family != self.group.family {
            return Err(Error::GroupMismatch);
        }
        match &self.kind {
            Kind::Hol(b) => Automorphism::new(Kind::Hol(&h.matrix * b), &self.group),
            Kind::AntiHol(b) => Automorphism::new(Kind::AntiHol(&h.matrix * b), &self.group),
            Kind::Lattice(_) => Ok(self.clone()),
        }
    }

    pub fn power(&self, r: u32) -> Result<Automorphism> {
        if r == 0 {
            // Identity in the same realization, so later compositions with
            // self stay kind-compatible.
            let kind = match &self.kind {
                Kind::Lattice(_) => Kind::Lattice(IntMat::identity(self.group.ambient_size)),
                _ => Kind::Hol(CMat::identity(
                    self.group.ambient_size,
                    self.group.ambient_size,
                )),
            };
            return Automorphism::new(kind, &self.group);
        }
        let mut acc = self.clone();
        for _ in 1..r {
            acc = acc.compose(self)?;
        }
        Ok(acc)
    }

    /// Order of the automorphism.
    ///
    /// For lattice realizations the decision is exact (integer matrix powers
    /// plus Kronecker's criterion on the characteristic polynomial). For
    /// matrix conjugations the differential is tested up to order 24 and
    /// confirmed on sampled elements; failure to resolve is an error.
    pub fn order(&self) -> Result<Order> {
        if let Kind::Lattice(m) = &self.kind {
            return match lattice_order(m, 24)? {
                LatticeOrder::Finite(n) => Ok(Order::Finite(n)),
                LatticeOrder::Infinite => Ok(Order::Infinite),
                LatticeOrder::BeyondCap => Err(Error::OrderUndetermined),
            };
        }
        let d = self.group.dim;
        let id = RMat::identity(d, d);
        let mut power = self.differential.clone();
        for n in 1..=24u32 {
            if (&power - &id).norm() < 1e-9 {
                // Confirm on group samples: for connected groups the
                // differential determines the automorphism.
                let auto_n = self.power(n)?;
                for i in 0..20 {
                    let g = random_element(&self.group, 0xC0FF + i);
                    let r = (auto_n.apply_matrix(&g.matrix) - &g.matrix).norm();
                    if r > 1e-7 {
                        return Err(Error::Internal(format!(
                            "differential has order {n} but the automorphism moves a sample by {r:.3e}"
                        )));
                    }
                }
                return Ok(Order::Finite(n));
            }
            power = &power * &self.differential;
        }
        Err(Error::OrderUndetermined)
    }

    /// 1-semisimplicity: `ker(1 - dσ) = ker((1 - dσ)^2)`, decided through
    /// singular-value ranks with an explicit ambiguity gate.
    pub fn is_one_semisimple(&self, cfg: &Config) -> Result<bool> {
        let d = self.group.dim;
        let a = RMat::identity(d, d) - &self.differential;
        let a2 = &a * &a;
        let r1 = rank(&a, cfg.tolerances.rank_rel)?;
        let r2 = rank(&a2, cfg.tolerances.rank_rel)?;
        Ok(d - r1 == d - r2)
    }

    /// Orthonormal basis of the fixed-point subalgebra `ker(1 - dσ)`.
    pub fn fixed_subalgebra(&self, cfg: &Config) -> Result<Vec<AlgebraElement>> {
        let d = self.group.dim;
        let a = RMat::identity(d, d) - &self.differential;
        let ns = nullspace(&a, cfg.tolerances.rank_rel)?;
        Ok((0..ns.ncols())
            .map(|j| AlgebraElement::from_coords(&self.group, ns.column(j).clone_owned()))
            .collect())
    }
}

/// Identity automorphism in the realization suited to the family.
pub fn identity_automorphism(group: &Group) -> Result<Automorphism> {
    match group.family {
        Family::Torus(k) => Automorphism::new(Kind::Lattice(IntMat::identity(k)), group),
        _ => Automorphism::new(
            Kind::Hol(CMat::identity(group.ambient_size, group.ambient_size)),
            group,
        ),
    }
}

/// Entrywise complex conjugation `g -> conj(g)`.
pub fn conjugation_automorphism(group: &Group) -> Result<Automorphism> {
    Automorphism::new(
        Kind::AntiHol(CMat::identity(group.ambient_size, group.ambient_size)),
        group,
    )
}

/// Shared helper: nullity of `1 - dσ` with the ambiguity gate, used by
/// callers that only need dimensions.
pub fn fixed_dimension(auto: &Automorphism, cfg: &Config) -> Result<usize> {
    let d = auto.group.dim;
    let a = RMat::identity(d, d) - &auto.differential().matrix;
    let svd = a.svd(false, false);
    let mut sv: Vec<f64> = svd.singular_values.as_slice().to_vec();
    sv.sort_by(|x, y| y.partial_cmp(x).unwrap());
    let r = thresholded_rank(&sv, cfg.tolerances.rank_rel)?;
    Ok(d - r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{exp_map, random_algebra, Family, GroupDescriptor};
    use crate::linalg::{cr, dist_to_identity, identity};
    use crate::rng::stream;
    use nalgebra::DVector;

    fn group(f: Family) -> Group {
        GroupDescriptor::new(f).unwrap()
    }

    fn diag(entries: &[crate::linalg::C64]) -> CMat {
        CMat::from_diagonal(&DVector::from_vec(entries.to_vec()))
    }

    #[test]
    fn antihol_on_u3_conjugates_entries() {
        let g = group(Family::Unitary(3));
        let sigma = conjugation_automorphism(&g).unwrap();
        let t = GroupElement::new(&g, diag(&[c(0.0, 1.0), c(0.0, 1.0), cr(1.0)])).unwrap();
        let out = sigma.apply(&t).unwrap();
        let expect = diag(&[c(0.0, -1.0), c(0.0, -1.0), cr(1.0)]);
        assert!((out.matrix - expect).norm() < 1e-14);
    }

    #[test]
    fn antihol_equals_transpose_inverse_on_unitaries() {
        let g = group(Family::Unitary(3));
        let sigma = conjugation_automorphism(&g).unwrap();
        for seed in 0..10 {
            let x = random_element(&g, seed);
            let expect = x.matrix.transpose().try_inverse().unwrap();
            assert!((sigma.apply_matrix(&x.matrix) - expect).norm() < 1e-9);
        }
    }

    #[test]
    fn identity_automorphism_fixes_identity_element() {
        let g = group(Family::SpecialUnitary(2));
        let sigma = identity_automorphism(&g).unwrap();
        let e = GroupElement::identity(&g);
        assert!(sigma.apply(&e).unwrap().dist(&e) < 1e-15);
        assert!((sigma.differential().matrix - RMat::identity(3, 3)).norm() < 1e-12);
    }

    #[test]
    fn antihol_differential_on_circle_is_minus_one() {
        let g = group(Family::Torus(1));
        let sigma = conjugation_automorphism(&g).unwrap();
        let d = sigma.differential().matrix;
        assert!((d[(0, 0)] + 1.0).abs() < 1e-12);
    }

    #[test]
    fn lattice_differential_is_the_matrix() {
        let g = group(Family::Torus(2));
        let m = IntMat::from_rows(&[vec![2, 1], vec![1, 1]]).unwrap();
        let sigma = Automorphism::new(Kind::Lattice(m.clone()), &g).unwrap();
        assert_eq!(sigma.differential().matrix, m.to_real());
    }

    #[test]
    fn lattice_requires_torus_and_unimodularity() {
        let g = group(Family::Unitary(2));
        let m = IntMat::identity(2);
        assert!(matches!(
            Automorphism::new(Kind::Lattice(m), &g),
            Err(Error::LatticeOnNonTorus)
        ));
        let t = group(Family::Torus(2));
        let bad = IntMat::from_rows(&[vec![2, 0], vec![0, 1]]).unwrap();
        assert!(matches!(
            Automorphism::new(Kind::Lattice(bad), &t),
            Err(Error::NotUnimodular { det: 2 })
        ));
    }

    #[test]
    fn orders() {
        let u3 = group(Family::Unitary(3));
        assert_eq!(
            conjugation_automorphism(&u3).unwrap().order().unwrap(),
            Order::Finite(2)
        );
        assert_eq!(
            identity_automorphism(&u3).unwrap().order().unwrap(),
            Order::Finite(1)
        );

        let t2 = group(Family::Torus(2));
        let hyper = IntMat::from_rows(&[vec![2, 1], vec![1, 1]]).unwrap();
        let sigma = Automorphism::new(Kind::Lattice(hyper), &t2).unwrap();
        assert_eq!(sigma.order().unwrap(), Order::Infinite);

        let u2 = group(Family::Unitary(2));
        let b = diag(&[cr(1.0), c(0.0, 1.0)]);
        let sigma4 = Automorphism::new(Kind::Hol(b), &u2).unwrap();
        assert_eq!(sigma4.order().unwrap(), Order::Finite(4));
    }

    #[test]
    fn one_semisimplicity() {
        let cfg = Config::default();
        let t2 = group(Family::Torus(2));
        // Finite order: always 1-semisimple.
        let swap = Automorphism::new(
            Kind::Lattice(IntMat::from_rows(&[vec![0, 1], vec![1, 0]]).unwrap()),
            &t2,
        )
        .unwrap();
        assert!(swap.is_one_semisimple(&cfg).unwrap());
        // Shear: nilpotent (1 - M), kernel dims 1 vs 2.
        let shear = Automorphism::new(
            Kind::Lattice(IntMat::from_rows(&[vec![1, 1], vec![0, 1]]).unwrap()),
            &t2,
        )
        .unwrap();
        assert!(!shear.is_one_semisimple(&cfg).unwrap());
        // Hyperbolic: 1 is not an eigenvalue.
        let hyper = Automorphism::new(
            Kind::Lattice(IntMat::from_rows(&[vec![2, 1], vec![1, 1]]).unwrap()),
            &t2,
        )
        .unwrap();
        assert!(hyper.is_one_semisimple(&cfg).unwrap());

        let u3 = group(Family::Unitary(3));
        assert!(conjugation_automorphism(&u3)
            .unwrap()
            .is_one_semisimple(&cfg)
            .unwrap());
    }

    #[test]
    fn fixed_subalgebra_dimensions() {
        let cfg = Config::default();
        let su2 = group(Family::SpecialUnitary(2));
        assert_eq!(
            identity_automorphism(&su2)
                .unwrap()
                .fixed_subalgebra(&cfg)
                .unwrap()
                .len(),
            3
        );

        // Conjugation on U(3) fixes the real antisymmetric matrices: so(3).
        let u3 = group(Family::Unitary(3));
        let fixed = conjugation_automorphism(&u3)
            .unwrap()
            .fixed_subalgebra(&cfg)
            .unwrap();
        assert_eq!(fixed.len(), 3);
        for x in &fixed {
            assert!(
                x.matrix.map(|z| cr(z.im)).norm() < 1e-9,
                "fixed algebra should be real"
            );
        }

        let t2 = group(Family::Torus(2));
        let hyper = Automorphism::new(
            Kind::Lattice(IntMat::from_rows(&[vec![2, 1], vec![1, 1]]).unwrap()),
            &t2,
        )
        .unwrap();
        assert_eq!(hyper.fixed_subalgebra(&cfg).unwrap().len(), 0);
    }

    #[test]
    fn differential_commutes_with_exp() {
        let g = group(Family::Unitary(3));
        let sigma = conjugation_automorphism(&g).unwrap();
        let mut rng = stream(3, 0);
        for _ in 0..20 {
            let x = random_algebra(&g, &mut rng, 0.8);
            let lhs = exp_map(&sigma.d_algebra(&x)).unwrap();
            let rhs = sigma.apply_matrix(&exp_map(&x).unwrap().matrix);
            assert!((lhs.matrix - rhs).norm() < 1e-8);
        }
    }

    #[test]
    fn differential_preserves_bracket() {
        let g = group(Family::SpecialUnitary(3));
        let b = exp_map(&random_algebra(&g, &mut stream(9, 0), 0.5)).unwrap();
        let sigma = Automorphism::new(Kind::Hol(b.matrix.clone()), &g).unwrap();
        for i in 0..g.dim {
            for j in 0..g.dim {
                let bi = &g.algebra_basis[i];
                let bj = &g.algebra_basis[j];
                let lhs = sigma.d_matrix(&(bi * bj - bj * bi));
                let di = sigma.d_matrix(bi);
                let dj = sigma.d_matrix(bj);
                let rhs = &di * &dj - &dj * &di;
                assert!((lhs - rhs).norm() < 1e-8);
            }
        }
    }

    #[test]
    fn mixed_composition_is_rejected() {
        let t2 = group(Family::Torus(2));
        let hol = Automorphism::new(Kind::Hol(identity(2)), &t2).unwrap();
        let swap = Automorphism::new(
            Kind::Lattice(IntMat::from_rows(&[vec![0, 1], vec![1, 0]]).unwrap()),
            &t2,
        )
        .unwrap();
        assert!(matches!(hol.compose(&swap), Err(Error::MixedComposition)));
        assert!(matches!(swap.compose(&hol), Err(Error::MixedComposition)));
    }

    #[test]
    fn composition_matches_differential_product() {
        let g = group(Family::Unitary(2));
        let sigma = conjugation_automorphism(&g).unwrap();
        let tau = sigma.compose(&sigma).unwrap();
        // AntiHol composed with itself normalizes to Hol.
        assert!(matches!(tau.kind, Kind::Hol(_)));
        let d2 = &sigma.differential().matrix * &sigma.differential().matrix;
        assert!((tau.differential().matrix - d2).norm() < 1e-8);
        assert!(dist_to_identity(&tau.apply_matrix(&identity(2))) < 1e-12);
    }

    #[test]
    fn finite_order_differential_power_is_identity() {
        let u2 = group(Family::Unitary(2));
        let b = diag(&[cr(1.0), c(0.0, 1.0)]);
        let sigma = Automorphism::new(Kind::Hol(b), &u2).unwrap();
        let d = sigma.differential().matrix;
        let mut p = RMat::identity(u2.dim, u2.dim);
        for _ in 0..4 {
            p = &p * &d;
        }
        assert!((p - RMat::identity(u2.dim, u2.dim)).norm() < 1e-8);
    }
}
