//! Maximal tori of fixed-point groups and their torsion subgroups.
//!
//! For a 1-semisimple automorphism σ of a compact matrix group `G`, the
//! fixed subalgebra is `ker(1 - dσ)`. A maximal abelian subalgebra `t` of it
//! is found as the centralizer of a generic element; `T = exp(t)` is then a
//! maximal torus of the identity component of `G^σ`.
//!
//! The exponential lattice `Λ = ker(exp|_t)` is computed exactly: the joint
//! eigenvalue forms of a commuting basis are expressed over a row basis of
//! weights, reconstructed as rationals, and the preimage lattice is solved
//! by Smith normal form. The stored basis `H_1..H_r` is a fundamental one
//! (`exp(H_j) = e`), so the n-torsion subgroup `E_n(T)` is exactly the
//! coordinate grid `(1/n)Z^r mod Z^r` and has `n^rank` points.

use num_rational::Ratio;

use crate::automorphism::Automorphism;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::group::{AlgebraElement, Group, GroupElement};
use crate::int_linalg::{integer_kernel, smith_normal_form, IntMat};
use crate::linalg::{
    c, commutator, exp_anti_hermitian, flatten_basis, identity, nullspace, pinv, simultaneous_diag,
    to_real_vec, CMat, RMat, RVec,
};
use crate::rng::stream;

/// A maximal torus of the fixed-point group, with exact lattice data.
#[derive(Clone, Debug)]
pub struct FixedTorus {
    pub group: Group,
    /// Fundamental basis of `t`: `exp(basis[j]) = e`, and `Λ` is exactly the
    /// integer span of the basis.
    pub basis: Vec<AlgebraElement>,
    pub rank: usize,
    /// Integer weights: in the common eigenbasis, `exp(Σ c_j H_j)` has
    /// eigenvalue phases `2π (W c)_α`.
    pub weight_matrix: IntMat,
    /// Lattice of `exp`-kernel coordinates in `basis`; the identity matrix
    /// in this normalization.
    pub lattice_basis: IntMat,
    /// Unitary `V` diagonalizing every element of `t`.
    pub eigenbasis: CMat,
    /// Dimension of the full fixed subalgebra containing `t`.
    pub fixed_dim: usize,
    dual_kernel: IntMat,
    weight_blocks: Vec<Vec<usize>>,
    t_pinv: RMat,
    t_flat: RMat,
}

/// A point of `E_n(T)`: exact rational coordinates in the fundamental basis
/// together with its exponential.
#[derive(Clone, Debug)]
pub struct TorsionPoint {
    pub coords: Vec<Ratio<i64>>,
    pub element: GroupElement,
}

/// Continued-fraction rational reconstruction with a denominator bound.
/// Returns the reduced fraction with positive denominator.
fn reconstruct_rational(x: f64, max_den: i64, tol: f64) -> Option<(i64, i64)> {
    fn normalize(p: i64, q: i64) -> (i64, i64) {
        let g = gcd(p, q).max(1);
        if q < 0 {
            (-p / g, -q / g)
        } else {
            (p / g, q / g)
        }
    }
    let mut p0: i64 = 1;
    let mut q0: i64 = 0;
    let mut p1 = x.round() as i64;
    let mut q1: i64 = 1;
    let mut frac = x - x.round();
    for _ in 0..64 {
        if (p1 as f64 / q1 as f64 - x).abs() <= tol {
            return Some(normalize(p1, q1));
        }
        if frac.abs() < 1e-15 {
            break;
        }
        let inv = 1.0 / frac;
        let a = inv.round();
        frac = inv - a;
        let p2 = (a as i64).checked_mul(p1)?.checked_add(p0)?;
        let q2 = (a as i64).checked_mul(q1)?.checked_add(q0)?;
        if q2.abs() > max_den {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
    }
    if (p1 as f64 / q1 as f64 - x).abs() <= tol && q1.abs() <= max_den {
        Some(normalize(p1, q1))
    } else {
        None
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

const WEIGHT_MAX_DEN: i64 = 1_000_000;
const WEIGHT_TOL: f64 = 1e-6;
const TORSION_CAP: u128 = 1_000_000;

impl FixedTorus {
    /// Maximal torus of the fixed group, from the centralizer of a generic
    /// seeded element of the fixed subalgebra.
    pub fn maximal(sigma: &Automorphism, cfg: &Config, seed: u64) -> Result<FixedTorus> {
        let group = sigma.group.clone();
        let fixed = sigma.fixed_subalgebra(cfg)?;
        if fixed.is_empty() {
            return Self::trivial(sigma, 0);
        }
        let f = fixed.len();
        let attempts = 10;
        for attempt in 0..attempts {
            let mut rng = stream(seed, 0x70E5 + attempt as u64);
            let x_coords = RVec::from_fn(f, |_, _| crate::rng::gaussian(&mut rng));
            let x = combine(&group, &fixed, &x_coords);
            // Centralizer of x inside the fixed subalgebra.
            let mut stacked = RMat::zeros(2 * group.ambient_size * group.ambient_size, f);
            for (k, fk) in fixed.iter().enumerate() {
                stacked.set_column(k, &to_real_vec(&commutator(&x.matrix, &fk.matrix)));
            }
            let ns = nullspace(&stacked, cfg.tolerances.rank_rel)?;
            let candidates: Vec<AlgebraElement> = (0..ns.ncols())
                .map(|j| combine(&group, &fixed, &ns.column(j).clone_owned()))
                .collect();
            let abelian = candidates.iter().enumerate().all(|(i, a)| {
                candidates[i + 1..]
                    .iter()
                    .all(|b| commutator(&a.matrix, &b.matrix).norm() < 1e-10)
            });
            if !abelian {
                continue;
            }
            return Self::from_commuting_basis(sigma, candidates, cfg);
        }
        Err(Error::GenericityFailure { attempts })
    }

    fn trivial(sigma: &Automorphism, fixed_dim: usize) -> Result<FixedTorus> {
        let group = sigma.group.clone();
        let n = group.ambient_size;
        Ok(FixedTorus {
            group,
            basis: Vec::new(),
            rank: 0,
            weight_matrix: IntMat::zeros(n, 0),
            lattice_basis: IntMat::zeros(0, 0),
            eigenbasis: identity(n),
            fixed_dim,
            dual_kernel: IntMat::identity(n),
            weight_blocks: vec![(0..n).collect()],
            t_pinv: RMat::zeros(0, 2 * n * n),
            t_flat: RMat::zeros(2 * n * n, 0),
        })
    }

    /// Build the torus from an explicitly given commuting basis of `t`,
    /// validating fixedness, maximality, and the lattice invariants.
    pub fn from_commuting_basis(
        sigma: &Automorphism,
        raw_basis: Vec<AlgebraElement>,
        cfg: &Config,
    ) -> Result<FixedTorus> {
        let group = sigma.group.clone();
        let n = group.ambient_size;
        let fixed = sigma.fixed_subalgebra(cfg)?;
        let r = raw_basis.len();
        if r == 0 {
            return Self::trivial(sigma, fixed.len());
        }
        for (i, a) in raw_basis.iter().enumerate() {
            for b in &raw_basis[i + 1..] {
                let comm = commutator(&a.matrix, &b.matrix).norm();
                if comm > 1e-10 {
                    return Err(Error::Internal(format!(
                        "torus basis does not commute: residual {comm:.3e}"
                    )));
                }
            }
            let moved = (sigma.d_matrix(&a.matrix) - &a.matrix).norm();
            if moved > 1e-9 * a.matrix.norm().max(1.0) {
                return Err(Error::Internal(format!(
                    "torus basis is not fixed by the differential: residual {moved:.3e}"
                )));
            }
        }
        // Maximality: the centralizer of the basis inside the fixed
        // subalgebra must have dimension exactly r.
        let f = fixed.len();
        let mut stacked = RMat::zeros(2 * n * n * r, f);
        for (k, fk) in fixed.iter().enumerate() {
            let mut col = RVec::zeros(2 * n * n * r);
            for (i, h) in raw_basis.iter().enumerate() {
                let block = to_real_vec(&commutator(&h.matrix, &fk.matrix));
                col.rows_mut(i * 2 * n * n, 2 * n * n).copy_from(&block);
            }
            stacked.set_column(k, &col);
        }
        let centralizer_dim = nullspace(&stacked, cfg.tolerances.rank_rel)?.ncols();
        if centralizer_dim != r {
            return Err(Error::GenericityFailure { attempts: 1 });
        }

        // Joint eigenstructure of the commuting anti-Hermitian basis.
        let mats: Vec<CMat> = raw_basis.iter().map(|h| h.matrix.clone()).collect();
        let (v, phase_cols) = simultaneous_diag(&mats, cfg.seed)?;
        let mut b = RMat::zeros(n, r);
        for (j, mu) in phase_cols.iter().enumerate() {
            b.set_column(j, &(mu / (2.0 * std::f64::consts::PI)));
        }

        // Select r independent rows by Gaussian elimination with pivoting.
        let pivots = select_pivot_rows(&b, r)?;
        let rmat = RMat::from_fn(r, r, |i, j| b[(pivots[i], j)]);
        let rinv = rmat
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Internal("pivot rows are singular".into()))?;
        let coeff = &b * &rinv; // rows are rational in exact arithmetic

        // Rational reconstruction of every coefficient.
        let mut denom_lcm: i64 = 1;
        let mut numers = vec![vec![0i64; r]; n];
        let mut denoms = vec![vec![1i64; r]; n];
        for i in 0..n {
            for j in 0..r {
                let (p, q) = reconstruct_rational(coeff[(i, j)], WEIGHT_MAX_DEN, WEIGHT_TOL)
                    .ok_or(Error::WeightReconstructionFailed {
                        value: coeff[(i, j)],
                        max_den: WEIGHT_MAX_DEN,
                    })?;
                let (p, q) = if q < 0 { (-p, -q) } else { (p, q) };
                numers[i][j] = p;
                denoms[i][j] = q;
                denom_lcm = denom_lcm
                    .checked_mul(q / gcd(denom_lcm, q))
                    .ok_or(Error::IntegerOverflow)?;
            }
        }
        let mut c_int = IntMat::zeros(n, r);
        for i in 0..n {
            for j in 0..r {
                c_int[(i, j)] = numers[i][j]
                    .checked_mul(denom_lcm / denoms[i][j])
                    .ok_or(Error::IntegerOverflow)?;
            }
        }

        // Preimage lattice {θ : Bθ ∈ Z^n} via SNF of the integer matrix.
        let snf = smith_normal_form(&c_int)?;
        if snf.rank() != r {
            return Err(Error::Internal(
                "weight matrix lost rank in reconstruction".into(),
            ));
        }
        let mut scale = RMat::zeros(r, r);
        for j in 0..r {
            scale[(j, j)] = denom_lcm as f64 / snf.s[(j, j)] as f64;
        }
        let l_theta = &rinv * snf.v.to_real() * scale;

        // Rebase: H_j = Σ_i (Lθ)_{ij} basis_i, so that exp(H_j) = e and the
        // kernel lattice is exactly Z^r.
        let mut new_basis = Vec::with_capacity(r);
        for j in 0..r {
            let mut coords = RVec::zeros(group.dim);
            for i in 0..r {
                coords += &raw_basis[i].coords * l_theta[(i, j)];
            }
            new_basis.push(AlgebraElement::from_coords(&group, coords));
        }

        // Integer weights of the rebased basis.
        let phat = &b * &l_theta;
        let mut weight = IntMat::zeros(n, r);
        for i in 0..n {
            for j in 0..r {
                let w = phat[(i, j)];
                let rounded = w.round();
                if (w - rounded).abs() > WEIGHT_TOL {
                    return Err(Error::WeightReconstructionFailed {
                        value: w,
                        max_den: 1,
                    });
                }
                weight[(i, j)] = rounded as i64;
            }
        }

        // The lattice invariant: each fundamental basis vector exponentiates
        // to the identity.
        for h in &new_basis {
            let resid = (exp_anti_hermitian(&h.matrix) - identity(n)).norm();
            if resid > 1e-8 {
                return Err(Error::Internal(format!(
                    "lattice basis vector fails exp(H) = e: residual {resid:.3e}"
                )));
            }
        }

        let dual_kernel = integer_kernel(&weight.transpose())?;
        let weight_blocks = group_equal_rows(&weight);
        let new_mats: Vec<CMat> = new_basis.iter().map(|h| h.matrix.clone()).collect();
        let t_flat = flatten_basis(&new_mats);
        let t_pinv = pinv(&t_flat, 1e-13);

        Ok(FixedTorus {
            group,
            basis: new_basis,
            rank: r,
            weight_matrix: weight,
            lattice_basis: IntMat::identity(r),
            eigenbasis: v,
            fixed_dim: f,
            dual_kernel,
            weight_blocks,
            t_pinv,
            t_flat,
        })
    }

    /// Residual of the component of `m` orthogonal to `t`.
    pub fn tangent_residual(&self, m: &CMat) -> f64 {
        if self.rank == 0 {
            return m.norm();
        }
        let v = to_real_vec(m);
        let coords = &self.t_pinv * &v;
        (&self.t_flat * coords - v).norm()
    }

    /// Torus membership test for an ambient (unitary) matrix.
    ///
    /// `x ∈ T` iff it commutes with `t`, is block-scalar across the joint
    /// eigenspaces, and its eigenvalue phases satisfy every integer relation
    /// that vanishes on the weight lattice (`u^T φ ∈ 2πZ` for all integer
    /// `u` with `u^T W = 0`). The last test is exact lattice arithmetic on
    /// phases and has no branch-cut sensitivity.
    pub fn membership_residual(&self, x: &CMat) -> f64 {
        let n = self.group.ambient_size;
        let mut residual: f64 = 0.0;
        for h in &self.basis {
            residual = residual.max(commutator(x, &h.matrix).norm() / h.matrix.norm().max(1.0));
        }
        let y = self.eigenbasis.adjoint() * x * &self.eigenbasis;
        let mut off = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    off += y[(i, j)].norm_sqr();
                }
            }
        }
        residual = residual.max(off.sqrt());
        for block in &self.weight_blocks {
            for w in block.windows(2) {
                residual = residual.max((y[(w[0], w[0])] - y[(w[1], w[1])]).norm());
            }
        }
        let phases: Vec<f64> = (0..n).map(|i| y[(i, i)].arg()).collect();
        for jcol in 0..self.dual_kernel.cols {
            let u = self.dual_kernel.column(jcol);
            let s: f64 = u.iter().zip(&phases).map(|(&ui, &p)| ui as f64 * p).sum();
            let two_pi = 2.0 * std::f64::consts::PI;
            let frac = (s / two_pi - (s / two_pi).round()).abs() * two_pi;
            residual = residual.max(frac);
        }
        residual
    }

    pub fn contains(&self, x: &CMat, tol: f64) -> (bool, f64) {
        let r = self.membership_residual(x);
        (r <= tol, r)
    }

    /// The exact exponential of rational coordinates in the fundamental
    /// basis, through the joint eigenbasis.
    pub fn element_from_rational_coords(&self, coords: &[Ratio<i64>]) -> GroupElement {
        let n = self.group.ambient_size;
        let mut d = CMat::zeros(n, n);
        for alpha in 0..n {
            let mut phase = 0.0;
            for (j, q) in coords.iter().enumerate() {
                let w = self.weight_matrix[(alpha, j)];
                // 2π * w * p/q with the integer part discarded exactly.
                let scaled = w
                    .checked_mul(*q.numer())
                    .expect("weight-coordinate product fits in i64");
                let prod = Ratio::new(scaled, *q.denom());
                let frac = prod - prod.floor();
                phase += 2.0 * std::f64::consts::PI * (*frac.numer() as f64 / *frac.denom() as f64);
            }
            d[(alpha, alpha)] = c(phase.cos(), phase.sin());
        }
        GroupElement::new_unchecked(
            &self.group,
            &self.eigenbasis * d * self.eigenbasis.adjoint(),
        )
    }

    /// Enumerate `E_n(T)` in lexicographic coordinate order: exactly
    /// `n^rank` points with coordinates in `(1/n)Z^r mod Z^r`.
    pub fn torsion_points(&self, n: u32) -> Result<Vec<TorsionPoint>> {
        if n == 0 {
            return Err(Error::InvalidParameter {
                family: self.group.family.label(),
                message: "torsion order must be at least 1".into(),
            });
        }
        let count = (n as u128)
            .checked_pow(self.rank as u32)
            .unwrap_or(u128::MAX);
        if count > TORSION_CAP {
            return Err(Error::EnumerationTooLarge { count });
        }
        let mut points = Vec::with_capacity(count as usize);
        let mut odometer = vec![0i64; self.rank];
        loop {
            let coords: Vec<Ratio<i64>> =
                odometer.iter().map(|&k| Ratio::new(k, n as i64)).collect();
            let element = self.element_from_rational_coords(&coords);
            points.push(TorsionPoint { coords, element });
            // Advance lexicographically (last coordinate fastest).
            let mut pos = self.rank;
            loop {
                if pos == 0 {
                    return Ok(points);
                }
                pos -= 1;
                odometer[pos] += 1;
                if odometer[pos] < n as i64 {
                    break;
                }
                odometer[pos] = 0;
            }
        }
    }
}

fn combine(group: &Group, basis: &[AlgebraElement], coords: &RVec) -> AlgebraElement {
    let mut total = RVec::zeros(group.dim);
    for (k, b) in basis.iter().enumerate() {
        total += &b.coords * coords[k];
    }
    AlgebraElement::from_coords(group, total)
}

/// Indices of `r` rows of `b` forming a well-conditioned invertible block,
/// by Gaussian elimination with partial pivoting.
fn select_pivot_rows(b: &RMat, r: usize) -> Result<Vec<usize>> {
    let mut work = b.clone();
    let n = b.nrows();
    let mut used = vec![false; n];
    let mut pivots = Vec::with_capacity(r);
    for col in 0..r {
        let mut best = None;
        let mut best_val = 0.0;
        for row in 0..n {
            if !used[row] && work[(row, col)].abs() > best_val {
                best_val = work[(row, col)].abs();
                best = Some(row);
            }
        }
        let Some(p) = best else {
            return Err(Error::Internal("weight matrix is rank-deficient".into()));
        };
        if best_val < 1e-9 {
            return Err(Error::Internal("weight matrix is rank-deficient".into()));
        }
        used[p] = true;
        pivots.push(p);
        for row in 0..n {
            if row != p {
                let factor = work[(row, col)] / work[(p, col)];
                for jj in 0..r {
                    let sub = factor * work[(p, jj)];
                    work[(row, jj)] -= sub;
                }
            }
        }
    }
    pivots.sort_unstable();
    Ok(pivots)
}

fn group_equal_rows(w: &IntMat) -> Vec<Vec<usize>> {
    let mut blocks: Vec<(Vec<i64>, Vec<usize>)> = Vec::new();
    for i in 0..w.rows {
        let row: Vec<i64> = (0..w.cols).map(|j| w[(i, j)]).collect();
        match blocks.iter_mut().find(|(r, _)| *r == row) {
            Some((_, idxs)) => idxs.push(i),
            None => blocks.push((row, vec![i])),
        }
    }
    blocks.into_iter().map(|(_, idxs)| idxs).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automorphism::{conjugation_automorphism, identity_automorphism, Kind};
    use crate::group::{exp_map, Family, GroupDescriptor};
    use crate::linalg::{cr, dist_to_identity};

    fn cfg() -> Config {
        Config::default()
    }

    #[test]
    fn rational_reconstruction() {
        assert_eq!(reconstruct_rational(0.5, 100, 1e-9), Some((1, 2)));
        assert_eq!(reconstruct_rational(-2.0 / 3.0, 100, 1e-9), Some((-2, 3)));
        assert_eq!(reconstruct_rational(3.0, 100, 1e-9), Some((3, 1)));
        assert!(reconstruct_rational(std::f64::consts::SQRT_2, 1000, 1e-9).is_none());
    }

    #[test]
    fn su2_identity_torus_and_torsion() {
        let g = GroupDescriptor::new(Family::SpecialUnitary(2)).unwrap();
        let sigma = identity_automorphism(&g).unwrap();
        let t = FixedTorus::maximal(&sigma, &cfg(), 0).unwrap();
        assert_eq!(t.rank, 1);
        assert_eq!(t.fixed_dim, 3);
        // exp of the fundamental basis vector is the identity.
        let e2 = t.torsion_points(2).unwrap();
        assert_eq!(e2.len(), 2);
        assert!(dist_to_identity(&e2[0].element.matrix) < 1e-10);
        // The nontrivial 2-torsion point of any maximal torus of SU(2) is -I.
        assert!((&e2[1].element.matrix + identity(2)).norm() < 1e-8);
    }

    #[test]
    fn u2_identity_torus_has_four_involutions() {
        let g = GroupDescriptor::new(Family::Unitary(2)).unwrap();
        let sigma = identity_automorphism(&g).unwrap();
        let t = FixedTorus::maximal(&sigma, &cfg(), 1).unwrap();
        assert_eq!(t.rank, 2);
        let e2 = t.torsion_points(2).unwrap();
        assert_eq!(e2.len(), 4);
        for p in &e2 {
            assert!(dist_to_identity(&p.element.pow(2).matrix) < 1e-8);
            let (ok, r) = g.contains(&p.element.matrix).unwrap();
            assert!(ok, "torsion point residual {r}");
        }
        // n = 1 gives only the identity.
        assert_eq!(t.torsion_points(1).unwrap().len(), 1);
    }

    #[test]
    fn conjugation_on_u3_gives_rank_one_torus() {
        let g = GroupDescriptor::new(Family::Unitary(3)).unwrap();
        let sigma = conjugation_automorphism(&g).unwrap();
        for seed in 0..5 {
            let t = FixedTorus::maximal(&sigma, &cfg(), seed).unwrap();
            assert_eq!(t.rank, 1, "rank must be stable across seeds");
            assert_eq!(t.fixed_dim, 3);
        }
    }

    #[test]
    fn block_so2_torus_fixture() {
        // The torus diag(SO(2), 1) inside U(3) with entrywise conjugation.
        let g = GroupDescriptor::new(Family::Unitary(3)).unwrap();
        let sigma = conjugation_automorphism(&g).unwrap();
        let mut j = CMat::zeros(3, 3);
        j[(0, 1)] = cr(-1.0);
        j[(1, 0)] = cr(1.0);
        let (h, resid) = AlgebraElement::from_matrix(&g, &j);
        assert!(resid < 1e-12);
        let t = FixedTorus::from_commuting_basis(&sigma, vec![h], &cfg()).unwrap();
        assert_eq!(t.rank, 1);
        // E_2 = {I, diag(-1,-1,1)} as rotation by pi in the block.
        let e2 = t.torsion_points(2).unwrap();
        assert_eq!(e2.len(), 2);
        let flip = &e2[1].element.matrix;
        let expect = CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![
            cr(-1.0),
            cr(-1.0),
            cr(1.0),
        ]));
        assert!((flip - expect).norm() < 1e-8);

        // Membership: diag(1,1,-1) commutes with the torus but is not in it.
        let zmem = CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![
            cr(1.0),
            cr(1.0),
            cr(-1.0),
        ]));
        let (inside, r) = t.contains(&zmem, 1e-7);
        assert!(
            !inside,
            "diag(1,1,-1) must not lie in the block torus, residual {r}"
        );
        // while every torsion point does lie in T.
        for p in &e2 {
            let (inside, r) = t.contains(&p.element.matrix, 1e-7);
            assert!(inside, "torsion point outside its torus, residual {r}");
        }
    }

    #[test]
    fn hyperbolic_lattice_automorphism_has_trivial_torus() {
        let g = GroupDescriptor::new(Family::Torus(2)).unwrap();
        let m = IntMat::from_rows(&[vec![2, 1], vec![1, 1]]).unwrap();
        let sigma = Automorphism::new(Kind::Lattice(m), &g).unwrap();
        let t = FixedTorus::maximal(&sigma, &cfg(), 0).unwrap();
        assert_eq!(t.rank, 0);
        let pts = t.torsion_points(4).unwrap();
        assert_eq!(pts.len(), 1);
        assert!(dist_to_identity(&pts[0].element.matrix) < 1e-12);
        // Rank-0 membership means being the identity.
        let (inside, _) = t.contains(&identity(2), 1e-7);
        assert!(inside);
        let some = CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![c(0.0, 1.0), cr(1.0)]));
        let (inside, _) = t.contains(&some, 1e-7);
        assert!(!inside);
    }

    #[test]
    fn full_torus_weights_are_identity_grid() {
        let g = GroupDescriptor::new(Family::Torus(2)).unwrap();
        let sigma = identity_automorphism(&g).unwrap();
        let t = FixedTorus::maximal(&sigma, &cfg(), 3).unwrap();
        assert_eq!(t.rank, 2);
        let e3 = t.torsion_points(3).unwrap();
        assert_eq!(e3.len(), 9);
        for p in &e3 {
            assert!(dist_to_identity(&p.element.pow(3).matrix) < 1e-8);
        }
    }

    #[test]
    fn torsion_points_fixed_by_sigma_and_torsion_cap() {
        let g = GroupDescriptor::new(Family::Unitary(3)).unwrap();
        let sigma = conjugation_automorphism(&g).unwrap();
        let t = FixedTorus::maximal(&sigma, &cfg(), 2).unwrap();
        for p in t.torsion_points(4).unwrap() {
            let moved = (sigma.apply_matrix(&p.element.matrix) - &p.element.matrix).norm();
            assert!(
                moved < 1e-8,
                "torsion point not fixed by sigma: {moved:.3e}"
            );
            assert!(dist_to_identity(&p.element.pow(4).matrix) < 1e-8);
        }
        let tor = GroupDescriptor::new(Family::Torus(4)).unwrap();
        let sig = identity_automorphism(&tor).unwrap();
        let tt = FixedTorus::maximal(&sig, &cfg(), 0).unwrap();
        assert!(matches!(
            tt.torsion_points(100),
            Err(Error::EnumerationTooLarge { .. })
        ));
    }

    #[test]
    fn torsion_subgroup_closure() {
        let g = GroupDescriptor::new(Family::SpecialUnitary(3)).unwrap();
        let sigma = identity_automorphism(&g).unwrap();
        let t = FixedTorus::maximal(&sigma, &cfg(), 0).unwrap();
        assert_eq!(t.rank, 2);
        let pts = t.torsion_points(2).unwrap();
        assert_eq!(pts.len(), 4);
        // Closed under product and inverse.
        for a in &pts {
            for b in &pts {
                let prod = a.element.mul(&b.element).unwrap();
                let best = pts
                    .iter()
                    .map(|p| p.element.dist(&prod))
                    .fold(f64::INFINITY, f64::min);
                assert!(best < 1e-8, "product escapes E_n(T): {best:.3e}");
            }
            let inv = a.element.inverse();
            let best = pts
                .iter()
                .map(|p| p.element.dist(&inv))
                .fold(f64::INFINITY, f64::min);
            assert!(best < 1e-8);
        }
    }

    #[test]
    fn exp_of_fundamental_basis_is_identity() {
        let cases: Vec<(Family, bool)> = vec![
            (Family::SpecialUnitary(2), false),
            (Family::Unitary(3), true),
        ];
        for (fam, conj) in cases {
            let g = GroupDescriptor::new(fam).unwrap();
            let sigma = if conj {
                conjugation_automorphism(&g).unwrap()
            } else {
                identity_automorphism(&g).unwrap()
            };
            let t = FixedTorus::maximal(&sigma, &cfg(), 5).unwrap();
            for h in &t.basis {
                let e = exp_map(h).unwrap();
                assert!(dist_to_identity(&e.matrix) < 1e-8);
            }
        }
    }
}
