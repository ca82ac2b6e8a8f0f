//! The twisted Weyl group `W = N_σ(T)/Z_σ(T)` through its action on the
//! torsion subgroup.
//!
//! `Z_σ(T)` fixes `T` pointwise under the twisted action and `N_σ(T)` maps
//! `T` onto itself. Two elements of `N_σ(T)` induce the same map on `T`
//! exactly when they differ by `Z_σ(T)`, so `W` is represented faithfully
//! by the induced permutations of `E_n(T)`: cosets are deduplicated by
//! permutation and the quotient is never materialized.
//!
//! Generators are found in two phases: a structured catalog (monomial
//! matrices over the fourth roots of unity, plus the torsion points), then
//! a multi-start Gauss-Newton search for zeros of a smooth residual whose
//! vanishing locus contains `N_σ(T)`. Completeness of the search cannot be
//! proved directly; instead the resulting orbit partition is
//! cross-validated against the independent σ-conjugacy decider, and only
//! full agreement is reported as `saturated`.

use crate::automorphism::Automorphism;
use crate::config::Config;
use crate::conjugacy::{are_sigma_conjugate, twisted_conjugate_matrix, ConjugacyDecision, Verdict};
use crate::error::{Error, Result};
use crate::group::{random_element, Family, GroupElement};
use crate::linalg::{c, commutator, exp_anti_hermitian, to_real_vec, CMat, RMat, RVec};
use crate::optimize::{gauss_newton, GaussNewtonParams};
use crate::par::indexed_map;
use crate::torus::{FixedTorus, TorsionPoint};
use std::collections::HashSet;

/// An element of `N_σ(T)` together with its induced permutation of the
/// torsion points.
#[derive(Clone, Debug)]
pub struct WeylGenerator {
    pub element: GroupElement,
    pub permutation: Vec<usize>,
    /// For torus groups: the induced affine action on phase coordinates
    /// (linear part, translation phases of `g σ(g)^{-1}`).
    pub affine: Option<(RMat, Vec<f64>)>,
}

/// The twisted Weyl group acting on `E_n(T)`.
#[derive(Clone, Debug)]
pub struct TwistedWeylGroup {
    pub generators: Vec<WeylGenerator>,
    /// Order of the permutation group generated on `E_n(T)`.
    pub order: usize,
    /// Orbit partition of torsion point indices, each orbit sorted, orbits
    /// ordered by their minimum element.
    pub orbits: Vec<Vec<usize>>,
    /// Spanning forest of the orbits: edges `(from, to, generator index)`.
    pub forest: Vec<(usize, usize, usize)>,
    /// Oracle decisions for every unordered pair of orbit representatives.
    pub decisions: Vec<((usize, usize), ConjugacyDecision)>,
    /// True when the generator partition matches the oracle exactly and no
    /// oracle verdict was `Undecided`.
    pub saturated: bool,
    /// Search budget actually used (doubled once on disagreement).
    pub budget_used: usize,
}

const GOLDEN: f64 = 0.618_033_988_749_894_9;

/// Membership residual for `Z_σ(T)`: `σ(g) = g` plus pointwise fixing of
/// irrational torus samples along every basis circle.
pub fn zsigma_residual(sigma: &Automorphism, torus: &FixedTorus, g: &GroupElement) -> f64 {
    let mut residual = (sigma.apply_matrix(&g.matrix) - &g.matrix).norm();
    for h in &torus.basis {
        for s in [GOLDEN, GOLDEN * GOLDEN] {
            let t = exp_anti_hermitian(&(&h.matrix * c(s, 0.0)));
            let moved = twisted_conjugate_matrix(sigma, &g.matrix, &t) - &t;
            residual = residual.max(moved.norm());
        }
    }
    residual
}

pub fn is_in_zsigma(
    sigma: &Automorphism,
    torus: &FixedTorus,
    g: &GroupElement,
    cfg: &Config,
) -> (bool, f64) {
    let r = zsigma_residual(sigma, torus, g);
    (r <= cfg.tolerances.subgroup, r)
}

/// Membership residual for `N_σ(T)` via the factorization
/// `τ_g(t) = (g t g^{-1}) · (g σ(g)^{-1})`: requires `g σ(g)^{-1} ∈ T` and
/// `Ad(g) t = t`.
pub fn nsigma_residual(sigma: &Automorphism, torus: &FixedTorus, g: &GroupElement) -> f64 {
    let x = &g.matrix * sigma.apply_matrix(&g.matrix).adjoint();
    let mut residual = torus.membership_residual(&x);
    for h in &torus.basis {
        let moved = &g.matrix * &h.matrix * g.matrix.adjoint();
        residual = residual.max(torus.tangent_residual(&moved) / h.matrix.norm().max(1.0));
    }
    residual
}

pub fn is_in_nsigma(
    sigma: &Automorphism,
    torus: &FixedTorus,
    g: &GroupElement,
    cfg: &Config,
) -> (bool, f64) {
    let r = nsigma_residual(sigma, torus, g);
    (r <= cfg.tolerances.subgroup, r)
}

/// Dimension of the linearized normalizer condition at the identity:
/// `{X : (1 - Ad(t) dσ) X ∈ t}` over sampled torus points `t`. For compact
/// groups this space coincides with `t` itself.
pub fn linearized_normalizer_dimension(
    sigma: &Automorphism,
    torus: &FixedTorus,
    cfg: &Config,
) -> Result<usize> {
    let group = &sigma.group;
    let n = group.ambient_size;
    let d = group.dim;
    // Deterministic irrational multiples along the torus, plus the identity.
    let mut samples: Vec<CMat> = vec![CMat::identity(n, n)];
    for (i, h) in torus.basis.iter().enumerate() {
        samples.push(exp_anti_hermitian(
            &(&h.matrix * c(GOLDEN / (i as f64 + 1.0), 0.0)),
        ));
    }
    if torus.rank > 1 {
        let mut mix = CMat::zeros(n, n);
        for (i, h) in torus.basis.iter().enumerate() {
            mix += &h.matrix * c(GOLDEN.powi(i as i32 + 1), 0.0);
        }
        samples.push(exp_anti_hermitian(&mix));
    }
    let rows_per = 2 * n * n;
    let mut stacked = RMat::zeros(rows_per * samples.len(), d);
    for (si, t) in samples.iter().enumerate() {
        for (j, b) in group.algebra_basis.iter().enumerate() {
            let image = b - t * sigma.d_matrix(b) * t.adjoint();
            let vecd = to_real_vec(&image);
            let perp = &vecd - torus_tangent_projection(torus, &vecd);
            stacked
                .view_mut((si * rows_per, j), (rows_per, 1))
                .copy_from(&perp);
        }
    }
    let ns = crate::linalg::nullspace(&stacked, cfg.tolerances.rank_rel)?;
    Ok(ns.ncols())
}

fn torus_tangent_projection(torus: &FixedTorus, vecd: &RVec) -> RVec {
    if torus.rank == 0 {
        return RVec::zeros(vecd.len());
    }
    let mats: Vec<CMat> = torus.basis.iter().map(|h| h.matrix.clone()).collect();
    let flat = crate::linalg::flatten_basis(&mats);
    let pinv = crate::linalg::pinv(&flat, 1e-13);
    &flat * (pinv * vecd)
}

/// Match the image of every torsion point to the nearest torsion point;
/// a valid generator must induce a bijection within the witness tolerance.
fn induced_permutation(
    sigma: &Automorphism,
    points: &[TorsionPoint],
    g: &CMat,
    tol: f64,
) -> Option<Vec<usize>> {
    let mut perm = vec![usize::MAX; points.len()];
    let mut hit = vec![false; points.len()];
    for (k, p) in points.iter().enumerate() {
        let image = twisted_conjugate_matrix(sigma, g, &p.element.matrix);
        let mut best = (f64::INFINITY, usize::MAX);
        for (j, q) in points.iter().enumerate() {
            let d = (&image - &q.element.matrix).norm();
            if d < best.0 {
                best = (d, j);
            }
        }
        if best.0 > tol || hit[best.1] {
            return None;
        }
        hit[best.1] = true;
        perm[k] = best.1;
    }
    Some(perm)
}

fn affine_action_for_torus(sigma: &Automorphism, g: &CMat) -> Option<(RMat, Vec<f64>)> {
    if !matches!(sigma.group.family, Family::Torus(_)) {
        return None;
    }
    let k = sigma.group.ambient_size;
    let x = g * sigma.apply_matrix(g).adjoint();
    let translation: Vec<f64> = (0..k).map(|i| x[(i, i)].arg()).collect();
    Some((RMat::identity(k, k), translation))
}

/// Deterministic catalog of structured candidates: monomial matrices with
/// entries in the fourth roots of unity (permutations, signed permutations,
/// and i-power diagonals arise as special cases), plus the torsion points.
fn catalog_candidates(sigma: &Automorphism, points: &[TorsionPoint]) -> Vec<CMat> {
    let n = sigma.group.ambient_size;
    let mut out: Vec<CMat> = Vec::new();
    out.push(CMat::identity(n, n));
    let phases = [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)];
    if n <= 4 {
        let perms = permutations(n);
        let combos = 4usize.pow(n as u32);
        for perm in &perms {
            for mask in 0..combos {
                let mut m = CMat::zeros(n, n);
                let mut rem = mask;
                for (j, &pi) in perm.iter().enumerate() {
                    m[(pi, j)] = phases[rem % 4];
                    rem /= 4;
                }
                out.push(m);
            }
        }
    } else if n <= 6 {
        let perms = permutations(n);
        let combos = 2usize.pow(n as u32);
        for perm in &perms {
            for mask in 0..combos {
                let mut m = CMat::zeros(n, n);
                for (j, &pi) in perm.iter().enumerate() {
                    m[(pi, j)] = if mask >> j & 1 == 0 {
                        c(1.0, 0.0)
                    } else {
                        c(-1.0, 0.0)
                    };
                }
                out.push(m);
            }
        }
    } else {
        for mask in 0..4usize.pow(n.min(8) as u32) {
            let mut m = CMat::zeros(n, n);
            let mut rem = mask;
            for j in 0..n {
                m[(j, j)] = phases[rem % 4];
                rem /= 4;
            }
            out.push(m);
        }
    }
    for p in points {
        out.push(p.element.matrix.clone());
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    let mut items: Vec<usize> = (0..n).collect();
    heap_permute(&mut items, n, &mut out);
    out.sort();
    out
}

fn heap_permute(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == 1 {
        out.push(items.clone());
        return;
    }
    for i in 0..k {
        heap_permute(items, k - 1, out);
        if k.is_multiple_of(2) {
            items.swap(i, k - 1);
        } else {
            items.swap(0, k - 1);
        }
    }
}

/// The smooth normalizer residual: tangency of `Ad(g) t` to `t` and
/// commutation of `g σ(g)^{-1}` with `t`. Its zero set contains `N_σ(T)`;
/// accepted minima still pass through the exact membership filter.
struct NormalizerResidual<'a> {
    sigma: &'a Automorphism,
    torus: &'a FixedTorus,
    dsig_basis: Vec<CMat>,
}

impl<'a> NormalizerResidual<'a> {
    fn new(sigma: &'a Automorphism, torus: &'a FixedTorus) -> Self {
        let dsig_basis = sigma
            .group
            .algebra_basis
            .iter()
            .map(|b| sigma.d_matrix(b))
            .collect();
        NormalizerResidual {
            sigma,
            torus,
            dsig_basis,
        }
    }

    fn len(&self) -> usize {
        let n = self.sigma.group.ambient_size;
        2 * n * n * self.torus.rank * 2
    }

    fn residual(&self, g: &CMat) -> RVec {
        let n = self.sigma.group.ambient_size;
        let rows = 2 * n * n;
        let mut out = RVec::zeros(self.len());
        let x = g * self.sigma.apply_matrix(g).adjoint();
        for (i, h) in self.torus.basis.iter().enumerate() {
            let scale = 1.0 / h.matrix.norm().max(1.0);
            let y = g * &h.matrix * g.adjoint();
            let vecd = to_real_vec(&y);
            let perp = (&vecd - torus_tangent_projection(self.torus, &vecd)) * scale;
            out.rows_mut(i * rows, rows).copy_from(&perp);
            let comm = to_real_vec(&commutator(&x, &h.matrix)) * scale;
            out.rows_mut((self.torus.rank + i) * rows, rows)
                .copy_from(&comm);
        }
        out
    }

    fn jacobian(&self, g: &CMat) -> RMat {
        let group = &self.sigma.group;
        let n = group.ambient_size;
        let rows = 2 * n * n;
        let mut jac = RMat::zeros(self.len(), group.dim);
        let x = g * self.sigma.apply_matrix(g).adjoint();
        let ys: Vec<CMat> = self
            .torus
            .basis
            .iter()
            .map(|h| g * &h.matrix * g.adjoint())
            .collect();
        for (j, b) in group.algebra_basis.iter().enumerate() {
            let dx = b * &x - &x * &self.dsig_basis[j];
            for (i, h) in self.torus.basis.iter().enumerate() {
                let scale = 1.0 / h.matrix.norm().max(1.0);
                let dy = commutator(b, &ys[i]);
                let vecd = to_real_vec(&dy);
                let perp = (&vecd - torus_tangent_projection(self.torus, &vecd)) * scale;
                jac.view_mut((i * rows, j), (rows, 1)).copy_from(&perp);
                let dcomm = to_real_vec(&commutator(&dx, &h.matrix)) * scale;
                jac.view_mut(((self.torus.rank + i) * rows, j), (rows, 1))
                    .copy_from(&dcomm);
            }
        }
        jac
    }
}

fn mix_seed(seed: u64, index: u64) -> u64 {
    seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Two-phase generator search; deterministic for a fixed seed.
pub fn find_weyl_generators(
    sigma: &Automorphism,
    torus: &FixedTorus,
    points: &[TorsionPoint],
    cfg: &Config,
    budget: usize,
) -> Result<Vec<WeylGenerator>> {
    let group = &sigma.group;
    let tol = cfg.tolerances.witness;
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut generators: Vec<WeylGenerator> = Vec::new();
    let admit =
        |matrix: CMat, generators: &mut Vec<WeylGenerator>, seen: &mut HashSet<Vec<usize>>| {
            let Ok((true, _)) = group.contains(&matrix) else {
                return;
            };
            let element = GroupElement::new_unchecked(group, matrix);
            let (ok, _) = is_in_nsigma(sigma, torus, &element, cfg);
            if !ok {
                return;
            }
            let Some(perm) = induced_permutation(sigma, points, &element.matrix, tol) else {
                return;
            };
            if seen.insert(perm.clone()) {
                let affine = affine_action_for_torus(sigma, &element.matrix);
                generators.push(WeylGenerator {
                    element,
                    permutation: perm,
                    affine,
                });
            }
        };

    // Phase 1: structured catalog, both in the ambient frame and conjugated
    // into the joint eigenbasis of the torus. The second form produces the
    // normalizer elements whose monomial shape is only visible in the
    // eigenframe (for the block-SO(2) torus of U(3) under conjugation these
    // are exactly the diag(i,i,1)-type elements).
    let v = &torus.eigenbasis;
    for cand in catalog_candidates(sigma, points) {
        let conjugated = v * &cand * v.adjoint();
        admit(cand, &mut generators, &mut seen);
        admit(conjugated, &mut generators, &mut seen);
    }

    // Phase 2: multi-start Gauss-Newton on the smooth normalizer residual.
    if torus.rank > 0 && budget > 0 {
        let problem = NormalizerResidual::new(sigma, torus);
        let params = GaussNewtonParams {
            max_iters: 80,
            target: 1e-26,
            lambda_init: 1e-3,
        };
        let found = indexed_map(budget, |ridx| {
            let start = random_element(group, mix_seed(cfg.seed, 0xBEE5 + ridx as u64));
            let out = gauss_newton(
                group,
                start,
                |g| problem.residual(g),
                |g| problem.jacobian(g),
                &params,
            );
            (out.value, out.point)
        });
        for (value, point) in found {
            if value < 1e-12 {
                admit(point.matrix, &mut generators, &mut seen);
            }
        }
    }
    Ok(generators)
}

const CLOSURE_BOUND: usize = 1_000_000;

fn compose_perm(a: &[usize], b: &[usize]) -> Vec<usize> {
    // (a ∘ b)(k) = a[b[k]]
    b.iter().map(|&k| a[k]).collect()
}

/// Breadth-first closure of the generated permutation group.
pub fn permutation_group_order(generators: &[Vec<usize>], n_points: usize) -> Result<usize> {
    let identity: Vec<usize> = (0..n_points).collect();
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    seen.insert(identity.clone());
    let mut frontier = vec![identity];
    while let Some(p) = frontier.pop() {
        for g in generators {
            let q = compose_perm(g, &p);
            if seen.len() >= CLOSURE_BOUND && !seen.contains(&q) {
                return Err(Error::ClosureExplosion {
                    bound: CLOSURE_BOUND,
                });
            }
            if seen.insert(q.clone()) {
                frontier.push(q);
            }
        }
    }
    Ok(seen.len())
}

/// Spanning-forest edges are `(from, to, generator index)`.
type Forest = Vec<(usize, usize, usize)>;

fn orbit_partition(generators: &[Vec<usize>], n_points: usize) -> (Vec<Vec<usize>>, Forest) {
    let mut seen = vec![false; n_points];
    let mut orbits = Vec::new();
    let mut forest = Vec::new();
    for root in 0..n_points {
        if seen[root] {
            continue;
        }
        let mut orbit = vec![root];
        seen[root] = true;
        let mut queue = vec![root];
        while let Some(k) = queue.pop() {
            for (gi, g) in generators.iter().enumerate() {
                let img = g[k];
                if !seen[img] {
                    seen[img] = true;
                    forest.push((k, img, gi));
                    orbit.push(img);
                    queue.push(img);
                }
            }
        }
        orbit.sort_unstable();
        orbits.push(orbit);
    }
    orbits.sort_by_key(|o| o[0]);
    (orbits, forest)
}

/// Close the generated group, partition the torsion points, and
/// cross-validate the partition against the σ-conjugacy oracle on all
/// pairs of orbit representatives. When the oracle connects orbits the
/// generators missed, the search is retried once with doubled budget.
pub fn build_weyl_group(
    sigma: &Automorphism,
    torus: &FixedTorus,
    points: &[TorsionPoint],
    cfg: &Config,
) -> Result<TwistedWeylGroup> {
    let mut budget = cfg.search.budget;
    for attempt in 0..2 {
        let generators = find_weyl_generators(sigma, torus, points, cfg, budget)?;
        let perms: Vec<Vec<usize>> = generators.iter().map(|g| g.permutation.clone()).collect();
        let order = permutation_group_order(&perms, points.len())?;
        let (orbits, forest) = orbit_partition(&perms, points.len());
        let reps: Vec<usize> = orbits.iter().map(|o| o[0]).collect();
        let mut pairs = Vec::new();
        for i in 0..reps.len() {
            for j in i + 1..reps.len() {
                pairs.push((reps[i], reps[j]));
            }
        }
        let decisions_raw = indexed_map(pairs.len(), |k| {
            let (a, b) = pairs[k];
            are_sigma_conjugate(sigma, &points[a].element, &points[b].element, cfg)
        });
        let mut decisions = Vec::with_capacity(pairs.len());
        for (pair, d) in pairs.iter().zip(decisions_raw) {
            decisions.push((*pair, d?));
        }
        let missed_merge = decisions
            .iter()
            .any(|(_, d)| d.verdict == Verdict::Conjugate);
        if missed_merge && attempt == 0 {
            budget *= 2;
            continue;
        }
        let saturated = decisions
            .iter()
            .all(|(_, d)| d.verdict == Verdict::NotConjugate);
        return Ok(TwistedWeylGroup {
            generators,
            order,
            orbits,
            forest,
            decisions,
            saturated,
            budget_used: budget,
        });
    }
    unreachable!("loop returns within two attempts")
}

impl TwistedWeylGroup {
    /// Orbit index containing a torsion point index.
    pub fn orbit_of(&self, point: usize) -> usize {
        self.orbits
            .iter()
            .position(|o| o.binary_search(&point).is_ok())
            .expect("point inside partition")
    }

    /// Unresolved representative pairs (oracle verdict `Undecided`).
    pub fn unresolved_pairs(&self) -> Vec<(usize, usize)> {
        self.decisions
            .iter()
            .filter(|(_, d)| d.verdict == Verdict::Undecided)
            .map(|(p, _)| *p)
            .collect()
    }
}

/// Convenience: map each orbit to its representative (minimum index).
pub fn orbit_representatives(orbits: &[Vec<usize>]) -> Vec<usize> {
    orbits.iter().map(|o| o[0]).collect()
}

/// Check that a permutation-level partition is identical across runs.
pub fn partitions_equal(a: &[Vec<usize>], b: &[Vec<usize>]) -> bool {
    let norm = |p: &[Vec<usize>]| -> Vec<Vec<usize>> {
        let mut v: Vec<Vec<usize>> = p.to_vec();
        for o in &mut v {
            o.sort_unstable();
        }
        v.sort();
        v
    };
    norm(a) == norm(b)
}
