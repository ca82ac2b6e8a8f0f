//! Named, runnable checks for the structural theorems behind the pipeline.
//!
//! Every check consumes only the public API, runs deterministically from a
//! seed, and produces a machine-readable report with named residuals.
//! Integer statements (ranks, dimensions, class counts) are asserted
//! exactly; only matrix residuals carry tolerances.

use serde::{Deserialize, Serialize};

use crate::automorphism::{conjugation_automorphism, identity_automorphism, Automorphism, Kind};
use crate::cohomology::{
    cocycle_norm_check, compute_h1, compute_h1_with_torus, decide_cohomologous_z,
};
use crate::config::Config;
use crate::conjugacy::{orbit_dimension, twisted_conjugate_matrix, OrbitDistance, Verdict};
use crate::error::{Error, Result};
use crate::group::{random_element, AlgebraElement, Family, GroupDescriptor, GroupElement};
use crate::int_linalg::IntMat;
use crate::linalg::{c, cr, exp_anti_hermitian, CMat};
use crate::torus::FixedTorus;
use crate::weyl::{is_in_nsigma, is_in_zsigma, linearized_normalizer_dimension, partitions_equal};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CheckReport {
    pub check_name: String,
    pub inputs: String,
    pub passed: bool,
    pub residuals: Vec<(String, f64)>,
    pub details: Vec<String>,
    pub seed: u64,
}

impl CheckReport {
    fn new(name: &str, inputs: String, seed: u64) -> Self {
        CheckReport {
            check_name: name.into(),
            inputs,
            passed: true,
            residuals: Vec::new(),
            details: Vec::new(),
            seed,
        }
    }

    fn fail(&mut self, detail: String) {
        self.passed = false;
        self.details.push(format!("FAIL: {detail}"));
    }

    fn note(&mut self, detail: String) {
        self.details.push(detail);
    }

    fn residual(&mut self, name: &str, value: f64) {
        self.residuals.push((name.into(), value));
    }
}

fn mix_seed(seed: u64, index: u64) -> u64 {
    seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

fn cfg_with_seed(cfg: &Config, seed: u64) -> Config {
    Config { seed, ..*cfg }
}

/// A named (group, automorphism) pair from the built-in matrix.
pub struct Scenario {
    pub label: String,
    pub sigma: Automorphism,
}

impl Scenario {
    fn new(label: impl Into<String>, sigma: Automorphism) -> Self {
        Scenario {
            label: label.into(),
            sigma,
        }
    }
}

fn u(n: usize) -> Result<crate::group::Group> {
    GroupDescriptor::new(Family::Unitary(n))
}

fn su(n: usize) -> Result<crate::group::Group> {
    GroupDescriptor::new(Family::SpecialUnitary(n))
}

fn so(n: usize) -> Result<crate::group::Group> {
    GroupDescriptor::new(Family::SpecialOrthogonal(n))
}

fn torus(k: usize) -> Result<crate::group::Group> {
    GroupDescriptor::new(Family::Torus(k))
}

/// Order-4 inner automorphism of U(2): conjugation by diag(1, i).
fn u2_order4() -> Result<Automorphism> {
    let g = u(2)?;
    let b = CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![cr(1.0), c(0.0, 1.0)]));
    Automorphism::new(Kind::Hol(b), &g)
}

/// Order-4 inner automorphism of SO(3): conjugation by the quarter turn
/// about the z axis. Its twisted Weyl partition of E_4(T) is closed under
/// inversion, so generator independence holds verbatim here.
fn so3_order4() -> Result<Automorphism> {
    let g = so(3)?;
    let mut b = CMat::zeros(3, 3);
    b[(0, 1)] = cr(-1.0);
    b[(1, 0)] = cr(1.0);
    b[(2, 2)] = cr(1.0);
    Automorphism::new(Kind::Hol(b), &g)
}

fn t2_swap() -> Result<Automorphism> {
    Automorphism::new(
        Kind::Lattice(IntMat::from_rows(&[vec![0, 1], vec![1, 0]])?),
        &torus(2)?,
    )
}

fn t2_hyperbolic() -> Result<Automorphism> {
    Automorphism::new(
        Kind::Lattice(IntMat::from_rows(&[vec![2, 1], vec![1, 1]])?),
        &torus(2)?,
    )
}

fn t2_shear() -> Result<Automorphism> {
    Automorphism::new(
        Kind::Lattice(IntMat::from_rows(&[vec![1, 1], vec![0, 1]])?),
        &torus(2)?,
    )
}

/// The built-in configuration matrix: identity and entrywise-conjugation
/// automorphisms on the matrix groups, lattice automorphisms on tori, and
/// an order-4 inner twist.
pub fn builtin_matrix() -> Result<Vec<Scenario>> {
    let mut out = Vec::new();
    for (label, g) in [
        ("U(1)", u(1)?),
        ("U(2)", u(2)?),
        ("U(3)", u(3)?),
        ("SU(2)", su(2)?),
        ("SU(3)", su(3)?),
        ("SO(3)", so(3)?),
        ("T^1", torus(1)?),
        ("T^2", torus(2)?),
    ] {
        out.push(Scenario::new(
            format!("{label}+id"),
            identity_automorphism(&g)?,
        ));
    }
    for (label, g) in [
        ("U(1)", u(1)?),
        ("U(2)", u(2)?),
        ("U(3)", u(3)?),
        ("SU(2)", su(2)?),
        ("SU(3)", su(3)?),
    ] {
        out.push(Scenario::new(
            format!("{label}+conj"),
            conjugation_automorphism(&g)?,
        ));
    }
    out.push(Scenario::new("T^2+swap", t2_swap()?));
    out.push(Scenario::new("U(2)+inn4", u2_order4()?));
    out.push(Scenario::new("SO(3)+inn4", so3_order4()?));
    Ok(out)
}

/// Cyclic orders to exercise for a scenario: multiples of the automorphism
/// order within 1..=4.
pub fn scenario_orders(sigma: &Automorphism) -> Result<Vec<u32>> {
    let k = match sigma.order()? {
        crate::automorphism::Order::Finite(k) => k,
        crate::automorphism::Order::Infinite => return Ok(Vec::new()),
    };
    Ok((1..=4u32).filter(|n| n % k == 0).collect())
}

/// Number of size-`size` multisets over Z/n: the expected class count for
/// U(size) under the trivial action, where the Weyl group is the full
/// symmetric group on eigenvalue phases.
fn multiset_count(n: u32, size: usize) -> usize {
    // C(n + size - 1, size)
    let n = n as usize;
    let mut num = 1usize;
    let mut den = 1usize;
    for i in 0..size {
        num *= n + size - 1 - i;
        den *= i + 1;
    }
    num / den
}

/// Distinct sorted zero-sum tuples in (Z/n)^size: the expected class count
/// for SU(size) under the trivial action, enumerated by brute force.
fn zero_sum_class_count(n: u32, size: usize) -> usize {
    let n = n as usize;
    let total = n.pow(size as u32);
    let mut seen = std::collections::HashSet::new();
    for mut code in 0..total {
        let mut tuple = Vec::with_capacity(size);
        let mut sum = 0;
        for _ in 0..size {
            tuple.push(code % n);
            sum += code % n;
            code /= n;
        }
        if sum % n == 0 {
            tuple.sort_unstable();
            seen.insert(tuple);
        }
    }
    seen.len()
}

/// Expected class count where it is independently derivable, else None.
pub fn expected_class_count(label: &str, n: u32) -> Option<usize> {
    match label {
        "U(1)+id" | "T^1+id" => Some(n as usize),
        "U(2)+id" => Some(multiset_count(n, 2)),
        "U(3)+id" => Some(multiset_count(n, 3)),
        "SU(2)+id" => Some(zero_sum_class_count(n, 2)),
        "SU(3)+id" => Some(zero_sum_class_count(n, 3)),
        // Rotation angles modulo inversion.
        "SO(3)+id" => Some(n as usize / 2 + 1),
        "T^2+id" => Some((n as usize).pow(2)),
        // Entrywise conjugation: rank-0 fixed torus on U(1); one congruence
        // class of symmetric unitaries for n = 2 on U(n)/SU(n).
        "U(1)+conj" => Some(1),
        "U(2)+conj" | "U(3)+conj" | "SU(2)+conj" | "SU(3)+conj" if n == 2 => Some(1),
        // At n = 4 the real rank-1 torus contributes angles modulo the
        // twisted reflection and the half-turn translation.
        "U(3)+conj" | "SU(3)+conj" if n == 4 => Some(2),
        // Coordinate swap on T^2: phase-sum classes merge by translations.
        "T^2+swap" if n == 2 => Some(1),
        "T^2+swap" if n == 4 => Some(2),
        // Conjugation by diag(1, i): classes match the 2-multisets of the
        // transported spectra, 10 of them for n = 4.
        "U(2)+inn4" if n == 4 => Some(10),
        // Quarter-turn twist of SO(3): rotation angles modulo the twisted
        // reflection k -> 2 - k.
        "SO(3)+inn4" if n == 4 => Some(3),
        _ => None,
    }
}

/// Scenarios whose class partitions are fully decidable (all cross-class
/// pairs separated by spectra or exact lattice arithmetic, all merges
/// witnessed); used by the main-theorem suite.
fn main_theorem_cases() -> Vec<(&'static str, u32)> {
    vec![
        ("SU(2)+conj", 2),
        ("SU(2)+id", 2),
        ("U(2)+id", 2),
        ("U(1)+conj", 2),
        ("U(2)+conj", 2),
        ("U(3)+conj", 2),
        ("SU(3)+conj", 2),
        ("U(3)+conj", 4),
        ("SU(3)+conj", 4),
        ("U(1)+id", 3),
        ("U(2)+id", 4),
        ("U(3)+id", 2),
        ("U(3)+id", 3),
        ("U(3)+id", 4),
        ("SU(2)+id", 3),
        ("SU(2)+id", 4),
        ("SU(3)+id", 2),
        ("SU(3)+id", 3),
        ("SU(3)+id", 4),
        ("SO(3)+id", 2),
        ("SO(3)+id", 3),
        ("SO(3)+id", 4),
        ("T^1+id", 4),
        ("T^2+id", 3),
        ("T^2+swap", 2),
        ("T^2+swap", 4),
        ("U(2)+inn4", 4),
        ("SO(3)+inn4", 4),
    ]
}

fn find_scenario(matrix: &[Scenario], label: &str) -> Result<Automorphism> {
    matrix
        .iter()
        .find(|s| s.label == label)
        .map(|s| s.sigma.clone())
        .ok_or_else(|| Error::Internal(format!("scenario {label} missing from matrix")))
}

/// Rank invariance under inner twists: `rank G_0^(Inn(h)∘σ) = rank G_0^σ`.
pub fn check_rank_theorem(
    sigma: &Automorphism,
    label: &str,
    num_twists: usize,
    cfg: &Config,
) -> Result<CheckReport> {
    let mut report = CheckReport::new(
        "rank_theorem",
        format!("{label}, {num_twists} inner twists"),
        cfg.seed,
    );
    let base = FixedTorus::maximal(sigma, cfg, cfg.seed)?;
    report.note(format!("base rank {}", base.rank));
    for i in 0..num_twists {
        let h = random_element(&sigma.group, mix_seed(cfg.seed, 100 + i as u64));
        let twisted = sigma.inner_twist(&h)?;
        let t = FixedTorus::maximal(&twisted, cfg, mix_seed(cfg.seed, 200 + i as u64))?;
        if t.rank != base.rank {
            report.fail(format!(
                "twist {i}: rank {} differs from base rank {}",
                t.rank, base.rank
            ));
        }
    }
    Ok(report)
}

/// Orbit-dimension counting: max sampled orbit dimension plus torus rank
/// equals dim G.
pub fn check_orbit_dimension_lemma(
    sigma: &Automorphism,
    label: &str,
    samples: usize,
    cfg: &Config,
) -> Result<CheckReport> {
    let mut report = CheckReport::new(
        "orbit_dimension_lemma",
        format!("{label}, {samples} samples"),
        cfg.seed,
    );
    let torus = FixedTorus::maximal(sigma, cfg, cfg.seed)?;
    let mut max_dim = 0;
    for i in 0..samples {
        let t = random_element(&sigma.group, mix_seed(cfg.seed, 300 + i as u64));
        let d = orbit_dimension(sigma, &t, cfg)?;
        max_dim = max_dim.max(d);
    }
    let total = max_dim + torus.rank;
    report.note(format!(
        "max orbit dim {max_dim} + rank {} = {total}, dim G = {}",
        torus.rank, sigma.group.dim
    ));
    if total != sigma.group.dim {
        report.fail(format!("{max_dim} + {} != {}", torus.rank, sigma.group.dim));
    }
    Ok(report)
}

/// Structure of `Z_σ(T)` and `N_σ(T)`: sampled `Z` members are σ-fixed, the
/// linearized normalizer condition has dimension rank(T), and (for the
/// U(3) conjugation fixture on the block torus) the two textbook elements
/// behave as they must.
pub fn check_prop32(
    sigma: &Automorphism,
    label: &str,
    torus: Option<&FixedTorus>,
    cfg: &Config,
) -> Result<CheckReport> {
    let mut report = CheckReport::new("prop32", label.to_string(), cfg.seed);
    let owned;
    let torus = match torus {
        Some(t) => t,
        None => {
            owned = FixedTorus::maximal(sigma, cfg, cfg.seed)?;
            &owned
        }
    };
    // (i) Members of Z_σ(T) are fixed by σ. Use torsion points (always in
    // Z since T is abelian and σ-fixed) plus irrational torus samples.
    // Keep the grid small on higher-rank tori.
    let torsion_order = match torus.rank {
        0 | 1 => 4,
        2 => 2,
        _ => 1,
    };
    let mut z_members: Vec<GroupElement> = torus
        .torsion_points(torsion_order)?
        .into_iter()
        .map(|p| p.element)
        .collect();
    for (i, h) in torus.basis.iter().enumerate() {
        let t = exp_anti_hermitian(&(&h.matrix * cr(0.618 / (i as f64 + 1.0))));
        z_members.push(GroupElement::new_unchecked(&sigma.group, t));
    }
    let mut worst_fix: f64 = 0.0;
    let mut worst_z: f64 = 0.0;
    for m in &z_members {
        let (in_z, rz) = is_in_zsigma(sigma, torus, m, cfg);
        worst_z = worst_z.max(rz);
        if !in_z {
            report.fail(format!("torus element left Z_sigma(T): residual {rz:.3e}"));
        }
        let moved = (sigma.apply_matrix(&m.matrix) - &m.matrix).norm();
        worst_fix = worst_fix.max(moved);
        if moved > cfg.tolerances.subgroup {
            report.fail(format!("Z member moved by sigma: {moved:.3e}"));
        }
    }
    report.residual("z_members_sigma_fix", worst_fix);
    report.residual("z_membership", worst_z);
    // (ii)/(iii) The linearized normalizer condition cuts out exactly t.
    let lin_dim = linearized_normalizer_dimension(sigma, torus, cfg)?;
    report.note(format!(
        "linearized normalizer dimension {lin_dim}, rank {}",
        torus.rank
    ));
    if lin_dim != torus.rank {
        report.fail(format!(
            "linearized normalizer dimension {lin_dim} != rank {}",
            torus.rank
        ));
    }
    Ok(report)
}

/// The U(3) fixtures on the block-SO(2) torus: diag(1,1,-1) lies in
/// `Z_σ(T)` but outside `T`; diag(i,i,1) lies in `N_σ(T)` but is moved by
/// σ.
pub fn check_u3_fixtures(cfg: &Config) -> Result<CheckReport> {
    let mut report = CheckReport::new(
        "u3_remark_fixtures",
        "U(3)+conj, block torus".into(),
        cfg.seed,
    );
    let g = u(3)?;
    let sigma = conjugation_automorphism(&g)?;
    let mut j = CMat::zeros(3, 3);
    j[(0, 1)] = cr(-1.0);
    j[(1, 0)] = cr(1.0);
    let (h, _) = AlgebraElement::from_matrix(&g, &j);
    let torus = FixedTorus::from_commuting_basis(&sigma, vec![h], cfg)?;

    let z = GroupElement::new(
        &g,
        CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![
            cr(1.0),
            cr(1.0),
            cr(-1.0),
        ])),
    )?;
    let (in_z, rz) = is_in_zsigma(&sigma, &torus, &z, cfg);
    report.residual("diag(1,1,-1) Z residual", rz);
    if !in_z || rz >= 1e-9 {
        report.fail(format!("diag(1,1,-1) Z residual {rz:.3e} (need < 1e-9)"));
    }
    let (in_t, rt) = torus.contains(&z.matrix, cfg.tolerances.subgroup);
    report.residual("diag(1,1,-1) torus residual", rt);
    if in_t {
        report.fail("diag(1,1,-1) wrongly classified inside T".into());
    }

    let hmat = CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![
        c(0.0, 1.0),
        c(0.0, 1.0),
        cr(1.0),
    ]));
    let hel = GroupElement::new(&g, hmat)?;
    let (in_n, rn) = is_in_nsigma(&sigma, &torus, &hel, cfg);
    report.residual("diag(i,i,1) N residual", rn);
    if !in_n {
        report.fail(format!("diag(i,i,1) N residual {rn:.3e}"));
    }
    let moved = (sigma.apply_matrix(&hel.matrix) - &hel.matrix).norm();
    report.residual("diag(i,i,1) sigma displacement", moved);
    if moved < 0.1 {
        report.fail("diag(i,i,1) should not be sigma-fixed".into());
    }
    Ok(report)
}

/// Main theorem at desk scale: the pipeline is Complete and matches the
/// independently derived class count; transported cocycles classify into
/// their source class.
pub fn check_main_theorem(
    sigma: &Automorphism,
    label: &str,
    n: u32,
    expected: Option<usize>,
    cfg: &Config,
) -> Result<CheckReport> {
    let mut report = CheckReport::new("main_theorem", format!("{label}, n={n}"), cfg.seed);
    let res = compute_h1(sigma, n, cfg)?;
    report.note(format!(
        "classes {}, |E_n(T)| {}, rank {}",
        res.class_count(),
        res.points.len(),
        res.torus.rank
    ));
    if !res.is_complete() {
        report.fail(format!("status incomplete: {:?}", res.status));
    }
    if let Some(k) = expected {
        if res.class_count() != k {
            report.fail(format!("class count {} != expected {k}", res.class_count()));
        }
    }
    // Every representative is a cocycle.
    for class in &res.classes {
        let rep = &res.points[class.representative].element;
        let (ok, r) = cocycle_norm_check(sigma, rep, n, cfg)?;
        if !ok {
            report.fail(format!("representative fails cocycle norm: {r:.3e}"));
        }
    }
    // Surjectivity consistency: transported cocycles land in their class.
    let limit = res.points.len().min(3);
    for pi in 0..limit {
        let base_class = res.weyl.orbit_of(pi);
        let g = random_element(&sigma.group, mix_seed(cfg.seed, 400 + pi as u64));
        let moved = twisted_conjugate_matrix(sigma, &g.matrix, &res.points[pi].element.matrix);
        let moved_el = GroupElement::new_unchecked(&sigma.group, moved);
        match res.classify(&moved_el, cfg)? {
            Some(ci) if ci == base_class => {}
            other => report.fail(format!(
                "transported cocycle from class {base_class} classified as {other:?}"
            )),
        }
    }
    Ok(report)
}

/// Generator independence: the class partitions computed from σ and from
/// σ^r (gcd(r, n) = 1) describe the same partition of `H¹`.
///
/// On `E_n(T)` the two identifications of `H¹(A, T)` differ by the norm
/// map: a cocycle with value `t` on σ has value `t·σ(t)···σ^{r-1}(t) = t^r`
/// on `σ^r` (torsion points are σ-fixed). The partition computed with σ^r
/// must therefore equal the image of the σ-partition under `t -> t^r`; when
/// every class is closed under that power map the two partitions agree
/// verbatim, and the check asserts that too.
pub fn check_generator_independence(
    sigma: &Automorphism,
    label: &str,
    n: u32,
    r: u32,
    require_verbatim: bool,
    cfg: &Config,
) -> Result<CheckReport> {
    let mut report = CheckReport::new(
        "generator_independence",
        format!("{label}, n={n}, r={r}"),
        cfg.seed,
    );
    if gcd_u32(r, n) != 1 {
        return Err(Error::InvalidParameter {
            family: label.into(),
            message: format!("r={r} is not coprime to n={n}"),
        });
    }
    let torus = FixedTorus::maximal(sigma, cfg, cfg.seed)?;
    let first = compute_h1_with_torus(sigma, n, &torus, cfg)?;
    let power = sigma.power(r)?;
    let second = compute_h1_with_torus(&power, n, &torus, cfg)?;
    report.note(format!(
        "partitions: {} vs {} classes",
        first.class_count(),
        second.class_count()
    ));
    // Index permutation of E_n(T) induced by t -> t^r on grid coordinates.
    let grid = |idx: usize| -> Vec<i64> {
        first.points[idx]
            .coords
            .iter()
            .map(|q| (q.numer() * (n as i64 / q.denom())).rem_euclid(n as i64))
            .collect()
    };
    let index_of =
        |target: &[i64]| -> Option<usize> { (0..first.points.len()).find(|&i| grid(i) == target) };
    let mut power_image = Vec::new();
    for class in first.partition() {
        let mut mapped = Vec::with_capacity(class.len());
        for m in class {
            let target: Vec<i64> = grid(m)
                .iter()
                .map(|&k| (r as i64 * k).rem_euclid(n as i64))
                .collect();
            match index_of(&target) {
                Some(i) => mapped.push(i),
                None => {
                    report.fail("power map left the torsion grid".into());
                    return Ok(report);
                }
            }
        }
        mapped.sort_unstable();
        power_image.push(mapped);
    }
    if !partitions_equal(&power_image, &second.partition()) {
        report.fail(format!(
            "partition under sigma^{r} does not correspond under t -> t^{r}: {:?} vs {:?}",
            power_image,
            second.partition()
        ));
    }
    if require_verbatim && !partitions_equal(&first.partition(), &second.partition()) {
        report.fail(format!(
            "partitions are not verbatim identical: {:?} vs {:?}",
            first.partition(),
            second.partition()
        ));
    }
    Ok(report)
}

fn gcd_u32(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd_u32(b, a % b)
    }
}

/// The 1-semisimplicity gate: every finite-order automorphism of the matrix
/// passes; the torus shear fails and is rejected by the pipeline with the
/// dedicated error.
pub fn check_one_semisimplicity(cfg: &Config) -> Result<CheckReport> {
    let mut report = CheckReport::new(
        "one_semisimplicity",
        "built-in matrix + shear".into(),
        cfg.seed,
    );
    for scenario in builtin_matrix()? {
        if !scenario.sigma.is_one_semisimple(cfg)? {
            report.fail(format!("{} should be 1-semisimple", scenario.label));
        }
    }
    let shear = t2_shear()?;
    if shear.is_one_semisimple(cfg)? {
        report.fail("the shear [[1,1],[0,1]] must fail 1-semisimplicity".into());
    }
    let e = GroupElement::identity(&shear.group);
    match decide_cohomologous_z(&shear, &e, &e, cfg) {
        Err(Error::NotOneSemisimple) => {
            report.note("shear rejected with NotOneSemisimple".into());
        }
        other => report.fail(format!(
            "expected NotOneSemisimple from the pipeline, got {other:?}"
        )),
    }
    Ok(report)
}

/// The infinite-cyclic case on the hyperbolic torus map: every point is
/// cohomologous to the identity, decided exactly.
pub fn check_z_case(samples: usize, cfg: &Config) -> Result<CheckReport> {
    let mut report = CheckReport::new(
        "z_case_hyperbolic",
        format!("T^2 + [[2,1],[1,1]], {samples} samples"),
        cfg.seed,
    );
    let hyper = t2_hyperbolic()?;
    let e = GroupElement::identity(&hyper.group);
    let mut worst: f64 = 0.0;
    for i in 0..samples {
        let t = random_element(&hyper.group, mix_seed(cfg.seed, 500 + i as u64));
        let d = decide_cohomologous_z(&hyper, &t, &e, cfg)?;
        worst = worst.max(d.best_residual);
        if d.verdict != Verdict::Conjugate {
            report.fail(format!("sample {i}: verdict {:?}", d.verdict));
        }
    }
    report.residual("worst witness residual", worst);
    Ok(report)
}

/// Determinism and finiteness: closure terminates with identical group
/// order and class count across seeds.
pub fn check_determinism(
    sigma: &Automorphism,
    label: &str,
    n: u32,
    seeds: &[u64],
    cfg: &Config,
) -> Result<CheckReport> {
    let mut report = CheckReport::new("determinism", format!("{label}, n={n}"), cfg.seed);
    let mut results = Vec::new();
    for &s in seeds {
        let res = compute_h1(sigma, n, &cfg_with_seed(cfg, s))?;
        results.push((s, res.weyl.order, res.class_count()));
    }
    let (_, order0, classes0) = results[0];
    report.note(format!("order {order0}, classes {classes0}"));
    for (s, order, classes) in &results[1..] {
        if *order != order0 || *classes != classes0 {
            report.fail(format!(
                "seed {s}: order {order}, classes {classes} differ from ({order0}, {classes0})"
            ));
        }
    }
    Ok(report)
}

/// Closed-form decider gradient against central finite differences.
pub fn check_gradient_fd(
    sigma: &Automorphism,
    label: &str,
    points: usize,
    cfg: &Config,
) -> Result<CheckReport> {
    let mut report = CheckReport::new("gradient_fd", format!("{label}, {points} points"), cfg.seed);
    let group = &sigma.group;
    let t1 = random_element(group, mix_seed(cfg.seed, 600));
    let t2 = random_element(group, mix_seed(cfg.seed, 601));
    let problem = OrbitDistance::new(sigma, &t1.matrix, &t2.matrix);
    let h = 1e-6;
    let mut worst: f64 = 0.0;
    for i in 0..points {
        let g = random_element(group, mix_seed(cfg.seed, 700 + i as u64));
        let grad = problem.gradient(&g.matrix);
        for (bi, b) in group.algebra_basis.iter().enumerate() {
            let plus = exp_anti_hermitian(&(b * cr(h))) * &g.matrix;
            let minus = exp_anti_hermitian(&(b * cr(-h))) * &g.matrix;
            let fd = (problem.value(&plus) - problem.value(&minus)) / (2.0 * h);
            let rel = (grad[bi] - fd).abs() / grad[bi].abs().max(1.0);
            worst = worst.max(rel);
            if rel > 1e-5 {
                report.fail(format!(
                    "point {i} coord {bi}: closed {} vs fd {fd}",
                    grad[bi]
                ));
            }
        }
    }
    report.residual("worst relative gradient error", worst);
    Ok(report)
}

/// Criterion-3 style configurations: the five matrix groups with identity
/// and (where distinct) conjugation.
fn rank_suite_labels() -> Vec<&'static str> {
    vec![
        "U(2)+id",
        "U(3)+id",
        "SU(2)+id",
        "SU(3)+id",
        "SO(3)+id",
        "U(2)+conj",
        "U(3)+conj",
        "SU(2)+conj",
        "SU(3)+conj",
    ]
}

pub fn run_suite(name: &str, cfg: &Config) -> Result<Vec<CheckReport>> {
    let matrix = builtin_matrix()?;
    let mut reports = Vec::new();
    match name {
        "fixtures" => {
            reports.push(check_u3_fixtures(cfg)?);
        }
        "rank" => {
            for label in rank_suite_labels() {
                let sigma = find_scenario(&matrix, label)?;
                reports.push(check_rank_theorem(&sigma, label, 20, cfg)?);
            }
        }
        "orbit-dimension" => {
            for label in rank_suite_labels() {
                let sigma = find_scenario(&matrix, label)?;
                reports.push(check_orbit_dimension_lemma(&sigma, label, 100, cfg)?);
            }
            let hyper = t2_hyperbolic()?;
            reports.push(check_orbit_dimension_lemma(
                &hyper,
                "T^2+hyperbolic",
                100,
                cfg,
            )?);
            let swap = t2_swap()?;
            reports.push(check_orbit_dimension_lemma(&swap, "T^2+swap", 100, cfg)?);
        }
        "prop32" => {
            reports.push(check_u3_fixtures(cfg)?);
            for label in ["U(3)+conj", "SU(2)+conj", "U(2)+id", "SU(2)+id"] {
                let sigma = find_scenario(&matrix, label)?;
                reports.push(check_prop32(&sigma, label, None, cfg)?);
            }
        }
        "main" => {
            for (label, n) in main_theorem_cases() {
                let sigma = find_scenario(&matrix, label)?;
                let expected = expected_class_count(label, n);
                reports.push(check_main_theorem(&sigma, label, n, expected, cfg)?);
            }
        }
        "generator-independence" => {
            // Verbatim identity on the inversion-closed SO(3) case.
            let rot = find_scenario(&matrix, "SO(3)+inn4")?;
            reports.push(check_generator_independence(
                &rot,
                "SO(3)+inn4",
                4,
                3,
                true,
                cfg,
            )?);
            // Norm-map correspondence on the U(2) case, where the two
            // evaluation identifications genuinely differ.
            let sigma = find_scenario(&matrix, "U(2)+inn4")?;
            reports.push(check_generator_independence(
                &sigma,
                "U(2)+inn4",
                4,
                3,
                false,
                cfg,
            )?);
            reports.push(check_generator_independence(
                &sigma,
                "U(2)+inn4",
                4,
                1,
                true,
                cfg,
            )?);
            let conj = find_scenario(&matrix, "U(3)+conj")?;
            reports.push(check_generator_independence(
                &conj,
                "U(3)+conj",
                2,
                1,
                true,
                cfg,
            )?);
        }
        "semisimplicity" => {
            reports.push(check_one_semisimplicity(cfg)?);
        }
        "z-case" => {
            reports.push(check_z_case(100, cfg)?);
        }
        "determinism" => {
            for scenario in &matrix {
                for n in scenario_orders(&scenario.sigma)? {
                    reports.push(check_determinism(
                        &scenario.sigma,
                        &scenario.label,
                        n,
                        &[0, 1, 2],
                        cfg,
                    )?);
                }
            }
        }
        "gradient" => {
            for label in rank_suite_labels() {
                let sigma = find_scenario(&matrix, label)?;
                reports.push(check_gradient_fd(&sigma, label, 20, cfg)?);
            }
        }
        "all" => {
            for sub in [
                "fixtures",
                "rank",
                "orbit-dimension",
                "prop32",
                "main",
                "generator-independence",
                "semisimplicity",
                "z-case",
                "determinism",
                "gradient",
            ] {
                reports.extend(run_suite(sub, cfg)?);
            }
        }
        other => return Err(Error::UnknownSuite(other.into())),
    }
    Ok(reports)
}

pub fn suite_names() -> Vec<&'static str> {
    vec![
        "fixtures",
        "rank",
        "orbit-dimension",
        "prop32",
        "main",
        "generator-independence",
        "semisimplicity",
        "z-case",
        "determinism",
        "gradient",
        "all",
    ]
}
