//! Acceptance suite: one test per criterion, each printing a PASS line with
//! its runtime. Tolerances and expected values are pinned in the
//! verification checks themselves; this suite drives them end to end.

use std::time::{Duration, Instant};

use twisted_weyl::automorphism::{conjugation_automorphism, identity_automorphism};
use twisted_weyl::cohomology::compute_h1;
use twisted_weyl::group::{Family, GroupDescriptor};
use twisted_weyl::verify::{
    builtin_matrix, check_determinism, check_generator_independence, check_gradient_fd,
    check_main_theorem, check_orbit_dimension_lemma, check_rank_theorem, check_u3_fixtures,
    expected_class_count, run_suite, scenario_orders, CheckReport,
};
use twisted_weyl::Config;

fn report_criterion(
    id: &str,
    what: &str,
    started: Instant,
    budget: Duration,
    reports: &[CheckReport],
) {
    let elapsed = started.elapsed();
    let failed: Vec<&CheckReport> = reports.iter().filter(|r| !r.passed).collect();
    for f in &failed {
        eprintln!("  {} [{}]: {:?}", f.check_name, f.inputs, f.details);
    }
    let ok = failed.is_empty() && elapsed <= budget;
    println!(
        "acceptance {id} ({what}): {} in {elapsed:.2?} (budget {budget:?})",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(
        failed.is_empty(),
        "criterion {id}: {} checks failed",
        failed.len()
    );
    assert!(
        elapsed <= budget,
        "criterion {id}: runtime {elapsed:.2?} exceeded {budget:?}"
    );
}

#[test]
fn criterion_1_u3_remark_fixtures() {
    let started = Instant::now();
    let report = check_u3_fixtures(&Config::default()).unwrap();
    report_criterion(
        "1",
        "U(3) fixtures: diag(1,1,-1) in Z \\ T, diag(i,i,1) in N \\ G^sigma",
        started,
        Duration::from_secs(1),
        &[report],
    );
}

#[test]
fn criterion_2_main_theorem_desk_scale() {
    let started = Instant::now();
    let cfg = Config::default();
    let cases: Vec<(&str, fn() -> twisted_weyl::Automorphism, usize)> = vec![
        (
            "SU(2)+conj",
            || {
                conjugation_automorphism(&GroupDescriptor::new(Family::SpecialUnitary(2)).unwrap())
                    .unwrap()
            },
            1,
        ),
        (
            "SU(2)+id",
            || {
                identity_automorphism(&GroupDescriptor::new(Family::SpecialUnitary(2)).unwrap())
                    .unwrap()
            },
            2,
        ),
        (
            "U(2)+id",
            || identity_automorphism(&GroupDescriptor::new(Family::Unitary(2)).unwrap()).unwrap(),
            3,
        ),
        (
            "U(1)+conj",
            || {
                conjugation_automorphism(&GroupDescriptor::new(Family::Unitary(1)).unwrap())
                    .unwrap()
            },
            1,
        ),
    ];
    let mut reports = Vec::new();
    for (label, make, expected) in cases {
        let sigma = make();
        reports.push(check_main_theorem(&sigma, label, 2, Some(expected), &cfg).unwrap());
    }
    report_criterion(
        "2",
        "compute_h1 Complete with pinned class counts",
        started,
        Duration::from_secs(30),
        &reports,
    );
}

fn criterion_3_labels() -> Vec<&'static str> {
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

#[test]
fn criterion_3_rank_theorem() {
    let started = Instant::now();
    let cfg = Config::default();
    let matrix = builtin_matrix().unwrap();
    let mut reports = Vec::new();
    for label in criterion_3_labels() {
        let sigma = matrix
            .iter()
            .find(|s| s.label == label)
            .map(|s| s.sigma.clone())
            .unwrap();
        reports.push(check_rank_theorem(&sigma, label, 20, &cfg).unwrap());
    }
    report_criterion(
        "3",
        "rank invariance under 20 seeded inner twists",
        started,
        Duration::from_secs(120),
        &reports,
    );
}

#[test]
fn criterion_4_orbit_dimension_counting() {
    let started = Instant::now();
    let cfg = Config::default();
    let matrix = builtin_matrix().unwrap();
    let mut reports = Vec::new();
    for label in criterion_3_labels() {
        let sigma = matrix
            .iter()
            .find(|s| s.label == label)
            .map(|s| s.sigma.clone())
            .unwrap();
        reports.push(check_orbit_dimension_lemma(&sigma, label, 100, &cfg).unwrap());
    }
    report_criterion(
        "4",
        "max orbit dimension + rank = dim G",
        started,
        Duration::from_secs(120),
        &reports,
    );
}

#[test]
fn criterion_5_one_semisimplicity_gate() {
    let started = Instant::now();
    let reports = run_suite("semisimplicity", &Config::default()).unwrap();
    report_criterion(
        "5",
        "finite-order pass; shear rejected with the dedicated error",
        started,
        Duration::from_secs(1),
        &reports,
    );
}

#[test]
fn criterion_6_integer_action_on_hyperbolic_torus() {
    let started = Instant::now();
    let reports = run_suite("z-case", &Config::default()).unwrap();
    report_criterion(
        "6",
        "100 random torus points conjugate to e, exactly",
        started,
        Duration::from_secs(5),
        &reports,
    );
}

#[test]
fn criterion_7_generator_independence() {
    let started = Instant::now();
    let cfg = Config::default();
    let matrix = builtin_matrix().unwrap();
    let rot = matrix
        .iter()
        .find(|s| s.label == "SO(3)+inn4")
        .map(|s| s.sigma.clone())
        .unwrap();
    let mut reports =
        vec![check_generator_independence(&rot, "SO(3)+inn4", 4, 3, true, &cfg).unwrap()];
    // The U(2) order-4 case is checked through the norm-map correspondence
    // of the two evaluation identifications.
    let inn4 = matrix
        .iter()
        .find(|s| s.label == "U(2)+inn4")
        .map(|s| s.sigma.clone())
        .unwrap();
    reports.push(check_generator_independence(&inn4, "U(2)+inn4", 4, 3, false, &cfg).unwrap());
    report_criterion(
        "7",
        "order-4 automorphism: sigma vs sigma^3 partitions",
        started,
        Duration::from_secs(60),
        &reports,
    );
}

#[test]
fn criterion_8_finiteness_and_determinism() {
    let started = Instant::now();
    let cfg = Config::default();
    let matrix = builtin_matrix().unwrap();
    let mut reports = Vec::new();
    for scenario in &matrix {
        for n in scenario_orders(&scenario.sigma).unwrap() {
            reports.push(
                check_determinism(&scenario.sigma, &scenario.label, n, &[0, 1, 2], &cfg).unwrap(),
            );
        }
    }
    report_criterion(
        "8",
        "identical group order and class counts across seeds 0,1,2",
        started,
        Duration::from_secs(300),
        &reports,
    );
}

#[test]
fn criterion_9_gradient_hygiene() {
    let started = Instant::now();
    let cfg = Config::default();
    let matrix = builtin_matrix().unwrap();
    let mut reports = Vec::new();
    for label in criterion_3_labels() {
        let sigma = matrix
            .iter()
            .find(|s| s.label == label)
            .map(|s| s.sigma.clone())
            .unwrap();
        reports.push(check_gradient_fd(&sigma, label, 20, &cfg).unwrap());
    }
    report_criterion(
        "9a",
        "closed-form gradient vs central differences (report half lives in the CLI tests)",
        started,
        Duration::from_secs(60),
        &reports,
    );
}

/// Expected-count spot checks beyond criterion 2, exercising the derived
/// combinatorial oracles end to end.
#[test]
fn derived_class_counts_across_matrix() {
    let cfg = Config::default();
    let matrix = builtin_matrix().unwrap();
    for (label, n) in [
        ("U(3)+id", 2u32),
        ("SU(3)+id", 3),
        ("SO(3)+id", 4),
        ("T^2+id", 2),
        ("T^2+swap", 4),
        ("U(2)+inn4", 4),
    ] {
        let sigma = matrix
            .iter()
            .find(|s| s.label == label)
            .map(|s| s.sigma.clone())
            .unwrap();
        let expected = expected_class_count(label, n).unwrap();
        let res = compute_h1(&sigma, n, &cfg).unwrap();
        assert!(res.is_complete(), "{label} n={n} incomplete");
        assert_eq!(res.class_count(), expected, "{label} n={n}");
    }
}
