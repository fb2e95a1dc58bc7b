//! Acceptance suite: one test per criterion, each printing a PASS line.
//!
//! Run with `cargo test -p symsim-cli --test acceptance -- --nocapture`.
//! The two stretch rows (5 and 6 spins) are `#[ignore]` because their
//! runtime is open-ended; run them explicitly with `-- --ignored`.

use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use symsim_core::elim::canonical_span_basis;
use symsim_core::{
    central_spin_instance, commutant, constraint_operator, coupling_pattern, decide, decompose,
    example_fixture, lie_closure, oracle_verdict, quadratic_commutant, quadratic_commutant_dims,
    tensor_square_lift, Axis, ConditionStatus, CouplingCase, EngineOptions, FixtureName,
    GaussianRational, PauliPolynomial, PauliTerm, ProblemInstance, RankMode, RankOptions,
    Rational, SparseMatrix, Verdict,
};

fn exact_engine() -> EngineOptions {
    EngineOptions {
        rank: RankOptions::exact(),
        force_condition_b: false,
    }
}

fn auto_engine(seed: u64) -> EngineOptions {
    EngineOptions {
        rank: RankOptions {
            mode: RankMode::Auto,
            seed: Some(seed),
            ..Default::default()
        },
        force_condition_b: false,
    }
}

fn pass(criterion: &str, detail: String) {
    println!("ACCEPT {criterion}: PASS ({detail})");
}

fn in_span(basis: &[SparseMatrix], candidate: &SparseMatrix) -> bool {
    let mut vecs: Vec<SparseMatrix> = basis.iter().map(|m| m.vec_columns()).collect();
    let rank_before = canonical_span_basis(&vecs).len();
    vecs.push(candidate.vec_columns());
    canonical_span_basis(&vecs).len() == rank_before
}

/// Criterion 1: the local-controls fixture reproduces its symmetry
/// dimensions exactly, in under a second.
#[test]
fn criterion_1_local_controls_fixture() {
    let start = Instant::now();
    let inst = example_fixture(FixtureName::Ex1);
    let report = decide(&inst, &exact_engine()).unwrap();
    assert_eq!(report.condition_a.dim_ts_p, 4);
    assert_eq!(report.condition_a.dim_ts_union, 2);
    assert_eq!(report.linear_dim_p, 1);
    assert_eq!(report.linear_dim_union, 1);
    assert_eq!(report.verdict, Verdict::NotSimulable);
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    pass(
        "1 (local controls vs pair interaction)",
        format!("ts dims 4 vs 2, linear dims 1 = 1, not simulable, {elapsed:?}"),
    );
}

/// Criterion 2: the dipole/tilted-field fixture, both targets.
#[test]
fn criterion_2_dipole_fixture() {
    let start = Instant::now();
    let a = example_fixture(FixtureName::Ex2a);
    let b = example_fixture(FixtureName::Ex2b);
    let opts = exact_engine();

    let quad_p = quadratic_commutant_dims(a.p_set(), 4, &opts.rank).unwrap();
    assert_eq!(quad_p.dim, 16);
    let lin_p = commutant(a.p_set(), 4).unwrap();
    assert_eq!(lin_p.dim, 3);

    let report_a = decide(&a, &opts).unwrap();
    assert_eq!(report_a.condition_a.dim_ts_union, 16);
    assert_eq!(report_a.linear_dim_union, 3);
    assert_eq!(report_a.condition_b.center_dim, Some(3));
    assert_eq!(report_a.condition_b.rank_restricted.unwrap().rank, 1);
    assert_eq!(report_a.condition_b.rank_full.unwrap().rank, 2);
    assert_eq!(report_a.verdict, Verdict::NotSimulable);

    let report_b = decide(&b, &opts).unwrap();
    assert_eq!(report_b.condition_a.dim_ts_union, 16);
    assert_eq!(report_b.linear_dim_union, 3);
    assert_eq!(report_b.condition_b.rank_restricted.unwrap().rank, 1);
    assert_eq!(report_b.condition_b.rank_full.unwrap().rank, 1);
    assert_eq!(report_b.verdict, Verdict::Simulable);

    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(5), "took {elapsed:?}");
    pass(
        "2 (dipole coupling with tilted field)",
        format!(
            "linear 3, quadratic 16, center 3, ranks 1/2 and 1/1, {elapsed:?}"
        ),
    );
}

struct TableRow {
    n: usize,
    case: CouplingCase,
    lie_dim: usize,
    quad_dim: usize,
    lin_dim: usize,
}

fn check_table_row(row: &TableRow, opts: &EngineOptions) -> Duration {
    let start = Instant::now();
    let couplings = coupling_pattern(row.case, row.n);
    let inst = central_spin_instance(row.n, &couplings).unwrap();

    let report = decide(&inst, opts).unwrap();
    assert_eq!(
        report.verdict,
        Verdict::Simulable,
        "n={} case {:?}",
        row.n,
        row.case
    );
    assert_eq!(report.condition_a.dim_ts_p, row.quad_dim, "quad P n={}", row.n);
    assert_eq!(
        report.condition_a.dim_ts_union, row.quad_dim,
        "quad union n={}",
        row.n
    );
    assert_eq!(report.linear_dim_p, row.lin_dim, "lin P n={}", row.n);
    assert_eq!(report.linear_dim_union, row.lin_dim, "lin union n={}", row.n);
    assert_eq!(report.condition_b.rank_full.unwrap().rank, 0);
    assert_eq!(report.condition_b.rank_restricted.unwrap().rank, 0);

    let oracle = oracle_verdict(&inst, None).unwrap();
    assert!(oracle.simulable, "oracle n={} case {:?}", row.n, row.case);
    assert_eq!(oracle.closure_dim_p, row.lie_dim, "lie dim n={}", row.n);
    assert_eq!(oracle.closure_dim_union, row.lie_dim);
    start.elapsed()
}

/// Criterion 3: the central-spin table rows for 2, 3 and 4 spins, both
/// coupling cases, engine and oracle agreeing on exact integers.
#[test]
fn criterion_3_central_spin_table() {
    let small = [
        TableRow { n: 2, case: CouplingCase::A, lie_dim: 15, quad_dim: 2, lin_dim: 1 },
        TableRow { n: 3, case: CouplingCase::A, lie_dim: 38, quad_dim: 8, lin_dim: 2 },
        TableRow { n: 2, case: CouplingCase::B, lie_dim: 15, quad_dim: 2, lin_dim: 1 },
        TableRow { n: 3, case: CouplingCase::B, lie_dim: 63, quad_dim: 2, lin_dim: 1 },
    ];
    let start = Instant::now();
    for row in &small {
        check_table_row(row, &auto_engine(1234));
    }
    let small_elapsed = start.elapsed();
    assert!(
        small_elapsed < Duration::from_secs(120),
        "2- and 3-spin rows took {small_elapsed:?}"
    );

    let large = [
        TableRow { n: 4, case: CouplingCase::A, lie_dim: 78, quad_dim: 50, lin_dim: 5 },
        TableRow { n: 4, case: CouplingCase::B, lie_dim: 158, quad_dim: 8, lin_dim: 2 },
    ];
    let start = Instant::now();
    for row in &large {
        check_table_row(row, &auto_engine(1234));
    }
    let large_elapsed = start.elapsed();
    assert!(
        large_elapsed < Duration::from_secs(30 * 60),
        "4-spin rows took {large_elapsed:?}"
    );
    pass(
        "3 (central-spin table, 2-4 spins)",
        format!("n<=3 in {small_elapsed:?}, n=4 in {large_elapsed:?}, all dims exact"),
    );
}

/// Criterion 4 (stretch, non-blocking): quadratic symmetry dimensions for
/// the 5- and 6-spin rows through the modular fast path.
#[test]
#[ignore = "stretch rows; run explicitly with -- --ignored (hours of runtime possible)"]
fn criterion_4_central_spin_stretch() {
    let rows = [
        (5, CouplingCase::A, 392usize),
        (5, CouplingCase::B, 32usize),
        (6, CouplingCase::A, 3528usize),
        (6, CouplingCase::B, 200usize),
    ];
    let opts = RankOptions {
        mode: RankMode::Modular,
        seed: Some(1234),
        ..Default::default()
    };
    for (n, case, want) in rows {
        let start = Instant::now();
        let inst = central_spin_instance(n, &coupling_pattern(case, n)).unwrap();
        let dims = quadratic_commutant_dims(inst.p_set(), inst.dim(), &opts).unwrap();
        assert_eq!(dims.dim, want, "n={n} case {case:?}");
        let union = inst.union();
        let dims_union = quadratic_commutant_dims(&union, inst.dim(), &opts).unwrap();
        assert_eq!(dims_union.dim, want, "union n={n} case {case:?}");
        pass(
            "4 (stretch row)",
            format!("n={n} case {case:?} quad dim {want} in {:?}", start.elapsed()),
        );
    }
}

fn random_rational(rng: &mut ChaCha12Rng) -> Rational {
    let den: i64 = rng.random_range(1..=2);
    let num: i64 = rng.random_range(-3 * den..=3 * den);
    Rational::new(num.into(), den.into())
}

fn random_polynomial(rng: &mut ChaCha12Rng) -> PauliPolynomial {
    let axes = [Axis::X, Axis::Y, Axis::Z];
    let nterms = rng.random_range(1..=3);
    let terms: Vec<PauliTerm> = (0..nterms)
        .map(|_| {
            let mut factors = std::collections::BTreeMap::new();
            for qubit in 1..=2usize {
                if rng.random_bool(0.7) {
                    factors.insert(qubit, axes[rng.random_range(0..3)]);
                }
            }
            PauliTerm {
                coeff: random_rational(rng),
                factors,
            }
        })
        .collect();
    PauliPolynomial::new(2, terms).unwrap()
}

/// Criterion 5: on 200 randomized 2-qubit instances the engine verdict
/// equals the brute-force closure verdict, with zero mismatches.
#[test]
fn criterion_5_randomized_oracle_equivalence() {
    let start = Instant::now();
    let mut rng = ChaCha12Rng::seed_from_u64(20240817);
    let opts = exact_engine();
    let mut simulable_count = 0usize;
    let mut a_gate_count = 0usize;
    for trial in 0..200 {
        let p: Vec<SparseMatrix> = (0..rng.random_range(1..=4))
            .map(|_| random_polynomial(&mut rng).skewify())
            .collect();
        let q: Vec<SparseMatrix> = (0..rng.random_range(1..=4))
            .map(|_| random_polynomial(&mut rng).skewify())
            .collect();
        let inst = ProblemInstance::new(p, q, None).unwrap();
        let engine = decide(&inst, &opts).unwrap();
        let oracle = oracle_verdict(&inst, None).unwrap();
        let engine_simulable = engine.verdict == Verdict::Simulable;
        assert_eq!(
            engine_simulable, oracle.simulable,
            "mismatch on trial {trial}: engine {:?} vs closure dims ({}, {})",
            engine.verdict, oracle.closure_dim_p, oracle.closure_dim_union
        );
        if engine_simulable {
            simulable_count += 1;
        }
        if engine.condition_a.status == ConditionStatus::Holds
            && engine.condition_b.status == ConditionStatus::Fails
        {
            a_gate_count += 1;
        }
    }
    pass(
        "5 (randomized engine vs oracle)",
        format!(
            "200 instances, 0 mismatches, {simulable_count} simulable, {a_gate_count} passed (A) but failed (B), {:?}",
            start.elapsed()
        ),
    );
}

fn random_gaussian(rng: &mut ChaCha12Rng) -> GaussianRational {
    GaussianRational::new(random_rational(rng), random_rational(rng))
}

fn random_matrix(rng: &mut ChaCha12Rng, n: usize) -> SparseMatrix {
    let mut m = SparseMatrix::zero(n, n);
    for i in 0..n {
        for j in 0..n {
            if rng.random_bool(0.8) {
                m.set(i, j, random_gaussian(rng));
            }
        }
    }
    m
}

/// Criterion 6: the exact-identity suite.
#[test]
fn criterion_6_invariant_suite() {
    let start = Instant::now();
    let mut rng = ChaCha12Rng::seed_from_u64(99);

    // (a) Vectorization identity vec(A S B) = (Bᵗ ⊗ A) vec(S), 100 cases.
    for _ in 0..100 {
        let a = random_matrix(&mut rng, 3);
        let s = random_matrix(&mut rng, 3);
        let b = random_matrix(&mut rng, 3);
        let lhs = a.matmul(&s).unwrap().matmul(&b).unwrap().vec_columns();
        let rhs = b
            .transpose()
            .kron(&a)
            .matmul(&s.vec_columns())
            .unwrap();
        assert_eq!(lhs, rhs, "vectorization identity");
    }

    // Fixture generator sets exercised by (b), (c), (e), (f).
    let fixture_sets: Vec<(String, Vec<SparseMatrix>)> = {
        let ex1 = example_fixture(FixtureName::Ex1);
        let ex2a = example_fixture(FixtureName::Ex2a);
        let ex2b = example_fixture(FixtureName::Ex2b);
        let cs2 = central_spin_instance(2, &coupling_pattern(CouplingCase::A, 2)).unwrap();
        vec![
            ("ex1 P".into(), ex1.p_set().to_vec()),
            ("ex1 P u Q".into(), ex1.union()),
            ("ex2 P".into(), ex2a.p_set().to_vec()),
            ("ex2 P u Qa".into(), ex2a.union()),
            ("ex2 P u Qb".into(), ex2b.union()),
            ("central-spin 2 P".into(), cs2.p_set().to_vec()),
            ("central-spin 2 P u Q".into(), cs2.union()),
        ]
    };

    for (name, gens) in &fixture_sets {
        let d = gens[0].nrows();
        let quad = quadratic_commutant(gens, d).unwrap();
        // (b) identity and swap always lie in the quadratic commutant.
        assert!(
            in_span(&quad.basis, &SparseMatrix::identity(d * d)),
            "{name}: identity escaped"
        );
        assert!(
            in_span(&quad.basis, &SparseMatrix::swap_matrix(d)),
            "{name}: swap escaped"
        );
        // (c) linear symmetries embed into quadratic ones.
        let linear = commutant(gens, d).unwrap();
        for s in &linear.basis {
            assert!(
                in_span(&quad.basis, &tensor_square_lift(s)),
                "{name}: linear symmetry failed to lift"
            );
        }
    }

    // (d) The constraint operator is a homomorphism for commutators.
    for _ in 0..20 {
        let m1 = random_matrix(&mut rng, 2);
        let m2 = random_matrix(&mut rng, 2);
        let lhs = constraint_operator(&m1)
            .commutator(&constraint_operator(&m2))
            .unwrap();
        let rhs = constraint_operator(&m1.commutator(&m2).unwrap());
        assert_eq!(lhs, rhs, "constraint-operator homomorphism");
    }

    // (e) Central elements of the commutant are trace-orthogonal to the
    // derived part of the closed algebra.
    for name in [FixtureName::Ex1, FixtureName::Ex2a, FixtureName::Ex2b] {
        let inst = example_fixture(name);
        let union = inst.union();
        let center = symsim_core::center_of_commutant(&union, inst.dim()).unwrap();
        let closed = lie_closure(&union, None).unwrap();
        let dec = decompose(&closed).unwrap();
        for c in &center {
            for b in &dec.derived_basis {
                let ip = c.hs_inner(b).unwrap();
                assert!(ip.is_zero(), "{name:?}: <C, [g,g]> = {ip} != 0");
            }
        }
    }

    // (f) Equal quadratic dimensions force equal linear dimensions.
    let mut checked_f = 0usize;
    let opts = exact_engine();
    let mut rng_f = ChaCha12Rng::seed_from_u64(7);
    for _ in 0..40 {
        let p: Vec<SparseMatrix> = (0..rng_f.random_range(1..=3))
            .map(|_| random_polynomial(&mut rng_f).skewify())
            .collect();
        let q: Vec<SparseMatrix> = (0..rng_f.random_range(1..=3))
            .map(|_| random_polynomial(&mut rng_f).skewify())
            .collect();
        let inst = ProblemInstance::new(p, q, None).unwrap();
        let report = decide(&inst, &opts).unwrap();
        if report.condition_a.status == ConditionStatus::Holds {
            assert_eq!(
                report.linear_dim_p, report.linear_dim_union,
                "condition (A) held but linear dimensions differ"
            );
            checked_f += 1;
        }
    }
    assert!(checked_f > 0, "no instance with condition (A) holding");

    pass(
        "6 (invariant suite)",
        format!(
            "vec identity x100, span checks on {} fixtures, homomorphism x20, trace orthogonality, (A)->linear on {checked_f} instances, {:?}",
            fixture_sets.len(),
            start.elapsed()
        ),
    );
}

/// Criterion 7: concurrence values and the purity identity.
#[test]
fn criterion_7_concurrence_and_purity() {
    let start = Instant::now();
    let zero = GaussianRational::zero();
    let one = GaussianRational::one();

    let product = SparseMatrix::column_from_slice(&[one.clone(), zero.clone(), zero.clone(), zero.clone()]);
    assert_eq!(symsim_core::concurrence_squared(&product).unwrap(), zero);

    let bell = SparseMatrix::column_from_slice(&[one.clone(), zero.clone(), zero.clone(), one.clone()]);
    assert_eq!(symsim_core::concurrence_squared(&bell).unwrap(), one);

    // Purity: Tr[(ρ ⊗ ρ) K] = Tr(ρ²) on 50 random exact density matrices
    // (rational convex mixtures of two rational pure states).
    let mut rng = ChaCha12Rng::seed_from_u64(4242);
    let swap = SparseMatrix::swap_matrix(2);
    for _ in 0..50 {
        let pure = |rng: &mut ChaCha12Rng| loop {
            let v = SparseMatrix::column_from_slice(&[
                random_gaussian(rng),
                random_gaussian(rng),
            ]);
            let n2 = v.hs_inner(&v).unwrap();
            if !n2.is_zero() {
                let proj = v.matmul(&v.dagger()).unwrap();
                break proj.scale(&n2.inv());
            }
        };
        let p1 = pure(&mut rng);
        let p2 = pure(&mut rng);
        let t = Rational::new(rng.random_range(0..=4i64).into(), 4.into());
        let rho = p1
            .scale(&GaussianRational::from_rational(t.clone()))
            .add(&p2.scale(&GaussianRational::from_rational(
                Rational::from_integer(1.into()) - t,
            )))
            .unwrap();
        let lhs = symsim_core::quadratic_invariant(&rho, &swap).unwrap();
        let rhs = rho.matmul(&rho).unwrap().trace().unwrap();
        assert_eq!(lhs, rhs, "purity identity");
        assert_eq!(
            symsim_core::quadratic_invariant(&rho, &SparseMatrix::identity(4)).unwrap(),
            one,
            "identity invariant is (Tr rho)^2 = 1"
        );
    }
    pass(
        "7 (concurrence and purity)",
        format!("|00> -> 0, Bell -> 1, purity on 50 density matrices, {:?}", start.elapsed()),
    );
}

/// Criterion 8: repeated exact-mode runs produce byte-identical structured
/// reports on every fixture.
#[test]
fn criterion_8_report_determinism() {
    let start = Instant::now();
    let bin = env!("CARGO_BIN_EXE_symsim");
    let dir = std::env::temp_dir().join("symsim-acceptance");
    std::fs::create_dir_all(&dir).unwrap();

    let mut fixtures: Vec<(String, std::path::PathBuf)> = Vec::new();
    for kind in ["ex1", "ex2a", "ex2b"] {
        let path = dir.join(format!("{kind}.inst"));
        let out = Command::new(bin)
            .args(["generate", kind, "--output"])
            .arg(&path)
            .output()
            .unwrap();
        assert!(out.status.success());
        fixtures.push((kind.to_string(), path));
    }
    for (n, case) in [(2, "a"), (2, "b"), (3, "a"), (3, "b")] {
        let path = dir.join(format!("cs{n}{case}.inst"));
        let out = Command::new(bin)
            .args(["generate", "central-spin", "--n", &n.to_string(), "--case", case, "--output"])
            .arg(&path)
            .output()
            .unwrap();
        assert!(out.status.success());
        fixtures.push((format!("central-spin {n}{case}"), path));
    }

    for (name, path) in &fixtures {
        let run = || {
            Command::new(bin)
                .args(["decide", "--mode", "exact", "--format", "json"])
                .arg(path)
                .output()
                .unwrap()
                .stdout
        };
        let first = run();
        let second = run();
        assert!(!first.is_empty());
        assert_eq!(first, second, "{name}: decide reports differ between runs");
    }
    // The closure report too, on the smallest model.
    let cs2a = &fixtures.iter().find(|(n, _)| n == "central-spin 2a").unwrap().1;
    let run_closure = || {
        Command::new(bin)
            .args(["closure", "--mode", "exact", "--format", "json"])
            .arg(cs2a)
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run_closure(), run_closure(), "closure reports differ");

    pass(
        "8 (byte-identical reports)",
        format!("{} fixtures, decide + closure, {:?}", fixtures.len(), start.elapsed()),
    );
}

/// Table rows as seen through the command-line interface (closure command),
/// checked where the runtime is modest.
#[test]
fn cli_closure_rows_match_table() {
    let bin = env!("CARGO_BIN_EXE_symsim");
    let dir = std::env::temp_dir().join("symsim-acceptance");
    std::fs::create_dir_all(&dir).unwrap();
    for (n, case, lie, quad, lin) in [(2, "a", 15, 2, 1), (3, "a", 38, 8, 2), (3, "b", 63, 2, 1)] {
        let path = dir.join(format!("cli-cs{n}{case}.inst"));
        let out = Command::new(bin)
            .args(["generate", "central-spin", "--n", &n.to_string(), "--case", case, "--output"])
            .arg(&path)
            .output()
            .unwrap();
        assert!(out.status.success());
        let out = Command::new(bin)
            .args(["closure", "--format", "json"])
            .arg(&path)
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0));
        let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(doc["lie_dim_p"], lie, "n={n}{case}");
        assert_eq!(doc["lie_dim_union"], lie);
        assert_eq!(doc["quadratic_dim_p"], quad);
        assert_eq!(doc["linear_dim_p"], lin);
        assert_eq!(doc["central_rank_full"]["rank"], 0);
        assert_eq!(doc["central_rank_restricted"]["rank"], 0);
        assert_eq!(doc["simulable"], true);
    }
    pass("CLI closure rows", "n=2a, n=3a, n=3b".to_string());
}
