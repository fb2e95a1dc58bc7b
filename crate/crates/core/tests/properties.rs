//! Cross-module properties: algebraic identities on random exact matrices
//! and span-level facts tying the symmetry engine to the closure oracle.

use num_traits::Zero;
use proptest::prelude::*;

use symsim_core::elim::{canonical_span_basis, real_span_rank};
use symsim_core::{
    central_projections, central_spin_instance, commutant, coupling_pattern, decide,
    decide_mutual, example_fixture, lie_closure, oracle_verdict, parse_pauli,
    quadratic_commutant, rank, tensor_square_lift, CouplingCase, EngineOptions, FixtureName,
    GaussianRational, MutualVerdict, ProblemInstance, RankMode, RankOptions, Rational,
    SparseMatrix, Verdict,
};

fn gauss(num_re: i8, den_re: u8, num_im: i8, den_im: u8) -> GaussianRational {
    GaussianRational::new(
        Rational::new((num_re as i64).into(), (den_re as i64).max(1).into()),
        Rational::new((num_im as i64).into(), (den_im as i64).max(1).into()),
    )
}

prop_compose! {
    fn arb_scalar()(re in -4i8..=4, dre in 1u8..=2, im in -4i8..=4, dim in 1u8..=2)
        -> GaussianRational
    {
        gauss(re, dre, im, dim)
    }
}

fn arb_matrix(n: usize) -> impl Strategy<Value = SparseMatrix> {
    proptest::collection::vec(arb_scalar(), n * n).prop_map(move |vals| {
        let mut m = SparseMatrix::zero(n, n);
        for (k, v) in vals.into_iter().enumerate() {
            m.set(k / n, k % n, v);
        }
        m
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kron_mixed_product(a in arb_matrix(2), b in arb_matrix(2), c in arb_matrix(2), d in arb_matrix(2)) {
        let lhs = a.kron(&b).matmul(&c.kron(&d)).unwrap();
        let rhs = a.matmul(&c).unwrap().kron(&b.matmul(&d).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn kron_is_associative_and_bilinear(a in arb_matrix(2), b in arb_matrix(2), c in arb_matrix(2)) {
        prop_assert_eq!(a.kron(&b).kron(&c), a.kron(&b.kron(&c)));
        let sum_first = a.add(&b).unwrap().kron(&c);
        let split = a.kron(&c).add(&b.kron(&c)).unwrap();
        prop_assert_eq!(sum_first, split);
    }

    #[test]
    fn sylvester_vectorization_identity(m in arb_matrix(3), s in arb_matrix(3)) {
        // vec(MS - SM) = (1 ⊗ M - Mᵗ ⊗ 1) vec(S)
        let id = SparseMatrix::identity(3);
        let lhs = m.matmul(&s).unwrap().sub(&s.matmul(&m).unwrap()).unwrap().vec_columns();
        let op = id.kron(&m).sub(&m.transpose().kron(&id)).unwrap();
        let rhs = op.matmul(&s.vec_columns()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn hs_inner_with_self_is_nonnegative_real(a in arb_matrix(3)) {
        let ip = a.hs_inner(&a).unwrap();
        prop_assert!(ip.im().is_zero());
        prop_assert!(ip.re() >= &Rational::from_integer(0.into()));
    }

    #[test]
    fn modular_rank_never_exceeds_exact(a in arb_matrix(4)) {
        let exact = rank::rank(&a, &RankOptions::exact());
        let modular = rank::rank(&a, &RankOptions {
            mode: RankMode::Modular,
            seed: Some(31337),
            ..Default::default()
        });
        prop_assert!(modular.rank <= exact.rank);
        // With a random 62-bit prime the bound is tight in practice.
        prop_assert_eq!(modular.rank, exact.rank);
    }

    #[test]
    fn swap_commutes_with_every_lift(m in arb_matrix(3)) {
        let k = SparseMatrix::swap_matrix(3);
        let l = tensor_square_lift(&m);
        prop_assert!(k.commutator(&l).unwrap().is_zero());
    }
}

fn in_span(basis: &[SparseMatrix], candidate: &SparseMatrix) -> bool {
    let mut vecs: Vec<SparseMatrix> = basis.iter().map(|m| m.vec_columns()).collect();
    let before = canonical_span_basis(&vecs).len();
    vecs.push(candidate.vec_columns());
    canonical_span_basis(&vecs).len() == before
}

#[test]
fn commutator_matches_dense_multiplication_oracle() {
    // [iX1, i Z1Z2] checked against by-hand dense multiplication.
    let ix1 = parse_pauli("X1", 2).unwrap().skewify();
    let izz = parse_pauli("Z1*Z2", 2).unwrap().skewify();
    let got = ix1.commutator(&izz).unwrap();

    let dense = |m: &SparseMatrix| -> Vec<Vec<GaussianRational>> {
        (0..4)
            .map(|i| (0..4).map(|j| m.get(i, j)).collect())
            .collect()
    };
    let (a, b) = (dense(&ix1), dense(&izz));
    let mut want = SparseMatrix::zero(4, 4);
    for i in 0..4 {
        for j in 0..4 {
            let mut acc = GaussianRational::zero();
            for k in 0..4 {
                acc += &(&a[i][k] * &b[k][j]);
                acc -= &(&b[i][k] * &a[k][j]);
            }
            want.set(i, j, acc);
        }
    }
    assert_eq!(got, want);
    assert!(!got.is_zero());
}

#[test]
fn commutant_dimension_is_monotone_under_generator_growth() {
    let inst = example_fixture(FixtureName::Ex2a);
    let d = inst.dim();
    let mut gens: Vec<SparseMatrix> = Vec::new();
    let mut last_linear = d * d;
    let mut last_quadratic = d * d * d * d;
    for g in inst.union() {
        gens.push(g);
        let linear = commutant(&gens, d).unwrap().dim;
        let quadratic = quadratic_commutant(&gens, d).unwrap().dim;
        assert!(linear <= last_linear);
        assert!(quadratic <= last_quadratic);
        last_linear = linear;
        last_quadratic = quadratic;
    }
}

#[test]
fn commutants_are_closure_invariant() {
    // A generator set and its Lie closure have identical commutants.
    for name in [FixtureName::Ex1, FixtureName::Ex2a] {
        let inst = example_fixture(name);
        let d = inst.dim();
        let closed = lie_closure(inst.p_set(), None).unwrap();
        let from_gens = commutant(inst.p_set(), d).unwrap();
        let from_closure = commutant(&closed.basis, d).unwrap();
        assert_eq!(from_gens.dim, from_closure.dim);
        for b in &from_closure.basis {
            assert!(in_span(&from_gens.basis, b));
        }
        let quad_gens = quadratic_commutant(inst.p_set(), d).unwrap();
        let quad_closure = quadratic_commutant(&closed.basis, d).unwrap();
        assert_eq!(quad_gens.dim, quad_closure.dim);
    }
}

#[test]
fn symmetry_bases_commute_with_their_generators() {
    let inst = example_fixture(FixtureName::Ex2b);
    let d = inst.dim();
    let union = inst.union();
    let linear = commutant(&union, d).unwrap();
    for s in &linear.basis {
        for g in &union {
            assert!(s.commutator(g).unwrap().is_zero());
        }
    }
    let quadratic = quadratic_commutant(&union, d).unwrap();
    for s in &quadratic.basis {
        for g in &union {
            assert!(s.commutator(&tensor_square_lift(g)).unwrap().is_zero());
        }
    }
    // The center sits inside the commutant's span.
    let center = symsim_core::center_of_commutant(&union, d).unwrap();
    for c in &center {
        assert!(in_span(&linear.basis, c));
    }
}

#[test]
fn displayed_commutant_basis_spans_the_computed_one() {
    // The three mutually commuting operators quoted for the dipole example
    // span exactly the computed commutant (basis equality up to change of
    // basis, checked at the span level).
    let gi = |re: i64, im: i64| {
        GaussianRational::new(Rational::from_integer(re.into()), Rational::from_integer(im.into()))
    };
    let displayed = [
        SparseMatrix::identity(4),
        SparseMatrix::from_entries(
            4,
            4,
            [(0, 0, gi(1, 0)), (1, 2, gi(1, 0)), (2, 1, gi(1, 0)), (3, 3, gi(1, 0))],
        )
        .unwrap(),
        SparseMatrix::from_entries(
            4,
            4,
            [
                (0, 3, gi(1, 0)),
                (1, 2, gi(0, -1)),
                (2, 1, gi(0, -1)),
                (3, 0, gi(-1, 0)),
            ],
        )
        .unwrap(),
    ];
    let inst = example_fixture(FixtureName::Ex2a);
    let computed = commutant(&inst.union(), 4).unwrap();
    assert_eq!(computed.dim, 3);
    for m in &displayed {
        assert!(in_span(&computed.basis, m), "displayed operator escaped");
    }
    for m in &computed.basis {
        assert!(in_span(&displayed, m), "computed operator escaped");
    }
    // They commute pairwise, so they also span the center.
    for a in &displayed {
        for b in &displayed {
            assert!(a.commutator(b).unwrap().is_zero());
        }
    }
}

#[test]
fn closure_basis_of_dipole_controls_has_real_span_four() {
    let inst = example_fixture(FixtureName::Ex2a);
    let closed = lie_closure(inst.p_set(), None).unwrap();
    assert_eq!(real_span_rank(&closed.basis).unwrap(), 4);
}

#[test]
fn projections_vanish_for_traceless_generators_against_identity_center() {
    let inst = example_fixture(FixtureName::Ex1);
    let center = vec![SparseMatrix::identity(4)];
    let proj = central_projections(
        &center,
        inst.p_set(),
        inst.q_set(),
        &RankOptions::exact(),
    )
    .unwrap();
    assert!(proj.t_full.is_zero());
    assert!(proj.t_restricted.is_zero());
    assert_eq!(proj.rank_full.rank, 0);
    assert_eq!(proj.rank_restricted.rank, 0);
}

#[test]
fn fully_controllable_instance_has_identity_center_only() {
    let inst = central_spin_instance(2, &coupling_pattern(CouplingCase::A, 2)).unwrap();
    let center = symsim_core::center_of_commutant(&inst.union(), inst.dim()).unwrap();
    assert_eq!(center.len(), 1);
    assert_eq!(center[0], SparseMatrix::identity(4));
}

#[test]
fn mutual_decision_on_the_pairing_target_cross_checks_with_oracle() {
    let inst = example_fixture(FixtureName::Ex2b);
    let opts = EngineOptions {
        rank: RankOptions::exact(),
        force_condition_b: false,
    };
    let mutual = decide_mutual(inst.p_set(), inst.q_set(), &opts).unwrap();
    // The single pairing-type target cannot rebuild the two controls.
    assert_eq!(mutual.verdict, MutualVerdict::PStrictlyLarger);
    let forward_oracle = oracle_verdict(&inst, None).unwrap();
    assert_eq!(
        forward_oracle.simulable,
        mutual.forward.verdict == Verdict::Simulable
    );
    assert_eq!((forward_oracle.closure_dim_p, forward_oracle.closure_dim_union), (4, 4));
    let reversed = ProblemInstance::new(inst.q_set().to_vec(), inst.p_set().to_vec(), None).unwrap();
    let backward_oracle = oracle_verdict(&reversed, None).unwrap();
    assert_eq!(
        backward_oracle.simulable,
        mutual.backward.verdict == Verdict::Simulable
    );
}

#[test]
fn quadratic_symmetries_are_first_order_conserved() {
    // For s in the quadratic commutant of the controls, iH among the
    // controls and any state, Tr[([iH,ρ] ⊗ ρ + ρ ⊗ [iH,ρ]) s] = 0: the
    // degree-two quantity Tr[(ρ⊗ρ) s] has zero first-order variation along
    // every generated flow.
    let inst = example_fixture(FixtureName::Ex1);
    let quad = quadratic_commutant(inst.p_set(), 4).unwrap();
    let mut rho = SparseMatrix::zero(4, 4);
    let mut v = 1i64;
    for i in 0..4 {
        for j in 0..4 {
            rho.set(
                i,
                j,
                GaussianRational::new(
                    Rational::new(v.into(), 3.into()),
                    Rational::new(((v * 7) % 5).into(), 2.into()),
                ),
            );
            v += 1;
        }
    }
    let trace_product = |a: &SparseMatrix, b: &SparseMatrix| {
        let mut acc = GaussianRational::zero();
        for (i, j, x) in a.iter() {
            acc += &(x * &b.get(j, i));
        }
        acc
    };
    for ih in inst.p_set() {
        let c = ih.commutator(&rho).unwrap();
        let variation = c.kron(&rho).add(&rho.kron(&c)).unwrap();
        for s in &quad.basis {
            assert!(trace_product(&variation, s).is_zero());
        }
    }
}

#[test]
fn concurrence_is_invariant_under_local_signed_permutations() {
    let one = GaussianRational::one();
    let signed_perms: Vec<SparseMatrix> = {
        let mut out = Vec::new();
        for (s1, s2) in [(1i64, 1i64), (1, -1), (-1, 1), (-1, -1)] {
            let diag = SparseMatrix::from_entries(
                2,
                2,
                [
                    (0, 0, GaussianRational::from_integer(s1)),
                    (1, 1, GaussianRational::from_integer(s2)),
                ],
            )
            .unwrap();
            let anti = SparseMatrix::from_entries(
                2,
                2,
                [
                    (0, 1, GaussianRational::from_integer(s1)),
                    (1, 0, GaussianRational::from_integer(s2)),
                ],
            )
            .unwrap();
            out.push(diag);
            out.push(anti);
        }
        out
    };
    let states = [
        vec![one.clone(), GaussianRational::zero(), GaussianRational::zero(), one.clone()],
        vec![
            GaussianRational::from_integer(2),
            GaussianRational::new(Rational::new(1.into(), 3.into()), Rational::new(1.into(), 2.into())),
            GaussianRational::from_integer(-1),
            GaussianRational::i(),
        ],
    ];
    for amps in &states {
        let psi = SparseMatrix::column_from_slice(amps);
        let base = symsim_core::concurrence_squared(&psi).unwrap();
        for u in &signed_perms {
            for v in &signed_perms {
                let rotated = u.kron(v).matmul(&psi).unwrap();
                assert_eq!(symsim_core::concurrence_squared(&rotated).unwrap(), base);
            }
        }
    }
}

#[test]
fn engine_report_center_dim_is_one_for_fully_controllable_models() {
    let inst = central_spin_instance(2, &coupling_pattern(CouplingCase::B, 2)).unwrap();
    let report = decide(
        &inst,
        &EngineOptions {
            rank: RankOptions::exact(),
            force_condition_b: false,
        },
    )
    .unwrap();
    assert_eq!(report.verdict, Verdict::Simulable);
    assert_eq!(report.condition_b.center_dim, Some(1));
}
