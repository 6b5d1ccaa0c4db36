use liecohom_core::complex::{
    coboundary, coboundary_matrix_direct, coboundary_matrix_recursive, contract, evaluate_cochain,
    Cochain, CochainBasis,
};
use liecohom_core::driver::{betti_numbers, binomial, graded_betti, Mode};
use liecohom_core::field::{FieldElement, FieldSpec};
use liecohom_core::grading::make_grading;
use liecohom_core::lie::{
    builtin_algebra, make_module, BuiltinKind, GModule, LieAlgebra, ModuleSpec,
};
use proptest::prelude::*;

fn builtins_up_to_14() -> Vec<(BuiltinKind, usize)> {
    let mut out = vec![(BuiltinKind::Sl, 2), (BuiltinKind::Sl, 3)];
    out.extend((2..=5).map(|n| (BuiltinKind::BorelSl, n)));
    out.extend((2..=5).map(|n| (BuiltinKind::NilpotentSl, n)));
    out.extend((2..=5).map(|n| (BuiltinKind::CartanSl, n)));
    out.extend((1..=5).map(|n| (BuiltinKind::Abelian, n)));
    out.extend((1..=3).map(|n| (BuiltinKind::Heisenberg, n)));
    out
}

fn setup(kind: BuiltinKind, n: usize, field: FieldSpec, spec: ModuleSpec) -> (LieAlgebra, GModule) {
    let (g, _) = builtin_algebra(kind, n, field).unwrap();
    let m = make_module(&spec, &g).unwrap();
    (g, m)
}

#[test]
fn square_zero_and_two_assemblies_agree() {
    for field in [FieldSpec::RATIONALS, FieldSpec::prime(3).unwrap()] {
        for (kind, p) in builtins_up_to_14() {
            for spec in [ModuleSpec::Trivial, ModuleSpec::Adjoint] {
                let (g, m) = setup(kind, p, field, spec);
                let mats: Vec<_> = (0..=g.dim())
                    .map(|n| coboundary_matrix_direct(&g, &m, n))
                    .collect();
                for n in 0..=g.dim() {
                    assert_eq!(
                        mats[n],
                        coboundary_matrix_recursive(&g, &m, n),
                        "{} n={n}",
                        g.label()
                    );
                    if n < g.dim() {
                        assert!(mats[n + 1].mul(&mats[n]).is_zero(), "{} n={n}", g.label());
                    }
                }
            }
        }
    }
}

#[test]
fn euler_characteristic_matches_betti() {
    for (kind, p) in builtins_up_to_14() {
        let (g, m) = setup(kind, p, FieldSpec::RATIONALS, ModuleSpec::Trivial);
        let rep = betti_numbers(&g, &m, &Mode::Full, None, false).unwrap();
        let sign = |n: usize| if n.is_multiple_of(2) { 1i64 } else { -1 };
        let chi_c: i64 = rep
            .per_n
            .iter()
            .map(|l| sign(l.n) * l.dim_c_full as i64)
            .sum();
        let chi_h: i64 = rep.per_n.iter().map(|l| sign(l.n) * l.betti as i64).sum();
        assert_eq!(chi_c, chi_h, "{}", g.label());
    }
}

#[test]
fn abelian_betti_are_binomials() {
    for d in 1..=6 {
        let (g, m) = setup(
            BuiltinKind::Abelian,
            d,
            FieldSpec::RATIONALS,
            ModuleSpec::Trivial,
        );
        let betti = betti_numbers(&g, &m, &Mode::Full, None, false)
            .unwrap()
            .betti();
        assert_eq!(betti, (0..=d).map(|n| binomial(d, n)).collect::<Vec<_>>());
    }
}

#[test]
fn full_and_reduced_agree_on_graded_builtins() {
    let mut cases: Vec<(BuiltinKind, usize)> = (2..=5).map(|n| (BuiltinKind::BorelSl, n)).collect();
    cases.extend((2..=4).map(|n| (BuiltinKind::CartanSl, n)));
    cases.extend([(BuiltinKind::Sl, 2), (BuiltinKind::Sl, 3)]);
    for (kind, p) in cases {
        for spec in [ModuleSpec::Trivial, ModuleSpec::Adjoint] {
            let (g, tag) = builtin_algebra(kind, p, FieldSpec::RATIONALS).unwrap();
            let m = make_module(&spec, &g).unwrap();
            let gr = make_grading(&g, &m, &tag.elements(&g)).unwrap();
            let full = betti_numbers(&g, &m, &Mode::Full, None, false).unwrap();
            let red = betti_numbers(&g, &m, &Mode::Reduced(gr.clone()), None, false).unwrap();
            assert_eq!(full.betti(), red.betti(), "{} {:?}", g.label(), m.kind());
            let mut strict = false;
            for (f, r) in full.per_n.iter().zip(&red.per_n) {
                let rd = r.dim_c_reduced.unwrap();
                assert!(rd <= f.dim_c_full);
                strict |= rd < f.dim_c_full;
            }
            if kind != BuiltinKind::CartanSl {
                assert!(strict, "{}", g.label());
            }
            if g.dim() <= 9 {
                for (n, b) in full.betti().iter().enumerate() {
                    let total: usize = graded_betti(&g, &m, &gr, n).unwrap().values().sum();
                    assert_eq!(total, *b, "{} n={n}", g.label());
                }
            }
        }
    }
    // abelian graded by a basis vector: everything has degree zero
    let (g, m) = setup(
        BuiltinKind::Abelian,
        4,
        FieldSpec::RATIONALS,
        ModuleSpec::Adjoint,
    );
    let gr = make_grading(&g, &m, &[g.basis_element(0)]).unwrap();
    let full = betti_numbers(&g, &m, &Mode::Full, None, false).unwrap();
    let red = betti_numbers(&g, &m, &Mode::Reduced(gr), None, false).unwrap();
    assert_eq!(full.betti(), red.betti());
}

fn element(g: &LieAlgebra, coeffs: &[i64]) -> Vec<FieldElement> {
    (0..g.dim())
        .map(|i| g.field().from_i64(coeffs[i % coeffs.len()]))
        .collect()
}

fn cochain(g: &LieAlgebra, m: &GModule, n: usize, picks: &[(usize, i64)]) -> Cochain {
    let len = CochainBasis::new(g.dim(), m.dim(), n).len();
    let terms = picks
        .iter()
        .map(|(i, c)| (i % len, g.field().from_i64(*c)))
        .collect();
    Cochain::from_sparse(g, m, n, terms).unwrap()
}

fn case() -> impl Strategy<Value = (BuiltinKind, usize, bool)> {
    prop_oneof![
        (2usize..=4).prop_map(|n| (BuiltinKind::BorelSl, n, false)),
        (2usize..=4).prop_map(|n| (BuiltinKind::BorelSl, n, true)),
        Just((BuiltinKind::Sl, 2, true)),
        Just((BuiltinKind::Sl, 3, false)),
        (1usize..=2).prop_map(|n| (BuiltinKind::Heisenberg, n, true)),
        (3usize..=4).prop_map(|n| (BuiltinKind::NilpotentSl, n, true)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    // delta F evaluated pointwise equals the matrix image of F's coefficients
    #[test]
    fn evaluation_matches_matrix(
        (kind, p, adjoint) in case(),
        n in 0usize..4,
        picks in proptest::collection::vec((0usize..10_000, -3i64..=3), 1..5),
        args in proptest::collection::vec(proptest::collection::vec(-2i64..=2, 1..6), 5),
    ) {
        let spec = if adjoint { ModuleSpec::Adjoint } else { ModuleSpec::Trivial };
        let (g, m) = setup(kind, p, FieldSpec::RATIONALS, spec);
        prop_assume!(n < g.dim());
        let f = cochain(&g, &m, n, &picks);
        let df = coboundary(&g, &m, &f);
        let via_matrix = coboundary_matrix_direct(&g, &m, n).mul_vec(&f.to_dense());
        prop_assert_eq!(df.to_dense(), via_matrix);
        let xs: Vec<Vec<FieldElement>> = args.iter().take(n + 1).map(|c| element(&g, c)).collect();
        // direct formula on arbitrary (non-basis) arguments
        let mut expected = vec![g.field().zero(); m.dim()];
        for i in 0..=n {
            let rest: Vec<_> = xs.iter().enumerate().filter(|e| e.0 != i).map(|e| e.1.clone()).collect();
            let v = m.act(&xs[i]).mul_vec(&evaluate_cochain(&f, &rest).unwrap());
            for (e, x) in expected.iter_mut().zip(v) {
                *e = if i % 2 == 0 { &*e + &x } else { &*e - &x };
            }
            for j in i + 1..=n {
                let mut args2 = vec![g.bracket(&xs[i], &xs[j])];
                args2.extend(xs.iter().enumerate().filter(|e| e.0 != i && e.0 != j).map(|e| e.1.clone()));
                let v = evaluate_cochain(&f, &args2).unwrap();
                for (e, x) in expected.iter_mut().zip(v) {
                    *e = if (i + j) % 2 == 0 { &*e + &x } else { &*e - &x };
                }
            }
        }
        prop_assert_eq!(evaluate_cochain(&df, &xs).unwrap(), expected);
    }

    #[test]
    fn contractions_anticommute(
        (kind, p, adjoint) in case(),
        n in 2usize..5,
        picks in proptest::collection::vec((0usize..10_000, -3i64..=3), 1..5),
        x in proptest::collection::vec(-2i64..=2, 1..6),
        y in proptest::collection::vec(-2i64..=2, 1..6),
    ) {
        let spec = if adjoint { ModuleSpec::Adjoint } else { ModuleSpec::Trivial };
        let (g, m) = setup(kind, p, FieldSpec::RATIONALS, spec);
        prop_assume!(n <= g.dim());
        let f = cochain(&g, &m, n, &picks);
        let (x, y) = (element(&g, &x), element(&g, &y));
        let xy = contract(&contract(&f, &x).unwrap(), &y).unwrap();
        let yx = contract(&contract(&f, &y).unwrap(), &x).unwrap();
        prop_assert!(xy.add(&yx).unwrap().is_zero());
        let xx = contract(&contract(&f, &x).unwrap(), &x).unwrap();
        prop_assert!(xx.is_zero());
    }

    // over F_p the complex is the mod-p reduction, so delta delta still vanishes
    #[test]
    fn square_zero_mod_p(p_idx in 0usize..4, (kind, n_alg, adjoint) in case(), n in 0usize..4) {
        let p = [2u64, 3, 5, 7][p_idx];
        let spec = if adjoint { ModuleSpec::Adjoint } else { ModuleSpec::Trivial };
        let (g, m) = setup(kind, n_alg, FieldSpec::prime(p).unwrap(), spec);
        prop_assume!(n < g.dim());
        let a = coboundary_matrix_direct(&g, &m, n);
        let b = coboundary_matrix_direct(&g, &m, n + 1);
        prop_assert!(b.mul(&a).is_zero());
    }
}
