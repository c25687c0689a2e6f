//! Randomized invariants for the algebraic and geometric kernels: normal
//! forms, element orders against an independent rational-arithmetic oracle,
//! coordinate-free symbol reading, parser round-trips, subdivision strategy
//! independence and the averaging-operator laws.

mod common;

use std::sync::{Arc, OnceLock};

use ebt_core::arith::XorShift64;
use ebt_core::lattice::random_unimodular;
use ebt_core::{
    classes_equal, enumerate_overlattices, enumerate_symbols, gaussian_binomial, hecke_image,
    parse_expression, presented_group, psi_tilde_expr_with, smith_normal_form,
    verify_hecke_annihilates_relations, verify_subdivision_relations, Cone, FinAbelianGroupSpec,
    HeckeParams, IntMatrix, Lattice, LatticeTriple, PresentedAbelianGroup, SubdivisionStrategy,
    Symbol, SymbolExpression, SymbolPresentation, Variant,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use proptest::prelude::*;

// ---------------------------------------------------------------------------
// Strategies and helpers
// ---------------------------------------------------------------------------

/// An arbitrary integer matrix with the given dimension and entry bounds.
fn matrix_strategy(
    max_rows: usize,
    max_cols: usize,
    bound: i64,
) -> impl Strategy<Value = IntMatrix> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(move |(r, c)| {
        prop::collection::vec(-bound..=bound, r * c)
            .prop_map(move |entries| IntMatrix::from_fn(r, c, |i, j| BigInt::from(entries[i * c + j])))
    })
}

/// Small groups exercised by the symbol-level properties, with the symbol
/// arity used for each.
fn group_pool() -> Vec<(FinAbelianGroupSpec, usize)> {
    vec![
        (FinAbelianGroupSpec::cyclic(4).unwrap(), 2),
        (FinAbelianGroupSpec::cyclic(5).unwrap(), 2),
        (FinAbelianGroupSpec::cyclic(7).unwrap(), 2),
        (FinAbelianGroupSpec::from_cyclic_orders(&[2, 2]).unwrap(), 2),
        (FinAbelianGroupSpec::cyclic(3).unwrap(), 3),
    ]
}

/// A deterministic pseudo-random expression over the faithful symbols of a
/// group: up to four terms with nonzero coefficients in [-9, 9].
fn random_expression(
    symbols: &[Symbol],
    rng: &mut XorShift64,
) -> SymbolExpression {
    let mut expr = SymbolExpression::zero();
    let terms = 1 + rng.below(4) as usize;
    for _ in 0..terms {
        let idx = rng.below(symbols.len() as u64) as usize;
        let mut coeff = rng.signed(9);
        if coeff == 0 {
            coeff = 1;
        }
        expr.add_term(symbols[idx].clone(), BigInt::from(coeff));
    }
    expr
}

fn prime_factors(n: &BigInt) -> Vec<BigInt> {
    let mut n = n.clone();
    let mut out = Vec::new();
    let mut d = BigInt::from(2);
    while &d * &d <= n {
        if n.is_multiple_of(&d) {
            out.push(d.clone());
            while n.is_multiple_of(&d) {
                n /= &d;
            }
        }
        d += 1;
    }
    if n > BigInt::one() {
        out.push(n);
    }
    out
}

fn presentation_b2_z7() -> &'static SymbolPresentation {
    static CELL: OnceLock<SymbolPresentation> = OnceLock::new();
    CELL.get_or_init(|| {
        let group = FinAbelianGroupSpec::cyclic(7).unwrap();
        presented_group(&group, 2, Variant::B).unwrap()
    })
}

// ---------------------------------------------------------------------------
// Normal-form properties
// ---------------------------------------------------------------------------

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    /// The factorization U·A·V = D holds entrywise, the diagonal divides
    /// along its length with zeros trailing, and the recorded inverses are
    /// genuine two-sided inverses (so U and V are unimodular).
    #[test]
    fn normal_form_reconstructs_and_divides(a in matrix_strategy(6, 6, 15)) {
        let snf = smith_normal_form(&a);
        let product = snf.u.mul(&a).mul(&snf.v);
        prop_assert_eq!(&product, &snf.d_matrix());

        let mut seen_zero = false;
        for w in snf.diag.windows(2) {
            if w[0].is_zero() {
                seen_zero = true;
            }
            if seen_zero {
                prop_assert!(w[1].is_zero());
            } else if !w[1].is_zero() {
                prop_assert!(w[1].is_multiple_of(&w[0]));
            }
        }

        let rows = a.rows();
        let cols = a.cols();
        prop_assert_eq!(&snf.u.mul(&snf.u_inv), &IntMatrix::identity(rows));
        prop_assert_eq!(&snf.v.mul(&snf.v_inv), &IntMatrix::identity(cols));
    }

    /// The cokernel invariants do not change under unimodular row and
    /// column transformations of the presentation matrix.
    #[test]
    fn cokernel_invariants_are_basis_independent(
        a in matrix_strategy(5, 5, 12),
        seed_p in any::<u64>(),
        seed_q in any::<u64>(),
    ) {
        let p = random_unimodular(a.rows(), &mut XorShift64::new(seed_p));
        let q = random_unimodular(a.cols(), &mut XorShift64::new(seed_q));
        let transformed = p.mul(&a).mul(&q);
        prop_assert_eq!(
            ebt_core::cokernel_structure(&a),
            ebt_core::cokernel_structure(&transformed)
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    /// Element orders computed through the Smith-form solver agree with an
    /// independent oracle (column Hermite basis plus rational elimination),
    /// and finite orders are minimal: the order kills the class while the
    /// order divided by any of its prime factors does not.
    #[test]
    fn element_orders_match_oracle_and_are_minimal(
        relations in matrix_strategy(5, 6, 10),
        coords_raw in prop::collection::vec(-10i64..=10, 5),
    ) {
        let m = relations.rows();
        let labels = (0..m).map(|i| format!("g{i}")).collect::<Vec<_>>();
        let presented = Arc::new(PresentedAbelianGroup::new(labels, relations.clone()));
        let coords: Vec<BigInt> = coords_raw[..m].iter().map(|&x| BigInt::from(x)).collect();
        let class = presented.class(coords.clone());

        let oracle = common::oracle_class_order(&relations, &coords);
        match (class.order().finite(), oracle) {
            (Some(k), Some(expected)) => {
                prop_assert_eq!(k, &expected);
                prop_assert!(class.scale(k).is_zero());
                for q in prime_factors(k) {
                    let reduced = k / &q;
                    prop_assert!(!class.scale(&reduced).is_zero());
                }
            }
            (None, None) => {}
            (lib, oracle) => {
                return Err(TestCaseError::fail(format!(
                    "order mismatch: library {lib:?}, oracle {oracle:?}"
                )));
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Symbol reading and parsing
// ---------------------------------------------------------------------------

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Reading the symbol of the standard triple gives the symbol back, and
    /// the reading is invariant under a simultaneous unimodular change of
    /// the cone generators and the character vector.
    #[test]
    fn symbol_reading_is_coordinate_free(
        pool_idx in 0usize..5,
        symbol_seed in any::<u64>(),
        matrix_seed in any::<u64>(),
    ) {
        let (group, n) = group_pool().swap_remove(pool_idx);
        let symbols = enumerate_symbols(&group, n).unwrap();
        let symbol = &symbols[(symbol_seed % symbols.len() as u64) as usize];

        let base = LatticeTriple::standard_for_symbol(symbol);
        prop_assert_eq!(&ebt_core::symbol_of_basic_triple(&base, &group).unwrap(), symbol);

        let m = random_unimodular(n, &mut XorShift64::new(matrix_seed));
        let chi = (0..n)
            .map(|i| {
                let mut acc = group.zero_character();
                for (j, a) in symbol.entries().iter().enumerate() {
                    acc = acc.add(&a.scale_bigint(&m[(i, j)], &group), &group);
                }
                acc
            })
            .collect::<Vec<_>>();
        let cone = Cone::new(m).unwrap();
        let triple = LatticeTriple::new(Lattice::standard(n), chi, cone, &group).unwrap();
        prop_assert_eq!(&ebt_core::symbol_of_basic_triple(&triple, &group).unwrap(), symbol);
    }

    /// Formal sums survive a round trip through their canonical string
    /// form.
    #[test]
    fn expression_parser_round_trips(pool_idx in 0usize..5, seed in any::<u64>()) {
        let (group, n) = group_pool().swap_remove(pool_idx);
        let symbols = enumerate_symbols(&group, n).unwrap();
        let expr = random_expression(&symbols, &mut XorShift64::new(seed));
        let printed = expr.canonical_string();
        let reparsed = parse_expression(&printed, &group, n).unwrap();
        prop_assert_eq!(reparsed, expr);
    }

    /// Reduction to a presented quotient is linear: it respects sums and
    /// integer scaling, and a finite order annihilates its class.
    #[test]
    fn class_reduction_is_linear(seed in any::<u64>(), k in -6i64..=6) {
        let presentation = presentation_b2_z7();
        let symbols = presentation.symbols();
        let mut rng = XorShift64::new(seed);
        let e1 = random_expression(symbols, &mut rng);
        let e2 = random_expression(symbols, &mut rng);

        let c1 = presentation.class_of(&e1).unwrap();
        let c2 = presentation.class_of(&e2).unwrap();
        let sum = presentation.class_of(&e1.add(&e2)).unwrap();
        prop_assert!(classes_equal(&sum, &c1.add(&c2).unwrap()).unwrap());

        let scaled = presentation.class_of(&e1.scale(&BigInt::from(k))).unwrap();
        prop_assert!(classes_equal(&scaled, &c1.scale(&BigInt::from(k))).unwrap());

        if let Some(order) = c1.order().finite() {
            prop_assert!(c1.scale(order).is_zero());
        }
    }
}

/// The zero expression prints as `0` and parses back to zero.
#[test]
fn zero_expression_round_trips() {
    let group = FinAbelianGroupSpec::cyclic(5).unwrap();
    let zero = SymbolExpression::zero();
    assert_eq!(zero.canonical_string(), "0");
    assert!(parse_expression("0", &group, 2).unwrap().is_zero());
}

// ---------------------------------------------------------------------------
// Subdivision calculus
// ---------------------------------------------------------------------------

/// Evaluating a planar cone through the continued-fraction subdivision and
/// through the stellar refinement gives the same class for every faithful
/// character pair, including on non-smooth cones.
#[test]
fn planar_subdivision_strategies_agree() {
    let group = FinAbelianGroupSpec::cyclic(5).unwrap();
    let presentation = presented_group(&group, 2, Variant::B).unwrap();
    let symbols = enumerate_symbols(&group, 2).unwrap();
    let mut rng = XorShift64::new(0x5eed_0f0f_3333_aaaa);
    for _ in 0..24 {
        let g0 = 1 + rng.below(9) as i64;
        let g1 = 1 + rng.below(9) as i64;
        let gens = IntMatrix::from_fn(2, 2, |i, j| {
            BigInt::from(match (i, j) {
                (0, 0) => 1,
                (1, 0) => 0,
                (0, 1) => g0,
                (1, 1) => g1,
                _ => unreachable!(),
            })
        });
        let cone = Cone::new(gens).unwrap();
        let symbol = &symbols[rng.below(symbols.len() as u64) as usize];
        let triple = LatticeTriple::new(
            Lattice::standard(2),
            symbol.entries().to_vec(),
            cone,
            &group,
        )
        .unwrap();
        let minimal = psi_tilde_expr_with(&triple, &group, SubdivisionStrategy::Minimal).unwrap();
        let refined = psi_tilde_expr_with(&triple, &group, SubdivisionStrategy::Refined).unwrap();
        let difference = presentation.class_of(&minimal.sub(&refined)).unwrap();
        assert!(
            difference.is_zero(),
            "strategies disagree on cone <(1,0),({g0},{g1})> at {}",
            symbol
        );
    }
}

/// The subdivision identities hold over composite and multi-factor groups,
/// not only the prime moduli exercised by the named suite.
#[test]
fn subdivision_relations_hold_for_composite_groups() {
    for (group, n, samples) in [
        (FinAbelianGroupSpec::cyclic(8).unwrap(), 2, 6),
        (FinAbelianGroupSpec::cyclic(12).unwrap(), 2, 4),
        (FinAbelianGroupSpec::from_cyclic_orders(&[2, 4]).unwrap(), 3, 3),
    ] {
        let report = verify_subdivision_relations(&group, n, samples, 0x0dd5_eed5).unwrap();
        assert!(
            report.passed(),
            "subdivision identities failed for {} at n={n}: {:?}",
            group.canonical_string(),
            report.failures().collect::<Vec<_>>()
        );
    }
}

// ---------------------------------------------------------------------------
// Averaging operators
// ---------------------------------------------------------------------------

/// The overlattice count at each level matches the Gaussian binomial, which
/// is itself symmetric in the level.
#[test]
fn overlattice_counts_match_gaussian_binomials() {
    for n in 2..=3usize {
        for ell in [2u64, 3] {
            for r in 1..=n {
                let count = enumerate_overlattices(&Lattice::standard(n), ell, r)
                    .unwrap()
                    .len();
                assert_eq!(BigInt::from(count), gaussian_binomial(n, r, ell));
            }
        }
    }
    for n in 0..=5usize {
        for r in 0..=n {
            for ell in [2u64, 3, 5] {
                assert_eq!(
                    gaussian_binomial(n, r, ell),
                    gaussian_binomial(n, n - r, ell)
                );
            }
        }
    }
}

/// The operator is additive on formal sums.
#[test]
fn averaging_operator_is_additive() {
    let group = FinAbelianGroupSpec::cyclic(3).unwrap();
    let params = HeckeParams::new(2, 1);
    let symbols = enumerate_symbols(&group, 2).unwrap();
    let mut rng = XorShift64::new(0xadd_111e);
    for _ in 0..8 {
        let e1 = random_expression(&symbols, &mut rng);
        let e2 = random_expression(&symbols, &mut rng);
        let joint = hecke_image(&params, &e1.add(&e2), &group).unwrap();
        let split = hecke_image(&params, &e1, &group)
            .unwrap()
            .add(&hecke_image(&params, &e2, &group).unwrap());
        assert_eq!(joint, split);
    }
}

/// For groups of exponent two every admissible multiplier is congruent to
/// one modulo the exponent, so the operator descends for all of them.
#[test]
fn odd_multipliers_descend_on_exponent_two_groups() {
    let two = FinAbelianGroupSpec::cyclic(2).unwrap();
    let klein = FinAbelianGroupSpec::from_cyclic_orders(&[2, 2]).unwrap();
    for ell in [3u64, 5, 7] {
        for group in [&two, &klein] {
            let report = verify_hecke_annihilates_relations(group, 2, ell).unwrap();
            assert!(
                report.passed(),
                "operator with multiplier {ell} fails to descend on {}: {:?}",
                group.canonical_string(),
                report.failures().collect::<Vec<_>>()
            );
        }
    }
}

// ---------------------------------------------------------------------------
// Torsion structure of the antisymmetrized quotients
// ---------------------------------------------------------------------------

/// In the antisymmetrized quotients, every symbol with a zero entry is a
/// torsion class.
#[test]
fn zero_entry_symbols_are_torsion_in_antisymmetrized_quotients() {
    for spec in [
        FinAbelianGroupSpec::cyclic(4).unwrap(),
        FinAbelianGroupSpec::cyclic(5).unwrap(),
        FinAbelianGroupSpec::cyclic(7).unwrap(),
    ] {
        for variant in [Variant::Bminus, Variant::Mminus] {
            let presentation = presented_group(&spec, 2, variant).unwrap();
            for symbol in presentation.symbols() {
                if symbol.zero_count() == 0 {
                    continue;
                }
                let class = presentation.class_of_symbol(symbol).unwrap();
                assert!(
                    class.order().is_finite(),
                    "{symbol} has infinite order in the {variant:?} quotient of {}",
                    spec.canonical_string()
                );
            }
        }
    }
}
