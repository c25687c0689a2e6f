//! Exact presentations of equivariant birational type groups of finite
//! abelian groups.
//!
//! The crate models the free abelian group on faithful character symbols
//! and its quotients by blow-up style rewrite relations, all over exact
//! big-integer arithmetic:
//!
//! * [`snf`] — Smith normal form with tracked unimodular transforms, the
//!   kernel every structure computation reduces to;
//! * [`presented`] — finitely presented abelian groups, element classes,
//!   orders and equality;
//! * [`group`], [`symbol`], [`expr`] — finite abelian groups, their
//!   characters, symbols and formal symbol sums;
//! * [`relations`] — the four relation variants, the presented quotients,
//!   the comparison map μ and the identity suites;
//! * [`lattice`] — lattices, simplicial cones, star and smooth
//!   subdivisions, and the evaluation map from lattice triples;
//! * [`hecke`] — overlattice enumeration and the induced Hecke operators;
//! * [`verify`] — the named verification suites surfaced by the CLI.

pub mod arith;
pub mod error;
pub mod expr;
pub mod group;
pub mod hecke;
pub mod lattice;
pub mod matrix;
pub mod presented;
pub mod relations;
pub mod report;
pub mod snf;
pub mod symbol;
pub mod verify;

pub use error::{Error, Result};
pub use expr::{parse_expression, SymbolExpression};
pub use group::{parse_group_spec, Character, FinAbelianGroupSpec};
pub use hecke::{
    enumerate_overlattices, gaussian_binomial, hecke_apply, hecke_image, hecke_image_of_symbol,
    transport_chi, transport_cone, verify_hecke_annihilates_relations, verify_hecke_commutation,
    HeckeParams,
};
pub use lattice::{
    chi_condition, chi_in_saturated_span, psi_tilde, psi_tilde_expr, psi_tilde_expr_with,
    star_subdivision, subdivide_smooth, subdivide_smooth_with, symbol_of_basic_triple,
    verify_subdivision_relations, Cone, Lattice, LatticeTriple, SubdivisionStrategy,
};
pub use matrix::IntMatrix;
pub use presented::{
    classes_equal, cokernel_structure, ClassOrder, GroupElementClass, PresentedAbelianGroup,
    ReducedCoords,
};
pub use relations::{
    build_relations, mu_matrix, parse_variant, presented_group, rank_compare, verify_lemma_suite,
    verify_mu_descends, verify_mu_descends_minus, MuRankReport, RelationSet, SymbolPresentation,
    Variant,
};
pub use report::{Check, SuiteReport};
pub use snf::{invariant_factors, smith_normal_form, SmithForm};
pub use symbol::{enumerate_symbols, Symbol};
pub use verify::{
    run_suite, suite_001n, suite_compare, suite_hecke, suite_lemmas, suite_pn, suite_subdivision,
    SuiteOptions, SUITE_NAMES,
};
