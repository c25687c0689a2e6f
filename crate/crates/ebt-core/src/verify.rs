//! Named verification suites bundling the desk-scale identity batteries.
//!
//! Each suite runs a fixed battery of exact computations and returns a
//! [`SuiteReport`] with one named check per instance, carrying witnesses
//! on failure and the computed values (orders, ranks) as details. The CLI
//! surfaces the suites under short names: `pn`, `001N`, `lemmas`,
//! `compare`, `subdivision`, `hecke`.

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::group::FinAbelianGroupSpec;
use crate::hecke::{verify_hecke_annihilates_relations, verify_hecke_commutation};
use crate::lattice::verify_subdivision_relations;
use crate::relations::{
    presented_group, rank_compare, verify_lemma_suite, verify_mu_descends,
    verify_mu_descends_minus, Variant,
};
use crate::report::{Check, SuiteReport};

/// Bounds and knobs shared by the suites; `Default` gives the full desk
/// battery.
#[derive(Clone, Copy, Debug)]
pub struct SuiteOptions {
    /// Largest prime modulus for the `pn`, `001N` and `lemmas` batteries.
    pub pmax: u64,
    /// Largest arity for the `compare` battery.
    pub nmax: usize,
    /// Largest cyclic group order for the `compare` battery at arity 2.
    pub group_order_max: u64,
    /// Sample count for the randomised subdivision checks.
    pub samples: usize,
    /// Seed for the randomised subdivision checks.
    pub seed: u64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            pmax: 13,
            nmax: 3,
            group_order_max: 15,
            samples: 12,
            seed: 0x5eed_1234_abcd_0001,
        }
    }
}

const PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];
const COMPOSITES_N2: [u64; 6] = [4, 6, 8, 9, 10, 12];
const COMPOSITES_N3: [u64; 3] = [4, 6, 9];

/// Torsion of the distinguished classes at arity 2: order(δ) = 1 for
/// p ≤ 5 and a divisor of (p²−1)/24 for larger primes; for composite
/// moduli, `[a,0]+[−a,0]` has finite order for every unit `a`.
pub fn suite_pn(opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("pn");
    for p in PRIMES.iter().copied().filter(|&p| p <= opts.pmax) {
        let g = FinAbelianGroupSpec::cyclic(p)?;
        let presentation = presented_group(&g, 2, Variant::B)?;
        let delta = presentation.delta_class()?;
        let order = delta.order();
        let (ok, expected) = if p <= 5 {
            (delta.is_zero(), "1".to_string())
        } else {
            let bound = (p * p - 1) / 24;
            (order.divides(bound), format!("a divisor of {bound}"))
        };
        report.push(Check::from_result(
            format!("delta_order_p{p}"),
            ok,
            format!("order = {order}, expected {expected}"),
        ));
    }
    for n in COMPOSITES_N2.iter().copied().filter(|&n| n <= opts.pmax) {
        let g = FinAbelianGroupSpec::cyclic(n)?;
        let presentation = presented_group(&g, 2, Variant::B)?;
        let mut orders = Vec::new();
        let mut all_finite = true;
        for a in (1..n).filter(|a| a.gcd(&n) == 1) {
            let class = presentation.unit_delta_class(a)?;
            let order = class.order();
            all_finite &= order.is_finite();
            orders.push(format!("a={a}: {order}"));
        }
        report.push(Check::from_result(
            format!("unit_sum_torsion_N{n}"),
            all_finite,
            orders.join(", "),
        ));
    }
    Ok(report)
}

/// Torsion of the doubly-degenerate class `[0,0,1]` at arity 3: zero for
/// p ≤ 5, a divisor of (p²−1)/24 for p = 7, finite for the composite
/// moduli 4, 6, 9.
pub fn suite_001n(opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("001N");
    for p in [2u64, 3, 5, 7].iter().copied().filter(|&p| p <= opts.pmax) {
        let g = FinAbelianGroupSpec::cyclic(p)?;
        let presentation = presented_group(&g, 3, Variant::B)?;
        let class = presentation.zero_zero_one_class()?;
        let order = class.order();
        let (ok, expected) = if p <= 5 {
            (class.is_zero(), "1".to_string())
        } else {
            let bound = (p * p - 1) / 24;
            (order.divides(bound), format!("a divisor of {bound}"))
        };
        report.push(Check::from_result(
            format!("doubly_degenerate_order_p{p}"),
            ok,
            format!("order = {order}, expected {expected}"),
        ));
    }
    for n in COMPOSITES_N3.iter().copied().filter(|&n| n <= opts.pmax) {
        let g = FinAbelianGroupSpec::cyclic(n)?;
        let presentation = presented_group(&g, 3, Variant::B)?;
        let class = presentation.zero_zero_one_class()?;
        let order = class.order();
        report.push(Check::from_result(
            format!("doubly_degenerate_torsion_N{n}"),
            order.is_finite(),
            format!("order = {order}, expected finite"),
        ));
    }
    Ok(report)
}

/// The pair-symbol identity battery over every prime modulus up to the
/// bound (reflection sums, δ expressions, triangle decomposition, diagonal
/// and double-ratio sums, three-slope orbits with the cube-root case).
pub fn suite_lemmas(opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("lemmas");
    for p in PRIMES.iter().copied().filter(|&p| p <= opts.pmax) {
        report.merge(verify_lemma_suite(p)?);
    }
    Ok(report)
}

/// The battery of groups the rank comparison runs over: cyclic groups up
/// to `group_order_max` at arity 2; cyclic up to 7 plus the two smallest
/// non-cyclic groups at arity 3.
fn compare_battery(opts: &SuiteOptions) -> Result<Vec<(FinAbelianGroupSpec, usize)>> {
    let mut battery = Vec::new();
    if opts.nmax >= 2 {
        for n in 2..=opts.group_order_max {
            battery.push((FinAbelianGroupSpec::cyclic(n)?, 2));
        }
    }
    if opts.nmax >= 3 {
        for n in 2..=opts.group_order_max.min(7) {
            battery.push((FinAbelianGroupSpec::cyclic(n)?, 3));
        }
        battery.push((FinAbelianGroupSpec::from_cyclic_orders(&[2, 2])?, 3));
        battery.push((FinAbelianGroupSpec::from_cyclic_orders(&[2, 4])?, 3));
    }
    Ok(battery)
}

/// Rational comparison of the two quotients through the diagonal map, on
/// the full battery: the induced map must be an isomorphism over ℚ in both
/// the plain and the antisymmetrised variants, and the map must descend to
/// the quotients at all.
pub fn suite_compare(opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("compare");
    for (group, n) in compare_battery(opts)? {
        let name = group.canonical_string();
        for antisymmetric in [false, true] {
            let cmp = rank_compare(&group, n, antisymmetric)?;
            let tag = if antisymmetric { "minus" } else { "plain" };
            report.push(Check::from_result(
                format!("iso_over_Q_{tag}_{name}_n{n}"),
                cmp.iso_over_q,
                format!(
                    "rank_B = {}, rank_M = {}, induced rank = {}",
                    cmp.rank_b, cmp.rank_m, cmp.mu_rank_over_q
                ),
            ));
        }
        let descends = verify_mu_descends(&group, n)?;
        report.push(Check::from_result(
            format!("mu_descends_{name}_n{n}"),
            descends,
            "diagonal map sends relations into relations",
        ));
        let descends_minus = verify_mu_descends_minus(&group, n)?;
        report.push(Check::from_result(
            format!("mu_descends_minus_{name}_n{n}"),
            descends_minus,
            "antisymmetrised diagonal map sends relations into relations",
        ));
    }
    Ok(report)
}

/// The subdivision battery: symbol round trips, star-subdivision
/// identities and strategy independence over pair symbols for p ≤ 7 and
/// triples over ℤ/5.
pub fn suite_subdivision(opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("subdivision");
    for p in [2u64, 3, 5, 7].iter().copied().filter(|&p| p <= opts.pmax) {
        let g = FinAbelianGroupSpec::cyclic(p)?;
        report.merge(verify_subdivision_relations(&g, 2, opts.samples, opts.seed)?);
    }
    let g5 = FinAbelianGroupSpec::cyclic(5)?;
    report.merge(verify_subdivision_relations(&g5, 3, opts.samples.min(6), opts.seed)?);
    Ok(report)
}

/// The averaging-operator battery: well-definedness (annihilation of every
/// relation column) for the four small (group, ℓ) pairs, and commutation
/// of the ℓ = 2 and ℓ = 5 operators modulo torsion over ℤ/3 and ℤ/7.
pub fn suite_hecke(_opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("hecke");
    for (order, ell) in [(3u64, 2u64), (5, 2), (5, 3), (3, 5)] {
        let g = FinAbelianGroupSpec::cyclic(order)?;
        report.merge(verify_hecke_annihilates_relations(&g, 2, ell)?);
    }
    for order in [3u64, 7] {
        let g = FinAbelianGroupSpec::cyclic(order)?;
        report.merge(verify_hecke_commutation(&g, 2, 2, 5)?);
    }
    Ok(report)
}

/// Runs a suite by its CLI name.
pub fn run_suite(name: &str, opts: &SuiteOptions) -> Result<SuiteReport> {
    match name {
        "pn" => suite_pn(opts),
        "001N" | "001n" => suite_001n(opts),
        "lemmas" => suite_lemmas(opts),
        "compare" => suite_compare(opts),
        "subdivision" => suite_subdivision(opts),
        "hecke" => suite_hecke(opts),
        other => Err(Error::InvalidParameter(format!(
            "unknown suite '{other}' (expected pn, 001N, lemmas, compare, subdivision or hecke)"
        ))),
    }
}

/// The suite names accepted by [`run_suite`], in display order.
pub const SUITE_NAMES: [&str; 6] = ["pn", "001N", "lemmas", "compare", "subdivision", "hecke"];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::is_prime;

    #[test]
    fn battery_constants_are_what_they_claim() {
        assert!(PRIMES.iter().all(|&p| is_prime(p)));
        assert!(COMPOSITES_N2.iter().all(|&n| !is_prime(n) && n > 1));
        assert!(COMPOSITES_N3.iter().all(|&n| !is_prime(n) && n > 1));
    }

    #[test]
    fn small_pn_battery_passes() {
        let opts = SuiteOptions {
            pmax: 5,
            ..SuiteOptions::default()
        };
        let report = suite_pn(&opts).unwrap();
        assert!(report.passed(), "failures: {report:?}");
        // p ∈ {2,3,5} and N = 4 only.
        assert_eq!(report.checks.len(), 4);
    }

    #[test]
    fn unknown_suite_is_rejected() {
        assert!(run_suite("nope", &SuiteOptions::default()).is_err());
    }

    #[test]
    fn dispatcher_reaches_every_suite() {
        // Tiny bounds keep this a smoke test of the wiring.
        let opts = SuiteOptions {
            pmax: 3,
            nmax: 2,
            group_order_max: 3,
            samples: 2,
            seed: 7,
        };
        for name in ["pn", "001N", "lemmas", "compare"] {
            let report = run_suite(name, &opts).unwrap();
            assert!(!report.checks.is_empty(), "{name} produced no checks");
        }
    }
}
