//! Relation matrices and presentations of the birational type groups.
//!
//! Starting from the free abelian group on faithful symbols, four quotients
//! are presented: `B` (blow-up relations, with the degenerate equal-entry
//! case collapsing to a single term), `M` (the unconditional two-term
//! rewrite), and their antisymmetrised versions `B-`/`M-` which additionally
//! identify a symbol with minus its entry-negated partner.
//!
//! The comparison map μ is diagonal on the symbol basis: coefficient 1 on
//! symbols with no zero entry, 2 with exactly one zero entry, 0 otherwise.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::is_prime;
use crate::error::{Error, Result};
use crate::expr::SymbolExpression;
use crate::group::{Character, FinAbelianGroupSpec};
use crate::matrix::IntMatrix;
use crate::presented::{classes_equal, GroupElementClass, PresentedAbelianGroup};
use crate::report::{Check, SuiteReport};
use crate::smith_normal_form;
use crate::symbol::{enumerate_symbols, Symbol};

/// Which quotient of the free symbol group to present.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    B,
    M,
    Bminus,
    Mminus,
}

impl Variant {
    /// Whether the equal-entry rewrite collapses to one term (`B`-style)
    /// rather than merging to coefficient two (`M`-style).
    fn blowup_degenerate_case(self) -> bool {
        matches!(self, Variant::B | Variant::Bminus)
    }

    /// Whether the entry-negation relations are imposed.
    fn antisymmetric(self) -> bool {
        matches!(self, Variant::Bminus | Variant::Mminus)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Variant::B => "B",
            Variant::M => "M",
            Variant::Bminus => "B-",
            Variant::Mminus => "M-",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Parses `B`, `M`, `B-`, `M-` (case-insensitive).
pub fn parse_variant(s: &str) -> Result<Variant> {
    match s.trim().to_ascii_uppercase().as_str() {
        "B" => Ok(Variant::B),
        "M" => Ok(Variant::M),
        "B-" => Ok(Variant::Bminus),
        "M-" => Ok(Variant::Mminus),
        other => Err(Error::InvalidParameter(format!(
            "unknown variant `{other}`; expected B, M, B- or M-"
        ))),
    }
}

/// A relation matrix in sparse column form over a fixed symbol basis.
#[derive(Clone, Debug)]
pub struct RelationSet {
    symbols: Vec<Symbol>,
    index: BTreeMap<Symbol, usize>,
    columns: Vec<Vec<(usize, BigInt)>>,
}

impl RelationSet {
    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn num_generators(&self) -> usize {
        self.symbols.len()
    }

    pub fn num_relations(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[Vec<(usize, BigInt)>] {
        &self.columns
    }

    pub fn index_of(&self, symbol: &Symbol) -> Option<usize> {
        self.index.get(symbol).copied()
    }

    /// One relation column as a dense vector over the symbol basis.
    pub fn column_dense(&self, k: usize) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.symbols.len()];
        for (i, c) in &self.columns[k] {
            v[*i] = c.clone();
        }
        v
    }

    pub fn to_dense(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.symbols.len(), self.columns.len());
        for (k, col) in self.columns.iter().enumerate() {
            for (i, c) in col {
                m[(*i, k)] = c.clone();
            }
        }
        m
    }
}

struct ColumnCollector {
    seen: BTreeSet<Vec<(usize, BigInt)>>,
    columns: Vec<Vec<(usize, BigInt)>>,
}

impl ColumnCollector {
    fn new() -> Self {
        ColumnCollector {
            seen: BTreeSet::new(),
            columns: Vec::new(),
        }
    }

    /// Keeps nonzero, previously unseen columns, in first-encounter order.
    fn push(&mut self, acc: BTreeMap<usize, BigInt>) {
        let col: Vec<(usize, BigInt)> =
            acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        if !col.is_empty() && self.seen.insert(col.clone()) {
            self.columns.push(col);
        }
    }
}

fn add_coeff(acc: &mut BTreeMap<usize, BigInt>, idx: usize, delta: i64) {
    *acc.entry(idx).or_insert_with(BigInt::zero) += BigInt::from(delta);
}

/// Builds the relation columns for the given variant over the faithful
/// symbols of length `n`. One column per rewrite instance (unordered entry
/// pair) plus, for the antisymmetric variants, one per symbol and entry
/// index; exact duplicate columns are dropped.
pub fn build_relations(
    group: &FinAbelianGroupSpec,
    n: usize,
    variant: Variant,
) -> Result<RelationSet> {
    if variant.antisymmetric() && group.is_trivial() {
        return Err(Error::TrivialGroupVariant(variant.to_string()));
    }
    let symbols = enumerate_symbols(group, n)?;
    let index: BTreeMap<Symbol, usize> = symbols
        .iter()
        .enumerate()
        .map(|(i, s)| (s.clone(), i))
        .collect();
    let lookup = |s: &Symbol| -> usize {
        *index
            .get(s)
            .expect("rewrite targets stay faithful, so they are enumerated")
    };
    let mut collector = ColumnCollector::new();
    let zero = group.zero_character();

    for (si, s) in symbols.iter().enumerate() {
        let entries = s.entries();
        for i in 0..n {
            for j in (i + 1)..n {
                let a = &entries[i];
                let b = &entries[j];
                let rest: Vec<Character> = entries
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| *k != i && *k != j)
                    .map(|(_, c)| c.clone())
                    .collect();
                let mut acc = BTreeMap::new();
                add_coeff(&mut acc, si, 1);
                if variant.blowup_degenerate_case() && a == b {
                    let mut e = rest.clone();
                    e.push(zero.clone());
                    e.push(a.clone());
                    add_coeff(&mut acc, lookup(&Symbol::new(e)), -1);
                } else {
                    let mut e1 = rest.clone();
                    e1.push(a.clone());
                    e1.push(b.sub(a, group));
                    add_coeff(&mut acc, lookup(&Symbol::new(e1)), -1);
                    let mut e2 = rest;
                    e2.push(a.sub(b, group));
                    e2.push(b.clone());
                    add_coeff(&mut acc, lookup(&Symbol::new(e2)), -1);
                }
                collector.push(acc);
            }
        }
    }

    if variant.antisymmetric() {
        for (si, s) in symbols.iter().enumerate() {
            for i in 0..n {
                let neg = s.negate_entry(i, group);
                let mut acc = BTreeMap::new();
                add_coeff(&mut acc, si, 1);
                add_coeff(&mut acc, lookup(&neg), 1);
                collector.push(acc);
            }
        }
    }

    Ok(RelationSet {
        symbols,
        index,
        columns: collector.columns,
    })
}

/// A presented quotient of the free symbol group, with its symbol basis.
#[derive(Debug)]
pub struct SymbolPresentation {
    group: FinAbelianGroupSpec,
    n: usize,
    variant: Variant,
    relations: RelationSet,
    presented: Arc<PresentedAbelianGroup>,
}

/// Presents the chosen quotient for `(group, n)` and reduces it.
pub fn presented_group(
    group: &FinAbelianGroupSpec,
    n: usize,
    variant: Variant,
) -> Result<SymbolPresentation> {
    let relations = build_relations(group, n, variant)?;
    let labels = relations.symbols().iter().map(|s| s.to_string()).collect();
    let presented = Arc::new(PresentedAbelianGroup::new(labels, relations.to_dense()));
    Ok(SymbolPresentation {
        group: group.clone(),
        n,
        variant,
        relations,
        presented,
    })
}

impl SymbolPresentation {
    pub fn group_spec(&self) -> &FinAbelianGroupSpec {
        &self.group
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn symbols(&self) -> &[Symbol] {
        self.relations.symbols()
    }

    pub fn relations(&self) -> &RelationSet {
        &self.relations
    }

    pub fn presented(&self) -> &Arc<PresentedAbelianGroup> {
        &self.presented
    }

    pub fn rank(&self) -> usize {
        self.presented.rank()
    }

    pub fn torsion(&self) -> &[BigInt] {
        self.presented.torsion()
    }

    /// The class of a single symbol.
    pub fn class_of_symbol(&self, symbol: &Symbol) -> Result<GroupElementClass> {
        let mut e = SymbolExpression::zero();
        e.add_term(symbol.clone(), BigInt::one());
        self.class_of(&e)
    }

    /// The class of a formal symbol combination. Symbols must be faithful
    /// and of the right length; the offending symbol is named otherwise.
    pub fn class_of(&self, expr: &SymbolExpression) -> Result<GroupElementClass> {
        let mut coords = vec![BigInt::zero(); self.relations.num_generators()];
        for (symbol, coeff) in expr.terms() {
            if symbol.len() != self.n {
                return Err(Error::InvalidParameter(format!(
                    "symbol {symbol} has {} entries, expected {}",
                    symbol.len(),
                    self.n
                )));
            }
            match self.relations.index_of(symbol) {
                Some(i) => coords[i] += coeff,
                None => return Err(Error::UnfaithfulSymbol(symbol.to_string())),
            }
        }
        Ok(self.presented.class(coords))
    }

    /// The class of `[a,0,…,0] + [−a,0,…,0]` for a unit `a` of a cyclic
    /// group.
    pub fn unit_delta_class(&self, a: u64) -> Result<GroupElementClass> {
        let modulus = match self.group.factors() {
            [m] => *m,
            _ => {
                return Err(Error::InvalidParameter(
                    "delta classes are defined over nontrivial cyclic groups".into(),
                ))
            }
        };
        if a.gcd(&modulus) != 1 {
            return Err(Error::InvalidParameter(format!(
                "{a} is not a unit modulo {modulus}"
            )));
        }
        let mut expr = SymbolExpression::zero();
        for value in [a as i64, -(a as i64)] {
            let mut entries = vec![self.group.zero_character(); self.n - 1];
            entries.push(self.group.character(&[value]));
            expr.add_term(Symbol::new(entries), BigInt::one());
        }
        self.class_of(&expr)
    }

    /// The distinguished torsion class `δ = [a,0,…] + [−a,0,…]` over a prime
    /// modulus; verifies that the choice of unit `a` does not matter.
    pub fn delta_class(&self) -> Result<GroupElementClass> {
        let modulus = match self.group.factors() {
            [m] if is_prime(*m) => *m,
            _ => {
                return Err(Error::InvalidParameter(
                    "the delta class requires a cyclic group of prime order".into(),
                ))
            }
        };
        let delta = self.unit_delta_class(1)?;
        for a in 2..modulus {
            let other = self.unit_delta_class(a)?;
            if !classes_equal(&delta, &other)? {
                return Err(Error::Internal(format!(
                    "delta class depends on the unit: a=1 vs a={a} differ \
                     (relation assembly inconsistent)"
                )));
            }
        }
        Ok(delta)
    }

    /// The class of the padded symbol `[0,0,g,0,…,0]` where `g` generates
    /// the last cyclic factor; requires arity ≥ 3. For non-cyclic groups the
    /// padded symbol is unfaithful and this errors.
    pub fn zero_zero_one_class(&self) -> Result<GroupElementClass> {
        if self.n < 3 {
            return Err(Error::InvalidParameter(
                "the doubly-degenerate class needs at least 3 entries".into(),
            ));
        }
        let k = self.group.factors().len();
        let mut gen_coords = vec![0i64; k];
        if k > 0 {
            gen_coords[k - 1] = 1;
        }
        let mut entries = vec![self.group.zero_character(); self.n - 1];
        entries.push(self.group.character(&gen_coords));
        self.class_of_symbol(&Symbol::new(entries))
    }

    /// The class `Σ_α β_α` attached to a list of fixed-point components,
    /// each given by its `n` tangent characters; every tuple must be
    /// faithful.
    pub fn class_from_fixed_point_data(
        &self,
        components: &[Vec<Character>],
    ) -> Result<GroupElementClass> {
        let mut expr = SymbolExpression::zero();
        for tuple in components {
            if tuple.len() != self.n {
                return Err(Error::InvalidParameter(format!(
                    "component has {} tangent characters, expected {}",
                    tuple.len(),
                    self.n
                )));
            }
            expr.add_term(Symbol::new(tuple.clone()), BigInt::one());
        }
        self.class_of(&expr)
    }
}

/// μ coefficient of one symbol: 1 with no zero entries, 2 with exactly one,
/// 0 otherwise.
pub fn mu_coefficient(symbol: &Symbol) -> i64 {
    match symbol.zero_count() {
        0 => 1,
        1 => 2,
        _ => 0,
    }
}

/// The matrix of μ on the symbol basis (diagonal; identical for the
/// antisymmetrised variants).
pub fn mu_matrix(group: &FinAbelianGroupSpec, n: usize) -> Result<IntMatrix> {
    let symbols = enumerate_symbols(group, n)?;
    let g = symbols.len();
    Ok(IntMatrix::from_fn(g, g, |i, j| {
        if i == j {
            BigInt::from(mu_coefficient(&symbols[i]))
        } else {
            BigInt::zero()
        }
    }))
}

fn mu_descends_for(
    group: &FinAbelianGroupSpec,
    n: usize,
    source: Variant,
    target: Variant,
) -> Result<bool> {
    let rel_b = build_relations(group, n, source)?;
    let rel_m = build_relations(group, n, target)?;
    let snf_m = smith_normal_form(&rel_m.to_dense());
    let mu: Vec<BigInt> = rel_b
        .symbols()
        .iter()
        .map(|s| BigInt::from(mu_coefficient(s)))
        .collect();
    for k in 0..rel_b.num_relations() {
        let mut v = rel_b.column_dense(k);
        for (i, entry) in v.iter_mut().enumerate() {
            *entry *= &mu[i];
        }
        if snf_m.solve(&v).is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether μ maps every `B`-relation into the integer span of the
/// `M`-relations, i.e. descends to a homomorphism of the quotients.
pub fn verify_mu_descends(group: &FinAbelianGroupSpec, n: usize) -> Result<bool> {
    mu_descends_for(group, n, Variant::B, Variant::M)
}

/// The antisymmetrised analogue of [`verify_mu_descends`].
pub fn verify_mu_descends_minus(group: &FinAbelianGroupSpec, n: usize) -> Result<bool> {
    mu_descends_for(group, n, Variant::Bminus, Variant::Mminus)
}

/// Rational rank comparison between the two quotients through μ.
#[derive(Clone, Debug, Serialize)]
pub struct MuRankReport {
    pub group: String,
    pub n: usize,
    pub antisymmetric: bool,
    pub num_symbols: usize,
    #[serde(rename = "rank_B")]
    pub rank_b: usize,
    #[serde(rename = "rank_M")]
    pub rank_m: usize,
    #[serde(rename = "mu_rank_over_Q")]
    pub mu_rank_over_q: usize,
    #[serde(rename = "iso_over_Q")]
    pub iso_over_q: bool,
}

/// Computes the free ranks of both quotients and the rank of the map μ
/// induces between them after tensoring with ℚ; `iso_over_Q` records whether
/// μ is then invertible. Set `antisymmetric` for the `B-`/`M-` pair.
pub fn rank_compare(
    group: &FinAbelianGroupSpec,
    n: usize,
    antisymmetric: bool,
) -> Result<MuRankReport> {
    let (source, target) = if antisymmetric {
        (Variant::Bminus, Variant::Mminus)
    } else {
        (Variant::B, Variant::M)
    };
    let rel_b = build_relations(group, n, source)?;
    let rel_m = build_relations(group, n, target)?;
    let g = rel_b.num_generators();
    let dense_b = rel_b.to_dense();
    let dense_m = rel_m.to_dense();
    let rank_rel_b = crate::snf::rank(&dense_b);
    let rank_rel_m = crate::snf::rank(&dense_m);
    let mu = mu_matrix(group, n)?;
    // rank of the induced image = rank [μ | R_M] − rank R_M.
    let combined = mu.hstack(&dense_m);
    let mu_rank_over_q = crate::snf::rank(&combined) - rank_rel_m;
    let rank_b = g - rank_rel_b;
    let rank_m = g - rank_rel_m;
    Ok(MuRankReport {
        group: group.canonical_string(),
        n,
        antisymmetric,
        num_symbols: g,
        rank_b,
        rank_m,
        mu_rank_over_q,
        iso_over_q: rank_b == rank_m && mu_rank_over_q == rank_b,
    })
}

/// Verifies the identity suite for pair symbols over a prime modulus: the
/// reflection sum, the four- and six-term expressions for δ and its
/// independence of choices, the triangle decomposition, the diagonal and
/// double-ratio sums, and the three-slope orbit sums including the
/// cube-root case when the modulus is 1 mod 3.
pub fn verify_lemma_suite(p: u64) -> Result<SuiteReport> {
    if !is_prime(p) {
        return Err(Error::InvalidParameter(format!(
            "the identity suite runs over prime moduli; {p} is not prime"
        )));
    }
    let group = FinAbelianGroupSpec::cyclic(p)?;
    let pres = presented_group(&group, 2, Variant::B)?;
    let sym = |x: i64, y: i64| Symbol::new(vec![group.character(&[x]), group.character(&[y])]);
    let term = |x: i64, y: i64| SymbolExpression::from_symbol(sym(x, y));
    let mut report = SuiteReport::new(format!("identities mod {p}"));
    let is_zero_class = |e: &SymbolExpression| -> Result<bool> {
        Ok(pres.class_of(e)?.is_zero())
    };
    let m = p as i64;
    let units: Vec<i64> = (1..m).collect();

    // Reflection sum: [a,b] + [a,-b] = [a,0] for all units a, b.
    {
        let mut witnesses = Vec::new();
        for &a in &units {
            for &b in &units {
                let diff = term(a, b).add(&term(a, -b)).sub(&term(a, 0));
                if !is_zero_class(&diff)? {
                    witnesses.push(format!("a={a}, b={b}"));
                }
            }
        }
        report.push(Check::from_result(
            "reflection_sum",
            witnesses.is_empty(),
            if witnesses.is_empty() {
                format!("[a,b]+[a,-b]=[a,0] for all {} unit pairs", units.len().pow(2))
            } else {
                format!("failed at {}", witnesses.join("; "))
            },
        ));
    }

    let delta = pres.unit_delta_class(1)?;

    // δ is independent of the defining unit.
    {
        let mut witnesses = Vec::new();
        for &a in &units {
            let other = pres.unit_delta_class(a as u64)?;
            if !classes_equal(&delta, &other)? {
                witnesses.push(format!("a={a}"));
            }
        }
        report.push(Check::from_result(
            "delta_unit_independence",
            witnesses.is_empty(),
            if witnesses.is_empty() {
                "[a,0]+[-a,0] equal for all units a".to_string()
            } else {
                format!("failed at {}", witnesses.join("; "))
            },
        ));
    }

    // Four-term expression: δ = [a,b]+[a,-b]+[-a,b]+[-a,-b] for units a, b.
    {
        let mut witnesses = Vec::new();
        let delta_expr = |a: i64| term(a, 0).add(&term(-a, 0));
        for &a in &units {
            for &b in &units {
                let four = term(a, b)
                    .add(&term(a, -b))
                    .add(&term(-a, b))
                    .add(&term(-a, -b));
                if !is_zero_class(&four.sub(&delta_expr(1)))? {
                    witnesses.push(format!("a={a}, b={b}"));
                }
            }
        }
        report.push(Check::from_result(
            "four_term_delta",
            witnesses.is_empty(),
            if witnesses.is_empty() {
                "four-term reflection sum equals delta for all unit pairs".to_string()
            } else {
                format!("failed at {}", witnesses.join("; "))
            },
        ));
    }

    // Triangle decomposition: [a,0] = [a,b]+[-b,a+b]+[-a-b,a] when a+b ≠ 0.
    {
        let mut witnesses = Vec::new();
        for &a in &units {
            for &b in &units {
                if (a + b) % m == 0 {
                    continue;
                }
                let rhs = term(a, b).add(&term(-b, a + b)).add(&term(-a - b, a));
                if !is_zero_class(&rhs.sub(&term(a, 0)))? {
                    witnesses.push(format!("a={a}, b={b}"));
                }
            }
        }
        report.push(Check::from_result(
            "triangle_decomposition",
            witnesses.is_empty(),
            if witnesses.is_empty() {
                "[a,0]=[a,b]+[-b,a+b]+[-a-b,a] whenever a+b is nonzero".to_string()
            } else {
                format!("failed at {}", witnesses.join("; "))
            },
        ));
    }

    // Six-term expression: δ = the triangle decomposition plus its negation.
    {
        let mut witnesses = Vec::new();
        let delta_expr = term(1, 0).add(&term(-1, 0));
        for &a in &units {
            for &b in &units {
                if (a + b) % m == 0 {
                    continue;
                }
                let six = term(a, b)
                    .add(&term(-b, a + b))
                    .add(&term(-a - b, a))
                    .add(&term(-a, -b))
                    .add(&term(b, -a - b))
                    .add(&term(a + b, -a));
                if !is_zero_class(&six.sub(&delta_expr))? {
                    witnesses.push(format!("a={a}, b={b}"));
                }
            }
        }
        report.push(Check::from_result(
            "six_term_delta",
            witnesses.is_empty(),
            if witnesses.is_empty() {
                "six-term expression equals delta whenever a+b is nonzero".to_string()
            } else {
                format!("failed at {}", witnesses.join("; "))
            },
        ));
    }

    // Diagonal sum: Σ_a [a,a] = ((p−1)/2)·δ over units a.
    {
        let mut sum = SymbolExpression::zero();
        for &a in &units {
            sum = sum.add(&term(a, a));
        }
        let scaled = term(1, 0)
            .add(&term(-1, 0))
            .scale(&BigInt::from((p - 1) / 2));
        let ok = is_zero_class(&sum.sub(&scaled))?;
        report.push(Check::from_result(
            "diagonal_sum",
            ok,
            format!("sum of [a,a] over units equals {}·delta", (p - 1) / 2),
        ));
    }

    // Double-ratio sum: Σ_a [a,−2a] = 0 over units a.
    {
        let mut sum = SymbolExpression::zero();
        for &a in &units {
            sum = sum.add(&term(a, -2 * a));
        }
        let ok = is_zero_class(&sum)?;
        report.push(Check::from_result(
            "double_ratio_sum",
            ok,
            "sum of [a,-2a] over units vanishes",
        ));
    }

    // Slope-orbit sums: for β a unit other than −1, with β' = −β⁻¹−1 and
    // β'' = −(β+1)⁻¹, the three slope sums combine to ((p−1)/2)·δ.
    {
        let inv = |x: i64| -> i64 {
            let xr = x.rem_euclid(m);
            (1..m).find(|y| (xr * y) % m == 1).expect("unit inverse")
        };
        let mut witnesses = Vec::new();
        let mut cube_witnesses = Vec::new();
        let mut cube_cases = 0usize;
        let scaled_half = term(1, 0)
            .add(&term(-1, 0))
            .scale(&BigInt::from((p - 1) / 2));
        for &beta in &units {
            if (beta + 1) % m == 0 {
                continue;
            }
            let beta_p = (-inv(beta) - 1).rem_euclid(m);
            let beta_pp = (-inv(beta + 1)).rem_euclid(m);
            let mut sum = SymbolExpression::zero();
            for &a in &units {
                sum = sum
                    .add(&term(a, beta * a))
                    .add(&term(a, beta_p * a))
                    .add(&term(a, beta_pp * a));
            }
            if !is_zero_class(&sum.sub(&scaled_half))? {
                witnesses.push(format!("beta={beta}"));
            }
            // Primitive cube root of unity: the three slopes coincide and a
            // sixth of the full sum already gives δ (p ≡ 1 mod 3 only).
            if p % 3 == 1 && beta != 1 && (beta * beta + beta + 1) % m == 0 {
                cube_cases += 1;
                let mut single = SymbolExpression::zero();
                for &a in &units {
                    single = single.add(&term(a, beta * a));
                }
                let scaled_sixth = term(1, 0)
                    .add(&term(-1, 0))
                    .scale(&BigInt::from((p - 1) / 6));
                if !is_zero_class(&single.sub(&scaled_sixth))? {
                    cube_witnesses.push(format!("beta={beta}"));
                }
            }
        }
        report.push(Check::from_result(
            "slope_orbit_sum",
            witnesses.is_empty(),
            if witnesses.is_empty() {
                "three-slope sums equal ((p-1)/2)·delta for all admissible beta".to_string()
            } else {
                format!("failed at {}", witnesses.join("; "))
            },
        ));
        if p % 3 == 1 {
            report.push(Check::from_result(
                "cube_root_slope_sum",
                cube_witnesses.is_empty() && cube_cases == 2,
                if cube_witnesses.is_empty() {
                    format!("{cube_cases} primitive cube roots, each summing to ((p-1)/6)·delta")
                } else {
                    format!("failed at {}", cube_witnesses.join("; "))
                },
            ));
        } else {
            report.push(Check::pass_with(
                "cube_root_slope_sum",
                "skipped: no primitive cube roots of unity for this modulus",
            ));
        }
    }

    Ok(report)
}
