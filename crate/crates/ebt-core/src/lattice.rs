//! Lattices, simplicial cones, subdivisions, and the evaluation of lattice
//! triples in the blow-up quotient.
//!
//! A [`Lattice`] is a full-rank sublattice of ℚⁿ given by a rational basis
//! (integer matrix over a common positive denominator). All cone data is
//! stored in coordinates with respect to the lattice basis, so most of the
//! geometry here is integer linear algebra: a [`Cone`] is smooth exactly
//! when the Smith form of its generator matrix has all invariant factors 1.
//!
//! The evaluation map sends a triple (lattice, χ, cone) to a formal symbol
//! sum: a smooth cone contributes the symbol read off from a basis
//! extension, and a general simplicial cone is first refined into smooth
//! ones, summing over the faces that meet its interior with signs given by
//! codimension. Star subdivision of a basic cone reproduces the blow-up
//! rewrite rule, which is what makes the evaluation descend to the
//! quotient group; [`verify_subdivision_relations`] exercises exactly that.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::XorShift64;
use crate::error::{Error, Result};
use crate::expr::SymbolExpression;
use crate::group::{Character, FinAbelianGroupSpec};
use crate::matrix::IntMatrix;
use crate::presented::{classes_equal, GroupElementClass};
use crate::relations::{presented_group, SymbolPresentation, Variant};
use crate::report::{Check, SuiteReport};
use crate::snf::{smith_normal_form, SmithForm};
use crate::symbol::{enumerate_symbols, Symbol};

/// A full-rank lattice in ℚⁿ: the column span of `basis / denominator`.
/// The standard lattice ℤⁿ has the identity basis and denominator 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    dim: usize,
    basis: IntMatrix,
    den: BigInt,
}

impl Lattice {
    pub fn standard(n: usize) -> Self {
        Lattice {
            dim: n,
            basis: IntMatrix::identity(n),
            den: BigInt::one(),
        }
    }

    /// Builds a lattice from an integer basis matrix and a positive common
    /// denominator; the pair is reduced by its overall content.
    pub fn new(basis: IntMatrix, den: BigInt) -> Result<Self> {
        if !basis.is_square() || basis.rows() == 0 {
            return Err(Error::InvalidParameter(
                "lattice basis must be square and nonempty".into(),
            ));
        }
        if !den.is_positive() {
            return Err(Error::InvalidParameter(
                "lattice denominator must be positive".into(),
            ));
        }
        if basis.det().is_zero() {
            return Err(Error::InvalidParameter(
                "lattice basis must be nonsingular".into(),
            ));
        }
        let mut basis = basis;
        let mut den = den;
        let g = basis.content().gcd(&den);
        if g > BigInt::one() {
            basis = basis.exact_div(&g);
            den = &den / &g;
        }
        Ok(Lattice {
            dim: basis.rows(),
            basis,
            den,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    /// Whether two lattices have the same column span, i.e. each basis is
    /// integrally expressible in the other.
    pub fn same_lattice(&self, other: &Lattice) -> bool {
        let integral = |from: &Lattice, to: &Lattice| {
            change_of_basis(from, to).is_some_and(|(m, q)| {
                (0..m.rows()).all(|i| (0..m.cols()).all(|j| m[(i, j)].is_multiple_of(&q)))
            })
        };
        self.dim == other.dim && integral(self, other) && integral(other, self)
    }
}

/// Numerator matrix and positive denominator of `to⁻¹ · from`, the change
/// of coordinates taking `from`-coordinates to `to`-coordinates, reduced
/// by its content.
pub(crate) fn change_of_basis(from: &Lattice, to: &Lattice) -> Option<(IntMatrix, BigInt)> {
    let n = from.dim;
    if to.dim != n {
        return None;
    }
    // Column j of B_to⁻¹ · B_from by Cramer, then the global d_to / d_from
    // rescaling folded into numerator and denominator.
    let mut numer = IntMatrix::zeros(n, n);
    let mut denom = BigInt::zero();
    for j in 0..n {
        let (nums, det) = to.basis.solve_cramer(&from.basis.column(j))?;
        if denom.is_zero() {
            denom = det;
        }
        for i in 0..n {
            numer[(i, j)] = &nums[i] * &to.den;
        }
    }
    denom *= &from.den;
    if denom.is_negative() {
        denom = -denom;
        for i in 0..n {
            for j in 0..n {
                let v = -&numer[(i, j)];
                numer[(i, j)] = v;
            }
        }
    }
    let g = numer.content().gcd(&denom);
    if g > BigInt::one() {
        numer = numer.exact_div(&g);
        denom /= g;
    }
    Some((numer, denom))
}

/// A simplicial cone: linearly independent primitive generator columns in
/// lattice coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cone {
    gens: IntMatrix,
}

impl Cone {
    /// Builds a cone from generator columns; each column is reduced to its
    /// primitive representative and the set must be linearly independent.
    pub fn new(gens: IntMatrix) -> Result<Self> {
        if gens.cols() == 0 || gens.rows() == 0 {
            return Err(Error::InvalidParameter(
                "a cone needs at least one generator".into(),
            ));
        }
        if gens.cols() > gens.rows() {
            return Err(Error::DependentGenerators);
        }
        let mut gens = gens;
        for j in 0..gens.cols() {
            let g = gens
                .column(j)
                .iter()
                .fold(BigInt::zero(), |acc, x| acc.gcd(x));
            if g.is_zero() {
                return Err(Error::DependentGenerators);
            }
            if g > BigInt::one() {
                for i in 0..gens.rows() {
                    let v = &gens[(i, j)] / &g;
                    gens[(i, j)] = v;
                }
            }
        }
        if crate::snf::rank(&gens) != gens.cols() {
            return Err(Error::DependentGenerators);
        }
        Ok(Cone { gens })
    }

    pub fn from_columns(n: usize, cols: &[Vec<BigInt>]) -> Result<Self> {
        Cone::new(IntMatrix::from_columns(n, cols))
    }

    /// The positive orthant spanned by the standard basis of ℤⁿ.
    pub fn orthant(n: usize) -> Self {
        Cone {
            gens: IntMatrix::identity(n),
        }
    }

    pub fn generators(&self) -> &IntMatrix {
        &self.gens
    }

    pub fn generator(&self, j: usize) -> Vec<BigInt> {
        self.gens.column(j)
    }

    /// Number of generators (the dimension of the cone).
    pub fn dim(&self) -> usize {
        self.gens.cols()
    }

    /// Ambient coordinate dimension.
    pub fn ambient_dim(&self) -> usize {
        self.gens.rows()
    }

    /// Smooth: the generators extend to a lattice basis, i.e. all
    /// invariant factors of the generator matrix are 1.
    pub fn is_smooth(&self) -> bool {
        crate::snf::invariant_factors(&self.gens)
            .iter()
            .all(|d| d.is_one())
    }

    /// Basic: smooth and full-dimensional.
    pub fn is_basic(&self) -> bool {
        self.dim() == self.ambient_dim() && self.is_smooth()
    }

    /// Canonical identity for deduplication: the sorted generator columns.
    fn key(&self) -> Vec<Vec<BigInt>> {
        let mut cols: Vec<Vec<BigInt>> =
            (0..self.gens.cols()).map(|j| self.gens.column(j)).collect();
        cols.sort();
        cols
    }
}

/// A lattice together with a character vector in lattice coordinates and a
/// simplicial cone.
#[derive(Clone, Debug)]
pub struct LatticeTriple {
    pub lattice: Lattice,
    pub chi: Vec<Character>,
    pub cone: Cone,
}

impl LatticeTriple {
    pub fn new(
        lattice: Lattice,
        chi: Vec<Character>,
        cone: Cone,
        group: &FinAbelianGroupSpec,
    ) -> Result<Self> {
        if chi.len() != lattice.dim() || cone.ambient_dim() != lattice.dim() {
            return Err(Error::InvalidParameter(
                "character vector, cone and lattice dimensions must agree".into(),
            ));
        }
        if !group.is_faithful(&chi) {
            return Err(Error::UnfaithfulSymbol(format!(
                "character vector ({}) does not span the dual group",
                chi.iter()
                    .map(|c| c.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            )));
        }
        Ok(LatticeTriple { lattice, chi, cone })
    }

    /// The triple (ℤⁿ, χ given by the symbol entries, positive orthant).
    pub fn standard_for_symbol(symbol: &Symbol) -> Self {
        let n = symbol.len();
        LatticeTriple {
            lattice: Lattice::standard(n),
            chi: symbol.entries().to_vec(),
            cone: Cone::orthant(n),
        }
    }
}

/// Exact coordinate geometry of a cone, derived from the Smith form of its
/// generator matrix: `u · gens` has an invertible top block `w` over the
/// saturated span and zero rows below it, and the first `dim` columns of
/// `u⁻¹` form a basis of the saturation.
struct SaturationFrame {
    s: usize,
    u: IntMatrix,
    u_inv: IntMatrix,
    w: IntMatrix,
}

impl SaturationFrame {
    fn of(cone: &Cone) -> Self {
        let snf = smith_normal_form(cone.generators());
        let s = cone.dim();
        let ug = snf.u.mul(cone.generators());
        let w = ug.submatrix(0, s, 0, s);
        debug_assert!(!w.det().is_zero(), "cone generators are independent");
        SaturationFrame {
            s,
            u: snf.u,
            u_inv: snf.u_inv,
            w,
        }
    }

    /// Rational coordinates `(numerators, positive denominator)` of `v`
    /// with respect to the cone generators, or `None` when `v` is outside
    /// their span.
    fn coords(&self, v: &[BigInt]) -> Option<(Vec<BigInt>, BigInt)> {
        let y = self.u.mul_vec(v);
        if y[self.s..].iter().any(|c| !c.is_zero()) {
            return None;
        }
        let (mut nums, mut den) = self
            .w
            .solve_cramer(&y[..self.s])
            .expect("top block is invertible");
        if den.is_negative() {
            den = -den;
            for x in &mut nums {
                *x = -&*x;
            }
        }
        Some((nums, den))
    }

    /// Coordinate numerators of `v` when it lies inside the cone (all
    /// nonnegative), `None` otherwise.
    fn contains(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let (nums, _) = self.coords(v)?;
        if nums.iter().all(|x| !x.is_negative()) {
            Some(nums)
        } else {
            None
        }
    }

    /// Indices of generators appearing in `v`'s expansion.
    fn support(&self, v: &[BigInt]) -> Option<Vec<usize>> {
        let (nums, _) = self.coords(v)?;
        Some(
            nums.iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(i, _)| i)
                .collect(),
        )
    }

    /// Lifts span coordinates back to ambient coordinates through the
    /// saturation basis.
    fn lift(&self, span_coords: &[BigInt]) -> Vec<BigInt> {
        let n = self.u_inv.rows();
        (0..n)
            .map(|i| {
                (0..self.s)
                    .map(|k| &self.u_inv[(i, k)] * &span_coords[k])
                    .sum()
            })
            .collect()
    }
}

/// Reads the symbol of a triple whose cone is basic: χ is re-expressed in
/// the cone's own basis through the inverse unimodular change of
/// coordinates.
pub fn symbol_of_basic_triple(
    triple: &LatticeTriple,
    group: &FinAbelianGroupSpec,
) -> Result<Symbol> {
    if !triple.cone.is_basic() {
        return Err(Error::NotBasic);
    }
    let snf = smith_normal_form(triple.cone.generators());
    // For a unimodular generator matrix M, U·M·V = I gives M⁻¹ = V·U.
    let m_inv = snf.v.mul(&snf.u);
    Ok(Symbol::new(apply_integer_matrix(
        &m_inv,
        &triple.chi,
        group,
    )))
}

/// Applies an integer matrix to a character vector: `out_i = Σ_j m_ij a_j`.
fn apply_integer_matrix(
    m: &IntMatrix,
    chars: &[Character],
    group: &FinAbelianGroupSpec,
) -> Vec<Character> {
    (0..m.rows())
        .map(|i| {
            let mut acc = group.zero_character();
            for (j, a) in chars.iter().enumerate() {
                acc = acc.add(&a.scale_bigint(&m[(i, j)], group), group);
            }
            acc
        })
        .collect()
}

/// Membership of χ in the image of (integer span of the cone
/// generators)⊗A: an integer linear system solved modulo each invariant
/// factor of A.
pub fn chi_condition(triple: &LatticeTriple, group: &FinAbelianGroupSpec) -> bool {
    let snf = smith_normal_form(triple.cone.generators());
    chi_condition_from_snf(&snf, &triple.chi, group)
}

fn chi_condition_from_snf(snf: &SmithForm, chi: &[Character], group: &FinAbelianGroupSpec) -> bool {
    group.factors().iter().enumerate().all(|(t, &d)| {
        let rhs: Vec<BigInt> = chi.iter().map(|a| BigInt::from(a.coords()[t])).collect();
        snf.solvable_mod(&rhs, &BigInt::from(d))
    })
}

/// Membership of χ in the image of (saturation of the cone's span)⊗A:
/// after the unimodular change `u`, the coordinates of χ against the basis
/// vectors outside the span must vanish.
pub fn chi_in_saturated_span(triple: &LatticeTriple, group: &FinAbelianGroupSpec) -> bool {
    let snf = smith_normal_form(triple.cone.generators());
    let transformed = apply_integer_matrix(&snf.u, &triple.chi, group);
    transformed[triple.cone.dim()..].iter().all(|c| c.is_zero())
}

/// The symbol of a smooth cone of any dimension `s`: the first `s` entries
/// come from χ in an extended basis, the remaining coordinates of χ must
/// vanish (this is the span membership — the span of a smooth cone is
/// saturated), and the symbol is padded with `n − s` zero entries.
/// Returns `None` when the membership fails.
pub(crate) fn smooth_cone_symbol(
    cone: &Cone,
    chi: &[Character],
    group: &FinAbelianGroupSpec,
) -> Option<Symbol> {
    debug_assert!(cone.is_smooth());
    let n = cone.ambient_dim();
    let s = cone.dim();
    let snf = smith_normal_form(cone.generators());
    let transformed = apply_integer_matrix(&snf.u, chi, group);
    if transformed[s..].iter().any(|c| !c.is_zero()) {
        return None;
    }
    // u · gens = [v⁻¹; 0] for a smooth cone, so coefficients on the cone's
    // own generators are recovered by applying v to the head.
    let mut entries = apply_integer_matrix(&snf.v, &transformed[..s], group);
    entries.extend(std::iter::repeat_n(group.zero_character(), n - s));
    Some(Symbol::new(entries))
}

/// Star subdivision of `cone` at the face given by generator indices
/// (`r ≥ 2`): the `2^r − 1` cones spanned by the face barycenter, any
/// proper subset of the face, and all non-face generators, each paired
/// with the sign `(−1)^{dim cone − dim piece}`.
pub fn star_subdivision(cone: &Cone, face: &[usize]) -> Result<Vec<(Cone, i64)>> {
    let s = cone.dim();
    let r = face.len();
    if r < 2 {
        return Err(Error::InvalidFace(
            "star subdivision needs a face of dimension at least 2".into(),
        ));
    }
    let mut seen = BTreeSet::new();
    for &i in face {
        if i >= s || !seen.insert(i) {
            return Err(Error::InvalidFace(format!(
                "face index {i} out of range or repeated"
            )));
        }
    }
    let n = cone.ambient_dim();
    let mut barycenter = vec![BigInt::zero(); n];
    for &i in face {
        for (row, b) in barycenter.iter_mut().enumerate() {
            *b += &cone.generators()[(row, i)];
        }
    }
    let outside: Vec<usize> = (0..s).filter(|i| !face.contains(i)).collect();
    let mut out = Vec::with_capacity((1usize << r) - 1);
    for mask in 0..(1u32 << r) - 1 {
        let mut cols = vec![barycenter.clone()];
        for (bit, &i) in face.iter().enumerate() {
            if mask & (1 << bit) != 0 {
                cols.push(cone.generator(i));
            }
        }
        for &j in &outside {
            cols.push(cone.generator(j));
        }
        let piece = Cone::from_columns(n, &cols)?;
        let sign = if (s - piece.dim()).is_multiple_of(2) { 1 } else { -1 };
        out.push((piece, sign));
    }
    Ok(out)
}

/// How to refine a simplicial cone into smooth pieces.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubdivisionStrategy {
    /// Minimal continued-fraction subdivision in dimension 2; iterated
    /// stellar refinement at extremal box points in higher dimension.
    Minimal,
    /// The minimal subdivision with its first piece further subdivided at
    /// its barycenter — a genuinely different smooth subdivision, used to
    /// check that evaluation does not depend on the choice.
    Refined,
}

/// Subdivides a simplicial cone into smooth cones of the same dimension
/// forming a fan with the same support.
pub fn subdivide_smooth(cone: &Cone) -> Result<Vec<Cone>> {
    subdivide_smooth_with(cone, SubdivisionStrategy::Minimal)
}

pub fn subdivide_smooth_with(cone: &Cone, strategy: SubdivisionStrategy) -> Result<Vec<Cone>> {
    let mut pieces = if cone.is_smooth() {
        vec![cone.clone()]
    } else if cone.dim() == 2 {
        hirzebruch_jung(cone)?
    } else {
        stellar_refine(vec![cone.clone()])?
    };
    if strategy == SubdivisionStrategy::Refined {
        let first = pieces.remove(0);
        let mut refined = barycentric_split(&first)?;
        refined.extend(pieces);
        pieces = refined;
    }
    Ok(pieces)
}

/// Replaces a smooth cone by the full-dimensional pieces of the star
/// subdivision at its own barycenter (the cone itself if it is a ray).
fn barycentric_split(cone: &Cone) -> Result<Vec<Cone>> {
    let n = cone.ambient_dim();
    let t = cone.dim();
    if t == 1 {
        return Ok(vec![cone.clone()]);
    }
    let mut barycenter = vec![BigInt::zero(); n];
    for j in 0..t {
        for (row, b) in barycenter.iter_mut().enumerate() {
            *b += &cone.generators()[(row, j)];
        }
    }
    (0..t)
        .map(|replaced| {
            let cols: Vec<Vec<BigInt>> = (0..t)
                .map(|j| {
                    if j == replaced {
                        barycenter.clone()
                    } else {
                        cone.generator(j)
                    }
                })
                .collect();
            Cone::from_columns(n, &cols)
        })
        .collect()
}

fn det2(a: &[BigInt], b: &[BigInt]) -> BigInt {
    &a[0] * &b[1] - &a[1] * &b[0]
}

/// Minimal smooth subdivision of a two-dimensional cone by the classical
/// continued-fraction construction, carried out in coordinates on the
/// saturated span so the cone may sit inside any ℤⁿ.
fn hirzebruch_jung(cone: &Cone) -> Result<Vec<Cone>> {
    let frame = SaturationFrame::of(cone);
    let n = cone.ambient_dim();
    let mut planar: Vec<(Vec<BigInt>, Vec<BigInt>)> = Vec::new();
    // Generator order within a cone is immaterial, so orient the pair
    // positively once; every inserted ray keeps the orientation, which the
    // reduction step below assumes.
    let (mut cur, target) = {
        let a = frame.w.column(0);
        let b = frame.w.column(1);
        if det2(&a, &b).is_negative() {
            (b, a)
        } else {
            (a, b)
        }
    };
    loop {
        if det2(&cur, &target).abs().is_one() {
            planar.push((cur, target));
            break;
        }
        // A unimodular companion to `cur`: from x·c₀ + y·c₁ = 1 the vector
        // (−y, x) closes `cur` to a positively oriented planar basis.
        let ext = cur[0].extended_gcd(&cur[1]);
        debug_assert!(ext.gcd.is_one(), "cone generators are primitive");
        let mut f2 = vec![-ext.y.clone(), ext.x.clone()];
        let beta = det2(&cur, &target);
        debug_assert!(beta.is_positive(), "orientation is preserved");
        let alpha = det2(&target, &f2);
        // Shift f₂ by a multiple of `cur` so that 0 ≤ α < β; inserting
        // w = cur + f₂ then splits off one smooth piece and leaves a cone
        // of index β − α < β.
        let alpha_red = alpha.mod_floor(&beta);
        let q = (&alpha - &alpha_red) / &beta;
        for i in 0..2 {
            let shifted = &f2[i] + &q * &cur[i];
            f2[i] = shifted;
        }
        let w = vec![&cur[0] + &f2[0], &cur[1] + &f2[1]];
        planar.push((cur.clone(), w.clone()));
        cur = w;
    }
    planar
        .into_iter()
        .map(|(a, b)| Cone::from_columns(n, &[frame.lift(&a), frame.lift(&b)]))
        .collect()
}

/// Nonzero lattice points of the half-open fundamental box of a cone,
/// returned as `(coordinate numerators over the index, point in span
/// coordinates)`.
fn box_points(frame: &SaturationFrame) -> Vec<(Vec<BigInt>, Vec<BigInt>)> {
    let t = frame.s;
    let w_snf = smith_normal_form(&frame.w);
    let den = frame.w.det().abs();
    let mut out = Vec::new();
    let mut y = vec![BigInt::zero(); t];
    'outer: loop {
        // Class representative x = u⁻¹ · y of ℤᵗ modulo the generator
        // span.
        let x = w_snf.u_inv.mul_vec(&y);
        // Reduce into the box: coordinate numerators modulo the positive
        // denominator.
        let (mut nums, mut raw_den) =
            frame.w.solve_cramer(&x).expect("top block is invertible");
        if raw_den.is_negative() {
            raw_den = -raw_den;
            for v in &mut nums {
                *v = -&*v;
            }
        }
        debug_assert_eq!(raw_den, den);
        for v in &mut nums {
            *v = v.mod_floor(&den);
        }
        if nums.iter().any(|c| !c.is_zero()) {
            let scaled = frame.w.mul_vec(&nums);
            let point: Vec<BigInt> = scaled
                .iter()
                .map(|c| {
                    let (q, r) = c.div_rem(&den);
                    debug_assert!(r.is_zero(), "box points are lattice points");
                    q
                })
                .collect();
            out.push((nums, point));
        }
        // Odometer over the invariant-factor box.
        let mut i = t;
        loop {
            if i == 0 {
                break 'outer;
            }
            i -= 1;
            y[i] += 1u32;
            if y[i] < w_snf.diag[i] {
                break;
            }
            y[i] = BigInt::zero();
        }
    }
    out
}

/// Iterated stellar refinement of a fan of same-dimensional cones until
/// all are smooth. Each round picks, in the first non-smooth cone, the box
/// point with least coordinate sum (ties broken lexicographically) and
/// subdivides every fan cone containing it, so the complex stays a fan.
fn stellar_refine(mut fan: Vec<Cone>) -> Result<Vec<Cone>> {
    let mut rounds = 0usize;
    loop {
        let Some(bad) = fan.iter().position(|c| !c.is_smooth()) else {
            return Ok(fan);
        };
        rounds += 1;
        if rounds > 10_000 {
            return Err(Error::Internal(
                "stellar refinement failed to terminate".into(),
            ));
        }
        let frame = SaturationFrame::of(&fan[bad]);
        let candidates = box_points(&frame);
        debug_assert!(!candidates.is_empty(), "non-smooth cones have box points");
        let (_, point_span) = candidates
            .into_iter()
            .min_by(|(a, _), (b, _)| {
                let sum_a: BigInt = a.iter().sum();
                let sum_b: BigInt = b.iter().sum();
                sum_a.cmp(&sum_b).then_with(|| a.cmp(b))
            })
            .expect("candidate list is nonempty");
        let point = frame.lift(&point_span);
        let n = fan[bad].ambient_dim();
        let mut next = Vec::with_capacity(fan.len() + 2);
        for cone in &fan {
            match SaturationFrame::of(cone).contains(&point) {
                None => next.push(cone.clone()),
                Some(lambda) => {
                    for (j, coeff) in lambda.iter().enumerate() {
                        if coeff.is_zero() {
                            continue;
                        }
                        let cols: Vec<Vec<BigInt>> = (0..cone.dim())
                            .map(|k| {
                                if k == j {
                                    point.clone()
                                } else {
                                    cone.generator(k)
                                }
                            })
                            .collect();
                        next.push(Cone::from_columns(n, &cols)?);
                    }
                }
            }
        }
        fan = next;
    }
}

/// All faces (of every dimension ≥ 1) of the given cones, deduplicated by
/// generator set.
fn enumerate_faces(cones: &[Cone]) -> Vec<Cone> {
    let mut seen: BTreeMap<Vec<Vec<BigInt>>, Cone> = BTreeMap::new();
    for cone in cones {
        let t = cone.dim();
        let n = cone.ambient_dim();
        for mask in 1u32..(1 << t) {
            let cols: Vec<Vec<BigInt>> = (0..t)
                .filter(|j| mask & (1 << j) != 0)
                .map(|j| cone.generator(j))
                .collect();
            let face = Cone::from_columns(n, &cols).expect("subsets of independent sets");
            seen.entry(face.key()).or_insert(face);
        }
    }
    seen.into_values().collect()
}

/// Evaluates a triple as a formal symbol sum, using the minimal smooth
/// subdivision.
pub fn psi_tilde_expr(
    triple: &LatticeTriple,
    group: &FinAbelianGroupSpec,
) -> Result<SymbolExpression> {
    psi_tilde_expr_with(triple, group, SubdivisionStrategy::Minimal)
}

/// Evaluates a triple as a formal symbol sum with an explicit subdivision
/// strategy. Different strategies may give different formal sums, but
/// their reductions in the quotient group agree.
pub fn psi_tilde_expr_with(
    triple: &LatticeTriple,
    group: &FinAbelianGroupSpec,
    strategy: SubdivisionStrategy,
) -> Result<SymbolExpression> {
    let n = triple.lattice.dim();
    if triple.chi.len() != n || triple.cone.ambient_dim() != n {
        return Err(Error::InvalidParameter(
            "triple dimensions are inconsistent".into(),
        ));
    }
    if !group.is_faithful(&triple.chi) {
        return Err(Error::UnfaithfulSymbol(
            "the character vector of the triple does not span the dual group".into(),
        ));
    }
    // The evaluation is defined when χ lives on the saturated span of the
    // cone.
    if !chi_in_saturated_span(triple, group) {
        return Err(Error::ChiCondition);
    }
    if triple.cone.is_smooth() && strategy == SubdivisionStrategy::Minimal {
        let symbol = smooth_cone_symbol(&triple.cone, &triple.chi, group)
            .expect("saturated-span membership was checked above");
        return Ok(SymbolExpression::from_symbol(symbol));
    }
    let s = triple.cone.dim();
    let pieces = subdivide_smooth_with(&triple.cone, strategy)?;
    let top_frame = SaturationFrame::of(&triple.cone);
    let mut expr = SymbolExpression::zero();
    for face in enumerate_faces(&pieces) {
        // Keep only faces meeting the relative interior of the original
        // cone: the union of the generator supports must be the full index
        // set. Boundary faces are shared with neighbouring cones of an
        // ambient fan and must not be double-counted.
        let mut support = vec![false; s];
        let mut inside = true;
        for j in 0..face.dim() {
            match top_frame.support(&face.generator(j)) {
                Some(idx) => idx.into_iter().for_each(|i| support[i] = true),
                None => {
                    inside = false;
                    break;
                }
            }
        }
        if !inside || support.iter().any(|b| !b) {
            continue;
        }
        // Each face contributes only when χ lives on its span.
        let Some(symbol) = smooth_cone_symbol(&face, &triple.chi, group) else {
            continue;
        };
        let sign = if (s - face.dim()).is_multiple_of(2) { 1 } else { -1 };
        expr.add_term(symbol, BigInt::from(sign));
    }
    Ok(expr)
}

/// Evaluates a triple to an element class of a blow-up style presentation
/// (variant `B` or `B-`).
pub fn psi_tilde(
    triple: &LatticeTriple,
    presentation: &SymbolPresentation,
    group: &FinAbelianGroupSpec,
) -> Result<GroupElementClass> {
    if !matches!(presentation.variant(), Variant::B | Variant::Bminus) {
        return Err(Error::InvalidParameter(
            "triples evaluate in the blow-up quotients (variant B or B-)".into(),
        ));
    }
    let expr = psi_tilde_expr(triple, group)?;
    presentation.class_of(&expr)
}

/// A random unimodular matrix as a short product of elementary operations,
/// reproducible from the generator seed.
pub fn random_unimodular(n: usize, rng: &mut XorShift64) -> IntMatrix {
    let mut m = IntMatrix::identity(n);
    if n < 2 {
        return m;
    }
    for _ in 0..(3 * n) {
        let i = rng.below(n as u64) as usize;
        let mut j = rng.below(n as u64) as usize;
        if i == j {
            j = (j + 1) % n;
        }
        if rng.below(4) == 0 {
            m.swap_rows(i, j);
        } else {
            let mut q = rng.signed(2);
            if q == 0 {
                q = 1;
            }
            m.row_addmul(i, j, &BigInt::from(q));
        }
    }
    m
}

/// Checks the subdivision machinery against a presented group: round trips
/// of symbols through standard triples, star-subdivision identities on
/// random basic cones (all dimension-2 faces, plus the full face in
/// dimension ≥ 3), and agreement of the two subdivision strategies on
/// non-smooth cones.
pub fn verify_subdivision_relations(
    group: &FinAbelianGroupSpec,
    n: usize,
    samples: usize,
    seed: u64,
) -> Result<SuiteReport> {
    let presentation = presented_group(group, n, Variant::B)?;
    let mut report = SuiteReport::new(format!(
        "subdivision over {} with {n} entries",
        group.canonical_string()
    ));
    let symbols = enumerate_symbols(group, n)?;

    // Round trip: the standard triple of each symbol evaluates to the
    // symbol's own class.
    {
        let mut witnesses = Vec::new();
        for symbol in &symbols {
            let triple = LatticeTriple::standard_for_symbol(symbol);
            let class = psi_tilde(&triple, &presentation, group)?;
            let direct = presentation.class_of_symbol(symbol)?;
            if !classes_equal(&class, &direct)? {
                witnesses.push(symbol.to_string());
            }
        }
        let detail = if witnesses.is_empty() {
            format!("{} symbols returned unchanged", symbols.len())
        } else {
            format!("failed at {}", witnesses.join(", "))
        };
        report.push(Check::from_result(
            "round_trip_identity",
            witnesses.is_empty(),
            detail,
        ));
    }

    // Star-subdivision identities on random basic cones.
    let mut rng = XorShift64::new(seed);
    let face_sets: Vec<Vec<usize>> = {
        let mut sets = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                sets.push(vec![i, j]);
            }
        }
        if n >= 3 {
            sets.push((0..n).collect());
        }
        sets
    };
    {
        let mut witnesses = Vec::new();
        let mut instances = 0usize;
        for _ in 0..samples {
            let cone = Cone::new(random_unimodular(n, &mut rng))?;
            let symbol = &symbols[rng.below(symbols.len() as u64) as usize];
            let triple = LatticeTriple {
                lattice: Lattice::standard(n),
                chi: symbol.entries().to_vec(),
                cone: cone.clone(),
            };
            let total = psi_tilde(&triple, &presentation, group)?;
            for face in &face_sets {
                instances += 1;
                let mut rhs = SymbolExpression::zero();
                for (piece, sign) in star_subdivision(&cone, face)? {
                    let piece_triple = LatticeTriple {
                        lattice: triple.lattice.clone(),
                        chi: triple.chi.clone(),
                        cone: piece,
                    };
                    // Pieces enter the identity only when χ lives on
                    // their integer span.
                    if !chi_condition(&piece_triple, group) {
                        continue;
                    }
                    let piece_expr = psi_tilde_expr(&piece_triple, group)?;
                    rhs = rhs.add(&piece_expr.scale(&BigInt::from(sign)));
                }
                let rhs_class = presentation.class_of(&rhs)?;
                if !classes_equal(&total, &rhs_class)? {
                    witnesses.push(format!("face {face:?} of cone {:?}", cone.generators()));
                }
            }
        }
        let detail = if witnesses.is_empty() {
            format!("{instances} subdivision identities hold")
        } else {
            format!("failed at {}", witnesses.join("; "))
        };
        report.push(Check::from_result(
            "star_subdivision_identity",
            witnesses.is_empty(),
            detail,
        ));
    }

    // Strategy independence on non-smooth planar cones.
    if n >= 2 {
        let mut witnesses = Vec::new();
        let mut cases = 0usize;
        for _ in 0..samples {
            let symbol = &symbols[rng.below(symbols.len() as u64) as usize];
            // A non-smooth planar cone embedded in the first two
            // coordinates: ⟨(1,0,…), (k,m,0,…)⟩ with m ≥ 2.
            let k = 1 + rng.below(3) as i64;
            let m = 2 + rng.below(3) as i64;
            let mut c0 = vec![BigInt::zero(); n];
            c0[0] = BigInt::one();
            let mut c1 = vec![BigInt::zero(); n];
            c1[0] = BigInt::from(k);
            c1[1] = BigInt::from(m);
            let cone = match Cone::from_columns(n, &[c0, c1]) {
                Ok(c) if !c.is_smooth() => c,
                _ => continue,
            };
            let triple = LatticeTriple {
                lattice: Lattice::standard(n),
                chi: symbol.entries().to_vec(),
                cone,
            };
            if !chi_in_saturated_span(&triple, group) {
                continue;
            }
            cases += 1;
            let minimal = psi_tilde_expr_with(&triple, group, SubdivisionStrategy::Minimal)?;
            let refined = psi_tilde_expr_with(&triple, group, SubdivisionStrategy::Refined)?;
            let diff = minimal.sub(&refined);
            if !presentation.class_of(&diff)?.is_zero() {
                witnesses.push(format!("cone {:?}", triple.cone.generators()));
            }
        }
        let detail = if witnesses.is_empty() {
            format!("{cases} non-smooth cones agree across strategies")
        } else {
            format!("failed at {}", witnesses.join("; "))
        };
        report.push(Check::from_result(
            "subdivision_independence",
            witnesses.is_empty(),
            detail,
        ));
    }

    Ok(report)
}
