//! Averaging operators over prime-index overlattices.
//!
//! For a prime ℓ not dividing the group order and a rank 1 ≤ r < n, the
//! operator sends the class of a triple to the sum of its transports into
//! all overlattices 𝐋̂ ⊃ 𝐋 with 𝐋̂/𝐋 ≅ (ℤ/ℓ)^r. Such overlattices
//! correspond to r-dimensional subspaces of 𝔽_ℓⁿ, enumerated here through
//! reduced row-echelon forms; their number is the Gaussian binomial
//! coefficient. Transport re-expresses the character vector and the cone
//! in coordinates of the larger lattice — an integral change of basis of
//! determinant ±ℓ^r, invertible modulo the group exponent, so spanning is
//! preserved.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{is_prime, mod_inverse};
use crate::error::{Error, Result};
use crate::expr::SymbolExpression;
use crate::group::{Character, FinAbelianGroupSpec};
use crate::lattice::{change_of_basis, psi_tilde_expr, Cone, Lattice, LatticeTriple};
use crate::matrix::IntMatrix;
use crate::presented::GroupElementClass;
use crate::relations::{presented_group, SymbolPresentation, Variant};
use crate::report::{Check, SuiteReport};
use crate::snf::smith_normal_form;
use crate::symbol::{enumerate_symbols, Symbol};

/// Parameters of an averaging operator: the prime ℓ, the overlattice rank
/// `r`, and an override for the built-in scale guard.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HeckeParams {
    pub ell: u64,
    pub r: usize,
    pub allow_large: bool,
}

impl HeckeParams {
    pub fn new(ell: u64, r: usize) -> Self {
        HeckeParams {
            ell,
            r,
            allow_large: false,
        }
    }

    pub fn with_override(ell: u64, r: usize) -> Self {
        HeckeParams {
            ell,
            r,
            allow_large: true,
        }
    }

    /// Checks ℓ prime and coprime to the group order, 1 ≤ r ≤ n−1, and
    /// the default scale guard n ≤ 3, ℓ ≤ 7.
    pub fn validate(&self, group: &FinAbelianGroupSpec, n: usize) -> Result<()> {
        if n < 2 {
            return Err(Error::InvalidParameter(
                "averaging operators need at least two symbol entries".into(),
            ));
        }
        if self.r == 0 || self.r >= n {
            return Err(Error::InvalidParameter(format!(
                "overlattice rank must satisfy 1 <= r <= {}, got {}",
                n - 1,
                self.r
            )));
        }
        if !is_prime(self.ell) {
            return Err(Error::InvalidParameter(format!(
                "ell = {} is not prime",
                self.ell
            )));
        }
        if group.order().is_multiple_of(self.ell) {
            return Err(Error::EllDividesOrder {
                ell: self.ell,
                order: group.order(),
            });
        }
        if !self.allow_large && (n > 3 || self.ell > 7) {
            return Err(Error::ScaleGuard);
        }
        Ok(())
    }
}

/// The Gaussian binomial coefficient: number of r-dimensional subspaces of
/// 𝔽_ℓⁿ.
pub fn gaussian_binomial(n: usize, r: usize, ell: u64) -> BigInt {
    let q = BigInt::from(ell);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 1..=r {
        num *= q.pow((n - r + i) as u32) - BigInt::one();
        den *= q.pow(i as u32) - BigInt::one();
    }
    num / den
}

/// All reduced row-echelon forms of full rank `r` over 𝔽_ℓ with `n`
/// columns, in a deterministic order (pivot columns lexicographic, then
/// free entries as an odometer). Entries are lifted to `0..ℓ`.
fn rref_matrices(ell: u64, r: usize, n: usize) -> Vec<Vec<Vec<u64>>> {
    let mut out = Vec::new();
    let mut pivots: Vec<usize> = (0..r).collect();
    loop {
        // Free coordinates: row i may hold arbitrary values in non-pivot
        // columns to the right of its pivot.
        let mut free: Vec<(usize, usize)> = Vec::new();
        for (i, &p) in pivots.iter().enumerate() {
            for c in (p + 1)..n {
                if !pivots.contains(&c) {
                    free.push((i, c));
                }
            }
        }
        let mut values = vec![0u64; free.len()];
        loop {
            let mut m = vec![vec![0u64; n]; r];
            for (i, &p) in pivots.iter().enumerate() {
                m[i][p] = 1;
            }
            for (k, &(i, c)) in free.iter().enumerate() {
                m[i][c] = values[k];
            }
            out.push(m);
            // Advance the odometer.
            let mut k = values.len();
            loop {
                if k == 0 {
                    break;
                }
                k -= 1;
                values[k] += 1;
                if values[k] < ell {
                    break;
                }
                values[k] = 0;
            }
            if values.iter().all(|&v| v == 0) {
                break;
            }
        }
        // Next pivot combination in lexicographic order.
        let mut i = r;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if pivots[i] < n - (r - i) {
                pivots[i] += 1;
                for j in (i + 1)..r {
                    pivots[j] = pivots[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// All overlattices 𝐋̂ ⊃ 𝐋 with 𝐋̂/𝐋 ≅ (ℤ/ℓ)^r, each constructed from an
/// r-dimensional subspace of (𝐋/ℓ𝐋) ≅ 𝔽_ℓⁿ.
pub fn enumerate_overlattices(lattice: &Lattice, ell: u64, r: usize) -> Result<Vec<Lattice>> {
    let n = lattice.dim();
    if r == 0 || r > n {
        return Err(Error::InvalidParameter(format!(
            "overlattice rank must satisfy 1 <= r <= {n}, got {r}"
        )));
    }
    if !is_prime(ell) {
        return Err(Error::InvalidParameter(format!("ell = {ell} is not prime")));
    }
    let ell_big = BigInt::from(ell);
    let mut out = Vec::new();
    for rows in rref_matrices(ell, r, n) {
        // Columns of the lift matrix are the subspace basis vectors.
        let lifts = IntMatrix::from_fn(n, r, |i, j| BigInt::from(rows[j][i]));
        let scaled_identity = IntMatrix::from_fn(n, n, |i, j| {
            if i == j {
                ell_big.clone()
            } else {
                BigInt::zero()
            }
        });
        // Column span of [ℓ·I | lifts] is ℓ·𝐋̂ in lattice coordinates; a
        // triangular basis comes out of the Smith form as u⁻¹ · diag(d).
        let snf = smith_normal_form(&scaled_identity.hstack(&lifts));
        let basis_in_coords =
            IntMatrix::from_fn(n, n, |i, j| &snf.u_inv[(i, j)] * &snf.diag[j]);
        let ambient = lattice.basis().mul(&basis_in_coords);
        out.push(Lattice::new(ambient, lattice.denominator() * &ell_big)?);
    }
    Ok(out)
}

/// Re-expresses a character vector in the coordinates of another lattice.
/// The vector lives in 𝐋⊗A, so its coefficients transform covariantly,
/// exactly like cone generators. The change of basis may be rational; its
/// denominator must be invertible modulo the group exponent, and the
/// result must still span the dual group.
pub fn transport_chi(
    chi: &[Character],
    from: &Lattice,
    to: &Lattice,
    group: &FinAbelianGroupSpec,
) -> Result<Vec<Character>> {
    let (numer, denom) = change_of_basis(from, to).ok_or_else(|| {
        Error::InvalidParameter("lattice dimensions disagree in transport".into())
    })?;
    let scale = if denom.is_one() {
        BigInt::one()
    } else {
        let inv = mod_inverse(&denom, group.exponent()).ok_or(Error::NonInvertibleDenominator {
            denom: denom.to_string(),
            modulus: group.exponent(),
        })?;
        BigInt::from(inv)
    };
    let transported: Vec<Character> = (0..chi.len())
        .map(|i| {
            let mut acc = group.zero_character();
            for (j, a) in chi.iter().enumerate() {
                acc = acc.add(&a.scale_bigint(&numer[(i, j)], group), group);
            }
            acc.scale_bigint(&scale, group)
        })
        .collect();
    if !group.is_faithful(&transported) {
        return Err(Error::UnfaithfulSymbol(
            "transported character vector no longer spans the dual group".into(),
        ));
    }
    Ok(transported)
}

/// Re-expresses a cone in the coordinates of another lattice. Generators
/// must land on lattice vectors; they are re-primitivised on construction.
pub fn transport_cone(cone: &Cone, from: &Lattice, to: &Lattice) -> Result<Cone> {
    let (numer, denom) = change_of_basis(from, to).ok_or_else(|| {
        Error::InvalidParameter("lattice dimensions disagree in transport".into())
    })?;
    let n = cone.ambient_dim();
    let mut cols = Vec::with_capacity(cone.dim());
    for j in 0..cone.dim() {
        let image = numer.mul_vec(&cone.generator(j));
        let mut col = Vec::with_capacity(n);
        for x in image {
            let (q, rem) = x.div_rem(&denom);
            if !rem.is_zero() {
                return Err(Error::InvalidParameter(
                    "cone generator is not a lattice vector after transport".into(),
                ));
            }
            col.push(q);
        }
        cols.push(col);
    }
    Cone::from_columns(n, &cols)
}

/// The image of a single symbol under the averaging operator, as a formal
/// symbol sum: the standard triple of the symbol is transported into every
/// overlattice of index ℓ^r and evaluated there.
pub fn hecke_image_of_symbol(
    params: &HeckeParams,
    symbol: &Symbol,
    group: &FinAbelianGroupSpec,
) -> Result<SymbolExpression> {
    params.validate(group, symbol.len())?;
    let n = symbol.len();
    let standard = Lattice::standard(n);
    let base = LatticeTriple::standard_for_symbol(symbol);
    let mut total = SymbolExpression::zero();
    for overlattice in enumerate_overlattices(&standard, params.ell, params.r)? {
        let chi = transport_chi(&base.chi, &standard, &overlattice, group)?;
        let cone = transport_cone(&base.cone, &standard, &overlattice)?;
        let triple = LatticeTriple {
            lattice: overlattice,
            chi,
            cone,
        };
        total = total.add(&psi_tilde_expr(&triple, group)?);
    }
    Ok(total)
}

/// The image of a formal symbol sum under the averaging operator (the
/// operator is additive).
pub fn hecke_image(
    params: &HeckeParams,
    expr: &SymbolExpression,
    group: &FinAbelianGroupSpec,
) -> Result<SymbolExpression> {
    let mut total = SymbolExpression::zero();
    for (symbol, coeff) in expr.terms() {
        let image = hecke_image_of_symbol(params, symbol, group)?;
        total = total.add(&image.scale(coeff));
    }
    Ok(total)
}

/// Applies the averaging operator and reduces in a blow-up quotient
/// (variant `B` or `B-`).
pub fn hecke_apply(
    params: &HeckeParams,
    expr: &SymbolExpression,
    presentation: &SymbolPresentation,
) -> Result<GroupElementClass> {
    if !matches!(presentation.variant(), Variant::B | Variant::Bminus) {
        return Err(Error::InvalidParameter(
            "averaging operators act on the blow-up quotients (variant B or B-)".into(),
        ));
    }
    let image = hecke_image(params, expr, presentation.group_spec())?;
    presentation.class_of(&image)
}

/// Well-definedness: the operator must annihilate every defining relation
/// column of the blow-up presentation.
pub fn verify_hecke_annihilates_relations(
    group: &FinAbelianGroupSpec,
    n: usize,
    ell: u64,
) -> Result<SuiteReport> {
    let params = HeckeParams::new(ell, 1);
    params.validate(group, n)?;
    let presentation = presented_group(group, n, Variant::B)?;
    let mut report = SuiteReport::new(format!(
        "averaging operator ell={ell} over {} with {n} entries",
        group.canonical_string()
    ));
    let symbols = presentation.symbols();
    let mut witnesses = Vec::new();
    let columns = presentation.relations().columns();
    for (k, column) in columns.iter().enumerate() {
        let mut expr = SymbolExpression::zero();
        for (idx, coeff) in column {
            expr.add_term(symbols[*idx].clone(), coeff.clone());
        }
        let class = hecke_apply(&params, &expr, &presentation)?;
        if !class.is_zero() {
            witnesses.push(format!("column {k} ({})", expr.canonical_string()));
        }
    }
    let detail = if witnesses.is_empty() {
        format!("{} relation columns map to zero", columns.len())
    } else {
        format!("failed at {}", witnesses.join(", "))
    };
    report.push(Check::from_result(
        "relation_columns_annihilated",
        witnesses.is_empty(),
        detail,
    ));
    Ok(report)
}

/// Commutation of two averaging operators on every generator symbol:
/// asserted modulo torsion, with the exact (integral) comparison reported
/// as an informational detail.
pub fn verify_hecke_commutation(
    group: &FinAbelianGroupSpec,
    n: usize,
    ell_a: u64,
    ell_b: u64,
) -> Result<SuiteReport> {
    let pa = HeckeParams::new(ell_a, 1);
    let pb = HeckeParams::new(ell_b, 1);
    pa.validate(group, n)?;
    pb.validate(group, n)?;
    let presentation = presented_group(group, n, Variant::B)?;
    let mut report = SuiteReport::new(format!(
        "commutation of ell={ell_a} and ell={ell_b} over {} with {n} entries",
        group.canonical_string()
    ));
    let mut torsion_witnesses = Vec::new();
    let mut integral_witnesses = Vec::new();
    let symbols = enumerate_symbols(group, n)?;
    for symbol in &symbols {
        let expr = SymbolExpression::from_symbol(symbol.clone());
        let ab = hecke_image(&pa, &hecke_image(&pb, &expr, group)?, group)?;
        let ba = hecke_image(&pb, &hecke_image(&pa, &expr, group)?, group)?;
        let diff = presentation.class_of(&ab.sub(&ba))?;
        if !diff.order().is_finite() {
            torsion_witnesses.push(symbol.to_string());
        }
        if !diff.is_zero() {
            integral_witnesses.push(symbol.to_string());
        }
    }
    let detail = if torsion_witnesses.is_empty() {
        format!("agree modulo torsion on all {} symbols", symbols.len())
    } else {
        format!("failed at {}", torsion_witnesses.join(", "))
    };
    report.push(Check::from_result(
        "commutation_modulo_torsion",
        torsion_witnesses.is_empty(),
        detail,
    ));
    // The exact comparison is informational: it is recorded, not asserted.
    let verdict = if integral_witnesses.is_empty() {
        format!("exact agreement on all {} symbols", symbols.len())
    } else {
        format!(
            "exact images differ at {} of {} symbols ({})",
            integral_witnesses.len(),
            symbols.len(),
            integral_witnesses.join(", ")
        )
    };
    report.push(Check::pass_with("integral_commutation_verdict", verdict));
    Ok(report)
}
