//! Independent oracles for the integration tests.
//!
//! Everything here deliberately avoids the library's Smith-normal-form
//! machinery: ranks come from rational Gaussian elimination, lattice
//! membership and element orders from a column-style Hermite basis plus an
//! exact rational solve, and invariant factors (for small matrices) from
//! determinantal divisors. Agreement between these and the library is what
//! the tests assert.

#![allow(dead_code)]
// The elimination routines read best in textbook index form.
#![allow(clippy::needless_range_loop)]

use ebt_core::IntMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Rank via Gaussian elimination over ℚ.
pub fn oracle_rank(m: &IntMatrix) -> usize {
    let rows = m.rows();
    let cols = m.cols();
    let mut a: Vec<Vec<BigRational>> = (0..rows)
        .map(|i| {
            (0..cols)
                .map(|j| BigRational::from_integer(m[(i, j)].clone()))
                .collect()
        })
        .collect();
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(rank, pivot);
        let inv = a[rank][col].recip();
        for j in col..cols {
            let scaled = &a[rank][j] * &inv;
            a[rank][j] = scaled;
        }
        for i in 0..rows {
            if i != rank && !a[i][col].is_zero() {
                let factor = a[i][col].clone();
                for j in col..cols {
                    let updated = &a[i][j] - &factor * &a[rank][j];
                    a[i][j] = updated;
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// A basis of the column lattice of `m`, obtained by integer column
/// operations only (no row operations, no divisibility fix-ups): a column
/// echelon form with the zero columns dropped.
pub fn hnf_column_basis(m: &IntMatrix) -> IntMatrix {
    let rows = m.rows();
    let mut a = m.clone();
    let mut pivot_col = 0usize;
    for row in 0..rows {
        if pivot_col >= a.cols() {
            break;
        }
        // Chain gcd reductions until at most one column has a nonzero
        // entry in this row (among columns >= pivot_col).
        loop {
            let mut nonzero: Vec<usize> = (pivot_col..a.cols())
                .filter(|&j| !a[(row, j)].is_zero())
                .collect();
            if nonzero.len() <= 1 {
                break;
            }
            // Reduce the column with the larger entry by the smaller.
            nonzero.sort_by(|&x, &y| a[(row, x)].abs().cmp(&a[(row, y)].abs()));
            let (small, big) = (nonzero[0], nonzero[1]);
            let q = a[(row, big)].div_floor(&a[(row, small)]);
            a.col_addmul(big, small, &(-q));
        }
        if let Some(j) = (pivot_col..a.cols()).find(|&j| !a[(row, j)].is_zero()) {
            a.swap_cols(pivot_col, j);
            if a[(row, pivot_col)].is_negative() {
                a.negate_col(pivot_col);
            }
            pivot_col += 1;
        }
    }
    // Keep the pivot columns only.
    IntMatrix::from_fn(rows, pivot_col, |i, j| a[(i, j)].clone())
}

/// Solves `basis · x = v` over ℚ; `basis` must have independent columns.
/// Returns `None` when the system is inconsistent.
pub fn solve_rational(basis: &IntMatrix, v: &[BigInt]) -> Option<Vec<BigRational>> {
    let rows = basis.rows();
    let cols = basis.cols();
    assert_eq!(rows, v.len());
    let mut a: Vec<Vec<BigRational>> = (0..rows)
        .map(|i| {
            let mut row: Vec<BigRational> = (0..cols)
                .map(|j| BigRational::from_integer(basis[(i, j)].clone()))
                .collect();
            row.push(BigRational::from_integer(v[i].clone()));
            row
        })
        .collect();
    let mut pivot_rows = Vec::new();
    let mut rank = 0usize;
    for col in 0..cols {
        let Some(pivot) = (rank..rows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(rank, pivot);
        let inv = a[rank][col].recip();
        for j in col..=cols {
            let scaled = &a[rank][j] * &inv;
            a[rank][j] = scaled;
        }
        for i in 0..rows {
            if i != rank && !a[i][col].is_zero() {
                let factor = a[i][col].clone();
                for j in col..=cols {
                    let updated = &a[i][j] - &factor * &a[rank][j];
                    a[i][j] = updated;
                }
            }
        }
        pivot_rows.push((rank, col));
        rank += 1;
    }
    // Inconsistent when a zero row has nonzero right-hand side.
    for i in rank..rows {
        if !a[i][cols].is_zero() {
            return None;
        }
    }
    let mut x = vec![BigRational::zero(); cols];
    for (row, col) in pivot_rows {
        x[col] = a[row][cols].clone();
    }
    Some(x)
}

/// Order of the class of `v` in the cokernel of `relations`, computed
/// without Smith forms: the minimal k ≥ 1 with k·v in the column lattice
/// is the least common multiple of the denominators of v's coordinates in
/// any lattice basis; `None` means infinite order (v outside the rational
/// span).
pub fn oracle_class_order(relations: &IntMatrix, v: &[BigInt]) -> Option<BigInt> {
    let basis = hnf_column_basis(relations);
    if basis.cols() == 0 {
        return if v.iter().all(Zero::is_zero) {
            Some(BigInt::one())
        } else {
            None
        };
    }
    let x = solve_rational(&basis, v)?;
    let mut k = BigInt::one();
    for c in &x {
        k = k.lcm(c.denom());
    }
    Some(k)
}

/// Whether `v` lies in the column lattice of `relations`.
pub fn oracle_in_lattice(relations: &IntMatrix, v: &[BigInt]) -> bool {
    oracle_class_order(relations, v).is_some_and(|k| k.is_one())
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        // Advance to the next combination in lexicographic order.
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] < n - (k - i) {
                idx[i] += 1;
                for j in (i + 1)..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Invariant factors from determinantal divisors: s_k = d_k / d_{k−1}
/// where d_k is the gcd of all k×k minors. Exponential in the matrix size;
/// intended for matrices up to ~8×8.
pub fn oracle_invariant_factors(m: &IntMatrix) -> Vec<BigInt> {
    let rows = m.rows();
    let cols = m.cols();
    let maxk = rows.min(cols);
    let mut divisors = Vec::new();
    for k in 1..=maxk {
        let mut d = BigInt::zero();
        for ri in combinations(rows, k) {
            for ci in combinations(cols, k) {
                let sub = IntMatrix::from_fn(k, k, |i, j| m[(ri[i], ci[j])].clone());
                d = d.gcd(&sub.det());
                if d.is_one() {
                    break;
                }
            }
            if d.is_one() {
                break;
            }
        }
        if d.is_zero() {
            break;
        }
        divisors.push(d);
    }
    let mut factors = Vec::new();
    let mut prev = BigInt::one();
    for d in divisors {
        factors.push(&d / &prev);
        prev = d;
    }
    factors
}

/// Brute-force order of a class in a presented group with all-finite
/// structure: multiples are tried up to `bound`. Returns `None` when no
/// multiple up to the bound dies (the caller decides what that means).
pub fn brute_force_order(
    class: &ebt_core::GroupElementClass,
    bound: u64,
) -> Option<BigInt> {
    let mut acc = class.clone();
    for k in 1..=bound {
        if acc.is_zero() {
            return Some(BigInt::from(k));
        }
        acc = acc.add(class).expect("same group");
    }
    None
}
