//! Smith normal form over the integers.
//!
//! [`smith_normal_form`] computes `U * A * V = D` with `U`, `V` unimodular
//! and `D` diagonal with a divisibility chain `d1 | d2 | ...`. Inverses of
//! both transforms are maintained alongside, since downstream consumers need
//! adapted bases (columns of `U^-1`) as often as the transforms themselves.
//!
//! Pivot selection is deterministic: the entry of least absolute value in
//! the remaining block, ties broken by lowest row index, then lowest column
//! index. Together with rounded division this keeps intermediate growth slow;
//! entries are arbitrary-precision integers throughout, so correctness never
//! depends on it.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::matrix::IntMatrix;

/// The result of a Smith normal form computation: `u * a * v = d` where `d`
/// is diagonal with nonnegative entries forming a divisibility chain.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
    /// Diagonal of `d`, length `min(rows, cols)`; zeros trail the chain.
    pub diag: Vec<BigInt>,
    rows: usize,
    cols: usize,
}

impl SmithForm {
    /// Reassembles a form from stored parts, e.g. a deserialized cache
    /// entry. Shapes are checked; the factorization itself is the caller's
    /// responsibility.
    pub fn from_parts(
        u: IntMatrix,
        u_inv: IntMatrix,
        v: IntMatrix,
        v_inv: IntMatrix,
        diag: Vec<BigInt>,
    ) -> Self {
        let rows = u.rows();
        let cols = v.rows();
        assert_eq!((u.rows(), u.cols()), (rows, rows), "u must be square");
        assert_eq!((v.rows(), v.cols()), (cols, cols), "v must be square");
        assert_eq!(
            (u_inv.rows(), u_inv.cols()),
            (rows, rows),
            "u_inv must match u"
        );
        assert_eq!(
            (v_inv.rows(), v_inv.cols()),
            (cols, cols),
            "v_inv must match v"
        );
        assert_eq!(diag.len(), rows.min(cols), "diagonal length mismatch");
        SmithForm {
            u,
            u_inv,
            v,
            v_inv,
            diag,
            rows,
            cols,
        }
    }

    /// Number of nonzero invariant factors.
    pub fn rank(&self) -> usize {
        self.diag.iter().filter(|d| !d.is_zero()).count()
    }

    /// Invariant factors greater than one, in divisibility order.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.diag
            .iter()
            .filter(|d| !d.is_zero() && **d != BigInt::one())
            .cloned()
            .collect()
    }

    /// The diagonal matrix `d` at the original shape.
    pub fn d_matrix(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.rows, self.cols);
        for (i, e) in self.diag.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    /// A particular integer solution of `a * x = b`, if one exists.
    pub fn solve(&self, b: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(b.len(), self.rows, "rhs length mismatch");
        let y = self.u.mul_vec(b);
        let mut z = vec![BigInt::zero(); self.cols];
        for (i, yi) in y.iter().enumerate() {
            let d = self.diag.get(i).cloned().unwrap_or_else(BigInt::zero);
            if d.is_zero() {
                if !yi.is_zero() {
                    return None;
                }
            } else {
                let (q, r) = yi.div_rem(&d);
                if !r.is_zero() {
                    return None;
                }
                z[i] = q;
            }
        }
        Some(self.v.mul_vec(&z))
    }

    /// Whether `a * x = b (mod m)` has a solution, for `m >= 1`.
    pub fn solvable_mod(&self, b: &[BigInt], modulus: &BigInt) -> bool {
        assert_eq!(b.len(), self.rows, "rhs length mismatch");
        assert!(modulus.is_positive(), "modulus must be positive");
        let y = self.u.mul_vec(b);
        for (i, yi) in y.iter().enumerate() {
            let d = self.diag.get(i).cloned().unwrap_or_else(BigInt::zero);
            // d * z = yi (mod m) is solvable iff gcd(d, m) divides yi.
            let g = d.gcd(modulus);
            if !yi.mod_floor(&g).is_zero() {
                return false;
            }
        }
        true
    }
}

/// Full Smith normal form with transforms and their inverses.
pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    Engine::new(a, true).run()
}

/// Invariant factors only; skips transform bookkeeping.
pub fn invariant_factors(a: &IntMatrix) -> Vec<BigInt> {
    Engine::new(a, false).run().diag
}

/// Rank over the rationals, read off the invariant factors.
pub fn rank(a: &IntMatrix) -> usize {
    invariant_factors(a).iter().filter(|d| !d.is_zero()).count()
}

/// Quotient `a` rounded to the nearest multiple of `b`; on a half-way tie the
/// quotient is truncated toward zero. Guarantees `|a - q*b| <= |b| / 2`.
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    let (mut q, r) = a.div_rem(b);
    if r.magnitude() * 2u32 > *b.magnitude() {
        if r.is_negative() == b.is_negative() {
            q += 1;
        } else {
            q -= 1;
        }
    }
    q
}

struct Engine {
    work: IntMatrix,
    m: usize,
    n: usize,
    track: bool,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl Engine {
    fn new(a: &IntMatrix, track: bool) -> Self {
        let (m, n) = (a.rows(), a.cols());
        let dim = |k: usize| if track { k } else { 0 };
        Engine {
            work: a.clone(),
            m,
            n,
            track,
            u: IntMatrix::identity(dim(m)),
            u_inv: IntMatrix::identity(dim(m)),
            v: IntMatrix::identity(dim(n)),
            v_inv: IntMatrix::identity(dim(n)),
        }
    }

    fn row_swap(&mut self, a: usize, b: usize) {
        self.work.swap_rows(a, b);
        if self.track {
            self.u.swap_rows(a, b);
            self.u_inv.swap_cols(a, b);
        }
    }

    fn col_swap(&mut self, a: usize, b: usize) {
        self.work.swap_cols(a, b);
        if self.track {
            self.v.swap_cols(a, b);
            self.v_inv.swap_rows(a, b);
        }
    }

    /// `row[dst] += q * row[src]` as a left unimodular operation.
    fn row_addmul(&mut self, dst: usize, src: usize, q: &BigInt) {
        self.work.row_addmul(dst, src, q);
        if self.track {
            self.u.row_addmul(dst, src, q);
            let neg = -q;
            self.u_inv.col_addmul(src, dst, &neg);
        }
    }

    /// `col[dst] += q * col[src]` as a right unimodular operation.
    fn col_addmul(&mut self, dst: usize, src: usize, q: &BigInt) {
        self.work.col_addmul(dst, src, q);
        if self.track {
            self.v.col_addmul(dst, src, q);
            let neg = -q;
            self.v_inv.row_addmul(src, dst, &neg);
        }
    }

    fn row_negate(&mut self, i: usize) {
        self.work.negate_row(i);
        if self.track {
            self.u.negate_row(i);
            self.u_inv.negate_col(i);
        }
    }

    /// Least-absolute-value pivot in the block at `(t.., t..)`; ties go to
    /// the lowest row, then the lowest column.
    fn select_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.m {
            for j in t..self.n {
                let e = &self.work[(i, j)];
                if e.is_zero() {
                    continue;
                }
                match best {
                    None => best = Some((i, j)),
                    Some((bi, bj)) => {
                        if e.magnitude() < self.work[(bi, bj)].magnitude() {
                            best = Some((i, j));
                        }
                    }
                }
            }
        }
        best
    }

    /// First entry of the block strictly below and right of `t` that the
    /// pivot does not divide.
    fn find_nondivisible(&self, t: usize) -> Option<usize> {
        let pivot = &self.work[(t, t)];
        for i in t + 1..self.m {
            for j in t + 1..self.n {
                if !self.work[(i, j)].mod_floor(pivot).is_zero() {
                    return Some(i);
                }
            }
        }
        None
    }

    fn run(mut self) -> SmithForm {
        let limit = self.m.min(self.n);
        let mut t = 0;
        while t < limit {
            let Some((pi, pj)) = self.select_pivot(t) else {
                break;
            };
            self.row_swap(t, pi);
            self.col_swap(t, pj);
            loop {
                // Clear column t below the pivot. A nonzero remainder is
                // strictly smaller than the pivot and becomes the new pivot.
                let mut i = t + 1;
                while i < self.m {
                    if self.work[(i, t)].is_zero() {
                        i += 1;
                        continue;
                    }
                    let q = -div_round(&self.work[(i, t)], &self.work[(t, t)]);
                    self.row_addmul(i, t, &q);
                    if self.work[(i, t)].is_zero() {
                        i += 1;
                    } else {
                        self.row_swap(t, i);
                        i = t + 1;
                    }
                }
                // Clear row t. A column swap drags untreated entries into
                // column t, so the outer loop must then run again.
                let mut dirtied = false;
                let mut j = t + 1;
                while j < self.n {
                    if self.work[(t, j)].is_zero() {
                        j += 1;
                        continue;
                    }
                    let q = -div_round(&self.work[(t, j)], &self.work[(t, t)]);
                    self.col_addmul(j, t, &q);
                    if self.work[(t, j)].is_zero() {
                        j += 1;
                    } else {
                        self.col_swap(t, j);
                        dirtied = true;
                        j = t + 1;
                    }
                }
                if dirtied {
                    continue;
                }
                // Fold a row with an entry the pivot misses into row t; the
                // next sweep replaces the pivot by a proper divisor, so this
                // terminates and enforces the divisibility chain.
                if let Some(bad) = self.find_nondivisible(t) {
                    self.row_addmul(t, bad, &BigInt::one());
                    continue;
                }
                break;
            }
            if self.work[(t, t)].is_negative() {
                self.row_negate(t);
            }
            t += 1;
        }
        let diag = (0..limit).map(|i| self.work[(i, i)].clone()).collect();
        SmithForm {
            u: self.u,
            u_inv: self.u_inv,
            v: self.v,
            v_inv: self.v_inv,
            diag,
            rows: self.m,
            cols: self.n,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::is_unimodular;

    fn check_identity(a: &IntMatrix) -> SmithForm {
        let s = smith_normal_form(a);
        assert_eq!(s.u.mul(a).mul(&s.v), s.d_matrix(), "U*A*V != D");
        assert_eq!(s.u.mul(&s.u_inv), IntMatrix::identity(a.rows()));
        assert_eq!(s.v.mul(&s.v_inv), IntMatrix::identity(a.cols()));
        assert!(is_unimodular(&s.u));
        assert!(is_unimodular(&s.v));
        for w in s.diag.windows(2) {
            if !w[0].is_zero() {
                assert!(w[1].mod_floor(&w[0]).is_zero(), "chain broken: {:?}", s.diag);
            } else {
                assert!(w[1].is_zero(), "nonzero after zero in diag");
            }
        }
        s
    }

    #[test]
    fn diagonal_already_in_form_is_untouched() {
        let a = IntMatrix::diagonal(&[BigInt::from(2), BigInt::from(6)]);
        let s = check_identity(&a);
        assert_eq!(s.diag, vec![BigInt::from(2), BigInt::from(6)]);
        assert_eq!(s.u, IntMatrix::identity(2));
        assert_eq!(s.v, IntMatrix::identity(2));
    }

    #[test]
    fn rank_one_matrix() {
        let a = IntMatrix::from_rows(&[vec![2, 4], vec![4, 8]]);
        let s = check_identity(&a);
        assert_eq!(s.diag, vec![BigInt::from(2), BigInt::zero()]);
    }

    #[test]
    fn empty_and_zero_matrices() {
        let a = IntMatrix::zeros(0, 0);
        let s = smith_normal_form(&a);
        assert!(s.diag.is_empty());
        let a = IntMatrix::zeros(3, 2);
        let s = check_identity(&a);
        assert_eq!(s.diag, vec![BigInt::zero(), BigInt::zero()]);
    }

    #[test]
    fn divisibility_fix_is_needed_and_applied() {
        // diag(2, 3) must become diag(1, 6).
        let a = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]);
        let s = check_identity(&a);
        assert_eq!(s.diag, vec![BigInt::one(), BigInt::from(6)]);
    }

    #[test]
    fn classic_textbook_example() {
        let a = IntMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, 4, 16]]);
        let s = check_identity(&a);
        assert_eq!(
            s.diag,
            vec![BigInt::from(2), BigInt::from(2), BigInt::from(156)]
        );
    }

    #[test]
    fn solve_finds_integer_solutions() {
        let a = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]);
        let s = smith_normal_form(&a);
        let x = s.solve(&[BigInt::from(4), BigInt::from(9)]).unwrap();
        assert_eq!(a.mul_vec(&x), vec![BigInt::from(4), BigInt::from(9)]);
        assert!(s.solve(&[BigInt::from(1), BigInt::zero()]).is_none());
    }

    #[test]
    fn solvable_mod_detects_congruence_solutions() {
        // 2x = b (mod 4) is solvable iff b is even.
        let a = IntMatrix::from_rows(&[vec![2]]);
        let s = smith_normal_form(&a);
        let four = BigInt::from(4);
        assert!(s.solvable_mod(&[BigInt::from(2)], &four));
        assert!(!s.solvable_mod(&[BigInt::from(1)], &four));
        // Zero row: 0x = b (mod 4) only for b = 0 (mod 4).
        let a = IntMatrix::zeros(1, 1);
        let s = smith_normal_form(&a);
        assert!(s.solvable_mod(&[BigInt::from(8)], &four));
        assert!(!s.solvable_mod(&[BigInt::from(2)], &four));
    }

    #[test]
    fn invariant_factors_match_full_form() {
        let a = IntMatrix::from_rows(&[vec![6, 4, 2], vec![2, 8, 4]]);
        let s = smith_normal_form(&a);
        assert_eq!(invariant_factors(&a), s.diag);
    }
}
