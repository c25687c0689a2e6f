//! Finitely presented abelian groups as cokernels of integer matrices.
//!
//! A [`PresentedAbelianGroup`] owns its generators (opaque labels), its
//! relation matrix (one column per relation) and a Smith form of that matrix,
//! computed once at construction and immutable afterwards. Element classes
//! are coordinate vectors over the generators together with their canonical
//! reduction through the Smith form, which makes equality and order checks
//! exact.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::snf::{invariant_factors, smith_normal_form, SmithForm};

/// Structure of the cokernel of an integer matrix: free rank and nontrivial
/// invariant factors, in divisibility order.
pub fn cokernel_structure(a: &IntMatrix) -> (usize, Vec<BigInt>) {
    let factors = invariant_factors(a);
    let nonzero = factors.iter().filter(|d| !d.is_zero()).count();
    let torsion = factors
        .iter()
        .filter(|d| !d.is_zero() && **d != BigInt::one())
        .cloned()
        .collect();
    (a.rows() - nonzero, torsion)
}

/// An abelian group presented by generators and relation columns.
#[derive(Debug)]
pub struct PresentedAbelianGroup {
    labels: Vec<String>,
    relations: IntMatrix,
    snf: SmithForm,
    rank: usize,
    torsion: Vec<BigInt>,
    /// Rows of `U * x` carrying torsion residues: `(row, modulus > 1)`.
    torsion_rows: Vec<(usize, BigInt)>,
    /// Rows of `U * x` carrying free coordinates.
    free_rows: Vec<usize>,
}

impl PresentedAbelianGroup {
    /// Builds the group and its cached Smith form. The relation matrix must
    /// have one row per generator.
    pub fn new(labels: Vec<String>, relations: IntMatrix) -> Self {
        assert_eq!(
            labels.len(),
            relations.rows(),
            "one relation-matrix row per generator"
        );
        let snf = smith_normal_form(&relations);
        let mut torsion_rows = Vec::new();
        let mut free_rows = Vec::new();
        for i in 0..relations.rows() {
            match snf.diag.get(i) {
                Some(d) if d.is_zero() => free_rows.push(i),
                Some(d) if *d == BigInt::one() => {}
                Some(d) => torsion_rows.push((i, d.clone())),
                None => free_rows.push(i),
            }
        }
        let rank = free_rows.len();
        let torsion = torsion_rows.iter().map(|(_, d)| d.clone()).collect();
        PresentedAbelianGroup {
            labels,
            relations,
            snf,
            rank,
            torsion,
            torsion_rows,
            free_rows,
        }
    }

    /// Rebuilds a group from previously computed parts, without re-running
    /// the Smith reduction. The caller is responsible for validity; intended
    /// for cache loading.
    pub fn from_cached_parts(labels: Vec<String>, relations: IntMatrix, snf: SmithForm) -> Self {
        let mut torsion_rows = Vec::new();
        let mut free_rows = Vec::new();
        for i in 0..relations.rows() {
            match snf.diag.get(i) {
                Some(d) if d.is_zero() => free_rows.push(i),
                Some(d) if *d == BigInt::one() => {}
                Some(d) => torsion_rows.push((i, d.clone())),
                None => free_rows.push(i),
            }
        }
        let rank = free_rows.len();
        let torsion = torsion_rows.iter().map(|(_, d)| d.clone()).collect();
        PresentedAbelianGroup {
            labels,
            relations,
            snf,
            rank,
            torsion,
            torsion_rows,
            free_rows,
        }
    }

    pub fn num_generators(&self) -> usize {
        self.labels.len()
    }

    pub fn num_relations(&self) -> usize {
        self.relations.cols()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    pub fn snf(&self) -> &SmithForm {
        &self.snf
    }

    /// Free rank of the group.
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Nontrivial invariant factors of the torsion subgroup.
    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    fn reduce(&self, coords: &[BigInt]) -> ReducedCoords {
        let y = self.snf.u.mul_vec(coords);
        let torsion = self
            .torsion_rows
            .iter()
            .map(|(i, d)| y[*i].mod_floor(d))
            .collect();
        let free = self.free_rows.iter().map(|i| y[*i].clone()).collect();
        ReducedCoords { torsion, free }
    }

    /// The element class of a coordinate vector over the generators.
    pub fn class(self: &Arc<Self>, coords: Vec<BigInt>) -> GroupElementClass {
        assert_eq!(
            coords.len(),
            self.num_generators(),
            "coordinate length mismatch"
        );
        let reduced = self.reduce(&coords);
        GroupElementClass {
            group: Arc::clone(self),
            coords,
            reduced,
        }
    }

    pub fn zero_class(self: &Arc<Self>) -> GroupElementClass {
        self.class(vec![BigInt::zero(); self.num_generators()])
    }

    fn compatible(&self, other: &PresentedAbelianGroup) -> bool {
        std::ptr::eq(self, other) || self.labels == other.labels
    }
}

/// Canonical coordinates of an element class: residues modulo the nontrivial
/// invariant factors, then free integer coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedCoords {
    pub torsion: Vec<BigInt>,
    pub free: Vec<BigInt>,
}

impl ReducedCoords {
    pub fn is_zero(&self) -> bool {
        self.torsion.iter().all(Zero::is_zero) && self.free.iter().all(Zero::is_zero)
    }
}

/// Order of an element class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassOrder {
    Finite(BigInt),
    Infinite,
}

impl ClassOrder {
    pub fn is_finite(&self) -> bool {
        matches!(self, ClassOrder::Finite(_))
    }

    /// The finite order, if any.
    pub fn finite(&self) -> Option<&BigInt> {
        match self {
            ClassOrder::Finite(n) => Some(n),
            ClassOrder::Infinite => None,
        }
    }

    /// Whether the order is finite and divides `n`.
    pub fn divides(&self, n: u64) -> bool {
        match self {
            ClassOrder::Finite(o) => BigInt::from(n).mod_floor(o).is_zero(),
            ClassOrder::Infinite => false,
        }
    }
}

impl fmt::Display for ClassOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassOrder::Finite(n) => write!(f, "{n}"),
            ClassOrder::Infinite => write!(f, "infinite"),
        }
    }
}

/// An element of a presented group: a coordinate vector plus its canonical
/// reduction. Classes keep a handle to their group so that mixing groups is
/// detected rather than silently miscomputed.
#[derive(Clone, Debug)]
pub struct GroupElementClass {
    group: Arc<PresentedAbelianGroup>,
    coords: Vec<BigInt>,
    reduced: ReducedCoords,
}

impl GroupElementClass {
    pub fn group(&self) -> &Arc<PresentedAbelianGroup> {
        &self.group
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn reduced(&self) -> &ReducedCoords {
        &self.reduced
    }

    pub fn is_zero(&self) -> bool {
        self.reduced.is_zero()
    }

    /// Exact order: infinite when a free coordinate is nonzero, else the lcm
    /// of the residue orders in each cyclic torsion factor.
    pub fn order(&self) -> ClassOrder {
        if self.reduced.free.iter().any(|c| !c.is_zero()) {
            return ClassOrder::Infinite;
        }
        let mut ord = BigInt::one();
        for ((_, d), r) in self.group.torsion_rows.iter().zip(&self.reduced.torsion) {
            let contribution = d / d.gcd(r);
            ord = ord.lcm(&contribution);
        }
        ClassOrder::Finite(ord)
    }

    pub fn add(&self, other: &GroupElementClass) -> Result<GroupElementClass> {
        if !self.group.compatible(&other.group) {
            return Err(Error::GroupMismatch);
        }
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a + b)
            .collect();
        Ok(self.group.class(coords))
    }

    pub fn sub(&self, other: &GroupElementClass) -> Result<GroupElementClass> {
        if !self.group.compatible(&other.group) {
            return Err(Error::GroupMismatch);
        }
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a - b)
            .collect();
        Ok(self.group.class(coords))
    }

    pub fn scale(&self, k: &BigInt) -> GroupElementClass {
        let coords = self.coords.iter().map(|c| c * k).collect();
        self.group.class(coords)
    }
}

/// Whether two classes denote the same element of the same presented group.
pub fn classes_equal(a: &GroupElementClass, b: &GroupElementClass) -> Result<bool> {
    if !a.group.compatible(&b.group) {
        return Err(Error::GroupMismatch);
    }
    Ok(a.reduced == b.reduced)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(labels: &[&str], relations: IntMatrix) -> Arc<PresentedAbelianGroup> {
        Arc::new(PresentedAbelianGroup::new(
            labels.iter().map(|s| s.to_string()).collect(),
            relations,
        ))
    }

    #[test]
    fn cokernel_of_rank_one_matrix() {
        let a = IntMatrix::from_rows(&[vec![2, 4], vec![4, 8]]);
        let (rank, torsion) = cokernel_structure(&a);
        assert_eq!(rank, 1);
        assert_eq!(torsion, vec![BigInt::from(2)]);
    }

    #[test]
    fn z_mod_6_as_cokernel() {
        // Z^2 / <(2,0),(0,3)> = Z/2 + Z/3 = Z/6
        let g = group(&["x", "y"], IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]));
        assert_eq!(g.rank(), 0);
        assert_eq!(g.torsion(), &[BigInt::from(6)]);
        let x = g.class(vec![BigInt::one(), BigInt::zero()]);
        assert_eq!(x.order(), ClassOrder::Finite(BigInt::from(2)));
        let y = g.class(vec![BigInt::zero(), BigInt::one()]);
        assert_eq!(y.order(), ClassOrder::Finite(BigInt::from(3)));
        let xy = x.add(&y).unwrap();
        assert_eq!(xy.order(), ClassOrder::Finite(BigInt::from(6)));
        assert!(xy.scale(&BigInt::from(6)).is_zero());
        assert!(!xy.scale(&BigInt::from(3)).is_zero());
    }

    #[test]
    fn free_part_gives_infinite_order() {
        let g = group(&["x", "y"], IntMatrix::from_rows(&[vec![1, 1], vec![1, 1]]));
        // One relation x + y = 0 twice; group is Z.
        assert_eq!(g.rank(), 1);
        assert!(g.torsion().is_empty());
        let x = g.class(vec![BigInt::one(), BigInt::zero()]);
        assert_eq!(x.order(), ClassOrder::Infinite);
        let y = g.class(vec![BigInt::zero(), BigInt::one()]);
        let s = x.add(&y).unwrap();
        assert!(s.is_zero());
        assert!(classes_equal(&x, &y.scale(&BigInt::from(-1))).unwrap());
    }

    #[test]
    fn mixing_groups_is_an_error() {
        let g1 = group(&["x"], IntMatrix::zeros(1, 0));
        let g2 = group(&["y"], IntMatrix::zeros(1, 0));
        let a = g1.class(vec![BigInt::one()]);
        let b = g2.class(vec![BigInt::one()]);
        assert!(matches!(classes_equal(&a, &b), Err(Error::GroupMismatch)));
        assert!(a.add(&b).is_err());
    }

    #[test]
    fn order_divides_helper() {
        let g = group(&["x"], IntMatrix::from_rows(&[vec![4]]));
        let x = g.class(vec![BigInt::one()]);
        let order = x.order();
        assert!(order.divides(4));
        assert!(order.divides(8));
        assert!(!order.divides(2));
        assert!(!order.divides(6));
    }
}
