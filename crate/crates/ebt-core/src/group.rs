//! Finite abelian groups in canonical cyclic-factor form, and their
//! character data.
//!
//! A group is held as its invariant factors `d_1 | d_2 | ... | d_k` (all
//! `> 1`); any list of cyclic orders is normalised into this form on
//! construction. A [`Character`] is a tuple of residues, one per factor,
//! ordered lexicographically so that symbol multisets sort deterministically.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::snf::smith_normal_form;

/// A finite abelian group `Z/d_1 x ... x Z/d_k` with `d_1 | ... | d_k` and
/// every `d_i > 1`. The trivial group has no factors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FinAbelianGroupSpec {
    factors: Vec<u64>,
}

impl FinAbelianGroupSpec {
    /// Normalises an arbitrary list of cyclic orders into invariant-factor
    /// form via the Smith form of the corresponding diagonal matrix.
    /// Zero orders are rejected; factors equal to 1 are dropped.
    pub fn from_cyclic_orders(orders: &[u64]) -> Result<Self> {
        if orders.contains(&0) {
            return Err(Error::InvalidParameter(
                "cyclic factor orders must be positive".into(),
            ));
        }
        let nontrivial: Vec<BigInt> = orders
            .iter()
            .filter(|&&d| d > 1)
            .map(|&d| BigInt::from(d))
            .collect();
        if nontrivial.is_empty() {
            return Ok(FinAbelianGroupSpec { factors: vec![] });
        }
        let diag = IntMatrix::diagonal(&nontrivial);
        let snf = smith_normal_form(&diag);
        let factors = snf
            .diag
            .iter()
            .filter(|d| **d > BigInt::one())
            .map(|d| d.to_u64().expect("factor fits in u64"))
            .collect();
        Ok(FinAbelianGroupSpec { factors })
    }

    pub fn trivial() -> Self {
        FinAbelianGroupSpec { factors: vec![] }
    }

    pub fn cyclic(n: u64) -> Result<Self> {
        Self::from_cyclic_orders(&[n])
    }

    /// Invariant factors, in divisibility order. Empty for the trivial group.
    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn order(&self) -> u64 {
        self.factors.iter().product()
    }

    /// Exponent of the group: the largest invariant factor.
    pub fn exponent(&self) -> u64 {
        self.factors.last().copied().unwrap_or(1)
    }

    /// Canonical display form, e.g. `Z/2 x Z/4`; the trivial group prints
    /// as `Z/1`.
    pub fn canonical_string(&self) -> String {
        if self.factors.is_empty() {
            return "Z/1".to_string();
        }
        self.factors
            .iter()
            .map(|d| format!("Z/{d}"))
            .collect::<Vec<_>>()
            .join(" x ")
    }

    /// All characters of the group, in lexicographic coordinate order.
    pub fn enumerate_characters(&self) -> Vec<Character> {
        let k = self.factors.len();
        let mut out = Vec::with_capacity(self.order() as usize);
        let mut coords = vec![0u64; k];
        loop {
            out.push(Character {
                coords: coords.clone(),
            });
            // Odometer increment, last coordinate fastest.
            let mut i = k;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                coords[i] += 1;
                if coords[i] < self.factors[i] {
                    break;
                }
                coords[i] = 0;
            }
        }
    }

    /// The zero character.
    pub fn zero_character(&self) -> Character {
        Character {
            coords: vec![0; self.factors.len()],
        }
    }

    /// Builds a character from residues, reducing each modulo its factor.
    pub fn character(&self, coords: &[i64]) -> Character {
        assert_eq!(coords.len(), self.factors.len(), "coordinate count");
        Character {
            coords: coords
                .iter()
                .zip(&self.factors)
                .map(|(&c, &d)| c.rem_euclid(d as i64) as u64)
                .collect(),
        }
    }

    /// Whether the given characters generate the full dual group, i.e. the
    /// tuple they form is faithful. Decided by appending the factor moduli
    /// as extra relations and checking that the quotient they present is
    /// trivial.
    pub fn is_faithful(&self, chars: &[Character]) -> bool {
        if self.factors.is_empty() {
            return true;
        }
        let k = self.factors.len();
        let mut cols: Vec<Vec<BigInt>> = chars
            .iter()
            .map(|c| {
                assert_eq!(c.coords.len(), k, "character arity");
                c.coords.iter().map(|&x| BigInt::from(x)).collect()
            })
            .collect();
        for (i, &d) in self.factors.iter().enumerate() {
            let mut col = vec![BigInt::zero(); k];
            col[i] = BigInt::from(d);
            cols.push(col);
        }
        let m = IntMatrix::from_columns(k, &cols);
        let snf = smith_normal_form(&m);
        snf.diag.len() == k && snf.diag.iter().all(|d| *d == BigInt::one())
    }
}

impl fmt::Display for FinAbelianGroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_string())
    }
}

/// Parses a group description like `Z/6` or `Z/2 x Z/4`. Whitespace around
/// tokens is ignored and `z` is accepted for `Z`. Errors carry the byte
/// position of the offending token.
pub fn parse_group_spec(input: &str) -> Result<FinAbelianGroupSpec> {
    let mut orders = Vec::new();
    let mut pos = 0usize;
    let bytes = input.as_bytes();
    let skip_ws = |pos: &mut usize| {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
    };
    loop {
        skip_ws(&mut pos);
        if pos >= bytes.len() {
            return Err(Error::Parse {
                pos,
                msg: "expected a cyclic factor like `Z/6`".into(),
            });
        }
        if bytes[pos] != b'Z' && bytes[pos] != b'z' {
            return Err(Error::Parse {
                pos,
                msg: format!("expected `Z`, found `{}`", input[pos..].chars().next().unwrap()),
            });
        }
        pos += 1;
        if pos >= bytes.len() || bytes[pos] != b'/' {
            return Err(Error::Parse {
                pos,
                msg: "expected `/` after `Z`".into(),
            });
        }
        pos += 1;
        let start = pos;
        while pos < bytes.len() && bytes[pos].is_ascii_digit() {
            pos += 1;
        }
        if start == pos {
            return Err(Error::Parse {
                pos,
                msg: "expected a positive integer after `Z/`".into(),
            });
        }
        let value: u64 = input[start..pos].parse().map_err(|_| Error::Parse {
            pos: start,
            msg: "integer too large".into(),
        })?;
        if value == 0 {
            return Err(Error::Parse {
                pos: start,
                msg: "cyclic factor order must be positive".into(),
            });
        }
        orders.push(value);
        skip_ws(&mut pos);
        if pos >= bytes.len() {
            break;
        }
        if bytes[pos] == b'x' || bytes[pos] == b'X' || bytes[pos] == b'*' {
            pos += 1;
            continue;
        }
        return Err(Error::Parse {
            pos,
            msg: format!(
                "expected `x` between factors, found `{}`",
                input[pos..].chars().next().unwrap()
            ),
        });
    }
    FinAbelianGroupSpec::from_cyclic_orders(&orders)
}

/// A character of a finite abelian group, i.e. an element of the dual,
/// stored as one residue per invariant factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Character {
    coords: Vec<u64>,
}

impl Character {
    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &Character, group: &FinAbelianGroupSpec) -> Character {
        Character {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .zip(group.factors())
                .map(|((&a, &b), &d)| (a + b) % d)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Character, group: &FinAbelianGroupSpec) -> Character {
        Character {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .zip(group.factors())
                .map(|((&a, &b), &d)| (a + d - b) % d)
                .collect(),
        }
    }

    pub fn neg(&self, group: &FinAbelianGroupSpec) -> Character {
        Character {
            coords: self
                .coords
                .iter()
                .zip(group.factors())
                .map(|(&a, &d)| (d - a) % d)
                .collect(),
        }
    }

    /// Multiplies the character by an arbitrary integer.
    pub fn scale_bigint(&self, k: &BigInt, group: &FinAbelianGroupSpec) -> Character {
        Character {
            coords: self
                .coords
                .iter()
                .zip(group.factors())
                .map(|(&a, &d)| {
                    let m = BigInt::from(d);
                    (BigInt::from(a) * k)
                        .mod_floor(&m)
                        .to_u64()
                        .expect("residue fits in u64")
                })
                .collect(),
        }
    }

    pub fn scale(&self, k: i64, group: &FinAbelianGroupSpec) -> Character {
        self.scale_bigint(&BigInt::from(k), group)
    }
}

impl PartialOrd for Character {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Character {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coords.cmp(&other.coords)
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coords.len() == 1 {
            write!(f, "{}", self.coords[0])
        } else {
            let inner = self
                .coords
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(",");
            write!(f, "({inner})")
        }
    }
}
