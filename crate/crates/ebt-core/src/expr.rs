//! Formal integer combinations of symbols, with a small parser for the
//! textual form `k*[a1,...,an] + ... - ...`.
//!
//! Coefficients are exact big integers; terms with coefficient zero are
//! dropped, so two expressions are equal iff they are the same formal sum.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::group::{Character, FinAbelianGroupSpec};
use crate::symbol::Symbol;

/// A finite formal sum of symbols with integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SymbolExpression {
    terms: BTreeMap<Symbol, BigInt>,
}

impl SymbolExpression {
    pub fn zero() -> Self {
        SymbolExpression::default()
    }

    pub fn from_symbol(symbol: Symbol) -> Self {
        let mut e = SymbolExpression::zero();
        e.add_term(symbol, BigInt::one());
        e
    }

    /// Adds `coeff * symbol`, removing the term if the total vanishes.
    pub fn add_term(&mut self, symbol: Symbol, coeff: BigInt) {
        use std::collections::btree_map::Entry;
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(symbol) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
        }
    }

    pub fn add(&self, other: &SymbolExpression) -> SymbolExpression {
        let mut out = self.clone();
        for (s, c) in &other.terms {
            out.add_term(s.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &SymbolExpression) -> SymbolExpression {
        let mut out = self.clone();
        for (s, c) in &other.terms {
            out.add_term(s.clone(), -c);
        }
        out
    }

    pub fn scale(&self, k: &BigInt) -> SymbolExpression {
        let mut out = SymbolExpression::zero();
        for (s, c) in &self.terms {
            out.add_term(s.clone(), c * k);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Symbol, &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, symbol: &Symbol) -> BigInt {
        self.terms.get(symbol).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Canonical textual form: terms in sorted symbol order, `1*` omitted,
    /// `0` for the empty sum.
    pub fn canonical_string(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (s, c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            if i == 0 {
                if c.is_negative() {
                    out.push('-');
                }
            } else if c.is_negative() {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            if !mag.is_one() {
                out.push_str(&format!("{mag}*"));
            }
            out.push_str(&s.to_string());
        }
        out
    }
}

impl fmt::Display for SymbolExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_string())
    }
}

struct Parser<'a> {
    input: &'a str,
    bytes: &'a [u8],
    pos: usize,
    group: &'a FinAbelianGroupSpec,
    arity: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn expect(&mut self, b: u8) -> Result<()> {
        if self.peek() == Some(b) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected `{}`", b as char)))
        }
    }

    fn integer(&mut self) -> Result<i64> {
        let start = self.pos;
        if self.peek() == Some(b'-') || self.peek() == Some(b'+') {
            self.pos += 1;
        }
        let digits_start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == digits_start {
            self.pos = start;
            return Err(self.err("expected an integer"));
        }
        self.input[start..self.pos]
            .parse()
            .map_err(|_| self.err("integer out of range"))
    }

    fn character(&mut self) -> Result<Character> {
        self.skip_ws();
        let k = self.group.factors().len();
        if self.peek() == Some(b'(') {
            self.pos += 1;
            let mut coords = Vec::new();
            loop {
                self.skip_ws();
                coords.push(self.integer()?);
                self.skip_ws();
                match self.peek() {
                    Some(b',') => {
                        self.pos += 1;
                    }
                    Some(b')') => {
                        self.pos += 1;
                        break;
                    }
                    _ => return Err(self.err("expected `,` or `)` in character tuple")),
                }
            }
            if coords.len() != k {
                return Err(self.err(format!(
                    "character needs {k} coordinate(s) for this group, found {}",
                    coords.len()
                )));
            }
            Ok(self.group.character(&coords))
        } else {
            let v = self.integer()?;
            if k != 1 {
                return Err(self.err(format!(
                    "this group has {k} cyclic factors; write characters as tuples"
                )));
            }
            Ok(self.group.character(&[v]))
        }
    }

    fn symbol(&mut self) -> Result<Symbol> {
        self.expect(b'[')?;
        let mut entries = Vec::new();
        loop {
            entries.push(self.character()?);
            self.skip_ws();
            match self.peek() {
                Some(b',') => {
                    self.pos += 1;
                }
                Some(b']') => {
                    self.pos += 1;
                    break;
                }
                _ => return Err(self.err("expected `,` or `]` in symbol")),
            }
        }
        if entries.len() != self.arity {
            return Err(self.err(format!(
                "symbol has {} entries, expected {}",
                entries.len(),
                self.arity
            )));
        }
        Ok(Symbol::new(entries))
    }

    /// One term: optional `k*` prefix, then a symbol.
    fn term(&mut self) -> Result<(Symbol, BigInt)> {
        self.skip_ws();
        let mut coeff = BigInt::one();
        // A leading integer is a coefficient when followed by `*`.
        if self
            .peek()
            .map(|b| b.is_ascii_digit() || b == b'-' || b == b'+')
            .unwrap_or(false)
        {
            let save = self.pos;
            let k = self.integer()?;
            self.skip_ws();
            if self.peek() == Some(b'*') {
                self.pos += 1;
                self.skip_ws();
                coeff = BigInt::from(k);
            } else {
                self.pos = save;
                return Err(self.err("expected `*` after coefficient"));
            }
        }
        let symbol = self.symbol()?;
        Ok((symbol, coeff))
    }
}

/// Parses an expression such as `[1,2]`, `2*[1,1] - [0,1]` or
/// `[(1,0),(0,1)]` (tuple characters for groups with several factors).
/// `0` denotes the zero expression. Every symbol must have `arity` entries.
pub fn parse_expression(
    input: &str,
    group: &FinAbelianGroupSpec,
    arity: usize,
) -> Result<SymbolExpression> {
    let mut p = Parser {
        input,
        bytes: input.as_bytes(),
        pos: 0,
        group,
        arity,
    };
    p.skip_ws();
    // Bare zero.
    if p.peek() == Some(b'0') {
        let save = p.pos;
        p.pos += 1;
        p.skip_ws();
        if p.pos == p.bytes.len() {
            return Ok(SymbolExpression::zero());
        }
        p.pos = save;
    }
    let mut expr = SymbolExpression::zero();
    let mut negate = false;
    if p.peek() == Some(b'-') {
        negate = true;
        p.pos += 1;
    } else if p.peek() == Some(b'+') {
        p.pos += 1;
    }
    loop {
        let (symbol, coeff) = p.term()?;
        expr.add_term(symbol, if negate { -coeff } else { coeff });
        p.skip_ws();
        match p.peek() {
            None => break,
            Some(b'+') => {
                negate = false;
                p.pos += 1;
            }
            Some(b'-') => {
                negate = true;
                p.pos += 1;
            }
            _ => return Err(p.err("expected `+`, `-`, or end of expression")),
        }
    }
    Ok(expr)
}
