//! From Legendre-symbol conditions on a prime p to congruence classes of p.
//!
//! An atom `(n)=±1` says that the Legendre symbol `(n/p)` takes the given
//! value. Every atom is a function of `p mod M` with `M = 8·∏q` over the odd
//! primes `q` dividing some `n`, so a Boolean combination of atoms is a union
//! of unit classes modulo `M`.
//!
//! # Expression syntax
//!
//! ```text
//! expr    := or
//! or      := and ( '|' and )*
//! and     := unary ( '&' unary )*
//! unary   := '!' unary | primary
//! primary := atom | '(' expr ')' | 'true' | 'false'
//! atom    := '(' integer ')' '=' ( '+1' | '-1' | '1' )
//! ```
//!
//! Whitespace is ignored between tokens. `n` is replaced by its signed
//! squarefree part, so `(8)=+1` and `(2)=+1` are the same atom.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::nt::{factor_small, is_prime, jacobi_u64, Int};
use crate::symplectic::{QrConstraint, Sign, SymplecticError};

/// Largest modulus [`to_classes`] will enumerate.
pub const MAX_MODULUS: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QrError {
    #[error("modulus {0} must be divisible by 8 and by every odd prime in use")]
    InsufficientModulus(u64),
    #[error("{0} is not -1, 2 or an odd prime")]
    BadSymbol(i64),
    #[error("residue {0} is not coprime to the modulus {1}")]
    NotCoprime(u64, u64),
    #[error("modulus {0} exceeds the enumeration limit {MAX_MODULUS}")]
    TooLarge(Int),
    #[error("{0}")]
    Factor(String),
}

/// The constant value of `(q/p)` on primes `p ≡ r (mod m)`, for `q` in
/// {-1, 2} or an odd prime.
pub fn symbol_sign(q: i64, r: u64, m: u64) -> Result<Sign, QrError> {
    if !m.is_multiple_of(8) {
        return Err(QrError::InsufficientModulus(m));
    }
    if r.gcd(&m) != 1 {
        return Err(QrError::NotCoprime(r, m));
    }
    let plus = match q {
        -1 => r % 4 == 1,
        2 => matches!(r % 8, 1 | 7),
        q if q > 2 && is_prime(q as u64) => {
            let q = q as u64;
            if !m.is_multiple_of(q) {
                return Err(QrError::InsufficientModulus(m));
            }
            let flip = r % 4 == 3 && q % 4 == 3;
            (jacobi_u64(r % q, q) == 1) != flip
        }
        _ => return Err(QrError::BadSymbol(q)),
    };
    Ok(if plus { Sign::Plus } else { Sign::Minus })
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SignExpr {
    True,
    False,
    Atom(QrConstraint),
    Not(Box<SignExpr>),
    And(Vec<SignExpr>),
    Or(Vec<SignExpr>),
}

fn distinct(items: Vec<SignExpr>) -> Vec<SignExpr> {
    let mut out: Vec<SignExpr> = Vec::with_capacity(items.len());
    for e in items {
        if !out.contains(&e) {
            out.push(e);
        }
    }
    out
}

impl SignExpr {
    pub fn atom(c: QrConstraint) -> Self {
        SignExpr::Atom(c)
    }

    /// Conjunction of the distinct items; empty is `True` and a singleton is unwrapped.
    pub fn and_all(items: Vec<SignExpr>) -> Self {
        let mut items = distinct(items);
        match items.len() {
            0 => SignExpr::True,
            1 => items.pop().unwrap(),
            _ => SignExpr::And(items),
        }
    }

    /// Disjunction of the distinct items; empty is `False` and a singleton is unwrapped.
    pub fn or_all(items: Vec<SignExpr>) -> Self {
        let mut items = distinct(items);
        match items.len() {
            0 => SignExpr::False,
            1 => items.pop().unwrap(),
            _ => SignExpr::Or(items),
        }
    }

    pub fn negate(self) -> Self {
        match self {
            SignExpr::True => SignExpr::False,
            SignExpr::False => SignExpr::True,
            SignExpr::Atom(c) => SignExpr::Atom(c.negated()),
            SignExpr::Not(e) => *e,
            e => SignExpr::Not(Box::new(e)),
        }
    }

    pub fn atoms(&self) -> Vec<&QrConstraint> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<&'a QrConstraint>) {
        match self {
            SignExpr::Atom(c) => out.push(c),
            SignExpr::Not(e) => e.collect_atoms(out),
            SignExpr::And(es) | SignExpr::Or(es) => es.iter().for_each(|e| e.collect_atoms(out)),
            SignExpr::True | SignExpr::False => {}
        }
    }

    pub fn eval(&self, atom: &mut impl FnMut(&QrConstraint) -> bool) -> bool {
        match self {
            SignExpr::True => true,
            SignExpr::False => false,
            SignExpr::Atom(c) => atom(c),
            SignExpr::Not(e) => !e.eval(atom),
            SignExpr::And(es) => es.iter().all(|e| e.eval(atom)),
            SignExpr::Or(es) => es.iter().any(|e| e.eval(atom)),
        }
    }

    fn is_compound(&self) -> bool {
        matches!(self, SignExpr::And(_) | SignExpr::Or(_))
    }
}

impl fmt::Display for SignExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |f: &mut fmt::Formatter<'_>, es: &[SignExpr], op: &str| -> fmt::Result {
            for (i, e) in es.iter().enumerate() {
                if i > 0 {
                    write!(f, " {op} ")?;
                }
                if e.is_compound() {
                    write!(f, "({e})")?;
                } else {
                    write!(f, "{e}")?;
                }
            }
            Ok(())
        };
        match self {
            SignExpr::True => f.write_str("true"),
            SignExpr::False => f.write_str("false"),
            SignExpr::Atom(c) => write!(f, "{c}"),
            SignExpr::Not(e) if e.is_compound() => write!(f, "!({e})"),
            SignExpr::Not(e) => write!(f, "!{e}"),
            SignExpr::And(es) => join(f, es, "&"),
            SignExpr::Or(es) => join(f, es, "|"),
        }
    }
}

fn phi(m: u64) -> u64 {
    let f = factor_small(&Int::from(m)).expect("modulus factors");
    f.factors.iter().fold(m, |acc, (&q, _)| acc / q * (q - 1))
}

fn divisors(m: u64) -> Vec<u64> {
    let f = factor_small(&Int::from(m)).expect("modulus factors");
    let mut out = vec![1u64];
    for (&q, &e) in &f.factors {
        let mut next = Vec::new();
        for &d in &out {
            let mut pw = 1;
            for _ in 0..=e {
                next.push(d * pw);
                pw *= q;
            }
        }
        out = next;
    }
    out.sort_unstable();
    out
}

/// A set of unit residue classes, stored at the smallest modulus that
/// expresses it.
///
/// The full set is `{0 mod 1}`; the empty set is `{} mod 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CongruenceClassSet {
    modulus: u64,
    residues: Vec<u64>,
}

impl CongruenceClassSet {
    /// Residues are reduced mod `modulus`; non-units are dropped.
    pub fn new(modulus: u64, residues: impl IntoIterator<Item = u64>) -> Self {
        assert!(modulus >= 1, "modulus must be positive");
        let mut rs: Vec<u64> = residues
            .into_iter()
            .map(|r| r % modulus)
            .filter(|r| r.gcd(&modulus) == 1)
            .collect();
        rs.sort_unstable();
        rs.dedup();
        Self::canonical(modulus, rs)
    }

    pub fn empty() -> Self {
        CongruenceClassSet {
            modulus: 1,
            residues: Vec::new(),
        }
    }

    pub fn all() -> Self {
        CongruenceClassSet {
            modulus: 1,
            residues: vec![0],
        }
    }

    fn canonical(m: u64, residues: Vec<u64>) -> Self {
        if residues.is_empty() {
            return Self::empty();
        }
        let phi_m = phi(m);
        for d in divisors(m) {
            let per_class = phi_m / phi(d);
            let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
            for r in &residues {
                *counts.entry(r % d).or_default() += 1;
            }
            if counts.values().all(|&c| c == per_class) {
                return CongruenceClassSet {
                    modulus: d,
                    residues: counts.into_keys().collect(),
                };
            }
        }
        unreachable!("d = m always expresses the set")
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn residues(&self) -> &[u64] {
        &self.residues
    }

    pub fn is_empty(&self) -> bool {
        self.residues.is_empty()
    }

    pub fn contains(&self, r: u64) -> bool {
        self.residues.binary_search(&(r % self.modulus)).is_ok()
    }

    /// The residues modulo a multiple `m` of the canonical modulus.
    pub fn lift(&self, m: u64) -> Vec<u64> {
        assert!(
            m.is_multiple_of(self.modulus),
            "{m} is not a multiple of {}",
            self.modulus
        );
        (0..m)
            .filter(|r| r.gcd(&m) == 1 && self.contains(*r))
            .collect()
    }

    fn combine(&self, other: &Self, keep: impl Fn(bool, bool) -> bool) -> Self {
        let m = self.modulus.lcm(&other.modulus);
        let rs = (0..m).filter(|r| r.gcd(&m) == 1 && keep(self.contains(*r), other.contains(*r)));
        Self::new(m, rs)
    }

    pub fn union(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a || b)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a && b)
    }

    pub fn complement(&self) -> Self {
        let m = self.modulus;
        Self::new(m, (0..m).filter(|r| r.gcd(&m) == 1 && !self.contains(*r)))
    }

    pub fn density(&self) -> BigRational {
        BigRational::new(Int::from(self.residues.len()), Int::from(phi(self.modulus)))
    }

    /// Greedy description by classes of increasing modulus, each entry a
    /// modulus and the residues taken at it.
    pub fn cover(&self) -> Vec<(u64, Vec<u64>)> {
        let m = self.modulus;
        let phi_m = phi(m);
        let mut covered = vec![false; self.residues.len()];
        let mut out = Vec::new();
        for d in divisors(m) {
            if covered.iter().all(|&c| c) {
                break;
            }
            let per_class = phi_m / phi(d);
            let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
            for r in &self.residues {
                *counts.entry(r % d).or_default() += 1;
            }
            let mut taken: Vec<u64> = Vec::new();
            for (i, r) in self.residues.iter().enumerate() {
                if !covered[i] && counts[&(r % d)] == per_class {
                    taken.push(r % d);
                }
            }
            if taken.is_empty() {
                continue;
            }
            taken.sort_unstable();
            taken.dedup();
            for (i, r) in self.residues.iter().enumerate() {
                if taken.binary_search(&(r % d)).is_ok() {
                    covered[i] = true;
                }
            }
            out.push((d, taken));
        }
        out
    }
}

impl fmt::Display for CongruenceClassSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("no p");
        }
        if self.modulus == 1 {
            return f.write_str("all p");
        }
        let parts: Vec<String> = self
            .cover()
            .into_iter()
            .map(|(d, rs)| {
                let rs: Vec<String> = rs.iter().map(u64::to_string).collect();
                format!("p ≡ {} (mod {d})", rs.join(", "))
            })
            .collect();
        f.write_str(&parts.join(" or "))
    }
}

impl Serialize for CongruenceClassSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let d = self.density();
        let mut st = s.serialize_struct("CongruenceClassSet", 4)?;
        st.serialize_field("modulus", &self.modulus)?;
        st.serialize_field("residues", &self.residues)?;
        st.serialize_field("density_num", &d.numer().to_u64().unwrap_or(0))?;
        st.serialize_field("density_den", &d.denom().to_u64().unwrap_or(1))?;
        st.end()
    }
}

pub fn density(set: &CongruenceClassSet) -> BigRational {
    set.density()
}

/// Odd prime factors and sign data of an atom's kernel.
fn kernel_symbols(n: &Int) -> Result<Vec<i64>, QrError> {
    let f = factor_small(n).map_err(|e| QrError::Factor(e.to_string()))?;
    let mut out = Vec::new();
    if f.sign < 0 {
        out.push(-1);
    }
    for (&q, &e) in &f.factors {
        if e % 2 == 1 {
            out.push(q as i64);
        }
    }
    Ok(out)
}

/// The classes of primes p on which `expr` holds.
pub fn to_classes(expr: &SignExpr) -> Result<CongruenceClassSet, QrError> {
    let mut kernels: BTreeMap<Int, Vec<i64>> = BTreeMap::new();
    for atom in expr.atoms() {
        if !kernels.contains_key(atom.n()) {
            kernels.insert(atom.n().clone(), kernel_symbols(atom.n())?);
        }
    }
    let mut modulus = Int::from(8);
    let mut odd: Vec<i64> = kernels
        .values()
        .flatten()
        .copied()
        .filter(|&q| q > 2)
        .collect();
    odd.sort_unstable();
    odd.dedup();
    for &q in &odd {
        modulus *= q;
    }
    let m = modulus
        .to_u64()
        .filter(|&m| m <= MAX_MODULUS)
        .ok_or(QrError::TooLarge(modulus))?;
    let mut residues = Vec::new();
    for r in (1..m).filter(|r| r.gcd(&m) == 1) {
        let mut value = |c: &QrConstraint| {
            let s = kernels[c.n()]
                .iter()
                .map(|&q| symbol_sign(q, r, m).expect("modulus covers every symbol"))
                .fold(Sign::Plus, |a, b| a * b);
            s == c.sign()
        };
        if expr.eval(&mut value) {
            residues.push(r);
        }
    }
    Ok(CongruenceClassSet::new(m, residues))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Simplified {
    Consistent(Vec<QrConstraint>),
    Contradiction,
}

/// GF(2) row: exponent vector over `-1`, `2`, odd primes, and the sign bit.
#[derive(Clone)]
struct Row {
    bits: Vec<bool>,
    rhs: bool,
}

fn reduce(basis: &[(usize, Row)], mut row: Row) -> Row {
    for (pivot, b) in basis {
        if row.bits[*pivot] {
            for (x, y) in row.bits.iter_mut().zip(&b.bits) {
                *x ^= *y;
            }
            row.rhs ^= b.rhs;
        }
    }
    row
}

fn echelon(rows: impl IntoIterator<Item = Row>) -> (Vec<(usize, Row)>, bool) {
    let mut basis: Vec<(usize, Row)> = Vec::new();
    let mut consistent = true;
    for row in rows {
        let row = reduce(&basis, row);
        match row.bits.iter().position(|&b| b) {
            Some(pivot) => {
                for (_, b) in basis.iter_mut() {
                    if b.bits[pivot] {
                        for (x, y) in b.bits.iter_mut().zip(&row.bits) {
                            *x ^= *y;
                        }
                        b.rhs ^= row.rhs;
                    }
                }
                basis.push((pivot, row));
            }
            None if row.rhs => consistent = false,
            None => {}
        }
    }
    (basis, consistent)
}

/// Drop constraints implied multiplicatively by the others, scanning in
/// order, or report that no prime satisfies all of them.
pub fn simplify(constraints: &[QrConstraint]) -> Result<Simplified, QrError> {
    let mut index: BTreeMap<i64, usize> = BTreeMap::new();
    let mut symbols = Vec::new();
    for c in constraints {
        let s = kernel_symbols(c.n())?;
        for &q in &s {
            let next = index.len();
            index.entry(q).or_insert(next);
        }
        symbols.push(s);
    }
    let rows: Vec<Row> = constraints
        .iter()
        .zip(&symbols)
        .map(|(c, s)| {
            let mut bits = vec![false; index.len()];
            for q in s {
                bits[index[q]] = true;
            }
            Row {
                bits,
                rhs: c.sign() == Sign::Minus,
            }
        })
        .collect();
    if !echelon(rows.iter().cloned()).1 {
        return Ok(Simplified::Contradiction);
    }
    let mut keep = vec![true; rows.len()];
    for i in 0..rows.len() {
        let others = (0..rows.len())
            .filter(|&j| j != i && keep[j])
            .map(|j| rows[j].clone());
        let (basis, _) = echelon(others);
        if reduce(&basis, rows[i].clone()).bits.iter().all(|&b| !b) {
            keep[i] = false;
        }
    }
    let mut out: Vec<QrConstraint> = Vec::new();
    for (c, k) in constraints.iter().zip(keep) {
        if k && !out.contains(c) {
            out.push(c.clone());
        }
    }
    Ok(Simplified::Consistent(out))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("column {column}: {message}")]
pub struct ParseError {
    pub column: usize,
    pub message: String,
}

const MAX_DEPTH: usize = 200;

struct Parser {
    chars: Vec<char>,
    pos: usize,
    depth: usize,
}

impl Parser {
    fn err<T>(&self, at: usize, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            column: at + 1,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        match self.peek() {
            Some(x) if x == c => {
                self.pos += 1;
                Ok(())
            }
            Some(x) => self.err(self.pos, format!("expected '{c}', found '{x}'")),
            None => self.err(self.pos, format!("expected '{c}', found end of input")),
        }
    }

    fn or(&mut self) -> Result<SignExpr, ParseError> {
        let mut items = vec![self.and()?];
        while self.peek() == Some('|') {
            self.pos += 1;
            items.push(self.and()?);
        }
        Ok(SignExpr::or_all(items))
    }

    fn and(&mut self) -> Result<SignExpr, ParseError> {
        let mut items = vec![self.unary()?];
        while self.peek() == Some('&') {
            self.pos += 1;
            items.push(self.unary()?);
        }
        Ok(SignExpr::and_all(items))
    }

    fn enter(&mut self) -> Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return self.err(self.pos, "expression nested too deeply");
        }
        Ok(())
    }

    fn unary(&mut self) -> Result<SignExpr, ParseError> {
        self.enter()?;
        let out = if self.peek() == Some('!') {
            self.pos += 1;
            SignExpr::Not(Box::new(self.unary()?))
        } else {
            self.primary()?
        };
        self.depth -= 1;
        Ok(out)
    }

    /// Position of the integer inside `(`, if the text at `open` is an atom.
    fn integer_after(&self, open: usize) -> Option<usize> {
        let mut i = open + 1;
        while i < self.chars.len() && self.chars[i].is_whitespace() {
            i += 1;
        }
        let start = i;
        if i < self.chars.len() && matches!(self.chars[i], '+' | '-') {
            i += 1;
        }
        (i < self.chars.len() && self.chars[i].is_ascii_digit()).then_some(start)
    }

    fn primary(&mut self) -> Result<SignExpr, ParseError> {
        let start = self.pos;
        match self.peek() {
            None => self.err(self.pos, "expected an expression, found end of input"),
            Some('(') => match self.integer_after(self.pos) {
                Some(int_start) => self.atom(int_start),
                None => {
                    self.pos += 1;
                    let e = self.or()?;
                    self.expect(')')?;
                    Ok(e)
                }
            },
            Some(c) if c.is_ascii_alphabetic() => {
                let word_start = self.pos;
                while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let word: String = self.chars[word_start..self.pos].iter().collect();
                match word.as_str() {
                    "true" => Ok(SignExpr::True),
                    "false" => Ok(SignExpr::False),
                    _ => self.err(word_start, format!("unknown word {word:?}")),
                }
            }
            Some(c) => self.err(start.max(self.pos), format!("unexpected '{c}'")),
        }
    }

    fn atom(&mut self, int_start: usize) -> Result<SignExpr, ParseError> {
        self.pos = int_start;
        let mut end = int_start + 1;
        while end < self.chars.len() && self.chars[end].is_ascii_digit() {
            end += 1;
        }
        let text: String = self.chars[int_start..end].iter().collect();
        let n: Int = text.parse().expect("scanned digits parse");
        if n.is_zero() {
            return self.err(int_start, "n must be nonzero");
        }
        self.pos = end;
        self.expect(')')?;
        self.expect('=')?;
        let sign_at = {
            self.skip_ws();
            self.pos
        };
        let sign = match (self.chars.get(self.pos), self.chars.get(self.pos + 1)) {
            (Some('+'), Some('1')) => {
                self.pos += 2;
                Sign::Plus
            }
            (Some('-'), Some('1')) => {
                self.pos += 2;
                Sign::Minus
            }
            (Some('1'), _) => {
                self.pos += 1;
                Sign::Plus
            }
            _ => return self.err(sign_at, "expected +1 or -1"),
        };
        if self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            return self.err(sign_at, "expected +1 or -1");
        }
        let c = QrConstraint::new(&n, sign).map_err(|e| match e {
            SymplecticError::Factor(m) => ParseError {
                column: int_start + 1,
                message: m,
            },
            other => ParseError {
                column: int_start + 1,
                message: other.to_string(),
            },
        })?;
        Ok(SignExpr::Atom(c))
    }
}

pub fn parse(text: &str) -> Result<SignExpr, ParseError> {
    let mut p = Parser {
        chars: text.chars().collect(),
        pos: 0,
        depth: 0,
    };
    let e = p.or()?;
    if let Some(c) = p.peek() {
        return p.err(p.pos, format!("unexpected '{c}' after expression"));
    }
    Ok(e)
}

/// Evaluate at an actual odd prime; atoms whose kernel `p` divides are false.
pub fn holds_at(expr: &SignExpr, p: u64) -> bool {
    expr.eval(&mut |c| c.holds_at(p).unwrap_or(false))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn classes(text: &str) -> CongruenceClassSet {
        to_classes(&parse(text).unwrap()).unwrap()
    }

    fn qr(n: i64, s: i8) -> QrConstraint {
        QrConstraint::from_i64(n, Sign::from_i8(s).unwrap()).unwrap()
    }

    #[test]
    fn symbol_sign_examples() {
        assert_eq!(symbol_sign(2, 5, 8), Ok(Sign::Minus));
        assert_eq!(symbol_sign(-1, 5, 8), Ok(Sign::Plus));
        assert_eq!(symbol_sign(3, 19, 24), Ok(Sign::Minus));
        assert_eq!(symbol_sign(3, 19, 8), Err(QrError::InsufficientModulus(8)));
        assert_eq!(symbol_sign(2, 5, 12), Err(QrError::InsufficientModulus(12)));
        assert_eq!(symbol_sign(9, 5, 72), Err(QrError::BadSymbol(9)));
        assert_eq!(symbol_sign(2, 6, 24), Err(QrError::NotCoprime(6, 24)));
    }

    #[test]
    fn class_examples() {
        let s = classes("(-2)=-1 & (2)=-1");
        assert_eq!((s.modulus(), s.residues()), (8, &[5][..]));
        let s = classes("(-2)=-1 & (2)=1 & (3)=1");
        assert_eq!((s.modulus(), s.residues()), (24, &[23][..]));
        assert_eq!(classes("true"), CongruenceClassSet::all());
        assert_eq!(classes("(3)=1 | (3)=-1"), CongruenceClassSet::all());
        assert_eq!(classes("(3)=1 & (3)=-1"), CongruenceClassSet::empty());
    }

    #[test]
    fn densities() {
        let r = |a: i64, b: i64| BigRational::new(a.into(), b.into());
        assert_eq!(CongruenceClassSet::new(8, [5]).density(), r(1, 4));
        assert_eq!(CongruenceClassSet::new(24, [5, 13, 23]).density(), r(3, 8));
        assert_eq!(CongruenceClassSet::empty().density(), r(0, 1));
        assert_eq!(CongruenceClassSet::all().density(), r(1, 1));
    }

    #[test]
    fn canonical_form_and_display() {
        let s = CongruenceClassSet::new(24, [5, 13, 21]);
        assert_eq!((s.modulus(), s.residues()), (8, &[5][..]));
        assert_eq!(s.to_string(), "p ≡ 5 (mod 8)");
        let t = CongruenceClassSet::new(24, [5, 13, 23]);
        assert_eq!(t.to_string(), "p ≡ 5 (mod 8) or p ≡ 23 (mod 24)");
        let u = CongruenceClassSet::new(24, [5, 13, 19]);
        assert_eq!(u.to_string(), "p ≡ 5 (mod 8) or p ≡ 19 (mod 24)");
        assert_eq!(
            CongruenceClassSet::new(8, [1, 7]).to_string(),
            "p ≡ 1, 7 (mod 8)"
        );
        assert_eq!(CongruenceClassSet::empty().to_string(), "no p");
        assert_eq!(
            CongruenceClassSet::new(8, [1, 3, 5, 7]).to_string(),
            "all p"
        );
        assert_eq!(
            serde_json::to_string(&t).unwrap(),
            r#"{"modulus":24,"residues":[5,13,23],"density_num":3,"density_den":8}"#
        );
    }

    #[test]
    fn parse_examples() {
        assert_eq!(
            parse("(-2)=-1 & (2)=-1").unwrap(),
            SignExpr::And(vec![SignExpr::Atom(qr(-2, -1)), SignExpr::Atom(qr(2, -1))])
        );
        assert_eq!(parse("((8)=+1)").unwrap(), SignExpr::Atom(qr(2, 1)));
        assert_eq!(parse(" ( -12 ) = 1 ").unwrap(), SignExpr::Atom(qr(-3, 1)));
        assert_eq!(
            parse("!(5)=-1").unwrap(),
            SignExpr::Not(Box::new(SignExpr::Atom(qr(5, -1))))
        );
    }

    #[test]
    fn parse_errors() {
        let col = |s: &str| parse(s).unwrap_err().column;
        assert_eq!(col("(2)="), 5);
        assert_eq!(col("(0)=1"), 2);
        assert_eq!(col("(2)=+1 &"), 9);
        assert_eq!(col("(2)=+1 )"), 8);
        assert_eq!(col("(2)=+2"), 5);
        assert_eq!(col("(2)=11"), 5);
        assert_eq!(col("maybe"), 1);
        assert_eq!(col("((2)=1"), 7);
        assert_eq!(col(""), 1);
        assert!(parse(&"(".repeat(10_000)).is_err());
        assert!(parse(&"!".repeat(10_000)).is_err());
    }

    #[test]
    fn pretty_printer() {
        let e = SignExpr::Or(vec![
            SignExpr::Atom(qr(2, -1)),
            SignExpr::And(vec![SignExpr::Atom(qr(2, 1)), SignExpr::Atom(qr(-1, -1))]),
        ]);
        assert_eq!(e.to_string(), "(2)=-1 | ((2)=+1 & (-1)=-1)");
        assert_eq!(parse(&e.to_string()).unwrap(), e);
    }

    #[test]
    fn simplify_examples() {
        assert_eq!(
            simplify(&[qr(-6, 1), qr(-1, 1), qr(6, 1)]).unwrap(),
            Simplified::Consistent(vec![qr(-1, 1), qr(6, 1)])
        );
        assert_eq!(
            simplify(&[qr(2, 1), qr(2, -1)]).unwrap(),
            Simplified::Contradiction
        );
        assert_eq!(
            simplify(&[qr(2, 1), qr(3, 1), qr(6, -1)]).unwrap(),
            Simplified::Contradiction
        );
        assert_eq!(simplify(&[]).unwrap(), Simplified::Consistent(vec![]));
        assert_eq!(
            simplify(&[qr(1, 1)]).unwrap(),
            Simplified::Consistent(vec![])
        );
        assert_eq!(simplify(&[qr(1, -1)]).unwrap(), Simplified::Contradiction);
        assert_eq!(
            simplify(&[qr(-6, 1), qr(-2, 1), qr(3, 1)]).unwrap(),
            Simplified::Consistent(vec![qr(-2, 1), qr(3, 1)])
        );
    }
}
