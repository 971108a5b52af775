//! Exact sparse multivariate polynomials over the integers.
//!
//! A [`VarSpace`] of arity `n` fixes the `2n-1` variables
//! `x1 < … < xn < m1 < … < m(n-1)`. Monomials are dense exponent vectors over
//! those slots and are ordered graded-lexicographically: total degree first,
//! then the exponent of the largest variable (`m(n-1)`) downwards.
//!
//! The text format written by [`Polynomial`]'s `Display` lists terms in
//! descending monomial order, each as a signed explicit coefficient followed by
//! `*var^e` factors (exponent 1 elided), separated by single spaces:
//!
//! ```text
//! -1*m1^2 +1*x1^2
//! ```
//!
//! The zero polynomial prints as `0`. [`parse`] reads that format and the
//! looser hand-written form `x1^2 - m1^2`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;
use thiserror::Error;

use crate::permgroup::Permutation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("arity must be at least 2, got {0}")]
    ArityTooSmall(usize),
    #[error("variable spaces differ: n={0} vs n={1}")]
    SpaceMismatch(usize, usize),
    #[error("expected {expected} values, got {got}")]
    WrongArity { expected: usize, got: usize },
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("permutation of degree {got} does not act on {expected} x-variables")]
    BadPermutation { expected: usize, got: usize },
    #[error("variable slot {0} out of range")]
    BadSlot(usize),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// Variable layout for an instance of arity `n`: slots `0..n` hold `x1..xn`,
/// slots `n..2n-1` hold `m1..m(n-1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct VarSpace {
    n: usize,
}

impl VarSpace {
    pub fn new(n: usize) -> Result<Self, PolyError> {
        if n < 2 {
            return Err(PolyError::ArityTooSmall(n));
        }
        Ok(VarSpace { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of variable slots, `2n - 1`.
    pub fn arity(&self) -> usize {
        2 * self.n - 1
    }

    /// Slot of the one-based jump variable `x_i`.
    pub fn x(&self, i: usize) -> usize {
        assert!(i >= 1 && i <= self.n, "x{i} outside 1..={}", self.n);
        i - 1
    }

    /// Slot of the one-based blocked-point variable `m_j`.
    pub fn m(&self, j: usize) -> usize {
        assert!(j >= 1 && j < self.n, "m{j} outside 1..{}", self.n);
        self.n + j - 1
    }

    pub fn is_x_slot(&self, slot: usize) -> bool {
        slot < self.n
    }

    pub fn var_name(&self, slot: usize) -> String {
        if slot < self.n {
            format!("x{}", slot + 1)
        } else {
            format!("m{}", slot - self.n + 1)
        }
    }
}

type Exponents = SmallVec<[u16; 12]>;

/// Exponent vector over the slots of a [`VarSpace`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Exponents);

impl Monomial {
    pub fn one(arity: usize) -> Self {
        Monomial(SmallVec::from_elem(0, arity))
    }

    pub fn var(arity: usize, slot: usize) -> Self {
        let mut m = Self::one(arity);
        m.0[slot] = 1;
        m
    }

    pub fn from_exponents(exps: &[u16]) -> Self {
        Monomial(SmallVec::from_slice(exps))
    }

    pub fn exponents(&self) -> &[u16] {
        &self.0
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Moves the exponent of `x_{i}` to `x_{σ(i)}` for the first `n` slots.
    pub fn rename_x(&self, sigma: &Permutation, n: usize) -> Monomial {
        let mut out = self.clone();
        for i in 0..n {
            out.0[sigma.apply(i)] = self.0[i];
        }
        out
    }

    /// Sum of the exponents in the first `n` slots.
    pub fn x_degree(&self, n: usize) -> u32 {
        self.0[..n].iter().map(|&e| e as u32).sum()
    }

    /// `self / divisor` when the division leaves no negative exponent.
    pub fn checked_div(&self, divisor: &Monomial) -> Option<Monomial> {
        if !divisor.divides(self) {
            return None;
        }
        Some(Monomial(
            self.0.iter().zip(&divisor.0).map(|(a, b)| a - b).collect(),
        ))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.iter().rev().cmp(other.0.iter().rev()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Polynomial with nonzero `BigInt` coefficients keyed by monomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    space: VarSpace,
    terms: BTreeMap<Monomial, BigInt>,
}

impl Polynomial {
    pub fn zero(space: VarSpace) -> Self {
        Polynomial {
            space,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(space: VarSpace, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let mut p = Self::zero(space);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(space.arity()), c);
        }
        p
    }

    pub fn one(space: VarSpace) -> Self {
        Self::constant(space, 1)
    }

    pub fn var(space: VarSpace, slot: usize) -> Self {
        let mut p = Self::zero(space);
        p.terms
            .insert(Monomial::var(space.arity(), slot), BigInt::one());
        p
    }

    pub fn x(space: VarSpace, i: usize) -> Self {
        Self::var(space, space.x(i))
    }

    pub fn m(space: VarSpace, j: usize) -> Self {
        Self::var(space, space.m(j))
    }

    /// Sums `(monomial, coefficient)` pairs, merging repeats and dropping zeros.
    pub fn from_terms<I>(space: VarSpace, terms: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (Monomial, BigInt)>,
    {
        let mut acc: HashMap<Monomial, BigInt> = HashMap::new();
        for (mono, c) in terms {
            if mono.arity() != space.arity() {
                return Err(PolyError::WrongArity {
                    expected: space.arity(),
                    got: mono.arity(),
                });
            }
            *acc.entry(mono).or_insert_with(BigInt::zero) += c;
        }
        Ok(Self::from_hash(space, acc))
    }

    pub(crate) fn from_hash(space: VarSpace, acc: HashMap<Monomial, BigInt>) -> Self {
        Polynomial {
            space,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn space(&self) -> VarSpace {
        self.space
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in descending monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter().rev()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &BigInt)> {
        self.terms.iter().next_back()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.leading_term().map(|(m, _)| m.degree())
    }

    /// Largest exponent of one slot across all terms.
    pub fn degree_in(&self, slot: usize) -> u16 {
        self.terms.keys().map(|m| m.0[slot]).max().unwrap_or(0)
    }

    pub fn coefficient_of(&self, mono: &Monomial) -> BigInt {
        self.terms.get(mono).cloned().unwrap_or_else(BigInt::zero)
    }

    fn same_space(&self, other: &Polynomial) -> Result<(), PolyError> {
        if self.space != other.space {
            return Err(PolyError::SpaceMismatch(self.space.n, other.space.n));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.same_space(other)?;
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            add_term(&mut terms, m.clone(), c.clone());
        }
        Ok(Polynomial {
            space: self.space,
            terms,
        })
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.same_space(other)?;
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            add_term(&mut terms, m.clone(), -c);
        }
        Ok(Polynomial {
            space: self.space,
            terms,
        })
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.same_space(other)?;
        let mut acc: HashMap<Monomial, BigInt> =
            HashMap::with_capacity(self.len().saturating_mul(other.len()).min(1 << 20));
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                *acc.entry(ma.mul(mb)).or_insert_with(BigInt::zero) += ca * cb;
            }
        }
        Ok(Self::from_hash(self.space, acc))
    }

    pub fn scale(&self, k: &BigInt) -> Polynomial {
        if k.is_zero() {
            return Self::zero(self.space);
        }
        Polynomial {
            space: self.space,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut out = Self::one(self.space);
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Product of `factors`; the empty product is 1.
    pub fn product<'a, I>(space: VarSpace, factors: I) -> Result<Polynomial, PolyError>
    where
        I: IntoIterator<Item = &'a Polynomial>,
    {
        let mut acc = Self::one(space);
        for f in factors {
            acc = acc.checked_mul(f)?;
        }
        Ok(acc)
    }

    /// Exact division: `Some(q)` with `self = q * d`, or `None` when no
    /// polynomial with integer coefficients satisfies that.
    ///
    /// Runs graded-lex division by the single divisor `d`. If `d` divides
    /// `self`, every remainder is itself a multiple of `d`, so its leading term
    /// must be divisible by the leading term of `d`; the first failure of that
    /// test proves non-divisibility.
    pub fn try_exact_divide(&self, d: &Polynomial) -> Result<Option<Polynomial>, PolyError> {
        self.same_space(d)?;
        let (lead_m, lead_c) = d.leading_term().ok_or(PolyError::DivisionByZero)?;
        let tail: Vec<(&Monomial, &BigInt)> = d.terms.iter().rev().skip(1).collect();
        let mut rem = self.terms.clone();
        let mut quotient = BTreeMap::new();
        while let Some((m, c)) = rem.pop_last() {
            let Some(qm) = m.checked_div(lead_m) else {
                return Ok(None);
            };
            let (qc, r) = c.div_rem(lead_c);
            if !r.is_zero() {
                return Ok(None);
            }
            for (dm, dc) in &tail {
                add_term(&mut rem, qm.mul(dm), -(&qc * *dc));
            }
            quotient.insert(qm, qc);
        }
        Ok(Some(Polynomial {
            space: self.space,
            terms: quotient,
        }))
    }

    /// Exact value at a point given as one rational per slot.
    pub fn evaluate(&self, point: &[BigRational]) -> Result<BigRational, PolyError> {
        if point.len() != self.space.arity() {
            return Err(PolyError::WrongArity {
                expected: self.space.arity(),
                got: point.len(),
            });
        }
        let mut powers: Vec<Vec<BigRational>> = Vec::with_capacity(point.len());
        for (slot, v) in point.iter().enumerate() {
            let top = self.degree_in(slot) as usize;
            let mut row = Vec::with_capacity(top + 1);
            row.push(BigRational::one());
            for k in 1..=top {
                let next = &row[k - 1] * v;
                row.push(next);
            }
            powers.push(row);
        }
        let mut total = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = BigRational::from_integer(c.clone());
            for (slot, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t *= &powers[slot][e as usize];
                }
            }
            total += t;
        }
        Ok(total)
    }

    /// Convenience wrapper around [`Polynomial::evaluate`] for integer points.
    pub fn evaluate_int(&self, point: &[i64]) -> Result<BigRational, PolyError> {
        let q: Vec<BigRational> = point
            .iter()
            .map(|&v| BigRational::from_integer(v.into()))
            .collect();
        self.evaluate(&q)
    }

    /// Substitutes `x_i -> x_{σ(i)}` on the x-block; the m-block is untouched.
    pub fn rename_vars(&self, sigma: &Permutation) -> Result<Polynomial, PolyError> {
        let n = self.space.n;
        if sigma.degree() != n {
            return Err(PolyError::BadPermutation {
                expected: n,
                got: sigma.degree(),
            });
        }
        Ok(Polynomial {
            space: self.space,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.rename_x(sigma, n), c.clone()))
                .collect(),
        })
    }

    /// Replaces the variable in `slot` by an integer constant.
    pub fn substitute(&self, slot: usize, value: &BigInt) -> Result<Polynomial, PolyError> {
        if slot >= self.space.arity() {
            return Err(PolyError::BadSlot(slot));
        }
        let mut acc: HashMap<Monomial, BigInt> = HashMap::new();
        for (m, c) in &self.terms {
            let e = m.0[slot];
            let mut reduced = m.clone();
            reduced.0[slot] = 0;
            let k = c * num_traits::pow(value.clone(), e as usize);
            *acc.entry(reduced).or_insert_with(BigInt::zero) += k;
        }
        Ok(Self::from_hash(self.space, acc))
    }

    /// Moves the polynomial into a larger or equal variable space, keeping
    /// `x_i` and `m_j` in place.
    pub fn embed(&self, target: VarSpace) -> Result<Polynomial, PolyError> {
        if target.n < self.space.n {
            return Err(PolyError::SpaceMismatch(self.space.n, target.n));
        }
        let terms = self.terms.iter().map(|(m, c)| {
            let mut e = Monomial::one(target.arity());
            for slot in 0..self.space.arity() {
                let dst = if slot < self.space.n {
                    slot
                } else {
                    target.n + (slot - self.space.n)
                };
                e.0[dst] = m.0[slot];
            }
            (e, c.clone())
        });
        Polynomial::from_terms(target, terms)
    }

    /// Removes every common integer factor from the coefficients and makes the
    /// leading coefficient positive.
    pub fn primitive_part(&self) -> Polynomial {
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = g.gcd(c);
        }
        if g.is_zero() {
            return self.clone();
        }
        if self.leading_term().map(|(_, c)| c.is_negative()) == Some(true) {
            g = -g;
        }
        Polynomial {
            space: self.space,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c / &g)).collect(),
        }
    }
}

fn add_term(terms: &mut BTreeMap<Monomial, BigInt>, m: Monomial, c: BigInt) {
    if c.is_zero() {
        return;
    }
    match terms.entry(m) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    /// Panics when the variable spaces differ; see [`Polynomial::checked_add`].
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.checked_add(rhs).expect("polynomial spaces differ")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.checked_sub(rhs).expect("polynomial spaces differ")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.checked_mul(rhs).expect("polynomial spaces differ")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        Polynomial {
            space: self.space,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            if c.is_negative() {
                write!(f, "{c}")?;
            } else {
                write!(f, "+{c}")?;
            }
            for (slot, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*{}", self.space.var_name(slot))?,
                    _ => write!(f, "*{}^{}", self.space.var_name(slot), e)?,
                }
            }
        }
        Ok(())
    }
}

/// Parses a polynomial over `space`.
pub fn parse(text: &str, space: VarSpace) -> Result<Polynomial, PolyError> {
    Parser {
        src: text.as_bytes(),
        pos: 0,
        space,
    }
    .polynomial()
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    space: VarSpace,
}

impl Parser<'_> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, PolyError> {
        Err(PolyError::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ' | b'\t' | b'\n' | b'\r')) {
            self.pos += 1;
        }
    }

    fn digits(&mut self) -> Option<&str> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if start == self.pos {
            None
        } else {
            std::str::from_utf8(&self.src[start..self.pos]).ok()
        }
    }

    fn polynomial(mut self) -> Result<Polynomial, PolyError> {
        let mut acc: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        self.skip_ws();
        if self.peek().is_none() {
            return self.err("empty input");
        }
        let mut first = true;
        loop {
            self.skip_ws();
            let negative = match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    false
                }
                Some(b'-') => {
                    self.pos += 1;
                    true
                }
                None => break,
                _ if first => false,
                _ => return self.err("expected '+' or '-' between terms"),
            };
            first = false;
            self.skip_ws();
            let (m, mut c) = self.term()?;
            if negative {
                c = -c;
            }
            add_term(&mut acc, m, c);
        }
        Ok(Polynomial {
            space: self.space,
            terms: acc,
        })
    }

    fn term(&mut self) -> Result<(Monomial, BigInt), PolyError> {
        let mut mono = Monomial::one(self.space.arity());
        let mut coeff = BigInt::one();
        let mut need_factor = true;
        if let Some(d) = self.digits() {
            coeff = d.parse().expect("ascii digits");
            self.skip_ws();
            if self.peek() != Some(b'*') {
                return Ok((mono, coeff));
            }
            self.pos += 1;
            self.skip_ws();
            need_factor = true;
        }
        loop {
            if need_factor {
                let (slot, e) = self.factor()?;
                mono.0[slot] += e;
            }
            self.skip_ws();
            if self.peek() == Some(b'*') {
                self.pos += 1;
                self.skip_ws();
                need_factor = true;
            } else {
                return Ok((mono, coeff));
            }
        }
    }

    fn factor(&mut self) -> Result<(usize, u16), PolyError> {
        let start = self.pos;
        let kind = match self.peek() {
            Some(c @ (b'x' | b'm')) => c,
            _ => return self.err("expected a variable x<i> or m<j>"),
        };
        self.pos += 1;
        let Some(idx) = self.digits() else {
            return self.err("expected a variable index");
        };
        let idx: usize = idx.parse().unwrap_or(usize::MAX);
        let n = self.space.n;
        let slot = match kind {
            b'x' if (1..=n).contains(&idx) => idx - 1,
            b'm' if (1..n).contains(&idx) => n + idx - 1,
            _ => {
                self.pos = start;
                return self.err(format!(
                    "variable {}{} not in the space of arity {n}",
                    kind as char, idx
                ));
            }
        };
        let mut e = 1u16;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let Some(d) = self.digits() else {
                return self.err("expected an exponent");
            };
            e = match d.parse() {
                Ok(v) => v,
                Err(_) => return self.err("exponent too large"),
            };
        }
        Ok((slot, e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sp(n: usize) -> VarSpace {
        VarSpace::new(n).unwrap()
    }

    fn p(text: &str, n: usize) -> Polynomial {
        parse(text, sp(n)).unwrap()
    }

    fn q(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    #[test]
    fn add_cancels_and_keeps_identity() {
        let s = sp(3);
        let x1 = Polynomial::x(s, 1);
        assert!((&x1 + &(-&x1)).is_zero());
        assert_eq!(&p("x1 - m1", 3) + &p("m1", 3), x1);
        let f = p("x1^2*x2 - 3*m2 + 7", 3);
        assert_eq!(&f + &Polynomial::zero(s), f);
    }

    #[test]
    fn mul_expands() {
        assert_eq!(
            &p("x1 - m1", 2) * &p("x1 + m1", 2),
            p("x1^2 - m1^2", 2)
        );
        assert_eq!(
            &p("x1 - x2", 3) * &p("x1 + x2", 3),
            p("x1^2 - x2^2", 3)
        );
    }

    #[test]
    fn mismatched_spaces_are_rejected() {
        let a = Polynomial::x(sp(2), 1);
        let b = Polynomial::x(sp(3), 1);
        assert_eq!(a.checked_add(&b), Err(PolyError::SpaceMismatch(2, 3)));
        assert_eq!(a.checked_mul(&b), Err(PolyError::SpaceMismatch(2, 3)));
    }

    #[test]
    fn exact_division() {
        let num = p("x1^2 - x2^2", 3);
        assert_eq!(
            num.try_exact_divide(&p("x1 - x2", 3)).unwrap(),
            Some(p("x1 + x2", 3))
        );
        assert_eq!(
            p("x1^2 + x2^2", 3).try_exact_divide(&p("x1 - x2", 3)).unwrap(),
            None
        );
        // divisible over the rationals but not over the integers
        assert_eq!(
            p("x1", 2).try_exact_divide(&p("2*x1", 2)).unwrap(),
            None
        );
        assert_eq!(
            num.try_exact_divide(&Polynomial::zero(sp(3))),
            Err(PolyError::DivisionByZero)
        );
    }

    #[test]
    fn evaluation_is_exact() {
        let f = p("x1 - m1", 2);
        assert!(f.evaluate_int(&[2, 0, 2]).unwrap().is_zero());
        let half = BigRational::new(1.into(), 2.into());
        let v = p("x1^2 + x2", 3)
            .evaluate(&[half.clone(), half, q(0), q(0), q(0)])
            .unwrap();
        assert_eq!(v, BigRational::new(3.into(), 4.into()));
        assert!(matches!(
            f.evaluate(&[q(1)]),
            Err(PolyError::WrongArity { expected: 3, got: 1 })
        ));
    }

    #[test]
    fn coefficients() {
        let s = sp(3);
        let x1x2 = Monomial::from_exponents(&[1, 1, 0, 0, 0]);
        assert_eq!(p("x1 + x2", 3).coefficient_of(&x1x2), BigInt::zero());
        assert_eq!(p("5*x1*x2 + x2", 3).coefficient_of(&x1x2), BigInt::from(5));
        assert_eq!(Polynomial::one(s).total_degree(), Some(0));
        assert_eq!(Polynomial::zero(s).total_degree(), None);
    }

    #[test]
    fn renaming_permutes_x_block_only() {
        let swap = Permutation::transposition(3, 1, 2).unwrap();
        assert_eq!(
            p("x1 - x2", 3).rename_vars(&swap).unwrap(),
            p("x2 - x1", 3)
        );
        let f = p("x1*m1 - x3^2*m2", 3);
        assert_eq!(f.rename_vars(&Permutation::identity(3)).unwrap(), f);
        assert!(f.rename_vars(&Permutation::identity(2)).is_err());
    }

    #[test]
    fn substitution() {
        let f = p("x1*m1^2 - m1", 2);
        let g = f.substitute(2, &BigInt::from(3)).unwrap();
        assert_eq!(g, p("9*x1 - 3", 2));
    }

    #[test]
    fn canonical_text() {
        assert_eq!(Polynomial::zero(sp(2)).to_string(), "0");
        let f = p("x1^2 - m1^2", 2);
        assert_eq!(f.to_string(), "-1*m1^2 +1*x1^2");
        assert_eq!(parse(&f.to_string(), sp(2)).unwrap(), f);
        assert_eq!(p("3 - x2*x1", 3).to_string(), "-1*x1*x2 +3");
        assert_eq!(p("x1*x1", 2), p("x1^2", 2));
    }

    #[test]
    fn parse_errors_carry_positions() {
        let e = parse("x1 + m2", sp(2)).unwrap_err();
        assert_eq!(
            e,
            PolyError::Parse {
                pos: 5,
                msg: "variable m2 not in the space of arity 2".into()
            }
        );
        assert!(matches!(parse("", sp(2)), Err(PolyError::Parse { pos: 0, .. })));
        assert!(matches!(parse("x1 x2", sp(2)), Err(PolyError::Parse { pos: 3, .. })));
        assert!(matches!(parse("x1^", sp(2)), Err(PolyError::Parse { pos: 3, .. })));
        assert!(matches!(parse("2*", sp(2)), Err(PolyError::Parse { pos: 2, .. })));
        assert!(matches!(parse("y1", sp(2)), Err(PolyError::Parse { pos: 0, .. })));
    }

    #[test]
    fn graded_lex_order() {
        // total degree dominates, then the largest variable
        let a = Monomial::from_exponents(&[2, 0, 0]);
        let b = Monomial::from_exponents(&[0, 0, 1]);
        let c = Monomial::from_exponents(&[0, 1, 0]);
        assert!(a > b);
        assert!(b > c);
        let d = Monomial::from_exponents(&[1, 0, 1]);
        let e = Monomial::from_exponents(&[0, 2, 0]);
        assert!(d > e);
    }

    const SPACE_N: usize = 2;

    fn small_poly() -> impl Strategy<Value = Polynomial> {
        let arity = 2 * SPACE_N - 1;
        prop::collection::vec(
            (prop::collection::vec(0u16..3, arity), -5i64..=5),
            0..5,
        )
        .prop_map(move |terms| {
            Polynomial::from_terms(
                sp(SPACE_N),
                terms
                    .into_iter()
                    .map(|(e, c)| (Monomial::from_exponents(&e), BigInt::from(c))),
            )
            .unwrap()
        })
    }

    fn point() -> impl Strategy<Value = Vec<BigRational>> {
        prop::collection::vec((-6i64..=6, 1i64..=4), 2 * SPACE_N - 1).prop_map(|v| {
            v.into_iter()
                .map(|(a, b)| BigRational::new(a.into(), b.into()))
                .collect()
        })
    }

    fn canonical(p: &Polynomial) -> bool {
        p.terms.values().all(|c| !c.is_zero())
    }

    proptest! {
        #[test]
        fn ring_laws(a in small_poly(), b in small_poly(), c in small_poly()) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert!(canonical(&(&a + &b)) && canonical(&(&a * &b)) && canonical(&(&a - &a)));
        }

        #[test]
        fn division_recovers_factor(a in small_poly(), d in small_poly()) {
            prop_assume!(!d.is_zero());
            let prod = &a * &d;
            prop_assert_eq!(prod.try_exact_divide(&d).unwrap(), Some(a));
        }

        #[test]
        fn evaluation_is_a_homomorphism(a in small_poly(), b in small_poly(), pt in point()) {
            let lhs = (&a * &b).evaluate(&pt).unwrap();
            let rhs = a.evaluate(&pt).unwrap() * b.evaluate(&pt).unwrap();
            prop_assert_eq!(lhs, rhs);
            let lhs = (&a + &b).evaluate(&pt).unwrap();
            let rhs = a.evaluate(&pt).unwrap() + b.evaluate(&pt).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn text_round_trip(a in small_poly()) {
            let text = a.to_string();
            let back = parse(&text, a.space()).unwrap();
            prop_assert_eq!(back.to_string(), text);
            prop_assert_eq!(back, a);
        }
    }
}
