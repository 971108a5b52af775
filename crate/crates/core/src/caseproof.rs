//! The `n = 4` case analysis: coincidence events among landing points, exact
//! feasibility of linear systems, and the search showing three blocked points
//! can never hit all 24 orders.
//!
//! A point expression is a nonempty proper subset of `{a1, a2, a3, a4}`,
//! stored as a bit mask (bit `i` is `a_{i+1}`).

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::permgroup;

type Q = BigRational;

/// Number of lengths in the case analysis.
pub const ARITY: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CaseError {
    #[error("expected four values with 0 < a1 < a2 < a3 < a4")]
    NotOrdered,
    #[error("an event cannot be paired with itself")]
    SameEvent,
    #[error("event set {0} is infeasible")]
    Infeasible(String),
    #[error("undetermined pair {0} matches no event")]
    UnmappedPair(String),
    #[error("classes {0} and {1} may coincide")]
    ClassesNotSeparated(String, String),
    #[error("unknown event code {0:?}")]
    UnknownCode(String),
}

// ---------------------------------------------------------------------------
// point expressions

pub fn expr_name(mask: u8) -> String {
    (0..ARITY)
        .filter(|i| mask & (1 << i) != 0)
        .map(|i| format!("a{}", i + 1))
        .collect::<Vec<_>>()
        .join("+")
}

/// Parses `a1+a3` style sums. Repeated terms are kept, so the result is a
/// sorted list of one-based indices rather than a mask.
pub fn parse_expr(text: &str) -> Option<Vec<u8>> {
    let mut out = Vec::new();
    for part in text.split('+') {
        let idx: u8 = part.trim().strip_prefix('a')?.parse().ok()?;
        if idx == 0 || idx as usize > ARITY {
            return None;
        }
        out.push(idx);
    }
    out.sort();
    Some(out)
}

fn mask_indices(mask: u8) -> Vec<u8> {
    (0..ARITY as u8).filter(|i| mask & (1 << i) != 0).map(|i| i + 1).collect()
}

/// Singles, then pairs, then triples, each in lexicographic order.
pub fn all_exprs() -> Vec<u8> {
    let mut v: Vec<u8> = (1u8..15).collect();
    v.sort_by_key(|&m| (m.count_ones(), mask_indices(m)));
    v
}

fn expr_form(mask: u8) -> [i64; ARITY] {
    let mut f = [0; ARITY];
    for (i, c) in f.iter_mut().enumerate() {
        if mask & (1 << i) != 0 {
            *c = 1;
        }
    }
    f
}

fn diff_form(s: u8, t: u8) -> [i64; ARITY] {
    let (a, b) = (expr_form(s), expr_form(t));
    let mut f = [0; ARITY];
    for i in 0..ARITY {
        f[i] = a[i] - b[i];
    }
    f
}

fn eval_expr(mask: u8, a: &[Q]) -> Q {
    (0..ARITY)
        .filter(|i| mask & (1 << i) != 0)
        .map(|i| a[i].clone())
        .sum()
}

// ---------------------------------------------------------------------------
// events

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EventCode {
    A1,
    A2,
    B1,
    B2,
    C1,
    C2,
    D1,
    D2,
    E,
    F,
}

impl EventCode {
    pub const ALL: [EventCode; 10] = [
        EventCode::A1,
        EventCode::A2,
        EventCode::B1,
        EventCode::B2,
        EventCode::C1,
        EventCode::C2,
        EventCode::D1,
        EventCode::D2,
        EventCode::E,
        EventCode::F,
    ];

    pub fn name(self) -> &'static str {
        ["A1", "A2", "B1", "B2", "C1", "C2", "D1", "D2", "E", "F"][self as usize]
    }

    /// The two point expressions the event equates, as printed.
    pub fn sides(self) -> (u8, u8) {
        const A1: u8 = 1;
        const A2: u8 = 2;
        const A3: u8 = 4;
        const A4: u8 = 8;
        match self {
            EventCode::A1 => (A1 | A2, A3),
            EventCode::A2 => (A1 | A2 | A4, A3 | A4),
            EventCode::B1 => (A1 | A2, A4),
            EventCode::B2 => (A1 | A2 | A3, A3 | A4),
            EventCode::C1 => (A1 | A3, A4),
            EventCode::C2 => (A1 | A2 | A3, A2 | A4),
            EventCode::D1 => (A2 | A3, A4),
            EventCode::D2 => (A1 | A2 | A3, A1 | A4),
            EventCode::E => (A1 | A4, A2 | A3),
            EventCode::F => (A1 | A2 | A3, A4),
        }
    }

    /// Coefficients of `lhs - rhs` after cancellation.
    pub fn form(self) -> [i64; ARITY] {
        let (l, r) = self.sides();
        diff_form(l, r)
    }

    /// Index of the equivalence class: A, B, C, D, E, F.
    pub fn atom(self) -> usize {
        [0, 0, 1, 1, 2, 2, 3, 3, 4, 5][self as usize]
    }

    pub fn equation(self) -> String {
        let (l, r) = self.sides();
        format!("{}={}", expr_name(l), expr_name(r))
    }
}

impl fmt::Display for EventCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EventCode {
    type Err = CaseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        EventCode::ALL
            .into_iter()
            .find(|e| e.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| CaseError::UnknownCode(s.to_string()))
    }
}

pub const ATOMS: usize = 6;

/// A set of event codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct EventSet(u16);

impl EventSet {
    pub fn empty() -> Self {
        EventSet(0)
    }

    pub fn from_codes(codes: &[EventCode]) -> Self {
        EventSet(codes.iter().fold(0, |m, &c| m | 1 << c as u16))
    }

    /// Both codes of every atom in `atoms` (bit `k` is atom `k`).
    pub fn from_atoms(atoms: u8) -> Self {
        EventSet::from_codes(
            &EventCode::ALL
                .into_iter()
                .filter(|c| atoms & (1 << c.atom()) != 0)
                .collect::<Vec<_>>(),
        )
    }

    pub fn contains(self, c: EventCode) -> bool {
        self.0 & (1 << c as u16) != 0
    }

    pub fn insert(&mut self, c: EventCode) {
        self.0 |= 1 << c as u16;
    }

    pub fn codes(self) -> Vec<EventCode> {
        EventCode::ALL.into_iter().filter(|&c| self.contains(c)).collect()
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn atoms(self) -> u8 {
        self.codes().iter().fold(0, |m, c| m | 1 << c.atom())
    }

    /// Adds the partner of every code present.
    pub fn closed(self) -> Self {
        EventSet::from_atoms(self.atoms())
    }

    /// `(A1,A2,E)` style; `()` when empty.
    pub fn paren(self) -> String {
        let names: Vec<&str> = self.codes().iter().map(|c| c.name()).collect();
        format!("({})", names.join(","))
    }
}

impl fmt::Display for EventSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.codes().iter().map(|c| c.name()).collect();
        f.write_str(&names.join(" "))
    }
}

impl FromStr for EventSet {
    type Err = CaseError;

    /// Accepts `A1 A2 E`, `A1,A2,E` or `(A1,A2,E)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let mut set = EventSet::empty();
        for tok in inner.split(|c: char| c == ',' || c.is_whitespace()) {
            if !tok.is_empty() {
                set.insert(tok.parse()?);
            }
        }
        Ok(set)
    }
}

/// Codes whose equation holds at `a`, which must satisfy `0 < a1 < a2 < a3 < a4`.
pub fn detect_events(a: &[Q]) -> Result<EventSet, CaseError> {
    if a.len() != ARITY || !a[0].is_positive() || a.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CaseError::NotOrdered);
    }
    let mut set = EventSet::empty();
    for c in EventCode::ALL {
        let (l, r) = c.sides();
        if eval_expr(l, a) == eval_expr(r, a) {
            set.insert(c);
        }
    }
    Ok(set)
}

// ---------------------------------------------------------------------------
// linear systems

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rel {
    Eq,
    Gt,
    Ge,
    Ne,
}

/// `Σ coeffs[i]·v_i + constant  rel  0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Constraint {
    pub coeffs: Vec<Q>,
    pub constant: Q,
    pub rel: Rel,
}

impl Constraint {
    pub fn new(coeffs: &[i64], constant: i64, rel: Rel) -> Self {
        Constraint {
            coeffs: coeffs.iter().map(|&c| Q::from_integer(c.into())).collect(),
            constant: Q::from_integer(constant.into()),
            rel,
        }
    }

    fn value(&self, point: &[Q]) -> Q {
        self.coeffs
            .iter()
            .zip(point)
            .map(|(c, v)| c * v)
            .fold(self.constant.clone(), |acc, t| acc + t)
    }

    pub fn holds(&self, point: &[Q]) -> bool {
        let v = self.value(point);
        match self.rel {
            Rel::Eq => v.is_zero(),
            Rel::Gt => v.is_positive(),
            Rel::Ge => !v.is_negative(),
            Rel::Ne => !v.is_zero(),
        }
    }

    fn is_homogeneous(&self) -> bool {
        self.constant.is_zero()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LinearSystem {
    pub vars: usize,
    pub constraints: Vec<Constraint>,
}

impl LinearSystem {
    pub fn new(vars: usize) -> Self {
        LinearSystem {
            vars,
            constraints: Vec::new(),
        }
    }

    /// `0 < v_1 < v_2 < … < v_n`.
    pub fn ordering(vars: usize) -> Self {
        let mut s = LinearSystem::new(vars);
        for i in 0..vars {
            let mut c = vec![0i64; vars];
            c[i] = 1;
            if i > 0 {
                c[i - 1] = -1;
            }
            s.push(Constraint::new(&c, 0, Rel::Gt));
        }
        s
    }

    pub fn push(&mut self, c: Constraint) {
        assert_eq!(c.coeffs.len(), self.vars, "constraint arity");
        self.constraints.push(c);
    }

    pub fn with(mut self, c: Constraint) -> Self {
        self.push(c);
        self
    }

    pub fn with_event(self, e: EventCode, holds: bool) -> Self {
        let rel = if holds { Rel::Eq } else { Rel::Ne };
        self.with(Constraint::new(&e.form(), 0, rel))
    }

    pub fn satisfied_by(&self, point: &[Q]) -> bool {
        point.len() == self.vars && self.constraints.iter().all(|c| c.holds(point))
    }
}

/// The ordering plus, for every atom, its equation or its negation.
pub fn combo_system(events: EventSet) -> LinearSystem {
    let atoms = events.closed().atoms();
    let mut sys = LinearSystem::ordering(ARITY);
    for c in EventCode::ALL {
        // one code per atom is enough; partners have the same form
        if matches!(c, EventCode::A2 | EventCode::B2 | EventCode::C2 | EventCode::D2) {
            continue;
        }
        sys = sys.with_event(c, atoms & (1 << c.atom()) != 0);
    }
    sys
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Ineq {
    coeffs: Vec<Q>,
    constant: Q,
    strict: bool,
}

impl Ineq {
    fn normalized(mut self) -> Self {
        if let Some(lead) = self.coeffs.iter().find(|c| !c.is_zero()).map(|c| c.abs()) {
            for c in &mut self.coeffs {
                *c /= &lead;
            }
            self.constant /= &lead;
        }
        self
    }

    fn trivial_ok(&self) -> bool {
        if self.strict {
            self.constant.is_positive()
        } else {
            !self.constant.is_negative()
        }
    }
}

/// Decides feasibility exactly. Disequalities branch into `>` then `<`.
/// A returned witness satisfies every constraint; for homogeneous systems it
/// is scaled to integers.
pub fn feasible(system: &LinearSystem) -> Option<Vec<Q>> {
    let n = system.vars;
    let mut eqs = Vec::new();
    let mut ineqs = Vec::new();
    let mut nes = Vec::new();
    for c in &system.constraints {
        match c.rel {
            Rel::Eq => eqs.push(c.clone()),
            Rel::Ne => nes.push(c.clone()),
            Rel::Gt | Rel::Ge => ineqs.push(Ineq {
                coeffs: c.coeffs.clone(),
                constant: c.constant.clone(),
                strict: c.rel == Rel::Gt,
            }),
        }
    }
    let mut w = branch(n, &eqs, ineqs, &nes)?;
    if system.constraints.iter().all(Constraint::is_homogeneous) {
        let l = w
            .iter()
            .fold(num_bigint::BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let l = Q::from_integer(l);
        for v in &mut w {
            *v *= &l;
        }
    }
    assert!(system.satisfied_by(&w), "witness check failed");
    Some(w)
}

fn branch(n: usize, eqs: &[Constraint], ineqs: Vec<Ineq>, nes: &[Constraint]) -> Option<Vec<Q>> {
    let w = solve_closed(n, eqs, &ineqs)?;
    let Some(pos) = nes.iter().position(|c| !c.holds(&w)) else {
        return Some(w);
    };
    let c = &nes[pos];
    let rest: Vec<Constraint> = nes
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != pos)
        .map(|(_, c)| c.clone())
        .collect();
    for sign in [1i64, -1] {
        let s = Q::from_integer(sign.into());
        let mut more = ineqs.clone();
        more.push(Ineq {
            coeffs: c.coeffs.iter().map(|v| v * &s).collect(),
            constant: &c.constant * &s,
            strict: true,
        });
        if let Some(w) = branch(n, eqs, more, &rest) {
            return Some(w);
        }
    }
    None
}

/// Equalities by pivoting, then Fourier–Motzkin on what is left.
fn solve_closed(n: usize, eqs: &[Constraint], ineqs: &[Ineq]) -> Option<Vec<Q>> {
    // pivot var, expression coefficients and constant: v = Σ e_i v_i + e0
    let mut pivots: Vec<(usize, Vec<Q>, Q)> = Vec::new();
    for eq in eqs {
        let (mut coeffs, mut constant) = (eq.coeffs.clone(), eq.constant.clone());
        substitute(&mut coeffs, &mut constant, &pivots);
        let Some(p) = (0..n).rev().find(|&i| !coeffs[i].is_zero()) else {
            if constant.is_zero() {
                continue;
            }
            return None;
        };
        let cp = coeffs[p].clone();
        let expr: Vec<Q> = (0..n)
            .map(|i| if i == p { Q::zero() } else { -&coeffs[i] / &cp })
            .collect();
        pivots.push((p, expr, -constant / cp));
    }

    let mut system: Vec<Ineq> = Vec::new();
    for q in ineqs {
        let (mut coeffs, mut constant) = (q.coeffs.clone(), q.constant.clone());
        substitute(&mut coeffs, &mut constant, &pivots);
        system.push(Ineq {
            coeffs,
            constant,
            strict: q.strict,
        });
    }

    // stages[v]: constraints over variables 0..=v, before v is eliminated
    let mut stages: Vec<Vec<Ineq>> = vec![Vec::new(); n];
    let mut current = prune(system)?;
    for v in (0..n).rev() {
        stages[v] = current.clone();
        let (mut pos, mut neg, mut next) = (Vec::new(), Vec::new(), Vec::new());
        for q in current {
            if q.coeffs[v].is_positive() {
                pos.push(q);
            } else if q.coeffs[v].is_negative() {
                neg.push(q);
            } else {
                next.push(q);
            }
        }
        for p in &pos {
            for m in &neg {
                let (a, b) = (p.coeffs[v].clone(), -m.coeffs[v].clone());
                let coeffs: Vec<Q> = (0..n).map(|i| &p.coeffs[i] * &b + &m.coeffs[i] * &a).collect();
                next.push(Ineq {
                    coeffs,
                    constant: &p.constant * &b + &m.constant * &a,
                    strict: p.strict || m.strict,
                });
            }
        }
        current = prune(next)?;
    }

    let pivot_vars: HashSet<usize> = pivots.iter().map(|p| p.0).collect();
    let mut point = vec![Q::zero(); n];
    for v in 0..n {
        if pivot_vars.contains(&v) {
            continue;
        }
        point[v] = choose(v, &stages[v], &point);
    }
    for (p, expr, c0) in pivots.iter().rev() {
        point[*p] = expr
            .iter()
            .zip(&point)
            .map(|(e, x)| e * x)
            .fold(c0.clone(), |acc, t| acc + t);
    }
    Some(point)
}

fn substitute(coeffs: &mut [Q], constant: &mut Q, pivots: &[(usize, Vec<Q>, Q)]) {
    for (p, expr, c0) in pivots {
        let k = coeffs[*p].clone();
        if k.is_zero() {
            continue;
        }
        coeffs[*p] = Q::zero();
        for (c, e) in coeffs.iter_mut().zip(expr) {
            *c += &k * e;
        }
        *constant += &k * c0;
    }
}

/// Drops constant constraints (failing if one is violated) and duplicates.
fn prune(system: Vec<Ineq>) -> Option<Vec<Ineq>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for q in system {
        if q.coeffs.iter().all(Zero::is_zero) {
            if !q.trivial_ok() {
                return None;
            }
            continue;
        }
        let q = q.normalized();
        if seen.insert(q.clone()) {
            out.push(q);
        }
    }
    Some(out)
}

/// Picks a value for `v` given the earlier coordinates: the smallest integer
/// above the lower bound when it fits, the midpoint of the bounds otherwise.
fn choose(v: usize, stage: &[Ineq], point: &[Q]) -> Q {
    let mut lower: Option<(Q, bool)> = None;
    let mut upper: Option<(Q, bool)> = None;
    for q in stage {
        let c = &q.coeffs[v];
        if c.is_zero() {
            continue;
        }
        let rest = (0..v)
            .map(|i| &q.coeffs[i] * &point[i])
            .fold(q.constant.clone(), |acc, t| acc + t);
        let bound = -rest / c;
        if c.is_positive() {
            let tighter = match &lower {
                None => true,
                Some((b, s)) => bound > *b || (bound == *b && q.strict && !s),
            };
            if tighter {
                lower = Some((bound, q.strict));
            }
        } else {
            let tighter = match &upper {
                None => true,
                Some((b, s)) => bound < *b || (bound == *b && q.strict && !s),
            };
            if tighter {
                upper = Some((bound, q.strict));
            }
        }
    }
    let fits = |x: &Q| {
        lower.as_ref().is_none_or(|(b, s)| if *s { x > b } else { x >= b })
            && upper.as_ref().is_none_or(|(b, s)| if *s { x < b } else { x <= b })
    };
    let candidate = match (&lower, &upper) {
        (Some((l, _)), _) => l.floor() + Q::one(),
        (None, Some((u, _))) => u.ceil() - Q::one(),
        (None, None) => Q::zero(),
    };
    if fits(&candidate) {
        return candidate;
    }
    let (l, u) = (&lower.as_ref().unwrap().0, &upper.as_ref().unwrap().0);
    if l == u {
        l.clone()
    } else {
        (l + u) / Q::from_integer(2.into())
    }
}

// ---------------------------------------------------------------------------
// Table 2

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Always,
    Sometimes,
    Never,
}

impl Relation {
    pub fn name(self) -> &'static str {
        match self {
            Relation::Always => "always",
            Relation::Sometimes => "sometimes",
            Relation::Never => "never",
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub fn classify_pair(p: EventCode, q: EventCode) -> Result<Relation, CaseError> {
    if p == q {
        return Err(CaseError::SameEvent);
    }
    let base = || LinearSystem::ordering(ARITY);
    if feasible(&base().with_event(p, true).with_event(q, true)).is_none() {
        return Ok(Relation::Never);
    }
    let p_not_q = feasible(&base().with_event(p, true).with_event(q, false)).is_some();
    let q_not_p = feasible(&base().with_event(q, true).with_event(p, false)).is_some();
    Ok(if p_not_q || q_not_p {
        Relation::Sometimes
    } else {
        Relation::Always
    })
}

/// The printed compatibility matrix, rows and columns in [`EventCode::ALL`] order.
/// `O` always, `T` sometimes, `X` never.
pub const PRINTED_TABLE2: [&str; 10] = [
    "-OXXTTTTTT",
    "O-XXTTTTTT",
    "XX-OXXXXTX",
    "XXO-XXXXTX",
    "TTXX-OXXTX",
    "TTXXO-XXTX",
    "TTXXXX-OXX",
    "TTXXXXO-XX",
    "TTTTTTXX-X",
    "TTXXXXXXX-",
];

pub fn printed_relation(p: EventCode, q: EventCode) -> Option<Relation> {
    match PRINTED_TABLE2[p as usize].as_bytes()[q as usize] {
        b'O' => Some(Relation::Always),
        b'T' => Some(Relation::Sometimes),
        b'X' => Some(Relation::Never),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table2Entry {
    pub p: EventCode,
    pub q: EventCode,
    pub computed: Relation,
    pub printed: Relation,
}

impl Table2Entry {
    pub fn matches(&self) -> bool {
        self.computed == self.printed
    }
}

impl fmt::Display for Table2Entry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "TABLE2 {} {} computed={} printed={} {}",
            self.p,
            self.q,
            self.computed,
            self.printed,
            if self.matches() { "MATCH" } else { "MISMATCH" }
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table2Report {
    /// The 45 unordered pairs, row-major over the upper triangle.
    pub entries: Vec<Table2Entry>,
    pub computed_symmetric: bool,
    pub printed_symmetric: bool,
}

impl Table2Report {
    pub fn mismatches(&self) -> usize {
        self.entries.iter().filter(|e| !e.matches()).count()
    }

    pub fn all_match(&self) -> bool {
        self.mismatches() == 0 && self.computed_symmetric && self.printed_symmetric
    }
}

pub fn verify_table2() -> Table2Report {
    let mut entries = Vec::new();
    let mut computed_symmetric = true;
    let mut printed_symmetric = true;
    for (i, &p) in EventCode::ALL.iter().enumerate() {
        for &q in &EventCode::ALL[i + 1..] {
            let computed = classify_pair(p, q).expect("distinct");
            computed_symmetric &= classify_pair(q, p).expect("distinct") == computed;
            let printed = printed_relation(p, q).expect("off-diagonal");
            printed_symmetric &= printed_relation(q, p) == Some(printed);
            entries.push(Table2Entry {
                p,
                q,
                computed,
                printed,
            });
        }
    }
    Table2Report {
        entries,
        computed_symmetric,
        printed_symmetric,
    }
}

// ---------------------------------------------------------------------------
// combinations

/// A feasible combination with a witness quadruple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Combo {
    pub events: EventSet,
    pub witness: Vec<Q>,
}

/// The nine combinations listed in the case analysis.
pub fn printed_combos() -> Vec<EventSet> {
    [
        "A1,A2,C1,C2,E",
        "A1,A2,D1,D2",
        "A1,A2,E",
        "A1,A2,F",
        "B1,B2,E",
        "C1,C2,E",
        "D1,D2",
        "E",
        "F",
    ]
    .iter()
    .map(|s| s.parse().expect("fixture"))
    .collect()
}

/// Every closed event set whose exact pattern (listed events hold, all others
/// fail) is realizable, ordered by atom mask.
pub fn enumerate_feasible_combos() -> Vec<Combo> {
    (0u8..1 << ATOMS)
        .filter_map(|atoms| {
            let events = EventSet::from_atoms(atoms);
            feasible(&combo_system(events)).map(|witness| Combo { events, witness })
        })
        .collect()
}

// ---------------------------------------------------------------------------
// records and value classes

/// The three proper landing points of each order of `(a1..a4)`, in
/// lexicographic order of the orders.
pub fn record_masks() -> Vec<[u8; 3]> {
    permgroup::enumerate(ARITY)
        .expect("degree 4")
        .iter()
        .map(|p| {
            let im = p.images();
            let mut acc = 0u8;
            let mut rec = [0u8; 3];
            for (k, slot) in rec.iter_mut().enumerate() {
                acc |= 1 << im[k];
                *slot = acc;
            }
            rec
        })
        .collect()
}

/// Records with each point replaced by its value class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecordTable {
    pub events: EventSet,
    pub records: Vec<[u8; 3]>,
    /// Members of each class, ordered as in [`all_exprs`].
    pub classes: Vec<Vec<u8>>,
    class_of: BTreeMap<u8, usize>,
}

impl RecordTable {
    pub fn class_of(&self, expr: u8) -> usize {
        self.class_of[&expr]
    }

    pub fn class_name(&self, class: usize) -> String {
        self.classes[class]
            .iter()
            .map(|&m| expr_name(m))
            .collect::<Vec<_>>()
            .join("=")
    }

    /// Each record as class ids.
    pub fn class_rows(&self) -> Vec<[usize; 3]> {
        self.records
            .iter()
            .map(|r| [self.class_of(r[0]), self.class_of(r[1]), self.class_of(r[2])])
            .collect()
    }
}

/// Table with no events: every expression is its own class.
pub fn records() -> RecordTable {
    let exprs = all_exprs();
    RecordTable {
        events: EventSet::empty(),
        records: record_masks(),
        classes: exprs.iter().map(|&e| vec![e]).collect(),
        class_of: exprs.iter().enumerate().map(|(i, &e)| (e, i)).collect(),
    }
}

/// Table 3 as printed. Row 18 repeats `a3` in its third point.
pub const PRINTED_TABLE3: [[&str; 3]; 24] = [
    ["a1", "a1+a2", "a1+a2+a3"],
    ["a1", "a1+a2", "a1+a2+a4"],
    ["a1", "a1+a3", "a1+a2+a3"],
    ["a1", "a1+a3", "a1+a3+a4"],
    ["a1", "a1+a4", "a1+a2+a4"],
    ["a1", "a1+a4", "a1+a3+a4"],
    ["a2", "a1+a2", "a1+a2+a3"],
    ["a2", "a1+a2", "a1+a2+a4"],
    ["a2", "a2+a3", "a1+a2+a3"],
    ["a2", "a2+a3", "a2+a3+a4"],
    ["a2", "a2+a4", "a1+a2+a4"],
    ["a2", "a2+a4", "a2+a3+a4"],
    ["a3", "a1+a3", "a1+a2+a3"],
    ["a3", "a1+a3", "a1+a3+a4"],
    ["a3", "a2+a3", "a1+a2+a3"],
    ["a3", "a2+a3", "a2+a3+a4"],
    ["a3", "a3+a4", "a1+a3+a4"],
    ["a3", "a3+a4", "a3+a3+a4"],
    ["a4", "a1+a4", "a1+a2+a4"],
    ["a4", "a1+a4", "a1+a3+a4"],
    ["a4", "a2+a4", "a1+a2+a4"],
    ["a4", "a2+a4", "a2+a3+a4"],
    ["a4", "a3+a4", "a1+a3+a4"],
    ["a4", "a3+a4", "a2+a3+a4"],
];

/// Rows of the printed table known to contain a typo.
pub const TABLE3_KNOWN_TYPOS: [usize; 1] = [18];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table3Row {
    /// 1-based.
    pub row: usize,
    pub computed: [String; 3],
    pub printed: [&'static str; 3],
    pub matches: bool,
}

impl fmt::Display for Table3Row {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = match (self.matches, TABLE3_KNOWN_TYPOS.contains(&self.row)) {
            (true, _) => "MATCH",
            (false, true) => "MISMATCH known-typo",
            (false, false) => "MISMATCH",
        };
        write!(
            f,
            "TABLE3 {} computed={} printed={} {}",
            self.row,
            self.computed.join(","),
            self.printed.join(","),
            status
        )
    }
}

pub fn verify_table3() -> Vec<Table3Row> {
    record_masks()
        .iter()
        .zip(PRINTED_TABLE3.iter())
        .enumerate()
        .map(|(i, (rec, printed))| {
            let matches = (0..3).all(|k| parse_expr(printed[k]) == Some(mask_indices(rec[k])));
            Table3Row {
                row: i + 1,
                computed: [expr_name(rec[0]), expr_name(rec[1]), expr_name(rec[2])],
                printed: *printed,
                matches,
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UndeterminedPair {
    pub lhs: u8,
    pub rhs: u8,
    pub event: EventCode,
}

impl fmt::Display for UndeterminedPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{}) {}", expr_name(self.lhs), expr_name(self.rhs), self.event)
    }
}

/// Pairs of landing expressions whose equality the ordering alone cannot rule out.
pub fn undetermined_pairs() -> Result<Vec<UndeterminedPair>, CaseError> {
    let exprs = all_exprs();
    let mut out = Vec::new();
    for (i, &s) in exprs.iter().enumerate() {
        for &t in &exprs[i + 1..] {
            let sys = LinearSystem::ordering(ARITY).with(Constraint::new(&diff_form(s, t), 0, Rel::Eq));
            if feasible(&sys).is_none() {
                continue;
            }
            let by_sides = EventCode::ALL.into_iter().find(|e| {
                let (l, r) = e.sides();
                (l, r) == (s, t) || (l, r) == (t, s)
            });
            let d = diff_form(s, t);
            let neg = d.map(|x| -x);
            let event = by_sides
                .or_else(|| EventCode::ALL.into_iter().find(|e| e.form() == d || e.form() == neg))
                .ok_or_else(|| CaseError::UnmappedPair(format!("({},{})", expr_name(s), expr_name(t))))?;
            let (l, r) = event.sides();
            let (lhs, rhs) = if (l, r) == (t, s) { (t, s) } else { (s, t) };
            let _ = r;
            out.push(UndeterminedPair { lhs, rhs, event });
        }
    }
    Ok(out)
}

fn rank(rows: &[[i64; ARITY]]) -> usize {
    let mut m: Vec<Vec<Q>> = rows
        .iter()
        .map(|r| r.iter().map(|&v| Q::from_integer(v.into())).collect())
        .collect();
    let mut r = 0;
    for col in 0..ARITY {
        let Some(p) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in 0..m.len() {
            if i != r && !m[i][col].is_zero() {
                let f = &m[i][col] / &m[r][col];
                for c in 0..ARITY {
                    let t = &f * &m[r][c];
                    m[i][c] -= t;
                }
            }
        }
        r += 1;
    }
    r
}

/// Merges expressions whose difference is a combination of the event
/// equations, then checks that distinct classes cannot coincide.
pub fn relabel(events: EventSet) -> Result<RecordTable, CaseError> {
    let events = events.closed();
    let system = combo_system(events);
    if feasible(&system).is_none() {
        return Err(CaseError::Infeasible(events.paren()));
    }
    let forms: Vec<[i64; ARITY]> = events.codes().iter().map(|c| c.form()).collect();
    let base_rank = rank(&forms);
    let exprs = all_exprs();
    let mut classes: Vec<Vec<u8>> = Vec::new();
    for &e in &exprs {
        let home = classes.iter().position(|cls| {
            let mut with = forms.clone();
            with.push(diff_form(cls[0], e));
            rank(&with) == base_rank
        });
        match home {
            Some(k) => classes[k].push(e),
            None => classes.push(vec![e]),
        }
    }
    for (i, a) in classes.iter().enumerate() {
        for b in &classes[i + 1..] {
            let sys = system
                .clone()
                .with(Constraint::new(&diff_form(a[0], b[0]), 0, Rel::Eq));
            if feasible(&sys).is_some() {
                return Err(CaseError::ClassesNotSeparated(
                    expr_name(a[0]),
                    expr_name(b[0]),
                ));
            }
        }
    }
    let class_of = classes
        .iter()
        .enumerate()
        .flat_map(|(k, cls)| cls.iter().map(move |&e| (e, k)))
        .collect();
    Ok(RecordTable {
        events,
        records: record_masks(),
        classes,
        class_of,
    })
}

/// Table 4 as printed, for the combination (A1,A2,C1,C2,E).
pub const PRINTED_TABLE4: [[&str; 3]; 24] = [
    ["a1", "j1", "j4"],
    ["a1", "j1", "j2"],
    ["a1", "j3", "j4"],
    ["a1", "j3", "a1+a3+a4"],
    ["a1", "j5", "j2"],
    ["a1", "j5", "a1+a3+a4"],
    ["a2", "j1", "j4"],
    ["a2", "j1", "j2"],
    ["a2", "j5", "j4"],
    ["a2", "j5", "a2+a3+a4"],
    ["a2", "j4", "j2"],
    ["a2", "j4", "a2+a3+a4"],
    ["j1", "j3", "j4"],
    ["j1", "j3", "a1+a3+a4"],
    ["j1", "j5", "j4"],
    ["j1", "j5", "a2+a3+a4"],
    ["j1", "j2", "a1+a3+a4"],
    ["j1", "j2", "a2+a3+a4"],
    ["j3", "j5", "j2"],
    ["j3", "j5", "a1+a3+a4"],
    ["j3", "j4", "j2"],
    ["j3", "j4", "a2+a3+a4"],
    ["j3", "j2", "a1+a3+a4"],
    ["j3", "j2", "a2+a3+a4"],
];

/// Whether `table`'s class pattern equals `labels` up to a bijective renaming.
/// Returns the first conflicting row (1-based) otherwise.
pub fn same_pattern(table: &RecordTable, labels: &[[&str; 3]]) -> Result<(), usize> {
    let mut fwd: BTreeMap<usize, &str> = BTreeMap::new();
    let mut back: BTreeMap<&str, usize> = BTreeMap::new();
    if labels.len() != table.records.len() {
        return Err(labels.len().min(table.records.len()) + 1);
    }
    for (i, (row, lab)) in table.class_rows().iter().zip(labels).enumerate() {
        for k in 0..3 {
            let ok_f = *fwd.entry(row[k]).or_insert(lab[k]) == lab[k];
            let ok_b = *back.entry(lab[k]).or_insert(row[k]) == row[k];
            if !ok_f || !ok_b {
                return Err(i + 1);
            }
        }
    }
    Ok(())
}

/// Smallest set of at most three classes meeting every record, if any.
pub fn blocking_cover_search(events: EventSet) -> Result<Option<Vec<usize>>, CaseError> {
    let table = relabel(events)?;
    Ok(cover_of(&table))
}

fn cover_of(table: &RecordTable) -> Option<Vec<usize>> {
    let rows = table.class_rows();
    let k = table.classes.len();
    let hits = |chosen: &[usize]| rows.iter().all(|r| r.iter().any(|c| chosen.contains(c)));
    for size in 1..=3 {
        let mut idx: Vec<usize> = (0..size).collect();
        if size > k {
            break;
        }
        loop {
            if hits(&idx) {
                return Some(idx);
            }
            // next combination
            let mut i = size;
            while i > 0 && idx[i - 1] == k - size + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            idx[i - 1] += 1;
            for j in i..size {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    None
}

/// One line of the combination report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComboReport {
    pub events: EventSet,
    pub witness: Vec<Q>,
    pub classes: usize,
    pub cover: Option<Vec<String>>,
    pub listed: bool,
}

impl fmt::Display for ComboReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cover = match &self.cover {
            None => "NONE".to_string(),
            Some(c) => c.join(";"),
        };
        let w: Vec<String> = self.witness.iter().map(ToString::to_string).collect();
        write!(
            f,
            "COMBO {} cover={} classes={} witness=({}){}",
            self.events.paren(),
            cover,
            self.classes,
            w.join(","),
            if self.listed { "" } else { " unlisted" }
        )
    }
}

/// Cover search over every feasible combination.
pub fn combo_reports() -> Result<Vec<ComboReport>, CaseError> {
    let printed = printed_combos();
    enumerate_feasible_combos()
        .into_iter()
        .map(|c| {
            let table = relabel(c.events)?;
            let cover = cover_of(&table)
                .map(|ids| ids.iter().map(|&i| table.class_name(i)).collect());
            Ok(ComboReport {
                events: c.events,
                witness: c.witness,
                classes: table.classes.len(),
                cover,
                listed: printed.contains(&c.events),
            })
        })
        .collect()
}
