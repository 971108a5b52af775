//! Instances of the jump-ordering problem and the constructive inductive solver.
//!
//! The solver always takes the largest remaining length `a` and splits on how
//! it sits relative to the sorted blocked points:
//!
//! * (a) `a < m_1`: recurse with `m_1` omitted, then repair a landing on `m_1`
//!   by swapping the first jump with the one after the landing.
//! * (b) `a = m_1`: recurse past `m_1`, then swap the first two jumps.
//! * (c) `a` strictly inside the blocked range but not blocked: recurse on the
//!   points beyond `a`.
//! * (d) `a` beyond every blocked point: nothing left to avoid.
//! * (e) `a = m_j`, `j ≥ 2`: open with `(a_g, a)` for the smallest suitable
//!   `a_g` and recurse past `a_g + a`.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("value {0} is not positive")]
    NonPositive(String),
    #[error("length {0} occurs more than once")]
    DuplicateLength(String),
    #[error("blocked point {0} occurs more than once")]
    DuplicateBlocked(String),
    #[error("expected {expected} blocked points for {lengths} lengths, got {got}")]
    BlockedCount {
        lengths: usize,
        expected: usize,
        got: usize,
    },
    #[error("the total {0} is a blocked point")]
    SumBlocked(String),
    #[error("no lengths given")]
    Empty,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl InstanceError {
    /// Stable short code, one per variant.
    pub fn code(&self) -> &'static str {
        match self {
            InstanceError::NonPositive(_) => "nonpositive",
            InstanceError::DuplicateLength(_) => "duplicate-length",
            InstanceError::DuplicateBlocked(_) => "duplicate-blocked",
            InstanceError::BlockedCount { .. } => "blocked-count",
            InstanceError::SumBlocked(_) => "sum-blocked",
            InstanceError::Empty => "empty",
            InstanceError::Parse { .. } => "parse",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("order {0} is not a permutation of the lengths")]
    NotPermutation(String),
    #[error("solver defect: {0}")]
    Defect(String),
}

/// Parses `p/q` or a plain integer.
pub fn parse_rational(text: &str) -> Result<BigRational, String> {
    let t = text.trim();
    if t.is_empty() {
        return Err("empty number".into());
    }
    if let Some((_, d)) = t.split_once('/') {
        if d.trim().chars().all(|c| c == '0') {
            return Err(format!("zero denominator in {t:?}"));
        }
    }
    BigRational::from_str(t).map_err(|_| format!("not a rational number: {t:?}"))
}

/// Parses a comma-separated list of rationals. An empty string is an empty list.
pub fn parse_list(text: &str) -> Result<Vec<BigRational>, String> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',').map(parse_rational).collect()
}

fn join(values: &[BigRational]) -> String {
    values
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

/// Unchecked input as read from flags or a file.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RawInstance {
    pub lengths: Vec<BigRational>,
    pub blocked: Vec<BigRational>,
}

/// Whether a blocked point equal to the total is an error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SumPolicy {
    Reject,
    /// The final landing is not a proper prefix, so such a point is harmless.
    Allow,
}

impl RawInstance {
    pub fn new(lengths: Vec<BigRational>, blocked: Vec<BigRational>) -> Self {
        RawInstance { lengths, blocked }
    }

    pub fn from_ints(lengths: &[i64], blocked: &[i64]) -> Self {
        let q = |v: &[i64]| v.iter().map(|&x| BigRational::from_integer(x.into())).collect();
        RawInstance {
            lengths: q(lengths),
            blocked: q(blocked),
        }
    }

    /// Reads the two-line format `lengths: …` / `blocked: …`. Lines starting
    /// with `#` and blank lines are skipped.
    pub fn parse(text: &str) -> Result<Self, InstanceError> {
        let mut lengths = None;
        let mut blocked = None;
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: String| InstanceError::Parse { line: i + 1, msg };
            let (key, rest) = line
                .split_once(':')
                .ok_or_else(|| err("expected `key: values`".into()))?;
            let slot = match key.trim() {
                "lengths" => &mut lengths,
                "blocked" => &mut blocked,
                other => return Err(err(format!("unknown key {other:?}"))),
            };
            if slot.is_some() {
                return Err(err(format!("repeated key {:?}", key.trim())));
            }
            *slot = Some(parse_list(rest).map_err(err)?);
        }
        let missing = |k: &str| InstanceError::Parse {
            line: 0,
            msg: format!("missing `{k}:` line"),
        };
        Ok(RawInstance {
            lengths: lengths.ok_or_else(|| missing("lengths"))?,
            blocked: blocked.ok_or_else(|| missing("blocked"))?,
        })
    }

    pub fn validate(self) -> Result<Instance, InstanceError> {
        self.validate_with(SumPolicy::Reject)
    }

    pub fn validate_with(self, policy: SumPolicy) -> Result<Instance, InstanceError> {
        if self.lengths.is_empty() {
            return Err(InstanceError::Empty);
        }
        if let Some(v) = self
            .lengths
            .iter()
            .chain(&self.blocked)
            .find(|v| !v.is_positive())
        {
            return Err(InstanceError::NonPositive(v.to_string()));
        }
        if let Some(v) = first_duplicate(&self.lengths) {
            return Err(InstanceError::DuplicateLength(v.to_string()));
        }
        if let Some(v) = first_duplicate(&self.blocked) {
            return Err(InstanceError::DuplicateBlocked(v.to_string()));
        }
        let n = self.lengths.len();
        if self.blocked.len() != n - 1 {
            return Err(InstanceError::BlockedCount {
                lengths: n,
                expected: n - 1,
                got: self.blocked.len(),
            });
        }
        let sum: BigRational = self.lengths.iter().sum();
        if policy == SumPolicy::Reject && self.blocked.contains(&sum) {
            return Err(InstanceError::SumBlocked(sum.to_string()));
        }
        let mut blocked = self.blocked;
        blocked.sort();
        Ok(Instance {
            lengths: self.lengths,
            blocked,
            sum,
        })
    }
}

fn first_duplicate(values: &[BigRational]) -> Option<&BigRational> {
    let mut sorted: Vec<&BigRational> = values.iter().collect();
    sorted.sort();
    sorted.windows(2).find(|w| w[0] == w[1]).map(|w| w[0])
}

/// A validated instance. Lengths keep their input order; blocked points are sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    lengths: Vec<BigRational>,
    blocked: Vec<BigRational>,
    sum: BigRational,
}

impl Instance {
    pub fn lengths(&self) -> &[BigRational] {
        &self.lengths
    }

    pub fn blocked(&self) -> &[BigRational] {
        &self.blocked
    }

    pub fn sum(&self) -> &BigRational {
        &self.sum
    }

    pub fn n(&self) -> usize {
        self.lengths.len()
    }

    /// Multiplies every length and blocked point by `q > 0`.
    pub fn scaled(&self, q: &BigRational) -> Instance {
        assert!(q.is_positive(), "scale factor must be positive");
        Instance {
            lengths: self.lengths.iter().map(|v| v * q).collect(),
            blocked: self.blocked.iter().map(|v| v * q).collect(),
            sum: &self.sum * q,
        }
    }

    /// True when some proper prefix of `order` lands on a blocked point.
    fn hits(&self, order: &[BigRational]) -> bool {
        let mut pos = BigRational::zero();
        for step in &order[..order.len().saturating_sub(1)] {
            pos += step;
            if self.blocked.binary_search(&pos).is_ok() {
                return true;
            }
        }
        false
    }
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "lengths: {}\nblocked: {}",
            join(&self.lengths).replace(',', ", "),
            join(&self.blocked).replace(',', ", ")
        )
    }
}

/// An order in which to take the jumps.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JumpOrder {
    pub order: Vec<BigRational>,
}

impl JumpOrder {
    pub fn new(order: Vec<BigRational>) -> Self {
        JumpOrder { order }
    }

    pub fn from_ints(order: &[i64]) -> Self {
        JumpOrder {
            order: order.iter().map(|&x| BigRational::from_integer(x.into())).collect(),
        }
    }

    /// The running sums after each jump, the total included.
    pub fn landings(&self) -> Vec<BigRational> {
        let mut pos = BigRational::zero();
        self.order
            .iter()
            .map(|v| {
                pos += v;
                pos.clone()
            })
            .collect()
    }

    pub fn scaled(&self, q: &BigRational) -> JumpOrder {
        JumpOrder {
            order: self.order.iter().map(|v| v * q).collect(),
        }
    }
}

impl fmt::Display for JumpOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", join(&self.order))
    }
}

/// True iff `order` is a permutation of the lengths and no proper prefix sum is blocked.
pub fn verify_order(instance: &Instance, order: &JumpOrder) -> Result<bool, SolveError> {
    let mut a = instance.lengths.clone();
    let mut b = order.order.clone();
    a.sort();
    b.sort();
    if a != b {
        return Err(SolveError::NotPermutation(order.to_string()));
    }
    Ok(!instance.hits(&order.order))
}

/// Which of the five cases a recursion level took.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Case {
    /// Largest length below every blocked point; `repair` is the 1-based
    /// position `l + 1` swapped with the first jump, if a repair was needed.
    A { repair: Option<usize> },
    B,
    C,
    D,
    /// `partner` is the chosen `a_g`.
    E { partner: BigRational },
}

impl Case {
    pub fn letter(&self) -> char {
        match self {
            Case::A { .. } => 'a',
            Case::B => 'b',
            Case::C => 'c',
            Case::D => 'd',
            Case::E { .. } => 'e',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Level {
    pub case: Case,
    /// Number of lengths at this level.
    pub size: usize,
    /// Blocked points still ahead at this level.
    pub blocked: usize,
    /// Comparisons between values spent at this level.
    pub comparisons: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Trace {
    pub levels: Vec<Level>,
}

impl Trace {
    /// Number of recursion levels. Case (e) places two jumps in one level, so
    /// this is `n - 1` minus the number of (e) levels.
    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    /// Jumps placed by the levels; always `n - 1` for `n ≥ 1`.
    pub fn jumps_placed(&self) -> usize {
        self.levels
            .iter()
            .map(|l| if matches!(l.case, Case::E { .. }) { 2 } else { 1 })
            .sum()
    }

    pub fn cases(&self) -> String {
        self.levels.iter().map(|l| l.case.letter()).collect()
    }
}

/// Per-level comparison allowance for `k` lengths.
pub fn comparison_budget(k: usize) -> usize {
    4 * k * k + 8
}

struct Counter(usize);

impl Counter {
    fn cmp(&mut self, a: &BigRational, b: &BigRational) -> std::cmp::Ordering {
        self.0 += 1;
        a.cmp(b)
    }

    fn contains(&mut self, sorted: &[BigRational], v: &BigRational) -> bool {
        let mut lo = 0;
        let mut hi = sorted.len();
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.cmp(&sorted[mid], v) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return true,
            }
        }
        false
    }

    /// Blocked points beyond `t`, moved so that `t` becomes the origin.
    fn shift(&mut self, blocked: &[BigRational], t: &BigRational) -> Vec<BigRational> {
        let mut out = Vec::new();
        for b in blocked {
            if self.cmp(b, t).is_gt() {
                out.push(b - t);
            }
        }
        out
    }
}

pub fn solve(instance: &Instance) -> Result<JumpOrder, SolveError> {
    solve_traced(instance).map(|(o, _)| o)
}

/// Solves and returns the per-level trace. The result is checked before it is returned.
pub fn solve_traced(instance: &Instance) -> Result<(JumpOrder, Trace), SolveError> {
    let mut lengths = instance.lengths.clone();
    lengths.sort_by(|a, b| b.cmp(a));
    let zero = BigRational::zero();
    let blocked: Vec<BigRational> = instance
        .blocked
        .iter()
        .filter(|&b| b > &zero && b < &instance.sum)
        .cloned()
        .collect();
    let mut trace = Trace::default();
    let order = step(lengths, blocked, &mut trace)?;
    if instance.hits(&order) {
        return Err(SolveError::Defect(format!(
            "order {} lands on a blocked point",
            JumpOrder::new(order)
        )));
    }
    let n = instance.n();
    if trace.jumps_placed() != n - 1 {
        return Err(SolveError::Defect(format!(
            "placed {} jumps by recursion for n = {n}",
            trace.jumps_placed()
        )));
    }
    Ok((JumpOrder::new(order), trace))
}

/// `lengths` is sorted descending; `blocked` is sorted ascending and lies
/// strictly between 0 and the sum of `lengths`.
fn step(
    lengths: Vec<BigRational>,
    blocked: Vec<BigRational>,
    trace: &mut Trace,
) -> Result<Vec<BigRational>, SolveError> {
    let k = lengths.len();
    if k <= 1 {
        return Ok(lengths);
    }
    if blocked.len() >= k {
        return Err(SolveError::Defect(format!(
            "{} blocked points ahead of {k} jumps",
            blocked.len()
        )));
    }
    let mut c = Counter(0);
    let slot = trace.levels.len();
    trace.levels.push(Level {
        case: Case::D,
        size: k,
        blocked: blocked.len(),
        comparisons: 0,
    });
    let a1 = lengths[0].clone();
    let rest: Vec<BigRational> = lengths[1..].to_vec();

    let order = if blocked.is_empty() || c.cmp(&a1, blocked.last().unwrap()).is_gt() {
        let sub_blocked = c.shift(&blocked, &a1);
        finish(trace, slot, Case::D, &c)?;
        let mut order = vec![a1];
        order.extend(step(rest, sub_blocked, trace)?);
        order
    } else if c.cmp(&a1, &blocked[0]).is_lt() {
        let sub_blocked = c.shift(&blocked[1..], &a1);
        let sub = step(rest, sub_blocked, trace)?;
        let mut order = vec![a1.clone()];
        order.extend(sub);
        // the prefix through position l lands on m_1: swap positions 1 and l+1
        let mut pos = a1;
        let mut repair = None;
        for l in 2..k {
            pos += &order[l - 1];
            match c.cmp(&pos, &blocked[0]) {
                std::cmp::Ordering::Equal => {
                    order.swap(0, l);
                    repair = Some(l + 1);
                    break;
                }
                std::cmp::Ordering::Greater => break,
                std::cmp::Ordering::Less => {}
            }
        }
        finish(trace, slot, Case::A { repair }, &c)?;
        order
    } else if c.cmp(&a1, &blocked[0]).is_eq() {
        let sub_blocked = c.shift(&blocked[1..], &a1);
        finish(trace, slot, Case::B, &c)?;
        let sub = step(rest, sub_blocked, trace)?;
        let mut order = vec![a1];
        order.extend(sub);
        order.swap(0, 1);
        order
    } else if c.contains(&blocked, &a1) {
        let mut partner = None;
        for (idx, g) in rest.iter().enumerate().rev() {
            if !c.contains(&blocked, g) && !c.contains(&blocked, &(g + &a1)) {
                partner = Some(idx);
                break;
            }
        }
        let idx = partner.ok_or_else(|| {
            SolveError::Defect(format!("no partner for {a1} among {}", join(&rest)))
        })?;
        let mut rest = rest;
        let g = rest.remove(idx);
        let landing = &g + &a1;
        let sub_blocked = c.shift(&blocked, &landing);
        finish(trace, slot, Case::E { partner: g.clone() }, &c)?;
        let mut order = vec![g, a1];
        order.extend(step(rest, sub_blocked, trace)?);
        order
    } else {
        let sub_blocked = c.shift(&blocked, &a1);
        finish(trace, slot, Case::C, &c)?;
        let mut order = vec![a1];
        order.extend(step(rest, sub_blocked, trace)?);
        order
    };
    Ok(order)
}

/// Stores the case and comparison count of a level and enforces the budget.
fn finish(trace: &mut Trace, slot: usize, case: Case, c: &Counter) -> Result<(), SolveError> {
    let level = &mut trace.levels[slot];
    level.case = case;
    level.comparisons = c.0;
    if c.0 > comparison_budget(level.size) {
        return Err(SolveError::Defect(format!(
            "level {} spent {} comparisons, budget {}",
            slot,
            c.0,
            comparison_budget(level.size)
        )));
    }
    Ok(())
}
