//! The blocking polynomial `f`, its signed permutation sum and the
//! factorizations, coefficients and Nullstellensatz hypotheses checked on them.
//!
//! For arity `n`, `f(x_1..x_n) = ∏_{l<n} ∏_{i<n} ((x_1+…+x_l) - m_i)`. It is
//! nonzero at a jump order exactly when no proper prefix sum hits a blocked
//! point. The signed sum `F_n = Σ_π sgn(π) f(x_π)` is antisymmetric in the
//! `x`-block and therefore a multiple of the Vandermonde product.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::permgroup::{self, Permutation};
use crate::polyring::{parse, Monomial, PolyError, Polynomial, VarSpace};

/// Largest arity for which [`build_f`] is defined.
pub const MAX_F_ARITY: usize = 6;
/// Largest arity for which [`antisymmetrize`] runs without an explicit opt-in.
pub const MAX_ANTISYM_ARITY: usize = 5;

/// Reference coefficients for the `n = 5` quotient, one term per line.
pub const REFERENCE_Q5: &str = include_str!("../data/q5_reference.txt");

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NullError {
    #[error("arity {got} outside {min}..={max}")]
    ArityOutOfRange { got: usize, min: usize, max: usize },
    #[error("invalid index list {0:?}")]
    BadIndices(Vec<usize>),
    #[error("{0} does not divide exactly")]
    NotDivisible(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

fn check_arity(n: usize, min: usize, max: usize) -> Result<VarSpace, NullError> {
    if n < min || n > max {
        return Err(NullError::ArityOutOfRange { got: n, min, max });
    }
    Ok(VarSpace::new(n)?)
}

/// Parses a fixed literal; only used for expressions written in this module.
fn lit(text: &str, space: VarSpace) -> Polynomial {
    parse(text, space).unwrap_or_else(|e| panic!("bad literal {text:?}: {e}"))
}

fn product_of(texts: &[&str], space: VarSpace) -> Polynomial {
    texts
        .iter()
        .fold(Polynomial::one(space), |acc, t| &acc * &lit(t, space))
}

/// `x_1 + … + x_n`.
pub fn sum_x(space: VarSpace) -> Polynomial {
    (1..=space.n()).fold(Polynomial::zero(space), |acc, i| {
        &acc + &Polynomial::x(space, i)
    })
}

/// `m_1 + … + m_{n-1}`.
pub fn sum_m(space: VarSpace) -> Polynomial {
    (1..space.n()).fold(Polynomial::zero(space), |acc, j| {
        &acc + &Polynomial::m(space, j)
    })
}

/// `α·Σx - β·Σm`.
pub fn linear_sum_form(space: VarSpace, alpha: i64, beta: i64) -> Polynomial {
    &sum_x(space).scale(&alpha.into()) - &sum_m(space).scale(&beta.into())
}

/// `f` for arity `n`, expanded.
pub fn build_f(n: usize) -> Result<Polynomial, NullError> {
    let space = check_arity(n, 2, MAX_F_ARITY)?;
    let order: Vec<usize> = (1..=n).collect();
    Ok(f_at(space, &order))
}

/// `f(x_{o_1}, …, x_{o_n})` for a one-based order `o`, built from its factors.
fn f_at(space: VarSpace, order: &[usize]) -> Polynomial {
    let n = space.n();
    let mut prefix = Polynomial::zero(space);
    let mut acc = Polynomial::one(space);
    for &idx in &order[..n - 1] {
        prefix = &prefix + &Polynomial::x(space, idx);
        for j in 1..n {
            acc = &acc * &(&prefix - &Polynomial::m(space, j));
        }
    }
    acc
}

/// `∏_{k<j} (x_k - x_j)` over the one-based `indices`, in the given order.
pub fn vandermonde(space: VarSpace, indices: &[usize]) -> Result<Polynomial, NullError> {
    let mut seen = vec![false; space.n() + 1];
    for &i in indices {
        if i == 0 || i > space.n() || seen[i] {
            return Err(NullError::BadIndices(indices.to_vec()));
        }
        seen[i] = true;
    }
    if indices.len() < 2 {
        return Err(NullError::BadIndices(indices.to_vec()));
    }
    let mut acc = Polynomial::one(space);
    for (k, &a) in indices.iter().enumerate() {
        for &b in &indices[k + 1..] {
            acc = &acc * &(&Polynomial::x(space, a) - &Polynomial::x(space, b));
        }
    }
    Ok(acc)
}

/// Vandermonde product over all `n` jump variables.
pub fn full_vandermonde(space: VarSpace) -> Polynomial {
    let all: Vec<usize> = (1..=space.n()).collect();
    vandermonde(space, &all).expect("n >= 2")
}

/// `Σ_{π ∈ Sym(n)} sgn(π)·f(x_{π(1)}, …, x_{π(n)})` for `2 <= n <= 5`.
pub fn antisymmetrize(n: usize) -> Result<Polynomial, NullError> {
    antisymmetrize_with_limit(n, MAX_ANTISYM_ARITY)
}

/// [`antisymmetrize`] with a caller-chosen arity ceiling (at most 6).
pub fn antisymmetrize_with_limit(n: usize, max: usize) -> Result<Polynomial, NullError> {
    check_arity(n, 2, max.min(MAX_F_ARITY))?;
    if n <= MAX_ANTISYM_ARITY {
        return Ok(cached(&ANTISYM, n, || signed_sum(n)).clone());
    }
    Ok(signed_sum(n))
}

static ANTISYM: [OnceLock<Polynomial>; MAX_ANTISYM_ARITY + 1] =
    [const { OnceLock::new() }; MAX_ANTISYM_ARITY + 1];
static QUOTIENT: [OnceLock<Polynomial>; MAX_ANTISYM_ARITY + 1] =
    [const { OnceLock::new() }; MAX_ANTISYM_ARITY + 1];

fn cached(
    slots: &[OnceLock<Polynomial>],
    n: usize,
    init: impl FnOnce() -> Polynomial,
) -> &Polynomial {
    slots[n].get_or_init(init)
}

fn signed_sum(n: usize) -> Polynomial {
    let space = VarSpace::new(n).expect("n >= 2");
    let f = f_at(space, &(1..=n).collect::<Vec<_>>());
    let perms = permgroup::enumerate(n).expect("n within permutation range");
    let acc = perms
        .par_iter()
        .fold(HashMap::<Monomial, BigInt>::new, |mut acc, pi| {
            let negate = pi.sign() < 0;
            for (m, c) in f.terms() {
                let e = acc.entry(m.rename_x(pi, n)).or_insert_with(BigInt::zero);
                if negate {
                    *e -= c;
                } else {
                    *e += c;
                }
            }
            acc
        })
        .reduce(HashMap::new, |mut a, b| {
            let (mut big, small) = if a.len() >= b.len() { (a, b) } else { (b, a) };
            for (m, c) in small {
                *big.entry(m).or_insert_with(BigInt::zero) += c;
            }
            a = big;
            a
        });
    Polynomial::from_hash(space, acc)
}

/// `f` at the one-based order `prefix` minus `f` at the same order with its
/// last two entries exchanged.
pub fn pair_difference(n: usize, prefix: &[usize]) -> Result<Polynomial, NullError> {
    let space = check_arity(n, 2, MAX_F_ARITY)?;
    if prefix.len() != n || Permutation::from_one_based(prefix).is_err() {
        return Err(NullError::BadIndices(prefix.to_vec()));
    }
    let mut swapped = prefix.to_vec();
    swapped.swap(n - 2, n - 1);
    Ok(&f_at(space, prefix) - &f_at(space, &swapped))
}

/// `F_n` divided by the full Vandermonde product, for `2 <= n <= 5`.
pub fn quotient_by_vandermonde(n: usize) -> Result<Polynomial, NullError> {
    check_arity(n, 2, MAX_ANTISYM_ARITY)?;
    if let Some(q) = QUOTIENT[n].get() {
        return Ok(q.clone());
    }
    let space = VarSpace::new(n)?;
    let sum = antisymmetrize(n)?;
    let q = sum
        .try_exact_divide(&full_vandermonde(space))?
        .ok_or_else(|| NullError::NotDivisible(format!("Vandermonde product for n={n}")))?;
    Ok(QUOTIENT[n].get_or_init(|| q).clone())
}

/// The quadratic cofactor `Q₄` with `F_4 = V₄ · (3Σx - 2Σm) · Q₄`.
pub fn q4() -> Result<Polynomial, NullError> {
    let space = VarSpace::new(4)?;
    quotient_by_vandermonde(4)?
        .try_exact_divide(&linear_sum_form(space, 3, 2))?
        .ok_or_else(|| NullError::NotDivisible("3Σx - 2Σm".into()))
}

/// Coprime pairs `(α, β)` in `1..=bound` for which `α·Σx - β·Σm` divides the
/// Vandermonde quotient exactly.
pub fn linear_sum_factor_scan(n: usize, bound: i64) -> Result<Vec<(i64, i64)>, NullError> {
    let space = check_arity(n, 2, MAX_ANTISYM_ARITY)?;
    let q = quotient_by_vandermonde(n)?;
    let mut hits = Vec::new();
    for alpha in 1..=bound {
        for beta in 1..=bound {
            if alpha.gcd(&beta) != 1 {
                continue;
            }
            if q.try_exact_divide(&linear_sum_form(space, alpha, beta))?.is_some() {
                hits.push((alpha, beta));
            }
        }
    }
    Ok(hits)
}

fn point(a: &[BigRational], m: &[BigRational]) -> Vec<BigRational> {
    a.iter().chain(m).cloned().collect()
}

/// Whether `(a, m)` lies on the zero set of the non-Vandermonde factor:
/// `Σa = m_1 + m_2` for `n = 3`, `(3Σa - 2Σm)·Q₄(a, m) = 0` for `n = 4`.
pub fn is_singular(n: usize, a: &[BigRational], m: &[BigRational]) -> Result<bool, NullError> {
    if n != 3 && n != 4 {
        return Err(NullError::ArityOutOfRange { got: n, min: 3, max: 4 });
    }
    if a.len() != n || m.len() != n - 1 {
        return Err(PolyError::WrongArity {
            expected: 2 * n - 1,
            got: a.len() + m.len(),
        }
        .into());
    }
    let sa: BigRational = a.iter().sum();
    let sm: BigRational = m.iter().sum();
    if n == 3 {
        return Ok(sa == sm);
    }
    let three = BigRational::from_integer(3.into());
    let two = BigRational::from_integer(2.into());
    let linear = three * sa - two * sm;
    Ok(linear.is_zero() || q4()?.evaluate(&point(a, m))?.is_zero())
}

/// Outcome of checking the hypotheses of the nonvanishing Nullstellensatz.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lemma1Report {
    pub total_degree: Option<u32>,
    pub target_degree: u32,
    pub degree_matches: bool,
    pub coefficient: BigInt,
    pub coefficient_nonzero: bool,
    pub sizes_ok: bool,
    /// Slots beyond the given sets that still occur in the polynomial.
    pub stray_slots: Vec<usize>,
    /// First point of `S_1 × … × S_k` (lexicographic) where the polynomial is
    /// nonzero; searched only when every hypothesis holds.
    pub witness: Option<Vec<BigRational>>,
}

impl Lemma1Report {
    pub fn hypotheses_hold(&self) -> bool {
        self.degree_matches && self.coefficient_nonzero && self.sizes_ok && self.stray_slots.is_empty()
    }
}

/// Checks the Nullstellensatz hypotheses for `p` with one set per leading
/// slot and target exponents `t`, and searches for a nonvanishing point.
///
/// Slots past `sets.len()` must not occur in `p`; they are set to zero while
/// evaluating.
pub fn lemma1_check(p: &Polynomial, sets: &[Vec<BigRational>], t: &[u16]) -> Lemma1Report {
    let arity = p.space().arity();
    let k = sets.len().min(t.len()).min(arity);
    let target_degree: u32 = t.iter().map(|&e| e as u32).sum();
    let total_degree = p.total_degree();
    let mut exps = vec![0u16; arity];
    exps[..k].copy_from_slice(&t[..k]);
    let coefficient = p.coefficient_of(&Monomial::from_exponents(&exps));
    let sizes_ok = sets.len() == t.len()
        && t.len() <= arity
        && sets.iter().zip(t).all(|(s, &ti)| !s.is_empty() && (ti as usize) < s.len());
    let stray_slots = (k..arity).filter(|&s| p.degree_in(s) > 0).collect();
    let mut report = Lemma1Report {
        degree_matches: total_degree == Some(target_degree),
        total_degree,
        target_degree,
        coefficient_nonzero: !coefficient.is_zero(),
        coefficient,
        sizes_ok,
        stray_slots,
        witness: None,
    };
    if report.hypotheses_hold() {
        report.witness = find_nonzero_point(p, &sets[..k]);
    }
    report
}

fn find_nonzero_point(p: &Polynomial, sets: &[Vec<BigRational>]) -> Option<Vec<BigRational>> {
    let arity = p.space().arity();
    let mut idx = vec![0usize; sets.len()];
    loop {
        let mut pt: Vec<BigRational> = idx.iter().zip(sets).map(|(&i, s)| s[i].clone()).collect();
        pt.resize(arity, BigRational::zero());
        if !p.evaluate(&pt).ok()?.is_zero() {
            pt.truncate(sets.len());
            return Some(pt);
        }
        let mut pos = sets.len();
        loop {
            if pos == 0 {
                return None;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < sets[pos].len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// True when every term of `F_3` of `x`-degree 4 has an `x`-exponent of at
/// least 3, so no admissible target exponent with `t_i < 3` exists.
pub fn unsuitable_monomial_audit() -> Result<bool, NullError> {
    let f3 = antisymmetrize(3)?;
    let all_high = f3
        .terms()
        .filter(|(m, _)| m.x_degree(3) == 4)
        .all(|(m, _)| m.exponents()[..3].iter().any(|&e| e >= 3));
    Ok(all_high)
}

/// One verification line, printed as `CHECK <name> PASS|FAIL <detail>`.
/// Informational lines (`NOTE`) never count as failures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub status: CheckStatus,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    Note,
}

impl Check {
    fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            status: if passed { CheckStatus::Pass } else { CheckStatus::Fail },
            detail: detail.into(),
        }
    }

    fn note(name: &str, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            status: CheckStatus::Note,
            detail: detail.into(),
        }
    }

    pub fn failed(&self) -> bool {
        self.status == CheckStatus::Fail
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.status {
            CheckStatus::Pass => write!(f, "CHECK {} PASS {}", self.name, self.detail),
            CheckStatus::Fail => write!(f, "CHECK {} FAIL {}", self.name, self.detail),
            CheckStatus::Note => write!(f, "NOTE {} {}", self.name, self.detail),
        }
    }
}

/// The difference identities for `n = 3` with the exchanged-variable factor
/// restored: `f(x_i,x_j,x_k) - f(x_i,x_k,x_j)`.
pub fn corrected_pair_identity_n3(order: [usize; 3]) -> Polynomial {
    let space = VarSpace::new(3).expect("n = 3");
    let [i, j, k] = order;
    let lead = format!("x{i}");
    product_of(
        &[
            &format!("{lead} - m1"),
            &format!("{lead} - m2"),
            &format!("x{j} - x{k}"),
            &format!("2*{lead} + x{j} + x{k} - m1 - m2"),
        ],
        space,
    )
}

/// Right-hand side of the printed `n = 4` pair identity at the order `o`.
pub fn pair_identity_n4(o: [usize; 4]) -> Polynomial {
    let space = VarSpace::new(4).expect("n = 4");
    let [a, b, c, d] = o.map(|i| format!("x{i}"));
    let quad = format!(
        "3*{a}^2 + 3*{b}^2 + {c}^2 + {d}^2 + 6*{a}*{b} + 3*{a}*{c} + 3*{a}*{d} + 3*{b}*{c} + 3*{b}*{d} + {c}*{d} \
         - 2*m1*{a} - 2*m2*{a} - 2*m3*{a} - 2*m1*{b} - 2*m2*{b} - 2*m3*{b} \
         - m1*{c} - m2*{c} - m3*{c} - m1*{d} - m2*{d} - m3*{d} + m1*m2 + m1*m3 + m2*m3"
    );
    product_of(
        &[
            &format!("{a} - m1"),
            &format!("{a} - m2"),
            &format!("{a} - m3"),
            &format!("{a} + {b} - m1"),
            &format!("{a} + {b} - m2"),
            &format!("{a} + {b} - m3"),
            &format!("{c} - {d}"),
            &quad,
        ],
        space,
    )
}

/// The quadratic cofactor exactly as printed, which mentions a fourth blocked
/// point; held in the arity-5 space so that `m4` is representable.
pub fn printed_q4() -> Polynomial {
    let space = VarSpace::new(5).expect("n = 5");
    lit(
        "6*x1^2 + 6*x2^2 + 6*x3^2 + 6*x4^2 \
         + 8*m1*m2 + 8*m1*m3 + 8*m1*m4 + 8*m2*m3 + 8*m2*m4 + 8*m3*m4 \
         - 7*m1*x1 - 7*m1*x2 - 7*m1*x3 - 7*m1*x4 - 7*m2*x1 - 7*m2*x2 - 7*m2*x3 - 7*m2*x4 \
         - 7*m3*x1 - 7*m3*x2 - 7*m3*x3 - 7*m3*x4 \
         + m1^2 + m2^2 + m3^2 + 6*m1*m2 + 6*m2*m3 + 6*m3*m1",
        space,
    )
}

/// The printed cofactor with its pairwise products read over the jump
/// variables instead of the blocked points.
pub fn q4_pairwise_x_reading() -> Polynomial {
    let space = VarSpace::new(4).expect("n = 4");
    lit(
        "6*x1^2 + 6*x2^2 + 6*x3^2 + 6*x4^2 \
         + 8*x1*x2 + 8*x1*x3 + 8*x1*x4 + 8*x2*x3 + 8*x2*x4 + 8*x3*x4 \
         - 7*m1*x1 - 7*m1*x2 - 7*m1*x3 - 7*m1*x4 - 7*m2*x1 - 7*m2*x2 - 7*m2*x3 - 7*m2*x4 \
         - 7*m3*x1 - 7*m3*x2 - 7*m3*x3 - 7*m3*x4 \
         + m1^2 + m2^2 + m3^2 + 6*m1*m2 + 6*m2*m3 + 6*m3*m1",
        space,
    )
}

/// Parses [`REFERENCE_Q5`] into `(monomial, coefficient)` entries in file order.
pub fn reference_q5_terms() -> Result<Vec<(Monomial, BigInt)>, NullError> {
    let space = VarSpace::new(5)?;
    let mut out = Vec::new();
    for line in REFERENCE_Q5.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let p = parse(line, space)?;
        let (m, c) = p.leading_term().expect("reference terms are nonzero");
        out.push((m.clone(), c.clone()));
    }
    Ok(out)
}

fn is_x_symmetric(p: &Polynomial) -> Result<bool, NullError> {
    let n = p.space().n();
    for i in 1..n {
        let tau = Permutation::transposition(n, i, i + 1).expect("in range");
        if &p.rename_vars(&tau)? != p {
            return Ok(false);
        }
    }
    Ok(true)
}

fn is_x_antisymmetric(p: &Polynomial) -> Result<bool, NullError> {
    let n = p.space().n();
    for i in 1..n {
        let tau = Permutation::transposition(n, i, i + 1).expect("in range");
        if p.rename_vars(&tau)? != -p {
            return Ok(false);
        }
    }
    Ok(true)
}

fn deg_text(p: &Polynomial) -> String {
    p.total_degree().map_or("-".into(), |d| d.to_string())
}

fn ints(v: &[i64]) -> Vec<BigRational> {
    v.iter().map(|&x| BigRational::from_integer(x.into())).collect()
}

/// Runs every factorization and coefficient check available for `n`.
pub fn factor_checks(n: usize) -> Result<Vec<Check>, NullError> {
    match n {
        3 => checks_n3(),
        4 => checks_n4(),
        5 => checks_n5(),
        _ => Err(NullError::ArityOutOfRange { got: n, min: 3, max: 5 }),
    }
}

fn checks_n3() -> Result<Vec<Check>, NullError> {
    let space = VarSpace::new(3)?;
    let mut out = Vec::new();

    let f3 = build_f(3)?;
    let x1sq_x2sq = Monomial::from_exponents(&[2, 2, 0, 0, 0]);
    out.push(Check::new(
        "f3-degree",
        f3.total_degree() == Some(4) && f3.coefficient_of(&x1sq_x2sq).is_one(),
        format!(
            "deg={} coeff(x1^2*x2^2)={}",
            deg_text(&f3),
            f3.coefficient_of(&x1sq_x2sq)
        ),
    ));

    let sum = antisymmetrize(3)?;
    let product = product_of(
        &["x1 - x2", "x1 - x3", "x2 - x3", "x1 + x2 + x3 - m1 - m2"],
        space,
    );
    let two = BigInt::from(2);
    out.push(Check::new(
        "n3-product",
        sum == product,
        format!("terms={} computed-equals-twice-product={}", sum.len(), sum == product.scale(&two)),
    ));
    out.push(Check::new(
        "n3-product-content",
        sum == product.scale(&two) && sum.primitive_part() == product.primitive_part(),
        "F3 = 2*(x1-x2)(x1-x3)(x2-x3)(x1+x2+x3-m1-m2)",
    ));

    for (name, order) in [("pair-123", [1, 2, 3]), ("pair-213", [2, 1, 3]), ("pair-312", [3, 1, 2])] {
        let lhs = pair_difference(3, &order)?;
        let rhs = corrected_pair_identity_n3(order);
        out.push(Check::new(
            &format!("{name}-corrected"),
            lhs == rhs,
            format!("order=({},{},{}) with factor (x{}-x{})", order[0], order[1], order[2], order[1], order[2]),
        ));
    }

    let audit = unsuitable_monomial_audit()?;
    let x1cube_x2 = Monomial::from_exponents(&[3, 1, 0, 0, 0]);
    let c_cube = sum.coefficient_of(&x1cube_x2);
    let c_square = sum.coefficient_of(&x1sq_x2sq);
    out.push(Check::new(
        "unsuitable-monomials",
        audit && !c_cube.is_zero() && c_square.is_zero(),
        format!("audit={audit} coeff(x1^3*x2)={c_cube} coeff(x1^2*x2^2)={c_square}"),
    ));

    let q = quotient_by_vandermonde(3)?;
    out.push(Check::new(
        "quotient3",
        q == linear_sum_form(space, 2, 2),
        format!("quotient={q}"),
    ));

    let scan = linear_sum_factor_scan(3, 10)?;
    out.push(Check::new(
        "scan3",
        scan == vec![(1, 1)],
        format!("hits={scan:?}"),
    ));
    Ok(out)
}

fn checks_n4() -> Result<Vec<Check>, NullError> {
    let space = VarSpace::new(4)?;
    let mut out = Vec::new();
    let sum = antisymmetrize(4)?;
    out.push(Check::new(
        "f4-antisymmetric",
        is_x_antisymmetric(&sum)?,
        format!("terms={} deg={}", sum.len(), deg_text(&sum)),
    ));

    let by_v = sum.try_exact_divide(&full_vandermonde(space))?;
    out.push(Check::new(
        "n4-vandermonde",
        by_v.is_some(),
        "F4 / prod(x_k - x_j)",
    ));
    let q = match q4() {
        Ok(q) => q,
        Err(e) => {
            out.push(Check::new("n4-linear", false, e.to_string()));
            return Ok(out);
        }
    };
    out.push(Check::new(
        "n4-linear",
        true,
        "quotient / (3*(x1+x2+x3+x4) - 2*(m1+m2+m3)) exact",
    ));
    out.push(Check::new(
        "n4-q4-symmetric",
        is_x_symmetric(&q)?,
        format!("Q4={q}"),
    ));

    let reading = q4_pairwise_x_reading();
    let printed_diff = &printed_q4() - &q.embed(VarSpace::new(5)?)?;
    out.push(Check::note(
        "n4-printed-q4",
        format!(
            "printed-minus-computed={} ; pairwise-x reading {}",
            printed_diff,
            if reading == q { "matches" } else { "differs" }
        ),
    ));

    let a = ints(&[1, 4, 2, 3]);
    let m = ints(&[2, 3, 10]);
    let pt = point(&a, &m);
    let full = Polynomial::product(
        space,
        [&full_vandermonde(space), &linear_sum_form(space, 3, 2), &q],
    )?;
    let full_value = full.evaluate(&pt)?;
    let prefix = product_of(
        &["x1 - m1", "x1 - m2", "x1 - m3", "x1 + x2 - m1", "x1 + x2 - m2", "x1 + x2 - m3"],
        space,
    );
    let prefix_value = prefix.evaluate(&pt)?;
    let quad_value = quadratic_of_pair_identity(space).evaluate(&pt)?;
    out.push(Check::new(
        "sec3-2-point",
        full_value.is_zero()
            && sum.evaluate(&pt)?.is_zero()
            && quad_value.is_zero()
            && !prefix_value.is_zero(),
        format!(
            "F4={} quadratic={} prefix={} singular={}",
            full_value,
            quad_value,
            prefix_value,
            is_singular(4, &a, &m)?
        ),
    ));

    let pair = pair_difference(4, &[1, 2, 3, 4])?;
    out.push(Check::new(
        "n4-pair",
        pair == pair_identity_n4([1, 2, 3, 4]),
        format!("terms={}", pair.len()),
    ));

    let mut all_orders = true;
    for pi in permgroup::enumerate(4).expect("n = 4") {
        let o = pi.one_based();
        let order = [o[0], o[1], o[2], o[3]];
        if pair_difference(4, &o)? != pair_identity_n4(order) {
            all_orders = false;
        }
    }
    out.push(Check::new("n4-pair-all-orders", all_orders, "all 24 orders"));

    let scan = linear_sum_factor_scan(4, 10)?;
    out.push(Check::new(
        "scan4",
        scan == vec![(3, 2)],
        format!("hits={scan:?}"),
    ));
    Ok(out)
}

/// The quadratic last factor of the `n = 4` pair identity at the identity order.
fn quadratic_of_pair_identity(space: VarSpace) -> Polynomial {
    lit(
        "3*x1^2 + 3*x2^2 + x3^2 + x4^2 + 6*x1*x2 + 3*x1*x3 + 3*x1*x4 + 3*x2*x3 + 3*x2*x4 + x3*x4 \
         - 2*m1*x1 - 2*m2*x1 - 2*m3*x1 - 2*m1*x2 - 2*m2*x2 - 2*m3*x2 \
         - m1*x3 - m2*x3 - m3*x3 - m1*x4 - m2*x4 - m3*x4 + m1*m2 + m1*m3 + m2*m3",
        space,
    )
}

/// Reference monomials named explicitly in the acceptance checks.
pub const Q5_SPOT_TERMS: [(&str, i64); 5] = [
    ("x1^6", 616),
    ("x1^5*x2", 2440),
    ("x1^5*m1", -1516),
    ("x1*x2*x3*x4*x5*m1", -68700),
    ("m3^4*m4^2", 21),
];

fn checks_n5() -> Result<Vec<Check>, NullError> {
    let space = VarSpace::new(5)?;
    let mut out = Vec::new();
    let q = quotient_by_vandermonde(5)?;
    out.push(Check::new(
        "f5-quotient",
        q.total_degree() == Some(6),
        format!("terms={} deg={}", q.len(), deg_text(&q)),
    ));

    let mut spot_ok = true;
    let mut detail = Vec::new();
    for (mono, want) in Q5_SPOT_TERMS {
        let m = lit(mono, space);
        let (m, _) = m.leading_term().expect("nonzero literal");
        let got = q.coefficient_of(m);
        spot_ok &= got == BigInt::from(want);
        detail.push(format!("{mono}={got}"));
    }
    out.push(Check::new("q5-spot", spot_ok, detail.join(" ")));

    let half = q.primitive_part();
    let doubled_spot = Q5_SPOT_TERMS.iter().all(|(mono, want)| {
        let m = lit(mono, space);
        let (m, _) = m.leading_term().expect("nonzero literal");
        q.coefficient_of(m) == BigInt::from(2 * want)
    });

    let reference = reference_q5_terms()?;
    let mut mismatched = 0usize;
    for (m, c) in &reference {
        if &q.coefficient_of(m) != c {
            mismatched += 1;
        }
    }
    let listed: Polynomial = Polynomial::from_terms(space, reference.iter().cloned())?;
    let unlisted = q.terms().filter(|(m, _)| listed.coefficient_of(m).is_zero()).count();
    let full_match = mismatched == 0 && unlisted == 0;
    out.push(Check::new(
        "q5-full",
        full_match,
        format!(
            "listed={} mismatched={} computed={} unlisted={}",
            reference.len(),
            mismatched,
            q.len(),
            unlisted
        ),
    ));

    let halved_match = listed == half && q == listed.scale(&BigInt::from(2));
    out.push(Check::new(
        "q5-primitive",
        halved_match && doubled_spot,
        format!("computed = 2 * listed: {halved_match}; spot coefficients doubled: {doubled_spot}"),
    ));

    out.push(Check::new(
        "q5-symmetric",
        is_x_symmetric(&q)?,
        "invariant under x-transpositions",
    ));

    let scan = linear_sum_factor_scan(5, 10)?;
    out.push(Check::new("scan5", scan.is_empty(), format!("hits={scan:?}")));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(n: usize) -> VarSpace {
        VarSpace::new(n).unwrap()
    }

    fn q(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    #[test]
    fn f_small_cases() {
        assert_eq!(build_f(2).unwrap(), lit("x1 - m1", sp(2)));
        let f3 = build_f(3).unwrap();
        let expected = product_of(&["x1 - m1", "x1 - m2", "x1 + x2 - m1", "x1 + x2 - m2"], sp(3));
        assert_eq!(f3, expected);
        assert_eq!(
            f3.coefficient_of(&Monomial::from_exponents(&[2, 2, 0, 0, 0])),
            BigInt::one()
        );
        for n in 2..=5 {
            let d = (n - 1) * (n - 1);
            assert_eq!(build_f(n).unwrap().total_degree(), Some(d as u32));
        }
        assert!(build_f(1).is_err());
        assert!(build_f(7).is_err());
    }

    #[test]
    fn vandermonde_products() {
        assert_eq!(vandermonde(sp(3), &[1, 2]).unwrap(), lit("x1 - x2", sp(3)));
        let v3 = vandermonde(sp(3), &[1, 2, 3]).unwrap();
        assert_eq!(v3.len(), 6);
        assert_eq!(vandermonde(sp(5), &[1, 2, 3, 4, 5]).unwrap().total_degree(), Some(10));
        assert!(vandermonde(sp(3), &[1]).is_err());
        assert!(vandermonde(sp(3), &[1, 1]).is_err());
        assert!(vandermonde(sp(3), &[1, 4]).is_err());
    }

    #[test]
    fn small_signed_sums() {
        assert_eq!(antisymmetrize(2).unwrap(), lit("x1 - x2", sp(2)));
        let product = product_of(&["x1 - x2", "x1 - x3", "x2 - x3", "x1 + x2 + x3 - m1 - m2"], sp(3));
        let f3 = antisymmetrize(3).unwrap();
        assert_ne!(f3, product);
        assert_eq!(f3, product.scale(&BigInt::from(2)));
        // direct evaluation of the signed sum at one point
        assert_eq!(f3.evaluate_int(&[0, 1, 2, 0, 0]).unwrap(), q(-12));
        assert!(antisymmetrize(6).is_err());
        assert!(antisymmetrize(1).is_err());
    }

    #[test]
    fn signed_sum_matches_pointwise_evaluation() {
        let points: [&[i64]; 3] = [&[3, -1, 4, 1, 5, 9, 2], &[2, 7, 1, 8, 2, 8, 1], &[0, 0, 5, -3, 6, 1, 1]];
        for n in 3..=4 {
            let f = build_f(n).unwrap();
            let sum = antisymmetrize(n).unwrap();
            for raw in points {
                let pt: Vec<BigRational> = raw[..2 * n - 1].iter().map(|&v| q(v)).collect();
                let mut direct = BigRational::zero();
                for pi in permgroup::enumerate(n).unwrap() {
                    let mut moved = pi.arrange(&pt[..n]);
                    moved.extend_from_slice(&pt[n..]);
                    let v = f.evaluate(&moved).unwrap();
                    direct += v * q(pi.sign() as i64);
                }
                assert_eq!(sum.evaluate(&pt).unwrap(), direct, "n={n} at {raw:?}");
            }
        }
    }

    #[test]
    fn signed_sum_is_antisymmetric_and_keeps_degree() {
        for n in 2..=4 {
            let s = antisymmetrize(n).unwrap();
            assert!(is_x_antisymmetric(&s).unwrap(), "n={n}");
            assert_eq!(s.total_degree(), Some(((n - 1) * (n - 1)) as u32));
            assert!(s.try_exact_divide(&full_vandermonde(sp(n))).unwrap().is_some());
        }
    }

    #[test]
    fn pair_differences() {
        let d = pair_difference(3, &[1, 2, 3]).unwrap();
        assert_eq!(d, corrected_pair_identity_n3([1, 2, 3]));
        let mut pt = vec![q(5), q(2), q(2), q(1), q(9)];
        assert!(d.evaluate(&pt).unwrap().is_zero());
        pt[2] = q(3);
        assert!(!d.evaluate(&pt).unwrap().is_zero());
        assert_eq!(
            pair_difference(4, &[1, 2, 3, 4]).unwrap(),
            pair_identity_n4([1, 2, 3, 4])
        );
        assert!(pair_difference(3, &[1, 2, 2]).is_err());
        assert!(pair_difference(3, &[1, 2]).is_err());
    }

    #[test]
    fn quotients() {
        assert_eq!(quotient_by_vandermonde(3).unwrap(), linear_sum_form(sp(3), 2, 2));
        let q4 = q4().unwrap();
        assert_eq!(q4.total_degree(), Some(2));
        assert!(is_x_symmetric(&q4).unwrap());
    }

    #[test]
    fn factor_scans() {
        assert_eq!(linear_sum_factor_scan(3, 10).unwrap(), vec![(1, 1)]);
        assert_eq!(linear_sum_factor_scan(4, 10).unwrap(), vec![(3, 2)]);
    }

    #[test]
    fn singularity() {
        assert!(is_singular(3, &[q(1), q(2), q(3)], &[q(2), q(4)]).unwrap());
        assert!(!is_singular(3, &[q(1), q(2), q(4)], &[q(2), q(3)]).unwrap());
        assert!(is_singular(4, &[q(1), q(4), q(2), q(3)], &[q(2), q(3), q(10)]).unwrap());
        assert!(!is_singular(4, &[q(1), q(2), q(4), q(8)], &[q(3), q(5), q(7)]).unwrap());
        assert!(is_singular(5, &[], &[]).is_err());
        assert!(is_singular(3, &[q(1)], &[q(2), q(3)]).is_err());
    }

    #[test]
    fn lemma1_simple_product() {
        let p = lit("x1*x2", sp(2));
        // slot 2 (m1) is absent from p
        let sets = vec![vec![q(0), q(1)], vec![q(0), q(1)]];
        let r = lemma1_check(&p, &sets, &[1, 1]);
        assert!(r.hypotheses_hold());
        assert_eq!(r.witness, Some(vec![q(1), q(1)]));
    }

    #[test]
    fn lemma1_on_f3_allows_repeated_coordinates() {
        let f = build_f(3).unwrap();
        let s = sp(3);
        let f = f
            .substitute(s.m(1), &BigInt::from(5))
            .unwrap()
            .substitute(s.m(2), &BigInt::from(7))
            .unwrap();
        let set = vec![q(1), q(2), q(3)];
        let r = lemma1_check(&f, &[set.clone(), set.clone(), set], &[2, 2, 0]);
        assert!(r.hypotheses_hold(), "{r:?}");
        let w = r.witness.unwrap();
        assert_eq!(w, vec![q(1), q(1), q(1)]);
    }

    #[test]
    fn lemma1_fails_after_vandermonde_factor() {
        let s = sp(3);
        let p = &vandermonde(s, &[1, 2]).unwrap() * &build_f(3).unwrap();
        let p = p
            .substitute(s.m(1), &BigInt::from(5))
            .unwrap()
            .substitute(s.m(2), &BigInt::from(7))
            .unwrap();
        let set = vec![q(1), q(2), q(3)];
        let sets = vec![set.clone(), set.clone(), set];
        let mut tried = 0;
        for t0 in 0..=2u16 {
            for t1 in 0..=2u16 {
                for t2 in 0..=2u16 {
                    if t0 + t1 + t2 != 5 {
                        continue;
                    }
                    let r = lemma1_check(&p, &sets, &[t0, t1, t2]);
                    assert!(r.degree_matches && r.sizes_ok);
                    assert!(!r.coefficient_nonzero);
                    assert!(r.witness.is_none());
                    tried += 1;
                }
            }
        }
        assert_eq!(tried, 3);
    }

    #[test]
    fn lemma1_reports_stray_variables() {
        let p = lit("x1*m1", sp(2));
        let r = lemma1_check(&p, &[vec![q(1), q(2)]], &[1]);
        assert_eq!(r.stray_slots, vec![2]);
        assert!(!r.hypotheses_hold());
    }

    #[test]
    fn audit_at_three() {
        assert!(unsuitable_monomial_audit().unwrap());
        let f3 = antisymmetrize(3).unwrap();
        assert!(!f3.coefficient_of(&Monomial::from_exponents(&[3, 1, 0, 0, 0])).is_zero());
        assert!(f3.coefficient_of(&Monomial::from_exponents(&[2, 2, 0, 0, 0])).is_zero());
    }

    #[test]
    fn n3_and_n4_checks_pass_except_printed_product() {
        for n in [3, 4] {
            for c in factor_checks(n).unwrap() {
                if c.name == "n3-product" {
                    assert!(c.failed());
                } else {
                    assert!(!c.failed(), "{c}");
                }
            }
        }
    }

    #[test]
    fn check_lines() {
        let c = Check::new("n3-product", true, "terms=1");
        assert_eq!(c.to_string(), "CHECK n3-product PASS terms=1");
        let c = Check::new("x", false, "");
        assert_eq!(c.to_string(), "CHECK x FAIL ");
    }
}
