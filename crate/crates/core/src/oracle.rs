//! Brute-force ground truth: every safe order of an instance, the distinct
//! subset sum condition and the counting bound that rests on it.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::permgroup;
use crate::solver::{Instance, JumpOrder};

/// Largest `n` accepted by [`enumerate_safe_orders`].
pub const MAX_ENUM_N: usize = 8;
/// Largest `n` accepted by [`theorem2_bound_check`].
pub const MAX_BOUND_N: usize = 7;
/// Largest `n` accepted by the subset sum routines.
pub const MAX_SUBSET_N: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("n = {got} exceeds the limit {max}")]
    TooLarge { got: usize, max: usize },
    #[error("prefix size {l} outside 1..={max}")]
    PrefixRange { l: usize, max: usize },
}

fn check_n(got: usize, max: usize) -> Result<(), OracleError> {
    if got > max {
        Err(OracleError::TooLarge { got, max })
    } else {
        Ok(())
    }
}

/// All safe orders, lexicographic in the index order of the instance's lengths.
pub fn enumerate_safe_orders(instance: &Instance) -> Result<Vec<JumpOrder>, OracleError> {
    let n = instance.n();
    check_n(n, MAX_ENUM_N)?;
    let shards: Vec<Vec<Vec<usize>>> = (0..n)
        .into_par_iter()
        .map(|first| {
            let mut out = Vec::new();
            let mut path = vec![first];
            let mut used = vec![false; n];
            used[first] = true;
            dfs(instance, &mut path, &mut used, instance.lengths()[first].clone(), &mut out);
            out
        })
        .collect();
    Ok(shards
        .into_iter()
        .flatten()
        .map(|idx| JumpOrder::new(idx.iter().map(|&i| instance.lengths()[i].clone()).collect()))
        .collect())
}

/// Number of safe orders.
pub fn count_safe_orders(instance: &Instance) -> Result<usize, OracleError> {
    enumerate_safe_orders(instance).map(|v| v.len())
}

fn dfs(
    instance: &Instance,
    path: &mut Vec<usize>,
    used: &mut [bool],
    pos: BigRational,
    out: &mut Vec<Vec<usize>>,
) {
    let n = used.len();
    if path.len() == n {
        out.push(path.clone());
        return;
    }
    // pos is a proper prefix here
    if instance.blocked().binary_search(&pos).is_ok() {
        return;
    }
    for i in 0..n {
        if used[i] {
            continue;
        }
        used[i] = true;
        path.push(i);
        dfs(instance, path, used, &pos + &instance.lengths()[i], out);
        path.pop();
        used[i] = false;
    }
}

/// Two different index sets with the same sum, if any. The sets are disjoint.
pub fn subset_sum_collision(
    lengths: &[BigRational],
) -> Result<Option<(Vec<usize>, Vec<usize>)>, OracleError> {
    let n = lengths.len();
    check_n(n, MAX_SUBSET_N)?;
    let mut seen: HashMap<BigRational, u32> = HashMap::with_capacity(1 << n);
    // Gray-code walk: each step adds or removes one element
    let mut sum = BigRational::zero();
    let mut mask = 0u32;
    seen.insert(sum.clone(), 0);
    for step in 1u32..(1u32 << n) {
        let bit = step.trailing_zeros();
        mask ^= 1 << bit;
        if mask & (1 << bit) != 0 {
            sum += &lengths[bit as usize];
        } else {
            sum -= &lengths[bit as usize];
        }
        if let Some(&other) = seen.get(&sum) {
            let common = other & mask;
            let bits = |m: u32| (0..n).filter(|&i| m & (1 << i) != 0).collect::<Vec<_>>();
            return Ok(Some((bits(other & !common), bits(mask & !common))));
        }
        seen.insert(sum.clone(), mask);
    }
    Ok(None)
}

/// True iff all `2^n` subset sums are pairwise distinct.
pub fn has_distinct_subset_sums(lengths: &[BigRational]) -> Result<bool, OracleError> {
    subset_sum_collision(lengths).map(|c| c.is_none())
}

fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

/// Orders whose first `l` jumps form one fixed `l`-subset: `l!·(n-l)!`.
pub fn orders_with_prefix_set_count(n: usize, l: usize) -> Result<BigUint, OracleError> {
    if l == 0 || l >= n {
        return Err(OracleError::PrefixRange {
            l,
            max: n.saturating_sub(1),
        });
    }
    Ok(factorial(l) * factorial(n - l))
}

/// The same count by walking Sym(n), for the subset `{1..l}`.
pub fn orders_with_prefix_set_brute(n: usize, l: usize) -> Result<u64, OracleError> {
    if l == 0 || l >= n {
        return Err(OracleError::PrefixRange {
            l,
            max: n.saturating_sub(1),
        });
    }
    let perms = permgroup::enumerate(n).map_err(|_| OracleError::TooLarge {
        got: n,
        max: permgroup::MAX_DEGREE,
    })?;
    Ok(perms
        .iter()
        .filter(|p| p.images()[..l].iter().all(|&i| i < l))
        .count() as u64)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    /// False when the lengths have a subset sum collision.
    pub applicable: bool,
    pub safe: usize,
    pub total: BigUint,
    pub bound: BigUint,
}

impl BoundReport {
    /// Inapplicable reports hold vacuously.
    pub fn holds(&self) -> bool {
        !self.applicable || BigUint::from(self.safe) >= self.bound
    }
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.applicable {
            write!(f, "inapplicable: ")?;
        }
        write!(f, "safe={} total={} bound={}", self.safe, self.total, self.bound)
    }
}

/// Counts safe orders and compares with `(n-1)!` when subset sums are distinct.
pub fn theorem2_bound_check(instance: &Instance) -> Result<BoundReport, OracleError> {
    let n = instance.n();
    check_n(n, MAX_BOUND_N)?;
    let applicable = has_distinct_subset_sums(instance.lengths())?;
    let safe = count_safe_orders(instance)?;
    Ok(BoundReport {
        applicable,
        safe,
        total: factorial(n),
        bound: factorial(n.saturating_sub(1)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{RawInstance, SumPolicy};

    fn inst(l: &[i64], b: &[i64]) -> Instance {
        RawInstance::from_ints(l, b).validate().unwrap()
    }

    fn qs(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| BigRational::from_integer(x.into())).collect()
    }

    #[test]
    fn small_enumerations() {
        assert_eq!(
            enumerate_safe_orders(&inst(&[1, 2], &[1])).unwrap(),
            vec![JumpOrder::from_ints(&[2, 1])]
        );
        assert_eq!(
            enumerate_safe_orders(&inst(&[1, 2, 3], &[3, 5])).unwrap(),
            vec![JumpOrder::from_ints(&[1, 3, 2])]
        );
        let i = RawInstance::from_ints(&[1, 2, 3, 4], &[2, 3, 10])
            .validate_with(SumPolicy::Allow)
            .unwrap();
        let all = enumerate_safe_orders(&i).unwrap();
        assert!(all.contains(&JumpOrder::from_ints(&[4, 2, 1, 3])));
        assert!(!all.contains(&JumpOrder::from_ints(&[1, 2, 3, 4])));
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(sorted, all);
    }

    #[test]
    fn index_order_follows_input() {
        let all = enumerate_safe_orders(&inst(&[3, 1, 2], &[10, 11])).unwrap();
        assert_eq!(all.len(), 6);
        assert_eq!(all[0], JumpOrder::from_ints(&[3, 1, 2]));
        assert_eq!(all[5], JumpOrder::from_ints(&[2, 1, 3]));
    }

    #[test]
    fn enumeration_limit() {
        let l: Vec<i64> = (1..=9).collect();
        let b: Vec<i64> = (100..108).collect();
        assert_eq!(
            enumerate_safe_orders(&inst(&l, &b)),
            Err(OracleError::TooLarge { got: 9, max: 8 })
        );
    }

    #[test]
    fn subset_sums() {
        assert!(has_distinct_subset_sums(&qs(&[1, 2, 4, 8])).unwrap());
        assert!(!has_distinct_subset_sums(&qs(&[1, 2, 3])).unwrap());
        assert!(has_distinct_subset_sums(&qs(&[3, 5, 6, 7])).unwrap());
        assert!(has_distinct_subset_sums(&qs(&[])).unwrap());
        let (a, b) = subset_sum_collision(&qs(&[1, 2, 3])).unwrap().unwrap();
        let s = |ix: &[usize]| ix.iter().map(|&i| [1, 2, 3][i]).sum::<i64>();
        assert_eq!(s(&a), s(&b));
        assert!(a.iter().all(|i| !b.contains(i)));
        assert!(subset_sum_collision(&qs(&[1; 21])).is_err());
    }

    #[test]
    fn prefix_set_counts() {
        assert_eq!(orders_with_prefix_set_count(4, 2).unwrap(), BigUint::from(4u32));
        assert_eq!(orders_with_prefix_set_count(4, 1).unwrap(), BigUint::from(6u32));
        assert_eq!(orders_with_prefix_set_count(5, 3).unwrap(), BigUint::from(12u32));
        assert!(orders_with_prefix_set_count(4, 4).is_err());
        assert!(orders_with_prefix_set_count(4, 0).is_err());
        for n in 2..=6 {
            for l in 1..n {
                assert_eq!(
                    orders_with_prefix_set_count(n, l).unwrap(),
                    BigUint::from(orders_with_prefix_set_brute(n, l).unwrap())
                );
            }
        }
    }

    #[test]
    fn bound_reports() {
        let r = theorem2_bound_check(&inst(&[1, 2, 4, 8], &[1, 3, 5])).unwrap();
        assert!(r.applicable && r.holds() && r.safe >= 6, "{r}");
        let r = theorem2_bound_check(&inst(&[1, 2, 4], &[2, 3])).unwrap();
        assert!(r.applicable && r.safe >= 2, "{r}");
        assert_eq!(r.to_string(), format!("safe={} total=6 bound=2", r.safe));
        let r = theorem2_bound_check(&inst(&[1, 2, 3], &[1, 2])).unwrap();
        assert!(!r.applicable && r.holds());
    }
}
