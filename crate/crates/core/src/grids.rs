//! Exhaustive and sampled instance families used to check the solver and the
//! oracle against each other.

use std::fmt;

use itertools::Itertools;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::oracle::{self, enumerate_safe_orders};
use crate::solver::{solve, verify_order, Instance, RawInstance};

/// Default seed for every sampled family.
pub const DEFAULT_SEED: u64 = 20090715;

fn int(v: i64) -> BigRational {
    BigRational::from_integer(v.into())
}

/// Sums of the nonempty proper subsets, sorted and deduplicated.
pub fn proper_subset_sums(lengths: &[i64]) -> Vec<i64> {
    let n = lengths.len();
    let mut sums: Vec<i64> = (1u32..(1 << n) - 1)
        .map(|m| (0..n).filter(|i| m & (1 << i) != 0).map(|i| lengths[i]).sum())
        .collect();
    sums.sort();
    sums.dedup();
    sums
}

/// Candidate blocked points: every reachable landing plus two decoys, one
/// half-integer and the smallest positive integer that is neither a landing
/// nor the total.
pub fn blocked_pool(lengths: &[i64]) -> Vec<BigRational> {
    let sums = proper_subset_sums(lengths);
    let total: i64 = lengths.iter().sum();
    let decoy = (1..).find(|v| *v != total && sums.binary_search(v).is_err()).unwrap();
    let mut pool: Vec<BigRational> = sums.into_iter().map(int).collect();
    pool.push(BigRational::new(1.into(), 2.into()));
    pool.push(int(decoy));
    pool.sort();
    pool
}

#[derive(Debug, Clone, Default)]
pub struct GridReport {
    pub label: String,
    pub instances: usize,
    pub failures: Vec<String>,
    pub note: String,
}

impl GridReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.instances > 0
    }
}

impl fmt::Display for GridReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "GRID {} instances={} failures={} {}",
            self.label,
            self.instances,
            self.failures.len(),
            if self.passed() { "PASS" } else { "FAIL" }
        )?;
        if !self.note.is_empty() {
            write!(f, " ({})", self.note)?;
        }
        Ok(())
    }
}

/// Every `n = 3` instance with lengths in `1..=9` and blocked pairs in
/// `1..=17` avoiding the total: some order is safe.
pub fn existence_grid() -> GridReport {
    let mut report = GridReport {
        label: "existence".into(),
        ..Default::default()
    };
    for lengths in (1i64..=9).combinations(3) {
        let total: i64 = lengths.iter().sum();
        for blocked in (1i64..=17).filter(|&b| b != total).combinations(2) {
            let inst = RawInstance::from_ints(&lengths, &blocked)
                .validate()
                .expect("grid instance is valid");
            report.instances += 1;
            if enumerate_safe_orders(&inst).map_or(true, |v| v.is_empty()) {
                report.failures.push(inst.to_string().replace('\n', "; "));
            }
        }
    }
    report
}

/// `per_n` seeded instances for each `n` in `ns`, lengths drawn from `1..=12`
/// and blocked points from [`blocked_pool`]: some order is safe and the solver
/// finds one of them.
pub fn existence_sample(ns: &[usize], per_n: usize, seed: u64) -> GridReport {
    let mut report = GridReport {
        label: "existence-sample".into(),
        note: format!("n in {ns:?}, seed {seed}"),
        ..Default::default()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let candidates: Vec<i64> = (1..=12).collect();
    for &n in ns {
        for _ in 0..per_n {
            let mut lengths: Vec<i64> = candidates.choose_multiple(&mut rng, n).copied().collect();
            lengths.sort();
            let pool = blocked_pool(&lengths);
            let mut blocked: Vec<BigRational> = pool.choose_multiple(&mut rng, n - 1).cloned().collect();
            blocked.sort();
            let lq = lengths.iter().map(|&v| int(v)).collect();
            let inst = RawInstance::new(lq, blocked).validate().expect("valid");
            check_solver(&inst, &mut report);
        }
    }
    report
}

/// How much of the `n = 5` layer of the solver grid to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coverage {
    Full,
    /// A seeded sample of this many length sets; their blocked sets are all run.
    Sample { length_sets: usize, seed: u64 },
}

fn check_solver(inst: &Instance, report: &mut GridReport) {
    report.instances += 1;
    let order = match solve(inst) {
        Ok(o) => o,
        Err(e) => {
            report.failures.push(format!("{}: {e}", inst.to_string().replace('\n', "; ")));
            return;
        }
    };
    let safe = verify_order(inst, &order).unwrap_or(false);
    let listed = enumerate_safe_orders(inst).is_ok_and(|all| all.contains(&order));
    if !safe || !listed {
        report.failures.push(format!(
            "{}: order {order} safe={safe} listed={listed}",
            inst.to_string().replace('\n', "; ")
        ));
    }
}

/// Solver against oracle for `n ≤ max_n`, lengths drawn from `1..=8`, blocked
/// sets all `(n-1)`-subsets of [`blocked_pool`].
pub fn solver_grid(max_n: usize, n5: Coverage) -> GridReport {
    let mut report = GridReport {
        label: "solver".into(),
        ..Default::default()
    };
    for n in 1..=max_n {
        let mut sets: Vec<Vec<i64>> = (1i64..=8).combinations(n).collect();
        if n == 5 {
            if let Coverage::Sample { length_sets, seed } = n5 {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                sets.shuffle(&mut rng);
                sets.truncate(length_sets);
                sets.sort();
                report.note = format!("n=5 sampled {length_sets} of 56 length sets, seed {seed}");
            }
        }
        for lengths in sets {
            let pool = blocked_pool(&lengths);
            let lengths_q: Vec<BigRational> = lengths.iter().map(|&v| int(v)).collect();
            for blocked in pool.iter().cloned().combinations(n - 1) {
                let inst = RawInstance::new(lengths_q.clone(), blocked)
                    .validate()
                    .expect("grid instance is valid");
                check_solver(&inst, &mut report);
            }
        }
    }
    report
}

/// `count` instances with distinct subset sums, alternating `n = 4` and `n = 5`:
/// the number of safe orders is at least `(n-1)!`.
pub fn bound_sample(count: usize, seed: u64) -> GridReport {
    let mut report = GridReport {
        label: "bound".into(),
        note: format!("seed {seed}"),
        ..Default::default()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let candidates: Vec<i64> = (1..=40).collect();
    while report.instances < count {
        let n = if report.instances.is_multiple_of(2) { 4 } else { 5 };
        let mut lengths: Vec<i64> = candidates.choose_multiple(&mut rng, n).copied().collect();
        lengths.sort();
        let lq: Vec<BigRational> = lengths.iter().map(|&v| int(v)).collect();
        if !oracle::has_distinct_subset_sums(&lq).expect("small n") {
            continue;
        }
        let pool = blocked_pool(&lengths);
        let blocked: Vec<BigRational> = pool.choose_multiple(&mut rng, n - 1).cloned().collect();
        let inst = RawInstance::new(lq, blocked).validate().expect("valid");
        report.instances += 1;
        match oracle::theorem2_bound_check(&inst) {
            Ok(r) if r.applicable && r.holds() => {}
            Ok(r) => report
                .failures
                .push(format!("{}: {r}", inst.to_string().replace('\n', "; "))),
            Err(e) => report.failures.push(e.to_string()),
        }
    }
    report
}

/// `l!(n-l)!` against a walk over Sym(n) for every `2 ≤ n ≤ max_n`, `1 ≤ l < n`.
pub fn prefix_count_grid(max_n: usize) -> GridReport {
    let mut report = GridReport {
        label: "prefix-count".into(),
        ..Default::default()
    };
    for n in 2..=max_n {
        for l in 1..n {
            report.instances += 1;
            let formula = oracle::orders_with_prefix_set_count(n, l);
            let brute = oracle::orders_with_prefix_set_brute(n, l);
            match (formula, brute) {
                (Ok(f), Ok(b)) if f == b.into() => {}
                (f, b) => report.failures.push(format!("n={n} l={l}: {f:?} vs {b:?}")),
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pools() {
        assert_eq!(proper_subset_sums(&[1, 2, 4]), vec![1, 2, 3, 4, 5, 6]);
        let pool = blocked_pool(&[1, 2, 4]);
        assert_eq!(pool.len(), 8);
        assert_eq!(pool[0], BigRational::new(1.into(), 2.into()));
        assert_eq!(pool[7], int(8));
        assert_eq!(blocked_pool(&[2, 5]).last(), Some(&int(5)));
        assert!(blocked_pool(&[2, 5]).contains(&int(1)));
    }

    #[test]
    fn small_solver_grid() {
        let r = solver_grid(4, Coverage::Full);
        assert!(r.passed(), "{r} {:?}", r.failures.first());
    }

    #[test]
    fn small_samples() {
        let r = bound_sample(10, 7);
        assert!(r.passed(), "{r}");
        assert_eq!(r.instances, 10);
        assert!(prefix_count_grid(5).passed());
    }

    #[test]
    fn sampled_n6_n7_have_safe_orders() {
        let r = existence_sample(&[6, 7], 40, DEFAULT_SEED);
        assert!(r.passed(), "{r} {:?}", r.failures.first());
        assert_eq!(r.instances, 80);
    }
}
