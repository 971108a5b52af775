//! Permutations of `{1..n}` with signatures, enumerated in lexicographic order.

use std::fmt;

use thiserror::Error;

/// Smallest and largest degree accepted by [`enumerate`].
pub const MIN_DEGREE: usize = 2;
pub const MAX_DEGREE: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("degree {0} outside the supported range {MIN_DEGREE}..={MAX_DEGREE}")]
    DegreeOutOfRange(usize),
    #[error("image list {0:?} is not a bijection of 1..={1}")]
    NotBijection(Vec<usize>, usize),
    #[error("cannot compose permutations of degree {0} and {1}")]
    DegreeMismatch(usize, usize),
}

/// A bijection of `{1..n}`. Stored zero-based: `images[i]` is `π(i+1) - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { images: (0..n).collect() }
    }

    /// The transposition exchanging the one-based points `i` and `j`.
    pub fn transposition(n: usize, i: usize, j: usize) -> Result<Self, PermError> {
        if i == 0 || j == 0 || i > n || j > n {
            return Err(PermError::NotBijection(vec![i, j], n));
        }
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(i - 1, j - 1);
        Ok(Permutation { images })
    }

    /// Builds a permutation from its one-line notation with one-based images.
    pub fn from_one_based(images: &[usize]) -> Result<Self, PermError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &v in images {
            if v == 0 || v > n || seen[v - 1] {
                return Err(PermError::NotBijection(images.to_vec(), n));
            }
            seen[v - 1] = true;
        }
        Ok(Permutation {
            images: images.iter().map(|v| v - 1).collect(),
        })
    }

    /// Builds a permutation from zero-based images.
    pub fn from_zero_based(images: Vec<usize>) -> Result<Self, PermError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &v in &images {
            if v >= n || seen[v] {
                return Err(PermError::NotBijection(
                    images.iter().map(|v| v + 1).collect(),
                    n,
                ));
            }
            seen[v] = true;
        }
        Ok(Permutation { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Zero-based images.
    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.images.iter().map(|v| v + 1).collect()
    }

    /// Image of the zero-based point `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    /// `self ∘ other`, i.e. `other` is applied first.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation, PermError> {
        if self.degree() != other.degree() {
            return Err(PermError::DegreeMismatch(self.degree(), other.degree()));
        }
        Ok(Permutation {
            images: other.images.iter().map(|&i| self.images[i]).collect(),
        })
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.degree()];
        for (i, &v) in self.images.iter().enumerate() {
            inv[v] = i;
        }
        Permutation { images: inv }
    }

    pub fn inversions(&self) -> usize {
        let p = &self.images;
        (0..p.len())
            .map(|i| (i + 1..p.len()).filter(|&j| p[i] > p[j]).count())
            .sum()
    }

    /// `+1` for even permutations, `-1` for odd ones.
    pub fn sign(&self) -> i32 {
        if self.inversions().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// Rearranges `items` so that slot `k` holds `items[π(k)]`.
    pub fn arrange<T: Clone>(&self, items: &[T]) -> Vec<T> {
        self.images.iter().map(|&i| items[i].clone()).collect()
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, v) in self.images.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", v + 1)?;
        }
        write!(f, ")")
    }
}

/// Rearranges `v` into its lexicographic successor; returns false at the last one.
pub fn next_lexicographic<T: Ord>(v: &mut [T]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// All `n!` permutations of `{1..n}` in lexicographic order of their one-line notation.
pub fn enumerate(n: usize) -> Result<Vec<Permutation>, PermError> {
    if !(MIN_DEGREE..=MAX_DEGREE).contains(&n) {
        return Err(PermError::DegreeOutOfRange(n));
    }
    let mut current: Vec<usize> = (0..n).collect();
    let mut out = Vec::with_capacity((1..=n).product());
    loop {
        out.push(Permutation {
            images: current.clone(),
        });
        if !next_lexicographic(&mut current) {
            break;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::HashSet;

    #[test]
    fn counts_match_factorials() {
        assert_eq!(enumerate(3).unwrap().len(), 6);
        assert_eq!(enumerate(4).unwrap().len(), 24);
        assert_eq!(enumerate(5).unwrap().len(), 120);
        assert_eq!(enumerate(8).unwrap().len(), 40320);
    }

    #[test]
    fn degree_range_is_enforced() {
        assert_eq!(enumerate(1), Err(PermError::DegreeOutOfRange(1)));
        assert_eq!(enumerate(9), Err(PermError::DegreeOutOfRange(9)));
    }

    #[test]
    fn order_is_lexicographic() {
        let perms = enumerate(4).unwrap();
        assert_eq!(perms[0].one_based(), vec![1, 2, 3, 4]);
        assert_eq!(perms[1].one_based(), vec![1, 2, 4, 3]);
        assert_eq!(perms[23].one_based(), vec![4, 3, 2, 1]);
        for w in perms.windows(2) {
            assert!(w[0].one_based() < w[1].one_based());
        }
        for n in 2..=6 {
            let all = enumerate(n).unwrap();
            let distinct: HashSet<_> = all.iter().collect();
            assert_eq!(distinct.len(), all.len());
        }
    }

    #[test]
    fn signs() {
        assert_eq!(Permutation::identity(5).sign(), 1);
        assert_eq!(Permutation::transposition(3, 1, 2).unwrap().sign(), -1);
        let total: i32 = enumerate(4).unwrap().iter().map(Permutation::sign).sum();
        assert_eq!(total, 0);
    }

    #[test]
    fn display_is_one_line() {
        let p = Permutation::from_one_based(&[2, 1, 3]).unwrap();
        assert_eq!(p.to_string(), "(2,1,3)");
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::from_one_based(&[1, 1, 3]).is_err());
        assert!(Permutation::from_one_based(&[0, 1]).is_err());
        assert!(Permutation::from_one_based(&[1, 3]).is_err());
        assert!(Permutation::from_zero_based(vec![1, 2]).is_err());
    }

    fn perm_strategy(n: usize) -> impl Strategy<Value = Permutation> {
        Just((0..n).collect::<Vec<_>>())
            .prop_shuffle()
            .prop_map(|v| Permutation::from_zero_based(v).unwrap())
    }

    proptest! {
        #[test]
        fn sign_is_multiplicative((p, q) in (2usize..=7).prop_flat_map(|n| (perm_strategy(n), perm_strategy(n)))) {
            let pq = p.compose(&q).unwrap();
            prop_assert_eq!(pq.sign(), p.sign() * q.sign());
        }

        #[test]
        fn inverse_composes_to_identity(p in (2usize..=7).prop_flat_map(perm_strategy)) {
            let n = p.degree();
            prop_assert_eq!(p.compose(&p.inverse()).unwrap(), Permutation::identity(n));
            prop_assert_eq!(p.inverse().sign(), p.sign());
        }
    }
}
