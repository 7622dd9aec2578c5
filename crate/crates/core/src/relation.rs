//! Dense binary relations over a finite ground set `0..n`.
//!
//! Each relation is an `n x n` bit matrix with one `u64` per row, so the
//! ground set is capped at [`MAX_ELEMENTS`] elements. Every relation operation
//! used by the order-theoretic layers (closure, composition, inverse,
//! restriction) works row-wise on those words.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Violation};

/// Largest ground set a [`Relation`] can hold.
pub const MAX_ELEMENTS: usize = 64;

#[inline]
pub(crate) fn bit(i: usize) -> u64 {
    1u64 << i
}

#[inline]
pub(crate) fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Iterates the set bits of a word in increasing order.
pub(crate) fn bits(mut word: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if word == 0 {
            None
        } else {
            let i = word.trailing_zeros() as usize;
            word &= word - 1;
            Some(i)
        }
    })
}

/// A finite ground set, optionally carrying external element names.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundSet {
    size: usize,
    labels: Option<Vec<String>>,
}

impl GroundSet {
    pub fn unlabeled(size: usize) -> Self {
        GroundSet { size, labels: None }
    }

    pub fn labeled(labels: Vec<String>) -> Result<Self> {
        for (i, a) in labels.iter().enumerate() {
            if let Some(j) = labels[..i].iter().position(|b| b == a) {
                return Err(Error::Input(format!(
                    "duplicate element name {a:?} at positions {j} and {i}"
                )));
            }
        }
        Ok(GroundSet {
            size: labels.len(),
            labels: Some(labels),
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// External name of element `i`; unlabeled sets use the decimal id.
    pub fn name(&self, i: usize) -> String {
        match &self.labels {
            Some(l) => l[i].clone(),
            None => i.to_string(),
        }
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        match &self.labels {
            Some(l) => l.iter().position(|x| x == name),
            None => name.parse::<usize>().ok().filter(|&i| i < self.size),
        }
    }
}

/// Which of the five basic axioms a relation satisfies.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Properties {
    pub reflexive: bool,
    pub transitive: bool,
    pub antisymmetric: bool,
    pub symmetric: bool,
    pub total: bool,
}

/// A set of ordered pairs on `0..n`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Relation {
    n: usize,
    rows: Vec<u64>,
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Relation(n={}, {{", self.n)?;
        let mut first = true;
        for (i, j) in self.pairs() {
            if !first {
                write!(f, ",")?;
            }
            first = false;
            write!(f, "({i},{j})")?;
        }
        write!(f, "}})")
    }
}

impl Relation {
    fn check_size(n: usize) -> Result<()> {
        if n > MAX_ELEMENTS {
            Err(Error::Resource {
                what: "ground set",
                size: n,
                cap: MAX_ELEMENTS,
            })
        } else {
            Ok(())
        }
    }

    pub fn empty(n: usize) -> Self {
        assert!(n <= MAX_ELEMENTS, "ground set of {n} exceeds {MAX_ELEMENTS}");
        Relation {
            n,
            rows: vec![0; n],
        }
    }

    /// The diagonal `{(i, i)}`.
    pub fn identity(n: usize) -> Self {
        let mut r = Self::empty(n);
        for i in 0..n {
            r.rows[i] = bit(i);
        }
        r
    }

    pub fn full(n: usize) -> Self {
        let mut r = Self::empty(n);
        let m = low_mask(n);
        r.rows.iter_mut().for_each(|w| *w = m);
        r
    }

    /// Builds a relation from a pair list, optionally adding the diagonal.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)], reflexive_implicit: bool) -> Result<Self> {
        Self::check_size(n)?;
        let mut r = if reflexive_implicit {
            Self::identity(n)
        } else {
            Self::empty(n)
        };
        for &(i, j) in pairs {
            if i >= n || j >= n {
                return Err(Error::Input(format!(
                    "pair ({i},{j}) out of range for ground set of {n} elements"
                )));
            }
            r.rows[i] |= bit(j);
        }
        Ok(r)
    }

    /// Builds a relation from raw row words. Bits at or above `n` are dropped.
    pub fn from_rows(n: usize, rows: Vec<u64>) -> Result<Self> {
        Self::check_size(n)?;
        if rows.len() != n {
            return Err(Error::Input(format!(
                "expected {n} rows, got {}",
                rows.len()
            )));
        }
        let m = low_mask(n);
        Ok(Relation {
            n,
            rows: rows.into_iter().map(|w| w & m).collect(),
        })
    }

    /// Builds a relation from a predicate evaluated on every pair.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut r = Self::empty(n);
        for i in 0..n {
            for j in 0..n {
                if f(i, j) {
                    r.rows[i] |= bit(j);
                }
            }
        }
        r
    }

    /// Row-major flat bitmask; only valid for `n <= 8`.
    pub(crate) fn flat(&self) -> u64 {
        debug_assert!(self.n <= 8);
        let mut m = 0u64;
        for (i, &w) in self.rows.iter().enumerate() {
            m |= w << (i * self.n);
        }
        m
    }

    pub(crate) fn from_flat(n: usize, m: u64) -> Self {
        debug_assert!(n <= 8);
        let row_mask = low_mask(n);
        Relation {
            n,
            rows: (0..n).map(|i| (m >> (i * n)) & row_mask).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.rows[i] & bit(j) != 0
    }

    /// Successor set of `i` as a bit word.
    #[inline]
    pub fn row(&self, i: usize) -> u64 {
        self.rows[i]
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    /// Number of pairs.
    pub fn len(&self) -> usize {
        self.rows.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(|&w| w == 0)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, &w)| bits(w).map(move |j| (i, j)))
    }

    pub fn with_pair(mut self, i: usize, j: usize) -> Self {
        self.rows[i] |= bit(j);
        self
    }

    pub fn without_pair(mut self, i: usize, j: usize) -> Self {
        self.rows[i] &= !bit(j);
        self
    }

    pub fn same_ground(&self, other: &Relation) -> Result<()> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(Error::ground_mismatch(self.n, other.n))
        }
    }

    fn zip(&self, other: &Relation, f: impl Fn(u64, u64) -> u64) -> Relation {
        assert_eq!(self.n, other.n, "ground set mismatch");
        Relation {
            n: self.n,
            rows: self
                .rows
                .iter()
                .zip(&other.rows)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn union(&self, other: &Relation) -> Relation {
        self.zip(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &Relation) -> Relation {
        self.zip(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &Relation) -> Relation {
        self.zip(other, |a, b| a & !b)
    }

    /// `(A x A) \ self`.
    pub fn complement(&self) -> Relation {
        let m = low_mask(self.n);
        Relation {
            n: self.n,
            rows: self.rows.iter().map(|&w| !w & m).collect(),
        }
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.n == other.n && self.rows.iter().zip(&other.rows).all(|(&a, &b)| a & !b == 0)
    }

    /// First pair of `self` that is missing from `other`.
    pub fn first_missing_from(&self, other: &Relation) -> Option<(usize, usize)> {
        for i in 0..self.n {
            let extra = self.rows[i] & !other.rows[i];
            if extra != 0 {
                return Some((i, extra.trailing_zeros() as usize));
            }
        }
        None
    }

    pub fn inverse(&self) -> Relation {
        let mut r = Relation::empty(self.n);
        for (i, j) in self.pairs() {
            r.rows[j] |= bit(i);
        }
        r
    }

    /// Relational composition `self ∘ other = {(x, z) | (x, y) ∈ self, (y, z) ∈ other}`.
    pub fn compose(&self, other: &Relation) -> Relation {
        assert_eq!(self.n, other.n, "ground set mismatch");
        let mut r = Relation::empty(self.n);
        for i in 0..self.n {
            let mut acc = 0;
            for y in bits(self.rows[i]) {
                acc |= other.rows[y];
            }
            r.rows[i] = acc;
        }
        r
    }

    /// Smallest transitive superset (Warshall over bit rows).
    pub fn transitive_closure(&self) -> Relation {
        let mut rows = self.rows.clone();
        for k in 0..self.n {
            let rk = rows[k];
            for row in rows.iter_mut() {
                if *row & bit(k) != 0 {
                    *row |= rk;
                }
            }
        }
        Relation { n: self.n, rows }
    }

    pub fn reflexive_closure(&self) -> Relation {
        self.union(&Relation::identity(self.n))
    }

    pub fn reflexive_violation(&self) -> Option<Violation> {
        (0..self.n)
            .find(|&x| !self.contains(x, x))
            .map(|x| Violation::NotReflexive { x })
    }

    pub fn transitive_violation(&self) -> Option<Violation> {
        for x in 0..self.n {
            for y in bits(self.rows[x]) {
                let missing = self.rows[y] & !self.rows[x];
                if missing != 0 {
                    let z = missing.trailing_zeros() as usize;
                    return Some(Violation::NotTransitive { x, y, z });
                }
            }
        }
        None
    }

    pub fn antisymmetric_violation(&self) -> Option<Violation> {
        for (x, y) in self.pairs() {
            if x < y && self.contains(y, x) {
                return Some(Violation::NotAntisymmetric { x, y });
            }
        }
        None
    }

    pub fn symmetric_violation(&self) -> Option<Violation> {
        self.pairs()
            .find(|&(x, y)| !self.contains(y, x))
            .map(|(x, y)| Violation::NotSymmetric { x, y })
    }

    pub fn total_violation(&self) -> Option<Violation> {
        for x in 0..self.n {
            for y in x + 1..self.n {
                if !self.contains(x, y) && !self.contains(y, x) {
                    return Some(Violation::NotTotal { x, y });
                }
            }
        }
        None
    }

    pub fn classify(&self) -> Properties {
        Properties {
            reflexive: self.reflexive_violation().is_none(),
            transitive: self.transitive_violation().is_none(),
            antisymmetric: self.antisymmetric_violation().is_none(),
            symmetric: self.symmetric_violation().is_none(),
            total: self.total_violation().is_none(),
        }
    }

    /// `self ∩ (B x B)` re-indexed onto `0..|B|`. `elements` must be sorted
    /// and duplicate-free.
    pub(crate) fn restrict_sorted(&self, elements: &[usize]) -> Relation {
        let mut r = Relation::empty(elements.len());
        for (a, &x) in elements.iter().enumerate() {
            for (b, &y) in elements.iter().enumerate() {
                if self.contains(x, y) {
                    r.rows[a] |= bit(b);
                }
            }
        }
        r
    }

    /// Pulls a relation on `0..m` back along `f: 0..n -> 0..m`:
    /// `{(a, b) | (f(a), f(b)) ∈ target}`.
    pub fn pull_back(target: &Relation, f: &[usize]) -> Relation {
        Relation::from_fn(f.len(), |a, b| target.contains(f[a], f[b]))
    }

    /// Pushes `self` forward along `f: 0..n -> 0..m`:
    /// `{(f(a), f(b)) | (a, b) ∈ self}`.
    pub fn push_forward(&self, f: &[usize], m: usize) -> Relation {
        let mut r = Relation::empty(m);
        for (a, b) in self.pairs() {
            r.rows[f[a]] |= bit(f[b]);
        }
        r
    }

    /// Equivalence classes of a reflexive symmetric transitive relation,
    /// ordered by minimum member, plus the element-to-class map.
    pub(crate) fn classes(&self) -> (Vec<Vec<usize>>, Vec<usize>) {
        let mut class_of = vec![usize::MAX; self.n];
        let mut classes = Vec::new();
        for x in 0..self.n {
            if class_of[x] != usize::MAX {
                continue;
            }
            let members: Vec<usize> = bits(self.rows[x]).collect();
            for &m in &members {
                class_of[m] = classes.len();
            }
            classes.push(members);
        }
        (classes, class_of)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(n: usize, pairs: &[(usize, usize)]) -> Relation {
        Relation::from_pairs(n, pairs, false).unwrap()
    }

    #[test]
    fn make_relation_examples() {
        let r = Relation::from_pairs(2, &[], true).unwrap();
        assert_eq!(r, Relation::identity(2));
        let r = Relation::from_pairs(2, &[(0, 1)], true).unwrap();
        assert_eq!(r.pairs().collect::<Vec<_>>(), vec![(0, 0), (0, 1), (1, 1)]);
        assert!(matches!(
            Relation::from_pairs(2, &[(0, 2)], true),
            Err(Error::Input(_))
        ));
        assert!(matches!(
            Relation::from_pairs(65, &[], true),
            Err(Error::Resource { .. })
        ));
    }

    #[test]
    fn classify_examples() {
        let p = Relation::identity(3).classify();
        assert!(p.reflexive && p.transitive && p.antisymmetric && p.symmetric && !p.total);

        let p = Relation::full(2).classify();
        assert!(p.reflexive && p.transitive && p.symmetric && p.total && !p.antisymmetric);

        let r = rel(3, &[(0, 1), (1, 2)]);
        let p = r.classify();
        assert!(!p.reflexive && !p.transitive);
        assert_eq!(
            r.transitive_violation(),
            Some(Violation::NotTransitive { x: 0, y: 1, z: 2 })
        );
    }

    #[test]
    fn empty_ground_set_is_vacuous() {
        let p = Relation::empty(0).classify();
        assert!(p.reflexive && p.transitive && p.antisymmetric && p.symmetric && p.total);
    }

    #[test]
    fn closure_examples() {
        let r = rel(3, &[(0, 1), (1, 2)]);
        assert_eq!(r.transitive_closure(), rel(3, &[(0, 1), (1, 2), (0, 2)]));

        let cycle = rel(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        assert_eq!(cycle.transitive_closure(), Relation::full(4));

        let chain = rel(3, &[(0, 0), (1, 1), (2, 2), (0, 1), (1, 2), (0, 2)]);
        assert_eq!(chain.transitive_closure(), chain);
    }

    #[test]
    fn compose_and_inverse() {
        let r = rel(3, &[(0, 1)]);
        let s = rel(3, &[(1, 2)]);
        assert_eq!(r.compose(&s), rel(3, &[(0, 2)]));
        assert_eq!(r.inverse(), rel(3, &[(1, 0)]));
    }

    #[test]
    fn flat_round_trip() {
        let r = rel(3, &[(0, 1), (2, 0), (1, 1)]);
        assert_eq!(Relation::from_flat(3, r.flat()), r);
    }

    #[test]
    fn ground_set_labels() {
        let g = GroundSet::labeled(vec!["a".into(), "b".into()]).unwrap();
        assert_eq!(g.index_of("b"), Some(1));
        assert_eq!(g.name(0), "a");
        assert!(GroundSet::labeled(vec!["a".into(), "a".into()]).is_err());
        assert_eq!(GroundSet::unlabeled(3).index_of("2"), Some(2));
        assert_eq!(GroundSet::unlabeled(3).index_of("3"), None);
    }
}
