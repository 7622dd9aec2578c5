//! Validated refinements of [`Relation`]: quasiorders, partial orders,
//! linear orders and equivalences, plus the lattice operations on
//! quasiorders and the quotient by the symmetric part.

use std::ops::Deref;

use crate::error::{Error, Result};
use crate::relation::{bit, bits, Relation};

macro_rules! relation_newtype {
    ($name:ident) => {
        impl Deref for $name {
            type Target = Relation;
            fn deref(&self) -> &Relation {
                self.as_relation()
            }
        }

        impl AsRef<Relation> for $name {
            fn as_ref(&self) -> &Relation {
                self.as_relation()
            }
        }

        impl From<$name> for Relation {
            fn from(v: $name) -> Relation {
                v.into_relation()
            }
        }
    };
}

/// A reflexive, transitive relation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Quasiorder(Relation);

impl Quasiorder {
    pub fn new(rel: Relation) -> Result<Self> {
        if let Some(v) = rel.reflexive_violation().or_else(|| rel.transitive_violation()) {
            return Err(Error::Validation(v));
        }
        Ok(Quasiorder(rel))
    }

    /// Reflexive-transitive closure of an arbitrary relation.
    pub fn generated_by(rel: &Relation) -> Self {
        Quasiorder(rel.reflexive_closure().transitive_closure())
    }

    pub(crate) fn new_unchecked(rel: Relation) -> Self {
        debug_assert!(rel.reflexive_violation().is_none());
        debug_assert!(rel.transitive_violation().is_none());
        Quasiorder(rel)
    }

    pub fn identity(n: usize) -> Self {
        Quasiorder(Relation::identity(n))
    }

    pub fn full(n: usize) -> Self {
        Quasiorder(Relation::full(n))
    }

    pub fn as_relation(&self) -> &Relation {
        &self.0
    }

    pub fn into_relation(self) -> Relation {
        self.0
    }

    pub fn inverse(&self) -> Quasiorder {
        Quasiorder(self.0.inverse())
    }

    pub fn is_trivial(&self) -> bool {
        self.0 == Relation::identity(self.n()) || self.0 == Relation::full(self.n())
    }

    /// `q ∩ q⁻¹`.
    pub fn symmetric_part(&self) -> Equivalence {
        Equivalence(self.0.intersection(&self.0.inverse()))
    }

    pub fn to_partial_order(&self) -> Result<PartialOrder> {
        PartialOrder::new(self.0.clone())
    }

    /// Restriction to a subset of the ground set.
    pub fn restrict(&self, elements: &[usize]) -> Result<Restriction> {
        let mut index_map: Vec<usize> = elements.to_vec();
        index_map.sort_unstable();
        index_map.dedup();
        if let Some(&bad) = index_map.iter().find(|&&x| x >= self.n()) {
            return Err(Error::Input(format!(
                "element {bad} out of range for ground set of {} elements",
                self.n()
            )));
        }
        let order = Quasiorder(self.0.restrict_sorted(&index_map));
        Ok(Restriction { order, index_map })
    }

    /// The classes of `q ∩ q⁻¹` and the partial order they inherit.
    pub fn induced_order(&self) -> QuotientMap {
        let (classes, class_of) = self.symmetric_part().0.classes();
        let k = classes.len();
        let induced = Relation::from_fn(k, |a, b| self.contains(classes[a][0], classes[b][0]));
        let quotient = QuotientMap {
            classes,
            class_of,
            induced: PartialOrder::new(induced)
                .expect("order induced on symmetric-part classes is a partial order"),
        };
        debug_assert!(quotient.characterizations_agree(self));
        quotient
    }
}

relation_newtype!(Quasiorder);

/// Result of restricting a quasiorder to a subset `B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Restriction {
    pub order: Quasiorder,
    /// `index_map[i]` is the original element behind restricted index `i`.
    pub index_map: Vec<usize>,
}

/// Meet in the lattice of quasiorders: plain intersection.
pub fn quord_meet(a: &Quasiorder, b: &Quasiorder) -> Result<Quasiorder> {
    a.same_ground(b)?;
    Ok(Quasiorder(a.intersection(b)))
}

/// Join in the lattice of quasiorders: transitive closure of the union.
pub fn quord_join(a: &Quasiorder, b: &Quasiorder) -> Result<Quasiorder> {
    a.same_ground(b)?;
    Ok(Quasiorder(a.union(b).transitive_closure()))
}

/// A reflexive, transitive, antisymmetric relation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialOrder(Quasiorder);

impl PartialOrder {
    pub fn new(rel: Relation) -> Result<Self> {
        let q = Quasiorder::new(rel)?;
        if let Some(v) = q.antisymmetric_violation() {
            return Err(Error::Validation(v));
        }
        Ok(PartialOrder(q))
    }

    pub(crate) fn new_unchecked(rel: Relation) -> Self {
        debug_assert!(rel.antisymmetric_violation().is_none());
        PartialOrder(Quasiorder::new_unchecked(rel))
    }

    pub fn identity(n: usize) -> Self {
        PartialOrder(Quasiorder::identity(n))
    }

    pub fn as_quasiorder(&self) -> &Quasiorder {
        &self.0
    }

    pub fn into_quasiorder(self) -> Quasiorder {
        self.0
    }

    pub fn as_relation(&self) -> &Relation {
        &self.0 .0
    }

    pub fn into_relation(self) -> Relation {
        self.0 .0
    }

    pub fn inverse(&self) -> PartialOrder {
        PartialOrder(self.0.inverse())
    }

    pub fn is_linear(&self) -> bool {
        self.total_violation().is_none()
    }

    pub fn to_linear_order(&self) -> Result<LinearOrder> {
        LinearOrder::new(self.as_relation().clone())
    }

    /// True iff `self ⊆ other`, i.e. `other` extends `self`.
    pub fn is_extended_by(&self, other: &PartialOrder) -> bool {
        self.is_subset(other)
    }
}

relation_newtype!(PartialOrder);

/// A total partial order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearOrder(PartialOrder);

impl LinearOrder {
    pub fn new(rel: Relation) -> Result<Self> {
        let p = PartialOrder::new(rel)?;
        if let Some(v) = p.total_violation() {
            return Err(Error::Validation(v));
        }
        Ok(LinearOrder(p))
    }

    pub(crate) fn new_unchecked(rel: Relation) -> Self {
        debug_assert!(rel.total_violation().is_none());
        LinearOrder(PartialOrder::new_unchecked(rel))
    }

    /// The order listing `sequence` from smallest to largest.
    pub fn from_sequence(sequence: &[usize]) -> Result<Self> {
        let n = sequence.len();
        let mut position = vec![usize::MAX; n];
        for (pos, &x) in sequence.iter().enumerate() {
            if x >= n || position[x] != usize::MAX {
                return Err(Error::Input(format!(
                    "sequence {sequence:?} is not a permutation of 0..{n}"
                )));
            }
            position[x] = pos;
        }
        Ok(LinearOrder(PartialOrder(Quasiorder(Relation::from_fn(
            n,
            |a, b| position[a] <= position[b],
        )))))
    }

    /// `0 < 1 < … < n-1`.
    pub fn identity_permutation(n: usize) -> Self {
        let seq: Vec<usize> = (0..n).collect();
        Self::from_sequence(&seq).expect("identity is a permutation")
    }

    /// Elements from smallest to largest.
    pub fn sequence(&self) -> Vec<usize> {
        let n = self.n();
        let mut seq = vec![0; n];
        for x in 0..n {
            // number of elements strictly above x
            let above = self.row(x).count_ones() as usize - 1;
            seq[n - 1 - above] = x;
        }
        seq
    }

    /// Position of every element, `0` for the smallest.
    pub fn positions(&self) -> Vec<usize> {
        let n = self.n();
        (0..n)
            .map(|x| n - self.row(x).count_ones() as usize)
            .collect()
    }

    pub fn as_partial_order(&self) -> &PartialOrder {
        &self.0
    }

    pub fn as_quasiorder(&self) -> &Quasiorder {
        &self.0 .0
    }

    pub fn as_relation(&self) -> &Relation {
        &self.0 .0 .0
    }

    pub fn into_relation(self) -> Relation {
        self.0 .0 .0
    }

    pub fn inverse(&self) -> LinearOrder {
        LinearOrder(self.0.inverse())
    }

    /// Strict comparison `a < b`.
    pub fn less(&self, a: usize, b: usize) -> bool {
        a != b && self.contains(a, b)
    }
}

relation_newtype!(LinearOrder);

/// A reflexive, symmetric, transitive relation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Equivalence(Relation);

impl Equivalence {
    pub fn new(rel: Relation) -> Result<Self> {
        if let Some(v) = rel
            .reflexive_violation()
            .or_else(|| rel.symmetric_violation())
            .or_else(|| rel.transitive_violation())
        {
            return Err(Error::Validation(v));
        }
        Ok(Equivalence(rel))
    }

    pub fn as_relation(&self) -> &Relation {
        &self.0
    }

    pub fn into_relation(self) -> Relation {
        self.0
    }

    /// Classes ordered by minimum member, plus the element-to-class map.
    pub fn classes(&self) -> (Vec<Vec<usize>>, Vec<usize>) {
        self.0.classes()
    }
}

relation_newtype!(Equivalence);

/// The partition of a quasiorder's ground set by its symmetric part and the
/// partial order induced on the classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientMap {
    /// Classes in order of their minimum element; members ascending.
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
    pub induced: PartialOrder,
}

impl QuotientMap {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// `{(a, b) | (class(a), class(b)) ∈ r}` on the original ground set.
    pub fn pull_back(&self, r: &Relation) -> Relation {
        Relation::pull_back(r, &self.class_of)
    }

    /// `{(class(a), class(b)) | (a, b) ∈ r}` on the classes.
    pub fn push_forward(&self, r: &Relation) -> Relation {
        r.push_forward(&self.class_of, self.classes.len())
    }

    /// Lifts a linear order given on elements to one on classes, ordering
    /// each class by the position of its first member in `order`.
    pub fn lift_linear_order(&self, order: &LinearOrder) -> LinearOrder {
        let mut seen = vec![false; self.len()];
        let mut seq = Vec::with_capacity(self.len());
        for x in order.sequence() {
            let c = self.class_of[x];
            if !seen[c] {
                seen[c] = true;
                seq.push(c);
            }
        }
        LinearOrder::from_sequence(&seq).expect("classes form a permutation")
    }

    /// Checks that "some member of [a] relates to some member of [b]" and
    /// "every member of [a] relates to every member of [b]" pick out the
    /// same class pairs.
    pub fn characterizations_agree(&self, q: &Quasiorder) -> bool {
        let k = self.classes.len();
        (0..k).all(|a| {
            (0..k).all(|b| {
                let ca = &self.classes[a];
                let cb = &self.classes[b];
                let some = ca.iter().any(|&x| cb.iter().any(|&y| q.contains(x, y)));
                let all = ca.iter().all(|&x| cb.iter().all(|&y| q.contains(x, y)));
                some == all && some == self.induced.contains(a, b)
            })
        })
    }
}

/// Enumerates all linear extensions of `p` in lexicographic order of their
/// element sequences.
pub fn linear_extensions(p: &PartialOrder) -> Vec<LinearOrder> {
    let n = p.n();
    // predecessors (strict) of each element
    let preds: Vec<u64> = (0..n)
        .map(|x| {
            let mut m = 0;
            for y in 0..n {
                if y != x && p.contains(y, x) {
                    m |= bit(y);
                }
            }
            m
        })
        .collect();
    let mut out = Vec::new();
    let mut seq = Vec::with_capacity(n);
    fn go(
        n: usize,
        preds: &[u64],
        placed: u64,
        seq: &mut Vec<usize>,
        out: &mut Vec<LinearOrder>,
    ) {
        if seq.len() == n {
            out.push(LinearOrder::from_sequence(seq).expect("permutation"));
            return;
        }
        let free = !placed & crate::relation::low_mask(n);
        for x in bits(free) {
            if preds[x] & !placed == 0 {
                seq.push(x);
                go(n, preds, placed | bit(x), seq, out);
                seq.pop();
            }
        }
    }
    go(n, &preds, 0, &mut seq, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Violation;

    fn qo(n: usize, pairs: &[(usize, usize)]) -> Quasiorder {
        Quasiorder::new(Relation::from_pairs(n, pairs, true).unwrap()).unwrap()
    }

    /// The four-element Boolean lattice with bottom 0, atoms 1 and 2, top 3.
    fn m2() -> Quasiorder {
        qo(4, &[(0, 1), (0, 2), (1, 3), (2, 3), (0, 3)])
    }

    #[test]
    fn m2_is_a_partial_order() {
        let p = m2().to_partial_order().unwrap();
        assert!(!p.is_linear());
        assert_eq!(p.len(), 9);
    }

    #[test]
    fn validation_names_first_violation() {
        let r = Relation::from_pairs(3, &[(0, 1), (1, 2)], true).unwrap();
        match Quasiorder::new(r) {
            Err(Error::Validation(Violation::NotTransitive { x: 0, y: 1, z: 2 })) => {}
            other => panic!("unexpected {other:?}"),
        }
        let r = Relation::from_pairs(2, &[(0, 1)], false).unwrap();
        assert!(matches!(
            Quasiorder::new(r),
            Err(Error::Validation(Violation::NotReflexive { x: 0 }))
        ));
        let r = Relation::full(2);
        assert!(matches!(
            PartialOrder::new(r),
            Err(Error::Validation(Violation::NotAntisymmetric { x: 0, y: 1 }))
        ));
        assert!(matches!(
            LinearOrder::new(Relation::identity(2)),
            Err(Error::Validation(Violation::NotTotal { x: 0, y: 1 }))
        ));
    }

    #[test]
    fn lattice_examples() {
        let a = qo(2, &[(0, 1)]);
        let b = qo(2, &[(1, 0)]);
        assert_eq!(quord_join(&a, &b).unwrap(), Quasiorder::full(2));
        assert_eq!(quord_meet(&m2(), &Quasiorder::identity(4)).unwrap(), Quasiorder::identity(4));
        let a = qo(3, &[(0, 1)]);
        let b = qo(3, &[(1, 2)]);
        assert_eq!(quord_join(&a, &b).unwrap(), qo(3, &[(0, 1), (1, 2), (0, 2)]));
        assert!(quord_join(&a, &Quasiorder::full(2)).is_err());
    }

    #[test]
    fn inverse_and_restrict() {
        let l = LinearOrder::from_sequence(&[0, 1, 2]).unwrap();
        assert_eq!(l.inverse().sequence(), vec![2, 1, 0]);

        let r = m2().restrict(&[0, 1, 3]).unwrap();
        assert_eq!(r.index_map, vec![0, 1, 3]);
        assert_eq!(r.order, qo(3, &[(0, 1), (1, 2), (0, 2)]));

        let whole = m2().restrict(&[3, 2, 1, 0]).unwrap();
        assert_eq!(whole.order, m2());
        assert!(m2().restrict(&[4]).is_err());
    }

    #[test]
    fn symmetric_part_examples() {
        assert_eq!(m2().symmetric_part().into_relation(), Relation::identity(4));
        assert_eq!(
            Quasiorder::full(3).symmetric_part().into_relation(),
            Relation::full(3)
        );
        let q = qo(3, &[(0, 1), (1, 0), (0, 2), (1, 2)]);
        assert_eq!(
            q.symmetric_part().into_relation(),
            Relation::from_pairs(3, &[(0, 1), (1, 0)], true).unwrap()
        );
    }

    #[test]
    fn induced_order_examples() {
        let qm = Quasiorder::full(3).induced_order();
        assert_eq!(qm.classes, vec![vec![0, 1, 2]]);
        assert_eq!(qm.induced.n(), 1);

        let qm = m2().induced_order();
        assert_eq!(qm.classes.len(), 4);
        assert_eq!(qm.induced.as_relation(), m2().as_relation());

        let q = qo(3, &[(0, 1), (1, 0), (0, 2), (1, 2)]);
        let qm = q.induced_order();
        assert_eq!(qm.classes, vec![vec![0, 1], vec![2]]);
        assert_eq!(qm.class_of, vec![0, 0, 1]);
        assert!(qm.induced.contains(0, 1) && !qm.induced.contains(1, 0));
        assert!(qm.characterizations_agree(&q));
    }

    #[test]
    fn sequences_and_positions() {
        let l = LinearOrder::from_sequence(&[2, 0, 3, 1]).unwrap();
        assert_eq!(l.sequence(), vec![2, 0, 3, 1]);
        assert_eq!(l.positions(), vec![1, 3, 0, 2]);
        assert!(l.less(2, 1));
        assert!(LinearOrder::from_sequence(&[0, 0]).is_err());
    }

    #[test]
    fn linear_extensions_of_m2() {
        let ext = linear_extensions(&m2().to_partial_order().unwrap());
        let seqs: Vec<_> = ext.iter().map(|l| l.sequence()).collect();
        assert_eq!(seqs, vec![vec![0, 1, 2, 3], vec![0, 2, 1, 3]]);
        assert_eq!(linear_extensions(&PartialOrder::identity(4)).len(), 24);
        assert_eq!(linear_extensions(&PartialOrder::identity(0)).len(), 1);
    }
}
