//! Half-space quasiorders: quasiorders whose complement together with the
//! diagonal is again a quasiorder.
//!
//! Every half-space is a linearly ordered sequence of *boxes*, each of which
//! carries either the full relation or the identity. [`box_decomposition`]
//! and [`reconstruct_from_boxes`] convert between the two views.

use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Violation};
use crate::order::{LinearOrder, Quasiorder};
use crate::relation::{bit, bits, low_mask, Relation};

/// Finds `(x, y, z)` with `x, y` incomparable, `(x, z) ∈ q`, `z != x` and
/// `(y, z) ∉ q`. No such triple exists exactly when `q` is a half-space.
pub fn halfspace_witness(q: &Quasiorder) -> Option<(usize, usize, usize)> {
    let n = q.n();
    for x in 0..n {
        let above_x = q.row(x) & !bit(x);
        if above_x == 0 {
            continue;
        }
        for y in 0..n {
            if y == x || q.contains(x, y) || q.contains(y, x) {
                continue;
            }
            let missing = above_x & !q.row(y);
            if missing != 0 {
                return Some((x, y, missing.trailing_zeros() as usize));
            }
        }
    }
    None
}

pub fn is_halfspace(q: &Quasiorder) -> bool {
    halfspace_witness(q).is_none()
}

/// Independent formulations of the half-space property. They are slower than
/// [`halfspace_witness`] and exist to cross-check it.
pub mod criteria {
    use super::*;

    /// `Δ ∪ ((A x A) \ q)` is transitive.
    pub fn complement_is_transitive(q: &Relation) -> bool {
        complement_with_diagonal(q).transitive_violation().is_none()
    }

    /// Every restriction to a three-element subset has a transitive
    /// complement-with-diagonal.
    pub fn all_triples_are_halfspaces(q: &Relation) -> bool {
        let n = q.n();
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    if !complement_is_transitive(&q.restrict_sorted(&[a, b, c])) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Brute-force triple scan: `x, y` incomparable, `(x, z) ∈ q`, `z != x`
    /// imply `(y, z) ∈ q`.
    pub fn upward_condition(q: &Relation) -> bool {
        let n = q.n();
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if !q.contains(x, y) && !q.contains(y, x) && q.contains(x, z) && z != x && !q.contains(y, z) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Dual scan: `z, y` incomparable, `(x, z) ∈ q`, `x != z` imply
    /// `(x, y) ∈ q`.
    pub fn downward_condition(q: &Relation) -> bool {
        let n = q.n();
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if !q.contains(z, y) && !q.contains(y, z) && q.contains(x, z) && x != z && !q.contains(x, y) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// `Δ ∪ ((A x A) \ r)`.
pub fn complement_with_diagonal(r: &Relation) -> Relation {
    r.complement().union(&Relation::identity(r.n()))
}

/// A quasiorder known to be a half-space.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfSpace(Quasiorder);

impl HalfSpace {
    pub fn new(q: Quasiorder) -> Result<Self> {
        match halfspace_witness(&q) {
            None => Ok(HalfSpace(q)),
            Some((x, y, z)) => Err(Error::Validation(Violation::NotHalfSpace { x, y, z })),
        }
    }

    pub fn from_relation(r: Relation) -> Result<Self> {
        Self::new(Quasiorder::new(r)?)
    }

    pub(crate) fn new_unchecked(r: Relation) -> Self {
        let h = HalfSpace(Quasiorder::new_unchecked(r));
        debug_assert!(is_halfspace(&h.0));
        h
    }

    pub fn full(n: usize) -> Self {
        HalfSpace(Quasiorder::full(n))
    }

    pub fn identity(n: usize) -> Self {
        HalfSpace(Quasiorder::identity(n))
    }

    pub fn as_quasiorder(&self) -> &Quasiorder {
        &self.0
    }

    pub fn into_quasiorder(self) -> Quasiorder {
        self.0
    }

    pub fn inverse(&self) -> HalfSpace {
        HalfSpace(self.0.inverse())
    }

    /// Restriction to a subset stays a half-space.
    pub fn restrict(&self, elements: &[usize]) -> Result<(HalfSpace, Vec<usize>)> {
        let r = self.0.restrict(elements)?;
        Ok((HalfSpace::new_unchecked(r.order.into_relation()), r.index_map))
    }
}

impl Deref for HalfSpace {
    type Target = Quasiorder;
    fn deref(&self) -> &Quasiorder {
        &self.0
    }
}

impl From<LinearOrder> for HalfSpace {
    fn from(l: LinearOrder) -> Self {
        HalfSpace::new_unchecked(l.into_relation())
    }
}

/// The unique half-space `β` with `α ∩ β = Δ` and `α ∪ β = A x A`.
pub fn complement_halfspace(h: &HalfSpace) -> HalfSpace {
    HalfSpace::new_unchecked(complement_with_diagonal(h))
}

/// True iff `a ∩ b = Δ` and `a ∪ b = A x A`.
pub fn check_complementary_pair(a: &Quasiorder, b: &Quasiorder) -> Result<bool> {
    a.same_ground(b)?;
    let n = a.n();
    Ok(a.intersection(b) == Relation::identity(n) && a.union(b) == Relation::full(n))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoxKind {
    /// The identity on the box.
    Empty,
    /// The full relation on the box (only for boxes with two or more members).
    Full,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HalfSpaceBox {
    /// Members in ascending order.
    pub members: Vec<usize>,
    pub kind: BoxKind,
}

/// A half-space in normal form: boxes listed from lowest to highest.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BoxDecomposition {
    n: usize,
    boxes: Vec<HalfSpaceBox>,
}

impl BoxDecomposition {
    /// Validates that the boxes partition `0..n` and that no singleton is
    /// marked full. Members are sorted.
    pub fn new(n: usize, boxes: Vec<HalfSpaceBox>) -> Result<Self> {
        if n > crate::relation::MAX_ELEMENTS {
            return Err(Error::Resource {
                what: "ground set",
                size: n,
                cap: crate::relation::MAX_ELEMENTS,
            });
        }
        let mut seen = 0u64;
        let mut boxes = boxes;
        for b in boxes.iter_mut() {
            if b.members.is_empty() {
                return Err(Error::Decomposition("empty box".into()));
            }
            b.members.sort_unstable();
            for &m in &b.members {
                if m >= n {
                    return Err(Error::Decomposition(format!(
                        "element {m} out of range for {n} elements"
                    )));
                }
                if seen & bit(m) != 0 {
                    return Err(Error::Decomposition(format!("element {m} in two boxes")));
                }
                seen |= bit(m);
            }
            if b.members.len() == 1 && b.kind == BoxKind::Full {
                return Err(Error::Decomposition(format!(
                    "singleton box {{{}}} marked full",
                    b.members[0]
                )));
            }
        }
        if seen != low_mask(n) {
            let missing = (!seen & low_mask(n)).trailing_zeros();
            return Err(Error::Decomposition(format!("element {missing} in no box")));
        }
        Ok(BoxDecomposition { n, boxes })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn boxes(&self) -> &[HalfSpaceBox] {
        &self.boxes
    }

    /// Box index of every element.
    pub fn box_of(&self) -> Vec<usize> {
        let mut out = vec![0; self.n];
        for (i, b) in self.boxes.iter().enumerate() {
            for &m in &b.members {
                out[m] = i;
            }
        }
        out
    }

    /// Renders as `[{a} < {b,c}∅ < {d,e}■]`; singleton boxes carry no marker.
    pub fn render(&self, name: impl Fn(usize) -> String) -> String {
        let parts: Vec<String> = self
            .boxes
            .iter()
            .map(|b| {
                let inner: Vec<String> = b.members.iter().map(|&m| name(m)).collect();
                let marker = match (b.members.len(), b.kind) {
                    (1, _) => "",
                    (_, BoxKind::Empty) => "∅",
                    (_, BoxKind::Full) => "■",
                };
                format!("{{{}}}{}", inner.join(","), marker)
            })
            .collect();
        format!("[{}]", parts.join(" < "))
    }

    /// The decomposition of the complementary half-space: box order reversed
    /// and every non-singleton flag flipped.
    pub fn complement(&self) -> BoxDecomposition {
        let boxes = self
            .boxes
            .iter()
            .rev()
            .map(|b| HalfSpaceBox {
                members: b.members.clone(),
                kind: if b.members.len() == 1 {
                    BoxKind::Empty
                } else {
                    match b.kind {
                        BoxKind::Empty => BoxKind::Full,
                        BoxKind::Full => BoxKind::Empty,
                    }
                },
            })
            .collect();
        BoxDecomposition { n: self.n, boxes }
    }

    pub fn has_large_empty_box(&self) -> bool {
        self.boxes
            .iter()
            .any(|b| b.kind == BoxKind::Empty && b.members.len() > 1)
    }
}

/// Splits a half-space into its boxes.
///
/// Boxes are the classes of `(α ∩ α⁻¹) ∪ (β ∩ β⁻¹)` where `β` is the
/// complement; a box is full when it is a single nontrivial class of
/// `α ∩ α⁻¹`.
pub fn box_decomposition(h: &HalfSpace) -> BoxDecomposition {
    let n = h.n();
    let beta = complement_with_diagonal(h);
    let eps = h
        .symmetric_part()
        .into_relation()
        .union(&beta.intersection(&beta.inverse()));
    debug_assert!(eps.transitive_violation().is_none());
    let (classes, _) = eps.classes();
    let k = classes.len();
    // rank of a class = number of classes strictly below it
    let mut ranked: Vec<(usize, Vec<usize>)> = classes.into_iter().map(|c| (0, c)).collect();
    for i in 0..k {
        let rep = ranked[i].1[0];
        let below = (0..k)
            .filter(|&j| j != i && h.contains(ranked[j].1[0], rep))
            .count();
        ranked[i].0 = below;
    }
    ranked.sort_by_key(|(r, _)| *r);
    debug_assert!(ranked.iter().enumerate().all(|(i, (r, _))| i == *r));
    let boxes = ranked
        .into_iter()
        .map(|(_, members)| {
            let kind = if members.len() > 1 && h.contains(members[0], members[1]) {
                BoxKind::Full
            } else {
                BoxKind::Empty
            };
            HalfSpaceBox { members, kind }
        })
        .collect();
    BoxDecomposition { n, boxes }
}

/// Rebuilds the half-space described by a box decomposition.
pub fn reconstruct_from_boxes(d: &BoxDecomposition) -> HalfSpace {
    let n = d.n;
    let mut rows = vec![0u64; n];
    let mut above = 0u64;
    for b in d.boxes.iter().rev() {
        let mut members = 0u64;
        for &m in &b.members {
            members |= bit(m);
        }
        for &m in &b.members {
            rows[m] = above
                | match b.kind {
                    BoxKind::Full => members,
                    BoxKind::Empty => bit(m),
                };
        }
        above |= members;
    }
    HalfSpace::new_unchecked(Relation::from_rows(n, rows).expect("row count matches"))
}

/// True iff `set` is a box of `h`: no two members are strictly related and
/// no element can be added without breaking that.
pub fn is_box(h: &HalfSpace, set: &[usize]) -> Result<bool> {
    if set.is_empty() {
        return Err(Error::Input("box candidate must be nonempty".into()));
    }
    let n = h.n();
    let mut mask = 0u64;
    for &x in set {
        if x >= n {
            return Err(Error::Input(format!(
                "element {x} out of range for {n} elements"
            )));
        }
        mask |= bit(x);
    }
    let strict_free = |m: u64| {
        bits(m).all(|a| bits(m).all(|b| !(h.contains(a, b) && !h.contains(b, a))))
    };
    let maximal = strict_free(mask)
        && (0..n)
            .filter(|&x| mask & bit(x) == 0)
            .all(|x| !strict_free(mask | bit(x)));

    let by_decomposition = box_decomposition(h).boxes.iter().any(|b| {
        b.members.iter().fold(0u64, |m, &x| m | bit(x)) == mask
    });
    assert_eq!(
        maximal, by_decomposition,
        "box maximality disagrees with decomposition"
    );
    Ok(maximal)
}

/// The data `(f, X₁, R)` of a kernel presentation of a half-space:
/// `α = ker_{X₁}(f) ∪ f⁻¹(R)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelPresentation {
    /// `map[a]` is the codomain index of element `a`.
    pub map: Vec<usize>,
    /// Membership of each codomain point in `X₁`.
    pub kernel_points: Vec<bool>,
    /// Linear order on the codomain.
    pub order: LinearOrder,
}

impl KernelPresentation {
    pub fn new(map: Vec<usize>, kernel_points: Vec<bool>, order: LinearOrder) -> Result<Self> {
        let m = order.n();
        if kernel_points.len() != m {
            return Err(Error::Input(format!(
                "kernel subset has {} flags for a codomain of {m}",
                kernel_points.len()
            )));
        }
        if let Some(&bad) = map.iter().find(|&&x| x >= m) {
            return Err(Error::Input(format!(
                "map value {bad} outside codomain of {m}"
            )));
        }
        if map.len() > crate::relation::MAX_ELEMENTS {
            return Err(Error::Resource {
                what: "ground set",
                size: map.len(),
                cap: crate::relation::MAX_ELEMENTS,
            });
        }
        Ok(KernelPresentation {
            map,
            kernel_points,
            order,
        })
    }

    /// The canonical presentation: projection onto the boxes, full boxes as
    /// the kernel subset, box order as the linear order.
    pub fn canonical(h: &HalfSpace) -> Self {
        let d = box_decomposition(h);
        let k = d.boxes.len();
        KernelPresentation {
            map: d.box_of(),
            kernel_points: d.boxes.iter().map(|b| b.kind == BoxKind::Full).collect(),
            order: LinearOrder::identity_permutation(k),
        }
    }
}

/// `Δ ∪ {(a, b) | f(a) = f(b) ∈ X₁} ∪ {(a, b) | f(a) <_R f(b)}`.
pub fn standard_construction(k: &KernelPresentation) -> HalfSpace {
    let f = &k.map;
    let r = Relation::from_fn(f.len(), |a, b| {
        a == b
            || (f[a] == f[b] && k.kernel_points[f[a]])
            || k.order.less(f[a], f[b])
    });
    HalfSpace::new_unchecked(r)
}

/// [`standard_construction`] that additionally checks the result contains
/// `gamma`.
pub fn standard_construction_over(k: &KernelPresentation, gamma: &Quasiorder) -> Result<HalfSpace> {
    let h = standard_construction(k);
    gamma.same_ground(&h)?;
    if let Some(w) = gamma.first_missing_from(&h) {
        return Err(Error::precondition(
            "constructed half-space does not contain gamma",
            Some(w),
        ));
    }
    Ok(h)
}

/// Turns a linear realizer of the quotient order of `q` into a half-space
/// realizer of `q`, pulling each linear order back along the projection.
pub fn halfspace_realizer_from_linear_realizer(
    q: &Quasiorder,
    linear: &[LinearOrder],
) -> Result<Vec<HalfSpace>> {
    let quotient = q.induced_order();
    let k = quotient.len();
    if linear.is_empty() {
        return Err(Error::precondition("linear realizer is empty", None));
    }
    let mut meet = Relation::full(k);
    for l in linear {
        if l.n() != k {
            return Err(Error::ground_mismatch(l.n(), k));
        }
        if let Some(w) = quotient.induced.first_missing_from(l) {
            return Err(Error::precondition(
                "linear order does not extend the quotient order",
                Some(w),
            ));
        }
        meet = meet.intersection(l);
    }
    if let Some(w) = meet.first_missing_from(&quotient.induced) {
        return Err(Error::precondition(
            "linear orders do not intersect to the quotient order",
            Some(w),
        ));
    }
    let parts: Vec<HalfSpace> = linear
        .iter()
        .map(|l| HalfSpace::new_unchecked(quotient.pull_back(l)))
        .collect();
    debug_assert_eq!(
        parts
            .iter()
            .fold(Relation::full(q.n()), |acc, h| acc.intersection(h)),
        *q.as_relation()
    );
    Ok(parts)
}
