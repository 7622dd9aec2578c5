//! Direct products of quasiordered sets and the classification of products
//! that are half-spaces.
//!
//! Product elements are tuples encoded in mixed radix with factor 0 as the
//! most significant digit.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::halfspace::is_halfspace;
use crate::order::Quasiorder;
use crate::relation::{Relation, MAX_ELEMENTS};

/// Mixed-radix conversion between product tuples and element indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProductEncoding {
    factor_sizes: Vec<usize>,
    strides: Vec<usize>,
    size: usize,
}

impl ProductEncoding {
    pub fn new(factor_sizes: &[usize]) -> Result<Self> {
        if factor_sizes.is_empty() {
            return Err(Error::Input("a product needs at least one factor".into()));
        }
        if let Some(i) = factor_sizes.iter().position(|&s| s == 0) {
            return Err(Error::Input(format!("factor {i} has an empty ground set")));
        }
        let mut strides = vec![0; factor_sizes.len()];
        let mut size = 1usize;
        for i in (0..factor_sizes.len()).rev() {
            strides[i] = size;
            size = size.saturating_mul(factor_sizes[i]);
        }
        if size > MAX_ELEMENTS {
            return Err(Error::Resource {
                what: "direct product",
                size,
                cap: MAX_ELEMENTS,
            });
        }
        Ok(ProductEncoding {
            factor_sizes: factor_sizes.to_vec(),
            strides,
            size,
        })
    }

    pub fn factor_sizes(&self) -> &[usize] {
        &self.factor_sizes
    }

    pub fn strides(&self) -> &[usize] {
        &self.strides
    }

    /// Number of elements of the product.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn encode(&self, tuple: &[usize]) -> Result<usize> {
        if tuple.len() != self.factor_sizes.len() {
            return Err(Error::Input(format!(
                "tuple has {} coordinates, product has {} factors",
                tuple.len(),
                self.factor_sizes.len()
            )));
        }
        let mut index = 0;
        for (i, (&c, &s)) in tuple.iter().zip(&self.factor_sizes).enumerate() {
            if c >= s {
                return Err(Error::Input(format!("coordinate {i} is {c}, factor size {s}")));
            }
            index += c * self.strides[i];
        }
        Ok(index)
    }

    pub fn decode(&self, index: usize) -> Vec<usize> {
        self.strides
            .iter()
            .zip(&self.factor_sizes)
            .map(|(&st, &s)| (index / st) % s)
            .collect()
    }
}

fn componentwise(factors: &[&Relation], enc: &ProductEncoding) -> Relation {
    let tuples: Vec<Vec<usize>> = (0..enc.size).map(|i| enc.decode(i)).collect();
    Relation::from_fn(enc.size, |a, b| {
        factors
            .iter()
            .enumerate()
            .all(|(i, g)| g.contains(tuples[a][i], tuples[b][i]))
    })
}

/// The componentwise relation on the product of the factors' ground sets.
///
/// Also checks on the instance that the symmetric part of the product is the
/// product of the symmetric parts, and that the partial order induced by the
/// product is the product of the induced partial orders.
pub fn direct_product(factors: &[Quasiorder]) -> Result<(Quasiorder, ProductEncoding)> {
    let sizes: Vec<usize> = factors.iter().map(|g| g.n()).collect();
    let enc = ProductEncoding::new(&sizes)?;
    let rels: Vec<&Relation> = factors.iter().map(|g| g.as_relation()).collect();
    let product = Quasiorder::new(componentwise(&rels, &enc))
        .map_err(|e| Error::Invariant(format!("product is not a quasiorder: {e}")))?;

    let sym: Vec<Relation> = factors.iter().map(|g| g.symmetric_part().into_relation()).collect();
    let sym_refs: Vec<&Relation> = sym.iter().collect();
    if product.symmetric_part().into_relation() != componentwise(&sym_refs, &enc) {
        return Err(Error::Invariant(
            "symmetric part of the product differs from the product of symmetric parts".into(),
        ));
    }

    let quotients: Vec<_> = factors.iter().map(|g| g.induced_order()).collect();
    let class_sizes: Vec<usize> = quotients.iter().map(|q| q.len()).collect();
    let class_enc = ProductEncoding::new(&class_sizes)?;
    let induced: Vec<&Relation> = quotients.iter().map(|q| q.induced.as_relation()).collect();
    let expected = componentwise(&induced, &class_enc);
    let pq = product.induced_order();
    // product class -> tuple of factor classes, via any representative
    let to_tuple: Vec<usize> = pq
        .classes
        .iter()
        .map(|members| {
            let t: Vec<usize> = enc
                .decode(members[0])
                .iter()
                .enumerate()
                .map(|(i, &c)| quotients[i].class_of[c])
                .collect();
            class_enc.encode(&t).expect("class tuple in range")
        })
        .collect();
    let bijective = to_tuple.len() == class_enc.size() && {
        let mut seen = vec![false; class_enc.size()];
        to_tuple.iter().all(|&t| !std::mem::replace(&mut seen[t], true))
    };
    let matches = bijective
        && (0..pq.len()).all(|x| {
            (0..pq.len()).all(|y| {
                pq.induced.contains(x, y) == expected.contains(to_tuple[x], to_tuple[y])
            })
        });
    if !matches {
        return Err(Error::Invariant(
            "induced order of the product differs from the product of induced orders".into(),
        ));
    }
    Ok((product, enc))
}

fn is_two_chain(g: &Quasiorder) -> bool {
    g.n() == 2 && g.len() == 3
}

fn is_full(g: &Quasiorder) -> bool {
    *g.as_relation() == Relation::full(g.n())
}

fn is_identity(g: &Quasiorder) -> bool {
    *g.as_relation() == Relation::identity(g.n())
}

/// Decides whether the product of `factors` is a half-space from the factors
/// alone.
///
/// Without `treat_trivial`, every factor must be neither the identity nor the
/// full relation. With it, an identity factor on two or more elements makes
/// the product disconnected, which leaves the identity as the only possible
/// half-space, and full factors on two or more elements are harmless exactly
/// when the product of the other factors is total.
pub fn product_halfspace_predicate(factors: &[Quasiorder], treat_trivial: bool) -> Result<(bool, String)> {
    if factors.is_empty() {
        return Err(Error::Input("a product needs at least one factor".into()));
    }
    if !treat_trivial {
        if let Some(i) = factors.iter().position(|g| g.is_trivial()) {
            return Err(Error::precondition(
                format!("factor {i} is trivial (identity or full); allow trivial factors to classify it"),
                None,
            ));
        }
    }
    let kept: Vec<(usize, &Quasiorder)> = factors
        .iter()
        .enumerate()
        .filter(|(_, g)| !is_full(g))
        .collect();
    // Full factors on several points blow every element of the remaining
    // product up into a full class; that keeps the half-space property only
    // when the remaining product has no incomparable pairs.
    let inflating: Vec<usize> = factors
        .iter()
        .enumerate()
        .filter(|(_, g)| is_full(g) && g.n() > 1)
        .map(|(i, _)| i)
        .collect();
    let (verdict, reason, total) = remaining_verdict(&kept);
    let dropped = factors.len() - kept.len();
    let mut note = if dropped > 0 {
        format!("{dropped} full factor(s) set aside; ")
    } else {
        String::new()
    };
    if inflating.is_empty() || !verdict {
        note.push_str(&reason);
        return Ok((verdict, note));
    }
    if total {
        note.push_str(&format!("{reason}; it is total, so the full factors keep it a half-space"));
        Ok((true, note))
    } else {
        note.push_str(&format!(
            "{reason}, but it has incomparable elements and full factor {} turns them into incomparable full classes",
            inflating[0]
        ));
        Ok((false, note))
    }
}

/// Verdict for the product of the non-full factors, with whether that
/// product is total.
fn remaining_verdict(kept: &[(usize, &Quasiorder)]) -> (bool, String, bool) {
    if kept.is_empty() {
        return (true, "product of the rest is the full relation".into(), true);
    }
    if let Some(&(i, _)) = kept.iter().find(|(_, g)| is_identity(g)) {
        if kept.iter().all(|(_, g)| is_identity(g)) {
            return (
                true,
                "every remaining factor is the identity, so their product is the identity".into(),
                false,
            );
        }
        return (
            false,
            format!("factor {i} is an identity on more than one element, so the product is disconnected but not the identity"),
            false,
        );
    }
    match kept {
        [(i, g)] => {
            let h = is_halfspace(g);
            let why = format!(
                "single non-trivial factor {i}, which is {}a half-space",
                if h { "" } else { "not " }
            );
            (h, why, g.as_relation().classify().total)
        }
        [(i, g), (j, h)] => {
            let both = is_two_chain(g) && is_two_chain(h);
            let why = if both {
                format!("factors {i} and {j} are two-element chains")
            } else {
                format!("two non-trivial factors ({i}, {j}) that are not both two-element chains")
            };
            (both, why, false)
        }
        more => (
            false,
            format!("{} non-trivial factors; at most two are possible", more.len()),
            false,
        ),
    }
}

/// How a single quasiorder looks when it has no triple `a != c`,
/// `(a, c) ∈ γ`, `(a, b) ∉ γ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FactorShape {
    Identity,
    Full,
    /// `γ = lower × A`: a full (or one-element) lower box below an empty
    /// upper box.
    TwoBoxes { lower: Vec<usize>, upper: Vec<usize> },
    /// The triple exists, so the shape statement does not apply.
    NotApplicable { a: usize, b: usize, c: usize },
}

/// First `(a, b, c)` with `a != c`, `(a, c) ∈ g` and `(a, b) ∉ g`.
pub fn spread_triple(g: &Relation) -> Option<(usize, usize, usize)> {
    let n = g.n();
    (0..n).find_map(|a| {
        let b = (0..n).find(|&b| !g.contains(a, b))?;
        let c = (0..n).find(|&c| c != a && g.contains(a, c))?;
        Some((a, b, c))
    })
}

pub fn factor_shape(g: &Quasiorder) -> FactorShape {
    if is_identity(g) {
        return FactorShape::Identity;
    }
    if is_full(g) {
        return FactorShape::Full;
    }
    if let Some((a, b, c)) = spread_triple(g) {
        return FactorShape::NotApplicable { a, b, c };
    }
    let full_row = Relation::full(g.n()).row(0);
    let (lower, upper): (Vec<usize>, Vec<usize>) = (0..g.n()).partition(|&a| g.row(a) == full_row);
    FactorShape::TwoBoxes { lower, upper }
}

/// Product triple `(ā, b̄, c̄)` with `ā, b̄` incomparable, `(ā, c̄)` related,
/// `c̄ != ā` and `(b̄, c̄)` unrelated, so the product is not a half-space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NonHalfspaceTriple {
    /// Factors that carry the spread pattern (one factor, or the first two
    /// factors taken together when each has the two-box shape).
    pub pattern_factors: Vec<usize>,
    /// A non-full factor on two or more elements supplying the
    /// incomparability.
    pub other_factor: usize,
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub c: Vec<usize>,
    /// Whether the triple was re-checked against the product relation.
    pub verified: bool,
}

/// Tuple triple for two two-box factors: `ā != c̄`, `(ā, c̄)` related and
/// `(ā, b̄)` unrelated in the product of the two.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwoBoxTriple {
    pub a: (usize, usize),
    pub b: (usize, usize),
    pub c: (usize, usize),
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaDiagnostics {
    pub non_halfspace_triple: Option<NonHalfspaceTriple>,
    pub shapes: Vec<FactorShape>,
    pub two_box_triple: Option<TwoBoxTriple>,
}

fn related(factors: &[Quasiorder], a: &[usize], b: &[usize]) -> bool {
    factors.iter().enumerate().all(|(i, g)| g.contains(a[i], b[i]))
}

/// Whether `(a, b, c)` breaks the half-space condition in the product:
/// `a, b` incomparable, `(a, c)` related, `c != a`, `(b, c)` unrelated.
fn breaks_condition(factors: &[Quasiorder], a: &[usize], b: &[usize], c: &[usize]) -> bool {
    !related(factors, a, b) && !related(factors, b, a) && related(factors, a, c) && a != c && !related(factors, b, c)
}

/// Structural certificates for product factors: a triple refuting the
/// half-space property when one factor has the spread pattern (or the first
/// two factors have the two-box shape) and another factor is non-full on at
/// least two elements; the shape of each factor; and the two-box triple for
/// the first two factors when both have that shape.
pub fn lemma_witnesses(factors: &[Quasiorder]) -> Result<LemmaDiagnostics> {
    let sizes: Vec<usize> = factors.iter().map(|g| g.n()).collect();
    // validates that the tuple space is nonempty; size is not capped here
    if factors.is_empty() || sizes.contains(&0) {
        return Err(Error::Input("factors must be nonempty quasiorders".into()));
    }
    let shapes: Vec<FactorShape> = factors.iter().map(factor_shape).collect();

    let two_box_triple = match (shapes.first(), shapes.get(1)) {
        (
            Some(FactorShape::TwoBoxes { lower: l1, upper: u1 }),
            Some(FactorShape::TwoBoxes { lower: l2, upper: u2 }),
        ) => Some(TwoBoxTriple {
            a: (u1[0], l2[0]),
            b: (l1[0], l2[0]),
            c: (u1[0], u2[0]),
        }),
        _ => None,
    };

    let non_full_other = |exclude: &[usize]| {
        (0..factors.len()).find(|k| !exclude.contains(k) && factors[*k].n() > 1 && !is_full(&factors[*k]))
    };
    let mut triple = None;
    for (j, shape) in shapes.iter().enumerate() {
        if let FactorShape::NotApplicable { a, b, c } = *shape {
            if let Some(k) = non_full_other(&[j]) {
                triple = Some((vec![j], vec![(j, a, b, c)], k));
                break;
            }
        }
    }
    if triple.is_none() {
        if let Some(t) = &two_box_triple {
            if let Some(k) = non_full_other(&[0, 1]) {
                triple = Some((
                    vec![0, 1],
                    vec![(0, t.a.0, t.b.0, t.c.0), (1, t.a.1, t.b.1, t.c.1)],
                    k,
                ));
            }
        }
    }
    let non_halfspace_triple = match triple {
        None => None,
        Some((pattern_factors, coords, k)) => {
            let g = factors[k].as_relation();
            let (x, y) = g
                .complement()
                .pairs()
                .next()
                .expect("non-full factor has an unrelated pair");
            let mut a = vec![0; factors.len()];
            let mut b = vec![0; factors.len()];
            let mut c = vec![0; factors.len()];
            for &(i, ai, bi, ci) in &coords {
                a[i] = ai;
                b[i] = bi;
                c[i] = ci;
            }
            a[k] = y;
            b[k] = x;
            c[k] = y;
            if !breaks_condition(factors, &a, &b, &c) {
                return Err(Error::Invariant("constructed product triple does not refute the half-space property".into()));
            }
            let mut verified = false;
            if let Ok(enc) = ProductEncoding::new(&sizes) {
                let (p, _) = direct_product(factors)?;
                let (ia, ib, ic) = (enc.encode(&a)?, enc.encode(&b)?, enc.encode(&c)?);
                let holds = !p.contains(ia, ib) && !p.contains(ib, ia) && p.contains(ia, ic) && !p.contains(ib, ic);
                if !holds || is_halfspace(&p) {
                    return Err(Error::Invariant("product triple fails against the materialized product".into()));
                }
                verified = true;
            }
            Some(NonHalfspaceTriple {
                pattern_factors,
                other_factor: k,
                a,
                b,
                c,
                verified,
            })
        }
    };
    Ok(LemmaDiagnostics {
        non_halfspace_triple,
        shapes,
        two_box_triple,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::LinearOrder;

    fn chain(n: usize) -> Quasiorder {
        LinearOrder::identity_permutation(n).as_quasiorder().clone()
    }

    fn qo(n: usize, pairs: &[(usize, usize)]) -> Quasiorder {
        Quasiorder::new(Relation::from_pairs(n, pairs, true).unwrap()).unwrap()
    }

    #[test]
    fn encoding_round_trip() {
        let enc = ProductEncoding::new(&[2, 3, 2]).unwrap();
        assert_eq!(enc.size(), 12);
        assert_eq!(enc.strides(), &[6, 2, 1]);
        for i in 0..12 {
            assert_eq!(enc.encode(&enc.decode(i)).unwrap(), i);
        }
        assert_eq!(enc.decode(7), vec![1, 0, 1]);
        assert!(enc.encode(&[2, 0, 0]).is_err());
        assert!(matches!(ProductEncoding::new(&[8, 9]), Err(Error::Resource { .. })));
    }

    #[test]
    fn product_examples() {
        let (p, _) = direct_product(&[chain(2), chain(2)]).unwrap();
        // (0,0) < (0,1), (1,0) < (1,1)
        assert_eq!(p, qo(4, &[(0, 1), (0, 2), (1, 3), (2, 3), (0, 3)]));

        let g = qo(3, &[(2, 0), (1, 0)]);
        let (p, _) = direct_product(&[g.clone(), Quasiorder::identity(1)]).unwrap();
        assert_eq!(p, g);

        let (p, _) = direct_product(&[chain(2), Quasiorder::identity(2)]).unwrap();
        assert_eq!(p, qo(4, &[(0, 2), (1, 3)]));

        let (p, _) = direct_product(&[qo(2, &[(0, 1), (1, 0)]), chain(2)]).unwrap();
        assert_eq!(p.induced_order().len(), 2);
    }

    #[test]
    fn predicate_anchors() {
        assert!(product_halfspace_predicate(&[chain(2), chain(2)], false).unwrap().0);
        assert!(!product_halfspace_predicate(&[chain(2), chain(3)], false).unwrap().0);
        assert!(!product_halfspace_predicate(&[chain(2), chain(2), chain(2)], false).unwrap().0);
        for fs in [vec![chain(2), chain(3)], vec![chain(2), chain(2), chain(2)], vec![chain(2), chain(2)]] {
            let (p, _) = direct_product(&fs).unwrap();
            assert_eq!(is_halfspace(&p), product_halfspace_predicate(&fs, false).unwrap().0);
        }
    }

    #[test]
    fn predicate_trivial_factors() {
        assert!(matches!(
            product_halfspace_predicate(&[chain(2), Quasiorder::full(2)], false),
            Err(Error::Precondition { .. })
        ));
        assert!(product_halfspace_predicate(&[chain(2), Quasiorder::full(2)], true).unwrap().0);
        assert!(!product_halfspace_predicate(&[chain(2), Quasiorder::identity(2)], true).unwrap().0);
        assert!(product_halfspace_predicate(&[Quasiorder::identity(2), Quasiorder::identity(3)], true).unwrap().0);
        assert!(product_halfspace_predicate(&[Quasiorder::full(2), Quasiorder::identity(1)], true).unwrap().0);
    }

    #[test]
    fn full_factors_inflate_the_rest() {
        let full = Quasiorder::full(2);
        let cases = [
            vec![full.clone(), Quasiorder::identity(2)],
            vec![chain(2), chain(2), full.clone()],
            vec![qo(3, &[(2, 0), (2, 1)]), full.clone()],
            vec![chain(3), full.clone()],
            vec![full.clone(), full.clone()],
        ];
        let expected = [false, false, false, true, true];
        for (fs, want) in cases.iter().zip(expected) {
            let (p, _) = direct_product(fs).unwrap();
            assert_eq!(is_halfspace(&p), want);
            assert_eq!(product_halfspace_predicate(fs, true).unwrap().0, want);
        }
    }

    #[test]
    fn spread_pattern_triple() {
        // 0 < 1 with 2 isolated, times a 2-chain
        let g1 = qo(3, &[(0, 1)]);
        let d = lemma_witnesses(&[g1.clone(), chain(2)]).unwrap();
        let t = d.non_halfspace_triple.unwrap();
        assert_eq!(t.pattern_factors, vec![0]);
        assert_eq!(t.other_factor, 1);
        assert!(t.verified);
        assert!(breaks_condition(&[g1, chain(2)], &t.a, &t.b, &t.c));
    }

    #[test]
    fn three_chains_use_two_box_pattern() {
        let fs = [chain(2), chain(2), chain(2)];
        let d = lemma_witnesses(&fs).unwrap();
        let t = d.non_halfspace_triple.unwrap();
        assert_eq!(t.pattern_factors, vec![0, 1]);
        assert_eq!(t.other_factor, 2);
        assert!(t.verified);
        assert!(lemma_witnesses(&[chain(2), chain(2)]).unwrap().non_halfspace_triple.is_none());
    }

    #[test]
    fn shapes() {
        assert_eq!(factor_shape(&Quasiorder::identity(3)), FactorShape::Identity);
        assert_eq!(factor_shape(&Quasiorder::full(3)), FactorShape::Full);
        // {0,1} full below 2
        let g = qo(3, &[(0, 1), (1, 0), (0, 2), (1, 2)]);
        assert_eq!(
            factor_shape(&g),
            FactorShape::TwoBoxes { lower: vec![0, 1], upper: vec![2] }
        );
        assert!(matches!(factor_shape(&chain(3)), FactorShape::NotApplicable { .. }));
    }

    #[test]
    fn two_box_triple_claims() {
        let fs = [chain(2), chain(3).inverse()];
        // the reversed 3-chain has the spread pattern, so no two-box triple
        assert!(lemma_witnesses(&fs).unwrap().two_box_triple.is_none());
        let g = qo(3, &[(0, 1), (1, 0), (0, 2), (1, 2)]);
        let fs = [chain(2), g];
        let t = lemma_witnesses(&fs).unwrap().two_box_triple.unwrap();
        let (a, b, c) = ([t.a.0, t.a.1], [t.b.0, t.b.1], [t.c.0, t.c.1]);
        assert_ne!(a, c);
        assert!(related(&fs, &a, &c));
        assert!(!related(&fs, &a, &b));
    }
}
