//! Constructions of specific linear extensions and half-space refinements.

use crate::error::{Error, Result};
use crate::halfspace::HalfSpace;
use crate::order::{LinearOrder, PartialOrder, Quasiorder};
use crate::relation::{bit, Relation};

/// Extends `p` to a linear order. Incomparable pairs are visited in the order
/// of `seed` (pairs `(seed[i], seed[j])`, `i < j`, lexicographically) and
/// oriented as the seed orients them, re-closing transitively after every
/// insertion.
pub fn szpilrajn_extension(p: &PartialOrder, seed: &LinearOrder) -> Result<LinearOrder> {
    p.same_ground(seed)?;
    let n = p.n();
    let mut rows = p.rows().to_vec();
    let seq = seed.sequence();
    for i in 0..n {
        let x = seq[i];
        for &y in &seq[i + 1..] {
            if rows[x] & bit(y) != 0 || rows[y] & bit(x) != 0 {
                continue;
            }
            // everything at or below x now sits below everything at or above y
            let up = rows[y];
            for row in rows.iter_mut() {
                if *row & bit(x) != 0 {
                    *row |= up;
                }
            }
        }
    }
    let l = LinearOrder::new_unchecked(Relation::from_rows(n, rows)?);
    debug_assert!(p.is_subset(&l));
    Ok(l)
}

/// Shrinks a half-space `alpha ⊇ gamma` to a half-space `tau` with
/// `gamma ⊆ tau ⊆ alpha` and `tau ∩ tau⁻¹ = gamma ∩ gamma⁻¹`.
///
/// `order` is a linear extension of the quotient order of `gamma`; pairs of
/// `alpha ∩ alpha⁻¹` pointing downward in it are removed.
pub fn tighten_halfspace(
    gamma: &Quasiorder,
    alpha: &HalfSpace,
    order: &LinearOrder,
) -> Result<HalfSpace> {
    gamma.same_ground(alpha)?;
    if let Some(w) = gamma.first_missing_from(alpha) {
        return Err(Error::precondition("gamma is not contained in alpha", Some(w)));
    }
    let quotient = gamma.induced_order();
    if order.n() != quotient.len() {
        return Err(Error::precondition(
            format!(
                "linear order has {} points but the quotient has {} classes",
                order.n(),
                quotient.len()
            ),
            None,
        ));
    }
    if let Some(w) = quotient.induced.first_missing_from(order) {
        return Err(Error::precondition(
            "order does not extend the quotient order of gamma",
            Some(w),
        ));
    }
    let c = &quotient.class_of;
    let tau = Relation::from_fn(gamma.n(), |x, y| {
        alpha.contains(x, y) && !(alpha.contains(y, x) && order.less(c[y], c[x]))
    });
    Ok(HalfSpace::new_unchecked(tau))
}

/// `alpha ∪ (lambda \ (alpha ∪ alpha⁻¹))` for an antisymmetric half-space:
/// the linear extension of `alpha` that breaks every incomparable pair the way
/// `lambda` does.
pub fn linearize_halfspace(alpha: &HalfSpace, lambda: &LinearOrder) -> Result<LinearOrder> {
    alpha.same_ground(lambda)?;
    if let Some(crate::error::Violation::NotAntisymmetric { x, y }) = alpha.antisymmetric_violation() {
        return Err(Error::precondition(
            "half-space is not antisymmetric",
            Some((x, y)),
        ));
    }
    let comparable = alpha.union(&alpha.inverse());
    let r = alpha.union(&lambda.difference(&comparable));
    let l = LinearOrder::new_unchecked(r);
    debug_assert!(alpha.is_subset(&l));
    Ok(l)
}

/// Two linear orders on the quotient of `alpha` whose intersection is the
/// quotient order. `seed` is a linear order on the quotient classes; the
/// identity permutation is used when absent.
pub fn two_linear_representation(
    alpha: &HalfSpace,
    seed: Option<&LinearOrder>,
) -> Result<(LinearOrder, LinearOrder)> {
    let quotient = alpha.induced_order();
    let k = quotient.len();
    let default_seed;
    let seed = match seed {
        Some(s) => s,
        None => {
            default_seed = LinearOrder::identity_permutation(k);
            &default_seed
        }
    };
    if seed.n() != k {
        return Err(Error::ground_mismatch(seed.n(), k));
    }
    let pi = HalfSpace::new(quotient.induced.into_quasiorder()).map_err(|e| {
        Error::Invariant(format!("quotient of a half-space is not a half-space: {e}"))
    })?;
    let r1 = linearize_halfspace(&pi, seed)?;
    let r2 = linearize_halfspace(&pi, &seed.inverse())?;
    Ok((r1, r2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qo(n: usize, pairs: &[(usize, usize)]) -> Quasiorder {
        Quasiorder::new(Relation::from_pairs(n, pairs, true).unwrap()).unwrap()
    }

    fn m2() -> Quasiorder {
        qo(4, &[(0, 1), (0, 2), (1, 3), (2, 3), (0, 3)])
    }

    fn seq(s: &[usize]) -> LinearOrder {
        LinearOrder::from_sequence(s).unwrap()
    }

    #[test]
    fn szpilrajn_examples() {
        let chain = seq(&[2, 0, 1]);
        assert_eq!(
            szpilrajn_extension(chain.as_partial_order(), &seq(&[0, 1, 2])).unwrap(),
            chain
        );
        assert_eq!(
            szpilrajn_extension(&PartialOrder::identity(3), &seq(&[0, 1, 2])).unwrap(),
            seq(&[0, 1, 2])
        );
        // seed ⊤ < b < a < ⊥ keeps the M₂ pairs and breaks a‖b as b < a
        let p = m2().to_partial_order().unwrap();
        assert_eq!(
            szpilrajn_extension(&p, &seq(&[3, 2, 1, 0])).unwrap().sequence(),
            vec![0, 2, 1, 3]
        );
    }

    #[test]
    fn szpilrajn_rejects_ground_mismatch() {
        assert!(szpilrajn_extension(&PartialOrder::identity(3), &seq(&[0, 1])).is_err());
    }

    #[test]
    fn tighten_examples() {
        let tau = tighten_halfspace(
            &Quasiorder::identity(2),
            &HalfSpace::full(2),
            &seq(&[0, 1]),
        )
        .unwrap();
        assert_eq!(tau.as_quasiorder(), &qo(2, &[(0, 1)]));

        let a = HalfSpace::new(qo(3, &[(0, 1), (1, 0), (0, 2), (1, 2)])).unwrap();
        let tau = tighten_halfspace(&a, &a, &seq(&[0, 1])).unwrap();
        assert_eq!(tau, a);

        let a = HalfSpace::new(m2()).unwrap();
        for r in [seq(&[0, 1, 2, 3]), seq(&[0, 2, 1, 3])] {
            assert_eq!(tighten_halfspace(&m2(), &a, &r).unwrap(), a);
        }
    }

    #[test]
    fn tighten_preconditions() {
        let err = tighten_halfspace(
            &qo(2, &[(1, 0)]),
            &HalfSpace::new(qo(2, &[(0, 1)])).unwrap(),
            &seq(&[1, 0]),
        )
        .unwrap_err();
        assert!(matches!(err, Error::Precondition { witness: Some((1, 0)), .. }));

        let err = tighten_halfspace(&qo(2, &[(0, 1)]), &HalfSpace::full(2), &seq(&[1, 0])).unwrap_err();
        assert!(matches!(err, Error::Precondition { witness: Some((0, 1)), .. }));

        assert!(tighten_halfspace(&Quasiorder::full(2), &HalfSpace::full(2), &seq(&[0, 1])).is_err());
    }

    #[test]
    fn linearize_examples() {
        let l = seq(&[1, 0, 2]);
        let h = HalfSpace::from(l.clone());
        assert_eq!(linearize_halfspace(&h, &seq(&[2, 1, 0])).unwrap(), l);

        let h = HalfSpace::new(m2()).unwrap();
        assert_eq!(
            linearize_halfspace(&h, &seq(&[1, 2, 0, 3])).unwrap().sequence(),
            vec![0, 1, 2, 3]
        );

        assert_eq!(
            linearize_halfspace(&HalfSpace::identity(2), &seq(&[0, 1])).unwrap(),
            seq(&[0, 1])
        );

        let err = linearize_halfspace(&HalfSpace::full(2), &seq(&[0, 1])).unwrap_err();
        assert!(matches!(err, Error::Precondition { witness: Some((0, 1)), .. }));
    }

    #[test]
    fn two_linear_representation_examples() {
        let l = seq(&[2, 0, 1]);
        let (r1, r2) = two_linear_representation(&HalfSpace::from(l.clone()), None).unwrap();
        assert_eq!((r1, r2), (l.clone(), l));

        let h = HalfSpace::new(m2()).unwrap();
        let (r1, r2) = two_linear_representation(&h, Some(&seq(&[0, 1, 2, 3]))).unwrap();
        assert_eq!(r1.sequence(), vec![0, 1, 2, 3]);
        assert_eq!(r2.sequence(), vec![0, 2, 1, 3]);
        assert_eq!(r1.intersection(&r2), *m2().as_relation());

        let (r1, r2) = two_linear_representation(&HalfSpace::full(3), None).unwrap();
        assert_eq!(r1.n(), 1);
        assert_eq!(r2.n(), 1);
    }
}
