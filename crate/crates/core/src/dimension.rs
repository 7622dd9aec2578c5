//! Exact half-space dimension and order dimension, and the transformation of
//! half-space realizers into linear realizers of the quotient order.
//!
//! Both dimensions are computed by exhaustive search: candidates (half-spaces
//! containing the target, or linear extensions) are listed in a fixed
//! enumeration order and combinations of increasing size are tried in
//! lexicographic order of their indices. The witness returned is therefore
//! the lexicographically least among minimum-size witnesses. Search works on
//! row-major flat bitmasks, which limits it to ground sets of at most eight
//! elements.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::extension::{linearize_halfspace, szpilrajn_extension};
use crate::halfspace::{box_decomposition, complement_with_diagonal, is_halfspace, HalfSpace};
use crate::order::{linear_extensions, Equivalence, LinearOrder, PartialOrder, Quasiorder, QuotientMap};
use crate::relation::{bits, low_mask, Relation};

/// Largest ground set the flat-bitmask search supports.
pub const SEARCH_CEILING: usize = 8;

/// Size caps for the exhaustive searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest ground set for half-space enumeration and hs-dimension.
    pub halfspace_search: usize,
    /// Largest ground set (of the quotient) for order dimension.
    pub order_search: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            halfspace_search: 7,
            order_search: 8,
        }
    }
}

impl Limits {
    /// Same cap for both searches, clamped to [`SEARCH_CEILING`].
    pub fn uniform(cap: usize) -> Self {
        let cap = cap.min(SEARCH_CEILING);
        Limits {
            halfspace_search: cap,
            order_search: cap,
        }
    }

    fn check(what: &'static str, size: usize, cap: usize) -> Result<()> {
        if size > cap.min(SEARCH_CEILING) {
            Err(Error::Resource {
                what,
                size,
                cap: cap.min(SEARCH_CEILING),
            })
        } else {
            Ok(())
        }
    }
}

/// Streams every half-space on `0..n` exactly once.
///
/// A half-space is generated from an ordered set partition (a surjection of
/// the elements onto box ranks `0..k`) plus a full/empty flag for each box of
/// two or more elements. Order: by `k`, then by the rank assignment read as a
/// base-`k` number with element 0 most significant, then by the flag word.
#[derive(Clone, Debug)]
pub struct HalfspaceIter {
    n: usize,
    k: usize,
    assign: Vec<usize>,
    /// boxes with two or more members, in rank order
    large: Vec<usize>,
    flags: u64,
    fresh: bool,
    done: bool,
}

impl HalfspaceIter {
    fn new(n: usize) -> Self {
        HalfspaceIter {
            n,
            k: if n == 0 { 0 } else { 1 },
            assign: vec![0; n],
            large: Vec::new(),
            flags: 0,
            fresh: true,
            done: false,
        }
    }

    fn is_surjective(&self) -> bool {
        let hit = self.assign.iter().fold(0u64, |m, &r| m | (1 << r));
        hit == low_mask(self.k)
    }

    /// Moves to the next surjective assignment for the current or a larger
    /// `k`. Returns false when exhausted.
    fn next_assignment(&mut self) -> bool {
        loop {
            // base-k increment, last element least significant
            let mut i = self.n;
            loop {
                if i == 0 {
                    self.k += 1;
                    if self.k > self.n {
                        return false;
                    }
                    self.assign.iter_mut().for_each(|r| *r = 0);
                    break;
                }
                i -= 1;
                self.assign[i] += 1;
                if self.assign[i] < self.k {
                    break;
                }
                self.assign[i] = 0;
            }
            if self.is_surjective() {
                return true;
            }
        }
    }

    fn load_boxes(&mut self) {
        let mut sizes = vec![0usize; self.k];
        for &r in &self.assign {
            sizes[r] += 1;
        }
        self.large = (0..self.k).filter(|&r| sizes[r] > 1).collect();
        self.flags = 0;
    }

    fn current(&self) -> HalfSpace {
        let mut full = vec![false; self.k];
        for (bit, &r) in self.large.iter().enumerate() {
            full[r] = self.flags & (1 << bit) != 0;
        }
        let a = &self.assign;
        HalfSpace::new_unchecked(Relation::from_fn(self.n, |x, y| {
            x == y || a[x] < a[y] || (a[x] == a[y] && full[a[x]])
        }))
    }
}

impl Iterator for HalfspaceIter {
    type Item = HalfSpace;

    fn next(&mut self) -> Option<HalfSpace> {
        if self.done {
            return None;
        }
        if self.fresh {
            self.fresh = false;
            if self.n > 0 && !self.is_surjective() && !self.next_assignment() {
                self.done = true;
                return None;
            }
            self.load_boxes();
            return Some(self.current());
        }
        if self.flags + 1 < (1u64 << self.large.len()) {
            self.flags += 1;
            return Some(self.current());
        }
        if self.n == 0 || !self.next_assignment() {
            self.done = true;
            return None;
        }
        self.load_boxes();
        Some(self.current())
    }
}

/// Every half-space on `n` elements, under the default cap.
pub fn enumerate_halfspaces(n: usize) -> Result<HalfspaceIter> {
    enumerate_halfspaces_with(n, &Limits::default())
}

pub fn enumerate_halfspaces_with(n: usize, limits: &Limits) -> Result<HalfspaceIter> {
    Limits::check("half-space enumeration", n, limits.halfspace_search)?;
    Ok(HalfspaceIter::new(n))
}

/// The half-spaces containing `g`, in enumeration order.
pub fn enumerate_halfspaces_above(g: &Quasiorder) -> Result<impl Iterator<Item = HalfSpace> + '_> {
    Ok(enumerate_halfspaces(g.n())?.filter(move |h| g.is_subset(h)))
}

/// All half-spaces on a fixed ground set, stored as flat masks so repeated
/// dimension searches share one enumeration.
#[derive(Clone, Debug)]
pub struct HalfSpaceCatalog {
    n: usize,
    masks: Vec<u64>,
}

impl HalfSpaceCatalog {
    pub fn new(n: usize) -> Result<Self> {
        Self::with_limits(n, &Limits::default())
    }

    pub fn with_limits(n: usize, limits: &Limits) -> Result<Self> {
        let masks = enumerate_halfspaces_with(n, limits)?.map(|h| h.flat()).collect();
        Ok(HalfSpaceCatalog { n, masks })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    pub fn get(&self, i: usize) -> HalfSpace {
        HalfSpace::new_unchecked(Relation::from_flat(self.n, self.masks[i]))
    }

    pub fn iter(&self) -> impl Iterator<Item = HalfSpace> + '_ {
        (0..self.masks.len()).map(|i| self.get(i))
    }

    /// Indices of the half-spaces containing `g`.
    pub fn above(&self, g: &Relation) -> Vec<usize> {
        let gm = g.flat();
        (0..self.masks.len())
            .filter(|&i| self.masks[i] & gm == gm)
            .collect()
    }

    fn masks_above(&self, g: &Relation) -> Vec<u64> {
        let gm = g.flat();
        let full = Relation::full(self.n).flat();
        self.masks
            .iter()
            .copied()
            .filter(|&m| m & gm == gm && m != full)
            .collect()
    }
}

/// A family of half-spaces whose intersection is `target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Realizer {
    target: Quasiorder,
    parts: Vec<HalfSpace>,
}

impl Realizer {
    pub fn new(target: Quasiorder, parts: Vec<HalfSpace>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::precondition("a realizer needs at least one half-space", None));
        }
        let mut meet = Relation::full(target.n());
        for h in &parts {
            target.same_ground(h)?;
            if let Some(w) = target.first_missing_from(h) {
                return Err(Error::precondition(
                    "realizer part does not contain the target",
                    Some(w),
                ));
            }
            meet = meet.intersection(h);
        }
        if let Some(w) = meet.first_missing_from(&target) {
            return Err(Error::precondition(
                "realizer parts do not intersect to the target",
                Some(w),
            ));
        }
        Ok(Realizer { target, parts })
    }

    pub fn target(&self) -> &Quasiorder {
        &self.target
    }

    pub fn parts(&self) -> &[HalfSpace] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// A realizer with at least two parts: a single part is paired with the
    /// full relation, which leaves the intersection unchanged. The flag
    /// reports whether padding happened.
    pub fn padded(&self) -> (Realizer, bool) {
        if self.parts.len() >= 2 {
            (self.clone(), false)
        } else {
            let mut parts = self.parts.clone();
            parts.push(HalfSpace::full(self.target.n()));
            (
                Realizer {
                    target: self.target.clone(),
                    parts,
                },
                true,
            )
        }
    }
}

/// Smallest `k` and lexicographically least index set of size `k` among
/// `candidates` whose AND equals `target`. Every candidate must contain
/// `target`. Starts at `k = 2`.
fn min_cover(target: u64, universe: u64, candidates: &[u64]) -> Option<Vec<usize>> {
    let mut last_cover = [None::<usize>; 64];
    for (i, &c) in candidates.iter().enumerate() {
        for p in bits(universe & !c) {
            last_cover[p] = Some(i);
        }
    }
    let to_cover = universe & !target;
    if bits(to_cover).any(|p| last_cover[p].is_none()) {
        return None;
    }

    struct Search<'a> {
        target: u64,
        candidates: &'a [u64],
        last_cover: [Option<usize>; 64],
        chosen: Vec<usize>,
    }

    impl Search<'_> {
        fn go(&mut self, start: usize, depth_left: usize, acc: u64) -> bool {
            if acc == self.target {
                return true;
            }
            if depth_left == 0 {
                return false;
            }
            for p in bits(acc & !self.target) {
                match self.last_cover[p] {
                    Some(l) if l >= start => {}
                    _ => return false,
                }
            }
            for i in start..self.candidates.len() {
                let next = acc & self.candidates[i];
                if next == acc {
                    continue;
                }
                if depth_left == 1 && next != self.target {
                    continue;
                }
                self.chosen.push(i);
                if self.go(i + 1, depth_left - 1, next) {
                    return true;
                }
                self.chosen.pop();
            }
            false
        }
    }

    let mut s = Search {
        target,
        candidates,
        last_cover,
        chosen: Vec::new(),
    };
    for k in 2..=candidates.len() {
        s.chosen.clear();
        if s.go(0, k, universe) {
            return Some(s.chosen);
        }
    }
    None
}

/// Minimum number of half-spaces intersecting to `g`, with a witness.
pub fn hs_dimension(g: &Quasiorder) -> Result<(usize, Realizer)> {
    let catalog = HalfSpaceCatalog::new(g.n())?;
    hs_dimension_in(&catalog, g)
}

/// [`hs_dimension`] against a prebuilt catalog of half-spaces on `g`'s
/// ground set.
pub fn hs_dimension_in(catalog: &HalfSpaceCatalog, g: &Quasiorder) -> Result<(usize, Realizer)> {
    if catalog.n != g.n() {
        return Err(Error::ground_mismatch(catalog.n, g.n()));
    }
    if is_halfspace(g) {
        let h = HalfSpace::new_unchecked(g.as_relation().clone());
        return Ok((1, Realizer::new(g.clone(), vec![h])?));
    }
    let n = g.n();
    let candidates = catalog.masks_above(g);
    let universe = Relation::full(n).flat();
    let chosen = min_cover(g.flat(), universe, &candidates).ok_or_else(|| {
        Error::Invariant("no half-space realizer found among half-spaces above target".into())
    })?;
    let parts = chosen
        .iter()
        .map(|&i| HalfSpace::new_unchecked(Relation::from_flat(n, candidates[i])))
        .collect();
    let r = Realizer::new(g.clone(), parts)?;
    Ok((r.len(), r))
}

/// Dushnik–Miller dimension: the minimum number of linear extensions of `p`
/// intersecting to `p`, with a witness. Linear orders (and the empty and
/// one-element orders) have dimension 1.
pub fn order_dimension(p: &PartialOrder) -> Result<(usize, Vec<LinearOrder>)> {
    order_dimension_with(p, &Limits::default())
}

pub fn order_dimension_with(p: &PartialOrder, limits: &Limits) -> Result<(usize, Vec<LinearOrder>)> {
    Limits::check("order dimension search", p.n(), limits.order_search)?;
    if p.is_linear() {
        return Ok((1, vec![LinearOrder::new_unchecked(p.as_relation().clone())]));
    }
    let n = p.n();
    let exts: Vec<u64> = linear_extensions(p).iter().map(|l| l.flat()).collect();
    let universe = Relation::full(n).flat();
    let chosen = min_cover(p.flat(), universe, &exts)
        .ok_or_else(|| Error::Invariant("linear extensions do not realize the order".into()))?;
    let orders: Vec<LinearOrder> = chosen
        .iter()
        .map(|&i| LinearOrder::new_unchecked(Relation::from_flat(n, exts[i])))
        .collect();
    Ok((orders.len(), orders))
}

/// Order dimension of the quotient poset of a quasiorder.
pub fn quotient_dimension(g: &Quasiorder) -> Result<(usize, Vec<LinearOrder>)> {
    order_dimension(&g.induced_order().induced)
}

/// Both dimensions of a quasiorder with witnesses.
#[derive(Clone, Debug)]
pub struct DimensionReport {
    pub hs_dim: usize,
    /// Order dimension of the quotient poset (equal to the poset's own
    /// dimension when the target is a partial order).
    pub order_dim: usize,
    pub hs_witness: Realizer,
    /// Linear orders on the quotient classes.
    pub dim_witness: Vec<LinearOrder>,
    pub quotient: QuotientMap,
}

impl DimensionReport {
    pub fn compute(g: &Quasiorder) -> Result<Self> {
        let (hs_dim, hs_witness) = hs_dimension(g)?;
        let quotient = g.induced_order();
        let (order_dim, dim_witness) = order_dimension(&quotient.induced)?;
        Ok(DimensionReport {
            hs_dim,
            order_dim,
            hs_witness,
            dim_witness,
            quotient,
        })
    }

    /// Re-verifies both witnesses by direct intersection.
    pub fn witnesses_verify(&self) -> bool {
        let g = self.hs_witness.target();
        let hs_ok = self.hs_witness.len() == self.hs_dim
            && self
                .hs_witness
                .parts()
                .iter()
                .fold(Relation::full(g.n()), |acc, h| acc.intersection(h))
                == *g.as_relation();
        let k = self.quotient.len();
        let dim_ok = self.dim_witness.len() == self.order_dim
            && self
                .dim_witness
                .iter()
                .fold(Relation::full(k), |acc, l| acc.intersection(l))
                == *self.quotient.induced.as_relation();
        hs_ok && dim_ok
    }
}

/// Tie-breaking inputs for [`realizer_to_linear_extensions`]. Every field is
/// a linear order on the quotient classes; `None` means the identity
/// permutation (classes ordered by minimum member).
#[derive(Clone, Debug, Default)]
pub struct TransformSeeds {
    /// Seed for the linear extension of the quotient order used to tighten
    /// each part.
    pub extension: Option<LinearOrder>,
    /// Seed for the linear extension `λ` of `ρ ∪ (μ ∩ Θ)`.
    pub lambda: Option<LinearOrder>,
    /// Seed for the linear extension `λ*` of `ρ ∪ (μ⁻¹ ∩ Θ)`.
    pub lambda_star: Option<LinearOrder>,
}

/// Intermediate results shared by both transformations.
#[derive(Clone, Debug)]
pub struct TightenedRealizer {
    pub quotient: QuotientMap,
    /// Linear extension of the quotient order used for tightening.
    pub extension: LinearOrder,
    /// Tightened parts on the original ground set.
    pub tightened: Vec<HalfSpace>,
    /// Tightened parts pushed onto the quotient classes; each is an
    /// antisymmetric half-space.
    pub projected: Vec<HalfSpace>,
    /// Symmetric parts of the complements of the projected parts.
    pub incomparable: Vec<Relation>,
    /// Intersection of `incomparable`: pairs incomparable in every part.
    pub theta: Equivalence,
}

/// The main transformation's output with its intermediate orders.
#[derive(Clone, Debug)]
pub struct LinearTransform {
    pub prepared: TightenedRealizer,
    /// `Δ ∪ (U⁻¹ \ U)` with `U` the union of the projected parts.
    pub rho: PartialOrder,
    pub lambda: LinearOrder,
    pub lambda_star: LinearOrder,
    /// One linear extension of the quotient order per realizer part.
    pub orders: Vec<LinearOrder>,
}

/// The alternative transformation's output.
#[derive(Clone, Debug)]
pub struct AltLinearTransform {
    pub prepared: TightenedRealizer,
    /// Pairs `(x, y)` such that `(y, x)` holds in the first part where
    /// `x` and `y` are comparable.
    pub first_comparison: Relation,
    pub orders: Vec<LinearOrder>,
}

fn invariant(ok: bool, what: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Invariant(what()))
    }
}

fn prepare(
    r: &Realizer,
    mu: &LinearOrder,
    i_star: usize,
    extension_seed: Option<&LinearOrder>,
) -> Result<TightenedRealizer> {
    if r.len() < 2 {
        return Err(Error::precondition(
            format!("transformation needs at least two half-spaces, got {}", r.len()),
            None,
        ));
    }
    if i_star >= r.len() {
        return Err(Error::Input(format!(
            "distinguished index {i_star} out of range for {} parts",
            r.len()
        )));
    }
    let gamma = r.target();
    let quotient = gamma.induced_order();
    let k = quotient.len();
    if mu.n() != k {
        return Err(Error::ground_mismatch(mu.n(), k));
    }
    let identity = LinearOrder::identity_permutation(k);
    let seed = extension_seed.unwrap_or(&identity);
    if seed.n() != k {
        return Err(Error::ground_mismatch(seed.n(), k));
    }
    let extension = szpilrajn_extension(&quotient.induced, seed)?;

    let mut tightened = Vec::with_capacity(r.len());
    let mut projected = Vec::with_capacity(r.len());
    let gamma_sym = gamma.symmetric_part().into_relation();
    for alpha in r.parts() {
        let tau = crate::extension::tighten_halfspace(gamma, alpha, &extension)?;
        invariant(
            gamma.is_subset(&tau) && tau.is_subset(alpha),
            || "tightened part escapes [gamma, alpha]".into(),
        )?;
        invariant(tau.symmetric_part().into_relation() == gamma_sym, || {
            "tightened part has a different symmetric part".into()
        })?;
        let pi = quotient.push_forward(&tau);
        let pi = PartialOrder::new(pi)
            .map_err(|e| Error::Invariant(format!("projected part is not a partial order: {e}")))?;
        let pi = HalfSpace::new(pi.into_quasiorder())
            .map_err(|e| Error::Invariant(format!("projected part is not a half-space: {e}")))?;
        tightened.push(tau);
        projected.push(pi);
    }
    let meet = projected
        .iter()
        .fold(Relation::full(k), |acc, p| acc.intersection(p));
    invariant(meet == *quotient.induced.as_relation(), || {
        "projected parts do not intersect to the quotient order".into()
    })?;

    let incomparable: Vec<Relation> = projected
        .iter()
        .map(|p| {
            let sigma = complement_with_diagonal(p);
            sigma.intersection(&sigma.inverse())
        })
        .collect();
    let theta = incomparable
        .iter()
        .fold(Relation::full(k), |acc, s| acc.intersection(s));
    let theta = Equivalence::new(theta)
        .map_err(|e| Error::Invariant(format!("common incomparability is not an equivalence: {e}")))?;

    Ok(TightenedRealizer {
        quotient,
        extension,
        tightened,
        projected,
        incomparable,
        theta,
    })
}

/// Turns a half-space realizer of `γ` (at least two parts) into one linear
/// extension of the quotient order `r_γ` per part, whose intersection is
/// `r_γ`.
///
/// Each part is tightened so its symmetric part equals that of `γ`, then
/// projected to the quotient. The reversed-but-not-forward pairs of the
/// projected union form a partial order `ρ`; it is extended (together with
/// `μ` or `μ⁻¹` on the pairs incomparable everywhere) to linear orders `λ`
/// and `λ*`, which break the remaining ties of every projected part, `λ*`
/// being reserved for part `i_star`.
pub fn realizer_to_linear_extensions(
    r: &Realizer,
    mu: &LinearOrder,
    i_star: usize,
    seeds: &TransformSeeds,
) -> Result<LinearTransform> {
    let prepared = prepare(r, mu, i_star, seeds.extension.as_ref())?;
    let k = prepared.quotient.len();
    let diag = Relation::identity(k);

    let union = prepared
        .projected
        .iter()
        .fold(Relation::empty(k), |acc, p| acc.union(p));
    let rho = diag.union(&union.inverse().difference(&union));
    let rho = PartialOrder::new(rho)
        .map_err(|e| Error::Invariant(format!("rho is not a partial order: {e}")))?;
    let theta = prepared.theta.as_relation();
    invariant(rho.intersection(theta) == diag, || "rho ∩ theta ≠ Δ".into())?;
    // Θ is reflexive, so composing it with the diagonal of ρ gives Θ itself;
    // the absorption only holds for the strict part of ρ.
    let strict = rho.as_relation().difference(&diag);
    invariant(theta.compose(&strict).is_subset(&rho), || "theta∘rho ⊄ rho".into())?;
    invariant(strict.compose(theta).is_subset(&rho), || "rho∘theta ⊄ rho".into())?;

    let identity = LinearOrder::identity_permutation(k);
    let extend = |base: Relation, seed: Option<&LinearOrder>, name: &str| -> Result<LinearOrder> {
        let base = PartialOrder::new(base)
            .map_err(|e| Error::Invariant(format!("{name} base is not a partial order: {e}")))?;
        let seed = seed.unwrap_or(&identity);
        if seed.n() != k {
            return Err(Error::ground_mismatch(seed.n(), k));
        }
        szpilrajn_extension(&base, seed)
    };
    let lambda = extend(
        rho.union(&mu.intersection(theta)),
        seeds.lambda.as_ref(),
        "lambda",
    )?;
    let lambda_star = extend(
        rho.union(&mu.inverse().intersection(theta)),
        seeds.lambda_star.as_ref(),
        "lambda*",
    )?;

    let orders = prepared
        .projected
        .iter()
        .enumerate()
        .map(|(i, pi)| {
            let l = if i == i_star { &lambda_star } else { &lambda };
            linearize_halfspace(pi, l)
        })
        .collect::<Result<Vec<_>>>()?;
    check_linear_realizer(&prepared.quotient, &orders)?;

    Ok(LinearTransform {
        prepared,
        rho,
        lambda,
        lambda_star,
        orders,
    })
}

/// The alternative construction: parts are indexed in list order and each
/// projected part is completed by the orientation its pairs receive in the
/// first part that compares them, with `μ` (or `μ⁻¹` for `i_star`) on
/// pairs no part compares.
pub fn realizer_to_linear_extensions_alt(
    r: &Realizer,
    mu: &LinearOrder,
    i_star: usize,
) -> Result<AltLinearTransform> {
    let prepared = prepare(r, mu, i_star, None)?;
    let k = prepared.quotient.len();

    // pairs reversed by the first part that compares them
    let mut first_comparison = Relation::empty(k);
    let mut undecided = Relation::full(k);
    for (pi, inc) in prepared.projected.iter().zip(&prepared.incomparable) {
        first_comparison = first_comparison.union(&pi.inverse().intersection(&undecided));
        undecided = undecided.intersection(inc);
    }

    let theta = prepared.theta.as_relation();
    let mu_tie = theta.intersection(mu);
    let mu_star_tie = theta.intersection(&mu.inverse());
    let orders = prepared
        .projected
        .iter()
        .zip(&prepared.incomparable)
        .enumerate()
        .map(|(i, (pi, inc))| {
            let tie = if i == i_star { &mu_star_tie } else { &mu_tie };
            let rel = pi.union(&inc.intersection(&first_comparison)).union(tie);
            LinearOrder::new(rel).map_err(|e| {
                Error::Invariant(format!("alternative order {i} is not linear: {e}"))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    check_linear_realizer(&prepared.quotient, &orders)?;

    Ok(AltLinearTransform {
        prepared,
        first_comparison,
        orders,
    })
}

fn check_linear_realizer(quotient: &QuotientMap, orders: &[LinearOrder]) -> Result<()> {
    let induced = quotient.induced.as_relation();
    for (i, l) in orders.iter().enumerate() {
        invariant(induced.is_subset(l), || {
            format!("order {i} does not extend the quotient order")
        })?;
    }
    let meet = orders
        .iter()
        .fold(Relation::full(quotient.len()), |acc, l| acc.intersection(l));
    invariant(meet == *induced, || {
        "orders do not intersect to the quotient order".into()
    })
}

/// Outcome of checking how half-space dimension relates to order dimension
/// on one quasiorder.
#[derive(Clone, Debug, Serialize)]
pub struct DimensionCheck {
    pub hs_dim: usize,
    pub quotient_dim: usize,
    /// Dimension of the quasiorder itself when it is a partial order.
    pub poset_dim: Option<usize>,
    pub is_halfspace: bool,
    /// For half-spaces: whether some empty box has two or more members.
    pub large_empty_box: Option<bool>,
    pub is_partial_order: bool,
    pub is_linear: bool,
    /// Human-readable descriptions of every failed expectation.
    pub failures: Vec<String>,
}

impl DimensionCheck {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Computes both dimensions and checks:
/// hs-dim 1 exactly for half-spaces; for a half-space the quotient has
/// dimension 2 iff some empty box has two or more members and 1 otherwise;
/// hs-dim ≥ 2 forces quotient dimension = hs-dim; hs-dim never exceeds the
/// quotient dimension; and for partial orders the same statements about the
/// order itself, split by linearity.
pub fn dimension_relation_check(g: &Quasiorder) -> Result<DimensionCheck> {
    let catalog = HalfSpaceCatalog::new(g.n())?;
    dimension_relation_check_in(&catalog, g)
}

pub fn dimension_relation_check_in(catalog: &HalfSpaceCatalog, g: &Quasiorder) -> Result<DimensionCheck> {
    let (hs_dim, _) = hs_dimension_in(catalog, g)?;
    let (quotient_dim, _) = quotient_dimension(g)?;
    let halfspace = is_halfspace(g);
    let poset = g.to_partial_order().ok();
    let poset_dim = match &poset {
        Some(p) => Some(order_dimension(p)?.0),
        None => None,
    };
    let is_linear = poset.as_ref().is_some_and(|p| p.is_linear());
    let large_empty_box = halfspace
        .then(|| box_decomposition(&HalfSpace::new_unchecked(g.as_relation().clone())).has_large_empty_box());

    let mut failures = Vec::new();
    if (hs_dim == 1) != halfspace {
        failures.push(format!("hs_dim = {hs_dim} but is_halfspace = {halfspace}"));
    }
    if hs_dim > quotient_dim {
        failures.push(format!("hs_dim {hs_dim} exceeds quotient dimension {quotient_dim}"));
    }
    if hs_dim == 1 {
        let expected = if large_empty_box == Some(true) { 2 } else { 1 };
        if quotient_dim != expected {
            failures.push(format!(
                "half-space with large empty box = {:?} has quotient dimension {quotient_dim}, expected {expected}",
                large_empty_box
            ));
        }
    } else if quotient_dim != hs_dim {
        failures.push(format!("quotient dimension {quotient_dim} differs from hs_dim {hs_dim}"));
    }
    if let Some(d) = poset_dim {
        let expected = match (hs_dim, is_linear) {
            (1, true) => 1,
            (1, false) => 2,
            (h, _) => h,
        };
        if d != expected {
            failures.push(format!("partial order dimension {d}, expected {expected}"));
        }
    }
    Ok(DimensionCheck {
        hs_dim,
        quotient_dim,
        poset_dim,
        is_halfspace: halfspace,
        large_empty_box,
        is_partial_order: poset.is_some(),
        is_linear,
        failures,
    })
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

    /// Minimal elements 0, 1, 2 and maximal 3, 4, 5 with i < 3 + j iff i != j.
    fn standard_example() -> Quasiorder {
        let mut pairs = Vec::new();
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    pairs.push((i, 3 + j));
                }
            }
        }
        qo(6, &pairs)
    }

    fn seq(s: &[usize]) -> LinearOrder {
        LinearOrder::from_sequence(s).unwrap()
    }

    #[test]
    fn halfspace_counts() {
        let counts: Vec<usize> = (0..=4).map(|n| enumerate_halfspaces(n).unwrap().count()).collect();
        assert_eq!(&counts[..4], &[1, 1, 4, 20]);
        let all: std::collections::HashSet<_> = enumerate_halfspaces(4).unwrap().collect();
        assert_eq!(all.len(), counts[4]);
    }

    #[test]
    fn enumeration_respects_cap() {
        assert!(matches!(
            enumerate_halfspaces(9),
            Err(Error::Resource { .. })
        ));
    }

    #[test]
    fn halfspaces_above_examples() {
        let above: Vec<_> = enumerate_halfspaces_above(&Quasiorder::full(3)).unwrap().collect();
        assert_eq!(above, vec![HalfSpace::full(3)]);
        assert_eq!(
            enumerate_halfspaces_above(&Quasiorder::identity(2)).unwrap().count(),
            4
        );
        let above: Vec<_> = enumerate_halfspaces_above(&m2()).unwrap().collect();
        assert!(above.iter().any(|h| h.as_quasiorder() == &m2()));
        // both linear extensions, and ⊥ < {a,b} < ⊤ with the middle box full
        assert!(above.iter().any(|h| h.as_relation() == seq(&[0, 1, 2, 3]).as_relation()));
        assert!(above.iter().any(|h| h.as_relation() == seq(&[0, 2, 1, 3]).as_relation()));
        let full_middle = m2().as_relation().clone().with_pair(1, 2).with_pair(2, 1);
        assert!(above.iter().any(|h| *h.as_relation() == full_middle));
    }

    #[test]
    fn hs_dimension_examples() {
        assert_eq!(hs_dimension(&m2()).unwrap().0, 1);
        for n in 1..5 {
            assert_eq!(hs_dimension(&Quasiorder::identity(n)).unwrap().0, 1);
        }
        let (d, witness) = hs_dimension(&standard_example()).unwrap();
        assert_eq!(d, 3);
        assert_eq!(witness.len(), 3);
        assert_eq!(hs_dimension(&qo(3, &[(0, 1)])).unwrap().0, 2);
    }

    #[test]
    fn order_dimension_examples() {
        let chain = seq(&[3, 1, 0, 2]);
        assert_eq!(order_dimension(chain.as_partial_order()).unwrap().0, 1);
        let (d, w) = order_dimension(&m2().to_partial_order().unwrap()).unwrap();
        assert_eq!(d, 2);
        assert_eq!(w[0].intersection(&w[1]), *m2().as_relation());
        let (d, _) = order_dimension(&standard_example().to_partial_order().unwrap()).unwrap();
        assert_eq!(d, 3);
        assert_eq!(order_dimension(&PartialOrder::identity(0)).unwrap().0, 1);
        assert_eq!(order_dimension(&PartialOrder::identity(1)).unwrap().0, 1);
    }

    #[test]
    fn dimension_report_witnesses_verify() {
        for q in [m2(), standard_example(), qo(3, &[(0, 1), (1, 0)])] {
            let rep = DimensionReport::compute(&q).unwrap();
            assert!(rep.witnesses_verify());
        }
    }

    #[test]
    fn realizer_validation() {
        let g = Quasiorder::identity(2);
        let a = HalfSpace::new(qo(2, &[(0, 1)])).unwrap();
        assert!(Realizer::new(g.clone(), vec![a.clone()]).is_err());
        assert!(Realizer::new(g.clone(), vec![]).is_err());
        assert!(Realizer::new(qo(2, &[(1, 0)]), vec![a.clone()]).is_err());
        let b = HalfSpace::new(qo(2, &[(1, 0)])).unwrap();
        assert!(Realizer::new(g, vec![a, b]).is_ok());
    }

    #[test]
    fn transform_on_identity_of_two() {
        let g = Quasiorder::identity(2);
        let r = Realizer::new(
            g,
            vec![
                HalfSpace::new(qo(2, &[(0, 1)])).unwrap(),
                HalfSpace::new(qo(2, &[(1, 0)])).unwrap(),
            ],
        )
        .unwrap();
        for mu in [seq(&[0, 1]), seq(&[1, 0])] {
            let t = realizer_to_linear_extensions(&r, &mu, 0, &TransformSeeds::default()).unwrap();
            assert_eq!(t.orders[0].sequence(), vec![0, 1]);
            assert_eq!(t.orders[1].sequence(), vec![1, 0]);
            let alt = realizer_to_linear_extensions_alt(&r, &mu, 0).unwrap();
            assert_eq!(alt.orders, t.orders);
        }
    }

    #[test]
    fn transform_on_linear_target() {
        let l = seq(&[1, 2, 0]);
        let r = Realizer::new(
            l.as_quasiorder().clone(),
            vec![HalfSpace::from(l.clone()), HalfSpace::full(3)],
        )
        .unwrap();
        let t = realizer_to_linear_extensions(&r, &seq(&[0, 1, 2]), 1, &TransformSeeds::default()).unwrap();
        assert!(t.orders.iter().all(|o| o == &l));
        let alt = realizer_to_linear_extensions_alt(&r, &seq(&[0, 1, 2]), 1).unwrap();
        assert!(alt.orders.iter().all(|o| o == &l));
    }

    #[test]
    fn transform_on_m2() {
        let r = Realizer::new(
            m2(),
            vec![
                HalfSpace::from(seq(&[0, 1, 2, 3])),
                HalfSpace::from(seq(&[0, 2, 1, 3])),
            ],
        )
        .unwrap();
        let t = realizer_to_linear_extensions(&r, &seq(&[0, 1, 2, 3]), 0, &TransformSeeds::default()).unwrap();
        assert_eq!(t.orders[0].intersection(&t.orders[1]), *m2().as_relation());
        let alt = realizer_to_linear_extensions_alt(&r, &seq(&[0, 1, 2, 3]), 1).unwrap();
        assert_eq!(alt.orders[0].intersection(&alt.orders[1]), *m2().as_relation());
    }

    #[test]
    fn transform_preconditions() {
        let r = Realizer::new(m2(), vec![HalfSpace::new(m2()).unwrap()]).unwrap();
        let mu = seq(&[0, 1, 2, 3]);
        assert!(matches!(
            realizer_to_linear_extensions(&r, &mu, 0, &TransformSeeds::default()),
            Err(Error::Precondition { .. })
        ));
        let (padded, did_pad) = r.padded();
        assert!(did_pad);
        let t = realizer_to_linear_extensions(&padded, &mu, 0, &TransformSeeds::default()).unwrap();
        assert_eq!(t.orders.len(), 2);
        assert!(realizer_to_linear_extensions(&padded, &mu, 2, &TransformSeeds::default()).is_err());
        assert!(realizer_to_linear_extensions(&padded, &seq(&[0, 1]), 0, &TransformSeeds::default()).is_err());
    }

    #[test]
    fn dimension_check_examples() {
        let c = dimension_relation_check(&m2()).unwrap();
        assert!(c.holds(), "{:?}", c.failures);
        assert_eq!((c.hs_dim, c.poset_dim, c.is_linear), (1, Some(2), false));

        let chain = seq(&[0, 1, 2]).as_quasiorder().clone();
        let c = dimension_relation_check(&chain).unwrap();
        assert!(c.holds());
        assert_eq!((c.hs_dim, c.poset_dim), (1, Some(1)));

        let c = dimension_relation_check(&Quasiorder::full(3)).unwrap();
        assert!(c.holds());
        assert_eq!((c.hs_dim, c.quotient_dim, c.large_empty_box), (1, 1, Some(false)));
    }
}
