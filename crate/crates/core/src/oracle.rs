//! Brute-force enumeration and replay suites.
//!
//! Everything here favors obviousness over speed: quasiorders are found by
//! filtering every reflexive relation, a second independent generator is used
//! to cross-check that enumeration, and each replay suite re-derives the
//! expected facts from first principles before comparing them with the
//! library's answers.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dimension::{
    dimension_relation_check_in, enumerate_halfspaces, hs_dimension_in, order_dimension,
    quotient_dimension, realizer_to_linear_extensions, realizer_to_linear_extensions_alt,
    HalfSpaceCatalog, Realizer, TransformSeeds,
};
use crate::error::{Error, Result};
use crate::extension::{linearize_halfspace, szpilrajn_extension, tighten_halfspace, two_linear_representation};
use crate::halfspace::{
    box_decomposition, check_complementary_pair, complement_halfspace, complement_with_diagonal, criteria,
    halfspace_realizer_from_linear_realizer, halfspace_witness, is_box, is_halfspace, reconstruct_from_boxes,
    standard_construction, BoxDecomposition, BoxKind, HalfSpace, HalfSpaceBox, KernelPresentation,
};
use crate::order::{linear_extensions, quord_join, quord_meet, LinearOrder, PartialOrder, Quasiorder, QuotientMap};
use crate::product::{direct_product, lemma_witnesses, product_halfspace_predicate};
use crate::relation::{bit, bits, low_mask, Relation};

/// Largest ground set the exhaustive generators accept.
pub const MAX_ENUMERATION_N: usize = 5;

/// Seed used by sampled suites unless another is given.
pub const DEFAULT_SEED: u64 = 0x5e_ed0f_0dd5;

/// Number of labeled quasiorders on `n` points, for `n` up to 5.
pub const KNOWN_QUASIORDER_COUNTS: [usize; 6] = [1, 1, 4, 29, 355, 6942];

/// Number of labeled half-spaces on `n` points, for `n` up to 3.
pub const KNOWN_HALFSPACE_COUNTS: [usize; 4] = [1, 1, 4, 20];

fn check_enumeration_size(n: usize) -> Result<()> {
    if n > MAX_ENUMERATION_N {
        Err(Error::Resource {
            what: "exhaustive enumeration",
            size: n,
            cap: MAX_ENUMERATION_N,
        })
    } else {
        Ok(())
    }
}

fn rows_transitive(rows: &[u64]) -> bool {
    rows.iter().all(|&r| bits(r).all(|j| rows[j] & !r == 0))
}

/// Streams every quasiorder on `n` points.
///
/// The off-diagonal entries read row by row form a bit string, first entry
/// most significant; quasiorders come in increasing order of that string.
#[derive(Clone, Debug)]
pub struct QuasiorderIter {
    n: usize,
    positions: Vec<(usize, usize)>,
    next: u64,
    end: u64,
}

impl Iterator for QuasiorderIter {
    type Item = Quasiorder;

    fn next(&mut self) -> Option<Quasiorder> {
        let m = self.positions.len();
        while self.next < self.end {
            let code = self.next;
            self.next += 1;
            let mut rows: Vec<u64> = (0..self.n).map(bit).collect();
            for (i, &(a, b)) in self.positions.iter().enumerate() {
                if code & (1 << (m - 1 - i)) != 0 {
                    rows[a] |= bit(b);
                }
            }
            if rows_transitive(&rows) {
                let r = Relation::from_rows(self.n, rows).expect("rows within ground set");
                return Some(Quasiorder::new_unchecked(r));
            }
        }
        None
    }
}

pub fn enumerate_quasiorders(n: usize) -> Result<QuasiorderIter> {
    check_enumeration_size(n)?;
    let positions: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b)))
        .collect();
    Ok(QuasiorderIter {
        n,
        end: 1u64 << positions.len(),
        positions,
        next: 0,
    })
}

/// All labeled partial orders on `n` points, built by inserting elements one
/// at a time: the new element goes above a down-set and below a disjoint
/// up-set lying entirely above it.
pub fn posets_by_insertion(n: usize) -> Result<Vec<PartialOrder>> {
    check_enumeration_size(n)?;
    let mut level: Vec<Vec<u64>> = vec![Vec::new()];
    for m in 0..n {
        let mut next = Vec::new();
        for rows in &level {
            let cols: Vec<u64> = (0..m)
                .map(|d| (0..m).filter(|&x| rows[x] & bit(d) != 0).fold(0, |c, x| c | bit(x)))
                .collect();
            for down in 0..(1u64 << m) {
                if !bits(down).all(|d| cols[d] & !down == 0) {
                    continue;
                }
                for up in 0..(1u64 << m) {
                    if up & down != 0
                        || !bits(up).all(|u| rows[u] & !up == 0)
                        || !bits(down).all(|d| rows[d] & up == up)
                    {
                        continue;
                    }
                    let mut r = rows.clone();
                    for d in bits(down) {
                        r[d] |= bit(m);
                    }
                    r.push(bit(m) | up);
                    next.push(r);
                }
            }
        }
        level = next;
    }
    Ok(level
        .into_iter()
        .map(|rows| PartialOrder::new_unchecked(Relation::from_rows(n, rows).expect("rows within ground set")))
        .collect())
}

/// Set partitions of `0..n` as restricted growth strings.
fn set_partitions(n: usize) -> Vec<(Vec<usize>, usize)> {
    fn go(i: usize, n: usize, blocks: usize, cur: &mut Vec<usize>, out: &mut Vec<(Vec<usize>, usize)>) {
        if i == n {
            out.push((cur.clone(), blocks));
            return;
        }
        for b in 0..=blocks {
            cur.push(b);
            go(i + 1, n, blocks.max(b + 1), cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, 0, &mut Vec::new(), &mut out);
    out
}

/// All quasiorders on `n` points, built as a set partition together with a
/// partial order on its blocks. Independent of [`enumerate_quasiorders`].
pub fn quasiorders_by_partition(n: usize) -> Result<Vec<Quasiorder>> {
    check_enumeration_size(n)?;
    let posets: Vec<Vec<PartialOrder>> = (0..=n).map(posets_by_insertion).collect::<Result<_>>()?;
    let mut out = Vec::new();
    for (block, k) in set_partitions(n) {
        let members: Vec<u64> = (0..k)
            .map(|b| (0..n).filter(|&a| block[a] == b).fold(0, |m, a| m | bit(a)))
            .collect();
        for p in &posets[k] {
            let rows = (0..n)
                .map(|a| bits(p.row(block[a])).fold(0, |r, b| r | members[b]))
                .collect();
            out.push(Quasiorder::new_unchecked(Relation::from_rows(n, rows)?));
        }
    }
    Ok(out)
}

/// Ordered set partitions of `0..n` with every full/empty flag choice,
/// generated block by block (first block chosen as any nonempty subset).
pub fn all_box_decompositions(n: usize) -> Result<Vec<BoxDecomposition>> {
    check_enumeration_size(n)?;
    fn go(remaining: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if remaining == 0 {
            out.push(cur.clone());
            return;
        }
        let mut s = remaining;
        while s != 0 {
            cur.push(s);
            go(remaining & !s, cur, out);
            cur.pop();
            s = (s - 1) & remaining;
        }
    }
    let mut shapes = Vec::new();
    go(low_mask(n), &mut Vec::new(), &mut shapes);
    let mut out = Vec::new();
    for shape in shapes {
        let large: Vec<usize> = (0..shape.len()).filter(|&i| shape[i].count_ones() > 1).collect();
        for flags in 0..(1u64 << large.len()) {
            let boxes = shape
                .iter()
                .enumerate()
                .map(|(i, &m)| {
                    let full = large.iter().position(|&l| l == i).is_some_and(|p| flags & bit(p) != 0);
                    HalfSpaceBox {
                        members: bits(m).collect(),
                        kind: if full { BoxKind::Full } else { BoxKind::Empty },
                    }
                })
                .collect();
            out.push(BoxDecomposition::new(n, boxes)?);
        }
    }
    Ok(out)
}

/// Result of comparing two independent enumerations of the same family.
#[derive(Clone, Debug, Serialize)]
pub struct EnumerationCheck {
    pub family: &'static str,
    pub n: usize,
    pub filtered: usize,
    pub generated: usize,
    pub known: Option<usize>,
    /// Description of the first disagreement, if any.
    pub first_divergence: Option<String>,
}

impl EnumerationCheck {
    pub fn agrees(&self) -> bool {
        self.first_divergence.is_none()
    }
}

fn compare_sets(
    family: &'static str,
    n: usize,
    mut filtered: Vec<Relation>,
    mut generated: Vec<Relation>,
    known: Option<usize>,
) -> EnumerationCheck {
    let counts = (filtered.len(), generated.len());
    let dup = |v: &[Relation]| v.windows(2).position(|w| w[0] == w[1]);
    filtered.sort();
    generated.sort();
    let mut first_divergence = None;
    if let Some(i) = dup(&filtered) {
        first_divergence = Some(format!("filter enumeration repeats {:?}", filtered[i]));
    } else if let Some(i) = dup(&generated) {
        first_divergence = Some(format!("generative enumeration repeats {:?}", generated[i]));
    } else if let Some(i) = (0..filtered.len().min(generated.len())).find(|&i| filtered[i] != generated[i]) {
        first_divergence = Some(format!(
            "sorted position {i}: filter has {:?}, generator has {:?}",
            filtered[i], generated[i]
        ));
    } else if counts.0 != counts.1 {
        first_divergence = Some(format!("counts differ: filter {}, generator {}", counts.0, counts.1));
    } else if let Some(k) = known.filter(|&k| k != counts.0) {
        first_divergence = Some(format!("count {} differs from the known value {k}", counts.0));
    }
    EnumerationCheck {
        family,
        n,
        filtered: counts.0,
        generated: counts.1,
        known,
        first_divergence,
    }
}

/// Quasiorders by filtering versus by partition-and-poset generation.
pub fn compare_quasiorder_enumerations(n: usize) -> Result<EnumerationCheck> {
    let filtered = enumerate_quasiorders(n)?.map(Quasiorder::into_relation).collect();
    let generated = quasiorders_by_partition(n)?.into_iter().map(Quasiorder::into_relation).collect();
    Ok(compare_sets("quasiorders", n, filtered, generated, KNOWN_QUASIORDER_COUNTS.get(n).copied()))
}

/// Half-spaces by filtering all quasiorders versus by box generation.
pub fn compare_halfspace_enumerations(n: usize) -> Result<EnumerationCheck> {
    let filtered = enumerate_quasiorders(n)?
        .filter(|q| criteria::complement_is_transitive(q))
        .map(Quasiorder::into_relation)
        .collect();
    let generated = enumerate_halfspaces(n)?
        .map(|h| h.into_quasiorder().into_relation())
        .collect();
    Ok(compare_sets("half-spaces", n, filtered, generated, KNOWN_HALFSPACE_COUNTS.get(n).copied()))
}

/// A complementary pair `(α, β)` with `p1 ⊆ α` and `p2 ⊆ β`, if any.
pub fn can_separate(p1: &Relation, p2: &Relation) -> Result<Option<(HalfSpace, HalfSpace)>> {
    p1.same_ground(p2)?;
    for alpha in enumerate_halfspaces(p1.n())? {
        if !p1.is_subset(&alpha) {
            continue;
        }
        let beta = complement_halfspace(&alpha);
        if p2.is_subset(&beta) {
            return Ok(Some((alpha, beta)));
        }
    }
    Ok(None)
}

/// The two crossing chains `1 < 2, 3 < 4` and `1 < 4, 3 < 2` on four points
/// (indices 0..3 here).
pub fn crossing_chains() -> (Relation, Relation) {
    let p1 = Relation::from_pairs(4, &[(0, 1), (2, 3)], true).expect("valid pairs");
    let p2 = Relation::from_pairs(4, &[(0, 3), (2, 1)], true).expect("valid pairs");
    (p1, p2)
}

/// True when no complementary pair of half-spaces separates the crossing
/// chains, checked against every half-space on four points.
pub fn verify_separation_counterexample() -> bool {
    let (p1, p2) = crossing_chains();
    matches!(can_separate(&p1, &p2), Ok(None))
}

/// Outcome of running one replay suite.
#[derive(Clone, Debug, Serialize)]
pub struct ReplayReport {
    pub suite: String,
    pub description: String,
    pub instances: usize,
    pub failures: usize,
    /// The first few failure messages.
    pub failure_samples: Vec<String>,
    /// Seed for suites that sample instances.
    pub seed: Option<u64>,
    pub elapsed: Duration,
}

impl ReplayReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    /// `N instances, F failures`.
    pub fn summary(&self) -> String {
        format!("{} instances, {} failures", self.instances, self.failures)
    }
}

impl fmt::Display for ReplayReport {
    /// Deterministic part of the report; wall time is left to the caller.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.summary())?;
        writeln!(f, "suite: {}", self.suite)?;
        writeln!(f, "checks: {}", self.description)?;
        if let Some(s) = self.seed {
            writeln!(f, "seed: {s}")?;
        }
        for m in &self.failure_samples {
            writeln!(f, "failure: {m}")?;
        }
        Ok(())
    }
}

type Check = std::result::Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn lib<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

#[derive(Default)]
struct Tally {
    instances: usize,
    failures: usize,
    samples: Vec<String>,
}

impl Tally {
    fn run(&mut self, label: impl fmt::Display, check: impl FnOnce() -> Check) {
        self.instances += 1;
        if let Err(msg) = check() {
            self.failures += 1;
            if self.samples.len() < 10 {
                self.samples.push(format!("{label}: {msg}"));
            }
        }
    }
}

struct Suite {
    id: &'static str,
    aliases: &'static [&'static str],
    description: &'static str,
    sampled: bool,
    run: fn(&mut Tally, &mut ChaCha8Rng) -> Result<()>,
}

const SUITES: &[Suite] = &[
    Suite {
        id: "halfspace-criteria-n3",
        aliases: &["prop2.2-equivalence-n3"],
        description: "half-space test, witness and four independent criteria agree on every quasiorder on 3 points",
        sampled: false,
        run: |t, _| halfspace_criteria(t, 3),
    },
    Suite {
        id: "halfspace-criteria-n4",
        aliases: &["prop2.2-equivalence-n4"],
        description: "half-space test, witness and four independent criteria agree on every quasiorder on 4 points",
        sampled: false,
        run: |t, _| halfspace_criteria(t, 4),
    },
    Suite {
        id: "complementary-pairs-n3",
        aliases: &[],
        description: "complementary pairs are exactly the pairs meeting in the diagonal whose restrictions join back to every quasiorder",
        sampled: false,
        run: |t, _| complementary_pairs(t, 3),
    },
    Suite {
        id: "halfspace-closure-n4",
        aliases: &[],
        description: "inverses, restrictions, complements and induced orders of half-spaces on up to 4 points are half-spaces",
        sampled: false,
        run: |t, _| halfspace_closure(t, 4),
    },
    Suite {
        id: "box-roundtrip-n3",
        aliases: &["thm2.11-roundtrip-n3"],
        description: "box decomposition and reconstruction are inverse on 3 points",
        sampled: false,
        run: |t, _| box_roundtrip(t, 3),
    },
    Suite {
        id: "box-roundtrip-n4",
        aliases: &["thm2.11-roundtrip-n4"],
        description: "box decomposition and reconstruction are inverse on 4 points",
        sampled: false,
        run: |t, _| box_roundtrip(t, 4),
    },
    Suite {
        id: "box-roundtrip-n5",
        aliases: &["thm2.11-roundtrip-n5"],
        description: "box decomposition and reconstruction are inverse on 5 points",
        sampled: false,
        run: |t, _| box_roundtrip(t, 5),
    },
    Suite {
        id: "extension-exhaustive-n3",
        aliases: &[],
        description: "tightening, linearization, two-order representation and seeded extension on every instance up to 3 points",
        sampled: false,
        run: |t, _| (0..=3).try_for_each(|n| extension_exhaustive(t, n)),
    },
    Suite {
        id: "extension-sampled-n4",
        aliases: &[],
        description: "tightening, linearization, two-order representation and seeded extension on 12000 sampled instances on 4 points",
        sampled: true,
        run: |t, rng| extension_sampled(t, rng, 4, 3000),
    },
    Suite {
        id: "extension-sampled-n5",
        aliases: &[],
        description: "tightening, linearization, two-order representation and seeded extension on 12000 sampled instances on 5 points",
        sampled: true,
        run: |t, rng| extension_sampled(t, rng, 5, 3000),
    },
    Suite {
        id: "halfspace-realizer-n4",
        aliases: &[],
        description: "linear realizers of the quotient pull back to half-space realizers on every quasiorder up to 4 points",
        sampled: false,
        run: |t, _| halfspace_realizers(t, 4),
    },
    Suite {
        id: "transform-exhaustive-n4",
        aliases: &[],
        description: "both realizer transformations on every 2- and 3-part half-space realizer (at most 500 sampled per order) of every partial order up to 4 points",
        sampled: true,
        run: |t, rng| transform_exhaustive(t, rng, 4, 500),
    },
    Suite {
        id: "transform-random-n5",
        aliases: &[],
        description: "both realizer transformations on 1000 random quasiorders on 5 points with random realizers, orders and seeds",
        sampled: true,
        run: |t, rng| transform_random(t, rng, 5, 1000),
    },
    Suite {
        id: "dimension-quasiorders-n4",
        aliases: &[],
        description: "half-space dimension versus quotient dimension, with the empty-box rule, on every quasiorder up to 4 points",
        sampled: false,
        run: |t, _| dimension_quasiorders(t, 4),
    },
    Suite {
        id: "dimension-posets-n5",
        aliases: &[],
        description: "half-space dimension versus order dimension on every partial order up to 5 points",
        sampled: false,
        run: |t, _| dimension_posets(t, 5),
    },
    Suite {
        id: "dimension-bounds-n4",
        aliases: &[],
        description: "half-space dimension is at most the quotient dimension, is 1 exactly on half-spaces, and never grows under restriction, up to 4 points",
        sampled: false,
        run: |t, _| dimension_bounds(t, 4),
    },
    Suite {
        id: "product-classification",
        aliases: &["thm3.4-products"],
        description: "structural product verdict matches the materialized product for every list of up to 3 factors on at most 3 points with product size at most 12",
        sampled: false,
        run: |t, _| product_classification(t, 3, 12),
    },
    Suite {
        id: "separation",
        aliases: &[],
        description: "crossing chains cannot be separated by complementary half-spaces; relaxed variants can",
        sampled: false,
        run: |t, _| separation(t),
    },
    Suite {
        id: "enumeration-n5",
        aliases: &[],
        description: "filter and generative enumerations of quasiorders and half-spaces agree up to 5 points and match known counts",
        sampled: false,
        run: |t, _| enumeration(t, 5),
    },
];

/// Identifiers of all registered suites, in registration order.
pub fn suite_ids() -> Vec<&'static str> {
    SUITES.iter().map(|s| s.id).collect()
}

/// Alternative identifiers accepted for some suites, with their targets.
pub fn suite_aliases() -> Vec<(&'static str, &'static str)> {
    SUITES
        .iter()
        .flat_map(|s| s.aliases.iter().map(move |a| (*a, s.id)))
        .collect()
}

pub fn theorem_replay(suite_id: &str) -> Result<ReplayReport> {
    theorem_replay_with_seed(suite_id, DEFAULT_SEED)
}

pub fn theorem_replay_with_seed(suite_id: &str, seed: u64) -> Result<ReplayReport> {
    let suite = SUITES
        .iter()
        .find(|s| s.id == suite_id || s.aliases.contains(&suite_id))
        .ok_or_else(|| Error::Input(format!("unknown suite {suite_id:?}; known: {}", suite_ids().join(", "))))?;
    let start = Instant::now();
    let mut tally = Tally::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (suite.run)(&mut tally, &mut rng)?;
    Ok(ReplayReport {
        suite: suite_id.to_string(),
        description: suite.description.to_string(),
        instances: tally.instances,
        failures: tally.failures,
        failure_samples: tally.samples,
        seed: suite.sampled.then_some(seed),
        elapsed: start.elapsed(),
    })
}

fn halfspace_criteria(t: &mut Tally, n: usize) -> Result<()> {
    for q in enumerate_quasiorders(n)? {
        t.run(format_args!("{q:?}"), || {
            let witness = halfspace_witness(&q);
            let primary = witness.is_none();
            let r = q.as_relation();
            ensure!(criteria::complement_is_transitive(r) == primary, "complement transitivity disagrees");
            ensure!(criteria::all_triples_are_halfspaces(r) == primary, "three-point restrictions disagree");
            ensure!(criteria::upward_condition(r) == primary, "upward scan disagrees");
            ensure!(criteria::downward_condition(r) == primary, "downward scan disagrees");
            if let Some((x, y, z)) = witness {
                ensure!(
                    !q.contains(x, y) && !q.contains(y, x) && q.contains(x, z) && z != x && !q.contains(y, z),
                    "witness ({x}, {y}, {z}) does not violate the condition"
                );
            }
            Ok(())
        });
    }
    Ok(())
}

fn complementary_pairs(t: &mut Tally, n: usize) -> Result<()> {
    let all: Vec<Quasiorder> = enumerate_quasiorders(n)?.collect();
    let diag = Relation::identity(n);
    let full = Relation::full(n);
    for a in &all {
        for b in &all {
            t.run(format_args!("{a:?} / {b:?}"), || {
                let meets = a.intersection(b) == diag;
                let covering = meets && a.union(b) == full;
                let mut joining = meets;
                if joining {
                    for g in &all {
                        let ag = lib(quord_meet(a, g))?;
                        let bg = lib(quord_meet(b, g))?;
                        if lib(quord_join(&ag, &bg))? != *g {
                            joining = false;
                            break;
                        }
                    }
                }
                ensure!(covering == joining, "covering {covering} but join condition {joining}");
                ensure!(lib(check_complementary_pair(a, b))? == covering, "pair check disagrees");
                if covering {
                    ensure!(is_halfspace(a) && is_halfspace(b), "complementary members are not half-spaces");
                    ensure!(*b.as_relation() == complement_with_diagonal(a), "partner is not the complement");
                    ensure!(lib(check_complementary_pair(&a.inverse(), &b.inverse()))?, "inverses are not complementary");
                }
                Ok(())
            });
        }
    }
    Ok(())
}

fn halfspace_closure(t: &mut Tally, max_n: usize) -> Result<()> {
    for n in 0..=max_n {
        for h in enumerate_halfspaces(n)? {
            t.run(format_args!("{h:?}"), || {
                ensure!(is_halfspace(&h.inverse()), "inverse is not a half-space");
                let c = complement_halfspace(&h);
                ensure!(is_halfspace(&c), "complement is not a half-space");
                ensure!(complement_halfspace(&c) == h, "double complement differs");
                for subset in 1..(1u64 << n) {
                    let elems: Vec<usize> = bits(subset).collect();
                    let (r, _) = lib(h.restrict(&elems))?;
                    ensure!(is_halfspace(&r), "restriction to {elems:?} is not a half-space");
                    let cr = lib(c.restrict(&elems))?.0;
                    ensure!(lib(check_complementary_pair(&r, &cr))?, "restricted pair to {elems:?} is not complementary");
                }
                let q = h.induced_order();
                ensure!(is_halfspace(q.induced.as_quasiorder()), "induced order is not a half-space");
                Ok(())
            });
        }
    }
    Ok(())
}

fn box_roundtrip(t: &mut Tally, n: usize) -> Result<()> {
    for h in enumerate_halfspaces(n)? {
        t.run(format_args!("{h:?}"), || {
            let d = box_decomposition(&h);
            ensure!(reconstruct_from_boxes(&d) == h, "reconstruction differs");
            ensure!(standard_construction(&KernelPresentation::canonical(&h)) == h, "kernel presentation differs");
            for b in d.boxes() {
                ensure!(lib(is_box(&h, &b.members))?, "{:?} not recognized as a box", b.members);
            }
            Ok(())
        });
    }
    for d in all_box_decompositions(n)? {
        t.run(format_args!("{d:?}"), || {
            let h = reconstruct_from_boxes(&d);
            ensure!(lib(HalfSpace::new(h.as_quasiorder().clone())).is_ok(), "reconstruction is not a half-space");
            ensure!(box_decomposition(&h) == d, "decomposition of the reconstruction differs");
            Ok(())
        });
    }
    Ok(())
}

fn check_tighten(g: &Quasiorder, alpha: &HalfSpace, ext: &LinearOrder) -> Check {
    let tau = lib(tighten_halfspace(g, alpha, ext))?;
    ensure!(is_halfspace(&tau), "tightened relation is not a half-space");
    ensure!(g.is_subset(&tau) && tau.is_subset(alpha), "tightened relation leaves [gamma, alpha]");
    ensure!(
        tau.symmetric_part() == g.symmetric_part(),
        "tightened symmetric part differs from gamma's"
    );
    Ok(())
}

fn check_linearize(alpha: &HalfSpace, lambda: &LinearOrder) -> Check {
    let l = lib(linearize_halfspace(alpha, lambda))?;
    let l2 = lib(linearize_halfspace(alpha, &lambda.inverse()))?;
    ensure!(LinearOrder::new(l.as_relation().clone()).is_ok(), "result is not a linear order");
    ensure!(alpha.is_subset(&l), "result does not extend the half-space");
    ensure!(l.intersection(&l2) == *alpha.as_relation(), "results for an order and its inverse do not meet in the half-space");
    Ok(())
}

fn check_two_linear(alpha: &HalfSpace, seed: &LinearOrder) -> Check {
    let (r1, r2) = lib(two_linear_representation(alpha, Some(seed)))?;
    let q = alpha.induced_order();
    let r = q.induced.as_relation();
    ensure!(r.is_subset(&r1) && r.is_subset(&r2), "orders do not extend the induced order");
    ensure!(r1.intersection(&r2) == *r, "orders do not meet in the induced order");
    ensure!(lib(order_dimension(&q.induced))?.0 <= 2, "induced order has dimension above 2");
    Ok(())
}

fn check_szpilrajn(p: &PartialOrder, seed: &LinearOrder) -> Check {
    let l = lib(szpilrajn_extension(p, seed))?;
    ensure!(LinearOrder::new(l.as_relation().clone()).is_ok(), "result is not a linear order");
    ensure!(p.is_subset(&l), "result does not extend the order");
    if p.is_subset(seed) {
        ensure!(l == *seed, "a seed extending the order was not returned unchanged");
    }
    Ok(())
}

fn permutations(n: usize) -> Vec<LinearOrder> {
    linear_extensions(&PartialOrder::identity(n))
}

fn random_permutation(rng: &mut ChaCha8Rng, n: usize) -> LinearOrder {
    let mut s: Vec<usize> = (0..n).collect();
    s.shuffle(rng);
    LinearOrder::from_sequence(&s).expect("permutation")
}

fn extension_exhaustive(t: &mut Tally, n: usize) -> Result<()> {
    let catalog = HalfSpaceCatalog::new(n)?;
    let halfspaces: Vec<HalfSpace> = catalog.iter().collect();
    let perms = permutations(n);
    for g in enumerate_quasiorders(n)? {
        let q = g.induced_order();
        let exts = linear_extensions(&q.induced);
        for i in catalog.above(&g) {
            let alpha = catalog.get(i);
            for ext in &exts {
                t.run(format_args!("tighten {g:?} in {alpha:?}"), || check_tighten(&g, &alpha, ext));
            }
        }
        if let Ok(p) = g.to_partial_order() {
            for seed in &perms {
                t.run(format_args!("extend {p:?}"), || check_szpilrajn(&p, seed));
            }
        }
    }
    for alpha in &halfspaces {
        if alpha.antisymmetric_violation().is_none() {
            for lambda in &perms {
                t.run(format_args!("linearize {alpha:?}"), || check_linearize(alpha, lambda));
            }
        }
        for seed in permutations(alpha.induced_order().len()) {
            t.run(format_args!("two orders for {alpha:?}"), || check_two_linear(alpha, &seed));
        }
    }
    Ok(())
}

fn extension_sampled(t: &mut Tally, rng: &mut ChaCha8Rng, n: usize, per_kind: usize) -> Result<()> {
    let catalog = HalfSpaceCatalog::new(n)?;
    let quasiorders: Vec<Quasiorder> = enumerate_quasiorders(n)?.collect();
    let posets: Vec<PartialOrder> = quasiorders.iter().filter_map(|q| q.to_partial_order().ok()).collect();
    let antisymmetric: Vec<HalfSpace> = catalog.iter().filter(|h| h.antisymmetric_violation().is_none()).collect();
    for _ in 0..per_kind {
        let g = quasiorders.choose(rng).expect("nonempty");
        let above = catalog.above(g);
        let alpha = catalog.get(*above.choose(rng).expect("full relation lies above"));
        let q = g.induced_order();
        let seed = random_permutation(rng, q.len());
        t.run(format_args!("tighten {g:?} in {alpha:?}"), || {
            let ext = lib(szpilrajn_extension(&q.induced, &seed))?;
            check_tighten(g, &alpha, &ext)
        });

        let alpha = antisymmetric.choose(rng).expect("nonempty");
        let lambda = random_permutation(rng, n);
        t.run(format_args!("linearize {alpha:?}"), || check_linearize(alpha, &lambda));

        let alpha = catalog.get(rng.gen_range(0..catalog.len()));
        let seed = random_permutation(rng, alpha.induced_order().len());
        t.run(format_args!("two orders for {alpha:?}"), || check_two_linear(&alpha, &seed));

        let p = posets.choose(rng).expect("nonempty");
        let seed = random_permutation(rng, n);
        t.run(format_args!("extend {p:?}"), || check_szpilrajn(p, &seed));
    }
    Ok(())
}

fn halfspace_realizers(t: &mut Tally, max_n: usize) -> Result<()> {
    for n in 0..=max_n {
        for g in enumerate_quasiorders(n)? {
            t.run(format_args!("{g:?}"), || {
                let q = g.induced_order();
                let (_, linear) = lib(quotient_dimension(&g))?;
                let parts = lib(halfspace_realizer_from_linear_realizer(&g, &linear))?;
                for (h, l) in parts.iter().zip(&linear) {
                    ensure!(is_halfspace(h), "pulled-back order is not a half-space");
                    let k = lib(KernelPresentation::new(q.class_of.clone(), vec![true; q.len()], l.clone()))?;
                    ensure!(standard_construction(&k) == *h, "kernel construction differs from the pull-back");
                }
                lib(Realizer::new(g.clone(), parts))?;
                Ok(())
            });
        }
    }
    Ok(())
}

fn check_transforms(r: &Realizer, mu: &LinearOrder, i_star: usize, seeds: &TransformSeeds) -> Check {
    let q = r.target().induced_order();
    let main = lib(realizer_to_linear_extensions(r, mu, i_star, seeds))?;
    let alt = lib(realizer_to_linear_extensions_alt(r, mu, i_star))?;
    verify_linear_realizer(&q, &main.orders)?;
    verify_linear_realizer(&q, &alt.orders)?;
    let (rho, theta) = (main.rho.as_relation(), main.prepared.theta.as_relation());
    ensure!(rho.intersection(theta) == Relation::identity(q.len()), "rho meets theta off the diagonal");
    let strict = rho.difference(&Relation::identity(q.len()));
    ensure!(
        theta.compose(&strict).is_subset(rho) && strict.compose(theta).is_subset(rho),
        "strict part of rho is not theta-stable"
    );
    for tie in [mu.intersection(theta), mu.inverse().intersection(theta)] {
        let base = rho.union(&tie);
        ensure!(
            base.transitive_closure() == base && base.antisymmetric_violation().is_none(),
            "rho with a tie-break on theta is not a partial order"
        );
    }
    Ok(())
}

fn verify_linear_realizer(q: &QuotientMap, orders: &[LinearOrder]) -> Check {
    let k = q.len();
    let mut meet = Relation::full(k);
    for l in orders {
        ensure!(l.total_violation().is_none() && l.antisymmetric_violation().is_none(), "order is not linear");
        ensure!(q.induced.is_subset(l), "order does not extend the quotient order");
        meet = meet.intersection(l);
    }
    ensure!(meet == *q.induced.as_relation(), "orders do not meet in the quotient order");
    Ok(())
}

fn transform_exhaustive(t: &mut Tally, rng: &mut ChaCha8Rng, max_n: usize, cap: usize) -> Result<()> {
    for n in 0..=max_n {
        let catalog = HalfSpaceCatalog::new(n)?;
        for p in posets_by_insertion(n)? {
            let above: Vec<u64> = catalog.above(&p).into_iter().map(|i| catalog.get(i).flat()).collect();
            let target = p.flat();
            let mut realizers: Vec<Vec<usize>> = Vec::new();
            for i in 0..above.len() {
                for j in i + 1..above.len() {
                    let m = above[i] & above[j];
                    if m == target {
                        realizers.push(vec![i, j]);
                    }
                    for (k, &hk) in above.iter().enumerate().skip(j + 1) {
                        if m & hk == target {
                            realizers.push(vec![i, j, k]);
                        }
                    }
                }
            }
            if realizers.len() > cap {
                let mut picked = rand::seq::index::sample(rng, realizers.len(), cap).into_vec();
                picked.sort_unstable();
                realizers = picked.into_iter().map(|i| realizers[i].clone()).collect();
            }
            let identity = LinearOrder::identity_permutation(n);
            for idx in realizers {
                let parts: Vec<HalfSpace> = idx
                    .iter()
                    .map(|&i| HalfSpace::new_unchecked(Relation::from_flat(n, above[i])))
                    .collect();
                t.run(format_args!("{p:?} with parts {idx:?}"), || {
                    let r = lib(Realizer::new(p.as_quasiorder().clone(), parts))?;
                    for i_star in 0..r.len() {
                        for mu in [&identity, &identity.inverse()] {
                            check_transforms(&r, mu, i_star, &TransformSeeds::default())?;
                        }
                    }
                    Ok(())
                });
            }
        }
    }
    Ok(())
}

fn random_realizer(rng: &mut ChaCha8Rng, catalog: &HalfSpaceCatalog, g: &Quasiorder) -> Result<Realizer> {
    let above = catalog.above(g);
    let mut missing: Vec<(usize, usize)> = g.complement().pairs().collect();
    missing.shuffle(rng);
    let mut meet = Relation::full(g.n());
    let mut parts = Vec::new();
    for (x, y) in missing {
        if !meet.contains(x, y) {
            continue;
        }
        let choices: Vec<usize> = above.iter().copied().filter(|&i| !catalog.get(i).contains(x, y)).collect();
        let h = catalog.get(*choices.choose(rng).ok_or_else(|| {
            Error::Invariant(format!("no half-space above the target excludes ({x}, {y})"))
        })?);
        meet = meet.intersection(&h);
        parts.push(h);
    }
    while parts.len() < 2 {
        parts.push(catalog.get(*above.choose(rng).expect("full relation lies above")));
    }
    parts.shuffle(rng);
    Realizer::new(g.clone(), parts)
}

fn transform_random(t: &mut Tally, rng: &mut ChaCha8Rng, n: usize, count: usize) -> Result<()> {
    let catalog = HalfSpaceCatalog::new(n)?;
    let quasiorders: Vec<Quasiorder> = enumerate_quasiorders(n)?.collect();
    for _ in 0..count {
        let g = quasiorders.choose(rng).expect("nonempty");
        let r = random_realizer(rng, &catalog, g)?;
        let k = g.induced_order().len();
        let mu = random_permutation(rng, k);
        let i_star = rng.gen_range(0..r.len());
        let seeds = if rng.gen_bool(0.5) {
            TransformSeeds {
                extension: Some(random_permutation(rng, k)),
                lambda: Some(random_permutation(rng, k)),
                lambda_star: Some(random_permutation(rng, k)),
            }
        } else {
            TransformSeeds::default()
        };
        t.run(format_args!("{g:?} with {} parts", r.len()), || check_transforms(&r, &mu, i_star, &seeds));
    }
    Ok(())
}

fn dimension_quasiorders(t: &mut Tally, max_n: usize) -> Result<()> {
    for n in 0..=max_n {
        let catalog = HalfSpaceCatalog::new(n)?;
        for g in enumerate_quasiorders(n)? {
            t.run(format_args!("{g:?}"), || {
                let c = lib(dimension_relation_check_in(&catalog, &g))?;
                ensure!(c.holds(), "{}", c.failures.join("; "));
                Ok(())
            });
        }
    }
    Ok(())
}

fn dimension_posets(t: &mut Tally, max_n: usize) -> Result<()> {
    for n in 0..=max_n {
        let catalog = HalfSpaceCatalog::new(n)?;
        for p in posets_by_insertion(n)? {
            t.run(format_args!("{p:?}"), || {
                let (hs, _) = lib(hs_dimension_in(&catalog, p.as_quasiorder()))?;
                let (dim, witness) = lib(order_dimension(&p))?;
                let meet = witness.iter().fold(Relation::full(n), |acc, l| acc.intersection(l));
                ensure!(meet == *p.as_relation(), "dimension witness does not realize the order");
                let expected = match (hs, p.is_linear()) {
                    (1, true) => 1,
                    (1, false) => 2,
                    (h, _) => h,
                };
                ensure!(dim == expected, "hs_dim {hs}, dim {dim}, expected dim {expected}");
                Ok(())
            });
        }
    }
    Ok(())
}

fn dimension_bounds(t: &mut Tally, max_n: usize) -> Result<()> {
    let catalogs: Vec<HalfSpaceCatalog> = (0..=max_n).map(HalfSpaceCatalog::new).collect::<Result<_>>()?;
    let mut cache: HashMap<Relation, usize> = HashMap::new();
    let mut hs = |g: &Quasiorder| -> std::result::Result<usize, String> {
        if let Some(&d) = cache.get(g.as_relation()) {
            return Ok(d);
        }
        let d = lib(hs_dimension_in(&catalogs[g.n()], g))?.0;
        cache.insert(g.as_relation().clone(), d);
        Ok(d)
    };
    for n in 0..=max_n {
        for g in enumerate_quasiorders(n)? {
            t.run(format_args!("{g:?}"), || {
                let d = hs(&g)?;
                let (qd, _) = lib(quotient_dimension(&g))?;
                ensure!(d <= qd, "hs_dim {d} exceeds quotient dimension {qd}");
                ensure!((d == 1) == is_halfspace(&g), "hs_dim {d} disagrees with the half-space test");
                for subset in 1..(1u64 << n) {
                    let elems: Vec<usize> = bits(subset).collect();
                    let sub = lib(g.restrict(&elems))?.order;
                    let ds = hs(&sub)?;
                    ensure!(ds <= d, "restriction to {elems:?} has hs_dim {ds} > {d}");
                }
                Ok(())
            });
        }
    }
    Ok(())
}

fn product_classification(t: &mut Tally, max_factor: usize, max_size: usize) -> Result<()> {
    let pool: Vec<Quasiorder> = (1..=max_factor)
        .map(|n| enumerate_quasiorders(n).map(|it| it.collect::<Vec<_>>()))
        .collect::<Result<Vec<_>>>()?
        .concat();
    fn lists(pool: &[Quasiorder], max_len: usize, max_size: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut stack: Vec<(Vec<usize>, usize)> = vec![(Vec::new(), 1)];
        while let Some((cur, size)) = stack.pop() {
            if !cur.is_empty() {
                out.push(cur.clone());
            }
            if cur.len() == max_len {
                continue;
            }
            for (i, g) in pool.iter().enumerate() {
                if size * g.n() <= max_size {
                    let mut next = cur.clone();
                    next.push(i);
                    stack.push((next, size * g.n()));
                }
            }
        }
        out.sort();
        out
    }
    for idx in lists(&pool, 3, max_size) {
        let factors: Vec<Quasiorder> = idx.iter().map(|&i| pool[i].clone()).collect();
        t.run(format_args!("factors {factors:?}"), || {
            let (p, _) = lib(direct_product(&factors))?;
            let direct = is_halfspace(&p);
            let (verdict, why) = lib(product_halfspace_predicate(&factors, true))?;
            ensure!(verdict == direct, "structural verdict {verdict} ({why}), direct check {direct}");
            if factors.iter().all(|g| !g.is_trivial()) {
                let (strict, _) = lib(product_halfspace_predicate(&factors, false))?;
                ensure!(strict == direct, "verdict without trivial factors differs");
            }
            let diag = lib(lemma_witnesses(&factors))?;
            if diag.non_halfspace_triple.is_some() {
                ensure!(!direct, "refuting triple found for a half-space product");
            }
            Ok(())
        });
    }
    let chain = |n: usize| LinearOrder::identity_permutation(n).as_quasiorder().clone();
    for (factors, expected) in [
        (vec![chain(2), chain(2)], true),
        (vec![chain(2), chain(3)], false),
        (vec![chain(2), chain(2), chain(2)], false),
    ] {
        t.run(format_args!("anchor {factors:?}"), || {
            let (verdict, _) = lib(product_halfspace_predicate(&factors, false))?;
            let (p, _) = lib(direct_product(&factors))?;
            ensure!(verdict == expected && is_halfspace(&p) == expected, "anchor verdict {verdict}, expected {expected}");
            Ok(())
        });
    }
    Ok(())
}

fn separation(t: &mut Tally) -> Result<()> {
    let (p1, _) = crossing_chains();
    t.run("crossing chains", || {
        ensure!(verify_separation_counterexample(), "a separating pair exists");
        Ok(())
    });
    t.run("one chain dropped", || {
        let relaxed = Relation::from_pairs(4, &[(2, 1)], true).expect("valid");
        let (a, b) = lib(can_separate(&p1, &relaxed))?.ok_or("no separating pair")?;
        ensure!(p1.is_subset(&a) && relaxed.is_subset(&b), "pair does not separate");
        ensure!(lib(check_complementary_pair(&a, &b))?, "pair is not complementary");
        Ok(())
    });
    t.run("diagonals", || {
        let d = Relation::identity(4);
        ensure!(lib(can_separate(&d, &d))?.is_some(), "diagonals not separable");
        Ok(())
    });
    Ok(())
}

fn enumeration(t: &mut Tally, max_n: usize) -> Result<()> {
    for n in 0..=max_n {
        let q = compare_quasiorder_enumerations(n)?;
        t.run(format_args!("quasiorders on {n}"), || match &q.first_divergence {
            None => Ok(()),
            Some(d) => Err(d.clone()),
        });
        let h = compare_halfspace_enumerations(n)?;
        t.run(format_args!("half-spaces on {n}"), || match &h.first_divergence {
            None => Ok(()),
            Some(d) => Err(d.clone()),
        });
        let decomps: HashSet<Relation> = all_box_decompositions(n)?
            .iter()
            .map(|d| reconstruct_from_boxes(d).into_quasiorder().into_relation())
            .collect();
        t.run(format_args!("box decompositions on {n}"), || {
            ensure!(decomps.len() == h.generated, "{} decompositions, {} half-spaces", decomps.len(), h.generated);
            Ok(())
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quasiorder_counts() {
        let counts: Vec<usize> = (0..=4).map(|n| enumerate_quasiorders(n).unwrap().count()).collect();
        assert_eq!(counts, vec![1, 1, 4, 29, 355]);
        assert!(matches!(enumerate_quasiorders(6), Err(Error::Resource { .. })));
    }

    #[test]
    fn quasiorder_order_is_lexicographic() {
        let all: Vec<Quasiorder> = enumerate_quasiorders(2).unwrap().collect();
        assert_eq!(all[0], Quasiorder::identity(2));
        assert_eq!(all[1].as_relation(), &Relation::from_pairs(2, &[(1, 0)], true).unwrap());
        assert_eq!(all[2].as_relation(), &Relation::from_pairs(2, &[(0, 1)], true).unwrap());
        assert_eq!(all[3], Quasiorder::full(2));
    }

    #[test]
    fn independent_generators_agree() {
        for n in 0..=4 {
            let c = compare_quasiorder_enumerations(n).unwrap();
            assert!(c.agrees(), "{c:?}");
            let h = compare_halfspace_enumerations(n).unwrap();
            assert!(h.agrees(), "{h:?}");
        }
        let posets: Vec<usize> = (0..=4).map(|n| posets_by_insertion(n).unwrap().len()).collect();
        assert_eq!(posets, vec![1, 1, 3, 19, 219]);
    }

    #[test]
    fn separation_examples() {
        assert!(verify_separation_counterexample());
        let (p1, _) = crossing_chains();
        let relaxed = Relation::from_pairs(4, &[(2, 1)], true).unwrap();
        assert!(can_separate(&p1, &relaxed).unwrap().is_some());
        let d = Relation::identity(4);
        let (a, b) = can_separate(&d, &d).unwrap().unwrap();
        assert!(check_complementary_pair(&a, &b).unwrap());
    }

    #[test]
    fn small_suites_pass() {
        let r = theorem_replay("prop2.2-equivalence-n3").unwrap();
        assert_eq!(r.summary(), "29 instances, 0 failures");
        assert!(r.seed.is_none());
        for id in ["complementary-pairs-n3", "box-roundtrip-n3", "extension-exhaustive-n3", "separation"] {
            let r = theorem_replay(id).unwrap();
            assert!(r.passed(), "{r}");
            assert!(r.instances > 0);
        }
    }

    #[test]
    fn unknown_suite_is_input_error() {
        assert!(matches!(theorem_replay("no-such-suite"), Err(Error::Input(_))));
    }

    #[test]
    fn report_text_is_deterministic() {
        let a = theorem_replay("separation").unwrap();
        let b = theorem_replay("separation").unwrap();
        assert_eq!(a.to_string(), b.to_string());
    }
}
