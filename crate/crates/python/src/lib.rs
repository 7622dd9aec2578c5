//! Python bindings: relations, quasiorders and the main constructions.
//!
//! Elements are the integers `0..n`; relation files carry names and are
//! converted with `parse_relation` / `Relation.to_text`.

use pyo3::exceptions::{PyMemoryError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use quord::dimension::{
    enumerate_halfspaces, hs_dimension, order_dimension, realizer_to_linear_extensions,
    realizer_to_linear_extensions_alt, Realizer, TransformSeeds,
};
use quord::extension::{linearize_halfspace, szpilrajn_extension, tighten_halfspace};
use quord::format::{parse_relation as parse_document, write_relation, RelationDocument};
use quord::halfspace::{box_decomposition, complement_halfspace, halfspace_witness};
use quord::oracle::{enumerate_quasiorders as quasiorder_stream, theorem_replay_with_seed, DEFAULT_SEED};
use quord::product::{direct_product as product_of, product_halfspace_predicate};
use quord::{GroundSet, HalfSpace, LinearOrder, PartialOrder};

fn py_err(e: quord::Error) -> PyErr {
    match e {
        quord::Error::Resource { .. } => PyMemoryError::new_err(e.to_string()),
        quord::Error::Invariant(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn linear(sequence: &[usize]) -> PyResult<LinearOrder> {
    LinearOrder::from_sequence(sequence).map_err(py_err)
}

/// A binary relation on `0..n`.
#[pyclass(module = "quord", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct Relation {
    inner: quord::Relation,
}

#[pymethods]
impl Relation {
    #[new]
    #[pyo3(signature = (n, pairs, reflexive = false))]
    fn new(n: usize, pairs: Vec<(usize, usize)>, reflexive: bool) -> PyResult<Self> {
        let inner = quord::Relation::from_pairs(n, &pairs, reflexive).map_err(py_err)?;
        Ok(Relation { inner })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn pairs(&self) -> Vec<(usize, usize)> {
        self.inner.pairs().collect()
    }

    fn contains(&self, a: usize, b: usize) -> bool {
        a < self.inner.n() && b < self.inner.n() && self.inner.contains(a, b)
    }

    /// Which basic axioms hold, as a dict of booleans.
    fn classify<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let p = self.inner.classify();
        let d = PyDict::new(py);
        d.set_item("reflexive", p.reflexive)?;
        d.set_item("transitive", p.transitive)?;
        d.set_item("antisymmetric", p.antisymmetric)?;
        d.set_item("symmetric", p.symmetric)?;
        d.set_item("total", p.total)?;
        Ok(d)
    }

    /// Canonical text form, with element names when given.
    #[pyo3(signature = (names = None))]
    fn to_text(&self, names: Option<Vec<String>>) -> PyResult<String> {
        let ground = match names {
            Some(names) => GroundSet::labeled(names).map_err(py_err)?,
            None => GroundSet::unlabeled(self.inner.n()),
        };
        let doc = RelationDocument::new(ground, self.inner.clone()).map_err(py_err)?;
        Ok(write_relation(&doc))
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("Relation(n={}, pairs={:?})", self.inner.n(), self.pairs())
    }
}

/// A reflexive, transitive relation on `0..n`.
#[pyclass(module = "quord", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct Quasiorder {
    inner: quord::Quasiorder,
}

impl Quasiorder {
    fn halfspace(&self) -> PyResult<HalfSpace> {
        HalfSpace::new(self.inner.clone()).map_err(py_err)
    }
}

#[pymethods]
impl Quasiorder {
    /// Builds from the listed pairs; the diagonal is implicit. With
    /// `close=True` the reflexive-transitive closure is taken instead of
    /// requiring transitivity.
    #[new]
    #[pyo3(signature = (n, pairs, close = false))]
    fn new(n: usize, pairs: Vec<(usize, usize)>, close: bool) -> PyResult<Self> {
        let r = quord::Relation::from_pairs(n, &pairs, true).map_err(py_err)?;
        let inner = if close {
            quord::Quasiorder::generated_by(&r)
        } else {
            quord::Quasiorder::new(r).map_err(py_err)?
        };
        Ok(Quasiorder { inner })
    }

    #[staticmethod]
    fn from_relation(r: PyRef<'_, Relation>) -> PyResult<Self> {
        let inner = quord::Quasiorder::new(r.inner.clone()).map_err(py_err)?;
        Ok(Quasiorder { inner })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn pairs(&self) -> Vec<(usize, usize)> {
        self.inner.pairs().collect()
    }

    fn relation(&self) -> Relation {
        Relation {
            inner: self.inner.as_relation().clone(),
        }
    }

    fn is_halfspace(&self) -> bool {
        halfspace_witness(&self.inner).is_none()
    }

    /// `(x, y, z)` with x, y incomparable, x <= z and not y <= z, or None.
    fn halfspace_witness(&self) -> Option<(usize, usize, usize)> {
        halfspace_witness(&self.inner)
    }

    /// Box decomposition rendered as `[{0} < {1,2}∅ < {3}]`.
    #[pyo3(signature = (names = None))]
    fn boxes(&self, names: Option<Vec<String>>) -> PyResult<String> {
        let d = box_decomposition(&self.halfspace()?);
        Ok(match names {
            Some(names) if names.len() == self.inner.n() => d.render(|i| names[i].clone()),
            Some(names) => {
                return Err(PyValueError::new_err(format!(
                    "{} names for {} elements",
                    names.len(),
                    self.inner.n()
                )))
            }
            None => d.render(|i| i.to_string()),
        })
    }

    /// The complementary half-space.
    fn complement(&self) -> PyResult<Quasiorder> {
        let c = complement_halfspace(&self.halfspace()?);
        Ok(Quasiorder {
            inner: c.into_quasiorder(),
        })
    }

    /// Classes of the symmetric part, each sorted, ordered by least member.
    fn classes(&self) -> Vec<Vec<usize>> {
        self.inner.induced_order().classes
    }

    /// Induced partial order on the classes.
    fn quotient(&self) -> Quasiorder {
        Quasiorder {
            inner: self.inner.induced_order().induced.into_quasiorder(),
        }
    }

    /// Half-space dimension and a minimum realizer.
    fn hs_dimension(&self) -> PyResult<(usize, Vec<Quasiorder>)> {
        let (d, r) = hs_dimension(&self.inner).map_err(py_err)?;
        let parts = r
            .parts()
            .iter()
            .map(|h| Quasiorder {
                inner: h.as_quasiorder().clone(),
            })
            .collect();
        Ok((d, parts))
    }

    /// Order dimension of the quotient partial order, with a minimum
    /// realizer given as class sequences (least first).
    fn order_dimension(&self) -> PyResult<(usize, Vec<Vec<usize>>)> {
        let q = self.inner.induced_order();
        let (d, orders) = order_dimension(&q.induced).map_err(py_err)?;
        Ok((d, orders.iter().map(|l| l.sequence()).collect()))
    }

    /// Linear extension; `seed` is a permutation of the elements fixing how
    /// incomparable pairs are resolved.
    #[pyo3(signature = (seed = None))]
    fn linear_extension(&self, seed: Option<Vec<usize>>) -> PyResult<Vec<usize>> {
        let p = PartialOrder::new(self.inner.as_relation().clone()).map_err(py_err)?;
        let seed = match seed {
            Some(s) => linear(&s)?,
            None => LinearOrder::identity_permutation(p.n()),
        };
        Ok(szpilrajn_extension(&p, &seed).map_err(py_err)?.sequence())
    }

    /// Half-space between this quasiorder and `alpha` with the same
    /// symmetric part; `extension` is a linear extension of the quotient,
    /// as a class sequence.
    fn tighten(&self, alpha: PyRef<'_, Quasiorder>, extension: Vec<usize>) -> PyResult<Quasiorder> {
        let tau = tighten_halfspace(&self.inner, &alpha.halfspace()?, &linear(&extension)?).map_err(py_err)?;
        Ok(Quasiorder {
            inner: tau.into_quasiorder(),
        })
    }

    /// Linear order extending this antisymmetric half-space, with `lambda`
    /// deciding its incomparable pairs.
    fn linearize(&self, lambda: Vec<usize>) -> PyResult<Vec<usize>> {
        let l = linearize_halfspace(&self.halfspace()?, &linear(&lambda)?).map_err(py_err)?;
        Ok(l.sequence())
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("Quasiorder(n={}, pairs={:?})", self.inner.n(), self.inner.pairs().filter(|(a, b)| a != b).collect::<Vec<_>>())
    }
}

/// Parses the text or JSON relation format; returns the relation and the
/// element names (None when the file only gives a count).
#[pyfunction]
fn parse_relation(text: &str) -> PyResult<(Relation, Option<Vec<String>>)> {
    let doc = parse_document(text).map_err(py_err)?;
    let names = doc.ground.labels().map(|l| l.to_vec());
    Ok((Relation { inner: doc.relation }, names))
}

/// Componentwise product; element `i` is the tuple with factor 0 as the most
/// significant mixed-radix digit.
#[pyfunction]
fn direct_product(factors: Vec<PyRef<'_, Quasiorder>>) -> PyResult<Quasiorder> {
    let fs: Vec<quord::Quasiorder> = factors.iter().map(|f| f.inner.clone()).collect();
    let (p, _) = product_of(&fs).map_err(py_err)?;
    Ok(Quasiorder { inner: p })
}

/// Whether the product of the factors is a half-space, decided from the
/// factors alone, with an explanation.
#[pyfunction]
#[pyo3(signature = (factors, treat_trivial = true))]
fn product_is_halfspace(factors: Vec<PyRef<'_, Quasiorder>>, treat_trivial: bool) -> PyResult<(bool, String)> {
    let fs: Vec<quord::Quasiorder> = factors.iter().map(|f| f.inner.clone()).collect();
    product_halfspace_predicate(&fs, treat_trivial).map_err(py_err)
}

/// Turns a half-space realizer of `gamma` into linear extensions of its
/// quotient order (class sequences), one per part.
#[pyfunction]
#[pyo3(signature = (gamma, parts, mu = None, i_star = 0, alternative = false))]
fn realizer_to_linear(
    gamma: PyRef<'_, Quasiorder>,
    parts: Vec<PyRef<'_, Quasiorder>>,
    mu: Option<Vec<usize>>,
    i_star: usize,
    alternative: bool,
) -> PyResult<Vec<Vec<usize>>> {
    let hs = parts.iter().map(|p| p.halfspace()).collect::<PyResult<Vec<_>>>()?;
    let r = Realizer::new(gamma.inner.clone(), hs).map_err(py_err)?;
    let k = gamma.inner.induced_order().len();
    let mu = match mu {
        Some(m) => linear(&m)?,
        None => LinearOrder::identity_permutation(k),
    };
    let orders = if alternative {
        realizer_to_linear_extensions_alt(&r, &mu, i_star).map_err(py_err)?.orders
    } else {
        realizer_to_linear_extensions(&r, &mu, i_star, &TransformSeeds::default())
            .map_err(py_err)?
            .orders
    };
    Ok(orders.iter().map(|l| l.sequence()).collect())
}

#[pyfunction]
fn enumerate_quasiorders(n: usize) -> PyResult<Vec<Quasiorder>> {
    Ok(quasiorder_stream(n)
        .map_err(py_err)?
        .map(|inner| Quasiorder { inner })
        .collect())
}

#[pyfunction]
fn enumerate_halfspace_orders(n: usize) -> PyResult<Vec<Quasiorder>> {
    Ok(enumerate_halfspaces(n)
        .map_err(py_err)?
        .map(|h| Quasiorder {
            inner: h.into_quasiorder(),
        })
        .collect())
}

/// Runs a verification suite; returns a dict with the instance and failure
/// counts and the report text.
#[pyfunction]
#[pyo3(signature = (suite, seed = None))]
fn run_suite<'py>(py: Python<'py>, suite: &str, seed: Option<u64>) -> PyResult<Bound<'py, PyDict>> {
    let report = py.detach(|| theorem_replay_with_seed(suite, seed.unwrap_or(DEFAULT_SEED)));
    let report = report.map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("suite", &report.suite)?;
    d.set_item("instances", report.instances)?;
    d.set_item("failures", report.failures)?;
    d.set_item("passed", report.passed())?;
    d.set_item("summary", report.summary())?;
    d.set_item("report", report.to_string())?;
    Ok(d)
}

#[pyfunction]
fn verify_separation_counterexample() -> bool {
    quord::oracle::verify_separation_counterexample()
}

#[pymodule(name = "quord")]
fn quord_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Relation>()?;
    m.add_class::<Quasiorder>()?;
    m.add_function(wrap_pyfunction!(parse_relation, m)?)?;
    m.add_function(wrap_pyfunction!(direct_product, m)?)?;
    m.add_function(wrap_pyfunction!(product_is_halfspace, m)?)?;
    m.add_function(wrap_pyfunction!(realizer_to_linear, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_quasiorders, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_halfspace_orders, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    m.add_function(wrap_pyfunction!(verify_separation_counterexample, m)?)?;
    Ok(())
}
