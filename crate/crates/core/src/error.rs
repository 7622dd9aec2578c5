use std::fmt;

use thiserror::Error;

/// The first axiom a candidate relation fails, together with the elements
/// that witness the failure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Violation {
    /// `(x, x)` is missing.
    NotReflexive { x: usize },
    /// `(x, y)` and `(y, z)` are present but `(x, z)` is not.
    NotTransitive { x: usize, y: usize, z: usize },
    /// `(x, y)` and `(y, x)` are both present with `x != y`.
    NotAntisymmetric { x: usize, y: usize },
    /// `(x, y)` is present but `(y, x)` is not.
    NotSymmetric { x: usize, y: usize },
    /// Neither `(x, y)` nor `(y, x)` is present.
    NotTotal { x: usize, y: usize },
    /// `(x, y)` and `(y, x)` are both absent while `(x, z)` is present and
    /// `(y, z)` is absent.
    NotHalfSpace { x: usize, y: usize, z: usize },
}

impl Violation {
    /// The witnessing elements in the order they appear in the message.
    pub fn elements(&self) -> Vec<usize> {
        match *self {
            Violation::NotReflexive { x } => vec![x],
            Violation::NotAntisymmetric { x, y }
            | Violation::NotSymmetric { x, y }
            | Violation::NotTotal { x, y } => vec![x, y],
            Violation::NotTransitive { x, y, z } | Violation::NotHalfSpace { x, y, z } => vec![x, y, z],
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::NotReflexive { x } => write!(f, "not reflexive: ({x},{x}) missing"),
            Violation::NotTransitive { x, y, z } => write!(
                f,
                "not transitive: ({x},{y}) and ({y},{z}) present, ({x},{z}) missing"
            ),
            Violation::NotAntisymmetric { x, y } => {
                write!(f, "not antisymmetric: ({x},{y}) and ({y},{x}) both present")
            }
            Violation::NotSymmetric { x, y } => {
                write!(f, "not symmetric: ({x},{y}) present, ({y},{x}) missing")
            }
            Violation::NotTotal { x, y } => {
                write!(f, "not total: {x} and {y} are incomparable")
            }
            Violation::NotHalfSpace { x, y, z } => write!(
                f,
                "not a half-space: {x},{y} incomparable, ({x},{z}) present, ({y},{z}) missing"
            ),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("validation failed: {0}")]
    Validation(Violation),

    #[error("invalid box decomposition: {0}")]
    Decomposition(String),

    #[error("precondition failed: {message}{}", fmt_witness(.witness))]
    Precondition {
        message: String,
        witness: Option<(usize, usize)>,
    },

    #[error("resource limit: {what} of size {size} exceeds cap {cap}")]
    Resource {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

fn fmt_witness(w: &Option<(usize, usize)>) -> String {
    match w {
        Some((x, y)) => format!(" (witness pair ({x},{y}))"),
        None => String::new(),
    }
}

impl Error {
    pub(crate) fn precondition(message: impl Into<String>, witness: Option<(usize, usize)>) -> Self {
        Error::Precondition {
            message: message.into(),
            witness,
        }
    }

    pub(crate) fn ground_mismatch(left: usize, right: usize) -> Self {
        Error::Input(format!("ground sets differ: {left} vs {right} elements"))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
