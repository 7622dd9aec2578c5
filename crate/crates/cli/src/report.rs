//! Plain-text report assembly. Lines are `key: value`; relation outputs are
//! written as a relation file whose header comments carry the report, so the
//! whole output parses back as a relation.

use std::fmt::Display;

use quord::format::{format_class_order, format_linear_order, write_relation, RelationDocument};
use quord::{Error, GroundSet, LinearOrder, QuotientMap};

use crate::Failure;

#[derive(Default)]
pub struct Report {
    out: String,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn raw(&mut self, value: impl Display) {
        self.out.push_str(&format!("{value}\n"));
    }

    pub fn line(&mut self, key: &str, value: impl Display) {
        self.out.push_str(&format!("{key}: {value}\n"));
    }

    pub fn comment(&mut self, key: &str, value: impl Display) {
        self.out.push_str(&format!("# {key}: {value}\n"));
    }

    pub fn relation(&mut self, doc: &RelationDocument) {
        self.out.push_str(&write_relation(doc));
    }

    pub fn finish(self) -> String {
        self.out
    }
}

/// `a(0) b(1)`: names with internal ids.
pub fn names(doc: &RelationDocument, ids: &[usize]) -> String {
    ids.iter()
        .map(|&i| format!("{}({i})", doc.name(i)))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn order(ground: &GroundSet, l: &LinearOrder) -> String {
    format_linear_order(ground, l)
}

pub fn class_order(ground: &GroundSet, q: &QuotientMap, l: &LinearOrder) -> String {
    format_class_order(ground, q, l)
}

/// Precondition errors with their witness pair spelled out by name.
pub fn precondition(doc: &RelationDocument, e: Error) -> Failure {
    match e {
        Error::Precondition {
            message,
            witness: Some((x, y)),
        } if x < doc.relation.n() && y < doc.relation.n() => Failure {
            code: 2,
            message: format!("precondition failed: {message}; witness pair {}", names(doc, &[x, y])),
        },
        other => other.into(),
    }
}
