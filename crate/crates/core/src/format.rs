//! Reading and writing relation files.
//!
//! The text format starts with a header line, either `elements: a b c` (names
//! separated by whitespace) or `n: K` (elements named `0..K`). An optional
//! `strict: true` header turns off the implicit reflexive pairs. Every other
//! line is a pair `x y`. `#` starts a comment.
//!
//! ```text
//! elements: bot a b top
//! bot a
//! bot b
//! a top
//! b top
//! ```
//!
//! A JSON object `{"elements": [...], "pairs": [[x, y], ...],
//! "reflexive_implicit": true}` is accepted as well; `elements` may also be a
//! bare element count. Output is always the text format.

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::order::{LinearOrder, QuotientMap};
use crate::relation::{GroundSet, Relation};

/// A relation together with the names of its elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationDocument {
    pub ground: GroundSet,
    pub relation: Relation,
}

impl RelationDocument {
    pub fn new(ground: GroundSet, relation: Relation) -> Result<Self> {
        if ground.size() != relation.n() {
            return Err(Error::ground_mismatch(ground.size(), relation.n()));
        }
        Ok(RelationDocument { ground, relation })
    }

    pub fn unlabeled(relation: Relation) -> Self {
        RelationDocument {
            ground: GroundSet::unlabeled(relation.n()),
            relation,
        }
    }

    pub fn name(&self, i: usize) -> String {
        self.ground.name(i)
    }

    /// The same ground set with a different relation.
    pub fn with_relation(&self, relation: Relation) -> Result<Self> {
        RelationDocument::new(self.ground.clone(), relation)
    }
}

fn check_name(name: &str) -> Result<()> {
    if name.is_empty() || name.contains([',', '#']) || name.chars().any(char::is_whitespace) || name.ends_with(':') {
        return Err(Error::Input(format!("invalid element name {name:?}")));
    }
    Ok(())
}

fn lookup(ground: &GroundSet, name: &str, line: usize) -> Result<usize> {
    ground
        .index_of(name)
        .ok_or_else(|| Error::Input(format!("line {line}: unknown element {name:?}")))
}

/// Parses either format, choosing JSON when the input starts with `{`.
pub fn parse_relation(text: &str) -> Result<RelationDocument> {
    if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        parse_text(text)
    }
}

pub fn parse_text(text: &str) -> Result<RelationDocument> {
    let mut ground: Option<GroundSet> = None;
    let mut strict = false;
    let mut pairs = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some((key, value)) = content.split_once(':') {
            let value = value.trim();
            match key.trim() {
                "elements" | "n" if ground.is_some() => {
                    return Err(Error::Input(format!("line {line}: ground set declared twice")));
                }
                "elements" => {
                    let names: Vec<String> = value.split_whitespace().map(str::to_owned).collect();
                    for n in &names {
                        check_name(n)?;
                    }
                    ground = Some(GroundSet::labeled(names)?);
                }
                "n" => {
                    let k = value
                        .parse::<usize>()
                        .map_err(|_| Error::Input(format!("line {line}: bad element count {value:?}")))?;
                    ground = Some(GroundSet::unlabeled(k));
                }
                "strict" => {
                    strict = match value {
                        "true" => true,
                        "false" => false,
                        _ => return Err(Error::Input(format!("line {line}: strict must be true or false"))),
                    };
                }
                other => return Err(Error::Input(format!("line {line}: unknown header {other:?}"))),
            }
            continue;
        }
        let g = ground
            .as_ref()
            .ok_or_else(|| Error::Input(format!("line {line}: pair before `elements:` or `n:` header")))?;
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if tokens.len() != 2 {
            return Err(Error::Input(format!("line {line}: expected `x y`, got {content:?}")));
        }
        pairs.push((lookup(g, tokens[0], line)?, lookup(g, tokens[1], line)?));
    }
    let ground = ground.ok_or_else(|| Error::Input("missing `elements:` or `n:` header".into()))?;
    let relation = Relation::from_pairs(ground.size(), &pairs, !strict)?;
    RelationDocument::new(ground, relation)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum JsonElements {
    Names(Vec<String>),
    Count(usize),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum JsonToken {
    Index(usize),
    Name(String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonRelation {
    elements: JsonElements,
    #[serde(default)]
    pairs: Vec<(JsonToken, JsonToken)>,
    #[serde(default = "default_true")]
    reflexive_implicit: bool,
}

fn default_true() -> bool {
    true
}

pub fn parse_json(text: &str) -> Result<RelationDocument> {
    let raw: JsonRelation =
        serde_json::from_str(text).map_err(|e| Error::Input(format!("invalid relation JSON: {e}")))?;
    let ground = match raw.elements {
        JsonElements::Names(names) => {
            for n in &names {
                check_name(n)?;
            }
            GroundSet::labeled(names)?
        }
        JsonElements::Count(k) => GroundSet::unlabeled(k),
    };
    let resolve = |t: &JsonToken, i: usize| -> Result<usize> {
        match t {
            JsonToken::Index(x) if *x < ground.size() => Ok(*x),
            JsonToken::Index(x) => Err(Error::Input(format!("pair {i}: index {x} out of range"))),
            JsonToken::Name(s) => ground
                .index_of(s)
                .ok_or_else(|| Error::Input(format!("pair {i}: unknown element {s:?}"))),
        }
    };
    let pairs = raw
        .pairs
        .iter()
        .enumerate()
        .map(|(i, (x, y))| Ok((resolve(x, i)?, resolve(y, i)?)))
        .collect::<Result<Vec<_>>>()?;
    let relation = Relation::from_pairs(ground.size(), &pairs, raw.reflexive_implicit)?;
    RelationDocument::new(ground, relation)
}

/// Canonical text form. Reflexive relations omit the diagonal; anything else
/// is written with `strict: true` and every pair.
pub fn write_relation(doc: &RelationDocument) -> String {
    let mut out = String::new();
    match doc.ground.labels() {
        Some(labels) => {
            out.push_str("elements:");
            for l in labels {
                out.push(' ');
                out.push_str(l);
            }
            out.push('\n');
        }
        None => out.push_str(&format!("n: {}\n", doc.ground.size())),
    }
    let reflexive = doc.relation.reflexive_violation().is_none();
    if !reflexive {
        out.push_str("strict: true\n");
    }
    for (x, y) in doc.relation.pairs() {
        if reflexive && x == y {
            continue;
        }
        out.push_str(&format!("{} {}\n", doc.name(x), doc.name(y)));
    }
    out
}

/// JSON form; the diagonal is omitted for reflexive relations and unlabeled
/// ground sets are written as an element count with index pairs.
pub fn write_relation_json(doc: &RelationDocument) -> String {
    let reflexive = doc.relation.reflexive_violation().is_none();
    let pairs = doc.relation.pairs().filter(|&(x, y)| !(reflexive && x == y));
    let value = match doc.ground.labels() {
        Some(labels) => serde_json::json!({
            "elements": labels,
            "pairs": pairs.map(|(x, y)| [doc.name(x), doc.name(y)]).collect::<Vec<_>>(),
            "reflexive_implicit": reflexive,
        }),
        None => serde_json::json!({
            "elements": doc.ground.size(),
            "pairs": pairs.map(|(x, y)| [x, y]).collect::<Vec<_>>(),
            "reflexive_implicit": reflexive,
        }),
    };
    value.to_string()
}

fn split_names(text: &str) -> Vec<&str> {
    text.split(',').map(str::trim).filter(|s| !s.is_empty()).collect()
}

/// Parses `a,b,c` (smallest first) into a linear order on the ground set.
/// Every element must appear exactly once.
pub fn parse_permutation(ground: &GroundSet, text: &str) -> Result<LinearOrder> {
    let seq = split_names(text)
        .into_iter()
        .map(|s| {
            ground
                .index_of(s)
                .ok_or_else(|| Error::Input(format!("unknown element {s:?} in permutation")))
        })
        .collect::<Result<Vec<_>>>()?;
    LinearOrder::from_sequence(&seq).map_err(|e| Error::Input(format!("not a permutation of the elements: {e}")))
}

/// Parses a comma-separated list of element names as an order on the classes
/// of `quotient`: classes are ranked by the first listed member. Every class
/// must be named at least once.
pub fn parse_class_order(ground: &GroundSet, quotient: &QuotientMap, text: &str) -> Result<LinearOrder> {
    let mut seen = vec![false; quotient.len()];
    let mut seq = Vec::new();
    for s in split_names(text) {
        let x = ground
            .index_of(s)
            .ok_or_else(|| Error::Input(format!("unknown element {s:?} in permutation")))?;
        let c = quotient.class_of[x];
        if !seen[c] {
            seen[c] = true;
            seq.push(c);
        }
    }
    if let Some(c) = seen.iter().position(|s| !s) {
        return Err(Error::Input(format!(
            "permutation does not mention the class of {}",
            ground.name(quotient.classes[c][0])
        )));
    }
    LinearOrder::from_sequence(&seq)
}

/// `a < b < c`.
pub fn format_linear_order(ground: &GroundSet, order: &LinearOrder) -> String {
    order
        .sequence()
        .iter()
        .map(|&i| ground.name(i))
        .collect::<Vec<_>>()
        .join(" < ")
}

/// `{a,b}`.
pub fn format_set(ground: &GroundSet, members: &[usize]) -> String {
    format!(
        "{{{}}}",
        members.iter().map(|&i| ground.name(i)).collect::<Vec<_>>().join(",")
    )
}

/// A linear order on quotient classes, each class shown as a set:
/// `{a,b} < {c}`.
pub fn format_class_order(ground: &GroundSet, quotient: &QuotientMap, order: &LinearOrder) -> String {
    order
        .sequence()
        .iter()
        .map(|&c| format_set(ground, &quotient.classes[c]))
        .collect::<Vec<_>>()
        .join(" < ")
}

#[cfg(test)]
mod tests {
    use super::*;

    const M2: &str = "elements: bot a b top\n# the four-element lattice\nbot a\nbot b\na top\nb top\nbot top\n";

    #[test]
    fn parse_text_format() {
        let d = parse_relation(M2).unwrap();
        assert_eq!(d.relation.n(), 4);
        assert_eq!(d.relation.len(), 9);
        assert!(d.relation.contains(1, 1));
        assert!(d.relation.contains(0, 3));
        assert_eq!(d.name(3), "top");
    }

    #[test]
    fn strict_and_numeric() {
        let d = parse_relation("n: 3\nstrict: true\n0 1 # trailing comment\n").unwrap();
        assert_eq!(d.relation.len(), 1);
        let d = parse_relation("n: 2\n").unwrap();
        assert_eq!(d.relation, Relation::identity(2));
    }

    #[test]
    fn text_errors() {
        for bad in [
            "",
            "a b\n",
            "elements: a b\na c\n",
            "elements: a a\n",
            "elements: a b\na\n",
            "n: x\n",
            "elements: a b\nstrict: maybe\n",
            "elements: a\ncolor: red\n",
            "n: 2\nn: 2\n",
            "n: 65\n",
        ] {
            assert!(parse_relation(bad).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn json_format() {
        let d = parse_relation(r#"{"elements": ["x", "y"], "pairs": [["x", "y"]]}"#).unwrap();
        assert_eq!(d.relation.len(), 3);
        let d = parse_relation(r#"{"elements": 3, "pairs": [[0, 2]], "reflexive_implicit": false}"#).unwrap();
        assert_eq!(d.relation.len(), 1);
        assert!(parse_relation(r#"{"elements": ["x"], "pairs": [["x", "z"]]}"#).is_err());
        assert!(parse_relation(r#"{"pairs": []}"#).is_err());
    }

    #[test]
    fn round_trip() {
        let d = parse_relation(M2).unwrap();
        let text = write_relation(&d);
        assert_eq!(parse_relation(&text).unwrap(), d);
        assert_eq!(parse_relation(&write_relation_json(&d)).unwrap(), d);
        let s = parse_relation("n: 3\nstrict: true\n0 1\n1 1\n").unwrap();
        assert_eq!(write_relation(&s), "n: 3\nstrict: true\n0 1\n1 1\n");
        assert_eq!(parse_relation(&write_relation(&s)).unwrap(), s);
        assert_eq!(parse_relation(&write_relation_json(&s)).unwrap(), s);
    }

    #[test]
    fn permutations() {
        let d = parse_relation(M2).unwrap();
        let l = parse_permutation(&d.ground, "top, b,a,bot").unwrap();
        assert_eq!(l.sequence(), vec![3, 2, 1, 0]);
        assert_eq!(format_linear_order(&d.ground, &l), "top < b < a < bot");
        assert!(parse_permutation(&d.ground, "top,b,a").is_err());
        assert!(parse_permutation(&d.ground, "top,b,a,a").is_err());

        let q = crate::order::Quasiorder::new(
            Relation::from_pairs(3, &[(0, 1), (1, 0)], true).unwrap(),
        )
        .unwrap()
        .induced_order();
        let g = GroundSet::unlabeled(3);
        let c = parse_class_order(&g, &q, "2,1").unwrap();
        assert_eq!(c.sequence(), vec![1, 0]);
        assert_eq!(format_class_order(&g, &q, &c), "{2} < {0,1}");
        assert!(parse_class_order(&g, &q, "2").is_err());
    }
}
