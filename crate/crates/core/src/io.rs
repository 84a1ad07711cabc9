//! Serialization: JSON poset documents, DOT Hasse diagrams, ideal covers
//! and interval lists.
//!
//! ```json
//! {"elements": [{"id": 0, "label": "a0"}, {"id": 1}], "leq": [[0, 1]], "closed": true}
//! ```
//!
//! Reflexive pairs may be omitted. With `"closed": false` the pairs are
//! generators and are closed transitively before validation.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::elemset::ElemSet;
use crate::error::{Error, Result};
use crate::ideals::IdealCover;
use crate::poset::Poset;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementDoc {
    pub id: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PosetDoc {
    pub elements: Vec<ElementDoc>,
    #[serde(default)]
    pub leq: Vec<(u64, u64)>,
    #[serde(default = "default_closed")]
    pub closed: bool,
}

fn default_closed() -> bool {
    true
}

impl PosetDoc {
    pub fn from_poset(p: &Poset) -> Self {
        let elements = (0..p.len())
            .map(|i| ElementDoc {
                id: p.id(i),
                label: p.label(i).map(str::to_string),
            })
            .collect();
        let leq = (0..p.len())
            .flat_map(|i| p.strict_up(i).iter().map(move |j| (i, j)).collect::<Vec<_>>())
            .map(|(i, j)| (p.id(i), p.id(j)))
            .collect();
        PosetDoc {
            elements,
            leq,
            closed: true,
        }
    }

    pub fn into_poset(mut self) -> Result<Poset> {
        self.elements.sort_by_key(|e| e.id);
        if let Some(w) = self.elements.windows(2).find(|w| w[0].id == w[1].id) {
            return Err(Error::Schema(format!("duplicate element id {}", w[0].id)));
        }
        let ids = self.elements.iter().map(|e| e.id).collect();
        let labels = self.elements.into_iter().map(|e| e.label).collect();
        Poset::from_pairs(ids, labels, &self.leq, self.closed)
    }
}

/// Parse failures surface as [`Error::Json`]; a well-formed document that
/// is not a poset as [`Error::Schema`], [`Error::NotInCarrier`] or
/// [`Error::NotAPartialOrder`].
pub fn poset_from_json(text: &str) -> Result<Poset> {
    let doc: PosetDoc = serde_json::from_str(text)?;
    doc.into_poset()
}

pub fn poset_to_json(p: &Poset) -> String {
    serde_json::to_string_pretty(&PosetDoc::from_poset(p)).expect("plain data")
}

/// Hasse diagram, covers only, edges sorted by (lower id, upper id).
/// Nodes are named by id and carry their label, if any.
pub fn poset_to_dot(p: &Poset) -> String {
    let mut out = String::from("digraph poset {\n  rankdir=BT;\n");
    for i in 0..p.len() {
        match p.label(i) {
            Some(l) => writeln!(out, "  \"{}\" [label={l:?}];", p.id(i)),
            None => writeln!(out, "  \"{}\";", p.id(i)),
        }
        .expect("writing to a String");
    }
    let mut covers = p.covers();
    covers.sort_unstable();
    for (lo, hi) in covers {
        let _ = writeln!(out, "  \"{}\" -> \"{}\";", p.id(lo), p.id(hi));
    }
    out.push_str("}\n");
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverDoc {
    pub parts: Vec<Vec<u64>>,
    pub witness: Vec<u64>,
}

pub fn cover_to_doc(p: &Poset, c: &IdealCover) -> CoverDoc {
    CoverDoc {
        parts: c.parts.iter().map(|a| p.ids_of(a)).collect(),
        witness: p.ids_of(&c.witness),
    }
}

/// Read a cover back against `p`; the target is the union of the parts.
pub fn cover_from_doc(p: &Poset, doc: &CoverDoc) -> Result<IdealCover> {
    let parts = doc
        .parts
        .iter()
        .map(|ids| p.set_from_ids(ids.iter().copied()))
        .collect::<Result<Vec<_>>>()?;
    let target = parts.iter().fold(p.empty_set(), |acc, a| acc.union(a));
    Ok(IdealCover {
        target,
        parts,
        witness: p.set_from_ids(doc.witness.iter().copied())?,
    })
}

fn id_line(ids: &[u64]) -> String {
    ids.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")
}

/// One interval per line as sorted ids separated by spaces; the empty
/// interval is an empty line. Lines are sorted by id list.
pub fn intervals_to_text(p: &Poset, intervals: &[ElemSet]) -> String {
    let mut lines: Vec<Vec<u64>> = intervals.iter().map(|s| p.ids_of(s)).collect();
    lines.sort();
    let mut out = String::new();
    for l in lines {
        out.push_str(&id_line(&l));
        out.push('\n');
    }
    out
}

pub fn intervals_from_text(p: &Poset, text: &str) -> Result<Vec<ElemSet>> {
    text.lines()
        .map(|line| {
            let ids = line
                .split_whitespace()
                .map(|t| t.parse::<u64>().map_err(|e| Error::Schema(format!("{t:?}: {e}"))))
                .collect::<Result<Vec<_>>>()?;
            p.set_from_ids(ids)
        })
        .collect()
}
