//! Monomial quiver algebras: quivers, paths, relations and normal words.
//!
//! Paths compose left to right: in a word `x₁x₂` the target of `x₁` is the
//! source of `x₂`. A one-vertex quiver gives the free algebra on its arrows,
//! so there is no separate code path for ordinary monomial algebras.
//!
//! The text format accepted by [`Presentation::parse`] is
//!
//! ```text
//! # comments start with '#'
//! vertex 1, 2, 3
//! arrows a:1->2, b:2->3
//! relations a b
//! ```
//!
//! Statements may also be separated by `;`. Without a `vertex` statement the
//! quiver has a single vertex and arrows need no `src->tgt` annotation; without
//! an `arrows` statement the arrows are the names used in the relations, in
//! order of first appearance.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use sha2::{Digest, Sha256};

use crate::error::{Error, PresentationError};

pub type VertexId = usize;

/// Index of an arrow in its quiver. The declaration order of arrows is the
/// total order used for deglex comparisons, so `ArrowId` ordering is that order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArrowId(pub u16);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub source: VertexId,
    pub target: VertexId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
    outgoing: Vec<Vec<ArrowId>>,
}

impl Quiver {
    pub fn new(vertices: Vec<String>, arrows: Vec<Arrow>) -> Result<Self, Error> {
        let mut seen = HashSet::new();
        for v in &vertices {
            if !seen.insert(v.as_str()) {
                return Err(Error::Invalid(format!("duplicate vertex `{v}`")));
            }
        }
        let mut names = HashSet::new();
        for a in &arrows {
            if !names.insert(a.name.as_str()) {
                return Err(Error::Invalid(format!("duplicate arrow `{}`", a.name)));
            }
            if a.source >= vertices.len() || a.target >= vertices.len() {
                return Err(Error::Invalid(format!(
                    "arrow `{}` has an undeclared endpoint",
                    a.name
                )));
            }
        }
        if arrows.len() > u16::MAX as usize {
            return Err(Error::Invalid("too many arrows".into()));
        }
        let mut outgoing = vec![Vec::new(); vertices.len()];
        for (i, a) in arrows.iter().enumerate() {
            outgoing[a.source].push(ArrowId(i as u16));
        }
        Ok(Quiver {
            vertices,
            arrows,
            outgoing,
        })
    }

    /// The one-vertex quiver with loops named `names`.
    pub fn one_vertex(names: &[&str]) -> Self {
        let arrows = names
            .iter()
            .map(|n| Arrow {
                name: n.to_string(),
                source: 0,
                target: 0,
            })
            .collect();
        Quiver::new(vec!["1".to_string()], arrows).expect("distinct loop names")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v]
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow_ids(&self) -> impl Iterator<Item = ArrowId> + '_ {
        (0..self.arrows.len()).map(|i| ArrowId(i as u16))
    }

    pub fn arrow(&self, a: ArrowId) -> &Arrow {
        &self.arrows[a.0 as usize]
    }

    pub fn source(&self, a: ArrowId) -> VertexId {
        self.arrow(a).source
    }

    pub fn target(&self, a: ArrowId) -> VertexId {
        self.arrow(a).target
    }

    /// Arrows starting at `v`, in arrow order.
    pub fn outgoing(&self, v: VertexId) -> &[ArrowId] {
        &self.outgoing[v]
    }

    pub fn arrow_by_name(&self, name: &str) -> Option<ArrowId> {
        self.arrows
            .iter()
            .position(|a| a.name == name)
            .map(|i| ArrowId(i as u16))
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<VertexId> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn is_composable(&self, word: &[ArrowId]) -> bool {
        word.windows(2)
            .all(|w| self.target(w[0]) == self.source(w[1]))
    }
}

/// A nonempty path in the quiver, stored as its word of arrows.
///
/// Ordered degree-lexicographically: shorter words first, then
/// lexicographically by arrow order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<ArrowId>);

impl Monomial {
    pub fn new(word: Vec<ArrowId>) -> Option<Self> {
        if word.is_empty() {
            None
        } else {
            Some(Monomial(word))
        }
    }

    pub fn from_slice(word: &[ArrowId]) -> Option<Self> {
        Self::new(word.to_vec())
    }

    pub fn arrow(a: ArrowId) -> Self {
        Monomial(vec![a])
    }

    pub fn word(&self) -> &[ArrowId] {
        &self.0
    }

    pub fn into_word(self) -> Vec<ArrowId> {
        self.0
    }

    pub fn weight(&self) -> usize {
        self.0.len()
    }

    pub fn first(&self) -> ArrowId {
        self.0[0]
    }

    pub fn last(&self) -> ArrowId {
        self.0[self.0.len() - 1]
    }

    pub fn concat(&self, other: &Monomial) -> Monomial {
        let mut w = self.0.clone();
        w.extend_from_slice(&other.0);
        Monomial(w)
    }

    /// True if `other` occurs in `self` as a contiguous subword.
    pub fn is_divisor_of(&self, other: &Monomial) -> bool {
        other.0.windows(self.0.len()).any(|w| w == self.0.as_slice())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ids: Vec<u16> = self.0.iter().map(|a| a.0).collect();
        write!(f, "M{:?}", ids)
    }
}

/// A quiver together with an antichain of monomial relations of weight ≥ 2.
#[derive(Clone, Debug)]
pub struct Presentation {
    quiver: Quiver,
    relations: Vec<Monomial>,
    relation_set: HashSet<Vec<ArrowId>>,
    relation_lengths: Vec<usize>,
}

impl Presentation {
    pub fn new(quiver: Quiver, relations: Vec<Monomial>) -> Result<Self, PresentationError> {
        let render = |m: &Monomial| render_word(&quiver, m.word());
        for r in &relations {
            if r.word().iter().any(|a| a.0 as usize >= quiver.arrows.len()) {
                return Err(PresentationError::NotComposable {
                    relation: format!("{r:?}"),
                });
            }
            if !quiver.is_composable(r.word()) {
                return Err(PresentationError::NotComposable {
                    relation: render(r),
                });
            }
            if r.weight() < 2 {
                return Err(PresentationError::ShortRelation {
                    relation: render(r),
                    weight: r.weight(),
                });
            }
        }
        for (i, r) in relations.iter().enumerate() {
            for (j, s) in relations.iter().enumerate() {
                if i != j && r.is_divisor_of(s) && (r != s || i < j) {
                    return Err(PresentationError::DivisorViolation {
                        divisor: render(r),
                        multiple: render(s),
                    });
                }
            }
        }
        let mut relations = relations;
        relations.sort();
        let relation_set = relations.iter().map(|r| r.word().to_vec()).collect();
        let relation_lengths: BTreeSet<usize> = relations.iter().map(|r| r.weight()).collect();
        Ok(Presentation {
            quiver,
            relations,
            relation_set,
            relation_lengths: relation_lengths.into_iter().collect(),
        })
    }

    pub fn parse(text: &str) -> Result<Self, PresentationError> {
        parse_presentation(text)
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    /// The relations, sorted deglex.
    pub fn relations(&self) -> &[Monomial] {
        &self.relations
    }

    pub fn max_relation_weight(&self) -> usize {
        self.relation_lengths.last().copied().unwrap_or(0)
    }

    pub fn is_relation(&self, word: &[ArrowId]) -> bool {
        self.relation_set.contains(word)
    }

    /// Length of the relation occupying `word[end - len..end]`, if any.
    /// At most one relation can end at a given position of a word, since
    /// relations form an antichain.
    pub fn relation_ending_at(&self, word: &[ArrowId], end: usize) -> Option<usize> {
        self.relation_lengths
            .iter()
            .copied()
            .take_while(|&l| l <= end)
            .find(|&l| self.relation_set.contains(&word[end - l..end]))
    }

    pub fn is_normal_word(&self, word: &[ArrowId]) -> bool {
        (1..=word.len()).all(|end| self.relation_ending_at(word, end).is_none())
    }

    pub fn is_normal(&self, m: &Monomial) -> bool {
        self.is_normal_word(m.word())
    }

    /// Whether `uv = 0` minimally: `uv` is reducible while `uv'` is normal
    /// for every proper prefix `v'` of `v`, the empty prefix included.
    pub fn zero_minimally(&self, u: &Monomial, v: &Monomial) -> Result<bool, Error> {
        if self.quiver.target(u.last()) != self.quiver.source(v.first()) {
            return Err(Error::NotComposable(format!(
                "{} · {}",
                self.render(u.word()),
                self.render(v.word())
            )));
        }
        Ok(self.zero_minimally_words(u.word(), v.word()))
    }

    pub(crate) fn zero_minimally_words(&self, u: &[ArrowId], v: &[ArrowId]) -> bool {
        if v.is_empty() || !self.is_normal_word(u) {
            return false;
        }
        let mut w = Vec::with_capacity(u.len() + v.len());
        w.extend_from_slice(u);
        w.extend_from_slice(v);
        let total = w.len();
        (u.len() + 1..total).all(|end| self.relation_ending_at(&w, end).is_none())
            && self.relation_ending_at(&w, total).is_some()
    }

    /// Normal monomials of weights `1..=max_weight`; entry `k` holds weight
    /// `k + 1`, sorted deglex.
    pub fn normal_basis(&self, max_weight: usize) -> Vec<Vec<Monomial>> {
        let mut out: Vec<Vec<Monomial>> = Vec::with_capacity(max_weight);
        if max_weight == 0 {
            return out;
        }
        let mut layer: Vec<Vec<ArrowId>> = self
            .quiver
            .arrow_ids()
            .map(|a| vec![a])
            .collect();
        for w in 1..=max_weight {
            if w > 1 {
                let mut next = Vec::new();
                for word in &layer {
                    let t = self.quiver.target(*word.last().unwrap());
                    for &a in self.quiver.outgoing(t) {
                        let mut ext = word.clone();
                        ext.push(a);
                        if self.relation_ending_at(&ext, ext.len()).is_none() {
                            next.push(ext);
                        }
                    }
                }
                layer = next;
            }
            let mut ms: Vec<Monomial> = layer.iter().map(|w| Monomial(w.clone())).collect();
            ms.sort();
            out.push(ms);
        }
        out
    }

    /// All composable words of the given weight (normal or not), deglex.
    pub fn composable_words(&self, weight: usize) -> Vec<Vec<ArrowId>> {
        if weight == 0 {
            return Vec::new();
        }
        let mut layer: Vec<Vec<ArrowId>> = self.quiver.arrow_ids().map(|a| vec![a]).collect();
        for _ in 1..weight {
            let mut next = Vec::with_capacity(layer.len() * 2);
            for word in &layer {
                let t = self.quiver.target(*word.last().unwrap());
                for &a in self.quiver.outgoing(t) {
                    let mut ext = word.clone();
                    ext.push(a);
                    next.push(ext);
                }
            }
            layer = next;
        }
        layer.sort();
        layer
    }

    /// Largest weight of a normal monomial, or `None` when the algebra is
    /// infinite dimensional.
    pub fn top_weight(&self) -> Option<usize> {
        // A normal word longer than (number of normal windows) + window
        // length repeats a window and can be pumped indefinitely.
        let window = self.max_relation_weight().max(2) - 1;
        let windows: usize = self
            .normal_basis(window)
            .last()
            .map(|l| l.len())
            .unwrap_or(0);
        let bound = windows + window + 1;
        self.normal_basis(bound).iter().position(|l| l.is_empty())
    }

    pub fn source_of(&self, word: &[ArrowId]) -> VertexId {
        self.quiver.source(word[0])
    }

    pub fn target_of(&self, word: &[ArrowId]) -> VertexId {
        self.quiver.target(word[word.len() - 1])
    }

    pub fn render(&self, word: &[ArrowId]) -> String {
        render_word(&self.quiver, word)
    }

    /// Canonical text in the input format; parsing it gives back an equal
    /// presentation.
    pub fn to_source(&self) -> String {
        let q = &self.quiver;
        let vertices = q.vertices.join(", ");
        let arrows: Vec<String> = q
            .arrows
            .iter()
            .map(|a| format!("{}:{}->{}", a.name, q.vertices[a.source], q.vertices[a.target]))
            .collect();
        let relations: Vec<String> = self
            .relations
            .iter()
            .map(|r| {
                r.word()
                    .iter()
                    .map(|&a| q.arrow(a).name.as_str())
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        let mut s = format!("vertex {vertices}; arrows {}", arrows.join(", "));
        if !relations.is_empty() {
            s.push_str("; relations ");
            s.push_str(&relations.join(", "));
        }
        s
    }

    /// SHA-256 of [`Presentation::to_source`], hex encoded.
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.to_source().as_bytes()))
    }

    /// This presentation with one more relation.
    pub fn with_relation(&self, word: Vec<ArrowId>) -> Result<Presentation, PresentationError> {
        let mut rels = self.relations.clone();
        match Monomial::new(word) {
            Some(m) => rels.push(m),
            None => {
                return Err(PresentationError::ShortRelation {
                    relation: String::new(),
                    weight: 0,
                })
            }
        }
        Presentation::new(self.quiver.clone(), rels)
    }

    /// Parse a whitespace separated word of arrow names.
    pub fn word(&self, text: &str) -> Option<Vec<ArrowId>> {
        text.split_whitespace()
            .map(|n| self.quiver.arrow_by_name(n))
            .collect()
    }

    pub fn monomial(&self, text: &str) -> Option<Monomial> {
        self.word(text).and_then(Monomial::new)
    }
}

impl FromStr for Presentation {
    type Err = PresentationError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_presentation(s)
    }
}

/// Juxtaposed arrow names with run-length exponents, `t t t x` ↦ `t3x`.
/// Multi-letter names are separated by `*`.
pub fn render_word(quiver: &Quiver, word: &[ArrowId]) -> String {
    let sep = if quiver.arrows.iter().any(|a| a.name.chars().count() > 1) {
        "*"
    } else {
        ""
    };
    let mut parts = Vec::new();
    let mut i = 0;
    while i < word.len() {
        let mut j = i;
        while j < word.len() && word[j] == word[i] {
            j += 1;
        }
        let name = &quiver.arrow(word[i]).name;
        if j - i > 1 {
            parts.push(format!("{name}{}", j - i));
        } else {
            parts.push(name.clone());
        }
        i = j;
    }
    parts.join(sep)
}

struct Item<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> PresentationError {
    PresentationError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_alphanumeric() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
}

/// Split `text` (starting at byte column `col0`) on `sep`, trimming items.
fn split_items<'a>(text: &'a str, sep: char, line: usize, col0: usize) -> Vec<Item<'a>> {
    let mut out = Vec::new();
    let mut start = 0;
    for (i, c) in text.char_indices().chain(std::iter::once((text.len(), sep))) {
        if c == sep {
            let raw = &text[start..i];
            let lead = raw.len() - raw.trim_start().len();
            out.push(Item {
                text: raw.trim(),
                line,
                column: col0 + start + lead,
            });
            start = i + c.len_utf8();
        }
    }
    out
}

fn parse_presentation(text: &str) -> Result<Presentation, PresentationError> {
    let mut vertex_items: Option<Vec<Item>> = None;
    let mut arrow_items: Option<Vec<Item>> = None;
    let mut relation_items: Vec<Item> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = match raw.find('#') {
            Some(k) => &raw[..k],
            None => raw,
        };
        for stmt in split_items(content, ';', line, 1) {
            if stmt.text.is_empty() {
                continue;
            }
            let kw_end = stmt
                .text
                .find(char::is_whitespace)
                .unwrap_or(stmt.text.len());
            let keyword = &stmt.text[..kw_end];
            let rest = &stmt.text[kw_end..];
            let rest_col = stmt.column + kw_end;
            let items: Vec<Item> = if rest.trim().is_empty() {
                Vec::new()
            } else {
                split_items(rest, ',', line, rest_col)
            };
            for it in &items {
                if it.text.is_empty() {
                    return Err(syntax(it.line, it.column, "empty item"));
                }
            }
            match keyword {
                "vertex" | "vertices" => {
                    if vertex_items.is_some() {
                        return Err(syntax(line, stmt.column, "vertices declared twice"));
                    }
                    vertex_items = Some(items);
                }
                "arrow" | "arrows" => {
                    if arrow_items.is_some() {
                        return Err(syntax(line, stmt.column, "arrows declared twice"));
                    }
                    arrow_items = Some(items);
                }
                "relation" | "relations" => relation_items.extend(items),
                other => {
                    return Err(syntax(
                        line,
                        stmt.column,
                        format!("unknown statement `{other}`, expected vertex, arrows or relations"),
                    ))
                }
            }
        }
    }

    let mut vertices: Vec<String> = Vec::new();
    let declared_vertices = vertex_items.is_some();
    if let Some(items) = &vertex_items {
        for it in items {
            if !is_identifier(it.text) {
                return Err(syntax(it.line, it.column, format!("bad vertex name `{}`", it.text)));
            }
            if vertices.iter().any(|v| v == it.text) {
                return Err(syntax(it.line, it.column, format!("duplicate vertex `{}`", it.text)));
            }
            vertices.push(it.text.to_string());
        }
    }

    let mut arrows: Vec<Arrow> = Vec::new();
    let vertex_index = |name: &str, it: &Item, vertices: &mut Vec<String>| {
        if let Some(k) = vertices.iter().position(|v| v == name) {
            Ok(k)
        } else if declared_vertices {
            Err(syntax(it.line, it.column, format!("unknown vertex `{name}`")))
        } else if is_identifier(name) {
            vertices.push(name.to_string());
            Ok(vertices.len() - 1)
        } else {
            Err(syntax(it.line, it.column, format!("bad vertex name `{name}`")))
        }
    };
    let mut pending_plain: Vec<(String, usize, usize)> = Vec::new();
    if let Some(items) = &arrow_items {
        for it in items {
            let (name, ends) = match it.text.split_once(':') {
                Some((n, e)) => (n.trim(), Some(e.trim())),
                None => (it.text, None),
            };
            if !is_identifier(name) {
                return Err(syntax(it.line, it.column, format!("bad arrow name `{name}`")));
            }
            if arrows.iter().any(|a| a.name == name) || pending_plain.iter().any(|p| p.0 == name) {
                return Err(syntax(it.line, it.column, format!("duplicate arrow `{name}`")));
            }
            match ends {
                Some(e) => {
                    let (s, t) = e.split_once("->").ok_or_else(|| {
                        syntax(it.line, it.column, format!("expected `src->tgt` after `{name}:`"))
                    })?;
                    let source = vertex_index(s.trim(), it, &mut vertices)?;
                    let target = vertex_index(t.trim(), it, &mut vertices)?;
                    arrows.push(Arrow {
                        name: name.to_string(),
                        source,
                        target,
                    });
                }
                None => {
                    pending_plain.push((name.to_string(), it.line, it.column));
                    // placeholder; endpoints fixed below
                    arrows.push(Arrow {
                        name: name.to_string(),
                        source: usize::MAX,
                        target: usize::MAX,
                    });
                }
            }
        }
    }

    // Arrows named only in relations (no `arrows` statement).
    let mut relation_words: Vec<(Vec<String>, &Item)> = Vec::new();
    for it in &relation_items {
        let names: Vec<String> = it.text.split_whitespace().map(str::to_string).collect();
        for n in &names {
            if !is_identifier(n) {
                return Err(syntax(it.line, it.column, format!("bad arrow name `{n}`")));
            }
            if arrow_items.is_none() && !arrows.iter().any(|a| &a.name == n) {
                pending_plain.push((n.clone(), it.line, it.column));
                arrows.push(Arrow {
                    name: n.clone(),
                    source: usize::MAX,
                    target: usize::MAX,
                });
            }
        }
        relation_words.push((names, it));
    }

    if !pending_plain.is_empty() {
        if vertices.len() > 1 {
            let (n, l, c) = &pending_plain[0];
            return Err(syntax(*l, *c, format!("arrow `{n}` needs `src->tgt` in a quiver with several vertices")));
        }
        if vertices.is_empty() {
            vertices.push("1".to_string());
        }
        for a in arrows.iter_mut() {
            if a.source == usize::MAX {
                a.source = 0;
                a.target = 0;
            }
        }
    }
    if vertices.is_empty() {
        vertices.push("1".to_string());
    }

    let quiver = Quiver::new(vertices, arrows).map_err(|e| syntax(1, 1, e.to_string()))?;
    let mut relations = Vec::new();
    for (names, it) in relation_words {
        let mut word = Vec::with_capacity(names.len());
        for n in &names {
            match quiver.arrow_by_name(n) {
                Some(a) => word.push(a),
                None => return Err(syntax(it.line, it.column, format!("unknown arrow `{n}`"))),
            }
        }
        match Monomial::new(word) {
            Some(m) => relations.push(m),
            None => return Err(syntax(it.line, it.column, "empty relation")),
        }
    }
    Presentation::new(quiver, relations)
}
