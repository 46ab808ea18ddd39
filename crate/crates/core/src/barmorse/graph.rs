//! Explicit Morse graphs and path-weight sums, for cross-checking the
//! retract on small components.

use std::collections::HashMap;

use super::matching::{classify, Matched};
use super::term::{bar_differential, bar_terms, BarTerm};
use crate::error::{Error, Result};
use crate::presentation::Presentation;

/// The graph of the bar differential between degrees `degree + 1` and
/// `degree` at a fixed weight, with matched edges inverted.
#[derive(Clone, Debug)]
pub struct MorseGraph {
    degree: usize,
    weight: usize,
    vertices: Vec<BarTerm>,
    index: HashMap<BarTerm, usize>,
    /// Outgoing edges with their weights.
    edges: Vec<Vec<(usize, i64)>>,
    /// `(lower, upper)` vertex pairs.
    matched: Vec<(usize, usize)>,
    critical: Vec<bool>,
}

pub fn build_morse_graph(p: &Presentation, degree: usize, weight: usize) -> MorseGraph {
    let mut vertices = bar_terms(p, degree, weight);
    let lower_count = vertices.len();
    vertices.extend(bar_terms(p, degree + 1, weight));
    let index: HashMap<BarTerm, usize> = vertices
        .iter()
        .enumerate()
        .map(|(i, t)| (t.clone(), i))
        .collect();
    let mut edges = vec![Vec::new(); vertices.len()];
    let mut matched = Vec::new();
    for u in lower_count..vertices.len() {
        for (c, k) in bar_differential(&vertices[u], p).iter() {
            let ci = index[c];
            let is_match = matches!(
                classify(c, p),
                Matched::Lower { ref partner, .. } if *partner == vertices[u]
            );
            if is_match {
                // inverted edge weight −[u:c]⁻¹
                edges[ci].push((u, -k));
                matched.push((ci, u));
            } else {
                edges[u].push((ci, k));
            }
        }
    }
    let critical = vertices
        .iter()
        .map(|t| classify(t, p) == Matched::Critical)
        .collect();
    MorseGraph {
        degree,
        weight,
        vertices,
        index,
        edges,
        matched,
        critical,
    }
}

impl MorseGraph {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn weight(&self) -> usize {
        self.weight
    }

    pub fn vertices(&self) -> &[BarTerm] {
        &self.vertices
    }

    pub fn matched_edges(&self) -> impl Iterator<Item = (&BarTerm, &BarTerm)> + '_ {
        self.matched
            .iter()
            .map(|&(l, u)| (&self.vertices[l], &self.vertices[u]))
    }

    pub fn contains(&self, t: &BarTerm) -> bool {
        self.index.contains_key(t)
    }

    /// Vertices matched in no degree, the fully attached terms.
    pub fn critical(&self) -> Vec<&BarTerm> {
        self.vertices
            .iter()
            .zip(&self.critical)
            .filter(|(_, &c)| c)
            .map(|(t, _)| t)
            .collect()
    }

    /// Each vertex lies in at most one matched edge, matched weights are
    /// units, and the graph has no directed cycle.
    pub fn satisfies_morse_conditions(&self) -> bool {
        let mut seen = vec![0u8; self.vertices.len()];
        for &(l, u) in &self.matched {
            seen[l] += 1;
            seen[u] += 1;
        }
        if seen.iter().any(|&s| s > 1) {
            return false;
        }
        if self
            .edges
            .iter()
            .flatten()
            .any(|&(_, w)| w != 1 && w != -1)
        {
            return false;
        }
        self.topological_order().is_some()
    }

    fn topological_order(&self) -> Option<Vec<usize>> {
        let n = self.vertices.len();
        let mut indeg = vec![0usize; n];
        for es in &self.edges {
            for &(t, _) in es {
                indeg[t] += 1;
            }
        }
        let mut stack: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(v) = stack.pop() {
            order.push(v);
            for &(t, _) in &self.edges[v] {
                indeg[t] -= 1;
                if indeg[t] == 0 {
                    stack.push(t);
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    /// Sum over directed paths `from → to` of the product of edge weights.
    pub fn path_weight_sum(&self, from: &BarTerm, to: &BarTerm) -> Result<i64> {
        let f = *self
            .index
            .get(from)
            .ok_or_else(|| Error::NotInGraph(format!("{from:?}")))?;
        let t = *self
            .index
            .get(to)
            .ok_or_else(|| Error::NotInGraph(format!("{to:?}")))?;
        Ok(self.sums_to(t)[f])
    }

    /// `Γ(v, target)` for every vertex `v`.
    fn sums_to(&self, target: usize) -> Vec<i64> {
        let order = self
            .topological_order()
            .expect("Morse graph has no directed cycles");
        let mut sum = vec![0i64; self.vertices.len()];
        for &v in order.iter().rev() {
            let mut s = i64::from(v == target);
            for &(x, w) in &self.edges[v] {
                s += w * sum[x];
            }
            sum[v] = s;
        }
        sum
    }

    /// `Γ(from, ·)` restricted to nonzero values.
    pub fn path_sums_from(&self, from: &BarTerm) -> Result<Vec<(BarTerm, i64)>> {
        let f = *self
            .index
            .get(from)
            .ok_or_else(|| Error::NotInGraph(format!("{from:?}")))?;
        let order = self
            .topological_order()
            .expect("Morse graph has no directed cycles");
        let mut reach = vec![0i64; self.vertices.len()];
        reach[f] = 1;
        for &v in &order {
            if reach[v] == 0 {
                continue;
            }
            for &(x, w) in &self.edges[v] {
                reach[x] += w * reach[v];
            }
        }
        Ok(reach
            .into_iter()
            .enumerate()
            .filter(|&(_, c)| c != 0)
            .map(|(i, c)| (self.vertices[i].clone(), c))
            .collect())
    }
}
