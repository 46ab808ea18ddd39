//! Verification sweeps that cross-check independent computations.

use rayon::prelude::*;

use crate::anick::{betti, enumerate_chains};
use crate::barmorse::homology::homology_dims_capped;
use crate::barmorse::term::{bar_differential, bar_differential_element, bar_terms};
use crate::barmorse::{build_morse_graph, homotopy_h, inclusion_i, BarElement, BarTerm, Retract};
use crate::error::Result;
use crate::presentation::Presentation;
use crate::report::{Counterexample, Report};

/// Chain counts against bar homology, entry by entry.
pub fn betti_vs_homology(p: &Presentation, max_weight: usize, cap: usize) -> Result<Report> {
    let chains = betti(p, max_weight);
    let homology = homology_dims_capped(p, max_weight, cap)?;
    let mut report = Report::new("betti-vs-homology");
    for w in 1..=max_weight {
        for n in 1..=w {
            report.checked += 1;
            let (a, b) = (chains.get(n, w), homology.get(n, w));
            if a != b {
                report.counterexamples.push(Counterexample {
                    chain: format!("degree {n} weight {w}"),
                    arity: None,
                    term: format!("chains {a}, homology {b}"),
                    coefficient: a as i64 - b as i64,
                });
            }
        }
    }
    Ok(report)
}

fn residuals(t: &BarTerm, identity: &str, e: &BarElement, p: &Presentation) -> Vec<Counterexample> {
    e.iter()
        .map(|(s, c)| Counterexample {
            chain: t.render(p),
            arity: None,
            term: format!("{identity}: {}", s.render(p)),
            coefficient: c,
        })
        .collect()
}

fn all_terms(p: &Presentation, max_weight: usize) -> Vec<BarTerm> {
    (1..=max_weight)
        .flat_map(|w| (1..=w).flat_map(move |n| bar_terms(p, n, w)))
        .collect()
}

/// `p∘i = id`, `i∘p − id = dh + hd`, `h² = 0`, `h∘i = 0` and `p∘h = 0` on
/// every bar term of weight ≤ `max_weight`.
pub fn retract_identities(p: &Presentation, max_weight: usize) -> Report {
    let terms = all_terms(p, max_weight);
    let counterexamples: Vec<Counterexample> = terms
        .par_chunks(64)
        .flat_map_iter(|chunk| {
            let r = Retract::new(p);
            let mut out = Vec::new();
            for t in chunk {
                let h = r.h(t);
                let dh = bar_differential_element(&h, p);
                let hd = r.h_element(&bar_differential(t, p));
                let ip = r.project(t) - BarElement::single(t.clone(), 1);
                out.extend(residuals(t, "ip-1-dh-hd", &(ip - dh - hd), p));
                out.extend(residuals(t, "hh", &r.h_element(&h), p));
                out.extend(residuals(t, "ph", &r.project_element(&h), p));
            }
            out
        })
        .collect();
    let chains = enumerate_chains(p, max_weight);
    let r = Retract::new(p);
    let mut report = Report {
        suite: "retract-identities".into(),
        checked: terms.len() + chains.len(),
        counterexamples,
    };
    for c in &chains {
        let t = inclusion_i(c);
        let pi = r.project(&t) - BarElement::single(t.clone(), 1);
        report.counterexamples.extend(residuals(&t, "pi-1", &pi, p));
        report.counterexamples.extend(residuals(&t, "hi", &r.h(&t), p));
    }
    report
}

/// `h` and `p` against path-weight sums over explicitly built Morse graphs,
/// one graph per (degree, weight) with weight ≤ `max_weight`.
pub fn morse_oracle(p: &Presentation, max_weight: usize) -> Result<Report> {
    let blocks: Vec<(usize, usize)> = (1..=max_weight).flat_map(|w| (1..=w).map(move |k| (k, w))).collect();
    let per_block: Vec<(usize, Vec<Counterexample>)> = blocks
        .par_iter()
        .map(|&(k, w)| -> Result<(usize, Vec<Counterexample>)> {
            let g = build_morse_graph(p, k, w);
            let r = Retract::new(p);
            let critical: std::collections::HashSet<&BarTerm> = g.critical().into_iter().collect();
            let mut out = Vec::new();
            let lower: Vec<&BarTerm> = g.vertices().iter().filter(|t| t.degree() == k).collect();
            for t in &lower {
                let sums = g.path_sums_from(t)?;
                let h_graph: BarElement = sums
                    .iter()
                    .filter(|(v, _)| v.degree() == k + 1)
                    .map(|(v, c)| (v.clone(), *c))
                    .collect();
                let p_graph: BarElement = sums
                    .iter()
                    .filter(|(v, _)| v.degree() == k && critical.contains(v))
                    .map(|(v, c)| (v.clone(), *c))
                    .collect();
                out.extend(residuals(t, "h-graph", &(homotopy_h(t, p) - h_graph), p));
                out.extend(residuals(t, "p-graph", &(r.project(t) - p_graph), p));
            }
            Ok((lower.len(), out))
        })
        .collect::<Result<_>>()?;
    let mut report = Report::new("morse-oracle");
    for (n, cx) in per_block {
        report.checked += n;
        report.counterexamples.extend(cx);
    }
    Ok(report)
}
