//! The Morse matching on the bar construction of a monomial algebra.

use super::term::BarTerm;
use crate::presentation::Presentation;

/// Role of a bar term in the matching.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Matched {
    /// Unmatched: the term is the bar term of a chain.
    Critical,
    /// Matched with a partner one degree higher; `coefficient` is `[partner : self]`.
    Lower { partner: BarTerm, coefficient: i64 },
    /// Matched with a partner one degree lower; `coefficient` is `[self : partner]`.
    Upper { partner: BarTerm, coefficient: i64 },
}

fn sign(k: usize) -> i64 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Classify `t`, which must be a valid bar term.
///
/// Scanning from the left: a first segment of weight ≥ 2 is split off its
/// first arrow; otherwise at the first pair that is not `= 0` minimally,
/// a normal product is merged and a reducible one is split at the shortest
/// reducible prefix.
pub fn classify(t: &BarTerm, p: &Presentation) -> Matched {
    let bounds = t.bounds();
    let w = t.word();
    let (s0, e0) = bounds[0];
    if e0 - s0 >= 2 {
        let partner = BarTerm::new(t.monomial().clone(), t.cuts() | 1);
        return Matched::Lower {
            partner,
            coefficient: 1,
        };
    }
    for j in 1..bounds.len() {
        let (a, b) = bounds[j - 1];
        let (c, e) = bounds[j];
        if p.zero_minimally_words(&w[a..b], &w[c..e]) {
            continue;
        }
        if p.is_normal_word(&w[a..e]) {
            return Matched::Upper {
                partner: t.merge_at(j - 1),
                coefficient: sign(j - 1),
            };
        }
        // u_{j-1} · v₁ reducible for a proper prefix v₁ of u_j
        let k = (1..e - c)
            .find(|&k| p.relation_ending_at(&w[a..c + k], c + k - a).is_some())
            .expect("reducible product that is not minimal has a shorter reducible prefix");
        let partner = BarTerm::new(t.monomial().clone(), t.cuts() | (1 << (c + k - 1)));
        return Matched::Lower {
            partner,
            coefficient: sign(j),
        };
    }
    Matched::Critical
}

pub fn is_critical(t: &BarTerm, p: &Presentation) -> bool {
    matches!(classify(t, p), Matched::Critical)
}
