//! Homology of the bar construction by exact linear algebra.
//!
//! The bar differential only removes bars, so it preserves the underlying
//! word. Each composable word spans a finite subcomplex, and the homology
//! is the sum over words.

use std::collections::HashMap;

use rayon::prelude::*;

use super::term::{bar_differential, bar_terms_on_word, BarTerm};
use crate::anick::BettiTable;
use crate::error::{Error, Result};
use crate::linalg::rank;
use crate::presentation::{ArrowId, Presentation};

/// Largest subcomplex block handled when no cap is given.
pub const DEFAULT_CAP: usize = 20_000;

/// `dim H_n(BA)_w` for all `w ≤ max_weight`.
pub fn homology_dims(p: &Presentation, max_weight: usize) -> Result<BettiTable> {
    homology_dims_capped(p, max_weight, DEFAULT_CAP)
}

pub fn homology_dims_capped(p: &Presentation, max_weight: usize, cap: usize) -> Result<BettiTable> {
    if max_weight > 64 {
        return Err(Error::ResourceLimit {
            what: "weight".into(),
            size: max_weight,
            cap: 64,
        });
    }
    let mut table = BettiTable::default();
    for w in 1..=max_weight {
        let words = p.composable_words(w);
        let per_word: Vec<Vec<u64>> = words
            .par_iter()
            .map(|word| word_homology(p, word, cap))
            .collect::<Result<_>>()?;
        for n in 1..=w {
            let total: u64 = per_word.iter().map(|h| h[n]).sum();
            table.set(n, w, total);
        }
    }
    Ok(table)
}

/// Homology of the subcomplex on one word; entry `n` is `dim H_n`.
fn word_homology(p: &Presentation, word: &[ArrowId], cap: usize) -> Result<Vec<u64>> {
    let w = word.len();
    let cells = bar_terms_on_word(p, word);
    let mut by_degree: Vec<Vec<BarTerm>> = vec![Vec::new(); w + 2];
    for c in cells {
        by_degree[c.degree()].push(c);
    }
    if let Some(big) = by_degree.iter().map(Vec::len).max().filter(|&m| m > cap) {
        return Err(Error::ResourceLimit {
            what: format!("bar complex block on {}", p.render(word)),
            size: big,
            cap,
        });
    }
    // ranks[n] = rank of d : C_n → C_{n−1}
    let mut ranks = vec![0usize; w + 2];
    for n in 2..=w {
        if by_degree[n].is_empty() || by_degree[n - 1].is_empty() {
            continue;
        }
        let index: HashMap<&BarTerm, usize> = by_degree[n - 1]
            .iter()
            .enumerate()
            .map(|(i, t)| (t, i))
            .collect();
        let matrix: Vec<Vec<i64>> = by_degree[n]
            .iter()
            .map(|t| {
                let mut row = vec![0i64; index.len()];
                for (c, k) in bar_differential(t, p).iter() {
                    row[index[c]] = k;
                }
                row
            })
            .collect();
        ranks[n] = rank(&matrix);
    }
    Ok((0..=w)
        .map(|n| {
            if n == 0 {
                0
            } else {
                (by_degree[n].len() - ranks[n] - ranks[n + 1]) as u64
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_algebra_has_only_generators() {
        let p = Presentation::parse("arrows x, y").unwrap();
        let h = homology_dims(&p, 5).unwrap();
        assert_eq!(h.iter().collect::<Vec<_>>(), vec![((1, 1), 2)]);
    }

    #[test]
    fn truncated_polynomial() {
        let p = Presentation::parse("relations t t t t").unwrap();
        let h = homology_dims(&p, 9).unwrap();
        assert_eq!(
            h.iter().collect::<Vec<_>>(),
            vec![((1, 1), 1), ((2, 4), 1), ((3, 5), 1), ((4, 8), 1), ((5, 9), 1)]
        );
    }

    #[test]
    fn cap_is_enforced() {
        let p = Presentation::parse("arrows x, y").unwrap();
        assert!(matches!(
            homology_dims_capped(&p, 6, 3),
            Err(Error::ResourceLimit { .. })
        ));
    }
}
