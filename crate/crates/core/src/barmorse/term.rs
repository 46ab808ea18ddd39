//! Bar terms `[a₁|…|aₙ]` of the normalized bar construction.

use std::fmt;

use crate::lincomb::LinComb;
use crate::presentation::{ArrowId, Monomial, Presentation};

/// A bar term stored as its underlying word and the set of bar positions.
///
/// Bit `k` of `cuts` means a bar right after letter `k + 1`. The word has
/// weight at most 64.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BarTerm {
    word: Monomial,
    cuts: u64,
}

pub type BarElement = LinComb<BarTerm>;

impl BarTerm {
    pub fn new(word: Monomial, cuts: u64) -> BarTerm {
        let w = word.weight();
        assert!(w <= 64, "bar terms support weight at most 64");
        assert!(w == 64 || cuts >> (w - 1) == 0, "bar after the last letter");
        BarTerm { word, cuts }
    }

    pub fn from_segments<S: AsRef<[ArrowId]>>(segments: &[S]) -> BarTerm {
        let mut word = Vec::new();
        let mut cuts = 0u64;
        for (i, s) in segments.iter().enumerate() {
            let s = s.as_ref();
            assert!(!s.is_empty(), "empty bar segment");
            word.extend_from_slice(s);
            if i + 1 < segments.len() {
                cuts |= 1 << (word.len() - 1);
            }
        }
        BarTerm::new(Monomial::new(word).expect("nonempty"), cuts)
    }

    /// Parse `"t t | t t t"` style input: segments separated by `|`.
    pub fn parse(p: &Presentation, text: &str) -> Option<BarTerm> {
        let segs: Option<Vec<Vec<ArrowId>>> = text.split('|').map(|s| p.word(s)).collect();
        let segs = segs?;
        if segs.iter().any(Vec::is_empty) {
            return None;
        }
        Some(BarTerm::from_segments(&segs))
    }

    pub fn word(&self) -> &[ArrowId] {
        self.word.word()
    }

    pub fn monomial(&self) -> &Monomial {
        &self.word
    }

    pub fn cuts(&self) -> u64 {
        self.cuts
    }

    pub fn weight(&self) -> usize {
        self.word.weight()
    }

    /// Number of segments.
    pub fn degree(&self) -> usize {
        self.cuts.count_ones() as usize + 1
    }

    /// `(start, end)` letter ranges of the segments.
    pub fn bounds(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.degree());
        let mut start = 0;
        let mut c = self.cuts;
        while c != 0 {
            let k = c.trailing_zeros() as usize;
            out.push((start, k + 1));
            start = k + 1;
            c &= c - 1;
        }
        out.push((start, self.weight()));
        out
    }

    pub fn segments(&self) -> Vec<&[ArrowId]> {
        self.bounds()
            .into_iter()
            .map(|(s, e)| &self.word.word()[s..e])
            .collect()
    }

    /// Remove the `i`-th bar (0-based), merging two segments.
    pub fn merge_at(&self, i: usize) -> BarTerm {
        let mut c = self.cuts;
        for _ in 0..i {
            c &= c - 1;
        }
        let bit = c & c.wrapping_neg();
        BarTerm {
            word: self.word.clone(),
            cuts: self.cuts & !bit,
        }
    }

    /// Split after the `i`-th segment (1-based count of left segments).
    pub fn split(&self, i: usize) -> (BarTerm, BarTerm) {
        let bounds = self.bounds();
        let at = bounds[i - 1].1;
        let w = self.word.word();
        let left = BarTerm {
            word: Monomial::from_slice(&w[..at]).unwrap(),
            cuts: self.cuts & ((1u64 << (at - 1)) - 1),
        };
        let right = BarTerm {
            word: Monomial::from_slice(&w[at..]).unwrap(),
            cuts: self.cuts >> at,
        };
        (left, right)
    }

    /// Every segment normal and the word composable.
    pub fn is_valid(&self, p: &Presentation) -> bool {
        p.quiver().is_composable(self.word())
            && self.segments().iter().all(|s| p.is_normal_word(s))
    }

    pub fn render(&self, p: &Presentation) -> String {
        let parts: Vec<String> = self.segments().iter().map(|s| p.render(s)).collect();
        format!("[{}]", parts.join("|"))
    }
}

impl fmt::Debug for BarTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let segs: Vec<Vec<u16>> = self
            .segments()
            .iter()
            .map(|s| s.iter().map(|a| a.0).collect())
            .collect();
        write!(f, "Bar{:?}", segs)
    }
}

pub fn render_element(e: &BarElement, p: &Presentation) -> String {
    if e.is_zero() {
        return "0".into();
    }
    e.iter()
        .map(|(t, c)| match c {
            1 => format!("+{}", t.render(p)),
            -1 => format!("-{}", t.render(p)),
            c => format!("{:+}{}", c, t.render(p)),
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// `d[a₁|…|aₙ] = Σ (−1)^{i−1} [a₁|…|a_i a_{i+1}|…|aₙ]`, reducible merges dropped.
pub fn bar_differential(t: &BarTerm, p: &Presentation) -> BarElement {
    let bounds = t.bounds();
    let w = t.word();
    let mut out = BarElement::zero();
    for i in 0..bounds.len().saturating_sub(1) {
        let (s, _) = bounds[i];
        let (_, e) = bounds[i + 1];
        if p.is_normal_word(&w[s..e]) {
            let sign = if i % 2 == 0 { 1 } else { -1 };
            out.add_term(t.merge_at(i), sign);
        }
    }
    out
}

pub fn bar_differential_element(e: &BarElement, p: &Presentation) -> BarElement {
    e.map_linear(|t| bar_differential(t, p))
}

/// `Δ₂′[a₁|…|aₙ] = Σ [a₁|…|a_i] ⊗ [a_{i+1}|…|aₙ]`.
pub fn deconcatenation(t: &BarTerm) -> Vec<(BarTerm, BarTerm)> {
    (1..t.degree()).map(|i| t.split(i)).collect()
}

/// All adjacent products vanish in the algebra.
pub fn is_attached(t: &BarTerm, p: &Presentation) -> bool {
    let bounds = t.bounds();
    let w = t.word();
    bounds
        .windows(2)
        .all(|b| !p.is_normal_word(&w[b[0].0..b[1].1]))
}

/// Valid bar terms with the given degree and weight, sorted.
pub fn bar_terms(p: &Presentation, degree: usize, weight: usize) -> Vec<BarTerm> {
    if degree == 0 || degree > weight || weight > 64 {
        return Vec::new();
    }
    let basis = p.normal_basis(weight - degree + 1);
    let mut out = Vec::new();
    let mut segs: Vec<&[ArrowId]> = Vec::new();
    fill(p, &basis, degree, weight, &mut segs, &mut out);
    out.sort();
    out
}

fn fill<'a>(
    p: &Presentation,
    basis: &'a [Vec<Monomial>],
    degree: usize,
    weight: usize,
    segs: &mut Vec<&'a [ArrowId]>,
    out: &mut Vec<BarTerm>,
) {
    if degree == 0 {
        if weight == 0 {
            out.push(BarTerm::from_segments(segs));
        }
        return;
    }
    let max = weight + 1 - degree;
    for len in 1..=max.min(basis.len()) {
        if degree == 1 && len != weight {
            continue;
        }
        for m in &basis[len - 1] {
            if let Some(prev) = segs.last() {
                let q = p.quiver();
                if q.target(*prev.last().unwrap()) != q.source(m.first()) {
                    continue;
                }
            }
            segs.push(m.word());
            fill(p, basis, degree - 1, weight - len, segs, out);
            segs.pop();
        }
    }
}

/// Cut sets of `word` whose segments are all normal, as bar terms.
pub fn bar_terms_on_word(p: &Presentation, word: &[ArrowId]) -> Vec<BarTerm> {
    let n = word.len();
    let m = Monomial::from_slice(word).expect("nonempty word");
    let mut out = Vec::new();
    // DFS over segment starts; a segment word[s..e] must be normal.
    let mut stack: Vec<(usize, u64)> = vec![(0, 0)];
    while let Some((start, cuts)) = stack.pop() {
        for end in start + 1..=n {
            if p.relation_ending_at(&word[start..end], end - start).is_some() {
                break;
            }
            if end == n {
                out.push(BarTerm::new(m.clone(), cuts));
            } else {
                stack.push((end, cuts | (1 << (end - 1))));
            }
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t4() -> Presentation {
        Presentation::parse("relations t t t t").unwrap()
    }

    #[test]
    fn differential_examples() {
        let p = t4();
        let b = |s: &str| BarTerm::parse(&p, s).unwrap();
        assert_eq!(bar_differential(&b("t|t"), &p), BarElement::single(b("t t"), 1));
        assert!(bar_differential(&b("t|t t t"), &p).is_zero());
        let d = bar_differential(&b("t|t|t t t"), &p);
        assert_eq!(d, BarElement::single(b("t t|t t t"), 1));
        assert!(bar_differential_element(&d, &p).is_zero());
    }

    #[test]
    fn deconcatenation_examples() {
        let p = t4();
        let b = |s: &str| BarTerm::parse(&p, s).unwrap();
        assert_eq!(
            deconcatenation(&b("t|t t t|t")),
            vec![(b("t"), b("t t t|t")), (b("t|t t t"), b("t"))]
        );
        assert!(deconcatenation(&b("t t t")).is_empty());
    }

    #[test]
    fn attached_examples() {
        let p = Presentation::parse("relations t t t").unwrap();
        let b = |s: &str| BarTerm::parse(&p, s).unwrap();
        assert!(is_attached(&b("t t|t"), &p));
        assert!(!is_attached(&b("t|t"), &p));
    }

    #[test]
    fn enumeration_agrees_on_words() {
        let p = Presentation::parse("arrows x, y; relations x x, x y").unwrap();
        for w in 1..=5 {
            let mut via_words: Vec<BarTerm> = p
                .composable_words(w)
                .iter()
                .flat_map(|word| bar_terms_on_word(&p, word))
                .collect();
            via_words.sort();
            let mut via_degree: Vec<BarTerm> = (1..=w).flat_map(|d| bar_terms(&p, d, w)).collect();
            via_degree.sort();
            assert_eq!(via_words, via_degree);
            assert!(via_words.iter().all(|t| t.is_valid(&p)));
        }
    }

    #[test]
    fn split_and_merge() {
        let p = t4();
        let t = BarTerm::parse(&p, "t t|t|t t t").unwrap();
        assert_eq!(t.degree(), 3);
        assert_eq!(t.merge_at(1).render(&p), "[t2|t4]");
        let (l, r) = t.split(2);
        assert_eq!(l.render(&p), "[t2|t]");
        assert_eq!(r.render(&p), "[t3]");
    }
}
