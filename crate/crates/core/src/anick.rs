//! Anick chains of a monomial algebra and the Betti numbers they count.
//!
//! A chain of length `r` is a monomial with a splitting `[u₀|u₁|…|u_r]`
//! where `u₀` is an arrow and each `u_j u_{j+1} = 0` minimally. Given `u_j`
//! the next segment is the shortest normal word completing a relation, so a
//! monomial carries at most one chain structure.

use std::collections::{BTreeMap, BTreeSet};

use crate::presentation::{ArrowId, Monomial, Presentation};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Chain {
    word: Monomial,
    /// Cumulative end of each segment; `ends[0] = 1`, last is the weight.
    ends: Vec<usize>,
    /// Length of the relation ending at `ends[j]`, for `j ≥ 1`.
    relation_lengths: Vec<usize>,
}

impl Chain {
    /// The 0-chain of an arrow.
    pub fn arrow(a: ArrowId) -> Chain {
        Chain {
            word: Monomial::arrow(a),
            ends: vec![1],
            relation_lengths: Vec::new(),
        }
    }

    pub fn monomial(&self) -> &Monomial {
        &self.word
    }

    pub fn word(&self) -> &[ArrowId] {
        self.word.word()
    }

    pub fn weight(&self) -> usize {
        self.word.weight()
    }

    /// Number of relations, `r`. The chain spans Tor in homological degree `r + 1`.
    pub fn length(&self) -> usize {
        self.ends.len() - 1
    }

    pub fn segment(&self, j: usize) -> &[ArrowId] {
        let start = if j == 0 { 0 } else { self.ends[j - 1] };
        &self.word.word()[start..self.ends[j]]
    }

    pub fn splitting(&self) -> impl Iterator<Item = &[ArrowId]> + '_ {
        (0..self.ends.len()).map(move |j| self.segment(j))
    }

    /// Bar positions after each segment but the last, as a bitmask with
    /// bit `k` meaning a bar after letter `k + 1`.
    pub fn cuts(&self) -> u64 {
        self.ends[..self.ends.len() - 1]
            .iter()
            .fold(0u64, |m, &e| m | (1 << (e - 1)))
    }

    pub fn segment_ends(&self) -> &[usize] {
        &self.ends
    }

    /// Interlaced sequences `(a_1..a_r)` and `(b_1..b_r)`, 1-based: the
    /// `j`-th relation occupies letters `a_j..=b_j`.
    pub fn interlace(&self) -> (Vec<usize>, Vec<usize>) {
        let b: Vec<usize> = self.ends[1..].to_vec();
        let a = b
            .iter()
            .zip(&self.relation_lengths)
            .map(|(&e, &l)| e + 1 - l)
            .collect();
        (a, b)
    }

    pub fn render(&self, p: &Presentation) -> String {
        let parts: Vec<String> = self.splitting().map(|s| p.render(s)).collect();
        format!("[{}]", parts.join("|"))
    }

    /// The chain with its last segment removed.
    pub fn prefix(&self) -> Option<Chain> {
        if self.length() == 0 {
            return None;
        }
        let r = self.length();
        Some(Chain {
            word: Monomial::from_slice(&self.word.word()[..self.ends[r - 1]]).unwrap(),
            ends: self.ends[..r].to_vec(),
            relation_lengths: self.relation_lengths[..r - 1].to_vec(),
        })
    }
}

impl std::fmt::Debug for Chain {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let segs: Vec<Vec<u16>> = self
            .splitting()
            .map(|s| s.iter().map(|a| a.0).collect())
            .collect();
        write!(f, "Chain{:?}", segs)
    }
}

/// Outcome of trying to extend `u` by letters of `tail`, one at a time.
enum TailStep {
    /// `u·tail[..k]` is reducible minimally with the relation of the given length.
    Complete(usize, usize),
    /// A relation occurs inside the tail itself.
    NotNormal,
    /// No relation reached within the letters offered.
    Open,
}

fn scan_tail(p: &Presentation, word: &[ArrowId], seg_start: usize, seg_end: usize, limit: usize) -> TailStep {
    let span = &word[seg_start..];
    let u_len = seg_end - seg_start;
    for k in 1..=limit.min(span.len() - u_len) {
        if let Some(l) = p.relation_ending_at(span, u_len + k) {
            return if l <= k {
                TailStep::NotNormal
            } else {
                TailStep::Complete(k, l)
            };
        }
    }
    TailStep::Open
}

/// The chain structure of `word`, if it has one.
pub fn chain_of_word(word: &[ArrowId], p: &Presentation) -> Option<Chain> {
    if word.is_empty() || !p.quiver().is_composable(word) {
        return None;
    }
    let mut ends = vec![1];
    let mut rels = Vec::new();
    let mut start = 0;
    while *ends.last().unwrap() < word.len() {
        let end = *ends.last().unwrap();
        match scan_tail(p, word, start, end, word.len()) {
            TailStep::Complete(k, l) => {
                start = end;
                ends.push(end + k);
                rels.push(l);
            }
            _ => return None,
        }
    }
    Some(Chain {
        word: Monomial::from_slice(word).unwrap(),
        ends,
        relation_lengths: rels,
    })
}

/// The unique chain of length `r` on monomial `m`, if any.
pub fn chain_from_monomial(m: &Monomial, r: usize, p: &Presentation) -> Option<Chain> {
    chain_of_word(m.word(), p).filter(|c| c.length() == r)
}

/// All one-step extensions of `c` by a normal tail `v` with `u_r v = 0` minimally.
pub fn extensions(c: &Chain, p: &Presentation) -> Vec<Chain> {
    let q = p.quiver();
    let limit = p.max_relation_weight().saturating_sub(1);
    let last = c.segment(c.length()).to_vec();
    let mut out = Vec::new();
    let mut stack: Vec<Vec<ArrowId>> = vec![last.clone()];
    while let Some(w) = stack.pop() {
        let t = q.target(*w.last().unwrap());
        for &a in q.outgoing(t).iter().rev() {
            let mut ext = w.clone();
            ext.push(a);
            let k = ext.len() - last.len();
            match p.relation_ending_at(&ext, ext.len()) {
                Some(l) if l > k => {
                    let mut word = c.word().to_vec();
                    word.extend_from_slice(&ext[last.len()..]);
                    let mut ends = c.ends.clone();
                    ends.push(word.len());
                    let mut rels = c.relation_lengths.clone();
                    rels.push(l);
                    out.push(Chain {
                        word: Monomial::new(word).unwrap(),
                        ends,
                        relation_lengths: rels,
                    });
                }
                Some(_) => {}
                None => {
                    if k < limit {
                        stack.push(ext);
                    }
                }
            }
        }
    }
    out.sort_by(|x, y| x.word.cmp(&y.word));
    out
}

/// All chains of weight ≤ `max_weight`, ordered by (length, weight, deglex).
pub fn enumerate_chains(p: &Presentation, max_weight: usize) -> Vec<Chain> {
    let mut all = Vec::new();
    let mut layer: Vec<Chain> = if max_weight >= 1 {
        p.quiver().arrow_ids().map(Chain::arrow).collect()
    } else {
        Vec::new()
    };
    while !layer.is_empty() {
        let next: Vec<Chain> = layer
            .iter()
            .flat_map(|c| extensions(c, p))
            .filter(|c| c.weight() <= max_weight)
            .collect();
        all.extend(layer);
        layer = next;
    }
    all.sort_by(|x, y| {
        (x.length(), x.weight(), &x.word).cmp(&(y.length(), y.weight(), &y.word))
    });
    all
}

/// Chains grouped by `(length, weight)`.
pub fn group_chains(chains: &[Chain]) -> BTreeMap<(usize, usize), Vec<Chain>> {
    let mut out: BTreeMap<(usize, usize), Vec<Chain>> = BTreeMap::new();
    for c in chains {
        out.entry((c.length(), c.weight())).or_default().push(c.clone());
    }
    out
}

/// Dimensions indexed by (homological degree, weight); zero entries omitted.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BettiTable {
    entries: BTreeMap<(usize, usize), u64>,
}

impl BettiTable {
    pub fn get(&self, n: usize, w: usize) -> u64 {
        self.entries.get(&(n, w)).copied().unwrap_or(0)
    }

    pub fn set(&mut self, n: usize, w: usize, count: u64) {
        if count == 0 {
            self.entries.remove(&(n, w));
        } else {
            self.entries.insert((n, w), count);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), u64)> + '_ {
        self.entries.iter().map(|(k, v)| (*k, *v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

pub fn betti(p: &Presentation, max_weight: usize) -> BettiTable {
    let mut t = BettiTable::default();
    for c in enumerate_chains(p, max_weight) {
        let n = c.length() + 1;
        t.set(n, c.weight(), t.get(n, c.weight()) + 1);
    }
    t
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Overlaps {
    pub overlapping: BTreeSet<usize>,
    /// Positions with `a_{j+1} = b_j`, both overlapping and not.
    pub dual: BTreeSet<usize>,
}

/// Positions `s` with `a_{j+1} ≤ s < b_j`, plus the dual positions.
pub fn overlapping_positions(c: &Chain) -> Overlaps {
    let (a, b) = c.interlace();
    let mut out = Overlaps::default();
    for j in 0..b.len().saturating_sub(1) {
        out.overlapping.extend(a[j + 1]..b[j]);
        if a[j + 1] == b[j] {
            out.dual.insert(b[j]);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(text: &str) -> Presentation {
        Presentation::parse(text).unwrap()
    }

    #[test]
    fn t4_chains() {
        let t4 = p("relations t t t t");
        let chains = enumerate_chains(&t4, 9);
        let rendered: Vec<(usize, String)> =
            chains.iter().map(|c| (c.length(), c.render(&t4))).collect();
        assert_eq!(
            rendered,
            vec![
                (0, "[t]".to_string()),
                (1, "[t|t3]".to_string()),
                (2, "[t|t3|t]".to_string()),
                (3, "[t|t3|t|t3]".to_string()),
                (4, "[t|t3|t|t3|t]".to_string()),
            ]
        );
        let top = &chains[4];
        assert_eq!(top.interlace(), (vec![1, 2, 5, 6], vec![4, 5, 8, 9]));
    }

    #[test]
    fn chain_from_monomial_examples() {
        let t4 = p("relations t t t t");
        let t = |k| t4.monomial(&vec!["t"; k].join(" ")).unwrap();
        assert_eq!(chain_from_monomial(&t(4), 1, &t4).unwrap().render(&t4), "[t|t3]");
        assert_eq!(chain_from_monomial(&t(5), 2, &t4).unwrap().render(&t4), "[t|t3|t]");
        assert!(chain_from_monomial(&t(5), 1, &t4).is_none());
        assert!(chain_from_monomial(&t(6), 2, &t4).is_none());
    }

    #[test]
    fn two_generator_chains() {
        let xy = p("arrows x, y; relations x x, x y");
        let len2: Vec<String> = enumerate_chains(&xy, 3)
            .iter()
            .filter(|c| c.length() == 2)
            .map(|c| c.render(&xy))
            .collect();
        assert_eq!(len2, vec!["[x|x|x]", "[x|x|y]"]);
    }

    #[test]
    fn betti_examples() {
        let t4 = betti(&p("relations t t t t"), 9);
        let entries: Vec<_> = t4.iter().collect();
        assert_eq!(
            entries,
            vec![((1, 1), 1), ((2, 4), 1), ((3, 5), 1), ((4, 8), 1), ((5, 9), 1)]
        );
        let a3 = betti(&p("vertex 1, 2, 3; arrows a:1->2, b:2->3; relations a b"), 6);
        assert_eq!(a3.iter().collect::<Vec<_>>(), vec![((1, 1), 2), ((2, 2), 1)]);
        let xy = betti(&p("arrows x, y; relations x x, x y"), 6);
        assert_eq!(xy.get(1, 1), 2);
        for n in 2..=6 {
            assert_eq!(xy.get(n, n), 2);
        }
    }

    #[test]
    fn overlaps_of_t4_chain() {
        let t4 = p("relations t t t t");
        let c = chain_of_word(&t4.word("t t t t t t t t t").unwrap(), &t4).unwrap();
        let o = overlapping_positions(&c);
        assert_eq!(o.overlapping, [2, 3, 6, 7].into_iter().collect());
        assert_eq!(o.dual, [5].into_iter().collect());
        let one = chain_of_word(&t4.word("t t t t").unwrap(), &t4).unwrap();
        assert!(overlapping_positions(&one).overlapping.is_empty());
    }

    #[test]
    fn quadratic_overlaps_are_dual() {
        let x2 = p("arrows x, y; relations x x");
        let c = chain_of_word(&x2.word("x x x").unwrap(), &x2).unwrap();
        let o = overlapping_positions(&c);
        assert!(o.overlapping.is_empty());
        assert_eq!(o.dual, [2].into_iter().collect());
    }

    #[test]
    fn prefix_drops_last_segment() {
        let t4 = p("relations t t t t");
        let c = chain_of_word(&t4.word("t t t t t t t t").unwrap(), &t4).unwrap();
        let pre = c.prefix().unwrap();
        assert_eq!(pre.render(&t4), "[t|t3|t]");
        assert_eq!(Some(pre), chain_of_word(&t4.word("t t t t t").unwrap(), &t4));
    }
}
