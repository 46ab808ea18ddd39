//! Closed formulas for the higher coproducts on chains, the differential
//! `b` of the minimal model and the products on Ext, with verification
//! sweeps against the transfer recursion.

use rayon::prelude::*;

use crate::anick::{chain_of_word, enumerate_chains, Chain};
use crate::barmorse::Transfer;
use crate::error::{Error, Result};
use crate::presentation::Presentation;
use crate::report::{Counterexample, Report};
use crate::tensor::{render_tensor, TensorElement};

/// A tuple of chains of total length `r − 1` concatenating to an `r`-chain.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Decomposition {
    pub parts: Vec<Chain>,
}

impl Decomposition {
    pub fn arity(&self) -> usize {
        self.parts.len()
    }

    pub fn lengths(&self) -> Vec<usize> {
        self.parts.iter().map(Chain::length).collect()
    }
}

fn parity(e: usize) -> i64 {
    if e.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn binom2(n: usize) -> usize {
    n * (n - 1) / 2
}

/// Parity exponents for a tuple of chain lengths `r₁,…,rₙ`.
pub mod signs {
    use super::binom2;

    /// Exponent of the coefficient in `Δₙ`.
    pub fn n_exponent(lengths: &[usize]) -> usize {
        let n = lengths.len();
        binom2(n + 1)
            + lengths[0]
            + (1..n).map(|i| (n - i) * (lengths[i - 1] + 1)).sum::<usize>()
    }

    /// `C(n+1,2) + r₁`: with the desuspension shift `Σ(n−i)(rᵢ+1)` this
    /// recovers the `Δₙ` exponent.
    pub fn b_exponent(lengths: &[usize]) -> usize {
        binom2(lengths.len() + 1) + lengths[0]
    }

    /// Exponent of the coefficient in `b`: `n + 1 + r₁`. It differs from
    /// `b_exponent` by `C(n,2) + 1`, which is what makes `b² = 0` for the
    /// Leibniz rule with `|s⁻¹γ| = r`. The two agree for `n ≡ 2, 3 mod 4`.
    pub fn differential_exponent(lengths: &[usize]) -> usize {
        lengths.len() + 1 + lengths[0]
    }

    /// Exponent of the sign of `μₙ` on Ext; `r` is the length of the product.
    pub fn m_exponent(lengths: &[usize], r: usize) -> usize {
        let n = lengths.len();
        let mut cross = 0;
        for i in 0..n {
            for j in i + 1..n {
                cross += lengths[i] * (lengths[j] + 1);
            }
        }
        binom2(n + 1) - 1 + cross + lengths[0] + r
    }

    /// Koszul sign of desuspending `γ₁⊗…⊗γₙ`.
    pub fn desuspension_exponent(lengths: &[usize]) -> usize {
        let n = lengths.len();
        (1..n).map(|i| (n - i) * (lengths[i - 1] + 1)).sum()
    }

    /// Exponent obtained by dualizing the `Δₙ` coefficient: the Koszul sign
    /// of `Dⁿ` plus the prefactor `n·Σ|φᵢ|`, with `|γᵢ| = rᵢ + 1`.
    pub fn dualized_exponent(lengths: &[usize]) -> usize {
        let n = lengths.len();
        let deg: Vec<usize> = lengths.iter().map(|r| r + 1).collect();
        let mut koszul = 0;
        let mut before = 0;
        for (i, d) in deg.iter().enumerate() {
            if i > 0 {
                koszul += before * d;
            }
            before += d;
        }
        n_exponent(lengths) + koszul + n * deg.iter().sum::<usize>()
    }
}

/// Decompositions of `c` into `n` parts, ordered by cut positions.
pub fn decompositions(c: &Chain, n: usize, p: &Presentation) -> Vec<Decomposition> {
    let mut out = Vec::new();
    if n < 2 || c.length() == 0 {
        return out;
    }
    let mut parts = Vec::with_capacity(n);
    split(c.word(), 0, n, c.length() - 1, p, &mut parts, &mut out);
    out
}

fn split(
    word: &[crate::presentation::ArrowId],
    pos: usize,
    parts_left: usize,
    len_left: usize,
    p: &Presentation,
    parts: &mut Vec<Chain>,
    out: &mut Vec<Decomposition>,
) {
    let w = word.len();
    if parts_left == 0 {
        if pos == w && len_left == 0 {
            out.push(Decomposition {
                parts: parts.clone(),
            });
        }
        return;
    }
    // each remaining part needs at least one letter
    if parts_left > w - pos {
        return;
    }
    for end in pos + 1..=w + 1 - parts_left {
        if parts_left == 1 && end != w {
            continue;
        }
        if let Some(ch) = chain_of_word(&word[pos..end], p) {
            if ch.length() <= len_left {
                let l = ch.length();
                parts.push(ch);
                split(word, end, parts_left - 1, len_left - l, p, parts, out);
                parts.pop();
            }
        }
    }
}

/// Decompositions of every arity.
pub fn all_decompositions(c: &Chain, p: &Presentation) -> Vec<Decomposition> {
    (2..=c.weight())
        .flat_map(|n| decompositions(c, n, p))
        .collect()
}

/// `Δₙ(γ) = Σ (−1)^N γ₁⊗…⊗γₙ` over decompositions.
pub fn coproduct(c: &Chain, n: usize, p: &Presentation) -> TensorElement {
    decompositions(c, n, p)
        .into_iter()
        .map(|d| {
            let s = parity(signs::n_exponent(&d.lengths()));
            (d.parts, s)
        })
        .collect()
}

/// Sign rule for `b`: the coefficient of a decomposition with the given lengths.
pub type BSign = fn(&[usize]) -> i64;

pub fn standard_b_sign(lengths: &[usize]) -> i64 {
    parity(signs::differential_exponent(lengths))
}

/// A deliberately wrong rule, flipping binary terms with a positive-length
/// first factor. Used as a negative control.
pub fn sabotaged_b_sign(lengths: &[usize]) -> i64 {
    let s = standard_b_sign(lengths);
    if lengths.len() == 2 && lengths[0] > 0 {
        -s
    } else {
        s
    }
}

/// `b(s⁻¹γ) = Σ (−1)^{n+1+r₁} s⁻¹γ₁⊗…⊗s⁻¹γₙ` over all decompositions.
pub fn differential_b(c: &Chain, p: &Presentation) -> TensorElement {
    differential_b_with(c, p, standard_b_sign)
}

pub fn differential_b_with(c: &Chain, p: &Presentation, rule: BSign) -> TensorElement {
    all_decompositions(c, p)
        .into_iter()
        .map(|d| {
            let s = rule(&d.lengths());
            (d.parts, s)
        })
        .collect()
}

/// `b` extended to tensor words as a derivation, with `|s⁻¹γ| = r`.
pub fn apply_b(e: &TensorElement, p: &Presentation, rule: BSign) -> TensorElement {
    let mut out = TensorElement::zero();
    for (word, k) in e.iter() {
        let mut shift = 0;
        for (i, x) in word.iter().enumerate() {
            let bx = differential_b_with(x, p, rule);
            let s = parity(shift);
            for (inner, c) in bx.iter() {
                let mut w = word[..i].to_vec();
                w.extend(inner.iter().cloned());
                w.extend(word[i + 1..].iter().cloned());
                out.add_term(w, k * c * s);
            }
            shift += x.length();
        }
    }
    out
}

fn residuals(c: &Chain, arity: Option<usize>, e: &TensorElement, p: &Presentation) -> Vec<Counterexample> {
    e.iter()
        .map(|(term, k)| Counterexample {
            chain: c.render(p),
            arity: arity.or(Some(term.len())),
            term: render_tensor(term, p),
            coefficient: k,
        })
        .collect()
}

/// Check `b² = 0` on every chain of weight ≤ `max_weight`.
pub fn verify_b_squared(p: &Presentation, max_weight: usize) -> Report {
    verify_b_squared_with(p, max_weight, standard_b_sign)
}

pub fn verify_b_squared_with(p: &Presentation, max_weight: usize, rule: BSign) -> Report {
    let chains = enumerate_chains(p, max_weight);
    let counterexamples: Vec<Counterexample> = chains
        .par_iter()
        .flat_map_iter(|c| {
            let bb = apply_b(&differential_b_with(c, p, rule), p, rule);
            residuals(c, None, &bb, p)
        })
        .collect();
    Report {
        suite: "b-squared".into(),
        checked: chains.len(),
        counterexamples,
    }
}

/// Compare the closed-form `Δₙ` with the transfer recursion for every chain
/// of weight ≤ `max_weight` and `2 ≤ n ≤ max_arity`.
pub fn verify_transfer_equivalence(p: &Presentation, max_weight: usize, max_arity: usize) -> Report {
    let chains = enumerate_chains(p, max_weight);
    let counterexamples: Vec<Counterexample> = chains
        .par_iter()
        .map_init(
            || Transfer::new(p),
            |tr, c| {
                (2..=max_arity)
                    .flat_map(|n| {
                        let diff = coproduct(c, n, p) - tr.delta_n(c, n);
                        residuals(c, Some(n), &diff, p)
                    })
                    .collect::<Vec<_>>()
            },
        )
        .flatten()
        .collect();
    Report {
        suite: "transfer-equivalence".into(),
        checked: chains.len() * max_arity.saturating_sub(1),
        counterexamples,
    }
}

/// `μₙ(γ₁^∨,…,γₙ^∨)`: `((−1)^M, γ)` when the concatenation is a chain of
/// length `Σrᵢ + 1`, `None` when the product vanishes.
pub fn ext_product(parts: &[Chain], p: &Presentation) -> Result<Option<(i64, Chain)>> {
    if parts.len() < 2 {
        return Err(Error::Invalid("a higher product needs at least two factors".into()));
    }
    let q = p.quiver();
    for w in parts.windows(2) {
        if q.target(*w[0].word().last().unwrap()) != q.source(w[1].word()[0]) {
            return Err(Error::NotComposable(format!(
                "{} · {}",
                w[0].render(p),
                w[1].render(p)
            )));
        }
    }
    let word: Vec<_> = parts.iter().flat_map(|c| c.word().iter().copied()).collect();
    let lengths: Vec<usize> = parts.iter().map(Chain::length).collect();
    let r = lengths.iter().sum::<usize>() + 1;
    Ok(chain_of_word(&word, p)
        .filter(|g| g.length() == r)
        .map(|g| (parity(signs::m_exponent(&lengths, r)), g)))
}

/// One nonzero higher product on Ext.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ExtEntry {
    pub parts: Vec<Chain>,
    pub sign: i64,
    pub product: Chain,
}

/// All nonzero `μₙ` with `2 ≤ n ≤ max_arity` whose product has weight ≤ `max_weight`.
pub fn ext_table(p: &Presentation, max_weight: usize, max_arity: usize) -> Vec<ExtEntry> {
    let mut out: Vec<ExtEntry> = enumerate_chains(p, max_weight)
        .iter()
        .flat_map(|c| {
            (2..=max_arity).flat_map(move |n| {
                decompositions(c, n, p).into_iter().map(move |d| {
                    let r = c.length();
                    let sign = parity(signs::m_exponent(&d.lengths(), r));
                    ExtEntry {
                        parts: d.parts,
                        sign,
                        product: c.clone(),
                    }
                })
            })
        })
        .collect();
    out.sort_by(|a, b| {
        (a.parts.len(), a.product.weight(), &a.parts).cmp(&(b.parts.len(), b.product.weight(), &b.parts))
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pres(text: &str) -> Presentation {
        Presentation::parse(text).unwrap()
    }

    fn chain(p: &Presentation, s: &str) -> Chain {
        chain_of_word(&p.word(s).unwrap(), p).unwrap()
    }

    #[test]
    fn sign_exponent_examples() {
        assert_eq!(signs::n_exponent(&[0, 0, 0, 0]), 16);
        assert_eq!(signs::n_exponent(&[0, 1]), 4);
        assert_eq!(signs::n_exponent(&[1, 0]), 6);
        assert_eq!(signs::m_exponent(&[0, 0], 1), 3);
        assert_eq!(signs::m_exponent(&[0, 0, 0], 1), 6);
        for lengths in [vec![0, 1], vec![1, 0, 2], vec![2, 2, 0, 1]] {
            assert_eq!(
                signs::n_exponent(&lengths) % 2,
                (signs::b_exponent(&lengths) + signs::desuspension_exponent(&lengths)) % 2
            );
        }
    }

    #[test]
    fn decomposition_examples() {
        let t4 = pres("relations t t t t");
        let t = chain(&t4, "t");
        let r1 = chain(&t4, "t t t t");
        let r2 = chain(&t4, "t t t t t");
        assert_eq!(
            decompositions(&r1, 4, &t4),
            vec![Decomposition { parts: vec![t.clone(); 4] }]
        );
        let d = decompositions(&r2, 2, &t4);
        assert_eq!(d.len(), 2);
        assert!(d.contains(&Decomposition { parts: vec![r1.clone(), t.clone()] }));
        assert!(d.contains(&Decomposition { parts: vec![t.clone(), r1.clone()] }));
        assert!(decompositions(&r1, 2, &t4).is_empty());
        assert!(decompositions(&r1, 3, &t4).is_empty());
    }

    #[test]
    fn coproduct_and_b_examples() {
        let t4 = pres("relations t t t t");
        let t = chain(&t4, "t");
        let r1 = chain(&t4, "t t t t");
        let r2 = chain(&t4, "t t t t t");
        let expected: TensorElement =
            [(vec![t.clone(), r1.clone()], 1), (vec![r1.clone(), t.clone()], 1)].into_iter().collect();
        assert_eq!(coproduct(&r2, 2, &t4), expected);
        assert_eq!(coproduct(&r1, 4, &t4), TensorElement::single(vec![t.clone(); 4], 1));
        // n = 4: the b sign is opposite to the Δ₄ sign here
        assert_eq!(differential_b(&r1, &t4), TensorElement::single(vec![t.clone(); 4], -1));
        let expected: TensorElement =
            [(vec![r1.clone(), t.clone()], 1), (vec![t.clone(), r1.clone()], -1)].into_iter().collect();
        assert_eq!(differential_b(&r2, &t4), expected);
        assert!(differential_b(&t, &t4).is_zero());

        let a3 = pres("vertex 1, 2, 3; arrows a:1->2, b:2->3; relations a b");
        let ab = chain(&a3, "a b");
        let expected = TensorElement::single(vec![chain(&a3, "a"), chain(&a3, "b")], -1);
        assert_eq!(differential_b(&ab, &a3), expected);
    }

    #[test]
    fn ext_examples() {
        let xy = pres("arrows x, y; relations x x, x y");
        let x = chain(&xy, "x");
        let y = chain(&xy, "y");
        let (s, g) = ext_product(&[x.clone(), x.clone()], &xy).unwrap().unwrap();
        assert_eq!((s, g.render(&xy)), (-1, "[x|x]".to_string()));
        assert_eq!(ext_product(&[y.clone(), x.clone()], &xy).unwrap(), None);

        let t3 = pres("relations t t t");
        let t = chain(&t3, "t");
        let (s, g) = ext_product(&[t.clone(), t.clone(), t.clone()], &t3).unwrap().unwrap();
        assert_eq!((s, g.render(&t3)), (1, "[t|t2]".to_string()));

        let a3 = pres("vertex 1, 2, 3; arrows a:1->2, b:2->3; relations a b");
        let (a, b) = (chain(&a3, "a"), chain(&a3, "b"));
        assert!(matches!(ext_product(&[b, a], &a3), Err(Error::NotComposable(_))));
    }

    #[test]
    fn b_squared_and_sabotage() {
        let t4 = pres("relations t t t t");
        assert!(verify_b_squared(&t4, 12).passed());
        let bad = verify_b_squared_with(&t4, 12, sabotaged_b_sign);
        assert!(!bad.passed());
        let first = &bad.counterexamples[0];
        assert_eq!(first.chain, "[t|t3|t]");
        assert_eq!(first.term, "[t]⊗[t]⊗[t]⊗[t]⊗[t]");
        assert_eq!(first.coefficient.abs(), 2);
    }
}
