//! The homotopy retract `(i, p, h)` from the bar construction onto the
//! span of chains.
//!
//! Conventions: `p∘i = 1`, `i∘p − 1 = d∘h + h∘d`, `h² = h∘i = p∘h = 0`.

use std::cell::RefCell;
use std::collections::HashMap;

use super::matching::{classify, Matched};
use super::term::{bar_differential, is_attached, BarElement, BarTerm};
use crate::anick::{chain_of_word, Chain};
use crate::presentation::{ArrowId, Presentation};

/// Memoizing evaluator of `h` and `p` through the matching, valid on every
/// bar term. Not `Sync`; build one per thread.
pub struct Retract<'a> {
    p: &'a Presentation,
    h_memo: RefCell<HashMap<BarTerm, BarElement>>,
    p_memo: RefCell<HashMap<BarTerm, BarElement>>,
}

impl<'a> Retract<'a> {
    pub fn new(p: &'a Presentation) -> Self {
        Retract {
            p,
            h_memo: RefCell::new(HashMap::new()),
            p_memo: RefCell::new(HashMap::new()),
        }
    }

    pub fn presentation(&self) -> &'a Presentation {
        self.p
    }

    /// `h(c) = w·(u + Σ_{c″≠c} [u:c″]·h(c″))` for `c` matched with `u` above,
    /// where `w = −[u:c]⁻¹`; zero otherwise.
    pub fn h(&self, t: &BarTerm) -> BarElement {
        if let Some(v) = self.h_memo.borrow().get(t) {
            return v.clone();
        }
        let value = match classify(t, self.p) {
            Matched::Lower {
                partner,
                coefficient,
            } => {
                let w = -coefficient;
                let mut acc = BarElement::single(partner.clone(), 1);
                for (c2, k) in bar_differential(&partner, self.p).iter() {
                    if c2 != t {
                        acc.add_scaled(&self.h(c2), k);
                    }
                }
                acc.scaled(w)
            }
            _ => BarElement::zero(),
        };
        self.h_memo.borrow_mut().insert(t.clone(), value.clone());
        value
    }

    /// Projection onto chains: critical terms are fixed, upper-matched terms
    /// vanish, and a lower-matched `c` maps to `Σ_{c″≠c} w[u:c″]·p(c″)`.
    pub fn project(&self, t: &BarTerm) -> BarElement {
        if let Some(v) = self.p_memo.borrow().get(t) {
            return v.clone();
        }
        let value = match classify(t, self.p) {
            Matched::Critical => BarElement::single(t.clone(), 1),
            Matched::Upper { .. } => BarElement::zero(),
            Matched::Lower {
                partner,
                coefficient,
            } => {
                let w = -coefficient;
                let mut acc = BarElement::zero();
                for (c2, k) in bar_differential(&partner, self.p).iter() {
                    if c2 != t {
                        acc.add_scaled(&self.project(c2), w * k);
                    }
                }
                acc
            }
        };
        self.p_memo.borrow_mut().insert(t.clone(), value.clone());
        value
    }

    pub fn h_element(&self, e: &BarElement) -> BarElement {
        e.map_linear(|t| self.h(t))
    }

    pub fn project_element(&self, e: &BarElement) -> BarElement {
        e.map_linear(|t| self.project(t))
    }
}

fn sign(k: usize) -> i64 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn term_of(segs: &[Vec<ArrowId>]) -> BarTerm {
    BarTerm::from_segments(segs)
}

/// Result of the closed-form rewriting of an attached term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedForm {
    pub h: BarElement,
    /// The final `Γ` when the rewriting ends at a chain.
    pub terminal: Option<BarTerm>,
}

/// Closed form of `h` and `p` on an attached term.
///
/// Repeatedly find the longest chain prefix `[u₀|…|u_{i−1}|u′]` with
/// `u_i = u′u″`, emit `(−1)^{i+1}[u₀|…|u′|u″|…]`, then merge `u″` into the next
/// segment. Stops at a chain or at zero. Returns `None` for terms that are
/// not attached.
pub fn closed_form(t: &BarTerm, p: &Presentation) -> Option<ClosedForm> {
    if !is_attached(t, p) {
        return None;
    }
    let mut h = BarElement::zero();
    let mut segs: Vec<Vec<ArrowId>> = t.segments().iter().map(|s| s.to_vec()).collect();
    loop {
        let n = segs.len();
        let (i, cut) = if segs[0].len() >= 2 {
            (0, 1)
        } else {
            let mut i = 1;
            while i < n && p.zero_minimally_words(&segs[i - 1], &segs[i]) {
                i += 1;
            }
            if i == n {
                return Some(ClosedForm {
                    h,
                    terminal: Some(term_of(&segs)),
                });
            }
            let prev = &segs[i - 1];
            let cur = &segs[i];
            let mut joined = prev.clone();
            let mut cut = None;
            for (k, &a) in cur.iter().enumerate().take(cur.len() - 1) {
                joined.push(a);
                if p.relation_ending_at(&joined, joined.len()).is_some() {
                    cut = Some(k + 1);
                    break;
                }
            }
            (i, cut?)
        };
        let (left, right) = segs[i].split_at(cut);
        let (left, right) = (left.to_vec(), right.to_vec());
        let mut split = segs[..i].to_vec();
        split.push(left.clone());
        split.push(right.clone());
        split.extend_from_slice(&segs[i + 1..]);
        h.add_term(term_of(&split), sign(i + 1));
        if i + 1 == n {
            return Some(ClosedForm { h, terminal: None });
        }
        let mut merged = right;
        merged.extend_from_slice(&segs[i + 1]);
        if !p.is_normal_word(&merged) {
            return Some(ClosedForm { h, terminal: None });
        }
        let mut next = segs[..i].to_vec();
        next.push(left);
        next.push(merged);
        next.extend_from_slice(&segs[i + 2..]);
        segs = next;
    }
}

/// `h` on any bar term: the closed form on attached terms, the matching
/// recursion elsewhere.
pub fn homotopy_h(t: &BarTerm, p: &Presentation) -> BarElement {
    match closed_form(t, p) {
        Some(cf) => cf.h,
        None => Retract::new(p).h(t),
    }
}

/// The chain `p(t)` for an attached term, or `None` when `p(t) = 0`.
pub fn projection_p(t: &BarTerm, p: &Presentation) -> Option<Chain> {
    let terminal = closed_form(t, p)?.terminal?;
    let c = chain_of_word(terminal.word(), p)?;
    (c.cuts() == terminal.cuts()).then_some(c)
}

pub fn inclusion_i(c: &Chain) -> BarTerm {
    BarTerm::new(c.monomial().clone(), c.cuts())
}

/// The chain whose bar term is `t`, if `t` is critical.
pub fn chain_of_term(t: &BarTerm, p: &Presentation) -> Option<Chain> {
    chain_of_word(t.word(), p).filter(|c| c.cuts() == t.cuts())
}
