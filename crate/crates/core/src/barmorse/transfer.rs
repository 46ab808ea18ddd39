//! Higher coproducts on chains by homotopy transfer along the retract.

use std::cell::RefCell;
use std::collections::HashMap;

use super::retract::{chain_of_term, inclusion_i, Retract};
use super::term::{deconcatenation, BarElement, BarTerm};
use crate::anick::Chain;
use crate::lincomb::LinComb;
use crate::presentation::Presentation;
use crate::tensor::TensorElement;

pub type BarTensor = LinComb<Vec<BarTerm>>;

fn sign(k: usize) -> i64 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Transferred coproducts, memoized per instance. Not `Sync`.
pub struct Transfer<'a> {
    retract: Retract<'a>,
    comb_memo: RefCell<HashMap<(usize, BarTerm), BarTensor>>,
    tree_memo: RefCell<HashMap<(usize, BarTerm), BarTensor>>,
}

impl<'a> Transfer<'a> {
    pub fn new(p: &'a Presentation) -> Self {
        Transfer {
            retract: Retract::new(p),
            comb_memo: RefCell::new(HashMap::new()),
            tree_memo: RefCell::new(HashMap::new()),
        }
    }

    pub fn retract(&self) -> &Retract<'a> {
        &self.retract
    }

    /// Right comb: `RC_n(z) = (−1)^n Σ (−1)^{(n−2)|a|} a ⊗ Q_{n−1}(b)` over
    /// `a ⊗ b ∈ Δ₂′z`, with `Q₁ = 1` and `Q_m = RC_m ∘ h`.
    pub fn right_comb(&self, n: usize, t: &BarTerm) -> BarTensor {
        if n == 1 {
            return BarTensor::single(vec![t.clone()], 1);
        }
        let key = (n, t.clone());
        if let Some(v) = self.comb_memo.borrow().get(&key) {
            return v.clone();
        }
        let mut out = BarTensor::zero();
        for (a, b) in deconcatenation(t) {
            let s = sign(n) * sign((n - 2) * a.degree());
            let tail = if n == 2 {
                BarTensor::single(vec![b], 1)
            } else {
                self.retract
                    .h(&b)
                    .map_linear(|x| self.right_comb(n - 1, x))
            };
            for (rest, k) in tail.iter() {
                let mut word = Vec::with_capacity(n);
                word.push(a.clone());
                word.extend(rest.iter().cloned());
                out.add_term(word, s * k);
            }
        }
        self.comb_memo.borrow_mut().insert(key, out.clone());
        out
    }

    /// Sum over all binary trees: `Δ′_n = Σ_{s+t=n} (−1)^{s(t+1)} (Q_s ⊗ Q_t) Δ₂′`
    /// with `Q₁ = 1`, `Q_m = Δ′_m ∘ h`, and Koszul sign `(−1)^{(t−1)|a|}`.
    pub fn all_trees(&self, n: usize, t: &BarTerm) -> BarTensor {
        if n == 1 {
            return BarTensor::single(vec![t.clone()], 1);
        }
        let key = (n, t.clone());
        if let Some(v) = self.tree_memo.borrow().get(&key) {
            return v.clone();
        }
        let q = |m: usize, x: &BarTerm| -> BarTensor {
            if m == 1 {
                BarTensor::single(vec![x.clone()], 1)
            } else {
                self.retract.h(x).map_linear(|y| self.all_trees(m, y))
            }
        };
        let mut out = BarTensor::zero();
        for (a, b) in deconcatenation(t) {
            for s in 1..n {
                let tt = n - s;
                let sg = sign(s * (tt + 1)) * sign((tt - 1) * a.degree());
                let left = q(s, &a);
                if left.is_zero() {
                    continue;
                }
                let right = q(tt, &b);
                for (l, kl) in left.iter() {
                    for (r, kr) in right.iter() {
                        let mut word = l.clone();
                        word.extend(r.iter().cloned());
                        out.add_term(word, sg * kl * kr);
                    }
                }
            }
        }
        self.tree_memo.borrow_mut().insert(key, out.clone());
        out
    }

    /// Apply `p` to every tensor factor and read the result as chains.
    pub fn project_tensor(&self, e: &BarTensor) -> TensorElement {
        let p = self.retract.presentation();
        let mut out = TensorElement::zero();
        for (word, k) in e.iter() {
            let mut partial: Vec<(Vec<Chain>, i64)> = vec![(Vec::new(), k)];
            for factor in word {
                let proj = self.retract.project(factor);
                let mut next = Vec::new();
                for (prefix, c) in &partial {
                    for (t, d) in proj.iter() {
                        let chain = chain_of_term(t, p).expect("projection lands on chains");
                        let mut v = prefix.clone();
                        v.push(chain);
                        next.push((v, c * d));
                    }
                }
                partial = next;
                if partial.is_empty() {
                    break;
                }
            }
            for (v, c) in partial {
                out.add_term(v, c);
            }
        }
        out
    }

    /// `Δ_n(c) = p^{⊗n} ∘ RC_n ∘ i(c)`.
    pub fn delta_n(&self, c: &Chain, n: usize) -> TensorElement {
        self.project_tensor(&self.right_comb(n, &inclusion_i(c)))
    }

    pub fn delta_n_all_trees(&self, c: &Chain, n: usize) -> TensorElement {
        self.project_tensor(&self.all_trees(n, &inclusion_i(c)))
    }

    pub fn h_element(&self, e: &BarElement) -> BarElement {
        self.retract.h_element(e)
    }
}

pub fn transfer_delta_n(c: &Chain, n: usize, p: &Presentation) -> TensorElement {
    Transfer::new(p).delta_n(c, n)
}
