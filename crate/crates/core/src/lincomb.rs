//! Integer linear combinations over an ordered basis.

use std::collections::btree_map::{self, BTreeMap};
use std::fmt;

/// A finite formal sum `Σ c_k · k` with nonzero integer coefficients.
///
/// Keys are kept in a `BTreeMap` so that iteration order, and therefore
/// every rendered output, is deterministic.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinComb<K: Ord> {
    terms: BTreeMap<K, i64>,
}

impl<K: Ord> Default for LinComb<K> {
    fn default() -> Self {
        LinComb { terms: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> LinComb<K> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(key: K, coeff: i64) -> Self {
        let mut out = Self::zero();
        out.add_term(key, coeff);
        out
    }

    pub fn add_term(&mut self, key: K, coeff: i64) {
        if coeff == 0 {
            return;
        }
        match self.terms.entry(key) {
            btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            btree_map::Entry::Occupied(mut o) => {
                let c = *o.get() + coeff;
                if c == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = c;
                }
            }
        }
    }

    /// `self += scale · other`
    pub fn add_scaled(&mut self, other: &LinComb<K>, scale: i64) {
        for (k, c) in &other.terms {
            self.add_term(k.clone(), c * scale);
        }
    }

    pub fn scaled(&self, scale: i64) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, scale);
        out
    }

    pub fn coefficient(&self, key: &K) -> i64 {
        self.terms.get(key).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, i64)> + '_ {
        self.terms.iter().map(|(k, c)| (k, *c))
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> + '_ {
        self.terms.keys()
    }

    /// Apply a linear map given on basis elements.
    pub fn map_linear<J: Ord + Clone, F>(&self, mut f: F) -> LinComb<J>
    where
        F: FnMut(&K) -> LinComb<J>,
    {
        let mut out = LinComb::zero();
        for (k, c) in &self.terms {
            out.add_scaled(&f(k), *c);
        }
        out
    }

    /// Largest absolute value of a coefficient, 0 for the zero element.
    pub fn max_abs_coefficient(&self) -> i64 {
        self.terms.values().map(|c| c.abs()).max().unwrap_or(0)
    }
}

impl<K: Ord + Clone> FromIterator<(K, i64)> for LinComb<K> {
    fn from_iter<I: IntoIterator<Item = (K, i64)>>(iter: I) -> Self {
        let mut out = Self::zero();
        for (k, c) in iter {
            out.add_term(k, c);
        }
        out
    }
}

impl<K: Ord + Clone> std::ops::Add for LinComb<K> {
    type Output = LinComb<K>;
    fn add(mut self, rhs: Self) -> Self {
        self.add_scaled(&rhs, 1);
        self
    }
}

impl<K: Ord + Clone> std::ops::Sub for LinComb<K> {
    type Output = LinComb<K>;
    fn sub(mut self, rhs: Self) -> Self {
        self.add_scaled(&rhs, -1);
        self
    }
}

impl<K: Ord + fmt::Debug> fmt::Debug for LinComb<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (k, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{:+}·{:?}", c, k)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cancellation_removes_terms() {
        let mut a = LinComb::single("x", 2);
        a.add_term("y", 1);
        a.add_term("x", -2);
        assert_eq!(a.len(), 1);
        assert_eq!(a.coefficient(&"x"), 0);
        assert_eq!(a.coefficient(&"y"), 1);
    }

    #[test]
    fn sub_of_equal_is_zero() {
        let a: LinComb<u32> = [(1, 3), (4, -1)].into_iter().collect();
        assert!((a.clone() - a).is_zero());
    }
}
