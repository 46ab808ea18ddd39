//! Hochschild cohomology through the twisted complex `hom_τ(Tor_A, A)`,
//! with the bar-cochain complex as an independent check.
//!
//! A cochain of degree `n` is supported on `Tor^n`: vertex units for `n = 0`
//! and chains of length `n − 1` otherwise. Its value on a basis element is a
//! combination of parallel paths. Blocks are indexed by the weight shift
//! `weight(value) − weight(argument)`, which every differential preserves.

use std::collections::{BTreeMap, HashMap};
use std::ops::RangeInclusive;

use rayon::prelude::*;

use crate::anick::{chain_of_word, enumerate_chains, Chain};
use crate::barmorse::term::bar_terms;
use crate::barmorse::BarTerm;
use crate::error::{Error, Result};
use crate::lincomb::LinComb;
use crate::linalg::{left_kernel, rank};
use crate::model::{coproduct, signs};
use crate::presentation::{ArrowId, Monomial, Presentation, VertexId};
use crate::report::{Counterexample, Report};

fn parity(e: usize) -> i64 {
    if e.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// A basis element of the algebra: a trivial path or a normal path.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Path {
    Trivial(VertexId),
    Word(Monomial),
}

pub type AlgebraElement = LinComb<Path>;

impl Path {
    pub fn weight(&self) -> usize {
        match self {
            Path::Trivial(_) => 0,
            Path::Word(m) => m.weight(),
        }
    }

    pub fn source(&self, p: &Presentation) -> VertexId {
        match self {
            Path::Trivial(v) => *v,
            Path::Word(m) => p.quiver().source(m.first()),
        }
    }

    pub fn target(&self, p: &Presentation) -> VertexId {
        match self {
            Path::Trivial(v) => *v,
            Path::Word(m) => p.quiver().target(m.last()),
        }
    }

    pub fn render(&self, p: &Presentation) -> String {
        match self {
            Path::Trivial(v) => format!("e{}", p.quiver().vertex_name(*v)),
            Path::Word(m) => p.render(m.word()),
        }
    }

    fn word(&self) -> &[ArrowId] {
        match self {
            Path::Trivial(_) => &[],
            Path::Word(m) => m.word(),
        }
    }
}

/// Product of basis paths in the algebra; `None` when it vanishes.
pub fn multiply(p: &Presentation, a: &Path, b: &Path) -> Option<Path> {
    if a.target(p) != b.source(p) {
        return None;
    }
    match (a, b) {
        (Path::Trivial(_), x) | (x, Path::Trivial(_)) => Some(x.clone()),
        (Path::Word(x), Path::Word(y)) => {
            let m = x.concat(y);
            p.is_normal(&m).then_some(Path::Word(m))
        }
    }
}

pub fn multiply_elements(p: &Presentation, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
    let mut out = AlgebraElement::zero();
    for (x, c) in a.iter() {
        for (y, d) in b.iter() {
            if let Some(z) = multiply(p, x, y) {
                out.add_term(z, c * d);
            }
        }
    }
    out
}

fn multiply3(p: &Presentation, pre: &[ArrowId], u: &Path, post: &[ArrowId]) -> Option<Path> {
    let mut word = pre.to_vec();
    word.extend_from_slice(u.word());
    word.extend_from_slice(post);
    if word.is_empty() {
        return Some(u.clone());
    }
    if !pre.is_empty() && p.quiver().target(pre[pre.len() - 1]) != u.source(p) {
        return None;
    }
    if !post.is_empty() && u.target(p) != p.quiver().source(post[0]) {
        return None;
    }
    let m = Monomial::new(word).unwrap();
    p.is_normal(&m).then_some(Path::Word(m))
}

/// Basis of `Tor`: vertex units in degree 0, chains in degree `length + 1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum TorBasis {
    Unit(VertexId),
    Chain(Chain),
}

impl TorBasis {
    pub fn degree(&self) -> usize {
        match self {
            TorBasis::Unit(_) => 0,
            TorBasis::Chain(c) => c.length() + 1,
        }
    }

    pub fn weight(&self) -> usize {
        match self {
            TorBasis::Unit(_) => 0,
            TorBasis::Chain(c) => c.weight(),
        }
    }

    pub fn source(&self, p: &Presentation) -> VertexId {
        match self {
            TorBasis::Unit(v) => *v,
            TorBasis::Chain(c) => p.source_of(c.word()),
        }
    }

    pub fn target(&self, p: &Presentation) -> VertexId {
        match self {
            TorBasis::Unit(v) => *v,
            TorBasis::Chain(c) => p.target_of(c.word()),
        }
    }

    pub fn render(&self, p: &Presentation) -> String {
        match self {
            TorBasis::Unit(v) => format!("e{}", p.quiver().vertex_name(*v)),
            TorBasis::Chain(c) => c.render(p),
        }
    }
}

/// A homogeneous element of `hom(Tor_A, A)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TwistedCochain {
    degree: usize,
    terms: LinComb<(TorBasis, Path)>,
}

impl TwistedCochain {
    pub fn zero(degree: usize) -> Self {
        TwistedCochain {
            degree,
            terms: LinComb::zero(),
        }
    }

    /// The cochain sending `arg` to `value` and every other basis element to 0.
    pub fn single(arg: TorBasis, value: Path) -> Self {
        TwistedCochain {
            degree: arg.degree(),
            terms: LinComb::single((arg, value), 1),
        }
    }

    pub fn from_terms(degree: usize, terms: LinComb<(TorBasis, Path)>) -> Self {
        debug_assert!(terms.keys().all(|(t, _)| t.degree() == degree));
        TwistedCochain { degree, terms }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &LinComb<(TorBasis, Path)> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    pub fn set(&mut self, arg: TorBasis, value: &AlgebraElement) {
        assert_eq!(arg.degree(), self.degree, "argument degree");
        for (u, c) in value.iter() {
            self.terms.add_term((arg.clone(), u.clone()), c);
        }
    }

    pub fn value(&self, arg: &TorBasis) -> AlgebraElement {
        self.terms
            .iter()
            .filter(|((t, _), _)| t == arg)
            .map(|((_, u), c)| (u.clone(), c))
            .collect()
    }

    pub fn render(&self, p: &Presentation) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|((t, u), c)| format!("{:+}·({} ↦ {})", c, t.render(p), u.render(p)))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Dimensions indexed by (cohomological degree, weight shift); zeros omitted.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HhTable {
    entries: BTreeMap<(usize, i64), u64>,
}

impl HhTable {
    pub fn get(&self, degree: usize, shift: i64) -> u64 {
        self.entries.get(&(degree, shift)).copied().unwrap_or(0)
    }

    fn set(&mut self, degree: usize, shift: i64, dim: u64) {
        if dim > 0 {
            self.entries.insert((degree, shift), dim);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = ((usize, i64), u64)> + '_ {
        self.entries.iter().map(|(k, v)| (*k, *v))
    }

    /// Total dimension in one degree over the computed shifts.
    pub fn degree_total(&self, degree: usize) -> u64 {
        self.iter().filter(|((d, _), _)| *d == degree).map(|(_, v)| v).sum()
    }
}

/// Normal paths between two vertices of a given weight, cached by weight.
struct Paths<'a> {
    p: &'a Presentation,
    basis: Vec<Vec<Monomial>>,
}

impl<'a> Paths<'a> {
    fn new(p: &'a Presentation, max_weight: usize) -> Self {
        Paths {
            p,
            basis: p.normal_basis(max_weight),
        }
    }

    fn between(&self, s: VertexId, t: VertexId, weight: usize) -> Vec<Path> {
        if weight == 0 {
            return if s == t { vec![Path::Trivial(s)] } else { Vec::new() };
        }
        let q = self.p.quiver();
        self.basis
            .get(weight - 1)
            .map(|layer| {
                layer
                    .iter()
                    .filter(|m| q.source(m.first()) == s && q.target(m.last()) == t)
                    .map(|m| Path::Word(m.clone()))
                    .collect()
            })
            .unwrap_or_default()
    }

    fn all_of_weight(&self, weight: usize) -> &[Monomial] {
        self.basis.get(weight - 1).map(Vec::as_slice).unwrap_or(&[])
    }
}

type Key = (TorBasis, Path);

/// One way a chain sits inside a longer one with arrows around it.
#[derive(Clone)]
struct Incidence {
    target: Chain,
    pre: Vec<ArrowId>,
    post: Vec<ArrowId>,
    sign: i64,
}

/// The twisted complex truncated to cohomological degrees `0..=max_degree + 1`.
pub struct TwistedComplex<'a> {
    p: &'a Presentation,
    max_degree: usize,
    /// chains by length
    chains: Vec<Vec<Chain>>,
    /// incidences keyed by the inner chain's word
    incidences: HashMap<Vec<ArrowId>, Vec<Incidence>>,
    chain_weight_bound: usize,
}

impl<'a> TwistedComplex<'a> {
    pub fn new(p: &'a Presentation, max_degree: usize) -> Self {
        // an r-chain has weight at most 1 + r·(longest relation − 1)
        let step = p.max_relation_weight().saturating_sub(1);
        let bound = 1 + max_degree * step;
        let mut chains = vec![Vec::new(); max_degree + 1];
        for c in enumerate_chains(p, bound) {
            if c.length() <= max_degree {
                chains[c.length()].push(c);
            }
        }
        let mut incidences: HashMap<Vec<ArrowId>, Vec<Incidence>> = HashMap::new();
        for (len, layer) in chains.iter().enumerate().skip(1) {
            for g in layer {
                let w = g.word();
                for i in 0..w.len() {
                    for j in i + 1..=w.len() {
                        let outer = i + (w.len() - j);
                        if outer == 0 {
                            continue;
                        }
                        let Some(inner) = chain_of_word(&w[i..j], p) else {
                            continue;
                        };
                        if inner.length() != len - 1 {
                            continue;
                        }
                        let n = outer + 1;
                        let r1 = if i == 0 { len - 1 } else { 0 };
                        let mut lengths = vec![0; n];
                        lengths[0] = r1;
                        incidences.entry(w[i..j].to_vec()).or_default().push(Incidence {
                            target: g.clone(),
                            pre: w[..i].to_vec(),
                            post: w[j..].to_vec(),
                            sign: parity(signs::differential_exponent(&lengths)),
                        });
                    }
                }
            }
        }
        TwistedComplex {
            p,
            max_degree,
            chains,
            incidences,
            chain_weight_bound: bound,
        }
    }

    pub fn presentation(&self) -> &'a Presentation {
        self.p
    }

    fn paths(&self, max_shift: i64) -> Paths<'a> {
        let w = (self.chain_weight_bound as i64 + max_shift.max(0)).max(1) as usize;
        Paths::new(self.p, w)
    }

    /// Basis of the block of degree `n` and weight shift `shift`.
    fn basis_with(&self, paths: &Paths, n: usize, shift: i64) -> Vec<Key> {
        let p = self.p;
        let mut out = Vec::new();
        if n == 0 {
            if shift >= 0 {
                for v in 0..p.quiver().vertex_count() {
                    for u in paths.between(v, v, shift as usize) {
                        out.push((TorBasis::Unit(v), u));
                    }
                }
            }
            return out;
        }
        let Some(layer) = self.chains.get(n - 1) else {
            return out;
        };
        for c in layer {
            let w = c.weight() as i64 + shift;
            if w < 0 {
                continue;
            }
            let (s, t) = (p.source_of(c.word()), p.target_of(c.word()));
            for u in paths.between(s, t, w as usize) {
                out.push((TorBasis::Chain(c.clone()), u));
            }
        }
        out
    }

    pub fn basis(&self, n: usize, shift: i64) -> Vec<(TorBasis, Path)> {
        self.basis_with(&self.paths(shift), n, shift)
    }

    /// Image of one basis cochain under the differential.
    fn d_basis(&self, key: &Key) -> LinComb<Key> {
        let p = self.p;
        let (arg, u) = key;
        let mut out = LinComb::zero();
        match arg {
            TorBasis::Unit(v) => {
                // df(x) = f(e_{s(x)})·x − x·f(e_{t(x)})
                for x in p.quiver().arrow_ids() {
                    let chain = TorBasis::Chain(Chain::arrow(x));
                    if p.quiver().source(x) == *v {
                        if let Some(val) = multiply3(p, &[], u, &[x]) {
                            out.add_term((chain.clone(), val), 1);
                        }
                    }
                    if p.quiver().target(x) == *v {
                        if let Some(val) = multiply3(p, &[x], u, &[]) {
                            out.add_term((chain, val), -1);
                        }
                    }
                }
            }
            TorBasis::Chain(g) => {
                if g.length() >= self.max_degree {
                    return out;
                }
                if let Some(list) = self.incidences.get(g.word()) {
                    for inc in list {
                        if let Some(val) = multiply3(p, &inc.pre, u, &inc.post) {
                            out.add_term((TorBasis::Chain(inc.target.clone()), val), inc.sign);
                        }
                    }
                }
            }
        }
        out
    }

    /// `df` for a cochain of degree ≤ `max_degree`.
    pub fn differential(&self, f: &TwistedCochain) -> TwistedCochain {
        let terms = f.terms.map_linear(|k| self.d_basis(k));
        TwistedCochain::from_terms(f.degree + 1, terms)
    }

    /// Ranks and dimensions of the blocks `(n, shift)`, `n ≤ max_degree`.
    fn block_dims(&self, shift: i64, cap: usize) -> Result<Vec<u64>> {
        let paths = self.paths(shift);
        let bases: Vec<Vec<Key>> = (0..=self.max_degree + 1)
            .map(|n| self.basis_with(&paths, n, shift))
            .collect();
        check_cap(&bases, cap, "twisted cochain block")?;
        let ranks: Vec<usize> = (0..=self.max_degree)
            .map(|n| matrix_rank(&bases[n], &bases[n + 1], |k| self.d_basis(k)))
            .collect();
        Ok((0..=self.max_degree)
            .map(|n| {
                let below = if n == 0 { 0 } else { ranks[n - 1] };
                (bases[n].len() - ranks[n] - below) as u64
            })
            .collect())
    }

    /// Basis elements in degrees `≤ max_degree − 1` whose image under `d²`
    /// is nonzero, with the first offending coefficient.
    pub fn d_squared_failures(&self, shift: i64) -> Vec<(Key, Key, i64)> {
        let paths = self.paths(shift);
        let mut out = Vec::new();
        for n in 0..self.max_degree {
            for k in self.basis_with(&paths, n, shift) {
                let dd = self.d_basis(&k).map_linear(|x| self.d_basis(x));
                let first = dd.iter().next().map(|(bad, c)| (bad.clone(), c));
                if let Some((bad, c)) = first {
                    out.push((k.clone(), bad, c));
                }
            }
        }
        out
    }
}

impl TwistedComplex<'_> {
    /// A basis of the cocycles in block `(n, shift)`, `n ≤ max_degree`.
    pub fn cocycles(&self, n: usize, shift: i64) -> Vec<TwistedCochain> {
        let paths = self.paths(shift);
        let from = self.basis_with(&paths, n, shift);
        let to = self.basis_with(&paths, n + 1, shift);
        let rows = dense_rows(&from, &to, |k| self.d_basis(k));
        left_kernel(&rows, from.len())
            .into_iter()
            .map(|v| {
                let terms = from
                    .iter()
                    .zip(&v)
                    .map(|(k, c)| (k.clone(), i64::try_from(c).expect("cocycle coefficient fits in i64")))
                    .collect();
                TwistedCochain::from_terms(n, terms)
            })
            .collect()
    }

    /// Whether a cochain of a single weight shift is a coboundary.
    pub fn is_coboundary(&self, f: &TwistedCochain) -> bool {
        let Some(((arg, u), _)) = f.terms.iter().next() else {
            return true;
        };
        if f.degree == 0 {
            return false;
        }
        let shift = u.weight() as i64 - arg.weight() as i64;
        let paths = self.paths(shift);
        let from = self.basis_with(&paths, f.degree - 1, shift);
        let to = self.basis_with(&paths, f.degree, shift);
        let mut rows = dense_rows(&from, &to, |k| self.d_basis(k));
        let before = rank(&rows);
        let index: HashMap<&Key, usize> = to.iter().enumerate().map(|(i, k)| (k, i)).collect();
        let mut row = vec![0; to.len()];
        for (k, c) in f.terms.iter() {
            match index.get(k) {
                Some(&i) => row[i] = c,
                None => return false,
            }
        }
        rows.push(row);
        rank(&rows) == before
    }
}

fn dense_rows<K: Ord + Clone + std::hash::Hash + Eq>(
    from: &[K],
    to: &[K],
    image: impl Fn(&K) -> LinComb<K>,
) -> Vec<Vec<i64>> {
    let index: HashMap<&K, usize> = to.iter().enumerate().map(|(i, k)| (k, i)).collect();
    from.iter()
        .map(|k| {
            let mut row = vec![0i64; to.len()];
            for (t, c) in image(k).iter() {
                let i = *index.get(t).expect("image stays in the block");
                row[i] = c;
            }
            row
        })
        .collect()
}

fn check_cap<K>(bases: &[Vec<K>], cap: usize, what: &str) -> Result<()> {
    match bases.iter().map(Vec::len).max() {
        Some(m) if m > cap => Err(Error::ResourceLimit {
            what: what.to_string(),
            size: m,
            cap,
        }),
        _ => Ok(()),
    }
}

fn matrix_rank<K: Ord + Clone + std::hash::Hash + Eq>(
    from: &[K],
    to: &[K],
    image: impl Fn(&K) -> LinComb<K>,
) -> usize {
    if from.is_empty() || to.is_empty() {
        return 0;
    }
    rank(&dense_rows(from, to, image))
}

/// Largest block handled when no cap is given.
pub const DEFAULT_CAP: usize = 5_000;

/// Dimensions of twisted-complex cohomology for degrees `≤ max_degree` and
/// the given weight shifts.
pub fn hh_dims(p: &Presentation, max_degree: usize, shifts: RangeInclusive<i64>) -> Result<HhTable> {
    hh_dims_capped(p, max_degree, shifts, DEFAULT_CAP)
}

pub fn hh_dims_capped(
    p: &Presentation,
    max_degree: usize,
    shifts: RangeInclusive<i64>,
    cap: usize,
) -> Result<HhTable> {
    let complex = TwistedComplex::new(p, max_degree);
    let shifts: Vec<i64> = shifts.collect();
    let per_shift: Vec<Vec<u64>> = shifts
        .iter()
        .map(|&s| complex.block_dims(s, cap))
        .collect::<Result<_>>()?;
    let mut t = HhTable::default();
    for (s, dims) in shifts.iter().zip(per_shift) {
        for (n, d) in dims.into_iter().enumerate() {
            t.set(n, *s, d);
        }
    }
    Ok(t)
}

/// Argument of a bar cochain: the empty tensor at a vertex, or a bar term.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
enum BarArg {
    Unit(VertexId),
    Bar(BarTerm),
}

type BarKey = (BarArg, Path);

/// Normalized bar cochains `hom(Ā^{⊗n}, A)` over vertices, for a finite
/// dimensional algebra.
struct ClassicalComplex<'a> {
    p: &'a Presentation,
    top: usize,
    paths: Paths<'a>,
}

impl<'a> ClassicalComplex<'a> {
    fn new(p: &'a Presentation) -> Result<Self> {
        let top = p.top_weight().ok_or(Error::InfiniteDimensional)?;
        Ok(ClassicalComplex {
            p,
            top,
            paths: Paths::new(p, top.max(1)),
        })
    }

    fn basis(&self, n: usize, shift: i64) -> Vec<BarKey> {
        let p = self.p;
        let mut out = Vec::new();
        if n == 0 {
            if shift >= 0 {
                for v in 0..p.quiver().vertex_count() {
                    for u in self.paths.between(v, v, shift as usize) {
                        out.push((BarArg::Unit(v), u));
                    }
                }
            }
            return out;
        }
        for w in n..=n * self.top {
            let vw = w as i64 + shift;
            if vw < 0 || vw as usize > self.top {
                continue;
            }
            for t in bar_terms(p, n, w) {
                let (s, e) = (p.source_of(t.word()), p.target_of(t.word()));
                for u in self.paths.between(s, e, vw as usize) {
                    out.push((BarArg::Bar(t.clone()), u));
                }
            }
        }
        out
    }

    fn all_paths(&self) -> impl Iterator<Item = &Monomial> + '_ {
        (1..=self.top).flat_map(move |w| self.paths.all_of_weight(w).iter())
    }

    /// `δf[a₁|…|a_{n+1}] = a₁f[a₂|…] + Σ (−1)^i f[…|a_i a_{i+1}|…] + (−1)^{n+1} f[…|a_n]a_{n+1}`.
    fn d_basis(&self, key: &BarKey) -> LinComb<BarKey> {
        let p = self.p;
        let q = p.quiver();
        let (arg, u) = key;
        let mut out = LinComb::zero();
        match arg {
            BarArg::Unit(v) => {
                for a in self.all_paths() {
                    let t = BarTerm::from_segments(&[a.word()]);
                    if q.target(a.last()) == *v {
                        if let Some(val) = multiply3(p, a.word(), u, &[]) {
                            out.add_term((BarArg::Bar(t.clone()), val), 1);
                        }
                    }
                    if q.source(a.first()) == *v {
                        if let Some(val) = multiply3(p, &[], u, a.word()) {
                            out.add_term((BarArg::Bar(t), val), -1);
                        }
                    }
                }
            }
            BarArg::Bar(beta) => {
                let n = beta.degree();
                let segs: Vec<Vec<ArrowId>> = beta.segments().iter().map(|s| s.to_vec()).collect();
                let s = p.source_of(beta.word());
                let e = p.target_of(beta.word());
                for a in self.all_paths() {
                    if q.target(a.last()) == s {
                        if let Some(val) = multiply3(p, a.word(), u, &[]) {
                            let mut v = vec![a.word().to_vec()];
                            v.extend(segs.iter().cloned());
                            out.add_term((BarArg::Bar(BarTerm::from_segments(&v)), val), 1);
                        }
                    }
                    if q.source(a.first()) == e {
                        if let Some(val) = multiply3(p, &[], u, a.word()) {
                            let mut v = segs.clone();
                            v.push(a.word().to_vec());
                            out.add_term((BarArg::Bar(BarTerm::from_segments(&v)), val), parity(n + 1));
                        }
                    }
                }
                // splitting segment k (1-based) gives the merge at position i = k
                let mut offset = 0;
                for (k, seg) in segs.iter().enumerate() {
                    for cut in 1..seg.len() {
                        let bit = 1u64 << (offset + cut - 1);
                        let t = BarTerm::new(beta.monomial().clone(), beta.cuts() | bit);
                        out.add_term((BarArg::Bar(t), u.clone()), parity(k + 1));
                    }
                    offset += seg.len();
                }
            }
        }
        out
    }

    fn block_dims(&self, max_degree: usize, shift: i64, cap: usize) -> Result<Vec<u64>> {
        let bases: Vec<Vec<BarKey>> = (0..=max_degree + 1).map(|n| self.basis(n, shift)).collect();
        check_cap(&bases, cap, "bar cochain block")?;
        let ranks: Vec<usize> = (0..=max_degree)
            .map(|n| matrix_rank(&bases[n], &bases[n + 1], |k| self.d_basis(k)))
            .collect();
        Ok((0..=max_degree)
            .map(|n| {
                let below = if n == 0 { 0 } else { ranks[n - 1] };
                (bases[n].len() - ranks[n] - below) as u64
            })
            .collect())
    }
}

/// Hochschild cohomology from normalized bar cochains. Only finite
/// dimensional algebras are supported.
pub fn classical_hh_dims(p: &Presentation, max_degree: usize, shifts: RangeInclusive<i64>) -> Result<HhTable> {
    classical_hh_dims_capped(p, max_degree, shifts, DEFAULT_CAP)
}

pub fn classical_hh_dims_capped(
    p: &Presentation,
    max_degree: usize,
    shifts: RangeInclusive<i64>,
    cap: usize,
) -> Result<HhTable> {
    let complex = ClassicalComplex::new(p)?;
    let shifts: Vec<i64> = shifts.collect();
    let per_shift: Vec<Vec<u64>> = shifts
        .par_iter()
        .map(|&s| complex.block_dims(max_degree, s, cap))
        .collect::<Result<_>>()?;
    let mut t = HhTable::default();
    for (s, dims) in shifts.iter().zip(per_shift) {
        for (n, d) in dims.into_iter().enumerate() {
            t.set(n, *s, d);
        }
    }
    Ok(t)
}

/// `μₙ(f₁,…,fₙ)(γ) = (−1)^{n(Σ|fᵢ|+1)} Σ ± f₁(γ₁)⋯fₙ(γₙ)` over the terms of
/// `Δₙ(γ)`, with the Koszul sign of `fⱼ` passing `γᵢ` for `i < j`. For
/// `n = 2` the counit terms `e⊗γ` and `γ⊗e` are included, so on degree 0
/// this is the product of the algebra.
pub fn higher_product(fs: &[TwistedCochain], p: &Presentation) -> TwistedCochain {
    let n = fs.len();
    assert!(n >= 2, "higher products need at least two factors");
    let total: usize = fs.iter().map(TwistedCochain::degree).sum();
    let degree = total + 2 - n;
    let prefactor = parity(n * (total + 1));
    let mut out = LinComb::zero();
    type Partial<'c> = (usize, Vec<(&'c TorBasis, &'c Path)>, i64);
    let mut stack: Vec<Partial> = vec![(0, Vec::new(), 1)];
    while let Some((i, picked, c)) = stack.pop() {
        if i == n {
            if let Some((arg, sign)) = product_argument(&picked, p) {
                let mut value = Some(picked[0].1.clone());
                for (_, u) in &picked[1..] {
                    value = value.and_then(|v| multiply(p, &v, u));
                }
                if let Some(v) = value {
                    out.add_term((arg, v), prefactor * sign * c);
                }
            }
            continue;
        }
        for ((t, u), k) in fs[i].terms.iter() {
            let mut next = picked.clone();
            next.push((t, u));
            stack.push((i + 1, next, c * k));
        }
    }
    TwistedCochain::from_terms(degree, out)
}

/// The argument `γ` and the sign with which `γ₁⊗…⊗γₙ` occurs in `Δₙ(γ)`
/// times the Koszul sign, if it occurs at all.
fn product_argument(parts: &[(&TorBasis, &Path)], p: &Presentation) -> Option<(TorBasis, i64)> {
    let n = parts.len();
    let args: Vec<&TorBasis> = parts.iter().map(|(t, _)| *t).collect();
    for w in args.windows(2) {
        if w[0].target(p) != w[1].source(p) {
            return None;
        }
    }
    let units = args.iter().filter(|t| matches!(t, TorBasis::Unit(_))).count();
    if units > 0 {
        if n != 2 {
            return None;
        }
        return Some(match (args[0], args[1]) {
            (TorBasis::Unit(_), other) | (other, TorBasis::Unit(_)) => (other.clone(), 1),
            _ => unreachable!(),
        });
    }
    let chains: Vec<&Chain> = args
        .iter()
        .map(|t| match t {
            TorBasis::Chain(c) => c,
            TorBasis::Unit(_) => unreachable!(),
        })
        .collect();
    let lengths: Vec<usize> = chains.iter().map(|c| c.length()).collect();
    let word: Vec<ArrowId> = chains.iter().flat_map(|c| c.word().iter().copied()).collect();
    let r = lengths.iter().sum::<usize>() + 1;
    let gamma = chain_of_word(&word, p).filter(|g| g.length() == r)?;
    let mut koszul = 0;
    let mut before = 0;
    for (i, l) in lengths.iter().enumerate() {
        if i > 0 {
            koszul += before * (l + 1);
        }
        before += l + 1;
    }
    let sign = parity(signs::n_exponent(&lengths) + koszul);
    Some((TorBasis::Chain(gamma), sign))
}

pub fn cup_product(f: &TwistedCochain, g: &TwistedCochain, p: &Presentation) -> TwistedCochain {
    higher_product(&[f.clone(), g.clone()], p)
}

/// The twisting cochain: `τ[x] = x` on arrows and zero on longer chains,
/// unless overridden.
#[derive(Clone, Debug, Default)]
pub struct Tau {
    overrides: BTreeMap<Chain, AlgebraElement>,
}

impl Tau {
    pub fn canonical() -> Self {
        Tau::default()
    }

    /// Replace the value on one chain.
    pub fn with_value(mut self, c: Chain, value: AlgebraElement) -> Self {
        self.overrides.insert(c, value);
        self
    }

    pub fn value(&self, c: &Chain) -> AlgebraElement {
        if let Some(v) = self.overrides.get(c) {
            return v.clone();
        }
        if c.length() == 0 {
            AlgebraElement::single(Path::Word(c.monomial().clone()), 1)
        } else {
            AlgebraElement::zero()
        }
    }
}

/// `Σₙ (−1)^{C(n,2)} μ^{(n)}(τ⊗…⊗τ)Δₙ(γ)` in the algebra.
pub fn maurer_cartan_defect(c: &Chain, tau: &Tau, p: &Presentation) -> AlgebraElement {
    let mut out = AlgebraElement::zero();
    for n in 2..=c.weight() {
        let outer = parity(n * (n - 1) / 2);
        for (parts, k) in coproduct(c, n, p).iter() {
            // τ has odd degree: passing γ_i costs (−1)^{|γ_i|} per later factor
            let koszul: usize = parts
                .iter()
                .enumerate()
                .map(|(i, g)| (n - 1 - i) * (g.length() + 1))
                .sum();
            let mut value = tau.value(&parts[0]);
            for g in &parts[1..] {
                value = multiply_elements(p, &value, &tau.value(g));
                if value.is_zero() {
                    break;
                }
            }
            out.add_scaled(&value, outer * k * parity(koszul));
        }
    }
    out
}

pub fn check_maurer_cartan(p: &Presentation, max_weight: usize) -> Report {
    check_maurer_cartan_with(p, max_weight, &Tau::canonical())
}

pub fn check_maurer_cartan_with(p: &Presentation, max_weight: usize, tau: &Tau) -> Report {
    let chains = enumerate_chains(p, max_weight);
    let counterexamples = chains
        .par_iter()
        .filter(|c| c.length() >= 1)
        .flat_map_iter(|c| {
            maurer_cartan_defect(c, tau, p)
                .iter()
                .map(|(u, k)| Counterexample {
                    chain: c.render(p),
                    arity: None,
                    term: u.render(p),
                    coefficient: k,
                })
                .collect::<Vec<_>>()
        })
        .collect();
    Report {
        suite: "maurer-cartan".into(),
        checked: chains.len(),
        counterexamples,
    }
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

    fn path(p: &Presentation, s: &str) -> Path {
        Path::Word(p.monomial(s).unwrap())
    }

    #[test]
    fn algebra_products() {
        let p = pres("arrows x, y; relations x x, x y");
        assert_eq!(multiply(&p, &path(&p, "y"), &path(&p, "x")), Some(path(&p, "y x")));
        assert_eq!(multiply(&p, &path(&p, "x"), &path(&p, "y")), None);
        assert_eq!(multiply(&p, &Path::Trivial(0), &path(&p, "x")), Some(path(&p, "x")));
    }

    #[test]
    fn differential_examples() {
        let t4 = pres("relations t t t t");
        let cx = TwistedComplex::new(&t4, 3);
        let mut f = TwistedCochain::zero(1);
        f.set(TorBasis::Chain(chain(&t4, "t")), &AlgebraElement::single(path(&t4, "t"), 1));
        let df = cx.differential(&f);
        assert!(df.value(&TorBasis::Chain(chain(&t4, "t t t t"))).is_zero());

        let unit = TwistedCochain::single(TorBasis::Unit(0), Path::Trivial(0));
        assert!(cx.differential(&unit).is_zero());

        let g = TwistedCochain::single(TorBasis::Chain(chain(&t4, "t t t t")), path(&t4, "t"));
        let dg = cx.differential(&g);
        assert!(dg.value(&TorBasis::Chain(chain(&t4, "t t t t t"))).is_zero());
    }

    #[test]
    fn twisted_d_squared_vanishes() {
        for text in ["relations t t t", "arrows x, y; relations x x, x y", "arrows x, y; relations x y x"] {
            let p = pres(text);
            let cx = TwistedComplex::new(&p, 3);
            for s in -4..=4 {
                assert!(cx.d_squared_failures(s).is_empty(), "{text} shift {s}");
            }
        }
    }

    #[test]
    fn twisted_matches_classical_on_dual_numbers() {
        let p = pres("relations t t");
        let a = hh_dims(&p, 4, -6..=6).unwrap();
        let b = classical_hh_dims(&p, 4, -6..=6).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.get(0, 0), 1);
        assert_eq!(a.get(0, 1), 1);
    }

    #[test]
    fn free_algebra_has_no_higher_cohomology() {
        let p = pres("arrows x");
        let t = hh_dims(&p, 4, -3..=3).unwrap();
        for n in 2..=4 {
            assert_eq!(t.degree_total(n), 0);
        }
        assert!(matches!(classical_hh_dims(&p, 2, 0..=0), Err(Error::InfiniteDimensional)));
    }

    #[test]
    fn cup_product_examples() {
        let p = pres("arrows x, y; relations x x, x y");
        let f = TwistedCochain::single(TorBasis::Chain(chain(&p, "x")), Path::Trivial(0));
        let ff = cup_product(&f, &f, &p);
        let support: Vec<String> = ff.terms().keys().map(|(t, _)| t.render(&p)).collect();
        assert_eq!(support, vec!["[x|x]"]);

        let a = TwistedCochain::single(TorBasis::Unit(0), path(&p, "y"));
        let b = TwistedCochain::single(TorBasis::Unit(0), path(&p, "x"));
        let ab = cup_product(&a, &b, &p);
        assert_eq!(ab.value(&TorBasis::Unit(0)), AlgebraElement::single(path(&p, "y x"), 1));
    }

    #[test]
    fn maurer_cartan_canonical_and_sabotaged() {
        let p = pres("arrows x, y; relations x x, x y");
        assert!(check_maurer_cartan(&p, 8).passed());
        let tau = Tau::canonical().with_value(chain(&p, "x x"), AlgebraElement::single(Path::Trivial(0), 1));
        assert!(!check_maurer_cartan_with(&p, 8, &tau).passed());
    }

    #[test]
    fn engines_agree_on_finite_dimensional_fixtures() {
        for text in ["relations t t t t", "vertices 1, 2, 3; arrows a: 1 -> 2, b: 2 -> 3; relations a b"] {
            let p = pres(text);
            assert_eq!(hh_dims(&p, 3, -6..=6).unwrap(), classical_hh_dims(&p, 3, -6..=6).unwrap(), "{text}");
        }
    }

    #[test]
    fn cup_product_descends_to_cohomology() {
        let p = pres("arrows x, y; relations x y x");
        let cx = TwistedComplex::new(&p, 4);
        for (m, n) in [(0, 1), (1, 0), (1, 1), (0, 2)] {
            for s in -2..=1 {
                for t in -2..=1 {
                    let zs = cx.cocycles(m, s);
                    for z in &zs {
                        for w in cx.cocycles(n, t) {
                            assert!(cx.differential(&cup_product(z, &w, &p)).is_zero());
                        }
                    }
                    if m == 0 {
                        continue;
                    }
                    for (arg, u) in cx.basis(m - 1, s) {
                        let db = cx.differential(&TwistedCochain::single(arg, u));
                        for w in cx.cocycles(n, t) {
                            assert!(cx.is_coboundary(&cup_product(&db, &w, &p)));
                            assert!(cx.is_coboundary(&cup_product(&w, &db, &p)));
                        }
                    }
                }
            }
        }
    }
}
