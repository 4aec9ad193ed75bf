use alloc::collections::VecDeque;
use alloc::vec::Vec;
use core::fmt;

use crate::alphabet::{IndependencePair, Letter};
use crate::clique::{Clique, CliqueSet};
use crate::error::{Error, Result};

/// Default bound on the length accepted by [`IndependencePair::enumerate_traces`].
pub const DEFAULT_TRACE_LENGTH_CAP: usize = 8;

/// An element of the trace monoid, stored as its Cartier-Foata normal form.
///
/// The cliques are non-empty and consecutive ones are Cartier-Foata
/// admissible. Since the normal form is unique, equality of traces is
/// equality of the clique sequences. The empty sequence is the unit trace.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Trace {
    cliques: Vec<Clique>,
    length: usize,
}

impl Trace {
    pub fn unit() -> Self {
        Self::default()
    }

    /// Wraps a sequence already known to be a Cartier-Foata normal form.
    pub(crate) fn from_normal_form(cliques: Vec<Clique>) -> Self {
        let length = cliques.iter().map(Clique::len).sum();
        Self { cliques, length }
    }

    pub fn cliques(&self) -> &[Clique] {
        &self.cliques
    }

    pub fn is_unit(&self) -> bool {
        self.cliques.is_empty()
    }

    /// Number of letters.
    pub fn len(&self) -> usize {
        self.length
    }

    pub fn is_empty(&self) -> bool {
        self.length == 0
    }

    /// Number of Cartier-Foata cliques, the parallel execution time.
    pub fn height(&self) -> usize {
        self.cliques.len()
    }

    /// A representative word: the cliques flattened in order, letters of a
    /// clique in declaration order.
    pub fn word(&self) -> Vec<Letter> {
        self.cliques.iter().flat_map(Clique::iter).collect()
    }

    /// The product of the first `p` cliques; the whole trace when `p` reaches
    /// the height.
    pub fn cut(&self, p: usize) -> Trace {
        Self::from_normal_form(self.cliques[..p.min(self.height())].to_vec())
    }

    /// Splits `u = v·c` with `c` the last Cartier-Foata clique.
    pub fn split_last(&self) -> Option<(Trace, &Clique)> {
        let (last, rest) = self.cliques.split_last()?;
        Some((Self::from_normal_form(rest.to_vec()), last))
    }
}

/// Incremental Cartier-Foata layering: every pushed letter falls onto the
/// lowest layer above all letters it depends on.
struct Heap<'a> {
    pair: &'a IndependencePair,
    layers: Vec<Clique>,
    // 1-based index of the highest layer holding each letter, 0 if absent.
    top: Vec<usize>,
}

impl<'a> Heap<'a> {
    fn new(pair: &'a IndependencePair) -> Self {
        Self {
            pair,
            layers: Vec::new(),
            top: alloc::vec![0; pair.len()],
        }
    }

    fn from_trace(pair: &'a IndependencePair, u: &Trace) -> Self {
        let mut heap = Self::new(pair);
        for (i, c) in u.cliques.iter().enumerate() {
            for l in c.iter() {
                heap.top[l.index()] = i + 1;
            }
        }
        heap.layers = u.cliques.clone();
        heap
    }

    fn push(&mut self, l: Letter) {
        let level = self
            .pair
            .dependence_row(l)
            .iter()
            .map(|b| self.top[b.index()])
            .max()
            .unwrap_or(0);
        if level == self.layers.len() {
            self.layers.push(Clique::empty());
        }
        self.layers[level].insert(l);
        self.top[l.index()] = level + 1;
    }

    fn finish(self) -> Trace {
        Trace::from_normal_form(self.layers)
    }
}

impl IndependencePair {
    /// Cartier-Foata normal form of the trace of `word`.
    pub fn normal_form(&self, word: &[Letter]) -> Trace {
        let mut heap = Heap::new(self);
        for &l in word {
            heap.push(l);
        }
        heap.finish()
    }

    /// Normal form of a raw word such as `"acba"`; see [`IndependencePair::parse_word`].
    pub fn trace(&self, word: &str) -> Result<Trace> {
        Ok(self.normal_form(&self.parse_word(word)?))
    }

    /// Checks a clique sequence and wraps it as a trace.
    pub fn trace_from_cliques(&self, cliques: Vec<Clique>) -> Result<Trace> {
        for (i, c) in cliques.iter().enumerate() {
            if c.is_empty() {
                return Err(Error::EmptyClique(i));
            }
            if !self.is_clique(c) {
                return Err(Error::NotAClique(alloc::format!("{}", self.display_clique(c))));
            }
            if i > 0 && !self.cf_admissible(&cliques[i - 1], c) {
                return Err(Error::NotAdmissible { index: i - 1, next: i });
            }
        }
        Ok(Trace::from_normal_form(cliques))
    }

    pub fn concat(&self, u: &Trace, v: &Trace) -> Trace {
        let mut heap = Heap::from_trace(self, u);
        for l in v.cliques.iter().flat_map(Clique::iter) {
            heap.push(l);
        }
        heap.finish()
    }

    /// Prefix order `u ≤ v`, decided clique by clique: `v`'s first `τ(u)`
    /// cliques must be `c_i ∪ γ_i` with each `γ_i` parallel to `c_i, …, c_n`.
    pub fn leq(&self, u: &Trace, v: &Trace) -> bool {
        self.prefix_gaps(u, v).is_some()
    }

    /// The cliques `γ_i = d_i ∖ c_i` witnessing `u ≤ v`, if any.
    fn prefix_gaps(&self, u: &Trace, v: &Trace) -> Option<Vec<Clique>> {
        let n = u.height();
        if n > v.height() {
            return None;
        }
        // suffix_union[i] = c_i ∪ … ∪ c_n
        let mut suffix_union = alloc::vec![Clique::empty(); n + 1];
        for i in (0..n).rev() {
            suffix_union[i] = suffix_union[i + 1].union(&u.cliques[i]);
        }
        let mut gaps = Vec::with_capacity(n);
        for ((c, d), suffix) in u.cliques.iter().zip(&v.cliques).zip(&suffix_union) {
            if !c.is_subset(d) {
                return None;
            }
            let gamma = d.difference(c);
            if !self.parallel(&gamma, suffix) {
                return None;
            }
            gaps.push(gamma);
        }
        Some(gaps)
    }

    /// The unique `w` with `v = u·w`.
    pub fn residual(&self, u: &Trace, v: &Trace) -> Result<Trace> {
        let gaps = self.prefix_gaps(u, v).ok_or(Error::NotAPrefix)?;
        let word: Vec<Letter> = gaps
            .iter()
            .chain(&v.cliques[u.height()..])
            .flat_map(Clique::iter)
            .collect();
        Ok(self.normal_form(&word))
    }

    /// The trace of the reversed word.
    pub fn mirror(&self, u: &Trace) -> Trace {
        let mut word = u.word();
        word.reverse();
        self.normal_form(&word)
    }

    /// A trace `w` such that `u·w` and `v·w` have no common extension whenever
    /// `u ≠ v` have equal length.
    ///
    /// Built as `α₁ ⋯ α_q ⋯ α₁` from a walk in the dependence graph that
    /// visits every letter: starting at the first declared letter, the walk
    /// repeatedly moves along a shortest path (breadth-first, neighbours in
    /// declaration order) to the nearest unvisited letter.
    pub fn hat_trace(&self) -> Result<Trace> {
        if !self.is_irreducible() {
            return Err(Error::Reducible);
        }
        let n = self.len();
        let mut visited = alloc::vec![false; n];
        let mut walk = alloc::vec![Letter::new(0)];
        visited[0] = true;
        let mut remaining = n - 1;
        while remaining > 0 {
            let from = *walk.last().unwrap();
            let mut parent: Vec<Option<Letter>> = alloc::vec![None; n];
            let mut seen = alloc::vec![false; n];
            seen[from.index()] = true;
            let mut queue = VecDeque::from([from]);
            let mut target = None;
            'bfs: while let Some(a) = queue.pop_front() {
                for b in self.dependence_row(a).iter() {
                    if seen[b.index()] {
                        continue;
                    }
                    seen[b.index()] = true;
                    parent[b.index()] = Some(a);
                    if !visited[b.index()] {
                        target = Some(b);
                        break 'bfs;
                    }
                    queue.push_back(b);
                }
            }
            let target = target.expect("irreducible pair has a connected dependence graph");
            let mut path = alloc::vec![target];
            while let Some(p) = parent[path.last().unwrap().index()] {
                if p == from {
                    break;
                }
                path.push(p);
            }
            for l in path.into_iter().rev() {
                if !visited[l.index()] {
                    visited[l.index()] = true;
                    remaining -= 1;
                }
                walk.push(l);
            }
        }
        let back: Vec<Letter> = walk.iter().rev().skip(1).copied().collect();
        walk.extend(back);
        Ok(self.normal_form(&walk))
    }

    /// All `u'` with `τ(u') = τ(u)` and `u ≤ u'`.
    ///
    /// Such `u'` have cliques `c_i ∪ γ_i` with `γ_i ∥ c_i, …, c_n`; the
    /// candidates are enumerated layer by layer, keeping only admissible
    /// sequences.
    pub fn dominating_set(&self, cliques: &CliqueSet, u: &Trace) -> Vec<Trace> {
        let n = u.height();
        let mut allowed = alloc::vec![Clique::empty(); n];
        let mut suffix = Clique::empty();
        for i in (0..n).rev() {
            suffix = suffix.union(&u.cliques[i]);
            allowed[i] = self.link_letters(&suffix);
        }
        let choices: Vec<Vec<Clique>> = (0..n)
            .map(|i| {
                cliques
                    .iter()
                    .filter(|g| g.is_subset(&allowed[i]))
                    .map(|g| g.union(&u.cliques[i]))
                    .collect()
            })
            .collect();
        let mut out = Vec::new();
        let mut current = Vec::with_capacity(n);
        self.extend_dominating(&choices, &mut current, &mut out);
        out
    }

    fn extend_dominating(&self, choices: &[Vec<Clique>], current: &mut Vec<Clique>, out: &mut Vec<Trace>) {
        let i = current.len();
        if i == choices.len() {
            out.push(Trace::from_normal_form(current.clone()));
            return;
        }
        for d in &choices[i] {
            if i == 0 || self.cf_admissible(&current[i - 1], d) {
                current.push(d.clone());
                self.extend_dominating(choices, current, out);
                current.pop();
            }
        }
    }

    /// All traces of length `k`, by depth-first search over admissible clique
    /// sequences. Intended as a brute-force oracle; `k` is capped at
    /// [`DEFAULT_TRACE_LENGTH_CAP`].
    pub fn enumerate_traces(&self, cliques: &CliqueSet, k: usize) -> Result<Vec<Trace>> {
        self.enumerate_traces_with_cap(cliques, k, DEFAULT_TRACE_LENGTH_CAP)
    }

    pub fn enumerate_traces_with_cap(&self, cliques: &CliqueSet, k: usize, cap: usize) -> Result<Vec<Trace>> {
        if k > cap {
            return Err(Error::CapExceeded { requested: k, cap });
        }
        let mut out = Vec::new();
        let mut current = Vec::new();
        self.extend_traces(cliques, k, &mut current, &mut out);
        Ok(out)
    }

    fn extend_traces(&self, cliques: &CliqueSet, remaining: usize, current: &mut Vec<Clique>, out: &mut Vec<Trace>) {
        if remaining == 0 {
            out.push(Trace::from_normal_form(current.clone()));
            return;
        }
        for c in cliques.non_empty() {
            if c.len() > remaining {
                break;
            }
            if current.last().is_none_or(|prev| self.cf_admissible(prev, c)) {
                current.push(c.clone());
                self.extend_traces(cliques, remaining - c.len(), current, out);
                current.pop();
            }
        }
    }

    /// Canonical text: cliques joined by `|`, letters by `.`, `ε` for the unit.
    pub fn display_trace<'a>(&'a self, u: &'a Trace) -> TraceDisplay<'a> {
        TraceDisplay { pair: self, trace: u }
    }
}

#[derive(Debug)]
pub struct TraceDisplay<'a> {
    pair: &'a IndependencePair,
    trace: &'a Trace,
}

impl fmt::Display for TraceDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.trace.is_unit() {
            return f.write_str("ε");
        }
        for (i, c) in self.trace.cliques.iter().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            write!(f, "{}", self.pair.display_clique(c))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::format;
    use alloc::string::String;
    use alloc::vec;

    fn m1() -> IndependencePair {
        IndependencePair::from_names(&["a", "b", "c"], &[("a", "b")]).unwrap()
    }

    fn show(p: &IndependencePair, u: &Trace) -> String {
        format!("{}", p.display_trace(u))
    }

    #[test]
    fn normal_form_of_fig1_heap() {
        let m = m1();
        let u = m.trace("acba").unwrap();
        assert_eq!(show(&m, &u), "a|c|a.b");
        assert_eq!((u.height(), u.len()), (3, 4));
        assert_eq!(m.trace("acab").unwrap(), u);
        assert!(m.trace("").unwrap().is_unit());
        assert_eq!(show(&m, &Trace::unit()), "ε");
    }

    #[test]
    fn concat_examples() {
        let m = m1();
        let t = |w: &str| m.trace(w).unwrap();
        assert_eq!(show(&m, &m.concat(&t("a"), &t("b"))), "a.b");
        assert_eq!(show(&m, &m.concat(&t("a"), &t("c"))), "a|c");
        assert_eq!(m.concat(&t("acba"), &Trace::unit()), t("acba"));
    }

    #[test]
    fn order_and_residual() {
        let m = m1();
        let t = |w: &str| m.trace(w).unwrap();
        assert!(m.leq(&t("a"), &t("ba")));
        assert!(!m.leq(&t("a"), &t("bc")));
        assert!(m.leq(&Trace::unit(), &t("cab")));
        assert!(!m.leq(&t("ac"), &t("abc")));
        assert_eq!(m.residual(&t("a"), &t("ab")).unwrap(), t("b"));
        assert_eq!(m.residual(&t("acba"), &t("acba")).unwrap(), Trace::unit());
        assert_eq!(m.residual(&t("a"), &t("acba")).unwrap(), t("cba"));
        assert_eq!(m.residual(&t("c"), &t("ab")), Err(Error::NotAPrefix));
    }

    #[test]
    fn cuts() {
        let m = m1();
        let u = m.trace("acba").unwrap();
        assert_eq!(show(&m, &u.cut(2)), "a|c");
        assert!(u.cut(0).is_unit());
        assert_eq!(u.cut(3), u);
        assert_eq!(u.cut(10), u);
    }

    #[test]
    fn mirror_examples() {
        let m = m1();
        let t = |w: &str| m.trace(w).unwrap();
        assert_eq!(m.mirror(&t("ac")), t("ca"));
        assert!(m.mirror(&Trace::unit()).is_unit());
        let u = t("acba");
        assert_eq!(m.mirror(&u).height(), u.height());
        assert_eq!(m.mirror(&m.mirror(&u)), u);
    }

    #[test]
    fn hat_trace_examples() {
        let free = IndependencePair::from_names(&["a", "b"], &[]).unwrap();
        assert_eq!(free.hat_trace().unwrap(), free.trace("aba").unwrap());
        let m = m1();
        assert_eq!(m.hat_trace().unwrap(), m.trace("acbca").unwrap());
        let single = IndependencePair::from_names(&["a"], &[]).unwrap();
        assert_eq!(single.hat_trace().unwrap(), single.trace("a").unwrap());
        let split = IndependencePair::from_names(&["a", "b"], &[("a", "b")]).unwrap();
        assert_eq!(split.hat_trace(), Err(Error::Reducible));
    }

    #[test]
    fn hat_walk_takes_detours() {
        // path graph a - b - c in the dependence relation, plus d hanging off a
        let p = IndependencePair::from_names(
            &["a", "b", "c", "d"],
            &[("a", "c"), ("b", "d"), ("c", "d")],
        )
        .unwrap();
        // walk a, b, c, then back through b, a to reach d
        assert_eq!(p.hat_trace().unwrap(), p.trace("abcbadabcba").unwrap());
    }

    #[test]
    fn dominating_sets() {
        let m = m1();
        let set = CliqueSet::enumerate(&m).unwrap();
        let t = |w: &str| m.trace(w).unwrap();
        assert_eq!(m.dominating_set(&set, &t("a")), vec![t("a"), t("ab")]);
        assert_eq!(m.dominating_set(&set, &t("ab")), vec![t("ab")]);
        assert_eq!(m.dominating_set(&set, &t("c")), vec![t("c")]);
    }

    #[test]
    fn enumeration_counts() {
        let m = m1();
        let set = CliqueSet::enumerate(&m).unwrap();
        assert_eq!(m.enumerate_traces(&set, 0).unwrap(), vec![Trace::unit()]);
        assert_eq!(m.enumerate_traces(&set, 1).unwrap().len(), 3);
        assert_eq!(m.enumerate_traces(&set, 2).unwrap().len(), 8);
        assert!(matches!(m.enumerate_traces(&set, 9), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn checked_construction() {
        let m = m1();
        let c = |s: &str| m.parse_clique(s).unwrap();
        assert!(m.trace_from_cliques(vec![c("a.b"), c("c")]).is_ok());
        assert_eq!(
            m.trace_from_cliques(vec![c("a"), c("b")]),
            Err(Error::NotAdmissible { index: 0, next: 1 })
        );
        assert_eq!(m.trace_from_cliques(vec![Clique::empty()]), Err(Error::EmptyClique(0)));
    }
}
