use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use smallvec::SmallVec;

use crate::alphabet::{IndependencePair, Letter};
use crate::error::{Error, Result};

/// Default bound on the number of cliques [`CliqueSet::enumerate`] accepts.
pub const DEFAULT_CLIQUE_CAP: usize = 1 << 20;

const WORD: usize = 64;

/// A set of letters stored as a bitset over letter indices.
///
/// Trailing zero words are always trimmed, so two cliques holding the same
/// letters compare equal regardless of how they were built. Alphabets of up to
/// 128 letters stay inline; larger ones spill to the heap.
///
/// The type itself does not know the independence relation: "clique" is the
/// role these sets play once checked by [`IndependencePair::is_clique`].
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Clique {
    bits: SmallVec<[u64; 2]>,
}

impl Clique {
    /// The empty clique, identified with the unit trace.
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn singleton(letter: Letter) -> Self {
        let mut c = Self::empty();
        c.insert(letter);
        c
    }

    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut c = Self::empty();
        for l in letters {
            c.insert(l);
        }
        c
    }

    pub fn insert(&mut self, letter: Letter) {
        let (w, b) = (letter.index() / WORD, letter.index() % WORD);
        if self.bits.len() <= w {
            self.bits.resize(w + 1, 0);
        }
        self.bits[w] |= 1 << b;
    }

    pub fn remove(&mut self, letter: Letter) {
        let (w, b) = (letter.index() / WORD, letter.index() % WORD);
        if w < self.bits.len() {
            self.bits[w] &= !(1 << b);
            self.trim();
        }
    }

    pub fn contains(&self, letter: Letter) -> bool {
        let (w, b) = (letter.index() / WORD, letter.index() % WORD);
        self.bits.get(w).is_some_and(|x| x >> b & 1 == 1)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Number of letters.
    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Letters in increasing index order, i.e. declaration order.
    pub fn iter(&self) -> impl Iterator<Item = Letter> + '_ {
        self.bits.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            core::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let b = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(Letter::new(wi * WORD + b))
            })
        })
    }

    /// Largest letter index, if any.
    pub fn max_letter(&self) -> Option<Letter> {
        let last = *self.bits.last()?;
        let b = WORD - 1 - last.leading_zeros() as usize;
        Some(Letter::new((self.bits.len() - 1) * WORD + b))
    }

    pub fn union(&self, other: &Self) -> Self {
        let (long, short) = if self.bits.len() >= other.bits.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = long.clone();
        for (a, b) in out.bits.iter_mut().zip(short.bits.iter()) {
            *a |= b;
        }
        out
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut out = Self {
            bits: self.bits.iter().zip(other.bits.iter()).map(|(a, b)| a & b).collect(),
        };
        out.trim();
        out
    }

    pub fn difference(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (a, b) in out.bits.iter_mut().zip(other.bits.iter()) {
            *a &= !b;
        }
        out.trim();
        out
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.bits
            .iter()
            .enumerate()
            .all(|(i, &a)| a & !other.bits.get(i).copied().unwrap_or(0) == 0)
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.bits.iter().zip(other.bits.iter()).all(|(a, b)| a & b == 0)
    }

    /// Ordering by size first, then by the sorted member list. This is the
    /// canonical order used for enumerations and Markov chain states.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.iter().cmp(other.iter()))
    }

    fn trim(&mut self) {
        while self.bits.last() == Some(&0) {
            self.bits.pop();
        }
    }
}

impl fmt::Debug for Clique {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|l| l.index())).finish()
    }
}

/// All cliques of an independence pair, the empty clique included, in
/// canonical order (by size, then member list). Index 0 is always the empty
/// clique.
#[derive(Debug, Clone)]
pub struct CliqueSet {
    letters: usize,
    cliques: Vec<Clique>,
    index: BTreeMap<Clique, usize>,
    max_size: usize,
}

impl CliqueSet {
    /// Enumerates with the default cap of 2^20 cliques.
    pub fn enumerate(pair: &IndependencePair) -> Result<Self> {
        Self::enumerate_with_cap(pair, DEFAULT_CLIQUE_CAP)
    }

    pub fn enumerate_with_cap(pair: &IndependencePair, cap: usize) -> Result<Self> {
        // Extend every clique only by letters above its maximum; each clique is
        // produced exactly once.
        let mut cliques = alloc::vec![Clique::empty()];
        let mut frontier = alloc::vec![Clique::empty()];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for c in &frontier {
                let start = c.max_letter().map_or(0, |l| l.index() + 1);
                let candidates = pair.common_independents(c);
                for l in candidates.iter().filter(|l| l.index() >= start) {
                    let mut d = c.clone();
                    d.insert(l);
                    next.push(d);
                    if cliques.len() + next.len() > cap {
                        return Err(Error::CombinatorialBlowup {
                            count: cliques.len() + next.len(),
                            cap,
                        });
                    }
                }
            }
            cliques.extend(next.iter().cloned());
            frontier = next;
        }
        cliques.sort_by(Clique::canonical_cmp);
        let index = cliques.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
        let max_size = cliques.last().map_or(0, Clique::len);
        Ok(Self {
            letters: pair.len(),
            cliques,
            index,
            max_size,
        })
    }

    /// Number of cliques, the empty one included.
    pub fn len(&self) -> usize {
        self.cliques.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cliques.is_empty()
    }

    /// Size of the alphabet the cliques were enumerated over.
    pub fn letters(&self) -> usize {
        self.letters
    }

    pub fn max_size(&self) -> usize {
        self.max_size
    }

    pub fn as_slice(&self) -> &[Clique] {
        &self.cliques
    }

    pub fn iter(&self) -> core::slice::Iter<'_, Clique> {
        self.cliques.iter()
    }

    /// The non-empty cliques, i.e. the states of the clique Markov chain.
    pub fn non_empty(&self) -> &[Clique] {
        &self.cliques[1..]
    }

    pub fn get(&self, i: usize) -> &Clique {
        &self.cliques[i]
    }

    pub fn index_of(&self, c: &Clique) -> Option<usize> {
        self.index.get(c).copied()
    }

    /// Number of cliques of each size `0..=max_size`.
    pub fn size_counts(&self) -> Vec<usize> {
        let mut counts = alloc::vec![0; self.max_size + 1];
        for c in &self.cliques {
            counts[c.len()] += 1;
        }
        counts
    }
}
