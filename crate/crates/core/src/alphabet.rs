use alloc::collections::VecDeque;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::clique::Clique;
use crate::error::{Error, Result};

/// A letter, identified by its declaration index in the alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(u32);

impl Letter {
    pub fn new(index: usize) -> Self {
        Letter(u32::try_from(index).expect("letter index exceeds u32"))
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// An alphabet with an irreflexive, symmetric independence relation.
///
/// Letters are dense indices in declaration order. The relation is stored as
/// one bitset row per letter, which makes parallelism and Cartier-Foata
/// admissibility tests a handful of word operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndependencePair {
    names: Vec<String>,
    independent: Vec<Clique>,
    dependent: Vec<Clique>,
}

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl IndependencePair {
    /// Builds a pair from letter names and independent index pairs. Duplicate
    /// pairs are ignored; self-pairs are rejected.
    pub fn new<S: AsRef<str>>(names: &[S], pairs: &[(usize, usize)]) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        for (i, n) in names.iter().enumerate() {
            if !valid_name(n) {
                return Err(Error::InvalidLetterName(n.clone()));
            }
            if names[..i].contains(n) {
                return Err(Error::DuplicateLetter(n.clone()));
            }
        }
        Self::build(names, pairs)
    }

    /// Same as [`IndependencePair::new`] with pairs given by letter name.
    pub fn from_names(names: &[&str], pairs: &[(&str, &str)]) -> Result<Self> {
        let lookup = |n: &str| {
            names
                .iter()
                .position(|x| *x == n)
                .ok_or_else(|| Error::UnknownLetter(n.to_string()))
        };
        let indexed = pairs
            .iter()
            .map(|(a, b)| Ok((lookup(a)?, lookup(b)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(names, &indexed)
    }

    fn build(names: Vec<String>, pairs: &[(usize, usize)]) -> Result<Self> {
        let n = names.len();
        let mut independent = alloc::vec![Clique::empty(); n];
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(Error::LetterOutOfRange(a.max(b)));
            }
            if a == b {
                return Err(Error::SelfIndependence(names[a].clone()));
            }
            independent[a].insert(Letter::new(b));
            independent[b].insert(Letter::new(a));
        }
        let all = Clique::from_letters((0..n).map(Letter::new));
        let dependent = independent.iter().map(|row| all.difference(row)).collect();
        Ok(Self {
            names,
            independent,
            dependent,
        })
    }

    /// Number of letters.
    pub fn len(&self) -> usize {
        self.names.len()
    }

    /// Only link alphabets of maximal cliques are empty.
    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.len()).map(Letter::new)
    }

    pub fn alphabet(&self) -> Clique {
        Clique::from_letters(self.letters())
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, l: Letter) -> &str {
        &self.names[l.index()]
    }

    pub fn letter(&self, name: &str) -> Option<Letter> {
        self.names.iter().position(|n| n == name).map(Letter::new)
    }

    /// Independent pairs `(a, b)` with `a < b`, in declaration order.
    pub fn independent_pairs(&self) -> Vec<(Letter, Letter)> {
        self.letters()
            .flat_map(|a| {
                self.independent[a.index()]
                    .iter()
                    .filter(move |b| *b > a)
                    .map(move |b| (a, b))
            })
            .collect()
    }

    pub fn is_independent(&self, a: Letter, b: Letter) -> bool {
        self.independent[a.index()].contains(b)
    }

    /// Dependence is the complement of independence, hence reflexive.
    pub fn is_dependent(&self, a: Letter, b: Letter) -> bool {
        !self.is_independent(a, b)
    }

    pub fn dependence_row(&self, a: Letter) -> &Clique {
        &self.dependent[a.index()]
    }

    pub fn independence_row(&self, a: Letter) -> &Clique {
        &self.independent[a.index()]
    }

    /// Letters independent of every letter of `c`; the whole alphabet for the
    /// empty clique.
    pub fn common_independents(&self, c: &Clique) -> Clique {
        c.iter().fold(self.alphabet(), |acc, l| {
            acc.intersection(&self.independent[l.index()])
        })
    }

    pub fn is_clique(&self, c: &Clique) -> bool {
        c.max_letter().is_none_or(|l| l.index() < self.len())
            && c.iter()
                .all(|a| c.difference(&Clique::singleton(a)).is_subset(&self.independent[a.index()]))
    }

    /// Whether the dependence graph is connected.
    pub fn is_irreducible(&self) -> bool {
        let n = self.len();
        if n == 0 {
            return false;
        }
        let mut seen = alloc::vec![false; n];
        let mut queue = VecDeque::from([Letter::new(0)]);
        seen[0] = true;
        while let Some(a) = queue.pop_front() {
            for b in self.dependent[a.index()].iter() {
                if !seen[b.index()] {
                    seen[b.index()] = true;
                    queue.push_back(b);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// `c ∥ d`: every letter of `c` is independent of every letter of `d`.
    pub fn parallel(&self, c: &Clique, d: &Clique) -> bool {
        c.iter().all(|a| d.is_subset(&self.independent[a.index()]))
    }

    /// Letters depending on at least one letter of `c`.
    pub fn dependence_closure(&self, c: &Clique) -> Clique {
        c.iter().fold(Clique::empty(), |acc, a| acc.union(&self.dependent[a.index()]))
    }

    /// `c → d`: every letter of `d` depends on some letter of `c`.
    pub fn cf_admissible(&self, c: &Clique, d: &Clique) -> bool {
        d.is_subset(&self.dependence_closure(c))
    }

    /// Letters parallel to `c`, as a subset of this alphabet.
    pub fn link_letters(&self, c: &Clique) -> Clique {
        self.common_independents(c)
    }

    /// The independence pair restricted to the letters parallel to `c`.
    ///
    /// Letters are re-indexed in their original relative order; names are
    /// kept. The result is empty when `c` is a maximal clique.
    pub fn link_alphabet(&self, c: &Clique) -> IndependencePair {
        self.restrict(&self.link_letters(c))
    }

    /// The independence pair induced on a subset of letters.
    pub fn restrict(&self, keep: &Clique) -> IndependencePair {
        let kept: Vec<Letter> = keep.iter().collect();
        let names = kept.iter().map(|&l| self.name(l).to_string()).collect();
        let mut pairs = Vec::new();
        for (i, &a) in kept.iter().enumerate() {
            for (j, &b) in kept.iter().enumerate().skip(i + 1) {
                if self.is_independent(a, b) {
                    pairs.push((i, j));
                }
            }
        }
        Self::build(names, &pairs).expect("restriction of a valid pair is valid")
    }

    /// Splits a raw word into letters. Whitespace, `.` and `|` separate
    /// tokens; inside a token the longest declared name is matched first.
    /// `ε` and the empty string denote the empty word.
    pub fn parse_word(&self, word: &str) -> Result<Vec<Letter>> {
        let mut out = Vec::new();
        for token in word.split(|c: char| c.is_whitespace() || c == '.' || c == '|') {
            let mut rest = token;
            if rest == "ε" {
                continue;
            }
            while !rest.is_empty() {
                let best = self
                    .letters()
                    .filter(|&l| rest.starts_with(self.name(l)))
                    .max_by_key(|&l| self.name(l).len())
                    .ok_or_else(|| Error::UnparsableWord(word.to_string()))?;
                rest = &rest[self.name(best).len()..];
                out.push(best);
            }
        }
        Ok(out)
    }

    /// Parses a clique written as letters joined by `.`; the empty string and
    /// `ε` give the empty clique.
    pub fn parse_clique(&self, text: &str) -> Result<Clique> {
        let c = Clique::from_letters(self.parse_word(text)?);
        if self.is_clique(&c) {
            Ok(c)
        } else {
            Err(Error::NotAClique(text.to_string()))
        }
    }

    /// Canonical clique text: member names joined by `.` in declaration
    /// order, `ε` for the empty clique.
    pub fn display_clique<'a>(&'a self, c: &'a Clique) -> CliqueDisplay<'a> {
        CliqueDisplay { pair: self, clique: c }
    }
}

#[derive(Debug)]
pub struct CliqueDisplay<'a> {
    pair: &'a IndependencePair,
    clique: &'a Clique,
}

impl fmt::Display for CliqueDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.clique.is_empty() {
            return f.write_str("ε");
        }
        for (i, l) in self.clique.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            f.write_str(self.pair.name(l))?;
        }
        Ok(())
    }
}
