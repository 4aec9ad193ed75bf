//! Fixtures and brute-force oracles shared by the integration tests.
//!
//! Nothing here goes through normal forms: congruence is decided by closing a
//! word under swaps of adjacent independent letters.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use tracemon::mobius::CliqueTable;
use tracemon::rng::SeededRng;
use tracemon::{Clique, CliqueSet, IndependencePair, Letter};

pub const SQRT5: f64 = 2.236_067_977_499_79;

pub fn m1() -> IndependencePair {
    IndependencePair::from_names(&["a", "b", "c"], &[("a", "b")]).unwrap()
}

/// Pentagon dependence: `a_i` depends on `a_{i±1}`.
pub fn m2() -> IndependencePair {
    IndependencePair::from_names(
        &["a1", "a2", "a3", "a4", "a5"],
        &[("a1", "a3"), ("a1", "a4"), ("a2", "a4"), ("a2", "a5"), ("a3", "a5")],
    )
    .unwrap()
}

pub fn free(n: usize) -> IndependencePair {
    let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    IndependencePair::new(&names, &[]).unwrap()
}

pub fn cliques(p: &IndependencePair) -> CliqueSet {
    CliqueSet::enumerate(p).unwrap()
}

pub type Word = Vec<usize>;

pub fn letters(w: &[usize]) -> Vec<Letter> {
    w.iter().map(|&i| Letter::new(i)).collect()
}

/// All words of length exactly `len` over `n` letters, lexicographically.
pub fn words(n: usize, len: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..n).map(move |a| {
                    let mut x = w.clone();
                    x.push(a);
                    x
                })
            })
            .collect();
    }
    out
}

pub fn words_up_to(n: usize, len: usize) -> Vec<Word> {
    (0..=len).flat_map(|k| words(n, k)).collect()
}

/// Congruence class of `w`: closure under swaps of adjacent independent letters.
pub fn swap_closure(p: &IndependencePair, w: &[usize]) -> BTreeSet<Word> {
    let mut seen = BTreeSet::from([w.to_vec()]);
    let mut queue = VecDeque::from([w.to_vec()]);
    while let Some(x) = queue.pop_front() {
        for i in 0..x.len().saturating_sub(1) {
            if p.is_independent(Letter::new(x[i]), Letter::new(x[i + 1])) {
                let mut y = x.clone();
                y.swap(i, i + 1);
                if seen.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
    }
    seen
}

/// Smallest word of the congruence class, a canonical representative.
pub fn class_rep(p: &IndependencePair, w: &[usize]) -> Word {
    swap_closure(p, w).into_iter().next().unwrap()
}

/// Assigns a class id to every word of length `≤ max_len`.
pub struct CongruenceOracle {
    pub class_of: BTreeMap<Word, usize>,
    pub reps: Vec<Word>,
}

impl CongruenceOracle {
    pub fn new(p: &IndependencePair, max_len: usize) -> Self {
        let mut class_of = BTreeMap::new();
        let mut reps = Vec::new();
        for w in words_up_to(p.len(), max_len) {
            if class_of.contains_key(&w) {
                continue;
            }
            let id = reps.len();
            let closure = swap_closure(p, &w);
            reps.push(closure.iter().next().unwrap().clone());
            for x in closure {
                class_of.insert(x, id);
            }
        }
        Self { class_of, reps }
    }

    /// Classes of all prefixes of all words of class `id`.
    pub fn prefix_classes(&self, p: &IndependencePair, id: usize) -> BTreeSet<usize> {
        swap_closure(p, &self.reps[id])
            .iter()
            .flat_map(|x| (0..=x.len()).map(|k| self.class_of[&x[..k]]).collect::<Vec<_>>())
            .collect()
    }

    pub fn count_of_length(&self, k: usize) -> usize {
        self.reps.iter().filter(|r| r.len() == k).count()
    }
}

/// Cliques by checking every subset of letters.
pub fn brute_cliques(p: &IndependencePair) -> Vec<BTreeSet<usize>> {
    let n = p.len();
    (0u64..1 << n)
        .map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).collect::<BTreeSet<_>>())
        .filter(|s| {
            s.iter()
                .all(|&a| s.iter().all(|&b| a == b || p.is_independent(Letter::new(a), Letter::new(b))))
        })
        .collect()
}

/// `h(c) = Σ_{c'⊇c} (-1)^{|c'|-|c|} f(c')` by double loop.
pub fn naive_transform(set: &CliqueSet, f: &CliqueTable) -> Vec<f64> {
    set.iter()
        .map(|c| {
            set.iter()
                .enumerate()
                .filter(|(_, d)| c.is_subset(d))
                .map(|(j, d)| {
                    let s = if (d.len() - c.len()) % 2 == 0 { 1.0 } else { -1.0 };
                    s * f.at(j)
                })
                .sum()
        })
        .collect()
}

pub fn connected_by_union_find(p: &IndependencePair) -> bool {
    let n = p.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        if parent[x] != x {
            let r = find(parent, parent[x]);
            parent[x] = r;
        }
        parent[x]
    }
    for a in 0..n {
        for b in 0..n {
            if a != b && p.is_dependent(Letter::new(a), Letter::new(b)) {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra] = rb;
            }
        }
    }
    let root = find(&mut parent, 0);
    (0..n).all(|x| find(&mut parent, x) == root)
}

/// Random independence pair on `n` letters, each pair independent with
/// probability `density`.
pub fn random_pair(rng: &mut SeededRng, n: usize, density: f64) -> IndependencePair {
    let names: Vec<String> = (0..n).map(|i| format!("l{i}")).collect();
    let mut pairs = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.uniform() < density {
                pairs.push((a, b));
            }
        }
    }
    IndependencePair::new(&names, &pairs).unwrap()
}

/// `count` random irreducible pairs with 2 to `max_letters` letters.
pub fn random_irreducible_pairs(seed: u64, count: usize, max_letters: usize) -> Vec<IndependencePair> {
    let mut rng = SeededRng::new(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let n = 2 + (rng.next_u64() % (max_letters as u64 - 1)) as usize;
        let p = random_pair(&mut rng, n, 0.45);
        if connected_by_union_find(&p) {
            out.push(p);
        }
    }
    out
}

/// Non-empty cliques reachable from `start` in the graph `c → d`.
pub fn reachable(p: &IndependencePair, states: &[Clique], start: usize, forward: bool) -> usize {
    let mut seen = vec![false; states.len()];
    seen[start] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(i) = queue.pop_front() {
        for j in 0..states.len() {
            let edge = if forward {
                p.cf_admissible(&states[i], &states[j])
            } else {
                p.cf_admissible(&states[j], &states[i])
            };
            if edge && !seen[j] {
                seen[j] = true;
                queue.push_back(j);
            }
        }
    }
    seen.iter().filter(|&&s| s).count()
}

/// Binomial standard deviation of a frequency estimate.
pub fn binomial_sigma(p: f64, n: usize) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}
