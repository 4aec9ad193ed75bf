//! The Markov chain of Cartier-Foata cliques.
//!
//! Under a Bernoulli measure with Möbius transform `h`, the cliques
//! `C₁, C₂, …` of a random infinite trace form a Markov chain on non-empty
//! cliques with initial law `h` and transitions `P[c][c'] = h(c')/g(c)` for
//! `c → c'`, where `g(c) = Σ_{c→c'} h(c')`. The stationary law `π` of this
//! chain gives the speedup `ρ = Σ π(c)|c|` of concurrent execution and the
//! average parallelism `γ = 1/ρ`.

use alloc::vec::Vec;

use crate::alphabet::IndependencePair;
use crate::clique::{Clique, CliqueSet};
use crate::error::{Error, Result};
use crate::measures::BernoulliMeasure;
use crate::rng::{self, SeededRng};
use crate::trace::Trace;

/// Transition structure of the clique chain.
///
/// States are the non-empty cliques in canonical order; the transition matrix
/// is dense and row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainSpec {
    states: Vec<Clique>,
    initial: Vec<f64>,
    transition: Vec<f64>,
    g: Vec<f64>,
    initial_cdf: Vec<f64>,
    row_cdf: Vec<f64>,
}

fn cumulative(xs: &[f64]) -> Vec<f64> {
    xs.iter()
        .scan(0.0, |acc, &x| {
            *acc += x;
            Some(*acc)
        })
        .collect()
}

impl ChainSpec {
    pub fn build(pair: &IndependencePair, cliques: &CliqueSet, measure: &BernoulliMeasure) -> Result<Self> {
        if !measure.is_certified() {
            return Err(Error::NotMobius {
                h0: measure.transform().at(0),
            });
        }
        let states: Vec<Clique> = cliques.non_empty().to_vec();
        let n = states.len();
        let initial: Vec<f64> = measure.transform().values()[1..].to_vec();
        let mut transition = alloc::vec![0.0; n * n];
        let mut g = alloc::vec![0.0; n];
        for (i, c) in states.iter().enumerate() {
            let closure = pair.dependence_closure(c);
            let row = &mut transition[i * n..(i + 1) * n];
            for (j, d) in states.iter().enumerate() {
                if d.is_subset(&closure) {
                    row[j] = initial[j];
                }
            }
            g[i] = row.iter().sum();
            if !(g[i] > 0.0) {
                return Err(Error::ZeroNormalization { state: i, value: g[i] });
            }
            row.iter_mut().for_each(|x| *x /= g[i]);
        }
        let initial_cdf = cumulative(&initial);
        let row_cdf = transition.chunks(n.max(1)).flat_map(cumulative).collect();
        Ok(Self {
            states,
            initial,
            transition,
            g,
            initial_cdf,
            row_cdf,
        })
    }

    pub fn states(&self) -> &[Clique] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Law of the first clique, `h` restricted to non-empty cliques.
    pub fn initial(&self) -> &[f64] {
        &self.initial
    }

    pub fn transition(&self, from: usize, to: usize) -> f64 {
        self.transition[from * self.len() + to]
    }

    pub fn row(&self, from: usize) -> &[f64] {
        let n = self.len();
        &self.transition[from * n..(from + 1) * n]
    }

    /// Normalization `g(c) = Σ_{c→c'} h(c')` per state.
    pub fn normalization(&self) -> &[f64] {
        &self.g
    }

    pub fn state_index(&self, c: &Clique) -> Option<usize> {
        self.states.iter().position(|s| s == c)
    }

    /// `P(C₁ = c₁, …, C_n = c_n)` as initial law times transitions.
    pub fn path_probability(&self, path: &[usize]) -> f64 {
        let Some((&first, _)) = path.split_first() else {
            return 1.0;
        };
        self.initial[first] * path.windows(2).map(|w| self.transition(w[0], w[1])).product::<f64>()
    }

    fn draw(cdf: &[f64], u: f64) -> usize {
        let target = u * cdf[cdf.len() - 1];
        cdf.partition_point(|&x| x <= target).min(cdf.len() - 1)
    }

    fn draw_initial(&self, rng: &mut SeededRng) -> usize {
        Self::draw(&self.initial_cdf, rng.uniform())
    }

    fn draw_next(&self, from: usize, rng: &mut SeededRng) -> usize {
        let n = self.len();
        Self::draw(&self.row_cdf[from * n..(from + 1) * n], rng.uniform())
    }

    /// Stationary law `π = πP`.
    ///
    /// Solved densely by Gaussian elimination on `Pᵀ - I` with one equation
    /// replaced by `Σπ = 1`; power iteration takes over when elimination hits
    /// a vanishing pivot.
    pub fn stationary(&self) -> Result<Vec<f64>> {
        let n = self.len();
        let mut pi = self.solve_stationary().unwrap_or_else(|| self.power_iteration());
        for x in pi.iter_mut() {
            if *x < 0.0 {
                *x = 0.0;
            }
        }
        normalize(&mut pi);
        // a few sweeps of πP polish the rounding left by elimination
        let mut residual = self.stationary_residual(&pi);
        let mut sweeps = 0;
        while residual > 1e-14 && sweeps < 100 {
            pi = self.step(&pi);
            normalize(&mut pi);
            residual = self.stationary_residual(&pi);
            sweeps += 1;
        }
        if n == 0 || !(residual <= 1e-12) {
            return Err(Error::SolveFailure { residual });
        }
        Ok(pi)
    }

    fn step(&self, pi: &[f64]) -> Vec<f64> {
        let n = self.len();
        let mut next = alloc::vec![0.0; n];
        for (i, &w) in pi.iter().enumerate() {
            if w != 0.0 {
                for (x, &p) in next.iter_mut().zip(self.row(i)) {
                    *x += w * p;
                }
            }
        }
        next
    }

    /// `‖πP − π‖∞`.
    pub fn stationary_residual(&self, pi: &[f64]) -> f64 {
        self.step(pi)
            .iter()
            .zip(pi)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    fn solve_stationary(&self) -> Option<Vec<f64>> {
        let n = self.len();
        if n == 0 {
            return None;
        }
        // augmented system [A | b], row-major with n + 1 columns
        let w = n + 1;
        let mut a = alloc::vec![0.0; n * w];
        for i in 0..n - 1 {
            for j in 0..n {
                a[i * w + j] = self.transition(j, i) - if i == j { 1.0 } else { 0.0 };
            }
        }
        for j in 0..n {
            a[(n - 1) * w + j] = 1.0;
        }
        a[(n - 1) * w + n] = 1.0;
        for col in 0..n {
            let pivot = (col..n).max_by(|&r, &s| a[r * w + col].abs().total_cmp(&a[s * w + col].abs()))?;
            if a[pivot * w + col].abs() < 1e-13 {
                return None;
            }
            if pivot != col {
                for k in 0..w {
                    a.swap(pivot * w + k, col * w + k);
                }
            }
            let p = a[col * w + col];
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = a[r * w + col] / p;
                if factor != 0.0 {
                    for k in col..w {
                        a[r * w + k] -= factor * a[col * w + k];
                    }
                }
            }
        }
        Some((0..n).map(|i| a[i * w + n] / a[i * w + i]).collect())
    }

    fn power_iteration(&self) -> Vec<f64> {
        let mut pi = self.initial.clone();
        normalize(&mut pi);
        for _ in 0..1_000_000 {
            let next = self.step(&pi);
            let delta = next.iter().zip(&pi).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            pi = next;
            if delta < 1e-13 {
                break;
            }
        }
        pi
    }

    /// Exact speedup from the stationary law.
    pub fn speedup(&self) -> Result<Speedup> {
        let pi = self.stationary()?;
        let rho: f64 = pi.iter().zip(&self.states).map(|(p, c)| p * c.len() as f64).sum();
        Ok(Speedup { rho, gamma: 1.0 / rho })
    }

    /// A stream of state indices drawn from the chain.
    pub fn sampler(&self, seed: u64) -> Sampler<'_> {
        Sampler {
            chain: self,
            rng: SeededRng::new(seed),
            current: None,
        }
    }

    fn restart(&self, rng: SeededRng) -> Sampler<'_> {
        Sampler {
            chain: self,
            rng,
            current: None,
        }
    }
}

fn normalize(v: &mut [f64]) {
    let s: f64 = v.iter().sum();
    if s > 0.0 {
        v.iter_mut().for_each(|x| *x /= s);
    }
}

/// Speedup `ρ` and average parallelism `γ = 1/ρ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Speedup {
    pub rho: f64,
    pub gamma: f64,
}

/// Exact speedup of the Bernoulli measure `measure`.
pub fn speedup_exact(pair: &IndependencePair, cliques: &CliqueSet, measure: &BernoulliMeasure) -> Result<Speedup> {
    ChainSpec::build(pair, cliques, measure)?.speedup()
}

/// Iterator over sampled state indices `C₁, C₂, …`.
#[derive(Debug, Clone)]
pub struct Sampler<'a> {
    chain: &'a ChainSpec,
    rng: SeededRng,
    current: Option<usize>,
}

impl Sampler<'_> {
    /// Starts a fresh trajectory, continuing the same random stream.
    pub fn reset(&mut self) {
        self.current = None;
    }
}

impl Iterator for Sampler<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        let next = match self.current {
            None => self.chain.draw_initial(&mut self.rng),
            Some(c) => self.chain.draw_next(c, &mut self.rng),
        };
        self.current = Some(next);
        Some(next)
    }
}

/// A sampled prefix `C₁ ⋯ C_n` of a random infinite trace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleRun {
    pub seed: u64,
    pub generator: &'static str,
    pub cliques: Vec<Clique>,
    pub trace: Trace,
    pub steps: usize,
}

impl SampleRun {
    pub fn length(&self) -> usize {
        self.trace.len()
    }

    pub fn height(&self) -> usize {
        self.trace.height()
    }

    /// Length over height; 1 for the empty run.
    pub fn ratio(&self) -> f64 {
        if self.steps == 0 {
            1.0
        } else {
            self.length() as f64 / self.height() as f64
        }
    }
}

pub fn sample_prefix(chain: &ChainSpec, steps: usize, seed: u64) -> SampleRun {
    let cliques: Vec<Clique> = chain
        .sampler(seed)
        .take(steps)
        .map(|i| chain.states[i].clone())
        .collect();
    SampleRun {
        seed,
        generator: rng::GENERATOR,
        trace: Trace::from_normal_form(cliques.clone()),
        cliques,
        steps,
    }
}

/// Sum of `|C_k|` over one sampled trajectory of `steps` cliques.
pub fn clique_size_sum(chain: &ChainSpec, steps: usize, seed: u64) -> u64 {
    chain
        .sampler(seed)
        .take(steps)
        .map(|i| chain.states[i].len() as u64)
        .sum()
}

/// Ergodic average `(|C₁| + … + |C_n|)/n` over one run.
///
/// # Panics
/// If `steps` is zero.
pub fn speedup_montecarlo(chain: &ChainSpec, steps: usize, seed: u64) -> f64 {
    assert!(steps >= 1, "Monte Carlo speedup needs at least one step");
    clique_size_sum(chain, steps, seed) as f64 / steps as f64
}

/// Seeds and step counts of `chains` independent runs sharing `steps` in
/// total: run `k` uses [`rng::derive_seed`]`(seed, k)` and the first
/// `steps % chains` runs take one extra step.
pub fn montecarlo_plan(steps: usize, seed: u64, chains: usize) -> Vec<(u64, usize)> {
    let chains = chains.max(1);
    (0..chains)
        .map(|k| {
            let share = steps / chains + usize::from(k < steps % chains);
            (rng::derive_seed(seed, k as u64), share)
        })
        .collect()
}

/// Monte Carlo speedup over independent runs following [`montecarlo_plan`],
/// merged as total clique size over total steps.
pub fn speedup_montecarlo_split(chain: &ChainSpec, steps: usize, seed: u64, chains: usize) -> f64 {
    assert!(steps >= 1, "Monte Carlo speedup needs at least one step");
    let total: u64 = montecarlo_plan(steps, seed, chains)
        .into_iter()
        .map(|(s, n)| clique_size_sum(chain, n, s))
        .sum();
    total as f64 / steps as f64
}

/// Fraction of `runs` sampled prefixes of height `τ(u)` that lie above `u`,
/// an estimate of `P(↑u)`. The runs share one random stream.
pub fn empirical_cylinder(chain: &ChainSpec, pair: &IndependencePair, u: &Trace, runs: usize, seed: u64) -> f64 {
    if u.is_unit() {
        return 1.0;
    }
    let mut sampler = chain.restart(SeededRng::new(seed));
    let mut hits = 0usize;
    for _ in 0..runs {
        sampler.reset();
        let prefix: Vec<Clique> = sampler
            .by_ref()
            .take(u.height())
            .map(|i| chain.states[i].clone())
            .collect();
        if pair.leq(u, &Trace::from_normal_form(prefix)) {
            hits += 1;
        }
    }
    hits as f64 / runs as f64
}
