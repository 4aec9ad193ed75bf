use std::num::NonZeroUsize;
use std::thread;

use tracemon::markov::{self, ChainSpec};

/// Monte Carlo speedup over `threads` independent runs executed
/// concurrently. The runs follow [`markov::montecarlo_plan`], so the result
/// equals [`markov::speedup_montecarlo_split`] with the same arguments and
/// depends on the thread count but not on scheduling.
pub fn speedup_threaded(chain: &ChainSpec, steps: usize, seed: u64, threads: NonZeroUsize) -> f64 {
    assert!(steps >= 1, "Monte Carlo speedup needs at least one step");
    let plan = markov::montecarlo_plan(steps, seed, threads.get());
    let total: u64 = thread::scope(|scope| {
        let handles: Vec<_> = plan
            .iter()
            .map(|&(s, n)| scope.spawn(move || markov::clique_size_sum(chain, n, s)))
            .collect();
        handles.into_iter().map(|h| h.join().expect("sampler thread panicked")).sum()
    });
    total as f64 / steps as f64
}
