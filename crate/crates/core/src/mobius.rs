//! Möbius polynomials, the Möbius transform on cliques and its inverse, and
//! counting traces by length.
//!
//! For an independence pair with cliques `𝒞`, the Möbius polynomial is
//! `μ(X) = Σ_{c∈𝒞} (-1)^{|c|} X^{|c|}` and its formal inverse `1/μ(X)` is the
//! generating series of traces counted by length. Its smallest positive root
//! `p₀` is the characteristic number of the uniform measure.

use alloc::vec::Vec;
use core::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};

use crate::alphabet::IndependencePair;
use crate::clique::{Clique, CliqueSet};
use crate::error::{Error, Result};
use crate::measures::Valuation;
use crate::trace::Trace;

/// Integer coefficients `a_0, …, a_K` of the univariate Möbius polynomial,
/// `a_j = (-1)^j · #{cliques of size j}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MobiusPolynomial {
    coeffs: Vec<i64>,
}

impl MobiusPolynomial {
    pub fn from_cliques(cliques: &CliqueSet) -> Self {
        let coeffs = cliques
            .size_counts()
            .into_iter()
            .enumerate()
            .map(|(j, n)| if j % 2 == 0 { n as i64 } else { -(n as i64) })
            .collect();
        Self { coeffs }
    }

    pub fn from_coefficients(coeffs: Vec<i64>) -> Self {
        Self { coeffs }
    }

    pub fn coefficients(&self) -> &[i64] {
        &self.coeffs
    }

    /// Degree, the maximal clique size.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &a| acc * x + a as f64)
    }
}

impl fmt::Display for MobiusPolynomial {
    /// Written as `1 - 3X + X^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let sign = if a < 0 { "-" } else { "+" };
            if first {
                if a < 0 {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let abs = a.unsigned_abs();
            match (j, abs) {
                (0, _) => write!(f, "{abs}")?,
                (_, 1) => {}
                _ => write!(f, "{abs}")?,
            }
            match j {
                0 => {}
                1 => f.write_str("X")?,
                _ => write!(f, "X^{j}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

pub fn mobius_polynomial(cliques: &CliqueSet) -> MobiusPolynomial {
    MobiusPolynomial::from_cliques(cliques)
}

/// A real function on cliques, stored in the canonical order of a
/// [`CliqueSet`].
#[derive(Debug, Clone, PartialEq)]
pub struct CliqueTable {
    values: Vec<f64>,
}

impl CliqueTable {
    pub fn from_fn(cliques: &CliqueSet, mut f: impl FnMut(&Clique) -> f64) -> Self {
        Self {
            values: cliques.iter().map(&mut f).collect(),
        }
    }

    /// Values listed in the canonical order of the clique set they belong to.
    pub fn from_values(values: Vec<f64>) -> Self {
        Self { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Value at the clique with canonical index `i`.
    pub fn at(&self, i: usize) -> f64 {
        self.values[i]
    }

    pub fn get(&self, cliques: &CliqueSet, c: &Clique) -> Option<f64> {
        cliques.index_of(c).map(|i| self.values[i])
    }
}

/// Alternating superset sums, one letter at a time. The clique family is
/// closed under subsets, so the usual subset-lattice recursion stays inside it.
fn superset_sums(cliques: &CliqueSet, table: &CliqueTable, sign: f64) -> CliqueTable {
    assert_eq!(table.len(), cliques.len(), "table does not match the clique set");
    let mut values = table.values.clone();
    let letters = (0..cliques.letters()).map(crate::Letter::new);
    for l in letters {
        for (i, c) in cliques.iter().enumerate() {
            if c.contains(l) {
                continue;
            }
            let mut up = c.clone();
            up.insert(l);
            if let Some(j) = cliques.index_of(&up) {
                values[i] += sign * values[j];
            }
        }
    }
    CliqueTable { values }
}

/// `h(c) = Σ_{c' ⊇ c} (-1)^{|c'|-|c|} f(c')`.
pub fn mobius_transform(cliques: &CliqueSet, f: &CliqueTable) -> CliqueTable {
    superset_sums(cliques, f, -1.0)
}

/// `f(c) = Σ_{c' ⊇ c} h(c')`, the inverse of [`mobius_transform`].
pub fn mobius_inverse(cliques: &CliqueSet, h: &CliqueTable) -> CliqueTable {
    superset_sums(cliques, h, 1.0)
}

/// The restriction of a valuation to cliques.
pub fn valuation_table(cliques: &CliqueSet, v: &Valuation) -> CliqueTable {
    CliqueTable::from_fn(cliques, |c| v.of_clique(c))
}

/// Multivariate Möbius polynomial of the link of `c`, evaluated at the
/// characteristic numbers: `Σ_{d ∥ c} (-1)^{|d|} Π_{α∈d} p_α`. For the empty
/// clique this is the Möbius polynomial of the whole monoid.
pub fn mobius_eval(pair: &IndependencePair, cliques: &CliqueSet, v: &Valuation, c: &Clique) -> f64 {
    let link = pair.link_letters(c);
    cliques
        .iter()
        .filter(|d| d.is_subset(&link))
        .map(|d| if d.len() % 2 == 0 { v.of_clique(d) } else { -v.of_clique(d) })
        .sum()
}

/// Extended transform `h(u) = f(v)·h(c)` where `u = v·c` and `c` is the last
/// Cartier-Foata clique of `u`.
pub fn extended_transform(pair: &IndependencePair, cliques: &CliqueSet, v: &Valuation, u: &Trace) -> Result<f64> {
    let (prefix, last) = u.split_last().ok_or(Error::EmptyTrace)?;
    Ok(v.of_trace(&prefix) * v.of_clique(last) * mobius_eval(pair, cliques, v, last))
}

/// Number of traces of each length `0..=N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountSequence(Vec<BigUint>);

impl CountSequence {
    pub fn as_slice(&self) -> &[BigUint] {
        &self.0
    }

    pub fn get(&self, k: usize) -> Option<&BigUint> {
        self.0.get(k)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `λ_{k+1} / λ_k` in floating point.
    pub fn ratio(&self, k: usize) -> Option<f64> {
        let num = self.0.get(k + 1)?.to_f64()?;
        let den = self.0.get(k)?.to_f64()?;
        Some(num / den)
    }
}

/// Counts traces of length `0..=k_max` from `Σ_j a_j λ_{n-j} = 0` (`n ≥ 1`),
/// `λ_0 = 1`.
pub fn count_traces(poly: &MobiusPolynomial, k_max: usize) -> CountSequence {
    let a: Vec<BigInt> = poly.coefficients().iter().map(|&x| BigInt::from(x)).collect();
    let mut lambda: Vec<BigInt> = Vec::with_capacity(k_max + 1);
    lambda.push(BigInt::from(1));
    for n in 1..=k_max {
        let mut acc = BigInt::zero();
        for j in 1..a.len().min(n + 1) {
            acc -= &a[j] * &lambda[n - j];
        }
        lambda.push(acc);
    }
    CountSequence(
        lambda
            .into_iter()
            .map(|x| x.to_biguint().expect("trace counts are nonnegative"))
            .collect(),
    )
}

/// Grid step of the sign-change scan in [`smallest_root`].
const ROOT_SCAN_STEPS: u32 = 1024;

/// Smallest positive root of the Möbius polynomial, in `(0, 1]`.
///
/// Scans for the first sign change on a grid of step 1/1024 (`μ(0) = 1`) and
/// bisects to 1e-14. The single-letter monoid has its root at exactly 1.
pub fn smallest_root(poly: &MobiusPolynomial) -> Result<f64> {
    let mut lo = 0.0;
    for k in 1..=ROOT_SCAN_STEPS {
        let hi = f64::from(k) / f64::from(ROOT_SCAN_STEPS);
        let y = poly.eval(hi);
        if y == 0.0 {
            return Ok(hi);
        }
        if y < 0.0 {
            return Ok(bisect(poly, lo, hi));
        }
        lo = hi;
    }
    Err(Error::NoRootInUnitInterval)
}

fn bisect(poly: &MobiusPolynomial, mut lo: f64, mut hi: f64) -> f64 {
    // invariant: μ(lo) > 0 ≥ μ(hi)
    while hi - lo > 1e-14 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if poly.eval(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
