//! Valuations, their classification as Möbius valuations, and the
//! probabilities of the Bernoulli measures they define.
//!
//! A valuation is given by positive characteristic numbers `p_α` and extends
//! multiplicatively to traces. It is a Möbius valuation when its Möbius
//! transform `h` vanishes on the empty clique and is positive on every other
//! clique; exactly those valuations are of the form `f(u) = P(↑u)` for a
//! Bernoulli measure `P` on the boundary of the monoid.

use alloc::string::ToString;
use alloc::vec::Vec;

use crate::alphabet::{IndependencePair, Letter};
use crate::clique::{Clique, CliqueSet};
use crate::error::{Error, Result};
use crate::mobius::{self, CliqueTable};
use crate::trace::Trace;

/// Characteristic numbers, one per letter in declaration order.
#[derive(Debug, Clone, PartialEq)]
pub struct Valuation {
    p: Vec<f64>,
}

impl Valuation {
    pub fn new(pair: &IndependencePair, p: Vec<f64>) -> Result<Self> {
        if p.len() != pair.len() {
            return Err(Error::ValuationArity {
                expected: pair.len(),
                got: p.len(),
            });
        }
        for (l, &x) in pair.letters().zip(&p) {
            if !(x > 0.0 && x.is_finite()) {
                return Err(Error::NonPositiveCharacteristic {
                    letter: pair.name(l).to_string(),
                    value: x,
                });
            }
        }
        Ok(Self { p })
    }

    /// Every letter gets the same characteristic number.
    pub fn constant(pair: &IndependencePair, x: f64) -> Result<Self> {
        Self::new(pair, alloc::vec![x; pair.len()])
    }

    pub fn characteristic(&self, l: Letter) -> f64 {
        self.p[l.index()]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.p
    }

    pub fn of_clique(&self, c: &Clique) -> f64 {
        c.iter().map(|l| self.p[l.index()]).product()
    }

    /// `f(u)`, the product of the characteristic numbers over the letters of `u`.
    pub fn of_trace(&self, u: &Trace) -> f64 {
        u.cliques().iter().map(|c| self.of_clique(c)).product()
    }
}

/// Thresholds for deciding that a numerically computed transform is Möbius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    /// Largest accepted `|h(∅)|`.
    pub h0: f64,
    /// Smallest accepted `h(c)` on non-empty cliques.
    pub positive: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            h0: 1e-10,
            positive: 1e-12,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValuationReport {
    /// `h(∅)`.
    pub h0: f64,
    /// The whole transform, in canonical clique order.
    pub h: CliqueTable,
    pub is_mobius: bool,
    /// Cliques breaking the Möbius conditions with their transform values;
    /// the empty clique appears when `|h(∅)|` is above tolerance.
    pub violations: Vec<(Clique, f64)>,
}

impl ValuationReport {
    fn from_transform(cliques: &CliqueSet, h: CliqueTable, tol: Tolerance) -> Self {
        let h0 = h.at(0);
        let mut violations = Vec::new();
        if !(h0.abs() <= tol.h0) {
            violations.push((Clique::empty(), h0));
        }
        for (i, c) in cliques.iter().enumerate().skip(1) {
            if !(h.at(i) >= tol.positive) {
                violations.push((c.clone(), h.at(i)));
            }
        }
        Self {
            h0,
            is_mobius: violations.is_empty(),
            h,
            violations,
        }
    }

    /// `h` on the non-empty cliques.
    pub fn h_positive<'a>(&'a self, cliques: &'a CliqueSet) -> impl Iterator<Item = (&'a Clique, f64)> + 'a {
        cliques.iter().zip(self.h.values()).skip(1).map(|(c, &x)| (c, x))
    }
}

/// Classifies through the Möbius transform of `f` restricted to cliques.
pub fn classify_valuation(cliques: &CliqueSet, v: &Valuation, tol: Tolerance) -> ValuationReport {
    let h = mobius::mobius_transform(cliques, &mobius::valuation_table(cliques, v));
    ValuationReport::from_transform(cliques, h, tol)
}

/// Classifies through the link polynomials: `h(c) = f(c)·μ_{M_c}(p)`.
///
/// Agrees with [`classify_valuation`] up to rounding; it costs one pass over
/// the cliques per clique.
pub fn classify_valuation_via_links(
    pair: &IndependencePair,
    cliques: &CliqueSet,
    v: &Valuation,
    tol: Tolerance,
) -> ValuationReport {
    let h = CliqueTable::from_fn(cliques, |c| v.of_clique(c) * mobius::mobius_eval(pair, cliques, v, c));
    ValuationReport::from_transform(cliques, h, tol)
}

/// The characteristic numbers of the uniform measure: every letter gets the
/// smallest root `p₀` of the Möbius polynomial.
pub fn uniform_valuation(pair: &IndependencePair, cliques: &CliqueSet) -> Result<Valuation> {
    if !pair.is_irreducible() {
        return Err(Error::Reducible);
    }
    let p0 = mobius::smallest_root(&mobius::mobius_polynomial(cliques))?;
    Valuation::constant(pair, p0)
}

/// Solves `h(∅) = 0` for the characteristic number of `free`, the others
/// being fixed. The constraint is affine in `p_free`: `A·p_free + B = 0`.
pub fn complete_valuation(
    pair: &IndependencePair,
    cliques: &CliqueSet,
    fixed: &[(Letter, f64)],
    free: Letter,
) -> Result<Valuation> {
    let mut p = alloc::vec![f64::NAN; pair.len()];
    for &(l, x) in fixed {
        if l == free {
            return Err(Error::FreeLetterFixed(pair.name(l).to_string()));
        }
        p[l.index()] = x;
    }
    if let Some(l) = pair.letters().find(|&l| l != free && p[l.index()].is_nan()) {
        return Err(Error::MissingCharacteristic(pair.name(l).to_string()));
    }
    p[free.index()] = 1.0;
    let (mut a, mut b) = (0.0, 0.0);
    for c in cliques.iter() {
        let sign = if c.len() % 2 == 0 { 1.0 } else { -1.0 };
        let term: f64 = sign * c.iter().map(|l| p[l.index()]).product::<f64>();
        if c.contains(free) {
            a += term;
        } else {
            b += term;
        }
    }
    if a.abs() < 1e-12 {
        return Err(Error::DegenerateCoefficient(a));
    }
    let solution = -b / a;
    if !(solution > 0.0) {
        return Err(Error::NonPositiveSolution(solution));
    }
    p[free.index()] = solution;
    Valuation::new(pair, p)
}

/// A valuation paired with its Möbius transform, ready to answer probability
/// queries.
///
/// Built with [`BernoulliMeasure::new`], the valuation is certified Möbius and
/// the values are probabilities of the Bernoulli measure. [`BernoulliMeasure::waived`]
/// skips the check for exploratory use; values then carry no probabilistic
/// meaning.
#[derive(Debug, Clone, PartialEq)]
pub struct BernoulliMeasure {
    valuation: Valuation,
    h: CliqueTable,
    certified: bool,
}

impl BernoulliMeasure {
    pub fn new(cliques: &CliqueSet, valuation: Valuation, tol: Tolerance) -> Result<Self> {
        let report = classify_valuation(cliques, &valuation, tol);
        if !report.is_mobius {
            return Err(Error::NotMobius { h0: report.h0 });
        }
        Ok(Self {
            valuation,
            h: report.h,
            certified: true,
        })
    }

    pub fn waived(cliques: &CliqueSet, valuation: Valuation) -> Self {
        let h = mobius::mobius_transform(cliques, &mobius::valuation_table(cliques, &valuation));
        Self {
            valuation,
            h,
            certified: false,
        }
    }

    /// The uniform measure of an irreducible monoid.
    pub fn uniform(pair: &IndependencePair, cliques: &CliqueSet) -> Result<Self> {
        Self::new(cliques, uniform_valuation(pair, cliques)?, Tolerance::default())
    }

    pub fn valuation(&self) -> &Valuation {
        &self.valuation
    }

    /// Möbius transform of the valuation, in canonical clique order.
    pub fn transform(&self) -> &CliqueTable {
        &self.h
    }

    pub fn is_certified(&self) -> bool {
        self.certified
    }

    /// `P(↑u) = f(u)`.
    pub fn cylinder_probability(&self, u: &Trace) -> f64 {
        self.valuation.of_trace(u)
    }

    /// `P(C₁ = c₁, …, C_n = c_n) = f(c₁)⋯f(c_{n-1})·h(c_n)`.
    pub fn cf_prefix_probability(&self, pair: &IndependencePair, cliques: &CliqueSet, seq: &[Clique]) -> Result<f64> {
        let Some((last, init)) = seq.split_last() else {
            return Ok(1.0);
        };
        for (i, c) in seq.iter().enumerate() {
            if c.is_empty() {
                return Err(Error::EmptyClique(i));
            }
            if i > 0 && !pair.cf_admissible(&seq[i - 1], c) {
                return Err(Error::NotAdmissible { index: i - 1, next: i });
            }
        }
        let h_last = self
            .h
            .get(cliques, last)
            .ok_or_else(|| Error::NotAClique(alloc::format!("{}", pair.display_clique(last))))?;
        Ok(init.iter().map(|c| self.valuation.of_clique(c)).product::<f64>() * h_last)
    }
}

/// Whether probability queries demand a certified Möbius valuation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Enforcement {
    Require(Tolerance),
    Waive,
}

impl Default for Enforcement {
    fn default() -> Self {
        Enforcement::Require(Tolerance::default())
    }
}

/// `P(↑u) = f(u)`, checking first that `v` is Möbius unless waived.
pub fn cylinder_probability(cliques: &CliqueSet, v: &Valuation, u: &Trace, enforcement: Enforcement) -> Result<f64> {
    if let Enforcement::Require(tol) = enforcement {
        let report = classify_valuation(cliques, v, tol);
        if !report.is_mobius {
            return Err(Error::NotMobius { h0: report.h0 });
        }
    }
    Ok(v.of_trace(u))
}

/// `Σ_{c∈𝒞} (-1)^{|c|} f(u·c)`, which vanishes for every `u` exactly when
/// `h(∅) = 0`.
pub fn boundary_identity_residual(pair: &IndependencePair, cliques: &CliqueSet, v: &Valuation, u: &Trace) -> f64 {
    cliques
        .iter()
        .map(|c| {
            let uc = pair.concat(u, &Trace::from_normal_form(if c.is_empty() {
                Vec::new()
            } else {
                alloc::vec![c.clone()]
            }));
            let f = v.of_trace(&uc);
            if c.len() % 2 == 0 {
                f
            } else {
                -f
            }
        })
        .sum()
}
