use std::fmt::Write as _;
use std::str::FromStr;

use tracemon::measures::{self, Valuation};
use tracemon::{CliqueSet, IndependencePair, Letter};

/// A valuation as written on the command line: `uniform`, or
/// `name=value` pairs separated by commas.
#[derive(Debug, Clone, PartialEq)]
pub enum ValuationArg {
    Uniform,
    Values(Vec<(String, f64)>),
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ValuationError {
    #[error("expected `name=value`, got `{0}`")]
    Malformed(String),
    #[error("`{0}` is not a number")]
    NotANumber(String),
    #[error("letter `{0}` is given twice")]
    Repeated(String),
    #[error("`uniform` cannot be used here")]
    UniformNotAllowed,
    #[error(transparent)]
    Invalid(#[from] tracemon::Error),
}

impl FromStr for ValuationArg {
    type Err = ValuationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.trim() == "uniform" {
            return Ok(Self::Uniform);
        }
        let mut values: Vec<(String, f64)> = Vec::new();
        for item in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            let (name, value) = item
                .split_once('=')
                .ok_or_else(|| ValuationError::Malformed(item.to_string()))?;
            let (name, value) = (name.trim(), value.trim());
            if name.is_empty() {
                return Err(ValuationError::Malformed(item.to_string()));
            }
            let x: f64 = value.parse().map_err(|_| ValuationError::NotANumber(value.to_string()))?;
            if values.iter().any(|(n, _)| n == name) {
                return Err(ValuationError::Repeated(name.to_string()));
            }
            values.push((name.to_string(), x));
        }
        if values.is_empty() {
            return Err(ValuationError::Malformed(s.to_string()));
        }
        Ok(Self::Values(values))
    }
}

impl ValuationArg {
    /// Letters and values, checked against the alphabet of `pair`.
    pub fn assignments(&self, pair: &IndependencePair) -> Result<Vec<(Letter, f64)>, ValuationError> {
        let Self::Values(values) = self else {
            return Err(ValuationError::UniformNotAllowed);
        };
        values
            .iter()
            .map(|(name, x)| {
                pair.letter(name)
                    .map(|l| (l, *x))
                    .ok_or_else(|| tracemon::Error::UnknownLetter(name.clone()).into())
            })
            .collect()
    }

    /// Resolves to a full valuation. `uniform` fails with
    /// [`tracemon::Error::Reducible`] on reducible monoids; explicit values
    /// must cover every letter.
    pub fn resolve(&self, pair: &IndependencePair, cliques: &CliqueSet) -> Result<Valuation, ValuationError> {
        if let Self::Uniform = self {
            return Ok(measures::uniform_valuation(pair, cliques)?);
        }
        let mut p = vec![None; pair.len()];
        for (l, x) in self.assignments(pair)? {
            p[l.index()] = Some(x);
        }
        let p = p
            .into_iter()
            .enumerate()
            .map(|(i, x)| x.ok_or_else(|| tracemon::Error::MissingCharacteristic(pair.names()[i].clone())))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Valuation::new(pair, p)?)
    }
}

/// `a=0.5,b=0.5,c=0.25` with full precision, parseable by [`ValuationArg`].
pub fn write_valuation(pair: &IndependencePair, v: &Valuation) -> String {
    let mut out = String::new();
    for l in pair.letters() {
        if !out.is_empty() {
            out.push(',');
        }
        let _ = write!(out, "{}={}", pair.name(l), v.characteristic(l));
    }
    out
}
