//! Monoid description files.
//!
//! ```text
//! # M1: a and b commute
//! letters a b c
//! independent a b
//! ```
//!
//! The first significant line declares the letters. Every later line names
//! one independent pair; pairs are unordered and repeats are ignored. `#`
//! starts a comment anywhere on a line.

use std::fmt::Write as _;
use std::path::Path;

use tracemon::IndependencePair;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("line {line}: {kind}")]
pub struct SpecError {
    pub line: usize,
    pub kind: SpecErrorKind,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpecErrorKind {
    #[error("expected `letters <name> ...` before anything else")]
    MissingLetters,
    #[error("the letters line may appear only once")]
    LettersRedeclared,
    #[error("unknown directive `{0}`")]
    UnknownDirective(String),
    #[error("`independent` takes exactly two letters, got {0}")]
    PairArity(usize),
    #[error(transparent)]
    Invalid(#[from] tracemon::Error),
}

fn fail(line: usize, kind: impl Into<SpecErrorKind>) -> SpecError {
    SpecError {
        line,
        kind: kind.into(),
    }
}

pub fn parse_spec(text: &str) -> Result<IndependencePair, SpecError> {
    let mut names: Option<Vec<String>> = None;
    let mut pairs = Vec::new();
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let Some((&directive, args)) = tokens.split_first() else {
            continue;
        };
        match (directive, &names) {
            ("letters", None) => {
                let declared: Vec<String> = args.iter().map(|s| s.to_string()).collect();
                IndependencePair::new(&declared, &[]).map_err(|e| fail(line, e))?;
                names = Some(declared);
            }
            ("letters", Some(_)) => return Err(fail(line, SpecErrorKind::LettersRedeclared)),
            (_, None) => return Err(fail(line, SpecErrorKind::MissingLetters)),
            ("independent", Some(declared)) => {
                let [a, b] = args else {
                    return Err(fail(line, SpecErrorKind::PairArity(args.len())));
                };
                let index = |n: &str| {
                    declared
                        .iter()
                        .position(|x| x == n)
                        .ok_or_else(|| fail(line, tracemon::Error::UnknownLetter(n.to_string())))
                };
                let (x, y) = (index(a)?, index(b)?);
                if x == y {
                    return Err(fail(line, tracemon::Error::SelfIndependence(a.to_string())));
                }
                pairs.push((x, y));
            }
            (other, Some(_)) => return Err(fail(line, SpecErrorKind::UnknownDirective(other.to_string()))),
        }
    }
    let names = names.ok_or_else(|| fail(last_line.max(1), SpecErrorKind::MissingLetters))?;
    IndependencePair::new(&names, &pairs).map_err(|e| fail(last_line, e))
}

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse { path: String, source: SpecError },
}

pub fn load_spec(path: &Path) -> Result<IndependencePair, LoadError> {
    let shown = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: shown.clone(),
        source,
    })?;
    parse_spec(&text).map_err(|source| LoadError::Parse { path: shown, source })
}

/// Renders `pair` back to the file format.
pub fn write_spec(pair: &IndependencePair) -> String {
    let mut out = format!("letters {}\n", pair.names().join(" "));
    for (a, b) in pair.independent_pairs() {
        let _ = writeln!(out, "independent {} {}", pair.name(a), pair.name(b));
    }
    out
}
