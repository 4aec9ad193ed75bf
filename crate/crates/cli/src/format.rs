//! Text renderings: numbers at twelve significant digits and the sample-run
//! line format.

use std::fmt::Write as _;

use tracemon::markov::SampleRun;
use tracemon::IndependencePair;

pub const SIGNIFICANT_DIGITS: usize = 12;

/// `x` with [`SIGNIFICANT_DIGITS`] significant digits, trailing zeros
/// dropped. Very large or very small magnitudes switch to exponent notation.
pub fn sig(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let exponent = x.abs().log10().floor() as i32;
    if !(-5..15).contains(&exponent) {
        let s = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
        let (mantissa, exp) = s.split_once('e').unwrap();
        return format!("{}e{exp}", trim_zeros(mantissa));
    }
    let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exponent).max(0) as usize;
    let s = format!("{x:.decimals$}");
    // rounding may carry into a new leading digit, which only adds a zero
    trim_zeros(&s).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// One `k<TAB>clique` line per step, counting from 1, then a `#` trailer:
///
/// ```text
/// # seed=7 steps=2 length=3 height=2 ratio=1.5 generator=chacha8
/// ```
pub fn write_sample(pair: &IndependencePair, run: &SampleRun) -> String {
    let mut out = String::new();
    for (k, c) in run.cliques.iter().enumerate() {
        let _ = writeln!(out, "{}\t{}", k + 1, pair.display_clique(c));
    }
    let _ = writeln!(
        out,
        "# seed={} steps={} length={} height={} ratio={} generator={}",
        run.seed,
        run.steps,
        run.length(),
        run.height(),
        sig(run.ratio()),
        run.generator
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_digits() {
        assert_eq!(sig(0.381_966_011_250_105_1), "0.38196601125");
        assert_eq!(sig(1.082_711_823_336_65), "1.08271182334");
        assert_eq!(sig(-0.25), "-0.25");
        assert_eq!(sig(1.0), "1");
        assert_eq!(sig(0.0), "0");
        assert_eq!(sig(377.0), "377");
        assert_eq!(sig(1e-20), "1e-20");
        assert_eq!(sig(-2.5e-7), "-2.5e-7");
        assert_eq!(sig(0.999_999_999_999_9), "1");
        assert_eq!(sig(123_456_789.123_456), "123456789.123");
    }
}
