//! All complex roots of a Möbius polynomial through the eigenvalues of its
//! companion matrix, used to confirm that the bisection root is the unique
//! root of smallest modulus.

use nalgebra::{Complex, DMatrix};
use tracemon::mobius::MobiusPolynomial;

/// Moduli closer than this are treated as equal.
pub const MODULUS_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct RootCertificate {
    /// Every root, sorted by modulus then argument.
    pub roots: Vec<Complex<f64>>,
    /// `p0` is real, matches the smallest-modulus eigenvalue and no other
    /// root shares that modulus.
    pub certified: bool,
}

pub fn all_roots(poly: &MobiusPolynomial) -> Vec<Complex<f64>> {
    let a = poly.coefficients();
    let d = poly.degree();
    if d == 0 {
        return Vec::new();
    }
    let lead = a[d] as f64;
    let companion = DMatrix::from_fn(d, d, |i, j| {
        if j == d - 1 {
            -(a[i] as f64) / lead
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    });
    let mut roots: Vec<Complex<f64>> = companion.complex_eigenvalues().iter().copied().collect();
    roots.sort_by(|x, y| x.norm().total_cmp(&y.norm()).then(x.arg().total_cmp(&y.arg())));
    roots
}

pub fn certify(poly: &MobiusPolynomial, p0: f64) -> RootCertificate {
    let roots = all_roots(poly);
    let certified = match roots.as_slice() {
        [first, rest @ ..] => {
            (first.re - p0).abs() <= MODULUS_TOLERANCE
                && first.im.abs() <= MODULUS_TOLERANCE
                && rest.iter().all(|r| r.norm() > p0 + MODULUS_TOLERANCE)
        }
        [] => false,
    };
    RootCertificate { roots, certified }
}
