//! Isomorphism classification of `A_u(Q)` for positive `Q`: the canonical
//! spectral invariant and the F-matrix class data behind it.
//!
//! Two normalized spectra give the same quantum group exactly when they are
//! equal or one is the reversed elementwise inverse of the other; the
//! canonical representative is the lexicographic minimum of the two, which
//! gives a total order on classes.

use crate::error::Result;
use crate::matrix::{ComplexMatrix, Tolerance};
use crate::normal_form::{normalize_au, positive_spectrum};

/// Canonical class invariant of `A_u(Q)`: size and trace-balanced
/// descending spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct AuInvariant {
    pub n: usize,
    pub spectrum: Vec<f64>,
}

/// F-matrices of the classes of the fundamental representation and its
/// conjugate: `f_ubar` is the reversed elementwise inverse of `f_u`.
#[derive(Debug, Clone, PartialEq)]
pub struct FClassPair {
    pub f_u: Vec<f64>,
    pub f_ubar: Vec<f64>,
}

fn reversed_inverse(s: &[f64]) -> Vec<f64> {
    s.iter().rev().map(|v| 1.0 / v).collect()
}

fn lex_le(a: &[f64], b: &[f64], tol: &Tolerance) -> bool {
    for (x, y) in a.iter().zip(b) {
        if (x - y).abs() > tol.eq * x.abs().max(1.0) {
            return x < y;
        }
    }
    true
}

fn spectra_eq(a: &[f64], b: &[f64], tol: &Tolerance) -> bool {
    a.len() == b.len()
        && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol.eq * x.abs().max(1.0))
}

/// Canonical invariant: normalize, then take the lexicographic minimum of
/// the descending spectrum and its reversed elementwise inverse.
pub fn au_invariant(q: &ComplexMatrix, tol: &Tolerance) -> Result<AuInvariant> {
    let an = normalize_au(q, tol)?;
    let s = positive_spectrum(&an.qn, tol)?;
    let t = reversed_inverse(&s);
    let spectrum = if lex_le(&s, &t, tol) { s } else { t };
    Ok(AuInvariant { n: q.n(), spectrum })
}

impl AuInvariant {
    pub fn approx_eq(&self, other: &AuInvariant, tol: &Tolerance) -> bool {
        self.n == other.n && spectra_eq(&self.spectrum, &other.spectrum, tol)
    }
}

/// Decides `A_u(Q) ≅ A_u(Q')` for positive parameters.
pub fn au_isomorphic(q: &ComplexMatrix, q2: &ComplexMatrix, tol: &Tolerance) -> Result<bool> {
    let a = au_invariant(q, tol)?;
    let b = au_invariant(q2, tol)?;
    Ok(a.approx_eq(&b, tol))
}

/// F-matrix spectra for the classes of `u` and `ubar` of the normalized
/// parameter.
pub fn class_f_matrices(q: &ComplexMatrix, tol: &Tolerance) -> Result<FClassPair> {
    let an = normalize_au(q, tol)?;
    let f_u = positive_spectrum(&an.qn, tol)?;
    let f_ubar = reversed_inverse(&f_u);
    Ok(FClassPair { f_u, f_ubar })
}
