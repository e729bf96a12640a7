//! The two normalization conventions and the shared spectral bookkeeping:
//! trace balancing for positive parameters, scaling to `Q·conj(Q) = ±I`,
//! and extraction of the paired `mu`-signature of `|Q|`.

use crate::error::{Error, Result};
use crate::matrix::{eigvals_hermitian, ComplexMatrix, Tolerance, C64};

/// Positive parameter rescaled so that `Tr(Q) = Tr(Q^{-1})`.
#[derive(Debug, Clone)]
pub struct AuNormalization {
    pub c: f64,
    pub qn: ComplexMatrix,
}

/// Parameter rescaled so that `Q·conj(Q) = c·I` with `c = ±1`.
#[derive(Debug, Clone)]
pub struct BuNormalization {
    pub r: f64,
    pub c: i32,
    pub qn: ComplexMatrix,
}

/// The `>= 1` half of the paired spectrum of `|Q|` for a normalized
/// parameter: `(mu_1, ..., mu_k)` with the full spectrum
/// `(mu, [1 if n odd], mu^{-1} reversed)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MuSignature {
    pub n: usize,
    pub k: usize,
    pub mu: Vec<f64>,
}

/// Positive spectrum of a positive definite matrix, descending.
pub(crate) fn positive_spectrum(q: &ComplexMatrix, tol: &Tolerance) -> Result<Vec<f64>> {
    let vals = eigvals_hermitian(q, tol).map_err(|_| Error::NotPositive)?;
    if vals.iter().any(|&v| v <= tol.singular) {
        return Err(Error::NotPositive);
    }
    Ok(vals)
}

/// Rescales a positive `Q` by `c = sqrt(Tr(Q^{-1})/Tr(Q))` so the traces of
/// the matrix and its inverse agree.
pub fn normalize_au(q: &ComplexMatrix, tol: &Tolerance) -> Result<AuNormalization> {
    let vals = positive_spectrum(q, tol)?;
    let tr: f64 = vals.iter().sum();
    let tr_inv: f64 = vals.iter().map(|v| 1.0 / v).sum();
    let c = (tr_inv / tr).sqrt();
    Ok(AuNormalization { c, qn: q.scale(C64::new(c, 0.0)) })
}

/// Extracts the real scalar from `Q·conj(Q) = λI`, checking off-diagonal
/// smallness; the mean of the diagonal damps roundoff.
fn scalar_of_qqbar(q: &ComplexMatrix, tol: &Tolerance) -> Result<f64> {
    let n = q.n();
    let m = q.matmul(&q.conj());
    let lambda = m.trace() / C64::new(n as f64, 0.0);
    let scale = (q.norm() * q.norm()).max(1.0);
    let mut defect = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { lambda } else { C64::new(0.0, 0.0) };
            defect += (m.get(i, j) - target).norm_sqr();
        }
    }
    if defect.sqrt() > tol.eq * scale {
        return Err(Error::NotScalarQQbar);
    }
    if lambda.im.abs() > tol.eq * lambda.norm().max(1.0) || lambda.norm() <= tol.singular {
        return Err(Error::NotScalarQQbar);
    }
    Ok(lambda.re)
}

/// Rescales `Q` with `Q·conj(Q) = λI` (λ real nonzero) to `Q·conj(Q) = ±I`.
pub fn normalize_bu(q: &ComplexMatrix, tol: &Tolerance) -> Result<BuNormalization> {
    let lambda = scalar_of_qqbar(q, tol)?;
    if q.n() % 2 == 1 && lambda < 0.0 {
        return Err(Error::OddNegative);
    }
    let r = 1.0 / lambda.abs().sqrt();
    let c = if lambda > 0.0 { 1 } else { -1 };
    Ok(BuNormalization { r, c, qn: q.scale(C64::new(r, 0.0)) })
}

/// Spectrum of `|Qn| = sqrt(Qn*·Qn)` verified to pair as `(mu, mu^{-1})`
/// with a middle `1` when `n` is odd; entries within `tol.eq` of 1 snap to 1.
pub fn mu_signature(qn: &ComplexMatrix, tol: &Tolerance) -> Result<MuSignature> {
    let lambda = scalar_of_qqbar(qn, tol)?;
    if (lambda.abs() - 1.0).abs() > 100.0 * tol.eq {
        return Err(Error::NotScalarQQbar);
    }
    let n = qn.n();
    let gram = qn.adjoint().matmul(qn);
    let s: Vec<f64> = positive_spectrum(&gram, tol)?.iter().map(|v| v.sqrt()).collect();
    for i in 0..n {
        let prod = s[i] * s[n - 1 - i];
        if (prod - 1.0).abs() > 100.0 * tol.eq * prod.max(1.0) {
            return Err(Error::PairingViolation);
        }
    }
    if n % 2 == 1 && (s[n / 2] - 1.0).abs() > 100.0 * tol.eq {
        return Err(Error::PairingViolation);
    }
    let k = n / 2;
    let mu: Vec<f64> = s[..k]
        .iter()
        .map(|&v| if (v - 1.0).abs() <= tol.eq { 1.0 } else { v })
        .collect();
    Ok(MuSignature { n, k, mu })
}

impl MuSignature {
    /// Full canonical descending diagonal `(mu, [1], 1/mu reversed)`.
    pub fn full_spectrum(&self) -> Vec<f64> {
        let mut s = self.mu.clone();
        if self.n % 2 == 1 {
            s.push(1.0);
        }
        s.extend(self.mu.iter().rev().map(|m| 1.0 / m));
        s
    }

    pub fn approx_eq(&self, other: &MuSignature, tol: &Tolerance) -> bool {
        self.n == other.n
            && self.k == other.k
            && self
                .mu
                .iter()
                .zip(&other.mu)
                .all(|(a, b)| (a - b).abs() <= tol.eq * a.abs().max(1.0))
    }
}
