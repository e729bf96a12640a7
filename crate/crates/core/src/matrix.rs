//! Dense complex matrices with an explicit tolerance policy, plus the
//! spectral and polar decompositions the classifiers are built on.
//!
//! Equality decisions are always relative to the Frobenius norm of the
//! input, threaded through a single [`Tolerance`] record.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Tolerances for all floating-point decisions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    /// Relative tolerance for scalar and matrix equality.
    pub eq: f64,
    /// Angular tolerance (radians) for phase grouping and closure checks.
    pub cluster: f64,
    /// Invertibility floor on singular values.
    pub singular: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { eq: 1e-9, cluster: 1e-7, singular: 1e-12 }
    }
}

impl Tolerance {
    /// One-knob constructor: `cluster` and `singular` derive from `eq`.
    pub fn from_eq(eq: f64) -> Result<Self> {
        Self::new(eq, 100.0 * eq, eq * 1e-3)
    }

    pub fn new(eq: f64, cluster: f64, singular: f64) -> Result<Self> {
        if !(eq > 0.0 && cluster > 0.0 && singular > 0.0) {
            return Err(Error::InvalidMatrix("tolerances must be strictly positive".into()));
        }
        if eq >= 1e-2 {
            return Err(Error::InvalidMatrix("tol.eq must be below 1e-2".into()));
        }
        Ok(Tolerance { eq, cluster, singular })
    }
}

/// Square complex matrix with finite entries. Houses the parameter `Q` and
/// everything derived from it.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    m: DMatrix<C64>,
}

impl ComplexMatrix {
    pub fn new(m: DMatrix<C64>) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() == 0 {
            return Err(Error::InvalidMatrix(format!(
                "expected nonempty square matrix, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        if m.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidMatrix("non-finite entry".into()));
        }
        Ok(ComplexMatrix { m })
    }

    /// Row-major construction from complex entries.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidMatrix("rows of unequal length".into()));
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    /// Row-major construction from real entries.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let complex: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&complex)
    }

    pub fn identity(n: usize) -> Self {
        ComplexMatrix { m: DMatrix::identity(n, n) }
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        let n = diag.len();
        ComplexMatrix {
            m: DMatrix::from_fn(n, n, |i, j| if i == j { diag[i] } else { C64::new(0.0, 0.0) }),
        }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let entries: Vec<C64> = diag.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self::from_diagonal(&entries)
    }

    pub fn n(&self) -> usize {
        self.m.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.m[(i, j)]
    }

    pub fn inner(&self) -> &DMatrix<C64> {
        &self.m
    }

    pub fn into_inner(self) -> DMatrix<C64> {
        self.m
    }

    /// Wraps a matrix known to be square and finite.
    pub(crate) fn from_raw(m: DMatrix<C64>) -> Self {
        debug_assert_eq!(m.nrows(), m.ncols());
        ComplexMatrix { m }
    }

    pub fn adjoint(&self) -> Self {
        ComplexMatrix { m: self.m.adjoint() }
    }

    pub fn transpose(&self) -> Self {
        ComplexMatrix { m: self.m.transpose() }
    }

    pub fn conj(&self) -> Self {
        ComplexMatrix { m: self.m.map(|c| c.conj()) }
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        ComplexMatrix { m: &self.m * &rhs.m }
    }

    pub fn scale(&self, c: C64) -> Self {
        ComplexMatrix { m: self.m.map(|x| x * c) }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        ComplexMatrix { m: &self.m - &rhs.m }
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.m.norm()
    }

    pub fn trace(&self) -> C64 {
        self.m.trace()
    }

    /// Principal submatrix on the given index set.
    pub fn submatrix(&self, idx: &[usize]) -> Result<Self> {
        if idx.is_empty() || idx.iter().any(|&i| i >= self.n()) {
            return Err(Error::InvalidMatrix("index set out of range".into()));
        }
        let k = idx.len();
        Ok(ComplexMatrix {
            m: DMatrix::from_fn(k, k, |i, j| self.m[(idx[i], idx[j])]),
        })
    }

    /// Smallest singular value.
    pub fn smallest_singular_value(&self) -> f64 {
        let svd = self.m.clone().svd(false, false);
        svd.singular_values.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    /// Inverse through SVD; errors when not invertible per `tol.singular`.
    pub fn inverse(&self, tol: &Tolerance) -> Result<Self> {
        let svd = self.m.clone().svd(true, true);
        let smin = svd.singular_values.iter().cloned().fold(f64::INFINITY, f64::min);
        if smin <= tol.singular {
            return Err(Error::Singular);
        }
        let inv = svd.pseudo_inverse(0.0).map_err(|e| Error::InvalidMatrix(e.to_string()))?;
        Ok(ComplexMatrix { m: inv })
    }
}

fn hermitian_defect(q: &ComplexMatrix) -> f64 {
    (q.inner() - q.inner().adjoint()).norm()
}

/// Eigenvalues of a hermitian matrix, descending with multiplicity.
pub fn eigvals_hermitian(q: &ComplexMatrix, tol: &Tolerance) -> Result<Vec<f64>> {
    Ok(eigh(q, tol)?.0)
}

/// Full spectral decomposition of a hermitian matrix: descending eigenvalues
/// and a unitary whose columns are the matching eigenvectors.
pub fn eigh(q: &ComplexMatrix, tol: &Tolerance) -> Result<(Vec<f64>, ComplexMatrix)> {
    let scale = q.norm().max(1.0);
    if hermitian_defect(q) > tol.eq * scale {
        return Err(Error::NotHermitian);
    }
    // symmetrize before factoring so roundoff in the input cannot leak
    let h = (q.inner() + q.inner().adjoint()).map(|c| c * 0.5);
    let se = nalgebra::linalg::SymmetricEigen::new(h);
    let n = q.n();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| se.eigenvalues[b].partial_cmp(&se.eigenvalues[a]).unwrap());
    let vals: Vec<f64> = order.iter().map(|&i| se.eigenvalues[i]).collect();
    let mut v = DMatrix::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        v.set_column(col, &se.eigenvectors.column(i));
    }
    Ok((vals, ComplexMatrix::from_raw(v)))
}

/// Right polar decomposition `Q = U·P` with `U` unitary and `P = sqrt(Q*Q)`
/// positive definite.
pub fn polar_decompose(q: &ComplexMatrix, tol: &Tolerance) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let svd = q.inner().clone().svd(true, true);
    let smin = svd.singular_values.iter().cloned().fold(f64::INFINITY, f64::min);
    if smin <= tol.singular {
        return Err(Error::Singular);
    }
    let u_svd = svd.u.as_ref().expect("svd with u");
    let v_t = svd.v_t.as_ref().expect("svd with v_t");
    let unitary = u_svd * v_t;
    let sigma = DMatrix::from_fn(q.n(), q.n(), |i, j| {
        if i == j { C64::new(svd.singular_values[i], 0.0) } else { C64::new(0.0, 0.0) }
    });
    let positive = v_t.adjoint() * sigma * v_t;
    Ok((ComplexMatrix::from_raw(unitary), ComplexMatrix::from_raw(positive)))
}

/// Structural report on a matrix: normality, unitarity, positivity and
/// whether it is a scalar multiple of the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct Predicates {
    pub is_normal: bool,
    pub is_unitary: bool,
    pub is_positive: bool,
    pub scalar_of_identity: Option<C64>,
}

pub fn predicates(q: &ComplexMatrix, tol: &Tolerance) -> Predicates {
    let n = q.n();
    let norm = q.norm();
    let norm2 = (norm * norm).max(1.0);
    let qqs = q.inner() * q.inner().adjoint();
    let qsq = q.inner().adjoint() * q.inner();
    let is_normal = (&qqs - &qsq).norm() <= tol.eq * norm2;
    let eye = DMatrix::<C64>::identity(n, n);
    let is_unitary = (&qsq - &eye).norm() <= tol.eq * (n as f64);
    let is_positive = match eigh(q, tol) {
        Ok((vals, _)) => vals.iter().all(|&v| v > tol.singular),
        Err(_) => false,
    };
    let lambda = q.trace() / C64::new(n as f64, 0.0);
    let scalar_defect = q
        .inner()
        .iter()
        .enumerate()
        .map(|(k, &c)| {
            let (i, j) = (k % n, k / n);
            let target = if i == j { lambda } else { C64::new(0.0, 0.0) };
            (c - target).norm_sqr()
        })
        .sum::<f64>()
        .sqrt();
    let scalar_of_identity = if scalar_defect <= tol.eq * norm.max(1.0) { Some(lambda) } else { None };
    Predicates { is_normal, is_unitary, is_positive, scalar_of_identity }
}

/// Eigendecomposition of a normal matrix via its commuting hermitian and
/// anti-hermitian parts: eigenvalues (no particular order beyond grouping)
/// and a unitary of eigenvectors.
pub fn eig_normal(q: &ComplexMatrix, tol: &Tolerance) -> Result<(Vec<C64>, ComplexMatrix)> {
    let preds = predicates(q, tol);
    if !preds.is_normal {
        return Err(Error::UnsupportedInput("matrix is not normal".into()));
    }
    let n = q.n();
    let h = ComplexMatrix::from_raw((q.inner() + q.inner().adjoint()).map(|c| c * 0.5));
    let k = ComplexMatrix::from_raw(
        (q.inner() - q.inner().adjoint()).map(|c| c * C64::new(0.0, -0.5)),
    );
    let (hvals, hvecs) = eigh(&h, tol)?;
    // Cluster the eigenvalues of the hermitian part, then diagonalize the
    // anti-hermitian part within each eigenspace.
    let gap = q.norm().max(1.0) * (tol.eq * 100.0).max(1e-12);
    let mut v = hvecs.into_inner();
    let mut start = 0usize;
    while start < n {
        let mut end = start + 1;
        while end < n && (hvals[end - 1] - hvals[end]).abs() <= gap {
            end += 1;
        }
        if end - start > 1 {
            let block = v.columns(start, end - start).clone_owned();
            let kb = block.adjoint() * k.inner() * &block;
            let sub = eigh(&ComplexMatrix::from_raw(kb), tol)?;
            let rotated = &block * sub.1.inner();
            for (off, col) in (start..end).enumerate() {
                v.set_column(col, &rotated.column(off));
            }
        }
        start = end;
    }
    // Rayleigh quotients give the eigenvalues in the final basis.
    let vals: Vec<C64> = (0..n)
        .map(|j| {
            let col = v.column(j);
            (col.adjoint() * q.inner() * col)[(0, 0)]
        })
        .collect();
    let lam = DMatrix::from_fn(n, n, |i, j| if i == j { vals[i] } else { C64::new(0.0, 0.0) });
    let residual = (q.inner() * &v - &v * lam).norm();
    if residual > 1e4 * tol.eq * q.norm().max(1.0) {
        return Err(Error::UnsupportedInput(format!(
            "eigendecomposition residual {residual:.3e} too large; matrix not numerically normal"
        )));
    }
    Ok((vals, ComplexMatrix::from_raw(v)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn eigvals_of_diagonal() {
        let q = ComplexMatrix::from_real_diagonal(&[1.0, 2.0, 3.0]);
        let vals = eigvals_hermitian(&q, &tol()).unwrap();
        assert_eq!(vals.len(), 3);
        for (got, want) in vals.iter().zip([3.0, 2.0, 1.0]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    // oracle: roots of the characteristic polynomial of a real symmetric
    // 2x2 matrix [[a,b],[b,d]] by the quadratic formula
    fn char_poly_roots_2x2(a: f64, b: f64, d: f64) -> (f64, f64) {
        let tr = a + d;
        let det = a * d - b * b;
        let disc = (tr * tr - 4.0 * det).sqrt();
        ((tr + disc) / 2.0, (tr - disc) / 2.0)
    }

    #[test]
    fn eigvals_2x2_against_char_poly() {
        let q = ComplexMatrix::from_real_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let vals = eigvals_hermitian(&q, &tol()).unwrap();
        let (hi, lo) = char_poly_roots_2x2(2.0, 1.0, 2.0);
        assert!((hi - 3.0).abs() < 1e-14 && (lo - 1.0).abs() < 1e-14);
        assert!((vals[0] - hi).abs() < 1e-12);
        assert!((vals[1] - lo).abs() < 1e-12);

        let swap = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let vals = eigvals_hermitian(&swap, &tol()).unwrap();
        let (hi, lo) = char_poly_roots_2x2(0.0, 1.0, 0.0);
        assert!((vals[0] - hi).abs() < 1e-12 && (hi - 1.0).abs() < 1e-14);
        assert!((vals[1] - lo).abs() < 1e-12 && (lo + 1.0).abs() < 1e-14);
    }

    #[test]
    fn eigvals_rejects_non_hermitian() {
        let q = ComplexMatrix::from_real_rows(&[vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(eigvals_hermitian(&q, &tol()), Err(Error::NotHermitian));
    }

    #[test]
    fn polar_identity_and_diagonal() {
        let (u, p) = polar_decompose(&ComplexMatrix::identity(3), &tol()).unwrap();
        assert!(u.sub(&ComplexMatrix::identity(3)).norm() < 1e-12);
        assert!(p.sub(&ComplexMatrix::identity(3)).norm() < 1e-12);

        let q = ComplexMatrix::from_diagonal(&[c(0.0, 2.0), c(3.0, 0.0)]);
        let (u, p) = polar_decompose(&q, &tol()).unwrap();
        let u_want = ComplexMatrix::from_diagonal(&[c(0.0, 1.0), c(1.0, 0.0)]);
        let p_want = ComplexMatrix::from_real_diagonal(&[2.0, 3.0]);
        assert!(u.sub(&u_want).norm() < 1e-12);
        assert!(p.sub(&p_want).norm() < 1e-12);
    }

    #[test]
    fn polar_of_suq2_matrix() {
        // Q for SU_q(2) at q = -1/4: sqrt(Q*Q) = diag(0.25, 4)^(1/2)
        let q = ComplexMatrix::from_real_rows(&[vec![0.0, 2.0], vec![0.5, 0.0]]).unwrap();
        let (u, p) = polar_decompose(&q, &tol()).unwrap();
        let u_want = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let p_want = ComplexMatrix::from_real_diagonal(&[0.5, 2.0]);
        assert!(u.sub(&u_want).norm() < 1e-12);
        assert!(p.sub(&p_want).norm() < 1e-12);
        assert!(u.matmul(&p).sub(&q).norm() < 1e-12);
    }

    #[test]
    fn polar_rejects_singular() {
        let q = ComplexMatrix::from_real_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        assert_eq!(polar_decompose(&q, &tol()).err(), Some(Error::Singular));
    }

    #[test]
    fn predicates_identity() {
        let p = predicates(&ComplexMatrix::identity(2), &tol());
        assert!(p.is_normal && p.is_unitary && p.is_positive);
        let lambda = p.scalar_of_identity.unwrap();
        assert!((lambda - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn predicates_detect_non_normal() {
        // QQ* != Q*Q by direct multiplication
        let q = ComplexMatrix::from_real_rows(&[vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap();
        let p = predicates(&q, &tol());
        assert!(!p.is_normal);
        assert!(p.scalar_of_identity.is_none());

        // QQ* = diag(4, 0.25) while Q*Q = diag(0.25, 4)
        let q = ComplexMatrix::from_real_rows(&[vec![0.0, 2.0], vec![0.5, 0.0]]).unwrap();
        assert!(!predicates(&q, &tol()).is_normal);
    }

    #[test]
    fn polar_random_invertible_property() {
        use crate::sampling::{random_invertible, rng_from_seed};
        let mut rng = rng_from_seed(7);
        let t = tol();
        for trial in 0..1000 {
            let n = 1 + trial % 8;
            let q = random_invertible(n, &mut rng);
            let (u, p) = polar_decompose(&q, &t).unwrap();
            let scale = q.norm();
            assert!(u.matmul(&p).sub(&q).norm() <= 1e-8 * scale);
            assert!(u.adjoint().matmul(&u).sub(&ComplexMatrix::identity(n)).norm() <= 1e-8);
            let pvals = eigvals_hermitian(&p, &t).unwrap();
            assert!(pvals.iter().all(|&v| v > 0.0));
        }
    }

    #[test]
    fn eigvals_recover_planted_spectrum() {
        use crate::sampling::{random_unitary, rng_from_seed};
        let mut rng = rng_from_seed(11);
        let t = tol();
        for trial in 0..200 {
            let n = 2 + trial % 6;
            let mut d: Vec<f64> = (0..n).map(|i| 0.3 + 1.7 * ((i * 37 + trial) % 23) as f64 / 23.0).collect();
            d.sort_by(|a, b| b.partial_cmp(a).unwrap());
            let v = random_unitary(n, &mut rng);
            let q = v.matmul(&ComplexMatrix::from_real_diagonal(&d)).matmul(&v.adjoint());
            let vals = eigvals_hermitian(&q, &t).unwrap();
            for (got, want) in vals.iter().zip(d.iter()) {
                assert!((got - want).abs() <= 1e-8);
            }
        }
    }

    #[test]
    fn predicates_invariant_under_conjugation() {
        use crate::sampling::{random_invertible, random_unitary, rng_from_seed};
        let mut rng = rng_from_seed(13);
        let t = tol();
        for trial in 0..100 {
            let n = 2 + trial % 5;
            let q = random_invertible(n, &mut rng);
            let v = random_unitary(n, &mut rng);
            let q2 = v.matmul(&q).matmul(&v.adjoint());
            let p1 = predicates(&q, &t);
            let p2 = predicates(&q2, &t);
            assert_eq!(p1.is_normal, p2.is_normal);
            assert_eq!(p1.is_positive, p2.is_positive);
        }
    }

    #[test]
    fn eig_normal_reconstructs() {
        use crate::sampling::{random_unitary, rng_from_seed};
        let mut rng = rng_from_seed(17);
        let t = tol();
        for trial in 0..100 {
            let n = 2 + trial % 5;
            let d: Vec<C64> = (0..n)
                .map(|i| {
                    let theta = 2.3 * (i as f64) + 0.1 * trial as f64;
                    C64::from_polar(0.5 + (i as f64 % 3.0), theta)
                })
                .collect();
            let v = random_unitary(n, &mut rng);
            let q = v.matmul(&ComplexMatrix::from_diagonal(&d)).matmul(&v.adjoint());
            let (vals, w) = eig_normal(&q, &t).unwrap();
            let lam = ComplexMatrix::from_diagonal(&vals);
            let residual = q.matmul(&w).sub(&w.matmul(&lam)).norm();
            assert!(residual <= 1e-8 * q.norm().max(1.0), "residual {residual}");
        }
    }
}
