//! Seeded random generators for parameter matrices. Used by the verification
//! suites and benchmarks; all draws go through an explicit RNG so runs are
//! reproducible.

use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64};

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian<R: Rng>(rng: &mut R) -> f64 {
    // Box-Muller
    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

pub fn random_complex_gaussian<R: Rng>(n: usize, rng: &mut R) -> DMatrix<C64> {
    DMatrix::from_fn(n, n, |_, _| C64::new(gaussian(rng), gaussian(rng)))
}

/// Random invertible matrix (resampled until well-conditioned enough).
pub fn random_invertible<R: Rng>(n: usize, rng: &mut R) -> ComplexMatrix {
    loop {
        let g = random_complex_gaussian(n, rng);
        let m = ComplexMatrix::new(g).expect("square by construction");
        if m.smallest_singular_value() > 1e-3 {
            return m;
        }
    }
}

/// Haar-ish random unitary from the QR factorization of a Gaussian matrix.
pub fn random_unitary<R: Rng>(n: usize, rng: &mut R) -> ComplexMatrix {
    let g = random_complex_gaussian(n, rng);
    let qr = g.qr();
    ComplexMatrix::new(qr.q()).expect("square by construction")
}

/// Random positive definite matrix with spectrum bounded away from zero.
pub fn random_positive<R: Rng>(n: usize, rng: &mut R) -> ComplexMatrix {
    let v = random_unitary(n, rng);
    let d: Vec<f64> = (0..n).map(|_| rng.gen_range(0.2..4.0)).collect();
    v.matmul(&ComplexMatrix::from_real_diagonal(&d)).matmul(&v.adjoint())
}

pub fn random_unit_complex<R: Rng>(rng: &mut R) -> C64 {
    C64::from_polar(1.0, rng.gen_range(0.0..2.0 * std::f64::consts::PI))
}

/// Parameter with `Q·conj(Q) = c·I` built from the anti-diagonal block
/// construction `[[0, T], [c·conj(T)^{-1}, 0]]`; odd sizes append a 1x1
/// block `[1]`, which forces `c = +1`.
pub fn random_bu_parameter<R: Rng>(n: usize, c: i32, rng: &mut R) -> Result<ComplexMatrix> {
    if c != 1 && c != -1 {
        return Err(Error::InvalidMatrix("sign must be +1 or -1".into()));
    }
    if n < 2 {
        return Err(Error::InvalidMatrix("size must be at least 2".into()));
    }
    if n % 2 == 1 && c == -1 {
        // impossible: an odd-size parameter with scalar Q·conj(Q) has c = +1
        return Err(Error::OddNegative);
    }
    let m = n / 2;
    let t = random_invertible(m, rng);
    let tinv_conj = t.conj().inverse(&crate::matrix::Tolerance::default())?;
    let zero = C64::new(0.0, 0.0);
    let mut q = DMatrix::from_element(n, n, zero);
    for i in 0..m {
        for j in 0..m {
            q[(i, m + j)] = t.get(i, j);
            q[(m + i, j)] = tinv_conj.get(i, j) * (c as f64);
        }
    }
    if n % 2 == 1 {
        q[(n - 1, n - 1)] = C64::new(1.0, 0.0);
    }
    Ok(ComplexMatrix::from_raw(q))
}

/// Transports a parameter along its orbit: `r·z·S^t·Q·S` for a random
/// unitary `S`, unit `z` and positive scale `r`. Preserves `QQ̄ ∈ ℝI`.
pub fn random_orbit_transport<R: Rng>(q: &ComplexMatrix, rng: &mut R) -> ComplexMatrix {
    let n = q.n();
    let s = random_unitary(n, rng);
    let z = random_unit_complex(rng);
    let r = rng.gen_range(0.3..3.0);
    s.transpose().matmul(q).matmul(&s).scale(z * r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Tolerance;

    #[test]
    fn bu_parameter_satisfies_scalar_relation() {
        let mut rng = rng_from_seed(3);
        for &(n, c) in &[(2usize, 1i32), (4, -1), (6, 1), (5, 1), (3, 1)] {
            let q = random_bu_parameter(n, c, &mut rng).unwrap();
            let m = q.matmul(&q.conj());
            let target = ComplexMatrix::identity(n).scale(C64::new(c as f64, 0.0));
            assert!(m.sub(&target).norm() < 1e-9, "n={n} c={c}");
        }
    }

    #[test]
    fn odd_negative_rejected() {
        let mut rng = rng_from_seed(4);
        assert!(matches!(random_bu_parameter(3, -1, &mut rng), Err(Error::OddNegative)));
    }

    #[test]
    fn unitary_is_unitary() {
        let mut rng = rng_from_seed(5);
        let u = random_unitary(6, &mut rng);
        let defect = u.adjoint().matmul(&u).sub(&ComplexMatrix::identity(6)).norm();
        assert!(defect < 1e-12);
        let _ = Tolerance::default();
    }
}
