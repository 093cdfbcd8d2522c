//! Cyclic Jacobi eigensolver for complex Hermitian matrices.
//!
//! Each rotation zeroes one off-diagonal pair with the plane unitary
//!
//! ```text
//! U = [ c       s ]      c real >= 0,  s complex,  c^2 + |s|^2 = 1
//!     [ -conj(s) c ]
//! ```
//!
//! Writing the pivot block as [[alpha, gamma], [conj(gamma), beta]] and
//! `s = e^{i arg(gamma)} t c`, the annihilation condition reduces to the
//! real quadratic `t^2 - t (alpha - beta)/|gamma| - 1 = 0`; the smaller
//! root keeps rotations below 45 degrees. Off-diagonal mass is strictly
//! decreasing, so sweeps converge unconditionally on Hermitian input.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{s, Scalar};

/// Dense Hermitian matrix in row-major storage.
#[derive(Debug, Clone)]
pub struct HermitianMatrix<S: Scalar> {
    pub dim: usize,
    pub data: Vec<Complex<S>>,
}

impl<S: Scalar> HermitianMatrix<S> {
    pub fn new(dim: usize, data: Vec<Complex<S>>) -> Self {
        assert_eq!(data.len(), dim * dim);
        HermitianMatrix { dim, data }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex<S> {
        self.data[i * self.dim + j]
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize, v: Complex<S>) {
        self.data[i * self.dim + j] = v;
    }

    fn off_diagonal_sq(&self) -> S {
        let mut sum = S::zero();
        for i in 0..self.dim {
            for j in 0..self.dim {
                if i != j {
                    sum += self.get(i, j).norm_sqr();
                }
            }
        }
        sum
    }
}

/// Eigenvalues of a Hermitian matrix, ascending. Sweeps run until the
/// off-diagonal Frobenius norm falls below `1e-12 * dim` (or a few ulps
/// for scalars too coarse for that), erroring if 64 sweeps do not get
/// there.
pub fn hermitian_eigenvalues<S: Scalar>(m: &HermitianMatrix<S>) -> Result<Vec<S>> {
    let n = m.dim;
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut a = m.clone();

    let spec_tol = s::<S>(1e-12) * S::from_usize(n).unwrap();
    let ulp_tol = S::epsilon() * s::<S>(32.0) * S::from_usize(n).unwrap();
    let tol = if spec_tol > ulp_tol { spec_tol } else { ulp_tol };
    let tol_sq = tol * tol;

    let mut sweeps = 0;
    while a.off_diagonal_sq() > tol_sq {
        sweeps += 1;
        if sweeps > 64 {
            return Err(Error::InvariantViolation(
                "jacobi eigensolver did not converge in 64 sweeps".into(),
            ));
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let gamma = a.get(p, q);
                let gnorm = gamma.norm();
                if gnorm == S::zero() {
                    continue;
                }
                let alpha = a.get(p, p).re;
                let beta = a.get(q, q).re;
                let zeta = (alpha - beta) / gnorm;
                // smaller root of t^2 - zeta t - 1 = 0 keeps |t| <= 1
                let sign = if zeta >= S::zero() { S::one() } else { -S::one() };
                let t = -sign * s::<S>(2.0) / (zeta.abs() + (zeta * zeta + s::<S>(4.0)).sqrt());
                let c = S::one() / (S::one() + t * t).sqrt();
                let phase = gamma / Complex::new(gnorm, S::zero());
                let sr = phase * (t * c); // the complex rotation entry

                // diagonal updates (real by construction)
                let tg = t * gnorm;
                let new_pp = c * c * (alpha - s::<S>(2.0) * tg + t * t * beta);
                let new_qq = c * c * (t * t * alpha + s::<S>(2.0) * tg + beta);
                a.set(p, p, Complex::new(new_pp, S::zero()));
                a.set(q, q, Complex::new(new_qq, S::zero()));
                a.set(p, q, Complex::new(S::zero(), S::zero()));
                a.set(q, p, Complex::new(S::zero(), S::zero()));

                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    let new_kp = akp * c - akq * sr.conj();
                    let new_kq = akp * sr + akq * c;
                    a.set(k, p, new_kp);
                    a.set(p, k, new_kp.conj());
                    a.set(k, q, new_kq);
                    a.set(q, k, new_kq.conj());
                }
            }
        }
    }

    let mut eig: Vec<S> = (0..n).map(|i| a.get(i, i).re).collect();
    eig.sort_by(|x, y| x.partial_cmp(y).unwrap());
    Ok(eig)
}
