//! Functions of truncated operators: spectral calculus for Hermitian
//! matrices and a Taylor exponential for everything else.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::FockMatrix;
use crate::error::{Error, Result};
use crate::scalar::{abs, re, Cx, Real};

const HERMITIAN_TOL: f64 = 1e-10;
const RECONSTRUCTION_TOL: f64 = 1e-10;
const MAX_TAYLOR_TERMS: usize = 200;

/// Orthonormal eigensystem `H = V diag(values) V^dagger`.
#[derive(Debug, Clone)]
pub struct HermitianEigen<T: Real> {
    pub values: DVector<T>,
    pub vectors: DMatrix<Cx<T>>,
}

impl<T: Real> HermitianEigen<T> {
    /// `V diag(f(values)) V^dagger`.
    pub fn map(&self, f: impl Fn(T) -> Cx<T>) -> FockMatrix<T> {
        let mut scaled = self.vectors.clone();
        for (j, mut col) in scaled.column_iter_mut().enumerate() {
            let fj = f(self.values[j]);
            col.iter_mut().for_each(|z| *z *= fj);
        }
        FockMatrix(scaled * self.vectors.adjoint())
    }
}

pub fn hermitian_eigen<T: Real>(h: &FockMatrix<T>) -> Result<HermitianEigen<T>> {
    let scale = h.max_abs().max(T::one());
    let defect = h.hermiticity_defect();
    if defect > T::lit(HERMITIAN_TOL) * scale {
        return Err(Error::NotHermitian {
            deviation: defect.as_f64(),
        });
    }
    let eig = SymmetricEigen::try_new(h.0.clone(), T::default_epsilon(), 0)
        .ok_or_else(|| Error::Eigen("Hermitian eigensolver did not converge".into()))?;
    let out = HermitianEigen {
        values: eig.eigenvalues,
        vectors: eig.eigenvectors,
    };
    let rebuilt = out.map(re);
    let resid = rebuilt.max_abs_diff(h);
    if resid > T::lit(RECONSTRUCTION_TOL) * scale {
        return Err(Error::Eigen(format!(
            "Hermitian reconstruction residual {:.3e}",
            resid.as_f64()
        )));
    }
    Ok(out)
}

/// `f(H)` for Hermitian `H`, through its eigendecomposition.
pub fn apply_exp_hermitian<T: Real>(
    f: impl Fn(T) -> Cx<T>,
    h: &FockMatrix<T>,
) -> Result<FockMatrix<T>> {
    Ok(hermitian_eigen(h)?.map(f))
}

fn one_norm<T: Real>(m: &DMatrix<Cx<T>>) -> T {
    m.column_iter()
        .map(|c| c.iter().fold(T::zero(), |s, z| s + abs(*z)))
        .fold(T::zero(), |a, b| a.max(b))
}

fn strictly_triangular<T: Real>(m: &DMatrix<Cx<T>>) -> bool {
    let n = m.nrows();
    let upper = (0..n).all(|j| (j..n).all(|i| m[(i, j)] == Cx::new(T::zero(), T::zero())));
    let lower = (0..n).all(|j| (0..=j).all(|i| m[(i, j)] == Cx::new(T::zero(), T::zero())));
    upper || lower
}

/// `exp(M)` for an arbitrary (possibly non-normal) matrix.
///
/// Strictly triangular inputs are nilpotent and get the exact finite Taylor
/// sum. Otherwise the matrix is scaled to 1-norm at most 1/2, summed until
/// the tail bound `|term| x / (k + 2 - x)` drops below `tol`, and squared
/// back.
pub fn exp_taylor<T: Real>(m: &FockMatrix<T>, tol: T) -> Result<FockMatrix<T>> {
    let n = m.dim();
    let ident = DMatrix::<Cx<T>>::identity(n, n);
    if strictly_triangular(&m.0) {
        let mut sum = ident.clone();
        let mut term = ident;
        for k in 1..=n {
            term = (&term * &m.0).map(|z| z / re(T::from_usize_lossy(k)));
            if term.iter().all(|z| z.re == T::zero() && z.im == T::zero()) {
                break;
            }
            sum += &term;
        }
        return Ok(FockMatrix(sum));
    }

    let norm = one_norm(&m.0);
    let half = T::lit(0.5);
    let mut squarings = 0u32;
    let mut s = norm;
    while s > half {
        s /= T::lit(2.0);
        squarings += 1;
    }
    let factor = re(T::lit(2.0).powi(squarings as i32).recip());
    let a = m.0.map(|z| z * factor);
    let x = one_norm(&a);

    let mut sum = ident.clone();
    let mut term = ident;
    let mut converged = x == T::zero();
    for k in 1..=MAX_TAYLOR_TERMS {
        if converged {
            break;
        }
        term = (&term * &a).map(|z| z / re(T::from_usize_lossy(k)));
        sum += &term;
        let kk = T::from_usize_lossy(k + 2);
        let bound = one_norm(&term) * x / (kk - x);
        if bound < tol {
            converged = true;
        }
    }
    if !converged {
        return Err(Error::NoConvergence(format!(
            "Taylor remainder above {:.1e} after {MAX_TAYLOR_TERMS} terms",
            tol.as_f64()
        )));
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    Ok(FockMatrix(sum))
}
