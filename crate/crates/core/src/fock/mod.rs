//! Truncated Fock-space operators and states.
//!
//! Operators are truncated first and functions of them are evaluated on the
//! truncated matrices. Matrices are dense; dimensions stay in the low
//! hundreds.

mod expm;

pub use expm::{apply_exp_hermitian, exp_taylor, hermitian_eigen, HermitianEigen};

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::analytic::SqueezedTarget;
use crate::error::{Error, Result};
use crate::scalar::{abs, cis, re, Cx, Real};

/// Default bound on the norm a state constructor may discard.
pub const DEFAULT_TAIL_LIMIT: f64 = 1e-8;

/// Square complex matrix on the truncated Fock basis `|0> .. |dim-1>`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockMatrix<T: Real>(pub DMatrix<Cx<T>>);

impl<T: Real> FockMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        Self(DMatrix::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        Self(DMatrix::identity(dim, dim))
    }

    pub fn from_diagonal(diag: impl IntoIterator<Item = Cx<T>>) -> Self {
        let d = DVector::from_vec(diag.into_iter().collect());
        Self(DMatrix::from_diagonal(&d))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Cx<T>> {
        &self.0
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self(&self.0 * &other.0)
    }

    pub fn scale(&self, s: Cx<T>) -> Self {
        Self(self.0.map(|z| z * s))
    }

    pub fn apply(&self, v: &DVector<Cx<T>>) -> DVector<Cx<T>> {
        &self.0 * v
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> T {
        self.0.iter().fold(T::zero(), |m, z| m.max(abs(*z)))
    }

    /// Largest entry magnitude of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.0
            .iter()
            .zip(other.0.iter())
            .fold(T::zero(), |m, (a, b)| m.max(abs(*a - *b)))
    }

    /// Largest entry magnitude of `self - self^dagger`.
    pub fn hermiticity_defect(&self) -> T {
        let n = self.dim();
        let mut worst = T::zero();
        for i in 0..n {
            for j in i..n {
                worst = worst.max(abs(self.0[(i, j)] - self.0[(j, i)].conj()));
            }
        }
        worst
    }

    /// Leading `k x k` block.
    pub fn leading_block(&self, k: usize) -> Self {
        Self(self.0.view((0, 0), (k, k)).into_owned())
    }
}

/// Annihilation, creation and number operators on a truncated space.
#[derive(Debug, Clone)]
pub struct Ladder<T: Real> {
    pub a: FockMatrix<T>,
    pub a_dag: FockMatrix<T>,
    pub number: FockMatrix<T>,
}

pub fn ladder<T: Real>(dim: usize) -> Ladder<T> {
    assert!(dim >= 2, "Fock truncation needs dim >= 2");
    let mut a = DMatrix::zeros(dim, dim);
    for n in 1..dim {
        a[(n - 1, n)] = re(T::from_usize_lossy(n).sqrt());
    }
    let a_dag = a.adjoint();
    let number = DMatrix::from_diagonal(&DVector::from_fn(dim, |n, _| re(T::from_usize_lossy(n))));
    Ladder {
        a: FockMatrix(a),
        a_dag: FockMatrix(a_dag),
        number: FockMatrix(number),
    }
}

/// `A = a^2 / 2` on the truncated space.
pub fn pair_lowering<T: Real>(dim: usize) -> FockMatrix<T> {
    let mut m = DMatrix::zeros(dim, dim);
    for n in 2..dim {
        let v = (T::from_usize_lossy(n) * T::from_usize_lossy(n - 1)).sqrt() / T::lit(2.0);
        m[(n - 2, n)] = re(v);
    }
    FockMatrix(m)
}

/// `A^dagger = (a^dagger)^2 / 2`.
pub fn pair_raising<T: Real>(dim: usize) -> FockMatrix<T> {
    pair_lowering::<T>(dim).adjoint()
}

/// `B = n + 1/2`.
pub fn half_number<T: Real>(dim: usize) -> FockMatrix<T> {
    FockMatrix::from_diagonal((0..dim).map(|n| re(T::from_usize_lossy(n) + T::lit(0.5))))
}

/// `exp(-i theta (n + 1/2))`, diagonal.
pub fn free_rotation<T: Real>(dim: usize, theta: T) -> FockMatrix<T> {
    FockMatrix::from_diagonal(
        (0..dim).map(|n| cis(-theta * (T::from_usize_lossy(n) + T::lit(0.5)))),
    )
}

/// Normalized pure state with the norm discarded by truncation.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState<T: Real> {
    pub amplitudes: DVector<Cx<T>>,
    /// Fraction of the untruncated norm lying outside the basis.
    pub tail_mass: T,
}

impl<T: Real> PureState<T> {
    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn vacuum(dim: usize) -> Self {
        let mut v = DVector::zeros(dim);
        v[0] = re(T::one());
        Self {
            amplitudes: v,
            tail_mass: T::zero(),
        }
    }

    pub fn norm(&self) -> T {
        self.amplitudes.norm()
    }

    /// `<psi| op |psi>`.
    pub fn expect(&self, op: &FockMatrix<T>) -> Cx<T> {
        self.amplitudes.dotc(&op.apply(&self.amplitudes))
    }

    pub fn overlap(&self, other: &Self) -> Cx<T> {
        self.amplitudes.dotc(&other.amplitudes)
    }

    pub fn to_density(&self) -> DensityMatrix<T> {
        DensityMatrix(&self.amplitudes * self.amplitudes.adjoint())
    }
}

/// Density operator on the truncated space.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T: Real>(pub DMatrix<Cx<T>>);

impl<T: Real> DensityMatrix<T> {
    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn trace(&self) -> T {
        self.0.diagonal().iter().fold(T::zero(), |s, z| s + z.re)
    }

    /// Checks Hermiticity and unit trace to `tol` and positivity to `-neg_tol`.
    pub fn validate(&self, tol: T, neg_tol: T) -> Result<()> {
        let defect = FockMatrix(self.0.clone()).hermiticity_defect();
        if defect > tol {
            return Err(Error::NotHermitian {
                deviation: defect.as_f64(),
            });
        }
        let tr = self.trace();
        if (tr - T::one()).abs() > tol {
            return Err(Error::InvalidParams(format!(
                "density matrix trace {tr} != 1"
            )));
        }
        let min = SymmetricEigen::new(self.0.clone()).eigenvalues.min();
        if min < -neg_tol {
            return Err(Error::InvalidParams(format!(
                "density matrix has eigenvalue {min}"
            )));
        }
        Ok(())
    }

    /// Maximally mixed state on `dim` levels.
    pub fn maximally_mixed(dim: usize) -> Self {
        let p = re(T::from_usize_lossy(dim).recip());
        Self(DMatrix::from_diagonal_element(dim, dim, p))
    }

    /// Expectation value `Tr(rho op)`.
    pub fn expect(&self, op: &FockMatrix<T>) -> Cx<T> {
        (&self.0 * &op.0).trace()
    }
}

fn check_tail<T: Real>(tail: T, limit: T) -> Result<()> {
    if tail > limit {
        Err(Error::TailTooLarge {
            tail: tail.as_f64(),
            limit: limit.as_f64(),
        })
    } else {
        Ok(())
    }
}

/// Coherent state `|alpha>` truncated to `dim` levels.
pub fn coherent_state<T: Real>(alpha: Cx<T>, dim: usize) -> Result<PureState<T>> {
    coherent_state_with(alpha, dim, T::lit(DEFAULT_TAIL_LIMIT))
}

pub fn coherent_state_with<T: Real>(
    alpha: Cx<T>,
    dim: usize,
    tail_limit: T,
) -> Result<PureState<T>> {
    let n2 = alpha.norm_sqr();
    let mut amps = DVector::zeros(dim);
    let mut c = re((-n2 / T::lit(2.0)).exp());
    for n in 0..dim {
        amps[n] = c;
        c = c * alpha / re(T::from_usize_lossy(n + 1).sqrt());
    }
    // Poisson weights beyond the cutoff, summed directly to avoid 1 - (1 - tail).
    let mut w = c.norm_sqr();
    let mut tail = T::zero();
    let mut k = dim;
    while w > T::zero() && (w > tail * T::default_epsilon() || k < dim + 4) {
        tail += w;
        k += 1;
        w = w * n2 / T::from_usize_lossy(k);
        if k > dim + 100_000 {
            break;
        }
    }
    check_tail(tail, tail_limit)?;
    let norm = amps.norm();
    Ok(PureState {
        amplitudes: amps.map(|z| z / re(norm)),
        tail_mass: tail,
    })
}

/// Thermal state with mean occupation `nbar`, renormalized on the truncated space.
pub fn thermal_state<T: Real>(nbar: T, dim: usize) -> Result<DensityMatrix<T>> {
    thermal_state_with(nbar, dim, T::lit(DEFAULT_TAIL_LIMIT))
}

pub fn thermal_state_with<T: Real>(nbar: T, dim: usize, tail_limit: T) -> Result<DensityMatrix<T>> {
    if !(nbar >= T::zero()) {
        return Err(Error::InvalidParams(format!(
            "thermal occupation must be >= 0, got {nbar}"
        )));
    }
    let x = nbar / (T::one() + nbar);
    let tail = x.powi(dim as i32);
    check_tail(tail, tail_limit)?;
    let mut pops: Vec<T> = (0..dim).map(|n| x.powi(n as i32)).collect();
    let total = pops.iter().fold(T::zero(), |s, p| s + *p);
    for p in &mut pops {
        *p /= total;
    }
    Ok(DensityMatrix(DMatrix::from_diagonal(
        &DVector::from_iterator(dim, pops.into_iter().map(re)),
    )))
}

/// Unnormalized amplitudes of `exp(-(zeta/2) a^dag^2)|0>`, with `c_0 = 1`.
pub fn squeezed_vacuum_amplitudes<T: Real>(zeta: Cx<T>, dim: usize) -> DVector<Cx<T>> {
    let mut c = DVector::zeros(dim);
    c[0] = re(T::one());
    for n in (0..dim.saturating_sub(2)).step_by(2) {
        let f = (T::from_usize_lossy(n + 1) / T::from_usize_lossy(n + 2)).sqrt();
        c[n + 2] = -zeta * c[n] * re(f);
    }
    c
}

/// Fraction of the squeezed-vacuum norm lying at Fock levels `>= dim`.
pub fn squeezed_tail_mass<T: Real>(target: &SqueezedTarget<T>, dim: usize) -> T {
    let z2 = target.r.tanh().powi(2);
    if z2 == T::zero() {
        return T::zero();
    }
    // |c_{2k}|^2 = z2^k (2k-1)!!/(2k)!!, continued past the cutoff
    let mut w = T::one();
    let mut k = 0usize;
    let mut head = T::zero();
    while 2 * k < dim {
        head += w;
        w = w * z2 * T::from_usize_lossy(2 * k + 1) / T::from_usize_lossy(2 * k + 2);
        k += 1;
    }
    let total = target.r.cosh();
    let mut tail = T::zero();
    loop {
        tail += w;
        w = w * z2 * T::from_usize_lossy(2 * k + 1) / T::from_usize_lossy(2 * k + 2);
        k += 1;
        if w <= tail * T::default_epsilon() || w == T::zero() || k > 10_000_000 {
            break;
        }
    }
    // guard the direct sum against the closed-form total when the tail is large
    (tail / total).max(T::one() - head / total).min(T::one())
}

/// Normalized squeezed vacuum `|xi>` with `xi = r e^{i phi}`.
pub fn squeezed_vacuum<T: Real>(target: &SqueezedTarget<T>, dim: usize) -> Result<PureState<T>> {
    squeezed_vacuum_with(target, dim, T::lit(DEFAULT_TAIL_LIMIT))
}

pub fn squeezed_vacuum_with<T: Real>(
    target: &SqueezedTarget<T>,
    dim: usize,
    tail_limit: T,
) -> Result<PureState<T>> {
    let tail = squeezed_tail_mass(target, dim);
    check_tail(tail, tail_limit)?;
    let amps = squeezed_vacuum_amplitudes(target.zeta(), dim);
    let norm = amps.norm();
    Ok(PureState {
        amplitudes: amps.map(|z| z / re(norm)),
        tail_mass: tail,
    })
}

/// `F = <psi| rho |psi>`.
pub fn fidelity<T: Real>(rho: &DensityMatrix<T>, psi: &PureState<T>) -> Result<T> {
    if rho.dim() != psi.dim() {
        return Err(Error::DimMismatch {
            left: rho.dim(),
            right: psi.dim(),
        });
    }
    Ok(psi.amplitudes.dotc(&(&rho.0 * &psi.amplitudes)).re)
}

/// `Tr rho^2`.
pub fn purity<T: Real>(rho: &DensityMatrix<T>) -> T {
    // Tr(rho rho) = sum_ij rho_ij rho_ji = sum |rho_ij|^2 for Hermitian rho
    rho.0.iter().fold(T::zero(), |s, z| s + z.norm_sqr())
}

/// `(1/2) || a - b ||_1` for Hermitian arguments.
pub fn trace_distance<T: Real>(a: &DensityMatrix<T>, b: &DensityMatrix<T>) -> Result<T> {
    if a.dim() != b.dim() {
        return Err(Error::DimMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    let diff = &a.0 - &b.0;
    let eig = SymmetricEigen::new(diff);
    Ok(eig.eigenvalues.iter().fold(T::zero(), |s, l| s + l.abs()) / T::lit(2.0))
}

/// Variance of `x_theta = (a e^{-i theta} + a^dag e^{i theta}) / sqrt(2)` in `psi`.
pub fn quadrature_variance_numeric<T: Real>(psi: &PureState<T>, theta: T) -> T {
    let l = ladder::<T>(psi.dim());
    let x = FockMatrix(
        (l.a.0 * cis(-theta) + l.a_dag.0 * cis(theta)).map(|z| z / re(T::lit(2.0).sqrt())),
    );
    let m1 = psi.expect(&x).re;
    let m2 = psi.expect(&x.mul(&x)).re;
    m2 - m1 * m1
}

/// Mean and variance of the number operator in `psi`.
pub fn number_statistics<T: Real>(psi: &PureState<T>) -> (T, T) {
    let mut m1 = T::zero();
    let mut m2 = T::zero();
    for (n, c) in psi.amplitudes.iter().enumerate() {
        let p = c.norm_sqr();
        let n = T::from_usize_lossy(n);
        m1 += p * n;
        m2 += p * n * n;
    }
    (m1, m2 - m1 * m1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::SqueezedTarget;
    use num_complex::Complex64;

    #[test]
    fn two_level_lowering_operator() {
        let l = ladder::<f64>(2);
        assert_eq!(l.a.0[(0, 1)], Complex64::new(1.0, 0.0));
        assert_eq!(l.a.0[(0, 0)], Complex64::new(0.0, 0.0));
        assert_eq!(l.a.0[(1, 0)], Complex64::new(0.0, 0.0));
        assert_eq!(l.a.0[(1, 1)], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn canonical_commutator_on_leading_block() {
        let d = 12;
        let l = ladder::<f64>(d);
        let comm = l.a.mul(&l.a_dag).0 - l.a_dag.mul(&l.a).0;
        for i in 0..d - 1 {
            for j in 0..d - 1 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((comm[(i, j)] - Complex64::new(want, 0.0)).norm() < 1e-14);
            }
        }
        // only the last diagonal entry is corrupted
        assert!((comm[(d - 1, d - 1)].re - (1.0 - d as f64)).abs() < 1e-12);
        assert!(l.a_dag.mul(&l.a).max_abs_diff(&l.number) < 1e-14);
    }

    #[test]
    fn pair_operators_close_su11() {
        let d = 20;
        let a = pair_lowering::<f64>(d);
        let ad = pair_raising::<f64>(d);
        let b = half_number::<f64>(d);
        let comm = |x: &FockMatrix<f64>, y: &FockMatrix<f64>| x.mul(y).0 - y.mul(x).0;
        let k = d - 3;
        let blk = |m: DMatrix<Complex64>| m.view((0, 0), (k, k)).into_owned();
        assert!((blk(comm(&a, &ad)) - blk(b.0.clone())).norm() < 1e-12);
        assert!((blk(comm(&a, &b)) - blk(a.0.clone() * Complex64::new(2.0, 0.0))).norm() < 1e-12);
        assert!((blk(comm(&ad, &b)) + blk(ad.0.clone() * Complex64::new(2.0, 0.0))).norm() < 1e-12);
    }

    #[test]
    fn zero_amplitude_coherent_state_is_vacuum() {
        let s = coherent_state::<f64>(Complex64::new(0.0, 0.0), 10).unwrap();
        assert_eq!(s.amplitudes, PureState::vacuum(10).amplitudes);
    }

    #[test]
    fn coherent_state_mean_and_vacuum_overlap() {
        let s = coherent_state::<f64>(Complex64::new(1.0, 0.0), 30).unwrap();
        let (mean, var) = number_statistics(&s);
        assert!((mean - 1.0).abs() < 1e-10);
        assert!((var - 1.0).abs() < 1e-10);
        assert!((s.amplitudes[0].norm() - (-0.5f64).exp()).abs() < 1e-12);
        assert!((s.norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn coherent_state_rejects_short_truncation() {
        let e = coherent_state::<f64>(Complex64::new(3.0, 0.0), 10).unwrap_err();
        assert!(matches!(e, Error::TailTooLarge { .. }));
    }

    #[test]
    fn thermal_state_limits() {
        let vac = thermal_state::<f64>(0.0, 8).unwrap();
        assert_eq!(vac.0, PureState::<f64>::vacuum(8).to_density().0);
        let th = thermal_state::<f64>(0.5, 40).unwrap();
        assert!((th.trace() - 1.0).abs() < 1e-14);
        assert!((purity(&th) - 0.5).abs() < 1e-12);
        assert!(thermal_state::<f64>(5.0, 20).is_err());
        assert!(thermal_state::<f64>(-0.1, 20).is_err());
    }

    #[test]
    fn maximally_mixed_purity() {
        let m = DensityMatrix::<f64>::maximally_mixed(7);
        assert!((purity(&m) - 1.0 / 7.0).abs() < 1e-15);
        let p = coherent_state::<f64>(Complex64::new(0.3, -0.2), 20)
            .unwrap()
            .to_density();
        assert!((purity(&p) - 1.0).abs() < 1e-14);
        p.validate(1e-10, 1e-8).unwrap();
    }

    #[test]
    fn squeezed_vacuum_structure() {
        let t = SqueezedTarget::<f64>::from_polar(0.54, 0.8);
        let raw = squeezed_vacuum_amplitudes(t.zeta(), 80);
        assert!((raw.norm_squared() - t.r.cosh()).abs() < 1e-12);
        let s = squeezed_vacuum(&t, 60).unwrap();
        for n in (1..60).step_by(2) {
            assert_eq!(s.amplitudes[n], Complex64::new(0.0, 0.0));
        }
        let (mean, var) = number_statistics(&s);
        assert!((mean - t.mean_quanta).abs() < 1e-8);
        assert!((var - t.quanta_variance).abs() < 1e-8);
        let vac = squeezed_vacuum(&SqueezedTarget::from_polar(0.0, 0.0), 10).unwrap();
        assert_eq!(vac.amplitudes, PureState::vacuum(10).amplitudes);
    }

    #[test]
    fn squeezed_tail_matches_direct_sum() {
        let t = SqueezedTarget::from_polar(0.9, 0.0);
        let big = squeezed_vacuum_amplitudes(t.zeta(), 400);
        let total = big.norm_squared();
        for d in [10usize, 20, 41] {
            let head: f64 = big.iter().take(d).map(|z| z.norm_sqr()).sum();
            let want = (total - head) / total;
            let got = squeezed_tail_mass(&t, d);
            assert!(
                (got - want).abs() < 1e-12 * want.max(1e-300) + 1e-15,
                "d={d}: {got} vs {want}"
            );
        }
    }

    #[test]
    fn vacuum_fidelity_with_squeezed_target() {
        let t = SqueezedTarget::from_polar(0.6, -0.4);
        let xi = squeezed_vacuum(&t, 80).unwrap();
        let vac = PureState::<f64>::vacuum(80).to_density();
        assert!((fidelity(&vac, &xi).unwrap() - 1.0 / t.r.cosh()).abs() < 1e-12);
        assert!((fidelity(&xi.to_density(), &xi).unwrap() - 1.0).abs() < 1e-14);
        assert!((fidelity(&vac, &PureState::vacuum(80)).unwrap() - 1.0).abs() < 1e-15);
        assert!(matches!(
            fidelity(&vac, &PureState::vacuum(10)),
            Err(Error::DimMismatch { .. })
        ));
    }

    #[test]
    fn trace_distance_of_orthogonal_states() {
        let a = PureState::<f64>::vacuum(4).to_density();
        let mut b = DMatrix::zeros(4, 4);
        b[(2, 2)] = Complex64::new(1.0, 0.0);
        assert!((trace_distance(&a, &DensityMatrix(b)).unwrap() - 1.0).abs() < 1e-14);
        assert!(trace_distance(&a, &a).unwrap() < 1e-15);
    }
}
