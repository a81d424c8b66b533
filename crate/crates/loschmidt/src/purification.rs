//! Purification of density matrices.
//!
//! A density matrix factors as `rho = W W^dag`; `W` is its amplitude and
//! plays the role of a wavefunction, unique up to a right unitary gauge
//! `W = sqrt(rho) U`. Doubling the Hilbert space turns the amplitude into a
//! pure state `|W>` whose ancilla partial trace recovers `rho`. This module
//! builds amplitudes and purified states, recovers density matrices,
//! evaluates overlaps and observable averages in the purified picture, and
//! tests the Uhlmann parallelity condition `W1^dag W2 = W2^dag W1 > 0`.
//!
//! Purified vectors are assembled in the eigenbasis of `rho` (component
//! `a*d + c` of `|W>` is entry `(a, c)` of `W` expressed in that basis) and
//! rotated back to the caller's basis, so callers never handle basis
//! bookkeeping. With this convention `<W1|W2> = Tr(W1^dag W2)` for any two
//! amplitudes of a common density-matrix family, which is the setting of
//! every overlap taken in this crate.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::{self, eig_hermitian, sqrtm_psd, ComplexMatrix};
use crate::{real, Real};

/// Trace deviation accepted when validating a density matrix.
pub const TRACE_TOL: f64 = 1e-10;
/// Eigenvalues above this qualify a density matrix as full rank.
pub const FULL_RANK_MIN: f64 = 1e-10;

/// Hermitian, unit-trace, positive-semidefinite matrix. Carries the inverse
/// temperature when built as a thermal state.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix<T> {
    mat: ComplexMatrix<T>,
    inverse_temperature: Option<T>,
}

impl<T: Real> DensityMatrix<T> {
    /// Validates Hermiticity, unit trace, and positive semidefiniteness
    /// (eigenvalues down to `-1e-12` are tolerated as roundoff).
    pub fn new(mat: ComplexMatrix<T>) -> Result<Self> {
        let dev = mat.hermiticity_deviation();
        if dev > real(matrix::HERMITICITY_TOL) {
            return Err(Error::NotHermitian { deviation: dev.to_f64().unwrap_or(f64::NAN) });
        }
        let trace = mat.trace();
        let trace_dev = (trace - Complex::one()).norm();
        if trace_dev > real(TRACE_TOL) {
            return Err(Error::Domain(format!(
                "density matrix trace deviates from 1 by {:e}",
                trace_dev.to_f64().unwrap_or(f64::NAN)
            )));
        }
        let eig = eig_hermitian(&mat)?;
        let min = eig.values[0];
        if min < real(-1e-12) {
            return Err(Error::NotPositive { min_eigenvalue: min.to_f64().unwrap_or(f64::NAN) });
        }
        Ok(Self { mat, inverse_temperature: None })
    }

    /// Thermal state `exp(-beta H) / Z`. The spectrum is shifted before
    /// exponentiating so large `beta` cannot overflow.
    pub fn thermal(h: &ComplexMatrix<T>, beta: T) -> Result<Self> {
        if beta < T::zero() {
            return Err(Error::Domain("inverse temperature must be nonnegative".into()));
        }
        let eig = eig_hermitian(h)?;
        let ground = eig.values[0];
        let weights: Vec<T> = eig.values.iter().map(|&l| (-beta * (l - ground)).exp()).collect();
        let z = weights.iter().fold(T::zero(), |a, &b| a + b);
        let mat = eig
            .apply(|l| Complex::new((-beta * (l - ground)).exp() / z, T::zero()))
            .hermitian_part();
        Ok(Self { mat, inverse_temperature: Some(beta) })
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        let w = T::one() / real(dim as f64);
        Self {
            mat: ComplexMatrix::identity(dim).scale_re(w),
            inverse_temperature: Some(T::zero()),
        }
    }

    pub fn mat(&self) -> &ComplexMatrix<T> {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn inverse_temperature(&self) -> Option<T> {
        self.inverse_temperature
    }

    pub fn eigenvalues(&self) -> Result<Vec<T>> {
        Ok(eig_hermitian(&self.mat)?.values)
    }

    pub fn min_eigenvalue(&self) -> Result<T> {
        Ok(self.eigenvalues()?[0])
    }

    /// Full-rank gate used before any Uhlmann-type operation.
    pub fn is_full_rank(&self) -> Result<bool> {
        Ok(self.min_eigenvalue()? > real(FULL_RANK_MIN))
    }

    /// Hermitian PSD square root of the matrix.
    pub fn sqrt(&self) -> Result<ComplexMatrix<T>> {
        sqrtm_psd(&self.mat)
    }
}

/// Amplitude `W` of a density matrix together with the unitary gauge of its
/// polar decomposition `W = sqrt(rho) U`.
#[derive(Clone, Debug, PartialEq)]
pub struct Amplitude<T> {
    mat: ComplexMatrix<T>,
    gauge: ComplexMatrix<T>,
}

impl<T: Real> Amplitude<T> {
    /// Validates that the gauge is unitary and `W W^dag` is a density matrix.
    pub fn new(mat: ComplexMatrix<T>, gauge: ComplexMatrix<T>) -> Result<Self> {
        let gauge_dev = gauge.unitarity_deviation();
        if gauge_dev > real(matrix::UNITARITY_TOL) {
            return Err(Error::NotUnitary { deviation: gauge_dev.to_f64().unwrap_or(f64::NAN) });
        }
        DensityMatrix::new(mat.matmul(&mat.adjoint()).hermitian_part())?;
        Ok(Self { mat, gauge })
    }

    pub(crate) fn new_unchecked(mat: ComplexMatrix<T>, gauge: ComplexMatrix<T>) -> Self {
        Self { mat, gauge }
    }

    pub fn mat(&self) -> &ComplexMatrix<T> {
        &self.mat
    }

    pub fn gauge(&self) -> &ComplexMatrix<T> {
        &self.gauge
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    /// The density matrix `W W^dag` this amplitude purifies.
    pub fn density(&self) -> Result<DensityMatrix<T>> {
        DensityMatrix::new(self.mat.matmul(&self.mat.adjoint()).hermitian_part())
    }
}

/// Amplitude `W = sqrt(rho) U`; the default gauge is the identity.
pub fn amplitude_from_density<T: Real>(
    rho: &DensityMatrix<T>,
    gauge: Option<&ComplexMatrix<T>>,
) -> Result<Amplitude<T>> {
    let root = rho.sqrt()?;
    let gauge = match gauge {
        Some(u) => {
            if u.dim() != rho.dim() {
                return Err(Error::DimMismatch { expected: rho.dim(), got: u.dim() });
            }
            let dev = u.unitarity_deviation();
            if dev > real(matrix::UNITARITY_TOL) {
                return Err(Error::NotUnitary { deviation: dev.to_f64().unwrap_or(f64::NAN) });
            }
            u.clone()
        }
        None => ComplexMatrix::identity(rho.dim()),
    };
    Ok(Amplitude { mat: root.matmul(&gauge), gauge })
}

/// Purified state: a `d^2`-component vector over system (x) ancilla with
/// composite index `a*d + c`, system index major.
#[derive(Clone, Debug, PartialEq)]
pub struct PurifiedState<T> {
    vec: Vec<Complex<T>>,
}

impl<T: Real> PurifiedState<T> {
    pub fn from_vec(vec: Vec<Complex<T>>) -> Self {
        Self { vec }
    }

    pub fn vec(&self) -> &[Complex<T>] {
        &self.vec
    }

    pub fn dim(&self) -> usize {
        self.vec.len()
    }

    pub fn norm(&self) -> T {
        self.vec.iter().map(|c| c.norm_sqr()).fold(T::zero(), |a, b| a + b).sqrt()
    }

    /// Applies an operator on the doubled space.
    pub fn apply(&self, op: &ComplexMatrix<T>) -> Result<Self> {
        if op.dim() != self.dim() {
            return Err(Error::DimMismatch { expected: self.dim(), got: op.dim() });
        }
        Ok(Self { vec: op.mul_vec(&self.vec) })
    }
}

/// Purifies an amplitude: `|W> = sum_i sqrt(lambda_i) |i> (x) U^T |i>` over
/// the eigenbasis `|i>` of `rho = W W^dag`, rotated back to the input basis.
/// Equivalently, component `a*d + c` is entry `(a, c)` of `W V V^T` with `V`
/// the (phase-canonical) eigenvector matrix of `rho`.
pub fn purify<T: Real>(w: &Amplitude<T>) -> PurifiedState<T> {
    let d = w.dim();
    let rho = w.mat().matmul(&w.mat().adjoint()).hermitian_part();
    let eig = eig_hermitian(&rho).expect("W W^dag is Hermitian by construction");
    let v = &eig.vectors;
    let m = w.mat().matmul(&v.matmul(&v.transpose()));
    let mut vec = Vec::with_capacity(d * d);
    for a in 0..d {
        for c in 0..d {
            vec.push(m[(a, c)]);
        }
    }
    PurifiedState { vec }
}

/// Partial trace of `|psi><psi|` over the ancilla factor.
pub fn reduce<T: Real>(psi: &PurifiedState<T>) -> Result<DensityMatrix<T>> {
    let dim = psi.dim();
    let d = (0..=dim)
        .find(|&k| k * k == dim)
        .ok_or(Error::DimMismatch { expected: dim, got: dim })?;
    let mut mat = ComplexMatrix::zeros(d);
    for a in 0..d {
        for b in 0..d {
            let mut acc = Complex::zero();
            for c in 0..d {
                acc = acc + psi.vec[a * d + c] * psi.vec[b * d + c].conj();
            }
            mat[(a, b)] = acc;
        }
    }
    DensityMatrix::new(mat.hermitian_part())
}

/// Inner product `<psi1|psi2>`; equals the Hilbert-Schmidt product of the
/// underlying amplitudes.
pub fn overlap<T: Real>(psi1: &PurifiedState<T>, psi2: &PurifiedState<T>) -> Result<Complex<T>> {
    if psi1.dim() != psi2.dim() {
        return Err(Error::DimMismatch { expected: psi1.dim(), got: psi2.dim() });
    }
    Ok(psi1
        .vec
        .iter()
        .zip(&psi2.vec)
        .fold(Complex::zero(), |acc, (a, b)| acc + a.conj() * b))
}

/// `<psi| (O (x) 1) |psi>`: the observable acts on the system factor only,
/// so this equals `Tr(rho O)` with `rho = reduce(psi)`.
pub fn expectation<T: Real>(
    psi: &PurifiedState<T>,
    observable: &ComplexMatrix<T>,
) -> Result<Complex<T>> {
    let d = observable.dim();
    if psi.dim() != d * d {
        return Err(Error::DimMismatch { expected: d * d, got: psi.dim() });
    }
    let mut acc = Complex::zero();
    for a in 0..d {
        for b in 0..d {
            let o = observable[(a, b)];
            if o == Complex::zero() {
                continue;
            }
            for c in 0..d {
                acc = acc + psi.vec[a * d + c].conj() * o * psi.vec[b * d + c];
            }
        }
    }
    Ok(acc)
}

/// Uhlmann parallelity: `W1^dag W2` Hermitian to `tol` with all eigenvalues
/// strictly above `tol`. Reflexive and symmetric but not transitive.
pub fn is_parallel<T: Real>(w1: &Amplitude<T>, w2: &Amplitude<T>, tol: T) -> bool {
    if w1.dim() != w2.dim() {
        return false;
    }
    let m = w1.mat().adjoint().matmul(w2.mat());
    if m.hermiticity_deviation() > tol {
        return false;
    }
    match eig_hermitian(&m.hermitian_part()) {
        Ok(eig) => eig.values.iter().all(|&l| l > tol),
        Err(_) => false,
    }
}
