//! Generic two-level system `H = R . sigma`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::matrix::{pauli_dot, ComplexMatrix};
use crate::purification::DensityMatrix;
use crate::Real;

/// Field vector and inverse temperature of a thermal two-level system.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoLevelSpec<T> {
    pub r_vec: [T; 3],
    pub beta: T,
}

impl<T: Real> TwoLevelSpec<T> {
    pub fn new(r_vec: [T; 3], beta: T) -> Result<Self> {
        let spec = Self { r_vec, beta };
        if !(spec.field_strength() > T::zero()) {
            return Err(Error::Domain("two-level field vector must be nonzero".into()));
        }
        if beta < T::zero() {
            return Err(Error::Domain("inverse temperature must be nonnegative".into()));
        }
        Ok(spec)
    }

    /// `R = |r_vec|`; also the level frequency since `hbar = 1`.
    pub fn field_strength(&self) -> T {
        let [x, y, z] = self.r_vec;
        (x * x + y * y + z * z).sqrt()
    }

    pub fn hamiltonian(&self) -> ComplexMatrix<T> {
        pauli_dot(self.r_vec)
    }

    /// Thermal state `(1 - tanh(beta R) n.sigma) / 2`.
    pub fn density(&self) -> DensityMatrix<T> {
        DensityMatrix::thermal(&self.hamiltonian(), self.beta)
            .expect("two-level Hamiltonian is Hermitian")
    }
}

/// Quasistatic amplitude `G = cos(wt) + i sin(wt) tanh(beta R)`, `w = R`.
/// Vanishes only at infinite temperature, at `t* = (n + 1/2) pi / w`.
pub fn two_level_quasistatic_g<T: Real>(spec: &TwoLevelSpec<T>, t: T) -> Complex<T> {
    let r = spec.field_strength();
    let wt = r * t;
    Complex::new(wt.cos(), wt.sin() * (spec.beta * r).tanh())
}

/// Quench amplitude for the Bloch-vector state `rho0 = (1 + r0 . sigma)/2`
/// under the final field `r_f`: `G = cos(wt) - i sin(wt) r0 . r_f / |r_f|`.
pub fn two_level_quench_g<T: Real>(r0: [T; 3], r_f: [T; 3], t: T) -> Result<Complex<T>> {
    let r = (r_f[0] * r_f[0] + r_f[1] * r_f[1] + r_f[2] * r_f[2]).sqrt();
    if !(r > T::zero()) {
        return Err(Error::Domain("quench field vector must be nonzero".into()));
    }
    let dot = (r0[0] * r_f[0] + r0[1] * r_f[1] + r0[2] * r_f[2]) / r;
    let wt = r * t;
    Ok(Complex::new(wt.cos(), -wt.sin() * dot))
}

/// Quench amplitude for a thermal initial state with level splitting
/// `+-E` (initial Hamiltonian `E sigma_z` in its own eigenbasis):
/// `G = cos(wt) + i (R_z / R) tanh(beta E) sin(wt)`.
pub fn two_level_quench_thermal_g<T: Real>(
    e: T,
    beta: T,
    r_f: [T; 3],
    t: T,
) -> Result<Complex<T>> {
    let r = (r_f[0] * r_f[0] + r_f[1] * r_f[1] + r_f[2] * r_f[2]).sqrt();
    if !(r > T::zero()) {
        return Err(Error::Domain("quench field vector must be nonzero".into()));
    }
    let wt = r * t;
    Ok(Complex::new(wt.cos(), (r_f[2] / r) * (beta * e).tanh() * wt.sin()))
}

/// The thermal initial state of [`two_level_quench_thermal_g`]:
/// `diag(e^{-beta E}, e^{beta E}) / Z` in the initial eigenbasis.
pub fn two_level_quench_thermal_density<T: Real>(e: T, beta: T) -> Result<DensityMatrix<T>> {
    DensityMatrix::thermal(&pauli_dot([T::zero(), T::zero(), e]), beta)
}
