//! Spinor representation of two-level purifications.
//!
//! The thermal two-level density matrix is a Fermi-weighted combination of
//! the spectral projectors `P_+- = (1 +- n.sigma)/2`, and its purification
//! decomposes over the product spinors `|W_+-> = |+-R> (x) |+-R>` with
//! weights `1/sqrt(e^{+-beta Delta} + 1)`, `Delta = 2R` the level gap. The
//! pure-state projectors have vanishing determinant (they represent a
//! null Minkowski 4-vector, which is what admits the two-component square
//! root), while a mixed `rho` has `det rho = sech^2(beta Delta / 2) / 4 > 0`
//! and only the four-component, entangled purification survives. Quasistatic
//! evolution acts on the purified spinor as the rotation
//! `exp(-i R_i t Gamma_i)` with `Gamma_i = sigma_i (x) 1`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::matrix::{expm_i, kron, pauli_dot, ComplexMatrix, Sign};
use crate::purification::{DensityMatrix, PurifiedState};
use crate::{real, Real};

/// Bloch angles orienting the two-level field.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlochAngles<T> {
    pub theta: T,
    pub phi: T,
}

impl<T: Real> BlochAngles<T> {
    pub fn new(theta: T, phi: T) -> Result<Self> {
        if theta < T::zero() || theta > T::PI() {
            return Err(Error::Domain("polar angle theta must lie in [0, pi]".into()));
        }
        let two_pi = T::PI() + T::PI();
        if phi < T::zero() || phi >= two_pi {
            return Err(Error::Domain("azimuth phi must lie in [0, 2 pi)".into()));
        }
        Ok(Self { theta, phi })
    }

    pub fn unit_vector(&self) -> [T; 3] {
        [
            self.theta.sin() * self.phi.cos(),
            self.theta.sin() * self.phi.sin(),
            self.theta.cos(),
        ]
    }

    /// Upper level `|+R>` = (cos t/2, sin t/2 e^{i phi}).
    pub fn upper_level(&self) -> [Complex<T>; 2] {
        let half = self.theta / real(2.0);
        [
            Complex::new(half.cos(), T::zero()),
            Complex::from_polar(half.sin(), self.phi),
        ]
    }

    /// Lower level `|-R>` = (sin t/2, -cos t/2 e^{i phi}).
    pub fn lower_level(&self) -> [Complex<T>; 2] {
        let half = self.theta / real(2.0);
        [
            Complex::new(half.sin(), T::zero()),
            -Complex::from_polar(half.cos(), self.phi),
        ]
    }
}

/// The level gap convention `Delta = 2R`; kept in one place so the factor of
/// two cannot drift between the field-strength and gap parametrizations.
pub fn gap_from_field_strength<T: Real>(r: T) -> T {
    r + r
}

/// Fermi weight `n_f(x) = 1 / (exp(beta x) + 1)`.
pub fn fermi_weight<T: Real>(beta: T, x: T) -> T {
    T::one() / ((beta * x).exp() + T::one())
}

/// Spectral projectors `P_+- = (1 +- n.sigma) / 2`; each is idempotent,
/// mutually orthogonal, and has zero determinant.
pub fn projectors<T: Real>(angles: &BlochAngles<T>) -> (ComplexMatrix<T>, ComplexMatrix<T>) {
    let n = angles.unit_vector();
    let half = real::<T>(0.5);
    let ns = pauli_dot(n);
    let plus = ComplexMatrix::identity(2).add(&ns).scale_re(half);
    let minus = ComplexMatrix::identity(2).sub(&ns).scale_re(half);
    (plus, minus)
}

/// Four-component decomposition of a thermal two-level purification into the
/// product spinors `|W_+->` and their Fermi-weight coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinorDecomposition<T> {
    pub w_plus: PurifiedState<T>,
    pub w_minus: PurifiedState<T>,
    pub coeff_plus: T,
    pub coeff_minus: T,
}

impl<T: Real> SpinorDecomposition<T> {
    /// The full purified state `c_+ |W_+> + c_- |W_->`.
    pub fn state(&self) -> PurifiedState<T> {
        let vec = self
            .w_plus
            .vec()
            .iter()
            .zip(self.w_minus.vec())
            .map(|(p, m)| {
                p * Complex::new(self.coeff_plus, T::zero())
                    + m * Complex::new(self.coeff_minus, T::zero())
            })
            .collect();
        PurifiedState::from_vec(vec)
    }
}

/// Builds the product spinors `|W_+-> = |+-R> (x) |+-R>` and coefficients
/// `1/sqrt(e^{+-beta Delta} + 1)` for the thermal state at gap `Delta`.
pub fn spinor_decomposition<T: Real>(
    angles: &BlochAngles<T>,
    beta: T,
    delta: T,
) -> Result<SpinorDecomposition<T>> {
    if !(delta > T::zero()) && beta != T::zero() {
        return Err(Error::Domain("level gap Delta must be positive at finite beta".into()));
    }
    let upper = angles.upper_level();
    let lower = angles.lower_level();
    let product = |v: &[Complex<T>; 2]| {
        let mut vec = Vec::with_capacity(4);
        for a in 0..2 {
            for c in 0..2 {
                vec.push(v[a] * v[c]);
            }
        }
        PurifiedState::from_vec(vec)
    };
    Ok(SpinorDecomposition {
        w_plus: product(&upper),
        w_minus: product(&lower),
        coeff_plus: T::one() / ((beta * delta).exp() + T::one()).sqrt(),
        coeff_minus: T::one() / ((-beta * delta).exp() + T::one()).sqrt(),
    })
}

/// Quasistatic evolution as a spinor rotation:
/// `exp(-i R_i t Gamma_i) |psi>` with `Gamma_i = sigma_i (x) 1`.
pub fn gamma_rotate<T: Real>(
    psi: &PurifiedState<T>,
    r_vec: [T; 3],
    t: T,
) -> Result<PurifiedState<T>> {
    if psi.dim() != 4 {
        return Err(Error::DimMismatch { expected: 4, got: psi.dim() });
    }
    let generator = kron(&pauli_dot(r_vec), &ComplexMatrix::identity(2));
    let rotation = expm_i(&generator, t, Sign::Minus)?;
    psi.apply(&rotation)
}

/// Closed-form quasistatic overlap of the rotated spinor with the initial
/// one: `G = e^{-i w t} / (e^{beta Delta} + 1) + e^{i w t} / (e^{-beta Delta} + 1)`.
/// Reduces to `cos(w t)` at infinite temperature.
pub fn quasistatic_overlap_closed_form<T: Real>(
    beta: T,
    delta: T,
    omega: T,
    t: T,
) -> Complex<T> {
    let wt = omega * t;
    let weight_plus = T::one() / ((beta * delta).exp() + T::one());
    let weight_minus = T::one() / ((-beta * delta).exp() + T::one());
    Complex::from_polar(weight_plus, -wt) + Complex::from_polar(weight_minus, wt)
}

/// Determinant of a thermal two-level density matrix; equals
/// `sech^2(beta Delta / 2) / 4`, strictly positive for finite `beta`, which
/// is exactly why no two-component square root exists away from purity.
pub fn minkowski_norm_check<T: Real>(rho: &DensityMatrix<T>) -> Result<T> {
    if rho.dim() != 2 {
        return Err(Error::DimMismatch { expected: 2, got: rho.dim() });
    }
    Ok(rho.mat().det().re)
}
