//! Three-level system: a two-level block stacked on a spectator level.
//!
//! The initial Hamiltonian is `R diag(1, -1, 1)`; the quench tilts the upper
//! block to `R n(theta, phi) . sigma` while the third level stays at `+R`.
//! Unlike the two-level case, both the quasistatic and the quench Loschmidt
//! amplitudes of this model vanish at finite temperature, and the Uhlmann
//! process over the equatorial `phi` circle has a finite-temperature
//! transition of its own.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::purification::DensityMatrix;
use crate::uhlmann::DensityPath;
use crate::{real, Real};

/// Parameters of the three-level model. `theta`, `phi` orient the quench
/// field; `beta` is the inverse temperature of the initial thermal state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThreeLevelSpec<T> {
    pub r: T,
    pub theta: T,
    pub phi: T,
    pub beta: T,
}

impl<T: Real> ThreeLevelSpec<T> {
    pub fn new(r: T, theta: T, phi: T, beta: T) -> Result<Self> {
        if !(r > T::zero()) {
            return Err(Error::Domain("level splitting R must be positive".into()));
        }
        if theta < T::zero() || theta >= T::PI() {
            return Err(Error::Domain("polar angle theta must lie in [0, pi)".into()));
        }
        if beta < T::zero() {
            return Err(Error::Domain("inverse temperature must be nonnegative".into()));
        }
        Ok(Self { r, theta, phi, beta })
    }

    pub fn initial_hamiltonian(&self) -> ComplexMatrix<T> {
        three_level_initial_hamiltonian(self.r)
    }

    pub fn quench_hamiltonian(&self) -> ComplexMatrix<T> {
        three_level_quench_hamiltonian(self.r, self.theta, self.phi)
    }

    /// Thermal state of the initial Hamiltonian,
    /// `diag(e^{-beta R}, e^{beta R}, e^{-beta R}) / Z`.
    pub fn initial_density(&self) -> DensityMatrix<T> {
        DensityMatrix::thermal(&self.initial_hamiltonian(), self.beta)
            .expect("diagonal Hamiltonian is Hermitian")
    }

    /// Partition function `Z(0) = 2 e^{-beta R} + e^{beta R}`.
    pub fn partition_function(&self) -> T {
        let x = self.beta * self.r;
        real::<T>(2.0) * (-x).exp() + x.exp()
    }
}

/// `R diag(1, -1, 1)`.
pub fn three_level_initial_hamiltonian<T: Real>(r: T) -> ComplexMatrix<T> {
    ComplexMatrix::from_real_diagonal(&[r, -r, r])
}

/// Quenched Hamiltonian: `R n(theta, phi) . sigma` in the upper block, `R`
/// on the spectator level.
pub fn three_level_quench_hamiltonian<T: Real>(r: T, theta: T, phi: T) -> ComplexMatrix<T> {
    let mut h = ComplexMatrix::zeros(3);
    let (ct, st) = (theta.cos(), theta.sin());
    h[(0, 0)] = Complex::new(r * ct, T::zero());
    h[(1, 1)] = Complex::new(-r * ct, T::zero());
    h[(0, 1)] = Complex::from_polar(r * st, -phi);
    h[(1, 0)] = Complex::from_polar(r * st, phi);
    h[(2, 2)] = Complex::new(r, T::zero());
    h
}

/// Quasistatic amplitude
/// `G = [(2 e^{-bR} + e^{bR}) cos(wt) - i (2 e^{-bR} - e^{bR}) sin(wt)] / Z`.
/// Vanishes at `t* = (n + 1/2) pi / w` once `beta = ln(2) / 2R`.
pub fn three_level_quasistatic_g<T: Real>(spec: &ThreeLevelSpec<T>, t: T) -> Complex<T> {
    let x = spec.beta * spec.r;
    let z = spec.partition_function();
    let wt = spec.r * t;
    let re = (real::<T>(2.0) * (-x).exp() + x.exp()) * wt.cos();
    let im = -(real::<T>(2.0) * (-x).exp() - x.exp()) * wt.sin();
    Complex::new(re / z, im / z)
}

/// Quench amplitude
/// `G = [cos(wt) (2 e^{-bR} + e^{bR}) + i sin(wt) ((-1 - cos t) e^{-bR} + cos t e^{bR})] / Z`;
/// its zeros sit at `beta = ln(1 + sec theta) / 2R`.
pub fn three_level_quench_g<T: Real>(spec: &ThreeLevelSpec<T>, t: T) -> Complex<T> {
    let x = spec.beta * spec.r;
    let z = spec.partition_function();
    let wt = spec.r * t;
    let ct = spec.theta.cos();
    let re = (real::<T>(2.0) * (-x).exp() + x.exp()) * wt.cos();
    let im = ((-T::one() - ct) * (-x).exp() + ct * x.exp()) * wt.sin();
    Complex::new(re / z, im / z)
}

/// Uhlmann path of the three-level system: the equatorial circle
/// `theta = pi/2`, `phi = 2 pi s`, at fixed inverse temperature.
pub fn three_level_uhlmann_path<T: Real>(
    r: T,
    beta: T,
    n_steps: usize,
) -> DensityPath<T, impl Fn(T) -> DensityMatrix<T>> {
    DensityPath::new(
        move |s: T| {
            let phi = (T::PI() + T::PI()) * s;
            let h = three_level_quench_hamiltonian(r, T::PI() / real(2.0), phi);
            DensityMatrix::thermal(&h, beta).expect("quench Hamiltonian is Hermitian")
        },
        n_steps,
        true,
    )
}

/// Closed-form Uhlmann amplitude of the equatorial circle:
/// `G^U = [-2 cosh(bR) cos(pi / cosh(bR)) + e^{-bR}] / Z(0)`.
pub fn three_level_uhlmann_closed_form<T: Real>(r: T, beta: T) -> T {
    let x = beta * r;
    let z = real::<T>(2.0) * x.cosh() + (-x).exp();
    (-real::<T>(2.0) * x.cosh() * (T::PI() / x.cosh()).cos() + (-x).exp()) / z
}

/// Critical temperature of the three-level Uhlmann process: the unique root
/// of the closed form, near `0.7338 R`. Bisection to residual `1e-10`.
pub fn three_level_uhlmann_tstar<T: Real>(r: T) -> T {
    let objective = |t: T| three_level_uhlmann_closed_form(r, T::one() / t);
    // G^U -> -1 as T -> 0 and -> +1 as T -> infinity
    let mut lo = real::<T>(1e-3) * r;
    let mut hi = real::<T>(1e3) * r;
    let residual = real::<T>(1e-10);
    for _ in 0..300 {
        let mid = (lo + hi) / real(2.0);
        let f = objective(mid);
        if f.abs() < residual {
            return mid;
        }
        if f < T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo + hi) / real(2.0)
}

/// Process selector for the analytic critical temperatures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CriticalKind {
    ThreeLevelQuasistatic,
    ThreeLevelQuench,
}

/// Analytic critical temperatures: `T_q = 2R / ln 2` for the quasistatic
/// process, `T_h = 2R / ln(1 + sec theta)` for the quench (`theta` in
/// `[0, pi/2)`; beyond it the would-be temperature turns negative).
pub fn critical_temperature_analytic<T: Real>(
    kind: CriticalKind,
    r: T,
    theta: T,
) -> Result<T> {
    let two_r = r + r;
    match kind {
        CriticalKind::ThreeLevelQuasistatic => Ok(two_r / real::<T>(2.0).ln()),
        CriticalKind::ThreeLevelQuench => {
            let half_pi = T::PI() / real(2.0);
            if theta < T::zero() || theta >= half_pi {
                return Err(Error::Domain(
                    "quench critical temperature needs theta in [0, pi/2)".into(),
                ));
            }
            let sec = T::one() / theta.cos();
            Ok(two_r / (T::one() + sec).ln())
        }
    }
}
