//! Dynamical processes and the Loschmidt amplitude.
//!
//! Both processes treated here evolve the amplitude by the unitary
//! `exp(-i H t)` (`hbar = 1`): in a quasistatic process `[rho, H] = 0` and
//! the density matrix is frozen while the amplitude rotates; in a quench the
//! Hamiltonian switches at `t = 0+` and `[rho(t), H_f] != 0`. The overlap of
//! the initial and evolved purifications,
//! `G(t) = <W(0)|W(t)> = Tr(rho(0) exp(-i H t))`, is the Loschmidt
//! amplitude; its argument is the dynamical phase, its squared modulus the
//! Loschmidt echo, and `-ln|G|^2 / L` the dynamical free-energy density
//! whose divergences mark the amplitude's zeros.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::matrix::{expm_i, ComplexMatrix, Sign};
use crate::purification::{Amplitude, DensityMatrix};
use crate::{real, Real};

/// `|G|` below this leaves the phase undefined.
pub const PHASE_ZERO_TOL: f64 = 1e-10;
/// Cap on rate functions; `|G|^2 = exp(-80)` is far below any grid noise.
/// Values at the cap are flagged divergent.
pub const RATE_CAP: f64 = 80.0;
/// Grid minima of `|G|` below this are candidate zeros worth refining.
pub const ZERO_SCAN_THRESHOLD: f64 = 1e-3;
/// Refined minima below this count as genuine zeros.
pub const ZERO_REFINED_TOL: f64 = 1e-8;

/// Commutator gate for declaring a process quasistatic.
pub const QUASISTATIC_COMMUTATOR_TOL: f64 = 1e-10;

/// Evolution protocol: the Hamiltonian driving `exp(-i H t)`, tagged by
/// whether it commutes with the initial state.
#[derive(Clone, Debug)]
pub enum ProcessKind<T> {
    Quasistatic { hamiltonian: ComplexMatrix<T> },
    Quench { hamiltonian: ComplexMatrix<T> },
}

impl<T: Real> ProcessKind<T> {
    /// Declares a quasistatic process, verifying `[rho0, H] = 0`.
    pub fn quasistatic(hamiltonian: ComplexMatrix<T>, rho0: &DensityMatrix<T>) -> Result<Self> {
        let comm = rho0
            .mat()
            .matmul(&hamiltonian)
            .sub(&hamiltonian.matmul(rho0.mat()));
        let dev = comm.max_abs();
        if dev > real(QUASISTATIC_COMMUTATOR_TOL) {
            return Err(Error::Domain(format!(
                "[rho, H] deviates from zero by {:e}; not a quasistatic process",
                dev.to_f64().unwrap_or(f64::NAN)
            )));
        }
        Ok(ProcessKind::Quasistatic { hamiltonian })
    }

    pub fn quench(hamiltonian: ComplexMatrix<T>) -> Self {
        ProcessKind::Quench { hamiltonian }
    }

    pub fn hamiltonian(&self) -> &ComplexMatrix<T> {
        match self {
            ProcessKind::Quasistatic { hamiltonian } | ProcessKind::Quench { hamiltonian } => {
                hamiltonian
            }
        }
    }
}

/// `W(t) = exp(-i H t) W(0)`; the gauge picks up the same unitary.
pub fn evolve_amplitude<T: Real>(
    w0: &Amplitude<T>,
    h: &ComplexMatrix<T>,
    t: T,
) -> Result<Amplitude<T>> {
    if h.dim() != w0.dim() {
        return Err(Error::DimMismatch { expected: w0.dim(), got: h.dim() });
    }
    let u = expm_i(h, t, Sign::Minus)?;
    Ok(Amplitude::new_unchecked(u.matmul(w0.mat()), u.matmul(w0.gauge())))
}

/// Loschmidt amplitude `G(t) = Tr(rho0 exp(-i H t))`.
pub fn loschmidt_amplitude<T: Real>(
    rho0: &DensityMatrix<T>,
    h: &ComplexMatrix<T>,
    t: T,
) -> Result<Complex<T>> {
    if h.dim() != rho0.dim() {
        return Err(Error::DimMismatch { expected: rho0.dim(), got: h.dim() });
    }
    let u = expm_i(h, t, Sign::Minus)?;
    Ok(rho0.mat().matmul(&u).trace())
}

/// Principal argument in `(-pi, pi]`: negative reals map to `+pi`.
pub(crate) fn principal_arg<T: Real>(g: Complex<T>) -> T {
    let a = g.im.atan2(g.re);
    if a <= -T::PI() {
        T::PI()
    } else {
        a
    }
}

/// Dynamical phase `arg G`, or `None` where `|G| <= zero_tol` leaves it
/// ill-defined.
pub fn dynamical_phase<T: Real>(g: Complex<T>, zero_tol: T) -> Option<T> {
    if g.norm() <= zero_tol {
        None
    } else {
        Some(principal_arg(g))
    }
}

/// Dynamical free-energy density `-ln|G|^2 / L`, capped at [`RATE_CAP`].
pub fn free_energy_density<T: Real>(g: Complex<T>, system_size: usize) -> T {
    let cap = real::<T>(RATE_CAP);
    let echo = g.norm_sqr();
    if echo <= T::zero() {
        return cap;
    }
    let f = -echo.ln() / real(system_size as f64);
    if f >= cap {
        cap
    } else {
        f
    }
}

/// One record of the Loschmidt amplitude along a time sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct LoschmidtSample<T> {
    pub t: T,
    pub g: Complex<T>,
    pub echo: T,
    pub theta_d: Option<T>,
    pub f: T,
}

impl<T: Real> LoschmidtSample<T> {
    pub fn compute(t: T, g: Complex<T>, system_size: usize) -> Self {
        Self {
            t,
            g,
            echo: g.norm_sqr(),
            theta_d: dynamical_phase(g, real(PHASE_ZERO_TOL)),
            f: free_energy_density(g, system_size),
        }
    }
}

/// Unwrapped phase along a sampled amplitude curve: accumulates principal
/// increments instead of jumping between branches. Intended for plotting.
pub fn continuous_phase<T: Real>(gs: &[Complex<T>]) -> Vec<T> {
    let mut out = Vec::with_capacity(gs.len());
    if gs.is_empty() {
        return out;
    }
    let two_pi = T::PI() + T::PI();
    let mut acc = principal_arg(gs[0]);
    out.push(acc);
    for k in 1..gs.len() {
        let mut delta = principal_arg(gs[k]) - principal_arg(gs[k - 1]);
        if delta > T::PI() {
            delta = delta - two_pi;
        } else if delta < -T::PI() {
            delta = delta + two_pi;
        }
        acc = acc + delta;
        out.push(acc);
    }
    out
}

/// Local minimum of `|G(t)|` found below [`ZERO_SCAN_THRESHOLD`] and then
/// refined; `magnitude < ZERO_REFINED_TOL` marks a genuine zero, otherwise
/// the record is a near miss kept for diagnostics.
#[derive(Clone, Debug, PartialEq)]
pub struct AmplitudeMinimum<T> {
    pub t: T,
    pub magnitude: T,
}

impl<T: Real> AmplitudeMinimum<T> {
    pub fn is_zero(&self) -> bool {
        self.magnitude < real(ZERO_REFINED_TOL)
    }
}

/// Scans `|G(t)|` on a uniform grid over `[t_min, t_max]`, then refines each
/// interior local minimum below [`ZERO_SCAN_THRESHOLD`] by golden-section
/// search.
pub fn find_zero_times<T: Real>(
    rho0: &DensityMatrix<T>,
    h: &ComplexMatrix<T>,
    t_min: T,
    t_max: T,
    n_grid: usize,
) -> Result<Vec<AmplitudeMinimum<T>>> {
    if !(t_min < t_max) {
        return Err(Error::Domain("time window must satisfy t_min < t_max".into()));
    }
    if n_grid < 16 {
        return Err(Error::Domain("zero scan needs at least 16 grid points".into()));
    }
    // diagonalize once; each grid point is then a cheap spectral sum
    let eig = crate::matrix::eig_hermitian(h)?;
    if h.dim() != rho0.dim() {
        return Err(Error::DimMismatch { expected: rho0.dim(), got: h.dim() });
    }
    let d = h.dim();
    // weights c_k = <k| rho0 |k> so that G(t) = sum_k c_k exp(-i lambda_k t)
    let v = &eig.vectors;
    let mut weights = vec![Complex::new(T::zero(), T::zero()); d];
    for k in 0..d {
        let col: Vec<Complex<T>> = (0..d).map(|i| v[(i, k)]).collect();
        let rho_col = rho0.mat().mul_vec(&col);
        let mut acc = Complex::new(T::zero(), T::zero());
        for i in 0..d {
            acc = acc + col[i].conj() * rho_col[i];
        }
        weights[k] = acc;
    }
    let g_mag = |t: T| -> T {
        let mut g = Complex::new(T::zero(), T::zero());
        for k in 0..d {
            g = g + weights[k] * Complex::from_polar(T::one(), -eig.values[k] * t);
        }
        g.norm()
    };

    let n = n_grid;
    let step = (t_max - t_min) / real((n - 1) as f64);
    let ts: Vec<T> = (0..n).map(|i| t_min + step * real(i as f64)).collect();
    let mags: Vec<T> = ts.iter().map(|&t| g_mag(t)).collect();

    // refine every interior local minimum; only those that refine below the
    // threshold are worth reporting
    let threshold = real::<T>(ZERO_SCAN_THRESHOLD);
    let mut minima = Vec::new();
    for i in 1..n - 1 {
        if mags[i] <= mags[i - 1] && mags[i] <= mags[i + 1] {
            let (t_star, mag) = golden_section_min(&g_mag, ts[i - 1], ts[i + 1]);
            if mag < threshold {
                minima.push(AmplitudeMinimum { t: t_star, magnitude: mag });
            }
        }
    }
    Ok(minima)
}

/// Golden-section minimization on a bracketing interval.
fn golden_section_min<T: Real>(f: &impl Fn(T) -> T, mut a: T, mut b: T) -> (T, T) {
    let inv_phi = real::<T>(0.618_033_988_749_894_9);
    let tol = real::<T>(1e-13) * (T::one() + a.abs().max(b.abs()));
    let mut c = b - (b - a) * inv_phi;
    let mut d = a + (b - a) * inv_phi;
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..200 {
        if (b - a).abs() < tol {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - (b - a) * inv_phi;
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + (b - a) * inv_phi;
            fd = f(d);
        }
    }
    let mid = (a + b) / real(2.0);
    (mid, f(mid))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{pauli_dot, ComplexMatrix};
    use crate::purification::{amplitude_from_density, purify};
    use crate::C64;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn thermal_two_level(beta: f64, r: [f64; 3]) -> DensityMatrix<f64> {
        DensityMatrix::thermal(&pauli_dot(r), beta).unwrap()
    }

    #[test]
    fn evolve_at_zero_time_is_identity() {
        let rho = thermal_two_level(0.8, [0.0, 0.0, 1.0]);
        let w0 = amplitude_from_density(&rho, None).unwrap();
        let w = evolve_amplitude(&w0, &pauli_dot([0.0, 0.0, 1.0]), 0.0).unwrap();
        assert!(w.mat().max_abs_diff(w0.mat()) < 1e-14);
    }

    #[test]
    fn quasistatic_density_is_frozen() {
        let h = pauli_dot([0.6, -0.3, 1.1]);
        let rho = DensityMatrix::thermal(&h, 0.7).unwrap();
        let w0 = amplitude_from_density(&rho, None).unwrap();
        let w = evolve_amplitude(&w0, &h, 2.31).unwrap();
        let evolved_density = w.mat().matmul(&w.mat().adjoint());
        assert!(evolved_density.max_abs_diff(rho.mat()) < 1e-12);
    }

    #[test]
    fn evolution_conjugates_density_in_quench() {
        let h = pauli_dot([1.0, 0.0, 0.0]);
        let rho = thermal_two_level(0.9, [0.0, 0.0, 1.0]);
        let w0 = amplitude_from_density(&rho, None).unwrap();
        let t = 0.77;
        let w = evolve_amplitude(&w0, &h, t).unwrap();
        let u = expm_i(&h, t, Sign::Minus).unwrap();
        let expected = u.matmul(rho.mat()).matmul(&u.adjoint());
        let got = w.mat().matmul(&w.mat().adjoint());
        assert!(got.max_abs_diff(&expected) < 1e-10);
    }

    #[test]
    fn purified_picture_of_quasistatic_evolution() {
        let h = pauli_dot([0.0, 0.0, 1.4]);
        let rho = thermal_two_level(0.5, [0.0, 0.0, 1.4]);
        let w0 = amplitude_from_density(&rho, None).unwrap();
        let t = 1.9;
        let lhs = purify(&evolve_amplitude(&w0, &h, t).unwrap());
        let u = expm_i(&h, t, Sign::Minus).unwrap();
        let rhs = purify(&w0)
            .apply(&crate::matrix::kron(&u, &ComplexMatrix::identity(2)))
            .unwrap();
        for k in 0..4 {
            assert!((lhs.vec()[k] - rhs.vec()[k]).norm() < 1e-12);
        }
    }

    #[test]
    fn quasistatic_gate_rejects_noncommuting_pair() {
        let rho = thermal_two_level(1.0, [0.0, 0.0, 1.0]);
        assert!(ProcessKind::quasistatic(pauli_dot([0.0, 0.0, 2.0]), &rho).is_ok());
        assert!(ProcessKind::quasistatic(pauli_dot([1.0, 0.0, 0.0]), &rho).is_err());
    }

    #[test]
    fn two_level_quasistatic_amplitude_closed_form() {
        // G = cos(wt) + i sin(wt) tanh(beta R), w = R
        let (beta, r): (f64, f64) = (0.8, 1.3);
        let h = pauli_dot([0.0, 0.0, r]);
        let rho = DensityMatrix::thermal(&h, beta).unwrap();
        for &t in &[0.0, 0.4, 1.9, 5.3] {
            let g = loschmidt_amplitude(&rho, &h, t).unwrap();
            let expected = C64::new((r * t).cos(), (r * t).sin() * (beta * r).tanh());
            assert!((g - expected).norm() < 1e-12, "t = {t}");
        }
    }

    #[test]
    fn two_level_orthogonal_quench_has_zero() {
        // rho0 Bloch vector orthogonal to the quench field: G(pi/2w) = 0
        let r0 = [0.7, 0.0, 0.0];
        let rho0 = DensityMatrix::new(
            ComplexMatrix::identity(2).add(&pauli_dot(r0)).scale_re(0.5),
        )
        .unwrap();
        let h = pauli_dot([0.0, 0.0, 2.0]);
        let g = loschmidt_amplitude(&rho0, &h, FRAC_PI_2 / 2.0).unwrap();
        assert!(g.norm() < 1e-12);
    }

    #[test]
    fn amplitude_normalization_and_bound() {
        let rho = thermal_two_level(0.6, [0.3, 0.2, 0.9]);
        let h = pauli_dot([1.0, -0.5, 0.2]);
        let g0 = loschmidt_amplitude(&rho, &h, 0.0).unwrap();
        assert!((g0 - C64::new(1.0, 0.0)).norm() < 1e-13);
        for k in 0..60 {
            let g = loschmidt_amplitude(&rho, &h, 0.17 * k as f64).unwrap();
            assert!(g.norm() <= 1.0 + 1e-10);
        }
    }

    #[test]
    fn dynamical_phase_values() {
        assert_eq!(dynamical_phase(C64::new(1.0, 0.0), 1e-10), Some(0.0));
        let quarter = dynamical_phase(C64::new(0.0, 0.5), 1e-10).unwrap();
        assert!((quarter - FRAC_PI_2).abs() < 1e-15);
        assert_eq!(dynamical_phase(C64::new(0.0, 0.0), 1e-10), None);
        // negative reals sit on the +pi branch
        assert_eq!(dynamical_phase(C64::new(-0.3, 0.0), 1e-10), Some(PI));
        assert_eq!(dynamical_phase(C64::new(-0.3, -0.0), 1e-10), Some(PI));
    }

    #[test]
    fn quasistatic_phase_at_resonant_time_is_quantized() {
        // at t* = (n + 1/2) pi / w the amplitude is purely imaginary with
        // sign (-1)^n, for any finite temperature
        let r = 1.0;
        let h = pauli_dot([0.0, 0.0, r]);
        let rho = DensityMatrix::thermal(&h, 1e-3).unwrap();
        for n in 0..4 {
            let t_star = (n as f64 + 0.5) * PI / r;
            let g = loschmidt_amplitude(&rho, &h, t_star).unwrap();
            let theta = dynamical_phase(g, 1e-10).unwrap();
            let expected = if n % 2 == 0 { FRAC_PI_2 } else { -FRAC_PI_2 };
            assert!((theta - expected).abs() < 1e-9, "n = {n}");
        }
    }

    #[test]
    fn infinite_temperature_phase_is_quantized_off_resonance() {
        // beta = 0 makes G = cos(wt) exactly real: phase 0 inside the first
        // quarter period, exactly pi between pi/2 and 3pi/2
        let h = pauli_dot([0.0, 0.0, 1.0]);
        let rho = DensityMatrix::maximally_mixed(2);
        for (t, expected) in [(0.3, 0.0), (1.0, 0.0), (2.0, PI), (3.0, PI), (4.0, PI)] {
            let g = loschmidt_amplitude(&rho, &h, t).unwrap();
            let theta = dynamical_phase(g, 1e-10).unwrap();
            assert_eq!(theta, expected, "t = {t}");
        }
    }

    #[test]
    fn free_energy_density_values() {
        assert_eq!(free_energy_density(C64::new(1.0, 0.0), 1), 0.0);
        let f = free_energy_density(C64::new((-0.5f64).exp(), 0.0), 1);
        assert!((f - 1.0).abs() < 1e-12);
        assert_eq!(free_energy_density(C64::new(0.0, 0.0), 1), RATE_CAP);
        // L rescales
        let f2 = free_energy_density(C64::new((-0.5f64).exp(), 0.0), 2);
        assert!((f2 - 0.5).abs() < 1e-12);
    }

    #[test]
    fn echo_consistency() {
        let g = C64::new(0.3, -0.4);
        let sample = LoschmidtSample::compute(1.0, g, 1);
        assert!((sample.echo - (g * g.conj()).re).abs() < 1e-14);
        assert!(sample.echo <= 1.0 + 1e-10);
    }

    #[test]
    fn zeros_of_infinite_temperature_two_level() {
        // beta = 0, w = 1: zeros at (n + 1/2) pi inside [0, 10]
        let h = pauli_dot([0.0, 0.0, 1.0]);
        let rho = DensityMatrix::maximally_mixed(2);
        let minima = find_zero_times(&rho, &h, 0.0, 10.0, 256).unwrap();
        let zeros: Vec<f64> = minima.iter().filter(|m| m.is_zero()).map(|m| m.t).collect();
        let expected = [0.5 * PI, 1.5 * PI, 2.5 * PI];
        assert_eq!(zeros.len(), expected.len());
        for (z, e) in zeros.iter().zip(expected) {
            assert!((z - e).abs() < 1e-8, "zero at {z}, expected {e}");
        }
    }

    #[test]
    fn finite_temperature_two_level_has_no_zeros() {
        let h = pauli_dot([0.0, 0.0, 1.0]);
        let rho = DensityMatrix::thermal(&h, 0.5).unwrap();
        let minima = find_zero_times(&rho, &h, 0.0, 10.0, 256).unwrap();
        assert!(minima.is_empty(), "expected no candidate zeros, got {minima:?}");
        // the true minima are bounded away from zero by tanh(beta R)
        for k in 0..200 {
            let g = loschmidt_amplitude(&rho, &h, 0.05 * k as f64).unwrap();
            assert!(g.norm() >= 0.5f64.tanh() - 1e-12);
        }
    }

    #[test]
    fn continuous_phase_accumulates() {
        let gs: Vec<C64> = (0..100)
            .map(|k| C64::from_polar(1.0, 0.2 * k as f64))
            .collect();
        let phases = continuous_phase(&gs);
        assert!((phases[99] - 0.2 * 99.0).abs() < 1e-12);
    }
}
