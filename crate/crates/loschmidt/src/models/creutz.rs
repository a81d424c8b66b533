//! Periodic Creutz ladder as a thermal two-band system.
//!
//! In units `2K = 1` the Bloch Hamiltonian is `H_k = (Delta_k / 2) n_k .
//! sigma` with the planar unit vector `n_k` proportional to
//! `(m + cos k, 0, sin(Theta) sin k)` and gap parameter
//! `Delta_k = sqrt((m + cos k)^2 + sin^2(Theta) sin^2 k)`. The crystal
//! momentum doubles as the Uhlmann path parameter, so one Brillouin-zone
//! sweep is one cycle of the process.

use crate::error::{Error, Result};
use crate::matrix::{pauli_dot, ComplexMatrix};
use crate::purification::DensityMatrix;
use crate::uhlmann::DensityPath;
use crate::{real, Real};

/// Planar maps whose magnitude drops below this are treated as gapless.
pub const GAP_MIN: f64 = 1e-9;
/// Residual demanded of the critical-temperature loop-integral equation.
pub const CRITICAL_RESIDUAL: f64 = 1e-8;

/// Creutz-ladder parameters: `m = M / 2K`, magnetic flux `Theta`, and the
/// momentum-grid resolution used for loop integrals.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CreutzSpec<T> {
    pub m: T,
    pub theta_flux: T,
    pub k_points: usize,
}

impl<T: Real> CreutzSpec<T> {
    pub fn new(m: T, theta_flux: T, k_points: usize) -> Result<Self> {
        if m < T::zero() {
            return Err(Error::Domain("vertical hopping ratio m must be nonnegative".into()));
        }
        if theta_flux == T::zero() {
            return Err(Error::Domain(
                "flux Theta must be nonzero so the planar map has two components".into(),
            ));
        }
        let half_pi = T::PI() / real(2.0);
        if theta_flux < -half_pi || theta_flux > half_pi {
            return Err(Error::Domain("flux Theta must lie in [-pi/2, pi/2]".into()));
        }
        if k_points < 8 {
            return Err(Error::Domain("momentum grid needs at least 8 points".into()));
        }
        Ok(Self { m, theta_flux, k_points })
    }

    /// Gap parameter `Delta_k`.
    pub fn gap(&self, k: T) -> T {
        let u = self.m + k.cos();
        let v = self.theta_flux.sin() * k.sin();
        (u * u + v * v).sqrt()
    }

    /// Unnormalized planar components `(n^i, n^j) = (sin Theta sin k, m + cos k)`.
    pub fn plane_components(&self, k: T) -> (T, T) {
        (self.theta_flux.sin() * k.sin(), self.m + k.cos())
    }

    /// Unit Bloch vector `n_k` in the xz plane.
    pub fn unit_vector(&self, k: T) -> [T; 3] {
        let (ni, nj) = self.plane_components(k);
        let delta = self.gap(k);
        [nj / delta, T::zero(), ni / delta]
    }

    /// Bloch Hamiltonian `H_k = (Delta_k / 2) n_k . sigma`.
    pub fn hamiltonian(&self, k: T) -> ComplexMatrix<T> {
        let n = self.unit_vector(k);
        let half_gap = self.gap(k) / real(2.0);
        pauli_dot([n[0] * half_gap, n[1] * half_gap, n[2] * half_gap])
    }

    /// Thermal Bloch state `(1 - tanh(Delta_k / 2T) n_k . sigma) / 2`.
    pub fn density(&self, k: T, temperature: T) -> DensityMatrix<T> {
        DensityMatrix::thermal(&self.hamiltonian(k), T::one() / temperature)
            .expect("Bloch Hamiltonian is Hermitian")
    }

    /// Uhlmann path across the Brillouin zone, `s in [0,1] -> k in [-pi, pi]`.
    pub fn uhlmann_path(
        &self,
        temperature: T,
        n_steps: usize,
    ) -> DensityPath<T, impl Fn(T) -> DensityMatrix<T>> {
        let spec = *self;
        DensityPath::new(
            move |s: T| {
                let k = -T::PI() + (T::PI() + T::PI()) * s;
                spec.density(k, temperature)
            },
            n_steps,
            true,
        )
    }

    /// Winding number of the planar Bloch map.
    pub fn winding(&self) -> Result<i64> {
        let spec = *self;
        winding_number(move |k| spec.plane_components(k), self.k_points)
    }

    /// Angle speed `d theta_k / dk = sin(Theta) (1 + m cos k) / Delta_k^2`,
    /// exact for this map.
    pub fn angle_derivative(&self, k: T) -> T {
        let delta = self.gap(k);
        self.theta_flux.sin() * (T::one() + self.m * k.cos()) / (delta * delta)
    }

    /// `(1/2) closed-integral sech(Delta_k / 2T) d theta_k` over the zone.
    ///
    /// Uniform-k trapezoid of the smooth periodic integrand
    /// `theta'(k) sech(Delta_k / 2T)`, which converges spectrally; the exact
    /// angle derivative keeps the quadrature within holonomy accuracy.
    pub fn loop_integral(&self, temperature: T) -> Result<T> {
        let two_t = temperature + temperature;
        let n = self.k_points;
        let step = (T::PI() + T::PI()) / real(n as f64);
        let mut acc = T::zero();
        for j in 0..n {
            let k = -T::PI() + step * real(j as f64);
            let delta = self.gap(k);
            if delta < real(GAP_MIN) {
                return Err(Error::GaplessPath { min_norm: delta.to_f64().unwrap_or(f64::NAN) });
            }
            acc = acc + self.angle_derivative(k) / (delta / two_t).cosh();
        }
        Ok(acc * step / real(2.0))
    }
}

/// Unwrapped polar angles `theta_j = atan2(n^i, n^j)` of a planar map over
/// the closed grid `k_j = -pi + 2 pi j / n`, `j = 0..=n`, continued through
/// the nearest branch at every step.
fn unwrapped_angles<T: Real>(
    n_plane: impl Fn(T) -> (T, T),
    k_points: usize,
) -> Result<Vec<T>> {
    let n = k_points;
    let step = (T::PI() + T::PI()) / real(n as f64);
    let two_pi = T::PI() + T::PI();
    let mut thetas = Vec::with_capacity(n + 1);
    let mut prev_raw = T::zero();
    for j in 0..=n {
        let k = -T::PI() + step * real(j as f64);
        let (ni, nj) = n_plane(k);
        let mag = (ni * ni + nj * nj).sqrt();
        if mag < real(GAP_MIN) {
            return Err(Error::GaplessPath { min_norm: mag.to_f64().unwrap_or(f64::NAN) });
        }
        let raw = ni.atan2(nj);
        if j == 0 {
            thetas.push(raw);
        } else {
            let mut delta = raw - prev_raw;
            if delta > T::PI() {
                delta = delta - two_pi;
            } else if delta < -T::PI() {
                delta = delta + two_pi;
            }
            if delta.abs() >= real::<T>(0.9) * T::PI() {
                return Err(Error::GridTooCoarse {
                    step: delta.abs().to_f64().unwrap_or(f64::NAN),
                    index: j - 1,
                });
            }
            let last = *thetas.last().expect("nonempty");
            thetas.push(last + delta);
        }
        prev_raw = raw;
    }
    Ok(thetas)
}

/// Winding number `(1/2 pi) closed-integral d theta_k` of a planar map
/// sampled on `k_points` momenta; exact integer after rounding.
pub fn winding_number<T: Real>(
    n_plane: impl Fn(T) -> (T, T),
    k_points: usize,
) -> Result<i64> {
    let thetas = unwrapped_angles(n_plane, k_points)?;
    let total = *thetas.last().expect("nonempty") - thetas[0];
    let turns = total / (T::PI() + T::PI());
    let rounded = turns.round();
    let residue = (turns - rounded).abs();
    if residue > real(1e-6) {
        return Err(Error::Domain(format!(
            "winding number failed to quantize; residue {:e}",
            residue.to_f64().unwrap_or(f64::NAN)
        )));
    }
    Ok(rounded.to_i64().expect("small integer"))
}

/// Closed-form Uhlmann amplitude of a planar two-band system:
/// `G^U(T) = cos(pi w1) cos[(1/2) closed-integral sech(Delta_k/2T) d theta_k]`.
pub fn two_band_uhlmann_closed_form<T: Real>(spec: &CreutzSpec<T>, temperature: T) -> Result<T> {
    if !(temperature > T::zero()) {
        return Err(Error::Domain("temperature must be positive".into()));
    }
    let winding = spec.winding()?;
    let integral = spec.loop_integral(temperature)?;
    let w1_factor = if winding % 2 == 0 { T::one() } else { -T::one() };
    Ok(w1_factor * integral.cos())
}

/// Critical temperature of the finite-temperature transition: the `T*`
/// where the loop integral reaches `pi/2` and the amplitude vanishes.
/// Bisection over `[1e-3, 1e3]` (units `2K = 1`) with up to two tenfold
/// bracket expansions; `None` when no sign change exists (trivial winding).
pub fn creutz_critical_temperature<T: Real>(spec: &CreutzSpec<T>) -> Result<Option<T>> {
    let target = T::PI() / real(2.0);
    let objective = |t: T| -> Result<T> { Ok(spec.loop_integral(t)?.abs() - target) };
    let mut lo = real::<T>(1e-3);
    let mut hi = real::<T>(1e3);
    for _ in 0..=2 {
        let f_lo = objective(lo)?;
        let f_hi = objective(hi)?;
        if f_lo * f_hi <= T::zero() {
            return Ok(Some(bisect_to_residual(&objective, lo, hi)?));
        }
        lo = lo / real(10.0);
        hi = hi * real(10.0);
    }
    Ok(None)
}

fn bisect_to_residual<T: Real>(
    objective: &impl Fn(T) -> Result<T>,
    mut lo: T,
    mut hi: T,
) -> Result<T> {
    let mut f_lo = objective(lo)?;
    let residual = real::<T>(CRITICAL_RESIDUAL);
    for _ in 0..200 {
        let mid = (lo + hi) / real(2.0);
        let f_mid = objective(mid)?;
        if f_mid.abs() < residual {
            return Ok(mid);
        }
        if f_lo * f_mid <= T::zero() {
            hi = mid;
        } else {
            lo = mid;
            f_lo = f_mid;
        }
    }
    Ok((lo + hi) / real(2.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::uhlmann::uhlmann_loschmidt;
    use std::f64::consts::PI;

    #[test]
    fn winding_of_unit_circle_map() {
        let w = winding_number(|k: f64| (k.sin(), k.cos()), 256).unwrap();
        assert_eq!(w, 1);
    }

    #[test]
    fn winding_jumps_at_m_equal_one() {
        for theta in [PI / 3.0, PI / 8.0] {
            let topological = CreutzSpec::new(0.5, theta, 1024).unwrap();
            assert_eq!(topological.winding().unwrap(), 1, "Theta = {theta}");
            let trivial = CreutzSpec::new(1.5, theta, 1024).unwrap();
            assert_eq!(trivial.winding().unwrap(), 0, "Theta = {theta}");
        }
    }

    #[test]
    fn winding_is_grid_invariant() {
        for n in [256, 1024, 4096] {
            let spec = CreutzSpec::new(0.5, PI / 3.0, n).unwrap();
            assert_eq!(spec.winding().unwrap(), 1, "n = {n}");
        }
    }

    #[test]
    fn winding_rejects_gapless_map() {
        let spec = CreutzSpec::new(1.0, PI / 3.0, 1024).unwrap();
        // k = -pi sits on the grid, where m + cos k = 0 and sin k = 0
        assert!(matches!(spec.winding(), Err(Error::GaplessPath { .. })));
    }

    #[test]
    fn gap_closes_only_at_m_equal_one() {
        for (m, expect_gapless) in [(0.9, false), (1.0, true), (1.1, false)] {
            let spec = CreutzSpec::new(m, PI / 3.0, 4096).unwrap();
            let mut min_gap = f64::INFINITY;
            for j in 0..4096 {
                let k = -PI + 2.0 * PI * j as f64 / 4096.0;
                min_gap = min_gap.min(spec.gap(k));
            }
            if expect_gapless {
                assert!(min_gap < 1e-9, "m = {m}: min gap {min_gap}");
            } else {
                assert!(min_gap > 1e-3, "m = {m}: min gap {min_gap}");
            }
        }
    }

    #[test]
    fn closed_form_low_temperature_limit_is_winding_cosine() {
        let topological = CreutzSpec::new(0.5, PI / 3.0, 1024).unwrap();
        let g = two_band_uhlmann_closed_form(&topological, 1e-4).unwrap();
        assert!((g + 1.0).abs() < 1e-12);
        let trivial = CreutzSpec::new(1.5, PI / 3.0, 1024).unwrap();
        let g = two_band_uhlmann_closed_form(&trivial, 1e-4).unwrap();
        assert!((g - 1.0).abs() < 1e-12);
    }

    #[test]
    fn critical_temperature_zeroes_the_closed_form() {
        let spec = CreutzSpec::new(0.5, PI / 3.0, 1024).unwrap();
        let t_star = creutz_critical_temperature(&spec).unwrap().expect("winding-1 branch");
        assert!(t_star > 0.0 && t_star.is_finite());
        let residual = (spec.loop_integral(t_star).unwrap() - PI / 2.0).abs();
        assert!(residual < 1e-8, "loop-integral residual {residual}");
        let g = two_band_uhlmann_closed_form(&spec, t_star).unwrap();
        assert!(g.abs() < 1e-6, "G^U(T*) = {g}");
        // phase flips pi -> 0 across T*
        let below = two_band_uhlmann_closed_form(&spec, t_star * 0.9).unwrap();
        let above = two_band_uhlmann_closed_form(&spec, t_star * 1.1).unwrap();
        assert!(below < 0.0 && above > 0.0);
    }

    #[test]
    fn different_fluxes_have_different_critical_sheets() {
        let a = CreutzSpec::new(0.5, PI / 3.0, 1024).unwrap();
        let b = CreutzSpec::new(0.5, PI / 8.0, 1024).unwrap();
        let ta = creutz_critical_temperature(&a).unwrap().unwrap();
        let tb = creutz_critical_temperature(&b).unwrap().unwrap();
        assert!((ta - tb).abs() > 1e-3, "T* sheets coincide: {ta} vs {tb}");
    }

    #[test]
    fn trivial_winding_has_no_critical_temperature() {
        let spec = CreutzSpec::new(1.5, PI / 3.0, 512).unwrap();
        assert_eq!(creutz_critical_temperature(&spec).unwrap(), None);
        // dense scan: the closed form never changes sign
        for j in 0..400 {
            let t = 0.01 * (100.0f64 / 0.01).powf(j as f64 / 399.0);
            let g = two_band_uhlmann_closed_form(&spec, t).unwrap();
            assert!(g > 0.0, "sign change at T = {t}");
        }
    }

    #[test]
    fn closed_form_matches_holonomy() {
        let spec = CreutzSpec::new(0.5, PI / 3.0, 1024).unwrap();
        for &t in &[0.3, 0.45, 0.8] {
            let closed = two_band_uhlmann_closed_form(&spec, t).unwrap();
            let numeric = uhlmann_loschmidt(&spec.uhlmann_path(t, 1024)).unwrap();
            assert!(
                (numeric.re - closed).abs() < 1e-6 && numeric.im.abs() < 1e-6,
                "T = {t}: numeric {numeric} vs closed {closed}"
            );
        }
    }

    #[test]
    fn low_temperature_holonomy_approaches_winding_cosine() {
        // the full-rank gate bounds T from below through exp(-Delta_max / T),
        // so the numeric route reaches cos(pi w1) only up to thermal tails
        let spec = CreutzSpec::new(0.5, PI / 3.0, 1024).unwrap();
        let g = uhlmann_loschmidt(&spec.uhlmann_path(0.08, 1024)).unwrap();
        assert!((g.re + 1.0).abs() < 1e-2 && g.im.abs() < 1e-6, "G = {g}");
    }

    #[test]
    fn spec_validation() {
        assert!(CreutzSpec::new(0.5, 0.0, 256).is_err());
        assert!(CreutzSpec::new(-0.1, PI / 3.0, 256).is_err());
        assert!(CreutzSpec::new(0.5, PI, 256).is_err());
        assert!(CreutzSpec::new(0.5, PI / 3.0, 4).is_err());
    }
}
