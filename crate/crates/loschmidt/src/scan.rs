//! Grid scans over parameter planes and critical-set detection.
//!
//! A scan evaluates an amplitude function over a rectangular grid (one or
//! two axes) and records, per cell, the complex amplitude, the echo, the
//! principal phase where defined, and the capped rate function. Uhlmann
//! scans additionally refine the zero crossings of the (real) amplitude
//! along the temperature axis into critical points, and phase-jump
//! detection pairs those criticals with the `pi` jumps of the phase column.
//! Cells are evaluated independently (in parallel) and assembled by index,
//! so results are deterministic regardless of scheduling.

use num_complex::Complex;
use rayon::prelude::*;

use crate::dynamics::{dynamical_phase, RATE_CAP};
use crate::error::{Error, Result};
use crate::uhlmann::snap_phase;
use crate::{real, Real};

/// Echo floor below which the phase column is left undefined.
pub const PHASE_ECHO_FLOOR: f64 = 1e-20;
/// Echo threshold marking a grid cell as sitting on an amplitude zero.
pub const CELL_ZERO_ECHO: f64 = 1e-12;
/// Refined critical points must reach `|G|` below this.
pub const CRITICAL_MAG_TOL: f64 = 1e-6;

/// One axis of a scan grid. Linear axes are sampled at the nodes
/// (including both endpoints); log axes at the geometric centers of `n`
/// equal log-width cells.
#[derive(Clone, Debug, PartialEq)]
pub struct GridAxis<T> {
    pub name: String,
    pub min: T,
    pub max: T,
    pub n: usize,
    pub scale: AxisScale,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AxisScale {
    Linear,
    Log,
}

impl<T: Real> GridAxis<T> {
    pub fn new(name: impl Into<String>, min: T, max: T, n: usize, scale: AxisScale) -> Result<Self> {
        if !(min < max) {
            return Err(Error::Domain("axis needs min < max".into()));
        }
        if n < 2 {
            return Err(Error::Domain("axis needs at least 2 points".into()));
        }
        if scale == AxisScale::Log && !(min > T::zero()) {
            return Err(Error::Domain("log axis needs min > 0".into()));
        }
        Ok(Self { name: name.into(), min, max, n, scale })
    }

    pub fn linear(name: impl Into<String>, min: T, max: T, n: usize) -> Result<Self> {
        Self::new(name, min, max, n, AxisScale::Linear)
    }

    pub fn values(&self) -> Vec<T> {
        match self.scale {
            AxisScale::Linear => {
                let step = (self.max - self.min) / real((self.n - 1) as f64);
                (0..self.n).map(|i| self.min + step * real(i as f64)).collect()
            }
            AxisScale::Log => {
                let ratio = (self.max / self.min).ln() / real(self.n as f64);
                (0..self.n)
                    .map(|i| self.min * (ratio * (real::<T>(i as f64) + real(0.5))).exp())
                    .collect()
            }
        }
    }
}

/// One record of a scan grid.
#[derive(Clone, Debug, PartialEq)]
pub struct Cell<T> {
    pub x1: T,
    pub x2: T,
    pub g: Complex<T>,
    pub echo: T,
    pub phase: Option<T>,
    pub rate: T,
    pub divergent: bool,
}

/// Run description carried alongside the cells so emitted files are
/// self-describing.
#[derive(Clone, Debug, PartialEq)]
pub struct Metadata<T> {
    pub model: String,
    pub params: Vec<(String, T)>,
    pub rate_cap: T,
    pub n_steps: usize,
    pub system_size: usize,
    pub mode: String,
}

impl<T: Real> Metadata<T> {
    pub fn new(model: impl Into<String>, mut params: Vec<(String, T)>, n_steps: usize) -> Self {
        params.sort_by(|a, b| a.0.cmp(&b.0));
        Self {
            model: model.into(),
            params,
            rate_cap: real(RATE_CAP),
            n_steps,
            system_size: 1,
            mode: "closed-form".into(),
        }
    }
}

/// Rectangular scan result: cells in axis1-major order (`index = i1 * n2 +
/// i2`), plus the refined critical set.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseDiagram<T> {
    pub axis1: GridAxis<T>,
    pub axis2: Option<GridAxis<T>>,
    pub cells: Vec<Cell<T>>,
    pub criticals: Vec<(T, T)>,
    pub metadata: Metadata<T>,
}

impl<T: Real> PhaseDiagram<T> {
    pub fn n1(&self) -> usize {
        self.axis1.n
    }

    pub fn n2(&self) -> usize {
        self.axis2.as_ref().map_or(1, |a| a.n)
    }

    pub fn cell(&self, i1: usize, i2: usize) -> &Cell<T> {
        &self.cells[i1 * self.n2() + i2]
    }
}

fn axis2_values<T: Real>(axis2: &Option<GridAxis<T>>) -> Vec<T> {
    axis2.as_ref().map_or_else(|| vec![T::zero()], |a| a.values())
}

fn make_cell<T: Real>(x1: T, x2: T, g: Complex<T>, snap: bool, system_size: usize) -> Cell<T> {
    let echo = g.norm_sqr();
    let phase = if echo < real(PHASE_ECHO_FLOOR) {
        None
    } else {
        dynamical_phase(g, real(crate::dynamics::PHASE_ZERO_TOL))
            .map(|p| if snap { snap_phase(p) } else { p })
    };
    let rate = crate::dynamics::free_energy_density(g, system_size);
    let divergent = rate >= real(RATE_CAP);
    Cell { x1, x2, g, echo, phase, rate, divergent }
}

fn fill_cells<T, G>(
    evaluator: &G,
    axis1: &GridAxis<T>,
    axis2: &Option<GridAxis<T>>,
    snap: bool,
    system_size: usize,
) -> Vec<Cell<T>>
where
    T: Real,
    G: Fn(T, T) -> Complex<T> + Sync,
{
    let v1 = axis1.values();
    let v2 = axis2_values(axis2);
    let n2 = v2.len();
    (0..v1.len() * n2)
        .into_par_iter()
        .map(|idx| {
            let (i1, i2) = (idx / n2, idx % n2);
            let (x1, x2) = (v1[i1], v2[i2]);
            make_cell(x1, x2, evaluator(x1, x2), snap, system_size)
        })
        .collect()
}

/// Scan of a dynamical process over `(temperature, time)`. The rate column
/// is the dynamical free-energy density at `L = 1`; divergent cells mark
/// finite-temperature amplitude zeros. Columns whose grid lands on a zero
/// are refined along the first axis.
pub fn scan_dynamics<T, G>(
    evaluator: G,
    axis1: GridAxis<T>,
    axis2: Option<GridAxis<T>>,
    metadata: Metadata<T>,
) -> PhaseDiagram<T>
where
    T: Real,
    G: Fn(T, T) -> Complex<T> + Sync,
{
    let system_size = metadata.system_size;
    let cells = fill_cells(&evaluator, &axis1, &axis2, false, system_size);
    let v1 = axis1.values();
    let v2 = axis2_values(&axis2);
    let mut criticals = Vec::new();
    let zero_echo = real::<T>(CELL_ZERO_ECHO);
    let mag_tol = real::<T>(CRITICAL_MAG_TOL);
    for (i2, &x2) in v2.iter().enumerate() {
        // refine the magnitude minimum along axis1 wherever a cell sits on a zero
        for i1 in 1..v1.len() - 1 {
            let here = &cells[i1 * v2.len() + i2];
            if here.echo >= zero_echo {
                continue;
            }
            let f = |x: T| evaluator(x, x2).norm();
            let (x_star, mag) = golden_min(&f, v1[i1 - 1], v1[i1 + 1]);
            if mag < mag_tol {
                criticals.push((x_star, x2));
            }
        }
    }
    PhaseDiagram { axis1, axis2, cells, criticals, metadata }
}

/// Scan of an Uhlmann amplitude over `(temperature, model parameter)`.
/// Phases snap to the quantized values `{0, pi}`; per parameter column the
/// sign changes of `Re G^U` along the temperature axis are refined by
/// bisection into the critical set.
pub fn scan_uhlmann<T, G>(
    evaluator: G,
    axis1: GridAxis<T>,
    axis2: Option<GridAxis<T>>,
    metadata: Metadata<T>,
) -> PhaseDiagram<T>
where
    T: Real,
    G: Fn(T, T) -> Complex<T> + Sync,
{
    let system_size = metadata.system_size;
    let cells = fill_cells(&evaluator, &axis1, &axis2, true, system_size);
    let v1 = axis1.values();
    let v2 = axis2_values(&axis2);
    let criticals: Vec<(T, T)> = v2
        .par_iter()
        .enumerate()
        .flat_map_iter(|(i2, &x2)| {
            let mut column = Vec::new();
            for i1 in 0..v1.len() - 1 {
                let a = cells[i1 * v2.len() + i2].g.re;
                let b = cells[(i1 + 1) * v2.len() + i2].g.re;
                if a == T::zero() {
                    column.push((v1[i1], x2));
                } else if a * b < T::zero() {
                    let f = |x: T| evaluator(x, x2).re;
                    if let Ok(x_star) = refine_critical(&f, (v1[i1], v1[i1 + 1])) {
                        column.push((x_star, x2));
                    }
                }
            }
            column
        })
        .collect();
    PhaseDiagram { axis1, axis2, cells, criticals, metadata }
}

/// Bisection root refinement on a bracketing interval; the bracket shrinks
/// to a relative width of `1e-10`.
pub fn refine_critical<T: Real>(evaluator: &impl Fn(T) -> T, bracket: (T, T)) -> Result<T> {
    let (mut lo, mut hi) = bracket;
    let mut f_lo = evaluator(lo);
    let f_hi = evaluator(hi);
    if f_lo == T::zero() {
        return Ok(lo);
    }
    if f_hi == T::zero() {
        return Ok(hi);
    }
    if f_lo * f_hi > T::zero() {
        return Err(Error::NoSignChange);
    }
    for _ in 0..200 {
        let mid = (lo + hi) / real(2.0);
        let width_tol = real::<T>(1e-10) * T::one().max(mid.abs());
        if (hi - lo).abs() < width_tol {
            return Ok(mid);
        }
        let f_mid = evaluator(mid);
        if f_mid == T::zero() {
            return Ok(mid);
        }
        if f_lo * f_mid < T::zero() {
            hi = mid;
        } else {
            lo = mid;
            f_lo = f_mid;
        }
    }
    Ok((lo + hi) / real(2.0))
}

fn golden_min<T: Real>(f: &impl Fn(T) -> T, mut a: T, mut b: T) -> (T, T) {
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

/// Axis selector for jump detection.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanAxis {
    First,
    Second,
}

/// A principal-branch phase discontinuity between two adjacent cells; the
/// location is the midpoint of the pair along the scanned axis.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseJump<T> {
    pub x1: T,
    pub x2: T,
    pub delta: T,
}

/// Reports adjacent-cell phase differences exceeding `pi/2` in magnitude
/// along the chosen axis. Quantized Uhlmann scans produce exactly the `pi`
/// jumps at their critical temperatures.
pub fn detect_phase_jumps<T: Real>(diagram: &PhaseDiagram<T>, axis: ScanAxis) -> Vec<PhaseJump<T>> {
    let (n1, n2) = (diagram.n1(), diagram.n2());
    let two_pi = T::PI() + T::PI();
    let half_pi = T::PI() / real(2.0);
    let mut jumps = Vec::new();
    let (outer, inner) = match axis {
        ScanAxis::First => (n2, n1),
        ScanAxis::Second => (n1, n2),
    };
    for o in 0..outer {
        for i in 0..inner.saturating_sub(1) {
            let (a, b) = match axis {
                ScanAxis::First => (diagram.cell(i, o), diagram.cell(i + 1, o)),
                ScanAxis::Second => (diagram.cell(o, i), diagram.cell(o, i + 1)),
            };
            let (Some(pa), Some(pb)) = (a.phase, b.phase) else { continue };
            let mut delta = pb - pa;
            if delta > T::PI() {
                delta = delta - two_pi;
            } else if delta < -T::PI() {
                delta = delta + two_pi;
            }
            if delta.abs() > half_pi {
                let half = real::<T>(0.5);
                jumps.push(PhaseJump {
                    x1: (a.x1 + b.x1) * half,
                    x2: (a.x2 + b.x2) * half,
                    delta,
                });
            }
        }
    }
    jumps
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{three_level_uhlmann_closed_form, two_band_uhlmann_closed_form, CreutzSpec};
    use crate::C64;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn meta() -> Metadata<f64> {
        Metadata::new("test", vec![], 1024)
    }

    #[test]
    fn axis_validation() {
        assert!(GridAxis::linear("T", 1.0, 0.5, 8).is_err());
        assert!(GridAxis::linear("T", 0.0, 1.0, 1).is_err());
        assert!(GridAxis::new("T", 0.0, 1.0, 8, AxisScale::Log).is_err());
        assert!(GridAxis::new("T", 0.1, 1.0, 8, AxisScale::Log).is_ok());
    }

    #[test]
    fn linear_axis_hits_endpoints() {
        let v = GridAxis::<f64>::linear("t", 0.0, 1.0, 5).unwrap().values();
        assert_eq!(v.len(), 5);
        assert!((v[0] - 0.0).abs() < 1e-15 && (v[4] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn log_axis_uses_cell_centers() {
        let v = GridAxis::new("T", 1.0, 100.0, 2, AxisScale::Log).unwrap().values();
        // two decades split in half: centers at 10^{0.5} and 10^{1.5}
        assert!((v[0] - 10.0f64.powf(0.5)).abs() < 1e-12);
        assert!((v[1] - 10.0f64.powf(1.5)).abs() < 1e-12);
    }

    #[test]
    fn trivial_model_scans_flat() {
        let axis1 = GridAxis::linear("T", 0.5, 2.0, 4).unwrap();
        let axis2 = GridAxis::linear("t", 0.0, 1.0, 3).unwrap();
        let diagram = scan_dynamics(
            |_t: f64, _x: f64| C64::new(1.0, 0.0),
            axis1,
            Some(axis2),
            meta(),
        );
        assert_eq!(diagram.cells.len(), 12);
        for cell in &diagram.cells {
            assert_eq!(cell.rate, 0.0);
            assert!(!cell.divergent);
            assert_eq!(cell.phase, Some(0.0));
            assert!((cell.echo - 1.0).abs() < 1e-15);
        }
        assert!(diagram.criticals.is_empty());
        assert!(detect_phase_jumps(&diagram, ScanAxis::First).is_empty());
    }

    #[test]
    fn divergent_cells_are_capped_and_flagged() {
        let axis1 = GridAxis::linear("T", 0.0, 1.0, 3).unwrap();
        let diagram = scan_dynamics(
            |x: f64, _| C64::new(if x == 0.0 { 0.0 } else { 1.0 }, 0.0),
            axis1,
            None,
            meta(),
        );
        assert!(diagram.cells[0].divergent);
        assert_eq!(diagram.cells[0].rate, crate::dynamics::RATE_CAP);
        assert_eq!(diagram.cells[0].phase, None);
        assert!(!diagram.cells[1].divergent);
    }

    #[test]
    fn refine_critical_cases() {
        let root = refine_critical(&|x: f64| x - 1.0, (0.0, 2.0)).unwrap();
        assert!((root - 1.0).abs() < 1e-10);
        let root = refine_critical(&|x: f64| x.cos(), (1.0, 2.0)).unwrap();
        assert!((root - FRAC_PI_2).abs() < 1e-10);
        let root = refine_critical(&|t: f64| three_level_uhlmann_closed_form(1.0, 1.0 / t), (0.5, 1.0))
            .unwrap();
        assert!((root - 0.7338).abs() / 0.7338 < 1e-4);
        assert!(matches!(
            refine_critical(&|x: f64| x * x + 1.0, (-1.0, 1.0)),
            Err(Error::NoSignChange)
        ));
    }

    #[test]
    fn uhlmann_scan_finds_creutz_critical_line() {
        let k_points = 512;
        let axis_t = GridAxis::linear("T", 0.05, 1.5, 40).unwrap();
        let axis_m = GridAxis::linear("m", 0.2, 0.8, 4).unwrap();
        let diagram = scan_uhlmann(
            move |t: f64, m: f64| {
                let spec = CreutzSpec::new(m, PI / 3.0, k_points).unwrap();
                C64::new(two_band_uhlmann_closed_form(&spec, t).unwrap(), 0.0)
            },
            axis_t,
            Some(axis_m),
            meta(),
        );
        // one critical temperature per column on the winding-1 branch
        assert_eq!(diagram.criticals.len(), 4);
        for &(t_star, m) in &diagram.criticals {
            let spec = CreutzSpec::new(m, PI / 3.0, k_points).unwrap();
            let g = two_band_uhlmann_closed_form(&spec, t_star).unwrap();
            assert!(g.abs() < 1e-6, "G at refined T* = {g}");
        }
        // phases are quantized and jump by pi within one cell of the critical
        let jumps = detect_phase_jumps(&diagram, ScanAxis::First);
        assert_eq!(jumps.len(), 4);
        let cell_width = (1.5 - 0.05) / 39.0;
        for jump in &jumps {
            assert!((jump.delta.abs() - PI).abs() < 1e-12);
            let partner = diagram
                .criticals
                .iter()
                .find(|&&(_, m)| (m - jump.x2).abs() < 1e-12)
                .expect("jump without critical");
            assert!((partner.0 - jump.x1).abs() <= cell_width);
        }
        for cell in &diagram.cells {
            if let Some(phase) = cell.phase {
                assert!(phase == 0.0 || phase == PI, "unsnapped phase {phase}");
            }
        }
    }

    #[test]
    fn scan_results_are_deterministic() {
        let run = || {
            let axis_t = GridAxis::linear("T", 0.2, 2.0, 24).unwrap();
            scan_uhlmann(
                |t: f64, _| C64::new(three_level_uhlmann_closed_form(1.0, 1.0 / t), 0.0),
                axis_t,
                None,
                meta(),
            )
        };
        let a = run();
        let b = run();
        assert_eq!(a, b);
        assert_eq!(a.criticals.len(), 1);
        assert!((a.criticals[0].0 - 0.7338).abs() < 5e-4);
    }

    #[test]
    fn closed_form_and_holonomy_criticals_agree() {
        let k_points = 512;
        let spec = CreutzSpec::new(0.5, PI / 3.0, k_points).unwrap();
        let axis = || GridAxis::linear("T", 0.1, 0.8, 16).unwrap();
        let closed = scan_uhlmann(
            |t: f64, _| C64::new(two_band_uhlmann_closed_form(&spec, t).unwrap(), 0.0),
            axis(),
            None,
            meta(),
        );
        let numeric = scan_uhlmann(
            |t: f64, _| {
                crate::uhlmann::uhlmann_loschmidt(&spec.uhlmann_path(t, 1024)).unwrap()
            },
            axis(),
            None,
            meta(),
        );
        assert_eq!(closed.criticals.len(), 1);
        assert_eq!(numeric.criticals.len(), 1);
        let dev = (closed.criticals[0].0 - numeric.criticals[0].0).abs();
        assert!(dev < 1e-3, "critical temperatures differ by {dev}");
    }

    #[test]
    fn dynamics_scan_refines_columns_that_hit_zeros() {
        // amplitude vanishing along x1 = 1 for every x2
        let axis1 = GridAxis::linear("T", 0.0, 2.0, 9).unwrap();
        let axis2 = GridAxis::linear("t", 0.0, 1.0, 2).unwrap();
        let diagram = scan_dynamics(
            |x: f64, _| C64::new(x - 1.0, 0.0),
            axis1,
            Some(axis2),
            meta(),
        );
        assert_eq!(diagram.criticals.len(), 2);
        for &(x_star, _) in &diagram.criticals {
            assert!((x_star - 1.0).abs() < 1e-8);
        }
    }
}
