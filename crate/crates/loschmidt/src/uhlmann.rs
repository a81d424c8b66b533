//! Uhlmann connection, holonomy, and parallel transport of amplitudes.
//!
//! An Uhlmann process drags an amplitude along a path `s -> rho(s)` of
//! full-rank density matrices while keeping consecutive amplitudes parallel
//! (`W^dag dW = dW^dag W`). The generator of that transport is the
//! anti-Hermitian connection
//!
//! ```text
//! A_U = - sum_ij |i> <i| [d sqrt(rho), sqrt(rho)] |j> <j| / (lambda_i + lambda_j)
//! ```
//!
//! over the instantaneous eigenbasis of `rho`. Around a closed loop the
//! ordered product `P exp(-closed-integral A_U)` is the Uhlmann holonomy;
//! `G^U = Tr(rho(0) . holonomy)` is the Loschmidt amplitude of the process
//! and its argument the Uhlmann phase.
//!
//! Discretization: `n` midpoint steps `exp(-A_U(s_{k+1/2}) ds)`, each step
//! exactly unitary by construction. The differential `d rho` entering each
//! step is a fourth-order centered stencil on the node samples, which keeps
//! the holonomy within closed-form reference accuracy (better than 1e-6) at
//! the default 1024 steps.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::matrix::{eig_hermitian, expm_i, ComplexMatrix, Sign, HERMITICITY_TOL};
use crate::purification::{Amplitude, DensityMatrix, FULL_RANK_MIN};
use crate::{real, Real};

/// Deviation accepted between `rho(0)` and `rho(1)` on a closed path.
pub const CLOSURE_TOL: f64 = 1e-10;
/// Phases within this of `0` or `pi` snap exactly; planar two-band and the
/// three-level loop both quantize there.
pub const PHASE_SNAP_TOL: f64 = 1e-4;
/// Minimum number of discretization steps for a holonomy.
pub const MIN_STEPS: usize = 64;

/// Parametrized path of density matrices over `s` in `[0, 1]`.
pub struct DensityPath<T, F>
where
    F: Fn(T) -> DensityMatrix<T>,
{
    sampler: F,
    n_steps: usize,
    closed: bool,
    _marker: std::marker::PhantomData<T>,
}

impl<T: Real, F: Fn(T) -> DensityMatrix<T>> DensityPath<T, F> {
    pub fn new(sampler: F, n_steps: usize, closed: bool) -> Self {
        Self { sampler, n_steps, closed, _marker: std::marker::PhantomData }
    }

    pub fn sample(&self, s: T) -> DensityMatrix<T> {
        (self.sampler)(s)
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn closed(&self) -> bool {
        self.closed
    }
}

/// One increment of the Uhlmann connection: the matrix `A_U ds` for a finite
/// Hermitian traceless differential `d rho`.
///
/// `d sqrt(rho)` is solved in the eigenbasis through the Sylvester relation
/// `sqrt(rho) d sqrt(rho) + d sqrt(rho) sqrt(rho) = d rho`, i.e. entrywise
/// division by `sqrt(lambda_i) + sqrt(lambda_j)`; the double sum then
/// collapses to an entrywise formula in the same basis. The result is
/// anti-Hermitian and basis-covariant, so no eigenvector bookkeeping between
/// neighbouring path samples is needed.
pub fn uhlmann_connection_step<T: Real>(
    rho: &DensityMatrix<T>,
    drho: &ComplexMatrix<T>,
) -> Result<ComplexMatrix<T>> {
    let d = rho.dim();
    if drho.dim() != d {
        return Err(Error::DimMismatch { expected: d, got: drho.dim() });
    }
    let herm_dev = drho.hermiticity_deviation();
    if herm_dev > real(HERMITICITY_TOL) {
        return Err(Error::NotHermitian { deviation: herm_dev.to_f64().unwrap_or(f64::NAN) });
    }
    let trace_dev = drho.trace().norm();
    if trace_dev > real(HERMITICITY_TOL) {
        return Err(Error::Domain(format!(
            "d rho must be traceless; got trace magnitude {:e}",
            trace_dev.to_f64().unwrap_or(f64::NAN)
        )));
    }
    let eig = eig_hermitian(rho.mat())?;
    let min = eig.values[0];
    if min <= real(FULL_RANK_MIN) {
        return Err(Error::RankDeficient { min_eigenvalue: min.to_f64().unwrap_or(f64::NAN) });
    }
    let v = &eig.vectors;
    let drho_eig = v.adjoint().matmul(drho).matmul(v);
    let roots: Vec<T> = eig.values.iter().map(|&l| l.sqrt()).collect();
    let mut a = ComplexMatrix::<T>::zeros(d);
    for i in 0..d {
        for j in 0..d {
            if i == j {
                continue;
            }
            // (d sqrt)_ij = (d rho)_ij / (sqrt l_i + sqrt l_j), and
            // A_ij = -(d sqrt)_ij (sqrt l_j - sqrt l_i) / (l_i + l_j)
            let denom = (roots[i] + roots[j]) * (eig.values[i] + eig.values[j]);
            let coeff = -(roots[j] - roots[i]) / denom;
            a[(i, j)] = drho_eig[(i, j)] * Complex::new(coeff, T::zero());
        }
    }
    let back = v.matmul(&a).matmul(&v.adjoint());
    Ok(back.anti_hermitian_part())
}

/// The per-step connection increments `A_k ~ A_U(s_{k+1/2}) ds` for a path,
/// shared by the holonomy and the transport so both see identical steps.
fn connection_steps<T: Real, F: Fn(T) -> DensityMatrix<T>>(
    path: &DensityPath<T, F>,
) -> Result<Vec<ComplexMatrix<T>>> {
    let n = path.n_steps();
    if n < 4 {
        return Err(Error::Domain("path discretization needs at least 4 steps".into()));
    }
    let h = T::one() / real(n as f64);
    let node = |j: usize| -> DensityMatrix<T> { path.sample(h * real(j as f64)) };

    // node samples: 0..n-1 suffice on a closed path (node n wraps to 0)
    let nodes: Vec<ComplexMatrix<T>> = if path.closed() {
        (0..n).map(|j| node(j).mat().clone()).collect()
    } else {
        (0..=n).map(|j| node(j).mat().clone()).collect()
    };

    let c = |x: f64| Complex::new(real::<T>(x), T::zero());
    let mut steps = Vec::with_capacity(n);
    for k in 0..n {
        let mid = path.sample(h * (real::<T>(k as f64) + real::<T>(0.5)));
        // fourth-order differential at the midpoint from node samples
        let drho = if path.closed() {
            let km1 = &nodes[(k + n - 1) % n];
            let k0 = &nodes[k];
            let k1 = &nodes[(k + 1) % n];
            let k2 = &nodes[(k + 2) % n];
            k2.scale(c(-1.0 / 24.0))
                .add(&k1.scale(c(27.0 / 24.0)))
                .add(&k0.scale(c(-27.0 / 24.0)))
                .add(&km1.scale(c(1.0 / 24.0)))
        } else if k == 0 {
            nodes[0]
                .scale(c(-23.0 / 24.0))
                .add(&nodes[1].scale(c(21.0 / 24.0)))
                .add(&nodes[2].scale(c(3.0 / 24.0)))
                .add(&nodes[3].scale(c(-1.0 / 24.0)))
        } else if k == n - 1 {
            nodes[n - 3]
                .scale(c(1.0 / 24.0))
                .add(&nodes[n - 2].scale(c(-3.0 / 24.0)))
                .add(&nodes[n - 1].scale(c(-21.0 / 24.0)))
                .add(&nodes[n].scale(c(23.0 / 24.0)))
        } else {
            nodes[k + 2]
                .scale(c(-1.0 / 24.0))
                .add(&nodes[k + 1].scale(c(27.0 / 24.0)))
                .add(&nodes[k].scale(c(-27.0 / 24.0)))
                .add(&nodes[k - 1].scale(c(1.0 / 24.0)))
        };
        let drho = drho.hermitian_part();
        steps.push(uhlmann_connection_step(&mid, &drho)?);
    }
    Ok(steps)
}

/// `exp(-A)` for anti-Hermitian `A`, through the Hermitian generator `iA`.
fn step_unitary<T: Real>(a: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    let k = a.scale(Complex::new(T::zero(), T::one())); // iA is Hermitian
    expm_i(&k, T::one(), Sign::Plus)
}

/// Discretized Uhlmann holonomy `P exp(-closed-integral A_U)`.
#[derive(Clone, Debug)]
pub struct Holonomy<T> {
    pub matrix: ComplexMatrix<T>,
    pub n_steps: usize,
}

/// Path-ordered product of the step unitaries, later steps multiplying from
/// the left. Requires a closed path and at least [`MIN_STEPS`] steps.
pub fn holonomy<T: Real, F: Fn(T) -> DensityMatrix<T>>(
    path: &DensityPath<T, F>,
) -> Result<Holonomy<T>> {
    if !path.closed() {
        return Err(Error::NotClosed { deviation: f64::NAN });
    }
    if path.n_steps() < MIN_STEPS {
        return Err(Error::Domain(format!(
            "holonomy needs at least {MIN_STEPS} steps, got {}",
            path.n_steps()
        )));
    }
    let endpoint_dev = path.sample(T::zero()).mat().max_abs_diff(path.sample(T::one()).mat());
    if endpoint_dev > real(CLOSURE_TOL) {
        return Err(Error::NotClosed { deviation: endpoint_dev.to_f64().unwrap_or(f64::NAN) });
    }
    let steps = connection_steps(path)?;
    let d = steps[0].dim();
    let mut product = ComplexMatrix::<T>::identity(d);
    for a in &steps {
        product = step_unitary(a)?.matmul(&product);
    }
    Ok(Holonomy { matrix: product, n_steps: path.n_steps() })
}

/// Loschmidt amplitude of the Uhlmann process, `Tr(rho(0) . holonomy)`.
pub fn uhlmann_loschmidt<T: Real, F: Fn(T) -> DensityMatrix<T>>(
    path: &DensityPath<T, F>,
) -> Result<Complex<T>> {
    let hol = holonomy(path)?;
    Ok(path.sample(T::zero()).mat().matmul(&hol.matrix).trace())
}

/// Uhlmann phase `arg G^U`, `None` below `zero_tol`. Results within
/// [`PHASE_SNAP_TOL`] of the quantized values `0` and `pi` snap exactly.
pub fn uhlmann_phase<T: Real, F: Fn(T) -> DensityMatrix<T>>(
    path: &DensityPath<T, F>,
    zero_tol: T,
) -> Result<Option<T>> {
    let g = uhlmann_loschmidt(path)?;
    if g.norm() <= zero_tol {
        return Ok(None);
    }
    Ok(Some(snap_phase(crate::dynamics::dynamical_phase(g, zero_tol).expect("above tolerance"))))
}

pub(crate) fn snap_phase<T: Real>(theta: T) -> T {
    let snap = real::<T>(PHASE_SNAP_TOL);
    if theta.abs() < snap {
        T::zero()
    } else if (theta - T::PI()).abs() < snap {
        T::PI()
    } else if (theta + T::PI()).abs() < snap {
        T::PI()
    } else {
        theta
    }
}

/// Parallel transport of an amplitude along the path:
/// `W(s_k) = sqrt(rho(s_k)) Phi_k U0` with `Phi_k` the accumulated product of
/// step unitaries and `U0` the polar gauge of `w0`. Every intermediate
/// amplitude purifies `rho(s_k)` exactly, and on a closed path
/// `Tr(W0^dag W(1))` reproduces the holonomy trace.
pub fn transport_trajectory<T: Real, F: Fn(T) -> DensityMatrix<T>>(
    w0: &Amplitude<T>,
    path: &DensityPath<T, F>,
) -> Result<Vec<Amplitude<T>>> {
    let rho0 = path.sample(T::zero());
    let d = rho0.dim();
    if w0.dim() != d {
        return Err(Error::DimMismatch { expected: d, got: w0.dim() });
    }
    let purity_dev = w0.mat().matmul(&w0.mat().adjoint()).max_abs_diff(rho0.mat());
    if purity_dev > real(1e-8) {
        return Err(Error::Domain(format!(
            "initial amplitude does not purify rho(0); deviation {:e}",
            purity_dev.to_f64().unwrap_or(f64::NAN)
        )));
    }
    // polar gauge U0 = rho0^{-1/2} W0; the path is full rank, so this exists
    let eig0 = eig_hermitian(rho0.mat())?;
    let min0 = eig0.values[0];
    if min0 <= real(FULL_RANK_MIN) {
        return Err(Error::RankDeficient { min_eigenvalue: min0.to_f64().unwrap_or(f64::NAN) });
    }
    let inv_root = eig0.apply(|l| Complex::new(T::one() / l.sqrt(), T::zero()));
    let gauge0 = inv_root.matmul(w0.mat());

    let steps = connection_steps(path)?;
    let n = steps.len();
    let h = T::one() / real(n as f64);

    let mut transported = Vec::with_capacity(n + 1);
    let mut phi = ComplexMatrix::<T>::identity(d);
    for k in 0..=n {
        if k > 0 {
            phi = step_unitary(&steps[k - 1])?.matmul(&phi);
        }
        let rho_k = path.sample(h * real(k as f64));
        let root = rho_k.sqrt()?;
        let gauge = phi.matmul(&gauge0);
        transported.push(Amplitude::new_unchecked(root.matmul(&gauge), gauge));
    }
    Ok(transported)
}

/// Endpoint of [`transport_trajectory`].
pub fn transport_amplitude<T: Real, F: Fn(T) -> DensityMatrix<T>>(
    w0: &Amplitude<T>,
    path: &DensityPath<T, F>,
) -> Result<Amplitude<T>> {
    Ok(transport_trajectory(w0, path)?.pop().expect("trajectory is nonempty"))
}
