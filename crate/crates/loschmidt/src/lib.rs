//! Loschmidt amplitudes of purified mixed states.
//!
//! This crate computes overlaps between purifications of density matrices as
//! a system undergoes quasistatic, quench, or Uhlmann (parallel-transport)
//! processes, locates the zeros of those overlaps, and scans phase diagrams
//! around them. It ships a small dense complex linear-algebra core, a model
//! catalog (generic two-level, thermal two-band / Creutz ladder, three-level)
//! with closed-form references, and grid-scan machinery with critical-point
//! refinement.
//!
//! All numerical kernels are generic over the real scalar type through the
//! [`Real`] trait; `f64` is the working precision for everything shipped in
//! the CLI and the test suite, and concrete aliases for both `f32` and `f64`
//! live at the crate root. Units are fixed to `hbar = k_B = 1`.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

pub mod dynamics;
pub mod error;
pub mod matrix;
pub mod models;
pub mod purification;
pub mod scan;
pub mod spinor;
pub mod uhlmann;

pub use error::{Error, Result};
pub use matrix::{eig_hermitian, expm_i, kron, partial_trace_second, sqrtm_psd};
pub use matrix::{ComplexMatrix, EigenSystem, Sign};
pub use purification::{
    amplitude_from_density, expectation, is_parallel, overlap, purify, reduce,
};
pub use purification::{Amplitude, DensityMatrix, PurifiedState};

/// Real scalar the numerical core is generic over: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Shorthand for converting an `f64` constant (tolerances, closed-form
/// coefficients) into the working scalar type.
pub(crate) fn real<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("f64 constant representable in scalar type")
}

pub type C64 = num_complex::Complex<f64>;
pub type C32 = num_complex::Complex<f32>;

pub type Matrix64 = matrix::ComplexMatrix<f64>;
pub type Matrix32 = matrix::ComplexMatrix<f32>;
pub type Density64 = purification::DensityMatrix<f64>;
pub type Density32 = purification::DensityMatrix<f32>;
pub type Amplitude64 = purification::Amplitude<f64>;
pub type Amplitude32 = purification::Amplitude<f32>;
pub type Purified64 = purification::PurifiedState<f64>;
pub type Purified32 = purification::PurifiedState<f32>;
pub type PhaseDiagram64 = scan::PhaseDiagram<f64>;
pub type PhaseDiagram32 = scan::PhaseDiagram<f32>;
