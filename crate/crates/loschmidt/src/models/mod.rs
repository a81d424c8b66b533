//! Built-in model catalog with closed-form references.
//!
//! Three families cover the phase diagrams this crate reproduces: a generic
//! two-level system (quasistatic and quench closed forms), the thermal
//! two-band Creutz ladder (winding number, Uhlmann amplitude closed form,
//! critical-temperature solver), and a three-level extension with both
//! finite-temperature dynamical and topological transitions. Every closed
//! form here is cross-checked against the generic trace/holonomy pipeline in
//! the test suites.

mod creutz;
mod three_level;
mod two_level;

pub use creutz::{
    creutz_critical_temperature, two_band_uhlmann_closed_form, winding_number, CreutzSpec,
};
pub use three_level::{
    critical_temperature_analytic, three_level_initial_hamiltonian, three_level_quasistatic_g,
    three_level_quench_g, three_level_quench_hamiltonian, three_level_uhlmann_closed_form,
    three_level_uhlmann_path, three_level_uhlmann_tstar, CriticalKind, ThreeLevelSpec,
};
pub use two_level::{
    two_level_quasistatic_g, two_level_quench_g, two_level_quench_thermal_density,
    two_level_quench_thermal_g, TwoLevelSpec,
};
