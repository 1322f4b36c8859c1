//! Parrondo and anti-Parrondo regions of parameter space, and sufficient
//! conditions for ergodicity.

mod conditions;
mod probe;
mod scan;
mod volume;

pub use conditions::{
    annihilating_lhs, check_annihilating, check_basic_estimate, estimate_condition_fraction,
    Condition, ConditionGame, Proportion,
};
pub use probe::{convergence_probe, ProbeMode, ProbeRow};
pub use scan::{
    evaluate_cell, scan_cross_section, scan_cross_section_simulated, Axis, CellValue,
    CrossSectionSpec, GameC, GridCell, RegionClass, RegionGrid, SimBudget, ZERO_TOLERANCE,
};
pub use volume::{estimate_region_volume, VolumeEstimate};
