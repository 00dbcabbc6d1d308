//! Maximal fields `sup_t |P f(Γ(x,t),t)|`, their L² norms, the counterexample
//! ratio `Q(R)`, witness lower bounds and log-log slope fits.

mod field;
mod fit;
mod lowerbound;
mod ratio;
mod timegrid;

pub use field::{l2_norm_field, maximal_field, MaximalField, NEGLIGIBLE_SLICE};
pub use fit::{fit_slope, ExponentFit};
pub use lowerbound::{
    calibrate, lower_bound, witness_minimum, LowerBoundReport, Witness, MIN_C, MIN_WITNESS_NODES, WITNESS_BOUND,
};
pub use ratio::{maximal_ratio, ratio_q, ratio_q_with, x_grid, QConfig, QMeasurement};
pub use timegrid::{build_time_grid, TimeGrid, TimeGridSpec};
