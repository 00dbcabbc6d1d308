//! The TT* kernel
//! `K(x,y,t1,t2) = ∫ e^{i((Γ(x,t1)−Γ(y,t2))ξ + (t1−t2)|ξ|²)} e^{−(t1^γ+t2^γ)|ξ|²} Ψ(ξ/λ) dξ`,
//! its pointwise majorant with the (β₁, β₂) table, and the Schur row integral
//! `I(x) = ∫|K(x, y, t(x), t(y))| dy`.

mod bound;
mod cutoff;
mod eval;
mod schur;
mod verify;

pub use bound::{
    beta_table, bound_integral, bound_rhs, table_check_lambdas, table_consistency, BetaChoice, TableCheck,
    TABLE_REPRESENTATIVES,
};
pub use cutoff::{CutoffSpec, ScaledCutoff};
pub use eval::{kernel_eval, KernelPlan, KernelSample};
pub use schur::{schur_grid, schur_integral, schur_sweep, structured_assignment, SchurSweep, SCHUR_PROBES};
pub use verify::{
    decay_constant, time_set, verify_kernel_bound, KernelBoundReport, KernelCheckSpec, LambdaRatio, GROWTH_LIMIT,
    MIN_SAMPLE_COUNT,
};
