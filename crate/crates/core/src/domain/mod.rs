//! Mathematical inputs: spectra, bump profiles, curves, Sobolev norms and
//! the counterexample families.

mod bump;
mod counterexample;
mod curve;
mod sobolev;
mod spectrum;

pub use bump::{make_bump, Bump, BumpSpec};
pub use counterexample::{CounterexampleFamily, CounterexampleKind, Interval, DEFAULT_SAMPLES};
pub use curve::{
    verify_curve_regularity, CurveFamily, CurveSpec, Lattice, RegularityReport, TabulatedCurve,
};
pub use sobolev::sobolev_norm;
pub use spectrum::{
    BumpSum, GaussianProfile, ScaledBump, SpectralFunction, SpectrumProfile,
};
