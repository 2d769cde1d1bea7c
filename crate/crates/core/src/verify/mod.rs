//! Experiments tying computed quantities to predicted exponents and identities.

pub mod bilinear;
pub mod fit;
pub mod generators;
pub mod hls;
pub mod pointwise;
pub mod strichartz;
pub mod suite;
pub mod windows;

pub use bilinear::{bilinear_form, BilinearReport};
pub use fit::{fit_decay, fit_power_law, DecayFit, Regime};
pub use hls::{hls_box_oracle, hls_check_1d, hls_refinement, HlsRefinement, HlsReport};
pub use pointwise::{pointwise_constant, PointwiseReport};
pub use strichartz::{
    classical_scaling_sweep, frequency_sweep, strichartz_ratio, RatioOptions, RatioResult, RatioSweep,
    ScalingSweep,
};
pub use suite::{property_suite, Mutation, PropertyOutcome, SuiteReport};
pub use windows::{local_window_norms, LocalWindowReport, PowerLawInterpolant};
