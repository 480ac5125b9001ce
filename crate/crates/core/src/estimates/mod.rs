//! Ratio experiments for the dispersive, Strichartz, bilinear and shorttime
//! estimates, and the oscillatory kernel decay scan.

mod bilinear;
mod kernel;
mod probe;
mod strichartz;

pub use bilinear::{
    bilinear_ratio, product_ratio_for, product_time_grid, shorttime_amelioration, time_refinement_change, ProductNorm,
    TimeGrid,
};
pub use kernel::{
    kernel_decay_scan, kernel_integral, kernel_integral_refined, kernel_panels, KernelDecayReport, KernelScanRow,
    RadialProfile, XSampler,
};
pub use probe::{loglog_slope, spread, write_reports_csv, EstimateProbe, ProbeShells, RatioReport, TrialRatio};
pub use strichartz::{linear_strichartz_for, linear_strichartz_ratio, strichartz_exponent};
