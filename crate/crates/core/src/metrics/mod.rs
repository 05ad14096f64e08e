//! Quality indicators: normalized hypervolume and IGD.

mod hv;
mod igd;

pub use hv::{hypervolume, hypervolume_monte_carlo, MetricContext};
pub use igd::igd;
