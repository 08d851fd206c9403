//! Resource accounting, sweeps over array size, and exact least-squares fits.

mod fit;
mod resource;
mod sweep;

pub use fit::{fit, fit_points, Fit, FitModel};
pub use resource::{degree_histogram_compare, resource_report, HistogramComparison, ResourceReport};
pub use sweep::{assign_term_count, mapping_term_count, search_block_term_count, sweep, write_csv, Builder, SweepOptions, SweepRow};
