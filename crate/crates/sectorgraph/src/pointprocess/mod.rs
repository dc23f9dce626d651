//! Point-process sampling and the scalar probability kernels used everywhere.
//!
//! Supported position densities: the uniform unit square, the standard planar
//! Gaussian, and piecewise-constant grids of unit total mass. Sector
//! inclinations are i.i.d. uniform on `[0, 2pi)`. Sampling is keyed by a
//! `(master seed, stream id)` pair; identical keys reproduce identical
//! samples regardless of thread count or call order, which is what makes
//! parallel replicates reproducible.

mod density;
mod kernels;
mod sample;

pub(crate) use density::cell_region_overlap;
pub use density::{DensityModel, GridDensity, LevelSetMass, Region};
pub use kernels::{
    binomial_pmf, binomial_tail, normal_cdf, normal_pdf, poisson_pmf, poisson_tail,
    poisson_upper_quantile,
};
pub use sample::{
    sample_coupled, sample_marked, sample_marked_cube3, CoupledSample, MarkedPointCloud,
    MarkedPointCloud3, SeedSpec,
};
