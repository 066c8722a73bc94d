//! Shannon's inner and outer bounds for finite two-way channels.
//!
//! Regions are convex and closed toward the axes, so a region is stored as
//! its upper-right boundary and probed through its support function
//! `h(λ) = max λR1 + (1−λ)R2`. The inner bound maximizes over independent
//! inputs, the outer bound over joint inputs.

pub mod closed;
pub mod geometry;
pub mod support;

pub use closed::{capacity_under_common_maximizer, closed_form_qary_erasure, qary_erasure_rate};
pub use geometry::{convex_hull, region_contains, region_hausdorff, sig9, RateRegion2D};
pub use support::{
    compute_region, directions, inner_support, outer_support, region_from_samples, support_samples, support_value,
    InputLaw, Mode, RegionOptions, SupportSample,
};
