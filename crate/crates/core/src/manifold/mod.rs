//! Constrained sampling of model manifolds, projection onto the
//! hyperellipsoid axes, empirical widths and enclosure checks.

mod enclosure;
mod prior;
mod sampler;

pub use enclosure::{
    empirical_widths, enclosure_check, ellipsoid_check, polynomial_cloud, project_cloud,
    project_with_basis, EllipsoidRecord, EnclosureRecord, Projection,
};
pub use prior::{default_prior, ParamPrior, Prior};
pub use sampler::{
    sample_cloud, sample_cloud_batched, ModelSpec, Sample, SampleCloud, SamplerConfig,
    TIMEOUT_RATE, TIMEOUT_WINDOW,
};

#[cfg(test)]
mod tests;
