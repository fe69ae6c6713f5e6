//! Ambient structure of S²×S² and the pointwise and integral analyzers.

pub mod ambient;
pub mod curvature;
pub mod domain;
pub mod forms;
pub mod integrals;
pub mod surface;

pub use ambient::{
    ambient_j, ambient_second_form, symplectic_form, Isometry, ProductPoint, ProductTangent,
    ProductVector, Vec3,
};
pub use curvature::{
    c_identities_residual, gauss_curvature, gauss_equation_residual, hopf_residual,
    parallel_h_residual, second_form, FundamentalForms,
};
pub use domain::{Gluing, Grid, GridSpec, ParamDomain};
pub use forms::{
    associated_jacobian, extrinsic, first_form, lagrangian_residual, orthonormal_frame,
    rank_identity_residual, Extrinsic, Frame, Metric,
};
pub use integrals::{area, degree, degree_extrapolated, sweep};
pub use surface::{
    jet, Expectations, ImmersionJet, JetScheme, JetSource, ProductMap, SurfaceMap, SurfaceSpec,
};
