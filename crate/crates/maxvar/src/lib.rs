//! Maximal-variance measures, generalized barycenters, circumradii and
//! Jung-type diameter bounds on discretized metric spaces.
//!
//! Everything routes through one object: the bilinear functional
//! mu^T V nu on pairs of discrete probability measures, with V(x, y) the
//! squared distance (or any payoff) between points of a cloud X and a
//! candidate set Y. Maximizing the V-variance of mu, minimizing the
//! V-anti-variance of nu, locating generalized barycenters, and computing
//! the circumradius of the Dirac embedding of X in Wasserstein space are all
//! faces of the same finite zero-sum game, solved exactly by linear
//! programming and cross-checked by fictitious play, with saddle-point
//! certificates attached to every result.

pub mod barycenter;
pub mod circum;
pub mod error;
pub mod jung;
pub mod measures;
pub mod minimax;
pub mod scenario;
mod simplex;
pub mod spaces;

pub use barycenter::{
    anti_barycenter_set, frechet_mean, generalized_barycenter, refine_candidates,
    v_barycenter_set, FrechetMean, Refinement, RefinementConfig,
};
pub use circum::{
    discrete_circumball, radii_report, wasserstein_circumradius, welzl_meb, CircumballResult,
    RadiiReport,
};
pub use error::{Error, Result};
pub use jung::{
    angle_certificate, jung_bound, jung_check, jung_identity_check, AngleCertificate,
    IdentityCheck, JungReport,
};
pub use measures::{DiscreteMeasure, SUPPORT_EPS};
pub use minimax::{
    balanced_maximizer, bilinear_value, certify_saddle, solve_fictitious, solve_lp,
    v_anti_variance, v_variance, PayoffKind, PayoffMatrix, SaddleCertificate, SaddleSolution,
    SolveMethod,
};
pub use spaces::{model_side, sample_grid, ModelSpace, Point, PointCloud, Region};
