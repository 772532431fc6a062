//! Special functions and the randomized quasi-Monte-Carlo evaluator for
//! multivariate normal / Student-t CDFs.

pub(crate) mod linalg;
mod mvt;
pub mod special;

pub use mvt::{mvn_cdf, mvt_cdf, MvtResult, MvtSettings, GAUSSIAN_LIMIT_NU};
pub(crate) use mvt::mix_seed;
pub use special::{
    bessel_j0, ln_gamma, norm_cdf, norm_pdf, norm_quantile, student_t_cdf, student_t_pdf,
    student_t_quantile,
};
