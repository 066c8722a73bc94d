//! Probability primitives for finite two-way channels.
//!
//! Everything is measured in bits. Matrices are stored row-major with
//! inputs on rows and outputs on columns.

pub mod ba;
pub mod channel;
pub mod cmi;
pub mod error;
pub mod exec;
pub mod info;
pub mod simplex;

pub use ba::{blahut_arimoto, blahut_arimoto_observed, uniform_kkt_test, BaOptions, BaResult};
pub use channel::{conditional_mutual_information, Direction, JointDist, TwoWayChannel};
pub use error::{Error, Result};
pub use exec::Exec;
pub use info::{
    binary_entropy, entropy, kl_divergence, mi, mutual_information, qary_entropy, Dist, Kernel, INFO_TOL, MATRIX_TOL,
};
