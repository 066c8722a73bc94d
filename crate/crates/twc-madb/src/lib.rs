//! Three-user two-way channels: users 1 and 2 reach user 3 over a
//! multiple-access channel, and user 3 answers both over an additive
//! degraded broadcast channel.
//!
//! Rate bounds and support functions of the inner and outer regions are
//! computed for binary alphabets. Three conditions under which the regions
//! coincide are checked with replayable evidence.

pub mod bounds;
pub mod channel;
pub mod checks;
pub mod support;

pub use bounds::{rate_quadruple_bounds, MadbInput, QuadBounds};
pub use channel::{gen_madb, MadbChannel, MadbFamily};
pub use checks::{
    check_madb_exmain, check_madb_exmain2, check_madb_exsc, madb_audit, relabeling_deviation, replay_madb,
};
pub use support::{madb_support, madb_support_pair, madb_sweep, MadbMode, MadbOptions, MadbSupport, MAX_SUPPORT_Q};
