//! Two-way channels whose noise is a stationary Markov process.
//!
//! Entropy rates are exact for irreducible finite chains. Capacity
//! rectangles are given for invertible channels with independent noise and
//! for injective-semideterministic channels, with an outer rectangle for
//! dependent noise and a simulator of an adaptive code that beats every
//! non-adaptive one.

pub mod example8;
pub mod markov;
pub mod spec;

pub use example8::{example8_report, example8_simulate, Example8Report, Example8Run};
pub use markov::{entropy_rate, JointMarkovNoise, MarkovNoise, STATIONARY_TOL};
pub use spec::{lemma3_outer, theorem10_region, theorem9_region, IsdMemorySpec, MemoryChannelSpec, MemoryNoise};
