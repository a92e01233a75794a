//! Weak ω-groupoid structure on the tower of identity types over a base
//! type: pasting diagrams, a small identity-type kernel, and a synthesizer
//! that builds and checks the operations of the pointed endomorphism operad.

pub mod globular;
pub mod kernel;
pub mod operad;
pub mod par;
pub mod pasting;
pub mod synth;
pub mod tower;
