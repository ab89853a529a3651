//! Decide whether a positive integer is a difference of two rational fourth
//! powers, producing either a witness or a checkable certificate.

pub mod arith;
pub mod descent;
pub mod local;
pub mod witness;
pub mod elliptic;
pub mod sieve;
pub mod pythag;
pub mod fixtures;
pub mod gaussian;
pub mod certificate;
pub mod pipeline;
pub mod verify;
mod wide;
