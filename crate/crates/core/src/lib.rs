//! Two-qubit classical capacity of Pauli channels with correlated noise.
//!
//! The channel applies `σi ⊗ σj` with probability
//! `p_ij = (1 - μ) q_i q_j + μ q_i δ_ij`. Because it is covariant under the
//! two-qubit Pauli group, its Holevo capacity over two uses is
//! `2 - S_min`, where `S_min` is the minimal output entropy over pure
//! inputs. For the symmetric family `q = (p, p, q, q)` the minimizer has a
//! closed form ([`analytic`]); in general it is found numerically
//! ([`search`]).

pub mod analytic;
pub mod capacity;
pub mod channel;
pub mod error;
mod optim;
pub mod pauli;
pub mod sampling;
pub mod search;
pub mod spectral;
pub mod sweep;
pub mod verify;

pub use error::{Error, Result};
