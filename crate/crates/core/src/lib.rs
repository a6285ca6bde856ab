//! Normal-closures towers of finite group homomorphisms.
//!
//! Given `phi: Gamma -> G` between finite permutation groups, this crate
//! builds the tower of free normal closures `... -> Gamma_3 -> Gamma_2 -> G`,
//! computes its stable member `Gamma_inf` (the subnormal closure of `phi`),
//! and checks the structural properties of that construction on concrete
//! instances.

pub mod closure;
pub mod error;
pub mod fp;
pub mod perm;
pub mod presets;
pub mod tower;
pub mod verify;

pub use error::{Error, Result};
pub use perm::{GroupHom, NormalMap, PermGroup, Permutation};
