//! Permutation groups: elements, stabilizer chains, subgroup constructions,
//! central series, quotients, and verified homomorphisms.

pub mod chain;
pub mod group;
pub mod hom;
pub mod normal_map;
pub mod permutation;
pub mod search;

pub use group::{PermGroup, DEFAULT_ENUMERATION_BOUND};
pub use hom::GroupHom;
pub use normal_map::{Action, CopyIndex, NormalMap, NormalMapReport};
pub use permutation::Permutation;
pub use search::{search_homs, HomConstraints};
