//! Large diameter-2 Cayley graphs on abelian groups from generalized
//! difference sets.
//!
//! The crate is organized bottom-up:
//!
//! - [`algebra`]: finite fields and the abelian groups used by the constructions
//! - [`groupring`]: integer group-ring arithmetic over those groups
//! - [`diffsets`]: difference-set families and brute-force verifiers
//! - [`covering`]: covering configurations on the auxiliary group and their search
//! - [`constructions`]: generating sets for the explicit graph families
//! - [`graph`]: diameter certification and exports
//! - [`bounds`]: closed-form degree/diameter bounds and comparison tables

pub mod algebra;
pub mod bounds;
pub mod constructions;
pub mod covering;
pub mod diffsets;
mod error;
pub mod graph;
pub mod groupring;

pub use error::{Error, Result};
