pub mod blocks;
pub mod classify;
pub mod cli;
pub mod error;
pub mod finiteness;
pub mod invariants;
pub mod linalg;
pub mod normal_form;
pub mod patterns;
pub mod poset;
pub mod quiver;
pub mod sample;
pub mod selftest;

pub use blocks::BlockData;
pub use error::{Error, Result};
pub use linalg::{Rat, RatMatrix};
pub use patterns::Eolp;
pub use quiver::{Decomposition, Label, QuiverRep};
