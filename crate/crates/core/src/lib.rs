//! Initial intervals of finite partial orders.
//!
//! Elements are stored as dense indices `0..n`; external ids and role labels
//! are a dressing carried by [`Poset`]. Sets of elements are [`ElemSet`]
//! bitsets over those indices.

pub mod antichains;
pub mod census;
mod cover;
pub mod elemset;
pub mod error;
pub mod gadgets;
pub mod ideals;
pub mod interval_tree;
pub mod io;
pub mod poset;
pub mod priority;
pub mod separation;

pub use elemset::ElemSet;
pub use error::{Error, Result, Violation};
pub use poset::{Cones, Poset};
pub use ideals::IdealCover;
pub use interval_tree::ApproxSeq;
