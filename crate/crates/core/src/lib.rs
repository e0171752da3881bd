pub mod complex;
pub mod error;
pub mod f2;
pub mod graph;
pub mod harness;
pub mod hochster;
pub mod homology;
pub mod invariants;
pub mod subsets;
pub mod value;

pub use error::{Error, Result};
pub use value::{Caps, Extended};
