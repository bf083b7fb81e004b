pub mod canon;
pub mod cli;
pub mod collapse;
pub mod complex;
pub mod constructions;
pub mod degree_reduction;
pub mod engine;
pub mod enumerate;
pub mod error;
pub mod family;
pub mod graph;

mod bitset;

pub use complex::{Complex2, Face, Vertex};
pub use error::{Error, Result};
pub use family::FamilySpec;
pub use graph::Graph;
