//! Constructions built on the reduction engine.

pub mod cones;
pub mod two_tree;
pub mod unique;
pub mod x3c;

pub use cones::{cone_equivalence_check, ConeEquivalence};
pub use two_tree::{block_decomposition, is_2tree, TwoTreeReport};
pub use unique::{
    extend_unique_initial, greedy_trap, reverse_grow, search_unique_initial, search_unique_initial_with, GreedyTrap,
    UniqueInitial, UniqueSearch,
};
pub use x3c::{x3c_check, X3CCheck, X3CInstance};
