//! Painted binary trees and an exact convex realization of the
//! multiplihedra.

pub mod counting;
pub mod export;
pub mod hull_verify;
pub mod linalg;
pub mod lp;
pub mod metric_trees;
pub mod painted_trees;
pub mod rational;
pub mod realization;

pub use painted_trees::{BinaryPaintedTree, FacetTree, PaintedTree, TreeError};
pub use rational::Q;
pub use realization::{Hyperplane, RationalPoint, Weights};
