//! Colored path graphs indexing the terms of `E[u^* (Y/sqrt(n))^k v]`, their
//! canonical classes, and exact moment oracles built on them.

mod enumerate;
mod graph;
mod moments;

pub use enumerate::{
    enumerate_canonical, falling_factorial, unique_half_height_graph, CanonicalClass, MAX_ENUMERATION_K,
};
pub use graph::{expectation_contribution, EdgeType, PathGraph};
pub use moments::{
    class_table, exact_moment_bruteforce, exact_moment_by_classes, ClassMoment, ClassRow, MomentMethod,
    BRUTE_FORCE_LIMIT,
};
