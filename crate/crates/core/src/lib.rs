pub mod arith;
pub mod bounds;
pub mod group;
pub mod poly;
pub mod catalog;
pub mod invariant;
