pub mod chain;
pub mod cocycle;
pub mod group;
pub mod rigidity;
pub mod skew;
