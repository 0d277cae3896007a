//! Exact non-archimedean algebra for family Floer computations.

pub mod affinoid;
pub mod category;
pub mod cli;
pub mod cech;
pub mod linalg;
pub mod novikov;
pub mod operator;
pub mod polytope;
pub mod random;
pub mod rational;
pub mod report;
pub mod text;
pub mod verify;
