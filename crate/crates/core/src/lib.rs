//! Exact computations with quivers, quivers with potentials, Jacobian
//! algebras, cluster seeds and cluster characters of modules.

pub mod character;
pub mod cli;
pub mod io;
pub mod jacobian;
pub mod linalg;
pub mod potential;
pub mod quiver;
pub mod repgrass;
pub mod seeds;
