//! Quivers with potential, their decorated representations and mutations,
//! cluster X-charts and Landau-Ginzburg potentials, and type-A string cones.
//!
//! Vertices are 1-based in every public signature. Arrows are addressed by
//! string id at the boundary and by index (sorted id order) internally.

pub mod cluster;
pub mod error;
pub mod io;
pub mod linalg;
pub mod qp;
pub mod quiver;
pub mod rep;
pub mod symbolic;
pub mod typea;

pub use error::{Error, Result};
pub use linalg::{Mat, Q};
pub use qp::{Potential, QPInstance};
pub use quiver::{Arrow, BMatrix, IceQuiver};
pub use rep::DecoratedRep;
pub use symbolic::{LaurentExpr, RationalExpr, TropicalForm};
