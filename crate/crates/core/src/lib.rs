//! Exact computation of Nichols algebras of braided vector spaces.

pub mod braiding;
pub mod linalg;
pub mod nichols;
pub mod racks;
pub mod scalars;
pub mod symmetrizer;
pub mod tensorops;
