//! Exact lattice and Mukai-vector computations for moduli of sheaves on K3
//! and abelian surfaces: walls and chambers, orthogonal complements, and a
//! certified reduction of `v = 2w`, `w² = 2` data to a canonical form.

pub mod arith;
pub mod chambers;
pub mod cli;
pub mod error;
pub mod fixtures;
pub mod lattice;
pub mod mukai;
pub mod ols;
pub mod perp;
pub mod reduction;

pub use error::{Error, Result};
pub use lattice::{IntLattice, LatticeVector, Signature, SublatticeEmbedding};
pub use mukai::{MukaiVector, SurfaceKind, SurfaceModel};
