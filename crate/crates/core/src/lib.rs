//! Finite fields, weighted projective geometry, evaluation codes and their
//! CSS quantum lifts, with exact parameter computation at desk scale.

pub mod chain;
pub mod cli;
pub mod corpus;
pub mod error;
pub mod gf;
pub mod gpoly;
pub mod io;
pub mod lincode;
pub mod orbifold;
pub mod quantum;
pub mod wgeom;

pub use error::{Error, Result};
pub use gf::{Elem, Field};
