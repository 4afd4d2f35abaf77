//! Exact computation of infinitesimal Newton-Okounkov bodies, Borel-fixed
//! shapes and the successive minima read off from them.

pub mod bodies;
pub mod borel;
pub mod error;
pub mod exactlin;
pub mod export;
pub mod flagval;
pub mod monomial;
pub mod par;
pub mod polytope;
pub mod rat;
pub mod surfzar;
pub mod verify;

pub use error::{Error, Result};
pub use exactlin::RatMatrix;
pub use monomial::ExpVec;
pub use polytope::{Halfspace, RationalPolytope};
pub use rat::Rat;
