//! Algorithms for affine Springer fibers in the truncated/orbital setting:
//! root data, toric fans, Cox rings, Springer homology, endoscopic strata and
//! point counts over finite fields.

pub mod bruteforce;
pub mod cox;
pub mod cyclotomic;
pub mod endoscopy;
pub mod error;
pub mod fan;
pub mod field;
pub mod finite_field;
pub mod lattice;
pub mod laurent;
pub mod linalg;
pub mod orbital;
pub mod poly;
pub mod rootdata;
pub mod sl2;
pub mod springer;

pub use error::{Error, Result};
