//! Exact arithmetic over Galois rings and decoders for Reed-Solomon codes
//! over rings and quaternary negacyclic codes in the Lee metric.

pub mod error;
pub mod field;
pub mod hensel;
pub mod key_solver;
pub mod nega;
pub mod poly;
pub mod rs;
pub mod ring;
pub mod series;
pub mod smith;

pub use error::{Error, Result};
pub use poly::{BiPoly, Poly};
pub use ring::{CoeffRing, Elem, GaloisRing, RingElem};
