//! Exact computational algebra over truncated Hensel local rings
//! A = F_q[t_1, ..., t_m] / m^l, together with the structures built on top of
//! them: unit groups with discrete logs, the general-position complex on
//! P^1(A), PGL_2 orbit spaces and the E^1 row they feed, pre-Bloch and Bloch
//! groups, and the congruence filtration of SL_n over these rings.
//!
//! Everything is exact (GF(p) or arbitrary-precision integers); nothing here
//! uses floating point. Enumerations follow fixed canonical orders so that
//! identical inputs give identical outputs, bit for bit.

pub mod abelian;
pub mod bloch;
pub mod congruence;
pub mod error;
pub mod field;
pub mod gf;
pub mod homology;
pub mod orbit;
pub mod pcomplex;
pub mod ring;
pub mod snf;
pub mod structure;
pub mod units;

pub use error::Error;
pub type Result<T> = std::result::Result<T, Error>;
