//! Exact-arithmetic convolution systems of finite probability spaces.
//!
//! The crate builds Tsirelson-style convolution systems over finite linearly
//! ordered time sets, the two partition-indexed projective systems attached
//! to them, the projective continuous product and the flow system realized
//! on full grids, and the associated L2 (sub)product systems of Hilbert
//! spaces. Every construction is verified exhaustively with exact rational
//! arithmetic; verification suites are registered by name and selected at
//! runtime (see [`suites`]).

pub mod convsys;
pub mod cpps;
pub mod describe;
pub mod error;
pub mod finprob;
pub mod fixtures;
pub mod l2;
pub mod order;
pub mod projective;
pub mod report;
pub mod sample;
pub mod suites;

pub use error::Error;
