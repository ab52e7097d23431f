//! Planning short UAV tours that visually monitor points of interest on a
//! 2.5D terrain with a downward-facing camera of limited field of view.
//!
//! The crate is `no_std` and only needs `alloc`. It covers the pure
//! computational pipeline:
//!
//! - [`terrain`]: grid DEMs, their triangulation into a TIN, height and
//!   ray-profile queries.
//! - [`visibility`]: horizon elevation per azimuth and the star-shaped
//!   visibility region on the flight plane.
//! - [`tspn`]: the constant-factor disk approximation together with its
//!   lower-bound and ratio certificates.
//! - [`gtsp`]: reduction of the regions to a generalized TSP, an exact
//!   enumeration solver, an ALNS heuristic, and subtour separation.
//!
//! File formats, the experiment harness and the command line live in the
//! `terratour` crate.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod error;
pub mod geom;
pub mod gtsp;
pub mod terrain;
pub mod tsp;
pub mod tspn;
pub mod visibility;

pub use error::{Error, Result};
pub use geom::Point2;
