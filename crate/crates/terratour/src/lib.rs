//! File formats, the experiment harness and the `terratour` command line
//! front end built on `terratour-core`.
//!
//! - [`ascii_grid`]: ESRI ASCII grid ingest.
//! - [`formats`]: JSON documents for terrains, regions, instances and tours.
//! - [`gtsplib`]: GTSPLIB-style instance text.
//! - [`pipeline`]: one solve from points of interest to a validated tour.
//! - [`experiment`]: seeded matrices with `results.csv` and `summary.csv`.
//! - [`render`]: SVG output.

pub mod ascii_grid;
pub mod error;
pub mod experiment;
pub mod formats;
pub mod gtsplib;
pub mod pipeline;
pub mod render;

pub use error::{Error, Result};
