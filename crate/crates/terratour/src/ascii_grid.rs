//! ESRI ASCII grid (`.asc`) ingest.
//!
//! Header keys are matched case-insensitively and may come in any order
//! before the first numeric data token. `xllcenter`/`yllcenter` are
//! accepted as well and shifted by half a cell. The first body row is the
//! northernmost one. Any cell equal to `NODATA_value` is rejected.

use terratour_core::terrain::GridDem;
use terratour_core::Point2;

use crate::error::{Error, Result};

#[derive(Default)]
struct Header {
    ncols: Option<usize>,
    nrows: Option<usize>,
    xll: Option<(f64, bool)>,
    yll: Option<(f64, bool)>,
    cellsize: Option<f64>,
    nodata: Option<f64>,
}

fn malformed(msg: impl Into<String>) -> Error {
    Error::MalformedGrid(msg.into())
}

/// Parses an ASCII grid and normalizes its heights so the minimum is 0.
/// The removed minimum is available as [`GridDem::base_elevation`].
pub fn parse_ascii_grid(text: &str) -> Result<GridDem> {
    let mut header = Header::default();
    let mut tokens = text.split_ascii_whitespace().peekable();
    while let Some(&tok) = tokens.peek() {
        if tok.parse::<f64>().is_ok() {
            break;
        }
        let key = tok.to_ascii_lowercase();
        tokens.next();
        let value = tokens
            .next()
            .ok_or_else(|| malformed(format!("missing value for `{tok}`")))?;
        let num = || {
            value
                .parse::<f64>()
                .map_err(|_| malformed(format!("`{tok}` has non-numeric value `{value}`")))
        };
        let count = || {
            value
                .parse::<usize>()
                .map_err(|_| malformed(format!("`{tok}` must be a non-negative integer")))
        };
        let slot_taken = match key.as_str() {
            "ncols" => header.ncols.replace(count()?).is_some(),
            "nrows" => header.nrows.replace(count()?).is_some(),
            "xllcorner" => header.xll.replace((num()?, false)).is_some(),
            "xllcenter" => header.xll.replace((num()?, true)).is_some(),
            "yllcorner" => header.yll.replace((num()?, false)).is_some(),
            "yllcenter" => header.yll.replace((num()?, true)).is_some(),
            "cellsize" => header.cellsize.replace(num()?).is_some(),
            "nodata_value" => header.nodata.replace(num()?).is_some(),
            _ => return Err(malformed(format!("unknown header key `{tok}`"))),
        };
        if slot_taken {
            return Err(malformed(format!("duplicate header key `{tok}`")));
        }
    }
    let ncols = header.ncols.ok_or_else(|| malformed("missing ncols"))?;
    let nrows = header.nrows.ok_or_else(|| malformed("missing nrows"))?;
    let cellsize = header.cellsize.ok_or_else(|| malformed("missing cellsize"))?;
    let (xll, xcenter) = header.xll.ok_or_else(|| malformed("missing xllcorner"))?;
    let (yll, ycenter) = header.yll.ok_or_else(|| malformed("missing yllcorner"))?;
    // Grid nodes sit at cell centers, so a corner reference moves inward.
    let origin = Point2::new(
        if xcenter { xll } else { xll + 0.5 * cellsize },
        if ycenter { yll } else { yll + 0.5 * cellsize },
    );

    let mut heights = Vec::with_capacity(ncols * nrows);
    for tok in tokens {
        let v: f64 = tok
            .parse()
            .map_err(|_| malformed(format!("non-numeric cell `{tok}`")))?;
        let k = heights.len();
        if header.nodata == Some(v) {
            return Err(Error::NodataPresent {
                row: k / ncols.max(1),
                col: k % ncols.max(1),
            });
        }
        if !v.is_finite() {
            return Err(malformed(format!("non-finite cell `{tok}`")));
        }
        heights.push(v);
    }
    if heights.len() != ncols * nrows {
        return Err(malformed(format!(
            "expected {} cells ({nrows} rows of {ncols}), found {}",
            ncols * nrows,
            heights.len()
        )));
    }
    Ok(GridDem::new(ncols, nrows, cellsize, origin, heights)?.normalized())
}

/// Reads and parses an ASCII grid file.
pub fn read_ascii_grid(path: &std::path::Path) -> Result<GridDem> {
    parse_ascii_grid(&crate::error::read_to_string(path)?)
}
