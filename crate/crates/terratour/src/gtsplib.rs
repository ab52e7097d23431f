//! GTSPLIB-style text for exchanging instances with external solvers.
//!
//! ```text
//! NAME: example
//! TYPE: GTSP
//! DIMENSION: 4
//! GTSP_SETS: 2
//! EDGE_WEIGHT_TYPE: EUC_2D
//! NODE_COORD_SECTION
//! 1 0 0
//! ...
//! GTSP_SET_SECTION
//! 1 1 2 -1
//! 2 3 4 -1
//! EOF
//! ```
//!
//! Node and set ids are 1-based in the file and 0-based in memory.
//! Coordinates are written with full round-trip precision; note that
//! external EUC_2D solvers round distances to integers.

use std::fmt::Write as _;

use terratour_core::gtsp::GtspInstance;
use terratour_core::Point2;

use crate::error::{Error, Result};

pub fn write_gtsplib(name: &str, inst: &GtspInstance) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "NAME: {name}");
    let _ = writeln!(s, "TYPE: GTSP");
    let _ = writeln!(s, "DIMENSION: {}", inst.vertex_count());
    let _ = writeln!(s, "GTSP_SETS: {}", inst.set_count());
    let _ = writeln!(s, "EDGE_WEIGHT_TYPE: EUC_2D");
    let _ = writeln!(s, "NODE_COORD_SECTION");
    for (i, p) in inst.coords().iter().enumerate() {
        let _ = writeln!(s, "{} {:?} {:?}", i + 1, p.x, p.y);
    }
    let _ = writeln!(s, "GTSP_SET_SECTION");
    for (k, set) in inst.sets().iter().enumerate() {
        let _ = write!(s, "{}", k + 1);
        for v in set {
            let _ = write!(s, " {}", v + 1);
        }
        let _ = writeln!(s, " -1");
    }
    s.push_str("EOF\n");
    s
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Gtsplib(msg.into())
}

fn parse_num<T: std::str::FromStr>(tok: Option<&str>, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| bad(format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| bad(format!("invalid {what} `{tok}`")))
}

/// Parses the text produced by [`write_gtsplib`] (or any file with the same
/// sections and `EUC_2D` weights). Returns the instance name and instance.
pub fn parse_gtsplib(text: &str) -> Result<(String, GtspInstance)> {
    let mut name = String::new();
    let mut dimension: Option<usize> = None;
    let mut set_count: Option<usize> = None;
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let mut coords: Vec<Option<Point2>> = Vec::new();
    let mut sets: Vec<Option<Vec<usize>>> = Vec::new();

    while let Some(line) = lines.next() {
        if line == "EOF" {
            break;
        }
        if line == "NODE_COORD_SECTION" {
            let n = dimension.ok_or_else(|| bad("DIMENSION must precede NODE_COORD_SECTION"))?;
            coords = vec![None; n];
            for _ in 0..n {
                let line = lines.next().ok_or_else(|| bad("truncated NODE_COORD_SECTION"))?;
                let mut it = line.split_whitespace();
                let id: usize = parse_num(it.next(), "node id")?;
                let x: f64 = parse_num(it.next(), "x coordinate")?;
                let y: f64 = parse_num(it.next(), "y coordinate")?;
                if id == 0 || id > n || coords[id - 1].is_some() {
                    return Err(bad(format!("bad or repeated node id {id}")));
                }
                coords[id - 1] = Some(Point2::new(x, y));
            }
            continue;
        }
        if line == "GTSP_SET_SECTION" {
            let m = set_count.ok_or_else(|| bad("GTSP_SETS must precede GTSP_SET_SECTION"))?;
            sets = vec![None; m];
            for _ in 0..m {
                let line = lines.next().ok_or_else(|| bad("truncated GTSP_SET_SECTION"))?;
                let mut it = line.split_whitespace();
                let id: usize = parse_num(it.next(), "set id")?;
                if id == 0 || id > m || sets[id - 1].is_some() {
                    return Err(bad(format!("bad or repeated set id {id}")));
                }
                let mut members = Vec::new();
                loop {
                    let v: i64 = parse_num(it.next(), "set member")?;
                    if v == -1 {
                        break;
                    }
                    if v < 1 {
                        return Err(bad(format!("bad node id {v} in set {id}")));
                    }
                    members.push(v as usize - 1);
                }
                sets[id - 1] = Some(members);
            }
            continue;
        }
        let (key, value) = line
            .split_once(':')
            .ok_or_else(|| bad(format!("unexpected line `{line}`")))?;
        let value = value.trim();
        match key.trim() {
            "NAME" => name = value.to_string(),
            "TYPE" if value == "GTSP" => {}
            "TYPE" => return Err(bad(format!("unsupported TYPE `{value}`"))),
            "DIMENSION" => dimension = Some(parse_num(Some(value), "DIMENSION")?),
            "GTSP_SETS" => set_count = Some(parse_num(Some(value), "GTSP_SETS")?),
            "EDGE_WEIGHT_TYPE" if value == "EUC_2D" => {}
            "EDGE_WEIGHT_TYPE" => return Err(bad(format!("unsupported EDGE_WEIGHT_TYPE `{value}`"))),
            "COMMENT" => {}
            other => return Err(bad(format!("unknown key `{other}`"))),
        }
    }
    let coords = coords
        .into_iter()
        .collect::<Option<Vec<_>>>()
        .filter(|c| !c.is_empty())
        .ok_or_else(|| bad("missing node coordinates"))?;
    let sets = sets
        .into_iter()
        .collect::<Option<Vec<_>>>()
        .filter(|s| !s.is_empty())
        .ok_or_else(|| bad("missing sets"))?;
    Ok((name, GtspInstance::new(sets, coords)?))
}
