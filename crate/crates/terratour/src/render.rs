//! SVG rendering of a terrain, its visibility regions and a tour.
//!
//! Output layout, in drawing order: a white background, one grayscale
//! `<path>` per contour level (darker is higher), one `<polygon>` per region
//! with its own stroke hue, the tour as a single cyan `<polyline>` that
//! repeats its first waypoint at the end, and one `<circle>` per point of
//! interest. The plane's y axis points up; SVG's points down, so y is
//! mirrored about the terrain bounds.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use terratour_core::terrain::Tin;
use terratour_core::visibility::VisibilityRegion;
use terratour_core::Point2;

use crate::error::{Error, Result};
use crate::formats::WaypointsJson;

/// Contour levels drawn between the lowest and highest terrain node.
pub const CONTOUR_LEVELS: usize = 10;

const TOUR_STROKE: &str = "#00ffff";

struct Frame {
    ymax: f64,
    scale: f64,
}

impl Frame {
    fn xy(&self, p: Point2) -> (f64, f64) {
        (p.x, self.ymax - p.y)
    }

    fn pt(&self, p: Point2) -> String {
        let (x, y) = self.xy(p);
        format!("{x:.3},{y:.3}")
    }
}

fn region_stroke(i: usize, n: usize) -> String {
    // evenly spaced hues, shifted off cyan so regions never look like the tour
    let hue = (20.0 + 330.0 * i as f64 / n.max(1) as f64) % 360.0;
    format!("hsl({hue:.1},75%,40%)")
}

/// Segments where `level` cuts each triangle.
fn contour_segments(tin: &Tin, level: f64) -> Vec<(Point2, Point2)> {
    let v = tin.vertices();
    let mut out = Vec::new();
    for t in tin.triangles() {
        let p: Vec<[f64; 3]> = t.iter().map(|&i| v[i]).collect();
        let mut hits = Vec::with_capacity(2);
        for (a, b) in [(0, 1), (1, 2), (2, 0)] {
            let (za, zb) = (p[a][2], p[b][2]);
            // half-open test so a level through a node is counted once
            if (za < level) != (zb < level) {
                let s = (level - za) / (zb - za);
                hits.push(Point2::new(
                    p[a][0] + s * (p[b][0] - p[a][0]),
                    p[a][1] + s * (p[b][1] - p[a][1]),
                ));
            }
        }
        if hits.len() == 2 {
            out.push((hits[0], hits[1]));
        }
    }
    out
}

/// Poi ids the tour refers to that have no region.
fn unknown_ids(regions: &[VisibilityRegion], tour: &WaypointsJson) -> Vec<usize> {
    let known: BTreeSet<usize> = regions.iter().map(|r| r.poi().id).collect();
    let referenced: BTreeSet<usize> = tour.poi_ids.iter().chain(&tour.mis_poi_ids).copied().collect();
    referenced.difference(&known).copied().collect()
}

pub fn render_svg(tin: &Tin, regions: &[VisibilityRegion], tour: &WaypointsJson) -> Result<String> {
    let missing = unknown_ids(regions, tour);
    if !missing.is_empty() {
        return Err(Error::Mismatch(format!(
            "tour refers to poi ids {missing:?} that have no region"
        )));
    }
    let mut seen = BTreeSet::new();
    for r in regions {
        if !seen.insert(r.poi().id) {
            return Err(Error::Mismatch(format!("poi id {} has two regions", r.poi().id)));
        }
    }
    let b = tin.bounds();
    if let Some(r) = regions.iter().find(|r| !b.contains(r.center())) {
        return Err(Error::Mismatch(format!("poi {} lies outside the terrain", r.poi().id)));
    }

    // regions may reach past the terrain, so frame both
    let mut lo = Point2::new(b.xmin, b.ymin);
    let mut hi = Point2::new(b.xmax, b.ymax);
    for p in regions
        .iter()
        .flat_map(|r| r.vertices())
        .chain(tour.waypoints.iter().map(|&w| Point2::from(w)))
    {
        lo = Point2::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Point2::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    let span = (hi.x - lo.x).max(hi.y - lo.y).max(1e-9);
    let frame = Frame {
        ymax: hi.y,
        scale: span / 800.0,
    };
    let stroke = |k: f64| frame.scale * k;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{:.3} 0 {:.3} {:.3}" width="800" height="{:.0}">"#,
        lo.x,
        hi.x - lo.x,
        hi.y - lo.y,
        800.0 * (hi.y - lo.y) / span
    );
    let _ = writeln!(
        s,
        r#"<rect x="{:.3}" y="0" width="{:.3}" height="{:.3}" fill="white"/>"#,
        lo.x,
        hi.x - lo.x,
        hi.y - lo.y
    );

    let (zmin, zmax) = tin
        .vertices()
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v[2]), b.max(v[2])));
    let _ = writeln!(s, r#"<g id="contours" fill="none">"#);
    if zmax > zmin {
        for k in 1..=CONTOUR_LEVELS {
            let t = k as f64 / (CONTOUR_LEVELS + 1) as f64;
            let level = zmin + t * (zmax - zmin);
            let segs = contour_segments(tin, level);
            if segs.is_empty() {
                continue;
            }
            let gray = (200.0 * (1.0 - t)).round() as u8;
            let mut d = String::new();
            for (a, b) in segs {
                let _ = write!(d, "M{}L{}", frame.pt(a), frame.pt(b));
            }
            let _ = writeln!(
                s,
                r#"<path d="{d}" stroke="rgb({gray},{gray},{gray})" stroke-width="{:.3}"/>"#,
                stroke(1.0)
            );
        }
    }
    let _ = writeln!(s, "</g>");

    let _ = writeln!(s, r#"<g id="regions" fill="none">"#);
    for (i, r) in regions.iter().enumerate() {
        let pts: Vec<String> = r.vertices().into_iter().map(|p| frame.pt(p)).collect();
        let _ = writeln!(
            s,
            r#"<polygon data-poi="{}" points="{}" stroke="{}" stroke-width="{:.3}"/>"#,
            r.poi().id,
            pts.join(" "),
            region_stroke(i, regions.len()),
            stroke(1.5)
        );
    }
    let _ = writeln!(s, "</g>");

    if let Some(&first) = tour.waypoints.first() {
        let pts: Vec<String> = tour
            .waypoints
            .iter()
            .chain(std::iter::once(&first))
            .map(|&w| frame.pt(w.into()))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline id="tour" points="{}" fill="none" stroke="{TOUR_STROKE}" stroke-width="{:.3}"/>"#,
            pts.join(" "),
            stroke(2.5)
        );
    }

    let _ = writeln!(s, r#"<g id="pois" fill="black">"#);
    for r in regions {
        let (x, y) = frame.xy(r.center());
        let _ = writeln!(
            s,
            r#"<circle data-poi="{}" cx="{x:.3}" cy="{y:.3}" r="{:.3}"/>"#,
            r.poi().id,
            stroke(4.0)
        );
    }
    let _ = writeln!(s, "</g>");
    s.push_str("</svg>\n");
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use terratour_core::terrain::{triangulate, GridDem};

    #[test]
    fn contour_of_plane_is_a_straight_cut() {
        // z = x on a 3×3 grid of unit cells: level 0.5 cuts x = 0.5 only
        let heights = vec![0.0, 1.0, 2.0, 0.0, 1.0, 2.0, 0.0, 1.0, 2.0];
        let dem = GridDem::new(3, 3, 1.0, Point2::new(0.0, 0.0), heights).unwrap();
        let segs = contour_segments(&triangulate(&dem), 0.5);
        assert!(!segs.is_empty());
        for (a, b) in segs {
            assert!((a.x - 0.5).abs() < 1e-12 && (b.x - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn strokes_are_distinct_and_not_cyan() {
        let n = 12;
        let all: BTreeSet<String> = (0..n).map(|i| region_stroke(i, n)).collect();
        assert_eq!(all.len(), n);
        assert!(!all.iter().any(|c| c.starts_with("hsl(180.0")));
    }
}
