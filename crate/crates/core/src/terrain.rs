//! Grid DEMs and the triangulated irregular network (TIN) built from them.
//!
//! A [`GridDem`] stores heights row-major with row 0 the northernmost row,
//! the same order the rows appear in an ESRI ASCII grid. [`triangulate`]
//! lifts it into a [`Tin`] whose vertex `j * ncols + i` is column `i`
//! (west to east) of grid row `j` counted from the south edge. Every cell is
//! split along its lower-left to upper-right diagonal.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geom::{self, Point2};

/// Relative tolerance (in units of `cellsize`) for merging ray crossings and
/// for accepting queries that sit on the terrain boundary.
pub const CROSSING_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct GridDem {
    ncols: usize,
    nrows: usize,
    cellsize: f64,
    origin: Point2,
    heights: Vec<f64>,
    base_elevation: f64,
}

impl GridDem {
    /// Builds a grid from row-major heights, row 0 northernmost. `origin` is
    /// the lower-left (south-west) corner node.
    pub fn new(
        ncols: usize,
        nrows: usize,
        cellsize: f64,
        origin: Point2,
        heights: Vec<f64>,
    ) -> Result<Self> {
        if ncols < 2 || nrows < 2 {
            return Err(Error::InvalidGrid("ncols and nrows must be at least 2"));
        }
        if !(cellsize.is_finite() && cellsize > 0.0) {
            return Err(Error::InvalidGrid("cellsize must be positive and finite"));
        }
        if !(origin.x.is_finite() && origin.y.is_finite()) {
            return Err(Error::InvalidGrid("origin must be finite"));
        }
        if heights.len() != ncols * nrows {
            return Err(Error::InvalidGrid("height count does not match ncols * nrows"));
        }
        if heights.iter().any(|h| !h.is_finite()) {
            return Err(Error::InvalidGrid("non-finite height"));
        }
        Ok(Self {
            ncols,
            nrows,
            cellsize,
            origin,
            heights,
            base_elevation: 0.0,
        })
    }

    /// Shifts heights so the minimum becomes exactly 0. The removed offset is
    /// accumulated in [`GridDem::base_elevation`].
    pub fn normalized(mut self) -> Self {
        let min = self.min_height();
        if min != 0.0 {
            for h in &mut self.heights {
                *h -= min;
            }
            self.base_elevation += min;
        }
        self
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn cellsize(&self) -> f64 {
        self.cellsize
    }

    pub fn origin(&self) -> Point2 {
        self.origin
    }

    /// Row-major heights, row 0 northernmost.
    pub fn heights(&self) -> &[f64] {
        &self.heights
    }

    /// Elevation that was subtracted by normalization.
    pub fn base_elevation(&self) -> f64 {
        self.base_elevation
    }

    /// Height at `row` (0 = north) and `col` (0 = west).
    pub fn height(&self, row: usize, col: usize) -> f64 {
        self.heights[row * self.ncols + col]
    }

    pub fn min_height(&self) -> f64 {
        self.heights.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_height(&self) -> f64 {
        self.heights.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Generates a grid with heights i.i.d. uniform on `[hmin, hmax]`.
///
/// The generator is ChaCha8 seeded with `seed` via `seed_from_u64`, stream 0.
/// Heights are drawn in row-major order as `hmin + (hmax - hmin) * u` where
/// `u` is the standard 53-bit uniform double in `[0, 1)`. The origin is the
/// plane origin.
pub fn random_grid(
    seed: u64,
    nrows: usize,
    ncols: usize,
    cellsize: f64,
    hmin: f64,
    hmax: f64,
) -> Result<GridDem> {
    if !(hmin.is_finite() && hmax.is_finite()) || hmin > hmax {
        return Err(Error::InvalidHeightRange { hmin, hmax });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let span = hmax - hmin;
    let heights = (0..nrows * ncols)
        .map(|_| {
            let u: f64 = rng.gen();
            if span == 0.0 {
                hmin
            } else {
                hmin + span * u
            }
        })
        .collect();
    GridDem::new(ncols, nrows, cellsize, Point2::new(0.0, 0.0), heights)
}

/// Axis-aligned rectangle on the plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds {
    pub xmin: f64,
    pub ymin: f64,
    pub xmax: f64,
    pub ymax: f64,
}

impl Bounds {
    pub fn width(&self) -> f64 {
        self.xmax - self.xmin
    }

    pub fn height(&self) -> f64 {
        self.ymax - self.ymin
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    pub fn contains(&self, p: Point2) -> bool {
        p.x >= self.xmin && p.x <= self.xmax && p.y >= self.ymin && p.y <= self.ymax
    }
}

/// Regular lattice underlying a grid-derived TIN.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Lattice {
    ncols: usize,
    nrows: usize,
    cellsize: f64,
    origin: Point2,
}

impl Lattice {
    fn node(&self, i: usize, j: usize) -> Point2 {
        Point2::new(
            self.origin.x + i as f64 * self.cellsize,
            self.origin.y + j as f64 * self.cellsize,
        )
    }

    fn triangles(&self) -> Vec<[usize; 3]> {
        let n = self.ncols;
        let mut tris = Vec::with_capacity(2 * (self.nrows - 1) * (self.ncols - 1));
        for j in 0..self.nrows - 1 {
            for i in 0..self.ncols - 1 {
                let v00 = j * n + i;
                let v10 = v00 + 1;
                let v01 = v00 + n;
                let v11 = v01 + 1;
                tris.push([v00, v10, v11]);
                tris.push([v00, v11, v01]);
            }
        }
        tris
    }
}

/// One vertex of a ray's height profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileBreakpoint {
    /// Horizontal distance from the ray origin.
    pub t: f64,
    /// Terrain height at that distance.
    pub z: f64,
    /// Slope `dz/dt` of the linear piece starting here; 0 for the last
    /// breakpoint.
    pub slope: f64,
}

/// Piecewise-linear terrain over a regular grid triangulation.
#[derive(Debug, Clone, PartialEq)]
pub struct Tin {
    vertices: Vec<[f64; 3]>,
    triangles: Vec<[usize; 3]>,
    bounds: Bounds,
    lmax: f64,
    lattice: Lattice,
}

/// Splits every grid cell into two triangles along its lower-left to
/// upper-right diagonal. Heights are normalized so the lowest vertex is 0.
pub fn triangulate(dem: &GridDem) -> Tin {
    let lattice = Lattice {
        ncols: dem.ncols,
        nrows: dem.nrows,
        cellsize: dem.cellsize,
        origin: dem.origin,
    };
    let min = dem.min_height();
    let mut vertices = Vec::with_capacity(dem.ncols * dem.nrows);
    for j in 0..dem.nrows {
        let row = dem.nrows - 1 - j;
        for i in 0..dem.ncols {
            let p = lattice.node(i, j);
            vertices.push([p.x, p.y, dem.height(row, i) - min]);
        }
    }
    let lmax = vertices.iter().map(|v| v[2]).fold(0.0, f64::max);
    let far = lattice.node(dem.ncols - 1, dem.nrows - 1);
    Tin {
        triangles: lattice.triangles(),
        vertices,
        bounds: Bounds {
            xmin: dem.origin.x,
            ymin: dem.origin.y,
            xmax: far.x,
            ymax: far.y,
        },
        lmax,
        lattice,
    }
}

impl Tin {
    /// Rebuilds a TIN from its exported parts, checking that it is a grid
    /// triangulation with the fixed diagonal convention and normalized
    /// heights.
    pub fn from_parts(
        vertices: Vec<[f64; 3]>,
        triangles: Vec<[usize; 3]>,
        bounds: Bounds,
        lmax: f64,
    ) -> Result<Self> {
        if vertices.len() < 4 {
            return Err(Error::InvalidTin("need at least 4 vertices"));
        }
        if vertices.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::InvalidTin("non-finite coordinate"));
        }
        let y0 = vertices[0][1];
        let ncols = vertices.iter().take_while(|v| v[1] == y0).count();
        if ncols < 2 || vertices.len() % ncols != 0 {
            return Err(Error::InvalidTin("vertices are not a regular grid"));
        }
        let nrows = vertices.len() / ncols;
        if nrows < 2 {
            return Err(Error::InvalidTin("vertices are not a regular grid"));
        }
        let lattice = Lattice {
            ncols,
            nrows,
            cellsize: vertices[1][0] - vertices[0][0],
            origin: Point2::new(vertices[0][0], y0),
        };
        if !(lattice.cellsize > 0.0) {
            return Err(Error::InvalidTin("non-positive grid spacing"));
        }
        let tol = CROSSING_TOL * lattice.cellsize;
        for j in 0..nrows {
            for i in 0..ncols {
                let v = vertices[j * ncols + i];
                let p = lattice.node(i, j);
                if (v[0] - p.x).abs() > tol || (v[1] - p.y).abs() > tol {
                    return Err(Error::InvalidTin("vertices are not a regular grid"));
                }
            }
        }
        if triangles != lattice.triangles() {
            return Err(Error::InvalidTin(
                "triangles do not follow the lower-left to upper-right diagonal layout",
            ));
        }
        let zmin = vertices.iter().map(|v| v[2]).fold(f64::INFINITY, f64::min);
        let zmax = vertices.iter().map(|v| v[2]).fold(f64::NEG_INFINITY, f64::max);
        if zmin != 0.0 {
            return Err(Error::InvalidTin("minimum vertex height must be 0"));
        }
        if zmax != lmax {
            return Err(Error::InvalidTin("lmax does not match the highest vertex"));
        }
        let far = lattice.node(ncols - 1, nrows - 1);
        let expect = Bounds {
            xmin: lattice.origin.x,
            ymin: lattice.origin.y,
            xmax: far.x,
            ymax: far.y,
        };
        let close = |a: f64, b: f64| (a - b).abs() <= tol;
        if !(close(bounds.xmin, expect.xmin)
            && close(bounds.ymin, expect.ymin)
            && close(bounds.xmax, expect.xmax)
            && close(bounds.ymax, expect.ymax))
        {
            return Err(Error::InvalidTin("bounds do not match the vertex grid"));
        }
        Ok(Self {
            vertices,
            triangles,
            bounds: expect,
            lmax,
            lattice,
        })
    }

    pub fn vertices(&self) -> &[[f64; 3]] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn bounds(&self) -> Bounds {
        self.bounds
    }

    /// Height of the highest vertex (the terrain maximum `l`).
    pub fn lmax(&self) -> f64 {
        self.lmax
    }

    pub fn cellsize(&self) -> f64 {
        self.lattice.cellsize
    }

    pub fn ncols(&self) -> usize {
        self.lattice.ncols
    }

    pub fn nrows(&self) -> usize {
        self.lattice.nrows
    }

    /// Projected (2D) area of triangle `t`, positive for counter-clockwise.
    pub fn triangle_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangles[t].map(|i| self.vertices[i]);
        0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]))
    }

    /// Terrain height at `(x, y)` by barycentric interpolation inside the
    /// containing triangle.
    pub fn height_at(&self, x: f64, y: f64) -> Result<f64> {
        let lat = &self.lattice;
        let tol = CROSSING_TOL * lat.cellsize;
        let b = &self.bounds;
        if !(x >= b.xmin - tol && x <= b.xmax + tol && y >= b.ymin - tol && y <= b.ymax + tol) {
            return Err(Error::OutOfBounds { x, y });
        }
        let fx = (x - lat.origin.x) / lat.cellsize;
        let fy = (y - lat.origin.y) / lat.cellsize;
        let i = (geom::floor(fx).max(0.0) as usize).min(lat.ncols - 2);
        let j = (geom::floor(fy).max(0.0) as usize).min(lat.nrows - 2);
        let u = fx - i as f64;
        let v = fy - j as f64;
        let n = lat.ncols;
        let z = |k: usize| self.vertices[k][2];
        let v00 = j * n + i;
        let (z00, z10, z01, z11) = (z(v00), z(v00 + 1), z(v00 + n), z(v00 + n + 1));
        Ok(if u >= v {
            // lower-right triangle (v00, v10, v11)
            (1.0 - u) * z00 + (u - v) * z10 + v * z11
        } else {
            // upper-left triangle (v00, v11, v01)
            (1.0 - v) * z00 + (v - u) * z01 + u * z11
        })
    }

    /// Height profile of the terrain along a horizontal ray.
    ///
    /// Breakpoints sit at `t = 0`, at every crossing with a triangle edge,
    /// and at the exit through the terrain boundary. Heights between two
    /// consecutive breakpoints are exactly linear in `t`.
    pub fn ray_profile(&self, origin: Point2, azimuth: f64) -> Result<Vec<ProfileBreakpoint>> {
        let lat = &self.lattice;
        let tol = CROSSING_TOL * lat.cellsize;
        let b = &self.bounds;
        if !(origin.x >= b.xmin - tol
            && origin.x <= b.xmax + tol
            && origin.y >= b.ymin - tol
            && origin.y <= b.ymax + tol)
        {
            return Err(Error::OutOfBounds {
                x: origin.x,
                y: origin.y,
            });
        }
        let dir = Point2::from_angle(azimuth);
        let exit_along = |o: f64, d: f64, lo: f64, hi: f64| {
            if d > 0.0 {
                ((hi - o) / d).max(0.0)
            } else if d < 0.0 {
                ((lo - o) / d).max(0.0)
            } else {
                f64::INFINITY
            }
        };
        let t_exit = exit_along(origin.x, dir.x, b.xmin, b.xmax)
            .min(exit_along(origin.y, dir.y, b.ymin, b.ymax));

        let mut ts = Vec::new();
        ts.push(0.0);
        let mut push = |t: f64| {
            if t > 0.0 && t < t_exit {
                ts.push(t);
            }
        };
        // x = x0 + i * cs
        if dir.x != 0.0 {
            for i in 0..lat.ncols {
                push((lat.origin.x + i as f64 * lat.cellsize - origin.x) / dir.x);
            }
        }
        // y = y0 + j * cs
        if dir.y != 0.0 {
            for j in 0..lat.nrows {
                push((lat.origin.y + j as f64 * lat.cellsize - origin.y) / dir.y);
            }
        }
        // cell diagonals: (y - y0) - (x - x0) = k * cs
        let ddiag = dir.y - dir.x;
        if ddiag != 0.0 {
            let c0 = (origin.y - lat.origin.y) - (origin.x - lat.origin.x);
            let kmin = -(lat.ncols as i64 - 1);
            let kmax = lat.nrows as i64 - 1;
            for k in kmin..=kmax {
                push((k as f64 * lat.cellsize - c0) / ddiag);
            }
        }
        ts.push(t_exit);
        ts.sort_by(f64::total_cmp);

        let mut merged: Vec<f64> = Vec::with_capacity(ts.len());
        for t in ts {
            match merged.last() {
                Some(&last) if t - last <= tol => {
                    // keep the exit point exact
                    if t == t_exit {
                        *merged.last_mut().unwrap() = if merged.len() == 1 { last } else { t };
                    }
                }
                _ => merged.push(t),
            }
        }

        let mut profile = Vec::with_capacity(merged.len());
        for &t in &merged {
            let p = origin + dir * t;
            let z = self.height_at(p.x, p.y)?;
            profile.push(ProfileBreakpoint { t, z, slope: 0.0 });
        }
        for k in 0..profile.len().saturating_sub(1) {
            let (a, b) = (profile[k], profile[k + 1]);
            profile[k].slope = (b.z - a.z) / (b.t - a.t);
        }
        Ok(profile)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn grid(ncols: usize, nrows: usize, cs: f64, heights: Vec<f64>) -> GridDem {
        GridDem::new(ncols, nrows, cs, Point2::new(0.0, 0.0), heights).unwrap()
    }

    #[test]
    fn two_by_two_triangulates_to_two() {
        let tin = triangulate(&grid(2, 2, 1.0, vec![1.0, 2.0, 3.0, 4.0]));
        assert_eq!(tin.triangles().len(), 2);
        assert_eq!(tin.lmax(), 3.0);
    }

    #[test]
    fn ten_by_ten_triangle_count_and_tiling() {
        let dem = random_grid(3, 10, 10, 200.0 / 9.0, 0.0, 100.0).unwrap();
        let tin = triangulate(&dem);
        assert_eq!(tin.triangles().len(), 162);
        let total: f64 = (0..162).map(|t| tin.triangle_area(t)).sum();
        let expect = 81.0 * (200.0f64 / 9.0).powi(2);
        assert!((total - expect).abs() <= 1e-9 * expect);
        assert!((tin.bounds().area() - expect).abs() <= 1e-9 * expect);
        assert!((0..162).all(|t| tin.triangle_area(t) > 0.0));
    }

    #[test]
    fn random_grid_is_deterministic_and_in_range() {
        let a = random_grid(42, 10, 10, 22.22, 0.0, 100.0).unwrap();
        let b = random_grid(42, 10, 10, 22.22, 0.0, 100.0).unwrap();
        assert_eq!(a, b);
        assert!(a.heights().iter().all(|h| (0.0..=100.0).contains(h)));
        let c = random_grid(43, 10, 10, 22.22, 0.0, 100.0).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn degenerate_height_interval() {
        let g = random_grid(1, 4, 5, 1.0, 5.0, 5.0).unwrap();
        assert!(g.heights().iter().all(|&h| h == 5.0));
        assert!(matches!(
            random_grid(1, 4, 5, 1.0, 5.0, 4.0),
            Err(Error::InvalidHeightRange { .. })
        ));
    }

    #[test]
    fn grid_validation() {
        let o = Point2::new(0.0, 0.0);
        assert!(GridDem::new(1, 2, 1.0, o, vec![0.0; 2]).is_err());
        assert!(GridDem::new(2, 2, 0.0, o, vec![0.0; 4]).is_err());
        assert!(GridDem::new(2, 2, 1.0, o, vec![0.0; 3]).is_err());
        assert!(GridDem::new(2, 2, 1.0, o, vec![0.0, 1.0, f64::NAN, 0.0]).is_err());
    }

    #[test]
    fn normalization_records_offset() {
        let g = grid(2, 2, 1.0, vec![1.0, 2.0, 3.0, 4.0]).normalized();
        assert_eq!(g.heights(), &[0.0, 1.0, 2.0, 3.0]);
        assert_eq!(g.base_elevation(), 1.0);
        assert_eq!(g.min_height(), 0.0);
    }

    #[test]
    fn height_at_nodes_and_edge_midpoints() {
        let dem = random_grid(5, 6, 7, 3.0, 0.0, 50.0).unwrap();
        let tin = triangulate(&dem);
        for v in tin.vertices() {
            assert_eq!(tin.height_at(v[0], v[1]).unwrap(), v[2]);
        }
        for tri in tin.triangles() {
            for e in 0..3 {
                let a = tin.vertices()[tri[e]];
                let b = tin.vertices()[tri[(e + 1) % 3]];
                let z = tin
                    .height_at(0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1]))
                    .unwrap();
                assert!((z - 0.5 * (a[2] + b[2])).abs() < 1e-12);
            }
        }
        assert!(matches!(
            tin.height_at(-1.0, 0.0),
            Err(Error::OutOfBounds { .. })
        ));
    }

    #[test]
    fn grid_row_order_is_north_first() {
        // row 0 (north) = [1, 2], row 1 (south) = [3, 4]
        let tin = triangulate(&grid(2, 2, 1.0, vec![1.0, 2.0, 3.0, 4.0]));
        assert_eq!(tin.height_at(0.0, 0.0).unwrap(), 2.0);
        assert_eq!(tin.height_at(0.0, 1.0).unwrap(), 0.0);
        assert_eq!(tin.height_at(1.0, 0.0).unwrap(), 3.0);
    }

    #[test]
    fn flat_profile() {
        let tin = triangulate(&grid(4, 4, 2.0, vec![7.0; 16]));
        let prof = tin.ray_profile(Point2::new(1.3, 2.1), 0.7).unwrap();
        assert!(prof.iter().all(|b| b.z == 0.0));
        assert!(prof.windows(2).all(|w| w[1].t > w[0].t));
    }

    #[test]
    fn axis_aligned_profile_hits_grid_lines() {
        let dem = random_grid(9, 5, 5, 2.5, 0.0, 10.0).unwrap();
        let tin = triangulate(&dem);
        let prof = tin.ray_profile(Point2::new(2.5, 5.0), 0.0).unwrap();
        let ts: Vec<f64> = prof.iter().map(|b| b.t).collect();
        // vertical lines at x = 5, 7.5, 10 and diagonal crossings between
        for k in 1..=3 {
            let want = 2.5 * k as f64;
            assert!(ts.iter().any(|t| (t - want).abs() < 1e-12), "{ts:?}");
        }
        assert_eq!(*ts.last().unwrap(), 7.5);
    }

    #[test]
    fn from_parts_roundtrip_and_rejections() {
        let tin = triangulate(&random_grid(2, 4, 3, 1.5, 0.0, 9.0).unwrap());
        let back = Tin::from_parts(
            tin.vertices().to_vec(),
            tin.triangles().to_vec(),
            tin.bounds(),
            tin.lmax(),
        )
        .unwrap();
        assert_eq!(back, tin);
        let mut tris = tin.triangles().to_vec();
        tris.swap(0, 1);
        assert!(Tin::from_parts(tin.vertices().to_vec(), tris, tin.bounds(), tin.lmax()).is_err());
        assert!(Tin::from_parts(
            tin.vertices().to_vec(),
            tin.triangles().to_vec(),
            tin.bounds(),
            tin.lmax() + 1.0
        )
        .is_err());
    }
}
