//! Visibility regions on the constant-altitude flight plane.
//!
//! For a point of interest the horizon elevation `ε` is found per azimuth
//! from the exact piecewise-linear ray profile of the TIN. The usable
//! half-angle in that direction is `min(π/2 − ε, δ)` and the region boundary
//! lies at radius `(h − z)·tan(min(π/2 − ε, δ))` from the point's (x, y).
//! Between sampled azimuths the boundary radius is interpolated linearly in
//! angle, which makes every region star-shaped about its center.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geom::{self, Point2, TAU};
use crate::terrain::Tin;

/// Relative slack applied to the interpolated radius in [`VisibilityRegion::contains`].
pub const MEMBERSHIP_TOL: f64 = 1e-9;

/// A point of interest on the terrain surface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Poi {
    pub id: usize,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Poi {
    /// Places a point of interest at `(x, y)` with its height read from `tin`.
    pub fn on_terrain(tin: &Tin, id: usize, x: f64, y: f64) -> Result<Self> {
        let z = tin.height_at(x, y)?;
        Ok(Self { id, x, y, z })
    }

    pub fn position(&self) -> Point2 {
        Point2::new(self.x, self.y)
    }
}

/// Draws `count` points uniformly inside the terrain bounds shrunk by
/// `margin` on every side.
///
/// Uses ChaCha8 seeded with `seed` on stream `stream`; each point consumes two
/// uniform doubles (x then y). Ids are `0..count`.
pub fn random_pois(tin: &Tin, count: usize, margin: f64, seed: u64, stream: u64) -> Result<Vec<Poi>> {
    let b = tin.bounds();
    let w = b.width() - 2.0 * margin;
    let hgt = b.height() - 2.0 * margin;
    if !(w >= 0.0 && hgt >= 0.0) {
        return Err(Error::InvalidGrid("margin leaves no room for points of interest"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    (0..count)
        .map(|id| {
            let ux: f64 = rng.gen();
            let uy: f64 = rng.gen();
            Poi::on_terrain(tin, id, b.xmin + margin + w * ux, b.ymin + margin + hgt * uy)
        })
        .collect()
}

/// Camera and sampling parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ViewParams {
    delta: f64,
    h: f64,
    d: usize,
}

impl ViewParams {
    /// `delta` is the camera half-angle in radians, `h` the flight altitude
    /// and `d` the number of sampled azimuths.
    pub fn new(delta: f64, h: f64, d: usize) -> Result<Self> {
        if !(delta > 0.0 && delta < core::f64::consts::FRAC_PI_2) {
            return Err(Error::InvalidViewParams("delta must lie in (0, pi/2)"));
        }
        if !(h.is_finite() && h > 0.0) {
            return Err(Error::InvalidViewParams("altitude must be positive and finite"));
        }
        if d < 3 {
            return Err(Error::InvalidViewParams("need at least 3 azimuth samples"));
        }
        Ok(Self { delta, h, d })
    }

    pub fn from_degrees(delta_deg: f64, h: f64, d: usize) -> Result<Self> {
        Self::new(delta_deg.to_radians(), h, d)
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Footprint radius `h·tan δ` of the unobstructed camera cone from the
    /// ground plane.
    pub fn outer_radius(&self) -> f64 {
        self.h * geom::tan(self.delta)
    }

    pub fn check_terrain(&self, tin: &Tin) -> Result<()> {
        if tin.lmax() >= self.h {
            return Err(Error::AltitudeTooLow {
                h: self.h,
                lmax: tin.lmax(),
            });
        }
        Ok(())
    }
}

/// Elevation angle of the global horizon seen from `poi` along `azimuth`.
///
/// The elevation along each linear piece of the ray profile is monotone in
/// the distance, so the supremum is attained at a breakpoint or, for the
/// piece leaving the point itself, equals `atan` of that piece's slope.
/// The result is clamped to be non-negative.
pub fn horizon_elevation(tin: &Tin, poi: &Poi, azimuth: f64) -> Result<f64> {
    let profile = tin.ray_profile(poi.position(), azimuth)?;
    let mut eps: f64 = 0.0;
    if profile.len() >= 2 {
        eps = eps.max(geom::atan(profile[0].slope));
        for bp in &profile[1..] {
            eps = eps.max(geom::atan2(bp.z - poi.z, bp.t));
        }
    }
    Ok(eps)
}

/// Star-shaped visibility region of one point of interest.
#[derive(Debug, Clone, PartialEq)]
pub struct VisibilityRegion {
    poi: Poi,
    h: f64,
    delta: f64,
    radial_extents: Vec<f64>,
}

/// Builds the visibility region of `poi` by sampling `d` azimuths
/// `θ_k = 2πk/d` counter-clockwise from +x.
pub fn compute_region(tin: &Tin, poi: &Poi, params: &ViewParams) -> Result<VisibilityRegion> {
    params.check_terrain(tin)?;
    let d = params.d();
    let lift = params.h() - poi.z;
    let radial_extents = (0..d)
        .map(|k| {
            let theta = azimuth(k, d);
            let eps = horizon_elevation(tin, poi, theta)?;
            let upsilon = core::f64::consts::FRAC_PI_2 - eps;
            Ok(lift * geom::tan(upsilon.min(params.delta())))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(VisibilityRegion {
        poi: *poi,
        h: params.h(),
        delta: params.delta(),
        radial_extents,
    })
}

/// Azimuth of sample `k` out of `d`.
pub fn azimuth(k: usize, d: usize) -> f64 {
    TAU * k as f64 / d as f64
}

impl VisibilityRegion {
    /// Reassembles a region from stored radii (e.g. a JSON export).
    pub fn from_parts(poi: Poi, h: f64, delta: f64, radial_extents: Vec<f64>) -> Result<Self> {
        if radial_extents.len() < 3 {
            return Err(Error::InvalidViewParams("need at least 3 radial extents"));
        }
        if radial_extents.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
            return Err(Error::InvalidViewParams("radial extents must be positive"));
        }
        Ok(Self {
            poi,
            h,
            delta,
            radial_extents,
        })
    }

    pub fn poi(&self) -> &Poi {
        &self.poi
    }

    pub fn center(&self) -> Point2 {
        self.poi.position()
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn d(&self) -> usize {
        self.radial_extents.len()
    }

    pub fn radial_extents(&self) -> &[f64] {
        &self.radial_extents
    }

    /// Boundary vertex `k`.
    pub fn vertex(&self, k: usize) -> Point2 {
        self.center() + Point2::from_angle(azimuth(k, self.d())) * self.radial_extents[k]
    }

    pub fn vertices(&self) -> Vec<Point2> {
        (0..self.d()).map(|k| self.vertex(k)).collect()
    }

    /// Boundary radius at `theta`, interpolated linearly between the two
    /// neighbouring sampled azimuths.
    pub fn radius_at(&self, theta: f64) -> f64 {
        let d = self.d();
        let s = geom::wrap_angle(theta) / TAU * d as f64;
        let fl = geom::floor(s);
        let k = (fl as usize) % d;
        let f = s - fl;
        let (r0, r1) = (self.radial_extents[k], self.radial_extents[(k + 1) % d]);
        r0 + f * (r1 - r0)
    }

    /// Closed star-shaped membership: `|q − c| ≤ r(θ_q)`.
    pub fn contains(&self, q: Point2) -> bool {
        let v = q - self.center();
        let rho = v.norm();
        if rho == 0.0 {
            return true;
        }
        rho <= self.radius_at(v.angle()) * (1.0 + MEMBERSHIP_TOL)
    }

    /// Smallest sampled radius. The centered disk of this radius lies inside
    /// the region under [`VisibilityRegion::contains`], since interpolated
    /// radii never drop below the smaller neighbour.
    pub fn min_extent(&self) -> f64 {
        self.radial_extents.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Radius of the largest centered disk inside the boundary polygon
    /// (straight chords between consecutive vertices): the minimum distance
    /// from the center to a boundary edge.
    pub fn inscribed_radius(&self) -> f64 {
        let c = self.center();
        let d = self.d();
        (0..d)
            .map(|k| c.dist_to_segment(self.vertex(k), self.vertex((k + 1) % d)))
            .fold(self.min_extent(), f64::min)
    }
}
