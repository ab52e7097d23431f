//! JSON documents for terrains, regions, GTSP instances and tours.
//!
//! All structs here are plain serde mirrors of the core types. Conversions
//! back into core types re-run the core validation.

use serde::{Deserialize, Serialize};
use terratour_core::gtsp::{GtspInstance, Provenance, Tour};
use terratour_core::terrain::{Bounds, Tin};
use terratour_core::tspn::ApproxTour;
use terratour_core::visibility::{Poi, VisibilityRegion};
use terratour_core::Point2;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundsJson {
    pub xmin: f64,
    pub ymin: f64,
    pub xmax: f64,
    pub ymax: f64,
}

impl From<Bounds> for BoundsJson {
    fn from(b: Bounds) -> Self {
        Self {
            xmin: b.xmin,
            ymin: b.ymin,
            xmax: b.xmax,
            ymax: b.ymax,
        }
    }
}

impl From<BoundsJson> for Bounds {
    fn from(b: BoundsJson) -> Self {
        Bounds {
            xmin: b.xmin,
            ymin: b.ymin,
            xmax: b.xmax,
            ymax: b.ymax,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TinJson {
    pub vertices: Vec<[f64; 3]>,
    pub triangles: Vec<[usize; 3]>,
    pub bounds: BoundsJson,
    pub lmax: f64,
}

impl From<&Tin> for TinJson {
    fn from(tin: &Tin) -> Self {
        Self {
            vertices: tin.vertices().to_vec(),
            triangles: tin.triangles().to_vec(),
            bounds: tin.bounds().into(),
            lmax: tin.lmax(),
        }
    }
}

impl TryFrom<TinJson> for Tin {
    type Error = Error;

    fn try_from(t: TinJson) -> Result<Tin> {
        Ok(Tin::from_parts(t.vertices, t.triangles, t.bounds.into(), t.lmax)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionJson {
    pub poi_id: usize,
    pub center: [f64; 2],
    pub poi_z: f64,
    pub h: f64,
    /// Camera half-angle in radians.
    pub delta: f64,
    pub d: usize,
    pub radial_extents: Vec<f64>,
}

impl From<&VisibilityRegion> for RegionJson {
    fn from(r: &VisibilityRegion) -> Self {
        Self {
            poi_id: r.poi().id,
            center: r.center().into(),
            poi_z: r.poi().z,
            h: r.h(),
            delta: r.delta(),
            d: r.d(),
            radial_extents: r.radial_extents().to_vec(),
        }
    }
}

impl TryFrom<RegionJson> for VisibilityRegion {
    type Error = Error;

    fn try_from(r: RegionJson) -> Result<VisibilityRegion> {
        if r.radial_extents.len() != r.d {
            return Err(Error::Mismatch(format!(
                "region {} declares d = {} but has {} radial extents",
                r.poi_id,
                r.d,
                r.radial_extents.len()
            )));
        }
        let poi = Poi {
            id: r.poi_id,
            x: r.center[0],
            y: r.center[1],
            z: r.poi_z,
        };
        Ok(VisibilityRegion::from_parts(poi, r.h, r.delta, r.radial_extents)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceJson {
    pub sets: Vec<Vec<usize>>,
    pub coords: Vec<[f64; 2]>,
}

impl From<&GtspInstance> for InstanceJson {
    fn from(inst: &GtspInstance) -> Self {
        Self {
            sets: inst.sets().to_vec(),
            coords: inst.coords().iter().map(|&p| p.into()).collect(),
        }
    }
}

impl TryFrom<InstanceJson> for GtspInstance {
    type Error = Error;

    fn try_from(i: InstanceJson) -> Result<GtspInstance> {
        let coords = i.coords.into_iter().map(Point2::from).collect();
        Ok(GtspInstance::new(i.sets, coords)?)
    }
}

/// A GTSP tour plus the derived waypoint list. `poi_ids[k]` is the point of
/// interest whose set the `k`-th waypoint was drawn from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TourJson {
    pub order: Vec<usize>,
    pub length: f64,
    pub provenance: String,
    #[serde(default)]
    pub waypoints: Vec<[f64; 2]>,
    #[serde(default)]
    pub poi_ids: Vec<usize>,
}

impl TourJson {
    pub fn new(tour: &Tour, inst: &GtspInstance, regions: &[VisibilityRegion]) -> Self {
        Self {
            order: tour.order.clone(),
            length: tour.length,
            provenance: tour.provenance.as_str().to_string(),
            waypoints: tour.waypoints(inst).into_iter().map(Into::into).collect(),
            poi_ids: tour
                .order
                .iter()
                .map(|&v| regions[inst.set_of(v)].poi().id)
                .collect(),
        }
    }

    pub fn to_tour(&self) -> Result<Tour> {
        let provenance = match self.provenance.as_str() {
            "exact" => Provenance::Exact,
            "alns" => Provenance::Alns,
            other => return Err(Error::Mismatch(format!("unknown provenance `{other}`"))),
        };
        Ok(Tour {
            order: self.order.clone(),
            length: self.length,
            provenance,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApproxTourJson {
    pub waypoints: Vec<[f64; 2]>,
    pub length: f64,
    pub mis_poi_ids: Vec<usize>,
    pub inner_radius: f64,
    pub outer_mis_size: usize,
    pub lower_bound: Option<f64>,
    pub ratio_constant: Option<f64>,
    pub containment_fallback: bool,
    pub tsp_mode: String,
}

impl From<&ApproxTour> for ApproxTourJson {
    fn from(t: &ApproxTour) -> Self {
        Self {
            waypoints: t.waypoints.iter().map(|&p| p.into()).collect(),
            length: t.length,
            mis_poi_ids: t.mis_poi_ids.clone(),
            inner_radius: t.inner_radius,
            outer_mis_size: t.outer_mis_size,
            lower_bound: t.lower_bound,
            ratio_constant: t.ratio_constant,
            containment_fallback: t.containment_fallback,
            tsp_mode: t.tsp_mode.as_str().to_string(),
        }
    }
}

/// Any tour file the renderer can draw: only the waypoint list matters.
#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct WaypointsJson {
    pub waypoints: Vec<[f64; 2]>,
    #[serde(default)]
    pub poi_ids: Vec<usize>,
    #[serde(default)]
    pub mis_poi_ids: Vec<usize>,
}

/// Point of interest as given on the command line: `z` is always re-read
/// from the terrain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoiJson {
    #[serde(default)]
    pub id: Option<usize>,
    pub x: f64,
    pub y: f64,
}

pub fn to_json_pretty<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &std::path::Path) -> Result<T> {
    Ok(serde_json::from_str(&crate::error::read_to_string(path)?)?)
}

pub fn write_json<T: Serialize>(path: &std::path::Path, value: &T) -> Result<()> {
    crate::error::write(path, to_json_pretty(value)?)
}

pub fn read_tin(path: &std::path::Path) -> Result<Tin> {
    read_json::<TinJson>(path)?.try_into()
}

pub fn read_regions(path: &std::path::Path) -> Result<Vec<VisibilityRegion>> {
    read_json::<Vec<RegionJson>>(path)?
        .into_iter()
        .map(TryInto::try_into)
        .collect()
}
