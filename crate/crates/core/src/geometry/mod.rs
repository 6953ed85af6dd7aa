//! Planar domains, point classification and circle/boundary arc profiles.

pub mod area;
mod corkscrew;
mod domain;
mod index;
mod point;
mod profile;

pub use corkscrew::{corkscrew_search, Ball, CorkscrewBalls};
pub use domain::{parse_curve_json, CurveFile, DomainKind, PlanarDomain, RegionLabel, SNAP_RELATIVE};
pub use point::{Frame, Point, Segment};
pub use profile::{Arc, ArcLengths, CircleProfile, ProfileScratch, JITTER, MAX_JITTER_RETRIES, TANGENCY_TOL};
