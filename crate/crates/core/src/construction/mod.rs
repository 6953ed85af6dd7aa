//! Stopping-time construction of a Lipschitz graph approximating a measure.

mod diagnostics;
mod graph;
mod measure;
mod params;
mod stopping;
mod whitney;

pub use diagnostics::{diagnostics, dist_to_polyline, Diagnostics, PAIR_SAMPLE};
pub use graph::{
    sample_graph, select_ball, AffinePiece, BlendInfo, GraphFunction, GraphSamples, SourceBall, GRID_EXTENT,
    GRID_INTERVALS,
};
pub use measure::WeightedPointSet;
pub use params::{ConstructionParams, LADDER_TOP};
pub use stopping::{
    ball_line, classify_ball, stopping_radius, BallClass, ConeEnvelope, LineFunction, PointLabel, Stop, StoppingData,
};
pub use whitney::{
    whitney_cover, SampledLineFunction, WhitneyChecks, WhitneyCover, WhitneyInterval, CHECK_DILATION,
    NEIGHBOR_RATIO_BOUND, OVERLAP_BOUND, WHITNEY_RATIO,
};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{Frame, Point};
use crate::multiscale::min_width_strip;

/// Whitney descent stops `2^WHITNEY_DEPTH` times below the root radius.
pub const WHITNEY_DEPTH: i32 = 12;
/// Whitney intervals meeting `(−10R, 10R)` carry affine pieces.
pub const CENTRAL_RADIUS: f64 = 10.0;
/// Radii of the growth-constant probe: `R·2^{−k}`, `k = 0..GROWTH_OCTAVES`.
pub const GROWTH_OCTAVES: i32 = 9;
/// Atoms may sit this far outside the root ball, relative to `R`.
const SUPPORT_SLACK: f64 = 1e-9;

/// Mass of each class relative to `μ(B₀)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MassFractions {
    pub z: f64,
    pub ld: f64,
    pub ba: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Construction {
    pub params: ConstructionParams,
    /// Maps input coordinates to the normalized frame.
    pub frame: Frame,
    pub root_mass: f64,
    pub growth_constant: f64,
    pub labels: Vec<PointLabel>,
    pub fractions: MassFractions,
    pub cover: WhitneyCover,
    pub whitney: WhitneyChecks,
    pub graph: GraphFunction,
    pub samples: GraphSamples,
    pub diagnostics: Diagnostics,
    /// The measure in the normalized frame.
    #[serde(skip)]
    pub measure: WeightedPointSet,
    #[serde(skip)]
    pub stopping: StoppingData,
}

/// Rigid motion taking the best line of the root ball to the horizontal axis
/// and the projection of the root centre to the origin.
pub fn normalizing_frame(mu: &WeightedPointSet, params: &ConstructionParams) -> Result<Frame> {
    let mut ids = Vec::new();
    mu.ball_indices(params.root_center, params.root_radius, &mut ids);
    let pts: Vec<Point> = ids.iter().map(|&i| mu.points()[i]).collect();
    let line = min_width_strip(&pts).ok_or(Error::EmptyBall)?;
    let dir = line.direction();
    let origin = line.anchor + dir * (params.root_center - line.anchor).dot(dir);
    Ok(Frame { origin, angle: line.angle })
}

impl Construction {
    pub fn run(input: &WeightedPointSet, params: &ConstructionParams) -> Result<Self> {
        params.validate()?;
        let r0 = params.root_radius;
        let outside = input.points().iter().filter(|p| p.dist(params.root_center) > r0 * (1.0 + SUPPORT_SLACK)).count();
        if outside > 0 {
            return Err(Error::InvalidInput(format!("{outside} atoms lie outside the root ball")));
        }
        let root_mass = input.total_mass();
        if root_mass < params.c0 * r0 {
            return Err(Error::Precondition(format!(
                "root ball density {} is below c0 = {}",
                root_mass / r0,
                params.c0
            )));
        }
        let frame = normalizing_frame(input, params)?;
        let measure = input.to_local(&frame)?;
        let local = ConstructionParams { root_center: frame.to_local(params.root_center), ..params.clone() };

        let stopping = StoppingData::compute(&measure, &local)?;
        let labels: Vec<PointLabel> = (0..measure.len()).map(|i| stopping.label(i)).collect();
        let mut mass = [0.0; 3];
        for (l, w) in labels.iter().zip(measure.weights()) {
            mass[*l as usize] += w;
        }
        let fractions = MassFractions { z: mass[0] / root_mass, ld: mass[1] / root_mass, ba: mass[2] / root_mass };

        let scale = 2f64.powi(r0.log2().floor() as i32);
        let half = scale * 16.0;
        let floor = scale * 2f64.powi(-WHITNEY_DEPTH);
        let cover = whitney_cover(stopping.envelope(), -half, 2.0 * half, floor, CENTRAL_RADIUS * r0);
        let whitney = cover.check(stopping.envelope());
        let graph = GraphFunction::build(&measure, &cover, &stopping, &local)?;
        let samples = sample_graph(&graph, r0);
        let diagnostics = diagnostics(&measure, &stopping, &samples, &local);
        let radii: Vec<f64> = (0..GROWTH_OCTAVES).map(|k| r0 * 2f64.powi(-k)).collect();
        let growth_constant = measure.growth_constant(&radii);
        Ok(Construction {
            params: local,
            frame,
            root_mass,
            growth_constant,
            labels,
            fractions,
            cover,
            whitney,
            graph,
            samples,
            diagnostics,
            measure,
            stopping,
        })
    }
}
