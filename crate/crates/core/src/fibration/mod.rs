//! Lefschetz fibration of a mirror potential and the dimer model read off
//! from its vanishing cycles.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dimer::{euler_check, EulerData};
use crate::error::Result;

pub mod branch;
pub mod contract;
pub mod critical;
pub mod cycles;
pub mod render;
pub mod surface;

pub use branch::{
    deformation_time, deformation_trajectory, track_all, track_collision, BranchKind, BranchPoint, BranchSet,
    Collision, FiberModel, Trajectory, VanishingPath,
};
pub use contract::{argument_projection_diagnostic, contract_polygons, contract_to_graph, ContractedGraph, ProjectionReport};
pub use critical::{critical_data, CriticalPoint};
pub use cycles::{
    face_census, homotopic, intersection_count, intersection_table, lift_cycle, CyclePath, CycleSystem, FaceCensus,
    MatchingArc, PreimageComplex,
};
pub use surface::{Cut, Puncture, RibbonSurface, Sheet};

/// Dimensions obtained by composing intersections of consecutive cycles,
/// with each intersection point of a non-consecutive pair counted as one
/// relation among the composites it spans.
///
/// Keys are 1-based pairs `i < j`, as in [`intersection_table`].
pub fn composed_counts(table: &BTreeMap<(usize, usize), usize>, n: usize) -> BTreeMap<(usize, usize), i64> {
    let get = |i: usize, j: usize| table.get(&(i, j)).copied().unwrap_or(0) as i64;
    let chain = |i: usize, j: usize| (i..j).map(|k| get(k, k + 1)).product::<i64>();
    let mut out = BTreeMap::new();
    for i in 1..=n {
        for j in i + 1..=n {
            let mut dim = chain(i, j);
            for a in i..j {
                for b in a + 2..=j {
                    dim -= get(a, b) * chain(i, a) * chain(b, j);
                }
            }
            out.insert((i, j), dim);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentSummary {
    pub path: usize,
    pub critical_value: Complex64,
    pub start: Complex64,
    pub meet: Complex64,
    pub segment_error: f64,
}

/// Everything computed for one cycle system, in serializable form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FibrationReport {
    pub collection: String,
    pub critical_points: Vec<CriticalPoint>,
    pub segments: Vec<SegmentSummary>,
    pub surface_euler_characteristic: i64,
    pub punctures: usize,
    pub census: FaceCensus,
    /// Keys formatted `"i,j"`.
    pub intersections: BTreeMap<String, usize>,
    pub contracted_nodes: usize,
    pub contracted_edges: usize,
    pub contracted_euler: EulerData,
    pub contracted_dimer: crate::dimer::DimerModel,
    pub projection: ProjectionReport,
}

/// Runs the whole pipeline for a named cycle system (`ec` or `ec2`).
pub fn fibration_report(system: &CycleSystem, steps: usize) -> Result<FibrationReport> {
    let model = system.model;
    let critical_points = critical_data(&model.potential())?;
    let segments = track_all(&model, steps)?
        .into_iter()
        .map(|c| SegmentSummary {
            path: c.path.index + 1,
            critical_value: c.path.end,
            start: c.start,
            meet: c.meet,
            segment_error: c.segment_error,
        })
        .collect();
    let surface = RibbonSurface::new(model);
    let complex = PreimageComplex::build(system)?;
    let census = face_census(&complex);
    let intersections =
        intersection_table(&complex)?.into_iter().map(|((i, j), n)| (format!("{i},{j}"), n)).collect();
    let graph = contract_to_graph(&complex, &census)?;
    let contracted_euler = euler_check(&graph.dimer)?;
    Ok(FibrationReport {
        collection: system.name.clone(),
        critical_points,
        segments,
        surface_euler_characteristic: surface.euler_characteristic(),
        punctures: surface.puncture_count(),
        census,
        intersections,
        contracted_nodes: graph.dimer.nodes.len(),
        contracted_edges: graph.dimer.edges.len(),
        contracted_euler,
        projection: argument_projection_diagnostic(&graph),
        contracted_dimer: graph.dimer,
    })
}
