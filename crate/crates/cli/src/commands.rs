//! One function per subcommand.

use std::path::{Path, PathBuf};

use dimer_coamoeba::bundles::{
    fullness_proxy, hom_ext_dims, is_strong_exceptional, mutate, mutate_last_pair, Direction, ExceptionalCollection,
};
use dimer_coamoeba::coamoeba::{
    render_svg as render_coamoeba, sample_zero_locus, verify_cell_structure, verify_orientation, vertex_fiber,
    PredictedCoamoeba, SamplingGrid, TorusPoint,
};
use dimer_coamoeba::dimer::{
    characteristic_polynomial, enumerate_matchings, euler_check, fig11_dimer, fig24_dimer, from_fixture_text,
    homology_class, isoradial_report, render_svg as render_dimer, square_dimer, to_fixture_text, DimerModel,
};
use dimer_coamoeba::fibration::render::{
    render_branch_motion, render_cycle_images, render_deformation, render_s_plane_graph, render_torus_graph,
};
use dimer_coamoeba::fibration::{
    composed_counts, contract_to_graph, deformation_trajectory, face_census, fibration_report, intersection_table,
    track_all, CycleSystem, PreimageComplex,
};
use dimer_coamoeba::hananyvegh::{extract_dimer, render_svg as render_hv, sweep_classes, unique_admissible_class_on};
use dimer_coamoeba::lattice::unit_square;
use dimer_coamoeba::{parse_poly_with, LatticePoint, LatticePolygon};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::{envelope, write_file, CliError, Result, RunConfig};

fn pt(p: LatticePoint) -> Value {
    json!([p.u, p.v])
}

fn polygon_json(p: &LatticePolygon) -> Value {
    Value::Array(p.vertices().iter().copied().map(pt).collect())
}

/// `square`, or lattice points such as `"(0,0) (1,0) (1,1) (0,1)"`.
pub fn parse_polygon(spec: &str) -> Result<(String, LatticePolygon)> {
    if spec.trim() == "square" {
        return Ok(("square".into(), unit_square()));
    }
    let bad = || CliError::Usage(format!("bad polygon {spec:?}; expected 'square' or points like '(0,0) (1,0)'"));
    let mut pts = Vec::new();
    for tok in spec.split(')').map(str::trim).filter(|t| !t.is_empty()) {
        let inner = tok.trim_start_matches(',').trim().strip_prefix('(').ok_or_else(bad)?;
        let (a, b) = inner.split_once(',').ok_or_else(bad)?;
        let u = a.trim().parse().map_err(|_| bad())?;
        let v = b.trim().parse().map_err(|_| bad())?;
        pts.push(LatticePoint::new(u, v));
    }
    Ok(("polygon".into(), LatticePolygon::hull(pts)?))
}

pub fn hv(spec: &str, cfg: &RunConfig, fixture: Option<PathBuf>, svg: Option<PathBuf>) -> Result<Value> {
    let (name, poly) = parse_polygon(spec)?;
    let classes = sweep_classes(&poly, cfg.hv_grid)?;
    let class = unique_admissible_class_on(&poly, cfg.hv_grid)?;
    let mut dimer = extract_dimer(&class.complex)?;
    dimer.name = name.clone();
    let fixture = fixture.unwrap_or_else(|| cfg.out_dir.join(format!("{name}.dimer")));
    let svg = svg.unwrap_or_else(|| cfg.out_dir.join(format!("{name}_hv.svg")));
    write_file(&fixture, &to_fixture_text(&dimer))?;
    let title = if name == "square" {
        "Fig. 4: admissible arrangement for the unit square".to_string()
    } else {
        format!("admissible arrangement for {spec}")
    };
    write_file(&svg, &render_hv(&class.complex, &title))?;
    let vertices: Vec<String> =
        class.complex.vertices.iter().map(|v| format!("({}, {})", v.point.0, v.point.1)).collect();
    Ok(envelope(
        "hv",
        json!({
            "polygon": polygon_json(&poly),
            "grid": cfg.hv_grid,
            "classes": classes.len(),
            "admissible_classes": classes.iter().filter(|c| c.admissible).count(),
            "class_key": class.key,
            "arrangement_vertices": vertices,
            "white_nodes": dimer.whites().len(),
            "black_nodes": dimer.blacks().len(),
            "edges": dimer.edges.len(),
            "fixture": fixture.display().to_string(),
            "svg": svg.display().to_string(),
        }),
    ))
}

pub fn coamoeba(poly: &str, cfg: &RunConfig, svg: Option<&Path>) -> Result<Value> {
    let w = parse_poly_with(poly, &cfg.params)?;
    let grid = SamplingGrid {
        radial: cfg.radial,
        angular: cfg.angular,
        modulus_range: cfg.modulus_range,
        residual_bound: cfg.residual,
    };
    let sample = sample_zero_locus(&w, &grid)?;
    let pred = PredictedCoamoeba::from_polynomial(&w, cfg.tolerance)?;
    let cells = verify_cell_structure(&sample, &pred);
    let orientation = verify_orientation(&sample, &pred);
    let fibers: Vec<Value> = pred
        .complex
        .vertices
        .iter()
        .map(|v| {
            let (a, b) = v.point_f64();
            let at = format!("({}, {})", v.point.0, v.point.1);
            match vertex_fiber(&sample, TorusPoint::new(a, b), cfg.fiber_epsilon) {
                Ok(f) => json!({
                    "vertex": at,
                    "samples": f.moduli.len(),
                    "monotone": f.monotone,
                    "span": [f.span.0, f.span.1],
                    "max_log_gap": f.max_log_gap,
                }),
                Err(e) => json!({ "vertex": at, "error": e.to_string() }),
            }
        })
        .collect();
    if let Some(path) = svg {
        write_file(path, &render_coamoeba(&sample, &pred, &format!("coamoeba of {poly}")))?;
    }
    Ok(envelope(
        "coamoeba",
        json!({
            "polynomial": poly,
            "grid": [cfg.radial, cfg.angular],
            "modulus_range": [cfg.modulus_range.0, cfg.modulus_range.1],
            "samples": sample.points.len(),
            "rejected": sample.rejected,
            "containment_fraction": cells.containment_fraction,
            "cell_structure": cells,
            "orientation": orientation,
            "orientation_constant": orientation.passes(),
            "vertex_fibers": fibers,
        }),
    ))
}

/// `square`, `fig11`, `fig24`, or a path to a fixture file.
pub fn load_dimer(spec: &str) -> Result<DimerModel> {
    match spec {
        "square" => Ok(square_dimer()),
        "fig11" => Ok(fig11_dimer()),
        "fig24" => Ok(fig24_dimer()),
        path => Ok(from_fixture_text(&crate::read_file(Path::new(path))?)?),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DimerAction {
    Matchings,
    Charpoly,
    Isoradial,
}

pub fn dimer(action: DimerAction, spec: &str, reference: usize, svg: Option<&Path>) -> Result<Value> {
    let g = load_dimer(spec)?;
    let euler = euler_check(&g)?;
    if let Some(path) = svg {
        let title = match spec {
            "fig11" => "Fig. 11: dimer model of the first collection".to_string(),
            "fig24" => "Fig. 24: dimer model of the mutated collection".to_string(),
            "square" => "Fig. 4: dimer model of the unit square".to_string(),
            _ => format!("dimer model {}", g.name),
        };
        write_file(path, &render_dimer(&g, &title))?;
    }
    let matchings = enumerate_matchings(&g);
    let reference = matchings
        .get(reference)
        .ok_or_else(|| CliError::Usage(format!("reference {reference} out of range ({} matchings)", matchings.len())))?
        .clone();
    let body = match action {
        DimerAction::Matchings => {
            let list = matchings
                .iter()
                .map(|m| {
                    let ids: Vec<&str> = m.edges.iter().map(|&e| g.edges[e].id.as_str()).collect();
                    Ok(json!({ "edges": ids, "class": pt(homology_class(&g, m, &reference)?) }))
                })
                .collect::<Result<Vec<Value>>>()?;
            json!({ "count": matchings.len(), "matchings": list })
        }
        DimerAction::Charpoly => {
            let cp = characteristic_polynomial(&g, &reference)?;
            let terms: Vec<Value> =
                cp.terms.iter().map(|(&e, &c)| json!({ "exponent": pt(e), "coefficient": c })).collect();
            let newton = cp.newton_polygon();
            json!({
                "terms": terms,
                "newton_polygon": polygon_json(&newton),
                "newton_polygon_centered": polygon_json(&newton.normalized_translation()),
            })
        }
        DimerAction::Isoradial => serde_json::to_value(isoradial_report(&g)?).expect("serializable"),
    };
    let mut out = envelope("dimer", body);
    out["model"] = g.name.clone().into();
    out["euler"] = json!([euler.vertices, euler.edges, euler.faces, euler.chi]);
    Ok(out)
}

pub fn system(name: &str) -> Result<CycleSystem> {
    CycleSystem::by_name(name).ok_or_else(|| CliError::Usage(format!("unknown collection {name:?}; use ec or ec2")))
}

/// File names and titles of the figures drawn for a cycle system.
pub fn fibration_figures(system: &CycleSystem, steps: usize) -> Result<Vec<(String, String)>> {
    let complex = PreimageComplex::build(system)?;
    let graph = contract_to_graph(&complex, &face_census(&complex))?;
    let mut out = vec![
        (
            "fig08_branch_motion.svg".to_string(),
            render_branch_motion(&track_all(&system.model, steps)?, "Fig. 8: branch points moving along the vanishing paths"),
        ),
        (
            "fig20_deformation.svg".to_string(),
            render_deformation(
                &deformation_trajectory(Complex64::new(0.0, 0.0), steps),
                "Fig. 20: branch points along the deformation",
            ),
        ),
    ];
    if system.name == "ec" {
        out.push(("fig09_cycle_images.svg".into(), render_cycle_images(system, "Fig. 9: images of the vanishing cycles")));
        out.push((
            "fig10_s_plane_graph.svg".into(),
            render_s_plane_graph(&complex, &graph, "Fig. 10: contracted graph on the s-plane"),
        ));
        out.push(("fig10_torus_graph.svg".into(), render_torus_graph(&graph, "Fig. 10: contracted graph under the argument map")));
    } else {
        out.push((
            "fig14_cycle_images.svg".into(),
            render_cycle_images(system, "Fig. 14: images of the mutated vanishing cycles"),
        ));
        out.push((
            "fig17_s_plane_graph.svg".into(),
            render_s_plane_graph(&complex, &graph, "Fig. 17: contracted graph of the mutated cycles on the s-plane"),
        ));
        out.push((
            format!("{}_torus_graph.svg", system.name),
            render_torus_graph(&graph, "argument image of the mutated contracted graph (compare Fig. 24)"),
        ));
    }
    Ok(out)
}

pub fn fibration(cfg: &RunConfig, svg_dir: Option<&Path>) -> Result<Value> {
    let system = system(&cfg.collection)?;
    let report = fibration_report(&system, cfg.steps)?;
    let table = intersection_table(&PreimageComplex::build(&system)?)?;
    let composed: std::collections::BTreeMap<String, i64> =
        composed_counts(&table, system.arcs.len()).into_iter().map(|((i, j), n)| (format!("{i},{j}"), n)).collect();
    let mut out = envelope("fibration", serde_json::to_value(&report).expect("serializable"));
    out["composed_counts"] = json!(composed);
    out["steps"] = cfg.steps.into();
    if let Some(dir) = svg_dir {
        let mut names = Vec::new();
        for (name, svg) in fibration_figures(&system, cfg.steps)? {
            write_file(&dir.join(&name), &svg)?;
            names.push(name);
        }
        out["figures"] = json!(names);
    }
    Ok(out)
}

fn collection_or_default(text: Option<&str>) -> Result<ExceptionalCollection> {
    match text {
        None => Ok(ExceptionalCollection::square_ec()),
        Some(t) => {
            let c = ExceptionalCollection::parse(t)?;
            if c.is_empty() {
                return Err(CliError::Usage("empty collection".into()));
            }
            Ok(c)
        }
    }
}

fn collection_json(c: &ExceptionalCollection) -> Value {
    let report = is_strong_exceptional(c);
    let mut dims = serde_json::Map::new();
    for (i, &e) in c.0.iter().enumerate() {
        for (j, &f) in c.0.iter().enumerate() {
            let (h0, h1, h2) = hom_ext_dims(e, f);
            dims.insert(format!("{},{}", i + 1, j + 1), json!([h0, h1, h2]));
        }
    }
    json!({
        "collection": c.0.iter().map(|l| json!([l.a, l.b])).collect::<Vec<_>>(),
        "text": c.to_string(),
        "dims": dims,
        "strong_exceptional": report.strong_exceptional,
        "violations": report.violations,
        "full": fullness_proxy(c),
    })
}

pub fn bundles_check(text: Option<&str>) -> Result<Value> {
    Ok(envelope("bundles check", collection_json(&collection_or_default(text)?)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Site {
    Last,
    At(usize),
}

/// Mutates at the pair starting at `at` (0-based), or uses the preset that
/// carries the first standard collection to the second.
pub fn bundles_mutate(text: Option<&str>, at: Site, direction: Direction, preset: bool) -> Result<Value> {
    let c = collection_or_default(text)?;
    let (out, trace) = if preset {
        mutate_last_pair(&c)?
    } else {
        let pos = match at {
            Site::Last => c.len().checked_sub(2).ok_or_else(|| CliError::Usage("need at least two objects".into()))?,
            Site::At(p) => p,
        };
        mutate(&c, pos, direction)?
    };
    Ok(envelope(
        "bundles mutate",
        json!({
            "input": collection_json(&c),
            "output": collection_json(&out),
            "trace": trace,
        }),
    ))
}
