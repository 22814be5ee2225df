//! The reproduction suite: every acceptance criterion plus all figures.

use std::collections::BTreeMap;

use dimer_coamoeba::bundles::{
    hom_ext_dims, is_strong_exceptional, fullness_proxy, mutate_last_pair, unmutate_last_pair,
    ExceptionalCollection, LineBundleClass,
};
use dimer_coamoeba::coamoeba::{
    render_svg as render_coamoeba, sample_zero_locus, verify_cell_structure, verify_orientation, vertex_fiber,
    PredictedCoamoeba, SamplingGrid, TorusPoint,
};
use dimer_coamoeba::dimer::{
    characteristic_polynomial, enumerate_matchings, euler_check, fig11_dimer, fig24_dimer, homology_class,
    is_isoradial_feasible, render_svg as render_dimer, rotation_isomorphism, square_dimer, DimerModel,
};
use dimer_coamoeba::fibration::{
    argument_projection_diagnostic, composed_counts, contract_to_graph, critical_data, deformation_trajectory,
    face_census, intersection_table, track_collision, CycleSystem, FiberModel, PreimageComplex, RibbonSurface,
};
use dimer_coamoeba::hananyvegh::{extract_dimer, render_svg as render_hv, sweep_classes};
use dimer_coamoeba::lattice::unit_square;
use dimer_coamoeba::{parse_poly, LatticePoint, LatticePolygon};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::commands::fibration_figures;
use crate::{envelope, to_json, write_file, Result, RunConfig};

#[derive(Debug, Clone, Serialize)]
pub struct Criterion {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: Value,
}

impl Criterion {
    fn new(id: u8, name: &'static str, outcome: Result<(bool, Value)>) -> Self {
        let (passed, detail) = outcome.unwrap_or_else(|e| (false, json!({ "error": e.to_string() })));
        Criterion { id, name, passed, detail }
    }

    /// `PASS  3 <name>` or `FAIL  9 <name>`.
    pub fn line(&self) -> String {
        format!("{} {:>2} {}", if self.passed { "PASS" } else { "FAIL" }, self.id, self.name)
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Each expected value matched to a distinct computed one within `tol`.
fn same_points(got: &[Complex64], want: &[Complex64], tol: f64) -> bool {
    let mut used = vec![false; got.len()];
    got.len() == want.len()
        && want.iter().all(|w| match (0..got.len()).find(|&k| !used[k] && (got[k] - w).norm() < tol) {
            Some(k) => {
                used[k] = true;
                true
            }
            None => false,
        })
}

fn diamond() -> LatticePolygon {
    LatticePolygon::hull([(1, 0), (0, 1), (-1, 0), (0, -1)].map(|(u, v)| LatticePoint::new(u, v))).expect("diamond")
}

fn newton_of(g: &DimerModel) -> Result<LatticePolygon> {
    let ms = enumerate_matchings(g);
    let reference = ms.first().ok_or(dimer_coamoeba::Error::NoMatchings)?;
    Ok(characteristic_polynomial(g, reference)?.newton_polygon())
}

fn critical_values() -> Result<(bool, Value)> {
    let w = parse_poly("x - x^-1 + y + y^-1")?;
    let pts = critical_data(&w)?;
    let want = [c(-2.0, -2.0), c(-2.0, 2.0), c(2.0, 2.0), c(2.0, -2.0)];
    let paired = pts.iter().all(|p| {
        // value 2·y + 2·x·(-i) at x = ±i, y = ±1
        let x_ok = (p.x - c(0.0, 1.0)).norm() < 1e-10 || (p.x + c(0.0, 1.0)).norm() < 1e-10;
        let y_ok = (p.y - 1.0).norm() < 1e-10 || (p.y + 1.0).norm() < 1e-10;
        let expect = 2.0 * p.y.re + c(0.0, 2.0 * p.x.im);
        x_ok && y_ok && (p.value - expect).norm() < 1e-10
    });
    let values: Vec<Complex64> = pts.iter().map(|p| p.value).collect();
    Ok((paired && same_points(&values, &want, 1e-10), json!({ "critical_points": pts })))
}

fn first_collision(steps: usize) -> Result<(bool, Value)> {
    let model = FiberModel::mirror();
    let path = model.vanishing_paths()?[0];
    let col = track_collision(&model, &path, steps)?;
    let ok = (col.meet - c(0.0, -2.0)).norm() < 1e-6 && (col.start - c(2.0, 0.0)).norm() < 1e-9 && col.segment_error < 1e-3;
    Ok((
        ok,
        json!({ "critical_value": path.end, "start": col.start, "meet": col.meet, "gap": col.gap, "segment_error": col.segment_error }),
    ))
}

fn hv_square(grid: usize) -> Result<((bool, Value), String)> {
    let classes = sweep_classes(&unit_square(), grid)?;
    let adm: Vec<_> = classes.iter().filter(|c| c.admissible).collect();
    let mut detail = json!({ "classes": classes.len(), "admissible": adm.len() });
    if adm.len() != 1 {
        return Ok(((false, detail), String::new()));
    }
    let class = adm[0];
    let g = extract_dimer(&class.complex)?;
    let verts: Vec<(f64, f64)> = class.complex.vertices.iter().map(|v| v.point_f64()).collect();
    let want = [(0.0, 0.0), (0.5, 0.0), (0.0, 0.5), (0.5, 0.5)];
    let wrap = |t: f64| t - t.floor();
    let close = |a: (f64, f64), b: (f64, f64)| {
        let d = |s: f64| (s - s.round()).abs();
        d(a.0 - b.0) < 1e-12 && d(a.1 - b.1) < 1e-12
    };
    let translated = verts.len() == 4
        && want.iter().any(|&w0| {
            let t = (w0.0 - verts[0].0, w0.1 - verts[0].1);
            verts.iter().all(|&v| {
                let m = (wrap(v.0 + t.0), wrap(v.1 + t.1));
                want.iter().any(|&w| close(m, w))
            })
        });
    let shape = (g.whites().len(), g.blacks().len(), g.edges.len());
    detail["nodes_edges"] = json!([shape.0, shape.1, shape.2]);
    detail["vertices"] = json!(verts);
    let svg = render_hv(&class.complex, "Fig. 4: admissible arrangement for the unit square");
    Ok(((translated && shape == (1, 1, 4), detail), svg))
}

struct CoamoebaRun {
    cells: (bool, Value),
    fiber: (bool, Value),
    svg: String,
}

fn coamoeba_square(cfg: &RunConfig) -> Result<CoamoebaRun> {
    let w = parse_poly("x*y + x - y + 1")?;
    let grid = SamplingGrid { radial: 400, angular: 64, modulus_range: cfg.modulus_range, residual_bound: cfg.residual };
    let s = sample_zero_locus(&w, &grid)?;
    let pred = PredictedCoamoeba::from_polynomial(&w, 1e-3)?;
    let cells = verify_cell_structure(&s, &pred);
    let orient = verify_orientation(&s, &pred);
    use dimer_coamoeba::hananyvegh::CellColor;
    // U1 is the black cell, U2 the white one
    let signs_ok = orient.cells.iter().filter(|c| c.color != CellColor::None).count() == 2
        && orient.cells.iter().all(|c| match c.color {
            CellColor::Black => c.positive == 0 && c.negative > 0,
            CellColor::White => c.negative == 0 && c.positive > 0,
            CellColor::None => true,
        });
    let cells_ok = cells.containment_fraction >= 0.99 && cells.uncolored_violations == 0 && signs_ok;
    let fiber = vertex_fiber(&s, TorusPoint::new(0.5, 0.5), cfg.fiber_epsilon);
    let fiber = match fiber {
        Ok(f) => (
            f.is_arc_spanning(1.1, 10.0, 0.1),
            json!({ "samples": f.moduli.len(), "monotone": f.monotone, "span": [f.span.0, f.span.1], "max_log_gap": f.max_log_gap }),
        ),
        Err(e) => (false, json!({ "error": e.to_string() })),
    };
    Ok(CoamoebaRun {
        cells: (
            cells_ok,
            json!({ "samples": s.points.len(), "cell_structure": cells, "orientation": orient.cells }),
        ),
        fiber,
        svg: render_coamoeba(&s, &pred, "Fig. 3: coamoeba of xy + x - y + 1"),
    })
}

fn square_matchings() -> Result<(bool, Value)> {
    let g = square_dimer();
    let ms = enumerate_matchings(&g);
    let want: Vec<LatticePoint> = [(0, 0), (1, 0), (0, 1), (1, 1)].map(|(u, v)| LatticePoint::new(u, v)).to_vec();
    let mut found = None;
    for r in &ms {
        let mut classes = ms.iter().map(|m| homology_class(&g, m, r)).collect::<dimer_coamoeba::Result<Vec<_>>>()?;
        classes.sort();
        let mut w = want.clone();
        w.sort();
        if classes == w {
            found = Some(classes);
            break;
        }
    }
    let newton = newton_of(&g)?;
    let ok = ms.len() == 4 && found.is_some() && newton.translation_equivalent(&unit_square());
    Ok((ok, json!({ "matchings": ms.len(), "newton_polygon": format!("{:?}", newton.vertices()) })))
}

/// Permanent of the white-by-black edge-count matrix.
fn permanent(g: &DimerModel) -> u64 {
    let whites = g.whites();
    let blacks = g.blacks();
    let n = whites.len();
    if n != blacks.len() {
        return 0;
    }
    let mut m = vec![vec![0u64; n]; n];
    for e in &g.edges {
        let i = whites.iter().position(|&w| w == e.white).expect("white endpoint");
        let j = blacks.iter().position(|&b| b == e.black).expect("black endpoint");
        m[i][j] += 1;
    }
    // Ryser's formula
    let mut total: i64 = 0;
    for mask in 0u32..(1 << n) {
        let prod: u64 = m
            .iter()
            .map(|row| (0..n).filter(|j| mask & (1 << j) != 0).map(|j| row[j]).sum::<u64>())
            .product();
        if (n as u32 - mask.count_ones()).is_multiple_of(2) {
            total += prod as i64;
        } else {
            total -= prod as i64;
        }
    }
    total.unsigned_abs()
}

fn reference_dimers() -> Result<(bool, Value)> {
    let f11 = fig11_dimer();
    let f24 = fig24_dimer();
    let m11 = enumerate_matchings(&f11).len();
    let p11 = permanent(&f11);
    let n11 = newton_of(&f11)?;
    let n24 = newton_of(&f24)?;
    let iso11 = is_isoradial_feasible(&f11)?;
    let iso24 = is_isoradial_feasible(&f24)?;
    let e = euler_check(&f24)?;
    let ok = m11 == 8
        && p11 == 8
        && n11.translation_equivalent(&diamond())
        && n24.translation_equivalent(&diamond())
        && iso11
        && !iso24
        && (e.vertices, e.edges, e.faces, e.chi) == (8, 12, 4, 0);
    Ok((
        ok,
        json!({
            "fig11": { "matchings": m11, "permanent": p11, "isoradial": iso11 },
            "fig24": { "isoradial": iso24, "euler": [e.vertices, e.edges, e.faces, e.chi] },
        }),
    ))
}

fn surface_census() -> Result<(bool, Value)> {
    let surface = RibbonSurface::new(FiberModel::mirror());
    let ec = face_census(&PreimageComplex::build(&CycleSystem::ec())?);
    let ec2 = face_census(&PreimageComplex::build(&CycleSystem::ec2())?);
    let only = |census: &dimer_coamoeba::fibration::FaceCensus, k: usize| census.polygons.keys().all(|&j| j == k);
    let ok = surface.euler_characteristic() == 0
        && surface.puncture_count() == 4
        && ec.count(4) == 4
        && only(&ec, 4)
        && ec2.count(3) == 8
        && only(&ec2, 3);
    Ok((
        ok,
        json!({ "chi": surface.euler_characteristic(), "punctures": surface.puncture_count(), "ec": ec, "ec2": ec2 }),
    ))
}

fn intersections_vs_hom() -> Result<(bool, Value)> {
    let table = intersection_table(&PreimageComplex::build(&CycleSystem::ec())?)?;
    let ec = ExceptionalCollection::square_ec();
    let mut computed = BTreeMap::new();
    let mut expected = BTreeMap::new();
    for i in 1..=4 {
        for j in i + 1..=4 {
            computed.insert(format!("{i},{j}"), table.get(&(i, j)).copied().unwrap_or(0) as i64);
            expected.insert(format!("{i},{j}"), hom_ext_dims(ec.0[i - 1], ec.0[j - 1]).0);
        }
    }
    let composed: BTreeMap<String, i64> =
        composed_counts(&table, 4).into_iter().map(|((i, j), n)| (format!("{i},{j}"), n)).collect();
    Ok((
        computed == expected,
        json!({ "intersections": computed, "hom_dimensions": expected, "composed_counts": composed }),
    ))
}

fn contraction() -> Result<(bool, Value)> {
    let build = |s: CycleSystem| -> Result<_> {
        let cx = PreimageComplex::build(&s)?;
        Ok(contract_to_graph(&cx, &face_census(&cx))?)
    };
    let ec = build(CycleSystem::ec())?;
    let ec2 = build(CycleSystem::ec2())?;
    let iso = rotation_isomorphism(&ec.dimer, &fig11_dimer(), false).is_some();
    let p1 = argument_projection_diagnostic(&ec);
    let p2 = argument_projection_diagnostic(&ec2);
    let ok = iso && p1.injective && p2.nodes == 8 && p2.base_points == 2;
    Ok((ok, json!({ "isomorphic_to_fig11": iso, "ec": p1, "ec2": p2 })))
}

fn bundles() -> Result<(bool, Value)> {
    let ec = ExceptionalCollection::square_ec();
    let ec2 = ExceptionalCollection::square_ec2();
    let checks = |c: &ExceptionalCollection| is_strong_exceptional(c).strong_exceptional && fullness_proxy(c);
    let hom = hom_ext_dims(LineBundleClass::new(0, 0), LineBundleClass::new(2, 1)).0;
    let forward = mutate_last_pair(&ec)?.0;
    let back = unmutate_last_pair(&forward)?.0;
    let ok = checks(&ec) && checks(&ec2) && hom == 6 && forward == ec2 && back == ec;
    Ok((ok, json!({ "hom_O_O21": hom, "mutated": forward.to_string(), "restored": back.to_string() })))
}

fn deformation(steps: usize) -> Result<(bool, Value)> {
    let at = |tau: f64| FiberModel::family(c(tau, 0.0)).branch_points(c(0.0, 0.0)).positions();
    let r2 = 2.0 * 2f64.sqrt();
    let start = at(0.0);
    let end = at(1.0);
    let start_ok = same_points(&start, &[c(0.0, 2.0), c(0.0, -2.0), c(2.0, 0.0), c(-2.0, 0.0)], 1e-10);
    let end_ok = same_points(&end, &[c(2.0, 0.0), c(-2.0, 0.0), c(r2, 0.0), c(-r2, 0.0)], 1e-10);
    let traj = deformation_trajectory(c(0.0, 0.0), steps);
    let bound = 10.0 * traj.max_param_step();
    let ok = start_ok && end_ok && traj.max_step() < bound;
    Ok((ok, json!({ "tau0": start, "tau1": end, "max_step": traj.max_step(), "bound": bound })))
}

/// Runs all criteria; figures come back as `(file name, svg)`.
pub fn run(cfg: &RunConfig) -> (Vec<Criterion>, BTreeMap<String, String>) {
    let mut figures = BTreeMap::new();
    let mut out = Vec::new();
    out.push(Criterion::new(1, "critical values of the mirror potential", critical_values()));
    out.push(Criterion::new(2, "first vanishing path collision", first_collision(cfg.steps)));
    match hv_square(cfg.hv_grid) {
        Ok((r, svg)) => {
            if !svg.is_empty() {
                figures.insert("fig04_square_hv.svg".into(), svg);
            }
            out.push(Criterion::new(3, "unique admissible arrangement for the square", Ok(r)));
        }
        Err(e) => out.push(Criterion::new(3, "unique admissible arrangement for the square", Err(e))),
    }
    match coamoeba_square(cfg) {
        Ok(run) => {
            figures.insert("fig03_coamoeba.svg".into(), run.svg);
            out.push(Criterion::new(4, "coamoeba cell structure and orientation", Ok(run.cells)));
            out.push(Criterion::new(5, "vertex fiber is an interval", Ok(run.fiber)));
        }
        Err(e) => {
            let msg = e.to_string();
            out.push(Criterion::new(4, "coamoeba cell structure and orientation", Err(e)));
            out.push(Criterion::new(5, "vertex fiber is an interval", Err(crate::CliError::Usage(msg))));
        }
    }
    out.push(Criterion::new(6, "square dimer matchings and polygon", square_matchings()));
    out.push(Criterion::new(7, "bundled dimer fixtures", reference_dimers()));
    out.push(Criterion::new(8, "surface and face census", surface_census()));
    out.push(Criterion::new(9, "intersections equal hom dimensions", intersections_vs_hom()));
    out.push(Criterion::new(10, "contracted graph and projection", contraction()));
    out.push(Criterion::new(11, "exceptional collections and mutation", bundles()));
    out.push(Criterion::new(12, "deformation family branch points", deformation(cfg.steps)));
    figures.insert("fig11_dimer.svg".into(), render_dimer(&fig11_dimer(), "Fig. 11: dimer model of the first collection"));
    for s in [CycleSystem::ec(), CycleSystem::ec2()] {
        if let Ok(figs) = fibration_figures(&s, cfg.steps) {
            figures.extend(figs);
        }
    }
    (out, figures)
}

pub struct SuiteOutcome {
    pub criteria: Vec<Criterion>,
    pub report: Value,
    pub passed: bool,
}

/// Writes `paper_suite.json` and the figures into the output directory.
pub fn paper_suite(cfg: &RunConfig) -> Result<SuiteOutcome> {
    let (criteria, figures) = run(cfg);
    for (name, svg) in &figures {
        write_file(&cfg.out_dir.join(name), svg)?;
    }
    let passed = criteria.iter().all(|c| c.passed);
    let report = envelope(
        "paper-suite",
        json!({
            "criteria": criteria,
            "passed": criteria.iter().filter(|c| c.passed).count(),
            "total": criteria.len(),
            "all_passed": passed,
            "figures": figures.keys().collect::<Vec<_>>(),
        }),
    );
    write_file(&cfg.out_dir.join("paper_suite.json"), &to_json(&report))?;
    Ok(SuiteOutcome { criteria, report, passed })
}
