//! Line-oriented text format for dimer fixtures.
//!
//! ```text
//! dimer-fixture 1
//! name fig11
//! meta figure Fig. 11
//! node w0 white 0.25 0.25 : e0 e2 e1 e3
//! edge e0 w0 b1 0 0
//! ```
//!
//! `node` lists the incident edge ids counterclockwise after the colon.
//! `edge` gives white id, black id and the lattice offset of the black
//! endpoint. Blank lines and lines starting with `#` are ignored.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::{Color, DimerModel, Edge, Node};
use crate::error::{Error, Result};
use crate::lattice::LatticePoint;

pub const FIXTURE_VERSION: u32 = 1;

pub fn to_fixture_text(g: &DimerModel) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "dimer-fixture {FIXTURE_VERSION}");
    let _ = writeln!(s, "name {}", g.name);
    for (k, v) in &g.metadata {
        let _ = writeln!(s, "meta {k} {v}");
    }
    for n in &g.nodes {
        let rot: Vec<&str> = n.rotation.iter().map(|&e| g.edges[e].id.as_str()).collect();
        let color = match n.color {
            Color::White => "white",
            Color::Black => "black",
        };
        let _ = writeln!(
            s,
            "node {} {} {} {} : {}",
            n.id,
            color,
            n.position.0,
            n.position.1,
            rot.join(" ")
        );
    }
    for e in &g.edges {
        let _ = writeln!(
            s,
            "edge {} {} {} {} {}",
            e.id, g.nodes[e.white].id, g.nodes[e.black].id, e.offset.u, e.offset.v
        );
    }
    s
}

pub fn from_fixture_text(text: &str) -> Result<DimerModel> {
    let err = |line: usize, msg: &str| Error::Fixture {
        line,
        msg: msg.to_string(),
    };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (ln, header) = lines.next().ok_or_else(|| err(0, "empty fixture"))?;
    let version: u32 = header
        .strip_prefix("dimer-fixture ")
        .and_then(|v| v.trim().parse().ok())
        .ok_or_else(|| err(ln, "missing 'dimer-fixture <version>' header"))?;
    if version != FIXTURE_VERSION {
        return Err(err(ln, &format!("unsupported version {version}")));
    }
    let mut name = String::new();
    let mut metadata = BTreeMap::new();
    let mut raw_nodes: Vec<(usize, String, Color, (f64, f64), Vec<String>)> = Vec::new();
    let mut raw_edges: Vec<(usize, String, String, String, LatticePoint)> = Vec::new();
    for (ln, line) in lines {
        let (kw, rest) = line.split_once(' ').unwrap_or((line, ""));
        match kw {
            "name" => name = rest.trim().to_string(),
            "meta" => {
                let (k, v) = rest.split_once(' ').unwrap_or((rest, ""));
                metadata.insert(k.to_string(), v.trim().to_string());
            }
            "node" => {
                let (head, rot) = rest.split_once(':').ok_or_else(|| err(ln, "node needs ':' before rotation"))?;
                let f: Vec<&str> = head.split_whitespace().collect();
                if f.len() != 4 {
                    return Err(err(ln, "node needs id, color, x, y"));
                }
                let color = match f[1] {
                    "white" => Color::White,
                    "black" => Color::Black,
                    _ => return Err(err(ln, "color must be white or black")),
                };
                let x: f64 = f[2].parse().map_err(|_| err(ln, "bad x"))?;
                let y: f64 = f[3].parse().map_err(|_| err(ln, "bad y"))?;
                raw_nodes.push((
                    ln,
                    f[0].to_string(),
                    color,
                    (x, y),
                    rot.split_whitespace().map(str::to_string).collect(),
                ));
            }
            "edge" => {
                let f: Vec<&str> = rest.split_whitespace().collect();
                if f.len() != 5 {
                    return Err(err(ln, "edge needs id, white, black, du, dv"));
                }
                let du: i64 = f[3].parse().map_err(|_| err(ln, "bad offset"))?;
                let dv: i64 = f[4].parse().map_err(|_| err(ln, "bad offset"))?;
                raw_edges.push((ln, f[0].to_string(), f[1].to_string(), f[2].to_string(), LatticePoint::new(du, dv)));
            }
            _ => return Err(err(ln, &format!("unknown record '{kw}'"))),
        }
    }
    let node_idx: BTreeMap<&str, usize> = raw_nodes.iter().enumerate().map(|(i, n)| (n.1.as_str(), i)).collect();
    let edge_idx: BTreeMap<&str, usize> = raw_edges.iter().enumerate().map(|(i, e)| (e.1.as_str(), i)).collect();
    let mut edges = Vec::new();
    for (ln, id, w, b, offset) in &raw_edges {
        let white = *node_idx.get(w.as_str()).ok_or_else(|| err(*ln, "unknown white node"))?;
        let black = *node_idx.get(b.as_str()).ok_or_else(|| err(*ln, "unknown black node"))?;
        edges.push(Edge {
            id: id.clone(),
            white,
            black,
            offset: *offset,
        });
    }
    let mut nodes = Vec::new();
    for (ln, id, color, position, rot) in raw_nodes {
        let rotation = rot
            .iter()
            .map(|e| edge_idx.get(e.as_str()).copied().ok_or_else(|| err(ln, "unknown edge in rotation")))
            .collect::<Result<Vec<_>>>()?;
        nodes.push(Node {
            id,
            color,
            position,
            rotation,
        });
    }
    let g = DimerModel {
        name,
        nodes,
        edges,
        metadata,
    };
    g.validate()?;
    Ok(g)
}
