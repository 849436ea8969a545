//! Mesh serialization. Only valid vertices are written; face indices are
//! remapped accordingly.

use std::fmt::Write as _;

use serde::Serialize;

use crate::surface::{MeshSummary, SurfaceMesh};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Obj,
    Ply,
    Json,
}

impl Format {
    pub fn from_extension(path: &std::path::Path) -> Option<Format> {
        match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
            "obj" => Some(Format::Obj),
            "ply" => Some(Format::Ply),
            "json" => Some(Format::Json),
            _ => None,
        }
    }
}

/// 17 significant digits, enough to round-trip any `f64`.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

struct Compact {
    /// Grid index -> output index, for valid vertices.
    remap: Vec<Option<usize>>,
    positions: Vec<[f64; 3]>,
    normals: Vec<[f64; 3]>,
    faces: Vec<[usize; 3]>,
}

fn compact(mesh: &SurfaceMesh) -> Compact {
    let mut remap = Vec::with_capacity(mesh.vertices.len());
    let mut positions = Vec::new();
    let mut normals = Vec::new();
    for vertex in &mesh.vertices {
        match &vertex.sample {
            Some(s) => {
                remap.push(Some(positions.len()));
                positions.push([s.position.x, s.position.y, s.position.z]);
                normals.push([s.normal.x, s.normal.y, s.normal.z]);
            }
            None => remap.push(None),
        }
    }
    let faces = mesh
        .faces
        .iter()
        .map(|tri| tri.map(|k| remap[k].expect("faces only reference valid vertices")))
        .collect();
    Compact { remap, positions, normals, faces }
}

pub fn to_obj(mesh: &SurfaceMesh, header: &str) -> String {
    let c = compact(mesh);
    let mut out = String::new();
    for line in header.lines() {
        let _ = writeln!(out, "# {line}");
    }
    let _ = writeln!(out, "# {} vertices, {} faces", c.positions.len(), c.faces.len());
    for p in &c.positions {
        let _ = writeln!(out, "v {} {} {}", num(p[0]), num(p[1]), num(p[2]));
    }
    for n in &c.normals {
        let _ = writeln!(out, "vn {} {} {}", num(n[0]), num(n[1]), num(n[2]));
    }
    for f in &c.faces {
        let [a, b, d] = f.map(|k| k + 1);
        let _ = writeln!(out, "f {a}//{a} {b}//{b} {d}//{d}");
    }
    out
}

pub fn to_ply(mesh: &SurfaceMesh, header: &str) -> String {
    let c = compact(mesh);
    let mut out = String::from("ply\nformat ascii 1.0\n");
    for line in header.lines() {
        let _ = writeln!(out, "comment {line}");
    }
    let _ = writeln!(out, "element vertex {}", c.positions.len());
    for prop in ["x", "y", "z", "nx", "ny", "nz"] {
        let _ = writeln!(out, "property double {prop}");
    }
    let _ = writeln!(out, "element face {}", c.faces.len());
    out.push_str("property list uchar int vertex_indices\nend_header\n");
    for (p, n) in c.positions.iter().zip(&c.normals) {
        let cols: Vec<String> = p.iter().chain(n).map(|&x| num(x)).collect();
        let _ = writeln!(out, "{}", cols.join(" "));
    }
    for f in &c.faces {
        let _ = writeln!(out, "3 {} {} {}", f[0], f[1], f[2]);
    }
    out
}

#[derive(Serialize)]
struct JsonMesh<'a> {
    description: &'a str,
    summary: MeshSummary,
    /// Grid coordinates `(u1, u2)` of each written vertex.
    parameters: Vec<[f64; 2]>,
    positions: Vec<[f64; 3]>,
    normals: Vec<[f64; 3]>,
    faces: Vec<[usize; 3]>,
}

pub fn to_json(mesh: &SurfaceMesh, header: &str) -> String {
    let c = compact(mesh);
    let parameters = mesh
        .vertices
        .iter()
        .zip(&c.remap)
        .filter(|(_, r)| r.is_some())
        .map(|(v, _)| v.u)
        .collect();
    let doc = JsonMesh {
        description: header,
        summary: mesh.summary(),
        parameters,
        positions: c.positions,
        normals: c.normals,
        faces: c.faces,
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("mesh serializes");
    s.push('\n');
    s
}

pub fn render(mesh: &SurfaceMesh, format: Format, header: &str) -> String {
    match format {
        Format::Obj => to_obj(mesh, header),
        Format::Ply => to_ply(mesh, header),
        Format::Json => to_json(mesh, header),
    }
}
