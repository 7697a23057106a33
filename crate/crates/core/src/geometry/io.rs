//! OBJ and STL readers/writers.
//!
//! Only geometry is read: `v` and `f` records for OBJ, facets for STL. Normals
//! stored in the files are ignored; winding is repaired by [`Mesh::new`].

use std::path::Path;

use nalgebra::Point3;
use serde::{Deserialize, Serialize};

use super::mesh::Mesh;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MeshFormat {
    Obj,
    StlAscii,
    StlBinary,
}

impl MeshFormat {
    /// Guesses the format from the file extension and, for STL, the content.
    pub fn detect(path: &Path, bytes: &[u8]) -> Option<MeshFormat> {
        let ext = path.extension()?.to_str()?.to_ascii_lowercase();
        match ext.as_str() {
            "obj" => Some(MeshFormat::Obj),
            "stl" => Some(if is_binary_stl(bytes) {
                MeshFormat::StlBinary
            } else {
                MeshFormat::StlAscii
            }),
            _ => None,
        }
    }
}

fn is_binary_stl(bytes: &[u8]) -> bool {
    if bytes.len() >= 84 {
        let n = u32::from_le_bytes([bytes[80], bytes[81], bytes[82], bytes[83]]) as usize;
        if 84 + n * 50 == bytes.len() {
            return true;
        }
    }
    !bytes.trim_ascii_start().starts_with(b"solid")
}

pub fn load_mesh(source: &[u8], format: MeshFormat, name: &str) -> Result<Mesh> {
    let (vertices, triangles) = match format {
        MeshFormat::Obj => parse_obj(source)?,
        MeshFormat::StlAscii => parse_stl_ascii(source)?,
        MeshFormat::StlBinary => parse_stl_binary(source)?,
    };
    if triangles.is_empty() {
        return Err(Error::EmptyMesh);
    }
    Mesh::new(name, vertices, triangles)
}

pub fn load_mesh_file(path: &Path) -> Result<Mesh> {
    let bytes = std::fs::read(path)?;
    let format = MeshFormat::detect(path, &bytes).ok_or_else(|| {
        Error::parse(0, format!("unknown mesh extension: {}", path.display()))
    })?;
    let name = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("mesh");
    load_mesh(&bytes, format, name)
}

type RawMesh = (Vec<Point3<f64>>, Vec<[usize; 3]>);

fn parse_f64(tok: Option<&str>, line: usize) -> Result<f64> {
    let tok = tok.ok_or_else(|| Error::parse(line, "missing coordinate"))?;
    tok.parse::<f64>()
        .map_err(|_| Error::parse(line, format!("bad number `{tok}`")))
}

fn parse_obj(source: &[u8]) -> Result<RawMesh> {
    let text = std::str::from_utf8(source).map_err(|_| Error::parse(0, "OBJ is not UTF-8"))?;
    let mut vertices = Vec::new();
    let mut triangles = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        let mut toks = content.split_whitespace();
        match toks.next() {
            Some("v") => {
                let x = parse_f64(toks.next(), line)?;
                let y = parse_f64(toks.next(), line)?;
                let z = parse_f64(toks.next(), line)?;
                vertices.push(Point3::new(x, y, z));
            }
            Some("f") => {
                let mut idx = Vec::new();
                for tok in toks {
                    let head = tok.split('/').next().unwrap_or("");
                    let i: i64 = head
                        .parse()
                        .map_err(|_| Error::parse(line, format!("bad face index `{tok}`")))?;
                    let resolved = if i > 0 {
                        i - 1
                    } else if i < 0 {
                        vertices.len() as i64 + i
                    } else {
                        -1
                    };
                    if resolved < 0 || resolved as usize >= vertices.len() {
                        return Err(Error::parse(line, format!("face index {i} out of range")));
                    }
                    idx.push(resolved as usize);
                }
                if idx.len() < 3 {
                    return Err(Error::parse(line, "face with fewer than 3 vertices"));
                }
                for k in 1..idx.len() - 1 {
                    triangles.push([idx[0], idx[k], idx[k + 1]]);
                }
            }
            _ => {}
        }
    }
    Ok((vertices, triangles))
}

fn parse_stl_ascii(source: &[u8]) -> Result<RawMesh> {
    let text = std::str::from_utf8(source).map_err(|_| Error::parse(0, "STL is not UTF-8"))?;
    let mut vertices = Vec::new();
    let mut triangles = Vec::new();
    let mut facet: Vec<usize> = Vec::new();
    let mut saw_solid = false;
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let mut toks = raw.split_whitespace();
        match toks.next() {
            Some("solid") => saw_solid = true,
            Some("facet") => facet.clear(),
            Some("vertex") => {
                let x = parse_f64(toks.next(), line)?;
                let y = parse_f64(toks.next(), line)?;
                let z = parse_f64(toks.next(), line)?;
                vertices.push(Point3::new(x, y, z));
                facet.push(vertices.len() - 1);
            }
            Some("endfacet") => {
                if facet.len() != 3 {
                    return Err(Error::parse(line, "facet without exactly 3 vertices"));
                }
                triangles.push([facet[0], facet[1], facet[2]]);
                facet.clear();
            }
            Some("outer") | Some("endloop") | Some("endsolid") | None => {}
            Some(other) => {
                return Err(Error::parse(line, format!("unexpected keyword `{other}`")));
            }
        }
    }
    if !saw_solid {
        return Err(Error::parse(1, "missing `solid` header"));
    }
    Ok((vertices, triangles))
}

fn parse_stl_binary(source: &[u8]) -> Result<RawMesh> {
    if source.len() < 84 {
        return Err(Error::parse(0, "binary STL shorter than its header"));
    }
    let n = u32::from_le_bytes([source[80], source[81], source[82], source[83]]) as usize;
    if source.len() < 84 + n * 50 {
        return Err(Error::parse(
            0,
            format!("binary STL declares {n} facets but is truncated"),
        ));
    }
    let f32_at = |off: usize| {
        f32::from_le_bytes([source[off], source[off + 1], source[off + 2], source[off + 3]]) as f64
    };
    let mut vertices = Vec::with_capacity(n * 3);
    let mut triangles = Vec::with_capacity(n);
    for f in 0..n {
        let base = 84 + f * 50 + 12;
        for k in 0..3 {
            let o = base + k * 12;
            vertices.push(Point3::new(f32_at(o), f32_at(o + 4), f32_at(o + 8)));
        }
        let i = vertices.len();
        triangles.push([i - 3, i - 2, i - 1]);
    }
    Ok((vertices, triangles))
}

pub fn write_obj(mesh: &Mesh) -> String {
    let mut out = format!("# {}\n", mesh.name());
    for v in mesh.vertices() {
        out.push_str(&format!("v {} {} {}\n", v.x, v.y, v.z));
    }
    for t in mesh.triangles() {
        out.push_str(&format!("f {} {} {}\n", t[0] + 1, t[1] + 1, t[2] + 1));
    }
    out
}

pub fn write_stl_ascii(mesh: &Mesh) -> String {
    let mut out = format!("solid {}\n", mesh.name());
    for (i, _) in mesh.triangles().iter().enumerate() {
        let n = mesh.normal(i);
        out.push_str(&format!("  facet normal {} {} {}\n    outer loop\n", n.x, n.y, n.z));
        for v in mesh.triangle(i) {
            out.push_str(&format!("      vertex {} {} {}\n", v.x, v.y, v.z));
        }
        out.push_str("    endloop\n  endfacet\n");
    }
    out.push_str(&format!("endsolid {}\n", mesh.name()));
    out
}

pub fn write_stl_binary(mesh: &Mesh) -> Vec<u8> {
    let mut out = vec![0u8; 80];
    out.extend_from_slice(&(mesh.triangles().len() as u32).to_le_bytes());
    for (i, _) in mesh.triangles().iter().enumerate() {
        let n = mesh.normal(i);
        for c in [n.x, n.y, n.z] {
            out.extend_from_slice(&(c as f32).to_le_bytes());
        }
        for v in mesh.triangle(i) {
            for c in [v.x, v.y, v.z] {
                out.extend_from_slice(&(c as f32).to_le_bytes());
            }
        }
        out.extend_from_slice(&0u16.to_le_bytes());
    }
    out
}
