//   Copyright 2026 hybzono developers
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.


//! Mesh exporters. Every writer is a pure function of its inputs, and
//! numbers are printed with a fixed number of decimals, so identical meshes
//! and options give identical bytes.

use std::fmt::Write;

use hybzono_core::geometry::{Mesh, PlotOptions};
use serde::Serialize;

/// Meshes of one set (a hybrid set gives one per leaf) merged into a single
/// vertex/face list; face indices are shifted accordingly.
pub fn merge(meshes: &[Mesh]) -> (Vec<Vec<f64>>, Vec<Vec<usize>>) {
    let mut v = Vec::new();
    let mut f = Vec::new();
    for m in meshes {
        let base = v.len();
        v.extend(m.vertices.to_rows());
        f.extend(m.faces.iter().map(|face| face.iter().map(|i| i + base).collect::<Vec<_>>()));
    }
    (v, f)
}

#[derive(Serialize)]
struct OptionsOut<'a> {
    color: &'a str,
    opacity: f64,
    edges: bool,
}

#[derive(Serialize)]
struct MeshOut<'a> {
    v: Vec<Vec<f64>>,
    f: Vec<Vec<i64>>,
    options: OptionsOut<'a>,
}

/// `{"v", "f", "options"}` with faces padded by -1 to a common width.
pub fn mesh_json(meshes: &[Mesh], opts: &PlotOptions) -> String {
    let (v, f) = merge(meshes);
    let width = f.iter().map(Vec::len).max().unwrap_or(0);
    let f = f
        .into_iter()
        .map(|face| {
            let mut row: Vec<i64> = face.into_iter().map(|i| i as i64).collect();
            row.resize(width, -1);
            row
        })
        .collect();
    let out = MeshOut {
        v,
        f,
        options: OptionsOut {
            color: &opts.color,
            opacity: opts.opacity,
            edges: opts.edges,
        },
    };
    let mut text = serde_json::to_string(&out).expect("meshes serialize");
    text.push('\n');
    text
}

/// Six decimals, with negative zero printed as zero.
fn num(x: f64) -> String {
    let s = format!("{x:.6}");
    if s.trim_start_matches('-').trim_matches(|c| c == '0' || c == '.').is_empty() {
        "0.000000".to_string()
    } else {
        s
    }
}

const SVG_SIZE: f64 = 512.0;
const SVG_MARGIN: f64 = 16.0;

/// One path per face of every mesh; 1-D meshes are drawn on the x axis.
/// Layers are drawn in order, each with its own options.
pub fn svg(layers: &[(&[Mesh], &PlotOptions)]) -> Result<String, String> {
    let mut pts: Vec<[f64; 2]> = Vec::new();
    for (meshes, _) in layers {
        for m in meshes.iter() {
            if m.dim() > 2 {
                return Err(format!("SVG export needs a 1-D or 2-D set, got dimension {}", m.dim()));
            }
            for i in 0..m.n_vertices() {
                let r = m.vertices.row(i);
                pts.push([r[0], r.get(1).copied().unwrap_or(0.0)]);
            }
        }
    }
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in &pts {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    if pts.is_empty() {
        lo = [0.0; 2];
        hi = [1.0; 2];
    }
    let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-12);
    let scale = (SVG_SIZE - 2.0 * SVG_MARGIN) / span;
    let px = |p: &[f64]| {
        let x = SVG_MARGIN + (p[0] - lo[0]) * scale;
        let y = SVG_SIZE - SVG_MARGIN - (p.get(1).copied().unwrap_or(0.0) - lo[1]) * scale;
        (num(x), num(y))
    };

    let mut out = String::new();
    let size = num(SVG_SIZE);
    writeln!(out, "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{size}\" height=\"{size}\" viewBox=\"0 0 {size} {size}\">").unwrap();
    for (meshes, opts) in layers {
        let stroke = if opts.edges { "#000000" } else { "none" };
        for m in meshes.iter() {
            for face in &m.faces {
                let mut d = String::new();
                for (k, &i) in face.iter().enumerate() {
                    let (x, y) = px(m.vertices.row(i));
                    write!(d, "{}{x} {y} ", if k == 0 { "M" } else { "L" }).unwrap();
                }
                let polygon = face.len() >= 3;
                if polygon {
                    d.push('Z');
                }
                let d = d.trim_end();
                if polygon {
                    writeln!(
                        out,
                        "  <path d=\"{d}\" fill=\"{}\" fill-opacity=\"{}\" stroke=\"{stroke}\" stroke-width=\"1\"/>",
                        opts.color,
                        num(opts.opacity)
                    )
                    .unwrap();
                } else {
                    // points and segments have no area; draw them in the fill color
                    writeln!(
                        out,
                        "  <path d=\"{d}\" fill=\"none\" stroke=\"{}\" stroke-opacity=\"{}\" stroke-width=\"2\" stroke-linecap=\"round\"/>",
                        opts.color,
                        num(opts.opacity)
                    )
                    .unwrap();
                }
            }
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// `v x y z` and 1-based `f i j k ...` lines; sets of lower dimension are
/// padded with zero coordinates. Options go into a leading comment.
pub fn obj(meshes: &[Mesh], opts: &PlotOptions) -> Result<String, String> {
    let mut out = String::new();
    writeln!(out, "# color {} opacity {} edges {}", opts.color, num(opts.opacity), opts.edges).unwrap();
    let (v, f) = merge(meshes);
    for p in &v {
        if p.len() > 3 {
            return Err(format!("OBJ export needs dimension at most 3, got {}", p.len()));
        }
        let c: Vec<String> = (0..3).map(|k| num(p.get(k).copied().unwrap_or(0.0))).collect();
        writeln!(out, "v {}", c.join(" ")).unwrap();
    }
    for face in &f {
        let tag = match face.len() {
            1 => "p",
            2 => "l",
            _ => "f",
        };
        let idx: Vec<String> = face.iter().map(|i| (i + 1).to_string()).collect();
        writeln!(out, "{tag} {}", idx.join(" ")).unwrap();
    }
    Ok(out)
}
