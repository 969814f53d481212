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


//! Set and network documents.
//!
//! A set document is `{"type", "Gc", "Gb", "c", "Ac", "Ab", "b"}` with
//! row-major matrices and `[]` for absent blocks. Hybrid documents may add
//! `"binaries": "zeroOne"` when their binary factors take values in {0, 1};
//! they are remapped to {-1, 1} on load. Two more input-only types build
//! sets from other data:
//!
//! * `{"type": "hrep", "H", "f"}`: the polytope `H x <= f`, loaded as a
//!   conZono; `{"type": "hrepUnion", "pieces": [{"H", "f"}, ...]}` a union.
//! * `{"type": "vrep", "V", "M"}`: vertices as the columns of `V` and a 0/1
//!   incidence `M` with one column per convex piece; `"closed": bool` in
//!   place of `M` joins consecutive vertices into a polyline.

use hybzono_core::neural::ReluNetwork;
use hybzono_core::sets::{from_hrep, from_hrep_union, from_vertices};
use hybzono_core::{AnySet, ConZonotope, HybZonotope, Matrix, Rep, VertexIncidence, Zonotope};
use serde::Serialize;

use crate::doc::{Invalid, Node};

#[derive(Serialize)]
struct SetOut<'a> {
    #[serde(rename = "type")]
    ty: &'a str,
    #[serde(rename = "Gc")]
    gc: Vec<Vec<f64>>,
    #[serde(rename = "Gb")]
    gb: Vec<Vec<f64>>,
    c: &'a [f64],
    #[serde(rename = "Ac")]
    ac: Vec<Vec<f64>>,
    #[serde(rename = "Ab")]
    ab: Vec<Vec<f64>>,
    b: &'a [f64],
}

/// Zero-column blocks have no row-major spelling and are written as `[]`.
fn block(m: &Matrix) -> Vec<Vec<f64>> {
    if m.cols() == 0 {
        Vec::new()
    } else {
        m.to_rows()
    }
}

pub fn set_to_json(s: &AnySet) -> String {
    let empty: (Matrix, Vec<f64>) = (Matrix::zeros(0, 0), Vec::new());
    let out = match s {
        AnySet::Zono(z) => SetOut {
            ty: "zono",
            gc: block(z.g()),
            gb: Vec::new(),
            c: z.c(),
            ac: Vec::new(),
            ab: Vec::new(),
            b: &empty.1,
        },
        AnySet::ConZono(z) => SetOut {
            ty: "conZono",
            gc: block(z.g()),
            gb: Vec::new(),
            c: z.c(),
            ac: block(z.a()),
            ab: Vec::new(),
            b: z.b(),
        },
        AnySet::HybZono(h) => SetOut {
            ty: "hybZono",
            gc: block(h.gc()),
            gb: block(h.gb()),
            c: h.c(),
            ac: block(h.ac()),
            ab: block(h.ab()),
            b: h.b(),
        },
    };
    let mut text = serde_json::to_string_pretty(&out).expect("set documents serialize");
    text.push('\n');
    text
}

fn core_error(node: &Node<'_>, e: hybzono_core::Error) -> Invalid {
    node.error(e)
}

fn reject_present(node: &Node<'_>, keys: &[&str], ty: &str) -> Result<(), Invalid> {
    for k in keys {
        if let Some(n) = node.get(k) {
            if n.value.as_array().map_or(true, |a| !a.is_empty()) {
                return Err(n.error(format!("\"{k}\" must be [] for type \"{ty}\"")));
            }
        }
    }
    Ok(())
}

/// Parses any set document, including the H-rep and V-rep input types.
pub fn parse_set(node: &Node<'_>) -> Result<AnySet, Invalid> {
    let ty_node = node.req("type")?;
    let ty = ty_node.str()?;
    match ty {
        "zono" => {
            reject_present(node, &["Gb", "Ac", "Ab", "b"], ty)?;
            let c = node.req("c")?.vector()?;
            let g = fit_rows(node, node.req("Gc")?.matrix(None)?, c.len(), "Gc")?;
            Ok(Zonotope::new(g, c).map_err(|e| core_error(&ty_node, e))?.into())
        }
        "conZono" => {
            reject_present(node, &["Gb", "Ab"], ty)?;
            let c = node.req("c")?.vector()?;
            let g = fit_rows(node, node.req("Gc")?.matrix(None)?, c.len(), "Gc")?;
            let b = node.req("b")?.vector()?;
            let a = fit_cols(node, node.req("Ac")?.matrix(None)?, b.len(), g.cols(), "Ac")?;
            Ok(ConZonotope::new(g, c, a, b).map_err(|e| core_error(&ty_node, e))?.into())
        }
        "hybZono" => {
            let c = node.req("c")?.vector()?;
            let gc = fit_rows(node, node.req("Gc")?.matrix(None)?, c.len(), "Gc")?;
            let gb = fit_rows(node, node.req("Gb")?.matrix(None)?, c.len(), "Gb")?;
            let b = node.req("b")?.vector()?;
            let ac = fit_cols(node, node.req("Ac")?.matrix(None)?, b.len(), gc.cols(), "Ac")?;
            let ab = fit_cols(node, node.req("Ab")?.matrix(None)?, b.len(), gb.cols(), "Ab")?;
            let zero_one = match node.get("binaries") {
                None => false,
                Some(n) => match n.str()? {
                    "zeroOne" => true,
                    "plusMinusOne" => false,
                    other => return Err(n.error(format!("unknown binary alphabet \"{other}\""))),
                },
            };
            let h = if zero_one {
                HybZonotope::from_zero_one_binaries(gc, gb, c, ac, ab, b)
            } else {
                HybZonotope::new(gc, gb, c, ac, ab, b)
            };
            Ok(h.map_err(|e| core_error(&ty_node, e))?.into())
        }
        "hrep" => {
            let (h, f) = hrep(node)?;
            Ok(from_hrep(&h, &f).map_err(|e| core_error(&ty_node, e))?.into())
        }
        "hrepUnion" => {
            let pieces = node.req("pieces")?.items()?.iter().map(hrep).collect::<Result<Vec<_>, _>>()?;
            Ok(from_hrep_union(&pieces).map_err(|e| core_error(&ty_node, e))?.into())
        }
        "vrep" => {
            let v = node.req("V")?.matrix(None)?;
            let vi = match (node.get("M"), node.get("closed")) {
                (Some(m), None) => VertexIncidence::new(v, m.matrix(None)?).map_err(|e| core_error(&m, e))?,
                (None, closed) => {
                    let closed = closed.map_or(Ok(false), |n| n.bool())?;
                    VertexIncidence::polyline(v, closed).map_err(|e| core_error(&ty_node, e))?
                }
                (Some(_), Some(n)) => return Err(n.error("give either \"M\" or \"closed\", not both")),
            };
            from_vertices(&vi).map_err(|e| core_error(&ty_node, e))
        }
        other => Err(ty_node.error(format!("unknown set type \"{other}\""))),
    }
}

/// `[]` stands for an `n x 0` block.
fn fit_rows(node: &Node<'_>, m: Matrix, n: usize, key: &str) -> Result<Matrix, Invalid> {
    if m.rows() == 0 && m.cols() == 0 {
        return Ok(Matrix::zeros(n, 0));
    }
    if m.rows() != n {
        return Err(node.req(key)?.error(format!("expected {n} rows to match \"c\", found {}", m.rows())));
    }
    Ok(m)
}

fn fit_cols(node: &Node<'_>, m: Matrix, rows: usize, cols: usize, key: &str) -> Result<Matrix, Invalid> {
    if m.rows() == 0 && m.cols() == 0 {
        return Ok(Matrix::zeros(rows, cols));
    }
    if rows == 0 || cols == 0 || m.shape() != (rows, cols) {
        return Err(node.req(key)?.error(format!("expected a {rows}x{cols} block, found {}x{}", m.rows(), m.cols())));
    }
    Ok(m)
}

fn hrep(node: &Node<'_>) -> Result<(Matrix, Vec<f64>), Invalid> {
    let f = node.req("f")?.vector()?;
    let h = node.req("H")?.matrix(None)?;
    if h.rows() != f.len() {
        return Err(node.req("f")?.error(format!("{} offsets for {} halfspaces", f.len(), h.rows())));
    }
    Ok((h, f))
}

pub fn rep_of(node: &Node<'_>) -> Result<Rep, Invalid> {
    let n = node.req("type")?;
    Rep::from_name(n.str()?).ok_or_else(|| n.error("expected \"zono\", \"conZono\" or \"hybZono\""))
}

/// `{"weights": [W0, ...], "biases": [b0, ...]}` with each `W` row-major.
/// An optional `"widths"` list is checked against the matrix shapes.
pub fn parse_network(node: &Node<'_>) -> Result<ReluNetwork, Invalid> {
    let wn = node.req("weights")?;
    let weights = wn.items()?.iter().map(|n| n.matrix(None)).collect::<Result<Vec<_>, _>>()?;
    let bn = node.req("biases")?;
    let biases = bn.items()?.iter().map(Node::vector).collect::<Result<Vec<_>, _>>()?;
    let net = ReluNetwork::new(weights, biases).map_err(|e| wn.error(e))?;
    if let Some(w) = node.get("widths") {
        if w.indices()? != net.widths() {
            return Err(w.error(format!("widths do not match the weights, which give {:?}", net.widths())));
        }
    }
    Ok(net)
}

#[derive(Serialize)]
struct NetworkOut<'a> {
    widths: Vec<usize>,
    weights: Vec<Vec<Vec<f64>>>,
    biases: &'a [Vec<f64>],
}

pub fn network_to_json(net: &ReluNetwork) -> String {
    let out = NetworkOut {
        widths: net.widths(),
        weights: net.weights().iter().map(Matrix::to_rows).collect(),
        biases: net.biases(),
    };
    let mut text = serde_json::to_string_pretty(&out).expect("network documents serialize");
    text.push('\n');
    text
}
