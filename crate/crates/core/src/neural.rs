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

//! Exact hybrid-zonotope graphs of feed-forward ReLU networks.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::ops;
use crate::opt::Interval;
use crate::sets::{from_vertices, AnySet, HybZonotope, VertexIncidence, Zonotope};

/// `x^{l+1} = max(0, W^l x^l + b^l)` for hidden layers, affine output.
#[derive(Clone, Debug, PartialEq)]
pub struct ReluNetwork {
    weights: Vec<Matrix>,
    biases: Vec<Vec<f64>>,
}

impl ReluNetwork {
    pub fn new(weights: Vec<Matrix>, biases: Vec<Vec<f64>>) -> Result<Self> {
        if weights.is_empty() || weights.len() != biases.len() {
            return Err(Error::dim("need one bias vector per weight matrix, and at least one layer"));
        }
        for (l, (w, b)) in weights.iter().zip(&biases).enumerate() {
            if w.rows() != b.len() {
                return Err(Error::dim(format!("layer {l}: {} rows but {} biases", w.rows(), b.len())));
            }
            if l > 0 && w.cols() != weights[l - 1].rows() {
                return Err(Error::dim(format!(
                    "layer {l} expects {} inputs, previous layer has {} outputs",
                    w.cols(),
                    weights[l - 1].rows()
                )));
            }
        }
        Ok(ReluNetwork { weights, biases })
    }

    pub fn weights(&self) -> &[Matrix] {
        &self.weights
    }

    pub fn biases(&self) -> &[Vec<f64>] {
        &self.biases
    }

    /// `n_0, ..., n_{L+1}`.
    pub fn widths(&self) -> Vec<usize> {
        let mut w = vec![self.weights[0].cols()];
        w.extend(self.weights.iter().map(Matrix::rows));
        w
    }

    /// Number of hidden ReLU units.
    pub fn n_units(&self) -> usize {
        self.weights[..self.weights.len() - 1].iter().map(Matrix::rows).sum()
    }

    pub fn forward(&self, x: &[f64]) -> Vec<f64> {
        let last = self.weights.len() - 1;
        let mut h = x.to_vec();
        for (l, (w, b)) in self.weights.iter().zip(&self.biases).enumerate() {
            h = w.mul_vec(&h).iter().zip(b).map(|(v, bi)| v + bi).collect();
            if l < last {
                for v in &mut h {
                    *v = v.max(0.0);
                }
            }
        }
        h
    }

    /// Interval bounds on every hidden pre-activation over the box `x`.
    pub fn preactivation_bounds(&self, x: &[Interval]) -> Vec<Vec<Interval>> {
        let mut h: Vec<Interval> = x.to_vec();
        let mut out = Vec::new();
        for (w, b) in self.weights[..self.weights.len() - 1].iter().zip(&self.biases) {
            let v: Vec<Interval> = (0..w.rows())
                .map(|i| {
                    let (mut lo, mut hi) = (b[i], b[i]);
                    for (j, hj) in h.iter().enumerate() {
                        let a = w[(i, j)];
                        if a >= 0.0 {
                            lo += a * hj.lo;
                            hi += a * hj.hi;
                        } else {
                            lo += a * hj.hi;
                            hi += a * hj.lo;
                        }
                    }
                    Interval { lo, hi }
                })
                .collect();
            h = v
                .iter()
                .map(|iv| Interval {
                    lo: iv.lo.max(0.0),
                    hi: iv.hi.max(0.0),
                })
                .collect();
            out.push(v);
        }
        out
    }
}

/// `{(v, max(0, v)) | v in [-a, a]}` as the union of the two segments
/// through `(-a, 0)`, `(0, 0)` and `(a, a)`.
pub fn relu_unit_set(a: f64) -> Result<HybZonotope> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::arg("activation bound must be positive and finite"));
    }
    let v = Matrix::from_rows(&[[-a, 0.0, a], [0.0, 0.0, a]]).unwrap();
    Ok(from_vertices(&VertexIncidence::polyline(v, false)?)?.into_hyb())
}

#[derive(Clone, Debug, PartialEq)]
pub struct NetworkGraphSet {
    /// Graph over `(x, y)`.
    pub f: HybZonotope,
    pub domain: Zonotope,
    pub activation_bound: f64,
    pub n_x: usize,
    pub n_y: usize,
    /// Pre-activation bound violations found by interval propagation.
    pub warnings: Vec<String>,
}

/// Encodes `{(x, f(x)) | x in X}`.
///
/// The running set `S` lives over `(x, h)` with `h` the current layer. Each
/// hidden layer takes `S x Phi`, where `Phi` stacks one unit graph per
/// neuron reordered to `(v, z)`, ties `v = W h + b` with a generalized
/// intersection against the singleton `{-b}`, and keeps `(x, z)`. Per unit
/// this costs 4 generators, 1 binary and 3 constraints (2 in the unit graph,
/// 1 coupling row).
pub fn encode_network(net: &ReluNetwork, x: &Zonotope, a: f64) -> Result<NetworkGraphSet> {
    let n_x = net.widths()[0];
    if x.n() != n_x {
        return Err(Error::dim(format!("domain has dimension {}, network expects {n_x}", x.n())));
    }
    let unit = AnySet::from(relu_unit_set(a)?);

    let mut warnings = Vec::new();
    let radius: Vec<f64> = (0..n_x).map(|i| x.g().row(i).iter().map(|v| v.abs()).sum()).collect();
    let domain_box: Vec<Interval> = (0..n_x)
        .map(|i| Interval {
            lo: x.c()[i] - radius[i],
            hi: x.c()[i] + radius[i],
        })
        .collect();
    for (l, layer) in net.preactivation_bounds(&domain_box).iter().enumerate() {
        for (i, iv) in layer.iter().enumerate() {
            if iv.lo < -a || iv.hi > a {
                warnings.push(format!(
                    "layer {l} unit {i}: pre-activation range [{:.6}, {:.6}] exceeds activation bound {a}",
                    iv.lo, iv.hi
                ));
            }
        }
    }

    let stack = Matrix::vcat(n_x, &[&Matrix::identity(n_x), &Matrix::identity(n_x)]);
    let mut s = ops::linear_map(&stack, &AnySet::from(x.clone()))?;
    let last = net.weights.len() - 1;
    for (w, b) in net.weights[..last].iter().zip(&net.biases) {
        let (k, nh) = w.shape();
        let mut phi = unit.clone();
        for _ in 1..k {
            phi = ops::cartesian_product(&phi, &unit)?;
        }
        // (v1, z1, v2, z2, ...) -> (v1..vk, z1..zk)
        let order: Vec<usize> = (0..k).map(|i| 2 * i).chain((0..k).map(|i| 2 * i + 1)).collect();
        let phi = ops::projection(&phi, &order)?;
        let p = ops::cartesian_product(&s, &phi)?;
        let r = Matrix::hcat(
            k,
            &[&Matrix::zeros(k, n_x), w, &Matrix::identity(k).scale(-1.0), &Matrix::zeros(k, k)],
        );
        let neg_b: Vec<f64> = b.iter().map(|v| -v).collect();
        let coupled = ops::generalized_intersection(&p, &Zonotope::singleton(neg_b).into(), Some(&r))?;
        let keep: Vec<usize> = (0..n_x).chain(n_x + nh + k..n_x + nh + 2 * k).collect();
        s = ops::projection(&coupled, &keep)?;
    }
    let (w, b) = (&net.weights[last], &net.biases[last]);
    let n_y = w.rows();
    let out_map = Matrix::block_diag(&[&Matrix::identity(n_x), w]);
    let shift: Vec<f64> = core::iter::repeat(0.0).take(n_x).chain(b.iter().copied()).collect();
    let f = ops::affine_map(&out_map, &s, &shift)?.into_hyb();
    Ok(NetworkGraphSet {
        f,
        domain: x.clone(),
        activation_bound: a,
        n_x,
        n_y,
        warnings,
    })
}

/// Projection of the graph onto the outputs.
pub fn output_set(gs: &NetworkGraphSet) -> Result<AnySet> {
    let dims: Vec<usize> = (gs.n_x..gs.n_x + gs.n_y).collect();
    ops::projection(&AnySet::from(gs.f.clone()), &dims)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sets::Complexity;

    #[test]
    fn unit_counts_and_bad_bound() {
        assert_eq!(relu_unit_set(3.0).unwrap().complexity(), Complexity { n_g: 4, n_b: 1, n_c: 2 });
        assert!(relu_unit_set(0.0).is_err());
        assert!(relu_unit_set(-1.0).is_err());
    }

    #[test]
    fn encoding_counts() {
        let net = ReluNetwork::new(
            vec![Matrix::from_fn(3, 2, |i, j| (i + j) as f64 - 1.5), Matrix::from_fn(1, 3, |_, j| j as f64)],
            vec![vec![0.1, -0.2, 0.0], vec![0.5]],
        )
        .unwrap();
        let x = Zonotope::from_box(&[-1.0, -1.0], &[1.0, 1.0]).unwrap();
        let gs = encode_network(&net, &x, 10.0).unwrap();
        assert_eq!(gs.f.complexity(), Complexity { n_g: 2 + 12, n_b: 3, n_c: 9 });
        assert!(gs.warnings.is_empty());
        let tight = encode_network(&net, &x, 0.5).unwrap();
        assert!(!tight.warnings.is_empty());
    }

    #[test]
    fn forward_pass() {
        let net = ReluNetwork::new(vec![Matrix::identity(1), Matrix::identity(1)], vec![vec![0.0], vec![0.0]]).unwrap();
        assert_eq!(net.forward(&[-2.0]), vec![0.0]);
        assert_eq!(net.forward(&[3.0]), vec![3.0]);
        assert_eq!(net.n_units(), 1);
    }
}
