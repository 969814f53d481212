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

//! Bounding unary nonlinear functions with hybrid zonotopes: a segment
//! union through sampled breakpoints plus a vertical error interval.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::ops;
use crate::reach::StateUpdateSet;
use crate::sets::{from_vertices, AnySet, HybZonotope, VertexIncidence, Zonotope};

/// A function with its breakpoints; the domain is `[first, last]`.
pub struct UnaryFunctionSpec<'a> {
    f: &'a dyn Fn(f64) -> f64,
    breakpoints: Vec<f64>,
}

impl<'a> UnaryFunctionSpec<'a> {
    pub fn new(f: &'a dyn Fn(f64) -> f64, breakpoints: Vec<f64>) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(Error::arg("need at least two breakpoints"));
        }
        if breakpoints.iter().any(|x| !x.is_finite()) || breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::arg("breakpoints must be finite and strictly increasing"));
        }
        Ok(UnaryFunctionSpec { f, breakpoints })
    }

    /// `n_v` evenly spaced breakpoints on `[lo, hi]`.
    pub fn uniform(f: &'a dyn Fn(f64) -> f64, lo: f64, hi: f64, n_v: usize) -> Result<Self> {
        if n_v < 2 {
            return Err(Error::arg("need at least two breakpoints"));
        }
        let step = (hi - lo) / (n_v - 1) as f64;
        let mut bp: Vec<f64> = (0..n_v).map(|i| lo + step * i as f64).collect();
        bp[n_v - 1] = hi;
        Self::new(f, bp)
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.breakpoints[0], *self.breakpoints.last().unwrap())
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        let y = (self.f)(x);
        if y.is_finite() {
            Ok(y)
        } else {
            Err(Error::Evaluation(format!("f({x}) = {y}")))
        }
    }
}

/// Union of the segments joining consecutive `(x_i, f(x_i))`.
pub fn build_segment_graph(spec: &UnaryFunctionSpec<'_>) -> Result<HybZonotope> {
    let bp = &spec.breakpoints;
    let ys = bp.iter().map(|&x| spec.eval(x)).collect::<Result<Vec<_>>>()?;
    let v = Matrix::from_fn(2, bp.len(), |r, i| if r == 0 { bp[i] } else { ys[i] });
    Ok(from_vertices(&VertexIncidence::polyline(v, false)?)?.into_hyb())
}

#[derive(Clone, Debug, PartialEq)]
pub struct ErrorBound {
    /// Vertical interval `<[0; eps], [0; m]>` (a singleton when `eps = 0`).
    pub e: Zonotope,
    /// `1.5 * max |f - interpolant|` per segment.
    pub radii: Vec<f64>,
}

const SAFETY: f64 = 1.5;

/// Samples `grid + 1` points per segment. The global interval has half-width
/// `max_j radii[j]` and is centered midway between the largest and smallest
/// signed errors, which covers one-sided errors without doubling them.
pub fn bound_error(spec: &UnaryFunctionSpec<'_>, grid: usize) -> Result<ErrorBound> {
    let grid = grid.max(1);
    let bp = &spec.breakpoints;
    let ys = bp.iter().map(|&x| spec.eval(x)).collect::<Result<Vec<_>>>()?;
    // Interpolation errors at rounding level count as exact.
    let noise = 1e-12 * ys.iter().fold(1.0f64, |m, y| m.max(y.abs()));
    let (mut emin, mut emax) = (0.0f64, 0.0f64);
    let mut radii = Vec::with_capacity(bp.len() - 1);
    for j in 0..bp.len() - 1 {
        let mut worst = 0.0f64;
        for k in 0..=grid {
            let t = k as f64 / grid as f64;
            let x = bp[j] + t * (bp[j + 1] - bp[j]);
            let err = spec.eval(x)? - (ys[j] + t * (ys[j + 1] - ys[j]));
            let err = if err.abs() <= noise { 0.0 } else { err };
            worst = worst.max(err.abs());
            emin = emin.min(err);
            emax = emax.max(err);
        }
        radii.push(SAFETY * worst);
    }
    let eps = radii.iter().copied().fold(0.0, f64::max);
    let mid = 0.5 * (emax + emin);
    let e = if eps == 0.0 {
        Zonotope::singleton(vec![0.0, mid])
    } else {
        Zonotope::new(Matrix::from_rows(&[[0.0], [eps]]).unwrap(), vec![0.0, mid])?
    };
    Ok(ErrorBound { e, radii })
}

/// `Z_v + E`: contains the graph of `f` over its domain at grid resolution.
pub fn bound_function(spec: &UnaryFunctionSpec<'_>, grid: usize) -> Result<HybZonotope> {
    let zv = build_segment_graph(spec)?;
    let e = bound_error(spec, grid)?;
    Ok(ops::minkowski_sum(&zv.into(), &e.e.into())?.into_hyb())
}

/// `c * g(l^T z)` where `graph` bounds `g` over `(s, g(s))`.
#[derive(Clone, Debug, PartialEq)]
pub struct GraphTerm {
    pub input: Vec<f64>,
    pub graph: HybZonotope,
    pub output: Vec<f64>,
}

/// `y = M z + sum_k c_k g_k(l_k^T z) + offset`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineAssembly {
    pub linear: Matrix,
    pub offset: Vec<f64>,
    pub terms: Vec<GraphTerm>,
}

/// The set of `(z, y)` with `z` in `domain` and `y` given by `asm`.
///
/// Built as `D x Z_1 x ... x Z_K` over `(z, s_1, t_1, ..., s_K, t_K)`, one
/// generalized intersection pinning `s_k = l_k^T z` (K rows), and a linear
/// map to `(z, y)`. Points of `D` whose `l_k^T z` leaves the domain of
/// `Z_k` are cut away, so each graph must cover the range it is fed.
pub fn graph_set(domain: &AnySet, asm: &AffineAssembly) -> Result<AnySet> {
    let nz = domain.dim();
    let ny = asm.linear.rows();
    let nk = asm.terms.len();
    if asm.linear.cols() != nz || asm.offset.len() != ny {
        return Err(Error::dim("assembly map does not match the domain and output"));
    }
    for (k, t) in asm.terms.iter().enumerate() {
        if t.input.len() != nz || t.output.len() != ny || t.graph.n() != 2 {
            return Err(Error::dim(format!("term {k} has inconsistent shapes")));
        }
    }
    let mut p = domain.clone();
    for t in &asm.terms {
        p = ops::cartesian_product(&p, &t.graph.clone().into())?;
    }
    if nk > 0 {
        let r = Matrix::from_fn(nk, nz + 2 * nk, |k, j| {
            if j < nz {
                asm.terms[k].input[j]
            } else if j == nz + 2 * k {
                -1.0
            } else {
                0.0
            }
        });
        p = ops::generalized_intersection(&p, &Zonotope::singleton(vec![0.0; nk]).into(), Some(&r))?;
    }
    let map = Matrix::from_fn(nz + ny, nz + 2 * nk, |i, j| {
        if i < nz {
            if i == j {
                1.0
            } else {
                0.0
            }
        } else if j < nz {
            asm.linear[(i - nz, j)]
        } else if (j - nz) % 2 == 1 {
            asm.terms[(j - nz) / 2].output[i - nz]
        } else {
            0.0
        }
    });
    let shift: Vec<f64> = core::iter::repeat(0.0).take(nz).chain(asm.offset.iter().copied()).collect();
    ops::affine_map(&map, &p, &shift)
}

/// State-update set `(x, u, x+)` for `x+ = M (x, u) + sum_k c_k g_k(l_k^T (x, u)) + offset`.
pub fn lift_to_update_set(domain: &AnySet, n_state: usize, m_input: usize, asm: &AffineAssembly) -> Result<StateUpdateSet> {
    if domain.dim() != n_state + m_input || asm.linear.rows() != n_state {
        return Err(Error::dim("update-set assembly does not match the state/input partition"));
    }
    StateUpdateSet::new(graph_set(domain, asm)?, n_state, m_input)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sets::Complexity;

    #[test]
    fn linear_function_has_no_error() {
        let f = |x: f64| 2.0 * x + 1.0;
        let spec = UnaryFunctionSpec::uniform(&f, -1.0, 1.0, 3).unwrap();
        let e = bound_error(&spec, 50).unwrap();
        assert_eq!(e.e.n_g(), 0);
        assert!(e.radii.iter().all(|&r| r < 1e-12));
    }

    #[test]
    fn chord_error_of_square() {
        let f = |x: f64| x * x;
        let spec = UnaryFunctionSpec::uniform(&f, 0.0, 1.0, 2).unwrap();
        let e = bound_error(&spec, 100).unwrap();
        // The chord x lies above x^2 by at most 1/4, at x = 1/2.
        assert!((e.radii[0] - 1.5 * 0.25).abs() < 1e-12);
        assert!((e.e.c()[1] + 0.125).abs() < 1e-12);
    }

    #[test]
    fn non_finite_values_are_rejected() {
        let f = |x: f64| 1.0 / x;
        let spec = UnaryFunctionSpec::uniform(&f, 0.0, 1.0, 3).unwrap();
        assert!(matches!(build_segment_graph(&spec), Err(Error::Evaluation(_))));
    }

    #[test]
    fn breakpoint_validation() {
        let f = |x: f64| x;
        assert!(UnaryFunctionSpec::new(&f, vec![0.0, 0.0]).is_err());
        assert!(UnaryFunctionSpec::new(&f, vec![1.0]).is_err());
    }

    #[test]
    fn segment_graph_counts() {
        let f = libm::sin;
        let spec = UnaryFunctionSpec::uniform(&f, -3.0, 3.0, 5).unwrap();
        let z = build_segment_graph(&spec).unwrap();
        // 5 weights, 3 slacks for vertices in some but not all segments plus
        // the two ends, one-hot over 4 segments.
        assert_eq!(z.complexity(), Complexity { n_g: 10, n_b: 4, n_c: 7 });
    }
}
