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

//! Constructors from halfspace and vertex data.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::{AnySet, ConZonotope, HybZonotope, Zonotope};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::ops;
use crate::opt::{LinearProgram, Outcome, Solver};

/// Vertices `V` (one per column) and a 0/1 incidence `M` whose column `j`
/// lists the vertices of convex piece `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct VertexIncidence {
    v: Matrix,
    m: Matrix,
}

impl VertexIncidence {
    pub fn new(v: Matrix, m: Matrix) -> Result<Self> {
        if m.cols() == 0 {
            return Err(Error::arg("incidence matrix has no columns"));
        }
        if v.cols() != m.rows() {
            return Err(Error::dim(format!("{} vertices but {} incidence rows", v.cols(), m.rows())));
        }
        if m.as_slice().iter().any(|&e| e != 0.0 && e != 1.0) {
            return Err(Error::arg("incidence entries must be 0 or 1"));
        }
        if let Some(j) = (0..m.cols()).find(|&j| m.col(j).iter().all(|&e| e == 0.0)) {
            return Err(Error::arg(format!("piece {j} has no vertices")));
        }
        Ok(VertexIncidence { v, m })
    }

    /// Consecutive vertices joined by segments; `closed` adds the segment
    /// from the last vertex back to the first.
    pub fn polyline(v: Matrix, closed: bool) -> Result<Self> {
        let nv = v.cols();
        if nv < 2 {
            return Err(Error::arg("a polyline needs at least two vertices"));
        }
        let pieces = if closed && nv > 2 { nv } else { nv - 1 };
        let m = Matrix::from_fn(nv, pieces, |i, j| if i == j || i == (j + 1) % nv { 1.0 } else { 0.0 });
        Self::new(v, m)
    }

    pub fn vertices(&self) -> &Matrix {
        &self.v
    }

    pub fn incidence(&self) -> &Matrix {
        &self.m
    }
}

/// Union over pieces `j` of `conv{v_i | M_ij = 1}`.
///
/// Each used vertex carries a convex weight `lambda_i = (1 + w_i)/2`. With
/// several pieces, a one-hot selector `delta` (a single binary for two
/// pieces) bounds `lambda_i <= sum_j M_ij delta_j` through a slack factor;
/// vertices shared by every piece need no slack. When one vertex is shared
/// by every piece and no piece has more than two vertices, its weight is
/// eliminated and the sum-to-one row becomes redundant.
pub fn from_vertices(vi: &VertexIncidence) -> Result<AnySet> {
    let (v, m) = (&vi.v, &vi.m);
    let n = v.rows();
    let n_pieces = m.cols();
    let used: Vec<usize> = (0..v.cols()).filter(|&i| m.row(i).contains(&1.0)).collect();
    let vert = |i: usize| v.col(i);

    if n_pieces == 1 {
        let nv = used.len();
        let g = Matrix::from_fn(n, nv, |r, k| 0.5 * v[(r, used[k])]);
        let c = g.row_sums();
        return Ok(ConZonotope::new(g, c, Matrix::from_fn(1, nv, |_, _| 1.0), vec![2.0 - nv as f64])?.into());
    }

    let in_all = |i: usize| m.row(i).iter().all(|&e| e == 1.0);
    let small_pieces = (0..n_pieces).all(|j| m.col(j).iter().filter(|&&e| e == 1.0).count() <= 2);
    let anchor = if small_pieces { used.iter().copied().find(|&i| in_all(i)) } else { None };

    let weighted: Vec<usize> = used.iter().copied().filter(|&i| Some(i) != anchor).collect();
    let slacked: Vec<usize> = weighted.iter().copied().filter(|&i| !in_all(i)).collect();
    let (nw, ns) = (weighted.len(), slacked.len());
    let nb = if n_pieces == 2 { 1 } else { n_pieces };
    let sum_row = anchor.is_none();
    let nc = ns + usize::from(sum_row) + usize::from(n_pieces > 2);

    let base = anchor.map_or(vec![0.0; n], vert);
    let mut gc = Matrix::zeros(n, nw + ns);
    let mut c = base.clone();
    for (k, &i) in weighted.iter().enumerate() {
        let vi = vert(i);
        for r in 0..n {
            let g = 0.5 * (vi[r] - base[r]);
            gc[(r, k)] = g;
            c[r] += g;
        }
    }

    let mut ac = Matrix::zeros(nc, nw + ns);
    let mut ab = Matrix::zeros(nc, nb);
    let mut b = vec![0.0; nc];
    for (q, &i) in slacked.iter().enumerate() {
        let k = weighted.iter().position(|&w| w == i).unwrap();
        ac[(q, k)] = 1.0;
        ac[(q, nw + q)] = 1.0;
        let mi = m.row(i);
        if n_pieces == 2 {
            ab[(q, 0)] = -(mi[1] - mi[0]);
            b[q] = mi[0] + mi[1] - 2.0;
        } else {
            for j in 0..n_pieces {
                ab[(q, j)] = -mi[j];
            }
            b[q] = mi.iter().sum::<f64>() - 2.0;
        }
    }
    let mut row = ns;
    if sum_row {
        for k in 0..nw {
            ac[(row, k)] = 1.0;
        }
        b[row] = 2.0 - nw as f64;
        row += 1;
    }
    if n_pieces > 2 {
        for j in 0..n_pieces {
            ab[(row, j)] = 1.0;
        }
        b[row] = 2.0 - n_pieces as f64;
    }
    Ok(HybZonotope::new(gc, Matrix::zeros(n, nb), c, ac, ab, b)?.into())
}

/// `{x | H x <= f}` as a constrained zonotope, using the default solver for
/// the bounding box.
pub fn from_hrep(h: &Matrix, f: &[f64]) -> Result<ConZonotope> {
    from_hrep_with(h, f, &Solver::default())
}

pub fn from_hrep_with(h: &Matrix, f: &[f64], solver: &Solver) -> Result<ConZonotope> {
    if h.rows() != f.len() {
        return Err(Error::dim("halfspace rows and offsets differ in length"));
    }
    let (nh, n) = h.shape();
    if n == 0 {
        return Err(Error::arg("halfspace normals have no columns"));
    }
    // Equality form over (x, s): H x + s = f, x free, s >= 0.
    let a = Matrix::hcat(nh, &[h, &Matrix::identity(nh)]);
    let mut lower = vec![f64::NEG_INFINITY; n];
    lower.extend(core::iter::repeat(0.0).take(nh));
    let upper = vec![f64::INFINITY; n + nh];
    let mut lp = LinearProgram::new(vec![0.0; n + nh], a, f.to_vec(), lower, upper)?;
    let mut lo = vec![0.0; n];
    let mut hi = vec![0.0; n];
    for i in 0..n {
        for (sign, out) in [(-1.0, &mut hi), (1.0, &mut lo)] {
            lp.objective[i] = sign;
            match solver.lp(&lp)? {
                Outcome::Optimal { x, .. } => out[i] = x[i],
                Outcome::Infeasible => return Err(Error::Empty),
                Outcome::Unbounded => return Err(Error::Unbounded),
            }
        }
        lp.objective[i] = 0.0;
    }
    let boxed: AnySet = Zonotope::from_box(&lo, &hi)?.into();
    match ops::halfspace_intersection(&boxed, h, f, None)? {
        AnySet::ConZono(z) => Ok(z),
        _ => unreachable!("halfspace intersection of a zonotope is a conZono"),
    }
}

/// Union of H-rep polytopes; pieces may have different row counts.
pub fn from_hrep_union(pieces: &[(Matrix, Vec<f64>)]) -> Result<HybZonotope> {
    let solver = Solver::default();
    let sets = pieces
        .iter()
        .map(|(h, f)| from_hrep_with(h, f, &solver).map(AnySet::from))
        .collect::<Result<Vec<_>>>()?;
    if sets.is_empty() {
        return Err(Error::arg("union of an empty list of polytopes"));
    }
    Ok(ops::union_all(&sets)?.into_hyb())
}
