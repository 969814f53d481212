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

//! Exact set operations over [`AnySet`] operands.
//!
//! Everything is computed on the hybrid form and re-tagged with the least
//! expressive representation the construction guarantees.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::{self, Matrix};
use crate::sets::{AnySet, Complexity, ConZonotope, HybZonotope, Rep, Zonotope};

/// Output complexity of an operation, for scalability accounting.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpComplexityReport {
    pub operation: &'static str,
    pub n_g_out: usize,
    pub n_b_out: usize,
    pub n_c_out: usize,
}

impl OpComplexityReport {
    pub fn new(operation: &'static str, c: Complexity) -> Self {
        OpComplexityReport {
            operation,
            n_g_out: c.n_g,
            n_b_out: c.n_b,
            n_c_out: c.n_c,
        }
    }

    pub fn of(operation: &'static str, s: &AnySet) -> Self {
        Self::new(operation, s.complexity())
    }
}

fn same_dim(s: &AnySet, t: &AnySet) -> Result<()> {
    if s.dim() != t.dim() {
        return Err(Error::dim(format!("operands live in R^{} and R^{}", s.dim(), t.dim())));
    }
    Ok(())
}

fn hyb(gc: Matrix, gb: Matrix, c: Vec<f64>, ac: Matrix, ab: Matrix, b: Vec<f64>) -> HybZonotope {
    HybZonotope::new(gc, gb, c, ac, ab, b).expect("operation assembles consistent blocks")
}

pub fn linear_map(r: &Matrix, s: &AnySet) -> Result<AnySet> {
    if r.cols() != s.dim() {
        return Err(Error::dim(format!("map has {} columns, set has dimension {}", r.cols(), s.dim())));
    }
    Ok(match s {
        AnySet::Zono(z) => Zonotope::new(r.mul(z.g()), r.mul_vec(z.c()))?.into(),
        AnySet::ConZono(z) => ConZonotope::new(r.mul(z.g()), r.mul_vec(z.c()), z.a().clone(), z.b().to_vec())?.into(),
        AnySet::HybZono(h) => hyb(
            r.mul(h.gc()),
            r.mul(h.gb()),
            r.mul_vec(h.c()),
            h.ac().clone(),
            h.ab().clone(),
            h.b().to_vec(),
        )
        .into(),
    })
}

/// `R s + t` for a vector offset; convenience around [`linear_map`].
pub fn affine_map(r: &Matrix, s: &AnySet, offset: &[f64]) -> Result<AnySet> {
    if offset.len() != r.rows() {
        return Err(Error::dim("offset length differs from map rows"));
    }
    translate(&linear_map(r, s)?, offset)
}

pub fn translate(s: &AnySet, v: &[f64]) -> Result<AnySet> {
    if v.len() != s.dim() {
        return Err(Error::dim("translation length differs from set dimension"));
    }
    let h = s.to_hyb();
    let c = matrix::add(h.c(), v);
    let (gc, gb, _, ac, ab, b) = h.into_parts();
    AnySet::from_hyb(hyb(gc, gb, c, ac, ab, b), s.rep())
}

pub fn minkowski_sum(s: &AnySet, t: &AnySet) -> Result<AnySet> {
    same_dim(s, t)?;
    let (a, b) = (s.to_hyb(), t.to_hyb());
    let n = a.n();
    let h = hyb(
        Matrix::hcat(n, &[a.gc(), b.gc()]),
        Matrix::hcat(n, &[a.gb(), b.gb()]),
        matrix::add(a.c(), b.c()),
        Matrix::block_diag(&[a.ac(), b.ac()]),
        Matrix::block_diag(&[a.ab(), b.ab()]),
        [a.b(), b.b()].concat(),
    );
    AnySet::from_hyb(h, s.rep().max(t.rep()))
}

pub fn cartesian_product(s: &AnySet, t: &AnySet) -> Result<AnySet> {
    let (a, b) = (s.to_hyb(), t.to_hyb());
    let h = hyb(
        Matrix::block_diag(&[a.gc(), b.gc()]),
        Matrix::block_diag(&[a.gb(), b.gb()]),
        [a.c(), b.c()].concat(),
        Matrix::block_diag(&[a.ac(), b.ac()]),
        Matrix::block_diag(&[a.ab(), b.ab()]),
        [a.b(), b.b()].concat(),
    );
    AnySet::from_hyb(h, s.rep().max(t.rep()))
}

/// `{x in s | R x in t}`; `r = None` means the identity.
pub fn generalized_intersection(s: &AnySet, t: &AnySet, r: Option<&Matrix>) -> Result<AnySet> {
    let (a, b) = (s.to_hyb(), t.to_hyb());
    let eye;
    let r = match r {
        Some(r) => r,
        None => {
            eye = Matrix::identity(a.n());
            &eye
        }
    };
    if r.cols() != a.n() || r.rows() != b.n() {
        return Err(Error::dim(format!(
            "coupling map is {}x{}, operands live in R^{} and R^{}",
            r.rows(),
            r.cols(),
            a.n(),
            b.n()
        )));
    }
    let coupling_c = Matrix::hcat(b.n(), &[&r.mul(a.gc()), &b.gc().scale(-1.0)]);
    let coupling_b = Matrix::hcat(b.n(), &[&r.mul(a.gb()), &b.gb().scale(-1.0)]);
    let ac = Matrix::vcat(a.n_g() + b.n_g(), &[&Matrix::block_diag(&[a.ac(), b.ac()]), &coupling_c]);
    let ab = Matrix::vcat(a.n_b() + b.n_b(), &[&Matrix::block_diag(&[a.ab(), b.ab()]), &coupling_b]);
    let rhs = matrix::sub(b.c(), &r.mul_vec(a.c()));
    let h = hyb(
        Matrix::hcat(a.n(), &[a.gc(), &Matrix::zeros(a.n(), b.n_g())]),
        Matrix::hcat(a.n(), &[a.gb(), &Matrix::zeros(a.n(), b.n_b())]),
        a.c().to_vec(),
        ac,
        ab,
        [a.b(), b.b(), &rhs].concat(),
    );
    AnySet::from_hyb(h, s.rep().max(t.rep()).max(Rep::ConZono))
}

pub fn intersection(s: &AnySet, t: &AnySet) -> Result<AnySet> {
    generalized_intersection(s, t, None)
}

/// `{x in s | H R x <= f}`; `r = None` means the identity.
///
/// Row `i` gets a slack `(w_i/2)(1 + zeta_i)` where `w_i` is the range of
/// `f_i - (H R x)_i` over the factor box, so every slack factor stays in
/// [-1, 1]. Inactive rows are kept, making the growth exactly one generator
/// and one constraint per row.
pub fn halfspace_intersection(s: &AnySet, h: &Matrix, f: &[f64], r: Option<&Matrix>) -> Result<AnySet> {
    let z = s.to_hyb();
    let hr = match r {
        Some(r) => {
            if r.cols() != z.n() || h.cols() != r.rows() {
                return Err(Error::dim("halfspace map shapes do not match the set"));
            }
            h.mul(r)
        }
        None => {
            if h.cols() != z.n() {
                return Err(Error::dim("halfspace normal length differs from set dimension"));
            }
            h.clone()
        }
    };
    if h.rows() != f.len() {
        return Err(Error::dim("halfspace rows and offsets differ in length"));
    }
    let nh = f.len();
    let dgc = hr.mul(z.gc());
    let dgb = hr.mul(z.gb());
    let dc = hr.mul_vec(z.c());
    let mut widths = Vec::with_capacity(nh);
    let mut rhs = Vec::with_capacity(nh);
    for i in 0..nh {
        let radius: f64 = dgc.row(i).iter().chain(dgb.row(i)).map(|v| v.abs()).sum();
        let w = (f[i] - (dc[i] - radius)).max(0.0);
        widths.push(0.5 * w);
        rhs.push(f[i] - dc[i] - 0.5 * w);
    }
    let (n, ng) = (z.n(), z.n_g());
    let ac = Matrix::vcat(
        ng + nh,
        &[
            &Matrix::hcat(z.n_c(), &[z.ac(), &Matrix::zeros(z.n_c(), nh)]),
            &Matrix::hcat(nh, &[&dgc, &Matrix::from_diag(&widths)]),
        ],
    );
    let ab = Matrix::vcat(z.n_b(), &[z.ab(), &dgb]);
    let out = hyb(
        Matrix::hcat(n, &[z.gc(), &Matrix::zeros(n, nh)]),
        z.gb().clone(),
        z.c().to_vec(),
        ac,
        ab,
        [z.b(), &rhs].concat(),
    );
    AnySet::from_hyb(out, s.rep().max(Rep::ConZono))
}

/// Two-operand union with a single selector binary.
pub fn union(s: &AnySet, t: &AnySet) -> Result<HybZonotope> {
    same_dim(s, t)?;
    let selector = Matrix::from_rows(&[[-1.0], [1.0]]).unwrap();
    Ok(disjunction(&[s.to_hyb(), t.to_hyb()], &selector, true, None))
}

/// Union of any number of sets with a one-hot binary selector.
pub fn union_all(sets: &[AnySet]) -> Result<AnySet> {
    match sets {
        [] => Err(Error::arg("union of an empty list")),
        [s] => Ok(s.clone()),
        [s, t] => union(s, t).map(AnySet::from),
        _ => {
            let n = sets[0].dim();
            if sets.iter().any(|s| s.dim() != n) {
                return Err(Error::dim("union operands differ in dimension"));
            }
            let hs: Vec<HybZonotope> = sets.iter().map(|s| s.to_hyb()).collect();
            Ok(union_one_hot(&hs).into())
        }
    }
}

pub(crate) fn union_one_hot(pieces: &[HybZonotope]) -> HybZonotope {
    let k = pieces.len();
    let one_hot = (Matrix::from_fn(1, k, |_, _| 1.0), vec![2.0 - k as f64]);
    disjunction(pieces, &Matrix::identity(k), true, Some(one_hot))
}

pub fn convex_hull(s: &AnySet, t: &AnySet) -> Result<ConZonotope> {
    same_dim(s, t)?;
    if s.rep() == Rep::HybZono || t.rep() == Rep::HybZono {
        return Err(Error::Unsupported("convex hull is defined for zono and conZono operands".into()));
    }
    let selector = Matrix::from_rows(&[[-1.0], [1.0]]).unwrap();
    let h = disjunction(&[s.to_hyb(), t.to_hyb()], &selector, false, None);
    let (gc, _, c, ac, _, b) = h.into_parts();
    ConZonotope::new(gc, c, ac, b)
}

/// Disjunctive assembly shared by union and convex hull.
///
/// Piece `j` is active to the degree `sigma_j = (1 + t_j z) / 2`, where `z`
/// are the selector factors (binary for unions, continuous for hulls). Each
/// factor `f` of piece `j` enters as `f + 1 - sigma_j` and is tied to a fresh
/// slack `r` by `f + r - t_j z = -1`, so an inactive piece contributes zero
/// and an active piece keeps its own factor box. Piece constraints become
/// `A_j f - (t_j z)(a_j + b_j)/2 = (b_j - a_j)/2` with `a_j = A_j 1`.
///
/// Continuous columns: piece factors, then slacks, then continuous selectors.
/// Binary columns: piece binaries, then binary selectors.
fn disjunction(pieces: &[HybZonotope], t: &Matrix, binary_selector: bool, extra: Option<(Matrix, Vec<f64>)>) -> HybZonotope {
    let n = pieces[0].n();
    let nz = t.cols();
    let ngs: usize = pieces.iter().map(|p| p.n_g()).sum();
    let nbs: usize = pieces.iter().map(|p| p.n_b()).sum();
    let ncs: usize = pieces.iter().map(|p| p.n_c()).sum();
    let nfs = ngs + nbs;
    let n_extra = extra.as_ref().map_or(0, |(m, _)| m.rows());
    let (n_g, n_b) = if binary_selector {
        (ngs + nfs, nbs + nz)
    } else {
        (ngs + nfs + nz, nbs)
    };
    let n_c = ncs + nfs + n_extra;

    let mut gc = Matrix::zeros(n, n_g);
    let mut gb = Matrix::zeros(n, n_b);
    let mut ac = Matrix::zeros(n_c, n_g);
    let mut ab = Matrix::zeros(n_c, n_b);
    let mut c = vec![0.0; n];
    let mut b = vec![0.0; n_c];
    let z_col = |k: usize| if binary_selector { nbs + k } else { ngs + nfs + k };
    let z_gen = |gc: &mut Matrix, gb: &mut Matrix, i: usize, k: usize, v: f64| {
        if binary_selector {
            gb[(i, z_col(k))] += v;
        } else {
            gc[(i, z_col(k))] += v;
        }
    };
    let z_con = |ac: &mut Matrix, ab: &mut Matrix, i: usize, k: usize, v: f64| {
        if binary_selector {
            ab[(i, z_col(k))] += v;
        } else {
            ac[(i, z_col(k))] += v;
        }
    };

    let (mut oc, mut ob, mut or, mut rc, mut rs) = (0, 0, ngs, 0, ncs);
    for (j, p) in pieces.iter().enumerate() {
        let (ng, nb, nc) = (p.n_g(), p.n_b(), p.n_c());
        gc.set_block(0, oc, p.gc());
        gb.set_block(0, ob, p.gb());
        ac.set_block(rc, oc, p.ac());
        ab.set_block(rc, ob, p.ab());
        let s = p.all_generators().row_sums();
        let a = p.all_constraints().row_sums();
        for i in 0..n {
            c[i] += 0.5 * (p.c()[i] + s[i]);
            for k in 0..nz {
                z_gen(&mut gc, &mut gb, i, k, 0.5 * t[(j, k)] * (p.c()[i] - s[i]));
            }
        }
        for i in 0..nc {
            for k in 0..nz {
                z_con(&mut ac, &mut ab, rc + i, k, -0.5 * t[(j, k)] * (a[i] + p.b()[i]));
            }
            b[rc + i] = 0.5 * (p.b()[i] - a[i]);
        }
        for q in 0..ng + nb {
            let row = rs + q;
            if q < ng {
                ac[(row, oc + q)] = 1.0;
            } else {
                ab[(row, ob + q - ng)] = 1.0;
            }
            ac[(row, or + q)] = 1.0;
            for k in 0..nz {
                z_con(&mut ac, &mut ab, row, k, -t[(j, k)]);
            }
            b[row] = -1.0;
        }
        oc += ng;
        ob += nb;
        or += ng + nb;
        rc += nc;
        rs += ng + nb;
    }
    if let Some((m, rhs)) = extra {
        for i in 0..m.rows() {
            for k in 0..nz {
                z_con(&mut ac, &mut ab, rs + i, k, m[(i, k)]);
            }
            b[rs + i] = rhs[i];
        }
    }
    hyb(gc, gb, c, ac, ab, b)
}

/// `{x | x + w in s for all w in W}`, one pair of shifted intersections per
/// nonzero generator of `W`. Exact for convex minuends only, so hybrid
/// minuends are rejected.
pub fn pontryagin_difference(s: &AnySet, w: &AnySet) -> Result<AnySet> {
    same_dim(s, w)?;
    let AnySet::Zono(w) = w else {
        return Err(Error::Unsupported("the subtrahend of a Pontryagin difference must be a zonotope".into()));
    };
    if s.rep() == Rep::HybZono {
        return Err(Error::Unsupported("Pontryagin difference needs a zono or conZono minuend".into()));
    }
    let neg_c: Vec<f64> = w.c().iter().map(|v| -v).collect();
    let mut out = translate(s, &neg_c)?;
    for k in 0..w.n_g() {
        let g = w.g().col(k);
        if g.iter().all(|&v| v == 0.0) {
            continue;
        }
        let neg_g: Vec<f64> = g.iter().map(|v| -v).collect();
        out = intersection(&translate(&out, &neg_g)?, &translate(&out, &g)?)?;
    }
    Ok(out)
}

pub fn projection(s: &AnySet, dims: &[usize]) -> Result<AnySet> {
    if let Some(&bad) = dims.iter().find(|&&d| d >= s.dim()) {
        return Err(Error::arg(format!("projection index {bad} out of range for dimension {}", s.dim())));
    }
    Ok(match s {
        AnySet::Zono(z) => Zonotope::new(z.g().select_rows(dims), dims.iter().map(|&d| z.c()[d]).collect())?.into(),
        AnySet::ConZono(z) => ConZonotope::new(
            z.g().select_rows(dims),
            dims.iter().map(|&d| z.c()[d]).collect(),
            z.a().clone(),
            z.b().to_vec(),
        )?
        .into(),
        AnySet::HybZono(h) => hyb(
            h.gc().select_rows(dims),
            h.gb().select_rows(dims),
            dims.iter().map(|&d| h.c()[d]).collect(),
            h.ac().clone(),
            h.ab().clone(),
            h.b().to_vec(),
        )
        .into(),
    })
}
