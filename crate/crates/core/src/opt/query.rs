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

//! Set-level queries. Every query works on the factor-space program
//! `[Ac Ab] xi = b`, `xi in [-1, 1]`, with `xi_b` binary.

use alloc::vec;
use alloc::vec::Vec;

use super::{LinearProgram, MixedProgram, Outcome, Solver};
use crate::error::{Error, Result};
use crate::matrix::{dot, Matrix};
use crate::sets::{AnySet, HybZonotope, Zonotope};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64, tol: f64) -> bool {
        x >= self.lo - tol && x <= self.hi + tol
    }
}

/// Binary vectors of the nonempty leaves, in lexicographic order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LeafSet {
    pub leaves: Vec<Vec<i8>>,
}

impl LeafSet {
    pub fn len(&self) -> usize {
        self.leaves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leaves.is_empty()
    }

    pub fn iter(&self) -> core::slice::Iter<'_, Vec<i8>> {
        self.leaves.iter()
    }

    pub fn as_f64(leaf: &[i8]) -> Vec<f64> {
        leaf.iter().map(|&v| v as f64).collect()
    }
}

/// Factor-space program of `h`, optionally with extra rows over the factors.
fn factor_program(h: &HybZonotope, objective: Vec<f64>, extra: Option<(Matrix, Vec<f64>)>) -> MixedProgram {
    let (ng, nb) = (h.n_g(), h.n_b());
    let nv = ng + nb;
    let mut a = h.all_constraints();
    let mut b = h.b().to_vec();
    if let Some((ea, eb)) = extra {
        a = Matrix::vcat(nv, &[&a, &ea]);
        b.extend(eb);
    }
    let lp = LinearProgram {
        objective,
        a_eq: a,
        b_eq: b,
        lower: vec![-1.0; nv],
        upper: vec![1.0; nv],
    };
    MixedProgram {
        lp,
        binaries: (ng..nv).collect(),
    }
}

fn as_hyb(s: &AnySet) -> Option<HybZonotope> {
    match s {
        AnySet::Zono(_) => None,
        other => Some(other.to_hyb()),
    }
}

pub fn is_empty(s: &AnySet, solver: &Solver) -> Result<bool> {
    let Some(h) = as_hyb(s) else {
        return Ok(false);
    };
    if h.n_c() == 0 {
        return Ok(false);
    }
    let nv = h.n_g() + h.n_b();
    Ok(!solver.milp(&factor_program(&h, vec![0.0; nv], None))?.is_optimal())
}

pub fn contains_point(s: &AnySet, x: &[f64], solver: &Solver) -> Result<bool> {
    if x.len() != s.dim() {
        return Err(Error::dim("point dimension differs from set dimension"));
    }
    let h = s.to_hyb();
    let nv = h.n_g() + h.n_b();
    let rhs: Vec<f64> = x.iter().zip(h.c()).map(|(xi, ci)| xi - ci).collect();
    let p = factor_program(&h, vec![0.0; nv], Some((h.all_generators(), rhs)));
    Ok(solver.milp(&p)?.is_optimal())
}

/// `max d^T x` over `s`; [`Error::Empty`] for an empty set.
pub fn support(s: &AnySet, d: &[f64], solver: &Solver) -> Result<f64> {
    if let AnySet::Zono(z) = s {
        check_dir(z.n(), d)?;
        return Ok(zonotope_support(z, d));
    }
    support_point(s, d, solver).map(|(v, _)| v)
}

/// Maximizer of `d^T x` over `s` together with the optimal value.
pub fn support_point(s: &AnySet, d: &[f64], solver: &Solver) -> Result<(f64, Vec<f64>)> {
    check_dir(s.dim(), d)?;
    if let AnySet::Zono(z) = s {
        let xi: Vec<f64> = (0..z.n_g())
            .map(|k| {
                let w: f64 = (0..z.n()).map(|i| d[i] * z.g()[(i, k)]).sum();
                if w > 0.0 {
                    1.0
                } else if w < 0.0 {
                    -1.0
                } else {
                    0.0
                }
            })
            .collect();
        return Ok((zonotope_support(z, d), z.point(&xi)));
    }
    let h = s.to_hyb();
    let g = h.all_generators();
    let objective: Vec<f64> = g.tr_mul_vec(d).into_iter().map(|v| -v).collect();
    match solver.milp(&factor_program(&h, objective, None))? {
        Outcome::Optimal { x: xi, .. } => {
            let x: Vec<f64> = g.mul_vec(&xi).iter().zip(h.c()).map(|(a, b)| a + b).collect();
            Ok((dot(d, &x), x))
        }
        Outcome::Infeasible => Err(Error::Empty),
        Outcome::Unbounded => Err(Error::Unbounded),
    }
}

fn check_dir(n: usize, d: &[f64]) -> Result<()> {
    if d.len() != n {
        return Err(Error::dim("direction dimension differs from set dimension"));
    }
    Ok(())
}

fn zonotope_support(z: &Zonotope, d: &[f64]) -> f64 {
    let mut v = dot(d, z.c());
    for k in 0..z.n_g() {
        v += (0..z.n()).map(|i| d[i] * z.g()[(i, k)]).sum::<f64>().abs();
    }
    v
}

pub fn bounding_box(s: &AnySet, solver: &Solver) -> Result<Vec<Interval>> {
    let n = s.dim();
    let mut out = Vec::with_capacity(n);
    let mut e = vec![0.0; n];
    for i in 0..n {
        e[i] = 1.0;
        let hi = support(s, &e, solver)?;
        e[i] = -1.0;
        let lo = -support(s, &e, solver)?;
        e[i] = 0.0;
        out.push(Interval { lo, hi });
    }
    Ok(out)
}

pub fn get_leaves(h: &HybZonotope, solver: &Solver) -> Result<LeafSet> {
    let nv = h.n_g() + h.n_b();
    let p = factor_program(h, vec![0.0; nv], None);
    let leaves = if h.n_b() == 0 {
        if solver.lp(&p.lp)?.is_optimal() {
            vec![Vec::new()]
        } else {
            Vec::new()
        }
    } else {
        super::enumerate_leaves(&p, solver)?
    };
    Ok(LeafSet { leaves })
}

/// Draws `count` points of `s`. Each point is a random convex combination of
/// support points of one randomly chosen nonempty leaf, so every point lies in
/// the set up to solver tolerance. `uniform` must return values in `[0, 1)`.
pub fn sample_points(s: &AnySet, count: usize, uniform: &mut dyn FnMut() -> f64, solver: &Solver) -> Result<Vec<Vec<f64>>> {
    let n = s.dim();
    if let AnySet::Zono(z) = s {
        return Ok((0..count)
            .map(|_| {
                let xi: Vec<f64> = (0..z.n_g()).map(|_| 2.0 * uniform() - 1.0).collect();
                z.point(&xi)
            })
            .collect());
    }
    let h = s.to_hyb();
    let leaves = get_leaves(&h, solver)?;
    if leaves.is_empty() {
        return Err(Error::Empty);
    }
    let mut clouds = Vec::with_capacity(leaves.len());
    for leaf in leaves.iter() {
        let piece = AnySet::ConZono(h.leaf(&LeafSet::as_f64(leaf))?);
        let mut pts = Vec::with_capacity(n + 2);
        for _ in 0..n + 2 {
            let d: Vec<f64> = (0..n).map(|_| 2.0 * uniform() - 1.0).collect();
            pts.push(support_point(&piece, &d, solver)?.1);
        }
        clouds.push(pts);
    }
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let k = ((uniform() * clouds.len() as f64) as usize).min(clouds.len() - 1);
        let pts = &clouds[k];
        let w: Vec<f64> = pts.iter().map(|_| -libm::log(1.0 - uniform())).collect();
        let total: f64 = w.iter().sum::<f64>().max(f64::MIN_POSITIVE);
        let mut x = vec![0.0; n];
        for (p, wi) in pts.iter().zip(&w) {
            for i in 0..n {
                x[i] += wi / total * p[i];
            }
        }
        out.push(x);
    }
    Ok(out)
}
