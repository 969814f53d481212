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

//! Reachability: direct linear steps, state-update sets, MLD and PWA steps,
//! closed-loop composition and reach tubes.

use alloc::boxed::Box;
use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::ops::{self, OpComplexityReport};
use crate::opt::{contains_point, get_leaves, Solver};
use crate::sets::{AnySet, Zonotope};

/// `x+ = A x + B u`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearSystem {
    pub a: Matrix,
    pub b: Matrix,
}

impl LinearSystem {
    pub fn new(a: Matrix, b: Matrix) -> Result<Self> {
        let n = a.rows();
        if a.cols() != n {
            return Err(Error::dim("state matrix must be square"));
        }
        let b = if b.rows() == 0 && n > 0 { Matrix::zeros(n, b.cols()) } else { b };
        if b.rows() != n {
            return Err(Error::dim("input matrix rows differ from state dimension"));
        }
        Ok(LinearSystem { a, b })
    }

    pub fn n(&self) -> usize {
        self.a.rows()
    }

    pub fn m(&self) -> usize {
        self.b.cols()
    }
}

/// Mixed logical dynamical model
/// `x+ = A x + B_u u + B_w w + B_aff`, `E_x x + E_u u + E_w w <= E_aff`.
#[derive(Clone, Debug, PartialEq)]
pub struct MldSystem {
    pub a: Matrix,
    pub b_u: Matrix,
    pub b_w: Matrix,
    pub b_aff: Vec<f64>,
    pub e_x: Matrix,
    pub e_u: Matrix,
    pub e_w: Matrix,
    pub e_aff: Vec<f64>,
}

impl MldSystem {
    pub fn validate(&self) -> Result<()> {
        let n = self.a.rows();
        let ne = self.e_aff.len();
        let ok = self.a.cols() == n
            && self.b_u.rows() == n
            && self.b_w.rows() == n
            && self.b_aff.len() == n
            && self.e_x.shape() == (ne, n)
            && self.e_u.shape() == (ne, self.b_u.cols())
            && self.e_w.shape() == (ne, self.b_w.cols());
        if ok {
            Ok(())
        } else {
            Err(Error::dim("MLD blocks have inconsistent shapes"))
        }
    }

    pub fn n(&self) -> usize {
        self.a.rows()
    }
}

/// A set over `(x, u, x+)` (or `(x, x+)` when `m_input = 0`).
#[derive(Clone, Debug, PartialEq)]
pub struct StateUpdateSet {
    pub set: AnySet,
    pub n_state: usize,
    pub m_input: usize,
}

impl StateUpdateSet {
    pub fn new(set: AnySet, n_state: usize, m_input: usize) -> Result<Self> {
        if set.dim() != 2 * n_state + m_input {
            return Err(Error::dim(format!(
                "update set has dimension {}, partition needs {}",
                set.dim(),
                2 * n_state + m_input
            )));
        }
        Ok(StateUpdateSet { set, n_state, m_input })
    }

    /// Projection onto `(x, u)`, the domain `D(Psi)`.
    pub fn domain(&self) -> Result<AnySet> {
        let dims: Vec<usize> = (0..self.n_state + self.m_input).collect();
        ops::projection(&self.set, &dims)
    }
}

/// `A R + B U`.
pub fn step_linear(sys: &LinearSystem, r: &AnySet, u: &AnySet) -> Result<AnySet> {
    ops::minkowski_sum(&ops::linear_map(&sys.a, r)?, &ops::linear_map(&sys.b, u)?)
}

/// `[I; A B] D` over `(x, u, x+)`.
pub fn build_linear_update_set(sys: &LinearSystem, d: &AnySet) -> Result<StateUpdateSet> {
    let zero = Vec::from_iter(core::iter::repeat(0.0).take(sys.n()));
    build_affine_update_set(sys, &zero, d)
}

/// `[I; A B] D + [0; f]`, for affine pieces of PWA models.
pub fn build_affine_update_set(sys: &LinearSystem, offset: &[f64], d: &AnySet) -> Result<StateUpdateSet> {
    let (n, m) = (sys.n(), sys.m());
    if d.dim() != n + m {
        return Err(Error::dim(format!("domain has dimension {}, expected {}", d.dim(), n + m)));
    }
    if offset.len() != n {
        return Err(Error::dim("affine offset length differs from state dimension"));
    }
    let map = Matrix::vcat(n + m, &[&Matrix::identity(n + m), &Matrix::hcat(n, &[&sys.a, &sys.b])]);
    let shift: Vec<f64> = core::iter::repeat(0.0).take(n + m).chain(offset.iter().copied()).collect();
    StateUpdateSet::new(ops::affine_map(&map, d, &shift)?, n, m)
}

/// `[0 I] (Psi  cap_[I 0]  (R x U))`; `u` is ignored for autonomous sets.
pub fn successor(psi: &StateUpdateSet, r: &AnySet, u: Option<&AnySet>) -> Result<AnySet> {
    let (n, m) = (psi.n_state, psi.m_input);
    if r.dim() != n {
        return Err(Error::dim("reachable set dimension differs from the update set state"));
    }
    let d = if m > 0 {
        let u = u.ok_or_else(|| Error::arg("update set has inputs but no input set was given"))?;
        if u.dim() != m {
            return Err(Error::dim("input set dimension differs from the update set input"));
        }
        ops::cartesian_product(r, u)?
    } else {
        r.clone()
    };
    let sel = Matrix::hcat(n + m, &[&Matrix::identity(n + m), &Matrix::zeros(n + m, n)]);
    let meet = ops::generalized_intersection(&psi.set, &d, Some(&sel))?;
    let last: Vec<usize> = (n + m..2 * n + m).collect();
    ops::projection(&meet, &last)
}

/// One MLD step: `V = [B_u; E_u] U + [B_w; E_w] W + [B_aff; 0]`,
/// `Y = [A; E_x] R + V`, then the inequality rows cut `Y` and the state
/// part is kept.
pub fn step_mld(sys: &MldSystem, r: &AnySet, u: Option<&AnySet>, w: Option<&AnySet>) -> Result<AnySet> {
    sys.validate()?;
    let n = sys.n();
    let ne = sys.e_aff.len();
    let mut y = ops::linear_map(&Matrix::vcat(n, &[&sys.a, &sys.e_x]), r)?;
    for (set, b, e, what) in [(u, &sys.b_u, &sys.e_u, "input"), (w, &sys.b_w, &sys.e_w, "auxiliary")] {
        match set {
            Some(s) => y = ops::minkowski_sum(&y, &ops::linear_map(&Matrix::vcat(b.cols(), &[b, e]), s)?)?,
            None if b.cols() > 0 => return Err(Error::arg(format!("MLD model has {what} columns but no {what} set"))),
            None => {}
        }
    }
    let shift: Vec<f64> = sys.b_aff.iter().copied().chain(core::iter::repeat(0.0).take(ne)).collect();
    let y = ops::translate(&y, &shift)?;
    let pick_e = Matrix::hcat(ne, &[&Matrix::zeros(ne, n), &Matrix::identity(ne)]);
    let cut = ops::halfspace_intersection(&y, &Matrix::identity(ne), &sys.e_aff, Some(&pick_e))?;
    let state: Vec<usize> = (0..n).collect();
    ops::projection(&cut, &state)
}

/// Union of autonomous update sets, then one successor step.
pub fn step_pwa(psis: &[StateUpdateSet], r: &AnySet) -> Result<AnySet> {
    let first = psis.first().ok_or_else(|| Error::arg("no PWA regions"))?;
    if psis.iter().any(|p| p.n_state != first.n_state || p.m_input != 0) {
        return Err(Error::arg("PWA update sets must be autonomous and share the state dimension"));
    }
    let sets: Vec<AnySet> = psis.iter().map(|p| p.set.clone()).collect();
    let psi = StateUpdateSet::new(ops::union_all(&sets)?, first.n_state, 0)?;
    successor(&psi, r, None)
}

/// `Phi = [[I 0 0]; [0 0 I]] (Psi cap_[I 0] Theta)`, with `Theta` over `(x, u)`.
pub fn close_loop(psi: &StateUpdateSet, theta: &AnySet) -> Result<StateUpdateSet> {
    let (n, m) = (psi.n_state, psi.m_input);
    if theta.dim() != n + m {
        return Err(Error::dim("state-input map dimension differs from the update set domain"));
    }
    let sel = Matrix::hcat(n + m, &[&Matrix::identity(n + m), &Matrix::zeros(n + m, n)]);
    let meet = ops::generalized_intersection(&psi.set, theta, Some(&sel))?;
    let dims: Vec<usize> = (0..n).chain(n + m..2 * n + m).collect();
    StateUpdateSet::new(ops::projection(&meet, &dims)?, n, 0)
}

/// Points (over `(x, u)`) that fall outside `D(Psi)`, by index. Coverage of
/// the domain is an assumption of [`successor`]; this is the sampled audit.
pub fn audit_domain(psi: &StateUpdateSet, points: &[Vec<f64>], solver: &Solver) -> Result<Vec<usize>> {
    let d = psi.domain()?;
    let mut outside = Vec::new();
    for (i, p) in points.iter().enumerate() {
        if !contains_point(&d, p, solver)? {
            outside.push(i);
        }
    }
    Ok(outside)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReachTube {
    pub sets: Vec<AnySet>,
    pub reports: Vec<OpComplexityReport>,
    /// `|T|` per set when requested.
    pub leaf_counts: Vec<Option<usize>>,
}

/// Applies `step` `k` times from `r0`. With `leaves`, each set's nonempty
/// leaf count is recorded as well.
pub fn reach_tube(
    mut step: impl FnMut(&AnySet) -> Result<AnySet>,
    r0: &AnySet,
    k: usize,
    leaves: Option<&Solver>,
) -> Result<ReachTube> {
    let count = |s: &AnySet, index: usize| -> Result<Option<usize>> {
        match leaves {
            None => Ok(None),
            Some(solver) => get_leaves(&s.to_hyb(), solver)
                .map(|l| Some(l.len()))
                .map_err(|e| Error::Step {
                    index,
                    source: Box::new(e),
                }),
        }
    };
    let mut tube = ReachTube {
        sets: Vec::with_capacity(k + 1),
        reports: Vec::with_capacity(k + 1),
        leaf_counts: Vec::with_capacity(k + 1),
    };
    tube.reports.push(OpComplexityReport::of("initial", r0));
    tube.leaf_counts.push(count(r0, 0)?);
    tube.sets.push(r0.clone());
    for index in 1..=k {
        let next = step(&tube.sets[index - 1]).map_err(|e| Error::Step {
            index,
            source: Box::new(e),
        })?;
        if next.dim() != r0.dim() {
            return Err(Error::Step {
                index,
                source: Box::new(Error::dim("step changed the state dimension")),
            });
        }
        tube.reports.push(OpComplexityReport::of("step", &next));
        tube.leaf_counts.push(count(&next, index)?);
        tube.sets.push(next);
    }
    Ok(tube)
}

/// The interval `[lo, hi]` as a one-dimensional zonotope.
pub fn interval(lo: f64, hi: f64) -> Result<AnySet> {
    Ok(Zonotope::from_box(&[lo], &[hi])?.into())
}
