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

//! Branch and bound over {-1, 1} binaries, with bound propagation on the
//! equality rows at every node.
//!
//! Propagation does most of the work on factor-space programs: once the
//! continuous factors are pinned by a membership query, each row typically
//! forces its binaries and the LP relaxation only confirms feasibility.

use alloc::vec;
use alloc::vec::Vec;

use super::{LinearProgram, Outcome, Solver, SolverOptions};
use crate::error::{Error, Result};
use crate::matrix::Matrix;

#[derive(Clone, Debug, PartialEq)]
pub struct MixedProgram {
    pub lp: LinearProgram,
    /// Sorted, unique indices of variables restricted to {-1, 1}.
    pub binaries: Vec<usize>,
}

impl MixedProgram {
    /// Binary variables have their bounds intersected with [-1, 1].
    pub fn new(mut lp: LinearProgram, mut binaries: Vec<usize>) -> Result<Self> {
        binaries.sort_unstable();
        binaries.dedup();
        if binaries.last().is_some_and(|&k| k >= lp.n_vars()) {
            return Err(Error::arg("binary index outside variable range"));
        }
        for &k in &binaries {
            lp.lower[k] = lp.lower[k].max(-1.0);
            lp.upper[k] = lp.upper[k].min(1.0);
        }
        Ok(MixedProgram { lp, binaries })
    }
}

/// Solves `p` with the builtin engine regardless of `opts.backend`.
pub fn solve_milp(p: &MixedProgram, opts: &SolverOptions) -> Result<Outcome> {
    let mut opts = opts.clone();
    opts.backend = super::Backend::Builtin;
    Solver::new(opts).milp(p)
}

const INTEGRAL_TOL: f64 = 1e-6;

fn binary_mask(p: &MixedProgram) -> Vec<bool> {
    let mut mask = vec![false; p.lp.n_vars()];
    for &k in &p.binaries {
        mask[k] = true;
    }
    mask
}

fn node_cap(opts: &SolverOptions, nodes: usize) -> Result<()> {
    if nodes > opts.max_nodes {
        return Err(Error::Resource {
            what: "branch-and-bound nodes",
            limit: opts.max_nodes,
            partial: nodes - 1,
        });
    }
    Ok(())
}

pub(crate) fn branch_and_bound(p: &MixedProgram, solver: &Solver) -> Result<Outcome> {
    let opts = solver.options();
    let is_bin = binary_mask(p);
    let feasibility_only = p.lp.objective.iter().all(|&c| c == 0.0);
    let mut stack = vec![(p.lp.lower.clone(), p.lp.upper.clone())];
    let mut incumbent: Option<(f64, Vec<f64>)> = None;
    let mut nodes = 0;

    while let Some((mut lo, mut hi)) = stack.pop() {
        nodes += 1;
        node_cap(opts, nodes)?;
        solver.count_node();
        if !propagate_rows(&p.lp.a_eq, &p.lp.b_eq, &mut lo, &mut hi, &is_bin, opts.feasibility_tol) {
            continue;
        }
        let (value, x) = match solver.lp_bounded(&p.lp, &lo, &hi)? {
            Outcome::Optimal { value, x } => (value, x),
            Outcome::Infeasible => continue,
            Outcome::Unbounded => return Ok(Outcome::Unbounded),
        };
        if let Some((best, _)) = &incumbent {
            if value >= best - opts.optimality_tol * (1.0 + best.abs()) {
                continue;
            }
        }
        let fractional = p
            .binaries
            .iter()
            .copied()
            .find(|&k| lo[k] < hi[k] && (x[k].abs() - 1.0).abs() > INTEGRAL_TOL);
        let branch_on = match fractional {
            Some(k) => Some(k),
            None => {
                // Snap to exact binaries and re-solve the continuous part.
                let (mut slo, mut shi) = (lo.clone(), hi.clone());
                for &k in &p.binaries {
                    let v = if x[k] >= 0.0 { 1.0 } else { -1.0 };
                    slo[k] = v;
                    shi[k] = v;
                }
                match solver.lp_bounded(&p.lp, &slo, &shi)? {
                    Outcome::Optimal { value, x } => {
                        if incumbent.as_ref().map_or(true, |(best, _)| value < *best) {
                            incumbent = Some((value, x));
                        }
                        if feasibility_only {
                            break;
                        }
                        None
                    }
                    _ => p.binaries.iter().copied().find(|&k| lo[k] < hi[k]),
                }
            }
        };
        if let Some(k) = branch_on {
            let (mut up_lo, up_hi) = (lo.clone(), hi.clone());
            up_lo[k] = 1.0;
            stack.push((up_lo, up_hi));
            hi[k] = -1.0;
            stack.push((lo, hi));
        }
    }
    Ok(match incumbent {
        Some((value, x)) => Outcome::Optimal { value, x },
        None => Outcome::Infeasible,
    })
}

/// Enumerates every binary assignment of `p` whose continuous completion is
/// feasible, in lexicographic order (-1 before 1).
pub(crate) fn enumerate_leaves(p: &MixedProgram, solver: &Solver) -> Result<Vec<Vec<i8>>> {
    let opts = solver.options();
    let is_bin = binary_mask(p);
    let mut stack = vec![(p.lp.lower.clone(), p.lp.upper.clone(), 0usize)];
    let mut leaves = Vec::new();
    let mut nodes = 0;

    while let Some((mut lo, mut hi, next)) = stack.pop() {
        nodes += 1;
        node_cap(opts, nodes)?;
        solver.count_node();
        if !propagate_rows(&p.lp.a_eq, &p.lp.b_eq, &mut lo, &mut hi, &is_bin, opts.feasibility_tol) {
            continue;
        }
        if !solver.lp_bounded(&p.lp, &lo, &hi)?.is_optimal() {
            continue;
        }
        match p.binaries[next..].iter().position(|&k| lo[k] < hi[k]) {
            None => {
                if leaves.len() == opts.max_leaves {
                    return Err(Error::Resource {
                        what: "leaf pool",
                        limit: opts.max_leaves,
                        partial: leaves.len(),
                    });
                }
                leaves.push(p.binaries.iter().map(|&k| if lo[k] > 0.0 { 1 } else { -1 }).collect());
            }
            Some(offset) => {
                let pos = next + offset;
                let k = p.binaries[pos];
                let (mut up_lo, up_hi) = (lo.clone(), hi.clone());
                up_lo[k] = 1.0;
                stack.push((up_lo, up_hi, pos + 1));
                hi[k] = -1.0;
                stack.push((lo, hi, pos + 1));
            }
        }
    }
    Ok(leaves)
}

const MAX_PASSES: usize = 16;

/// Tightens `lo`/`hi` using each equality row relaxed to `|a x - b| <= tol`.
/// Binaries are rounded to {-1, 1}. Returns false when a row or bound pair
/// proves the node infeasible.
pub(crate) fn propagate_rows(a: &Matrix, b: &[f64], lo: &mut [f64], hi: &mut [f64], is_bin: &[bool], tol: f64) -> bool {
    let (m, n) = a.shape();
    for _ in 0..MAX_PASSES {
        let mut changed = false;
        for i in 0..m {
            let row = a.row(i);
            let (mut min_f, mut max_f) = (0.0, 0.0);
            let (mut min_inf, mut max_inf) = (0usize, 0usize);
            let (mut min_at, mut max_at) = (usize::MAX, usize::MAX);
            let mut scale: f64 = b[i].abs();
            for j in 0..n {
                let aj = row[j];
                if aj == 0.0 {
                    continue;
                }
                let (l, u) = if aj > 0.0 { (aj * lo[j], aj * hi[j]) } else { (aj * hi[j], aj * lo[j]) };
                if l == f64::NEG_INFINITY {
                    min_inf += 1;
                    min_at = j;
                } else {
                    min_f += l;
                    scale = scale.max(l.abs());
                }
                if u == f64::INFINITY {
                    max_inf += 1;
                    max_at = j;
                } else {
                    max_f += u;
                    scale = scale.max(u.abs());
                }
            }
            let slack = tol + 1e-12 * scale;
            if min_inf == 0 && min_f > b[i] + slack {
                return false;
            }
            if max_inf == 0 && max_f < b[i] - slack {
                return false;
            }
            if min_inf > 1 && max_inf > 1 {
                continue;
            }
            for j in 0..n {
                let aj = row[j];
                if aj == 0.0 || lo[j] == hi[j] {
                    continue;
                }
                let (l, u) = if aj > 0.0 { (aj * lo[j], aj * hi[j]) } else { (aj * hi[j], aj * lo[j]) };
                let rest_min = match min_inf {
                    0 => Some(min_f - l),
                    1 if min_at == j => Some(min_f),
                    _ => None,
                };
                let rest_max = match max_inf {
                    0 => Some(max_f - u),
                    1 if max_at == j => Some(max_f),
                    _ => None,
                };
                // a_j x_j lies in [b - slack - rest_max, b + slack - rest_min].
                let ax_lo = rest_max.map_or(f64::NEG_INFINITY, |r| b[i] - slack - r);
                let ax_hi = rest_min.map_or(f64::INFINITY, |r| b[i] + slack - r);
                let (new_lo, new_hi) = if aj > 0.0 { (ax_lo / aj, ax_hi / aj) } else { (ax_hi / aj, ax_lo / aj) };
                match tighten(j, new_lo, new_hi, lo, hi, is_bin[j]) {
                    Tighten::Infeasible => return false,
                    Tighten::Changed => changed = true,
                    Tighten::Unchanged => {}
                }
            }
        }
        if !changed {
            break;
        }
    }
    true
}

enum Tighten {
    Unchanged,
    Changed,
    Infeasible,
}

fn tighten(j: usize, new_lo: f64, new_hi: f64, lo: &mut [f64], hi: &mut [f64], binary: bool) -> Tighten {
    let mut changed = false;
    if binary {
        if new_lo > -1.0 + 1e-9 && lo[j] < 1.0 {
            lo[j] = 1.0;
            changed = true;
        }
        if new_hi < 1.0 - 1e-9 && hi[j] > -1.0 {
            hi[j] = -1.0;
            changed = true;
        }
        if lo[j] > hi[j] {
            return Tighten::Infeasible;
        }
    } else {
        let range = hi[j] - lo[j];
        let step = if range.is_finite() { (1e-3 * range).max(1e-9) } else { 1e-9 };
        if new_lo > lo[j] + step || (new_lo.is_finite() && !lo[j].is_finite()) {
            lo[j] = new_lo;
            changed = true;
        }
        if new_hi < hi[j] - step || (new_hi.is_finite() && !hi[j].is_finite()) {
            hi[j] = new_hi;
            changed = true;
        }
        if lo[j] > hi[j] {
            if lo[j] > hi[j] + 1e-9 * (1.0 + hi[j].abs()) {
                return Tighten::Infeasible;
            }
            let mid = 0.5 * (lo[j] + hi[j]);
            lo[j] = mid;
            hi[j] = mid;
        }
    }
    if changed {
        Tighten::Changed
    } else {
        Tighten::Unchanged
    }
}
