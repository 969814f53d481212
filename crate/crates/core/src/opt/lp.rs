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

//! Bounded-variable primal simplex on a dense tableau.
//!
//! Problems are `min c^T x  s.t.  A x = b,  l <= x <= u` with possibly
//! infinite bounds. Phase one starts every structural variable at a finite
//! bound (or zero when free) and adds one artificial per row; phase two
//! optimizes the true objective with artificials pinned at zero.
//!
//! Pricing is Dantzig's largest reduced cost. After a degenerate pivot the
//! next pricing and ratio test fall back to Bland's smallest-index rule, which
//! rules out cycling through a degenerate vertex.

use alloc::vec;
use alloc::vec::Vec;

use super::{Outcome, SolverOptions};
use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// `min objective^T x` subject to `a_eq x = b_eq` and `lower <= x <= upper`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub a_eq: Matrix,
    pub b_eq: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl LinearProgram {
    pub fn new(objective: Vec<f64>, a_eq: Matrix, b_eq: Vec<f64>, lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        let n = objective.len();
        let a_eq = if a_eq.rows() == 0 && a_eq.cols() != n {
            Matrix::zeros(0, n)
        } else {
            a_eq
        };
        if a_eq.cols() != n || lower.len() != n || upper.len() != n {
            return Err(Error::dim("objective, bounds and constraint columns must agree"));
        }
        if a_eq.rows() != b_eq.len() {
            return Err(Error::dim("constraint rows and right-hand side must agree"));
        }
        if lower.iter().zip(&upper).any(|(l, u)| l > u || l.is_nan() || u.is_nan()) {
            return Err(Error::arg("variable lower bound exceeds upper bound"));
        }
        Ok(LinearProgram {
            objective,
            a_eq,
            b_eq,
            lower,
            upper,
        })
    }

    pub fn n_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn n_rows(&self) -> usize {
        self.b_eq.len()
    }
}

const PIVOT_TOL: f64 = 1e-9;
const DEGENERATE_STEP: f64 = 1e-12;
const REFRESH_EVERY: usize = 64;

/// Solves `p` with the builtin simplex.
pub fn solve_lp(p: &LinearProgram, opts: &SolverOptions) -> Result<Outcome> {
    solve_with_bounds(p, &p.lower, &p.upper, opts)
}

/// Solves `p` with `lower`/`upper` replacing its own bounds. Used by branch
/// and bound to avoid copying the constraint matrix at every node.
pub(crate) fn solve_with_bounds(p: &LinearProgram, lower: &[f64], upper: &[f64], opts: &SolverOptions) -> Result<Outcome> {
    let n = p.n_vars();
    if lower.iter().zip(upper).any(|(l, u)| l > u) {
        return Ok(Outcome::Infeasible);
    }

    // Presolve: substitute fixed columns, drop rows that become empty.
    let mut x = vec![0.0; n];
    let mut keep = Vec::with_capacity(n);
    for j in 0..n {
        if upper[j] - lower[j] <= 1e-12 {
            x[j] = if lower[j] == upper[j] { lower[j] } else { 0.5 * (lower[j] + upper[j]) };
        } else {
            keep.push(j);
        }
    }
    let mut rows = Vec::with_capacity(p.n_rows());
    let mut rhs = Vec::with_capacity(p.n_rows());
    for i in 0..p.n_rows() {
        let row = p.a_eq.row(i);
        let mut r = p.b_eq[i];
        for j in 0..n {
            if row[j] != 0.0 && (upper[j] - lower[j] <= 1e-12) {
                r -= row[j] * x[j];
            }
        }
        if keep.iter().any(|&j| row[j] != 0.0) {
            rows.push(i);
            rhs.push(r);
        } else if r.abs() > opts.feasibility_tol {
            return Ok(Outcome::Infeasible);
        }
    }

    let m = rows.len();
    let nk = keep.len();
    let cost: Vec<f64> = keep.iter().map(|&j| p.objective[j]).collect();
    let lo: Vec<f64> = keep.iter().map(|&j| lower[j]).collect();
    let hi: Vec<f64> = keep.iter().map(|&j| upper[j]).collect();

    let reduced = if m == 0 {
        match solve_unconstrained(&cost, &lo, &hi) {
            Some(v) => v,
            None => return Ok(Outcome::Unbounded),
        }
    } else {
        let a = Matrix::from_fn(m, nk, |i, j| p.a_eq[(rows[i], keep[j])]);
        let mut tab = Tableau::new(a, rhs, lo, hi);
        match tab.solve(&cost, opts)? {
            Phase::Optimal => tab.structural_values(),
            Phase::Infeasible => return Ok(Outcome::Infeasible),
            Phase::Unbounded => return Ok(Outcome::Unbounded),
        }
    };
    for (k, &j) in keep.iter().enumerate() {
        x[j] = reduced[k].clamp(lower[j], upper[j]);
    }
    let value = p.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
    Ok(Outcome::Optimal { value, x })
}

fn solve_unconstrained(cost: &[f64], lo: &[f64], hi: &[f64]) -> Option<Vec<f64>> {
    let mut x = Vec::with_capacity(cost.len());
    for j in 0..cost.len() {
        let v = if cost[j] > 0.0 {
            lo[j]
        } else if cost[j] < 0.0 {
            hi[j]
        } else if lo[j].is_finite() {
            lo[j]
        } else if hi[j].is_finite() {
            hi[j]
        } else {
            0.0
        };
        if !v.is_finite() {
            return None;
        }
        x.push(v);
    }
    Some(x)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum State {
    Basic,
    Lower,
    Upper,
    /// Free nonbasic variable resting at zero.
    Zero,
}

enum Phase {
    Optimal,
    Infeasible,
    Unbounded,
}

struct Tableau {
    m: usize,
    n: usize,
    width: usize,
    /// `B^{-1} [A | diag(sign)]`, row-major `m x width`.
    t: Vec<f64>,
    beta: Vec<f64>,
    basis: Vec<usize>,
    state: Vec<State>,
    lo: Vec<f64>,
    hi: Vec<f64>,
    sign: Vec<f64>,
    a: Matrix,
    b: Vec<f64>,
    iterations: usize,
}

impl Tableau {
    fn new(a: Matrix, b: Vec<f64>, mut lo: Vec<f64>, mut hi: Vec<f64>) -> Self {
        let (m, n) = a.shape();
        let width = n + m;
        let mut state = Vec::with_capacity(width);
        for j in 0..n {
            state.push(if lo[j].is_finite() {
                State::Lower
            } else if hi[j].is_finite() {
                State::Upper
            } else {
                State::Zero
            });
        }
        lo.extend(core::iter::repeat(0.0).take(m));
        hi.extend(core::iter::repeat(f64::INFINITY).take(m));
        state.extend(core::iter::repeat(State::Basic).take(m));

        let mut tab = Tableau {
            m,
            n,
            width,
            t: vec![0.0; m * width],
            beta: vec![0.0; m],
            basis: (n..n + m).collect(),
            state,
            lo,
            hi,
            sign: vec![1.0; m],
            a,
            b,
            iterations: 0,
        };
        for i in 0..m {
            let resid = tab.b[i] - (0..n).map(|j| tab.a[(i, j)] * tab.nonbasic_value(j)).sum::<f64>();
            let s = if resid >= 0.0 { 1.0 } else { -1.0 };
            tab.sign[i] = s;
            tab.beta[i] = resid.abs();
            let row = &mut tab.t[i * width..(i + 1) * width];
            for j in 0..n {
                row[j] = s * tab.a[(i, j)];
            }
            row[n + i] = 1.0;
        }
        tab
    }

    #[inline]
    fn nonbasic_value(&self, j: usize) -> f64 {
        match self.state[j] {
            State::Lower => self.lo[j],
            State::Upper => self.hi[j],
            State::Zero | State::Basic => 0.0,
        }
    }

    fn solve(&mut self, cost: &[f64], opts: &SolverOptions) -> Result<Phase> {
        let (m, n) = (self.m, self.n);
        let infeasibility: f64 = self.beta.iter().sum();
        if infeasibility > opts.feasibility_tol {
            let mut phase1 = vec![0.0; self.width];
            for c in &mut phase1[n..] {
                *c = 1.0;
            }
            self.optimize(&phase1, opts)?;
            self.refresh_basic_values();
            let w: f64 = (0..m)
                .filter(|&i| self.basis[i] >= n)
                .map(|i| self.beta[i].max(0.0))
                .sum();
            if w > opts.feasibility_tol {
                return Ok(Phase::Infeasible);
            }
        }
        // Pin artificials at zero and pivot basic ones out where possible.
        for k in n..self.width {
            self.hi[k] = 0.0;
            if self.state[k] != State::Basic {
                self.state[k] = State::Lower;
            }
        }
        for r in 0..m {
            if self.basis[r] < n {
                continue;
            }
            let row = &self.t[r * self.width..r * self.width + n];
            let mut best: Option<(usize, f64)> = None;
            for (j, &v) in row.iter().enumerate() {
                if self.state[j] != State::Basic && v.abs() > 1e-7 && best.map_or(true, |(_, b)| v.abs() > b) {
                    best = Some((j, v.abs()));
                }
            }
            if let Some((q, _)) = best {
                let leaving = self.basis[r];
                let value = self.nonbasic_value(q);
                self.pivot(r, q, None);
                self.state[leaving] = State::Lower;
                self.beta[r] = value;
            }
        }
        if cost.iter().all(|&c| c == 0.0) {
            self.refresh_basic_values();
            return Ok(Phase::Optimal);
        }
        let mut phase2 = vec![0.0; self.width];
        phase2[..n].copy_from_slice(cost);
        let status = self.optimize(&phase2, opts)?;
        self.refresh_basic_values();
        Ok(status)
    }

    /// Runs simplex iterations for `cost` until optimal or unbounded.
    fn optimize(&mut self, cost: &[f64], opts: &SolverOptions) -> Result<Phase> {
        let (m, width) = (self.m, self.width);
        // Reduced costs d_j = c_j - c_B^T T_j.
        let mut d = cost.to_vec();
        for i in 0..m {
            let cb = cost[self.basis[i]];
            if cb != 0.0 {
                let row = &self.t[i * width..(i + 1) * width];
                for (dj, &tij) in d.iter_mut().zip(row) {
                    *dj -= cb * tij;
                }
            }
        }
        for i in 0..m {
            d[self.basis[i]] = 0.0;
        }

        let tol = opts.optimality_tol;
        let mut bland = false;
        let mut since_refresh = 0;
        loop {
            self.iterations += 1;
            if self.iterations > opts.max_iterations {
                return Err(Error::Resource {
                    what: "simplex iterations",
                    limit: opts.max_iterations,
                    partial: self.iterations - 1,
                });
            }

            // Pricing.
            let mut entering: Option<(usize, f64)> = None;
            let mut best = 0.0;
            for j in 0..width {
                if self.state[j] == State::Basic || self.hi[j] - self.lo[j] <= 0.0 {
                    continue;
                }
                let dir = match self.state[j] {
                    State::Lower if d[j] < -tol => 1.0,
                    State::Upper if d[j] > tol => -1.0,
                    State::Zero if d[j] < -tol => 1.0,
                    State::Zero if d[j] > tol => -1.0,
                    _ => continue,
                };
                if bland {
                    entering = Some((j, dir));
                    break;
                }
                if d[j].abs() > best {
                    best = d[j].abs();
                    entering = Some((j, dir));
                }
            }
            let Some((q, dir)) = entering else {
                return Ok(Phase::Optimal);
            };

            // Ratio test.
            let own_range = self.hi[q] - self.lo[q];
            let mut step = f64::INFINITY;
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..m {
                let alpha = self.t[i * width + q] * dir;
                if alpha.abs() <= PIVOT_TOL {
                    continue;
                }
                let bi = self.basis[i];
                let ratio = if alpha > 0.0 {
                    if !self.lo[bi].is_finite() {
                        continue;
                    }
                    (self.beta[i] - self.lo[bi]) / alpha
                } else {
                    if !self.hi[bi].is_finite() {
                        continue;
                    }
                    (self.hi[bi] - self.beta[i]) / -alpha
                };
                let ratio = ratio.max(0.0);
                let better = match leave {
                    None => true,
                    Some((r, a_r)) => {
                        if ratio < step - DEGENERATE_STEP {
                            true
                        } else if ratio <= step + DEGENERATE_STEP {
                            if bland {
                                bi < self.basis[r]
                            } else {
                                alpha.abs() > a_r.abs()
                            }
                        } else {
                            false
                        }
                    }
                };
                if better {
                    step = ratio;
                    leave = Some((i, alpha));
                }
            }

            if own_range <= step {
                if !own_range.is_finite() {
                    return Ok(Phase::Unbounded);
                }
                // Bound flip: the entering variable crosses its whole range.
                let delta = dir * own_range;
                for i in 0..m {
                    self.beta[i] -= self.t[i * width + q] * delta;
                }
                self.state[q] = if dir > 0.0 { State::Upper } else { State::Lower };
                bland = false;
                continue;
            }
            let Some((r, alpha)) = leave else {
                return Ok(Phase::Unbounded);
            };

            let delta = dir * step;
            let entering_value = self.nonbasic_value(q) + delta;
            for i in 0..m {
                self.beta[i] -= self.t[i * width + q] * delta;
            }
            let leaving = self.basis[r];
            self.pivot(r, q, Some(&mut d));
            self.state[leaving] = if alpha > 0.0 { State::Lower } else { State::Upper };
            self.beta[r] = entering_value;
            bland = step <= DEGENERATE_STEP;

            since_refresh += 1;
            if since_refresh >= REFRESH_EVERY {
                self.refresh_basic_values();
                since_refresh = 0;
            }
        }
    }

    /// Makes column `q` basic in row `r`.
    fn pivot(&mut self, r: usize, q: usize, d: Option<&mut Vec<f64>>) {
        let width = self.width;
        let piv = self.t[r * width + q];
        let mut prow: Vec<f64> = self.t[r * width..(r + 1) * width].iter().map(|v| v / piv).collect();
        prow[q] = 1.0;
        for i in 0..self.m {
            if i == r {
                continue;
            }
            let f = self.t[i * width + q];
            if f == 0.0 {
                continue;
            }
            let row = &mut self.t[i * width..(i + 1) * width];
            for (x, &p) in row.iter_mut().zip(&prow) {
                *x -= f * p;
            }
            row[q] = 0.0;
        }
        if let Some(d) = d {
            let f = d[q];
            if f != 0.0 {
                for (x, &p) in d.iter_mut().zip(&prow) {
                    *x -= f * p;
                }
            }
            d[q] = 0.0;
        }
        self.t[r * width..(r + 1) * width].copy_from_slice(&prow);
        self.basis[r] = q;
        self.state[q] = State::Basic;
    }

    /// Recomputes basic values as `B^{-1} (b - N x_N)` using the artificial
    /// block of the tableau, which holds `B^{-1} diag(sign)`.
    fn refresh_basic_values(&mut self) {
        let (m, n, width) = (self.m, self.n, self.width);
        let mut r = self.b.clone();
        for j in 0..n {
            if self.state[j] == State::Basic {
                continue;
            }
            let v = self.nonbasic_value(j);
            if v != 0.0 {
                for (i, ri) in r.iter_mut().enumerate() {
                    *ri -= self.a[(i, j)] * v;
                }
            }
        }
        for i in 0..m {
            let row = &self.t[i * width + n..(i + 1) * width];
            self.beta[i] = (0..m).map(|k| row[k] * self.sign[k] * r[k]).sum();
        }
    }

    fn structural_values(&self) -> Vec<f64> {
        let mut x: Vec<f64> = (0..self.n).map(|j| self.nonbasic_value(j)).collect();
        for (i, &bi) in self.basis.iter().enumerate() {
            if bi < self.n {
                x[bi] = self.beta[i];
            }
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn box_lp(obj: Vec<f64>, a: Matrix, b: Vec<f64>) -> LinearProgram {
        let n = obj.len();
        LinearProgram::new(obj, a, b, vec![-1.0; n], vec![1.0; n]).unwrap()
    }

    fn value(o: Outcome) -> f64 {
        match o {
            Outcome::Optimal { value, .. } => value,
            other => panic!("expected optimum, got {other:?}"),
        }
    }

    #[test]
    fn box_maximum() {
        let p = box_lp(vec![-1.0, 0.0], Matrix::zeros(0, 2), vec![]);
        assert_eq!(value(solve_lp(&p, &SolverOptions::default()).unwrap()), -1.0);
    }

    #[test]
    fn equality_pinned() {
        let p = box_lp(vec![-1.0, -1.0], Matrix::from_rows(&[[1.0, 1.0]]).unwrap(), vec![0.0]);
        assert!(value(solve_lp(&p, &SolverOptions::default()).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn infeasible_and_unbounded() {
        let p = box_lp(vec![0.0, 0.0], Matrix::from_rows(&[[1.0, 1.0]]).unwrap(), vec![3.0]);
        assert_eq!(solve_lp(&p, &SolverOptions::default()).unwrap(), Outcome::Infeasible);

        let p = LinearProgram::new(
            vec![-1.0, 0.0],
            Matrix::from_rows(&[[1.0, -1.0]]).unwrap(),
            vec![0.0],
            vec![0.0, 0.0],
            vec![f64::INFINITY, f64::INFINITY],
        )
        .unwrap();
        assert_eq!(solve_lp(&p, &SolverOptions::default()).unwrap(), Outcome::Unbounded);
    }

    #[test]
    fn free_variables() {
        // min x + y  s.t.  x - y = 1, y >= -2, x free  ->  x = -1, y = -2
        let p = LinearProgram::new(
            vec![1.0, 1.0],
            Matrix::from_rows(&[[1.0, -1.0]]).unwrap(),
            vec![1.0],
            vec![f64::NEG_INFINITY, -2.0],
            vec![f64::INFINITY, f64::INFINITY],
        )
        .unwrap();
        let Outcome::Optimal { value, x } = solve_lp(&p, &SolverOptions::default()).unwrap() else {
            panic!()
        };
        assert!((value + 3.0).abs() < 1e-12);
        assert!((x[0] + 1.0).abs() < 1e-12 && (x[1] + 2.0).abs() < 1e-12);
    }

    #[test]
    fn iteration_cap_is_a_resource_error() {
        let p = box_lp(
            vec![-1.0, -2.0, -3.0],
            Matrix::from_rows(&[[1.0, 1.0, 1.0]]).unwrap(),
            vec![0.5],
        );
        let opts = SolverOptions {
            max_iterations: 1,
            ..SolverOptions::default()
        };
        assert!(matches!(solve_lp(&p, &opts), Err(Error::Resource { .. })));
    }

    #[test]
    fn redundant_rows() {
        let a = Matrix::from_rows(&[[1.0, 1.0], [2.0, 2.0]]).unwrap();
        let p = box_lp(vec![-1.0, 0.0], a, vec![0.5, 1.0]);
        let v = value(solve_lp(&p, &SolverOptions::default()).unwrap());
        assert!((v + 1.0).abs() < 1e-12);
    }
}
