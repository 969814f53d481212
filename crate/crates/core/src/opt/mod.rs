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

//! LP/MILP engines and the set queries built on them.

mod lp;
mod milp;
mod query;

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use core::cell::Cell;

use crate::error::{Error, Result};

pub use lp::{solve_lp, LinearProgram};
pub use milp::{solve_milp, MixedProgram};
pub use query::{bounding_box, contains_point, get_leaves, is_empty, sample_points, support, support_point, Interval, LeafSet};

pub(crate) use milp::enumerate_leaves;

/// Result of an LP or MILP solve. MILPs report `Unbounded` only when their
/// relaxation is unbounded, which factor-space programs never are.
#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Optimal { value: f64, x: Vec<f64> },
    Infeasible,
    Unbounded,
}

impl Outcome {
    pub fn is_optimal(&self) -> bool {
        matches!(self, Outcome::Optimal { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Backend {
    Builtin,
    /// A registered [`SolverAdapter`], looked up by name.
    External(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverOptions {
    pub feasibility_tol: f64,
    pub optimality_tol: f64,
    /// Simplex iterations per LP.
    pub max_iterations: usize,
    /// Branch-and-bound nodes per MILP or leaf enumeration.
    pub max_nodes: usize,
    /// Leaves returned by a single leaf enumeration.
    pub max_leaves: usize,
    pub backend: Backend,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            feasibility_tol: 1e-7,
            optimality_tol: 1e-9,
            max_iterations: 50_000,
            max_nodes: 1_000_000,
            max_leaves: 1 << 16,
            backend: Backend::Builtin,
        }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.feasibility_tol > 0.0 && self.optimality_tol > 0.0) {
            return Err(Error::arg("solver tolerances must be positive"));
        }
        if self.max_iterations == 0 || self.max_nodes == 0 || self.max_leaves == 0 {
            return Err(Error::arg("solver caps must be at least 1"));
        }
        Ok(())
    }
}

/// Hook for third-party solvers. Adapters see the same programs as the
/// builtin engine; `binaries` in a [`MixedProgram`] take values in {-1, 1}.
pub trait SolverAdapter {
    fn solve_lp(&self, p: &LinearProgram, opts: &SolverOptions) -> Result<Outcome>;
    fn solve_milp(&self, p: &MixedProgram, opts: &SolverOptions) -> Result<Outcome>;
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub lp_calls: usize,
    pub milp_calls: usize,
    pub nodes: usize,
}

/// Solver options plus registered adapters and call counters.
///
/// Counters use interior mutability so queries can take `&Solver`; a solver
/// is therefore not `Sync` and parallel callers should each own one.
pub struct Solver {
    options: SolverOptions,
    adapters: Vec<(String, Box<dyn SolverAdapter>)>,
    stats: Cell<SolveStats>,
}

impl Default for Solver {
    fn default() -> Self {
        Solver::new(SolverOptions::default())
    }
}

impl core::fmt::Debug for Solver {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("Solver")
            .field("options", &self.options)
            .field("adapters", &self.adapters.iter().map(|(n, _)| n.as_str()).collect::<Vec<_>>())
            .field("stats", &self.stats.get())
            .finish()
    }
}

impl Solver {
    pub fn new(options: SolverOptions) -> Self {
        Solver {
            options,
            adapters: Vec::new(),
            stats: Cell::new(SolveStats::default()),
        }
    }

    pub fn register(&mut self, name: impl Into<String>, adapter: Box<dyn SolverAdapter>) {
        let name = name.into();
        self.adapters.retain(|(n, _)| *n != name);
        self.adapters.push((name, adapter));
    }

    pub fn options(&self) -> &SolverOptions {
        &self.options
    }

    pub fn options_mut(&mut self) -> &mut SolverOptions {
        &mut self.options
    }

    pub fn stats(&self) -> SolveStats {
        self.stats.get()
    }

    pub fn reset_stats(&self) {
        self.stats.set(SolveStats::default());
    }

    fn adapter(&self) -> Result<Option<&dyn SolverAdapter>> {
        match &self.options.backend {
            Backend::Builtin => Ok(None),
            Backend::External(name) => self
                .adapters
                .iter()
                .find(|(n, _)| n == name)
                .map(|(_, a)| Some(a.as_ref()))
                .ok_or_else(|| Error::UnknownBackend(name.clone())),
        }
    }

    fn bump(&self, f: impl FnOnce(&mut SolveStats)) {
        let mut s = self.stats.get();
        f(&mut s);
        self.stats.set(s);
    }

    pub fn lp(&self, p: &LinearProgram) -> Result<Outcome> {
        self.bump(|s| s.lp_calls += 1);
        match self.adapter()? {
            Some(a) => a.solve_lp(p, &self.options),
            None => solve_lp(p, &self.options),
        }
    }

    pub(crate) fn lp_bounded(&self, p: &LinearProgram, lower: &[f64], upper: &[f64]) -> Result<Outcome> {
        match self.adapter()? {
            Some(_) => {
                let mut q = p.clone();
                q.lower = lower.to_vec();
                q.upper = upper.to_vec();
                self.lp(&q)
            }
            None => {
                self.bump(|s| s.lp_calls += 1);
                lp::solve_with_bounds(p, lower, upper, &self.options)
            }
        }
    }

    pub fn milp(&self, p: &MixedProgram) -> Result<Outcome> {
        if p.binaries.is_empty() {
            return self.lp(&p.lp);
        }
        self.bump(|s| s.milp_calls += 1);
        match self.adapter()? {
            Some(a) => a.solve_milp(p, &self.options),
            None => milp::branch_and_bound(p, self),
        }
    }

    pub(crate) fn count_node(&self) -> usize {
        self.bump(|s| s.nodes += 1);
        self.stats.get().nodes
    }
}
