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

//! Zonotopes, constrained zonotopes and hybrid zonotopes: exact set algebra,
//! an embedded LP/MILP engine, meshing, and reachability for linear, MLD,
//! PWA, ReLU-network and bounded-nonlinear systems.
//!
//! The crate is `no_std` (it needs `alloc`). File formats, exports and the
//! command-line runner live in the companion `hybzono` crate.

#![no_std]

extern crate alloc;

pub mod approx;
pub mod error;
pub mod geometry;
pub mod matrix;
pub mod neural;
pub mod ops;
pub mod opt;
pub mod reach;
pub mod sets;

pub use error::{Error, Result};
pub use matrix::Matrix;
pub use opt::{Solver, SolverOptions};
pub use sets::{AnySet, Complexity, ConZonotope, HybZonotope, Rep, VertexIncidence, Zonotope};
