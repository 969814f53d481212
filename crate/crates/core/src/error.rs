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

//! Error type shared by every module of the crate.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Operand shapes do not line up.
    Dimension(String),
    /// Malformed argument (bad index, empty list, invalid incidence, ...).
    Argument(String),
    /// A conversion would lose expressiveness (e.g. hybrid to zonotope with binaries).
    Representation(String),
    /// The operation is not defined for the given representation or dimension.
    Unsupported(String),
    /// An H-rep polytope (or LP) is unbounded.
    Unbounded,
    /// The set is empty where a nonempty set is required.
    Empty,
    /// A solver cap was hit. `partial` reports work completed before the cap.
    Resource {
        what: &'static str,
        limit: usize,
        partial: usize,
    },
    /// A set expected to be full-dimensional is flat along `direction`.
    Degenerate { direction: Vec<f64> },
    /// A user-supplied function returned a non-finite value.
    Evaluation(String),
    /// Error raised while meshing one leaf of a hybrid zonotope.
    Leaf { binary: Vec<i8>, source: Box<Error> },
    /// Error raised at a given step of a reach tube.
    Step { index: usize, source: Box<Error> },
    /// A named external solver adapter is not registered.
    UnknownBackend(String),
}

impl Error {
    pub(crate) fn dim(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }

    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    /// True for solver cap errors, including when wrapped by a step or leaf.
    pub fn is_resource(&self) -> bool {
        match self {
            Error::Resource { .. } => true,
            Error::Leaf { source, .. } | Error::Step { source, .. } => source.is_resource(),
            _ => false,
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Dimension(m) => write!(f, "dimension mismatch: {m}"),
            Error::Argument(m) => write!(f, "invalid argument: {m}"),
            Error::Representation(m) => write!(f, "representation error: {m}"),
            Error::Unsupported(m) => write!(f, "unsupported: {m}"),
            Error::Unbounded => write!(f, "set is unbounded"),
            Error::Empty => write!(f, "set is empty"),
            Error::Resource {
                what,
                limit,
                partial,
            } => write!(f, "{what} cap of {limit} exceeded ({partial} completed)"),
            Error::Degenerate { direction } => {
                write!(f, "set is not full-dimensional; flat along {direction:?}")
            }
            Error::Evaluation(m) => write!(f, "function evaluation failed: {m}"),
            Error::Leaf { binary, source } => write!(f, "leaf {binary:?}: {source}"),
            Error::Step { index, source } => write!(f, "step {index}: {source}"),
            Error::UnknownBackend(name) => write!(f, "no solver adapter registered as {name:?}"),
        }
    }
}
