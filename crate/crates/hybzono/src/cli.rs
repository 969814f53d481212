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


//! The `info` and `convert` commands.

use std::fmt::Write;
use std::fs;
use std::path::Path;

use hybzono_core::opt::{bounding_box, get_leaves, is_empty};
use hybzono_core::{AnySet, Error, Rep, Solver};

use crate::doc::Doc;
use crate::format::{parse_set, set_to_json};
use crate::run::RunError;

pub fn load_set(path: &Path) -> Result<AnySet, RunError> {
    let doc = Doc::read(path)?;
    Ok(parse_set(&doc.root())?)
}

/// Representation and counts, emptiness, bounding box and, with `leaves`,
/// the number of nonempty leaves.
pub fn info(set: &AnySet, leaves: bool, solver: &Solver) -> Result<String, RunError> {
    let core = |error| RunError::Core { error, at: None };
    let c = set.complexity();
    let mut out = format!("{}, n={}, n_g={}", set.rep().name(), set.dim(), c.n_g);
    if set.rep() == Rep::HybZono {
        write!(out, ", n_b={}", c.n_b).unwrap();
    }
    if set.rep() != Rep::Zono {
        write!(out, ", n_c={}", c.n_c).unwrap();
    }
    out.push('\n');
    let empty = is_empty(set, solver).map_err(core)?;
    writeln!(out, "empty: {empty}").unwrap();
    if empty {
        out.push_str("box: none\n");
    } else {
        let b = bounding_box(set, solver).map_err(core)?;
        let parts: Vec<String> = b.iter().map(|i| format!("[{}, {}]", i.lo, i.hi)).collect();
        writeln!(out, "box: {}", parts.join(" x ")).unwrap();
    }
    if leaves {
        let t = get_leaves(&set.to_hyb(), solver).map_err(core)?;
        writeln!(out, "|T| = {}", t.len()).unwrap();
    }
    Ok(out)
}

/// Writes `set` lifted to `target`. Only lifts are allowed: a downcast could
/// lose points.
pub fn convert(set: &AnySet, target: &str, out: &Path) -> Result<(), RunError> {
    let rep = Rep::from_name(target).ok_or_else(|| RunError::Usage(format!("unknown target \"{target}\"; expected zono, conZono or hybZono")))?;
    if rep < set.rep() {
        return Err(RunError::Core {
            error: Error::Representation(format!("cannot convert {} down to {}", set.rep().name(), rep.name())),
            at: None,
        });
    }
    let lifted = set.lift(rep).map_err(|error| RunError::Core { error, at: None })?;
    fs::write(out, set_to_json(&lifted)).map_err(|error| RunError::Io {
        path: out.to_path_buf(),
        error,
    })
}
