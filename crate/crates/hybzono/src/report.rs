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


//! Run reports. Field order in these structs is the key order on disk.
//! Wall times are kept out of the report (they go to `timings.json`) so
//! that two runs with the same seed produce identical report bytes.

use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolverInfo {
    pub backend: String,
    pub feasibility_tol: f64,
    pub max_nodes: usize,
    pub max_leaves: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SetEntry {
    pub name: String,
    pub rep: String,
    pub n: usize,
    pub n_g: usize,
    pub n_b: usize,
    pub n_c: usize,
    /// Nonempty leaf count, with `--leaves` only.
    pub leaves: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StepEntry {
    pub name: String,
    pub lp_calls: usize,
    pub milp_calls: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditEntry {
    pub name: String,
    pub samples: usize,
    pub failures: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OutputEntry {
    pub file: String,
    pub format: String,
    pub sets: Vec<String>,
    pub meshes: Option<usize>,
    pub bytes: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Calls {
    pub lp: usize,
    pub milp: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub scenario: String,
    pub kind: String,
    pub seed: u64,
    pub solver: SolverInfo,
    pub sets: Vec<SetEntry>,
    pub steps: Vec<StepEntry>,
    pub calls: Calls,
    pub audits: Vec<AuditEntry>,
    pub warnings: Vec<String>,
    pub outputs: Vec<OutputEntry>,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("reports serialize");
        text.push('\n');
        text
    }

    pub fn set(&self, name: &str) -> Option<&SetEntry> {
        self.sets.iter().find(|s| s.name == name)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StepTime {
    pub name: String,
    pub seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Timings {
    pub steps: Vec<StepTime>,
    pub total_seconds: f64,
}

impl Timings {
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("timings serialize");
        text.push('\n');
        text
    }
}
