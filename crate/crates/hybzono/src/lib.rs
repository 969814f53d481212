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


//! File formats, mesh exports and the scenario runner behind the `hybzono`
//! command-line tool. The set algebra itself lives in `hybzono-core`.

pub use hybzono_core as core;

pub mod cli;
pub mod doc;
pub mod export;
pub mod format;
pub mod report;
pub mod run;
pub mod scenario;

pub use report::RunReport;
pub use run::{run, run_scenario, RunError, RunFlags};
pub use scenario::Scenario;
