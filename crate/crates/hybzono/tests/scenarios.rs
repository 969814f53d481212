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

use std::fs;
use std::path::{Path, PathBuf};

use hybzono::cli::load_set;
use hybzono::{run, RunFlags, RunReport};

fn scenario(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(name)
}

fn run_in(name: &str, out: &Path, flags: &RunFlags) -> RunReport {
    run(&scenario(name), out, flags).unwrap_or_else(|e| panic!("{name}: {e}"))
}

const BUNDLED: [&str; 9] = [
    "setdef.json",
    "operations.json",
    "reach_linear.json",
    "reach_pwa.json",
    "reach_mld.json",
    "reach_closedloop.json",
    "relu.json",
    "nonlinear.json",
    "zonotope_mesh.json",
];

#[test]
fn bundled_scenarios_pass_their_audits() {
    for name in BUNDLED {
        let dir = tempfile::tempdir().unwrap();
        let rep = run_in(name, dir.path(), &RunFlags::default());
        assert!(!rep.outputs.is_empty(), "{name}: no outputs");
        for a in &rep.audits {
            assert!(a.samples > 0, "{name}: {}", a.name);
            assert_eq!(a.failures, 0, "{name}: audit {}", a.name);
        }
        for o in &rep.outputs {
            assert_eq!(fs::metadata(dir.path().join(&o.file)).unwrap().len() as usize, o.bytes, "{name}: {}", o.file);
        }
        let on_disk = fs::read_to_string(dir.path().join("report.json")).unwrap();
        assert_eq!(on_disk, rep.to_json());
    }
}

#[test]
fn setdef_draws_one_svg_per_set() {
    let dir = tempfile::tempdir().unwrap();
    let rep = run_in("setdef.json", dir.path(), &RunFlags::default());
    let files: Vec<&str> = rep.outputs.iter().map(|o| o.file.as_str()).collect();
    assert_eq!(files, ["Z.svg", "Zc.svg", "Zh.svg"]);
    for o in &rep.outputs {
        let text = fs::read_to_string(dir.path().join(&o.file)).unwrap();
        assert!(text.starts_with("<svg"));
        assert_eq!(text.matches("<path").count(), o.meshes.unwrap(), "{}", o.file);
    }
    // the hybrid set is drawn leaf by leaf
    assert!(rep.outputs[2].meshes.unwrap() > 1);
}

#[test]
fn relu_graph_set_has_expected_counts() {
    let dir = tempfile::tempdir().unwrap();
    let rep = run_in("relu.json", dir.path(), &RunFlags::default());
    let f = rep.set("F").unwrap();
    assert_eq!((f.rep.as_str(), f.n, f.n_g, f.n_b, f.n_c), ("hybZono", 3, 162, 40, 120));
    let u = rep.set("unit").unwrap();
    assert_eq!((u.n_g, u.n_b, u.n_c), (4, 1, 2));
    let reloaded = load_set(&dir.path().join("F.json")).unwrap().complexity();
    assert_eq!((reloaded.n_g, reloaded.n_b, reloaded.n_c), (162, 40, 120));
}

#[test]
fn exported_set_documents_match_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let rep = run_in("operations.json", dir.path(), &RunFlags::default());
    for o in rep.outputs.iter().filter(|o| o.format == "set") {
        let s = load_set(&dir.path().join(&o.file)).unwrap();
        let e = rep.set(&o.sets[0]).unwrap();
        let c = s.complexity();
        assert_eq!((s.rep().name(), s.dim(), c.n_g, c.n_b, c.n_c), (e.rep.as_str(), e.n, e.n_g, e.n_b, e.n_c), "{}", o.file);
    }
}

#[test]
fn worker_count_does_not_change_outputs() {
    for name in ["setdef.json", "reach_pwa.json", "relu.json"] {
        let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
        let one = run_in(name, a.path(), &RunFlags { jobs: 1, ..RunFlags::default() });
        let three = run_in(name, b.path(), &RunFlags { jobs: 3, ..RunFlags::default() });
        assert_eq!(one.outputs, three.outputs, "{name}");
        assert_eq!(one.audits, three.audits, "{name}");
        for o in &one.outputs {
            assert_eq!(fs::read(a.path().join(&o.file)).unwrap(), fs::read(b.path().join(&o.file)).unwrap(), "{name}: {}", o.file);
        }
    }
}

#[test]
fn leaf_counts_and_extra_exports_on_request() {
    let dir = tempfile::tempdir().unwrap();
    let flags = RunFlags {
        leaves: true,
        exports: vec!["Z+Zc:mesh:both.json".into()],
        ..RunFlags::default()
    };
    let rep = run_in("setdef.json", dir.path(), &flags);
    assert_eq!(rep.set("Z").unwrap().leaves, Some(1));
    assert!(rep.set("Zh").unwrap().leaves.unwrap() > 1);
    let last = rep.outputs.last().unwrap();
    assert_eq!((last.file.as_str(), last.meshes), ("both.json", Some(2)));
    let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("both.json")).unwrap()).unwrap();
    assert!(doc["v"].as_array().unwrap().len() >= 8);
}
