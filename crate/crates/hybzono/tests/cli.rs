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

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use common::*;
use hybzono::cli::load_set;
use hybzono::core::Rep;
use hybzono_oracle as oracle;

fn hybzono(args: &[&Path]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hybzono")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn scenario(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(name)
}

const SQUARE: &str = r#"{"type": "zono", "Gc": [[1, 0], [0, 2]], "c": [0, 1]}"#;

#[test]
fn info_summarizes_a_zonotope() {
    let dir = tempfile::tempdir().unwrap();
    let o = hybzono(&["info".as_ref(), &write(dir.path(), "z.json", SQUARE)]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "zono, n=2, n_g=2\nempty: false\nbox: [-1, 1] x [-1, 3]\n");
}

#[test]
fn info_reports_emptiness_and_leaves() {
    let dir = tempfile::tempdir().unwrap();
    let empty = r#"{"type": "conZono", "Gc": [[1, 0], [0, 1]], "c": [0, 0], "Ac": [[1, 0]], "b": [2]}"#;
    let o = hybzono(&["info".as_ref(), &write(dir.path(), "e.json", empty)]);
    assert!(stdout(&o).contains("empty: true\nbox: none"), "{}", stdout(&o));

    // two unit squares side by side
    let pair = r#"{"type": "hybZono", "Gc": [[1, 0], [0, 1]], "Gb": [[2], [0]], "c": [0, 0], "Ac": [], "Ab": [], "b": []}"#;
    let o = hybzono(&["info".as_ref(), &write(dir.path(), "h.json", pair), "--leaves".as_ref()]);
    let text = stdout(&o);
    assert!(text.starts_with("hybZono, n=2, n_g=2, n_b=1, n_c=0\n"), "{text}");
    assert!(text.ends_with("|T| = 2\n"), "{text}");
}

#[test]
fn convert_lifts_without_changing_points() {
    let dir = tempfile::tempdir().unwrap();
    let src = write(dir.path(), "z.json", SQUARE);
    let out = dir.path().join("h.json");
    assert!(hybzono(&["convert".as_ref(), &src, "hybZono".as_ref(), &out]).status.success());
    let (z, h) = (load_set(&src).unwrap(), load_set(&out).unwrap());
    assert_eq!(h.rep(), Rep::HybZono);
    for x in box_points(&mut rng(1), &[-1.5, -1.5], &[1.5, 3.5], 200) {
        assert_eq!(member(&z, &x, 1e-9), member(&h, &x, 1e-9), "{x:?}");
    }
}

#[test]
fn convert_loads_halfspaces_as_conzono() {
    let dir = tempfile::tempdir().unwrap();
    let h = vec![vec![1.0, 1.0], vec![-1.0, 0.0], vec![0.0, -1.0], vec![1.0, -2.0]];
    let f = vec![2.0, 0.5, 0.5, 1.0];
    let text = serde_json::json!({"type": "hrep", "H": h, "f": f}).to_string();
    let src = write(dir.path(), "p.json", &text);
    let out = dir.path().join("c.json");
    assert!(hybzono(&["convert".as_ref(), &src, "conZono".as_ref(), &out]).status.success());
    let c = load_set(&out).unwrap();
    assert_eq!(c.rep(), Rep::ConZono);
    let mut agree = 0;
    for x in box_points(&mut rng(2), &[-1.0, -1.0], &[3.0, 3.0], 400) {
        let want = oracle::hrep_contains(&h, &f, &x, 0.0);
        if member(&c, &x, 1e-7) == want || oracle::hrep_contains(&h, &f, &x, 1e-6) != oracle::hrep_contains(&h, &f, &x, -1e-6) {
            agree += 1;
        }
    }
    assert_eq!(agree, 400);
}

#[test]
fn convert_refuses_downcasts_and_unknown_targets() {
    let dir = tempfile::tempdir().unwrap();
    let src = write(dir.path(), "z.json", SQUARE);
    let c = dir.path().join("c.json");
    assert!(hybzono(&["convert".as_ref(), &src, "conZono".as_ref(), &c]).status.success());
    let o = hybzono(&["convert".as_ref(), &c, "zono".as_ref(), &dir.path().join("z2.json")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("cannot convert conZono down to zono"));
    let o = hybzono(&["convert".as_ref(), &src, "polytope".as_ref(), &dir.path().join("p.json")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!dir.path().join("p.json").exists());
}

#[test]
fn diagnostics_point_at_the_offending_line() {
    let dir = tempfile::tempdir().unwrap();
    let text = "{\n  \"kind\": \"setdef\",\n  \"sets\": {\n    \"A\": {\"type\": \"zono\", \"Gc\": [[1]], \"c\": [0]},\n    \"B\": {\"type\": \"zono\", \"Gc\": [[1]], \"c\": [0, 2]}\n  }\n}\n";
    let sc = write(dir.path(), "bad.json", text);
    let o = hybzono(&["run".as_ref(), &sc, &dir.path().join("out")]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("bad.json:5:"), "{err}");
    assert!(err.contains("$.sets.B.Gc"), "{err}");

    let sc = write(dir.path(), "syntax.json", "{\n  \"kind\": \"setdef\",\n  \"sets\": {,}\n}\n");
    let o = hybzono(&["run".as_ref(), &sc, &dir.path().join("out")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("syntax.json:3:"), "{}", stderr(&o));

    let sc = write(dir.path(), "typo.json", "{\n  \"kind\": \"setdef\",\n  \"exports\": []\n}\n");
    let o = hybzono(&["run".as_ref(), &sc, &dir.path().join("out")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("typo.json:3:") && stderr(&o).contains("unknown key \"exports\""), "{}", stderr(&o));
}

#[test]
fn solver_caps_exit_with_resource_code() {
    let dir = tempfile::tempdir().unwrap();
    let text = r#"{
  "kind": "setdef",
  "solver": {"max_leaves": 1},
  "sets": {
    "H": {"type": "hybZono", "Gc": [[1, 0], [0, 1]], "Gb": [[2], [0]], "c": [0, 0], "Ac": [], "Ab": [], "b": []}
  },
  "export": [{"set": "H", "format": "svg"}]
}
"#;
    let sc = write(dir.path(), "cap.json", text);
    let o = hybzono(&["run".as_ref(), &sc, &dir.path().join("out")]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn unknown_solver_and_export_flags_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let o = hybzono(&["run".as_ref(), &scenario("setdef.json"), &out, "--solver".as_ref(), "gurobi".as_ref()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error: --solver: "), "{}", stderr(&o));
    let o = hybzono(&["run".as_ref(), &scenario("setdef.json"), &out, "--export".as_ref(), "Q:svg".as_ref()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown set \"Q\""));
}

#[test]
fn empty_export_list_writes_only_reports() {
    let dir = tempfile::tempdir().unwrap();
    let text = r#"{"kind": "setdef", "sets": {"A": {"type": "zono", "Gc": [[1]], "c": [0]}}, "export": []}"#;
    let sc = write(dir.path(), "plain.json", text);
    let out = dir.path().join("out");
    let o = hybzono(&["run".as_ref(), &sc, &out]);
    assert!(o.status.success(), "{}", stderr(&o));
    let mut names: Vec<String> = fs::read_dir(&out).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    names.sort();
    assert_eq!(names, ["report.json", "timings.json"]);
}
