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

use std::f64::consts::PI;

use crate::common::*;
use hybzono_core::approx::{bound_error, bound_function, UnaryFunctionSpec};
use hybzono_core::opt::contains_point;
use hybzono_core::{AnySet, Solver};
use rand::Rng;

pub fn sin_bound_contains_graph() {
    let solver = Solver::default();
    let f = f64::sin;
    let spec = UnaryFunctionSpec::uniform(&f, -PI, PI, 17).unwrap();
    let zh = AnySet::from(bound_function(&spec, 64).unwrap());
    let mut r = rng(11);
    for _ in 0..10_000 {
        let x = r.gen_range(-PI..=PI);
        assert!(contains_point(&zh, &[x, x.sin()], &solver).unwrap(), "x = {x}");
    }
    // the error interval is not wider than needed for the coarse chord gap
    let eb = bound_error(&spec, 64).unwrap();
    let h = 2.0 * PI / 16.0;
    assert!(eb.radii.iter().all(|&e| e <= 1.5 * h * h / 8.0 + 1e-12));
}

/// Chord error of x^2 on [a, b] peaks at the midpoint with value (b - a)^2 / 4.
pub fn quadratic_chord_error() {
    let f = |x: f64| x * x;
    let mut r = rng(12);
    for _ in 0..20 {
        let a = r.gen_range(-3.0..3.0);
        let b = a + r.gen_range(0.1..2.0);
        let n_v = r.gen_range(2..6);
        let spec = UnaryFunctionSpec::uniform(&f, a, b, n_v).unwrap();
        let eb = bound_error(&spec, 100).unwrap();
        let h = (b - a) / (n_v - 1) as f64;
        for &e in &eb.radii {
            assert!((e - 1.5 * h * h / 4.0).abs() < 1e-9 * (1.0 + e), "{e} vs {}", 1.5 * h * h / 4.0);
        }
        // one-sided error: the interval is centered below the chord
        assert!((eb.e.c()[1] + h * h / 8.0).abs() < 1e-9);
    }
    let unit = UnaryFunctionSpec::uniform(&f, 0.0, 1.0, 2).unwrap();
    assert!(bound_error(&unit, 100).unwrap().radii[0] >= 0.125);
}
