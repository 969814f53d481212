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

use crate::common::*;
use hybzono_core::opt::{bounding_box, contains_point, get_leaves, LeafSet};
use hybzono_core::{AnySet, HybZonotope, Solver};
use hybzono_oracle as oracle;
use rand::Rng;

pub fn random_hybrid(seed: u64) -> HybZonotope {
    let mut r = rng(seed);
    let n = r.gen_range(1..=3);
    let ng = r.gen_range(1..=4);
    let nb = r.gen_range(1..=6);
    let nc = r.gen_range(1..=3);
    hybzono(&mut r, n, ng, nb, nc)
}

pub fn leaves_match_brute_force() {
    let solver = Solver::default();
    let mut agree = 0;
    for seed in 0..100 {
        let h = random_hybrid(seed);
        let got = get_leaves(&h, &solver).unwrap();
        let want = oracle::nonempty_leaves(&h.ac().to_rows(), &h.ab().to_rows(), h.b(), h.n_g(), h.n_b(), 1e-9);
        let got_f: Vec<Vec<f64>> = got.iter().map(|l| LeafSet::as_f64(l)).collect();
        assert_eq!(got_f, want, "seed {seed}");
        assert!(!got.is_empty());

        let s = AnySet::from(h.clone());
        let bb = bounding_box(&s, &solver).unwrap();
        let lo: Vec<f64> = bb.iter().map(|i| i.lo - 0.1).collect();
        let hi: Vec<f64> = bb.iter().map(|i| i.hi + 0.1).collect();
        let mut r = rng(seed + 10_000);
        let leaf_sets: Vec<AnySet> = got.iter().map(|l| h.leaf(&LeafSet::as_f64(l)).unwrap().into()).collect();
        let mut pts = box_points(&mut r, &lo, &hi, 50);
        pts.extend(samples(&s, 50, &mut r, &solver));
        for x in pts {
            let in_set = contains_point(&s, &x, &solver).unwrap();
            let in_leaf = leaf_sets.iter().any(|l| member(l, &x, MEMBER_TOL));
            if in_set == in_leaf || member(&s, &x, 1e-5) == in_set {
                agree += 1;
            }
        }
    }
    assert_eq!(agree, 10_000);
}
