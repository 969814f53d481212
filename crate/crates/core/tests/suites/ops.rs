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
use hybzono_core::opt::{contains_point, is_empty, support};
use hybzono_core::ops::{self, OpComplexityReport};
use hybzono_core::{AnySet, Complexity, Error, Matrix, Rep, Solver};
use rand::Rng;

const INSTANCES: u64 = 50;
const SAMPLES: usize = 12;
const SUPPORT_TOL: f64 = 1e-6;

fn inside(s: &AnySet, x: &[f64], solver: &Solver) -> bool {
    contains_point(s, x, solver).unwrap()
}

fn cx(s: &AnySet) -> (usize, usize, usize) {
    let c = s.complexity();
    (c.n_g, c.n_b, c.n_c)
}

fn kinds(seed: u64) -> (usize, usize) {
    ((seed % 3) as usize, ((seed / 3) % 3) as usize)
}

pub fn linear_map_support_and_membership() {
    let solver = Solver::default();
    for seed in 0..INSTANCES {
        let mut r = rng(seed);
        let s = any(&mut r, kinds(seed).0, 2);
        let m = r.gen_range(1..=3);
        let map = matrix(&mut r, m, 2, 1.0);
        let out = ops::linear_map(&map, &s).unwrap();
        assert_eq!(out.rep(), s.rep());
        assert_eq!(cx(&out), cx(&s));
        for d in directions(&mut r, m, 4) {
            let lifted = map.tr_mul_vec(&d);
            let (a, b) = (support(&out, &d, &solver).unwrap(), support(&s, &lifted, &solver).unwrap());
            assert!((a - b).abs() <= SUPPORT_TOL * (1.0 + b.abs()), "seed {seed}: {a} vs {b}");
        }
        for x in samples(&s, SAMPLES, &mut r, &solver) {
            assert!(inside(&out, &map.mul_vec(&x), &solver), "seed {seed}");
        }
    }
}

pub fn affine_map_and_translate_shift_support() {
    let solver = Solver::default();
    for seed in 0..INSTANCES {
        let mut r = rng(100 + seed);
        let s = any(&mut r, kinds(seed).0, 2);
        let map = matrix(&mut r, 2, 2, 1.0);
        let off = vector(&mut r, 2, 2.0);
        let out = ops::affine_map(&map, &s, &off).unwrap();
        let moved = ops::translate(&s, &off).unwrap();
        for d in directions(&mut r, 2, 4) {
            let base = support(&s, &map.tr_mul_vec(&d), &solver).unwrap();
            let shift = d[0] * off[0] + d[1] * off[1];
            let got = support(&out, &d, &solver).unwrap();
            assert!((got - base - shift).abs() <= SUPPORT_TOL * (1.0 + got.abs()), "seed {seed}");
            let t = support(&moved, &d, &solver).unwrap() - support(&s, &d, &solver).unwrap();
            assert!((t - shift).abs() <= SUPPORT_TOL * (1.0 + shift.abs()), "seed {seed}");
        }
    }
}

pub fn minkowski_sum_support_is_additive() {
    let solver = Solver::default();
    for seed in 0..INSTANCES {
        let mut r = rng(200 + seed);
        let (ka, kb) = kinds(seed);
        let (s, t) = (any(&mut r, ka, 2), any(&mut r, kb, 2));
        let out = ops::minkowski_sum(&s, &t).unwrap();
        let (a, b) = (s.complexity(), t.complexity());
        assert_eq!(cx(&out), (a.n_g + b.n_g, a.n_b + b.n_b, a.n_c + b.n_c), "seed {seed}");
        assert_eq!(out.rep(), s.rep().max(t.rep()));
        for d in directions(&mut r, 2, 4) {
            let want = support(&s, &d, &solver).unwrap() + support(&t, &d, &solver).unwrap();
            let got = support(&out, &d, &solver).unwrap();
            assert!((got - want).abs() <= SUPPORT_TOL * (1.0 + want.abs()), "seed {seed}: {got} vs {want}");
        }
        let xs = samples(&s, SAMPLES, &mut r, &solver);
        let ys = samples(&t, SAMPLES, &mut r, &solver);
        for (x, y) in xs.iter().zip(&ys) {
            assert!(inside(&out, &[x[0] + y[0], x[1] + y[1]], &solver), "seed {seed}");
        }
    }
}

pub fn cartesian_product_is_separable() {
    let solver = Solver::default();
    for seed in 0..INSTANCES {
        let mut r = rng(300 + seed);
        let (ka, kb) = kinds(seed);
        let (s, t) = (any(&mut r, ka, 2), any(&mut r, kb, 1));
        let out = ops::cartesian_product(&s, &t).unwrap();
        let (a, b) = (s.complexity(), t.complexity());
        assert_eq!(cx(&out), (a.n_g + b.n_g, a.n_b + b.n_b, a.n_c + b.n_c));
        assert_eq!(out.dim(), 3);
        let xs = samples(&s, SAMPLES, &mut r, &solver);
        let ys = samples(&t, SAMPLES, &mut r, &solver);
        for (x, y) in xs.iter().zip(&ys) {
            assert!(inside(&out, &[x[0], x[1], y[0]], &solver), "seed {seed}");
        }
        for p in samples(&out, SAMPLES, &mut r, &solver) {
            assert!(member(&s, &p[..2], MEMBER_TOL) && member(&t, &p[2..], MEMBER_TOL), "seed {seed}");
        }
    }
}

pub fn generalized_intersection_matches_definition() {
    let solver = Solver::default();
    let mut checked = 0;
    for seed in 0..INSTANCES {
        let mut r = rng(400 + seed);
        let (ka, kb) = kinds(seed);
        let s = any(&mut r, ka, 2);
        let t = any(&mut r, kb, 1);
        let map = matrix(&mut r, 1, 2, 1.0);
        let out = ops::generalized_intersection(&s, &t, Some(&map)).unwrap();
        let (a, b) = (s.complexity(), t.complexity());
        assert_eq!(cx(&out), (a.n_g + b.n_g, a.n_b + b.n_b, a.n_c + b.n_c + 1), "seed {seed}");
        assert_ne!(out.rep(), Rep::Zono);
        for x in samples(&s, SAMPLES, &mut r, &solver) {
            let want = member(&t, &map.mul_vec(&x), MEMBER_TOL);
            let got = inside(&out, &x, &solver);
            // points within solver tolerance of the boundary may go either way
            if want != got {
                assert!(member(&t, &map.mul_vec(&x), 1e-5), "seed {seed}: spurious member");
            }
        }
        if is_empty(&out, &solver).unwrap() {
            continue;
        }
        checked += 1;
        for x in samples(&out, SAMPLES, &mut r, &solver) {
            assert!(member(&s, &x, MEMBER_TOL), "seed {seed}");
            assert!(member(&t, &map.mul_vec(&x), MEMBER_TOL), "seed {seed}");
        }
    }
    assert!(checked >= 10, "only {checked} nonempty instances");
}

pub fn intersection_keeps_common_points() {
    let solver = Solver::default();
    let mut checked = 0;
    for seed in 0..INSTANCES {
        let mut r = rng(500 + seed);
        let (ka, kb) = kinds(seed);
        let s = any(&mut r, ka, 2);
        // shift t onto a point of s so the intersection is nonempty
        let t0 = any(&mut r, kb, 2);
        let p = samples(&s, 1, &mut r, &solver).remove(0);
        let q = samples(&t0, 1, &mut r, &solver).remove(0);
        let t = ops::translate(&t0, &[p[0] - q[0], p[1] - q[1]]).unwrap();
        let out = ops::intersection(&s, &t).unwrap();
        let (a, b) = (s.complexity(), t.complexity());
        assert_eq!(cx(&out), (a.n_g + b.n_g, a.n_b + b.n_b, a.n_c + b.n_c + 2), "seed {seed}");
        assert!(inside(&out, &p, &solver), "seed {seed}: common point lost");
        checked += 1;
        for x in samples(&out, SAMPLES, &mut r, &solver) {
            assert!(member(&s, &x, MEMBER_TOL) && member(&t, &x, MEMBER_TOL), "seed {seed}");
        }
    }
    assert_eq!(checked, INSTANCES);
}

pub fn halfspace_intersection_matches_definition() {
    let solver = Solver::default();
    for seed in 0..INSTANCES {
        let mut r = rng(600 + seed);
        let s = any(&mut r, kinds(seed).0, 2);
        let m = r.gen_range(1..=2);
        let h = matrix(&mut r, m, 2, 1.0);
        let c = s.center().to_vec();
        let f: Vec<f64> = h.mul_vec(&c).iter().map(|v| v + r.gen_range(-0.2..0.5)).collect();
        let out = ops::halfspace_intersection(&s, &h, &f, None).unwrap();
        let a = s.complexity();
        assert_eq!(cx(&out), (a.n_g + m, a.n_b, a.n_c + m), "seed {seed}");
        let sat = |x: &[f64], tol: f64| h.mul_vec(x).iter().zip(&f).all(|(l, r)| *l <= r + tol);
        for x in samples(&s, SAMPLES, &mut r, &solver) {
            if sat(&x, -1e-6) {
                assert!(inside(&out, &x, &solver), "seed {seed}: lost {x:?}");
            } else if !sat(&x, 1e-6) {
                assert!(!inside(&out, &x, &solver), "seed {seed}: kept {x:?}");
            }
        }
        if is_empty(&out, &solver).unwrap() {
            continue;
        }
        for x in samples(&out, SAMPLES, &mut r, &solver) {
            assert!(sat(&x, MEMBER_TOL) && member(&s, &x, MEMBER_TOL), "seed {seed}");
        }
    }
}

pub fn union_is_exact() {
    let solver = Solver::default();
    for seed in 0..INSTANCES {
        let mut r = rng(700 + seed);
        let (ka, kb) = kinds(seed);
        let (s, t) = (any(&mut r, ka, 2), any(&mut r, kb, 2));
        let out: AnySet = ops::union(&s, &t).unwrap().into();
        let (a, b) = (s.complexity(), t.complexity());
        let nf = a.n_g + a.n_b + b.n_g + b.n_b;
        assert_eq!(cx(&out), (a.n_g + b.n_g + nf, a.n_b + b.n_b + 1, a.n_c + b.n_c + nf), "seed {seed}");
        for d in directions(&mut r, 2, 3) {
            let want = support(&s, &d, &solver).unwrap().max(support(&t, &d, &solver).unwrap());
            let got = support(&out, &d, &solver).unwrap();
            assert!((got - want).abs() <= SUPPORT_TOL * (1.0 + want.abs()), "seed {seed}");
        }
        for x in samples(&s, SAMPLES / 2, &mut r, &solver).into_iter().chain(samples(&t, SAMPLES / 2, &mut r, &solver)) {
            assert!(inside(&out, &x, &solver), "seed {seed}");
        }
        for x in samples(&out, SAMPLES, &mut r, &solver) {
            assert!(member(&s, &x, MEMBER_TOL) || member(&t, &x, MEMBER_TOL), "seed {seed}: {x:?}");
        }
    }
}

pub fn union_all_three_pieces() {
    let solver = Solver::default();
    for seed in 0..20 {
        let mut r = rng(750 + seed);
        let sets: Vec<AnySet> = (0..3).map(|k| any(&mut r, k, 2)).collect();
        let out = ops::union_all(&sets).unwrap();
        assert_eq!(out.complexity().n_b, sets.iter().map(|s| s.complexity().n_b).sum::<usize>() + 3);
        for s in &sets {
            for x in samples(s, 4, &mut r, &solver) {
                assert!(inside(&out, &x, &solver), "seed {seed}");
            }
        }
        for x in samples(&out, SAMPLES, &mut r, &solver) {
            assert!(sets.iter().any(|s| member(s, &x, MEMBER_TOL)), "seed {seed}");
        }
    }
}

pub fn convex_hull_support_is_max() {
    let solver = Solver::default();
    for seed in 0..INSTANCES {
        let mut r = rng(800 + seed);
        let (ka, kb) = kinds(seed);
        let (s, t) = (any(&mut r, ka % 2, 2), any(&mut r, kb % 2, 2));
        let out: AnySet = ops::convex_hull(&s, &t).unwrap().into();
        for d in directions(&mut r, 2, 6) {
            let want = support(&s, &d, &solver).unwrap().max(support(&t, &d, &solver).unwrap());
            let got = support(&out, &d, &solver).unwrap();
            assert!((got - want).abs() <= SUPPORT_TOL * (1.0 + want.abs()), "seed {seed}: {got} vs {want}");
        }
        let xs = samples(&s, SAMPLES, &mut r, &solver);
        let ys = samples(&t, SAMPLES, &mut r, &solver);
        for (x, y) in xs.iter().zip(&ys) {
            let l: f64 = r.gen();
            assert!(inside(&out, &[l * x[0] + (1.0 - l) * y[0], l * x[1] + (1.0 - l) * y[1]], &solver), "seed {seed}");
        }
    }
    let h = hybzono_core::AnySet::from(crate::common::hybzono(&mut rng(1), 2, 2, 1, 1));
    assert!(matches!(ops::convex_hull(&h, &h), Err(Error::Unsupported(_))));
}

fn zono_vertices(w: &hybzono_core::Zonotope) -> Vec<Vec<f64>> {
    hybzono_oracle::binary_vectors(w.n_g()).iter().map(|xi| w.point(xi)).collect()
}

pub fn pontryagin_difference_matches_definition() {
    let solver = Solver::default();
    let mut checked = 0;
    for seed in 0..INSTANCES {
        let mut r = rng(900 + seed);
        let s = any(&mut r, (seed % 2) as usize, 2);
        let ng = r.gen_range(1..=2);
        let w = hybzono_core::Zonotope::new(matrix(&mut r, 2, ng, 0.15), vector(&mut r, 2, 0.1)).unwrap();
        let verts = zono_vertices(&w);
        let out = ops::pontryagin_difference(&s, &AnySet::from(w.clone())).unwrap();
        let bb = hybzono_core::opt::bounding_box(&s, &solver).unwrap();
        let (lo, hi): (Vec<f64>, Vec<f64>) = bb.iter().map(|i| (i.lo, i.hi)).unzip();
        for y in box_points(&mut r, &lo, &hi, SAMPLES) {
            let all_in = |tol| verts.iter().all(|v| member(&s, &[y[0] + v[0], y[1] + v[1]], tol));
            let got = inside(&out, &y, &solver);
            if got {
                assert!(all_in(1e-6), "seed {seed}: {y:?} kept");
            } else {
                assert!(!all_in(1e-9), "seed {seed}: {y:?} lost");
            }
        }
        if is_empty(&out, &solver).unwrap() {
            continue;
        }
        checked += 1;
        for y in samples(&out, SAMPLES, &mut r, &solver) {
            for v in &verts {
                assert!(member(&s, &[y[0] + v[0], y[1] + v[1]], 1e-6), "seed {seed}");
            }
        }
    }
    assert!(checked >= 10, "only {checked} nonempty differences");
    let h = AnySet::from(crate::common::hybzono(&mut rng(2), 2, 2, 1, 1));
    let z = AnySet::from(crate::common::zono(&mut rng(3), 2, 1));
    assert!(matches!(ops::pontryagin_difference(&h, &z), Err(Error::Unsupported(_))));
}

pub fn projection_support_matches_lifted_direction() {
    let solver = Solver::default();
    for seed in 0..INSTANCES {
        let mut r = rng(1000 + seed);
        let s = any(&mut r, kinds(seed).0, 3);
        let out = ops::projection(&s, &[2, 0]).unwrap();
        assert_eq!(cx(&out), cx(&s));
        for d in directions(&mut r, 2, 4) {
            let lifted = [d[1], 0.0, d[0]];
            let (a, b) = (support(&out, &d, &solver).unwrap(), support(&s, &lifted, &solver).unwrap());
            assert!((a - b).abs() <= SUPPORT_TOL * (1.0 + b.abs()), "seed {seed}");
        }
    }
    let s = AnySet::from(crate::common::zono(&mut rng(4), 2, 2));
    assert!(ops::projection(&s, &[2]).is_err());
}

pub fn complexity_report_tracks_sets() {
    let mut r = rng(5);
    let s = any(&mut r, 2, 2);
    let rep = OpComplexityReport::of("sum", &ops::minkowski_sum(&s, &s).unwrap());
    let c = s.complexity();
    assert_eq!(rep.n_g_out, 2 * c.n_g);
    assert_eq!(rep.n_b_out, 2 * c.n_b);
    assert_eq!(rep.n_c_out, 2 * c.n_c);
    let _: Complexity = c;
    assert!(ops::minkowski_sum(&s, &any(&mut r, 0, 3)).is_err());
    assert!(ops::linear_map(&Matrix::identity(3), &s).is_err());
}
