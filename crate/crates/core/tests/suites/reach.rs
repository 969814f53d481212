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
use hybzono_core::opt::{bounding_box, contains_point, support};
use hybzono_core::reach::{
    build_affine_update_set, build_linear_update_set, interval, reach_tube, step_linear, step_mld, step_pwa, successor, LinearSystem, MldSystem, StateUpdateSet,
};
use hybzono_core::{ops, AnySet, HybZonotope, Matrix, Solver, Zonotope};
use rand::Rng;

fn inside(s: &AnySet, x: &[f64], solver: &Solver) -> bool {
    contains_point(s, x, solver).unwrap()
}

fn cover_box(s: &AnySet, solver: &Solver, pad: f64) -> AnySet {
    let bb = bounding_box(s, solver).unwrap();
    let lo: Vec<f64> = bb.iter().map(|i| i.lo - pad).collect();
    let hi: Vec<f64> = bb.iter().map(|i| i.hi + pad).collect();
    Zonotope::from_box(&lo, &hi).unwrap().into()
}

pub fn successor_matches_direct_step() {
    let solver = Solver::default();
    let mut total = 0;
    for seed in 0..20 {
        let mut r = rng(seed);
        let sys = LinearSystem::new(matrix(&mut r, 2, 2, 1.0), matrix(&mut r, 2, 1, 1.0)).unwrap();
        let x0 = any(&mut r, 1 + (seed % 2) as usize, 2);
        let u = interval(-0.5, 0.5).unwrap();
        let d = cover_box(&ops::cartesian_product(&x0, &u).unwrap(), &solver, 0.5);
        let psi = build_linear_update_set(&sys, &d).unwrap();
        let via_psi = successor(&psi, &x0, Some(&u)).unwrap();
        let direct = step_linear(&sys, &x0, &u).unwrap();

        let xs = samples(&x0, 250, &mut r, &solver);
        for x in &xs {
            let v = r.gen_range(-0.5..=0.5);
            let y = sys.a.mul_vec(x).iter().zip(sys.b.col(0)).map(|(a, b)| a + b * v).collect::<Vec<_>>();
            assert!(inside(&via_psi, &y, &solver), "seed {seed}: image lost");
            total += 1;
        }
        for y in samples(&via_psi, 250, &mut r, &solver) {
            assert!(inside(&direct, &y, &solver), "seed {seed}: spurious successor point");
            total += 1;
        }
        for dir in directions(&mut r, 2, 8) {
            let (a, b) = (support(&via_psi, &dir, &solver).unwrap(), support(&direct, &dir, &solver).unwrap());
            assert!((a - b).abs() <= 1e-6 * (1.0 + b.abs()), "seed {seed}");
        }
    }
    assert_eq!(total, 10_000);
}

fn rot(scale: f64, th: f64) -> Matrix {
    Matrix::from_rows(&[[scale * th.cos(), -scale * th.sin()], [scale * th.sin(), scale * th.cos()]]).unwrap()
}

const X_BOUND: f64 = 2.0;
const Z_BOUND: f64 = 6.0;

struct Pwa {
    a1: Matrix,
    a2: Matrix,
    f2: Vec<f64>,
}

impl Pwa {
    fn new() -> Self {
        Pwa {
            a1: rot(0.8, 0.5),
            a2: rot(0.7, -0.6),
            f2: vec![0.1, -0.2],
        }
    }

    fn update_sets(&self) -> Vec<StateUpdateSet> {
        let left: AnySet = Zonotope::from_box(&[-X_BOUND, -X_BOUND], &[0.0, X_BOUND]).unwrap().into();
        let right: AnySet = Zonotope::from_box(&[0.0, -X_BOUND], &[X_BOUND, X_BOUND]).unwrap().into();
        let none = Matrix::zeros(2, 0);
        vec![
            build_linear_update_set(&LinearSystem::new(self.a1.clone(), none.clone()).unwrap(), &left).unwrap(),
            build_affine_update_set(&LinearSystem::new(self.a2.clone(), none).unwrap(), &self.f2, &right).unwrap(),
        ]
    }

    /// Big-M model: `x+ = A1 x + z` with `w = (z, delta)`, `delta = 1` on the
    /// right half, and `z = delta ((A2 - A1) x + f2)`.
    fn mld(&self) -> (MldSystem, AnySet) {
        let m = X_BOUND;
        let mz = Z_BOUND;
        let da = Matrix::from_fn(2, 2, |i, j| self.a2[(i, j)] - self.a1[(i, j)]);
        let mut ex = Vec::new();
        let mut ew = Vec::new();
        let mut ef = Vec::new();
        let mut row = |x: [f64; 2], w: [f64; 3], f: f64| {
            ex.push(x);
            ew.push(w);
            ef.push(f);
        };
        // region selection
        row([1.0, 0.0], [0.0, 0.0, -m], 0.0);
        row([-1.0, 0.0], [0.0, 0.0, m], m);
        // state domain
        row([1.0, 0.0], [0.0; 3], X_BOUND);
        row([-1.0, 0.0], [0.0; 3], X_BOUND);
        row([0.0, 1.0], [0.0; 3], X_BOUND);
        row([0.0, -1.0], [0.0; 3], X_BOUND);
        for i in 0..2 {
            let mut e = [0.0; 3];
            e[i] = 1.0;
            row([0.0; 2], [e[0], e[1], -mz], 0.0);
            row([0.0; 2], [-e[0], -e[1], -mz], 0.0);
            row([-da[(i, 0)], -da[(i, 1)]], [e[0], e[1], mz], mz + self.f2[i]);
            row([da[(i, 0)], da[(i, 1)]], [-e[0], -e[1], mz], mz - self.f2[i]);
        }
        let ne = ef.len();
        let sys = MldSystem {
            a: self.a1.clone(),
            b_u: Matrix::zeros(2, 0),
            b_w: Matrix::from_rows(&[[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]).unwrap(),
            b_aff: vec![0.0; 2],
            e_x: Matrix::from_rows(&ex).unwrap(),
            e_u: Matrix::zeros(ne, 0),
            e_w: Matrix::from_rows(&ew).unwrap(),
            e_aff: ef,
        };
        let w = HybZonotope::new(
            Matrix::from_rows(&[[mz, 0.0], [0.0, mz], [0.0, 0.0]]).unwrap(),
            Matrix::from_rows(&[[0.0], [0.0], [0.5]]).unwrap(),
            vec![0.0, 0.0, 0.5],
            Matrix::zeros(0, 2),
            Matrix::zeros(0, 1),
            vec![],
        )
        .unwrap();
        (sys, w.into())
    }

    fn step(&self, x: &[f64]) -> Vec<Vec<f64>> {
        let mut out = Vec::new();
        if x[0] <= 0.0 {
            out.push(self.a1.mul_vec(x));
        }
        if x[0] >= 0.0 {
            out.push(self.a2.mul_vec(x).iter().zip(&self.f2).map(|(a, b)| a + b).collect());
        }
        out
    }
}

pub fn mld_and_pwa_agree() {
    let solver = Solver::default();
    let pwa = Pwa::new();
    let psis = pwa.update_sets();
    let (mld, w) = pwa.mld();
    let r0: AnySet = Zonotope::new(Matrix::from_rows(&[[0.6, 0.2], [0.1, 0.5]]).unwrap(), vec![0.3, 0.4]).unwrap().into();
    let (mut a, mut b) = (r0.clone(), r0);
    let mut r = rng(77);
    let mut checked = 0;
    for step in 1..=3 {
        let next_a = step_pwa(&psis, &a).unwrap();
        let next_b = step_mld(&mld, &b, None, Some(&w)).unwrap();
        // true images of samples of the previous set land in both
        for x in samples(&a, 600, &mut r, &solver) {
            for y in pwa.step(&x) {
                assert!(inside(&next_a, &y, &solver) && inside(&next_b, &y, &solver), "step {step}");
                checked += 1;
            }
        }
        for y in samples(&next_a, 1400, &mut r, &solver) {
            assert!(inside(&next_b, &y, &solver), "step {step}: pwa point missing from mld");
            checked += 1;
        }
        for y in samples(&next_b, 1400, &mut r, &solver) {
            assert!(inside(&next_a, &y, &solver), "step {step}: mld point missing from pwa");
            checked += 1;
        }
        a = next_a;
        b = next_b;
    }
    assert!(checked >= 10_000, "{checked}");
}

pub fn tube_increments_are_constant() {
    let solver = Solver::default();
    let pwa = Pwa::new();
    let sets: Vec<AnySet> = pwa.update_sets().into_iter().map(|p| p.set).collect();
    let phi = StateUpdateSet::new(ops::union_all(&sets).unwrap(), 2, 0).unwrap();
    let c = phi.set.complexity();
    let r0: AnySet = Zonotope::from_box(&[0.2, 0.2], &[0.6, 0.7]).unwrap().into();
    let tube = reach_tube(|s| successor(&phi, s, None), &r0, 5, Some(&solver)).unwrap();
    let deltas: Vec<(i64, i64, i64)> = tube
        .reports
        .windows(2)
        .map(|w| (w[1].n_g_out as i64 - w[0].n_g_out as i64, w[1].n_b_out as i64 - w[0].n_b_out as i64, w[1].n_c_out as i64 - w[0].n_c_out as i64))
        .collect();
    let want = (c.n_g as i64, c.n_b as i64, c.n_c as i64 + 2);
    assert!(deltas.iter().all(|&d| d == want), "{deltas:?} vs {want:?}");
    assert!(tube.leaf_counts.iter().all(|l| l.is_some_and(|n| n >= 1)));
    for (k, s) in tube.sets.iter().enumerate() {
        assert_eq!(s.complexity().n_g, tube.reports[k].n_g_out);
    }
}
