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

use hybzono_core::opt::{solve_lp, solve_milp, LinearProgram, MixedProgram, Outcome};
use hybzono_core::{Matrix, SolverOptions};
use hybzono_oracle as oracle;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Instance {
    c: Vec<f64>,
    a: Vec<Vec<f64>>,
    b: Vec<f64>,
    lo: Vec<f64>,
    hi: Vec<f64>,
}

/// Random bounded LP. A third of the instances use small integer data so
/// that degenerate vertices and ties are common; a tenth get an arbitrary
/// right-hand side and are often infeasible.
fn instance(rng: &mut ChaCha8Rng) -> Instance {
    let n = rng.gen_range(1..=10);
    let m = rng.gen_range(0..=4.min(n));
    let integral = rng.gen_bool(0.33);
    let draw = |rng: &mut ChaCha8Rng| if integral { rng.gen_range(-2..=2) as f64 } else { rng.gen_range(-1.0..1.0) };
    let a: Vec<Vec<f64>> = (0..m).map(|_| (0..n).map(|_| draw(rng)).collect()).collect();
    let c: Vec<f64> = (0..n).map(|_| draw(rng)).collect();
    let lo: Vec<f64> = (0..n).map(|_| if integral { -1.0 } else { rng.gen_range(-2.0..0.0) }).collect();
    let hi: Vec<f64> = lo.iter().map(|l| if integral { 1.0 } else { l + rng.gen_range(0.1..3.0) }).collect();
    let b = if rng.gen_bool(0.1) {
        (0..m).map(|_| rng.gen_range(-3.0..3.0)).collect()
    } else {
        let x0: Vec<f64> = lo.iter().zip(&hi).map(|(l, h)| if integral { rng.gen_range(-1..=1) as f64 } else { rng.gen_range(*l..*h) }).collect();
        a.iter().map(|r| oracle::dot(r, &x0)).collect()
    };
    Instance { c, a, b, lo, hi }
}

fn program(inst: &Instance) -> LinearProgram {
    let n = inst.c.len();
    let a = if inst.a.is_empty() { Matrix::zeros(0, n) } else { Matrix::from_rows(&inst.a).unwrap() };
    LinearProgram::new(inst.c.clone(), a, inst.b.clone(), inst.lo.clone(), inst.hi.clone()).unwrap()
}

pub fn simplex_matches_basis_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let opts = SolverOptions::default();
    let mut infeasible = 0;
    for k in 0..1000 {
        let inst = instance(&mut rng);
        let expected = oracle::lp_min(&inst.c, &inst.a, &inst.b, &inst.lo, &inst.hi, 1e-9);
        match (solve_lp(&program(&inst), &opts).unwrap(), expected) {
            (Outcome::Optimal { value, x }, Some(v)) => {
                assert!((value - v).abs() <= 1e-6, "instance {k}: {value} vs {v}");
                assert!(oracle::residual(&inst.a, &inst.b, &x) <= 1e-7, "instance {k}: residual");
            }
            (Outcome::Infeasible, None) => infeasible += 1,
            (got, want) => panic!("instance {k}: solver {got:?}, oracle {want:?}"),
        }
    }
    assert!(infeasible > 10, "generator should produce some infeasible instances");
}

pub fn zonotope_support_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let opts = SolverOptions::default();
    for _ in 0..200 {
        let n = rng.gen_range(1..=4);
        let ng = rng.gen_range(1..=8);
        let g: Vec<Vec<f64>> = (0..n).map(|_| (0..ng).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
        let c: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let d: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let gm = Matrix::from_rows(&g).unwrap();
        let obj: Vec<f64> = gm.tr_mul_vec(&d).iter().map(|v| -v).collect();
        let p = LinearProgram::new(obj, Matrix::zeros(0, ng), vec![], vec![-1.0; ng], vec![1.0; ng]).unwrap();
        let Outcome::Optimal { value, .. } = solve_lp(&p, &opts).unwrap() else { panic!() };
        let support = -value + oracle::dot(&d, &c);
        assert!((support - oracle::zonotope_support(&g, &c, &d)).abs() < 1e-9);
    }
}

pub fn milp_matches_leaf_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let opts = SolverOptions::default();
    for k in 0..200 {
        let inst = instance(&mut rng);
        let n = inst.c.len();
        let nb = rng.gen_range(0..=n.min(8));
        let mut lo = inst.lo.clone();
        let mut hi = inst.hi.clone();
        for j in 0..nb {
            lo[j] = -1.0;
            hi[j] = 1.0;
        }
        let lp = LinearProgram::new(inst.c.clone(), program(&inst).a_eq, inst.b.clone(), lo.clone(), hi.clone()).unwrap();
        let p = MixedProgram::new(lp, (0..nb).collect()).unwrap();
        let expected = oracle::binary_vectors(nb)
            .iter()
            .filter_map(|xb| {
                let (mut l, mut h) = (lo.clone(), hi.clone());
                l[..nb].copy_from_slice(xb);
                h[..nb].copy_from_slice(xb);
                oracle::lp_min(&inst.c, &inst.a, &inst.b, &l, &h, 1e-9)
            })
            .min_by(f64::total_cmp);
        match (solve_milp(&p, &opts).unwrap(), expected) {
            (Outcome::Optimal { value, x }, Some(v)) => {
                assert!((value - v).abs() <= 1e-6, "instance {k}: {value} vs {v}");
                assert!(x[..nb].iter().all(|&b| b == 1.0 || b == -1.0));
            }
            (Outcome::Infeasible, None) => {}
            (got, want) => panic!("instance {k}: solver {got:?}, oracle {want:?}"),
        }
    }
}
