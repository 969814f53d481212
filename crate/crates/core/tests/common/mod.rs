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

#![allow(dead_code)]

use hybzono_core::opt::sample_points;
use hybzono_core::{AnySet, ConZonotope, HybZonotope, Matrix, Solver, Zonotope};
use hybzono_oracle as oracle;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const MEMBER_TOL: f64 = 1e-7;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn matrix(rng: &mut ChaCha8Rng, r: usize, c: usize, scale: f64) -> Matrix {
    Matrix::from_fn(r, c, |_, _| scale * rng.gen_range(-1.0..1.0))
}

pub fn vector(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> Vec<f64> {
    (0..n).map(|_| scale * rng.gen_range(-1.0..1.0)).collect()
}

pub fn zono(rng: &mut ChaCha8Rng, n: usize, ng: usize) -> Zonotope {
    Zonotope::new(matrix(rng, n, ng, 1.0), vector(rng, n, 1.0)).unwrap()
}

/// Constraints are built around an interior factor so the set is nonempty.
pub fn conzono(rng: &mut ChaCha8Rng, n: usize, ng: usize, nc: usize) -> ConZonotope {
    let a = matrix(rng, nc, ng, 1.0);
    let xi0 = vector(rng, ng, 0.5);
    let b = a.mul_vec(&xi0);
    ConZonotope::new(matrix(rng, n, ng, 1.0), vector(rng, n, 1.0), a, b).unwrap()
}

pub fn hybzono(rng: &mut ChaCha8Rng, n: usize, ng: usize, nb: usize, nc: usize) -> HybZonotope {
    let ac = matrix(rng, nc, ng, 1.0);
    let ab = matrix(rng, nc, nb, 1.0);
    let xc: Vec<f64> = vector(rng, ng, 0.5);
    let xb: Vec<f64> = (0..nb).map(|_| if rng.gen_bool(0.5) { 1.0 } else { -1.0 }).collect();
    let b: Vec<f64> = ac.mul_vec(&xc).iter().zip(ab.mul_vec(&xb)).map(|(u, v)| u + v).collect();
    HybZonotope::new(matrix(rng, n, ng, 1.0), matrix(rng, n, nb, 1.0), vector(rng, n, 1.0), ac, ab, b).unwrap()
}

/// A random nonempty operand of representation index `kind` (0 zono, 1 conZono, 2 hybZono).
pub fn any(rng: &mut ChaCha8Rng, kind: usize, n: usize) -> AnySet {
    match kind {
        0 => {
            let ng = rng.gen_range(1..=3);
            zono(rng, n, ng).into()
        }
        1 => {
            let ng = rng.gen_range(2..=4);
            conzono(rng, n, ng, 1).into()
        }
        _ => {
            let ng = rng.gen_range(2..=3);
            let nb = rng.gen_range(1..=2);
            hybzono(rng, n, ng, nb, 1).into()
        }
    }
}

/// Brute-force membership: enumerates every binary vector and checks the LP
/// by basic-solution enumeration.
pub fn member(s: &AnySet, x: &[f64], tol: f64) -> bool {
    let h = s.to_hyb();
    oracle::hybzono_contains(
        &h.gc().to_rows(),
        &h.gb().to_rows(),
        h.c(),
        &h.ac().to_rows(),
        &h.ab().to_rows(),
        h.b(),
        x,
        tol,
    )
}

pub fn samples(s: &AnySet, count: usize, rng: &mut ChaCha8Rng, solver: &Solver) -> Vec<Vec<f64>> {
    let mut u = || rng.gen::<f64>();
    sample_points(s, count, &mut u, solver).unwrap()
}

pub fn directions(rng: &mut ChaCha8Rng, n: usize, count: usize) -> Vec<Vec<f64>> {
    (0..count).map(|_| vector(rng, n, 1.0)).collect()
}

pub fn box_points(rng: &mut ChaCha8Rng, lo: &[f64], hi: &[f64], count: usize) -> Vec<Vec<f64>> {
    (0..count)
        .map(|_| lo.iter().zip(hi).map(|(l, h)| rng.gen_range(*l..=*h)).collect())
        .collect()
}
