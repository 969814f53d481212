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

//! Brute-force reference computations for tests.
//!
//! Everything here works on plain `Vec<Vec<f64>>` rows and shares no code
//! with the library under test. Algorithms are chosen for obviousness, not
//! speed: linear programs are solved by enumerating bases, polytope vertices
//! by solving every square subsystem.

pub type Rows = Vec<Vec<f64>>;

/// Solves the square system `a x = b` by Gaussian elimination with partial
/// pivoting; `None` when singular.
pub fn solve_square(a: &Rows, b: &[f64]) -> Option<Vec<f64>> {
    let n = b.len();
    let mut m: Rows = a.iter().zip(b).map(|(r, &bi)| r.iter().copied().chain([bi]).collect()).collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
        if m[piv][col].abs() < 1e-11 {
            return None;
        }
        m.swap(col, piv);
        for i in 0..n {
            if i != col {
                let f = m[i][col] / m[col][col];
                for k in col..=n {
                    m[i][k] -= f * m[col][k];
                }
            }
        }
    }
    Some((0..n).map(|i| m[i][n] / m[i][i]).collect())
}

/// Rank and pivot-row selection of `a` by elimination.
fn independent_rows(a: &Rows) -> Vec<usize> {
    let mut basis: Rows = Vec::new();
    let mut picked = Vec::new();
    for (idx, row) in a.iter().enumerate() {
        let mut r = row.clone();
        for b in &basis {
            let lead = b.iter().position(|v| v.abs() > 1e-12).unwrap();
            let f = r[lead] / b[lead];
            for k in 0..r.len() {
                r[k] -= f * b[k];
            }
        }
        if r.iter().any(|v| v.abs() > 1e-9) {
            basis.push(r);
            picked.push(idx);
        }
    }
    picked
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Every basic solution of `a x = b`, `lo <= x <= hi` (finite bounds):
/// pick `rank(a)` basic columns, put every other variable at a bound.
/// Only a maximal independent set of rows is solved; callers check the
/// dropped rows (see [`lp_min`]).
pub fn basic_feasible_solutions(a: &Rows, b: &[f64], lo: &[f64], hi: &[f64], tol: f64) -> Vec<Vec<f64>> {
    let n = lo.len();
    let rows = independent_rows(a);
    let a: Rows = rows.iter().map(|&i| a[i].clone()).collect();
    let b: Vec<f64> = rows.iter().map(|&i| b[i]).collect();
    let r = rows.len();
    let mut out = Vec::new();
    for basic in subsets(n, r) {
        let nonbasic: Vec<usize> = (0..n).filter(|j| !basic.contains(j)).collect();
        for mask in 0u32..(1 << nonbasic.len()) {
            let mut x = vec![0.0; n];
            for (k, &j) in nonbasic.iter().enumerate() {
                x[j] = if mask >> k & 1 == 1 { hi[j] } else { lo[j] };
            }
            let rhs: Vec<f64> = (0..r)
                .map(|i| b[i] - nonbasic.iter().map(|&j| a[i][j] * x[j]).sum::<f64>())
                .collect();
            let sq: Rows = a.iter().map(|row| basic.iter().map(|&j| row[j]).collect()).collect();
            let Some(xb) = (if r == 0 { Some(vec![]) } else { solve_square(&sq, &rhs) }) else {
                continue;
            };
            for (k, &j) in basic.iter().enumerate() {
                x[j] = xb[k];
            }
            if (0..n).all(|j| x[j] >= lo[j] - tol && x[j] <= hi[j] + tol) {
                out.push(x);
            }
        }
    }
    out
}

/// `min c^T x` over `a x = b`, `lo <= x <= hi` (finite bounds) by basis
/// enumeration. `None` when infeasible. Redundant rows are checked for
/// consistency against every candidate.
pub fn lp_min(c: &[f64], a: &Rows, b: &[f64], lo: &[f64], hi: &[f64], tol: f64) -> Option<f64> {
    basic_feasible_solutions(a, b, lo, hi, tol)
        .into_iter()
        .filter(|x| residual(a, b, x) <= tol.max(1e-9) * 10.0)
        .map(|x| dot(c, &x))
        .min_by(f64::total_cmp)
}

pub fn lp_feasible(a: &Rows, b: &[f64], lo: &[f64], hi: &[f64], tol: f64) -> bool {
    lp_min(&vec![0.0; lo.len()], a, b, lo, hi, tol).is_some()
}

pub fn residual(a: &Rows, b: &[f64], x: &[f64]) -> f64 {
    a.iter().zip(b).map(|(r, bi)| (dot(r, x) - bi).abs()).fold(0.0, f64::max)
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `max_{xi in [-1,1]^k} d^T (G xi + c) = d^T c + sum_i |d^T g_i|` with `g`
/// given as rows of `G`.
pub fn zonotope_support(g: &Rows, c: &[f64], d: &[f64]) -> f64 {
    let k = g.first().map_or(0, |r| r.len());
    dot(d, c) + (0..k).map(|j| g.iter().zip(d).map(|(r, di)| r[j] * di).sum::<f64>().abs()).sum::<f64>()
}

pub fn hrep_contains(h: &Rows, f: &[f64], x: &[f64], tol: f64) -> bool {
    h.iter().zip(f).all(|(r, fi)| dot(r, x) <= fi + tol)
}

/// Vertices of `{x | H x <= f}` from every `n`-subset of rows, deduplicated.
pub fn hrep_vertices(h: &Rows, f: &[f64]) -> Rows {
    let n = h.first().map_or(0, |r| r.len());
    let mut out: Rows = Vec::new();
    for rows in subsets(h.len(), n) {
        let a: Rows = rows.iter().map(|&i| h[i].clone()).collect();
        let b: Vec<f64> = rows.iter().map(|&i| f[i]).collect();
        if let Some(x) = solve_square(&a, &b) {
            if hrep_contains(h, f, &x, 1e-9) && !out.iter().any(|v| dist(v, &x) < 1e-7) {
                out.push(x);
            }
        }
    }
    out
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Counter-clockwise hull of planar points (monotone chain), no collinear
/// points kept.
pub fn hull_2d(points: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let mut p = points.to_vec();
    p.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    p.dedup_by(|a, b| (a[0] - b[0]).abs() < 1e-12 && (a[1] - b[1]).abs() < 1e-12);
    if p.len() < 3 {
        return p;
    }
    let cross = |o: [f64; 2], a: [f64; 2], b: [f64; 2]| (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    let mut hull: Vec<[f64; 2]> = Vec::new();
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &[f64; 2]>> = if pass == 0 { Box::new(p.iter()) } else { Box::new(p.iter().rev()) };
        for &q in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], q) <= 1e-12 {
                hull.pop();
            }
            hull.push(q);
        }
        hull.pop();
    }
    hull
}

pub fn polygon_area(poly: &[[f64; 2]]) -> f64 {
    let n = poly.len();
    0.5 * (0..n)
        .map(|i| {
            let (a, b) = (poly[i], poly[(i + 1) % n]);
            a[0] * b[1] - a[1] * b[0]
        })
        .sum::<f64>()
        .abs()
}

/// Area of the planar zonotope with generator columns `g` (2 x k):
/// `4 * sum_{i<j} |det[g_i g_j]|` for factors in [-1, 1].
pub fn zonotope_area(g: &Rows) -> f64 {
    let k = g[0].len();
    let mut area = 0.0;
    for i in 0..k {
        for j in i + 1..k {
            area += (g[0][i] * g[1][j] - g[1][i] * g[0][j]).abs();
        }
    }
    4.0 * area
}

/// Membership in the constrained zonotope `{G xi + c | A xi = b, |xi| <= 1}`
/// by brute-force LP feasibility.
pub fn conzono_contains(g: &Rows, c: &[f64], a: &Rows, b: &[f64], x: &[f64], tol: f64) -> bool {
    let k = g.first().or(a.first()).map_or(0, |r| r.len());
    let mut rows = a.clone();
    let mut rhs = b.to_vec();
    for (i, r) in g.iter().enumerate() {
        rows.push(r.clone());
        rhs.push(x[i] - c[i]);
    }
    lp_feasible(&rows, &rhs, &vec![-1.0; k], &vec![1.0; k], tol)
}

/// Hybrid membership: some binary vector gives a feasible continuous leaf.
#[allow(clippy::too_many_arguments)]
pub fn hybzono_contains(gc: &Rows, gb: &Rows, c: &[f64], ac: &Rows, ab: &Rows, b: &[f64], x: &[f64], tol: f64) -> bool {
    binary_vectors(gb.first().or(ab.first()).map_or(0, |r| r.len()))
        .iter()
        .any(|xb| {
            let (cc, bb) = leaf_data(gb, c, ab, b, xb);
            conzono_contains(gc, &cc, ac, &bb, x, tol)
        })
}

/// Center and right-hand side of the leaf selected by `xb`.
pub fn leaf_data(gb: &Rows, c: &[f64], ab: &Rows, b: &[f64], xb: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let cc = c.iter().zip(gb).map(|(ci, r)| ci + dot(r, xb)).collect();
    let bb = b.iter().enumerate().map(|(i, bi)| bi - ab.get(i).map_or(0.0, |r| dot(r, xb))).collect();
    (cc, bb)
}

/// All of {-1, 1}^n in lexicographic order.
pub fn binary_vectors(n: usize) -> Vec<Vec<f64>> {
    (0..1usize << n)
        .map(|m| (0..n).map(|k| if m >> (n - 1 - k) & 1 == 1 { 1.0 } else { -1.0 }).collect())
        .collect()
}

/// Nonempty leaves by checking all `2^{n_b}` binary vectors.
pub fn nonempty_leaves(ac: &Rows, ab: &Rows, b: &[f64], n_g: usize, n_b: usize, tol: f64) -> Vec<Vec<f64>> {
    binary_vectors(n_b)
        .into_iter()
        .filter(|xb| {
            let bb: Vec<f64> = b.iter().enumerate().map(|(i, bi)| bi - dot(&ab[i], xb)).collect();
            lp_feasible(ac, &bb, &vec![-1.0; n_g], &vec![1.0; n_g], tol)
        })
        .collect()
}

/// Distance from `x` to the segment `[p, q]`.
pub fn segment_distance(p: &[f64], q: &[f64], x: &[f64]) -> f64 {
    let d: Vec<f64> = q.iter().zip(p).map(|(a, b)| a - b).collect();
    let len2 = dot(&d, &d);
    let t = if len2 == 0.0 {
        0.0
    } else {
        (x.iter().zip(p).map(|(a, b)| a - b).zip(&d).map(|(a, b)| a * b).sum::<f64>() / len2).clamp(0.0, 1.0)
    };
    let proj: Vec<f64> = p.iter().zip(&d).map(|(a, b)| a + t * b).collect();
    dist(&proj, x)
}

/// Forward pass of a ReLU network; the last layer is affine.
pub fn relu_forward(weights: &[Rows], biases: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    let mut h = x.to_vec();
    for (l, (w, b)) in weights.iter().zip(biases).enumerate() {
        let mut v: Vec<f64> = w.iter().zip(b).map(|(r, bi)| dot(r, &h) + bi).collect();
        if l + 1 < weights.len() {
            for vi in &mut v {
                *vi = vi.max(0.0);
            }
        }
        h = v;
    }
    h
}
