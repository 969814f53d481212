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

//! Vertex/face extraction for sets in one, two or three dimensions.
//!
//! Zonotopes are meshed in closed form. Constrained zonotopes use an
//! expanding polytope driven by support LPs: every candidate face normal is
//! tested with one LP, and each improvement costs a second LP that breaks
//! ties towards a fixed generic direction so that the point added is a true
//! vertex rather than an interior point of a face.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::{dot, norm2, Matrix};
use crate::opt::{get_leaves, LinearProgram, Outcome, Solver};
use crate::sets::{AnySet, ConZonotope, HybZonotope, Zonotope};

/// Vertex rows and faces. A face with one index is a point, two a segment,
/// three or more a polygon.
#[derive(Clone, Debug, PartialEq)]
pub struct Mesh {
    pub vertices: Matrix,
    pub faces: Vec<Vec<usize>>,
}

impl Mesh {
    pub fn n_vertices(&self) -> usize {
        self.vertices.rows()
    }

    pub fn n_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn dim(&self) -> usize {
        self.vertices.cols()
    }

    /// Faces as a rectangular array padded with -1.
    pub fn padded_faces(&self) -> Vec<Vec<i64>> {
        let width = self.faces.iter().map(Vec::len).max().unwrap_or(0);
        self.faces
            .iter()
            .map(|f| {
                let mut row: Vec<i64> = f.iter().map(|&i| i as i64).collect();
                row.resize(width, -1);
                row
            })
            .collect()
    }

    /// Vertex rows with near-duplicates (within `tol`) removed, in order of
    /// first appearance.
    pub fn unique_vertices(&self, tol: f64) -> Vec<Vec<f64>> {
        let mut out: Vec<Vec<f64>> = Vec::new();
        for i in 0..self.n_vertices() {
            let v = self.vertices.row(i);
            if !out.iter().any(|u| u.iter().zip(v).all(|(a, b)| (a - b).abs() <= tol)) {
                out.push(v.to_vec());
            }
        }
        out
    }
}

/// Display attributes passed through to exporters untouched.
#[derive(Clone, Debug, PartialEq)]
pub struct PlotOptions {
    pub color: String,
    pub opacity: f64,
    pub edges: bool,
}

impl Default for PlotOptions {
    fn default() -> Self {
        PlotOptions {
            color: String::from("#1f77b4"),
            opacity: 0.6,
            edges: true,
        }
    }
}

const IMPROVE_TOL: f64 = 1e-8;
const MERGE_TOL: f64 = 1e-6;
const FLAT_TOL: f64 = 1e-8;
const PARALLEL_TOL: f64 = 1e-10;

/// Fixed tie-breaking direction; its entries are rationally independent so
/// it is orthogonal to no face normal of practical data.
const GENERIC: [f64; 3] = [0.7548776662466927, 0.5698402909980532, 0.324_717_957_244_746];

fn check_dim(n: usize) -> Result<()> {
    if !(1..=3).contains(&n) {
        return Err(Error::Unsupported(alloc::format!(
            "meshing needs dimension 1, 2 or 3, got {n}; project first"
        )));
    }
    Ok(())
}

pub fn mesh(s: &AnySet, solver: &Solver) -> Result<Vec<Mesh>> {
    match s {
        AnySet::Zono(z) => Ok(vec![mesh_zonotope(z)?]),
        AnySet::ConZono(z) => Ok(vec![mesh_conzonotope(z, solver)?]),
        AnySet::HybZono(h) => mesh_hybzonotope(h, solver),
    }
}

pub fn mesh_zonotope(z: &Zonotope) -> Result<Mesh> {
    let n = z.n();
    check_dim(n)?;
    let gens: Vec<Vec<f64>> = (0..z.n_g()).map(|k| z.g().col(k)).filter(|g| g.iter().any(|&v| v != 0.0)).collect();
    let c = z.c();
    match n {
        1 => {
            let r: f64 = gens.iter().map(|g| g[0].abs()).sum();
            Ok(if r == 0.0 {
                point_mesh(c)
            } else {
                Mesh {
                    vertices: Matrix::from_vec(2, 1, vec![c[0] - r, c[0] + r]),
                    faces: vec![vec![0, 1]],
                }
            })
        }
        2 => Ok(zonotope_polygon(c, gens)),
        _ => Ok(zonotope_faces_3d(c, &gens)),
    }
}

fn point_mesh(c: &[f64]) -> Mesh {
    Mesh {
        vertices: Matrix::from_vec(1, c.len(), c.to_vec()),
        faces: vec![vec![0]],
    }
}

/// Generators folded to the upper half plane, sorted by angle with parallel
/// ones summed; the boundary walks `+2g` in angle order, then `-2g`.
fn zonotope_polygon(c: &[f64], gens: Vec<Vec<f64>>) -> Mesh {
    let mut dirs: Vec<(f64, [f64; 2])> = gens
        .into_iter()
        .map(|g| {
            let g = if g[1] < 0.0 || (g[1] == 0.0 && g[0] < 0.0) { [-g[0], -g[1]] } else { [g[0], g[1]] };
            (libm::atan2(g[1], g[0]), g)
        })
        .collect();
    dirs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut merged: Vec<[f64; 2]> = Vec::new();
    let mut last_angle = f64::NAN;
    for (angle, g) in dirs {
        let parallel = merged
            .last()
            .is_some_and(|m| (m[0] * g[1] - m[1] * g[0]).abs() <= PARALLEL_TOL * norm2(m) * norm2(&g) || angle == last_angle);
        if parallel {
            let m = merged.last_mut().unwrap();
            m[0] += g[0];
            m[1] += g[1];
        } else {
            merged.push(g);
        }
        last_angle = angle;
    }
    if merged.is_empty() {
        return point_mesh(c);
    }
    let mut p = [c[0], c[1]];
    for g in &merged {
        p[0] -= g[0];
        p[1] -= g[1];
    }
    let mut pts = Vec::with_capacity(2 * merged.len());
    for sign in [2.0, -2.0] {
        for g in &merged {
            pts.push(p);
            p[0] += sign * g[0];
            p[1] += sign * g[1];
        }
    }
    if merged.len() == 1 {
        pts.truncate(2);
    }
    let k = pts.len();
    Mesh {
        vertices: Matrix::from_vec(k, 2, pts.into_iter().flatten().collect()),
        faces: vec![(0..k).collect()],
    }
}

fn cross(a: &[f64], b: &[f64]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

/// One parallelogram per generator pair and side; vertices are not shared.
fn zonotope_faces_3d(c: &[f64], gens: &[Vec<f64>]) -> Mesh {
    let ng = gens.len();
    let mut data = Vec::new();
    let mut faces = Vec::new();
    for i in 0..ng {
        for j in i + 1..ng {
            let nrm = cross(&gens[i], &gens[j]);
            if norm2(&nrm) < PARALLEL_TOL {
                continue;
            }
            for side in [1.0, -1.0] {
                let mut center = c.to_vec();
                for (k, g) in gens.iter().enumerate() {
                    if k == i || k == j {
                        continue;
                    }
                    let s = side * dot(&nrm, g);
                    let s = if s > 0.0 { 1.0 } else if s < 0.0 { -1.0 } else { 0.0 };
                    for r in 0..3 {
                        center[r] += s * g[r];
                    }
                }
                let corner = |a: f64, b: f64| -> [f64; 3] {
                    let mut p = [0.0; 3];
                    for r in 0..3 {
                        p[r] = center[r] + a * gens[i][r] + b * gens[j][r];
                    }
                    p
                };
                let quad = if side > 0.0 {
                    [corner(-1.0, -1.0), corner(1.0, -1.0), corner(1.0, 1.0), corner(-1.0, 1.0)]
                } else {
                    [corner(-1.0, -1.0), corner(-1.0, 1.0), corner(1.0, 1.0), corner(1.0, -1.0)]
                };
                let base = data.len() / 3;
                for p in quad {
                    data.extend_from_slice(&p);
                }
                faces.push((base..base + 4).collect());
            }
        }
    }
    if faces.is_empty() {
        // All generators parallel: a segment (or the center alone).
        let Some(first) = gens.first() else {
            return point_mesh(c);
        };
        let (mut lo, mut hi) = (c.to_vec(), c.to_vec());
        for g in gens {
            let s = if dot(g, first) >= 0.0 { 1.0 } else { -1.0 };
            for r in 0..3 {
                lo[r] -= s * g[r];
                hi[r] += s * g[r];
            }
        }
        return Mesh {
            vertices: Matrix::from_vec(2, 3, [lo, hi].concat()),
            faces: vec![vec![0, 1]],
        };
    }
    let rows = data.len() / 3;
    Mesh {
        vertices: Matrix::from_vec(rows, 3, data),
        faces,
    }
}

/// Support queries over a fixed constrained zonotope, reusing one program.
struct SupportLp<'a> {
    z: &'a ConZonotope,
    solver: &'a Solver,
    lp: LinearProgram,
    slab: LinearProgram,
}

impl<'a> SupportLp<'a> {
    fn new(z: &'a ConZonotope, solver: &'a Solver) -> Self {
        let ng = z.n_g();
        let lp = LinearProgram {
            objective: vec![0.0; ng],
            a_eq: z.a().clone(),
            b_eq: z.b().to_vec(),
            lower: vec![-1.0; ng],
            upper: vec![1.0; ng],
        };
        // Same program plus `d^T G xi - t = 0` with `t` pinned per query.
        let a = Matrix::vcat(
            ng + 1,
            &[
                &Matrix::hcat(z.n_c(), &[z.a(), &Matrix::zeros(z.n_c(), 1)]),
                &Matrix::zeros(1, ng + 1),
            ],
        );
        let mut b = z.b().to_vec();
        b.push(0.0);
        let mut lower = vec![-1.0; ng + 1];
        let mut upper = vec![1.0; ng + 1];
        lower[ng] = 0.0;
        upper[ng] = 0.0;
        let slab = LinearProgram {
            objective: vec![0.0; ng + 1],
            a_eq: a,
            b_eq: b,
            lower,
            upper,
        };
        SupportLp { z, solver, lp, slab }
    }

    fn image(&self, xi: &[f64]) -> Vec<f64> {
        let mut x = self.z.g().mul_vec(&xi[..self.z.n_g()]);
        for (xi, ci) in x.iter_mut().zip(self.z.c()) {
            *xi += ci;
        }
        x
    }

    /// `max d^T x` and a maximizer (not necessarily a vertex).
    fn support(&mut self, d: &[f64]) -> Result<(f64, Vec<f64>)> {
        let w = self.z.g().tr_mul_vec(d);
        for (o, wi) in self.lp.objective.iter_mut().zip(&w) {
            *o = -wi;
        }
        match self.solver.lp(&self.lp)? {
            Outcome::Optimal { x, .. } => {
                let p = self.image(&x);
                Ok((dot(d, &p), p))
            }
            Outcome::Infeasible => Err(Error::Empty),
            Outcome::Unbounded => Err(Error::Unbounded),
        }
    }

    /// A vertex of the face maximizing `d`, given its support value `sigma`.
    fn vertex_on_face(&mut self, d: &[f64], sigma: f64) -> Result<Vec<f64>> {
        let ng = self.z.n_g();
        let n = self.z.n();
        let w = self.z.g().tr_mul_vec(d);
        let row = self.slab.a_eq.rows() - 1;
        self.slab.a_eq.row_mut(row)[..ng].copy_from_slice(&w);
        self.slab.a_eq[(row, ng)] = -1.0;
        // Pinning the face exactly keeps the answer a true vertex; any slack
        // lets the tie-break slide along a nearly parallel neighbouring edge.
        let offset = sigma - dot(d, self.z.c());
        self.slab.lower[ng] = offset;
        self.slab.upper[ng] = offset;
        let r = self.z.g().tr_mul_vec(&GENERIC[..n]);
        for (o, ri) in self.slab.objective.iter_mut().zip(&r) {
            *o = -ri;
        }
        match self.solver.lp(&self.slab)? {
            Outcome::Optimal { x, .. } => Ok(self.image(&x)),
            // The slab should always contain the maximizer; fall back to it.
            _ => self.support(d).map(|(_, p)| p),
        }
    }

    fn vertex(&mut self, d: &[f64]) -> Result<(f64, Vec<f64>)> {
        let (sigma, _) = self.support(d)?;
        Ok((sigma, self.vertex_on_face(d, sigma)?))
    }
}

/// Expanding-polytope mesh of a full-dimensional constrained zonotope.
///
/// Each discovered vertex costs two LPs (support value, then the vertex of
/// that face picked by a fixed generic tie-break) and each final face one
/// confirming LP. In 2D that is exactly `3 n_v` calls; in 3D, with `2 n_v - 4`
/// triangles plus faces replaced along the way, measured costs stay below
/// `6 n_v + 16` (typically about `4.5 n_v`).
pub fn mesh_conzonotope(z: &ConZonotope, solver: &Solver) -> Result<Mesh> {
    let n = z.n();
    check_dim(n)?;
    let mut lp = SupportLp::new(z, solver);
    match n {
        1 => {
            let (hi, _) = lp.support(&[1.0])?;
            let (lo, _) = lp.support(&[-1.0])?;
            if hi + lo < FLAT_TOL {
                return Err(Error::Degenerate { direction: vec![1.0] });
            }
            Ok(Mesh {
                vertices: Matrix::from_vec(2, 1, vec![-lo, hi]),
                faces: vec![vec![0, 1]],
            })
        }
        2 => polygon(&mut lp),
        _ => polytope(&mut lp),
    }
}

fn normalize(v: &[f64]) -> Vec<f64> {
    let l = norm2(v);
    v.iter().map(|x| x / l).collect()
}

fn width(lp: &mut SupportLp<'_>, d: &[f64]) -> Result<f64> {
    let neg: Vec<f64> = d.iter().map(|v| -v).collect();
    Ok(lp.support(d)?.0 + lp.support(&neg)?.0)
}

fn polygon(lp: &mut SupportLp<'_>) -> Result<Mesh> {
    let r = &GENERIC[..2];
    let (_, a) = lp.support(r)?;
    let (_, b) = lp.support(&[-r[0], -r[1]])?;
    let u = [b[0] - a[0], b[1] - a[1]];
    if norm2(&u) < FLAT_TOL {
        return Err(Error::Degenerate { direction: normalize(r) });
    }
    let nrm = normalize(&[-u[1], u[0]]);
    if width(lp, &nrm)? < FLAT_TOL {
        return Err(Error::Degenerate { direction: nrm });
    }
    // a -> b is a chord; refine each side recursively in CCW order.
    let mut pts = vec![a.clone()];
    refine_edge(lp, &a, &b, &mut pts)?;
    pts.push(b.clone());
    refine_edge(lp, &b, &a, &mut pts)?;
    let k = pts.len();
    Ok(Mesh {
        vertices: Matrix::from_vec(k, 2, pts.into_iter().flatten().collect()),
        faces: vec![(0..k).collect()],
    })
}

/// Appends the vertices strictly between `p` and `q` (CCW) to `out`.
fn refine_edge(lp: &mut SupportLp<'_>, p: &[f64], q: &[f64], out: &mut Vec<Vec<f64>>) -> Result<()> {
    let nrm = normalize(&[q[1] - p[1], p[0] - q[0]]);
    let h = dot(&nrm, p);
    let (sigma, _) = lp.support(&nrm)?;
    if sigma <= h + IMPROVE_TOL {
        return Ok(());
    }
    let v = lp.vertex_on_face(&nrm, sigma)?;
    if dot(&nrm, &v) <= h + IMPROVE_TOL {
        return Ok(());
    }
    let close = |a: &[f64]| (a[0] - v[0]).abs() <= MERGE_TOL && (a[1] - v[1]).abs() <= MERGE_TOL;
    if close(p) || close(q) {
        return Ok(());
    }
    refine_edge(lp, p, &v, out)?;
    out.push(v.clone());
    refine_edge(lp, &v, q, out)
}

struct Face {
    v: [usize; 3],
    normal: [f64; 3],
    offset: f64,
    alive: bool,
    done: bool,
}

fn make_face(pts: &[Vec<f64>], v: [usize; 3]) -> Face {
    let (a, b, c) = (&pts[v[0]], &pts[v[1]], &pts[v[2]]);
    let n = cross(&[b[0] - a[0], b[1] - a[1], b[2] - a[2]], &[c[0] - a[0], c[1] - a[1], c[2] - a[2]]);
    let l = norm2(&n);
    if l == 0.0 {
        // Sliver: never probed, and swallowed by the next cone that reaches it.
        return Face {
            v,
            normal: [0.0; 3],
            offset: 0.0,
            alive: true,
            done: true,
        };
    }
    let normal = [n[0] / l, n[1] / l, n[2] / l];
    Face {
        v,
        normal,
        offset: dot(&normal, a),
        alive: true,
        done: false,
    }
}

/// Live triangles with a directed-edge index for adjacency.
struct Hull {
    pts: Vec<Vec<f64>>,
    faces: Vec<Face>,
    edges: BTreeMap<(usize, usize), usize>,
}

impl Hull {
    fn add_face(&mut self, v: [usize; 3]) {
        let id = self.faces.len();
        for (a, b) in [(v[0], v[1]), (v[1], v[2]), (v[2], v[0])] {
            self.edges.insert((a, b), id);
        }
        self.faces.push(make_face(&self.pts, v));
    }

    fn height(&self, f: usize, p: &[f64]) -> f64 {
        dot(&self.faces[f].normal, p) - self.faces[f].offset
    }

    /// Replaces the faces that see point `vi` with a cone of new faces.
    ///
    /// The removed region is grown from `seed` across shared edges and takes
    /// every face the point is above or coplanar with (within `tol`), so a
    /// vertex found on a triangulated facet re-fans the whole facet instead
    /// of folding part of it over.
    fn insert(&mut self, vi: usize, seed: usize, tol: f64) {
        let mut region = vec![seed];
        let mut seen = BTreeMap::new();
        seen.insert(seed, ());
        let mut head = 0;
        while head < region.len() {
            let t = self.faces[region[head]].v;
            head += 1;
            for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
                let Some(&g) = self.edges.get(&(b, a)) else { continue };
                if seen.contains_key(&g) || self.height(g, &self.pts[vi]) <= -tol {
                    continue;
                }
                seen.insert(g, ());
                region.push(g);
            }
        }
        let mut horizon = Vec::new();
        for &f in &region {
            let t = self.faces[f].v;
            for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
                let twin = self.edges.get(&(b, a)).copied();
                if twin.map_or(true, |g| !seen.contains_key(&g)) {
                    horizon.push((a, b));
                }
            }
        }
        for &f in &region {
            self.faces[f].alive = false;
            let t = self.faces[f].v;
            for e in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
                if self.edges.get(&e) == Some(&f) {
                    self.edges.remove(&e);
                }
            }
        }
        for (a, b) in horizon {
            self.add_face([a, b, vi]);
        }
    }
}

fn polytope(lp: &mut SupportLp<'_>) -> Result<Mesh> {
    let r = GENERIC.to_vec();
    let (_, p0) = lp.support(&r)?;
    let (_, p1) = lp.support(&[-r[0], -r[1], -r[2]])?;
    let u: Vec<f64> = (0..3).map(|i| p1[i] - p0[i]).collect();
    if norm2(&u) < FLAT_TOL {
        return Err(Error::Degenerate { direction: normalize(&r) });
    }
    // A direction orthogonal to the seed chord.
    let axis = (0..3).min_by(|&i, &j| u[i].abs().total_cmp(&u[j].abs())).unwrap();
    let mut e = [0.0; 3];
    e[axis] = 1.0;
    let d2 = normalize(&cross(&u, &e));
    let p2 = farthest(lp, &d2, |p| norm2(&cross(&u, &[p[0] - p0[0], p[1] - p0[1], p[2] - p0[2]])))?;
    let d3 = normalize(&cross(&u, &(0..3).map(|i| p2[i] - p0[i]).collect::<Vec<_>>()));
    let p3 = farthest(lp, &d3, |p| dot(&d3, p).abs())?;
    let plane = dot(&d3, &p0);
    if (dot(&d3, &p3) - plane).abs() < FLAT_TOL {
        return Err(Error::Degenerate { direction: d3 });
    }

    let scale = [&p0, &p1, &p2, &p3].iter().flat_map(|p| p.iter()).fold(1.0f64, |m, v| m.max(v.abs()));
    let coplanar = IMPROVE_TOL * scale;
    let centroid: Vec<f64> = (0..3).map(|i| [&p0, &p1, &p2, &p3].iter().map(|p| p[i]).sum::<f64>() / 4.0).collect();
    let mut hull = Hull {
        pts: vec![p0, p1, p2, p3],
        faces: Vec::new(),
        edges: BTreeMap::new(),
    };
    for tri in [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]] {
        let f = make_face(&hull.pts, tri);
        if dot(&f.normal, &centroid) > f.offset {
            hull.add_face([tri[0], tri[2], tri[1]]);
        } else {
            hull.add_face(tri);
        }
    }

    let mut k = 0;
    while k < hull.faces.len() {
        if !hull.faces[k].alive || hull.faces[k].done {
            k += 1;
            continue;
        }
        let normal = hull.faces[k].normal;
        let (sigma, _) = lp.support(&normal)?;
        if sigma <= hull.faces[k].offset + IMPROVE_TOL {
            hull.faces[k].done = true;
            k += 1;
            continue;
        }
        let v = lp.vertex_on_face(&normal, sigma)?;
        if hull.height(k, &v) <= IMPROVE_TOL || hull.pts.iter().any(|p| (0..3).all(|i| (p[i] - v[i]).abs() <= MERGE_TOL)) {
            hull.faces[k].done = true;
            k += 1;
            continue;
        }
        let vi = hull.pts.len();
        hull.pts.push(v);
        hull.insert(vi, k, coplanar);
        k = 0;
    }

    // Keep only vertices still referenced by a face.
    let alive: Vec<&Face> = hull.faces.iter().filter(|f| f.alive).collect();
    let mut remap = vec![usize::MAX; hull.pts.len()];
    let mut data = Vec::new();
    let mut count = 0;
    for f in &alive {
        for &i in &f.v {
            if remap[i] == usize::MAX {
                remap[i] = count;
                count += 1;
                data.extend_from_slice(&hull.pts[i]);
            }
        }
    }
    Ok(Mesh {
        vertices: Matrix::from_vec(count, 3, data),
        faces: alive.iter().map(|f| f.v.iter().map(|&i| remap[i]).collect()).collect(),
    })
}

/// Vertex for `d` or `-d`, whichever scores higher; flat sets are rejected.
fn farthest(lp: &mut SupportLp<'_>, d: &[f64], score: impl Fn(&[f64]) -> f64) -> Result<Vec<f64>> {
    let neg: Vec<f64> = d.iter().map(|v| -v).collect();
    let (s_pos, a) = lp.vertex(d)?;
    let (s_neg, b) = lp.vertex(&neg)?;
    if s_pos + s_neg < FLAT_TOL {
        return Err(Error::Degenerate { direction: d.to_vec() });
    }
    Ok(if score(&a) >= score(&b) { a } else { b })
}

/// One mesh per nonempty leaf, in leaf order.
pub fn mesh_hybzonotope(h: &HybZonotope, solver: &Solver) -> Result<Vec<Mesh>> {
    let leaves = get_leaves(h, solver)?;
    leaves.iter().map(|leaf| mesh_leaf(h, leaf, solver)).collect()
}

/// Meshes the leaf selected by `leaf`; errors carry the binary vector.
pub fn mesh_leaf(h: &HybZonotope, leaf: &[i8], solver: &Solver) -> Result<Mesh> {
    let xb: Vec<f64> = leaf.iter().map(|&b| b as f64).collect();
    h.leaf(&xb)
        .and_then(|z| mesh_conzonotope(&z, solver))
        .map_err(|e| Error::Leaf {
            binary: leaf.to_vec(),
            source: alloc::boxed::Box::new(e),
        })
}
