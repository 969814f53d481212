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

//! The three zonotopic set representations and the conversions between them.
//!
//! * [`Zonotope`]: `{ G xi + c | ||xi||_inf <= 1 }`
//! * [`ConZonotope`]: a zonotope whose factors also satisfy `A xi = b`
//! * [`HybZonotope`]: continuous factors in `[-1, 1]` plus binary factors in
//!   `{-1, 1}`, coupled by `Ac xi_c + Ab xi_b = b`
//!
//! A hybrid zonotope with `n_b = 0` is a constrained zonotope, and one with
//! `n_c = 0` as well is a zonotope. [`AnySet`] carries a representation tag
//! so that operations can return the least expressive representation that
//! holds their result.

mod construct;

pub use construct::{from_hrep, from_hrep_union, from_hrep_with, from_vertices, VertexIncidence};

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::{self, Matrix};

/// Absent blocks arrive as zero-size matrices of arbitrary shape; give them
/// the shape implied by the other blocks when that shape is zero-size too.
fn fit_empty(m: Matrix, rows: usize, cols: usize) -> Matrix {
    if m.rows() * m.cols() == 0 && rows * cols == 0 && (m.rows() != rows || m.cols() != cols)
        && (m.rows() == rows || m.rows() == 0 || m.cols() == 0) {
            return Matrix::zeros(rows, if m.rows() == rows { m.cols() } else { cols });
        }
    m
}

/// Representation tag, ordered by expressiveness.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rep {
    Zono,
    ConZono,
    HybZono,
}

impl Rep {
    pub fn name(self) -> &'static str {
        match self {
            Rep::Zono => "zono",
            Rep::ConZono => "conZono",
            Rep::HybZono => "hybZono",
        }
    }

    pub fn from_name(name: &str) -> Option<Rep> {
        match name {
            "zono" => Some(Rep::Zono),
            "conZono" => Some(Rep::ConZono),
            "hybZono" => Some(Rep::HybZono),
            _ => None,
        }
    }
}

/// Generator, binary and constraint counts of a set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Complexity {
    pub n_g: usize,
    pub n_b: usize,
    pub n_c: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Zonotope {
    g: Matrix,
    c: Vec<f64>,
}

impl Zonotope {
    pub fn new(g: Matrix, c: Vec<f64>) -> Result<Self> {
        if g.rows() != c.len() {
            return Err(Error::dim(format!(
                "generator matrix has {} rows but center has length {}",
                g.rows(),
                c.len()
            )));
        }
        Ok(Zonotope { g, c })
    }

    pub fn singleton(c: Vec<f64>) -> Self {
        Zonotope {
            g: Matrix::zeros(c.len(), 0),
            c,
        }
    }

    /// Axis-aligned box `[lo, hi]`.
    pub fn from_box(lo: &[f64], hi: &[f64]) -> Result<Self> {
        if lo.len() != hi.len() {
            return Err(Error::dim("box bounds of different length"));
        }
        if lo.iter().zip(hi).any(|(l, h)| l > h) {
            return Err(Error::arg("box lower bound exceeds upper bound"));
        }
        let half: Vec<f64> = lo.iter().zip(hi).map(|(l, h)| 0.5 * (h - l)).collect();
        let mid = lo.iter().zip(hi).map(|(l, h)| 0.5 * (h + l)).collect();
        Ok(Zonotope {
            g: Matrix::from_diag(&half),
            c: mid,
        })
    }

    pub fn g(&self) -> &Matrix {
        &self.g
    }

    pub fn c(&self) -> &[f64] {
        &self.c
    }

    pub fn n(&self) -> usize {
        self.c.len()
    }

    pub fn n_g(&self) -> usize {
        self.g.cols()
    }

    pub fn point(&self, xi: &[f64]) -> Vec<f64> {
        matrix::add(&self.g.mul_vec(xi), &self.c)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConZonotope {
    g: Matrix,
    c: Vec<f64>,
    a: Matrix,
    b: Vec<f64>,
}

impl ConZonotope {
    pub fn new(g: Matrix, c: Vec<f64>, a: Matrix, b: Vec<f64>) -> Result<Self> {
        if g.rows() != c.len() {
            return Err(Error::dim(format!(
                "generator matrix has {} rows but center has length {}",
                g.rows(),
                c.len()
            )));
        }
        if a.rows() != b.len() {
            return Err(Error::dim(format!(
                "constraint matrix has {} rows but b has length {}",
                a.rows(),
                b.len()
            )));
        }
        let a = fit_empty(a, b.len(), g.cols());
        if a.cols() != g.cols() {
            return Err(Error::dim(format!(
                "G has {} columns but A has {}",
                g.cols(),
                a.cols()
            )));
        }
        Ok(ConZonotope { g, c, a, b })
    }

    pub fn g(&self) -> &Matrix {
        &self.g
    }

    pub fn c(&self) -> &[f64] {
        &self.c
    }

    pub fn a(&self) -> &Matrix {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn n(&self) -> usize {
        self.c.len()
    }

    pub fn n_g(&self) -> usize {
        self.g.cols()
    }

    pub fn n_c(&self) -> usize {
        self.b.len()
    }

    pub fn point(&self, xi: &[f64]) -> Vec<f64> {
        matrix::add(&self.g.mul_vec(xi), &self.c)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HybZonotope {
    gc: Matrix,
    gb: Matrix,
    c: Vec<f64>,
    ac: Matrix,
    ab: Matrix,
    b: Vec<f64>,
}

impl HybZonotope {
    pub fn new(gc: Matrix, gb: Matrix, c: Vec<f64>, ac: Matrix, ab: Matrix, b: Vec<f64>) -> Result<Self> {
        let n = c.len();
        let n_c = b.len();
        let gc = fit_empty(gc, n, 0);
        let gb = fit_empty(gb, n, 0);
        let ac = fit_empty(ac, n_c, gc.cols());
        let ab = fit_empty(ab, n_c, gb.cols());
        if gc.rows() != n || gb.rows() != n {
            return Err(Error::dim(format!(
                "Gc ({} rows) and Gb ({} rows) must match the center length {n}",
                gc.rows(),
                gb.rows()
            )));
        }
        if ac.rows() != n_c || ab.rows() != n_c {
            return Err(Error::dim(format!(
                "Ac ({} rows) and Ab ({} rows) must match the length of b ({n_c})",
                ac.rows(),
                ab.rows()
            )));
        }
        if ac.cols() != gc.cols() {
            return Err(Error::dim(format!(
                "Gc has {} columns but Ac has {}",
                gc.cols(),
                ac.cols()
            )));
        }
        if ab.cols() != gb.cols() {
            return Err(Error::dim(format!(
                "Gb has {} columns but Ab has {}",
                gb.cols(),
                ab.cols()
            )));
        }
        Ok(HybZonotope { gc, gb, c, ac, ab, b })
    }

    /// Builds a hybrid zonotope whose binary factors take values in `{0, 1}`
    /// by remapping them affinely onto `{-1, 1}`: with `beta01 = (1 + beta) / 2`
    /// the binary blocks are halved and their half-sums move into `c` and `b`.
    pub fn from_zero_one_binaries(
        gc: Matrix,
        gb01: Matrix,
        c: Vec<f64>,
        ac: Matrix,
        ab01: Matrix,
        b: Vec<f64>,
    ) -> Result<Self> {
        let h = HybZonotope::new(gc, gb01, c, ac, ab01, b)?;
        let shift_c = h.gb.row_sums();
        let shift_b = h.ab.row_sums();
        let c = h.c.iter().zip(&shift_c).map(|(c, s)| c + 0.5 * s).collect();
        let b = h.b.iter().zip(&shift_b).map(|(b, s)| b - 0.5 * s).collect();
        HybZonotope::new(h.gc, h.gb.scale(0.5), c, h.ac, h.ab.scale(0.5), b)
    }

    pub fn gc(&self) -> &Matrix {
        &self.gc
    }

    pub fn gb(&self) -> &Matrix {
        &self.gb
    }

    pub fn c(&self) -> &[f64] {
        &self.c
    }

    pub fn ac(&self) -> &Matrix {
        &self.ac
    }

    pub fn ab(&self) -> &Matrix {
        &self.ab
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn n(&self) -> usize {
        self.c.len()
    }

    pub fn n_g(&self) -> usize {
        self.gc.cols()
    }

    pub fn n_b(&self) -> usize {
        self.gb.cols()
    }

    pub fn n_c(&self) -> usize {
        self.b.len()
    }

    pub fn complexity(&self) -> Complexity {
        Complexity {
            n_g: self.n_g(),
            n_b: self.n_b(),
            n_c: self.n_c(),
        }
    }

    /// Image of a factor assignment (constraints are not checked).
    pub fn point(&self, xi_c: &[f64], xi_b: &[f64]) -> Vec<f64> {
        let mut x = self.gc.mul_vec(xi_c);
        for (xi, v) in x.iter_mut().zip(self.gb.mul_vec(xi_b)) {
            *xi += v;
        }
        matrix::add(&x, &self.c)
    }

    /// Infinity-norm residual of `Ac xi_c + Ab xi_b - b`.
    pub fn constraint_residual(&self, xi_c: &[f64], xi_b: &[f64]) -> f64 {
        let lhs = matrix::add(&self.ac.mul_vec(xi_c), &self.ab.mul_vec(xi_b));
        matrix::norm_inf(&matrix::sub(&lhs, &self.b))
    }

    /// Constrained zonotope obtained by fixing the binary factors:
    /// `<Gc, c + Gb xi_b, Ac, b - Ab xi_b>`. The result may be empty.
    pub fn leaf(&self, xi_b: &[f64]) -> Result<ConZonotope> {
        if xi_b.len() != self.n_b() {
            return Err(Error::dim(format!(
                "binary vector has length {} but the set has {} binary factors",
                xi_b.len(),
                self.n_b()
            )));
        }
        if xi_b.iter().any(|&v| v != 1.0 && v != -1.0) {
            return Err(Error::arg("binary factors must be -1 or 1"));
        }
        let c = matrix::add(&self.c, &self.gb.mul_vec(xi_b));
        let b = matrix::sub(&self.b, &self.ab.mul_vec(xi_b));
        ConZonotope::new(self.gc.clone(), c, self.ac.clone(), b)
    }

    /// Generators `[Gc Gb]` side by side.
    pub fn all_generators(&self) -> Matrix {
        Matrix::hcat(self.n(), &[&self.gc, &self.gb])
    }

    /// Constraint matrix `[Ac Ab]` side by side.
    pub fn all_constraints(&self) -> Matrix {
        Matrix::hcat(self.n_c(), &[&self.ac, &self.ab])
    }

    pub(crate) fn into_parts(self) -> (Matrix, Matrix, Vec<f64>, Matrix, Matrix, Vec<f64>) {
        (self.gc, self.gb, self.c, self.ac, self.ab, self.b)
    }
}

impl From<Zonotope> for ConZonotope {
    fn from(z: Zonotope) -> Self {
        let n_g = z.n_g();
        ConZonotope {
            g: z.g,
            c: z.c,
            a: Matrix::zeros(0, n_g),
            b: Vec::new(),
        }
    }
}

impl From<ConZonotope> for HybZonotope {
    fn from(z: ConZonotope) -> Self {
        let (n, n_c) = (z.n(), z.n_c());
        HybZonotope {
            gc: z.g,
            gb: Matrix::zeros(n, 0),
            c: z.c,
            ac: z.a,
            ab: Matrix::zeros(n_c, 0),
            b: z.b,
        }
    }
}

impl From<Zonotope> for HybZonotope {
    fn from(z: Zonotope) -> Self {
        HybZonotope::from(ConZonotope::from(z))
    }
}

/// A set in any of the three representations.
#[derive(Clone, Debug, PartialEq)]
pub enum AnySet {
    Zono(Zonotope),
    ConZono(ConZonotope),
    HybZono(HybZonotope),
}

impl From<Zonotope> for AnySet {
    fn from(z: Zonotope) -> Self {
        AnySet::Zono(z)
    }
}

impl From<ConZonotope> for AnySet {
    fn from(z: ConZonotope) -> Self {
        AnySet::ConZono(z)
    }
}

impl From<HybZonotope> for AnySet {
    fn from(z: HybZonotope) -> Self {
        AnySet::HybZono(z)
    }
}

impl AnySet {
    pub fn rep(&self) -> Rep {
        match self {
            AnySet::Zono(_) => Rep::Zono,
            AnySet::ConZono(_) => Rep::ConZono,
            AnySet::HybZono(_) => Rep::HybZono,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            AnySet::Zono(z) => z.n(),
            AnySet::ConZono(z) => z.n(),
            AnySet::HybZono(z) => z.n(),
        }
    }

    pub fn complexity(&self) -> Complexity {
        match self {
            AnySet::Zono(z) => Complexity {
                n_g: z.n_g(),
                n_b: 0,
                n_c: 0,
            },
            AnySet::ConZono(z) => Complexity {
                n_g: z.n_g(),
                n_b: 0,
                n_c: z.n_c(),
            },
            AnySet::HybZono(z) => z.complexity(),
        }
    }

    pub fn center(&self) -> &[f64] {
        match self {
            AnySet::Zono(z) => z.c(),
            AnySet::ConZono(z) => z.c(),
            AnySet::HybZono(z) => z.c(),
        }
    }

    /// The set in hybrid form (a copy; lifting never changes the point set).
    pub fn to_hyb(&self) -> HybZonotope {
        match self {
            AnySet::Zono(z) => HybZonotope::from(z.clone()),
            AnySet::ConZono(z) => HybZonotope::from(z.clone()),
            AnySet::HybZono(z) => z.clone(),
        }
    }

    pub fn into_hyb(self) -> HybZonotope {
        match self {
            AnySet::Zono(z) => HybZonotope::from(z),
            AnySet::ConZono(z) => HybZonotope::from(z),
            AnySet::HybZono(z) => z,
        }
    }

    /// Wraps a hybrid zonotope under the requested tag. Fails when the
    /// payload has binaries (or constraints) the tag cannot hold.
    pub fn from_hyb(h: HybZonotope, rep: Rep) -> Result<AnySet> {
        match rep {
            Rep::HybZono => Ok(AnySet::HybZono(h)),
            Rep::ConZono => {
                if h.n_b() > 0 {
                    return Err(Error::Representation(format!(
                        "cannot express a set with {} binary factors as conZono",
                        h.n_b()
                    )));
                }
                let (gc, _, c, ac, _, b) = h.into_parts();
                Ok(AnySet::ConZono(ConZonotope::new(gc, c, ac, b)?))
            }
            Rep::Zono => {
                if h.n_b() > 0 || h.n_c() > 0 {
                    return Err(Error::Representation(format!(
                        "cannot express a set with {} binary factors and {} constraints as zono",
                        h.n_b(),
                        h.n_c()
                    )));
                }
                let (gc, _, c, _, _, _) = h.into_parts();
                Ok(AnySet::Zono(Zonotope::new(gc, c)?))
            }
        }
    }

    /// Recasts the set to an equally or more expressive representation.
    pub fn lift(&self, target: Rep) -> Result<AnySet> {
        if target < self.rep() {
            return Err(Error::Representation(format!(
                "cannot downcast {} to {}",
                self.rep().name(),
                target.name()
            )));
        }
        AnySet::from_hyb(self.to_hyb(), target)
    }

    /// The least expressive representation that holds this payload without
    /// any computation (`n_b = 0` gives conZono, `n_c = 0` as well gives zono).
    pub fn demote(&self) -> AnySet {
        let c = self.complexity();
        let rep = if c.n_b > 0 {
            Rep::HybZono
        } else if c.n_c > 0 {
            Rep::ConZono
        } else {
            Rep::Zono
        };
        AnySet::from_hyb(self.to_hyb(), rep).expect("demotion respects degeneracy rules")
    }

    /// Structural equality up to the degeneracy chain: a hybrid zonotope with
    /// no binaries equals its constrained form, and so on.
    pub fn structurally_eq(&self, other: &AnySet) -> bool {
        self.demote() == other.demote()
    }
}
