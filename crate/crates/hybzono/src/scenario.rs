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


//! Scenario documents.
//!
//! Every scenario has a `"kind"` (`setdef`, `op`, `reach`, `relunn` or
//! `nonlinear`), an optional `"seed"`, optional `"solver"` settings, named
//! `"sets"` and an `"export"` list. Set references elsewhere are either a
//! name or an inline set document. Parsing resolves every name, so a run
//! only starts once the whole document is known to be consistent.

use std::path::{Path, PathBuf};

use hybzono_core::geometry::PlotOptions;
use hybzono_core::neural::ReluNetwork;
use hybzono_core::opt::Backend;
use hybzono_core::reach::{LinearSystem, MldSystem};
use hybzono_core::{AnySet, Matrix, Rep, SolverOptions};

use crate::doc::{Doc, Invalid, Node};
use crate::format::{parse_network, parse_set};

const COMMON_KEYS: [&str; 6] = ["kind", "description", "seed", "solver", "sets", "export"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    SetDef,
    Op,
    Reach,
    ReluNn,
    Nonlinear,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::SetDef => "setdef",
            Kind::Op => "op",
            Kind::Reach => "reach",
            Kind::ReluNn => "relunn",
            Kind::Nonlinear => "nonlinear",
        }
    }
}

#[derive(Clone, Debug)]
pub struct RandomSet {
    pub rep: Rep,
    pub n: usize,
    pub n_g: usize,
    pub n_b: usize,
    pub n_c: usize,
    pub scale: f64,
}

#[derive(Clone, Debug)]
pub enum SetSource {
    Fixed(AnySet),
    /// Drawn from the run's seeded generator.
    Random(RandomSet),
}

#[derive(Clone, Debug)]
pub enum SetRef {
    Name(String),
    Inline(AnySet),
}

#[derive(Clone, Debug)]
pub enum OpKind {
    LinearMap(Matrix),
    AffineMap(Matrix, Vec<f64>),
    Translate(Vec<f64>),
    MinkowskiSum,
    CartesianProduct,
    GeneralizedIntersection(Option<Matrix>),
    Intersection,
    Halfspace(Matrix, Vec<f64>, Option<Matrix>),
    Union,
    UnionAll,
    ConvexHull,
    PontryaginDifference,
    Projection(Vec<usize>),
    Lift(Rep),
}

#[derive(Clone, Debug)]
pub struct Op {
    pub out: String,
    pub kind: OpKind,
    pub args: Vec<SetRef>,
    pub at: Invalid,
}

#[derive(Clone, Debug)]
pub enum System {
    /// Direct one-step map, or the update-set successor when a domain over
    /// `(x, u)` is given.
    Linear { sys: LinearSystem, domain: Option<SetRef> },
    Mld(MldSystem),
    /// Regions `x+ = A x + f` on `domain`.
    Pwa(Vec<(Matrix, Vec<f64>, SetRef)>),
    /// `x+ = A x + B u + offset` on `domain`, closed with the state-input
    /// set `theta`.
    ClosedLoop {
        sys: LinearSystem,
        offset: Vec<f64>,
        domain: SetRef,
        theta: SetRef,
    },
}

#[derive(Clone, Debug)]
pub struct Reach {
    pub system: System,
    pub initial: SetRef,
    pub input: Option<SetRef>,
    pub aux: Option<SetRef>,
    pub steps: usize,
    pub audit: usize,
    pub at: Invalid,
}

#[derive(Clone, Debug)]
pub struct Relu {
    pub network: ReluNetwork,
    pub domain: SetRef,
    pub bound: Option<f64>,
    pub audit: usize,
    pub at: Invalid,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Builtin {
    Sin { a: f64, w: f64, phase: f64 },
    Cos { a: f64, w: f64, phase: f64 },
    Sq { a: f64 },
    Sat { a: f64, limit: f64 },
    Tanh { a: f64, w: f64 },
}

impl Builtin {
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            Builtin::Sin { a, w, phase } => a * libm::sin(w * x + phase),
            Builtin::Cos { a, w, phase } => a * libm::cos(w * x + phase),
            Builtin::Sq { a } => a * x * x,
            Builtin::Sat { a, limit } => a * x.clamp(-limit, limit),
            Builtin::Tanh { a, w } => a * libm::tanh(w * x),
        }
    }
}

#[derive(Clone, Debug)]
pub struct FunctionSpec {
    pub name: String,
    pub f: Builtin,
    pub lo: f64,
    pub hi: f64,
    pub breakpoints: usize,
    pub grid: usize,
    pub at: Invalid,
}

/// `x+ = M (x, u) + sum_k c_k g_k(l_k^T (x, u)) + offset` on `domain`.
#[derive(Clone, Debug)]
pub struct Assembly {
    pub n_state: usize,
    pub m_input: usize,
    pub domain: SetRef,
    pub linear: Matrix,
    pub offset: Vec<f64>,
    /// `(l_k, c_k, index into the function list)`.
    pub terms: Vec<(Vec<f64>, Vec<f64>, usize)>,
    pub at: Invalid,
}

impl Assembly {
    pub fn eval(&self, functions: &[FunctionSpec], z: &[f64]) -> Vec<f64> {
        let mut y = self.linear.mul_vec(z);
        for (yi, o) in y.iter_mut().zip(&self.offset) {
            *yi += o;
        }
        for (l, c, k) in &self.terms {
            let s: f64 = l.iter().zip(z).map(|(a, b)| a * b).sum();
            let g = functions[*k].f.eval(s);
            for (yi, ci) in y.iter_mut().zip(c) {
                *yi += ci * g;
            }
        }
        y
    }
}

#[derive(Clone, Debug)]
pub struct Nonlinear {
    pub functions: Vec<FunctionSpec>,
    pub system: Option<Assembly>,
    pub initial: Option<SetRef>,
    pub input: Option<SetRef>,
    pub steps: usize,
    pub audit: usize,
}

#[derive(Clone, Debug)]
pub enum Task {
    SetDef,
    Ops(Vec<Op>),
    Reach(Reach),
    Relu(Relu),
    Nonlinear(Nonlinear),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Svg,
    Mesh,
    Obj,
    Set,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Svg => "svg",
            Format::Mesh => "mesh",
            Format::Obj => "obj",
            Format::Set => "set",
        }
    }

    pub fn from_name(s: &str) -> Option<Format> {
        Some(match s {
            "svg" => Format::Svg,
            "mesh" => Format::Mesh,
            "obj" => Format::Obj,
            "set" => Format::Set,
            _ => return None,
        })
    }

    pub fn extension(self) -> &'static str {
        match self {
            Format::Svg => "svg",
            Format::Mesh => "mesh.json",
            Format::Obj => "obj",
            Format::Set => "json",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExportSpec {
    /// Set names; `"tube"` stands for every step of a reach tube.
    pub sets: Vec<String>,
    pub format: Format,
    pub file: Option<String>,
    pub dims: Option<Vec<usize>>,
    pub options: Option<PlotOptions>,
    pub at: Invalid,
}

#[derive(Clone, Debug)]
pub struct Scenario {
    /// File name of the scenario document.
    pub name: String,
    pub dir: PathBuf,
    pub kind: Kind,
    pub seed: Option<u64>,
    pub solver: SolverOptions,
    pub sets: Vec<(String, SetSource)>,
    pub task: Task,
    pub exports: Vec<ExportSpec>,
    /// Every set name the run will produce, in order.
    pub names: Vec<String>,
    /// Number of steps of the reach tube, if the task builds one.
    pub tube: Option<usize>,
}

struct Names {
    known: Vec<String>,
}

impl Names {
    fn add(&mut self, node: &Node<'_>, name: &str) -> Result<(), Invalid> {
        if name.is_empty() || name == "tube" {
            return Err(node.error(format!("\"{name}\" is not a usable set name")));
        }
        if self.known.iter().any(|k| k == name) {
            return Err(node.error(format!("set \"{name}\" is defined twice")));
        }
        self.known.push(name.to_string());
        Ok(())
    }

    fn has(&self, name: &str) -> bool {
        self.known.iter().any(|k| k == name)
    }

    fn set_ref(&self, node: &Node<'_>) -> Result<SetRef, Invalid> {
        match node.value {
            serde_json::Value::String(s) if self.has(s) => Ok(SetRef::Name(s.clone())),
            serde_json::Value::String(s) => Err(node.error(format!("unknown set \"{s}\""))),
            serde_json::Value::Object(_) => Ok(SetRef::Inline(parse_set(node)?)),
            _ => Err(node.error("expected a set name or a set document")),
        }
    }
}

fn anchor(node: &Node<'_>) -> Invalid {
    node.error("")
}

impl Scenario {
    pub fn load(path: &Path) -> Result<Scenario, Invalid> {
        let doc = Doc::read(path)?;
        Scenario::parse(&doc)
    }

    pub fn parse(doc: &Doc) -> Result<Scenario, Invalid> {
        let root = doc.root();
        let dir = doc.file.parent().map(Path::to_path_buf).unwrap_or_default();
        let kn = root.req("kind")?;
        let kind = match kn.str()? {
            "setdef" => Kind::SetDef,
            "op" => Kind::Op,
            "reach" => Kind::Reach,
            "relunn" => Kind::ReluNn,
            "nonlinear" => Kind::Nonlinear,
            other => return Err(kn.error(format!("unknown scenario kind \"{other}\""))),
        };
        let own: &[&str] = match kind {
            Kind::SetDef => &[],
            Kind::Op => &["ops"],
            Kind::Reach => &["system", "initial", "input", "aux", "steps", "audit"],
            Kind::ReluNn => &["network", "domain", "activation_bound", "audit"],
            Kind::Nonlinear => &["functions", "system", "initial", "input", "steps", "audit"],
        };
        for (key, n) in root.entries()? {
            if !COMMON_KEYS.contains(&key) && !own.contains(&key) {
                return Err(n.error(format!("unknown key \"{key}\" in a {} scenario", kn.str()?)));
            }
        }
        let seed = match root.get("seed") {
            Some(n) => Some(n.value.as_u64().ok_or_else(|| n.error("expected a non-negative integer seed"))?),
            None => None,
        };
        let solver = match root.get("solver") {
            Some(n) => solver_options(&n)?,
            None => SolverOptions::default(),
        };

        let mut names = Names { known: Vec::new() };
        let mut sets = Vec::new();
        if let Some(sn) = root.get("sets") {
            for (name, node) in sn.entries()? {
                names.add(&node, name)?;
                sets.push((name.to_string(), set_source(&node, &dir)?));
            }
        }

        let mut tube = None;
        let task = match kind {
            Kind::SetDef => Task::SetDef,
            Kind::Op => {
                let mut ops = Vec::new();
                for n in root.req("ops")?.items()? {
                    let op = parse_op(&n, &names)?;
                    names.add(&n.req("out")?, &op.out)?;
                    ops.push(op);
                }
                Task::Ops(ops)
            }
            Kind::Reach => {
                let r = parse_reach(&root, &names)?;
                if matches!(r.system, System::ClosedLoop { .. }) {
                    names.add(&root, "Phi")?;
                }
                tube = Some(r.steps);
                Task::Reach(r)
            }
            Kind::ReluNn => {
                let r = parse_relu(&root, &names, &dir)?;
                for out in ["unit", "X", "F", "Y"] {
                    names.add(&root, out)?;
                }
                Task::Relu(r)
            }
            Kind::Nonlinear => {
                let nl = parse_nonlinear(&root, &mut names)?;
                if nl.system.is_some() {
                    tube = Some(nl.steps);
                }
                Task::Nonlinear(nl)
            }
        };
        if let Some(k) = tube {
            for i in 0..=k {
                names.add(&root, &format!("R{i}"))?;
            }
        }

        let mut exports = Vec::new();
        if let Some(en) = root.get("export") {
            for n in en.items()? {
                exports.push(parse_export(&n, &names, tube.is_some())?);
            }
        }

        Ok(Scenario {
            name: doc.file.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default(),
            dir,
            kind,
            seed,
            solver,
            sets,
            task,
            exports,
            names: names.known,
            tube,
        })
    }

    /// Adds an export given on the command line as `name:format[:file]`,
    /// where `name` may list several sets joined by `+`.
    pub fn add_export(&mut self, spec: &str) -> Result<(), String> {
        let err = |msg: String| format!("{msg} in \"{spec}\"");
        let mut parts = spec.splitn(3, ':');
        let (sets, format, file) = (parts.next().unwrap_or(""), parts.next(), parts.next());
        let format = format.and_then(Format::from_name).ok_or_else(|| err("expected name:format[:file] with format svg, mesh, obj or set".into()))?;
        let sets: Vec<String> = sets.split('+').map(str::to_string).collect();
        for s in &sets {
            if !(self.names.contains(s) || (s == "tube" && self.tube.is_some())) {
                return Err(err(format!("unknown set \"{s}\"")));
            }
        }
        if let Some(f) = file {
            check_file_name(f).map_err(err)?;
        }
        self.exports.push(ExportSpec {
            sets,
            format,
            file: file.map(str::to_string),
            dims: None,
            options: None,
            at: Invalid {
                file: PathBuf::from(format!("--export {spec}")),
                line: 0,
                column: 0,
                message: String::new(),
            },
        });
        Ok(())
    }
}

fn solver_options(n: &Node<'_>) -> Result<SolverOptions, Invalid> {
    let d = SolverOptions::default();
    let backend = match n.get("backend") {
        None => Backend::Builtin,
        Some(b) => match b.str()? {
            "builtin" => Backend::Builtin,
            other => return Err(b.error(format!("solver \"{other}\" is not available; only \"builtin\" is"))),
        },
    };
    let o = SolverOptions {
        feasibility_tol: n.opt_f64("tolerance", d.feasibility_tol)?,
        optimality_tol: d.optimality_tol,
        max_iterations: n.opt_usize("max_iterations", d.max_iterations)?,
        max_nodes: n.opt_usize("max_nodes", d.max_nodes)?,
        max_leaves: n.opt_usize("max_leaves", d.max_leaves)?,
        backend,
    };
    o.validate().map_err(|e| n.error(e))?;
    Ok(o)
}

fn set_source(node: &Node<'_>, dir: &Path) -> Result<SetSource, Invalid> {
    if let Some(f) = node.get("file") {
        let doc = Doc::read(&dir.join(f.str()?)).map_err(|e| {
            if e.message.starts_with("cannot read") {
                f.error(e.message)
            } else {
                e
            }
        })?;
        return Ok(SetSource::Fixed(parse_set(&doc.root())?));
    }
    if let Some(r) = node.get("random") {
        let tn = r.req("type")?;
        let rep = Rep::from_name(tn.str()?).ok_or_else(|| tn.error("expected \"zono\", \"conZono\" or \"hybZono\""))?;
        let spec = RandomSet {
            rep,
            n: r.req("n")?.usize()?,
            n_g: r.req("n_g")?.usize()?,
            n_b: r.opt_usize("n_b", 0)?,
            n_c: r.opt_usize("n_c", 0)?,
            scale: r.opt_f64("scale", 1.0)?,
        };
        if spec.n == 0 || (rep == Rep::Zono && (spec.n_b > 0 || spec.n_c > 0)) || (rep == Rep::ConZono && spec.n_b > 0) {
            return Err(r.error("random set counts do not fit its type"));
        }
        return Ok(SetSource::Random(spec));
    }
    Ok(SetSource::Fixed(parse_set(node)?))
}

fn args(n: &Node<'_>, names: &Names, count: Option<usize>) -> Result<Vec<SetRef>, Invalid> {
    let an = n.req("args")?;
    let items = an.items()?;
    match count {
        Some(k) if items.len() != k => return Err(an.error(format!("expected {k} operands, found {}", items.len()))),
        None if items.is_empty() => return Err(an.error("expected at least one operand")),
        _ => {}
    }
    items.iter().map(|i| names.set_ref(i)).collect()
}

fn opt_matrix(n: &Node<'_>, key: &str) -> Result<Option<Matrix>, Invalid> {
    n.get(key).map(|m| m.matrix(None)).transpose()
}

fn parse_op(n: &Node<'_>, names: &Names) -> Result<Op, Invalid> {
    let out = n.req("out")?.str()?.to_string();
    let on = n.req("op")?;
    let (kind, arity) = match on.str()? {
        "linear_map" => (OpKind::LinearMap(n.req("R")?.matrix(None)?), Some(1)),
        "affine_map" => (OpKind::AffineMap(n.req("R")?.matrix(None)?, n.req("offset")?.vector()?), Some(1)),
        "translate" => (OpKind::Translate(n.req("v")?.vector()?), Some(1)),
        "minkowski_sum" => (OpKind::MinkowskiSum, Some(2)),
        "cartesian_product" => (OpKind::CartesianProduct, Some(2)),
        "generalized_intersection" => (OpKind::GeneralizedIntersection(opt_matrix(n, "R")?), Some(2)),
        "intersection" => (OpKind::Intersection, Some(2)),
        "halfspace_intersection" => (
            OpKind::Halfspace(n.req("H")?.matrix(None)?, n.req("f")?.vector()?, opt_matrix(n, "R")?),
            Some(1),
        ),
        "union" => (OpKind::Union, Some(2)),
        "union_all" => (OpKind::UnionAll, None),
        "convex_hull" => (OpKind::ConvexHull, Some(2)),
        "pontryagin_difference" => (OpKind::PontryaginDifference, Some(2)),
        "projection" => (OpKind::Projection(n.req("dims")?.indices()?), Some(1)),
        "lift" => {
            let t = n.req("to")?;
            let rep = Rep::from_name(t.str()?).ok_or_else(|| t.error("expected \"zono\", \"conZono\" or \"hybZono\""))?;
            (OpKind::Lift(rep), Some(1))
        }
        other => return Err(on.error(format!("unknown operation \"{other}\""))),
    };
    Ok(Op {
        out,
        kind,
        args: args(n, names, arity)?,
        at: anchor(&on),
    })
}

fn linear_system(n: &Node<'_>) -> Result<LinearSystem, Invalid> {
    let a = n.req("A")?.matrix(None)?;
    let b = match n.get("B") {
        Some(b) => b.matrix(Some((a.rows(), 0))).or_else(|_| b.matrix(None))?,
        None => Matrix::zeros(a.rows(), 0),
    };
    LinearSystem::new(a, b).map_err(|e| n.error(e))
}

fn parse_reach(root: &Node<'_>, names: &Names) -> Result<Reach, Invalid> {
    let sn = root.req("system")?;
    let kn = sn.req("kind")?;
    let system = match kn.str()? {
        "linear" => System::Linear {
            sys: linear_system(&sn)?,
            domain: sn.get("domain").map(|d| names.set_ref(&d)).transpose()?,
        },
        "mld" => {
            let a = sn.req("A")?.matrix(None)?;
            let n = a.rows();
            let e_aff = sn.req("Eaff")?.vector()?;
            let ne = e_aff.len();
            let block = |key: &str, rows: usize| -> Result<Matrix, Invalid> {
                match sn.get(key) {
                    Some(m) => m.matrix(Some((rows, 0))).or_else(|_| m.matrix(None)),
                    None => Ok(Matrix::zeros(rows, 0)),
                }
            };
            let b_u = block("Bu", n)?;
            let b_w = block("Bw", n)?;
            let sys = MldSystem {
                e_x: sn.req("Ex")?.matrix(Some((ne, n)))?,
                e_u: match sn.get("Eu") {
                    Some(m) => m.matrix(Some((ne, b_u.cols())))?,
                    None => Matrix::zeros(ne, b_u.cols()),
                },
                e_w: match sn.get("Ew") {
                    Some(m) => m.matrix(Some((ne, b_w.cols())))?,
                    None => Matrix::zeros(ne, b_w.cols()),
                },
                b_aff: match sn.get("Baff") {
                    Some(v) => v.vector()?,
                    None => vec![0.0; n],
                },
                a,
                b_u,
                b_w,
                e_aff,
            };
            sys.validate().map_err(|e| sn.error(e))?;
            System::Mld(sys)
        }
        "pwa" => {
            let mut regions = Vec::new();
            for r in sn.req("regions")?.items()? {
                let a = r.req("A")?.matrix(None)?;
                let f = match r.get("f") {
                    Some(v) => v.vector()?,
                    None => vec![0.0; a.rows()],
                };
                if a.rows() != a.cols() || f.len() != a.rows() {
                    return Err(r.error("region dynamics need a square A and a matching f"));
                }
                regions.push((a, f, names.set_ref(&r.req("domain")?)?));
            }
            if regions.is_empty() {
                return Err(sn.error("a PWA system needs at least one region"));
            }
            System::Pwa(regions)
        }
        "closedloop" => {
            let sys = linear_system(&sn)?;
            let offset = match sn.get("offset") {
                Some(v) => v.vector()?,
                None => vec![0.0; sys.n()],
            };
            System::ClosedLoop {
                sys,
                offset,
                domain: names.set_ref(&sn.req("domain")?)?,
                theta: names.set_ref(&sn.req("theta")?)?,
            }
        }
        other => return Err(kn.error(format!("unknown system kind \"{other}\""))),
    };
    Ok(Reach {
        system,
        initial: names.set_ref(&root.req("initial")?)?,
        input: root.get("input").map(|n| names.set_ref(&n)).transpose()?,
        aux: root.get("aux").map(|n| names.set_ref(&n)).transpose()?,
        steps: root.req("steps")?.usize()?,
        audit: audit_samples(root)?,
        at: anchor(&sn),
    })
}

fn audit_samples(root: &Node<'_>) -> Result<usize, Invalid> {
    match root.get("audit") {
        Some(a) => a.opt_usize("samples", 0),
        None => Ok(0),
    }
}

fn parse_relu(root: &Node<'_>, names: &Names, dir: &Path) -> Result<Relu, Invalid> {
    let nn = root.req("network")?;
    let network = match nn.get("file") {
        Some(f) => {
            let doc = Doc::read(&dir.join(f.str()?)).map_err(|e| if e.message.starts_with("cannot read") { f.error(e.message) } else { e })?;
            parse_network(&doc.root())?
        }
        None => parse_network(&nn)?,
    };
    let bound = match root.get("activation_bound") {
        Some(b) => {
            let a = b.f64()?;
            if a <= 0.0 {
                return Err(b.error("activation bound must be positive"));
            }
            Some(a)
        }
        None => None,
    };
    Ok(Relu {
        network,
        domain: names.set_ref(&root.req("domain")?)?,
        bound,
        audit: audit_samples(root)?,
        at: anchor(&nn),
    })
}

fn builtin(n: &Node<'_>) -> Result<Builtin, Invalid> {
    let fname = n.req("f")?;
    let a = n.opt_f64("a", 1.0)?;
    let w = n.opt_f64("w", 1.0)?;
    let phase = n.opt_f64("phase", 0.0)?;
    Ok(match fname.str()? {
        "sin" => Builtin::Sin { a, w, phase },
        "cos" => Builtin::Cos { a, w, phase },
        "sq" => Builtin::Sq { a },
        "sat" => Builtin::Sat {
            a,
            limit: n.opt_f64("limit", 1.0)?,
        },
        "tanh" => Builtin::Tanh { a, w },
        other => return Err(fname.error(format!("unknown function \"{other}\"; expected sin, cos, sq, sat or tanh"))),
    })
}

fn parse_nonlinear(root: &Node<'_>, names: &mut Names) -> Result<Nonlinear, Invalid> {
    let mut functions = Vec::new();
    for (name, n) in root.req("functions")?.entries()? {
        let dn = n.req("domain")?;
        let d = dn.vector()?;
        if d.len() != 2 || d[0] >= d[1] {
            return Err(dn.error("domain must be [lo, hi] with lo < hi"));
        }
        let bp = n.req("breakpoints")?;
        let breakpoints = bp.usize()?;
        if breakpoints < 2 {
            return Err(bp.error("need at least two breakpoints"));
        }
        functions.push(FunctionSpec {
            name: name.to_string(),
            f: builtin(&n)?,
            lo: d[0],
            hi: d[1],
            breakpoints,
            grid: n.opt_usize("grid", 64)?,
            at: anchor(&n),
        });
        names.add(&n, name)?;
        names.add(&n, &format!("{name}_graph"))?;
    }
    let system = match root.get("system") {
        None => None,
        Some(sn) => {
            let n_state = sn.req("n_state")?.usize()?;
            let m_input = sn.opt_usize("m_input", 0)?;
            let nz = n_state + m_input;
            let linear = sn.req("linear")?.matrix(Some((n_state, nz)))?;
            let offset = match sn.get("offset") {
                Some(v) => v.vector()?,
                None => vec![0.0; n_state],
            };
            if offset.len() != n_state {
                return Err(sn.req("offset")?.error(format!("expected {n_state} entries")));
            }
            let mut terms = Vec::new();
            for t in sn.req("terms")?.items()? {
                let l = t.req("input")?.vector()?;
                let c = t.req("output")?.vector()?;
                if l.len() != nz || c.len() != n_state {
                    return Err(t.error(format!("term needs an input of length {nz} and an output of length {n_state}")));
                }
                let fnode = t.req("function")?;
                let fname = fnode.str()?;
                let k = functions
                    .iter()
                    .position(|f| f.name == fname)
                    .ok_or_else(|| fnode.error(format!("unknown function \"{fname}\"")))?;
                terms.push((l, c, k));
            }
            let domain = names.set_ref(&sn.req("domain")?)?;
            names.add(&sn, "Psi")?;
            Some(Assembly {
                n_state,
                m_input,
                domain,
                linear,
                offset,
                terms,
                at: anchor(&sn),
            })
        }
    };
    let initial = root.get("initial").map(|n| names.set_ref(&n)).transpose()?;
    if system.is_some() != initial.is_some() {
        return Err(root.error("\"system\" and \"initial\" go together"));
    }
    Ok(Nonlinear {
        functions,
        system,
        initial,
        input: root.get("input").map(|n| names.set_ref(&n)).transpose()?,
        steps: root.opt_usize("steps", 0)?,
        audit: audit_samples(root)?,
    })
}

/// Export files stay inside the output directory.
fn check_file_name(f: &str) -> Result<(), String> {
    let p = Path::new(f);
    if f.is_empty() || p.is_absolute() || p.components().any(|c| !matches!(c, std::path::Component::Normal(_))) {
        return Err(format!("export file \"{f}\" must be a relative path inside the output directory"));
    }
    Ok(())
}

fn parse_export(n: &Node<'_>, names: &Names, has_tube: bool) -> Result<ExportSpec, Invalid> {
    let sn = n.req("set")?;
    let sets = match sn.value {
        serde_json::Value::Array(_) => sn.items()?.iter().map(|i| i.str().map(str::to_string)).collect::<Result<Vec<_>, _>>()?,
        _ => vec![sn.str()?.to_string()],
    };
    if sets.is_empty() {
        return Err(sn.error("no sets to export"));
    }
    for s in &sets {
        if !(names.has(s) || (s == "tube" && has_tube)) {
            return Err(sn.error(format!("unknown set \"{s}\"")));
        }
    }
    let fnode = n.req("format")?;
    let format = Format::from_name(fnode.str()?).ok_or_else(|| fnode.error("expected format svg, mesh, obj or set"))?;
    let file = match n.get("file") {
        Some(f) => {
            let name = f.str()?;
            check_file_name(name).map_err(|m| f.error(m))?;
            if format == Format::Set && (sets.len() > 1 || sets[0] == "tube") {
                return Err(f.error("set exports of several sets are written one file per set; drop \"file\""));
            }
            Some(name.to_string())
        }
        None => None,
    };
    let dims = n.get("dims").map(|d| d.indices()).transpose()?;
    let options = match n.get("options") {
        None => None,
        Some(o) => {
            let d = PlotOptions::default();
            let opacity = o.opt_f64("opacity", d.opacity)?;
            if !(0.0..=1.0).contains(&opacity) {
                return Err(o.req("opacity")?.error("opacity must lie in [0, 1]"));
            }
            let color = match o.get("color") {
                Some(c) => {
                    let c = c.str()?;
                    if !(c.len() == 7 && c.starts_with('#') && c[1..].chars().all(|ch| ch.is_ascii_hexdigit())) {
                        return Err(o.req("color")?.error("color must be #rrggbb"));
                    }
                    c.to_string()
                }
                None => d.color,
            };
            Some(PlotOptions {
                color,
                opacity,
                edges: o.get("edges").map_or(Ok(d.edges), |e| e.bool())?,
            })
        }
    };
    Ok(ExportSpec {
        sets,
        format,
        file,
        dims,
        options,
        at: anchor(n),
    })
}
