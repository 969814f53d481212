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


//! Scenario execution.
//!
//! All randomness (random sets, audit samples) comes from one ChaCha
//! generator seeded from the scenario or `--seed`, consumed in document
//! order. Parallel work (`--jobs`) covers leaf meshing and audits only, and
//! its results are collected in input order, so outputs do not depend on
//! the number of workers.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use hybzono_core::approx::{bound_error, build_segment_graph, lift_to_update_set, AffineAssembly, GraphTerm, UnaryFunctionSpec};
use hybzono_core::geometry::{mesh, mesh_leaf, Mesh, PlotOptions};
use hybzono_core::neural::{encode_network, output_set, relu_unit_set};
use hybzono_core::opt::{contains_point, get_leaves, sample_points, Backend, SolveStats};
use hybzono_core::reach::{
    audit_domain, build_affine_update_set, build_linear_update_set, close_loop, step_linear, step_mld, step_pwa, successor,
    LinearSystem, StateUpdateSet,
};
use hybzono_core::{ops, AnySet, ConZonotope, Error, HybZonotope, Matrix, Rep, Solver, SolverOptions, Zonotope};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::doc::Invalid;
use crate::export;
use crate::format::set_to_json;
use crate::report::{AuditEntry, Calls, OutputEntry, RunReport, SetEntry, SolverInfo, StepEntry, StepTime, Timings};
use crate::scenario::{Format, OpKind, RandomSet, Scenario, SetRef, SetSource, System, Task};

#[derive(Clone, Debug, Default)]
pub struct RunFlags {
    pub seed: Option<u64>,
    pub solver: Option<String>,
    pub tolerance: Option<f64>,
    /// Worker threads for leaf meshing and audits; 0 means 1.
    pub jobs: usize,
    /// Extra exports as `name:format[:file]`.
    pub exports: Vec<String>,
    pub leaves: bool,
    pub activation_bound: Option<f64>,
}

#[derive(Debug)]
pub enum RunError {
    Invalid(Invalid),
    /// A bad command-line argument.
    Usage(String),
    /// A library error, anchored in the scenario where one applies.
    Core { error: Error, at: Option<Invalid> },
    Io { path: PathBuf, error: std::io::Error },
}

impl RunError {
    /// 2 for malformed or inconsistent input, 3 when a solver cap is hit,
    /// 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Invalid(_) | RunError::Usage(_) => 2,
            RunError::Core { error, .. } if error.is_resource() => 3,
            RunError::Core {
                error: Error::Dimension(_) | Error::Argument(_),
                at: Some(_),
            } => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::Invalid(e) => write!(f, "{e}"),
            RunError::Usage(m) => f.write_str(m),
            RunError::Core { error, at: Some(at) } => write!(f, "{}: {error}", at.anchor()),
            RunError::Core { error, at: None } => write!(f, "{error}"),
            RunError::Io { path, error } => write!(f, "{}: {error}", path.display()),
        }
    }
}

impl std::error::Error for RunError {}

impl From<Invalid> for RunError {
    fn from(e: Invalid) -> Self {
        RunError::Invalid(e)
    }
}

fn core(at: &Invalid) -> impl Fn(Error) -> RunError + '_ {
    move |error| RunError::Core {
        error,
        at: Some(at.clone()),
    }
}

fn bare(error: Error) -> RunError {
    RunError::Core { error, at: None }
}

fn flag_error(flag: &str, message: String) -> RunError {
    RunError::Usage(format!("{flag}: {message}"))
}

fn add_stats(a: SolveStats, b: SolveStats) -> SolveStats {
    SolveStats {
        lp_calls: a.lp_calls + b.lp_calls,
        milp_calls: a.milp_calls + b.milp_calls,
        nodes: a.nodes + b.nodes,
    }
}

const PALETTE: [&str; 6] = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"];

struct Runner {
    jobs: usize,
    opts: SolverOptions,
    solver: Solver,
    /// Calls made by worker threads, which use their own solvers.
    extra: SolveStats,
    rng: ChaCha8Rng,
    sets: Vec<(String, AnySet)>,
    steps: Vec<StepEntry>,
    times: Vec<StepTime>,
    audits: Vec<AuditEntry>,
    warnings: Vec<String>,
    mark: (SolveStats, Instant),
}

impl Runner {
    fn calls(&self) -> SolveStats {
        add_stats(self.solver.stats(), self.extra)
    }

    fn begin(&mut self) {
        self.mark = (self.calls(), Instant::now());
    }

    fn end(&mut self, name: impl Into<String>) {
        let name = name.into();
        let now = self.calls();
        self.steps.push(StepEntry {
            name: name.clone(),
            lp_calls: now.lp_calls - self.mark.0.lp_calls,
            milp_calls: now.milp_calls - self.mark.0.milp_calls,
        });
        self.times.push(StepTime {
            name,
            seconds: self.mark.1.elapsed().as_secs_f64(),
        });
    }

    fn get(&self, r: &SetRef) -> AnySet {
        match r {
            SetRef::Inline(s) => s.clone(),
            SetRef::Name(n) => self.named(n).clone(),
        }
    }

    fn named(&self, name: &str) -> &AnySet {
        &self.sets.iter().find(|(k, _)| k == name).expect("names are resolved when parsing").1
    }

    fn put(&mut self, name: impl Into<String>, s: AnySet) {
        self.sets.push((name.into(), s));
    }

    fn uniform(&mut self) -> f64 {
        self.rng.gen::<f64>()
    }

    fn sample(&mut self, s: &AnySet, count: usize) -> Result<Vec<Vec<f64>>, RunError> {
        let rng = &mut self.rng;
        let mut u = || rng.gen::<f64>();
        sample_points(s, count, &mut u, &self.solver).map_err(bare)
    }

    /// Maps `f` over `items` on up to `jobs` threads, each with its own
    /// solver; results come back in input order.
    fn par_map<T: Sync, R: Send>(
        &mut self,
        items: &[T],
        f: impl Fn(&T, &Solver) -> hybzono_core::Result<R> + Sync,
    ) -> Result<Vec<R>, RunError> {
        if items.is_empty() {
            return Ok(Vec::new());
        }
        let chunk = items.len().div_ceil(self.jobs.clamp(1, items.len()));
        let opts = &self.opts;
        let f = &f;
        let parts: Vec<(hybzono_core::Result<Vec<R>>, SolveStats)> = std::thread::scope(|scope| {
            let handles: Vec<_> = items
                .chunks(chunk)
                .map(|part| {
                    scope.spawn(move || {
                        let solver = Solver::new(opts.clone());
                        let out = part.iter().map(|i| f(i, &solver)).collect();
                        (out, solver.stats())
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("worker thread panicked")).collect()
        });
        let mut out = Vec::with_capacity(items.len());
        for (r, stats) in parts {
            self.extra = add_stats(self.extra, stats);
            out.extend(r.map_err(bare)?);
        }
        Ok(out)
    }

    fn audit(&mut self, name: String, samples: usize, failures: usize) {
        if failures > 0 {
            self.warnings.push(format!("audit \"{name}\": {failures} of {samples} samples failed"));
        }
        self.audits.push(AuditEntry { name, samples, failures });
    }

    fn random_set(&mut self, spec: &RandomSet) -> AnySet {
        let s = spec.scale;
        let m = |r: usize, c: usize, rng: &mut ChaCha8Rng| Matrix::from_fn(r, c, |_, _| s * rng.gen_range(-1.0..1.0));
        let rng = &mut self.rng;
        let g = m(spec.n, spec.n_g, rng);
        let c = vec![0.0; spec.n];
        match spec.rep {
            Rep::Zono => Zonotope::new(g, c).expect("shapes agree").into(),
            Rep::ConZono => {
                // constraints pass through an interior factor, so the set is nonempty
                let a = m(spec.n_c, spec.n_g, rng);
                let xi: Vec<f64> = (0..spec.n_g).map(|_| rng.gen_range(-0.5..0.5)).collect();
                let b = a.mul_vec(&xi);
                ConZonotope::new(g, c, a, b).expect("shapes agree").into()
            }
            Rep::HybZono => {
                let gb = m(spec.n, spec.n_b, rng);
                let ac = m(spec.n_c, spec.n_g, rng);
                let ab = m(spec.n_c, spec.n_b, rng);
                let xc: Vec<f64> = (0..spec.n_g).map(|_| rng.gen_range(-0.5..0.5)).collect();
                let xb: Vec<f64> = (0..spec.n_b).map(|_| if rng.gen_bool(0.5) { 1.0 } else { -1.0 }).collect();
                let b: Vec<f64> = ac.mul_vec(&xc).iter().zip(ab.mul_vec(&xb)).map(|(u, v)| u + v).collect();
                HybZonotope::new(g, gb, c, ac, ab, b).expect("shapes agree").into()
            }
        }
    }

    fn run_op(&mut self, kind: &OpKind, args: &[AnySet]) -> hybzono_core::Result<AnySet> {
        let a = || &args[0];
        let b = || &args[1];
        match kind {
            OpKind::LinearMap(r) => ops::linear_map(r, a()),
            OpKind::AffineMap(r, v) => ops::affine_map(r, a(), v),
            OpKind::Translate(v) => ops::translate(a(), v),
            OpKind::MinkowskiSum => ops::minkowski_sum(a(), b()),
            OpKind::CartesianProduct => ops::cartesian_product(a(), b()),
            OpKind::GeneralizedIntersection(r) => ops::generalized_intersection(a(), b(), r.as_ref()),
            OpKind::Intersection => ops::intersection(a(), b()),
            OpKind::Halfspace(h, f, r) => ops::halfspace_intersection(a(), h, f, r.as_ref()),
            OpKind::Union => ops::union(a(), b()).map(AnySet::from),
            OpKind::UnionAll => ops::union_all(args),
            OpKind::ConvexHull => ops::convex_hull(a(), b()).map(AnySet::from),
            OpKind::PontryaginDifference => ops::pontryagin_difference(a(), b()),
            OpKind::Projection(dims) => ops::projection(a(), dims),
            OpKind::Lift(rep) => a().lift(*rep),
        }
    }

    /// Meshes of a set; the leaves of a hybrid set are meshed in parallel.
    fn meshes(&mut self, s: &AnySet) -> Result<Vec<Mesh>, RunError> {
        match s {
            AnySet::HybZono(h) => {
                let leaves: Vec<Vec<i8>> = get_leaves(h, &self.solver).map_err(bare)?.iter().cloned().collect();
                self.par_map(&leaves, |leaf, solver| mesh_leaf(h, leaf, solver))
            }
            _ => mesh(s, &self.solver).map_err(bare),
        }
    }
}

/// Loads and runs a scenario, writing exports, `report.json` and
/// `timings.json` into `out_dir`.
pub fn run(scenario: &Path, out_dir: &Path, flags: &RunFlags) -> Result<RunReport, RunError> {
    let sc = Scenario::load(scenario)?;
    run_scenario(sc, out_dir, flags)
}

pub fn run_scenario(mut sc: Scenario, out_dir: &Path, flags: &RunFlags) -> Result<RunReport, RunError> {
    for e in &flags.exports {
        sc.add_export(e).map_err(|m| flag_error("--export", m))?;
    }
    let mut opts = sc.solver.clone();
    if let Some(name) = &flags.solver {
        if name != "builtin" {
            return Err(flag_error("--solver", format!("solver \"{name}\" is not available; only \"builtin\" is")));
        }
        opts.backend = Backend::Builtin;
    }
    if let Some(t) = flags.tolerance {
        opts.feasibility_tol = t;
    }
    opts.validate().map_err(|e| flag_error("--tolerance", e.to_string()))?;
    if let Some(a) = flags.activation_bound {
        if !(a > 0.0 && a.is_finite()) {
            return Err(flag_error("--activation-bound", "activation bound must be positive".into()));
        }
    }
    let plan = plan_files(&sc)?;
    let seed = flags.seed.or(sc.seed).unwrap_or(0);
    let started = Instant::now();

    let mut r = Runner {
        jobs: flags.jobs.max(1),
        solver: Solver::new(opts.clone()),
        opts: opts.clone(),
        extra: SolveStats::default(),
        rng: ChaCha8Rng::seed_from_u64(seed),
        sets: Vec::new(),
        steps: Vec::new(),
        times: Vec::new(),
        audits: Vec::new(),
        warnings: Vec::new(),
        mark: (SolveStats::default(), Instant::now()),
    };

    r.begin();
    for (name, src) in &sc.sets {
        let s = match src {
            SetSource::Fixed(s) => s.clone(),
            SetSource::Random(spec) => r.random_set(spec),
        };
        r.put(name.clone(), s);
    }
    r.end("load");

    match &sc.task {
        Task::SetDef => {}
        Task::Ops(list) => {
            for op in list {
                r.begin();
                let args: Vec<AnySet> = op.args.iter().map(|a| r.get(a)).collect();
                let out = r.run_op(&op.kind, &args).map_err(core(&op.at))?;
                r.put(op.out.clone(), out);
                r.end(op.out.clone());
            }
        }
        Task::Reach(reach) => run_reach(&mut r, reach)?,
        Task::Relu(relu) => run_relu(&mut r, relu, flags.activation_bound)?,
        Task::Nonlinear(nl) => run_nonlinear(&mut r, nl)?,
    }

    // leaf counts go into the report; they are MILP-priced, hence opt-in
    let mut leaves = vec![None; r.sets.len()];
    if flags.leaves {
        r.begin();
        for (i, (_, s)) in r.sets.iter().enumerate() {
            leaves[i] = Some(get_leaves(&s.to_hyb(), &r.solver).map_err(bare)?.len());
        }
        r.end("leaves");
    }

    fs::create_dir_all(out_dir).map_err(|error| RunError::Io {
        path: out_dir.to_path_buf(),
        error,
    })?;
    let mut outputs = Vec::new();
    for (spec, files) in sc.exports.iter().zip(&plan) {
        let names: Vec<String> = spec
            .sets
            .iter()
            .flat_map(|s| {
                if s == "tube" {
                    (0..=sc.tube.unwrap_or(0)).map(|i| format!("R{i}")).collect()
                } else {
                    vec![s.clone()]
                }
            })
            .collect();
        let mut chosen = Vec::new();
        for name in &names {
            let s = r.named(name).clone();
            let s = match &spec.dims {
                Some(d) => ops::projection(&s, d).map_err(core(&spec.at))?,
                None => s,
            };
            chosen.push((name.clone(), s));
        }
        r.begin();
        if spec.format == Format::Set {
            for ((name, s), file) in chosen.iter().zip(files) {
                let text = set_to_json(s);
                write(out_dir, file, &text)?;
                outputs.push(OutputEntry {
                    file: file.clone(),
                    format: "set".into(),
                    sets: vec![name.clone()],
                    meshes: None,
                    bytes: text.len(),
                });
            }
        } else {
            let mut layers = Vec::new();
            for (k, (_, s)) in chosen.iter().enumerate() {
                let opts = spec.options.clone().unwrap_or_else(|| {
                    if chosen.len() == 1 {
                        PlotOptions::default()
                    } else {
                        PlotOptions {
                            color: PALETTE[k % PALETTE.len()].to_string(),
                            ..PlotOptions::default()
                        }
                    }
                });
                let m = r.meshes(s).map_err(|e| match e {
                    RunError::Core { error, .. } => core(&spec.at)(error),
                    other => other,
                })?;
                layers.push((m, opts));
            }
            let count = layers.iter().map(|(m, _)| m.len()).sum();
            let text = match spec.format {
                Format::Svg => {
                    let refs: Vec<(&[Mesh], &PlotOptions)> = layers.iter().map(|(m, o)| (m.as_slice(), o)).collect();
                    export::svg(&refs)
                }
                Format::Mesh => Ok(export::mesh_json(&layers.iter().flat_map(|(m, _)| m.clone()).collect::<Vec<_>>(), &layers[0].1)),
                Format::Obj => export::obj(&layers.iter().flat_map(|(m, _)| m.clone()).collect::<Vec<_>>(), &layers[0].1),
                Format::Set => unreachable!(),
            }
            .map_err(|m| core(&spec.at)(Error::Unsupported(m)))?;
            write(out_dir, &files[0], &text)?;
            outputs.push(OutputEntry {
                file: files[0].clone(),
                format: spec.format.name().into(),
                sets: names.clone(),
                meshes: Some(count),
                bytes: text.len(),
            });
        }
        r.end(format!("export {}", files.join(",")));
    }

    let calls = r.calls();
    let report = RunReport {
        scenario: sc.name.clone(),
        kind: sc.kind.name().into(),
        seed,
        solver: SolverInfo {
            backend: "builtin".into(),
            feasibility_tol: opts.feasibility_tol,
            max_nodes: opts.max_nodes,
            max_leaves: opts.max_leaves,
        },
        sets: r
            .sets
            .iter()
            .zip(leaves)
            .map(|((name, s), leaves)| {
                let c = s.complexity();
                SetEntry {
                    name: name.clone(),
                    rep: s.rep().name().into(),
                    n: s.dim(),
                    n_g: c.n_g,
                    n_b: c.n_b,
                    n_c: c.n_c,
                    leaves,
                }
            })
            .collect(),
        steps: r.steps,
        calls: Calls {
            lp: calls.lp_calls,
            milp: calls.milp_calls,
        },
        audits: r.audits,
        warnings: r.warnings,
        outputs,
    };
    write(out_dir, "report.json", &report.to_json())?;
    let timings = Timings {
        steps: r.times,
        total_seconds: started.elapsed().as_secs_f64(),
    };
    write(out_dir, "timings.json", &timings.to_json())?;
    Ok(report)
}

fn write(dir: &Path, file: &str, text: &str) -> Result<(), RunError> {
    let path = dir.join(file);
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|error| RunError::Io {
            path: parent.to_path_buf(),
            error,
        })?;
    }
    fs::write(&path, text).map_err(|error| RunError::Io { path, error })
}

/// Output file names per export, checked for clashes before any work.
fn plan_files(sc: &Scenario) -> Result<Vec<Vec<String>>, RunError> {
    let mut plan = Vec::new();
    let mut seen: Vec<String> = vec!["report.json".into(), "timings.json".into()];
    for spec in &sc.exports {
        let files: Vec<String> = if spec.format == Format::Set {
            let names: Vec<String> = if spec.sets.iter().any(|s| s == "tube") {
                (0..=sc.tube.unwrap_or(0)).map(|i| format!("R{i}")).collect()
            } else {
                spec.sets.clone()
            };
            match &spec.file {
                Some(f) => vec![f.clone()],
                None => names.iter().map(|n| format!("{n}.{}", Format::Set.extension())).collect(),
            }
        } else {
            vec![spec.file.clone().unwrap_or_else(|| format!("{}.{}", spec.sets.join("+"), spec.format.extension()))]
        };
        for f in &files {
            if seen.contains(f) {
                let mut at = spec.at.clone();
                at.message = format!("output file \"{f}\" is written twice");
                return Err(RunError::Invalid(at));
            }
            seen.push(f.clone());
        }
        plan.push(files);
    }
    Ok(plan)
}

fn run_reach(r: &mut Runner, reach: &crate::scenario::Reach) -> Result<(), RunError> {
    let at = &reach.at;
    let r0 = r.get(&reach.initial);
    let input = reach.input.as_ref().map(|u| r.get(u));
    let aux = reach.aux.as_ref().map(|w| r.get(w));

    enum Step {
        Direct(LinearSystem),
        Update(StateUpdateSet),
        Mld,
        Pwa(Vec<StateUpdateSet>),
    }
    r.begin();
    let step = match &reach.system {
        System::Linear { sys, domain: None } => Step::Direct(sys.clone()),
        System::Linear { sys, domain: Some(d) } => Step::Update(build_linear_update_set(sys, &r.get(d)).map_err(core(at))?),
        System::Mld(_) => Step::Mld,
        System::Pwa(regions) => {
            let mut psis = Vec::new();
            for (a, f, d) in regions {
                let sys = LinearSystem::new(a.clone(), Matrix::zeros(a.rows(), 0)).map_err(core(at))?;
                psis.push(build_affine_update_set(&sys, f, &r.get(d)).map_err(core(at))?);
            }
            Step::Pwa(psis)
        }
        System::ClosedLoop {
            sys,
            offset,
            domain,
            theta,
        } => {
            let psi = build_affine_update_set(sys, offset, &r.get(domain)).map_err(core(at))?;
            let phi = close_loop(&psi, &r.get(theta)).map_err(core(at))?;
            r.put("Phi", phi.set.clone());
            Step::Update(phi)
        }
    };
    r.end("update set");

    r.put("R0", r0);
    for k in 1..=reach.steps {
        r.begin();
        let prev = r.named(&format!("R{}", k - 1)).clone();
        let next = match (&step, &reach.system) {
            (Step::Direct(sys), _) => match &input {
                _ if sys.m() == 0 => ops::linear_map(&sys.a, &prev),
                Some(u) => step_linear(sys, &prev, u),
                None => Err(Error::Argument("the system has inputs but no input set was given".into())),
            },
            (Step::Update(psi), _) => successor(psi, &prev, input.as_ref()),
            (Step::Mld, System::Mld(sys)) => step_mld(sys, &prev, input.as_ref(), aux.as_ref()),
            (Step::Pwa(psis), _) => step_pwa(psis, &prev),
            _ => unreachable!(),
        }
        .map_err(|e| core(at)(Error::Step { index: k, source: Box::new(e) }))?;
        r.put(format!("R{k}"), next);
        r.end(format!("R{k}"));
    }

    if reach.audit == 0 {
        return Ok(());
    }
    for k in 0..reach.steps {
        let (cur, next) = (r.named(&format!("R{k}")).clone(), r.named(&format!("R{}", k + 1)).clone());
        r.begin();
        let xs = r.sample(&cur, reach.audit)?;
        match (&step, &reach.system) {
            (Step::Direct(sys), _) | (Step::Update(_), System::Linear { sys, .. }) => {
                let us = match (&input, sys.m()) {
                    (Some(u), m) if m > 0 => r.sample(u, reach.audit)?,
                    _ => vec![Vec::new(); reach.audit],
                };
                let ys: Vec<Vec<f64>> = xs
                    .iter()
                    .zip(&us)
                    .map(|(x, u)| {
                        let mut y = sys.a.mul_vec(x);
                        if !u.is_empty() {
                            for (yi, bi) in y.iter_mut().zip(sys.b.mul_vec(u)) {
                                *yi += bi;
                            }
                        }
                        y
                    })
                    .collect();
                let ok = r.par_map(&ys, |y, s| contains_point(&next, y, s))?;
                r.audit(format!("R{} contains simulated successors of R{k}", k + 1), ys.len(), ok.iter().filter(|b| !**b).count());
            }
            (Step::Pwa(_), System::Pwa(regions)) => {
                let domains: Vec<AnySet> = regions.iter().map(|(_, _, d)| r.get(d)).collect();
                let checks = r.par_map(&xs, |x, s| {
                    let mut images = 0;
                    let mut bad = 0;
                    for ((a, f, _), d) in regions.iter().zip(&domains) {
                        if contains_point(d, x, s)? {
                            images += 1;
                            let y: Vec<f64> = a.mul_vec(x).iter().zip(f).map(|(p, q)| p + q).collect();
                            if !contains_point(&next, &y, s)? {
                                bad += 1;
                            }
                        }
                    }
                    Ok((images, bad))
                })?;
                let uncovered = checks.iter().filter(|c| c.0 == 0).count();
                if uncovered > 0 {
                    r.warnings.push(format!("{uncovered} samples of R{k} lie in no PWA region"));
                }
                r.audit(
                    format!("R{} contains simulated successors of R{k}", k + 1),
                    xs.len(),
                    checks.iter().map(|c| c.1).sum(),
                );
            }
            (Step::Update(phi), System::ClosedLoop { .. }) => {
                let outside = audit_domain(phi, &xs, &r.solver).map_err(bare)?;
                r.audit(format!("R{k} lies in the domain of Phi"), xs.len(), outside.len());
            }
            _ => {}
        }
        r.end(format!("audit R{}", k + 1));
    }
    Ok(())
}

fn run_relu(r: &mut Runner, relu: &crate::scenario::Relu, flag: Option<f64>) -> Result<(), RunError> {
    let at = &relu.at;
    let a = flag.or(relu.bound).ok_or_else(|| {
        let mut e = at.clone();
        e.message = "no activation bound: set \"activation_bound\" or pass --activation-bound".into();
        RunError::Invalid(e)
    })?;
    let AnySet::Zono(x) = r.get(&relu.domain) else {
        let mut e = at.clone();
        e.message = "the network domain must be a zonotope".into();
        return Err(RunError::Invalid(e));
    };
    r.begin();
    let unit = relu_unit_set(a).map_err(core(at))?;
    let gs = encode_network(&relu.network, &x, a).map_err(core(at))?;
    let y = output_set(&gs).map_err(core(at))?;
    r.warnings.extend(gs.warnings.iter().cloned());
    r.put("unit", unit.into());
    r.put("X", x.clone().into());
    r.put("F", gs.f.clone().into());
    r.put("Y", y);
    r.end("encode");

    if relu.audit > 0 {
        r.begin();
        let xs = r.sample(&x.into(), relu.audit)?;
        let f: AnySet = gs.f.into();
        let net = &relu.network;
        let ok = r.par_map(&xs, |x, s| {
            let mut p = x.clone();
            p.extend(net.forward(x));
            contains_point(&f, &p, s)
        })?;
        r.audit("F contains (x, f(x))".into(), xs.len(), ok.iter().filter(|b| !**b).count());
        r.end("audit F");
    }
    Ok(())
}

fn run_nonlinear(r: &mut Runner, nl: &crate::scenario::Nonlinear) -> Result<(), RunError> {
    let mut bounds = Vec::new();
    for f in &nl.functions {
        r.begin();
        let g = |x: f64| f.f.eval(x);
        let spec = UnaryFunctionSpec::uniform(&g, f.lo, f.hi, f.breakpoints).map_err(core(&f.at))?;
        let graph = build_segment_graph(&spec).map_err(core(&f.at))?;
        let err = bound_error(&spec, f.grid).map_err(core(&f.at))?;
        let zh = ops::minkowski_sum(&graph.clone().into(), &err.e.into()).map_err(core(&f.at))?;
        r.put(format!("{}_graph", f.name), graph.into());
        r.put(f.name.clone(), zh.clone());
        r.end(format!("bound {}", f.name));
        if nl.audit > 0 {
            r.begin();
            let pts: Vec<Vec<f64>> = (0..nl.audit)
                .map(|_| {
                    let x = f.lo + (f.hi - f.lo) * r.uniform();
                    vec![x, f.f.eval(x)]
                })
                .collect();
            let ok = r.par_map(&pts, |p, s| contains_point(&zh, p, s))?;
            r.audit(format!("{} contains the graph of its function", f.name), pts.len(), ok.iter().filter(|b| !**b).count());
            r.end(format!("audit {}", f.name));
        }
        bounds.push(zh);
    }

    let (Some(asm), Some(initial)) = (&nl.system, &nl.initial) else {
        return Ok(());
    };
    let at = &asm.at;
    r.begin();
    let assembly = AffineAssembly {
        linear: asm.linear.clone(),
        offset: asm.offset.clone(),
        terms: asm
            .terms
            .iter()
            .map(|(l, c, k)| GraphTerm {
                input: l.clone(),
                graph: bounds[*k].to_hyb(),
                output: c.clone(),
            })
            .collect(),
    };
    let domain = r.get(&asm.domain);
    let psi = lift_to_update_set(&domain, asm.n_state, asm.m_input, &assembly).map_err(core(at))?;
    r.put("Psi", psi.set.clone());
    r.end("update set");

    let input = nl.input.as_ref().map(|u| r.get(u));
    r.put("R0", r.get(initial));
    for k in 1..=nl.steps {
        r.begin();
        let prev = r.named(&format!("R{}", k - 1)).clone();
        let next = successor(&psi, &prev, input.as_ref()).map_err(|e| core(at)(Error::Step { index: k, source: Box::new(e) }))?;
        r.put(format!("R{k}"), next);
        r.end(format!("R{k}"));
    }

    if nl.audit == 0 {
        return Ok(());
    }
    for k in 0..nl.steps {
        let (cur, next) = (r.named(&format!("R{k}")).clone(), r.named(&format!("R{}", k + 1)).clone());
        r.begin();
        let xs = r.sample(&cur, nl.audit)?;
        let zs: Vec<Vec<f64>> = match (&input, asm.m_input) {
            (Some(u), m) if m > 0 => {
                let us = r.sample(u, nl.audit)?;
                xs.into_iter().zip(us).map(|(x, u)| x.into_iter().chain(u).collect()).collect()
            }
            _ => xs,
        };
        let functions = &nl.functions;
        let checks = r.par_map(&zs, |z, s| {
            if !contains_point(&domain, z, s)? {
                return Ok(None);
            }
            contains_point(&next, &asm.eval(functions, z), s).map(Some)
        })?;
        let outside = checks.iter().filter(|c| c.is_none()).count();
        if outside > 0 {
            r.warnings.push(format!("{outside} of {} samples of R{k} leave the update-set domain", zs.len()));
        }
        r.audit(
            format!("R{} contains simulated successors of R{k}", k + 1),
            zs.len() - outside,
            checks.iter().filter(|c| **c == Some(false)).count(),
        );
        r.end(format!("audit R{}", k + 1));
    }
    Ok(())
}
