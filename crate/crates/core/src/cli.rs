//! Batch driver behind the `qd` binary.
//!
//! A run is described by a [`RunConfig`], read from TOML and then
//! overridden by `QD_SEED` and command-line flags, in that order:
//!
//! ```toml
//! suite = "all"
//! seed = 7
//! points = 50
//! a_max = 3
//! order = 4
//! format = "json"
//!
//! [shapes]
//! m = [2, 3]
//! n = [1, 3]
//!
//! [beta]
//! source = "sweep"
//! count = 2
//! mode = "both"
//! ```

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::check_identities;
use crate::determinantal::{
    codim, cy_classify, cy_classify_dim, dim, generic_sweep_sample, scenario_preset, spread_indices, BaseKind,
    DetConfig, Scenario,
};
use crate::duality::{
    offsets_consistent, verify_kernels, verify_proposition, verify_theorem, Case, CheckRecord, FixedPointScope,
    Report, Which,
};
use crate::hypergeometric::{factored_degrees, restricted_factor, FactorSpec, Form, Model};
use crate::localization::{fixed_points, BetaClass, DegreeVector, FixedPoint, ModelShape};
use crate::quiver::{
    build_basic, build_gn_extension, build_pax, build_paxy, mutate, quiver_equal, superpotential_signature, Quiver,
};

pub const DEFAULT_SEED: u64 = 7;
pub const SEED_ENV: &str = "QD_SEED";

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("invalid config: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
}

fn invalid(msg: impl Into<String>) -> ConfigError {
    ConfigError::Invalid(msg.into())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Propositions,
    Theorems,
    #[value(name = "lemma_forms", alias = "lemma-forms")]
    LemmaForms,
    Quiver,
    Determinantal,
    All,
}

impl Suite {
    fn includes(self, other: Suite) -> bool {
        self == Suite::All || self == other
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum AmpleMode {
    Ample,
    Unconstrained,
    Both,
}

/// Where the β classes of a run come from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum BetaSource {
    /// `count` evenly spaced classes per shape from the `[-2, 2]` sweep,
    /// per ampleness mode.
    Sweep {
        #[serde(default = "default_beta_count")]
        count: usize,
        #[serde(default = "default_ample_mode")]
        mode: AmpleMode,
    },
    /// A named scenario; replaces the shape ranges.
    Preset { scenario: String },
    /// Explicit classes, used on every shape of matching lengths.
    List { list: Vec<BetaClass> },
}

fn default_beta_count() -> usize {
    2
}

fn default_ample_mode() -> AmpleMode {
    AmpleMode::Both
}

impl Default for BetaSource {
    fn default() -> Self {
        BetaSource::Sweep { count: default_beta_count(), mode: default_ample_mode() }
    }
}

/// Inclusive ranges; `n` defaults to `1..=m` and `r` to `1..m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ShapeRanges {
    pub m: [usize; 2],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<[usize; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<[usize; 2]>,
}

impl Default for ShapeRanges {
    fn default() -> Self {
        ShapeRanges { m: [2, 3], n: None, r: None }
    }
}

impl ShapeRanges {
    pub fn exact(m: usize, n: usize, r: usize) -> Self {
        ShapeRanges { m: [m, m], n: Some([n, n]), r: Some([r, r]) }
    }

    pub fn shapes(&self) -> Vec<ModelShape> {
        let mut out = Vec::new();
        for m in self.m[0]..=self.m[1] {
            let [nlo, nhi] = self.n.unwrap_or([1, m]);
            let [rlo, rhi] = self.r.unwrap_or([1, m.saturating_sub(1)]);
            for n in nlo.max(1)..=nhi.min(m) {
                for r in rlo.max(1)..=rhi.min(m.saturating_sub(1)) {
                    if let Ok(shape) = ModelShape::new(m, n, r) {
                        out.push(shape);
                    }
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub suite: Suite,
    pub seed: u64,
    pub points: usize,
    pub a_max: usize,
    pub order: usize,
    pub format: OutputFormat,
    pub fail_fast: bool,
    pub fixed_points: FixedPointScope,
    /// Degree vectors per (model, β, fixed point) in the lemma suite.
    pub lemma_degrees: usize,
    pub quiver_max_m: usize,
    pub shapes: ShapeRanges,
    pub beta: BetaSource,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            suite: Suite::All,
            seed: DEFAULT_SEED,
            points: 50,
            a_max: 3,
            order: 4,
            format: OutputFormat::Text,
            fail_fast: false,
            fixed_points: FixedPointScope::All,
            lemma_degrees: 4,
            quiver_max_m: 6,
            shapes: ShapeRanges::default(),
            beta: BetaSource::default(),
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        Ok(toml::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.into(), source })?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Apply a `QD_SEED` value.
    pub fn apply_env_seed(&mut self, value: Option<&str>) -> Result<(), ConfigError> {
        if let Some(v) = value {
            self.seed = v.trim().parse().map_err(|_| invalid(format!("{SEED_ENV}={v:?} is not a seed")))?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.points == 0 {
            return Err(invalid("points must be >= 1"));
        }
        let ranges = [Some(self.shapes.m), self.shapes.n, self.shapes.r];
        if ranges.iter().flatten().any(|[lo, hi]| lo > hi) {
            return Err(invalid("empty shape range"));
        }
        if self.suite.includes(Suite::Theorems) && self.order == 0 {
            return Err(invalid("theorem checks need order >= 1"));
        }
        if self.lemma_degrees == 0 {
            return Err(invalid("lemma_degrees must be >= 1"));
        }
        if self.suite.includes(Suite::Quiver) && self.quiver_max_m < 2 {
            return Err(invalid("quiver_max_m must be >= 2"));
        }
        if let BetaSource::Sweep { count: 0, .. } = self.beta {
            return Err(invalid("beta count must be >= 1"));
        }
        self.cases().map(|_| ())
    }

    /// Shapes with their β classes.
    pub fn cases(&self) -> Result<Vec<(ModelShape, Vec<BetaClass>)>, ConfigError> {
        let needs_shapes = [Suite::Propositions, Suite::Theorems, Suite::LemmaForms].iter().any(|s| self.suite.includes(*s));
        if let BetaSource::Preset { scenario } = &self.beta {
            let scenario: Scenario = scenario.parse().map_err(|e| invalid(format!("{e}")))?;
            let (shape, betas) = scenario_preset(&scenario).map_err(|e| invalid(format!("{e}")))?;
            return Ok(vec![(shape, betas)]);
        }
        let shapes = self.shapes.shapes();
        if shapes.is_empty() && needs_shapes {
            return Err(invalid("shape ranges contain no valid (m, n, r)"));
        }
        let mut out = Vec::new();
        for shape in shapes {
            let betas = match &self.beta {
                BetaSource::Sweep { count, mode } => {
                    let mut b = Vec::new();
                    if matches!(mode, AmpleMode::Ample | AmpleMode::Both) {
                        b.extend(generic_sweep_sample(&shape, true, *count));
                    }
                    if matches!(mode, AmpleMode::Unconstrained | AmpleMode::Both) {
                        b.extend(generic_sweep_sample(&shape, false, *count));
                    }
                    b
                }
                BetaSource::List { list } => {
                    let mut b = Vec::new();
                    for beta in list {
                        let checked = BetaClass::new(beta.bx().to_vec(), beta.bz().to_vec(), beta.is_ample_flagged())
                            .map_err(|e| invalid(format!("{e}")))?;
                        if checked.clone().for_shape(&shape).is_ok() {
                            b.push(checked);
                        }
                    }
                    b
                }
                BetaSource::Preset { .. } => unreachable!(),
            };
            if !betas.is_empty() {
                out.push((shape, betas));
            }
        }
        if out.is_empty() && needs_shapes {
            return Err(invalid("no β class fits any selected shape"));
        }
        Ok(out)
    }
}

enum Job {
    Proposition { which: Which, shape: ModelShape, beta: BetaClass },
    Theorem { which: Which, shape: ModelShape, beta: BetaClass },
    Offsets { shape: ModelShape, beta: BetaClass },
    Kernels,
    Lemma { model: Model, shape: ModelShape, beta: BetaClass, fp: FixedPoint },
    QuiverMutation { m: usize, n: usize, r: usize },
    GnExtension,
    Determinantal,
}

fn jobs(cfg: &RunConfig, cases: &[(ModelShape, Vec<BetaClass>)]) -> Vec<Job> {
    let mut out = Vec::new();
    let each = |f: &mut dyn FnMut(ModelShape, &BetaClass)| {
        for (shape, betas) in cases {
            for beta in betas {
                f(*shape, beta);
            }
        }
    };
    if cfg.suite.includes(Suite::LemmaForms) {
        each(&mut |shape, beta| {
            for model in Model::ALL {
                for fp in fixed_points(model.side(), &shape) {
                    out.push(Job::Lemma { model, shape, beta: beta.clone(), fp });
                }
            }
        });
    }
    if cfg.suite.includes(Suite::Propositions) {
        each(&mut |shape, beta| {
            for which in [Which::Gr, Which::PaxPaxy] {
                out.push(Job::Proposition { which, shape, beta: beta.clone() });
            }
        });
    }
    if cfg.suite.includes(Suite::Theorems) {
        each(&mut |shape, beta| {
            for which in [Which::Gr, Which::PaxPaxy] {
                out.push(Job::Theorem { which, shape, beta: beta.clone() });
            }
            out.push(Job::Offsets { shape, beta: beta.clone() });
        });
        out.push(Job::Kernels);
    }
    if cfg.suite.includes(Suite::Quiver) {
        for m in 2..=cfg.quiver_max_m {
            for n in 1..=m {
                for r in 1..m {
                    out.push(Job::QuiverMutation { m, n, r });
                }
            }
        }
        out.push(Job::GnExtension);
    }
    if cfg.suite.includes(Suite::Determinantal) {
        out.push(Job::Determinantal);
    }
    out
}

fn error_record(identity: &str, err: impl std::fmt::Display) -> CheckRecord {
    CheckRecord::new(identity, "check could not be evaluated").exact(false).with_detail(err.to_string())
}

fn single(record: CheckRecord) -> Report {
    let mut r = Report::new();
    r.push(record);
    r
}

impl Job {
    fn run(&self, cfg: &RunConfig) -> Report {
        let start = Instant::now();
        let mut report = match self {
            Job::Proposition { which, shape, beta } => {
                verify_proposition(Case::of(shape), *which, shape, beta, cfg.a_max, cfg.seed, cfg.points)
                    .unwrap_or_else(|e| single(error_record("prop", e).with_shape(*shape).with_beta(beta.clone())))
            }
            Job::Theorem { which, shape, beta } => {
                verify_theorem(*which, Case::of(shape), shape, beta, cfg.order, cfg.seed, cfg.points, cfg.fixed_points)
                    .unwrap_or_else(|e| single(error_record("thm", e).with_shape(*shape).with_beta(beta.clone())))
            }
            Job::Offsets { shape, beta } => single(
                CheckRecord::new("thm.offsets", "after the change of Novikov variables both sides start at the same q1 power")
                    .with_shape(*shape)
                    .with_beta(beta.clone())
                    .exact(offsets_consistent(shape, beta)),
            ),
            Job::Kernels => verify_kernels(5, cfg.seed, cfg.points).unwrap_or_else(|e| single(error_record("kernel", e))),
            Job::Lemma { model, shape, beta, fp } => single(lemma_check(*model, shape, beta, fp, cfg)),
            Job::QuiverMutation { m, n, r } => quiver_checks(*m, *n, *r),
            Job::GnExtension => gn_extension_checks(),
            Job::Determinantal => determinantal_checks(),
        };
        let ms = start.elapsed().as_millis() as u64;
        if report.records.len() == 1 && report.records[0].elapsed_ms == 0 {
            report.records[0].elapsed_ms = ms;
        }
        report
    }
}

/// Degree vectors with entries in `[-3, 3]` for the lemma suite: evenly
/// spaced, taking those whose factored form is nonzero first.
pub fn lemma_degree_vectors(
    model: Model,
    fp: &FixedPoint,
    beta: &BetaClass,
    shape: &ModelShape,
    count: usize,
) -> Vec<DegreeVector> {
    let len = shape.rank(model.side());
    let total = 7usize.pow(len as u32);
    let (mut live, mut dead) = (Vec::new(), Vec::new());
    for mut idx in 0..total {
        let mut d = vec![0i64; len];
        for slot in d.iter_mut().rev() {
            *slot = (idx % 7) as i64 - 3;
            idx /= 7;
        }
        let d = DegreeVector(d);
        if factored_degrees(model, fp, beta, &d, shape).entries().iter().all(|&a| a >= 0) {
            live.push(d);
        } else {
            dead.push(d);
        }
    }
    let mut out: Vec<DegreeVector> = spread_indices(live.len(), count).into_iter().map(|i| live[i].clone()).collect();
    let missing = count - out.len();
    out.extend(spread_indices(dead.len(), missing).into_iter().map(|i| dead[i].clone()));
    out
}

fn lemma_check(model: Model, shape: &ModelShape, beta: &BetaClass, fp: &FixedPoint, cfg: &RunConfig) -> CheckRecord {
    let id = format!("lemma.{}", model.to_string().to_lowercase());
    let statement = format!("direct and factored forms of the {model} factor agree after restriction to a fixed point");
    let base = CheckRecord::new(&id, statement).with_shape(*shape).with_beta(beta.clone()).with_fixed_point(fp.to_string());
    let degrees = lemma_degree_vectors(model, fp, beta, shape, cfg.lemma_degrees);
    let mut pairs = Vec::with_capacity(degrees.len());
    for d in &degrees {
        let a = factored_degrees(model, fp, beta, d, shape);
        let direct = FactorSpec { model, form: Form::Direct, fp: fp.clone(), beta: beta.clone(), degrees: d.clone() };
        let factored = FactorSpec { model, form: Form::Factored, fp: fp.clone(), beta: beta.clone(), degrees: a };
        match (restricted_factor(&direct, shape), restricted_factor(&factored, shape)) {
            (Ok(l), Ok(r)) => pairs.push((l, r)),
            (Err(e), _) | (_, Err(e)) => return base.exact(false).with_detail(e.to_string()),
        }
    }
    match check_identities(&pairs, shape, cfg.seed, cfg.points) {
        Ok(outcome) => {
            let mut rec = base.with_outcome(&outcome);
            if let Some(w) = &rec.witness {
                let d = degrees[w.pair].entries().to_vec();
                rec = rec.with_detail(format!("d={d:?}"));
            }
            rec
        }
        Err(e) => base.exact(false).with_detail(e.to_string()),
    }
}

fn quiver_checks(m: usize, n: usize, r: usize) -> Report {
    let mut report = Report::new();
    let shape = ModelShape::new(m, n, r).ok();
    let rec = |id: &str, statement: &str, pass: bool| {
        let mut c = CheckRecord::new(id, statement).exact(pass);
        if let Some(s) = shape {
            c = c.with_shape(s);
        }
        c
    };
    let pax = build_pax(m, n, r);
    let paxy = build_paxy(m, n, m - r);
    let (pax, paxy) = match (pax, paxy) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return single(error_record("quiver.pax_mutation", e)),
    };
    match mutate(&pax, "gauge") {
        Ok(res) => {
            let same = quiver_equal(&res.quiver, &paxy) && res.new_gauge_rank == m - r;
            report.push(rec("quiver.pax_mutation", "mutating the PAX quiver at its gauge node gives the PAXY quiver", same));
            let w = superpotential_signature(&res.quiver) == superpotential_signature(&paxy);
            report.push(rec("quiver.pax_superpotential", "the mutated superpotential is P·A − P·Y·X up to rotation", w));
            let frozen = pax.frozen_edges() == res.quiver.frozen_edges();
            report.push(rec("quiver.frozen_edges", "frozen edges are unchanged by mutation", frozen));
            let back = mutate(&res.quiver, "gauge").map(|b| b.new_gauge_rank == r).unwrap_or(false);
            report.push(rec("quiver.rank_involution", "mutating twice restores the gauge rank", back));
        }
        Err(e) => report.push(error_record("quiver.pax_mutation", e)),
    }
    let basic_ok = build_basic(m, n, r)
        .ok()
        .and_then(|q| mutate(&q, "gauge").ok())
        .map(|res| {
            let new_edge = res.added_edges.first().and_then(|id| res.quiver.edge(id));
            res.new_gauge_rank == m - r && new_edge.is_some_and(|e| e.src == "F" && e.dst == "E")
        })
        .unwrap_or(false);
    report.push(rec("quiver.basic_mutation", "mutating F → r → E gives rank m − r and a new edge F → E", basic_ok));
    report
}

fn gn_extension_checks() -> Report {
    let mut report = Report::new();
    for m in 1..=4 {
        for n in 1..=4 {
            for r in 1..=3 {
                let expected = m.max(n) as i64 - r as i64;
                let got = build_gn_extension(m, n, r).ok().and_then(|q| mutate(&q, "gr").ok()).map(|res| res.new_gauge_rank as i64);
                let pass = if expected >= 1 { got == Some(expected) } else { got.is_none() };
                report.push(
                    CheckRecord::new("quiver.gn_extension_rank", "mutation of the extended quiver follows max(N_in, N_out) − r")
                        .with_detail(format!("m={m} n={n} r={r}"))
                        .exact(pass),
                );
            }
        }
    }
    report
}

fn determinantal_checks() -> Report {
    let mut report = Report::new();
    let expected = vec![(4, 5, 4), (2, 4, 7), (1, 5, 19)];
    let sorted = |mut v: Vec<(usize, usize, usize)>| {
        v.sort();
        v
    };
    let got = cy_classify(8, 30);
    report.push(
        CheckRecord::new("det.cy_threefolds", "Calabi–Yau threefold loci with m = n, m <= 8, N <= 30")
            .with_detail(format!("{got:?}"))
            .exact(sorted(got.clone()) == sorted(expected.clone())),
    );
    report.push(
        CheckRecord::new("det.cy_bounds_stable", "no further Calabi–Yau threefold loci up to m = 12, N = 60")
            .exact(sorted(cy_classify(12, 60)) == sorted(expected)),
    );
    let gn = DetConfig::new(4, 4, 2, BaseKind::Proj(7)).expect("valid");
    report.push(CheckRecord::new("det.gn_codim", "rank <= 2 locus of a 4 × 4 map has codimension 4").exact(codim(&gn) == 4));
    report.push(CheckRecord::new("det.gn_dim", "that locus on P^7 is a threefold").exact(dim(&gn) == Some(3)));
    let additive = got.iter().all(|&(s, m, big_n)| {
        let cfg = DetConfig { m, n: m, s, base: BaseKind::Proj(big_n) };
        dim(&cfg) == Some(big_n as i64 - codim(&cfg) as i64) && codim(&cfg) == (m - s) * (m - s)
    });
    report.push(CheckRecord::new("det.dim_codim", "dimension plus codimension is N for each Calabi–Yau triple").exact(additive));
    let monotone = (1..=8).all(|m| {
        (1..=m).all(|n| (1..n).all(|s| codim(&DetConfig { m, n, s: s - 1, base: BaseKind::Formal }) > codim(&DetConfig { m, n, s, base: BaseKind::Formal })))
    });
    report.push(CheckRecord::new("det.codim_monotone", "codimension strictly decreases in s").exact(monotone));
    let surfaces = cy_classify_dim(8, 30, 2);
    report.push(
        CheckRecord::new("det.cy_surfaces", "Calabi–Yau surface loci in the same range")
            .with_detail(format!("{surfaces:?}"))
            .exact(true),
    );
    report
}

/// Run the configured suites.
pub fn run(cfg: &RunConfig) -> Result<Report, ConfigError> {
    cfg.validate()?;
    let cases = cfg.cases()?;
    let jobs = jobs(cfg, &cases);
    let mut report = Report::new();
    if cfg.fail_fast {
        for job in &jobs {
            let part = job.run(cfg);
            let failed = !part.passed;
            report.extend(part);
            if failed {
                break;
            }
        }
    } else {
        let parts: Vec<Report> = jobs.par_iter().map(|j| j.run(cfg)).collect();
        report.records = parts.into_iter().flat_map(|p| p.records).collect();
        report.extend(Report::new());
    }
    report.config = Some(serde_json::to_value(cfg).expect("config serializes"));
    Ok(report)
}

/// Inclusive range flag: `3`, `2..4` or `2..=4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RangeArg(pub [usize; 2]);

impl FromStr for RangeArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("bad range `{s}`"));
        match s.split_once("..") {
            None => {
                let v = num(s)?;
                Ok(RangeArg([v, v]))
            }
            Some((lo, hi)) => Ok(RangeArg([num(lo)?, num(hi.trim_start_matches('='))?])),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "qd", version, about = "Exact checks of duality identities and quiver mutations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run verification suites and print a report.
    Verify(Box<VerifyArgs>),
    /// Mutate a quiver read from JSON at a gauge node.
    Mutate(MutateArgs),
    /// List Calabi–Yau determinantal loci with m = n.
    ClassifyCy(ClassifyArgs),
    /// Print a scenario preset as a run config.
    Scenario(ScenarioArgs),
    /// Write a quiver as Graphviz DOT (or JSON).
    ExportDot(ExportArgs),
}

#[derive(Args, Debug, Default)]
pub struct VerifyArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub suite: Option<Suite>,
    #[arg(long)]
    pub m: Option<RangeArg>,
    #[arg(long)]
    pub n: Option<RangeArg>,
    #[arg(long)]
    pub r: Option<RangeArg>,
    #[arg(long)]
    pub a_max: Option<usize>,
    #[arg(long)]
    pub order: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
    #[arg(long)]
    pub fail_fast: bool,
    /// β classes per shape and ampleness mode.
    #[arg(long)]
    pub beta_count: Option<usize>,
    #[arg(long, value_enum)]
    pub ample: Option<AmpleMode>,
    /// Take shape and β classes from a preset such as GN_3FOLD.
    #[arg(long)]
    pub scenario: Option<String>,
    /// Theorem checks at every fixed point (`all`) or the standard one.
    #[arg(long)]
    pub fixed_points: Option<String>,
    #[arg(long)]
    pub lemma_degrees: Option<usize>,
    #[arg(long)]
    pub quiver_max_m: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Zero the timing fields so equal runs give equal bytes.
    #[arg(long)]
    pub no_timing: bool,
    /// Print the resolved config as TOML and exit.
    #[arg(long)]
    pub print_config: bool,
}

#[derive(Args, Debug)]
pub struct MutateArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value = "gauge")]
    pub node: String,
    /// Print the full mutation record instead of the quiver.
    #[arg(long)]
    pub full: bool,
    #[arg(long, value_enum, default_value = "json")]
    pub format: QuiverFormat,
}

#[derive(Args, Debug)]
pub struct ClassifyArgs {
    #[arg(long, default_value_t = 8)]
    pub max_m: usize,
    /// Bound on the projective space dimension N.
    #[arg(long, default_value_t = 30)]
    pub max_n: usize,
    #[arg(long, default_value_t = 3)]
    pub dim: i64,
    #[arg(long, value_enum, default_value = "text")]
    pub format: OutputFormat,
}

#[derive(Args, Debug)]
pub struct ScenarioArgs {
    /// `GN_3FOLD`, `GENERIC(m,n,r)` or `GENERIC(m,n,r,ample)`.
    #[arg(long)]
    pub name: String,
    #[arg(long, value_enum, default_value = "toml")]
    pub format: ScenarioFormat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ScenarioFormat {
    Toml,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum QuiverFormat {
    Json,
    Dot,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Builtin {
    Pax,
    Paxy,
    Basic,
    GnExt,
}

#[derive(Args, Debug)]
pub struct ExportArgs {
    #[arg(long, conflicts_with = "builtin")]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub builtin: Option<Builtin>,
    #[arg(long, default_value_t = 5)]
    pub m: usize,
    #[arg(long, default_value_t = 4)]
    pub n: usize,
    /// Gauge rank (`s` for PAXY).
    #[arg(long, default_value_t = 3)]
    pub r: usize,
    #[arg(long, value_enum, default_value = "dot")]
    pub format: QuiverFormat,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Resolve config file, `QD_SEED` and flags, in increasing precedence.
pub fn resolve_config(args: &VerifyArgs, env_seed: Option<&str>) -> Result<RunConfig, ConfigError> {
    let mut cfg = match &args.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    cfg.apply_env_seed(env_seed)?;
    if let Some(s) = args.suite {
        cfg.suite = s;
    }
    if let Some(RangeArg(m)) = args.m {
        cfg.shapes.m = m;
    }
    if let Some(RangeArg(n)) = args.n {
        cfg.shapes.n = Some(n);
    }
    if let Some(RangeArg(r)) = args.r {
        cfg.shapes.r = Some(r);
    }
    macro_rules! take {
        ($($field:ident),*) => {$(if let Some(v) = args.$field { cfg.$field = v; })*};
    }
    take!(a_max, order, seed, points, format, lemma_degrees, quiver_max_m);
    if args.fail_fast {
        cfg.fail_fast = true;
    }
    if let Some(fp) = &args.fixed_points {
        cfg.fixed_points = match fp.as_str() {
            "all" => FixedPointScope::All,
            "standard" => FixedPointScope::Standard,
            other => return Err(invalid(format!("fixed points must be `all` or `standard`, got `{other}`"))),
        };
    }
    if let Some(name) = &args.scenario {
        cfg.beta = BetaSource::Preset { scenario: name.clone() };
    }
    if args.beta_count.is_some() || args.ample.is_some() {
        let (count, mode) = match cfg.beta {
            BetaSource::Sweep { count, mode } => (count, mode),
            _ => (default_beta_count(), default_ample_mode()),
        };
        cfg.beta = BetaSource::Sweep { count: args.beta_count.unwrap_or(count), mode: args.ample.unwrap_or(mode) };
    }
    cfg.validate()?;
    Ok(cfg)
}

/// The config a scenario expands to.
pub fn scenario_config(name: &str) -> Result<RunConfig, ConfigError> {
    let scenario: Scenario = name.parse().map_err(|e| invalid(format!("{e}")))?;
    let (shape, betas) = scenario_preset(&scenario).map_err(|e| invalid(format!("{e}")))?;
    Ok(RunConfig {
        shapes: ShapeRanges::exact(shape.m(), shape.n(), shape.r()),
        beta: BetaSource::List { list: betas },
        ..RunConfig::default()
    })
}

fn emit(text: &str, path: Option<&Path>, out: &mut dyn Write) -> Result<(), ConfigError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|source| ConfigError::Io { path: p.into(), source }),
        None => out.write_all(text.as_bytes()).map_err(|source| ConfigError::Io { path: "<stdout>".into(), source }),
    }
}

fn read_quiver(path: &Path) -> Result<Quiver, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.into(), source })?;
    Quiver::from_json(&text).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

fn dispatch(cli: Cli, env_seed: Option<&str>, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, ConfigError> {
    match cli.command {
        Command::Verify(args) => {
            let cfg = resolve_config(&args, env_seed)?;
            if args.print_config {
                emit(&cfg.to_toml(), None, out)?;
                return Ok(EXIT_PASS);
            }
            let report = run(&cfg)?;
            let text = match cfg.format {
                OutputFormat::Json => report.to_json(!args.no_timing) + "\n",
                OutputFormat::Text => report.to_text(),
            };
            emit(&text, args.output.as_deref(), out)?;
            if args.output.is_some() {
                let _ = writeln!(err, "{} checks, {} failed", report.checks, report.failures);
            }
            Ok(if report.passed { EXIT_PASS } else { EXIT_FAIL })
        }
        Command::Mutate(args) => {
            let q = read_quiver(&args.input)?;
            let res = mutate(&q, &args.node).map_err(|e| invalid(e.to_string()))?;
            for w in &res.warnings {
                let _ = writeln!(err, "warning: {w}");
            }
            let text = match (args.format, args.full) {
                (QuiverFormat::Dot, _) => res.quiver.to_dot(),
                (QuiverFormat::Json, true) => serde_json::to_string_pretty(&res).expect("serializes") + "\n",
                (QuiverFormat::Json, false) => res.quiver.to_json() + "\n",
            };
            emit(&text, None, out)?;
            Ok(EXIT_PASS)
        }
        Command::ClassifyCy(args) => {
            let triples = cy_classify_dim(args.max_m, args.max_n, args.dim);
            let text = match args.format {
                OutputFormat::Json => {
                    let rows: Vec<_> =
                        triples.iter().map(|&(s, m, n)| serde_json::json!({"s": s, "m": m, "N": n})).collect();
                    serde_json::to_string_pretty(&serde_json::json!({"schema": 1, "triples": rows})).expect("json") + "\n"
                }
                OutputFormat::Text => triples.iter().map(|(s, m, n)| format!("(s, m, N) = ({s}, {m}, {n})\n")).collect(),
            };
            emit(&text, None, out)?;
            Ok(EXIT_PASS)
        }
        Command::Scenario(args) => {
            let cfg = scenario_config(&args.name)?;
            let text = match args.format {
                ScenarioFormat::Toml => cfg.to_toml(),
                ScenarioFormat::Json => serde_json::to_string_pretty(&cfg).expect("json") + "\n",
            };
            emit(&text, None, out)?;
            Ok(EXIT_PASS)
        }
        Command::ExportDot(args) => {
            let q = match (&args.input, args.builtin) {
                (Some(path), _) => read_quiver(path)?,
                (None, b) => {
                    let built = match b.unwrap_or(Builtin::Pax) {
                        Builtin::Pax => build_pax(args.m, args.n, args.r),
                        Builtin::Paxy => build_paxy(args.m, args.n, args.r),
                        Builtin::Basic => build_basic(args.m, args.n, args.r),
                        Builtin::GnExt => build_gn_extension(args.m, args.n, args.r),
                    };
                    built.map_err(|e| invalid(e.to_string()))?
                }
            };
            let text = match args.format {
                QuiverFormat::Dot => q.to_dot(),
                QuiverFormat::Json => q.to_json() + "\n",
            };
            emit(&text, args.output.as_deref(), out)?;
            Ok(EXIT_PASS)
        }
    }
}

/// Parse `args` and run; returns the process exit code.
pub fn main_with<I, T>(args: I, env_seed: Option<&str>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_PASS };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match dispatch(cli, env_seed, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_CONFIG
        }
    }
}

pub fn main() -> i32 {
    let env_seed = std::env::var(SEED_ENV).ok();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    main_with(std::env::args_os(), env_seed.as_deref(), &mut stdout.lock(), &mut stderr.lock())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str], env: Option<&str>) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = main_with(std::iter::once("qd").chain(args.iter().copied()), env, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn config_round_trips_through_toml() {
        let cfg = RunConfig::default();
        assert_eq!(RunConfig::from_toml(&cfg.to_toml()).unwrap(), cfg);
        let gn = scenario_config("GN_3FOLD").unwrap();
        assert_eq!(RunConfig::from_toml(&gn.to_toml()).unwrap(), gn);
        assert!(RunConfig::from_toml("bogus = 1").is_err());
        let partial = RunConfig::from_toml("suite = \"quiver\"\n[beta]\nsource = \"sweep\"\ncount = 5\n").unwrap();
        assert_eq!(partial.suite, Suite::Quiver);
        assert_eq!(partial.beta, BetaSource::Sweep { count: 5, mode: AmpleMode::Both });
    }

    #[test]
    fn seed_precedence() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        std::fs::write(&path, "seed = 11\n").unwrap();
        let mut args = VerifyArgs { config: Some(path), ..Default::default() };
        assert_eq!(resolve_config(&args, None).unwrap().seed, 11);
        assert_eq!(resolve_config(&args, Some("12")).unwrap().seed, 12);
        args.seed = Some(13);
        assert_eq!(resolve_config(&args, Some("12")).unwrap().seed, 13);
        assert!(resolve_config(&VerifyArgs::default(), Some("x")).is_err());
        assert_eq!(resolve_config(&VerifyArgs::default(), None).unwrap().seed, DEFAULT_SEED);
    }

    #[test]
    fn ranges_and_validation() {
        assert_eq!("3".parse::<RangeArg>().unwrap(), RangeArg([3, 3]));
        assert_eq!("2..4".parse::<RangeArg>().unwrap(), RangeArg([2, 4]));
        assert_eq!("2..=4".parse::<RangeArg>().unwrap(), RangeArg([2, 4]));
        assert!("a..b".parse::<RangeArg>().is_err());
        assert_eq!(ShapeRanges::default().shapes().len(), 2 + 6);
        let bad = RunConfig { points: 0, ..RunConfig::default() };
        assert!(bad.validate().is_err());
        let empty = RunConfig { shapes: ShapeRanges { m: [3, 2], n: None, r: None }, ..RunConfig::default() };
        assert!(empty.validate().is_err());
        let unknown = RunConfig { beta: BetaSource::Preset { scenario: "K3".into() }, ..RunConfig::default() };
        assert!(unknown.validate().is_err());
    }

    #[test]
    fn lemma_degrees_prefer_nonvanishing() {
        let shape = ModelShape::new(3, 2, 2).unwrap();
        let beta = BetaClass::new(vec![1, 0, -1], vec![2, 0], false).unwrap();
        let fp = FixedPoint::standard(Model::Pax.side(), &shape);
        let ds = lemma_degree_vectors(Model::Pax, &fp, &beta, &shape, 10);
        assert_eq!(ds.len(), 10);
        let live = ds.iter().filter(|d| factored_degrees(Model::Pax, &fp, &beta, d, &shape).entries().iter().all(|&a| a >= 0));
        assert!(live.count() >= 5);
        assert!(ds.iter().all(|d| d.entries().iter().all(|v| (-3..=3).contains(v))));
    }

    #[test]
    fn spec_example_invocations() {
        let (code, out, _) =
            call(&["verify", "--suite", "propositions", "--m", "3", "--n", "1", "--r", "1", "--a-max", "2", "--seed", "7", "--points", "50"], None);
        assert_eq!(code, EXIT_PASS, "{out}");
        let (code, out, _) = call(&["classify-cy", "--max-m", "8", "--max-n", "30"], None);
        assert_eq!(code, EXIT_PASS);
        assert_eq!(out.lines().count(), 3);
        assert!(out.contains("(2, 4, 7)"));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(call(&["verify", "--points", "0"], None).0, EXIT_CONFIG);
        assert_eq!(call(&["verify", "--suite", "nonsense"], None).0, EXIT_CONFIG);
        assert_eq!(call(&["scenario", "--name", "K3"], None).0, EXIT_CONFIG);
        assert_eq!(call(&["verify", "--suite", "quiver", "--quiver-max-m", "3"], None).0, EXIT_PASS);
        assert_eq!(call(&["--help"], None).0, EXIT_PASS);
    }

    #[test]
    fn mutate_and_export() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("pax.json");
        let (code, json, _) = call(&["export-dot", "--builtin", "pax", "--format", "json"], None);
        assert_eq!(code, 0);
        std::fs::write(&path, json).unwrap();
        let (code, out, _) = call(&["mutate", "--input", path.to_str().unwrap(), "--node", "gauge"], None);
        assert_eq!(code, 0);
        let mutated = Quiver::from_json(&out).unwrap();
        assert!(quiver_equal(&mutated, &build_paxy(5, 4, 2).unwrap()));
        assert_eq!(call(&["mutate", "--input", path.to_str().unwrap(), "--node", "E"], None).0, EXIT_CONFIG);
        let (_, dot, _) = call(&["export-dot", "--input", path.to_str().unwrap()], None);
        assert!(dot.contains("style=dashed"));
    }

    #[test]
    fn fail_fast_stops_early() {
        let cfg = RunConfig { suite: Suite::Determinantal, fail_fast: true, ..RunConfig::default() };
        let report = run(&cfg).unwrap();
        assert!(report.passed);
        assert_eq!(report.checks, 7);
    }
}
