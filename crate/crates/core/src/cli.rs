//! Command-line front end. Every run resolves its flags into a [`Cli`]
//! value, writes its outputs atomically and records a manifest holding the
//! resolved configuration, from which `replay` reproduces the run.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::bounds::{
    evaluate, pmodel_mean_exact, pmodel_transfer, pmodel_transfer_exact, BoundQuery, BoundResult, ConstantsPack,
    TheoremId,
};
use crate::combinatorics::{decimal_rational, rational_to_f64};
use crate::error::Error;
use crate::families::{
    build_kap, build_linear_system, build_schur, build_sidon, random_hypergraph, LinearSystemSpec,
};
use crate::hypergraph::{Hypergraph, RegularityMode, DEFAULT_SET_BUDGET};
use crate::lab::{
    exact_distribution, pmodel_exact_tail, stream_rng, tail_estimate, Ap3Counter, Ap3Method, InducedCounter,
    SubsetModel,
};
use crate::martingale::{random_trajectory, verify_reconstruction};
use crate::partite::{build_partite, build_weights, niceness_check, simple_construction, PartiteSpec};

/// Parsed and resolved command line.
#[derive(Parser, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[command(name = "hyperdev", version, about = "Deviation tools for induced edge counts in hypergraphs")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Global {
    /// Seed for every random choice of the run.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (all cores by default).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Largest enumeration (subsets, r-sets) attempted exactly.
    #[arg(long, global = true, env = "HYPERDEV_BUDGET", default_value_t = DEFAULT_SET_BUDGET)]
    pub budget: u64,
    /// JSON file with `c1` and `c2` (or `ln_c2`) for the bounds with
    /// unspecified constants.
    #[arg(long, global = true)]
    pub constants: Option<PathBuf>,
    /// Where to write the manifest (default: next to `--out`, else stderr).
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    Kap,
    Schur,
    Sidon,
    Linsys,
    Random,
    /// Edge-list file given by `--input`.
    File,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyArgs {
    #[arg(long, value_enum)]
    pub family: FamilyKind,
    /// Modulus (prime) or vertex count.
    #[arg(long)]
    pub n: Option<u64>,
    /// Uniformity for kap and random.
    #[arg(long)]
    pub k: Option<usize>,
    /// linsys: file with l rows of k integers.
    #[arg(long)]
    pub matrix: Option<PathBuf>,
    /// file: edge list.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// random: number of edges.
    #[arg(long)]
    pub edges: Option<usize>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    M,
    P,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelKind {
    Naive,
    Ntt,
    Fft,
    Bitset,
}

#[derive(Subcommand, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "subcommand", rename_all = "kebab-case")]
pub enum Command {
    /// Write a family as an edge list.
    Build {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Edge count and r-set degree statistics as JSON.
    Analyze {
        #[command(flatten)]
        family: FamilyArgs,
        /// Tuple sizes to report (default 1..k-1).
        #[arg(long, value_delimiter = ',')]
        r: Vec<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the martingale reconstruction exactly on random orderings.
    VerifyMartingale {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        /// Increments X_1..X_r are compared with their bound (default k-1).
        #[arg(long)]
        r: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate a bound, optionally over a parameter grid, as CSV.
    Bounds {
        #[arg(long)]
        theorem: String,
        /// JSON file or inline JSON; bare keys are accepted.
        #[arg(long)]
        params: String,
        /// `field=start:stop:step` or `field=v1,v2,...`; repeatable.
        #[arg(long)]
        grid: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo tail estimates with Clopper-Pearson intervals, as CSV.
    Simulate {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, value_enum)]
        model: ModelKind,
        /// m for the m-model, p for the p-model.
        #[arg(long)]
        param: f64,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        thresholds: Vec<f64>,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0.95)]
        confidence: f64,
        /// Bound for the bound columns (default thm5.2 for 3-APs in the
        /// m-model, none otherwise).
        #[arg(long)]
        bound: Option<String>,
        /// Counting kernel for 3-APs; the explicit hypergraph otherwise.
        #[arg(long, value_enum)]
        kernel: Option<KernelKind>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Weighted ℓ-part construction (or a simple one) with a niceness report.
    Construct {
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = 0)]
        l: usize,
        #[arg(long)]
        s: usize,
        #[arg(long, default_value_t = 0.25)]
        gamma: f64,
        #[arg(long)]
        relaxed: bool,
        /// Use the small explicit example for r ≤ 3 instead.
        #[arg(long)]
        simple: bool,
        /// Vertex degree of the r = 1 simple example.
        #[arg(long, default_value_t = 2)]
        degree: usize,
        /// η allowed by condition (i) (default 3^{1-r}).
        #[arg(long)]
        eta_max: Option<f64>,
        /// Edge list destination.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Niceness report destination (default: `<out>.report.json`, else stdout).
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// P(D(B_p) > a) as a binomial mixture of m-model tails.
    Transfer {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        p: f64,
        #[arg(long, allow_negative_numbers = true)]
        a: f64,
        /// Estimate each m-model tail from this many samples instead of
        /// enumerating.
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rerun the configuration stored in a manifest.
    Replay {
        source: PathBuf,
        /// Replace the recorded output path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

impl Command {
    fn out(&self) -> Option<&PathBuf> {
        match self {
            Command::Build { out, .. }
            | Command::Analyze { out, .. }
            | Command::VerifyMartingale { out, .. }
            | Command::Bounds { out, .. }
            | Command::Simulate { out, .. }
            | Command::Construct { out, .. }
            | Command::Transfer { out, .. }
            | Command::Replay { out, .. } => out.as_ref(),
        }
    }

    fn set_out(&mut self, path: PathBuf) {
        match self {
            Command::Build { out, .. }
            | Command::Analyze { out, .. }
            | Command::VerifyMartingale { out, .. }
            | Command::Bounds { out, .. }
            | Command::Simulate { out, .. }
            | Command::Transfer { out, .. }
            | Command::Replay { out, .. } => *out = Some(path),
            Command::Construct { out, report, .. } => {
                if report.is_some() {
                    *report = Some(suffixed(&path, "report.json"));
                }
                *out = Some(path);
            }
        }
    }
}

/// Why a run failed; each kind has its own exit status.
#[derive(Debug, thiserror::Error)]
pub enum Failure {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("i/o failure: {0}")]
    Io(String),
    #[error("assertion failed: {0}")]
    Assertion(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Config(_) => 2,
            Failure::Io(_) => 3,
            Failure::Assertion(_) => 4,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(e) => Failure::Io(e.to_string()),
            other => Failure::Config(other.to_string()),
        }
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

/// Manifest: tool version plus the resolved configuration.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub config: Cli,
    pub outputs: Vec<PathBuf>,
}

/// Formats with 17 significant digits, in plain notation when the exponent
/// is moderate; trailing zeros are dropped.
pub fn fmt_f64(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() { "NaN".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').unwrap();
    let exp: i32 = exp.parse().unwrap();
    if (-5..17).contains(&exp) {
        let decimals = (16 - exp).max(0) as usize;
        let plain = format!("{x:.decimals$}");
        if plain.contains('.') {
            plain.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            plain
        }
    } else {
        let m = if mantissa.contains('.') {
            mantissa.trim_end_matches('0').trim_end_matches('.')
        } else {
            mantissa
        };
        format!("{m}e{exp}")
    }
}

fn suffixed(path: &Path, suffix: &str) -> PathBuf {
    PathBuf::from(format!("{}.{suffix}", path.display()))
}

/// Writes through a temporary file in the destination directory.
fn write_atomic(path: &Path, content: &[u8]) -> Outcome<()> {
    let io = |e: std::io::Error| Failure::Io(format!("{}: {e}", path.display()));
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(content).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

/// Collected outputs of a run, written only once everything succeeded.
#[derive(Default)]
struct Outputs {
    files: Vec<(PathBuf, String)>,
    stdout: String,
}

impl Outputs {
    fn emit(&mut self, dest: Option<&PathBuf>, content: String) {
        match dest {
            Some(p) => self.files.push((p.clone(), content)),
            None => self.stdout.push_str(&content),
        }
    }
}

fn read_text(path: &Path) -> Outcome<String> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn load_family(f: &FamilyArgs, seed: u64) -> Outcome<Hypergraph> {
    let need_n = || f.n.ok_or_else(|| Failure::Config("--n is required for this family".into()));
    let h = match f.family {
        FamilyKind::Kap => build_kap(need_n()?, f.k.unwrap_or(3))?,
        FamilyKind::Schur => build_schur(need_n()?)?,
        FamilyKind::Sidon => build_sidon(need_n()?)?,
        FamilyKind::Linsys => {
            let path = f.matrix.as_ref().ok_or_else(|| Failure::Config("linsys needs --matrix".into()))?;
            let spec = LinearSystemSpec::parse_matrix(&read_text(path)?, need_n()?)?;
            if let Some(k) = f.k {
                if k != spec.k() {
                    return Err(Failure::Config(format!("--k {k} disagrees with the {}-column matrix", spec.k())));
                }
            }
            build_linear_system(&spec)?
        }
        FamilyKind::Random => {
            let k = f.k.ok_or_else(|| Failure::Config("random needs --k".into()))?;
            let h = f.edges.ok_or_else(|| Failure::Config("random needs --edges".into()))?;
            random_hypergraph(need_n()? as usize, k, h, seed)?
        }
        FamilyKind::File => {
            let path = f.input.as_ref().ok_or_else(|| Failure::Config("file family needs --input".into()))?;
            let text = read_text(path)?;
            Hypergraph::read_edge_list(text.as_bytes())?
        }
    };
    if let (Some(k), FamilyKind::Schur | FamilyKind::Sidon) = (f.k, f.family) {
        if k != h.uniformity() {
            return Err(Failure::Config(format!("this family is {}-uniform, not {k}", h.uniformity())));
        }
    }
    Ok(h)
}

fn load_constants(g: &Global) -> Outcome<Option<ConstantsPack>> {
    match &g.constants {
        None => Ok(None),
        Some(p) => serde_json::from_str(&read_text(p)?)
            .map(Some)
            .map_err(|e| Failure::Config(format!("constants file {}: {e}", p.display()))),
    }
}

/// Evaluates with the given pack, or with the documented default when the
/// theorem needs one and none was supplied.
fn evaluate_with_defaults(theorem: TheoremId, q: &BoundQuery, pack: Option<&ConstantsPack>) -> Outcome<BoundResult> {
    let needs_pack = matches!(theorem, TheoremId::NearRegular | TheoremId::RegularVariant);
    if needs_pack && pack.is_none() {
        let k = q.k.ok_or_else(|| Failure::Config("k is required".into()))?;
        let r = q.r.ok_or_else(|| Failure::Config("r is required".into()))?;
        let mut res = evaluate(theorem, q, Some(&ConstantsPack::default_for(k, r)))?;
        let note = "default constants (non-canonical)";
        res.note = Some(match res.note {
            Some(n) => format!("{n}; {note}"),
            None => note.to_string(),
        });
        return Ok(res);
    }
    Ok(evaluate(theorem, q, pack)?)
}

/// Expands `field=start:stop:step` or `field=v1,v2` into values.
pub fn parse_grid(spec: &str) -> crate::Result<(String, Vec<f64>)> {
    let bad = || Error::Parse(format!("grid `{spec}` is not field=start:stop:step or field=v1,v2,..."));
    let (field, range) = spec.split_once('=').ok_or_else(bad)?;
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad());
    let values = if range.contains(':') {
        let parts: Vec<&str> = range.split(':').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let (start, stop, step) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
        if !(step > 0.0) || stop < start {
            return Err(bad());
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        (0..count).map(|i| start + i as f64 * step).collect()
    } else {
        range.split(',').map(num).collect::<crate::Result<Vec<f64>>>()?
    };
    Ok((field.trim().to_string(), values))
}

fn csv_value(v: &serde_json::Value) -> String {
    match v {
        serde_json::Value::Number(n) => n.as_f64().map(fmt_f64).unwrap_or_else(|| n.to_string()),
        serde_json::Value::String(s) => s.clone(),
        serde_json::Value::Array(items) => items.iter().map(csv_value).collect::<Vec<_>>().join(";"),
        other => other.to_string(),
    }
}

fn run_bounds(theorem: &str, params: &str, grid: &[String], pack: Option<&ConstantsPack>) -> Outcome<String> {
    let theorem = TheoremId::parse(theorem)?;
    let text = if Path::new(params).is_file() { read_text(Path::new(params))? } else { params.to_string() };
    let base = BoundQuery::from_json_relaxed(&text).map_err(|e| Failure::Config(format!("--params: {e}")))?;
    let mut queries = vec![base];
    for g in grid {
        let (field, values) = parse_grid(g)?;
        let mut next = Vec::with_capacity(queries.len() * values.len());
        for q in &queries {
            for &v in &values {
                let mut q = q.clone();
                q.set(&field, v)?;
                next.push(q);
            }
        }
        queries = next;
    }
    let mut rows = Vec::new();
    for q in &queries {
        let res = evaluate_with_defaults(theorem, q, pack)?;
        let serde_json::Value::Object(fields) = serde_json::to_value(q).map_err(Error::from)? else {
            unreachable!("queries serialize to objects")
        };
        rows.push((fields, res));
    }
    let columns: Vec<String> = rows[0].0.keys().cloned().collect();
    let mut out = String::new();
    writeln!(out, "theorem,{},value,log_value,valid,note", columns.join(",")).unwrap();
    for (fields, res) in rows {
        let params: Vec<String> = columns.iter().map(|c| fields.get(c).map(csv_value).unwrap_or_default()).collect();
        writeln!(
            out,
            "{},{},{},{},{},{}",
            theorem.name(),
            params.join(","),
            fmt_f64(res.value),
            fmt_f64(res.log_value),
            res.valid,
            res.note.unwrap_or_default().replace(',', ";")
        )
        .unwrap();
    }
    Ok(out)
}

fn json<T: Serialize>(v: &T) -> Outcome<String> {
    let mut s = serde_json::to_string_pretty(v).map_err(Error::from)?;
    s.push('\n');
    Ok(s)
}

#[derive(Serialize)]
struct AnalyzeReport {
    n: usize,
    k: usize,
    h: u64,
    degree_sum: u64,
    regularity: Vec<crate::hypergraph::RegularityReport>,
}

fn run_analyze(h: &Hypergraph, rs: &[usize], g: &Global) -> Outcome<String> {
    let k = h.uniformity();
    let rs: Vec<usize> = if rs.is_empty() { (1..k).collect() } else { rs.to_vec() };
    let mode = RegularityMode::Auto {
        budget: g.budget,
        samples: 100_000,
        seed: g.seed,
    };
    let regularity = rs
        .iter()
        .map(|&r| h.regularity_report(r, mode))
        .collect::<crate::Result<Vec<_>>>()?;
    json(&AnalyzeReport {
        n: h.vertex_count(),
        k,
        h: h.edge_count(),
        degree_sum: (0..h.vertex_count()).map(|v| h.vertex_degree(v)).sum(),
        regularity,
    })
}

fn run_verify(h: &Hypergraph, trials: usize, r: Option<usize>, g: &Global) -> Outcome<(String, String)> {
    let k = h.uniformity();
    let r = r.unwrap_or(k.saturating_sub(1).max(1));
    let reg = h.regularity_report(
        r,
        RegularityMode::Auto {
            budget: g.budget,
            samples: 100_000,
            seed: g.seed,
        },
    )?;
    let mut out = String::new();
    let ratio_cols: Vec<String> = (1..=r).map(|l| format!("max_abs_x{l}")).collect();
    writeln!(out, "trial,exact,pairs_checked,mismatches,max_ratio,violations,{}", ratio_cols.join(",")).unwrap();
    let (mut exact, mut violated) = (0usize, 0usize);
    for trial in 0..trials {
        let mut rng = stream_rng(g.seed, trial as u64);
        let t = random_trajectory(h, &mut rng);
        let check = verify_reconstruction(&t)?;
        let inc = t.check_increment_bound(r, &reg.eta)?;
        exact += check.exact() as usize;
        violated += !inc.passed() as usize;
        let abs: Vec<String> = inc.max_abs.iter().map(|&x| fmt_f64(x)).collect();
        writeln!(
            out,
            "{trial},{},{},{},{},{},{}",
            check.exact(),
            check.pairs_checked,
            check.mismatches.len(),
            fmt_f64(inc.max_ratio),
            inc.violations.len(),
            abs.join(",")
        )
        .unwrap();
    }
    let summary = format!(
        "{exact}/{trials} exact matches; increment bound with eta_{r} = {} ({}) violated in {violated} trials",
        fmt_f64(reg.eta_f64()),
        if reg.exact { "exact" } else { "sampled" }
    );
    if exact < trials {
        return Err(Failure::Assertion(format!("reconstruction mismatch: {summary}")));
    }
    if violated > 0 && reg.exact {
        return Err(Failure::Assertion(format!("increment bound: {summary}")));
    }
    Ok((out, summary))
}

fn counter_for(f: &FamilyArgs, h: &Hypergraph, kernel: Option<KernelKind>) -> Outcome<Option<Ap3Counter>> {
    let Some(kernel) = kernel else { return Ok(None) };
    if f.family != FamilyKind::Kap || h.uniformity() != 3 {
        return Err(Failure::Config("--kernel applies to the 3-AP family only".into()));
    }
    let method = match kernel {
        KernelKind::Naive => Ap3Method::Naive,
        KernelKind::Ntt => Ap3Method::Ntt,
        KernelKind::Fft => Ap3Method::Fft,
        KernelKind::Bitset => Ap3Method::Bitset,
    };
    Ok(Some(Ap3Counter::new(h.vertex_count(), method)?))
}

#[allow(clippy::too_many_arguments)]
fn run_simulate(
    f: &FamilyArgs,
    model: ModelKind,
    param: f64,
    thresholds: &[f64],
    samples: u64,
    confidence: f64,
    bound: Option<&str>,
    kernel: Option<KernelKind>,
    g: &Global,
    pack: Option<&ConstantsPack>,
) -> Outcome<String> {
    let h = load_family(f, g.seed)?;
    let (n, k, edges) = (h.vertex_count(), h.uniformity(), h.edge_count());
    let model = match model {
        ModelKind::M => {
            if param < 0.0 || param.fract() != 0.0 {
                return Err(Failure::Config(format!("m must be a nonnegative integer, got {param}")));
            }
            SubsetModel::M { m: param as usize }
        }
        ModelKind::P => SubsetModel::P { p: param },
    };
    let ap3 = counter_for(f, &h, kernel)?;
    let counter: &dyn InducedCounter = match &ap3 {
        Some(c) => c,
        None => &h,
    };
    let stats = tail_estimate(counter, model, thresholds, samples, g.seed, confidence)?;

    let theorem = match bound {
        Some(name) => Some(TheoremId::parse(name)?),
        None if f.family == FamilyKind::Kap && k == 3 && matches!(model, SubsetModel::M { .. }) => {
            Some(TheoremId::Ap3Explicit)
        }
        None => None,
    };
    let mut base = BoundQuery {
        n: Some(n as f64),
        k: Some(k),
        h: Some(edges as f64),
        ..Default::default()
    };
    match model {
        SubsetModel::M { m } => base.m = Some(m as f64),
        SubsetModel::P { p } => base.p = Some(p),
    }
    if matches!(theorem, Some(TheoremId::NearRegular | TheoremId::RegularVariant | TheoremId::PModelRate)) {
        let r = k - 1;
        let rep = h.regularity_report(
            r,
            RegularityMode::Auto {
                budget: g.budget,
                samples: 100_000,
                seed: g.seed,
            },
        )?;
        base.r = Some(r);
        base.eta = Some(rep.eta_f64());
        base.max_degree = Some(rep.max_degree as f64);
    }
    let mut bounds = Vec::with_capacity(thresholds.len());
    for &a in thresholds {
        let value = match theorem {
            None => (f64::NAN, false),
            Some(t) => {
                let mut q = base.clone();
                q.a = Some(a);
                if let SubsetModel::P { p } = model {
                    q.delta = Some(a / (p.powi(k as i32) * edges as f64));
                }
                let res = evaluate_with_defaults(t, &q, pack)?;
                (res.value, res.valid)
            }
        };
        bounds.push(value);
    }
    let mut out = String::from("threshold,side,exceedances,samples,estimate,ci_lo,ci_hi,bound_value,bound_valid\n");
    for (i, row) in stats.rows().iter().enumerate() {
        let (bv, valid) = bounds[i / 3];
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            fmt_f64(row.threshold),
            row.side,
            row.exceedances,
            row.samples,
            fmt_f64(row.estimate),
            fmt_f64(row.ci_lo),
            fmt_f64(row.ci_hi),
            if bv.is_nan() { String::new() } else { fmt_f64(bv) },
            valid
        )
        .unwrap();
    }
    Ok(out)
}

#[derive(Serialize)]
struct ConstructReport<'a> {
    spec: Option<&'a PartiteSpec>,
    warnings: Vec<String>,
    weights: Option<&'a crate::partite::WeightVector>,
    description: Option<String>,
    n: usize,
    h: u64,
    niceness: crate::partite::NicenessReport,
}

#[derive(Serialize)]
struct TransferReport {
    n: usize,
    k: usize,
    h: u64,
    p: f64,
    a: f64,
    mixture: f64,
    mixture_exact: Option<String>,
    direct: Option<f64>,
    direct_exact: Option<String>,
    agree: Option<bool>,
    samples_per_m: Option<u64>,
}

fn run_transfer(h: &Hypergraph, p: f64, a: f64, samples: Option<u64>, g: &Global) -> Outcome<String> {
    let (n, k, edges) = (h.vertex_count(), h.uniformity(), h.edge_count());
    if !(0.0..=1.0).contains(&p) {
        return Err(Failure::Config(format!("p must lie in [0,1], got {p}")));
    }
    let exact = |x: f64| decimal_rational(x).ok_or_else(|| Failure::Config(format!("not finite: {x}")));
    let (p_exact, a_exact) = (exact(p)?, exact(a)?);
    let cut = pmodel_mean_exact(&p_exact, k, edges) + a_exact;
    let mut report = TransferReport {
        n,
        k,
        h: edges,
        p,
        a,
        mixture: 0.0,
        mixture_exact: None,
        direct: None,
        direct_exact: None,
        agree: None,
        samples_per_m: samples,
    };
    match samples {
        None => {
            let v = pmodel_transfer_exact(n as u64, &p_exact, |m| {
                Ok(exact_distribution(h, m as usize, g.budget)?.tail_gt(&cut))
            })?;
            report.mixture = rational_to_f64(&v);
            if n < 64 && (1u128 << n) <= g.budget as u128 {
                let d = pmodel_exact_tail(h, &p_exact, &cut, g.budget)?;
                report.direct = Some(rational_to_f64(&d));
                report.agree = Some(d == v);
                report.direct_exact = Some(d.to_string());
            }
            report.mixture_exact = Some(v.to_string());
        }
        Some(s) => {
            report.mixture = pmodel_transfer(n as u64, p, |m| {
                let stats = tail_estimate(h, SubsetModel::M { m: m as usize }, &[], s, g.seed ^ m, 0.95)?;
                let over: u64 = stats
                    .histogram
                    .iter()
                    .filter(|(&c, _)| BigRational::from_integer(c.into()) > cut)
                    .map(|(_, &x)| x)
                    .sum();
                Ok(over as f64 / s as f64)
            })?;
        }
    }
    json(&report)
}

fn edge_list(h: &Hypergraph) -> Outcome<String> {
    let mut buf = Vec::new();
    h.write_edge_list(&mut buf)?;
    Ok(String::from_utf8(buf).expect("edge lists are ASCII"))
}

#[allow(clippy::too_many_arguments)]
fn run_construct(
    r: usize,
    l: usize,
    s: usize,
    gamma: f64,
    relaxed: bool,
    simple: bool,
    degree: usize,
    eta_max: Option<f64>,
) -> Outcome<(String, String)> {
    let eta_max = eta_max.unwrap_or(3f64.powi(1 - r as i32));
    if simple {
        let c = simple_construction(r, s, degree)?;
        let niceness = niceness_check(&c.hypergraph, c.parts, c.part_size, gamma, eta_max)?;
        let report = ConstructReport {
            spec: None,
            warnings: Vec::new(),
            weights: None,
            description: Some(c.description.clone()),
            n: c.hypergraph.vertex_count(),
            h: c.hypergraph.edge_count(),
            niceness,
        };
        return Ok((edge_list(&c.hypergraph)?, json(&report)?));
    }
    let l = if l == 0 { PartiteSpec::strict_parts(r) } else { l };
    let spec = PartiteSpec::new(r, l, s, gamma, relaxed)?;
    let weights = build_weights(&spec)?;
    let h = build_partite(&weights).materialize();
    let niceness = niceness_check(&h, l, s, gamma, eta_max)?;
    let report = ConstructReport {
        spec: Some(&spec),
        warnings: spec.warnings(),
        weights: Some(&weights),
        description: None,
        n: h.vertex_count(),
        h: h.edge_count(),
        niceness,
    };
    Ok((edge_list(&h)?, json(&report)?))
}

fn execute(cli: &Cli, outputs: &mut Outputs, notes: &mut Vec<String>) -> Outcome<()> {
    let g = &cli.global;
    let pack = load_constants(g)?;
    match &cli.command {
        Command::Build { family, out } => {
            let h = load_family(family, g.seed)?;
            outputs.emit(out.as_ref(), edge_list(&h)?);
        }
        Command::Analyze { family, r, out } => {
            let h = load_family(family, g.seed)?;
            outputs.emit(out.as_ref(), run_analyze(&h, r, g)?);
        }
        Command::VerifyMartingale { family, trials, r, out } => {
            let h = load_family(family, g.seed)?;
            let (csv, summary) = run_verify(&h, *trials, *r, g)?;
            outputs.emit(out.as_ref(), csv);
            notes.push(summary);
        }
        Command::Bounds { theorem, params, grid, out } => {
            outputs.emit(out.as_ref(), run_bounds(theorem, params, grid, pack.as_ref())?);
        }
        Command::Simulate {
            family,
            model,
            param,
            thresholds,
            samples,
            confidence,
            bound,
            kernel,
            out,
        } => {
            let csv = run_simulate(
                family,
                *model,
                *param,
                thresholds,
                *samples,
                *confidence,
                bound.as_deref(),
                *kernel,
                g,
                pack.as_ref(),
            )?;
            outputs.emit(out.as_ref(), csv);
        }
        Command::Construct {
            r,
            l,
            s,
            gamma,
            relaxed,
            simple,
            degree,
            eta_max,
            out,
            report,
        } => {
            let (edges, rep) = run_construct(*r, *l, *s, *gamma, *relaxed, *simple, *degree, *eta_max)?;
            let report_path = report.clone().or_else(|| out.as_ref().map(|o| suffixed(o, "report.json")));
            if let Some(o) = out {
                outputs.emit(Some(o), edges);
            }
            outputs.emit(report_path.as_ref(), rep);
        }
        Command::Transfer {
            family,
            p,
            a,
            samples,
            out,
        } => {
            let h = load_family(family, g.seed)?;
            outputs.emit(out.as_ref(), run_transfer(&h, *p, *a, *samples, g)?);
        }
        Command::Replay { .. } => unreachable!("replay is resolved before execution"),
    }
    Ok(())
}

/// Resolves `replay` into the recorded configuration.
fn resolve(cli: Cli) -> Outcome<Cli> {
    let Command::Replay { source, out } = &cli.command else {
        return Ok(cli);
    };
    let manifest: Manifest = serde_json::from_str(&read_text(source)?)
        .map_err(|e| Failure::Config(format!("manifest {}: {e}", source.display())))?;
    let mut config = manifest.config;
    if matches!(config.command, Command::Replay { .. }) {
        return Err(Failure::Config("a manifest cannot record a replay".into()));
    }
    if let Some(o) = out {
        config.command.set_out(o.clone());
        config.global.manifest = cli.global.manifest.clone();
    }
    Ok(config)
}

/// Runs a parsed command line: computes everything, then writes outputs
/// and the manifest. Returns the lines meant for stderr.
pub fn run(cli: Cli) -> Outcome<Vec<String>> {
    let cli = resolve(cli)?;
    let pool = match cli.global.threads {
        Some(t) => Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| Failure::Config(format!("--threads: {e}")))?,
        ),
        None => None,
    };
    let mut outputs = Outputs::default();
    let mut notes = Vec::new();
    match &pool {
        Some(p) => p.install(|| execute(&cli, &mut outputs, &mut notes))?,
        None => execute(&cli, &mut outputs, &mut notes)?,
    }
    let manifest = Manifest {
        tool: env!("CARGO_PKG_NAME").into(),
        version: env!("CARGO_PKG_VERSION").into(),
        config: cli.clone(),
        outputs: outputs.files.iter().map(|(p, _)| p.clone()).collect(),
    };
    for (path, content) in &outputs.files {
        write_atomic(path, content.as_bytes())?;
    }
    let manifest_json = json(&manifest)?;
    match cli.global.manifest.clone().or_else(|| cli.command.out().map(|o| suffixed(o, "manifest.json"))) {
        Some(p) => write_atomic(&p, manifest_json.as_bytes())?,
        None => notes.push(format!("manifest: {}", serde_json::to_string(&manifest).map_err(Error::from)?)),
    }
    print!("{}", outputs.stdout);
    Ok(notes)
}

/// Entry point of the `hyperdev` binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(notes) => {
            for n in notes {
                eprintln!("{n}");
            }
            0
        }
        Err(f) => {
            eprintln!("hyperdev: {f}");
            f.exit_code()
        }
    }
}
