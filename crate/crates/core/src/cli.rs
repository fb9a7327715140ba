//! Command-line front end: fixtures in, tables or JSON out.
//!
//! Exit status: 0 on success or ACCEPT, 1 on bound violations, REJECT, a
//! failed consistency check or an ideal rank that did not stabilize, and 2 on
//! unusable input.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::Error;
use crate::fixture::{degree_records, DegreeRecord, ProfileFile};
use crate::graded::{
    sym_product_surface, validate_bounds, BoundViolation, GradedMonodromyProfile, SurfaceFixture,
    PRESETS,
};
use crate::moduli::{compare_sym_nilp, hilb_profile, kummer_product_profile, kummer_profile, SymNilpRow};
use crate::sl2::{format_blocks, JordanType};
use crate::snc::{
    clemens_schmid_consistency, format_complex, nocycle_check, parse_complex, staircase_fixture,
    ClemensSchmidReport, DualComplex, VerdictKind,
};
use crate::verbitsky::{default_samples, ideal_dim, BBLattice, DEFAULT_SEED};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Table,
    Json,
}

#[derive(Clone, Debug, Parser)]
#[command(name = "monodromy", version, about = "Monodromy of degenerating irreducible symplectic manifolds")]
pub struct RunConfig {
    #[arg(long, value_enum, default_value_t = OutputFormat::Table, global = true)]
    pub format: OutputFormat,

    /// Seed for isotropic sampling.
    #[arg(long, default_value_t = DEFAULT_SEED, global = true)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Debug, Subcommand)]
pub enum Command {
    /// Monodromy profile of Hilb^n of a degenerating K3 surface.
    Hilb {
        #[command(flatten)]
        surface: SurfaceArgs,
        /// Number of points
        #[arg(long)]
        n: usize,
        /// Print the profile in the fixture text format instead of a report.
        #[arg(long)]
        emit: bool,
    },
    /// Monodromy profile of the generalized Kummer Kum^n of an abelian surface.
    Kummer {
        #[command(flatten)]
        surface: SurfaceArgs,
        /// Kum^n has dimension 2n
        #[arg(long)]
        n: usize,
        /// Report A × Kum^n instead of Kum^n.
        #[arg(long)]
        product: bool,
        #[arg(long)]
        emit: bool,
    },
    /// Monodromy profile of the symmetric product Sym^a of a surface.
    Symprod {
        #[command(flatten)]
        surface: SurfaceArgs,
        /// Number of factors
        #[arg(long)]
        a: usize,
        #[arg(long)]
        emit: bool,
    },
    /// Checks a claimed middle monodromy against a dual complex.
    SncCheck {
        /// Dual complex file.
        #[arg(long, conflicts_with_all = ["staircase", "chain", "cycle"])]
        complex: Option<PathBuf>,
        /// Staircase configuration with k rows.
        #[arg(long, conflicts_with_all = ["chain", "cycle"])]
        staircase: Option<usize>,
        /// Chain of this many components.
        #[arg(long, conflicts_with = "cycle")]
        chain: Option<usize>,
        /// Cycle of this many components.
        #[arg(long)]
        cycle: Option<usize>,
        /// Half the fiber dimension
        #[arg(long)]
        n: usize,
        /// Claimed Jordan type of N on the middle cohomology, e.g. "2,1x5".
        #[arg(long)]
        jordan: Option<String>,
        /// Nearby-fiber profile; enables the stratum budget check.
        #[arg(long)]
        profile: Option<PathBuf>,
        /// Print the complex in its text format instead of a report.
        #[arg(long)]
        emit: bool,
    },
    /// Dimensions of the subalgebra generated by H^2.
    Verbitsky {
        /// Gram matrix file of the Beauville–Bogomolov form.
        #[arg(long, conflicts_with = "b2")]
        gram: Option<PathBuf>,
        /// Use U ⊕ <-2>^(b2-2).
        #[arg(long)]
        b2: Option<usize>,
        /// Half the fiber dimension
        #[arg(long)]
        n: usize,
        /// Highest degree k of Sym^k H^2 (default 2n).
        #[arg(long)]
        k: Option<usize>,
        /// Isotropic sample budget per degree (default 8·dim Sym^k).
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Checks a profile file against the nilpotency bounds.
    Validate {
        #[arg(long)]
        profile: PathBuf,
        /// Half the fiber dimension
        #[arg(long)]
        n: usize,
    },
}

#[derive(Clone, Debug, Default, Args)]
pub struct SurfaceArgs {
    /// One of k3-typeI, k3-typeII, k3-typeIII, abelian-l0, abelian-l1, abelian-l2.
    #[arg(long, conflicts_with_all = ["fixture", "l"])]
    pub preset: Option<String>,
    /// Surface fixture file (text or JSON).
    #[arg(long, conflicts_with = "l")]
    pub fixture: Option<PathBuf>,
    /// Abelian surface with rank-l monodromy on H^1.
    #[arg(long)]
    pub l: Option<usize>,
}

/// Parses arguments, runs, and returns the exit status. Reports go to `out`,
/// diagnostics to `err`.
pub fn run(cfg: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let mut buf = String::new();
    let status = match dispatch(cfg, &mut buf) {
        Ok(code) => code,
        Err(message) => {
            let _ = writeln!(err, "error: {message}");
            EXIT_INPUT
        }
    };
    if out.write_all(buf.as_bytes()).is_err() {
        return EXIT_INPUT;
    }
    status
}

type Outcome = std::result::Result<i32, String>;

fn dispatch(cfg: &RunConfig, out: &mut String) -> Outcome {
    match &cfg.command {
        Command::Hilb { surface, n, emit } => {
            let s = surface.resolve()?;
            let p = hilb_profile(&s, *n).map_err(|e| e.to_string())?;
            let title = format!("Hilb^{n} of {}", s.name());
            profile_command(cfg, out, "hilb", &title, s.name(), Some(*n), &p, *emit, Vec::new())
        }
        Command::Kummer {
            surface,
            n,
            product,
            emit,
        } => {
            let s = if surface.is_empty() {
                SurfaceArgs {
                    l: Some(0),
                    ..SurfaceArgs::default()
                }
                .resolve()?
            } else {
                surface.resolve()?
            };
            let (p, title) = if *product {
                (
                    kummer_product_profile(&s, *n).map_err(|e| e.to_string())?,
                    format!("A x Kum^{n} of {}", s.name()),
                )
            } else {
                (
                    kummer_profile(&s, *n).map_err(|e| e.to_string())?,
                    format!("Kum^{n} of {}", s.name()),
                )
            };
            let half_dim = (!*product).then_some(*n);
            profile_command(cfg, out, "kummer", &title, s.name(), half_dim, &p, *emit, Vec::new())
        }
        Command::Symprod { surface, a, emit } => {
            let s = surface.resolve()?;
            if *a == 0 {
                return Err("--a must be positive".into());
            }
            let p = sym_product_surface(&s, *a);
            let rows = match s.kind() {
                crate::graded::SurfaceKind::Abelian => compare_sym_nilp(&s, *a).map_err(|e| e.to_string())?,
                crate::graded::SurfaceKind::K3 => Vec::new(),
            };
            let title = format!("Sym^{a} of {}", s.name());
            profile_command(cfg, out, "symprod", &title, s.name(), None, &p, *emit, rows)
        }
        Command::SncCheck {
            complex,
            staircase,
            chain,
            cycle,
            n,
            jordan,
            profile,
            emit,
        } => snc_check(cfg, out, complex, *staircase, *chain, *cycle, *n, jordan, profile, *emit),
        Command::Verbitsky {
            gram,
            b2,
            n,
            k,
            samples,
        } => verbitsky(cfg, out, gram, *b2, *n, *k, *samples),
        Command::Validate { profile, n } => {
            let file = load_profile(profile)?;
            if file.kind.is_some() {
                file.clone()
                    .into_surface()
                    .map_err(|e| format!("{}: {e}", profile.display()))?;
            }
            let source = profile.display().to_string();
            let title = format!("profile {source}");
            profile_command(cfg, out, "validate", &title, &source, Some(*n), &file.profile, false, Vec::new())
        }
    }
}

impl SurfaceArgs {
    fn is_empty(&self) -> bool {
        self.preset.is_none() && self.fixture.is_none() && self.l.is_none()
    }

    fn resolve(&self) -> std::result::Result<SurfaceFixture, String> {
        if let Some(name) = &self.preset {
            return SurfaceFixture::preset(name)
                .ok_or_else(|| format!("unknown preset `{name}` (one of {})", PRESETS.join(", ")));
        }
        if let Some(path) = &self.fixture {
            return load_profile(path)?
                .into_surface()
                .map_err(|e| format!("{}: {e}", path.display()));
        }
        if let Some(l) = self.l {
            return SurfaceFixture::abelian_with_rank(l).map_err(|e| e.to_string());
        }
        Err("a surface is required: --preset, --fixture or --l".into())
    }
}

fn read_file(path: &Path) -> std::result::Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn located(path: &Path, e: Error) -> String {
    match e {
        Error::Parse { line, message } => format!("{}:{line}: {message}", path.display()),
        other => format!("{}: {other}", path.display()),
    }
}

fn load_profile(path: &Path) -> std::result::Result<ProfileFile, String> {
    ProfileFile::parse(&read_file(path)?).map_err(|e| located(path, e))
}

#[derive(Serialize)]
struct ProfileReport<'a> {
    command: &'a str,
    source: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    top_degree: usize,
    degrees: Vec<DegreeRecord>,
    violations: Vec<BoundViolation>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    closed_form: Vec<SymNilpRow>,
}

#[allow(clippy::too_many_arguments)]
fn profile_command(
    cfg: &RunConfig,
    out: &mut String,
    command: &str,
    title: &str,
    source: &str,
    half_dim: Option<usize>,
    profile: &GradedMonodromyProfile,
    emit: bool,
    closed_form: Vec<SymNilpRow>,
) -> Outcome {
    if emit {
        let mut file = ProfileFile::new(profile.clone());
        file.name = Some(title.replace(' ', "-"));
        out.push_str(&file.to_text());
        return Ok(EXIT_OK);
    }
    // Without a half dimension the profile is not of an irreducible
    // symplectic manifold and only the degree bound applies.
    let violations: Vec<BoundViolation> = validate_bounds(profile, half_dim.unwrap_or(0))
        .violations
        .into_iter()
        .filter(|v| half_dim.is_some() || matches!(v, BoundViolation::DegreeBound { .. }))
        .collect();
    let status = if violations.is_empty() {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    };
    let report = ProfileReport {
        command,
        source,
        n: half_dim,
        top_degree: profile.top_degree(),
        degrees: degree_records(profile),
        violations,
        closed_form,
    };
    match cfg.format {
        OutputFormat::Json => push_json(out, &report),
        OutputFormat::Table => {
            let _ = writeln!(out, "{title}");
            let with_closed = !report.closed_form.is_empty();
            if with_closed {
                let _ = writeln!(out, "{:>6}  {:>8}  {:>4}  {:>6}  blocks", "degree", "dims", "nilp", "closed");
            } else {
                let _ = writeln!(out, "{:>6}  {:>8}  {:>4}  blocks", "degree", "dims", "nilp");
            }
            for rec in &report.degrees {
                let nilp = rec.nilp.map_or("—".to_string(), |v| v.to_string());
                let blocks = format_record_blocks(rec);
                if with_closed {
                    let row = &report.closed_form[rec.degree];
                    let mark = if row.agrees() { "" } else { " (differs)" };
                    let line = format!(
                        "{:>6}  {:>8}  {:>4}  {:>6}  {blocks}{mark}",
                        rec.degree,
                        rec.dims.unwrap_or(0),
                        nilp,
                        row.closed_form
                    );
                    let _ = writeln!(out, "{}", line.trim_end());
                } else {
                    let line = format!("{:>6}  {:>8}  {:>4}  {blocks}", rec.degree, rec.dims.unwrap_or(0), nilp);
                    let _ = writeln!(out, "{}", line.trim_end());
                }
            }
            if report.violations.is_empty() {
                let _ = writeln!(out, "bounds: ok");
            } else {
                for v in &report.violations {
                    let _ = writeln!(out, "violation: {v}");
                }
            }
        }
    }
    Ok(status)
}

fn format_record_blocks(rec: &DegreeRecord) -> String {
    let j = rec
        .blocks
        .iter()
        .fold(JordanType::zero(), |acc, &[h, m]| acc.direct_sum(&JordanType::with_multiplicity(h, m)));
    format_blocks(&j)
}

fn push_json<T: Serialize>(out: &mut String, value: &T) {
    out.push_str(&serde_json::to_string_pretty(value).expect("report serializes"));
    out.push('\n');
}

#[derive(Serialize)]
struct SncReport {
    command: &'static str,
    source: String,
    cell_counts: Vec<usize>,
    depth: usize,
    euler_characteristic: i64,
    weight_row0: BTreeMap<usize, usize>,
    n: usize,
    blocks: Vec<[usize; 2]>,
    nilp: usize,
    verdict: VerdictKind,
    reasons: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    clemens_schmid: Option<ClemensSchmidReport>,
}

#[allow(clippy::too_many_arguments)]
fn snc_check(
    cfg: &RunConfig,
    out: &mut String,
    complex: &Option<PathBuf>,
    staircase: Option<usize>,
    chain: Option<usize>,
    cycle: Option<usize>,
    n: usize,
    jordan: &Option<String>,
    profile: &Option<PathBuf>,
    emit: bool,
) -> Outcome {
    let (source, d): (String, DualComplex) = if let Some(path) = complex {
        let d = parse_complex(&read_file(path)?).map_err(|e| located(path, e))?;
        (path.display().to_string(), d)
    } else if let Some(k) = staircase {
        if k == 0 {
            return Err("--staircase needs k >= 1".into());
        }
        (format!("staircase({k})"), staircase_fixture(k))
    } else if let Some(len) = chain {
        if len == 0 {
            return Err("--chain needs at least one component".into());
        }
        (format!("chain({len})"), DualComplex::chain(len))
    } else if let Some(len) = cycle {
        if len == 0 {
            return Err("--cycle needs at least one component".into());
        }
        (format!("cycle({len})"), DualComplex::cycle(len))
    } else {
        return Err("a complex is required: --complex, --staircase, --chain or --cycle".into());
    };
    if emit {
        out.push_str(&format_complex(&d));
        return Ok(EXIT_OK);
    }
    if n == 0 {
        return Err("--n must be positive".into());
    }
    let row0 = d.weight_row0().map_err(|e| format!("{source}: {e}"))?;
    let nearby = match profile {
        Some(path) => Some(load_profile(path)?.profile),
        None => None,
    };
    let claimed = match (jordan, &nearby) {
        (Some(s), _) => s
            .parse::<JordanType>()
            .map_err(|e| format!("--jordan: {e}"))?,
        (None, Some(p)) => p.get(2 * n).clone(),
        (None, None) => return Err("--jordan or --profile is required".into()),
    };
    let verdict = nocycle_check(&d, n, &claimed);
    let cs = match &nearby {
        Some(p) => Some(clemens_schmid_consistency(p, &d, n).map_err(|e| format!("{source}: {e}"))?),
        None => None,
    };
    let mut status = if verdict.accepted() {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    };
    if cs.as_ref().is_some_and(|r| !r.pass) {
        status = EXIT_VIOLATION;
    }
    let report = SncReport {
        command: "snc-check",
        source,
        cell_counts: d.cell_counts(),
        depth: d.depth(),
        euler_characteristic: d.euler_characteristic(),
        weight_row0: row0,
        n,
        blocks: claimed.blocks().map(|(h, m)| [h, m]).collect(),
        nilp: verdict.nilp,
        verdict: verdict.verdict,
        reasons: verdict.reasons,
        clemens_schmid: cs,
    };
    match cfg.format {
        OutputFormat::Json => push_json(out, &report),
        OutputFormat::Table => {
            let counts: Vec<String> = report.cell_counts.iter().map(ToString::to_string).collect();
            let row0: Vec<String> = report.weight_row0.iter().map(|(q, d)| format!("{q}:{d}")).collect();
            let _ = writeln!(out, "complex: {}", report.source);
            let _ = writeln!(out, "cells: {}", counts.join(" "));
            let _ = writeln!(out, "depth: {}", report.depth);
            let _ = writeln!(out, "euler characteristic: {}", report.euler_characteristic);
            let _ = writeln!(out, "weight row 0: {{{}}}", row0.join(","));
            let _ = writeln!(out, "claimed N on H^{}: {{{}}} (nilp {})", 2 * n, format_blocks(&claimed), report.nilp);
            if let Some(cs) = &report.clemens_schmid {
                let _ = writeln!(out, "{:>3}  {:>11}  {:>6}  ok", "q", "requirement", "budget");
                for r in &cs.rows {
                    let budget = r.budget.map_or("?".to_string(), |b| b.to_string());
                    let _ = writeln!(out, "{:>3}  {:>11}  {:>6}  {}", r.q, r.requirement, budget, if r.ok { "yes" } else { "no" });
                }
                let _ = writeln!(out, "stratum budget: {}", if cs.pass { "pass" } else { "fail" });
            }
            for reason in &report.reasons {
                let _ = writeln!(out, "reason: {reason}");
            }
            let _ = writeln!(out, "verdict: {}", report.verdict);
        }
    }
    Ok(status)
}

#[derive(Serialize)]
struct VerbitskyRow {
    degree: usize,
    ambient: usize,
    ideal: usize,
    dims: usize,
    samples_used: usize,
}

#[derive(Serialize)]
struct VerbitskyReport {
    command: &'static str,
    b2: usize,
    signature: [usize; 2],
    n: usize,
    seed: u64,
    degrees: Vec<VerbitskyRow>,
    palindromic: bool,
}

fn verbitsky(
    cfg: &RunConfig,
    out: &mut String,
    gram: &Option<PathBuf>,
    b2: Option<usize>,
    n: usize,
    k: Option<usize>,
    samples: Option<usize>,
) -> Outcome {
    let lattice = match (gram, b2) {
        (Some(path), _) => read_file(path)?
            .parse::<BBLattice>()
            .map_err(|e| located(path, e))?,
        (None, Some(b)) => BBLattice::hyperbolic_plus_diagonal(b).map_err(|e| e.to_string())?,
        (None, None) => return Err("--gram or --b2 is required".into()),
    };
    if n == 0 {
        return Err("--n must be positive".into());
    }
    let k_max = k.unwrap_or(2 * n);
    let b = lattice.rank();
    let mut rows = Vec::new();
    for degree in 0..=k_max {
        let budget = samples.unwrap_or_else(|| default_samples(b, degree));
        match ideal_dim(&lattice, n, degree, budget, cfg.seed) {
            Ok(r) => rows.push(VerbitskyRow {
                degree,
                ambient: r.ambient,
                ideal: r.dim,
                dims: r.ambient - r.dim,
                samples_used: r.samples_used,
            }),
            Err(e @ Error::NotStabilized { .. }) => {
                out.push_str(&format!("not stabilized: {e}\n"));
                return Ok(EXIT_VIOLATION);
            }
            Err(e) => return Err(e.to_string()),
        }
    }
    let dims: Vec<usize> = rows.iter().map(|r| r.dims).collect();
    let last = dims.iter().rposition(|&d| d > 0).unwrap_or(0);
    let palindromic = dims[..=last].iter().eq(dims[..=last].iter().rev());
    let (pos, neg) = lattice.signature();
    let report = VerbitskyReport {
        command: "verbitsky",
        b2: b,
        signature: [pos, neg],
        n,
        seed: cfg.seed,
        degrees: rows,
        palindromic,
    };
    match cfg.format {
        OutputFormat::Json => push_json(out, &report),
        OutputFormat::Table => {
            let _ = writeln!(out, "b2 = {b}, signature ({pos},{neg}), n = {n}, seed = {}", cfg.seed);
            let _ = writeln!(out, "{:>3}  {:>8}  {:>8}  {:>8}  {:>7}", "k", "Sym^k", "ideal", "SH^2k", "samples");
            for r in &report.degrees {
                let _ = writeln!(
                    out,
                    "{:>3}  {:>8}  {:>8}  {:>8}  {:>7}",
                    r.degree, r.ambient, r.ideal, r.dims, r.samples_used
                );
            }
            let _ = writeln!(out, "palindromic: {}", if palindromic { "yes" } else { "no" });
        }
    }
    Ok(EXIT_OK)
}

/// Entry point for the binary: parses `std::env::args` and exits.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(cfg) => cfg,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(&cfg, &mut stdout.lock(), &mut stderr.lock())
}
