//! Command-line surface: `check`, `alex`, `homs`, `torus`.
//!
//! Exit codes: 0 on success (and for `check`, a verdict consistent with
//! fibering or no verdict), 2 when `check` finds a non-fibering witness, 1 on
//! usage or validation errors.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::catalog::{builtin_catalog, builtin_group, load_catalog_dir, load_group_file};
use crate::criterion::{survey, sweep, QuotientReport, SweepOptions, SweepOutcome};
use crate::fingrp::FiniteGroup;
use crate::laurent::LaurentPoly;
use crate::presentation::GroupPresentation;
use crate::torus::{FreeAutomorphism, NielsenMove};
use crate::twisted::TwistedRep;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_NOT_FIBERED: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum ReportFormat {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "twistalex",
    version,
    about = "Twisted Alexander polynomials and a fibering test for 3-manifold groups"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sweep the group catalog and test every quotient.
    Check(CheckArgs),
    /// Twisted Alexander polynomials for one homomorphism.
    Alex(AlexArgs),
    /// List homomorphisms to a group.
    Homs(HomsArgs),
    /// Write the mapping torus of a composition of Nielsen moves.
    Torus(TorusArgs),
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// Presentation file.
    pub input: PathBuf,
    #[arg(long, default_value_t = 24, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_order: u64,
    /// Directory of `.grp` files; defaults to the built-in catalog.
    #[arg(long)]
    pub catalog: Option<PathBuf>,
    #[arg(long)]
    pub solvable_only: bool,
    /// Only epimorphisms (the default); see `--retarget`.
    #[arg(long, conflicts_with = "retarget")]
    pub epi_only: bool,
    /// Also test non-surjective homs, each onto its image subgroup.
    #[arg(long)]
    pub retarget: bool,
    /// Do not stop at the first failing quotient.
    #[arg(long)]
    pub exhaustive: bool,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    pub report: ReportFormat,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
}

#[derive(Debug, Args)]
pub struct AlexArgs {
    pub input: PathBuf,
    /// Group file or built-in group name; defaults to the trivial group.
    #[arg(long)]
    pub group: Option<String>,
    /// Generator images, e.g. "a=(1 2),b=(1 2)"; unlisted generators map to the identity.
    #[arg(long, default_value = "")]
    pub hom: String,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    pub report: ReportFormat,
}

#[derive(Debug, Args)]
pub struct HomsArgs {
    pub input: PathBuf,
    /// Group file or built-in group name.
    #[arg(long)]
    pub group: String,
    #[arg(long)]
    pub epi_only: bool,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    pub report: ReportFormat,
}

#[derive(Debug, Args)]
pub struct TorusArgs {
    #[arg(long)]
    pub rank: usize,
    /// Moves separated by `;`: `x1<-x1x2`, `swap x1 x2`, `inv x1`.
    #[arg(long, default_value = "")]
    pub moves: String,
    /// Output file; stdout when absent.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

/// Exact integer coefficient arrays.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct PolyJson {
    pub min_exp: i64,
    pub coeffs: Vec<serde_json::Number>,
}

impl From<&LaurentPoly> for PolyJson {
    fn from(p: &LaurentPoly) -> Self {
        PolyJson {
            min_exp: p.min_exp(),
            coeffs: p
                .coeffs()
                .iter()
                .map(|c| serde_json::Number::from_str(&c.to_string()).expect("integer literal"))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct QuotientJson {
    pub group: String,
    pub order: usize,
    pub hom: String,
    pub div: u64,
    pub delta1: PolyJson,
    pub monic: bool,
    pub span: Option<u64>,
    pub expected_span: Option<u64>,
    pub status: Option<String>,
    pub lower_bound: Option<u64>,
}

impl From<&QuotientReport> for QuotientJson {
    fn from(r: &QuotientReport) -> Self {
        QuotientJson {
            group: r.group.clone(),
            order: r.order,
            hom: r.hom.clone(),
            div: r.result.div,
            delta1: PolyJson::from(&r.result.delta1),
            monic: r.result.monic,
            span: r.result.span,
            expected_span: r.expected_span,
            status: r.status.map(|s| s.as_str().to_string()),
            lower_bound: r.lower_bound,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub manifold: String,
    pub phi: BTreeMap<String, i64>,
    pub norm: Option<u64>,
    pub b3: u64,
    pub verdict: String,
    pub bound: usize,
    pub solvable_only: bool,
    pub witness: Option<usize>,
    pub caveats: Vec<String>,
    pub quotients: Vec<QuotientJson>,
}

impl CheckReport {
    pub fn new(pres: &GroupPresentation, outcome: &SweepOutcome) -> Self {
        CheckReport {
            manifold: pres.name.clone(),
            phi: phi_map(pres),
            norm: pres.thurston_norm,
            b3: pres.b3(),
            verdict: outcome.verdict.outcome.as_str().to_string(),
            bound: outcome.verdict.bound,
            solvable_only: outcome.verdict.solvable_only,
            witness: outcome.verdict.witness,
            caveats: outcome.caveats.clone(),
            quotients: outcome.reports.iter().map(QuotientJson::from).collect(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "manifold: {}", self.manifold);
        let _ = writeln!(s, "phi: {}", fmt_phi(&self.phi));
        let _ = writeln!(s, "norm: {}", opt(self.norm));
        let _ = writeln!(s, "b3: {}", self.b3);
        let _ = writeln!(s, "verdict: {}", self.verdict);
        let _ = writeln!(s, "bound: {}", self.bound);
        let _ = writeln!(s, "solvable_only: {}", self.solvable_only);
        let _ = writeln!(s, "witness: {}", opt(self.witness));
        for c in &self.caveats {
            let _ = writeln!(s, "caveats: {c}");
        }
        if self.caveats.is_empty() {
            let _ = writeln!(s, "caveats: -");
        }
        let _ = writeln!(s, "quotients: {}", self.quotients.len());
        for (i, q) in self.quotients.iter().enumerate() {
            let _ = writeln!(s, "[{i}]");
            let _ = writeln!(s, "  group: {}", q.group);
            let _ = writeln!(s, "  order: {}", q.order);
            let _ = writeln!(s, "  hom: {}", q.hom);
            let _ = writeln!(s, "  div: {}", q.div);
            let _ = writeln!(s, "  delta1: {}", poly_text(&q.delta1));
            let _ = writeln!(s, "  monic: {}", q.monic);
            let _ = writeln!(s, "  span: {}", opt(q.span));
            let _ = writeln!(s, "  expected_span: {}", opt(q.expected_span));
            let _ = writeln!(s, "  status: {}", q.status.as_deref().unwrap_or("-"));
            let _ = writeln!(s, "  lower_bound: {}", opt(q.lower_bound));
        }
        s
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AlexReport {
    pub manifold: String,
    pub group: String,
    pub order: usize,
    pub hom: String,
    pub surjective: bool,
    pub delta0: PolyJson,
    pub delta1: PolyJson,
    pub monic: bool,
    pub span: Option<u64>,
    pub div: u64,
    pub column_used: String,
}

impl AlexReport {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "manifold: {}", self.manifold);
        let _ = writeln!(s, "group: {}", self.group);
        let _ = writeln!(s, "order: {}", self.order);
        let _ = writeln!(s, "hom: {}", self.hom);
        let _ = writeln!(s, "surjective: {}", self.surjective);
        let _ = writeln!(s, "delta0: {}", poly_text(&self.delta0));
        let _ = writeln!(s, "delta1: {}", poly_text(&self.delta1));
        let _ = writeln!(s, "monic: {}", self.monic);
        let _ = writeln!(s, "span: {}", opt(self.span));
        let _ = writeln!(s, "div: {}", self.div);
        let _ = writeln!(s, "column_used: {}", self.column_used);
        s
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct HomEntry {
    pub index: usize,
    pub hom: String,
    pub surjective: bool,
    pub class_representative: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct HomsReport {
    pub manifold: String,
    pub group: String,
    pub order: usize,
    pub homs: usize,
    pub epis: usize,
    pub epi_classes: usize,
    pub listing: Vec<HomEntry>,
}

impl HomsReport {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "manifold: {}", self.manifold);
        let _ = writeln!(s, "group: {}", self.group);
        let _ = writeln!(s, "order: {}", self.order);
        let _ = writeln!(s, "homs: {}", self.homs);
        let _ = writeln!(s, "epis: {}", self.epis);
        let _ = writeln!(s, "epi_classes: {}", self.epi_classes);
        for e in &self.listing {
            let _ = writeln!(
                s,
                "{} {} surjective={} class_representative={}",
                e.index, e.hom, e.surjective, e.class_representative
            );
        }
        s
    }
}

fn phi_map(pres: &GroupPresentation) -> BTreeMap<String, i64> {
    pres.phi().iter().enumerate().map(|(i, &v)| (pres.generator_name(i).to_string(), v)).collect()
}

fn fmt_phi(phi: &BTreeMap<String, i64>) -> String {
    phi.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ")
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(|| "-".to_string(), |x| x.to_string())
}

fn poly_text(p: &PolyJson) -> String {
    let coeffs = p.coeffs.iter().map(|c| c.to_string().parse().expect("integer")).collect();
    LaurentPoly::new(p.min_exp, coeffs).to_string()
}

fn render<T: Serialize>(format: ReportFormat, value: &T, text: impl FnOnce() -> String) -> String {
    match format {
        ReportFormat::Text => text(),
        ReportFormat::Json => serde_json::to_string_pretty(value).expect("serializable") + "\n",
    }
}

fn read_presentation(path: &Path) -> Result<GroupPresentation, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    GroupPresentation::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn resolve_group(spec: &str) -> Result<FiniteGroup, String> {
    let path = Path::new(spec);
    if path.exists() {
        return load_group_file(path).map_err(|e| e.to_string());
    }
    builtin_group(spec).ok_or_else(|| format!("`{spec}` is neither a group file nor a built-in group"))
}

pub fn cmd_check(args: &CheckArgs) -> Result<(String, i32), String> {
    let pres = read_presentation(&args.input)?;
    let catalog = match &args.catalog {
        Some(dir) => load_catalog_dir(dir).map_err(|e| e.to_string())?,
        None => builtin_catalog(),
    };
    let opts = SweepOptions {
        max_order: args.max_order as usize,
        solvable_only: args.solvable_only,
        exhaustive: args.exhaustive,
        retarget_images: args.retarget,
        workers: args.workers,
    };
    let outcome =
        if pres.thurston_norm.is_some() { sweep(&pres, &catalog, &opts) } else { survey(&pres, &catalog, &opts) }
            .map_err(|e| e.to_string())?;
    let report = CheckReport::new(&pres, &outcome);
    let code = match outcome.verdict.outcome {
        crate::criterion::Outcome::NotFibered => EXIT_NOT_FIBERED,
        _ => EXIT_OK,
    };
    Ok((render(args.report, &report, || report.to_text()), code))
}

pub fn cmd_alex(args: &AlexArgs) -> Result<String, String> {
    let pres = read_presentation(&args.input)?;
    let group = match &args.group {
        Some(g) => resolve_group(g)?,
        None => FiniteGroup::trivial(),
    };
    let hom = group.parse_hom_spec(&pres, &args.hom).map_err(|e| e.to_string())?;
    let rep = TwistedRep::new(&pres, &group, &hom);
    let res = rep.delta1().map_err(|e| e.to_string())?;
    let report = AlexReport {
        manifold: pres.name.clone(),
        group: group.name.clone(),
        order: group.order(),
        hom: hom.describe(&group),
        surjective: hom.surjective,
        delta0: PolyJson::from(&res.delta0),
        delta1: PolyJson::from(&res.delta1),
        monic: res.monic,
        span: res.span,
        div: res.div,
        column_used: pres.generator_name(res.column_used).to_string(),
    };
    Ok(render(args.report, &report, || report.to_text()))
}

pub fn cmd_homs(args: &HomsArgs) -> Result<String, String> {
    let pres = read_presentation(&args.input)?;
    let group = resolve_group(&args.group)?;
    let all = group.enumerate_homs(&pres, false);
    let epis = all.iter().filter(|h| h.surjective).count();
    let epi_classes = all.iter().filter(|h| h.surjective && group.is_class_representative(h)).count();
    let listing = all
        .iter()
        .enumerate()
        .filter(|(_, h)| h.surjective || !args.epi_only)
        .map(|(index, h)| HomEntry {
            index,
            hom: h.describe(&group),
            surjective: h.surjective,
            class_representative: group.is_class_representative(h),
        })
        .collect();
    let report = HomsReport {
        manifold: pres.name.clone(),
        group: group.name.clone(),
        order: group.order(),
        homs: all.len(),
        epis,
        epi_classes,
        listing,
    };
    Ok(render(args.report, &report, || report.to_text()))
}

pub fn cmd_torus(args: &TorusArgs) -> Result<String, String> {
    let moves = NielsenMove::parse_list(&args.moves).map_err(|e| e.to_string())?;
    let h = FreeAutomorphism::compose_nielsen(&moves, args.rank).map_err(|e| e.to_string())?;
    let mut pres = h.mapping_torus().map_err(|e| e.to_string())?;
    if !moves.is_empty() {
        pres.name = format!("{}[{}]", pres.name, moves.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "));
    }
    let text = pres.to_file_string();
    match &args.output {
        Some(path) => {
            fs::write(path, &text).map_err(|e| format!("{}: {e}", path.display()))?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Check(a) => cmd_check(a),
        Command::Alex(a) => cmd_alex(a).map(|s| (s, EXIT_OK)),
        Command::Homs(a) => cmd_homs(a).map(|s| (s, EXIT_OK)),
        Command::Torus(a) => cmd_torus(a).map(|s| (s, EXIT_OK)),
    };
    match result {
        Ok((text, code)) => {
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(message) => {
            let _ = writeln!(err, "error: {message}");
            EXIT_ERROR
        }
    }
}
