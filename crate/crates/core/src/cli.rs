//! Command-line driver. Every command prints one JSON report on stdout and a
//! short human summary on stderr.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::algebra::{build, Algebra, RingSpec};
use crate::catalog::{self, catalog_ids};
use crate::complex::{bass_numbers, ext_dims, resolution_self_check, Resolution};
use crate::error::{Error, Result};
use crate::io::{Report, RingRef, SequenceFile};
use crate::module::Module;
use crate::reducing::{
    complexity_check, gorenstein_side_check, growth_estimate, reducible_complexity_search,
    search_reducing, verify_witness, GrowthKind, Mode, SearchLimits, Target,
};
use crate::suite;
use crate::torsionfree::{
    build_free_splice, gdim_report, torsionfree_classify, verify_free_splice, TermCondition,
};

#[derive(Debug, Parser)]
#[command(
    name = "homwb",
    version,
    about = "Homological computations over finite-dimensional local algebras"
)]
pub struct Cli {
    /// Field characteristic for catalog rings (overrides the id).
    #[arg(long, global = true)]
    pub p: Option<u32>,
    /// JSON file with default search limits.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Catalog rings and ring-spec validation.
    Ring {
        #[command(subcommand)]
        action: RingCommand,
    },
    /// Minimal free resolution and Betti numbers.
    Resolve {
        #[command(flatten)]
        input: ModuleArgs,
        #[arg(long, default_value_t = 6)]
        steps: usize,
    },
    /// Dimensions of Ext^i(M, N).
    Ext {
        #[command(flatten)]
        input: ModuleArgs,
        /// Second argument N (module shorthand); defaults to the ring.
        #[arg(long, default_value = "ring")]
        target: String,
        #[arg(long, default_value_t = 6)]
        bound: usize,
    },
    /// (m,n)-torsionfree classification and G-dimension report.
    Classify {
        #[command(flatten)]
        input: ModuleArgs,
        #[arg(long, default_value_t = 6)]
        bound: usize,
    },
    /// Build or verify free sequences characterizing (m,n)-torsionfree modules.
    Seq {
        #[command(subcommand)]
        action: SeqCommand,
    },
    /// Search for reducing sequences.
    Reduce {
        #[command(flatten)]
        input: ModuleArgs,
        #[arg(long, default_value = "red")]
        mode: Mode,
        #[arg(long, default_value = "pd")]
        target: Target,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Growth estimate of Betti numbers, Bass numbers or Ext lengths.
    Growth {
        #[command(flatten)]
        input: ModuleArgs,
        #[arg(long, value_enum, default_value_t = KindArg::Betti)]
        kind: KindArg,
        #[arg(long, default_value_t = 10)]
        bound: usize,
    },
    /// Bundled cross-checks.
    Check {
        #[arg(value_enum)]
        which: CheckArg,
        #[command(flatten)]
        input: ModuleArgs,
        #[command(flatten)]
        limits: LimitArgs,
        /// Window for growth estimates and Ext certification.
        #[arg(long, default_value_t = 8)]
        bound: usize,
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long, default_value_t = 1)]
        n: usize,
    },
    /// Run a test battery.
    Suite {
        #[arg(value_enum)]
        which: SuiteArg,
    },
}

#[derive(Debug, Subcommand)]
pub enum RingCommand {
    List,
    Show { id: String },
    Validate { file: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum SeqCommand {
    Build {
        #[command(flatten)]
        input: ModuleArgs,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        /// Also write the sequence as a sequence file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Verify {
        file: PathBuf,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        /// `all`: every term in 𝒢_mn; `split`: nonnegative positions in 𝒢_m0, negative ones in 𝒢_0n.
        #[arg(long, value_enum, default_value_t = ConditionArg::All)]
        mode: ConditionArg,
    },
}

#[derive(Debug, Args)]
pub struct ModuleArgs {
    /// Catalog id (e.g. R1q5) or path to a ring spec JSON file.
    #[arg(long)]
    pub ring: String,
    /// Module shorthand (k, free:2, syzygy:1:k, tr:k, cyclic:x, random:7) or JSON path.
    #[arg(long, default_value = "k")]
    pub module: String,
}

#[derive(Debug, Args, Default)]
pub struct LimitArgs {
    #[arg(long)]
    pub max_steps: Option<usize>,
    #[arg(long)]
    pub n_max: Option<usize>,
    #[arg(long)]
    pub ab_max: Option<usize>,
    #[arg(long)]
    pub cap: Option<u64>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub gdim_bound: Option<usize>,
    #[arg(long)]
    pub frontier_cap: Option<usize>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum KindArg {
    Betti,
    Bass,
    Ext,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum CheckArg {
    /// Complexity estimate against upper reducing projective dimension.
    #[value(alias = "thm4")]
    Complexity,
    /// Gorenstein complexity against upper reducing G-dimension, and plexity.
    #[value(alias = "prop7")]
    Gorenstein,
    /// G-dimension against the supremum of nonvanishing Ext to the ring.
    #[value(alias = "cor20")]
    GdimFormula,
    /// Classify, build the free splice, verify it both ways.
    #[value(alias = "thm3")]
    Splice,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SuiteArg {
    Acceptance,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ConditionArg {
    #[value(name = "all", alias = "3")]
    All,
    #[value(name = "split", alias = "4")]
    Split,
}

impl From<ConditionArg> for TermCondition {
    fn from(c: ConditionArg) -> Self {
        match c {
            ConditionArg::All => TermCondition::AllInGmn,
            ConditionArg::Split => TermCondition::Split,
        }
    }
}

/// What a command produced before it is wrapped into a report.
struct Output {
    ring: Option<RingSpec>,
    seed: Option<u64>,
    limits: Value,
    results: Value,
    summary: String,
    /// False when a check or battery ran to completion but failed.
    success: bool,
}

impl Output {
    fn new(ring: Option<&Algebra>, results: Value, summary: String) -> Self {
        Output {
            ring: ring.map(|a| a.spec().clone()),
            seed: None,
            limits: Value::Null,
            results,
            summary,
            success: true,
        }
    }
}

fn load_ring(id: &str, p: Option<u32>) -> Result<Algebra> {
    if Path::new(id).is_file() {
        let text = std::fs::read_to_string(id)?;
        let spec: RingSpec = serde_json::from_str(&text)?;
        return build(&spec);
    }
    catalog::ring(id, p)
}

fn load_input(args: &ModuleArgs, p: Option<u32>) -> Result<(Algebra, Module)> {
    let alg = load_ring(&args.ring, p)?;
    let m = catalog::module(&alg, &args.module)?;
    Ok((alg, m))
}

fn merge_limits(config: Option<&Path>, args: &LimitArgs) -> Result<SearchLimits> {
    let mut l = match config {
        Some(path) => serde_json::from_str(&std::fs::read_to_string(path)?)?,
        None => SearchLimits::default(),
    };
    macro_rules! take {
        ($($f:ident),*) => { $( if let Some(v) = args.$f { l.$f = v; } )* };
    }
    take!(
        max_steps,
        n_max,
        ab_max,
        cap,
        samples,
        seed,
        gdim_bound,
        frontier_cap
    );
    l.validate()?;
    Ok(l)
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn execute(cli: &Cli) -> Result<Output> {
    let p = cli.p;
    let config = cli.config.as_deref();
    match &cli.command {
        Command::Ring { action } => ring_command(action, p),
        Command::Resolve { input, steps } => {
            let (alg, m) = load_input(input, p)?;
            let mut res = Resolution::of_module(&m);
            let betti = res.betti(*steps);
            let c = res.to_complex(*steps);
            let exact = resolution_self_check(&m, *steps);
            if !exact {
                return Err(Error::Invariant("resolution is not exact".to_string()));
            }
            let summary = format!("betti {betti:?}");
            Ok(Output::new(
                Some(&alg),
                json!({ "module_dim": m.dim(), "betti": betti, "differentials": c.diff_entries(), "exact": exact }),
                summary,
            ))
        }
        Command::Ext {
            input,
            target,
            bound,
        } => {
            let (alg, m) = load_input(input, p)?;
            let n = catalog::module(&alg, target)?;
            let t = ext_dims(&m, &n, *bound);
            let summary = format!("dim Ext^i = {:?}", t.dims);
            Ok(Output::new(
                Some(&alg),
                json!({ "ext": t, "lengths_equal_dims": true }),
                summary,
            ))
        }
        Command::Classify { input, bound } => {
            let (alg, m) = load_input(input, p)?;
            let v = torsionfree_classify(&m, *bound)?;
            let g = if *bound >= 2 {
                Some(gdim_report(&m, *bound)?)
            } else {
                None
            };
            let summary = format!(
                "m_max {}, n_max {} (up to {}), totally reflexive up to {}: {}",
                v.m_max, v.n_max, v.bound, v.bound, v.totally_reflexive_up_to_bound
            );
            Ok(Output::new(
                Some(&alg),
                json!({ "torsionfree": v, "gdim": g }),
                summary,
            ))
        }
        Command::Seq { action } => seq_command(action, p),
        Command::Reduce {
            input,
            mode,
            target,
            limits,
        } => {
            let (alg, m) = load_input(input, p)?;
            let l = merge_limits(config, limits)?;
            let out = search_reducing(&m, *mode, *target, &l)?;
            if let Some(w) = &out.witness {
                verify_witness(w)?;
            }
            let summary = match &out.witness {
                Some(w) => format!("{mode}-{target} witness of length {}", w.length()),
                None => format!(
                    "no witness: > {} within limits (exhaustive: {})",
                    l.max_steps, out.exhaustive
                ),
            };
            let mut o = Output::new(Some(&alg), out.to_json(), summary);
            o.seed = Some(l.seed);
            o.limits = to_value(&l);
            Ok(o)
        }
        Command::Growth { input, kind, bound } => {
            let (alg, m) = load_input(input, p)?;
            let (values, k) = match kind {
                KindArg::Betti => (Resolution::of_module(&m).betti(*bound), GrowthKind::Betti),
                KindArg::Bass => (bass_numbers(&m, *bound), GrowthKind::Bass),
                KindArg::Ext => (
                    ext_dims(&m, &crate::module::free_module(&alg, 1), *bound).dims,
                    GrowthKind::ExtLengths,
                ),
            };
            let est = growth_estimate(&values, k, None);
            let summary = format!("{:?} growth estimate: {:?}", k, est.verdict);
            Ok(Output::new(
                Some(&alg),
                json!({ "estimate": est, "is_estimate": true }),
                summary,
            ))
        }
        Command::Check {
            which,
            input,
            limits,
            bound,
            m: mm,
            n,
        } => {
            let (alg, m) = load_input(input, p)?;
            let l = merge_limits(config, limits)?;
            check_command(*which, &alg, &m, &l, *bound, *mm, *n)
        }
        Command::Suite {
            which: SuiteArg::Acceptance,
        } => {
            let results = suite::run_all();
            for r in &results {
                eprintln!("{}", r.line());
            }
            let passed = results.iter().filter(|r| r.passed).count();
            let mut o = Output::new(
                None,
                json!({ "criteria": results }),
                format!("{passed}/{} criteria passed", results.len()),
            );
            o.seed = Some(suite::SUITE_SEED);
            o.success = passed == results.len();
            Ok(o)
        }
    }
}

fn ring_summary(alg: &Algebra) -> Value {
    let c = alg.classify();
    json!({
        "dim": alg.dim(),
        "basis_labels": alg.labels(),
        "generators": alg.generator_names(),
        "socle_basis": (0..alg.socle().dim()).map(|i| alg.format_elem(&alg.socle().basis_vector(i))).collect::<Vec<_>>(),
        "classification": c,
    })
}

fn ring_command(action: &RingCommand, p: Option<u32>) -> Result<Output> {
    match action {
        RingCommand::List => {
            let mut rows = Vec::new();
            for id in catalog_ids() {
                let alg = catalog::ring(&id, None)?;
                let mut v = ring_summary(&alg);
                v["id"] = json!(id);
                rows.push(v);
            }
            let summary = format!("{} catalog rings", rows.len());
            Ok(Output::new(None, json!({ "rings": rows }), summary))
        }
        RingCommand::Show { id } => {
            let alg = load_ring(id, p)?;
            let mut v = ring_summary(&alg);
            v["structure_constants"] = to_value(&alg.to_structure_constants());
            let summary = format!(
                "{id}: dimension {}, Gorenstein: {}",
                alg.dim(),
                alg.is_gorenstein()
            );
            Ok(Output::new(Some(&alg), v, summary))
        }
        RingCommand::Validate { file } => {
            let text = std::fs::read_to_string(file)?;
            let spec: RingSpec = serde_json::from_str(&text)?;
            let alg = build(&spec)?;
            let summary = format!("valid ring of dimension {}", alg.dim());
            Ok(Output::new(
                Some(&alg),
                json!({ "valid": true, "ring": ring_summary(&alg) }),
                summary,
            ))
        }
    }
}

fn seq_command(action: &SeqCommand, p: Option<u32>) -> Result<Output> {
    match action {
        SeqCommand::Build {
            input,
            m: mm,
            n,
            out,
        } => {
            let (alg, m) = load_input(input, p)?;
            let s = build_free_splice(&m, *mm, *n)?;
            if let Some(path) = out {
                let ring = if Path::new(&input.ring).is_file() {
                    RingRef::Spec(alg.spec().clone())
                } else {
                    RingRef::Id(input.ring.clone())
                };
                let file = SequenceFile::from_complex(ring, &s.complex.to_module_complex());
                std::fs::write(path, serde_json::to_string_pretty(&file)?)?;
            }
            let summary = format!(
                "ranks {:?} at positions {}..{}",
                s.complex.ranks,
                s.complex.lo,
                s.complex.hi()
            );
            Ok(Output::new(
                Some(&alg),
                json!({
                    "lo": s.complex.lo,
                    "ranks": s.complex.ranks,
                    "differentials": s.complex.diff_entries(),
                    "exactness": s.exactness,
                    "dual_exactness": s.dual_exactness,
                    "image_dim": s.image.dim(),
                    "image_isomorphism": crate::io::to_i64_rows(&s.witness.mat),
                }),
                summary,
            ))
        }
        SeqCommand::Verify {
            file,
            m: mm,
            n,
            mode,
        } => {
            let text = std::fs::read_to_string(file)?;
            let seq: SequenceFile = serde_json::from_str(&text)?;
            let alg = seq.ring.build(p)?;
            let c = seq.to_complex(&alg)?;
            let v = verify_free_splice(&c, *mm, *n, (*mode).into())?;
            if !v.agrees {
                return Err(Error::Invariant(format!(
                    "verified sequence has im ∂ outside 𝒢_{mm}{n}: {}",
                    serde_json::to_string(&v)?
                )));
            }
            let summary = format!(
                "sequence {}; im ∂ in 𝒢({mm},{n}) directly: {}",
                if v.passed {
                    "satisfies the conditions"
                } else {
                    "fails the conditions"
                },
                v.image_in_gmn
            );
            let mut o = Output::new(Some(&alg), to_value(&v), summary);
            o.success = v.passed;
            Ok(o)
        }
    }
}

fn check_command(
    which: CheckArg,
    alg: &Algebra,
    m: &Module,
    l: &SearchLimits,
    bound: usize,
    mm: usize,
    n: usize,
) -> Result<Output> {
    let mut o = match which {
        CheckArg::Complexity => {
            let r = complexity_check(m, l, bound.max(8), 10)?;
            if let Some(w) = &r.search.witness {
                verify_witness(w)?;
            }
            let chain = reducible_complexity_search(m, l, bound.max(8))?;
            let mut v = r.to_json();
            v["complexity_chain"] = chain.to_json();
            let mut o = Output::new(
                Some(alg),
                v,
                format!("cx estimate {:?}, passed: {}", r.cx.verdict, r.passed()),
            );
            o.success = r.passed();
            o
        }
        CheckArg::Gorenstein => {
            let r = gorenstein_side_check(m, l, bound)?;
            let mut o = Output::new(
                Some(alg),
                r.to_json(),
                format!("gcx estimate {:?}, passed: {}", r.gcx.verdict, r.passed()),
            );
            o.success = r.passed();
            o
        }
        CheckArg::GdimFormula => {
            let g = gdim_report(m, bound.max(2))?;
            let summary = format!(
                "gdim verdict {:?}, sup formula holds: {}",
                g.verdict, g.formula_holds
            );
            let mut o = Output::new(Some(alg), to_value(&g), summary);
            o.success = g.formula_holds;
            o
        }
        CheckArg::Splice => {
            let class = torsionfree_classify(m, mm.max(n).max(1))?;
            let member = class.contains(mm, n);
            let mut verdicts = Vec::new();
            if member {
                let s = build_free_splice(m, mm, n)?;
                let c = s.complex.to_module_complex();
                for cond in [TermCondition::AllInGmn, TermCondition::Split] {
                    let v = verify_free_splice(&c, mm, n, cond)?;
                    if !(v.passed && v.image_in_gmn) {
                        return Err(Error::Invariant(format!(
                            "constructed sequence failed verification: {}",
                            serde_json::to_string(&v)?
                        )));
                    }
                    verdicts.push(v);
                }
            }
            let summary =
                format!("module in 𝒢({mm},{n}): {member}; sequence round trip checked: {member}");
            Output::new(
                Some(alg),
                json!({ "classification": class, "member": member, "verdicts": verdicts }),
                summary,
            )
        }
    };
    o.seed = Some(l.seed);
    o.limits = to_value(l);
    Ok(o)
}

fn error_payload(e: &Error) -> Value {
    let kind = match e {
        Error::InvalidRing(_) => "invalid_ring",
        Error::Axiom { .. } => "axiom",
        Error::InfiniteDimensional(_) => "infinite_dimensional",
        Error::InvalidModule(_) => "invalid_module",
        Error::UnknownRing(_) => "unknown_ring",
        Error::UnknownModule(_) => "unknown_module",
        Error::Precondition(_) => "precondition",
        Error::Contract(_) => "contract",
        Error::Invariant(_) => "invariant",
        Error::Io(_) => "io",
        Error::Json(_) => "json",
    };
    let mut v = json!({ "error": kind, "message": e.to_string(), "exit_code": e.exit_code() });
    if let Error::Axiom { axiom, witness } = e {
        v["axiom"] = json!(axiom);
        v["witness"] = json!(witness);
    }
    v
}

fn configure_threads() {
    if let Some(n) = std::env::var("HOMWB_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
    {
        // Fails only if a pool already exists, in which case it is kept.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
}

/// Runs the command line and returns the process exit code: 0 on success,
/// 1 when a check or battery fails, 2 on bad input, 3 on an internal
/// invariant failure.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let argv: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    configure_threads();
    let start = Instant::now();
    match execute(&cli) {
        Ok(out) => {
            let report = Report {
                tool: "homwb".to_string(),
                version: env!("CARGO_PKG_VERSION").to_string(),
                ring: out.ring,
                command: argv
                    .iter()
                    .map(|a| a.to_string_lossy().into_owned())
                    .collect(),
                seed: out.seed,
                limits: out.limits,
                results: out.results,
                timing_ms: start.elapsed().as_secs_f64() * 1000.0,
            };
            println!(
                "{}",
                serde_json::to_string_pretty(&report).expect("report serializes")
            );
            eprintln!("{}", out.summary);
            if out.success {
                0
            } else {
                1
            }
        }
        Err(e) => {
            println!(
                "{}",
                serde_json::to_string_pretty(&error_payload(&e)).expect("payload serializes")
            );
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
