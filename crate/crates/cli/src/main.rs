use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use kakimizu::complex::{build_ms_complex_capped, euler_characteristic, f_vector, is_flag};
use kakimizu::cycle::DEFAULT_CYCLE_CAP;
use kakimizu::homotopy::{
    collapse_certificate, homology, lemma51_verdict, replay_collapse, DEFAULT_CIRCUIT_BUDGET,
    DEFAULT_FACE_BUDGET,
};
use kakimizu::io::{export_complex, import_complex};
use kakimizu::knot::{bounds, validate_twist_sequence, TwistSequence};
use kakimizu::metric::{diameter, distance, lemma71_path, one_skeleton_graph, MetricError};
use kakimizu::orientation::{Orientation, MAX_TREE_SIZE};
use kakimizu::report::{report_json, run_verification, RunConfig};

#[derive(Parser)]
#[command(name = "kakimizu", version, about = "Kakimizu complexes of two-bridge knots")]
struct Cli {
    /// Output is always JSON; accepted for scripts that pass it.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the complex and write it as a kakimizu-complex/1 document
    Build(BuildArgs),
    /// Compute invariants of a stored complex
    Analyze(AnalyzeArgs),
    /// Shortest or constructive path between two vertices
    Path(PathArgs),
    /// Run the verification checks over a range of tree sizes
    Verify(VerifyArgs),
    /// Slope of the knot with the given twist coefficients
    Slope(SlopeArgs),
    /// Diameter and intersection bounds for a genus
    Bounds(BoundsArgs),
}

#[derive(Args)]
#[group(id = "size", required = true, multiple = false)]
struct SizeArgs {
    /// Number of tree vertices
    #[arg(long, group = "size")]
    n: Option<usize>,
    /// Twist coefficients a1,a2,...; implies n = their count
    #[arg(long, group = "size", value_delimiter = ',', allow_hyphen_values = true)]
    twists: Option<Vec<i64>>,
}

impl SizeArgs {
    fn resolve(&self) -> Result<(usize, Option<TwistSequence>)> {
        match (&self.n, &self.twists) {
            (Some(n), _) => Ok((*n, None)),
            (None, Some(raw)) => {
                let seq = validate_twist_sequence(raw)?;
                Ok((seq.len(), Some(seq)))
            }
            (None, None) => bail!("one of --n or --twists is required"),
        }
    }
}

#[derive(Args)]
struct BuildArgs {
    #[command(flatten)]
    size: SizeArgs,
    #[arg(long, default_value_t = DEFAULT_CYCLE_CAP)]
    cycle_cap: usize,
    /// Store the sink-reversal cycles alongside the facets
    #[arg(long)]
    include_cycles: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    homology: bool,
    #[arg(long)]
    collapse: bool,
    #[arg(long)]
    lemma51: bool,
    #[arg(long)]
    flag: bool,
    #[arg(long, default_value_t = DEFAULT_FACE_BUDGET)]
    face_budget: usize,
    #[arg(long, default_value_t = DEFAULT_CIRCUIT_BUDGET)]
    circuit_budget: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum PathMethod {
    Bfs,
    Lemma71,
}

#[derive(Args)]
struct PathArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    from: String,
    #[arg(long, allow_hyphen_values = true)]
    to: String,
    #[arg(long, value_enum, default_value = "bfs")]
    method: PathMethod,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
#[command(group(ArgGroup::new("range").required(true).multiple(false)))]
struct VerifyArgs {
    #[arg(long, group = "range")]
    n: Option<usize>,
    /// Inclusive range LO..HI
    #[arg(long, group = "range", value_parser = parse_range)]
    n_range: Option<(usize, usize)>,
    #[arg(long, group = "range", value_delimiter = ',', allow_hyphen_values = true)]
    twists: Option<Vec<i64>>,
    #[arg(long, default_value_t = DEFAULT_CYCLE_CAP)]
    cycle_cap: usize,
    #[arg(long, default_value_t = DEFAULT_FACE_BUDGET)]
    face_budget: usize,
    #[arg(long, default_value_t = DEFAULT_CIRCUIT_BUDGET)]
    circuit_budget: usize,
    #[arg(long)]
    no_homology: bool,
    #[arg(long)]
    no_collapse: bool,
    #[arg(long)]
    no_lemma51: bool,
    #[arg(long)]
    no_flag: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SlopeArgs {
    #[arg(long, required = true, value_delimiter = ',', allow_hyphen_values = true)]
    twists: Vec<i64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long)]
    genus: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| format!("expected LO..HI, got {s:?}"))?;
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("{t:?}: {e}"));
    Ok((parse(lo)?, parse(hi)?))
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_json(v: &Value, out: Option<&Path>) -> Result<()> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    emit(&s, out)
}

fn load(path: &Path) -> Result<kakimizu::complex::SimplicialComplex> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(import_complex(&text)?)
}

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var("KAKIMIZU_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| anyhow!("KAKIMIZU_THREADS must be a positive integer, got {raw:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()?;
    Ok(())
}

/// Exit code 1 for a failed check; usage and input errors surface as `Err`.
fn run(cli: Cli) -> Result<u8> {
    configure_threads()?;
    match cli.command {
        Command::Build(a) => {
            let (n, seq) = a.size.resolve()?;
            if n == 0 || n > MAX_TREE_SIZE {
                bail!("n = {n} outside 1..={MAX_TREE_SIZE}");
            }
            let mut k = build_ms_complex_capped(n, a.cycle_cap)?;
            if let Some(seq) = seq {
                k = k.with_twist_sequence(seq);
            }
            emit(&export_complex(&k, a.include_cycles), a.out.as_deref())?;
            Ok(0)
        }
        Command::Analyze(a) => {
            let k = load(&a.input)?;
            emit_json(&analyze(&k, &a), a.out.as_deref())?;
            Ok(0)
        }
        Command::Path(a) => {
            let k = load(&a.input)?;
            let g = one_skeleton_graph(&k);
            let witness = match a.method {
                PathMethod::Bfs => distance(&g, &a.from, &a.to)?.1,
                PathMethod::Lemma71 => {
                    if k.tree_size().is_none() {
                        bail!("the constructive path needs a complex with orientation vertices");
                    }
                    let from: Orientation = a.from.parse()?;
                    let to: Orientation = a.to.parse()?;
                    for o in [&from, &to] {
                        if k.index_of(&o.to_sign_string()).is_none() {
                            bail!("unknown vertex {o}");
                        }
                    }
                    match lemma71_path(&from, &to, &g) {
                        Ok(p) => p,
                        Err(e @ MetricError::StepNotAnEdge { .. }) => {
                            emit_json(&json!({"error": e.to_string()}), a.out.as_deref())?;
                            return Ok(1);
                        }
                        Err(e) => return Err(e.into()),
                    }
                }
            };
            let record = json!({"distance": witness.length, "path": witness.path});
            emit_json(&record, a.out.as_deref())?;
            Ok(0)
        }
        Command::Verify(a) => {
            let mut cfg = match (a.n, a.n_range, &a.twists) {
                (Some(n), _, _) => RunConfig::for_range(n, n),
                (_, Some((lo, hi)), _) => RunConfig::for_range(lo, hi),
                (_, _, Some(raw)) => RunConfig::for_twists(validate_twist_sequence(raw)?),
                _ => bail!("one of --n, --n-range or --twists is required"),
            };
            cfg.cycle_cap = a.cycle_cap;
            cfg.face_budget = a.face_budget;
            cfg.circuit_budget = a.circuit_budget;
            cfg.homology = !a.no_homology;
            cfg.collapse = !a.no_collapse;
            cfg.lemma51 = !a.no_lemma51;
            cfg.flag = !a.no_flag;
            cfg.out = a.out.clone();
            let report = run_verification(&cfg)?;
            emit(&report_json(&report), cfg.out.as_deref())?;
            Ok(if report.pass { 0 } else { 1 })
        }
        Command::Slope(a) => {
            let seq = validate_twist_sequence(&a.twists)?;
            emit_json(&serde_json::to_value(seq.slope()?)?, a.out.as_deref())?;
            Ok(0)
        }
        Command::Bounds(a) => {
            emit_json(&serde_json::to_value(bounds(a.genus)?)?, a.out.as_deref())?;
            Ok(0)
        }
    }
}

fn analyze(k: &kakimizu::complex::SimplicialComplex, a: &AnalyzeArgs) -> Value {
    let g = one_skeleton_graph(k);
    let mut record = json!({
        "n": k.tree_size(),
        "vertices": k.vertex_count(),
        "facets": k.facets().len(),
        "dimension": k.dimension(),
        "pure": k.is_pure(),
        "f_vector": f_vector(k),
        "euler_characteristic": euler_characteristic(k),
        "diameter": diameter(&g).ok(),
    });
    let fields = record.as_object_mut().expect("object");
    if a.homology {
        let v = match homology(k, a.face_budget) {
            Ok(h) => json!({"trivial": h.is_trivial(), "summary": h}),
            Err(e) => json!({"error": e.to_string()}),
        };
        fields.insert("homology".into(), v);
    }
    if a.collapse {
        let v = match collapse_certificate(k, a.face_budget) {
            Ok(Some(cert)) => json!({
                "status": "collapses_to_point",
                "pairs": cert.pairs.len(),
                "replayed": replay_collapse(k, &cert, a.face_budget),
            }),
            Ok(None) => json!({"status": "inconclusive"}),
            Err(e) => json!({"status": "inconclusive", "error": e.to_string()}),
        };
        fields.insert("collapse".into(), v);
    }
    if a.lemma51 {
        let v = match lemma51_verdict(k, a.circuit_budget) {
            Ok(v) => json!(v),
            Err(e) => json!({"error": e.to_string()}),
        };
        fields.insert("lemma51".into(), v);
    }
    if a.flag {
        fields.insert("flag".into(), json!(is_flag(k)));
    }
    record
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
