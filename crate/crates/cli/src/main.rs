use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use forcelab::bundles::{certify_rigid_linkage, induced_path_bundle, psd_reversal, Verdict};
use forcelab::enumerate::graphs_up_to;
use forcelab::forcing::{propagate, propagation_time_of_forces, validate_chronology};
use forcelab::io::{parse_edge_list, parse_graph6, to_dot, write_graph6, DotStyle};
use forcelab::pip::{chronology_to_witness, generate_family, verify_witness, witness_to_chronology, FamilyMode};
use forcelab::slices::slice;
use forcelab::solvers::{solve, Parameter, SolverConfig};
use forcelab::sweep::{graph_sweep, grid_csv, grid_table, param_sweep, params_csv, parse_checks, GraphSource};
use forcelab::{BlockPartition, Error, Graph, PipWitness, RelaxedChronology, Rule, VertexSet};
use serde::Serialize;
use serde_json::json;

#[derive(Parser)]
#[command(name = "forcelab", version, about = "Zero forcing chronologies, path covers and exhaustive solvers")]
struct Cli {
    /// Print human-readable traces to stderr.
    #[arg(long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Propagate from a blue set, or validate a supplied chronology.
    Simulate {
        #[arg(long, value_enum)]
        rule: RuleArg,
        #[arg(long)]
        graph: PathBuf,
        /// Comma-separated initial blue vertices.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        blue: Vec<usize>,
        #[arg(long)]
        chronology: Option<PathBuf>,
    },
    /// Compute a graph parameter exhaustively.
    Solve {
        #[arg(long, value_enum)]
        param: ParamArg,
        #[arg(long)]
        graph: PathBuf,
        /// Initial set size for propagation times.
        #[arg(short)]
        m: Option<usize>,
    },
    /// Convert between chronologies and path cover witnesses.
    Witness {
        #[command(subcommand)]
        action: WitnessAction,
    },
    /// Graph families induced by block partitions.
    Family {
        #[command(subcommand)]
        action: FamilyAction,
    },
    /// Path bundles of PSD chronologies.
    Bundle {
        #[command(subcommand)]
        action: BundleAction,
        #[arg(long, global = true)]
        graph: Option<PathBuf>,
        #[arg(long, global = true)]
        chronology: Option<PathBuf>,
        #[arg(long, global = true)]
        vertex: Option<usize>,
    },
    /// Sweeps over graph collections.
    Verify {
        #[command(subcommand)]
        action: VerifyAction,
        /// Worker threads for the sweep.
        #[arg(long, global = true)]
        jobs: Option<usize>,
    },
    Export {
        #[command(subcommand)]
        action: ExportAction,
    },
    Graphs {
        #[command(subcommand)]
        action: GraphsAction,
    },
}

#[derive(Subcommand)]
enum WitnessAction {
    /// Witness from a standard chronology.
    Extract {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        chronology: PathBuf,
    },
    /// Chronology from a witness.
    Apply {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        witness: PathBuf,
    },
    Verify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        witness: PathBuf,
    },
}

#[derive(Subcommand)]
enum FamilyAction {
    /// Write one manifest line per member graph.
    Generate {
        /// JSON array of block partitions.
        #[arg(long)]
        partitions: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Extremes)]
        mode: ModeArg,
        #[arg(long, default_value_t = 16)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Where to write the family witness; manifest lines refer to it.
        #[arg(long)]
        witness_out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum BundleAction {
    Induce,
    Reverse,
    Certify,
}

#[derive(Subcommand)]
enum VerifyAction {
    /// Slice-set bounds and per-graph checks, as CSV.
    Bounds {
        /// `all-n:K`, `connected-n:K`, a `.g6` stream or an edge list.
        #[arg(long)]
        graphs: String,
        #[arg(long, default_value = "ptplus_bound,ppt_bound")]
        checks: String,
        /// Also write the per-check summary JSON here.
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Parameter table, as CSV.
    Params {
        #[arg(long)]
        graphs: String,
        #[arg(long, value_enum, value_delimiter = ',', default_value = "z,zplus,pd")]
        params: Vec<ParamArg>,
        /// Record wall-clock time per entry.
        #[arg(long)]
        timing: bool,
    },
    /// Grid closed forms for 2 <= s <= S and t <= 3, as CSV.
    Grid {
        #[arg(long, default_value_t = 7)]
        s_max: usize,
    },
}

#[derive(Subcommand)]
enum ExportAction {
    Dot {
        #[arg(long)]
        graph: PathBuf,
        /// Color the slices at this step of the chronology.
        #[arg(long, requires = "chronology")]
        slice: Option<usize>,
        #[arg(long)]
        chronology: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum GraphsAction {
    /// Print every graph up to isomorphism as graph6.
    Enumerate {
        #[arg(long)]
        max_n: usize,
        #[arg(long)]
        connected: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum RuleArg {
    #[value(alias = "standard")]
    Z,
    #[value(alias = "psd")]
    Zplus,
    #[value(alias = "power-domination")]
    Pd,
    #[value(alias = "rigid-linkage")]
    Rl,
}

impl From<RuleArg> for Rule {
    fn from(r: RuleArg) -> Self {
        match r {
            RuleArg::Z => Rule::Standard,
            RuleArg::Zplus => Rule::Psd,
            RuleArg::Pd => Rule::PowerDomination,
            RuleArg::Rl => Rule::RigidLinkage,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ParamArg {
    Z,
    Zplus,
    Pd,
    Pt,
    Ptplus,
    Ppt,
    Thr,
    Thrplus,
}

impl From<ParamArg> for Parameter {
    fn from(p: ParamArg) -> Self {
        match p {
            ParamArg::Z => Parameter::Z,
            ParamArg::Zplus => Parameter::ZPlus,
            ParamArg::Pd => Parameter::PowerDomination,
            ParamArg::Pt => Parameter::Pt,
            ParamArg::Ptplus => Parameter::PtPlus,
            ParamArg::Ppt => Parameter::Ppt,
            ParamArg::Thr => Parameter::Thr,
            ParamArg::Thrplus => Parameter::ThrPlus,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Extremes,
    Enumerate,
    Sample,
}

/// A failure reported with exit code 1.
struct Failure {
    kind: &'static str,
    message: String,
    detail: serde_json::Value,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let kind = match &e {
            Error::InvalidVertex { .. } | Error::InvalidArgument(_) | Error::InvalidRule(_) => "invalid_input",
            Error::Parse { .. } | Error::Json(_) => "parse",
            Error::Io(_) => "io",
            Error::Chronology(_) => "chronology",
            Error::Witness(_) => "witness",
            Error::Bundle(_) => "bundle",
            Error::NotForcing { .. } | Error::Infeasible(_) => "infeasible",
            Error::CapExceeded { .. } => "cap_exceeded",
            Error::Invariant(_) => "invariant",
        };
        let detail = match &e {
            Error::Chronology(c) => serde_json::to_value(c).unwrap_or_default(),
            Error::Witness(w) => serde_json::to_value(w).unwrap_or_default(),
            _ => serde_json::Value::Null,
        };
        Failure { kind, message: e.to_string(), detail }
    }
}

fn validation(message: String, detail: serde_json::Value) -> Failure {
    Failure { kind: "validation", message, detail }
}

type Outcome = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(Error::from)
}

fn load_graph(path: &Path) -> Result<Graph, Error> {
    let text = read(path)?;
    if path.extension().is_some_and(|e| e == "g6") {
        parse_graph6(text.lines().find(|l| !l.trim().is_empty()).unwrap_or(""))
    } else {
        parse_edge_list(&text)
    }
}

fn load_chronology(path: &Path) -> Result<RelaxedChronology, Error> {
    RelaxedChronology::from_json(&read(path)?)
}

fn emit<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string(value).expect("serializable"));
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let mut err = json!({ "error": f.kind, "message": f.message });
            if !f.detail.is_null() {
                err["detail"] = f.detail;
            }
            eprintln!("{err}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Outcome {
    let verbose = cli.verbose;
    match cli.command {
        Command::Simulate { rule, graph, blue, chronology } => {
            simulate(rule.into(), &graph, &blue, chronology, verbose)
        }
        Command::Solve { param, graph, m } => {
            let g = load_graph(&graph)?;
            let report = solve(&g, param.into(), m, &SolverConfig::sequential())?;
            emit(&report);
            Ok(())
        }
        Command::Witness { action } => witness(action),
        Command::Family { action: FamilyAction::Generate { partitions, mode, count, seed, witness_out } } => {
            let parts: Vec<BlockPartition> = serde_json::from_str(&read(&partitions)?).map_err(Error::from)?;
            let mode = match mode {
                ModeArg::Extremes => FamilyMode::Extremes,
                ModeArg::Enumerate => FamilyMode::Enumerate,
                ModeArg::Sample => FamilyMode::Sample { count, seed },
            };
            let witness_ref = witness_out.as_ref().unwrap_or(&partitions).display().to_string();
            let (family, records) = generate_family(&parts, mode, &witness_ref, false)?;
            if let Some(path) = &witness_out {
                fs::write(path, family.witness.to_json()).map_err(Error::from)?;
            }
            if verbose {
                eprintln!("|E1| = {}, |E2| = {}, {} members", family.e1.len(), family.e2.len(), records.len());
            }
            for r in &records {
                emit(r);
            }
            Ok(())
        }
        Command::Bundle { action, graph, chronology, vertex } => {
            let missing = |flag: &str| Failure::from(Error::InvalidArgument(format!("--{flag} is required")));
            let g = load_graph(&graph.ok_or_else(|| missing("graph"))?)?;
            let chronology = chronology.ok_or_else(|| missing("chronology"))?;
            let f = load_chronology(&chronology)?;
            let x = vertex.ok_or_else(|| missing("vertex"))?;
            bundle(action, &g, &f, x, &chronology.display().to_string())
        }
        Command::Verify { action, jobs } => with_jobs(jobs, || verify(action, verbose)),
        Command::Export { action: ExportAction::Dot { graph, slice: n, chronology } } => {
            let g = load_graph(&graph)?;
            let mut style = DotStyle::default();
            if let (Some(n), Some(path)) = (n, chronology) {
                let f = load_chronology(&path)?;
                let s = slice(&g, &f, n)?;
                let colors = (0..g.n())
                    .map(|v| {
                        let c = if s.minus.contains(v) {
                            "lightgray"
                        } else if s.at.contains(v) {
                            "dodgerblue"
                        } else {
                            "white"
                        };
                        Some(c.to_string())
                    })
                    .collect();
                style.colors = Some(colors);
            }
            print!("{}", to_dot(&g, &style));
            Ok(())
        }
        Command::Graphs { action: GraphsAction::Enumerate { max_n, connected } } => {
            for g in graphs_up_to(max_n, connected)? {
                println!("{}", write_graph6(&g));
            }
            Ok(())
        }
    }
}

fn simulate(rule: Rule, graph: &Path, blue: &[usize], chronology: Option<PathBuf>, verbose: bool) -> Outcome {
    let g = load_graph(graph)?;
    if let Some(path) = chronology {
        let f = load_chronology(&path)?;
        let f = if f.rule() == rule { f } else { f.with_rule(rule) };
        let expansion = validate_chronology(&g, &f).map_err(Error::from)?;
        let pt = match rule {
            Rule::Standard | Rule::Psd => Some(propagation_time_of_forces(&g, f.base(), &f.force_set(), rule)?),
            _ => None,
        };
        if verbose {
            for (k, e) in expansion.0.iter().enumerate() {
                eprintln!("E[{k}] = {:?}", e.to_vec());
            }
        }
        emit(&json!({ "valid": true, "rule": rule, "ct": f.ct(), "pt_of_forces": pt, "expansion": expansion.0 }));
        return Ok(());
    }
    let base: VertexSet = blue.iter().copied().collect();
    let p = propagate(rule, &g, &base)?;
    if verbose {
        for (k, step) in p.chronology.steps().iter().enumerate() {
            let forces: Vec<String> = step.iter().map(|f| f.to_string()).collect();
            eprintln!("step {}: {}", k + 1, forces.join(" "));
        }
    }
    emit(&json!({ "rule": rule, "blue": base, "pt": p.time, "chronology": p.chronology }));
    Ok(())
}

fn witness(action: WitnessAction) -> Outcome {
    match action {
        WitnessAction::Extract { graph, chronology } => {
            let g = load_graph(&graph)?;
            let f = load_chronology(&chronology)?;
            let w = chronology_to_witness(&g, &f)?;
            println!("{}", w.to_json());
        }
        WitnessAction::Apply { graph, witness } => {
            let g = load_graph(&graph)?;
            let w = PipWitness::from_json(&read(&witness)?)?;
            println!("{}", witness_to_chronology(&g, &w)?.to_json());
        }
        WitnessAction::Verify { graph, witness } => {
            let g = load_graph(&graph)?;
            let w = PipWitness::from_json(&read(&witness)?)?;
            verify_witness(&g, &w).map_err(Error::from)?;
            emit(&json!({ "valid": true, "paths": w.paths.len(), "K": w.k }));
        }
    }
    Ok(())
}

fn bundle(action: BundleAction, g: &Graph, f: &RelaxedChronology, x: usize, host: &str) -> Outcome {
    match action {
        BundleAction::Induce => emit(&induced_path_bundle(g, f, x)?.to_record(host, Some(x))),
        BundleAction::Reverse => {
            let r = psd_reversal(g, f, x)?;
            emit(&json!({ "base": r.base, "chronology": r.chronology, "bundle": r.bundle.to_record(host, Some(x)) }));
        }
        BundleAction::Certify => {
            let c = certify_rigid_linkage(g, f, x)?;
            emit(&c);
            if c.verdict == Verdict::Invalid {
                return Err(validation(
                    c.violation.clone().unwrap_or_default(),
                    serde_json::to_value(&c).unwrap_or_default(),
                ));
            }
        }
    }
    Ok(())
}

#[cfg(feature = "parallel")]
fn with_jobs(jobs: Option<usize>, f: impl FnOnce() -> Outcome + Send) -> Outcome {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        builder = builder.num_threads(j.max(1));
    }
    let pool = builder.build().map_err(|e| Failure::from(Error::InvalidArgument(format!("thread pool: {e}"))))?;
    pool.install(f)
}

#[cfg(not(feature = "parallel"))]
fn with_jobs(_jobs: Option<usize>, f: impl FnOnce() -> Outcome + Send) -> Outcome {
    f()
}

fn verify(action: VerifyAction, verbose: bool) -> Outcome {
    let cfg = SolverConfig::default();
    let parallel = forcelab::par::parallel_enabled();
    match action {
        VerifyAction::Bounds { graphs, checks, summary } => {
            let checks = parse_checks(&checks)?;
            let graphs = graphs.parse::<GraphSource>()?.load()?;
            if verbose {
                eprintln!("{} graphs", graphs.len());
            }
            let report = graph_sweep(&graphs, &checks, &cfg, parallel);
            print!("{}", report.bounds_csv());
            let totals = report.summary(&checks);
            let text = serde_json::to_string_pretty(&totals).map_err(Error::from)?;
            if let Some(path) = summary {
                fs::write(path, &text).map_err(Error::from)?;
            }
            if verbose {
                eprintln!("{text}");
            }
            if report.failures() > 0 {
                return Err(validation(
                    format!("{} check failures", report.failures()),
                    serde_json::to_value(&totals).unwrap_or_default(),
                ));
            }
        }
        VerifyAction::Params { graphs, params, timing } => {
            let graphs = graphs.parse::<GraphSource>()?.load()?;
            let params: Vec<Parameter> = params.into_iter().map(Parameter::from).collect();
            print!("{}", params_csv(&param_sweep(&graphs, &params, &cfg, parallel, timing)));
        }
        VerifyAction::Grid { s_max } => {
            let rows = grid_table(s_max, &cfg);
            print!("{}", grid_csv(&rows));
            if let Some(bad) = rows.iter().find(|r| !r.pass) {
                return Err(validation(
                    format!("grid P{} x P{} disagrees with the closed forms", bad.s, bad.t),
                    serde_json::to_value(bad).unwrap_or_default(),
                ));
            }
        }
    }
    Ok(())
}
