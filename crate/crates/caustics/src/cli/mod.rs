//! Command-line front end.
//!
//! Five subcommands share one TOML configuration format (see
//! [`config::Config`]): `phase-portrait`, `twist-interval`, `find-graph`,
//! `scan-family`, and `certify`.  Every run writes a `summary.json` into
//! the output directory next to the command's data files, except when the
//! configuration itself is rejected — then nothing is written at all.
//!
//! Exit codes: `0` for a completed run (including a candidate that was
//! examined and rejected), `2` when the computation could not finish
//! (no fiber root, a lost branch, a failed certification), and `3` for
//! configuration errors and unmet certification preconditions.

pub mod config;
pub mod svg;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scan::{scan_family, Classification, Family, ScanOptions, ScanRecord, ScanResult};
use crate::solver::{
    base_points, build_candidate_graph, conjugate_point_check, eta_consistency,
    invariance_residual, minimality_margin, GraphOptions, PeriodicGraph,
};
use crate::tol;
use crate::twist::{
    fiber_probes, twist_interval_estimate, Configuration, PhasePoint, RotationData,
    TwistIntervalEstimate, TwistMap,
};
use config::{CertifySection, Config, PortraitSection};

const EXIT_RUN_FAILED: u8 = 2;
const EXIT_CONFIG: u8 = 3;

#[derive(Parser)]
#[command(
    name = "caustics",
    version,
    about = "Periodic invariant graphs of exact symplectic twist maps and billiards"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Iterate seeds across a fiber and plot the resulting phase portrait.
    PhasePortrait(RunArgs),
    /// Estimate the interval of rotation numbers realized by the map.
    TwistInterval(RunArgs),
    /// Search for an (m, n)-periodic invariant graph.
    FindGraph(RunArgs),
    /// Classify graph existence along a one-parameter family.
    ScanFamily(RunArgs),
    /// Re-verify an accepted graph: invariance, transversality,
    /// root uniqueness, and variational minimality.
    Certify(RunArgs),
}

impl Command {
    fn args(&self) -> &RunArgs {
        match self {
            Command::PhasePortrait(args)
            | Command::TwistInterval(args)
            | Command::FindGraph(args)
            | Command::ScanFamily(args)
            | Command::Certify(args) => args,
        }
    }
}

#[derive(Args)]
struct RunArgs {
    /// TOML configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Worker threads for parallel passes (default: all cores).
    #[arg(long)]
    workers: Option<usize>,
    /// Output directory, created if missing.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

/// A job validated against the configuration, ready to run.
enum Job {
    Portrait { map: Box<dyn TwistMap>, section: PortraitSection },
    Twist { map: Box<dyn TwistMap>, margin: f64 },
    Graph { map: Box<dyn TwistMap>, rotation: RotationData, options: GraphOptions },
    Scan { family: Family, options: ScanOptions },
    Certify {
        map: Box<dyn TwistMap>,
        rotation: RotationData,
        options: GraphOptions,
        section: CertifySection,
    },
}

/// Entry point used by the binary.
pub fn run() -> ExitCode {
    let cli = Cli::parse();
    let args = cli.command.args();
    // Configuration stage: any failure here writes no files.
    let job = match prepare(&cli.command) {
        Ok(job) => job,
        Err(err @ Error::Config(_)) => {
            eprintln!("{err}");
            return ExitCode::from(EXIT_CONFIG);
        }
        Err(err) => {
            eprintln!("config error: {err}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    if let Err(err) = std::fs::create_dir_all(&args.out) {
        eprintln!("config error: cannot create {}: {err}", args.out.display());
        return ExitCode::from(EXIT_CONFIG);
    }
    match execute(job, args) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(EXIT_RUN_FAILED)
        }
    }
}

fn prepare(command: &Command) -> Result<Job> {
    let args = command.args();
    if args.workers == Some(0) {
        return Err(Error::Config("worker count must be positive".into()));
    }
    let config = Config::load(&args.config)?;
    Ok(match command {
        Command::PhasePortrait(_) => {
            Job::Portrait { map: config.twist_map()?, section: config.portrait }
        }
        Command::TwistInterval(_) => {
            Job::Twist { map: config.twist_map()?, margin: config.twist.margin }
        }
        Command::FindGraph(_) => Job::Graph {
            map: config.twist_map()?,
            rotation: config.rotation()?,
            options: config.solver.graph_options(),
        },
        Command::ScanFamily(_) => Job::Scan {
            family: config.family()?,
            options: ScanOptions {
                grid: config.solver.grid,
                accept_tol: config.solver.accept_tol,
            },
        },
        Command::Certify(_) => Job::Certify {
            map: config.twist_map()?,
            rotation: config.rotation()?,
            options: config.solver.graph_options(),
            section: config.certify,
        },
    })
}

fn execute(job: Job, args: &RunArgs) -> Result<ExitCode> {
    match job {
        Job::Portrait { map, section } => run_portrait(map.as_ref(), section, &args.out),
        Job::Twist { map, margin } => run_twist(map.as_ref(), margin, &args.out),
        Job::Graph { map, rotation, options } => {
            run_graph(map.as_ref(), rotation, options, &args.out)
        }
        Job::Scan { family, options } => run_scan(&family, options, args.workers, &args.out),
        Job::Certify { map, rotation, options, section } => {
            run_certify(map.as_ref(), rotation, options, section, &args.out)
        }
    }
}

// ---------------------------------------------------------------------------
// Output helpers.

fn write_file(dir: &Path, name: &str, content: &str) -> Result<()> {
    std::fs::write(dir.join(name), content)
        .map_err(|err| Error::Io(format!("cannot write {name}: {err}")))
}

fn write_summary<T: Serialize>(dir: &Path, summary: &T) -> Result<()> {
    let mut text =
        serde_json::to_string_pretty(summary).map_err(|err| Error::Io(err.to_string()))?;
    text.push('\n');
    write_file(dir, "summary.json", &text)
}

fn float_cell(value: Option<f64>) -> String {
    value.map(|v| format!("{v:.16e}")).unwrap_or_default()
}

#[derive(Serialize)]
struct FailureSummary {
    command: &'static str,
    status: &'static str,
    reason: String,
    files: Vec<&'static str>,
}

fn fail(dir: &Path, command: &'static str, status: &'static str, reason: String) -> Result<ExitCode> {
    write_summary(
        dir,
        &FailureSummary { command, status, reason, files: vec!["summary.json"] },
    )?;
    Ok(ExitCode::from(EXIT_RUN_FAILED))
}

// ---------------------------------------------------------------------------
// phase-portrait

#[derive(Serialize)]
struct PortraitSummary {
    command: &'static str,
    status: &'static str,
    model: &'static str,
    orbits: usize,
    steps: usize,
    /// Orbits cut short by a map failure (escape, lost tangency, ...).
    truncated: usize,
    files: Vec<&'static str>,
}

fn run_portrait(
    map: &dyn TwistMap,
    section: PortraitSection,
    out: &Path,
) -> Result<ExitCode> {
    let seeds = fiber_probes(map, 0.0, section.orbits);
    let mut orbits: Vec<Vec<PhasePoint>> = Vec::with_capacity(seeds.len());
    let mut truncated = 0usize;
    for p in seeds {
        let mut orbit = vec![PhasePoint::new(0.0, p)];
        for _ in 0..section.steps {
            match map.forward(*orbit.last().expect("orbit is nonempty")) {
                Ok(next) => orbit.push(next),
                Err(_) => {
                    truncated += 1;
                    break;
                }
            }
        }
        orbits.push(orbit);
    }

    let mut csv = String::from("orbit,step,q,p\n");
    for (index, orbit) in orbits.iter().enumerate() {
        for (step, z) in orbit.iter().enumerate() {
            csv.push_str(&format!(
                "{index},{step},{:.16e},{:.16e}\n",
                z.q.rem_euclid(1.0),
                z.p
            ));
        }
    }
    write_file(out, "orbits.csv", &csv)?;

    let mut plot =
        svg::Plot::new(&format!("phase portrait \u{2014} {}", map.name()), "q (mod 1)", "p");
    for (index, orbit) in orbits.iter().enumerate() {
        let points = orbit.iter().map(|z| (z.q.rem_euclid(1.0), z.p)).collect();
        plot.dots(points, svg::PALETTE[index % svg::PALETTE.len()], 1.2);
    }
    write_file(out, "portrait.svg", &plot.render())?;

    write_summary(
        out,
        &PortraitSummary {
            command: "phase-portrait",
            status: "ok",
            model: map.name(),
            orbits: orbits.len(),
            steps: section.steps,
            truncated,
            files: vec!["orbits.csv", "portrait.svg", "summary.json"],
        },
    )?;
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// twist-interval

#[derive(Serialize)]
struct TwistSummary {
    command: &'static str,
    status: &'static str,
    model: &'static str,
    estimate: TwistIntervalEstimate,
    files: Vec<&'static str>,
}

fn run_twist(map: &dyn TwistMap, margin: f64, out: &Path) -> Result<ExitCode> {
    let estimate = match twist_interval_estimate(map, margin) {
        Ok(estimate) => estimate,
        Err(err) => return fail(out, "twist-interval", "failed", err.to_string()),
    };

    let mut csv = String::from("margin,lower,upper\n");
    for sample in &estimate.samples {
        csv.push_str(&format!(
            "{:.16e},{:.16e},{:.16e}\n",
            sample.margin, sample.lower, sample.upper
        ));
    }
    write_file(out, "twist.csv", &csv)?;

    write_summary(
        out,
        &TwistSummary {
            command: "twist-interval",
            status: "ok",
            model: map.name(),
            estimate,
            files: vec!["twist.csv", "summary.json"],
        },
    )?;
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// find-graph

#[derive(Serialize)]
struct GraphSummary {
    command: &'static str,
    status: &'static str,
    model: &'static str,
    rotation: RotationData,
    grid: usize,
    accept_tol: f64,
    sup_delta2: f64,
    max_delta1: f64,
    closure_defect: f64,
    seam_defect: f64,
    branches_at_seed: usize,
    ambiguous_nodes: usize,
    lipschitz: f64,
    files: Vec<&'static str>,
}

fn graph_csv(graph: &PeriodicGraph) -> String {
    let mut csv = String::from("q,eta,delta1,delta2\n");
    for j in 0..graph.qs.len() {
        csv.push_str(&format!(
            "{:.16e},{:.16e},{:.16e},{:.16e}\n",
            graph.qs[j], graph.eta[j], graph.delta1[j], graph.delta2[j]
        ));
    }
    csv
}

fn run_graph(
    map: &dyn TwistMap,
    rotation: RotationData,
    options: GraphOptions,
    out: &Path,
) -> Result<ExitCode> {
    let graph = match build_candidate_graph(map, rotation, options) {
        Ok(graph) => graph,
        Err(Error::NoRoot { q }) => {
            return fail(
                out,
                "find-graph",
                "no-root",
                format!("no positional root on the fiber over q = {q:.6}"),
            )
        }
        Err(Error::BranchLost { index }) => {
            return fail(
                out,
                "find-graph",
                "branch-lost",
                format!("the fiber root disappeared at grid node {index}"),
            )
        }
        Err(err) => return fail(out, "find-graph", "failed", err.to_string()),
    };
    write_file(out, "graph.csv", &graph_csv(&graph))?;
    write_summary(
        out,
        &GraphSummary {
            command: "find-graph",
            status: if graph.accepted { "accepted" } else { "rejected" },
            model: map.name(),
            rotation,
            grid: options.grid,
            accept_tol: options.accept_tol,
            sup_delta2: graph.sup_delta2,
            max_delta1: graph.max_delta1,
            closure_defect: graph.closure_defect,
            seam_defect: graph.seam_defect,
            branches_at_seed: graph.branches_at_seed,
            ambiguous_nodes: graph.ambiguous_nodes,
            lipschitz: graph.lipschitz_estimate(),
            files: vec!["graph.csv", "summary.json"],
        },
    )?;
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// scan-family

#[derive(Serialize)]
struct ScanSummary {
    command: &'static str,
    status: &'static str,
    #[serde(flatten)]
    result: ScanResult,
    files: Vec<&'static str>,
}

fn scan_csv(records: &[ScanRecord]) -> String {
    let mut csv = String::from(
        "eps,status,in_twist_interval,sup_delta2,max_delta1,closure_defect,branches_at_seed\n",
    );
    for r in records {
        csv.push_str(&format!(
            "{:.16e},{},{},{},{},{},{}\n",
            r.eps,
            r.status.label(),
            r.in_twist_interval,
            float_cell(r.sup_delta2),
            float_cell(r.max_delta1),
            float_cell(r.closure_defect),
            r.branches_at_seed
        ));
    }
    csv
}

fn classification_label(classification: &Classification) -> &'static str {
    match classification {
        Classification::WholeInterval => "whole interval",
        Classification::Empty => "empty",
        Classification::IsolatedPoints { .. } => "isolated points",
        Classification::Inconclusive { .. } => "inconclusive",
    }
}

fn scan_svg(result: &ScanResult) -> String {
    let mut plot = svg::Plot::new(
        &format!(
            "{} {} \u{2014} {}",
            result.spec.rotation,
            classification_label(&result.classification),
            result.caveat
        ),
        "eps",
        "log10 sup |Delta2|",
    );
    let floor = 1e-17f64;
    let select = |accepted: bool| -> Vec<(f64, f64)> {
        result
            .records
            .iter()
            .filter(|r| {
                (r.status == crate::scan::MemberStatus::Accepted) == accepted
                    && r.sup_delta2.is_some()
            })
            .map(|r| (r.eps, r.sup_delta2.expect("filtered to present").max(floor).log10()))
            .collect()
    };
    plot.hline(result.accept_tol.log10(), "#888888");
    plot.dots(select(true), "#3a7d44", 3.0);
    plot.dots(select(false), "#c94c4c", 3.0);
    plot.render()
}

fn run_scan(
    family: &Family,
    options: ScanOptions,
    workers: Option<usize>,
    out: &Path,
) -> Result<ExitCode> {
    let result = match workers {
        None => scan_family(family, &options),
        Some(threads) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|err| Error::Contract(format!("cannot build worker pool: {err}")))?;
            pool.install(|| scan_family(family, &options))
        }
    };
    write_file(out, "scan.csv", &scan_csv(&result.records))?;
    write_file(out, "scan.svg", &scan_svg(&result))?;
    write_summary(
        out,
        &ScanSummary {
            command: "scan-family",
            status: "ok",
            result,
            files: vec!["scan.csv", "scan.svg", "summary.json"],
        },
    )?;
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// certify

#[derive(Serialize)]
struct CheckReport {
    name: &'static str,
    value: f64,
    threshold: f64,
    /// `true` when the value must stay below the threshold, `false` when
    /// it must stay above.
    upper_bound: bool,
    passed: bool,
}

#[derive(Serialize)]
struct CertifySummary {
    command: &'static str,
    status: &'static str,
    model: &'static str,
    rotation: RotationData,
    grid: usize,
    sup_delta2: f64,
    checks: Vec<CheckReport>,
    /// Checks that do not apply to this model.
    skipped: Vec<&'static str>,
    files: Vec<&'static str>,
}

fn run_certify(
    map: &dyn TwistMap,
    rotation: RotationData,
    options: GraphOptions,
    section: CertifySection,
    out: &Path,
) -> Result<ExitCode> {
    let graph = match build_candidate_graph(map, rotation, options) {
        Ok(graph) => graph,
        Err(Error::NoRoot { q }) => {
            return fail(
                out,
                "certify",
                "no-root",
                format!("no positional root on the fiber over q = {q:.6}"),
            )
        }
        Err(err) => return fail(out, "certify", "failed", err.to_string()),
    };
    if !graph.accepted {
        write_summary(
            out,
            &FailureSummary {
                command: "certify",
                status: "precondition-failed",
                reason: format!(
                    "candidate rejected: sup |Delta2| = {:.3e} exceeds {:.3e}",
                    graph.sup_delta2, options.accept_tol
                ),
                files: vec!["summary.json"],
            },
        )?;
        return Ok(ExitCode::from(EXIT_CONFIG));
    }

    let mut checks = Vec::new();
    let mut skipped = Vec::new();

    let invariance = match invariance_residual(map, &graph) {
        Ok(value) => value,
        Err(err) => return fail(out, "certify", "failed", err.to_string()),
    };
    checks.push(CheckReport {
        name: "invariance",
        value: invariance,
        threshold: section.invariance_tol,
        upper_bound: true,
        passed: invariance < section.invariance_tol,
    });

    let conjugate = match conjugate_point_check(map, &graph, 16) {
        Ok(value) => value,
        Err(err) => return fail(out, "certify", "failed", err.to_string()),
    };
    checks.push(CheckReport {
        name: "conjugate-points",
        value: conjugate,
        threshold: section.conjugate_tol,
        upper_bound: false,
        passed: conjugate > section.conjugate_tol,
    });

    let consistency = match eta_consistency(
        map,
        rotation,
        tol::CONSISTENCY_QS,
        &tol::CONSISTENCY_RESOLUTIONS,
    ) {
        Ok(value) => value,
        Err(err) => return fail(out, "certify", "failed", err.to_string()),
    };
    checks.push(CheckReport {
        name: "root-uniqueness",
        value: consistency,
        threshold: section.consistency_tol,
        upper_bound: true,
        passed: consistency < section.consistency_tol,
    });

    if map.generating().is_some() {
        let margin = base_points(map, rotation, graph.qs[0], graph.eta[0])
            .and_then(|points| {
                Configuration::periodic(
                    points[..rotation.n() as usize].to_vec(),
                    rotation,
                )
            })
            .and_then(|orbit| minimality_margin(map, &orbit, section.minimality_grid));
        match margin {
            Ok(value) => checks.push(CheckReport {
                name: "minimality",
                value,
                threshold: -tol::MINIMALITY_SLACK,
                upper_bound: false,
                passed: value >= -tol::MINIMALITY_SLACK,
            }),
            Err(err) => return fail(out, "certify", "failed", err.to_string()),
        }
    } else {
        skipped.push("minimality");
    }

    let passed = checks.iter().all(|c| c.passed);
    write_summary(
        out,
        &CertifySummary {
            command: "certify",
            status: if passed { "certified" } else { "failed" },
            model: map.name(),
            rotation,
            grid: options.grid,
            sup_delta2: graph.sup_delta2,
            checks,
            skipped,
            files: vec!["summary.json"],
        },
    )?;
    Ok(if passed { ExitCode::SUCCESS } else { ExitCode::from(EXIT_RUN_FAILED) })
}
