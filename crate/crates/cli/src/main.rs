//! Command-line front end: the homogeneous-lattice optimum table,
//! randomized scheme verification, single-shot quantities, SCUB checks and
//! lattice generation. Reports are JSON lines; `--json` switches every
//! output to JSON.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use pscub_core::cluster::{Cluster, DEFAULT_EDGE_CAP};
use pscub_core::oracle::{ursell, FugacityVector};
use pscub_core::sampling::{random_cluster, random_system, rng};
use pscub_core::schemes::{
    penrose_identity_residual, singleton_properties_check, singleton_trees,
    verify_partition_scheme, BehaviourVector, SchemeKind,
};
use pscub_core::scub::homogeneous::{alpha, derivative_fd, fixpoint_residual, rho_star};
use pscub_core::scub::table::optimum_table;
use pscub_core::scub::{admissible_sweep, optimal_rho, scub_holds, LeopKind};
use pscub_core::system::{PolymerSystem, SystemSpec};

#[derive(Parser)]
#[command(name = "pscub", about = "Cluster-expansion convergence toolkit for abstract polymer systems", version)]
struct Cli {
    /// Emit JSON instead of text everywhere.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the optimal homogeneous rho per lattice and SCUB shape.
    Table1,
    /// Randomized partition-scheme verification sweeps.
    Verify {
        #[arg(long, value_enum)]
        scheme: SchemeArg,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long = "max-len", default_value_t = 5)]
        max_len: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Ursell value and singleton-tree counts of an induced cluster.
    Ursell {
        #[arg(long)]
        graph: PathBuf,
        /// Comma-separated polymer names, e.g. a,a,b.
        #[arg(long)]
        xi: String,
    },
    /// Check or optimise a SCUB on a polymer system.
    Scub {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum)]
        kind: KindArg,
        /// Homogeneous rho value.
        #[arg(long, conflicts_with = "rho")]
        homogeneous: Option<f64>,
        /// JSON file mapping polymer names to rho values.
        #[arg(long)]
        rho: Option<PathBuf>,
        /// Compute the optimal homogeneous rho of the shape at the
        /// maximum-degree vertex instead of checking a given rho.
        #[arg(long)]
        optimal: bool,
        /// Also sweep all sub-volumes for positivity of Xi at -rho.
        #[arg(long)]
        certify: bool,
    },
    /// Closed forms on the infinite D-regular tree.
    Tree {
        #[arg(long)]
        degree: usize,
        #[arg(long, conflicts_with = "star")]
        rho: Option<f64>,
        /// Evaluate at the critical point rho*.
        #[arg(long)]
        star: bool,
    },
    /// Generate a lattice patch as a graph JSON file on stdout.
    Lattice {
        #[arg(long, value_enum)]
        kind: LatticeArg,
        #[arg(long, default_value_t = 4)]
        rows: usize,
        #[arg(long, default_value_t = 4)]
        cols: usize,
        /// Cycle length or tree depth, depending on the kind.
        #[arg(long, default_value_t = 6)]
        size: usize,
        #[arg(long, default_value_t = 3)]
        degree: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    Pen,
    Greedy,
    Ret,
    Syn,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Kp,
    Dob,
    Fp,
    Red,
    Ret,
    Mix,
}

#[derive(Clone, Copy, ValueEnum)]
enum LatticeArg {
    Hexagonal,
    HexLineGraph,
    Cycle,
    RegularTree,
}

fn enum_cap() -> usize {
    std::env::var("PSCUB_ENUM_CAP")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_EDGE_CAP)
}

fn load_system(path: &PathBuf) -> Result<PolymerSystem> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let spec: SystemSpec = serde_json::from_str(&text).context("parsing graph JSON")?;
    Ok(PolymerSystem::from_spec(&spec, true)?)
}

fn kind_of(arg: KindArg) -> LeopKind {
    match arg {
        KindArg::Kp => LeopKind::Kp,
        KindArg::Dob => LeopKind::Dobrushin,
        KindArg::Fp => LeopKind::Fp,
        KindArg::Red => LeopKind::Reduced,
        KindArg::Ret => LeopKind::Returning,
        KindArg::Mix => LeopKind::MixingOptimal,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Table1 => cmd_table1(cli.json),
        Cmd::Verify {
            scheme,
            trials,
            max_len,
            seed,
        } => cmd_verify(scheme, trials, max_len, seed),
        Cmd::Ursell { graph, xi } => cmd_ursell(&graph, &xi, cli.json),
        Cmd::Scub {
            graph,
            kind,
            homogeneous,
            rho,
            optimal,
            certify,
        } => cmd_scub(&graph, kind, homogeneous, rho, optimal, certify, cli.json),
        Cmd::Tree { degree, rho, star } => cmd_tree(degree, rho, star, cli.json),
        Cmd::Lattice {
            kind,
            rows,
            cols,
            size,
            degree,
        } => cmd_lattice(kind, rows, cols, size, degree),
    }
}

fn cmd_table1(as_json: bool) -> Result<ExitCode> {
    let rows = optimum_table()?;
    if as_json {
        for row in &rows {
            println!(
                "{}",
                json!({
                    "lattice": row.lattice,
                    "scub": row.scub,
                    "shape": row.shape,
                    "optimal_rho": row.optimal_rho,
                })
            );
        }
    } else {
        println!("{:<8} {:<10} {:<20} {:>10}", "lattice", "scub", "shape", "optimal");
        for row in &rows {
            println!(
                "{:<8} {:<10} {:<20} {:>10.4}",
                row.lattice, row.scub, row.shape, row.optimal_rho
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct VerifyReport {
    scheme: String,
    trials: usize,
    subgraphs_checked: usize,
    identity_checks: usize,
    property_checks: usize,
    failures: Vec<String>,
    pass: bool,
}

fn cmd_verify(scheme: SchemeArg, trials: usize, max_len: usize, seed: u64) -> Result<ExitCode> {
    use rand::Rng as _;
    let cap = enum_cap();
    let mut r = rng(seed);
    let mut report = VerifyReport {
        scheme: match scheme {
            SchemeArg::Pen => "pen",
            SchemeArg::Greedy => "greedy",
            SchemeArg::Ret => "ret",
            SchemeArg::Syn => "syn",
        }
        .to_string(),
        trials,
        subgraphs_checked: 0,
        identity_checks: 0,
        property_checks: 0,
        failures: Vec::new(),
        pass: true,
    };
    for trial in 0..trials {
        let n = 2 + (r.gen::<u64>() % 5) as usize;
        let sys = random_system(&mut r, n, 0.4);
        let len = 1 + (r.gen::<u64>() % max_len.max(1) as u64) as usize;
        let cluster = random_cluster(&mut r, &sys, len);
        let kind = match scheme {
            SchemeArg::Pen => SchemeKind::PenroseStatic,
            SchemeArg::Greedy => SchemeKind::Greedy,
            SchemeArg::Ret => SchemeKind::Returning,
            SchemeArg::Syn => SchemeKind::Synthetic(BehaviourVector::random(&sys, &mut r)),
        };
        match verify_partition_scheme(&kind, &cluster, cap) {
            Ok(rep) => {
                report.subgraphs_checked += rep.subgraph_count;
                if !rep.ok() {
                    report
                        .failures
                        .push(format!("trial {trial}: {:?}", rep.failures));
                }
            }
            Err(e) => report.failures.push(format!("trial {trial}: {e}")),
        }
        match penrose_identity_residual(&kind, &cluster, cap) {
            Ok(0) => report.identity_checks += 1,
            Ok(res) => report
                .failures
                .push(format!("trial {trial}: identity residual {res}")),
            Err(e) => report.failures.push(format!("trial {trial}: {e}")),
        }
        if matches!(kind, SchemeKind::Greedy | SchemeKind::Returning) {
            match singleton_properties_check(&kind, &sys, &cluster) {
                Ok(fails) if fails.is_empty() => report.property_checks += 1,
                Ok(fails) => report
                    .failures
                    .push(format!("trial {trial}: {fails:?}")),
                Err(e) => report.failures.push(format!("trial {trial}: {e}")),
            }
        }
    }
    report.pass = report.failures.is_empty();
    println!("{}", serde_json::to_string(&report)?);
    Ok(if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn cmd_ursell(graph: &PathBuf, xi: &str, as_json: bool) -> Result<ExitCode> {
    let cap = enum_cap();
    let sys = load_system(graph)?;
    // Either a comma-separated list or @file with a JSON array of names.
    let owned: Vec<String> = if let Some(path) = xi.strip_prefix('@') {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
        serde_json::from_str(&text).context("parsing xi JSON array")?
    } else {
        xi.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(str::to_string)
            .collect()
    };
    if owned.is_empty() {
        bail!("empty xi vector");
    }
    let names: Vec<&str> = owned.iter().map(|s| s.as_str()).collect();
    let cluster = Cluster::induce_names(&sys, &names)?;
    let value = ursell(&cluster, cap)?;
    let counts = if cluster.is_cluster() {
        let mut counts = serde_json::Map::new();
        for (name, kind) in [
            ("pen", SchemeKind::PenroseStatic),
            ("greedy", SchemeKind::Greedy),
            ("returning", SchemeKind::Returning),
            ("synthetic_all_g", SchemeKind::Synthetic(BehaviourVector::all_g(&sys))),
            ("synthetic_all_r", SchemeKind::Synthetic(BehaviourVector::all_r(&sys))),
        ] {
            counts.insert(
                name.into(),
                json!(singleton_trees(&kind, &cluster)?.len()),
            );
        }
        Some(counts)
    } else {
        None
    };
    let out = json!({
        "ursell": value,
        "connected": cluster.is_cluster(),
        "vertices": cluster.len(),
        "edges": cluster.edge_count(),
        "singleton_trees": counts,
    });
    if as_json {
        println!("{out}");
    } else {
        println!("ursell = {value}");
        println!("connected = {}", cluster.is_cluster());
        if let Some(c) = out["singleton_trees"].as_object() {
            for (k, v) in c {
                println!("singleton trees ({k}) = {v}");
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[allow(clippy::too_many_arguments)]
fn cmd_scub(
    graph: &PathBuf,
    kind_arg: KindArg,
    homogeneous: Option<f64>,
    rho_file: Option<PathBuf>,
    optimal: bool,
    certify: bool,
    as_json: bool,
) -> Result<ExitCode> {
    let sys = load_system(graph)?;
    let kind = kind_of(kind_arg);
    if optimal {
        let gamma = (0..sys.len())
            .max_by_key(|&v| sys.neighbours(v).len())
            .ok_or_else(|| anyhow!("empty system"))?;
        let value = optimal_rho(&kind, &sys, gamma)?;
        let out = json!({
            "kind": format!("{kind:?}"),
            "gamma": sys.name(gamma),
            "optimal_rho": value,
        });
        if as_json {
            println!("{out}");
        } else {
            println!("optimal homogeneous rho at {} = {value:.6}", sys.name(gamma));
        }
        return Ok(ExitCode::SUCCESS);
    }
    let rho = if let Some(h) = homogeneous {
        FugacityVector::homogeneous(&sys, h)
    } else if let Some(path) = rho_file {
        let text = std::fs::read_to_string(&path)
            .with_context(|| format!("reading {}", path.display()))?;
        let map: std::collections::BTreeMap<String, f64> =
            serde_json::from_str(&text).context("parsing rho JSON")?;
        let entries: Vec<(String, f64)> = map.into_iter().collect();
        FugacityVector::from_names(&sys, &entries)?
    } else {
        bail!("need --homogeneous or --rho (or --optimal)");
    };
    let report = scub_holds(&kind, &sys, &rho)?;
    let new_kind = matches!(
        kind,
        LeopKind::Reduced | LeopKind::Returning | LeopKind::MixingOptimal | LeopKind::Mixing(_) | LeopKind::Synthetic(_)
    );
    let holds = report.converged && (!new_kind || report.strict);
    let witness: Option<serde_json::Map<String, serde_json::Value>> =
        report.witness_mu.as_ref().map(|w| {
            (0..sys.len())
                .map(|i| (sys.name(i).to_string(), json!(w.get(i))))
                .collect()
        });
    let certified = if certify {
        Some(admissible_sweep(&sys, &rho.scaled(1.0 - 1e-6))?)
    } else {
        None
    };
    let out = json!({
        "kind": format!("{kind:?}"),
        "converged": report.converged,
        "strict": report.strict,
        "holds": holds,
        "iterations": report.iterations,
        "witness_mu": witness,
        "certified_disc": certified,
    });
    if as_json {
        println!("{out}");
    } else {
        println!(
            "scub {} after {} iterations{}",
            if holds { "holds" } else { "fails" },
            report.iterations,
            match certified {
                Some(true) => "; disc sweep positive",
                Some(false) => "; disc sweep found a nonpositive volume",
                None => "",
            }
        );
        if let Some(w) = &witness {
            let compact: Vec<String> =
                w.iter().map(|(k, v)| format!("{k}={v}")).collect();
            println!("witness mu: {}", compact.join(" "));
        }
    }
    let ok = holds && certified != Some(false);
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn cmd_tree(degree: usize, rho: Option<f64>, star: bool, as_json: bool) -> Result<ExitCode> {
    let rs = rho_star(degree)?;
    let rho = if star {
        rs
    } else {
        rho.ok_or_else(|| anyhow!("need --rho or --star"))?
    };
    let a = alpha(degree, rho)?;
    let residual = fixpoint_residual(degree, rho, a);
    // Derivative blow-up diagnostic just inside the critical point.
    let probe = rs - 2.5e-8;
    let diverging = derivative_fd(degree, probe, 1e-9)?;
    let out = json!({
        "degree": degree,
        "rho": rho,
        "rho_star": rs,
        "alpha": a,
        "fixpoint_residual": residual,
        "derivative_near_star": diverging,
    });
    if as_json {
        println!("{out}");
    } else {
        println!("rho* = {rs}");
        println!("alpha({rho}) = {a}   (fixpoint residual {residual:.2e})");
        println!("d(alpha)/d(rho) near rho*: {diverging:.3e}");
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_lattice(
    kind: LatticeArg,
    rows: usize,
    cols: usize,
    size: usize,
    degree: usize,
) -> Result<ExitCode> {
    use pscub_core::lattice;
    let sys = match kind {
        LatticeArg::Hexagonal => lattice::hexagonal_patch(rows, cols)?,
        LatticeArg::HexLineGraph => {
            let base = lattice::hexagonal_patch(rows, cols)?;
            lattice::line_graph(&base)?
        }
        LatticeArg::Cycle => lattice::cycle(size)?,
        LatticeArg::RegularTree => lattice::regular_tree_patch(degree, size)?,
    };
    let mut pairs = Vec::new();
    for a in 0..sys.len() {
        for &b in sys.neighbours(a) {
            if a < b {
                pairs.push((sys.name(a).to_string(), sys.name(b).to_string()));
            }
        }
    }
    let spec = SystemSpec {
        polymers: sys.names().to_vec(),
        incompatible: pairs,
    };
    println!("{}", serde_json::to_string_pretty(&spec)?);
    Ok(ExitCode::SUCCESS)
}
