//! Command-line surface: parse JSON specs or presets, run computations and
//! experiments, emit deterministic JSON/CSV reports.
//!
//! Every report carries `"schema": 1`, echoes the exact inputs and the
//! tolerance values used, and is byte-identical across runs with the same
//! (config, inputs, seed). Entropic *value* fields honor `--unit`;
//! certificate and diagnostic blocks always stay in nats. Exit codes:
//! 0 success, 2 validation failure, 3 non-converged optimization.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::capacity::{
    capacity_gap, chi_capacity, ci_via_chi, coherent_information, ea_capacity, CapacityResult,
    ConstraintSpec, OptimalityCertificate, SolverOptions,
};
use crate::config::{Config, Tolerances};
use crate::ensembles::{
    chi_quantity_with, dilation_identity, disturbance_upper_bound, entropic_disturbance_with,
};
use crate::error::{Error, Result};
use crate::gaussian::GaussianVerdict;
use crate::io::{
    load_channel, load_ensemble, load_gaussian, load_hamiltonian, to_report_json, write_output,
    EnsembleFile, matrix_to_json,
};
use crate::numerics::entropy::von_neumann_entropy_with;
use crate::numerics::gibbs::gibbs_state;
use crate::sampling::{random_channel, random_ensemble, rng_for};
use crate::semicontinuity::{
    appendix_identity_sweep, default_truncation_anchor, truncation_sweep,
};

/// Unit for entropic values in reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Unit {
    Nats,
    Bits,
}

impl Unit {
    fn label(self) -> &'static str {
        match self {
            Unit::Nats => "nats",
            Unit::Bits => "bits",
        }
    }

    /// Convert a value measured in nats into this unit.
    fn convert_from_nats(self, x: f64) -> f64 {
        match self {
            Unit::Nats => x,
            Unit::Bits => x / std::f64::consts::LN_2,
        }
    }
}

/// Report serialization format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Flags shared by every subcommand.
#[derive(Debug, Args)]
struct OutputOpts {
    /// Unit for entropic values.
    #[arg(long, value_enum, default_value_t = Unit::Nats)]
    unit: Unit,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Tolerance override `key=value`; repeatable.
    #[arg(long = "tol", value_name = "KEY=VAL")]
    tol: Vec<String>,
}

/// Flags for randomized solvers.
#[derive(Debug, Args)]
struct SolverOpts {
    /// Base RNG seed (default 0, or the config file's value).
    #[arg(long)]
    seed: Option<u64>,
    /// Restart count for nonconvex solvers.
    #[arg(long)]
    restarts: Option<usize>,
}

#[derive(Debug, Parser)]
#[command(
    name = "qchi",
    version,
    about = "Entropic characteristics of quantum channels: χ-quantities, \
             entropic disturbance, constrained capacities, and \
             semicontinuity experiments"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Von Neumann entropies of an ensemble, optionally after a channel.
    Entropy {
        /// Ensemble file or preset.
        #[arg(long)]
        ensemble: String,
        /// Optional channel applied to every member first.
        #[arg(long)]
        channel: Option<String>,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// χ-quantity of an ensemble, optionally pushed through a channel.
    Chi {
        #[arg(long)]
        ensemble: String,
        #[arg(long)]
        channel: Option<String>,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Entropic disturbance Δ = χ(μ) − χ(Φ(μ)) of an ensemble under a channel.
    Disturbance {
        #[arg(long)]
        channel: String,
        #[arg(long)]
        ensemble: String,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Evaluate all terms of the exact dilation identity and its residual.
    VerifyIdentity {
        #[arg(long)]
        channel: String,
        #[arg(long)]
        ensemble: String,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Energy-constrained χ-capacity with an optimality certificate.
    ChiCapacity {
        #[arg(long)]
        channel: String,
        /// Hamiltonian file or preset (`diag:0,1`, `number:4`).
        #[arg(long)]
        hamiltonian: String,
        /// Mean-energy budget.
        #[arg(long)]
        energy: f64,
        #[command(flatten)]
        solver: SolverOpts,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Energy-constrained entanglement-assisted classical capacity.
    EaCapacity {
        #[arg(long)]
        channel: String,
        #[arg(long)]
        hamiltonian: String,
        #[arg(long)]
        energy: f64,
        #[command(flatten)]
        solver: SolverOpts,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Both constrained capacities, their gap, and structural gap triggers.
    Gap {
        #[arg(long)]
        channel: String,
        #[arg(long)]
        hamiltonian: String,
        #[arg(long)]
        energy: f64,
        /// Optional degrading map (file or preset) certifying degradability.
        #[arg(long)]
        degrading: Option<String>,
        #[command(flatten)]
        solver: SolverOpts,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Coherent information of the ensemble's average state, two routes.
    CoherentInfo {
        #[arg(long)]
        channel: String,
        #[arg(long)]
        ensemble: String,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// χ under increasingly fine truncations of the E factor of a bipartite
    /// ensemble on B⊗E.
    SweepTruncation {
        #[arg(long)]
        ensemble: String,
        /// Dimension of the B factor.
        #[arg(long)]
        dim_b: usize,
        /// Dimension of the E factor.
        #[arg(long)]
        dim_e: usize,
        /// Comma-separated truncation ranks (default `1,2,…,dim_e`).
        #[arg(long)]
        ranks: Option<String>,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Truncated dilation identity over a grid of output/environment ranks.
    SweepAppendix {
        #[arg(long)]
        channel: String,
        #[arg(long)]
        ensemble: String,
        /// Comma-separated output-side ranks (default full set).
        #[arg(long)]
        ranks_b: Option<String>,
        /// Comma-separated environment-side ranks (default full set).
        #[arg(long)]
        ranks_e: Option<String>,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Constrained Gibbs state: multiplier, energy, entropy.
    Gibbs {
        #[arg(long)]
        hamiltonian: String,
        #[arg(long)]
        energy: f64,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Validate a Gaussian channel spec and classify its gap triggers.
    GaussianClassify {
        /// Gaussian spec JSON file.
        #[arg(long)]
        spec: PathBuf,
        /// Assert degradability (passed through unverified).
        #[arg(long)]
        degradable: bool,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Run the built-in cross-module invariant suite.
    Selftest {
        #[command(flatten)]
        solver: SolverOpts,
        #[command(flatten)]
        output: OutputOpts,
    },
}

/// Entry point used by the binary: parse, run, map errors to exit codes.
pub fn run() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}

/// 3 for non-converged optimizations, 2 for everything else.
fn exit_code(err: &Error) -> u8 {
    match err {
        Error::NoConvergence { .. } => 3,
        _ => 2,
    }
}

// ---------------------------------------------------------------------------
// Report envelope and output.
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct Report<T: Serialize> {
    schema: u32,
    command: &'static str,
    unit: &'static str,
    seed: u64,
    tolerances: Tolerances,
    inputs: Value,
    result: T,
}

fn emit<T: Serialize>(
    command: &'static str,
    inputs: Value,
    result: T,
    cfg: &Config,
    output: &OutputOpts,
) -> Result<()> {
    let report = Report {
        schema: crate::io::SCHEMA_VERSION,
        command,
        unit: output.unit.label(),
        seed: cfg.seed,
        tolerances: cfg.tolerances.clone(),
        inputs,
        result,
    };
    let text = match output.format {
        Format::Json => to_report_json(&report)?,
        Format::Csv => to_csv(&serde_json::to_value(&report)?),
    };
    write_output(&text, output.out.as_deref())
}

fn csv_escape(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn csv_scalar(v: &Value) -> String {
    match v {
        Value::String(s) => csv_escape(s),
        other => other.to_string(),
    }
}

/// Flatten a report into `key,value` lines; arrays of objects become
/// appended tables with a header row. Within objects, keys are emitted in
/// the (deterministic) order of the JSON value.
fn to_csv(value: &Value) -> String {
    let mut scalars: Vec<(String, String)> = Vec::new();
    let mut tables: Vec<(String, Vec<Value>)> = Vec::new();
    flatten("", value, &mut scalars, &mut tables);
    let mut out = String::from("key,value\n");
    for (k, v) in &scalars {
        out.push_str(&format!("{},{}\n", csv_escape(k), v));
    }
    for (name, rows) in &tables {
        out.push('\n');
        out.push_str(&format!("# table: {name}\n"));
        if let Some(Value::Object(first)) = rows.first() {
            let headers: Vec<&String> = first.keys().collect();
            out.push_str(
                &headers.iter().map(|h| csv_escape(h)).collect::<Vec<_>>().join(","),
            );
            out.push('\n');
            for row in rows {
                if let Value::Object(map) = row {
                    let line: Vec<String> = headers
                        .iter()
                        .map(|h| map.get(*h).map(csv_scalar).unwrap_or_default())
                        .collect();
                    out.push_str(&line.join(","));
                    out.push('\n');
                }
            }
        }
    }
    out
}

fn flatten(
    prefix: &str,
    value: &Value,
    scalars: &mut Vec<(String, String)>,
    tables: &mut Vec<(String, Vec<Value>)>,
) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, v, scalars, tables);
            }
        }
        Value::Array(items) => {
            if items.iter().all(|i| i.is_object()) && !items.is_empty() {
                tables.push((prefix.to_string(), items.clone()));
            } else {
                let joined = items.iter().map(csv_scalar).collect::<Vec<_>>().join(";");
                scalars.push((prefix.to_string(), csv_escape(&joined)));
            }
        }
        other => scalars.push((prefix.to_string(), csv_scalar(other))),
    }
}

// ---------------------------------------------------------------------------
// Shared plumbing.
// ---------------------------------------------------------------------------

/// Resolve the runtime config: defaults, then the TOML file named by
/// `QCHI_CONFIG`, then command-line overrides.
fn resolve_config(output: &OutputOpts, solver: Option<&SolverOpts>) -> Result<Config> {
    let mut cfg = Config::from_env()?;
    for spec in &output.tol {
        let (key, value) = Tolerances::parse_override(spec)?;
        cfg.tolerances.set(&key, value)?;
    }
    if let Some(s) = solver {
        if let Some(seed) = s.seed {
            cfg.seed = seed;
        }
        if let Some(restarts) = s.restarts {
            cfg.restarts = restarts;
        }
    }
    Ok(cfg)
}

fn parse_ranks(arg: &Option<String>, default_max: usize) -> Result<Vec<usize>> {
    match arg {
        None => Ok((1..=default_max).collect()),
        Some(text) => text
            .split(',')
            .map(|s| {
                s.trim().parse::<usize>().map_err(|_| Error::BadInput {
                    detail: format!("rank list entry `{s}` is not a positive integer"),
                })
            })
            .collect(),
    }
}

/// Capacity outcome as a report payload: entropic values in the requested
/// unit, certificate in nats, optimizer ensemble in full.
#[derive(Serialize)]
struct CapacityPayload {
    value: f64,
    lambda: f64,
    achieved_energy: f64,
    iterations: usize,
    converged: bool,
    certificate: Option<OptimalityCertificate>,
    optimizer_average_diagonal: Vec<f64>,
    optimizer: Option<EnsembleFile>,
}

impl CapacityPayload {
    fn new(result: &CapacityResult, c: &ConstraintSpec, unit: Unit) -> Result<Self> {
        let avg = result.optimizer.average_state();
        let achieved_energy = c.residual(&avg)? + c.energy();
        let diag = (0..avg.dim()).map(|i| avg.matrix()[(i, i)].re).collect();
        Ok(Self {
            value: unit.convert_from_nats(result.value),
            lambda: result.lambda,
            achieved_energy,
            iterations: result.iterations,
            converged: result.converged,
            certificate: result.certificate.clone(),
            optimizer_average_diagonal: diag,
            optimizer: result.optimizer.as_ensemble().map(EnsembleFile::from_ensemble),
        })
    }
}

/// Error the whole run when an optimization did not converge, so the exit
/// code distinguishes it from validation failures.
fn require_converged(result: &CapacityResult, what: &str) -> Result<()> {
    if result.converged {
        Ok(())
    } else {
        Err(Error::NoConvergence {
            detail: format!("{what} did not converge; rerun with more restarts or iterations"),
        })
    }
}

// ---------------------------------------------------------------------------
// Command handlers.
// ---------------------------------------------------------------------------

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Entropy { ensemble, channel, output } => {
            let cfg = resolve_config(&output, None)?;
            let mut mu = load_ensemble(&ensemble)?;
            if let Some(ch) = &channel {
                mu = mu.map(&load_channel(ch)?)?;
            }
            let tol = &cfg.tolerances;
            let u = output.unit;
            let member_entropies: Vec<f64> = mu
                .states()
                .iter()
                .map(|s| u.convert_from_nats(von_neumann_entropy_with(s, tol)))
                .collect();
            let payload = json!({
                "average_entropy": u.convert_from_nats(von_neumann_entropy_with(&mu.average_state(), tol)),
                "member_entropies": member_entropies,
                "weights": mu.weights(),
            });
            emit(
                "entropy",
                json!({ "ensemble": ensemble, "channel": channel }),
                payload,
                &cfg,
                &output,
            )
        }
        Command::Chi { ensemble, channel, output } => {
            let cfg = resolve_config(&output, None)?;
            let mut mu = load_ensemble(&ensemble)?;
            if let Some(ch) = &channel {
                mu = mu.map(&load_channel(ch)?)?;
            }
            let tol = &cfg.tolerances;
            let u = output.unit;
            let avg_entropy = von_neumann_entropy_with(&mu.average_state(), tol);
            let chi = chi_quantity_with(&mu, tol);
            let payload = json!({
                "chi": u.convert_from_nats(chi),
                "average_entropy": u.convert_from_nats(avg_entropy),
                "mean_member_entropy": u.convert_from_nats(avg_entropy - chi),
            });
            emit(
                "chi",
                json!({ "ensemble": ensemble, "channel": channel }),
                payload,
                &cfg,
                &output,
            )
        }
        Command::Disturbance { channel, ensemble, output } => {
            let cfg = resolve_config(&output, None)?;
            let phi = load_channel(&channel)?;
            let mu = load_ensemble(&ensemble)?;
            let tol = &cfg.tolerances;
            let u = output.unit;
            let chi_input = chi_quantity_with(&mu, tol);
            let chi_output = chi_quantity_with(&mu.map(&phi)?, tol);
            let delta = entropic_disturbance_with(&phi, &mu, tol)?;
            let payload = json!({
                "disturbance": u.convert_from_nats(delta),
                "chi_input": u.convert_from_nats(chi_input),
                "chi_output": u.convert_from_nats(chi_output),
                "upper_bound": u.convert_from_nats(disturbance_upper_bound(&phi, tol)),
            });
            emit(
                "disturbance",
                json!({ "channel": channel, "ensemble": ensemble }),
                payload,
                &cfg,
                &output,
            )
        }
        Command::VerifyIdentity { channel, ensemble, output } => {
            let cfg = resolve_config(&output, None)?;
            let phi = load_channel(&channel)?;
            let mu = load_ensemble(&ensemble)?;
            let report = dilation_identity(&phi, &mu, &cfg.tolerances)?;
            let u = output.unit;
            let payload = json!({
                "chi_input": u.convert_from_nats(report.chi_input),
                "mi_average": u.convert_from_nats(report.mi_average),
                "chi_output": u.convert_from_nats(report.chi_output),
                "chi_environment": u.convert_from_nats(report.chi_environment),
                "mean_mi_members": u.convert_from_nats(report.mean_mi_members),
                "lhs": u.convert_from_nats(report.lhs()),
                "rhs": u.convert_from_nats(report.rhs()),
                "residual": u.convert_from_nats(report.residual),
                "holds": report.residual <= 1e-8,
            });
            emit(
                "verify-identity",
                json!({ "channel": channel, "ensemble": ensemble }),
                payload,
                &cfg,
                &output,
            )
        }
        Command::ChiCapacity { channel, hamiltonian, energy, solver, output } => {
            let cfg = resolve_config(&output, Some(&solver))?;
            let phi = load_channel(&channel)?;
            let c = ConstraintSpec::new(load_hamiltonian(&hamiltonian)?, energy)?;
            let result = chi_capacity(&phi, &c, &SolverOptions::from(&cfg))?;
            let payload = CapacityPayload::new(&result, &c, output.unit)?;
            emit(
                "chi-capacity",
                json!({ "channel": channel, "hamiltonian": hamiltonian, "energy": energy }),
                payload,
                &cfg,
                &output,
            )?;
            require_converged(&result, "χ-capacity")
        }
        Command::EaCapacity { channel, hamiltonian, energy, solver, output } => {
            let cfg = resolve_config(&output, Some(&solver))?;
            let phi = load_channel(&channel)?;
            let c = ConstraintSpec::new(load_hamiltonian(&hamiltonian)?, energy)?;
            let result = ea_capacity(&phi, &c, &SolverOptions::from(&cfg))?;
            let payload = CapacityPayload::new(&result, &c, output.unit)?;
            emit(
                "ea-capacity",
                json!({ "channel": channel, "hamiltonian": hamiltonian, "energy": energy }),
                payload,
                &cfg,
                &output,
            )?;
            require_converged(&result, "entanglement-assisted capacity")
        }
        Command::Gap { channel, hamiltonian, energy, degrading, solver, output } => {
            let cfg = resolve_config(&output, Some(&solver))?;
            let phi = load_channel(&channel)?;
            let c = ConstraintSpec::new(load_hamiltonian(&hamiltonian)?, energy)?;
            let theta = degrading.as_ref().map(|d| load_channel(d)).transpose()?;
            let report = capacity_gap(&phi, &c, theta.as_ref(), &SolverOptions::from(&cfg))?;
            let u = output.unit;
            let payload = json!({
                "chi_capacity": CapacityPayload::new(&report.chi, &c, u)?,
                "ea_capacity": CapacityPayload::new(&report.ea, &c, u)?,
                "gap": u.convert_from_nats(report.gap),
                "cq_canonical": { "is_cq": report.cq_canonical.0, "residual": report.cq_canonical.1 },
                "cq_hamiltonian_basis": {
                    "is_cq": report.cq_hamiltonian_basis.0,
                    "residual": report.cq_hamiltonian_basis.1
                },
                "degradability": report.degradability,
                "triggers": report.triggers,
                "triggers_text": report.triggers.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
                "verdict": report.verdict,
                "verdict_text": report.verdict.to_string(),
            });
            emit(
                "gap",
                json!({
                    "channel": channel, "hamiltonian": hamiltonian,
                    "energy": energy, "degrading": degrading
                }),
                payload,
                &cfg,
                &output,
            )?;
            require_converged(&report.chi, "χ-capacity")?;
            require_converged(&report.ea, "entanglement-assisted capacity")
        }
        Command::CoherentInfo { channel, ensemble, output } => {
            let cfg = resolve_config(&output, None)?;
            let phi = load_channel(&channel)?;
            let mu = load_ensemble(&ensemble)?;
            let rho = mu.average_state();
            let tol = &cfg.tolerances;
            let direct = coherent_information(&phi, &rho, tol)?;
            let via_chi = ci_via_chi(&phi, &rho, tol)?;
            let u = output.unit;
            let payload = json!({
                "coherent_information": u.convert_from_nats(direct),
                "via_chi_decomposition": u.convert_from_nats(via_chi),
                "route_difference": u.convert_from_nats((direct - via_chi).abs()),
                "routes_agree": (direct - via_chi).abs() <= 1e-8,
            });
            emit(
                "coherent-info",
                json!({ "channel": channel, "ensemble": ensemble }),
                payload,
                &cfg,
                &output,
            )
        }
        Command::SweepTruncation { ensemble, dim_b, dim_e, ranks, output } => {
            let cfg = resolve_config(&output, None)?;
            let mu = load_ensemble(&ensemble)?;
            let rank_list = parse_ranks(&ranks, dim_e)?;
            let anchor = default_truncation_anchor(&mu, dim_b, dim_e)?;
            let report =
                truncation_sweep(&mu, dim_b, dim_e, &rank_list, &anchor, &cfg.tolerances)?;
            let u = output.unit;
            let rows: Vec<Value> = report
                .rows
                .iter()
                .map(|r| {
                    json!({
                        "rank": r.rank,
                        "subspace_dim": r.subspace_dim,
                        "chi_truncated": u.convert_from_nats(r.chi_truncated),
                        "gap_to_limit": u.convert_from_nats(r.gap_to_limit),
                    })
                })
                .collect();
            let payload = json!({
                "chi_limit": u.convert_from_nats(report.chi_limit),
                "monotone": report.monotone,
                "converged": report.converged,
                "rows": rows,
            });
            emit(
                "sweep-truncation",
                json!({
                    "ensemble": ensemble, "dim_b": dim_b, "dim_e": dim_e,
                    "ranks": rank_list
                }),
                payload,
                &cfg,
                &output,
            )
        }
        Command::SweepAppendix { channel, ensemble, ranks_b, ranks_e, output } => {
            let cfg = resolve_config(&output, None)?;
            let phi = load_channel(&channel)?;
            let mu = load_ensemble(&ensemble)?;
            let tol = &cfg.tolerances;
            let minimal = phi.minimal_kraus(tol)?;
            let d_b = minimal.dim_out();
            let d_e = minimal.kraus().len();
            let list_b = parse_ranks(&ranks_b, d_b)?;
            let list_e = parse_ranks(&ranks_e, d_e)?;
            let report = appendix_identity_sweep(&phi, &mu, &list_b, &list_e, tol)?;
            let u = output.unit;
            let rows: Vec<Value> = report
                .rows
                .iter()
                .map(|r| {
                    json!({
                        "rank_b": r.rank_b,
                        "rank_e": r.rank_e,
                        "chi_joint": u.convert_from_nats(r.chi_joint),
                        "mi_average": u.convert_from_nats(r.mi_average),
                        "chi_output": u.convert_from_nats(r.chi_output),
                        "chi_environment": u.convert_from_nats(r.chi_environment),
                        "mean_mi_members": u.convert_from_nats(r.mean_mi_members),
                        "residual": u.convert_from_nats(r.residual),
                    })
                })
                .collect();
            let payload = json!({
                "max_residual": u.convert_from_nats(report.max_residual),
                "identity_holds": report.identity_holds,
                "mi_monotone": report.mi_monotone,
                "full_rank_matches_identity": report.full_rank_matches_identity,
                "rows": rows,
            });
            emit(
                "sweep-appendix",
                json!({
                    "channel": channel, "ensemble": ensemble,
                    "ranks_b": list_b, "ranks_e": list_e
                }),
                payload,
                &cfg,
                &output,
            )
        }
        Command::Gibbs { hamiltonian, energy, output } => {
            let cfg = resolve_config(&output, None)?;
            let h = load_hamiltonian(&hamiltonian)?;
            let result = gibbs_state(&h, energy)?;
            let u = output.unit;
            let payload = json!({
                "lambda": result.lambda,
                "energy": result.energy,
                "entropy": u.convert_from_nats(result.entropy),
                "state": matrix_to_json(result.state.matrix()),
            });
            emit(
                "gibbs",
                json!({ "hamiltonian": hamiltonian, "energy": energy }),
                payload,
                &cfg,
                &output,
            )
        }
        Command::GaussianClassify { spec, degradable, output } => {
            let cfg = resolve_config(&output, None)?;
            let g = load_gaussian(&spec)?;
            let report = g.classify_gap(
                degradable,
                cfg.tolerances.rank,
                cfg.tolerances.gauss_psd,
            )?;
            let payload = json!({
                "report": report,
                "verdict_text": match report.verdict {
                    GaussianVerdict::GapGuaranteed => "gap>0 guaranteed",
                    GaussianVerdict::NoConclusion => "no conclusion",
                },
            });
            emit(
                "gaussian-classify",
                json!({ "spec": spec.display().to_string(), "degradable": degradable }),
                payload,
                &cfg,
                &output,
            )
        }
        Command::Selftest { solver, output } => {
            let cfg = resolve_config(&output, Some(&solver))?;
            let (checks, all_passed) = selftest(&cfg)?;
            let payload = json!({ "checks": checks, "all_passed": all_passed });
            emit("selftest", json!({}), payload, &cfg, &output)?;
            if all_passed {
                Ok(())
            } else {
                Err(Error::BadInput { detail: "selftest found failing invariants".into() })
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Selftest.
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct CheckRow {
    name: &'static str,
    passed: bool,
    detail: String,
}

fn check(rows: &mut Vec<CheckRow>, name: &'static str, passed: bool, detail: String) {
    rows.push(CheckRow { name, passed, detail });
}

/// Fast cross-module invariant suite: dilation identity residuals and
/// disturbance bounds on a random corpus, the worked qubit example, the
/// Gibbs solver's closed forms, Gaussian classifier fixtures, and
/// agreement of the two coherent-information routes.
fn selftest(cfg: &Config) -> Result<(Vec<CheckRow>, bool)> {
    use crate::io::{channel_preset, ensemble_preset};

    let tol = &cfg.tolerances;
    let mut rows = Vec::new();

    // Dilation identity and disturbance bounds on a seeded corpus.
    let mut rng = rng_for(cfg.seed ^ 0x5E1F);
    let mut max_residual = 0.0_f64;
    let mut bounds_ok = true;
    let mut worst_bound = 0.0_f64;
    for trial in 0..24usize {
        let d_a = 2 + trial % 3;
        let d_b = 2 + (trial / 3) % 3;
        // A dilation needs d_b * d_e >= d_a.
        let d_e = (1 + trial % 4).max(d_a.div_ceil(d_b));
        let phi = random_channel(&mut rng, d_a, d_b, d_e)?;
        let members = 2 + trial % 4;
        let mu = random_ensemble(&mut rng, d_a, members)?;
        let report = dilation_identity(&phi, &mu, tol)?;
        max_residual = max_residual.max(report.residual);
        let delta = report.disturbance();
        let bound = disturbance_upper_bound(&phi, tol);
        if delta < -1e-9 || delta > bound + 1e-9 {
            bounds_ok = false;
        }
        worst_bound = worst_bound.max(delta - bound);
    }
    check(
        &mut rows,
        "dilation identity residual <= 1e-8 on random corpus",
        max_residual <= 1e-8,
        format!("max residual {max_residual:.3e} over 24 pairs"),
    );
    check(
        &mut rows,
        "disturbance within [0, min(ln d_A, 2 ln d_E)] on random corpus",
        bounds_ok,
        format!("worst bound excess {worst_bound:.3e}"),
    );

    // Worked qubit example.
    let phi = channel_preset("dephasing:2")?;
    let mu = ensemble_preset("zero-plus")?;
    let delta = entropic_disturbance_with(&phi, &mu, tol)?;
    check(
        &mut rows,
        "dephasing disturbance of {|0>,|+>} is 0.2007340 within 1e-6",
        (delta - 0.200_733_976_360_851_83).abs() <= 1e-6,
        format!("value {delta:.9}"),
    );

    // Gibbs closed forms.
    let h = crate::numerics::states::Hamiltonian::diagonal(&[0.0, 1.0])?;
    let g = gibbs_state(&h, 0.2)?;
    let ln4 = 4.0_f64.ln();
    check(
        &mut rows,
        "gibbs multiplier for diag(0,1) at budget 0.2 is ln 4",
        (g.lambda - ln4).abs() <= 1e-8,
        format!("lambda {:.12}", g.lambda),
    );
    let vacuous = gibbs_state(&h, 0.5)?;
    check(
        &mut rows,
        "gibbs multiplier vanishes for budgets at or above the mean",
        vacuous.lambda == 0.0,
        format!("lambda {}", vacuous.lambda),
    );

    // Gaussian classifier fixtures.
    {
        use crate::gaussian::{GaussianChannelSpec, GaussianTrigger, RMatrix};
        let att = GaussianChannelSpec::new(
            1,
            1,
            RMatrix::identity(2, 2) * 0.5_f64.sqrt(),
            RMatrix::identity(2, 2) * 0.25,
            Vec::new(),
        )?;
        let rep = att.classify_gap(false, tol.rank, tol.gauss_psd)?;
        check(
            &mut rows,
            "gaussian attenuator validates and guarantees a gap",
            rep.validity.valid
                && rep.validity.min_eigenvalue_minus >= -1e-10
                && rep.verdict == GaussianVerdict::GapGuaranteed,
            format!("min eig {:.3e}", rep.validity.min_eigenvalue_minus),
        );
        let zero = GaussianChannelSpec::new(
            1,
            1,
            RMatrix::zeros(2, 2),
            RMatrix::identity(2, 2) * 0.5,
            Vec::new(),
        )?;
        let zrep = zero.classify_gap(false, tol.rank, tol.gauss_psd)?;
        check(
            &mut rows,
            "gaussian zero-K spec triggers the discrete c-q class",
            zrep.triggers.contains(&GaussianTrigger::ZeroKDiscreteCq)
                && zrep.verdict == GaussianVerdict::NoConclusion,
            format!("triggers {:?}", zrep.triggers),
        );
    }

    // Coherent-information route agreement.
    let mut rng = rng_for(cfg.seed ^ 0xC01F);
    let mut worst_route = 0.0_f64;
    for _ in 0..10 {
        let phi = random_channel(&mut rng, 3, 2, 2)?;
        let rho = crate::sampling::random_density(&mut rng, 3, 3);
        let a = coherent_information(&phi, &rho, tol)?;
        let b = ci_via_chi(&phi, &rho, tol)?;
        worst_route = worst_route.max((a - b).abs());
    }
    check(
        &mut rows,
        "coherent information routes agree within 1e-8",
        worst_route <= 1e-8,
        format!("max discrepancy {worst_route:.3e}"),
    );

    // Truncation domination on a bipartite ensemble.
    {
        let mut rng = rng_for(cfg.seed ^ 0x7A11);
        let mu = random_ensemble(&mut rng, 6, 3)?;
        let anchor = default_truncation_anchor(&mu, 2, 3)?;
        let sweep = truncation_sweep(&mu, 2, 3, &[1, 2, 3], &anchor, tol)?;
        check(
            &mut rows,
            "truncated chi dominated by full chi and converged at full rank",
            sweep.converged,
            format!("chi limit {:.9}, final gap {:.3e}",
                sweep.chi_limit,
                sweep.rows.last().map(|r| r.gap_to_limit).unwrap_or(f64::NAN)),
        );
    }

    // One small constrained capacity with certificate.
    {
        let phi = channel_preset("dephasing:2")?;
        let h = crate::numerics::states::Hamiltonian::diagonal(&[0.0, 1.0])?;
        let c = ConstraintSpec::new(h, 0.2)?;
        let mut opts = SolverOptions::from(cfg);
        opts.restarts = opts.restarts.min(6);
        let result = chi_capacity(&phi, &c, &opts)?;
        let expected = 0.2_f64.mul_add(-(0.2_f64.ln()), -(0.8 * 0.8_f64.ln()));
        let cert_ok = result
            .certificate
            .as_ref()
            .map(|cert| cert.passed)
            .unwrap_or(false);
        check(
            &mut rows,
            "dephasing chi-capacity at budget 0.2 equals h(0.2) with certificate",
            (result.value - expected).abs() <= 1e-4 && cert_ok && result.converged,
            format!("value {:.9} vs h(0.2) {:.9}", result.value, expected),
        );
    }

    for row in &rows {
        let status = if row.passed { "ok" } else { "FAILED" };
        eprintln!("[selftest] {:<68} {} ({})", row.name, status, row.detail);
    }
    let all = rows.iter().all(|r| r.passed);
    Ok((rows, all))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_parses_every_subcommand() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
        let cases: Vec<Vec<&str>> = vec![
            vec!["qchi", "entropy", "--ensemble", "zero-plus"],
            vec!["qchi", "chi", "--ensemble", "zero-plus", "--channel", "dephasing:2"],
            vec!["qchi", "disturbance", "--channel", "dephasing:2", "--ensemble", "zero-plus"],
            vec!["qchi", "verify-identity", "--channel", "identity:2", "--ensemble", "zero-plus"],
            vec![
                "qchi", "chi-capacity", "--channel", "dephasing:2", "--hamiltonian", "diag:0,1",
                "--energy", "0.2", "--seed", "1", "--restarts", "4",
            ],
            vec![
                "qchi", "ea-capacity", "--channel", "identity:2", "--hamiltonian", "diag:0,1",
                "--energy", "0.2",
            ],
            vec![
                "qchi", "gap", "--channel", "dephasing:2", "--hamiltonian", "diag:0,1",
                "--energy", "0.2",
            ],
            vec!["qchi", "coherent-info", "--channel", "identity:2", "--ensemble", "zero-plus"],
            vec![
                "qchi", "sweep-truncation", "--ensemble", "random:6:3:5", "--dim-b", "2",
                "--dim-e", "3", "--ranks", "1,2,3",
            ],
            vec![
                "qchi", "sweep-appendix", "--channel", "random:3:3:2:7", "--ensemble",
                "random:3:3:9",
            ],
            vec!["qchi", "gibbs", "--hamiltonian", "diag:0,1", "--energy", "0.2"],
            vec![
                "qchi", "gaussian-classify", "--spec", "fixtures/gaussian_attenuator.json",
                "--degradable",
            ],
            vec!["qchi", "selftest", "--seed", "0"],
        ];
        for case in cases {
            Cli::try_parse_from(&case).unwrap_or_else(|e| panic!("{case:?}: {e}"));
        }
    }

    #[test]
    fn unit_conversion_and_exit_codes() {
        assert_eq!(Unit::Nats.convert_from_nats(1.0), 1.0);
        assert!((Unit::Bits.convert_from_nats(std::f64::consts::LN_2) - 1.0).abs() < 1e-15);
        assert_eq!(exit_code(&Error::NoConvergence { detail: "x".into() }), 3);
        assert_eq!(exit_code(&Error::BadInput { detail: "x".into() }), 2);
    }

    #[test]
    fn csv_flattening_emits_scalars_and_tables() {
        let value = json!({
            "a": 1.5,
            "nested": { "b": "text, with comma" },
            "rows": [ { "x": 1, "y": 2.0 }, { "x": 3, "y": 4.0 } ],
            "list": [1, 2, 3],
        });
        let csv = to_csv(&value);
        assert!(csv.starts_with("key,value\n"));
        assert!(csv.contains("a,1.5\n"));
        assert!(csv.contains("nested.b,\"text, with comma\"\n"));
        assert!(csv.contains("# table: rows\n"));
        assert!(csv.contains("x,y\n"));
        assert!(csv.contains("1,2.0\n"));
        assert!(csv.contains("list,1;2;3\n"));
    }

    #[test]
    fn rank_lists_parse_with_defaults() {
        assert_eq!(parse_ranks(&None, 3).unwrap(), vec![1, 2, 3]);
        assert_eq!(parse_ranks(&Some("1, 2,4".into()), 9).unwrap(), vec![1, 2, 4]);
        assert!(parse_ranks(&Some("1,x".into()), 9).is_err());
    }
}
