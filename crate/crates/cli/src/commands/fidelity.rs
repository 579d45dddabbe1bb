use std::fmt::Write as _;

use macqc_core::decoherence::{gate_time, DecoherenceParams, FidelityRow, FAULT_TOLERANCE_THRESHOLD};
use macqc_core::physical::derive_couplings;
use serde::Serialize;

use crate::config::Sweep;
use crate::error::CliError;
use crate::output::{num, parse_list, verdict, Context};

pub const CSV_HEADER: &str = "gamma_atomic,gamma_cavity,delta,t,fidelity,margin,status";

/// |margin| at or below this counts as on the frontier.
pub const BOUNDARY_TOL: f64 = 1e-12 * FAULT_TOLERANCE_THRESHOLD;

const DEFAULT_GAMMA_ATOMIC: [f64; 4] = [0.0, 1e3, 5e3, 1e4];
const DEFAULT_GAMMA_CAVITY: [f64; 3] = [0.0, 1e3, 1e4];

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Comma-separated Γ values (rad/s).
    #[arg(long, value_name = "LIST")]
    gamma_atomic: Option<String>,
    /// Comma-separated γ values (rad/s).
    #[arg(long, value_name = "LIST")]
    gamma_cavity: Option<String>,
    /// Comma-separated Δ values (rad/s).
    #[arg(long, value_name = "LIST")]
    delta: Option<String>,
    /// Comma-separated gate times (s); defaults to π/(2N|Ω_σ|).
    #[arg(long, value_name = "LIST")]
    time: Option<String>,
    /// Append, for each (γ, Δ, t), the Γ that puts the margin at zero.
    #[arg(long)]
    frontier: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
enum Status {
    Ok,
    Boundary,
    Violated,
}

impl Status {
    fn of(margin: f64) -> Self {
        if margin.abs() <= BOUNDARY_TOL {
            Status::Boundary
        } else if margin > 0.0 {
            Status::Ok
        } else {
            Status::Violated
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Boundary => "boundary",
            Status::Violated => "violated",
        }
    }
}

#[derive(Serialize)]
struct Row {
    #[serde(flatten)]
    row: FidelityRow,
    status: Status,
}

#[derive(Serialize)]
struct Report<'a> {
    scenario: &'a str,
    config_hash: &'a str,
    omega_sigma: f64,
    n_atoms: u64,
    default_t: f64,
    rows: &'a [Row],
    passed: bool,
}

fn axis(ctx: &Context, flag: &Option<String>, name: &str, default: &[f64]) -> Result<Vec<f64>, CliError> {
    let values = match (flag, ctx.config.sweep(name)) {
        (Some(list), _) => parse_list(list).map_err(|e| CliError::Usage(format!("--{}: {e}", name.replace('_', "-"))))?,
        (None, Some(sweep)) => sweep.grid(),
        (None, None) => default.to_vec(),
    };
    Sweep::explicit(name, values.clone()).validate()?;
    Ok(values)
}

pub fn run(ctx: &Context, args: &Args) -> Result<bool, CliError> {
    let couplings = derive_couplings(&ctx.config.physical)?;
    let omega_sigma = couplings.omega_cap_sigma.norm();
    let n_atoms = ctx.config.physical.n_atoms_1;
    let default_t = gate_time(n_atoms as f64, omega_sigma)?;

    let gammas = axis(ctx, &args.gamma_atomic, "gamma_atomic", &DEFAULT_GAMMA_ATOMIC)?;
    let cavity = axis(ctx, &args.gamma_cavity, "gamma_cavity", &DEFAULT_GAMMA_CAVITY)?;
    let deltas = axis(ctx, &args.delta, "delta", &[ctx.config.decoherence.delta])?;
    let times = axis(ctx, &args.time, "t", &[default_t])?;
    if let Some(t) = times.iter().find(|t| !(**t >= 0.0)) {
        return Err(CliError::Usage(format!("gate time must be non-negative, got {t}")));
    }

    let mut rows = Vec::new();
    for &delta in &deltas {
        for &t in &times {
            for &gc in &cavity {
                for &ga in &gammas {
                    let d = DecoherenceParams::new(ga, gc, delta)?;
                    rows.push(FidelityRow::evaluate(&d, t));
                }
                if args.frontier && t > 0.0 {
                    let slack = DecoherenceParams::new(0.0, gc, delta)?.error_exponent(t);
                    if slack <= FAULT_TOLERANCE_THRESHOLD {
                        let ga = (FAULT_TOLERANCE_THRESHOLD - slack) / (2.0 * t);
                        if gammas.iter().any(|g| (g - ga).abs() <= 1e-12 * ga.abs()) {
                            continue;
                        }
                        rows.push(FidelityRow::evaluate(&DecoherenceParams::new(ga, gc, delta)?, t));
                    }
                }
            }
        }
    }
    let rows: Vec<Row> = rows.into_iter().map(|row| Row { status: Status::of(row.margin), row }).collect();
    let passed = rows.iter().all(|r| r.row.fidelity > 0.0 && r.row.fidelity <= 1.0);

    if ctx.json {
        ctx.print_json(&Report {
            scenario: &ctx.config.name,
            config_hash: &ctx.hash,
            omega_sigma,
            n_atoms,
            default_t,
            rows: &rows,
            passed,
        })?;
    } else {
        let mut csv = format!(
            "# scenario={}\n# config_hash={}\n# n_atoms={}\n# omega_sigma={} rad/s\n# t_default={} s\n{CSV_HEADER}\n",
            ctx.config.name,
            ctx.hash,
            n_atoms,
            num(omega_sigma),
            num(default_t)
        );
        for Row { row: r, status } in &rows {
            let _ = writeln!(
                csv,
                "{},{},{},{},{},{},{}",
                num(r.gamma_atomic),
                num(r.gamma_cavity),
                num(r.delta),
                num(r.t),
                num(r.fidelity),
                num(r.margin),
                status.as_str()
            );
        }
        ctx.artifact("fidelity.csv", &csv)?;
        eprintln!("{}", verdict(passed));
    }
    Ok(passed)
}
