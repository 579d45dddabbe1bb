use std::f64::consts::PI;
use std::fmt::Write as _;

use macqc_core::dynamics::{blockade_error, photon_sector_leakage};
use macqc_core::physical::{derive_couplings, PhysicalParams};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::Sweep;
use crate::error::CliError;
use crate::output::{num, parse_list, verdict, Context};

pub const CSV_HEADER: &str = "ratio,blockade_error,photon_leakage";

/// Relative agreement required with the two-level closed forms.
const CHECK_TOL: f64 = 1e-9;

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Comma-separated |Ω₁π|/|S| ratios; `sqrt3` is accepted.
    #[arg(long, value_name = "LIST")]
    values: Option<String>,
    /// Worker threads; rows keep input order.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Debug, Clone, Copy, Serialize)]
struct Row {
    ratio: f64,
    blockade_error: f64,
    /// |c₂(n=1)| at t̃ = π/(2|S|).
    photon_leakage: f64,
    expected_error: f64,
    expected_leakage: f64,
    passed: bool,
}

fn evaluate(base: &PhysicalParams, ratio: f64) -> Result<Row, CliError> {
    let couplings = derive_couplings(&base.clone().with_pi_ratio(ratio))?;
    let s = couplings.s_coupling.norm();
    if s == 0.0 {
        return Err(CliError::Usage("exchange coupling S is zero".into()));
    }
    let t = PI / (2.0 * s);
    let blockade_error = blockade_error(&couplings);
    let photon_leakage = photon_sector_leakage(&couplings, t);
    // On resonance the photon sector is a two-level system with h = r|S|.
    let root = ratio.hypot(1.0);
    let expected_error = 1.0 / root;
    let expected_leakage = expected_error * (root * PI / 2.0).sin().abs();
    let passed = (blockade_error - expected_error).abs() <= CHECK_TOL * expected_error
        && (photon_leakage - expected_leakage).abs() <= CHECK_TOL;
    Ok(Row { ratio, blockade_error, photon_leakage, expected_error, expected_leakage, passed })
}

#[derive(Serialize)]
struct Report<'a> {
    scenario: &'a str,
    config_hash: &'a str,
    rows: &'a [Row],
    passed: bool,
}

pub fn run(ctx: &Context, args: &Args) -> Result<bool, CliError> {
    let ratios = match (&args.values, ctx.config.sweep("pi_ratio")) {
        (Some(list), _) => parse_list(list).map_err(|e| CliError::Usage(format!("--values: {e}")))?,
        (None, Some(sweep)) => sweep.grid(),
        (None, None) => vec![0.0, 3f64.sqrt(), 10.0, 100.0],
    };
    Sweep::explicit("pi_ratio", ratios.clone()).validate()?;
    if let Some(r) = ratios.iter().find(|r| **r < 0.0) {
        return Err(CliError::Usage(format!("ratio must be non-negative, got {r}")));
    }
    if args.jobs == 0 {
        return Err(CliError::Usage("--jobs must be at least 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs)
        .build()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    let base = &ctx.config.physical;
    let rows: Vec<Row> = pool.install(|| ratios.par_iter().map(|&r| evaluate(base, r)).collect::<Result<_, _>>())?;
    let passed = rows.iter().all(|r| r.passed);

    if ctx.json {
        ctx.print_json(&Report { scenario: &ctx.config.name, config_hash: &ctx.hash, rows: &rows, passed })?;
    } else {
        let mut csv = format!("# scenario={}\n# config_hash={}\n{CSV_HEADER}\n", ctx.config.name, ctx.hash);
        for r in &rows {
            let _ = writeln!(csv, "{},{},{}", num(r.ratio), num(r.blockade_error), num(r.photon_leakage));
        }
        ctx.artifact("blockade.csv", &csv)?;
        for r in rows.iter().filter(|r| !r.passed) {
            eprintln!(
                "ratio {}: expected error {} and leakage {}",
                num(r.ratio),
                num(r.expected_error),
                num(r.expected_leakage)
            );
        }
        eprintln!("{}", verdict(passed));
    }
    Ok(passed)
}
