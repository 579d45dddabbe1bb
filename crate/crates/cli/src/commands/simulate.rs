use std::collections::BTreeMap;
use std::path::PathBuf;

use macqc_core::compiler::{lower_circuit, Circuit, NativeProgram};
use macqc_core::sim::{
    decode_logical, encode_basis, measure_logical, run_on_state, PhysicalState, RunStats, DEFAULT_LEAKAGE_TOL,
    MAX_LOGICAL_QUBITS,
};
use macqc_core::Complex64;
use rand::rngs::StdRng;
use rand::SeedableRng;
use serde::Serialize;

use super::gate_model;
use crate::error::CliError;
use crate::output::{num, verdict, Context};

/// Leakage above which a run is reported as failed.
pub const LEAKAGE_PASS_TOL: f64 = 1e-10;

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Native program JSON or circuit file.
    file: PathBuf,
    /// Logical basis state, character j for qubit j; all zeros by default.
    #[arg(long, value_name = "BITS")]
    initial: Option<String>,
    /// Report leakage after every op.
    #[arg(long)]
    trace: bool,
    /// Sample this many measurements of all qubits.
    #[arg(long, default_value_t = 0)]
    shots: usize,
    /// Execute under the gate model calibrated from the scenario.
    #[arg(long)]
    calibrated: bool,
}

#[derive(Debug, Serialize)]
struct TraceLine {
    step: usize,
    op: String,
    leakage: f64,
}

#[derive(Serialize)]
struct Report<'a> {
    scenario: &'a str,
    config_hash: &'a str,
    seed: u64,
    initial: &'a str,
    stats: RunStats,
    final_state_ref: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    final_state: Option<Vec<[f64; 2]>>,
    logical_state: Vec<[f64; 2]>,
    trace: &'a [TraceLine],
    counts: &'a BTreeMap<String, usize>,
    passed: bool,
}

fn load_program(ctx: &Context, args: &Args) -> Result<NativeProgram, CliError> {
    let text = std::fs::read_to_string(&args.file)
        .map_err(|e| CliError::io(format!("cannot read {}", args.file.display()), e))?;
    if text.trim_start().starts_with('{') {
        return Ok(NativeProgram::from_json(&text)?);
    }
    let circuit = Circuit::parse(&text)?;
    Ok(lower_circuit(&circuit, &gate_model(&ctx.config, args.calibrated)?)?)
}

fn sample(state: &PhysicalState, shots: usize, seed: u64) -> Result<BTreeMap<String, usize>, CliError> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut counts = BTreeMap::new();
    for _ in 0..shots {
        let mut s = state.clone();
        let mut bits = String::with_capacity(state.qubit_count());
        for q in 0..state.qubit_count() {
            let (bit, collapsed) = measure_logical(&s, q, &mut rng, DEFAULT_LEAKAGE_TOL)?;
            bits.push(if bit { '1' } else { '0' });
            s = collapsed;
        }
        *counts.entry(bits).or_insert(0) += 1;
    }
    Ok(counts)
}

pub fn run(ctx: &Context, args: &Args) -> Result<bool, CliError> {
    let program = load_program(ctx, args)?;
    if program.qubit_count > MAX_LOGICAL_QUBITS {
        return Err(CliError::Usage(format!("at most {MAX_LOGICAL_QUBITS} logical qubits are simulated")));
    }
    let initial = args.initial.clone().unwrap_or_else(|| "0".repeat(program.qubit_count));
    if initial.chars().count() != program.qubit_count {
        return Err(CliError::Usage(format!(
            "--initial has {} qubits, program has {}",
            initial.chars().count(),
            program.qubit_count
        )));
    }
    let model = gate_model(&ctx.config, args.calibrated)?;
    let stream = args.trace && !ctx.json;
    let mut trace = Vec::new();
    let (state, stats) = run_on_state(&program, encode_basis(&initial)?, &model, |step, op, leakage| {
        if stream {
            println!("# step {step} {op} leakage={}", num(leakage));
        }
        if args.trace {
            trace.push(TraceLine { step, op: op.to_string(), leakage });
        }
    })?;
    let passed = stats.max_leakage < LEAKAGE_PASS_TOL;
    let phase = Complex64::from_polar(1.0, stats.global_phase);
    let logical: Vec<[f64; 2]> = match decode_logical(&state, DEFAULT_LEAKAGE_TOL) {
        Ok(v) => v.into_iter().map(|z| z * phase).map(|z| [z.re, z.im]).collect(),
        Err(e) => {
            log::warn!("logical state not decoded: {e}");
            Vec::new()
        }
    };
    let counts = if args.shots > 0 && passed { sample(&state, args.shots, ctx.config.seed)? } else { BTreeMap::new() };

    let state_json = state.to_json()?;
    let final_state_ref = match &ctx.out {
        Some(dir) => {
            ctx.artifact("state.json", &state_json)?;
            dir.join("state.json").display().to_string()
        }
        None => "inline".to_string(),
    };
    if ctx.json {
        ctx.print_json(&Report {
            scenario: &ctx.config.name,
            config_hash: &ctx.hash,
            seed: ctx.config.seed,
            initial: &initial,
            stats,
            final_state: ctx.out.is_none().then(|| state.amplitudes().iter().map(|z| [z.re, z.im]).collect()),
            final_state_ref,
            logical_state: logical,
            trace: &trace,
            counts: &counts,
            passed,
        })?;
    } else {
        println!("# config_hash={}", ctx.hash);
        println!("# ops={} max_leakage={} global_phase={}", stats.op_count, num(stats.max_leakage), num(stats.global_phase));
        for (k, [re, im]) in logical.iter().enumerate() {
            if re.hypot(*im) > 1e-12 {
                let bits: String = (0..program.qubit_count).map(|j| if k >> j & 1 == 1 { '1' } else { '0' }).collect();
                println!("|{bits}>: {:+.12} {:+.12}i", re, im);
            }
        }
        for (bits, n) in &counts {
            println!("shots {bits}: {n}");
        }
        if ctx.out.is_none() {
            println!("{state_json}");
        }
        println!("{}", verdict(passed));
    }
    Ok(passed)
}
