use std::fmt::Write as _;

use macqc_core::dynamics::{
    assemble_controlled_iswap, compare_with_truth_table, extract_controlled_iswap, ExtractionOptions,
    TableMismatch,
};
use macqc_core::physical::derive_couplings;
use macqc_core::unitary::Unitary;
use macqc_core::Complex64;
use serde::Serialize;

use crate::config::ScenarioConfig;
use crate::error::CliError;
use crate::output::{num, verdict, Context};

pub const TABLE_TOL: f64 = 1e-10;

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Skip the √3 and resonance checks and report deviations instead.
    #[arg(long)]
    force: bool,
    /// Replace the microcavity coupling so that |Ω₁π| = ratio·|S|.
    #[arg(long, value_name = "RATIO")]
    pi_ratio: Option<f64>,
    /// Gate time in seconds; defaults to π/(2|S|).
    #[arg(long)]
    time: Option<f64>,
    /// Also print the matrix as a LaTeX pmatrix.
    #[arg(long)]
    latex: bool,
}

impl Args {
    pub fn apply(&self, mut config: ScenarioConfig) -> ScenarioConfig {
        if let Some(r) = self.pi_ratio {
            config.physical = config.physical.with_pi_ratio(r);
        }
        config
    }
}

#[derive(Serialize)]
struct Report<'a> {
    scenario: &'a str,
    config_hash: &'a str,
    forced: bool,
    t: f64,
    unitary: Vec<Vec<[f64; 2]>>,
    photon_phase: [f64; 2],
    photon_leakage: f64,
    max_deviation: f64,
    tolerance: f64,
    mismatches: &'a [TableMismatch],
    passed: bool,
}

fn polar(z: Complex64) -> String {
    let (r, phi) = z.to_polar();
    if r < 1e-12 {
        format!("{:>22}", "0")
    } else {
        format!("{r:.9}∠{phi:+.9}")
    }
}

fn render(u: &Unitary) -> String {
    let mut s = String::new();
    for r in 0..u.dim() {
        let cells: Vec<String> = (0..u.dim()).map(|c| format!("{:>22}", polar(u.get(r, c)))).collect();
        let _ = writeln!(s, "  {}", cells.join(" "));
    }
    s
}

pub fn run(ctx: &Context, args: &Args) -> Result<bool, CliError> {
    if let Some(t) = args.time {
        if !(t > 0.0) || !t.is_finite() {
            return Err(CliError::Usage(format!("--time must be positive, got {t}")));
        }
    }
    let couplings = derive_couplings(&ctx.config.physical)?;
    let gate = if args.force {
        let s = couplings.s_coupling.norm();
        if s == 0.0 {
            return Err(CliError::Usage("exchange coupling S is zero".into()));
        }
        assemble_controlled_iswap(&couplings, args.time.unwrap_or(std::f64::consts::PI / (2.0 * s)))
    } else {
        extract_controlled_iswap(&couplings, &ExtractionOptions { t: args.time, ..Default::default() })?
    };
    let check = compare_with_truth_table(&gate.unitary, TABLE_TOL);
    let passed = check.passed();

    if ctx.json {
        ctx.print_json(&Report {
            scenario: &ctx.config.name,
            config_hash: &ctx.hash,
            forced: args.force,
            t: gate.t,
            unitary: gate.unitary.to_rows(),
            photon_phase: [gate.photon_phase.re, gate.photon_phase.im],
            photon_leakage: gate.leakage,
            max_deviation: check.max_deviation,
            tolerance: TABLE_TOL,
            mismatches: &check.mismatches,
            passed,
        })?;
    } else {
        println!("scenario: {}", ctx.config.name);
        println!("config_hash: {}", ctx.hash);
        println!("t: {} s", num(gate.t));
        println!("basis: psi1|0>, psi2|0>, psi1|1>, psi2|1>  (magnitude∠phase, rad)");
        print!("{}", render(&gate.unitary));
        println!("photon phase: {}", polar(gate.photon_phase).trim());
        println!("photon-sector leakage |c2(1)|: {}", num(gate.leakage));
        println!("max deviation: {} (tolerance {})", num(check.max_deviation), num(TABLE_TOL));
        for m in &check.mismatches {
            println!(
                "  mismatch ({}, {}): expected {}, got {:+.9}{:+.9}i, deviation {}",
                m.row,
                m.col,
                m.expected,
                m.actual[0],
                m.actual[1],
                num(m.deviation)
            );
        }
        if args.latex {
            println!("{}", gate.unitary.to_latex(6));
        }
        println!("{}", verdict(passed));
    }
    Ok(passed)
}
