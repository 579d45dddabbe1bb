#![allow(dead_code)]

use std::f64::consts::PI;

use macqc_core::physical::PhysicalParams;
use macqc_core::unitary::Unitary;
use macqc_core::Complex64;
use ndarray::array;
use rand::Rng;
use rand_distr::StandardNormal;

pub fn normal<R: Rng>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

/// Haar-random 2×2 unitary: uniform unit quaternion times a uniform phase.
pub fn haar_2x2<R: Rng>(rng: &mut R) -> Unitary {
    let q: [f64; 4] = std::array::from_fn(|_| normal(rng));
    let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
    let [a, b, c, d] = q.map(|x| x / n);
    let phase = Complex64::from_polar(1.0, rng.gen_range(-PI..PI));
    let m = array![
        [Complex64::new(a, b) * phase, Complex64::new(c, d) * phase],
        [Complex64::new(-c, d) * phase, Complex64::new(a, -b) * phase],
    ];
    Unitary::new(m).expect("quaternion matrix is unitary")
}

/// Random normalised complex vector.
pub fn random_state<R: Rng>(rng: &mut R, dim: usize) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..dim).map(|_| Complex64::new(normal(rng), normal(rng))).collect();
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / n).collect()
}

/// Random asymmetric two-node parameters on the resonance condition, with
/// |Ω₁^(π)| = `pi_ratio`·|S| and Δ^(π) = −Δ^(σ) on both nodes.
pub fn random_resonant_params<R: Rng>(rng: &mut R, pi_ratio: f64) -> PhysicalParams {
    let log_uniform = |rng: &mut R, lo: f64, hi: f64| (rng.gen_range(lo.ln()..hi.ln())).exp();
    let n1 = rng.gen_range(1..=20_000u64);
    let n2 = rng.gen_range(1..=20_000u64);
    let g1 = log_uniform(rng, 1e3, 1e6);
    let g2 = g1 * rng.gen_range(0.5..2.0);
    let d1 = g1 * log_uniform(rng, 20.0, 1000.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    let d2 = d1 * rng.gen_range(0.5..2.0);
    let omega = 2.0 * PI * log_uniform(rng, 1e8, 1e10);
    let mut p = PhysicalParams::symmetric(n1, g1, 0.0, d1, omega);
    p.n_atoms_2 = n2;
    p.g_sigma_2 = g2;
    p.delta_sigma_2 = d2;
    p.delta_pi_2 = -d2;
    p.omega_pi_2 = p.omega_0 + d2;
    p.g_pi_2 = g2 * rng.gen_range(0.0..1.0);
    p.sigma_phase = rng.gen_range(-PI..PI);
    p.with_pi_ratio(pi_ratio)
}
