//! Dense unitary matrices.

use std::fmt::Write as _;
use std::ops::Mul;

use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Tolerance used when a caller-supplied matrix is checked for unitarity.
pub const UNITARITY_TOL: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Square complex matrix of power-of-two dimension satisfying U·U† = I.
///
/// Serialized as a row-major array of rows, each entry a `[re, im]` pair.
#[derive(Debug, Clone, PartialEq)]
pub struct Unitary(Array2<Complex64>);

impl Unitary {
    /// Wraps `m` after checking shape and unitarity to [`UNITARITY_TOL`].
    pub fn new(m: Array2<Complex64>) -> Result<Self> {
        Self::with_tolerance(m, UNITARITY_TOL)
    }

    pub fn with_tolerance(m: Array2<Complex64>, tol: f64) -> Result<Self> {
        let (r, c) = m.dim();
        if r != c {
            return Err(Error::Dimension { expected: r, actual: c });
        }
        if !r.is_power_of_two() || r < 2 {
            return Err(Error::Dimension { expected: r.next_power_of_two().max(2), actual: r });
        }
        let dev = unitarity_deviation(&m);
        if !(dev <= tol) {
            return Err(Error::NotUnitary { deviation: dev });
        }
        Ok(Unitary(m))
    }

    /// For matrices that are unitary by construction.
    pub(crate) fn from_exact(m: Array2<Complex64>) -> Self {
        debug_assert!(unitarity_deviation(&m) < 1e-9, "constructed matrix is not unitary");
        Unitary(m)
    }

    pub fn identity(dim: usize) -> Self {
        Unitary(Array2::eye(dim))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &Array2<Complex64> {
        &self.0
    }

    pub fn into_matrix(self) -> Array2<Complex64> {
        self.0
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.0[[row, col]]
    }

    pub fn adjoint(&self) -> Self {
        Unitary(self.0.t().mapv(|z| z.conj()))
    }

    /// Kronecker product `self ⊗ other`, with `self` on the high index bits.
    pub fn kron(&self, other: &Unitary) -> Self {
        Unitary(ndarray::linalg::kron(&self.0, &other.0))
    }

    pub fn scaled(&self, z: Complex64) -> Self {
        Unitary(self.0.mapv(|w| w * z))
    }

    pub fn unitarity_deviation(&self) -> f64 {
        unitarity_deviation(&self.0)
    }

    /// max |U_ij − V_ij|.
    pub fn max_diff(&self, other: &Unitary) -> f64 {
        max_abs_diff(&self.0, &other.0)
    }

    /// Phase-invariant distance min_φ max_ij |U_ij − e^{iφ}V_ij|.
    pub fn phase_distance(&self, other: &Unitary) -> f64 {
        phase_invariant_distance(&self.0, &other.0).0
    }

    /// Row-major `[re, im]` pairs.
    pub fn to_rows(&self) -> Vec<Vec<[f64; 2]>> {
        self.0.rows().into_iter().map(|r| r.iter().map(|z| [z.re, z.im]).collect()).collect()
    }

    pub fn from_rows(rows: &[Vec<[f64; 2]>]) -> Result<Self> {
        let n = rows.len();
        let mut m = Array2::zeros((n, n));
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Dimension { expected: n, actual: row.len() });
            }
            for (j, z) in row.iter().enumerate() {
                m[[i, j]] = Complex64::new(z[0], z[1]);
            }
        }
        Unitary::new(m)
    }

    /// LaTeX `pmatrix` rendering with `digits` decimals.
    pub fn to_latex(&self, digits: usize) -> String {
        let mut s = String::from("\\begin{pmatrix}\n");
        for row in self.0.rows() {
            let cells: Vec<String> = row.iter().map(|z| latex_complex(*z, digits)).collect();
            let _ = writeln!(s, "  {} \\\\", cells.join(" & "));
        }
        s.push_str("\\end{pmatrix}");
        s
    }
}

fn latex_complex(z: Complex64, digits: usize) -> String {
    let eps = 0.5 * 10f64.powi(-(digits as i32));
    let re = if z.re.abs() < eps { 0.0 } else { z.re };
    let im = if z.im.abs() < eps { 0.0 } else { z.im };
    match (re == 0.0, im == 0.0) {
        (true, true) => "0".into(),
        (false, true) => format!("{re:.digits$}"),
        (true, false) => format!("{im:.digits$}i"),
        (false, false) => {
            let sign = if im < 0.0 { '-' } else { '+' };
            format!("{re:.digits$} {sign} {:.digits$}i", im.abs())
        }
    }
}

impl Mul for &Unitary {
    type Output = Unitary;

    fn mul(self, rhs: &Unitary) -> Unitary {
        Unitary(self.0.dot(&rhs.0))
    }
}

impl Mul for Unitary {
    type Output = Unitary;

    fn mul(self, rhs: Unitary) -> Unitary {
        &self * &rhs
    }
}

impl Serialize for Unitary {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Unitary {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<[f64; 2]>>::deserialize(d)?;
        Unitary::from_rows(&rows).map_err(serde::de::Error::custom)
    }
}

/// max_ij |(M·M†)_ij − δ_ij|.
pub fn unitarity_deviation(m: &Array2<Complex64>) -> f64 {
    let prod = m.dot(&m.t().mapv(|z| z.conj()));
    prod.indexed_iter()
        .map(|((i, j), z)| (z - if i == j { ONE } else { ZERO }).norm())
        .fold(0.0, f64::max)
}

pub fn max_abs_diff(a: &Array2<Complex64>, b: &Array2<Complex64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Returns `(d, φ)` with d = min_φ max_ij |A_ij − e^{iφ}B_ij| and φ a
/// minimiser.
///
/// Each entry contributes |A_ij − e^{iφ}B_ij|² = p − q·cos(φ − θ), a sinusoid
/// in φ. The minimum of their upper envelope sits either at the minimum of a
/// single sinusoid or where two of them cross, so scanning those candidates
/// is exact.
pub fn phase_invariant_distance(a: &Array2<Complex64>, b: &Array2<Complex64>) -> (f64, f64) {
    assert_eq!(a.dim(), b.dim(), "phase distance needs equal shapes");
    // |a − e^{iφ}b|² = |a|² + |b|² − 2|a||b|cos(φ + arg b − arg a)
    let terms: Vec<(f64, f64, f64)> = a
        .iter()
        .zip(b.iter())
        .map(|(x, y)| {
            let p = x.norm_sqr() + y.norm_sqr();
            let q = 2.0 * x.norm() * y.norm();
            let theta = x.arg() - y.arg();
            (p, q, theta)
        })
        .collect();

    let mut candidates = vec![0.0];
    for &(_, q, th) in &terms {
        if q > 0.0 {
            candidates.push(th);
        }
    }
    // p1 − q1 cos(φ − θ1) = p2 − q2 cos(φ − θ2)
    //   => a cos φ + b sin φ = c
    for i in 0..terms.len() {
        for j in (i + 1)..terms.len() {
            let (p1, q1, t1) = terms[i];
            let (p2, q2, t2) = terms[j];
            let ca = q1 * t1.cos() - q2 * t2.cos();
            let cb = q1 * t1.sin() - q2 * t2.sin();
            let cc = p1 - p2;
            let r = ca.hypot(cb);
            if r == 0.0 || cc.abs() > r {
                continue;
            }
            let base = cb.atan2(ca);
            let spread = (cc / r).clamp(-1.0, 1.0).acos();
            candidates.push(base + spread);
            candidates.push(base - spread);
        }
    }

    // The squared form loses half the digits near zero; rank candidates by
    // the direct envelope instead.
    let direct = |phi: f64| -> f64 {
        let w = Complex64::from_polar(1.0, phi);
        a.iter().zip(b.iter()).map(|(x, y)| (x - w * y).norm()).fold(0.0, f64::max)
    };
    let (mut phi, mut best) = candidates
        .into_iter()
        .map(|phi| (phi, direct(phi)))
        .fold((0.0, f64::INFINITY), |acc, c| if c.1 < acc.1 { c } else { acc });
    // Tangent crossings are ill-conditioned; polish locally.
    let (mut lo, mut hi) = (phi - 1e-6, phi + 1e-6);
    let inv_golden = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..60 {
        let m1 = hi - inv_golden * (hi - lo);
        let m2 = lo + inv_golden * (hi - lo);
        if direct(m1) < direct(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    let mid = 0.5 * (lo + hi);
    let polished = direct(mid);
    if polished < best {
        phi = mid;
        best = polished;
    }
    (best, wrap_angle(phi))
}

/// Maps an angle into (−π, π].
pub fn wrap_angle(x: f64) -> f64 {
    use std::f64::consts::{PI, TAU};
    let mut y = x.rem_euclid(TAU);
    if y > PI {
        y -= TAU;
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rejects_non_unitary() {
        let m = array![[c(1.0, 0.0), c(0.1, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]];
        assert!(matches!(Unitary::new(m), Err(Error::NotUnitary { .. })));
        let m: Array2<Complex64> = Array2::eye(3);
        assert!(matches!(Unitary::new(m), Err(Error::Dimension { .. })));
    }

    #[test]
    fn phase_distance_ignores_global_phase() {
        let u = Unitary::new(array![[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]]).unwrap();
        let v = u.scaled(Complex64::from_polar(1.0, 1.234));
        let (d, phi) = phase_invariant_distance(u.matrix(), v.matrix());
        assert!(d < 1e-12);
        assert!((phi + 1.234).abs() < 1e-12);
    }

    #[test]
    fn phase_distance_of_orthogonal_diagonals() {
        // diag(1, 1) vs diag(1, −1): best phase ±π/2 leaves √2 on every entry.
        let a: Array2<Complex64> = Array2::eye(2);
        let b = array![[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]];
        let (d, _) = phase_invariant_distance(&a, &b);
        assert!((d - 2f64.sqrt()).abs() < 1e-12, "{d}");
    }

    #[test]
    fn rows_round_trip() {
        let u = Unitary::new(array![[c(0.0, 1.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]]).unwrap();
        let json = serde_json::to_string(&u).unwrap();
        assert_eq!(json, "[[[0.0,1.0],[0.0,0.0]],[[0.0,0.0],[1.0,0.0]]]");
        let back: Unitary = serde_json::from_str(&json).unwrap();
        assert_eq!(back, u);
    }

    #[test]
    fn latex_rendering() {
        let u = Unitary::new(array![[c(0.0, -1.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]]).unwrap();
        let tex = u.to_latex(2);
        assert!(tex.contains("-1.00i & 0 \\\\"));
        assert!(tex.starts_with("\\begin{pmatrix}"));
    }
}
