//! Riemann theta functions of small genus,
//!
//! ```text
//! θ(z) = Σ_{m ∈ ℤⁿ} exp(2πi ⟨m, z⟩ + πi ⟨m, τ m⟩),
//! ```
//!
//! with directional first derivatives. The lattice sum is truncated to the
//! ellipsoid `‖(Im τ)^{1/2} m‖ ≤ ρ` after recentering the Gaussian: the
//! integer point nearest `−(Im τ)^{−1} Im z` is split off through the
//! quasi-periodicity law, which keeps the summand magnitudes bounded for
//! arguments far from the fundamental domain.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ThetaError {
    #[error("Riemann matrix is not symmetric (defect {0:.3e})")]
    NotSymmetric(f64),
    #[error("imaginary part of the Riemann matrix is not positive definite")]
    NotPositive,
    #[error("truncation radius {given:.3} is insufficient; need at least {required:.3}")]
    RadiusInsufficient { given: f64, required: f64 },
    #[error("argument length {0} does not match genus {1}")]
    DimensionMismatch(usize, usize),
}

/// Precomputed lattice data for one Riemann matrix.
#[derive(Debug, Clone)]
pub struct ThetaContext {
    tau: DMatrix<Complex64>,
    im_tau: DMatrix<f64>,
    im_tau_inv: DMatrix<f64>,
    /// truncation radius in the `(Im τ)^{1/2}`-metric
    radius: f64,
    /// guaranteed bound on the dropped tail, relative to the recentered
    /// leading term
    tail_bound: f64,
    /// lattice points inside the ellipsoid with their fixed exponents
    /// `exp(πi ⟨m, τ m⟩)`
    points: Vec<(Vec<i64>, Complex64)>,
}

const DEFAULT_TOL: f64 = 1e-12;

impl ThetaContext {
    /// Build a context with the truncation radius derived from the target
    /// relative tolerance (default `1e-12`).
    pub fn new(tau: DMatrix<Complex64>) -> Result<Self, ThetaError> {
        Self::with_tolerance(tau, DEFAULT_TOL)
    }

    pub fn with_tolerance(tau: DMatrix<Complex64>, tol: f64) -> Result<Self, ThetaError> {
        let required = required_radius(&tau, tol)?;
        Self::with_radius(tau, required, tol)
    }

    /// Build with an explicit truncation radius; fails when the radius
    /// cannot reach the requested tolerance.
    pub fn with_radius(
        tau: DMatrix<Complex64>,
        radius: f64,
        tol: f64,
    ) -> Result<Self, ThetaError> {
        let n = tau.nrows();
        let sym_defect = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| (tau[(i, j)] - tau[(j, i)]).norm())
            .fold(0.0f64, f64::max);
        let scale = tau.iter().map(|t| t.norm()).fold(0.0f64, f64::max).max(1.0);
        if sym_defect > 1e-9 * scale {
            return Err(ThetaError::NotSymmetric(sym_defect));
        }
        let im_tau = DMatrix::<f64>::from_fn(n, n, |i, j| 0.5 * (tau[(i, j)].im + tau[(j, i)].im));
        let eig = im_tau.clone().symmetric_eigenvalues();
        if eig.iter().any(|&e| e <= 0.0) {
            return Err(ThetaError::NotPositive);
        }
        let required = required_radius(&tau, tol)?;
        if radius < required {
            return Err(ThetaError::RadiusInsufficient {
                given: radius,
                required,
            });
        }
        let im_tau_inv = im_tau
            .clone()
            .try_inverse()
            .ok_or(ThetaError::NotPositive)?;
        let tail_bound = tail_estimate(&im_tau, radius);
        let points = enumerate_ellipsoid(&tau, &im_tau, radius);
        Ok(ThetaContext {
            tau,
            im_tau,
            im_tau_inv,
            radius,
            tail_bound,
            points,
        })
    }

    pub fn genus(&self) -> usize {
        self.tau.nrows()
    }

    pub fn tau(&self) -> &DMatrix<Complex64> {
        &self.tau
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Bound on the truncated tail relative to the recentered leading term.
    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    /// The integer recentering point for an argument.
    fn recenter(&self, z: &[Complex64]) -> Vec<i64> {
        let n = self.genus();
        let im_z = DVector::<f64>::from_fn(n, |i, _| z[i].im);
        let c = &self.im_tau_inv * &im_z;
        (0..n).map(|i| (-c[i]).round() as i64).collect()
    }
}

/// Gaussian-decay radius needed for a relative tail below `tol`,
/// accounting for a recentering defect of up to half a lattice cell.
fn required_radius(tau: &DMatrix<Complex64>, tol: f64) -> Result<f64, ThetaError> {
    let n = tau.nrows();
    let im_tau = DMatrix::<f64>::from_fn(n, n, |i, j| 0.5 * (tau[(i, j)].im + tau[(j, i)].im));
    let eig = im_tau.clone().symmetric_eigenvalues();
    let lam_max = eig.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if eig.iter().any(|&e| e <= 0.0) {
        return Err(ThetaError::NotPositive);
    }
    // center offset after recentering is at most half a cell in each axis
    let offset = 0.5 * (n as f64).sqrt() * lam_max.sqrt();
    let mut rho = offset + (f64::ln(1.0 / tol) / std::f64::consts::PI).sqrt() + 1.0;
    while tail_estimate(&im_tau, rho) > tol && rho < 1e3 {
        rho += 0.5;
    }
    Ok(rho)
}

/// Crude but honest bound on `Σ_{‖m‖_Y ≥ ρ − offset} e^{−π‖m‖²}` via shell
/// counts in the Euclidean box enclosing the ellipsoid.
fn tail_estimate(im_tau: &DMatrix<f64>, radius: f64) -> f64 {
    let n = im_tau.nrows();
    let eig = im_tau.clone().symmetric_eigenvalues();
    let lam_min = eig.iter().cloned().fold(f64::INFINITY, f64::min);
    let lam_max = eig.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let offset = 0.5 * (n as f64).sqrt() * lam_max.sqrt();
    let mut acc = 0.0f64;
    let mut r = radius;
    for _ in 0..200 {
        // lattice points with Y-norm in [r, r+1): box count at Euclidean
        // radius (r+1)/sqrt(lam_min)
        let re = (r + 1.0) / lam_min.sqrt();
        let count = (2.0 * re + 1.0).powi(n as i32);
        let decay = (-std::f64::consts::PI * ((r - offset).max(0.0)).powi(2)).exp();
        let term = count * decay;
        acc += term;
        if term < 1e-40 {
            break;
        }
        r += 1.0;
    }
    acc
}

fn enumerate_ellipsoid(
    tau: &DMatrix<Complex64>,
    im_tau: &DMatrix<f64>,
    radius: f64,
) -> Vec<(Vec<i64>, Complex64)> {
    let n = tau.nrows();
    let eig = im_tau.clone().symmetric_eigenvalues();
    let lam_min = eig.iter().cloned().fold(f64::INFINITY, f64::min);
    let bound = (radius / lam_min.sqrt()).ceil() as i64;
    let mut points = Vec::new();
    let mut m = vec![-bound; n];
    'outer: loop {
        let mv = DVector::<f64>::from_fn(n, |i, _| m[i] as f64);
        let ynorm2 = (im_tau * &mv).dot(&mv);
        if ynorm2.sqrt() <= radius {
            let mut mtm = Complex64::new(0.0, 0.0);
            for i in 0..n {
                for j in 0..n {
                    mtm += tau[(i, j)] * (m[i] as f64) * (m[j] as f64);
                }
            }
            let pref = (Complex64::new(0.0, std::f64::consts::PI) * mtm).exp();
            points.push((m.clone(), pref));
        }
        // advance the odometer
        for i in 0..n {
            m[i] += 1;
            if m[i] <= bound {
                continue 'outer;
            }
            m[i] = -bound;
        }
        break;
    }
    points
}

/// θ(z) for an argument of the context's genus.
pub fn theta(z: &[Complex64], ctx: &ThetaContext) -> Complex64 {
    theta_with_direction(z, None, ctx).0
}

/// Directional derivative `Σ_j d_j ∂θ/∂z_j`.
pub fn theta_dir_deriv(z: &[Complex64], d: &[Complex64], ctx: &ThetaContext) -> Complex64 {
    theta_with_direction(z, Some(d), ctx).1
}

/// Shared evaluation: returns `(θ(z), Σ_j d_j ∂_j θ(z))` (derivative only
/// when a direction is supplied).
pub fn theta_with_direction(
    z: &[Complex64],
    d: Option<&[Complex64]>,
    ctx: &ThetaContext,
) -> (Complex64, Complex64) {
    let n = ctx.genus();
    assert_eq!(z.len(), n, "argument length must equal the genus");
    let i2pi = Complex64::new(0.0, 2.0 * std::f64::consts::PI);
    let ipi = Complex64::new(0.0, std::f64::consts::PI);
    let m0 = ctx.recenter(z);

    // θ(z) = exp(2πi⟨m₀,z⟩ + πi⟨m₀,τm₀⟩) · Θ(z + τm₀)
    let mut shift = vec![Complex64::new(0.0, 0.0); n];
    let mut m0z = Complex64::new(0.0, 0.0);
    let mut m0tm0 = Complex64::new(0.0, 0.0);
    for i in 0..n {
        m0z += Complex64::new(m0[i] as f64, 0.0) * z[i];
        for j in 0..n {
            shift[i] += ctx.tau[(i, j)] * (m0[j] as f64);
            m0tm0 += ctx.tau[(i, j)] * (m0[i] as f64) * (m0[j] as f64);
        }
    }
    let prefactor = (i2pi * m0z + ipi * m0tm0).exp();
    let zp: Vec<Complex64> = z.iter().zip(&shift).map(|(a, b)| a + b).collect();

    let mut sum = Complex64::new(0.0, 0.0);
    let mut dsum = Complex64::new(0.0, 0.0);
    for (m, pref) in &ctx.points {
        let mut mz = Complex64::new(0.0, 0.0);
        for i in 0..n {
            mz += Complex64::new(m[i] as f64, 0.0) * zp[i];
        }
        let term = pref * (i2pi * mz).exp();
        sum += term;
        if let Some(dir) = d {
            let mut md = Complex64::new(0.0, 0.0);
            for i in 0..n {
                md += dir[i] * (m[i] as f64);
            }
            dsum += term * i2pi * md;
        }
    }
    let value = prefactor * sum;
    let deriv = if let Some(dir) = d {
        let mut m0d = Complex64::new(0.0, 0.0);
        for i in 0..n {
            m0d += dir[i] * (m0[i] as f64);
        }
        prefactor * (i2pi * m0d * sum + dsum)
    } else {
        Complex64::new(0.0, 0.0)
    };
    (value, deriv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::theta1_brute;

    fn ctx1(im: f64) -> ThetaContext {
        let tau = DMatrix::from_row_slice(1, 1, &[Complex64::new(0.0, im)]);
        ThetaContext::new(tau).unwrap()
    }

    /// deterministic pseudo-random complex numbers
    fn rng_seq(seed: u64, count: usize) -> Vec<Complex64> {
        let mut state = seed.max(1);
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            let a = (state % 10_000) as f64 / 10_000.0 - 0.5;
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            let b = (state % 10_000) as f64 / 10_000.0 - 0.5;
            out.push(Complex64::new(2.0 * a, 1.5 * b));
        }
        out
    }

    #[test]
    fn matches_brute_force_at_tau_i() {
        let ctx = ctx1(1.0);
        let v = theta(&[Complex64::new(0.0, 0.0)], &ctx);
        let oracle = theta1_brute(Complex64::new(0.0, 0.0), Complex64::new(0.0, 1.0), 10);
        assert!((v - oracle).norm() < 1e-12 * oracle.norm());
    }

    #[test]
    fn parity() {
        let ctx = ctx1(0.8);
        for z in rng_seq(7, 100) {
            let a = theta(&[z], &ctx);
            let b = theta(&[-z], &ctx);
            assert!((a - b).norm() <= 1e-12 * a.norm().max(1e-300), "z = {z}");
        }
    }

    #[test]
    fn integer_periodicity() {
        let ctx = ctx1(1.3);
        for z in rng_seq(11, 20) {
            let a = theta(&[z], &ctx);
            let b = theta(&[z + Complex64::new(1.0, 0.0)], &ctx);
            assert!((a - b).norm() <= 1e-10 * a.norm());
        }
    }

    #[test]
    fn quasi_periodicity() {
        let ctx = ctx1(0.9);
        let tau = Complex64::new(0.0, 0.9);
        let i2pi = Complex64::new(0.0, 2.0 * std::f64::consts::PI);
        let ipi = Complex64::new(0.0, std::f64::consts::PI);
        for z in rng_seq(23, 20) {
            let lhs = theta(&[z + tau], &ctx);
            let rhs = (-i2pi * z - ipi * tau).exp() * theta(&[z], &ctx);
            assert!(
                (lhs - rhs).norm() <= 1e-10 * lhs.norm().max(1e-300),
                "z = {z}"
            );
        }
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let ctx = ctx1(1.1);
        let d = [Complex64::new(1.0, 0.0)];
        let h = 1e-6;
        for z in rng_seq(41, 20) {
            let deriv = theta_dir_deriv(&[z], &d, &ctx);
            let plus = theta(&[z + Complex64::new(h, 0.0)], &ctx);
            let minus = theta(&[z - Complex64::new(h, 0.0)], &ctx);
            let fd = (plus - minus) / Complex64::new(2.0 * h, 0.0);
            assert!((deriv - fd).norm() < 1e-7, "z = {z}");
        }
    }

    #[test]
    fn derivative_vanishes_at_origin_and_is_linear() {
        let ctx = ctx1(1.0);
        let d = [Complex64::new(0.7, 0.2)];
        let z = [Complex64::new(0.0, 0.0)];
        assert!(theta_dir_deriv(&z, &d, &ctx).norm() < 1e-14);
        let z = [Complex64::new(0.3, 0.1)];
        let d2: Vec<Complex64> = d.iter().map(|x| x * 2.0).collect();
        let a = theta_dir_deriv(&z, &d, &ctx);
        let b = theta_dir_deriv(&z, &d2, &ctx);
        assert!((b - a * 2.0).norm() < 1e-12 * a.norm());
    }

    #[test]
    fn genus2_matches_brute_force() {
        let t11 = Complex64::new(0.1, 1.0);
        let t12 = Complex64::new(0.05, 0.3);
        let t22 = Complex64::new(-0.2, 1.4);
        let tau = DMatrix::from_row_slice(2, 2, &[t11, t12, t12, t22]);
        let ctx = ThetaContext::new(tau).unwrap();
        let z = [Complex64::new(0.21, 0.13), Complex64::new(-0.4, 0.33)];
        let v = theta(&z, &ctx);
        let oracle = theta2_brute_local(z, [[t11, t12], [t12, t22]], 12);
        assert!((v - oracle).norm() < 1e-11 * oracle.norm());
    }

    fn theta2_brute_local(
        z: [Complex64; 2],
        tau: [[Complex64; 2]; 2],
        cutoff: i64,
    ) -> Complex64 {
        crate::oracles::theta2_brute(z, tau, cutoff)
    }

    #[test]
    fn tail_bound_is_honest() {
        let tau = DMatrix::from_row_slice(1, 1, &[Complex64::new(0.3, 0.7)]);
        let base = ThetaContext::new(tau.clone()).unwrap();
        let wide =
            ThetaContext::with_radius(tau, base.radius() * 2.0, DEFAULT_TOL).unwrap();
        for z in rng_seq(57, 20) {
            let a = theta(&[z], &base);
            let b = theta(&[z], &wide);
            assert!((a - b).norm() <= base.tail_bound() * a.norm().max(1e-300) * 10.0);
        }
    }

    #[test]
    fn insufficient_radius_reports_requirement() {
        let tau = DMatrix::from_row_slice(1, 1, &[Complex64::new(0.0, 1.0)]);
        match ThetaContext::with_radius(tau, 0.5, 1e-12) {
            Err(ThetaError::RadiusInsufficient { required, .. }) => {
                assert!(required > 0.5);
            }
            other => panic!("expected radius error, got {other:?}"),
        }
    }
}
