//! Right-hand sides of the divisor flows.
//!
//! The x-flow moves each point with speed proportional to its own lift
//! over the separations from its family; in the higher flows the speed is
//! weighted by a polynomial assembled from the β-constants and the
//! elementary symmetric functions of the family — the potentials cancel
//! identically in that combination, so the system closes over the divisor
//! alone.

use super::{DubrovinError, LiftedState};
use crate::curve::series::series_c;
use crate::curve::{CurveSpec, PeriodData};
use num_complex::Complex64;

/// Which coordinate the divisor is flowing in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlowKind {
    X,
    /// the m-th hierarchy time
    T,
}

/// Constants attached to one higher flow on one curve.
#[derive(Debug, Clone)]
pub struct FlowSpec {
    pub m: usize,
    /// `α_l = c_l(Λ)` for l = 0..m
    pub alphas: Vec<Complex64>,
    /// `β_{−1}..β_{m−1}` (index shifted by one)
    pub betas: Vec<Complex64>,
}

impl FlowSpec {
    /// Flow constants for the m-th time on the given curve.
    pub fn for_curve(m: usize, pd: &PeriodData) -> Result<Self, DubrovinError> {
        let genus = pd.genus();
        if m > genus + 1 {
            return Err(DubrovinError::FlowIndexTooLarge { m, genus });
        }
        let lams: Vec<Complex64> = pd.spec.branch_points().to_vec();
        let alphas: Vec<Complex64> = (0..=m as i64).map(|l| series_c(l, &lams)).collect();
        let betas = beta_coeffs(&alphas, m);
        Ok(FlowSpec { m, alphas, betas })
    }
}

/// `β₋₁ = 1, βₖ = −Σ_{j=0}^{k} α_j β_{k−1−j}`; returns `β₋₁..β_{kmax−1}`
/// (entry `[i]` holds `β_{i−1}`).
pub fn beta_coeffs(alphas: &[Complex64], kmax: usize) -> Vec<Complex64> {
    let mut betas = vec![Complex64::new(1.0, 0.0)];
    for k in 0..kmax {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..=k {
            // β_{k−1−j} sits at index (k−1−j)+1 = k−j
            acc -= alphas[j] * betas[k - j];
        }
        betas.push(acc);
    }
    betas
}

/// Elementary symmetric functions `e_0..e_{points}` of a family.
fn elementary_symmetric(vals: &[Complex64]) -> Vec<Complex64> {
    let mut e = vec![Complex64::new(0.0, 0.0); vals.len() + 1];
    e[0] = Complex64::new(1.0, 0.0);
    for (count, v) in vals.iter().enumerate() {
        for k in (1..=count + 1).rev() {
            let lower = e[k - 1];
            e[k] += lower * v;
        }
    }
    e
}

/// The reduced time-Lax polynomial `V(λ) = Σ_{k=−1}^{m−1} V_k λ^{m−k}`
/// with `V_k = Σ_{j=0}^{k+1} β_{j−1} S_{k−j}` and
/// `S_l = (−1)^{l+1} e_{l+1}` of the family (the potential prefactor is
/// already cancelled).
fn reduced_v_coeffs(family: &[Complex64], betas: &[Complex64], m: usize) -> Vec<Complex64> {
    let e = elementary_symmetric(family);
    let s = |l: i64| -> Complex64 {
        // S_{−1} = 1; S_l = (−1)^{l+1} e_{l+1}; 0 beyond the family size
        if l < -1 {
            return Complex64::new(0.0, 0.0);
        }
        let idx = (l + 1) as usize;
        if idx >= e.len() {
            return Complex64::new(0.0, 0.0);
        }
        let sign = if (l + 1) % 2 == 0 { 1.0 } else { -1.0 };
        // (−1)^{l+1}: even l+1 → +, odd → −
        e[idx] * sign
    };
    // coefficients indexed k = −1..m−1, stored at [k+1]
    (0..=m)
        .map(|ki| {
            let k = ki as i64 - 1;
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..=(k + 1) {
                acc += betas[j as usize] * s(k - j);
            }
            acc
        })
        .collect()
}

fn eval_reduced_v(coeffs: &[Complex64], m: usize, lambda: Complex64) -> Complex64 {
    // Σ_{k=−1}^{m−1} V_k λ^{m−k}: powers λ^{m+1} down to λ^1
    let mut acc = Complex64::new(0.0, 0.0);
    for (ki, v) in coeffs.iter().enumerate() {
        let k = ki as i64 - 1;
        acc += v * lambda.powu((m as i64 - k) as u32);
    }
    acc
}

fn check_collisions(
    family: &[Complex64],
    which: &'static str,
    spec: &CurveSpec,
    margin: f64,
) -> Result<(), DubrovinError> {
    for (i, a) in family.iter().enumerate() {
        for b in family.iter().skip(i + 1) {
            let sep = (a - b).norm();
            if sep < margin {
                return Err(DubrovinError::Collision {
                    which,
                    a: *a,
                    b: *b,
                    sep,
                });
            }
        }
        for e in spec.branch_points() {
            let sep = (a - e).norm();
            if sep < margin {
                return Err(DubrovinError::Collision {
                    which,
                    a: *a,
                    b: *e,
                    sep,
                });
            }
        }
    }
    Ok(())
}

/// Derivative of the packed state under the x-flow.
pub(crate) fn lifted_x_rhs(
    s: &LiftedState,
    pd: &PeriodData,
    margin: f64,
) -> Result<LiftedState, DubrovinError> {
    lifted_rhs_common(s, pd, margin, None)
}

/// Derivative of the packed state under the m-th time flow.
pub(crate) fn lifted_t_rhs(
    s: &LiftedState,
    pd: &PeriodData,
    spec: &FlowSpec,
    margin: f64,
) -> Result<LiftedState, DubrovinError> {
    lifted_rhs_common(s, pd, margin, Some(spec))
}

fn lifted_rhs_common(
    s: &LiftedState,
    pd: &PeriodData,
    margin: f64,
    tspec: Option<&FlowSpec>,
) -> Result<LiftedState, DubrovinError> {
    let spec = &pd.spec;
    check_collisions(&s.mu, "mu", spec, margin)?;
    check_collisions(&s.nu, "nu", spec, margin)?;
    let n = pd.genus();
    let points = s.mu.len();

    let weight_mu: Vec<Complex64> = match tspec {
        None => s.mu.iter().map(|lam| lam * 2.0).collect(),
        Some(f) => {
            let coeffs = reduced_v_coeffs(&s.mu, &f.betas, f.m);
            s.mu
                .iter()
                .map(|lam| eval_reduced_v(&coeffs, f.m, *lam) * 2.0)
                .collect()
        }
    };
    let weight_nu: Vec<Complex64> = match tspec {
        None => s.nu.iter().map(|lam| lam * 2.0).collect(),
        Some(f) => {
            let coeffs = reduced_v_coeffs(&s.nu, &f.betas, f.m);
            s.nu
                .iter()
                .map(|lam| eval_reduced_v(&coeffs, f.m, *lam) * 2.0)
                .collect()
        }
    };

    let sep_product = |family: &[Complex64], k: usize| -> Complex64 {
        family
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != k)
            .map(|(_, lj)| family[k] - lj)
            .product()
    };

    let mut dmu = Vec::with_capacity(points);
    let mut dg = Vec::with_capacity(points);
    for k in 0..points {
        let d = weight_mu[k] * s.g[k] / sep_product(&s.mu, k);
        // dg = R'(μ)/(2g) · dμ along the curve
        dg.push(spec.r_prime(s.mu[k]) * d / (s.g[k] * 2.0));
        dmu.push(d);
    }
    let mut dnu = Vec::with_capacity(points);
    let mut dh = Vec::with_capacity(points);
    for k in 0..points {
        let d = -weight_nu[k] * s.h[k] / sep_product(&s.nu, k);
        dh.push(spec.r_prime(s.nu[k]) * d / (s.h[k] * 2.0));
        dnu.push(d);
    }

    // Abel increments of the first n points: ω_j = Σ_l C_{jl} λ^{l−1}/y
    let mut drho1 = vec![Complex64::new(0.0, 0.0); n];
    let mut drho2 = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..n {
        let y_mu = -s.g[k];
        let rows_mu = pd.omega_rows(s.mu[k], y_mu);
        let y_nu = s.h[k];
        let rows_nu = pd.omega_rows(s.nu[k], y_nu);
        for j in 0..n {
            drho1[j] += rows_mu[j] * dmu[k];
            drho2[j] += rows_nu[j] * dnu[k];
        }
    }

    Ok(LiftedState {
        mu: dmu,
        g: dg,
        nu: dnu,
        h: dh,
        rho1: drho1,
        rho2: drho2,
    })
}

/// Public x-flow right-hand side on a divisor state: the derivative
/// vectors `(μ̇, ν̇)`.
pub fn x_flow_rhs(
    s: &super::EllipticState,
    pd: &PeriodData,
    margin: f64,
) -> Result<(Vec<Complex64>, Vec<Complex64>), DubrovinError> {
    let lifted = LiftedState::from_state(s, &pd.spec, &pd.cuts, pd.genus())?;
    let d = lifted_x_rhs(&lifted, pd, margin)?;
    Ok((d.mu, d.nu))
}

/// Public time-flow right-hand side on a divisor state.
pub fn t_flow_rhs(
    s: &super::EllipticState,
    pd: &PeriodData,
    spec: &FlowSpec,
    margin: f64,
) -> Result<(Vec<Complex64>, Vec<Complex64>), DubrovinError> {
    let lifted = LiftedState::from_state(s, &pd.spec, &pd.cuts, pd.genus())?;
    let d = lifted_t_rhs(&lifted, pd, spec, margin)?;
    Ok((d.mu, d.nu))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{period_matrices, CurveSpec, SurfacePoint, Tolerances};
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn genus1_pd() -> PeriodData {
        let spec =
            CurveSpec::new(vec![c(-2.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)]).unwrap();
        period_matrices(&spec, &Tolerances::default()).unwrap()
    }

    fn demo_state() -> super::super::EllipticState {
        super::super::EllipticState::new(
            vec![
                SurfacePoint::new(c(0.3, 0.45), 1),
                SurfacePoint::new(c(0.3, -0.45), -1),
            ],
            vec![
                SurfacePoint::new(c(-0.2, 0.5), -1),
                SurfacePoint::new(c(2.6, 0.1), 1),
            ],
        )
    }

    #[test]
    fn beta_recursion_values() {
        let a0 = c(0.3, -0.1);
        let a1 = c(-0.7, 0.2);
        let a2 = c(0.11, 0.05);
        let betas = beta_coeffs(&[a0, a1, a2], 3);
        assert_eq!(betas[0], c(1.0, 0.0));
        assert!((betas[1] + a0).norm() < 1e-15); // β₀ = −α₀
        assert!((betas[2] - (a0 * a0 - a1)).norm() < 1e-14); // β₁ = α₀² − α₁
        // defining convolution re-checked
        for k in 0..=2usize {
            let mut acc = betas[k + 1];
            for j in 0..=k {
                acc += [a0, a1, a2][j] * betas[k - j];
            }
            assert!(acc.norm() < 1e-14, "k = {k}");
        }
    }

    #[test]
    fn sheet_flip_negates_x_velocity() {
        let pd = genus1_pd();
        let s = demo_state();
        let (dmu, _) = x_flow_rhs(&s, &pd, 1e-9).unwrap();
        let mut flipped = s.clone();
        flipped.mu[0] = flipped.mu[0].conjugate_sheet();
        let (dmu_f, _) = x_flow_rhs(&flipped, &pd, 1e-9).unwrap();
        assert!((dmu[0] + dmu_f[0]).norm() < 1e-12 * dmu[0].norm());
        assert!((dmu[1] - dmu_f[1]).norm() < 1e-12 * dmu[1].norm());
    }

    #[test]
    fn first_time_flow_at_m_zero_reduces_to_x_flow() {
        let pd = genus1_pd();
        let s = demo_state();
        let spec0 = FlowSpec::for_curve(0, &pd).unwrap();
        let (dx_mu, dx_nu) = x_flow_rhs(&s, &pd, 1e-9).unwrap();
        let (dt_mu, dt_nu) = t_flow_rhs(&s, &pd, &spec0, 1e-9).unwrap();
        for k in 0..2 {
            assert!((dx_mu[k] - dt_mu[k]).norm() < 1e-12 * dx_mu[k].norm().max(1e-10));
            assert!((dx_nu[k] - dt_nu[k]).norm() < 1e-12 * dx_nu[k].norm().max(1e-10));
        }
    }

    #[test]
    fn collision_is_reported() {
        let pd = genus1_pd();
        let mut s = demo_state();
        s.mu[1] = SurfacePoint::new(s.mu[0].lambda + c(1e-9, 0.0), 1);
        match x_flow_rhs(&s, &pd, 1e-6) {
            Err(DubrovinError::Collision { which: "mu", .. }) => {}
            other => panic!("expected collision, got {other:?}"),
        }
    }

    #[test]
    fn branch_point_velocity_vanishes() {
        // a point exactly at a branch point has zero lift, hence zero speed;
        // bypass the collision guard with a zero margin
        let pd = genus1_pd();
        let mut s = demo_state();
        s.mu[0] = SurfacePoint::new(c(1.0, 0.0), 1);
        let (dmu, _) = x_flow_rhs(&s, &pd, 0.0).unwrap();
        assert!(dmu[0].norm() < 1e-12);
    }
}
