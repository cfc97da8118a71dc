//! Normalized Abelian differentials of the third kind with simple poles of
//! residue `+1` and `−1` at a prescribed pair of surface points.
//!
//! The differential is assembled as
//!
//! ```text
//! ω⁽³⁾ = [ (y + y_ν)/(λ − λ_ν) − (y + y_μ)/(λ − λ_μ) ] dλ/(2y)
//!        + p(λ) dλ/y,          deg p = n − 1,
//! ```
//!
//! where `y_ν`, `y_μ` are the y-coordinates of the poles and the
//! polynomial `p` is fixed by the vanishing of all a-periods. The leading
//! coefficient of `p` enters the field-reconstruction formulas.

use super::abel::abel_map_infinity;
use super::periods::{a_cycle_integral, PeriodData};
use super::quad::{integrate_adaptive, leg_integral, sqrt_leg_integral};
use super::ystd::{sheet_of, sqrt_r, y_standard};
use super::{CurveError, SurfacePoint};
use crate::numeric::{circle_residue, poly_eval, poly_roots};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Labels of the two points at infinity: at `Plus` the branch behaves as
/// `y ~ −λ^{n+1}` (our sheet −1), at `Minus` as `y ~ +λ^{n+1}` (sheet +1).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InfinityEnd {
    Plus,
    Minus,
}

impl InfinityEnd {
    pub fn sheet(self) -> i8 {
        match self {
            InfinityEnd::Plus => -1,
            InfinityEnd::Minus => 1,
        }
    }
}

/// Third-kind differential data for one pole pair.
#[derive(Debug, Clone)]
pub struct ThirdKindData {
    /// pole with residue `+1`
    pub nu_pole: SurfacePoint,
    /// pole with residue `−1`
    pub mu_pole: SurfacePoint,
    /// y-coordinates of the two poles
    pub y_nu: Complex64,
    pub y_mu: Complex64,
    /// coefficients of `p(λ)` (ascending); `gamma_top = p`'s leading one
    pub poly: Vec<Complex64>,
    /// roots of `p` together with the leading coefficient: the constants
    /// `(γ₁, …, γ_{n−1}; γ_n)`
    pub gamma: Vec<Complex64>,
    pub gamma_top: Complex64,
    /// normalization constants of the integral at the two infinities
    pub omega0_plus: Complex64,
    pub omega0_minus: Complex64,
    /// diagnostics: numerically recomputed residues and the worst a-period
    pub residue_nu: Complex64,
    pub residue_mu: Complex64,
    pub a_period_defect: f64,
}

impl ThirdKindData {
    pub fn omega0(&self, end: InfinityEnd) -> Complex64 {
        match end {
            InfinityEnd::Plus => self.omega0_plus,
            InfinityEnd::Minus => self.omega0_minus,
        }
    }

    /// Half-difference of the pole base points, the `M` entering the
    /// expansion of the integral at infinity.
    pub fn m_constant(&self) -> Complex64 {
        0.5 * (self.mu_pole.lambda - self.nu_pole.lambda)
    }

    /// Value of the differential (coefficient of dλ) at a point of the
    /// surface with explicit y.
    pub fn eval(&self, lambda: Complex64, y: Complex64) -> Complex64 {
        let main = ((y + self.y_nu) / (lambda - self.nu_pole.lambda)
            - (y + self.y_mu) / (lambda - self.mu_pole.lambda))
            / (y * 2.0);
        main + poly_eval(&self.poly, lambda) / y
    }
}

/// Construct the normalized third-kind differential for the pole pair
/// `(ν̂, μ̂)` with residues `(+1, −1)`.
pub fn third_kind(
    nu: SurfacePoint,
    mu: SurfacePoint,
    pd: &PeriodData,
) -> Result<ThirdKindData, CurveError> {
    let tol = pd.tolerances.clone();
    let n = pd.genus();
    let spec = &pd.spec;
    let scale = spec.scale();
    if (nu.lambda - mu.lambda).norm() < 1e-12 * scale && nu.sheet == mu.sheet {
        return Err(CurveError::InvalidSpec(
            "third-kind poles must be distinct".into(),
        ));
    }
    let y_nu = sqrt_r(spec, &pd.cuts, nu);
    let y_mu = sqrt_r(spec, &pd.cuts, mu);

    // a-periods of the main part: the y-free piece integrates to zero
    // around a collapsed cut; the remaining pieces are cycle integrals of
    // analytic functions against 1/y.
    let mut rhs = DVector::<Complex64>::zeros(n);
    for j in 0..n {
        let fnu = |lam: Complex64| y_nu * 0.5 / (lam - nu.lambda);
        let fmu = |lam: Complex64| y_mu * 0.5 / (lam - mu.lambda);
        let val = a_cycle_integral(&pd.cuts, j, &fnu, &tol)?
            - a_cycle_integral(&pd.cuts, j, &fmu, &tol)?;
        rhs[j] = -val;
    }
    // Σ_i p_i ∮_{a_j} λ^i/y = rhs_j
    let m = DMatrix::<Complex64>::from_fn(n, n, |j, i| pd.a[(i, j)]);
    let poly = m
        .lu()
        .solve(&rhs)
        .ok_or_else(|| CurveError::SingularSystem("third-kind normalization".into()))?;
    let poly: Vec<Complex64> = poly.iter().cloned().collect();
    let gamma_top = poly.last().cloned().unwrap_or_default();
    let mut gamma = poly_roots(&poly);
    gamma.push(gamma_top);

    let data_wo_omega = ThirdKindData {
        nu_pole: nu,
        mu_pole: mu,
        y_nu,
        y_mu,
        poly: poly.clone(),
        gamma,
        gamma_top,
        omega0_plus: Complex64::new(0.0, 0.0),
        omega0_minus: Complex64::new(0.0, 0.0),
        residue_nu: Complex64::new(0.0, 0.0),
        residue_mu: Complex64::new(0.0, 0.0),
        a_period_defect: 0.0,
    };

    // diagnostics: residues by small-circle quadrature
    let residue_at = |p: SurfacePoint, yp: Complex64| -> Result<Complex64, CurveError> {
        let mut r = scale;
        for e in spec.branch_points() {
            r = r.min(0.4 * (p.lambda - e).norm());
        }
        let other = if (p.lambda - nu.lambda).norm() > 0.0 && p.lambda != nu.lambda {
            nu.lambda
        } else {
            mu.lambda
        };
        r = r.min(0.4 * (p.lambda - other).norm().max(1e-6 * scale));
        for cut in &pd.cuts {
            let d = super::geometry::segment_distance(p.lambda, p.lambda, cut.e1, cut.e2);
            if d > 0.0 {
                r = r.min(0.8 * d);
            }
        }
        if r <= 0.0 || !r.is_finite() {
            return Err(CurveError::OnCut(p.lambda));
        }
        let s = sheet_of(&pd.cuts, p.lambda, yp).ok_or(CurveError::OnCut(p.lambda))?;
        let sf = if s >= 0 { 1.0 } else { -1.0 };
        let f = |lam: Complex64| {
            let y = y_standard(&pd.cuts, lam) * sf;
            data_wo_omega.eval(lam, y)
        };
        Ok(circle_residue(&f, p.lambda, r, 256))
    };
    let residue_nu = residue_at(nu, y_nu)?;
    let residue_mu = residue_at(mu, y_mu)?;

    // diagnostics: recomputed a-periods of the assembled differential
    let mut defect = 0.0f64;
    for j in 0..n {
        let fnu = |lam: Complex64| y_nu * 0.5 / (lam - nu.lambda);
        let fmu = |lam: Complex64| y_mu * 0.5 / (lam - mu.lambda);
        let fp = |lam: Complex64| poly_eval(&poly, lam);
        let total = a_cycle_integral(&pd.cuts, j, &fnu, &tol)?
            - a_cycle_integral(&pd.cuts, j, &fmu, &tol)?
            + a_cycle_integral(&pd.cuts, j, &fp, &tol)?;
        defect = defect.max(total.norm());
    }

    // normalization constants at the two infinities
    let omega0_plus = omega0_at_infinity(&data_wo_omega, pd, InfinityEnd::Plus)?;
    let omega0_minus = omega0_at_infinity(&data_wo_omega, pd, InfinityEnd::Minus)?;

    Ok(ThirdKindData {
        omega0_plus,
        omega0_minus,
        residue_nu,
        residue_mu,
        a_period_defect: defect,
        ..data_wo_omega
    })
}

/// Deterministic staging point whose ray to infinity clears the cut system
/// and the two poles.
fn staging_point(pd: &PeriodData, tk: &ThirdKindData) -> Complex64 {
    let scale = pd.spec.scale();
    let mut best = Complex64::new(3.0 * scale, 0.0);
    let mut best_clearance = f64::NEG_INFINITY;
    for k in 0..32 {
        let angle = 2.0 * std::f64::consts::PI * k as f64 / 32.0;
        let dir = Complex64::new(angle.cos(), angle.sin());
        let candidate = dir * 3.0 * scale;
        let clearance = pd
            .cuts
            .iter()
            .flat_map(|c| [c.e1, c.e2])
            .chain([tk.nu_pole.lambda, tk.mu_pole.lambda])
            .map(|e| (candidate - e).norm())
            .fold(f64::INFINITY, f64::min);
        if clearance > best_clearance + 1e-12 {
            best_clearance = clearance;
            best = candidate;
        }
    }
    best
}

/// `ω₀ = lim_{P → P_∞} ∫_{P₀}^{P} ω⁽³⁾` along the canonical path.
fn omega0_at_infinity(
    tk: &ThirdKindData,
    pd: &PeriodData,
    end: InfinityEnd,
) -> Result<Complex64, CurveError> {
    let tol = pd.tolerances.clone();
    let spec = &pd.spec;
    let n = pd.genus();
    let sheet = end.sheet();
    let sf = if sheet >= 0 { 1.0 } else { -1.0 };
    let lam_s = staging_point(pd, tk);
    let plan = super::geometry::plan_path(pd.base_point, lam_s, &pd.cuts, spec, &tol)?;
    let integrand = |lam: Complex64| {
        let y = y_standard(&pd.cuts, lam) * sf;
        tk.eval(lam, y)
    };
    let mut near = Complex64::new(0.0, 0.0);
    for (idx, (a, b)) in plan.legs().enumerate() {
        near += if idx == 0 {
            sqrt_leg_integral(&mut { integrand }, a, b, &tol)?
        } else {
            leg_integral(&mut { integrand }, a, b, &tol)?
        };
    }

    // far part in ζ = 1/λ, where the two pole terms cancel to an analytic
    // integrand down to ζ = 0
    let zeta_s = Complex64::new(1.0, 0.0) / lam_s;
    let g = |zeta: Complex64| -> Complex64 {
        spec.branch_points()
            .iter()
            .map(|e| (Complex64::new(1.0, 0.0) - e * zeta).sqrt())
            .product()
    };
    let lam_nu = tk.nu_pole.lambda;
    let lam_mu = tk.mu_pole.lambda;
    let f_zeta = |zeta: Complex64| -> Complex64 {
        let gz = g(zeta);
        let a = tk.y_nu * sf / gz;
        let b = tk.y_mu * sf / gz;
        let one = Complex64::new(1.0, 0.0);
        let dnu = one - lam_nu * zeta;
        let dmu = one - lam_mu * zeta;
        let zn = zeta.powu(n as u32);
        let main = -0.5 * ((lam_nu - lam_mu) + zn * (a * dmu - b * dnu)) / (dnu * dmu);
        let mut gp = Complex64::new(0.0, 0.0);
        for (i, d) in tk.poly.iter().enumerate() {
            gp += d * zeta.powu((n - 1 - i) as u32);
        }
        main - gp * sf / gz
    };
    let far = -integrate_adaptive(
        &mut |t| f_zeta(zeta_s * Complex64::new(t, 0.0)) * zeta_s,
        0.0,
        1.0,
        &tol,
    )?;
    Ok(near + far)
}

/// The Abel image of an infinity end, with the sheet mapped through the
/// labeling convention.
pub fn abel_at_infinity_end(
    end: InfinityEnd,
    pd: &PeriodData,
) -> Result<Vec<Complex64>, CurveError> {
    abel_map_infinity(end.sheet(), pd)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::periods::period_matrices;
    use crate::curve::{CurveSpec, Tolerances};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn genus1() -> PeriodData {
        let spec =
            CurveSpec::new(vec![c(-2.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)]).unwrap();
        period_matrices(&spec, &Tolerances::default()).unwrap()
    }

    #[test]
    fn residues_and_periods() {
        let pd = genus1();
        let nu = SurfacePoint::new(c(0.4, 0.6), 1);
        let mu = SurfacePoint::new(c(2.8, -0.4), -1);
        let tk = third_kind(nu, mu, &pd).unwrap();
        assert!(
            (tk.residue_nu - c(1.0, 0.0)).norm() < 1e-8,
            "residue at the + pole: {}",
            tk.residue_nu
        );
        assert!(
            (tk.residue_mu + c(1.0, 0.0)).norm() < 1e-8,
            "residue at the − pole: {}",
            tk.residue_mu
        );
        assert!(tk.a_period_defect < 1e-9, "a-periods {}", tk.a_period_defect);
    }

    #[test]
    fn zeta_expansion_slope() {
        // the integral up to a large finite point, evaluated by direct
        // path quadrature, must match ω₀ + (M ± γ_n)ζ to second order
        let pd = genus1();
        let nu = SurfacePoint::new(c(0.3, 0.5), 1);
        let mu = SurfacePoint::new(c(-0.2, 0.8), -1);
        let tk = third_kind(nu, mu, &pd).unwrap();
        let tol = pd.tolerances.clone();
        let lam_s = staging_point(&pd, &tk);
        let lam_big = lam_s * 200.0;
        let zeta0 = Complex64::new(1.0, 0.0) / lam_big;
        for end in [InfinityEnd::Plus, InfinityEnd::Minus] {
            let sf = if end.sheet() >= 0 { 1.0 } else { -1.0 };
            let integrand = |lam: Complex64| {
                let y = y_standard(&pd.cuts, lam) * sf;
                tk.eval(lam, y)
            };
            let plan =
                super::super::geometry::plan_path(pd.base_point, lam_s, &pd.cuts, &pd.spec, &tol)
                    .unwrap();
            let mut direct = Complex64::new(0.0, 0.0);
            for (idx, (a, b)) in plan.legs().enumerate() {
                direct += if idx == 0 {
                    sqrt_leg_integral(&mut { integrand }, a, b, &tol).unwrap()
                } else {
                    leg_integral(&mut { integrand }, a, b, &tol).unwrap()
                };
            }
            direct += leg_integral(&mut { integrand }, lam_s, lam_big, &tol).unwrap();
            let sign = if end == InfinityEnd::Plus { 1.0 } else { -1.0 };
            let slope = tk.m_constant() + tk.gamma_top * sign;
            let expect = tk.omega0(end) + slope * zeta0;
            assert!(
                (direct - expect).norm() < 1e-6,
                "end {end:?}: direct {direct} vs expansion {expect}"
            );
        }
    }
}
