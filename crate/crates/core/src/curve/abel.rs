//! Abel maps: integrals of the normalized differentials from the base
//! branch point to a surface point, including the two points at infinity.

use super::geometry::plan_path;
use super::periods::PeriodData;
use super::quad::{chebyshev_angle_sum, integrate_adaptive, leg_integral, sqrt_leg_integral};
use super::series::series_chat;
use super::ystd::y_standard;
use super::{CurveError, SurfacePoint, Tolerances};
use nalgebra::DMatrix;
use num_complex::Complex64;

/// Raw path integrals `∫ λ^{l−1} dλ / y_std` for l = 1..n along a planned
/// polyline from `from` to `to`; `singular_start` marks a branch point at
/// the start (square-root substitution on the first leg).
fn raw_path_integrals(
    pd: &PeriodData,
    from: Complex64,
    to: Complex64,
    singular_start: bool,
    tol: &Tolerances,
) -> Result<Vec<Complex64>, CurveError> {
    let n = pd.genus();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    let scale = pd.spec.scale();
    if (from - to).norm() <= 1e-15 * scale {
        return Ok(out);
    }
    let singular_end = pd
        .spec
        .branch_points()
        .iter()
        .any(|e| (e - to).norm() < 1e-12 * scale);
    let plan = plan_path(from, to, &pd.cuts, &pd.spec, tol)?;
    let legs = plan.waypoints.len() - 1;
    for (idx, (a, b)) in plan.legs().enumerate() {
        let sing_a = idx == 0 && singular_start;
        let sing_b = idx == legs - 1 && singular_end;
        for (l, slot) in out.iter_mut().enumerate() {
            let f = |lam: Complex64| lam.powu(l as u32) / y_standard(&pd.cuts, lam);
            let val = match (sing_a, sing_b) {
                (true, true) => {
                    // both ends at branch points: cosine substitution
                    let c = 0.5 * (a + b);
                    let h = 0.5 * (b - a);
                    chebyshev_angle_sum(
                        &mut |theta| {
                            let lam = c + h * Complex64::new(theta.cos(), 0.0);
                            lam.powu(l as u32) * h * Complex64::new(theta.sin(), 0.0)
                                / y_standard(&pd.cuts, lam)
                        },
                        tol,
                    )?
                }
                (true, false) => sqrt_leg_integral(&mut { f }, a, b, tol)?,
                (false, true) => -sqrt_leg_integral(&mut { f }, b, a, tol)?,
                (false, false) => leg_integral(&mut { f }, a, b, tol)?,
            };
            *slot += val;
        }
    }
    Ok(out)
}

fn normalize(pd: &PeriodData, raw: &[Complex64], sheet: i8) -> Vec<Complex64> {
    let n = pd.genus();
    let s = if sheet >= 0 { 1.0 } else { -1.0 };
    (0..n)
        .map(|j| {
            (0..n)
                .map(|l| pd.c[(j, l)] * raw[l])
                .sum::<Complex64>()
                * s
        })
        .collect()
}

/// Abel map `𝒜(P) = ∫_{P₀}^{P} ω` along the canonical path from the base
/// branch point, as a vector in ℂⁿ (no lattice reduction).
pub fn abel_map(p: SurfacePoint, pd: &PeriodData) -> Result<Vec<Complex64>, CurveError> {
    abel_map_with(p, pd, pd.base_point)
}

/// Abel map with an explicit starting point (used by divisor bookkeeping;
/// `from` must be a branch point for the square-root substitution to be
/// valid).
///
/// Targets close to a branch point are routed *through* that branch point:
/// both partial paths then end at square-root singularities the
/// substitutions absorb exactly, and the short final leg carries the
/// requested sheet while the long leg stays on the standard one.
pub fn abel_map_with(
    p: SurfacePoint,
    pd: &PeriodData,
    from: Complex64,
) -> Result<Vec<Complex64>, CurveError> {
    let tol = pd.tolerances.clone();
    let scale = pd.spec.scale();
    let near = pd
        .spec
        .branch_points()
        .iter()
        .copied()
        .min_by(|a, b| {
            (a - p.lambda)
                .norm()
                .partial_cmp(&(b - p.lambda).norm())
                .unwrap()
        })
        .expect("curve has branch points");
    let near_dist = (near - p.lambda).norm();
    if near_dist > 1e-13 * scale && near_dist < 0.08 * scale {
        let raw_head = raw_path_integrals(pd, from, near, true, &tol)?;
        let raw_tail = raw_path_integrals(pd, near, p.lambda, true, &tol)?;
        let head = normalize(pd, &raw_head, 1);
        let tail = normalize(pd, &raw_tail, p.sheet);
        return Ok(head.iter().zip(&tail).map(|(a, b)| a + b).collect());
    }
    let raw = raw_path_integrals(pd, from, p.lambda, true, &tol)?;
    Ok(normalize(pd, &raw, p.sheet))
}

/// Deterministic staging point on a ray that clears the cut system.
fn staging_point(pd: &PeriodData) -> Complex64 {
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
            .map(|e| (candidate - e).norm())
            .fold(f64::INFINITY, f64::min);
        if clearance > best_clearance + 1e-12 {
            best_clearance = clearance;
            best = candidate;
        }
    }
    best
}

/// Abel map of a point at infinity: integrate to a staging radius, then in
/// the local coordinate ζ = 1/λ down to the truncation radius, and close
/// with the series tail of the expansion of `R^{−1/2}`.
pub fn abel_map_infinity(sheet: i8, pd: &PeriodData) -> Result<Vec<Complex64>, CurveError> {
    let tol = pd.tolerances.clone();
    let n = pd.genus();
    let scale = pd.spec.scale();
    let lam_s = staging_point(pd);
    let mut raw = raw_path_integrals(pd, pd.base_point, lam_s, true, &tol)?;

    // far part: ∫_{λ_s}^{∞} λ^{l−1} dλ/y_std = ∫_0^{ζ_s} ζ^{n−l} dζ / g(ζ),
    // g(ζ) = ∏ √(1 − λ_j ζ) (principal branches, all factors near 1)
    let zeta_s = Complex64::new(1.0, 0.0) / lam_s;
    let zeta_trunc = zeta_s * Complex64::new(lam_s.norm() / (1.0e6 * scale), 0.0);
    let g = |zeta: Complex64| -> Complex64 {
        pd.spec
            .branch_points()
            .iter()
            .map(|e| (Complex64::new(1.0, 0.0) - e * zeta).sqrt())
            .product()
    };
    for l in 1..=n {
        let power = (n - l) as u32;
        let f = |t: f64| -> Complex64 {
            let zeta = zeta_trunc + (zeta_s - zeta_trunc) * Complex64::new(t, 0.0);
            zeta.powu(power) / g(zeta) * (zeta_s - zeta_trunc)
        };
        let mid = integrate_adaptive(&mut { f }, 0.0, 1.0, &tol)?;
        // series tail on [0, ζ_trunc]
        let lams: Vec<Complex64> = pd.spec.branch_points().to_vec();
        let mut tail = Complex64::new(0.0, 0.0);
        let mut last_term_norm = f64::INFINITY;
        for m in 0..24i64 {
            let chat = series_chat(m - 1, &lams);
            let expo = (n as i64 - l as i64 + m + 1) as u32;
            let term = chat * zeta_trunc.powu(expo) / (expo as f64);
            tail += term;
            last_term_norm = term.norm();
            if last_term_norm <= 1e-30 + tol.quad_rel * tail.norm() {
                break;
            }
        }
        if last_term_norm > 1e3 * tol.quad_rel * (tail.norm() + 1.0) {
            return Err(CurveError::TailTruncation(last_term_norm));
        }
        raw[l - 1] += mid + tail;
    }
    Ok(normalize(pd, &raw, sheet))
}

/// Reduce a vector modulo the lattice `ℤⁿ + τℤⁿ`, returning the reduced
/// representative and the integer parts removed.
pub fn lattice_reduce(
    z: &[Complex64],
    tau: &DMatrix<Complex64>,
) -> (Vec<Complex64>, Vec<i64>, Vec<i64>) {
    let n = z.len();
    let im_tau = DMatrix::<f64>::from_fn(n, n, |i, j| tau[(i, j)].im);
    let im_z = nalgebra::DVector::<f64>::from_fn(n, |i, _| z[i].im);
    let m2 = im_tau
        .clone()
        .lu()
        .solve(&im_z)
        .map(|v| v.iter().map(|x| x.round() as i64).collect::<Vec<_>>())
        .unwrap_or_else(|| vec![0; n]);
    let mut reduced: Vec<Complex64> = z.to_vec();
    for (j, r) in reduced.iter_mut().enumerate() {
        for (k, &mk) in m2.iter().enumerate() {
            *r -= tau[(j, k)] * (mk as f64);
        }
    }
    let m1: Vec<i64> = reduced.iter().map(|r| r.re.round() as i64).collect();
    for (r, &mk) in reduced.iter_mut().zip(&m1) {
        *r -= Complex64::new(mk as f64, 0.0);
    }
    (reduced, m1, m2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::periods::period_matrices;
    use crate::curve::CurveSpec;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn genus1() -> PeriodData {
        let spec =
            CurveSpec::new(vec![c(-2.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)]).unwrap();
        period_matrices(&spec, &Tolerances::default()).unwrap()
    }

    #[test]
    fn base_point_maps_to_zero() {
        let pd = genus1();
        let z = abel_map(SurfacePoint::new(pd.base_point, 1), &pd).unwrap();
        assert!(z[0].norm() < 1e-10);
    }

    #[test]
    fn sheet_involution_negates() {
        let pd = genus1();
        let p = SurfacePoint::new(c(0.3, 0.4), 1);
        let zp = abel_map(p, &pd).unwrap();
        let zm = abel_map(p.conjugate_sheet(), &pd).unwrap();
        assert!((zp[0] + zm[0]).norm() < 1e-10);
    }

    #[test]
    fn infinity_map_consistent_with_direct_quadrature() {
        let pd = genus1();
        // independent route: straight ray real-axis from base through the gap
        // is blocked; use a vertical escape through +i∞ direction by brute
        // force: integrate base -> 5i -> 40i and add an estimated tail by
        // Richardson: compare only to moderate accuracy.
        let z_inf = abel_map_infinity(1, &pd).unwrap();
        // oracle: Abel map to a very distant point approximates the limit
        let far = abel_map(SurfacePoint::new(c(0.0, 4.0e4), 1), &pd).unwrap();
        assert!(
            (z_inf[0] - far[0]).norm() < 5e-5,
            "Abel map at infinity {} vs distant point {}",
            z_inf[0],
            far[0]
        );
    }
}
