//! The vector of Riemann constants for the base point at a branch point,
//!
//! ```text
//! K_j = (1 + τ_jj)/2 − Σ_{k≠j} ∮_{a_k} ω_k(P) ∫_{P₀}^{P} ω_j ,
//! ```
//!
//! evaluated by nested quadrature: the outer cycle integral walks both
//! sides of the collapsed cut while the inner Abel integral is continued
//! along the loop. On the collapsed contour the two sides combine so that
//! only the corner value and the half-period survive; the closed corner
//! form is kept as a cross-check in the tests.

use super::abel::abel_map;
use super::periods::PeriodData;
use super::quad::integrate_adaptive;
use super::ystd::cut_factor;
use super::{CurveError, SurfacePoint};
use num_complex::Complex64;

/// Nested-quadrature evaluation of the Riemann constants.
pub fn riemann_constants(pd: &PeriodData) -> Result<Vec<Complex64>, CurveError> {
    riemann_constants_with_nodes(pd, 64)
}

/// Same, with an explicit outer node count (the self-convergence tests
/// re-run with doubled nodes).
pub fn riemann_constants_with_nodes(
    pd: &PeriodData,
    outer_nodes: usize,
) -> Result<Vec<Complex64>, CurveError> {
    let n = pd.genus();
    let tol = pd.tolerances.clone();
    let mut k_vec = Vec::with_capacity(n);

    // Abel value at the outer loop's starting corner of each cut
    let corners: Vec<Complex64> = pd.cuts.iter().map(|c| c.e2).collect();
    let mut corner_abel: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for corner in corners.iter().take(n) {
        corner_abel.push(abel_map(SurfacePoint::new(*corner, 1), pd)?);
    }

    for j in 0..n {
        let mut acc = Complex64::new(0.5, 0.0) * (Complex64::new(1.0, 0.0) + pd.tau[(j, j)]);
        for k in 0..n {
            if k == j {
                continue;
            }
            acc -= nested_cycle_product(pd, k, j, &corner_abel[k], outer_nodes, &tol)?;
        }
        k_vec.push(acc);
    }
    Ok(k_vec)
}

/// `∮_{a_k} ω_k(P) · 𝒜_j(P)` with the Abel integral continued around the
/// collapsed loop: the upper leg carries `A₀ + φ(θ)`, the lower leg
/// `A₀ + 2φ(π) − φ(θ)`, where `φ` is the cumulative inner integral along
/// the cut and `A₀` the Abel value at the starting corner.
fn nested_cycle_product(
    pd: &PeriodData,
    k: usize,
    j: usize,
    corner_abel: &[Complex64],
    outer_nodes: usize,
    tol: &super::Tolerances,
) -> Result<Complex64, CurveError> {
    let cut = pd.cuts[k];
    let c = cut.midpoint();
    let h = cut.half_width();
    let n = pd.genus();
    let rest = |lam: Complex64| -> Complex64 {
        pd.cuts
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != k)
            .map(|(_, ci)| cut_factor(ci, lam))
            .product()
    };
    // dθ-integrand of a normalized differential along the upper leg
    let g_of = |row: usize, theta: f64| -> Complex64 {
        let lam = c + h * Complex64::new(theta.cos(), 0.0);
        let mut pw = Complex64::new(1.0, 0.0);
        let mut acc = Complex64::new(0.0, 0.0);
        for l in 0..n {
            acc += pd.c[(row, l)] * pw;
            pw *= lam;
        }
        Complex64::new(0.0, 1.0) * acc / rest(lam)
    };

    // cumulative inner integral φ_j at the outer angles
    let thetas: Vec<f64> = (0..outer_nodes)
        .map(|m| (2.0 * m as f64 + 1.0) * std::f64::consts::PI / (2.0 * outer_nodes as f64))
        .collect();
    let mut phi = Vec::with_capacity(outer_nodes);
    let mut acc = Complex64::new(0.0, 0.0);
    let mut prev = 0.0f64;
    for &t in &thetas {
        acc += integrate_adaptive(&mut |x| g_of(j, x), prev, t, tol)?;
        phi.push(acc);
        prev = t;
    }
    let phi_pi = acc + integrate_adaptive(&mut |x| g_of(j, x), prev, std::f64::consts::PI, tol)?;

    let a0 = corner_abel[j];
    let weight = std::f64::consts::PI / outer_nodes as f64;
    let mut total = Complex64::new(0.0, 0.0);
    for (m, &t) in thetas.iter().enumerate() {
        let gk = g_of(k, t);
        let upper = a0 + phi[m];
        let lower = a0 + phi_pi * 2.0 - phi[m];
        total += gk * (upper + lower);
    }
    Ok(total * weight)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::periods::period_matrices;
    use crate::curve::{CurveSpec, Tolerances};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn genus1_closed_form() {
        let spec =
            CurveSpec::new(vec![c(-2.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)]).unwrap();
        let pd = period_matrices(&spec, &Tolerances::default()).unwrap();
        let k = riemann_constants(&pd).unwrap();
        let expect = (Complex64::new(1.0, 0.0) + pd.tau[(0, 0)]) * 0.5;
        assert!((k[0] - expect).norm() < 1e-12);
    }

    #[test]
    fn nested_quadrature_is_stable_and_matches_corner_form() {
        let spec = CurveSpec::new(vec![
            c(-3.0, 0.0),
            c(-2.0, 0.0),
            c(-0.5, 0.0),
            c(0.5, 0.0),
            c(2.0, 0.0),
            c(3.0, 0.0),
        ])
        .unwrap();
        let pd = period_matrices(&spec, &Tolerances::default()).unwrap();
        let k64 = riemann_constants_with_nodes(&pd, 64).unwrap();
        let k128 = riemann_constants_with_nodes(&pd, 128).unwrap();
        for j in 0..2 {
            assert!((k64[j] - k128[j]).norm() < 1e-8, "node doubling at {j}");
        }
        // corner form: K_j = (1 + τ_jj)/2 − Σ_{k≠j} 𝒜_j(corner_k)
        for j in 0..2 {
            let mut expect =
                (Complex64::new(1.0, 0.0) + pd.tau[(j, j)]) * Complex64::new(0.5, 0.0);
            for k in 0..2 {
                if k == j {
                    continue;
                }
                let a = abel_map(SurfacePoint::new(pd.cuts[k].e2, 1), &pd).unwrap();
                expect -= a[j];
            }
            assert!(
                (k64[j] - expect).norm() < 1e-9,
                "nested {} vs corner {}",
                k64[j],
                expect
            );
        }
    }
}
