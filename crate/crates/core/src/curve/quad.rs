//! Quadrature primitives: Gauss–Legendre panels with node doubling, the
//! cosine substitution that absorbs inverse-square-root endpoints, and the
//! square-root substitution for legs leaving a branch point.

use super::{CurveError, Tolerances};
use num_complex::Complex64;
use std::cell::RefCell;
use std::collections::HashMap;

thread_local! {
    static GL_CACHE: RefCell<HashMap<usize, (Vec<f64>, Vec<f64>)>> = RefCell::new(HashMap::new());
}

/// Gauss–Legendre nodes and weights on [−1, 1], by Newton iteration on the
/// Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    GL_CACHE.with(|cache| {
        if let Some(p) = cache.borrow().get(&n) {
            return p.clone();
        }
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, dp) = legendre_pair(n, x);
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-15 {
                    break;
                }
            }
            let (_, dp) = legendre_pair(n, x);
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        let out = (nodes, weights);
        cache.borrow_mut().insert(n, out.clone());
        out
    })
}

fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let pk = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = pk;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

fn gl_sum(f: &mut dyn FnMut(f64) -> Complex64, a: f64, b: f64, n: usize) -> Complex64 {
    let (nodes, weights) = gauss_legendre(n);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = Complex64::new(0.0, 0.0);
    for (x, w) in nodes.iter().zip(&weights) {
        acc += f(mid + half * x) * w;
    }
    acc * half
}

/// Adaptive Gauss–Legendre on a real parameter interval: double the node
/// count until two successive results agree to the relative target.
pub fn integrate_adaptive(
    f: &mut dyn FnMut(f64) -> Complex64,
    a: f64,
    b: f64,
    tol: &Tolerances,
) -> Result<Complex64, CurveError> {
    let mut n = 16;
    let mut prev = gl_sum(f, a, b, n);
    while n <= tol.quad_max_nodes {
        n *= 2;
        let next = gl_sum(f, a, b, n);
        let err = (next - prev).norm();
        if err <= tol.quad_rel * (1.0 + next.norm()) {
            return Ok(next);
        }
        prev = next;
    }
    Err(CurveError::QuadratureStalled(format!(
        "interval [{a}, {b}] still moving at {} nodes",
        tol.quad_max_nodes
    )))
}

/// Straight-leg integral `∫_a^b f(λ) dλ` for an integrand analytic on the
/// leg.
pub fn leg_integral(
    f: &mut dyn FnMut(Complex64) -> Complex64,
    a: Complex64,
    b: Complex64,
    tol: &Tolerances,
) -> Result<Complex64, CurveError> {
    let dir = b - a;
    integrate_adaptive(
        &mut |t| f(a + dir * Complex64::new(t, 0.0)) * dir,
        0.0,
        1.0,
        tol,
    )
}

/// Leg leaving a square-root singularity at `a`: substitute
/// `λ = a + (b − a) t²`, which makes `f·dλ` analytic when
/// `f ~ C/√(λ − a)`.
pub fn sqrt_leg_integral(
    f: &mut dyn FnMut(Complex64) -> Complex64,
    a: Complex64,
    b: Complex64,
    tol: &Tolerances,
) -> Result<Complex64, CurveError> {
    let dir = b - a;
    integrate_adaptive(
        &mut |t| f(a + dir * Complex64::new(t * t, 0.0)) * dir * Complex64::new(2.0 * t, 0.0),
        0.0,
        1.0,
        tol,
    )
}

/// Chebyshev-angle sum `∫_0^π g(θ) dθ ≈ (π/N) Σ g(θ_m)` at the midpoint
/// angles, doubled adaptively. Spectrally accurate for integrands with an
/// even, smooth periodic extension — exactly what the cosine substitution
/// produces on cycle and inter-cut integrals.
pub fn chebyshev_angle_sum(
    g: &mut dyn FnMut(f64) -> Complex64,
    tol: &Tolerances,
) -> Result<Complex64, CurveError> {
    let eval = |g: &mut dyn FnMut(f64) -> Complex64, n: usize| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for m in 0..n {
            let theta = (2.0 * m as f64 + 1.0) * std::f64::consts::PI / (2.0 * n as f64);
            acc += g(theta);
        }
        acc * (std::f64::consts::PI / n as f64)
    };
    let mut n = 16;
    let mut prev = eval(g, n);
    while n <= tol.quad_max_nodes {
        n *= 2;
        let next = eval(g, n);
        if (next - prev).norm() <= tol.quad_rel * (1.0 + next.norm()) {
            return Ok(next);
        }
        prev = next;
    }
    Err(CurveError::QuadratureStalled(format!(
        "angle sum still moving at {} nodes",
        tol.quad_max_nodes
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl_integrates_polynomials_exactly() {
        // ∫_0^1 x^5 dx = 1/6 with 3 nodes (degree ≤ 5 exact)
        let s = gl_sum(&mut |x| Complex64::new(x.powi(5), 0.0), 0.0, 1.0, 3);
        assert!((s.re - 1.0 / 6.0).abs() < 1e-14);
    }

    #[test]
    fn adaptive_matches_analytic() {
        let tol = Tolerances::default();
        let v = integrate_adaptive(&mut |x| Complex64::new(x.exp(), 0.0), 0.0, 1.0, &tol).unwrap();
        assert!((v.re - (1f64.exp() - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn sqrt_leg_absorbs_endpoint_singularity() {
        // ∫_0^1 dx/√x = 2
        let tol = Tolerances::default();
        let a = Complex64::new(0.0, 0.0);
        let b = Complex64::new(1.0, 0.0);
        let v = sqrt_leg_integral(&mut |z| 1.0 / z.sqrt(), a, b, &tol).unwrap();
        assert!((v.re - 2.0).abs() < 1e-12);
    }

    #[test]
    fn chebyshev_angle_rule() {
        // ∫_0^π cos²θ dθ = π/2
        let tol = Tolerances::default();
        let v = chebyshev_angle_sum(&mut |t| Complex64::new(t.cos() * t.cos(), 0.0), &tol).unwrap();
        assert!((v.re - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }
}
