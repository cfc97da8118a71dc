//! Small shared numeric helpers: complex polynomial evaluation, deflation
//! and root finding (Durand–Kerner), trapezoid circle integrals.

use num_complex::Complex64;

/// Evaluate `Σ coeffs[i] λ^i` (ascending order).
pub fn poly_eval(coeffs: &[Complex64], lambda: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        acc = acc * lambda + c;
    }
    acc
}

/// Divide the polynomial by `(λ − root)`, returning the quotient and the
/// remainder.
pub fn deflate(coeffs: &[Complex64], root: Complex64) -> (Vec<Complex64>, Complex64) {
    let n = coeffs.len();
    if n == 0 {
        return (vec![], Complex64::new(0.0, 0.0));
    }
    let mut quotient = vec![Complex64::new(0.0, 0.0); n - 1];
    let mut carry = Complex64::new(0.0, 0.0);
    for i in (0..n).rev() {
        let v = coeffs[i] + carry * root;
        if i == 0 {
            return (quotient, v);
        }
        quotient[i - 1] = v;
        carry = v;
    }
    unreachable!()
}

/// All roots of a complex polynomial (ascending coefficients, exact degree
/// = `coeffs.len() − 1` with a nonzero leading coefficient) by the
/// Durand–Kerner iteration with deterministic starting values.
pub fn poly_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let deg = coeffs.len().saturating_sub(1);
    if deg == 0 {
        return vec![];
    }
    let lead = coeffs[deg];
    let monic: Vec<Complex64> = coeffs.iter().map(|c| c / lead).collect();
    let radius = 1.0
        + monic
            .iter()
            .take(deg)
            .map(|c| c.norm())
            .fold(0.0f64, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..deg)
        .map(|k| seed.powu(k as u32 + 1) * radius)
        .collect();
    for _ in 0..400 {
        let mut moved = 0.0f64;
        for i in 0..deg {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..deg {
                if j != i {
                    denom *= roots[i] - roots[j];
                }
            }
            let delta = poly_eval(&monic, roots[i]) / denom;
            roots[i] -= delta;
            moved = moved.max(delta.norm());
        }
        if moved < 1e-14 * radius {
            break;
        }
    }
    roots
}

/// `(1/2πi) ∮ f dλ` over the circle of given center and radius, by the
/// trapezoid rule (spectrally accurate for analytic integrands).
pub fn circle_residue(
    f: &dyn Fn(Complex64) -> Complex64,
    center: Complex64,
    radius: f64,
    nodes: usize,
) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..nodes {
        let t = 2.0 * std::f64::consts::PI * k as f64 / nodes as f64;
        let dir = Complex64::new(t.cos(), t.sin());
        let lam = center + dir * radius;
        // dλ = i r e^{it} dt; 1/(2πi) ∮ f dλ = (r/2π) ∫ f e^{it} dt
        acc += f(lam) * dir;
    }
    acc * radius / nodes as f64
}
