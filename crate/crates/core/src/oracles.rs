//! Independent reference computations used by the test suites: complete
//! elliptic integrals through the arithmetic–geometric mean, a brute-force
//! theta lattice sum, and a fixed-step Euler integrator. None of these
//! share code with the production paths they check.

use num_complex::Complex64;

/// Arithmetic–geometric mean of two positive reals.
pub fn agm(mut a: f64, mut b: f64) -> f64 {
    assert!(a > 0.0 && b > 0.0);
    for _ in 0..64 {
        let (an, bn) = (0.5 * (a + b), (a * b).sqrt());
        if (an - bn).abs() <= 1e-17 * an {
            return an;
        }
        a = an;
        b = bn;
    }
    0.5 * (a + b)
}

/// Complete elliptic integral of the first kind, `K(k)` with modulus `k`.
pub fn elliptic_k(k: f64) -> f64 {
    assert!((0.0..1.0).contains(&k));
    std::f64::consts::FRAC_PI_2 / agm(1.0, (1.0 - k * k).sqrt())
}

/// Brute-force genus-1 theta sum `Σ_{|m| ≤ cutoff} exp(2πi m z + πi m² τ)`.
pub fn theta1_brute(z: Complex64, tau: Complex64, cutoff: i64) -> Complex64 {
    let i2pi = Complex64::new(0.0, 2.0 * std::f64::consts::PI);
    let ipi = Complex64::new(0.0, std::f64::consts::PI);
    let mut acc = Complex64::new(0.0, 0.0);
    for m in -cutoff..=cutoff {
        let mf = m as f64;
        acc += (i2pi * mf * z + ipi * mf * mf * tau).exp();
    }
    acc
}

/// Brute-force genus-2 theta sum over the box `|m_i| ≤ cutoff`.
pub fn theta2_brute(z: [Complex64; 2], tau: [[Complex64; 2]; 2], cutoff: i64) -> Complex64 {
    let i2pi = Complex64::new(0.0, 2.0 * std::f64::consts::PI);
    let ipi = Complex64::new(0.0, std::f64::consts::PI);
    let mut acc = Complex64::new(0.0, 0.0);
    for m1 in -cutoff..=cutoff {
        for m2 in -cutoff..=cutoff {
            let m = [m1 as f64, m2 as f64];
            let mz = z[0] * m[0] + z[1] * m[1];
            let mtm = tau[0][0] * m[0] * m[0]
                + (tau[0][1] + tau[1][0]) * m[0] * m[1]
                + tau[1][1] * m[1] * m[1];
            acc += (i2pi * mz + ipi * mtm).exp();
        }
    }
    acc
}

/// Fixed-step explicit Euler on a complex first-order system.
pub fn euler_integrate<F>(mut state: Vec<Complex64>, t0: f64, t1: f64, steps: usize, f: F) -> Vec<Complex64>
where
    F: Fn(f64, &[Complex64]) -> Vec<Complex64>,
{
    let h = (t1 - t0) / steps as f64;
    let mut t = t0;
    for _ in 0..steps {
        let d = f(t, &state);
        for (s, di) in state.iter_mut().zip(&d) {
            *s += di * h;
        }
        t += h;
    }
    state
}
