//! Abel–Jacobi coordinates of a divisor state: the componentwise sums of
//! Abel maps over each family, and the lattice unwrapping that turns
//! per-sample values into a continuous branch along a trajectory.

use super::{DubrovinError, EllipticState};
use crate::curve::{abel_map, PeriodData};
use num_complex::Complex64;

/// `(ρ⁽¹⁾, ρ⁽²⁾)`: sums of the Abel maps of all `n + 1` points of the μ-
/// and ν-family, along canonical paths from the base point.
pub fn abel_jacobi_coords(
    s: &EllipticState,
    pd: &PeriodData,
) -> Result<(Vec<Complex64>, Vec<Complex64>), DubrovinError> {
    let n = pd.genus();
    let mut rho1 = vec![Complex64::new(0.0, 0.0); n];
    let mut rho2 = vec![Complex64::new(0.0, 0.0); n];
    for p in &s.mu {
        let a = abel_map(*p, pd)?;
        for (acc, v) in rho1.iter_mut().zip(&a) {
            *acc += v;
        }
    }
    for p in &s.nu {
        let a = abel_map(*p, pd)?;
        for (acc, v) in rho2.iter_mut().zip(&a) {
            *acc += v;
        }
    }
    Ok((rho1, rho2))
}

/// Make a sampled sequence of Abel–Jacobi vectors continuous by removing
/// lattice jumps: each consecutive value may be shifted by an element of
/// `ℤⁿ + τℤⁿ`; the shift minimizing the jump is applied cumulatively.
/// Sampling must be dense enough that genuine motion between samples stays
/// well below the lattice scale.
pub fn unwrap_lattice_jumps(series: &mut [Vec<Complex64>], pd: &PeriodData) {
    let n = pd.genus();
    if n == 0 || series.len() < 2 {
        return;
    }
    let range = 2i64;
    let mut carry = vec![Complex64::new(0.0, 0.0); n];
    for idx in 1..series.len() {
        for (v, c) in series[idx].iter_mut().zip(&carry) {
            *v += c;
        }
        let prev = series[idx - 1].clone();
        let curr = series[idx].clone();
        let mut best_shift = vec![Complex64::new(0.0, 0.0); n];
        let mut best = jump_norm(&curr, &prev, &best_shift);
        // enumerate small lattice vectors m1 + τ m2
        let mut m1 = vec![-range; n];
        let mut m2 = vec![-range; n];
        loop {
            let shift = lattice_vector(&m1, &m2, pd);
            let d = jump_norm(&curr, &prev, &shift);
            if d < best {
                best = d;
                best_shift = shift;
            }
            if !advance(&mut m1, &mut m2, range) {
                break;
            }
        }
        if best_shift.iter().any(|s| s.norm() > 0.0) {
            for (v, s) in series[idx].iter_mut().zip(&best_shift) {
                *v += s;
            }
            for (c, s) in carry.iter_mut().zip(&best_shift) {
                *c += s;
            }
        }
    }
}

fn lattice_vector(m1: &[i64], m2: &[i64], pd: &PeriodData) -> Vec<Complex64> {
    let n = m1.len();
    (0..n)
        .map(|j| {
            let mut v = Complex64::new(m1[j] as f64, 0.0);
            for (k, &mk) in m2.iter().enumerate() {
                v += pd.tau[(j, k)] * (mk as f64);
            }
            v
        })
        .collect()
}

fn jump_norm(curr: &[Complex64], prev: &[Complex64], shift: &[Complex64]) -> f64 {
    curr.iter()
        .zip(prev)
        .zip(shift)
        .map(|((c, p), s)| (c + s - p).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

fn advance(m1: &mut [i64], m2: &mut [i64], range: i64) -> bool {
    for slot in m1.iter_mut().chain(m2.iter_mut()) {
        *slot += 1;
        if *slot <= range {
            return true;
        }
        *slot = -range;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{period_matrices, CurveSpec, SurfacePoint, Tolerances};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn base_divisor_maps_to_zero() {
        let spec =
            CurveSpec::new(vec![c(-2.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)]).unwrap();
        let pd = period_matrices(&spec, &Tolerances::default()).unwrap();
        let s = EllipticState::new(
            vec![
                SurfacePoint::new(pd.base_point, 1),
                SurfacePoint::new(pd.base_point, 1),
            ],
            vec![
                SurfacePoint::new(pd.base_point, 1),
                SurfacePoint::new(pd.base_point, 1),
            ],
        );
        let (r1, r2) = abel_jacobi_coords(&s, &pd).unwrap();
        assert!(r1[0].norm() < 1e-10);
        assert!(r2[0].norm() < 1e-10);
    }

    #[test]
    fn unwrap_removes_an_inserted_jump() {
        let spec =
            CurveSpec::new(vec![c(-2.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)]).unwrap();
        let pd = period_matrices(&spec, &Tolerances::default()).unwrap();
        let tau = pd.tau[(0, 0)];
        let mut series: Vec<Vec<Complex64>> = (0..10)
            .map(|i| vec![Complex64::new(0.01 * i as f64, 0.0)])
            .collect();
        // corrupt the tail by a lattice vector
        for v in series.iter_mut().skip(6) {
            v[0] += Complex64::new(1.0, 0.0) + tau;
        }
        unwrap_lattice_jumps(&mut series, &pd);
        for (i, v) in series.iter().enumerate() {
            assert!(
                (v[0] - Complex64::new(0.01 * i as f64, 0.0)).norm() < 1e-12,
                "sample {i}"
            );
        }
    }
}
