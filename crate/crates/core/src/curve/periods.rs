//! Period matrices of the holomorphic differentials `λ^{l−1} dλ/y`.
//!
//! The a-cycle around a cut is evaluated in its collapsed form: with
//! `λ(θ) = c + h cos θ` the two sides combine into a pure angle integral
//! against the remaining analytic factors of `y`. The b-cycle through cut
//! `j` and the last cut is an integral between the two nearest cut
//! endpoints, doubled; the cosine substitution absorbs the square-root
//! behaviour at both ends.

use super::geometry::{build_homology, plan_path, Cut};
use super::quad::{chebyshev_angle_sum, leg_integral, sqrt_leg_integral};
use super::ystd::{cut_factor, y_standard};
use super::{CurveError, CurveSpec, Tolerances};
use nalgebra::DMatrix;
use num_complex::Complex64;

/// Periods, normalization and cycle geometry of a curve.
#[derive(Debug, Clone)]
pub struct PeriodData {
    pub spec: CurveSpec,
    pub cuts: Vec<Cut>,
    /// a-periods of the raw differentials: `A[(k−1, j−1)] = ∮_{a_j} λ^{k−1} dλ/y`.
    pub a: DMatrix<Complex64>,
    /// b-periods, same layout.
    pub b: DMatrix<Complex64>,
    /// `C = A⁻¹`; rows normalize the differentials.
    pub c: DMatrix<Complex64>,
    /// Riemann matrix `τ = A⁻¹ B`, symmetric with positive-definite
    /// imaginary part.
    pub tau: DMatrix<Complex64>,
    /// 1-norm condition estimate of `A`.
    pub cond_a: f64,
    /// Base point of Abel maps: a branch point.
    pub base_point: Complex64,
    /// Set when the b-cycle orientations were flipped to make `Im τ`
    /// positive definite.
    pub flipped_b: bool,
    pub tolerances: Tolerances,
}

/// `∮_{a_j} f(λ)/y dλ` for `f` analytic near cut `j`, in the collapsed
/// form (counter-clockwise around the cut on sheet `+1`).
pub fn a_cycle_integral(
    cuts: &[Cut],
    j: usize,
    f: &dyn Fn(Complex64) -> Complex64,
    tol: &Tolerances,
) -> Result<Complex64, CurveError> {
    let cut = cuts[j];
    let c = cut.midpoint();
    let h = cut.half_width();
    let rest = |lam: Complex64| -> Complex64 {
        cuts.iter()
            .enumerate()
            .filter(|(i, _)| *i != j)
            .map(|(_, ci)| cut_factor(ci, lam))
            .product()
    };
    let val = chebyshev_angle_sum(
        &mut |theta| {
            let lam = c + h * Complex64::new(theta.cos(), 0.0);
            f(lam) / rest(lam)
        },
        tol,
    )?;
    Ok(Complex64::new(0.0, 2.0) * val)
}

/// Nearest pair of endpoints between two cuts.
fn nearest_endpoints(a: &Cut, b: &Cut) -> (Complex64, Complex64) {
    let mut best = (a.e1, b.e1);
    let mut dist = f64::INFINITY;
    for p in [a.e1, a.e2] {
        for q in [b.e1, b.e2] {
            let d = (p - q).norm();
            if d < dist {
                dist = d;
                best = (p, q);
            }
        }
    }
    best
}

/// One gap hop: `2 ∫ f/y` between the nearest endpoints of cuts `i` and
/// `i + 1` on sheet `+1` — the period of the elementary loop threading the
/// two neighbouring cuts.
fn hop_integral(
    spec: &CurveSpec,
    cuts: &[Cut],
    i: usize,
    f: &dyn Fn(Complex64) -> Complex64,
    tol: &Tolerances,
) -> Result<Complex64, CurveError> {
    let (ea, eb) = nearest_endpoints(&cuts[i], &cuts[i + 1]);
    let plan = plan_path(ea, eb, cuts, spec, tol)?;
    let integrand = |lam: Complex64| f(lam) / y_standard(cuts, lam);
    let val = if plan.waypoints.len() == 2 {
        // one straight leg between two branch points: cosine substitution
        let c = 0.5 * (ea + eb);
        let h = 0.5 * (eb - ea);
        chebyshev_angle_sum(
            &mut |theta| {
                let lam = c + h * Complex64::new(theta.cos(), 0.0);
                f(lam) * h * Complex64::new(theta.sin(), 0.0) / y_standard(cuts, lam)
            },
            tol,
        )?
    } else {
        let w = &plan.waypoints;
        let mut acc = sqrt_leg_integral(&mut |z| integrand(z), w[0], w[1], tol)?;
        for leg in 1..(w.len() - 2) {
            acc += leg_integral(&mut |z| integrand(z), w[leg], w[leg + 1], tol)?;
        }
        // final leg reversed so the substitution sits at the branch point
        acc -= sqrt_leg_integral(&mut |z| integrand(z), w[w.len() - 1], w[w.len() - 2], tol)?;
        acc
    };
    Ok(val * 2.0)
}

/// `∮_{b_j} f(λ)/y dλ` for the cycle through cut `j` and the last cut.
///
/// Elementary loops threading *consecutive* cuts are mutually disjoint;
/// their pairing with the a-cycles is `a_k ∘ hop_i = ±(δ_{ki} − δ_{k,i+1})`,
/// so the suffix sum over hops from `j` to the last cut is the canonical
/// partner of `a_j` (up to a global orientation fixed later by positivity
/// of `Im τ`).
pub fn b_cycle_integral(
    spec: &CurveSpec,
    cuts: &[Cut],
    j: usize,
    f: &dyn Fn(Complex64) -> Complex64,
    tol: &Tolerances,
) -> Result<Complex64, CurveError> {
    let mut acc = Complex64::new(0.0, 0.0);
    for i in j..(cuts.len() - 1) {
        acc += hop_integral(spec, cuts, i, f, tol)?;
    }
    Ok(acc)
}

/// Compute periods, the normalizing matrix and the Riemann matrix, and
/// verify their structural properties.
pub fn period_matrices(spec: &CurveSpec, tol: &Tolerances) -> Result<PeriodData, CurveError> {
    let cuts = build_homology(spec, tol)?;
    let n = spec.genus();
    let mut a = DMatrix::<Complex64>::zeros(n, n);
    let mut b = DMatrix::<Complex64>::zeros(n, n);
    for j in 0..n {
        for k in 1..=n {
            let f = move |lam: Complex64| lam.powu(k as u32 - 1);
            a[(k - 1, j)] = a_cycle_integral(&cuts, j, &f, tol)?;
            b[(k - 1, j)] = b_cycle_integral(spec, &cuts, j, &f, tol)?;
        }
    }
    let c = a
        .clone()
        .try_inverse()
        .ok_or_else(|| CurveError::SingularSystem("a-period matrix".into()))?;
    let cond_a = one_norm(&a) * one_norm(&c);
    if cond_a > tol.cond_cap {
        return Err(CurveError::IllConditioned(cond_a));
    }
    let mut tau = &c * &b;
    let mut flipped_b = false;
    let asym = symmetry_defect(&tau);
    let tau_scale = one_norm(&tau).max(1.0);
    if asym > tol.tau_symmetry * tau_scale * 1e2 {
        return Err(CurveError::TauAsymmetric(asym));
    }
    // orientation of the b-cycles: fixed by positivity of Im τ
    match im_definiteness(&tau) {
        Definiteness::Positive => {}
        Definiteness::Negative => {
            b = -b;
            tau = -tau;
            flipped_b = true;
        }
        Definiteness::Indefinite => return Err(CurveError::TauNotPositive),
    }
    // symmetrize the last floating-point dust
    let tau = (tau.clone() + tau.transpose()) * Complex64::new(0.5, 0.0);
    let base_point = cuts[0].e1;
    Ok(PeriodData {
        spec: spec.clone(),
        cuts,
        a,
        b,
        c,
        tau,
        cond_a,
        base_point,
        flipped_b,
        tolerances: tol.clone(),
    })
}

enum Definiteness {
    Positive,
    Negative,
    Indefinite,
}

fn im_definiteness(tau: &DMatrix<Complex64>) -> Definiteness {
    let n = tau.nrows();
    let im = DMatrix::<f64>::from_fn(n, n, |i, j| 0.5 * (tau[(i, j)].im + tau[(j, i)].im));
    let eig = im.symmetric_eigenvalues();
    if eig.iter().all(|&e| e > 0.0) {
        Definiteness::Positive
    } else if eig.iter().all(|&e| e < 0.0) {
        Definiteness::Negative
    } else {
        Definiteness::Indefinite
    }
}

fn one_norm(m: &DMatrix<Complex64>) -> f64 {
    (0..m.ncols())
        .map(|j| (0..m.nrows()).map(|i| m[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn symmetry_defect(m: &DMatrix<Complex64>) -> f64 {
    let mut d = 0.0f64;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            d = d.max((m[(i, j)] - m[(j, i)]).norm());
        }
    }
    d
}

impl PeriodData {
    pub fn genus(&self) -> usize {
        self.spec.genus()
    }

    /// Column `k` (1-based) of the normalizing matrix: the vector
    /// `(C_{1k}, …, C_{nk})`. Out-of-range indices yield zero, matching
    /// the convention that absent basis differentials contribute nothing.
    pub fn c_column(&self, k: i64) -> Vec<Complex64> {
        let n = self.genus();
        if k < 1 || k > n as i64 {
            return vec![Complex64::new(0.0, 0.0); n];
        }
        (0..n).map(|j| self.c[(j, k as usize - 1)]).collect()
    }

    /// Values of the normalized differentials `ω_j/dλ` at a point of the
    /// surface with the prescribed y-value.
    pub fn omega_rows(&self, lambda: Complex64, y: Complex64) -> Vec<Complex64> {
        let n = self.genus();
        let mut pw = Complex64::new(1.0, 0.0);
        let mut raw = Vec::with_capacity(n);
        for _ in 0..n {
            raw.push(pw / y);
            pw *= lambda;
        }
        (0..n)
            .map(|j| (0..n).map(|l| self.c[(j, l)] * raw[l]).sum())
            .collect()
    }

    /// Maximum defect of `∮_{a_k} ω_j = δ_{jk}` (re-evaluated from the
    /// stored cycles — a direct quality probe).
    pub fn normalization_defect(&self) -> Result<f64, CurveError> {
        let n = self.genus();
        let mut worst = 0.0f64;
        for k in 0..n {
            for j in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for l in 0..n {
                    let f = move |lam: Complex64| lam.powu(l as u32);
                    let per = a_cycle_integral(&self.cuts, k, &f, &self.tolerances)?;
                    acc += self.c[(j, l)] * per;
                }
                let expect = if j == k { 1.0 } else { 0.0 };
                worst = worst.max((acc - Complex64::new(expect, 0.0)).norm());
            }
        }
        Ok(worst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::elliptic_k;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn genus1_periods_match_elliptic_integrals() {
        // y² = (λ² − 1)(λ² − 1/k²): the cut-1 cycle integral of dλ/y has
        // modulus 2 k K'(k); the inter-cut integral has modulus 4 k K(k);
        // the Riemann matrix is 2i K/K'.
        let k = 0.6f64;
        let kk = elliptic_k(k);
        let kk_prime = elliptic_k((1.0 - k * k).sqrt());
        let spec = CurveSpec::new(vec![
            c(-1.0 / k, 0.0),
            c(-1.0, 0.0),
            c(1.0, 0.0),
            c(1.0 / k, 0.0),
        ])
        .unwrap();
        let pd = period_matrices(&spec, &Tolerances::default()).unwrap();
        let a11 = pd.a[(0, 0)];
        let b11 = pd.b[(0, 0)];
        assert!(
            (a11.norm() - 2.0 * k * kk_prime).abs() <= 1e-10 * a11.norm(),
            "a-period {} vs 2kK' {}",
            a11.norm(),
            2.0 * k * kk_prime
        );
        assert!(a11.re.abs() < 1e-10 * a11.norm(), "a-period should be imaginary");
        assert!(
            (b11.norm() - 4.0 * k * kk).abs() <= 1e-10 * b11.norm(),
            "b-period {} vs 4kK {}",
            b11.norm(),
            4.0 * k * kk
        );
        let tau = pd.tau[(0, 0)];
        let expect = c(0.0, 2.0 * kk / kk_prime);
        assert!(
            (tau - expect).norm() <= 1e-10 * expect.norm(),
            "tau {tau} vs {expect}"
        );
    }

    #[test]
    fn genus1_normalization() {
        let spec =
            CurveSpec::new(vec![c(-2.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)]).unwrap();
        let pd = period_matrices(&spec, &Tolerances::default()).unwrap();
        assert!(pd.normalization_defect().unwrap() < 1e-10);
        assert!(pd.tau[(0, 0)].im > 0.0);
    }

    #[test]
    fn genus2_riemann_matrix_structure() {
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
        let asym = (pd.tau[(0, 1)] - pd.tau[(1, 0)]).norm();
        assert!(asym < 1e-10, "asymmetry {asym}");
        let im = nalgebra::DMatrix::<f64>::from_fn(2, 2, |i, j| pd.tau[(i, j)].im);
        let eig = im.symmetric_eigenvalues();
        assert!(eig.iter().all(|&e| e > 0.0), "Im tau eigenvalues {eig:?}");
        assert!(pd.normalization_defect().unwrap() < 1e-10);
    }

    #[test]
    fn genus2_complex_branch_points() {
        let spec = CurveSpec::new(vec![
            c(-3.0, 0.3),
            c(-2.0, -0.2),
            c(-0.4, 0.5),
            c(0.5, 0.1),
            c(2.0, -0.4),
            c(3.0, 0.2),
        ])
        .unwrap();
        let pd = period_matrices(&spec, &Tolerances::default()).unwrap();
        let asym = (pd.tau[(0, 1)] - pd.tau[(1, 0)]).norm();
        assert!(asym < 1e-9, "asymmetry {asym}");
        let im = nalgebra::DMatrix::<f64>::from_fn(2, 2, |i, j| {
            0.5 * (pd.tau[(i, j)].im + pd.tau[(j, i)].im)
        });
        let eig = im.symmetric_eigenvalues();
        assert!(eig.iter().all(|&e| e > 0.0), "Im tau eigenvalues {eig:?}");
    }
}
