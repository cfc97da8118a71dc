//! Motion of the auxiliary divisor: the coupled ODE systems for the zeros
//! of the off-diagonal Lax entries in `x` and in the higher times, their
//! adaptive integration with branch continuation, and the Abel–Jacobi
//! coordinates along trajectories.

mod flow;
mod jacobi;
mod rk;

pub use flow::{beta_coeffs, t_flow_rhs, x_flow_rhs, FlowKind, FlowSpec};
pub use jacobi::{abel_jacobi_coords, unwrap_lattice_jumps};
pub use rk::{integrate_flow, FlowOptions, Trajectory, TrajectorySample};

use crate::curve::{sheet_of, sqrt_r, CurveSpec, Cut, SurfacePoint};
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DubrovinError {
    #[error("divisor points too close at {which} (separation {sep:.3e}): {a} and {b}")]
    Collision {
        which: &'static str,
        a: Complex64,
        b: Complex64,
        sep: f64,
    },
    #[error("step size underflow at coordinate {0}")]
    StepFloor(f64),
    #[error("flow index {m} exceeds the supported range for genus {genus}")]
    FlowIndexTooLarge { m: usize, genus: usize },
    #[error("state has {got} points per family, genus {genus} needs {need}")]
    WrongSize {
        got: usize,
        genus: usize,
        need: usize,
    },
    #[error("point left the curve: |y² − R| = {0:.3e}")]
    OffCurve(f64),
    #[error("sheet is ambiguous at {0} (point on a cut)")]
    SheetAmbiguous(Complex64),
    #[error(transparent)]
    Curve(#[from] crate::curve::CurveError),
}

/// Divisor state: the `n + 1` lifted points of each family, stamped with
/// the coordinates at which they were sampled.
#[derive(Debug, Clone)]
pub struct EllipticState {
    pub mu: Vec<SurfacePoint>,
    pub nu: Vec<SurfacePoint>,
    pub x: f64,
    pub t: f64,
}

impl EllipticState {
    pub fn new(mu: Vec<SurfacePoint>, nu: Vec<SurfacePoint>) -> Self {
        EllipticState {
            mu,
            nu,
            x: 0.0,
            t: 0.0,
        }
    }

    /// Pairwise separations and branch-point distances of both families;
    /// used for the collision guard.
    pub fn min_separation(&self, spec: &CurveSpec) -> f64 {
        let mut best = f64::INFINITY;
        for family in [&self.mu, &self.nu] {
            for (i, p) in family.iter().enumerate() {
                for q in family.iter().skip(i + 1) {
                    best = best.min((p.lambda - q.lambda).norm());
                }
                for e in spec.branch_points() {
                    best = best.min((p.lambda - e).norm());
                }
            }
        }
        best
    }
}

/// Internal phase-space representation carrying explicit lift values:
/// `g_k` is the y-coordinate of the ν-style lift at `ν_k` and the negated
/// y-coordinate at `μ_k`, i.e. the common interpolation value of the
/// diagonal Lax entry at the divisor points.
#[derive(Debug, Clone)]
pub(crate) struct LiftedState {
    pub mu: Vec<Complex64>,
    /// `g[k]` with `y(μ̂_k) = −g[k]`
    pub g: Vec<Complex64>,
    pub nu: Vec<Complex64>,
    /// `h[k]` with `y(ν̂_k) = +h[k]`
    pub h: Vec<Complex64>,
    /// accumulated Abel increments of the first `n` points per family
    pub rho1: Vec<Complex64>,
    pub rho2: Vec<Complex64>,
}

impl LiftedState {
    pub fn from_state(
        s: &EllipticState,
        spec: &CurveSpec,
        cuts: &[Cut],
        genus: usize,
    ) -> Result<Self, DubrovinError> {
        let need = genus + 1;
        if s.mu.len() != need || s.nu.len() != need {
            return Err(DubrovinError::WrongSize {
                got: s.mu.len().min(s.nu.len()),
                genus,
                need,
            });
        }
        let g = s
            .mu
            .iter()
            .map(|p| -sqrt_r(spec, cuts, *p))
            .collect();
        let h = s.nu.iter().map(|p| sqrt_r(spec, cuts, *p)).collect();
        Ok(LiftedState {
            mu: s.mu.iter().map(|p| p.lambda).collect(),
            g,
            nu: s.nu.iter().map(|p| p.lambda).collect(),
            h,
            rho1: vec![Complex64::new(0.0, 0.0); genus],
            rho2: vec![Complex64::new(0.0, 0.0); genus],
        })
    }

    pub fn to_state(
        &self,
        cuts: &[Cut],
        x: f64,
        t: f64,
    ) -> Result<EllipticState, DubrovinError> {
        let mu = self
            .mu
            .iter()
            .zip(&self.g)
            .map(|(lam, g)| {
                let y = -g;
                sheet_of(cuts, *lam, y)
                    .map(|s| SurfacePoint::new(*lam, s))
                    .ok_or(DubrovinError::SheetAmbiguous(*lam))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let nu = self
            .nu
            .iter()
            .zip(&self.h)
            .map(|(lam, h)| {
                sheet_of(cuts, *lam, *h)
                    .map(|s| SurfacePoint::new(*lam, s))
                    .ok_or(DubrovinError::SheetAmbiguous(*lam))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(EllipticState { mu, nu, x, t })
    }

    /// Flatten to a complex vector for the integrator.
    pub fn pack(&self) -> Vec<Complex64> {
        let mut v = Vec::with_capacity(2 * (self.mu.len() + self.nu.len()) + 2 * self.rho1.len());
        v.extend_from_slice(&self.mu);
        v.extend_from_slice(&self.g);
        v.extend_from_slice(&self.nu);
        v.extend_from_slice(&self.h);
        v.extend_from_slice(&self.rho1);
        v.extend_from_slice(&self.rho2);
        v
    }

    pub fn unpack(v: &[Complex64], points: usize, genus: usize) -> Self {
        let mut it = v.iter().cloned();
        let take = |it: &mut dyn Iterator<Item = Complex64>, n: usize| -> Vec<Complex64> {
            it.take(n).collect()
        };
        let mu = take(&mut it, points);
        let g = take(&mut it, points);
        let nu = take(&mut it, points);
        let h = take(&mut it, points);
        let rho1 = take(&mut it, genus);
        let rho2 = take(&mut it, genus);
        LiftedState {
            mu,
            g,
            nu,
            h,
            rho1,
            rho2,
        }
    }
}
