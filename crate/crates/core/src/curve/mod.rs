//! Numerical geometry of the hyperelliptic curve `y² = R(λ) = ∏(λ − λ_j)`
//! with `2n + 2` branch points: branch tracking of the square root,
//! homology cycles, period matrices, Abel maps, third-kind differentials
//! and the vector of Riemann constants.

mod abel;
pub(crate) mod geometry;
mod periods;
pub(crate) mod quad;
mod rconst;
pub mod series;
mod thirdkind;
mod ystd;

pub use abel::{abel_map, abel_map_infinity, abel_map_with, lattice_reduce};
pub use geometry::{build_homology, plan_path, segment_distance, Cut, PathPlan};
pub use periods::{a_cycle_integral, b_cycle_integral, period_matrices, PeriodData};
pub use rconst::{riemann_constants, riemann_constants_with_nodes};
pub use thirdkind::{abel_at_infinity_end, third_kind, InfinityEnd, ThirdKindData};
pub use ystd::{cut_factor, sheet_of, sqrt_r, y_standard};

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CurveError {
    #[error("invalid curve: {0}")]
    InvalidSpec(String),
    #[error("cut geometry is degenerate: {0}; relabel or perturb the branch points")]
    CutsIntersect(String),
    #[error("no cut-avoiding path found from {from} to {to}")]
    PathBlocked { from: Complex64, to: Complex64 },
    #[error("period matrix is ill-conditioned (cond ≈ {0:.3e})")]
    IllConditioned(f64),
    #[error("Riemann matrix asymmetry {0:.3e} exceeds tolerance")]
    TauAsymmetric(f64),
    #[error("imaginary part of the Riemann matrix is not positive definite")]
    TauNotPositive,
    #[error("quadrature failed to converge: {0}")]
    QuadratureStalled(String),
    #[error("tail truncation error {0:.3e} above tolerance")]
    TailTruncation(f64),
    #[error("singular linear system in {0}")]
    SingularSystem(String),
    #[error("point sits on a cut; the sheet is ambiguous at {0}")]
    OnCut(Complex64),
}

/// Numerical controls shared by the curve machinery. All values are
/// relative where that makes sense; absolute quantities scale with the
/// largest branch point.
#[derive(Debug, Clone)]
pub struct Tolerances {
    /// Relative quadrature target used by the node-doubling loops.
    pub quad_rel: f64,
    /// Hard cap on quadrature nodes per segment.
    pub quad_max_nodes: usize,
    /// Minimum branch-point separation, relative to the scale.
    pub separation_rel: f64,
    /// Clearance of integration paths from cuts, relative to the scale.
    pub path_margin_rel: f64,
    /// Condition-number cap on the a-period matrix.
    pub cond_cap: f64,
    /// Tolerance on the symmetry defect of the Riemann matrix.
    pub tau_symmetry: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            quad_rel: 1e-12,
            quad_max_nodes: 1 << 14,
            separation_rel: 1e-8,
            path_margin_rel: 2e-2,
            cond_cap: 1e10,
            tau_symmetry: 1e-10,
        }
    }
}

/// The hyperelliptic curve `y² = ∏_{j=1}^{2n+2}(λ − λ_j)` of genus `n`.
#[derive(Debug, Clone)]
pub struct CurveSpec {
    branch_points: Vec<Complex64>,
    genus: usize,
}

impl CurveSpec {
    pub fn new(branch_points: Vec<Complex64>) -> Result<Self, CurveError> {
        Self::with_tolerances(branch_points, &Tolerances::default())
    }

    pub fn with_tolerances(
        branch_points: Vec<Complex64>,
        tol: &Tolerances,
    ) -> Result<Self, CurveError> {
        let m = branch_points.len();
        if m < 4 || m % 2 != 0 {
            return Err(CurveError::InvalidSpec(format!(
                "need an even number (≥ 4) of branch points, got {m}"
            )));
        }
        let scale = branch_points
            .iter()
            .map(|z| z.norm())
            .fold(0.0f64, f64::max);
        if scale == 0.0 {
            return Err(CurveError::InvalidSpec("all branch points vanish".into()));
        }
        for (i, z) in branch_points.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(CurveError::InvalidSpec(format!(
                    "branch point {i} is not finite"
                )));
            }
            if z.norm() == 0.0 {
                return Err(CurveError::InvalidSpec(format!(
                    "branch point {i} is zero; the spectral curve excludes the origin"
                )));
            }
            for (j, y) in branch_points.iter().enumerate().skip(i + 1) {
                if (z - y).norm() < tol.separation_rel * scale {
                    return Err(CurveError::InvalidSpec(format!(
                        "branch points {i} and {j} coincide within tolerance"
                    )));
                }
            }
        }
        Ok(CurveSpec {
            genus: m / 2 - 1,
            branch_points,
        })
    }

    pub fn branch_points(&self) -> &[Complex64] {
        &self.branch_points
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    /// Largest branch-point modulus; the geometric scale of the curve.
    pub fn scale(&self) -> f64 {
        self.branch_points
            .iter()
            .map(|z| z.norm())
            .fold(0.0f64, f64::max)
    }

    /// `R(λ) = ∏ (λ − λ_j)`.
    pub fn r_eval(&self, lambda: Complex64) -> Complex64 {
        self.branch_points
            .iter()
            .map(|e| lambda - e)
            .product()
    }

    /// `R'(λ)`.
    pub fn r_prime(&self, lambda: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for skip in 0..self.branch_points.len() {
            let mut term = Complex64::new(1.0, 0.0);
            for (j, e) in self.branch_points.iter().enumerate() {
                if j != skip {
                    term *= lambda - e;
                }
            }
            acc += term;
        }
        acc
    }
}

/// A point of the two-sheeted surface: a base value λ together with the
/// sheet sign. On sheet `+1`, `y/λ^{n+1} → 1` as λ → ∞ (away from the
/// cut system).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfacePoint {
    pub lambda: Complex64,
    pub sheet: i8,
}

impl SurfacePoint {
    pub fn new(lambda: Complex64, sheet: i8) -> Self {
        assert!(sheet == 1 || sheet == -1, "sheet must be ±1");
        SurfacePoint { lambda, sheet }
    }

    pub fn conjugate_sheet(self) -> Self {
        SurfacePoint {
            lambda: self.lambda,
            sheet: -self.sheet,
        }
    }
}
