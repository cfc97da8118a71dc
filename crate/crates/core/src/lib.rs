//! Finite-gap machinery for the Heisenberg ferromagnet hierarchy.
//!
//! The crate is organized as a pipeline of largely independent layers:
//!
//! * [`jet`] — exact symbolic algebra of differential polynomials in the
//!   potentials `u`, `v` and the constraint symbol `w` (with `w² + uv = 1`):
//!   the Lenard chain, hierarchy right-hand sides, Hamiltonians,
//!   zero-curvature residuals and the homogeneous nonlinear recursions.
//! * [`curve`] — numerical geometry of the hyperelliptic curve
//!   `y² = ∏(λ − λ_j)`: square-root branch tracking, homology cycles,
//!   period matrices, Abel maps, third-kind differentials and the vector
//!   of Riemann constants.
//! * [`theta`] — Riemann theta functions of small genus with directional
//!   derivatives.
//! * [`dubrovin`] — adaptive integration of the ODE system governing the
//!   auxiliary divisor, and Abel–Jacobi coordinates of trajectories.
//! * [`reconstruct`] — evaluation of the meromorphic function `φ` and the
//!   theta-function representation of the fields `w`, `u`, `v` on a grid,
//!   with residual diagnostics.

pub mod curve;
pub mod dubrovin;
pub mod jet;
pub(crate) mod numeric;
pub mod oracles;
pub mod theta;

pub use curve::{CurveSpec, PeriodData, SurfacePoint, ThirdKindData};
pub use dubrovin::{EllipticState, FlowSpec};
pub use jet::{JetExpr, LambdaMatrixExpr, LenardTriple};
pub use theta::ThetaContext;
