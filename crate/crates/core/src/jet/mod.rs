//! Exact symbolic algebra of differential polynomials in the two potentials
//! `u`, `v` and the constraint symbol `w` (`w² + uv = 1`), together with the
//! recursion machinery that generates the integrable hierarchy: the Lenard
//! chain, hierarchy right-hand sides, trace-identity Hamiltonians,
//! zero-curvature residuals and the homogeneous nonlinear recursions.

mod antider;
mod expr;
mod homog;
mod lambda;
mod lenard;
mod monomial;
mod poly;

pub use antider::antiderivative;
pub use expr::{Degree, JetError, JetExpr};
pub use homog::{convert_homogeneous, hat_triple, homogeneous_recursion, HomogeneousSeq};
pub use lambda::{
    assemble_fgh, det_flow_residual, lax_u, lax_v, zero_curvature_residual,
    zero_curvature_residual_with, LambdaMatrixExpr, LambdaPoly,
};
pub use lenard::{
    apply_j, apply_k, build_e, hamiltonian, hierarchy_rhs, lenard_chain, lenard_next,
    variational_derivative, LenardTriple, Potential,
};
pub use monomial::{JetVar, Monomial};
pub use poly::{q, Poly, Q};
