//! The standard branch of `y = √R(λ)` attached to a cut system.
//!
//! Each cut pairs two branch points `(e₁, e₂)`; the two-point factor
//!
//! ```text
//! s(λ) = (λ − e_far) · √((λ − e_near)/(λ − e_far))        (principal √)
//! ```
//!
//! is analytic on ℂ minus the segment `[e₁, e₂]` and behaves like λ at
//! infinity. The product of the factors over all cuts is a single-valued
//! branch of `√R` off the cut system with `y/λ^{n+1} → 1` at infinity;
//! sheet `+1` is that branch, sheet `−1` its negative.

use super::geometry::Cut;
use super::{CurveSpec, SurfacePoint};
use num_complex::Complex64;

/// Two-point square-root factor, analytic off the cut segment.
pub fn cut_factor(cut: &Cut, lambda: Complex64) -> Complex64 {
    let d1 = lambda - cut.e1;
    let d2 = lambda - cut.e2;
    // anchor the formula at the farther endpoint to avoid 0·∞ at the ends
    if d1.norm() >= d2.norm() {
        d1 * (d2 / d1).sqrt()
    } else {
        d2 * (d1 / d2).sqrt()
    }
}

/// The standard branch of `√R` for the given cut system.
pub fn y_standard(cuts: &[Cut], lambda: Complex64) -> Complex64 {
    cuts.iter().map(|c| cut_factor(c, lambda)).product()
}

/// `√R` at a surface point: the standard branch times the sheet sign.
pub fn sqrt_r(spec: &CurveSpec, cuts: &[Cut], p: SurfacePoint) -> Complex64 {
    let _ = spec;
    let y = y_standard(cuts, p.lambda);
    if p.sheet >= 0 {
        y
    } else {
        -y
    }
}

/// Sheet sign of a prescribed y-value: `+1` if it is closer to the
/// standard branch than to its negative. `None` when the point lies on a
/// cut (the branch jumps there) or the y-value matches neither sign.
pub fn sheet_of(cuts: &[Cut], lambda: Complex64, y: Complex64) -> Option<i8> {
    let ys = y_standard(cuts, lambda);
    let dp = (y - ys).norm();
    let dm = (y + ys).norm();
    let gap = (dp - dm).abs();
    if gap <= 1e-9 * (ys.norm() + 1e-300) {
        return None;
    }
    Some(if dp < dm { 1 } else { -1 })
}
