//! Polynomials in the spectral parameter with `JetExpr` coefficients, the
//! 2×2 matrices built from them, and the zero-curvature residual.

use super::expr::{JetError, JetExpr};
use super::lenard::{build_e, lenard_chain, LenardTriple};
use super::poly::Q;
use std::ops::{Add, Mul, Neg, Sub};

/// Polynomial in λ with `JetExpr` coefficients, stored by ascending power.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LambdaPoly {
    coeffs: Vec<JetExpr>,
}

impl LambdaPoly {
    pub fn zero() -> Self {
        LambdaPoly::default()
    }

    pub fn from_coeffs(coeffs: Vec<JetExpr>) -> Self {
        let mut p = LambdaPoly { coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().map_or(false, |c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    /// Coefficient of λ^k.
    pub fn coeff(&self, k: usize) -> JetExpr {
        self.coeffs.get(k).cloned().unwrap_or_else(JetExpr::zero)
    }

    pub fn coeffs(&self) -> &[JetExpr] {
        &self.coeffs
    }

    /// Multiply by λ^k.
    pub fn shift(&self, k: usize) -> LambdaPoly {
        if self.coeffs.is_empty() {
            return LambdaPoly::zero();
        }
        let mut coeffs = vec![JetExpr::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        LambdaPoly { coeffs }
    }

    pub fn scale(&self, f: &JetExpr) -> LambdaPoly {
        LambdaPoly::from_coeffs(self.coeffs.iter().map(|c| f * c).collect())
    }

    /// Coefficient-wise total x-derivative.
    pub fn jet_derive(&self) -> LambdaPoly {
        LambdaPoly::from_coeffs(self.coeffs.iter().map(|c| c.jet_derive()).collect())
    }
}

impl Add for LambdaPoly {
    type Output = LambdaPoly;
    fn add(self, rhs: LambdaPoly) -> LambdaPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(&self.coeff(k) + &rhs.coeff(k));
        }
        LambdaPoly::from_coeffs(coeffs)
    }
}

impl Sub for LambdaPoly {
    type Output = LambdaPoly;
    fn sub(self, rhs: LambdaPoly) -> LambdaPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(&self.coeff(k) - &rhs.coeff(k));
        }
        LambdaPoly::from_coeffs(coeffs)
    }
}

impl Neg for LambdaPoly {
    type Output = LambdaPoly;
    fn neg(self) -> LambdaPoly {
        LambdaPoly::from_coeffs(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl<'a, 'b> Mul<&'b LambdaPoly> for &'a LambdaPoly {
    type Output = LambdaPoly;
    fn mul(self, rhs: &'b LambdaPoly) -> LambdaPoly {
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return LambdaPoly::zero();
        }
        let mut coeffs = vec![JetExpr::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
        LambdaPoly::from_coeffs(coeffs)
    }
}

impl Mul for LambdaPoly {
    type Output = LambdaPoly;
    fn mul(self, rhs: LambdaPoly) -> LambdaPoly {
        &self * &rhs
    }
}

/// 2×2 matrix of λ-polynomials with `JetExpr` coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LambdaMatrixExpr {
    pub entries: [[LambdaPoly; 2]; 2],
}

impl LambdaMatrixExpr {
    pub fn zero() -> Self {
        LambdaMatrixExpr {
            entries: [
                [LambdaPoly::zero(), LambdaPoly::zero()],
                [LambdaPoly::zero(), LambdaPoly::zero()],
            ],
        }
    }

    pub fn new(e11: LambdaPoly, e12: LambdaPoly, e21: LambdaPoly, e22: LambdaPoly) -> Self {
        LambdaMatrixExpr {
            entries: [[e11, e12], [e21, e22]],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(|p| p.is_zero())
    }

    pub fn matmul(&self, rhs: &LambdaMatrixExpr) -> LambdaMatrixExpr {
        let a = &self.entries;
        let b = &rhs.entries;
        let ent = |i: usize, j: usize| -> LambdaPoly {
            &a[i][0] * &b[0][j] + (&a[i][1] * &b[1][j])
        };
        LambdaMatrixExpr::new(ent(0, 0), ent(0, 1), ent(1, 0), ent(1, 1))
    }

    pub fn commutator(&self, rhs: &LambdaMatrixExpr) -> LambdaMatrixExpr {
        let ab = self.matmul(rhs);
        let ba = rhs.matmul(self);
        ab.sub_matrix(&ba)
    }

    pub fn sub_matrix(&self, rhs: &LambdaMatrixExpr) -> LambdaMatrixExpr {
        LambdaMatrixExpr::new(
            self.entries[0][0].clone() - rhs.entries[0][0].clone(),
            self.entries[0][1].clone() - rhs.entries[0][1].clone(),
            self.entries[1][0].clone() - rhs.entries[1][0].clone(),
            self.entries[1][1].clone() - rhs.entries[1][1].clone(),
        )
    }

    pub fn jet_derive(&self) -> LambdaMatrixExpr {
        LambdaMatrixExpr::new(
            self.entries[0][0].jet_derive(),
            self.entries[0][1].jet_derive(),
            self.entries[1][0].jet_derive(),
            self.entries[1][1].jet_derive(),
        )
    }
}

/// The spatial Lax matrix `U = λ [[w, u], [v, −w]]`.
pub fn lax_u() -> LambdaMatrixExpr {
    let lam = |e: JetExpr| LambdaPoly::from_coeffs(vec![JetExpr::zero(), e]);
    LambdaMatrixExpr::new(
        lam(JetExpr::w()),
        lam(JetExpr::u(0)),
        lam(JetExpr::v(0)),
        lam(-JetExpr::w()),
    )
}

/// The time Lax matrix of the m-th flow, built from the Lenard chain:
/// entry (1,1) is `Σ_j −½ w a_{j−1} λ^{m+1−j}`, entry (1,2) is
/// `Σ_j (b_{j−1} − ½ u a_{j−1}) λ^{m+1−j}` and entry (2,1) the v-mirror.
pub fn lax_v(m: usize, chain: &[LenardTriple]) -> LambdaMatrixExpr {
    let half = JetExpr::rational(1, 2);
    let u = JetExpr::u(0);
    let v = JetExpr::v(0);
    let w = JetExpr::w();
    let mut v11 = vec![JetExpr::zero(); m + 2];
    let mut v12 = vec![JetExpr::zero(); m + 2];
    let mut v21 = vec![JetExpr::zero(); m + 2];
    for j in 0..=m {
        let l = &chain[j]; // L_{j-1}
        let pow = m + 1 - j;
        v11[pow] = -(&half * &(&w * &l.a));
        v12[pow] = &l.b - &(&half * &(&u * &l.a));
        v21[pow] = &l.c - &(&half * &(&v * &l.a));
    }
    let v11 = LambdaPoly::from_coeffs(v11);
    LambdaMatrixExpr::new(
        v11.clone(),
        LambdaPoly::from_coeffs(v12),
        LambdaPoly::from_coeffs(v21),
        -v11,
    )
}

/// Residual of `U_{t_m} − V⁽ᵐ⁾ₓ + [U, V⁽ᵐ⁾]` with the hierarchy's
/// right-hand sides substituted for the time derivatives. Identically zero
/// when the algebra is consistent.
pub fn zero_curvature_residual(m: usize) -> Result<LambdaMatrixExpr, JetError> {
    let chain = lenard_chain(m)?;
    let lm = &chain[m + 1];
    let two_w = JetExpr::int(2) * JetExpr::w();
    let ut = &two_w * &lm.b;
    let vt = -(&two_w * &lm.c);
    zero_curvature_residual_with(m, &chain, &ut, &vt)
}

/// Same residual with caller-supplied time derivatives of the potentials
/// (used for negative controls).
pub fn zero_curvature_residual_with(
    m: usize,
    chain: &[LenardTriple],
    ut: &JetExpr,
    vt: &JetExpr,
) -> Result<LambdaMatrixExpr, JetError> {
    let u = JetExpr::u(0);
    let v = JetExpr::v(0);
    let w = JetExpr::w();
    // w_t induced by the constraint
    let wt = -((ut * &v + &(&u * vt)) / (JetExpr::int(2) * w.clone()));
    let lam = |e: JetExpr| LambdaPoly::from_coeffs(vec![JetExpr::zero(), e]);
    let u_t = LambdaMatrixExpr::new(
        lam(wt.clone()),
        lam(ut.clone()),
        lam(vt.clone()),
        lam(-wt),
    );
    let uu = lax_u();
    let vv = lax_v(m, chain);
    let res = u_t.sub_matrix(&vv.jet_derive()).add_matrix(&uu.commutator(&vv));
    Ok(res)
}

impl LambdaMatrixExpr {
    pub fn add_matrix(&self, rhs: &LambdaMatrixExpr) -> LambdaMatrixExpr {
        LambdaMatrixExpr::new(
            self.entries[0][0].clone() + rhs.entries[0][0].clone(),
            self.entries[0][1].clone() + rhs.entries[0][1].clone(),
            self.entries[1][0].clone() + rhs.entries[1][0].clone(),
            self.entries[1][1].clone() + rhs.entries[1][1].clone(),
        )
    }
}

/// Assemble the three λ-polynomials `(F, G, H)` of the stationary Lax
/// matrix from the chain and the integration constants:
/// `G_{j−1} = −½ w g_{j−1}`, `F_{j−1} = f_{j−1} − ½ u g_{j−1}`,
/// `H_{j−1} = h_{j−1} − ½ v g_{j−1}`, coefficients attached to
/// `λ^{n+1−j}` for `j = 0..n+1`.
pub fn assemble_fgh(
    n: usize,
    alphas: &[Q],
    chain: &[LenardTriple],
) -> Result<(LambdaPoly, LambdaPoly, LambdaPoly), JetError> {
    let half = JetExpr::rational(1, 2);
    let u = JetExpr::u(0);
    let v = JetExpr::v(0);
    let w = JetExpr::w();
    let mut fc = vec![JetExpr::zero(); n + 2];
    let mut gc = vec![JetExpr::zero(); n + 2];
    let mut hc = vec![JetExpr::zero(); n + 2];
    for j in 0..=(n + 1) {
        // E_{j-1} = (h, f, g) in the (c, b, a) slots
        let e = build_e(j as i64 - 1, alphas, chain)?;
        let pow = n + 1 - j;
        gc[pow] = -(&half * &(&w * &e.a));
        fc[pow] = &e.b - &(&half * &(&u * &e.a));
        hc[pow] = &e.c - &(&half * &(&v * &e.a));
    }
    Ok((
        LambdaPoly::from_coeffs(fc),
        LambdaPoly::from_coeffs(gc),
        LambdaPoly::from_coeffs(hc),
    ))
}

/// The x-derivative of `G² + FH` with the stationary first-order relations
/// substituted for `Fₓ, Gₓ, Hₓ`; identically zero, which is the statement
/// that the curve coefficients are constants of motion.
pub fn det_flow_residual(
    f: &LambdaPoly,
    g: &LambdaPoly,
    h: &LambdaPoly,
) -> LambdaPoly {
    let u = JetExpr::u(0);
    let v = JetExpr::v(0);
    let w = JetExpr::w();
    let two = JetExpr::int(2);
    // Fx = 2λ(wF − uG), Gx = λ(uH − vF), Hx = 2λ(vG − wH)
    let fx = (f.scale(&(&two * &w)) - g.scale(&(&two * &u))).shift(1);
    let gx = (h.scale(&u) - f.scale(&v)).shift(1);
    let hx = (g.scale(&(&two * &v)) - h.scale(&(&two * &w))).shift(1);
    (g * &gx).scale(&two) + (&fx * h) + (f * &hx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::poly::q;

    #[test]
    fn zero_curvature_holds_for_first_three_flows() {
        for m in 1..=3usize {
            let res = zero_curvature_residual(m).unwrap();
            assert!(res.is_zero(), "flow m = {m}");
        }
    }

    #[test]
    fn perturbed_flow_breaks_zero_curvature() {
        let m = 1;
        let chain = lenard_chain(m).unwrap();
        let lm = &chain[m + 1];
        let two_w = JetExpr::int(2) * JetExpr::w();
        let ut = &two_w * &lm.b + JetExpr::u(0);
        let vt = -(&two_w * &lm.c);
        let res = zero_curvature_residual_with(m, &chain, &ut, &vt).unwrap();
        assert!(!res.is_zero());
    }

    #[test]
    fn det_combination_is_stationary() {
        let n = 2;
        let chain = lenard_chain(n + 1).unwrap();
        let alphas = vec![q(1, 3), q(-1, 2), q(2, 1)];
        let (f, g, h) = assemble_fgh(n, &alphas, &chain).unwrap();
        assert!(det_flow_residual(&f, &g, &h).is_zero());
        // top coefficients of G² + FH are the constants 1 and 2α₀
        let det = (&g * &g) + (&f * &h);
        assert_eq!(det.coeff(2 * n + 2), JetExpr::one());
        assert_eq!(det.coeff(2 * n + 1), JetExpr::constant(q(2, 3)));
    }
}
