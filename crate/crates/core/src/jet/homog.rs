//! Homogeneous coefficient sequences of `F/R^{1/2}`, `H/R^{1/2}`,
//! `G/R^{1/2}` generated by the nonlinear recursions, and the conversion
//! between the α-laden coefficients and the homogeneous ones.

use super::expr::{Degree, JetError, JetExpr};
use super::lenard::{build_e, LenardTriple};
use super::poly::Q;
use crate::curve::series::series_c;

/// The sequences `(F̌, Ȟ, Ǧ)` with index starting at −1: entry `[i]`
/// holds the coefficient of index `i − 1`.
#[derive(Debug, Clone)]
pub struct HomogeneousSeq {
    f: Vec<JetExpr>,
    h: Vec<JetExpr>,
    g: Vec<JetExpr>,
}

impl HomogeneousSeq {
    pub fn f_at(&self, k: i64) -> &JetExpr {
        &self.f[(k + 1) as usize]
    }
    pub fn h_at(&self, k: i64) -> &JetExpr {
        &self.h[(k + 1) as usize]
    }
    pub fn g_at(&self, k: i64) -> &JetExpr {
        &self.g[(k + 1) as usize]
    }

    /// Largest index covered by the sequences.
    pub fn kmax(&self) -> i64 {
        self.f.len() as i64 - 2
    }

    /// First-order relations tying consecutive indices:
    /// `F̌_{k−1,x} + 2uǦ_k = 2wF̌_k`, `Ȟ_{k−1,x} − 2vǦ_k = −2wȞ_k`,
    /// `Ǧ_{k−1,x} = uȞ_k − vF̌_k`, for −1 ≤ k ≤ kmax (index −2 reads 0).
    pub fn first_order_relations_hold(&self) -> bool {
        let u = JetExpr::u(0);
        let v = JetExpr::v(0);
        let w = JetExpr::w();
        let two = JetExpr::int(2);
        for k in -1..=self.kmax() {
            let fx = if k == -1 {
                JetExpr::zero()
            } else {
                self.f_at(k - 1).jet_derive()
            };
            let hx = if k == -1 {
                JetExpr::zero()
            } else {
                self.h_at(k - 1).jet_derive()
            };
            let gx = if k == -1 {
                JetExpr::zero()
            } else {
                self.g_at(k - 1).jet_derive()
            };
            let r1 = fx + &two * &u * self.g_at(k).clone() - &two * &w * self.f_at(k).clone();
            let r2 = hx - &two * &v * self.g_at(k).clone() + &two * &w * self.h_at(k).clone();
            let r3 = gx - &u * self.h_at(k) + &v * self.f_at(k);
            if !r1.is_zero() || !r2.is_zero() || !r3.is_zero() {
                return false;
            }
        }
        true
    }

    /// Degree law `deg = k + 1` for every entry.
    pub fn degree_law_holds(&self) -> bool {
        for k in -1..=self.kmax() {
            for e in [self.f_at(k), self.h_at(k), self.g_at(k)] {
                match e.degree() {
                    Ok(Degree::Homogeneous(d)) if d == k + 1 => {}
                    _ => return false,
                }
            }
        }
        true
    }
}

/// The homogeneous triple extracted from a Lenard link:
/// `F̂ = b − ½ua`, `Ĥ = c − ½va`, `Ĝ = −½wa`.
pub fn hat_triple(link: &LenardTriple) -> (JetExpr, JetExpr, JetExpr) {
    let half = JetExpr::rational(1, 2);
    let f = &link.b - &(&half * &(JetExpr::u(0) * link.a.clone()));
    let h = &link.c - &(&half * &(JetExpr::v(0) * link.a.clone()));
    let g = -(&half * &(JetExpr::w() * link.a.clone()));
    (f, h, g)
}

/// Generate `(F̌, Ȟ, Ǧ)` up to index `kmax` by the nonlinear recursions
/// and verify on the way that the sequences coincide with the Lenard-built
/// homogeneous coefficients.
pub fn homogeneous_recursion(
    kmax: usize,
    chain: &[LenardTriple],
) -> Result<HomogeneousSeq, JetError> {
    let u = JetExpr::u(0);
    let v = JetExpr::v(0);
    let w = JetExpr::w();
    let wx = w.jet_derive();
    let half = JetExpr::rational(1, 2);
    let quarter = JetExpr::rational(1, 4);

    // base entries for indices −1 and 0
    let mut f = vec![
        u.clone(),
        &half * &(w.clone() * JetExpr::u(1) - wx.clone() * u.clone()),
    ];
    let mut h = vec![
        v.clone(),
        &half * &(wx.clone() * v.clone() - w.clone() * JetExpr::v(1)),
    ];
    let mut g = vec![
        w.clone(),
        &quarter * &(u.clone() * JetExpr::v(1) - JetExpr::u(1) * v.clone()),
    ];

    let fw_coef = (wx.clone() * u.clone() - w.clone() * JetExpr::u(1)) / u.clone();
    let hw_coef = (w.clone() * JetExpr::v(1) - wx.clone() * v.clone()) / v.clone();
    let ux_over_2u = JetExpr::u(1) / (JetExpr::int(2) * u.clone());
    let vx_over_2v = JetExpr::v(1) / (JetExpr::int(2) * v.clone());

    // entries at index k−1 for k = 2..=kmax+1
    for k in 2..=(kmax as i64 + 1) {
        let at = |seq: &Vec<JetExpr>, idx: i64| -> JetExpr { seq[(idx + 1) as usize].clone() };
        let mut brace_f = JetExpr::zero();
        let mut brace_h = JetExpr::zero();
        for l in 0..=(k - 2) {
            let fl = at(&f, l - 1);
            let fr = at(&f, k - 3 - l);
            brace_f = brace_f
                + (-(&half * &fl.jet_derive_n(2)) * fr.clone()
                    + &quarter * &(fl.jet_derive() * fr.jet_derive())
                    + &ux_over_2u * &(fl.jet_derive() * fr));
            let hl = at(&h, l - 1);
            let hr = at(&h, k - 3 - l);
            brace_h = brace_h
                + (-(&half * &hl.jet_derive_n(2)) * hr.clone()
                    + &quarter * &(hl.jet_derive() * hr.jet_derive())
                    + &vx_over_2v * &(hl.jet_derive() * hr));
        }
        for l in 1..=(k - 1) {
            brace_f = brace_f + at(&f, l - 1) * at(&f, k - 1 - l);
            brace_h = brace_h + at(&h, l - 1) * at(&h, k - 1 - l);
        }
        for l in 0..=(k - 1) {
            brace_f = brace_f + &fw_coef * &(at(&f, l - 1) * at(&f, k - 2 - l));
            brace_h = brace_h + &hw_coef * &(at(&h, l - 1) * at(&h, k - 2 - l));
        }
        let fk = -(brace_f / (JetExpr::int(2) * u.clone()));
        let hk = -(brace_h / (JetExpr::int(2) * v.clone()));
        f.push(fk);
        h.push(hk);

        let mut sum_fh = JetExpr::zero();
        for l in 0..=k {
            sum_fh = sum_fh + at(&f, l - 1) * at(&h, k - 1 - l);
        }
        let mut sum_gg = JetExpr::zero();
        for l in 1..=(k - 1) {
            sum_gg = sum_gg + at(&g, l - 1) * at(&g, k - 1 - l);
        }
        let gk = -((sum_fh + sum_gg) / (JetExpr::int(2) * w.clone()));
        g.push(gk);
    }

    let seq = HomogeneousSeq { f, h, g };

    // the two computation paths must coincide
    for k in -1..=(kmax as i64) {
        let (fh, hh, gh) = hat_triple(&chain[(k + 1) as usize]);
        if seq.f_at(k) != &fh || seq.h_at(k) != &hh || seq.g_at(k) != &gh {
            return Err(JetError::Inconsistent(format!(
                "homogeneous recursion disagrees with the Lenard chain at index {k}"
            )));
        }
    }
    Ok(seq)
}

/// Check the conversion `F_k = Σ_{m=0}^{k+1} c_{k−m}(Λ) F̂_{m−1}` with the
/// integration constants specialized to `α_l = c_l(Λ)`.
pub fn convert_homogeneous(
    k: i64,
    lambdas: &[Q],
    chain: &[LenardTriple],
) -> Result<bool, JetError> {
    let alphas: Vec<Q> = (0..=k.max(0))
        .map(|l| series_c(l, lambdas))
        .collect();
    let e_k = build_e(k, &alphas, chain)?;
    let half = JetExpr::rational(1, 2);
    let f_k = &e_k.b - &(&half * &(JetExpr::u(0) * e_k.a.clone()));

    let mut rhs = JetExpr::zero();
    for m in 0..=(k + 1) {
        let c = series_c(k - m, lambdas);
        let (fhat, _, _) = hat_triple(&chain[m as usize]);
        rhs = rhs + JetExpr::constant(c) * fhat;
    }
    Ok(f_k == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::lenard::lenard_chain;
    use crate::jet::poly::q;

    #[test]
    fn base_entries_match_lenard_hats() {
        let chain = lenard_chain(1).unwrap();
        let seq = homogeneous_recursion(1, &chain).unwrap();
        assert_eq!(seq.f_at(-1), &JetExpr::u(0));
        assert_eq!(seq.h_at(-1), &JetExpr::v(0));
        assert_eq!(seq.g_at(-1), &JetExpr::w());
        let half = JetExpr::rational(1, 2);
        let quarter = JetExpr::rational(1, 4);
        let wx = JetExpr::w().jet_derive();
        assert_eq!(
            seq.f_at(0),
            &(&half * &(JetExpr::w() * JetExpr::u(1) - wx * JetExpr::u(0)))
        );
        assert_eq!(
            seq.g_at(0),
            &(&quarter
                * &(JetExpr::u(0) * JetExpr::v(1) - JetExpr::u(1) * JetExpr::v(0)))
        );
    }

    #[test]
    fn recursion_reaches_index_three() {
        let chain = lenard_chain(3).unwrap();
        let seq = homogeneous_recursion(3, &chain).unwrap();
        assert!(seq.first_order_relations_hold());
        assert!(seq.degree_law_holds());
    }

    #[test]
    fn conversion_identity() {
        let chain = lenard_chain(2).unwrap();
        // genus 1, Λ = (1, 2, 3, 4): c₀ = −5
        let lam = vec![q(1, 1), q(2, 1), q(3, 1), q(4, 1)];
        assert_eq!(series_c(0, &lam), q(-5, 1));
        assert!(convert_homogeneous(-1, &lam, &chain).unwrap());
        assert!(convert_homogeneous(0, &lam, &chain).unwrap());
        assert!(convert_homogeneous(1, &lam, &chain).unwrap());
    }
}
