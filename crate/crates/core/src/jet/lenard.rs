//! The Lenard recursion, hierarchy right-hand sides, Hamiltonians and
//! variational derivatives.

use super::antider::antiderivative;
use super::expr::{JetError, JetExpr};
use super::monomial::JetVar;
use super::poly::Q;
use num_traits::One;

/// One link of the Lenard chain, components ordered `(c, b, a)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LenardTriple {
    pub c: JetExpr,
    pub b: JetExpr,
    pub a: JetExpr,
}

impl LenardTriple {
    pub fn new(c: JetExpr, b: JetExpr, a: JetExpr) -> Self {
        LenardTriple { c, b, a }
    }

    /// The seed `L₋₁ = (0, 0, −2)ᵀ`.
    pub fn seed() -> Self {
        LenardTriple::new(JetExpr::zero(), JetExpr::zero(), JetExpr::int(-2))
    }

    pub fn scale(&self, f: &JetExpr) -> Self {
        LenardTriple::new(f * &self.c, f * &self.b, f * &self.a)
    }

    pub fn add(&self, other: &LenardTriple) -> Self {
        LenardTriple::new(
            &self.c + &other.c,
            &self.b + &other.b,
            &self.a + &other.a,
        )
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_zero() && self.b.is_zero() && self.a.is_zero()
    }
}

/// The first recursion operator: rows `(∂b − ½∂(ua), ∂c − ½∂(va),
/// u∂c + v∂b − ∂a)`.
pub fn apply_k(t: &LenardTriple) -> LenardTriple {
    let u = JetExpr::u(0);
    let v = JetExpr::v(0);
    let half = JetExpr::rational(1, 2);
    let r1 = t.b.jet_derive() - &half * &(&u * &t.a).jet_derive();
    let r2 = t.c.jet_derive() - &half * &(&v * &t.a).jet_derive();
    let r3 = third_row(t);
    LenardTriple::new(r1, r2, r3)
}

/// The second recursion operator: rows `(2wb, −2wc, u∂c + v∂b − ∂a)`.
pub fn apply_j(t: &LenardTriple) -> LenardTriple {
    let two_w = JetExpr::int(2) * JetExpr::w();
    let r1 = &two_w * &t.b;
    let r2 = -(&two_w * &t.c);
    let r3 = third_row(t);
    LenardTriple::new(r1, r2, r3)
}

fn third_row(t: &LenardTriple) -> JetExpr {
    JetExpr::u(0) * t.c.jet_derive() + JetExpr::v(0) * t.b.jet_derive() - t.a.jet_derive()
}

/// Solve `K L_{j−1} = J L_j` for the next link. `b` and `c` come from the
/// first two rows by division with `2w`; `a` comes from formal
/// antidifferentiation of the third row, with the free multiple of the
/// seed fixed to zero. The defining relation is re-checked before
/// returning.
pub fn lenard_next(prev: &LenardTriple) -> Result<LenardTriple, JetError> {
    let k_prev = apply_k(prev);
    let two_w = JetExpr::int(2) * JetExpr::w();
    let b = &k_prev.c / &two_w;
    let c = -(&k_prev.b / &two_w);
    // row 3: u ∂c + v ∂b − ∂a = (K prev)₃
    let da = JetExpr::u(0) * c.jet_derive() + JetExpr::v(0) * b.jet_derive() - k_prev.a.clone();
    let a = antiderivative(&da)?;
    let next = LenardTriple::new(c, b, a);
    let lhs = apply_j(&next);
    if lhs.c != k_prev.c || lhs.b != k_prev.b || lhs.a != k_prev.a {
        return Err(JetError::Inconsistent(
            "re-substitution of the recursion relation failed".into(),
        ));
    }
    Ok(next)
}

/// The chain `[L₋₁, L₀, …, L_depth]`.
pub fn lenard_chain(depth: usize) -> Result<Vec<LenardTriple>, JetError> {
    let mut chain = vec![LenardTriple::seed()];
    for _ in 0..=depth {
        let next = lenard_next(chain.last().unwrap())?;
        chain.push(next);
    }
    Ok(chain)
}

/// Right-hand side `(u_{t_m}, v_{t_m}) = (2w b_m, −2w c_m)` of the m-th
/// hierarchy member.
pub fn hierarchy_rhs(m: usize) -> Result<(JetExpr, JetExpr), JetError> {
    let chain = lenard_chain(m)?;
    let lm = &chain[m + 1];
    let two_w = JetExpr::int(2) * JetExpr::w();
    Ok((&two_w * &lm.b, -(&two_w * &lm.c)))
}

/// The n-th Hamiltonian density `Hₙ = (aₙ − u cₙ − v bₙ)/n`.
pub fn hamiltonian(n: usize) -> Result<JetExpr, JetError> {
    if n == 0 {
        return Err(JetError::DivisionByZero);
    }
    let chain = lenard_chain(n)?;
    let ln = &chain[n + 1];
    let num =
        &ln.a - &(JetExpr::u(0) * ln.c.clone()) - (JetExpr::v(0) * ln.b.clone());
    Ok(num * JetExpr::rational(1, n as i64))
}

/// Which potential a variational derivative is taken with respect to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Potential {
    U,
    V,
}

/// Euler operator `Σₖ (−∂ₓ)ᵏ ∂h/∂·⁽ᵏ⁾`, with the w-dependence routed
/// through the constraint at jet order zero.
pub fn variational_derivative(h: &JetExpr, var: Potential) -> JetExpr {
    let max_order = h.max_jet_order();
    let mut acc = JetExpr::zero();
    for k in 0..=max_order {
        let jet = match var {
            Potential::U => JetVar::u(k),
            Potential::V => JetVar::v(k),
        };
        let dk = if k == 0 {
            h.partial_constrained(jet)
        } else {
            h.partial(jet)
        };
        if dk.is_zero() {
            continue;
        }
        let mut term = dk.jet_derive_n(k);
        if k % 2 == 1 {
            term = -term;
        }
        acc = acc + term;
    }
    acc
}

/// `E_k = Σ_{j=0}^{k+1} α_{j−1} L_{k−j}` with `α₋₁ = 1`. `alphas` holds
/// `(α₀, …)` and must cover index `k`; `chain` is the Lenard chain from
/// [`lenard_chain`], long enough to contain `L_k`.
pub fn build_e(
    k: i64,
    alphas: &[Q],
    chain: &[LenardTriple],
) -> Result<LenardTriple, JetError> {
    if k < -1 {
        return Err(JetError::Inconsistent("index below the seed".into()));
    }
    if k >= 0 && (alphas.len() as i64) < k + 1 {
        return Err(JetError::Inconsistent(format!(
            "expected at least {} alpha constants, got {}",
            k + 1,
            alphas.len()
        )));
    }
    let l = |idx: i64| -> &LenardTriple { &chain[(idx + 1) as usize] };
    let mut acc = l(k).clone(); // j = 0 term with α₋₁ = 1
    for j in 1..=(k + 1) {
        let alpha = &alphas[(j - 1) as usize];
        if alpha == &Q::one() {
            acc = acc.add(l(k - j));
        } else {
            acc = acc.add(&l(k - j).scale(&JetExpr::constant(alpha.clone())));
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::poly::q;

    fn u() -> JetExpr {
        JetExpr::u(0)
    }
    fn v() -> JetExpr {
        JetExpr::v(0)
    }
    fn w() -> JetExpr {
        JetExpr::w()
    }
    fn ux(k: u32) -> JetExpr {
        JetExpr::u(k)
    }
    fn vx(k: u32) -> JetExpr {
        JetExpr::v(k)
    }

    /// `L₀ = (−vₓ, uₓ, uₓv − uvₓ)ᵀ / (2w)`
    fn l0_reference() -> LenardTriple {
        let two_w = JetExpr::int(2) * w();
        LenardTriple::new(
            -(vx(1) / two_w.clone()),
            ux(1) / two_w.clone(),
            (ux(1) * v() - u() * vx(1)) / two_w,
        )
    }

    /// `L₁ = (vₓₓw − vwₓₓ, uₓₓw − uwₓₓ, −2wₓₓ − 3w(uₓvₓ + wₓ²))ᵀ / (4w)`
    fn l1_reference() -> LenardTriple {
        let wxx = w().jet_derive_n(2);
        let wx = w().jet_derive();
        let four_w = JetExpr::int(4) * w();
        LenardTriple::new(
            (vx(2) * w() - v() * wxx.clone()) / four_w.clone(),
            (ux(2) * w() - u() * wxx.clone()) / four_w.clone(),
            (JetExpr::int(-2) * wxx - JetExpr::int(3) * w() * (ux(1) * vx(1) + wx.pow(2)))
                / four_w,
        )
    }

    #[test]
    fn seed_is_annihilated_by_j() {
        assert!(apply_j(&LenardTriple::seed()).is_zero());
    }

    #[test]
    fn j_first_row_structure() {
        let t = LenardTriple::new(u(), v(), w());
        let out = apply_j(&t);
        assert_eq!(out.c, JetExpr::int(2) * w() * v());
        assert_eq!(out.b, JetExpr::int(-2) * w() * u());
    }

    #[test]
    fn first_link_matches_reference() {
        let l0 = lenard_next(&LenardTriple::seed()).unwrap();
        let r = l0_reference();
        assert_eq!(l0.c, r.c);
        assert_eq!(l0.b, r.b);
        assert_eq!(l0.a, r.a);
    }

    #[test]
    fn second_link_matches_reference() {
        let l0 = lenard_next(&LenardTriple::seed()).unwrap();
        let l1 = lenard_next(&l0).unwrap();
        let r = l1_reference();
        assert_eq!(l1.c, r.c);
        assert_eq!(l1.b, r.b);
        assert_eq!(l1.a, r.a);
    }

    #[test]
    fn k_of_seed_equals_j_of_first_link() {
        let l0 = lenard_next(&LenardTriple::seed()).unwrap();
        let lhs = apply_k(&LenardTriple::seed());
        let rhs = apply_j(&l0);
        assert_eq!(lhs.c, rhs.c);
        assert_eq!(lhs.b, rhs.b);
        assert_eq!(lhs.a, rhs.a);
    }

    #[test]
    fn chain_depth_four_is_consistent() {
        let chain = lenard_chain(4).unwrap();
        assert_eq!(chain.len(), 6);
        for j in 1..chain.len() {
            let lhs = apply_j(&chain[j]);
            let rhs = apply_k(&chain[j - 1]);
            assert_eq!(lhs.c, rhs.c);
            assert_eq!(lhs.b, rhs.b);
            assert_eq!(lhs.a, rhs.a);
        }
    }

    #[test]
    fn first_hierarchy_member() {
        let (ut, vt) = hierarchy_rhs(1).unwrap();
        let wxx = w().jet_derive_n(2);
        let half = JetExpr::rational(1, 2);
        assert_eq!(ut, &half * &(ux(2) * w() - u() * wxx.clone()));
        assert_eq!(vt, &half * &(wxx * v() - w() * vx(2)));
    }

    #[test]
    fn second_hierarchy_member() {
        let (ut, vt) = hierarchy_rhs(2).unwrap();
        let wx = w().jet_derive();
        let exp_u = JetExpr::rational(1, 4) * ux(3)
            + JetExpr::rational(3, 8)
                * (u() * ux(1) * vx(1) + u() * wx.pow(2)).jet_derive();
        let exp_v = JetExpr::rational(1, 4) * vx(3)
            + JetExpr::rational(3, 8)
                * (v() * ux(1) * vx(1) + v() * wx.pow(2)).jet_derive();
        assert_eq!(ut, exp_u);
        assert_eq!(vt, exp_v);
    }

    #[test]
    fn variational_derivative_basics() {
        assert_eq!(variational_derivative(&(u() * v()), Potential::U), v());
        // δ(uₓvₓ)/δu = −vₓₓ
        assert_eq!(
            variational_derivative(&(ux(1) * vx(1)), Potential::U),
            -vx(2)
        );
    }

    #[test]
    fn hamiltonian_gradients() {
        for n in 1..=2usize {
            let h = hamiltonian(n).unwrap();
            let chain = lenard_chain(n).unwrap();
            let ln = &chain[n + 1];
            assert_eq!(variational_derivative(&h, Potential::U), ln.c, "n = {n}");
            assert_eq!(variational_derivative(&h, Potential::V), ln.b, "n = {n}");
        }
    }

    #[test]
    fn hamiltonian_rejects_zero_index() {
        assert_eq!(hamiltonian(0), Err(JetError::DivisionByZero));
    }

    #[test]
    fn e_triples_match_references() {
        let chain = lenard_chain(2).unwrap();
        let a0 = q(3, 7);
        let a1 = q(-2, 5);
        let e0 = build_e(0, &[a0.clone()], &chain).unwrap();
        let two_w = JetExpr::int(2) * w();
        assert_eq!(e0.c, -(vx(1) / two_w.clone()));
        assert_eq!(e0.b, ux(1) / two_w.clone());
        assert_eq!(
            e0.a,
            (ux(1) * v() - u() * vx(1)) / two_w - JetExpr::int(2) * JetExpr::constant(a0.clone())
        );

        let e1 = build_e(1, &[a0.clone(), a1.clone()], &chain).unwrap();
        let l1 = l1_reference();
        let l0 = l0_reference();
        let ca0 = JetExpr::constant(a0);
        let ca1 = JetExpr::constant(a1);
        assert_eq!(e1.c, &l1.c + &(&ca0 * &l0.c));
        assert_eq!(e1.b, &l1.b + &(&ca0 * &l0.b));
        assert_eq!(
            e1.a,
            l1.a + ca0 * l0.a + ca1 * JetExpr::int(-2)
        );
    }
}
