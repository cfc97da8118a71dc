//! Canonical rational differential polynomials.
//!
//! A [`JetExpr`] is a quotient `num/den` of polynomials over the jet
//! alphabet, kept in the normal form
//!
//! * `num` has w-degree ≤ 1 (reduced by `w² → 1 − uv`),
//! * `den` is w-free (a w in a denominator is rationalized through
//!   `1/w = w/(1 − uv)`), nonzero, with leading coefficient 1,
//! * common factors from the atoms `u`, `v`, `1 − uv` are cancelled.
//!
//! Equality is decided exactly by cross-multiplication, so it does not
//! depend on how far a denominator happens to be reduced.

use super::monomial::{JetVar, Monomial};
use super::poly::{Poly, Q};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum JetError {
    #[error("division by zero expression")]
    DivisionByZero,
    #[error("degree of the zero expression is undefined")]
    DegreeOfZero,
    #[error("formal antidifferentiation failed: {0}")]
    NotIntegrable(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

/// Exact rational differential polynomial in `u`, `v`, their jets, and the
/// constraint symbol `w` with `w² + uv = 1`.
#[derive(Debug, Clone)]
pub struct JetExpr {
    num: Poly,
    den: Poly,
}

impl JetExpr {
    pub fn zero() -> Self {
        JetExpr {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        JetExpr::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        JetExpr {
            num: Poly::constant(c),
            den: Poly::one(),
        }
    }

    pub fn int(n: i64) -> Self {
        JetExpr::constant(Q::from(BigInt::from(n)))
    }

    pub fn rational(num: i64, den: i64) -> Self {
        JetExpr::constant(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn w() -> Self {
        JetExpr::from_poly(Poly::var(JetVar::W))
    }

    /// The jet `u⁽ᵒʳᵈᵉʳ⁾`.
    pub fn u(order: u32) -> Self {
        JetExpr::from_poly(Poly::var(JetVar::u(order)))
    }

    /// The jet `v⁽ᵒʳᵈᵉʳ⁾`.
    pub fn v(order: u32) -> Self {
        JetExpr::from_poly(Poly::var(JetVar::v(order)))
    }

    pub fn from_poly(p: Poly) -> Self {
        JetExpr {
            num: p,
            den: Poly::one(),
        }
        .canonical()
    }

    pub fn from_ratio(num: Poly, den: Poly) -> Result<Self, JetError> {
        if den.is_zero() {
            return Err(JetError::DivisionByZero);
        }
        Ok(JetExpr { num, den }.rationalized().canonical())
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    /// Move any w in the denominator into the numerator via
    /// `1/(p + qw) = (p − qw)/(p² − q²(1 − uv))`.
    fn rationalized(self) -> Self {
        let den = self.den.reduce_w();
        if den.w_degree() == 0 {
            return JetExpr { num: self.num, den };
        }
        let (p, qw) = split_w(&den);
        let w = Poly::var(JetVar::W);
        let one_minus_uv = Poly::one()
            - Poly::term(
                Monomial::var(JetVar::u(0)).mul(&Monomial::var(JetVar::v(0))),
                Q::one(),
            );
        let conj = p.clone() - &(&qw * &w);
        let new_den = &p * &p - &(&qw * &qw) * &one_minus_uv;
        let new_num = &self.num * &conj;
        JetExpr {
            num: new_num,
            den: new_den,
        }
    }

    /// Reduce the w-degree of the numerator, cancel atom factors, and
    /// normalize the denominator's leading coefficient to 1.
    fn canonical(self) -> Self {
        let mut num = self.num.reduce_w();
        let mut den = self.den;
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return JetExpr {
                num,
                den: Poly::one(),
            };
        }
        if !den.is_constant() {
            let u = Poly::var(JetVar::u(0));
            let v = Poly::var(JetVar::v(0));
            let one_minus_uv = Poly::one() - &u * &v;
            for atom in [&one_minus_uv, &u, &v] {
                loop {
                    match (num.div_exact(atom), den.div_exact(atom)) {
                        (Some(n2), Some(d2)) => {
                            num = n2;
                            den = d2;
                        }
                        _ => break,
                    }
                }
                if den.is_constant() {
                    break;
                }
            }
        }
        let lead = den
            .leading()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Q::one);
        let inv = Q::one() / lead;
        num = num.scale(&inv);
        den = den.scale(&inv);
        JetExpr { num, den }
    }

    pub fn inverse(&self) -> Result<JetExpr, JetError> {
        if self.is_zero() {
            return Err(JetError::DivisionByZero);
        }
        JetExpr::from_ratio(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, e: u32) -> JetExpr {
        let mut out = JetExpr::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Total x-derivative. Every x-derivative of `w` is rewritten as
    /// `−(u⁽¹⁾v + u v⁽¹⁾)/(2w)`, so the constraint `w² + uv = 1` is
    /// conserved exactly.
    pub fn jet_derive(&self) -> JetExpr {
        let dnum = total_derive_poly(&self.num);
        if self.den.is_constant() {
            let c = self
                .den
                .leading()
                .map(|(_, c)| c.clone())
                .unwrap_or_else(Q::one);
            return dnum * JetExpr::constant(Q::one() / c);
        }
        let dden = total_derive_poly(&self.den);
        let num_expr = JetExpr {
            num: self.num.clone(),
            den: Poly::one(),
        };
        let den_expr = JetExpr {
            num: self.den.clone(),
            den: Poly::one(),
        };
        let den_sq = (&den_expr * &den_expr).inverse().expect("nonzero den");
        (dnum * den_expr - num_expr * dden) * den_sq
    }

    /// n-fold x-derivative.
    pub fn jet_derive_n(&self, n: u32) -> JetExpr {
        let mut out = self.clone();
        for _ in 0..n {
            out = out.jet_derive();
        }
        out
    }

    /// Partial derivative with respect to a single alphabet variable,
    /// treating all variables as independent (no w chain rule).
    pub fn partial(&self, v: JetVar) -> JetExpr {
        let dn = JetExpr::from_poly(self.num.partial(v));
        if self.den.contains_var(v) {
            let dd = JetExpr::from_poly(self.den.partial(v));
            let num_expr = JetExpr::from_poly(self.num.clone());
            let den_expr = JetExpr::from_poly(self.den.clone());
            let den_sq = (&den_expr * &den_expr).inverse().expect("nonzero den");
            (dn * den_expr - num_expr * dd) * den_sq
        } else {
            let den_inv = JetExpr::from_poly(self.den.clone())
                .inverse()
                .expect("nonzero den");
            dn * den_inv
        }
    }

    /// Partial derivative with respect to `u⁽ᵒʳᵈᵉʳ⁾` or `v⁽ᵒʳᵈᵉʳ⁾` with the
    /// w-dependence eliminated through the constraint: for order 0 the
    /// chain terms `∂w/∂u = −v/(2w)`, `∂w/∂v = −u/(2w)` are included.
    pub fn partial_constrained(&self, var: JetVar) -> JetExpr {
        let direct = self.partial(var);
        if var.order() > 0 || var.is_w() {
            return direct;
        }
        let dw = self.partial(JetVar::W);
        if dw.is_zero() {
            return direct;
        }
        let other = if var.is_u() {
            JetExpr::v(0)
        } else {
            JetExpr::u(0)
        };
        let two_w = JetExpr::int(2) * JetExpr::w();
        let chain = -(other / two_w);
        direct + dw * chain
    }

    /// Grading under deg(∂ₓ) = 1, deg(u) = deg(v) = deg(w) = 0.
    pub fn degree(&self) -> Result<Degree, JetError> {
        if self.is_zero() {
            return Err(JetError::DegreeOfZero);
        }
        let gn = self.num.uniform_grading();
        let gd = self.den.uniform_grading();
        match (gn, gd) {
            (Some(a), Some(b)) => Ok(Degree::Homogeneous(a as i64 - b as i64)),
            _ => Ok(Degree::Inhomogeneous),
        }
    }

    /// Highest jet order appearing anywhere in the expression.
    pub fn max_jet_order(&self) -> u32 {
        let a = self.num.top_jet().map_or(0, |v| v.order());
        let b = self.den.top_jet().map_or(0, |v| v.order());
        a.max(b)
    }

    /// Evaluate at rational values for the jets, with `w` assigned too
    /// (callers are responsible for choosing `w² + uv = 1`).
    pub fn eval(&self, assign: &dyn Fn(JetVar) -> Q) -> Option<Q> {
        let d = self.den.eval(assign);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(assign) / d)
    }
}

/// Grading of a differential polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Degree {
    Homogeneous(i64),
    Inhomogeneous,
}

/// Split a polynomial `p + q·w` (w-degree ≤ 1) into `(p, q)`.
fn split_w(poly: &Poly) -> (Poly, Poly) {
    let mut p = Poly::zero();
    let mut qw = Poly::zero();
    for (m, c) in poly.terms() {
        match m.w_exponent() {
            0 => p.add_term(m.clone(), c.clone()),
            1 => qw.add_term(m.with_exponent(JetVar::W, 0), c.clone()),
            _ => unreachable!("w-degree must be reduced before splitting"),
        }
    }
    (p, qw)
}

/// Total x-derivative of a polynomial, as a rational expression
/// (the w chain rule introduces `1/(2w)`).
fn total_derive_poly(p: &Poly) -> JetExpr {
    let mut jet_part = Poly::zero();
    for (m, c) in p.terms() {
        for (v, e) in m.factors() {
            if v.is_w() {
                continue;
            }
            let raised = v.raised().expect("jet variable");
            let lowered = m.with_exponent(*v, e - 1).mul(&Monomial::var(raised));
            jet_part.add_term(lowered, c * Q::from(BigInt::from(*e)));
        }
    }
    let dw_part = p.partial(JetVar::W);
    let mut out = JetExpr::from_poly(jet_part);
    if !dw_part.is_zero() {
        // dw/dx = -(u_x v + u v_x)/(2w)
        let wx = -(JetExpr::u(1) * JetExpr::v(0) + JetExpr::u(0) * JetExpr::v(1))
            / (JetExpr::int(2) * JetExpr::w());
        out = out + JetExpr::from_poly(dw_part) * wx;
    }
    out
}

impl PartialEq for JetExpr {
    /// Exact equality decided by cross-multiplication (w-reduced).
    fn eq(&self, other: &Self) -> bool {
        let lhs = (&self.num * &other.den).reduce_w();
        let rhs = (&other.num * &self.den).reduce_w();
        lhs == rhs
    }
}

impl Eq for JetExpr {}

impl Add for JetExpr {
    type Output = JetExpr;
    fn add(self, rhs: JetExpr) -> JetExpr {
        &self + &rhs
    }
}

impl<'a, 'b> Add<&'b JetExpr> for &'a JetExpr {
    type Output = JetExpr;
    fn add(self, rhs: &'b JetExpr) -> JetExpr {
        let num = &self.num * &rhs.den + &(&rhs.num * &self.den);
        let den = &self.den * &rhs.den;
        JetExpr { num, den }.canonical()
    }
}

impl Sub for JetExpr {
    type Output = JetExpr;
    fn sub(self, rhs: JetExpr) -> JetExpr {
        &self - &rhs
    }
}

impl<'a, 'b> Sub<&'b JetExpr> for &'a JetExpr {
    type Output = JetExpr;
    fn sub(self, rhs: &'b JetExpr) -> JetExpr {
        let num = &self.num * &rhs.den - &(&rhs.num * &self.den);
        let den = &self.den * &rhs.den;
        JetExpr { num, den }.canonical()
    }
}

impl Neg for JetExpr {
    type Output = JetExpr;
    fn neg(self) -> JetExpr {
        JetExpr {
            num: -self.num,
            den: self.den,
        }
    }
}

impl Mul for JetExpr {
    type Output = JetExpr;
    fn mul(self, rhs: JetExpr) -> JetExpr {
        &self * &rhs
    }
}

impl<'a, 'b> Mul<&'b JetExpr> for &'a JetExpr {
    type Output = JetExpr;
    fn mul(self, rhs: &'b JetExpr) -> JetExpr {
        JetExpr {
            num: &self.num * &rhs.num,
            den: &self.den * &rhs.den,
        }
        .canonical()
    }
}

impl<'a> Add<&'a JetExpr> for JetExpr {
    type Output = JetExpr;
    fn add(self, rhs: &'a JetExpr) -> JetExpr {
        &self + rhs
    }
}

impl<'a> Sub<&'a JetExpr> for JetExpr {
    type Output = JetExpr;
    fn sub(self, rhs: &'a JetExpr) -> JetExpr {
        &self - rhs
    }
}

impl<'a> Mul<&'a JetExpr> for JetExpr {
    type Output = JetExpr;
    fn mul(self, rhs: &'a JetExpr) -> JetExpr {
        &self * rhs
    }
}

impl Div for JetExpr {
    type Output = JetExpr;
    fn div(self, rhs: JetExpr) -> JetExpr {
        let inv = rhs.inverse().expect("division by zero JetExpr");
        &self * &inv
    }
}

impl<'a, 'b> Div<&'b JetExpr> for &'a JetExpr {
    type Output = JetExpr;
    fn div(self, rhs: &'b JetExpr) -> JetExpr {
        let inv = rhs.inverse().expect("division by zero JetExpr");
        self * &inv
    }
}

impl fmt::Display for JetExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() && self.den.leading().map(|(_, c)| c.is_one()).unwrap_or(true) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
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

    #[test]
    fn constraint_is_conserved() {
        let c = w().pow(2) + u() * v();
        assert_eq!(c, JetExpr::one());
        assert!(c.jet_derive().is_zero());
    }

    #[test]
    fn derivative_of_jets() {
        assert_eq!(u().jet_derive(), JetExpr::u(1));
        assert_eq!(JetExpr::v(2).jet_derive(), JetExpr::v(3));
    }

    #[test]
    fn derivative_of_w() {
        let expected = -(JetExpr::u(1) * v() + u() * JetExpr::v(1))
            / (JetExpr::int(2) * w());
        assert_eq!(w().jet_derive(), expected);
    }

    #[test]
    fn rationalization_keeps_denominator_w_free() {
        let e = JetExpr::one() / w();
        assert_eq!(e.denominator().w_degree(), 0);
        // 1/w = w/(1-uv)
        let back = &e * &w();
        assert_eq!(back, JetExpr::one());
    }

    #[test]
    fn atom_cancellation() {
        let e = (u() * v() - u() * u() * v() * v()) / (u() * v());
        // = 1 - uv
        assert_eq!(e, JetExpr::one() - u() * v());
        assert!(e.denominator().is_constant());
    }

    #[test]
    fn grading() {
        let e = u() * JetExpr::v(1);
        assert_eq!(e.degree().unwrap(), Degree::Homogeneous(1));
        let f = u() * v() * w();
        assert_eq!(f.degree().unwrap(), Degree::Homogeneous(0));
        let g = JetExpr::u(1) * v() + w();
        assert_eq!(g.degree().unwrap(), Degree::Inhomogeneous);
        assert_eq!(JetExpr::zero().degree(), Err(JetError::DegreeOfZero));
    }

    #[test]
    fn constrained_partial() {
        // d/du (w) = -v/(2w)
        let d = w().partial_constrained(JetVar::u(0));
        let expected = -(v() / (JetExpr::int(2) * w()));
        assert_eq!(d, expected);
        // d/du (uv) = v without w involvement
        assert_eq!((u() * v()).partial_constrained(JetVar::u(0)), v());
    }

    #[test]
    fn second_derivative_of_w_is_rational_with_constraint_denominator() {
        let wxx = w().jet_derive_n(2);
        // sanity: 2w wxx + 2 wx^2 + (uv)'' = 0  (second derivative of the constraint)
        let wx = w().jet_derive();
        let lhs = JetExpr::int(2) * w() * wxx + JetExpr::int(2) * wx.pow(2)
            + (u() * v()).jet_derive_n(2);
        assert!(lhs.is_zero());
    }

    #[test]
    fn eval_simple() {
        // values must respect w² + uv = 1: u = 9/5, v = 1/5, w = 4/5
        let e = (u() + v()) / w();
        let val = e
            .eval(&|var| {
                if var == JetVar::u(0) {
                    q(9, 5)
                } else if var == JetVar::v(0) {
                    q(1, 5)
                } else if var == JetVar::W {
                    q(4, 5)
                } else {
                    q(0, 1)
                }
            })
            .unwrap();
        assert_eq!(val, q(5, 2));
    }
}
