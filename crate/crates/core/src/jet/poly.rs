//! Multivariate polynomials with exact rational coefficients over the jet
//! alphabet.

use super::monomial::{JetVar, Monomial};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

pub type Q = BigRational;

/// Rational number from an integer pair.
pub fn q(num: i64, den: i64) -> Q {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// A polynomial stored as monomial → coefficient, ascending in the
/// monomial order. No zero coefficients are kept.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Q>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        let mut p = Poly::default();
        if !c.is_zero() {
            p.terms.insert(Monomial::one(), c);
        }
        p
    }

    pub fn var(v: JetVar) -> Self {
        Poly::term(Monomial::var(v), Q::one())
    }

    pub fn term(m: Monomial, c: Q) -> Self {
        let mut p = Poly::default();
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.keys().next().unwrap().is_one())
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    /// Leading (largest) term in the monomial order.
    pub fn leading(&self) -> Option<(&Monomial, &Q)> {
        self.terms.iter().next_back()
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(k, a)| (k.mul(m), a.clone()))
                .collect(),
        }
    }

    /// Maximum w-exponent over all terms.
    pub fn w_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.w_exponent()).max().unwrap_or(0)
    }

    pub fn contains_var(&self, v: JetVar) -> bool {
        self.terms.keys().any(|m| m.exponent(v) > 0)
    }

    /// Highest jet variable present in any term.
    pub fn top_jet(&self) -> Option<JetVar> {
        self.terms.keys().filter_map(|m| m.top_jet()).max()
    }

    /// Grading if every term has the same grading, else `None`.
    /// The zero polynomial reports `Some(0)`; callers that must
    /// distinguish it check `is_zero` first.
    pub fn uniform_grading(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(|m| m.grading());
        let first = match it.next() {
            Some(g) => g,
            None => return Some(0),
        };
        if it.all(|g| g == first) {
            Some(first)
        } else {
            None
        }
    }

    /// Formal partial derivative with respect to a single variable.
    pub fn partial(&self, v: JetVar) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e == 0 {
                continue;
            }
            let lowered = m.with_exponent(v, e - 1);
            out.add_term(lowered, c * Q::from(BigInt::from(e)));
        }
        out
    }

    /// Rewrite `w^k` with `k ≥ 2` as `w^(k mod 2) (1 - uv)^(k div 2)`.
    pub fn reduce_w(&self) -> Poly {
        if self.w_degree() < 2 {
            return self.clone();
        }
        let one_minus_uv = Poly::one()
            - Poly::term(
                Monomial::var(JetVar::u(0)).mul(&Monomial::var(JetVar::v(0))),
                Q::one(),
            );
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let k = m.w_exponent();
            if k < 2 {
                out.add_term(m.clone(), c.clone());
                continue;
            }
            let base = m.with_exponent(JetVar::W, k % 2);
            let mut pw = Poly::term(base, c.clone());
            for _ in 0..(k / 2) {
                pw = &pw * &one_minus_uv;
            }
            out = out + pw;
        }
        out
    }

    /// Exact polynomial division; `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (dm, dc) = d.leading()?;
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while let Some((rm, rc)) = rem.leading() {
            let qm = rm.div(dm)?;
            let qc = rc / dc;
            let t = Poly::term(qm, qc);
            rem = rem - &t * d;
            quot = quot + t;
        }
        Some(quot)
    }

    /// Evaluate with `w` and every jet mapped to rational values
    /// (used only by tests).
    pub fn eval(&self, assign: &dyn Fn(JetVar) -> Q) -> Q {
        let mut acc = Q::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in m.factors() {
                for _ in 0..*e {
                    t *= assign(*v);
                }
            }
            acc += t;
        }
        acc
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        let mut out = self;
        for (m, c) in rhs.terms {
            out.add_term(m, c);
        }
        out
    }
}

impl<'a> Add<&'a Poly> for Poly {
    type Output = Poly;
    fn add(self, rhs: &'a Poly) -> Poly {
        let mut out = self;
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        let mut out = self;
        for (m, c) in rhs.terms {
            out.add_term(m, -c);
        }
        out
    }
}

impl<'a> Sub<&'a Poly> for Poly {
    type Output = Poly;
    fn sub(self, rhs: &'a Poly) -> Poly {
        let mut out = self;
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect(),
        }
    }
}

impl<'a, 'b> Mul<&'b Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &'b Poly) -> Poly {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs} {m}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u() -> Poly {
        Poly::var(JetVar::u(0))
    }
    fn v() -> Poly {
        Poly::var(JetVar::v(0))
    }
    fn w() -> Poly {
        Poly::var(JetVar::W)
    }

    #[test]
    fn w_reduction() {
        // w^2 -> 1 - uv, w^3 -> w(1 - uv)
        let w2 = (&w() * &w()).reduce_w();
        assert_eq!(w2, Poly::one() - &u() * &v());
        let w3 = (&(&w() * &w()) * &w()).reduce_w();
        assert_eq!(w3, w() - &(&u() * &v()) * &w());
    }

    #[test]
    fn exact_division() {
        let p = &(u() + v()) * &(u() - v());
        let qt = p.div_exact(&(u() + v())).unwrap();
        assert_eq!(qt, u() - v());
        assert!((u() + Poly::one()).div_exact(&v()).is_none());
    }

    #[test]
    fn partial_derivative() {
        let p = &u() * &u(); // u^2
        assert_eq!(p.partial(JetVar::u(0)), u().scale(&q(2, 1)));
        assert_eq!(p.partial(JetVar::v(0)), Poly::zero());
    }
}
