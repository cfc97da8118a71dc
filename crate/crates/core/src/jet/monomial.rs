//! Jet variables and monomials.
//!
//! The alphabet consists of the constraint symbol `w` and the jets
//! `u⁽ⁱ⁾ = ∂ₓⁱu`, `v⁽ⁱ⁾ = ∂ₓⁱv`. Variables are enumerated as
//! `w ↦ 0`, `u⁽ⁱ⁾ ↦ 1 + 2i`, `v⁽ⁱ⁾ ↦ 2 + 2i`, and monomials are compared
//! in degree-reverse-lexicographic order over that enumeration.

use smallvec::SmallVec;
use std::cmp::Ordering;
use std::fmt;

/// A single variable of the jet alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct JetVar(pub u32);

impl JetVar {
    pub const W: JetVar = JetVar(0);

    /// The jet `u⁽ᵒʳᵈᵉʳ⁾`.
    pub fn u(order: u32) -> Self {
        JetVar(1 + 2 * order)
    }

    /// The jet `v⁽ᵒʳᵈᵉʳ⁾`.
    pub fn v(order: u32) -> Self {
        JetVar(2 + 2 * order)
    }

    pub fn is_w(self) -> bool {
        self.0 == 0
    }

    pub fn is_u(self) -> bool {
        self.0 != 0 && self.0 % 2 == 1
    }

    pub fn is_v(self) -> bool {
        self.0 != 0 && self.0 % 2 == 0
    }

    /// Number of x-derivatives carried by the variable (0 for `w`).
    pub fn order(self) -> u32 {
        if self.0 == 0 {
            0
        } else {
            (self.0 - 1) / 2
        }
    }

    /// The variable obtained by one more x-derivative.
    ///
    /// `w` has no raw successor (its derivative is rational); callers
    /// handle it separately.
    pub fn raised(self) -> Option<JetVar> {
        if self.is_w() {
            None
        } else {
            Some(JetVar(self.0 + 2))
        }
    }

    /// The variable with one fewer x-derivative, if any.
    pub fn lowered(self) -> Option<JetVar> {
        if self.is_w() || self.order() == 0 {
            None
        } else {
            Some(JetVar(self.0 - 2))
        }
    }

    /// Grading weight: jets contribute their derivative order, `w`, `u`, `v`
    /// contribute zero.
    pub fn grading(self) -> u32 {
        self.order()
    }
}

impl fmt::Display for JetVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_w() {
            return write!(f, "w");
        }
        let base = if self.is_u() { "u" } else { "v" };
        match self.order() {
            0 => write!(f, "{base}"),
            k @ 1..=3 => write!(f, "{base}_{}", "x".repeat(k as usize)),
            k => write!(f, "{base}_x{k}"),
        }
    }
}

/// A power product of jet variables, kept sorted by variable index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    factors: SmallVec<[(JetVar, u32); 6]>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(v: JetVar) -> Self {
        Self::var_pow(v, 1)
    }

    pub fn var_pow(v: JetVar, e: u32) -> Self {
        let mut m = Monomial::default();
        if e > 0 {
            m.factors.push((v, e));
        }
        m
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factors(&self) -> &[(JetVar, u32)] {
        &self.factors
    }

    pub fn exponent(&self, v: JetVar) -> u32 {
        self.factors
            .iter()
            .find(|(x, _)| *x == v)
            .map_or(0, |(_, e)| *e)
    }

    pub fn total_degree(&self) -> u32 {
        self.factors.iter().map(|(_, e)| e).sum()
    }

    /// Grading under deg(∂ₓ) = 1, deg(u) = deg(v) = deg(w) = 0.
    pub fn grading(&self) -> u32 {
        self.factors.iter().map(|(v, e)| v.grading() * e).sum()
    }

    pub fn w_exponent(&self) -> u32 {
        self.exponent(JetVar::W)
    }

    /// Highest derivative order among the jets present (None if jet-free).
    pub fn top_jet(&self) -> Option<JetVar> {
        self.factors
            .iter()
            .map(|(v, _)| *v)
            .filter(|v| !v.is_w())
            .max()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out: SmallVec<[(JetVar, u32); 6]> = SmallVec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.factors.len() && j < other.factors.len() {
            let (va, ea) = self.factors[i];
            let (vb, eb) = other.factors[j];
            match va.cmp(&vb) {
                Ordering::Less => {
                    out.push((va, ea));
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((vb, eb));
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((va, ea + eb));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.factors[i..]);
        out.extend_from_slice(&other.factors[j..]);
        Monomial { factors: out }
    }

    /// Exact monomial quotient, or `None` when `other ∤ self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out: SmallVec<[(JetVar, u32); 6]> = SmallVec::new();
        for (v, e) in &self.factors {
            out.push((*v, *e));
        }
        for (v, e) in &other.factors {
            let slot = out.iter_mut().find(|(x, _)| x == v)?;
            if slot.1 < *e {
                return None;
            }
            slot.1 -= e;
        }
        out.retain(|(_, e)| *e > 0);
        Some(Monomial { factors: out })
    }

    /// Replace one variable's exponent, removing it at zero.
    pub fn with_exponent(&self, v: JetVar, e: u32) -> Monomial {
        let mut out = self.clone();
        out.factors.retain(|(x, _)| *x != v);
        if e > 0 {
            let pos = out
                .factors
                .iter()
                .position(|(x, _)| *x > v)
                .unwrap_or(out.factors.len());
            out.factors.insert(pos, (v, e));
        }
        out
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    /// Degree-reverse-lexicographic order: higher total degree wins; on a
    /// tie the monomial with the *smaller* exponent on the highest-indexed
    /// differing variable is the larger one.
    fn cmp(&self, other: &Self) -> Ordering {
        match self.total_degree().cmp(&other.total_degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let (mut i, mut j) = (self.factors.len(), other.factors.len());
        loop {
            match (i, j) {
                (0, 0) => return Ordering::Equal,
                (0, _) => {
                    // other still has a high variable with positive exponent
                    return Ordering::Greater;
                }
                (_, 0) => return Ordering::Less,
                _ => {}
            }
            let (va, ea) = self.factors[i - 1];
            let (vb, eb) = other.factors[j - 1];
            match va.cmp(&vb) {
                Ordering::Greater => return Ordering::Less,
                Ordering::Less => return Ordering::Greater,
                Ordering::Equal => match ea.cmp(&eb) {
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Equal => {
                        i -= 1;
                        j -= 1;
                    }
                },
            }
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (v, e) in &self.factors {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degrevlex_orders_by_total_degree_first() {
        let u = Monomial::var(JetVar::u(0));
        let uv = u.mul(&Monomial::var(JetVar::v(0)));
        assert!(uv > u);
    }

    #[test]
    fn degrevlex_tie_break() {
        // deg equal: u·u_x vs v·v_x; highest var is v_x (index 4) vs u_x (3):
        // the monomial containing the higher variable is *smaller*.
        let a = Monomial::var(JetVar::u(0)).mul(&Monomial::var(JetVar::u(1)));
        let b = Monomial::var(JetVar::v(0)).mul(&Monomial::var(JetVar::v(1)));
        assert!(a > b);
    }

    #[test]
    fn monomial_division() {
        let m = Monomial::var_pow(JetVar::u(0), 2).mul(&Monomial::var(JetVar::W));
        let d = Monomial::var(JetVar::u(0));
        let q = m.div(&d).unwrap();
        assert_eq!(q.exponent(JetVar::u(0)), 1);
        assert_eq!(q.w_exponent(), 1);
        assert!(m.div(&Monomial::var(JetVar::v(0))).is_none());
    }
}
