//! Formal x-antidifferentiation of differential polynomials.
//!
//! The integrand is split into graded pieces (the total derivative is
//! grading-homogeneous), a candidate basis is grown by greedily inverting
//! the derivative on monomials (lower one jet by one order), and an exact
//! sparse linear solve over ℚ picks the combination whose derivative
//! reproduces the integrand. The result is verified by re-differentiation;
//! failure is reported as an error, never patched over.

use super::expr::{JetError, JetExpr};
use super::monomial::{JetVar, Monomial};
use super::poly::{Poly, Q};
use num_traits::{One, Zero};
use std::collections::{BTreeMap, BTreeSet};

const MAX_ROUNDS: usize = 8;
const MAX_CANDIDATES: usize = 6000;

/// A basis element `monomial / (uv − 1)^e`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Basis {
    mono: Monomial,
    den_exp: u32,
}

impl Basis {
    fn to_expr(&self, den_base: &Poly) -> JetExpr {
        let mut den = Poly::one();
        for _ in 0..self.den_exp {
            den = &den * den_base;
        }
        JetExpr::from_ratio(Poly::term(self.mono.clone(), Q::one()), den)
            .expect("denominator is nonzero")
    }
}

/// Antiderivative with zero constant part: returns `X` with
/// `jet_derive(X) = g`, or an error if `g` is not an exact derivative in
/// the supported form.
pub fn antiderivative(g: &JetExpr) -> Result<JetExpr, JetError> {
    if g.is_zero() {
        return Ok(JetExpr::zero());
    }
    let den_base = Poly::term(
        Monomial::var(JetVar::u(0)).mul(&Monomial::var(JetVar::v(0))),
        Q::one(),
    ) - Poly::one();
    let den_exp = match power_of(g.denominator(), &den_base) {
        Some(e) => e,
        None => {
            return Err(JetError::NotIntegrable(format!(
                "denominator {} is not a power of uv - 1",
                g.denominator()
            )))
        }
    };

    // Split by grading; each graded piece integrates independently.
    let mut pieces: BTreeMap<u32, Poly> = BTreeMap::new();
    for (m, c) in g.numerator().terms() {
        pieces
            .entry(m.grading())
            .or_insert_with(Poly::zero)
            .add_term(m.clone(), c.clone());
    }
    let mut total = JetExpr::zero();
    for (grading, piece) in pieces {
        if grading == 0 {
            return Err(JetError::NotIntegrable(
                "integrand has a grading-zero part".into(),
            ));
        }
        let piece_expr = divide_by_power(piece, den_exp, &den_base);
        total = total + integrate_piece(&piece_expr, grading - 1, den_exp, &den_base)?;
    }
    let check = total.jet_derive();
    if &check != g {
        return Err(JetError::Inconsistent(
            "re-differentiation of the antiderivative does not reproduce the integrand".into(),
        ));
    }
    Ok(total)
}

fn divide_by_power(num: Poly, e: u32, den_base: &Poly) -> JetExpr {
    let mut den = Poly::one();
    for _ in 0..e {
        den = &den * den_base;
    }
    JetExpr::from_ratio(num, den).expect("nonzero denominator")
}

/// `den = c · base^e`? Returns `e`.
fn power_of(den: &Poly, base: &Poly) -> Option<u32> {
    let mut d = den.clone();
    let mut e = 0;
    loop {
        if d.is_constant() {
            return Some(e);
        }
        d = d.div_exact(base)?;
        e += 1;
    }
}

fn integrate_piece(
    g: &JetExpr,
    target_grading: u32,
    den_exp: u32,
    den_base: &Poly,
) -> Result<JetExpr, JetError> {
    let mut candidates: BTreeSet<Basis> = BTreeSet::new();
    let seed_exps: Vec<u32> = (den_exp.saturating_sub(1)..=den_exp + 1).collect();
    for (m, _) in g.numerator().terms() {
        seed_from(m, &seed_exps, target_grading, &mut candidates);
    }

    for _round in 0..MAX_ROUNDS {
        let basis: Vec<Basis> = candidates.iter().cloned().collect();
        let derivs: Vec<JetExpr> = basis
            .iter()
            .map(|b| b.to_expr(den_base).jet_derive())
            .collect();

        if let Some(coeffs) = solve_for(&derivs, g, den_base) {
            let mut x = JetExpr::zero();
            for (b, c) in basis.iter().zip(coeffs.iter()) {
                if !c.is_zero() {
                    x = x + JetExpr::constant(c.clone()) * b.to_expr(den_base);
                }
            }
            return Ok(x);
        }

        // Expand: greedy preimages of every monomial seen in the derivative
        // supports (cancellation inside g can hide needed candidates).
        let before = candidates.len();
        for d in &derivs {
            let e = power_of(d.denominator(), den_base).unwrap_or(den_exp);
            let exps: Vec<u32> = (e.saturating_sub(1)..=e).collect();
            for (m, _) in d.numerator().terms() {
                seed_from(m, &exps, target_grading, &mut candidates);
            }
        }
        if candidates.len() == before || candidates.len() > MAX_CANDIDATES {
            break;
        }
    }
    Err(JetError::NotIntegrable(format!(
        "no antiderivative found in the candidate space for {g}"
    )))
}

/// Insert every "lower one jet by one order" preimage of `m`.
fn seed_from(m: &Monomial, den_exps: &[u32], target_grading: u32, out: &mut BTreeSet<Basis>) {
    for (v, e) in m.factors() {
        if v.is_w() || v.order() == 0 {
            continue;
        }
        let lowered_var = v.lowered().expect("order >= 1");
        let lowered = m
            .with_exponent(*v, e - 1)
            .mul(&Monomial::var(lowered_var));
        if lowered.grading() != target_grading || lowered.w_exponent() > 1 {
            continue;
        }
        if lowered.is_one() {
            continue; // constants span the derivative kernel
        }
        for &de in den_exps {
            out.insert(Basis {
                mono: lowered.clone(),
                den_exp: de,
            });
        }
    }
}

/// Exact sparse solve of `Σ xᵢ·derivᵢ = g` over ℚ, all expressions brought
/// to the common denominator `(1 − uv)^emax`.
fn solve_for(derivs: &[JetExpr], g: &JetExpr, den_base: &Poly) -> Option<Vec<Q>> {
    let exps: Vec<u32> = derivs
        .iter()
        .chain(std::iter::once(g))
        .map(|d| power_of(d.denominator(), den_base).expect("power-of-(uv-1) denominator"))
        .collect();
    let emax = exps.iter().copied().max().unwrap_or(0);

    let lift = |expr: &JetExpr, e: u32| -> Poly {
        let mut p = expr.numerator().clone();
        for _ in 0..(emax - e) {
            p = &p * den_base;
        }
        p
    };

    let mut coords: BTreeMap<Monomial, usize> = BTreeMap::new();
    let index = |m: &Monomial, coords: &mut BTreeMap<Monomial, usize>| -> usize {
        let next = coords.len();
        *coords.entry(m.clone()).or_insert(next)
    };

    let mut cols: Vec<BTreeMap<usize, Q>> = Vec::with_capacity(derivs.len());
    for (d, &e) in derivs.iter().zip(&exps) {
        let p = lift(d, e);
        let mut col = BTreeMap::new();
        for (m, c) in p.terms() {
            col.insert(index(m, &mut coords), c.clone());
        }
        cols.push(col);
    }
    let gp = lift(g, exps[derivs.len()]);
    let mut rhs: BTreeMap<usize, Q> = BTreeMap::new();
    for (m, c) in gp.terms() {
        rhs.insert(index(m, &mut coords), c.clone());
    }

    gauss_jordan(cols, rhs, derivs.len())
}

/// Row-based Gauss–Jordan elimination over ℚ on the augmented system;
/// returns one exact solution if the system is consistent. Unknowns are
/// the columns `0..n`; the right-hand side is stored under column `n`.
fn gauss_jordan(
    cols: Vec<BTreeMap<usize, Q>>,
    rhs: BTreeMap<usize, Q>,
    n: usize,
) -> Option<Vec<Q>> {
    let mut rows: BTreeMap<usize, BTreeMap<usize, Q>> = BTreeMap::new();
    for (j, col) in cols.iter().enumerate() {
        for (r, v) in col {
            rows.entry(*r).or_default().insert(j, v.clone());
        }
    }
    for (r, v) in &rhs {
        rows.entry(*r).or_default().insert(n, v.clone());
    }
    let mut rows: Vec<BTreeMap<usize, Q>> = rows.into_values().collect();
    let mut pivot_row_of: Vec<Option<usize>> = vec![None; n];
    let mut used: Vec<bool> = vec![false; rows.len()];

    for j in 0..n {
        let Some(pr) = rows
            .iter()
            .enumerate()
            .find(|(i, row)| !used[*i] && row.contains_key(&j))
            .map(|(i, _)| i)
        else {
            continue; // dependent column; its unknown stays zero
        };
        let inv = Q::one() / rows[pr][&j].clone();
        let prow: BTreeMap<usize, Q> = rows[pr].iter().map(|(k, v)| (*k, v * &inv)).collect();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == pr || !row.contains_key(&j) {
                continue;
            }
            let f = -row[&j].clone();
            for (k, v) in &prow {
                let entry = row.entry(*k).or_insert_with(Q::zero);
                *entry += &f * v;
                if entry.is_zero() {
                    row.remove(k);
                }
            }
        }
        rows[pr] = prow;
        used[pr] = true;
        pivot_row_of[j] = Some(pr);
    }

    let mut solution = vec![Q::zero(); n];
    for j in 0..n {
        if let Some(pr) = pivot_row_of[j] {
            if let Some(v) = rows[pr].get(&n) {
                solution[j] = v.clone();
            }
        }
    }
    // The greedy pivot order is not a strict RREF; confirm the candidate
    // solution against the original system before accepting it.
    let mut residual = rhs;
    for (j, col) in cols.iter().enumerate() {
        if solution[j].is_zero() {
            continue;
        }
        for (r, v) in col {
            let entry = residual.entry(*r).or_insert_with(Q::zero);
            *entry -= &solution[j] * v;
            if entry.is_zero() {
                residual.remove(r);
            }
        }
    }
    if residual.is_empty() {
        Some(solution)
    } else {
        None
    }
}
