//! Expansion coefficients of `R(λ)^{±1/2}` near infinity, where
//! `R(λ) = ∏_{j=1}^{2n+2} (λ − λ_j)`.
//!
//! With ζ = 1/λ and the branch fixed so that `R^{1/2} ~ λ^{n+1}`,
//!
//! ```text
//! R(λ)^{1/2}  = λ^{n+1} Σ_{l≥0} c_{l−1} ζ^l,
//! R(λ)^{−1/2} = λ^{−n−1} Σ_{l≥0} ĉ_{l−1} ζ^l,
//! ```
//!
//! Two independent routes are provided: composition of the per-factor
//! binomial series, and the closed multinomial formula with factorial
//! coefficients. They must agree — exactly over ℚ, to near machine
//! precision over ℂ.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Scalar shared by the exact and floating instantiations of the series.
pub trait SeriesScalar:
    Clone
    + Zero
    + One
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_int(n: i64) -> Self;
}

impl SeriesScalar for BigRational {
    fn from_int(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
}

impl SeriesScalar for Complex64 {
    fn from_int(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
}

/// Coefficients of `(1 − x)^{1/2} = Σ_k s_k x^k` up to `x^kmax`.
fn sqrt_series<T: SeriesScalar>(kmax: usize) -> Vec<T> {
    let mut s = Vec::with_capacity(kmax + 1);
    s.push(T::one());
    for k in 1..=kmax {
        let prev = s[k - 1].clone();
        let num = T::from_int(2 * k as i64 - 3);
        let den = T::from_int(2 * k as i64);
        s.push(prev * num / den);
    }
    s
}

/// Coefficients of `(1 − x)^{−1/2} = Σ_k t_k x^k` up to `x^kmax`.
fn inv_sqrt_series<T: SeriesScalar>(kmax: usize) -> Vec<T> {
    let mut t = Vec::with_capacity(kmax + 1);
    t.push(T::one());
    for k in 1..=kmax {
        let prev = t[k - 1].clone();
        let num = T::from_int(2 * k as i64 - 1);
        let den = T::from_int(2 * k as i64);
        t.push(prev * num / den);
    }
    t
}

/// Truncated product of the per-branch-point series, returning the ζ^m
/// coefficients for m = 0..=mmax.
fn product_series<T: SeriesScalar>(lambdas: &[T], base: &[T], mmax: usize) -> Vec<T> {
    let mut acc = vec![T::zero(); mmax + 1];
    acc[0] = T::one();
    for lam in lambdas {
        // factor series: base[k] * lam^k
        let mut pw = T::one();
        let mut factor = Vec::with_capacity(mmax + 1);
        for b in base.iter().take(mmax + 1) {
            factor.push(b.clone() * pw.clone());
            pw = pw * lam.clone();
        }
        let mut next = vec![T::zero(); mmax + 1];
        for (i, a) in acc.iter().enumerate() {
            if *a == T::zero() {
                continue;
            }
            for (j, f) in factor.iter().enumerate() {
                if i + j > mmax {
                    break;
                }
                next[i + j] = next[i + j].clone() + a.clone() * f.clone();
            }
        }
        acc = next;
    }
    acc
}

/// `c_l` for `l ≥ −1` by power-series composition.
pub fn series_c<T: SeriesScalar>(l: i64, lambdas: &[T]) -> T {
    assert!(l >= -1);
    if l == -1 {
        return T::one();
    }
    let m = (l + 1) as usize;
    let base = sqrt_series::<T>(m);
    product_series(lambdas, &base, m)[m].clone()
}

/// `ĉ_l` for `l ≥ −1` by power-series composition.
pub fn series_chat<T: SeriesScalar>(l: i64, lambdas: &[T]) -> T {
    assert!(l >= -1);
    if l == -1 {
        return T::one();
    }
    let m = (l + 1) as usize;
    let base = inv_sqrt_series::<T>(m);
    product_series(lambdas, &base, m)[m].clone()
}

fn factorial_u128(n: u64) -> u128 {
    (1..=n as u128).product::<u128>().max(1)
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a.max(1)
}

/// Per-factor multinomial weight `(2j)! / (4^j (j!)² (2j − 1))` as an exact
/// fraction; the `j = 0` weight is `−1` through the `(2·0 − 1)` factor.
fn weight_sqrt<T: SeriesScalar>(j: u64) -> T {
    let num = factorial_u128(2 * j);
    let mut den = factorial_u128(j);
    den = den * den * (1u128 << (2 * j as u32));
    let odd = 2 * j as i128 - 1;
    let den = den * odd.unsigned_abs();
    let g = gcd_u128(num, den);
    let val = T::from_int((num / g) as i64) / T::from_int((den / g) as i64);
    if odd < 0 {
        -val
    } else {
        val
    }
}

/// Per-factor multinomial weight `(2j)! / (4^j (j!)²)`.
fn weight_inv_sqrt<T: SeriesScalar>(j: u64) -> T {
    let num = factorial_u128(2 * j);
    let mut den = factorial_u128(j);
    den = den * den * (1u128 << (2 * j as u32));
    let g = gcd_u128(num, den);
    T::from_int((num / g) as i64) / T::from_int((den / g) as i64)
}

fn multinomial_sum<T: SeriesScalar>(l: i64, lambdas: &[T], weight: &dyn Fn(u64) -> T) -> T {
    assert!(l >= -1);
    assert!(l <= 16, "factorial table limited to l <= 16");
    if l == -1 {
        return T::one();
    }
    let total = (l + 1) as u64;
    let mut acc = T::zero();
    // depth-first over compositions of `total` into lambdas.len() parts
    fn recurse<T: SeriesScalar>(
        lambdas: &[T],
        pos: usize,
        remaining: u64,
        partial: T,
        weight: &dyn Fn(u64) -> T,
        acc: &mut T,
    ) {
        if pos == lambdas.len() - 1 {
            let mut pw = T::one();
            for _ in 0..remaining {
                pw = pw * lambdas[pos].clone();
            }
            *acc = acc.clone() + partial * weight(remaining) * pw;
            return;
        }
        let mut pw = T::one();
        for j in 0..=remaining {
            let term = partial.clone() * weight(j) * pw.clone();
            recurse(lambdas, pos + 1, remaining - j, term, weight, acc);
            pw = pw * lambdas[pos].clone();
        }
    }
    recurse(lambdas, 0, total, T::one(), weight, &mut acc);
    acc
}

/// `c_l` by the closed multinomial formula (independent oracle route).
pub fn series_c_multinomial<T: SeriesScalar>(l: i64, lambdas: &[T]) -> T {
    // the product of the per-factor sign conventions is +1 for an even
    // number of branch points
    debug_assert!(lambdas.len() % 2 == 0);
    multinomial_sum(l, lambdas, &weight_sqrt::<T>)
}

/// `ĉ_l` by the closed multinomial formula (independent oracle route).
pub fn series_chat_multinomial<T: SeriesScalar>(l: i64, lambdas: &[T]) -> T {
    multinomial_sum(l, lambdas, &weight_inv_sqrt::<T>)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::q;

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn leading_coefficients() {
        let lam: Vec<BigRational> = vec![rat(1), rat(2), rat(3), rat(4)];
        assert_eq!(series_c(-1, &lam), rat(1));
        assert_eq!(series_chat(-1, &lam), rat(1));
        // c₀ = −½ Σ λ_j = −5, ĉ₀ = +5
        assert_eq!(series_c(0, &lam), rat(-5));
        assert_eq!(series_chat(0, &lam), rat(5));
    }

    #[test]
    fn dual_routes_agree_exactly() {
        let lam: Vec<BigRational> = vec![q(1, 2), q(-3, 4), rat(2), q(7, 5)];
        for l in -1..=8 {
            assert_eq!(series_c(l, &lam), series_c_multinomial(l, &lam), "c_{l}");
            assert_eq!(
                series_chat(l, &lam),
                series_chat_multinomial(l, &lam),
                "chat_{l}"
            );
        }
    }

    #[test]
    fn dual_routes_agree_in_float() {
        let lam: Vec<Complex64> = vec![
            Complex64::new(0.5, 0.1),
            Complex64::new(-0.75, -0.2),
            Complex64::new(2.0, 0.3),
            Complex64::new(1.4, -0.6),
        ];
        for l in -1..=10 {
            let a = series_c(l, &lam);
            let b = series_c_multinomial(l, &lam);
            assert!((a - b).norm() <= 1e-12 * (1.0 + a.norm()), "c_{l}");
        }
    }

    #[test]
    fn convolution_identity_exact() {
        // Σ_{l=0}^k c_{k−l−1} ĉ_{l−1} = δ_{k,0}
        for genus in 1..=3usize {
            let count = 2 * genus + 2;
            let lam: Vec<BigRational> = (0..count)
                .map(|i| q(2 * i as i64 + 1, (i as i64 % 3) + 2))
                .collect();
            for k in 0..=10i64 {
                let mut acc = BigRational::zero();
                for l in 0..=k {
                    acc += series_c(k - l - 1, &lam) * series_chat(l - 1, &lam);
                }
                let expected = if k == 0 { rat(1) } else { rat(0) };
                assert_eq!(acc, expected, "genus {genus}, k {k}");
            }
        }
    }
}
