//! Arbitrary-precision rational arithmetic, Bernoulli numbers, and dense
//! truncated univariate power series over the rationals.
//!
//! [`Rational`] values are always stored normalized (coprime, positive
//! denominator) and render in the canonical text form `num/den`, with the
//! denominator omitted when it is 1 (`7/5760`, `-1/30`, `2`). That form is
//! what the cache file and the CLI emit, and `str::parse` accepts it back.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// Exact rational scalar of the whole crate.
pub type Rational = num_rational::BigRational;

/// Rational from a machine integer.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Rational `num/den`. Panics on a zero denominator.
pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Exact division with an explicit error instead of a panic on zero.
pub fn checked_div(a: &Rational, b: &Rational) -> Result<Rational> {
    if b.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(a / b)
}

/// Integer power of a rational, allowing negative exponents on nonzero bases.
/// 0⁰ is 1.
pub fn pow_i(base: &Rational, exp: i64) -> Result<Rational> {
    if base.is_zero() {
        return match exp {
            0 => Ok(Rational::one()),
            e if e > 0 => Ok(Rational::zero()),
            _ => Err(Error::DivisionByZero),
        };
    }
    Ok(base.pow(exp as i32))
}

/// n! as a big integer.
pub fn factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    acc
}

/// Binomial coefficient C(n, k); zero when k > n.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Multinomial coefficient n! / (k₁!⋯kₘ!); zero unless Σkᵢ = n.
pub fn multinomial(n: u64, parts: &[u64]) -> BigInt {
    if parts.iter().sum::<u64>() != n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    let mut rest = n;
    for &k in parts {
        acc *= binomial(rest, k);
        rest -= k;
    }
    acc
}

/// Bernoulli number B_m from the recurrence Σ_{k=0}^{m} C(m+1,k) B_k = 0
/// (m > 0) with B_0 = 1. This convention gives B_1 = -1/2; only even indices
/// are consumed downstream, so the B_1 sign never matters.
pub fn bernoulli(m: u32) -> Rational {
    let mut table: Vec<Rational> = Vec::with_capacity(m as usize + 1);
    table.push(Rational::one());
    for j in 1..=m as u64 {
        let mut sum = Rational::zero();
        for (k, b) in table.iter().enumerate() {
            sum += Rational::from_integer(binomial(j + 1, k as u64)) * b;
        }
        let coeff = Rational::from_integer(binomial(j + 1, j));
        table.push(-sum / coeff);
    }
    table.pop().expect("table is nonempty")
}

/// Dense truncated power series Σ cᵢ tⁱ, closed under arithmetic at a fixed
/// truncation order. `coefficients[i]` is the coefficient of tⁱ and the
/// vector always has length `truncation_order + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    coefficients: Vec<Rational>,
}

impl TruncatedSeries {
    /// The zero series at the given truncation order.
    pub fn zero(order: usize) -> Self {
        TruncatedSeries {
            coefficients: vec![Rational::zero(); order + 1],
        }
    }

    /// A constant series at the given truncation order.
    pub fn constant(c: Rational, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coefficients[0] = c;
        s
    }

    /// Build from explicit coefficients; their count fixes the order.
    pub fn from_coefficients(coefficients: Vec<Rational>) -> Self {
        assert!(!coefficients.is_empty(), "a series needs a constant term");
        TruncatedSeries { coefficients }
    }

    pub fn truncation_order(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficient(&self, i: usize) -> &Rational {
        &self.coefficients[i]
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coefficients
    }

    pub fn add(&self, other: &TruncatedSeries) -> TruncatedSeries {
        assert_eq!(self.truncation_order(), other.truncation_order());
        let coefficients = self
            .coefficients
            .iter()
            .zip(&other.coefficients)
            .map(|(a, b)| a + b)
            .collect();
        TruncatedSeries { coefficients }
    }

    pub fn mul(&self, other: &TruncatedSeries) -> TruncatedSeries {
        assert_eq!(self.truncation_order(), other.truncation_order());
        let order = self.truncation_order();
        let mut coefficients = vec![Rational::zero(); order + 1];
        for (i, a) in self.coefficients.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coefficients.iter().take(order + 1 - i).enumerate() {
                if !b.is_zero() {
                    coefficients[i + j] += a * b;
                }
            }
        }
        TruncatedSeries { coefficients }
    }

    /// Multiplicative inverse up to the truncation order.
    pub fn reciprocal(&self) -> Result<TruncatedSeries> {
        if self.coefficients[0].is_zero() {
            return Err(Error::ZeroConstantTerm);
        }
        let order = self.truncation_order();
        let c0_inv = Rational::one() / &self.coefficients[0];
        let mut inv = vec![Rational::zero(); order + 1];
        inv[0] = c0_inv.clone();
        for i in 1..=order {
            let mut sum = Rational::zero();
            for j in 1..=i {
                if !self.coefficients[j].is_zero() {
                    sum += &self.coefficients[j] * &inv[i - j];
                }
            }
            inv[i] = -&c0_inv * sum;
        }
        Ok(TruncatedSeries { coefficients: inv })
    }

    /// Non-negative integer power by repeated multiplication.
    pub fn pow(&self, exp: u32) -> TruncatedSeries {
        let mut acc = TruncatedSeries::constant(Rational::one(), self.truncation_order());
        for _ in 0..exp {
            acc = acc.mul(self);
        }
        acc
    }
}

/// The normalized factor sinh(kt/2)/(kt/2) = Σ_{m≥0} (k/2)^{2m} t^{2m}/(2m+1)!
/// as a truncated series. All odd coefficients vanish and the constant term is 1.
pub fn sinh_norm_series(k: u32, order: usize) -> TruncatedSeries {
    let mut coefficients = vec![Rational::zero(); order + 1];
    let half_k = frac(k as i64, 2);
    let mut m = 0usize;
    while 2 * m <= order {
        let num = pow_i(&half_k, 2 * m as i64).expect("non-negative exponent");
        coefficients[2 * m] = num / Rational::from_integer(factorial(2 * m as u64 + 1));
        m += 1;
    }
    TruncatedSeries { coefficients }
}
