//! Normalized double Hurwitz weights H•_{χ∞}((d),ν)/r! via the closed
//! sinh-product formula, r = −χ∞ + 1 + l(ν).
//!
//! The weight is d^{−χ∞+l(ν)}/|Aut ν| · [t^{2g}] ∏_{k≥1}(sinh(kt/2)/(kt/2))^{c_k}
//! with c₁ = (number of 1-parts) − 1 and c_k = (number of k-parts) for k > 1.
//! When ν has no 1-part, c₁ = −1 and the reciprocal factor telescopes against
//! the factor of the smallest part h:
//!
//!   (sinh(t/2)/(t/2))⁻¹ (sinh(ht/2)/(ht/2)) = (1/h)(e^{(h−1)t/2} + ⋯ + e^{(−h+1)t/2})
//!
//! whose even coefficients are explicit power sums. Both the closed-form
//! branch and a generic truncated-series pipeline are implemented; the series
//! path is the internal oracle for the branch case analysis.

use num_traits::{One, Zero};

use crate::exact::{factorial, frac, pow_i, rat, sinh_norm_series, Rational, TruncatedSeries};
use crate::partitions::{automorphism_order, Partition};
use crate::{Error, Result};

/// Multiplicity exponents c_k of the sinh product for ν: c₁ is shifted down
/// by one, every other c_k is the plain part multiplicity.
fn cycle_exponents(nu: &Partition) -> Vec<(u32, i64)> {
    let mut c: Vec<(u32, i64)> = nu
        .multiplicities()
        .into_iter()
        .map(|(v, m)| (v, m as i64))
        .collect();
    match c.iter_mut().find(|(v, _)| *v == 1) {
        Some(entry) => entry.1 -= 1,
        None => c.push((1, -1)),
    }
    c.retain(|&(_, e)| e != 0);
    c
}

/// [t^{2m}] of (sinh(ht/2)/(ht/2)) / (sinh(t/2)/(t/2)), h ≥ 2, in closed form.
fn telescoped_coefficient(h: u32, m: usize) -> Rational {
    let ls: Vec<u32> = if h % 2 == 0 {
        (1..h).step_by(2).collect()
    } else {
        (2..h).step_by(2).collect()
    };
    let mut power_sum = Rational::zero();
    for l in ls {
        power_sum += pow_i(&rat(l as i64), 2 * m as i64).expect("non-negative power");
    }
    let mut coeff = power_sum
        / (frac(h as i64, 1)
            * pow_i(&rat(2), 2 * m as i64 - 1).expect("nonzero base")
            * Rational::from_integer(factorial(2 * m as u64)));
    if h % 2 == 1 && m == 0 {
        coeff += frac(1, h as i64);
    }
    coeff
}

fn telescoped_series(h: u32, order: usize) -> TruncatedSeries {
    let mut coefficients = vec![Rational::zero(); order + 1];
    let mut m = 0usize;
    while 2 * m <= order {
        coefficients[2 * m] = telescoped_coefficient(h, m);
        m += 1;
    }
    TruncatedSeries::from_coefficients(coefficients)
}

/// [t^{2·g_inf}] of ∏_k (sinh(kt/2)/(kt/2))^{c_k} — fast path with the two
/// branch closed forms.
pub fn sinh_product_coefficient(nu: &Partition, g_inf: u32) -> Rational {
    let order = 2 * g_inf as usize;
    let exponents = cycle_exponents(nu);
    let mut series = TruncatedSeries::constant(Rational::one(), order);
    if exponents.iter().any(|&(_, e)| e < 0) {
        // No 1-part: fold the reciprocal against the smallest part's factor.
        let h = nu.parts().last().copied().expect("nu is nonempty");
        series = series.mul(&telescoped_series(h, order));
        for (k, e) in exponents {
            if e < 0 {
                continue;
            }
            let exp = if k == h { e - 1 } else { e };
            if exp > 0 {
                series = series.mul(&sinh_norm_series(k, order).pow(exp as u32));
            }
        }
    } else {
        for (k, e) in exponents {
            series = series.mul(&sinh_norm_series(k, order).pow(e as u32));
        }
    }
    series.coefficient(order).clone()
}

/// Same coefficient through the generic truncated-series pipeline: build each
/// factor, multiply, and divide once by sinh(t/2)/(t/2) when c₁ = −1.
pub fn sinh_product_coefficient_series(nu: &Partition, g_inf: u32) -> Result<Rational> {
    let order = 2 * g_inf as usize;
    let mut series = TruncatedSeries::constant(Rational::one(), order);
    let mut needs_reciprocal = false;
    for (k, e) in cycle_exponents(nu) {
        if e < 0 {
            needs_reciprocal = true;
        } else {
            series = series.mul(&sinh_norm_series(k, order).pow(e as u32));
        }
    }
    if needs_reciprocal {
        series = series.mul(&sinh_norm_series(1, order).reciprocal()?);
    }
    Ok(series.coefficient(order).clone())
}

/// H•_{χ∞}((d),ν)/(−χ∞+1+l(ν))! with χ∞ = 2−2·g_inf, exactly.
pub fn hurwitz_weight(d: u32, nu: &Partition, g_inf: u32) -> Result<Rational> {
    if nu.size() != d {
        return Err(Error::SizeMismatch(nu.size() as usize, d as usize));
    }
    let exp = 2 * g_inf as i64 - 2 + nu.len() as i64;
    let power = pow_i(&rat(d as i64), exp)?;
    let aut = Rational::from_integer(automorphism_order(nu));
    Ok(power / aut * sinh_product_coefficient(nu, g_inf))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::double_hurwitz_via_characters;
    use crate::exact::frac;
    use crate::partitions::{centralizer_order, enumerate_partitions};

    #[test]
    fn coefficient_examples() {
        // c₁ = 1: coefficient of t² in sinh(t/2)/(t/2).
        assert_eq!(
            sinh_product_coefficient(&Partition::new(vec![1, 1]), 1),
            frac(1, 24)
        );
        // §-branch with h = 2: (1/(2·2¹·2!))·1² = 1/8.
        assert_eq!(
            sinh_product_coefficient(&Partition::new(vec![2]), 1),
            frac(1, 8)
        );
        // Every normalized factor starts at 1.
        for d in 1..=8u32 {
            for nu in enumerate_partitions(d) {
                assert_eq!(
                    sinh_product_coefficient(&nu, 0),
                    frac(1, 1),
                    "constant term for {nu}"
                );
            }
        }
    }

    #[test]
    fn closed_form_branch_matches_series_pipeline() {
        for d in 1..=8u32 {
            for nu in enumerate_partitions(d) {
                for g_inf in 0..=3u32 {
                    let fast = sinh_product_coefficient(&nu, g_inf);
                    let generic = sinh_product_coefficient_series(&nu, g_inf).unwrap();
                    assert_eq!(fast, generic, "nu={nu} g_inf={g_inf}");
                }
            }
        }
    }

    #[test]
    fn weight_examples() {
        assert_eq!(
            hurwitz_weight(2, &Partition::new(vec![2]), 0).unwrap(),
            frac(1, 2)
        );
        assert_eq!(
            hurwitz_weight(2, &Partition::new(vec![1, 1]), 0).unwrap(),
            frac(1, 2)
        );
        // Degree-1, genus-carrying weight: the empty sinh product has no t²
        // term, so the weight vanishes (Burnside agrees: no transpositions
        // exist in S₁).
        assert_eq!(
            hurwitz_weight(1, &Partition::new(vec![1]), 1).unwrap(),
            frac(0, 1)
        );
        assert!(matches!(
            hurwitz_weight(3, &Partition::new(vec![2]), 0),
            Err(Error::SizeMismatch(2, 3))
        ));
    }

    #[test]
    fn r_zero_weights_invert_centralizer() {
        // r = 0 forces ν = (d), g_inf = 0: z_ν · weight = 1.
        for d in 1..=8u32 {
            let nu = Partition::new(vec![d]);
            let w = hurwitz_weight(d, &nu, 0).unwrap();
            assert_eq!(Rational::from_integer(centralizer_order(&nu)) * w, rat(1));
        }
    }

    #[test]
    fn weights_match_burnside_oracle() {
        for d in 1..=6u32 {
            let mu = Partition::new(vec![d]);
            for nu in enumerate_partitions(d) {
                for g_inf in 0..=2u32 {
                    let r = 2 * g_inf + nu.len() as u32 - 1;
                    let burnside = double_hurwitz_via_characters(&mu, &nu, r).unwrap()
                        / Rational::from_integer(factorial(r as u64));
                    let weight = hurwitz_weight(d, &nu, g_inf).unwrap();
                    assert_eq!(weight, burnside, "d={d} nu={nu} g_inf={g_inf}");
                }
            }
        }
    }
}
