//! Symmetric-group characters via the Murnaghan–Nakayama recursion and the
//! Burnside character sum for double Hurwitz numbers. This module exists to
//! cross-verify the closed-formula Hurwitz weights; speed is irrelevant,
//! clarity wins.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::exact::Rational;
use crate::partitions::{centralizer_order, enumerate_partitions, Partition};
use crate::{Error, Result};

/// χ_irrep(class), exactly. Both partitions must have the same size.
pub fn character(irrep: &Partition, class_type: &Partition) -> Result<i64> {
    if irrep.size() != class_type.size() {
        return Err(Error::SizeMismatch(
            irrep.size() as usize,
            class_type.size() as usize,
        ));
    }
    let mut memo = HashMap::new();
    Ok(mn_recurse(
        &beta_set(irrep.parts()),
        class_type.parts(),
        &mut memo,
    ))
}

/// First-column beta numbers of a partition: bᵢ = λᵢ + (k − i), distinct.
fn beta_set(parts: &[u32]) -> Vec<u32> {
    let k = parts.len() as u32;
    parts
        .iter()
        .enumerate()
        .map(|(i, &p)| p + (k - 1 - i as u32))
        .collect()
}

/// Partition recovered from a beta set (sorted descending, staircase removed).
fn from_beta(beta: &[u32]) -> Vec<u32> {
    let mut sorted = beta.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let k = sorted.len() as u32;
    let mut parts: Vec<u32> = sorted
        .iter()
        .enumerate()
        .map(|(i, &b)| b - (k - 1 - i as u32))
        .collect();
    while parts.last() == Some(&0) {
        parts.pop();
    }
    parts
}

/// Border-strip recursion on beta numbers: removing a strip of length r
/// replaces some b by b − r (when unoccupied); the sign is (−1) to the number
/// of beta entries strictly between the two.
fn mn_recurse(beta: &[u32], rho: &[u32], memo: &mut HashMap<(Vec<u32>, usize), i64>) -> i64 {
    if rho.is_empty() {
        return 1;
    }
    let key = (beta.to_vec(), rho.len());
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let r = rho[0];
    let rest = &rho[1..];
    let mut total = 0i64;
    for (idx, &b) in beta.iter().enumerate() {
        if b < r {
            continue;
        }
        let target = b - r;
        if beta.contains(&target) {
            continue;
        }
        let height = beta.iter().filter(|&&x| x > target && x < b).count();
        let sign = if height % 2 == 0 { 1 } else { -1 };
        let mut next: Vec<u32> = beta.to_vec();
        next[idx] = target;
        let normalized = beta_set(&from_beta(&next));
        total += sign * mn_recurse(&normalized, rest, memo);
    }
    memo.insert(key, total);
    total
}

/// Central character f_ξ(2) = |C₍₂₎| · χ_ξ(2,1^{d−2}) / dim R_ξ, with
/// |C₍₂₎| = d(d−1)/2. For d < 2 there are no transpositions and f is 0.
pub fn transposition_central_character(irrep: &Partition) -> Result<Rational> {
    let d = irrep.size();
    if d < 2 {
        return Ok(Rational::zero());
    }
    let mut class_parts = vec![2u32];
    class_parts.extend(std::iter::repeat(1).take(d as usize - 2));
    let chi = character(irrep, &Partition::new(class_parts))?;
    let dim = character(irrep, &Partition::new(vec![1; d as usize]))?;
    let class_size = BigInt::from(d) * BigInt::from(d - 1) / BigInt::from(2);
    Ok(Rational::new(class_size * BigInt::from(chi), BigInt::from(dim)))
}

/// Disconnected double Hurwitz number with r transposition branch points via
/// the Burnside sum Σ_ξ f_ξ(2)^r (χ_ξ(C_ν)/z_ν)(χ_ξ(C_μ)/z_μ).
pub fn double_hurwitz_via_characters(
    mu: &Partition,
    nu: &Partition,
    r: u32,
) -> Result<Rational> {
    if mu.size() != nu.size() {
        return Err(Error::SizeMismatch(
            mu.size() as usize,
            nu.size() as usize,
        ));
    }
    let d = mu.size();
    let z_nu = Rational::from_integer(centralizer_order(nu));
    let z_mu = Rational::from_integer(centralizer_order(mu));
    let mut total = Rational::zero();
    for xi in enumerate_partitions(d) {
        let f = transposition_central_character(&xi)?;
        let f_pow = if r == 0 {
            Rational::one()
        } else if f.is_zero() {
            continue;
        } else {
            f.pow(r as i32)
        };
        let chi_nu = Rational::from_integer(BigInt::from(character(&xi, nu)?));
        let chi_mu = Rational::from_integer(BigInt::from(character(&xi, mu)?));
        total += f_pow * chi_nu / &z_nu * chi_mu / &z_mu;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{factorial, frac, rat};

    /// Hook length formula dimension, as an independent oracle.
    fn hook_dimension(lambda: &Partition) -> BigInt {
        let parts = lambda.parts();
        let conjugate_len = |j: u32| parts.iter().filter(|&&p| p > j).count() as u32;
        let mut hooks = BigInt::one();
        for (i, &p) in parts.iter().enumerate() {
            for j in 0..p {
                let arm = p - 1 - j;
                let leg = conjugate_len(j) - 1 - i as u32;
                hooks *= BigInt::from(arm + leg + 1);
            }
        }
        factorial(lambda.size() as u64) / hooks
    }

    #[test]
    fn trivial_representation_is_one() {
        for d in 1..=6u32 {
            let triv = Partition::new(vec![d]);
            for class in enumerate_partitions(d) {
                assert_eq!(character(&triv, &class).unwrap(), 1);
            }
        }
    }

    #[test]
    fn sign_character_on_s2() {
        // Brute force on S₂: the sign of the transposition is −1.
        let sign = Partition::new(vec![1, 1]);
        assert_eq!(character(&sign, &Partition::new(vec![2])).unwrap(), -1);
        assert_eq!(character(&sign, &Partition::new(vec![1, 1])).unwrap(), 1);
    }

    #[test]
    fn standard_representation_dimension() {
        // dim = 3!/(3·1·1) = 2 by hooks.
        let std_rep = Partition::new(vec![2, 1]);
        assert_eq!(
            character(&std_rep, &Partition::new(vec![1, 1, 1])).unwrap(),
            2
        );
    }

    #[test]
    fn size_mismatch_is_an_error() {
        let a = Partition::new(vec![2]);
        let b = Partition::new(vec![2, 1]);
        assert!(matches!(character(&a, &b), Err(Error::SizeMismatch(2, 3))));
    }

    #[test]
    fn dimensions_match_hook_lengths() {
        for d in 1..=8u32 {
            let identity = Partition::new(vec![1; d as usize]);
            for xi in enumerate_partitions(d) {
                let dim = character(&xi, &identity).unwrap();
                assert!(dim > 0, "dimension positivity for {xi}");
                assert_eq!(BigInt::from(dim), hook_dimension(&xi), "dim of {xi}");
            }
        }
    }

    #[test]
    fn both_orthogonality_relations() {
        for d in 1..=7u32 {
            let all = enumerate_partitions(d);
            let table: Vec<Vec<i64>> = all
                .iter()
                .map(|xi| {
                    all.iter()
                        .map(|class| character(xi, class).unwrap())
                        .collect()
                })
                .collect();
            for (a, nu) in all.iter().enumerate() {
                for (b, mu) in all.iter().enumerate() {
                    // Row form: Σ_ξ χ_ν(C_ξ)χ_μ(C_ξ)/z_ξ = δ_{ν,μ}.
                    let mut row_sum = Rational::zero();
                    for (c, xi) in all.iter().enumerate() {
                        row_sum += frac(table[a][c] * table[b][c], 1)
                            / Rational::from_integer(centralizer_order(xi));
                    }
                    let expected = if a == b { rat(1) } else { rat(0) };
                    assert_eq!(row_sum, expected, "row orthogonality {nu} {mu}");
                    // Column form: Σ_ξ χ_ξ(C_ν)χ_ξ(C_μ) = z_ν δ_{ν,μ}.
                    let col_sum: i64 = (0..all.len()).map(|c| table[c][a] * table[c][b]).sum();
                    let expected_col = if a == b {
                        Rational::from_integer(centralizer_order(nu))
                    } else {
                        rat(0)
                    };
                    assert_eq!(rat(col_sum), expected_col, "column orthogonality {nu} {mu}");
                }
            }
        }
    }

    #[test]
    fn burnside_examples() {
        // Two-term character sum over ξ ∈ {(2),(1,1)}.
        let h = double_hurwitz_via_characters(
            &Partition::new(vec![2]),
            &Partition::new(vec![1, 1]),
            1,
        )
        .unwrap();
        assert_eq!(h, frac(1, 2));

        // Orthogonality collapses r=0 to 1/z_{(d)} = 1/d.
        for d in 1..=6 {
            let full = Partition::new(vec![d]);
            assert_eq!(
                double_hurwitz_via_characters(&full, &full, 0).unwrap(),
                frac(1, d as i64)
            );
        }

        let two_ones = Partition::new(vec![1, 1]);
        assert_eq!(
            double_hurwitz_via_characters(&two_ones, &two_ones, 0).unwrap(),
            frac(1, 2)
        );
    }
}
