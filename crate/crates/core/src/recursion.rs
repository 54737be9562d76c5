//! One relation row per degree d for an unknown group (g, e): the symbolic
//! coefficients on the group's own unknowns plus the folded constant from
//! everything already known.
//!
//! A group is indexed by a genus and the canonical tuple e of constrained
//! ψ-exponents; the distinguished marked point carries the free exponent and
//! must dominate every entry of e. All integrals of dimension 3g−2+l(e) whose
//! exponent multisets are reachable by the binomial supports enter the group;
//! the ones the group *owns* (exponents = e plus one dominating free entry,
//! one per λ-index) are its solve columns, the rest are prerequisites whose
//! owning groups have strictly smaller e and are resolved first.

use num_traits::Zero;

use crate::exact::{factorial, Rational};
use crate::hodge::{canonical_key, vertex_config_sum, vertex_keys, HodgeKey, HodgeTable, KeyClass};
use crate::hurwitz::hurwitz_weight;
use crate::partitions::{centralizer_order, enumerate_partitions, ExponentTuple, Partition};
use crate::{Error, Result};

/// The finite set of same-dimension integrals solved simultaneously from
/// relations at varying degrees.
#[derive(Debug, Clone)]
pub struct UnknownGroup {
    pub genus: u32,
    pub e: ExponentTuple,
    pub target_dim: u32,
    /// Solve columns, λ-index descending. Order is fixed for the lifetime of
    /// the solve.
    pub unknowns: Vec<HodgeKey>,
    /// Same-dimension keys reachable by the rows but owned by other groups.
    pub prerequisites: Vec<HodgeKey>,
}

/// The group that solves a key: its genus together with the key's exponents
/// minus one copy of the maximum.
pub fn owning_group(key: &HodgeKey) -> (u32, ExponentTuple) {
    (key.genus, key.owning_exponents())
}

/// Assemble the group for (genus, e). Errors when the underlying moduli space
/// is unstable.
pub fn build_group(genus: u32, e: &ExponentTuple) -> Result<UnknownGroup> {
    let n = e.len();
    let points = n + 1;
    if 2 * genus as i64 - 2 + points as i64 <= 0 {
        return Err(Error::UnstableModuli { genus, points });
    }
    let target_dim = 3 * genus - 2 + n as u32;

    let mut unknowns = Vec::new();
    let mut prerequisites = std::collections::BTreeSet::new();
    for lambda in (0..=genus).rev() {
        // Owned column: free exponent forced by the dimension equation.
        let rest: u32 = e.total();
        if target_dim >= lambda + rest {
            let free = target_dim - lambda - rest;
            if free >= e.max_entry() {
                let mut exps = vec![free];
                exps.extend_from_slice(e.entries());
                if let KeyClass::Key(key) = canonical_key(genus, lambda, &exps) {
                    unknowns.push(key);
                }
            }
        }
        // Full binomial support: every (a_j ≤ e_j) choice.
        for_each_bounded(e.entries(), &mut |constrained| {
            let used: u32 = lambda + constrained.iter().sum::<u32>();
            if target_dim < used {
                return;
            }
            let free = target_dim - used;
            let mut exps = vec![free];
            exps.extend_from_slice(constrained);
            if let KeyClass::Key(key) = canonical_key(genus, lambda, &exps) {
                prerequisites.insert(key);
            }
        });
    }
    for key in &unknowns {
        prerequisites.remove(key);
    }
    Ok(UnknownGroup {
        genus,
        e: e.clone(),
        target_dim,
        unknowns,
        prerequisites: prerequisites.into_iter().collect(),
    })
}

fn for_each_bounded(bounds: &[u32], f: &mut impl FnMut(&[u32])) {
    let mut current = vec![0u32; bounds.len()];
    fn recurse(bounds: &[u32], idx: usize, current: &mut Vec<u32>, f: &mut impl FnMut(&[u32])) {
        if idx == bounds.len() {
            f(current);
            return;
        }
        for v in 0..=bounds[idx] {
            current[idx] = v;
            recurse(bounds, idx + 1, current, f);
        }
    }
    recurse(bounds, 0, &mut current, f);
}

/// Smallest degree inside the validity window d > |e| + χ − 1, at least 1.
pub fn min_degree(genus: u32, e: &ExponentTuple) -> u32 {
    let window = e.total() as i64 + 2 - 2 * genus as i64;
    window.max(1) as u32
}

/// One linear equation among the group's unknowns at degree d, encoding
/// Σ coefficients·unknowns + constant = 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationRow {
    pub d: u32,
    pub coefficients: Vec<Rational>,
    pub constant: Rational,
}

enum Pass<'a> {
    Collect(&'a mut Vec<HodgeKey>),
    Assemble(&'a HodgeTable),
}

/// Shared enumeration for dependency collection and row assembly: partitions
/// ν ⊢ d crossed with the genus split of the infinity side. Terms with a
/// vanishing Hurwitz weight drop out entirely.
fn walk_relation(group: &UnknownGroup, d: u32, pass: &mut Pass) -> Result<crate::hodge::LinearExpr> {
    let chi = 2 - 2 * group.genus as i64;
    let mut total = crate::hodge::LinearExpr::zero();
    for nu in enumerate_partitions(d) {
        let l = nu.len() as i64;
        for g_inf in 0..=group.genus {
            let chi0 = chi - (2 - 2 * g_inf as i64) + 2 * l;
            let weight = hurwitz_weight(d, &nu, g_inf)?;
            if weight.is_zero() {
                continue;
            }
            match pass {
                Pass::Collect(keys) => {
                    collect_config_keys(&nu, group, chi0, keys);
                }
                Pass::Assemble(table) => {
                    let sign = if (l - 1) % 2 == 0 {
                        Rational::one()
                    } else {
                        -Rational::one()
                    };
                    let z = Rational::from_integer(centralizer_order(&nu));
                    let mut term =
                        vertex_config_sum(&nu, &group.e, chi0, Some(group.target_dim), table)?;
                    term.scale(&(sign * z * &weight));
                    total.add_assign(&term);
                }
            }
        }
    }
    Ok(total)
}

fn collect_config_keys(nu: &Partition, group: &UnknownGroup, chi0: i64, keys: &mut Vec<HodgeKey>) {
    for (triples, _) in crate::partitions::enumerate_vertex_configs(nu, &group.e, chi0) {
        for triple in &triples {
            keys.extend(vertex_keys(&triple));
        }
    }
}

/// Keys a row at degree d folds through the table: everything below the
/// target dimension plus same-dimension keys owned by other groups. The
/// engine resolves these before assembly so rows are built over a frozen
/// snapshot.
pub fn relation_dependencies(group: &UnknownGroup, d: u32) -> Result<Vec<HodgeKey>> {
    check_window(group, d)?;
    let mut keys = Vec::new();
    walk_relation(group, d, &mut Pass::Collect(&mut keys))?;
    keys.retain(|k| k.dimension() < group.target_dim || !group.unknowns.contains(k));
    keys.sort();
    keys.dedup();
    Ok(keys)
}

fn check_window(group: &UnknownGroup, d: u32) -> Result<()> {
    let min_d = min_degree(group.genus, &group.e);
    if d < min_d {
        return Err(Error::DegreeWindow { d, min_d });
    }
    Ok(())
}

/// Build the exact row at degree d. The assembled identity is scaled by
/// l(e)! so rows print in the same normalization the worked low-dimension
/// examples use; a global row scale does not change the solution set.
pub fn build_relation(group: &UnknownGroup, d: u32, table: &HodgeTable) -> Result<RelationRow> {
    check_window(group, d)?;
    let mut expr = walk_relation(group, d, &mut Pass::Assemble(table))?;
    let scale = Rational::from_integer(factorial(group.e.len() as u64));
    expr.scale(&scale);

    let mut coefficients = vec![Rational::zero(); group.unknowns.len()];
    let mut constant = expr.constant().clone();
    for (key, coeff) in expr.terms() {
        if let Some(idx) = group.unknowns.iter().position(|u| u == key) {
            coefficients[idx] = coeff.clone();
        } else if let Some(value) = table.get(key) {
            constant += coeff * value;
        } else {
            return Err(Error::Internal(format!(
                "symbolic key {key} is neither a column of the group nor in the table"
            )));
        }
    }
    Ok(RelationRow {
        d,
        coefficients,
        constant,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hodge::KeyClass;

    fn key(genus: u32, lambda: u32, exponents: &[u32]) -> HodgeKey {
        match canonical_key(genus, lambda, exponents) {
            KeyClass::Key(k) => k,
            other => panic!("expected a key, got {other:?}"),
        }
    }

    #[test]
    fn group_on_four_points() {
        let group = build_group(0, &ExponentTuple::new(vec![0, 0, 0])).unwrap();
        assert_eq!(group.target_dim, 1);
        assert_eq!(group.unknowns, vec![key(0, 0, &[1, 0, 0, 0])]);
        assert!(group.prerequisites.is_empty());
    }

    #[test]
    fn group_on_one_point_genus_one() {
        let group = build_group(1, &ExponentTuple::empty()).unwrap();
        assert_eq!(group.unknowns, vec![key(1, 1, &[0]), key(1, 0, &[1])]);
        assert!(group.prerequisites.is_empty());
    }

    #[test]
    fn group_on_one_point_genus_two() {
        let group = build_group(2, &ExponentTuple::empty()).unwrap();
        assert_eq!(
            group.unknowns,
            vec![key(2, 2, &[2]), key(2, 1, &[3]), key(2, 0, &[4])]
        );
    }

    #[test]
    fn group_with_constrained_point() {
        // e = (1) on the two-pointed genus-one space: the group owns the
        // equal-exponent key, everything else is a prerequisite.
        let group = build_group(1, &ExponentTuple::new(vec![1])).unwrap();
        assert_eq!(group.unknowns, vec![key(1, 0, &[1, 1])]);
        assert_eq!(
            group.prerequisites,
            vec![key(1, 0, &[2, 0]), key(1, 1, &[1, 0])]
        );
    }

    #[test]
    fn unstable_group_is_rejected() {
        assert!(matches!(
            build_group(0, &ExponentTuple::new(vec![0])),
            Err(Error::UnstableModuli {
                genus: 0,
                points: 2
            })
        ));
    }

    #[test]
    fn minimal_degrees() {
        assert_eq!(min_degree(0, &ExponentTuple::new(vec![0, 0, 0])), 2);
        assert_eq!(min_degree(1, &ExponentTuple::empty()), 1);
        assert_eq!(min_degree(1, &ExponentTuple::new(vec![1, 0])), 1);
        assert_eq!(min_degree(2, &ExponentTuple::empty()), 1);
        assert_eq!(min_degree(0, &ExponentTuple::new(vec![1, 1, 0, 0])), 4);
    }

    #[test]
    fn window_violation_names_minimal_degree() {
        let group = build_group(0, &ExponentTuple::new(vec![0, 0, 0])).unwrap();
        match build_relation(&group, 1, &HodgeTable::new()) {
            Err(Error::DegreeWindow { d: 1, min_d }) => assert_eq!(min_d, 2),
            other => panic!("expected a window violation, got {other:?}"),
        }
    }

    #[test]
    fn first_relations_on_one_point_genus_one() {
        // No lower-dimensional values are needed in dimension 1.
        let table = HodgeTable::new();
        let group = build_group(1, &ExponentTuple::empty()).unwrap();
        assert!(relation_dependencies(&group, 1).unwrap().is_empty());
        let row1 = build_relation(&group, 1, &table).unwrap();
        assert_eq!(row1.coefficients, vec![crate::exact::rat(-1), crate::exact::rat(1)]);
        assert!(row1.constant.is_zero());
        let row2 = build_relation(&group, 2, &table).unwrap();
        assert_eq!(row2.coefficients, vec![crate::exact::rat(-1), crate::exact::rat(3)]);
        assert_eq!(row2.constant, crate::exact::frac(-1, 12));
    }

    #[test]
    fn four_point_relation_row() {
        let table = HodgeTable::new();
        let group = build_group(0, &ExponentTuple::new(vec![0, 0, 0])).unwrap();
        let row = build_relation(&group, 3, &table).unwrap();
        assert_eq!(row.coefficients, vec![crate::exact::rat(6)]);
        assert_eq!(row.constant, crate::exact::rat(-6));
    }
}
