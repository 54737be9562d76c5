//! Integer partitions, their standard combinatorial quantities, and the
//! multiset-splitting enumeration behind the localization vertex sums.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use crate::exact::{factorial, Rational};

/// Weakly decreasing positive parts. The empty partition is allowed.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition(Vec<u32>);

impl Partition {
    /// Build from parts in any order; zero parts are rejected.
    pub fn new(mut parts: Vec<u32>) -> Self {
        assert!(parts.iter().all(|&p| p > 0), "partition parts are positive");
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Multiplicity of each distinct part value, largest value first.
    pub fn multiplicities(&self) -> Vec<(u32, usize)> {
        let mut out: Vec<(u32, usize)> = Vec::new();
        for &p in &self.0 {
            match out.last_mut() {
                Some((v, m)) if *v == p => *m += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

/// Weakly decreasing non-negative entries; zeros are permitted and the tuple
/// may be empty. Canonical form of the constrained ψ-exponents of a group.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExponentTuple(Vec<u32>);

impl ExponentTuple {
    pub fn new(mut entries: Vec<u32>) -> Self {
        entries.sort_unstable_by(|a, b| b.cmp(a));
        ExponentTuple(entries)
    }

    pub fn empty() -> Self {
        ExponentTuple(Vec::new())
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn max_entry(&self) -> u32 {
        self.0.first().copied().unwrap_or(0)
    }
}

impl fmt::Display for ExponentTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

/// One vertex of a localization graph: its genus, the edge parts it carries,
/// and the constrained marked-point exponents concentrated on it.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexTriple {
    pub genus: u32,
    pub nu_block: Partition,
    pub e_block: ExponentTuple,
}

impl VertexTriple {
    pub fn new(genus: u32, nu_block: Partition, e_block: ExponentTuple) -> Self {
        assert!(!nu_block.is_empty(), "every vertex carries an edge part");
        VertexTriple {
            genus,
            nu_block,
            e_block,
        }
    }
}

/// All partitions of d, each exactly once, in descending lexicographic order.
pub fn enumerate_partitions(d: u32) -> Vec<Partition> {
    enumerate_partitions_bounded(d, d as usize)
}

/// All partitions of d with at most `max_parts` parts.
pub fn enumerate_partitions_bounded(d: u32, max_parts: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn recurse(
        remaining: u32,
        max_part: u32,
        slots: usize,
        current: &mut Vec<u32>,
        out: &mut Vec<Partition>,
    ) {
        if remaining == 0 {
            out.push(Partition(current.clone()));
            return;
        }
        if slots == 0 {
            return;
        }
        let top = remaining.min(max_part);
        for p in (1..=top).rev() {
            current.push(p);
            recurse(remaining - p, p, slots - 1, current, out);
            current.pop();
        }
    }
    recurse(d, d.max(1), max_parts, &mut current, &mut out);
    out
}

/// z_ν = ∏ iᵐⁱ·mᵢ! over part values i with multiplicity mᵢ — the order of the
/// centralizer of a permutation of cycle type ν.
pub fn centralizer_order(nu: &Partition) -> BigInt {
    let mut acc = BigInt::one();
    for (value, mult) in nu.multiplicities() {
        acc *= BigInt::from(value).pow(mult as u32) * factorial(mult as u64);
    }
    acc
}

/// |Aut ν| = ∏ mᵢ! over distinct part values.
pub fn automorphism_order(nu: &Partition) -> BigInt {
    let mut acc = BigInt::one();
    for (_, mult) in nu.multiplicities() {
        acc *= factorial(mult as u64);
    }
    acc
}

/// |Aut| of an arbitrary multiset given as a sorted slice.
fn multiset_automorphisms<T: Eq>(items: &[T]) -> BigInt {
    let mut acc = BigInt::one();
    let mut run = 1u64;
    for i in 1..items.len() {
        if items[i] == items[i - 1] {
            run += 1;
        } else {
            acc *= factorial(run);
            run = 1;
        }
    }
    if !items.is_empty() {
        acc *= factorial(run);
    }
    acc
}

/// Every unordered multiset of vertex triples whose ν-blocks union (as
/// multisets) to ν, whose e-blocks union to e, with Σ(2−2gᵢ) = χ₀ and at most
/// l(ν) vertices. Each distinct multiset appears exactly once, paired with
/// the coefficient-extraction weight 1/∏ mₖ! over multiplicities of identical
/// triples. χ₀ odd or χ₀ > 2·l(ν) yields an empty list.
pub fn enumerate_vertex_configs(
    nu: &Partition,
    e: &ExponentTuple,
    chi0: i64,
) -> Vec<(Vec<VertexTriple>, Rational)> {
    let l = nu.len();
    if nu.is_empty() || chi0 % 2 != 0 || chi0 > 2 * l as i64 {
        return Vec::new();
    }

    let mut configs: BTreeSet<Vec<VertexTriple>> = BTreeSet::new();
    for m in 1..=l {
        let genus_total_x2 = 2 * m as i64 - chi0;
        if genus_total_x2 < 0 {
            continue;
        }
        let genus_total = (genus_total_x2 / 2) as u32;
        for blocks in block_partitions(nu, m) {
            for e_blocks in distribute_exponents(e, m) {
                for genera in weak_compositions(genus_total, m) {
                    let mut triples: Vec<VertexTriple> = blocks
                        .iter()
                        .zip(&e_blocks)
                        .zip(&genera)
                        .map(|((b, eb), &g)| VertexTriple::new(g, b.clone(), eb.clone()))
                        .collect();
                    triples.sort();
                    configs.insert(triples);
                }
            }
        }
    }

    configs
        .into_iter()
        .map(|triples| {
            let weight = Rational::one() / Rational::from_integer(multiset_automorphisms(&triples));
            (triples, weight)
        })
        .collect()
}

/// Partitions of the multiset of ν's parts into exactly m nonempty blocks,
/// deduplicated as block multisets. Generation anchors each new block on the
/// largest remaining part, which may emit an unordered partition more than
/// once; the set collapses duplicates.
fn block_partitions(nu: &Partition, m: usize) -> Vec<Vec<Partition>> {
    fn recurse(
        remaining: &[(u32, usize)],
        m_left: usize,
        blocks: &mut Vec<Partition>,
        out: &mut BTreeSet<Vec<Partition>>,
    ) {
        let total: usize = remaining.iter().map(|&(_, c)| c).sum();
        if total == 0 {
            if m_left == 0 {
                let mut sorted = blocks.clone();
                sorted.sort();
                out.insert(sorted);
            }
            return;
        }
        if m_left == 0 || total < m_left {
            return;
        }
        if m_left == 1 {
            let whole: Vec<u32> = remaining
                .iter()
                .flat_map(|&(v, c)| std::iter::repeat(v).take(c))
                .collect();
            blocks.push(Partition::new(whole));
            let mut sorted = blocks.clone();
            sorted.sort();
            out.insert(sorted);
            blocks.pop();
            return;
        }
        // Choose the sub-multiset forming the block that contains (one copy
        // of) the largest remaining value; iterate count vectors odometer-style
        // with a floor of 1 on the largest value's count.
        let caps: Vec<usize> = remaining.iter().map(|&(_, c)| c).collect();
        let mut choice = vec![0usize; caps.len()];
        choice[0] = 1;
        loop {
            let taken: usize = choice.iter().sum();
            if total - taken >= m_left - 1 {
                let block: Vec<u32> = remaining
                    .iter()
                    .zip(&choice)
                    .flat_map(|(&(v, _), &c)| std::iter::repeat(v).take(c))
                    .collect();
                let rest: Vec<(u32, usize)> = remaining
                    .iter()
                    .zip(&choice)
                    .filter_map(|(&(v, have), &c)| (have > c).then_some((v, have - c)))
                    .collect();
                blocks.push(Partition::new(block));
                recurse(&rest, m_left - 1, blocks, out);
                blocks.pop();
            }
            let mut advanced = false;
            let mut i = choice.len();
            while i > 0 {
                i -= 1;
                if choice[i] < caps[i] {
                    choice[i] += 1;
                    for slot in choice.iter_mut().skip(i + 1) {
                        *slot = 0;
                    }
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                break;
            }
        }
    }

    let mut out: BTreeSet<Vec<Partition>> = BTreeSet::new();
    let mut blocks: Vec<Partition> = Vec::new();
    recurse(&nu.multiplicities(), m, &mut blocks, &mut out);
    out.into_iter().collect()
}

/// All ordered assignments of the exponent multiset e to m slots (a slot may
/// receive nothing). Identical final configurations are deduplicated by the
/// caller.
fn distribute_exponents(e: &ExponentTuple, m: usize) -> Vec<Vec<ExponentTuple>> {
    let mut counts: Vec<(u32, usize)> = Vec::new();
    for &v in e.entries() {
        match counts.last_mut() {
            Some((value, c)) if *value == v => *c += 1,
            _ => counts.push((v, 1)),
        }
    }
    let mut out: Vec<Vec<Vec<u32>>> = vec![vec![Vec::new(); m]];
    for (value, c) in counts {
        let splits = weak_compositions(c as u32, m);
        let mut next = Vec::with_capacity(out.len() * splits.len());
        for partial in &out {
            for split in &splits {
                let mut extended = partial.clone();
                for (slot, &take) in extended.iter_mut().zip(split) {
                    slot.extend(std::iter::repeat(value).take(take as usize));
                }
                next.push(extended);
            }
        }
        out = next;
    }
    out.into_iter()
        .map(|slots| slots.into_iter().map(ExponentTuple::new).collect())
        .collect()
}

/// Ordered tuples of m non-negative integers summing to `total`.
fn weak_compositions(total: u32, m: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current = vec![0u32; m];
    fn recurse(total: u32, idx: usize, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if idx + 1 == current.len() {
            current[idx] = total;
            out.push(current.clone());
            return;
        }
        for v in 0..=total {
            current[idx] = v;
            recurse(total - v, idx + 1, current, out);
        }
    }
    if m == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    recurse(total, 0, &mut current, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::frac;
    use num_traits::Zero;

    /// Independent p(d) oracle: Euler's pentagonal-number recurrence.
    fn partition_count(d: usize) -> i64 {
        let mut p = vec![0i64; d + 1];
        p[0] = 1;
        for n in 1..=d {
            let mut sum = 0i64;
            let mut k = 1i64;
            loop {
                let g1 = (k * (3 * k - 1) / 2) as usize;
                if g1 > n {
                    break;
                }
                let sign = if k % 2 == 1 { 1 } else { -1 };
                sum += sign * p[n - g1];
                let g2 = (k * (3 * k + 1) / 2) as usize;
                if g2 <= n {
                    sum += sign * p[n - g2];
                }
                k += 1;
            }
            p[n] = sum;
        }
        p[d]
    }

    #[test]
    fn enumerate_matches_partition_function() {
        for d in 0..=20u32 {
            let got = enumerate_partitions(d);
            assert_eq!(got.len() as i64, partition_count(d as usize), "p({d})");
            let unique: BTreeSet<_> = got.iter().collect();
            assert_eq!(unique.len(), got.len(), "duplicates at d={d}");
            for p in &got {
                assert_eq!(p.size(), d);
            }
        }
    }

    #[test]
    fn partition_edge_cases() {
        assert_eq!(enumerate_partitions(0), vec![Partition::empty()]);
        assert_eq!(enumerate_partitions(4).len(), 5);
        assert_eq!(enumerate_partitions(6).len(), 11);
        assert_eq!(enumerate_partitions_bounded(6, 2).len(), 4);
    }

    #[test]
    fn display_forms() {
        assert_eq!(Partition::new(vec![1, 3, 1]).to_string(), "[3,1,1]");
        assert_eq!(Partition::empty().to_string(), "[]");
        assert_eq!(ExponentTuple::new(vec![0, 1]).to_string(), "[1,0]");
    }

    #[test]
    fn centralizer_examples() {
        assert_eq!(centralizer_order(&Partition::new(vec![2, 1])), BigInt::from(2));
        assert_eq!(
            centralizer_order(&Partition::new(vec![1, 1, 1])),
            BigInt::from(6)
        );
        assert_eq!(centralizer_order(&Partition::new(vec![3])), BigInt::from(3));
    }

    #[test]
    fn automorphism_examples() {
        assert_eq!(
            automorphism_order(&Partition::new(vec![2, 2, 1])),
            BigInt::from(2)
        );
        assert_eq!(automorphism_order(&Partition::new(vec![5])), BigInt::from(1));
        assert_eq!(
            automorphism_order(&Partition::new(vec![1, 1, 1, 1])),
            BigInt::from(24)
        );
    }

    /// Cycle type of a permutation given in one-line form.
    fn cycle_type(perm: &[usize]) -> Vec<u32> {
        let mut seen = vec![false; perm.len()];
        let mut parts = Vec::new();
        for start in 0..perm.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0u32;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = perm[i];
                len += 1;
            }
            parts.push(len);
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        parts
    }

    #[test]
    fn centralizer_times_class_size_is_group_order() {
        // Brute force over S_d: z_ν · |{σ : type(σ) = ν}| = d!.
        for d in 1..=7usize {
            let mut counts: std::collections::BTreeMap<Vec<u32>, u64> = Default::default();
            let mut perm: Vec<usize> = (0..d).collect();
            // Heap's algorithm.
            let mut c = vec![0usize; d];
            *counts.entry(cycle_type(&perm)).or_default() += 1;
            let mut i = 0;
            while i < d {
                if c[i] < i {
                    if i % 2 == 0 {
                        perm.swap(0, i);
                    } else {
                        perm.swap(c[i], i);
                    }
                    *counts.entry(cycle_type(&perm)).or_default() += 1;
                    c[i] += 1;
                    i = 0;
                } else {
                    c[i] = 0;
                    i += 1;
                }
            }
            for nu in enumerate_partitions(d as u32) {
                let count = counts.get(nu.parts()).copied().unwrap_or(0);
                assert_eq!(
                    centralizer_order(&nu) * BigInt::from(count),
                    factorial(d as u64),
                    "d={d} nu={nu}"
                );
            }
        }
    }

    #[test]
    fn vertex_configs_two_ones() {
        let configs = enumerate_vertex_configs(
            &Partition::new(vec![1, 1]),
            &ExponentTuple::empty(),
            4,
        );
        assert_eq!(configs.len(), 1);
        let (triples, weight) = &configs[0];
        assert_eq!(triples.len(), 2);
        assert_eq!(triples[0], triples[1]);
        assert_eq!(triples[0].genus, 0);
        assert_eq!(weight, &frac(1, 2));
    }

    #[test]
    fn vertex_configs_single_part_genus_forced() {
        let configs =
            enumerate_vertex_configs(&Partition::new(vec![2]), &ExponentTuple::empty(), 0);
        assert_eq!(configs.len(), 1);
        let (triples, weight) = &configs[0];
        assert_eq!(triples.len(), 1);
        assert_eq!(triples[0].genus, 1);
        assert_eq!(weight, &frac(1, 1));
    }

    #[test]
    fn vertex_configs_split_exponent() {
        let configs = enumerate_vertex_configs(
            &Partition::new(vec![2, 1]),
            &ExponentTuple::new(vec![1]),
            4,
        );
        assert_eq!(configs.len(), 2);
        for (triples, weight) in &configs {
            assert_eq!(triples.len(), 2);
            assert!(triples.iter().all(|t| t.genus == 0));
            assert_eq!(weight, &frac(1, 1));
        }
        let carriers: BTreeSet<u32> = configs
            .iter()
            .map(|(triples, _)| {
                triples
                    .iter()
                    .find(|t| !t.e_block.is_empty())
                    .unwrap()
                    .nu_block
                    .parts()[0]
            })
            .collect();
        assert_eq!(carriers, BTreeSet::from([1, 2]));
    }

    #[test]
    fn vertex_configs_invalid_chi0() {
        let nu = Partition::new(vec![2, 1]);
        assert!(enumerate_vertex_configs(&nu, &ExponentTuple::empty(), 3).is_empty());
        assert!(enumerate_vertex_configs(&nu, &ExponentTuple::empty(), 6).is_empty());
    }

    /// Token-labeled brute force: treat every part of ν and every entry of e
    /// as a distinguishable token, enumerate all assignments into an ordered
    /// list of m vertices plus all genus vectors, and canonicalize. The
    /// multiset of canonical configs must coincide with the enumeration, and
    /// each weight must be 1/∏ mₖ! over identical triples.
    fn brute_force_configs(
        nu: &Partition,
        e: &ExponentTuple,
        chi0: i64,
    ) -> BTreeSet<Vec<VertexTriple>> {
        let mut found = BTreeSet::new();
        let l = nu.len();
        for m in 1..=l {
            let genus_total_x2 = 2 * m as i64 - chi0;
            if genus_total_x2 < 0 || genus_total_x2 % 2 != 0 {
                continue;
            }
            let genus_total = (genus_total_x2 / 2) as u32;
            let nu_assignments = all_functions(l, m);
            let e_assignments = all_functions(e.len(), m);
            for na in &nu_assignments {
                if (0..m).any(|slot| !na.contains(&slot)) {
                    continue; // every vertex needs an edge part
                }
                for ea in &e_assignments {
                    for genera in weak_compositions(genus_total, m) {
                        let mut triples = Vec::with_capacity(m);
                        for slot in 0..m {
                            let block: Vec<u32> = nu
                                .parts()
                                .iter()
                                .zip(na)
                                .filter_map(|(&p, &s)| (s == slot).then_some(p))
                                .collect();
                            let e_block: Vec<u32> = e
                                .entries()
                                .iter()
                                .zip(ea)
                                .filter_map(|(&p, &s)| (s == slot).then_some(p))
                                .collect();
                            triples.push(VertexTriple::new(
                                genera[slot],
                                Partition::new(block),
                                ExponentTuple::new(e_block),
                            ));
                        }
                        triples.sort();
                        found.insert(triples);
                    }
                }
            }
        }
        found
    }

    fn all_functions(n: usize, m: usize) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        for _ in 0..n {
            let mut next = Vec::new();
            for f in &out {
                for slot in 0..m {
                    let mut g = f.clone();
                    g.push(slot);
                    next.push(g);
                }
            }
            out = next;
        }
        out
    }

    #[test]
    fn vertex_configs_match_brute_force() {
        let cases = [
            (vec![2, 1], vec![1], 4i64),
            (vec![2, 2], vec![0, 0], 4),
            (vec![1, 1, 1], vec![1, 0], 6),
            (vec![3, 1], vec![2], 2),
            (vec![2, 1, 1], vec![], 4),
        ];
        for (nu_parts, e_parts, chi0) in cases {
            let nu = Partition::new(nu_parts);
            let e = ExponentTuple::new(e_parts);
            let got = enumerate_vertex_configs(&nu, &e, chi0);
            let got_set: BTreeSet<_> = got.iter().map(|(t, _)| t.clone()).collect();
            assert_eq!(got_set.len(), got.len(), "duplicate config emitted");
            let expected = brute_force_configs(&nu, &e, chi0);
            assert_eq!(got_set, expected, "nu={nu} e={e} chi0={chi0}");
            for (triples, weight) in &got {
                let nu_union: Vec<u32> = triples
                    .iter()
                    .flat_map(|t| t.nu_block.parts().iter().copied())
                    .collect();
                assert_eq!(Partition::new(nu_union), nu);
                let e_union: Vec<u32> = triples
                    .iter()
                    .flat_map(|t| t.e_block.entries().iter().copied())
                    .collect();
                assert_eq!(ExponentTuple::new(e_union), e);
                let chi_sum: i64 = triples.iter().map(|t| 2 - 2 * t.genus as i64).sum();
                assert_eq!(chi_sum, chi0);
                let expected_weight = Rational::one()
                    / Rational::from_integer(multiset_automorphisms(triples));
                assert_eq!(weight, &expected_weight);
                assert!(!weight.is_zero());
            }
        }
    }
}
