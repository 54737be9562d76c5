//! Orchestration: on-demand recursive computation of any requested integral,
//! cache persistence, and the closed-formula verification oracles.

use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::characters::double_hurwitz_via_characters;
use crate::exact::{factorial, multinomial, pow_i, rat, Rational};
use crate::hodge::{canonical_key, HodgeKey, HodgeTable, KeyClass};
use crate::hurwitz::hurwitz_weight;
use crate::partitions::{
    enumerate_partitions, enumerate_partitions_bounded, ExponentTuple, Partition,
};
use crate::recursion::{
    build_group, build_relation, min_degree, owning_group, relation_dependencies, RelationRow,
    UnknownGroup,
};
use crate::solver::LinearSystem;
use crate::{Error, Result};

/// Environment variable that overrides the cache file location.
pub const CACHE_ENV_VAR: &str = "HODGEINT_CACHE";

/// Resolve the cache path: an explicit path wins, then the environment.
pub fn resolve_cache_path(explicit: Option<PathBuf>) -> Option<PathBuf> {
    explicit.or_else(|| std::env::var_os(CACHE_ENV_VAR).map(PathBuf::from))
}

#[derive(Debug, Clone)]
pub struct EngineConfig {
    pub cache_path: Option<PathBuf>,
    /// Added to `min_d + unknown_count` to form the degree-escalation ceiling.
    pub escalation_margin: u32,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            cache_path: None,
            escalation_margin: 32,
        }
    }
}

/// The solving engine. The value table is the only mutable state; group
/// solves are serialized and cache writes append after each solve.
pub struct Engine {
    table: HodgeTable,
    config: EngineConfig,
}

impl Engine {
    pub fn new(config: EngineConfig) -> Result<Self> {
        let table = match &config.cache_path {
            Some(path) if path.exists() => HodgeTable::load(path)?,
            _ => HodgeTable::new(),
        };
        Ok(Engine { table, config })
    }

    pub fn in_memory() -> Self {
        Engine {
            table: HodgeTable::new(),
            config: EngineConfig::default(),
        }
    }

    pub fn table(&self) -> &HodgeTable {
        &self.table
    }

    /// The exact value of ∫ ψ^{k₁}⋯ψ^{kₙ} λ_j. Dimension-violating requests
    /// return 0 without touching the solver; unstable requests are errors.
    pub fn compute(&mut self, genus: u32, lambda: u32, exponents: &[u32]) -> Result<Rational> {
        match canonical_key(genus, lambda, exponents) {
            KeyClass::Zero => Ok(Rational::zero()),
            KeyClass::Unstable => Err(Error::UnstableModuli {
                genus,
                points: exponents.len(),
            }),
            KeyClass::Key(key) => {
                self.ensure_key(&key)?;
                Ok(self.table.get(&key).expect("just solved").clone())
            }
        }
    }

    fn ensure_key(&mut self, key: &HodgeKey) -> Result<()> {
        if self.table.contains(key) {
            return Ok(());
        }
        let (genus, e) = owning_group(key);
        self.solve_group(genus, &e)?;
        if !self.table.contains(key) {
            return Err(Error::Internal(format!(
                "solving group (g={genus}, e={e}) did not produce {key}"
            )));
        }
        Ok(())
    }

    /// Solve every unknown the group owns by escalating the degree until the
    /// system reaches full rank. Idempotent: already-solved groups return
    /// immediately and re-solving yields identical stored values.
    fn solve_group(&mut self, genus: u32, e: &ExponentTuple) -> Result<()> {
        let group = build_group(genus, e)?;
        if group.unknowns.iter().all(|k| self.table.contains(k)) {
            return Ok(());
        }
        let min_d = min_degree(genus, e);
        let ceiling = min_d + group.unknowns.len() as u32 + self.config.escalation_margin;
        let mut sys = LinearSystem::new(group.unknowns.len());
        let mut d = min_d;
        loop {
            self.resolve_dependencies(&group, d)?;
            let row = build_relation(&group, d, &self.table)?;
            sys.add_row(row)?;
            if sys.is_complete() {
                let solution = sys.solve()?;
                for (key, value) in group.unknowns.iter().zip(solution) {
                    self.table.insert(key.clone(), value);
                }
                self.flush_cache()?;
                return Ok(());
            }
            d += 1;
            if d > ceiling {
                return Err(Error::EscalationExceeded {
                    genus,
                    e: e.to_string(),
                    ceiling,
                    rank: sys.rank(),
                    unknowns: sys.unknown_count(),
                });
            }
        }
    }

    /// Pre-pass: everything the degree-d row folds through the table is
    /// computed first, so the row itself is assembled over a frozen snapshot.
    fn resolve_dependencies(&mut self, group: &UnknownGroup, d: u32) -> Result<()> {
        for dep in relation_dependencies(group, d)? {
            self.ensure_key(&dep)?;
        }
        Ok(())
    }

    /// The group and its degree-d row, with prerequisites resolved. This is
    /// the `relation` command's entry point.
    pub fn group_relation(
        &mut self,
        genus: u32,
        e: &ExponentTuple,
        d: u32,
    ) -> Result<(UnknownGroup, RelationRow)> {
        let group = build_group(genus, e)?;
        self.resolve_dependencies(&group, d)?;
        let row = build_relation(&group, d, &self.table)?;
        Ok((group, row))
    }

    fn flush_cache(&mut self) -> Result<()> {
        if let Some(path) = self.config.cache_path.clone() {
            self.table.append_unsaved(&path)?;
        }
        Ok(())
    }

    /// Every valid key of dimension 1..=max_dim: all stable (g, m), all
    /// λ-indices, all exponent multisets.
    pub fn enumerate_keys(max_dim: u32) -> Vec<HodgeKey> {
        let mut keys = Vec::new();
        for dim in 1..=max_dim {
            let mut genus = 0u32;
            while 3 * genus as i64 - 3 + 1 <= dim as i64 {
                let m = dim as i64 - 3 * genus as i64 + 3;
                if m >= 1 && 2 * genus as i64 - 2 + m > 0 {
                    let m = m as usize;
                    for lambda in 0..=genus.min(dim) {
                        for part in enumerate_partitions_bounded(dim - lambda, m) {
                            let mut exps = part.parts().to_vec();
                            exps.resize(m, 0);
                            match canonical_key(genus, lambda, &exps) {
                                KeyClass::Key(key) => keys.push(key),
                                other => unreachable!("enumerated an invalid key: {other:?}"),
                            }
                        }
                    }
                }
                genus += 1;
            }
        }
        keys
    }

    /// Compute every key of dimension ≤ max_dim and rewrite the cache file
    /// (when configured) in canonical sorted order.
    pub fn compute_table(&mut self, max_dim: u32) -> Result<String> {
        for key in Self::enumerate_keys(max_dim) {
            self.ensure_key(&key)?;
        }
        if let Some(path) = self.config.cache_path.clone() {
            self.table.write_all(&path)?;
        }
        Ok(self.table.render())
    }

    /// Rewrite the full cache file at an explicit path.
    pub fn write_table(&mut self, path: &Path) -> Result<()> {
        self.table.write_all(path)
    }
}

/// (2^{2g−1}−1)/2^{2g−1} · |B_{2g}|/(2g)! — the one-point top-λ value.
pub fn b_factor(genus: u32) -> Rational {
    assert!(genus >= 1);
    let two_pow = BigInt::from(2).pow(2 * genus - 1);
    let fraction = Rational::new(&two_pow - BigInt::one(), two_pow);
    let bern = crate::exact::bernoulli(2 * genus).abs();
    fraction * bern / Rational::from_integer(factorial(2 * genus as u64))
}

/// Closed form for the top λ-index: multinomial(2g+n−3; k₁,…,kₙ) · b_g.
pub fn lambda_g_oracle(genus: u32, exponents: &[u32]) -> Result<Rational> {
    let n = exponents.len() as i64;
    let total: i64 = exponents.iter().map(|&k| k as i64).sum();
    if genus < 1 || n < 1 || total != 2 * genus as i64 - 3 + n {
        return Err(Error::BadInput(format!(
            "lambda_g closed form needs genus ≥ 1 and Σk = 2g−3+n; got g={genus}, k={exponents:?}"
        )));
    }
    let parts: Vec<u64> = exponents.iter().map(|&k| k as u64).collect();
    let coeff = multinomial((2 * genus as i64 - 3 + n) as u64, &parts);
    Ok(Rational::from_integer(coeff) * b_factor(genus))
}

/// Closed form in genus zero: the multinomial coefficient (n−3; k₁,…,kₙ).
pub fn genus0_oracle(exponents: &[u32]) -> Result<Rational> {
    let n = exponents.len() as i64;
    let total: i64 = exponents.iter().map(|&k| k as i64).sum();
    if n < 3 || total != n - 3 {
        return Err(Error::BadInput(format!(
            "genus-0 closed form needs n ≥ 3 and Σk = n−3; got k={exponents:?}"
        )));
    }
    let parts: Vec<u64> = exponents.iter().map(|&k| k as u64).collect();
    Ok(Rational::from_integer(multinomial((n - 3) as u64, &parts)))
}

/// One-point value at λ-index g−1 and ψ-exponent 2g−1:
/// b_g Σ_{i=1}^{2g−1} 1/i − (1/2) Σ_{g₁+g₂=g, gᵢ≥1} ((2g₁−1)!(2g₂−1)!/(2g−1)!) b_{g₁} b_{g₂}.
pub fn lambda_gm1_onepoint_oracle(genus: u32) -> Result<Rational> {
    if genus < 2 {
        return Err(Error::BadInput(format!(
            "the one-point λ_(g−1) form needs genus ≥ 2; got {genus}"
        )));
    }
    let mut harmonic = Rational::zero();
    for i in 1..=(2 * genus - 1) as i64 {
        harmonic += Rational::new(BigInt::one(), BigInt::from(i));
    }
    let mut split_sum = Rational::zero();
    for g1 in 1..genus {
        let g2 = genus - g1;
        let ratio = Rational::new(
            factorial(2 * g1 as u64 - 1) * factorial(2 * g2 as u64 - 1),
            factorial(2 * genus as u64 - 1),
        );
        split_sum += ratio * b_factor(g1) * b_factor(g2);
    }
    Ok(b_factor(genus) * harmonic - Rational::new(BigInt::one(), BigInt::from(2)) * split_sum)
}

/// What a verification pass compares.
#[derive(Debug, Clone)]
pub enum VerifyScope {
    /// Compare against the embedded corpus of classically known values,
    /// dimensions 1..=max_dim (at most 4).
    Dims { max_dim: u32 },
    /// Genus-zero multinomial oracle for all n ≤ max_n.
    Genus0 { max_n: usize },
    /// Top-λ closed form for every stable (g, n) of dimension ≤ max_dim.
    LambdaG { max_dim: u32 },
    /// One-point λ-index g−1 values for 2 ≤ g ≤ max_genus.
    LambdaGm1 { max_genus: u32 },
    /// Sinh-product weights vs. the Burnside character sum for d ≤ max_d,
    /// plus both character orthogonality relations for d ≤ 7.
    Hurwitz { max_d: u32 },
}

#[derive(Debug, Clone)]
pub struct Comparison {
    pub label: String,
    pub expected: Rational,
    pub actual: Rational,
}

impl Comparison {
    pub fn matches(&self) -> bool {
        self.expected == self.actual
    }
}

#[derive(Debug, Clone, Default)]
pub struct VerifyReport {
    pub comparisons: Vec<Comparison>,
}

impl VerifyReport {
    pub fn all_match(&self) -> bool {
        self.comparisons.iter().all(Comparison::matches)
    }

    pub fn matched(&self) -> usize {
        self.comparisons.iter().filter(|c| c.matches()).count()
    }

    fn push(&mut self, label: String, expected: Rational, actual: Rational) {
        self.comparisons.push(Comparison {
            label,
            expected,
            actual,
        });
    }
}

/// Classically known values of every integral of dimension 1 through 4,
/// cross-checkable against the closed-form oracles where those apply.
const KNOWN_LOW_DIMENSION_VALUES: &[(u32, u32, &[u32], &str)] = &[
    // dimension 1
    (0, 0, &[1, 0, 0, 0], "1"),
    (1, 1, &[0], "1/24"),
    (1, 0, &[1], "1/24"),
    // dimension 2
    (0, 0, &[2, 0, 0, 0, 0], "1"),
    (0, 0, &[1, 1, 0, 0, 0], "2"),
    (1, 1, &[1, 0], "1/24"),
    (1, 0, &[2, 0], "1/24"),
    (1, 0, &[1, 1], "1/24"),
    // dimension 3
    (0, 0, &[3, 0, 0, 0, 0, 0], "1"),
    (0, 0, &[2, 1, 0, 0, 0, 0], "3"),
    (0, 0, &[1, 1, 1, 0, 0, 0], "6"),
    (1, 1, &[2, 0, 0], "1/24"),
    (1, 0, &[3, 0, 0], "1/24"),
    (1, 1, &[1, 1, 0], "1/12"),
    (1, 0, &[2, 1, 0], "1/12"),
    (1, 0, &[1, 1, 1], "1/12"),
    // dimension 4
    (0, 0, &[4, 0, 0, 0, 0, 0, 0], "1"),
    (0, 0, &[3, 1, 0, 0, 0, 0, 0], "4"),
    (0, 0, &[2, 2, 0, 0, 0, 0, 0], "6"),
    (0, 0, &[2, 1, 1, 0, 0, 0, 0], "12"),
    (0, 0, &[1, 1, 1, 1, 0, 0, 0], "24"),
    (1, 1, &[3, 0, 0, 0], "1/24"),
    (1, 0, &[4, 0, 0, 0], "1/24"),
    (1, 1, &[2, 1, 0, 0], "1/8"),
    (1, 0, &[3, 1, 0, 0], "1/8"),
    (1, 1, &[1, 1, 1, 0], "1/4"),
    (1, 0, &[2, 1, 1, 0], "1/4"),
    (1, 0, &[2, 2, 0, 0], "1/6"),
    (1, 0, &[1, 1, 1, 1], "1/4"),
    (2, 2, &[2], "7/5760"),
    (2, 1, &[3], "1/480"),
    (2, 0, &[4], "1/1152"),
];

/// The embedded reference corpus: (genus, λ-index, exponents, value).
pub fn reference_values() -> impl Iterator<Item = (u32, u32, &'static [u32], Rational)> {
    KNOWN_LOW_DIMENSION_VALUES
        .iter()
        .map(|&(g, k, exps, v)| (g, k, exps, v.parse().expect("corpus value parses")))
}

impl Engine {
    /// Run compute against the applicable oracle over the scope. Mismatches
    /// are report content, not errors.
    pub fn verify(&mut self, scope: &VerifyScope) -> Result<VerifyReport> {
        let mut report = VerifyReport::default();
        match *scope {
            VerifyScope::Dims { max_dim } => {
                if !(1..=4).contains(&max_dim) {
                    return Err(Error::BadInput(format!(
                        "the reference corpus covers dimensions 1..=4; got {max_dim}"
                    )));
                }
                for (g, k, exps, expected) in reference_values() {
                    let dim: u32 = k + exps.iter().sum::<u32>();
                    if dim > max_dim {
                        continue;
                    }
                    let actual = self.compute(g, k, exps)?;
                    report.push(format!("value g={g} lambda={k} psi={exps:?}"), expected, actual);
                }
            }
            VerifyScope::Genus0 { max_n } => {
                for n in 3..=max_n {
                    for part in enumerate_partitions_bounded(n as u32 - 3, n) {
                        let mut exps = part.parts().to_vec();
                        exps.resize(n, 0);
                        let expected = genus0_oracle(&exps)?;
                        let actual = self.compute(0, 0, &exps)?;
                        report.push(format!("genus0 psi={exps:?}"), expected, actual);
                    }
                }
            }
            VerifyScope::LambdaG { max_dim } => {
                let mut genus = 1u32;
                while 3 * genus - 3 + 1 <= max_dim {
                    for n in 1..=(max_dim - (3 * genus - 3)) as usize {
                        let total = 2 * genus as i64 - 3 + n as i64;
                        if total < 0 {
                            continue;
                        }
                        for part in enumerate_partitions_bounded(total as u32, n) {
                            let mut exps = part.parts().to_vec();
                            exps.resize(n, 0);
                            let expected = lambda_g_oracle(genus, &exps)?;
                            let actual = self.compute(genus, genus, &exps)?;
                            report
                                .push(format!("lambda_g g={genus} psi={exps:?}"), expected, actual);
                        }
                    }
                    genus += 1;
                }
            }
            VerifyScope::LambdaGm1 { max_genus } => {
                for genus in 2..=max_genus {
                    let expected = lambda_gm1_onepoint_oracle(genus)?;
                    let actual = self.compute(genus, genus - 1, &[2 * genus - 1])?;
                    report.push(format!("lambda_(g-1) one-point g={genus}"), expected, actual);
                }
            }
            VerifyScope::Hurwitz { max_d } => {
                for d in 1..=max_d {
                    let mu = Partition::new(vec![d]);
                    for nu in enumerate_partitions(d) {
                        for g_inf in 0..=2u32 {
                            let r = 2 * g_inf + nu.len() as u32 - 1;
                            let expected = double_hurwitz_via_characters(&mu, &nu, r)?
                                / Rational::from_integer(factorial(r as u64));
                            let actual = hurwitz_weight(d, &nu, g_inf)?;
                            report.push(
                                format!("hurwitz d={d} nu={nu} g_inf={g_inf}"),
                                expected,
                                actual,
                            );
                        }
                    }
                }
                push_orthogonality_comparisons(&mut report, 7)?;
            }
        }
        Ok(report)
    }
}

/// Both character orthogonality relations for every pair of partitions of
/// every d ≤ max_d.
fn push_orthogonality_comparisons(report: &mut VerifyReport, max_d: u32) -> Result<()> {
    use crate::characters::character;
    use crate::partitions::centralizer_order;
    for d in 1..=max_d {
        let all = enumerate_partitions(d);
        let mut table = Vec::with_capacity(all.len());
        for xi in &all {
            let mut row = Vec::with_capacity(all.len());
            for class in &all {
                row.push(character(xi, class)?);
            }
            table.push(row);
        }
        for (a, nu) in all.iter().enumerate() {
            for (b, mu) in all.iter().enumerate() {
                let mut row_sum = Rational::zero();
                for (c, xi) in all.iter().enumerate() {
                    row_sum += rat(table[a][c] * table[b][c])
                        / Rational::from_integer(centralizer_order(xi));
                }
                let expected = if a == b { rat(1) } else { rat(0) };
                report.push(format!("orthogonality rows d={d} {nu} {mu}"), expected, row_sum);

                let col_sum: i64 = (0..all.len()).map(|c| table[c][a] * table[c][b]).sum();
                let expected_col = if a == b {
                    Rational::from_integer(centralizer_order(nu))
                } else {
                    rat(0)
                };
                report.push(
                    format!("orthogonality columns d={d} {nu} {mu}"),
                    expected_col,
                    rat(col_sum),
                );
            }
        }
    }
    Ok(())
}
