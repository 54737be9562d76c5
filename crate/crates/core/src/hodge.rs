//! Canonical Hodge-integral identities, the memoized value table with its
//! on-disk format, the four-case per-vertex evaluation, and the assembly of
//! whole-configuration sums as affine expressions over unknown integrals.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::Write;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::exact::{binomial, factorial, pow_i, rat, Rational};
use crate::partitions::{automorphism_order, ExponentTuple, VertexTriple};
use crate::{Error, Result};

/// Canonical identity of one Hodge integral: genus, λ-index, and the multiset
/// of ψ-exponents (stored weakly decreasing). Marked points are
/// interchangeable, so the integral depends only on the exponent multiset.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HodgeKey {
    pub genus: u32,
    pub lambda: u32,
    exponents: Vec<u32>,
}

impl HodgeKey {
    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    /// Number of marked points.
    pub fn points(&self) -> usize {
        self.exponents.len()
    }

    /// λ-index plus total ψ-degree; equals 3g−3+n for every stored key.
    pub fn dimension(&self) -> u32 {
        self.lambda + self.exponents.iter().sum::<u32>()
    }

    /// The exponent tuple of the group that solves this key: the exponents
    /// minus one copy of the maximum (the distinguished point is the free
    /// one, and it must dominate the rest for the key to be reachable).
    pub fn owning_exponents(&self) -> ExponentTuple {
        ExponentTuple::new(self.exponents[1..].to_vec())
    }
}

impl fmt::Display for HodgeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} [", self.genus, self.lambda)?;
        for (i, e) in self.exponents.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "]")
    }
}

/// Three-way classification of a requested integral.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KeyClass {
    Key(HodgeKey),
    /// Dimension mismatch or λ-index above the genus: identically zero.
    Zero,
    /// 2g−2+n ≤ 0: the moduli space does not exist.
    Unstable,
}

/// Canonicalize a request. Unstable takes precedence over Zero.
pub fn canonical_key(genus: u32, lambda: u32, exponents: &[u32]) -> KeyClass {
    let m = exponents.len();
    if 2 * genus as i64 - 2 + m as i64 <= 0 {
        return KeyClass::Unstable;
    }
    if lambda > genus {
        return KeyClass::Zero;
    }
    let degree = lambda as i64 + exponents.iter().map(|&e| e as i64).sum::<i64>();
    if degree != 3 * genus as i64 - 3 + m as i64 {
        return KeyClass::Zero;
    }
    let mut sorted = exponents.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    KeyClass::Key(HodgeKey {
        genus,
        lambda,
        exponents: sorted,
    })
}

/// Affine combination: a rational constant plus rational coefficients on
/// currently-unknown integrals. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LinearExpr {
    constant: Rational,
    terms: BTreeMap<HodgeKey, Rational>,
}

impl LinearExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_constant(constant: Rational) -> Self {
        LinearExpr {
            constant,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(&self) -> &Rational {
        &self.constant
    }

    pub fn terms(&self) -> impl Iterator<Item = (&HodgeKey, &Rational)> {
        self.terms.iter()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, key: HodgeKey, coeff: Rational) {
        use std::collections::btree_map::Entry;
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            Entry::Vacant(slot) => {
                slot.insert(coeff);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += coeff;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &LinearExpr) {
        self.constant += &other.constant;
        for (k, v) in &other.terms {
            self.add_term(k.clone(), v.clone());
        }
    }

    pub fn scale(&mut self, factor: &Rational) {
        if factor.is_zero() {
            self.constant = Rational::zero();
            self.terms.clear();
            return;
        }
        self.constant *= factor;
        for v in self.terms.values_mut() {
            *v *= factor;
        }
    }

    /// Product of two affine expressions; at most one side may carry symbolic
    /// terms (the dimension-bound argument guarantees this for vertex
    /// products, so a violation is an internal bug).
    pub fn mul(&self, other: &LinearExpr) -> Result<LinearExpr> {
        if !self.is_constant() && !other.is_constant() {
            return Err(Error::Internal(
                "product of two symbolic expressions: two vertices reached the target dimension"
                    .into(),
            ));
        }
        let (symbolic, scalar) = if self.is_constant() {
            (other, &self.constant)
        } else {
            (self, &other.constant)
        };
        let mut out = symbolic.clone();
        out.scale(scalar);
        Ok(out)
    }
}

/// Memoized table of solved integrals. A key is present only with its final
/// exact value. The single seeded initial value is the dimension-0 point
/// integral on the three-pointed rational curve.
#[derive(Debug, Clone)]
pub struct HodgeTable {
    values: BTreeMap<HodgeKey, Rational>,
    /// Keys solved in this process and not yet appended to the cache file.
    unsaved: Vec<HodgeKey>,
}

impl HodgeTable {
    pub fn new() -> Self {
        let mut values = BTreeMap::new();
        match canonical_key(0, 0, &[0, 0, 0]) {
            KeyClass::Key(k) => values.insert(k, Rational::one()),
            _ => unreachable!("the base point integral is a valid key"),
        };
        HodgeTable {
            values,
            unsaved: Vec::new(),
        }
    }

    pub fn get(&self, key: &HodgeKey) -> Option<&Rational> {
        self.values.get(key)
    }

    pub fn contains(&self, key: &HodgeKey) -> bool {
        self.values.contains_key(key)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn insert(&mut self, key: HodgeKey, value: Rational) {
        if let Some(existing) = self.values.get(&key) {
            assert_eq!(existing, &value, "table idempotence violated for {key}");
            return;
        }
        self.unsaved.push(key.clone());
        self.values.insert(key, value);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&HodgeKey, &Rational)> {
        self.values.iter()
    }

    /// Canonical sort order of the cache file: (dimension, g, k, exponents).
    fn write_order(a: &HodgeKey, b: &HodgeKey) -> std::cmp::Ordering {
        (a.dimension(), a.genus, a.lambda, a.exponents())
            .cmp(&(b.dimension(), b.genus, b.lambda, b.exponents()))
    }

    fn format_entry(key: &HodgeKey, value: &Rational) -> String {
        format!("{key} = {value}")
    }

    fn parse_line(line: &str, lineno: usize) -> Result<(HodgeKey, Rational)> {
        let bad = |message: String| Error::Cache {
            line: lineno,
            message,
        };
        let (left, right) = line
            .split_once(" = ")
            .ok_or_else(|| bad("missing ` = ` separator".into()))?;
        let value: Rational = right
            .trim()
            .parse()
            .map_err(|e| bad(format!("bad rational `{right}`: {e}")))?;
        let mut fields = left.split_whitespace();
        let genus: u32 = fields
            .next()
            .ok_or_else(|| bad("missing genus".into()))?
            .parse()
            .map_err(|e| bad(format!("bad genus: {e}")))?;
        let lambda: u32 = fields
            .next()
            .ok_or_else(|| bad("missing lambda index".into()))?
            .parse()
            .map_err(|e| bad(format!("bad lambda index: {e}")))?;
        let bracket = fields
            .next()
            .ok_or_else(|| bad("missing exponent list".into()))?;
        if fields.next().is_some() {
            return Err(bad("trailing fields".into()));
        }
        let inner = bracket
            .strip_prefix('[')
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(|| bad("exponent list must be bracketed".into()))?;
        let mut exponents = Vec::new();
        if !inner.is_empty() {
            for piece in inner.split(',') {
                exponents.push(
                    piece
                        .parse::<u32>()
                        .map_err(|e| bad(format!("bad exponent `{piece}`: {e}")))?,
                );
            }
        }
        match canonical_key(genus, lambda, &exponents) {
            KeyClass::Key(key) => Ok((key, value)),
            KeyClass::Zero => Err(bad(format!(
                "dimension-violating key {genus} {lambda} {bracket}"
            ))),
            KeyClass::Unstable => Err(bad(format!(
                "unstable key {genus} {lambda} {bracket}"
            ))),
        }
    }

    /// Load a cache file. Corrupt lines abort with their line number.
    pub fn load(path: &Path) -> Result<Self> {
        let mut table = HodgeTable::new();
        let text = std::fs::read_to_string(path)?;
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = Self::parse_line(line, idx + 1)?;
            if let Some(existing) = table.values.get(&key) {
                if existing != &value {
                    return Err(Error::Cache {
                        line: idx + 1,
                        message: format!("conflicting duplicate for {key}"),
                    });
                }
                continue;
            }
            table.values.insert(key, value);
        }
        table.unsaved.clear();
        Ok(table)
    }

    /// Append entries solved since the last flush.
    pub fn append_unsaved(&mut self, path: &Path) -> Result<()> {
        if self.unsaved.is_empty() {
            return Ok(());
        }
        let mut file = std::fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)?;
        let mut pending = std::mem::take(&mut self.unsaved);
        pending.sort_by(Self::write_order);
        for key in &pending {
            writeln!(file, "{}", Self::format_entry(key, &self.values[key]))?;
        }
        Ok(())
    }

    /// Full rewrite, canonically sorted.
    pub fn write_all(&mut self, path: &Path) -> Result<()> {
        std::fs::write(path, self.render())?;
        self.unsaved.clear();
        Ok(())
    }

    /// The full table in cache format, canonically sorted.
    pub fn render(&self) -> String {
        let mut keys: Vec<&HodgeKey> = self.values.keys().collect();
        keys.sort_by(|a, b| Self::write_order(a, b));
        let mut out = String::new();
        for key in keys {
            out.push_str(&Self::format_entry(key, &self.values[key]));
            out.push('\n');
        }
        out
    }
}

impl Default for HodgeTable {
    fn default() -> Self {
        Self::new()
    }
}

/// ∏ νᵢ^νᵢ/νᵢ! over the parts of a block.
fn part_power_factor(parts: &[u32]) -> Rational {
    let mut acc = Rational::one();
    for &p in parts {
        acc *= Rational::new(BigInt::from(p).pow(p), factorial(p as u64));
    }
    acc
}

/// The per-vertex quantity as an affine expression. The three unstable cases
/// are pure constants in closed form; the stable case expands the integrand
/// monomial by monomial, folding keys below `target_dim` through the table
/// and keeping keys at `target_dim` symbolic. A vertex whose own dimension
/// exceeds the target is an upstream enumeration bug.
pub fn vertex_contribution(
    triple: &VertexTriple,
    table: &HodgeTable,
    target_dim: Option<u32>,
) -> Result<LinearExpr> {
    let nu = triple.nu_block.parts();
    let e = triple.e_block.entries();
    let g = triple.genus;

    if g == 0 && nu.len() + e.len() == 1 {
        // Single edge, nothing else: ν₁^{ν₁−2}/ν₁!.
        let v = nu[0];
        let value = pow_i(&rat(v as i64), v as i64 - 2)?
            / Rational::from_integer(factorial(v as u64));
        return Ok(LinearExpr::from_constant(value));
    }
    if g == 0 && nu.len() == 2 && e.is_empty() {
        let (a, b) = (nu[0], nu[1]);
        let value = Rational::one() / Rational::from_integer(automorphism_order(&triple.nu_block))
            * part_power_factor(nu)
            / rat(a as i64 + b as i64);
        return Ok(LinearExpr::from_constant(value));
    }
    if g == 0 && nu.len() == 1 && e.len() == 1 {
        let v = nu[0];
        let mut sum = Rational::zero();
        for k in 0..=e[0] {
            sum += Rational::from_integer(binomial(e[0] as u64, k as u64))
                * pow_i(&rat(v as i64), -(1 + k as i64))?;
        }
        let value = part_power_factor(nu) * sum;
        return Ok(LinearExpr::from_constant(value));
    }

    // Stable case.
    let points = nu.len() + e.len();
    debug_assert!(2 * g as i64 - 2 + points as i64 > 0);
    let vertex_dim = (3 * g as i64 - 3 + points as i64) as u32;
    if let Some(target) = target_dim {
        if vertex_dim > target {
            return Err(Error::Internal(format!(
                "vertex dimension {vertex_dim} exceeds target {target}"
            )));
        }
    }

    let prefactor = part_power_factor(nu)
        / Rational::from_integer(factorial(e.len() as u64))
        / Rational::from_integer(automorphism_order(&triple.nu_block));

    let mut expr = LinearExpr::zero();
    for (coeff, key) in expansion_terms(g, nu, e, vertex_dim) {
        match target_dim {
            Some(target) if key.dimension() == target => {
                expr.add_term(key, coeff);
            }
            _ => {
                let value = table.get(&key).ok_or_else(|| {
                    Error::Internal(format!("needed value for {key} is not in the table"))
                })?;
                expr.add_assign(&LinearExpr::from_constant(coeff * value));
            }
        }
    }
    expr.scale(&prefactor);
    Ok(expr)
}

/// Every key the stable expansion of a triple touches (unstable cases touch
/// none). Used by the pre-pass that resolves dependencies before rows are
/// assembled over a frozen table.
pub fn vertex_keys(triple: &VertexTriple) -> Vec<HodgeKey> {
    let nu = triple.nu_block.parts();
    let e = triple.e_block.entries();
    if triple.genus == 0 && nu.len() + e.len() <= 2 {
        return Vec::new();
    }
    let vertex_dim = (3 * triple.genus as i64 - 3 + (nu.len() + e.len()) as i64) as u32;
    let set: BTreeSet<HodgeKey> = expansion_terms(triple.genus, nu, e, vertex_dim)
        .into_iter()
        .map(|(_, key)| key)
        .collect();
    set.into_iter().collect()
}

/// Monomials of Λ_g^∨(1) ∏ⱼ(1−ψⱼ)^{eⱼ} / ∏ᵢ(1−νᵢψᵢ) at total degree
/// `vertex_dim`: the coefficient is (−1)^{k+Σl̃ⱼ} ∏ C(eⱼ,l̃ⱼ) ∏ νᵢ^{lᵢ} on the
/// integral of λ_k ∏ψᵢ^{lᵢ} ∏ψⱼ^{l̃ⱼ}. Coefficients on a shared canonical key
/// are not merged here; callers accumulate.
fn expansion_terms(g: u32, nu: &[u32], e: &[u32], vertex_dim: u32) -> Vec<(Rational, HodgeKey)> {
    let mut out = Vec::new();
    let mut e_choice = vec![0u32; e.len()];

    fn e_loop(
        g: u32,
        nu: &[u32],
        e: &[u32],
        vertex_dim: u32,
        idx: usize,
        used: u32,
        e_choice: &mut Vec<u32>,
        out: &mut Vec<(Rational, HodgeKey)>,
    ) {
        if used > vertex_dim {
            return;
        }
        if idx == e.len() {
            for k in 0..=g.min(vertex_dim - used) {
                distribute_nu(g, nu, e, vertex_dim, k, used, e_choice, out);
            }
            return;
        }
        for choice in 0..=e[idx] {
            e_choice[idx] = choice;
            e_loop(g, nu, e, vertex_dim, idx + 1, used + choice, e_choice, out);
        }
        e_choice[idx] = 0;
    }

    fn distribute_nu(
        g: u32,
        nu: &[u32],
        e: &[u32],
        vertex_dim: u32,
        k: u32,
        e_used: u32,
        e_choice: &[u32],
        out: &mut Vec<(Rational, HodgeKey)>,
    ) {
        let remaining = vertex_dim - e_used - k;
        let mut nu_choice = vec![0u32; nu.len()];
        fn recurse(
            nu: &[u32],
            idx: usize,
            remaining: u32,
            nu_choice: &mut Vec<u32>,
            emit: &mut dyn FnMut(&[u32]),
        ) {
            if idx + 1 == nu.len() {
                nu_choice[idx] = remaining;
                emit(nu_choice);
                return;
            }
            for v in 0..=remaining {
                nu_choice[idx] = v;
                recurse(nu, idx + 1, remaining - v, nu_choice, emit);
            }
        }
        if nu.is_empty() {
            unreachable!("every vertex carries an edge part");
        }
        let mut emit = |nu_choice: &[u32]| {
            let mut coeff = if (k + e_choice.iter().sum::<u32>()) % 2 == 0 {
                Rational::one()
            } else {
                -Rational::one()
            };
            for (&ej, &lj) in e.iter().zip(e_choice) {
                coeff *= Rational::from_integer(binomial(ej as u64, lj as u64));
            }
            for (&vi, &li) in nu.iter().zip(nu_choice) {
                coeff *= Rational::from_integer(BigInt::from(vi).pow(li));
            }
            let mut exponents: Vec<u32> = nu_choice.to_vec();
            exponents.extend_from_slice(e_choice);
            match canonical_key(g, k, &exponents) {
                KeyClass::Key(key) => out.push((coeff, key)),
                other => unreachable!("expansion produced {other:?} for a stable vertex"),
            }
        };
        recurse(nu, 0, remaining, &mut nu_choice, &mut emit);
    }

    e_loop(g, nu, e, vertex_dim, 0, 0, &mut e_choice, &mut out);
    out
}

/// Coefficient extraction over all vertex configurations: the weighted sum of
/// products of per-vertex contributions for Σ(2−2gᵢ) = χ₀, ν-blocks uniting
/// to ν and e-blocks to e. `target_dim` marks which keys remain symbolic.
pub fn vertex_config_sum(
    nu: &crate::partitions::Partition,
    e: &ExponentTuple,
    chi0: i64,
    target_dim: Option<u32>,
    table: &HodgeTable,
) -> Result<LinearExpr> {
    let mut total = LinearExpr::zero();
    for (triples, weight) in crate::partitions::enumerate_vertex_configs(nu, e, chi0) {
        let mut product = LinearExpr::from_constant(weight);
        for triple in &triples {
            let factor = vertex_contribution(triple, table, target_dim)?;
            product = product.mul(&factor)?;
        }
        total.add_assign(&product);
    }
    Ok(total)
}
