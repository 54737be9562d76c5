//! Exact rational linear algebra: incremental row-echelon maintenance with
//! exact pivots, rank tracking, and unique-solution extraction by back
//! substitution. No thresholds anywhere.

use num_traits::Zero;

use crate::exact::Rational;
use crate::recursion::RelationRow;
use crate::{Error, Result};

/// Outcome of feeding one relation into the system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AddRowOutcome {
    RankIncreased,
    Redundant,
}

/// A growing system of relations Σ coefficients·x + constant = 0 over a fixed
/// unknown ordering.
#[derive(Debug, Clone)]
pub struct LinearSystem {
    unknown_count: usize,
    original: Vec<RelationRow>,
    /// Reduced rows, each normalized to pivot 1; `pivots[i]` is the pivot
    /// column of `reduced[i]`.
    reduced: Vec<(Vec<Rational>, Rational)>,
    pivots: Vec<usize>,
}

impl LinearSystem {
    pub fn new(unknown_count: usize) -> Self {
        LinearSystem {
            unknown_count,
            original: Vec::new(),
            reduced: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn unknown_count(&self) -> usize {
        self.unknown_count
    }

    pub fn is_complete(&self) -> bool {
        self.rank() == self.unknown_count
    }

    pub fn rows(&self) -> &[RelationRow] {
        &self.original
    }

    /// Eliminate an incoming row against the current echelon rows. A row that
    /// reduces to 0 = 0 is redundant; 0 = c with c ≠ 0 signals an upstream
    /// math bug, not a solvable state.
    pub fn add_row(&mut self, row: RelationRow) -> Result<AddRowOutcome> {
        assert_eq!(
            row.coefficients.len(),
            self.unknown_count,
            "row is not aligned with the unknown ordering"
        );
        let mut coeffs = row.coefficients.clone();
        let mut constant = row.constant.clone();
        self.original.push(row.clone());
        for (idx, &pivot_col) in self.pivots.iter().enumerate() {
            let factor = coeffs[pivot_col].clone();
            if factor.is_zero() {
                continue;
            }
            let (ref prow, ref pconst) = self.reduced[idx];
            for (c, p) in coeffs.iter_mut().zip(prow) {
                *c -= &factor * p;
            }
            constant -= factor * pconst;
        }
        let Some(pivot_col) = coeffs.iter().position(|c| !c.is_zero()) else {
            if constant.is_zero() {
                return Ok(AddRowOutcome::Redundant);
            }
            return Err(Error::InconsistentRow { d: row.d });
        };
        let pivot = coeffs[pivot_col].clone();
        for c in coeffs.iter_mut() {
            *c /= &pivot;
        }
        constant /= pivot;
        self.reduced.push((coeffs, constant));
        self.pivots.push(pivot_col);
        Ok(AddRowOutcome::RankIncreased)
    }

    /// Unique exact solution; requires full rank. Every original row is
    /// re-evaluated at the solution and must vanish identically.
    pub fn solve(&self) -> Result<Vec<Rational>> {
        if !self.is_complete() {
            return Err(Error::RankDeficient {
                rank: self.rank(),
                unknowns: self.unknown_count,
            });
        }
        // Back substitution in reverse insertion order: later rows were
        // reduced against all earlier pivots, so each sweep eliminates one.
        let mut values = vec![Rational::zero(); self.unknown_count];
        let mut solved = vec![false; self.unknown_count];
        for idx in (0..self.reduced.len()).rev() {
            let (ref coeffs, ref constant) = self.reduced[idx];
            let col = self.pivots[idx];
            let mut rhs = -constant.clone();
            for (j, c) in coeffs.iter().enumerate() {
                if j != col && !c.is_zero() {
                    debug_assert!(solved[j], "unsolved trailing column");
                    rhs -= c * &values[j];
                }
            }
            values[col] = rhs;
            solved[col] = true;
        }
        for row in &self.original {
            let mut residual = row.constant.clone();
            for (c, v) in row.coefficients.iter().zip(&values) {
                residual += c * v;
            }
            if !residual.is_zero() {
                return Err(Error::Internal(format!(
                    "nonzero residual {residual} on the degree-{} row",
                    row.d
                )));
            }
        }
        Ok(values)
    }
}
