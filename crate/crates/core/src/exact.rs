//! Exact rational nullity of the tangent system of a Butson matrix.
//!
//! With every entry a power of `zeta = e^{2 pi i/q}`, the coefficient
//! `H_ib conj(H_jb)` is `zeta^m`; reducing `x^m` modulo the cyclotomic
//! polynomial `Phi_q` writes each complex equation as `phi(q)` integer
//! equations whose rational solutions are the rational tangent vectors.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::cyclotomic::{totient, PowerTable};
use crate::defect::{tangent_system, RankConfig};
use crate::error::{Error, Result};
use crate::hadamard::{require_hadamard, HadamardMatrix};

pub const DEFAULT_PHI_CAP: u64 = 64;

/// Equation `sum_b H_ib conj(H_jb) (A_ib - A_jb) = 0` for one ordered pair.
#[derive(Debug, Clone)]
pub struct ExactEquation {
    pub pair: (usize, usize),
    /// `coefficients[u]` holds the power-basis coordinates of the coefficient
    /// of unknown `u = a*N + b`.
    pub coefficients: Vec<Vec<i64>>,
}

#[derive(Debug, Clone)]
pub struct ExactSystem {
    pub q: u64,
    pub phi: usize,
    pub n: usize,
    pub equations: Vec<ExactEquation>,
    table: PowerTable,
}

impl ExactSystem {
    pub fn unknowns(&self) -> usize {
        self.n * self.n
    }

    /// One integer row per equation and power-basis coordinate.
    pub fn integer_rows(&self) -> Vec<Vec<i64>> {
        let mut rows = Vec::with_capacity(self.equations.len() * self.phi);
        for eq in &self.equations {
            for t in 0..self.phi {
                rows.push(eq.coefficients.iter().map(|c| c[t]).collect());
            }
        }
        rows
    }

    /// Complex coefficient matrix at `x = e^{2 pi i/q}`, one row per
    /// equation.
    pub fn evaluate(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.equations.len(), self.unknowns(), |r, u| {
            self.table.evaluate(&self.equations[r].coefficients[u])
        })
    }
}

/// Builds the system with the default cap `phi(q) <= 64`.
pub fn build_exact_system(h: &HadamardMatrix) -> Result<ExactSystem> {
    build_exact_system_capped(h, DEFAULT_PHI_CAP)
}

pub fn build_exact_system_capped(h: &HadamardMatrix, phi_cap: u64) -> Result<ExactSystem> {
    let phases = h
        .phases()
        .ok_or_else(|| Error::NotExact(format!("{} has floating entries", h.provenance())))?;
    let q = h.root_order().unwrap_or(1);
    let phi = totient(q);
    if phi > phi_cap {
        return Err(Error::CapExceeded {
            size: phi as u128,
            cap: phi_cap,
        });
    }
    let table = PowerTable::new(q);
    let n = h.n();
    let exponent = |k: usize| phases[k].num() * (q as i64 / phases[k].den());
    let mut equations = Vec::with_capacity(n * n.saturating_sub(1));
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let mut coefficients = vec![vec![0i64; table.phi]; n * n];
            for b in 0..n {
                let m = exponent(i * n + b) - exponent(j * n + b);
                table.accumulate(&mut coefficients[i * n + b], m, 1);
                table.accumulate(&mut coefficients[j * n + b], m, -1);
            }
            equations.push(ExactEquation {
                pair: (i, j),
                coefficients,
            });
        }
    }
    Ok(ExactSystem {
        q,
        phi: table.phi,
        n,
        equations,
        table,
    })
}

/// Rank of an integer matrix by fraction-free (Bareiss) elimination.
pub fn integer_rank(rows: &[Vec<i64>], cols: usize) -> Result<usize> {
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .filter(|r| r.iter().any(|&x| x != 0))
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut rank = 0;
    let mut prev = BigInt::one();
    for c in 0..cols {
        if rank == m.len() {
            break;
        }
        let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let (top, rest) = m.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        let pivot = &pivot_row[c];
        for row in rest.iter_mut() {
            let factor = row[c].clone();
            for cc in (c + 1)..cols {
                let value = pivot * &row[cc] - &factor * &pivot_row[cc];
                let (quot, rem) = value.div_rem(&prev);
                if !rem.is_zero() {
                    return Err(Error::Internal("inexact division in elimination".into()));
                }
                row[cc] = quot;
            }
            row[c] = BigInt::zero();
        }
        prev = pivot.clone();
        rank += 1;
    }
    Ok(rank)
}

/// Dimension of the rational solution space.
pub fn rational_nullity(system: &ExactSystem) -> Result<usize> {
    let cols = system.unknowns();
    Ok(cols - integer_rank(&system.integer_rows(), cols)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    /// Rational nullity equals the numeric defect.
    Supported,
    /// Rational nullity is strictly smaller: a counterexample at this
    /// instance.
    Refuted,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConjectureReport {
    pub provenance: String,
    pub n: usize,
    pub q: u64,
    pub phi: usize,
    pub rational_nullity: usize,
    pub numeric_defect: usize,
    pub gap_ratio: f64,
    pub verdict: Verdict,
}

/// Compares the rational nullity against the certified numeric defect.
/// A rational nullity above the numeric one is impossible and reported as
/// an internal error.
pub fn conjecture_check(h: &HadamardMatrix, cfg: &RankConfig) -> Result<ConjectureReport> {
    require_hadamard(h)?;
    let system = build_exact_system(h)?;
    let (numeric, info) = tangent_system(h).certified_nullity(cfg)?;
    let rational = rational_nullity(&system)?;
    let verdict = match rational.cmp(&numeric) {
        std::cmp::Ordering::Equal => Verdict::Supported,
        std::cmp::Ordering::Less => Verdict::Refuted,
        std::cmp::Ordering::Greater => {
            return Err(Error::Internal(format!(
                "rational nullity {rational} exceeds numeric defect {numeric}"
            )))
        }
    };
    Ok(ConjectureReport {
        provenance: h.provenance().to_string(),
        n: h.n(),
        q: system.q,
        phi: system.phi,
        rational_nullity: rational,
        numeric_defect: numeric,
        gap_ratio: info.gap_ratio,
        verdict,
    })
}
