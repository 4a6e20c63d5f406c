use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};

/// Rank decision rule: `sigma_i > rel_tol * sigma_max` counts, and the
/// decision is certified when `sigma_rank / sigma_{rank+1} >= gap_threshold`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RankConfig {
    pub rel_tol: f64,
    pub gap_threshold: f64,
}

impl Default for RankConfig {
    fn default() -> Self {
        RankConfig {
            rel_tol: 1e-9,
            gap_threshold: 1e6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankInfo {
    pub rank: usize,
    pub cols: usize,
    /// `sigma_rank / sigma_{rank+1}`; infinite when the next value is exactly
    /// zero or absent.
    pub gap_ratio: f64,
    /// Descending.
    pub singular_values: Vec<f64>,
}

impl RankInfo {
    pub fn nullity(&self) -> usize {
        self.cols - self.rank
    }

    pub fn sigma_max(&self) -> f64 {
        self.singular_values.first().copied().unwrap_or(0.0)
    }

    pub fn certified(&self, cfg: &RankConfig) -> bool {
        self.gap_ratio >= cfg.gap_threshold
    }

    /// Fails with [`Error::AmbiguousRank`] unless certified.
    pub fn certify(&self, cfg: &RankConfig) -> Result<()> {
        if self.certified(cfg) {
            return Ok(());
        }
        Err(Error::AmbiguousRank {
            rank: self.rank,
            gap_ratio: self.gap_ratio,
            threshold: cfg.gap_threshold,
            singular_values: self.singular_values.clone(),
        })
    }
}

fn check_finite(m: &DMatrix<f64>) -> Result<()> {
    if m.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

fn rank_from_values(mut values: Vec<f64>, cols: usize, rel_tol: f64) -> RankInfo {
    values.sort_by(|a, b| b.total_cmp(a));
    let sigma_max = values.first().copied().unwrap_or(0.0);
    let rank = values.iter().filter(|&&s| s > rel_tol * sigma_max).count();
    let gap_ratio = if rank == 0 {
        f64::INFINITY
    } else {
        let next = values.get(rank).copied().unwrap_or(0.0);
        if next == 0.0 {
            f64::INFINITY
        } else {
            values[rank - 1] / next
        }
    };
    RankInfo {
        rank,
        cols,
        gap_ratio,
        singular_values: values,
    }
}

/// Numerical rank from the singular values of `m`.
pub fn numeric_rank(m: &DMatrix<f64>, rel_tol: f64) -> Result<RankInfo> {
    check_finite(m)?;
    if m.nrows() == 0 || m.ncols() == 0 {
        return Ok(rank_from_values(Vec::new(), m.ncols(), rel_tol));
    }
    let values = m.clone().singular_values();
    Ok(rank_from_values(
        values.iter().copied().collect(),
        m.ncols(),
        rel_tol,
    ))
}

/// Rank information together with an orthonormal basis of the numerical
/// null space (right singular vectors past the rank).
pub fn null_space(m: &DMatrix<f64>, rel_tol: f64) -> Result<(RankInfo, Vec<DVector<f64>>)> {
    check_finite(m)?;
    let cols = m.ncols();
    if cols == 0 {
        return Ok((rank_from_values(Vec::new(), 0, rel_tol), Vec::new()));
    }
    // Pad with zero rows so the decomposition returns a full V.
    let square = if m.nrows() < cols {
        let mut padded = DMatrix::zeros(cols, cols);
        padded.rows_mut(0, m.nrows()).copy_from(m);
        padded
    } else {
        m.clone()
    };
    let svd = square.svd(false, true);
    let v_t = svd.v_t.ok_or(Error::NonFinite)?;
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let kept = m.nrows().min(cols);
    let values: Vec<f64> = order
        .iter()
        .take(kept)
        .map(|&k| svd.singular_values[k])
        .collect();
    let info = rank_from_values(values, cols, rel_tol);
    let basis = order[info.rank..]
        .iter()
        .map(|&k| v_t.row(k).transpose())
        .collect();
    Ok((info, basis))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_matrix() {
        let info = numeric_rank(&DMatrix::zeros(3, 4), 1e-9).unwrap();
        assert_eq!(info.rank, 0);
        assert_eq!(info.nullity(), 4);
        assert!(info.gap_ratio.is_infinite());
    }

    #[test]
    fn identity() {
        let info = numeric_rank(&DMatrix::identity(3, 3), 1e-9).unwrap();
        assert_eq!(info.rank, 3);
        assert!(info.gap_ratio.is_infinite());
        assert!(info.certified(&RankConfig::default()));
    }

    #[test]
    fn non_finite_rejected() {
        let mut m = DMatrix::identity(2, 2);
        m[(0, 1)] = f64::NAN;
        assert!(matches!(numeric_rank(&m, 1e-9), Err(Error::NonFinite)));
    }

    #[test]
    fn ambiguous_gap() {
        let m = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 1e-3, 1e-10]));
        let info = numeric_rank(&m, 1e-9).unwrap();
        assert_eq!(info.rank, 2);
        assert!((info.gap_ratio - 1e7).abs() < 1.0);
        let m = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 1e-8, 1e-10]));
        let info = numeric_rank(&m, 1e-9).unwrap();
        assert!(matches!(
            info.certify(&RankConfig::default()),
            Err(Error::AmbiguousRank { rank: 2, .. })
        ));
    }

    #[test]
    fn null_space_of_wide_matrix() {
        // x0 - x1 = 0 in R^3: null space has dimension 2
        let m = DMatrix::from_row_slice(1, 3, &[1.0, -1.0, 0.0]);
        let (info, basis) = null_space(&m, 1e-9).unwrap();
        assert_eq!(info.rank, 1);
        assert_eq!(basis.len(), 2);
        for v in &basis {
            assert!((&m * v).norm() < 1e-14);
            assert!((v.norm() - 1.0).abs() < 1e-14);
        }
        assert!(basis[0].dot(&basis[1]).abs() < 1e-14);
    }
}
