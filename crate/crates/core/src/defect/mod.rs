//! Enveloping tangent space and defects as certified numerical coranks.

mod fourier;
mod rank;
mod scan;
mod system;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hadamard::{require_hadamard, HadamardMatrix};

pub use fourier::{fourier_p_check, p_space_basis, PCheckReport, P_RESIDUAL_TOL};
pub use rank::{null_space, numeric_rank, RankConfig, RankInfo};
pub use scan::{
    deformation_scan, format_parameters, scan_cells, write_scan_csv, ParamGrid, ScanCell, ScanGrid,
    ScanRow,
};
pub use system::{
    circulant_tangent_system, real_design_system, tangent_residual, tangent_system, TangentSystem,
};

#[derive(Debug, Clone, Serialize)]
pub struct DefectReport {
    pub n: usize,
    /// `d(H)`.
    pub undephased: usize,
    /// `d'(H) = d(H) - 2N + 1`.
    pub dephased: i64,
    pub rank: usize,
    pub singular_values: Vec<f64>,
    pub gap_ratio: f64,
    pub rel_tol: f64,
    pub gap_threshold: f64,
    pub certified: bool,
}

impl DefectReport {
    fn new(n: usize, info: &RankInfo, cfg: &RankConfig) -> Self {
        let undephased = info.nullity();
        DefectReport {
            n,
            undephased,
            dephased: undephased as i64 - 2 * n as i64 + 1,
            rank: info.rank,
            singular_values: info.singular_values.clone(),
            gap_ratio: info.gap_ratio,
            rel_tol: cfg.rel_tol,
            gap_threshold: cfg.gap_threshold,
            certified: info.certified(cfg),
        }
    }
}

/// `d(H) = N^2 - rank`, failing with [`Error::AmbiguousRank`] when the
/// singular-value gap is below the certification threshold.
pub fn undephased_defect(h: &HadamardMatrix, cfg: &RankConfig) -> Result<DefectReport> {
    require_hadamard(h)?;
    let info = tangent_system(h).rank(cfg.rel_tol)?;
    info.certify(cfg)?;
    Ok(DefectReport::new(h.n(), &info, cfg))
}

/// `d'(H)` computed both as `d(H) - 2N + 1` and as the nullity of the
/// system with the first row and column of `A` forced to zero.
pub fn dephased_defect(h: &HadamardMatrix, cfg: &RankConfig) -> Result<i64> {
    require_hadamard(h)?;
    let system = tangent_system(h);
    let (full, _) = system.certified_nullity(cfg)?;
    let via_relation = full as i64 - 2 * h.n() as i64 + 1;
    let (restricted, _) = system.restrict_dephased().certified_nullity(cfg)?;
    let via_restriction = restricted as i64;
    if via_relation != via_restriction {
        return Err(Error::PathDisagreement {
            via_relation,
            via_restriction,
        });
    }
    Ok(via_relation)
}

/// `true` certifies `d'(H) = 0`, so `H` is isolated among dephased matrices;
/// `false` is inconclusive.
pub fn isolation_flag(h: &HadamardMatrix, cfg: &RankConfig) -> Result<bool> {
    Ok(dephased_defect(h, cfg)? == 0)
}

/// Orthonormal basis (Frobenius inner product) of the enveloping tangent
/// space, each element residual-checked against `10 * rel_tol * sigma_max`.
pub fn tangent_basis(h: &HadamardMatrix, cfg: &RankConfig) -> Result<Vec<DMatrix<f64>>> {
    require_hadamard(h)?;
    let n = h.n();
    let system = tangent_system(h);
    let (info, vectors) = null_space(&system.matrix, cfg.rel_tol)?;
    info.certify(cfg)?;
    let tolerance = 10.0 * cfg.rel_tol * info.sigma_max();
    let mut basis = Vec::with_capacity(vectors.len());
    for v in vectors {
        let a = DMatrix::from_row_slice(n, n, v.as_slice());
        let residual = tangent_residual(h, &a);
        if residual > tolerance {
            return Err(Error::ResidualExceeded {
                residual,
                tolerance,
                context: format!("tangent basis element of {}", h.provenance()),
            });
        }
        basis.push(a);
    }
    Ok(basis)
}
