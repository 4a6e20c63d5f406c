use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;

use super::rank::RankConfig;
use super::system::tangent_system;
use super::DefectReport;
use crate::error::{Error, Result};
use crate::group::enumeration_cap;
use crate::hadamard::{
    deformed_tensor, recombination_parameters, require_hadamard, DeformationParameters,
    HadamardMatrix, Phase, Unimodular,
};

/// Turn grid for one parameter: `k/m` for the listed numerators, or for all
/// `k` in `0..m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamGrid {
    pub denominator: u64,
    pub numerators: Option<Vec<i64>>,
}

impl ParamGrid {
    pub fn full(denominator: u64) -> Self {
        ParamGrid {
            denominator,
            numerators: None,
        }
    }

    pub fn points(&self) -> Vec<Phase> {
        match &self.numerators {
            None => (0..self.denominator as i64)
                .map(|k| Phase::root(k, self.denominator))
                .collect(),
            Some(ks) => ks
                .iter()
                .map(|&k| Phase::root(k, self.denominator))
                .collect(),
        }
    }
}

impl fmt::Display for ParamGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.denominator)?;
        if let Some(ks) = &self.numerators {
            let ks: Vec<String> = ks.iter().map(|k| k.to_string()).collect();
            write!(f, ":{}", ks.join(","))?;
        }
        Ok(())
    }
}

/// Grid over the free entries of a dephased parameter matrix `L`
/// (`L_aj` with `a, j >= 1`, row-major). Syntax: `;`-separated
/// per-parameter grids `m` or `m:k1,k2,...`; a single grid is shared by
/// every free entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanGrid {
    pub params: Vec<ParamGrid>,
    /// Appends the recombination point `L_aj = w^{aj}`, `w = e^{2 pi i/NM}`.
    pub include_recombination: bool,
}

impl fmt::Display for ScanGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.params.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", parts.join(";"))
    }
}

impl FromStr for ScanGrid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut params = Vec::new();
        let mut offset = 0;
        for part in s.split(';') {
            params.push(parse_param(part.trim(), offset)?);
            offset += part.len() + 1;
        }
        Ok(ScanGrid {
            params,
            include_recombination: false,
        })
    }
}

fn parse_param(text: &str, offset: usize) -> Result<ParamGrid> {
    let (den, nums) = match text.split_once(':') {
        Some((d, n)) => (d, Some(n)),
        None => (text, None),
    };
    let denominator: u64 = den
        .trim()
        .parse()
        .map_err(|_| Error::parse(offset, format!("bad grid denominator {den:?}")))?;
    if denominator == 0 {
        return Err(Error::parse(offset, "grid denominator must be positive"));
    }
    let numerators = match nums {
        None => None,
        Some(list) => {
            let at = offset + den.len() + 1;
            let ks = list
                .split(',')
                .map(|k| {
                    k.trim()
                        .parse::<i64>()
                        .map_err(|_| Error::parse(at, format!("bad grid numerator {k:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            Some(ks)
        }
    };
    Ok(ParamGrid {
        denominator,
        numerators,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanCell {
    pub cell_id: usize,
    pub parameters: DeformationParameters,
    /// `"flat"`, `"grid"` or `"recombination"`.
    pub kind: &'static str,
}

#[derive(Debug)]
pub struct ScanRow {
    pub cell: ScanCell,
    pub outcome: Result<DefectReport>,
}

impl ScanRow {
    pub fn defect(&self) -> Option<usize> {
        self.outcome.as_ref().ok().map(|r| r.undephased)
    }
}

fn free_count(rows: usize, cols: usize) -> usize {
    rows.saturating_sub(1) * cols.saturating_sub(1)
}

/// Odometer step, last position fastest; `false` once it wraps around.
fn advance(idx: &mut [usize], lens: &[usize]) -> bool {
    for t in (0..idx.len()).rev() {
        idx[t] += 1;
        if idx[t] < lens[t] {
            return true;
        }
        idx[t] = 0;
    }
    false
}

fn cell_parameters(rows: usize, cols: usize, free: &[Phase]) -> DeformationParameters {
    let mut phases = vec![Phase::ONE; rows * cols];
    let mut it = free.iter();
    for a in 1..rows {
        for j in 1..cols {
            phases[a * cols + j] = *it.next().expect("free entry count");
        }
    }
    DeformationParameters::from_phases(rows, cols, phases).expect("shape")
}

/// Enumerates the cells of a scan of `H (x)_L K` in deterministic order:
/// the flat cell first if the grid misses it, then the cartesian grid
/// (last free entry fastest), then the recombination point if requested.
pub fn scan_cells(n: usize, m: usize, grid: &ScanGrid) -> Result<Vec<ScanCell>> {
    let (rows, cols) = (m, n);
    let count = free_count(rows, cols);
    let axes: Vec<Vec<Phase>> = match grid.params.len() {
        _ if count == 0 => Vec::new(),
        1 => vec![grid.params[0].points(); count],
        len if len == count => grid.params.iter().map(|p| p.points()).collect(),
        len => {
            return Err(Error::DimensionMismatch(format!(
                "grid has {len} parameters, L has {count} free entries"
            )))
        }
    };
    let total = axes
        .iter()
        .try_fold(1u128, |acc, a| acc.checked_mul(a.len() as u128))
        .unwrap_or(u128::MAX);
    if total > enumeration_cap() as u128 {
        return Err(Error::CapExceeded {
            size: total,
            cap: enumeration_cap(),
        });
    }

    let mut grid_cells = Vec::with_capacity(total as usize);
    if total > 0 {
        let lens: Vec<usize> = axes.iter().map(Vec::len).collect();
        let mut idx = vec![0usize; axes.len()];
        loop {
            let free: Vec<Phase> = idx.iter().zip(&axes).map(|(&i, a)| a[i]).collect();
            grid_cells.push(cell_parameters(rows, cols, &free));
            if !advance(&mut idx, &lens) {
                break;
            }
        }
    }

    let flat = DeformationParameters::flat(rows, cols);
    let mut cells = Vec::with_capacity(grid_cells.len() + 2);
    if !grid_cells.contains(&flat) {
        cells.push((flat.clone(), "flat"));
    }
    for p in grid_cells {
        let kind = if p == flat { "flat" } else { "grid" };
        cells.push((p, kind));
    }
    if grid.include_recombination {
        cells.push((recombination_parameters(n, m), "recombination"));
    }
    Ok(cells
        .into_iter()
        .enumerate()
        .map(|(cell_id, (parameters, kind))| ScanCell {
            cell_id,
            parameters,
            kind,
        })
        .collect())
}

fn evaluate(
    h: &HadamardMatrix,
    k: &HadamardMatrix,
    l: &DeformationParameters,
    cfg: &RankConfig,
) -> Result<DefectReport> {
    let m = deformed_tensor(h, l, k)?;
    require_hadamard(&m)?;
    let info = tangent_system(&m).rank(cfg.rel_tol)?;
    Ok(DefectReport::new(m.n(), &info, cfg))
}

/// Undephased defect of `H (x)_L K` over every grid cell. Cells are
/// evaluated on `jobs` worker threads; rows come back in cell order, and a
/// failing cell is recorded in its row without stopping the scan.
/// Uncertified ranks are reported with `certified = false`.
pub fn deformation_scan(
    h: &HadamardMatrix,
    k: &HadamardMatrix,
    grid: &ScanGrid,
    cfg: &RankConfig,
    jobs: usize,
) -> Result<Vec<ScanRow>> {
    let cells = scan_cells(h.n(), k.n(), grid)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Internal(e.to_string()))?;
    let rows = pool.install(|| {
        cells
            .into_par_iter()
            .map(|cell| {
                let outcome = evaluate(h, k, &cell.parameters, cfg);
                ScanRow { cell, outcome }
            })
            .collect()
    });
    Ok(rows)
}

/// `"0 0;0 1/8"`: rows separated by `;`, entries in turns.
pub fn format_parameters(l: &DeformationParameters) -> String {
    let entry = |u: Unimodular| match u.as_phase() {
        Some(p) => p.to_string(),
        None => {
            let t = u.to_complex().arg() / std::f64::consts::TAU;
            format!("{}", if t < 0.0 { t + 1.0 } else { t })
        }
    };
    (0..l.rows())
        .map(|a| {
            (0..l.cols())
                .map(|j| entry(l.get(a, j)))
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect::<Vec<_>>()
        .join(";")
}

fn format_gap(g: f64) -> String {
    if g.is_infinite() {
        "inf".to_string()
    } else {
        format!("{g:e}")
    }
}

/// Writes `cell-id,L,defect,dephased-defect,gap-ratio,certified`. Failed
/// cells leave the numeric fields empty and are marked `false`.
pub fn write_scan_csv<W: Write>(rows: &[ScanRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "cell-id",
        "L",
        "defect",
        "dephased-defect",
        "gap-ratio",
        "certified",
    ])?;
    for row in rows {
        let id = row.cell.cell_id.to_string();
        let l = format_parameters(&row.cell.parameters);
        match &row.outcome {
            Ok(r) => w.write_record([
                id,
                l,
                r.undephased.to_string(),
                r.dephased.to_string(),
                format_gap(r.gap_ratio),
                r.certified.to_string(),
            ])?,
            Err(_) => w.write_record([
                id,
                l,
                String::new(),
                String::new(),
                String::new(),
                "false".into(),
            ])?,
        }
    }
    w.flush()?;
    Ok(())
}
