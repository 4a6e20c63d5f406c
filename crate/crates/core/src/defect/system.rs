use nalgebra::DMatrix;
use num_complex::Complex64;

use super::rank::{numeric_rank, RankConfig, RankInfo};
use crate::error::Result;
use crate::hadamard::{
    circulant_from_eigenvalues, design_array, require_hadamard, HadamardMatrix, Phase, Unimodular,
};

/// Real linear system on the `N^2` unknowns `A_ab` (column `a*N + b`) whose
/// null space is the enveloping tangent space.
#[derive(Debug, Clone)]
pub struct TangentSystem {
    pub n: usize,
    pub matrix: DMatrix<f64>,
    /// Ordered pair `(i, j)` each row comes from.
    pub row_pairs: Vec<(usize, usize)>,
    /// Original unknown index of every column.
    pub unknowns: Vec<usize>,
    pub provenance: String,
    /// Columns restricted to `a, b >= 1`.
    pub dephased: bool,
}

impl TangentSystem {
    fn ordered_pairs(n: usize) -> Vec<(usize, usize)> {
        (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .collect()
    }

    pub fn rank(&self, rel_tol: f64) -> Result<RankInfo> {
        numeric_rank(&self.matrix, rel_tol)
    }

    /// Nullity with certification.
    pub fn certified_nullity(&self, cfg: &RankConfig) -> Result<(usize, RankInfo)> {
        let info = self.rank(cfg.rel_tol)?;
        info.certify(cfg)?;
        Ok((info.nullity(), info))
    }

    /// Keeps the unknowns with `a, b >= 1`: the first row and column of `A`
    /// are forced to zero.
    pub fn restrict_dephased(&self) -> TangentSystem {
        let n = self.n;
        let keep: Vec<usize> = self
            .unknowns
            .iter()
            .enumerate()
            .filter(|(_, &u)| u / n >= 1 && u % n >= 1)
            .map(|(c, _)| c)
            .collect();
        let matrix = DMatrix::from_fn(self.matrix.nrows(), keep.len(), |r, c| {
            self.matrix[(r, keep[c])]
        });
        TangentSystem {
            n,
            matrix,
            row_pairs: self.row_pairs.clone(),
            unknowns: keep.iter().map(|&c| self.unknowns[c]).collect(),
            provenance: self.provenance.clone(),
            dephased: true,
        }
    }
}

/// Row `(i, j)`, `i != j`: coefficient `Re(H_ib conj(H_jb))` on `A_ib` and its
/// negative on `A_jb` when `i < j`; the imaginary part when `i > j`.
pub fn tangent_system(h: &HadamardMatrix) -> TangentSystem {
    let n = h.n();
    let m = h.to_complex_matrix();
    let pairs = TangentSystem::ordered_pairs(n);
    let mut matrix = DMatrix::zeros(pairs.len(), n * n);
    for (row, &(i, j)) in pairs.iter().enumerate() {
        for b in 0..n {
            let c = m[(i, b)] * m[(j, b)].conj();
            let v = if i < j { c.re } else { c.im };
            matrix[(row, i * n + b)] += v;
            matrix[(row, j * n + b)] -= v;
        }
    }
    TangentSystem {
        n,
        matrix,
        row_pairs: pairs,
        unknowns: (0..n * n).collect(),
        provenance: h.provenance().to_string(),
        dephased: false,
    }
}

/// `max_{i != j} |sum_k H_ik conj(H_jk) (A_ik - A_jk)|` for a real `A`.
pub fn tangent_residual(h: &HadamardMatrix, a: &DMatrix<f64>) -> f64 {
    let n = h.n();
    let m = h.to_complex_matrix();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let s: Complex64 = (0..n)
                .map(|k| m[(i, k)] * m[(j, k)].conj() * (a[(i, k)] - a[(j, k)]))
                .sum();
            worst = worst.max(s.norm());
        }
    }
    worst
}

/// Circulant system assembled from the eigenvalue vector `Q` of `H/sqrt(N)`:
/// `sum_{k,l,r} w^{k(l-r) - il + jr} Q_l conj(Q_r) (A_ik - A_jk) = 0`.
pub fn circulant_tangent_system(q: &[Unimodular]) -> Result<TangentSystem> {
    let h = circulant_from_eigenvalues(q);
    require_hadamard(&h)?;
    let n = q.len();
    let qs: Vec<Complex64> = q.iter().map(|u| u.to_complex()).collect();
    let w = |e: i64| Phase::root(e, n as u64).to_complex();
    let pairs = TangentSystem::ordered_pairs(n);
    let mut matrix = DMatrix::zeros(pairs.len(), n * n);
    for (row, &(i, j)) in pairs.iter().enumerate() {
        let (i_, j_) = (i as i64, j as i64);
        for k in 0..n as i64 {
            let mut c = Complex64::new(0.0, 0.0);
            for l in 0..n as i64 {
                for r in 0..n as i64 {
                    c += w(k * (l - r) - i_ * l + j_ * r) * qs[l as usize] * qs[r as usize].conj();
                }
            }
            let v = if i < j { c.re } else { c.im };
            let k = k as usize;
            matrix[(row, i * n + k)] += v;
            matrix[(row, j * n + k)] -= v;
        }
    }
    Ok(TangentSystem {
        n,
        matrix,
        row_pairs: pairs,
        unknowns: (0..n * n).collect(),
        provenance: h.provenance().to_string(),
        dephased: false,
    })
}

/// Real `+-1` case: `sum_k eps_ijk (A_ik - A_jk) = 0` for `i < j`.
pub fn real_design_system(h: &HadamardMatrix) -> Result<TangentSystem> {
    let eps = design_array(h)?;
    let n = h.n();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .collect();
    let mut matrix = DMatrix::zeros(pairs.len(), n * n);
    for (row, &(i, j)) in pairs.iter().enumerate() {
        for k in 0..n {
            let e = eps.get(i, j, k) as f64;
            matrix[(row, i * n + k)] += e;
            matrix[(row, j * n + k)] -= e;
        }
    }
    Ok(TangentSystem {
        n,
        matrix,
        row_pairs: pairs,
        unknowns: (0..n * n).collect(),
        provenance: h.provenance().to_string(),
        dephased: false,
    })
}
