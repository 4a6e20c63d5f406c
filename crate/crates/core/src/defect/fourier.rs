use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use super::rank::{numeric_rank, RankConfig};
use super::system::tangent_residual;
use super::tangent_basis;
use crate::error::{Error, Result};
use crate::group::{enumeration_cap, fourier_defect, to_u64, FiniteAbelianGroup, PSpace};
use crate::hadamard::{fourier_matrix, HadamardMatrix};

/// Residual bound for the `A <-> P` correspondence checks.
pub const P_RESIDUAL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Serialize)]
pub struct PCheckReport {
    pub group: String,
    /// Nullity of the numeric tangent system of `F_G`.
    pub numeric_dimension: usize,
    /// Constructive count of free real parameters of `P`.
    pub p_space_dimension: u64,
    /// Closed-form `d(F_G)`.
    pub formula_dimension: u64,
    /// Rank of the images `P F* / |G|` of the `P`-space basis.
    pub image_rank: usize,
    /// Worst violation of `P_ij = P_{i+j,j}` and `P_ij = conj(P_{i,-j})` over
    /// `P = A F` for the tangent basis.
    pub max_forward_residual: f64,
    /// Worst tangent-equation residual or imaginary part of `A = P F*/|G|`.
    pub max_backward_residual: f64,
    pub tolerance: f64,
}

impl PCheckReport {
    pub fn dimensions_agree(&self) -> bool {
        let d = self.numeric_dimension as u64;
        d == self.p_space_dimension && d == self.formula_dimension && d == self.image_rank as u64
    }
}

/// Basis of the real vector space of matrices `P` satisfying the Fourier
/// constraints, one element per real parameter.
pub fn p_space_basis(group: &FiniteAbelianGroup) -> Result<Vec<DMatrix<Complex64>>> {
    let space = PSpace::build(group)?;
    let n = space.size;
    let mut basis = Vec::with_capacity(space.dimension() as usize);
    for class in &space.classes {
        let mut parts = vec![Complex64::new(1.0, 0.0)];
        if !class.real {
            parts.push(Complex64::new(0.0, 1.0));
        }
        for value in parts {
            let mut p = DMatrix::zeros(n, n);
            for &(i, j, conjugated) in &class.members {
                p[(i, j)] = if conjugated { value.conj() } else { value };
            }
            basis.push(p);
        }
    }
    Ok(basis)
}

fn complex_of(a: &DMatrix<f64>) -> DMatrix<Complex64> {
    a.map(|x| Complex64::new(x, 0.0))
}

/// Checks both directions of the correspondence `A = P F* / |G|` between
/// the tangent space of `F_G` and the constrained `P` matrices.
pub fn fourier_p_check(group: &FiniteAbelianGroup, cfg: &RankConfig) -> Result<PCheckReport> {
    let n = group.checked_order(enumeration_cap())?;
    let f_mat: HadamardMatrix = fourier_matrix(group);
    let f = f_mat.to_complex_matrix();
    let f_star = f.adjoint();
    let add = group.addition_table(enumeration_cap())?;
    let neg = group.negation_table(enumeration_cap())?;

    let basis = tangent_basis(&f_mat, cfg)?;
    let mut forward = 0.0f64;
    for a in &basis {
        let p = complex_of(a) * &f;
        for i in 0..n {
            for j in 0..n {
                forward = forward.max((p[(i, j)] - p[(add[i][j], j)]).norm());
                forward = forward.max((p[(i, j)] - p[(i, neg[j])].conj()).norm());
            }
        }
    }

    let p_basis = p_space_basis(group)?;
    let mut backward = 0.0f64;
    let mut images = DMatrix::zeros(p_basis.len(), n * n);
    for (row, p) in p_basis.iter().enumerate() {
        let a_c = p * &f_star / Complex64::new(n as f64, 0.0);
        let a = a_c.map(|z| z.re);
        backward = backward.max(a_c.iter().map(|z| z.im.abs()).fold(0.0, f64::max));
        backward = backward.max(tangent_residual(&f_mat, &a));
        for (k, x) in a.transpose().iter().enumerate() {
            images[(row, k)] = *x;
        }
    }
    let image_rank = if p_basis.is_empty() {
        0
    } else {
        numeric_rank(&images, cfg.rel_tol)?.rank
    };

    let report = PCheckReport {
        group: group.to_string(),
        numeric_dimension: basis.len(),
        p_space_dimension: p_basis.len() as u64,
        formula_dimension: to_u64(&fourier_defect(group)?).unwrap_or(u64::MAX),
        image_rank,
        max_forward_residual: forward,
        max_backward_residual: backward,
        tolerance: P_RESIDUAL_TOL,
    };
    let worst = forward.max(backward);
    if worst > P_RESIDUAL_TOL {
        return Err(Error::ResidualExceeded {
            residual: worst,
            tolerance: P_RESIDUAL_TOL,
            context: format!("P-correspondence for {group}"),
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(orders: &[i64]) -> PCheckReport {
        fourier_p_check(
            &FiniteAbelianGroup::new(orders).unwrap(),
            &RankConfig::default(),
        )
        .unwrap()
    }

    #[test]
    fn z2() {
        let r = check(&[2]);
        assert!(r.dimensions_agree());
        assert_eq!(r.numeric_dimension, 3);
        assert!(r.max_forward_residual <= 1e-10 && r.max_backward_residual <= 1e-10);
    }

    #[test]
    fn klein_and_z6() {
        let r = check(&[2, 2]);
        assert!(r.dimensions_agree());
        assert_eq!(r.numeric_dimension, 10);
        let r = check(&[6]);
        assert!(r.dimensions_agree());
        assert_eq!(r.numeric_dimension, 15);
    }

    #[test]
    fn normalisation_inverts() {
        // P = A F and A = P F*/|G| are mutually inverse since F F* = |G| Id.
        let g = FiniteAbelianGroup::new(&[3, 2]).unwrap();
        let f = fourier_matrix(&g).to_complex_matrix();
        let a = DMatrix::from_fn(6, 6, |i, j| (i * 7 + j * 3) as f64 % 5.0);
        let p = complex_of(&a) * &f;
        let back = p * f.adjoint() / Complex64::new(6.0, 0.0);
        assert!((back - complex_of(&a)).norm() < 1e-12);
    }
}
