use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use super::matrix::{Entries, HadamardMatrix};
use super::phase::{Phase, Unimodular};
use crate::cyclotomic::PowerTable;
use crate::error::{Error, Result};

/// Default tolerance for floating validity checks.
pub const DEFAULT_HADAMARD_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub n: usize,
    /// Checks were done in exact cyclotomic arithmetic.
    pub exact: bool,
    /// `max |1 - |H_ij||`.
    pub max_modulus_deviation: f64,
    /// `max_{i != j} |<H_i, H_j>| / N`.
    pub max_inner_product: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Checks unimodularity and row orthogonality.
///
/// Exact matrices are decided in `Z[x]/Phi_q` and `tol` is ignored; the
/// floating figures in the report are informational. Floating matrices pass
/// iff both maxima are `<= tol`.
pub fn verify_hadamard(h: &HadamardMatrix, tol: f64) -> ValidationReport {
    let n = h.n();
    let mut max_inner = 0.0f64;
    let mut max_modulus = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            max_modulus = max_modulus.max((1.0 - h.complex(i, j).norm()).abs());
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let ip: Complex64 = (0..n)
                .map(|k| h.complex(i, k) * h.complex(j, k).conj())
                .sum();
            max_inner = max_inner.max(ip.norm() / n as f64);
        }
    }
    match h.entries() {
        Entries::Phase(phases) => {
            let q = h.root_order().unwrap_or(1);
            let table = PowerTable::new(q);
            let turns: Vec<i64> = phases
                .iter()
                .map(|p| p.num() * (q as i64 / p.den()))
                .collect();
            let mut orthogonal = true;
            'rows: for i in 0..n {
                for j in (i + 1)..n {
                    let mut acc = vec![0i64; table.phi];
                    for k in 0..n {
                        table.accumulate(&mut acc, turns[i * n + k] - turns[j * n + k], 1);
                    }
                    if acc.iter().any(|&c| c != 0) {
                        orthogonal = false;
                        break 'rows;
                    }
                }
            }
            ValidationReport {
                n,
                exact: true,
                max_modulus_deviation: 0.0,
                max_inner_product: if orthogonal { 0.0 } else { max_inner },
                tolerance: 0.0,
                passed: orthogonal,
            }
        }
        Entries::Complex(_) => ValidationReport {
            n,
            exact: false,
            max_modulus_deviation: max_modulus,
            max_inner_product: max_inner,
            tolerance: tol,
            passed: max_modulus <= tol && max_inner <= tol,
        },
    }
}

/// Returns an error unless the matrix passes [`verify_hadamard`] at the
/// default tolerance.
pub fn require_hadamard(h: &HadamardMatrix) -> Result<()> {
    let report = verify_hadamard(h, DEFAULT_HADAMARD_TOL);
    if !report.passed {
        return Err(Error::NotHadamard(format!(
            "{}: modulus deviation {:e}, inner product {:e}",
            h.provenance(),
            report.max_modulus_deviation,
            report.max_inner_product
        )));
    }
    Ok(())
}

/// Column `j` times `conj(H_{0j})`, then row `i` times the conjugate of
/// the new `(i, 0)` entry. Idempotent.
pub fn dephase(h: &HadamardMatrix) -> HadamardMatrix {
    let n = h.n();
    let col: Vec<Unimodular> = (0..n).map(|j| h.entry(0, j).conj()).collect();
    let row: Vec<Unimodular> = (0..n).map(|i| (h.entry(i, 0) * col[0]).conj()).collect();
    let values = (0..n * n)
        .map(|k| {
            let (i, j) = (k / n, k % n);
            normalise(row[i] * h.entry(i, j) * col[j])
        })
        .collect();
    HadamardMatrix::from_unimodular(n, values, h.provenance()).unwrap()
}

fn normalise(u: Unimodular) -> Unimodular {
    match u {
        Unimodular::Complex(z) => Unimodular::Complex(z / z.norm()),
        p => p,
    }
}

/// Row/column permutations and phases: `H'_{ij} = r_i c_j H_{row_perm(i), col_perm(j)}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Equivalence {
    pub row_perm: Vec<usize>,
    pub col_perm: Vec<usize>,
    pub row_phases: Vec<Unimodular>,
    pub col_phases: Vec<Unimodular>,
}

impl Equivalence {
    pub fn identity(n: usize) -> Self {
        Equivalence {
            row_perm: (0..n).collect(),
            col_perm: (0..n).collect(),
            row_phases: vec![Unimodular::ONE; n],
            col_phases: vec![Unimodular::ONE; n],
        }
    }

    /// Uniform permutations and phases drawn from the 24th roots of unity.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut row_perm: Vec<usize> = (0..n).collect();
        let mut col_perm: Vec<usize> = (0..n).collect();
        row_perm.shuffle(rng);
        col_perm.shuffle(rng);
        let mut phase = || Unimodular::Phase(Phase::root(rng.gen_range(0..24), 24));
        let row_phases = (0..n).map(|_| phase()).collect();
        let col_phases = (0..n).map(|_| phase()).collect();
        Equivalence {
            row_perm,
            col_perm,
            row_phases,
            col_phases,
        }
    }
}

fn check_permutation(p: &[usize], n: usize, what: &str) -> Result<()> {
    if p.len() != n {
        return Err(Error::MalformedPermutation(format!(
            "{what} has length {}, expected {n}",
            p.len()
        )));
    }
    let mut seen = vec![false; n];
    for &x in p {
        if x >= n || std::mem::replace(&mut seen[x], true) {
            return Err(Error::MalformedPermutation(format!(
                "{what} is not a permutation of 0..{n}"
            )));
        }
    }
    Ok(())
}

pub fn apply_equivalence(h: &HadamardMatrix, eq: &Equivalence) -> Result<HadamardMatrix> {
    let n = h.n();
    check_permutation(&eq.row_perm, n, "row permutation")?;
    check_permutation(&eq.col_perm, n, "column permutation")?;
    if eq.row_phases.len() != n || eq.col_phases.len() != n {
        return Err(Error::DimensionMismatch(
            "phase vectors must have length N".into(),
        ));
    }
    for u in eq.row_phases.iter().chain(&eq.col_phases) {
        if let Unimodular::Complex(z) = u {
            Unimodular::from_complex(*z)?;
        }
    }
    let values = (0..n * n)
        .map(|k| {
            let (i, j) = (k / n, k % n);
            eq.row_phases[i] * eq.col_phases[j] * h.entry(eq.row_perm[i], eq.col_perm[j])
        })
        .collect();
    HadamardMatrix::from_unimodular(n, values, format!("equiv:{}", h.provenance()))
}

/// `M[(i,a),(j,b)] = sum_k H_ik conj(H_jk) conj(H_ak) H_bk`, indexed
/// `i*N + a` by `j*N + b`.
pub fn profile_matrix(h: &HadamardMatrix) -> DMatrix<Complex64> {
    let n = h.n();
    let m = h.to_complex_matrix();
    DMatrix::from_fn(n * n, n * n, |row, col| {
        let (i, a) = (row / n, row % n);
        let (j, b) = (col / n, col % n);
        (0..n)
            .map(|k| m[(i, k)] * m[(j, k)].conj() * m[(a, k)].conj() * m[(b, k)])
            .sum()
    })
}

/// Sign array `eps_{ijk} = H_ik H_jk` of a real `+-1` matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DesignArray {
    n: usize,
    signs: Vec<i8>,
}

impl DesignArray {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> i8 {
        self.signs[(i * self.n + j) * self.n + k]
    }
}

/// Real `+-1` entries of `h`, or the position of the first non-real entry.
pub(crate) fn real_signs(h: &HadamardMatrix) -> Result<Vec<i8>> {
    let n = h.n();
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let sign = match h.entry(i, j) {
                Unimodular::Phase(p) if p == Phase::ONE => 1,
                Unimodular::Phase(p) if p == Phase::MINUS_ONE => -1,
                Unimodular::Complex(z) if z.im.abs() <= 1e-12 && (z.re - 1.0).abs() <= 1e-12 => 1,
                Unimodular::Complex(z) if z.im.abs() <= 1e-12 && (z.re + 1.0).abs() <= 1e-12 => -1,
                _ => return Err(Error::NonRealEntry { row: i, col: j }),
            };
            out.push(sign);
        }
    }
    Ok(out)
}

pub fn design_array(h: &HadamardMatrix) -> Result<DesignArray> {
    let n = h.n();
    let s = real_signs(h)?;
    let mut signs = Vec::with_capacity(n * n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                signs.push(s[i * n + k] * s[j * n + k]);
            }
        }
    }
    Ok(DesignArray { n, signs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteAbelianGroup;
    use crate::hadamard::{f22, f23, fourier_matrix, haagerup_matrix, tao_matrix};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fourier(orders: &[i64]) -> HadamardMatrix {
        fourier_matrix(&FiniteAbelianGroup::new(orders).unwrap())
    }

    #[test]
    fn verify_examples() {
        let r = verify_hadamard(&fourier(&[3]), 0.0);
        assert!(r.passed && r.exact);
        let ones = HadamardMatrix::from_phases(2, vec![Phase::ONE; 4], "ones").unwrap();
        let r = verify_hadamard(&ones, 0.0);
        assert!(!r.passed);
        // |<H_0, H_1>| = 2, normalised by N = 2
        assert!((r.max_inner_product - 1.0).abs() < 1e-15);
        let ones_f = ones.to_complex_repr();
        assert!(!verify_hadamard(&ones_f, 1e-10).passed);

        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let r = Complex64::from_polar(1.0, rng.gen_range(0.0..6.3));
            let s = Complex64::from_polar(1.0, rng.gen_range(0.0..6.3));
            let h = f23(Unimodular::Complex(r), Unimodular::Complex(s));
            assert!(verify_hadamard(&h, DEFAULT_HADAMARD_TOL).passed);
        }
    }

    #[test]
    fn fourier_exact_up_to_64() {
        for n in 1..=64u64 {
            for g in crate::group::abelian_groups_of_order(n) {
                assert!(verify_hadamard(&fourier_matrix(&g), 0.0).passed, "{g}");
            }
        }
    }

    #[test]
    fn dephase_examples() {
        let f = fourier(&[2, 3]);
        assert_eq!(dephase(&f).phases(), f.phases());

        let f2 = fourier(&[2]);
        let eq = Equivalence {
            row_perm: vec![0, 1],
            col_perm: vec![0, 1],
            row_phases: vec![Phase::root(1, 5).into(), Phase::root(2, 7).into()],
            col_phases: vec![Phase::root(3, 8).into(), Phase::root(1, 3).into()],
        };
        let perturbed = apply_equivalence(&f2, &eq).unwrap();
        assert_ne!(perturbed.phases(), f2.phases());
        assert_eq!(dephase(&perturbed).phases(), f2.phases());

        let h = haagerup_matrix(Unimodular::Complex(Complex64::from_polar(1.0, 0.3)));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let h = apply_equivalence(&h, &Equivalence::random(6, &mut rng)).unwrap();
        let d = dephase(&h);
        assert!((d.complex(0, 0) - 1.0).norm() < 1e-14);
        assert!(d.max_distance(&dephase(&d)) < 1e-14);
        assert!(verify_hadamard(&d, DEFAULT_HADAMARD_TOL).passed);
    }

    #[test]
    fn equivalence_examples() {
        let t = tao_matrix();
        assert_eq!(
            apply_equivalence(&t, &Equivalence::identity(6))
                .unwrap()
                .phases(),
            t.phases()
        );
        // F_{2,2}^{-1} with columns 2 and 3 swapped is F_{2,2}^1
        let swap = Equivalence {
            col_perm: vec![0, 1, 3, 2],
            ..Equivalence::identity(4)
        };
        let swapped = apply_equivalence(&f22(Phase::MINUS_ONE.into()), &swap).unwrap();
        assert_eq!(swapped.phases(), f22(Phase::ONE.into()).phases());

        let bad = Equivalence {
            row_perm: vec![0, 0, 1, 2],
            ..Equivalence::identity(4)
        };
        assert!(matches!(
            apply_equivalence(&swapped, &bad),
            Err(Error::MalformedPermutation(_))
        ));
        let short = Equivalence {
            col_perm: vec![0, 1],
            ..Equivalence::identity(4)
        };
        assert!(apply_equivalence(&swapped, &short).is_err());
    }

    #[test]
    fn equivalence_preserves_validity() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for h in [fourier(&[5]), tao_matrix(), f22(Phase::root(1, 5).into())] {
            let e = Equivalence::random(h.n(), &mut rng);
            assert!(verify_hadamard(&apply_equivalence(&h, &e).unwrap(), 0.0).passed);
        }
    }

    #[test]
    fn profile_examples() {
        for h in [fourier(&[2]), tao_matrix(), f22(Phase::root(1, 8).into())] {
            let n = h.n();
            let m = profile_matrix(&h);
            for i in 0..n {
                for j in 0..n {
                    assert!((m[(i * n + i, j * n + j)] - n as f64).norm() < 1e-12);
                }
            }
        }
        // F_2 profile: M[(i,a),(j,b)] = sum_k (-1)^{k(i+j+a+b)} = 2 iff i+j+a+b even
        let m = profile_matrix(&fourier(&[2]));
        for row in 0..4 {
            for col in 0..4 {
                let parity = (row / 2 + row % 2 + col / 2 + col % 2) % 2;
                let expect = if parity == 0 { 2.0 } else { 0.0 };
                assert!((m[(row, col)] - expect).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn profile_row_permutation() {
        let h = tao_matrix();
        let perm = vec![3, 0, 5, 1, 4, 2];
        let e = Equivalence {
            row_perm: perm.clone(),
            ..Equivalence::identity(6)
        };
        let hp = apply_equivalence(&h, &e).unwrap();
        let (m, mp) = (profile_matrix(&h), profile_matrix(&hp));
        for i in 0..6 {
            for a in 0..6 {
                for j in 0..6 {
                    for b in 0..6 {
                        let lhs = mp[(i * 6 + a, j * 6 + b)];
                        let rhs = m[(perm[i] * 6 + perm[a], perm[j] * 6 + perm[b])];
                        assert!((lhs - rhs).norm() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn design_examples() {
        let eps = design_array(&fourier(&[2])).unwrap();
        assert_eq!((eps.get(0, 1, 0), eps.get(0, 1, 1)), (1, -1));
        let eps = design_array(&fourier(&[2, 2])).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    assert_eq!(eps.get(i, j, k), eps.get(j, i, k));
                    if i == j {
                        assert_eq!(eps.get(i, i, k), 1);
                    }
                }
            }
        }
        assert!(matches!(
            design_array(&fourier(&[3])),
            Err(Error::NonRealEntry { row: 1, col: 1 })
        ));
    }
}
