use num_complex::Complex64;

use super::matrix::{DeformationParameters, HadamardMatrix};
use super::phase::{Phase, Unimodular};
use crate::error::{Error, Result};
use crate::group::FiniteAbelianGroup;

/// `F_G = F_{N_1} x ... x F_{N_r}`, factor 1 outermost. Entry `(i, j)` is
/// `e^{2 pi i sum_t i_t j_t / N_t}` for the odometer-ordered elements `i, j`.
pub fn fourier_matrix(group: &FiniteAbelianGroup) -> HadamardMatrix {
    let n = group.order() as usize;
    let elems: Vec<_> = group.elements().collect();
    let exponent = group.exponent() as i64;
    let mut phases = Vec::with_capacity(n * n);
    for gi in &elems {
        for gj in &elems {
            let num: i64 = gi
                .residues
                .iter()
                .zip(&gj.residues)
                .zip(group.cycle_orders())
                .map(|((&x, &y), &m)| {
                    let m = m as i64;
                    (x as i64 * y as i64 % m) * (exponent / m)
                })
                .sum();
            phases.push(Phase::new(num, exponent).unwrap());
        }
    }
    HadamardMatrix::from_phases(n, phases, format!("fourier:{group}")).unwrap()
}

/// `(H x K)_{ia,jb} = H_{ij} K_{ab}`, row index `i*M + a`.
pub fn tensor_product(h: &HadamardMatrix, k: &HadamardMatrix) -> HadamardMatrix {
    let flat = DeformationParameters::flat(k.n(), h.n());
    deformed_tensor(h, &flat, k)
        .expect("flat parameters always fit")
        .with_provenance(format!("tensor:({},{})", h.provenance(), k.provenance()))
}

/// `(H x_L K)_{ia,jb} = H_{ij} L_{aj} K_{ab}` with `L` of size `M x N` for
/// `H` of size `N` and `K` of size `M`.
pub fn deformed_tensor(
    h: &HadamardMatrix,
    l: &DeformationParameters,
    k: &HadamardMatrix,
) -> Result<HadamardMatrix> {
    let (n, m) = (h.n(), k.n());
    if l.rows() != m || l.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "parameters are {}x{}, expected {m}x{n}",
            l.rows(),
            l.cols()
        )));
    }
    let size = n * m;
    let mut values = Vec::with_capacity(size * size);
    for i in 0..n {
        for a in 0..m {
            for j in 0..n {
                for b in 0..m {
                    values.push(h.entry(i, j) * l.get(a, j) * k.entry(a, b));
                }
            }
        }
    }
    HadamardMatrix::from_unimodular(
        size,
        values,
        format!("deformed:({},L,{})", h.provenance(), k.provenance()),
    )
}

/// `L_{aj} = w^{aj}` with `w = e^{2 pi i/NM}`, of size `M x N`; deforming
/// `F_N x F_M` with it gives a matrix equivalent to `F_{NM}`.
pub fn recombination_parameters(n: usize, m: usize) -> DeformationParameters {
    let q = (n * m) as u64;
    let phases = (0..m)
        .flat_map(|a| (0..n).map(move |j| Phase::root((a * j) as i64, q)))
        .collect();
    DeformationParameters::from_phases(m, n, phases).unwrap()
}

/// `F_{2,2}^q = F_2 x_L F_2` with `L = [[1,1],[1,q]]`.
pub fn f22(q: Unimodular) -> HadamardMatrix {
    let f2 = fourier_matrix(&FiniteAbelianGroup::cyclic(2).unwrap());
    let l = DeformationParameters::new(
        2,
        2,
        vec![Unimodular::ONE, Unimodular::ONE, Unimodular::ONE, q],
    )
    .expect("unimodular parameter");
    deformed_tensor(&f2, &l, &f2)
        .unwrap()
        .with_provenance("f22")
}

/// `F_{2,3}^{(r,s)} = F_2 x_L F_3` with `L = [[1,1],[1,r],[1,s]]`.
pub fn f23(r: Unimodular, s: Unimodular) -> HadamardMatrix {
    let f2 = fourier_matrix(&FiniteAbelianGroup::cyclic(2).unwrap());
    let f3 = fourier_matrix(&FiniteAbelianGroup::cyclic(3).unwrap());
    let one = Unimodular::ONE;
    let l = DeformationParameters::new(3, 2, vec![one, one, one, r, one, s]).expect("unimodular");
    deformed_tensor(&f2, &l, &f3)
        .unwrap()
        .with_provenance("f23")
}

#[derive(Clone, Copy)]
enum Sym {
    Turn(i64, i64),
    Q(bool),
    QBar(bool),
}

/// Haagerup's one-parameter matrix `H_6^q`: entry `(2,4)` is `q` and
/// `(4,2)` is `conj(q)`.
pub fn haagerup_matrix(q: Unimodular) -> HadamardMatrix {
    use Sym::*;
    const ONE: Sym = Turn(0, 1);
    const NEG: Sym = Turn(1, 2);
    const I: Sym = Turn(1, 4);
    const NI: Sym = Turn(3, 4);
    let table: [[Sym; 6]; 6] = [
        [ONE, ONE, ONE, ONE, ONE, ONE],
        [ONE, NEG, I, I, NI, NI],
        [ONE, I, NEG, NI, Q(false), Q(true)],
        [ONE, I, NI, NEG, Q(true), Q(false)],
        [ONE, NI, QBar(false), QBar(true), I, NEG],
        [ONE, NI, QBar(true), QBar(false), NEG, I],
    ];
    let minus = Unimodular::Phase(Phase::MINUS_ONE);
    let values = table
        .iter()
        .flatten()
        .map(|s| match *s {
            Turn(a, b) => Unimodular::Phase(Phase::new(a, b).unwrap()),
            Q(neg) => {
                if neg {
                    minus * q
                } else {
                    q
                }
            }
            QBar(neg) => {
                if neg {
                    minus * q.conj()
                } else {
                    q.conj()
                }
            }
        })
        .collect();
    let label = match q {
        Unimodular::Phase(p) => format!("haagerup:{p}"),
        Unimodular::Complex(z) => format!("haagerup:{z}"),
    };
    HadamardMatrix::from_unimodular(6, values, label).unwrap()
}

/// Tao's isolated matrix `T_6` over the cube roots of unity; entries are
/// `j^e` with the exponents below.
pub fn tao_matrix() -> HadamardMatrix {
    const EXPONENTS: [[i64; 6]; 6] = [
        [0, 0, 0, 0, 0, 0],
        [0, 0, 1, 1, 2, 2],
        [0, 1, 0, 2, 2, 1],
        [0, 1, 2, 0, 1, 2],
        [0, 2, 2, 1, 0, 1],
        [0, 2, 1, 2, 1, 0],
    ];
    let phases = EXPONENTS
        .iter()
        .flatten()
        .map(|&e| Phase::root(e, 3))
        .collect();
    HadamardMatrix::from_phases(6, phases, "tao").unwrap()
}

/// Circulant `H_{ij} = C_{j-i}` with `C = F_N Q / sqrt(N)`, i.e. the matrix
/// whose normalisation `H/sqrt(N)` has eigenvalues `Q`. Hadamard validity is
/// not guaranteed and must be checked by the caller.
pub fn circulant_from_eigenvalues(q: &[Unimodular]) -> HadamardMatrix {
    let n = q.len();
    let scale = 1.0 / (n as f64).sqrt();
    let c: Vec<Complex64> = (0..n)
        .map(|m| {
            q.iter()
                .enumerate()
                .map(|(l, ql)| Phase::root((m * l) as i64, n as u64).to_complex() * ql.to_complex())
                .sum::<Complex64>()
                * scale
        })
        .collect();
    let values = (0..n * n)
        .map(|k| {
            let (i, j) = (k / n, k % n);
            c[(j + n - i) % n]
        })
        .collect();
    let label: Vec<String> = q
        .iter()
        .map(|u| match u {
            Unimodular::Phase(p) => p.to_string(),
            Unimodular::Complex(z) => z.to_string(),
        })
        .collect();
    HadamardMatrix::from_complex(n, values, format!("circulant:{}", label.join(","))).unwrap()
}

/// Quadratic-chirp eigenvalues `Q_l = e^{pi i l^2/N}` (even `N`) or
/// `e^{2 pi i l^2/N}` (odd `N`), whose circulant is Hadamard.
pub fn chirp_eigenvalues(n: usize) -> Vec<Unimodular> {
    (0..n)
        .map(|l| {
            let sq = (l * l) as i64;
            let p = if n % 2 == 0 {
                Phase::new(sq, 2 * n as i64)
            } else {
                Phase::new(sq, n as i64)
            };
            Unimodular::Phase(p.unwrap())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hadamard::verify_hadamard;

    fn cyc(n: u64) -> FiniteAbelianGroup {
        FiniteAbelianGroup::cyclic(n).unwrap()
    }

    fn signs(h: &HadamardMatrix) -> Vec<i32> {
        h.phases()
            .unwrap()
            .iter()
            .map(|p| match (p.num(), p.den()) {
                (0, 1) => 1,
                (1, 2) => -1,
                _ => panic!("not real"),
            })
            .collect()
    }

    #[test]
    fn fourier_small() {
        assert_eq!(signs(&fourier_matrix(&cyc(2))), vec![1, 1, 1, -1]);
        let klein = fourier_matrix(&FiniteAbelianGroup::new(&[2, 2]).unwrap());
        assert_eq!(
            signs(&klein),
            vec![1, 1, 1, 1, 1, -1, 1, -1, 1, 1, -1, -1, 1, -1, -1, 1]
        );
        let f1 = fourier_matrix(&cyc(1));
        assert_eq!(f1.n(), 1);
        assert_eq!(f1.phases().unwrap(), &[Phase::ONE]);
    }

    #[test]
    fn fourier_is_dephased_tensor() {
        let g = FiniteAbelianGroup::new(&[2, 3]).unwrap();
        let direct = fourier_matrix(&g);
        let via = tensor_product(&fourier_matrix(&cyc(2)), &fourier_matrix(&cyc(3)));
        assert_eq!(direct.phases(), via.phases());
        for j in 0..6 {
            assert_eq!(direct.entry(0, j), Unimodular::ONE);
            assert_eq!(direct.entry(j, 0), Unimodular::ONE);
        }
    }

    #[test]
    fn tensor_examples() {
        let f2 = fourier_matrix(&cyc(2));
        let klein = fourier_matrix(&FiniteAbelianGroup::new(&[2, 2]).unwrap());
        assert_eq!(tensor_product(&f2, &f2).phases(), klein.phases());
        let one = fourier_matrix(&cyc(1));
        let h = haagerup_matrix(Phase::root(1, 7).into());
        assert_eq!(tensor_product(&h, &one).phases(), h.phases());
        let f6 = tensor_product(&f2, &fourier_matrix(&cyc(3)));
        assert!(verify_hadamard(&f6, 0.0).passed);
    }

    #[test]
    fn f22_display() {
        // rows: (1,1,1,1), (1,-1,q,-q), (1,1,-1,-1), (1,-1,-q,q)
        let q = Phase::root(1, 8);
        let h = f22(q.into());
        let m = Phase::MINUS_ONE;
        let o = Phase::ONE;
        let expect = vec![o, o, o, o, o, m, q, m * q, o, o, m, m, o, m, m * q, q];
        assert_eq!(h.phases().unwrap(), &expect[..]);
    }

    #[test]
    fn deformed_errors() {
        let f2 = fourier_matrix(&cyc(2));
        let f3 = fourier_matrix(&cyc(3));
        let wrong = DeformationParameters::flat(2, 3);
        assert!(matches!(
            deformed_tensor(&f2, &wrong, &f3),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(DeformationParameters::new(
            1,
            1,
            vec![Unimodular::Complex(Complex64::new(1.5, 0.0))]
        )
        .is_err());
    }

    #[test]
    fn flat_deformation_is_tensor() {
        let f3 = fourier_matrix(&cyc(3));
        let f2 = fourier_matrix(&cyc(2));
        let a = deformed_tensor(&f3, &DeformationParameters::flat(2, 3), &f2).unwrap();
        assert_eq!(a.phases(), tensor_product(&f3, &f2).phases());
    }

    #[test]
    fn recombination_examples() {
        assert_eq!(
            recombination_parameters(1, 1).phases().unwrap(),
            vec![Phase::ONE]
        );
        assert_eq!(
            recombination_parameters(2, 2).phases().unwrap(),
            vec![Phase::ONE, Phase::ONE, Phase::ONE, Phase::I]
        );
        let l = recombination_parameters(2, 3);
        assert_eq!((l.rows(), l.cols()), (3, 2));
        assert_eq!(l.get(2, 1).as_phase().unwrap(), Phase::root(2, 6));
    }

    #[test]
    fn haagerup_transcription() {
        for q in [Phase::ONE, Phase::I, Phase::root(1, 7)] {
            let h = haagerup_matrix(q.into());
            assert!(verify_hadamard(&h, 0.0).passed, "q={q}");
            assert_eq!(h.entry(2, 4), Unimodular::Phase(q));
            assert_eq!(h.entry(4, 2), Unimodular::Phase(q.conj()));
        }
        let z = Complex64::from_polar(1.0, 0.37);
        let h = haagerup_matrix(Unimodular::Complex(z));
        assert!(verify_hadamard(&h, 1e-10).passed);
        assert_eq!(h.complex(2, 4), z);
    }

    #[test]
    fn tao_transcription() {
        let t = tao_matrix();
        assert!(verify_hadamard(&t, 0.0).passed);
        assert!(t.phases().unwrap().iter().all(|p| 3 % p.den() == 0));
        for k in 0..6 {
            assert_eq!(t.entry(0, k), Unimodular::ONE);
            assert_eq!(t.entry(k, 0), Unimodular::ONE);
        }
    }

    #[test]
    fn circulant_examples() {
        let h = circulant_from_eigenvalues(&[Unimodular::ONE, Phase::I.into()]);
        let s = 0.5f64.sqrt();
        assert!((h.complex(0, 0) - Complex64::new(s, s)).norm() < 1e-15);
        assert!((h.complex(0, 1) - Complex64::new(s, -s)).norm() < 1e-15);
        assert!(verify_hadamard(&h, 1e-10).passed);

        let flat = circulant_from_eigenvalues(&[Unimodular::ONE, Unimodular::ONE]);
        assert!((flat.complex(0, 0) - Complex64::new(2f64.sqrt(), 0.0)).norm() < 1e-15);
        assert!(!verify_hadamard(&flat, 1e-10).passed);

        // (1, i, 1, i): C_0 = 1 + i and C_1 = 0
        let q = [
            Unimodular::ONE,
            Phase::I.into(),
            Unimodular::ONE,
            Phase::I.into(),
        ];
        let h = circulant_from_eigenvalues(&q);
        assert!((h.complex(0, 0) - Complex64::new(1.0, 1.0)).norm() < 1e-15);
        assert!(h.complex(0, 1).norm() < 1e-15);
        let report = verify_hadamard(&h, 1e-10);
        assert!(!report.passed);
        assert!((report.max_modulus_deviation - 1.0).abs() < 1e-12);
    }

    #[test]
    fn circulant_structure() {
        for n in 2..9 {
            let h = circulant_from_eigenvalues(&chirp_eigenvalues(n));
            assert!(verify_hadamard(&h, 1e-10).passed, "chirp n={n}");
            for i in 0..n {
                for j in 0..n {
                    let d = (h.complex(i, j) - h.complex((i + 1) % n, (j + 1) % n)).norm();
                    assert!(d < 1e-12);
                }
            }
        }
    }
}
