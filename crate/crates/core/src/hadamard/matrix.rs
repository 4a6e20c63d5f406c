use nalgebra::DMatrix;
use num_complex::Complex64;
use num_integer::Integer;

use super::phase::{Phase, Unimodular};
use crate::error::{Error, Result};

/// Row-major entry storage.
#[derive(Debug, Clone, PartialEq)]
pub enum Entries {
    /// Every entry a root of unity given as a turn fraction.
    Phase(Vec<Phase>),
    /// Floating complex entries.
    Complex(Vec<Complex64>),
}

/// Square candidate complex Hadamard matrix with indices in `0..n`.
///
/// Unimodularity and orthogonality are checked by
/// [`verify_hadamard`](super::verify_hadamard), not at construction, since
/// some constructions (circulants from arbitrary eigenvalues) may fail them.
#[derive(Debug, Clone, PartialEq)]
pub struct HadamardMatrix {
    n: usize,
    entries: Entries,
    provenance: String,
}

impl HadamardMatrix {
    pub fn from_phases(
        n: usize,
        phases: Vec<Phase>,
        provenance: impl Into<String>,
    ) -> Result<Self> {
        check_len(n, phases.len())?;
        Ok(HadamardMatrix {
            n,
            entries: Entries::Phase(phases),
            provenance: provenance.into(),
        })
    }

    pub fn from_complex(
        n: usize,
        values: Vec<Complex64>,
        provenance: impl Into<String>,
    ) -> Result<Self> {
        check_len(n, values.len())?;
        Ok(HadamardMatrix {
            n,
            entries: Entries::Complex(values),
            provenance: provenance.into(),
        })
    }

    /// Collapses to exact storage when every entry is a [`Phase`].
    pub fn from_unimodular(
        n: usize,
        values: Vec<Unimodular>,
        provenance: impl Into<String>,
    ) -> Result<Self> {
        let phases: Option<Vec<Phase>> = values.iter().map(|u| u.as_phase()).collect();
        match phases {
            Some(p) => Self::from_phases(n, p, provenance),
            None => Self::from_complex(
                n,
                values.into_iter().map(Unimodular::to_complex).collect(),
                provenance,
            ),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn with_provenance(mut self, provenance: impl Into<String>) -> Self {
        self.provenance = provenance.into();
        self
    }

    pub fn entries(&self) -> &Entries {
        &self.entries
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.entries, Entries::Phase(_))
    }

    pub fn phases(&self) -> Option<&[Phase]> {
        match &self.entries {
            Entries::Phase(p) => Some(p),
            Entries::Complex(_) => None,
        }
    }

    pub fn entry(&self, i: usize, j: usize) -> Unimodular {
        let k = i * self.n + j;
        match &self.entries {
            Entries::Phase(p) => Unimodular::Phase(p[k]),
            Entries::Complex(z) => Unimodular::Complex(z[k]),
        }
    }

    pub fn complex(&self, i: usize, j: usize) -> Complex64 {
        self.entry(i, j).to_complex()
    }

    pub fn to_complex_matrix(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.n, self.n, |i, j| self.complex(i, j))
    }

    /// One-way conversion to floating storage.
    pub fn to_complex_repr(&self) -> HadamardMatrix {
        HadamardMatrix {
            n: self.n,
            entries: Entries::Complex(
                (0..self.n * self.n)
                    .map(|k| self.complex(k / self.n, k % self.n))
                    .collect(),
            ),
            provenance: self.provenance.clone(),
        }
    }

    /// Least common denominator `q` of all phases, so every entry is a
    /// `q`-th root of unity.
    pub fn root_order(&self) -> Option<u64> {
        self.phases()
            .map(|p| p.iter().fold(1i64, |acc, ph| acc.lcm(&ph.den())) as u64)
    }

    /// Maximum entrywise distance between two matrices of equal size.
    pub fn max_distance(&self, other: &HadamardMatrix) -> f64 {
        assert_eq!(self.n, other.n);
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for j in 0..self.n {
                worst = worst.max((self.complex(i, j) - other.complex(i, j)).norm());
            }
        }
        worst
    }
}

fn check_len(n: usize, len: usize) -> Result<()> {
    if n * n != len {
        return Err(Error::DimensionMismatch(format!(
            "{len} entries for a {n}x{n} matrix"
        )));
    }
    Ok(())
}

/// Parameter matrix `L` (`rows x cols`) of a deformed tensor product, with
/// unimodular entries `L_{aj}`.
#[derive(Debug, Clone, PartialEq)]
pub struct DeformationParameters {
    rows: usize,
    cols: usize,
    values: Vec<Unimodular>,
}

impl DeformationParameters {
    pub fn new(rows: usize, cols: usize, values: Vec<Unimodular>) -> Result<Self> {
        if rows * cols != values.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} parameters for a {rows}x{cols} matrix",
                values.len()
            )));
        }
        for v in &values {
            if let Unimodular::Complex(z) = v {
                Unimodular::from_complex(*z)?;
            }
        }
        Ok(DeformationParameters { rows, cols, values })
    }

    pub fn from_phases(rows: usize, cols: usize, phases: Vec<Phase>) -> Result<Self> {
        Self::new(
            rows,
            cols,
            phases.into_iter().map(Unimodular::Phase).collect(),
        )
    }

    /// All-ones parameters, giving the plain tensor product.
    pub fn flat(rows: usize, cols: usize) -> Self {
        DeformationParameters {
            rows,
            cols,
            values: vec![Unimodular::ONE; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, a: usize, j: usize) -> Unimodular {
        self.values[a * self.cols + j]
    }

    pub fn values(&self) -> &[Unimodular] {
        &self.values
    }

    pub fn phases(&self) -> Option<Vec<Phase>> {
        self.values.iter().map(|u| u.as_phase()).collect()
    }
}
