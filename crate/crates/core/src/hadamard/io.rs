//! JSON matrix files:
//! `{"n": N, "repr": "phase"|"complex", "entries": [...], "provenance": "..."}`
//! with row-major `[num, den]` turn pairs or `[re, im]` pairs.
//!
//! Parameter files for deformations use the same entry encoding with an
//! explicit shape: `{"rows": M, "cols": N, "repr": ..., "entries": [...]}`.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Number;

use super::matrix::{DeformationParameters, Entries, HadamardMatrix};
use super::phase::{Phase, Unimodular};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixFile {
    pub n: usize,
    pub repr: String,
    pub entries: Vec<[Number; 2]>,
    #[serde(default)]
    pub provenance: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ParameterFile {
    pub rows: usize,
    pub cols: usize,
    pub repr: String,
    pub entries: Vec<[Number; 2]>,
}

fn encode_phase(p: Phase) -> [Number; 2] {
    [Number::from(p.num()), Number::from(p.den())]
}

fn encode_complex(z: Complex64) -> Result<[Number; 2]> {
    let f = |x: f64| Number::from_f64(x).ok_or(Error::NonFinite);
    Ok([f(z.re)?, f(z.im)?])
}

fn decode(repr: &str, pair: &[Number; 2]) -> Result<Unimodular> {
    match repr {
        "phase" => {
            let num = pair[0].as_i64();
            let den = pair[1].as_i64();
            match (num, den) {
                (Some(n), Some(d)) if d > 0 => Ok(Unimodular::Phase(Phase::new(n, d)?)),
                _ => Err(Error::parse(0, format!("bad phase entry {pair:?}"))),
            }
        }
        "complex" => {
            let re = pair[0].as_f64().ok_or(Error::NonFinite)?;
            let im = pair[1].as_f64().ok_or(Error::NonFinite)?;
            Ok(Unimodular::Complex(Complex64::new(re, im)))
        }
        other => Err(Error::parse(0, format!("unknown repr {other:?}"))),
    }
}

impl MatrixFile {
    pub fn from_matrix(h: &HadamardMatrix) -> Result<Self> {
        let (repr, entries) = match h.entries() {
            Entries::Phase(p) => ("phase", p.iter().map(|&x| encode_phase(x)).collect()),
            Entries::Complex(z) => (
                "complex",
                z.iter()
                    .map(|&x| encode_complex(x))
                    .collect::<Result<_>>()?,
            ),
        };
        Ok(MatrixFile {
            n: h.n(),
            repr: repr.to_string(),
            entries,
            provenance: h.provenance().to_string(),
        })
    }

    pub fn to_matrix(&self) -> Result<HadamardMatrix> {
        let values = self
            .entries
            .iter()
            .map(|pair| decode(&self.repr, pair))
            .collect::<Result<Vec<_>>>()?;
        if self.repr == "complex" {
            let z = values.into_iter().map(Unimodular::to_complex).collect();
            return HadamardMatrix::from_complex(self.n, z, self.provenance.clone());
        }
        HadamardMatrix::from_unimodular(self.n, values, self.provenance.clone())
    }
}

pub fn matrix_to_json(h: &HadamardMatrix) -> Result<String> {
    Ok(serde_json::to_string_pretty(&MatrixFile::from_matrix(h)?)?)
}

pub fn matrix_from_json(text: &str) -> Result<HadamardMatrix> {
    serde_json::from_str::<MatrixFile>(text)?.to_matrix()
}

pub fn write_matrix(path: &Path, h: &HadamardMatrix) -> Result<()> {
    std::fs::write(path, matrix_to_json(h)? + "\n")?;
    Ok(())
}

pub fn read_matrix(path: &Path) -> Result<HadamardMatrix> {
    matrix_from_json(&std::fs::read_to_string(path)?)
}

pub fn read_parameters(path: &Path) -> Result<DeformationParameters> {
    let file: ParameterFile = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    let values = file
        .entries
        .iter()
        .map(|pair| decode(&file.repr, pair))
        .collect::<Result<Vec<_>>>()?;
    DeformationParameters::new(file.rows, file.cols, values)
}

pub fn parameters_to_json(l: &DeformationParameters) -> Result<String> {
    let (repr, entries) = match l.phases() {
        Some(p) => ("phase", p.into_iter().map(encode_phase).collect()),
        None => (
            "complex",
            l.values()
                .iter()
                .map(|u| encode_complex(u.to_complex()))
                .collect::<Result<_>>()?,
        ),
    };
    Ok(serde_json::to_string_pretty(&ParameterFile {
        rows: l.rows(),
        cols: l.cols(),
        repr: repr.to_string(),
        entries,
    })?)
}
