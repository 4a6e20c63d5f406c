//! Textual matrix constructors:
//!
//! ```text
//! fourier:<orders>                    fourier:2x4
//! tensor:(<spec>,<spec>)              tensor:(fourier:2,fourier:3)
//! deformed:(<spec>,<L>,<spec>)        deformed:(fourier:2,[[0,0],[0,1/8]],fourier:2)
//! haagerup:<turn>                     haagerup:1/8
//! tao
//! circulant:<turn>,<turn>,...         circulant:0,1/4
//! file:<path>
//! ```
//!
//! `L` is an inline matrix of turns or the path of a parameter file. Paths
//! inside parentheses end at the next `,` or `)`.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::group::FiniteAbelianGroup;
use crate::hadamard::io::{read_matrix, read_parameters};
use crate::hadamard::{
    circulant_from_eigenvalues, deformed_tensor, fourier_matrix, haagerup_matrix, tao_matrix,
    tensor_product, DeformationParameters, HadamardMatrix, Phase, Unimodular,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParamSpec {
    /// Rows of turns.
    Inline(Vec<Vec<Phase>>),
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatrixSpec {
    Fourier(FiniteAbelianGroup),
    Tensor(Box<MatrixSpec>, Box<MatrixSpec>),
    Deformed(Box<MatrixSpec>, ParamSpec, Box<MatrixSpec>),
    Haagerup(Phase),
    Tao,
    Circulant(Vec<Phase>),
    File(PathBuf),
}

impl fmt::Display for ParamSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamSpec::File(p) => write!(f, "{}", p.display()),
            ParamSpec::Inline(rows) => {
                let rows: Vec<String> = rows
                    .iter()
                    .map(|r| {
                        let r: Vec<String> = r.iter().map(Phase::to_string).collect();
                        format!("[{}]", r.join(","))
                    })
                    .collect();
                write!(f, "[{}]", rows.join(","))
            }
        }
    }
}

impl fmt::Display for MatrixSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatrixSpec::Fourier(g) => write!(f, "fourier:{g}"),
            MatrixSpec::Tensor(a, b) => write!(f, "tensor:({a},{b})"),
            MatrixSpec::Deformed(h, l, k) => write!(f, "deformed:({h},{l},{k})"),
            MatrixSpec::Haagerup(q) => write!(f, "haagerup:{q}"),
            MatrixSpec::Tao => write!(f, "tao"),
            MatrixSpec::Circulant(q) => {
                let q: Vec<String> = q.iter().map(Phase::to_string).collect();
                write!(f, "circulant:{}", q.join(","))
            }
            MatrixSpec::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

impl FromStr for MatrixSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser { text: s, pos: 0 };
        let spec = p.spec(0)?;
        if p.pos != s.len() {
            return Err(Error::parse(p.pos, "trailing input"));
        }
        Ok(spec)
    }
}

impl MatrixSpec {
    /// Builds the matrix; its provenance is the canonical spec string.
    pub fn build(&self) -> Result<HadamardMatrix> {
        let h = match self {
            MatrixSpec::Fourier(g) => fourier_matrix(g),
            MatrixSpec::Tensor(a, b) => tensor_product(&a.build()?, &b.build()?),
            MatrixSpec::Deformed(h, l, k) => {
                deformed_tensor(&h.build()?, &l.build()?, &k.build()?)?
            }
            MatrixSpec::Haagerup(q) => haagerup_matrix(Unimodular::Phase(*q)),
            MatrixSpec::Tao => tao_matrix(),
            MatrixSpec::Circulant(q) => {
                let q: Vec<Unimodular> = q.iter().map(|&p| Unimodular::Phase(p)).collect();
                circulant_from_eigenvalues(&q)
            }
            MatrixSpec::File(path) => read_matrix(path)?,
        };
        Ok(h.with_provenance(self.to_string()))
    }
}

impl ParamSpec {
    pub fn build(&self) -> Result<DeformationParameters> {
        match self {
            ParamSpec::File(path) => read_parameters(path),
            ParamSpec::Inline(rows) => {
                let cols = rows.first().map_or(0, Vec::len);
                if rows.iter().any(|r| r.len() != cols) {
                    return Err(Error::DimensionMismatch("ragged parameter matrix".into()));
                }
                DeformationParameters::from_phases(rows.len(), cols, rows.concat())
            }
        }
    }
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn rest(&self) -> &str {
        &self.text[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(Error::parse(self.pos, format!("expected {c:?}")))
        }
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> &str {
        let start = self.pos;
        let len = self
            .rest()
            .find(|c: char| !f(c))
            .unwrap_or(self.rest().len());
        self.pos += len;
        &self.text[start..self.pos]
    }

    /// Path up to the next delimiter when nested, otherwise to the end.
    fn path(&mut self, depth: usize) -> Result<PathBuf> {
        let start = self.pos;
        let path = if depth == 0 {
            self.take_while(|_| true)
        } else {
            self.take_while(|c| c != ',' && c != ')')
        };
        if path.is_empty() {
            return Err(Error::parse(start, "empty path"));
        }
        Ok(PathBuf::from(path))
    }

    fn turn(&mut self) -> Result<Phase> {
        let start = self.pos;
        let text = self.take_while(|c| c.is_ascii_digit() || c == '-' || c == '/');
        if text.is_empty() {
            return Err(Error::parse(start, "expected a turn fraction"));
        }
        let text = text.to_string();
        text.parse::<Phase>()
            .map_err(|_| Error::parse(start, format!("bad turn fraction {text:?}")))
    }

    fn spec(&mut self, depth: usize) -> Result<MatrixSpec> {
        let start = self.pos;
        let name = self.take_while(|c| c.is_ascii_alphabetic()).to_string();
        match name.as_str() {
            "tao" => return Ok(MatrixSpec::Tao),
            "fourier" | "tensor" | "deformed" | "haagerup" | "circulant" | "file" => {}
            "" => return Err(Error::parse(start, "expected a matrix constructor")),
            other => {
                return Err(Error::parse(
                    start,
                    format!("unknown constructor {other:?}"),
                ))
            }
        }
        self.expect(':')?;
        match name.as_str() {
            "fourier" => {
                let at = self.pos;
                let text = self.take_while(|c| c.is_ascii_digit() || c == 'x' || c == 'X');
                if text.is_empty() {
                    return Err(Error::parse(at, "expected group orders"));
                }
                let text = text.to_string();
                let group = text.parse::<FiniteAbelianGroup>().map_err(|e| match e {
                    Error::Parse { position, message } => Error::parse(at + position, message),
                    other => Error::parse(at, other.to_string()),
                })?;
                Ok(MatrixSpec::Fourier(group))
            }
            "tensor" => {
                self.expect('(')?;
                let a = self.spec(depth + 1)?;
                self.expect(',')?;
                let b = self.spec(depth + 1)?;
                self.expect(')')?;
                Ok(MatrixSpec::Tensor(Box::new(a), Box::new(b)))
            }
            "deformed" => {
                self.expect('(')?;
                let h = self.spec(depth + 1)?;
                self.expect(',')?;
                let l = if self.peek() == Some('[') {
                    self.inline_matrix()?
                } else {
                    ParamSpec::File(self.path(depth + 1)?)
                };
                self.expect(',')?;
                let k = self.spec(depth + 1)?;
                self.expect(')')?;
                Ok(MatrixSpec::Deformed(Box::new(h), l, Box::new(k)))
            }
            "haagerup" => Ok(MatrixSpec::Haagerup(self.turn()?)),
            "circulant" => {
                let mut q = vec![self.turn()?];
                // a comma continues the list only if a turn follows
                while self.rest().starts_with(',')
                    && self.rest()[1..].starts_with(|c: char| c.is_ascii_digit() || c == '-')
                {
                    self.pos += 1;
                    q.push(self.turn()?);
                }
                Ok(MatrixSpec::Circulant(q))
            }
            _ => Ok(MatrixSpec::File(self.path(depth)?)),
        }
    }

    fn inline_matrix(&mut self) -> Result<ParamSpec> {
        self.expect('[')?;
        let mut rows = Vec::new();
        loop {
            self.expect('[')?;
            let mut row = vec![self.turn()?];
            while self.peek() == Some(',') {
                self.pos += 1;
                row.push(self.turn()?);
            }
            self.expect(']')?;
            rows.push(row);
            if self.peek() == Some(',') {
                self.pos += 1;
            } else {
                break;
            }
        }
        self.expect(']')?;
        Ok(ParamSpec::Inline(rows))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hadamard::f22;

    fn parse(s: &str) -> MatrixSpec {
        s.parse().unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(
            parse("fourier:2x2"),
            MatrixSpec::Fourier(FiniteAbelianGroup::new(&[2, 2]).unwrap())
        );
        assert_eq!(
            parse("haagerup:1/8"),
            MatrixSpec::Haagerup(Phase::root(1, 8))
        );
        let h = parse("deformed:(fourier:2,[[0,0],[0,1/8]],fourier:2)")
            .build()
            .unwrap();
        let expected = f22(Phase::root(1, 8).into());
        assert_eq!(h.max_distance(&expected), 0.0);
        assert!(h.is_exact());
    }

    #[test]
    fn canonical_form() {
        for (input, canonical) in [
            (
                "tensor:(fourier:2,circulant:0,1/4)",
                "tensor:(fourier:2,circulant:0,1/4)",
            ),
            ("haagerup:2/16", "haagerup:1/8"),
            ("circulant:0,-1/4", "circulant:0,3/4"),
            (
                "deformed:(fourier:2,params.json,tao)",
                "deformed:(fourier:2,params.json,tao)",
            ),
            ("file:some dir/h.json", "file:some dir/h.json"),
        ] {
            let spec = parse(input);
            assert_eq!(spec.to_string(), canonical);
            assert_eq!(parse(canonical), spec);
        }
    }

    #[test]
    fn errors_carry_positions() {
        let pos = |s: &str| match s.parse::<MatrixSpec>() {
            Err(Error::Parse { position, .. }) => position,
            other => panic!("{s}: {other:?}"),
        };
        assert_eq!(pos("fourrier:2"), 0);
        assert_eq!(pos("fourier:"), 8);
        assert_eq!(pos("fourier:2y"), 9);
        assert_eq!(pos("haagerup:1/0"), 9);
        assert_eq!(pos("tensor:(fourier:2 fourier:2)"), 17);
        assert_eq!(pos("tao!"), 3);
        assert!("fourier:0".parse::<MatrixSpec>().is_err());
    }

    #[test]
    fn shape_errors_at_build() {
        let spec = parse("deformed:(fourier:2,[[0,0,0],[0,1/8,0]],fourier:2)");
        assert!(matches!(spec.build(), Err(Error::DimensionMismatch(_))));
        let spec = parse("deformed:(fourier:2,[[0,0],[0]],fourier:2)");
        assert!(spec.build().is_err());
    }
}
