use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use num_complex::Complex64;
use num_integer::Integer;

use crate::error::{Error, Result};

/// A root of unity `e^{2 pi i num/den}`, stored as a reduced fraction of a
/// full turn in `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Phase {
    num: i64,
    den: i64,
}

impl Phase {
    pub const ONE: Phase = Phase { num: 0, den: 1 };
    pub const MINUS_ONE: Phase = Phase { num: 1, den: 2 };
    pub const I: Phase = Phase { num: 1, den: 4 };
    pub const MINUS_I: Phase = Phase { num: 3, den: 4 };

    /// `num/den` of a turn, reduced modulo one.
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::parse(0, "zero denominator in turn fraction"));
        }
        let (num, den) = if den < 0 { (-num, -den) } else { (num, den) };
        let num = num.rem_euclid(den);
        let g = num.gcd(&den);
        Ok(Phase {
            num: num / g,
            den: den / g,
        })
    }

    /// `e^{2 pi i k/m}`.
    pub fn root(k: i64, m: u64) -> Self {
        Phase::new(k, m as i64).expect("root of unity with m >= 1")
    }

    pub fn num(self) -> i64 {
        self.num
    }

    pub fn den(self) -> i64 {
        self.den
    }

    pub fn conj(self) -> Self {
        Phase::new(-self.num, self.den).unwrap()
    }

    pub fn to_complex(self) -> Complex64 {
        // Quarter turns are returned exactly.
        match (self.num, self.den) {
            (0, 1) => Complex64::new(1.0, 0.0),
            (1, 2) => Complex64::new(-1.0, 0.0),
            (1, 4) => Complex64::new(0.0, 1.0),
            (3, 4) => Complex64::new(0.0, -1.0),
            _ => {
                let angle = 2.0 * std::f64::consts::PI * self.num as f64 / self.den as f64;
                Complex64::from_polar(1.0, angle)
            }
        }
    }

    pub fn is_real(self) -> bool {
        self.den <= 2
    }
}

impl Mul for Phase {
    type Output = Phase;

    fn mul(self, rhs: Phase) -> Phase {
        let den = self.den.lcm(&rhs.den);
        Phase::new(self.num * (den / self.den) + rhs.num * (den / rhs.den), den).unwrap()
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for Phase {
    type Err = Error;

    /// Accepts `k`, `k/m`, optionally suffixed with `turn`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let t = t.strip_suffix("turn").unwrap_or(t).trim();
        let bad = || Error::parse(0, format!("bad turn fraction {s:?}"));
        let (n, d) = match t.split_once('/') {
            Some((n, d)) => (
                n.trim().parse::<i64>().map_err(|_| bad())?,
                d.trim().parse::<i64>().map_err(|_| bad())?,
            ),
            None => (t.parse::<i64>().map_err(|_| bad())?, 1),
        };
        if d == 0 {
            return Err(bad());
        }
        Phase::new(n, d)
    }
}

/// A unimodular scalar given either exactly or in floating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Unimodular {
    Phase(Phase),
    Complex(Complex64),
}

impl Unimodular {
    pub const ONE: Unimodular = Unimodular::Phase(Phase::ONE);

    /// Floating value; fails unless `|z| = 1` within `1e-10`.
    pub fn from_complex(z: Complex64) -> Result<Self> {
        if !z.re.is_finite() || !z.im.is_finite() || (z.norm() - 1.0).abs() > 1e-10 {
            return Err(Error::NotUnimodular(format!("{z}")));
        }
        Ok(Unimodular::Complex(z))
    }

    pub fn to_complex(self) -> Complex64 {
        match self {
            Unimodular::Phase(p) => p.to_complex(),
            Unimodular::Complex(z) => z,
        }
    }

    pub fn conj(self) -> Self {
        match self {
            Unimodular::Phase(p) => Unimodular::Phase(p.conj()),
            Unimodular::Complex(z) => Unimodular::Complex(z.conj()),
        }
    }

    pub fn as_phase(self) -> Option<Phase> {
        match self {
            Unimodular::Phase(p) => Some(p),
            Unimodular::Complex(_) => None,
        }
    }
}

impl From<Phase> for Unimodular {
    fn from(p: Phase) -> Self {
        Unimodular::Phase(p)
    }
}

impl Mul for Unimodular {
    type Output = Unimodular;

    fn mul(self, rhs: Unimodular) -> Unimodular {
        match (self, rhs) {
            (Unimodular::Phase(a), Unimodular::Phase(b)) => Unimodular::Phase(a * b),
            (a, b) => Unimodular::Complex(a.to_complex() * b.to_complex()),
        }
    }
}
