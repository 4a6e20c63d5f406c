//! Integer arithmetic in `Z[x]/Phi_q(x)`, the power basis of the `q`-th
//! cyclotomic field.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::group::factorize;

/// Euler's totient.
pub fn totient(q: u64) -> u64 {
    factorize(q)
        .into_iter()
        .fold(q, |acc, (p, _)| acc / p * (p - 1))
}

fn divisors(q: u64) -> Vec<u64> {
    (1..=q).filter(|d| q % d == 0).collect()
}

/// Exact division of `num` by the monic polynomial `den` (coefficients in
/// ascending degree).
fn divide_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    debug_assert_eq!(den[dn], 1);
    let mut rem = num.to_vec();
    let mut quot = vec![0i64; num.len() - dn];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dn];
        quot[k] = c;
        if c != 0 {
            for (t, &d) in den.iter().enumerate() {
                rem[k + t] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0), "division left a remainder");
    quot
}

fn cache() -> &'static Mutex<HashMap<u64, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `Phi_q` as ascending coefficients, computed as `(x^q - 1) / prod_{d | q, d < q} Phi_d`.
pub fn cyclotomic_polynomial(q: u64) -> Arc<Vec<i64>> {
    assert!(q >= 1, "cyclotomic index must be positive");
    if let Some(hit) = cache().lock().unwrap().get(&q) {
        return Arc::clone(hit);
    }
    let mut poly = vec![0i64; q as usize + 1];
    poly[0] = -1;
    poly[q as usize] = 1;
    for d in divisors(q) {
        if d < q {
            poly = divide_monic(&poly, &cyclotomic_polynomial(d));
        }
    }
    let poly = Arc::new(poly);
    cache()
        .lock()
        .unwrap()
        .entry(q)
        .or_insert_with(|| Arc::clone(&poly));
    poly
}

/// Residues of `x^m mod Phi_q` for `m = 0..q`, each of length `phi(q)`.
#[derive(Debug, Clone)]
pub struct PowerTable {
    pub q: u64,
    pub phi: usize,
    powers: Vec<Vec<i64>>,
}

impl PowerTable {
    pub fn new(q: u64) -> Self {
        let modulus = cyclotomic_polynomial(q);
        let phi = modulus.len() - 1;
        let mut powers = Vec::with_capacity(q as usize);
        let mut cur = vec![0i64; phi];
        if phi > 0 {
            cur[0] = 1;
        }
        for _ in 0..q {
            powers.push(cur.clone());
            // multiply by x, then fold the x^phi term back
            let top = cur[phi - 1];
            for t in (1..phi).rev() {
                cur[t] = cur[t - 1];
            }
            cur[0] = 0;
            if top != 0 {
                for t in 0..phi {
                    cur[t] -= top * modulus[t];
                }
            }
        }
        PowerTable { q, phi, powers }
    }

    /// Coordinates of `x^m` (any integer `m`) in the power basis.
    pub fn power(&self, m: i64) -> &[i64] {
        let r = m.rem_euclid(self.q as i64) as usize;
        &self.powers[r]
    }

    /// Adds `sign * x^m` into `acc`.
    pub fn accumulate(&self, acc: &mut [i64], m: i64, sign: i64) {
        for (a, &c) in acc.iter_mut().zip(self.power(m)) {
            *a += sign * c;
        }
    }

    /// Evaluates power-basis coordinates at `x = e^{2 pi i / q}`.
    pub fn evaluate(&self, coords: &[i64]) -> num_complex::Complex64 {
        coords
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(t, &c)| {
                let angle = 2.0 * std::f64::consts::PI * t as f64 / self.q as f64;
                num_complex::Complex64::from_polar(c as f64, angle)
            })
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomics() {
        assert_eq!(*cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_polynomial(2), vec![1, 1]);
        assert_eq!(*cyclotomic_polynomial(3), vec![1, 1, 1]);
        assert_eq!(*cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(*cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        // Phi_105 is the first with a coefficient of absolute value 2
        let p105 = cyclotomic_polynomial(105);
        assert_eq!(p105.len() - 1, 48);
        assert!(p105.contains(&-2));
    }

    #[test]
    fn degree_is_totient() {
        for q in 1..60 {
            assert_eq!(
                cyclotomic_polynomial(q).len() as u64 - 1,
                totient(q),
                "q={q}"
            );
        }
    }

    #[test]
    fn root_sums_vanish() {
        for q in 2..30u64 {
            let table = PowerTable::new(q);
            let mut acc = vec![0i64; table.phi];
            for m in 0..q as i64 {
                table.accumulate(&mut acc, m, 1);
            }
            assert!(acc.iter().all(|&c| c == 0), "q={q}");
        }
    }

    #[test]
    fn powers_evaluate_to_roots() {
        for q in 1..25u64 {
            let table = PowerTable::new(q);
            for m in -3..(2 * q as i64) {
                let z = table.evaluate(table.power(m));
                let angle = 2.0 * std::f64::consts::PI * m as f64 / q as f64;
                let expect = num_complex::Complex64::from_polar(1.0, angle);
                assert!((z - expect).norm() < 1e-12, "q={q} m={m}");
            }
        }
    }
}
