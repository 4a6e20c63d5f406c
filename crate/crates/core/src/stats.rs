//! Fixed-point statistics `chi_r(g) = Tr(g^r)/n` of permutation groups and
//! the defect of `F_G` recovered from them in the regular representation.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::group::{enumeration_cap, FiniteAbelianGroup, Rational};

/// Finite group of permutations of `0..degree`, stored as an explicit
/// element table. Composition is `(a * b)(x) = a(b(x))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutationGroup {
    degree: usize,
    elements: Vec<Vec<usize>>,
    identity: usize,
}

fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&x| a[x]).collect()
}

fn inverse(a: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; a.len()];
    for (x, &y) in a.iter().enumerate() {
        inv[y] = x;
    }
    inv
}

fn check_permutation(p: &[usize], degree: usize) -> Result<()> {
    if p.len() != degree {
        return Err(Error::MalformedPermutation(format!(
            "length {} on {degree} points",
            p.len()
        )));
    }
    let mut seen = vec![false; degree];
    for &x in p {
        if x >= degree || seen[x] {
            return Err(Error::MalformedPermutation(format!(
                "{p:?} is not a bijection"
            )));
        }
        seen[x] = true;
    }
    Ok(())
}

impl PermutationGroup {
    /// Validates the table: permutations, no repeats, identity present, and
    /// closure under composition and inverse.
    pub fn from_elements(degree: usize, elements: Vec<Vec<usize>>) -> Result<Self> {
        let mut index = HashMap::with_capacity(elements.len());
        for (k, p) in elements.iter().enumerate() {
            check_permutation(p, degree)?;
            if index.insert(p.clone(), k).is_some() {
                return Err(Error::NotAGroup(format!("repeated element {p:?}")));
            }
        }
        let id: Vec<usize> = (0..degree).collect();
        let identity = *index
            .get(&id)
            .ok_or_else(|| Error::NotAGroup("identity missing".into()))?;
        for a in &elements {
            if !index.contains_key(&inverse(a)) {
                return Err(Error::NotAGroup(format!("inverse of {a:?} missing")));
            }
            for b in &elements {
                if !index.contains_key(&compose(a, b)) {
                    return Err(Error::NotAGroup(format!("{a:?} * {b:?} missing")));
                }
            }
        }
        Ok(PermutationGroup {
            degree,
            elements,
            identity,
        })
    }

    /// Closure of the generators, elements in breadth-first discovery order
    /// starting from the identity.
    pub fn generate(degree: usize, generators: &[Vec<usize>]) -> Result<Self> {
        for g in generators {
            check_permutation(g, degree)?;
        }
        let id: Vec<usize> = (0..degree).collect();
        let mut elements = vec![id.clone()];
        let mut seen: HashMap<Vec<usize>, usize> = HashMap::from([(id, 0)]);
        let mut k = 0;
        while k < elements.len() {
            for g in generators {
                let next = compose(g, &elements[k]);
                if !seen.contains_key(&next) {
                    if elements.len() as u64 >= enumeration_cap() {
                        return Err(Error::CapExceeded {
                            size: elements.len() as u128 + 1,
                            cap: enumeration_cap(),
                        });
                    }
                    seen.insert(next.clone(), elements.len());
                    elements.push(next);
                }
            }
            k += 1;
        }
        Ok(PermutationGroup {
            degree,
            elements,
            identity: 0,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Vec<usize>] {
        &self.elements
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    /// Lengths of the cycles through each point of element `g`.
    fn cycle_lengths(&self, g: usize) -> Vec<u64> {
        let p = &self.elements[g];
        let mut lengths = vec![0u64; self.degree];
        for start in 0..self.degree {
            if lengths[start] != 0 {
                continue;
            }
            let mut cycle = vec![start];
            let mut x = p[start];
            while x != start {
                cycle.push(x);
                x = p[x];
            }
            for &y in &cycle {
                lengths[y] = cycle.len() as u64;
            }
        }
        lengths
    }

    /// Number of points fixed by `g^r`.
    pub fn fixed_points(&self, g: usize, r: u64) -> usize {
        self.cycle_lengths(g)
            .iter()
            .filter(|&&c| r % c == 0)
            .count()
    }

    pub fn element_order(&self, g: usize) -> u64 {
        self.cycle_lengths(g)
            .into_iter()
            .fold(1, |acc, c| acc.lcm(&c))
    }

    /// Least common multiple of the element orders.
    pub fn exponent(&self) -> u64 {
        (0..self.order()).fold(1, |acc, g| acc.lcm(&self.element_order(g)))
    }

    /// `sum_g 1/ord(g)`.
    pub fn delta(&self) -> Rational {
        (0..self.order())
            .map(|g| Rational::new(BigInt::one(), BigInt::from(self.element_order(g))))
            .fold(Rational::zero(), |acc, x| acc + x)
    }

    /// Regular (left multiplication) action on the element table itself.
    pub fn cayley(&self) -> PermutationGroup {
        let index: HashMap<&Vec<usize>, usize> = self
            .elements
            .iter()
            .enumerate()
            .map(|(k, p)| (p, k))
            .collect();
        let elements = self
            .elements
            .iter()
            .map(|g| {
                self.elements
                    .iter()
                    .map(|h| index[&compose(g, h)])
                    .collect()
            })
            .collect();
        PermutationGroup {
            degree: self.order(),
            elements,
            identity: self.identity,
        }
    }

    /// Transitive with trivial stabilisers: `degree = order` and no
    /// non-identity element fixes a point.
    pub fn is_regular(&self) -> bool {
        self.degree == self.order()
            && (0..self.order())
                .filter(|&g| g != self.identity)
                .all(|g| self.fixed_points(g, 1) == 0)
    }
}

/// `G` acting on itself by translation `h -> h + g`, element `g` at the
/// position of `g` in the enumeration of `G`.
pub fn regular_representation(group: &FiniteAbelianGroup) -> Result<PermutationGroup> {
    let cap = enumeration_cap();
    let n = group.checked_order(cap)?;
    let table = group.addition_table(cap)?;
    let elements = (0..n)
        .map(|g| (0..n).map(|h| table[h][g]).collect())
        .collect();
    Ok(PermutationGroup {
        degree: n,
        elements,
        identity: 0,
    })
}

/// Dihedral group of order `2N`: rotations `i -> i + k` and reflections
/// `i -> c - i` of `Z_N` for `N >= 3`. For `N <= 2` that action is not
/// faithful, so the group is realised by its regular action on `2N` points.
pub fn dihedral_group(n: u64) -> Result<PermutationGroup> {
    if n == 0 {
        return Err(Error::InvalidOrder(0));
    }
    let n = n as usize;
    if n >= 3 {
        let rotation: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        let reflection: Vec<usize> = (0..n).map(|i| (n - i) % n).collect();
        return PermutationGroup::generate(n, &[rotation, reflection]);
    }
    // points (i, s) -> i + n*s for r^i s^s; r and s act by left multiplication
    let point = |i: usize, s: usize| i % n + n * s;
    let rotation: Vec<usize> = (0..2 * n)
        .map(|x| {
            let (i, s) = (x % n, x / n);
            point(i + 1, s)
        })
        .collect();
    let reflection: Vec<usize> = (0..2 * n)
        .map(|x| {
            let (i, s) = (x % n, x / n);
            point(n - i, 1 - s)
        })
        .collect();
    PermutationGroup::generate(2 * n, &[rotation, reflection])
}

/// `chi_r(g) = #fix(g^r) / degree`.
pub fn ds_variable(group: &PermutationGroup, g: usize, r: u64) -> Result<Rational> {
    if r == 0 {
        return Err(Error::InvalidOrder(0));
    }
    if g >= group.order() {
        return Err(Error::DimensionMismatch(format!(
            "element {g} of a group of order {}",
            group.order()
        )));
    }
    Ok(Rational::new(
        BigInt::from(group.fixed_points(g, r)),
        BigInt::from(group.degree().max(1)),
    ))
}

/// `(1/l) sum_{r=1}^l (1/|P|) sum_g chi_r(g)^k`.
pub fn ds_moment(group: &PermutationGroup, k: u32, l: u64) -> Result<Rational> {
    if k == 0 || l == 0 {
        return Err(Error::InvalidOrder(0));
    }
    let work = (l as u128) * (group.order() as u128);
    if work > enumeration_cap() as u128 {
        return Err(Error::CapExceeded {
            size: work,
            cap: enumeration_cap(),
        });
    }
    let degree = BigInt::from(group.degree().max(1));
    let denominator = num_traits::pow(degree, k as usize);
    let lengths: Vec<Vec<u64>> = (0..group.order()).map(|g| group.cycle_lengths(g)).collect();
    let mut total = BigInt::zero();
    for r in 1..=l {
        for cycles in &lengths {
            let fixed = cycles.iter().filter(|&&c| r % c == 0).count();
            total += num_traits::pow(BigInt::from(fixed), k as usize);
        }
    }
    Ok(Rational::new(
        total,
        denominator * BigInt::from(l) * BigInt::from(group.order()),
    ))
}

/// `N^2 (1/l) sum_{r=1}^l integral_G chi_r^k` over the regular
/// representation, `N = |G|`; equals `d(F_G)` once `l` is a multiple of the
/// exponent.
pub fn ds_defect_estimate(group: &FiniteAbelianGroup, k: u32, l: u64) -> Result<Rational> {
    let p = regular_representation(group)?;
    let n = BigInt::from(p.degree());
    Ok(ds_moment(&p, k, l)? * Rational::from_integer(&n * &n))
}

/// `sum_{r=1}^{e} sum_g chi_r(g)^k / e` with `e` the exponent, which for a
/// regular action is `delta = sum_g 1/ord(g)`.
pub fn ds_delta_exact(group: &PermutationGroup, k: u32) -> Result<Rational> {
    if !group.is_regular() {
        return Err(Error::NotRegular(format!(
            "group of order {} on {} points",
            group.order(),
            group.degree()
        )));
    }
    let order = BigInt::from(group.order());
    Ok(ds_moment(group, k, group.exponent())? * Rational::from_integer(order))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{delta_bruteforce, delta_dihedral, fourier_defect};

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn cyclic(orders: &[i64]) -> FiniteAbelianGroup {
        FiniteAbelianGroup::new(orders).unwrap()
    }

    #[test]
    fn regular_small_groups() {
        let z2 = regular_representation(&cyclic(&[2])).unwrap();
        assert_eq!(z2.elements(), &[vec![0, 1], vec![1, 0]]);
        let z3 = regular_representation(&cyclic(&[3])).unwrap();
        assert_eq!(z3.order(), 3);
        assert_eq!(z3.element_order(1), 3);
        assert_eq!(z3.element_order(2), 3);
        let v4 = regular_representation(&cyclic(&[2, 2])).unwrap();
        assert!(v4.is_regular());
        assert!((1..4).all(|g| v4.element_order(g) == 2 && v4.fixed_points(g, 1) == 0));
        // the table is a genuine group
        PermutationGroup::from_elements(4, v4.elements().to_vec()).unwrap();
    }

    #[test]
    fn validation() {
        assert!(matches!(
            PermutationGroup::from_elements(2, vec![vec![0, 0]]),
            Err(Error::MalformedPermutation(_))
        ));
        assert!(matches!(
            PermutationGroup::from_elements(3, vec![vec![0, 1, 2], vec![1, 2, 0]]),
            Err(Error::NotAGroup(_))
        ));
        assert!(matches!(
            PermutationGroup::from_elements(2, vec![vec![1, 0]]),
            Err(Error::NotAGroup(_))
        ));
    }

    #[test]
    fn dihedral_groups() {
        for n in 1..=8u64 {
            let d = dihedral_group(n).unwrap();
            assert_eq!(d.order() as u64, 2 * n);
            PermutationGroup::from_elements(d.degree(), d.elements().to_vec()).unwrap();
            assert_eq!(d.delta(), delta_dihedral(n).unwrap(), "n={n}");
        }
        assert_eq!(dihedral_group(3).unwrap().degree(), 3);
        let d4 = dihedral_group(4).unwrap();
        let mut orders: Vec<u64> = (0..8).map(|g| d4.element_order(g)).collect();
        orders.sort();
        assert_eq!(orders, vec![1, 2, 2, 2, 2, 2, 4, 4]);
        assert_eq!(d4.delta(), rat(4, 1));
        assert_eq!(dihedral_group(1).unwrap().order(), 2);
    }

    #[test]
    fn ds_variable_examples() {
        let z2 = regular_representation(&cyclic(&[2])).unwrap();
        assert_eq!(ds_variable(&z2, 0, 5).unwrap(), rat(1, 1));
        assert_eq!(ds_variable(&z2, 1, 1).unwrap(), rat(0, 1));
        assert_eq!(ds_variable(&z2, 1, 2).unwrap(), rat(1, 1));
        assert!(ds_variable(&z2, 1, 0).is_err());
    }

    #[test]
    fn ds_estimate_examples() {
        let z2 = cyclic(&[2]);
        assert_eq!(ds_defect_estimate(&z2, 1, 2).unwrap(), rat(3, 1));
        assert_eq!(ds_defect_estimate(&z2, 1, 1).unwrap(), rat(2, 1));
        for orders in [&[6][..], &[2, 2], &[2, 4], &[3, 3]] {
            let g = cyclic(orders);
            let expected = Rational::from_integer(fourier_defect(&g).unwrap());
            for k in 1..=3 {
                assert_eq!(ds_defect_estimate(&g, k, g.exponent()).unwrap(), expected);
            }
        }
    }

    #[test]
    fn ds_delta_examples() {
        let z6 = regular_representation(&cyclic(&[6])).unwrap();
        assert_eq!(ds_delta_exact(&z6, 1).unwrap(), rat(5, 2));
        assert_eq!(
            ds_delta_exact(&z6, 1).unwrap(),
            delta_bruteforce(&cyclic(&[6])).unwrap()
        );
        let d4 = dihedral_group(4).unwrap().cayley();
        assert_eq!(d4.degree(), 8);
        assert_eq!(ds_delta_exact(&d4, 2).unwrap(), rat(4, 1));
        let trivial = regular_representation(&FiniteAbelianGroup::trivial()).unwrap();
        assert_eq!(ds_delta_exact(&trivial, 1).unwrap(), rat(1, 1));
        assert!(matches!(
            ds_delta_exact(&dihedral_group(4).unwrap(), 1),
            Err(Error::NotRegular(_))
        ));
    }
}
