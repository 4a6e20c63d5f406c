//! Finite abelian groups `Z_{N_1} x ... x Z_{N_r}` and the closed-form
//! defect formulas for their Fourier matrices.
//!
//! Everything here is exact: element orders are integers, `delta` values are
//! reduced big rationals. The numeric engine in [`crate::defect`] is checked
//! against these values.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact reduced rational number.
pub type Rational = BigRational;

/// Default maximum number of group elements any brute-force routine will
/// enumerate.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1_000_000;

/// Enumeration cap, honouring the `HD_CAP` environment variable.
pub fn enumeration_cap() -> u64 {
    std::env::var("HD_CAP")
        .ok()
        .and_then(|s| s.trim().parse::<u64>().ok())
        .unwrap_or(DEFAULT_ENUMERATION_CAP)
}

/// `Z_{N_1} x ... x Z_{N_r}` with componentwise addition.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteAbelianGroup {
    orders: Vec<u64>,
}

/// Residue vector of a [`FiniteAbelianGroup`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    pub residues: Vec<u64>,
}

impl GroupElement {
    pub fn new(residues: Vec<u64>) -> Self {
        GroupElement { residues }
    }
}

impl FiniteAbelianGroup {
    /// Builds the group with the given cycle orders, kept in the given order.
    pub fn new(orders: &[i64]) -> Result<Self> {
        let mut out = Vec::with_capacity(orders.len());
        for &n in orders {
            if n < 1 {
                return Err(Error::InvalidOrder(n));
            }
            out.push(n as u64);
        }
        Ok(FiniteAbelianGroup { orders: out })
    }

    pub fn cyclic(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidOrder(0));
        }
        Ok(FiniteAbelianGroup { orders: vec![n] })
    }

    pub fn trivial() -> Self {
        FiniteAbelianGroup { orders: Vec::new() }
    }

    pub fn cycle_orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    /// `|G|`. Saturates at `u64::MAX`; callers that enumerate check the cap
    /// first through [`FiniteAbelianGroup::checked_order`].
    pub fn order(&self) -> u64 {
        self.orders
            .iter()
            .fold(1u64, |acc, &n| acc.saturating_mul(n))
    }

    fn order_u128(&self) -> u128 {
        self.orders
            .iter()
            .fold(1u128, |acc, &n| acc.saturating_mul(n as u128))
    }

    /// `|G|` as a `usize`, failing if it exceeds `cap`.
    pub fn checked_order(&self, cap: u64) -> Result<usize> {
        let size = self.order_u128();
        if size > cap as u128 {
            return Err(Error::CapExceeded { size, cap });
        }
        Ok(size as usize)
    }

    /// Least common multiple of the cycle orders.
    pub fn exponent(&self) -> u64 {
        self.orders.iter().fold(1u64, |acc, &n| acc.lcm(&n))
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement::new(vec![0; self.orders.len()])
    }

    pub fn validate(&self, g: &GroupElement) -> Result<()> {
        if g.residues.len() != self.orders.len() {
            return Err(Error::ElementArity {
                expected: self.orders.len(),
                got: g.residues.len(),
            });
        }
        for (index, (&residue, &modulus)) in g.residues.iter().zip(&self.orders).enumerate() {
            if residue >= modulus {
                return Err(Error::ResidueOutOfRange {
                    index,
                    residue,
                    modulus,
                });
            }
        }
        Ok(())
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupElement::new(
            a.residues
                .iter()
                .zip(&b.residues)
                .zip(&self.orders)
                .map(|((&x, &y), &n)| (x + y) % n)
                .collect(),
        )
    }

    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        GroupElement::new(
            a.residues
                .iter()
                .zip(&self.orders)
                .map(|(&x, &n)| (n - x) % n)
                .collect(),
        )
    }

    /// Position of `g` in odometer order (last coordinate varies fastest).
    /// This is also the row/column index of `g` in the Fourier matrix.
    pub fn index_of(&self, g: &GroupElement) -> usize {
        g.residues
            .iter()
            .zip(&self.orders)
            .fold(0usize, |acc, (&x, &n)| acc * n as usize + x as usize)
    }

    pub fn element_at(&self, mut index: usize) -> GroupElement {
        let mut residues = vec![0u64; self.orders.len()];
        for (slot, &n) in residues.iter_mut().zip(&self.orders).rev() {
            *slot = (index % n as usize) as u64;
            index /= n as usize;
        }
        GroupElement::new(residues)
    }

    /// Iterates the elements in odometer order.
    pub fn elements(&self) -> Elements<'_> {
        Elements {
            group: self,
            next: Some(self.identity()),
        }
    }

    /// Addition table on element indices: `table[a][b] = index(a + b)`.
    pub(crate) fn addition_table(&self, cap: u64) -> Result<Vec<Vec<usize>>> {
        let n = self.checked_order(cap)?;
        let elems: Vec<GroupElement> = self.elements().collect();
        Ok((0..n)
            .map(|a| {
                (0..n)
                    .map(|b| self.index_of(&self.add(&elems[a], &elems[b])))
                    .collect()
            })
            .collect())
    }

    pub(crate) fn negation_table(&self, cap: u64) -> Result<Vec<usize>> {
        self.checked_order(cap)?;
        Ok(self
            .elements()
            .map(|g| self.index_of(&self.neg(&g)))
            .collect())
    }
}

pub struct Elements<'a> {
    group: &'a FiniteAbelianGroup,
    next: Option<GroupElement>,
}

impl Iterator for Elements<'_> {
    type Item = GroupElement;

    fn next(&mut self) -> Option<GroupElement> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut carried_out = true;
        for (x, &n) in succ.residues.iter_mut().zip(&self.group.orders).rev() {
            *x += 1;
            if *x < n {
                carried_out = false;
                break;
            }
            *x = 0;
        }
        if !carried_out {
            self.next = Some(succ);
        }
        Some(current)
    }
}

impl fmt::Display for FiniteAbelianGroup {
    /// CLI syntax: `2x4`; the trivial group prints as `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.orders.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.orders.iter().map(u64::to_string).collect();
        write!(f, "{}", parts.join("x"))
    }
}

impl FromStr for FiniteAbelianGroup {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(FiniteAbelianGroup::trivial());
        }
        let mut orders = Vec::new();
        let mut offset = 0usize;
        for part in s.split(['x', 'X']) {
            let n: i64 = part
                .trim()
                .parse()
                .map_err(|_| Error::parse(offset, format!("malformed cycle order {part:?}")))?;
            orders.push(n);
            offset += part.len() + 1;
        }
        FiniteAbelianGroup::new(&orders)
    }
}

/// Least `m >= 1` with `m * g = 0`.
pub fn element_order(group: &FiniteAbelianGroup, g: &GroupElement) -> Result<u64> {
    group.validate(g)?;
    Ok(order_unchecked(group.cycle_orders(), &g.residues))
}

fn order_unchecked(orders: &[u64], residues: &[u64]) -> u64 {
    orders
        .iter()
        .zip(residues)
        .fold(1u64, |acc, (&n, &x)| acc.lcm(&(n / n.gcd(&x))))
}

/// `delta(G) = sum_g 1/ord(g)` by full enumeration, bounded by [`enumeration_cap`].
pub fn delta_bruteforce(group: &FiniteAbelianGroup) -> Result<Rational> {
    delta_bruteforce_capped(group, enumeration_cap())
}

pub fn delta_bruteforce_capped(group: &FiniteAbelianGroup, cap: u64) -> Result<Rational> {
    group.checked_order(cap)?;
    // Group the sum by order so the rational additions stay few.
    let mut by_order: BTreeMap<u64, u64> = BTreeMap::new();
    for g in group.elements() {
        *by_order
            .entry(order_unchecked(group.cycle_orders(), &g.residues))
            .or_default() += 1;
    }
    Ok(by_order
        .into_iter()
        .fold(Rational::zero(), |acc, (ord, count)| {
            acc + Rational::new(BigInt::from(count), BigInt::from(ord))
        }))
}

/// `d(F_G) = sum_g |G|/ord(g)` by full enumeration.
pub fn fourier_defect_bruteforce(group: &FiniteAbelianGroup) -> Result<BigInt> {
    let cap = enumeration_cap();
    let n = group.checked_order(cap)? as u64;
    let mut total = BigInt::zero();
    for g in group.elements() {
        total += BigInt::from(n / order_unchecked(group.cycle_orders(), &g.residues));
    }
    Ok(total)
}

/// `p`-primary parts: prime `p` -> nondecreasing exponents `a_1 <= ... <= a_r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsotypicDecomposition {
    pub components: BTreeMap<u64, Vec<u32>>,
}

impl IsotypicDecomposition {
    /// The group `x_p (Z_{p^{a_1}} x ... x Z_{p^{a_r}})` as a list of
    /// prime-power cycle orders.
    pub fn to_group(&self) -> FiniteAbelianGroup {
        let orders = self
            .components
            .iter()
            .flat_map(|(&p, exps)| exps.iter().map(move |&a| p.pow(a)))
            .collect();
        FiniteAbelianGroup { orders }
    }
}

/// Trial-division factorisation, ascending primes.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n % p == 0 {
            let mut a = 0;
            while n % p == 0 {
                n /= p;
                a += 1;
            }
            out.push((p, a));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n) == [(n, 1)]
}

/// Splits every cycle factor into its prime-power parts (CRT).
pub fn isotypic_decomposition(group: &FiniteAbelianGroup) -> IsotypicDecomposition {
    let mut components: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
    for &n in group.cycle_orders() {
        for (p, a) in factorize(n) {
            components.entry(p).or_default().push(a);
        }
    }
    for exps in components.values_mut() {
        exps.sort_unstable();
    }
    IsotypicDecomposition { components }
}

/// `c_k = #{g : ord(g) <= p^k}` in `Z_{p^{a_1}} x ... x Z_{p^{a_r}}`.
pub fn order_counts(p: u64, exponents: &[u32], k: u32) -> Result<BigInt> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let e: u32 = exponents.iter().map(|&a| a.min(k)).sum();
    Ok(BigInt::from(p).pow(e))
}

fn pow_rational(p: u64, e: i64) -> Rational {
    let base = BigInt::from(p);
    if e >= 0 {
        Rational::from_integer(base.pow(e as u32))
    } else {
        Rational::new(BigInt::one(), base.pow((-e) as u32))
    }
}

/// `[a]_q = 1 + q + ... + q^{a-1}`, with `[0]_q = 0`.
pub fn q_integer(a: u32, q: &BigInt) -> BigInt {
    let mut total = BigInt::zero();
    let mut term = BigInt::one();
    for _ in 0..a {
        total += &term;
        term *= q;
    }
    total
}

/// `delta` of the `p`-group `Z_{p^{a_1}} x ... x Z_{p^{a_r}}` by the closed
/// form
///
/// `1 + sum_{k=1}^r p^{(r-k)a_{k-1} + (a_1+...+a_{k-1}) - 1} (p^{r-k+1} - 1) [a_k - a_{k-1}]_{p^{r-k}}`
///
/// with `a_0 = 0`. Zero exponents are dropped and the rest sorted, so any
/// listing of the same group gives the same value.
pub fn delta_isotypic(p: u64, exponents: &[u32]) -> Rational {
    let mut a: Vec<u32> = exponents.iter().copied().filter(|&x| x > 0).collect();
    a.sort_unstable();
    let r = a.len() as i64;
    let pb = BigInt::from(p);
    let mut total = Rational::one();
    let mut prefix = 0i64;
    let mut prev = 0u32;
    for (idx, &ak) in a.iter().enumerate() {
        let k = idx as i64 + 1;
        let exp = (r - k) * prev as i64 + prefix - 1;
        let factor = num_traits::pow(pb.clone(), (r - k + 1) as usize) - BigInt::one();
        let q = num_traits::pow(pb.clone(), (r - k) as usize);
        let bracket = q_integer(ak - prev, &q);
        total += pow_rational(p, exp) * Rational::from_integer(factor * bracket);
        prefix += ak as i64;
        prev = ak;
    }
    total
}

/// Same quantity through `delta = 1 + sum_{k>=1} (c_k - c_{k-1}) / p^k`.
pub fn delta_isotypic_from_counts(p: u64, exponents: &[u32]) -> Result<Rational> {
    let top = exponents.iter().copied().max().unwrap_or(0);
    let mut total = Rational::one();
    let mut prev = order_counts(p, exponents, 0)?;
    for k in 1..=top {
        let ck = order_counts(p, exponents, k)?;
        total += Rational::new(&ck - &prev, BigInt::from(p).pow(k));
        prev = ck;
    }
    Ok(total)
}

/// `delta(G)` as the product of the isotypic closed forms.
pub fn delta_closed(group: &FiniteAbelianGroup) -> Rational {
    isotypic_decomposition(group)
        .components
        .iter()
        .fold(Rational::one(), |acc, (&p, exps)| {
            acc * delta_isotypic(p, exps)
        })
}

fn integral(value: Rational, what: &str) -> Result<BigInt> {
    if !value.is_integer() {
        return Err(Error::Internal(format!(
            "{what} evaluated to the non-integer {value}"
        )));
    }
    Ok(value.to_integer())
}

/// Undephased defect of `F_G`: `|G| * delta_closed(G)`.
pub fn fourier_defect(group: &FiniteAbelianGroup) -> Result<BigInt> {
    let order = Rational::from_integer(BigInt::from(group.order_u128()));
    integral(order * delta_closed(group), "fourier defect")
}

/// `d(F_N) = N * prod_i (1 + a_i - a_i/p_i)` for `N = prod p_i^{a_i}`.
pub fn fourier_defect_cyclic(n: u64) -> Result<BigInt> {
    if n == 0 {
        return Err(Error::InvalidOrder(0));
    }
    let mut value = Rational::from_integer(BigInt::from(n));
    for (p, a) in factorize(n) {
        let a = BigInt::from(a);
        value *= Rational::from_integer(BigInt::one() + &a) - Rational::new(a, BigInt::from(p));
    }
    integral(value, "cyclic fourier defect")
}

/// `delta(D_N) = N/2 + delta(Z_N)` for the dihedral group of order `2N`.
pub fn delta_dihedral(n: u64) -> Result<Rational> {
    let zn = FiniteAbelianGroup::cyclic(n)?;
    Ok(Rational::new(BigInt::from(n), BigInt::from(2)) + delta_closed(&zn))
}

/// All isomorphism types of abelian groups of order `n`, each listed by its
/// prime-power cycle orders.
pub fn abelian_groups_of_order(n: u64) -> Vec<FiniteAbelianGroup> {
    let mut groups = vec![Vec::<u64>::new()];
    for (p, a) in factorize(n) {
        let mut next = Vec::new();
        for partition in partitions(a) {
            for g in &groups {
                let mut orders = g.clone();
                orders.extend(partition.iter().map(|&e| p.pow(e)));
                next.push(orders);
            }
        }
        groups = next;
    }
    groups
        .into_iter()
        .map(|orders| FiniteAbelianGroup { orders })
        .collect()
}

fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn go(n: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=n.min(max)).rev() {
            prefix.push(part);
            go(n - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// Union-find where every node carries a parity bit relative to its parent:
/// parity 1 means "complex conjugate of".
struct ConjugationUnionFind {
    parent: Vec<usize>,
    parity: Vec<bool>,
    rank: Vec<u8>,
    real: Vec<bool>,
}

impl ConjugationUnionFind {
    fn new(n: usize) -> Self {
        ConjugationUnionFind {
            parent: (0..n).collect(),
            parity: vec![false; n],
            rank: vec![0; n],
            real: vec![false; n],
        }
    }

    fn find(&mut self, x: usize) -> (usize, bool) {
        let mut path = Vec::new();
        let mut cur = x;
        while self.parent[cur] != cur {
            path.push(cur);
            cur = self.parent[cur];
        }
        let root = cur;
        // Compress from the top so each parity is relative to the root.
        let mut acc = false;
        for &node in path.iter().rev() {
            acc ^= self.parity[node];
            self.parity[node] = acc;
            self.parent[node] = root;
        }
        (
            root,
            if path.is_empty() {
                false
            } else {
                self.parity[x]
            },
        )
    }

    /// Records `value(a) = conj^rel(value(b))`.
    fn union(&mut self, a: usize, b: usize, rel: bool) {
        let (ra, pa) = self.find(a);
        let (rb, pb) = self.find(b);
        if ra == rb {
            if pa ^ pb != rel {
                // z = conj(z) along an odd cycle: the class is real.
                self.real[ra] = true;
            }
            return;
        }
        let (child, root) = if self.rank[ra] < self.rank[rb] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.parent[child] = root;
        self.parity[child] = pa ^ pb ^ rel;
        self.real[root] |= self.real[child];
        if self.rank[root] == self.rank[child] {
            self.rank[root] += 1;
        }
    }
}

/// One equivalence class of entries of `P` under `P_{ij} = P_{i+j,j}` and
/// `P_{ij} = conj(P_{i,-j})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PClass {
    /// `(row, col, conjugated)`: the entry equals the class value, or its
    /// conjugate when the flag is set.
    pub members: Vec<(usize, usize, bool)>,
    /// The value is forced real.
    pub real: bool,
}

/// Combinatorial description of the space of matrices `P` indexed by the
/// group, subject to the Fourier-matrix tangent constraints.
#[derive(Debug, Clone)]
pub struct PSpace {
    pub size: usize,
    pub classes: Vec<PClass>,
}

impl PSpace {
    pub fn build(group: &FiniteAbelianGroup) -> Result<Self> {
        let cap = enumeration_cap();
        let n = group.checked_order(cap)?;
        let add = group.addition_table(cap)?;
        let neg = group.negation_table(cap)?;
        let idx = |i: usize, j: usize| i * n + j;
        let mut uf = ConjugationUnionFind::new(n * n);
        for i in 0..n {
            for j in 0..n {
                uf.union(idx(i, j), idx(add[i][j], j), false);
                uf.union(idx(i, j), idx(i, neg[j]), true);
            }
        }
        let mut by_root: BTreeMap<usize, PClass> = BTreeMap::new();
        for i in 0..n {
            for j in 0..n {
                let (root, parity) = uf.find(idx(i, j));
                let real = uf.real[root];
                by_root
                    .entry(root)
                    .or_insert_with(|| PClass {
                        members: Vec::new(),
                        real,
                    })
                    .members
                    .push((i, j, parity));
            }
        }
        Ok(PSpace {
            size: n,
            classes: by_root.into_values().collect(),
        })
    }

    /// Real dimension: one parameter per real class, two per complex class.
    pub fn dimension(&self) -> u64 {
        self.classes
            .iter()
            .map(|c| if c.real { 1 } else { 2 })
            .sum()
    }
}

/// Real dimension of the `P`-parametrised tangent space of `F_G`, counted
/// constructively from the constraint classes.
pub fn p_space_dimension(group: &FiniteAbelianGroup) -> Result<u64> {
    Ok(PSpace::build(group)?.dimension())
}

/// Convenience: `u64` view of a small big integer.
pub fn to_u64(value: &BigInt) -> Option<u64> {
    value.to_u64()
}
