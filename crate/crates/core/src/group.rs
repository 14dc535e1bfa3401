//! Finite groups as Cayley tables over dense indices, with the identity at 0.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::matrix::Matrix;
use crate::scalar::{Cx, Real};

/// Hard cap on group order.
pub const MAX_ORDER: usize = 512;
/// Orders above this trigger a slowness warning.
pub const SOFT_ORDER: usize = 48;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("multiplication table is not associative at ({0}, {1}, {2})")]
    NonAssociativeTable(usize, usize, usize),
    #[error("element 0 is not a two-sided identity")]
    MissingIdentity,
    #[error("row or column {0} of the table is not a permutation")]
    NotAPermutationRow(usize),
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("element set is not a subgroup")]
    NotASubgroup,
    #[error("group order {0} exceeds the limit of {MAX_ORDER}")]
    TooLarge(usize),
    #[error("invalid group parameters: {0}")]
    InvalidParameters(String),
}

#[derive(Clone)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    table: Vec<usize>,
    inverse: Vec<usize>,
}

/// Groups compare by Cayley table; names are labels only.
impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.table == other.table
    }
}

impl Eq for FiniteGroup {}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup({}, order {})", self.name, self.order)
    }
}

impl FiniteGroup {
    /// Validates a Cayley table: `rows[a][b]` is the index of `a·b`.
    pub fn from_table(name: impl Into<String>, rows: &[Vec<usize>]) -> Result<Self, GroupError> {
        let n = rows.len();
        if n == 0 {
            return Err(GroupError::MissingIdentity);
        }
        if n > MAX_ORDER {
            return Err(GroupError::TooLarge(n));
        }
        let mut table = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(GroupError::NotAPermutationRow(i));
            }
            table.extend_from_slice(row);
        }
        Self::from_flat(name.into(), n, table)
    }

    fn from_flat(name: String, n: usize, table: Vec<usize>) -> Result<Self, GroupError> {
        if n > MAX_ORDER {
            return Err(GroupError::TooLarge(n));
        }
        for i in 0..n {
            let mut row_seen = vec![false; n];
            let mut col_seen = vec![false; n];
            for j in 0..n {
                let r = table[i * n + j];
                let c = table[j * n + i];
                if r >= n || row_seen[r] || c >= n || col_seen[c] {
                    return Err(GroupError::NotAPermutationRow(i));
                }
                row_seen[r] = true;
                col_seen[c] = true;
            }
        }
        if (0..n).any(|i| table[i] != i || table[i * n] != i) {
            return Err(GroupError::MissingIdentity);
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a * n + b];
                for c in 0..n {
                    if table[ab * n + c] != table[a * n + table[b * n + c]] {
                        return Err(GroupError::NonAssociativeTable(a, b, c));
                    }
                }
            }
        }
        let inverse = (0..n)
            .map(|a| (0..n).find(|&b| table[a * n + b] == 0).expect("latin square has inverses"))
            .collect();
        if n > SOFT_ORDER {
            log::warn!("group {name} has order {n}; constructions will be slow");
        }
        Ok(FiniteGroup { name, order: n, table, inverse })
    }

    pub fn trivial() -> Self {
        FiniteGroup { name: "trivial".into(), order: 1, table: vec![0], inverse: vec![0] }
    }

    /// ℤ/n with element `k` at index `k`.
    pub fn cyclic(n: usize) -> Result<Self, GroupError> {
        if n == 0 {
            return Err(GroupError::InvalidParameters("cyclic group of order 0".into()));
        }
        if n > MAX_ORDER {
            return Err(GroupError::TooLarge(n));
        }
        let table = (0..n * n).map(|k| (k / n + k % n) % n).collect();
        Self::from_flat(format!("cyclic:{n}"), n, table)
    }

    /// Symmetric group on `m` points, permutations in lexicographic order and
    /// composed as functions: `(στ)(x) = σ(τ(x))`.
    pub fn symmetric(m: usize) -> Result<Self, GroupError> {
        if m == 0 {
            return Err(GroupError::InvalidParameters("symmetric group on 0 points".into()));
        }
        let order: usize = (1..=m).product();
        if order > MAX_ORDER {
            return Err(GroupError::TooLarge(order));
        }
        let perms = permutations(m);
        let index = |p: &[usize]| perms.iter().position(|q| q == p).expect("closed under composition");
        let mut table = Vec::with_capacity(order * order);
        for s in &perms {
            for t in &perms {
                let st: Vec<usize> = (0..m).map(|x| s[t[x]]).collect();
                table.push(index(&st));
            }
        }
        Self::from_flat(format!("symmetric:{m}"), order, table)
    }

    /// Dihedral group of order `2m`; index `i + m·j` stands for `r^i s^j`.
    pub fn dihedral(m: usize) -> Result<Self, GroupError> {
        if m == 0 {
            return Err(GroupError::InvalidParameters("dihedral group with m = 0".into()));
        }
        let n = 2 * m;
        if n > MAX_ORDER {
            return Err(GroupError::TooLarge(n));
        }
        let mut table = Vec::with_capacity(n * n);
        for x in 0..n {
            let (a, b) = (x % m, x / m);
            for y in 0..n {
                let (c, d) = (y % m, y / m);
                let rot = if b == 0 { (a + c) % m } else { (a + m - c) % m };
                table.push(rot + m * ((b + d) % 2));
            }
        }
        Self::from_flat(format!("dihedral:{m}"), n, table)
    }

    /// `G × H` with `(g, h)` at index `g·|H| + h`.
    pub fn direct_product(&self, other: &FiniteGroup) -> Result<Self, GroupError> {
        let (n, m) = (self.order, other.order);
        let order = n * m;
        if order > MAX_ORDER {
            return Err(GroupError::TooLarge(order));
        }
        let mut table = Vec::with_capacity(order * order);
        for x in 0..order {
            for y in 0..order {
                table.push(self.mul(x / m, y / m) * m + other.mul(x % m, y % m));
            }
        }
        Self::from_flat(format!("{}x{}", self.name, other.name), order, table)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    /// `s x s⁻¹`
    pub fn conjugate(&self, s: usize, x: usize) -> usize {
        self.mul(self.mul(s, x), self.inv(s))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut k = 1;
        let mut x = a;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Cayley table as rows.
    pub fn table(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(<[usize]>::to_vec).collect()
    }

    /// Sorted subgroup generated by `gens`.
    pub fn generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut inside = vec![false; self.order];
        inside[0] = true;
        let mut members = vec![0];
        let mut i = 0;
        while i < members.len() {
            let x = members[i];
            for &g in gens {
                let y = self.mul(x, g % self.order);
                if !inside[y] {
                    inside[y] = true;
                    members.push(y);
                }
            }
            i += 1;
        }
        members.sort_unstable();
        members
    }

    pub fn is_subgroup(&self, set: &[usize]) -> bool {
        let mask = self.mask(set);
        match mask {
            Some(mask) => {
                mask[0] && set.iter().all(|&a| set.iter().all(|&b| mask[self.mul(a, self.inv(b))]))
            }
            None => false,
        }
    }

    pub fn is_normal(&self, set: &[usize]) -> bool {
        let Some(mask) = self.mask(set) else { return false };
        self.is_subgroup(set) && self.elements().all(|s| set.iter().all(|&n| mask[self.conjugate(s, n)]))
    }

    /// Conjugacy classes, each sorted, ordered by smallest member.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.order];
        let mut classes = Vec::new();
        for x in self.elements() {
            if seen[x] {
                continue;
            }
            let mut class: Vec<usize> = self.elements().map(|s| self.conjugate(s, x)).collect();
            class.sort_unstable();
            class.dedup();
            for &y in &class {
                seen[y] = true;
            }
            classes.push(class);
        }
        classes
    }

    /// Every normal subgroup, sorted by order and then lexicographically.
    pub fn normal_subgroups(&self) -> Vec<Vec<usize>> {
        // normal subgroups are generated by unions of conjugacy classes, so
        // closing {e} under "join with one more class" reaches all of them
        let classes = self.conjugacy_classes();
        let mut found = vec![vec![0]];
        let mut i = 0;
        while i < found.len() {
            let current = found[i].clone();
            for class in &classes {
                let mut gens = current.clone();
                gens.extend_from_slice(class);
                let next = self.generated(&gens);
                if !found.contains(&next) {
                    found.push(next);
                }
            }
            i += 1;
        }
        found.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        found
    }

    fn mask(&self, set: &[usize]) -> Option<Vec<bool>> {
        let mut mask = vec![false; self.order];
        for &a in set {
            if a >= self.order {
                return None;
            }
            mask[a] = true;
        }
        Some(mask)
    }
}

pub(crate) fn permutations(m: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for x in 0..used.len() {
            if !used[x] {
                used[x] = true;
                prefix.push(x);
                go(prefix, used, out);
                prefix.pop();
                used[x] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; m], &mut out);
    out
}

/// A subgroup `H ≤ G`, sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    group: Arc<FiniteGroup>,
    members: Vec<usize>,
}

impl Subgroup {
    pub fn new(group: Arc<FiniteGroup>, members: &[usize]) -> Result<Self, GroupError> {
        if !group.is_subgroup(members) {
            return Err(GroupError::NotASubgroup);
        }
        let mut members = members.to_vec();
        members.sort_unstable();
        members.dedup();
        Ok(Subgroup { group, members })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn contains(&self, s: usize) -> bool {
        self.members.binary_search(&s).is_ok()
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn is_normal(&self) -> bool {
        self.group.is_normal(&self.members)
    }

    /// The subgroup as a group of its own: element `i` is `members[i]`.
    pub fn as_group(&self) -> FiniteGroup {
        let k = self.members.len();
        let pos = |x: usize| self.members.binary_search(&x).expect("subgroup closed");
        let table = (0..k * k).map(|i| pos(self.group.mul(self.members[i / k], self.members[i % k]))).collect();
        FiniteGroup::from_flat(format!("sub({})", self.group.name), k, table).expect("subgroup table is a group")
    }
}

/// Quotient map `q: G → G/N` with the section choosing the smallest index in
/// each coset. Cosets are numbered by first appearance, so coset 0 is `N`.
#[derive(Clone, Debug)]
pub struct Quotient {
    group: Arc<FiniteGroup>,
    normal: Subgroup,
    coset_of: Vec<usize>,
    section: Vec<usize>,
    quotient: Arc<FiniteGroup>,
}

impl Quotient {
    pub fn new(group: Arc<FiniteGroup>, normal: &[usize]) -> Result<Self, GroupError> {
        let normal = Subgroup::new(group.clone(), normal)?;
        if !normal.is_normal() {
            return Err(GroupError::NotNormal);
        }
        let n = group.order();
        let mut coset_of = vec![usize::MAX; n];
        let mut section = Vec::new();
        for s in 0..n {
            if coset_of[s] != usize::MAX {
                continue;
            }
            let k = section.len();
            section.push(s);
            for &m in normal.members() {
                coset_of[group.mul(s, m)] = k;
            }
        }
        let index = section.len();
        let table = (0..index * index)
            .map(|i| coset_of[group.mul(section[i / index], section[i % index])])
            .collect();
        let quotient = FiniteGroup::from_flat(format!("{}/N", group.name), index, table)?;
        Ok(Quotient { group, normal, coset_of, section, quotient: Arc::new(quotient) })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn normal(&self) -> &Subgroup {
        &self.normal
    }

    pub fn quotient_group(&self) -> &Arc<FiniteGroup> {
        &self.quotient
    }

    pub fn index(&self) -> usize {
        self.section.len()
    }

    pub fn q(&self, s: usize) -> usize {
        self.coset_of[s]
    }

    /// Chosen representative `c(k)` of coset `k`.
    pub fn section(&self, k: usize) -> usize {
        self.section[k]
    }

    /// `n_s = c(q(s))⁻¹ s`, so that `s = c(q(s)) n_s`.
    pub fn n_of(&self, s: usize) -> usize {
        self.group.mul(self.group.inv(self.section[self.coset_of[s]]), s)
    }

    /// Members of coset `k`.
    pub fn coset(&self, k: usize) -> Vec<usize> {
        self.group.elements().filter(|&s| self.coset_of[s] == k).collect()
    }
}

/// Left and right regular representations of `G` on `ℓ²(G)`:
/// `λ_s δ_h = δ_{sh}` and `ρ_r δ_h = δ_{hr⁻¹}`.
pub fn regular_representations<T: Real>(g: &FiniteGroup) -> (Vec<Matrix<T>>, Vec<Matrix<T>>) {
    let left = g.elements().map(|s| left_regular(g, s)).collect();
    let right = g.elements().map(|r| right_regular(g, r)).collect();
    (left, right)
}

pub fn left_regular<T: Real>(g: &FiniteGroup, s: usize) -> Matrix<T> {
    let n = g.order();
    let mut m = Matrix::zeros(n, n);
    for h in 0..n {
        m[(g.mul(s, h), h)] = Cx::new(T::one(), T::zero());
    }
    m
}

pub fn right_regular<T: Real>(g: &FiniteGroup, r: usize) -> Matrix<T> {
    let n = g.order();
    let mut m = Matrix::zeros(n, n);
    for h in 0..n {
        m[(g.mul(h, g.inv(r)), h)] = Cx::new(T::one(), T::zero());
    }
    m
}
