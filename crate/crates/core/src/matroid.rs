//! Binary matroids as labelled families of GF(2) columns.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::gf2::{self, dim_mask, GF2Matrix, GF2Vector, XorBasis, MAX_DIM};

/// Largest supported ground set.
pub const MAX_ELEMENTS: usize = 64;

/// A subset of the ground set of some host matroid, stored as a bit mask of
/// element indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ElementSet(u64);

impl ElementSet {
    pub const EMPTY: ElementSet = ElementSet(0);

    pub fn from_bits(bits: u64) -> Self {
        ElementSet(bits)
    }

    /// The first `n` indices.
    pub fn full(n: usize) -> Self {
        ElementSet(dim_mask(n))
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        ElementSet(indices.into_iter().fold(0, |m, i| m | 1 << i))
    }

    pub fn singleton(i: usize) -> Self {
        ElementSet(1 << i)
    }

    #[inline]
    pub fn bits(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn contains(self, i: usize) -> bool {
        i < 64 && self.0 >> i & 1 == 1
    }

    #[inline]
    pub fn union(self, other: ElementSet) -> ElementSet {
        ElementSet(self.0 | other.0)
    }

    #[inline]
    pub fn intersection(self, other: ElementSet) -> ElementSet {
        ElementSet(self.0 & other.0)
    }

    #[inline]
    pub fn difference(self, other: ElementSet) -> ElementSet {
        ElementSet(self.0 & !other.0)
    }

    #[inline]
    pub fn is_subset(self, other: ElementSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn with(self, i: usize) -> ElementSet {
        ElementSet(self.0 | 1 << i)
    }

    pub fn without(self, i: usize) -> ElementSet {
        ElementSet(self.0 & !(1 << i))
    }

    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut m = self.0;
        std::iter::from_fn(move || {
            if m == 0 {
                return None;
            }
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        })
    }

    /// Labels of the members in element order.
    pub fn labels(self, host: &BinaryMatroid) -> Vec<String> {
        self.iter().map(|i| host.labels[i].clone()).collect()
    }

    /// Member indices in increasing order; the ordering key used for
    /// deterministic output.
    pub fn indices(self) -> Vec<usize> {
        self.iter().collect()
    }
}

const FORBIDDEN_LABEL_CHARS: &[char] = &['(', ')', '[', ']', ',', ';', '=', '#', '{', '}', '"'];

pub(crate) fn validate_label(label: &str) -> Result<()> {
    if label.is_empty()
        || label
            .chars()
            .any(|c| c.is_whitespace() || c.is_control() || FORBIDDEN_LABEL_CHARS.contains(&c))
    {
        return Err(Error::InvalidLabel(label.to_string()));
    }
    Ok(())
}

/// A binary matroid: an ordered list of labelled columns in a fixed ambient
/// dimension. Parallel columns and zero columns (loops) are allowed.
#[derive(Clone, PartialEq, Eq)]
pub struct BinaryMatroid {
    dim: usize,
    labels: Vec<String>,
    cols: Vec<u64>,
    index: HashMap<String, usize>,
}

impl fmt::Debug for BinaryMatroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut list = f.debug_map();
        for (l, &c) in self.labels.iter().zip(&self.cols) {
            list.entry(l, &GF2Vector::from_raw(c, self.dim).to_string());
        }
        list.finish()
    }
}

impl BinaryMatroid {
    pub fn new(dim: usize, elements: Vec<(String, GF2Vector)>) -> Result<Self> {
        let mut labels = Vec::with_capacity(elements.len());
        let mut cols = Vec::with_capacity(elements.len());
        for (l, v) in elements {
            if v.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: v.dim(),
                });
            }
            labels.push(l);
            cols.push(v.bits());
        }
        Self::from_raw(dim, labels, cols)
    }

    /// Elements labelled `1`, `2`, ... in column order.
    pub fn from_matrix(m: &GF2Matrix) -> Result<Self> {
        let labels = (1..=m.len()).map(|i| i.to_string()).collect();
        Self::from_raw(m.dim(), labels, m.raw())
    }

    pub(crate) fn from_raw(dim: usize, labels: Vec<String>, cols: Vec<u64>) -> Result<Self> {
        if dim > MAX_DIM {
            return Err(Error::DimensionOverflow { dim, max: MAX_DIM });
        }
        if labels.len() > MAX_ELEMENTS {
            return Err(Error::TooManyElements {
                count: labels.len(),
                max: MAX_ELEMENTS,
            });
        }
        debug_assert_eq!(labels.len(), cols.len());
        let mut index = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            validate_label(l)?;
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        if let Some(&c) = cols.iter().find(|&&c| c & !dim_mask(dim) != 0) {
            return Err(Error::InvalidArgument(format!(
                "column {c:#x} has rows beyond dimension {dim}"
            )));
        }
        Ok(BinaryMatroid {
            dim,
            labels,
            cols,
            index,
        })
    }

    pub fn empty(dim: usize) -> Result<Self> {
        Self::from_raw(dim, Vec::new(), Vec::new())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.cols.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.cols.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn column(&self, i: usize) -> GF2Vector {
        GF2Vector::from_raw(self.cols[i], self.dim)
    }

    pub fn columns(&self) -> Vec<GF2Vector> {
        (0..self.len()).map(|i| self.column(i)).collect()
    }

    pub fn matrix(&self) -> GF2Matrix {
        GF2Matrix::from_raw(self.dim, &self.cols)
    }

    #[inline]
    pub(crate) fn raw_cols(&self) -> &[u64] {
        &self.cols
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn ground(&self) -> ElementSet {
        ElementSet::full(self.len())
    }

    /// The element set with the given labels.
    pub fn set<S: AsRef<str>>(&self, labels: &[S]) -> Result<ElementSet> {
        labels.iter().try_fold(ElementSet::EMPTY, |s, l| {
            let l = l.as_ref();
            self.index_of(l)
                .map(|i| s.with(i))
                .ok_or_else(|| Error::UnknownLabel(l.to_string()))
        })
    }

    /// Column sum of the members of `s`.
    pub fn sum_of(&self, s: ElementSet) -> GF2Vector {
        GF2Vector::from_raw(self.raw_sum(s), self.dim)
    }

    #[inline]
    pub(crate) fn raw_sum(&self, s: ElementSet) -> u64 {
        s.iter().fold(0, |acc, i| acc ^ self.cols[i])
    }

    fn check_set(&self, s: ElementSet) -> Result<()> {
        if !s.is_subset(self.ground()) {
            let bad = s.difference(self.ground()).first().unwrap_or(0);
            return Err(Error::UnknownLabel(format!("#{bad}")));
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        gf2::rank_of_mask(&self.cols, self.ground().bits())
    }

    /// Matroid rank of `s`.
    pub fn rank_of(&self, s: ElementSet) -> Result<usize> {
        self.check_set(s)?;
        Ok(self.rank_unchecked(s))
    }

    #[inline]
    pub(crate) fn rank_unchecked(&self, s: ElementSet) -> usize {
        gf2::rank_of_mask(&self.cols, s.bits())
    }

    pub fn is_independent(&self, s: ElementSet) -> Result<bool> {
        Ok(self.rank_of(s)? == s.len())
    }

    /// Whether `s` is a circuit: dependent with every proper subset
    /// independent.
    pub fn is_circuit_set(&self, s: ElementSet) -> Result<bool> {
        self.check_set(s)?;
        if s.is_empty() || self.raw_sum(s) != 0 {
            return Ok(false);
        }
        let k = s.len();
        Ok(self.rank_unchecked(s) == k - 1
            && s.iter().all(|i| self.rank_unchecked(s.without(i)) == k - 1))
    }

    /// All elements whose columns lie in the span of `s`.
    pub fn closure_flat(&self, s: ElementSet) -> Result<ElementSet> {
        self.check_set(s)?;
        let mut basis = XorBasis::new();
        for i in s.iter() {
            basis.insert(self.cols[i]);
        }
        Ok(ElementSet::from_indices(
            (0..self.len()).filter(|&j| basis.contains(self.cols[j])),
        ))
    }

    pub fn is_flat(&self, s: ElementSet) -> Result<bool> {
        Ok(self.closure_flat(s)? == s)
    }

    pub fn loops(&self) -> ElementSet {
        ElementSet::from_indices((0..self.len()).filter(|&i| self.cols[i] == 0))
    }

    pub fn coloops(&self) -> ElementSet {
        let r = self.rank();
        ElementSet::from_indices(
            (0..self.len()).filter(|&i| self.rank_unchecked(self.ground().without(i)) < r),
        )
    }

    /// Non-trivial and trivial parallel classes of non-loop elements, each
    /// ordered by first member.
    pub fn parallel_classes(&self) -> Vec<ElementSet> {
        let mut by_col: Vec<(u64, ElementSet)> = Vec::new();
        for (i, &c) in self.cols.iter().enumerate() {
            if c == 0 {
                continue;
            }
            match by_col.iter_mut().find(|(v, _)| *v == c) {
                Some((_, s)) => *s = s.with(i),
                None => by_col.push((c, ElementSet::singleton(i))),
            }
        }
        by_col.into_iter().map(|(_, s)| s).collect()
    }

    pub fn is_simple(&self) -> bool {
        self.loops().is_empty() && self.parallel_classes().len() == self.len()
    }

    /// All circuits with at most `max_size` elements, ordered by size and
    /// then by member indices.
    ///
    /// Each circuit `C` is found exactly once, as an independent set
    /// `C - m` whose column sum equals the column of `m = max(C)`.
    pub fn circuits(&self, max_size: usize, budget: &Budget) -> Result<Vec<ElementSet>> {
        let mut by_col: HashMap<u64, Vec<usize>> = HashMap::new();
        for (i, &c) in self.cols.iter().enumerate() {
            by_col.entry(c).or_default().push(i);
        }
        let mut out = Vec::new();
        if max_size == 0 {
            return Ok(out);
        }
        let mut basis = XorBasis::new();
        self.circuit_dfs(
            ElementSet::EMPTY,
            0,
            0,
            max_size,
            &by_col,
            &mut basis,
            budget,
            &mut out,
        )?;
        out.sort_by(|a, b| {
            a.len()
                .cmp(&b.len())
                .then_with(|| a.indices().cmp(&b.indices()))
        });
        Ok(out)
    }

    /// All circuits.
    pub fn all_circuits(&self, budget: &Budget) -> Result<Vec<ElementSet>> {
        self.circuits(self.rank() + 1, budget)
    }

    #[allow(clippy::too_many_arguments)]
    fn circuit_dfs(
        &self,
        current: ElementSet,
        sum: u64,
        start: usize,
        max_size: usize,
        by_col: &HashMap<u64, Vec<usize>>,
        basis: &mut XorBasis,
        budget: &Budget,
        out: &mut Vec<ElementSet>,
    ) -> Result<()> {
        budget.charge(1, "circuit enumeration")?;
        if let Some(closers) = by_col.get(&sum) {
            for &m in closers.iter().filter(|&&m| m >= start) {
                out.push(current.with(m));
            }
        }
        if current.len() + 1 >= max_size {
            return Ok(());
        }
        for x in start..self.len() {
            if let Some(p) = basis.insert(self.cols[x]) {
                self.circuit_dfs(
                    current.with(x),
                    sum ^ self.cols[x],
                    x + 1,
                    max_size,
                    by_col,
                    basis,
                    budget,
                    out,
                )?;
                basis.remove(p);
            }
        }
        Ok(())
    }

    /// Circuits as sorted label lists; convenient for comparing matroids on
    /// the same label set.
    pub fn circuit_family(&self, budget: &Budget) -> Result<BTreeSet<Vec<String>>> {
        Ok(self
            .all_circuits(budget)?
            .into_iter()
            .map(|c| {
                let mut l = c.labels(self);
                l.sort();
                l
            })
            .collect())
    }

    /// Whether both matroids have the same labels and the same circuits.
    pub fn same_matroid(&self, other: &BinaryMatroid) -> Result<bool> {
        if self.len() != other.len() {
            return Ok(false);
        }
        // Columns of `other` in the element order of `self`.
        let mut theirs = Vec::with_capacity(self.len());
        for l in &self.labels {
            match other.index_of(l) {
                Some(j) => theirs.push(other.cols[j]),
                None => return Ok(false),
            }
        }
        // Binary matroids are uniquely representable: both agree exactly
        // when a basis of one is a basis of the other and the fundamental
        // circuits, i.e. the coordinates in that basis, coincide.
        let basis = gf2::greedy_basis(&self.cols);
        if gf2::greedy_basis(&theirs).len() != basis.len() {
            return Ok(false);
        }
        let mine = gf2::coordinates(&self.cols, &basis).expect("greedy basis spans");
        Ok(gf2::coordinates(&theirs, &basis).is_some_and(|c| c == mine))
    }

    fn select(&self, keep: ElementSet, map: impl Fn(u64) -> u64, dim: usize) -> BinaryMatroid {
        let labels: Vec<String> = keep.iter().map(|i| self.labels[i].clone()).collect();
        let cols: Vec<u64> = keep.iter().map(|i| map(self.cols[i])).collect();
        BinaryMatroid::from_raw(dim, labels, cols).expect("subset of a valid matroid")
    }

    /// Restriction to `s`.
    pub fn restrict(&self, s: ElementSet) -> Result<BinaryMatroid> {
        self.check_set(s)?;
        Ok(self.select(s, |c| c, self.dim))
    }

    pub fn delete(&self, s: ElementSet) -> Result<BinaryMatroid> {
        self.check_set(s)?;
        Ok(self.select(self.ground().difference(s), |c| c, self.dim))
    }

    /// Contract `s`: project every other column along the span of `s` and
    /// drop the pivot rows. Contracting a loop is the same as deleting it.
    pub fn contract(&self, s: ElementSet) -> Result<BinaryMatroid> {
        self.check_set(s)?;
        let mut basis = XorBasis::new();
        for i in s.iter() {
            basis.insert(self.cols[i]);
        }
        let rows = basis.pivot_rows();
        let dim = self.dim - basis.rank();
        Ok(self.select(
            self.ground().difference(s),
            |c| gf2::drop_rows(basis.reduce_full(c), rows),
            dim,
        ))
    }

    /// Delete loops and keep one element per parallel class: the one with
    /// the lexicographically smallest label. Element order is preserved.
    pub fn simplify(&self) -> BinaryMatroid {
        let keep = self
            .parallel_classes()
            .into_iter()
            .fold(ElementSet::EMPTY, |acc, class| {
                let rep = class
                    .iter()
                    .min_by(|&a, &b| self.labels[a].cmp(&self.labels[b]))
                    .expect("classes are nonempty");
                acc.with(rep)
            });
        self.select(keep, |c| c, self.dim)
    }

    /// The dual matroid on the same labels.
    pub fn dual(&self) -> Result<BinaryMatroid> {
        let d = self.matrix().dual_representation()?;
        BinaryMatroid::from_raw(d.dim(), self.labels.clone(), d.raw())
    }

    /// An equivalent representation in exactly `rank` rows.
    pub fn compact(&self) -> BinaryMatroid {
        let basis = gf2::greedy_basis(&self.cols);
        let coords = gf2::coordinates(&self.cols, &basis).expect("greedy basis spans");
        BinaryMatroid::from_raw(basis.len(), self.labels.clone(), coords)
            .expect("same labels as a valid matroid")
    }

    /// Direct sum with block-diagonal coordinates: `self` in the low rows,
    /// `other` above it.
    pub fn direct_sum(&self, other: &BinaryMatroid) -> Result<BinaryMatroid> {
        if let Some(l) = other.labels.iter().find(|l| self.index.contains_key(*l)) {
            return Err(Error::LabelCollision(l.clone()));
        }
        let (a, b) = if self.dim + other.dim > MAX_DIM {
            (self.compact(), other.compact())
        } else {
            (self.clone(), other.clone())
        };
        let dim = a.dim + b.dim;
        if dim > MAX_DIM {
            return Err(Error::DimensionOverflow { dim, max: MAX_DIM });
        }
        let shift = a.dim;
        let labels = a.labels.iter().chain(&b.labels).cloned().collect();
        let cols = a
            .cols
            .iter()
            .copied()
            .chain(
                b.cols
                    .iter()
                    .map(|&c| if shift == 64 { 0 } else { c << shift }),
            )
            .collect();
        BinaryMatroid::from_raw(dim, labels, cols)
    }

    /// `r(X) + r(Y) - r(X ∪ Y)`.
    pub fn local_connectivity(&self, x: ElementSet, y: ElementSet) -> Result<usize> {
        Ok(self.rank_of(x)? + self.rank_of(y)? - self.rank_of(x.union(y))?)
    }

    /// Connected components, each ordered by its smallest element.
    ///
    /// Two elements share a component exactly when some circuit contains
    /// both; equivalently when they are linked in the bipartite graph of
    /// fundamental circuits with respect to any basis.
    pub fn connected_components(&self) -> Vec<ElementSet> {
        let n = self.len();
        let basis = gf2::greedy_basis(&self.cols);
        let coords = gf2::coordinates(&self.cols, &basis).expect("greedy basis spans");
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let in_basis = ElementSet::from_indices(basis.iter().copied());
        for (j, &c) in coords.iter().enumerate().take(n) {
            if in_basis.contains(j) {
                continue;
            }
            for (k, &b) in basis.iter().enumerate() {
                if c >> k & 1 == 1 {
                    let (rj, rb) = (find(&mut parent, j), find(&mut parent, b));
                    parent[rj.max(rb)] = rj.min(rb);
                }
            }
        }
        let mut comps: Vec<(usize, ElementSet)> = Vec::new();
        for i in 0..n {
            let r = find(&mut parent, i);
            match comps.iter_mut().find(|(root, _)| *root == r) {
                Some((_, s)) => *s = s.with(i),
                None => comps.push((r, ElementSet::singleton(i))),
            }
        }
        let mut out: Vec<ElementSet> = comps.into_iter().map(|(_, s)| s).collect();
        out.sort_by_key(|s| s.first());
        out
    }

    /// Connected in the matroid sense; the empty matroid counts as connected.
    pub fn is_connected(&self) -> bool {
        self.connected_components().len() <= 1
    }

    /// Connected with no exact 2-separation. Ground sets with fewer than four
    /// elements follow the usual convention: they are 3-connected exactly
    /// when connected, since no 2-separation can exist.
    pub fn is_3connected(&self, budget: &Budget) -> Result<bool> {
        if !self.is_connected() {
            return Ok(false);
        }
        Ok(self
            .find_two_separation(SeparationOrder::Forward, budget)?
            .is_none())
    }

    /// Whether `(x, complement)` is an exact 2-separation.
    pub fn is_exact_two_separation(&self, x: ElementSet) -> bool {
        let y = self.ground().difference(x);
        x.len() >= 2
            && y.len() >= 2
            && self.rank_unchecked(x) + self.rank_unchecked(y) == self.rank() + 1
    }

    /// The first exact 2-separating side found, smallest sides first.
    pub fn find_two_separation(
        &self,
        order: SeparationOrder,
        budget: &Budget,
    ) -> Result<Option<ElementSet>> {
        let n = self.len();
        let full_rank = self.rank();
        let perm: Vec<usize> = match order {
            SeparationOrder::Forward => (0..n).collect(),
            SeparationOrder::Reverse => (0..n).rev().collect(),
        };
        for k in 2..=n / 2 {
            let mut found = None;
            for_each_k_subset(n, k, |m| {
                budget.charge(1, "2-separation search")?;
                let x = ElementSet::from_indices(ElementSet(m).iter().map(|i| perm[i]));
                let y = self.ground().difference(x);
                if self.rank_unchecked(x) + self.rank_unchecked(y) == full_rank + 1 {
                    found = Some(x);
                    return Ok(false);
                }
                Ok(true)
            })?;
            if found.is_some() {
                return Ok(found);
            }
        }
        Ok(None)
    }

    /// Rename elements; labels not in `map` are kept.
    pub fn relabel(&self, map: &HashMap<String, String>) -> Result<BinaryMatroid> {
        let labels = self
            .labels
            .iter()
            .map(|l| map.get(l).cloned().unwrap_or_else(|| l.clone()))
            .collect();
        BinaryMatroid::from_raw(self.dim, labels, self.cols.clone())
    }

    /// Append an element.
    pub fn with_element(&self, label: &str, column: GF2Vector) -> Result<BinaryMatroid> {
        if column.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: column.dim(),
            });
        }
        let mut labels = self.labels.clone();
        let mut cols = self.cols.clone();
        labels.push(label.to_string());
        cols.push(column.bits());
        BinaryMatroid::from_raw(self.dim, labels, cols)
    }

    /// A label not yet used, derived from `base`.
    pub fn fresh_label(&self, base: &str) -> String {
        if !self.index.contains_key(base) {
            return base.to_string();
        }
        (1..)
            .map(|k| format!("{base}_{k}"))
            .find(|l| !self.index.contains_key(l))
            .expect("unbounded counter")
    }
}

/// Enumeration order for separation searches. Two orders let callers check
/// that results do not depend on which separation is found first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SeparationOrder {
    #[default]
    Forward,
    Reverse,
}

/// Visit every `k`-subset of `0..n` as a bit mask in increasing numeric
/// order (Gosper's hack). The visitor returns `Ok(false)` to stop early.
pub(crate) fn for_each_k_subset(
    n: usize,
    k: usize,
    mut visit: impl FnMut(u64) -> Result<bool>,
) -> Result<()> {
    if k > n || n > 64 {
        return Ok(());
    }
    if k == 0 {
        visit(0)?;
        return Ok(());
    }
    let limit = dim_mask(n);
    let mut m: u64 = dim_mask(k);
    loop {
        if !visit(m)? {
            return Ok(());
        }
        let c = m & m.wrapping_neg();
        let r = m.wrapping_add(c);
        // Carry out of bit 63: the ones were already packed at the top.
        if r == 0 {
            return Ok(());
        }
        let next = (((r ^ m) >> 2) / c) | r;
        if next & !limit != 0 {
            return Ok(());
        }
        m = next;
    }
}
