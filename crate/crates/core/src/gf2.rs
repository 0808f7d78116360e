//! Bit-packed GF(2) vectors and column matrices.
//!
//! A vector of dimension `d` is a single `u64` whose bit `i` holds row
//! `i + 1`. Rows above `d` are always zero. Elimination uses the lowest set
//! bit of a vector as its pivot, which keeps every reduction deterministic.

use std::fmt;
use std::ops::{BitXor, BitXorAssign};

use crate::error::{Error, Result};

/// Largest supported ambient dimension.
pub const MAX_DIM: usize = 64;

#[inline]
pub(crate) fn dim_mask(dim: usize) -> u64 {
    if dim >= 64 {
        u64::MAX
    } else {
        (1u64 << dim) - 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GF2Vector {
    bits: u64,
    dim: u8,
}

impl GF2Vector {
    pub fn new(bits: u64, dim: usize) -> Result<Self> {
        if dim > MAX_DIM {
            return Err(Error::DimensionOverflow { dim, max: MAX_DIM });
        }
        if bits & !dim_mask(dim) != 0 {
            return Err(Error::InvalidArgument(format!(
                "bit pattern {bits:#x} has rows beyond dimension {dim}"
            )));
        }
        Ok(GF2Vector {
            bits,
            dim: dim as u8,
        })
    }

    /// Caller guarantees `dim <= 64` and no stray high bits.
    #[inline]
    pub(crate) fn from_raw(bits: u64, dim: usize) -> Self {
        debug_assert!(dim <= MAX_DIM && bits & !dim_mask(dim) == 0);
        GF2Vector {
            bits,
            dim: dim as u8,
        }
    }

    pub fn zero(dim: usize) -> Result<Self> {
        Self::new(0, dim)
    }

    /// The unit vector with a one in row `row` (0-based).
    pub fn unit(row: usize, dim: usize) -> Result<Self> {
        if row >= dim {
            return Err(Error::InvalidArgument(format!(
                "row {row} outside dimension {dim}"
            )));
        }
        Self::new(1u64 << row, dim)
    }

    #[inline]
    pub fn bits(&self) -> u64 {
        self.bits
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    #[inline]
    pub fn weight(&self) -> usize {
        self.bits.count_ones() as usize
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    /// Entry in row `row` (0-based).
    #[inline]
    pub fn get(&self, row: usize) -> bool {
        row < self.dim() && (self.bits >> row) & 1 == 1
    }

    /// Number of coordinates in which the two vectors differ.
    pub fn distance(&self, other: &GF2Vector) -> Result<usize> {
        check_dim(self.dim(), other.dim())?;
        Ok((self.bits ^ other.bits).count_ones() as usize)
    }

    pub fn checked_add(&self, other: &GF2Vector) -> Result<GF2Vector> {
        check_dim(self.dim(), other.dim())?;
        Ok(GF2Vector::from_raw(self.bits ^ other.bits, self.dim()))
    }

    /// Parse a row string such as `"110000"`, row 1 first.
    pub fn parse_rows(s: &str) -> Result<Self> {
        let dim = s.chars().count();
        if dim > MAX_DIM {
            return Err(Error::DimensionOverflow { dim, max: MAX_DIM });
        }
        let mut bits = 0u64;
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => bits |= 1 << i,
                _ => {
                    return Err(Error::InvalidArgument(format!(
                        "`{c}` is not a binary digit"
                    )))
                }
            }
        }
        Ok(GF2Vector::from_raw(bits, dim))
    }
}

/// Row string, row 1 first.
impl fmt::Display for GF2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim() {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Panics on a dimension mismatch; use [`GF2Vector::checked_add`] otherwise.
impl BitXor for GF2Vector {
    type Output = GF2Vector;

    fn bitxor(self, rhs: GF2Vector) -> GF2Vector {
        assert_eq!(self.dim, rhs.dim, "adding vectors of different dimension");
        GF2Vector::from_raw(self.bits ^ rhs.bits, self.dim())
    }
}

impl BitXorAssign for GF2Vector {
    fn bitxor_assign(&mut self, rhs: GF2Vector) {
        *self = *self ^ rhs;
    }
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

fn common_dim(cols: &[GF2Vector]) -> Result<Option<usize>> {
    let Some(first) = cols.first() else {
        return Ok(None);
    };
    for c in cols {
        check_dim(first.dim(), c.dim())?;
    }
    Ok(Some(first.dim()))
}

/// Incremental row-space basis with lowest-bit pivots.
///
/// `pivots[p]`, when nonzero, is a stored vector whose lowest set bit is `p`.
#[derive(Clone)]
pub(crate) struct XorBasis {
    pivots: [u64; 64],
    occupied: u64,
}

impl XorBasis {
    pub(crate) fn new() -> Self {
        XorBasis {
            pivots: [0; 64],
            occupied: 0,
        }
    }

    #[inline]
    pub(crate) fn rank(&self) -> usize {
        self.occupied.count_ones() as usize
    }

    /// Bit mask of pivot rows.
    #[inline]
    pub(crate) fn pivot_rows(&self) -> u64 {
        self.occupied
    }

    /// Reduce `v` until its lowest bit is not a pivot, or it vanishes.
    #[inline]
    pub(crate) fn reduce_lowest(&self, mut v: u64) -> u64 {
        while v != 0 {
            let p = v.trailing_zeros() as usize;
            if self.occupied >> p & 1 == 0 {
                break;
            }
            v ^= self.pivots[p];
        }
        v
    }

    /// Reduce `v` so that no pivot row remains set.
    pub(crate) fn reduce_full(&self, mut v: u64) -> u64 {
        let mut hits = v & self.occupied;
        while hits != 0 {
            let p = hits.trailing_zeros() as usize;
            v ^= self.pivots[p];
            // Only rows above p can change.
            hits = v & self.occupied & !((2u64 << p).wrapping_sub(1));
        }
        v
    }

    #[inline]
    pub(crate) fn contains(&self, v: u64) -> bool {
        self.reduce_lowest(v) == 0
    }

    /// Insert `v`; returns the new pivot row, or `None` if `v` was dependent.
    #[inline]
    pub(crate) fn insert(&mut self, v: u64) -> Option<usize> {
        let r = self.reduce_lowest(v);
        if r == 0 {
            return None;
        }
        let p = r.trailing_zeros() as usize;
        self.pivots[p] = r;
        self.occupied |= 1 << p;
        Some(p)
    }

    /// Undo an insertion that returned `Some(p)`. Only valid in LIFO order.
    #[inline]
    pub(crate) fn remove(&mut self, p: usize) {
        self.occupied &= !(1 << p);
        self.pivots[p] = 0;
    }
}

/// Rank of the columns selected by `mask` (bit `i` selects `cols[i]`).
pub(crate) fn rank_of_mask(cols: &[u64], mask: u64) -> usize {
    let mut basis = XorBasis::new();
    let mut m = mask;
    while m != 0 {
        let i = m.trailing_zeros() as usize;
        m &= m - 1;
        basis.insert(cols[i]);
    }
    basis.rank()
}

/// Drop the rows in `rows` from `v`, shifting the remaining rows down.
pub(crate) fn drop_rows(v: u64, rows: u64) -> u64 {
    let mut out = 0u64;
    let mut k = 0;
    for i in 0..64 {
        if rows >> i & 1 == 1 {
            continue;
        }
        if v >> i & 1 == 1 {
            out |= 1 << k;
        }
        k += 1;
    }
    out
}

/// Coordinates of every column with respect to the columns at `basis`.
///
/// Bit `k` of the result for column `j` is the coefficient of
/// `cols[basis[k]]`. Returns `None` if `basis` is dependent or fails to
/// span all of `cols`.
pub(crate) fn coordinates(cols: &[u64], basis: &[usize]) -> Option<Vec<u64>> {
    // (vector, combination) pairs with lowest-bit pivots.
    let mut rows: Vec<(u64, u64)> = Vec::with_capacity(basis.len());
    let reduce = |rows: &[(u64, u64)], mut v: u64| -> (u64, u64) {
        let mut combo = 0u64;
        loop {
            if v == 0 {
                break;
            }
            let p = v.trailing_zeros();
            match rows.iter().find(|(r, _)| r.trailing_zeros() == p) {
                Some(&(r, c)) => {
                    v ^= r;
                    combo ^= c;
                }
                None => break,
            }
        }
        (v, combo)
    };
    for (k, &b) in basis.iter().enumerate() {
        let (v, combo) = reduce(&rows, cols[b]);
        if v == 0 {
            return None;
        }
        rows.push((v, combo ^ (1 << k)));
    }
    cols.iter()
        .map(|&c| {
            let (v, combo) = reduce(&rows, c);
            (v == 0).then_some(combo)
        })
        .collect()
}

/// Greedy basis: the lexicographically first maximal independent set.
pub(crate) fn greedy_basis(cols: &[u64]) -> Vec<usize> {
    let mut basis = XorBasis::new();
    cols.iter()
        .enumerate()
        .filter(|(_, &c)| basis.insert(c).is_some())
        .map(|(i, _)| i)
        .collect()
}

/// Dimension of the span of `cols`; 0 for no columns.
pub fn rank(cols: &[GF2Vector]) -> Result<usize> {
    common_dim(cols)?;
    let mut basis = XorBasis::new();
    for c in cols {
        basis.insert(c.bits);
    }
    Ok(basis.rank())
}

/// Whether `v` is a GF(2) combination of `cols`.
pub fn in_span(v: &GF2Vector, cols: &[GF2Vector]) -> Result<bool> {
    if let Some(d) = common_dim(cols)? {
        check_dim(d, v.dim())?;
    }
    let mut basis = XorBasis::new();
    for c in cols {
        basis.insert(c.bits);
    }
    Ok(basis.contains(v.bits))
}

/// An ordered list of columns of one common dimension.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GF2Matrix {
    dim: usize,
    columns: Vec<GF2Vector>,
}

impl GF2Matrix {
    pub fn new(dim: usize, columns: Vec<GF2Vector>) -> Result<Self> {
        if dim > MAX_DIM {
            return Err(Error::DimensionOverflow { dim, max: MAX_DIM });
        }
        for c in &columns {
            check_dim(dim, c.dim())?;
        }
        Ok(GF2Matrix { dim, columns })
    }

    pub(crate) fn from_raw(dim: usize, cols: &[u64]) -> Self {
        GF2Matrix {
            dim,
            columns: cols.iter().map(|&b| GF2Vector::from_raw(b, dim)).collect(),
        }
    }

    pub(crate) fn raw(&self) -> Vec<u64> {
        self.columns.iter().map(|c| c.bits).collect()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn columns(&self) -> &[GF2Vector] {
        &self.columns
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn rank(&self) -> usize {
        rank_of_mask(&self.raw(), dim_mask(self.len()))
    }

    /// Row-reduce so that the columns at `basis_idx` become the standard unit
    /// vectors, in order. The result has one row per basis column.
    pub fn standard_form(&self, basis_idx: &[usize]) -> Result<GF2Matrix> {
        if let Some(&bad) = basis_idx.iter().find(|&&i| i >= self.len()) {
            return Err(Error::InvalidArgument(format!(
                "column index {bad} out of range"
            )));
        }
        let coords = coordinates(&self.raw(), basis_idx).ok_or(Error::InvalidBasis)?;
        Ok(GF2Matrix::from_raw(basis_idx.len(), &coords))
    }

    /// A representation of the dual matroid on the same ordered columns.
    ///
    /// With the greedy basis `B` and standard form `[I | D]`, the dual is
    /// `[D^T | I]`: column `j` of `B` becomes row `j` of `D`, and the `t`-th
    /// non-basis column becomes the `t`-th unit vector. Zero columns are
    /// never basis columns, so they come out as coloops.
    pub fn dual_representation(&self) -> Result<GF2Matrix> {
        let cols = self.raw();
        let basis = greedy_basis(&cols);
        let n = cols.len();
        let dual_dim = n - basis.len();
        if dual_dim > MAX_DIM {
            return Err(Error::DimensionOverflow {
                dim: dual_dim,
                max: MAX_DIM,
            });
        }
        let coords = coordinates(&cols, &basis).expect("greedy basis spans");
        let mut in_basis = vec![None; n];
        for (k, &b) in basis.iter().enumerate() {
            in_basis[b] = Some(k);
        }
        let non_basis: Vec<usize> = (0..n).filter(|&j| in_basis[j].is_none()).collect();
        let mut out = vec![0u64; n];
        for (t, &j) in non_basis.iter().enumerate() {
            out[j] = 1 << t;
        }
        for (k, &b) in basis.iter().enumerate() {
            let mut v = 0u64;
            for (t, &j) in non_basis.iter().enumerate() {
                if coords[j] >> k & 1 == 1 {
                    v |= 1 << t;
                }
            }
            out[b] = v;
        }
        Ok(GF2Matrix::from_raw(dual_dim, &out))
    }
}
