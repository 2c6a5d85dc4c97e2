//! Sparse exact-rational linear algebra.
//!
//! Vectors are sorted coordinate lists, matrices are column lists. The one
//! nontrivial algorithm is [`SpanReducer`], an incremental row-echelon form
//! over ℚ used for every quotient in the crate (coequalizers, coinvariants,
//! relation saturation, envelope layers).
//!
//! Pivot convention: a row's pivot is its *highest* nonzero coordinate, so
//! the surviving quotient basis consists of the *lowest*-index labels. For
//! weight-ordered bases this keeps canonical representatives at low weight,
//! which is what lets quotient structure maps stay inside truncation caps.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use num_traits::{One, Zero};

use crate::rational::Q;

/// Sparse vector: strictly increasing indices, nonzero entries.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SparseVec {
    pub entries: Vec<(usize, Q)>,
}

impl SparseVec {
    pub fn zero() -> Self {
        SparseVec { entries: Vec::new() }
    }

    pub fn unit(i: usize) -> Self {
        SparseVec { entries: vec![(i, Q::one())] }
    }

    pub fn scaled_unit(i: usize, c: Q) -> Self {
        if c.is_zero() {
            SparseVec::zero()
        } else {
            SparseVec { entries: vec![(i, c)] }
        }
    }

    pub fn from_entries(mut entries: Vec<(usize, Q)>) -> Self {
        entries.retain(|(_, c)| !c.is_zero());
        entries.sort_by_key(|(i, _)| *i);
        let mut out: Vec<(usize, Q)> = Vec::with_capacity(entries.len());
        for (i, c) in entries {
            match out.last_mut() {
                Some((j, acc)) if *j == i => *acc += c,
                _ => out.push((i, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        SparseVec { entries: out }
    }

    pub fn from_dense(dense: &[Q]) -> Self {
        SparseVec {
            entries: dense
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i, c.clone()))
                .collect(),
        }
    }

    pub fn to_dense(&self, dim: usize) -> Vec<Q> {
        let mut out = vec![Q::zero(); dim];
        for (i, c) in &self.entries {
            out[*i] = c.clone();
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// Highest nonzero coordinate (the pivot position).
    pub fn lead(&self) -> Option<(usize, &Q)> {
        self.entries.last().map(|(i, c)| (*i, c))
    }

    pub fn get(&self, i: usize) -> Option<&Q> {
        self.entries
            .binary_search_by_key(&i, |(j, _)| *j)
            .ok()
            .map(|k| &self.entries[k].1)
    }

    pub fn scale(&self, c: &Q) -> SparseVec {
        if c.is_zero() {
            return SparseVec::zero();
        }
        SparseVec {
            entries: self.entries.iter().map(|(i, x)| (*i, x * c)).collect(),
        }
    }

    /// `self + c * other`, merging sorted coordinate lists.
    pub fn axpy(&self, c: &Q, other: &SparseVec) -> SparseVec {
        if c.is_zero() || other.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (0usize, 0usize);
        while a < self.entries.len() && b < other.entries.len() {
            let (ia, ca) = &self.entries[a];
            let (ib, cb) = &other.entries[b];
            match ia.cmp(ib) {
                core::cmp::Ordering::Less => {
                    out.push((*ia, ca.clone()));
                    a += 1;
                }
                core::cmp::Ordering::Greater => {
                    out.push((*ib, cb * c));
                    b += 1;
                }
                core::cmp::Ordering::Equal => {
                    let v = ca + &(cb * c);
                    if !v.is_zero() {
                        out.push((*ia, v));
                    }
                    a += 1;
                    b += 1;
                }
            }
        }
        out.extend(self.entries[a..].iter().cloned());
        out.extend(other.entries[b..].iter().map(|(i, cb)| (*i, cb * c)));
        SparseVec { entries: out }
    }

    pub fn add(&self, other: &SparseVec) -> SparseVec {
        self.axpy(&Q::one(), other)
    }

    pub fn sub(&self, other: &SparseVec) -> SparseVec {
        self.axpy(&-Q::one(), other)
    }

    /// Re-index entries through `map`; entries mapped to `None` are dropped.
    pub fn map_indices(&self, map: impl Fn(usize) -> Option<usize>) -> SparseVec {
        SparseVec::from_entries(
            self.entries
                .iter()
                .filter_map(|(i, c)| map(*i).map(|j| (j, c.clone())))
                .collect(),
        )
    }
}

/// Sparse matrix stored by columns; `cols[j]` is the image of basis vector `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMat {
    pub nrows: usize,
    pub cols: Vec<SparseVec>,
}

impl SparseMat {
    pub fn zero(nrows: usize, ncols: usize) -> Self {
        SparseMat { nrows, cols: vec![SparseVec::zero(); ncols] }
    }

    pub fn identity(n: usize) -> Self {
        SparseMat { nrows: n, cols: (0..n).map(SparseVec::unit).collect() }
    }

    pub fn from_cols(nrows: usize, cols: Vec<SparseVec>) -> Self {
        SparseMat { nrows, cols }
    }

    /// Dense row-major construction (row index first).
    pub fn from_rows(rows: &[Vec<Q>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut cols = vec![Vec::new(); ncols];
        for (r, row) in rows.iter().enumerate() {
            for (c, x) in row.iter().enumerate() {
                if !x.is_zero() {
                    cols[c].push((r, x.clone()));
                }
            }
        }
        SparseMat {
            nrows,
            cols: cols.into_iter().map(|e| SparseVec { entries: e }).collect(),
        }
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn col(&self, j: usize) -> &SparseVec {
        &self.cols[j]
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::zero();
        for (j, c) in &v.entries {
            out = out.axpy(c, &self.cols[*j]);
        }
        out
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &SparseMat) -> SparseMat {
        debug_assert_eq!(self.ncols(), other.nrows);
        SparseMat {
            nrows: self.nrows,
            cols: other.cols.iter().map(|c| self.apply(c)).collect(),
        }
    }

    pub fn add(&self, other: &SparseMat) -> SparseMat {
        debug_assert_eq!(self.nrows, other.nrows);
        debug_assert_eq!(self.ncols(), other.ncols());
        SparseMat {
            nrows: self.nrows,
            cols: self
                .cols
                .iter()
                .zip(&other.cols)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &SparseMat) -> SparseMat {
        SparseMat {
            nrows: self.nrows,
            cols: self
                .cols
                .iter()
                .zip(&other.cols)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(SparseVec::is_zero)
    }

    pub fn transpose(&self) -> SparseMat {
        let mut cols = vec![Vec::new(); self.nrows];
        for (j, col) in self.cols.iter().enumerate() {
            for (i, c) in &col.entries {
                cols[*i].push((j, c.clone()));
            }
        }
        SparseMat {
            nrows: self.ncols(),
            cols: cols.into_iter().map(|e| SparseVec { entries: e }).collect(),
        }
    }

    /// Kronecker product; index `(i, j) ↦ i * other.dim + j` on both sides.
    pub fn kron(&self, other: &SparseMat) -> SparseMat {
        let nrows = self.nrows * other.nrows;
        let mut cols = Vec::with_capacity(self.ncols() * other.ncols());
        for a in &self.cols {
            for b in &other.cols {
                let mut entries = Vec::with_capacity(a.nnz() * b.nnz());
                for (i, ca) in &a.entries {
                    for (j, cb) in &b.entries {
                        entries.push((i * other.nrows + j, ca * cb));
                    }
                }
                cols.push(SparseVec::from_entries(entries));
            }
        }
        SparseMat { nrows, cols }
    }

    /// If every column is a single `+1` entry, return the underlying map of
    /// basis indices. Composition-heavy checks use this fast path.
    pub fn as_basis_map(&self) -> Option<Vec<usize>> {
        let mut out = Vec::with_capacity(self.ncols());
        for c in &self.cols {
            match c.entries.as_slice() {
                [(i, one)] if one.is_one() => out.push(*i),
                _ => return None,
            }
        }
        Some(out)
    }

    pub fn rank(&self) -> usize {
        let mut red = SpanReducer::new(self.nrows);
        for c in &self.cols {
            red.insert(c.clone());
        }
        red.rank()
    }

    /// Exact inverse of a square matrix, if it exists.
    pub fn inverse(&self) -> Option<SparseMat> {
        if self.nrows != self.ncols() {
            return None;
        }
        let n = self.nrows;
        // Gauss-Jordan on dense columns of the augmented system.
        let mut a: Vec<Vec<Q>> = (0..n).map(|j| self.cols[j].to_dense(n)).collect();
        let mut inv: Vec<Vec<Q>> = (0..n)
            .map(|j| {
                let mut e = vec![Q::zero(); n];
                e[j] = Q::one();
                e
            })
            .collect();
        // a[j][i]: column j, row i. Eliminate row by row.
        for row in 0..n {
            let piv = (row..n).find(|&j| !a[j][row].is_zero())?;
            a.swap(row, piv);
            inv.swap(row, piv);
            let d = a[row][row].clone();
            for i in 0..n {
                a[row][i] = &a[row][i] / &d;
                inv[row][i] = &inv[row][i] / &d;
            }
            for j in 0..n {
                if j != row && !a[j][row].is_zero() {
                    let f = a[j][row].clone();
                    for i in 0..n {
                        let s = &a[row][i] * &f;
                        a[j][i] = &a[j][i] - &s;
                        let s = &inv[row][i] * &f;
                        inv[j][i] = &inv[j][i] - &s;
                    }
                }
            }
        }
        // The loop above reduced the *column* list as if rows; verify exactly.
        let cand = SparseMat {
            nrows: n,
            cols: inv.into_iter().map(|c| SparseVec::from_dense(&c)).collect(),
        };
        let id = SparseMat::identity(n);
        if self.compose(&cand) == id && cand.compose(self) == id {
            Some(cand)
        } else {
            None
        }
    }
}

/// Incremental reduced row-echelon form over ℚ with highest-index pivots.
#[derive(Debug, Clone)]
pub struct SpanReducer {
    dim: usize,
    /// pivot column -> normalized row (pivot coefficient 1).
    rows: BTreeMap<usize, SparseVec>,
}

impl SpanReducer {
    pub fn new(dim: usize) -> Self {
        SpanReducer { dim, rows: BTreeMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduce `v` against the current span without inserting it.
    pub fn reduce(&self, mut v: SparseVec) -> SparseVec {
        while let Some((lead, c)) = v.lead() {
            match self.rows.get(&lead) {
                Some(row) => {
                    let c = -c.clone();
                    v = v.axpy(&c, row);
                }
                None => break,
            }
        }
        v
    }

    /// Insert a vector into the span. Returns true if it enlarged the span.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let v = self.reduce(v);
        match v.lead() {
            None => false,
            Some((lead, c)) => {
                let inv = Q::one() / c.clone();
                let v = v.scale(&inv);
                self.rows.insert(lead, v);
                true
            }
        }
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v.clone()).is_zero()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    /// Finish reduction and build the quotient of the ambient space by the
    /// accumulated span.
    pub fn into_quotient(mut self) -> Quotient {
        // Full back-substitution: each pivot row may only mention non-pivot
        // columns besides its own pivot. Work top pivot down.
        let pivot_list: Vec<usize> = self.rows.keys().copied().collect();
        for &p in pivot_list.iter().rev() {
            let row = self.rows.remove(&p).unwrap();
            let mut row = row;
            loop {
                let mut hit = None;
                for (i, c) in row.entries.iter().rev() {
                    if *i != p && self.rows.contains_key(i) {
                        hit = Some((*i, c.clone()));
                        break;
                    }
                }
                match hit {
                    None => break,
                    Some((i, c)) => {
                        let other = self.rows.get(&i).unwrap().clone();
                        row = row.axpy(&-c, &other);
                    }
                }
            }
            self.rows.insert(p, row);
        }
        let mut basis = Vec::with_capacity(self.dim - self.rows.len());
        let mut pos_of = vec![usize::MAX; self.dim];
        for i in 0..self.dim {
            if !self.rows.contains_key(&i) {
                pos_of[i] = basis.len();
                basis.push(i);
            }
        }
        // Projection columns: basis label -> class vector.
        let mut proj_cols = vec![SparseVec::zero(); self.dim];
        for (pos, &i) in basis.iter().enumerate() {
            proj_cols[i] = SparseVec::unit(pos);
        }
        for (&p, row) in &self.rows {
            // e_p ≡ -Σ_{c != p} row_c e_c  with all c non-pivot after back-substitution.
            let mut entries = Vec::new();
            for (i, c) in &row.entries {
                if *i != p {
                    debug_assert_ne!(pos_of[*i], usize::MAX);
                    entries.push((pos_of[*i], -c.clone()));
                }
            }
            proj_cols[p] = SparseVec::from_entries(entries);
        }
        Quotient {
            dim: self.dim,
            basis,
            projection: SparseMat { nrows: self.dim - self.rows.len(), cols: proj_cols },
        }
    }
}

/// A quotient of ℚ^dim by a subspace, with a canonical basis given by the
/// surviving (non-pivot) coordinate labels of the ambient space.
#[derive(Debug, Clone)]
pub struct Quotient {
    /// Ambient dimension.
    pub dim: usize,
    /// Ambient index of each quotient basis vector (strictly increasing).
    pub basis: Vec<usize>,
    /// Ambient -> quotient, dim columns.
    pub projection: SparseMat,
}

impl Quotient {
    pub fn qdim(&self) -> usize {
        self.basis.len()
    }

    pub fn project(&self, v: &SparseVec) -> SparseVec {
        self.projection.apply(v)
    }

    /// Canonical section: quotient basis vector -> ambient basis vector.
    pub fn rep(&self, class: usize) -> usize {
        self.basis[class]
    }

    pub fn section(&self) -> SparseMat {
        SparseMat {
            nrows: self.dim,
            cols: self.basis.iter().map(|&i| SparseVec::unit(i)).collect(),
        }
    }

    pub fn identity(dim: usize) -> Quotient {
        Quotient {
            dim,
            basis: (0..dim).collect(),
            projection: SparseMat::identity(dim),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q_int, q_ratio};

    #[test]
    fn axpy_merges_and_cancels() {
        let a = SparseVec::from_entries(vec![(0, q_int(1)), (2, q_int(3))]);
        let b = SparseVec::from_entries(vec![(0, q_int(-1)), (1, q_int(2))]);
        let c = a.axpy(&q_int(1), &b);
        assert_eq!(c.entries, vec![(1, q_int(2)), (2, q_int(3))]);
    }

    #[test]
    fn quotient_by_difference_of_units() {
        // span{e0 - e1} in dim 3: pivot at index 1, basis keeps {0, 2}.
        let mut red = SpanReducer::new(3);
        red.insert(SparseVec::from_entries(vec![(0, q_int(1)), (1, q_int(-1))]));
        let q = red.into_quotient();
        assert_eq!(q.basis, vec![0, 2]);
        let p0 = q.project(&SparseVec::unit(0));
        let p1 = q.project(&SparseVec::unit(1));
        assert_eq!(p0, p1);
    }

    #[test]
    fn back_substitution_gives_reduced_projection() {
        // rows x2 - x1, x3 - x2 in dim 4 -> classes of 1,2,3 all equal e(pos of 1).
        let mut red = SpanReducer::new(4);
        red.insert(SparseVec::from_entries(vec![(2, q_int(1)), (1, q_int(-1))]));
        red.insert(SparseVec::from_entries(vec![(3, q_int(1)), (2, q_int(-1))]));
        let q = red.into_quotient();
        assert_eq!(q.basis, vec![0, 1]);
        for i in 1..4 {
            assert_eq!(q.project(&SparseVec::unit(i)), SparseVec::unit(1));
        }
    }

    #[test]
    fn inverse_of_small_matrix() {
        let m = SparseMat::from_rows(&[
            vec![q_int(1), q_int(2)],
            vec![q_int(3), q_ratio(7, 2)],
        ]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.compose(&inv), SparseMat::identity(2));
        let sing = SparseMat::from_rows(&[
            vec![q_int(1), q_int(2)],
            vec![q_int(2), q_int(4)],
        ]);
        assert!(sing.inverse().is_none());
    }

    #[test]
    fn kron_indexing_is_lexicographic() {
        let a = SparseMat::identity(2);
        let b = SparseMat::from_rows(&[vec![q_int(0), q_int(1)], vec![q_int(1), q_int(0)]]);
        let k = a.kron(&b);
        // column (i=1, j=0) -> index 2; image should be (1, 1) -> index 3.
        assert_eq!(k.col(2), &SparseVec::unit(3));
    }
}
