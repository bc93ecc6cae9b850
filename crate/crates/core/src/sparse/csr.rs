//! CSR storage with a shareable sparsity pattern.
//!
//! Assembly reuses one pattern per finite element space, so repeated
//! assemblies (one filter matrix per time step) only write values.

use crate::error::{Error, Result};
use crate::scalar::Real;
use std::sync::Arc;

/// Structure of a CSR matrix: row offsets and sorted, unique column indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsityPattern {
    pub row_offsets: Vec<usize>,
    pub col_indices: Vec<usize>,
    pub ncols: usize,
}

impl SparsityPattern {
    /// Build from per-row column lists (must be sorted and unique) for a
    /// square matrix.
    pub fn from_rows(rows: &[Vec<usize>]) -> Self {
        let mut row_offsets = Vec::with_capacity(rows.len() + 1);
        row_offsets.push(0);
        let nnz = rows.iter().map(Vec::len).sum();
        let mut col_indices = Vec::with_capacity(nnz);
        for row in rows {
            debug_assert!(row.windows(2).all(|w| w[0] < w[1]));
            col_indices.extend_from_slice(row);
            row_offsets.push(col_indices.len());
        }
        Self {
            row_offsets,
            col_indices,
            ncols: rows.len(),
        }
    }

    pub fn nrows(&self) -> usize {
        self.row_offsets.len() - 1
    }

    pub fn nnz(&self) -> usize {
        self.col_indices.len()
    }

    pub fn row_cols(&self, i: usize) -> &[usize] {
        &self.col_indices[self.row_offsets[i]..self.row_offsets[i + 1]]
    }

    /// Flat index of entry (i, j), if present.
    pub fn position(&self, i: usize, j: usize) -> Option<usize> {
        let start = self.row_offsets[i];
        let cols = &self.col_indices[start..self.row_offsets[i + 1]];
        cols.binary_search(&j).ok().map(|k| start + k)
    }
}

/// Square or rectangular CSR matrix.
#[derive(Debug, Clone)]
pub struct CsrMatrix<T> {
    pattern: Arc<SparsityPattern>,
    values: Vec<T>,
}

impl<T: Real> CsrMatrix<T> {
    /// All-zero matrix over an existing pattern.
    pub fn zeros_on(pattern: Arc<SparsityPattern>) -> Self {
        let nnz = pattern.nnz();
        Self {
            pattern,
            values: vec![T::zero(); nnz],
        }
    }

    /// Build from (row, col, value) triplets; duplicate entries are summed.
    pub fn from_triplets(
        nrows: usize,
        ncols: usize,
        triplets: &[(usize, usize, T)],
    ) -> Result<Self> {
        for &(i, j, _) in triplets {
            if i >= nrows || j >= ncols {
                return Err(Error::invalid(format!(
                    "triplet ({i}, {j}) outside {nrows}x{ncols} matrix"
                )));
            }
        }
        let mut sorted: Vec<_> = triplets.to_vec();
        sorted.sort_unstable_by_key(|&(i, j, _)| (i, j));
        let mut entries: Vec<(usize, usize, T)> = Vec::with_capacity(sorted.len());
        for (i, j, v) in sorted {
            match entries.last_mut() {
                Some(last) if last.0 == i && last.1 == j => last.2 += v,
                _ => entries.push((i, j, v)),
            }
        }
        let mut row_offsets = vec![0usize; nrows + 1];
        for &(i, _, _) in &entries {
            row_offsets[i + 1] += 1;
        }
        for i in 0..nrows {
            row_offsets[i + 1] += row_offsets[i];
        }
        let col_indices = entries.iter().map(|e| e.1).collect();
        let values = entries.iter().map(|e| e.2).collect();
        Ok(Self {
            pattern: Arc::new(SparsityPattern {
                row_offsets,
                col_indices,
                ncols,
            }),
            values,
        })
    }

    pub fn nrows(&self) -> usize {
        self.pattern.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.pattern.ncols
    }

    pub fn pattern(&self) -> &Arc<SparsityPattern> {
        &self.pattern
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [T] {
        &mut self.values
    }

    pub fn row(&self, i: usize) -> (&[usize], &[T]) {
        let r = self.pattern.row_offsets[i]..self.pattern.row_offsets[i + 1];
        (&self.pattern.col_indices[r.clone()], &self.values[r])
    }

    /// Add `v` to entry (i, j), which must exist in the pattern.
    pub fn add_at(&mut self, i: usize, j: usize, v: T) {
        let pos = self
            .pattern
            .position(i, j)
            .unwrap_or_else(|| panic!("entry ({i}, {j}) not in sparsity pattern"));
        self.values[pos] += v;
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.pattern
            .position(i, j)
            .map_or_else(T::zero, |p| self.values[p])
    }

    /// `self += other`, requiring the two matrices to share one pattern.
    pub fn add_assign_same_pattern(&mut self, other: &CsrMatrix<T>) {
        assert!(
            Arc::ptr_eq(&self.pattern, &other.pattern) || self.pattern == other.pattern,
            "matrices must share a sparsity pattern"
        );
        for (a, &b) in self.values.iter_mut().zip(&other.values) {
            *a += b;
        }
    }

    /// y = A x.
    pub fn spmv(&self, x: &[T]) -> Result<Vec<T>> {
        if x.len() != self.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "spmv: matrix has {} columns, vector has {} entries",
                self.ncols(),
                x.len()
            )));
        }
        let mut y = vec![T::zero(); self.nrows()];
        self.spmv_into(x, &mut y);
        Ok(y)
    }

    /// y = A x without allocation; dimensions must already match.
    pub fn spmv_into(&self, x: &[T], y: &mut [T]) {
        debug_assert_eq!(x.len(), self.ncols());
        debug_assert_eq!(y.len(), self.nrows());
        let offs = &self.pattern.row_offsets;
        let cols = &self.pattern.col_indices;
        for (i, yi) in y.iter_mut().enumerate() {
            let mut acc = T::zero();
            for k in offs[i]..offs[i + 1] {
                acc += self.values[k] * x[cols[k]];
            }
            *yi = acc;
        }
    }

    /// Main diagonal (zero where the entry is absent).
    pub fn diagonal(&self) -> Vec<T> {
        (0..self.nrows()).map(|i| self.get(i, i)).collect()
    }

    /// Max |A[i][j] + A[j][i]| over stored upper-triangle entries; 0 for a
    /// skew-symmetric matrix, used in tests.
    pub fn max_symmetry_defect(&self) -> T {
        let mut worst = T::zero();
        for i in 0..self.nrows() {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                if j > i {
                    worst = worst.max((v + self.get(j, i)).abs());
                }
            }
        }
        worst
    }
}
