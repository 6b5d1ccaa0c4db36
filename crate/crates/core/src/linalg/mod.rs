//! Exact sparse and dense linear algebra over a [`FieldSpec`].

mod dense;
mod elim;

use crate::field::{FieldElement, FieldSpec};

pub use dense::DenseMatrix;

/// Sorted `(index, value)` pairs with no stored zeros.
pub type SparseVector = Vec<(usize, FieldElement)>;

/// Column-major sparse matrix: per column, row indices strictly increasing,
/// no explicit zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    columns: Vec<SparseVector>,
}

/// Sums duplicate indices, drops zeros and sorts.
pub fn normalize_sparse(field: FieldSpec, mut v: Vec<(usize, FieldElement)>) -> SparseVector {
    v.sort_by_key(|e| e.0);
    let mut out: SparseVector = Vec::with_capacity(v.len());
    for (i, x) in v {
        match out.last_mut() {
            Some(last) if last.0 == i => last.1 += &x,
            _ => out.push((i, x)),
        }
    }
    out.retain(|e| !e.1.is_zero());
    debug_assert!(out.iter().all(|e| e.1.field() == field));
    out
}

pub fn sparse_to_dense(field: FieldSpec, len: usize, v: &SparseVector) -> Vec<FieldElement> {
    let mut out = vec![field.zero(); len];
    for (i, x) in v {
        out[*i] = x.clone();
    }
    out
}

pub fn dense_to_sparse(v: &[FieldElement]) -> SparseVector {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

impl SparseMatrix {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        SparseMatrix {
            field,
            rows,
            cols,
            columns: vec![Vec::new(); cols],
        }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let columns = (0..n).map(|i| vec![(i, field.one())]).collect();
        SparseMatrix {
            field,
            rows: n,
            cols: n,
            columns,
        }
    }

    /// Builds from `(row, col, value)` triplets; duplicates are summed.
    ///
    /// Panics if an index is out of range.
    pub fn from_triplets(
        field: FieldSpec,
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, FieldElement)>,
    ) -> Self {
        let mut columns: Vec<Vec<(usize, FieldElement)>> = vec![Vec::new(); cols];
        for (r, c, v) in triplets {
            assert!(
                r < rows && c < cols,
                "entry ({r}, {c}) outside {rows}x{cols}"
            );
            columns[c].push((r, v));
        }
        let columns = columns
            .into_iter()
            .map(|c| normalize_sparse(field, c))
            .collect();
        SparseMatrix {
            field,
            rows,
            cols,
            columns,
        }
    }

    pub fn from_rows(field: FieldSpec, cols: usize, rows: &[SparseVector]) -> Self {
        let triplets = rows
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |(c, v)| (r, *c, v.clone())));
        Self::from_triplets(field, rows.len(), cols, triplets)
    }

    pub fn from_dense_rows(field: FieldSpec, cols: usize, rows: &[Vec<FieldElement>]) -> Self {
        let sparse: Vec<SparseVector> = rows.iter().map(|r| dense_to_sparse(r)).collect();
        Self::from_rows(field, cols, &sparse)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> &[(usize, FieldElement)] {
        &self.columns[j]
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    pub fn get(&self, r: usize, c: usize) -> FieldElement {
        match self.columns[c].binary_search_by_key(&r, |e| e.0) {
            Ok(i) => self.columns[c][i].1.clone(),
            Err(_) => self.field.zero(),
        }
    }

    /// Iterates over nonzero entries as `(row, col, value)`, column by column.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &FieldElement)> {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |(r, v)| (*r, c, v)))
    }

    pub fn to_rows(&self) -> Vec<SparseVector> {
        let mut rows: Vec<SparseVector> = vec![Vec::new(); self.rows];
        for (r, c, v) in self.entries() {
            rows[r].push((c, v.clone()));
        }
        rows
    }

    pub fn transpose(&self) -> SparseMatrix {
        SparseMatrix {
            field: self.field,
            rows: self.cols,
            cols: self.rows,
            columns: self.to_rows(),
        }
    }

    pub fn mul_vec(&self, x: &[FieldElement]) -> Vec<FieldElement> {
        assert_eq!(x.len(), self.cols, "vector length mismatch");
        let mut out = vec![self.field.zero(); self.rows];
        for (c, xc) in x.iter().enumerate() {
            if xc.is_zero() {
                continue;
            }
            for (r, v) in &self.columns[c] {
                out[*r] += &(v * xc);
            }
        }
        out
    }

    pub fn mul_sparse(&self, x: &SparseVector) -> SparseVector {
        let mut acc = Vec::new();
        for (c, xc) in x {
            assert!(*c < self.cols, "index out of range");
            for (r, v) in &self.columns[*c] {
                acc.push((*r, v * xc));
            }
        }
        normalize_sparse(self.field, acc)
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, rhs.rows, "inner dimension mismatch");
        let columns = rhs.columns.iter().map(|c| self.mul_sparse(c)).collect();
        SparseMatrix {
            field: self.field,
            rows: self.rows,
            cols: rhs.cols,
            columns,
        }
    }

    /// Submatrix on the given (distinct) row and column index lists, in the
    /// listed order, reindexed to `0..rows.len()` and `0..cols.len()`.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> SparseMatrix {
        let mut row_pos = vec![usize::MAX; self.rows];
        for (i, &r) in rows.iter().enumerate() {
            row_pos[r] = i;
        }
        let columns = cols
            .iter()
            .map(|&c| {
                let mut col: SparseVector = self.columns[c]
                    .iter()
                    .filter(|(r, _)| row_pos[*r] != usize::MAX)
                    .map(|(r, v)| (row_pos[*r], v.clone()))
                    .collect();
                col.sort_by_key(|e| e.0);
                col
            })
            .collect();
        SparseMatrix {
            field: self.field,
            rows: rows.len(),
            cols: cols.len(),
            columns,
        }
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(self.field, self.rows, self.cols);
        for (r, c, v) in self.entries() {
            m[(r, c)] = v.clone();
        }
        m
    }
}

/// Exact rank. Over Q the rows are cleared to integers and eliminated
/// fraction-free; over `F_p` with ordinary modular elimination.
pub fn rank(m: &SparseMatrix) -> usize {
    elim::rank_of_rows(m.field, m.cols, &m.to_rows())
}

/// Basis of the right null space, one vector per free column in increasing
/// column order; the free coordinate is 1 and the others free are 0.
pub fn kernel_basis(m: &SparseMatrix) -> Vec<Vec<FieldElement>> {
    let field = m.field;
    let pivots = elim::reduced_echelon(field, m.cols, &m.to_rows(), false);
    let mut is_pivot = vec![false; m.cols];
    for (pc, _) in &pivots {
        is_pivot[*pc] = true;
    }
    let mut slot = vec![usize::MAX; m.cols];
    let mut basis = Vec::new();
    for f in 0..m.cols {
        if !is_pivot[f] {
            slot[f] = basis.len();
            let mut v = vec![field.zero(); m.cols];
            v[f] = field.one();
            basis.push(v);
        }
    }
    for (pc, row) in &pivots {
        let lead = row
            .iter()
            .find(|e| e.0 == *pc)
            .expect("pivot entry")
            .1
            .clone();
        for (c, v) in row {
            if c != pc {
                let k = slot[*c];
                debug_assert!(k != usize::MAX);
                basis[k][*pc] = -&v.checked_div(&lead).expect("nonzero pivot");
            }
        }
    }
    basis
}

/// One exact solution of `m x = rhs` (free variables zero), or `None` when
/// the system is inconsistent.
pub fn solve(m: &SparseMatrix, rhs: &[FieldElement]) -> Option<Vec<FieldElement>> {
    assert_eq!(rhs.len(), m.rows, "right-hand side length mismatch");
    let field = m.field;
    let aug = m.cols;
    let mut rows = m.to_rows();
    for (r, b) in rhs.iter().enumerate() {
        if !b.is_zero() {
            rows[r].push((aug, b.clone()));
        }
    }
    let pivots = elim::reduced_echelon(field, aug + 1, &rows, true);
    let mut x = vec![field.zero(); m.cols];
    for (pc, row) in &pivots {
        if *pc == aug {
            return None;
        }
        let lead = row
            .iter()
            .find(|e| e.0 == *pc)
            .expect("pivot entry")
            .1
            .clone();
        if let Some((_, b)) = row.iter().find(|e| e.0 == aug) {
            x[*pc] = b.checked_div(&lead).expect("nonzero pivot");
        }
    }
    Some(x)
}
