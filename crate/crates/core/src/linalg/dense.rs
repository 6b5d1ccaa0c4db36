use std::ops::{Index, IndexMut};

use crate::field::{FieldElement, FieldSpec};

use super::{kernel_basis, SparseMatrix};

/// Small row-major dense matrix, used for action matrices and change of basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseMatrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = FieldElement;
    fn index(&self, (r, c): (usize, usize)) -> &FieldElement {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut FieldElement {
        &mut self.data[r * self.cols + c]
    }
}

impl DenseMatrix {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        DenseMatrix {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m[(i, i)] = field.one();
        }
        m
    }

    /// Returns `None` if the rows are ragged.
    pub fn from_rows(field: FieldSpec, rows: Vec<Vec<FieldElement>>) -> Option<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return None;
        }
        let n = rows.len();
        Some(DenseMatrix {
            field,
            rows: n,
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(field: FieldSpec, rows: usize, columns: &[Vec<FieldElement>]) -> Self {
        let mut m = Self::zeros(field, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, v) in col.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        m
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

    pub fn row(&self, r: usize) -> &[FieldElement] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<FieldElement> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(FieldElement::is_zero)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|r| (0..self.cols).all(|c| r == c || self[(r, c)].is_zero()))
    }

    pub fn diagonal(&self) -> Vec<FieldElement> {
        (0..self.rows.min(self.cols))
            .map(|i| self[(i, i)].clone())
            .collect()
    }

    pub fn mul(&self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, rhs.rows, "inner dimension mismatch");
        let mut out = Self::zeros(self.field, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[FieldElement]) -> Vec<FieldElement> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = self.field.zero();
                for (a, b) in self.row(i).iter().zip(x) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += &(a * b);
                    }
                }
                acc
            })
            .collect()
    }

    fn zip_with(
        &self,
        rhs: &DenseMatrix,
        f: impl Fn(&FieldElement, &FieldElement) -> FieldElement,
    ) -> DenseMatrix {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "shape mismatch"
        );
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| f(a, b))
            .collect();
        DenseMatrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn add(&self, rhs: &DenseMatrix) -> DenseMatrix {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &DenseMatrix) -> DenseMatrix {
        self.zip_with(rhs, |a, b| a - b)
    }

    pub fn scale(&self, s: &FieldElement) -> DenseMatrix {
        let data = self.data.iter().map(|a| a * s).collect();
        DenseMatrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    /// `self * rhs - rhs * self`.
    pub fn commutator(&self, rhs: &DenseMatrix) -> DenseMatrix {
        self.mul(rhs).sub(&rhs.mul(self))
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut out = Self::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn to_sparse(&self) -> SparseMatrix {
        let rows: Vec<Vec<FieldElement>> = (0..self.rows).map(|r| self.row(r).to_vec()).collect();
        SparseMatrix::from_dense_rows(self.field, self.cols, &rows)
    }

    pub fn kernel(&self) -> Vec<Vec<FieldElement>> {
        kernel_basis(&self.to_sparse())
    }

    pub fn rank(&self) -> usize {
        super::rank(&self.to_sparse())
    }

    /// Determinant by Gaussian elimination over the field.
    pub fn determinant(&self) -> FieldElement {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut det = self.field.one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !a[(i, k)].is_zero()) else {
                return self.field.zero();
            };
            if p != k {
                for j in 0..n {
                    a.data.swap(p * n + j, k * n + j);
                }
                det = -det;
            }
            let pivot = a[(k, k)].clone();
            det = &det * &pivot;
            let inv = pivot.inv().expect("nonzero pivot");
            for i in k + 1..n {
                let f = &a[(i, k)] * &inv;
                if f.is_zero() {
                    continue;
                }
                for j in k..n {
                    let d = &f * &a[(k, j)];
                    a[(i, j)] -= &d;
                }
            }
        }
        det
    }

    /// Inverse by Gauss–Jordan, `None` if singular.
    pub fn inverse(&self) -> Option<DenseMatrix> {
        assert!(self.is_square(), "inverse of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(self.field, n);
        for k in 0..n {
            let p = (k..n).find(|&i| !a[(i, k)].is_zero())?;
            if p != k {
                for j in 0..n {
                    a.data.swap(p * n + j, k * n + j);
                    inv.data.swap(p * n + j, k * n + j);
                }
            }
            let s = a[(k, k)].inv().expect("nonzero pivot");
            for j in 0..n {
                a[(k, j)] = &a[(k, j)] * &s;
                inv[(k, j)] = &inv[(k, j)] * &s;
            }
            for i in 0..n {
                if i == k || a[(i, k)].is_zero() {
                    continue;
                }
                let f = a[(i, k)].clone();
                for j in 0..n {
                    let d = &f * &a[(k, j)];
                    a[(i, j)] -= &d;
                    let d = &f * &inv[(k, j)];
                    inv[(i, j)] -= &d;
                }
            }
        }
        Some(inv)
    }

    /// Characteristic polynomial `det(x I - A)`, coefficients low to high,
    /// via reduction to upper Hessenberg form (valid in any characteristic).
    pub fn charpoly(&self) -> Vec<FieldElement> {
        assert!(
            self.is_square(),
            "characteristic polynomial of a non-square matrix"
        );
        let n = self.rows;
        let field = self.field;
        let mut h = self.clone();
        for m in 1..n.saturating_sub(1) {
            let Some(i) = (m..n).find(|&i| !h[(i, m - 1)].is_zero()) else {
                continue;
            };
            if i != m {
                for j in 0..n {
                    h.data.swap(i * n + j, m * n + j);
                }
                for j in 0..n {
                    h.data.swap(j * n + i, j * n + m);
                }
            }
            let t = h[(m, m - 1)].inv().expect("nonzero");
            for i in m + 1..n {
                let u = &h[(i, m - 1)] * &t;
                if u.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let d = &u * &h[(m, j)];
                    h[(i, j)] -= &d;
                }
                for j in 0..n {
                    let d = &u * &h[(j, i)];
                    h[(j, m)] += &d;
                }
            }
        }
        // p_k is the characteristic polynomial of the leading k x k block.
        let mut polys: Vec<Vec<FieldElement>> = vec![vec![field.one()]];
        for k in 1..=n {
            let hk = |a: usize, b: usize| &h[(a - 1, b - 1)];
            let prev = &polys[k - 1];
            let mut next = vec![field.zero(); k + 1];
            for (d, c) in prev.iter().enumerate() {
                next[d + 1] += c;
                next[d] -= &(c * hk(k, k));
            }
            let mut t = field.one();
            for i in 1..k {
                t = &t * hk(k - i + 1, k - i);
                let coef = &t * hk(k - i, k);
                if coef.is_zero() {
                    continue;
                }
                for (d, c) in polys[k - i - 1].iter().enumerate() {
                    next[d] -= &(&coef * c);
                }
            }
            polys.push(next);
        }
        polys.pop().expect("nonempty")
    }
}
