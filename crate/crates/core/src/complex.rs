//! The Chevalley–Eilenberg cochain complex `C^n(g, M)`.
//!
//! Basis layout: an `n`-cochain basis element is a pair `(S, v)` with `S` a
//! strictly increasing `n`-subset of the algebra basis and `v` a module basis
//! index. Subsets are in lexicographic order and `v` varies fastest, so the
//! element `(S, v)` sits at `rank(S) * dim M + v`. The basis cochain `(S, v)`
//! sends `(x_{s_1}, ..., x_{s_n})` to the module basis vector `m_v`.

use thiserror::Error;

use crate::field::{FieldElement, FieldSpec};
use crate::lie::{GModule, LieAlgebra};
use crate::linalg::{normalize_sparse, DenseMatrix, SparseMatrix, SparseVector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("cannot contract a 0-cochain")]
    ContractDegreeZero,
    #[error("expected {expected} arguments, got {got}")]
    ArgumentCount { expected: usize, got: usize },
    #[error("algebra element has length {got}, expected {expected}")]
    ElementLength { expected: usize, got: usize },
    #[error("cochain shapes differ")]
    ShapeMismatch,
    #[error("coefficient index {index} out of range for a basis of size {len}")]
    IndexOutOfRange { index: usize, len: usize },
}

/// Sorts `idx` in place and returns the sign of the sorting permutation
/// (`true` for odd), or `None` if an index repeats.
pub fn sort_with_sign(idx: &mut [usize]) -> Option<bool> {
    let mut odd = false;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            odd = !odd;
            j -= 1;
        }
        if j > 0 && idx[j - 1] == idx[j] {
            return None;
        }
    }
    Some(odd)
}

fn signed(v: &FieldElement, negative: bool) -> FieldElement {
    if negative {
        -v
    } else {
        v.clone()
    }
}

/// Binomial table and lexicographic ranking of subsets of `0..d`.
#[derive(Debug, Clone)]
pub(crate) struct Subsets {
    d: usize,
    binom: Vec<Vec<usize>>,
}

impl Subsets {
    pub(crate) fn new(d: usize) -> Self {
        let mut binom = vec![vec![0usize; d + 2]; d + 2];
        for a in 0..=d + 1 {
            binom[a][0] = 1;
            for b in 1..=a {
                binom[a][b] = binom[a - 1][b - 1] + binom[a - 1][b];
            }
        }
        Subsets { d, binom }
    }

    pub(crate) fn choose(&self, a: usize, b: usize) -> usize {
        if b > a {
            0
        } else {
            self.binom[a][b]
        }
    }

    /// Position of a strictly increasing subset in lexicographic order.
    pub(crate) fn rank(&self, s: &[usize]) -> usize {
        let n = s.len();
        let mut r = 0;
        let mut next = 0;
        for (i, &x) in s.iter().enumerate() {
            // subsets whose i-th element lies in next..x come first
            r += self.choose(self.d - next, n - i) - self.choose(self.d - x, n - i);
            next = x + 1;
        }
        r
    }

    pub(crate) fn all(&self, n: usize) -> Vec<Vec<usize>> {
        let d = self.d;
        if n > d {
            return Vec::new();
        }
        let mut out = Vec::with_capacity(self.choose(d, n));
        let mut cur: Vec<usize> = (0..n).collect();
        loop {
            out.push(cur.clone());
            let Some(i) = (0..n).rev().find(|&i| cur[i] < d - n + i) else {
                break;
            };
            cur[i] += 1;
            for j in i + 1..n {
                cur[j] = cur[j - 1] + 1;
            }
        }
        out
    }
}

/// Ordered basis of `C^n(g, M)`.
#[derive(Debug, Clone)]
pub struct CochainBasis {
    n: usize,
    dim_m: usize,
    subsets: Vec<Vec<usize>>,
    ranker: Subsets,
}

impl CochainBasis {
    pub fn new(dim_g: usize, dim_m: usize, n: usize) -> Self {
        let ranker = Subsets::new(dim_g);
        let subsets = ranker.all(n);
        CochainBasis {
            n,
            dim_m,
            subsets,
            ranker,
        }
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.subsets.len() * self.dim_m
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn subsets(&self) -> &[Vec<usize>] {
        &self.subsets
    }

    /// `(S, v)` for a basis index.
    pub fn element(&self, idx: usize) -> (&[usize], usize) {
        (&self.subsets[idx / self.dim_m], idx % self.dim_m)
    }

    pub fn index_of(&self, subset: &[usize], v: usize) -> usize {
        self.ranker.rank(subset) * self.dim_m + v
    }

    /// Human-readable label, e.g. `h1*^e12* (x) m0`.
    pub fn label(&self, idx: usize, names: &[String]) -> String {
        let (s, v) = self.element(idx);
        let forms: Vec<String> = s.iter().map(|&i| format!("{}*", names[i])).collect();
        let forms = if forms.is_empty() {
            "1".to_string()
        } else {
            forms.join("^")
        };
        if self.dim_m == 1 {
            forms
        } else {
            format!("{forms} (x) m{v}")
        }
    }
}

pub fn cochain_basis(algebra: &LieAlgebra, module: &GModule, n: usize) -> CochainBasis {
    CochainBasis::new(algebra.dim(), module.dim(), n)
}

/// An element of `C^n(g, M)`, stored sparsely over the cochain basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cochain {
    field: FieldSpec,
    dim_g: usize,
    dim_m: usize,
    n: usize,
    coeffs: SparseVector,
}

impl Cochain {
    pub fn new(
        field: FieldSpec,
        dim_g: usize,
        dim_m: usize,
        n: usize,
        coeffs: Vec<(usize, FieldElement)>,
    ) -> Result<Self, ComplexError> {
        let len = Subsets::new(dim_g).choose(dim_g, n) * dim_m;
        if let Some(&(index, _)) = coeffs.iter().find(|e| e.0 >= len) {
            return Err(ComplexError::IndexOutOfRange { index, len });
        }
        Ok(Cochain {
            field,
            dim_g,
            dim_m,
            n,
            coeffs: normalize_sparse(field, coeffs),
        })
    }

    pub fn zero(algebra: &LieAlgebra, module: &GModule, n: usize) -> Self {
        Cochain {
            field: algebra.field(),
            dim_g: algebra.dim(),
            dim_m: module.dim(),
            n,
            coeffs: Vec::new(),
        }
    }

    /// Cochain over `algebra`/`module` with the given coefficients.
    pub fn from_sparse(
        algebra: &LieAlgebra,
        module: &GModule,
        n: usize,
        coeffs: Vec<(usize, FieldElement)>,
    ) -> Result<Self, ComplexError> {
        Self::new(algebra.field(), algebra.dim(), module.dim(), n, coeffs)
    }

    pub fn from_dense(
        algebra: &LieAlgebra,
        module: &GModule,
        n: usize,
        coeffs: &[FieldElement],
    ) -> Result<Self, ComplexError> {
        let sparse = coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i, c.clone()))
            .collect();
        Self::from_sparse(algebra, module, n, sparse)
    }

    /// The basis cochain `(S, v)`; `subset` need not be sorted.
    pub fn basis(algebra: &LieAlgebra, module: &GModule, subset: &[usize], v: usize) -> Self {
        let mut s = subset.to_vec();
        let odd = sort_with_sign(&mut s).expect("distinct indices");
        let basis = cochain_basis(algebra, module, s.len());
        let one = algebra.field().one();
        let coeffs = vec![(basis.index_of(&s, v), signed(&one, odd))];
        Self::from_sparse(algebra, module, s.len(), coeffs).expect("valid index")
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn coeffs(&self) -> &SparseVector {
        &self.coeffs
    }

    pub fn basis_len(&self) -> usize {
        Subsets::new(self.dim_g).choose(self.dim_g, self.n) * self.dim_m
    }

    pub fn to_dense(&self) -> Vec<FieldElement> {
        crate::linalg::sparse_to_dense(self.field, self.basis_len(), &self.coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn same_shape(&self, other: &Self) -> Result<(), ComplexError> {
        if (self.field, self.dim_g, self.dim_m, self.n)
            == (other.field, other.dim_g, other.dim_m, other.n)
        {
            Ok(())
        } else {
            Err(ComplexError::ShapeMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, ComplexError> {
        self.same_shape(other)?;
        let mut v = self.coeffs.clone();
        v.extend(other.coeffs.iter().cloned());
        Ok(Cochain {
            coeffs: normalize_sparse(self.field, v),
            ..self.clone()
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, ComplexError> {
        self.add(&other.scale(&-self.field.one()))
    }

    pub fn scale(&self, s: &FieldElement) -> Self {
        let v = self.coeffs.iter().map(|(i, c)| (*i, c * s)).collect();
        Cochain {
            coeffs: normalize_sparse(self.field, v),
            ..self.clone()
        }
    }

    /// Keeps only the coefficients whose basis index satisfies `keep`.
    pub fn filter(&self, keep: impl Fn(usize) -> bool) -> Self {
        let v = self
            .coeffs
            .iter()
            .filter(|(i, _)| keep(*i))
            .cloned()
            .collect();
        Cochain {
            coeffs: v,
            ..self.clone()
        }
    }
}

/// Nonzero entries `(u, w, a)` of each action matrix.
fn action_entries(module: &GModule) -> Vec<Vec<(usize, usize, FieldElement)>> {
    module
        .actions()
        .iter()
        .map(|a| {
            let mut out = Vec::new();
            for u in 0..a.rows() {
                for w in 0..a.cols() {
                    if !a[(u, w)].is_zero() {
                        out.push((u, w, a[(u, w)].clone()));
                    }
                }
            }
            out
        })
        .collect()
}

/// Matrix of `delta: C^n -> C^{n+1}`, assembled by evaluating the two-sum
/// coboundary formula on every `(n+1)`-subset of basis vectors.
pub fn coboundary_matrix_direct(algebra: &LieAlgebra, module: &GModule, n: usize) -> SparseMatrix {
    let field = algebra.field();
    let d = algebra.dim();
    let m = module.dim();
    let subsets = Subsets::new(d);
    let rows_len = subsets.choose(d, n + 1) * m;
    let cols_len = subsets.choose(d, n) * m;
    if rows_len == 0 || cols_len == 0 {
        return SparseMatrix::zeros(field, rows_len, cols_len);
    }
    let acts = action_entries(module);
    let mut triplets = Vec::new();
    let mut rest: Vec<usize> = Vec::with_capacity(n + 1);
    for t in subsets.all(n + 1) {
        let t_idx = subsets.rank(&t);
        // sum_i (-1)^i [a_i, F(..., a_i omitted, ...)]
        for i in 0..=n {
            rest.clear();
            rest.extend(t.iter().enumerate().filter(|e| e.0 != i).map(|e| *e.1));
            let r_idx = subsets.rank(&rest);
            for (u, w, a) in &acts[t[i]] {
                triplets.push((t_idx * m + u, r_idx * m + w, signed(a, i % 2 == 1)));
            }
        }
        // sum_{i<j} (-1)^{i+j} F([a_i, a_j], ..., a_i, a_j omitted, ...)
        for i in 0..=n {
            for j in i + 1..=n {
                for (k, c) in algebra.bracket_basis(t[i], t[j]) {
                    rest.clear();
                    rest.push(*k);
                    rest.extend(
                        t.iter()
                            .enumerate()
                            .filter(|e| e.0 != i && e.0 != j)
                            .map(|e| *e.1),
                    );
                    let Some(odd) = sort_with_sign(&mut rest) else {
                        continue;
                    };
                    let s_idx = subsets.rank(&rest);
                    let neg = odd ^ ((i + j) % 2 == 1);
                    for w in 0..m {
                        triplets.push((t_idx * m + w, s_idx * m + w, signed(c, neg)));
                    }
                }
            }
        }
    }
    SparseMatrix::from_triplets(field, rows_len, cols_len, triplets)
}

/// The rows `rows` (indices into the `C^{n+1}` basis, in that order) of the
/// direct coboundary matrix; columns cover all of `C^n`.
pub fn coboundary_rows_direct(
    algebra: &LieAlgebra,
    module: &GModule,
    n: usize,
    rows: &[usize],
) -> SparseMatrix {
    let field = algebra.field();
    let d = algebra.dim();
    let m = module.dim();
    let subsets = Subsets::new(d);
    let cols_len = subsets.choose(d, n) * m;
    if rows.is_empty() || cols_len == 0 {
        return SparseMatrix::zeros(field, rows.len(), cols_len);
    }
    // by_row[g][u]: nonzero (w, a) with [x_g, v_w] having coefficient a on v_u
    let by_row: Vec<Vec<Vec<(usize, FieldElement)>>> = action_entries(module)
        .into_iter()
        .map(|entries| {
            let mut out = vec![Vec::new(); m];
            for (u, w, a) in entries {
                out[u].push((w, a));
            }
            out
        })
        .collect();
    let mut triplets = Vec::new();
    let mut rest: Vec<usize> = Vec::with_capacity(n + 1);
    for (out_row, &row) in rows.iter().enumerate() {
        let t = subsets_nth(&subsets, n + 1, row / m);
        let u = row % m;
        for i in 0..=n {
            rest.clear();
            rest.extend(t.iter().enumerate().filter(|e| e.0 != i).map(|e| *e.1));
            let r_idx = subsets.rank(&rest);
            for (w, a) in &by_row[t[i]][u] {
                triplets.push((out_row, r_idx * m + w, signed(a, i % 2 == 1)));
            }
        }
        for i in 0..=n {
            for j in i + 1..=n {
                for (k, c) in algebra.bracket_basis(t[i], t[j]) {
                    rest.clear();
                    rest.push(*k);
                    rest.extend(
                        t.iter()
                            .enumerate()
                            .filter(|e| e.0 != i && e.0 != j)
                            .map(|e| *e.1),
                    );
                    let Some(odd) = sort_with_sign(&mut rest) else {
                        continue;
                    };
                    let neg = odd ^ ((i + j) % 2 == 1);
                    triplets.push((out_row, subsets.rank(&rest) * m + u, signed(c, neg)));
                }
            }
        }
    }
    SparseMatrix::from_triplets(field, rows.len(), cols_len, triplets)
}

/// The same matrix as [`coboundary_matrix_direct`], built from the recursion
/// that isolates `a_0`:
/// `dF(a_0..a_n) = [a_0, F(a_1..a_n)] + sum_i (-1)^i F([a_0,a_i], a_1..^a_i..a_n)
///  - d(i_{a_0} F)(a_1..a_n)`, starting from `dF(a_0) = [a_0, F]`.
pub fn coboundary_matrix_recursive(
    algebra: &LieAlgebra,
    module: &GModule,
    n: usize,
) -> SparseMatrix {
    let field = algebra.field();
    let d = algebra.dim();
    let m = module.dim();
    let subsets = Subsets::new(d);
    let rows_len = subsets.choose(d, n + 1) * m;
    let cols_len = subsets.choose(d, n) * m;
    if n >= d {
        return SparseMatrix::zeros(field, rows_len, cols_len);
    }
    let acts = module.actions();

    // base case, row-major: row ({t}, u) has entries A_t[u][w] at column w
    let mut rows: Vec<SparseVector> = Vec::with_capacity(d * m);
    for a in acts {
        for u in 0..m {
            let r = (0..m)
                .filter(|&w| !a[(u, w)].is_zero())
                .map(|w| (w, a[(u, w)].clone()))
                .collect();
            rows.push(r);
        }
    }

    let mut tuple: Vec<usize> = Vec::with_capacity(n + 1);
    for k in 1..=n {
        let prev = rows;
        let mut next: Vec<SparseVector> = Vec::with_capacity(subsets.choose(d, k + 1) * m);
        for t in subsets.all(k + 1) {
            let a0 = t[0];
            let tail = &t[1..];
            let r_idx = subsets.rank(tail);
            for u in 0..m {
                let mut row = Vec::new();
                // [a_0, F(a_1, ..., a_k)]
                for w in 0..m {
                    let a = &acts[a0][(u, w)];
                    if !a.is_zero() {
                        row.push((r_idx * m + w, a.clone()));
                    }
                }
                // sum_{1<=i<=k} (-1)^i F([a_0, a_i], a_1, ..., ^a_i, ..., a_k)
                for (i, &ai) in t.iter().enumerate().skip(1) {
                    for (kk, c) in algebra.bracket_basis(a0, ai) {
                        tuple.clear();
                        tuple.push(*kk);
                        tuple.extend(
                            tail.iter()
                                .enumerate()
                                .filter(|e| e.0 + 1 != i)
                                .map(|e| *e.1),
                        );
                        let Some(odd) = sort_with_sign(&mut tuple) else {
                            continue;
                        };
                        let neg = odd ^ (i % 2 == 1);
                        row.push((subsets.rank(&tuple) * m + u, signed(c, neg)));
                    }
                }
                // - (d (i_{a_0} F))(a_1, ..., a_k): row (tail, u) of the previous
                // coboundary, read through the contraction by a_0
                for (col, val) in &prev[r_idx * m + u] {
                    let (s_idx, w) = (col / m, col % m);
                    let s_prime = subsets_nth(&subsets, k - 1, s_idx);
                    tuple.clear();
                    tuple.push(a0);
                    tuple.extend_from_slice(&s_prime);
                    let Some(odd) = sort_with_sign(&mut tuple) else {
                        continue;
                    };
                    row.push((subsets.rank(&tuple) * m + w, signed(val, !odd)));
                }
                next.push(normalize_sparse(field, row));
            }
        }
        rows = next;
    }
    let out = SparseMatrix::from_rows(field, cols_len, &rows);
    debug_assert_eq!(out.rows(), rows_len);
    out
}

/// The `idx`-th `n`-subset in lexicographic order (unranking).
fn subsets_nth(subsets: &Subsets, n: usize, mut idx: usize) -> Vec<usize> {
    let d = subsets.d;
    let mut out = Vec::with_capacity(n);
    let mut x = 0;
    for i in 0..n {
        loop {
            let count = subsets.choose(d - x - 1, n - i - 1);
            if idx < count {
                break;
            }
            idx -= count;
            x += 1;
        }
        out.push(x);
        x += 1;
    }
    out
}

/// Applies the coboundary to a cochain.
pub fn coboundary(algebra: &LieAlgebra, module: &GModule, f: &Cochain) -> Cochain {
    let delta = coboundary_matrix_direct(algebra, module, f.n);
    Cochain {
        field: f.field,
        dim_g: f.dim_g,
        dim_m: f.dim_m,
        n: f.n + 1,
        coeffs: delta.mul_sparse(&f.coeffs),
    }
}

/// Contraction `(i_sigma F)(a_1, ..., a_{n-1}) = F(sigma, a_1, ..., a_{n-1})`.
pub fn contract(f: &Cochain, sigma: &[FieldElement]) -> Result<Cochain, ComplexError> {
    if f.n == 0 {
        return Err(ComplexError::ContractDegreeZero);
    }
    if sigma.len() != f.dim_g {
        return Err(ComplexError::ElementLength {
            expected: f.dim_g,
            got: sigma.len(),
        });
    }
    let subsets = Subsets::new(f.dim_g);
    let from = subsets.all(f.n);
    let m = f.dim_m;
    let mut acc = Vec::new();
    let mut rest = Vec::with_capacity(f.n);
    for (idx, c) in &f.coeffs {
        let s = &from[idx / m];
        let v = idx % m;
        for (pos, &k) in s.iter().enumerate() {
            if sigma[k].is_zero() {
                continue;
            }
            rest.clear();
            rest.extend(s.iter().enumerate().filter(|e| e.0 != pos).map(|e| *e.1));
            // moving x_k to the front of S takes `pos` transpositions
            let val = signed(&(c * &sigma[k]), pos % 2 == 1);
            acc.push((subsets.rank(&rest) * m + v, val));
        }
    }
    Ok(Cochain {
        n: f.n - 1,
        coeffs: normalize_sparse(f.field, acc),
        ..f.clone()
    })
}

/// Evaluates `F(a_1, ..., a_n)` for dense algebra elements, returning the
/// module coefficient vector. Each basis cochain contributes the minor of the
/// argument matrix on its subset.
pub fn evaluate_cochain(
    f: &Cochain,
    args: &[Vec<FieldElement>],
) -> Result<Vec<FieldElement>, ComplexError> {
    if args.len() != f.n {
        return Err(ComplexError::ArgumentCount {
            expected: f.n,
            got: args.len(),
        });
    }
    if let Some(a) = args.iter().find(|a| a.len() != f.dim_g) {
        return Err(ComplexError::ElementLength {
            expected: f.dim_g,
            got: a.len(),
        });
    }
    let subsets = Subsets::new(f.dim_g);
    let all = subsets.all(f.n);
    let m = f.dim_m;
    let mut out = vec![f.field.zero(); m];
    for (idx, c) in &f.coeffs {
        let s = &all[idx / m];
        let mut minor = DenseMatrix::zeros(f.field, f.n, f.n);
        for (i, a) in args.iter().enumerate() {
            for (j, &sj) in s.iter().enumerate() {
                minor[(i, j)] = a[sj].clone();
            }
        }
        let det = minor.determinant();
        if !det.is_zero() {
            out[idx % m] += &(c * &det);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{builtin_algebra, make_module, BuiltinKind, ModuleSpec};

    fn setup(kind: BuiltinKind, p: usize, module: ModuleSpec) -> (LieAlgebra, GModule) {
        let (g, _) = builtin_algebra(kind, p, FieldSpec::RATIONALS).unwrap();
        let m = make_module(&module, &g).unwrap();
        (g, m)
    }

    fn q(v: i64) -> FieldElement {
        FieldSpec::RATIONALS.from_i64(v)
    }

    #[test]
    fn sorting_signs() {
        let mut a = [2, 0, 1];
        assert_eq!(sort_with_sign(&mut a), Some(false));
        assert_eq!(a, [0, 1, 2]);
        let mut b = [1, 0];
        assert_eq!(sort_with_sign(&mut b), Some(true));
        let mut c = [3, 1, 3];
        assert_eq!(sort_with_sign(&mut c), None);
        let mut e: [usize; 0] = [];
        assert_eq!(sort_with_sign(&mut e), Some(false));
    }

    #[test]
    fn ranking_matches_enumeration() {
        for d in 0..8 {
            let s = Subsets::new(d);
            for n in 0..=d + 1 {
                let all = s.all(n);
                assert_eq!(all.len(), s.choose(d, n));
                for (i, sub) in all.iter().enumerate() {
                    assert_eq!(s.rank(sub), i);
                    assert_eq!(&subsets_nth(&s, n, i), sub);
                }
                assert!(all.windows(2).all(|w| w[0] < w[1]));
            }
        }
    }

    #[test]
    fn basis_sizes() {
        let (b2, triv) = setup(BuiltinKind::BorelSl, 2, ModuleSpec::Trivial);
        let c1 = cochain_basis(&b2, &triv, 1);
        assert_eq!(c1.len(), 2);
        assert_eq!(c1.element(0), (&[0usize][..], 0));
        assert_eq!(c1.element(1), (&[1usize][..], 0));
        assert_eq!(cochain_basis(&b2, &triv, 0).len(), 1);
        assert_eq!(cochain_basis(&b2, &triv, 3).len(), 0);
        let (b3, triv3) = setup(BuiltinKind::BorelSl, 3, ModuleSpec::Trivial);
        assert_eq!(cochain_basis(&b3, &triv3, 2).len(), 10);
    }

    #[test]
    fn borel_two_degree_one() {
        let (b2, triv) = setup(BuiltinKind::BorelSl, 2, ModuleSpec::Trivial);
        let direct = coboundary_matrix_direct(&b2, &triv, 1);
        assert_eq!((direct.rows(), direct.cols()), (1, 2));
        assert_eq!(direct.to_dense().row(0), &[q(0), q(-2)]);
        assert_eq!(coboundary_matrix_recursive(&b2, &triv, 1), direct);
        assert!(coboundary_matrix_direct(&b2, &triv, 0).is_zero());
    }

    #[test]
    fn abelian_is_zero() {
        let (a3, triv) = setup(BuiltinKind::Abelian, 3, ModuleSpec::Trivial);
        for n in 0..=3 {
            assert!(coboundary_matrix_direct(&a3, &triv, n).is_zero());
            assert!(coboundary_matrix_recursive(&a3, &triv, n).is_zero());
        }
    }

    #[test]
    fn heisenberg_degree_one() {
        let (h, triv) = setup(BuiltinKind::Heisenberg, 1, ModuleSpec::Trivial);
        let d1 = coboundary_matrix_recursive(&h, &triv, 1);
        // rows {0,1},{0,2},{1,2}; only (dF)(x0,x1) = -F(x2)
        assert_eq!(d1.nnz(), 1);
        assert_eq!(d1.get(0, 2), q(-1));
        assert_eq!(d1, coboundary_matrix_direct(&h, &triv, 1));
    }

    #[test]
    fn contraction_examples() {
        let (b2, triv) = setup(BuiltinKind::BorelSl, 2, ModuleSpec::Trivial);
        let top = Cochain::basis(&b2, &triv, &[0, 1], 0);
        let h1 = b2.basis_element(0);
        let e12 = b2.basis_element(1);
        assert_eq!(
            contract(&top, &h1).unwrap(),
            Cochain::basis(&b2, &triv, &[1], 0)
        );
        let e_star = Cochain::basis(&b2, &triv, &[1], 0);
        assert_eq!(
            contract(&e_star, &e12).unwrap(),
            Cochain::basis(&b2, &triv, &[], 0)
        );
        assert!(contract(&top, &[q(0), q(0)]).unwrap().is_zero());
        let zero0 = Cochain::zero(&b2, &triv, 0);
        assert_eq!(contract(&zero0, &h1), Err(ComplexError::ContractDegreeZero));
    }

    #[test]
    fn evaluation_examples() {
        let (b2, triv) = setup(BuiltinKind::BorelSl, 2, ModuleSpec::Trivial);
        let e_star = Cochain::basis(&b2, &triv, &[1], 0);
        let h1 = b2.basis_element(0);
        let e12 = b2.basis_element(1);
        assert_eq!(
            evaluate_cochain(&e_star, std::slice::from_ref(&e12)).unwrap(),
            vec![q(1)]
        );
        assert_eq!(
            evaluate_cochain(&e_star, std::slice::from_ref(&h1)).unwrap(),
            vec![q(0)]
        );
        let top = Cochain::basis(&b2, &triv, &[0, 1], 0);
        let a = vec![q(3), q(5)];
        assert_eq!(evaluate_cochain(&top, &[a.clone(), a]).unwrap(), vec![q(0)]);
        assert_eq!(evaluate_cochain(&top, &[e12, h1]).unwrap(), vec![q(-1)]);
        assert_eq!(
            evaluate_cochain(&top, &[]),
            Err(ComplexError::ArgumentCount {
                expected: 2,
                got: 0
            })
        );
    }
    #[test]
    fn row_restricted_assembly_matches() {
        for (kind, n_alg, spec) in [
            (BuiltinKind::BorelSl, 3, ModuleSpec::Adjoint),
            (BuiltinKind::Sl, 2, ModuleSpec::Adjoint),
            (BuiltinKind::Heisenberg, 1, ModuleSpec::Trivial),
        ] {
            let (g, _) = builtin_algebra(kind, n_alg, FieldSpec::RATIONALS).unwrap();
            let m = make_module(&spec, &g).unwrap();
            for n in 0..g.dim() {
                let full = coboundary_matrix_direct(&g, &m, n);
                let rows: Vec<usize> = (0..full.rows()).rev().step_by(2).collect();
                let cols: Vec<usize> = (0..full.cols()).collect();
                assert_eq!(
                    coboundary_rows_direct(&g, &m, n, &rows),
                    full.select(&rows, &cols)
                );
            }
        }
    }
}
