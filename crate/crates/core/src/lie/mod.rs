//! Lie algebras as structure-constant tables, their modules, and builders
//! for the `sl(N)` family and a few test algebras.

mod builtin;

use std::fmt;

use thiserror::Error;

use crate::field::{FieldElement, FieldError, FieldSpec};
use crate::linalg::{normalize_sparse, sparse_to_dense, DenseMatrix, SparseVector};

pub use builtin::{builtin_algebra, BuiltinKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LieError {
    #[error("basis index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("upper-triangular bracket list required (got entry i={i}, j={j})")]
    NotUpperTriangular { i: usize, j: usize },
    #[error("bracket [{i}, {j}] given more than once")]
    DuplicateBracket { i: usize, j: usize },
    #[error("Jacobi identity fails for basis triple ({i}, {j}, {k})")]
    Jacobi { i: usize, j: usize, k: usize },
    #[error("representation law fails for generator pair ({i}, {j})")]
    RepresentationLaw { i: usize, j: usize },
    #[error("Cartan generators {i} and {j} do not commute")]
    CartanNotCommuting { i: usize, j: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// `[x_i, x_j] = sum_k terms[k]`, given for `i < j` only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BracketEntry {
    pub i: usize,
    pub j: usize,
    pub terms: Vec<(usize, FieldElement)>,
}

/// A finite-dimensional Lie algebra given by structure constants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieAlgebra {
    field: FieldSpec,
    label: String,
    names: Vec<String>,
    // table[i * dim + j] = [x_i, x_j]
    table: Vec<SparseVector>,
}

impl LieAlgebra {
    /// Builds and validates an algebra from its upper-triangular bracket list.
    /// The lower half is filled in by antisymmetry and Jacobi is checked on
    /// every basis triple. Empty `names` means `x0, x1, ...`.
    pub fn new(
        field: FieldSpec,
        dim: usize,
        brackets: Vec<BracketEntry>,
        names: Vec<String>,
    ) -> Result<Self, LieError> {
        let names = if names.is_empty() {
            (0..dim).map(|i| format!("x{i}")).collect()
        } else {
            names
        };
        if names.len() != dim {
            return Err(LieError::DimensionMismatch(format!(
                "{} basis names for dimension {dim}",
                names.len()
            )));
        }
        let mut table = vec![Vec::new(); dim * dim];
        let mut seen = vec![false; dim * dim];
        for BracketEntry { i, j, terms } in brackets {
            for idx in [i, j] {
                if idx >= dim {
                    return Err(LieError::IndexOutOfRange { index: idx, dim });
                }
            }
            if i >= j {
                return Err(LieError::NotUpperTriangular { i, j });
            }
            if seen[i * dim + j] {
                return Err(LieError::DuplicateBracket { i, j });
            }
            seen[i * dim + j] = true;
            for (k, c) in &terms {
                if *k >= dim {
                    return Err(LieError::IndexOutOfRange { index: *k, dim });
                }
                if c.field() != field {
                    return Err(FieldError::MixedFields {
                        left: field,
                        right: c.field(),
                    }
                    .into());
                }
            }
            let v = normalize_sparse(field, terms);
            table[j * dim + i] = v.iter().map(|(k, c)| (*k, -c)).collect();
            table[i * dim + j] = v;
        }
        let alg = LieAlgebra {
            field,
            label: "custom".to_string(),
            names,
            table,
        };
        alg.check_jacobi()?;
        Ok(alg)
    }

    pub(crate) fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    /// Short descriptor such as `borel-sl:3` or `custom`.
    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn basis_names(&self) -> &[String] {
        &self.names
    }

    /// `[x_i, x_j]` in the basis.
    pub fn bracket_basis(&self, i: usize, j: usize) -> &SparseVector {
        &self.table[i * self.dim() + j]
    }

    /// Upper-triangular nonzero brackets, the form accepted by [`LieAlgebra::new`].
    pub fn upper_brackets(&self) -> Vec<BracketEntry> {
        let d = self.dim();
        let mut out = Vec::new();
        for i in 0..d {
            for j in i + 1..d {
                let t = self.bracket_basis(i, j);
                if !t.is_empty() {
                    out.push(BracketEntry {
                        i,
                        j,
                        terms: t.clone(),
                    });
                }
            }
        }
        out
    }

    /// `[x_i, v]` for a sparse element `v`.
    fn bracket_basis_sparse(&self, i: usize, v: &SparseVector) -> SparseVector {
        let mut acc = Vec::new();
        for (l, c) in v {
            for (k, s) in self.bracket_basis(i, *l) {
                acc.push((*k, c * s));
            }
        }
        normalize_sparse(self.field, acc)
    }

    /// Bracket of two elements given as dense coefficient vectors.
    pub fn bracket(&self, x: &[FieldElement], y: &[FieldElement]) -> Vec<FieldElement> {
        let d = self.dim();
        assert!(x.len() == d && y.len() == d, "element length mismatch");
        let mut out = vec![self.field.zero(); d];
        for (i, a) in x.iter().enumerate().filter(|e| !e.1.is_zero()) {
            for (j, b) in y.iter().enumerate().filter(|e| !e.1.is_zero()) {
                let ab = a * b;
                for (k, c) in self.bracket_basis(i, j) {
                    out[*k] += &(&ab * c);
                }
            }
        }
        out
    }

    /// Matrix of `ad x`: column `j` holds `[x, x_j]`.
    pub fn ad_matrix(&self, x: &[FieldElement]) -> DenseMatrix {
        let d = self.dim();
        let mut m = DenseMatrix::zeros(self.field, d, d);
        for (i, a) in x.iter().enumerate().filter(|e| !e.1.is_zero()) {
            for j in 0..d {
                for (k, c) in self.bracket_basis(i, j) {
                    m[(*k, j)] += &(a * c);
                }
            }
        }
        m
    }

    /// The `i`-th basis vector as a dense element.
    pub fn basis_element(&self, i: usize) -> Vec<FieldElement> {
        sparse_to_dense(self.field, self.dim(), &vec![(i, self.field.one())])
    }

    /// Jacobi identity on every basis triple.
    pub fn check_jacobi(&self) -> Result<(), LieError> {
        let d = self.dim();
        for i in 0..d {
            for j in i + 1..d {
                for k in j + 1..d {
                    let mut acc = self.bracket_basis_sparse(i, self.bracket_basis(j, k));
                    acc.extend(self.bracket_basis_sparse(j, self.bracket_basis(k, i)));
                    acc.extend(self.bracket_basis_sparse(k, self.bracket_basis(i, j)));
                    if !normalize_sparse(self.field, acc).is_empty() {
                        return Err(LieError::Jacobi { i, j, k });
                    }
                }
            }
        }
        Ok(())
    }
}

/// `make_algebra` under its operational name.
pub fn make_algebra(
    field: FieldSpec,
    dim: usize,
    brackets: Vec<BracketEntry>,
    names: Vec<String>,
) -> Result<LieAlgebra, LieError> {
    LieAlgebra::new(field, dim, brackets, names)
}

/// Basis indices of a distinguished commuting set of ad-semisimple generators.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CartanTag {
    pub indices: Vec<usize>,
}

impl CartanTag {
    pub fn new(algebra: &LieAlgebra, indices: Vec<usize>) -> Result<Self, LieError> {
        let d = algebra.dim();
        for &i in &indices {
            if i >= d {
                return Err(LieError::IndexOutOfRange { index: i, dim: d });
            }
        }
        for (a, &i) in indices.iter().enumerate() {
            for &j in &indices[a + 1..] {
                if !algebra.bracket_basis(i, j).is_empty() {
                    return Err(LieError::CartanNotCommuting { i, j });
                }
            }
        }
        Ok(CartanTag { indices })
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// The tagged generators as dense algebra elements.
    pub fn elements(&self, algebra: &LieAlgebra) -> Vec<Vec<FieldElement>> {
        self.indices
            .iter()
            .map(|&i| algebra.basis_element(i))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModuleKind {
    Trivial,
    Adjoint,
    Explicit,
}

impl fmt::Display for ModuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModuleKind::Trivial => "trivial",
            ModuleKind::Adjoint => "adjoint",
            ModuleKind::Explicit => "explicit",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModuleSpec {
    Trivial,
    Adjoint,
    Explicit(Vec<DenseMatrix>),
}

/// A finite-dimensional representation: one action matrix per basis generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GModule {
    field: FieldSpec,
    kind: ModuleKind,
    dim: usize,
    action: Vec<DenseMatrix>,
}

impl GModule {
    pub fn new(algebra: &LieAlgebra, spec: &ModuleSpec) -> Result<Self, LieError> {
        let field = algebra.field();
        let d = algebra.dim();
        let (kind, dim, action) = match spec {
            ModuleSpec::Trivial => (
                ModuleKind::Trivial,
                1,
                vec![DenseMatrix::zeros(field, 1, 1); d],
            ),
            ModuleSpec::Adjoint => {
                let action = (0..d)
                    .map(|i| algebra.ad_matrix(&algebra.basis_element(i)))
                    .collect();
                (ModuleKind::Adjoint, d, action)
            }
            ModuleSpec::Explicit(ms) => {
                if ms.len() != d {
                    return Err(LieError::DimensionMismatch(format!(
                        "{} action matrices for an algebra of dimension {d}",
                        ms.len()
                    )));
                }
                let m = ms.first().map_or(0, DenseMatrix::rows);
                for a in ms {
                    if a.rows() != m || a.cols() != m {
                        return Err(LieError::DimensionMismatch(
                            "action matrices must be square of a common size".to_string(),
                        ));
                    }
                    if a.field() != field {
                        return Err(FieldError::MixedFields {
                            left: field,
                            right: a.field(),
                        }
                        .into());
                    }
                }
                (ModuleKind::Explicit, m, ms.clone())
            }
        };
        let module = GModule {
            field,
            kind,
            dim,
            action,
        };
        module.check_representation(algebra)?;
        Ok(module)
    }

    /// Builds a module in some other basis without re-running validation.
    pub(crate) fn from_parts(
        field: FieldSpec,
        kind: ModuleKind,
        action: Vec<DenseMatrix>,
        dim: usize,
    ) -> Self {
        GModule {
            field,
            kind,
            dim,
            action,
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn kind(&self) -> ModuleKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn action(&self, i: usize) -> &DenseMatrix {
        &self.action[i]
    }

    pub fn actions(&self) -> &[DenseMatrix] {
        &self.action
    }

    /// Action matrix of a general element `sum x_i A_i`.
    pub fn act(&self, x: &[FieldElement]) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(self.field, self.dim, self.dim);
        for (i, a) in x.iter().enumerate().filter(|e| !e.1.is_zero()) {
            m = m.add(&self.action[i].scale(a));
        }
        m
    }

    /// Checks `A_i A_j - A_j A_i = sum_k c_ij^k A_k` for all `i < j`.
    pub fn check_representation(&self, algebra: &LieAlgebra) -> Result<(), LieError> {
        let d = algebra.dim();
        for i in 0..d {
            for j in i + 1..d {
                let lhs = self.action[i].commutator(&self.action[j]);
                let mut rhs = DenseMatrix::zeros(self.field, self.dim, self.dim);
                for (k, c) in algebra.bracket_basis(i, j) {
                    rhs = rhs.add(&self.action[*k].scale(c));
                }
                if lhs != rhs {
                    return Err(LieError::RepresentationLaw { i, j });
                }
            }
        }
        Ok(())
    }
}

/// `make_module` under its operational name.
pub fn make_module(spec: &ModuleSpec, algebra: &LieAlgebra) -> Result<GModule, LieError> {
    GModule::new(algebra, spec)
}
