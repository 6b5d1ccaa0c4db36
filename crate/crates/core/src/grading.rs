//! Gradings induced by commuting ad-semisimple elements.
//!
//! A [`Grading`] records a simultaneous eigenbasis of the algebra and the
//! module for a list of commuting elements `sigma_1..sigma_r`, and the degree
//! vector (tuple of eigenvalues, in the ground field) of each eigenbasis
//! vector. Cochain-level operations here interpret cochains in that
//! eigenbasis; for the `sl(N)` builders graded by their Cartan tag the
//! eigenbasis is the original basis.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::complex::{
    coboundary, coboundary_matrix_direct, contract, Cochain, CochainBasis, ComplexError,
};
use crate::field::{poly_roots, FieldElement, FieldError, FieldSpec};
use crate::lie::{BracketEntry, GModule, LieAlgebra, LieError};
use crate::linalg::{dense_to_sparse, DenseMatrix, SparseMatrix};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Space {
    Algebra,
    Module,
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Space::Algebra => "the algebra",
            Space::Module => "the module",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GradingError {
    #[error("sigma {index}: characteristic polynomial on {space} does not split over k")]
    NotSplit { index: usize, space: Space },
    #[error("sigma {index} is not semisimple on {space}")]
    NotSemisimple { index: usize, space: Space },
    #[error("grading elements {0} and {1} do not commute")]
    NotCommuting(usize, usize),
    #[error("sigma {index} has length {got}, expected {expected}")]
    ElementLength {
        index: usize,
        expected: usize,
        got: usize,
    },
    #[error("sigma index {0} out of range")]
    NoSuchSigma(usize),
    #[error("cochain is not a cocycle")]
    NotCocycle,
    #[error("cochain is not homogeneous of the required degree")]
    NotHomogeneous,
    #[error("degree is zero: use the contraction-cocycle path")]
    ZeroDegree,
    #[error("cochain degree {n} is smaller than the number of grading elements {r}")]
    TooFewSlots { n: usize, r: usize },
    #[error("internal error: {0}")]
    Internal(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// Multidegree: one field-valued entry per grading element.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DegreeVector(pub Vec<FieldElement>);

impl DegreeVector {
    pub fn zero(field: FieldSpec, r: usize) -> Self {
        DegreeVector(vec![field.zero(); r])
    }

    pub fn entries(&self) -> &[FieldElement] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(FieldElement::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        DegreeVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        DegreeVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    /// Entries as symmetric integers, when representable.
    pub fn to_i64(&self) -> Option<Vec<i64>> {
        self.0.iter().map(FieldElement::to_i64_symmetric).collect()
    }
}

impl fmt::Display for DegreeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Eigenspace {
    pub eigenvalue: FieldElement,
    pub basis: Vec<Vec<FieldElement>>,
}

/// Eigen-decomposition of one ad-semisimple element on the algebra and the module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdssDecomposition {
    pub algebra: Vec<Eigenspace>,
    pub module: Vec<Eigenspace>,
}

impl AdssDecomposition {
    pub fn algebra_eigenvalues(&self) -> Vec<FieldElement> {
        self.algebra.iter().map(|e| e.eigenvalue.clone()).collect()
    }

    pub fn module_eigenvalues(&self) -> Vec<FieldElement> {
        self.module.iter().map(|e| e.eigenvalue.clone()).collect()
    }
}

fn eigen_decompose(
    m: &DenseMatrix,
    index: usize,
    space: Space,
) -> Result<Vec<Eigenspace>, GradingError> {
    let n = m.rows();
    let roots = poly_roots(&m.charpoly())?;
    if roots.iter().map(|r| r.1).sum::<usize>() != n {
        return Err(GradingError::NotSplit { index, space });
    }
    let mut out = Vec::with_capacity(roots.len());
    let mut total = 0;
    for (lambda, _) in roots {
        let shifted = m.sub(&DenseMatrix::identity(m.field(), n).scale(&lambda));
        let basis = shifted.kernel();
        total += basis.len();
        out.push(Eigenspace {
            eigenvalue: lambda,
            basis,
        });
    }
    if total != n {
        return Err(GradingError::NotSemisimple { index, space });
    }
    Ok(out)
}

fn verify_adss_indexed(
    algebra: &LieAlgebra,
    module: &GModule,
    sigma: &[FieldElement],
    index: usize,
) -> Result<AdssDecomposition, GradingError> {
    if sigma.len() != algebra.dim() {
        return Err(GradingError::ElementLength {
            index,
            expected: algebra.dim(),
            got: sigma.len(),
        });
    }
    let alg = eigen_decompose(&algebra.ad_matrix(sigma), index, Space::Algebra)?;
    let md = eigen_decompose(&module.act(sigma), index, Space::Module)?;
    Ok(AdssDecomposition {
        algebra: alg,
        module: md,
    })
}

/// Checks that `sigma` acts diagonalizably over k on both the algebra and the
/// module, returning the eigenspaces.
pub fn verify_adss(
    algebra: &LieAlgebra,
    module: &GModule,
    sigma: &[FieldElement],
) -> Result<AdssDecomposition, GradingError> {
    verify_adss_indexed(algebra, module, sigma, 0)
}

/// Simultaneous eigen-data of a commuting family of ad-semisimple elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grading {
    field: FieldSpec,
    sigmas: Vec<Vec<FieldElement>>,
    eigen_sigmas: Vec<Vec<FieldElement>>,
    algebra_degrees: Vec<DegreeVector>,
    module_degrees: Vec<DegreeVector>,
    algebra_change: DenseMatrix,
    module_change: DenseMatrix,
    identity: bool,
}

/// Splits `space` by the eigenvalues of each operator in turn. Returns the
/// eigenvectors and their degree vectors.
fn refine(
    field: FieldSpec,
    dim: usize,
    ops: &[DenseMatrix],
    eigenvalues: &[Vec<FieldElement>],
) -> Result<Vec<(DegreeVector, Vec<FieldElement>)>, GradingError> {
    let mut blocks: Vec<(Vec<FieldElement>, Vec<Vec<FieldElement>>)> =
        vec![(Vec::new(), (0..dim).map(|i| unit(field, dim, i)).collect())];
    for (op, eigs) in ops.iter().zip(eigenvalues) {
        let mut next = Vec::new();
        for (deg, vectors) in &blocks {
            let b = DenseMatrix::from_columns(field, dim, vectors);
            let mut found = 0;
            for lambda in eigs {
                let shifted = op.sub(&DenseMatrix::identity(field, dim).scale(lambda));
                let coords = shifted.mul(&b).kernel();
                if coords.is_empty() {
                    continue;
                }
                found += coords.len();
                let vs = coords.iter().map(|c| b.mul_vec(c)).collect();
                let mut d = deg.clone();
                d.push(lambda.clone());
                next.push((d, vs));
            }
            if found != vectors.len() {
                return Err(GradingError::Internal(
                    "eigenspace refinement lost dimensions (elements do not commute on this space)"
                        .into(),
                ));
            }
        }
        blocks = next;
    }
    Ok(blocks
        .into_iter()
        .flat_map(|(deg, vs)| {
            let deg = DegreeVector(deg);
            vs.into_iter().map(move |v| (deg.clone(), v))
        })
        .collect())
}

fn unit(field: FieldSpec, dim: usize, i: usize) -> Vec<FieldElement> {
    let mut v = vec![field.zero(); dim];
    v[i] = field.one();
    v
}

/// Builds the grading for commuting ad-semisimple `sigmas` (dense algebra
/// elements in the algebra's basis).
pub fn make_grading(
    algebra: &LieAlgebra,
    module: &GModule,
    sigmas: &[Vec<FieldElement>],
) -> Result<Grading, GradingError> {
    let field = algebra.field();
    let d = algebra.dim();
    let m = module.dim();
    let mut decomps = Vec::with_capacity(sigmas.len());
    for (s, sigma) in sigmas.iter().enumerate() {
        decomps.push(verify_adss_indexed(algebra, module, sigma, s)?);
    }
    for s in 0..sigmas.len() {
        for t in s + 1..sigmas.len() {
            if algebra
                .bracket(&sigmas[s], &sigmas[t])
                .iter()
                .any(|c| !c.is_zero())
            {
                return Err(GradingError::NotCommuting(s, t));
            }
        }
    }
    let ads: Vec<DenseMatrix> = sigmas.iter().map(|s| algebra.ad_matrix(s)).collect();
    let acts: Vec<DenseMatrix> = sigmas.iter().map(|s| module.act(s)).collect();
    let r = sigmas.len();

    if ads.iter().chain(&acts).all(DenseMatrix::is_diagonal) {
        let degrees = |ops: &[DenseMatrix], n: usize| -> Vec<DegreeVector> {
            (0..n)
                .map(|i| DegreeVector(ops.iter().map(|a| a[(i, i)].clone()).collect()))
                .collect()
        };
        return Ok(Grading {
            field,
            sigmas: sigmas.to_vec(),
            eigen_sigmas: sigmas.to_vec(),
            algebra_degrees: degrees(&ads, d),
            module_degrees: degrees(&acts, m),
            algebra_change: DenseMatrix::identity(field, d),
            module_change: DenseMatrix::identity(field, m),
            identity: true,
        });
    }

    let alg_eigs: Vec<Vec<FieldElement>> = decomps
        .iter()
        .map(AdssDecomposition::algebra_eigenvalues)
        .collect();
    let mod_eigs: Vec<Vec<FieldElement>> = decomps
        .iter()
        .map(AdssDecomposition::module_eigenvalues)
        .collect();
    let alg = refine(field, d, &ads, &alg_eigs)?;
    let md = refine(field, m, &acts, &mod_eigs)?;
    let p = DenseMatrix::from_columns(
        field,
        d,
        &alg.iter().map(|e| e.1.clone()).collect::<Vec<_>>(),
    );
    let q = DenseMatrix::from_columns(
        field,
        m,
        &md.iter().map(|e| e.1.clone()).collect::<Vec<_>>(),
    );
    let p_inv = p
        .inverse()
        .ok_or_else(|| GradingError::Internal("algebra eigenbasis is singular".into()))?;
    let eigen_sigmas = sigmas.iter().map(|s| p_inv.mul_vec(s)).collect();
    let grading = Grading {
        field,
        sigmas: sigmas.to_vec(),
        eigen_sigmas,
        algebra_degrees: alg.into_iter().map(|e| e.0).collect(),
        module_degrees: md.into_iter().map(|e| e.0).collect(),
        algebra_change: p,
        module_change: q,
        identity: false,
    };
    debug_assert!(grading.algebra_degrees.iter().all(|g| g.0.len() == r));
    Ok(grading)
}

impl Grading {
    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn sigma_count(&self) -> usize {
        self.sigmas.len()
    }

    /// Grading elements in the original algebra basis.
    pub fn sigmas(&self) -> &[Vec<FieldElement>] {
        &self.sigmas
    }

    /// Grading elements in the eigenbasis.
    pub fn eigen_sigmas(&self) -> &[Vec<FieldElement>] {
        &self.eigen_sigmas
    }

    pub fn algebra_degrees(&self) -> &[DegreeVector] {
        &self.algebra_degrees
    }

    pub fn module_degrees(&self) -> &[DegreeVector] {
        &self.module_degrees
    }

    /// Columns are the algebra eigenbasis in original coordinates.
    pub fn algebra_change(&self) -> &DenseMatrix {
        &self.algebra_change
    }

    pub fn module_change(&self) -> &DenseMatrix {
        &self.module_change
    }

    pub fn is_identity_change(&self) -> bool {
        self.identity
    }

    /// The single-element grading by `sigma_s`.
    pub fn restrict(&self, s: usize) -> Result<Grading, GradingError> {
        if s >= self.sigmas.len() {
            return Err(GradingError::NoSuchSigma(s));
        }
        let project = |ds: &[DegreeVector]| -> Vec<DegreeVector> {
            ds.iter()
                .map(|d| DegreeVector(vec![d.0[s].clone()]))
                .collect()
        };
        Ok(Grading {
            sigmas: vec![self.sigmas[s].clone()],
            eigen_sigmas: vec![self.eigen_sigmas[s].clone()],
            algebra_degrees: project(&self.algebra_degrees),
            module_degrees: project(&self.module_degrees),
            ..self.clone()
        })
    }

    /// The algebra and module rewritten in the eigenbasis (clones when the
    /// original basis already is one).
    pub fn eigen_setting(
        &self,
        algebra: &LieAlgebra,
        module: &GModule,
    ) -> Result<(LieAlgebra, GModule), GradingError> {
        if self.identity {
            return Ok((algebra.clone(), module.clone()));
        }
        let field = self.field;
        let d = algebra.dim();
        let p = &self.algebra_change;
        let p_inv = p
            .inverse()
            .ok_or_else(|| GradingError::Internal("singular change of basis".into()))?;
        let cols: Vec<Vec<FieldElement>> = (0..d).map(|i| p.column(i)).collect();
        let mut brackets = Vec::new();
        for i in 0..d {
            for j in i + 1..d {
                let coords = p_inv.mul_vec(&algebra.bracket(&cols[i], &cols[j]));
                let terms = dense_to_sparse(&coords);
                if !terms.is_empty() {
                    brackets.push(BracketEntry { i, j, terms });
                }
            }
        }
        let names = (0..d).map(|i| format!("y{i}")).collect();
        let alg = LieAlgebra::new(field, d, brackets, names)?;
        let q = &self.module_change;
        let q_inv = q
            .inverse()
            .ok_or_else(|| GradingError::Internal("singular change of basis".into()))?;
        let action = cols
            .iter()
            .map(|c| q_inv.mul(&module.act(c)).mul(q))
            .collect();
        let md = GModule::from_parts(field, module.kind(), action, module.dim());
        md.check_representation(&alg)?;
        Ok((alg, md))
    }
}

/// Degree `deg_M(v) - sum_{i in S} deg_g(i)` of the basis cochain `(S, v)`.
pub fn cochain_degree(grading: &Grading, subset: &[usize], v: usize) -> DegreeVector {
    let mut r = grading.module_degrees[v].clone();
    for &i in subset {
        r = r.sub(&grading.algebra_degrees[i]);
    }
    r
}

/// Degree of every element of a cochain basis.
pub fn basis_degrees(grading: &Grading, basis: &CochainBasis) -> Vec<DegreeVector> {
    (0..basis.len())
        .map(|idx| {
            let (s, v) = basis.element(idx);
            cochain_degree(grading, s, v)
        })
        .collect()
}

/// Basis indices grouped by degree.
pub fn degree_buckets(
    grading: &Grading,
    basis: &CochainBasis,
) -> BTreeMap<DegreeVector, Vec<usize>> {
    let mut out: BTreeMap<DegreeVector, Vec<usize>> = BTreeMap::new();
    for (idx, deg) in basis_degrees(grading, basis).into_iter().enumerate() {
        out.entry(deg).or_default().push(idx);
    }
    out
}

/// Degrees as machine integers: scaled by a common denominator over the
/// rationals, residues over a prime field. Zero tests agree with the exact ones.
struct IntDegrees {
    modulus: Option<i128>,
    algebra: Vec<Vec<i128>>,
    module: Vec<Vec<i128>>,
}

impl IntDegrees {
    fn new(grading: &Grading) -> Option<Self> {
        let all = || {
            grading
                .algebra_degrees
                .iter()
                .chain(&grading.module_degrees)
                .flat_map(|d| d.0.iter())
        };
        if let Some(p) = grading.field.modulus() {
            let conv = |ds: &[DegreeVector]| -> Option<Vec<Vec<i128>>> {
                ds.iter()
                    .map(|d| d.0.iter().map(|x| x.as_residue().map(i128::from)).collect())
                    .collect()
            };
            return Some(IntDegrees {
                modulus: Some(i128::from(p)),
                algebra: conv(&grading.algebra_degrees)?,
                module: conv(&grading.module_degrees)?,
            });
        }
        let mut lcm = num_bigint::BigInt::from(1);
        for x in all() {
            lcm = num_integer::Integer::lcm(&lcm, x.as_rational()?.denom());
        }
        let conv = |ds: &[DegreeVector]| -> Option<Vec<Vec<i128>>> {
            ds.iter()
                .map(|d| {
                    d.0.iter()
                        .map(|x| {
                            let q = x.as_rational()?;
                            num_traits::ToPrimitive::to_i64(&(q.numer() * &lcm / q.denom()))
                                .map(i128::from)
                        })
                        .collect()
                })
                .collect()
        };
        Some(IntDegrees {
            modulus: None,
            algebra: conv(&grading.algebra_degrees)?,
            module: conv(&grading.module_degrees)?,
        })
    }

    fn is_zero(&self, subset: &[usize], v: usize) -> bool {
        (0..self.module[v].len()).all(|s| {
            let mut acc = self.module[v][s];
            for &i in subset {
                acc -= self.algebra[i][s];
            }
            match self.modulus {
                Some(p) => acc.rem_euclid(p) == 0,
                None => acc == 0,
            }
        })
    }
}

/// `mask[idx]` is true iff basis element `idx` has degree zero.
pub fn zero_degree_mask(grading: &Grading, basis: &CochainBasis) -> Vec<bool> {
    match IntDegrees::new(grading) {
        Some(fast) => (0..basis.len())
            .map(|idx| {
                let (s, v) = basis.element(idx);
                fast.is_zero(s, v)
            })
            .collect(),
        None => basis_degrees(grading, basis)
            .iter()
            .map(DegreeVector::is_zero)
            .collect(),
    }
}

/// Fails if some nonzero entry of `delta` joins cochains of different degree.
pub fn check_degree_preserved(
    delta: &SparseMatrix,
    col_degrees: &[DegreeVector],
    row_degrees: &[DegreeVector],
) -> Result<(), GradingError> {
    for (r, c, _) in delta.entries() {
        if col_degrees[c] != row_degrees[r] {
            return Err(GradingError::Internal(format!(
                "coboundary entry ({r}, {c}) joins degree {} to degree {}",
                col_degrees[c], row_degrees[r]
            )));
        }
    }
    Ok(())
}

/// One level of the degree-zero subcomplex: `delta_n` restricted to the
/// degree-zero basis elements of `C^n` (columns) and `C^{n+1}` (rows).
#[derive(Debug, Clone)]
pub struct ReducedLevel {
    pub n: usize,
    pub full_dim: usize,
    pub indices: Vec<usize>,
    pub next_indices: Vec<usize>,
    pub coboundary: SparseMatrix,
}

/// Degree-zero part of `delta_n`; `algebra`/`module` must already be in the
/// grading's eigenbasis.
pub fn reduced_level(
    grading: &Grading,
    algebra: &LieAlgebra,
    module: &GModule,
    n: usize,
) -> Result<ReducedLevel, GradingError> {
    let d = algebra.dim();
    let m = module.dim();
    let basis = CochainBasis::new(d, m, n);
    let next = CochainBasis::new(d, m, n + 1);
    let col_deg = basis_degrees(grading, &basis);
    let row_deg = basis_degrees(grading, &next);
    let delta = coboundary_matrix_direct(algebra, module, n);
    check_degree_preserved(&delta, &col_deg, &row_deg)?;
    let zero = |ds: &[DegreeVector]| -> Vec<usize> {
        ds.iter()
            .enumerate()
            .filter(|(_, g)| g.is_zero())
            .map(|(i, _)| i)
            .collect()
    };
    let indices = zero(&col_deg);
    let next_indices = zero(&row_deg);
    let coboundary = delta.select(&next_indices, &indices);
    Ok(ReducedLevel {
        n,
        full_dim: basis.len(),
        indices,
        next_indices,
        coboundary,
    })
}

/// The degree-zero subcomplex for `n = 0..=max_n` (default: `dim g`).
pub fn degree_zero_subcomplex(
    grading: &Grading,
    algebra: &LieAlgebra,
    module: &GModule,
    max_n: Option<usize>,
) -> Result<Vec<ReducedLevel>, GradingError> {
    let (alg, md) = grading.eigen_setting(algebra, module)?;
    let top = max_n.unwrap_or(alg.dim()).min(alg.dim());
    (0..=top)
        .map(|n| reduced_level(grading, &alg, &md, n))
        .collect()
}

fn is_cocycle(algebra: &LieAlgebra, module: &GModule, f: &Cochain) -> bool {
    coboundary(algebra, module, f).is_zero()
}

/// Primitive of a nonzero-degree cocycle: for a cocycle `F` homogeneous of nonzero degree `r`
/// with respect to `sigma_s`, returns `G = r^{-1} i_{sigma_s} F` with
/// `delta G = F` (checked before returning). `F` is in eigenbasis coordinates.
pub fn primitive_of_homogeneous_cocycle(
    grading: &Grading,
    algebra: &LieAlgebra,
    module: &GModule,
    s: usize,
    f: &Cochain,
    r: &FieldElement,
) -> Result<Cochain, GradingError> {
    if s >= grading.sigma_count() {
        return Err(GradingError::NoSuchSigma(s));
    }
    if r.is_zero() {
        return Err(GradingError::ZeroDegree);
    }
    let (alg, md) = grading.eigen_setting(algebra, module)?;
    if !is_cocycle(&alg, &md, f) {
        return Err(GradingError::NotCocycle);
    }
    let basis = CochainBasis::new(alg.dim(), md.dim(), f.degree());
    for (idx, _) in f.coeffs() {
        let (subset, v) = basis.element(*idx);
        if &cochain_degree(grading, subset, v).0[s] != r {
            return Err(GradingError::NotHomogeneous);
        }
    }
    let g = contract(f, &grading.eigen_sigmas[s])?.scale(&r.inv()?);
    if &coboundary(&alg, &md, &g) != f {
        return Err(GradingError::Internal(
            "delta of the primitive differs from F".into(),
        ));
    }
    Ok(g)
}

/// Contracts a degree-zero cocycle by `sigma_1`, then `sigma_2`, ..., checking
/// after every step that the result is still a cocycle.
pub fn iterated_contraction_check(
    grading: &Grading,
    algebra: &LieAlgebra,
    module: &GModule,
    f: &Cochain,
) -> Result<Cochain, GradingError> {
    let (alg, md) = grading.eigen_setting(algebra, module)?;
    let r = grading.sigma_count();
    if f.degree() < r {
        return Err(GradingError::TooFewSlots { n: f.degree(), r });
    }
    if !is_cocycle(&alg, &md, f) {
        return Err(GradingError::NotCocycle);
    }
    let basis = CochainBasis::new(alg.dim(), md.dim(), f.degree());
    for (idx, _) in f.coeffs() {
        let (subset, v) = basis.element(*idx);
        if !cochain_degree(grading, subset, v).is_zero() {
            return Err(GradingError::NotHomogeneous);
        }
    }
    let mut cur = f.clone();
    for (s, sigma) in grading.eigen_sigmas.iter().enumerate() {
        cur = contract(&cur, sigma)?;
        if !is_cocycle(&alg, &md, &cur) {
            return Err(GradingError::Internal(format!(
                "contraction by sigma {s} is not a cocycle"
            )));
        }
    }
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{builtin_algebra, make_module, BuiltinKind, CartanTag, ModuleSpec};

    fn q(v: i64) -> FieldElement {
        FieldSpec::RATIONALS.from_i64(v)
    }

    fn borel(n: usize, module: ModuleSpec) -> (LieAlgebra, GModule, CartanTag) {
        let (g, tag) = builtin_algebra(BuiltinKind::BorelSl, n, FieldSpec::RATIONALS).unwrap();
        let m = make_module(&module, &g).unwrap();
        (g, m, tag)
    }

    fn ints(d: &DegreeVector) -> Vec<i64> {
        d.to_i64().unwrap()
    }

    #[test]
    fn adss_on_borel_two() {
        let (g, m, _) = borel(2, ModuleSpec::Trivial);
        let dec = verify_adss(&g, &m, &g.basis_element(0)).unwrap();
        assert_eq!(dec.algebra_eigenvalues(), vec![q(0), q(2)]);
        assert_eq!(dec.algebra[0].basis, vec![vec![q(1), q(0)]]);
        assert_eq!(dec.algebra[1].basis, vec![vec![q(0), q(1)]]);
        assert_eq!(dec.module_eigenvalues(), vec![q(0)]);
        assert_eq!(
            verify_adss(&g, &m, &g.basis_element(1)),
            Err(GradingError::NotSemisimple {
                index: 0,
                space: Space::Algebra
            })
        );
    }

    #[test]
    fn adss_off_diagonal_in_sl2() {
        // sigma = e12 + e21; its adjoint has char poly x^3 - 4x
        let (g, _) = builtin_algebra(BuiltinKind::Sl, 2, FieldSpec::RATIONALS).unwrap();
        let adj = make_module(&ModuleSpec::Adjoint, &g).unwrap();
        let sigma = vec![q(0), q(1), q(1)];
        let cp: Vec<i64> = g
            .ad_matrix(&sigma)
            .charpoly()
            .iter()
            .map(|c| c.to_i64_symmetric().unwrap())
            .collect();
        assert_eq!(cp, vec![0, -4, 0, 1]);
        let dec = verify_adss(&g, &adj, &sigma).unwrap();
        assert_eq!(dec.algebra_eigenvalues(), vec![q(-2), q(0), q(2)]);
        assert_eq!(dec.module_eigenvalues(), vec![q(-2), q(0), q(2)]);
    }

    #[test]
    fn not_split_over_rationals() {
        // sigma = e12 - e21 in sl(2): ad has eigenvalues 0, +-2i
        let (g, _) = builtin_algebra(BuiltinKind::Sl, 2, FieldSpec::RATIONALS).unwrap();
        let m = make_module(&ModuleSpec::Trivial, &g).unwrap();
        let sigma = vec![q(0), q(1), q(-1)];
        assert_eq!(
            verify_adss(&g, &m, &sigma),
            Err(GradingError::NotSplit {
                index: 0,
                space: Space::Algebra
            })
        );
    }

    #[test]
    fn cartan_degree_vectors() {
        let (g, m, tag) = borel(3, ModuleSpec::Trivial);
        let gr = make_grading(&g, &m, &tag.elements(&g)).unwrap();
        assert!(gr.is_identity_change());
        let degs: Vec<Vec<i64>> = gr.algebra_degrees().iter().map(ints).collect();
        // basis (h1, h2, e12, e13, e23)
        assert_eq!(
            degs,
            vec![vec![0, 0], vec![0, 0], vec![2, -1], vec![1, 1], vec![-1, 2]]
        );

        let (g4, m4, tag4) = borel(4, ModuleSpec::Trivial);
        let gr4 = make_grading(&g4, &m4, &tag4.elements(&g4)).unwrap();
        let name = |s: &str| g4.basis_names().iter().position(|n| n == s).unwrap();
        assert_eq!(ints(&gr4.algebra_degrees()[name("e12")]), vec![2, -1, 0]);
        assert_eq!(ints(&gr4.algebra_degrees()[name("e23")]), vec![-1, 2, -1]);
        assert_eq!(ints(&gr4.algebra_degrees()[name("e34")]), vec![0, -1, 2]);
    }

    #[test]
    fn grading_rejects_non_adss() {
        let (g, m, _) = borel(2, ModuleSpec::Trivial);
        let err = make_grading(&g, &m, &[g.basis_element(0), g.basis_element(1)]).unwrap_err();
        assert_eq!(
            err,
            GradingError::NotSemisimple {
                index: 1,
                space: Space::Algebra
            }
        );
    }

    #[test]
    fn grading_rejects_non_commuting() {
        // h and e12 + e21 are each adss in sl(2) but do not commute
        let (g, _) = builtin_algebra(BuiltinKind::Sl, 2, FieldSpec::RATIONALS).unwrap();
        let m = make_module(&ModuleSpec::Trivial, &g).unwrap();
        let err = make_grading(&g, &m, &[g.basis_element(0), vec![q(0), q(1), q(1)]]).unwrap_err();
        assert_eq!(err, GradingError::NotCommuting(0, 1));
    }

    #[test]
    fn cochain_degrees() {
        let (g, m, tag) = borel(3, ModuleSpec::Trivial);
        let gr = make_grading(&g, &m, &tag.elements(&g)).unwrap();
        // e12* has degree -(2,-1)
        assert_eq!(ints(&cochain_degree(&gr, &[2], 0)), vec![-2, 1]);
        assert_eq!(ints(&cochain_degree(&gr, &[0], 0)), vec![0, 0]);
        // e12*^e13*^e23*
        assert_eq!(ints(&cochain_degree(&gr, &[2, 3, 4], 0)), vec![-2, -2]);
    }

    #[test]
    fn reduced_dimensions() {
        let (g, m, tag) = borel(2, ModuleSpec::Trivial);
        let gr = make_grading(&g, &m, &tag.elements(&g)).unwrap();
        let levels = degree_zero_subcomplex(&gr, &g, &m, None).unwrap();
        let reduced: Vec<usize> = levels.iter().map(|l| l.indices.len()).collect();
        let full: Vec<usize> = levels.iter().map(|l| l.full_dim).collect();
        assert_eq!(reduced, vec![1, 1, 0]);
        assert_eq!(full, vec![1, 2, 1]);
        assert_eq!(levels[1].indices, vec![0]);

        let (g3, m3, tag3) = borel(3, ModuleSpec::Trivial);
        let gr3 = make_grading(&g3, &m3, &tag3.elements(&g3)).unwrap();
        let levels = degree_zero_subcomplex(&gr3, &g3, &m3, Some(1)).unwrap();
        assert_eq!(levels[1].indices, vec![0, 1]);
    }

    #[test]
    fn zero_sigma_keeps_everything() {
        let (g, _) = builtin_algebra(BuiltinKind::Abelian, 3, FieldSpec::RATIONALS).unwrap();
        let m = make_module(&ModuleSpec::Trivial, &g).unwrap();
        let gr = make_grading(&g, &m, &[vec![q(0), q(0), q(0)]]).unwrap();
        for l in degree_zero_subcomplex(&gr, &g, &m, None).unwrap() {
            assert_eq!(l.indices.len(), l.full_dim);
        }
    }

    #[test]
    fn primitive_on_borel_two() {
        let (g, m, tag) = borel(2, ModuleSpec::Trivial);
        let gr = make_grading(&g, &m, &tag.elements(&g)).unwrap();
        let f = Cochain::basis(&g, &m, &[0, 1], 0);
        let prim = primitive_of_homogeneous_cocycle(&gr, &g, &m, 0, &f, &q(-2)).unwrap();
        let half = FieldSpec::RATIONALS.parse_element("-1/2").unwrap();
        assert_eq!(prim, Cochain::basis(&g, &m, &[1], 0).scale(&half));

        let h1 = Cochain::basis(&g, &m, &[0], 0);
        assert_eq!(
            primitive_of_homogeneous_cocycle(&gr, &g, &m, 0, &h1, &q(0)),
            Err(GradingError::ZeroDegree)
        );
        assert_eq!(
            primitive_of_homogeneous_cocycle(&gr, &g, &m, 0, &f, &q(2)),
            Err(GradingError::NotHomogeneous)
        );
        let e = Cochain::basis(&g, &m, &[1], 0);
        assert_eq!(
            primitive_of_homogeneous_cocycle(&gr, &g, &m, 0, &e, &q(-2)),
            Err(GradingError::NotCocycle)
        );
    }

    #[test]
    fn primitive_on_borel_three_top_roots() {
        let (g, m, tag) = borel(3, ModuleSpec::Trivial);
        let gr = make_grading(&g, &m, &tag.elements(&g)).unwrap();
        // e12*^e23* has degree -(1,1); its coboundary is a homogeneous cocycle
        let f = coboundary(&g, &m, &Cochain::basis(&g, &m, &[2, 4], 0));
        assert!(!f.is_zero());
        let prim = primitive_of_homogeneous_cocycle(&gr, &g, &m, 1, &f, &q(-1)).unwrap();
        // independent route: exact solve of delta X = F
        let d2 = coboundary_matrix_direct(&g, &m, 2);
        assert!(crate::linalg::solve(&d2, &f.to_dense()).is_some());
        assert_eq!(coboundary(&g, &m, &prim), f);
    }

    #[test]
    fn iterated_contractions() {
        let (g, m, tag) = borel(2, ModuleSpec::Trivial);
        let gr = make_grading(&g, &m, &tag.elements(&g)).unwrap();
        let h1 = Cochain::basis(&g, &m, &[0], 0);
        let out = iterated_contraction_check(&gr, &g, &m, &h1).unwrap();
        assert_eq!(out, Cochain::basis(&g, &m, &[], 0));

        let (g3, m3, tag3) = borel(3, ModuleSpec::Trivial);
        let gr3 = make_grading(&g3, &m3, &tag3.elements(&g3)).unwrap();
        let f = Cochain::basis(&g3, &m3, &[0, 1], 0);
        // i_{h2} i_{h1} (h1*^h2*) = i_{h2} h2* = 1
        assert_eq!(
            iterated_contraction_check(&gr3, &g3, &m3, &f).unwrap(),
            Cochain::basis(&g3, &m3, &[], 0)
        );
        let zero = Cochain::zero(&g3, &m3, 2);
        assert!(iterated_contraction_check(&gr3, &g3, &m3, &zero)
            .unwrap()
            .is_zero());
    }

    #[test]
    fn non_identity_eigenbasis() {
        // grading sl(2) by e12 + e21 forces a change of basis
        let (g, _) = builtin_algebra(BuiltinKind::Sl, 2, FieldSpec::RATIONALS).unwrap();
        let adj = make_module(&ModuleSpec::Adjoint, &g).unwrap();
        let gr = make_grading(&g, &adj, &[vec![q(0), q(1), q(1)]]).unwrap();
        assert!(!gr.is_identity_change());
        let (eg, em) = gr.eigen_setting(&g, &adj).unwrap();
        let sigma = &gr.eigen_sigmas()[0];
        assert!(eg.ad_matrix(sigma).is_diagonal());
        assert!(em.act(sigma).is_diagonal());
        let mut degs: Vec<i64> = gr.algebra_degrees().iter().map(|d| ints(d)[0]).collect();
        degs.sort();
        assert_eq!(degs, vec![-2, 0, 2]);
        // degree preservation holds in the new basis
        let levels = degree_zero_subcomplex(&gr, &g, &adj, None).unwrap();
        assert_eq!(levels.len(), 4);
    }
    #[test]
    fn top_nilpotent_form_is_not_closed() {
        // the Cartan weights of e12, e13, e23 under h1 sum to 2, so delta does not vanish
        let (g, m, tag) = borel(3, ModuleSpec::Trivial);
        let gr = make_grading(&g, &m, &tag.elements(&g)).unwrap();
        let f = Cochain::basis(&g, &m, &[2, 3, 4], 0);
        assert_eq!(ints(&cochain_degree(&gr, &[2, 3, 4], 0)), vec![-2, -2]);
        assert_eq!(
            primitive_of_homogeneous_cocycle(&gr, &g, &m, 0, &f, &q(-2)),
            Err(GradingError::NotCocycle)
        );
    }

    fn graded_builtins() -> Vec<(LieAlgebra, CartanTag)> {
        let mut out = Vec::new();
        for kind in [BuiltinKind::Sl, BuiltinKind::BorelSl, BuiltinKind::CartanSl] {
            for n in 2..=4 {
                out.push(builtin_algebra(kind, n, FieldSpec::RATIONALS).unwrap());
            }
        }
        out
    }

    #[test]
    fn grading_closure() {
        for (g, tag) in graded_builtins() {
            for spec in [ModuleSpec::Trivial, ModuleSpec::Adjoint] {
                let m = make_module(&spec, &g).unwrap();
                let gr = make_grading(&g, &m, &tag.elements(&g)).unwrap();
                let ad = gr.algebra_degrees();
                let md = gr.module_degrees();
                for s in tag.indices.iter() {
                    assert!(ad[*s].is_zero());
                }
                for i in 0..g.dim() {
                    for j in 0..g.dim() {
                        for (k, _) in g.bracket_basis(i, j) {
                            assert_eq!(ad[*k], ad[i].add(&ad[j]), "{} [{i},{j}]", g.label());
                        }
                    }
                    let a = m.action(i);
                    for v in 0..m.dim() {
                        for w in 0..m.dim() {
                            if !a[(w, v)].is_zero() {
                                assert_eq!(md[w], ad[i].add(&md[v]));
                            }
                        }
                    }
                }
            }
        }
    }

    fn simple_root_index(g: &LieAlgebra, n: usize, i: usize) -> usize {
        let name = if n < 10 {
            format!("e{}{}", i + 1, i + 2)
        } else {
            format!("e{}_{}", i + 1, i + 2)
        };
        g.basis_names().iter().position(|x| *x == name).unwrap()
    }

    fn cartan_row(n: usize, i: usize) -> Vec<i64> {
        (0..n - 1)
            .map(|k| match (i as i64 - k as i64).abs() {
                0 => 2,
                1 => -1,
                _ => 0,
            })
            .collect()
    }

    #[test]
    fn simple_roots_give_cartan_rows_and_sum_rule() {
        for n in 3..=6 {
            let (g, m, tag) = borel(n, ModuleSpec::Trivial);
            let gr = make_grading(&g, &m, &tag.elements(&g)).unwrap();
            for i in 0..n - 1 {
                let deg = ints(&gr.algebra_degrees()[simple_root_index(&g, n, i)]);
                assert_eq!(deg, cartan_row(n, i));
                let sum: i64 = deg.iter().sum();
                let expected = if i == 0 || i == n - 2 { 1 } else { 0 };
                assert_eq!(sum, expected, "N={n} e{}{}", i + 1, i + 2);
            }
        }
    }

    #[test]
    fn subset_sums_bounded_by_n() {
        for n in 3..=6 {
            let (g, m, tag) = borel(n, ModuleSpec::Trivial);
            let gr = make_grading(&g, &m, &tag.elements(&g)).unwrap();
            let names = g.basis_names();
            let roots: Vec<Vec<i64>> = names
                .iter()
                .enumerate()
                .filter(|(_, nm)| {
                    let e = |i: usize, j: usize| **nm == format!("e{i}{j}");
                    (2..=n).any(|j| e(1, j)) || (1..n).any(|i| e(i, n))
                })
                .map(|(k, _)| ints(&gr.algebra_degrees()[k]))
                .collect();
            assert_eq!(roots.len(), 2 * (n - 1) - 1);
            for mask in 0u32..(1 << roots.len()) {
                let mut acc = vec![0i64; n - 1];
                for (b, r) in roots.iter().enumerate() {
                    if mask >> b & 1 == 1 {
                        acc.iter_mut().zip(r).for_each(|(a, x)| *a += x);
                    }
                }
                assert!(
                    acc.iter().all(|a| a.abs() <= n as i64),
                    "N={n} mask={mask:b} {acc:?}"
                );
            }
        }
    }

    mod props {
        use super::*;
        use crate::complex::evaluate_cochain;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            // (delta F)(sigma, a_1..a_n) = r F(a) - (delta i_sigma F)(a) on homogeneous F
            #[test]
            fn contraction_collapse_identity(
                n_alg in 2usize..=4,
                adjoint in any::<bool>(),
                deg in 1usize..=3,
                pick in any::<u64>(),
                coeffs in proptest::collection::vec(-4i64..=4, 1..6),
                s_pick in any::<usize>(),
            ) {
                let spec = if adjoint { ModuleSpec::Adjoint } else { ModuleSpec::Trivial };
                let (g, m, tag) = borel(n_alg, spec);
                prop_assume!(deg <= g.dim());
                let gr = make_grading(&g, &m, &tag.elements(&g)).unwrap();
                let s = s_pick % gr.sigma_count();
                let single = gr.restrict(s).unwrap();
                let basis = CochainBasis::new(g.dim(), m.dim(), deg);
                let buckets = degree_buckets(&single, &basis);
                let keys: Vec<&DegreeVector> = buckets.keys().collect();
                let key = keys[(pick as usize) % keys.len()].clone();
                let members = &buckets[&key];
                let mut terms = Vec::new();
                for (t, c) in coeffs.iter().enumerate() {
                    terms.push((members[(pick as usize / 7 + 3 * t) % members.len()], FieldSpec::RATIONALS.from_i64(*c)));
                }
                let f = Cochain::from_sparse(&g, &m, deg, terms).unwrap();
                let r = key.0[0].clone();
                let sigma = &gr.eigen_sigmas()[s];
                let df = coboundary(&g, &m, &f);
                let dif = coboundary(&g, &m, &contract(&f, sigma).unwrap());
                for tuple in CochainBasis::new(g.dim(), 1, deg).subsets() {
                    let args: Vec<Vec<FieldElement>> = tuple.iter().map(|&i| g.basis_element(i)).collect();
                    let mut with_sigma = vec![sigma.clone()];
                    with_sigma.extend(args.iter().cloned());
                    let lhs = evaluate_cochain(&df, &with_sigma).unwrap();
                    let fa = evaluate_cochain(&f, &args).unwrap();
                    let da = evaluate_cochain(&dif, &args).unwrap();
                    let rhs: Vec<FieldElement> = fa.iter().zip(&da).map(|(x, y)| &(&r * x) - y).collect();
                    prop_assert_eq!(lhs, rhs);
                }
            }
        }
    }
    #[test]
    fn fast_zero_mask_matches_exact_degrees() {
        let f5 = FieldSpec::prime(5).unwrap();
        for field in [FieldSpec::RATIONALS, f5] {
            let (g, tag) = builtin_algebra(BuiltinKind::BorelSl, 4, field).unwrap();
            let m = make_module(&ModuleSpec::Adjoint, &g).unwrap();
            let gr = make_grading(&g, &m, &tag.elements(&g)).unwrap();
            for n in 0..=3 {
                let basis = CochainBasis::new(g.dim(), m.dim(), n);
                let exact: Vec<bool> = basis_degrees(&gr, &basis)
                    .iter()
                    .map(DegreeVector::is_zero)
                    .collect();
                assert_eq!(zero_degree_mask(&gr, &basis), exact);
            }
        }
        // a fractional grading element exercises the common-denominator path
        let (g, _) = builtin_algebra(BuiltinKind::BorelSl, 3, FieldSpec::RATIONALS).unwrap();
        let m = make_module(&ModuleSpec::Adjoint, &g).unwrap();
        let third = FieldSpec::RATIONALS.parse_element("1/3").unwrap();
        let sigma = vec![third.clone(), third, q(0), q(0), q(0)];
        let gr = make_grading(&g, &m, &[sigma]).unwrap();
        let basis = CochainBasis::new(g.dim(), m.dim(), 2);
        let exact: Vec<bool> = basis_degrees(&gr, &basis)
            .iter()
            .map(DegreeVector::is_zero)
            .collect();
        assert_eq!(zero_degree_mask(&gr, &basis), exact);
    }
}
