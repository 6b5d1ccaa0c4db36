//! Cohomology dimensions, invariants, graded decompositions and the Borel
//! check.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{
    coboundary, coboundary_matrix_direct, coboundary_rows_direct, Cochain, CochainBasis,
    ComplexError,
};
use crate::field::{FieldElement, FieldSpec};
use crate::grading::{
    basis_degrees, check_degree_preserved, cochain_degree, degree_buckets, make_grading,
    primitive_of_homogeneous_cocycle, zero_degree_mask, DegreeVector, Grading, GradingError,
};
use crate::lie::{
    builtin_algebra, make_module, BuiltinKind, GModule, LieAlgebra, LieError, ModuleSpec,
};
use crate::linalg::{kernel_basis, rank, SparseMatrix, SparseVector};

#[derive(Debug, Error)]
pub enum DriverError {
    #[error(transparent)]
    Grading(#[from] GradingError),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("internal error: {0}")]
    Internal(String),
}

/// Which complex the ranks are taken on.
#[allow(clippy::large_enum_variant)]
#[derive(Debug, Clone)]
pub enum Mode {
    Full,
    Reduced(Grading),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeTag {
    Full,
    Reduced,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelRecord {
    pub n: usize,
    pub dim_c_full: usize,
    /// `None` in full mode.
    pub dim_c_reduced: Option<usize>,
    pub dim_z: usize,
    pub dim_b: usize,
    pub betti: usize,
    pub time_ms: f64,
}

/// Sparse coefficient vector over the full cochain basis, scalars as strings.
pub type Representative = Vec<(usize, String)>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CohomologyReport {
    pub algebra: String,
    pub algebra_dim: usize,
    pub basis_order: Vec<String>,
    pub module: String,
    pub module_dim: usize,
    pub field: String,
    pub mode: ModeTag,
    pub sigmas: Vec<Vec<String>>,
    pub per_n: Vec<LevelRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub representatives: Option<Vec<Vec<Representative>>>,
}

impl CohomologyReport {
    pub fn betti(&self) -> Vec<usize> {
        self.per_n.iter().map(|l| l.betti).collect()
    }

    /// Copy with every timing set to zero.
    pub fn without_timings(&self) -> Self {
        let mut out = self.clone();
        out.per_n.iter_mut().for_each(|l| l.time_ms = 0.0);
        out
    }
}

struct Step {
    reduced_dim: Option<usize>,
    rank: usize,
    ms: f64,
    matrix: Option<SparseMatrix>,
    cols: Option<Vec<usize>>,
}

fn mask_indices(mask: &[bool]) -> Vec<usize> {
    mask.iter()
        .enumerate()
        .filter(|(_, z)| **z)
        .map(|(i, _)| i)
        .collect()
}

fn step(
    algebra: &LieAlgebra,
    module: &GModule,
    grading: Option<&Grading>,
    n: usize,
    keep: bool,
) -> Result<Step, DriverError> {
    let start = Instant::now();
    let (delta, cols) = match grading {
        None => (coboundary_matrix_direct(algebra, module, n), None),
        Some(gr) => {
            // Only degree-zero rows are assembled; every entry they produce
            // must land in a degree-zero column.
            let col_basis = CochainBasis::new(algebra.dim(), module.dim(), n);
            let col_zero = zero_degree_mask(gr, &col_basis);
            let rows = mask_indices(&zero_degree_mask(
                gr,
                &CochainBasis::new(algebra.dim(), module.dim(), n + 1),
            ));
            let partial = coboundary_rows_direct(algebra, module, n, &rows);
            if let Some((r, c, _)) = partial.entries().find(|(_, c, _)| !col_zero[*c]) {
                let (subset, v) = col_basis.element(c);
                return Err(DriverError::Internal(format!(
                    "coboundary entry ({}, {c}) joins degree {} to degree zero",
                    rows[r],
                    cochain_degree(gr, subset, v)
                )));
            }
            let cols = mask_indices(&col_zero);
            let all: Vec<usize> = (0..rows.len()).collect();
            (partial.select(&all, &cols), Some(cols))
        }
    };
    let r = rank(&delta);
    Ok(Step {
        reduced_dim: cols.as_ref().map(Vec::len),
        rank: r,
        ms: start.elapsed().as_secs_f64() * 1e3,
        matrix: keep.then_some(delta),
        cols,
    })
}

fn sparse_strings(v: &[FieldElement], index_map: Option<&[usize]>) -> Representative {
    v.iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (index_map.map_or(i, |m| m[i]), c.to_string()))
        .collect()
}

/// Cocycles independent modulo the image of `prev`, one per Betti class.
fn representatives(delta: &SparseMatrix, prev: Option<&SparseMatrix>) -> Vec<Vec<FieldElement>> {
    let field = delta.field();
    let mut columns: Vec<SparseVector> = prev
        .map(|p| (0..p.cols()).map(|c| p.column(c).to_vec()).collect())
        .unwrap_or_default();
    let len = delta.cols();
    // rank of a set of vectors, stored as matrix rows
    let mut current = rank(&SparseMatrix::from_rows(field, len, &columns));
    let mut out = Vec::new();
    for z in kernel_basis(delta) {
        columns.push(crate::linalg::dense_to_sparse(&z));
        let r = rank(&SparseMatrix::from_rows(field, len, &columns));
        if r > current {
            current = r;
            out.push(z);
        } else {
            columns.pop();
        }
    }
    out
}

/// Betti numbers for `n = 0..=max_n` (default and cap: `dim g`), one rank
/// per coboundary, with the degrees fanned out in parallel.
pub fn betti_numbers(
    algebra: &LieAlgebra,
    module: &GModule,
    mode: &Mode,
    max_n: Option<usize>,
    witness: bool,
) -> Result<CohomologyReport, DriverError> {
    let (alg, md, grading) = match mode {
        Mode::Full => (algebra.clone(), module.clone(), None),
        Mode::Reduced(gr) => {
            let (a, m) = gr.eigen_setting(algebra, module)?;
            (a, m, Some(gr))
        }
    };
    let d = alg.dim();
    let top = max_n.unwrap_or(d).min(d);
    let steps: Vec<Step> = (0..=top)
        .into_par_iter()
        .map(|n| step(&alg, &md, grading, n, witness))
        .collect::<Result<_, _>>()?;

    let mut per_n = Vec::with_capacity(top + 1);
    for (n, s) in steps.iter().enumerate() {
        let dim_c_full = CochainBasis::new(d, md.dim(), n).len();
        let dim_c = s.reduced_dim.unwrap_or(dim_c_full);
        let dim_b = if n == 0 { 0 } else { steps[n - 1].rank };
        let dim_z = dim_c - s.rank;
        if dim_z < dim_b {
            return Err(DriverError::Internal(format!(
                "dim Z^{n} = {dim_z} < dim B^{n} = {dim_b}"
            )));
        }
        per_n.push(LevelRecord {
            n,
            dim_c_full,
            dim_c_reduced: s.reduced_dim,
            dim_z,
            dim_b,
            betti: dim_z - dim_b,
            time_ms: s.ms,
        });
    }

    let reps = witness.then(|| {
        steps
            .iter()
            .enumerate()
            .map(|(n, s)| {
                let delta = s.matrix.as_ref().expect("kept");
                let prev = (n > 0).then(|| steps[n - 1].matrix.as_ref().expect("kept"));
                representatives(delta, prev)
                    .iter()
                    .map(|z| sparse_strings(z, s.cols.as_deref()))
                    .collect()
            })
            .collect()
    });

    Ok(CohomologyReport {
        algebra: algebra.label().to_string(),
        algebra_dim: d,
        basis_order: algebra.basis_names().to_vec(),
        module: module.kind().to_string(),
        module_dim: md.dim(),
        field: algebra.field().to_string(),
        mode: if grading.is_some() {
            ModeTag::Reduced
        } else {
            ModeTag::Full
        },
        sigmas: grading
            .map(|g| {
                g.sigmas()
                    .iter()
                    .map(|s| s.iter().map(ToString::to_string).collect())
                    .collect()
            })
            .unwrap_or_default(),
        per_n,
        representatives: reps,
    })
}

/// Basis of `M^g`: the common kernel of all action matrices.
pub fn invariants(algebra: &LieAlgebra, module: &GModule) -> Vec<Vec<FieldElement>> {
    let m = module.dim();
    let mut triplets = Vec::new();
    for i in 0..algebra.dim() {
        let a = module.action(i);
        for r in 0..m {
            for c in 0..m {
                if !a[(r, c)].is_zero() {
                    triplets.push((i * m + r, c, a[(r, c)].clone()));
                }
            }
        }
    }
    let stacked = SparseMatrix::from_triplets(algebra.field(), algebra.dim() * m, m, triplets);
    kernel_basis(&stacked)
}

fn bucket_rank(delta: &SparseMatrix, cols: &[usize], rows: Option<&Vec<usize>>) -> usize {
    match rows {
        Some(rows) if !cols.is_empty() => rank(&delta.select(rows, cols)),
        _ => 0,
    }
}

/// Betti numbers of `H^n` per degree vector; only nonzero entries appear.
pub fn graded_betti(
    algebra: &LieAlgebra,
    module: &GModule,
    grading: &Grading,
    n: usize,
) -> Result<BTreeMap<DegreeVector, usize>, DriverError> {
    let (alg, md) = grading.eigen_setting(algebra, module)?;
    let (d, m) = (alg.dim(), md.dim());
    if n > d {
        return Ok(BTreeMap::new());
    }
    let here = degree_buckets(grading, &CochainBasis::new(d, m, n));
    let up = degree_buckets(grading, &CochainBasis::new(d, m, n + 1));
    let delta = coboundary_matrix_direct(&alg, &md, n);
    check_degree_preserved(
        &delta,
        &basis_degrees(grading, &CochainBasis::new(d, m, n)),
        &basis_degrees(grading, &CochainBasis::new(d, m, n + 1)),
    )?;
    let below = (n > 0).then(|| {
        (
            degree_buckets(grading, &CochainBasis::new(d, m, n - 1)),
            coboundary_matrix_direct(&alg, &md, n - 1),
        )
    });
    let mut out = BTreeMap::new();
    for (deg, cols) in &here {
        let z = cols.len() - bucket_rank(&delta, cols, up.get(deg));
        let b = match &below {
            Some((buckets, prev)) => buckets
                .get(deg)
                .map_or(0, |c| bucket_rank(prev, c, Some(cols))),
            None => 0,
        };
        if z > b {
            out.insert(deg.clone(), z - b);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BorelLevel {
    pub n: usize,
    pub expected: usize,
    pub full: usize,
    pub reduced: usize,
    /// `None` outside the theorem hypotheses.
    pub pass: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BorelVerdict {
    pub n_param: usize,
    pub field: String,
    pub within_hypotheses: bool,
    pub per_n: Vec<BorelLevel>,
    /// Full and reduced Betti sequences coincide (holds in every characteristic).
    pub modes_agree: bool,
}

impl BorelVerdict {
    /// `None` when outside the hypotheses, where values are reported only.
    pub fn passed(&self) -> Option<bool> {
        self.within_hypotheses
            .then(|| self.modes_agree && self.per_n.iter().all(|l| l.pass == Some(true)))
    }

    pub fn note(&self) -> &'static str {
        if self.within_hypotheses {
            "within theorem hypotheses"
        } else {
            "outside theorem hypotheses"
        }
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Betti numbers of the Borel of `sl(N)` with trivial coefficients in both
/// modes, compared with `C(N-1, n)` when `char k` is 0 or exceeds `N`.
pub fn verify_borel_theorem(n_param: usize, field: FieldSpec) -> Result<BorelVerdict, DriverError> {
    let (g, tag) = builtin_algebra(BuiltinKind::BorelSl, n_param, field)?;
    let m = make_module(&ModuleSpec::Trivial, &g)?;
    let gr = make_grading(&g, &m, &tag.elements(&g))?;
    let full = betti_numbers(&g, &m, &Mode::Full, None, false)?.betti();
    let reduced = betti_numbers(&g, &m, &Mode::Reduced(gr), None, false)?.betti();
    let p = field.characteristic();
    let within = p == 0 || p > n_param as u64;
    let per_n = (0..=g.dim())
        .map(|n| {
            let expected = binomial(n_param - 1, n);
            BorelLevel {
                n,
                expected,
                full: full[n],
                reduced: reduced[n],
                pass: within.then_some(full[n] == expected && reduced[n] == expected),
            }
        })
        .collect();
    Ok(BorelVerdict {
        n_param,
        field: field.to_string(),
        within_hypotheses: within,
        per_n,
        modes_agree: full == reduced,
    })
}

/// Splits a cocycle `F` (eigenbasis coordinates) into its degree-zero part
/// `F_0` and a primitive `P` with `F - F_0 = delta P`. Nonzero-degree parts
/// are peeled off one grading element at a time.
pub fn degree_zero_part_of_cocycle(
    algebra: &LieAlgebra,
    module: &GModule,
    grading: &Grading,
    f: &Cochain,
) -> Result<(Cochain, Cochain), DriverError> {
    let (alg, md) = grading.eigen_setting(algebra, module)?;
    if !coboundary(&alg, &md, f).is_zero() {
        return Err(GradingError::NotCocycle.into());
    }
    let n = f.degree();
    let degrees = basis_degrees(grading, &CochainBasis::new(alg.dim(), md.dim(), n));
    let mut rest = f.clone();
    let mut primitive = if n == 0 {
        None
    } else {
        Some(Cochain::zero(&alg, &md, n - 1))
    };
    for s in 0..grading.sigma_count() {
        let mut parts: BTreeMap<FieldElement, Vec<usize>> = BTreeMap::new();
        for (idx, _) in rest.coeffs() {
            let r = &degrees[*idx].0[s];
            if !r.is_zero() {
                parts.entry(r.clone()).or_default().push(*idx);
            }
        }
        for (r, members) in parts {
            let part = rest.filter(|i| members.binary_search(&i).is_ok());
            let g = primitive_of_homogeneous_cocycle(grading, &alg, &md, s, &part, &r)?;
            let acc = primitive
                .as_mut()
                .ok_or_else(|| DriverError::Internal("nonzero-degree 0-cocycle".into()))?;
            *acc = acc.add(&g)?;
            rest = rest.sub(&part)?;
        }
    }
    let primitive = primitive.unwrap_or_else(|| Cochain::zero(&alg, &md, 0));
    if n > 0 && coboundary(&alg, &md, &primitive) != f.sub(&rest)? {
        return Err(DriverError::Internal(
            "F - F_0 differs from delta of the primitive".into(),
        ));
    }
    Ok((rest, primitive))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub n: usize,
    pub full_cols: usize,
    pub reduced_cols: usize,
    pub full_ms: f64,
    pub reduced_ms: f64,
    pub betti: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub algebra: String,
    pub field: String,
    pub rows: Vec<BenchRow>,
}

impl BenchReport {
    /// The degree with the most full-complex columns.
    pub fn middle(&self) -> &BenchRow {
        self.rows
            .iter()
            .max_by_key(|r| (r.full_cols, std::cmp::Reverse(r.n)))
            .expect("nonempty")
    }
}

/// Full versus degree-zero complex: dimensions and wall-times per degree.
pub fn bench(
    algebra: &LieAlgebra,
    module: &GModule,
    grading: &Grading,
    max_n: Option<usize>,
) -> Result<BenchReport, DriverError> {
    let full = betti_numbers(algebra, module, &Mode::Full, max_n, false)?;
    let reduced = betti_numbers(
        algebra,
        module,
        &Mode::Reduced(grading.clone()),
        max_n,
        false,
    )?;
    if full.betti() != reduced.betti() {
        return Err(DriverError::Internal(
            "full and reduced Betti numbers differ".into(),
        ));
    }
    let rows = full
        .per_n
        .iter()
        .zip(&reduced.per_n)
        .map(|(f, r)| BenchRow {
            n: f.n,
            full_cols: f.dim_c_full,
            reduced_cols: r.dim_c_reduced.unwrap_or(r.dim_c_full),
            full_ms: f.time_ms,
            reduced_ms: r.time_ms,
            betti: f.betti,
        })
        .collect();
    Ok(BenchReport {
        algebra: algebra.label().to_string(),
        field: algebra.field().to_string(),
        rows,
    })
}
