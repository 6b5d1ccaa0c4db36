//! Algebra files, report documents and CSV tables.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::driver::{BenchReport, CohomologyReport, Representative};
use crate::field::{FieldElement, FieldSpec};
use crate::lie::{
    make_module, BracketEntry, CartanTag, GModule, LieAlgebra, ModuleKind, ModuleSpec,
};
use crate::linalg::DenseMatrix;
use crate::suites::SuiteVerdict;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation error: {0}")]
    Validation(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketJson {
    pub i: usize,
    pub j: usize,
    pub terms: Vec<(usize, String)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitModuleJson {
    pub dim: usize,
    /// One `dim x dim` matrix per algebra basis element, row-major.
    pub action: Vec<Vec<Vec<String>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ModuleJson {
    Named(String),
    Explicit(ExplicitModuleJson),
}

/// On-disk description of an algebra, its module and its Cartan tag.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub field: String,
    pub dim: usize,
    #[serde(default)]
    pub basis: Vec<String>,
    #[serde(default)]
    pub brackets: Vec<BracketJson>,
    #[serde(default = "default_module")]
    pub module: ModuleJson,
    #[serde(default)]
    pub cartan: Vec<usize>,
}

fn default_module() -> ModuleJson {
    ModuleJson::Named("trivial".to_string())
}

fn scalar(field: FieldSpec, s: &str, at: impl FnOnce() -> String) -> Result<FieldElement, IoError> {
    field
        .parse_element(s)
        .map_err(|e| IoError::Parse(format!("{}: {e}", at())))
}

impl AlgebraFile {
    pub fn from_structures(algebra: &LieAlgebra, module: &GModule, tag: &CartanTag) -> Self {
        let brackets = algebra
            .upper_brackets()
            .into_iter()
            .map(|b| BracketJson {
                i: b.i,
                j: b.j,
                terms: b.terms.iter().map(|(k, c)| (*k, c.to_string())).collect(),
            })
            .collect();
        let module = match module.kind() {
            ModuleKind::Trivial => ModuleJson::Named("trivial".into()),
            ModuleKind::Adjoint => ModuleJson::Named("adjoint".into()),
            ModuleKind::Explicit => ModuleJson::Explicit(ExplicitModuleJson {
                dim: module.dim(),
                action: module
                    .actions()
                    .iter()
                    .map(|a| {
                        (0..a.rows())
                            .map(|r| a.row(r).iter().map(ToString::to_string).collect())
                            .collect()
                    })
                    .collect(),
            }),
        };
        AlgebraFile {
            field: algebra.field().to_string(),
            dim: algebra.dim(),
            basis: algebra.basis_names().to_vec(),
            brackets,
            module,
            cartan: tag.indices.clone(),
        }
    }

    /// Builds and validates the structures. Malformed scalars are parse
    /// errors; structural failures (Jacobi, representation law, indices)
    /// are validation errors.
    pub fn build(&self) -> Result<(LieAlgebra, GModule, CartanTag), IoError> {
        let field: FieldSpec = self
            .field
            .parse()
            .map_err(|e| IoError::Parse(format!("field: {e}")))?;
        let mut brackets = Vec::with_capacity(self.brackets.len());
        for (b, entry) in self.brackets.iter().enumerate() {
            let mut terms = Vec::with_capacity(entry.terms.len());
            for (t, (k, c)) in entry.terms.iter().enumerate() {
                terms.push((
                    *k,
                    scalar(field, c, || format!("brackets[{b}].terms[{t}]"))?,
                ));
            }
            brackets.push(BracketEntry {
                i: entry.i,
                j: entry.j,
                terms,
            });
        }
        let validation = |e: crate::lie::LieError| IoError::Validation(e.to_string());
        let algebra =
            LieAlgebra::new(field, self.dim, brackets, self.basis.clone()).map_err(validation)?;
        let spec = match &self.module {
            ModuleJson::Named(name) => match name.to_ascii_lowercase().as_str() {
                "trivial" => ModuleSpec::Trivial,
                "adjoint" => ModuleSpec::Adjoint,
                other => return Err(IoError::Parse(format!("module: unknown module {other:?}"))),
            },
            ModuleJson::Explicit(ex) => {
                let mut mats = Vec::with_capacity(ex.action.len());
                for (a, rows) in ex.action.iter().enumerate() {
                    let mut parsed = Vec::with_capacity(rows.len());
                    for (r, row) in rows.iter().enumerate() {
                        let mut out = Vec::with_capacity(row.len());
                        for (c, s) in row.iter().enumerate() {
                            out.push(scalar(field, s, || {
                                format!("module.action[{a}][{r}][{c}]")
                            })?);
                        }
                        parsed.push(out);
                    }
                    let m = DenseMatrix::from_rows(field, parsed).ok_or_else(|| {
                        IoError::Parse(format!("module.action[{a}]: ragged rows"))
                    })?;
                    if m.rows() != ex.dim || m.cols() != ex.dim {
                        return Err(IoError::Validation(format!(
                            "module.action[{a}] is {}x{}, expected {}x{}",
                            m.rows(),
                            m.cols(),
                            ex.dim,
                            ex.dim
                        )));
                    }
                    mats.push(m);
                }
                ModuleSpec::Explicit(mats)
            }
        };
        let module = make_module(&spec, &algebra).map_err(validation)?;
        let tag = CartanTag::new(&algebra, self.cartan.clone()).map_err(validation)?;
        Ok((algebra, module, tag))
    }
}

pub fn parse_algebra_str(text: &str) -> Result<(LieAlgebra, GModule, CartanTag), IoError> {
    let doc: AlgebraFile = serde_json::from_str(text)
        .map_err(|e| IoError::Parse(format!("line {} column {}: {e}", e.line(), e.column())))?;
    doc.build()
}

pub fn parse_algebra_file(path: &Path) -> Result<(LieAlgebra, GModule, CartanTag), IoError> {
    let text = std::fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.display().to_string(),
        source,
    })?;
    parse_algebra_str(&text)
}

/// Echo of the command line that produced a report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebra: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub module: Option<String>,
    pub field: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub reduce: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_n: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub suites: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_param: Option<usize>,
    #[serde(default)]
    pub witness: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerN {
    pub n: usize,
    pub dim_c_full: usize,
    pub dim_c_reduced: Option<usize>,
    pub dim_z: usize,
    pub dim_b: usize,
    pub betti: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedRow {
    pub n: usize,
    pub degree: Vec<String>,
    pub betti: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchCounts {
    pub n: usize,
    pub full_cols: usize,
    pub reduced_cols: usize,
    pub betti: usize,
}

/// The machine-readable output of every command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub config: ConfigEcho,
    #[serde(default)]
    pub basis_order: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sigmas: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub per_n: Vec<PerN>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub representatives: Option<Vec<Vec<Representative>>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub graded: Vec<GradedRow>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub bench: Vec<BenchCounts>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub verdicts: Vec<SuiteVerdict>,
    /// Wall-clock milliseconds; excluded from equality checks.
    #[serde(default)]
    pub timings_ms: BTreeMap<String, f64>,
}

impl ReportDocument {
    pub fn new(config: ConfigEcho) -> Self {
        ReportDocument {
            config,
            basis_order: Vec::new(),
            sigmas: Vec::new(),
            per_n: Vec::new(),
            representatives: None,
            graded: Vec::new(),
            bench: Vec::new(),
            verdicts: Vec::new(),
            timings_ms: BTreeMap::new(),
        }
    }

    pub fn with_cohomology(mut self, report: &CohomologyReport) -> Self {
        self.basis_order = report.basis_order.clone();
        self.sigmas = report.sigmas.clone();
        self.per_n = report
            .per_n
            .iter()
            .map(|l| PerN {
                n: l.n,
                dim_c_full: l.dim_c_full,
                dim_c_reduced: l.dim_c_reduced,
                dim_z: l.dim_z,
                dim_b: l.dim_b,
                betti: l.betti,
            })
            .collect();
        self.representatives = report.representatives.clone();
        for l in &report.per_n {
            self.timings_ms.insert(format!("n={:02}", l.n), l.time_ms);
        }
        self
    }

    pub fn with_bench(mut self, report: &BenchReport) -> Self {
        for r in &report.rows {
            self.bench.push(BenchCounts {
                n: r.n,
                full_cols: r.full_cols,
                reduced_cols: r.reduced_cols,
                betti: r.betti,
            });
            self.timings_ms
                .insert(format!("full n={:02}", r.n), r.full_ms);
            self.timings_ms
                .insert(format!("reduced n={:02}", r.n), r.reduced_ms);
        }
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, IoError> {
        serde_json::from_str(text)
            .map_err(|e| IoError::Parse(format!("line {} column {}: {e}", e.line(), e.column())))
    }

    /// Equality with timing fields ignored.
    pub fn eq_modulo_timing(&self, other: &Self) -> bool {
        let strip = |d: &Self| ReportDocument {
            timings_ms: BTreeMap::new(),
            ..d.clone()
        };
        strip(self) == strip(other)
    }
}

fn write_csv<R: Serialize>(header: &[&str], rows: impl IntoIterator<Item = R>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.serialize(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
}

/// Per-n table: `n,dimC_full,dimC_reduced,dimZ,dimB,betti`. The reduced
/// column is empty in full mode.
pub fn per_n_csv(rows: &[PerN]) -> String {
    write_csv(
        &["n", "dimC_full", "dimC_reduced", "dimZ", "dimB", "betti"],
        rows.iter().map(|r| {
            (
                r.n,
                r.dim_c_full,
                r.dim_c_reduced,
                r.dim_z,
                r.dim_b,
                r.betti,
            )
        }),
    )
}

pub fn graded_csv(rows: &[GradedRow]) -> String {
    write_csv(
        &["n", "degree", "betti"],
        rows.iter()
            .map(|r| (r.n, format!("({})", r.degree.join(",")), r.betti)),
    )
}

pub fn bench_csv(rows: &[BenchCounts], timings: &BTreeMap<String, f64>) -> String {
    write_csv(
        &[
            "n",
            "full_cols",
            "reduced_cols",
            "full_ms",
            "reduced_ms",
            "betti",
        ],
        rows.iter().map(|r| {
            let t = |k: &str| {
                timings
                    .get(&format!("{k} n={:02}", r.n))
                    .copied()
                    .unwrap_or(0.0)
            };
            (
                r.n,
                r.full_cols,
                r.reduced_cols,
                t("full"),
                t("reduced"),
                r.betti,
            )
        }),
    )
}

pub fn verdict_csv(verdicts: &[SuiteVerdict]) -> String {
    write_csv(
        &["suite", "subject", "check", "outcome", "detail"],
        verdicts.iter().flat_map(|v| {
            v.checks.iter().map(move |c| {
                (
                    v.suite.name(),
                    v.subject.clone(),
                    c.name.clone(),
                    format!("{:?}", c.outcome).to_lowercase(),
                    c.detail.clone(),
                )
            })
        }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{builtin_algebra, BuiltinKind};

    #[test]
    fn builtin_round_trip() {
        let (g, tag) = builtin_algebra(BuiltinKind::BorelSl, 2, FieldSpec::RATIONALS).unwrap();
        let m = make_module(&ModuleSpec::Trivial, &g).unwrap();
        let text = serde_json::to_string(&AlgebraFile::from_structures(&g, &m, &tag)).unwrap();
        let (g2, m2, tag2) = parse_algebra_str(&text).unwrap();
        assert_eq!(g2.upper_brackets(), g.upper_brackets());
        assert_eq!(g2.basis_names(), g.basis_names());
        assert_eq!(m2.kind(), ModuleKind::Trivial);
        assert_eq!(tag2, tag);
    }

    #[test]
    fn lower_triangular_entry_rejected() {
        let text =
            r#"{"field": "Q", "dim": 2, "brackets": [{"i": 1, "j": 0, "terms": [[1, "2"]]}]}"#;
        let err = parse_algebra_str(text).unwrap_err();
        assert!(matches!(err, IoError::Validation(_)));
        assert!(err
            .to_string()
            .contains("upper-triangular bracket list required"));
    }

    #[test]
    fn perturbed_adjoint_names_pair() {
        // adjoint of borel-sl(2): ad h1 = diag(0, 2), ad e12 = [[0,0],[-2,0]]
        let text = r#"{"field": "Q", "dim": 2,
            "brackets": [{"i": 0, "j": 1, "terms": [[1, "2"]]}],
            "module": {"dim": 2, "action": [[["0","0"],["0","2"]], [["0","0"],["-2","1"]]]}}"#;
        let err = parse_algebra_str(text).unwrap_err();
        assert!(matches!(err, IoError::Validation(_)));
        assert!(err.to_string().contains("(0, 1)"), "{err}");
        let ok = text.replace(r#"["-2","1"]"#, r#"["-2","0"]"#);
        assert!(parse_algebra_str(&ok).is_ok());
    }

    #[test]
    fn malformed_inputs_are_parse_errors() {
        assert!(matches!(
            parse_algebra_str("{\"field\": \"Q\",").unwrap_err(),
            IoError::Parse(_)
        ));
        let bad_scalar =
            r#"{"field": "Q", "dim": 2, "brackets": [{"i": 0, "j": 1, "terms": [[1, "x"]]}]}"#;
        let err = parse_algebra_str(bad_scalar).unwrap_err();
        assert!(err.to_string().contains("brackets[0].terms[0]"), "{err}");
        let bad_field = r#"{"field": "Fp:4", "dim": 1}"#;
        assert!(matches!(
            parse_algebra_str(bad_field).unwrap_err(),
            IoError::Parse(_)
        ));
    }

    #[test]
    fn csv_layout() {
        let rows = vec![
            PerN {
                n: 0,
                dim_c_full: 1,
                dim_c_reduced: None,
                dim_z: 1,
                dim_b: 0,
                betti: 1,
            },
            PerN {
                n: 1,
                dim_c_full: 2,
                dim_c_reduced: Some(1),
                dim_z: 1,
                dim_b: 0,
                betti: 1,
            },
        ];
        assert_eq!(
            per_n_csv(&rows),
            "n,dimC_full,dimC_reduced,dimZ,dimB,betti\n0,1,,1,0,1\n1,2,1,1,0,1\n"
        );
    }
}
