//! Python bindings: algebra construction, Betti numbers (full or degree-zero
//! reduced), graded Betti numbers, invariants and the Borel check.

use std::path::PathBuf;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use liecohom_core::driver::{self, Mode};
use liecohom_core::field::{FieldElement, FieldSpec};
use liecohom_core::grading::{make_grading, Grading};
use liecohom_core::io::parse_algebra_file;
use liecohom_core::lie::{
    builtin_algebra, make_module, BuiltinKind, CartanTag, GModule, LieAlgebra, ModuleSpec,
};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn module_spec(name: &str) -> PyResult<ModuleSpec> {
    match name.to_ascii_lowercase().as_str() {
        "trivial" => Ok(ModuleSpec::Trivial),
        "adjoint" => Ok(ModuleSpec::Adjoint),
        other => Err(err(format!(
            "module must be trivial or adjoint, got {other:?}"
        ))),
    }
}

/// A Lie algebra together with the module its cochains take values in.
#[pyclass(frozen, module = "liecohom")]
struct Algebra {
    algebra: LieAlgebra,
    module: GModule,
    tag: CartanTag,
}

impl Algebra {
    /// Grading from explicit elements, or from the Cartan tag when `None`.
    fn grading(&self, sigmas: Option<Vec<Vec<String>>>) -> PyResult<Grading> {
        let field = self.algebra.field();
        let elements = match sigmas {
            None => self.tag.elements(&self.algebra),
            Some(list) => list
                .iter()
                .map(|s| {
                    if s.len() != self.algebra.dim() {
                        return Err(err(format!(
                            "sigma needs {} coordinates",
                            self.algebra.dim()
                        )));
                    }
                    s.iter()
                        .map(|c| field.parse_element(c).map_err(err))
                        .collect::<PyResult<Vec<FieldElement>>>()
                })
                .collect::<PyResult<Vec<_>>>()?,
        };
        if elements.is_empty() {
            return Err(err("no grading elements"));
        }
        make_grading(&self.algebra, &self.module, &elements).map_err(err)
    }
}

#[pymethods]
impl Algebra {
    /// Builtin family member, e.g. `Algebra.builtin("borel-sl", 3)`.
    #[staticmethod]
    #[pyo3(signature = (name, param, field = "Q", module = "trivial"))]
    fn builtin(name: &str, param: usize, field: &str, module: &str) -> PyResult<Self> {
        let kind: BuiltinKind = name.parse().map_err(err)?;
        let field: FieldSpec = field.parse().map_err(err)?;
        let (algebra, tag) = builtin_algebra(kind, param, field).map_err(err)?;
        let module = make_module(&module_spec(module)?, &algebra).map_err(err)?;
        Ok(Algebra {
            algebra,
            module,
            tag,
        })
    }

    /// Structure constants from a JSON file; `module` overrides the file's.
    #[staticmethod]
    #[pyo3(signature = (path, module = None))]
    fn from_file(path: PathBuf, module: Option<&str>) -> PyResult<Self> {
        let (algebra, file_module, tag) = parse_algebra_file(&path).map_err(err)?;
        let module = match module {
            Some(name) => make_module(&module_spec(name)?, &algebra).map_err(err)?,
            None => file_module,
        };
        Ok(Algebra {
            algebra,
            module,
            tag,
        })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.algebra.dim()
    }

    #[getter]
    fn module_dim(&self) -> usize {
        self.module.dim()
    }

    #[getter]
    fn field(&self) -> String {
        self.algebra.field().to_string()
    }

    #[getter]
    fn basis(&self) -> Vec<String> {
        self.algebra.basis_names().to_vec()
    }

    /// Betti numbers for n = 0..=dim. With `reduce`, only the degree-zero
    /// subcomplex of the grading by `sigmas` (default: Cartan) is used.
    #[pyo3(signature = (reduce = false, sigmas = None, max_n = None))]
    fn betti(
        &self,
        py: Python<'_>,
        reduce: bool,
        sigmas: Option<Vec<Vec<String>>>,
        max_n: Option<usize>,
    ) -> PyResult<Vec<usize>> {
        let mode = if reduce || sigmas.is_some() {
            Mode::Reduced(self.grading(sigmas)?)
        } else {
            Mode::Full
        };
        let report = py
            .detach(|| driver::betti_numbers(&self.algebra, &self.module, &mode, max_n, false))
            .map_err(err)?;
        Ok(report.betti())
    }

    /// Nonzero entries of `H^n` split by degree vector, keyed by tuples of strings.
    #[pyo3(signature = (n, sigmas = None))]
    fn graded_betti<'py>(
        &self,
        py: Python<'py>,
        n: usize,
        sigmas: Option<Vec<Vec<String>>>,
    ) -> PyResult<Bound<'py, PyDict>> {
        let grading = self.grading(sigmas)?;
        let table = driver::graded_betti(&self.algebra, &self.module, &grading, n).map_err(err)?;
        let out = PyDict::new(py);
        for (deg, b) in table {
            let key: Vec<String> = deg.entries().iter().map(|e| e.to_string()).collect();
            out.set_item(pyo3::types::PyTuple::new(py, key)?, b)?;
        }
        Ok(out)
    }

    /// Basis of the invariants `M^g`, as coordinate strings.
    fn invariants(&self) -> Vec<Vec<String>> {
        driver::invariants(&self.algebra, &self.module)
            .into_iter()
            .map(|v| v.iter().map(|c| c.to_string()).collect())
            .collect()
    }

    fn __repr__(&self) -> String {
        format!(
            "Algebra({}, dim={}, field={})",
            self.algebra.label(),
            self.algebra.dim(),
            self.algebra.field()
        )
    }
}

/// Betti numbers of the Borel subalgebra of sl(N) against binomial(N-1, n).
/// `passed` is None when p <= N.
#[pyfunction]
#[pyo3(signature = (n, field = "Q"))]
fn verify_borel<'py>(py: Python<'py>, n: usize, field: &str) -> PyResult<Bound<'py, PyDict>> {
    let field: FieldSpec = field.parse().map_err(err)?;
    let v = py
        .detach(|| driver::verify_borel_theorem(n, field))
        .map_err(err)?;
    let out = PyDict::new(py);
    out.set_item("passed", v.passed())?;
    out.set_item("note", v.note())?;
    out.set_item("modes_agree", v.modes_agree)?;
    out.set_item(
        "expected",
        v.per_n.iter().map(|l| l.expected).collect::<Vec<_>>(),
    )?;
    out.set_item("full", v.per_n.iter().map(|l| l.full).collect::<Vec<_>>())?;
    out.set_item(
        "reduced",
        v.per_n.iter().map(|l| l.reduced).collect::<Vec<_>>(),
    )?;
    Ok(out)
}

#[pymodule]
fn liecohom(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Algebra>()?;
    m.add_function(wrap_pyfunction!(verify_borel, m)?)?;
    Ok(())
}
