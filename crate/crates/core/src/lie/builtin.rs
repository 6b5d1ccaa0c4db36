//! Builders whose structure constants come from explicit matrix commutators.

use std::fmt;
use std::str::FromStr;

use crate::field::{FieldElement, FieldSpec};
use crate::linalg::DenseMatrix;

use super::{BracketEntry, CartanTag, LieAlgebra, LieError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BuiltinKind {
    Sl,
    BorelSl,
    NilpotentSl,
    CartanSl,
    Abelian,
    Heisenberg,
}

impl BuiltinKind {
    pub const ALL: [BuiltinKind; 6] = [
        BuiltinKind::Sl,
        BuiltinKind::BorelSl,
        BuiltinKind::NilpotentSl,
        BuiltinKind::CartanSl,
        BuiltinKind::Abelian,
        BuiltinKind::Heisenberg,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            BuiltinKind::Sl => "sl",
            BuiltinKind::BorelSl => "borel-sl",
            BuiltinKind::NilpotentSl => "nilpotent-sl",
            BuiltinKind::CartanSl => "cartan-sl",
            BuiltinKind::Abelian => "abelian",
            BuiltinKind::Heisenberg => "heisenberg",
        }
    }

    /// Dimension of the algebra built with `param`.
    pub fn dim(&self, param: usize) -> usize {
        let n = param;
        match self {
            BuiltinKind::Sl => n * n - 1,
            BuiltinKind::BorelSl => (n - 1) + n * (n - 1) / 2,
            BuiltinKind::NilpotentSl => n * (n - 1) / 2,
            BuiltinKind::CartanSl => n - 1,
            BuiltinKind::Abelian => n,
            BuiltinKind::Heisenberg => 2 * n + 1,
        }
    }
}

impl fmt::Display for BuiltinKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BuiltinKind {
    type Err = LieError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.trim().to_ascii_lowercase().replace('_', "-");
        BuiltinKind::ALL
            .into_iter()
            .find(|k| k.name() == norm)
            .ok_or_else(|| LieError::InvalidParameter(format!("unknown builtin algebra {s:?}")))
    }
}

fn unit(field: FieldSpec, n: usize, i: usize, j: usize) -> DenseMatrix {
    let mut m = DenseMatrix::zeros(field, n, n);
    m[(i, j)] = field.one();
    m
}

fn root_name(n: usize, i: usize, j: usize) -> String {
    if n < 10 {
        format!("e{}{}", i + 1, j + 1)
    } else {
        format!("e{}_{}", i + 1, j + 1)
    }
}

/// A basis of matrices inside `gl(N)` made of Cartan elements
/// `h_i = e_ii - e_{i+1,i+1}` and matrix units `e_ij` with `i != j`.
struct MatrixBasis {
    n: usize,
    field: FieldSpec,
    names: Vec<String>,
    matrices: Vec<DenseMatrix>,
    cartan: Vec<usize>,
}

impl MatrixBasis {
    fn new(field: FieldSpec, n: usize, with_cartan: bool, upper: bool, lower: bool) -> Self {
        let mut b = MatrixBasis {
            n,
            field,
            names: Vec::new(),
            matrices: Vec::new(),
            cartan: Vec::new(),
        };
        if with_cartan {
            for i in 0..n - 1 {
                let h = unit(field, n, i, i).sub(&unit(field, n, i + 1, i + 1));
                b.cartan.push(b.names.len());
                b.names.push(format!("h{}", i + 1));
                b.matrices.push(h);
            }
        }
        if upper {
            for i in 0..n {
                for j in i + 1..n {
                    b.names.push(root_name(n, i, j));
                    b.matrices.push(unit(field, n, i, j));
                }
            }
        }
        if lower {
            for i in 0..n {
                for j in 0..i {
                    b.names.push(root_name(n, i, j));
                    b.matrices.push(unit(field, n, i, j));
                }
            }
        }
        b
    }

    /// Coordinates of a trace-zero matrix in this basis. The Cartan part is
    /// recovered from cumulative diagonal sums: `c_i = d_1 + ... + d_i`.
    fn coordinates(&self, m: &DenseMatrix) -> Vec<FieldElement> {
        let mut coords = vec![self.field.zero(); self.matrices.len()];
        let mut cumulative = self.field.zero();
        for (slot, i) in self.cartan.iter().zip(0..) {
            cumulative += &m[(i, i)];
            coords[*slot] = cumulative.clone();
        }
        for (idx, b) in self.matrices.iter().enumerate() {
            if self.cartan.contains(&idx) {
                continue;
            }
            let (i, j) = (0..self.n * self.n)
                .map(|t| (t / self.n, t % self.n))
                .find(|&(i, j)| !b[(i, j)].is_zero())
                .expect("matrix unit");
            coords[idx] = m[(i, j)].clone();
        }
        // Reconstruction guards against a commutator leaving the span.
        let mut back = DenseMatrix::zeros(self.field, self.n, self.n);
        for (c, b) in coords.iter().zip(&self.matrices) {
            back = back.add(&b.scale(c));
        }
        assert_eq!(&back, m, "commutator outside the span of the basis");
        coords
    }

    fn brackets(&self) -> Vec<BracketEntry> {
        let d = self.matrices.len();
        let mut out = Vec::new();
        for i in 0..d {
            for j in i + 1..d {
                let c = self.matrices[i].commutator(&self.matrices[j]);
                let terms: Vec<(usize, FieldElement)> = self
                    .coordinates(&c)
                    .into_iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .collect();
                if !terms.is_empty() {
                    out.push(BracketEntry { i, j, terms });
                }
            }
        }
        out
    }
}

/// Builds one of the named algebras together with its Cartan tag.
///
/// `param` is `N >= 2` for the `sl` family, the dimension for `abelian`, and
/// `n >= 1` for the `(2n+1)`-dimensional Heisenberg algebra. Basis order for
/// the `sl` family: `h_1..h_{N-1}`, then upper `e_ij` lexicographically, then
/// lower `e_ij` lexicographically.
pub fn builtin_algebra(
    kind: BuiltinKind,
    param: usize,
    field: FieldSpec,
) -> Result<(LieAlgebra, CartanTag), LieError> {
    let label = format!("{kind}:{param}");
    let basis = match kind {
        BuiltinKind::Sl
        | BuiltinKind::BorelSl
        | BuiltinKind::NilpotentSl
        | BuiltinKind::CartanSl => {
            if param < 2 {
                return Err(LieError::InvalidParameter(format!(
                    "{kind} needs N >= 2, got {param}"
                )));
            }
            match kind {
                BuiltinKind::Sl => MatrixBasis::new(field, param, true, true, true),
                BuiltinKind::BorelSl => MatrixBasis::new(field, param, true, true, false),
                BuiltinKind::NilpotentSl => MatrixBasis::new(field, param, false, true, false),
                _ => MatrixBasis::new(field, param, true, false, false),
            }
        }
        BuiltinKind::Abelian => {
            if param < 1 {
                return Err(LieError::InvalidParameter(
                    "abelian needs dimension >= 1".to_string(),
                ));
            }
            let g = LieAlgebra::new(field, param, Vec::new(), Vec::new())?.with_label(label);
            return Ok((g, CartanTag::default()));
        }
        BuiltinKind::Heisenberg => {
            if param < 1 {
                return Err(LieError::InvalidParameter(
                    "heisenberg needs n >= 1".to_string(),
                ));
            }
            let n = param;
            let brackets = (0..n)
                .map(|i| BracketEntry {
                    i,
                    j: n + i,
                    terms: vec![(2 * n, field.one())],
                })
                .collect();
            let g = LieAlgebra::new(field, 2 * n + 1, brackets, Vec::new())?.with_label(label);
            return Ok((g, CartanTag::default()));
        }
    };
    let g = LieAlgebra::new(
        field,
        basis.names.len(),
        basis.brackets(),
        basis.names.clone(),
    )?
    .with_label(label);
    let tag = if kind == BuiltinKind::NilpotentSl {
        CartanTag::default()
    } else {
        CartanTag::new(&g, basis.cartan.clone())?
    };
    Ok((g, tag))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{make_module, ModuleSpec};

    fn q(v: i64) -> FieldElement {
        FieldSpec::RATIONALS.from_i64(v)
    }

    #[test]
    fn borel_two() {
        let (g, tag) = builtin_algebra(BuiltinKind::BorelSl, 2, FieldSpec::RATIONALS).unwrap();
        assert_eq!(g.basis_names(), ["h1", "e12"]);
        assert_eq!(g.bracket_basis(0, 1), &vec![(1, q(2))]);
        assert_eq!(tag.indices, vec![0]);
    }

    #[test]
    fn borel_three() {
        let (g, _) = builtin_algebra(BuiltinKind::BorelSl, 3, FieldSpec::RATIONALS).unwrap();
        assert_eq!(g.basis_names(), ["h1", "h2", "e12", "e13", "e23"]);
        assert_eq!(g.bracket_basis(0, 2), &vec![(2, q(2))]);
        assert_eq!(g.bracket_basis(1, 2), &vec![(2, q(-1))]);
        assert_eq!(g.bracket_basis(2, 4), &vec![(3, q(1))]);
    }

    #[test]
    fn abelian_three() {
        let (g, tag) = builtin_algebra(BuiltinKind::Abelian, 3, FieldSpec::RATIONALS).unwrap();
        assert_eq!(g.dim(), 3);
        assert!(g.upper_brackets().is_empty());
        assert!(tag.is_empty());
    }

    #[test]
    fn characteristic_two_kills_the_weight() {
        let f2 = FieldSpec::prime(2).unwrap();
        let (g, _) = builtin_algebra(BuiltinKind::BorelSl, 2, f2).unwrap();
        assert!(g.bracket_basis(0, 1).is_empty());
    }

    #[test]
    fn small_n_rejected() {
        for kind in [
            BuiltinKind::Sl,
            BuiltinKind::BorelSl,
            BuiltinKind::NilpotentSl,
            BuiltinKind::CartanSl,
        ] {
            assert!(builtin_algebra(kind, 1, FieldSpec::RATIONALS).is_err());
        }
    }

    #[test]
    fn dimensions_and_validity() {
        for field in [
            FieldSpec::RATIONALS,
            FieldSpec::prime(2).unwrap(),
            FieldSpec::prime(3).unwrap(),
        ] {
            for kind in BuiltinKind::ALL {
                for param in 1..=5 {
                    let Ok((g, tag)) = builtin_algebra(kind, param, field) else {
                        assert!(param < 2);
                        continue;
                    };
                    assert_eq!(g.dim(), kind.dim(param));
                    if g.dim() > 14 {
                        continue;
                    }
                    // antisymmetry entrywise
                    for i in 0..g.dim() {
                        assert!(g.bracket_basis(i, i).is_empty());
                        for j in 0..g.dim() {
                            let neg: Vec<_> = g
                                .bracket_basis(j, i)
                                .iter()
                                .map(|(k, c)| (*k, -c))
                                .collect();
                            assert_eq!(g.bracket_basis(i, j), &neg);
                        }
                    }
                    // adjoint passes the representation law (checked in make_module)
                    make_module(&ModuleSpec::Adjoint, &g).unwrap();
                    for (a, &i) in tag.indices.iter().enumerate() {
                        for &j in &tag.indices[a + 1..] {
                            assert!(g.bracket_basis(i, j).is_empty());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn parse_kind() {
        assert_eq!(
            "borel_sl".parse::<BuiltinKind>().unwrap(),
            BuiltinKind::BorelSl
        );
        assert_eq!(
            "borel-sl".parse::<BuiltinKind>().unwrap(),
            BuiltinKind::BorelSl
        );
        assert!("so".parse::<BuiltinKind>().is_err());
    }
}
