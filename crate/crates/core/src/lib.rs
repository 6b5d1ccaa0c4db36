//! Exact Chevalley–Eilenberg cohomology of finite-dimensional Lie algebras
//! over the rationals and prime fields, together with the reduction to the
//! degree-zero subcomplex of a grading by commuting ad-semisimple elements.

pub mod cli;
pub mod complex;
pub mod driver;
pub mod field;
pub mod grading;
pub mod io;
pub mod lie;
pub mod linalg;
pub mod suites;
