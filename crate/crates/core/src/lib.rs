//! Period polynomials, Eichler integrals and mock period functions of
//! level-1 cusp forms, evaluated at configurable precision and checked
//! through residual reports.

pub mod eichler;
pub mod error;
pub mod kernel;
pub mod lfun;
pub mod mockcore;
pub mod poincare;
pub mod qforms;
pub mod regint;
pub mod report;
pub mod special;

pub use error::{Error, ErrorClass, Result};
pub use kernel::{Complex, PrecisionContext, RayPath};
pub use report::RelationReport;
