//! Numerical toolkit for generalized Volterra-type integral operators on
//! Bloch-type spaces of the unit disc.
//!
//! Functions are either truncated Taylor series ([`AnalyticFn`]) or symbolic
//! closed forms ([`FunctionSpec`]). Weighted suprema are estimated on a
//! [`DiskGrid`] with local refinement.
//!
//! ```
//! use bloch_volterra::{bloch, BlochParams, DiskGrid, FunctionSpec};
//!
//! let f = FunctionSpec::poly_real(&[0.0, 1.0]);
//! let est = bloch::norm(&f, BlochParams::new(1.0).unwrap(), &DiskGrid::default()).unwrap();
//! assert!((est.value - 1.0).abs() < 1e-9);
//! ```

pub mod bloch;
pub mod criteria;
pub mod error;
pub mod funcspec;
pub mod grid;
pub mod ode;
pub mod operators;
pub mod taylor;
pub mod testfns;
pub mod verify;

pub use bloch::{BlochParams, DiskFunction, NormEstimate};
pub use error::{Error, Result};
pub use funcspec::FunctionSpec;
pub use grid::DiskGrid;
pub use operators::{GenTerm, OperatorSpec};
pub use taylor::AnalyticFn;
pub use testfns::{FamilyKind, TestFamily};

// Book chapters, compiled as doctests so the guide stays in sync.
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/introduction.md")]
pub struct BookIntroduction;
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/series.md")]
pub struct BookSeries;
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/closed-forms.md")]
pub struct BookClosedForms;
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/bloch-norms.md")]
pub struct BookBlochNorms;
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/operators.md")]
pub struct BookOperators;
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/test-functions.md")]
pub struct BookTestFunctions;
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/criteria.md")]
pub struct BookCriteria;
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/ode.md")]
pub struct BookOde;
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
pub struct BookCli;
