//! Exact computation of trigraded multiplicative spectral sequences arising
//! from torus actions on `GL_n` and Stiefel varieties, together with an
//! independent Ext oracle built on truncated bar resolutions.
//!
//! The crate is organized around a handful of subsystems:
//!
//! * [`coeff`]: coefficient rings (Z, Z/m, Q, localized integers) with
//!   canonical element representations.
//! * [`linalg`]: exact kernels, solves, and Smith normal form over the
//!   integers and over fields.
//! * [`symmetric`]: elementary symmetric polynomials, weight polynomials,
//!   the approximate-extension construction, prime splitting, and the
//!   antisymmetric decomposition.
//! * [`graded`]: trigraded algebra presentations with Koszul-signed
//!   multiplication and the input cohomology rings.
//! * [`ext`]: finite algebras and modules, bar resolutions, Ext via bar
//!   cochains, and the closed-form Ext constructors.
//! * [`ss`]: the page/differential runner: Leibniz propagation, per-degree
//!   homology, degeneration detection.
//! * [`scenario`]: the catalog of named computations with closed-form
//!   cross-checks.
//! * [`render`]: JSON output documents and text charts.

pub mod coeff;
pub mod error;
pub mod ext;
pub mod graded;
pub mod linalg;
pub mod par;
pub mod render;
pub mod scenario;
pub mod ss;
pub mod symmetric;

pub use coeff::{CoeffRing, RingElement};
pub use error::Error;
pub use graded::{AlgebraElement, AlgebraPresentation, Generator, GeneratorKind, Monomial, Tridegree};
