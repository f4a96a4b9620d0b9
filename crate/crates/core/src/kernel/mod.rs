//! Precision management, complex arithmetic, quadrature and finite differences.

pub mod complex;
pub mod context;
pub mod fd;
pub mod quad;

pub use complex::{decimal, flt, parse_float, pi, Complex};
pub use context::PrecisionContext;
pub use fd::{laplace_fd, xi_fd};
pub use quad::{quad_ray, RayPath};
