#![no_std]
extern crate alloc;

pub mod error;
pub mod expr;
pub mod gaussian;
pub mod gevrey;
pub mod harness;
mod linalg;
pub mod star;
pub mod theta;
pub mod wightman;

/// Crate version, recorded in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use expr::{box_integral, format_expr, parse_expr, BoxDomain, Expr, MultiIndex, Term, Wave};
pub use gaussian::GaussianTestFn;
pub use gevrey::{certify_convergence, term_bound, Certificate, GevreyBound, Verdict};
pub use star::{moyal_commutator, plane_wave_star, star, star_product, star_term, StarConfig, StarMode, StarResult};
pub use theta::ThetaMatrix;
pub use wightman::{smeared_two_point, star_smeared_npoint, wick_npoint, FieldSpec, NCFactor, QuadratureConfig};
