//! Coefficient algebra: Laurent polynomials in `U`, polynomials in
//! `T_1..T_d` over them, zeta forms over `prod (1 - U^-1 T_i)`, specialized
//! rational functions, and the closed-form classes.

pub mod classes;
pub mod poly;
pub mod ratfunc;
pub mod upoly;
pub mod zetaform;

pub use classes::{class_in, class_j, class_units_jet};
pub use poly::{Coefficient, Poly, TPoly};
pub use ratfunc::{LinearFactor, RationalFunction};
pub use upoly::{DivisionError, UPoly};
pub use zetaform::ZetaForm;
