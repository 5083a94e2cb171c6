//! Universal motivic zeta functions of curve singularities.
pub mod cli;
pub mod linalg;
pub mod localring;
pub mod motivic;
pub mod oracle;
pub mod series;
pub mod valuesemigroup;
pub mod zeta;
