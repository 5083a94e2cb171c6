//! Assembly of the universal zeta function, its specializations and checks.

pub mod assemble;
pub mod checks;
pub mod report;

pub use assemble::{
    at_q_one, cartier_local_factor, cartier_local_factor_symbolic, class_at, monodromy_zeta,
    poincare_series, single_variable, specialize_symbolic, specialize_u, specialize_u_one,
    universal_zeta, universal_zeta_by_orthants, ZetaError,
};
pub use checks::Outcome;
pub use report::{run_report, CheckResult, CheckSelection, CheckStatus, ReportInput, ZetaReport};
