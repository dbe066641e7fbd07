//! Upper bounds on two-colour Ramsey numbers and the numeric checks behind them.

pub mod binom;
pub mod checks;
pub mod classic;
pub mod smooth;
pub mod value;

pub use binom::{binomial, log_binomial};
pub use classic::{conlon_bound, es_bound, es_recurrence_table, graham_rodl_bound, thomason_bound, RamseyTable};
pub use smooth::{alpha, beta, kappa, phi, Derivs};
pub use value::{BoundParams, BoundValue, Term};
