//! Special functions, quantiles and the normality test used by the estimators.

mod chi2;
mod normal;
mod probability;
mod shapiro;
mod solve;
mod special;
mod student;

pub use chi2::{chi2_cdf, chi2_quantile};
pub use normal::{normal_cdf, normal_quantile};
pub use probability::{Probability, QuantileResult};
pub use shapiro::{shapiro_wilk, ShapiroWilk};
pub use special::{beta_reg, gamma_pq, ln_beta, ln_gamma};
pub use student::{student_cdf, student_quantile};

pub(crate) use normal::upper_tail as normal_upper_tail;
