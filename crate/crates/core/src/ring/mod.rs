//! Exact coefficient arithmetic: cyclotomic rationals and multivariate
//! Laurent polynomials over them.

pub mod cyclo;
pub mod laurent;

pub use cyclo::{cyclotomic_poly, euler_phi, Cyclo};
pub use laurent::{determinant, gcd_univariate, Convention, LaurentPoly};
