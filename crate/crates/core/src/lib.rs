pub mod cli;
pub mod composition;
pub mod error;
pub mod linalg;
pub mod multi;
pub mod orthopoly;
pub mod poly;
pub mod precision;
pub mod quadrature;
pub mod report;
pub mod rho_calculus;
pub mod special;
pub mod suites;

pub use error::{Error, Result};
pub use poly::Polynomial;
pub use precision::{PrecisionContext, Real};
pub use report::VerificationReport;
