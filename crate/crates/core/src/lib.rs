//! Exact integer linear algebra for EW matrices and their Smith normal forms.
//!
//! The crate is organised bottom-up:
//!
//! * [`exactmat`]: dense big-integer matrices, determinants, adjugates,
//!   ranks over GF(p), and the plain-text matrix format.
//! * [`snf`]: Smith normal form with optional unimodular transforms, plus a
//!   brute-force minor-gcd cross-check.
//! * [`designs`]: tournaments, bordered skew-type matrices, the two worked
//!   order-26 and order-66 EW matrices, and Barba doubling.
//! * [`verify`]: predicates and closed-form invariant-factor checks.
//! * [`search`]: exhaustive witness searches.

pub mod designs;
pub mod error;
pub mod exactmat;
pub mod num;
pub mod search;
pub mod serde_dec;
pub mod snf;
pub mod verify;

pub use designs::{BlockEwSpec, Tournament};
pub use error::{Error, Result};
pub use exactmat::IntMatrix;
pub use num_bigint::BigInt;
pub use snf::{invariant_factors, smith_normal_form, SnfResult};
pub use verify::{EwReport, PRankReport, TheoremCheck};
