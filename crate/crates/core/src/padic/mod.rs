//! Truncated arithmetic in unramified extensions of Q_p.

mod conway;
mod field;
pub(crate) mod fp;
mod scalar;

pub use field::UnramifiedField;
pub(crate) use field::is_prime;
pub use scalar::PadicScalar;
