pub mod cli;
pub mod error;
pub mod hardy;
pub mod lp_semigroup;
pub mod lp_system;
pub mod probes;
pub mod quadrature;
pub mod scattering;
pub mod semigroups;
pub mod tolerances;

pub use error::{Error, Result};
