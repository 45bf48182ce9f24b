//! Pseudoharmonic oscillator: spectrum, su(1,1) ladder algebra, coherent states
//! and their nonclassical statistics.

pub mod algebra;
pub mod error;
pub mod grid;
pub mod identity;
pub mod nonclassical;
pub mod quadrature;
pub mod specfun;
pub mod spectrum;
pub mod states;
pub mod verify;

pub use algebra::TruncationSpec;
pub use error::{Error, Result};
pub use grid::{GridSpec, SpacingLaw};
pub use nonclassical::{Metrics, MetricsRecord};
pub use spectrum::ModelParams;
pub use states::{Family, FockVector};
