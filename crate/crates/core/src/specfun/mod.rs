//! Special-function kernel: gamma family, associated Laguerre polynomials,
//! hypergeometric series and the Meijer G-function.

mod gamma;
mod hypergeom;
mod laguerre;
mod meijer;

pub use gamma::{gamma, ln_gamma, ln_gamma_complex};
#[allow(unused_imports)]
pub(crate) use gamma::ln_gamma_unchecked;
pub use hypergeom::{hyp0f1, hyp2f1, HypergeomSpec};
pub use laguerre::{laguerre_assoc, laguerre_assoc_all, laguerre_derivative_identities};
pub use meijer::{meijer_g, MeijerGSpec};
