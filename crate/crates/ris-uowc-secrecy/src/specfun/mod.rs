//! Special-function and quadrature kernel: log-gamma, incomplete gamma,
//! analytically continued Beta, Meijer G, and adaptive semi-infinite
//! quadrature. All operations are pure functions.

pub mod gamma;
pub mod meijer;
pub mod quad;

pub use gamma::{beta_ac, gamma as gamma_fn, gen_binomial, ln_gamma, ln_gamma_complex, ln_gamma_sign, regularized_lower_gamma};
pub use meijer::{meijer_g, MeijerGSpec};
pub use quad::{integrate, integrate_semi_infinite, QuadraturePolicy, QuadratureResult};

use crate::error::{Error, Result};

/// The parameter sequence z/y, (z+1)/y, ..., (z+y-1)/y used by the
/// power-of-argument Meijer-G identities.
pub fn delta_seq(y: u32, z: f64) -> Result<Vec<f64>> {
    if y == 0 {
        return Err(Error::Domain("delta_seq requires y >= 1".into()));
    }
    Ok((0..y).map(|j| (z + j as f64) / y as f64).collect())
}
