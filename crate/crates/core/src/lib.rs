//! Exact construction and numerical verification of the Atkin orthogonal
//! polynomials and the associated Jacobi families they are built from.
//!
//! Symbolic work is exact over [`Rational`]; analytic identities are checked
//! in double precision with explicit error estimates. Independent work items
//! (primes, quadrature abscissae) run through [`Execution`], which uses rayon
//! when the `parallel` feature is enabled.

pub mod acceptance;
pub mod asymptotic;
pub mod atkin;
pub mod error;
pub mod exact;
pub mod gamma;
pub mod genfun;
pub mod hypergeom;
pub mod jacobi;
pub mod poly;
pub mod quadrature;
pub mod supersingular;
pub mod weight;

pub use atkin::{atkin, atkin_normalized, AtkinFamily, Scale};
pub use error::{Error, Result};
pub use exact::Rational;
pub use hypergeom::{HypSeriesSpec, RealValue};
pub use jacobi::AJParams;
pub use poly::RatPoly;
pub use supersingular::{Fp2Element, FpPoly};

use serde::{Deserialize, Serialize};

/// How independent work items are scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Execution {
    Sequential,
    /// Rayon's global pool; identical to `Sequential` without the `parallel` feature.
    #[default]
    Parallel,
}

impl Execution {
    /// `items.iter().map(f).collect()`, order preserved.
    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => {
                use rayon::prelude::*;
                items.par_iter().map(f).collect()
            }
            _ => items.iter().map(f).collect(),
        }
    }

    /// Whether work actually fans out across threads.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_preserves_order() {
        let items: Vec<u64> = (0..1000).collect();
        let seq = Execution::Sequential.map(&items, |x| x * x);
        let par = Execution::Parallel.map(&items, |x| x * x);
        assert_eq!(seq, par);
        assert_eq!(seq[999], 998001);
    }
}
