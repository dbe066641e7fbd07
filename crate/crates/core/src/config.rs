use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hp::HpFloat;

/// Run-wide settings: working precision and the constants that the bounds
/// only assert to exist.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Config {
    pub precision_bits: u32,
    pub c: f64,
    pub d: f64,
    #[serde(rename = "A")]
    pub a: f64,
    pub search_n_guard: usize,
    pub threads: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            precision_bits: 256,
            c: 1.0,
            d: 1.0,
            a: 1.0,
            search_n_guard: 20,
            threads: std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1),
        }
    }
}

impl Config {
    pub fn validate(&self) -> Result<()> {
        if self.precision_bits < 64 {
            return Err(Error::InvalidArgument(format!(
                "precision_bits must be >= 64 (got {})",
                self.precision_bits
            )));
        }
        for (name, v) in [("c", self.c), ("d", self.d), ("A", self.a)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidArgument(format!("{name} must be finite and positive")));
            }
        }
        if self.threads == 0 {
            return Err(Error::InvalidArgument("threads must be >= 1".into()));
        }
        Ok(())
    }

    /// Significant decimal digits shown for values computed at this precision.
    pub fn digits(&self) -> usize {
        HpFloat::decimal_digits_for(self.precision_bits)
    }
}
