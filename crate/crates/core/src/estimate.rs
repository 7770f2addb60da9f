use serde::{Deserialize, Serialize};

/// A nonnegative sum evaluated by truncation.
///
/// Every Bohr-type sum in this crate has nonnegative terms, so the computed
/// head `value` is a lower bound and `value + error` an upper bound on the
/// full series. When `certified` is false the tail of the series was not
/// covered by any declared majorant and `error` only accounts for the parts
/// that were.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub certified: bool,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Estimate {
            value,
            error: 0.0,
            certified: true,
        }
    }

    pub fn upper(&self) -> f64 {
        self.value + self.error
    }

    /// Termwise sum of two estimates.
    pub fn combine(self, other: Estimate) -> Estimate {
        Estimate {
            value: self.value + other.value,
            error: self.error + other.error,
            certified: self.certified && other.certified,
        }
    }
}
