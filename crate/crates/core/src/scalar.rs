//! Floating-point width abstraction for the precision-generic solver.

use num_traits::{Float, FromPrimitive, ToPrimitive};
use std::fmt::{Debug, Display};

/// The floating-point widths the solver can run at.
///
/// Every arithmetic operation in the steppers happens in `T`; configuration
/// constants are converted from `f64` once at run start, so a binary32 run
/// never borrows binary64 intermediates. The `Display` bound doubles as the
/// serialization contract: Rust's `{}` formatting emits the shortest decimal
/// string that parses back to the identical bit pattern.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Display + Debug + Send + Sync + 'static
{
    /// Raw bit pattern, widened to `u64` so bit-equality assertions can be
    /// written generically.
    fn to_bits_u64(self) -> u64;

    /// Short name used in metadata and diagnostics ("f32" / "f64").
    fn precision_name() -> &'static str;

    /// Converts a configuration constant. Panics only if `x` cannot be
    /// represented at all, which cannot happen for finite `f64` inputs.
    fn from_config(x: f64) -> Self {
        Self::from_f64(x).expect("finite configuration constant")
    }

    /// Converts a node or level index.
    fn from_index(i: usize) -> Self {
        Self::from_usize(i).expect("grid index representable as float")
    }

    /// Widens to `f64` (exact for both supported widths).
    fn widen(self) -> f64 {
        self.to_f64().expect("float widens to f64")
    }
}

impl Scalar for f32 {
    fn to_bits_u64(self) -> u64 {
        u64::from(self.to_bits())
    }

    fn precision_name() -> &'static str {
        "f32"
    }
}

impl Scalar for f64 {
    fn to_bits_u64(self) -> u64 {
        self.to_bits()
    }

    fn precision_name() -> &'static str {
        "f64"
    }
}
