//! Arithmetic context: native f64 or emulated d-significant-decimal-digit
//! arithmetic, with operation counting.
//!
//! In digit-limited mode every elementary result (+, -, *, /, sqrt) is
//! immediately rounded to `d` significant decimal digits, round-half-to-even
//! on the decimal significand. The rounding is exact up to the last ulp of
//! the binary carrier, which is fine for statistical experiments.

use std::cell::Cell;

use crate::error::{Error, Result};

/// Arithmetic precision: native binary f64, or round-to-d-decimal-digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarMode {
    Native,
    Digits(u32),
}

impl ScalarMode {
    /// 0 means native; d >= 4 means digit-limited. 1..=3 is rejected.
    pub fn from_digits(digits: u32) -> Result<Self> {
        match digits {
            0 => Ok(ScalarMode::Native),
            d if d >= 4 => Ok(ScalarMode::Digits(d)),
            d => Err(Error::InvalidDigits { digits: d }),
        }
    }

    pub fn digits(self) -> u32 {
        match self {
            ScalarMode::Native => 0,
            ScalarMode::Digits(d) => d,
        }
    }
}

/// Counts of the operations the cost model tracks: multiplications and
/// divisions together, and square roots separately.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OpCounter {
    pub products_and_quotients: u64,
    pub square_roots: u64,
}

/// Round `x` to `d` significant decimal digits, ties to even.
pub fn round_to_digits(x: f64, d: u32) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let mut e = x.abs().log10().floor() as i32;
    // log10 can misjudge the decade right at a power of ten
    if x.abs() >= 10f64.powi(e + 1) {
        e += 1;
    } else if x.abs() < 10f64.powi(e) {
        e -= 1;
    }
    let scale = 10f64.powi(d as i32 - 1 - e);
    (x * scale).round_ties_even() / scale
}

/// Arithmetic context shared by the reconstruction engines.
///
/// Not `Sync`: use one context per thread. Counting covers every operation
/// routed through the context, whatever the precision mode.
#[derive(Debug)]
pub struct Arith {
    mode: ScalarMode,
    products_and_quotients: Cell<u64>,
    square_roots: Cell<u64>,
}

impl Arith {
    pub fn new(mode: ScalarMode) -> Self {
        Arith {
            mode,
            products_and_quotients: Cell::new(0),
            square_roots: Cell::new(0),
        }
    }

    pub fn native() -> Self {
        Arith::new(ScalarMode::Native)
    }

    pub fn with_digits(digits: u32) -> Result<Self> {
        Ok(Arith::new(ScalarMode::from_digits(digits)?))
    }

    pub fn mode(&self) -> ScalarMode {
        self.mode
    }

    pub fn is_native(&self) -> bool {
        self.mode == ScalarMode::Native
    }

    #[inline]
    fn round(&self, x: f64) -> f64 {
        match self.mode {
            ScalarMode::Native => x,
            ScalarMode::Digits(d) => round_to_digits(x, d),
        }
    }

    #[inline]
    pub fn add(&self, a: f64, b: f64) -> f64 {
        self.round(a + b)
    }

    #[inline]
    pub fn sub(&self, a: f64, b: f64) -> f64 {
        self.round(a - b)
    }

    #[inline]
    pub fn mul(&self, a: f64, b: f64) -> f64 {
        self.products_and_quotients
            .set(self.products_and_quotients.get() + 1);
        self.round(a * b)
    }

    #[inline]
    pub fn div(&self, a: f64, b: f64) -> f64 {
        self.products_and_quotients
            .set(self.products_and_quotients.get() + 1);
        self.round(a / b)
    }

    #[inline]
    pub fn sqrt(&self, a: f64) -> f64 {
        self.square_roots.set(self.square_roots.get() + 1);
        self.round(a.sqrt())
    }

    pub fn counter(&self) -> OpCounter {
        OpCounter {
            products_and_quotients: self.products_and_quotients.get(),
            square_roots: self.square_roots.get(),
        }
    }

    pub fn reset_counter(&self) {
        self.products_and_quotients.set(0);
        self.square_roots.set(0);
    }
}
