//! Half-integers, stored as twice their value.
//!
//! Spins, weights and grading labels throughout the crate live in
//! `(1/2)Z`. Storing `2x` keeps all arithmetic in `i64`.

use std::fmt;

use crate::error::Error;

/// A half-integer `x`, stored as `2x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Half(i64);

impl Half {
    pub const ZERO: Half = Half(0);
    pub const HALF: Half = Half(1);
    pub const ONE: Half = Half(2);

    /// From twice the value.
    pub const fn from_twice(t: i64) -> Self {
        Half(t)
    }

    /// From an integer.
    pub const fn int(n: i64) -> Self {
        Half(2 * n)
    }

    pub const fn twice(self) -> i64 {
        self.0
    }

    pub const fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    /// The integer value, when integral.
    pub fn as_integer(self) -> Option<i64> {
        if self.is_integer() {
            Some(self.0 / 2)
        } else {
            None
        }
    }

    pub fn abs(self) -> Half {
        Half(self.0.abs())
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / 2.0
    }

    /// Inclusive range `lo, lo+1, ..., hi` (integer steps).
    pub fn range_incl(lo: Half, hi: Half) -> impl Iterator<Item = Half> {
        (lo.0..=hi.0).step_by(2).map(Half)
    }

    /// Parses `"3"`, `"-2"`, `"3/2"`, `"-1/2"`.
    pub fn parse(s: &str) -> Result<Half, Error> {
        let bad = || Error::Parse {
            offset: 0,
            message: format!("invalid half-integer `{s}`"),
        };
        if let Some((num, den)) = s.split_once('/') {
            if den.trim() != "2" {
                return Err(bad());
            }
            let n: i64 = num.trim().parse().map_err(|_| bad())?;
            Ok(Half(n))
        } else {
            let n: i64 = s.trim().parse().map_err(|_| bad())?;
            Ok(Half::int(n))
        }
    }
}

impl std::ops::Add for Half {
    type Output = Half;
    fn add(self, rhs: Half) -> Half {
        Half(self.0 + rhs.0)
    }
}

impl std::ops::Sub for Half {
    type Output = Half;
    fn sub(self, rhs: Half) -> Half {
        Half(self.0 - rhs.0)
    }
}

impl std::ops::Neg for Half {
    type Output = Half;
    fn neg(self) -> Half {
        Half(-self.0)
    }
}

impl fmt::Display for Half {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}
