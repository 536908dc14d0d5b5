//! Scalar abstraction for the sparse linear algebra.
//!
//! The learnability computations run over exact rationals ([`Rat`]), while
//! model values and estimators use `f64`. Everything that is pure linear
//! algebra (sparse vectors, elimination, the Möbius and Walsh-Hadamard
//! transforms) is generic over [`Scalar`] so both instantiations share one
//! implementation.

use num_bigint::BigInt;
use num_traits::{Num, Signed};
use std::fmt;

/// Exact rational scalar used for all rank and kernel computations.
pub type Rat = num_rational::BigRational;

pub trait Scalar: Num + Signed + Clone + PartialEq + fmt::Debug + fmt::Display + 'static {
    fn from_int(v: i64) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_int(num) / Self::from_int(den)
    }

    /// Conversion from an exact rational (lossless for `Rat` itself).
    fn from_rat(v: &Rat) -> Self;

    fn to_f64(&self) -> f64;
}

impl Scalar for f64 {
    fn from_int(v: i64) -> Self {
        v as f64
    }

    fn from_rat(v: &Rat) -> Self {
        Scalar::to_f64(v)
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for Rat {
    fn from_int(v: i64) -> Self {
        Rat::from_integer(BigInt::from(v))
    }

    fn from_rat(v: &Rat) -> Self {
        v.clone()
    }

    fn to_f64(&self) -> f64 {
        let num = self.numer();
        let den = self.denom();
        // Good enough for display and model values; exact paths never call this.
        num_to_f64(num) / num_to_f64(den)
    }
}

fn num_to_f64(v: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    v.to_f64().unwrap_or(f64::NAN)
}

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

/// Exact conversion of a finite `f64` into a rational.
pub fn rat_from_f64(v: f64) -> Option<Rat> {
    Rat::from_float(v)
}

/// Render a rational as `p/q` (or just `p` for integers).
pub fn rat_string(v: &Rat) -> String {
    if v.is_integer() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

/// Parse `p` or `p/q`.
pub fn rat_parse(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q == BigInt::from(0) {
                None
            } else {
                Some(Rat::new(p, q))
            }
        }
        None => {
            let p: BigInt = s.parse().ok()?;
            Some(Rat::from_integer(p))
        }
    }
}
