//! Exact scalar fields.
//!
//! Everything above this module is generic over [`Field`]. Two
//! implementations are provided: arbitrary precision rationals and the
//! cyclotomic fields `Q(ζ_r)`.

mod cyclotomic;

pub use cyclotomic::{cyclotomic_polynomial, Cyclotomic, MAX_CYCLOTOMIC_ORDER};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt::Debug;
use std::hash::Hash;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

/// An exact field of characteristic zero.
pub trait Field:
    Clone
    + Debug
    + PartialEq
    + Eq
    + Hash
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
    + for<'a> MulAssign<&'a Self>
{
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;

    fn from_rational(q: BigRational) -> Self;

    fn from_i64(v: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(v)))
    }

    /// A primitive `order`-th root of unity, if the field can hold one.
    fn root_of_unity(order: u32) -> Option<Self>;

    /// The value as a rational, if it is one.
    fn to_rational(&self) -> Option<BigRational>;

    /// Coefficients on the power basis `1, z, z^2, ...`, zero entries omitted.
    fn power_coefficients(&self) -> Vec<(u32, BigRational)>;

    /// Root-of-unity order used to interpret `z`, or 1 for plain rationals.
    fn ambient_order(&self) -> u32;

    fn is_rational(&self) -> bool {
        self.to_rational().is_some()
    }

    /// Embeds a cyclotomic value, if this field contains it.
    fn from_cyclotomic(c: &Cyclotomic) -> Option<Self>;
}

/// The value as an element of `Q(ζ_r)`.
pub fn to_cyclotomic<F: Field>(c: &F) -> Cyclotomic {
    let order = c.ambient_order();
    let z = Cyclotomic::root_of_unity(order).expect("supported order");
    let mut acc = Cyclotomic::zero();
    for (pow, q) in c.power_coefficients() {
        let mut t = Cyclotomic::from_rational(q);
        for _ in 0..pow {
            t *= &z;
        }
        acc += &t;
    }
    acc
}

impl Field for BigRational {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn from_rational(q: BigRational) -> Self {
        q
    }

    fn root_of_unity(order: u32) -> Option<Self> {
        match order {
            1 => Some(BigRational::one()),
            2 => Some(-BigRational::one()),
            _ => None,
        }
    }

    fn to_rational(&self) -> Option<BigRational> {
        Some(self.clone())
    }

    fn power_coefficients(&self) -> Vec<(u32, BigRational)> {
        if self.is_zero() {
            Vec::new()
        } else {
            vec![(0, self.clone())]
        }
    }

    fn ambient_order(&self) -> u32 {
        1
    }

    fn from_cyclotomic(c: &Cyclotomic) -> Option<Self> {
        c.to_rational()
    }
}

/// Formats a rational as `p` or `p/q`.
pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Formats a scalar for the polynomial text format: a rational `p/q`, or a
/// parenthesised combination of powers of `z`.
pub fn format_scalar<F: Field>(c: &F) -> String {
    if let Some(q) = c.to_rational() {
        return format_rational(&q);
    }
    let mut out = String::from("(");
    for (idx, (pow, q)) in c.power_coefficients().iter().enumerate() {
        let neg = q.is_negative();
        let a = q.abs();
        if idx == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let zpart = match pow {
            0 => String::new(),
            1 => "z".to_string(),
            p => format!("z^{p}"),
        };
        if zpart.is_empty() {
            out.push_str(&format_rational(&a));
        } else if a.is_one() {
            out.push_str(&zpart);
        } else {
            out.push_str(&format!("{}*{}", format_rational(&a), zpart));
        }
    }
    out.push(')');
    out
}

#[cfg(test)]
pub(crate) fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_roots_of_unity() {
        assert_eq!(BigRational::root_of_unity(2), Some(rat(-1, 1)));
        assert_eq!(BigRational::root_of_unity(3), None);
    }

    #[test]
    fn rational_formatting() {
        assert_eq!(format_rational(&rat(-6, 4)), "-3/2");
        assert_eq!(format_scalar(&rat(5, 1)), "5");
    }
}
