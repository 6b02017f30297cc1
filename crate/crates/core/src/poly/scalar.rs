//! Coefficient fields: exact rationals and double-precision complex numbers.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;
pub type C64 = Complex64;

/// Default absolute residual tolerance for approximate arithmetic.
pub const DEFAULT_RESIDUAL_TOL: f64 = 1e-10;

/// A field usable as polynomial coefficients.
///
/// `Rational` is exact; `C64` carries rounding and every caller that uses it
/// must say which tolerance applies.
pub trait Coeff:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const EXACT: bool;

    fn from_i64(v: i64) -> Self;
    fn from_rational(q: &Rational) -> Self;
    fn to_c64(&self) -> C64;
    fn conj(&self) -> Self;

    /// The exact value, when this scalar is an exact rational.
    fn to_rational(&self) -> Option<Rational>;

    /// A floating-point value in this field; `None` for exact fields.
    fn from_c64(z: C64) -> Option<Self>;

    fn magnitude(&self) -> f64 {
        self.to_c64().norm()
    }

    /// Sample points for interpolating a univariate polynomial of degree `< n`.
    fn interpolation_nodes(n: usize) -> Vec<Self>;

    /// Coefficients (low to high) of the polynomial through `(nodes[k], values[k])`,
    /// where `nodes` came from [`Coeff::interpolation_nodes`].
    fn interpolate(nodes: &[Self], values: &[Self]) -> Vec<Self>;
}

impl Coeff for Rational {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }

    fn to_c64(&self) -> C64 {
        C64::new(rational_to_f64(self), 0.0)
    }

    fn conj(&self) -> Self {
        self.clone()
    }

    fn to_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }

    fn from_c64(_: C64) -> Option<Self> {
        None
    }

    fn magnitude(&self) -> f64 {
        rational_to_f64(&self.abs())
    }

    fn interpolation_nodes(n: usize) -> Vec<Self> {
        (0..n as i64).map(int).collect()
    }

    fn interpolate(nodes: &[Self], values: &[Self]) -> Vec<Self> {
        newton_interpolate(nodes, values)
    }
}

impl Coeff for C64 {
    const EXACT: bool = false;

    fn from_i64(v: i64) -> Self {
        C64::new(v as f64, 0.0)
    }

    fn from_rational(q: &Rational) -> Self {
        C64::new(rational_to_f64(q), 0.0)
    }

    fn to_c64(&self) -> C64 {
        *self
    }

    fn conj(&self) -> Self {
        Complex64::conj(self)
    }

    fn to_rational(&self) -> Option<Rational> {
        None
    }

    fn from_c64(z: C64) -> Option<Self> {
        Some(z)
    }

    /// Roots of unity, so interpolation is an inverse DFT.
    fn interpolation_nodes(n: usize) -> Vec<Self> {
        (0..n)
            .map(|k| C64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / n as f64))
            .collect()
    }

    fn interpolate(nodes: &[Self], values: &[Self]) -> Vec<Self> {
        let n = nodes.len();
        (0..n)
            .map(|j| {
                let mut acc = C64::zero();
                for (k, v) in values.iter().enumerate() {
                    let w = C64::from_polar(
                        1.0,
                        -2.0 * std::f64::consts::PI * ((j * k) % n) as f64 / n as f64,
                    );
                    acc += v * w;
                }
                acc / n as f64
            })
            .collect()
    }
}

/// Newton divided differences, expanded to monomial coefficients (low to high).
pub fn newton_interpolate<C: Coeff>(nodes: &[C], values: &[C]) -> Vec<C> {
    let n = nodes.len();
    let mut dd = values.to_vec();
    for level in 1..n {
        for i in (level..n).rev() {
            dd[i] =
                (dd[i].clone() - dd[i - 1].clone()) / (nodes[i].clone() - nodes[i - level].clone());
        }
    }
    // Horner in the Newton basis
    let mut coeffs = vec![C::zero(); n];
    for i in (0..n).rev() {
        // coeffs <- coeffs * (t - nodes[i]) + dd[i]
        let mut next = vec![C::zero(); n];
        for k in 0..n {
            if coeffs[k].is_zero() {
                continue;
            }
            if k + 1 < n {
                next[k + 1] = next[k + 1].clone() + coeffs[k].clone();
            }
            next[k] = next[k].clone() - coeffs[k].clone() * nodes[i].clone();
        }
        next[0] = next[0].clone() + dd[i].clone();
        coeffs = next;
    }
    coeffs
}

pub fn rational_to_f64(q: &Rational) -> f64 {
    if let Some(v) = q.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    // huge numerator/denominator: scale by bit lengths first
    let n = q.numer();
    let d = q.denom();
    let shift = n.bits() as i64 - d.bits() as i64;
    let scaled = if shift > 0 {
        Rational::new(n.clone(), d.clone() << (shift as usize))
    } else {
        Rational::new(n.clone() << ((-shift) as usize), d.clone())
    };
    scaled.to_f64().unwrap_or(0.0) * 2f64.powi(shift as i32)
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parse `"p/q"`, `"p"`, or a decimal like `"-1.25"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let neg = whole.starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches(['-', '+']), frac);
        let n =
            BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).map_err(|_| bad())?;
        let d = num_traits::pow(BigInt::from(10), frac.len());
        let q = Rational::new(n, d);
        return Ok(if neg { -q } else { q });
    }
    let n = BigInt::from_str(s).map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}

pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Best rational approximation with denominator at most `max_den`
/// (continued fractions). Returns `None` when the approximation error exceeds `tol`.
pub fn rationalize(x: f64, max_den: i64, tol: f64) -> Option<Rational> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        if a.abs() > 1e15 {
            break;
        }
        let ai = a as i128;
        let h2 = ai * h1 + h0;
        let k2 = ai * k1 + k0;
        if k2 > max_den as i128 {
            break;
        }
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        let frac = r - a;
        if frac.abs() < 1e-15 || ((h1 as f64) / (k1 as f64) - x).abs() <= tol * 1e-3 {
            break;
        }
        r = 1.0 / frac;
    }
    if k1 == 0 {
        return None;
    }
    let approx = h1 as f64 / k1 as f64;
    if (approx - x).abs() <= tol {
        Some(Rational::new(BigInt::from(h1), BigInt::from(k1)))
    } else {
        None
    }
}

pub fn c64_is_zero(z: C64, tol: f64) -> bool {
    z.norm() <= tol
}

pub fn rational_one() -> Rational {
    Rational::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("-7").unwrap(), int(-7));
        assert_eq!(parse_rational("-1.25").unwrap(), rat(-5, 4));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert_eq!(format_rational(&rat(-9, 16)), "-9/16");
        assert_eq!(format_rational(&int(4)), "4");
    }

    #[test]
    fn rationalize_recovers_small_fractions() {
        assert_eq!(rationalize(0.375, 100, 1e-12), Some(rat(3, 8)));
        assert_eq!(rationalize(-2.0 / 3.0, 100, 1e-12), Some(rat(-2, 3)));
        assert_eq!(rationalize(std::f64::consts::PI, 100, 1e-10), None);
    }

    #[test]
    fn interpolation_round_trip() {
        let poly = [int(3), int(-1), rat(1, 2), int(7)];
        let eval = |t: &Rational| {
            poly.iter()
                .rev()
                .fold(Rational::zero(), |acc, c| acc * t + c)
        };
        let nodes = Rational::interpolation_nodes(4);
        let vals: Vec<_> = nodes.iter().map(eval).collect();
        assert_eq!(Rational::interpolate(&nodes, &vals), poly.to_vec());

        let cpoly = [C64::new(1.0, 2.0), C64::new(-3.0, 0.5), C64::new(0.0, 1.0)];
        let nodes = C64::interpolation_nodes(3);
        let vals: Vec<_> = nodes
            .iter()
            .map(|t| cpoly.iter().rev().fold(C64::zero(), |a, c| a * t + c))
            .collect();
        for (a, b) in C64::interpolate(&nodes, &vals).iter().zip(cpoly) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn huge_rational_to_f64() {
        let big = Rational::new(BigInt::from(3) << 2000usize, BigInt::from(1) << 2000usize);
        assert!((rational_to_f64(&big) - 3.0).abs() < 1e-12);
    }
}
