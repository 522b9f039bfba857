//! Parity classes of reduced fractions and rational reconstruction of reals.

use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

/// `(p mod 2, q mod 2)` of a reduced fraction `p/q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParityClass {
    /// even / odd
    Q01,
    /// odd / even
    Q10,
    /// odd / odd
    Q11,
}

impl fmt::Display for ParityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ParityClass::Q01 => "Q01",
            ParityClass::Q10 => "Q10",
            ParityClass::Q11 => "Q11",
        })
    }
}

/// A reduced fraction `p/q` with `q > 0`, tagged by parity class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RationalClass {
    pub p: i64,
    pub q: i64,
    pub class: ParityClass,
}

impl RationalClass {
    pub fn value(&self) -> f64 {
        self.p as f64 / self.q as f64
    }

    pub fn is_in(&self, classes: &[ParityClass]) -> bool {
        classes.contains(&self.class)
    }
}

impl fmt::Display for RationalClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{} ({})", self.p, self.q, self.class)
    }
}

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a as i64
}

pub fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Exact integer square root, if `x` is a perfect square.
pub fn perfect_sqrt(x: u128) -> Option<u128> {
    if x < 2 {
        return Some(x);
    }
    // Newton iteration from a float seed.
    let mut r = (x as f64).sqrt() as u128;
    loop {
        let next = (r + x / r) / 2;
        if next >= r {
            break;
        }
        r = next;
    }
    while r * r > x {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= x {
        r += 1;
    }
    (r * r == x).then_some(r)
}

/// Reduces and tags `p/q`.
pub fn classify_rational(p: i64, q: i64) -> Result<RationalClass> {
    if q == 0 {
        return Err(Error::InvalidArgument("denominator must be nonzero".into()));
    }
    let g = gcd(p, q);
    let (mut p, mut q) = (p / g, q / g);
    if q < 0 {
        p = -p;
        q = -q;
    }
    let class = match (p.rem_euclid(2), q.rem_euclid(2)) {
        (0, 1) => ParityClass::Q01,
        (1, 0) => ParityClass::Q10,
        (1, 1) => ParityClass::Q11,
        _ => unreachable!("reduced fraction cannot be even/even"),
    };
    Ok(RationalClass { p, q, class })
}

/// Default denominator bound for [`rational_reconstruct`].
pub const DEFAULT_MAX_DEN: i64 = 1_000_000;
/// Default relative tolerance for [`rational_reconstruct`].
pub const DEFAULT_TOL: f64 = 1e-9;

/// Smallest-denominator continued-fraction convergent `p/q` of `x` with
/// `q ≤ max_den` and `|x - p/q| ≤ tol·(1+|x|)`.
///
/// A convergent is only accepted when it is also significant: every real has
/// convergents with error below `1/q²`, so a match is meaningful only when the
/// tolerance is far tighter than that bound (`q²·tol·(1+|x|) ≤ 1e-2`).
/// Without that guard, irrationals such as `1/√7` would reconstruct to large
/// spurious fractions at the default settings.
pub fn rational_reconstruct(x: f64, max_den: i64, tol: f64) -> Option<(i64, i64)> {
    if !x.is_finite() || max_den < 1 {
        return None;
    }
    let eps = tol * (1.0 + x.abs());
    let (mut h_prev, mut h) = (0i128, 1i128);
    let (mut k_prev, mut k) = (1i128, 0i128);
    let mut y = x;
    for _ in 0..64 {
        let a = y.floor();
        if a.abs() > 1e15 {
            return None;
        }
        let ai = a as i128;
        (h_prev, h) = (h, ai * h + h_prev);
        (k_prev, k) = (k, ai * k + k_prev);
        if k > max_den as i128 || (k as f64) * (k as f64) * eps > 1e-2 {
            return None;
        }
        if (x - h as f64 / k as f64).abs() <= eps {
            return Some((h as i64, k as i64));
        }
        let frac = y - a;
        if frac <= 0.0 {
            return None;
        }
        y = 1.0 / frac;
    }
    None
}

/// `rational_reconstruct` followed by `classify_rational`.
pub fn classify_real(x: f64) -> Option<RationalClass> {
    rational_reconstruct(x, DEFAULT_MAX_DEN, DEFAULT_TOL)
        .and_then(|(p, q)| classify_rational(p, q).ok())
}
