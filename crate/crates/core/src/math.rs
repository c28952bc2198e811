//! Thin wrappers over libm so the crate builds without std.
//!
//! Using libm unconditionally also keeps results bit-identical across
//! platforms, which the seeded-reproducibility contract relies on.

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub fn pow(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

#[inline]
pub fn powi(x: f64, n: i32) -> f64 {
    libm::pow(x, n as f64)
}

#[inline]
pub fn ceil(x: f64) -> f64 {
    libm::ceil(x)
}

#[inline]
pub fn floor(x: f64) -> f64 {
    libm::floor(x)
}

#[inline]
pub fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

/// Euler's constant e.
pub const E: f64 = core::f64::consts::E;

/// n choose r as f64; saturates instead of overflowing.
pub fn binomial(n: u64, r: u64) -> f64 {
    if r > n {
        return 0.0;
    }
    let r = r.min(n - r);
    let mut acc = 1.0f64;
    for i in 0..r {
        acc = acc * ((n - i) as f64) / ((i + 1) as f64);
    }
    acc
}

/// n choose r as an exact u64; panics on overflow (desk-scale inputs only).
pub fn binomial_u64(n: u64, r: u64) -> u64 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc: u64 = 1;
    for i in 0..r {
        acc = acc.checked_mul(n - i).expect("binomial overflow") / (i + 1);
    }
    acc
}

pub fn factorial(n: u64) -> f64 {
    let mut acc = 1.0f64;
    for i in 2..=n {
        acc *= i as f64;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial_u64(20, 3), 1140);
        assert_eq!(binomial_u64(5, 2), 10);
        assert_eq!(binomial_u64(3, 0), 1);
        assert_eq!(binomial_u64(3, 5), 0);
        assert!((binomial(18, 1) - 18.0).abs() < 1e-12);
    }
}
