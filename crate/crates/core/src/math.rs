//! Thin wrappers over `libm` so the numerics read like std float code.

#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub(crate) fn powf(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

#[inline]
pub(crate) fn powi(x: f64, n: i32) -> f64 {
    // exact small integer powers matter for the closed forms
    match n {
        0 => 1.0,
        1 => x,
        2 => x * x,
        3 => x * x * x,
        _ => libm::pow(x, n as f64),
    }
}

/// `x^y` that uses exact multiplication when `y` is a small integer.
#[inline]
pub(crate) fn pow_real(x: f64, y: f64) -> f64 {
    if y == libm::trunc(y) && (0.0..=3.0).contains(&y) {
        powi(x, y as i32)
    } else {
        powf(x, y)
    }
}

#[inline]
pub(crate) fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub(crate) fn tanh(x: f64) -> f64 {
    libm::tanh(x)
}

#[inline]
pub(crate) fn cos(x: f64) -> f64 {
    libm::cos(x)
}

#[inline]
pub(crate) fn round(x: f64) -> f64 {
    libm::round(x)
}
