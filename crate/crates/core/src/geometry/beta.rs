//! Regularized incomplete beta function by continued fraction.

use crate::error::{Error, Result};

const TINY: f64 = 1e-15;
const EPS: f64 = 1e-16;
const MAX_TERMS: usize = 10_000;

/// `ln B(a, b)`.
pub fn ln_beta(a: f64, b: f64) -> f64 {
    libm::lgamma(a) + libm::lgamma(b) - libm::lgamma(a + b)
}

/// `I_x(a, b)` for `x ∈ [0, 1]`, `a, b > 0`.
///
/// The fraction is evaluated with the modified Lentz method. For
/// `x > (a+1)/(a+b+2)` it converges slowly, so the complement
/// `1 − I_{1−x}(b, a)` is evaluated instead.
pub fn regularized_incomplete_beta(x: f64, a: f64, b: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) || !(a > 0.0) || !(b > 0.0) || !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "incomplete beta needs x in [0,1] and a, b > 0 (x={x}, a={a}, b={b})"
        )));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x == 1.0 {
        return Ok(1.0);
    }
    if x > (a + 1.0) / (a + b + 2.0) {
        return Ok(1.0 - direct(1.0 - x, b, a)?);
    }
    direct(x, a, b)
}

fn direct(x: f64, a: f64, b: f64) -> Result<f64> {
    let ln_front = a * x.ln() + b * (1.0 - x).ln() - ln_beta(a, b) - a.ln();
    let cf = continued_fraction(x, a, b)?;
    Ok((ln_front.exp() * cf).clamp(0.0, 1.0))
}

/// `1/(1 + d₁/(1 + d₂/(1 + …)))`.
fn continued_fraction(x: f64, a: f64, b: f64) -> Result<f64> {
    let floor = |v: f64| if v.abs() < TINY { TINY } else { v };
    let mut f = TINY;
    let mut c = f;
    let mut d = 0.0;
    // The leading term is the `1` in `1/(1 + …)`, handled as d₀ = 1.
    for n in 0..MAX_TERMS {
        let coef = if n == 0 {
            1.0
        } else if n % 2 == 1 {
            let m = ((n - 1) / 2) as f64;
            -(a + m) * (a + b + m) * x / ((a + 2.0 * m) * (a + 2.0 * m + 1.0))
        } else {
            let m = (n / 2) as f64;
            m * (b - m) * x / ((a + 2.0 * m - 1.0) * (a + 2.0 * m))
        };
        d = floor(1.0 + coef * d);
        c = floor(1.0 + coef / c);
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if n > 0 && (delta - 1.0).abs() < EPS {
            return Ok(f);
        }
    }
    Err(Error::Numerical(format!(
        "incomplete beta continued fraction did not converge (x={x}, a={a}, b={b})"
    )))
}
