//! Fast scalar 2F1 for non-positive real arguments.
//!
//! The face-integral hot loops evaluate the one-variable `F_A` (a 2F1)
//! once per quadrature node, so the tensor-product Euler rule is too
//! slow there. This path stitches three series regimes together:
//! direct series near zero, the Pfaff transform for moderate negative
//! arguments, and the connection formula at infinity for large ones.
//! It is a third route, cross-checked in tests against both the series
//! and the Euler-integral paths it accelerates.

use crate::error::{Error, Result};
use crate::hyperfun::gamma::{is_nonpositive_integer, ln_gamma};

const MAX_TERMS: usize = 600;
const TOL: f64 = 1e-14;

fn series_2f1(a: f64, b: f64, c: f64, x: f64) -> Result<f64> {
    let mut sum = 1.0f64;
    let mut term = 1.0f64;
    let mut streak = 0;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * x;
        sum += term;
        if term.abs() < TOL * sum.abs().max(f64::MIN_POSITIVE) {
            streak += 1;
            if streak >= 2 {
                return Ok(sum);
            }
        } else {
            streak = 0;
        }
    }
    Err(Error::NonConvergence {
        max_degree: MAX_TERMS,
        partial: sum,
    })
}

/// `2F1(a, b; c; x)` for `x <= 0`.
pub fn hyp2f1_neg(a: f64, b: f64, c: f64, x: f64) -> Result<f64> {
    if is_nonpositive_integer(c) {
        return Err(Error::ParameterPole(c));
    }
    if x > 0.0 {
        return Err(Error::OutsideDomain(format!("hyp2f1_neg needs x <= 0, got {x}")));
    }
    if x == 0.0 {
        return Ok(1.0);
    }
    if x > -0.5 {
        return series_2f1(a, b, c, x);
    }
    if x > -8.0 {
        // Pfaff: (1-x)^(-a) 2F1(a, c-b; c; x/(x-1)), argument in (0, 8/9)
        let z = x / (x - 1.0);
        return Ok((1.0 - x).powf(-a) * series_2f1(a, c - b, c, z)?);
    }
    // connection formula at infinity; needs a - b away from integers
    let ab = a - b;
    if (ab - ab.round()).abs() < 1e-6 {
        // degenerate parameter difference: fall back to Pfaff, whose
        // series still converges (slowly) for any x < 0
        let z = x / (x - 1.0);
        return Ok((1.0 - x).powf(-a) * series_2f1(a, c - b, c, z)?);
    }
    let g = |v: f64| ln_gamma(v);
    let lc = g(c)?;
    let term = |p: f64, q: f64| -> Result<f64> {
        // Gamma(c) Gamma(q-p) / (Gamma(q) Gamma(c-p)) (-x)^(-p)
        //   * 2F1(p, 1-c+p; 1-q+p; 1/x)
        if is_nonpositive_integer(q) || is_nonpositive_integer(c - p) {
            // Gamma pole in the denominator kills this term
            return Ok(0.0);
        }
        let num = g(q - p)?;
        let den1 = g(q)?;
        let den2 = g(c - p)?;
        let ln = lc.ln_abs + num.ln_abs - den1.ln_abs - den2.ln_abs - p * (-x).ln();
        let sign = lc.sign * num.sign * den1.sign * den2.sign;
        Ok(sign * ln.exp() * series_2f1(p, 1.0 - c + p, 1.0 - q + p, 1.0 / x)?)
    };
    Ok(term(a, b)? + term(b, a)?)
}
