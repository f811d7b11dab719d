//! Independent numerical oracles: adaptive Simpson quadrature, Halton
//! QMC, and Richardson extrapolation. Nothing here shares code with
//! the evaluation paths under test — no Gauss rules, no panel plans —
//! so agreement is evidence, not tautology.

use crate::error::{Error, Result};
use std::cell::Cell;
use std::rc::Rc;

/// Budget-tracked adaptive Simpson on a finite interval. The budget
/// pool can be shared between instances (nested integration).
pub struct Simpson {
    pub tol: f64,
    budget: Rc<Cell<usize>>,
}

impl Simpson {
    pub fn new(tol: f64, budget: usize) -> Self {
        Simpson {
            tol,
            budget: Rc::new(Cell::new(budget)),
        }
    }

    /// An integrator drawing on the same budget pool.
    pub fn subsidiary(&self, tol: f64) -> Simpson {
        Simpson {
            tol,
            budget: Rc::clone(&self.budget),
        }
    }

    pub fn remaining(&self) -> usize {
        self.budget.get()
    }

    fn spend(&self, n: usize) -> Result<()> {
        let left = self.budget.get();
        if left < n {
            return Err(Error::BudgetExhausted(n));
        }
        self.budget.set(left - n);
        Ok(())
    }

    pub fn integrate(&self, f: &dyn Fn(f64) -> Result<f64>, a: f64, b: f64) -> Result<f64> {
        self.spend(3)?;
        let m = 0.5 * (a + b);
        let fa = f(a)?;
        let fm = f(m)?;
        let fb = f(b)?;
        let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        self.recurse(f, a, b, fa, fm, fb, whole, self.tol, 50)
    }

    #[allow(clippy::too_many_arguments)]
    fn recurse(
        &self,
        f: &dyn Fn(f64) -> Result<f64>,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: usize,
    ) -> Result<f64> {
        self.spend(2)?;
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm)?;
        let frm = f(rm)?;
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return Ok(left + right + delta / 15.0);
        }
        Ok(self.recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?
            + self.recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?)
    }
}

/// Integrate `f` over `(0, inf)` through the rational pullback
/// `x = v/(1-v)`, avoiding the endpoints themselves. The interval is
/// pre-split at the images of `x = 4^j` so that a feature living at
/// any scale is sampled before the adaptive acceptance test can fire
/// (a lone split at x = 1 misses narrow far-field bumps entirely).
pub fn simpson_half_line_with(s: &Simpson, f: &dyn Fn(f64) -> Result<f64>) -> Result<f64> {
    let g = |v: f64| -> Result<f64> {
        let d = 1.0 - v;
        f(v / d).map(|y| y / (d * d))
    };
    let eps = 1e-13;
    let mut breaks = vec![eps];
    for j in -10..=10 {
        let x = 4.0f64.powi(j);
        breaks.push(x / (1.0 + x));
    }
    breaks.push(1.0 - eps);
    let mut total = 0.0;
    for w in breaks.windows(2) {
        total += s.integrate(&g, w[0], w[1])?;
    }
    Ok(total)
}

/// Convenience wrapper owning its own budget.
pub fn simpson_half_line(f: &dyn Fn(f64) -> Result<f64>, tol: f64, budget: usize) -> Result<f64> {
    simpson_half_line_with(&Simpson::new(tol, budget), f)
}

/// Van der Corput radical-inverse in the given base.
fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let mut inv = 1.0 / base as f64;
    let mut x = 0.0;
    let mut scale = inv;
    while i > 0 {
        x += (i % base) as f64 * scale;
        i /= base;
        scale *= inv;
        inv = 1.0 / base as f64;
    }
    x
}

const HALTON_BASES: [u64; 6] = [2, 3, 5, 7, 11, 13];

/// Halton-QMC estimate of `int_{(0,inf)^n} f dx` via the rational
/// pullback per axis.
pub fn qmc_orthant(f: &dyn Fn(&[f64]) -> f64, n: usize, points: usize) -> Result<f64> {
    if n > HALTON_BASES.len() {
        return Err(Error::Precondition(format!(
            "QMC oracle supports n <= {}, got {n}",
            HALTON_BASES.len()
        )));
    }
    let mut acc = 0.0;
    let mut x = vec![0.0f64; n];
    for i in 0..points {
        let mut jac = 1.0;
        for k in 0..n {
            let v = radical_inverse(i as u64 + 1, HALTON_BASES[k]);
            let d = 1.0 - v;
            x[k] = v / d;
            jac /= d * d;
        }
        acc += jac * f(&x);
    }
    Ok(acc / points as f64)
}

/// Two-term Richardson extrapolation of `v(eps) = L + A eps^p + ...`
/// given values at a geometric sequence `eps, eps/rho, eps/rho^2, ...`
/// with known leading order `p`.
pub fn richardson(values: &[f64], rho: f64, p: f64) -> f64 {
    assert!(values.len() >= 2);
    let mut cur: Vec<f64> = values.to_vec();
    for stage in 0..cur.len().min(3) - 1 {
        // successive error orders p, p+1, ... (algebraic expansions)
        let fac = rho.powf(p + stage as f64);
        let mut next = Vec::with_capacity(cur.len() - 1);
        for w in cur.windows(2) {
            next.push((fac * w[1] - w[0]) / (fac - 1.0));
        }
        cur = next;
    }
    *cur.last().unwrap()
}

/// Aitken delta-squared acceleration, applied iteratively; needs no
/// knowledge of the error order.
pub fn aitken(values: &[f64]) -> f64 {
    let mut cur = values.to_vec();
    while cur.len() >= 3 {
        let mut next = Vec::with_capacity(cur.len() - 2);
        for w in cur.windows(3) {
            let d2 = w[2] - 2.0 * w[1] + w[0];
            if d2.abs() < 1e-300 {
                next.push(w[2]);
            } else {
                let d = w[2] - w[1];
                next.push(w[2] - d * d / d2);
            }
        }
        cur = next;
    }
    *cur.last().unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aitken_accelerates_power_law() {
        // v = 2 + 0.3 eps^1.5 at eps = 0.2 / 2^k
        let vals: Vec<f64> = (0..4)
            .map(|k| 2.0 + 0.3 * (0.2 / 2.0f64.powi(k)).powf(1.5))
            .collect();
        let l = aitken(&vals);
        assert!((l - 2.0).abs() < 2e-4, "{l}");
    }

    #[test]
    fn simpson_exact_on_cubic() {
        let s = Simpson::new(1e-12, 10_000);
        let v = s.integrate(&|x| Ok(x * x * x - 2.0 * x), 0.0, 2.0).unwrap();
        assert!((v - 0.0).abs() < 1e-12, "{v}");
    }

    #[test]
    fn simpson_half_line_matches_arctan() {
        let v = simpson_half_line(&|x| Ok(1.0 / (1.0 + x * x)), 1e-10, 1_000_000).unwrap();
        assert!((v - std::f64::consts::FRAC_PI_2).abs() < 1e-8, "{v}");
    }

    #[test]
    fn simpson_budget_enforced() {
        let s = Simpson::new(1e-14, 10);
        assert!(matches!(
            s.integrate(&|x| Ok((10.0 * x).sin().abs().sqrt()), 0.0, 3.0),
            Err(Error::BudgetExhausted(_))
        ));
    }

    #[test]
    fn qmc_matches_product_integral() {
        // int over (0,inf)^2 of (1+x^2)^-1 (1+y^2)^-1 = (pi/2)^2
        let v = qmc_orthant(
            &|x| 1.0 / ((1.0 + x[0] * x[0]) * (1.0 + x[1] * x[1])),
            2,
            200_000,
        )
        .unwrap();
        let expect = std::f64::consts::FRAC_PI_2.powi(2);
        assert!((v - expect).abs() < 1e-3 * expect, "{v} vs {expect}");
    }

    #[test]
    fn richardson_strips_leading_error() {
        // v(eps) = 1 + eps + eps^2 at eps = 0.1 / 4^k
        let vals: Vec<f64> = (0..3)
            .map(|k| {
                let e = 0.1 / 4.0f64.powi(k);
                1.0 + e + e * e
            })
            .collect();
        let l = richardson(&vals, 4.0, 1.0);
        assert!((l - 1.0).abs() < 1e-6, "{l}");
    }
}
