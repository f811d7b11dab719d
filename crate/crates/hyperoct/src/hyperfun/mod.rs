//! Scalar special-function core: gamma machinery, the Gauss
//! hypergeometric function, and the Lauricella `F_A` function with its
//! differentiation/adjacent relations and both limiting closed forms.

pub mod continuation;
pub mod euler;
pub mod gamma;
pub mod relations;
pub mod series;

use crate::error::{Error, Result};
use gamma::is_nonpositive_integer;

pub use gamma::{gamma as gamma_fn, ln_gamma, pochhammer, LogGamma};
pub use relations::{fa_adjacent_residual, fa_partial, lemma1_closed_form, lemma2_closed_form, Lemma2Params};
pub use series::gauss_2f1;

/// Parameter triple `(a, b, c)` of the n-variable Lauricella `F_A`.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct FAParams {
    pub a: f64,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
}

impl FAParams {
    pub fn new(a: f64, b: Vec<f64>, c: Vec<f64>) -> Result<Self> {
        let p = FAParams { a, b, c };
        p.validate()?;
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.b.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.b.is_empty() || self.b.len() != self.c.len() {
            return Err(Error::Precondition(format!(
                "need len(b) == len(c) >= 1, got {} and {}",
                self.b.len(),
                self.c.len()
            )));
        }
        for &ci in &self.c {
            if is_nonpositive_integer(ci) {
                return Err(Error::ParameterPole(ci));
            }
        }
        Ok(())
    }

    /// Parameters with `a + 1` and the k-th components of `b`, `c`
    /// raised by one, as used by the differentiation formula.
    pub fn raised(&self, k: usize) -> FAParams {
        let mut b = self.b.clone();
        let mut c = self.c.clone();
        b[k] += 1.0;
        c[k] += 1.0;
        FAParams {
            a: self.a + 1.0,
            b,
            c,
        }
    }

    /// Parameters with only `a` raised by one.
    pub fn raised_a(&self) -> FAParams {
        FAParams {
            a: self.a + 1.0,
            b: self.b.clone(),
            c: self.c.clone(),
        }
    }
}

/// Evaluation controls shared by the series and integral paths.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct EvalOptions {
    /// Relative tolerance on the total-degree shell contribution.
    pub rel_tol: f64,
    /// Cap on the total degree |k| of the multi-index series.
    pub max_total_degree: usize,
    /// Per-panel node count of the Euler-integral quadrature.
    pub quadrature_order: usize,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            rel_tol: 1e-14,
            max_total_degree: 800,
            quadrature_order: 20,
        }
    }
}

impl EvalOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || self.max_total_degree < 1 || self.quadrature_order < 2 {
            return Err(Error::Precondition(format!(
                "invalid EvalOptions: rel_tol={}, max_total_degree={}, quadrature_order={}",
                self.rel_tol, self.max_total_degree, self.quadrature_order
            )));
        }
        Ok(())
    }
}

/// Which evaluation path produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Method {
    Series,
    IntegralRepresentation,
}

/// A series (or quadrature) evaluation with its truncation certificate.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SeriesResult {
    pub value: f64,
    /// Shells summed for the series path; quadrature nodes for the
    /// integral path.
    pub terms_used: usize,
    pub converged: bool,
    pub method: Method,
}

/// Evaluate `F_A^(n)(a, b; c; x)`.
///
/// Inside the simplex `sum |x_i| < 1` the multi-index series is summed
/// by total-degree shells. Outside, all-nonpositive arguments are
/// handled through the Euler-type integral representation, which needs
/// `0 < b_i < c_i`; the integral also takes over near the simplex
/// boundary, where shell convergence degrades to `l1^degree`. Anything
/// else is rejected.
pub fn lauricella_fa(params: &FAParams, x: &[f64], opts: &EvalOptions) -> Result<SeriesResult> {
    params.validate()?;
    opts.validate()?;
    if x.len() != params.n() {
        return Err(Error::Precondition(format!(
            "argument vector has length {}, parameters have n = {}",
            x.len(),
            params.n()
        )));
    }
    let l1: f64 = x.iter().map(|v| v.abs()).sum();
    let all_nonpositive = x.iter().all(|&v| v <= 0.0);
    let integral_admissible = params
        .b
        .iter()
        .zip(&params.c)
        .all(|(&b, &c)| b > 0.0 && c > b);
    if all_nonpositive && integral_admissible && l1 >= 0.9 {
        euler::lauricella_fa_integral(params, x, opts)
    } else if l1 < 1.0 {
        series::lauricella_fa_series(params, x, opts)
    } else {
        Err(Error::OutsideDomain(format!(
            "sum |x_i| = {l1} >= 1 with a positive component or b_i, c_i \
             outside the integral representation's range"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn near_boundary_negative_arguments_use_integral() {
        // at sum |x| ~ 0.99 the series needs thousands of shells; the
        // dispatcher must hand this to the integral representation
        let p = FAParams::new(1.25, vec![0.25], vec![0.5]).unwrap();
        let r = lauricella_fa(&p, &[-0.9906], &EvalOptions::default()).unwrap();
        assert_eq!(r.method, Method::IntegralRepresentation);
        assert!(r.converged);
        let f21 = continuation::hyp2f1_neg(1.25, 0.25, 0.5, -0.9906).unwrap();
        assert!((r.value - f21).abs() < 1e-12 * f21.abs(), "{} vs {f21}", r.value);
    }

    #[test]
    fn near_boundary_mixed_signs_stay_on_series() {
        let p = FAParams::new(1.25, vec![0.25, 0.3], vec![0.5, 0.6]).unwrap();
        let r = lauricella_fa(&p, &[0.3, -0.65], &EvalOptions::default()).unwrap();
        assert_eq!(r.method, Method::Series);
        assert!(r.converged);
    }
}
