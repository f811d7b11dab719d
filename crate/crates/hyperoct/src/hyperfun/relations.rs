//! Differentiation formula, adjacent relation, and the two limiting
//! closed forms used by the boundary-limit analysis.

use crate::error::{Error, Result};
use crate::hyperfun::gamma::{is_nonpositive_integer, ln_gamma};
use crate::hyperfun::{lauricella_fa, EvalOptions, FAParams};

/// Partial derivative of `F_A` in its k-th argument:
/// `(a b_k / c_k) F_A(a+1, b + e_k; c + e_k; x)`.
pub fn fa_partial(params: &FAParams, x: &[f64], k: usize, opts: &EvalOptions) -> Result<f64> {
    if k >= params.n() {
        return Err(Error::Precondition(format!(
            "index k = {k} out of range for n = {}",
            params.n()
        )));
    }
    let shifted = params.raised(k);
    let f = lauricella_fa(&shifted, x, opts)?;
    Ok(params.a * params.b[k] / params.c[k] * f.value)
}

/// Relative residual of the adjacent relation
///
/// ```text
/// sum_k (b_k x_k / c_k) F_A(a+1, b + e_k; c + e_k; x)
///     = F_A(a+1, b; c; x) - F_A(a, b; c; x)
/// ```
///
/// The left-hand coefficient is `b_k / c_k`, the form consistent with
/// the differentiation formula (the shell-wise series identity
/// `(a+1)_d - (a)_d = d (a)_d / a` forces it); printed variants with an
/// extra factor of `a` or `a/b_k` fail numerically.
pub fn fa_adjacent_residual(params: &FAParams, x: &[f64], opts: &EvalOptions) -> Result<f64> {
    let mut lhs = 0.0;
    for k in 0..params.n() {
        if x[k] != 0.0 {
            let f = lauricella_fa(&params.raised(k), x, opts)?;
            lhs += params.b[k] * x[k] / params.c[k] * f.value;
        }
    }
    let fa1 = lauricella_fa(&params.raised_a(), x, opts)?.value;
    let fa0 = lauricella_fa(params, x, opts)?.value;
    let rhs = fa1 - fa0;
    Ok((lhs - rhs).abs() / rhs.abs().max(1.0))
}

/// Closed form of the `eps -> 0` limit
/// `eps^(-sum b_k) F_A(a, b; c; 1 - z_k(eps)/eps)`:
///
/// ```text
/// Gamma(a - sum b_k)/Gamma(a) * prod_k Gamma(c_k) / (z0_k^(b_k) Gamma(c_k - b_k))
/// ```
///
/// Requires `a > sum b_k`, `c_k > b_k` and `z0_k > 0` (real powers of
/// negative bases are not defined for fractional `b_k`).
pub fn lemma1_closed_form(a: f64, b: &[f64], c: &[f64], z0: &[f64]) -> Result<f64> {
    if b.len() != c.len() || b.len() != z0.len() || b.is_empty() {
        return Err(Error::Precondition("mismatched b/c/z0 lengths".into()));
    }
    let bsum: f64 = b.iter().sum();
    if !(a > bsum) {
        return Err(Error::Precondition(format!("need a > sum b_k: {a} <= {bsum}")));
    }
    let mut ln = ln_gamma(a - bsum)?.ln_abs - ln_gamma(a)?.ln_abs;
    for k in 0..b.len() {
        if is_nonpositive_integer(c[k]) {
            return Err(Error::ParameterPole(c[k]));
        }
        if !(c[k] > b[k]) {
            return Err(Error::Precondition(format!(
                "need c_k > b_k: {} <= {}",
                c[k], b[k]
            )));
        }
        if !(z0[k] > 0.0) {
            return Err(Error::Precondition(format!("need z0_k > 0, got {}", z0[k])));
        }
        ln += ln_gamma(c[k])?.ln_abs - b[k] * z0[k].ln() - ln_gamma(c[k] - b[k])?.ln_abs;
    }
    Ok(ln.exp())
}

/// Parameters of the improper-integral identity (the `p/q/r/s/t`
/// family over the positive orthant).
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Lemma2Params {
    pub p: Vec<f64>,
    pub q: Vec<f64>,
    pub r: Vec<f64>,
    pub s: f64,
    pub t: f64,
}

impl Lemma2Params {
    pub fn validate(&self) -> Result<()> {
        let n = self.p.len();
        if n == 0 || self.q.len() != n || self.r.len() != n {
            return Err(Error::Precondition("mismatched p/q/r lengths".into()));
        }
        if self
            .p
            .iter()
            .chain(&self.q)
            .chain(&self.r)
            .any(|&v| !(v > 0.0))
            || !(self.s > 0.0)
        {
            return Err(Error::Precondition("p, q, r, s must be positive".into()));
        }
        let ratio_sum = self.ratio_sum();
        if !(ratio_sum - self.t > 0.0 && ratio_sum - self.t < self.s) {
            return Err(Error::Precondition(format!(
                "need 0 < sum p_k/q_k - t < s, got {} with s = {}",
                ratio_sum - self.t,
                self.s
            )));
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.p.len()
    }

    pub fn ratio_sum(&self) -> f64 {
        self.p.iter().zip(&self.q).map(|(p, q)| p / q).sum()
    }
}

/// Closed form of the n-fold improper integral
///
/// ```text
/// int_0^inf ... int_0^inf  x_1^(p_1-1)...x_n^(p_n-1) dx
///     / ( [sum (r_k x_k)^(q_k)]^t [1 + sum (r_k x_k)^(q_k)]^s )
///   = prod_k Gamma(p_k/q_k) * Gamma(S - t) * Gamma(s + t - S)
///     / ( prod_k q_k * prod_k r_k^(p_k) * Gamma(S) * Gamma(s) )
/// ```
///
/// with `S = sum p_k/q_k`. The denominator carries `r_k^(p_k)`: the
/// substitution `u_k = r_k x_k` pulls out exactly `r_k^(-p_k)`, so the
/// exponent cannot involve `q_k`.
pub fn lemma2_closed_form(params: &Lemma2Params) -> Result<f64> {
    params.validate()?;
    let ratio_sum = params.ratio_sum();
    let mut ln = ln_gamma(ratio_sum - params.t)?.ln_abs
        + ln_gamma(params.s + params.t - ratio_sum)?.ln_abs
        - ln_gamma(ratio_sum)?.ln_abs
        - ln_gamma(params.s)?.ln_abs;
    for k in 0..params.n() {
        ln += ln_gamma(params.p[k] / params.q[k])?.ln_abs
            - params.q[k].ln()
            - params.p[k] * params.r[k].ln();
    }
    Ok(ln.exp())
}
