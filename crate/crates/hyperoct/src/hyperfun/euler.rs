//! Euler-type integral representation of `F_A` for non-positive
//! arguments:
//!
//! ```text
//! F_A(a, b; c; x) = prod_i [Gamma(c_i) / (Gamma(b_i) Gamma(c_i - b_i))]
//!     * int ... int prod_i t_i^(b_i - 1) (1 - t_i)^(c_i - b_i - 1) (1 - sum_i x_i t_i)^(-a) dt
//! ```
//!
//! over the unit cube, valid for `0 < b_i < c_i`. For `x_i <= 0` the
//! base `1 - sum x_i t_i >= 1`, so the integrand is smooth everywhere
//! except the beta-weight endpoints, which the per-axis composite rule
//! absorbs: a Gauss-Jacobi panel at each endpoint and geometrically
//! graded Gauss-Legendre panels resolving the `1/|x_i|` scale that the
//! base factor introduces near t = 0 for large arguments.

use crate::error::{Error, Result};
use crate::hyperfun::gamma::ln_gamma;
use crate::hyperfun::{EvalOptions, FAParams, Method, SeriesResult};
use crate::quadrule::{gauss_jacobi, gauss_legendre, Rule};

/// Nodes/weights approximating `int_0^1 t^(b-1) (1-t)^(c-b-1) g(t) dt`
/// for one axis; the beta weight is folded into `w`.
pub struct AxisNodes {
    pub t: Vec<f64>,
    pub w: Vec<f64>,
}

/// Reusable `F_A` integral evaluator for a fixed parameter set.
///
/// The reference Gauss rules are built once; per-argument work is just
/// panel assembly and the tensor-product sum, which makes this the
/// right shape for quadrature hot loops where `x` varies per node.
pub struct FaIntegral {
    params: FAParams,
    left: Vec<Rule>,
    right: Vec<Rule>,
    mid: Rule,
    log_prefactor: f64,
}

const SPLIT: f64 = 0.5;

impl FaIntegral {
    pub fn new(params: &FAParams, order: usize) -> Result<Self> {
        params.validate()?;
        if order < 2 {
            return Err(Error::Precondition(format!("quadrature order {order} < 2")));
        }
        let mut left = Vec::new();
        let mut right = Vec::new();
        let mut log_prefactor = 0.0;
        for i in 0..params.n() {
            let (b, c) = (params.b[i], params.c[i]);
            if !(b > 0.0 && c - b > 0.0) {
                return Err(Error::OutsideDomain(format!(
                    "integral representation needs 0 < b_i < c_i, got b={b}, c={c}"
                )));
            }
            left.push(gauss_jacobi(order, 0.0, b - 1.0)?);
            right.push(gauss_jacobi(order, c - b - 1.0, 0.0)?);
            log_prefactor +=
                ln_gamma(c)?.ln_abs - ln_gamma(b)?.ln_abs - ln_gamma(c - b)?.ln_abs;
        }
        Ok(FaIntegral {
            params: params.clone(),
            left,
            right,
            mid: gauss_legendre(order),
            log_prefactor,
        })
    }

    pub fn params(&self) -> &FAParams {
        &self.params
    }

    fn axis_nodes(&self, i: usize, x_abs: f64) -> AxisNodes {
        let (b, c) = (self.params.b[i], self.params.c[i]);
        let t0 = (0.5 / (1.0 + x_abs)).min(SPLIT * 0.5);
        let mut t = Vec::new();
        let mut w = Vec::new();
        // left Gauss-Jacobi panel [0, t0]: weight (1+u)^(b-1) carries t^(b-1)
        let half = 0.5 * t0;
        let scale = half.powf(b);
        for (u, wu) in self.left[i].nodes.iter().zip(&self.left[i].weights) {
            let ti = half * (1.0 + u);
            t.push(ti);
            w.push(scale * wu * (1.0 - ti).powf(c - b - 1.0));
        }
        // geometric Gauss-Legendre panels [t0 * 2^j, ...] up to SPLIT
        let mut lo = t0;
        while lo < SPLIT {
            let hi = (2.0 * lo).min(SPLIT);
            for (ti, wi) in self.mid.scaled(lo, hi) {
                t.push(ti);
                w.push(wi * ti.powf(b - 1.0) * (1.0 - ti).powf(c - b - 1.0));
            }
            lo = hi;
        }
        // right Gauss-Jacobi panel [SPLIT, 1]: weight (1-u)^(c-b-1)
        let half = 0.5 * (1.0 - SPLIT);
        let scale = half.powf(c - b);
        for (u, wu) in self.right[i].nodes.iter().zip(&self.right[i].weights) {
            let ti = SPLIT + half * (1.0 + u);
            t.push(ti);
            w.push(scale * wu * ti.powf(b - 1.0));
        }
        AxisNodes { t, w }
    }

    /// Evaluate at a non-positive argument vector; returns the value
    /// and the number of tensor nodes used.
    pub fn eval(&self, x: &[f64]) -> Result<(f64, usize)> {
        let n = self.params.n();
        if x.len() != n {
            return Err(Error::Precondition(format!(
                "argument vector has length {}, parameters have n = {n}",
                x.len()
            )));
        }
        if x.iter().any(|&v| v > 0.0) {
            return Err(Error::OutsideDomain(
                "integral representation requires all x_i <= 0".into(),
            ));
        }
        let axes: Vec<AxisNodes> = (0..n).map(|i| self.axis_nodes(i, x[i].abs())).collect();
        let a = self.params.a;
        let mut nodes = 1usize;
        for ax in &axes {
            nodes *= ax.t.len();
        }
        let sum = tensor_sum(&axes, x, a, 0, 1.0, 1.0);
        Ok((sum * self.log_prefactor.exp(), nodes))
    }
}

fn tensor_sum(axes: &[AxisNodes], x: &[f64], a: f64, i: usize, wprod: f64, base: f64) -> f64 {
    if i == axes.len() {
        return wprod * base.powf(-a);
    }
    let ax = &axes[i];
    let mut acc = 0.0;
    for (t, w) in ax.t.iter().zip(&ax.w) {
        acc += tensor_sum(axes, x, a, i + 1, wprod * w, base - x[i] * t);
    }
    acc
}

pub fn lauricella_fa_integral(
    params: &FAParams,
    x: &[f64],
    opts: &EvalOptions,
) -> Result<SeriesResult> {
    let rule = FaIntegral::new(params, opts.quadrature_order)?;
    let (value, nodes) = rule.eval(x)?;
    Ok(SeriesResult {
        value,
        terms_used: nodes,
        converged: true,
        method: Method::IntegralRepresentation,
    })
}
