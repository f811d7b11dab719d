//! Shell-ordered summation of the hypergeometric series.
//!
//! The n-variable series is grouped by total degree `|k| = d`. Writing
//! `y_i = x_i / L` with `L = sum |x_i|`, the shell sum is
//!
//! ```text
//! S_d = [(a)_d / d!] * L^d * sum_{|k|=d} (d! / prod k_i!) prod_i (b_i)_{k_i} y_i^{k_i} / (c_i)_{k_i}
//! ```
//!
//! The inner sum is a binomial-weighted (exponential) convolution of
//! per-axis sequences whose entries stay O(1), so no intermediate
//! under/overflow occurs even at degrees of several hundred.

use crate::error::{Error, Result};
use crate::hyperfun::gamma::is_nonpositive_integer;
use crate::hyperfun::{EvalOptions, FAParams, Method, SeriesResult};

/// Pascal triangle of f64 binomial coefficients, grown on demand.
struct Binomials {
    rows: Vec<Vec<f64>>,
}

impl Binomials {
    fn new() -> Self {
        Binomials {
            rows: vec![vec![1.0]],
        }
    }

    fn row(&mut self, d: usize) -> &[f64] {
        while self.rows.len() <= d {
            let prev = self.rows.last().unwrap();
            let mut next = Vec::with_capacity(prev.len() + 1);
            next.push(1.0);
            for i in 1..prev.len() {
                next.push(prev[i - 1] + prev[i]);
            }
            next.push(1.0);
            self.rows.push(next);
        }
        &self.rows[d]
    }
}

/// Gauss hypergeometric function `2F1(a, b; c; x)`.
///
/// Series for `|x| < 1`; for `x <= -1` the Euler-integral path of the
/// one-variable `F_A` (they coincide definitionally) when `0 < b < c`.
pub fn gauss_2f1(a: f64, b: f64, c: f64, x: f64, opts: &EvalOptions) -> Result<SeriesResult> {
    if is_nonpositive_integer(c) {
        return Err(Error::ParameterPole(c));
    }
    opts.validate()?;
    if x.abs() < 1.0 {
        let mut sum = 1.0f64;
        let mut term = 1.0f64;
        let mut small_streak = 0usize;
        for k in 0..opts.max_total_degree {
            let kf = k as f64;
            term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * x;
            sum += term;
            if term.abs() < opts.rel_tol * sum.abs().max(f64::MIN_POSITIVE) {
                small_streak += 1;
                if small_streak >= 2 {
                    return Ok(SeriesResult {
                        value: sum,
                        terms_used: k + 2,
                        converged: true,
                        method: Method::Series,
                    });
                }
            } else {
                small_streak = 0;
            }
        }
        Err(Error::NonConvergence {
            max_degree: opts.max_total_degree,
            partial: sum,
        })
    } else if x <= -1.0 {
        let params = FAParams::new(a, vec![b], vec![c])?;
        super::euler::lauricella_fa_integral(&params, &[x], opts)
    } else {
        Err(Error::OutsideDomain(format!("2F1 argument x = {x} >= 1")))
    }
}

pub fn lauricella_fa_series(
    params: &FAParams,
    x: &[f64],
    opts: &EvalOptions,
) -> Result<SeriesResult> {
    params.validate()?;
    let n = params.n();
    let l1: f64 = x.iter().map(|v| v.abs()).sum();
    if !(l1 < 1.0) {
        return Err(Error::OutsideDomain(format!(
            "series path requires sum |x_i| < 1, got {l1}"
        )));
    }
    if l1 == 0.0 {
        return Ok(SeriesResult {
            value: 1.0,
            terms_used: 1,
            converged: true,
            method: Method::Series,
        });
    }
    let y: Vec<f64> = x.iter().map(|v| v / l1).collect();

    // per-axis sequences d_i[j] = (b_i)_j y_i^j / (c_i)_j
    let mut axis: Vec<Vec<f64>> = vec![vec![1.0]; n];
    // partial exponential convolutions: conv[i] covers axes 0..=i
    let mut conv: Vec<Vec<f64>> = vec![vec![1.0]; n];
    let mut binom = Binomials::new();

    let mut sum = 1.0f64;
    let mut poch_over_fact = 1.0f64; // (a)_d / d!
    let mut scale = 1.0f64; // L^d
    let mut small_streak = 0usize;

    for d in 1..=opts.max_total_degree {
        let df = d as f64;
        for i in 0..n {
            let prev = axis[i][d - 1];
            let j = df - 1.0;
            axis[i].push(prev * (params.b[i] + j) * y[i] / (params.c[i] + j));
        }
        let row = binom.row(d).to_vec();
        for i in 0..n {
            let entry = if i == 0 {
                axis[0][d]
            } else {
                let mut acc = 0.0;
                for j in 0..=d {
                    let lhs = conv[i - 1][j];
                    let rhs = axis[i][d - j];
                    if lhs != 0.0 && rhs != 0.0 {
                        acc += row[j] * lhs * rhs;
                    }
                }
                acc
            };
            conv[i].push(entry);
        }
        poch_over_fact *= (params.a + df - 1.0) / df;
        scale *= l1;
        let shell = poch_over_fact * scale * conv[n - 1][d];
        sum += shell;
        if shell.abs() < opts.rel_tol * sum.abs().max(f64::MIN_POSITIVE) {
            small_streak += 1;
            if small_streak >= 2 {
                return Ok(SeriesResult {
                    value: sum,
                    terms_used: d + 1,
                    converged: true,
                    method: Method::Series,
                });
            }
        } else {
            small_streak = 0;
        }
    }
    Err(Error::NonConvergence {
        max_degree: opts.max_total_degree,
        partial: sum,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> EvalOptions {
        EvalOptions::default()
    }

    #[test]
    fn gauss_2f1_at_zero_is_one() {
        let r = gauss_2f1(1.3, -0.7, 2.2, 0.0, &opts()).unwrap();
        assert_eq!(r.value, 1.0);
        assert!(r.converged);
    }

    #[test]
    fn gauss_2f1_log_closed_form() {
        // 2F1(1,1;2;x) = -ln(1-x)/x
        let x = 0.5;
        let r = gauss_2f1(1.0, 1.0, 2.0, x, &opts()).unwrap();
        let exact = -(1.0 - x).ln() / x;
        assert!((r.value - exact).abs() < 1e-12, "{} vs {exact}", r.value);
        assert!((r.value - 1.3862943611).abs() < 1e-9);
    }

    #[test]
    fn gauss_2f1_symmetric_in_a_b() {
        let r1 = gauss_2f1(0.3, 1.7, 2.2, 0.4, &opts()).unwrap();
        let r2 = gauss_2f1(1.7, 0.3, 2.2, 0.4, &opts()).unwrap();
        assert!((r1.value - r2.value).abs() < 1e-14 * r1.value.abs());
    }

    #[test]
    fn gauss_2f1_rejects_bad_c() {
        assert!(matches!(
            gauss_2f1(1.0, 1.0, -2.0, 0.1, &opts()),
            Err(Error::ParameterPole(_))
        ));
    }

    #[test]
    fn gauss_2f1_binomial_closed_form() {
        // 2F1(a, b; b; x) = (1-x)^(-a)
        let (a, x) = (0.75, -0.6);
        let r = gauss_2f1(a, 0.4, 0.4, x, &opts()).unwrap();
        assert!((r.value - (1.0 - x).powf(-a)).abs() < 1e-13);
    }

    #[test]
    fn series_at_zero() {
        let p = FAParams::new(0.9, vec![0.25, 0.25], vec![0.5, 0.5]).unwrap();
        let r = lauricella_fa_series(&p, &[0.0, 0.0], &opts()).unwrap();
        assert_eq!(r.value, 1.0);
    }

    #[test]
    fn series_n1_matches_2f1() {
        let p = FAParams::new(0.75, vec![0.25], vec![0.5]).unwrap();
        for &x in &[0.3, -0.5, 0.85, -0.85] {
            let fa = lauricella_fa_series(&p, &[x], &opts()).unwrap();
            let f21 = gauss_2f1(0.75, 0.25, 0.5, x, &opts()).unwrap();
            assert!(
                (fa.value - f21.value).abs() < 1e-12 * f21.value.abs().max(1.0),
                "x={x}: {} vs {}",
                fa.value,
                f21.value
            );
        }
    }

    #[test]
    fn series_zero_slot_reduces() {
        let p3 = FAParams::new(1.1, vec![0.2, 0.3, 0.4], vec![0.5, 0.7, 0.9]).unwrap();
        let p2 = FAParams::new(1.1, vec![0.2, 0.4], vec![0.5, 0.9]).unwrap();
        let r3 = lauricella_fa_series(&p3, &[0.2, 0.0, -0.3], &opts()).unwrap();
        let r2 = lauricella_fa_series(&p2, &[0.2, -0.3], &opts()).unwrap();
        assert!((r3.value - r2.value).abs() < 1e-13 * r2.value.abs());
    }

    #[test]
    fn series_rejects_outside_simplex() {
        let p = FAParams::new(0.9, vec![0.25, 0.25], vec![0.5, 0.5]).unwrap();
        assert!(lauricella_fa_series(&p, &[0.7, 0.4], &opts()).is_err());
    }

    #[test]
    fn series_honest_nonconvergence() {
        let p = FAParams::new(0.9, vec![0.25], vec![0.5]).unwrap();
        let tight = EvalOptions {
            max_total_degree: 5,
            ..opts()
        };
        assert!(matches!(
            lauricella_fa_series(&p, &[0.9], &tight),
            Err(Error::NonConvergence { .. })
        ));
    }
}
