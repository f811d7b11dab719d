//! Gaussian quadrature rules on [-1, 1] via the Golub-Welsch algorithm.
//!
//! [`gauss_jacobi`] integrates against the weight `(1-x)^a (1+x)^b`
//! with `a, b > -1`, which absorbs the endpoint singularities of the
//! Euler-type integral representation; [`gauss_legendre`] is the
//! unweighted special case.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::hyperfun::gamma::ln_gamma;

/// Nodes and weights on [-1, 1].
#[derive(Debug, Clone)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    /// Affine image of the rule on [lo, hi].
    pub fn scaled(&self, lo: f64, hi: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let mid = 0.5 * (lo + hi);
        let half = 0.5 * (hi - lo);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }
}

fn golub_welsch(diag: Vec<f64>, offdiag: Vec<f64>, mu0: f64) -> Rule {
    let n = diag.len();
    let mut m = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = diag[i];
    }
    for i in 0..n - 1 {
        m[(i, i + 1)] = offdiag[i];
        m[(i + 1, i)] = offdiag[i];
    }
    let eig = SymmetricEigen::new(m);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|j| {
            let v0 = eig.eigenvectors[(0, j)];
            (eig.eigenvalues[j], mu0 * v0 * v0)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    Rule {
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1).collect(),
    }
}

/// n-point Gauss-Legendre rule on [-1, 1].
pub fn gauss_legendre(n: usize) -> Rule {
    assert!(n >= 1);
    let diag = vec![0.0; n];
    let offdiag: Vec<f64> = (1..n)
        .map(|k| {
            let k = k as f64;
            k / ((2.0 * k - 1.0) * (2.0 * k + 1.0)).sqrt()
        })
        .collect();
    golub_welsch(diag, offdiag, 2.0)
}

/// n-point Gauss-Jacobi rule for the weight `(1-x)^a (1+x)^b` on [-1, 1].
pub fn gauss_jacobi(n: usize, a: f64, b: f64) -> Result<Rule> {
    if n < 1 || a <= -1.0 || b <= -1.0 {
        return Err(Error::Precondition(format!(
            "gauss_jacobi needs n >= 1 and exponents > -1, got n={n}, a={a}, b={b}"
        )));
    }
    let ab = a + b;
    // zeroth moment: 2^(a+b+1) B(a+1, b+1)
    let mu0 = ((ab + 1.0) * 2.0f64.ln() + ln_gamma(a + 1.0)?.ln_abs + ln_gamma(b + 1.0)?.ln_abs
        - ln_gamma(ab + 2.0)?.ln_abs)
        .exp();
    let mut diag = Vec::with_capacity(n);
    let mut offdiag = Vec::with_capacity(n.saturating_sub(1));
    diag.push((b - a) / (ab + 2.0));
    for k in 1..n {
        let k = k as f64;
        let denom = (2.0 * k + ab) * (2.0 * k + ab + 2.0);
        diag.push((b * b - a * a) / denom);
        let b2 = if k == 1.0 {
            4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab))
        } else {
            4.0 * k * (k + a) * (k + b) * (k + ab)
                / ((2.0 * k + ab).powi(2) * (2.0 * k + ab + 1.0) * (2.0 * k + ab - 1.0))
        };
        offdiag.push(b2.sqrt());
    }
    Ok(golub_welsch(diag, offdiag, mu0))
}
