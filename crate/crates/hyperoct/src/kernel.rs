//! Fundamental solution `q(x, xi) = gamma r^(-2 beta) F_A(beta, alpha;
//! 2 alpha; -4 x_1 xi_1 / r^2, ...)` of the singular elliptic operator
//! in the hyperoctant, its constants, gradient, face restrictions, and
//! a finite-difference residual of the operator itself.

use crate::error::{Error, Result};
use crate::hyperfun::gamma::ln_gamma;
use crate::hyperfun::{lauricella_fa, EvalOptions, FAParams};

/// Dimension, singularity count and exponents of the operator
/// `sum_i d^2/dx_i^2 + sum_j (2 alpha_j / x_j) d/dx_j`.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct DomainSpec {
    pub m: usize,
    pub n: usize,
    pub alpha: Vec<f64>,
}

impl DomainSpec {
    pub fn new(m: usize, n: usize, alpha: Vec<f64>) -> Result<Self> {
        let spec = DomainSpec { m, n, alpha };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.m <= 2 {
            return Err(Error::Precondition(format!("need m > 2, got {}", self.m)));
        }
        if self.n < 1 || self.n > self.m {
            return Err(Error::Precondition(format!(
                "need 1 <= n <= m, got n = {}, m = {}",
                self.n, self.m
            )));
        }
        if self.alpha.len() != self.n {
            return Err(Error::Precondition(format!(
                "alpha has length {}, expected n = {}",
                self.alpha.len(),
                self.n
            )));
        }
        for &a in &self.alpha {
            if !(a > 0.0 && 2.0 * a < 1.0) {
                return Err(Error::Precondition(format!(
                    "need 0 < 2 alpha_j < 1, got alpha_j = {a}"
                )));
            }
        }
        Ok(())
    }

    pub fn alpha_sum(&self) -> f64 {
        self.alpha.iter().sum()
    }
}

/// A point of the closed hyperoctant.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Point {
    pub coords: Vec<f64>,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Self {
        Point { coords }
    }

    pub fn norm(&self) -> f64 {
        self.coords.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn is_interior(&self, spec: &DomainSpec) -> bool {
        self.coords.len() == spec.m && self.coords[..spec.n].iter().all(|&v| v > 0.0)
    }

    pub fn on_face(&self, k: usize, spec: &DomainSpec) -> bool {
        k < spec.n
            && self.coords.len() == spec.m
            && self.coords[k] == 0.0
            && (0..spec.n).all(|i| i == k || self.coords[i] > 0.0)
    }
}

impl From<Vec<f64>> for Point {
    fn from(coords: Vec<f64>) -> Self {
        Point { coords }
    }
}

/// `beta = (m-2)/2 + sum alpha_j` and the normalizing constant
/// `gamma = 2^(2 beta - m) Gamma(beta)/pi^(m/2) prod Gamma(alpha_k)/Gamma(2 alpha_k)`,
/// stored in log space (it is positive for every admissible spec).
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct KernelConstants {
    pub beta: f64,
    pub ln_gamma_const: f64,
}

impl KernelConstants {
    pub fn gamma_const(&self) -> f64 {
        self.ln_gamma_const.exp()
    }
}

/// The scalar `alpha` of the constant definitions is read as
/// `sum_j alpha_j`; the operator-residual checks fail for any other
/// reading.
pub fn kernel_constants(spec: &DomainSpec) -> Result<KernelConstants> {
    spec.validate()?;
    let beta = (spec.m as f64 - 2.0) / 2.0 + spec.alpha_sum();
    let mut ln = (2.0 * beta - spec.m as f64) * 2.0f64.ln() + ln_gamma(beta)?.ln_abs
        - (spec.m as f64 / 2.0) * std::f64::consts::PI.ln();
    for &a in &spec.alpha {
        ln += ln_gamma(a)?.ln_abs - ln_gamma(2.0 * a)?.ln_abs;
    }
    Ok(KernelConstants {
        beta,
        ln_gamma_const: ln,
    })
}

/// Fundamental-solution evaluator for a fixed domain spec.
#[derive(Debug, Clone)]
pub struct Kernel {
    pub spec: DomainSpec,
    pub constants: KernelConstants,
    params: FAParams,
}

fn dist2(x: &[f64], xi: &[f64]) -> f64 {
    x.iter().zip(xi).map(|(a, b)| (a - b) * (a - b)).sum()
}

impl Kernel {
    pub fn new(spec: DomainSpec) -> Result<Self> {
        let constants = kernel_constants(&spec)?;
        let params = FAParams::new(
            constants.beta,
            spec.alpha.clone(),
            spec.alpha.iter().map(|a| 2.0 * a).collect(),
        )?;
        Ok(Kernel {
            spec,
            constants,
            params,
        })
    }

    fn guard_r2(&self, x: &[f64], xi: &[f64]) -> Result<f64> {
        let r2 = dist2(x, xi);
        let scale = 1.0
            + x.iter().map(|v| v * v).sum::<f64>().sqrt()
            + xi.iter().map(|v| v * v).sum::<f64>().sqrt();
        if r2.sqrt() < 1e-12 * scale {
            return Err(Error::CoincidentPoints(r2.sqrt()));
        }
        Ok(r2)
    }

    fn fa_args(&self, x: &[f64], xi: &[f64], r2: f64) -> Vec<f64> {
        (0..self.spec.n)
            .map(|i| -4.0 * x[i] * xi[i] / r2)
            .collect()
    }

    /// `q(x, xi)`; both points in the closed hyperoctant.
    pub fn q(&self, x: &[f64], xi: &[f64], opts: &EvalOptions) -> Result<f64> {
        let r2 = self.guard_r2(x, xi)?;
        let f = lauricella_fa(&self.params, &self.fa_args(x, xi, r2), opts)?;
        Ok((self.constants.ln_gamma_const - self.constants.beta * r2.ln()).exp() * f.value)
    }

    /// `q` restricted to the face `x_k = 0`, written through the
    /// (n-1)-variable kernel; equals `q(x_face, xi)` identically.
    pub fn q_face(&self, k: usize, x_face: &[f64], xi: &[f64], opts: &EvalOptions) -> Result<f64> {
        if k >= self.spec.n {
            return Err(Error::Precondition(format!(
                "face index {k} out of range for n = {}",
                self.spec.n
            )));
        }
        if x_face[k] != 0.0 {
            return Err(Error::Precondition(format!(
                "point is not on face {k}: x_k = {}",
                x_face[k]
            )));
        }
        let r2 = self.guard_r2(x_face, xi)?;
        let mut b = Vec::with_capacity(self.spec.n - 1);
        let mut c = Vec::with_capacity(self.spec.n - 1);
        let mut args = Vec::with_capacity(self.spec.n - 1);
        for i in 0..self.spec.n {
            if i != k {
                b.push(self.spec.alpha[i]);
                c.push(2.0 * self.spec.alpha[i]);
                args.push(-4.0 * x_face[i] * xi[i] / r2);
            }
        }
        let f = if b.is_empty() {
            1.0
        } else {
            lauricella_fa(&FAParams { a: self.constants.beta, b, c }, &args, opts)?.value
        };
        Ok((self.constants.ln_gamma_const - self.constants.beta * r2.ln()).exp() * f)
    }

    /// Analytic gradient in `xi`, assembled from the differentiation
    /// formula and the adjacent relation:
    ///
    /// ```text
    /// dq/dxi_j = 2 beta gamma r^(-2 beta - 2)
    ///     [ (x_j - xi_j) F_A(beta+1, alpha; 2 alpha; sigma)
    ///       - x_j F_A(beta+1, alpha + e_j; 2 alpha + e_j; sigma) ]   (x_j term for j <= n only)
    /// ```
    pub fn grad_xi(&self, x: &[f64], xi: &[f64], opts: &EvalOptions) -> Result<Vec<f64>> {
        let r2 = self.guard_r2(x, xi)?;
        let args = self.fa_args(x, xi, r2);
        let beta = self.constants.beta;
        let f_up = lauricella_fa(&self.params.raised_a(), &args, opts)?.value;
        let mut f_slot = vec![0.0; self.spec.n];
        for j in 0..self.spec.n {
            if x[j] != 0.0 {
                f_slot[j] = lauricella_fa(&self.params.raised(j), &args, opts)?.value;
            } else {
                // zero-slot reduction makes the raised-slot value equal f_up
                f_slot[j] = f_up;
            }
        }
        let pref = 2.0 * beta * (self.constants.ln_gamma_const - (beta + 1.0) * r2.ln()).exp();
        Ok((0..self.spec.m)
            .map(|j| {
                let mut v = (x[j] - xi[j]) * f_up;
                if j < self.spec.n {
                    v -= x[j] * f_slot[j];
                }
                pref * v
            })
            .collect())
    }
}

/// Second-order central-difference application of the operator
/// `sum_i d^2 u/dx_i^2 + sum_j (2 alpha_j / x_j) du/dx_j` to a scalar
/// field at an interior point.
pub fn pde_residual<F>(field: F, p: &[f64], spec: &DomainSpec, h: f64) -> Result<f64>
where
    F: Fn(&[f64]) -> f64,
{
    if p.len() != spec.m {
        return Err(Error::Precondition(format!(
            "point has {} coordinates, expected m = {}",
            p.len(),
            spec.m
        )));
    }
    for i in 0..spec.n {
        if !(p[i] > 2.0 * h) {
            return Err(Error::StencilOutOfDomain(format!(
                "coordinate {i} = {} not > 2h = {}",
                p[i],
                2.0 * h
            )));
        }
    }
    let f0 = field(p);
    let mut res = 0.0;
    let mut buf = p.to_vec();
    for i in 0..spec.m {
        buf[i] = p[i] + h;
        let fp = field(&buf);
        buf[i] = p[i] - h;
        let fm = field(&buf);
        buf[i] = p[i];
        res += (fp - 2.0 * f0 + fm) / (h * h);
        if i < spec.n {
            res += (2.0 * spec.alpha[i] / p[i]) * (fp - fm) / (2.0 * h);
        }
    }
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> EvalOptions {
        EvalOptions::default()
    }

    #[test]
    fn constants_anchors() {
        let c1 = kernel_constants(&DomainSpec::new(3, 1, vec![0.25]).unwrap()).unwrap();
        assert!((c1.beta - 0.75).abs() < 1e-15);
        let c2 = kernel_constants(&DomainSpec::new(4, 2, vec![0.25, 0.25]).unwrap()).unwrap();
        assert!((c2.beta - 1.5).abs() < 1e-15);
        // m=3, n=1, alpha=1/4: the gamma constant reduces to 1/(2 pi)
        // via the reflection and duplication identities
        assert!(
            (c1.gamma_const() - 1.0 / (2.0 * std::f64::consts::PI)).abs() < 1e-13,
            "{}",
            c1.gamma_const()
        );
    }

    #[test]
    fn spec_invariants_rejected() {
        assert!(DomainSpec::new(2, 1, vec![0.25]).is_err());
        assert!(DomainSpec::new(3, 0, vec![]).is_err());
        assert!(DomainSpec::new(3, 1, vec![0.5]).is_err());
        assert!(DomainSpec::new(3, 4, vec![0.1; 4]).is_err());
    }

    #[test]
    fn q_symmetric_and_positive() {
        let k = Kernel::new(DomainSpec::new(4, 2, vec![0.25, 0.3]).unwrap()).unwrap();
        let x = [1.0, 0.7, -0.4, 2.0];
        let xi = [0.5, 1.3, 0.8, -0.2];
        let a = k.q(&x, &xi, &opts()).unwrap();
        let b = k.q(&xi, &x, &opts()).unwrap();
        assert!(a > 0.0);
        assert!((a - b).abs() < 1e-12 * a);
    }

    #[test]
    fn q_coincident_points_guarded() {
        let k = Kernel::new(DomainSpec::new(3, 1, vec![0.25]).unwrap()).unwrap();
        let x = [1.0, 2.0, 3.0];
        assert!(matches!(
            k.q(&x, &x, &opts()),
            Err(Error::CoincidentPoints(_))
        ));
    }

    #[test]
    fn q_face_matches_q() {
        let k = Kernel::new(DomainSpec::new(4, 2, vec![0.25, 0.3]).unwrap()).unwrap();
        let x = [0.0, 0.9, 1.4, -0.3];
        let xi = [0.6, 0.8, 0.2, 0.5];
        let qa = k.q(&x, &xi, &opts()).unwrap();
        let qb = k.q_face(0, &x, &xi, &opts()).unwrap();
        assert!((qa - qb).abs() < 1e-10 * qa, "{qa} vs {qb}");
    }

    #[test]
    fn q_face_n1_is_pure_power() {
        let k = Kernel::new(DomainSpec::new(3, 1, vec![0.25]).unwrap()).unwrap();
        let x = [0.0, 1.0, -2.0];
        let xi = [0.5, 0.3, 0.4];
        let r2: f64 = x.iter().zip(&xi).map(|(a, b)| (a - b) * (a - b)).sum();
        let expect = k.constants.gamma_const() * r2.powf(-k.constants.beta);
        let got = k.q_face(0, &x, &xi, &opts()).unwrap();
        assert!((got - expect).abs() < 1e-13 * expect);
    }

    #[test]
    fn grad_matches_finite_differences() {
        for (m, n, alpha) in [(3usize, 1usize, vec![0.25]), (4, 2, vec![0.25, 0.3])] {
            let k = Kernel::new(DomainSpec::new(m, n, alpha).unwrap()).unwrap();
            let x: Vec<f64> = (0..m).map(|i| 1.0 + 0.3 * i as f64).collect();
            let xi: Vec<f64> = (0..m).map(|i| 0.4 + 0.2 * i as f64).collect();
            let grad = k.grad_xi(&x, &xi, &opts()).unwrap();
            let h = 1e-5;
            for j in 0..m {
                let mut xp = xi.clone();
                let mut xm = xi.clone();
                xp[j] += h;
                xm[j] -= h;
                let fd = (k.q(&x, &xp, &opts()).unwrap() - k.q(&x, &xm, &opts()).unwrap())
                    / (2.0 * h);
                assert!(
                    (grad[j] - fd).abs() <= 1e-5 * fd.abs().max(1e-3),
                    "m={m} j={j}: {} vs {fd}",
                    grad[j]
                );
            }
        }
    }

    #[test]
    fn normal_derivative_vanishes_on_face() {
        // dq/dx_k at x_k = 0 equals zero; differentiate in x via symmetry
        let k = Kernel::new(DomainSpec::new(4, 2, vec![0.25, 0.3]).unwrap()).unwrap();
        let xi = [0.7, 0.9, 0.3, -0.2];
        let x = [1e-4, 1.1, 0.5, 0.8];
        // swap roles: grad in xi of q(xi_as_x, x) = grad in x
        let g = k.grad_xi(&xi, &x, &opts()).unwrap();
        let scale = k.q(&xi, &x, &opts()).unwrap();
        assert!(g[0].abs() < 1e-2 * scale, "{} vs scale {scale}", g[0]);
    }

    #[test]
    fn scaling_law() {
        let k = Kernel::new(DomainSpec::new(3, 1, vec![0.25]).unwrap()).unwrap();
        let x = [1.0, 0.5, -0.3];
        let xi = [0.4, 1.2, 0.8];
        let q1 = k.q(&x, &xi, &opts()).unwrap();
        for lam in [0.5, 1.3, 2.0] {
            let xs: Vec<f64> = x.iter().map(|v| v * lam).collect();
            let xis: Vec<f64> = xi.iter().map(|v| v * lam).collect();
            let q2 = k.q(&xs, &xis, &opts()).unwrap();
            let expo = 2.0 - k.spec.m as f64 - 2.0 * k.spec.alpha_sum();
            assert!(
                (q2 - lam.powf(expo) * q1).abs() < 1e-10 * q1,
                "lambda={lam}"
            );
        }
    }

    #[test]
    fn residual_of_constant_is_zero() {
        let spec = DomainSpec::new(3, 1, vec![0.25]).unwrap();
        let r = pde_residual(|_| 3.7, &[1.0, 0.5, -0.2], &spec, 1e-3).unwrap();
        assert_eq!(r, 0.0);
    }

    #[test]
    fn residual_annihilates_singular_power() {
        // u = x_1^(1 - 2 alpha_1) is an exact solution
        let spec = DomainSpec::new(3, 1, vec![0.25]).unwrap();
        let a = spec.alpha[0];
        let u = |p: &[f64]| p[0].powf(1.0 - 2.0 * a);
        let r = pde_residual(u, &[0.8, 0.1, 0.4], &spec, 1e-3).unwrap();
        assert!(r.abs() < 1e-4, "{r}");
    }

    #[test]
    fn residual_stencil_guard() {
        let spec = DomainSpec::new(3, 1, vec![0.25]).unwrap();
        assert!(matches!(
            pde_residual(|_| 0.0, &[1e-4, 0.5, 0.5], &spec, 1e-3),
            Err(Error::StencilOutOfDomain(_))
        ));
    }

    #[test]
    fn residual_of_q_converges_second_order() {
        let spec = DomainSpec::new(3, 1, vec![0.25]).unwrap();
        let k = Kernel::new(spec.clone()).unwrap();
        let xi = [2.0, 1.0, 1.0];
        let o = opts();
        let field = |p: &[f64]| k.q(p, &xi, &o).unwrap();
        let p = [1.0, 0.3, 0.2];
        let r1 = pde_residual(&field, &p, &spec, 2e-2).unwrap();
        let r2 = pde_residual(&field, &p, &spec, 1e-2).unwrap();
        let ratio = r1.abs() / r2.abs();
        assert!((3.5..=4.5).contains(&ratio), "ratio {ratio} ({r1} vs {r2})");
    }
}
