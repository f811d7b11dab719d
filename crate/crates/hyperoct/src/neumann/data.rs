//! Admissible Neumann boundary data: built-in analytic families and
//! tabulated grids, each carrying the decay certificate `(c_k, eps_k)`
//! of the admissibility bound
//! `|nu_k| <= c_k (1 + |x~|^2)^(-(1 - 2 alpha_k + eps_k)/2)`.

use crate::error::{Error, Result};
use crate::kernel::DomainSpec;

/// A boundary-data profile on one face, as a function of the (m-1)
/// face coordinates `(x_1, ..., x_{k-1}, x_{k+1}, ..., x_m)`.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum NuProfile {
    Zero,
    /// `amplitude * (1 + |x~|^2)^(-decay_exponent)`; the bound-matching
    /// family has `decay_exponent = (1 - 2 alpha_k + eps)/2`.
    Algebraic { amplitude: f64, decay_exponent: f64 },
    Gaussian {
        amplitude: f64,
        center: Vec<f64>,
        width: f64,
    },
    /// Smooth bump supported on `|x~ - center| < radius`.
    Compact {
        amplitude: f64,
        center: Vec<f64>,
        radius: f64,
    },
    /// Regular grid with multilinear interpolation, zero outside.
    Tabulated {
        origin: Vec<f64>,
        step: Vec<f64>,
        dims: Vec<usize>,
        values: Vec<f64>,
    },
}

impl NuProfile {
    pub fn eval(&self, xt: &[f64]) -> f64 {
        match self {
            NuProfile::Zero => 0.0,
            NuProfile::Algebraic {
                amplitude,
                decay_exponent,
            } => {
                let r2: f64 = xt.iter().map(|v| v * v).sum();
                amplitude * (1.0 + r2).powf(-decay_exponent)
            }
            NuProfile::Gaussian {
                amplitude,
                center,
                width,
            } => {
                let d2: f64 = xt.iter().zip(center).map(|(v, c)| (v - c) * (v - c)).sum();
                amplitude * (-0.5 * d2 / (width * width)).exp()
            }
            NuProfile::Compact {
                amplitude,
                center,
                radius,
            } => {
                let d2: f64 = xt.iter().zip(center).map(|(v, c)| (v - c) * (v - c)).sum();
                let s = d2 / (radius * radius);
                if s >= 1.0 {
                    0.0
                } else {
                    amplitude * (1.0 - 1.0 / (1.0 - s)).exp()
                }
            }
            NuProfile::Tabulated {
                origin,
                step,
                dims,
                values,
            } => multilinear(origin, step, dims, values, xt),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, NuProfile::Zero)
    }

    /// Localization hint `(center, width)` for quadrature grading.
    pub fn feature(&self) -> Option<(Vec<f64>, f64)> {
        match self {
            NuProfile::Zero | NuProfile::Algebraic { .. } => None,
            NuProfile::Gaussian { center, width, .. } => Some((center.clone(), *width)),
            NuProfile::Compact { center, radius, .. } => Some((center.clone(), *radius)),
            NuProfile::Tabulated {
                origin, step, dims, ..
            } => {
                let center: Vec<f64> = origin
                    .iter()
                    .zip(step)
                    .zip(dims)
                    .map(|((o, s), &d)| o + 0.5 * s * (d as f64 - 1.0))
                    .collect();
                let width = step
                    .iter()
                    .zip(dims)
                    .map(|(s, &d)| 0.5 * s * (d as f64 - 1.0))
                    .fold(0.0f64, |acc, v| acc.max(v));
                Some((center, width.max(1e-6)))
            }
        }
    }
}

fn multilinear(origin: &[f64], step: &[f64], dims: &[usize], values: &[f64], xt: &[f64]) -> f64 {
    let d = dims.len();
    let mut idx = vec![0usize; d];
    let mut frac = vec![0.0f64; d];
    for i in 0..d {
        let t = (xt[i] - origin[i]) / step[i];
        if t < 0.0 || t > (dims[i] - 1) as f64 {
            return 0.0;
        }
        let lo = (t.floor() as usize).min(dims[i] - 2);
        idx[i] = lo;
        frac[i] = t - lo as f64;
    }
    // iterate the 2^d cell corners
    let mut acc = 0.0;
    for corner in 0..(1usize << d) {
        let mut w = 1.0;
        let mut flat = 0usize;
        for i in 0..d {
            let hi = (corner >> i) & 1 == 1;
            w *= if hi { frac[i] } else { 1.0 - frac[i] };
            flat = flat * dims[i] + idx[i] + if hi { 1 } else { 0 };
        }
        acc += w * values[flat];
    }
    acc
}

/// One face's Neumann datum with its decay certificate.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct BoundaryDatum {
    /// Face index, zero-based: the datum lives on `x_{face} = 0`.
    pub face: usize,
    pub profile: NuProfile,
    pub bound_c: f64,
    pub bound_eps: f64,
}

impl BoundaryDatum {
    pub fn new(face: usize, profile: NuProfile, bound_c: f64, bound_eps: f64) -> Self {
        BoundaryDatum {
            face,
            profile,
            bound_c,
            bound_eps,
        }
    }

    /// The bound-matching algebraic family for a given face.
    pub fn algebraic(face: usize, spec: &DomainSpec, amplitude: f64, eps: f64) -> Self {
        let expo = (1.0 - 2.0 * spec.alpha[face] + eps) / 2.0;
        BoundaryDatum {
            face,
            profile: NuProfile::Algebraic {
                amplitude,
                decay_exponent: expo,
            },
            bound_c: amplitude.abs(),
            bound_eps: eps,
        }
    }

    /// Re-verify the admissibility bound by sampling a radial grid out
    /// to `|x~| = 1e3` in a deterministic direction battery.
    pub fn certify(&self, spec: &DomainSpec) -> Result<()> {
        if self.face >= spec.n {
            return Err(Error::Precondition(format!(
                "face {} out of range for n = {}",
                self.face, spec.n
            )));
        }
        if !(self.bound_c > 0.0) || !(self.bound_eps > 0.0) {
            return Err(Error::Precondition(
                "decay certificate needs c_k > 0 and eps_k > 0".into(),
            ));
        }
        if self.profile.is_zero() {
            return Ok(());
        }
        let d = spec.m - 1;
        let alpha_k = spec.alpha[self.face];
        let expo = (1.0 - 2.0 * alpha_k + self.bound_eps) / 2.0;
        // singular slots of the face coordinate vector must stay >= 0
        let singular = |i: usize| -> bool {
            let orig = if i < self.face { i } else { i + 1 };
            orig < spec.n
        };
        let mut directions: Vec<Vec<f64>> = Vec::new();
        for i in 0..d {
            let mut e = vec![0.0; d];
            e[i] = 1.0;
            directions.push(e.clone());
            if !singular(i) {
                e[i] = -1.0;
                directions.push(e);
            }
        }
        let diag: Vec<f64> = (0..d).map(|_| 1.0 / (d as f64).sqrt()).collect();
        directions.push(diag);
        let mut radii = vec![0.0];
        let mut r = 1e-2;
        while r <= 1.0e3 {
            radii.push(r);
            r *= 1.45;
        }
        for dir in &directions {
            for &rad in &radii {
                let xt: Vec<f64> = dir.iter().map(|v| v * rad).collect();
                let bound = self.bound_c * (1.0 + rad * rad).powf(-expo);
                if self.profile.eval(&xt).abs() > bound * (1.0 + 1e-12) {
                    return Err(Error::UncertifiedDatum {
                        face: self.face,
                        radius: rad,
                    });
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> DomainSpec {
        DomainSpec::new(3, 1, vec![0.25]).unwrap()
    }

    #[test]
    fn algebraic_family_certifies_exactly() {
        let d = BoundaryDatum::algebraic(0, &spec(), 1.3, 0.5);
        d.certify(&spec()).unwrap();
    }

    #[test]
    fn gaussian_certifies_with_slack() {
        let d = BoundaryDatum::new(
            0,
            NuProfile::Gaussian {
                amplitude: 1.0,
                center: vec![0.0, 0.0],
                width: 1.0,
            },
            2.0,
            0.5,
        );
        d.certify(&spec()).unwrap();
    }

    #[test]
    fn undecaying_profile_fails_certification() {
        // constant-like tabulated data cannot satisfy the decay bound
        let d = BoundaryDatum::new(
            0,
            NuProfile::Algebraic {
                amplitude: 1.0,
                decay_exponent: 0.0,
            },
            1.0,
            0.5,
        );
        assert!(matches!(
            d.certify(&spec()),
            Err(Error::UncertifiedDatum { .. })
        ));
    }

    #[test]
    fn compact_bump_is_smoothly_zero_outside() {
        let p = NuProfile::Compact {
            amplitude: 2.0,
            center: vec![1.0, 0.0],
            radius: 0.5,
        };
        assert_eq!(p.eval(&[2.0, 0.0]), 0.0);
        assert_eq!(p.eval(&[1.0, 0.0]), 2.0);
        assert!(p.eval(&[1.2, 0.1]) > 0.0);
    }

    #[test]
    fn tabulated_interpolates_bilinearly() {
        let p = NuProfile::Tabulated {
            origin: vec![0.0, 0.0],
            step: vec![1.0, 1.0],
            dims: vec![2, 2],
            values: vec![0.0, 1.0, 2.0, 3.0], // f(i,j) = 2i + j
        };
        assert!((p.eval(&[0.5, 0.5]) - 1.5).abs() < 1e-14);
        assert_eq!(p.eval(&[5.0, 0.5]), 0.0);
    }
}
