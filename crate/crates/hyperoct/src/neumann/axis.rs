//! Per-axis quadrature plans for the unbounded face integrals.
//!
//! Each face coordinate is pulled back to `u in (0, 1)` — a rational
//! map for semi-infinite (singular) axes, a tangent map for full-line
//! axes — and covered by a composite Gauss-Legendre rule whose panel
//! structure mixes a uniform grid with dyadic breakpoint stacks at the
//! endpoints and at integrand hotspots. Stack depths are fixed by the
//! refinement level alone, never by the data, so the rule varies
//! smoothly with the evaluation point and finite differences of the
//! solution field do not pick up panel-switching noise.

use crate::quadrule::Rule;

/// Pullback of one face coordinate to the unit interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Transform {
    /// `x = u / (1 - u)`, covering `[0, inf)`.
    RationalMap,
    /// `x = tan(pi (u - 1/2))`, covering `(-inf, inf)`.
    TangentMap,
}

impl Transform {
    pub fn x(&self, u: f64) -> f64 {
        match self {
            Transform::RationalMap => u / (1.0 - u),
            Transform::TangentMap => (std::f64::consts::PI * (u - 0.5)).tan(),
        }
    }

    /// `dx/du`.
    pub fn jacobian(&self, u: f64) -> f64 {
        match self {
            Transform::RationalMap => {
                let d = 1.0 - u;
                1.0 / (d * d)
            }
            Transform::TangentMap => {
                let c = (std::f64::consts::PI * (u - 0.5)).cos();
                std::f64::consts::PI / (c * c)
            }
        }
    }

    /// Inverse map, clamped into `(0, 1)`.
    pub fn u(&self, x: f64) -> f64 {
        let u = match self {
            Transform::RationalMap => {
                if x <= 0.0 {
                    0.0
                } else {
                    x / (1.0 + x)
                }
            }
            Transform::TangentMap => 0.5 + x.atan() / std::f64::consts::PI,
        };
        u.clamp(1e-15, 1.0 - 1e-15)
    }
}

/// Ready-to-sum nodes for one axis; weights already carry the
/// map jacobian, so `sum_k w_k f(x_k) ~ int f dx`.
#[derive(Debug, Clone)]
pub struct AxisPlan {
    pub x: Vec<f64>,
    pub w: Vec<f64>,
}

/// Breakpoints in `u` for a given refinement level: a uniform grid of
/// `4 * 2^level` cells, dyadic stacks of depth `12 + 2 level` at both
/// endpoints, and fixed-depth stacks around each hotspot.
fn breakpoints(level: usize, hotspots: &[f64]) -> Vec<f64> {
    let nuni = 4usize << level;
    let mut b: Vec<f64> = (0..=nuni).map(|i| i as f64 / nuni as f64).collect();
    let d_end = 12 + 2 * level;
    for j in 3..=d_end {
        let off = 0.5f64.powi(j as i32);
        b.push(off);
        b.push(1.0 - off);
    }
    let d_hot = 14 + 2 * level;
    for &uc in hotspots {
        b.push(uc);
        for j in 0..=d_hot {
            let off = 0.25 * 0.5f64.powi(j as i32);
            for s in [uc - off, uc + off] {
                if s > 0.0 && s < 1.0 {
                    b.push(s);
                }
            }
        }
    }
    b.sort_by(|p, q| p.partial_cmp(q).unwrap());
    b.dedup_by(|p, q| (*p - *q).abs() < 1e-14);
    b
}

/// Build the composite rule for one axis.
///
/// `hotspots` are locations in physical coordinates (typically the
/// evaluation point's projection and any boundary-data feature); they
/// are mapped to `u` and surrounded by dyadic panel stacks down to a
/// level-determined finest scale.
pub fn build_axis(transform: Transform, level: usize, base: &Rule, hotspots: &[f64]) -> AxisPlan {
    let hot_u: Vec<f64> = hotspots.iter().map(|&h| transform.u(h)).collect();
    let b = breakpoints(level, &hot_u);
    let mut x = Vec::new();
    let mut w = Vec::new();
    for pair in b.windows(2) {
        let (lo, hi) = (pair[0], pair[1]);
        if hi - lo < 1e-300 {
            continue;
        }
        for (u, wu) in base.scaled(lo, hi) {
            x.push(transform.x(u));
            w.push(wu * transform.jacobian(u));
        }
    }
    AxisPlan { x, w }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrule::gauss_legendre;

    #[test]
    fn maps_invert() {
        for t in [Transform::RationalMap, Transform::TangentMap] {
            for &x in &[0.1, 1.0, 37.0] {
                assert!((t.x(t.u(x)) - x).abs() < 1e-10 * (1.0 + x));
            }
        }
        assert!((Transform::TangentMap.x(Transform::TangentMap.u(-5.0)) + 5.0).abs() < 1e-9);
    }

    #[test]
    fn rational_axis_integrates_algebraic_decay() {
        // int_0^inf x^(1/2) (1+x^2)^(-2) dx = pi / (4 sqrt 2) (beta integral)
        let base = gauss_legendre(8);
        let plan = build_axis(Transform::RationalMap, 1, &base, &[]);
        let got: f64 = plan
            .x
            .iter()
            .zip(&plan.w)
            .map(|(&x, &w)| w * x.sqrt() / (1.0 + x * x).powi(2))
            .sum();
        let expect = std::f64::consts::PI / (4.0 * 2.0f64.sqrt());
        assert!((got - expect).abs() < 1e-9 * expect, "{got} vs {expect}");
    }

    #[test]
    fn tangent_axis_integrates_lorentzian_peak() {
        // int_-inf^inf dx / ((x - 3)^2 + s^2) = pi / s, a sharp hotspot at 3
        let base = gauss_legendre(8);
        let s = 1e-2;
        let plan = build_axis(Transform::TangentMap, 1, &base, &[3.0]);
        let got: f64 = plan
            .x
            .iter()
            .zip(&plan.w)
            .map(|(&x, &w)| w / ((x - 3.0) * (x - 3.0) + s * s))
            .sum();
        let expect = std::f64::consts::PI / s;
        assert!((got - expect).abs() < 1e-7 * expect, "{got} vs {expect}");
    }

    #[test]
    fn node_count_independent_of_hotspot_position() {
        let base = gauss_legendre(6);
        let a = build_axis(Transform::RationalMap, 0, &base, &[0.7]);
        let b = build_axis(Transform::RationalMap, 0, &base, &[0.7001]);
        assert_eq!(a.x.len(), b.x.len());
    }
}
