//! Integration over the quotient of the plane by rotations.
//!
//! A rotation-invariant function on R^2 descends to a function of the radius
//! alone, and the plane integral collapses to a half-line integral against
//! the Jacobian factor r (the volume of the orbit through radius r, divided
//! by the volume 2 pi of the group, is r):
//!
//!   integral over R^2 of f(|x|)  =  2 pi * integral_0^inf f(r) r dr.

use crate::error::{Error, Result};
use crate::quadrature::adaptive_simpson;

/// Rotation-invariant integrand profiles selectable without code.
#[derive(Debug, Clone, PartialEq)]
pub enum RadialIntegrand {
    /// exp(-alpha r^2).
    Gauss { alpha: f64 },
    /// Indicator of the disc of the given radius.
    Disc { radius: f64 },
    /// Piecewise-linear interpolation of (r, value) samples with strictly
    /// increasing nonnegative radii; clamped to the end values outside.
    Samples { samples: Vec<(f64, f64)> },
}

impl RadialIntegrand {
    pub fn gauss(alpha: f64) -> Result<Self> {
        if alpha.is_finite() && alpha > 0.0 {
            Ok(RadialIntegrand::Gauss { alpha })
        } else {
            Err(Error::ParameterDomain(format!(
                "gaussian width parameter must be positive, got {alpha}"
            )))
        }
    }

    pub fn disc(radius: f64) -> Result<Self> {
        if radius.is_finite() && radius > 0.0 {
            Ok(RadialIntegrand::Disc { radius })
        } else {
            Err(Error::ParameterDomain(format!(
                "disc radius must be positive, got {radius}"
            )))
        }
    }

    pub fn from_samples(samples: Vec<(f64, f64)>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::ParameterDomain(
                "sampled integrand needs at least one point".into(),
            ));
        }
        for &(r, v) in &samples {
            if !(r.is_finite() && v.is_finite()) || r < 0.0 {
                return Err(Error::NonFinite(format!("sample ({r}, {v})")));
            }
        }
        if samples.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::ParameterDomain(
                "sample radii must be strictly increasing".into(),
            ));
        }
        Ok(RadialIntegrand::Samples { samples })
    }

    pub fn eval(&self, r: f64) -> f64 {
        match self {
            RadialIntegrand::Gauss { alpha } => (-alpha * r * r).exp(),
            RadialIntegrand::Disc { radius } => {
                if r <= *radius {
                    1.0
                } else {
                    0.0
                }
            }
            RadialIntegrand::Samples { samples } => {
                if r <= samples[0].0 {
                    return samples[0].1;
                }
                if r >= samples[samples.len() - 1].0 {
                    return samples[samples.len() - 1].1;
                }
                let hi = samples.partition_point(|&(rs, _)| rs < r);
                let (r0, v0) = samples[hi - 1];
                let (r1, v1) = samples[hi];
                v0 + (v1 - v0) * (r - r0) / (r1 - r0)
            }
        }
    }
}

/// 2 pi * integral_0^rmax f(r) r dr by adaptive quadrature.
pub fn quotient_integral(f: impl Fn(f64) -> f64, r_max: f64) -> Result<f64> {
    if !(r_max.is_finite() && r_max > 0.0) {
        return Err(Error::ParameterDomain(format!(
            "r_max must be positive and finite, got {r_max}"
        )));
    }
    let value = adaptive_simpson(|r| f(r) * r, 0.0, r_max, 1e-12)?;
    Ok(2.0 * std::f64::consts::PI * value)
}

/// Convenience wrapper for the selector type.
pub fn quotient_integral_of(integrand: &RadialIntegrand, r_max: f64) -> Result<f64> {
    quotient_integral(|r| integrand.eval(r), r_max)
}
