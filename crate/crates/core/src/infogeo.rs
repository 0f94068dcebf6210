//! Information geometry of the gamma family.
//!
//! Gamma laws with rate `ν` and shape `κ` form a 2-manifold. It has a
//! natural affine immersion in `R³` and `κ` is a geodesic coordinate, with
//! arc length `∫ √(ψ′(κ) − 1/κ) dκ`. Distance along `κ` from the
//! exponential laws (`κ = 1`) measures departure from a Poisson process.

use crate::error::{Error, Result};
use crate::math;
use crate::quad::{integrate, Tolerance};
use crate::specfun::{ln_gamma_unchecked, trigamma_minus_reciprocal, PositiveReal};

/// Natural coordinates of a gamma law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaPoint {
    nu: f64,
    kappa: f64,
}

impl GammaPoint {
    pub fn new(nu: f64, kappa: f64) -> Result<Self> {
        let nu = PositiveReal::new(nu)?.get();
        let kappa = PositiveReal::new(kappa)?.get();
        Ok(GammaPoint { nu, kappa })
    }

    /// Unit-mean law `ν = κ`.
    pub fn unit_mean(kappa: f64) -> Result<Self> {
        GammaPoint::new(kappa, kappa)
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }
}

/// A point of the immersed surface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImmersionPoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

/// `(ν, κ) ↦ (ν, κ, ln Γ(κ) − κ ln ν)`.
pub fn immerse(p: GammaPoint) -> ImmersionPoint {
    ImmersionPoint {
        x: p.nu,
        y: p.kappa,
        z: ln_gamma_unchecked(p.kappa) - p.kappa * math::ln(p.nu),
    }
}

/// Smallest endpoint accepted by [`kappa_arclength`]; the integrand grows
/// like `1/κ` near the origin.
pub const MIN_KAPPA: f64 = 1e-3;

const ARCLENGTH_TOL: Tolerance = Tolerance {
    abs: 1e-11,
    rel: 1e-13,
    max_intervals: 4000,
};

fn check_endpoint(k: f64) -> Result<f64> {
    let k = PositiveReal::new(k)?.get();
    if k < MIN_KAPPA {
        return Err(Error::domain(alloc::format!(
            "arc length endpoint {k} is below {MIN_KAPPA}"
        )));
    }
    Ok(k)
}

/// `|∫_a^b √(ψ′(κ) − 1/κ) dκ|`.
pub fn kappa_arclength(a: f64, b: f64) -> Result<f64> {
    let a = check_endpoint(a)?;
    let b = check_endpoint(b)?;
    if a == b {
        return Ok(0.0);
    }
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    let mut bad = None;
    let r = integrate(
        |k| match trigamma_minus_reciprocal(k) {
            Ok(v) => math::sqrt(v),
            Err(e) => {
                bad = Some(e);
                0.0
            }
        },
        lo,
        hi,
        ARCLENGTH_TOL,
    )?;
    if let Some(e) = bad {
        return Err(e);
    }
    Ok(r.value)
}

/// Arc length along `κ` from the exponential laws.
pub fn distance_from_randomness(kappa: f64) -> Result<f64> {
    kappa_arclength(1.0, kappa)
}
