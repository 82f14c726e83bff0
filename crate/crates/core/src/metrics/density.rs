use super::theta::f_inverse;
use crate::algebra::GroupIndex;
use crate::error::{Error, Result};
use crate::expansion::Alpha;
use crate::natext::{build_domain, normalizing_constant, DomainF64};

/// The limiting density of (Theta_{n-1}, Theta_n), with Gamma^+ and Gamma^- stored as F-preimages of Omega_alpha.
#[derive(Debug, Clone)]
pub struct GammaDensity {
    pub domain: DomainF64,
    pub c: f64,
}

impl GammaDensity {
    pub fn new(q: GroupIndex, alpha: &Alpha) -> Result<GammaDensity> {
        Ok(GammaDensity { domain: build_domain(q, alpha)?.to_f64(), c: normalizing_constant(q, alpha)?.value })
    }

    /// Whether the signed point (xi, eta) lies in Gamma^+ (eta >= 0) or Gamma^- (eta < 0).
    pub fn in_gamma(&self, xi: f64, eta: f64) -> bool {
        match f_inverse(xi, eta) {
            Ok((t, v)) => self.domain.contains(t, v),
            Err(_) => false,
        }
    }

    /// d^+(xi, eta) + d^-(xi, -eta) for eta >= 0, i.e. the density of (Theta_{n-1}, |Theta_n|).
    pub fn folded(&self, xi: f64, eta: f64) -> Result<f64> {
        Ok(self.signed(xi, eta)? + self.signed(xi, -eta)?)
    }

    /// C / sqrt(1 - 4 xi eta) on Gamma^+ and Gamma^- (signed eta), 0 elsewhere.
    pub fn signed(&self, xi: f64, eta: f64) -> Result<f64> {
        if xi < 0.0 || !self.in_gamma(xi, eta) {
            return Ok(0.0);
        }
        let disc = 1.0 - 4.0 * xi * eta;
        if disc <= 0.0 {
            return Err(Error::Consistency(format!("1 - 4 xi eta = {disc} inside Gamma")));
        }
        Ok(self.c / disc.sqrt())
    }

    /// [0, xi_max] x [0, eta_max] containing the folded region.
    pub fn bounding_box(&self) -> (f64, f64) {
        let mut xi: f64 = 0.0;
        let mut eta = self.domain.right();
        for &[a, b, h] in &self.domain.rects {
            xi = xi.max(h / (1.0 + a * h));
            if a < 0.0 {
                eta = eta.max(-a / (1.0 + a * h));
            }
            eta = eta.max(b.abs());
        }
        (xi, eta)
    }
}

/// The folded limiting density of (Theta_{n-1}, Theta_n) at (xi, eta).
pub fn density_d_alpha(xi: f64, eta: f64, q: GroupIndex, alpha: &Alpha) -> Result<f64> {
    GammaDensity::new(q, alpha)?.folded(xi, eta.abs())
}
