//! Integration regions on the half-plane and their planar/solid realizations.
//!
//! Rectangles and cylinders share the meridian footprint
//! {ρ₀ + σ ≤ ρ ≤ ρ₁, |z| ≤ H} with H defaulting to ρ₁/2; the offset σ
//! insets the inner edge only. `Shrunk` insets *every* side of its base by σ
//! (the Ω_σ used by the exponential-area estimates). A rectangle is
//! integrated with planar measure, a cylinder with the axisymmetric solid
//! measure 2πρ dρ dz.

use super::HalfPlanePoint;
use crate::error::{AxiError, Result};

/// A region of the half-plane (planar) or of 3-space by rotation (solid).
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Region {
    /// Planar rectangle {ρ₀+σ ≤ ρ ≤ ρ₁, |z| ≤ H}, H = `half_height`
    /// defaulting to ρ₁/2.
    Rectangle {
        rho0: f64,
        rho1: f64,
        #[serde(default)]
        sigma: f64,
        #[serde(default)]
        half_height: Option<f64>,
    },
    /// Solid of revolution over the same footprint, measure 2πρ dρ dz.
    Cylinder {
        rho0: f64,
        rho1: f64,
        #[serde(default)]
        sigma: f64,
        #[serde(default)]
        half_height: Option<f64>,
    },
    /// Disk (planar) or axis-centered ball (solid) of the meridian.
    Ball { center_rho: f64, center_z: f64, radius: f64 },
    /// Spherical annulus r₀ ≤ √(ρ²+z²) ≤ r₁ (meridian half-annulus).
    Annulus { r0: f64, r1: f64 },
    /// Every side of `base` inset by σ.
    Shrunk { base: Box<Region>, sigma: f64 },
}

impl Region {
    /// Planar rectangle with the default height convention.
    pub fn rectangle(rho0: f64, rho1: f64, sigma: f64) -> Region {
        Region::Rectangle { rho0, rho1, sigma, half_height: None }
    }

    /// Solid cylinder with the default height convention.
    pub fn cylinder(rho0: f64, rho1: f64, sigma: f64) -> Region {
        Region::Cylinder { rho0, rho1, sigma, half_height: None }
    }

    pub fn ball(center_rho: f64, center_z: f64, radius: f64) -> Region {
        Region::Ball { center_rho, center_z, radius }
    }

    pub fn shrunk(base: Region, sigma: f64) -> Region {
        Region::Shrunk { base: Box::new(base), sigma }
    }

    /// Validate parameters (positivity, non-degenerate after insets).
    pub fn validate(&self) -> Result<()> {
        match self {
            Region::Rectangle { rho0, rho1, sigma, half_height }
            | Region::Cylinder { rho0, rho1, sigma, half_height } => {
                if *rho0 < 0.0 || *sigma < 0.0 {
                    return Err(AxiError::Config(format!(
                        "rectangle needs rho0 >= 0 and sigma >= 0, got rho0={rho0} sigma={sigma}"
                    )));
                }
                let h = half_height.unwrap_or(rho1 / 2.0);
                if rho0 + sigma >= *rho1 || h <= 0.0 {
                    return Err(AxiError::Config(format!(
                        "degenerate rectangle: [{}, {rho1}] x [-{h}, {h}]",
                        rho0 + sigma
                    )));
                }
                Ok(())
            }
            Region::Ball { center_rho, radius, .. } => {
                if *radius <= 0.0 || *center_rho < 0.0 {
                    return Err(AxiError::Config(format!(
                        "ball needs radius > 0 and center_rho >= 0, got r={radius}, rho={center_rho}"
                    )));
                }
                Ok(())
            }
            Region::Annulus { r0, r1 } => {
                if *r0 < 0.0 || r1 <= r0 {
                    return Err(AxiError::Config(format!("bad annulus [{r0}, {r1}]")));
                }
                Ok(())
            }
            Region::Shrunk { base, sigma } => {
                if *sigma < 0.0 {
                    return Err(AxiError::Config(format!("negative shrink sigma={sigma}")));
                }
                base.validate()?;
                // the shrunk region must stay non-degenerate
                self.resolved_bounds().map(|_| ())
            }
        }
    }

    /// Is this region integrated with solid (rotated) measure?
    pub fn is_solid(&self) -> bool {
        match self {
            Region::Cylinder { .. } => true,
            Region::Rectangle { .. } | Region::Annulus { .. } => false,
            Region::Ball { .. } => false,
            Region::Shrunk { base, .. } => base.is_solid(),
        }
    }

    /// Axis-aligned bounds (ρ_lo, ρ_hi, z_lo, z_hi) of the meridian footprint.
    pub fn resolved_bounds(&self) -> Result<(f64, f64, f64, f64)> {
        match self {
            Region::Rectangle { rho0, rho1, sigma, half_height }
            | Region::Cylinder { rho0, rho1, sigma, half_height } => {
                let h = half_height.unwrap_or(rho1 / 2.0);
                let lo = rho0 + sigma;
                if lo >= *rho1 || h <= 0.0 {
                    return Err(AxiError::Config(format!(
                        "degenerate rectangle bounds [{lo}, {rho1}] x [-{h}, {h}]"
                    )));
                }
                Ok((lo, *rho1, -h, h))
            }
            Region::Ball { center_rho, center_z, radius } => Ok((
                (center_rho - radius).max(0.0),
                center_rho + radius,
                center_z - radius,
                center_z + radius,
            )),
            Region::Annulus { r0: _, r1 } => Ok((0.0, *r1, -*r1, *r1)),
            Region::Shrunk { base, sigma } => {
                let (a, b, c, d) = base.resolved_bounds()?;
                let (a2, b2, c2, d2) = (a + sigma, b - sigma, c + sigma, d - sigma);
                if a2 >= b2 || c2 >= d2 {
                    return Err(AxiError::Config(format!(
                        "shrink by {sigma} empties region [{a}, {b}] x [{c}, {d}]"
                    )));
                }
                Ok((a2, b2, c2, d2))
            }
        }
    }

    /// Membership test of a meridian point.
    pub fn contains(&self, p: HalfPlanePoint) -> bool {
        match self {
            Region::Rectangle { .. } | Region::Cylinder { .. } | Region::Shrunk { .. } => {
                match self {
                    Region::Shrunk { base, sigma } => {
                        // rectangle-like bases shrink to their bounds box;
                        // balls/annuli shrink radially
                        match base.as_ref() {
                            Region::Ball { center_rho, center_z, radius } => {
                                let d = ((p.rho - center_rho).powi(2) + (p.z - center_z).powi(2))
                                    .sqrt();
                                d <= radius - sigma
                            }
                            Region::Annulus { r0, r1 } => {
                                let r = p.r();
                                r >= r0 + sigma && r <= r1 - sigma
                            }
                            _ => match self.resolved_bounds() {
                                Ok((a, b, c, d)) => {
                                    p.rho >= a && p.rho <= b && p.z >= c && p.z <= d
                                }
                                Err(_) => false,
                            },
                        }
                    }
                    _ => match self.resolved_bounds() {
                        Ok((a, b, c, d)) => p.rho >= a && p.rho <= b && p.z >= c && p.z <= d,
                        Err(_) => false,
                    },
                }
            }
            Region::Ball { center_rho, center_z, radius } => {
                ((p.rho - center_rho).powi(2) + (p.z - center_z).powi(2)).sqrt() <= *radius
            }
            Region::Annulus { r0, r1 } => {
                let r = p.r();
                r >= *r0 && r <= *r1
            }
        }
    }

    /// Planar (meridian) area with exact formulas where available.
    pub fn planar_area(&self) -> Result<f64> {
        match self {
            Region::Ball { radius, .. } => Ok(std::f64::consts::PI * radius * radius),
            Region::Annulus { r0, r1 } => {
                // meridian half-annulus area
                Ok(0.5 * std::f64::consts::PI * (r1 * r1 - r0 * r0))
            }
            Region::Shrunk { base, sigma } => match base.as_ref() {
                Region::Ball { radius, .. } => {
                    let r = radius - sigma;
                    if r <= 0.0 {
                        return Err(AxiError::Config("shrunk ball is empty".into()));
                    }
                    Ok(std::f64::consts::PI * r * r)
                }
                _ => {
                    let (a, b, c, d) = self.resolved_bounds()?;
                    Ok((b - a) * (d - c))
                }
            },
            _ => {
                let (a, b, c, d) = self.resolved_bounds()?;
                Ok((b - a) * (d - c))
            }
        }
    }

    /// Diameter of the planar footprint.
    pub fn diam(&self) -> Result<f64> {
        match self {
            Region::Ball { radius, .. } => Ok(2.0 * radius),
            Region::Shrunk { base, sigma } => match base.as_ref() {
                Region::Ball { radius, .. } => Ok(2.0 * (radius - sigma).max(0.0)),
                _ => {
                    let (a, b, c, d) = self.resolved_bounds()?;
                    Ok(((b - a).powi(2) + (d - c).powi(2)).sqrt())
                }
            },
            Region::Annulus { r1, .. } => Ok(2.0 * r1),
            _ => {
                let (a, b, c, d) = self.resolved_bounds()?;
                Ok(((b - a).powi(2) + (d - c).powi(2)).sqrt())
            }
        }
    }

    /// r₀ = max{diam Ω, 1} entering the logarithmic-moment bounds.
    pub fn r0_log_moment(&self) -> Result<f64> {
        Ok(self.diam()?.max(1.0))
    }

    /// The four sides of a rectangle-like footprint as (start, end) pairs,
    /// ordered inner (ρ = ρ_lo), outer (ρ = ρ_hi), bottom (z = z_lo),
    /// top (z = z_hi); each traversed with the outward normal to its right.
    pub fn rectangle_sides(&self) -> Result<[(HalfPlanePoint, HalfPlanePoint); 4]> {
        let (a, b, c, d) = self.resolved_bounds()?;
        Ok([
            (HalfPlanePoint::at(a, d), HalfPlanePoint::at(a, c)),
            (HalfPlanePoint::at(b, c), HalfPlanePoint::at(b, d)),
            (HalfPlanePoint::at(a, c), HalfPlanePoint::at(b, c)),
            (HalfPlanePoint::at(b, d), HalfPlanePoint::at(a, d)),
        ])
    }
}
