//! Deterministic quadrature rules.
//!
//! - composite Simpson (1D and iterated 2D) for smooth integrands;
//! - trapezoid for periodic integrands (spectrally accurate);
//! - tanh–sinh (double-exponential) for endpoint-singular radial factors;
//! - polar decomposition about a singular interior point: the region is cut
//!   into angular panels on which the exit radius is smooth, the radial
//!   integral carries the Jacobian r and is done with tanh–sinh;
//! - boundary line integrals over rectangle sides with a side selector.
//!
//! All rules are serial, fixed-node, and order-stable, so repeated runs are
//! bit-identical.

use super::region::Region;
use super::HalfPlanePoint;
use crate::error::{AxiError, Result};

/// Node budgets for the composite rules. `halved`/`doubled` scale every
/// count (with sane floors) for convergence studies.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Resolution {
    /// Subintervals for 1D Simpson (lines, boundary sides, parameter curves).
    pub n_1d: usize,
    /// ρ-subintervals for 2D iterated Simpson.
    pub n_rho: usize,
    /// z-subintervals for 2D iterated Simpson.
    pub n_z: usize,
    /// Angular subintervals per quarter-turn in polar decompositions.
    pub n_angular: usize,
    /// tanh–sinh node count for radial integrals.
    pub n_radial: usize,
    /// Polar-angle subintervals on spherical spheres (flux integrals).
    pub n_sphere: usize,
}

impl Default for Resolution {
    fn default() -> Self {
        Resolution { n_1d: 256, n_rho: 128, n_z: 128, n_angular: 48, n_radial: 256, n_sphere: 48 }
    }
}

impl Resolution {
    pub fn halved(&self) -> Resolution {
        Resolution {
            n_1d: (self.n_1d / 2).max(8),
            n_rho: (self.n_rho / 2).max(8),
            n_z: (self.n_z / 2).max(8),
            n_angular: (self.n_angular / 2).max(8),
            n_radial: (self.n_radial / 2).max(16),
            n_sphere: (self.n_sphere / 2).max(8),
        }
    }

    pub fn doubled(&self) -> Resolution {
        Resolution {
            n_1d: self.n_1d * 2,
            n_rho: self.n_rho * 2,
            n_z: self.n_z * 2,
            n_angular: self.n_angular * 2,
            n_radial: self.n_radial * 2,
            n_sphere: self.n_sphere * 2,
        }
    }

    /// A leaner budget for broad scans where per-call accuracy demands are
    /// modest.
    pub fn coarse() -> Resolution {
        Resolution { n_1d: 64, n_rho: 48, n_z: 48, n_angular: 24, n_radial: 96, n_sphere: 24 }
    }
}

fn round_even(n: usize) -> usize {
    let n = n.max(2);
    if n.is_multiple_of(2) {
        n
    } else {
        n + 1
    }
}

/// Composite Simpson on [a, b] with n subintervals (rounded up to even).
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    if a == b {
        return 0.0;
    }
    let n = round_even(n);
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + h * i as f64);
    }
    acc * h / 3.0
}

/// Trapezoid rule for a (b−a)-periodic integrand: n equal panels, the
/// duplicate endpoint is not evaluated.
pub fn trapezoid_periodic<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let n = n.max(1);
    let h = (b - a) / n as f64;
    let mut acc = 0.0;
    for i in 0..n {
        acc += f(a + h * i as f64);
    }
    acc * h
}

/// Iterated composite Simpson over the box [a, b] × [c, d].
pub fn integrate_2d<F: Fn(f64, f64) -> f64>(
    f: F,
    (a, b, c, d): (f64, f64, f64, f64),
    n_x: usize,
    n_y: usize,
) -> f64 {
    simpson(|y| simpson(|x| f(x, y), a, b, n_x), c, d, n_y)
}

/// tanh–sinh quadrature on [a, b] with roughly `n` nodes. Handles integrable
/// endpoint singularities; nodes that round onto an endpoint or whose weight
/// underflows are skipped.
pub fn tanh_sinh<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    if a == b {
        return 0.0;
    }
    let n = n.max(16);
    let t_max = 3.8_f64;
    let h = 2.0 * t_max / (n as f64);
    let len = b - a;
    let mut acc = 0.0;
    for i in 0..=n {
        let t = -t_max + h * i as f64;
        let s = std::f64::consts::FRAC_PI_2 * t.sinh();
        // node measured stably from the nearest endpoint:
        // (1 ± tanh s)/2 = 1/(1 + e^{∓2s}) avoids cancellation in the gap
        let x = if t < 0.0 {
            a + len / (1.0 + (-2.0 * s).exp())
        } else {
            b - len / (1.0 + (2.0 * s).exp())
        };
        let c = s.cosh();
        let w = 0.5 * len * std::f64::consts::FRAC_PI_2 * t.cosh() / (c * c);
        if !(x > a.min(b) && x < a.max(b)) || w.abs() < 1e-60 {
            continue;
        }
        let trap = if i == 0 || i == n { 0.5 } else { 1.0 };
        acc += trap * w * f(x);
    }
    acc * h
}

/// Which sides of a rectangle footprint a boundary integral runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SideSelector {
    /// All four sides.
    All,
    /// Only the inner side ρ = ρ_lo.
    Inner,
    /// The outer, bottom, and top sides (everything but the inner side).
    OuterComplement,
}

/// Line integral ∫ f(p, ν) ds over the selected sides of the region's
/// rectangle footprint, ν the outward unit normal.
pub fn integrate_boundary<F: Fn(HalfPlanePoint, (f64, f64)) -> f64>(
    region: &Region,
    sel: SideSelector,
    f: F,
    n_1d: usize,
) -> Result<f64> {
    let (a, b, c, d) = region.resolved_bounds()?;
    // sides with outward normals: inner (−1,0), outer (+1,0), bottom (0,−1),
    // top (0,+1)
    type Side = ((f64, f64), (f64, f64), (f64, f64));
    let sides: [Side; 4] = [
        ((a, c), (a, d), (-1.0, 0.0)),
        ((b, c), (b, d), (1.0, 0.0)),
        ((a, c), (b, c), (0.0, -1.0)),
        ((a, d), (b, d), (0.0, 1.0)),
    ];
    let take = |idx: usize| match sel {
        SideSelector::All => true,
        SideSelector::Inner => idx == 0,
        SideSelector::OuterComplement => idx != 0,
    };
    let mut total = 0.0;
    for (idx, (p0, p1, nv)) in sides.iter().enumerate() {
        if !take(idx) {
            continue;
        }
        let len = ((p1.0 - p0.0).powi(2) + (p1.1 - p0.1).powi(2)).sqrt();
        total += simpson(
            |t| {
                let p = HalfPlanePoint::at(p0.0 + (p1.0 - p0.0) * t, p0.1 + (p1.1 - p0.1) * t);
                f(p, *nv)
            },
            0.0,
            1.0,
            n_1d,
        ) * len;
    }
    Ok(total)
}

/// ∫_Ω F dA in polar coordinates about `y`, for F possibly singular at `y`.
/// Disks use the exit-chord formula with a periodic (interior point) or
/// tangent-split (boundary point) angular rule. Rectangles sweep each wall by
/// arclength: with wall point W(s) at distance L(s) and the wall's
/// perpendicular distance p, the angular measure is dθ = p·|W′|/L² ds, and
/// the 1/L² cancels the radial integral's L² scaling, so the swept integrand
/// stays smooth even for base points near or on the boundary. Each radial
/// line integral carries the Jacobian r and uses tanh–sinh so endpoint
/// singularities of F are absorbed.
pub fn integrate_polar<F: Fn(HalfPlanePoint) -> f64>(
    region: &Region,
    y: HalfPlanePoint,
    f: F,
    res: &Resolution,
) -> Result<f64> {
    let radial = |theta: f64, r_exit: f64| -> f64 {
        if r_exit <= 0.0 {
            return 0.0;
        }
        let (e_r, e_z) = (theta.cos(), theta.sin());
        tanh_sinh(
            |r| f(HalfPlanePoint { rho: y.rho + r * e_r, z: y.z + r * e_z }) * r,
            0.0,
            r_exit,
            res.n_radial,
        )
    };

    match region {
        Region::Ball { center_rho, center_z, radius } => {
            let d = (y.rho - center_rho, y.z - center_z);
            let dn = (d.0 * d.0 + d.1 * d.1).sqrt();
            if dn > radius * (1.0 + 1e-12) {
                return Err(AxiError::OutOfDomain(format!(
                    "polar base point ({}, {}) lies outside the disk",
                    y.rho, y.z
                )));
            }
            let arc = |theta: f64| -> f64 {
                let (e_r, e_z) = (theta.cos(), theta.sin());
                let de = d.0 * e_r + d.1 * e_z;
                let disc = de * de + radius * radius - dn * dn;
                (-de + disc.max(0.0).sqrt()).max(0.0)
            };
            if dn < radius * (1.0 - 1e-12) {
                // interior point: exit radius is smooth and periodic
                let n = (4 * res.n_angular).max(16);
                Ok(trapezoid_periodic(
                    |theta| radial(theta, arc(theta)),
                    0.0,
                    std::f64::consts::TAU,
                    n,
                ))
            } else {
                // point on the circle: split at the tangent angles, only the
                // inward half-turn contributes
                let phi = d.1.atan2(d.0);
                let (t0, t1) =
                    (phi + std::f64::consts::FRAC_PI_2, phi + 1.5 * std::f64::consts::PI);
                Ok(simpson(|theta| radial(theta, arc(theta)), t0, t1, 2 * res.n_angular))
            }
        }
        Region::Rectangle { .. } | Region::Cylinder { .. } | Region::Shrunk { .. } => {
            let (a, b, c, d) = region.resolved_bounds()?;
            if !(y.rho >= a - 1e-12 && y.rho <= b + 1e-12 && y.z >= c - 1e-12 && y.z <= d + 1e-12) {
                return Err(AxiError::OutOfDomain(format!(
                    "polar base point ({}, {}) lies outside the rectangle",
                    y.rho, y.z
                )));
            }
            let corners = [(a, c), (b, c), (b, d), (a, d)];
            let mut total = 0.0;
            for w in 0..4 {
                let p0 = corners[w];
                let p1 = corners[(w + 1) % 4];
                let dp = (p1.0 - p0.0, p1.1 - p0.1);
                let wall_len = (dp.0 * dp.0 + dp.1 * dp.1).sqrt();
                // perpendicular distance from y to the wall's supporting line
                let perp = ((p0.0 - y.rho) * dp.1 - (p0.1 - y.z) * dp.0).abs() / wall_len;
                if perp < 1e-15 * (wall_len + 1.0) {
                    continue; // collinear wall subtends zero angle
                }
                let n = (2 * res.n_angular).max(8);
                let swept = simpson(
                    |s| {
                        let wp = (p0.0 + s * dp.0, p0.1 + s * dp.1);
                        let diff = (wp.0 - y.rho, wp.1 - y.z);
                        let l2 = diff.0 * diff.0 + diff.1 * diff.1;
                        let l = l2.sqrt();
                        let (e_r, e_z) = (diff.0 / l, diff.1 / l);
                        let line = tanh_sinh(
                            |r| f(HalfPlanePoint { rho: y.rho + r * e_r, z: y.z + r * e_z }) * r,
                            0.0,
                            l,
                            res.n_radial,
                        );
                        line / l2
                    },
                    0.0,
                    1.0,
                    n,
                );
                total += perp * wall_len * swept;
            }
            Ok(total)
        }
        Region::Annulus { .. } => {
            Err(AxiError::Config("polar decomposition is not supported on spherical annuli".into()))
        }
    }
}
