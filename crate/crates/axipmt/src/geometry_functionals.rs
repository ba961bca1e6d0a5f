//! Mass, volume, area, length, and norm functionals of an axisymmetric
//! metric — the quantities the stability statements control.
//!
//! Masses come in two flavors: the ADM flux integral over large coordinate
//! spheres (reduced by axisymmetry to a polar quadrature and Richardson
//! extrapolation in 1/R), and the half-plane mass integral
//!
//! ```text
//!   m = (1/16π) ∫ [ e^{−2(u−α)} ( R_g + (ρ²e^{2u−4α}/2)(B_z − A_ρ)² )
//!                   + 2|∇u|² ] ρ dρ dz dφ,
//! ```
//!
//! whose integrand is nonnegative under the scalar-curvature hypotheses, so
//! truncations are monotone. Norm functionals (W^{1,p} with p < 2, Hölder
//! estimates on annuli) follow the frame and measure conventions documented
//! on each operation.

use crate::error::{AxiError, Result};
use crate::field_core::{integrate_2d, simpson, tanh_sinh, HalfPlanePoint, Region, Resolution};
use crate::jet::Jet2;
use crate::metric_model::AxiMetric;

/// Which mass definition produced a [`MassResult`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MassMethod {
    Flux,
    Brill,
}

/// A mass value with its method, truncation scale, and a nonnegative
/// estimate of the truncation/extrapolation error (reported, never silently
/// added to the value).
#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct MassResult {
    pub value: f64,
    pub method: MassMethod,
    pub truncation_radius: f64,
    pub tail_error: f64,
}

impl MassResult {
    fn validated(self) -> Result<Self> {
        if !self.value.is_finite() || !(self.tail_error >= 0.0) {
            return Err(AxiError::Numeric(format!(
                "invalid mass result: value {} tail {}",
                self.value, self.tail_error
            )));
        }
        Ok(self)
    }
}

/// The flux integrand on the sphere of radius R, reduced to the polar angle.
/// With E = e^{2α−2u} and V = e^{−2u} the Cartesian flux densities combine to
///
/// ```text
///   m(R) = (R²/8) ∫₀^π [ sinθ ((E−V)/ρ − ∂ρ(E+V)) − cosθ ∂z(E+V) ] sinθ dθ,
/// ```
///
/// with the integrand vanishing at both poles (set exactly, never evaluated
/// as 0/0).
fn flux_at_radius(metric: &AxiMetric, radius: f64, res: &Resolution) -> Result<f64> {
    let integrand = |theta: f64| -> f64 {
        let (s, c) = theta.sin_cos();
        if s <= 0.0 {
            return 0.0;
        }
        let p = HalfPlanePoint::at(radius * s, radius * c);
        let ju = metric.u.jet_at(p);
        let ja = metric.alpha.jet_at(p);
        let e = (2.0 * ja.v - 2.0 * ju.v).exp();
        let v = (-2.0 * ju.v).exp();
        let e_r = e * 2.0 * (ja.dr - ju.dr);
        let e_z = e * 2.0 * (ja.dz - ju.dz);
        let v_r = -2.0 * v * ju.dr;
        let v_z = -2.0 * v * ju.dz;
        let t_sin = (e - v) / p.rho - v_r - e_r;
        let t_cos = -(e_z + v_z);
        (s * t_sin + c * t_cos) * s
    };
    let n = (2 * res.n_sphere).max(16);
    let value = radius * radius / 8.0
        * (simpson(integrand, 0.0, std::f64::consts::FRAC_PI_2, n)
            + simpson(integrand, std::f64::consts::FRAC_PI_2, std::f64::consts::PI, n));
    if !value.is_finite() {
        return Err(AxiError::Numeric(format!("non-finite flux at R = {radius}")));
    }
    Ok(value)
}

/// Neville extrapolation of (h_i, v_i) samples to h = 0.
fn neville_to_zero(samples: &[(f64, f64)]) -> f64 {
    let n = samples.len();
    let hs: Vec<f64> = samples.iter().map(|s| s.0).collect();
    let mut t: Vec<f64> = samples.iter().map(|s| s.1).collect();
    for j in 1..n {
        for i in 0..(n - j) {
            // ascending i keeps t[i+1] at level j−1 when t[i] is updated
            t[i] = (hs[i] * t[i + 1] - hs[i + j] * t[i]) / (hs[i] - hs[i + j]);
        }
    }
    t[0]
}

/// ADM mass by flux integrals at the given radii, Richardson-extrapolated
/// in 1/R. All radii must lie beyond the chart's asymptotic radius R₀ and
/// be distinct; with several radii the per-radius residuals against the
/// extrapolated value must shrink as R grows.
pub fn adm_flux_mass(metric: &AxiMetric, radii: &[f64], res: &Resolution) -> Result<MassResult> {
    if radii.is_empty() {
        return Err(AxiError::Config("adm_flux_mass needs at least one radius".into()));
    }
    let r0 = metric.asym.r0;
    let mut sorted: Vec<f64> = radii.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    if sorted[0] <= r0 {
        return Err(AxiError::Precondition(format!(
            "flux radius {} is inside the asymptotic radius R₀ = {r0}",
            sorted[0]
        )));
    }
    sorted.dedup();
    if sorted.len() != radii.len() {
        return Err(AxiError::Config("flux radii must be distinct".into()));
    }
    let samples: Vec<(f64, f64)> = sorted
        .iter()
        .map(|&r| Ok((1.0 / r, flux_at_radius(metric, r, res)?)))
        .collect::<Result<_>>()?;
    let r_max = *sorted.last().unwrap();
    if samples.len() == 1 {
        let c = metric.asym.c;
        return MassResult {
            value: samples[0].1,
            method: MassMethod::Flux,
            truncation_radius: r_max,
            tail_error: c * c * 4.0 * std::f64::consts::PI / r_max + c / r_max,
        }
        .validated();
    }
    let value = neville_to_zero(&samples);
    // residuals must improve with radius, otherwise the 1/R model is wrong
    let resids: Vec<f64> = samples.iter().map(|s| (s.1 - value).abs()).collect();
    for w in resids.windows(2) {
        if w[1] > w[0] + 1e-12 * (1.0 + value.abs()) {
            return Err(AxiError::Numeric(format!(
                "non-monotone extrapolation residuals {resids:?} over radii {sorted:?}"
            )));
        }
    }
    let prev = neville_to_zero(&samples[..samples.len() - 1]);
    MassResult {
        value,
        method: MassMethod::Flux,
        truncation_radius: r_max,
        tail_error: (value - prev).abs(),
    }
    .validated()
}

fn annulus_bounds(truncation: &Region) -> Result<(f64, f64)> {
    match truncation {
        Region::Annulus { r0, r1 } => Ok((*r0, *r1)),
        Region::Ball { center_rho, center_z, radius } if *center_rho == 0.0 && *center_z == 0.0 => {
            Ok((0.0, *radius))
        }
        other => Err(AxiError::Config(format!(
            "mass truncation must be an origin-centered ball or spherical annulus, got {other:?}"
        ))),
    }
}

/// The half-plane mass integral over a spherical truncation, 2π × meridian
/// quadrature in polar coordinates (tanh–sinh in the polar angle to absorb
/// near-axis concentration, log-spaced radial nodes to resolve small-scale
/// structure near the center). Points outside the chart domain or under the
/// axis floor contribute zero. The formula presumes R_g ≥ 0; the negative
/// part of the curvature density is integrated separately, and a negative
/// part carrying non-trivial weight relative to the integral is an error.
/// (A pointwise-minimum guard would instead trip on measure-zero rounding
/// noise where closed forms cancel catastrophically next to excluded chart
/// boundaries.)
pub fn brill_mass(metric: &AxiMetric, truncation: &Region, res: &Resolution) -> Result<MassResult> {
    let (r_lo, r_hi) = annulus_bounds(truncation)?;
    let floor = metric.rho_floor();
    let r_inner = if r_lo > 0.0 { r_lo } else { 1e-9 * (1.0 + r_hi) };
    let quad = |density: &dyn Fn(HalfPlanePoint) -> f64| -> f64 {
        let radial = |theta: f64| -> f64 {
            let (s, c) = theta.sin_cos();
            simpson(
                |lr: f64| {
                    let r = lr.exp();
                    let p = HalfPlanePoint::at((r * s).max(0.0), r * c);
                    // measure ρ dρ dz = (r sinθ) r dr dθ, times dr = r d(log r)
                    density(p) * p.rho * r * r
                },
                r_inner.ln(),
                r_hi.ln(),
                res.n_radial,
            )
        };
        tanh_sinh(radial, 0.0, std::f64::consts::FRAC_PI_2, 2 * res.n_sphere)
            + tanh_sinh(radial, std::f64::consts::FRAC_PI_2, std::f64::consts::PI, 2 * res.n_sphere)
    };
    let mut min_curv = f64::INFINITY;
    let meridian = {
        let min_curv = std::cell::RefCell::new(&mut min_curv);
        let density = |p: HalfPlanePoint| -> f64 {
            if p.rho < floor || !metric.in_domain(p) {
                return 0.0;
            }
            let ju = metric.u.jet_at(p);
            let ja = metric.alpha.jet_at(p);
            let curv = match metric.brill_scalar_curvature(p) {
                Ok(r) => r,
                Err(_) => return 0.0,
            };
            {
                let mut mc = min_curv.borrow_mut();
                if curv < **mc {
                    **mc = curv;
                }
            }
            let twist = if metric.ab_identically_zero {
                0.0
            } else {
                let curl = metric.twist_curl(p).unwrap_or(0.0);
                p.rho * p.rho * (2.0 * ju.v - 4.0 * ja.v).exp() / 2.0 * curl * curl
            };
            (-2.0 * (ju.v - ja.v)).exp() * (curv + twist) + 2.0 * (ju.dr * ju.dr + ju.dz * ju.dz)
        };
        quad(&density)
    };
    let negative_part = if min_curv >= 0.0 {
        0.0
    } else {
        quad(&|p: HalfPlanePoint| -> f64 {
            if p.rho < floor || !metric.in_domain(p) {
                return 0.0;
            }
            match metric.brill_scalar_curvature(p) {
                Ok(curv) if curv < 0.0 => {
                    let u = metric.u.eval(p);
                    let al = metric.alpha.eval(p);
                    (-2.0 * (u - al)).exp() * (-curv)
                }
                _ => 0.0,
            }
        })
    };
    if negative_part > 1e-4 * (1.0 + meridian.abs()) {
        return Err(AxiError::Precondition(format!(
            "scalar curvature falls to {min_curv:.3e} inside the truncation, with integrated \
             negative part {negative_part:.3e}; the mass integral presumes R_g ≥ 0 up to \
             quadrature tolerance"
        )));
    }
    let c = metric.asym.c;
    MassResult {
        value: meridian / 8.0,
        method: MassMethod::Brill,
        truncation_radius: r_hi,
        tail_error: c * c * 4.0 * std::f64::consts::PI / r_hi,
    }
    .validated()
}

/// Volume of a solid-of-revolution region: 2π ∫ ρ e^{2α−3u} dρ dz.
/// The region must be solid, stay off the axis, and lie inside the chart
/// domain.
pub fn volume(metric: &AxiMetric, region: &Region, res: &Resolution) -> Result<f64> {
    if !region.is_solid() {
        return Err(AxiError::Config(
            "volume needs a solid (cylinder-kind) region; planar rectangles have no 3-volume"
                .into(),
        ));
    }
    region.validate()?;
    let (a, b, c, d) = region.resolved_bounds()?;
    if a <= 0.0 {
        return Err(AxiError::OutOfDomain(format!("volume region touches the axis (ρ_lo = {a})")));
    }
    let mut domain_violation: Option<HalfPlanePoint> = None;
    let val = {
        let dv = std::cell::RefCell::new(&mut domain_violation);
        integrate_2d(
            |rho, z| {
                let p = HalfPlanePoint::at(rho, z);
                if !metric.in_domain(p) {
                    dv.borrow_mut().get_or_insert(p);
                    return 0.0;
                }
                let u = metric.u.eval(p);
                let al = metric.alpha.eval(p);
                rho * (2.0 * al - 3.0 * u).exp()
            },
            (a, b, c, d),
            res.n_rho,
            res.n_z,
        )
    };
    if let Some(p) = domain_violation {
        return Err(AxiError::OutOfDomain(format!(
            "volume region leaves the {} chart domain at ({}, {})",
            metric.family_tag, p.rho, p.z
        )));
    }
    Ok(2.0 * std::f64::consts::PI * val)
}

/// A piecewise-C¹ generating curve t ∈ [0, 1] → (ρ(t), z(t)) in the
/// half-plane; its revolution is the surface the area functionals measure.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratingCurve {
    /// Straight meridian segment from `p` to `q`.
    Segment { p: HalfPlanePoint, q: HalfPlanePoint },
    /// Circular arc about `center`, polar angle measured from the +z
    /// direction: (ρ, z)(θ) = center + radius (sin θ, cos θ).
    Arc { center: HalfPlanePoint, radius: f64, theta0: f64, theta1: f64 },
}

impl GeneratingCurve {
    /// Meridian semicircle of radius r about an axis point (0, z0); its
    /// revolution is the coordinate sphere.
    pub fn semicircle(z0: f64, r: f64) -> GeneratingCurve {
        GeneratingCurve::Arc {
            center: HalfPlanePoint::at(0.0, z0),
            radius: r,
            theta0: 0.0,
            theta1: std::f64::consts::PI,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            GeneratingCurve::Segment { p, q } => {
                if p.rho < 0.0 || q.rho < 0.0 {
                    return Err(AxiError::Config("segment endpoint has ρ < 0".into()));
                }
                Ok(())
            }
            GeneratingCurve::Arc { center, radius, theta0, theta1 } => {
                if !(radius.is_finite() && *radius > 0.0) || theta0 == theta1 {
                    return Err(AxiError::Config("degenerate arc".into()));
                }
                // ρ(θ) = c_ρ + r sinθ must stay nonnegative
                let n = 64;
                for i in 0..=n {
                    let t = theta0 + (theta1 - theta0) * i as f64 / n as f64;
                    if center.rho + radius * t.sin() < -1e-12 {
                        return Err(AxiError::Config(format!("arc dips to ρ < 0 at θ = {t}")));
                    }
                }
                Ok(())
            }
        }
    }

    /// Point at parameter t ∈ [0, 1].
    pub fn point(&self, t: f64) -> HalfPlanePoint {
        match self {
            GeneratingCurve::Segment { p, q } => {
                HalfPlanePoint { rho: p.rho + (q.rho - p.rho) * t, z: p.z + (q.z - p.z) * t }
            }
            GeneratingCurve::Arc { center, radius, theta0, theta1 } => {
                let th = theta0 + (theta1 - theta0) * t;
                HalfPlanePoint {
                    rho: (center.rho + radius * th.sin()).max(0.0),
                    z: center.z + radius * th.cos(),
                }
            }
        }
    }

    /// Euclidean speed |ṡ(t)| (constant for both kinds).
    pub fn speed(&self) -> f64 {
        match self {
            GeneratingCurve::Segment { p, q } => p.dist(*q),
            GeneratingCurve::Arc { radius, theta0, theta1, .. } => radius * (theta1 - theta0).abs(),
        }
    }

    pub fn euclidean_length(&self) -> f64 {
        self.speed()
    }
}

/// Area of the revolved surface: 2π ∫ ρ e^{α−2u} |ṡ| dt.
pub fn area(metric: &AxiMetric, curve: &GeneratingCurve, res: &Resolution) -> Result<f64> {
    curve.validate()?;
    let speed = curve.speed();
    if !speed.is_finite() {
        return Err(AxiError::Numeric("non-finite curve speed".into()));
    }
    let mut bad: Option<HalfPlanePoint> = None;
    let val = {
        let bad = std::cell::RefCell::new(&mut bad);
        simpson(
            |t| {
                let p = curve.point(t);
                if !metric.in_domain(p) {
                    bad.borrow_mut().get_or_insert(p);
                    return 0.0;
                }
                let u = metric.u.eval(p);
                let al = metric.alpha.eval(p);
                p.rho * (al - 2.0 * u).exp() * speed
            },
            0.0,
            1.0,
            res.n_1d,
        )
    };
    if let Some(p) = bad {
        return Err(AxiError::OutOfDomain(format!(
            "curve leaves the {} chart domain at ({}, {})",
            metric.family_tag, p.rho, p.z
        )));
    }
    Ok(2.0 * std::f64::consts::PI * val)
}

/// Area of the same revolved surface in flat space: 2π ∫ ρ |ṡ| dt.
pub fn euclidean_area(curve: &GeneratingCurve, res: &Resolution) -> Result<f64> {
    curve.validate()?;
    let speed = curve.speed();
    Ok(2.0 * std::f64::consts::PI * simpson(|t| curve.point(t).rho * speed, 0.0, 1.0, res.n_1d))
}

/// A point of the 3-manifold in cylindrical coordinates.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct CylPoint3 {
    pub rho: f64,
    pub z: f64,
    pub phi: f64,
}

impl CylPoint3 {
    pub fn cartesian(&self) -> [f64; 3] {
        [self.rho * self.phi.cos(), self.rho * self.phi.sin(), self.z]
    }
}

/// Length of the straight Euclidean chord between two points, measured in g:
/// 1D quadrature of √(e^{2(α−u)}(ρ′² + z′²) + ρ² e^{−2u} φ′²) along the
/// chord. Twist-free charts only; errors if the chord leaves the domain.
pub fn segment_length(
    metric: &AxiMetric,
    p: CylPoint3,
    q: CylPoint3,
    res: &Resolution,
) -> Result<f64> {
    if !metric.ab_identically_zero {
        return Err(AxiError::Precondition(format!(
            "segment length is implemented for twist-free charts; {} has connection terms",
            metric.family_tag
        )));
    }
    let a = p.cartesian();
    let b = q.cartesian();
    let d = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
    let euclid2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
    // the angular momentum x y′ − y x′ of a straight chord is constant
    let ell = a[0] * d[1] - a[1] * d[0];
    let mut bad: Option<HalfPlanePoint> = None;
    let val = {
        let bad = std::cell::RefCell::new(&mut bad);
        simpson(
            |t| {
                let x = a[0] + d[0] * t;
                let y = a[1] + d[1] * t;
                let z = a[2] + d[2] * t;
                let rho2 = x * x + y * y;
                let pt = HalfPlanePoint::at(rho2.sqrt(), z);
                if !metric.in_domain(pt) {
                    bad.borrow_mut().get_or_insert(pt);
                    return 0.0;
                }
                let u = metric.u.eval(pt);
                let al = metric.alpha.eval(pt);
                let e = (2.0 * (al - u)).exp();
                let w = (-2.0 * u).exp();
                // E(ρ′²+z′²) + Wρ²φ′² = E|c′|² + (W−E)·ℓ²/ρ²; a chord with
                // ℓ = 0 passes through the axis and the second term vanishes
                let angular = if ell == 0.0 { 0.0 } else { (w - e) * ell * ell / rho2 };
                (e * euclid2 + angular).max(0.0).sqrt()
            },
            0.0,
            1.0,
            res.n_1d,
        )
    };
    if let Some(pt) = bad {
        return Err(AxiError::OutOfDomain(format!(
            "chord leaves the {} chart domain at ({}, {})",
            metric.family_tag, pt.rho, pt.z
        )));
    }
    Ok(val)
}

/// Deviation targets for the W^{1,p} norms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SobolevTarget {
    /// g − δ in 3D: orthonormal-coframe components (e^{2α−2u}−1 twice,
    /// e^{−2u}−1 once), measure ρ dρ dz dφ. Needs a solid region.
    GMinusDelta,
    /// q − δ in 2D: e^{2α−2u}−1 twice, planar measure dρ dz.
    QMinusDelta,
    U,
    AlphaMinus2U,
    /// e^{|u|} − 1.
    ExpAbsUMinus1,
    /// e^{|α−2u|} − 1.
    ExpAbsAlphaMinus2UMinus1,
}

/// Component convention for the metric-deviation targets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComponentFrame {
    /// Flat orthonormal coframe (dρ, dz, ρ dφ) — the default convention.
    #[default]
    Orthonormal,
    /// Raw coordinate components (g_ρρ−1, g_zz−1, g_φφ−ρ²).
    RawCoordinate,
}

/// W^{1,p} norm of the target over the region, 1 ≤ p < 2:
/// (∫ Σ_components |f|^p + |∂ρ f|^p + |∂z f|^p dμ)^{1/p}. Scalar targets are
/// planar (rectangle region, dρdz); the 3D g−δ target needs a solid region
/// and uses 2πρ dρdz.
pub fn sobolev_norm(
    metric: &AxiMetric,
    region: &Region,
    p: f64,
    target: SobolevTarget,
    frame: ComponentFrame,
    res: &Resolution,
) -> Result<f64> {
    if !(1.0..2.0).contains(&p) {
        return Err(AxiError::Precondition(format!(
            "W^{{1,p}} control holds for 1 ≤ p < 2 only (counterexamples beyond); got p = {p}"
        )));
    }
    region.validate()?;
    let solid = region.is_solid();
    match target {
        SobolevTarget::GMinusDelta => {
            if !solid {
                return Err(AxiError::Config(
                    "the 3D g−δ target needs a solid (cylinder) region".into(),
                ));
            }
        }
        _ => {
            if solid {
                return Err(AxiError::Config(
                    "planar targets need a rectangle region, not a solid one".into(),
                ));
            }
        }
    }
    let bounds = region.resolved_bounds()?;
    // |f|^p + |f_ρ|^p + |f_z|^p from a value jet
    let wp = |j: Jet2| j.v.abs().powf(p) + j.dr.abs().powf(p) + j.dz.abs().powf(p);
    let integrand = |rho: f64, z: f64| -> f64 {
        let pt = HalfPlanePoint::at(rho, z);
        if !metric.in_domain(pt) {
            return 0.0;
        }
        let ju = metric.u.jet_at(pt);
        let ja = metric.alpha.jet_at(pt);
        let e = ((ja - ju) * 2.0).exp();
        let w = ((-ju) * 2.0).exp();
        let sum = match target {
            SobolevTarget::GMinusDelta => match frame {
                ComponentFrame::Orthonormal => 2.0 * wp(e - 1.0) + wp(w - 1.0),
                ComponentFrame::RawCoordinate => {
                    let r = Jet2::var_rho(rho);
                    2.0 * wp(e - 1.0) + wp(r.sq() * (w - 1.0))
                }
            },
            SobolevTarget::QMinusDelta => 2.0 * wp(e - 1.0),
            SobolevTarget::U => wp(ju),
            SobolevTarget::AlphaMinus2U => wp(ja - ju * 2.0),
            SobolevTarget::ExpAbsUMinus1 => wp(ju.abs().exp() - 1.0),
            SobolevTarget::ExpAbsAlphaMinus2UMinus1 => wp((ja - ju * 2.0).abs().exp() - 1.0),
        };
        if solid {
            sum * 2.0 * std::f64::consts::PI * rho
        } else {
            sum
        }
    };
    let total = integrate_2d(integrand, bounds, res.n_rho, res.n_z);
    Ok(total.max(0.0).powf(1.0 / p))
}

/// Targets for the Hölder estimator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HolderTarget {
    U,
    AlphaMinus2U,
    /// Max over the orthonormal-coframe deviations of g − δ.
    GMinusDelta,
}

/// Discrete C^{0,β} estimator on a spherical annulus: sup |f| plus the
/// maximum difference quotient |f(x)−f(y)|/|x−y|^β over all pairs of a
/// deterministic (log-radial × polar) sample grid with `n` subdivisions per
/// axis. This is a lower bound of the true norm; doubling `n` refines the
/// grid in a nested way, so the estimate is nondecreasing in `n`.
pub fn holder_norm_estimate(
    metric: &AxiMetric,
    region: &Region,
    beta: f64,
    target: HolderTarget,
    n: usize,
) -> Result<f64> {
    if !(0.0 < beta && beta < 1.0) {
        return Err(AxiError::Precondition(format!("β must lie in (0,1), got {beta}")));
    }
    let (r0, r1) = match region {
        Region::Annulus { r0, r1 } => (*r0, *r1),
        other => {
            return Err(AxiError::Config(format!(
                "Hölder estimator works on spherical annuli, got {other:?}"
            )))
        }
    };
    if r0 <= 0.0 {
        return Err(AxiError::Config("annulus must stay away from the origin".into()));
    }
    let n = n.max(2);
    let value_at = |p: HalfPlanePoint| -> Result<f64> {
        let u = metric.u.eval(p);
        let al = metric.alpha.eval(p);
        Ok(match target {
            HolderTarget::U => u,
            HolderTarget::AlphaMinus2U => al - 2.0 * u,
            HolderTarget::GMinusDelta => {
                let e = (2.0 * al - 2.0 * u).exp() - 1.0;
                let w = (-2.0 * u).exp() - 1.0;
                if e.abs() >= w.abs() {
                    e
                } else {
                    w
                }
            }
        })
    };
    let mut pts: Vec<(HalfPlanePoint, f64)> = Vec::with_capacity((n + 1) * (n + 1));
    for i in 0..=n {
        let r = r0 * (r1 / r0).powf(i as f64 / n as f64);
        for j in 0..=n {
            let th = std::f64::consts::PI * j as f64 / n as f64;
            let p = HalfPlanePoint::at(r * th.sin(), r * th.cos());
            if !metric.in_domain(p) {
                continue;
            }
            pts.push((p, value_at(p)?));
        }
    }
    let mut sup = 0.0f64;
    for (_, v) in &pts {
        sup = sup.max(v.abs());
    }
    let mut semi = 0.0f64;
    for i in 0..pts.len() {
        for j in (i + 1)..pts.len() {
            let d = pts[i].0.dist(pts[j].0);
            if d > 1e-14 {
                semi = semi.max((pts[i].1 - pts[j].1).abs() / d.powf(beta));
            }
        }
    }
    Ok(sup + semi)
}

/// Outcome of the falloff audit against the declared asymptotic constants.
#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct FalloffReport {
    /// max over samples/orders of |∂^I f| r^{1+|I|} for f ∈ {u, α, A, B}.
    pub c_estimate: f64,
    pub declared_c: f64,
    /// Whether the strengthened |α| r^{1+τ} bound was also audited.
    pub strong_mode: bool,
    pub pass: bool,
}

/// Sample the decay bounds |f| ≤ C/r and |∂f| ≤ C/r² beyond R₀ for the four
/// potentials, plus the strengthened |α| ≤ C/r^{1+τ} bound when τ is
/// declared. Purely reporting: never errors on a failed bound.
pub fn falloff_check(metric: &AxiMetric, radii: &[f64], res: &Resolution) -> Result<FalloffReport> {
    let r0 = metric.asym.r0;
    for &r in radii {
        if r <= r0 {
            return Err(AxiError::Precondition(format!(
                "falloff sample radius {r} is inside R₀ = {r0}"
            )));
        }
    }
    let mut c_est = 0.0f64;
    let fields = [&metric.u, &metric.alpha, &metric.a, &metric.b];
    let tau = metric.asym.tau;
    let n_th = res.n_sphere.max(8);
    for &r in radii {
        for j in 0..=n_th {
            let th = std::f64::consts::PI * j as f64 / n_th as f64;
            let p = HalfPlanePoint::at(r * th.sin(), r * th.cos());
            if !metric.in_domain(p) {
                continue;
            }
            for (idx, f) in fields.iter().enumerate() {
                let jf = f.jet_at(p);
                c_est = c_est.max(jf.v.abs() * r);
                c_est = c_est.max(jf.dr.hypot(jf.dz) * r * r);
                if idx == 1 {
                    if let Some(t) = tau {
                        c_est = c_est.max(jf.v.abs() * r.powf(1.0 + t));
                    }
                }
            }
        }
    }
    Ok(FalloffReport {
        c_estimate: c_est,
        declared_c: metric.asym.c,
        strong_mode: tau.is_some(),
        pass: c_est <= metric.asym.c * (1.0 + 1e-12),
    })
}

/// A functional evaluation as a serializable record.
#[derive(Clone, Debug, serde::Serialize)]
pub struct FunctionalRecord {
    pub functional: String,
    pub family: String,
    pub params: serde_json::Value,
    pub region: Option<Region>,
    pub value: f64,
    pub error_estimate: Option<f64>,
    pub resolution: Resolution,
}
