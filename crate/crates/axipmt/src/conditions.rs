//! The geometric hypotheses as executable grid checks: radial monotonicity
//! (∂ρ(α−2u) ≤ 0), the area-enlarging property (α−2u ≥ 0), their
//! implication, the sub-inverse-mean-curvature-flow property of the
//! ρ-cylinders, minimal coordinate spheres, and the horizon location bound.
//!
//! Every check scans a deterministic sample grid and returns the worst
//! margin together with the point that realized it. "Holds" always means
//! margin ≥ −10⁻⁸·(1 + field scale), so exact-equality families (flat
//! space) pass under rounding.

use rayon::prelude::*;

use crate::error::{AxiError, Result};
use crate::field_core::{simpson, HalfPlanePoint, Resolution};
use crate::geometry_functionals::{area, GeneratingCurve};
use crate::metric_model::AxiMetric;

/// Deterministic sample grid for condition scans: explicit coordinate lists,
/// scanned as the product set.
#[derive(Clone, Debug)]
pub struct ConditionGrid {
    pub rho: Vec<f64>,
    pub z: Vec<f64>,
}

impl ConditionGrid {
    /// Default scan window: log-spaced ρ from the chart's axis floor out to
    /// 10·R₀ (resolving near-axis steepness and falloff together), linear z
    /// over |z| ≤ 10·R₀.
    pub fn standard(metric: &AxiMetric, n_rho: usize, n_z: usize) -> ConditionGrid {
        let r_out = 10.0 * metric.asym.r0;
        let lo = metric.rho_floor().min(r_out / 2.0);
        ConditionGrid::from_ranges((lo, r_out), n_rho, (-r_out, r_out), n_z, true)
            .expect("standard grid ranges are valid by construction")
    }

    pub fn from_ranges(
        rho: (f64, f64),
        n_rho: usize,
        z: (f64, f64),
        n_z: usize,
        log_rho: bool,
    ) -> Result<ConditionGrid> {
        let (r0, r1) = rho;
        let (z0, z1) = z;
        if !(r0 > 0.0 && r1 > r0 && z1 > z0 && n_rho >= 2 && n_z >= 2) {
            return Err(AxiError::Config(format!(
                "bad condition grid: ρ ∈ [{r0}, {r1}] ({n_rho}), z ∈ [{z0}, {z1}] ({n_z})"
            )));
        }
        let rho_samples = (0..n_rho)
            .map(|i| {
                let t = i as f64 / (n_rho - 1) as f64;
                if log_rho {
                    r0 * (r1 / r0).powf(t)
                } else {
                    r0 + (r1 - r0) * t
                }
            })
            .collect();
        let z_samples = (0..n_z).map(|j| z0 + (z1 - z0) * j as f64 / (n_z - 1) as f64).collect();
        Ok(ConditionGrid { rho: rho_samples, z: z_samples })
    }

    /// Restriction to a single coordinate cylinder ρ = ρ₀.
    fn at_rho(&self, rho0: f64) -> ConditionGrid {
        ConditionGrid { rho: vec![rho0], z: self.z.clone() }
    }
}

/// Outcome of a pointwise-inequality scan.
#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct ConditionVerdict {
    pub holds: bool,
    /// Minimum slack of the defining inequality over the sampled set.
    pub margin: f64,
    /// The sample realizing the minimum.
    pub witness: HalfPlanePoint,
}

impl ConditionVerdict {
    pub fn record(&self, condition: &str) -> serde_json::Value {
        serde_json::json!({
            "condition": condition,
            "holds": self.holds,
            // + 0.0 folds IEEE negative zero into plain zero for display
            "margin": self.margin + 0.0,
            "witness": { "rho": self.witness.rho, "z": self.witness.z },
        })
    }
}

fn hold_tolerance(scale: f64) -> f64 {
    1e-8 * (1.0 + scale.abs())
}

/// Minimum of a pointwise quantity over the grid, parallel over z-rows with
/// a deterministic row-ordered reduction. Points outside the chart domain
/// are skipped; an entirely-out-of-domain grid is an error.
fn scan_min<F>(metric: &AxiMetric, grid: &ConditionGrid, quantity: F) -> Result<ConditionVerdict>
where
    F: Fn(&AxiMetric, HalfPlanePoint) -> f64 + Sync,
{
    let rows: Vec<Option<(f64, HalfPlanePoint, f64)>> = grid
        .z
        .par_iter()
        .map(|&z| {
            let mut best: Option<(f64, HalfPlanePoint)> = None;
            let mut scale = 0.0f64;
            for &rho in &grid.rho {
                let p = HalfPlanePoint::at(rho, z);
                if !metric.in_domain(p) {
                    continue;
                }
                let v = quantity(metric, p);
                scale = scale.max(v.abs());
                match best {
                    Some((m, _)) if m <= v => {}
                    _ => best = Some((v, p)),
                }
            }
            best.map(|(m, w)| (m, w, scale))
        })
        .collect();
    let mut margin = f64::INFINITY;
    let mut witness = None;
    let mut scale = 0.0f64;
    for row in rows.into_iter().flatten() {
        scale = scale.max(row.2);
        if row.0 < margin {
            margin = row.0;
            witness = Some(row.1);
        }
    }
    let witness = witness.ok_or_else(|| {
        AxiError::Config("condition grid has no points inside the chart domain".into())
    })?;
    if !margin.is_finite() {
        return Err(AxiError::Numeric(format!(
            "non-finite condition margin at ({}, {})",
            witness.rho, witness.z
        )));
    }
    Ok(ConditionVerdict { holds: margin >= -hold_tolerance(scale), margin, witness })
}

/// Radial monotonicity: ∂ρ(α−2u) ≤ 0, margin = min of −∂ρ(α−2u). With
/// `at_rho0` the scan restricts to the single cylinder ρ = ρ₀.
pub fn radial_monotonicity(
    metric: &AxiMetric,
    at_rho0: Option<f64>,
    grid: &ConditionGrid,
) -> Result<ConditionVerdict> {
    let g = match at_rho0 {
        Some(r) => grid.at_rho(r),
        None => grid.clone(),
    };
    scan_min(metric, &g, |m, p| {
        let ju = m.u.jet_at(p);
        let ja = m.alpha.jet_at(p);
        -(ja.dr - 2.0 * ju.dr)
    })
}

/// Area-enlarging at ρ₀ (or everywhere): α − 2u ≥ 0, margin = its minimum.
pub fn area_enlarging(
    metric: &AxiMetric,
    at_rho0: Option<f64>,
    grid: &ConditionGrid,
) -> Result<ConditionVerdict> {
    let g = match at_rho0 {
        Some(r) => grid.at_rho(r),
        None => grid.clone(),
    };
    scan_min(metric, &g, |m, p| m.alpha.eval(p) - 2.0 * m.u.eval(p))
}

/// Report for the radial-monotonicity ⇒ area-enlarging implication, checked
/// by reconstructing α−2u at the inner cylinder as the integral of
/// −∂ρ(α−2u) in from a far radius where the combination has decayed.
#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct RmAeReport {
    pub rm_margin: f64,
    pub ae_margin: f64,
    /// max over scan lines of |(α−2u)(ρ₀,z) − ∫ reconstruction|.
    pub reconstruction_error: f64,
    pub r_far: f64,
    pub holds: bool,
}

/// Verify the implication on the grid: requires radial monotonicity to hold
/// (precondition), then checks line by line that
/// (α−2u)(ρ₀, z) ≈ −∫_{ρ₀}^{R_far} ∂ρ(α−2u) dρ ≥ 0.
pub fn rm_implies_ae_check(
    metric: &AxiMetric,
    grid: &ConditionGrid,
    res: &Resolution,
) -> Result<RmAeReport> {
    let rm = radial_monotonicity(metric, None, grid)?;
    if !rm.holds {
        return Err(AxiError::Precondition(format!(
            "radial monotonicity fails on the grid (margin {:.3e} at ({}, {}))",
            rm.margin, rm.witness.rho, rm.witness.z
        )));
    }
    let rho0 = grid.rho.iter().cloned().fold(f64::INFINITY, f64::min);
    // the far boundary term is dropped; |α−2u|(R_far) ≤ 2C/R_far from the
    // declared falloff, so push R_far out until that tail is ≤ 5·10⁻⁴
    let r_far = (1e3_f64).max(50.0 * metric.asym.r0).max(4000.0 * metric.asym.c);
    let mut recon_err = 0.0f64;
    let mut ae_margin = f64::INFINITY;
    for &z in &grid.z {
        let p0 = HalfPlanePoint::at(rho0, z);
        if !metric.in_domain(p0) {
            continue;
        }
        let direct = metric.alpha.eval(p0) - 2.0 * metric.u.eval(p0);
        // log-substitution ρ = e^s keeps nodes dense where the fields vary
        let integral = simpson(
            |s: f64| {
                let rho = s.exp();
                let p = HalfPlanePoint::at(rho, z);
                if !metric.in_domain(p) {
                    return 0.0;
                }
                let ju = metric.u.jet_at(p);
                let ja = metric.alpha.jet_at(p);
                (ja.dr - 2.0 * ju.dr) * rho
            },
            rho0.ln(),
            r_far.ln(),
            res.n_radial,
        );
        let recon = -integral;
        recon_err = recon_err.max((direct - recon).abs());
        ae_margin = ae_margin.min(direct);
    }
    if !ae_margin.is_finite() {
        return Err(AxiError::Config("no scan line of the grid meets the domain".into()));
    }
    let holds = ae_margin >= -hold_tolerance(ae_margin) - recon_err;
    Ok(RmAeReport {
        rm_margin: rm.margin,
        ae_margin,
        reconstruction_error: recon_err,
        r_far,
        holds,
    })
}

/// Sub-inverse-mean-curvature-flow property of the coordinate cylinders:
/// |∇ log ρ|_g ≥ H, margin = min of |∇ log ρ|_g − H. Twist-free charts only.
pub fn sub_imcf_check(metric: &AxiMetric, grid: &ConditionGrid) -> Result<ConditionVerdict> {
    if !metric.ab_identically_zero {
        return Err(AxiError::Precondition(format!(
            "sub-IMCF check needs a twist-free chart; {} has connection terms",
            metric.family_tag
        )));
    }
    scan_min(metric, grid, |m, p| m.sub_imcf_margin(p).unwrap_or(f64::NAN))
}

/// Result of the coordinate-sphere area minimization.
#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct MinimalSphereReport {
    /// Radius of the smallest-area coordinate sphere found.
    pub r_star: f64,
    pub area_star: f64,
    /// False when the area was monotone over the range (minimum sits on an
    /// endpoint) — reported, not fatal.
    pub interior_minimum: bool,
}

/// Minimize Area_g(S_r) over coordinate spheres about the origin for
/// r ∈ [r_lo, r_hi]: coarse log-spaced bracketing scan, then golden-section
/// refinement to relative width 10⁻⁶.
pub fn minimal_coordinate_sphere(
    metric: &AxiMetric,
    r_lo: f64,
    r_hi: f64,
    res: &Resolution,
) -> Result<MinimalSphereReport> {
    if !(r_lo > 0.0 && r_hi > r_lo) {
        return Err(AxiError::Config(format!("bad sphere range [{r_lo}, {r_hi}]")));
    }
    let sphere_area =
        |r: f64| -> Result<f64> { area(metric, &GeneratingCurve::semicircle(0.0, r), res) };
    let n_scan = 33;
    let mut rs = Vec::with_capacity(n_scan);
    let mut vals = Vec::with_capacity(n_scan);
    for i in 0..n_scan {
        let r = r_lo * (r_hi / r_lo).powf(i as f64 / (n_scan - 1) as f64);
        rs.push(r);
        vals.push(sphere_area(r)?);
    }
    let mut i_min = 0;
    for i in 1..n_scan {
        if vals[i] < vals[i_min] {
            i_min = i;
        }
    }
    if i_min == 0 || i_min == n_scan - 1 {
        return Ok(MinimalSphereReport {
            r_star: rs[i_min],
            area_star: vals[i_min],
            interior_minimum: false,
        });
    }
    // golden-section on the bracketing triple
    let phi = (5.0_f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (rs[i_min - 1], rs[i_min + 1]);
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    let mut fc = sphere_area(c)?;
    let mut fd = sphere_area(d)?;
    while (b - a) > 1e-6 * (r_hi - r_lo) {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = sphere_area(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = sphere_area(d)?;
        }
    }
    let r_star = 0.5 * (a + b);
    Ok(MinimalSphereReport { r_star, area_star: sphere_area(r_star)?, interior_minimum: true })
}

/// Report for the horizon location bound ρ_max < 2√2·m and the Penrose mass
/// lower bound m ≥ √(Area/16π). Purely reporting — never errors on a failed
/// bound.
#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct PenroseLocationReport {
    pub mass: f64,
    pub rho_max: f64,
    /// 2√2·m, the cylinder the surface must stay inside.
    pub location_bound: f64,
    pub location_holds: bool,
    pub area: f64,
    /// √(Area/16π): the mass the Penrose inequality demands.
    pub penrose_lower_mass: f64,
    pub penrose_holds: bool,
    /// Whether the generating curve starts and ends on the axis.
    pub surface_closed: bool,
    /// Set when mass ≤ 0: the location bound is vacuous (no-horizon case).
    pub degenerate_mass: bool,
}

pub fn penrose_location_check(
    metric: &AxiMetric,
    surface: &GeneratingCurve,
    mass: f64,
    res: &Resolution,
) -> Result<PenroseLocationReport> {
    surface.validate()?;
    let n = res.n_1d.max(64);
    let mut rho_max = 0.0f64;
    for i in 0..=n {
        rho_max = rho_max.max(surface.point(i as f64 / n as f64).rho);
    }
    let closed_tol = 1e-9 * (1.0 + rho_max);
    let surface_closed =
        surface.point(0.0).rho <= closed_tol && surface.point(1.0).rho <= closed_tol;
    let a = area(metric, surface, res)?;
    let location_bound = 2.0 * 2.0_f64.sqrt() * mass;
    let penrose_lower_mass = (a / (16.0 * std::f64::consts::PI)).sqrt();
    Ok(PenroseLocationReport {
        mass,
        rho_max,
        location_bound,
        location_holds: rho_max < location_bound,
        area: a,
        penrose_lower_mass,
        penrose_holds: mass >= penrose_lower_mass * (1.0 - 1e-9),
        surface_closed,
        degenerate_mass: mass <= 0.0,
    })
}
