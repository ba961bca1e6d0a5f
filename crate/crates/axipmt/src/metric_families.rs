//! Closed-form metric families: the charged rotating black-hole exterior in
//! its Weyl chart (via prolate spheroidal coordinates), conformally flat
//! multi-puncture "geometrostatic" data, flat space, and compactly supported
//! bump perturbations. Every family evaluates its potentials through
//! second-order jets, so all derivatives used downstream are exact to
//! rounding.

use crate::error::{AxiError, Result};
use crate::field_core::{HalfPlanePoint, ScalarField2D};
use crate::jet::Jet2;
use crate::metric_model::{AsymConstants, AxiMetric};

/// Exclusion margin around the rod {ρ = 0, |z| ≤ k}: the chart requires
/// x ≥ 1 + this.
pub const KN_X_FLOOR: f64 = 1e-8;

/// Parameters of the charged rotating family, sub-extremal: m² > a² + e².
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct KerrNewmanParams {
    /// Mass m > 0.
    pub m: f64,
    /// Angular-momentum parameter a.
    pub a: f64,
    /// Charge parameter e.
    pub e: f64,
}

impl KerrNewmanParams {
    pub fn new(m: f64, a: f64, e: f64) -> Result<Self> {
        let p = KerrNewmanParams { m, a, e };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.m > 0.0) {
            return Err(AxiError::Config(format!("mass must be positive, got {}", self.m)));
        }
        if self.m * self.m <= self.a * self.a + self.e * self.e {
            return Err(AxiError::Config(format!(
                "sub-extremality m² > a² + e² violated: m={}, a={}, e={}",
                self.m, self.a, self.e
            )));
        }
        Ok(())
    }

    /// k = √(m² − a² − e²), half the rod length.
    pub fn k(&self) -> f64 {
        (self.m * self.m - self.a * self.a - self.e * self.e).sqrt()
    }
}

/// Prolate spheroidal coordinates of a half-plane point: x ≥ 1, |y| ≤ 1,
/// with ρ² = k²(x²−1)(1−y²) and z = kxy.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ProlateSpheroidal {
    pub x: f64,
    pub y: f64,
}

/// Forward map (ρ, z) → (x, y):
/// x = (r₊ + r₋)/(2k), y = (r₊ − r₋)/(2k) with r_± = √(ρ² + (z ± k)²).
/// Errors on (a neighborhood of) the rod segment {ρ = 0, |z| ≤ k}.
pub fn to_prolate(params: &KerrNewmanParams, point: HalfPlanePoint) -> Result<ProlateSpheroidal> {
    let k = params.k();
    let rp = (point.rho * point.rho + (point.z + k).powi(2)).sqrt();
    let rm = (point.rho * point.rho + (point.z - k).powi(2)).sqrt();
    let x = (rp + rm) / (2.0 * k);
    let y = (rp - rm) / (2.0 * k);
    if x < 1.0 + KN_X_FLOOR {
        return Err(AxiError::OutOfDomain(format!(
            "({}, {}) lies on the horizon rod segment (x = {x})",
            point.rho, point.z
        )));
    }
    Ok(ProlateSpheroidal { x, y })
}

/// Inverse map (x, y) → (ρ, z).
pub fn from_prolate(params: &KerrNewmanParams, ps: ProlateSpheroidal) -> HalfPlanePoint {
    let k = params.k();
    let rho = k * ((ps.x * ps.x - 1.0).max(0.0) * (1.0 - ps.y * ps.y).max(0.0)).sqrt();
    HalfPlanePoint::at(rho, k * ps.x * ps.y)
}

/// (x, y) as jets in (ρ, z).
fn kn_xy_jets(rho: Jet2, z: Jet2, k: f64) -> (Jet2, Jet2) {
    let rp = (rho.sq() + (z + k).sq()).sqrt();
    let rm = (rho.sq() + (z - k).sq()).sqrt();
    let s = 0.5 / k;
    ((rp + rm) * s, (rp - rm) * s)
}

/// The potentials (u, α) as jet expressions in prolate coordinates. The
/// Killing-norm display is used in its rod-regular form
/// e^{−2u} = D/(Δ·Σ) with Σ = (kx+m)² + a²y², Δ = k²(x²−1),
/// D = ((kx+m)² + a²)² − a²k²(x²−1)(1−y²), which is the displayed
/// ρ²-quotient rewritten through ρ² = k²(x²−1)(1−y²); and
/// α = ½ log(Σ/(k²(x²−y²))) + u.
pub(crate) fn kn_potentials_xy(x: Jet2, y: Jet2, p: &KerrNewmanParams) -> (Jet2, Jet2) {
    let (m, a) = (p.m, p.a);
    let k = p.k();
    let kxm = x * k + m;
    let sigma = kxm.sq() + y.sq() * (a * a);
    let delta = (x.sq() - 1.0) * (k * k);
    let dbig = (kxm.sq() + a * a).sq() - (x.sq() - 1.0) * (-y.sq() + 1.0) * (a * a * k * k);
    let u = (dbig / (delta * sigma)).ln() * (-0.5);
    let alpha = (sigma / ((x.sq() - y.sq()) * (k * k))).ln() * 0.5 + u;
    (u, alpha)
}

/// The exterior 3-metric of the charged rotating family in the Weyl chart.
/// The induced slice is twist-free (A ≡ B ≡ 0); the chart domain excludes a
/// thin neighborhood of the rod (x ≥ 1 + 10⁻⁸).
pub fn kerr_newman_metric(params: &KerrNewmanParams) -> Result<AxiMetric> {
    params.validate()?;
    let p = *params;
    let k = p.k();
    let u = ScalarField2D::closed_form(move |r, z| {
        let (x, y) = kn_xy_jets(r, z, k);
        kn_potentials_xy(x, y, &p).0
    });
    let alpha = ScalarField2D::closed_form(move |r, z| {
        let (x, y) = kn_xy_jets(r, z, k);
        kn_potentials_xy(x, y, &p).1
    });
    let asym = AsymConstants::new(2.0 * p.m, p.m + k, None);
    let tag = format!("kerr-newman(m={}, a={}, e={})", p.m, p.a, p.e);
    Ok(AxiMetric::twist_free(u, alpha, asym, tag).with_domain(move |rho, z| {
        let rp = (rho * rho + (z + k).powi(2)).sqrt();
        let rm = (rho * rho + (z - k).powi(2)).sqrt();
        (rp + rm) / (2.0 * k) >= 1.0 + KN_X_FLOOR
    }))
}

/// One puncture of a geometrostatic chart: axis position and the two
/// conformal charges.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Puncture {
    pub z: f64,
    pub a: f64,
    pub b: f64,
}

/// A conformally flat multi-puncture chart: χ = 1 + Σ aᵢ/rᵢ,
/// ψ = 1 + Σ bᵢ/rᵢ, u = −log(χψ), α ≡ 0.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct GeometrostaticParams {
    pub punctures: Vec<Puncture>,
}

impl GeometrostaticParams {
    pub fn new(punctures: Vec<Puncture>) -> Result<Self> {
        let p = GeometrostaticParams { punctures };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.punctures.is_empty() {
            return Err(AxiError::Config("at least one puncture is required".into()));
        }
        for (i, p) in self.punctures.iter().enumerate() {
            if !(p.a > 0.0 && p.b > 0.0) {
                return Err(AxiError::Config(format!(
                    "puncture {i} needs a > 0 and b > 0, got a={}, b={}",
                    p.a, p.b
                )));
            }
            if !p.z.is_finite() {
                return Err(AxiError::Config(format!("puncture {i} has non-finite z")));
            }
        }
        for i in 0..self.punctures.len() {
            for j in (i + 1)..self.punctures.len() {
                if self.punctures[i].z == self.punctures[j].z {
                    return Err(AxiError::Config(format!(
                        "punctures {i} and {j} coincide at z = {}",
                        self.punctures[i].z
                    )));
                }
            }
        }
        Ok(())
    }

    /// Total mass Σ(aᵢ + bᵢ) carried by the two conformal factors.
    pub fn adm_mass(&self) -> f64 {
        self.punctures.iter().map(|p| p.a + p.b).sum()
    }

    fn z_extent(&self) -> f64 {
        self.punctures.iter().map(|p| p.z.abs()).fold(0.0, f64::max)
    }
}

/// Radius of the excluded neighborhood around each puncture.
fn puncture_eps(total: f64) -> f64 {
    1e-9 * (1.0 + total)
}

pub fn geometrostatic_metric(params: &GeometrostaticParams) -> Result<AxiMetric> {
    params.validate()?;
    let punct: Vec<Puncture> = params.punctures.clone();
    let total = params.adm_mass();
    let eps = puncture_eps(total);
    let pu = punct.clone();
    let u = ScalarField2D::closed_form(move |r, z| {
        let mut chi = Jet2::cst(1.0);
        let mut psi = Jet2::cst(1.0);
        for p in &pu {
            let ri = (r.sq() + (z - p.z).sq()).sqrt();
            let inv = ri.recip();
            chi = chi + inv * p.a;
            psi = psi + inv * p.b;
        }
        -(chi * psi).ln()
    });
    let asym = AsymConstants::new(
        2.0 * total,
        (4.0 * params.z_extent()).max(2.0 * total).max(1.0),
        Some(1.0),
    );
    let tag = format!("geometrostatic({} punctures, mass={})", punct.len(), total);
    Ok(AxiMetric::twist_free(u, ScalarField2D::zero(), asym, tag).with_domain(move |rho, z| {
        punct.iter().all(|p| (rho * rho + (z - p.z).powi(2)).sqrt() > eps)
    }))
}

/// Flat space in cylindrical coordinates: u = α = 0.
pub fn flat_metric() -> AxiMetric {
    AxiMetric::twist_free(
        ScalarField2D::zero(),
        ScalarField2D::zero(),
        AsymConstants::new(0.0, 1.0, Some(1.0)),
        "flat",
    )
}

/// A compactly supported C² bump amp·(1 − s²)³ with
/// s = |(ρ, z) − center| / radius, vanishing for s ≥ 1.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct BumpSpec {
    pub amplitude: f64,
    pub center_rho: f64,
    pub center_z: f64,
    pub radius: f64,
}

impl BumpSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.radius > 0.0 && self.radius.is_finite()) || !self.amplitude.is_finite() {
            return Err(AxiError::Config(format!(
                "bump needs finite amplitude and positive finite radius, got amp={}, rad={}",
                self.amplitude, self.radius
            )));
        }
        if self.center_rho - self.radius <= 0.0 {
            return Err(AxiError::Config(format!(
                "bump support [{}, {}] reaches the axis",
                self.center_rho - self.radius,
                self.center_rho + self.radius
            )));
        }
        Ok(())
    }

    /// Outer spherical radius of the support.
    pub fn support_outer_r(&self) -> f64 {
        (self.center_rho * self.center_rho + self.center_z * self.center_z).sqrt() + self.radius
    }
}

/// The bump as a closed-form field.
pub fn bump_field(spec: &BumpSpec) -> Result<ScalarField2D> {
    spec.validate()?;
    let s = *spec;
    Ok(ScalarField2D::closed_form(move |r, z| {
        let s2 = ((r - s.center_rho).sq() + (z - s.center_z).sq()) * (1.0 / (s.radius * s.radius));
        if s2.v >= 1.0 {
            // the cubic in (1 − s²) is C² across the support boundary, so
            // truncating the jet to zero here matches all stored derivatives
            Jet2::cst(0.0)
        } else {
            let t = -s2 + 1.0;
            t.sq() * t * s.amplitude
        }
    }))
}

/// Which potential a bump perturbs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BumpTarget {
    U,
    Alpha,
}

/// Additively perturb `base` by compactly supported bumps on u and/or α.
/// If a bump's support pokes beyond the asymptotic radius R₀, R₀ is grown to
/// re-cover it; the falloff constants themselves are untouched.
pub fn perturb(base: &AxiMetric, bumps: &[(BumpTarget, BumpSpec)]) -> Result<AxiMetric> {
    let mut out = base.clone();
    for (target, spec) in bumps {
        let field = bump_field(spec)?;
        match target {
            BumpTarget::U => out.u = ScalarField2D::sum(&out.u, &field),
            BumpTarget::Alpha => out.alpha = ScalarField2D::sum(&out.alpha, &field),
        }
        let outer = spec.support_outer_r();
        if outer >= out.asym.r0 {
            out.asym.r0 = outer * 1.000001;
        }
    }
    if !bumps.is_empty() {
        out.family_tag = format!("{}+bumps", base.family_tag);
    }
    Ok(out)
}

#[cfg(test)]
// oracle constants are pasted at full precision on purpose
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use crate::field_core::PartialKind;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn kn100() -> KerrNewmanParams {
        KerrNewmanParams::new(1.0, 0.0, 0.0).unwrap()
    }

    fn kn153() -> KerrNewmanParams {
        KerrNewmanParams::new(1.0, 0.5, 0.3).unwrap()
    }

    #[test]
    fn params_validation() {
        assert!(KerrNewmanParams::new(1.0, 0.8, 0.7).is_err());
        assert!(KerrNewmanParams::new(-1.0, 0.0, 0.0).is_err());
        assert_relative_eq!(kn153().k(), 0.81240384046359604, max_relative = 1e-15);
    }

    #[test]
    fn prolate_map_examples() {
        let p = kn100();
        let ps = to_prolate(&p, HalfPlanePoint::at(3.0_f64.sqrt(), 0.0)).unwrap();
        assert_relative_eq!(ps.x, 2.0, epsilon = 1e-14);
        assert_eq!(ps.y, 0.0); // z = 0 gives y = 0 exactly
        let ps = to_prolate(&p, HalfPlanePoint::at(0.0, 2.0)).unwrap();
        assert_relative_eq!(ps.x, 2.0, epsilon = 1e-14);
        assert_relative_eq!(ps.y, 1.0, epsilon = 1e-14);
        // far midplane points keep y = 0 exactly
        let ps = to_prolate(&p, HalfPlanePoint::at(4e3, 0.0)).unwrap();
        assert_eq!(ps.y, 0.0);
        // rod segment is rejected
        assert!(to_prolate(&p, HalfPlanePoint::at(0.0, 0.3)).is_err());
    }

    #[test]
    fn prolate_round_trip_1e10() {
        let p = kn153();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let rho = rng.gen_range(0.05..6.0);
            let z = rng.gen_range(-6.0..6.0);
            let pt = HalfPlanePoint::at(rho, z);
            let ps = to_prolate(&p, pt).unwrap();
            assert!(ps.x >= 1.0 && ps.y.abs() <= 1.0 + 1e-15);
            let back = from_prolate(&p, ps);
            let scale = pt.r().max(1.0);
            assert!(
                (back.rho - pt.rho).abs() / scale < 1e-10 && (back.z - pt.z).abs() / scale < 1e-10,
                "round trip ({rho}, {z}) -> ({}, {})",
                back.rho,
                back.z
            );
        }
    }

    #[test]
    fn schwarzschild_chart_frozen_values() {
        let m = kerr_newman_metric(&kn100()).unwrap();
        let p = HalfPlanePoint::at(3.0_f64.sqrt(), 0.0);
        assert_relative_eq!(m.u.eval(p), -0.54930614433405485, max_relative = 1e-14);
        assert_relative_eq!(m.alpha.eval(p), -0.14384103622589046, max_relative = 1e-13);
        let am2u = m.alpha.eval(p) - 2.0 * m.u.eval(p);
        assert_relative_eq!(am2u, 0.95477125244221923, max_relative = 1e-13);
        let g = m.assemble(p).unwrap();
        assert_relative_eq!(g.g_rr, 2.25, max_relative = 1e-13);
        assert_relative_eq!(g.g_pp, 9.0, max_relative = 1e-13);
        // e^{-2u} = (x+1)/(x-1) = 3 at x = 2
        assert_relative_eq!((-2.0 * m.u.eval(p)).exp(), 3.0, max_relative = 1e-13);
        let d_am2u = m.alpha.partial(p, PartialKind::Rho).unwrap()
            - 2.0 * m.u.partial(p, PartialKind::Rho).unwrap();
        assert_relative_eq!(d_am2u, -0.43301270189221932, max_relative = 1e-12);
        assert_relative_eq!(
            m.mean_curvature_rho_level(p).unwrap(),
            0.096225044864937627,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            m.grad_rho_norm(p).unwrap() / p.rho,
            0.38490017945975051,
            max_relative = 1e-13
        );
        // vacuum chart is scalar-flat
        assert_abs_diff_eq!(m.brill_scalar_curvature(p).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn charged_rotating_chart_frozen_jets() {
        let m = kerr_newman_metric(&kn153()).unwrap();
        let p21 = HalfPlanePoint::at(2.0, 1.0);
        let ju = m.u.jet_at(p21);
        let ja = m.alpha.jet_at(p21);
        assert_relative_eq!(ju.v, -0.43364702640589563, max_relative = 1e-13);
        assert_relative_eq!(ja.v, -0.066730364899169533, max_relative = 1e-13);
        assert_relative_eq!(ju.dr, 0.16856678959499986, max_relative = 1e-12);
        assert_relative_eq!(ju.dz, 0.076560787472173580, max_relative = 1e-12);
        assert_relative_eq!(ja.dr, 0.039864251997043291, max_relative = 1e-12);
        assert_relative_eq!(ja.dz, 0.045839392190952483, max_relative = 1e-12);
        assert_relative_eq!(ju.drr, -0.11858033013925281, max_relative = 1e-11);
        assert_relative_eq!(ju.dzz, 0.040654948441413024, max_relative = 1e-11);
        assert_relative_eq!(
            m.brill_scalar_curvature(p21).unwrap(),
            0.0037686187957700818,
            max_relative = 1e-10
        );
        assert_relative_eq!(
            m.mean_curvature_rho_level(p21).unwrap(),
            0.14046547116000787,
            max_relative = 1e-12
        );
        let id = m.rho_equation_residual(p21).unwrap();
        assert_relative_eq!(id.laplacian_route, 0.15910955488809170, max_relative = 1e-12);
        assert!(id.residual.abs() < 1e-13);

        let p207 = HalfPlanePoint::at(2.0, 0.7);
        let ju = m.u.jet_at(p207);
        let ja = m.alpha.jet_at(p207);
        assert_relative_eq!(ju.v, -0.45440648274129954, max_relative = 1e-13);
        assert_relative_eq!(ja.v, -0.079981751459026, max_relative = 1e-12);
        assert_relative_eq!(ju.dr, 0.19254147821222744, max_relative = 1e-12);
        assert_relative_eq!(ju.drr, -0.15372076232097896, max_relative = 1e-11);
        assert_relative_eq!(ja.dz, 0.041109842230010160, max_relative = 1e-12);
        assert_relative_eq!(
            m.brill_scalar_curvature(p207).unwrap(),
            0.0047049814916807844,
            max_relative = 1e-10
        );
        let d_am2u = ja.dr - 2.0 * ju.dr;
        assert_relative_eq!(d_am2u, -0.32646807600358183, max_relative = 1e-12);
    }

    #[test]
    fn rho_partial_agrees_with_prolate_identity() {
        // the chart's ∂ρ must satisfy ∂ρ = [ρ/(r₊r₋)](x ∂x − y ∂y); the
        // right side is evaluated with jets seeded in (x, y) instead
        let params = kn153();
        let k = params.k();
        let m = kerr_newman_metric(&params).unwrap();
        for &(rho, z) in &[(2.0, 1.0), (2.0, 0.7), (1.3, -0.4), (0.9, 2.2)] {
            let p = HalfPlanePoint::at(rho, z);
            let ps = to_prolate(&params, p).unwrap();
            let (uxy, axy) = kn_potentials_xy(Jet2::var_rho(ps.x), Jet2::var_z(ps.y), &params);
            let rp = (rho * rho + (z + k).powi(2)).sqrt();
            let rm = (rho * rho + (z - k).powi(2)).sqrt();
            let f = rho / (rp * rm);
            let u_rho_identity = f * (ps.x * uxy.dr - ps.y * uxy.dz);
            let a_rho_identity = f * (ps.x * axy.dr - ps.y * axy.dz);
            assert_relative_eq!(
                m.u.partial(p, PartialKind::Rho).unwrap(),
                u_rho_identity,
                max_relative = 1e-11
            );
            assert_relative_eq!(
                m.alpha.partial(p, PartialKind::Rho).unwrap(),
                a_rho_identity,
                max_relative = 1e-11
            );
        }
    }

    #[test]
    fn far_field_u_decay() {
        for params in [kn100(), kn153()] {
            let m = kerr_newman_metric(&params).unwrap();
            for &(rho, z) in &[(1e4, 0.0), (7071.0, 7071.0), (0.5, 1e4)] {
                let u = m.u.eval(HalfPlanePoint::at(rho, z));
                assert!(u.abs() < 1e-3, "u = {u} at ({rho}, {z})");
            }
        }
        let m = kerr_newman_metric(&kn153()).unwrap();
        assert_relative_eq!(
            m.u.eval(HalfPlanePoint::at(1e4, 0.0)),
            -9.9999550003282017e-5,
            max_relative = 1e-10
        );
    }

    #[test]
    fn schwarzschild_killing_norm_identity_random() {
        // ρ²e^{−2u} = m²(x+1)²(1−y²) at a = e = 0
        let params = KerrNewmanParams::new(1.7, 0.0, 0.0).unwrap();
        let m = kerr_newman_metric(&params).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let rho = rng.gen_range(0.2..8.0);
            let z = rng.gen_range(-8.0..8.0);
            let p = HalfPlanePoint::at(rho, z);
            let ps = to_prolate(&params, p).unwrap();
            let lhs = rho * rho * (-2.0 * m.u.eval(p)).exp();
            let rhs = params.m * params.m * (ps.x + 1.0).powi(2) * (1.0 - ps.y * ps.y);
            assert_relative_eq!(lhs, rhs, max_relative = 1e-11);
        }
    }

    #[test]
    fn kn_radial_monotonicity_is_strict_on_grid() {
        let m = kerr_newman_metric(&kn153()).unwrap();
        for i in 0..40 {
            for j in 0..40 {
                let rho = 0.9 * (10.0f64 / 0.9).powf(i as f64 / 39.0);
                let z = -10.0 + 20.0 * j as f64 / 39.0;
                let p = HalfPlanePoint::at(rho, z);
                let d = m.alpha.partial(p, PartialKind::Rho).unwrap()
                    - 2.0 * m.u.partial(p, PartialKind::Rho).unwrap();
                assert!(d < 0.0, "∂ρ(α - 2u) = {d} at ({rho}, {z})");
            }
        }
    }

    #[test]
    fn geometrostatic_frozen_values_and_signs() {
        let single = GeometrostaticParams::new(vec![Puncture { z: 0.0, a: 0.5, b: 0.5 }]).unwrap();
        let m = geometrostatic_metric(&single).unwrap();
        assert_relative_eq!(
            m.u.eval(HalfPlanePoint::at(3.0, 4.0)),
            -0.19062035960864972,
            max_relative = 1e-14
        );
        assert_relative_eq!(single.adm_mass(), 1.0);

        // equal punctures are scalar-flat
        let two = GeometrostaticParams::new(vec![
            Puncture { z: -1.0, a: 0.3, b: 0.3 },
            Puncture { z: 1.0, a: 0.3, b: 0.3 },
        ])
        .unwrap();
        let m2 = geometrostatic_metric(&two).unwrap();
        assert_relative_eq!(
            m2.u.eval(HalfPlanePoint::at(2.0, 0.5)),
            -0.47096838286943166,
            max_relative = 1e-14
        );
        assert_abs_diff_eq!(
            m2.brill_scalar_curvature(HalfPlanePoint::at(2.0, 0.5)).unwrap(),
            0.0,
            epsilon = 1e-12
        );

        // unequal punctures give strictly positive curvature
        let uneq = GeometrostaticParams::new(vec![
            Puncture { z: -1.0, a: 0.3, b: 0.2 },
            Puncture { z: 1.0, a: 0.1, b: 0.4 },
        ])
        .unwrap();
        let m3 = geometrostatic_metric(&uneq).unwrap();
        assert_relative_eq!(
            m3.brill_scalar_curvature(HalfPlanePoint::at(1.5, 0.3)).unwrap(),
            0.0039341117179574,
            max_relative = 1e-10
        );
        assert_relative_eq!(uneq.adm_mass(), 1.0);
    }

    #[test]
    fn geometrostatic_u_negative_and_alpha_m2u_nonneg() {
        let two = GeometrostaticParams::new(vec![
            Puncture { z: -0.7, a: 0.2, b: 0.4 },
            Puncture { z: 0.9, a: 0.3, b: 0.1 },
        ])
        .unwrap();
        let m = geometrostatic_metric(&two).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..200 {
            let p = HalfPlanePoint::at(rng.gen_range(0.0..6.0), rng.gen_range(-6.0..6.0));
            if !m.in_domain(p) {
                continue;
            }
            let u = m.u.eval(p);
            assert!(u < 0.0, "u = {u} at ({}, {})", p.rho, p.z);
            // α − 2u = 2 log(χψ) ≥ 0
            assert!(m.alpha.eval(p) - 2.0 * u >= 0.0);
        }
    }

    #[test]
    fn geometrostatic_rejects_bad_configs() {
        assert!(GeometrostaticParams::new(vec![]).is_err());
        assert!(GeometrostaticParams::new(vec![Puncture { z: 0.0, a: 0.0, b: 0.5 }]).is_err());
        assert!(GeometrostaticParams::new(vec![
            Puncture { z: 0.5, a: 0.1, b: 0.1 },
            Puncture { z: 0.5, a: 0.2, b: 0.2 },
        ])
        .is_err());
        // evaluation at a puncture is outside the chart domain
        let single = GeometrostaticParams::new(vec![Puncture { z: 0.3, a: 0.5, b: 0.5 }]).unwrap();
        let m = geometrostatic_metric(&single).unwrap();
        assert!(!m.in_domain(HalfPlanePoint::at(0.0, 0.3)));
    }

    #[test]
    fn bump_is_c2_and_compact() {
        let spec = BumpSpec { amplitude: 0.1, center_rho: 2.0, center_z: 0.5, radius: 0.8 };
        let f = bump_field(&spec).unwrap();
        assert_relative_eq!(f.eval_raw(2.0, 0.5), 0.1, epsilon = 1e-15);
        assert_eq!(f.eval_raw(3.0, 0.5), 0.0);
        // jets vanish continuously at the support boundary
        let eps = 1e-5;
        let inside = f.jet_at(HalfPlanePoint::at(2.0 + (0.8 - eps), 0.5));
        assert!(inside.v.abs() < 1e-12 && inside.dr.abs() < 1e-7 && inside.drr.abs() < 1e-2);
        let outside = f.jet_at(HalfPlanePoint::at(2.0 + 0.8 + eps, 0.5));
        assert_eq!((outside.v, outside.dr, outside.drr), (0.0, 0.0, 0.0));
    }

    #[test]
    fn bump_validation() {
        assert!(bump_field(&BumpSpec {
            amplitude: 0.1,
            center_rho: 0.5,
            center_z: 0.0,
            radius: 0.5
        })
        .is_err()); // touches the axis
        assert!(bump_field(&BumpSpec {
            amplitude: f64::INFINITY,
            center_rho: 2.0,
            center_z: 0.0,
            radius: 0.5
        })
        .is_err());
    }

    #[test]
    fn perturb_identity_and_superposition() {
        let base = flat_metric();
        let zero = BumpSpec { amplitude: 0.0, center_rho: 2.0, center_z: 0.0, radius: 0.5 };
        let same = perturb(&base, &[(BumpTarget::U, zero)]).unwrap();
        for &(r, z) in &[(0.5, 0.0), (2.0, 0.1), (3.0, -2.0)] {
            assert_eq!(same.u.eval_raw(r, z), base.u.eval_raw(r, z));
        }
        let spec = BumpSpec { amplitude: 0.3, center_rho: 2.0, center_z: 0.0, radius: 0.5 };
        let m = perturb(&base, &[(BumpTarget::Alpha, spec)]).unwrap();
        assert_relative_eq!(m.alpha.eval_raw(2.0, 0.0), 0.3, epsilon = 1e-15);
        assert_eq!(m.u.eval_raw(2.0, 0.0), 0.0);
        assert!(m.ab_identically_zero);
        // support beyond R₀ grows R₀
        let far = BumpSpec { amplitude: 0.1, center_rho: 5.0, center_z: 0.0, radius: 0.5 };
        let m2 = perturb(&base, &[(BumpTarget::U, far)]).unwrap();
        assert!(m2.asym.r0 > 5.4);
    }
}
