//! The axisymmetric metric model: assembly of the 3-metric from its four
//! scalar potentials, Brill's expression for the scalar curvature, the
//! ρ-coordinate identity residual, and the mean curvature of ρ-level sets.
//!
//! The metric on the half-plane chart (ρ, z, φ) is
//!
//! ```text
//!   g = e^{2α−2u}(dρ² + dz²) + ρ² e^{−2u} (dφ + B dρ + A dz)²,
//! ```
//!
//! so |η|_g = ρ e^{−u} for the rotational Killing field η = ∂_φ and
//! |∇ρ|_g = e^{u−α}. All curvature-type quantities are reduced to meridian
//! expressions in (ρ, z); nothing here ever builds a 3D stencil.

use crate::error::{AxiError, Result};
use crate::field_core::{HalfPlanePoint, PartialKind, ScalarField2D};
use crate::jet::Jet2;
use std::sync::Arc;

/// Constants describing the asymptotically flat end: the bounds
/// |u| ≤ C/r and r|∂u| ≤ C/r hold for r ≥ R₀, and when `tau` is set the
/// twist potentials decay like r^{−(1+τ)} as well.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct AsymConstants {
    /// Falloff constant C.
    pub c: f64,
    /// Radius beyond which the asymptotic bounds are claimed.
    pub r0: f64,
    /// Optional strengthened decay exponent.
    pub tau: Option<f64>,
}

impl AsymConstants {
    pub fn new(c: f64, r0: f64, tau: Option<f64>) -> Self {
        AsymConstants { c, r0, tau }
    }
}

/// Components of the assembled 3-metric at a point, in the coordinate basis
/// (∂ρ, ∂z, ∂φ).
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct MetricMatrix {
    pub g_rr: f64,
    pub g_rz: f64,
    pub g_rp: f64,
    pub g_zz: f64,
    pub g_zp: f64,
    pub g_pp: f64,
}

impl MetricMatrix {
    /// Determinant of the 3×3 matrix.
    pub fn det(&self) -> f64 {
        let (a, b, c) = (self.g_rr, self.g_rz, self.g_rp);
        let (d, e) = (self.g_zz, self.g_zp);
        let f = self.g_pp;
        a * (d * f - e * e) - b * (b * f - e * c) + c * (b * e - d * c)
    }

    /// Components of the inverse metric (same ordering).
    pub fn inverse(&self) -> MetricMatrix {
        let det = self.det();
        let (a, b, c) = (self.g_rr, self.g_rz, self.g_rp);
        let (d, e) = (self.g_zz, self.g_zp);
        let f = self.g_pp;
        MetricMatrix {
            g_rr: (d * f - e * e) / det,
            g_rz: (c * e - b * f) / det,
            g_rp: (b * e - c * d) / det,
            g_zz: (a * f - c * c) / det,
            g_zp: (b * c - a * e) / det,
            g_pp: (a * d - b * b) / det,
        }
    }

    pub fn as_rows(&self) -> [[f64; 3]; 3] {
        [
            [self.g_rr, self.g_rz, self.g_rp],
            [self.g_rz, self.g_zz, self.g_zp],
            [self.g_rp, self.g_zp, self.g_pp],
        ]
    }
}

/// Both evaluations of the ρ-coordinate identity and their difference.
///
/// The identity states Δ_g ρ = ⟨∇ρ, ∇|η|²⟩ / (2|η|²); the two sides are
/// computed along genuinely different numerical routes (the Laplacian route
/// differentiates ρe^{−u}, the inner-product route differentiates
/// |η|² = ρ²e^{−2u}), so the residual measures real derivative error rather
/// than algebraic identity.
#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct RhoIdentity {
    pub laplacian_route: f64,
    pub inner_product_route: f64,
    pub residual: f64,
}

type DomainFn = dyn Fn(f64, f64) -> bool + Send + Sync;

/// An axisymmetric metric given by its four potential fields.
#[derive(Clone)]
pub struct AxiMetric {
    /// The Killing-norm potential u (|η|_g = ρe^{−u}).
    pub u: ScalarField2D,
    /// The conformal potential α on the meridian factor.
    pub alpha: ScalarField2D,
    /// Twist component A (the dz leg of the connection form).
    pub a: ScalarField2D,
    /// Twist component B (the dρ leg of the connection form).
    pub b: ScalarField2D,
    /// Asymptotic-flatness constants of this chart.
    pub asym: AsymConstants,
    /// Short human-readable family label for messages and reports.
    pub family_tag: String,
    /// Optional chart-domain predicate (points outside are rejected).
    pub domain: Option<Arc<DomainFn>>,
    /// Set when A and B are exactly the zero fields, enabling the
    /// twist-free fast paths and the ρ-identity precondition.
    pub ab_identically_zero: bool,
}

impl std::fmt::Debug for AxiMetric {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("AxiMetric")
            .field("family_tag", &self.family_tag)
            .field("asym", &self.asym)
            .field("ab_identically_zero", &self.ab_identically_zero)
            .finish()
    }
}

impl AxiMetric {
    /// A twist-free metric (A ≡ B ≡ 0).
    pub fn twist_free(
        u: ScalarField2D,
        alpha: ScalarField2D,
        asym: AsymConstants,
        family_tag: impl Into<String>,
    ) -> Self {
        AxiMetric {
            u,
            alpha,
            a: ScalarField2D::zero(),
            b: ScalarField2D::zero(),
            asym,
            family_tag: family_tag.into(),
            domain: None,
            ab_identically_zero: true,
        }
    }

    /// A general chart with connection potentials A, B.
    pub fn with_twist(
        u: ScalarField2D,
        alpha: ScalarField2D,
        a: ScalarField2D,
        b: ScalarField2D,
        asym: AsymConstants,
        family_tag: impl Into<String>,
    ) -> Self {
        AxiMetric {
            u,
            alpha,
            a,
            b,
            asym,
            family_tag: family_tag.into(),
            domain: None,
            ab_identically_zero: false,
        }
    }

    /// Attach a chart-domain predicate.
    pub fn with_domain<F>(mut self, d: F) -> Self
    where
        F: Fn(f64, f64) -> bool + Send + Sync + 'static,
    {
        self.domain = Some(Arc::new(d));
        self
    }

    /// The ρ floor below which curvature-type quantities are refused
    /// (coordinate degeneracy on the axis).
    pub fn rho_floor(&self) -> f64 {
        1e-6 * self.asym.r0.clamp(1e-30, 1e24)
    }

    /// Membership in the chart domain (always true when no predicate is set).
    pub fn in_domain(&self, p: HalfPlanePoint) -> bool {
        p.rho >= 0.0 && self.domain.as_ref().is_none_or(|d| d(p.rho, p.z))
    }

    fn require_domain(&self, p: HalfPlanePoint) -> Result<()> {
        if !self.in_domain(p) {
            return Err(AxiError::OutOfDomain(format!(
                "({}, {}) is outside the {} chart domain",
                p.rho, p.z, self.family_tag
            )));
        }
        Ok(())
    }

    fn require_off_axis(&self, p: HalfPlanePoint) -> Result<()> {
        self.require_domain(p)?;
        let floor = self.rho_floor();
        if p.rho < floor {
            return Err(AxiError::OutOfDomain(format!(
                "rho = {} is below the axis floor {floor:.3e}; curvature-type \
                 quantities degenerate on the axis",
                p.rho
            )));
        }
        Ok(())
    }

    /// |η|_g = ρ e^{−u}.
    pub fn eta_norm(&self, p: HalfPlanePoint) -> Result<f64> {
        self.require_domain(p)?;
        Ok(p.rho * (-self.u.eval(p)).exp())
    }

    /// |∇ρ|_g = e^{u−α}.
    pub fn grad_rho_norm(&self, p: HalfPlanePoint) -> Result<f64> {
        self.require_domain(p)?;
        Ok((self.u.eval(p) - self.alpha.eval(p)).exp())
    }

    /// The meridian curl B_z − A_ρ entering the twist energy density.
    pub fn twist_curl(&self, p: HalfPlanePoint) -> Result<f64> {
        if self.ab_identically_zero {
            return Ok(0.0);
        }
        Ok(self.b.partial(p, PartialKind::Z)? - self.a.partial(p, PartialKind::Rho)?)
    }

    /// Assemble the coordinate components of g at a point.
    pub fn assemble(&self, p: HalfPlanePoint) -> Result<MetricMatrix> {
        self.require_domain(p)?;
        let u = self.u.eval(p);
        let al = self.alpha.eval(p);
        let e2 = (2.0 * al - 2.0 * u).exp();
        let v = p.rho * p.rho * (-2.0 * u).exp();
        let (av, bv) =
            if self.ab_identically_zero { (0.0, 0.0) } else { (self.a.eval(p), self.b.eval(p)) };
        Ok(MetricMatrix {
            g_rr: e2 + v * bv * bv,
            g_rz: v * av * bv,
            g_rp: v * bv,
            g_zz: e2 + v * av * av,
            g_zp: v * av,
            g_pp: v,
        })
    }

    /// Scalar curvature via Brill's meridian expression
    ///
    /// ```text
    ///   R = 4 e^{2(u−α)} [ Δ(u − α/2) − ½|∇u|² + α_ρ/(2ρ)
    ///                      − (ρ² e^{−2α}/8)(B_z − A_ρ)² ],
    /// ```
    ///
    /// with Δf = f_ρρ + f_zz + f_ρ/ρ the flat axisymmetric Laplacian and
    /// |∇u|² = u_ρ² + u_z² the flat gradient, all on the meridian.
    pub fn brill_scalar_curvature(&self, p: HalfPlanePoint) -> Result<f64> {
        self.require_off_axis(p)?;
        let ju = self.u.jet_at(p);
        let ja = self.alpha.jet_at(p);
        let lap = |j: &Jet2| -> f64 { j.drr + j.dzz + j.dr / p.rho };
        let bracket = lap(&ju) - 0.5 * lap(&ja) - 0.5 * (ju.dr * ju.dr + ju.dz * ju.dz)
            + ja.dr / (2.0 * p.rho);
        let twist = if self.ab_identically_zero {
            0.0
        } else {
            let curl = self.twist_curl(p)?;
            -(p.rho * p.rho * (-2.0 * ja.v).exp() / 8.0) * curl * curl
        };
        let r = 4.0 * (2.0 * (ju.v - ja.v)).exp() * (bracket + twist);
        if !r.is_finite() {
            return Err(AxiError::Numeric(format!(
                "non-finite scalar curvature at ({}, {})",
                p.rho, p.z
            )));
        }
        Ok(r)
    }

    /// Both routes through the ρ-coordinate identity
    /// Δ_g ρ = ⟨∇ρ, ∇|η|²⟩ / (2|η|²) and their residual.
    ///
    /// Requires the twist-free chart (A ≡ B ≡ 0).
    pub fn rho_equation_residual(&self, p: HalfPlanePoint) -> Result<RhoIdentity> {
        if !self.ab_identically_zero {
            return Err(AxiError::Precondition(format!(
                "the ρ-coordinate identity residual is defined for twist-free charts; \
                 {} has nonzero connection components",
                self.family_tag
            )));
        }
        self.require_off_axis(p)?;
        let u = self.u.eval(p);
        let al = self.alpha.eval(p);
        // Laplacian route: Δ_g ρ = (e^{3u−2α}/ρ) ∂_ρ(ρ e^{−u})
        let w_field = self.u.derived(|r, _z, uj| r * (-uj).exp());
        let w_r = w_field.partial(p, PartialKind::Rho)?;
        let laplacian_route = (3.0 * u - 2.0 * al).exp() / p.rho * w_r;
        // inner-product route: g^{ρρ} ∂_ρ(|η|²) / (2|η|²) with |η|² = ρ²e^{−2u}
        let v_field = self.u.derived(|r, _z, uj| r * r * (-(uj + uj)).exp());
        let v_r = v_field.partial(p, PartialKind::Rho)?;
        let v = p.rho * p.rho * (-2.0 * u).exp();
        let inner_product_route = (2.0 * u - 2.0 * al).exp() * v_r / (2.0 * v);
        Ok(RhoIdentity {
            laplacian_route,
            inner_product_route,
            residual: laplacian_route - inner_product_route,
        })
    }

    /// Mean curvature of the ρ-level cylinder through `p` with respect to
    /// the outward normal ∇ρ/|∇ρ|:
    ///
    /// ```text
    ///   H = e^{u−α} ( 1/ρ + ∂_ρ(α − 2u) ),
    /// ```
    ///
    /// normalized so the flat cylinder has H = +1/ρ.
    pub fn mean_curvature_rho_level(&self, p: HalfPlanePoint) -> Result<f64> {
        self.require_off_axis(p)?;
        let u = self.u.eval(p);
        let al = self.alpha.eval(p);
        let du = self.u.partial(p, PartialKind::Rho)?;
        let da = self.alpha.partial(p, PartialKind::Rho)?;
        Ok((u - al).exp() * (1.0 / p.rho + da - 2.0 * du))
    }

    /// The sub-inverse-mean-curvature-flow margin |∇ log ρ|_g − H
    /// = −e^{u−α} ∂_ρ(α − 2u); positive where the ρ-cylinders flow slower
    /// than inverse mean curvature flow.
    pub fn sub_imcf_margin(&self, p: HalfPlanePoint) -> Result<f64> {
        let h = self.mean_curvature_rho_level(p)?;
        Ok(self.grad_rho_norm(p)? / p.rho - h)
    }
}
